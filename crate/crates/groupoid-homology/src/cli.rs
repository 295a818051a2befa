//! Batch command implementations behind the `ghom` binary.
//!
//! Exit-code contract: 0 on success, 2 on parse or input validation errors,
//! 3 when an enumeration cap is exceeded, 4 when a verification suite fails.
//! All output is deterministic; the only wall-clock line is dropped under
//! `--deterministic`. The GHOM_CAP environment variable overrides the
//! default enumeration cap.

use crate::anticech::{anti_cech_homology, build_anti_cech, compare_with_groupoid, ScaleSet};
use crate::colouring::{colouring_homology_table, homotopy_h, homotopy_k, nerve, Colouring};
use crate::complex::homology;
use crate::dad::{dad_witness_to_colouring, search_witness, WitnessSearch};
use crate::error::{Error, Result};
use crate::groupoid::{FiniteAmpleGroupoid, GroupoidSpec};
use crate::matrix::IntMatrix;
use crate::matui::{eg_complex, groupoid_homology_table, matui_complex, matui_eg_identification, resolution_contraction};
use crate::report::{RunReport, EXIT_CAP, EXIT_PARSE, EXIT_VERIFY};
use crate::snf::smith_normal_form;
use crate::ss::DEFAULT_CAP;
use crate::uf::{uf_complex, uf_translation, FiniteMetricSpace};
use num_bigint::BigInt;
use std::path::Path;
use std::sync::Arc;

#[derive(Clone, Copy)]
pub struct CliOptions {
    pub deterministic: bool,
    pub cap: usize,
}

impl CliOptions {
    pub fn new(deterministic: bool) -> CliOptions {
        let cap = std::env::var("GHOM_CAP")
            .ok()
            .and_then(|v| v.parse::<usize>().ok())
            .unwrap_or(DEFAULT_CAP);
        CliOptions { deterministic, cap }
    }
}

fn exit_code_of(e: &Error) -> i32 {
    match e {
        Error::EnumerationCapExceeded { .. } => EXIT_CAP,
        _ => EXIT_PARSE,
    }
}

fn read_file(report: &mut RunReport, path: &Path) -> Option<String> {
    match std::fs::read(path) {
        Ok(bytes) => {
            report.input(&path.display().to_string(), &bytes);
            match String::from_utf8(bytes) {
                Ok(text) => Some(text),
                Err(_) => {
                    report.fail(EXIT_PARSE, format!("error: {} is not UTF-8", path.display()));
                    None
                }
            }
        }
        Err(e) => {
            report.fail(EXIT_PARSE, format!("error: cannot read {}: {e}", path.display()));
            None
        }
    }
}

fn load_groupoid(report: &mut RunReport, path: &Path) -> Option<Arc<FiniteAmpleGroupoid>> {
    let text = read_file(report, path)?;
    match GroupoidSpec::parse_json(&text).and_then(|spec| spec.build()) {
        Ok(g) => Some(Arc::new(g)),
        Err(e) => {
            report.fail(exit_code_of(&e), format!("error: {e}"));
            None
        }
    }
}

fn load_colouring(
    report: &mut RunReport,
    g: &Arc<FiniteAmpleGroupoid>,
    path: &Path,
) -> Option<Colouring> {
    let text = read_file(report, path)?;
    match Colouring::from_json(g, &text) {
        Ok(c) => Some(c),
        Err(e) => {
            report.fail(exit_code_of(&e), format!("error: {e}"));
            None
        }
    }
}

pub fn cmd_homology(path: &Path, max_degree: usize, opts: CliOptions) -> RunReport {
    let mut report = RunReport::new("homology", opts.deterministic);
    let Some(g) = load_groupoid(&mut report, path) else {
        return report;
    };
    match groupoid_homology_table(&g, max_degree, opts.cap) {
        Ok(table) => {
            for (n, h) in table.iter().enumerate() {
                report.line(format!("H_{n} = {h}"));
            }
        }
        Err(e) => report.fail(exit_code_of(&e), format!("error: {e}")),
    }
    report
}

pub fn cmd_snf(path: &Path, opts: CliOptions) -> RunReport {
    let mut report = RunReport::new("snf", opts.deterministic);
    let Some(text) = read_file(&mut report, path) else {
        return report;
    };
    let matrix = match parse_matrix(&text) {
        Ok(m) => m,
        Err(e) => {
            report.fail(EXIT_PARSE, format!("error: {e}"));
            return report;
        }
    };
    let f = smith_normal_form(&matrix);
    let diag: Vec<String> = (0..matrix.rows().min(matrix.cols()))
        .map(|i| f.d.get(i, i).to_string())
        .collect();
    report.line(format!("D = diag({})", diag.join(", ")));
    let rank = diag.iter().filter(|d| d.as_str() != "0").count();
    report.line(format!("rank = {rank}"));
    report
}

fn parse_matrix(text: &str) -> Result<IntMatrix> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or_else(|| Error::Parse("empty matrix file".into()))?;
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse::<usize>().map_err(|_| Error::Parse(format!("bad dimension `{t}`"))))
        .collect::<Result<Vec<_>>>()?;
    let [rows, cols] = dims.as_slice() else {
        return Err(Error::Parse("first line must be `rows cols`".into()));
    };
    let mut m = IntMatrix::zero(*rows, *cols);
    for (i, line) in lines.enumerate() {
        if i >= *rows {
            return Err(Error::Parse("too many matrix rows".into()));
        }
        let entries: Vec<&str> = line.split_whitespace().collect();
        if entries.len() != *cols {
            return Err(Error::Parse(format!("row {i} has {} entries, expected {cols}", entries.len())));
        }
        for (j, t) in entries.iter().enumerate() {
            let v = t
                .parse::<BigInt>()
                .map_err(|_| Error::Parse(format!("bad integer `{t}`")))?;
            m.set(i, j, v);
        }
    }
    Ok(m)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, clap::ValueEnum)]
pub enum VerifySuite {
    Complex,
    Resolution,
    Homotopies,
    Anticech,
}

fn report_certificate(
    report: &mut RunReport,
    name: &str,
    cert: &crate::certificate::ChainMapCertificate,
) {
    match cert.verify() {
        Ok(Ok(())) => report.line(format!("PASS {name}")),
        Ok(Err(d)) => report.fail(
            EXIT_VERIFY,
            format!(
                "FAIL {name} (degree={} row={} col={} lhs={} rhs={})",
                d.degree, d.row, d.col, d.lhs, d.rhs
            ),
        ),
        Err(e) => report.fail(EXIT_VERIFY, format!("FAIL {name} ({e})")),
    }
}

pub fn cmd_verify(
    path: &Path,
    suite: VerifySuite,
    colouring_path: Option<&Path>,
    max_degree: usize,
    opts: CliOptions,
) -> RunReport {
    let mut report = RunReport::new("verify", opts.deterministic);
    let Some(g) = load_groupoid(&mut report, path) else {
        return report;
    };
    let outcome = run_verify_suite(&mut report, &g, suite, colouring_path, max_degree, opts);
    if let Err(e) = outcome {
        report.fail(exit_code_of(&e), format!("error: {e}"));
    }
    report
}

fn run_verify_suite(
    report: &mut RunReport,
    g: &Arc<FiniteAmpleGroupoid>,
    suite: VerifySuite,
    colouring_path: Option<&Path>,
    max_degree: usize,
    opts: CliOptions,
) -> Result<()> {
    match suite {
        VerifySuite::Complex => {
            let m = matui_complex(g, max_degree, opts.cap)?;
            report.line("PASS dd = 0 (composable-tuple complex)".to_string());
            let eg = eg_complex(g, max_degree, opts.cap)?;
            let _ = eg.chain_complex()?;
            report.line("PASS dd = 0 (common-range tuple complex)".to_string());
            let (coinv, mods) = eg.coinvariant_complex()?;
            match matui_eg_identification(&m, &eg, &coinv, &mods) {
                Ok(_) => report.line("PASS coinvariant identification".to_string()),
                Err(e) => report.fail(EXIT_VERIFY, format!("FAIL coinvariant identification ({e})")),
            }
        }
        VerifySuite::Resolution => {
            let cert = resolution_contraction(g, max_degree, opts.cap)?;
            report_certificate(report, "resolution contraction: dh + hd = id", &cert);
        }
        VerifySuite::Homotopies => {
            let Some(cpath) = colouring_path else {
                return Err(Error::Parse("the homotopies suite needs a colouring file".into()));
            };
            let Some(c) = load_colouring(report, g, cpath) else {
                return Ok(());
            };
            let data = nerve(&c, max_degree + 1, opts.cap)?;
            let h = homotopy_h(&data)?;
            report_certificate(report, "h homotopy (chain level): dh + hd = id - i.p", &h.chain_level);
            report_certificate(
                report,
                "h homotopy (coinvariants): dh + hd = id - i.p",
                &h.coinvariant_level,
            );
            let k = homotopy_k(&data)?;
            report_certificate(report, "k homotopy (chain level): dk + kd = id - j.q", &k.chain_level);
            report_certificate(
                report,
                "k homotopy (coinvariants): dk + kd = id - j.q",
                &k.coinvariant_level,
            );
        }
        VerifySuite::Anticech => {
            let steps = suggested_steps(g);
            let seq = build_anti_cech(g, steps, max_degree, opts.cap)?;
            match seq.stabilized_at {
                Some(s) => report.line(format!("PASS anti-Cech sequence stabilizes at step {s}")),
                None => {
                    report.fail(EXIT_VERIFY, "FAIL anti-Cech sequence did not stabilize".to_string());
                    return Ok(());
                }
            }
            let cmp = compare_with_groupoid(&seq, max_degree, opts.cap)?;
            for (n, ha, hg, eq) in &cmp.degrees {
                if *eq {
                    report.line(format!("PASS H_{n}: sequence {ha} = groupoid {hg}"));
                } else {
                    report.fail(EXIT_VERIFY, format!("FAIL H_{n}: sequence {ha} != groupoid {hg}"));
                }
            }
            if cmp.closeness_certified {
                report.line("PASS closeness prisms certify".to_string());
            } else {
                report.fail(EXIT_VERIFY, "FAIL closeness prisms".to_string());
            }
            if cmp.phi_then_psi_identity && cmp.psi_then_phi_identity {
                report.line("PASS comparison maps are mutually inverse on homology".to_string());
            } else {
                report.fail(EXIT_VERIFY, "FAIL comparison maps are not mutually inverse".to_string());
            }
        }
    }
    Ok(())
}

fn suggested_steps(g: &FiniteAmpleGroupoid) -> usize {
    let mut steps = 1;
    while (1usize << steps) < g.n_arrows() {
        steps += 1;
    }
    steps + 2
}

pub fn cmd_colouring_homology(
    groupoid: &Path,
    colouring: &Path,
    max_degree: usize,
    opts: CliOptions,
) -> RunReport {
    let mut report = RunReport::new("colouring-homology", opts.deterministic);
    let Some(g) = load_groupoid(&mut report, groupoid) else {
        return report;
    };
    let Some(c) = load_colouring(&mut report, &g, colouring) else {
        return report;
    };
    report.line(format!("colours = {}", c.parts().len()));
    match colouring_homology_table(&c, max_degree, opts.cap) {
        Ok(table) => {
            for (n, h) in table.iter().enumerate() {
                report.line(format!("H_{n} = {h}"));
            }
        }
        Err(e) => report.fail(exit_code_of(&e), format!("error: {e}")),
    }
    report
}

pub fn cmd_anticech(path: &Path, steps: usize, max_degree: usize, opts: CliOptions) -> RunReport {
    let mut report = RunReport::new("anticech", opts.deterministic);
    let Some(g) = load_groupoid(&mut report, path) else {
        return report;
    };
    let seq = match build_anti_cech(&g, steps, max_degree, opts.cap) {
        Ok(seq) => seq,
        Err(e) => {
            report.fail(exit_code_of(&e), format!("error: {e}"));
            return report;
        }
    };
    for (m, c) in seq.colourings.iter().enumerate() {
        let cover = crate::colouring::cover(c);
        let (coinv, _) = match seq.nerves[m].full.coinvariant_complex() {
            Ok(v) => v,
            Err(e) => {
                report.fail(exit_code_of(&e), format!("error: {e}"));
                return report;
            }
        };
        let hs: Vec<String> = (0..=max_degree)
            .map(|n| format!("H_{n} = {}", homology(&coinv, n)))
            .collect();
        report.line(format!(
            "step {m}: scale={} colours={} cover={} {}",
            seq.scales[m].len(),
            c.parts().len(),
            cover.len(),
            hs.join(" ")
        ));
    }
    match seq.stabilized_at {
        Some(s) => report.line(format!("stabilized at step {s}")),
        None => {
            report.fail(EXIT_VERIFY, "FAIL sequence did not stabilize".to_string());
            return report;
        }
    }
    match (anti_cech_homology(&seq, 0), compare_with_groupoid(&seq, max_degree, opts.cap)) {
        (Ok(_), Ok(cmp)) => {
            if cmp.iso {
                report.line("COMPARISON: ISO".to_string());
            } else {
                report.fail(EXIT_VERIFY, "COMPARISON: FAILED".to_string());
            }
        }
        (Err(e), _) | (_, Err(e)) => report.fail(exit_code_of(&e), format!("error: {e}")),
    }
    report
}

pub fn cmd_dad_colouring(
    groupoid: &Path,
    scale: &Path,
    cap_arrows: Option<usize>,
    dmax: usize,
    opts: CliOptions,
) -> RunReport {
    let mut report = RunReport::new("dad-colouring", opts.deterministic);
    let Some(g) = load_groupoid(&mut report, groupoid) else {
        return report;
    };
    let Some(scale_text) = read_file(&mut report, scale) else {
        return report;
    };
    let ids: Vec<String> = match serde_json::from_str(&scale_text) {
        Ok(v) => v,
        Err(e) => {
            report.fail(EXIT_PARSE, format!("error: scale file: {e}"));
            return report;
        }
    };
    let outcome = (|| -> Result<()> {
        let k = ScaleSet::from_ids(&g, &ids)?.admissible_hull(&g);
        let size_cap = cap_arrows.unwrap_or(g.n_arrows());
        report.line(format!("scale = {} arrows (admissible hull)", k.len()));
        report.line(format!("size-cap = {size_cap}, d-max = {dmax}"));
        let k3 = k.cube(&g);
        match search_witness(&g, &k3, dmax, size_cap)? {
            WitnessSearch::NotFound => {
                report.line(format!("witness: NOT FOUND up to d = {dmax}"));
            }
            WitnessSearch::Found(w) => {
                report.line(format!(
                    "witness: d = {} ({} search)",
                    w.d(),
                    if w.greedy { "greedy" } else { "exact" }
                ));
                for (i, piece) in w.cover.iter().enumerate() {
                    let units: Vec<&str> = piece.iter().map(|&u| g.unit_id(u)).collect();
                    report.line(format!(
                        "  piece {i}: units {{{}}} generates {} arrows",
                        units.join(", "),
                        w.generated[i].len()
                    ));
                }
                let c = dad_witness_to_colouring(&g, &k, &w)?;
                report.line(format!("colouring: {} parts", c.parts().len()));
                for (i, p) in c.parts().iter().enumerate() {
                    report.line(format!("  part {i}: {} arrows", p.len()));
                }
                let lebesgue = crate::anticech::is_k_lebesgue(&c, &k);
                report.line(format!("lebesgue: {}", if lebesgue { "yes" } else { "NO" }));
                let table = colouring_homology_table(&c, w.d() + 2, opts.cap)?;
                for (n, h) in table.iter().enumerate() {
                    report.line(format!("H_{n} = {h}"));
                }
            }
        }
        Ok(())
    })();
    if let Err(e) = outcome {
        report.fail(exit_code_of(&e), format!("error: {e}"));
    }
    report
}

pub fn cmd_uf_homology(path: &Path, max_degree: usize, opts: CliOptions) -> RunReport {
    let mut report = RunReport::new("uf-homology", opts.deterministic);
    let Some(text) = read_file(&mut report, path) else {
        return report;
    };
    let outcome = (|| -> Result<()> {
        let space = FiniteMetricSpace::from_json(&text)?;
        report.line(format!("points = {}", space.len()));
        let complex = uf_complex(&space, max_degree + 1)?;
        for n in 0..=max_degree {
            report.line(format!("H_{n} = {}", homology(&complex, n)));
        }
        let tr = uf_translation(&space, max_degree, opts.cap)?;
        if tr.round_trips_are_identity() && tr.chain_maps_commute() {
            report.line("alpha/beta round trip: PASS".to_string());
        } else {
            report.fail(EXIT_VERIFY, "alpha/beta round trip: FAIL".to_string());
        }
        Ok(())
    })();
    if let Err(e) = outcome {
        report.fail(exit_code_of(&e), format!("error: {e}"));
    }
    report
}
