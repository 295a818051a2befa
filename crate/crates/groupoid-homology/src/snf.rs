//! Smith normal form over the integers.
//!
//! Pivot rule: minimal absolute value, ties broken by (row, col). The
//! algorithm is sequential and fully deterministic; identical inputs give
//! identical transforms. Transform matrices are tracked only on request so
//! rank and invariant-factor queries on large sparse boundary matrices stay
//! cheap.

use crate::matrix::IntMatrix;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};

/// Full Smith decomposition `U * A * V = D` with `U`, `V` unimodular and the
/// diagonal of `D` a non-negative divisibility chain, nonzero entries first.
pub struct SmithForm {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

#[derive(Clone, Copy, Default)]
pub struct SnfOptions {
    pub want_u: bool,
    pub want_v: bool,
    pub want_vinv: bool,
}

pub struct Snf {
    pub rows: usize,
    pub cols: usize,
    /// Nonzero diagonal entries d_1 | d_2 | ... (all positive).
    pub factors: Vec<BigInt>,
    pub rank: usize,
    pub u: Option<IntMatrix>,
    pub v: Option<IntMatrix>,
    pub vinv: Option<IntMatrix>,
}

impl Snf {
    pub fn diagonal_matrix(&self) -> IntMatrix {
        let mut d = IntMatrix::zero(self.rows, self.cols);
        for (i, f) in self.factors.iter().enumerate() {
            d.set(i, i, f.clone());
        }
        d
    }
}

struct Work {
    nrows: usize,
    ncols: usize,
    rows: Vec<BTreeMap<usize, BigInt>>,
    colnz: Vec<BTreeSet<usize>>,
    u: Option<Vec<BTreeMap<usize, BigInt>>>,    // row-major
    v: Option<Vec<BTreeMap<usize, BigInt>>>,    // column-major
    vinv: Option<Vec<BTreeMap<usize, BigInt>>>, // row-major
}

impl Work {
    fn new(a: &IntMatrix, opts: SnfOptions) -> Work {
        let nrows = a.rows();
        let ncols = a.cols();
        let mut rows: Vec<BTreeMap<usize, BigInt>> = vec![BTreeMap::new(); nrows];
        let mut colnz: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); ncols];
        for (i, j, val) in a.nonzeros() {
            rows[i].insert(j, val);
            colnz[j].insert(i);
        }
        let ident = |n: usize| -> Vec<BTreeMap<usize, BigInt>> {
            (0..n)
                .map(|i| {
                    let mut m = BTreeMap::new();
                    m.insert(i, BigInt::one());
                    m
                })
                .collect()
        };
        Work {
            nrows,
            ncols,
            rows,
            colnz,
            u: opts.want_u.then(|| ident(nrows)),
            v: opts.want_v.then(|| ident(ncols)),
            vinv: opts.want_vinv.then(|| ident(ncols)),
        }
    }

    fn entry(&self, r: usize, c: usize) -> Option<&BigInt> {
        self.rows[r].get(&c)
    }

    fn set_entry(&mut self, r: usize, c: usize, val: BigInt) {
        if val.is_zero() {
            if self.rows[r].remove(&c).is_some() {
                self.colnz[c].remove(&r);
            }
        } else {
            self.rows[r].insert(c, val);
            self.colnz[c].insert(r);
        }
    }

    /// row_dst += coeff * row_src (in A and U).
    fn row_add(&mut self, dst: usize, src: usize, coeff: &BigInt) {
        let src_row: Vec<(usize, BigInt)> = self.rows[src].iter().map(|(&c, v)| (c, v.clone())).collect();
        for (c, v) in src_row {
            let cur = self.rows[dst].get(&c).cloned().unwrap_or_else(BigInt::zero);
            self.set_entry(dst, c, cur + coeff * &v);
        }
        if let Some(u) = &mut self.u {
            let srow: Vec<(usize, BigInt)> = u[src].iter().map(|(&c, v)| (c, v.clone())).collect();
            for (c, v) in srow {
                let cur = u[dst].get(&c).cloned().unwrap_or_else(BigInt::zero);
                let nv = cur + coeff * &v;
                if nv.is_zero() {
                    u[dst].remove(&c);
                } else {
                    u[dst].insert(c, nv);
                }
            }
        }
    }

    /// col_dst += coeff * col_src (in A, V and V^{-1}).
    fn col_add(&mut self, dst: usize, src: usize, coeff: &BigInt) {
        let src_rows: Vec<usize> = self.colnz[src].iter().copied().collect();
        for r in src_rows {
            let v = self.rows[r].get(&src).cloned().unwrap_or_else(BigInt::zero);
            let cur = self.rows[r].get(&dst).cloned().unwrap_or_else(BigInt::zero);
            self.set_entry(r, dst, cur + coeff * &v);
        }
        if let Some(vcols) = &mut self.v {
            let scol: Vec<(usize, BigInt)> = vcols[src].iter().map(|(&r, v)| (r, v.clone())).collect();
            for (r, v) in scol {
                let cur = vcols[dst].get(&r).cloned().unwrap_or_else(BigInt::zero);
                let nv = cur + coeff * &v;
                if nv.is_zero() {
                    vcols[dst].remove(&r);
                } else {
                    vcols[dst].insert(r, nv);
                }
            }
        }
        if let Some(vinv) = &mut self.vinv {
            // inverse op acts on rows: row_src -= coeff * row_dst
            let drow: Vec<(usize, BigInt)> = vinv[dst].iter().map(|(&c, v)| (c, v.clone())).collect();
            for (c, v) in drow {
                let cur = vinv[src].get(&c).cloned().unwrap_or_else(BigInt::zero);
                let nv = cur - coeff * &v;
                if nv.is_zero() {
                    vinv[src].remove(&c);
                } else {
                    vinv[src].insert(c, nv);
                }
            }
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let cols: BTreeSet<usize> = self.rows[a].keys().chain(self.rows[b].keys()).copied().collect();
        self.rows.swap(a, b);
        for c in cols {
            let has_a = self.rows[a].contains_key(&c);
            let has_b = self.rows[b].contains_key(&c);
            if has_a {
                self.colnz[c].insert(a);
            } else {
                self.colnz[c].remove(&a);
            }
            if has_b {
                self.colnz[c].insert(b);
            } else {
                self.colnz[c].remove(&b);
            }
        }
        if let Some(u) = &mut self.u {
            u.swap(a, b);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let rows: Vec<usize> = self.colnz[a].union(&self.colnz[b]).copied().collect();
        for r in rows {
            let va = self.rows[r].remove(&a);
            let vb = self.rows[r].remove(&b);
            if let Some(v) = vb {
                self.rows[r].insert(a, v);
            }
            if let Some(v) = va {
                self.rows[r].insert(b, v);
            }
        }
        let ca: BTreeSet<usize> = self.colnz[a].clone();
        self.colnz[a] = self.colnz[b].clone();
        self.colnz[b] = ca;
        if let Some(vcols) = &mut self.v {
            vcols.swap(a, b);
        }
        if let Some(vinv) = &mut self.vinv {
            vinv.swap(a, b);
        }
    }

    fn negate_row(&mut self, r: usize) {
        for v in self.rows[r].values_mut() {
            *v = -std::mem::take(v);
        }
        if let Some(u) = &mut self.u {
            for v in u[r].values_mut() {
                *v = -std::mem::take(v);
            }
        }
    }

    /// Minimal |entry| in the region rows >= k, cols >= k; ties by (row, col).
    fn find_pivot(&self, k: usize) -> Option<(usize, usize)> {
        let mut best: Option<(BigInt, usize, usize)> = None;
        for r in k..self.nrows {
            for (&c, v) in self.rows[r].range(k..) {
                let a = v.abs();
                match &best {
                    Some((ba, _, _)) if *ba <= a => {}
                    _ => best = Some((a.clone(), r, c)),
                }
                if a.is_one() && best.as_ref().map(|(ba, br, bc)| (ba, *br, *bc)) == Some((&a, r, c)) {
                    // nothing beats a unit found earliest in scan order
                    return Some((r, c));
                }
            }
        }
        best.map(|(_, r, c)| (r, c))
    }

    /// First row r > k whose region entries are not all divisible by `d`.
    fn find_nondivisible_row(&self, k: usize, d: &BigInt) -> Option<usize> {
        for r in k + 1..self.nrows {
            for (_, v) in self.rows[r].range(k + 1..) {
                if !v.mod_floor(d).is_zero() {
                    return Some(r);
                }
            }
        }
        None
    }
}

/// Sparse elimination phase for transform-free queries: repeatedly pick a
/// unit pivot (minimal column count, then minimal row count, ties by index),
/// clear its column, and drop its row and column. Each unit pivot contributes
/// an invariant factor 1; whatever block remains has no unit entries and goes
/// through the full algorithm densely. Arithmetic runs in i64 and reports
/// failure on overflow so the caller can fall back to exact arithmetic.
fn unit_pivot_phase(a: &IntMatrix) -> Option<(usize, IntMatrix)> {
    let nrows = a.rows();
    let ncols = a.cols();
    let mut rows: Vec<std::collections::HashMap<u32, i64>> = vec![Default::default(); nrows];
    let mut colnz: Vec<std::collections::HashSet<u32>> = vec![Default::default(); ncols];
    for (i, j, v) in a.nonzeros() {
        let v = i64::try_from(&v).ok()?;
        rows[i].insert(j as u32, v);
        colnz[j].insert(i as u32);
    }
    let mut row_active = vec![true; nrows];
    let mut col_active = vec![true; ncols];
    let mut unit_pivots = 0usize;
    loop {
        // cheapest active column that contains a unit entry
        let mut best: Option<(usize, usize, usize)> = None; // (col count, row count, encoded)
        for c in 0..ncols {
            if !col_active[c] || colnz[c].is_empty() {
                continue;
            }
            let ccount = colnz[c].len();
            if let Some((bc, _, _)) = best {
                if ccount > bc {
                    continue;
                }
            }
            let mut rbest: Option<(usize, usize)> = None;
            for &r in &colnz[c] {
                let v = rows[r as usize][&(c as u32)];
                if v == 1 || v == -1 {
                    let rc = (rows[r as usize].len(), r as usize);
                    if rbest.map(|b| rc < b).unwrap_or(true) {
                        rbest = Some(rc);
                    }
                }
            }
            if let Some((rcount, r)) = rbest {
                let cand = (ccount, rcount, r * ncols + c);
                if best.map(|b| cand < b).unwrap_or(true) {
                    best = Some(cand);
                }
            }
        }
        let Some((_, _, encoded)) = best else { break };
        let (pr, pc) = (encoded / ncols, encoded % ncols);
        let pivot = rows[pr][&(pc as u32)];
        // clear the pivot column with row operations
        let targets: Vec<u32> = colnz[pc].iter().copied().filter(|&r| r as usize != pr).collect();
        let pivot_row: Vec<(u32, i64)> = rows[pr].iter().map(|(&c, &v)| (c, v)).collect();
        for r in targets {
            let r = r as usize;
            let coeff = -rows[r][&(pc as u32)] / pivot;
            for &(c, v) in &pivot_row {
                let add = coeff.checked_mul(v)?;
                let entry = rows[r].entry(c).or_insert(0);
                *entry = entry.checked_add(add)?;
                if *entry == 0 {
                    rows[r].remove(&c);
                    colnz[c as usize].remove(&(r as u32));
                } else {
                    colnz[c as usize].insert(r as u32);
                }
            }
        }
        // retire the pivot row and column
        for &c in rows[pr].keys() {
            colnz[c as usize].remove(&(pr as u32));
        }
        rows[pr].clear();
        row_active[pr] = false;
        col_active[pc] = false;
        unit_pivots += 1;
    }
    // collect the leftover block densely
    let live_rows: Vec<usize> = (0..nrows).filter(|&r| row_active[r] && !rows[r].is_empty()).collect();
    let mut live_cols: Vec<usize> = Vec::new();
    for c in 0..ncols {
        if col_active[c] && !colnz[c].is_empty() {
            live_cols.push(c);
        }
    }
    let col_pos: std::collections::HashMap<usize, usize> =
        live_cols.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let mut leftover = IntMatrix::zero(live_rows.len(), live_cols.len());
    for (i, &r) in live_rows.iter().enumerate() {
        let mut entries: Vec<(u32, i64)> = rows[r].iter().map(|(&c, &v)| (c, v)).collect();
        entries.sort_unstable();
        for (c, v) in entries {
            leftover.set(i, col_pos[&(c as usize)], BigInt::from(v));
        }
    }
    Some((unit_pivots, leftover))
}

pub fn snf(a: &IntMatrix, opts: SnfOptions) -> Snf {
    if !opts.want_u && !opts.want_v && !opts.want_vinv {
        if let Some((units, leftover)) = unit_pivot_phase(a) {
            let rest = snf_general(&leftover, SnfOptions::default());
            let mut factors = vec![BigInt::one(); units];
            factors.extend(rest.factors);
            let rank = factors.len();
            return Snf {
                rows: a.rows(),
                cols: a.cols(),
                factors,
                rank,
                u: None,
                v: None,
                vinv: None,
            };
        }
    }
    snf_general(a, opts)
}

fn snf_general(a: &IntMatrix, opts: SnfOptions) -> Snf {
    let mut w = Work::new(a, opts);
    let maxk = w.nrows.min(w.ncols);
    let mut factors: Vec<BigInt> = Vec::new();
    let mut k = 0;
    while k < maxk {
        let Some((pr, pc)) = w.find_pivot(k) else { break };
        w.swap_rows(k, pr);
        w.swap_cols(k, pc);
        if w.entry(k, k).map(|v| v.is_negative()).unwrap_or(false) {
            w.negate_row(k);
        }
        loop {
            let pivot = w.entry(k, k).expect("pivot vanished").clone();
            // clear column k below the pivot
            let col_rows: Vec<usize> = w.colnz[k].iter().copied().filter(|&r| r > k).collect();
            let mut dirty = false;
            for r in col_rows {
                let Some(v) = w.entry(r, k).cloned() else { continue };
                let q = v.div_floor(&pivot);
                if !q.is_zero() {
                    w.row_add(r, k, &(-q));
                }
                if w.entry(r, k).is_some() {
                    dirty = true;
                }
            }
            if dirty {
                let (pr, pc) = w.find_pivot(k).expect("dirty region is nonempty");
                w.swap_rows(k, pr);
                w.swap_cols(k, pc);
                if w.entry(k, k).map(|v| v.is_negative()).unwrap_or(false) {
                    w.negate_row(k);
                }
                continue;
            }
            // clear row k right of the pivot
            let row_cols: Vec<usize> = w.rows[k].range(k + 1..).map(|(&c, _)| c).collect();
            for c in row_cols {
                let Some(v) = w.entry(k, c).cloned() else { continue };
                let q = v.div_floor(&pivot);
                if !q.is_zero() {
                    w.col_add(c, k, &(-q));
                }
                if w.entry(k, c).is_some() {
                    dirty = true;
                }
            }
            if dirty {
                let (pr, pc) = w.find_pivot(k).expect("dirty region is nonempty");
                w.swap_rows(k, pr);
                w.swap_cols(k, pc);
                if w.entry(k, k).map(|v| v.is_negative()).unwrap_or(false) {
                    w.negate_row(k);
                }
                continue;
            }
            if !pivot.is_one() {
                if let Some(r) = w.find_nondivisible_row(k, &pivot) {
                    w.row_add(k, r, &BigInt::one());
                    continue;
                }
            }
            break;
        }
        factors.push(w.entry(k, k).expect("pivot").clone());
        k += 1;
    }
    let rank = factors.len();
    let to_matrix_rowmajor = |rows: &Vec<BTreeMap<usize, BigInt>>, ncols: usize| -> IntMatrix {
        let mut m = IntMatrix::zero(rows.len(), ncols);
        for (i, row) in rows.iter().enumerate() {
            for (&j, v) in row {
                m.set(i, j, v.clone());
            }
        }
        m
    };
    let u = w.u.as_ref().map(|u| to_matrix_rowmajor(u, w.nrows));
    let v = w.v.as_ref().map(|vcols| {
        let mut m = IntMatrix::zero(w.ncols, w.ncols);
        for (j, col) in vcols.iter().enumerate() {
            for (&i, val) in col {
                m.set(i, j, val.clone());
            }
        }
        m
    });
    let vinv = w.vinv.as_ref().map(|vi| to_matrix_rowmajor(vi, w.ncols));
    Snf {
        rows: w.nrows,
        cols: w.ncols,
        factors,
        rank,
        u,
        v,
        vinv,
    }
}

/// Smith normal form with both transforms. `u * a * v` equals the diagonal.
pub fn smith_normal_form(a: &IntMatrix) -> SmithForm {
    let r = snf(
        a,
        SnfOptions {
            want_u: true,
            want_v: true,
            want_vinv: false,
        },
    );
    SmithForm {
        d: r.diagonal_matrix(),
        u: r.u.unwrap(),
        v: r.v.unwrap(),
    }
}

/// Nonzero invariant factors d_1 | d_2 | ... of `a`.
pub fn invariant_factors(a: &IntMatrix) -> Vec<BigInt> {
    snf(a, SnfOptions::default()).factors
}

pub fn rank(a: &IntMatrix) -> usize {
    snf(a, SnfOptions::default()).rank
}

/// Integer basis of `ker a` as the columns of a cols x nullity matrix. The
/// basis is saturated: every integer kernel vector is an integer combination.
pub fn kernel_basis(a: &IntMatrix) -> IntMatrix {
    let r = snf(
        a,
        SnfOptions {
            want_u: false,
            want_v: true,
            want_vinv: false,
        },
    );
    let v = r.v.unwrap();
    v.col_block(r.rank, a.cols())
}
