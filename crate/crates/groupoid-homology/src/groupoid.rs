//! Finite groupoids: validated construction, fibres, subgroupoids, and the
//! block structure of principal groupoids.
//!
//! Arrow identifiers are opaque strings; the lexicographic order on
//! identifiers fixes a total order on arrows and units which every other
//! module relies on for deterministic output. A groupoid value cannot exist
//! in an invalid state: all axioms are checked eagerly at construction.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

const COMPOSE_TABLE_LIMIT: usize = 4096;

#[derive(Clone, Debug)]
enum ComposeStore {
    /// Dense n x n table of products, for small arrow sets.
    Table(Vec<Option<u32>>),
    /// Pair map for larger groupoids.
    Map(HashMap<(u32, u32), u32>),
}

/// A finite groupoid: arrows, units, source/range, composition and inverse.
/// The discrete, finite stand-in for an ample groupoid with compact base.
#[derive(Clone, Debug)]
pub struct FiniteAmpleGroupoid {
    ids: Vec<String>,
    /// Arrow indices of the identity arrows, ascending.
    units: Vec<usize>,
    /// Arrow index of a unit arrow -> its unit position.
    unit_pos: HashMap<usize, usize>,
    /// Per arrow, the unit position of its source / range.
    src: Vec<usize>,
    rng: Vec<usize>,
    inv: Vec<usize>,
    compose: ComposeStore,
    /// Per unit position, the arrows with that range / source.
    range_fibers: Vec<Vec<usize>>,
    source_fibers: Vec<Vec<usize>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FiberKind {
    Range,
    Source,
}

impl FiniteAmpleGroupoid {
    pub fn n_arrows(&self) -> usize {
        self.ids.len()
    }

    pub fn n_units(&self) -> usize {
        self.units.len()
    }

    pub fn id(&self, arrow: usize) -> &str {
        &self.ids[arrow]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.ids.binary_search_by(|probe| probe.as_str().cmp(id)).ok()
    }

    pub fn is_unit(&self, arrow: usize) -> bool {
        self.unit_pos.contains_key(&arrow)
    }

    /// Arrow index of the identity arrow at unit position `u`.
    pub fn unit_arrow(&self, u: usize) -> usize {
        self.units[u]
    }

    pub fn unit_id(&self, u: usize) -> &str {
        &self.ids[self.units[u]]
    }

    pub fn unit_position(&self, unit_id: &str) -> Result<usize> {
        let arrow = self
            .index_of(unit_id)
            .ok_or_else(|| Error::UnknownUnit(unit_id.to_string()))?;
        self.unit_pos
            .get(&arrow)
            .copied()
            .ok_or_else(|| Error::UnknownUnit(unit_id.to_string()))
    }

    pub fn unit_pos_of_arrow(&self, arrow: usize) -> Option<usize> {
        self.unit_pos.get(&arrow).copied()
    }

    pub fn src_pos(&self, arrow: usize) -> usize {
        self.src[arrow]
    }

    pub fn rng_pos(&self, arrow: usize) -> usize {
        self.rng[arrow]
    }

    /// The identity arrow at the source of `arrow`.
    pub fn src_arrow(&self, arrow: usize) -> usize {
        self.units[self.src[arrow]]
    }

    pub fn rng_arrow(&self, arrow: usize) -> usize {
        self.units[self.rng[arrow]]
    }

    pub fn inv(&self, arrow: usize) -> usize {
        self.inv[arrow]
    }

    /// Product `g h`, defined exactly when src(g) = rng(h).
    pub fn compose(&self, g: usize, h: usize) -> Option<usize> {
        match &self.compose {
            ComposeStore::Table(t) => t[g * self.ids.len() + h].map(|v| v as usize),
            ComposeStore::Map(m) => m.get(&(g as u32, h as u32)).map(|&v| v as usize),
        }
    }

    pub fn range_fiber(&self, u: usize) -> &[usize] {
        &self.range_fibers[u]
    }

    pub fn source_fiber(&self, u: usize) -> &[usize] {
        &self.source_fibers[u]
    }

    /// Exact fibre r^{-1}(x) or s^{-1}(x) of a named unit.
    pub fn fiber(&self, unit_id: &str, kind: FiberKind) -> Result<Vec<usize>> {
        let u = self.unit_position(unit_id)?;
        Ok(match kind {
            FiberKind::Range => self.range_fibers[u].clone(),
            FiberKind::Source => self.source_fibers[u].clone(),
        })
    }

    /// True iff the only arrows with equal source and range are units.
    pub fn is_principal(&self) -> bool {
        (0..self.n_arrows()).all(|g| self.src[g] != self.rng[g] || self.is_unit(g))
    }

    fn principality_witness(&self) -> Option<usize> {
        (0..self.n_arrows()).find(|&g| self.src[g] == self.rng[g] && !self.is_unit(g))
    }

    pub fn require_principal(&self) -> Result<()> {
        match self.principality_witness() {
            None => Ok(()),
            Some(g) => Err(Error::NotPrincipal {
                witness: self.ids[g].clone(),
            }),
        }
    }

    /// Orbits of the unit space under x ~ y iff some arrow has source x and
    /// range y. Each orbit is ascending; orbits sorted by first element.
    pub fn unit_orbits(&self) -> Vec<Vec<usize>> {
        let mut uf = UnionFind::new(self.n_units());
        for g in 0..self.n_arrows() {
            uf.union(self.src[g], self.rng[g]);
        }
        uf.classes()
    }

    /// Exports the groupoid as an explicit table spec (identity round trip).
    pub fn to_table_spec(&self) -> GroupoidSpec {
        let arrows = (0..self.n_arrows())
            .map(|a| TableArrow {
                id: self.ids[a].clone(),
                src: self.ids[self.units[self.src[a]]].clone(),
                rng: self.ids[self.units[self.rng[a]]].clone(),
                inv: self.ids[self.inv[a]].clone(),
            })
            .collect();
        let mut compose = Vec::new();
        for g in 0..self.n_arrows() {
            for h in 0..self.n_arrows() {
                if let Some(gh) = self.compose(g, h) {
                    compose.push([self.ids[g].clone(), self.ids[h].clone(), self.ids[gh].clone()]);
                }
            }
        }
        GroupoidSpec::Table {
            units: self.units.iter().map(|&u| self.ids[u].clone()).collect(),
            arrows,
            compose,
        }
    }

    /// Exhaustive associativity check over all composable triples.
    pub fn check_associativity(&self) -> Result<()> {
        for h in 0..self.n_arrows() {
            for &k in self.range_fiber(self.src[h]) {
                let hk = self.compose(h, k).expect("composable");
                for &g in self.source_fiber(self.rng[h]) {
                    let gh = self.compose(g, h).expect("composable");
                    let left = self.compose(gh, k).expect("composable");
                    let right = self.compose(g, hk).expect("composable");
                    if left != right {
                        return Err(Error::MalformedSpec {
                            reason: "composition is not associative".into(),
                            witness: format!("({}, {}, {})", self.ids[g], self.ids[h], self.ids[k]),
                        });
                    }
                }
            }
        }
        Ok(())
    }
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let root = self.find(self.parent[x]);
            self.parent[x] = root;
        }
        self.parent[x]
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // keep the smaller index as representative
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }

    pub fn classes(&mut self) -> Vec<Vec<usize>> {
        let n = self.parent.len();
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for x in 0..n {
            let r = self.find(x);
            groups.entry(r).or_default().push(x);
        }
        groups.into_values().collect()
    }
}

// ---------------------------------------------------------------------------
// specs and validated construction
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableArrow {
    pub id: String,
    pub src: String,
    pub rng: String,
    pub inv: String,
}

/// Construction recipes for groupoids, matching the JSON file format.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GroupoidSpec {
    Table {
        units: Vec<String>,
        arrows: Vec<TableArrow>,
        compose: Vec<[String; 3]>,
    },
    Pair {
        n: u32,
    },
    CyclicGroup {
        m: u32,
    },
    GroupTable {
        elements: Vec<String>,
        mul: Vec<[String; 3]>,
    },
    Action {
        group: Box<GroupoidSpec>,
        points: Vec<String>,
        act: Vec<[String; 3]>,
    },
    DisjointUnion {
        parts: Vec<GroupoidSpec>,
    },
    Restriction {
        inner: Box<GroupoidSpec>,
        units: Vec<String>,
    },
}

struct RawGroupoid {
    /// (id, src unit id, rng unit id, inv id)
    arrows: Vec<(String, String, String, String)>,
    units: Vec<String>,
    compose: Vec<(String, String, String)>,
}

fn malformed(reason: impl Into<String>, witness: impl Into<String>) -> Error {
    Error::MalformedSpec {
        reason: reason.into(),
        witness: witness.into(),
    }
}

impl GroupoidSpec {
    pub fn parse_json(text: &str) -> Result<GroupoidSpec> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("groupoid spec: {e}")))
    }

    fn raw(&self) -> Result<RawGroupoid> {
        match self {
            GroupoidSpec::Table { units, arrows, compose } => Ok(RawGroupoid {
                arrows: arrows
                    .iter()
                    .map(|a| (a.id.clone(), a.src.clone(), a.rng.clone(), a.inv.clone()))
                    .collect(),
                units: units.clone(),
                compose: compose.iter().map(|c| (c[0].clone(), c[1].clone(), c[2].clone())).collect(),
            }),
            GroupoidSpec::Pair { n } => {
                if *n < 1 {
                    return Err(malformed("pair groupoid needs n >= 1", n.to_string()));
                }
                let n = *n as usize;
                let id = |i: usize, j: usize| format!("({i},{j})");
                let mut arrows = Vec::new();
                for i in 1..=n {
                    for j in 1..=n {
                        arrows.push((id(i, j), id(j, j), id(i, i), id(j, i)));
                    }
                }
                let mut compose = Vec::new();
                for i in 1..=n {
                    for j in 1..=n {
                        for k in 1..=n {
                            compose.push((id(i, j), id(j, k), id(i, k)));
                        }
                    }
                }
                Ok(RawGroupoid {
                    arrows,
                    units: (1..=n).map(|i| id(i, i)).collect(),
                    compose,
                })
            }
            GroupoidSpec::CyclicGroup { m } => {
                if *m < 1 {
                    return Err(malformed("cyclic group needs m >= 1", m.to_string()));
                }
                let m = *m as usize;
                let id = |i: usize| format!("g{i}");
                let arrows = (0..m)
                    .map(|i| (id(i), id(0), id(0), id((m - i) % m)))
                    .collect();
                let compose = (0..m)
                    .flat_map(|i| (0..m).map(move |j| (id(i), id(j), id((i + j) % m))))
                    .collect();
                Ok(RawGroupoid {
                    arrows,
                    units: vec![id(0)],
                    compose,
                })
            }
            GroupoidSpec::GroupTable { elements, mul } => {
                if elements.is_empty() {
                    return Err(malformed("group table needs at least one element", ""));
                }
                let set: BTreeSet<&String> = elements.iter().collect();
                if set.len() != elements.len() {
                    return Err(malformed("duplicate group elements", ""));
                }
                let mut table: HashMap<(&str, &str), &str> = HashMap::new();
                for row in mul {
                    if !set.contains(&row[0]) || !set.contains(&row[1]) || !set.contains(&row[2]) {
                        return Err(malformed("mul table mentions unknown element", format!("{row:?}")));
                    }
                    if table.insert((&row[0], &row[1]), &row[2]).is_some() {
                        return Err(malformed("duplicate mul entry", format!("({}, {})", row[0], row[1])));
                    }
                }
                for a in elements {
                    for b in elements {
                        if !table.contains_key(&(a.as_str(), b.as_str())) {
                            return Err(malformed("mul table incomplete", format!("({a}, {b})")));
                        }
                    }
                }
                // identity element
                let e = elements
                    .iter()
                    .find(|e| {
                        elements.iter().all(|a| {
                            table[&(e.as_str(), a.as_str())] == a && table[&(a.as_str(), e.as_str())] == a
                        })
                    })
                    .ok_or_else(|| malformed("group table has no identity", ""))?;
                // inverses
                let mut inv: HashMap<&str, &str> = HashMap::new();
                for a in elements {
                    let ai = elements
                        .iter()
                        .find(|b| table[&(a.as_str(), b.as_str())] == e && table[&(b.as_str(), a.as_str())] == e)
                        .ok_or_else(|| malformed("group element without inverse", a.clone()))?;
                    inv.insert(a, ai);
                }
                Ok(RawGroupoid {
                    arrows: elements
                        .iter()
                        .map(|a| (a.clone(), e.clone(), e.clone(), inv[a.as_str()].to_string()))
                        .collect(),
                    units: vec![e.clone()],
                    compose: mul.iter().map(|r| (r[0].clone(), r[1].clone(), r[2].clone())).collect(),
                })
            }
            GroupoidSpec::Action { group, points, act } => {
                let gp = group.build()?;
                if gp.n_units() != 1 {
                    return Err(malformed("action group spec must have a single unit", ""));
                }
                let pset: BTreeSet<&String> = points.iter().collect();
                if pset.len() != points.len() || points.is_empty() {
                    return Err(malformed("action needs distinct, nonempty points", ""));
                }
                for name in gp.ids.iter().chain(points.iter()) {
                    if name.contains('@') {
                        return Err(malformed("names in an action spec must not contain '@'", name.clone()));
                    }
                }
                let mut table: HashMap<(usize, &str), &str> = HashMap::new();
                for row in act {
                    let g = gp
                        .index_of(&row[0])
                        .ok_or_else(|| malformed("act table mentions unknown group element", row[0].clone()))?;
                    if !pset.contains(&row[1]) || !pset.contains(&row[2]) {
                        return Err(malformed("act table mentions unknown point", format!("{row:?}")));
                    }
                    if table.insert((g, &row[1]), &row[2]).is_some() {
                        return Err(malformed("duplicate act entry", format!("({}, {})", row[0], row[1])));
                    }
                }
                for g in 0..gp.n_arrows() {
                    let mut seen: BTreeSet<&str> = BTreeSet::new();
                    for x in points {
                        let y = table
                            .get(&(g, x.as_str()))
                            .ok_or_else(|| malformed("act table incomplete", format!("({}, {x})", gp.id(g))))?;
                        if !seen.insert(y) {
                            return Err(malformed(
                                "action is not by bijections",
                                format!("({}, {x}) -> {y}", gp.id(g)),
                            ));
                        }
                    }
                }
                let e = gp.unit_arrow(0);
                for x in points {
                    if table[&(e, x.as_str())] != x {
                        return Err(malformed("identity must act trivially", x.clone()));
                    }
                }
                for g in 0..gp.n_arrows() {
                    for h in 0..gp.n_arrows() {
                        let gh = gp.compose(g, h).expect("group is total");
                        for x in points {
                            let hx = table[&(h, x.as_str())];
                            if table[&(gh, x.as_str())] != table[&(g, hx)] {
                                return Err(malformed(
                                    "action is not compatible with multiplication",
                                    format!("({}, {}, {x})", gp.id(g), gp.id(h)),
                                ));
                            }
                        }
                    }
                }
                let aid = |g: usize, x: &str| format!("{}@{}", gp.id(g), x);
                let mut arrows = Vec::new();
                for g in 0..gp.n_arrows() {
                    for x in points {
                        let gx = table[&(g, x.as_str())];
                        let ginv = gp.inv(g);
                        arrows.push((aid(g, x), aid(e, x), aid(e, gx), aid(ginv, gx)));
                    }
                }
                let mut compose = Vec::new();
                for g in 0..gp.n_arrows() {
                    for h in 0..gp.n_arrows() {
                        let gh = gp.compose(g, h).expect("group is total");
                        for x in points {
                            let hx = table[&(h, x.as_str())];
                            compose.push((aid(g, hx), aid(h, x), aid(gh, x)));
                        }
                    }
                }
                Ok(RawGroupoid {
                    arrows,
                    units: points.iter().map(|x| aid(e, x)).collect(),
                    compose,
                })
            }
            GroupoidSpec::DisjointUnion { parts } => {
                let mut arrows = Vec::new();
                let mut units = Vec::new();
                let mut compose = Vec::new();
                for (i, part) in parts.iter().enumerate() {
                    let raw = part.raw()?;
                    let tag = |s: &str| format!("{i}:{s}");
                    for (id, s, r, inv) in raw.arrows {
                        arrows.push((tag(&id), tag(&s), tag(&r), tag(&inv)));
                    }
                    for u in raw.units {
                        units.push(tag(&u));
                    }
                    for (g, h, gh) in raw.compose {
                        compose.push((tag(&g), tag(&h), tag(&gh)));
                    }
                }
                Ok(RawGroupoid { arrows, units, compose })
            }
            GroupoidSpec::Restriction { inner, units } => {
                let raw = inner.raw()?;
                let inner_units: BTreeSet<&String> = raw.units.iter().collect();
                for u in units {
                    if !inner_units.contains(u) {
                        return Err(malformed("restriction to a non-unit", u.clone()));
                    }
                }
                let keep_units: BTreeSet<&String> = units.iter().collect();
                let kept: BTreeSet<&String> = raw
                    .arrows
                    .iter()
                    .filter(|(_, s, r, _)| keep_units.contains(s) && keep_units.contains(r))
                    .map(|(id, _, _, _)| id)
                    .collect();
                Ok(RawGroupoid {
                    arrows: raw
                        .arrows
                        .iter()
                        .filter(|(id, _, _, _)| kept.contains(id))
                        .cloned()
                        .collect(),
                    units: units.clone(),
                    compose: raw
                        .compose
                        .iter()
                        .filter(|(g, h, gh)| kept.contains(g) && kept.contains(h) && kept.contains(gh))
                        .cloned()
                        .collect(),
                })
            }
        }
    }

    /// Builds and fully validates the groupoid.
    pub fn build(&self) -> Result<FiniteAmpleGroupoid> {
        build_groupoid(self)
    }
}

/// Validated construction from a spec; every type invariant is checked.
pub fn build_groupoid(spec: &GroupoidSpec) -> Result<FiniteAmpleGroupoid> {
    let raw = spec.raw()?;
    validate_raw(raw)
}

fn validate_raw(raw: RawGroupoid) -> Result<FiniteAmpleGroupoid> {
    let mut ids: Vec<String> = raw.arrows.iter().map(|(id, _, _, _)| id.clone()).collect();
    ids.sort();
    ids.dedup();
    if ids.len() != raw.arrows.len() {
        return Err(malformed("duplicate arrow ids", ""));
    }
    if ids.is_empty() {
        return Err(malformed("a groupoid needs at least one arrow", ""));
    }
    let lookup = |id: &str| -> Result<usize> {
        ids.binary_search_by(|p| p.as_str().cmp(id))
            .map_err(|_| malformed("reference to missing arrow", id.to_string()))
    };
    // units
    let mut units: Vec<usize> = Vec::new();
    for u in &raw.units {
        units.push(lookup(u)?);
    }
    units.sort_unstable();
    units.dedup();
    if units.len() != raw.units.len() {
        return Err(malformed("duplicate units", ""));
    }
    let mut unit_pos: HashMap<usize, usize> = HashMap::new();
    for (p, &a) in units.iter().enumerate() {
        unit_pos.insert(a, p);
    }
    // src/rng/inv per arrow
    let n = ids.len();
    let mut src = vec![usize::MAX; n];
    let mut rng = vec![usize::MAX; n];
    let mut inv = vec![usize::MAX; n];
    for (id, s, r, i) in &raw.arrows {
        let a = lookup(id)?;
        let su = lookup(s)?;
        let ru = lookup(r)?;
        let s_pos = unit_pos
            .get(&su)
            .copied()
            .ok_or_else(|| malformed("source is not a unit", format!("{id}: {s}")))?;
        let r_pos = unit_pos
            .get(&ru)
            .copied()
            .ok_or_else(|| malformed("range is not a unit", format!("{id}: {r}")))?;
        src[a] = s_pos;
        rng[a] = r_pos;
        inv[a] = lookup(i)?;
    }
    // composition store
    let mut store = if n <= COMPOSE_TABLE_LIMIT {
        ComposeStore::Table(vec![None; n * n])
    } else {
        ComposeStore::Map(HashMap::new())
    };
    let mut insert = |g: usize, h: usize, gh: usize| -> Result<()> {
        match &mut store {
            ComposeStore::Table(t) => {
                let slot = &mut t[g * n + h];
                if slot.is_some() && *slot != Some(gh as u32) {
                    return Err(malformed("conflicting compose entries", format!("({}, {})", ids[g], ids[h])));
                }
                *slot = Some(gh as u32);
            }
            ComposeStore::Map(m) => {
                if let Some(&old) = m.get(&(g as u32, h as u32)) {
                    if old != gh as u32 {
                        return Err(malformed("conflicting compose entries", format!("({}, {})", ids[g], ids[h])));
                    }
                }
                m.insert((g as u32, h as u32), gh as u32);
            }
        }
        Ok(())
    };
    for (g, h, gh) in &raw.compose {
        let (g, h, gh) = (lookup(g)?, lookup(h)?, lookup(gh)?);
        insert(g, h, gh)?;
    }
    let get = |store: &ComposeStore, g: usize, h: usize| -> Option<usize> {
        match store {
            ComposeStore::Table(t) => t[g * n + h].map(|v| v as usize),
            ComposeStore::Map(m) => m.get(&(g as u32, h as u32)).map(|&v| v as usize),
        }
    };
    // compose defined exactly on composable pairs, with matching endpoints
    for g in 0..n {
        for h in 0..n {
            let defined = get(&store, g, h);
            let composable = src[g] == rng[h];
            match (defined, composable) {
                (None, true) => {
                    return Err(malformed(
                        "missing product of a composable pair",
                        format!("({}, {})", ids[g], ids[h]),
                    ))
                }
                (Some(_), false) => {
                    return Err(malformed(
                        "product defined for a non-composable pair",
                        format!("({}, {})", ids[g], ids[h]),
                    ))
                }
                (Some(gh), true) => {
                    if rng[gh] != rng[g] || src[gh] != src[h] {
                        return Err(malformed(
                            "product has wrong endpoints",
                            format!("({}, {}) -> {}", ids[g], ids[h], ids[gh]),
                        ));
                    }
                }
                (None, false) => {}
            }
        }
    }
    // unit laws
    for g in 0..n {
        let e_r = units[rng[g]];
        let e_s = units[src[g]];
        if get(&store, e_r, g) != Some(g) || get(&store, g, e_s) != Some(g) {
            return Err(malformed("identity law fails", ids[g].clone()));
        }
    }
    for (p, &u) in units.iter().enumerate() {
        if src[u] != p || rng[u] != p {
            return Err(malformed("unit with moving endpoints", ids[u].clone()));
        }
        if get(&store, u, u) != Some(u) {
            return Err(malformed("unit is not idempotent", ids[u].clone()));
        }
    }
    // units are exactly the idempotent self-loops
    for g in 0..n {
        if src[g] == rng[g] && get(&store, g, g) == Some(g) && !unit_pos.contains_key(&g) {
            return Err(malformed("idempotent self-loop that is not a declared unit", ids[g].clone()));
        }
    }
    // inverse laws
    for g in 0..n {
        let gi = inv[g];
        if inv[gi] != g {
            return Err(malformed("inv is not an involution", ids[g].clone()));
        }
        if src[gi] != rng[g] || rng[gi] != src[g] {
            return Err(malformed("inverse has wrong endpoints", ids[g].clone()));
        }
        if get(&store, g, gi) != Some(units[rng[g]]) || get(&store, gi, g) != Some(units[src[g]]) {
            return Err(malformed("inverse law fails", ids[g].clone()));
        }
    }
    let mut range_fibers = vec![Vec::new(); units.len()];
    let mut source_fibers = vec![Vec::new(); units.len()];
    for g in 0..n {
        range_fibers[rng[g]].push(g);
        source_fibers[src[g]].push(g);
    }
    let groupoid = FiniteAmpleGroupoid {
        ids,
        units,
        unit_pos,
        src,
        rng,
        inv,
        compose: store,
        range_fibers,
        source_fibers,
    };
    groupoid.check_associativity()?;
    Ok(groupoid)
}

// ---------------------------------------------------------------------------
// scale sets
// ---------------------------------------------------------------------------

/// A subset of arrows used as a scale. A scale is admissible when it is
/// symmetric and contains every identity arrow.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScaleSet {
    arrows: Vec<usize>,
    mask: Vec<bool>,
}

impl ScaleSet {
    pub fn new(g: &FiniteAmpleGroupoid, mut arrows: Vec<usize>) -> ScaleSet {
        arrows.sort_unstable();
        arrows.dedup();
        let mut mask = vec![false; g.n_arrows()];
        for &a in &arrows {
            mask[a] = true;
        }
        ScaleSet { arrows, mask }
    }

    pub fn from_ids(g: &FiniteAmpleGroupoid, ids: &[String]) -> Result<ScaleSet> {
        let mut arrows = Vec::with_capacity(ids.len());
        for id in ids {
            arrows.push(
                g.index_of(id)
                    .ok_or_else(|| malformed("scale mentions unknown arrow", id.clone()))?,
            );
        }
        Ok(ScaleSet::new(g, arrows))
    }

    pub fn all(g: &FiniteAmpleGroupoid) -> ScaleSet {
        ScaleSet::new(g, (0..g.n_arrows()).collect())
    }

    pub fn units_only(g: &FiniteAmpleGroupoid) -> ScaleSet {
        ScaleSet::new(g, (0..g.n_units()).map(|u| g.unit_arrow(u)).collect())
    }

    pub fn arrows(&self) -> &[usize] {
        &self.arrows
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn contains(&self, arrow: usize) -> bool {
        self.mask[arrow]
    }

    pub fn is_symmetric(&self, g: &FiniteAmpleGroupoid) -> bool {
        self.arrows.iter().all(|&a| self.mask[g.inv(a)])
    }

    pub fn contains_units(&self, g: &FiniteAmpleGroupoid) -> bool {
        (0..g.n_units()).all(|u| self.mask[g.unit_arrow(u)])
    }

    pub fn is_admissible(&self, g: &FiniteAmpleGroupoid) -> bool {
        self.is_symmetric(g) && self.contains_units(g)
    }

    pub fn union(&self, g: &FiniteAmpleGroupoid, other: &ScaleSet) -> ScaleSet {
        let mut arrows = self.arrows.clone();
        arrows.extend_from_slice(&other.arrows);
        ScaleSet::new(g, arrows)
    }

    pub fn inverse(&self, g: &FiniteAmpleGroupoid) -> ScaleSet {
        ScaleSet::new(g, self.arrows.iter().map(|&a| g.inv(a)).collect())
    }

    /// The product set {ab : a in self, b in other, composable}.
    pub fn product(&self, g: &FiniteAmpleGroupoid, other: &ScaleSet) -> ScaleSet {
        let mut out = Vec::new();
        for &a in &self.arrows {
            for &b in &other.arrows {
                if let Some(ab) = g.compose(a, b) {
                    out.push(ab);
                }
            }
        }
        ScaleSet::new(g, out)
    }

    pub fn cube(&self, g: &FiniteAmpleGroupoid) -> ScaleSet {
        self.product(g, self).product(g, self)
    }

    /// Smallest admissible scale containing this one.
    pub fn admissible_hull(&self, g: &FiniteAmpleGroupoid) -> ScaleSet {
        self.union(g, &self.inverse(g)).union(g, &ScaleSet::units_only(g))
    }
}

// ---------------------------------------------------------------------------
// bisections and subgroupoids
// ---------------------------------------------------------------------------

/// A set of arrows on which source and range are both injective.
#[derive(Clone, Debug)]
pub struct Bisection {
    arrows: Vec<usize>,
}

impl Bisection {
    pub fn new(g: &FiniteAmpleGroupoid, mut arrows: Vec<usize>) -> Result<Bisection> {
        arrows.sort_unstable();
        arrows.dedup();
        let mut seen_src = BTreeSet::new();
        let mut seen_rng = BTreeSet::new();
        for &a in &arrows {
            if !seen_src.insert(g.src_pos(a)) || !seen_rng.insert(g.rng_pos(a)) {
                return Err(malformed("not a bisection: source or range repeats", g.id(a).to_string()));
            }
        }
        Ok(Bisection { arrows })
    }

    pub fn arrows(&self) -> &[usize] {
        &self.arrows
    }
}

/// Arrows closed under composition and inverse, with the induced unit space.
#[derive(Clone, Debug)]
pub struct Subgroupoid {
    parent: Arc<FiniteAmpleGroupoid>,
    members: Vec<usize>,
    mask: Vec<bool>,
    /// Unit positions (in the parent) whose identity arrows are members.
    unit_positions: Vec<usize>,
}

impl Subgroupoid {
    pub fn new(parent: Arc<FiniteAmpleGroupoid>, mut members: Vec<usize>) -> Result<Subgroupoid> {
        members.sort_unstable();
        members.dedup();
        let mut mask = vec![false; parent.n_arrows()];
        for &m in &members {
            mask[m] = true;
        }
        for &m in &members {
            if !mask[parent.inv(m)] {
                return Err(Error::NotSubgroupoid {
                    reason: "not closed under inverse".into(),
                    witness: parent.id(m).to_string(),
                });
            }
            if !mask[parent.src_arrow(m)] || !mask[parent.rng_arrow(m)] {
                return Err(Error::NotSubgroupoid {
                    reason: "missing identity arrow of an endpoint".into(),
                    witness: parent.id(m).to_string(),
                });
            }
        }
        for &a in &members {
            for &b in &members {
                if let Some(ab) = parent.compose(a, b) {
                    if !mask[ab] {
                        return Err(Error::NotSubgroupoid {
                            reason: "not closed under composition".into(),
                            witness: format!("({}, {})", parent.id(a), parent.id(b)),
                        });
                    }
                }
            }
        }
        let unit_positions = members
            .iter()
            .filter_map(|&m| parent.unit_pos_of_arrow(m))
            .collect();
        Ok(Subgroupoid {
            parent,
            members,
            mask,
            unit_positions,
        })
    }

    /// The empty subgroupoid.
    pub fn empty(parent: Arc<FiniteAmpleGroupoid>) -> Subgroupoid {
        Subgroupoid {
            mask: vec![false; parent.n_arrows()],
            parent,
            members: Vec::new(),
            unit_positions: Vec::new(),
        }
    }

    pub fn parent(&self) -> &Arc<FiniteAmpleGroupoid> {
        &self.parent
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn contains(&self, arrow: usize) -> bool {
        self.mask[arrow]
    }

    pub fn unit_positions(&self) -> &[usize] {
        &self.unit_positions
    }

    pub fn has_unit(&self, u: usize) -> bool {
        self.mask[self.parent.unit_arrow(u)]
    }

    /// Members with range at unit position `u`.
    pub fn range_fiber(&self, u: usize) -> Vec<usize> {
        self.parent
            .range_fiber(u)
            .iter()
            .copied()
            .filter(|&a| self.mask[a])
            .collect()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn is_principal(&self) -> bool {
        self.members
            .iter()
            .all(|&g| self.parent.src_pos(g) != self.parent.rng_pos(g) || self.parent.is_unit(g))
    }
}

/// Smallest subgroupoid containing `seed`, by closure iteration.
pub fn generated_subgroupoid(parent: &Arc<FiniteAmpleGroupoid>, seed: &[usize]) -> Subgroupoid {
    let g = parent.as_ref();
    let mut mask = vec![false; g.n_arrows()];
    let mut queue: Vec<usize> = Vec::new();
    let push = |mask: &mut Vec<bool>, queue: &mut Vec<usize>, a: usize| {
        if !mask[a] {
            mask[a] = true;
            queue.push(a);
        }
    };
    for &s in seed {
        push(&mut mask, &mut queue, s);
    }
    let mut frontier = 0;
    while frontier < queue.len() {
        let a = queue[frontier];
        frontier += 1;
        push(&mut mask, &mut queue, g.inv(a));
        push(&mut mask, &mut queue, g.src_arrow(a));
        push(&mut mask, &mut queue, g.rng_arrow(a));
        // products with everything already present
        for i in 0..queue.len() {
            let b = queue[i];
            if let Some(ab) = g.compose(a, b) {
                push(&mut mask, &mut queue, ab);
            }
            if let Some(ba) = g.compose(b, a) {
                push(&mut mask, &mut queue, ba);
            }
        }
    }
    let members: Vec<usize> = (0..g.n_arrows()).filter(|&a| mask[a]).collect();
    Subgroupoid::new(parent.clone(), members).expect("closure produces a subgroupoid")
}

// ---------------------------------------------------------------------------
// principal block decomposition
// ---------------------------------------------------------------------------

/// One orbit of a principal subgroupoid: its units, its arrows, and the
/// minimal unit chosen as basepoint.
#[derive(Clone, Debug)]
pub struct Block {
    pub orbit_units: Vec<usize>,
    pub arrows: Vec<usize>,
    pub basepoint: usize,
}

/// Orbit decomposition of a finite principal groupoid. Every block is a pair
/// groupoid on its orbit; `tau(x)` is the unique member arrow from the
/// basepoint of x's orbit to x, so r(tau(x)) = x and s(tau(x)) = basepoint.
#[derive(Clone, Debug)]
pub struct PrincipalBlockDecomposition {
    pub blocks: Vec<Block>,
    tau: HashMap<usize, usize>,
    block_of: HashMap<usize, usize>,
}

impl PrincipalBlockDecomposition {
    pub fn tau(&self, unit: usize) -> Option<usize> {
        self.tau.get(&unit).copied()
    }

    /// Basepoint of the orbit of `unit` (the section sigma after the quotient).
    pub fn basepoint_of(&self, unit: usize) -> Option<usize> {
        self.block_of.get(&unit).map(|&b| self.blocks[b].basepoint)
    }

    pub fn block_of(&self, unit: usize) -> Option<usize> {
        self.block_of.get(&unit).copied()
    }
}

pub fn principal_blocks(h: &Subgroupoid) -> Result<PrincipalBlockDecomposition> {
    let g = h.parent().as_ref();
    if let Some(&w) = h
        .members()
        .iter()
        .find(|&&m| g.src_pos(m) == g.rng_pos(m) && !g.is_unit(m))
    {
        return Err(Error::NotPrincipal {
            witness: g.id(w).to_string(),
        });
    }
    // orbits of the subgroupoid's unit space
    let local: Vec<usize> = h.unit_positions().to_vec();
    let pos_of: HashMap<usize, usize> = local.iter().enumerate().map(|(i, &u)| (u, i)).collect();
    let mut uf = UnionFind::new(local.len());
    for &m in h.members() {
        uf.union(pos_of[&g.src_pos(m)], pos_of[&g.rng_pos(m)]);
    }
    let classes = uf.classes();
    let mut blocks = Vec::new();
    let mut tau = HashMap::new();
    let mut block_of = HashMap::new();
    for class in classes {
        let orbit_units: Vec<usize> = class.iter().map(|&i| local[i]).collect();
        let basepoint = orbit_units[0];
        let in_orbit: BTreeSet<usize> = orbit_units.iter().copied().collect();
        let arrows: Vec<usize> = h
            .members()
            .iter()
            .copied()
            .filter(|&m| in_orbit.contains(&g.src_pos(m)))
            .collect();
        for &x in &orbit_units {
            let t = arrows
                .iter()
                .copied()
                .find(|&m| g.rng_pos(m) == x && g.src_pos(m) == basepoint)
                .expect("closure of a principal subgroupoid joins basepoint to every orbit unit");
            tau.insert(x, t);
        }
        for &x in &orbit_units {
            block_of.insert(x, blocks.len());
        }
        blocks.push(Block {
            orbit_units,
            arrows,
            basepoint,
        });
    }
    Ok(PrincipalBlockDecomposition { blocks, tau, block_of })
}
