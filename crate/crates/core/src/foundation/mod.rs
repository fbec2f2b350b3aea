//! Foundations of matroids.
//!
//! Cross ratios `[ab;cd]_I` are keyed by their quadruple of hyperplanes
//! `(⟨Ia⟩, ⟨Ib⟩, ⟨Ic⟩, ⟨Id⟩)` taken up to the symmetries
//! `[abcd] = [badc] = [cdab] = [dcba]`. One generator is created per class, so
//! equal quadruples automatically give equal cross ratios.

use std::collections::{BTreeSet, HashMap, HashSet};

use itertools::Itertools;
use serde::Serialize;
use serde_json::{json, Value};

use crate::abgroup::GroupElement;
use crate::error::{Error, Result};
use crate::matroid::{elems, named_matroid, set_of, subsets_of_size, Matroid, Set};
use crate::pasture::{identify_with_budget, Identification, Pasture};

mod diagram;

pub use diagram::{
    foundation_via_diagram, fundamental_diagram, lattice_diagram, DiagramClass, DiagramNode, FoundationDiagram,
    LatticeVariant,
};

/// A hyperplane quadruple, as bitmasks of `M`.
pub type Quad = [Set; 4];

/// A tuple `(I; a, b, c, d)` of `Ω_M` with its hyperplane quadruple.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CrossRatioSymbol {
    pub i: Vec<usize>,
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub d: usize,
    pub nondegenerate: bool,
    pub psi: Quad,
}

impl CrossRatioSymbol {
    /// `[a,b;c,d]` followed by `_{I}` when `I` is nonempty.
    pub fn label(&self) -> String {
        let head = format!("[{},{};{},{}]", self.a, self.b, self.c, self.d);
        if self.i.is_empty() {
            head
        } else {
            format!("{head}_{{{}}}", self.i.iter().join(","))
        }
    }
}

/// The class key of a quadruple under the cross-ratio symmetries.
pub fn sigma_key(q: Quad) -> Quad {
    [q, [q[1], q[0], q[3], q[2]], [q[2], q[3], q[0], q[1]], [q[3], q[2], q[1], q[0]]].into_iter().min().unwrap()
}

/// How a foundation was computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    Grs,
    Diagram,
    Diagram2,
    Diagram3,
    Lattice,
    LatticeRankLe4,
    LatticeRankLe3,
    Lattice3,
}

impl Route {
    pub const ALL: [Route; 8] = [
        Route::Grs,
        Route::Diagram,
        Route::Diagram2,
        Route::Diagram3,
        Route::Lattice,
        Route::LatticeRankLe4,
        Route::LatticeRankLe3,
        Route::Lattice3,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Route::Grs => "grs",
            Route::Diagram => "diagram",
            Route::Diagram2 => "diagram2",
            Route::Diagram3 => "diagram3",
            Route::Lattice => "lattice",
            Route::LatticeRankLe4 => "lattice_le4",
            Route::LatticeRankLe3 => "lattice_le3",
            Route::Lattice3 => "lattice3",
        }
    }

    pub fn parse(s: &str) -> Result<Route> {
        Route::ALL.into_iter().find(|r| r.name() == s).ok_or_else(|| Error::UnknownName(format!("method {s}")))
    }

    /// Whether the route's hypotheses hold for `m`.
    pub fn applies_to(self, m: &Matroid) -> bool {
        match self {
            Route::Diagram2 => m.connectivity().is_2_connected,
            Route::Diagram3 | Route::Lattice3 => m.connectivity().is_3_connected,
            Route::LatticeRankLe3 => diagram::rank_le_3_applies(m),
            _ => true,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CrossCheck {
    pub route: Route,
    pub isomorphic: bool,
}

#[derive(Clone, Debug)]
pub struct FoundationReport {
    pub pasture: Pasture,
    /// One entry per nondegenerate class, keyed by its least tuple.
    pub dictionary: Vec<(CrossRatioSymbol, GroupElement)>,
    pub method: Route,
    pub cross_checks: Vec<CrossCheck>,
    pub identification: Option<Identification>,
}

impl FoundationReport {
    /// The dictionary image of the class of `quad`.
    pub fn cross_ratio(&self, quad: Quad) -> Option<&GroupElement> {
        let k = sigma_key(quad);
        self.dictionary.iter().find(|(s, _)| sigma_key(s.psi) == k).map(|(_, g)| g)
    }

    pub fn to_json(&self) -> Value {
        let p = &self.pasture;
        let hexagons: Vec<String> =
            p.hexagons().iter().map(|h| h.canonical_key().iter().map(|b| format!("{b:02x}")).collect()).collect();
        let dictionary: Vec<Value> = self
            .dictionary
            .iter()
            .map(|(s, g)| {
                json!({
                    "symbol": s.label(),
                    "psi": s.psi.iter().map(|&h| elems(h)).collect::<Vec<_>>(),
                    "element": p.elem(g).to_string(),
                })
            })
            .collect();
        let t = p.numerical_type();
        json!({
            "method": self.method,
            "numerical_type": t,
            "invariant_factors": t.invariant_factors,
            "pasture": p.to_json(),
            "hexagons": hexagons,
            "dictionary": dictionary,
            "identification": self.identification,
            "cross_checks": self.cross_checks,
        })
    }
}

/// Generator data of a GRS presentation, keyed by quadruples of the ambient matroid.
#[derive(Clone, Debug)]
pub(crate) struct Grs {
    pub pasture: Pasture,
    /// `keys[g - 1]` is the class key of generator `g`.
    pub keys: Vec<Quad>,
    pub symbols: Vec<CrossRatioSymbol>,
}

impl Grs {
    pub fn index(&self) -> HashMap<Quad, usize> {
        self.keys.iter().enumerate().map(|(i, &k)| (k, i + 1)).collect()
    }

    fn into_report(self) -> FoundationReport {
        let n = self.pasture.num_generators();
        let dictionary =
            self.symbols.into_iter().enumerate().map(|(i, s)| (s, GroupElement::unit(n, i + 1))).collect();
        FoundationReport { pasture: self.pasture, dictionary, method: Route::Grs, cross_checks: vec![], identification: None }
    }
}

#[derive(Clone, Copy)]
enum Val {
    Out,
    One,
    Gen(usize),
}

/// Enumeration context for a matroid `N` sitting in `M` as `M ∖ J / I`.
struct Omega<'a> {
    n: &'a Matroid,
    /// Labels in `M` of the elements of `N`.
    labels: &'a [usize],
    /// Lifted closures `⟨Je⟩` per independent `(r−2)`-set `J`.
    lines: HashMap<Set, Vec<Set>>,
    classes: HashMap<Quad, usize>,
}

impl<'a> Omega<'a> {
    fn new(m: &Matroid, n: &'a Matroid, contract: Set, labels: &'a [usize]) -> Omega<'a> {
        let lift = |x: Set| m.closure(elems(x).into_iter().fold(contract, |acc, e| acc | 1 << labels[e]));
        let mut lines = HashMap::new();
        if n.rank() >= 2 {
            for j in subsets_of_size(n.ground(), n.rank() - 2) {
                if n.is_independent(j) {
                    let row = (0..n.n()).map(|e| if j >> e & 1 == 1 { 0 } else { lift(n.closure(j | 1 << e)) }).collect();
                    lines.insert(j, row);
                }
            }
        }
        Omega { n, labels, lines, classes: HashMap::new() }
    }

    fn in_omega(&self, j: Set, e: [usize; 4]) -> bool {
        let b = |x: usize, y: usize| x != y && j >> x & 1 == 0 && j >> y & 1 == 0 && self.n.is_basis(j | 1 << x | 1 << y);
        b(e[0], e[2]) && b(e[0], e[3]) && b(e[1], e[2]) && b(e[1], e[3])
    }

    fn nondegenerate(&self, j: Set, e: [usize; 4]) -> bool {
        let b = |x: usize, y: usize| x != y && self.n.is_basis(j | 1 << x | 1 << y);
        b(e[0], e[1]) && b(e[2], e[3])
    }

    fn psi(&self, j: Set, e: [usize; 4]) -> Quad {
        let l = &self.lines[&j];
        [l[e[0]], l[e[1]], l[e[2]], l[e[3]]]
    }

    fn val(&self, j: Set, e: [usize; 4]) -> Val {
        if !self.lines.contains_key(&j) || !self.in_omega(j, e) {
            Val::Out
        } else if !self.nondegenerate(j, e) {
            Val::One
        } else {
            Val::Gen(self.classes[&sigma_key(self.psi(j, e))])
        }
    }

    fn symbol(&self, contract: Set, j: Set, e: [usize; 4], nondegenerate: bool) -> CrossRatioSymbol {
        let mut i: Vec<usize> = elems(j).into_iter().map(|x| self.labels[x]).chain(elems(contract)).collect();
        i.sort_unstable();
        let l = |x: usize| self.labels[x];
        CrossRatioSymbol { i, a: l(e[0]), b: l(e[1]), c: l(e[2]), d: l(e[3]), nondegenerate, psi: self.psi(j, e) }
    }

    /// Independent `(r−2)`-sets in lexicographic order of their element lists.
    fn js(&self) -> Vec<Set> {
        let mut v: Vec<Set> = self.lines.keys().copied().collect();
        v.sort_by_key(|&j| elems(j));
        v
    }
}

/// Tuples of `Ω_M`, one per hyperplane quadruple class, each the lexicographically
/// least tuple of its class.
pub fn enumerate_omega(m: &Matroid) -> Vec<CrossRatioSymbol> {
    let labels: Vec<usize> = (0..m.n()).collect();
    let om = Omega::new(m, m, 0, &labels);
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for j in om.js() {
        for e in (0..4).map(|_| 0..m.n()).multi_cartesian_product() {
            let e = [e[0], e[1], e[2], e[3]];
            if om.in_omega(j, e) && seen.insert(sigma_key(om.psi(j, e))) {
                out.push(om.symbol(0, j, e, om.nondegenerate(j, e)));
            }
        }
    }
    out.sort();
    out
}

/// Sparse relation row: `ε` exponent and sorted generator terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Row(i64, Vec<(usize, i64)>);

impl Row {
    fn new(eps: i64, vals: &[Val]) -> Option<Row> {
        let mut terms: Vec<(usize, i64)> = Vec::new();
        for v in vals {
            match v {
                Val::Out => return None,
                Val::One => {}
                Val::Gen(g) => terms.push((*g, 1)),
            }
        }
        terms.sort_unstable();
        let mut merged: Vec<(usize, i64)> = Vec::new();
        for (g, k) in terms {
            match merged.last_mut() {
                Some(last) if last.0 == g => last.1 += k,
                _ => merged.push((g, k)),
            }
        }
        merged.retain(|t| t.1 != 0);
        (eps != 0 || !merged.is_empty()).then_some(Row(eps.rem_euclid(2), merged))
    }

    fn dense(&self, n: usize) -> GroupElement {
        let mut v = vec![0i64; n];
        v[0] = self.0;
        for &(g, k) in &self.1 {
            v[g] += k;
        }
        GroupElement(v)
    }
}

fn has_fano_minor(m: &Matroid) -> bool {
    if m.n() < 7 {
        return false;
    }
    let f7 = named_matroid("F7").expect("catalog");
    m.has_minor(&f7) || m.has_minor(&f7.dual())
}

/// GRS presentation of the embedded minor `M ∖ J / I` with generators keyed in `M`.
pub(crate) fn grs_embedded(m: &Matroid, contract: Set, delete: Set) -> Result<Grs> {
    let n = m.minor(delete, contract)?;
    let labels = elems(m.ground() & !delete & !contract);
    grs_core(m, &n, contract, &labels)
}

fn grs_core(m: &Matroid, n: &Matroid, contract: Set, labels: &[usize]) -> Result<Grs> {
    let mut om = Omega::new(m, n, contract, labels);
    let js = om.js();
    let ground = n.n();
    let quads: Vec<[usize; 4]> =
        (0..ground).permutations(4).map(|e| [e[0], e[1], e[2], e[3]]).collect();

    // Classes, numbered by their least tuples.
    let mut reps: Vec<(Quad, Set, [usize; 4])> = Vec::new();
    let mut seen = HashSet::new();
    for &j in &js {
        for &e in &quads {
            if om.in_omega(j, e) && om.nondegenerate(j, e) {
                let k = sigma_key(om.psi(j, e));
                if seen.insert(k) {
                    reps.push((k, j, e));
                }
            }
        }
    }
    let mut symbols: Vec<CrossRatioSymbol> = reps.iter().map(|&(_, j, e)| om.symbol(contract, j, e, true)).collect();
    let mut order: Vec<usize> = (0..reps.len()).collect();
    order.sort_by(|&a, &b| symbols[a].cmp(&symbols[b]));
    symbols = order.iter().map(|&i| symbols[i].clone()).collect();
    let keys: Vec<Quad> = order.iter().map(|&i| reps[i].0).collect();
    om.classes = keys.iter().enumerate().map(|(i, &k)| (k, i + 1)).collect();

    let mut rows: BTreeSet<Row> = BTreeSet::new();
    let mut hex: BTreeSet<(usize, usize)> = BTreeSet::new();
    for &j in &js {
        for &[a, b, c, d] in &quads {
            if let Val::Gen(x) = om.val(j, [a, b, c, d]) {
                // [abdc] = [abcd]⁻¹
                rows.extend(Row::new(0, &[Val::Gen(x), om.val(j, [a, b, d, c])]));
                // [abcd][acdb][adbc] = −1
                rows.extend(Row::new(1, &[Val::Gen(x), om.val(j, [a, c, d, b]), om.val(j, [a, d, b, c])]));
                if let Val::Gen(y) = om.val(j, [a, c, b, d]) {
                    hex.insert((x, y));
                }
            }
        }
    }
    // [12;34]_J [12;45]_J [12;53]_J = 1
    for &j in &js {
        for e in (0..ground).permutations(5) {
            let (e1, e2, e3, e4, e5) = (e[0], e[1], e[2], e[3], e[4]);
            let v = [om.val(j, [e1, e2, e3, e4]), om.val(j, [e1, e2, e4, e5]), om.val(j, [e1, e2, e5, e3])];
            rows.extend(Row::new(0, &v));
        }
    }
    // [12;34]_{J5} [12;45]_{J3} [12;53]_{J4} = 1
    if n.rank() >= 3 {
        for j in subsets_of_size(n.ground(), n.rank() - 3) {
            if !n.is_independent(j) {
                continue;
            }
            for e in (0..ground).filter(|&x| j >> x & 1 == 0).permutations(5) {
                let (e1, e2, e3, e4, e5) = (e[0], e[1], e[2], e[3], e[4]);
                let v = [
                    om.val(j | 1 << e5, [e1, e2, e3, e4]),
                    om.val(j | 1 << e3, [e1, e2, e4, e5]),
                    om.val(j | 1 << e4, [e1, e2, e5, e3]),
                ];
                rows.extend(Row::new(0, &v));
            }
        }
    }
    if has_fano_minor(n) {
        rows.insert(Row(1, vec![]));
    }

    let ngen = keys.len() + 1;
    let mut names = vec!["-1".to_string()];
    names.extend(symbols.iter().map(CrossRatioSymbol::label));
    let relations = rows.iter().map(|r| r.dense(ngen)).collect();
    let hex_reps = hex
        .iter()
        .map(|&(x, y)| (GroupElement::unit(ngen, x), GroupElement::unit(ngen, y)))
        .collect();
    let pasture = Pasture::from_raw(names, relations, hex_reps, None)?;
    Ok(Grs { pasture, keys, symbols })
}

pub(crate) fn grs(m: &Matroid) -> Result<Grs> {
    let labels: Vec<usize> = (0..m.n()).collect();
    grs_core(m, m, 0, &labels)
}

/// The foundation of `m` from its Gelfand–Rybnikov–Stone presentation.
pub fn grs_presentation(m: &Matroid) -> Result<FoundationReport> {
    Ok(grs(m)?.into_report())
}

#[derive(Clone, Debug)]
pub struct FoundationOptions {
    pub method: Route,
    /// `None` cross-checks matroids with at most seven elements.
    pub cross_check: Option<bool>,
    pub identify: bool,
    pub budget: u64,
}

impl Default for FoundationOptions {
    fn default() -> Self {
        FoundationOptions { method: Route::Grs, cross_check: None, identify: false, budget: crate::error::default_budget() }
    }
}

/// The foundation of `m` by the chosen route, optionally checked against every
/// other applicable route. A disagreement is a verification error.
pub fn foundation(m: &Matroid, opts: &FoundationOptions) -> Result<FoundationReport> {
    if !opts.method.applies_to(m) {
        return Err(Error::Precondition(format!("method {} does not apply to this matroid", opts.method.name())));
    }
    let base = grs(m)?;
    let mut report = if opts.method == Route::Grs {
        base.clone().into_report()
    } else {
        diagram::route_report(m, opts.method, &base)?.0
    };
    if opts.cross_check.unwrap_or(m.n() <= 7) {
        let mut checks = Vec::new();
        for route in Route::ALL {
            if route == Route::Grs || !route.applies_to(m) {
                continue;
            }
            let (_, iso) = diagram::route_report(m, route, &base)?;
            checks.push(CrossCheck { route, isomorphic: iso });
        }
        report.cross_checks = checks;
        if let Some(bad) = report.cross_checks.iter().find(|c| !c.isomorphic) {
            return Err(Error::Verification(format!("route {} disagrees with the GRS presentation", bad.route.name())));
        }
    }
    if opts.identify {
        report.identification = Some(identify_with_budget(&report.pasture, opts.budget)?);
    }
    Ok(report)
}

/// Whether the colimit of `route` maps isomorphically onto the GRS foundation
/// under the canonical comparison map.
pub fn route_agrees(m: &Matroid, route: Route) -> Result<bool> {
    if !route.applies_to(m) {
        return Err(Error::Precondition(format!("method {} does not apply to this matroid", route.name())));
    }
    if route == Route::Grs {
        return Ok(true);
    }
    Ok(diagram::route_report(m, route, &grs(m)?)?.1)
}

/// Shorthand for the GRS foundation pasture of `m`.
pub fn foundation_pasture(m: &Matroid) -> Result<Pasture> {
    Ok(grs(m)?.pasture)
}

/// The hyperplane quadruple `(⟨Ia⟩, ⟨Ib⟩, ⟨Ic⟩, ⟨Id⟩)`.
pub fn psi_of(m: &Matroid, i: Set, e: [usize; 4]) -> Quad {
    e.map(|x| m.closure(i | 1 << x))
}

/// Builds a set from 1-indexed digits, as elements are written in figures.
pub fn set_from_digits(s: &str) -> Set {
    set_of(&s.chars().filter_map(|c| c.to_digit(10)).map(|d| d as usize - 1).collect::<Vec<_>>())
}

#[cfg(test)]
mod tests;
