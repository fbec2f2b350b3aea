//! Fundamental diagrams of embedded minors and fundamental lattice diagrams.
//!
//! Every node is an embedded minor `M ∖ J / I` whose GRS generators are keyed by
//! quadruples of hyperplanes of `M`. A minor embedding sends each cross ratio to
//! the one with the same key, so edge morphisms and the comparison map from the
//! colimit to the GRS foundation need no search.

use std::collections::{HashMap, HashSet};

use rayon::prelude::*;
use serde::Serialize;

use super::{grs, grs_embedded, CrossCheck, FoundationReport, Grs, Quad, Route};
use crate::abgroup::GroupElement;
use crate::error::{Error, Result};
use crate::matroid::{named_matroid, Matroid, Set, SublatticeType};
use crate::pasture::{colimit, is_isomorphism, Diagram, DiagramEdge, PastureMorphism};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DiagramClass {
    General,
    TwoConnected,
    ThreeConnected,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LatticeVariant {
    Full,
    RankLe4,
    RankLe3,
    ThreeConnected,
}

#[derive(Clone, Debug, Serialize)]
pub struct DiagramNode {
    pub kind: String,
    pub contract: Set,
    pub delete: Set,
}

#[derive(Clone, Debug)]
pub struct FoundationDiagram {
    pub nodes: Vec<DiagramNode>,
    /// Foundations of the nodes with the induced edge morphisms.
    pub diagram: Diagram,
    keys: Vec<Vec<Quad>>,
}

impl FoundationDiagram {
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.diagram.edges.iter().map(|e| (e.source, e.target)).collect()
    }

    pub fn num_components(&self) -> usize {
        let mut parent: Vec<usize> = (0..self.nodes.len()).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for e in &self.diagram.edges {
            let (a, b) = (find(&mut parent, e.source), find(&mut parent, e.target));
            parent[a] = b;
        }
        (0..self.nodes.len()).filter(|&x| find(&mut parent, x) == x).count()
    }
}

fn build(m: &Matroid, nodes: Vec<DiagramNode>, edges: Vec<(usize, usize)>) -> Result<FoundationDiagram> {
    let grss: Vec<Grs> = nodes.par_iter().map(|n| grs_embedded(m, n.contract, n.delete)).collect::<Result<_>>()?;
    let index: Vec<HashMap<Quad, usize>> = grss.iter().map(Grs::index).collect();
    let mut out_edges = Vec::with_capacity(edges.len());
    for (s, t) in edges {
        let nt = grss[t].pasture.num_generators();
        let mut images = vec![GroupElement::unit(nt, 0)];
        for k in &grss[s].keys {
            let g = index[t].get(k).ok_or_else(|| {
                Error::Verification(format!("minor embedding {s}→{t} misses a cross ratio of its source"))
            })?;
            images.push(GroupElement::unit(nt, *g));
        }
        out_edges.push(DiagramEdge { source: s, target: t, morphism: PastureMorphism { images } });
    }
    let keys = grss.iter().map(|g| g.keys.clone()).collect();
    let diagram = Diagram { nodes: grss.into_iter().map(|g| g.pasture).collect(), edges: out_edges };
    Ok(FoundationDiagram { nodes, diagram, keys })
}

fn class_types(class: DiagramClass) -> &'static [(&'static str, &'static str)] {
    match class {
        DiagramClass::General => &[
            ("U24", "U(2,4)"),
            ("U25", "U(2,5)"),
            ("U35", "U(3,5)"),
            ("C5", "C5"),
            ("C5*", "C5dual"),
            ("U24+U12", "U(2,4)+U(1,2)"),
            ("F7", "F7"),
            ("F7*", "F7dual"),
        ],
        DiagramClass::TwoConnected => &[
            ("U24", "U(2,4)"),
            ("U25", "U(2,5)"),
            ("U35", "U(3,5)"),
            ("C5", "C5"),
            ("C5*", "C5dual"),
            ("F7", "F7"),
            ("F7*", "F7dual"),
        ],
        DiagramClass::ThreeConnected => &[
            ("U24", "U(2,4)"),
            ("U25", "U(2,5)"),
            ("U35", "U(3,5)"),
            ("W3", "whirl(3)"),
            ("Q6", "Q6"),
            ("P6", "P6"),
            ("F7", "F7"),
            ("F7*", "F7dual"),
        ],
    }
}

/// All embedded minors of the class's types, with every minor embedding among them.
pub fn fundamental_diagram(m: &Matroid, class: DiagramClass) -> Result<FoundationDiagram> {
    let c = m.connectivity();
    match class {
        DiagramClass::TwoConnected if !c.is_2_connected => {
            return Err(Error::Precondition("the 2-connected diagram needs a 2-connected matroid".into()))
        }
        DiagramClass::ThreeConnected if !c.is_3_connected => {
            return Err(Error::Precondition("the 3-connected diagram needs a 3-connected matroid".into()))
        }
        _ => {}
    }
    let mut nodes = Vec::new();
    for (kind, name) in class_types(class) {
        let t = named_matroid(name)?;
        for e in m.minors_isomorphic_to(&t, false) {
            nodes.push(DiagramNode { kind: kind.to_string(), contract: e.contract, delete: e.delete });
        }
    }
    let mut edges = Vec::new();
    for (a, x) in nodes.iter().enumerate() {
        for (b, y) in nodes.iter().enumerate() {
            if a != b && y.contract & !x.contract == 0 && y.delete & !x.delete == 0 {
                edges.push((a, b));
            }
        }
    }
    build(m, nodes, edges)
}

pub(crate) fn rank_le_3_applies(m: &Matroid) -> bool {
    let f7 = named_matroid("F7").expect("catalog");
    m.has_minor(&f7) || !m.has_minor(&f7.dual())
}

/// Realizes the upper sublattice with bottom `f` and atoms `s` as an embedded
/// minor, keeping the least or the greatest representative of each atom.
fn realize(m: &Matroid, f: Set, s: &[Set], greatest: bool) -> (Set, Set) {
    if !greatest {
        return m.sublattice_minor(f, s);
    }
    let mut i = 0;
    for e in crate::matroid::elems(f).into_iter().rev() {
        if m.is_independent(i | 1 << e) {
            i |= 1 << e;
        }
    }
    let reps = s.iter().fold(0, |acc, &a| acc | 1 << (31 - (a & !f).leading_zeros()));
    (i, m.ground() & !i & !reps)
}

/// The fundamental lattice diagram of the given variant.
pub fn lattice_diagram(m: &Matroid, variant: LatticeVariant) -> Result<FoundationDiagram> {
    lattice_diagram_with(m, variant, false)
}

pub(crate) fn lattice_diagram_with(m: &Matroid, variant: LatticeVariant, greatest: bool) -> Result<FoundationDiagram> {
    use SublatticeType as T;
    let mut nodes = Vec::new();
    let mut members: Vec<HashSet<Set>> = Vec::new();
    let typed = |types: &[T], nodes: &mut Vec<DiagramNode>, members: &mut Vec<HashSet<Set>>| {
        for &t in types {
            for u in m.upper_sublattices(t) {
                let (contract, delete) = realize(m, u.bottom, &u.atoms, greatest);
                nodes.push(DiagramNode { kind: t.name().to_string(), contract, delete });
                members.push(u.elements(m).into_iter().collect());
            }
        }
    };
    match variant {
        LatticeVariant::Full => typed(&[T::U24, T::U25, T::U35, T::C5, T::F7, T::F7dual], &mut nodes, &mut members),
        LatticeVariant::ThreeConnected => typed(
            &[T::U24, T::U25, T::U35, T::W3, T::Q6, T::P6, T::F7, T::F7dual],
            &mut nodes,
            &mut members,
        ),
        LatticeVariant::RankLe4 | LatticeVariant::RankLe3 => {
            if variant == LatticeVariant::RankLe3 && !rank_le_3_applies(m) {
                return Err(Error::Precondition("the rank-3 lattice diagram needs an F7 minor or no F7* minor".into()));
            }
            let k = if variant == LatticeVariant::RankLe3 { 3 } else { 4 };
            let seeds: Vec<Set> = [T::U24, T::F7, T::F7dual]
                .into_iter()
                .flat_map(|t| m.upper_sublattices(t))
                .map(|u| u.bottom)
                .collect();
            let flats = m.flats();
            for &f in &flats {
                let corank = m.rank() - m.rank_of(f);
                if corank > k || !seeds.iter().any(|&b| f & !b == 0) {
                    continue;
                }
                let (contract, delete) = realize(m, f, &m.covers_of(f), greatest);
                nodes.push(DiagramNode { kind: format!("rank{corank}"), contract, delete });
                members.push(flats.iter().copied().filter(|&g| f & !g == 0).collect());
            }
        }
    }
    let mut edges = Vec::new();
    for a in 0..nodes.len() {
        for b in 0..nodes.len() {
            if a != b && members[a].len() < members[b].len() && members[a].is_subset(&members[b]) {
                edges.push((a, b));
            }
        }
    }
    build(m, nodes, edges)
}

fn route_diagram(m: &Matroid, route: Route) -> Result<FoundationDiagram> {
    match route {
        Route::Grs => Err(Error::Precondition("the GRS route has no diagram".into())),
        Route::Diagram => fundamental_diagram(m, DiagramClass::General),
        Route::Diagram2 => fundamental_diagram(m, DiagramClass::TwoConnected),
        Route::Diagram3 => fundamental_diagram(m, DiagramClass::ThreeConnected),
        Route::Lattice => lattice_diagram(m, LatticeVariant::Full),
        Route::LatticeRankLe4 => lattice_diagram(m, LatticeVariant::RankLe4),
        Route::LatticeRankLe3 => lattice_diagram(m, LatticeVariant::RankLe3),
        Route::Lattice3 => lattice_diagram(m, LatticeVariant::ThreeConnected),
    }
}

/// Colimit of a foundation diagram as a report, and whether the canonical map
/// to the GRS foundation `base` is an isomorphism.
pub(crate) fn colimit_report(
    fd: &FoundationDiagram,
    route: Route,
    base: &Grs,
) -> Result<(FoundationReport, bool)> {
    let col = colimit(&fd.diagram)?;
    let n = col.pasture.num_generators();
    let nb = base.pasture.num_generators();
    let base_index = base.index();
    let mut phi: Vec<Option<GroupElement>> = vec![None; n];
    phi[0] = Some(GroupElement::unit(nb, 0));
    let mut consistent = true;
    let mut image_of: HashMap<Quad, GroupElement> = HashMap::new();
    for (k, keys) in fd.keys.iter().enumerate() {
        for (i, key) in keys.iter().enumerate() {
            let c = &col.cones[k].images[i + 1];
            image_of.entry(*key).or_insert_with(|| c.clone());
            let nz: Vec<(usize, i64)> = c.0.iter().copied().enumerate().filter(|&(_, x)| x != 0).collect();
            let &[(j, 1)] = &nz[..] else {
                return Err(Error::Verification("a cone image is not a colimit generator".into()));
            };
            let g = base_index
                .get(key)
                .ok_or_else(|| Error::Verification("a node cross ratio has no counterpart in M".into()))?;
            let target = GroupElement::unit(nb, *g);
            match &phi[j] {
                Some(prev) if *prev != target => consistent = false,
                Some(_) => {}
                None => phi[j] = Some(target),
            }
        }
    }
    let images: Vec<GroupElement> = phi
        .into_iter()
        .map(|x| x.ok_or_else(|| Error::Verification("a colimit generator comes from no node".into())))
        .collect::<Result<_>>()?;
    let iso = consistent && is_isomorphism(&col.pasture, &base.pasture, &PastureMorphism { images })?;
    let dictionary = base
        .symbols
        .iter()
        .zip(&base.keys)
        .map(|(s, k)| {
            image_of
                .get(k)
                .map(|g| (s.clone(), g.clone()))
                .ok_or_else(|| Error::Verification(format!("cross ratio {} appears in no node", s.label())))
        })
        .collect::<Result<_>>()?;
    let report = FoundationReport {
        pasture: col.pasture,
        dictionary,
        method: route,
        cross_checks: vec![CrossCheck { route: Route::Grs, isomorphic: iso }],
        identification: None,
    };
    Ok((report, iso))
}

pub(crate) fn route_report(m: &Matroid, route: Route, base: &Grs) -> Result<(FoundationReport, bool)> {
    let fd = route_diagram(m, route)?;
    colimit_report(&fd, route, base)
}

/// The foundation of `m` as the colimit of a diagram route, with the GRS
/// comparison recorded in its cross checks.
pub fn foundation_via_diagram(m: &Matroid, route: Route) -> Result<FoundationReport> {
    if !route.applies_to(m) {
        return Err(Error::Precondition(format!("method {} does not apply to this matroid", route.name())));
    }
    let base = grs(m)?;
    Ok(route_report(m, route, &base)?.0)
}
