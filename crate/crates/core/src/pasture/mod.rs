//! Pastures with finitely presented unit groups.
//!
//! A pasture is stored as a presentation (generator names, multiplicative
//! relations, additive three-term relations) together with its derived
//! canonical data: the unit group in Smith normal form, the distinguished
//! element `ε = -1` (always generator 0), and the null set as a canonical set
//! of hexagons.

mod catalog;
mod json;
mod search;

use std::collections::{BTreeMap, HashMap, HashSet};

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::abgroup::{Coords, FpAbelianGroup, GroupElement, IntMatrix};
use crate::error::{Error, Result};

pub use catalog::{catalog_names, field, identify, identify_with_budget, named, regular_k, Identification};
pub use search::{automorphisms, find_isomorphism, hom_enumerate, hom_enumerate_with_budget, is_isomorphism};
pub use search::fundamental_presentation;
pub use search::hom_exists;

/// A unit or zero, as it appears in a presentation: `sign · ∏ gen^exp`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Elem {
    Zero,
    Unit { sign: i8, exps: BTreeMap<String, i64> },
}

impl Elem {
    pub fn one() -> Elem {
        Elem::Unit { sign: 1, exps: BTreeMap::new() }
    }

    pub fn minus_one() -> Elem {
        Elem::Unit { sign: -1, exps: BTreeMap::new() }
    }

    /// `sign · ∏ name^exp`; repeated names accumulate.
    pub fn mono(sign: i8, factors: &[(&str, i64)]) -> Elem {
        let mut exps = BTreeMap::new();
        for &(n, e) in factors {
            *exps.entry(n.to_string()).or_insert(0) += e;
        }
        exps.retain(|_, e| *e != 0);
        Elem::Unit { sign, exps }
    }
}

impl std::fmt::Display for Elem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Elem::Zero => write!(f, "0"),
            Elem::Unit { sign, exps } => {
                let mut parts: Vec<String> = if *sign < 0 { vec!["-1".into()] } else { vec![] };
                parts.extend(exps.iter().map(|(n, e)| if *e == 1 { n.clone() } else { format!("{n}^{e}") }));
                if parts.is_empty() {
                    write!(f, "1")
                } else {
                    write!(f, "{}", parts.join("*"))
                }
            }
        }
    }
}

/// `∏ gen^exp = sign`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultRelation {
    pub exps: BTreeMap<String, i64>,
    pub sign: i8,
}

/// The textual form of a pasture: `F±⟨generators⟩ ⫽ relations`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Presentation {
    pub generators: Vec<String>,
    pub mult_relations: Vec<MultRelation>,
    pub add_relations: Vec<[Elem; 3]>,
}

/// Zero or a unit given by exponents over the pasture's generators (index 0 is `ε`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PastureElement {
    Zero,
    Unit(GroupElement),
}

/// One fundamental pair `(x, y)` with `x + y - 1 ∈ N`, in raw exponents and canonical coordinates.
#[derive(Clone, Debug)]
pub struct HexPair {
    pub x: GroupElement,
    pub y: GroupElement,
    pub cx: Coords,
    pub cy: Coords,
}

/// The orbit of a fundamental pair under the six standard transformations.
#[derive(Clone, Debug)]
pub struct Hexagon {
    /// Distinct pairs, sorted by canonical coordinates; the first one is the key.
    pub pairs: Vec<HexPair>,
}

impl Hexagon {
    pub fn key(&self) -> (&Coords, &Coords) {
        (&self.pairs[0].cx, &self.pairs[0].cy)
    }

    /// Byte encoding of the key: per coordinate a sign byte, a length, then big-endian magnitude.
    pub fn canonical_key(&self) -> Vec<u8> {
        let mut out = Vec::new();
        for c in [&self.pairs[0].cx, &self.pairs[0].cy] {
            for x in c {
                let (sign, mag) = x.to_bytes_be();
                out.push(matches!(sign, num_bigint::Sign::Minus) as u8);
                out.push(mag.len() as u8);
                out.extend(mag);
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NumericalType {
    pub free_rank: usize,
    pub invariant_factors: Vec<u64>,
    pub minus_one_trivial: bool,
    pub hexagon_count: usize,
}

impl std::fmt::Display for NumericalType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "({}, {:?}, {}, {})",
            self.free_rank, self.invariant_factors, self.minus_one_trivial, self.hexagon_count
        )
    }
}

#[derive(Clone, Debug)]
pub struct Pasture {
    presentation: Presentation,
    /// `names[0]` is `-1`; `names[i]` for `i ≥ 1` are the presentation generators.
    names: Vec<String>,
    group: FpAbelianGroup,
    /// Multiplicative relations as exponent rows, without the implicit `2ε = 0`.
    relations: Vec<GroupElement>,
    hexagons: Vec<Hexagon>,
    name_hint: Option<String>,
}

/// Images of every source generator (index 0 is `ε`) as target exponent vectors.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PastureMorphism {
    pub images: Vec<GroupElement>,
}

impl PastureMorphism {
    pub fn apply(&self, x: &GroupElement) -> GroupElement {
        let n = self.images.first().map_or(0, |e| e.len());
        let mut out = vec![0i64; n];
        for (i, &k) in x.0.iter().enumerate() {
            if k != 0 {
                for (o, v) in out.iter_mut().zip(&self.images[i].0) {
                    *o += k * v;
                }
            }
        }
        GroupElement(out)
    }

    /// `g ∘ self`.
    pub fn then(&self, g: &PastureMorphism) -> PastureMorphism {
        PastureMorphism { images: self.images.iter().map(|x| g.apply(x)).collect() }
    }
}

/// Finite diagram of pastures; edge morphisms go from `source` to `target`.
#[derive(Clone, Debug, Default)]
pub struct Diagram {
    pub nodes: Vec<Pasture>,
    pub edges: Vec<DiagramEdge>,
}

#[derive(Clone, Debug)]
pub struct DiagramEdge {
    pub source: usize,
    pub target: usize,
    pub morphism: PastureMorphism,
}

/// Colimit with its cone morphisms, one per diagram node.
#[derive(Clone, Debug)]
pub struct Colimit {
    pub pasture: Pasture,
    pub cones: Vec<PastureMorphism>,
}

fn sign_of(eps_exp: i64) -> i8 {
    if eps_exp.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// The six pairs of `Ξ(x, y)` in raw exponents.
fn xi(x: &GroupElement, y: &GroupElement, eps: &GroupElement) -> [(GroupElement, GroupElement); 6] {
    let ix = x.neg();
    let iy = y.neg();
    let yx = eps.add(y).sub(x);
    let xy = eps.add(x).sub(y);
    [
        (x.clone(), y.clone()),
        (y.clone(), x.clone()),
        (ix.clone(), yx.clone()),
        (yx, ix),
        (iy.clone(), xy.clone()),
        (xy, iy),
    ]
}

impl Pasture {
    pub fn from_presentation(p: Presentation) -> Result<Pasture> {
        Self::from_presentation_named(p, None)
    }

    pub fn from_presentation_named(p: Presentation, name_hint: Option<String>) -> Result<Pasture> {
        let mut names = vec!["-1".to_string()];
        let mut index = HashMap::new();
        for g in &p.generators {
            if g == "-1" || g == "sign" || g.is_empty() {
                return Err(Error::Parse(format!("reserved generator name '{g}'")));
            }
            if index.insert(g.clone(), names.len()).is_some() {
                return Err(Error::Parse(format!("duplicate generator '{g}'")));
            }
            names.push(g.clone());
        }
        let n = names.len();
        let word = |sign: i8, exps: &BTreeMap<String, i64>| -> Result<GroupElement> {
            let mut v = vec![0i64; n];
            if sign == -1 {
                v[0] = 1;
            } else if sign != 1 {
                return Err(Error::Parse(format!("sign must be ±1, got {sign}")));
            }
            for (g, e) in exps {
                let i = *index.get(g).ok_or_else(|| Error::Parse(format!("unknown generator '{g}' in word")))?;
                v[i] += e;
            }
            Ok(GroupElement(v))
        };
        let mut relations = Vec::new();
        for r in &p.mult_relations {
            relations.push(word(r.sign, &r.exps)?);
        }
        let mut hex_reps = Vec::new();
        for term in &p.add_relations {
            let units: Vec<GroupElement> = term
                .iter()
                .filter_map(|e| match e {
                    Elem::Zero => None,
                    Elem::Unit { sign, exps } => Some(word(*sign, exps)),
                })
                .collect::<Result<_>>()?;
            match units.len() {
                0 => {}
                1 => return Err(Error::Parse("relation forces a unit to be zero".into())),
                // a + b + 0: b = -a
                2 => relations.push(units[0].sub(&units[1]).add(&GroupElement::unit(n, 0))),
                _ => {
                    let eps = GroupElement::unit(n, 0);
                    hex_reps.push((eps.add(&units[0]).sub(&units[2]), eps.add(&units[1]).sub(&units[2])));
                }
            }
        }
        Self::assemble(p, names, relations, hex_reps, name_hint)
    }

    fn assemble(
        presentation: Presentation,
        names: Vec<String>,
        relations: Vec<GroupElement>,
        hex_reps: Vec<(GroupElement, GroupElement)>,
        name_hint: Option<String>,
    ) -> Result<Pasture> {
        let n = names.len();
        let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(relations.len() + 1);
        let mut two_eps = vec![BigInt::zero(); n];
        two_eps[0] = BigInt::from(2);
        rows.push(two_eps);
        for r in &relations {
            rows.push(r.0.iter().map(|&x| BigInt::from(x)).collect());
        }
        let group = FpAbelianGroup::new(n, IntMatrix::from_rows(n, rows)?)?;
        let eps = GroupElement::unit(n, 0);
        let mut seen: BTreeMap<(Coords, Coords), Hexagon> = BTreeMap::new();
        for (x, y) in hex_reps {
            let hex = Self::orbit(&group, &eps, &x, &y);
            let key = (hex.pairs[0].cx.clone(), hex.pairs[0].cy.clone());
            seen.entry(key).or_insert(hex);
        }
        Ok(Pasture {
            presentation,
            names,
            group,
            relations,
            hexagons: seen.into_values().collect(),
            name_hint,
        })
    }

    pub(crate) fn orbit(group: &FpAbelianGroup, eps: &GroupElement, x: &GroupElement, y: &GroupElement) -> Hexagon {
        let mut pairs: Vec<HexPair> = xi(x, y, eps)
            .into_iter()
            .map(|(x, y)| {
                let cx = group.coords_unchecked(&x.0);
                let cy = group.coords_unchecked(&y.0);
                HexPair { x, y, cx, cy }
            })
            .collect();
        pairs.sort_by(|a, b| (&a.cx, &a.cy).cmp(&(&b.cx, &b.cy)));
        pairs.dedup_by(|a, b| a.cx == b.cx && a.cy == b.cy);
        Hexagon { pairs }
    }

    /// Builds a pasture from raw rows and fundamental pairs, synthesising its presentation.
    pub(crate) fn from_raw(
        names: Vec<String>,
        relations: Vec<GroupElement>,
        hex_reps: Vec<(GroupElement, GroupElement)>,
        name_hint: Option<String>,
    ) -> Result<Pasture> {
        let elem = |g: &GroupElement| Self::elem_with_names(&names, g);
        let presentation = Presentation {
            generators: names[1..].to_vec(),
            mult_relations: relations
                .iter()
                .filter(|r| r.0[1..].iter().any(|&e| e != 0) || r.0[0].rem_euclid(2) != 0)
                .map(|r| match elem(r) {
                    Elem::Unit { sign, exps } => MultRelation { exps, sign },
                    Elem::Zero => unreachable!(),
                })
                .collect(),
            add_relations: hex_reps.iter().map(|(x, y)| [elem(x), elem(y), Elem::minus_one()]).collect(),
        };
        Self::assemble(presentation, names, relations, hex_reps, name_hint)
    }

    fn elem_with_names(names: &[String], g: &GroupElement) -> Elem {
        let exps = g.0[1..]
            .iter()
            .enumerate()
            .filter(|(_, &e)| e != 0)
            .map(|(i, &e)| (names[i + 1].clone(), e))
            .collect();
        Elem::Unit { sign: sign_of(g.0[0]), exps }
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn name_hint(&self) -> Option<&str> {
        self.name_hint.as_deref()
    }

    pub fn with_name(mut self, name: &str) -> Pasture {
        self.name_hint = Some(name.to_string());
        self
    }

    /// Generator names, `"-1"` first.
    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn num_generators(&self) -> usize {
        self.names.len()
    }

    pub fn unit_group(&self) -> &FpAbelianGroup {
        &self.group
    }

    pub fn relations(&self) -> &[GroupElement] {
        &self.relations
    }

    pub fn epsilon(&self) -> GroupElement {
        GroupElement::unit(self.names.len(), 0)
    }

    pub fn one(&self) -> GroupElement {
        GroupElement::zero(self.names.len())
    }

    pub fn generator(&self, name: &str) -> Option<GroupElement> {
        self.names.iter().position(|n| n == name).map(|i| GroupElement::unit(self.names.len(), i))
    }

    /// `∏ name^exp`, with `sign = -1` multiplying by `ε`.
    pub fn word(&self, sign: i8, factors: &[(&str, i64)]) -> Result<GroupElement> {
        let mut g = self.one();
        if sign == -1 {
            g.0[0] = 1;
        }
        for &(name, e) in factors {
            let i = self
                .names
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| Error::UnknownName(name.to_string()))?;
            g.0[i] += e;
        }
        Ok(g)
    }

    pub fn elem(&self, g: &GroupElement) -> Elem {
        Self::elem_with_names(&self.names, g)
    }

    pub fn coords(&self, g: &GroupElement) -> Result<Coords> {
        self.group.coords(g)
    }

    pub fn element_equal(&self, a: &GroupElement, b: &GroupElement) -> Result<bool> {
        self.group.element_equal(a, b)
    }

    pub fn minus_one_trivial(&self) -> bool {
        self.group.is_identity(&self.epsilon()).unwrap_or(false)
    }

    pub fn hexagons(&self) -> &[Hexagon] {
        &self.hexagons
    }

    /// Fundamental elements in canonical coordinates, sorted, with a raw representative each.
    pub fn fundamental_elements(&self) -> Vec<(Coords, GroupElement)> {
        let mut m: BTreeMap<Coords, GroupElement> = BTreeMap::new();
        for h in &self.hexagons {
            for p in &h.pairs {
                m.entry(p.cx.clone()).or_insert_with(|| p.x.clone());
            }
        }
        m.into_iter().collect()
    }

    /// All fundamental pairs in canonical coordinates.
    pub fn fundamental_pairs(&self) -> HashSet<(Coords, Coords)> {
        self.hexagons.iter().flat_map(|h| h.pairs.iter().map(|p| (p.cx.clone(), p.cy.clone()))).collect()
    }

    /// Whether `a + b + c ∈ N`.
    pub fn is_null(&self, a: &PastureElement, b: &PastureElement, c: &PastureElement) -> Result<bool> {
        let units: Vec<&GroupElement> = [a, b, c]
            .into_iter()
            .filter_map(|e| match e {
                PastureElement::Zero => None,
                PastureElement::Unit(g) => Some(g),
            })
            .collect();
        match units.len() {
            0 => Ok(true),
            1 => Ok(false),
            2 => self.element_equal(units[0], &units[1].add(&self.epsilon())),
            _ => {
                let eps = self.epsilon();
                let x = self.coords(&eps.add(units[0]).sub(units[2]))?;
                let y = self.coords(&eps.add(units[1]).sub(units[2]))?;
                Ok(self.fundamental_pairs().contains(&(x, y)))
            }
        }
    }

    pub fn numerical_type(&self) -> NumericalType {
        NumericalType {
            free_rank: self.group.free_rank(),
            invariant_factors: self.group.invariant_factors().iter().map(|d| d.to_u64().unwrap_or(u64::MAX)).collect(),
            minus_one_trivial: self.minus_one_trivial(),
            hexagon_count: self.hexagons.len(),
        }
    }

    /// Whether every presentation generator is a fundamental element.
    pub fn generators_fundamental(&self) -> bool {
        let fund: HashSet<Coords> = self.fundamental_elements().into_iter().map(|(c, _)| c).collect();
        (1..self.names.len()).all(|i| fund.contains(&self.group.coords_unchecked(&GroupElement::unit(self.names.len(), i).0)))
    }

    /// Whether `ε` and the fundamental elements generate the unit group.
    pub fn is_fundamental_generated(&self) -> bool {
        let mut gens: Vec<GroupElement> = self.fundamental_elements().into_iter().map(|(_, g)| g).collect();
        gens.push(self.epsilon());
        self.group.quotient_group(&gens).map(|q| q.is_trivial()).unwrap_or(false)
    }

    /// `P ⫽ ⟨⟨terms⟩⟩`; the canonical surjection is the identity on generators.
    pub fn quotient(&self, terms: &[[PastureElement; 3]]) -> Result<Pasture> {
        let mut p = self.presentation.clone();
        for t in terms {
            let mut out = Vec::with_capacity(3);
            for e in t {
                out.push(match e {
                    PastureElement::Zero => Elem::Zero,
                    PastureElement::Unit(g) => {
                        if g.len() != self.names.len() {
                            return Err(Error::Dimension { expected: self.names.len(), got: g.len() });
                        }
                        self.elem(g)
                    }
                });
            }
            p.add_relations.push([out[0].clone(), out[1].clone(), out[2].clone()]);
        }
        Pasture::from_presentation(p)
    }

    /// Identity morphism on generators, used as the quotient surjection.
    pub fn identity(&self) -> PastureMorphism {
        let n = self.names.len();
        PastureMorphism { images: (0..n).map(|i| GroupElement::unit(n, i)).collect() }
    }

    /// Checks relations, `ε ↦ ε`, and hexagon preservation.
    pub fn is_morphism(&self, target: &Pasture, f: &PastureMorphism) -> Result<bool> {
        if f.images.len() != self.names.len() {
            return Err(Error::Dimension { expected: self.names.len(), got: f.images.len() });
        }
        for im in &f.images {
            if im.len() != target.names.len() {
                return Err(Error::Dimension { expected: target.names.len(), got: im.len() });
            }
        }
        if !target.element_equal(&f.images[0], &target.epsilon())? {
            return Ok(false);
        }
        for r in &self.relations {
            if !target.group.is_identity(&f.apply(r))? {
                return Ok(false);
            }
        }
        let pairs = target.fundamental_pairs();
        for h in &self.hexagons {
            let p = &h.pairs[0];
            let key = (target.coords(&f.apply(&p.x))?, target.coords(&f.apply(&p.y))?);
            if !pairs.contains(&key) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Whether two morphisms agree on every generator.
    pub fn morphisms_equal(&self, target: &Pasture, f: &PastureMorphism, g: &PastureMorphism) -> Result<bool> {
        for (a, b) in f.images.iter().zip(&g.images) {
            if !target.element_equal(a, b)? {
                return Ok(false);
            }
        }
        Ok(f.images.len() == g.images.len())
    }
}

/// Union-find over generator indices used to merge plain generator identifications.
struct Dsu(Vec<usize>);

impl Dsu {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            self.0[hi] = lo;
        }
    }
}

/// The tensor product `P₁ ⊗ P₂` with its two canonical inclusions.
pub fn tensor(p1: &Pasture, p2: &Pasture) -> Result<Colimit> {
    colimit(&Diagram { nodes: vec![p1.clone(), p2.clone()], edges: vec![] })
}

/// Colimit of a finite diagram as one joint presentation.
///
/// Edge images that are plain generators are merged directly; other images
/// become multiplicative relations.
pub fn colimit(d: &Diagram) -> Result<Colimit> {
    for e in &d.edges {
        if e.source >= d.nodes.len() || e.target >= d.nodes.len() {
            return Err(Error::Precondition(format!("edge {}→{} has an invalid endpoint", e.source, e.target)));
        }
        if !d.nodes[e.source].is_morphism(&d.nodes[e.target], &e.morphism)? {
            return Err(Error::Precondition(format!("edge {}→{} is not a pasture morphism", e.source, e.target)));
        }
    }
    let mut offset = Vec::with_capacity(d.nodes.len());
    let mut total = 1;
    for p in &d.nodes {
        offset.push(total - 1);
        total += p.num_generators() - 1;
    }
    let global = |node: usize, i: usize| if i == 0 { 0 } else { offset[node] + i };
    let mut dsu = Dsu((0..total).collect());
    let mut extra: Vec<(usize, GroupElement, usize)> = Vec::new();
    for e in &d.edges {
        for (i, im) in e.morphism.images.iter().enumerate().skip(1) {
            let nz: Vec<(usize, i64)> = im.0.iter().copied().enumerate().filter(|&(_, x)| x != 0).collect();
            if nz.len() == 1 && nz[0].1 == 1 && nz[0].0 != 0 {
                dsu.union(global(e.source, i), global(e.target, nz[0].0));
            } else {
                extra.push((e.source, GroupElement::unit(d.nodes[e.source].num_generators(), i), e.target));
                extra.push((e.target, im.clone(), usize::MAX));
            }
        }
    }
    let mut rep_index = vec![usize::MAX; total];
    let mut names = vec!["-1".to_string()];
    let multi = d.nodes.len() > 1;
    for node in 0..d.nodes.len() {
        for i in 1..d.nodes[node].num_generators() {
            let g = global(node, i);
            if dsu.find(g) == g {
                rep_index[g] = names.len();
                let base = &d.nodes[node].names[i];
                names.push(if multi { format!("n{node}.{base}") } else { base.clone() });
            }
        }
    }
    let n = names.len();
    let mut map_node = |node: usize, x: &GroupElement| -> GroupElement {
        let mut v = vec![0i64; n];
        v[0] = x.0[0];
        for (i, &e) in x.0.iter().enumerate().skip(1) {
            if e != 0 {
                v[rep_index[dsu.find(global(node, i))]] += e;
            }
        }
        GroupElement(v)
    };
    let mut relations = Vec::new();
    let mut hex_reps = Vec::new();
    for (node, p) in d.nodes.iter().enumerate() {
        for r in &p.relations {
            relations.push(map_node(node, r));
        }
        for h in &p.hexagons {
            hex_reps.push((map_node(node, &h.pairs[0].x), map_node(node, &h.pairs[0].y)));
        }
    }
    for pair in extra.chunks(2) {
        let a = map_node(pair[0].0, &pair[0].1);
        let b = map_node(pair[1].0, &pair[1].1);
        relations.push(a.sub(&b));
    }
    relations.retain(|r| r.0.iter().any(|&x| x != 0));
    relations.sort();
    relations.dedup();
    let cones = d
        .nodes
        .iter()
        .enumerate()
        .map(|(node, p)| PastureMorphism {
            images: (0..p.num_generators()).map(|i| map_node(node, &GroupElement::unit(p.num_generators(), i))).collect(),
        })
        .collect();
    let pasture = Pasture::from_raw(names, relations, hex_reps, None)?;
    Ok(Colimit { pasture, cones })
}

pub use json::{presentation_from_json, presentation_to_json};

#[cfg(test)]
mod tests;
