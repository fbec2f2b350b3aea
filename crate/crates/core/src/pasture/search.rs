//! Morphism search between pastures.
//!
//! Homomorphisms are found by constraint propagation over the presentation
//! generators of the source: each generator gets a domain of target
//! elements, each multiplicative relation and each hexagon's representative
//! pair becomes a constraint, and domains are filtered as soon as a
//! constraint has a single unassigned generator left.

use std::collections::{HashMap, HashSet};

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::{Pasture, PastureMorphism};
use crate::abgroup::{smith_normal_form, Coords, GroupElement, IntMatrix};
use crate::error::{default_budget, Error, Result};

type Val = Vec<i64>;

fn to_val(c: &Coords) -> Result<Val> {
    c.iter()
        .map(|x| x.to_i64().ok_or_else(|| Error::Precondition("coordinate exceeds 64 bits".into())))
        .collect()
}

/// Target-side data in canonical coordinates.
struct Target {
    moduli: Vec<i64>,
    eps: Val,
    fund: Vec<Val>,
    all: Option<Vec<Val>>,
    pairs: HashSet<(Val, Val)>,
}

impl Target {
    fn new(q: &Pasture) -> Result<Target> {
        let g = q.unit_group();
        let moduli = (0..g.dim())
            .map(|i| g.coordinate_order(i).to_i64().ok_or_else(|| Error::Precondition("torsion too large".into())))
            .collect::<Result<Vec<_>>>()?;
        let eps = to_val(&q.coords(&q.epsilon())?)?;
        let fund = q.fundamental_elements().iter().map(|(c, _)| to_val(c)).collect::<Result<Vec<_>>>()?;
        let all = if g.is_finite() {
            Some(g.elements()?.iter().map(to_val).collect::<Result<Vec<_>>>()?)
        } else {
            None
        };
        let pairs = q
            .fundamental_pairs()
            .iter()
            .map(|(a, b)| Ok((to_val(a)?, to_val(b)?)))
            .collect::<Result<HashSet<_>>>()?;
        Ok(Target { moduli, eps, fund, all, pairs })
    }

    fn reduce(&self, v: &mut [i64]) {
        for (x, &m) in v.iter_mut().zip(&self.moduli) {
            if m > 0 {
                *x = x.rem_euclid(m);
            }
        }
    }

    fn axpy(&self, acc: &mut [i64], v: &[i64], k: i64) {
        for (a, b) in acc.iter_mut().zip(v) {
            *a += k * b;
        }
        self.reduce(acc);
    }
}

#[derive(Clone)]
struct Word {
    terms: Vec<(usize, i64)>,
    konst: Val,
}

enum Kind {
    Rel,
    Hex,
}

struct Con {
    kind: Kind,
    words: Vec<Word>,
    vars: Vec<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Table {
    Fund,
    All,
}

struct Csp<'a> {
    t: &'a Target,
    tables: Vec<Table>,
    domains: Vec<Vec<u32>>,
    cons: Vec<Con>,
    var_cons: Vec<Vec<usize>>,
    unassigned: Vec<usize>,
    assign: Vec<Option<u32>>,
    trail: Vec<(usize, Vec<u32>)>,
    nodes: u64,
    budget: u64,
    results: Vec<Vec<Val>>,
    stop_after: Option<usize>,
    injective: Option<Vec<Coords>>,
    accept: &'a dyn Fn(&[Val]) -> Result<bool>,
}

impl<'a> Csp<'a> {
    fn value(&self, v: usize, idx: u32) -> &Val {
        match self.tables[v] {
            Table::Fund => &self.t.fund[idx as usize],
            Table::All => &self.t.all.as_ref().unwrap()[idx as usize],
        }
    }

    fn eval(&self, w: &Word, skip: Option<usize>) -> (Val, i64) {
        let mut acc = w.konst.clone();
        let mut k = 0;
        for &(v, c) in &w.terms {
            if Some(v) == skip {
                k += c;
                continue;
            }
            let idx = self.assign[v].expect("assigned variable");
            let val = self.value(v, idx).clone();
            self.t.axpy(&mut acc, &val, c);
        }
        (acc, k)
    }

    fn satisfied(&self, c: &Con) -> bool {
        match c.kind {
            Kind::Rel => self.eval(&c.words[0], None).0.iter().all(|&x| x == 0),
            Kind::Hex => {
                let x = self.eval(&c.words[0], None).0;
                let y = self.eval(&c.words[1], None).0;
                self.t.pairs.contains(&(x, y))
            }
        }
    }

    /// Restricts the domain of `w`, the only unassigned variable of constraint `ci`.
    fn filter(&mut self, ci: usize, w: usize) -> bool {
        let c = &self.cons[ci];
        let partial: Vec<(Val, i64)> = c.words.iter().map(|word| self.eval(word, Some(w))).collect();
        let kind = &c.kind;
        let keep: Vec<u32> = self.domains[w]
            .iter()
            .copied()
            .filter(|&idx| {
                let val = self.value(w, idx);
                let mut outs = partial.iter().map(|(p, k)| {
                    let mut acc = p.clone();
                    if *k != 0 {
                        self.t.axpy(&mut acc, val, *k);
                    }
                    acc
                });
                match kind {
                    Kind::Hex => {
                        let x = outs.next().unwrap();
                        let y = outs.next().unwrap();
                        self.t.pairs.contains(&(x, y))
                    }
                    Kind::Rel => outs.next().unwrap().iter().all(|&x| x == 0),
                }
            })
            .collect();
        let empty = keep.is_empty();
        if keep.len() != self.domains[w].len() {
            let old = std::mem::replace(&mut self.domains[w], keep);
            self.trail.push((w, old));
        }
        !empty
    }

    fn propagate(&mut self, v: usize) -> bool {
        for &ci in &self.var_cons[v] {
            self.unassigned[ci] -= 1;
        }
        for k in 0..self.var_cons[v].len() {
            let ci = self.var_cons[v][k];
            match self.unassigned[ci] {
                0 => {
                    if !self.satisfied(&self.cons[ci]) {
                        return false;
                    }
                }
                1 => {
                    let w = *self.cons[ci].vars.iter().find(|&&u| self.assign[u].is_none()).unwrap();
                    if !self.filter(ci, w) {
                        return false;
                    }
                }
                _ => {}
            }
        }
        true
    }

    fn injective_ok(&self, v: usize, idx: u32) -> bool {
        let Some(src) = &self.injective else { return true };
        let val = self.value(v, idx);
        self.assign.iter().enumerate().all(|(u, a)| match a {
            Some(j) if u != v => (self.value(u, *j) == val) == (src[u] == src[v]),
            _ => true,
        })
    }

    fn dfs(&mut self) -> Result<bool> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::BudgetExceeded(self.budget));
        }
        // Smallest domain first; ties go to the variable sharing most constraints with assigned ones.
        let next = (0..self.assign.len()).filter(|&v| self.assign[v].is_none()).min_by_key(|&v| {
            let closing = self.var_cons[v].iter().filter(|&&ci| self.unassigned[ci] == 2).count();
            let linked = self.var_cons[v].iter().filter(|&&ci| self.unassigned[ci] < self.cons[ci].vars.len()).count();
            (self.domains[v].len(), usize::MAX - closing, usize::MAX - linked)
        });
        let Some(v) = next else {
            let vals: Vec<Val> =
                (0..self.assign.len()).map(|u| self.value(u, self.assign[u].unwrap()).clone()).collect();
            if (self.accept)(&vals)? {
                self.results.push(vals);
                if self.stop_after.is_some_and(|k| self.results.len() >= k) {
                    return Ok(true);
                }
            }
            return Ok(false);
        };
        let dom = self.domains[v].clone();
        for idx in dom {
            if !self.injective_ok(v, idx) {
                continue;
            }
            self.assign[v] = Some(idx);
            let mark = self.trail.len();
            let ok = self.propagate(v);
            let stop = if ok { self.dfs()? } else { false };
            while self.trail.len() > mark {
                let (w, old) = self.trail.pop().unwrap();
                self.domains[w] = old;
            }
            for &ci in &self.var_cons[v] {
                self.unassigned[ci] += 1;
            }
            self.assign[v] = None;
            if stop {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

struct SearchSpec<'a> {
    stop_after: Option<usize>,
    injective: bool,
    budget: u64,
    accept: &'a dyn Fn(&[Val]) -> Result<bool>,
}

/// Runs the search from `p` into `q`; returns target coordinates per source generator `1..n`.
fn search(p: &Pasture, q: &Pasture, t: &Target, spec: SearchSpec<'_>) -> Result<Vec<Vec<Val>>> {
    let nv = p.num_generators() - 1;
    let fund_p: HashSet<Coords> = p.fundamental_elements().into_iter().map(|(c, _)| c).collect();
    let src_coords: Vec<Coords> =
        (1..=nv).map(|i| p.coords(&GroupElement::unit(nv + 1, i))).collect::<Result<_>>()?;
    let mut tables = Vec::with_capacity(nv);
    let mut domains = Vec::with_capacity(nv);
    for c in &src_coords {
        if fund_p.contains(c) {
            tables.push(Table::Fund);
            domains.push((0..t.fund.len() as u32).collect());
        } else if let Some(all) = &t.all {
            tables.push(Table::All);
            domains.push((0..all.len() as u32).collect());
        } else {
            return Err(Error::Precondition(format!(
                "source generator is not fundamental and target {} has infinite unit group",
                q.name_hint().unwrap_or("pasture")
            )));
        }
    }
    let word = |g: &GroupElement| -> Word {
        let mut konst = vec![0; t.moduli.len()];
        t.axpy(&mut konst, &t.eps, g.0[0]);
        Word { terms: g.0[1..].iter().enumerate().filter(|(_, &e)| e != 0).map(|(i, &e)| (i, e)).collect(), konst }
    };
    let mut cons = Vec::new();
    for r in p.relations() {
        cons.push(Con { kind: Kind::Rel, words: vec![word(r)], vars: vec![] });
    }
    for h in p.hexagons() {
        cons.push(Con { kind: Kind::Hex, words: vec![word(&h.pairs[0].x), word(&h.pairs[0].y)], vars: vec![] });
    }
    let mut var_cons = vec![Vec::new(); nv];
    for (ci, c) in cons.iter_mut().enumerate() {
        let mut vars: Vec<usize> = c.words.iter().flat_map(|w| w.terms.iter().map(|&(v, _)| v)).collect();
        vars.sort_unstable();
        vars.dedup();
        for &v in &vars {
            var_cons[v].push(ci);
        }
        c.vars = vars;
    }
    let unassigned = cons.iter().map(|c| c.vars.len()).collect();
    let mut csp = Csp {
        t,
        tables,
        domains,
        cons,
        var_cons,
        unassigned,
        assign: vec![None; nv],
        trail: Vec::new(),
        nodes: 0,
        budget: spec.budget,
        results: Vec::new(),
        stop_after: spec.stop_after,
        injective: spec.injective.then_some(src_coords),
        accept: spec.accept,
    };
    for ci in 0..csp.cons.len() {
        match csp.cons[ci].vars.len() {
            0 if !csp.satisfied(&csp.cons[ci]) => return Ok(vec![]),
            1 => {
                let w = csp.cons[ci].vars[0];
                if !csp.filter(ci, w) {
                    return Ok(vec![]);
                }
            }
            _ => {}
        }
    }
    csp.trail.clear();
    csp.dfs()?;
    let mut res = csp.results;
    res.sort();
    Ok(res)
}

fn to_morphism(q: &Pasture, vals: &[Val]) -> Result<PastureMorphism> {
    let mut images = vec![q.epsilon()];
    for v in vals {
        let c: Coords = v.iter().map(|&x| BigInt::from(x)).collect();
        images.push(q.unit_group().element_from_coords(&c)?);
    }
    Ok(PastureMorphism { images })
}

pub fn hom_enumerate(p: &Pasture, q: &Pasture) -> Result<Vec<PastureMorphism>> {
    hom_enumerate_with_budget(p, q, default_budget())
}

/// All morphisms `P → Q` for `Q` with finite unit group, sorted by image coordinates.
pub fn hom_enumerate_with_budget(p: &Pasture, q: &Pasture, budget: u64) -> Result<Vec<PastureMorphism>> {
    if !q.unit_group().is_finite() {
        return Err(Error::Precondition("hom enumeration needs a target with finite unit group".into()));
    }
    let t = Target::new(q)?;
    let accept = |_: &[Val]| Ok(true);
    let res = search(p, q, &t, SearchSpec { stop_after: None, injective: false, budget, accept: &accept })?;
    res.iter().map(|v| to_morphism(q, v)).collect()
}

/// Whether any morphism `P → Q` exists (finite `Q`).
pub fn hom_exists(p: &Pasture, q: &Pasture, budget: u64) -> Result<bool> {
    if !q.unit_group().is_finite() {
        return Err(Error::Precondition("hom enumeration needs a target with finite unit group".into()));
    }
    let t = Target::new(q)?;
    let accept = |_: &[Val]| Ok(true);
    let res = search(p, q, &t, SearchSpec { stop_after: Some(1), injective: false, budget, accept: &accept })?;
    Ok(!res.is_empty())
}

/// Whether `f` is a bijective morphism: a morphism that is a group isomorphism
/// and matches hexagon counts.
pub fn is_isomorphism(p: &Pasture, q: &Pasture, f: &PastureMorphism) -> Result<bool> {
    if !p.is_morphism(q, f)? {
        return Ok(false);
    }
    group_iso_and_counts(p, q, &f.images)
}

fn group_iso_and_counts(p: &Pasture, q: &Pasture, images: &[GroupElement]) -> Result<bool> {
    if p.hexagons().len() != q.hexagons().len() || !p.unit_group().same_isomorphism_type(q.unit_group()) {
        return Ok(false);
    }
    // A surjection between isomorphic finitely generated abelian groups is an isomorphism.
    q.unit_group().quotient_is_trivial(images)
}

/// An isomorphic copy of `p` whose generators are its fundamental elements,
/// with mutually inverse morphisms `p → copy` and `copy → p`.
pub fn fundamental_presentation(p: &Pasture) -> Result<(Pasture, PastureMorphism, PastureMorphism)> {
    if !p.is_fundamental_generated() {
        return Err(Error::Precondition("pasture is not generated by -1 and its fundamental elements".into()));
    }
    let g = p.unit_group();
    let fund = p.fundamental_elements();
    let nf = fund.len();
    let n = nf + 1;
    let index: HashMap<&Coords, usize> = fund.iter().enumerate().map(|(i, (c, _))| (c, i + 1)).collect();
    let eps_c = p.coords(&p.epsilon())?;
    let add = |a: &Coords, b: &Coords, k: i64| -> Coords {
        let mut out = a.clone();
        g.coords_axpy(&mut out, b, &BigInt::from(k));
        out
    };
    let zero: Coords = vec![BigInt::zero(); g.dim()];
    // Express each old generator with at most three fundamental factors and a sign.
    let lookup = |c: &Coords| -> Option<GroupElement> {
        if c.iter().all(|x| x.is_zero()) {
            return Some(GroupElement::zero(n));
        }
        if *c == eps_c {
            return Some(GroupElement::unit(n, 0));
        }
        for s in [0, 1] {
            let r = add(c, &eps_c, s);
            for sign in [1i64, -1] {
                let r2 = add(&zero, &r, sign);
                if let Some(&i) = index.get(&r2) {
                    let mut w = GroupElement::unit(n, i).scale(sign);
                    w.0[0] = s;
                    return Some(w);
                }
            }
        }
        None
    };
    let mut words = vec![GroupElement::unit(n, 0)];
    for i in 1..p.num_generators() {
        let c = p.coords(&GroupElement::unit(p.num_generators(), i))?;
        let mut found = lookup(&c);
        'outer: for depth in 1..=2 {
            if found.is_some() {
                break;
            }
            let heads: Vec<(Coords, GroupElement)> = if depth == 1 {
                fund.iter()
                    .enumerate()
                    .flat_map(|(a, (ca, _))| {
                        [1i64, -1].map(|s| (add(&c, ca, -s), GroupElement::unit(n, a + 1).scale(s)))
                    })
                    .collect()
            } else {
                let mut v = Vec::new();
                for (a, (ca, _)) in fund.iter().enumerate() {
                    for (b, (cb, _)) in fund.iter().enumerate().skip(a) {
                        for s in [1i64, -1] {
                            for t in [1i64, -1] {
                                let r = add(&add(&c, ca, -s), cb, -t);
                                let w = GroupElement::unit(n, a + 1).scale(s).add(&GroupElement::unit(n, b + 1).scale(t));
                                v.push((r, w));
                            }
                        }
                    }
                }
                v
            };
            for (r, w) in heads {
                if let Some(rest) = lookup(&r) {
                    found = Some(w.add(&rest));
                    break 'outer;
                }
            }
        }
        let w = match found {
            Some(w) => w,
            None => solve_in_fundamentals(p, &fund, &c)?,
        };
        words.push(w);
    }
    let theta = |u: &GroupElement| -> GroupElement {
        let mut out = GroupElement::zero(n);
        for (i, &e) in u.0.iter().enumerate() {
            if e != 0 {
                out = out.add(&words[i].scale(e));
            }
        }
        out
    };
    let mut relations = Vec::new();
    for (i, (_, u)) in fund.iter().enumerate() {
        relations.push(GroupElement::unit(n, i + 1).sub(&theta(u)));
    }
    for r in p.relations() {
        relations.push(theta(r));
    }
    let eps_n = GroupElement::unit(n, 0);
    let mut hex_reps = Vec::new();
    for h in p.hexagons() {
        for pr in &h.pairs {
            let ix = index[&add(&zero, &pr.cx, -1)];
            let yx = index[&add(&add(&eps_c, &pr.cy, 1), &pr.cx, -1)];
            let x = GroupElement::unit(n, index[&pr.cx]);
            let y = GroupElement::unit(n, index[&pr.cy]);
            relations.push(GroupElement::unit(n, ix).add(&x));
            relations.push(GroupElement::unit(n, yx).sub(&eps_n).sub(&y).add(&x));
        }
        let pr = &h.pairs[0];
        hex_reps.push((GroupElement::unit(n, index[&pr.cx]), GroupElement::unit(n, index[&pr.cy])));
    }
    relations.retain(|r| r.0.iter().any(|&x| x != 0));
    relations.sort();
    relations.dedup();
    let mut names = vec!["-1".to_string()];
    names.extend((0..nf).map(|i| format!("f{i}")));
    let copy = Pasture::from_raw(names, relations, hex_reps, p.name_hint.clone())?;
    let to = PastureMorphism { images: words };
    let mut from_images = vec![p.epsilon()];
    from_images.extend(fund.iter().map(|(_, u)| u.clone()));
    let from = PastureMorphism { images: from_images };
    Ok((copy, to, from))
}

/// Integer solution of `Σ x_f·f + x_ε·ε = c` in the unit group, via Smith normal form.
fn solve_in_fundamentals(p: &Pasture, fund: &[(Coords, GroupElement)], c: &Coords) -> Result<GroupElement> {
    let g = p.unit_group();
    let dim = g.dim();
    let mut rows: Vec<Vec<BigInt>> = fund.iter().map(|(cf, _)| cf.clone()).collect();
    rows.push(p.coords(&p.epsilon())?);
    for (i, d) in g.invariant_factors().iter().enumerate() {
        let mut r = vec![BigInt::zero(); dim];
        r[i] = d.clone();
        rows.push(r);
    }
    let a = IntMatrix::from_rows(dim, rows)?;
    let s = smith_normal_form(&a);
    // x·A = c  ⇔  y·D = c·V with x = y·U.
    let cv: Vec<BigInt> = (0..dim).map(|j| (0..dim).map(|i| &c[i] * s.v.get(i, j)).sum()).collect();
    let m = a.rows();
    let mut y = vec![BigInt::zero(); m];
    for j in 0..dim {
        let d = if j < m { s.d.get(j, j).clone() } else { BigInt::zero() };
        if d.is_zero() {
            if !cv[j].is_zero() {
                return Err(Error::Precondition("element not generated by fundamental elements".into()));
            }
        } else {
            if !(&cv[j] % &d).is_zero() {
                return Err(Error::Precondition("element not generated by fundamental elements".into()));
            }
            y[j] = &cv[j] / &d;
        }
    }
    let n = fund.len() + 1;
    let mut out = vec![0i64; n];
    for (k, o) in out.iter_mut().enumerate() {
        let idx = if k == 0 { fund.len() } else { k - 1 };
        let v: BigInt = (0..m).map(|i| &y[i] * s.u.get(i, idx)).sum();
        *o = v.to_i64().ok_or_else(|| Error::Precondition("exponent exceeds 64 bits".into()))?;
    }
    Ok(GroupElement(out))
}

fn fundamental_form(p: &Pasture) -> Result<(Pasture, PastureMorphism, PastureMorphism)> {
    if p.generators_fundamental() {
        Ok((p.clone(), p.identity(), p.identity()))
    } else {
        fundamental_presentation(p)
    }
}

/// A bijective morphism `P → Q`, if one exists.
pub fn find_isomorphism(p: &Pasture, q: &Pasture, budget: u64) -> Result<Option<PastureMorphism>> {
    if p.numerical_type() != q.numerical_type() {
        return Ok(None);
    }
    let (pp, to, _) = fundamental_form(p)?;
    let t = Target::new(q)?;
    let accept = |vals: &[Val]| -> Result<bool> {
        let f = to_morphism(q, vals)?;
        group_iso_and_counts(&pp, q, &f.images)
    };
    let res = search(&pp, q, &t, SearchSpec { stop_after: Some(1), injective: true, budget, accept: &accept })?;
    match res.first() {
        None => Ok(None),
        Some(vals) => Ok(Some(to.then(&to_morphism(q, vals)?))),
    }
}

/// All automorphisms, sorted by image coordinates.
pub fn automorphisms(p: &Pasture, budget: u64) -> Result<Vec<PastureMorphism>> {
    let (pp, to, from) = fundamental_form(p)?;
    let t = Target::new(&pp)?;
    // When the generators are exactly the fundamental elements, an injective
    // morphism permutes them, so it is onto and hence an automorphism.
    let gens: HashSet<Coords> = (1..pp.num_generators())
        .map(|i| pp.coords(&GroupElement::unit(pp.num_generators(), i)))
        .collect::<Result<_>>()?;
    let onto = gens.len() == pp.num_generators() - 1 && gens.len() == t.fund.len();
    let accept = |vals: &[Val]| -> Result<bool> {
        if onto {
            return Ok(true);
        }
        let f = to_morphism(&pp, vals)?;
        group_iso_and_counts(&pp, &pp, &f.images)
    };
    let res = search(&pp, &pp, &t, SearchSpec { stop_after: None, injective: true, budget, accept: &accept })?;
    res.iter().map(|vals| Ok(to.then(&to_morphism(&pp, vals)?).then(&from))).collect()
}
