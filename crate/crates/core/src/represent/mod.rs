//! Representations of matroids over finite pastures.
//!
//! A weak Grassmann–Plücker function assigns a unit to every basis and zero to
//! every other `r`-subset, extended to ordered tuples by the alternating rule,
//! such that every 3-term Plücker relation is null. Rescaling by
//! `(P^×)^{n+1}` acts by `Δ(B) ↦ t₀ ∏_{e∈B} t_e Δ(B)`.

use std::collections::{BTreeMap, HashMap};
use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::abgroup::{Coords, FpAbelianGroup, GroupElement};
use crate::error::{default_budget, Error, Result};
use crate::foundation::foundation_pasture;
use crate::matroid::{elems, subsets_of_size, Matroid, Set};
use crate::pasture::{hom_exists, named, Pasture, PastureElement};

/// A candidate representation: values on sorted `r`-subsets; missing subsets are zero.
#[derive(Clone, Debug)]
pub struct GpFunction {
    pub matroid: Matroid,
    pub target: Pasture,
    pub values: BTreeMap<Set, PastureElement>,
}

/// Sign of the permutation sorting the tuple `(J̄, x, y)`.
fn tuple_sign(j: Set, x: usize, y: usize) -> bool {
    let above = |e: usize| (j >> (e + 1)).count_ones();
    (above(x) + above(y) + u32::from(x > y)) % 2 == 1
}

/// A 3-term Plücker relation with the terms that can be nonzero.
#[derive(Clone, Debug)]
struct Relation {
    /// `(basis index, basis index, negated)` for each term.
    terms: Vec<(usize, usize, bool)>,
}

fn plucker_relations(m: &Matroid, index: &HashMap<Set, usize>) -> Vec<Relation> {
    let mut out = Vec::new();
    if m.rank() < 2 {
        return out;
    }
    for j in subsets_of_size(m.ground(), m.rank() - 2) {
        if !m.is_independent(j) {
            continue;
        }
        for q in subsets_of_size(m.ground() & !j, 4) {
            let e = elems(q);
            let mut terms = Vec::new();
            for (k, &(a, b, c, d)) in [(e[0], e[1], e[2], e[3]), (e[0], e[2], e[1], e[3]), (e[0], e[3], e[1], e[2])]
                .iter()
                .enumerate()
            {
                let (s1, s2) = (j | 1 << a | 1 << b, j | 1 << c | 1 << d);
                if let (Some(&x), Some(&y)) = (index.get(&s1), index.get(&s2)) {
                    let neg = (k == 1) ^ tuple_sign(j, a, b) ^ tuple_sign(j, c, d);
                    terms.push((x, y, neg));
                }
            }
            if !terms.is_empty() {
                out.push(Relation { terms });
            }
        }
    }
    out
}

/// Checks GP0 and the 3-term Plücker relations.
pub fn verify_gp(f: &GpFunction) -> Result<bool> {
    let m = &f.matroid;
    let p = &f.target;
    if let Some(bad) = f.values.keys().find(|s| s.count_ones() as usize != m.rank() || **s & !m.ground() != 0) {
        return Err(Error::Precondition(format!("value on {:?}, which is not an r-subset", elems(*bad))));
    }
    let zero = PastureElement::Zero;
    let value = |s: Set| f.values.get(&s).unwrap_or(&zero);
    for s in subsets_of_size(m.ground(), m.rank()) {
        if matches!(value(s), PastureElement::Zero) == m.is_basis(s) {
            return Ok(false);
        }
    }
    let index: HashMap<Set, usize> = m.bases().iter().enumerate().map(|(i, &b)| (b, i)).collect();
    let unit = |i: usize| match value(m.bases()[i]) {
        PastureElement::Unit(g) => g.clone(),
        PastureElement::Zero => unreachable!(),
    };
    for rel in plucker_relations(m, &index) {
        let mut t: Vec<PastureElement> = rel
            .terms
            .iter()
            .map(|&(a, b, neg)| {
                let g = unit(a).add(&unit(b));
                PastureElement::Unit(if neg { g.add(&p.epsilon()) } else { g })
            })
            .collect();
        t.resize(3, PastureElement::Zero);
        if !p.is_null(&t[0], &t[1], &t[2])? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The units of a finite pasture with multiplication and null-set tables.
struct Units {
    elements: Vec<GroupElement>,
    mul: Vec<Vec<usize>>,
    inv: Vec<usize>,
    eps: usize,
    /// `null3[a][b]`: `a + b + 1 ∈ N`.
    null3: Vec<Vec<bool>>,
    /// `null2[a]`: `a + 1 ∈ N`.
    null2: Vec<bool>,
    null1: bool,
}

impl Units {
    fn new(p: &Pasture) -> Result<Units> {
        let g = p.unit_group();
        if !g.is_finite() {
            return Err(Error::Precondition("target pasture needs a finite unit group".into()));
        }
        let coords: Vec<Coords> = g.elements()?;
        let pos: HashMap<Coords, usize> = coords.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
        let elements: Vec<GroupElement> = coords.iter().map(|c| g.element_from_coords(c)).collect::<Result<_>>()?;
        let idx = |x: &GroupElement| -> Result<usize> { Ok(pos[&g.coords(x)?]) };
        let k = elements.len();
        let mut mul = vec![vec![0; k]; k];
        for a in 0..k {
            for b in 0..k {
                mul[a][b] = idx(&elements[a].add(&elements[b]))?;
            }
        }
        let one = idx(&p.one())?;
        let eps = idx(&p.epsilon())?;
        let inv = (0..k).map(|a| mul[a].iter().position(|&c| c == one).unwrap()).collect();
        let u = |i: usize| PastureElement::Unit(elements[i].clone());
        let z = PastureElement::Zero;
        let null3 = (0..k)
            .map(|a| (0..k).map(|b| p.is_null(&u(a), &u(b), &u(one))).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let null2 = (0..k).map(|a| p.is_null(&u(a), &u(one), &z)).collect::<Result<Vec<_>>>()?;
        let null1 = p.is_null(&u(one), &z, &z)?;
        Ok(Units { elements, mul, inv, eps, null3, null2, null1 })
    }

    fn len(&self) -> usize {
        self.elements.len()
    }

    fn holds(&self, rel: &Relation, v: &[usize]) -> bool {
        let mut t = [0usize; 3];
        for (slot, &(a, b, neg)) in t.iter_mut().zip(&rel.terms) {
            let x = self.mul[v[a]][v[b]];
            *slot = if neg { self.mul[x][self.eps] } else { x };
        }
        match rel.terms.len() {
            1 => self.null1,
            2 => self.null2[self.mul[t[0]][self.inv[t[1]]]],
            _ => {
                let c = self.inv[t[2]];
                self.null3[self.mul[t[0]][c]][self.mul[t[1]][c]]
            }
        }
    }
}

/// Every valid GP function as a vector of unit indices, one per basis.
struct Enumeration<'a> {
    units: &'a Units,
    /// Relations grouped by the last basis they involve.
    ready: Vec<Vec<Relation>>,
    nodes: &'a AtomicU64,
    budget: u64,
}

impl Enumeration<'_> {
    fn dfs(&self, v: &mut Vec<usize>, out: &mut Option<Vec<Vec<usize>>>, count: &mut u64) -> Result<()> {
        if self.nodes.fetch_add(1, Ordering::Relaxed) >= self.budget {
            return Err(Error::BudgetExceeded(self.budget));
        }
        let d = v.len();
        if d == self.ready.len() {
            *count += 1;
            if let Some(o) = out {
                o.push(v.clone());
            }
            return Ok(());
        }
        for x in 0..self.units.len() {
            v.push(x);
            if self.ready[d].iter().all(|r| self.units.holds(r, v)) {
                self.dfs(v, out, count)?;
            }
            v.pop();
        }
        Ok(())
    }
}

fn enumerate_gp(m: &Matroid, p: &Pasture, keep: bool, budget: u64) -> Result<(u64, Vec<Vec<usize>>, Units)> {
    let units = Units::new(p)?;
    let index: HashMap<Set, usize> = m.bases().iter().enumerate().map(|(i, &b)| (b, i)).collect();
    let mut ready = vec![Vec::new(); m.bases().len()];
    for r in plucker_relations(m, &index) {
        let last = r.terms.iter().map(|&(a, b, _)| a.max(b)).max().unwrap();
        ready[last].push(r);
    }
    let nodes = AtomicU64::new(0);
    let e = Enumeration { units: &units, ready, nodes: &nodes, budget };
    let parts: Vec<(u64, Vec<Vec<usize>>)> = (0..units.len())
        .into_par_iter()
        .map(|x| {
            let mut v = vec![x];
            let mut out = keep.then(Vec::new);
            let mut count = 0;
            if e.ready[0].iter().all(|r| e.units.holds(r, &v)) {
                e.dfs(&mut v, &mut out, &mut count)?;
            }
            Ok((count, out.unwrap_or_default()))
        })
        .collect::<Result<_>>()?;
    let mut total = 0;
    let mut all = Vec::new();
    for (c, o) in parts {
        total += c;
        all.extend(o);
    }
    Ok((total, all, units))
}

/// Size of the image of the rescaling torus in `(P^×)^{bases}`.
fn orbit_size(m: &Matroid, p: &Pasture) -> Result<BigInt> {
    let b = m.bases().len();
    let mut size = BigInt::one();
    for d in p.unit_group().invariant_factors() {
        let d = d.to_i64().ok_or_else(|| Error::Precondition("unit group too large".into()))?;
        if d <= 1 {
            continue;
        }
        let mut rows: Vec<Vec<i64>> = Vec::new();
        rows.push(vec![1; b]);
        for e in 0..m.n() {
            rows.push(m.bases().iter().map(|&x| i64::from(x >> e & 1 == 1)).collect());
        }
        for i in 0..b {
            let mut r = vec![0; b];
            r[i] = d;
            rows.push(r);
        }
        let coker = FpAbelianGroup::from_i64(b, &rows)?;
        let c = coker.order().expect("finite cokernel");
        size *= BigInt::from(d).pow(b as u32) / c;
    }
    Ok(size)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RescalingClassCount {
    pub count: u64,
    pub gp_functions: u64,
    pub orbit_size: u64,
}

/// Number of rescaling classes of weak `P`-representations of `m`.
///
/// All orbits have the same size, namely the size of the torus image, because
/// the stabilizer of a GP function only depends on its support.
pub fn rescaling_classes(m: &Matroid, p: &Pasture) -> Result<RescalingClassCount> {
    rescaling_classes_with_budget(m, p, default_budget())
}

pub fn rescaling_classes_with_budget(m: &Matroid, p: &Pasture, budget: u64) -> Result<RescalingClassCount> {
    let (total, _, _) = enumerate_gp(m, p, false, budget)?;
    let orbit = orbit_size(m, p)?.to_u64().ok_or_else(|| Error::Precondition("orbit too large".into()))?;
    if total % orbit != 0 {
        return Err(Error::Verification(format!("{total} GP functions do not split into orbits of size {orbit}")));
    }
    Ok(RescalingClassCount { count: total / orbit, gp_functions: total, orbit_size: orbit })
}

/// Rescaling classes by explicit orbit partition; quadratic, for small cases.
pub fn rescaling_classes_naive(m: &Matroid, p: &Pasture) -> Result<u64> {
    let (_, all, units) = enumerate_gp(m, p, true, default_budget())?;
    let pos: HashMap<&Vec<usize>, usize> = all.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let mut parent: Vec<usize> = (0..all.len()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let k = units.len();
    let dims = m.n() + 1;
    let total = (k as u64).checked_pow(dims as u32).filter(|&t| t * all.len() as u64 <= 50_000_000);
    let Some(total) = total else {
        return Err(Error::BudgetExceeded(50_000_000));
    };
    for code in 0..total {
        let mut t = Vec::with_capacity(dims);
        let mut c = code;
        for _ in 0..dims {
            t.push((c % k as u64) as usize);
            c /= k as u64;
        }
        let scale: Vec<usize> = m
            .bases()
            .iter()
            .map(|&b| elems(b).into_iter().fold(t[0], |acc, e| units.mul[acc][t[e + 1]]))
            .collect();
        for (i, v) in all.iter().enumerate() {
            let w: Vec<usize> = v.iter().zip(&scale).map(|(&x, &s)| units.mul[x][s]).collect();
            let j = pos[&w];
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            parent[a] = b;
        }
    }
    Ok((0..all.len()).filter(|&i| find(&mut parent, i) == i).count() as u64)
}

/// The GP functions found by enumeration, as [`GpFunction`] values.
pub fn gp_functions(m: &Matroid, p: &Pasture, limit: usize) -> Result<Vec<GpFunction>> {
    let (_, all, units) = enumerate_gp(m, p, true, default_budget())?;
    Ok(all
        .into_iter()
        .take(limit)
        .map(|v| GpFunction {
            matroid: m.clone(),
            target: p.clone(),
            values: m
                .bases()
                .iter()
                .zip(v)
                .map(|(&b, x)| (b, PastureElement::Unit(units.elements[x].clone())))
                .collect(),
        })
        .collect())
}

/// Whether `m` is representable over the finite pasture `p`.
pub fn is_representable(m: &Matroid, p: &Pasture) -> Result<bool> {
    hom_exists(&foundation_pasture(m)?, p, default_budget())
}

/// Existence of a morphism `p → t` for each target, in order.
pub fn representability_row(p: &Pasture, targets: &[Pasture]) -> Result<Vec<bool>> {
    targets.par_iter().map(|t| hom_exists(p, t, default_budget())).collect()
}

pub const TABLE_ROWS: [&str; 10] = ["regular", "U", "V", "F2", "F3", "K", "S", "H", "D", "G"];
pub const TABLE_COLUMNS: [&str; 8] = ["F2", "F3", "F4", "F5", "F7", "F8", "F9", "S"];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RepresentabilityTable {
    pub rows: Vec<String>,
    pub columns: Vec<String>,
    pub cells: Vec<Vec<bool>>,
}

impl RepresentabilityTable {
    pub fn to_tsv(&self) -> String {
        let mut s = format!("pasture\t{}\n", self.columns.join("\t"));
        for (r, cells) in self.rows.iter().zip(&self.cells) {
            let c: Vec<&str> = cells.iter().map(|&b| if b { "1" } else { "0" }).collect();
            s += &format!("{r}\t{}\n", c.join("\t"));
        }
        s
    }

    pub fn to_json(&self) -> Value {
        let cells: Vec<Vec<u8>> = self.cells.iter().map(|r| r.iter().map(|&b| u8::from(b)).collect()).collect();
        json!({ "rows": self.rows, "columns": self.columns, "cells": cells })
    }
}

/// Morphism existence for every pair of named pastures.
pub fn representability_table(rows: &[&str], columns: &[&str]) -> Result<RepresentabilityTable> {
    let targets: Vec<Pasture> = columns.iter().map(|c| named(c)).collect::<Result<_>>()?;
    let cells = rows
        .iter()
        .map(|r| representability_row(&named(r)?, &targets))
        .collect::<Result<_>>()?;
    Ok(RepresentabilityTable {
        rows: rows.iter().map(|s| s.to_string()).collect(),
        columns: columns.iter().map(|s| s.to_string()).collect(),
        cells,
    })
}

#[cfg(test)]
mod tests;
