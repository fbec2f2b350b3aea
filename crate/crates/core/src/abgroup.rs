//! Finitely generated abelian groups given by generators and integer relations.
//!
//! Everything is exact: entries are `BigInt`, and element equality is decided in
//! the canonical coordinates produced by a Smith normal form of the relation
//! matrix.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Dense integer matrix with arbitrary-precision entries.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<BigInt>>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![vec![BigInt::zero(); cols]; rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i][i] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows; every row must have length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<Vec<BigInt>>) -> Result<Self> {
        for r in &rows {
            if r.len() != cols {
                return Err(Error::Dimension { expected: cols, got: r.len() });
            }
        }
        Ok(IntMatrix { rows: rows.len(), cols, data: rows })
    }

    pub fn from_i64(cols: usize, rows: &[Vec<i64>]) -> Result<Self> {
        Self::from_rows(cols, rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i][j]
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i]
    }

    pub fn row_vecs(&self) -> &[Vec<BigInt>] {
        &self.data
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension { expected: self.cols, got: other.rows });
        }
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[i][k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other.data[k][j];
                    if !b.is_zero() {
                        out.data[i][j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<BigInt> {
        if self.rows != self.cols {
            return Err(Error::Dimension { expected: self.rows, got: self.cols });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut m = self.data.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                    Some(i) => {
                        m.swap(i, k);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                    m[i][j] = v / &prev;
                }
            }
            prev = m[k][k].clone();
        }
        Ok(sign * &m[n - 1][n - 1])
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.data[i][j].is_zero()))
    }

    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.rows.min(self.cols)).map(|i| self.data[i][i].clone()).collect()
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.data {
            let cells: Vec<String> = r.iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", cells.join(" "))?;
        }
        Ok(())
    }
}

/// Result of [`smith_normal_form`]: `u * a * v == d`.
#[derive(Clone, Debug)]
pub struct Snf {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

struct SnfWork {
    a: Vec<Vec<BigInt>>,
    u: Option<Vec<Vec<BigInt>>>,
    v: Option<Vec<Vec<BigInt>>>,
    vinv: Option<Vec<Vec<BigInt>>>,
}

fn ident(n: usize) -> Vec<Vec<BigInt>> {
    IntMatrix::identity(n).data
}

fn axpy_row(dst: &mut [BigInt], src: &[BigInt], q: &BigInt) {
    for (d, s) in dst.iter_mut().zip(src) {
        if !s.is_zero() {
            *d += q * s;
        }
    }
}

fn row_pair(m: &mut [Vec<BigInt>], dst: usize, src: usize) -> (&mut Vec<BigInt>, &Vec<BigInt>) {
    if dst < src {
        let (lo, hi) = m.split_at_mut(src);
        (&mut lo[dst], &hi[0])
    } else {
        let (lo, hi) = m.split_at_mut(dst);
        (&mut hi[0], &lo[src])
    }
}

impl SnfWork {
    fn rows(&self) -> usize {
        self.a.len()
    }

    fn cols(&self) -> usize {
        self.a.first().map_or(0, |r| r.len())
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap(i, j);
        if let Some(u) = &mut self.u {
            u.swap(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for r in &mut self.a {
            r.swap(i, j);
        }
        if let Some(v) = &mut self.v {
            for r in v.iter_mut() {
                r.swap(i, j);
            }
        }
        if let Some(w) = &mut self.vinv {
            w.swap(i, j);
        }
    }

    /// row[dst] += q * row[src]
    fn add_row(&mut self, src: usize, dst: usize, q: &BigInt) {
        let (d, s) = row_pair(&mut self.a, dst, src);
        axpy_row(d, s, q);
        if let Some(u) = &mut self.u {
            let (d, s) = row_pair(u, dst, src);
            axpy_row(d, s, q);
        }
    }

    /// col[dst] += q * col[src]
    fn add_col(&mut self, src: usize, dst: usize, q: &BigInt) {
        for r in &mut self.a {
            if !r[src].is_zero() {
                let t = q * &r[src];
                r[dst] += t;
            }
        }
        if let Some(v) = &mut self.v {
            for r in v.iter_mut() {
                if !r[src].is_zero() {
                    let t = q * &r[src];
                    r[dst] += t;
                }
            }
        }
        if let Some(w) = &mut self.vinv {
            let nq = -q;
            let (d, s) = row_pair(w, src, dst);
            axpy_row(d, s, &nq);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in &mut self.a[i] {
            *x = -&*x;
        }
        if let Some(u) = &mut self.u {
            for x in &mut u[i] {
                *x = -&*x;
            }
        }
    }

    fn run(&mut self) {
        let m = self.rows();
        let n = self.cols();
        for t in 0..m.min(n) {
            // Smallest nonzero absolute value in the remaining block, ties by lowest index.
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    let x = &self.a[i][j];
                    if x.is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| x.abs() < self.a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { return };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            loop {
                let mut dirty = false;
                for i in t + 1..m {
                    if self.a[i][t].is_zero() {
                        continue;
                    }
                    let q = -(&self.a[i][t] / &self.a[t][t]);
                    self.add_row(t, i, &q);
                    if !self.a[i][t].is_zero() {
                        dirty = true;
                    }
                }
                for j in t + 1..n {
                    if self.a[t][j].is_zero() {
                        continue;
                    }
                    let q = -(&self.a[t][j] / &self.a[t][t]);
                    self.add_col(t, j, &q);
                    if !self.a[t][j].is_zero() {
                        dirty = true;
                    }
                }
                if dirty {
                    // A smaller remainder appeared in row or column t; move it to the pivot.
                    let mut best = (t, t);
                    for i in t + 1..m {
                        if !self.a[i][t].is_zero() && self.a[i][t].abs() < self.a[best.0][best.1].abs() {
                            best = (i, t);
                        }
                    }
                    for j in t + 1..n {
                        if !self.a[t][j].is_zero() && self.a[t][j].abs() < self.a[best.0][best.1].abs() {
                            best = (t, j);
                        }
                    }
                    self.swap_rows(t, best.0);
                    self.swap_cols(t, best.1);
                    continue;
                }
                let p = self.a[t][t].clone();
                let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| !self.a[i][j].is_multiple_of(&p)));
                match bad {
                    Some(i) => self.add_row(i, t, &BigInt::one()),
                    None => break,
                }
            }
            if self.a[t][t].is_negative() {
                self.negate_row(t);
            }
        }
    }
}

/// Smith normal form `U·A·V = D` with unimodular `U`, `V`.
///
/// Pivots are chosen as the entry of smallest absolute value, ties broken by
/// lowest (row, column) index, so the output is deterministic.
pub fn smith_normal_form(a: &IntMatrix) -> Snf {
    let mut w = SnfWork {
        a: a.data.clone(),
        u: Some(ident(a.rows)),
        v: Some(ident(a.cols)),
        vinv: None,
    };
    if a.rows > 0 && a.cols > 0 {
        w.run();
    }
    Snf {
        u: IntMatrix { rows: a.rows, cols: a.rows, data: w.u.unwrap() },
        d: IntMatrix { rows: a.rows, cols: a.cols, data: w.a },
        v: IntMatrix { rows: a.cols, cols: a.cols, data: w.v.unwrap() },
    }
}

/// The diagonal of the Smith normal form, without transforms.
pub fn smith_diagonal(a: &IntMatrix) -> Vec<BigInt> {
    let mut w = SnfWork { a: reduce_rows(a.data.clone(), a.cols), u: None, v: None, vinv: None };
    if w.rows() > 0 && a.cols > 0 {
        w.run();
    }
    (0..w.rows().min(a.cols)).map(|i| w.a[i][i].clone()).collect()
}

/// Row-reduces a relation matrix to at most `cols` nonzero rows spanning the same lattice.
fn reduce_rows(mut rows: Vec<Vec<BigInt>>, cols: usize) -> Vec<Vec<BigInt>> {
    rows.retain(|r| r.iter().any(|x| !x.is_zero()));
    rows.sort();
    rows.dedup();
    let mut p = 0;
    for j in 0..cols {
        loop {
            let mut best: Option<usize> = None;
            for i in p..rows.len() {
                if !rows[i][j].is_zero()
                    && best.is_none_or(|b| rows[i][j].abs() < rows[b][j].abs())
                {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            rows.swap(p, b);
            let mut done = true;
            for i in p + 1..rows.len() {
                if rows[i][j].is_zero() {
                    continue;
                }
                let q = -(&rows[i][j] / &rows[p][j]);
                let (d, s) = row_pair(&mut rows, i, p);
                axpy_row(&mut d[j..], &s[j..], &q);
                if !rows[i][j].is_zero() {
                    done = false;
                }
            }
            rows.retain(|r| r.iter().any(|x| !x.is_zero()));
            if done {
                p += 1;
                break;
            }
        }
        if p >= rows.len() {
            break;
        }
    }
    rows.truncate(p);
    rows
}

/// Exponent vector over a group's generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement(pub Vec<i64>);

impl GroupElement {
    pub fn zero(n: usize) -> Self {
        GroupElement(vec![0; n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        GroupElement(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add(&self, o: &GroupElement) -> GroupElement {
        GroupElement(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, o: &GroupElement) -> GroupElement {
        GroupElement(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> GroupElement {
        GroupElement(self.0.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, k: i64) -> GroupElement {
        GroupElement(self.0.iter().map(|a| a * k).collect())
    }

    /// Pads or embeds into a larger generator set by index map.
    pub fn remap(&self, n: usize, map: &[usize]) -> GroupElement {
        let mut v = vec![0; n];
        for (i, &x) in self.0.iter().enumerate() {
            v[map[i]] += x;
        }
        GroupElement(v)
    }
}

/// Canonical coordinates: torsion components reduced into `[0, d)`, then free components.
pub type Coords = Vec<BigInt>;

/// A finitely presented abelian group `Z^n / rowspace(relations)` with its canonical form.
#[derive(Clone, Debug)]
pub struct FpAbelianGroup {
    num_generators: usize,
    relations: IntMatrix,
    invariant_factors: Vec<BigInt>,
    free_rank: usize,
    /// `n × (t + r)`: generator exponents to canonical coordinates.
    projection: Vec<Vec<BigInt>>,
    /// `(t + r) × n`: canonical generators as generator exponents.
    inclusion: Vec<Vec<BigInt>>,
}

impl FpAbelianGroup {
    pub fn new(num_generators: usize, relations: IntMatrix) -> Result<Self> {
        if relations.rows() > 0 && relations.cols() != num_generators {
            return Err(Error::Dimension { expected: num_generators, got: relations.cols() });
        }
        let relations = if relations.rows() == 0 { IntMatrix::zeros(0, num_generators) } else { relations };
        Ok(canonicalize_parts(num_generators, relations))
    }

    pub fn free(n: usize) -> Self {
        canonicalize_parts(n, IntMatrix::zeros(0, n))
    }

    pub fn from_i64(num_generators: usize, relations: &[Vec<i64>]) -> Result<Self> {
        Self::new(num_generators, IntMatrix::from_i64(num_generators, relations)?)
    }

    pub fn num_generators(&self) -> usize {
        self.num_generators
    }

    pub fn relations(&self) -> &IntMatrix {
        &self.relations
    }

    /// Invariant factors `d₁ | d₂ | …`, all greater than one.
    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.invariant_factors
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    /// Number of canonical coordinates (torsion then free).
    pub fn dim(&self) -> usize {
        self.invariant_factors.len() + self.free_rank
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    pub fn is_trivial(&self) -> bool {
        self.dim() == 0
    }

    /// Group order, `None` when infinite.
    pub fn order(&self) -> Option<BigInt> {
        self.is_finite().then(|| self.invariant_factors.iter().product())
    }

    /// Order of the `i`-th canonical coordinate, zero for free coordinates.
    pub fn coordinate_order(&self, i: usize) -> BigInt {
        self.invariant_factors.get(i).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn reduce(&self, c: &mut [BigInt]) {
        for (x, d) in c.iter_mut().zip(&self.invariant_factors) {
            *x = x.mod_floor(d);
        }
    }

    pub fn coords(&self, x: &GroupElement) -> Result<Coords> {
        if x.len() != self.num_generators {
            return Err(Error::Dimension { expected: self.num_generators, got: x.len() });
        }
        Ok(self.coords_unchecked(&x.0))
    }

    pub(crate) fn coords_unchecked(&self, x: &[i64]) -> Coords {
        let mut c = vec![BigInt::zero(); self.dim()];
        for (i, &e) in x.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let e = BigInt::from(e);
            for (cj, p) in c.iter_mut().zip(&self.projection[i]) {
                if !p.is_zero() {
                    *cj += &e * p;
                }
            }
        }
        self.reduce(&mut c);
        c
    }

    /// A generator-exponent representative of canonical coordinates.
    pub fn element_from_coords(&self, c: &[BigInt]) -> Result<GroupElement> {
        if c.len() != self.dim() {
            return Err(Error::Dimension { expected: self.dim(), got: c.len() });
        }
        let mut out = vec![BigInt::zero(); self.num_generators];
        for (ci, row) in c.iter().zip(&self.inclusion) {
            if ci.is_zero() {
                continue;
            }
            axpy_row(&mut out, row, ci);
        }
        out.iter()
            .map(|x| x.to_i64().ok_or_else(|| Error::Precondition("exponent exceeds 64 bits".into())))
            .collect::<Result<Vec<_>>>()
            .map(GroupElement)
    }

    pub fn element_equal(&self, a: &GroupElement, b: &GroupElement) -> Result<bool> {
        if b.len() != a.len() {
            return Err(Error::Dimension { expected: a.len(), got: b.len() });
        }
        Ok(self.coords(&a.sub(b))?.iter().all(|x| x.is_zero()))
    }

    pub fn is_identity(&self, a: &GroupElement) -> Result<bool> {
        Ok(self.coords(a)?.iter().all(|x| x.is_zero()))
    }

    /// `G` modulo extra relations; same generators, so the natural surjection
    /// is the identity on exponent vectors.
    pub fn quotient_group(&self, extra: &[GroupElement]) -> Result<FpAbelianGroup> {
        let mut rows = self.relations.data.clone();
        for e in extra {
            if e.len() != self.num_generators {
                return Err(Error::Dimension { expected: self.num_generators, got: e.len() });
            }
            rows.push(e.0.iter().map(|&x| BigInt::from(x)).collect());
        }
        FpAbelianGroup::new(self.num_generators, IntMatrix::from_rows(self.num_generators, rows)?)
    }

    /// Whether `G` modulo `extra` is the trivial group.
    pub fn quotient_is_trivial(&self, extra: &[GroupElement]) -> Result<bool> {
        let dim = self.dim();
        let mut rows = Vec::with_capacity(extra.len() + self.invariant_factors.len());
        for e in extra {
            rows.push(self.coords(e)?);
        }
        for (i, d) in self.invariant_factors.iter().enumerate() {
            let mut r = vec![BigInt::zero(); dim];
            r[i] = d.clone();
            rows.push(r);
        }
        if dim == 0 {
            return Ok(true);
        }
        let d = smith_diagonal(&IntMatrix::from_rows(dim, rows)?);
        Ok(d.len() == dim && d.iter().all(|x| x.is_one()))
    }

    /// All elements in canonical coordinates, lexicographic order. Finite groups only.
    pub fn elements(&self) -> Result<Vec<Coords>> {
        if !self.is_finite() {
            return Err(Error::Precondition("group is infinite".into()));
        }
        let mut out: Vec<Coords> = vec![vec![]];
        for d in &self.invariant_factors {
            let d = d.to_u64().ok_or_else(|| Error::Precondition("group too large".into()))?;
            let mut next = Vec::with_capacity(out.len() * d as usize);
            for c in &out {
                for k in 0..d {
                    let mut c2 = c.clone();
                    c2.push(BigInt::from(k));
                    next.push(c2);
                }
            }
            out = next;
        }
        Ok(out)
    }

    pub fn same_isomorphism_type(&self, other: &FpAbelianGroup) -> bool {
        self.free_rank == other.free_rank && self.invariant_factors == other.invariant_factors
    }

    /// Adds `k·a` to `acc` in coordinates, reducing torsion.
    pub fn coords_axpy(&self, acc: &mut [BigInt], a: &[BigInt], k: &BigInt) {
        for (x, y) in acc.iter_mut().zip(a) {
            if !y.is_zero() {
                *x += k * y;
            }
        }
        self.reduce(acc);
    }
}

/// Recomputes the canonical form of `g` from its relations.
pub fn canonicalize(g: &FpAbelianGroup) -> FpAbelianGroup {
    canonicalize_parts(g.num_generators, g.relations.clone())
}

/// Removes generators that occur with coefficient ±1 in some relation by
/// substitution. Pivots are chosen by least fill-in, ties by lowest index.
/// Returns the kept generators, the remaining relations over them, and each
/// eliminated generator's expression, in elimination order.
#[allow(clippy::type_complexity)]
fn eliminate_units(n: usize, rows: &[Vec<BigInt>]) -> (Vec<usize>, Vec<Vec<BigInt>>, Vec<(usize, Vec<(usize, BigInt)>)>) {
    let mut sparse: Vec<Option<BTreeMap<usize, BigInt>>> = rows
        .iter()
        .map(|r| {
            let m: BTreeMap<usize, BigInt> =
                r.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(j, x)| (j, x.clone())).collect();
            (!m.is_empty()).then_some(m)
        })
        .collect();
    let mut occurs: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for (i, r) in sparse.iter().enumerate() {
        for &j in r.iter().flat_map(|m| m.keys()) {
            occurs[j].insert(i);
        }
    }
    let mut eliminated = vec![false; n];
    let mut subs = Vec::new();
    loop {
        let mut best: Option<(usize, usize, usize)> = None;
        for (i, r) in sparse.iter().enumerate() {
            let Some(r) = r else { continue };
            for (&j, c) in r {
                if c.abs().is_one() {
                    let cost = (r.len() - 1) * (occurs[j].len() - 1);
                    if best.is_none_or(|(b, _, _)| cost < b) {
                        best = Some((cost, i, j));
                    }
                }
            }
        }
        let Some((_, pi, pj)) = best else { break };
        let pivot = sparse[pi].take().unwrap();
        for &k in pivot.keys() {
            occurs[k].remove(&pi);
        }
        let c = pivot[&pj].clone();
        for i in std::mem::take(&mut occurs[pj]) {
            let r = sparse[i].as_mut().unwrap();
            let q = -(&r[&pj] * &c);
            for (&k, a) in &pivot {
                let e = r.entry(k).or_insert_with(BigInt::zero);
                *e += &q * a;
                if e.is_zero() {
                    r.remove(&k);
                    occurs[k].remove(&i);
                } else {
                    occurs[k].insert(i);
                }
            }
            if r.is_empty() {
                sparse[i] = None;
            }
        }
        let expr = pivot.iter().filter(|(&k, _)| k != pj).map(|(&k, a)| (k, -(&c * a))).collect();
        subs.push((pj, expr));
        eliminated[pj] = true;
    }
    let kept: Vec<usize> = (0..n).filter(|&j| !eliminated[j]).collect();
    let pos: HashMap<usize, usize> = kept.iter().enumerate().map(|(i, &j)| (j, i)).collect();
    let dense = sparse
        .into_iter()
        .flatten()
        .map(|m| {
            let mut r = vec![BigInt::zero(); kept.len()];
            for (k, a) in m {
                r[pos[&k]] = a;
            }
            r
        })
        .collect();
    (kept, dense, subs)
}

fn canonicalize_parts(n: usize, relations: IntMatrix) -> FpAbelianGroup {
    let (kept, rest, subs) = eliminate_units(n, &relations.data);
    let m = kept.len();
    let reduced = reduce_rows(rest, m);
    let mut w = SnfWork { a: reduced, u: None, v: Some(ident(m)), vinv: Some(ident(m)) };
    if w.rows() > 0 && m > 0 {
        w.run();
    }
    let rank = w.a.len();
    let v = w.v.unwrap();
    let vinv = w.vinv.unwrap();
    let mut selected = Vec::new();
    let mut invariant_factors = Vec::new();
    for i in 0..rank {
        let d = &w.a[i][i];
        if !d.is_one() {
            invariant_factors.push(d.clone());
            selected.push(i);
        }
    }
    selected.extend(rank..m);
    let dim = selected.len();
    let mut projection = vec![vec![BigInt::zero(); dim]; n];
    for (i, &g) in kept.iter().enumerate() {
        projection[g] = selected.iter().map(|&j| v[i][j].clone()).collect();
    }
    for (g, expr) in subs.iter().rev() {
        let mut row = vec![BigInt::zero(); dim];
        for (k, a) in expr {
            axpy_row(&mut row, &projection[*k], a);
        }
        projection[*g] = row;
    }
    let inclusion = selected
        .iter()
        .map(|&j| {
            let mut row = vec![BigInt::zero(); n];
            for (i, &g) in kept.iter().enumerate() {
                row[g] = vinv[j][i].clone();
            }
            row
        })
        .collect();
    FpAbelianGroup {
        num_generators: n,
        relations,
        invariant_factors,
        free_rank: m - rank,
        projection,
        inclusion,
    }
}

/// A homomorphism out of a canonical group, stored as the images (target
/// coordinates) of the source's canonical generators.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct GroupHom {
    pub images: Vec<Coords>,
}

impl GroupHom {
    pub fn apply(&self, source: &FpAbelianGroup, target: &FpAbelianGroup, x: &GroupElement) -> Result<Coords> {
        let c = source.coords(x)?;
        let mut out = vec![BigInt::zero(); target.dim()];
        for (ci, img) in c.iter().zip(&self.images) {
            target.coords_axpy(&mut out, img, ci);
        }
        Ok(out)
    }
}

/// Enumerates homomorphisms `G → H` (H finite) accepted by `accept`,
/// backtracking over the canonical generators of `G` with order-divisibility pruning.
pub fn group_hom_enumerate(
    g: &FpAbelianGroup,
    h: &FpAbelianGroup,
    accept: &dyn Fn(&GroupHom) -> bool,
    budget: u64,
) -> Result<Vec<GroupHom>> {
    let elems = h.elements()?;
    let candidates: Vec<Vec<&Coords>> = (0..g.dim())
        .map(|i| {
            let d = g.coordinate_order(i);
            elems
                .iter()
                .filter(|e| {
                    let mut m = vec![BigInt::zero(); h.dim()];
                    h.coords_axpy(&mut m, e, &d);
                    m.iter().all(|x| x.is_zero())
                })
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut nodes = 0u64;
    let mut stack: Vec<Coords> = Vec::with_capacity(g.dim());
    fn rec(
        i: usize,
        cands: &[Vec<&Coords>],
        stack: &mut Vec<Coords>,
        out: &mut Vec<GroupHom>,
        nodes: &mut u64,
        budget: u64,
        accept: &dyn Fn(&GroupHom) -> bool,
    ) -> Result<()> {
        *nodes += 1;
        if *nodes > budget {
            return Err(Error::BudgetExceeded(budget));
        }
        if i == cands.len() {
            let hom = GroupHom { images: stack.clone() };
            if accept(&hom) {
                out.push(hom);
            }
            return Ok(());
        }
        for c in &cands[i] {
            stack.push((*c).clone());
            rec(i + 1, cands, stack, out, nodes, budget, accept)?;
            stack.pop();
        }
        Ok(())
    }
    rec(0, &candidates, &mut stack, &mut out, &mut nodes, budget, accept)?;
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_i64(rows[0].len(), rows).unwrap()
    }

    fn check_snf(a: &IntMatrix) -> Snf {
        let s = smith_normal_form(a);
        assert_eq!(s.u.mul(a).unwrap().mul(&s.v).unwrap(), s.d);
        assert_eq!(s.u.determinant().unwrap().abs(), BigInt::one());
        assert_eq!(s.v.determinant().unwrap().abs(), BigInt::one());
        assert!(s.d.is_diagonal());
        s
    }

    #[test]
    fn snf_small_cases() {
        let s = check_snf(&m(&[vec![2, 0], vec![0, 3]]));
        assert_eq!(s.d, m(&[vec![1, 0], vec![0, 6]]));
        let s = check_snf(&m(&[vec![0]]));
        assert_eq!(s.d, m(&[vec![0]]));
        assert_eq!(s.u, m(&[vec![1]]));
        assert_eq!(s.v, m(&[vec![1]]));
        let s = check_snf(&m(&[vec![1, 0], vec![0, 1]]));
        assert_eq!(s.d, IntMatrix::identity(2));
    }

    #[test]
    fn canonical_forms() {
        let g = FpAbelianGroup::from_i64(2, &[vec![2, 0]]).unwrap();
        assert_eq!(g.invariant_factors(), &[BigInt::from(2)]);
        assert_eq!(g.free_rank(), 1);
        let g = FpAbelianGroup::free(3);
        assert_eq!(g.free_rank(), 3);
        assert!(g.invariant_factors().is_empty());
    }

    #[test]
    fn equality_in_canonical_coordinates() {
        let g = FpAbelianGroup::from_i64(2, &[vec![2, 0]]).unwrap();
        assert!(g.element_equal(&GroupElement(vec![1, 0]), &GroupElement(vec![3, 0])).unwrap());
        assert!(!g.element_equal(&GroupElement(vec![0, 1]), &GroupElement(vec![0, 2])).unwrap());
        assert!(g.element_equal(&GroupElement(vec![1]), &GroupElement(vec![1, 0])).is_err());
    }

    #[test]
    fn coordinates_round_trip() {
        let g = FpAbelianGroup::from_i64(3, &[vec![2, 4, 0], vec![0, 6, 3]]).unwrap();
        for x in [vec![1, 0, 0], vec![0, 1, 0], vec![3, -2, 7]] {
            let e = GroupElement(x);
            let c = g.coords(&e).unwrap();
            let back = g.element_from_coords(&c).unwrap();
            assert!(g.element_equal(&e, &back).unwrap());
        }
    }

    #[test]
    fn hom_counts() {
        let z3 = FpAbelianGroup::from_i64(1, &[vec![3]]).unwrap();
        let z = FpAbelianGroup::free(1);
        let z2 = FpAbelianGroup::from_i64(1, &[vec![2]]).unwrap();
        let all = |_: &GroupHom| true;
        assert_eq!(group_hom_enumerate(&z, &z3, &all, 1000).unwrap().len(), 3);
        assert_eq!(group_hom_enumerate(&z2, &z3, &all, 1000).unwrap().len(), 1);
        let g = FpAbelianGroup::from_i64(3, &[vec![2, 0, 0]]).unwrap();
        assert_eq!(group_hom_enumerate(&g, &z3, &all, 1000).unwrap().len(), 9);
        assert!(matches!(group_hom_enumerate(&g, &z3, &all, 3), Err(Error::BudgetExceeded(3))));
    }

    #[test]
    fn quotients() {
        let z2 = FpAbelianGroup::free(2);
        let q = z2.quotient_group(&[GroupElement(vec![1, -1])]).unwrap();
        assert_eq!((q.free_rank(), q.invariant_factors().len()), (1, 0));
        // Unit group of U: generators (eps, x, y) with 2 eps = 0.
        let u = FpAbelianGroup::from_i64(3, &[vec![2, 0, 0]]).unwrap();
        let q = u.quotient_group(&[GroupElement(vec![0, 1, -1])]).unwrap();
        assert_eq!(q.free_rank(), 1);
        assert_eq!(q.invariant_factors(), &[BigInt::from(2)]);
        let same = u.quotient_group(&[]).unwrap();
        assert!(same.same_isomorphism_type(&u));
    }
}
