//! Matroids on at most twelve elements, stored by their bases as bitsets.

mod catalog;
mod json;
mod lattice;
#[cfg(test)]
mod tests;

use std::fmt;
use std::sync::Arc;

use itertools::Itertools;

use crate::error::{Error, Result};

pub use catalog::{matroid_catalog_names, named_matroid};
pub use json::{matroid_from_json, matroid_to_json, parse_text, to_text};
pub use lattice::{FlatLattice, SublatticeType, UpperSublattice};

/// A subset of the ground set as a bitmask.
pub type Set = u32;

pub const MAX_N: usize = 16;

pub fn set_of(elems: &[usize]) -> Set {
    elems.iter().fold(0, |s, &e| s | (1 << e))
}

pub fn elems(s: Set) -> Vec<usize> {
    (0..32).filter(|&i| s >> i & 1 == 1).collect()
}

fn size(s: Set) -> usize {
    s.count_ones() as usize
}

/// All `k`-subsets of `from`, in increasing numeric order.
pub fn subsets_of_size(from: Set, k: usize) -> Vec<Set> {
    let items = elems(from);
    let mut out: Vec<Set> = items.into_iter().combinations(k).map(|c| set_of(&c)).collect();
    out.sort_unstable();
    out
}

#[derive(Clone)]
pub struct Matroid {
    n: usize,
    r: usize,
    bases: Vec<Set>,
    rank: Arc<Vec<u8>>,
}

impl PartialEq for Matroid {
    fn eq(&self, o: &Matroid) -> bool {
        self.n == o.n && self.bases == o.bases
    }
}

impl Eq for Matroid {}

impl fmt::Debug for Matroid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matroid(n={}, r={}, {} bases)", self.n, self.r, self.bases.len())
    }
}

impl Matroid {
    /// Validated matroid from its bases.
    pub fn from_bases(n: usize, bases: &[Set]) -> Result<Matroid> {
        if n > MAX_N {
            return Err(Error::Precondition(format!("ground set of size {n} exceeds {MAX_N}")));
        }
        let mut bases = bases.to_vec();
        bases.sort_unstable();
        bases.dedup();
        let Some(&first) = bases.first() else {
            return Err(Error::Axiom("empty basis family".into()));
        };
        let r = size(first);
        for &b in &bases {
            if b >> n != 0 {
                return Err(Error::Axiom(format!("basis {:?} exceeds ground set", elems(b))));
            }
            if size(b) != r {
                return Err(Error::Axiom(format!("bases {:?} and {:?} differ in size", elems(first), elems(b))));
            }
        }
        let m = Self::unchecked(n, r, bases);
        m.check_exchange()?;
        Ok(m)
    }

    fn unchecked(n: usize, r: usize, bases: Vec<Set>) -> Matroid {
        let rank = Arc::new(Self::rank_table(n, r, &bases));
        Matroid { n, r, bases, rank }
    }

    fn rank_table(n: usize, r: usize, bases: &[Set]) -> Vec<u8> {
        let full = 1usize << n;
        let mut indep = vec![false; full];
        for &b in bases {
            indep[b as usize] = true;
        }
        for x in (0..full).rev() {
            if indep[x] || size(x as Set) >= r {
                continue;
            }
            indep[x] = (0..n).any(|e| x >> e & 1 == 0 && indep[x | 1 << e]);
        }
        let mut rank = vec![0u8; full];
        for x in 1..full {
            rank[x] = if indep[x] {
                size(x as Set) as u8
            } else {
                (0..n).filter(|&e| x >> e & 1 == 1).map(|e| rank[x & !(1 << e)]).max().unwrap()
            };
        }
        rank
    }

    fn check_exchange(&self) -> Result<()> {
        for &b1 in &self.bases {
            for &b2 in &self.bases {
                for x in elems(b1 & !b2) {
                    let ok = elems(b2 & !b1).into_iter().any(|y| self.is_basis((b1 & !(1 << x)) | 1 << y));
                    if !ok {
                        return Err(Error::Axiom(format!(
                            "basis exchange fails for {:?} and {:?} at {x}",
                            elems(b1),
                            elems(b2)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// The rank-`r` matroid whose bases are the `r`-sets containing none of `circuits`.
    /// Each listed set must be a circuit of the result.
    pub fn from_circuits(n: usize, r: usize, circuits: &[Set]) -> Result<Matroid> {
        let bases: Vec<Set> =
            subsets_of_size(full_set(n), r).into_iter().filter(|&b| circuits.iter().all(|&c| c & !b != 0)).collect();
        let m = Self::from_bases(n, &bases)?;
        for &c in circuits {
            if !m.is_circuit(c) {
                return Err(Error::Axiom(format!("{:?} is not a circuit", elems(c))));
            }
        }
        Ok(m)
    }

    /// The rank-`r` matroid whose bases are all `r`-sets except `nonbases`.
    pub fn from_nonbases(n: usize, r: usize, nonbases: &[Set]) -> Result<Matroid> {
        for &s in nonbases {
            if size(s) != r {
                return Err(Error::Axiom(format!("nonbasis {:?} has size other than {r}", elems(s))));
            }
        }
        let bases: Vec<Set> = subsets_of_size(full_set(n), r).into_iter().filter(|b| !nonbases.contains(b)).collect();
        Self::from_bases(n, &bases)
    }

    pub fn uniform(r: usize, n: usize) -> Result<Matroid> {
        if r > n {
            return Err(Error::Precondition(format!("U({r},{n}) needs r ≤ n")));
        }
        if n > MAX_N {
            return Err(Error::Precondition(format!("ground set of size {n} exceeds {MAX_N}")));
        }
        Ok(Self::unchecked(n, r, subsets_of_size(full_set(n), r)))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.r
    }

    pub fn ground(&self) -> Set {
        full_set(self.n)
    }

    pub fn bases(&self) -> &[Set] {
        &self.bases
    }

    pub fn is_basis(&self, s: Set) -> bool {
        self.bases.binary_search(&s).is_ok()
    }

    pub fn rank_of(&self, s: Set) -> usize {
        self.rank[(s & self.ground()) as usize] as usize
    }

    pub fn is_independent(&self, s: Set) -> bool {
        self.rank_of(s) == size(s)
    }

    pub fn is_coindependent(&self, s: Set) -> bool {
        self.rank_of(self.ground() & !s) == self.r
    }

    pub fn is_circuit(&self, s: Set) -> bool {
        !self.is_independent(s) && elems(s).into_iter().all(|e| self.is_independent(s & !(1 << e)))
    }

    pub fn closure(&self, s: Set) -> Set {
        let r = self.rank_of(s);
        (0..self.n).filter(|&e| self.rank_of(s | 1 << e) == r).fold(s, |acc, e| acc | 1 << e)
    }

    pub fn is_flat(&self, s: Set) -> bool {
        self.closure(s) == s
    }

    /// All flats, ordered by rank and then by bitmask.
    pub fn flats(&self) -> Vec<Set> {
        let mut f: Vec<Set> = (0..1u32 << self.n).filter(|&s| self.is_flat(s)).collect();
        f.sort_by_key(|&s| (self.rank_of(s), s));
        f
    }

    pub fn flats_of_rank(&self, k: usize) -> Vec<Set> {
        self.flats().into_iter().filter(|&s| self.rank_of(s) == k).collect()
    }

    pub fn hyperplanes(&self) -> Vec<Set> {
        if self.r == 0 {
            return vec![];
        }
        self.flats_of_rank(self.r - 1)
    }

    pub fn circuits(&self) -> Vec<Set> {
        (1..1u32 << self.n).filter(|&s| self.is_circuit(s)).collect()
    }

    pub fn loops(&self) -> Set {
        self.closure(0)
    }

    pub fn dual(&self) -> Matroid {
        let g = self.ground();
        let mut b: Vec<Set> = self.bases.iter().map(|&x| g & !x).collect();
        b.sort_unstable();
        Self::unchecked(self.n, self.n - self.r, b)
    }

    /// `M ∖ delete / contract` on the remaining elements, relabelled in increasing order.
    pub fn minor(&self, delete: Set, contract: Set) -> Result<Matroid> {
        if delete & contract != 0 {
            return Err(Error::Precondition("delete and contract sets overlap".into()));
        }
        let keep = self.ground() & !delete & !contract;
        let labels = elems(keep);
        let rc = self.rank_of(contract);
        let rk = self.rank_of(keep | contract) - rc;
        let bases: Vec<Set> = subsets_of_size(keep, rk)
            .into_iter()
            .filter(|&x| self.rank_of(x | contract) - rc == rk)
            .map(|x| relabel(x, &labels))
            .collect();
        Ok(Self::unchecked(labels.len(), rk, bases))
    }

    pub fn delete(&self, s: Set) -> Result<Matroid> {
        self.minor(s, 0)
    }

    pub fn contract(&self, s: Set) -> Result<Matroid> {
        self.minor(0, s)
    }

    /// The embedded minor `M ∖ delete / contract` with independent `contract` and
    /// coindependent `delete`.
    pub fn embedded_minor(&self, contract: Set, delete: Set) -> Result<EmbeddedMinor> {
        if contract & delete != 0 {
            return Err(Error::Precondition("delete and contract sets overlap".into()));
        }
        if !self.is_independent(contract) {
            return Err(Error::Precondition(format!("contract set {:?} is dependent", elems(contract))));
        }
        if !self.is_coindependent(delete) {
            return Err(Error::Precondition(format!("delete set {:?} is not coindependent", elems(delete))));
        }
        let minor = self.minor(delete, contract)?;
        let labels = elems(self.ground() & !delete & !contract);
        Ok(EmbeddedMinor { contract, delete, minor, labels })
    }

    pub fn direct_sum(&self, o: &Matroid) -> Result<Matroid> {
        let n = self.n + o.n;
        if n > MAX_N {
            return Err(Error::Precondition(format!("ground set of size {n} exceeds {MAX_N}")));
        }
        let mut b = Vec::with_capacity(self.bases.len() * o.bases.len());
        for &x in &self.bases {
            for &y in &o.bases {
                b.push(x | y << self.n);
            }
        }
        b.sort_unstable();
        Ok(Self::unchecked(n, self.r + o.r, b))
    }

    /// Simplification: loops removed, parallel classes reduced to their least element.
    /// Returns the matroid and the original labels of its elements.
    pub fn simplify(&self) -> (Matroid, Vec<usize>) {
        let loops = self.loops();
        let mut keep = 0;
        for e in 0..self.n {
            if loops >> e & 1 == 1 {
                continue;
            }
            let parallel_to_kept = elems(keep).into_iter().any(|f| self.rank_of(1 << e | 1 << f) == 1);
            if !parallel_to_kept {
                keep |= 1 << e;
            }
        }
        let m = self.minor(self.ground() & !keep, 0).expect("disjoint");
        (m, elems(keep))
    }

    pub fn is_simple(&self) -> bool {
        self.simplify().0.n == self.n
    }

    /// Number of bases containing each element.
    pub fn basis_degrees(&self) -> Vec<usize> {
        (0..self.n).map(|e| self.bases.iter().filter(|&&b| b >> e & 1 == 1).count()).collect()
    }

    /// Per element, the number of circuits of each size containing it.
    fn circuit_profile(&self) -> Vec<Vec<usize>> {
        let circuits = self.circuits();
        (0..self.n)
            .map(|e| {
                let mut p = vec![0; self.n + 1];
                for &c in &circuits {
                    if c >> e & 1 == 1 {
                        p[size(c)] += 1;
                    }
                }
                p
            })
            .collect()
    }

    /// A bijection `φ` with `rank_N(φ(X)) = rank_M(X)` for all `X`, if one exists.
    pub fn is_isomorphic(&self, o: &Matroid) -> Option<Vec<usize>> {
        if self.n != o.n || self.r != o.r || self.bases.len() != o.bases.len() {
            return None;
        }
        let inv_a: Vec<(usize, Vec<usize>)> =
            self.basis_degrees().into_iter().zip(self.circuit_profile()).collect();
        let inv_b: Vec<(usize, Vec<usize>)> = o.basis_degrees().into_iter().zip(o.circuit_profile()).collect();
        let mut sa = inv_a.clone();
        let mut sb = inv_b.clone();
        sa.sort();
        sb.sort();
        if sa != sb {
            return None;
        }
        // Assign rarest invariant classes first.
        let count = |v: &(usize, Vec<usize>)| inv_a.iter().filter(|w| *w == v).count();
        let mut order: Vec<usize> = (0..self.n).collect();
        order.sort_by_key(|&e| (count(&inv_a[e]), e));
        let mut map = vec![usize::MAX; self.n];
        let mut used = 0u32;
        if self.iso_step(o, &order, 0, &inv_a, &inv_b, &mut map, &mut used) {
            Some(map)
        } else {
            None
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn iso_step(
        &self,
        o: &Matroid,
        order: &[usize],
        k: usize,
        inv_a: &[(usize, Vec<usize>)],
        inv_b: &[(usize, Vec<usize>)],
        map: &mut [usize],
        used: &mut u32,
    ) -> bool {
        if k == order.len() {
            return true;
        }
        let e = order[k];
        let prev = set_of(&order[..k]);
        for f in 0..o.n {
            if *used >> f & 1 == 1 || inv_a[e] != inv_b[f] {
                continue;
            }
            map[e] = f;
            let consistent = sub_masks(prev).all(|s| {
                let x = s | 1 << e;
                let y = elems(x).into_iter().fold(0u32, |acc, a| acc | 1 << map[a]);
                self.rank_of(x) == o.rank_of(y)
            });
            if consistent {
                *used |= 1 << f;
                if self.iso_step(o, order, k + 1, inv_a, inv_b, map, used) {
                    return true;
                }
                *used &= !(1 << f);
            }
            map[e] = usize::MAX;
        }
        false
    }

    /// Embedded minors isomorphic to `n`, over independent contract sets and
    /// coindependent delete sets of the right sizes.
    pub fn minors_isomorphic_to(&self, n: &Matroid, first_only: bool) -> Vec<EmbeddedMinor> {
        let mut out = Vec::new();
        if n.n > self.n || n.r > self.r || n.n - n.r > self.n - self.r {
            return out;
        }
        let c = self.r - n.r;
        let d = (self.n - self.r) - (n.n - n.r);
        for con in subsets_of_size(self.ground(), c) {
            if !self.is_independent(con) {
                continue;
            }
            for del in subsets_of_size(self.ground() & !con, d) {
                if !self.is_coindependent(del) {
                    continue;
                }
                let minor = self.minor(del, con).expect("disjoint");
                if minor.bases.len() != n.bases.len() {
                    continue;
                }
                if minor.is_isomorphic(n).is_some() {
                    let labels = elems(self.ground() & !del & !con);
                    out.push(EmbeddedMinor { contract: con, delete: del, minor, labels });
                    if first_only {
                        return out;
                    }
                }
            }
        }
        out
    }

    pub fn has_minor(&self, n: &Matroid) -> bool {
        !self.minors_isomorphic_to(n, true).is_empty()
    }

    /// `λ(X) = r(X) + r(E∖X) − r(E)`.
    pub fn connectivity_function(&self, x: Set) -> usize {
        self.rank_of(x) + self.rank_of(self.ground() & !x) - self.r
    }

    /// Whether `M` has no `k`-separation for any `k < t` (Tutte's definition).
    pub fn is_t_connected(&self, t: usize) -> bool {
        let g = self.ground();
        (0..=g).filter(|&x| x & !g == 0).all(|x| {
            let (a, b) = (size(x), self.n - size(x));
            (1..t).all(|k| !(a >= k && b >= k && self.connectivity_function(x) < k))
        })
    }

    pub fn connectivity(&self) -> Connectivity {
        Connectivity { is_2_connected: self.is_t_connected(2), is_3_connected: self.is_t_connected(3) }
    }

    /// The matroid with elements permuted: element `e` becomes `perm[e]`.
    pub fn permute(&self, perm: &[usize]) -> Result<Matroid> {
        let b: Vec<Set> = self.bases.iter().map(|&x| elems(x).into_iter().fold(0, |acc, e| acc | 1 << perm[e])).collect();
        Self::from_bases(self.n, &b)
    }

    /// Automorphisms as element permutations, sorted.
    pub fn automorphisms(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        for p in (0..self.n).permutations(self.n) {
            let b: Vec<Set> = {
                let mut v: Vec<Set> =
                    self.bases.iter().map(|&x| elems(x).into_iter().fold(0, |acc, e| acc | 1 << p[e])).collect();
                v.sort_unstable();
                v
            };
            if b == self.bases {
                out.push(p);
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Connectivity {
    pub is_2_connected: bool,
    pub is_3_connected: bool,
}

/// A minor `M ∖ delete / contract` with its elements' original labels.
#[derive(Clone, Debug)]
pub struct EmbeddedMinor {
    pub contract: Set,
    pub delete: Set,
    pub minor: Matroid,
    /// `labels[i]` is the element of `M` that is element `i` of the minor.
    pub labels: Vec<usize>,
}

impl EmbeddedMinor {
    /// Lifts a set of minor elements to `M`'s labels.
    pub fn lift(&self, s: Set) -> Set {
        elems(s).into_iter().fold(0, |acc, e| acc | 1 << self.labels[e])
    }
}

pub fn full_set(n: usize) -> Set {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

fn relabel(x: Set, labels: &[usize]) -> Set {
    labels.iter().enumerate().filter(|(_, &l)| x >> l & 1 == 1).fold(0, |acc, (i, _)| acc | 1 << i)
}

/// All submasks of `s`, including `0` and `s`.
fn sub_masks(s: Set) -> impl Iterator<Item = Set> {
    let mut cur = Some(s);
    std::iter::from_fn(move || {
        let c = cur?;
        cur = if c == 0 { None } else { Some((c - 1) & s) };
        Some(c)
    })
}
