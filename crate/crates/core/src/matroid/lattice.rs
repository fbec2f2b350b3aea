//! Lattices of flats and upper sublattices.
//!
//! An upper sublattice `[F, E]_S` is given by a bottom flat `F` and a set `S` of
//! flats covering `F`. It is realized by the embedded minor `M ∖ J / I`, where
//! `I` is the least basis of `F`, one least element is kept from each atom in
//! `S`, and `J` is everything else. Its lattice of flats is the join-closure of
//! `S` above `F`, so a type check against a simple template matroid is a
//! matroid isomorphism test on this minor.

use std::str::FromStr;

use itertools::Itertools;
use serde::Serialize;

use super::{elems, named_matroid, Matroid, Set};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlatLattice {
    /// Flats grouped by rank, each group sorted by bitmask.
    pub flats: Vec<Vec<Set>>,
    /// Cover relations `(lower, upper)`.
    pub covers: Vec<(Set, Set)>,
}

impl FlatLattice {
    pub fn len(&self) -> usize {
        self.flats.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum SublatticeType {
    U24,
    U25,
    U35,
    C5,
    F7,
    F7dual,
    W3,
    Q6,
    P6,
}

impl SublatticeType {
    pub const ALL: [SublatticeType; 9] = [
        SublatticeType::U24,
        SublatticeType::U25,
        SublatticeType::U35,
        SublatticeType::C5,
        SublatticeType::F7,
        SublatticeType::F7dual,
        SublatticeType::W3,
        SublatticeType::Q6,
        SublatticeType::P6,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SublatticeType::U24 => "U24",
            SublatticeType::U25 => "U25",
            SublatticeType::U35 => "U35",
            SublatticeType::C5 => "C5",
            SublatticeType::F7 => "F7",
            SublatticeType::F7dual => "F7dual",
            SublatticeType::W3 => "W3",
            SublatticeType::Q6 => "Q6",
            SublatticeType::P6 => "P6",
        }
    }

    /// The simple matroid whose lattice of flats this type is.
    pub fn template(self) -> Matroid {
        let name = match self {
            SublatticeType::U24 => "U(2,4)",
            SublatticeType::U25 => "U(2,5)",
            SublatticeType::U35 => "U(3,5)",
            SublatticeType::W3 => "whirl(3)",
            other => other.name(),
        };
        named_matroid(name).expect("template matroid")
    }
}

impl FromStr for SublatticeType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SublatticeType::ALL
            .into_iter()
            .find(|t| t.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownName(s.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UpperSublattice {
    pub bottom: Set,
    pub atoms: Vec<Set>,
    pub type_tag: SublatticeType,
    /// `I`: least basis of the bottom flat.
    pub contract: Set,
    /// `J`: deleted elements of the realizing minor.
    pub delete: Set,
}

impl UpperSublattice {
    /// The flats `⟨F ∪ ⋃T⟩` for `T ⊆ S`, sorted.
    pub fn elements(&self, m: &Matroid) -> Vec<Set> {
        let mut out: Vec<Set> = (0..1u32 << self.atoms.len())
            .map(|mask| {
                let u = elems(mask).into_iter().fold(self.bottom, |acc, i| acc | self.atoms[i]);
                m.closure(u)
            })
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

impl Matroid {
    pub fn flat_lattice(&self) -> FlatLattice {
        let all = self.flats();
        let mut flats = vec![Vec::new(); self.r + 1];
        for &f in &all {
            flats[self.rank_of(f)].push(f);
        }
        let mut covers = Vec::new();
        for k in 0..self.r {
            for &a in &flats[k] {
                for &b in &flats[k + 1] {
                    if a & !b == 0 {
                        covers.push((a, b));
                    }
                }
            }
        }
        FlatLattice { flats, covers }
    }

    /// Flats covering `f`.
    pub fn covers_of(&self, f: Set) -> Vec<Set> {
        let k = self.rank_of(f);
        let mut out: Vec<Set> = (0..self.n)
            .filter(|&e| f >> e & 1 == 0)
            .map(|e| self.closure(f | 1 << e))
            .filter(|&g| self.rank_of(g) == k + 1)
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Lexicographically least basis of the flat `f`, built greedily.
    pub fn least_basis(&self, f: Set) -> Set {
        elems(f).into_iter().fold(0, |b, e| if self.is_independent(b | 1 << e) { b | 1 << e } else { b })
    }

    /// The realizing minor data `(I, J)` for bottom `f` and atoms `s`.
    pub fn sublattice_minor(&self, f: Set, s: &[Set]) -> (Set, Set) {
        let i = self.least_basis(f);
        let reps = s.iter().fold(0, |acc, &a| acc | 1 << (a & !f).trailing_zeros());
        (i, self.ground() & !i & !reps)
    }

    /// All upper sublattices of the given type.
    pub fn upper_sublattices(&self, t: SublatticeType) -> Vec<UpperSublattice> {
        let tmpl = t.template();
        if tmpl.r > self.r {
            return vec![];
        }
        let mut out = Vec::new();
        for bottom in self.flats_of_rank(self.r - tmpl.r) {
            let atoms = self.covers_of(bottom);
            if atoms.len() < tmpl.n {
                continue;
            }
            for choice in atoms.iter().copied().combinations(tmpl.n) {
                let (i, j) = self.sublattice_minor(bottom, &choice);
                let minor = self.minor(j, i).expect("disjoint");
                if minor.r == tmpl.r && minor.bases.len() == tmpl.bases.len() && minor.is_isomorphic(&tmpl).is_some() {
                    out.push(UpperSublattice { bottom, atoms: choice, type_tag: t, contract: i, delete: j });
                }
            }
        }
        out
    }
}
