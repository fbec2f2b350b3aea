//! Named pastures and identification against them.
//!
//! Finite fields 𝔽₄ … 𝔽₉ are built from field arithmetic: one generator `g`
//! for a primitive element, with every pair `(a, 1 − a)` of units as a
//! fundamental pair. All other entries are transcribed presentations.

use std::sync::OnceLock;

use serde::Serialize;

use super::{Elem, MultRelation, Pasture, PastureMorphism, Presentation};
use crate::error::{default_budget, Error, Result};

const NAMES: &[&str] = &[
    "regular", "K", "S", "W", "F2", "F3", "F4", "F5", "F7", "F8", "F9", "U", "D", "H", "G", "V", "U_k(3)", "U_k(4)",
    "H2", "H3", "H4", "K2", "P4",
];

/// Catalog names in identification order.
pub fn catalog_names() -> Vec<String> {
    NAMES.iter().map(|s| s.to_string()).collect()
}

fn m(sign: i8, f: &[(&str, i64)]) -> Elem {
    Elem::mono(sign, f)
}

fn rel(sign: i8, f: &[(&str, i64)]) -> MultRelation {
    match Elem::mono(sign, f) {
        Elem::Unit { sign, exps } => MultRelation { exps, sign },
        Elem::Zero => unreachable!(),
    }
}

fn build(name: &str, gens: &[&str], mult: Vec<MultRelation>, add: Vec<[Elem; 3]>) -> Result<Pasture> {
    let p = Presentation {
        generators: gens.iter().map(|s| s.to_string()).collect(),
        mult_relations: mult,
        add_relations: add,
    };
    Pasture::from_presentation_named(p, Some(name.to_string()))
}

/// `a + b - 1`.
fn fund(a: Elem, b: Elem) -> [Elem; 3] {
    [a, b, Elem::minus_one()]
}

/// The pasture of the named catalog entry.
pub fn named(name: &str) -> Result<Pasture> {
    let one = || m(1, &[]);
    let neg = || m(-1, &[]);
    match name {
        "regular" | "F±" | "Fpm" => build("regular", &[], vec![], vec![]),
        "F2" => build("F2", &[], vec![rel(-1, &[])], vec![]),
        "F3" => build("F3", &[], vec![], vec![[one(), one(), one()]]),
        "K" => build("K", &[], vec![rel(-1, &[])], vec![[one(), one(), one()]]),
        "S" => build("S", &[], vec![], vec![[one(), one(), neg()]]),
        "W" => build("W", &[], vec![], vec![[one(), one(), one()], [one(), one(), neg()]]),
        "F4" | "F5" | "F7" | "F8" | "F9" => field(name[1..].parse().unwrap()),
        "U" => build("U", &["x", "y"], vec![], vec![fund(m(1, &[("x", 1)]), m(1, &[("y", 1)]))]),
        "D" => build("D", &["x"], vec![], vec![[m(1, &[("x", 1)]), neg(), neg()]]),
        "H" => build(
            "H",
            &["z"],
            vec![],
            vec![[m(1, &[("z", 3)]), one(), Elem::Zero], fund(m(1, &[("z", 1)]), m(1, &[("z", -1)]))],
        ),
        "G" => build("G", &["x"], vec![], vec![fund(m(1, &[("x", 2)]), m(1, &[("x", 1)]))]),
        "V" => {
            let gens = ["x1", "x2", "x3", "x4", "x5"];
            let add = (0..5)
                .map(|i| {
                    let prev = gens[(i + 4) % 5];
                    let next = gens[(i + 1) % 5];
                    fund(m(1, &[(gens[i], 1)]), m(1, &[(prev, 1), (next, 1)]))
                })
                .collect();
            build("V", &gens, vec![], add)
        }
        "H2" => build(
            "H2",
            &["i", "x"],
            vec![],
            vec![
                [m(1, &[("i", 2)]), one(), Elem::Zero],
                [m(1, &[("x", 1)]), m(-1, &[("i", 1)]), neg()],
                [m(1, &[("x", 2)]), m(-1, &[("i", 1)]), m(-1, &[("i", 1)])],
            ],
        ),
        "H3" => build(
            "H3",
            &["x", "y", "z"],
            vec![],
            vec![
                fund(m(1, &[("x", 1)]), m(1, &[("y", 1)])),
                fund(m(1, &[("x", 1), ("y", 1)]), m(1, &[("z", 1)])),
                [m(1, &[("x", 1)]), m(1, &[("y", 2)]), m(-1, &[("z", 1)])],
                [m(1, &[("x", 2)]), m(1, &[("y", 1)]), m(-1, &[("z", 1)])],
            ],
        ),
        "H4" => build(
            "H4",
            &["x", "y", "z", "s", "t", "w"],
            vec![],
            vec![
                fund(m(1, &[("x", 1)]), m(1, &[("s", 1)])),
                fund(m(1, &[("y", 1)]), m(1, &[("t", 1)])),
                fund(m(1, &[("x", 1), ("y", 1)]), m(1, &[("z", 1)])),
                fund(m(1, &[("s", 1), ("z", -1)]), m(1, &[("x", 1), ("t", 1), ("z", -1)])),
                fund(m(1, &[("t", 1), ("z", -1)]), m(1, &[("y", 1), ("s", 1), ("z", -1)])),
                fund(m(1, &[("w", 1), ("z", -1)]), m(1, &[("s", 1), ("t", 1), ("z", -1)])),
                fund(m(1, &[("x", 1), ("t", 1), ("w", -1)]), m(1, &[("y", 1), ("s", 1), ("w", -1)])),
                fund(m(1, &[("w", 1), ("y", -1), ("z", -1)]), m(-1, &[("x", 1), ("t", 2), ("y", -1), ("z", -1)])),
                fund(m(1, &[("w", 1), ("x", -1), ("z", -1)]), m(-1, &[("y", 1), ("s", 2), ("x", -1), ("z", -1)])),
            ],
        ),
        "K2" => build(
            "K2",
            &["x", "y", "z"],
            vec![],
            vec![
                fund(m(1, &[("y", 1)]), m(-1, &[("x", 1)])),
                fund(m(1, &[("z", 1)]), m(-1, &[("y", 1)])),
                fund(m(1, &[("y", 2)]), m(1, &[("x", 1), ("z", 1)])),
            ],
        ),
        "P4" => build(
            "P4",
            &["x", "y", "z", "w"],
            vec![],
            vec![
                fund(m(1, &[("x", 1)]), m(1, &[("y", 1)])),
                fund(m(1, &[("z", 1)]), m(-1, &[("x", 1)])),
                fund(m(1, &[("w", 1)]), m(-1, &[("y", 1)])),
                fund(m(1, &[("x", 2)]), m(1, &[("y", 1), ("z", 1)])),
                fund(m(1, &[("y", 2)]), m(1, &[("x", 1), ("w", 1)])),
            ],
        ),
        _ => {
            let k = name
                .strip_prefix("U_k(")
                .or_else(|| name.strip_prefix("Uk("))
                .and_then(|s| s.strip_suffix(')'))
                .and_then(|s| s.trim().parse::<usize>().ok())
                .ok_or_else(|| Error::UnknownName(name.to_string()))?;
            regular_k(k)
        }
    }
}

/// The `k`-regular partial field 𝕌ₖ, generated by the differences `α_j − α_i`
/// with `α_{-1} = 0`, `α_0 = 1`.
pub fn regular_k(k: usize) -> Result<Pasture> {
    if k > 8 {
        return Err(Error::Precondition(format!("U_k({k}) is beyond the supported range")));
    }
    // Indices are shifted by one: position 0 is α_{-1}, position 1 is α_0.
    let top = k + 2;
    let gname = |j: usize, i: usize| format!("d{}_{}", j as i64 - 1, i as i64 - 1);
    let mut gens = Vec::new();
    for j in 0..top {
        for i in 0..j {
            if j != 1 {
                gens.push(gname(j, i));
            }
        }
    }
    // α_a − α_b as (sign, factor list).
    let diff = |a: usize, b: usize| -> (i8, Vec<(String, i64)>) {
        let (hi, lo, sign) = if a > b { (a, b, 1) } else { (b, a, -1) };
        if hi == 1 && lo == 0 {
            (sign, vec![])
        } else {
            (sign, vec![(gname(hi, lo), 1)])
        }
    };
    let frac = |num: &[(usize, usize)], den: &[(usize, usize)]| -> Elem {
        let mut sign = 1i8;
        let mut f: Vec<(String, i64)> = Vec::new();
        for &(a, b) in num {
            let (s, v) = diff(a, b);
            sign *= s;
            f.extend(v);
        }
        for &(a, b) in den {
            let (s, v) = diff(a, b);
            sign *= s;
            f.extend(v.into_iter().map(|(n, e)| (n, -e)));
        }
        let refs: Vec<(&str, i64)> = f.iter().map(|(n, e)| (n.as_str(), *e)).collect();
        Elem::mono(sign, &refs)
    };
    let mut add = Vec::new();
    for i in 0..top {
        for j in i + 1..top {
            for l in j + 1..top {
                add.push(fund(frac(&[(i, l)], &[(j, l)]), frac(&[(i, j)], &[(l, j)])));
                for mm in l + 1..top {
                    add.push(fund(
                        frac(&[(i, l), (j, mm)], &[(i, mm), (j, l)]),
                        frac(&[(i, j), (l, mm)], &[(i, mm), (l, j)]),
                    ));
                }
            }
        }
    }
    let refs: Vec<&str> = gens.iter().map(String::as_str).collect();
    build(&format!("U_k({k})"), &refs, vec![], add)
}

/// Arithmetic in GF(p^d) with elements encoded as base-`p` digit strings.
struct Gf {
    p: u32,
    d: u32,
    /// Monic modulus coefficients `c_0 … c_{d-1}` of `x^d + …`.
    modulus: Vec<u32>,
}

impl Gf {
    fn new(q: u32) -> Result<Gf> {
        let (p, d, modulus) = match q {
            2 | 3 | 5 | 7 => (q, 1, vec![0]),
            4 => (2, 2, vec![1, 1]),
            8 => (2, 3, vec![1, 1, 0]),
            9 => (3, 2, vec![1, 0]),
            _ => return Err(Error::UnknownName(format!("F{q}"))),
        };
        Ok(Gf { p, d, modulus })
    }

    fn q(&self) -> u32 {
        self.p.pow(self.d)
    }

    fn digits(&self, a: u32) -> Vec<u32> {
        (0..self.d).map(|i| (a / self.p.pow(i)) % self.p).collect()
    }

    fn encode(&self, v: &[u32]) -> u32 {
        v.iter().enumerate().map(|(i, &c)| c * self.p.pow(i as u32)).sum()
    }

    fn sub(&self, a: u32, b: u32) -> u32 {
        let (x, y) = (self.digits(a), self.digits(b));
        let v: Vec<u32> = x.iter().zip(&y).map(|(a, b)| (a + self.p - b) % self.p).collect();
        self.encode(&v)
    }

    fn mul(&self, a: u32, b: u32) -> u32 {
        if self.d == 1 {
            return a * b % self.p;
        }
        let (x, y) = (self.digits(a), self.digits(b));
        let d = self.d as usize;
        let mut prod = vec![0u32; 2 * d - 1];
        for i in 0..d {
            for j in 0..d {
                prod[i + j] = (prod[i + j] + x[i] * y[j]) % self.p;
            }
        }
        for k in (d..prod.len()).rev() {
            let c = prod[k];
            prod[k] = 0;
            for (t, &mc) in self.modulus.iter().enumerate() {
                let idx = k - d + t;
                prod[idx] = (prod[idx] + self.p * self.p - c * mc % self.p) % self.p;
            }
        }
        self.encode(&prod[..d])
    }
}

/// The finite field 𝔽_q as a pasture, for q ∈ {2, 3, 4, 5, 7, 8, 9}.
pub fn field(q: u32) -> Result<Pasture> {
    match q {
        2 => return named("F2"),
        3 => return named("F3"),
        _ => {}
    }
    let f = Gf::new(q)?;
    let order = f.q() - 1;
    let powers = |g: u32| -> Vec<u32> {
        let mut out = vec![1];
        for _ in 1..order {
            out.push(f.mul(*out.last().unwrap(), g));
        }
        out
    };
    let g = (2..f.q())
        .find(|&g| {
            let mut pw = powers(g);
            pw.sort_unstable();
            pw.dedup();
            pw.len() == order as usize
        })
        .ok_or_else(|| Error::Verification(format!("no primitive element in F{q}")))?;
    let pw = powers(g);
    let log = |a: u32| pw.iter().position(|&x| x == a).unwrap() as i64;
    let mult = if f.p == 2 {
        vec![rel(1, &[("g", order as i64)]), rel(-1, &[])]
    } else {
        vec![rel(1, &[("g", order as i64)]), rel(-1, &[("g", (order / 2) as i64)])]
    };
    let mut add = Vec::new();
    for &a in &pw {
        let b = f.sub(1, a);
        if b != 0 {
            add.push(fund(m(1, &[("g", log(a))]), m(1, &[("g", log(b))])));
        }
    }
    build(&format!("F{q}"), &["g"], mult, add)
}

fn catalog() -> &'static [(String, Pasture)] {
    static CATALOG: OnceLock<Vec<(String, Pasture)>> = OnceLock::new();
    CATALOG.get_or_init(|| NAMES.iter().map(|n| (n.to_string(), named(n).expect("catalog entry builds"))).collect())
}

/// Outcome of matching a pasture against the catalog.
#[derive(Clone, Debug)]
pub enum Identification {
    Match { name: String, witness: PastureMorphism },
    NoMatch,
    /// The search budget ran out before a match or a proof of absence.
    Unidentified { candidates: Vec<String> },
}

impl Identification {
    pub fn name(&self) -> Option<&str> {
        match self {
            Identification::Match { name, .. } => Some(name),
            _ => None,
        }
    }

    pub fn label(&self) -> String {
        match self {
            Identification::Match { name, .. } => name.clone(),
            Identification::NoMatch => "no match".into(),
            Identification::Unidentified { .. } => "unidentified".into(),
        }
    }
}

#[derive(Serialize)]
struct IdentJson<'a> {
    status: &'a str,
    name: Option<&'a str>,
}

impl Serialize for Identification {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let status = match self {
            Identification::Match { .. } => "match",
            Identification::NoMatch => "no_match",
            Identification::Unidentified { .. } => "unidentified",
        };
        IdentJson { status, name: self.name() }.serialize(s)
    }
}

/// Finds the first catalog pasture isomorphic to `p`.
pub fn identify(p: &Pasture) -> Result<Identification> {
    identify_with_budget(p, default_budget())
}

pub fn identify_with_budget(p: &Pasture, budget: u64) -> Result<Identification> {
    let t = p.numerical_type();
    let mut exhausted = Vec::new();
    for (name, q) in catalog() {
        if q.numerical_type() != t {
            continue;
        }
        match super::find_isomorphism(p, q, budget) {
            Ok(Some(witness)) => return Ok(Identification::Match { name: name.clone(), witness }),
            Ok(None) => {}
            Err(Error::BudgetExceeded(_)) => exhausted.push(name.clone()),
            Err(e) => return Err(e),
        }
    }
    if exhausted.is_empty() {
        Ok(Identification::NoMatch)
    } else {
        Ok(Identification::Unidentified { candidates: exhausted })
    }
}
