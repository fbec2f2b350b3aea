//! The acceptance suite: eight criteria, each reported as PASS or FAIL.

use std::time::{Duration, Instant};

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::abgroup::{smith_normal_form, IntMatrix};
use crate::error::{default_budget, Error, Result};
use crate::foundation::{foundation, foundation_pasture, route_agrees, FoundationOptions, Route};
use crate::matroid::{named_matroid, Matroid, Set};
use crate::pasture::{
    automorphisms, catalog_names, find_isomorphism, hom_enumerate, identify, named, tensor, Pasture, PastureElement,
};
use crate::represent::{rescaling_classes, representability_table, TABLE_COLUMNS, TABLE_ROWS};

/// Morphism existence from the known representability table, rows and columns as in
/// [`TABLE_ROWS`] and [`TABLE_COLUMNS`].
pub const TABLE_EXPECTED: [[bool; 8]; 10] = {
    const T: bool = true;
    const F: bool = false;
    [
        [T, T, T, T, T, T, T, T],
        [F, T, T, T, T, T, T, T],
        [F, F, T, T, T, T, T, T],
        [T, F, T, F, F, T, F, F],
        [F, T, F, F, F, F, T, F],
        [F, F, F, F, F, F, F, F],
        [F, F, F, F, F, F, F, T],
        [F, T, T, F, T, F, T, F],
        [F, T, F, T, T, F, T, T],
        [F, F, T, T, F, F, T, T],
    ]
};

#[derive(Clone, Debug)]
pub struct CriterionResult {
    pub id: usize,
    pub title: &'static str,
    pub failures: Vec<String>,
    pub elapsed: Duration,
}

impl CriterionResult {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn line(&self) -> String {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        let mut s = format!("{status} {} {} ({:.1} s)", self.id, self.title, self.elapsed.as_secs_f64());
        for f in &self.failures {
            s += &format!("\n    {f}");
        }
        s
    }
}

type Check = fn(bool, &mut Vec<String>) -> Result<()>;

pub const CRITERIA: [(&str, Check); 8] = [
    ("golden foundations", golden),
    ("numerical type of F(U36)", numerical_type),
    ("route agreement", route_agreement),
    ("direct sums", direct_sums),
    ("rescaling classes", rescaling),
    ("automorphism counts", automorphism_counts),
    ("representability table", representability_check),
    ("property suites", properties),
];

/// Runs criterion `id` (1-based). `fast` skips matroids on more than seven elements.
pub fn run_criterion(id: usize, fast: bool) -> CriterionResult {
    let (title, check) = CRITERIA[id - 1];
    let start = Instant::now();
    let mut failures = Vec::new();
    if let Err(e) = check(fast, &mut failures) {
        failures.push(format!("error: {e}"));
    }
    CriterionResult { id, title, failures, elapsed: start.elapsed() }
}

pub fn run_suite(fast: bool) -> Vec<CriterionResult> {
    (1..=CRITERIA.len()).map(|i| run_criterion(i, fast)).collect()
}

fn m(name: &str) -> Result<Matroid> {
    named_matroid(name)
}

fn ident(p: &Pasture) -> Result<String> {
    Ok(identify(p)?.label())
}

fn iso(p: &Pasture, q: &Pasture) -> Result<bool> {
    Ok(find_isomorphism(p, q, default_budget())?.is_some())
}

fn expect<T: PartialEq + std::fmt::Debug>(out: &mut Vec<String>, what: &str, got: T, want: T) {
    if got != want {
        out.push(format!("{what}: got {got:?}, want {want:?}"));
    }
}

const GOLDEN: &[(&str, &str)] = &[
    ("U(2,4)", "U"),
    ("U(2,5)", "V"),
    ("U(3,5)", "V"),
    ("U(2,6)", "U_k(3)"),
    ("U(2,7)", "U_k(4)"),
    ("F7", "F2"),
    ("F7dual", "F2"),
    ("Q6", "V"),
    ("AG23-e", "H"),
    ("whirl(2)", "U"),
    ("whirl(3)", "U"),
    ("whirl(4)", "U"),
    ("F7minus", "D"),
    ("P7", "U"),
    ("T8", "F3"),
    ("wheel(3)", "regular"),
    ("wheel(4)", "regular"),
];

const GOLDEN_LIMIT: Duration = Duration::from_secs(60);

fn golden(fast: bool, out: &mut Vec<String>) -> Result<()> {
    for &(name, want) in GOLDEN {
        let mm = m(name)?;
        if fast && mm.n() > 7 {
            continue;
        }
        let start = Instant::now();
        let got = ident(&foundation_pasture(&mm)?)?;
        expect(out, &format!("F({name})"), got.as_str(), want);
        if start.elapsed() > GOLDEN_LIMIT {
            out.push(format!("F({name}) took {:.1} s", start.elapsed().as_secs_f64()));
        }
    }
    let start = Instant::now();
    if !iso(&foundation_pasture(&m("P6")?)?, &foundation_pasture(&m("U(2,6)")?)?)? {
        out.push("F(P6) is not isomorphic to F(U(2,6))".into());
    }
    if start.elapsed() > GOLDEN_LIMIT {
        out.push(format!("F(P6) took {:.1} s", start.elapsed().as_secs_f64()));
    }
    Ok(())
}

fn numerical_type(_fast: bool, out: &mut Vec<String>) -> Result<()> {
    let t = foundation_pasture(&m("U(3,6)")?)?.numerical_type();
    expect(out, "free rank of F(U(3,6))", t.free_rank, 14);
    expect(out, "torsion of F(U(3,6))", t.invariant_factors, vec![2]);
    expect(out, "-1 = 1 in F(U(3,6))", t.minus_one_trivial, false);
    expect(out, "hexagons of F(U(3,6))", t.hexagon_count, 30);
    for n in 4..=7usize {
        let t = foundation_pasture(&Matroid::uniform(2, n)?)?.numerical_type();
        expect(out, &format!("free rank of F(U(2,{n}))"), t.free_rank, n * (n - 1) / 2 - n);
    }
    Ok(())
}

/// Catalog matroids on at most eight elements, with parameters expanded.
pub fn small_catalog() -> Vec<String> {
    let mut names: Vec<String> = Vec::new();
    for n in 4..=8 {
        for r in 2..=n - 2 {
            names.push(format!("U({r},{n})"));
        }
    }
    for r in 2..=4 {
        names.push(format!("wheel({r})"));
        names.push(format!("whirl({r})"));
    }
    for s in ["F7", "F7dual", "F7minus", "C5", "C5dual", "D6", "Q6", "P6", "P7", "T8", "AG23-e", "PG22"] {
        names.push(s.into());
    }
    names
}

fn route_agreement(fast: bool, out: &mut Vec<String>) -> Result<()> {
    let mut cases: Vec<(String, Route)> = small_catalog().into_iter().map(|n| (n, Route::Diagram)).collect();
    let extra: [(&[&str], Route); 4] = [
        (&["whirl(2)", "whirl(3)", "whirl(4)", "Q6", "U(2,5)"], Route::Diagram2),
        (&["W3", "Q6", "P6", "P7", "F7minus", "T8"], Route::Diagram3),
        (&["AG23-e", "W3", "P7"], Route::Lattice),
        (&["T8"], Route::LatticeRankLe3),
    ];
    for (names, route) in extra {
        cases.extend(names.iter().map(|n| (n.to_string(), route)));
    }
    for (name, route) in cases {
        let mm = m(&name)?;
        if fast && mm.n() > 7 {
            continue;
        }
        if !route.applies_to(&mm) {
            out.push(format!("{} does not apply to {name}", route.name()));
        } else if !route_agrees(&mm, route)? {
            out.push(format!("{} disagrees with GRS on {name}", route.name()));
        }
    }
    Ok(())
}

fn direct_sums(_fast: bool, out: &mut Vec<String>) -> Result<()> {
    let names = ["U(2,4)", "F7", "C5"];
    for (a, b) in names.iter().cartesian_product(names.iter()) {
        let sum = foundation_pasture(&m(a)?.direct_sum(&m(b)?)?)?;
        let t = tensor(&foundation_pasture(&m(a)?)?, &foundation_pasture(&m(b)?)?)?.pasture;
        expect(out, &format!("identify F({a}+{b})"), ident(&sum)?, ident(&t)?);
        if !iso(&sum, &t)? {
            out.push(format!("F({a}+{b}) is not isomorphic to F({a}) ⊗ F({b})"));
        }
    }
    Ok(())
}

fn rescaling(_fast: bool, out: &mut Vec<String>) -> Result<()> {
    for name in ["U(2,4)", "U(2,5)", "C5", "F7", "U(1,2)+U(2,4)"] {
        let mm = m(name)?;
        let f = foundation_pasture(&mm)?;
        for t in ["F2", "F3", "F4"] {
            let p = named(t)?;
            let homs = hom_enumerate(&f, &p)?.len() as u64;
            expect(out, &format!("classes of {name} over {t}"), rescaling_classes(&mm, &p)?.count, homs);
        }
    }
    Ok(())
}

fn automorphism_counts(_fast: bool, out: &mut Vec<String>) -> Result<()> {
    for (name, want) in [("U", 6), ("V", 120), ("U_k(3)", 720)] {
        expect(out, &format!("|Aut({name})|"), automorphisms(&named(name)?, default_budget())?.len(), want);
    }
    Ok(())
}

fn representability_check(_fast: bool, out: &mut Vec<String>) -> Result<()> {
    let t = representability_table(&TABLE_ROWS, &TABLE_COLUMNS)?;
    for (r, row) in TABLE_EXPECTED.iter().enumerate() {
        for (c, &want) in row.iter().enumerate() {
            expect(out, &format!("Hom({}, {})", TABLE_ROWS[r], TABLE_COLUMNS[c]), t.cells[r][c], want);
        }
    }
    Ok(())
}

fn properties(fast: bool, out: &mut Vec<String>) -> Result<()> {
    let built = constructed_pastures(fast)?;
    for (name, p) in &built {
        check_pasture_axioms(name, p, out)?;
    }
    counting_laws(out)?;
    invariance(out)?;
    snf_random(1000, out);
    determinism(fast, out)?;
    Ok(())
}

fn constructed_pastures(fast: bool) -> Result<Vec<(String, Pasture)>> {
    let mut v = Vec::new();
    for n in catalog_names() {
        v.push((n.clone(), named(&n)?));
    }
    for &(name, _) in GOLDEN {
        let mm = m(name)?;
        if !(fast && mm.n() > 7) {
            v.push((format!("F({name})"), foundation_pasture(&mm)?));
        }
    }
    for (a, b) in [("U", "D"), ("H", "F3"), ("F2", "U"), ("V", "S")] {
        v.push((format!("{a}⊗{b}"), tensor(&named(a)?, &named(b)?)?.pasture));
    }
    Ok(v)
}

fn check_pasture_axioms(name: &str, p: &Pasture, out: &mut Vec<String>) -> Result<()> {
    let g = p.unit_group();
    let eps = p.epsilon();
    if !g.is_identity(&eps.scale(2))? {
        out.push(format!("ε² ≠ 1 in {name}"));
    }
    for h in p.hexagons() {
        for pr in &h.pairs {
            if Pasture::orbit(g, &eps, &pr.x, &pr.y).canonical_key() != h.canonical_key() {
                out.push(format!("a hexagon of {name} is not closed"));
            }
            let x = PastureElement::Unit(pr.x.clone());
            let y = PastureElement::Unit(pr.y.clone());
            if !p.is_null(&x, &y, &PastureElement::Unit(p.epsilon()))? {
                out.push(format!("a hexagon pair of {name} is not fundamental"));
            }
        }
    }
    Ok(())
}

fn apply(f: &crate::pasture::PastureMorphism, e: &PastureElement) -> PastureElement {
    match e {
        PastureElement::Zero => PastureElement::Zero,
        PastureElement::Unit(g) => PastureElement::Unit(f.apply(g)),
    }
}

fn counting_laws(out: &mut Vec<String>) -> Result<()> {
    let targets = ["F2", "F3", "F4", "F5", "S", "K"];
    let sources = ["U", "D", "H", "F3", "S", "regular", "G"];
    for t in targets {
        let tp = named(t)?;
        for (a, b) in sources.iter().tuple_combinations() {
            let (pa, pb) = (named(a)?, named(b)?);
            let prod = tensor(&pa, &pb)?.pasture;
            let lhs = hom_enumerate(&prod, &tp)?.len();
            let rhs = hom_enumerate(&pa, &tp)?.len() * hom_enumerate(&pb, &tp)?.len();
            expect(out, &format!("|Hom({a}⊗{b}, {t})|"), lhs, rhs);
        }
    }
    for (src, terms) in quotient_cases()? {
        let q = match src.quotient(&terms) {
            Ok(q) => q,
            Err(Error::Parse(_)) => continue,
            Err(e) => return Err(e),
        };
        for t in targets {
            let tp = named(t)?;
            let lhs = hom_enumerate(&q, &tp)?.len();
            let mut rhs = 0;
            for f in hom_enumerate(&src, &tp)? {
                let mut ok = true;
                for term in &terms {
                    let [a, b, c] = term.each_ref().map(|e| apply(&f, e));
                    ok &= tp.is_null(&a, &b, &c)?;
                }
                rhs += usize::from(ok);
            }
            expect(out, &format!("|Hom({} quotient, {t})|", src.name_hint().unwrap_or("?")), lhs, rhs);
        }
    }
    Ok(())
}

fn quotient_cases() -> Result<Vec<(Pasture, Vec<[PastureElement; 3]>)>> {
    let u = |p: &Pasture, s: i8, f: &[(&str, i64)]| -> Result<PastureElement> { Ok(PastureElement::Unit(p.word(s, f)?)) };
    let z = || PastureElement::Zero;
    let pu = named("U")?;
    let pd = named("D")?;
    let pv = named("V")?;
    let ph = named("H")?;
    Ok(vec![
        (pu.clone(), vec![[u(&pu, 1, &[("x", 1)])?, u(&pu, 1, &[("y", 1)])?, z()]]),
        (pu.clone(), vec![[u(&pu, 1, &[("x", 2)])?, u(&pu, -1, &[])?, z()]]),
        (pu.clone(), vec![[u(&pu, 1, &[("x", 1)])?, u(&pu, 1, &[("y", -1)])?, u(&pu, 1, &[])?]]),
        (pd.clone(), vec![[u(&pd, 1, &[("x", 1)])?, u(&pd, 1, &[])?, z()]]),
        (pd.clone(), vec![[u(&pd, 1, &[("x", 3)])?, u(&pd, -1, &[])?, z()]]),
        (pv.clone(), vec![[u(&pv, 1, &[("x1", 1)])?, u(&pv, -1, &[("x2", 1)])?, z()]]),
        (ph.clone(), vec![[u(&ph, 1, &[("z", 1)])?, u(&ph, 1, &[])?, z()]]),
    ])
}

/// Adds an element parallel to `e`.
fn parallel_extension(mm: &Matroid, e: usize) -> Result<Matroid> {
    let n = mm.n();
    let mut b: Vec<Set> = mm.bases().to_vec();
    b.extend(mm.bases().iter().filter(|&&x| x >> e & 1 == 1).map(|&x| (x & !(1 << e)) | 1 << n));
    Matroid::from_bases(n + 1, &b)
}

fn invariance(out: &mut Vec<String>) -> Result<()> {
    for name in ["U(2,4)", "U(2,5)", "C5", "F7", "P7", "Q6", "whirl(3)", "F7minus"] {
        let mm = m(name)?;
        let f = foundation_pasture(&mm)?;
        if !iso(&f, &foundation_pasture(&mm.dual())?)? {
            out.push(format!("F({name}) differs from F({name}*)"));
        }
        let ext = parallel_extension(&mm, 0)?;
        if !iso(&f, &foundation_pasture(&ext)?)? {
            out.push(format!("a parallel extension changes F({name})"));
        }
        if !iso(&f, &foundation_pasture(&ext.simplify().0)?)? {
            out.push(format!("simplification changes F({name})"));
        }
        let series = parallel_extension(&mm.dual(), 0)?.dual();
        if !iso(&f, &foundation_pasture(&series)?)? {
            out.push(format!("a series extension changes F({name})"));
        }
    }
    Ok(())
}

/// Checks `U A V = D`, unimodularity and the divisibility chain on random matrices.
pub fn snf_random(count: usize, out: &mut Vec<String>) {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for i in 0..count {
        let (r, c) = (rng.gen_range(1..=6), rng.gen_range(1..=6));
        let bound = if i % 4 == 0 { 1000 } else { 9 };
        let rows: Vec<Vec<i64>> = (0..r).map(|_| (0..c).map(|_| rng.gen_range(-bound..=bound)).collect()).collect();
        let a = IntMatrix::from_i64(c, &rows).expect("rectangular");
        if let Some(msg) = snf_violation(&a) {
            out.push(format!("SNF of {rows:?}: {msg}"));
        }
    }
}

fn snf_violation(a: &IntMatrix) -> Option<String> {
    let s = smith_normal_form(a);
    if s.u.mul(a).ok()?.mul(&s.v).ok()? != s.d {
        return Some("U A V ≠ D".into());
    }
    if s.u.determinant().ok()?.abs() != BigInt::one() || s.v.determinant().ok()?.abs() != BigInt::one() {
        return Some("transform is not unimodular".into());
    }
    if !s.d.is_diagonal() {
        return Some("D is not diagonal".into());
    }
    let d = s.d.diagonal();
    for w in d.windows(2) {
        let ok = if w[0].is_zero() { w[1].is_zero() } else { w[1].is_multiple_of(&w[0]) };
        if !ok || w[0] < BigInt::zero() {
            return Some(format!("diagonal {d:?} is not a divisibility chain"));
        }
    }
    None
}

/// Output of a fixed workload, rendered to text.
fn workload(fast: bool) -> Result<String> {
    let mut s = String::new();
    let mut names = vec!["Q6", "P7", "F7minus", "U(2,5)", "whirl(3)"];
    if !fast {
        names.extend(["AG23-e", "T8"]);
    }
    for name in names {
        let opts = FoundationOptions { cross_check: Some(true), identify: true, ..Default::default() };
        s += &foundation(&m(name)?, &opts)?.to_json().to_string();
        s.push('\n');
    }
    s += &representability_table(&TABLE_ROWS, &TABLE_COLUMNS)?.to_tsv();
    for t in ["F3", "F4", "F5"] {
        s += &format!("{}\n", rescaling_classes(&m("U(2,5)")?, &named(t)?)?.count);
    }
    Ok(s)
}

fn determinism(fast: bool, out: &mut Vec<String>) -> Result<()> {
    let run = |threads: usize| -> Result<String> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::Precondition(e.to_string()))?;
        pool.install(|| workload(fast))
    };
    let one = run(1)?;
    let eight = run(8)?;
    if one != eight {
        out.push("output differs between 1 and 8 threads".into());
    }
    if one != run(8)? {
        out.push("output differs between repeated runs".into());
    }
    Ok(())
}
