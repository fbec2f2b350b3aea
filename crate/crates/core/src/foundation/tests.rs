use proptest::prelude::*;

use super::diagram::lattice_diagram_with;
use super::*;
use crate::pasture::{colimit, find_isomorphism, identify, named, tensor};

fn m(name: &str) -> Matroid {
    named_matroid(name).unwrap()
}

fn ident(p: &Pasture) -> String {
    identify(p).unwrap().label()
}

fn iso(p: &Pasture, q: &Pasture) -> bool {
    find_isomorphism(p, q, crate::error::default_budget()).unwrap().is_some()
}

fn s1(spec: &str) -> Set {
    set_from_digits(spec)
}

/// Adds a new element parallel to `e`.
fn parallel_extension(mm: &Matroid, e: usize) -> Matroid {
    let n = mm.n();
    let mut b: Vec<Set> = mm.bases().to_vec();
    b.extend(mm.bases().iter().filter(|&&x| x >> e & 1 == 1).map(|&x| (x & !(1 << e)) | 1 << n));
    Matroid::from_bases(n + 1, &b).unwrap()
}

const SMALL: &[&str] = &[
    "U24", "U25", "U35", "U26", "F7", "F7dual", "F7minus", "P7", "C5", "C5dual", "D6", "Q6", "P6", "whirl(3)",
    "wheel(3)", "U(1,2)+U(2,4)",
];

#[test]
fn omega_counts() {
    let syms = enumerate_omega(&m("U24"));
    assert_eq!(syms.iter().filter(|s| s.nondegenerate).count(), 6);
    assert!(enumerate_omega(&m("U(1,2)")).is_empty());
    assert!(enumerate_omega(&m("F7")).iter().all(|s| !s.nondegenerate));
    // each class is represented by its least tuple
    let u24 = m("U24");
    for s in &syms {
        assert_eq!(psi_of(&u24, 0, [s.a, s.b, s.c, s.d]), s.psi);
    }
    assert_eq!(syms.iter().find(|s| s.nondegenerate).unwrap().label(), "[0,1;2,3]");
}

#[test]
fn grs_golden() {
    for (name, expected) in [
        ("U24", "U"),
        ("U25", "V"),
        ("U35", "V"),
        ("U26", "U_k(3)"),
        ("F7", "F2"),
        ("F7dual", "F2"),
        ("Q6", "V"),
        ("AG23_minus_e", "H"),
        ("whirl(2)", "U"),
        ("whirl(3)", "U"),
        ("F7minus", "D"),
        ("P7", "U"),
        ("T8", "F3"),
        ("wheel(3)", "regular"),
        ("wheel(4)", "regular"),
    ] {
        let r = grs_presentation(&m(name)).unwrap();
        assert_eq!(ident(&r.pasture), expected, "{name}");
    }
    assert!(iso(&foundation_pasture(&m("P6")).unwrap(), &foundation_pasture(&m("U26")).unwrap()));
}

#[test]
fn dictionary_covers_every_class() {
    for name in SMALL {
        let mm = m(name);
        let r = grs_presentation(&mm).unwrap();
        let classes: HashSet<Quad> =
            enumerate_omega(&mm).into_iter().filter(|s| s.nondegenerate).map(|s| sigma_key(s.psi)).collect();
        assert_eq!(r.dictionary.len(), classes.len(), "{name}");
        for s in enumerate_omega(&mm).into_iter().filter(|s| s.nondegenerate) {
            assert!(r.cross_ratio(s.psi).is_some());
        }
    }
}

#[test]
fn routes_agree_with_grs() {
    for name in SMALL {
        let mm = m(name);
        let opts = FoundationOptions { cross_check: Some(true), ..Default::default() };
        let r = foundation(&mm, &opts).unwrap();
        assert!(!r.cross_checks.is_empty(), "{name}");
        assert!(r.cross_checks.iter().all(|c| c.isomorphic), "{name}");
        for c in &r.cross_checks {
            let v = foundation_via_diagram(&mm, c.route).unwrap();
            assert!(iso(&v.pasture, &r.pasture), "{name} {}", c.route.name());
        }
    }
}

#[test]
fn route_preconditions() {
    let sum = m("U(2,4)+U(1,2)");
    assert!(matches!(fundamental_diagram(&sum, DiagramClass::TwoConnected), Err(Error::Precondition(_))));
    assert!(matches!(fundamental_diagram(&m("C5"), DiagramClass::ThreeConnected), Err(Error::Precondition(_))));
    assert!(matches!(lattice_diagram(&m("F7dual"), LatticeVariant::RankLe3), Err(Error::Precondition(_))));
    assert!(matches!(foundation_via_diagram(&m("D6"), Route::Lattice3), Err(Error::Precondition(_))));
}

#[test]
fn lattice3_needs_three_connectivity() {
    // For C5 the two U24 sublattices are not joined by any W3, Q6 or P6 sublattice.
    let c5 = m("C5");
    let base = grs(&c5).unwrap();
    let fd = lattice_diagram(&c5, LatticeVariant::ThreeConnected).unwrap();
    let (r, iso) = diagram::colimit_report(&fd, Route::Lattice3, &base).unwrap();
    assert!(!iso);
    assert_eq!(r.pasture.numerical_type().free_rank, 4);
}

#[test]
fn diagram_shapes() {
    let d = fundamental_diagram(&m("U(1,2)+U(2,4)"), DiagramClass::General).unwrap();
    assert_eq!(d.nodes.len(), 3);
    assert_eq!(d.edges().len(), 2);
    assert_eq!(d.nodes.iter().filter(|n| n.kind == "U24").count(), 2);

    let q6 = m("Q6");
    let d = fundamental_diagram(&q6, DiagramClass::General).unwrap();
    let u25: Vec<&DiagramNode> = d.nodes.iter().filter(|n| n.kind == "U25").collect();
    let u35: Vec<&DiagramNode> = d.nodes.iter().filter(|n| n.kind == "U35").collect();
    assert_eq!(u25.len(), 1);
    assert_eq!((u25[0].contract, u25[0].delete), (s1("6"), 0));
    assert_eq!(u35.len(), 1);
    assert_eq!((u35[0].contract, u35[0].delete), (0, s1("1")));

    let d = fundamental_diagram(&m("whirl(3)"), DiagramClass::ThreeConnected).unwrap();
    assert_eq!(d.nodes.len(), 7);
    assert_eq!(d.nodes.iter().filter(|n| n.kind == "U24").count(), 6);
    assert_eq!(d.nodes.iter().filter(|n| n.kind == "W3").count(), 1);

    let ag = m("AG23_minus_e");
    let d = lattice_diagram(&ag, LatticeVariant::Full).unwrap();
    assert_eq!(d.nodes.iter().filter(|n| n.kind == "U24").count(), 8);
    assert_eq!(d.nodes.iter().filter(|n| n.kind == "C5").count(), 32);
    assert_eq!(d.nodes.len(), 40);
    assert_eq!(d.num_components(), 1);

    let d = lattice_diagram(&m("P7"), LatticeVariant::ThreeConnected).unwrap();
    assert_eq!(d.num_components(), 1);
}

#[test]
fn t8_rank3_lattice_nodes() {
    let t8 = m("T8");
    let d = lattice_diagram(&t8, LatticeVariant::RankLe3).unwrap();
    let (f7m, p7) = (m("F7minus"), m("P7"));
    let mut counts = (0, 0);
    for n in d.nodes.iter().filter(|n| n.kind == "rank3") {
        let minor = t8.minor(n.delete, n.contract).unwrap();
        if minor.is_isomorphic(&f7m).is_some() {
            counts.0 += 1;
        } else if minor.is_isomorphic(&p7).is_some() {
            counts.1 += 1;
        }
    }
    assert_eq!(counts, (4, 4));
    assert_eq!(d.nodes.iter().filter(|n| n.kind == "rank3").count(), 8);
}

#[test]
fn lattice_preimage_choice_is_irrelevant() {
    let ag = m("AG23_minus_e");
    let a = colimit(&lattice_diagram_with(&ag, LatticeVariant::Full, false).unwrap().diagram).unwrap();
    let fd = lattice_diagram_with(&ag, LatticeVariant::Full, true).unwrap();
    assert_ne!(fd.nodes[0].delete, lattice_diagram(&ag, LatticeVariant::Full).unwrap().nodes[0].delete);
    let b = colimit(&fd.diagram).unwrap();
    assert!(iso(&a.pasture, &b.pasture));
    let (_, ok) = diagram::colimit_report(&fd, Route::Lattice, &grs(&ag).unwrap()).unwrap();
    assert!(ok);
}

fn same(r: &FoundationReport, a: Quad, b: Quad) -> bool {
    r.pasture.element_equal(r.cross_ratio(a).unwrap(), r.cross_ratio(b).unwrap()).unwrap()
}

#[test]
fn whirl_cross_ratio_identities() {
    let w = m("whirl(3)");
    let r = grs_presentation(&w).unwrap();
    let q = |a: &str, b: &str, c: &str, d: &str| [s1(a), s1(b), s1(c), s1(d)];
    let x = q("123", "24", "25", "26");
    let y = q("345", "46", "14", "24");
    let z = q("156", "26", "36", "46");
    assert!(same(&r, x, y));
    assert!(same(&r, y, z));
    // not every pair of cross ratios is equal
    assert!(!same(&r, x, q("123", "25", "24", "26")));

    // Applying a matroid automorphism to both sides keeps the equality.
    for perm in w.automorphisms() {
        let map = |h: Set| elems(h).into_iter().fold(0, |acc, e| acc | 1 << perm[e]);
        assert!(same(&r, x.map(map), y.map(map)));
        assert!(same(&r, x.map(map), z.map(map)));
    }
}

#[test]
fn d6_series_cross_ratios() {
    let d6 = m("D6");
    let r = grs_presentation(&d6).unwrap();
    for s in (0..4).permutations(4) {
        let e = [s[0], s[1], s[2], s[3]];
        assert!(same(&r, psi_of(&d6, s1("5"), e), psi_of(&d6, s1("6"), e)));
    }
}

#[test]
fn u25_cross_ratio_product() {
    // Elements 0..4 of U25 play the roles of 2..6 with x_i = [i+1,i+2; i+3,i+4].
    let u = m("U25");
    let r = grs_presentation(&u).unwrap();
    let p = &r.pasture;
    let cr = |a, b, c, d| r.cross_ratio(psi_of(&u, 0, [a, b, c, d])).unwrap().clone();
    let x2 = cr(1, 2, 3, 4);
    let x5 = cr(4, 0, 1, 2);
    let y6 = cr(0, 2, 1, 3);
    // x2 = [34;26][34;52] = x5⁻¹ [34;52]
    assert!(p.element_equal(&x2, &cr(1, 2, 0, 4).add(&cr(1, 2, 3, 0))).unwrap());
    assert!(p.element_equal(&x2, &x5.neg().add(&cr(1, 2, 3, 0))).unwrap());
    // The factors [34;62][34;25] give x2⁻¹ instead.
    assert!(!p.element_equal(&x2, &cr(1, 2, 4, 0).add(&cr(1, 2, 0, 3))).unwrap());
    assert!(p.element_equal(&x2.neg(), &cr(1, 2, 4, 0).add(&cr(1, 2, 0, 3))).unwrap());
    // With real points 0, 1, 3, 7, -2 for 2..6 one gets x2 = 5/2 but x5⁻¹ y6 = -10/63.
    assert!(!p.element_equal(&x2, &x5.neg().add(&y6)).unwrap());
    // Each x_i is fundamental with partner y_i = [i+1,i+3; i+2,i+4].
    let pairs = p.fundamental_pairs();
    for i in 0..5 {
        let k = |j: usize| (i + j) % 5;
        let (x, y) = (cr(k(1), k(2), k(3), k(4)), cr(k(1), k(3), k(2), k(4)));
        assert!(pairs.contains(&(p.coords(&x).unwrap(), p.coords(&y).unwrap())));
    }
}

#[test]
fn duality_and_simplification_invariance() {
    for name in SMALL {
        let mm = m(name);
        let f = foundation_pasture(&mm).unwrap();
        assert!(iso(&f, &foundation_pasture(&mm.dual()).unwrap()), "{name}");
        if mm.n() < 8 {
            assert!(iso(&f, &foundation_pasture(&parallel_extension(&mm, 0)).unwrap()), "{name}");
        }
    }
    let (s, _) = m("U(1,2)+U(2,4)").simplify();
    assert!(iso(&foundation_pasture(&s).unwrap(), &named("U").unwrap()));
}

#[test]
fn direct_sums() {
    let u = named("U").unwrap();
    let uu = tensor(&u, &u).unwrap().pasture;
    let f = foundation_pasture(&m("U(2,4)+U(2,4)")).unwrap();
    assert!(iso(&f, &uu));
    let f = foundation_pasture(&m("U(2,4)+F7")).unwrap();
    assert!(iso(&f, &tensor(&u, &named("F2").unwrap()).unwrap().pasture));
}

#[test]
fn wlum_structure() {
    let factors: Vec<Pasture> = ["U", "D", "H", "F3", "F2"].iter().map(|n| named(n).unwrap()).collect();
    for name in ["F7minus", "T8", "AG23_minus_e", "P7", "whirl(3)"] {
        let mm = m(name);
        let t = foundation_pasture(&mm).unwrap().numerical_type();
        let comps = fundamental_diagram(&mm, DiagramClass::General).unwrap().num_components();
        let found = (0..comps).map(|_| 0..factors.len()).multi_cartesian_product().any(|choice| {
            let mut p = factors[choice[0]].clone();
            for &c in &choice[1..] {
                p = tensor(&p, &factors[c]).unwrap().pasture;
            }
            p.numerical_type() == t
        });
        assert!(found, "{name}");
    }
}

#[test]
fn report_json() {
    let r = foundation(&m("Q6"), &FoundationOptions { identify: true, ..Default::default() }).unwrap();
    let v = r.to_json();
    assert_eq!(v["identification"]["name"], "V");
    assert_eq!(v["method"], "grs");
    assert_eq!(v["dictionary"].as_array().unwrap().len(), r.dictionary.len());
    let back = Pasture::from_json(&v["pasture"]).unwrap();
    assert!(iso(&back, &r.pasture));
    assert!(v["cross_checks"].as_array().unwrap().iter().all(|c| c["isomorphic"] == true));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// `[abdc] = [abcd]⁻¹`, `[abcd][acdb][adbc] = −1` and `([abcd], [acbd])` is fundamental.
    #[test]
    fn cross_ratio_laws(idx in 0..SMALL.len(), pick in any::<prop::sample::Index>()) {
        let mm = m(SMALL[idx]);
        let r = grs_presentation(&mm).unwrap();
        let syms: Vec<CrossRatioSymbol> = enumerate_omega(&mm).into_iter().filter(|s| s.nondegenerate).collect();
        prop_assume!(!syms.is_empty());
        let s = &syms[pick.index(syms.len())];
        let i = set_of(&s.i);
        let p = &r.pasture;
        let cr = |e: [usize; 4]| r.cross_ratio(psi_of(&mm, i, e)).unwrap().clone();
        let (a, b, c, d) = (s.a, s.b, s.c, s.d);
        let x = cr([a, b, c, d]);
        prop_assert!(p.element_equal(&x.add(&cr([a, b, d, c])), &p.one()).unwrap());
        let prod = x.add(&cr([a, c, d, b])).add(&cr([a, d, b, c]));
        prop_assert!(p.element_equal(&prod, &p.epsilon()).unwrap());
        let y = cr([a, c, b, d]);
        prop_assert!(p.fundamental_pairs().contains(&(p.coords(&x).unwrap(), p.coords(&y).unwrap())));
    }
}
