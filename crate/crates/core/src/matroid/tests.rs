use proptest::prelude::*;

use super::*;

fn m(name: &str) -> Matroid {
    named_matroid(name).unwrap()
}

/// Sets from 1-indexed digit strings.
fn s1(spec: &str) -> Set {
    set_of(&spec.chars().map(|c| c.to_digit(10).unwrap() as usize - 1).collect::<Vec<_>>())
}

const CATALOG: &[&str] = &[
    "U(2,4)", "U(2,5)", "U(3,5)", "U(3,6)", "F7", "F7dual", "F7minus", "C5", "C5dual", "D6", "wheel(3)", "whirl(3)",
    "Q6", "P6", "P7", "T8", "AG23_minus_e", "PG22", "U(1,2)+U(2,4)",
];

#[test]
fn basis_counts() {
    assert_eq!(m("U24").bases().len(), 6);
    assert_eq!(m("F7").bases().len(), 28);
    let t8 = m("T8");
    assert_eq!((t8.n(), t8.rank(), t8.bases().len()), (8, 4, 59));
    for r in 2..=5 {
        assert_eq!(m(&format!("whirl({r})")).bases().len(), m(&format!("wheel({r})")).bases().len() + 1);
    }
    // spanning trees of the wheel graph W_3 = K_4
    assert_eq!(m("wheel(3)").bases().len(), 16);
}

#[test]
fn q6_circuits() {
    let q6 = m("Q6");
    let three: Vec<Set> = q6.circuits().into_iter().filter(|c| c.count_ones() == 3).collect();
    assert_eq!(three, vec![s1("123"), s1("145")]);
}

#[test]
fn invalid_families_are_rejected_with_witness() {
    let r = Matroid::from_bases(4, &[set_of(&[0, 1]), set_of(&[2, 3])]);
    assert!(matches!(r, Err(Error::Axiom(_))));
    // 0 ∥ 1 and 1 ∥ 2 force 0 ∥ 2
    let r = Matroid::from_circuits(4, 2, &[set_of(&[0, 1]), set_of(&[1, 2])]);
    assert!(matches!(r, Err(Error::Axiom(_))));
}

#[test]
fn closure_and_hyperplanes() {
    assert_eq!(m("U24").closure(1), 1);
    let ag = m("AG23_minus_e");
    let mut expected: Vec<Set> = ["123", "146", "178", "247", "258", "345", "368", "567", "15", "26", "37", "48"]
        .iter()
        .map(|s| s1(s))
        .collect();
    expected.sort_unstable();
    let mut h = ag.hyperplanes();
    h.sort_unstable();
    assert_eq!(h, expected);
}

#[test]
fn whirl3_rank2_flats() {
    let w = m("whirl(3)");
    let mut expected: Vec<Set> =
        ["14", "123", "24", "36", "345", "46", "52", "561", "62"].iter().map(|s| s1(s)).collect();
    expected.sort_unstable();
    let mut got = w.flat_lattice().flats[2].clone();
    got.sort_unstable();
    assert_eq!(got, expected);
}

#[test]
fn duals_and_minors() {
    assert_eq!(m("U25").dual(), m("U35"));
    for name in CATALOG {
        let x = m(name);
        assert_eq!(x.dual().dual(), x, "{name}");
    }
    // 4 and 5 are in series in C5
    let c5 = m("C5");
    assert_eq!(c5.rank_of(c5.ground() & !s1("45")), 2);
    assert!(c5.contract(s1("4")).unwrap().is_isomorphic(&m("U24")).is_some());
}

#[test]
fn embedded_minor_preconditions() {
    let f7 = m("F7");
    assert!(matches!(f7.embedded_minor(s1("123"), 0), Err(Error::Precondition(_))));
    assert!(matches!(f7.embedded_minor(0, s1("4567")), Err(Error::Precondition(_))));
    let e = f7.embedded_minor(s1("1"), s1("2")).unwrap();
    assert_eq!(e.labels, vec![2, 3, 4, 5, 6]);
    assert_eq!(e.minor.rank(), 2);
}

#[test]
fn isomorphism() {
    assert!(m("whirl(2)").is_isomorphic(&m("U24")).is_some());
    assert!(m("F7").is_isomorphic(&m("F7minus")).is_none());
    assert!(m("P6").is_isomorphic(&m("Q6")).is_none());
    assert!(m("PG22").is_isomorphic(&m("F7")).is_some());
    let w = m("whirl(3)");
    let perm = [3, 4, 5, 0, 1, 2];
    let p = w.permute(&perm).unwrap();
    let phi = w.is_isomorphic(&p).unwrap();
    for x in 0..1u32 << 6 {
        let y = elems(x).into_iter().fold(0u32, |a, e| a | 1 << phi[e]);
        assert_eq!(w.rank_of(x), p.rank_of(y));
    }
}

#[test]
fn minors() {
    assert!(m("U25").has_minor(&m("U24")));
    assert!(!m("F7").has_minor(&m("U24")));
    assert!(!m("T8").has_minor(&m("F7")));
    assert!(m("F7minus").has_minor(&m("U24")));
}

#[test]
fn connectivity() {
    let c = m("U(2,4)+U(1,2)").connectivity();
    assert!(!c.is_2_connected);
    assert!(m("whirl(3)").connectivity().is_3_connected);
    // Under Tutte's definition a 2-separation needs two elements on each side.
    let u12 = m("U(1,2)").connectivity();
    assert!(u12.is_2_connected);
    assert!(u12.is_3_connected);
    let c = m("U(1,3)+U(0,0)").connectivity();
    assert!(c.is_3_connected);
    assert!(!m("D6").connectivity().is_3_connected);
    assert!(m("D6").connectivity().is_2_connected);
}

#[test]
fn upper_sublattice_counts() {
    let ag = m("AG23_minus_e");
    let u24 = ag.upper_sublattices(SublatticeType::U24);
    assert_eq!(u24.len(), 8);
    let mut bottoms: Vec<Set> = u24.iter().map(|s| s.bottom).collect();
    bottoms.sort_unstable();
    assert_eq!(bottoms, (0..8).map(|e| 1 << e).collect::<Vec<_>>());
    assert_eq!(ag.upper_sublattices(SublatticeType::C5).len(), 32);
    let w = m("whirl(3)");
    let mut b: Vec<Set> = w.upper_sublattices(SublatticeType::U24).iter().map(|s| s.bottom).collect();
    b.sort_unstable();
    assert_eq!(b, vec![s1("2"), s1("4"), s1("6")]);
}

#[test]
fn direct_sum_hyperplanes() {
    let (a, b) = (m("U24"), m("U(1,2)"));
    let s = a.direct_sum(&b).unwrap();
    let mut expected: Vec<Set> = a.hyperplanes().into_iter().map(|h| h | 0b11 << 4).collect();
    expected.extend(b.hyperplanes().into_iter().map(|h| 0b1111 | h << 4));
    expected.sort_unstable();
    let mut got = s.hyperplanes();
    got.sort_unstable();
    assert_eq!(got, expected);
}

#[test]
fn formats_round_trip() {
    for name in CATALOG {
        let x = m(name);
        let back = matroid_from_json(&matroid_to_json(&x)).unwrap();
        assert_eq!(back, x);
        if x.n() <= 10 {
            assert_eq!(parse_text(&to_text(&x).unwrap()).unwrap(), x);
        }
    }
    let v = serde_json::json!({"n": 6, "rank": 3, "circuits": [[0, 3, 4], [0, 1, 2]]});
    assert_eq!(matroid_from_json(&v).unwrap(), m("Q6"));
    assert_eq!(to_text(&m("U(1,2)")).unwrap(), "1 2 / 0 1");
}

#[test]
fn unknown_names() {
    assert!(matches!(named_matroid("nope"), Err(Error::UnknownName(_))));
    assert!(matches!(named_matroid("wheel(9)"), Err(Error::Precondition(_))));
}

/// Minor flats lifted to `M` are exactly the join-closure of the atoms above `⟨I⟩`.
fn psi_consistent(mm: &Matroid, con: Set, del: Set) -> bool {
    let e = mm.embedded_minor(con, del).unwrap();
    let lift = |x: Set| mm.closure(e.lift(x) | con);
    let mut lifted: Vec<Set> = e.minor.flats().into_iter().map(lift).collect();
    lifted.sort_unstable();
    let before = lifted.len();
    lifted.dedup();
    if before != lifted.len() {
        return false;
    }
    let bottom = mm.closure(con);
    let atoms: Vec<Set> = (0..e.minor.n())
        .map(|i| mm.closure(bottom | 1 << e.labels[i]))
        .filter(|&a| a != bottom)
        .collect();
    let mut joins: Vec<Set> = (0..1u32 << atoms.len())
        .map(|mask| mm.closure(elems(mask).into_iter().fold(bottom, |acc, i| acc | atoms[i])))
        .collect();
    joins.sort_unstable();
    joins.dedup();
    let flats = e.minor.flats();
    let order_ok = flats.iter().all(|&a| {
        flats.iter().all(|&b| (a & !b == 0) == (lift(a) & !lift(b) == 0))
    });
    joins == lifted && order_ok
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_and_closure_laws(idx in 0..CATALOG.len(), x in any::<u32>(), y in any::<u32>()) {
        let mm = m(CATALOG[idx]);
        let (x, y) = (x & mm.ground(), y & mm.ground());
        prop_assert_eq!(mm.rank_of(mm.ground()), mm.rank());
        let cx = mm.closure(x);
        prop_assert_eq!(mm.closure(cx), cx);
        prop_assert_eq!(x & !cx, 0);
        prop_assert_eq!(mm.closure(x & y) & !mm.closure(x), 0);
        prop_assert!(mm.rank_of(x & y) + mm.rank_of(x | y) <= mm.rank_of(x) + mm.rank_of(y));
    }

    #[test]
    fn minor_of_dual_is_dual_of_minor(idx in 0..CATALOG.len(), a in any::<u32>(), b in any::<u32>()) {
        let mm = m(CATALOG[idx]);
        let del = a & mm.ground();
        let con = b & mm.ground() & !del;
        let lhs = mm.dual().minor(con, del).unwrap();
        let rhs = mm.minor(del, con).unwrap().dual();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn psi_consistency(idx in 0..CATALOG.len(), a in any::<u32>(), b in any::<u32>()) {
        let mm = m(CATALOG[idx]);
        // Grow an independent contract set and a coindependent delete set greedily.
        let mut con = 0;
        for e in elems(a & mm.ground()) {
            if mm.is_independent(con | 1 << e) && con.count_ones() + 2 < mm.rank() as u32 {
                con |= 1 << e;
            }
        }
        let mut del = 0;
        for e in elems(b & mm.ground() & !con) {
            if mm.is_coindependent(del | 1 << e) && mm.minor(del | 1 << e, con).unwrap().n() > 3 {
                del |= 1 << e;
            }
        }
        prop_assert!(psi_consistent(&mm, con, del));
    }
}
