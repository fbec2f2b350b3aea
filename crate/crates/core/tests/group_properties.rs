use foundry::abgroup::{smith_diagonal, smith_normal_form, FpAbelianGroup, GroupElement, IntMatrix};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn matrix() -> impl Strategy<Value = (usize, Vec<Vec<i64>>)> {
    (1usize..6, 1usize..6).prop_flat_map(|(r, c)| (Just(c), prop::collection::vec(prop::collection::vec(-6i64..7, c), r)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn smith_form_is_valid((cols, rows) in matrix()) {
        let a = IntMatrix::from_i64(cols, &rows).unwrap();
        let s = smith_normal_form(&a);
        prop_assert_eq!(s.u.mul(&a).unwrap().mul(&s.v).unwrap(), s.d.clone());
        prop_assert!(s.u.determinant().unwrap().abs().is_one());
        prop_assert!(s.v.determinant().unwrap().abs().is_one());
        prop_assert!(s.d.is_diagonal());
        let d = s.d.diagonal();
        for w in d.windows(2) {
            prop_assert!(!w[0].is_negative());
            let divides = if w[0].is_zero() { w[1].is_zero() } else { (&w[1] % &w[0]).is_zero() };
            prop_assert!(divides);
        }
        let fast = smith_diagonal(&a);
        prop_assert_eq!(&d[..fast.len()], &fast[..]);
        prop_assert!(d[fast.len()..].iter().all(Zero::is_zero));
    }

    #[test]
    fn group_order_matches_determinant(n in 1usize..5, seed in prop::collection::vec(-5i64..6, 25)) {
        let rows: Vec<Vec<i64>> = (0..n).map(|i| seed[i * n..(i + 1) * n].to_vec()).collect();
        let a = IntMatrix::from_i64(n, &rows).unwrap();
        let det = a.determinant().unwrap().abs();
        let g = FpAbelianGroup::from_i64(n, &rows).unwrap();
        if det.is_zero() {
            prop_assert!(!g.is_finite());
        } else {
            prop_assert_eq!(g.order().unwrap(), det);
        }
    }

    #[test]
    fn coordinates_respect_relations((cols, rows) in matrix(), x in prop::collection::vec(-9i64..10, 6)) {
        let g = FpAbelianGroup::from_i64(cols, &rows).unwrap();
        for r in &rows {
            prop_assert!(g.is_identity(&GroupElement(r.clone())).unwrap());
        }
        let e = GroupElement(x[..cols].to_vec());
        let c = g.coords(&e).unwrap();
        let back = g.element_from_coords(&c).unwrap();
        prop_assert!(g.element_equal(&e, &back).unwrap());
        prop_assert_eq!(g.coords(&back).unwrap(), c);
        let total: BigInt = g.invariant_factors().iter().product();
        prop_assert!(g.free_rank() > 0 || g.order() == Some(total));
    }
}
