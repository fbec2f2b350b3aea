use proptest::prelude::*;

use super::*;
use crate::matroid::{named_matroid, set_of};
use crate::pasture::hom_enumerate;

fn m(name: &str) -> Matroid {
    named_matroid(name).unwrap()
}

fn p(name: &str) -> Pasture {
    named(name).unwrap()
}

fn constant(mm: &Matroid, target: &Pasture) -> GpFunction {
    let values = mm.bases().iter().map(|&b| (b, PastureElement::Unit(target.one()))).collect();
    GpFunction { matroid: mm.clone(), target: target.clone(), values }
}

#[test]
fn u24_over_f3() {
    let mut f = constant(&m("U24"), &p("F3"));
    assert!(!verify_gp(&f).unwrap());
    f.values.insert(set_of(&[0, 2]), PastureElement::Unit(f.target.epsilon()));
    assert!(verify_gp(&f).unwrap());
}

#[test]
fn basis_indicator_over_krasner() {
    for name in ["U24", "F7", "F7dual", "C5", "P7", "U(1,2)+U(2,4)"] {
        assert!(verify_gp(&constant(&m(name), &p("K"))).unwrap(), "{name}");
    }
}

#[test]
fn gp0_violations() {
    let k = p("K");
    let mut f = constant(&m("C5"), &k);
    let nb = subsets_of_size(f.matroid.ground(), f.matroid.rank()).into_iter().find(|&s| !f.matroid.is_basis(s)).unwrap();
    f.values.insert(nb, PastureElement::Unit(k.one()));
    assert!(!verify_gp(&f).unwrap());
    let mut g = constant(&m("C5"), &k);
    g.values.insert(set_of(&[0, 1]), PastureElement::Unit(k.one()));
    assert!(matches!(verify_gp(&g), Err(Error::Precondition(_))));
}

#[test]
fn rescaling_counts() {
    assert_eq!(rescaling_classes(&m("U24"), &p("F3")).unwrap().count, 1);
    assert_eq!(rescaling_classes(&m("U24"), &p("F4")).unwrap().count, 2);
    assert_eq!(rescaling_classes(&m("F7"), &p("F2")).unwrap().count, 1);
    assert_eq!(rescaling_classes(&m("U24"), &p("F2")).unwrap().count, 0);
    assert_eq!(rescaling_classes(&m("F7"), &p("F3")).unwrap().count, 0);
}

#[test]
fn rescaling_counts_match_orbit_partition() {
    for (mm, t) in [("U24", "F3"), ("U24", "F4"), ("U24", "F5"), ("C5", "F3"), ("U25", "F4"), ("U24", "K")] {
        let fast = rescaling_classes(&m(mm), &p(t)).unwrap().count;
        assert_eq!(fast, rescaling_classes_naive(&m(mm), &p(t)).unwrap(), "{mm} over {t}");
    }
}

#[test]
fn rescaling_counts_match_morphisms() {
    for mm in ["U24", "U25", "C5", "U(1,2)+U(2,4)"] {
        let f = foundation_pasture(&m(mm)).unwrap();
        for t in ["F2", "F3", "F4", "F5"] {
            let homs = hom_enumerate(&f, &p(t)).unwrap().len() as u64;
            assert_eq!(rescaling_classes(&m(mm), &p(t)).unwrap().count, homs, "{mm} over {t}");
        }
    }
}

#[test]
fn enumerated_functions_verify() {
    for (mm, t) in [("U24", "F4"), ("C5", "F3"), ("F7", "F2"), ("U25", "F5")] {
        for f in gp_functions(&m(mm), &p(t), 20).unwrap() {
            assert!(verify_gp(&f).unwrap(), "{mm} over {t}");
        }
    }
}

#[test]
fn representability_over_fields() {
    let cases = [
        ("F7minus", "F3", true),
        ("F7minus", "F4", false),
        ("AG23-e", "F4", true),
        ("AG23-e", "F5", false),
        ("U24", "F2", false),
        ("F7", "F2", true),
        ("F7", "F3", false),
        ("U25", "F4", true),
        ("U25", "F3", false),
    ];
    for (mm, t, want) in cases {
        assert_eq!(is_representable(&m(mm), &p(t)).unwrap(), want, "{mm} over {t}");
    }
    for mm in ["U24", "F7", "P7", "C5", "Q6"] {
        assert!(is_representable(&m(mm), &p("K")).unwrap(), "{mm}");
    }
}

#[test]
fn representability_rows() {
    let t = representability_table(&TABLE_ROWS, &TABLE_COLUMNS).unwrap();
    let want: [[u8; 8]; 10] = [
        [1, 1, 1, 1, 1, 1, 1, 1],
        [0, 1, 1, 1, 1, 1, 1, 1],
        [0, 0, 1, 1, 1, 1, 1, 1],
        [1, 0, 1, 0, 0, 1, 0, 0],
        [0, 1, 0, 0, 0, 0, 1, 0],
        [0, 0, 0, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 0, 0, 1],
        [0, 1, 1, 0, 1, 0, 1, 0],
        [0, 1, 0, 1, 1, 0, 1, 1],
        [0, 0, 1, 1, 0, 0, 1, 1],
    ];
    for (r, row) in want.iter().enumerate() {
        let got: Vec<u8> = t.cells[r].iter().map(|&b| u8::from(b)).collect();
        assert_eq!(got, row.to_vec(), "{}", TABLE_ROWS[r]);
    }
    assert!(t.to_tsv().starts_with("pasture\tF2\tF3"));
    assert_eq!(t.to_json()["cells"][0][0], 1);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn rescaling_preserves_validity(pick in 0usize..4, seed in prop::collection::vec(0usize..64, 8)) {
        let (mm, t) = [("U24", "F4"), ("C5", "F3"), ("U25", "F5"), ("F7", "F2")][pick];
        let mm = m(mm);
        let t = p(t);
        let g = t.unit_group();
        let units: Vec<GroupElement> =
            g.elements().unwrap().iter().map(|c| g.element_from_coords(c).unwrap()).collect();
        let fs = gp_functions(&mm, &t, 50).unwrap();
        let f = &fs[seed[0] % fs.len()];
        let scale: Vec<&GroupElement> = (0..=mm.n()).map(|i| &units[seed[i % seed.len()] * (i + 1) % units.len()]).collect();
        let mut h = f.clone();
        for (b, v) in h.values.iter_mut() {
            if let PastureElement::Unit(x) = v {
                let mut y = x.add(scale[0]);
                for e in elems(*b) {
                    y = y.add(scale[e + 1]);
                }
                *x = y;
            }
        }
        prop_assert!(verify_gp(&h).unwrap());
    }
}
