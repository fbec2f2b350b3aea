use super::*;

fn nt(p: &Pasture) -> (usize, Vec<u64>, bool, usize) {
    let t = p.numerical_type();
    (t.free_rank, t.invariant_factors, t.minus_one_trivial, t.hexagon_count)
}

fn unit(p: &Pasture, sign: i8, f: &[(&str, i64)]) -> PastureElement {
    PastureElement::Unit(p.word(sign, f).unwrap())
}

#[test]
fn numerical_types_of_small_catalog_entries() {
    assert_eq!(nt(&named("U").unwrap()), (2, vec![2], false, 1));
    assert_eq!(nt(&named("D").unwrap()), (1, vec![2], false, 1));
    assert_eq!(nt(&named("K").unwrap()), (0, vec![], true, 1));
    assert_eq!(nt(&named("S").unwrap()), (0, vec![2], false, 1));
    assert_eq!(nt(&named("F3").unwrap()), (0, vec![2], false, 1));
    assert_eq!(nt(&named("regular").unwrap()), (0, vec![2], false, 0));
    assert_eq!(nt(&named("F2").unwrap()), (0, vec![], true, 0));
}

#[test]
fn finite_fields_have_cyclic_unit_groups() {
    for q in [4u32, 5, 7, 8, 9] {
        let f = field(q).unwrap();
        assert_eq!(f.unit_group().order().unwrap(), num_bigint::BigInt::from(q - 1), "F{q}");
        // every unit a ≠ 0, 1 is fundamental
        assert_eq!(f.fundamental_elements().len() as u32, q - 2, "F{q}");
    }
}

#[test]
fn fundamental_elements_of_u_and_v() {
    let u = named("U").unwrap();
    assert_eq!(u.fundamental_elements().len(), 6);
    assert_eq!(u.hexagons().len(), 1);
    let v = named("V").unwrap();
    assert_eq!(v.fundamental_elements().len(), 30);
    assert_eq!(v.hexagons().len(), 5);
}

#[test]
fn regular_k_sizes() {
    let u3 = regular_k(3).unwrap();
    assert_eq!(u3.fundamental_elements().len(), 90);
    assert_eq!(u3.hexagons().len(), 15);
    assert_eq!(nt(&u3).0, 9);
    let u4 = regular_k(4).unwrap();
    assert_eq!(u4.fundamental_elements().len(), 210);
    assert_eq!(u4.hexagons().len(), 35);
}

#[test]
fn hom_counts() {
    let u = named("U").unwrap();
    let f3 = named("F3").unwrap();
    let homs = hom_enumerate(&u, &f3).unwrap();
    assert_eq!(homs.len(), 1);
    let minus = f3.epsilon();
    assert!(f3.element_equal(&homs[0].images[1], &minus).unwrap());
    assert!(f3.element_equal(&homs[0].images[2], &minus).unwrap());
    assert_eq!(hom_enumerate(&u, &named("F2").unwrap()).unwrap().len(), 0);
    assert_eq!(hom_enumerate(&named("V").unwrap(), &field(4).unwrap()).unwrap().len(), 2);
}

#[test]
fn brute_force_hom_count_u_to_fields() {
    // |Hom(U, F_q)| = q − 2: x ranges over F_q ∖ {0, 1}
    for q in [4u32, 5, 7, 8, 9] {
        let homs = hom_enumerate(&named("U").unwrap(), &field(q).unwrap()).unwrap();
        assert_eq!(homs.len() as u32, q - 2, "F{q}");
    }
}

#[test]
fn morphism_checks() {
    let u = named("U").unwrap();
    assert!(u.is_morphism(&u, &u.identity()).unwrap());
    let swap = PastureMorphism {
        images: vec![u.epsilon(), u.generator("y").unwrap(), u.generator("x").unwrap()],
    };
    assert!(u.is_morphism(&u, &swap).unwrap());
    let f3 = named("F3").unwrap();
    let bad = PastureMorphism { images: vec![f3.epsilon(), f3.one(), f3.one()] };
    assert!(!u.is_morphism(&f3, &bad).unwrap());
}

#[test]
fn automorphism_counts() {
    assert_eq!(automorphisms(&named("U").unwrap(), 1_000_000).unwrap().len(), 6);
    assert_eq!(automorphisms(&named("V").unwrap(), 10_000_000).unwrap().len(), 120);
    assert_eq!(automorphisms(&named("F3").unwrap(), 1_000).unwrap().len(), 1);
}

#[test]
fn automorphisms_of_non_fundamental_presentation() {
    // The fundamental elements of D are 2, -1 and 1/2, and (1/2, -1) is not a fundamental pair.
    let d = named("D").unwrap();
    let auts = automorphisms(&d, 1_000_000).unwrap();
    assert_eq!(auts.len(), 1);
    assert!(is_isomorphism(&d, &d, &auts[0]).unwrap());
    // A copy of U generated by a and b = xy, where b is not fundamental.
    let g = Pasture::from_presentation(Presentation {
        generators: vec!["a".into(), "b".into()],
        mult_relations: vec![],
        add_relations: vec![[Elem::mono(1, &[("a", 1)]), Elem::mono(1, &[("a", -1), ("b", 1)]), Elem::minus_one()]],
    })
    .unwrap();
    assert!(!g.generators_fundamental());
    let auts = automorphisms(&g, 1_000_000).unwrap();
    assert_eq!(auts.len(), 6);
    for a in &auts {
        assert!(is_isomorphism(&g, &g, a).unwrap());
    }
}

#[test]
fn quotients() {
    let u = named("U").unwrap();
    // x = 1/y alone leaves the unit group infinite; adding x³ = -1 gives H.
    let q = u.quotient(&[[unit(&u, 1, &[("x", 1)]), unit(&u, -1, &[("y", -1)]), PastureElement::Zero]]).unwrap();
    assert_eq!(nt(&q), (1, vec![2], false, 1));
    let q = q.quotient(&[[unit(&q, 1, &[("x", 3)]), unit(&q, 1, &[]), PastureElement::Zero]]).unwrap();
    assert_eq!(identify(&q).unwrap().name(), Some("H"));
    let d = named("D").unwrap();
    let q = d.quotient(&[[unit(&d, 1, &[("x", 1)]), unit(&d, 1, &[]), PastureElement::Zero]]).unwrap();
    assert_eq!(identify(&q).unwrap().name(), Some("F3"));
    let same = u.quotient(&[]).unwrap();
    assert!(find_isomorphism(&same, &u, 1_000_000).unwrap().is_some());
}

#[test]
fn quotient_rejects_forced_zero() {
    let u = named("U").unwrap();
    let r = u.quotient(&[[unit(&u, 1, &[("x", 1)]), PastureElement::Zero, PastureElement::Zero]]);
    assert!(matches!(r, Err(Error::Parse(_))));
}

#[test]
fn tensor_products() {
    let k = tensor(&named("F2").unwrap(), &named("F3").unwrap()).unwrap();
    assert_eq!(identify(&k.pasture).unwrap().name(), Some("K"));
    let t = tensor(&named("F2").unwrap(), &named("U").unwrap()).unwrap();
    assert_eq!(nt(&t.pasture), (2, vec![], true, 1));
    for n in ["U", "D", "H", "F3"] {
        let p = named(n).unwrap();
        let t = tensor(&named("regular").unwrap(), &p).unwrap();
        assert!(find_isomorphism(&t.pasture, &p, 1_000_000).unwrap().is_some(), "{n}");
    }
}

#[test]
fn colimit_of_two_arrows_on_h_is_f3() {
    let h = named("H").unwrap();
    let z = h.generator("z").unwrap();
    let inv = PastureMorphism { images: vec![h.epsilon(), z.neg()] };
    assert!(h.is_morphism(&h, &inv).unwrap());
    let d = Diagram {
        nodes: vec![h.clone(), h.clone()],
        edges: vec![
            DiagramEdge { source: 0, target: 1, morphism: h.identity() },
            DiagramEdge { source: 0, target: 1, morphism: inv },
        ],
    };
    let c = colimit(&d).unwrap();
    assert_eq!(identify(&c.pasture).unwrap().name(), Some("F3"));
    for e in &d.edges {
        let lhs = e.morphism.then(&c.cones[e.target]);
        assert!(h.morphisms_equal(&c.pasture, &lhs, &c.cones[e.source]).unwrap());
    }
}

#[test]
fn colimit_trivial_diagrams() {
    let u = named("U").unwrap();
    let single = colimit(&Diagram { nodes: vec![u.clone()], edges: vec![] }).unwrap();
    assert!(find_isomorphism(&single.pasture, &u, 1_000_000).unwrap().is_some());
    let d = named("D").unwrap();
    let pair = colimit(&Diagram { nodes: vec![u.clone(), d.clone()], edges: vec![] }).unwrap();
    let t = tensor(&u, &d).unwrap();
    assert!(find_isomorphism(&pair.pasture, &t.pasture, 1_000_000).unwrap().is_some());
}

#[test]
fn u_k_two_is_v() {
    let u2 = regular_k(2).unwrap();
    assert!(find_isomorphism(&u2, &named("V").unwrap(), 1_000_000).unwrap().is_some());
}

#[test]
fn identify_round_trip() {
    for name in catalog_names() {
        let p = named(&name).unwrap();
        let id = identify(&p).unwrap();
        assert_eq!(id.name(), Some(name.as_str()), "{name}");
    }
}

#[test]
fn json_round_trip() {
    for name in catalog_names() {
        let p = named(&name).unwrap();
        let j = p.to_json();
        let s = serde_json::to_string(&j).unwrap();
        let back = Pasture::from_json_str(&s).unwrap();
        assert_eq!(serde_json::to_string(&back.to_json()).unwrap(), s);
        assert_eq!(back.numerical_type(), p.numerical_type());
    }
}

#[test]
fn hexagon_closure_and_sign() {
    for name in catalog_names() {
        let p = named(&name).unwrap();
        let eps = p.epsilon();
        assert!(p.unit_group().is_identity(&eps.scale(2)).unwrap());
        assert_eq!(p.minus_one_trivial(), p.unit_group().is_identity(&eps).unwrap());
        for h in p.hexagons() {
            for pr in &h.pairs {
                let other = Pasture::orbit(p.unit_group(), &eps, &pr.x, &pr.y);
                assert_eq!(other.canonical_key(), h.canonical_key(), "{name}");
            }
        }
    }
}

#[test]
fn fundamental_presentation_is_isomorphic() {
    for name in ["D", "H", "G", "H2", "K2"] {
        let p = named(name).unwrap();
        let (copy, to, from) = fundamental_presentation(&p).unwrap();
        assert!(copy.generators_fundamental());
        assert!(is_isomorphism(&p, &copy, &to).unwrap(), "{name}");
        assert!(is_isomorphism(&copy, &p, &from).unwrap(), "{name}");
    }
}
