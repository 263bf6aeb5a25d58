use hopf_comod::comodule::{direct_sum_comodule, Comodule};
use hopf_comod::complex::{ext_dims, tensor_complexes, ChainMap};
use hopf_comod::format::{eval, fixture, parse_expr, Definition, Expr};
use hopf_comod::monoidal::{associator, ctensor, symmetry, unit_chom_witness, unit_left, unit_right};
use hopf_comod::oracle::compare_suite;
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn arb_expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        (0i64..20, 1i64..4).prop_map(|(n, d)| Expr::Num(BigRational::new(BigInt::from(n), BigInt::from(d)))),
        prop::sample::select(vec!["t", "s"]).prop_map(|v| Expr::Var(v.to_string())),
    ];
    leaf.prop_recursive(4, 24, 3, |inner| {
        prop_oneof![
            inner.clone().prop_map(|e| Expr::Neg(Box::new(e))),
            prop::collection::vec(inner.clone(), 2..4).prop_map(Expr::Add),
            prop::collection::vec(inner.clone(), 2..4).prop_map(Expr::Mul),
            (inner, 0u32..4).prop_map(|(e, k)| Expr::Pow(Box::new(e), k)),
        ]
    })
}

/// A sum of one or two declared comodules of a fixture.
fn pick(def: &Definition, idx: &[usize]) -> Comodule {
    let parts: Vec<Comodule> = idx.iter().map(|&i| def.comodules[i % def.comodules.len()].1.clone()).collect();
    if parts.len() == 1 {
        parts[0].clone()
    } else {
        direct_sum_comodule(&def.algebroid, &parts).unwrap()
    }
}

fn idx() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0usize..8, 1..3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn printed_expressions_parse_to_the_same_value(e in arb_expr()) {
        let def = fixture("F2").unwrap();
        let a1 = &def.algebroid.a1;
        let once = parse_expr(&e.to_string()).unwrap();
        let twice = parse_expr(&once.to_string()).unwrap();
        prop_assert_eq!(&once, &twice);
        prop_assert_eq!(eval(&e, a1, 0).unwrap(), eval(&once, a1, 0).unwrap());
    }

    #[test]
    fn tensor_dimensions_multiply(fx in 0usize..3, a in idx(), b in idx()) {
        let def = fixture(["F1", "F2", "F3"][fx]).unwrap();
        let (m, n) = (pick(&def, &a), pick(&def, &b));
        let mn = ctensor(&m, &n).unwrap();
        prop_assert!(mn.check().unwrap().passed());
        // over a field the product is taken over the field itself
        if def.algebroid.a0.nvars() == 0 {
            let (x, y) = (m.kdim().unwrap().unwrap(), n.kdim().unwrap().unwrap());
            prop_assert_eq!(mn.kdim().unwrap(), Some(x * y));
        }
    }

    #[test]
    fn structure_isomorphisms_verify(fx in 0usize..3, a in idx(), b in idx(), c in idx()) {
        let def = fixture(["F1", "F2", "F3"][fx]).unwrap();
        let (m, n, p) = (pick(&def, &a), pick(&def, &b), pick(&def, &c));
        prop_assert!(unit_left(&m).unwrap().1.verify().unwrap());
        prop_assert!(unit_right(&m).unwrap().1.verify().unwrap());
        let (mn, nm) = (ctensor(&m, &n).unwrap(), ctensor(&n, &m).unwrap());
        prop_assert!(symmetry(&m, &n, &mn, &nm).unwrap().verify().unwrap());
        let left = ctensor(&mn, &p).unwrap();
        let right = ctensor(&m, &ctensor(&n, &p).unwrap()).unwrap();
        prop_assert!(associator(&left, &right).unwrap().verify().unwrap());
    }

    #[test]
    fn internal_hom_out_of_the_unit(fx in 0usize..3, a in idx()) {
        let def = fixture(["F1", "F2", "F3"][fx]).unwrap();
        let n = pick(&def, &a);
        prop_assert!(unit_chom_witness(&n).unwrap().1.verify().unwrap());
    }

    #[test]
    fn ext_is_additive(a in idx(), b in idx()) {
        let def = fixture("F1").unwrap();
        let (m, n) = (pick(&def, &a), pick(&def, &b));
        let sum = direct_sum_comodule(&def.algebroid, &[m.clone(), n.clone()]).unwrap();
        let (x, y) = (ext_dims(&m, 2).unwrap(), ext_dims(&n, 2).unwrap());
        let want: Vec<usize> = x.iter().zip(&y).map(|(p, q)| p + q).collect();
        prop_assert_eq!(ext_dims(&sum, 2).unwrap(), want);
    }

    #[test]
    fn cone_of_identity_is_acyclic(which in 0usize..2, r in -2i64..=2) {
        let def = fixture("F1").unwrap();
        let c = def.complexes[which].1.shift(r);
        let cone = ChainMap::identity(&c).cone().unwrap();
        prop_assert!(cone.is_acyclic().unwrap());
    }

    #[test]
    fn tensoring_with_an_acyclic_complex(which in 0usize..2) {
        let def = fixture("F1").unwrap();
        let c = &def.complexes[which].1;
        let cone = ChainMap::identity(c).cone().unwrap();
        let t = tensor_complexes(&cone, c, false).unwrap();
        prop_assert!(t.complex.is_acyclic().unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn graded_oracle_agrees_for_any_seed(seed in any::<u64>()) {
        let def = fixture("F2").unwrap();
        let rep = compare_suite(&def.algebroid, seed, 2).unwrap();
        for c in &rep.cases {
            prop_assert!(c.agree, "{} #{}: {}", c.kind, c.index, c.detail);
        }
    }
}
