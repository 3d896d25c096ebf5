use equisign::apc::{build_apc, signature};
use equisign::catalog;
use equisign::complex::fixtures as complexes;
use equisign::exactmath::{hermitian_inertia, symmetric_signature, Complex64, CxMatrix, RatMatrix};
use equisign::groups::{cyclic, dihedral, direct_product, FiniteGroup};
use equisign::reps::{irreps, UnitaryRep};
use equisign::runner::parse_spec;
use equisign::runner::spec::{matrix_from_json, Number};
use proptest::prelude::*;

fn small_group() -> impl Strategy<Value = FiniteGroup> {
    prop_oneof![
        (1usize..=12).prop_map(cyclic),
        (3usize..=6).prop_map(dihedral),
        ((1usize..=4), (1usize..=4)).prop_map(|(a, b)| direct_product(&cyclic(a), &cyclic(b))),
    ]
}

fn int_matrix(n: usize) -> impl Strategy<Value = RatMatrix> {
    prop::collection::vec(-4i64..=4, n * n).prop_map(move |e| RatMatrix::from_i64(n, n, &e))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn group_tables_are_associative_with_inverses(g in small_group()) {
        let e = g.identity();
        for a in g.elements() {
            prop_assert_eq!(g.mul(a, g.inv(a)), e);
            for b in g.elements() {
                for c in g.elements() {
                    prop_assert_eq!(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)));
                }
            }
        }
    }

    #[test]
    fn table_round_trips(g in small_group()) {
        let back = FiniteGroup::from_table("copy", g.table().to_vec()).unwrap();
        prop_assert_eq!(back, g);
    }

    #[test]
    fn irrep_dimensions_square_to_order(g in small_group()) {
        let reps = irreps(&g).unwrap();
        let total: usize = reps.iter().map(|r| r.dim() * r.dim()).sum();
        prop_assert_eq!(total, g.order());
        prop_assert_eq!(reps.len(), g.conjugacy_classes().len());
        for (i, a) in reps.iter().enumerate() {
            for (j, b) in reps.iter().enumerate() {
                let ip = a.inner_product(b);
                let expected = if i == j { 1.0 } else { 0.0 };
                prop_assert!((ip - Complex64::new(expected, 0.0)).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn direct_sum_characters_add(g in small_group(), i in 0usize..8, j in 0usize..8) {
        let reps = irreps(&g).unwrap();
        let a: &UnitaryRep = &reps[i % reps.len()];
        let b: &UnitaryRep = &reps[j % reps.len()];
        let sum = a.direct_sum(b);
        sum.verify().unwrap();
        for ((x, y), z) in a.character_values().iter().zip(b.character_values()).zip(sum.character_values()) {
            prop_assert!((x + y - z).norm() < 1e-9);
        }
    }

    #[test]
    fn rank_is_transpose_invariant(m in int_matrix(4)) {
        prop_assert_eq!(m.rank(), m.transpose().rank());
        prop_assert_eq!(m.rank() + m.kernel().len(), 4);
    }

    #[test]
    fn inverse_is_two_sided(m in int_matrix(3)) {
        if let Some(inv) = m.inverse() {
            prop_assert_eq!(&(&m * &inv), &RatMatrix::identity(3));
            prop_assert_eq!(&(&inv * &m), &RatMatrix::identity(3));
        } else {
            prop_assert!(m.rank() < 3);
        }
    }

    #[test]
    fn congruence_preserves_inertia(s in prop::collection::vec(-3i64..=3, 6), d in int_matrix(3)) {
        let form = RatMatrix::from_i64(3, 3, &[s[0], s[1], s[2], s[1], s[3], s[4], s[2], s[4], s[5]]);
        prop_assume!(d.inverse().is_some());
        let moved = &(&d.transpose() * &form) * &d;
        prop_assert_eq!(symmetric_signature(&form).unwrap(), symmetric_signature(&moved).unwrap());
    }

    #[test]
    fn hermitian_inertia_counts_diagonal_signs(diag in prop::collection::vec(-5i64..=5, 1..6)) {
        let n = diag.len();
        let mut m = CxMatrix::zeros(n, n);
        for (i, &x) in diag.iter().enumerate() {
            m.set(i, i, Complex64::new(x as f64, 0.0));
        }
        let t = hermitian_inertia(&m, 1e-9);
        prop_assert_eq!(t.positive, diag.iter().filter(|&&x| x > 0).count());
        prop_assert_eq!(t.negative, diag.iter().filter(|&&x| x < 0).count());
        prop_assert_eq!(t.null, diag.iter().filter(|&&x| x == 0).count());
    }

    #[test]
    fn exact_numbers_parse_as_fractions(p in -1000i64..1000, q in 1i64..1000) {
        let m = vec![vec![[Number::Exact(format!("{p}/{q}")), Number::Float(0.5)]]];
        let parsed = matrix_from_json(&m, "reps.rho.matrices[0]").unwrap();
        prop_assert!((parsed.get(0, 0).re - p as f64 / q as f64).abs() < 1e-12);
        prop_assert_eq!(parsed.get(0, 0).im, 0.5);
    }

    #[test]
    fn malformed_exact_numbers_name_their_field(p in 0i64..100) {
        let m = vec![vec![[Number::Exact(format!("{p}//x")), Number::Float(0.0)]]];
        let err = matrix_from_json(&m, "reps.rho.matrices[0]").unwrap_err();
        prop_assert!(err.to_string().contains("reps.rho.matrices[0][0][0]"));
    }

    #[test]
    fn emitted_fixtures_round_trip(i in 0usize..64) {
        let all = catalog::fixtures();
        let f = &all[i % all.len()];
        let spec = catalog::emit(f.name).unwrap();
        let text = serde_json::to_string(&spec).unwrap();
        prop_assert_eq!(parse_spec(&text).unwrap(), spec);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(4))]

    #[test]
    fn simplex_boundaries_have_zero_signature(k in 2usize..=5) {
        let sphere = complexes::boundary_simplex(k);
        let apc = build_apc(&sphere).unwrap();
        prop_assert!(apc.report().passed());
        prop_assert_eq!(signature(&apc).unwrap().value(), 0);
    }
}
