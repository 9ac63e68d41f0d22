use dehnlog_core::cyclic::{cyclic_sum, is_nu_invariant, necklace_bracket, nu};
use dehnlog_core::free_group::{boundary_word, TwistFactor};
use dehnlog_core::lie::{bch, exp, is_lie, log};
use dehnlog_core::random::{random_homogeneous, random_invariant, random_word, rng};
use dehnlog_core::*;
use proptest::prelude::*;

fn ctx(g: usize, n: usize) -> AlgebraContext {
    AlgebraContext::new(g, n).unwrap()
}

/// A random element without constant term, degrees 1 to 3.
fn augmented(seed: u64, c: AlgebraContext) -> Tensor {
    let mut r = rng(seed);
    (1..=3).fold(Tensor::zero(c), |acc, d| &acc + &random_homogeneous(&mut r, c, d, 3))
}

fn twist_factor() -> impl Strategy<Value = String> {
    (0..3usize, 1..=2usize, any::<bool>()).prop_map(|(k, i, inv)| {
        let base = match k {
            0 => format!("alpha:{i}"),
            1 => format!("beta:{i}"),
            _ => format!("sep:{i}"),
        };
        if inv {
            base + "^-1"
        } else {
            base
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn log_inverts_exp(seed in any::<u64>(), g in 1..=2usize) {
        let u = augmented(seed, ctx(g, 4));
        prop_assert_eq!(log(&exp(&u).unwrap()).unwrap(), u);
    }

    #[test]
    fn bch_is_associative(seed in any::<u64>()) {
        let c = ctx(1, 4);
        let (x, y, z) = (augmented(seed, c), augmented(seed ^ 1, c), augmented(seed ^ 2, c));
        let left = bch(&bch(&x, &y).unwrap(), &z).unwrap();
        let right = bch(&x, &bch(&y, &z).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn bch_of_lie_is_lie(seed in any::<u64>()) {
        let c = ctx(2, 5);
        let mut r = rng(seed);
        let x = random_homogeneous(&mut r, c, 1, 3);
        let y = random_homogeneous(&mut r, c, 1, 3);
        prop_assert!(is_lie(&bch(&x, &y).unwrap()));
    }

    #[test]
    fn rotation_has_order_degree(seed in any::<u64>(), degree in 1..=5usize) {
        let t = random_homogeneous(&mut rng(seed), ctx(2, 5), degree, 4);
        let back = (0..degree).fold(t.clone(), |acc, _| nu(&acc));
        prop_assert_eq!(back, t.clone());
        prop_assert_eq!(cyclic_sum(&nu(&t)), cyclic_sum(&t));
        prop_assert!(is_nu_invariant(&cyclic_sum(&t)));
    }

    #[test]
    fn necklace_bracket_is_antisymmetric(seed in any::<u64>(), p in 1..=3usize, q in 1..=2usize) {
        let c = ctx(2, 5);
        let mut r = rng(seed);
        let u = random_invariant(&mut r, c, p);
        let v = random_invariant(&mut r, c, q);
        let uv = necklace_bracket(&u, &v).unwrap();
        prop_assert!(is_nu_invariant(&uv));
        prop_assert_eq!(uv, -necklace_bracket(&v, &u).unwrap());
    }

    #[test]
    fn derivation_tensor_view_roundtrips(seed in any::<u64>()) {
        let t = augmented(seed, ctx(2, 4));
        prop_assert_eq!(Derivation::from_tensor(&t).unwrap().to_tensor(), t);
    }

    #[test]
    fn derivations_satisfy_leibniz(seed in any::<u64>()) {
        let c = ctx(2, 4);
        let mut r = rng(seed);
        let d = Derivation::from_tensor(&random_homogeneous(&mut r, c, 3, 3)).unwrap();
        let x = augmented(seed ^ 7, c);
        let y = augmented(seed ^ 9, c);
        let lhs = d.apply(&(&x * &y));
        let rhs = &(&d.apply(&x) * &y) + &(&x * &d.apply(&y));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn parallel_kernels_match_sequential(seed in any::<u64>()) {
        let c = ctx(2, 6);
        let mut r = rng(seed);
        let x = (1..=3).fold(Tensor::zero(c), |acc, d| &acc + &random_homogeneous(&mut r, c, d, 20));
        let y = (1..=3).fold(Tensor::zero(c), |acc, d| &acc + &random_homogeneous(&mut r, c, d, 20));
        #[cfg(feature = "parallel")]
        {
            let d = Derivation::from_tensor(&random_homogeneous(&mut r, c, 3, 6)).unwrap();
            prop_assert_eq!(x.mul_parallel(&y), x.mul_sequential(&y));
            prop_assert_eq!(d.apply_parallel(&x), d.apply_sequential(&x));
        }
        prop_assert_eq!(x.checked_mul(&y).unwrap(), x.mul_sequential(&y));
    }

    #[test]
    fn words_reduce_and_invert(seed in any::<u64>(), g in 1..=3usize) {
        let mut r = rng(seed);
        let w = random_word(&mut r, g, 8);
        let v = random_word(&mut r, g, 8);
        prop_assert_eq!(w.mul(&w.inverse()), GroupWord::identity(g));
        prop_assert_eq!(GroupWord::parse(g, &w.to_string()).unwrap(), w.clone());
        let sum: Vec<i64> = w.homology_class().iter().zip(v.homology_class()).map(|(a, b)| a + b).collect();
        prop_assert_eq!(w.mul(&v).homology_class(), sum);
    }

    #[test]
    fn twist_products_fix_the_boundary(factors in prop::collection::vec(twist_factor(), 1..5)) {
        let g = 2;
        let parsed: Vec<TwistFactor> = factors.iter().map(|s| s.parse().unwrap()).collect();
        let phi = FreeAutomorphism::from_factorization(g, &parsed).unwrap();
        prop_assert!(phi.is_boundary_preserving());
        prop_assert_eq!(phi.apply(&boundary_word(g)), boundary_word(g));
        let id = phi.compose(&phi.inverse().unwrap());
        for i in 0..2 * g {
            prop_assert_eq!(id.apply(&GroupWord::generator(g, i)), GroupWord::generator(g, i));
        }
        let back = FreeAutomorphism::from_json(&phi.to_json()).unwrap();
        for i in 0..2 * g {
            let x = GroupWord::generator(g, i);
            prop_assert_eq!(back.apply(&x), phi.apply(&x));
        }
    }

    #[test]
    fn tensor_json_roundtrips(seed in any::<u64>()) {
        let t = &augmented(seed, ctx(2, 4)) + &Tensor::scalar(ctx(2, 4), Rational::new(-3, 7));
        let s = serde_json::to_string(&t.to_json()).unwrap();
        prop_assert_eq!(Tensor::from_json(&serde_json::from_str(&s).unwrap()).unwrap(), t);
    }
}

#[test]
fn expansion_json_roundtrips() {
    let e = build_symplectic(2, 4, None).unwrap();
    let s = serde_json::to_string(&e.to_json()).unwrap();
    let back = Expansion::from_json(&serde_json::from_str(&s).unwrap()).unwrap();
    assert_eq!(back, e);
}

#[test]
fn builder_reproduces_the_fixtures() {
    let g1 = Expansion::fixture(ExpansionKind::FixtureGenus1, 1, 5).unwrap();
    assert_eq!(build_symplectic(1, 5, None).unwrap(), g1);
    let g2 = Expansion::fixture(ExpansionKind::FixtureGenus2, 2, 4).unwrap();
    assert_eq!(build_symplectic(2, 4, None).unwrap(), g2);
}

#[test]
fn builder_top_degree_extends() {
    // The degree-N values must agree with a longer build.
    let short = build_symplectic(2, 4, None).unwrap();
    let long = build_symplectic(2, 5, None).unwrap().with_truncation(4);
    assert_eq!(short, long);
}
