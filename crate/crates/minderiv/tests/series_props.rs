use minderiv::{
    canonical_pair, int, invert_param_system, straighten, substitute, Monomial, ParamSystem,
    Ring, SeriesDerivation, TruncSeries,
};
use proptest::prelude::*;

const ORDER: u32 = 6;

fn ring3() -> Ring {
    Ring::new(["t1", "t2", "t3"])
}

fn series(ring: &Ring, min_deg: u32, max_exp: u32, max_terms: usize) -> impl Strategy<Value = TruncSeries> {
    let ring = ring.clone();
    let nvars = ring.len();
    proptest::collection::vec(
        (proptest::collection::vec(0..=max_exp, nvars), -5i64..=5),
        0..=max_terms,
    )
    .prop_map(move |terms| {
        TruncSeries::from_terms(
            &ring,
            ORDER,
            terms
                .into_iter()
                .filter(|(e, _)| e.iter().sum::<u32>() >= min_deg)
                .map(|(e, c)| (Monomial::new(e), int(c))),
        )
    })
}

/// Parameter systems of the form identity + higher-order tail, which always
/// have an invertible linear part.
fn tangent_to_identity(ring: &Ring) -> impl Strategy<Value = ParamSystem> {
    let ring = ring.clone();
    let nvars = ring.len();
    proptest::collection::vec(series(&ring, 2, 3, 4), nvars).prop_map(move |tails| {
        let components: Vec<TruncSeries> = tails
            .into_iter()
            .enumerate()
            .map(|(i, tail)| &TruncSeries::variable(&ring, i, ORDER) + &tail)
            .collect();
        ParamSystem::new(components).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn inversion_round_trips(s in tangent_to_identity(&ring3())) {
        let inverse = invert_param_system(&s).unwrap();
        prop_assert!(s.compose(&inverse).unwrap().is_identity_to(ORDER));
        prop_assert!(inverse.compose(&s).unwrap().is_identity_to(ORDER));
    }

    #[test]
    fn substitution_respects_ring_operations(
        f in series(&ring3(), 0, 2, 4),
        g in series(&ring3(), 0, 2, 4),
        s in tangent_to_identity(&ring3()),
    ) {
        let sum = substitute(&(&f + &g), s.components()).unwrap();
        let split = &substitute(&f, s.components()).unwrap() + &substitute(&g, s.components()).unwrap();
        prop_assert_eq!(&sum, &split);

        let product = substitute(&(&f * &g), s.components()).unwrap();
        let factors =
            &substitute(&f, s.components()).unwrap() * &substitute(&g, s.components()).unwrap();
        prop_assert_eq!(
            product.truncated(ORDER.min(product.order())),
            factors.truncated(ORDER.min(factors.order()))
        );
    }

    #[test]
    fn integration_undoes_differentiation(f in series(&ring3(), 0, 3, 6), i in 0usize..3) {
        let reconstructed = f.integrate_variable(i).partial_derivative(i);
        prop_assert_eq!(reconstructed, f);
    }

    #[test]
    fn straightening_kills_the_other_parameters(
        g2 in series(&ring3(), 0, 2, 4),
        g3 in series(&ring3(), 0, 2, 4),
    ) {
        let r = ring3();
        let d = SeriesDerivation::new(vec![TruncSeries::one(&r, ORDER), g2, g3]);
        let x1 = TruncSeries::variable(&r, 0, ORDER);
        let out = straighten(&d, &x1, ORDER).unwrap();
        prop_assert_eq!(out.params.component(0), &x1);
        for residual in &out.residuals {
            prop_assert!(residual.is_zero(), "residual {} is nonzero", residual);
        }
        for (k, support) in &out.update_supports {
            if let Some(m) = support {
                prop_assert!(*m >= k + 1, "pass {} updated degree {}", k, m);
            }
        }
    }

    #[test]
    fn straightened_derivation_becomes_the_first_partial(
        g2 in series(&ring3(), 0, 2, 3),
        g3 in series(&ring3(), 0, 2, 3),
    ) {
        let r = ring3();
        let d = SeriesDerivation::new(vec![TruncSeries::one(&r, ORDER), g2, g3]);
        let x1 = TruncSeries::variable(&r, 0, ORDER);
        let out = straighten(&d, &x1, ORDER).unwrap();
        let inverse = invert_param_system(&out.params).unwrap();
        // In the new coordinates every coefficient beyond the first vanishes.
        for (i, component) in out.params.components().iter().enumerate() {
            let moved = substitute(&d.apply(component), inverse.components()).unwrap();
            let expected = if i == 0 {
                TruncSeries::one(&r, moved.order())
            } else {
                TruncSeries::zero(&r, moved.order())
            };
            prop_assert!(moved.agrees_with(&expected, moved.order()));
        }
    }

    #[test]
    fn canonical_pair_reconstructs_the_second_derivation(
        h1 in series(&ring3(), 0, 2, 3),
        h2 in series(&ring3(), 0, 2, 3),
        probe in series(&ring3(), 0, 2, 4),
    ) {
        let r = ring3();
        let d1 = SeriesDerivation::new(vec![
            TruncSeries::one(&r, ORDER),
            TruncSeries::zero(&r, ORDER),
            h1,
        ]);
        let d2 = SeriesDerivation::new(vec![
            TruncSeries::zero(&r, ORDER),
            TruncSeries::one(&r, ORDER),
            h2,
        ]);
        let x1 = TruncSeries::variable(&r, 0, ORDER);
        let x2 = TruncSeries::variable(&r, 1, ORDER);
        let (params, a) = canonical_pair(&d1, &d2, &x1, &x2, ORDER).unwrap();
        prop_assert_eq!(a.len(), 1);

        let inverse = invert_param_system(&params).unwrap();
        let v1 = TruncSeries::variable(&r, 0, a[0].order() + 1);
        let rebuilt = SeriesDerivation::new(vec![
            TruncSeries::zero(&r, params.order()),
            TruncSeries::one(&r, params.order()),
            &v1 * &a[0],
        ]);
        let direct = rebuilt.apply(&probe);
        let transported = substitute(
            &d2.apply(&substitute(&probe, params.components()).unwrap()),
            inverse.components(),
        )
        .unwrap();
        let shared = direct.order().min(transported.order());
        prop_assert!(direct.agrees_with(&transported, shared));
    }
}
