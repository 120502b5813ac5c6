//! Coordinate changes that put a derivation into normal form.
//!
//! `straighten` takes a derivation `d` and a parameter `x1` with `d(x1) = 1`
//! and produces a system of parameters in which `d` becomes `d/dx1`, by
//! correcting the complementary parameters one degree at a time.
//! `canonical_pair` runs the construction twice to express a commuting
//! normalized pair as `d/dx1` and `d/dx2 + x1*(a3*d/dy3 + ... + an*d/dyn)`.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::poly::{Monomial, Ring, WeightVector};
use crate::series::{invert_param_system, substitute, ParamSystem, SeriesDerivation, TruncSeries};

/// Parameter system produced by [`straighten`], together with diagnostics of
/// the correction passes.
#[derive(Debug, Clone)]
pub struct StraighteningResult {
    /// Parameters `(x1, y2, ..., yn)` expressed in the original coordinates.
    /// The first component is the given `x1`; the derivation sends every
    /// later component to zero modulo the truncation.
    pub params: ParamSystem,
    /// The derivation applied to each parameter beyond the first, in the
    /// original coordinates.  All stored terms vanish when the preconditions
    /// hold.
    pub residuals: Vec<TruncSeries>,
    /// Number of correction passes executed.
    pub iterations: u32,
    /// For each pass `k`, the least total degree among the corrections made
    /// in that pass, or `None` when the pass changed nothing.  Corrections in
    /// pass `k` are supported in degrees `k + 1` and above, so the sequence
    /// of corrected parameters converges in the adic topology.
    pub update_supports: Vec<(u32, Option<u32>)>,
}

/// Completes `x1` to a system of parameters `(x1, y2, ..., yn)` such that
/// `d(yi) = 0` modulo total degree `order`.
///
/// Requires `d(x1) = 1` on all terms determined at this order, `x1` with zero
/// constant term and a nonzero linear part, and `d`, `x1` of order at least
/// `order`.  The returned system has order `order`; the residuals have order
/// `order - 1`.
pub fn straighten(d: &SeriesDerivation, x1: &TruncSeries, order: u32) -> Result<StraighteningResult> {
    let ring = d.ring().clone();
    assert!(x1.ring() == &ring, "parameter ring differs from the derivation ring");
    if order < 1 {
        return Err(Error::OrderTooSmall { min: 1, got: order });
    }
    if d.order() < order {
        return Err(Error::OrderTooSmall { min: order, got: d.order() });
    }
    if x1.order() < order {
        return Err(Error::OrderTooSmall { min: order, got: x1.order() });
    }
    let x1 = x1.truncated(order);
    if !x1.constant_term().is_zero() {
        return Err(Error::Precondition {
            detail: format!("x1 = {x1} has a nonzero constant term"),
        });
    }
    let n = ring.len();
    let pivot = (0..n)
        .find(|&i| !x1.linear_coefficient(i).is_zero())
        .ok_or_else(|| Error::Precondition {
            detail: format!("x1 = {x1} has no linear part"),
        })?;
    let image = d.apply(&x1);
    let one = TruncSeries::one(&ring, image.order());
    if !image.agrees_with(&one, image.order()) {
        return Err(Error::Precondition {
            detail: format!("d(x1) = {image}, expected 1"),
        });
    }

    // Swap x1 in for the pivot variable and cancel the constant drift of the
    // remaining variables, so that the moved derivation is d/du1 plus
    // coefficients without constant term.
    let mut components = vec![x1.clone()];
    for j in (0..n).filter(|&j| j != pivot) {
        let tj = TruncSeries::variable(&ring, j, order);
        let lambda = d.coefficient(j).constant_term();
        components.push(&tj - &x1.scaled(&lambda));
    }
    let first_change = ParamSystem::new(components)?;
    let first_inverse = invert_param_system(&first_change)?;
    let pushed: Result<Vec<TruncSeries>> = first_change
        .components()
        .iter()
        .map(|c| substitute(&d.apply(c), first_inverse.components()))
        .collect();
    let moved = SeriesDerivation::new(pushed?);

    // Pass k removes the degree-k part of each image by integrating it along
    // the first coordinate; the image of the corrected parameter then starts
    // in degree k + 1, so the passes terminate at the truncation order.
    let mut corrected: Vec<TruncSeries> = (1..n)
        .map(|i| TruncSeries::variable(&ring, i, order))
        .collect();
    let mut update_supports = Vec::new();
    for k in 1..order {
        let mut support: Option<u32> = None;
        for y in corrected.iter_mut() {
            let image = moved.apply(y);
            debug_assert!(image.min_degree().map_or(true, |m| m >= k));
            let part = image.homogeneous_part(k);
            if part.is_zero() {
                continue;
            }
            let update = -&part.integrate_variable(0);
            support = match (support, update.min_degree()) {
                (None, m) => m,
                (Some(s), m) => Some(m.map_or(s, |m| s.min(m))),
            };
            *y = &*y + &update;
        }
        update_supports.push((k, support));
    }

    let mut final_components = vec![x1.clone()];
    for y in &corrected {
        final_components.push(substitute(y, first_change.components())?);
    }
    let residuals: Vec<TruncSeries> = final_components[1..].iter().map(|c| d.apply(c)).collect();
    let params = ParamSystem::new(final_components)?;
    Ok(StraighteningResult {
        params,
        residuals,
        iterations: order.saturating_sub(1),
        update_supports,
    })
}

/// Builds a system of parameters `(x1, x2, y3, ..., yn)` in which `d1`
/// becomes `d/dx1` and `d2` becomes `d/dx2 + x1*(a3*d/dy3 + ... + an*d/dyn)`,
/// returning the system and the coefficients `(a3, ..., an)`.
///
/// Requires `d1(x1) = 1`, `d2(x2) = 1`, `d1(x2) = 0`, `d2(x1) = 0` on all
/// stored terms, and all inputs of order at least `order`.  The returned
/// system has order `order - 1` and the coefficients have order `order - 3`:
/// each of the two straightenings and the final division spends one order,
/// so pick `order` with headroom for the precision needed downstream.  A
/// divisibility failure in the last step reports a violated precondition.
pub fn canonical_pair(
    d1: &SeriesDerivation,
    d2: &SeriesDerivation,
    x1: &TruncSeries,
    x2: &TruncSeries,
    order: u32,
) -> Result<(ParamSystem, Vec<TruncSeries>)> {
    let ring = d1.ring().clone();
    assert!(d2.ring() == &ring, "derivation rings differ");
    assert!(
        x1.ring() == &ring && x2.ring() == &ring,
        "parameter ring differs from the derivation ring"
    );
    let n = ring.len();
    if n < 2 {
        return Err(Error::TooFewVariables { needed: 2, got: n });
    }
    if order < 2 {
        return Err(Error::OrderTooSmall { min: 2, got: order });
    }
    for low in [d1.order(), d2.order(), x1.order(), x2.order()] {
        if low < order {
            return Err(Error::OrderTooSmall { min: order, got: low });
        }
    }
    expect_application(d1, x2, false, "d1", "x2")?;
    expect_application(d2, x1, false, "d2", "x1")?;
    expect_application(d2, x2, true, "d2", "x2")?;

    let first = straighten(d1, x1, order)?;
    let first_change = first.params;
    let first_inverse = invert_param_system(&first_change)?;
    let d2_moved: Result<Vec<TruncSeries>> = first_change
        .components()
        .iter()
        .map(|c| substitute(&d2.apply(c), first_inverse.components()))
        .collect();
    let d2_moved = d2_moved?;
    let x2_moved = substitute(&x2.truncated(order), first_inverse.components())?;

    // Since d1(x2) = 0 and d2(x1) = 0, both x2 and the moved d2 live on the
    // slice u1 = 0, where d2 restricts to a derivation of the smaller ring.
    let sub_ring = Ring::try_new(ring.vars()[1..].to_vec())?;
    let restricted: Result<Vec<TruncSeries>> = d2_moved.iter().map(restrict_first).collect();
    let restricted = restricted?;
    let sub_d = SeriesDerivation::new(
        restricted[1..]
            .iter()
            .map(|c| strip_first(c, &sub_ring))
            .collect(),
    );
    let sub_x2 = strip_first(&restrict_first(&x2_moved)?, &sub_ring);
    let second = straighten(&sub_d, &sub_x2, order - 1)?;

    let mut lifted = vec![TruncSeries::variable(&ring, 0, order - 1)];
    for c in second.params.components() {
        lifted.push(embed_first(c, &ring));
    }
    let second_change = ParamSystem::new(lifted)?;
    let final_change = second_change.compose(&first_change)?;
    let final_inverse = invert_param_system(&final_change)?;

    let coefficients: Result<Vec<TruncSeries>> = final_change
        .components()
        .iter()
        .map(|c| substitute(&d2.apply(c), final_inverse.components()))
        .collect();
    let coefficients = coefficients?;
    let tail_order = coefficients[0].order();
    if !coefficients[0].agrees_with(&TruncSeries::zero(&ring, tail_order), tail_order) {
        return Err(Error::Precondition {
            detail: format!("d2 keeps a component {} along x1", coefficients[0]),
        });
    }
    if !coefficients[1].agrees_with(&TruncSeries::one(&ring, tail_order), tail_order) {
        return Err(Error::Precondition {
            detail: format!("d2(x2) = {} in the new coordinates, expected 1", coefficients[1]),
        });
    }
    let divided: Result<Vec<TruncSeries>> = coefficients[2..]
        .iter()
        .map(|c| c.divide_by_variable(0))
        .collect();
    Ok((final_change, divided?))
}

/// Splits the coefficients from [`canonical_pair`] into the operators graded
/// by degree in `(x1, x2)`: the k-th entry is `sum_i a_i^(k) d/dy_i` where
/// `a_i^(k)` collects the terms of `a_i` of degree `k` in the first two
/// variables.
pub fn partial_k_operators(a: &[TruncSeries], k_max: u32) -> Vec<SeriesDerivation> {
    if a.is_empty() {
        return Vec::new();
    }
    let ring = a[0].ring().clone();
    let n = ring.len();
    assert_eq!(a.len(), n - 2, "expected one coefficient per variable beyond the second");
    let weights = WeightVector::first_two(n);
    let order = a.iter().map(TruncSeries::order).min().unwrap();
    (0..=k_max)
        .map(|k| {
            let mut coefficients = vec![
                TruncSeries::zero(&ring, order),
                TruncSeries::zero(&ring, order),
            ];
            for ai in a {
                coefficients.push(ai.weighted_part(&weights, u64::from(k)));
            }
            SeriesDerivation::new(coefficients)
        })
        .collect()
}

fn expect_application(
    d: &SeriesDerivation,
    x: &TruncSeries,
    expect_one: bool,
    d_name: &str,
    x_name: &str,
) -> Result<()> {
    let image = d.apply(&x.truncated(x.order()));
    let expected = if expect_one {
        TruncSeries::one(d.ring(), image.order())
    } else {
        TruncSeries::zero(d.ring(), image.order())
    };
    if image.agrees_with(&expected, image.order()) {
        Ok(())
    } else {
        Err(Error::Precondition {
            detail: format!(
                "{d_name}({x_name}) = {image}, expected {}",
                if expect_one { "1" } else { "0" }
            ),
        })
    }
}

/// Sets the first variable to zero.
fn restrict_first(f: &TruncSeries) -> Result<TruncSeries> {
    let ring = f.ring();
    let mut images = vec![TruncSeries::zero(ring, f.order())];
    for i in 1..ring.len() {
        images.push(TruncSeries::variable(ring, i, f.order()));
    }
    substitute(f, &images)
}

/// Reads a series free of the first variable as a series of the smaller ring.
fn strip_first(f: &TruncSeries, target: &Ring) -> TruncSeries {
    debug_assert_eq!(target.len() + 1, f.ring().len());
    TruncSeries::from_terms(
        target,
        f.order(),
        f.terms().map(|(m, c)| {
            let e = m.exponents();
            assert_eq!(e[0], 0, "series depends on the dropped variable");
            (Monomial::new(e[1..].to_vec()), c.clone())
        }),
    )
}

/// Reads a series of the smaller ring back into the full ring.
fn embed_first(f: &TruncSeries, target: &Ring) -> TruncSeries {
    debug_assert_eq!(target.len(), f.ring().len() + 1);
    TruncSeries::from_terms(
        target,
        f.order(),
        f.terms().map(|(m, c)| {
            let mut e = vec![0];
            e.extend_from_slice(m.exponents());
            (Monomial::new(e), c.clone())
        }),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deriv::Derivation;
    use crate::parse::parse_polynomial;
    use crate::poly::Polynomial;

    fn s(ring: &Ring, text: &str, order: u32) -> TruncSeries {
        TruncSeries::from_polynomial(&parse_polynomial(text, ring).unwrap(), order)
    }

    fn deriv(ring: &Ring, coefficients: &[&str], order: u32) -> SeriesDerivation {
        let d = Derivation::new(
            ring,
            coefficients
                .iter()
                .map(|c| parse_polynomial(c, ring).unwrap())
                .collect::<Vec<Polynomial>>(),
        );
        SeriesDerivation::from_derivation(&d, order)
    }

    #[test]
    fn linear_coefficient_is_absorbed_quadratically() {
        let r = Ring::new(["t1", "t2"]);
        let d = deriv(&r, &["1", "t1"], 5);
        let out = straighten(&d, &s(&r, "t1", 5), 5).unwrap();
        assert_eq!(out.params.component(0), &s(&r, "t1", 5));
        assert_eq!(out.params.component(1), &s(&r, "t2 - 1/2*t1^2", 5));
        assert!(out.residuals.iter().all(TruncSeries::is_zero));
        assert_eq!(out.iterations, 4);
        assert_eq!(out.update_supports[0], (1, Some(2)));
        assert_eq!(out.update_supports[1], (2, None));
    }

    #[test]
    fn already_straight_derivation_keeps_the_coordinates() {
        let r = Ring::new(["t1", "t2"]);
        let d = deriv(&r, &["1", "0"], 4);
        let out = straighten(&d, &s(&r, "t1", 4), 4).unwrap();
        assert_eq!(out.params.component(1), &s(&r, "t2", 4));
        assert!(out.update_supports.iter().all(|(_, support)| support.is_none()));
    }

    #[test]
    fn quadratic_coefficient_is_absorbed_cubically() {
        let r = Ring::new(["t1", "t2"]);
        let d = deriv(&r, &["1", "t1^2"], 6);
        let out = straighten(&d, &s(&r, "t1", 6), 6).unwrap();
        assert_eq!(out.params.component(1), &s(&r, "t2 - 1/3*t1^3", 6));
        assert!(out.residuals.iter().all(TruncSeries::is_zero));
    }

    #[test]
    fn chained_coefficients_need_two_passes() {
        let r = Ring::new(["t1", "t2", "t3"]);
        let d = deriv(&r, &["1", "t1", "t2"], 5);
        let out = straighten(&d, &s(&r, "t1", 5), 5).unwrap();
        assert_eq!(out.params.component(1), &s(&r, "t2 - 1/2*t1^2", 5));
        assert_eq!(out.params.component(2), &s(&r, "t3 - t1*t2 + 1/3*t1^3", 5));
        assert!(out.residuals.iter().all(TruncSeries::is_zero));
    }

    #[test]
    fn curved_parameter_is_kept_as_the_first_component() {
        let r = Ring::new(["t1", "t2"]);
        let d = deriv(&r, &["1", "0"], 5);
        let x1 = s(&r, "t1 + t2^2", 5);
        let out = straighten(&d, &x1, 5).unwrap();
        assert_eq!(out.params.component(0), &x1);
        assert_eq!(out.params.component(1), &s(&r, "t2", 5));
        assert!(out.residuals.iter().all(TruncSeries::is_zero));
    }

    #[test]
    fn pivot_moves_to_the_variable_carried_by_the_parameter() {
        let r = Ring::new(["t1", "t2"]);
        let d = deriv(&r, &["0", "1"], 4);
        let out = straighten(&d, &s(&r, "t2", 4), 4).unwrap();
        assert_eq!(out.params.component(0), &s(&r, "t2", 4));
        assert_eq!(out.params.component(1), &s(&r, "t1", 4));
    }

    #[test]
    fn constant_drift_is_cancelled_linearly() {
        let r = Ring::new(["t1", "t2"]);
        let d = deriv(&r, &["1", "3"], 4);
        let out = straighten(&d, &s(&r, "t1", 4), 4).unwrap();
        assert_eq!(out.params.component(1), &s(&r, "t2 - 3*t1", 4));
        assert!(out.residuals.iter().all(TruncSeries::is_zero));
    }

    #[test]
    fn non_unit_image_is_rejected() {
        let r = Ring::new(["t1", "t2"]);
        let d = deriv(&r, &["t1", "0"], 4);
        let err = straighten(&d, &s(&r, "t1", 4), 4).unwrap_err();
        assert_eq!(err.code(), "precondition");
    }

    #[test]
    fn parameter_without_linear_part_is_rejected() {
        let r = Ring::new(["t1", "t2"]);
        let d = deriv(&r, &["1", "0"], 4);
        let err = straighten(&d, &s(&r, "t1^2", 4), 4).unwrap_err();
        assert_eq!(err.code(), "precondition");
    }

    #[test]
    fn updates_stay_above_the_pass_degree() {
        let r = Ring::new(["t1", "t2"]);
        let d = deriv(&r, &["1", "t1 + t1*t2 + t2^3"], 7);
        let out = straighten(&d, &s(&r, "t1", 7), 7).unwrap();
        assert!(out.residuals.iter().all(TruncSeries::is_zero));
        for (k, support) in &out.update_supports {
            if let Some(m) = support {
                assert!(*m >= k + 1);
            }
        }
    }

    #[test]
    fn straight_pair_yields_a_constant_coefficient() {
        let r = Ring::new(["t1", "t2", "t3"]);
        let d1 = deriv(&r, &["1", "0", "0"], 6);
        let d2 = deriv(&r, &["0", "1", "t1"], 6);
        let (params, a) = canonical_pair(&d1, &d2, &s(&r, "t1", 6), &s(&r, "t2", 6), 6).unwrap();
        assert!(params.is_identity_to(params.order()));
        assert_eq!(a.len(), 1);
        assert_eq!(a[0], TruncSeries::one(&r, a[0].order()));
    }

    #[test]
    fn coefficient_keeps_its_transverse_dependence() {
        let r = Ring::new(["t1", "t2", "t3"]);
        let d1 = deriv(&r, &["1", "0", "0"], 6);
        let d2 = deriv(&r, &["0", "1", "t1 + t1*t2"], 6);
        let (_, a) = canonical_pair(&d1, &d2, &s(&r, "t1", 6), &s(&r, "t2", 6), 6).unwrap();
        assert_eq!(a[0], s(&r, "1 + t2", a[0].order()));
    }

    #[test]
    fn two_variable_pair_has_no_coefficients() {
        let r = Ring::new(["t1", "t2"]);
        let d1 = deriv(&r, &["1", "0"], 5);
        let d2 = deriv(&r, &["0", "1"], 5);
        let (params, a) = canonical_pair(&d1, &d2, &s(&r, "t1", 5), &s(&r, "t2", 5), 5).unwrap();
        assert!(a.is_empty());
        assert!(params.is_identity_to(params.order()));
    }

    #[test]
    fn crossed_preconditions_are_rejected() {
        let r = Ring::new(["t1", "t2"]);
        let d1 = deriv(&r, &["1", "0"], 5);
        let d2 = deriv(&r, &["t2", "1"], 5);
        let err = canonical_pair(&d1, &d2, &s(&r, "t1", 5), &s(&r, "t2", 5), 5).unwrap_err();
        assert_eq!(err.code(), "precondition");
    }

    #[test]
    fn reconstruction_matches_the_original_action() {
        let r = Ring::new(["t1", "t2", "t3"]);
        let order = 8;
        let d1 = deriv(&r, &["1", "0", "0"], order);
        let d2 = deriv(&r, &["0", "1", "t1 + 2*t1^2 + t1*t3"], order);
        let x1 = s(&r, "t1", order);
        let x2 = s(&r, "t2", order);
        let (params, a) = canonical_pair(&d1, &d2, &x1, &x2, order).unwrap();
        let inverse = invert_param_system(&params).unwrap();

        let v1 = TruncSeries::variable(&r, 0, a[0].order() + 1);
        let rebuilt = SeriesDerivation::new(vec![
            TruncSeries::zero(&r, params.order()),
            TruncSeries::one(&r, params.order()),
            &v1 * &a[0],
        ]);
        for text in ["t3", "t1*t3 + t2^2", "t2 + t3^2 - t1*t2*t3"] {
            let f = s(&r, text, order);
            let direct = rebuilt.apply(&f);
            let transported = substitute(
                &d2.apply(&substitute(&f, params.components()).unwrap()),
                inverse.components(),
            )
            .unwrap();
            let shared = direct.order().min(transported.order());
            assert!(direct.agrees_with(&transported, shared), "mismatch on {text}");
        }
    }

    #[test]
    fn graded_operators_split_and_reassemble() {
        let r = Ring::new(["t1", "t2", "t3"]);
        let a = vec![s(&r, "1 + t2 + t1*t2 + t3", 5)];
        let ops = partial_k_operators(&a, 3);
        assert_eq!(ops.len(), 4);
        assert_eq!(ops[0].coefficient(2), &s(&r, "1 + t3", 5));
        assert_eq!(ops[1].coefficient(2), &s(&r, "t2", 5));
        assert_eq!(ops[2].coefficient(2), &s(&r, "t1*t2", 5));
        assert!(ops[3].coefficient(2).is_zero());
        let total = ops
            .iter()
            .fold(TruncSeries::zero(&r, 5), |acc, op| &acc + op.coefficient(2));
        assert_eq!(total, a[0]);
    }

    #[test]
    fn empty_coefficient_list_yields_no_operators() {
        assert!(partial_k_operators(&[], 4).is_empty());
    }
}
