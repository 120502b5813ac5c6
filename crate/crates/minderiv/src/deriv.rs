//! Derivations on polynomial rings: operators of the form Σ aᵢ ∂/∂xᵢ with
//! polynomial coefficients, stored extensionally as coefficient tuples so
//! equality, printing and serialization are decidable and canonical.

use std::fmt;

use crate::error::{Error, Result};
use crate::poly::{Polynomial, Rational, Ring};

/// A derivation d = Σᵢ aᵢ ∂/∂xᵢ, determined by the coefficient of each
/// partial. The zero derivation (all coefficients zero) is a legal value.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Derivation {
    ring: Ring,
    coefficients: Vec<Polynomial>,
}

impl Derivation {
    /// Builds a derivation from one coefficient per variable.
    pub fn new(ring: &Ring, coefficients: Vec<Polynomial>) -> Self {
        assert_eq!(
            coefficients.len(),
            ring.len(),
            "coefficient count must equal variable count"
        );
        for c in &coefficients {
            assert!(c.ring() == ring, "coefficient ring mismatch");
        }
        Derivation {
            ring: ring.clone(),
            coefficients,
        }
    }

    /// The zero derivation.
    pub fn zero(ring: &Ring) -> Self {
        Derivation {
            ring: ring.clone(),
            coefficients: vec![Polynomial::zero(ring); ring.len()],
        }
    }

    /// The coordinate derivation ∂/∂xᵢ.
    pub fn partial(ring: &Ring, index: usize) -> Self {
        assert!(index < ring.len(), "variable index {index} out of range");
        let mut coefficients = vec![Polynomial::zero(ring); ring.len()];
        coefficients[index] = Polynomial::one(ring);
        Derivation {
            ring: ring.clone(),
            coefficients,
        }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    /// Coefficient of ∂/∂xᵢ.
    pub fn coefficient(&self, index: usize) -> &Polynomial {
        &self.coefficients[index]
    }

    pub fn coefficients(&self) -> &[Polynomial] {
        &self.coefficients
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.iter().all(Polynomial::is_zero)
    }

    /// Largest total degree among the coefficients, or `None` for the zero
    /// derivation. Applying the derivation raises degrees by at most
    /// this value minus one.
    pub fn max_coefficient_degree(&self) -> Option<u32> {
        self.coefficients
            .iter()
            .filter_map(Polynomial::total_degree)
            .max()
    }

    /// Applies the derivation: Σᵢ aᵢ ∂f/∂xᵢ.
    pub fn apply(&self, f: &Polynomial) -> Polynomial {
        assert!(f.ring() == &self.ring, "ring mismatch in apply");
        let mut out = Polynomial::zero(&self.ring);
        for (i, a) in self.coefficients.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            out = &out + &(a * &f.partial_derivative(i));
        }
        out
    }

    /// Kernel membership: apply(d, f) = 0.
    pub fn is_in_kernel(&self, f: &Polynomial) -> bool {
        self.apply(f).is_zero()
    }

    pub fn scaled(&self, factor: &Rational) -> Derivation {
        Derivation {
            ring: self.ring.clone(),
            coefficients: self.coefficients.iter().map(|c| c.scaled(factor)).collect(),
        }
    }
}

/// Coefficient-wise sum Σ aᵢdᵢ with polynomial coefficients.
pub fn linear_combination(coeffs: &[Polynomial], derivs: &[Derivation]) -> Derivation {
    assert_eq!(
        coeffs.len(),
        derivs.len(),
        "coefficient and derivation counts must match"
    );
    assert!(!derivs.is_empty(), "empty linear combination");
    let ring = derivs[0].ring().clone();
    for d in derivs {
        assert!(d.ring() == &ring, "ring mismatch in linear combination");
    }
    for a in coeffs {
        assert!(a.ring() == &ring, "ring mismatch in linear combination");
    }
    let mut out_coeffs = vec![Polynomial::zero(&ring); ring.len()];
    for (a, d) in coeffs.iter().zip(derivs) {
        if a.is_zero() {
            continue;
        }
        for (slot, c) in out_coeffs.iter_mut().zip(d.coefficients()) {
            *slot = &*slot + &(a * c);
        }
    }
    Derivation::new(&ring, out_coeffs)
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coefficients.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if c == &Polynomial::one(&self.ring) {
                write!(f, "d/d{}", self.ring.var_name(i))?;
            } else {
                write!(f, "({})*d/d{}", c, self.ring.var_name(i))?;
            }
        }
        Ok(())
    }
}

/// A nonempty sequence of derivations over a common ring.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DerivationFamily {
    members: Vec<Derivation>,
}

impl DerivationFamily {
    pub fn new(members: Vec<Derivation>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::EmptyFamily);
        }
        let ring = members[0].ring().clone();
        for d in &members {
            assert!(d.ring() == &ring, "ring mismatch in family");
        }
        Ok(DerivationFamily { members })
    }

    pub fn single(d: Derivation) -> Self {
        DerivationFamily { members: vec![d] }
    }

    pub fn ring(&self) -> &Ring {
        self.members[0].ring()
    }

    pub fn members(&self) -> &[Derivation] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// True iff every member annihilates f.
    pub fn is_in_kernel(&self, f: &Polynomial) -> bool {
        self.members.iter().all(|d| d.is_in_kernel(f))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_polynomial;
    use crate::poly::int;

    fn p(ring: &Ring, text: &str) -> Polynomial {
        parse_polynomial(text, ring).unwrap()
    }

    /// x d/dx on Q[x, y].
    fn euler_x(ring: &Ring) -> Derivation {
        Derivation::new(
            ring,
            vec![Polynomial::variable(ring, 0), Polynomial::zero(ring)],
        )
    }

    #[test]
    fn euler_operator_scales_by_degree() {
        let r = Ring::new(["x", "y"]);
        let d = euler_x(&r);
        assert_eq!(d.apply(&p(&r, "x^3")), p(&r, "3*x^3"));
    }

    #[test]
    fn canonical_second_member_sends_y_to_x1() {
        let r = Ring::new(["x1", "x2", "y"]);
        let d = Derivation::new(
            &r,
            vec![
                Polynomial::zero(&r),
                Polynomial::one(&r),
                Polynomial::variable(&r, 0),
            ],
        );
        assert_eq!(d.apply(&p(&r, "y")), p(&r, "x1"));
    }

    #[test]
    fn constants_are_killed() {
        let r = Ring::new(["x", "y"]);
        let d = Derivation::new(&r, vec![p(&r, "x^2+y"), p(&r, "3")]);
        assert!(d.apply(&Polynomial::one(&r)).is_zero());
        assert!(d.is_in_kernel(&p(&r, "5/7")));
    }

    #[test]
    fn identity_combination() {
        let r = Ring::new(["x", "y"]);
        let d1 = Derivation::partial(&r, 0);
        let d2 = Derivation::partial(&r, 1);
        let combo = linear_combination(
            &[Polynomial::one(&r), Polynomial::zero(&r)],
            &[d1.clone(), d2],
        );
        assert_eq!(combo, d1);
    }

    #[test]
    fn monomial_coefficients_build_the_weighted_pair_sum() {
        let r = Ring::new(["x1", "x2"]);
        let m = 3u32;
        let combo = linear_combination(
            &[
                Polynomial::variable(&r, 0).pow(m),
                Polynomial::variable(&r, 1).pow(m),
            ],
            &[Derivation::partial(&r, 0), Derivation::partial(&r, 1)],
        );
        assert_eq!(combo.coefficient(0), &p(&r, "x1^3"));
        assert_eq!(combo.coefficient(1), &p(&r, "x2^3"));
    }

    #[test]
    fn zero_coefficients_give_zero_derivation() {
        let r = Ring::new(["x", "y"]);
        let combo = linear_combination(
            &[Polynomial::zero(&r), Polynomial::zero(&r)],
            &[Derivation::partial(&r, 0), Derivation::partial(&r, 1)],
        );
        assert!(combo.is_zero());
    }

    #[test]
    fn kernel_membership_for_slope_minus_one() {
        let r = Ring::new(["x", "y"]);
        let x = Polynomial::variable(&r, 0);
        let y = Polynomial::variable(&r, 1);
        let hyperbolic = Derivation::new(&r, vec![x.clone(), (&y).scaled(&int(-1))]);
        let radial = Derivation::new(&r, vec![x, y]);
        let f = p(&r, "x*y");
        assert!(hyperbolic.is_in_kernel(&f));
        assert!(!radial.is_in_kernel(&f));
        assert_eq!(radial.apply(&f), p(&r, "2*x*y"));
    }

    #[test]
    fn empty_family_is_rejected() {
        assert!(matches!(
            DerivationFamily::new(vec![]),
            Err(Error::EmptyFamily)
        ));
    }

    #[test]
    #[should_panic(expected = "counts must match")]
    fn mismatched_combination_lengths_panic() {
        let r = Ring::new(["x"]);
        let _ = linear_combination(&[], &[Derivation::partial(&r, 0)]);
    }

    #[test]
    fn display_names_the_partials() {
        let r = Ring::new(["x1", "x2", "y"]);
        let d = Derivation::new(
            &r,
            vec![
                Polynomial::one(&r),
                Polynomial::zero(&r),
                Polynomial::variable(&r, 0),
            ],
        );
        assert_eq!(d.to_string(), "d/dx1 + (x1)*d/dy");
    }
}
