//! Classification of the diagonal family `{x d/dx, y d/dy}`.
//!
//! A combination `l1*x*d/dx + l2*y*d/dy` has a first integral exactly when
//! `l2 = 0` or `l1/l2` is a nonpositive rational, in which case the integral
//! is the single monomial `x^q*y^p` with `l1/l2 = -p/q` in lowest terms.  The
//! non-minimal combinations therefore sweep out a countable union of lines
//! through the origin; `enumerate_bad_lines` lists them up to a height bound
//! and `sample_minimal_locus` probes chosen points against the degree-bounded
//! kernel computation.

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::deriv::{Derivation, DerivationFamily};
use crate::error::{Error, Result};
use crate::kernel::first_integrals;
use crate::poly::{Monomial, Polynomial, Rational, Ring};

/// Exact verdict for one combination `l1*x*d/dx + l2*y*d/dy`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SlopeClassification {
    /// No first integral at any degree.
    Minimal,
    /// First integral `x^q*y^p`, where `l1/l2 = -p/q` with `gcd(p, q) = 1`.
    /// The axis `l2 = 0` is reported as `(p, q) = (1, 0)` with integral `y`.
    HasFirstIntegral { p: u32, q: u32, integral: Polynomial },
}

/// One probed combination: the exact coefficients, whether the degree-bounded
/// search found no integral, and the lowest-degree integral when it found one.
#[derive(Debug, Clone, PartialEq)]
pub struct LocusPoint {
    pub lambda1: Rational,
    pub lambda2: Rational,
    pub minimal: bool,
    pub witness: Option<Polynomial>,
}

/// Results of probing a list of combinations at one degree bound.  `minimal`
/// here always means "no integral of degree at most `degree_bound`": a line
/// with a known integral beyond the bound still samples as minimal.
#[derive(Debug, Clone, PartialEq)]
pub struct LocusSample {
    pub degree_bound: u32,
    pub points: Vec<LocusPoint>,
}

/// Decides whether `l1*x*d/dx + l2*y*d/dy` has a first integral, returning
/// the monomial integral and the coprime line label when it does.
pub fn classify_combination(lambda1: &Rational, lambda2: &Rational) -> Result<SlopeClassification> {
    if lambda1.is_zero() && lambda2.is_zero() {
        return Err(Error::ZeroCombination);
    }
    if lambda2.is_zero() {
        let ring = locus_ring();
        let integral = Polynomial::variable(&ring, 1);
        return Ok(SlopeClassification::HasFirstIntegral { p: 1, q: 0, integral });
    }
    let ratio = -(lambda1 / lambda2);
    if ratio.is_negative() {
        return Ok(SlopeClassification::Minimal);
    }
    let p = ratio
        .numer()
        .to_u32()
        .expect("slope numerator exceeds the exponent range");
    let q = ratio
        .denom()
        .to_u32()
        .expect("slope denominator exceeds the exponent range");
    let ring = locus_ring();
    let integral = Polynomial::monomial(&ring, Monomial::new(vec![q, p]), Rational::one());
    Ok(SlopeClassification::HasFirstIntegral { p, q, integral })
}

/// Probes each combination against `first_integrals` at the given degree
/// bound, recording the lowest-degree witness found.  Each verdict is checked
/// against [`classify_combination`] whenever the classified integral falls
/// within the bound.
pub fn sample_minimal_locus(points: &[(Rational, Rational)], degree_bound: u32) -> Result<LocusSample> {
    let ring = locus_ring();
    let mut sampled = Vec::with_capacity(points.len());
    for (lambda1, lambda2) in points {
        let combination = Derivation::new(
            &ring,
            vec![
                Polynomial::variable(&ring, 0).scaled(lambda1),
                Polynomial::variable(&ring, 1).scaled(lambda2),
            ],
        );
        let family = DerivationFamily::single(combination);
        let found = first_integrals(&family, degree_bound)?;
        let witness = found.integrals.last().cloned();
        let minimal = witness.is_none();
        match classify_combination(lambda1, lambda2) {
            Ok(SlopeClassification::Minimal) => {
                assert!(minimal, "degree-bounded search found an integral on a minimal line");
            }
            Ok(SlopeClassification::HasFirstIntegral { p, q, integral }) if p + q <= degree_bound => {
                assert_eq!(
                    witness.as_ref(),
                    Some(&integral),
                    "degree-bounded search disagrees with the exact classification"
                );
            }
            _ => {}
        }
        sampled.push(LocusPoint {
            lambda1: lambda1.clone(),
            lambda2: lambda2.clone(),
            minimal,
            witness,
        });
    }
    Ok(LocusSample { degree_bound, points: sampled })
}

/// Lists the labels `(p, q)` of every non-minimal line with `p + q` at most
/// `height`: all coprime pairs with `p >= 0`, `q >= 1` in increasing
/// `(p + q, p)` order, followed by `(1, 0)` for the `l2 = 0` axis.
pub fn enumerate_bad_lines(height: u32) -> Vec<(u32, u32)> {
    assert!(height >= 1, "height must be at least 1");
    let mut lines = Vec::new();
    for sum in 1..=height {
        for p in 0..sum {
            let q = sum - p;
            if p.gcd(&q) == 1 {
                lines.push((p, q));
            }
        }
    }
    lines.push((1, 0));
    lines
}

fn locus_ring() -> Ring {
    Ring::new(["x", "y"])
}
