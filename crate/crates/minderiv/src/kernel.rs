//! Degree-bounded kernels and first integrals of derivation families,
//! computed by exact nullspace extraction.
//!
//! Every result here is a certificate relative to the degree bound `D`: the
//! basis spans the kernel intersected with polynomials of total degree at
//! most `D`, never the full ring of constants. `D` is carried in every
//! report so callers cannot mistake the two.

use crate::deriv::{Derivation, DerivationFamily};
use crate::error::{Error, Result};
use crate::linalg;
use crate::poly::{Monomial, Polynomial, Rational, Ring};

/// Basis of a degree-bounded kernel plus the rank data certifying it.
///
/// The basis is canonical: reduced row echelon form over the monomial
/// coordinates, each element with leading coefficient 1 under graded-lex
/// order, sorted by leading monomial descending.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct KernelReport {
    pub degree_bound: u32,
    pub basis: Vec<Polynomial>,
    /// Stacked row count: one block of rows per family member, indexed by
    /// monomials of degree up to `degree_bound` plus the member's maximal
    /// coefficient degree.
    pub matrix_rows: usize,
    pub matrix_cols: usize,
    pub matrix_rank: usize,
}

/// Nonconstant kernel elements normalized to zero constant term and leading
/// coefficient 1. Empty means: no first integral of degree at most
/// `degree_bound` exists (says nothing about higher degrees).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FirstIntegralBasis {
    pub degree_bound: u32,
    pub integrals: Vec<Polynomial>,
}

/// Monomials of degree at most `degree_bound`, largest first. This is the
/// column order of every kernel matrix, chosen so reduced row echelon form
/// pivots on leading monomials.
fn column_monomials(ring: &Ring, degree_bound: u32) -> Vec<Monomial> {
    let mut columns = ring.monomials_up_to(degree_bound);
    columns.reverse();
    columns
}

/// Exact basis of {f : deg f ≤ D and d(f) = 0 for every member d}.
pub fn kernel_basis(family: &DerivationFamily, degree_bound: u32) -> KernelReport {
    let ring = family.ring();
    let columns = column_monomials(ring, degree_bound);
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    let mut matrix_rows = 0;
    for member in family.members() {
        let target_degree = degree_bound + member.max_coefficient_degree().unwrap_or(0);
        let targets = column_monomials(ring, target_degree);
        matrix_rows += targets.len();
        let images: Vec<Polynomial> = columns
            .iter()
            .map(|m| member.apply(&Polynomial::monomial(ring, m.clone(), Rational::from_integer(1.into()))))
            .collect();
        for target in &targets {
            let row: Vec<Rational> = images.iter().map(|g| g.coefficient(target)).collect();
            rows.push(row);
        }
    }
    let (matrix_rank, vectors) = linalg::nullspace(&rows, columns.len());
    let basis = vectors
        .into_iter()
        .map(|v| Polynomial::from_terms(ring, columns.iter().cloned().zip(v)))
        .collect();
    KernelReport {
        degree_bound,
        basis,
        matrix_rows,
        matrix_cols: columns.len(),
        matrix_rank,
    }
}

/// Kernel basis with the constant direction quotiented out.
pub fn first_integrals(family: &DerivationFamily, degree_bound: u32) -> Result<FirstIntegralBasis> {
    if degree_bound < 1 {
        return Err(Error::DegreeBoundTooSmall {
            min: 1,
            got: degree_bound,
        });
    }
    let report = kernel_basis(family, degree_bound);
    let integrals = report
        .basis
        .into_iter()
        .filter(|p| !p.is_constant())
        .map(|p| {
            let c = p.constant_term();
            &p - &Polynomial::constant(p.ring(), c)
        })
        .collect();
    Ok(FirstIntegralBasis {
        degree_bound,
        integrals,
    })
}

/// Whether a single derivation and a family cut out the same kernel in
/// degrees ≤ D. Compared by stacking both bases and checking the rank
/// collapses to the common dimension.
pub fn kernels_equal_up_to_degree(
    d: &Derivation,
    family: &DerivationFamily,
    degree_bound: u32,
) -> bool {
    assert!(d.ring() == family.ring(), "ring mismatch");
    let single = kernel_basis(&DerivationFamily::single(d.clone()), degree_bound);
    let joint = kernel_basis(family, degree_bound);
    same_span(&single, &joint)
}

pub(crate) fn same_span(a: &KernelReport, b: &KernelReport) -> bool {
    assert_eq!(a.degree_bound, b.degree_bound, "degree bound mismatch");
    if a.basis.len() != b.basis.len() {
        return false;
    }
    let dim = a.basis.len();
    if dim == 0 {
        return true;
    }
    let ring = a.basis[0].ring().clone();
    let columns = column_monomials(&ring, a.degree_bound);
    let mut stacked: Vec<Vec<Rational>> = Vec::with_capacity(2 * dim);
    for p in a.basis.iter().chain(&b.basis) {
        stacked.push(columns.iter().map(|m| p.coefficient(m)).collect());
    }
    linalg::rank(&stacked) == dim
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_polynomial;
    use crate::poly::int;

    fn p(ring: &Ring, text: &str) -> Polynomial {
        parse_polynomial(text, ring).unwrap()
    }

    fn scaling(ring: &Ring, weights: &[i64]) -> Derivation {
        let coefficients = weights
            .iter()
            .enumerate()
            .map(|(i, &w)| Polynomial::variable(ring, i).scaled(&int(w)))
            .collect();
        Derivation::new(ring, coefficients)
    }

    #[test]
    fn coordinate_scalings_leave_only_constants() {
        let r = Ring::new(["x", "y"]);
        let family = DerivationFamily::new(vec![scaling(&r, &[1, 0]), scaling(&r, &[0, 1])]).unwrap();
        let report = kernel_basis(&family, 3);
        assert_eq!(report.basis, vec![Polynomial::one(&r)]);
        assert_eq!(report.matrix_cols, 10);
        assert_eq!(report.basis.len(), report.matrix_cols - report.matrix_rank);
    }

    #[test]
    fn kernel_of_one_partial_is_the_other_variables() {
        let r = Ring::new(["x", "y"]);
        let family = DerivationFamily::single(Derivation::partial(&r, 0));
        let report = kernel_basis(&family, 2);
        assert_eq!(report.basis, vec![p(&r, "y^2"), p(&r, "y"), p(&r, "1")]);
    }

    #[test]
    fn euler_kernel_is_constants_at_every_degree() {
        let r = Ring::new(["x", "y"]);
        let family = DerivationFamily::single(scaling(&r, &[1, 1]));
        for degree_bound in 0..=5 {
            let report = kernel_basis(&family, degree_bound);
            assert_eq!(report.basis, vec![Polynomial::one(&r)]);
        }
    }

    #[test]
    fn slope_minus_one_has_integral_xy() {
        let r = Ring::new(["x", "y"]);
        let family = DerivationFamily::single(scaling(&r, &[1, -1]));
        let found = first_integrals(&family, 2).unwrap();
        assert_eq!(found.integrals, vec![p(&r, "x*y")]);
    }

    #[test]
    fn slope_minus_two_thirds_has_integral_x3y2() {
        let r = Ring::new(["x", "y"]);
        let family = DerivationFamily::single(scaling(&r, &[2, -3]));
        let found = first_integrals(&family, 5).unwrap();
        assert_eq!(found.integrals, vec![p(&r, "x^3*y^2")]);
    }

    #[test]
    fn positive_slope_has_no_integral_up_to_degree_8() {
        let r = Ring::new(["x", "y"]);
        let family = DerivationFamily::single(scaling(&r, &[1, 2]));
        let found = first_integrals(&family, 8).unwrap();
        assert!(found.integrals.is_empty());
    }

    #[test]
    fn degree_bound_zero_is_rejected_for_integrals() {
        let r = Ring::new(["x", "y"]);
        let family = DerivationFamily::single(Derivation::partial(&r, 0));
        assert!(matches!(
            first_integrals(&family, 0),
            Err(Error::DegreeBoundTooSmall { .. })
        ));
    }

    #[test]
    fn kernel_equality_against_the_scaling_family() {
        let r = Ring::new(["x", "y"]);
        let family = DerivationFamily::new(vec![scaling(&r, &[1, 0]), scaling(&r, &[0, 1])]).unwrap();
        assert!(kernels_equal_up_to_degree(&scaling(&r, &[1, 2]), &family, 8));
        assert!(!kernels_equal_up_to_degree(&scaling(&r, &[1, -1]), &family, 2));
    }

    #[test]
    fn kernel_equality_is_reflexive() {
        let r = Ring::new(["x1", "x2", "y"]);
        let d = Derivation::new(
            &r,
            vec![p(&r, "x1^2"), p(&r, "x2 + y"), Polynomial::zero(&r)],
        );
        let family = DerivationFamily::single(d.clone());
        for degree_bound in [0, 1, 3] {
            assert!(kernels_equal_up_to_degree(&d, &family, degree_bound));
        }
    }

    #[test]
    fn basis_elements_are_annihilated() {
        let r = Ring::new(["x1", "x2", "y"]);
        let d1 = Derivation::partial(&r, 0);
        let d2 = Derivation::new(
            &r,
            vec![
                Polynomial::zero(&r),
                Polynomial::one(&r),
                Polynomial::variable(&r, 0),
            ],
        );
        let family = DerivationFamily::new(vec![d1, d2]).unwrap();
        let report = kernel_basis(&family, 4);
        for f in &report.basis {
            assert!(family.is_in_kernel(f));
        }
    }

    #[test]
    fn zero_derivation_kernel_is_everything() {
        let r = Ring::new(["x", "y"]);
        let family = DerivationFamily::single(Derivation::zero(&r));
        let report = kernel_basis(&family, 2);
        assert_eq!(report.basis.len(), 6);
        assert_eq!(report.matrix_rank, 0);
    }
}
