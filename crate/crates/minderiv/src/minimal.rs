//! Minimal combinations of derivation pairs and families.
//!
//! The central object is the combination Δ_m = x₁^m·d₁ + x₂^m·d₂ of a
//! normalized pair. For large enough m its kernel collapses to the kernel of
//! the pair, making Δ_m a single derivation with the same constants as the
//! family. Since no effective bound on m is computed here, each candidate m
//! is certified or refuted at a caller-supplied degree bound, and the search
//! returns the full trace of what was checked.

use crate::deriv::{linear_combination, Derivation, DerivationFamily};
use crate::error::{Error, Result};
use crate::kernel::{kernel_basis, same_span, KernelReport};
use crate::poly::{Monomial, Polynomial, Rational, Ring};

/// The diagonal derivation δ_m = x₁^m ∂/∂x₁ + x₂^m ∂/∂x₂ in the first two
/// variables. Any further variables are inert.
pub fn delta_m(m: u32, ring: &Ring) -> Result<Derivation> {
    if m < 1 {
        return Err(Error::ExponentTooSmall { got: m });
    }
    if ring.len() < 2 {
        return Err(Error::TooFewVariables {
            needed: 2,
            got: ring.len(),
        });
    }
    let mut coefficients = vec![Polynomial::zero(ring); ring.len()];
    coefficients[0] = Polynomial::variable(ring, 0).pow(m);
    coefficients[1] = Polynomial::variable(ring, 1).pow(m);
    Ok(Derivation::new(ring, coefficients))
}

/// Whether the degree-bounded kernel of δ_m is exactly the span of monomials
/// free of the first two variables.
pub fn delta_m_kernel_is_inert(m: u32, degree_bound: u32, ring: &Ring) -> Result<bool> {
    if degree_bound < 1 {
        return Err(Error::DegreeBoundTooSmall {
            min: 1,
            got: degree_bound,
        });
    }
    let family = DerivationFamily::single(delta_m(m, ring)?);
    let report = kernel_basis(&family, degree_bound);
    let all_inert = report.basis.iter().all(|p| is_inert(p));
    let inert_count = ring
        .monomials_up_to(degree_bound)
        .iter()
        .filter(|mono| mono.exponent(0) == 0 && mono.exponent(1) == 0)
        .count();
    Ok(all_inert && report.basis.len() == inert_count)
}

fn is_inert(p: &Polynomial) -> bool {
    p.terms()
        .all(|(m, _)| m.exponent(0) == 0 && m.exponent(1) == 0)
}

/// Solution space of the homogeneous relation δ_m(P) + x₁·x₂^m·Q = 0, where
/// P ranges over forms of degree k+2 and Q over forms of degree k in the
/// first two variables.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RigidityOutcome {
    /// True iff the relation forces P = 0 and Q = 0.
    pub trivial_only: bool,
    /// A nonzero solution (P, Q) when one exists, canonical under the
    /// nullspace normalization.
    pub witness: Option<(Polynomial, Polynomial)>,
}

/// Assembles and solves the rigidity system for the given form degrees.
pub fn delta_m_rigidity(k: u32, m: u32, ring: &Ring) -> Result<RigidityOutcome> {
    if m < 1 {
        return Err(Error::ExponentTooSmall { got: m });
    }
    if ring.len() < 2 {
        return Err(Error::TooFewVariables {
            needed: 2,
            got: ring.len(),
        });
    }
    let delta = delta_m(m, ring)?;
    let x1 = Polynomial::variable(ring, 0);
    let x2 = Polynomial::variable(ring, 1);
    let multiplier = &x1 * &x2.pow(m);

    let p_monomials = pair_forms(ring, k + 2);
    let q_monomials = pair_forms(ring, k);
    let images: Vec<Polynomial> = p_monomials
        .iter()
        .map(|mono| delta.apply(&Polynomial::monomial(ring, mono.clone(), Rational::from_integer(1.into()))))
        .chain(
            q_monomials
                .iter()
                .map(|mono| &multiplier * &Polynomial::monomial(ring, mono.clone(), Rational::from_integer(1.into()))),
        )
        .collect();

    let targets = pair_forms(ring, k + m + 1);
    let rows: Vec<Vec<Rational>> = targets
        .iter()
        .map(|t| images.iter().map(|g| g.coefficient(t)).collect())
        .collect();
    let (_, basis) = crate::linalg::nullspace(&rows, images.len());
    let witness = basis.first().map(|v| {
        let p = Polynomial::from_terms(
            ring,
            p_monomials.iter().cloned().zip(v[..p_monomials.len()].iter().cloned()),
        );
        let q = Polynomial::from_terms(
            ring,
            q_monomials.iter().cloned().zip(v[p_monomials.len()..].iter().cloned()),
        );
        (p, q)
    });
    Ok(RigidityOutcome {
        trivial_only: witness.is_none(),
        witness,
    })
}

/// Monomials x₁^(g-i)·x₂^i of degree g in the first two variables, largest
/// first in graded-lex order.
fn pair_forms(ring: &Ring, degree: u32) -> Vec<Monomial> {
    (0..=degree)
        .map(|i| {
            let mut e = vec![0u32; ring.len()];
            e[0] = degree - i;
            e[1] = i;
            Monomial::new(e)
        })
        .collect()
}

/// The combination x₁^m·d₁ + x₂^m·d₂ built on the given variable pair.
pub fn power_combination(
    d1: &Derivation,
    d2: &Derivation,
    x1_index: usize,
    x2_index: usize,
    m: u32,
) -> Derivation {
    assert!(d1.ring() == d2.ring(), "ring mismatch");
    debug_assert!(m >= 1, "exponent must be positive");
    let ring = d1.ring();
    linear_combination(
        &[
            Polynomial::variable(ring, x1_index).pow(m),
            Polynomial::variable(ring, x2_index).pow(m),
        ],
        &[d1.clone(), d2.clone()],
    )
}

/// Search result: the smallest certified exponent, the full per-exponent
/// trace, the certified combination, and how to rebuild it from the source
/// family.
///
/// Certification is always relative to `degree_bound`: an entry (m, true)
/// says the combination's kernel matches the family kernel on polynomials of
/// degree at most `degree_bound`, nothing more.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MinimalityCertificate {
    /// Smallest certified m, or 0 when no search step was needed
    /// (single-member families).
    pub m_star: u32,
    pub degree_bound: u32,
    /// One entry per tried m, in increasing order. For folds this describes
    /// the last fold step.
    pub per_m_results: Vec<(u32, bool)>,
    pub combination: Derivation,
    /// Coefficients expressing the combination over the source family:
    /// entries (a, i) with combination = Σ a·family[i].
    pub coefficient_trace: Vec<(Polynomial, usize)>,
}

impl MinimalityCertificate {
    /// Reconstructs the combination from the coefficient trace over the
    /// source family. Equals `self.combination` for valid certificates.
    pub fn rebuild(&self, family: &DerivationFamily) -> Derivation {
        let coeffs: Vec<Polynomial> = self.coefficient_trace.iter().map(|(a, _)| a.clone()).collect();
        let derivs: Vec<Derivation> = self
            .coefficient_trace
            .iter()
            .map(|(_, i)| family.members()[*i].clone())
            .collect();
        linear_combination(&coeffs, &derivs)
    }
}

fn check_normalized(
    d1: &Derivation,
    d2: &Derivation,
    x1_index: usize,
    x2_index: usize,
) -> Result<()> {
    let ring = d1.ring();
    let x1 = Polynomial::variable(ring, x1_index);
    let x2 = Polynomial::variable(ring, x2_index);
    let one = Polynomial::one(ring);
    let zero = Polynomial::zero(ring);
    let checks = [
        ("d1", x1_index, d1.apply(&x1), &one),
        ("d1", x2_index, d1.apply(&x2), &zero),
        ("d2", x2_index, d2.apply(&x2), &one),
        ("d2", x1_index, d2.apply(&x1), &zero),
    ];
    for (name, var, got, expected) in checks {
        if &got != expected {
            return Err(Error::Precondition {
                detail: format!(
                    "{name}({}) = {got}, expected {expected}",
                    ring.var_name(var)
                ),
            });
        }
    }
    Ok(())
}

fn is_normalized(d1: &Derivation, d2: &Derivation, x1_index: usize, x2_index: usize) -> bool {
    check_normalized(d1, d2, x1_index, x2_index).is_ok()
}

/// Finds the smallest m ≤ m_max whose combination x₁^m·d₁ + x₂^m·d₂ has the
/// same degree-bounded kernel as the pair {d₁, d₂}.
///
/// Requires the normalized pair: d₁(x₁)=1, d₁(x₂)=0, d₂(x₂)=1, d₂(x₁)=0.
/// Every m up to m_max is tried so the trace is complete; certification is
/// not assumed monotone in m.
pub fn find_minimal_m(
    d1: &Derivation,
    d2: &Derivation,
    x1_index: usize,
    x2_index: usize,
    degree_bound: u32,
    m_max: u32,
) -> Result<MinimalityCertificate> {
    assert!(d1.ring() == d2.ring(), "ring mismatch");
    if degree_bound < 1 {
        return Err(Error::DegreeBoundTooSmall {
            min: 1,
            got: degree_bound,
        });
    }
    check_normalized(d1, d2, x1_index, x2_index)?;
    let family = DerivationFamily::new(vec![d1.clone(), d2.clone()])?;
    let joint = kernel_basis(&family, degree_bound);
    let mut per_m_results = Vec::new();
    let mut best: Option<(u32, Derivation)> = None;
    for m in 1..=m_max {
        let candidate = power_combination(d1, d2, x1_index, x2_index, m);
        let certified = certifies(&candidate, &joint, degree_bound);
        per_m_results.push((m, certified));
        if certified && best.is_none() {
            best = Some((m, candidate));
        }
    }
    let Some((m_star, combination)) = best else {
        return Err(Error::NoMinimalM {
            m_max,
            degree_bound,
        });
    };
    let ring = d1.ring();
    Ok(MinimalityCertificate {
        m_star,
        degree_bound,
        per_m_results,
        combination,
        coefficient_trace: vec![
            (Polynomial::variable(ring, x1_index).pow(m_star), 0),
            (Polynomial::variable(ring, x2_index).pow(m_star), 1),
        ],
    })
}

fn certifies(candidate: &Derivation, joint: &KernelReport, degree_bound: u32) -> bool {
    let single = kernel_basis(
        &DerivationFamily::single(candidate.clone()),
        degree_bound,
    );
    same_span(&single, joint)
}

/// Left-folds a family into a single certified combination.
///
/// Each step pairs the running combination with the next member over the
/// step's variable pair. Normalized steps run `find_minimal_m`; otherwise
/// the step searches coefficient pairs (x₁^a, x₂^b) with max(a, b) ≤ m_max,
/// level by level. The final trace expresses the result over the original
/// family; `m_star` and `per_m_results` describe the last step.
pub fn fold_family(
    family: &DerivationFamily,
    normalizations: &[(usize, usize)],
    degree_bound: u32,
    m_max: u32,
) -> Result<MinimalityCertificate> {
    if degree_bound < 1 {
        return Err(Error::DegreeBoundTooSmall {
            min: 1,
            got: degree_bound,
        });
    }
    for (index, member) in family.members().iter().enumerate() {
        if member.is_zero() {
            return Err(Error::ZeroDerivation { index });
        }
    }
    assert_eq!(
        normalizations.len(),
        family.len() - 1,
        "one variable pair needed per fold step"
    );
    let ring = family.ring();
    let mut combination = family.members()[0].clone();
    let mut coefficient_trace: Vec<(Polynomial, usize)> = vec![(Polynomial::one(ring), 0)];
    let mut m_star = 0;
    let mut per_m_results = Vec::new();

    for (step, &(x1_index, x2_index)) in normalizations.iter().enumerate() {
        let next = &family.members()[step + 1];
        let step_outcome = if is_normalized(&combination, next, x1_index, x2_index) {
            let cert = find_minimal_m(&combination, next, x1_index, x2_index, degree_bound, m_max)
                .map_err(|e| match e {
                    Error::NoMinimalM { m_max, degree_bound } => Error::FoldFailed {
                        step,
                        detail: format!(
                            "no exponent up to {m_max} certified at degree {degree_bound}"
                        ),
                    },
                    other => other,
                })?;
            let m = cert.m_star;
            StepOutcome {
                a: Polynomial::variable(ring, x1_index).pow(m),
                b: Polynomial::variable(ring, x2_index).pow(m),
                combination: cert.combination,
                m_star: m,
                per_m_results: cert.per_m_results,
            }
        } else {
            fallback_step(
                &combination,
                next,
                x1_index,
                x2_index,
                degree_bound,
                m_max,
                step,
            )?
        };
        for (coefficient, _) in &mut coefficient_trace {
            *coefficient = &*coefficient * &step_outcome.a;
        }
        coefficient_trace.push((step_outcome.b, step + 1));
        combination = step_outcome.combination;
        m_star = step_outcome.m_star;
        per_m_results = step_outcome.per_m_results;
    }

    Ok(MinimalityCertificate {
        m_star,
        degree_bound,
        per_m_results,
        combination,
        coefficient_trace,
    })
}

struct StepOutcome {
    a: Polynomial,
    b: Polynomial,
    combination: Derivation,
    m_star: u32,
    per_m_results: Vec<(u32, bool)>,
}

/// Searches coefficient pairs (x₁^a, x₂^b), grouped into levels by
/// max(a, b), in lexicographic (a, b) order within a level. An entry
/// (m, true) in the trace means some pair at level m certified.
fn fallback_step(
    current: &Derivation,
    next: &Derivation,
    x1_index: usize,
    x2_index: usize,
    degree_bound: u32,
    m_max: u32,
    step: usize,
) -> Result<StepOutcome> {
    let ring = current.ring();
    let pair = DerivationFamily::new(vec![current.clone(), next.clone()])?;
    let joint = kernel_basis(&pair, degree_bound);
    let mut best: Option<(Polynomial, Polynomial, Derivation, u32)> = None;
    let mut per_m_results = Vec::new();
    for m in 1..=m_max {
        let mut level_certified = false;
        for (a, b) in level_pairs(m) {
            let coeff_a = Polynomial::variable(ring, x1_index).pow(a);
            let coeff_b = Polynomial::variable(ring, x2_index).pow(b);
            let candidate = linear_combination(
                &[coeff_a.clone(), coeff_b.clone()],
                &[current.clone(), next.clone()],
            );
            if candidate.is_zero() {
                continue;
            }
            if certifies(&candidate, &joint, degree_bound) {
                level_certified = true;
                if best.is_none() {
                    best = Some((coeff_a, coeff_b, candidate, m));
                }
                break;
            }
        }
        per_m_results.push((m, level_certified));
    }
    let Some((a, b, combination, m_star)) = best else {
        return Err(Error::FoldFailed {
            step,
            detail: format!(
                "no coefficient pair up to level {m_max} certified at degree {degree_bound}"
            ),
        });
    };
    Ok(StepOutcome {
        a,
        b,
        combination,
        m_star,
        per_m_results,
    })
}

/// Pairs (a, b) with max(a, b) = m, in lexicographic order.
fn level_pairs(m: u32) -> impl Iterator<Item = (u32, u32)> {
    (0..m).map(move |a| (a, m)).chain((0..=m).map(move |b| (m, b)))
}
