//! Sparse multivariate polynomials over exact rationals.
//!
//! Values are immutable after construction and every operation is pure.
//! Terms are kept in a `BTreeMap` keyed by graded-lexicographic monomial
//! order, so iteration, printing and serialized output are canonical.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational coefficient. Always reduced, denominator positive, zero is 0/1.
pub type Rational = num_rational::BigRational;

/// Shorthand for a rational from an integer pair.
pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Shorthand for an integer rational.
pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Exponent vector of a monomial; length always equals the ring's variable count.
///
/// `Ord` is graded lexicographic: total degree first, then lexicographic on
/// exponents with earlier variables dominant.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    /// The constant monomial (all exponents zero).
    pub fn unit(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    /// The monomial `x_i`.
    pub fn variable(nvars: usize, index: usize) -> Self {
        assert!(index < nvars, "variable index {index} out of range");
        let mut e = vec![0; nvars];
        e[index] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn exponent(&self, index: usize) -> u32 {
        self.0[index]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn weighted_degree(&self, weights: &WeightVector) -> u64 {
        assert_eq!(self.0.len(), weights.0.len(), "weight vector length mismatch");
        self.0
            .iter()
            .zip(&weights.0)
            .map(|(&e, &w)| e as u64 * w as u64)
            .sum()
    }

    /// Product of monomials: exponent-wise sum.
    pub fn mul(&self, other: &Monomial) -> Monomial {
        assert_eq!(self.0.len(), other.0.len(), "monomial length mismatch");
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Divides out one power of `x_index`, or `None` if the exponent is zero.
    pub fn div_variable(&self, index: usize) -> Option<Monomial> {
        if self.0[index] == 0 {
            return None;
        }
        let mut e = self.0.clone();
        e[index] -= 1;
        Some(Monomial(e))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Per-variable nonnegative weights for graded decompositions.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WeightVector(Vec<u32>);

impl WeightVector {
    pub fn new(weights: Vec<u32>) -> Self {
        WeightVector(weights)
    }

    /// Total degree: every variable weighted 1.
    pub fn total(nvars: usize) -> Self {
        WeightVector(vec![1; nvars])
    }

    /// Weight 1 on the first two variables, 0 elsewhere.
    pub fn first_two(nvars: usize) -> Self {
        let mut w = vec![0; nvars];
        for entry in w.iter_mut().take(2) {
            *entry = 1;
        }
        WeightVector(w)
    }

    pub fn weights(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// An ordered set of variable names. Cheap to clone; shared by every value
/// built over it.
#[derive(Clone, Debug)]
pub struct Ring {
    vars: Arc<Vec<String>>,
}

impl Ring {
    /// Builds a ring, validating that variable names are distinct,
    /// identifier-shaped, and at least one is present.
    pub fn try_new<S: Into<String>>(vars: impl IntoIterator<Item = S>) -> Result<Self> {
        let vars: Vec<String> = vars.into_iter().map(Into::into).collect();
        if vars.is_empty() {
            return Err(Error::InvalidRing {
                detail: "no variables declared".into(),
            });
        }
        for name in &vars {
            let mut chars = name.chars();
            let head_ok = chars
                .next()
                .map(|c| c.is_ascii_alphabetic() || c == '_')
                .unwrap_or(false);
            if !head_ok || !chars.all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(Error::InvalidRing {
                    detail: format!("invalid variable name `{name}`"),
                });
            }
        }
        for (i, name) in vars.iter().enumerate() {
            if vars[..i].contains(name) {
                return Err(Error::InvalidRing {
                    detail: format!("duplicate variable `{name}`"),
                });
            }
        }
        Ok(Ring { vars: Arc::new(vars) })
    }

    /// Like [`Ring::try_new`] but panics on invalid names. Intended for
    /// literals in code and tests.
    pub fn new<S: Into<String>>(vars: impl IntoIterator<Item = S>) -> Self {
        Ring::try_new(vars).expect("invalid ring")
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn var_name(&self, index: usize) -> &str {
        &self.vars[index]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    /// All monomials of total degree at most `degree`, graded-lex ascending.
    pub fn monomials_up_to(&self, degree: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut current = vec![0u32; self.len()];
        fill_monomials(&mut out, &mut current, 0, degree);
        out.sort();
        out
    }
}

fn fill_monomials(out: &mut Vec<Monomial>, current: &mut Vec<u32>, var: usize, budget: u32) {
    if var == current.len() {
        out.push(Monomial::new(current.clone()));
        return;
    }
    for e in 0..=budget {
        current[var] = e;
        fill_monomials(out, current, var + 1, budget - e);
    }
    current[var] = 0;
}

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.vars, &other.vars) || self.vars == other.vars
    }
}

impl Eq for Ring {}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q[{}]", self.vars.join(", "))
    }
}

/// Sparse multivariate polynomial over the rationals.
///
/// No zero coefficients are stored; two polynomials are equal iff their rings
/// and term maps are equal.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Polynomial {
    ring: Ring,
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero(ring: &Ring) -> Self {
        Polynomial {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ring: &Ring) -> Self {
        Polynomial::constant(ring, Rational::one())
    }

    pub fn constant(ring: &Ring, value: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !value.is_zero() {
            terms.insert(Monomial::unit(ring.len()), value);
        }
        Polynomial { ring: ring.clone(), terms }
    }

    /// The polynomial `x_index`.
    pub fn variable(ring: &Ring, index: usize) -> Self {
        assert!(index < ring.len(), "variable index {index} out of range");
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::variable(ring.len(), index), Rational::one());
        Polynomial { ring: ring.clone(), terms }
    }

    /// The monomial `coefficient * x^exponents`.
    pub fn monomial(ring: &Ring, monomial: Monomial, coefficient: Rational) -> Self {
        assert_eq!(monomial.len(), ring.len(), "monomial length mismatch");
        let mut terms = BTreeMap::new();
        if !coefficient.is_zero() {
            terms.insert(monomial, coefficient);
        }
        Polynomial { ring: ring.clone(), terms }
    }

    pub fn from_terms(ring: &Ring, terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut out = Polynomial::zero(ring);
        for (m, c) in terms {
            out.add_term(m, c);
        }
        out
    }

    fn add_term(&mut self, monomial: Monomial, coefficient: Rational) {
        assert_eq!(monomial.len(), self.ring.len(), "monomial length mismatch");
        if coefficient.is_zero() {
            return;
        }
        match self.terms.entry(monomial) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(coefficient);
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                *slot.get_mut() += coefficient;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    /// Terms in graded-lex ascending order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_unit)
    }

    pub fn constant_term(&self) -> Rational {
        self.terms
            .get(&Monomial::unit(self.ring.len()))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn coefficient(&self, monomial: &Monomial) -> Rational {
        self.terms.get(monomial).cloned().unwrap_or_else(Rational::zero)
    }

    /// Total degree, or `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::total_degree).max()
    }

    /// Largest monomial in graded-lex order, or `None` for zero.
    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.keys().next_back()
    }

    pub fn leading_coefficient(&self) -> Option<&Rational> {
        self.terms.values().next_back()
    }

    pub fn scaled(&self, factor: &Rational) -> Polynomial {
        if factor.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c * factor))
                .collect(),
        }
    }

    pub fn pow(&self, exponent: u32) -> Polynomial {
        let mut acc = Polynomial::one(&self.ring);
        for _ in 0..exponent {
            acc = &acc * self;
        }
        acc
    }

    /// Formal partial derivative with respect to variable `index`.
    pub fn partial_derivative(&self, index: usize) -> Polynomial {
        assert!(index < self.ring.len(), "variable index {index} out of range");
        let mut out = Polynomial::zero(&self.ring);
        for (m, c) in &self.terms {
            let e = m.exponent(index);
            if e == 0 {
                continue;
            }
            let lower = m.div_variable(index).expect("exponent checked nonzero");
            out.add_term(lower, c * int(e as i64));
        }
        out
    }

    /// Splits into weighted-homogeneous parts, sorted by ascending degree.
    /// The parts sum to the input; the zero polynomial has no parts.
    pub fn homogeneous_decomposition(&self, weights: &WeightVector) -> Vec<(u64, Polynomial)> {
        assert_eq!(weights.len(), self.ring.len(), "weight vector length mismatch");
        let mut parts: BTreeMap<u64, Polynomial> = BTreeMap::new();
        for (m, c) in &self.terms {
            parts
                .entry(m.weighted_degree(weights))
                .or_insert_with(|| Polynomial::zero(&self.ring))
                .add_term(m.clone(), c.clone());
        }
        parts.into_iter().collect()
    }

    /// The weighted-homogeneous part of the given degree.
    pub fn homogeneous_part(&self, weights: &WeightVector, degree: u64) -> Polynomial {
        let mut out = Polynomial::zero(&self.ring);
        for (m, c) in &self.terms {
            if m.weighted_degree(weights) == degree {
                out.add_term(m.clone(), c.clone());
            }
        }
        out
    }

    fn assert_same_ring(&self, other: &Polynomial) {
        assert!(
            self.ring == other.ring,
            "ring mismatch: {} vs {}",
            self.ring,
            other.ring
        );
    }
}

impl std::ops::Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.assert_same_ring(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl std::ops::Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.assert_same_ring(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl std::ops::Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

impl std::ops::Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.assert_same_ring(rhs);
        let mut out = Polynomial::zero(&self.ring);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            if i == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            write_term(f, &self.ring, m, &c.abs())?;
        }
        Ok(())
    }
}

pub(crate) fn write_term(
    f: &mut fmt::Formatter<'_>,
    ring: &Ring,
    monomial: &Monomial,
    abs_coeff: &Rational,
) -> fmt::Result {
    if monomial.is_unit() {
        return write!(f, "{abs_coeff}");
    }
    let mut lead = true;
    if !abs_coeff.is_one() {
        write!(f, "{abs_coeff}")?;
        lead = false;
    }
    for (i, &e) in monomial.exponents().iter().enumerate() {
        if e == 0 {
            continue;
        }
        if !lead {
            write!(f, "*")?;
        }
        lead = false;
        write!(f, "{}", ring.var_name(i))?;
        if e > 1 {
            write!(f, "^{e}")?;
        }
    }
    Ok(())
}
