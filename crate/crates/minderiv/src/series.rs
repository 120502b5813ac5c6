//! Truncated multivariate power series with explicit order tracking.
//!
//! A series of order N stores exactly its terms of total degree ≤ N; nothing
//! is claimed about higher degrees. Operations propagate the guaranteed
//! order: sums and products carry the minimum of the operand orders, a
//! partial derivative loses one order, integration in a variable gains one.
//! All congruences in this module are therefore machine-checked statements
//! about jets, not about full series.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg;
use crate::poly::{int, write_term, Monomial, Polynomial, Rational, Ring};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TruncSeries {
    ring: Ring,
    order: u32,
    terms: BTreeMap<Monomial, Rational>,
}

impl TruncSeries {
    pub fn zero(ring: &Ring, order: u32) -> Self {
        TruncSeries {
            ring: ring.clone(),
            order,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ring: &Ring, value: Rational, order: u32) -> Self {
        let mut out = TruncSeries::zero(ring, order);
        out.add_term(Monomial::unit(ring.len()), value);
        out
    }

    pub fn one(ring: &Ring, order: u32) -> Self {
        TruncSeries::constant(ring, Rational::one(), order)
    }

    pub fn variable(ring: &Ring, index: usize, order: u32) -> Self {
        let mut out = TruncSeries::zero(ring, order);
        out.add_term(Monomial::variable(ring.len(), index), Rational::one());
        out
    }

    /// The jet of a polynomial: terms above the order are dropped.
    pub fn from_polynomial(p: &Polynomial, order: u32) -> Self {
        let mut out = TruncSeries::zero(p.ring(), order);
        for (m, c) in p.terms() {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn from_terms(
        ring: &Ring,
        order: u32,
        terms: impl IntoIterator<Item = (Monomial, Rational)>,
    ) -> Self {
        let mut out = TruncSeries::zero(ring, order);
        for (m, c) in terms {
            out.add_term(m, c);
        }
        out
    }

    fn add_term(&mut self, monomial: Monomial, coefficient: Rational) {
        assert_eq!(monomial.len(), self.ring.len(), "monomial length mismatch");
        if coefficient.is_zero() || monomial.total_degree() > self.order {
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

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    /// True when every stored term vanishes, i.e. the series is 0 modulo
    /// total degree order+1.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, monomial: &Monomial) -> Rational {
        self.terms.get(monomial).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coefficient(&Monomial::unit(self.ring.len()))
    }

    /// Coefficient of the plain variable `index` in the linear part.
    pub fn linear_coefficient(&self, index: usize) -> Rational {
        self.coefficient(&Monomial::variable(self.ring.len(), index))
    }

    /// Smallest total degree carrying a nonzero term.
    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::total_degree).min()
    }

    /// The stored jet as a polynomial.
    pub fn to_polynomial(&self) -> Polynomial {
        Polynomial::from_terms(
            &self.ring,
            self.terms.iter().map(|(m, c)| (m.clone(), c.clone())),
        )
    }

    /// Lowers the guaranteed order, dropping terms above it.
    pub fn truncated(&self, order: u32) -> TruncSeries {
        assert!(order <= self.order, "cannot raise a series order by truncation");
        let mut out = TruncSeries::zero(&self.ring, order);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    /// The homogeneous part of the given total degree.
    pub fn homogeneous_part(&self, degree: u32) -> TruncSeries {
        assert!(degree <= self.order, "degree beyond the guaranteed order");
        let mut out = TruncSeries::zero(&self.ring, self.order);
        for (m, c) in &self.terms {
            if m.total_degree() == degree {
                out.add_term(m.clone(), c.clone());
            }
        }
        out
    }

    /// The weighted-homogeneous part of the given weighted degree.
    pub fn weighted_part(&self, weights: &crate::poly::WeightVector, degree: u64) -> TruncSeries {
        let mut out = TruncSeries::zero(&self.ring, self.order);
        for (m, c) in &self.terms {
            if m.weighted_degree(weights) == degree {
                out.add_term(m.clone(), c.clone());
            }
        }
        out
    }

    /// Whether the two series agree on every term of total degree ≤ upto.
    pub fn agrees_with(&self, other: &TruncSeries, upto: u32) -> bool {
        assert!(self.ring == other.ring, "ring mismatch");
        assert!(
            upto <= self.order && upto <= other.order,
            "comparison beyond a guaranteed order"
        );
        let truncate = |s: &TruncSeries| -> BTreeMap<Monomial, Rational> {
            s.terms
                .iter()
                .filter(|(m, _)| m.total_degree() <= upto)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect()
        };
        truncate(self) == truncate(other)
    }

    pub fn scaled(&self, factor: &Rational) -> TruncSeries {
        if factor.is_zero() {
            return TruncSeries::zero(&self.ring, self.order);
        }
        TruncSeries {
            ring: self.ring.clone(),
            order: self.order,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c * factor))
                .collect(),
        }
    }

    /// Formal partial derivative; the guaranteed order drops by one.
    pub fn partial_derivative(&self, index: usize) -> TruncSeries {
        assert!(index < self.ring.len(), "variable index {index} out of range");
        assert!(self.order >= 1, "cannot differentiate an order-0 series");
        let mut out = TruncSeries::zero(&self.ring, self.order - 1);
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

    /// Antiderivative in one variable with zero constant of integration; the
    /// guaranteed order rises by one.
    pub fn integrate_variable(&self, index: usize) -> TruncSeries {
        assert!(index < self.ring.len(), "variable index {index} out of range");
        let mut out = TruncSeries::zero(&self.ring, self.order + 1);
        for (m, c) in &self.terms {
            let mut e = m.exponents().to_vec();
            e[index] += 1;
            let raised = int(e[index] as i64);
            out.add_term(Monomial::new(e), c / raised);
        }
        out
    }

    /// Exact division by the variable `index`; fails when some term does not
    /// contain it. The guaranteed order drops by one.
    pub fn divide_by_variable(&self, index: usize) -> Result<TruncSeries> {
        assert!(index < self.ring.len(), "variable index {index} out of range");
        assert!(self.order >= 1, "cannot divide an order-0 series");
        let mut out = TruncSeries::zero(&self.ring, self.order - 1);
        for (m, c) in &self.terms {
            let Some(lower) = m.div_variable(index) else {
                return Err(Error::NotDivisible {
                    variable: self.ring.var_name(index).to_string(),
                    divisor: self.to_polynomial().to_string(),
                });
            };
            out.add_term(lower, c.clone());
        }
        Ok(out)
    }

    fn assert_same_ring(&self, other: &TruncSeries) {
        assert!(
            self.ring == other.ring,
            "ring mismatch: {} vs {}",
            self.ring,
            other.ring
        );
    }
}

impl std::ops::Add for &TruncSeries {
    type Output = TruncSeries;
    fn add(self, rhs: &TruncSeries) -> TruncSeries {
        self.assert_same_ring(rhs);
        let order = self.order.min(rhs.order);
        let mut out = self.truncated(order);
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl std::ops::Sub for &TruncSeries {
    type Output = TruncSeries;
    fn sub(self, rhs: &TruncSeries) -> TruncSeries {
        self.assert_same_ring(rhs);
        let order = self.order.min(rhs.order);
        let mut out = self.truncated(order);
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl std::ops::Neg for &TruncSeries {
    type Output = TruncSeries;
    fn neg(self) -> TruncSeries {
        self.scaled(&int(-1))
    }
}

impl std::ops::Mul for &TruncSeries {
    type Output = TruncSeries;
    fn mul(self, rhs: &TruncSeries) -> TruncSeries {
        self.assert_same_ring(rhs);
        let order = self.order.min(rhs.order);
        let mut out = TruncSeries::zero(&self.ring, order);
        for (ma, ca) in &self.terms {
            if ma.total_degree() > order {
                continue;
            }
            for (mb, cb) in &rhs.terms {
                if ma.total_degree() + mb.total_degree() > order {
                    continue;
                }
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl fmt::Display for TruncSeries {
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

/// Composition f(images), defined when every image has zero constant term.
/// The result order is the minimum of all operand orders.
pub fn substitute(f: &TruncSeries, images: &[TruncSeries]) -> Result<TruncSeries> {
    let ring = f.ring();
    assert_eq!(images.len(), ring.len(), "one image per variable required");
    let mut order = f.order();
    for (index, image) in images.iter().enumerate() {
        assert!(image.ring() == images[0].ring(), "image ring mismatch");
        if !image.constant_term().is_zero() {
            return Err(Error::NonzeroConstantTerm { index });
        }
        order = order.min(image.order());
    }
    let target_ring = images[0].ring().clone();

    // cache image powers per variable up to the largest exponent used
    let mut max_exp = vec![0u32; ring.len()];
    for (m, _) in f.terms() {
        for (j, &e) in m.exponents().iter().enumerate() {
            max_exp[j] = max_exp[j].max(e);
        }
    }
    let mut powers: Vec<Vec<TruncSeries>> = Vec::with_capacity(ring.len());
    for (j, image) in images.iter().enumerate() {
        let mut col = vec![TruncSeries::one(&target_ring, order)];
        for e in 1..=max_exp[j] {
            let next = &col[(e - 1) as usize] * &image.truncated(order.min(image.order()));
            col.push(next);
        }
        powers.push(col);
    }

    let mut out = TruncSeries::zero(&target_ring, order);
    for (m, c) in f.terms() {
        let mut term = TruncSeries::constant(&target_ring, c.clone(), order);
        for (j, &e) in m.exponents().iter().enumerate() {
            if e > 0 {
                term = &term * &powers[j][e as usize];
            }
        }
        out = &out + &term;
    }
    Ok(out)
}

/// A system of parameters: n series with zero constant term whose linear
/// parts form an invertible matrix. Represents an invertible formal
/// coordinate change.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ParamSystem {
    components: Vec<TruncSeries>,
    order: u32,
}

impl ParamSystem {
    /// Validates the components: one per variable, zero constant terms,
    /// invertible linear part. The system order is the minimum component
    /// order.
    pub fn new(components: Vec<TruncSeries>) -> Result<Self> {
        assert!(!components.is_empty(), "empty parameter system");
        let ring = components[0].ring().clone();
        assert_eq!(
            components.len(),
            ring.len(),
            "one component per variable required"
        );
        for (index, c) in components.iter().enumerate() {
            assert!(c.ring() == &ring, "component ring mismatch");
            if !c.constant_term().is_zero() {
                return Err(Error::NonzeroConstantTerm { index });
            }
        }
        let order = components.iter().map(TruncSeries::order).min().unwrap();
        let components: Vec<TruncSeries> = components
            .iter()
            .map(|c| c.truncated(order))
            .collect();
        let matrix = linear_matrix(&components);
        if linalg::invert(&matrix).is_none() {
            return Err(Error::SingularLinearPart);
        }
        Ok(ParamSystem { components, order })
    }

    pub fn identity(ring: &Ring, order: u32) -> Self {
        ParamSystem::new(
            (0..ring.len())
                .map(|i| TruncSeries::variable(ring, i, order))
                .collect(),
        )
        .expect("identity system is valid")
    }

    pub fn ring(&self) -> &Ring {
        self.components[0].ring()
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn components(&self) -> &[TruncSeries] {
        &self.components
    }

    pub fn component(&self, index: usize) -> &TruncSeries {
        &self.components[index]
    }

    /// Row i, column j: coefficient of variable j in component i.
    pub fn linear_part(&self) -> Vec<Vec<Rational>> {
        linear_matrix(&self.components)
    }

    /// Composition self ∘ other: each component evaluated on the other
    /// system's components.
    pub fn compose(&self, other: &ParamSystem) -> Result<ParamSystem> {
        let composed: Result<Vec<TruncSeries>> = self
            .components
            .iter()
            .map(|c| substitute(c, other.components()))
            .collect();
        ParamSystem::new(composed?)
    }

    /// Whether every component equals its coordinate variable up to the
    /// given degree.
    pub fn is_identity_to(&self, upto: u32) -> bool {
        let ring = self.ring();
        self.components.iter().enumerate().all(|(i, c)| {
            c.agrees_with(&TruncSeries::variable(ring, i, c.order()), upto.min(c.order()))
        })
    }
}

fn linear_matrix(components: &[TruncSeries]) -> Vec<Vec<Rational>> {
    let n = components.len();
    (0..n)
        .map(|i| (0..n).map(|j| components[i].linear_coefficient(j)).collect())
        .collect()
}

/// Inverse coordinate change: T with S∘T ≡ identity ≡ T∘S modulo the system
/// order, computed degree by degree from the inverted linear part.
pub fn invert_param_system(s: &ParamSystem) -> Result<ParamSystem> {
    let ring = s.ring().clone();
    let order = s.order();
    let n = ring.len();
    let l_inv = linalg::invert(&s.linear_part()).ok_or(Error::SingularLinearPart)?;

    let apply_l_inv = |values: &[TruncSeries]| -> Vec<TruncSeries> {
        (0..n)
            .map(|i| {
                let mut acc = TruncSeries::zero(&ring, order);
                for (j, v) in values.iter().enumerate() {
                    acc = &acc + &v.scaled(&l_inv[i][j]);
                }
                acc
            })
            .collect()
    };

    let identity: Vec<TruncSeries> = (0..n)
        .map(|i| TruncSeries::variable(&ring, i, order))
        .collect();
    // start from the inverted linear part; each pass fixes one more degree
    let mut t = apply_l_inv(&identity);
    for _ in 1..order {
        let mut errors = Vec::with_capacity(n);
        let mut clean = true;
        for (i, component) in s.components().iter().enumerate() {
            let e = &substitute(component, &t)? - &identity[i];
            clean = clean && e.is_zero();
            errors.push(e);
        }
        if clean {
            break;
        }
        let correction = apply_l_inv(&errors);
        for (ti, ci) in t.iter_mut().zip(&correction) {
            *ti = &*ti - ci;
        }
    }
    ParamSystem::new(t)
}

/// A derivation with truncated-series coefficients, one per variable.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SeriesDerivation {
    coefficients: Vec<TruncSeries>,
    order: u32,
}

impl SeriesDerivation {
    /// Coefficients are truncated to their common minimum order.
    pub fn new(coefficients: Vec<TruncSeries>) -> Self {
        assert!(!coefficients.is_empty(), "empty coefficient list");
        let ring = coefficients[0].ring().clone();
        assert_eq!(
            coefficients.len(),
            ring.len(),
            "one coefficient per variable required"
        );
        for c in &coefficients {
            assert!(c.ring() == &ring, "coefficient ring mismatch");
        }
        let order = coefficients.iter().map(TruncSeries::order).min().unwrap();
        SeriesDerivation {
            coefficients: coefficients.iter().map(|c| c.truncated(order)).collect(),
            order,
        }
    }

    pub fn partial(ring: &Ring, index: usize, order: u32) -> Self {
        let mut coefficients = vec![TruncSeries::zero(ring, order); ring.len()];
        coefficients[index] = TruncSeries::one(ring, order);
        SeriesDerivation::new(coefficients)
    }

    /// Series coefficients of a polynomial-coefficient derivation.
    pub fn from_derivation(d: &crate::deriv::Derivation, order: u32) -> Self {
        SeriesDerivation::new(
            d.coefficients()
                .iter()
                .map(|c| TruncSeries::from_polynomial(c, order))
                .collect(),
        )
    }

    pub fn ring(&self) -> &Ring {
        self.coefficients[0].ring()
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coefficients(&self) -> &[TruncSeries] {
        &self.coefficients
    }

    pub fn coefficient(&self, index: usize) -> &TruncSeries {
        &self.coefficients[index]
    }

    /// Σᵢ aᵢ·∂f/∂tᵢ. The guaranteed order is min(d order, f order − 1).
    pub fn apply(&self, f: &TruncSeries) -> TruncSeries {
        assert!(f.ring() == self.ring(), "ring mismatch in apply");
        assert!(f.order() >= 1, "cannot differentiate an order-0 series");
        let order = self.order.min(f.order() - 1);
        let mut out = TruncSeries::zero(self.ring(), order);
        for (i, a) in self.coefficients.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            out = &out + &(a * &f.partial_derivative(i));
        }
        out
    }
}
