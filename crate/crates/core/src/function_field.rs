//! The contract shared by the genus-0 and genus-1 backends. The sequence
//! constructions in [`crate::construct`] are written once against it.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use crate::divisor::Divisor;
use crate::error::Result;
use crate::gf::{FieldElement, FieldSpec};

/// Truncated Laurent expansion `Σ a_k t^k` at a place of degree `mu`.
///
/// Each coefficient `a_k` is a residue-field element written as `mu` digits
/// over `F_q` (for a finite place of `F_q(x)`: the coefficients of
/// `1, x, ..., x^{mu-1}`). `start` is the valuation when some coefficient up to
/// `upto` is nonzero, and `upto + 1` otherwise. Coefficients below `start` are
/// zero.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Expansion {
    pub mu: usize,
    pub start: i64,
    pub upto: i64,
    pub digits: Vec<FieldElement>,
}

impl Expansion {
    pub fn new(mu: usize, mut start: i64, upto: i64, mut digits: Vec<FieldElement>) -> Self {
        debug_assert_eq!(digits.len() as i64, (upto - start + 1).max(0) * mu as i64);
        // normalise: strip leading zero coefficients
        while digits.len() >= mu && mu > 0 && digits[..mu].iter().all(|d| d.is_zero()) {
            digits.drain(..mu);
            start += 1;
        }
        if digits.is_empty() {
            start = upto + 1;
        }
        Expansion { mu, start, upto, digits }
    }

    /// Valuation, if visible within the window.
    pub fn valuation(&self) -> Option<i64> {
        (!self.digits.is_empty()).then_some(self.start)
    }

    /// Digits of `a_k`, for any `k <= upto`.
    pub fn coeff(&self, k: i64) -> Vec<FieldElement> {
        assert!(k <= self.upto, "coefficient {k} beyond expansion window {}", self.upto);
        if k < self.start {
            return vec![FieldElement::ZERO; self.mu];
        }
        let i = (k - self.start) as usize * self.mu;
        self.digits[i..i + self.mu].to_vec()
    }

    /// Concatenated digits of `a_from, ..., a_to`.
    pub fn window(&self, from: i64, to: i64) -> Vec<FieldElement> {
        (from..=to).flat_map(|k| self.coeff(k)).collect()
    }
}

pub trait FunctionField {
    type Elem: Clone + PartialEq + Debug + Display;
    type Place: Clone + Ord + Hash + Debug + Display;

    fn field(&self) -> &FieldSpec;
    fn genus(&self) -> usize;
    fn place_degree(&self, p: &Self::Place) -> usize;
    /// All degree-1 places, in the backend's canonical order.
    fn rational_places(&self) -> Vec<Self::Place>;
    fn parse_place(&self, s: &str) -> Result<Self::Place>;

    /// An `F_q`-basis of `L(D)`, in the backend's canonical order.
    fn rr_basis(&self, d: &Divisor<Self::Place>) -> Vec<Self::Elem>;
    /// `None` for the zero element.
    fn valuation(&self, f: &Self::Elem, p: &Self::Place) -> Option<i64>;
    /// Coefficients of `f` in the backend's local parameter at `p`, up to and
    /// including index `upto`.
    fn expansion(&self, f: &Self::Elem, p: &Self::Place, upto: i64) -> Result<Expansion>;
    fn local_parameter(&self, p: &Self::Place) -> Self::Elem;

    fn constant(&self, c: FieldElement) -> Self::Elem;
    /// Named generators accepted by the expression parser (`x`, and `y` on curves).
    fn variable(&self, name: &str) -> Option<Self::Elem>;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn scale(&self, c: FieldElement, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    fn zero(&self) -> Self::Elem {
        self.constant(FieldElement::ZERO)
    }

    fn one(&self) -> Self::Elem {
        self.constant(self.field().one())
    }

    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        self.scale(self.field().neg(self.field().one()), a)
    }

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn pow(&self, a: &Self::Elem, n: i64) -> Result<Self::Elem> {
        let base = if n < 0 { self.inv(a)? } else { a.clone() };
        let mut acc = self.one();
        for _ in 0..n.unsigned_abs() {
            acc = self.mul(&acc, &base);
        }
        Ok(acc)
    }

    fn divisor_degree(&self, d: &Divisor<Self::Place>) -> i64 {
        d.degree(|p| self.place_degree(p))
    }

    /// `Σ c_i f_i`.
    fn combine(&self, coeffs: &[FieldElement], elems: &[Self::Elem]) -> Self::Elem {
        coeffs
            .iter()
            .zip(elems)
            .filter(|(c, _)| !c.is_zero())
            .fold(self.zero(), |acc, (&c, f)| self.add(&acc, &self.scale(c, f)))
    }
}
