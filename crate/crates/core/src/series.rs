//! Truncated Laurent series in one local parameter with explicit absolute
//! precision, in the style of p-adic arithmetic: `Σ c_k t^k + O(t^prec)`.

use crate::error::{Error, Result};
use crate::gf::{FieldElement, FieldSpec};
use crate::poly::Poly;

/// `coeffs[i]` is the coefficient of `t^(start+i)`. Coefficients between
/// `start + coeffs.len()` and `prec` are zero. If nonempty, `coeffs[0] != 0`;
/// a series that is zero to its precision has `start == prec`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Laurent {
    start: i64,
    coeffs: Vec<FieldElement>,
    prec: i64,
}

impl Laurent {
    fn normalized(mut start: i64, mut coeffs: Vec<FieldElement>, prec: i64) -> Self {
        let keep = (prec - start).max(0) as usize;
        coeffs.truncate(keep);
        let lead = coeffs.iter().position(|c| !c.is_zero());
        match lead {
            None => Laurent { start: prec, coeffs: Vec::new(), prec },
            Some(i) => {
                coeffs.drain(..i);
                start += i as i64;
                while coeffs.last().is_some_and(|c| c.is_zero()) {
                    coeffs.pop();
                }
                Laurent { start, coeffs, prec }
            }
        }
    }

    /// `Σ c_i t^(start+i) + O(t^prec)`.
    pub fn new(start: i64, coeffs: Vec<FieldElement>, prec: i64) -> Self {
        Self::normalized(start, coeffs, prec)
    }

    pub fn constant(c: FieldElement, prec: i64) -> Self {
        Self::normalized(0, vec![c], prec)
    }

    /// The polynomial `p(t)` known to precision `prec`.
    pub fn from_poly(p: &Poly, prec: i64) -> Self {
        Self::normalized(0, p.coeffs().to_vec(), prec)
    }

    pub fn precision(&self) -> i64 {
        self.prec
    }

    pub fn valuation(&self) -> Option<i64> {
        (!self.coeffs.is_empty()).then_some(self.start)
    }

    /// Lower bound on the valuation: exact if nonzero, `prec` otherwise.
    fn val_bound(&self) -> i64 {
        self.start
    }

    pub fn get(&self, k: i64) -> FieldElement {
        debug_assert!(k < self.prec);
        if k < self.start {
            return FieldElement::ZERO;
        }
        self.coeffs.get((k - self.start) as usize).copied().unwrap_or_default()
    }

    pub fn add(&self, o: &Laurent, k: &FieldSpec) -> Laurent {
        let prec = self.prec.min(o.prec);
        let start = self.start.min(o.start).min(prec);
        let v = (start..prec).map(|i| k.add(self.get(i), o.get(i))).collect();
        Self::normalized(start, v, prec)
    }

    pub fn scale(&self, c: FieldElement, k: &FieldSpec) -> Laurent {
        Self::normalized(self.start, self.coeffs.iter().map(|&x| k.mul(x, c)).collect(), self.prec)
    }

    pub fn neg(&self, k: &FieldSpec) -> Laurent {
        self.scale(k.neg(k.one()), k)
    }

    pub fn sub(&self, o: &Laurent, k: &FieldSpec) -> Laurent {
        self.add(&o.neg(k), k)
    }

    pub fn mul(&self, o: &Laurent, k: &FieldSpec) -> Laurent {
        let start = self.val_bound() + o.val_bound();
        let prec = (self.prec + o.val_bound()).min(o.prec + self.val_bound());
        let len = (prec - start).max(0) as usize;
        let mut v = vec![FieldElement::ZERO; len];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if i >= len {
                break;
            }
            for (j, &b) in o.coeffs.iter().enumerate().take(len - i) {
                v[i + j] = k.add(v[i + j], k.mul(a, b));
            }
        }
        Self::normalized(start, v, prec)
    }

    /// Multiplicative inverse; the series must be visibly nonzero.
    pub fn inv(&self, k: &FieldSpec) -> Result<Laurent> {
        if self.coeffs.is_empty() {
            return Err(Error::DivisionByZero);
        }
        let rel = (self.prec - self.start) as usize;
        let c0inv = k.inv_nz(self.coeffs[0]);
        let c = |i: usize| self.coeffs.get(i).copied().unwrap_or_default();
        let mut b: Vec<FieldElement> = Vec::with_capacity(rel);
        for n in 0..rel {
            if n == 0 {
                b.push(c0inv);
                continue;
            }
            let mut acc = FieldElement::ZERO;
            for i in 1..=n.min(self.coeffs.len().saturating_sub(1)) {
                acc = k.add(acc, k.mul(c(i), b[n - i]));
            }
            b.push(k.neg(k.mul(c0inv, acc)));
        }
        Ok(Self::normalized(-self.start, b, -self.start + rel as i64))
    }

    pub fn div(&self, o: &Laurent, k: &FieldSpec) -> Result<Laurent> {
        Ok(self.mul(&o.inv(k)?, k))
    }

    /// `p(self)` by Horner's rule.
    pub fn eval_poly(p: &Poly, x: &Laurent, prec: i64, k: &FieldSpec) -> Laurent {
        let mut acc = Laurent::constant(FieldElement::ZERO, prec);
        for &c in p.coeffs().iter().rev() {
            acc = acc.mul(x, k).add(&Laurent::constant(c, prec), k);
        }
        acc
    }

    /// Truncates to a lower precision.
    pub fn truncate(&self, prec: i64) -> Laurent {
        Self::normalized(self.start, self.coeffs.clone(), prec.min(self.prec))
    }
}
