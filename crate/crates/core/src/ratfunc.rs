//! Genus-0 backend: the rational function field `F_q(x)`.

use std::fmt;

use crate::divisor::Divisor;
use crate::error::{Error, Result};
use crate::function_field::{Expansion, FunctionField};
use crate::gf::{FieldElement, FieldSpec};
use crate::poly::{Poly, PolyIndices};

/// `num/den` in lowest terms with monic `den`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly, k: &FieldSpec) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RatFunc { num, den: Poly::one(k) });
        }
        let g = num.gcd(&den, k);
        let num = num.div_exact(&g, k)?;
        let den = den.div_exact(&g, k)?;
        let c = k.inv_nz(den.lead());
        Ok(RatFunc { num: num.scale(c, k), den: den.scale(c, k) })
    }

    pub fn poly(p: Poly, k: &FieldSpec) -> Self {
        RatFunc { num: p, den: Poly::one(k) }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, o: &RatFunc, k: &FieldSpec) -> RatFunc {
        let num = self.num.mul(&o.den, k).add(&o.num.mul(&self.den, k), k);
        RatFunc::new(num, self.den.mul(&o.den, k), k).expect("nonzero denominator")
    }

    pub fn mul(&self, o: &RatFunc, k: &FieldSpec) -> RatFunc {
        RatFunc::new(self.num.mul(&o.num, k), self.den.mul(&o.den, k), k).expect("nonzero denominator")
    }

    pub fn scale(&self, c: FieldElement, k: &FieldSpec) -> RatFunc {
        if c.is_zero() {
            return RatFunc::poly(Poly::zero(), k);
        }
        RatFunc { num: self.num.scale(c, k), den: self.den.clone() }
    }

    pub fn inv(&self, k: &FieldSpec) -> Result<RatFunc> {
        RatFunc::new(self.den.clone(), self.num.clone(), k)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.degree() == Some(0) {
            write!(f, "{}", self.num.pretty())
        } else {
            write!(f, "({})/({})", self.num.pretty(), self.den.pretty())
        }
    }
}

/// A place of `F_q(x)`: the infinite place, or the zero of a monic irreducible.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum PlaceG0 {
    Infinite,
    Finite(Poly),
}

impl PlaceG0 {
    pub fn degree(&self) -> usize {
        match self {
            PlaceG0::Infinite => 1,
            PlaceG0::Finite(p) => p.degree().unwrap_or(0),
        }
    }
}

/// `inf` or `poly:<c0,c1,...,1>`.
impl fmt::Display for PlaceG0 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlaceG0::Infinite => write!(f, "inf"),
            PlaceG0::Finite(p) => write!(f, "poly:{p}"),
        }
    }
}

pub type DivisorG0 = Divisor<PlaceG0>;

#[derive(Clone, Debug)]
pub struct RationalFunctionField {
    k: FieldSpec,
}

impl RationalFunctionField {
    pub fn new(k: FieldSpec) -> Self {
        RationalFunctionField { k }
    }

    /// Validates a finite place polynomial.
    pub fn finite_place(&self, p: Poly) -> Result<PlaceG0> {
        if !p.is_monic(&self.k) || !p.is_irreducible(&self.k) {
            return Err(Error::InvalidPlace(format!("{} is not monic irreducible", p.pretty())));
        }
        Ok(PlaceG0::Finite(p))
    }

    /// Places of degree `mu` in canonical order (for `mu = 1`, the infinite
    /// place comes first).
    pub fn places_of_degree(&self, mu: usize) -> Vec<PlaceG0> {
        let mut out = Vec::new();
        if mu == 1 {
            out.push(PlaceG0::Infinite);
        }
        out.extend(Poly::monic_of_degree(&self.k, mu).filter(|p| p.is_irreducible(&self.k)).map(PlaceG0::Finite));
        out
    }
}

/// Power series `u/w` with `w(0) != 0`, coefficients `0..n`.
fn series_quotient(u: &Poly, w: &Poly, n: usize, k: &FieldSpec) -> Vec<FieldElement> {
    let inv0 = k.inv_nz(w.coeff(0));
    let mut out: Vec<FieldElement> = Vec::with_capacity(n);
    for i in 0..n {
        let mut acc = u.coeff(i);
        for j in 1..=i.min(w.coeffs().len().saturating_sub(1)) {
            acc = k.sub(acc, k.mul(w.coeff(j), out[i - j]));
        }
        out.push(k.mul(acc, inv0));
    }
    out
}

impl FunctionField for RationalFunctionField {
    type Elem = RatFunc;
    type Place = PlaceG0;

    fn field(&self) -> &FieldSpec {
        &self.k
    }

    fn genus(&self) -> usize {
        0
    }

    fn place_degree(&self, p: &PlaceG0) -> usize {
        p.degree()
    }

    fn rational_places(&self) -> Vec<PlaceG0> {
        self.places_of_degree(1)
    }

    fn parse_place(&self, s: &str) -> Result<PlaceG0> {
        let s = s.trim();
        if s == "inf" {
            return Ok(PlaceG0::Infinite);
        }
        if let Some(rest) = s.strip_prefix("poly:") {
            let idx: PolyIndices = rest.parse()?;
            return self.finite_place(Poly::from_indices(&self.k, &idx.0)?);
        }
        // a polynomial expression in x, e.g. `x+1`
        let f = crate::expr::parse_element(self, s)?;
        if f.den().degree() != Some(0) {
            return Err(Error::InvalidPlace(format!("{s:?} is not a polynomial")));
        }
        self.finite_place(f.num().clone())
    }

    fn rr_basis(&self, d: &DivisorG0) -> Vec<RatFunc> {
        let k = &self.k;
        let mut den = Poly::one(k);
        let mut must_divide = Poly::one(k);
        let mut n_inf = 0;
        for (p, n) in d.iter() {
            match p {
                PlaceG0::Infinite => n_inf = n,
                PlaceG0::Finite(f) if n > 0 => den = den.mul(&f.pow(n as u64, k), k),
                PlaceG0::Finite(f) => must_divide = must_divide.mul(&f.pow((-n) as u64, k), k),
            }
        }
        // f = u/den with must_divide | u and deg u <= deg den + n_inf
        let top = den.deg() + n_inf - must_divide.deg();
        (0..=top)
            .map(|i| {
                let u = must_divide.shift(i as usize, k);
                RatFunc::new(u, den.clone(), k).expect("nonzero denominator")
            })
            .collect()
    }

    fn valuation(&self, f: &RatFunc, p: &PlaceG0) -> Option<i64> {
        if f.is_zero() {
            return None;
        }
        Some(match p {
            PlaceG0::Infinite => f.den.deg() - f.num.deg(),
            PlaceG0::Finite(q) => f.num.multiplicity(q, &self.k) as i64 - f.den.multiplicity(q, &self.k) as i64,
        })
    }

    fn expansion(&self, f: &RatFunc, p: &PlaceG0, upto: i64) -> Result<Expansion> {
        let k = &self.k;
        let mu = p.degree();
        let Some(v) = self.valuation(f, p) else {
            return Ok(Expansion::new(mu, upto + 1, upto, Vec::new()));
        };
        if v > upto {
            return Ok(Expansion::new(mu, upto + 1, upto, Vec::new()));
        }
        let n = (upto - v + 1) as usize;
        let digits = match p {
            PlaceG0::Infinite => {
                // t = 1/x: f = t^v * rev(num)/rev(den)
                series_quotient(&f.num.reversed(), &f.den.reversed(), n, k)
            }
            PlaceG0::Finite(q) => {
                let mut u = f.num.clone();
                let mut w = f.den.clone();
                if v > 0 {
                    u = u.div_exact(&q.pow(v as u64, k), k)?;
                } else if v < 0 {
                    w = w.div_exact(&q.pow((-v) as u64, k), k)?;
                }
                let w_inv = w.inv_mod(q, k)?;
                let mut digits = Vec::with_capacity(n * mu);
                for _ in 0..n {
                    let a = u.mul_mod(&w_inv, q, k);
                    digits.extend((0..mu).map(|i| a.coeff(i)));
                    u = u.sub(&a.mul(&w, k), k).div_exact(q, k)?;
                }
                digits
            }
        };
        Ok(Expansion::new(mu, v, upto, digits))
    }

    fn local_parameter(&self, p: &PlaceG0) -> RatFunc {
        match p {
            PlaceG0::Infinite => RatFunc::new(Poly::one(&self.k), Poly::x(&self.k), &self.k).unwrap(),
            PlaceG0::Finite(q) => RatFunc::poly(q.clone(), &self.k),
        }
    }

    fn constant(&self, c: FieldElement) -> RatFunc {
        RatFunc::poly(Poly::constant(c), &self.k)
    }

    fn variable(&self, name: &str) -> Option<RatFunc> {
        (name == "x").then(|| RatFunc::poly(Poly::x(&self.k), &self.k))
    }

    fn add(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        a.add(b, &self.k)
    }

    fn mul(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        a.mul(b, &self.k)
    }

    fn scale(&self, c: FieldElement, a: &RatFunc) -> RatFunc {
        a.scale(c, &self.k)
    }

    fn inv(&self, a: &RatFunc) -> Result<RatFunc> {
        a.inv(&self.k)
    }

    fn is_zero(&self, a: &RatFunc) -> bool {
        a.is_zero()
    }
}
