//! Univariate polynomials over `F_q`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::gf::{FieldElement, FieldSpec};

/// Coefficients low degree first; the highest stored coefficient is nonzero.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Debug)]
pub struct Poly {
    coeffs: Vec<FieldElement>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<FieldElement>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn constant(c: FieldElement) -> Self {
        Poly::new(vec![c])
    }

    pub fn one(k: &FieldSpec) -> Self {
        Poly::constant(k.one())
    }

    pub fn x(k: &FieldSpec) -> Self {
        Poly::new(vec![k.zero(), k.one()])
    }

    /// `x + c`.
    pub fn linear(k: &FieldSpec, c: FieldElement) -> Self {
        Poly::new(vec![c, k.one()])
    }

    pub fn monomial(k: &FieldSpec, c: FieldElement, d: usize) -> Self {
        let mut v = vec![k.zero(); d + 1];
        v[d] = c;
        Poly::new(v)
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FieldElement {
        self.coeffs.get(i).copied().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with `deg 0 = -1`, convenient in degree bookkeeping.
    pub fn deg(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn lead(&self) -> FieldElement {
        self.coeffs.last().copied().unwrap_or_default()
    }

    pub fn is_monic(&self, k: &FieldSpec) -> bool {
        self.lead() == k.one()
    }

    pub fn add(&self, o: &Poly, k: &FieldSpec) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|i| k.add(self.coeff(i), o.coeff(i))).collect())
    }

    pub fn sub(&self, o: &Poly, k: &FieldSpec) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|i| k.sub(self.coeff(i), o.coeff(i))).collect())
    }

    pub fn neg(&self, k: &FieldSpec) -> Poly {
        Poly::new(self.coeffs.iter().map(|&c| k.neg(c)).collect())
    }

    pub fn scale(&self, c: FieldElement, k: &FieldSpec) -> Poly {
        Poly::new(self.coeffs.iter().map(|&x| k.mul(x, c)).collect())
    }

    pub fn mul(&self, o: &Poly, k: &FieldSpec) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![k.zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in o.coeffs.iter().enumerate() {
                v[i + j] = k.add(v[i + j], k.mul(a, b));
            }
        }
        Poly::new(v)
    }

    pub fn pow(&self, n: u64, k: &FieldSpec) -> Poly {
        let mut acc = Poly::one(k);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base, k);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base, k);
            }
        }
        acc
    }

    /// Multiplication by `x^n`.
    pub fn shift(&self, n: usize, k: &FieldSpec) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![k.zero(); n];
        v.extend_from_slice(&self.coeffs);
        Poly::new(v)
    }

    pub fn divrem(&self, d: &Poly, k: &FieldSpec) -> Result<(Poly, Poly)> {
        let dd = d.degree().ok_or(Error::DivisionByZero)?;
        let inv = k.inv_nz(d.lead());
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut quo = vec![k.zero(); r.len() - dd];
        for i in (0..quo.len()).rev() {
            let c = k.mul(r[i + dd], inv);
            quo[i] = c;
            if c.is_zero() {
                continue;
            }
            for (j, &dc) in d.coeffs.iter().enumerate() {
                r[i + j] = k.sub(r[i + j], k.mul(c, dc));
            }
        }
        Ok((Poly::new(quo), Poly::new(r)))
    }

    pub fn rem(&self, d: &Poly, k: &FieldSpec) -> Result<Poly> {
        Ok(self.divrem(d, k)?.1)
    }

    /// Quotient of an exact division; errors when the remainder is nonzero.
    pub fn div_exact(&self, d: &Poly, k: &FieldSpec) -> Result<Poly> {
        let (q, r) = self.divrem(d, k)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::Internal("inexact polynomial division".into()))
        }
    }

    pub fn monic(&self, k: &FieldSpec) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        self.scale(k.inv_nz(self.lead()), k)
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, o: &Poly, k: &FieldSpec) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b, k).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic(k)
    }

    /// `(g, s, t)` with `s*self + t*o = g = gcd(self, o)`, `g` monic.
    pub fn ext_gcd(&self, o: &Poly, k: &FieldSpec) -> (Poly, Poly, Poly) {
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (Poly::one(k), Poly::zero());
        let (mut t0, mut t1) = (Poly::zero(), Poly::one(k));
        while !r1.is_zero() {
            let (qt, r) = r0.divrem(&r1, k).expect("nonzero divisor");
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(&qt.mul(&s1, k), k);
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(&qt.mul(&t1, k), k);
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let c = k.inv_nz(r0.lead());
        (r0.scale(c, k), s0.scale(c, k), t0.scale(c, k))
    }

    /// Inverse modulo `m`, if `gcd(self, m) = 1`.
    pub fn inv_mod(&self, m: &Poly, k: &FieldSpec) -> Result<Poly> {
        let (g, s, _) = self.ext_gcd(m, k);
        if g != Poly::one(k) {
            return Err(Error::DivisionByZero);
        }
        s.rem(m, k)
    }

    pub fn mul_mod(&self, o: &Poly, m: &Poly, k: &FieldSpec) -> Poly {
        self.mul(o, k).rem(m, k).expect("nonzero modulus")
    }

    pub fn pow_mod(&self, n: u128, m: &Poly, k: &FieldSpec) -> Poly {
        let mut acc = Poly::one(k).rem(m, k).expect("nonzero modulus");
        let mut base = self.rem(m, k).expect("nonzero modulus");
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul_mod(&base, m, k);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul_mod(&base, m, k);
            }
        }
        acc
    }

    pub fn eval(&self, a: FieldElement, k: &FieldSpec) -> FieldElement {
        self.coeffs.iter().rev().fold(k.zero(), |acc, &c| k.add(k.mul(acc, a), c))
    }

    /// Multiplicity of the irreducible `p` as a factor of `self` (`self != 0`).
    pub fn multiplicity(&self, p: &Poly, k: &FieldSpec) -> u32 {
        let mut f = self.clone();
        let mut n = 0;
        loop {
            let (q, r) = f.divrem(p, k).expect("nonzero divisor");
            if !r.is_zero() {
                return n;
            }
            f = q;
            n += 1;
        }
    }

    /// Reversal `x^d f(1/x)` with `d = deg f`.
    pub fn reversed(&self) -> Poly {
        let mut v = self.coeffs.clone();
        v.reverse();
        Poly::new(v)
    }

    /// Rabin's irreducibility test.
    pub fn is_irreducible(&self, k: &FieldSpec) -> bool {
        let Some(n) = self.degree() else { return false };
        if n == 0 {
            return false;
        }
        if n == 1 {
            return true;
        }
        let f = self.monic(k);
        let q = k.size() as u128;
        let x = Poly::x(k);
        // x^(q^i) mod f for i = 0..=n
        let mut frob = vec![x.rem(&f, k).unwrap()];
        for i in 1..=n {
            let next = frob[i - 1].pow_mod(q, &f, k);
            frob.push(next);
        }
        if frob[n] != frob[0] {
            return false;
        }
        let mut d = n;
        let mut primes = Vec::new();
        let mut r = 2;
        while d > 1 {
            if d % r == 0 {
                primes.push(r);
                while d % r == 0 {
                    d /= r;
                }
            }
            r += 1;
        }
        primes.into_iter().all(|r| {
            let h = frob[n / r].sub(&x, k);
            h.gcd(&f, k) == Poly::one(k)
        })
    }

    /// All monic polynomials of degree `d`, in lexicographic order of the
    /// coefficient vector `(c_0, ..., c_{d-1}, 1)` read from `c_0`.
    pub fn monic_of_degree(k: &FieldSpec, d: usize) -> impl Iterator<Item = Poly> + '_ {
        let q = k.size();
        let count = q.pow(d as u32);
        (0..count).map(move |idx| {
            let mut v = vec![k.zero(); d + 1];
            let mut n = idx;
            for i in (0..d).rev() {
                v[i] = k.elem(n % q).unwrap();
                n /= q;
            }
            v[d] = k.one();
            Poly::new(v)
        })
    }

    /// Coefficients checked against a field.
    pub fn from_indices(k: &FieldSpec, idx: &[usize]) -> Result<Poly> {
        let v = idx.iter().map(|&i| k.elem(i)).collect::<Result<Vec<_>>>()?;
        Ok(Poly::new(v))
    }

    /// Human-readable form such as `x^2+3*x+1` (coefficients as digit indices).
    pub fn pretty(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut terms = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let c = c.index();
            terms.push(match (i, c) {
                (0, c) => c.to_string(),
                (1, 1) => "x".into(),
                (1, c) => format!("[{c}]*x"),
                (i, 1) => format!("x^{i}"),
                (i, c) => format!("[{c}]*x^{i}"),
            });
        }
        terms.join("+")
    }
}

/// Comma-separated digit indices, low degree first (`1,0,1` is `1 + x^2`).
/// The zero polynomial prints as `0`.
impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let s: Vec<String> = self.coeffs.iter().map(|c| c.index().to_string()).collect();
        write!(f, "{}", s.join(","))
    }
}

/// Parsed coefficient indices, not yet checked against a field.
pub struct PolyIndices(pub Vec<usize>);

impl FromStr for PolyIndices {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad coefficient {t:?}"))))
            .collect::<Result<Vec<_>>>()
            .map(PolyIndices)
    }
}
