//! Finite fields `F_q`, `q = p^e`.
//!
//! An element is a coefficient vector over the power basis of a fixed monic
//! irreducible modulus. The vector is stored packed as its positional base-`p`
//! value `c_0 + c_1 p + ... + c_{e-1} p^{e-1}`, which is also the canonical
//! digit bijection `F_q -> {0, ..., q-1}` used by the point generator. The
//! packing is not a field homomorphism; nothing may add indices.
//!
//! Addition and multiplication tables are filled once from the polynomial
//! arithmetic, which keeps the rank sweeps in `netverify` cheap.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest supported field size.
pub const MAX_FIELD_SIZE: usize = 256;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Debug)]
pub struct FieldElement(u16);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Canonical digit index in `[0, q)`.
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

struct Tables {
    p: u32,
    e: usize,
    q: usize,
    modulus: Vec<u32>,
    add: Vec<FieldElement>,
    mul: Vec<FieldElement>,
    neg: Vec<FieldElement>,
    inv: Vec<FieldElement>,
}

/// A finite field together with its precomputed arithmetic.
#[derive(Clone)]
pub struct FieldSpec {
    t: Arc<Tables>,
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.t.p == other.t.p && self.t.e == other.t.e && self.t.modulus == other.t.modulus
    }
}

impl Eq for FieldSpec {}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldSpec({self})")
    }
}

/// `q=<p>^<e>`, followed by ` modulus=<c0,...,1>` for proper extensions.
impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q={}^{}", self.t.p, self.t.e)?;
        if self.t.e > 1 {
            let m: Vec<String> = self.t.modulus.iter().map(|c| c.to_string()).collect();
            write!(f, " modulus={}", m.join(","))?;
        }
        Ok(())
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q` into `(p, e)` with `q = p^e`, if `q` is a prime power.
pub fn prime_power(q: u64) -> Option<(u32, usize)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0)?;
    let mut r = q;
    let mut e = 0;
    while r % p == 0 {
        r /= p;
        e += 1;
    }
    (r == 1).then_some((p as u32, e))
}

// Dense polynomials over Z_p, low degree first, used only to build the tables
// and to test moduli.

fn zp_trim(v: &mut Vec<u32>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn zp_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    // m monic
    let mut r = a.to_vec();
    zp_trim(&mut r);
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        for (i, &mc) in m.iter().enumerate() {
            let sub = (lead * mc) % p;
            r[shift + i] = (r[shift + i] + p - sub) % p;
        }
        zp_trim(&mut r);
    }
    r
}

fn zp_is_irreducible(m: &[u32], p: u32) -> bool {
    let deg = m.len() - 1;
    if deg == 0 {
        return false;
    }
    for d in 1..=deg / 2 {
        let count = (p as usize).pow(d as u32);
        for idx in 0..count {
            let mut cand = Vec::with_capacity(d + 1);
            let mut n = idx;
            for _ in 0..d {
                cand.push((n % p as usize) as u32);
                n /= p as usize;
            }
            cand.push(1);
            if zp_rem(m, &cand, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// Lexicographically smallest monic irreducible of degree `e` over `Z_p`,
/// comparing coefficient vectors `(c_0, c_1, ..., 1)` from `c_0` upwards.
pub fn smallest_irreducible(p: u32, e: usize) -> Vec<u32> {
    let count = (p as usize).pow(e as u32);
    for idx in 0..count {
        // c_0 is the most significant digit of idx
        let mut cand = vec![0u32; e + 1];
        let mut n = idx;
        for i in (0..e).rev() {
            cand[i] = (n % p as usize) as u32;
            n /= p as usize;
        }
        cand[e] = 1;
        if zp_is_irreducible(&cand, p) {
            return cand;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// Builds `F_{p^e}`. Without a modulus, the canonical one from
/// [`smallest_irreducible`] is used.
pub fn make_field(p: u32, e: usize, modulus: Option<&[u32]>) -> Result<FieldSpec> {
    if !is_prime(p as u64) {
        return Err(Error::NotPrime(p as u64));
    }
    if e == 0 {
        return Err(Error::InvalidField("extension degree must be at least 1".into()));
    }
    let q = (p as u64)
        .checked_pow(e as u32)
        .filter(|&q| q as usize <= MAX_FIELD_SIZE)
        .ok_or_else(|| {
            Error::InvalidField(format!("{p}^{e} exceeds the supported size {MAX_FIELD_SIZE}"))
        })? as usize;
    let modulus = match modulus {
        Some(m) => {
            if m.len() != e + 1 {
                return Err(Error::InvalidModulus(format!("expected degree {e}, got {} coefficients", m.len())));
            }
            if m.iter().any(|&c| c >= p) {
                return Err(Error::InvalidModulus("coefficient not reduced mod p".into()));
            }
            if m[e] != 1 {
                return Err(Error::InvalidModulus("not monic".into()));
            }
            if !zp_is_irreducible(m, p) {
                return Err(Error::InvalidModulus("reducible".into()));
            }
            if e == 1 {
                vec![0, 1]
            } else {
                m.to_vec()
            }
        }
        None if e == 1 => vec![0, 1],
        None => smallest_irreducible(p, e),
    };
    Ok(FieldSpec::build(p, e, q, modulus))
}

/// Prime field `F_p`.
pub fn prime_field(p: u32) -> Result<FieldSpec> {
    make_field(p, 1, None)
}

/// `F_q` for a prime power `q`, with the canonical modulus.
pub fn field_of_size(q: u64) -> Result<FieldSpec> {
    let (p, e) = prime_power(q).ok_or_else(|| Error::InvalidField(format!("{q} is not a prime power")))?;
    make_field(p, e, None)
}

impl FieldSpec {
    fn build(p: u32, e: usize, q: usize, modulus: Vec<u32>) -> Self {
        let unpack = |n: usize| -> Vec<u32> {
            let mut c = Vec::with_capacity(e);
            let mut n = n;
            for _ in 0..e {
                c.push((n % p as usize) as u32);
                n /= p as usize;
            }
            c
        };
        let pack = |c: &[u32]| -> FieldElement {
            let mut n = 0usize;
            for &x in c.iter().rev() {
                n = n * p as usize + x as usize;
            }
            FieldElement(n as u16)
        };
        let elems: Vec<Vec<u32>> = (0..q).map(unpack).collect();
        let mut add = vec![FieldElement::ZERO; q * q];
        let mut mul = vec![FieldElement::ZERO; q * q];
        for a in 0..q {
            for b in 0..q {
                let s: Vec<u32> = elems[a].iter().zip(&elems[b]).map(|(x, y)| (x + y) % p).collect();
                add[a * q + b] = pack(&s);
                let mut prod = vec![0u32; 2 * e - 1];
                for (i, x) in elems[a].iter().enumerate() {
                    for (j, y) in elems[b].iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                let mut r = zp_rem(&prod, &modulus, p);
                r.resize(e, 0);
                mul[a * q + b] = pack(&r);
            }
        }
        let mut neg = vec![FieldElement::ZERO; q];
        let mut inv = vec![FieldElement::ZERO; q];
        for a in 0..q {
            for b in 0..q {
                if add[a * q + b].is_zero() {
                    neg[a] = FieldElement(b as u16);
                }
                if mul[a * q + b].index() == 1 {
                    inv[a] = FieldElement(b as u16);
                }
            }
        }
        FieldSpec {
            t: Arc::new(Tables { p, e, q, modulus, add, mul, neg, inv }),
        }
    }

    pub fn characteristic(&self) -> u32 {
        self.t.p
    }

    pub fn degree(&self) -> usize {
        self.t.e
    }

    pub fn size(&self) -> usize {
        self.t.q
    }

    /// Modulus coefficients, low degree first; `None` for prime fields.
    pub fn modulus(&self) -> Option<&[u32]> {
        (self.t.e > 1).then_some(&self.t.modulus[..])
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::ZERO
    }

    pub fn one(&self) -> FieldElement {
        FieldElement(1)
    }

    /// The class of `x` in `F_p[x]/(modulus)`; equals the image of 1 when `e = 1`.
    pub fn generator(&self) -> FieldElement {
        if self.t.e == 1 {
            self.one()
        } else {
            FieldElement(self.t.p as u16)
        }
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> FieldElement {
        FieldElement(n.rem_euclid(self.t.p as i64) as u16)
    }

    pub fn elem(&self, index: usize) -> Result<FieldElement> {
        if index < self.t.q {
            Ok(FieldElement(index as u16))
        } else {
            Err(Error::IndexOutOfRange { index, q: self.t.q })
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.t.q as u16).map(FieldElement)
    }

    pub fn coeffs(&self, a: FieldElement) -> Vec<u32> {
        let p = self.t.p as usize;
        let mut n = a.index();
        (0..self.t.e)
            .map(|_| {
                let c = (n % p) as u32;
                n /= p;
                c
            })
            .collect()
    }

    pub fn from_coeffs(&self, c: &[u32]) -> Result<FieldElement> {
        if c.len() != self.t.e || c.iter().any(|&x| x >= self.t.p) {
            return Err(Error::InvalidField(format!("bad coefficient vector {c:?}")));
        }
        let mut n = 0usize;
        for &x in c.iter().rev() {
            n = n * self.t.p as usize + x as usize;
        }
        Ok(FieldElement(n as u16))
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.t.add[a.index() * self.t.q + b.index()]
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        self.t.neg[a.index()]
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.t.mul[a.index() * self.t.q + b.index()]
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            Err(Error::DivisionByZero)
        } else {
            Ok(self.t.inv[a.index()])
        }
    }

    /// Inverse of an element known to be nonzero.
    #[inline]
    pub(crate) fn inv_nz(&self, a: FieldElement) -> FieldElement {
        debug_assert!(!a.is_zero());
        self.t.inv[a.index()]
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FieldElement, mut n: u64) -> FieldElement {
        let mut base = a;
        let mut acc = self.one();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            n >>= 1;
        }
        acc
    }

    /// `n * a` for an integer `n`.
    pub fn times(&self, n: i64, a: FieldElement) -> FieldElement {
        self.mul(self.from_int(n), a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_fields() -> Vec<FieldSpec> {
        [2u64, 3, 4, 5, 7, 8, 9].iter().map(|&q| field_of_size(q).unwrap()).collect()
    }

    #[test]
    fn prime_field_f2() {
        let k = make_field(2, 1, None).unwrap();
        assert_eq!(k.size(), 2);
        assert_eq!(k.modulus(), None);
        assert_eq!(k.to_string(), "q=2^1");
    }

    #[test]
    fn f4_modulus_by_enumeration() {
        // monic degree-2 over F_2: x^2, x^2+1, x^2+x, x^2+x+1; only the last has no root
        let roots = |c: [u32; 3]| (0..2u32).any(|x| (c[0] + c[1] * x + c[2] * x * x) % 2 == 0);
        let irreducible: Vec<[u32; 3]> = [[0, 0, 1], [1, 0, 1], [0, 1, 1], [1, 1, 1]]
            .into_iter()
            .filter(|&c| !roots(c))
            .collect();
        assert_eq!(irreducible, vec![[1, 1, 1]]);
        let k = make_field(2, 2, None).unwrap();
        assert_eq!(k.modulus(), Some(&[1, 1, 1][..]));
        assert_eq!(k.to_string(), "q=2^2 modulus=1,1,1");
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(make_field(4, 1, None).unwrap_err(), Error::NotPrime(4));
        assert!(matches!(make_field(2, 2, Some(&[1, 0, 1])), Err(Error::InvalidModulus(_))));
        assert!(matches!(make_field(2, 2, Some(&[1, 1, 0])), Err(Error::InvalidModulus(_))));
        assert!(make_field(2, 9, None).is_err());
        assert!(make_field(3, 0, None).is_err());
    }

    #[test]
    fn small_arithmetic() {
        let f3 = prime_field(3).unwrap();
        assert_eq!(f3.add(f3.from_int(2), f3.from_int(2)), f3.from_int(1));
        let f4 = make_field(2, 2, None).unwrap();
        let x = f4.generator();
        let x1 = f4.add(x, f4.one());
        assert_eq!(f4.inv(x).unwrap(), x1);
        assert_eq!(f4.mul(x, x1), f4.one());
        assert_eq!(f4.inv(f4.zero()), Err(Error::DivisionByZero));
    }

    #[test]
    fn digit_bijection() {
        let f3 = prime_field(3).unwrap();
        assert_eq!(f3.from_int(2).index(), 2);
        let f4 = make_field(2, 2, None).unwrap();
        for a in f4.elements() {
            let c = f4.coeffs(a);
            assert_eq!(a.index(), (c[0] + 2 * c[1]) as usize);
            assert_eq!(f4.from_coeffs(&c).unwrap(), a);
        }
        assert_eq!(f4.elem(0).unwrap(), f4.zero());
        assert!(f4.elem(4).is_err());
    }

    #[test]
    fn field_axioms_exhaustive() {
        for k in small_fields() {
            let els: Vec<_> = k.elements().collect();
            for &a in &els {
                assert_eq!(k.add(a, k.neg(a)), k.zero());
                assert_eq!(k.mul(a, k.one()), a);
                if !a.is_zero() {
                    assert_eq!(k.mul(a, k.inv(a).unwrap()), k.one());
                }
                // Frobenius
                assert_eq!(k.pow(a, k.size() as u64), a);
                for &b in &els {
                    assert_eq!(k.add(a, b), k.add(b, a));
                    assert_eq!(k.mul(a, b), k.mul(b, a));
                    for &c in &els {
                        assert_eq!(k.add(k.add(a, b), c), k.add(a, k.add(b, c)));
                        assert_eq!(k.mul(k.mul(a, b), c), k.mul(a, k.mul(b, c)));
                        assert_eq!(k.mul(a, k.add(b, c)), k.add(k.mul(a, b), k.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn prime_power_split() {
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(7), Some((7, 1)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(1), None);
    }
}
