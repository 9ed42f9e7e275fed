//! Points of the digital sequence defined by a [`MatrixSet`].
//!
//! For index `n` with base-`q` digits `n_0, n_1, ...` (least significant
//! first), coordinate `i` has digits `y = C^(i) (n_0, n_1, ...)ᵀ` and value
//! `Σ_j idx(y_j) q^{-j}`, truncated to `m` digits. Values are kept exact as
//! numerators `Y` over `q^m`.

use std::fmt;

use crate::error::{Error, Result};
use crate::genmat::MatrixSet;
use crate::gf::{FieldElement, FieldSpec};

/// Base-`q` digits of `n` as field elements, least significant first.
pub fn digits_of_index(k: &FieldSpec, n: u128, len: usize) -> Result<Vec<FieldElement>> {
    let q = k.size() as u128;
    let mut rest = n;
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(k.elem((rest % q) as usize)?);
        rest /= q;
    }
    if rest != 0 {
        return Err(Error::InvalidParams(format!("{n} does not fit in {len} base-{q} digits")));
    }
    Ok(out)
}

/// Number of base-`q` digits of `n` (0 for `n = 0`).
pub fn digit_count(n: u128, q: usize) -> usize {
    let mut c = 0;
    let mut r = n;
    while r > 0 {
        r /= q as u128;
        c += 1;
    }
    c
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputMode {
    Exact,
    Binary64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PointRequest {
    pub n0: u128,
    pub count: usize,
    /// Digits per coordinate.
    pub m: usize,
    pub mode: OutputMode,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Point {
    pub n: u128,
    pub q: usize,
    pub m: usize,
    /// `Y_i` with `x_i = Y_i / q^m`.
    pub numerators: Vec<u128>,
}

impl Point {
    pub fn to_f64(&self) -> Vec<f64> {
        let den = (self.q as f64).powi(self.m as i32);
        self.numerators.iter().map(|&y| y as f64 / den).collect()
    }

    pub fn render(&self, mode: OutputMode) -> String {
        let mut out = self.n.to_string();
        match mode {
            OutputMode::Exact => {
                let den = (self.q as u128).pow(self.m as u32);
                for y in &self.numerators {
                    out.push_str(&format!(" {y}/{den}"));
                }
            }
            OutputMode::Binary64 => {
                for x in self.to_f64() {
                    out.push_str(&format!(" {x}"));
                }
            }
        }
        out
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(OutputMode::Exact))
    }
}

/// Output digits `y_1..y_m` of every coordinate for the digit vector `nd`.
pub fn output_digits(ms: &MatrixSet, nd: &[FieldElement], m: usize) -> Result<Vec<Vec<FieldElement>>> {
    if m > ms.rows() {
        return Err(Error::InsufficientDepth { needed: m, available: ms.rows() });
    }
    if nd.len() > ms.cols() {
        return Err(Error::InsufficientDepth { needed: nd.len(), available: ms.cols() });
    }
    let k = ms.field();
    Ok(ms
        .matrices()
        .iter()
        .map(|c| {
            (0..m)
                .map(|j| {
                    c.row(j)
                        .iter()
                        .zip(nd)
                        .fold(FieldElement::ZERO, |acc, (&a, &b)| k.add(acc, k.mul(a, b)))
                })
                .collect()
        })
        .collect())
}

/// The `n`-th point to `m` digits. Needs at least `m` rows and as many
/// columns as `n` has digits.
pub fn point(ms: &MatrixSet, n: u128, m: usize) -> Result<Point> {
    let q = ms.field().size();
    if (q as u128).checked_pow(m as u32).is_none() {
        return Err(Error::InvalidParams(format!("q^m = {q}^{m} does not fit in 128 bits")));
    }
    let nd = digits_of_index(ms.field(), n, digit_count(n, q))?;
    let numerators = output_digits(ms, &nd, m)?
        .iter()
        .map(|ys| ys.iter().fold(0u128, |acc, y| acc * q as u128 + y.index() as u128))
        .collect();
    Ok(Point { n, q, m, numerators })
}

pub fn points(ms: &MatrixSet, req: &PointRequest) -> Result<Vec<Point>> {
    if req.count == 0 {
        return Err(Error::InvalidParams("count must be at least 1".into()));
    }
    (0..req.count as u128).map(|i| point(ms, req.n0 + i, req.m)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::Variant;
    use crate::gf::prime_field;

    fn identity(q: u32, n: usize) -> MatrixSet {
        let k = prime_field(q).unwrap();
        let rows = (0..n).map(|j| (0..n).map(|c| if c == j { k.one() } else { k.zero() }).collect()).collect();
        MatrixSet::from_rows(k, Variant::Genus0, 1, 0, vec![rows]).unwrap()
    }

    #[test]
    fn digits() {
        let k = prime_field(2).unwrap();
        let d: Vec<usize> = digits_of_index(&k, 5, 3).unwrap().iter().map(|e| e.index()).collect();
        assert_eq!(d, vec![1, 0, 1]);
        assert!(digits_of_index(&k, 0, 4).unwrap().iter().all(|e| e.is_zero()));
        assert!(digits_of_index(&k, 8, 3).is_err());
        let k = prime_field(3).unwrap();
        for n in 0..729u128 {
            let d = digits_of_index(&k, n, 6).unwrap();
            let back = d.iter().rev().fold(0u128, |acc, e| acc * 3 + e.index() as u128);
            assert_eq!(back, n);
        }
    }

    #[test]
    fn identity_gives_radical_inverse() {
        let ms = identity(2, 3);
        let p = point(&ms, 5, 3).unwrap();
        assert_eq!(p.numerators, vec![5]);
        assert_eq!(p.to_f64(), vec![0.625]);
        assert_eq!(p.to_string(), "5 5/8");
        assert_eq!(point(&ms, 0, 3).unwrap().numerators, vec![0]);
        assert_eq!(point(&ms, 1, 3).unwrap().render(OutputMode::Binary64), "1 0.5");
        assert!(point(&ms, 8, 3).is_err());
        assert!(point(&ms, 1, 4).is_err());
    }
}
