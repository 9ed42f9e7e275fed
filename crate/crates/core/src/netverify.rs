//! Exhaustive quality checks on generating matrices: the rank condition
//! behind `T*(m)`, the bounds each construction guarantees, a direct
//! elementary-interval counter, and linear independence of function-field
//! elements via their expansions.

use std::collections::HashMap;

use crate::construct::Variant;
use crate::error::{Error, Result};
use crate::function_field::FunctionField;
use crate::genmat::MatrixSet;
use crate::linalg;

/// All `(d_1, ..., d_s)` with `d_i >= 0` and `Σ d_i = total`, in
/// lexicographic order.
pub fn compositions(total: usize, s: usize) -> Vec<Vec<usize>> {
    fn rec(rest: usize, slots: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if slots == 1 {
            cur.push(rest);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for d in 0..=rest {
            cur.push(d);
            rec(rest - d, slots - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if s > 0 {
        rec(total, s, &mut Vec::with_capacity(s), &mut out);
    }
    out
}

/// Whether the first `d_i` rows of each `C^(i)`, cut to `m` columns, are
/// linearly independent.
pub fn rows_independent(ms: &MatrixSet, m: usize, d: &[usize]) -> Result<bool> {
    if d.len() != ms.s() {
        return Err(Error::InvalidParams(format!("composition has {} parts, s = {}", d.len(), ms.s())));
    }
    let total: usize = d.iter().sum();
    if total > m {
        return Ok(false);
    }
    let need_rows = d.iter().copied().max().unwrap_or(0);
    if need_rows > ms.rows() {
        return Err(Error::InsufficientDepth { needed: need_rows, available: ms.rows() });
    }
    if m > ms.cols() {
        return Err(Error::InsufficientDepth { needed: m, available: ms.cols() });
    }
    let mut rows: Vec<Vec<_>> = Vec::with_capacity(total);
    for (i, &di) in d.iter().enumerate() {
        for j in 0..di {
            rows.push(ms.matrix(i).row(j)[..m].to_vec());
        }
    }
    Ok(linalg::forward_rank(ms.field(), &mut rows) == total)
}

/// `T*(m) = m - ρ(m)`, where `ρ(m)` is the largest `d` such that every
/// composition of every `d' <= d` gives independent rows.
pub fn minimal_t(ms: &MatrixSet, m: usize) -> Result<usize> {
    if ms.rows() < m || ms.cols() < m {
        return Err(Error::InsufficientDepth { needed: m, available: ms.rows().min(ms.cols()) });
    }
    for d in 1..=m {
        for c in compositions(d, ms.s()) {
            if !rows_independent(ms, m, &c)? {
                return Ok(m - (d - 1));
            }
        }
    }
    Ok(0)
}

/// The guaranteed quality bound at `m`.
pub fn bound(variant: Variant, mu: usize, g: usize, m: usize) -> usize {
    let r = m % mu;
    match variant {
        Variant::Genus0 => r.min(m),
        Variant::GenusPositive => m.min(2 * g + r),
        Variant::XingStyle => m.min(g + r),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundRow {
    pub m: usize,
    pub t_star: usize,
    pub bound: usize,
}

impl BoundRow {
    pub fn margin(&self) -> i64 {
        self.bound as i64 - self.t_star as i64
    }

    pub fn ok(&self) -> bool {
        self.t_star <= self.bound
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundReport {
    pub rows: Vec<BoundRow>,
}

impl BoundReport {
    pub fn ok(&self) -> bool {
        self.rows.iter().all(BoundRow::ok)
    }

    pub fn violations(&self) -> impl Iterator<Item = &BoundRow> {
        self.rows.iter().filter(|r| !r.ok())
    }
}

/// `T*(m)` against the bound of the file's variant, for `1 <= m <= m_max`.
pub fn check_bound(ms: &MatrixSet, m_max: usize) -> Result<BoundReport> {
    let rows = (1..=m_max)
        .map(|m| {
            Ok(BoundRow { m, t_star: minimal_t(ms, m)?, bound: bound(ms.variant(), ms.mu(), ms.genus(), m) })
        })
        .collect::<Result<_>>()?;
    Ok(BoundReport { rows })
}

/// Whether every elementary interval of shape `e` (with `Σ e_i = m - t`)
/// holds exactly `q^t` of the points. Points are given by their numerators
/// `Y_i` over `q^m`.
pub fn net_equidistribution(points: &[Vec<u128>], q: usize, m: usize, shape: &[usize], t: usize) -> Result<bool> {
    let q = q as u128;
    let n = q.checked_pow(m as u32).ok_or_else(|| Error::InvalidParams(format!("q^{m} overflows")))?;
    if points.len() as u128 != n {
        return Err(Error::InvalidParams(format!("{} points given, need q^m = {n}", points.len())));
    }
    if t > m || shape.iter().sum::<usize>() != m - t {
        return Err(Error::InvalidParams(format!("shape {shape:?} does not sum to m - t = {}", m as i64 - t as i64)));
    }
    if points.iter().any(|p| p.len() != shape.len()) {
        return Err(Error::InvalidParams("point dimension differs from shape length".into()));
    }
    let mut counts: HashMap<Vec<u128>, u128> = HashMap::new();
    for p in points {
        let cell = p.iter().zip(shape).map(|(&y, &e)| y / q.pow((m - e) as u32)).collect();
        *counts.entry(cell).or_default() += 1;
    }
    let want = q.pow(t as u32);
    let cells = q.pow((m - t) as u32);
    Ok(counts.len() as u128 == cells && counts.values().all(|&c| c == want))
}

/// Rank of the matrix of expansion coefficients at `pinf`. The window starts
/// at the smallest valuation among the elements (a common shift clearing
/// poles) and spans `precision` coefficients, by default
/// `count + 2g + 2`. A rank deficit that disappears when the precision is
/// doubled is reported as an error.
pub fn independence_rank<F: FunctionField>(ff: &F, elems: &[F::Elem], pinf: &F::Place, precision: Option<usize>) -> Result<usize> {
    let nonzero: Vec<&F::Elem> = elems.iter().filter(|e| !ff.is_zero(e)).collect();
    if nonzero.is_empty() {
        return Ok(0);
    }
    let lo = nonzero.iter().filter_map(|e| ff.valuation(e, pinf)).min().unwrap_or(0);
    let prec = precision.unwrap_or(elems.len() + 2 * ff.genus() + 2).max(1);
    let rank_at = |prec: usize| -> Result<usize> {
        let hi = lo + prec as i64 - 1;
        let mut rows = nonzero
            .iter()
            .map(|e| Ok(ff.expansion(e, pinf, hi)?.window(lo, hi)))
            .collect::<Result<Vec<_>>>()?;
        Ok(linalg::forward_rank(ff.field(), &mut rows))
    };
    let r = rank_at(prec)?;
    if r < elems.len() {
        let r2 = rank_at(2 * prec)?;
        if r2 > r {
            return Err(Error::PrecisionShortfall { low: r, high: r2, precision: prec, doubled: 2 * prec });
        }
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::prime_field;

    fn identity_set(q: u32, n: usize) -> MatrixSet {
        let k = prime_field(q).unwrap();
        let rows = (0..n).map(|j| (0..n).map(|c| if c == j { k.one() } else { k.zero() }).collect()).collect();
        MatrixSet::from_rows(k, Variant::Genus0, 1, 0, vec![rows]).unwrap()
    }

    #[test]
    fn compositions_are_lexicographic() {
        assert_eq!(compositions(2, 2), vec![vec![0, 2], vec![1, 1], vec![2, 0]]);
        assert_eq!(compositions(3, 3).len(), 10);
        assert_eq!(compositions(0, 2), vec![vec![0, 0]]);
    }

    #[test]
    fn trivial_rank_queries() {
        let ms = identity_set(2, 4);
        assert!(rows_independent(&ms, 4, &[1]).unwrap());
        assert!(!rows_independent(&ms, 2, &[3]).unwrap());
        assert!(rows_independent(&ms, 5, &[1]).is_err());
        for m in 1..=4 {
            assert_eq!(minimal_t(&ms, m).unwrap(), 0);
        }
    }

    #[test]
    fn zero_matrices_have_worst_quality() {
        let k = prime_field(3).unwrap();
        let z = vec![vec![k.zero(); 5]; 5];
        let ms = MatrixSet::from_rows(k, Variant::Genus0, 1, 0, vec![z.clone(), z]).unwrap();
        for m in 1..=5 {
            assert_eq!(minimal_t(&ms, m).unwrap(), m);
        }
    }

    #[test]
    fn bounds_per_variant() {
        assert_eq!(bound(Variant::Genus0, 2, 0, 5), 1);
        assert_eq!(bound(Variant::Genus0, 1, 0, 5), 0);
        assert_eq!(bound(Variant::GenusPositive, 1, 1, 1), 1);
        assert_eq!(bound(Variant::GenusPositive, 1, 1, 7), 2);
        assert_eq!(bound(Variant::XingStyle, 1, 1, 7), 1);
    }

    #[test]
    fn equidistribution_counter() {
        // the van der Corput points in base 2, m = 3, are a (0,3,1)-net
        let pts: Vec<Vec<u128>> = (0u128..8).map(|n| vec![(n & 1) << 2 | (n & 2) | (n >> 2)]).collect();
        assert!(net_equidistribution(&pts, 2, 3, &[3], 0).unwrap());
        assert!(net_equidistribution(&pts, 2, 3, &[0], 3).unwrap());
        let bad: Vec<Vec<u128>> = (0u128..8).map(|n| vec![n / 2]).collect();
        assert!(!net_equidistribution(&bad, 2, 3, &[1], 2).unwrap());
        assert!(net_equidistribution(&pts[..4], 2, 3, &[3], 0).is_err());
    }
}
