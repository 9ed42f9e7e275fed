//! End-to-end operations behind the command-line tool: build a matrix file
//! from parameters, expand an element, tabulate `T*`, and count points in
//! elementary intervals.

use crate::construct::{BetaSystem, ValidationReport};
use crate::error::{Error, Result};
use crate::expr::parse_element;
use crate::function_field::{Expansion, FunctionField};
use crate::genmat::{MatrixBuilder, MatrixSet};
use crate::netverify::{self, BoundReport};
use crate::params::{Backend, KitDefaults, ParamSpec};
use crate::seqgen;

fn build<F: FunctionField + KitDefaults>(ff: &F, spec: &ParamSpec, rows: usize, cols: usize) -> Result<MatrixSet> {
    let params = spec.resolve(ff)?;
    MatrixBuilder::new(BetaSystem::new(ff, params)?).build(rows, cols)
}

/// Generating matrices with `rows` rows and `cols` columns.
pub fn construct(spec: &ParamSpec, rows: usize, cols: usize) -> Result<MatrixSet> {
    if rows == 0 || cols == 0 {
        return Err(Error::InvalidParams("rows and cols must be positive".into()));
    }
    match spec.backend()? {
        Backend::Rational(ff) => build(&ff, spec, rows, cols),
        Backend::Elliptic(ff) => build(&ff, spec, rows, cols),
    }
}

fn check<F: FunctionField + KitDefaults>(ff: &F, spec: &ParamSpec, j_max: usize) -> Result<ValidationReport> {
    let mut sys = BetaSystem::new(ff, spec.resolve(ff)?)?;
    sys.extend_to(j_max)?;
    sys.validate()
}

/// Valuation identities and joint independence of the elements with `j <= j_max`.
pub fn validate(spec: &ParamSpec, j_max: usize) -> Result<ValidationReport> {
    match spec.backend()? {
        Backend::Rational(ff) => check(&ff, spec, j_max),
        Backend::Elliptic(ff) => check(&ff, spec, j_max),
    }
}

fn expand_in<F: FunctionField>(ff: &F, element: &str, place: &str, upto: i64) -> Result<Expansion> {
    let f = parse_element(ff, element)?;
    let p = ff.parse_place(place)?;
    ff.expansion(&f, &p, upto)
}

/// Expansion of `element` at `place` in the backend's local parameter, up to
/// index `upto`.
pub fn expand(backend: &Backend, element: &str, place: &str, upto: i64) -> Result<Expansion> {
    match backend {
        Backend::Rational(ff) => expand_in(ff, element, place, upto),
        Backend::Elliptic(ff) => expand_in(ff, element, place, upto),
    }
}

/// `k c` lines (digits joined by commas when `mu > 1`), from the valuation,
/// or from 0 for elements without a pole, up to `upto`.
pub fn render_expansion(e: &Expansion) -> Vec<String> {
    let from = e.start.min(0).min(e.upto);
    (from..=e.upto)
        .map(|k| {
            let c: Vec<String> = e.coeff(k).iter().map(|d| d.index().to_string()).collect();
            format!("{k} {}", c.join(","))
        })
        .collect()
}

/// `T*(m)` against the guaranteed bound for `m = 1..=m_max`.
pub fn tvalue(ms: &MatrixSet, m_max: usize) -> Result<BoundReport> {
    netverify::check_bound(ms, m_max)
}

/// Counts for every shape `(e_1..e_s)` with `Σ e_i = m - t` whether the block
/// of points `k q^m .. (k+1) q^m - 1` has `q^t` points in every box.
pub fn netcheck(ms: &MatrixSet, m: usize, t: usize, offset: u128) -> Result<Vec<(Vec<usize>, bool)>> {
    if t > m {
        return Err(Error::InvalidParams(format!("t = {t} exceeds m = {m}")));
    }
    let q = ms.field().size() as u128;
    let n = q.checked_pow(m as u32).ok_or_else(|| Error::InvalidParams(format!("q^{m} overflows")))?;
    let start = offset.checked_mul(n).ok_or_else(|| Error::InvalidParams("offset too large".into()))?;
    let pts = (0..n)
        .map(|i| Ok(seqgen::point(ms, start + i, m)?.numerators))
        .collect::<Result<Vec<_>>>()?;
    netverify::compositions(m - t, ms.s())
        .into_iter()
        .map(|shape| {
            let ok = netverify::net_equidistribution(&pts, q as usize, m, &shape, t)?;
            Ok((shape, ok))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::prime_field;

    #[test]
    fn f2_kit_end_to_end() {
        let spec = ParamSpec::kit_genus0(prime_field(2).unwrap(), 2, 1);
        let ms = construct(&spec, 6, 6).unwrap();
        let rep = tvalue(&ms, 6).unwrap();
        assert!(rep.ok());
        assert!(rep.rows.iter().all(|r| r.t_star == 0));
        for k in 0..3 {
            let res = netcheck(&ms, 4, 0, k).unwrap();
            assert_eq!(res.len(), 5);
            assert!(res.iter().all(|(_, ok)| *ok));
        }
        // offset 4 needs digit 6 of the index, beyond the 6 columns
        assert!(netcheck(&ms, 4, 0, 4).is_err());
    }

    #[test]
    fn expansion_listing() {
        let b = Backend::Rational(crate::ratfunc::RationalFunctionField::new(prime_field(2).unwrap()));
        let e = expand(&b, "1/(1-x)", "x", 3).unwrap();
        assert_eq!(render_expansion(&e), vec!["0 1", "1 1", "2 1", "3 1"]);
        let e = expand(&b, "x^2", "x+1", 2).unwrap();
        assert_eq!(render_expansion(&e), vec!["0 1", "1 0", "2 1"]);
        let e = expand(&b, "1/x", "x", 1).unwrap();
        assert_eq!(render_expansion(&e), vec!["-1 1", "0 0", "1 0"]);
    }
}
