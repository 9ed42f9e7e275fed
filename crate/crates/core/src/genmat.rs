//! Generating matrices `C^(1), ..., C^(s)` assembled from local expansions at
//! `P∞`, and the canonical text file format.
//!
//! ```text
//! FFNETS v1
//! q=<p>^<e> [modulus=<c0,...,1>]
//! s=<s> variant=<genus0|gpos|xing> mu=<mu> g=<g> digest=<hex>
//! C <i> rows=<rows> cols=<cols>
//! <one line per row: space-separated element indices>
//! ```
//!
//! The digest is the SHA-256 of every line except the digest field itself,
//! so any edit to the header or the entries is detected on load.

use std::collections::HashMap;

use sha2::{Digest, Sha256};

use crate::construct::{BetaSystem, Variant};
use crate::error::{Error, Result};
use crate::function_field::FunctionField;
use crate::gf::{make_field, FieldElement, FieldSpec};

pub const FORMAT_VERSION: &str = "FFNETS v1";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenMatrix {
    coord: usize,
    rows: Vec<Vec<FieldElement>>,
}

impl GenMatrix {
    /// 1-based coordinate index `i` of `C^(i)`.
    pub fn coord(&self) -> usize {
        self.coord
    }

    pub fn rows(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    /// Row `j`, 0-based (the paper's row `j + 1`).
    pub fn row(&self, j: usize) -> &[FieldElement] {
        &self.rows[j]
    }

    pub fn entry(&self, j: usize, k: usize) -> FieldElement {
        self.rows[j][k]
    }

    pub fn to_rows(&self) -> Vec<Vec<FieldElement>> {
        self.rows.clone()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixSet {
    field: FieldSpec,
    variant: Variant,
    mu: usize,
    genus: usize,
    matrices: Vec<GenMatrix>,
}

impl MatrixSet {
    /// Wraps explicit matrices, which must all have the same shape.
    pub fn from_rows(field: FieldSpec, variant: Variant, mu: usize, genus: usize, mats: Vec<Vec<Vec<FieldElement>>>) -> Result<Self> {
        if mats.is_empty() || mu == 0 {
            return Err(Error::InvalidParams("need s >= 1 matrices and mu >= 1".into()));
        }
        let rows = mats[0].len();
        let cols = mats[0].first().map_or(0, Vec::len);
        for m in &mats {
            if m.len() != rows || m.iter().any(|r| r.len() != cols) {
                return Err(Error::InvalidParams("matrices differ in shape".into()));
            }
            if m.iter().flatten().any(|e| e.index() >= field.size()) {
                return Err(Error::IndexOutOfRange { index: field.size(), q: field.size() });
            }
        }
        let matrices = mats.into_iter().enumerate().map(|(i, rows)| GenMatrix { coord: i + 1, rows }).collect();
        Ok(MatrixSet { field, variant, mu, genus, matrices })
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn mu(&self) -> usize {
        self.mu
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn s(&self) -> usize {
        self.matrices.len()
    }

    pub fn rows(&self) -> usize {
        self.matrices[0].rows()
    }

    pub fn cols(&self) -> usize {
        self.matrices[0].cols()
    }

    /// `C^(i+1)`.
    pub fn matrix(&self, i: usize) -> &GenMatrix {
        &self.matrices[i]
    }

    pub fn matrices(&self) -> &[GenMatrix] {
        &self.matrices
    }

    /// The leading `rows x cols` block of every matrix.
    pub fn prefix(&self, rows: usize, cols: usize) -> Result<MatrixSet> {
        if rows > self.rows() || cols > self.cols() {
            return Err(Error::InsufficientDepth { needed: rows.max(cols), available: self.rows().min(self.cols()) });
        }
        let mats = self
            .matrices
            .iter()
            .map(|m| m.rows[..rows].iter().map(|r| r[..cols].to_vec()).collect())
            .collect();
        MatrixSet::from_rows(self.field.clone(), self.variant, self.mu, self.genus, mats)
    }

    fn field_line(&self) -> String {
        let k = &self.field;
        match k.modulus() {
            Some(m) => {
                let m: Vec<String> = m.iter().map(u32::to_string).collect();
                format!("q={}^{} modulus={}", k.characteristic(), k.degree(), m.join(","))
            }
            None => format!("q={}^{}", k.characteristic(), k.degree()),
        }
    }

    fn params_line(&self) -> String {
        format!("s={} variant={} mu={} g={}", self.s(), self.variant, self.mu, self.genus)
    }

    fn body(&self) -> String {
        let mut out = String::new();
        for m in &self.matrices {
            out.push_str(&format!("C {} rows={} cols={}\n", m.coord, m.rows(), m.cols()));
            for r in &m.rows {
                let line: Vec<String> = r.iter().map(|e| e.index().to_string()).collect();
                out.push_str(&line.join(" "));
                out.push('\n');
            }
        }
        out
    }

    fn digest_of(field_line: &str, params_line: &str, body: &str) -> String {
        let mut h = Sha256::new();
        for part in [FORMAT_VERSION, "\n", field_line, "\n", params_line, "\n", body] {
            h.update(part.as_bytes());
        }
        hex::encode(h.finalize())
    }

    pub fn digest(&self) -> String {
        Self::digest_of(&self.field_line(), &self.params_line(), &self.body())
    }

    pub fn serialize(&self) -> String {
        let (fl, pl, body) = (self.field_line(), self.params_line(), self.body());
        let d = Self::digest_of(&fl, &pl, &body);
        format!("{FORMAT_VERSION}\n{fl}\n{pl} digest={d}\n{body}")
    }

    pub fn deserialize(text: &str) -> Result<MatrixSet> {
        let bad = |m: String| Error::MalformedFile(m);
        let mut lines = text.lines();
        let version = lines.next().ok_or_else(|| bad("empty file".into()))?;
        if version != FORMAT_VERSION {
            return Err(bad(format!("unsupported version line {version:?}")));
        }
        let field_line = lines.next().ok_or_else(|| bad("missing field line".into()))?;
        let fields = keyvals(field_line)?;
        let (p, e) = fields
            .get("q")
            .and_then(|q| q.split_once('^'))
            .and_then(|(p, e)| Some((p.parse::<u32>().ok()?, e.parse::<usize>().ok()?)))
            .ok_or_else(|| bad(format!("bad field line {field_line:?}")))?;
        let modulus = match fields.get("modulus") {
            Some(m) => Some(m.split(',').map(|c| c.parse::<u32>()).collect::<std::result::Result<Vec<_>, _>>().map_err(|_| bad(format!("bad modulus {m:?}")))?),
            None => None,
        };
        let field = make_field(p, e, modulus.as_deref())?;
        let params_full = lines.next().ok_or_else(|| bad("missing parameter line".into()))?;
        let (params_line, digest) = params_full.rsplit_once(" digest=").ok_or_else(|| bad("missing digest".into()))?;
        let pv = keyvals(params_line)?;
        let get = |k: &str| pv.get(k).ok_or_else(|| bad(format!("missing {k}=")));
        let num = |k: &str| -> Result<usize> { get(k)?.parse().map_err(|_| bad(format!("bad {k}="))) };
        let s = num("s")?;
        let variant: Variant = get("variant")?.parse()?;
        let (mu, genus) = (num("mu")?, num("g")?);
        let rest: Vec<&str> = lines.collect();
        let mut mats = Vec::with_capacity(s);
        let mut pos = 0;
        for i in 1..=s {
            let head = rest.get(pos).ok_or_else(|| bad(format!("missing matrix {i}")))?;
            let hv: Vec<&str> = head.split_whitespace().collect();
            let dim = |tok: Option<&&str>, key: &str| -> Result<usize> {
                tok.and_then(|t| t.strip_prefix(key)).and_then(|v| v.parse().ok()).ok_or_else(|| bad(format!("bad matrix header {head:?}")))
            };
            if hv.len() != 4 || hv[0] != "C" || hv[1] != i.to_string() {
                return Err(bad(format!("expected header of matrix {i}, got {head:?}")));
            }
            let (rows, cols) = (dim(hv.get(2), "rows=")?, dim(hv.get(3), "cols=")?);
            pos += 1;
            let mut m = Vec::with_capacity(rows);
            for _ in 0..rows {
                let line = rest.get(pos).ok_or_else(|| bad(format!("matrix {i} truncated")))?;
                let row = line
                    .split_whitespace()
                    .map(|t| field.elem(t.parse().map_err(|_| bad(format!("bad entry {t:?}")))?))
                    .collect::<Result<Vec<_>>>()?;
                if row.len() != cols {
                    return Err(bad(format!("matrix {i}: row has {} entries, expected {cols}", row.len())));
                }
                m.push(row);
                pos += 1;
            }
            mats.push(m);
        }
        if rest[pos..].iter().any(|l| !l.trim().is_empty()) {
            return Err(bad("trailing content after the last matrix".into()));
        }
        let ms = MatrixSet::from_rows(field, variant, mu, genus, mats)?;
        let actual = ms.digest();
        if actual != digest {
            return Err(Error::DigestMismatch { expected: digest.to_string(), actual });
        }
        if ms.field_line() != field_line || ms.params_line() != params_line {
            return Err(bad("header is not in canonical form".into()));
        }
        Ok(ms)
    }
}

fn keyvals(line: &str) -> Result<HashMap<&str, &str>> {
    line.split_whitespace()
        .map(|kv| kv.split_once('=').ok_or_else(|| Error::MalformedFile(format!("expected key=value, got {kv:?}"))))
        .collect()
}

/// The basis `z_0, ..., z_{k_max-1}`: `w_f` at each gap index `n_f`, the power
/// `t^k` of the local parameter at `pinf` elsewhere.
pub fn z_system<F: FunctionField>(ff: &F, pinf: &F::Place, gaps: &[(i64, F::Elem)], k_max: usize) -> Result<Vec<F::Elem>> {
    let t = ff.local_parameter(pinf);
    (0..k_max as i64)
        .map(|k| match gaps.iter().find(|(n, _)| *n == k) {
            Some((_, w)) => Ok(w.clone()),
            None => ff.pow(&t, k),
        })
        .collect()
}

/// Coefficients `a_0, ..., a_{depth-1}` of `f` in the `z`-system, obtained by
/// peeling off one valuation at a time. Requires `ν_{P∞}(f) >= 0` and a
/// rational `pinf`.
pub fn z_coefficients<F: FunctionField>(ff: &F, f: &F::Elem, pinf: &F::Place, gaps: &[(i64, F::Elem)], depth: usize) -> Result<Vec<FieldElement>> {
    let k = ff.field();
    let hi = depth as i64 - 1;
    let window = |e: &F::Elem| -> Result<Vec<FieldElement>> { Ok(ff.expansion(e, pinf, hi)?.window(0, hi)) };
    let mut resid = window(f)?;
    let ws: Vec<(usize, Vec<FieldElement>)> = gaps
        .iter()
        .filter(|(n, _)| *n <= hi)
        .map(|(n, w)| Ok((*n as usize, window(w)?)))
        .collect::<Result<_>>()?;
    let mut out = vec![FieldElement::ZERO; depth];
    for idx in 0..depth {
        let c = resid[idx];
        if c.is_zero() {
            continue;
        }
        match ws.iter().find(|(n, _)| *n == idx) {
            Some((_, w)) => {
                let a = k.div(c, w[idx])?;
                for (r, &x) in resid.iter_mut().zip(w) {
                    *r = k.sub(*r, k.mul(a, x));
                }
                out[idx] = a;
            }
            None => {
                resid[idx] = FieldElement::ZERO;
                out[idx] = c;
            }
        }
    }
    Ok(out)
}

/// Incremental assembly of matrices from a [`BetaSystem`]; raw rows are
/// cached, so asking for the same or a smaller depth again is free.
pub struct MatrixBuilder<'a, F: FunctionField> {
    system: BetaSystem<'a, F>,
    mu: usize,
    cache: HashMap<(usize, usize), Vec<FieldElement>>,
}

impl<'a, F: FunctionField> MatrixBuilder<'a, F> {
    pub fn new(system: BetaSystem<'a, F>) -> Self {
        let mu = system.field().place_degree(&system.params().pinf);
        MatrixBuilder { system, mu, cache: HashMap::new() }
    }

    pub fn system(&self) -> &BetaSystem<'a, F> {
        &self.system
    }

    /// Raw expansion depth (coefficients) needed for `cols` columns.
    pub fn raw_depth(&self, cols: usize) -> usize {
        let g = self.system.field().genus();
        match self.system.params().variant {
            Variant::XingStyle => (cols + g).max(2 * g),
            _ => cols.div_ceil(self.mu) + 1,
        }
    }

    fn row(&mut self, i: usize, j: usize, cols: usize) -> Result<Vec<FieldElement>> {
        if let Some(r) = self.cache.get(&(i, j)) {
            if r.len() >= cols {
                return Ok(r[..cols].to_vec());
            }
        }
        let ff = self.system.field();
        let params = self.system.params();
        let beta = self.system.beta(i, j).ok_or_else(|| Error::Internal(format!("beta_{j}^({i}) not built")))?;
        let depth = self.raw_depth(cols);
        let raw = match params.variant {
            Variant::XingStyle => {
                let gaps = self.system.gaps();
                let a = z_coefficients(ff, beta, &params.pinf, gaps, depth)?;
                a.into_iter()
                    .enumerate()
                    .filter(|(k, _)| !gaps.iter().any(|(n, _)| *n == *k as i64))
                    .map(|(_, c)| c)
                    .collect::<Vec<_>>()
            }
            _ => {
                let hi = depth as i64 - 1;
                let e = ff.expansion(beta, &params.pinf, hi)?;
                if e.start < 0 {
                    return Err(Error::Internal(format!("beta_{j}^({i}) has a pole at P_inf")));
                }
                e.window(0, hi)
            }
        };
        if raw.len() < cols {
            return Err(Error::Internal(format!("row expansion gave {} of {cols} columns", raw.len())));
        }
        let out = raw[..cols].to_vec();
        self.cache.insert((i, j), raw);
        Ok(out)
    }

    pub fn build(&mut self, rows: usize, cols: usize) -> Result<MatrixSet> {
        self.system.extend_to(rows)?;
        let s = self.system.params().s();
        let mut mats = Vec::with_capacity(s);
        for i in 1..=s {
            mats.push((1..=rows).map(|j| self.row(i, j, cols)).collect::<Result<Vec<_>>>()?);
        }
        let k = self.system.field().field().clone();
        MatrixSet::from_rows(k, self.system.params().variant, self.mu, self.system.field().genus(), mats)
    }
}

/// Matrices with `rows` rows and `cols` columns for the genus-0 and
/// positive-genus constructions: column `k·μ + r` of row `j` of `C^(i)` is
/// the coefficient of `x^r` in `a_{j,k}^(i)`.
pub fn build_rows_block<F: FunctionField>(system: BetaSystem<'_, F>, rows: usize, cols: usize) -> Result<MatrixSet> {
    if system.params().variant == Variant::XingStyle {
        return Err(Error::InvalidParams("use build_rows_xing for the xing variant".into()));
    }
    MatrixBuilder::new(system).build(rows, cols)
}

/// Matrices for the xing variant: expansion in the `z`-system with the
/// coefficients at the gap indices deleted.
pub fn build_rows_xing<F: FunctionField>(system: BetaSystem<'_, F>, rows: usize, cols: usize) -> Result<MatrixSet> {
    if system.params().variant != Variant::XingStyle {
        return Err(Error::InvalidParams("build_rows_xing needs the xing variant".into()));
    }
    MatrixBuilder::new(system).build(rows, cols)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::ConstructionParams;
    use crate::divisor::Divisor;
    use crate::ellcurve::{Curve, EllipticFunctionField, PlaceEC};
    use crate::gf::prime_field;
    use crate::poly::Poly;
    use crate::ratfunc::{PlaceG0, RationalFunctionField};

    fn f2_kit(ff: &RationalFunctionField) -> BetaSystem<'_, RationalFunctionField> {
        let k = ff.field();
        let params = ConstructionParams {
            variant: Variant::Genus0,
            places: vec![PlaceG0::Infinite, PlaceG0::Finite(Poly::x(k))],
            pinf: PlaceG0::Finite(Poly::linear(k, k.one())),
            aux: Divisor::zero(),
            vandermonde: false,
        };
        BetaSystem::new(ff, params).unwrap()
    }

    fn idx(r: &[FieldElement]) -> Vec<usize> {
        r.iter().map(|e| e.index()).collect()
    }

    #[test]
    fn f2_rows_from_expansions() {
        let ff = RationalFunctionField::new(prime_field(2).unwrap());
        let ms = build_rows_block(f2_kit(&ff), 4, 6).unwrap();
        // x^2 = (1+z)^2 = 1 + z^2
        assert_eq!(idx(ms.matrix(0).row(2)), vec![1, 0, 1, 0, 0, 0]);
        // 1/x = Σ z^k
        assert_eq!(idx(ms.matrix(1).row(0)), vec![1; 6]);
    }

    #[test]
    fn prefix_consistency() {
        let ff = RationalFunctionField::new(prime_field(3).unwrap());
        let k = ff.field().clone();
        let params = ConstructionParams {
            variant: Variant::Genus0,
            places: vec![PlaceG0::Infinite, PlaceG0::Finite(Poly::x(&k)), PlaceG0::Finite(Poly::linear(&k, k.one()))],
            pinf: ff.places_of_degree(2)[0].clone(),
            aux: Divisor::zero(),
            vandermonde: false,
        };
        let small = build_rows_block(BetaSystem::new(&ff, params.clone()).unwrap(), 3, 5).unwrap();
        let big = build_rows_block(BetaSystem::new(&ff, params).unwrap(), 6, 9).unwrap();
        assert_eq!(big.prefix(3, 5).unwrap(), small);
    }

    #[test]
    fn mu_two_block_layout() {
        let ff = RationalFunctionField::new(prime_field(2).unwrap());
        let k = ff.field().clone();
        let pinf = ff.places_of_degree(2)[0].clone();
        let params = ConstructionParams {
            variant: Variant::Genus0,
            places: vec![PlaceG0::Infinite, PlaceG0::Finite(Poly::x(&k)), PlaceG0::Finite(Poly::linear(&k, k.one()))],
            pinf: pinf.clone(),
            aux: Divisor::zero(),
            vandermonde: false,
        };
        let mut b = MatrixBuilder::new(BetaSystem::new(&ff, params).unwrap());
        let ms = b.build(3, 6).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let beta = b.system().beta(i + 1, j + 1).unwrap();
                let e = ff.expansion(beta, &pinf, 2).unwrap();
                assert_eq!(ms.matrix(i).row(j), &e.window(0, 2)[..]);
            }
        }
        // β_2^(1) = x: a_0 = x, so columns 0,1 are (0,1)
        assert_eq!(idx(&ms.matrix(0).row(1)[..2]), vec![0, 1]);
    }

    fn f3_xing(ff: &EllipticFunctionField) -> BetaSystem<'_, EllipticFunctionField> {
        let places: Vec<PlaceEC> = ff.rational_places().into_iter().skip(1).collect();
        let params = ConstructionParams {
            variant: Variant::XingStyle,
            aux: Divisor::single(places[0], 2),
            places,
            pinf: PlaceEC::AtInfinity,
            vandermonde: false,
        };
        BetaSystem::new(ff, params).unwrap()
    }

    #[test]
    fn z_system_shape_and_deletion() {
        let ff = EllipticFunctionField::new(Curve::parse(prime_field(3).unwrap(), "0,0,0,2,0").unwrap());
        let mut sys = f3_xing(&ff);
        sys.extend_to(4).unwrap();
        let gaps = sys.gaps().to_vec();
        let z = z_system(&ff, &PlaceEC::AtInfinity, &gaps, 6).unwrap();
        for (k, zk) in z.iter().enumerate() {
            assert_eq!(ff.valuation(zk, &PlaceEC::AtInfinity), Some(k as i64));
        }
        let (n1, w1) = &gaps[0];
        let unit = z_coefficients(&ff, w1, &PlaceEC::AtInfinity, &gaps, 6).unwrap();
        let want: Vec<usize> = (0..6).map(|k| usize::from(k as i64 == *n1)).collect();
        assert_eq!(idx(&unit), want);
        // re-expanding from the z-coefficients reproduces β up to O(t^depth)
        let depth = 7;
        for i in 1..=3 {
            for j in 1..=4 {
                let beta = sys.beta(i, j).unwrap();
                let a = z_coefficients(&ff, beta, &PlaceEC::AtInfinity, &gaps, depth).unwrap();
                let z = z_system(&ff, &PlaceEC::AtInfinity, &gaps, depth).unwrap();
                let rest = ff.sub(beta, &ff.combine(&a, &z));
                assert!(ff.is_zero(&rest) || ff.valuation(&rest, &PlaceEC::AtInfinity).unwrap() >= depth as i64);
            }
        }
        let ms = build_rows_xing(sys, 4, 6).unwrap();
        assert_eq!((ms.rows(), ms.cols(), ms.s()), (4, 6, 3));
    }

    #[test]
    fn xing_build_is_deterministic() {
        let ff = EllipticFunctionField::new(Curve::parse(prime_field(3).unwrap(), "0,0,0,2,0").unwrap());
        let a = build_rows_xing(f3_xing(&ff), 4, 6).unwrap().serialize();
        let ff2 = EllipticFunctionField::new(Curve::parse(prime_field(3).unwrap(), "0,0,0,2,0").unwrap());
        let b = build_rows_xing(f3_xing(&ff2), 4, 6).unwrap().serialize();
        assert_eq!(a, b);
    }

    #[test]
    fn serialization_round_trip_and_tamper() {
        let ff = RationalFunctionField::new(prime_field(2).unwrap());
        let ms = build_rows_block(f2_kit(&ff), 5, 5).unwrap();
        let text = ms.serialize();
        assert!(text.starts_with("FFNETS v1\nq=2^1\ns=2 variant=genus0 mu=1 g=0 digest="));
        assert_eq!(MatrixSet::deserialize(&text).unwrap(), ms);
        let tampered = text.replacen("C 2 rows=5 cols=5\n1", "C 2 rows=5 cols=5\n0", 1);
        assert_ne!(tampered, text);
        assert!(matches!(MatrixSet::deserialize(&tampered), Err(Error::DigestMismatch { .. })));
        assert!(MatrixSet::deserialize(&text.replace("FFNETS v1", "FFNETS v2")).is_err());
        assert!(MatrixSet::deserialize(&text[..text.len() - 4]).is_err());
    }

    #[test]
    fn extension_field_header() {
        let k = crate::gf::field_of_size(4).unwrap();
        let rows = vec![vec![k.elem(3).unwrap(), k.elem(2).unwrap()]];
        let ms = MatrixSet::from_rows(k, Variant::Genus0, 1, 0, vec![rows]).unwrap();
        let text = ms.serialize();
        assert!(text.contains("q=2^2 modulus=1,1,1"));
        assert_eq!(MatrixSet::deserialize(&text).unwrap(), ms);
    }
}
