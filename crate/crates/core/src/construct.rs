//! Selection of the elements `β_j^(i)` whose local expansions at `P∞` give
//! the rows of the generating matrices, for the three constructions:
//!
//! * [`Variant::Genus0`]: `β_j^(1) ∈ L((j-1)(P_1 - P_2))`, `β_j^(i) ∈ L(j(P_i - P_1))`.
//! * [`Variant::GenusPositive`]: the same shape twisted by an auxiliary
//!   effective divisor `D` of degree `2g`, with the exact pole/zero orders
//!   forced by avoiding one or two codimension-one subspaces.
//! * [`Variant::XingStyle`]: the positive-genus elements plus a basis `w_f` of
//!   `L(D - P_1)` adapted to the gap numbers `n_f` at a rational `P∞`.
//!
//! Every choice is deterministic: "first" always refers to the order in which
//! the backend's `rr_basis` lists its basis.

use std::fmt;
use std::str::FromStr;

use crate::divisor::Divisor;
use crate::error::{Error, Result};
use crate::function_field::FunctionField;
use crate::gf::FieldElement;
use crate::netverify;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Variant {
    Genus0,
    GenusPositive,
    XingStyle,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Genus0 => "genus0",
            Variant::GenusPositive => "gpos",
            Variant::XingStyle => "xing",
        })
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "genus0" => Ok(Variant::Genus0),
            "gpos" => Ok(Variant::GenusPositive),
            "xing" => Ok(Variant::XingStyle),
            _ => Err(Error::Parse(format!("unknown variant {s:?}"))),
        }
    }
}

pub struct ConstructionParams<F: FunctionField> {
    pub variant: Variant,
    /// `P_1, ..., P_s`.
    pub places: Vec<F::Place>,
    pub pinf: F::Place,
    /// Auxiliary divisor `D`; ignored (and required zero) for `Genus0`.
    pub aux: Divisor<F::Place>,
    pub vandermonde: bool,
}

impl<F: FunctionField> Clone for ConstructionParams<F> {
    fn clone(&self) -> Self {
        ConstructionParams {
            variant: self.variant,
            places: self.places.clone(),
            pinf: self.pinf.clone(),
            aux: self.aux.clone(),
            vandermonde: self.vandermonde,
        }
    }
}

impl<F: FunctionField> ConstructionParams<F> {
    pub fn s(&self) -> usize {
        self.places.len()
    }

    pub fn validate(&self, ff: &F) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParams(m));
        if self.places.len() < 2 {
            return bad(format!("need s >= 2 places, got {}", self.places.len()));
        }
        for (i, p) in self.places.iter().enumerate() {
            if ff.place_degree(p) != 1 {
                return bad(format!("P_{} = {p} is not rational", i + 1));
            }
            if self.places[..i].contains(p) {
                return bad(format!("place {p} repeated"));
            }
            if *p == self.pinf {
                return bad(format!("P_inf = {p} coincides with P_{}", i + 1));
            }
        }
        let g = ff.genus() as i64;
        match self.variant {
            Variant::Genus0 => {
                if g != 0 {
                    return bad("the genus0 variant needs a genus-0 backend".into());
                }
                if !self.aux.is_zero() {
                    return bad("the genus0 variant takes no auxiliary divisor".into());
                }
            }
            Variant::GenusPositive | Variant::XingStyle => {
                if self.vandermonde {
                    return bad("vandermonde mode exists only for genus0".into());
                }
                if self.aux.iter().any(|(_, n)| n < 0) {
                    return bad(format!("D = {} is not effective", self.aux));
                }
                if ff.divisor_degree(&self.aux) != 2 * g {
                    return bad(format!("deg D = {} but 2g = {}", ff.divisor_degree(&self.aux), 2 * g));
                }
                for p in self.aux.support() {
                    if *p == self.pinf || self.places[1..].contains(p) {
                        return bad(format!("D meets P_inf or P_2..P_s at {p}"));
                    }
                }
                if self.variant == Variant::XingStyle && ff.place_degree(&self.pinf) != 1 {
                    return bad("the xing variant needs a rational P_inf".into());
                }
            }
        }
        Ok(())
    }
}

/// Coefficient of `t^idx` at a rational place.
fn coeff_at<F: FunctionField>(ff: &F, f: &F::Elem, p: &F::Place, idx: i64) -> Result<FieldElement> {
    Ok(ff.expansion(f, p, idx)?.coeff(idx)[0])
}

/// First basis element whose coefficient at `t^idx` at `p` is nonzero, i.e.
/// which leaves the subspace cut out by raising the order at `p` by one.
fn first_leaving<F: FunctionField>(ff: &F, basis: &[F::Elem], p: &F::Place, idx: i64) -> Result<Option<F::Elem>> {
    for b in basis {
        if !coeff_at(ff, b, p, idx)?.is_zero() {
            return Ok(Some(b.clone()));
        }
    }
    Ok(None)
}

fn first_nonzero<F: FunctionField>(ff: &F, d: &Divisor<F::Place>) -> Result<F::Elem> {
    ff.rr_basis(d)
        .into_iter()
        .next()
        .ok_or_else(|| Error::Internal(format!("L({d}) is zero")))
}

/// `β_j^(i)` for the genus-0 construction (1-based `i`, `j`).
pub fn choose_beta_g0<F: FunctionField>(ff: &F, params: &ConstructionParams<F>, i: usize, j: usize) -> Result<F::Elem> {
    let p1 = &params.places[0];
    let j = j as i64;
    let d = if i == 1 {
        &Divisor::from_terms([(p1.clone(), 1), (params.places[1].clone(), -1)]) * (j - 1)
    } else {
        &Divisor::from_terms([(params.places[i - 1].clone(), 1), (p1.clone(), -1)]) * j
    };
    first_nonzero(ff, &d)
}

/// The Vandermonde generators `α_1 ∈ L(P_1 - P_2)`, `α_i ∈ L(P_i - P_1)`.
pub fn vandermonde_alphas<F: FunctionField>(ff: &F, params: &ConstructionParams<F>) -> Result<Vec<F::Elem>> {
    (1..=params.s())
        .map(|i| {
            let (a, b) = if i == 1 { (0, 1) } else { (i - 1, 0) };
            first_nonzero(ff, &Divisor::from_terms([(params.places[a].clone(), 1), (params.places[b].clone(), -1)]))
        })
        .collect()
}

/// `β_j^(i)` for the positive-genus constructions.
pub fn choose_beta_gpos<F: FunctionField>(ff: &F, params: &ConstructionParams<F>, i: usize, j: usize) -> Result<F::Elem> {
    let p1 = &params.places[0];
    let d1 = params.aux.coefficient(p1);
    let j = j as i64;
    if i == 1 {
        // L(D + (j-1)P_1 - (j-1)P_2) \ L(D + (j-2)P_1 - (j-1)P_2)
        let a = &params.aux + &(&Divisor::from_terms([(p1.clone(), 1), (params.places[1].clone(), -1)]) * (j - 1));
        let basis = ff.rr_basis(&a);
        return first_leaving(ff, &basis, p1, -(d1 + j - 1))?
            .ok_or_else(|| Error::Internal(format!("L({a}) has no element with exact pole order at {p1}")));
    }
    // L(D + jP_i - jP_1) minus L(D + jP_i - (j+1)P_1) and L(D + (j-1)P_i - jP_1)
    let pi = &params.places[i - 1];
    let a = &params.aux + &(&Divisor::from_terms([(pi.clone(), 1), (p1.clone(), -1)]) * j);
    let basis = ff.rr_basis(&a);
    let idx1 = j - d1;
    let idx2 = -(params.aux.coefficient(pi) + j);
    let missing = || Error::Internal(format!("both subspaces of L({a}) are everything"));
    let u = first_leaving(ff, &basis, p1, idx1)?.ok_or_else(missing)?;
    if !coeff_at(ff, &u, pi, idx2)?.is_zero() {
        return Ok(u);
    }
    let v = first_leaving(ff, &basis, pi, idx2)?.ok_or_else(missing)?;
    if !coeff_at(ff, &v, p1, idx1)?.is_zero() {
        return Ok(v);
    }
    Ok(ff.add(&u, &v))
}

/// Gap numbers `n_f` of `n ↦ l(D - P_1 - n P∞)` on `0..2g` and the adapted
/// basis `w_f` of `L(D - P_1)` with `ν_{P∞}(w_f) = n_f`.
pub fn compute_gap_basis<F: FunctionField>(ff: &F, params: &ConstructionParams<F>) -> Result<Vec<(i64, F::Elem)>> {
    let g = ff.genus() as i64;
    let p1 = &params.places[0];
    let base = &params.aux - &Divisor::single(p1.clone(), 1);
    let spaces: Vec<Vec<F::Elem>> = (0..=2 * g)
        .map(|n| ff.rr_basis(&(&base - &Divisor::single(params.pinf.clone(), n))))
        .collect();
    let dims: Vec<usize> = spaces.iter().map(Vec::len).collect();
    if dims[0] as i64 != g || dims[2 * g as usize] != 0 {
        return Err(Error::Internal(format!("dimension sequence {dims:?} does not run from g = {g} to 0")));
    }
    let mut out = Vec::new();
    for n in 0..2 * g as usize {
        match dims[n] - dims[n + 1] {
            0 => {}
            1 => {
                let w = first_leaving(ff, &spaces[n], &params.pinf, n as i64)?
                    .ok_or_else(|| Error::Internal(format!("no element of exact order {n} at P_inf")))?;
                out.push((n as i64, w));
            }
            _ => return Err(Error::Internal(format!("dimension sequence {dims:?} drops by more than one"))),
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub checks: usize,
    pub violations: Vec<String>,
    /// `(rank, count)` of the joint independence check.
    pub independence: Option<(usize, usize)>,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty() && self.independence.is_none_or(|(r, c)| r == c)
    }

    fn expect(&mut self, cond: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !cond {
            self.violations.push(what());
        }
    }
}

/// The elements of one construction, grown on demand.
pub struct BetaSystem<'a, F: FunctionField> {
    ff: &'a F,
    params: ConstructionParams<F>,
    /// `betas[i-1][j-1]`.
    betas: Vec<Vec<F::Elem>>,
    alphas: Option<Vec<F::Elem>>,
    gaps: Vec<(i64, F::Elem)>,
}

impl<'a, F: FunctionField> BetaSystem<'a, F> {
    pub fn new(ff: &'a F, params: ConstructionParams<F>) -> Result<Self> {
        params.validate(ff)?;
        let alphas = if params.vandermonde { Some(vandermonde_alphas(ff, &params)?) } else { None };
        let gaps = if params.variant == Variant::XingStyle { compute_gap_basis(ff, &params)? } else { Vec::new() };
        let s = params.s();
        Ok(BetaSystem { ff, params, betas: vec![Vec::new(); s], alphas, gaps })
    }

    pub fn field(&self) -> &'a F {
        self.ff
    }

    pub fn params(&self) -> &ConstructionParams<F> {
        &self.params
    }

    pub fn gaps(&self) -> &[(i64, F::Elem)] {
        &self.gaps
    }

    pub fn depth(&self) -> usize {
        self.betas[0].len()
    }

    /// Ensures `β_j^(i)` exists for all `j <= j_max`.
    pub fn extend_to(&mut self, j_max: usize) -> Result<()> {
        for i in 1..=self.params.s() {
            while self.betas[i - 1].len() < j_max {
                let j = self.betas[i - 1].len() + 1;
                let b = self.choose(i, j)?;
                self.betas[i - 1].push(b);
            }
        }
        Ok(())
    }

    fn choose(&self, i: usize, j: usize) -> Result<F::Elem> {
        match (&self.alphas, self.params.variant) {
            (Some(alphas), _) => {
                let e = if i == 1 { j as i64 - 1 } else { j as i64 };
                self.ff.pow(&alphas[i - 1], e)
            }
            (None, Variant::Genus0) => choose_beta_g0(self.ff, &self.params, i, j),
            (None, _) => choose_beta_gpos(self.ff, &self.params, i, j),
        }
    }

    /// `β_j^(i)`, 1-based; `None` beyond the built depth.
    pub fn beta(&self, i: usize, j: usize) -> Option<&F::Elem> {
        self.betas.get(i.checked_sub(1)?)?.get(j.checked_sub(1)?)
    }

    /// Checks the valuation identities for every built element, and the
    /// joint linear independence of the built family (with the `w_f`).
    pub fn validate(&self) -> Result<ValidationReport> {
        let ff = self.ff;
        let p = &self.params;
        let p1 = &p.places[0];
        let d1 = p.aux.coefficient(p1);
        let mut rep = ValidationReport::default();
        let val = |f: &F::Elem, q: &F::Place| ff.valuation(f, q);
        let positive = p.variant != Variant::Genus0;
        for i in 1..=p.s() {
            for (jj, b) in self.betas[i - 1].iter().enumerate() {
                let j = jj as i64 + 1;
                let name = format!("beta_{j}^({i})");
                rep.expect(val(b, &p.pinf).is_some_and(|v| v >= 0), || format!("{name}: negative order at P_inf"));
                if i == 1 {
                    let want = -(j - 1) - d1;
                    rep.expect(val(b, p1) == Some(want), || format!("{name}: order at P_1 is {:?}, want {want}", val(b, p1)));
                    if !positive {
                        rep.expect(val(b, &p.places[1]) == Some(j - 1), || format!("{name}: order at P_2 is {:?}, want {}", val(b, &p.places[1]), j - 1));
                    }
                } else {
                    let pi = &p.places[i - 1];
                    rep.expect(val(b, pi) == Some(-j), || format!("{name}: order at P_{i} is {:?}, want {}", val(b, pi), -j));
                    let want = j - d1;
                    rep.expect(val(b, p1) == Some(want), || format!("{name}: order at P_1 is {:?}, want {want}", val(b, p1)));
                }
                if positive {
                    for (h, ph) in p.places.iter().enumerate().skip(1) {
                        if h + 1 != i {
                            rep.expect(val(b, ph).is_some_and(|v| v >= 0), || format!("{name}: pole at P_{}", h + 1));
                        }
                    }
                }
            }
        }
        let g = ff.genus() as i64;
        let mut last = -1;
        for (n, w) in &self.gaps {
            rep.expect(*n > last && *n < 2 * g, || format!("gap numbers not increasing in [0, 2g): {n}"));
            last = *n;
            rep.expect(val(w, &p.pinf) == Some(*n), || format!("w for gap {n}: order at P_inf is {:?}", val(w, &p.pinf)));
            rep.expect(val(w, p1).is_some_and(|v| v >= 1 - d1), || format!("w for gap {n}: order at P_1 below 1 - D(P_1)"));
            for ph in &p.places[1..] {
                rep.expect(val(w, ph).is_some_and(|v| v >= 0), || format!("w for gap {n}: pole at {ph}"));
            }
        }
        let mut family: Vec<F::Elem> = self.gaps.iter().map(|(_, w)| w.clone()).collect();
        family.extend(self.betas.iter().flatten().cloned());
        if !family.is_empty() {
            let r = netverify::independence_rank(ff, &family, &p.pinf, None)?;
            rep.independence = Some((r, family.len()));
        }
        Ok(rep)
    }
}

/// One line per element; two systems built from equal parameters print
/// identically.
impl<F: FunctionField> fmt::Display for BetaSystem<'_, F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, w) in &self.gaps {
            writeln!(f, "gap {n} w={w}")?;
        }
        for (i, col) in self.betas.iter().enumerate() {
            for (j, b) in col.iter().enumerate() {
                writeln!(f, "beta {} {} {}", i + 1, j + 1, b)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ellcurve::{Curve, EllipticFunctionField, PlaceEC};
    use crate::gf::prime_field;
    use crate::poly::Poly;
    use crate::ratfunc::{PlaceG0, RatFunc, RationalFunctionField};

    fn g0_params(ff: &RationalFunctionField, s: usize, pinf: PlaceG0, vandermonde: bool) -> ConstructionParams<RationalFunctionField> {
        let k = ff.field();
        let mut places = vec![PlaceG0::Infinite];
        places.extend(k.elements().take(s - 1).map(|c| PlaceG0::Finite(Poly::linear(k, c))));
        ConstructionParams { variant: Variant::Genus0, places, pinf, aux: Divisor::zero(), vandermonde }
    }

    fn ec_f3() -> EllipticFunctionField {
        EllipticFunctionField::new(Curve::parse(prime_field(3).unwrap(), "0,0,0,2,0").unwrap())
    }

    fn ec_params(ff: &EllipticFunctionField, variant: Variant) -> ConstructionParams<EllipticFunctionField> {
        let places: Vec<PlaceEC> = ff.rational_places().into_iter().skip(1).collect();
        ConstructionParams {
            variant,
            aux: Divisor::single(places[0], 2),
            places,
            pinf: PlaceEC::AtInfinity,
            vandermonde: false,
        }
    }

    #[test]
    fn genus0_example_elements() {
        let ff = RationalFunctionField::new(prime_field(3).unwrap());
        let k = ff.field().clone();
        let pinf = ff.finite_place(Poly::from_indices(&k, &[1, 0, 1]).unwrap()).unwrap();
        let p = g0_params(&ff, 3, pinf, false);
        let x = Poly::x(&k);
        // β_3^(1) is a multiple of x^2; β_1^(1) = 1
        assert_eq!(choose_beta_g0(&ff, &p, 1, 3).unwrap(), RatFunc::poly(x.pow(2, &k), &k));
        assert_eq!(choose_beta_g0(&ff, &p, 1, 1).unwrap(), ff.one());
        // P_3 = x + 1: β_j^(3) = 1/(x+1)^j
        for j in 1..4 {
            let want = RatFunc::new(Poly::one(&k), Poly::linear(&k, k.one()).pow(j, &k), &k).unwrap();
            assert_eq!(choose_beta_g0(&ff, &p, 3, j as usize).unwrap(), want);
        }
    }

    #[test]
    fn genus0_lemma_identities_and_independence() {
        let ff = RationalFunctionField::new(prime_field(2).unwrap());
        let pinf = ff.finite_place(Poly::from_indices(ff.field(), &[1, 1]).unwrap()).unwrap();
        let mut sys = BetaSystem::new(&ff, g0_params(&ff, 2, pinf, false)).unwrap();
        sys.extend_to(4).unwrap();
        let rep = sys.validate().unwrap();
        assert!(rep.ok(), "{rep:?}");
        assert_eq!(rep.independence, Some((8, 8)));
    }

    #[test]
    fn vandermonde_matches_default_up_to_scalars() {
        let ff = RationalFunctionField::new(prime_field(5).unwrap());
        let pinf = ff.places_of_degree(2)[0].clone();
        let mut a = BetaSystem::new(&ff, g0_params(&ff, 4, pinf.clone(), false)).unwrap();
        let mut b = BetaSystem::new(&ff, g0_params(&ff, 4, pinf, true)).unwrap();
        a.extend_to(5).unwrap();
        b.extend_to(5).unwrap();
        for i in 1..=4 {
            for j in 1..=5 {
                let (x, y) = (a.beta(i, j).unwrap(), b.beta(i, j).unwrap());
                let ratio = ff.mul(x, &ff.inv(y).unwrap());
                assert!(ratio.den().degree() == Some(0) && ratio.num().degree() == Some(0), "{x} vs {y}");
            }
        }
    }

    #[test]
    fn gpos_elements_have_exact_orders() {
        let ff = ec_f3();
        let p = ec_params(&ff, Variant::GenusPositive);
        let mut sys = BetaSystem::new(&ff, p.clone()).unwrap();
        sys.extend_to(4).unwrap();
        let rep = sys.validate().unwrap();
        assert!(rep.ok(), "{rep:?}");
        for j in 1..=4 {
            let b = sys.beta(2, j).unwrap();
            assert_eq!(ff.valuation(b, &p.places[1]), Some(-(j as i64)));
            assert_eq!(ff.valuation(b, &p.places[0]), Some(j as i64 - 2));
            assert!(ff.valuation(b, &p.places[2]).unwrap() >= 0);
        }
    }

    #[test]
    fn gap_basis_on_f3_curve() {
        let ff = ec_f3();
        let p = ec_params(&ff, Variant::XingStyle);
        let gaps = compute_gap_basis(&ff, &p).unwrap();
        assert_eq!(gaps.len(), 1);
        let (n1, w1) = &gaps[0];
        // D - P_1 = P_1: L(P_1) = constants, and l(P_1 - P_inf) = 0
        assert_eq!(*n1, 0);
        assert_eq!(ff.valuation(w1, &PlaceEC::AtInfinity), Some(0));
        let mut sys = BetaSystem::new(&ff, p).unwrap();
        sys.extend_to(3).unwrap();
        let rep = sys.validate().unwrap();
        assert!(rep.ok(), "{rep:?}");
        assert_eq!(rep.independence, Some((10, 10)));
    }

    #[test]
    fn construction_is_deterministic() {
        let ff = ec_f3();
        let build = || {
            let mut s = BetaSystem::new(&ff, ec_params(&ff, Variant::XingStyle)).unwrap();
            s.extend_to(4).unwrap();
            s.to_string()
        };
        assert_eq!(build(), build());
    }

    #[test]
    fn invalid_params_rejected() {
        let ff = ec_f3();
        let mut p = ec_params(&ff, Variant::GenusPositive);
        p.aux = Divisor::single(p.places[0], 1);
        assert!(matches!(BetaSystem::new(&ff, p), Err(Error::InvalidParams(_))));
        let mut p = ec_params(&ff, Variant::GenusPositive);
        p.aux = Divisor::single(p.places[1], 2);
        assert!(BetaSystem::new(&ff, p).is_err());
        let mut p = ec_params(&ff, Variant::Genus0);
        p.aux = Divisor::zero();
        assert!(BetaSystem::new(&ff, p).is_err());
        let mut p = ec_params(&ff, Variant::GenusPositive);
        p.pinf = p.places[2];
        assert!(BetaSystem::new(&ff, p).is_err());
    }
}
