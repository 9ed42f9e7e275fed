//! Genus-1 backend: elliptic function fields `F_q(x, y)` given by a long
//! Weierstrass equation `y^2 + a1 x y + a3 y = x^3 + a2 x^2 + a4 x + a6`.
//!
//! Functions are stored as `(a(x) + b(x) y) / den(x)`. Because the affine
//! coordinate ring is integrally closed, removing the common polynomial factor
//! of `a`, `b`, `den` and making `den` monic gives a unique representative.
//!
//! Local parameters are fixed per place: `t = x/y` at infinity, `t = x - x0`
//! at an affine point where `∂F/∂y != 0`, and `t = y - y0` otherwise. The
//! coordinate series at a place are obtained by fixed-point iteration on the
//! curve equation and memoised.

use std::collections::HashMap;
use std::fmt;
use std::sync::Mutex;

use crate::divisor::Divisor;
use crate::error::{Error, Result};
use crate::function_field::{Expansion, FunctionField};
use crate::gf::{FieldElement, FieldSpec};
use crate::linalg;
use crate::poly::Poly;
use crate::series::Laurent;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Curve {
    k: FieldSpec,
    a: [FieldElement; 5],
}

impl Curve {
    /// Coefficients in the order `a1, a2, a3, a4, a6`.
    pub fn new(k: FieldSpec, a: [FieldElement; 5]) -> Result<Self> {
        let c = Curve { k, a };
        if c.discriminant().is_zero() {
            return Err(Error::SingularCurve);
        }
        Ok(c)
    }

    /// `curve a1=<e> a2=<e> a3=<e> a4=<e> a6=<e>` or the compact
    /// `a1,a2,a3,a4,a6`, entries being digit indices.
    pub fn parse(k: FieldSpec, s: &str) -> Result<Self> {
        let s = s.trim();
        let vals: Vec<usize> = if let Some(rest) = s.strip_prefix("curve") {
            let mut out = [None; 5];
            for tok in rest.split_whitespace() {
                let (name, v) = tok.split_once('=').ok_or_else(|| Error::Parse(format!("bad curve token {tok:?}")))?;
                let slot = ["a1", "a2", "a3", "a4", "a6"]
                    .iter()
                    .position(|&n| n == name)
                    .ok_or_else(|| Error::Parse(format!("unknown curve coefficient {name:?}")))?;
                out[slot] = Some(v.parse().map_err(|_| Error::Parse(format!("bad value in {tok:?}")))?);
            }
            out.iter().map(|v| v.unwrap_or(0)).collect()
        } else {
            s.split(',')
                .map(|t| t.trim().parse().map_err(|_| Error::Parse(format!("bad curve coefficient {t:?}"))))
                .collect::<Result<_>>()?
        };
        if vals.len() != 5 {
            return Err(Error::Parse(format!("expected 5 curve coefficients, got {}", vals.len())));
        }
        let mut a = [FieldElement::ZERO; 5];
        for (slot, &v) in a.iter_mut().zip(&vals) {
            *slot = k.elem(v)?;
        }
        Curve::new(k, a)
    }

    pub fn field(&self) -> &FieldSpec {
        &self.k
    }

    pub fn coefficients(&self) -> [FieldElement; 5] {
        self.a
    }

    pub fn discriminant(&self) -> FieldElement {
        let k = &self.k;
        let [a1, a2, a3, a4, a6] = self.a;
        let m = |x, y| k.mul(x, y);
        let b2 = k.add(m(a1, a1), k.times(4, a2));
        let b4 = k.add(k.times(2, a4), m(a1, a3));
        let b6 = k.add(m(a3, a3), k.times(4, a6));
        let b8 = [m(m(a1, a1), a6), k.times(4, m(a2, a6)), k.neg(m(m(a1, a3), a4)), m(a2, m(a3, a3)), k.neg(m(a4, a4))]
            .into_iter()
            .fold(k.zero(), |acc, t| k.add(acc, t));
        [
            k.neg(m(m(b2, b2), b8)),
            k.times(-8, m(b4, m(b4, b4))),
            k.times(-27, m(b6, b6)),
            k.times(9, m(b2, m(b4, b6))),
        ]
        .into_iter()
        .fold(k.zero(), |acc, t| k.add(acc, t))
    }

    /// `F(x, y) = y^2 + a1 x y + a3 y - x^3 - a2 x^2 - a4 x - a6`.
    pub fn equation(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        let k = &self.k;
        let lhs = k.add(k.mul(y, y), k.mul(y, k.add(k.mul(self.a[0], x), self.a[2])));
        k.sub(lhs, self.rhs().eval(x, k))
    }

    pub fn contains(&self, x: FieldElement, y: FieldElement) -> bool {
        self.equation(x, y).is_zero()
    }

    /// `x^3 + a2 x^2 + a4 x + a6`.
    fn rhs(&self) -> Poly {
        Poly::new(vec![self.a[4], self.a[3], self.a[1], self.k.one()])
    }

    /// `a1 x + a3`.
    fn lin(&self) -> Poly {
        Poly::new(vec![self.a[2], self.a[0]])
    }

    /// `∂F/∂y = 2y + a1 x + a3`.
    fn dfdy(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        let k = &self.k;
        k.add(k.times(2, y), k.add(k.mul(self.a[0], x), self.a[2]))
    }
}

impl fmt::Display for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a1, a2, a3, a4, a6] = self.a.map(|c| c.index());
        write!(f, "curve a1={a1} a2={a2} a3={a3} a4={a4} a6={a6}")
    }
}

/// A rational place: the point at infinity `O` or an affine point.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum PlaceEC {
    AtInfinity,
    Affine(FieldElement, FieldElement),
}

impl fmt::Display for PlaceEC {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlaceEC::AtInfinity => write!(f, "O"),
            PlaceEC::Affine(x, y) => write!(f, "({},{})", x.index(), y.index()),
        }
    }
}

pub type DivisorEC = Divisor<PlaceEC>;

/// `(a(x) + b(x) y) / den(x)` in canonical form.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FuncEC {
    a: Poly,
    b: Poly,
    den: Poly,
}

impl FuncEC {
    pub fn new(a: Poly, b: Poly, den: Poly, k: &FieldSpec) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let g = a.gcd(&b, k);
        if g.is_zero() {
            return Ok(FuncEC { a, b, den: Poly::one(k) });
        }
        let g = g.gcd(&den, k);
        let (a, b, den) = (a.div_exact(&g, k)?, b.div_exact(&g, k)?, den.div_exact(&g, k)?);
        let c = k.inv_nz(den.lead());
        Ok(FuncEC { a: a.scale(c, k), b: b.scale(c, k), den: den.scale(c, k) })
    }

    pub fn parts(&self) -> (&Poly, &Poly, &Poly) {
        (&self.a, &self.b, &self.den)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

impl fmt::Display for FuncEC {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num = match (self.a.is_zero(), self.b.is_zero()) {
            (true, true) => "0".to_string(),
            (false, true) => self.a.pretty(),
            (true, false) => format!("({})*y", self.b.pretty()),
            (false, false) => format!("{}+({})*y", self.a.pretty(), self.b.pretty()),
        };
        if self.den.degree() == Some(0) {
            write!(f, "{num}")
        } else {
            write!(f, "({num})/({})", self.den.pretty())
        }
    }
}

#[derive(Clone)]
struct Coords {
    x: Laurent,
    y: Laurent,
    work: i64,
}

pub struct EllipticFunctionField {
    curve: Curve,
    places: Vec<PlaceEC>,
    cache: Mutex<HashMap<PlaceEC, Coords>>,
}

impl fmt::Debug for EllipticFunctionField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "EllipticFunctionField({})", self.curve)
    }
}

const MAX_WORK_PRECISION: i64 = 1 << 12;

impl EllipticFunctionField {
    pub fn new(curve: Curve) -> Self {
        let k = curve.field().clone();
        let mut places = vec![PlaceEC::AtInfinity];
        for x in k.elements() {
            for y in k.elements() {
                if curve.contains(x, y) {
                    places.push(PlaceEC::Affine(x, y));
                }
            }
        }
        EllipticFunctionField { curve, places, cache: Mutex::new(HashMap::new()) }
    }

    pub fn curve(&self) -> &Curve {
        &self.curve
    }

    fn k(&self) -> &FieldSpec {
        &self.curve.k
    }

    pub fn func(&self, a: Poly, b: Poly, den: Poly) -> Result<FuncEC> {
        FuncEC::new(a, b, den, self.k())
    }

    pub fn x(&self) -> FuncEC {
        self.func(Poly::x(self.k()), Poly::zero(), Poly::one(self.k())).unwrap()
    }

    pub fn y(&self) -> FuncEC {
        self.func(Poly::zero(), Poly::one(self.k()), Poly::one(self.k())).unwrap()
    }

    /// Series of `x` and `y` in the local parameter at `p`, each correct to
    /// at least `work` terms of absolute precision relative to the series
    /// computations below.
    fn coords(&self, p: &PlaceEC, work: i64) -> Coords {
        if let Some(c) = self.cache.lock().unwrap().get(p) {
            if c.work >= work {
                return c.clone();
            }
        }
        let c = self.compute_coords(p, work);
        self.cache.lock().unwrap().insert(*p, c.clone());
        c
    }

    fn compute_coords(&self, p: &PlaceEC, n: i64) -> Coords {
        let k = self.k();
        let [a1, a2, a3, a4, a6] = self.curve.a;
        let cst = |c| Laurent::constant(c, n);
        let t = Laurent::new(1, vec![k.one()], n);
        match *p {
            PlaceEC::AtInfinity => {
                // t = x/y, s = 1/y:  s = t^3 + a2 t^2 s + a4 t s^2 + a6 s^3 - a1 t s - a3 s^2
                let t2 = t.mul(&t, k);
                let t3 = t2.mul(&t, k);
                let mut s = Laurent::new(n, vec![], n);
                for _ in 0..n {
                    let s2 = s.mul(&s, k);
                    let s3 = s2.mul(&s, k);
                    s = t3
                        .add(&t2.mul(&s, k).scale(a2, k), k)
                        .add(&t.mul(&s2, k).scale(a4, k), k)
                        .add(&s3.scale(a6, k), k)
                        .sub(&t.mul(&s, k).scale(a1, k), k)
                        .sub(&s2.scale(a3, k), k);
                }
                let s_inv = s.inv(k).expect("s = t^3 + ...");
                Coords { x: t.mul(&s_inv, k), y: s_inv, work: n }
            }
            PlaceEC::Affine(x0, y0) if !self.curve.dfdy(x0, y0).is_zero() => {
                // t = x - x0, y = y0 + Y:  Y = -(Y^2 + F(x, y0)) / (2 y0 + a1 x + a3)
                let x = cst(x0).add(&t, k);
                let lin = Laurent::eval_poly(&self.curve.lin(), &x, n, k);
                let fxy0 = cst(k.mul(y0, y0))
                    .add(&lin.scale(y0, k), k)
                    .sub(&Laurent::eval_poly(&self.curve.rhs(), &x, n, k), k);
                let c = cst(k.times(2, y0)).add(&lin, k);
                let c_inv = c.inv(k).expect("nonzero partial derivative");
                let mut yy = Laurent::new(n, vec![], n);
                for _ in 0..n {
                    yy = yy.mul(&yy, k).add(&fxy0, k).mul(&c_inv, k).neg(k);
                }
                Coords { x, y: cst(y0).add(&yy, k), work: n }
            }
            PlaceEC::Affine(x0, y0) => {
                // t = y - y0, x = x0 + X:  X = -(c0 + c2 X^2 - X^3) / c1
                let y = cst(y0).add(&t, k);
                let c0 = y
                    .mul(&y, k)
                    .add(&y.scale(k.add(k.mul(a1, x0), a3), k), k)
                    .sub(&cst(self.curve.rhs().eval(x0, k)), k);
                let c1 = y.scale(a1, k).sub(&cst(k.add(k.add(k.times(3, k.mul(x0, x0)), k.times(2, k.mul(a2, x0))), a4)), k);
                let c2 = cst(k.neg(k.add(k.times(3, x0), a2)));
                let c1_inv = c1.inv(k).expect("nonsingular point");
                let mut xx = Laurent::new(n, vec![], n);
                for _ in 0..n {
                    let x2 = xx.mul(&xx, k);
                    let x3 = x2.mul(&xx, k);
                    xx = c0.add(&c2.mul(&x2, k), k).sub(&x3, k).mul(&c1_inv, k).neg(k);
                }
                Coords { x: cst(x0).add(&xx, k), y, work: n }
            }
        }
    }

    /// `f` as a Laurent series at `p`, correct to at least index `upto`.
    fn series(&self, f: &FuncEC, p: &PlaceEC, upto: i64) -> Result<Laurent> {
        let k = self.k();
        let pole_room = 2 * (f.a.deg().max(f.b.deg() + 2) + f.den.deg()).max(0) + 8;
        let mut work = upto.max(0) + pole_room;
        loop {
            let c = self.coords(p, work);
            let n = c.x.precision().min(c.y.precision());
            let num = Laurent::eval_poly(&f.a, &c.x, n, k).add(&Laurent::eval_poly(&f.b, &c.x, n, k).mul(&c.y, k), k);
            let den = Laurent::eval_poly(&f.den, &c.x, n, k);
            if let Ok(v) = num.div(&den, k) {
                if v.precision() > upto {
                    return Ok(v);
                }
            }
            work += work.max(8);
            if work > MAX_WORK_PRECISION {
                return Err(Error::Internal(format!("expansion of {f} at {p} did not reach index {upto}")));
            }
        }
    }

    /// Upper bound for `ν_P(f)` at any place, from the degree of the pole divisor.
    fn valuation_bound(f: &FuncEC) -> i64 {
        (2 * f.a.deg()).max(2 * f.b.deg() + 3) + 2 * f.den.deg() + 1
    }

    /// `F_q`-coordinates of `L(D)` inside the span of monomials, used by
    /// [`FunctionField::rr_basis`].
    fn rr_basis_impl(&self, d: &DivisorEC) -> Vec<FuncEC> {
        let k = self.k().clone();
        // clear affine poles with g = Π (x - x0)^e
        let mut clear: Vec<(FieldElement, i64)> = Vec::new();
        for (p, n) in d.iter() {
            if let (PlaceEC::Affine(x0, _), true) = (p, n > 0) {
                match clear.iter_mut().find(|(x, _)| x == x0) {
                    Some(slot) => slot.1 = slot.1.max(n),
                    None => clear.push((*x0, n)),
                }
            }
        }
        let g = clear
            .iter()
            .fold(Poly::one(&k), |acc, &(x0, e)| acc.mul(&Poly::linear(&k, k.neg(x0)).pow(e as u64, &k), &k));
        let top = d.coefficient(&PlaceEC::AtInfinity) + 2 * g.deg();
        if top < 0 {
            return Vec::new();
        }
        // monomials x^i (pole order 2i) and x^j y (pole order 2j + 3), by pole order
        let monos: Vec<(usize, bool)> = (0..=top)
            .filter_map(|o| match o {
                o if o % 2 == 0 => Some(((o / 2) as usize, false)),
                o if o >= 3 => Some((((o - 3) / 2) as usize, true)),
                _ => None,
            })
            .collect();
        let mono_func = |&(i, with_y): &(usize, bool)| {
            let xi = Poly::monomial(&k, k.one(), i);
            if with_y {
                self.func(Poly::zero(), xi, Poly::one(&k)).unwrap()
            } else {
                self.func(xi, Poly::zero(), Poly::one(&k)).unwrap()
            }
        };
        let mono_funcs: Vec<FuncEC> = monos.iter().map(mono_func).collect();

        let mut rows: Vec<Vec<FieldElement>> = Vec::new();
        for q in self.places.iter().filter(|q| **q != PlaceEC::AtInfinity) {
            let PlaceEC::Affine(xq, _) = *q else { unreachable!() };
            let e = clear.iter().find(|(x, _)| *x == xq).map_or(0, |&(_, e)| e);
            let n_q = d.coefficient(q);
            if e == 0 && n_q == 0 {
                continue;
            }
            let vx = if e > 0 {
                self.valuation(&self.func(Poly::linear(&k, k.neg(xq)), Poly::zero(), Poly::one(&k)).unwrap(), q)
                    .unwrap()
            } else {
                0
            };
            let need = -n_q + e * vx;
            if need <= 0 {
                continue;
            }
            let exps: Vec<Laurent> = mono_funcs
                .iter()
                .map(|m| self.series(m, q, need - 1).expect("polynomial functions expand"))
                .collect();
            for idx in 0..need {
                rows.push(exps.iter().map(|s| s.get(idx)).collect());
            }
        }
        linalg::kernel(&k, &rows, monos.len())
            .into_iter()
            .map(|v| {
                let mut a = Poly::zero();
                let mut b = Poly::zero();
                for (c, &(i, with_y)) in v.iter().zip(&monos) {
                    let term = Poly::monomial(&k, *c, i);
                    if with_y {
                        b = b.add(&term, &k);
                    } else {
                        a = a.add(&term, &k);
                    }
                }
                self.func(a, b, g.clone()).unwrap()
            })
            .collect()
    }
}

impl FunctionField for EllipticFunctionField {
    type Elem = FuncEC;
    type Place = PlaceEC;

    fn field(&self) -> &FieldSpec {
        self.k()
    }

    fn genus(&self) -> usize {
        1
    }

    fn place_degree(&self, _p: &PlaceEC) -> usize {
        1
    }

    fn rational_places(&self) -> Vec<PlaceEC> {
        self.places.clone()
    }

    /// `O` or `(x0,y0)` with digit indices.
    fn parse_place(&self, s: &str) -> Result<PlaceEC> {
        let s = s.trim();
        if s == "O" {
            return Ok(PlaceEC::AtInfinity);
        }
        let inner = s
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| Error::InvalidPlace(format!("{s:?} is neither O nor (x0,y0)")))?;
        let (xs, ys) = inner.split_once(',').ok_or_else(|| Error::InvalidPlace(s.into()))?;
        let parse = |t: &str| t.trim().parse::<usize>().map_err(|_| Error::InvalidPlace(s.into()));
        let (x, y) = (self.k().elem(parse(xs)?)?, self.k().elem(parse(ys)?)?);
        if !self.curve.contains(x, y) {
            return Err(Error::InvalidPlace(format!("{s} is not on the curve")));
        }
        Ok(PlaceEC::Affine(x, y))
    }

    fn rr_basis(&self, d: &DivisorEC) -> Vec<FuncEC> {
        self.rr_basis_impl(d)
    }

    fn valuation(&self, f: &FuncEC, p: &PlaceEC) -> Option<i64> {
        if f.is_zero() {
            return None;
        }
        let bound = Self::valuation_bound(f);
        let s = self.series(f, p, bound).expect("expansion within bound");
        Some(s.valuation().expect("nonzero function has a visible valuation"))
    }

    fn expansion(&self, f: &FuncEC, p: &PlaceEC, upto: i64) -> Result<Expansion> {
        if f.is_zero() {
            return Ok(Expansion::new(1, upto + 1, upto, Vec::new()));
        }
        let s = self.series(f, p, upto)?;
        let start = match s.valuation() {
            Some(v) if v <= upto => v,
            _ => return Ok(Expansion::new(1, upto + 1, upto, Vec::new())),
        };
        Ok(Expansion::new(1, start, upto, (start..=upto).map(|i| s.get(i)).collect()))
    }

    fn local_parameter(&self, p: &PlaceEC) -> FuncEC {
        let k = self.k();
        match *p {
            PlaceEC::AtInfinity => self.mul(&self.x(), &self.inv(&self.y()).unwrap()),
            PlaceEC::Affine(x0, y0) if !self.curve.dfdy(x0, y0).is_zero() => {
                self.func(Poly::linear(k, k.neg(x0)), Poly::zero(), Poly::one(k)).unwrap()
            }
            PlaceEC::Affine(_, y0) => self.func(Poly::constant(k.neg(y0)), Poly::one(k), Poly::one(k)).unwrap(),
        }
    }

    fn constant(&self, c: FieldElement) -> FuncEC {
        self.func(Poly::constant(c), Poly::zero(), Poly::one(self.k())).unwrap()
    }

    fn variable(&self, name: &str) -> Option<FuncEC> {
        match name {
            "x" => Some(self.x()),
            "y" => Some(self.y()),
            _ => None,
        }
    }

    fn add(&self, f: &FuncEC, g: &FuncEC) -> FuncEC {
        let k = self.k();
        let a = f.a.mul(&g.den, k).add(&g.a.mul(&f.den, k), k);
        let b = f.b.mul(&g.den, k).add(&g.b.mul(&f.den, k), k);
        self.func(a, b, f.den.mul(&g.den, k)).unwrap()
    }

    fn mul(&self, f: &FuncEC, g: &FuncEC) -> FuncEC {
        // y^2 = rhs(x) - lin(x) y
        let k = self.k();
        let bb = f.b.mul(&g.b, k);
        let a = f.a.mul(&g.a, k).add(&bb.mul(&self.curve.rhs(), k), k);
        let b = f.a.mul(&g.b, k).add(&g.a.mul(&f.b, k), k).sub(&bb.mul(&self.curve.lin(), k), k);
        self.func(a, b, f.den.mul(&g.den, k)).unwrap()
    }

    fn scale(&self, c: FieldElement, f: &FuncEC) -> FuncEC {
        let k = self.k();
        self.func(f.a.scale(c, k), f.b.scale(c, k), f.den.clone()).unwrap()
    }

    fn inv(&self, f: &FuncEC) -> Result<FuncEC> {
        if f.is_zero() {
            return Err(Error::DivisionByZero);
        }
        // (a + b y)(a - b lin - b y) = a^2 - a b lin - b^2 rhs
        let k = self.k();
        let lin = self.curve.lin();
        let conj_a = f.a.sub(&f.b.mul(&lin, k), k);
        let norm = f.a.mul(&f.a, k).sub(&f.a.mul(&f.b, k).mul(&lin, k), k).sub(&f.b.mul(&f.b, k).mul(&self.curve.rhs(), k), k);
        self.func(f.den.mul(&conj_a, k), f.den.mul(&f.b, k).neg(k), norm)
    }

    fn is_zero(&self, f: &FuncEC) -> bool {
        f.is_zero()
    }
}
