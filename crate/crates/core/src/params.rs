//! Textual construction parameters and the default example kits.
//!
//! ```text
//! variant=genus0 backend=ratfunc q=2^1 s=2 mu=1 places=inf;poly:0,1 pinf=poly:1,1 D=0 vandermonde=0
//! variant=xing backend=curve:0,0,0,2,0 q=3^1 s=3 mu=1 D=2*(0,0)
//! ```
//!
//! `places`, `pinf` and `D` may be omitted, in which case the kit defaults
//! are used: for `F_q(x)`, `P_1 = inf`, `P_i = x + c` over the field elements
//! in index order, and `P∞` the first unused `x + c` (for `mu = 1`) or the
//! smallest monic irreducible of degree `mu`; on a curve, `P_1..P_s` are the
//! first affine points, `P∞ = O` and `D = 2g P_1`.

use std::fmt;
use std::str::FromStr;

use crate::construct::{ConstructionParams, Variant};
use crate::divisor::{parse_divisor, Divisor};
use crate::ellcurve::{Curve, EllipticFunctionField};
use crate::error::{Error, Result};
use crate::function_field::FunctionField;
use crate::gf::{field_of_size, make_field, FieldSpec};
use crate::poly::Poly;
use crate::ratfunc::{PlaceG0, RationalFunctionField};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BackendSpec {
    RationalFunctionField,
    /// Weierstrass coefficients `a1, a2, a3, a4, a6` as digit indices.
    Curve([usize; 5]),
}

impl fmt::Display for BackendSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BackendSpec::RationalFunctionField => f.write_str("ratfunc"),
            BackendSpec::Curve(a) => write!(f, "curve:{},{},{},{},{}", a[0], a[1], a[2], a[3], a[4]),
        }
    }
}

impl FromStr for BackendSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "ratfunc" {
            return Ok(BackendSpec::RationalFunctionField);
        }
        let coeffs = s.strip_prefix("curve:").ok_or_else(|| Error::Parse(format!("unknown backend {s:?}")))?;
        let v: Vec<usize> = coeffs
            .split(',')
            .map(|c| c.trim().parse().map_err(|_| Error::Parse(format!("bad curve coefficient {c:?}"))))
            .collect::<Result<_>>()?;
        let a: [usize; 5] = v.try_into().map_err(|_| Error::Parse("a curve needs 5 coefficients".into()))?;
        Ok(BackendSpec::Curve(a))
    }
}

/// A constructed backend.
pub enum Backend {
    Rational(RationalFunctionField),
    Elliptic(EllipticFunctionField),
}

impl Backend {
    pub fn new(field: &FieldSpec, spec: &BackendSpec) -> Result<Self> {
        Ok(match spec {
            BackendSpec::RationalFunctionField => Backend::Rational(RationalFunctionField::new(field.clone())),
            BackendSpec::Curve(a) => {
                let mut c = [field.zero(); 5];
                for (slot, &i) in c.iter_mut().zip(a) {
                    *slot = field.elem(i)?;
                }
                Backend::Elliptic(EllipticFunctionField::new(Curve::new(field.clone(), c)?))
            }
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamSpec {
    pub variant: Variant,
    pub backend: BackendSpec,
    pub field: FieldSpec,
    pub s: usize,
    pub mu: usize,
    pub places: Option<Vec<String>>,
    pub pinf: Option<String>,
    pub aux: Option<String>,
    pub vandermonde: bool,
}

/// `q=<p>^<e>` (with optional `modulus=`) or `q=<size>`.
pub fn parse_field(q: &str, modulus: Option<&str>) -> Result<FieldSpec> {
    let modulus = modulus
        .map(|m| m.split(',').map(|c| c.trim().parse::<u32>().map_err(|_| Error::Parse(format!("bad modulus {m:?}")))).collect::<Result<Vec<_>>>())
        .transpose()?;
    match q.split_once('^') {
        Some((p, e)) => {
            let p = p.parse().map_err(|_| Error::Parse(format!("bad characteristic in {q:?}")))?;
            let e = e.parse().map_err(|_| Error::Parse(format!("bad degree in {q:?}")))?;
            make_field(p, e, modulus.as_deref())
        }
        None => {
            let n: u64 = q.parse().map_err(|_| Error::Parse(format!("bad field size {q:?}")))?;
            match modulus {
                Some(m) => {
                    let (p, e) = crate::gf::prime_power(n).ok_or_else(|| Error::InvalidField(format!("{n} is not a prime power")))?;
                    make_field(p, e, Some(&m))
                }
                None => field_of_size(n),
            }
        }
    }
}

impl ParamSpec {
    /// The genus-0 kit over `F_q` with `s` coordinates and `deg P∞ = mu`.
    pub fn kit_genus0(field: FieldSpec, s: usize, mu: usize) -> Self {
        ParamSpec {
            variant: Variant::Genus0,
            backend: BackendSpec::RationalFunctionField,
            field,
            s,
            mu,
            places: None,
            pinf: None,
            aux: None,
            vandermonde: false,
        }
    }

    /// The elliptic kit for the given curve.
    pub fn kit_curve(field: FieldSpec, curve: [usize; 5], s: usize, variant: Variant) -> Self {
        ParamSpec {
            variant,
            backend: BackendSpec::Curve(curve),
            field,
            s,
            mu: 1,
            places: None,
            pinf: None,
            aux: None,
            vandermonde: false,
        }
    }

    pub fn backend(&self) -> Result<Backend> {
        Backend::new(&self.field, &self.backend)
    }

    /// Concrete parameters for `ff`, filling in kit defaults.
    pub fn resolve<F: FunctionField>(&self, ff: &F) -> Result<ConstructionParams<F>>
    where
        F: KitDefaults,
    {
        if self.s < 2 {
            return Err(Error::InvalidParams(format!("need s >= 2, got {}", self.s)));
        }
        if self.mu == 0 {
            return Err(Error::InvalidParams("mu must be at least 1".into()));
        }
        let places = match &self.places {
            Some(ps) => {
                if ps.len() != self.s {
                    return Err(Error::InvalidParams(format!("{} places given for s = {}", ps.len(), self.s)));
                }
                ps.iter().map(|p| ff.parse_place(p)).collect::<Result<Vec<_>>>()?
            }
            None => ff.default_places(self.s)?,
        };
        let pinf = match &self.pinf {
            Some(p) => ff.parse_place(p)?,
            None => ff.default_pinf(&places, self.mu)?,
        };
        if ff.place_degree(&pinf) != self.mu {
            return Err(Error::InvalidParams(format!("P_inf = {pinf} has degree {}, mu = {}", ff.place_degree(&pinf), self.mu)));
        }
        let aux = match &self.aux {
            Some(d) => parse_divisor(d, |p| ff.parse_place(p), Error::Parse)?,
            None if self.variant == Variant::Genus0 => Divisor::zero(),
            None => Divisor::single(places[0].clone(), 2 * ff.genus() as i64),
        };
        let params = ConstructionParams { variant: self.variant, places, pinf, aux, vandermonde: self.vandermonde };
        params.validate(ff)?;
        Ok(params)
    }

    /// The same parameters with every default made explicit.
    pub fn resolved(&self) -> Result<ParamSpec> {
        fn fill<F: FunctionField + KitDefaults>(spec: &ParamSpec, ff: &F) -> Result<ParamSpec> {
            let p = spec.resolve(ff)?;
            Ok(ParamSpec {
                places: Some(p.places.iter().map(ToString::to_string).collect()),
                pinf: Some(p.pinf.to_string()),
                aux: Some(p.aux.to_string()),
                ..spec.clone()
            })
        }
        match self.backend()? {
            Backend::Rational(ff) => fill(self, &ff),
            Backend::Elliptic(ff) => fill(self, &ff),
        }
    }
}

impl fmt::Display for ParamSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "variant={} backend={} q={}^{}", self.variant, self.backend, self.field.characteristic(), self.field.degree())?;
        if let Some(m) = self.field.modulus() {
            let m: Vec<String> = m.iter().map(u32::to_string).collect();
            write!(f, " modulus={}", m.join(","))?;
        }
        write!(f, " s={} mu={}", self.s, self.mu)?;
        if let Some(p) = &self.places {
            write!(f, " places={}", p.join(";"))?;
        }
        if let Some(p) = &self.pinf {
            write!(f, " pinf={p}")?;
        }
        if let Some(d) = &self.aux {
            write!(f, " D={d}")?;
        }
        write!(f, " vandermonde={}", u8::from(self.vandermonde))
    }
}

impl FromStr for ParamSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut kv = std::collections::BTreeMap::new();
        for tok in s.split_whitespace() {
            let (k, v) = tok.split_once('=').ok_or_else(|| Error::Parse(format!("expected key=value, got {tok:?}")))?;
            if kv.insert(k, v).is_some() {
                return Err(Error::Parse(format!("duplicate key {k:?}")));
            }
        }
        let known = ["variant", "backend", "q", "modulus", "s", "mu", "places", "pinf", "D", "vandermonde"];
        if let Some(k) = kv.keys().find(|k| !known.contains(k)) {
            return Err(Error::Parse(format!("unknown key {k:?}")));
        }
        let need = |k: &str| kv.get(k).copied().ok_or_else(|| Error::Parse(format!("missing {k}=")));
        let num = |k: &str, default: usize| -> Result<usize> {
            kv.get(k).map_or(Ok(default), |v| v.parse().map_err(|_| Error::Parse(format!("bad {k}={v}"))))
        };
        Ok(ParamSpec {
            variant: need("variant")?.parse()?,
            backend: kv.get("backend").map_or(Ok(BackendSpec::RationalFunctionField), |b| b.parse())?,
            field: parse_field(need("q")?, kv.get("modulus").copied())?,
            s: need("s")?.parse().map_err(|_| Error::Parse("bad s=".into()))?,
            mu: num("mu", 1)?,
            places: kv.get("places").map(|p| p.split(';').map(str::to_string).collect()),
            pinf: kv.get("pinf").map(|p| p.to_string()),
            aux: kv.get("D").map(|d| d.to_string()),
            vandermonde: match kv.get("vandermonde").copied().unwrap_or("0") {
                "0" => false,
                "1" => true,
                v => return Err(Error::Parse(format!("bad vandermonde={v}"))),
            },
        })
    }
}

/// Default place choices of the example kits.
pub trait KitDefaults: FunctionField {
    fn default_places(&self, s: usize) -> Result<Vec<Self::Place>>;
    fn default_pinf(&self, places: &[Self::Place], mu: usize) -> Result<Self::Place>;
}

impl KitDefaults for RationalFunctionField {
    fn default_places(&self, s: usize) -> Result<Vec<PlaceG0>> {
        let k = self.field();
        if s > k.size() + 1 {
            return Err(Error::InvalidParams(format!("s = {s} but F_{}(x) has only {} rational places", k.size(), k.size() + 1)));
        }
        let mut out = vec![PlaceG0::Infinite];
        out.extend(k.elements().take(s - 1).map(|c| PlaceG0::Finite(Poly::linear(k, c))));
        Ok(out)
    }

    fn default_pinf(&self, places: &[PlaceG0], mu: usize) -> Result<PlaceG0> {
        let found = if mu == 1 {
            self.places_of_degree(1).into_iter().find(|p| !places.contains(p))
        } else {
            self.places_of_degree(mu).into_iter().next()
        };
        found.ok_or_else(|| {
            Error::InvalidParams(format!("no place of degree {mu} left for P_inf after {} rational places", places.len()))
        })
    }
}

impl KitDefaults for EllipticFunctionField {
    fn default_places(&self, s: usize) -> Result<Vec<crate::ellcurve::PlaceEC>> {
        let affine: Vec<_> = self.rational_places().into_iter().skip(1).collect();
        if s > affine.len() {
            return Err(Error::InvalidParams(format!("s = {s} but the curve has only {} affine rational points", affine.len())));
        }
        Ok(affine[..s].to_vec())
    }

    fn default_pinf(&self, _places: &[crate::ellcurve::PlaceEC], mu: usize) -> Result<crate::ellcurve::PlaceEC> {
        if mu != 1 {
            return Err(Error::InvalidParams("places of degree > 1 are not supported on curves".into()));
        }
        Ok(crate::ellcurve::PlaceEC::AtInfinity)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::prime_field;

    #[test]
    fn text_round_trip() {
        let text = "variant=genus0 backend=ratfunc q=2^1 s=2 mu=1 places=inf;poly:0,1 pinf=poly:1,1 D=0 vandermonde=0";
        let p: ParamSpec = text.parse().unwrap();
        assert_eq!(p.to_string(), text);
        let q: ParamSpec = "variant=xing backend=curve:0,0,0,2,0 q=3 s=3".parse().unwrap();
        assert_eq!(q.to_string(), "variant=xing backend=curve:0,0,0,2,0 q=3^1 s=3 mu=1 vandermonde=0");
        assert!("variant=genus0 q=2 s=2 foo=1".parse::<ParamSpec>().is_err());
        assert!("variant=genus0 s=2".parse::<ParamSpec>().is_err());
    }

    #[test]
    fn genus0_kit_defaults() {
        let r = ParamSpec::kit_genus0(prime_field(2).unwrap(), 2, 1).resolved().unwrap();
        assert_eq!(r.places.as_deref(), Some(&["inf".to_string(), "poly:0,1".to_string()][..]));
        assert_eq!(r.pinf.as_deref(), Some("poly:1,1"));
        let r = ParamSpec::kit_genus0(prime_field(2).unwrap(), 3, 2).resolved().unwrap();
        assert_eq!(r.pinf.as_deref(), Some("poly:1,1,1"));
        // s = q + 1 leaves no rational P_inf; s = q + 2 has too few places
        assert!(ParamSpec::kit_genus0(prime_field(2).unwrap(), 3, 1).resolved().is_err());
        assert!(ParamSpec::kit_genus0(prime_field(2).unwrap(), 4, 2).resolved().is_err());
    }

    #[test]
    fn curve_kit_defaults() {
        let k = prime_field(3).unwrap();
        let r = ParamSpec::kit_curve(k.clone(), [0, 0, 0, 2, 0], 3, Variant::GenusPositive).resolved().unwrap();
        assert_eq!(r.aux.as_deref(), Some("2*(0,0)"));
        assert_eq!(r.pinf.as_deref(), Some("O"));
        assert!(ParamSpec::kit_curve(k, [0, 0, 0, 2, 0], 4, Variant::GenusPositive).resolved().is_err());
        let again: ParamSpec = r.to_string().parse().unwrap();
        assert_eq!(again, r);
    }
}
