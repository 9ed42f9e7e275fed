//! The acceptance suite: ten pass/fail criteria over the shipped kits, shared
//! by the `acceptance` test target and the `selftest` subcommand.
//!
//! Every comparison is exact. Randomised checks use a fixed-seed generator,
//! so a run is fully reproducible.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::construct::Variant;
use crate::divisor::Divisor;
use crate::ellcurve::{Curve, EllipticFunctionField, FuncEC};
use crate::error::Result;
use crate::function_field::FunctionField;
use crate::genmat::MatrixSet;
use crate::gf::{field_of_size, prime_field, FieldSpec};
use crate::netverify::{self, compositions, rows_independent};
use crate::params::{Backend, ParamSpec};
use crate::pipeline;
use crate::poly::Poly;
use crate::ratfunc::{PlaceG0, RatFunc, RationalFunctionField};

/// Largest `m` examined by the quality criteria.
pub const M_MAX: usize = 8;
/// Largest `j` examined by the valuation-identity criterion.
pub const J_VALIDATE: usize = 5;
/// Largest `j` in the joint independence criterion.
pub const J_INDEPENDENCE: usize = 3;
pub const RR_GENUS0_SAMPLES: usize = 60;
pub const RR_GENUS1_SAMPLES: usize = 24;
pub const PAIR_SAMPLES_GENUS0: usize = 1000;
pub const PAIR_SAMPLES_GENUS1: usize = 200;
pub const SEED: u64 = 0x5eed_f1e1d;

/// `(q, s, mu)` of the genus-0 kits.
pub const GENUS0_KITS: [(u64, usize, usize); 5] = [(2, 2, 1), (2, 3, 2), (3, 4, 1), (3, 4, 2), (5, 6, 1)];
/// Genus-0 kits with `mu = 2` and `s = q + 1`.
pub const MU2_KITS: [(u64, usize, usize); 2] = [(2, 3, 2), (3, 4, 2)];
/// `(q, curve, s)`: `y^2 + y = x^3` over `F_2` and `y^2 = x^3 - x` over `F_3`.
pub const CURVE_KITS: [(u64, [usize; 5], usize); 2] = [(2, [0, 0, 1, 0, 0], 2), (3, [0, 0, 0, 2, 0], 3)];

/// The matrix file of the `F_2` kit with `s = 2`, 8 rows and 8 columns.
pub const GOLDEN_F2: &str = include_str!("../data/golden_f2_s2.ffnets");

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag} [{}] {}: {}", self.id, self.title, self.detail)
    }
}

fn outcome(id: u8, title: &'static str, parts: Vec<(bool, String)>) -> Outcome {
    let passed = parts.iter().all(|(ok, _)| *ok);
    let detail = parts.into_iter().map(|(_, d)| d).collect::<Vec<_>>().join("; ");
    Outcome { id, title, passed, detail }
}

pub fn genus0_spec(q: u64, s: usize, mu: usize) -> Result<ParamSpec> {
    Ok(ParamSpec::kit_genus0(field_of_size(q)?, s, mu))
}

pub fn curve_spec(q: u64, curve: [usize; 5], s: usize, variant: Variant) -> Result<ParamSpec> {
    Ok(ParamSpec::kit_curve(field_of_size(q)?, curve, s, variant))
}

/// Every kit the suite builds, labelled.
pub fn all_kits() -> Vec<(String, Result<ParamSpec>)> {
    let mut out = Vec::new();
    for (q, s, mu) in GENUS0_KITS {
        out.push((format!("genus0 ({q},{s},{mu})"), genus0_spec(q, s, mu)));
    }
    for (q, c, s) in CURVE_KITS {
        for v in [Variant::GenusPositive, Variant::XingStyle] {
            out.push((format!("{v} q={q} s={s}"), curve_spec(q, c, s, v)));
        }
    }
    out
}

fn t_profile(ms: &MatrixSet, m_max: usize) -> Result<Vec<usize>> {
    (1..=m_max).map(|m| netverify::minimal_t(ms, m)).collect()
}

/// Builds the kit and checks `T*(m) <= limit(m)` for `m <= m_max`.
fn quality(label: &str, spec: Result<ParamSpec>, m_max: usize, limit: impl Fn(usize) -> usize) -> (bool, String) {
    let res = spec.and_then(|s| pipeline::construct(&s, m_max, m_max)).and_then(|ms| t_profile(&ms, m_max));
    match res {
        Ok(ts) => {
            let ok = ts.iter().enumerate().all(|(i, &t)| t <= limit(i + 1));
            (ok, format!("{label}: T* = {ts:?}"))
        }
        Err(e) => (false, format!("{label}: {e}")),
    }
}

pub fn criterion_1(m_max: usize) -> Outcome {
    let parts = GENUS0_KITS
        .iter()
        .map(|&(q, s, mu)| quality(&format!("({q},{s},{mu})"), genus0_spec(q, s, mu), m_max, |m| m % mu))
        .collect();
    outcome(1, "genus-0 kits satisfy T*(m) <= m mod mu", parts)
}

pub fn criterion_2(m_max: usize) -> Outcome {
    let parts = MU2_KITS
        .iter()
        .map(|&(q, s, mu)| quality(&format!("q={q} s={s}"), genus0_spec(q, s, mu), m_max, |m| m % 2))
        .collect();
    outcome(2, "mu=2, s=q+1: T* <= 0 for even m, <= 1 for odd m", parts)
}

pub fn criterion_3(m_max: usize) -> Outcome {
    let parts = CURVE_KITS
        .iter()
        .map(|&(q, c, s)| quality(&format!("q={q} s={s}"), curve_spec(q, c, s, Variant::GenusPositive), m_max, |_| 2))
        .collect();
    outcome(3, "elliptic kits, auxiliary divisor D = 2P_1: T*(m) <= 2", parts)
}

pub fn criterion_4(m_max: usize) -> Outcome {
    let parts = CURVE_KITS
        .iter()
        .map(|&(q, c, s)| {
            let label = format!("q={q} s={s}");
            let run = || -> Result<(usize, Option<String>)> {
                let ms = pipeline::construct(&curve_spec(q, c, s, Variant::XingStyle)?, m_max, m_max)?;
                let mut checked = 0;
                for m in 1..=m_max {
                    for d in 1..m {
                        for comp in compositions(d, s) {
                            checked += 1;
                            if !rows_independent(&ms, m, &comp)? {
                                return Ok((checked, Some(format!("dependent rows at m={m}, d={comp:?}"))));
                            }
                        }
                    }
                }
                Ok((checked, None))
            };
            match run() {
                Ok((n, None)) => (true, format!("{label}: {n} compositions independent")),
                Ok((_, Some(why))) => (false, format!("{label}: {why}")),
                Err(e) => (false, format!("{label}: {e}")),
            }
        })
        .collect();
    outcome(4, "gap-deleted elliptic kits: rows independent whenever sum d_i <= m-1", parts)
}

pub fn criterion_5(j_max: usize) -> Outcome {
    let mut parts = Vec::new();
    let mut unbuildable = Vec::new();
    for (label, spec) in all_kits() {
        match spec.and_then(|s| s.resolved()) {
            Err(e) => unbuildable.push(format!("{label} ({e})")),
            Ok(spec) => match pipeline::validate(&spec, j_max) {
                Ok(rep) => {
                    let ok = rep.ok();
                    let mut d = format!("{label}: {} checks, {} violations", rep.checks, rep.violations.len());
                    if let Some((r, c)) = rep.independence {
                        d.push_str(&format!(", rank {r}/{c}"));
                    }
                    if let Some(v) = rep.violations.first() {
                        d.push_str(&format!(" (first: {v})"));
                    }
                    parts.push((ok, d));
                }
                Err(e) => parts.push((false, format!("{label}: {e}"))),
            },
        }
    }
    if !unbuildable.is_empty() {
        parts.push((true, format!("not buildable, no elements to check: {}", unbuildable.join(", "))));
    }
    outcome(5, "valuation identities of every constructed element", parts)
}

pub fn criterion_6(j_max: usize) -> Outcome {
    let parts = CURVE_KITS
        .iter()
        .map(|&(q, c, s)| {
            let label = format!("q={q} s={s}");
            let run = || -> Result<(usize, usize)> {
                let spec = curve_spec(q, c, s, Variant::XingStyle)?;
                let Backend::Elliptic(ff) = spec.backend()? else { unreachable!() };
                let mut sys = crate::construct::BetaSystem::new(&ff, spec.resolve(&ff)?)?;
                sys.extend_to(j_max)?;
                let mut family: Vec<FuncEC> = sys.gaps().iter().map(|(_, w)| w.clone()).collect();
                for i in 1..=s {
                    for j in 1..=j_max {
                        family.push(sys.beta(i, j).expect("built").clone());
                    }
                }
                let r = netverify::independence_rank(&ff, &family, &sys.params().pinf, None)?;
                Ok((r, family.len()))
            };
            match run() {
                Ok((r, n)) => (r == n, format!("{label}: rank {r} of {n}")),
                Err(e) => (false, format!("{label}: {e}")),
            }
        })
        .collect();
    outcome(6, "gap basis and elements jointly independent", parts)
}

pub fn criterion_7() -> Outcome {
    let m = 4;
    let run = || -> Result<Vec<(bool, String)>> {
        let ms = pipeline::construct(&genus0_spec(2, 2, 1)?, m, m + 2)?;
        (0..3u128)
            .map(|k| {
                let res = pipeline::netcheck(&ms, m, 0, k)?;
                let bad: Vec<_> = res.iter().filter(|(_, ok)| !ok).map(|(s, _)| s.clone()).collect();
                Ok((bad.is_empty(), format!("offset {k}: {} shapes, failing {bad:?}", res.len())))
            })
            .collect()
    };
    let parts = run().unwrap_or_else(|e| vec![(false, e.to_string())]);
    outcome(7, "F_2 kit, m=4: one point per elementary box for every shape", parts)
}

/// `C(j, k) mod 2`.
fn pascal_mod2(j: usize, k: usize) -> usize {
    // Lucas: C(j, k) is odd iff the bits of k are a subset of those of j
    usize::from(k & !j == 0)
}

pub fn criterion_8() -> Outcome {
    let n = 8;
    let part = match genus0_spec(2, 2, 1).and_then(|s| pipeline::construct(&s, n, n)) {
        Ok(ms) => {
            let c = ms.matrix(0);
            let diff: Vec<(usize, usize)> = (0..n)
                .flat_map(|j| (0..n).map(move |k| (j, k)))
                .filter(|&(j, k)| c.entry(j, k).index() != pascal_mod2(j, k))
                .collect();
            (diff.is_empty(), format!("{} of {} entries differ", diff.len(), n * n))
        }
        Err(e) => (false, e.to_string()),
    };
    outcome(8, "F_2 kit first matrix equals the Pascal matrix mod 2 (8x8)", vec![part])
}

fn rand_poly(k: &FieldSpec, rng: &mut ChaCha8Rng, max_deg: usize) -> Poly {
    let d = rng.random_range(0..=max_deg);
    let c: Vec<_> = (0..=d).map(|_| k.elem(rng.random_range(0..k.size())).expect("in range")).collect();
    Poly::new(c)
}

fn rand_nonzero_poly(k: &FieldSpec, rng: &mut ChaCha8Rng, max_deg: usize) -> Poly {
    loop {
        let p = rand_poly(k, rng, max_deg);
        if !p.is_zero() {
            return p;
        }
    }
}

fn rand_ratfunc(k: &FieldSpec, rng: &mut ChaCha8Rng) -> RatFunc {
    RatFunc::new(rand_poly(k, rng, 3), rand_nonzero_poly(k, rng, 3), k).expect("nonzero denominator")
}

fn rand_funcec(ff: &EllipticFunctionField, rng: &mut ChaCha8Rng) -> FuncEC {
    let k = ff.field().clone();
    ff.func(rand_poly(&k, rng, 2), rand_poly(&k, rng, 1), rand_nonzero_poly(&k, rng, 2)).expect("nonzero denominator")
}

/// Checks `ν(fg) = ν(f) + ν(g)` and linearity of the expansion for one pair.
fn pair_ok<F: FunctionField>(ff: &F, f: &F::Elem, g: &F::Elem, p: &F::Place, a: crate::gf::FieldElement, b: crate::gf::FieldElement) -> Result<bool> {
    let mut ok = true;
    if let (Some(vf), Some(vg)) = (ff.valuation(f, p), ff.valuation(g, p)) {
        ok &= ff.valuation(&ff.mul(f, g), p) == Some(vf + vg);
    }
    let upto = 6;
    let h = ff.add(&ff.scale(a, f), &ff.scale(b, g));
    let (ef, eg, eh) = (ff.expansion(f, p, upto)?, ff.expansion(g, p, upto)?, ff.expansion(&h, p, upto)?);
    let lo = ef.start.min(eg.start).min(eh.start).min(upto);
    let k = ff.field();
    for i in lo..=upto {
        let want: Vec<_> = ef.coeff(i).iter().zip(eg.coeff(i)).map(|(&x, y)| k.add(k.mul(a, x), k.mul(b, y))).collect();
        ok &= eh.coeff(i) == want;
    }
    Ok(ok)
}

fn rr_dims_genus0(rng: &mut ChaCha8Rng, samples: usize) -> Result<(usize, usize)> {
    let mut bad = 0;
    let mut done = 0;
    while done < samples {
        let q = [2u64, 3, 4, 5][rng.random_range(0..4)];
        let ff = RationalFunctionField::new(field_of_size(q)?);
        let mut pool = ff.places_of_degree(1);
        pool.extend(ff.places_of_degree(2));
        let mut d: Divisor<PlaceG0> = Divisor::zero();
        for _ in 0..rng.random_range(1..=4) {
            d.add_term(pool[rng.random_range(0..pool.len())].clone(), rng.random_range(-3..=4));
        }
        let deg = ff.divisor_degree(&d);
        if deg < 0 {
            continue;
        }
        done += 1;
        let basis = ff.rr_basis(&d);
        let in_space = basis.iter().all(|f| d.iter().all(|(p, n)| ff.valuation(f, p).is_some_and(|v| v >= -n)));
        if basis.len() as i64 != deg + 1 || !in_space {
            bad += 1;
        }
    }
    Ok((done, bad))
}

fn test_curves() -> Result<Vec<EllipticFunctionField>> {
    [(2u32, "0,0,1,0,0"), (3, "0,0,0,2,0"), (5, "0,0,0,1,1")]
        .iter()
        .map(|&(p, c)| Ok(EllipticFunctionField::new(Curve::parse(prime_field(p)?, c)?)))
        .collect()
}

fn rr_dims_genus1(rng: &mut ChaCha8Rng, samples: usize) -> Result<(usize, usize)> {
    let curves = test_curves()?;
    let mut bad = 0;
    let mut done = 0;
    while done < samples {
        let ff = &curves[rng.random_range(0..curves.len())];
        let pool = ff.rational_places();
        let mut d = Divisor::zero();
        for _ in 0..rng.random_range(1..=3) {
            d.add_term(pool[rng.random_range(0..pool.len())], rng.random_range(-2..=3));
        }
        let deg = ff.divisor_degree(&d);
        if deg < 1 {
            continue;
        }
        done += 1;
        let basis = ff.rr_basis(&d);
        let in_space = basis.iter().all(|f| d.iter().all(|(p, n)| ff.valuation(f, p).is_some_and(|v| v >= -n)));
        if basis.len() as i64 != deg || !in_space {
            bad += 1;
        }
    }
    Ok((done, bad))
}

fn pairs_genus0(rng: &mut ChaCha8Rng, samples: usize) -> Result<usize> {
    let mut bad = 0;
    for _ in 0..samples {
        let q = [2u64, 3, 4, 5, 7][rng.random_range(0..5)];
        let ff = RationalFunctionField::new(field_of_size(q)?);
        let k = ff.field().clone();
        let mu = rng.random_range(1..=2);
        let pool = ff.places_of_degree(mu);
        let p = &pool[rng.random_range(0..pool.len())];
        let (f, g) = (rand_ratfunc(&k, rng), rand_ratfunc(&k, rng));
        let (a, b) = (k.elem(rng.random_range(0..q as usize))?, k.elem(rng.random_range(0..q as usize))?);
        if !pair_ok(&ff, &f, &g, p, a, b)? {
            bad += 1;
        }
    }
    Ok(bad)
}

fn pairs_genus1(rng: &mut ChaCha8Rng, samples: usize) -> Result<usize> {
    let curves = test_curves()?;
    let mut bad = 0;
    for _ in 0..samples {
        let ff = &curves[rng.random_range(0..curves.len())];
        let k = ff.field().clone();
        let pool = ff.rational_places();
        let p = &pool[rng.random_range(0..pool.len())];
        let (f, g) = (rand_funcec(ff, rng), rand_funcec(ff, rng));
        let (a, b) = (k.elem(rng.random_range(0..k.size()))?, k.elem(rng.random_range(0..k.size()))?);
        if !pair_ok(ff, &f, &g, p, a, b)? {
            bad += 1;
        }
    }
    Ok(bad)
}

pub fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut parts = Vec::new();
    match rr_dims_genus0(&mut rng, RR_GENUS0_SAMPLES) {
        Ok((n, bad)) => parts.push((bad == 0, format!("genus 0: {bad}/{n} divisors with dim L(D) != deg D + 1"))),
        Err(e) => parts.push((false, format!("genus 0: {e}"))),
    }
    match rr_dims_genus1(&mut rng, RR_GENUS1_SAMPLES) {
        Ok((n, bad)) => parts.push((bad == 0, format!("genus 1: {bad}/{n} divisors with dim L(D) != deg D"))),
        Err(e) => parts.push((false, format!("genus 1: {e}"))),
    }
    match (pairs_genus0(&mut rng, PAIR_SAMPLES_GENUS0), pairs_genus1(&mut rng, PAIR_SAMPLES_GENUS1)) {
        (Ok(b0), Ok(b1)) => parts.push((
            b0 + b1 == 0,
            format!("{} of {} pairs violate multiplicativity or linearity", b0 + b1, PAIR_SAMPLES_GENUS0 + PAIR_SAMPLES_GENUS1),
        )),
        (Err(e), _) | (_, Err(e)) => parts.push((false, format!("pairs: {e}"))),
    }
    outcome(9, "Riemann-Roch dimensions, valuations and expansions", parts)
}

pub fn criterion_10(m: usize) -> Outcome {
    let mut parts = Vec::new();
    let mut unbuildable = Vec::new();
    for (label, spec) in all_kits() {
        let run = || -> Result<(String, String)> {
            let spec = spec.clone()?;
            let a = pipeline::construct(&spec, m, m)?.serialize();
            let b = pipeline::construct(&spec, m, m)?.serialize();
            Ok((a, b))
        };
        match run() {
            Ok((a, b)) => parts.push((a == b, format!("{label}: {}", if a == b { "identical" } else { "DIFFERENT" }))),
            Err(e) => unbuildable.push(format!("{label} ({e})")),
        }
    }
    if !unbuildable.is_empty() {
        parts.push((true, format!("not buildable, nothing to compare: {}", unbuildable.join(", "))));
    }
    outcome(10, "repeated construction gives byte-identical files", parts)
}

/// Rebuilds the `F_2` kit and compares it with a bundled matrix file.
pub fn golden_check(golden: &str) -> Outcome {
    let run = || -> Result<(bool, String)> {
        let loaded = MatrixSet::deserialize(golden)?;
        let built = pipeline::construct(&genus0_spec(2, 2, 1)?, loaded.rows(), loaded.cols())?;
        let same = built.serialize() == golden && built == loaded;
        Ok((same, format!("{}x{} file, digest {}", loaded.rows(), loaded.cols(), &loaded.digest()[..16])))
    };
    let part = run().unwrap_or_else(|e| (false, e.to_string()));
    Outcome { id: 0, title: "bundled matrix file matches a fresh build", passed: part.0, detail: part.1 }
}

/// All criteria, or a fast subset (7, 8, 10 at reduced depth and the golden
/// file) when `quick` is set.
pub fn run(quick: bool) -> Vec<Outcome> {
    if quick {
        return vec![golden_check(GOLDEN_F2), criterion_7(), criterion_8(), criterion_10(4)];
    }
    vec![
        golden_check(GOLDEN_F2),
        criterion_1(M_MAX),
        criterion_2(M_MAX),
        criterion_3(M_MAX),
        criterion_4(M_MAX),
        criterion_5(J_VALIDATE),
        criterion_6(J_INDEPENDENCE),
        criterion_7(),
        criterion_8(),
        criterion_9(),
        criterion_10(M_MAX),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pascal_closed_form() {
        let binom = |n: usize, k: usize| -> usize { (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1)) };
        for j in 0..12 {
            for k in 0..12 {
                let want = if k > j { 0 } else { binom(j, k) % 2 };
                assert_eq!(pascal_mod2(j, k), want, "({j},{k})");
            }
        }
    }
}
