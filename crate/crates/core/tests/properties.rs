use ffnets::construct::Variant;
use ffnets::divisor::Divisor;
use ffnets::ellcurve::{Curve, EllipticFunctionField, FuncEC};
use ffnets::function_field::FunctionField;
use ffnets::genmat::MatrixSet;
use ffnets::gf::{field_of_size, prime_field, FieldElement, FieldSpec};
use ffnets::netverify::{compositions, minimal_t, rows_independent};
use ffnets::params::ParamSpec;
use ffnets::pipeline;
use ffnets::poly::Poly;
use ffnets::ratfunc::{RatFunc, RationalFunctionField};
use ffnets::seqgen::{digits_of_index, output_digits};
use proptest::prelude::*;

const SIZES: [u64; 5] = [2, 3, 4, 5, 7];

fn poly_from(k: &FieldSpec, idx: &[usize]) -> Poly {
    Poly::new(idx.iter().map(|&i| k.elem(i % k.size()).unwrap()).collect())
}

fn ratfunc(k: &FieldSpec, num: &[usize], den: &[usize]) -> RatFunc {
    let mut d = poly_from(k, den);
    if d.is_zero() {
        d = Poly::one(k);
    }
    RatFunc::new(poly_from(k, num), d, k).unwrap()
}

fn curves() -> Vec<EllipticFunctionField> {
    [(2u32, "0,0,1,0,0"), (3, "0,0,0,2,0"), (5, "0,0,0,1,1")]
        .iter()
        .map(|&(p, c)| EllipticFunctionField::new(Curve::parse(prime_field(p).unwrap(), c).unwrap()))
        .collect()
}

fn funcec(ff: &EllipticFunctionField, a: &[usize], b: &[usize], den: &[usize]) -> FuncEC {
    let k = ff.field().clone();
    let mut d = poly_from(&k, den);
    if d.is_zero() {
        d = Poly::one(&k);
    }
    ff.func(poly_from(&k, a), poly_from(&k, b), d).unwrap()
}

fn coeffs() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0usize..7, 1..5)
}

fn check_pair<F: FunctionField>(ff: &F, f: &F::Elem, g: &F::Elem, p: &F::Place, a: FieldElement, b: FieldElement) -> Result<(), TestCaseError> {
    if let (Some(vf), Some(vg)) = (ff.valuation(f, p), ff.valuation(g, p)) {
        prop_assert_eq!(ff.valuation(&ff.mul(f, g), p), Some(vf + vg));
    }
    let upto = 5;
    let h = ff.add(&ff.scale(a, f), &ff.scale(b, g));
    let (ef, eg, eh) = (ff.expansion(f, p, upto).unwrap(), ff.expansion(g, p, upto).unwrap(), ff.expansion(&h, p, upto).unwrap());
    let k = ff.field();
    for i in ef.start.min(eg.start).min(eh.start).min(upto)..=upto {
        let want: Vec<_> = ef.coeff(i).iter().zip(eg.coeff(i)).map(|(&x, y)| k.add(k.mul(a, x), k.mul(b, y))).collect();
        prop_assert_eq!(eh.coeff(i), want, "coefficient {}", i);
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn genus0_valuation_multiplicative_and_expansion_linear(
        qi in 0usize..5, mu in 1usize..3, pi in 0usize..64,
        n1 in coeffs(), d1 in coeffs(), n2 in coeffs(), d2 in coeffs(), a in 0usize..7, b in 0usize..7,
    ) {
        let k = field_of_size(SIZES[qi]).unwrap();
        let ff = RationalFunctionField::new(k.clone());
        let places = ff.places_of_degree(mu);
        let p = &places[pi % places.len()];
        let (f, g) = (ratfunc(&k, &n1, &d1), ratfunc(&k, &n2, &d2));
        check_pair(&ff, &f, &g, p, k.elem(a % k.size()).unwrap(), k.elem(b % k.size()).unwrap())?;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn genus1_valuation_multiplicative_and_expansion_linear(
        ci in 0usize..3, pi in 0usize..16,
        a1 in coeffs(), b1 in coeffs(), d1 in coeffs(), a2 in coeffs(), b2 in coeffs(), d2 in coeffs(),
        a in 0usize..7, b in 0usize..7,
    ) {
        let cs = curves();
        let ff = &cs[ci];
        let k = ff.field().clone();
        let places = ff.rational_places();
        let p = &places[pi % places.len()];
        let (f, g) = (funcec(ff, &a1, &b1[..b1.len().min(2)], &d1[..d1.len().min(3)]), funcec(ff, &a2, &b2[..b2.len().min(2)], &d2[..d2.len().min(3)]));
        check_pair(ff, &f, &g, p, k.elem(a % k.size()).unwrap(), k.elem(b % k.size()).unwrap())?;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(80))]

    #[test]
    fn genus0_riemann_roch_dimension(
        qi in 0usize..4,
        terms in prop::collection::vec((0usize..64, 1usize..3, -3i64..5), 1..5),
    ) {
        let k = field_of_size(SIZES[qi]).unwrap();
        let ff = RationalFunctionField::new(k);
        let mut d = Divisor::zero();
        for (pi, mu, n) in terms {
            let ps = ff.places_of_degree(mu);
            d.add_term(ps[pi % ps.len()].clone(), n);
        }
        let deg = ff.divisor_degree(&d);
        prop_assume!(deg >= 0);
        let basis = ff.rr_basis(&d);
        prop_assert_eq!(basis.len() as i64, deg + 1);
        for f in &basis {
            for (p, n) in d.iter() {
                prop_assert!(ff.valuation(f, p).unwrap() >= -n);
            }
        }
    }

    #[test]
    fn genus1_riemann_roch_dimension(
        ci in 0usize..3,
        terms in prop::collection::vec((0usize..16, -2i64..4), 1..4),
    ) {
        let cs = curves();
        let ff = &cs[ci];
        let places = ff.rational_places();
        let mut d = Divisor::zero();
        for (pi, n) in terms {
            d.add_term(places[pi % places.len()], n);
        }
        let deg = ff.divisor_degree(&d);
        prop_assume!(deg >= 1);
        let basis = ff.rr_basis(&d);
        prop_assert_eq!(basis.len() as i64, deg);
        for f in &basis {
            for (p, n) in d.iter() {
                prop_assert!(ff.valuation(f, p).unwrap() >= -n);
            }
        }
    }
}

fn random_set(k: &FieldSpec, s: usize, n: usize, entries: &[usize]) -> MatrixSet {
    let mut it = entries.iter().cycle();
    let mats = (0..s)
        .map(|_| (0..n).map(|_| (0..n).map(|_| k.elem(it.next().unwrap() % k.size()).unwrap()).collect()).collect())
        .collect();
    MatrixSet::from_rows(k.clone(), Variant::Genus0, 1, 0, mats).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn digit_map_is_linear(qi in 0usize..3, entries in prop::collection::vec(0usize..7, 1..40), n1 in 0u128..625, n2 in 0u128..625) {
        let k = field_of_size(SIZES[qi]).unwrap();
        let len = 4;
        let lim = (k.size() as u128).pow(len as u32);
        let ms = random_set(&k, 2, len, &entries);
        let (a, b) = (digits_of_index(&k, n1 % lim, len).unwrap(), digits_of_index(&k, n2 % lim, len).unwrap());
        let sum: Vec<_> = a.iter().zip(&b).map(|(&x, &y)| k.add(x, y)).collect();
        let (ya, yb, ys) = (output_digits(&ms, &a, len).unwrap(), output_digits(&ms, &b, len).unwrap(), output_digits(&ms, &sum, len).unwrap());
        for i in 0..2 {
            let want: Vec<_> = ya[i].iter().zip(&yb[i]).map(|(&x, &y)| k.add(x, y)).collect();
            prop_assert_eq!(&ys[i], &want);
        }
    }

    #[test]
    fn rank_failure_is_monotone(qi in 0usize..2, entries in prop::collection::vec(0usize..7, 1..30), m in 1usize..6) {
        let k = field_of_size(SIZES[qi]).unwrap();
        let ms = random_set(&k, 2, 5, &entries);
        for total in 0..=m {
            for d in compositions(total, 2) {
                if rows_independent(&ms, m, &d).unwrap() || d.iter().any(|&x| x >= 5) {
                    continue;
                }
                for up in [[d[0] + 1, d[1]], [d[0], d[1] + 1]] {
                    if up.iter().all(|&x| x <= 5) {
                        prop_assert!(!rows_independent(&ms, m, &up).unwrap(), "{:?} fails but {:?} passes", d, up);
                    }
                }
            }
        }
    }

    #[test]
    fn upper_triangular_invertible_has_quality_zero(qi in 0usize..3, entries in prop::collection::vec(0usize..7, 1..40)) {
        let k = field_of_size(SIZES[qi]).unwrap();
        let n = 6;
        let mut it = entries.iter().cycle();
        let rows = (0..n)
            .map(|j| {
                (0..n)
                    .map(|c| {
                        let v = it.next().unwrap() % k.size();
                        match c.cmp(&j) {
                            std::cmp::Ordering::Less => k.zero(),
                            std::cmp::Ordering::Equal => k.elem(1 + v % (k.size() - 1)).unwrap(),
                            std::cmp::Ordering::Greater => k.elem(v).unwrap(),
                        }
                    })
                    .collect()
            })
            .collect();
        let ms = MatrixSet::from_rows(k, Variant::Genus0, 1, 0, vec![rows]).unwrap();
        for m in 1..=n {
            prop_assert_eq!(minimal_t(&ms, m).unwrap(), 0);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn prefix_consistency(kit in 0usize..4, r1 in 1usize..5, c1 in 1usize..6, dr in 0usize..3, dc in 0usize..4) {
        let spec = [
            ParamSpec::kit_genus0(prime_field(2).unwrap(), 2, 1),
            ParamSpec::kit_genus0(prime_field(3).unwrap(), 3, 2),
            ParamSpec::kit_curve(prime_field(3).unwrap(), [0, 0, 0, 2, 0], 3, Variant::GenusPositive),
            ParamSpec::kit_curve(prime_field(2).unwrap(), [0, 0, 1, 0, 0], 2, Variant::XingStyle),
        ][kit].clone();
        let small = pipeline::construct(&spec, r1, c1).unwrap();
        let big = pipeline::construct(&spec, r1 + dr, c1 + dc).unwrap();
        prop_assert_eq!(big.prefix(r1, c1).unwrap(), small);
    }
}

#[test]
fn quality_extends_across_residues() {
    for (q, s, mu) in [(2u64, 3usize, 2usize), (3, 4, 2), (2, 2, 3)] {
        let spec = ParamSpec::kit_genus0(field_of_size(q).unwrap(), s, mu);
        let ms = pipeline::construct(&spec, 8, 8).unwrap();
        let t: Vec<usize> = (1..=8).map(|m| minimal_t(&ms, m).unwrap()).collect();
        for m in mu..=8 {
            let base = m / mu * mu;
            assert!(t[m - 1] <= t[base - 1] + m % mu, "q={q} s={s} mu={mu} m={m}: {t:?}");
        }
    }
}
