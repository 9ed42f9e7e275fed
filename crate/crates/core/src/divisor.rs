use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Finite formal integer combination of places. Zero coefficients are never
/// stored.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Divisor<P: Ord> {
    terms: BTreeMap<P, i64>,
}

impl<P: Ord> Default for Divisor<P> {
    fn default() -> Self {
        Divisor { terms: BTreeMap::new() }
    }
}

impl<P: Ord + Clone> Divisor<P> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn single(p: P, n: i64) -> Self {
        let mut d = Self::default();
        d.add_term(p, n);
        d
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (P, i64)>) -> Self {
        let mut d = Self::default();
        for (p, n) in terms {
            d.add_term(p, n);
        }
        d
    }

    pub fn add_term(&mut self, p: P, n: i64) {
        let c = self.terms.entry(p.clone()).or_insert(0);
        *c += n;
        if *c == 0 {
            self.terms.remove(&p);
        }
    }

    pub fn coefficient(&self, p: &P) -> i64 {
        self.terms.get(p).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&P, i64)> {
        self.terms.iter().map(|(p, &n)| (p, n))
    }

    pub fn support(&self) -> impl Iterator<Item = &P> {
        self.terms.keys()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_effective(&self) -> bool {
        self.terms.values().all(|&n| n > 0)
    }

    pub fn positive_part(&self) -> Self {
        Self::from_terms(self.iter().filter(|(_, n)| *n > 0).map(|(p, n)| (p.clone(), n)))
    }

    /// `Σ n_P deg(P)`.
    pub fn degree(&self, place_degree: impl Fn(&P) -> usize) -> i64 {
        self.iter().map(|(p, n)| n * place_degree(p) as i64).sum()
    }
}

impl<P: Ord + Clone> Add for &Divisor<P> {
    type Output = Divisor<P>;
    fn add(self, o: &Divisor<P>) -> Divisor<P> {
        let mut d = self.clone();
        for (p, n) in o.iter() {
            d.add_term(p.clone(), n);
        }
        d
    }
}

impl<P: Ord + Clone> Sub for &Divisor<P> {
    type Output = Divisor<P>;
    fn sub(self, o: &Divisor<P>) -> Divisor<P> {
        self + &(-o)
    }
}

impl<P: Ord + Clone> Neg for &Divisor<P> {
    type Output = Divisor<P>;
    fn neg(self) -> Divisor<P> {
        self * -1
    }
}

impl<P: Ord + Clone> Mul<i64> for &Divisor<P> {
    type Output = Divisor<P>;
    fn mul(self, k: i64) -> Divisor<P> {
        Divisor::from_terms(self.iter().map(|(p, n)| (p.clone(), n * k)))
    }
}

/// `n*P+m*Q`, or `0` for the zero divisor.
impl<P: Ord + fmt::Display> fmt::Display for Divisor<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(p, n)| format!("{n}*{p}")).collect();
        write!(f, "{}", parts.join("+"))
    }
}

/// Parses `n*P+m*Q` with a caller-supplied place parser. `0` is the zero
/// divisor; a bare place means coefficient 1.
pub fn parse_divisor<P: Ord + Clone, E>(
    s: &str,
    mut place: impl FnMut(&str) -> Result<P, E>,
    bad: impl Fn(String) -> E,
) -> Result<Divisor<P>, E> {
    let s = s.trim();
    let mut d = Divisor::zero();
    if s.is_empty() || s == "0" {
        return Ok(d);
    }
    for term in s.split('+') {
        let term = term.trim();
        let (n, p) = match term.split_once('*') {
            Some((n, p)) => (n.trim().parse::<i64>().map_err(|_| bad(format!("bad coefficient in {term:?}")))?, p),
            None => (1, term),
        };
        d.add_term(place(p.trim())?, n);
    }
    Ok(d)
}
