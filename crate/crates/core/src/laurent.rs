//! Sparse multivariate Laurent polynomials with big-integer coefficients.
//!
//! Values of the T-system live here. Every division performed by the
//! recurrence is exact, so quotients are computed by leading-term
//! elimination and a surviving remainder is reported as an error.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// The seed symbol `T[alpha,j,level]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SeedVar {
    pub alpha: i32,
    pub j: i32,
    pub level: i32,
}

impl SeedVar {
    pub fn new(alpha: i32, j: i32, level: i32) -> Self {
        SeedVar { alpha, j, level }
    }
}

impl fmt::Display for SeedVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T[{},{},{}]", self.alpha, self.j, self.level)
    }
}

/// A Laurent monomial, stored as variables sorted ascending with nonzero exponents.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(SeedVar, i32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: SeedVar) -> Self {
        Monomial(vec![(v, 1)])
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (SeedVar, i32)>) -> Self {
        let mut map: BTreeMap<SeedVar, i32> = BTreeMap::new();
        for (v, e) in pairs {
            *map.entry(v).or_insert(0) += e;
        }
        Monomial(map.into_iter().filter(|&(_, e)| e != 0).collect())
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponents(&self) -> &[(SeedVar, i32)] {
        &self.0
    }

    pub fn exponent(&self, v: &SeedVar) -> i32 {
        match self.0.binary_search_by(|(w, _)| w.cmp(v)) {
            Ok(i) => self.0[i].1,
            Err(_) => 0,
        }
    }

    fn combine(&self, other: &Monomial, sign: i32) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut k) = (0, 0);
        while i < a.len() && k < b.len() {
            match a[i].0.cmp(&b[k].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push((b[k].0, sign * b[k].1));
                    k += 1;
                }
                Ordering::Equal => {
                    let e = a[i].1 + sign * b[k].1;
                    if e != 0 {
                        out.push((a[i].0, e));
                    }
                    i += 1;
                    k += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend(b[k..].iter().map(|&(v, e)| (v, sign * e)));
        Monomial(out)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        self.combine(other, 1)
    }

    pub fn div(&self, other: &Monomial) -> Monomial {
        self.combine(other, -1)
    }

    pub fn inv(&self) -> Monomial {
        Monomial(self.0.iter().map(|&(v, e)| (v, -e)).collect())
    }

    pub fn map_vars(&self, f: impl Fn(SeedVar) -> SeedVar) -> Monomial {
        Monomial::from_pairs(self.0.iter().map(|&(v, e)| (f(v), e)))
    }
}

// Lexicographic on exponent vectors: at the smallest variable where the two
// exponents differ, the larger exponent wins. Compatible with multiplication.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut k) = (0, 0);
        loop {
            match (a.get(i), b.get(k)) {
                (None, None) => return Ordering::Equal,
                (Some(&(_, e)), None) => return e.cmp(&0),
                (None, Some(&(_, e))) => return 0.cmp(&e),
                (Some(&(v, e)), Some(&(w, f))) => match v.cmp(&w) {
                    Ordering::Less => return e.cmp(&0),
                    Ordering::Greater => return 0.cmp(&f),
                    Ordering::Equal => {
                        if e != f {
                            return e.cmp(&f);
                        }
                        i += 1;
                        k += 1;
                    }
                },
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|(v, e)| format!("{v}^{e}")).collect();
        write!(f, "{}", parts.join(" * "))
    }
}

/// Exact sparse Laurent polynomial over the integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<Monomial, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: i64) -> Self {
        Self::term(Monomial::one(), BigInt::from(c))
    }

    pub fn var(v: SeedVar) -> Self {
        Self::term(Monomial::var(v), BigInt::one())
    }

    pub fn term(m: Monomial, c: BigInt) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        LaurentPoly { terms }
    }

    pub fn from_terms(items: impl IntoIterator<Item = (Monomial, BigInt)>) -> Self {
        let mut terms: BTreeMap<Monomial, BigInt> = BTreeMap::new();
        for (m, c) in items {
            *terms.entry(m).or_insert_with(BigInt::zero) += c;
        }
        terms.retain(|_, c| !c.is_zero());
        LaurentPoly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    /// The single term, if the polynomial is a monomial times a coefficient.
    pub fn as_term(&self) -> Option<(&Monomial, &BigInt)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    pub fn is_monomial(&self) -> bool {
        matches!(self.as_term(), Some((_, c)) if c.is_one())
    }

    pub fn leading(&self) -> Option<(&Monomial, &BigInt)> {
        self.terms.iter().next_back()
    }

    pub fn add(&self, other: &LaurentPoly) -> LaurentPoly {
        let (big, small) = if self.len() >= other.len() { (self, other) } else { (other, self) };
        let mut terms = big.terms.clone();
        for (m, c) in &small.terms {
            add_term(&mut terms, m, c);
        }
        LaurentPoly { terms }
    }

    pub fn neg(&self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            add_term(&mut terms, m, &-c);
        }
        LaurentPoly { terms }
    }

    pub fn mul(&self, other: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() || other.is_zero() {
            return LaurentPoly::zero();
        }
        if let Some((m, c)) = other.as_term() {
            return self.mul_term(m, c);
        }
        if let Some((m, c)) = self.as_term() {
            return other.mul_term(m, c);
        }
        let mut acc: HashMap<Monomial, BigInt> = HashMap::with_capacity(self.len() * other.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                *acc.entry(ma.mul(mb)).or_insert_with(BigInt::zero) += ca * cb;
            }
        }
        LaurentPoly {
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn mul_term(&self, m: &Monomial, c: &BigInt) -> LaurentPoly {
        if c.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly {
            terms: self.terms.iter().map(|(k, v)| (k.mul(m), v * c)).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> LaurentPoly {
        let mut base = self.clone();
        let mut acc = LaurentPoly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Exact quotient `self / den`.
    pub fn exact_div(&self, den: &LaurentPoly) -> Result<LaurentPoly> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(LaurentPoly::zero());
        }
        if let Some((m, c)) = den.as_term() {
            let inv = m.inv();
            let mut terms = BTreeMap::new();
            for (k, v) in &self.terms {
                let (q, r) = v.div_rem(c);
                if !r.is_zero() {
                    return Err(Error::NotDivisible);
                }
                terms.insert(k.mul(&inv), q);
            }
            return Ok(LaurentPoly { terms });
        }
        let bounds = quotient_box(self, den).ok_or(Error::NotDivisible)?;
        let (dm, dc) = den.leading().map(|(m, c)| (m.clone(), c.clone())).unwrap();
        let mut rem = self.terms.clone();
        let mut quot: BTreeMap<Monomial, BigInt> = BTreeMap::new();
        while let Some((rm, rc)) = rem.iter().next_back() {
            let qm = rm.div(&dm);
            let (qc, r) = rc.div_rem(&dc);
            if !r.is_zero() || !bounds.contains(&qm) {
                return Err(Error::NotDivisible);
            }
            for (m, c) in &den.terms {
                add_term(&mut rem, &m.mul(&qm), &-(c * &qc));
            }
            quot.insert(qm, qc);
        }
        Ok(LaurentPoly { terms: quot })
    }

    pub fn eval(&self, point: &impl Fn(&SeedVar) -> Option<BigRational>) -> Result<BigRational> {
        let mut cache: HashMap<SeedVar, BigRational> = HashMap::new();
        let mut total = <BigRational as Zero>::zero();
        for (m, c) in &self.terms {
            let mut val = BigRational::from_integer(c.clone());
            for (v, e) in m.exponents() {
                let x = match cache.get(v) {
                    Some(x) => x.clone(),
                    None => {
                        let x = point(v).ok_or(Error::MissingVariable(*v))?;
                        cache.insert(*v, x.clone());
                        x
                    }
                };
                if Zero::is_zero(&x) && *e < 0 {
                    return Err(Error::ZeroSubstitution(*v));
                }
                val *= pow_rational(&x, *e);
            }
            total += val;
        }
        Ok(total)
    }

    pub fn eval_map(&self, point: &HashMap<SeedVar, BigRational>) -> Result<BigRational> {
        self.eval(&|v: &SeedVar| point.get(v).cloned())
    }

    pub fn is_positive(&self) -> bool {
        self.terms.values().all(|c| c.is_positive())
    }

    pub fn map_vars(&self, f: impl Fn(SeedVar) -> SeedVar) -> LaurentPoly {
        LaurentPoly::from_terms(self.terms.iter().map(|(m, c)| (m.map_vars(&f), c.clone())))
    }

    /// Substitutes a polynomial for every variable. Negative exponents need monomial images.
    pub fn substitute(&self, f: &impl Fn(&SeedVar) -> LaurentPoly) -> Result<LaurentPoly> {
        let mut cache: HashMap<(SeedVar, i32), LaurentPoly> = HashMap::new();
        let mut out = LaurentPoly::zero();
        for (m, c) in &self.terms {
            let mut t = LaurentPoly::constant(1).mul_term(&Monomial::one(), c);
            for &(v, e) in m.exponents() {
                let p = match cache.get(&(v, e)) {
                    Some(p) => p.clone(),
                    None => {
                        let img = f(&v);
                        let p = if e >= 0 {
                            img.pow(e as u32)
                        } else {
                            LaurentPoly::one().exact_div(&img.pow((-e) as u32))?
                        };
                        cache.insert((v, e), p.clone());
                        p
                    }
                };
                t = t.mul(&p);
            }
            out = out.add(&t);
        }
        Ok(out)
    }

    pub fn variables(&self) -> Vec<SeedVar> {
        let mut vs: Vec<SeedVar> = self
            .terms
            .keys()
            .flat_map(|m| m.exponents().iter().map(|(v, _)| *v))
            .collect();
        vs.sort();
        vs.dedup();
        vs
    }
}

fn add_term(terms: &mut BTreeMap<Monomial, BigInt>, m: &Monomial, c: &BigInt) {
    if c.is_zero() {
        return;
    }
    match terms.get_mut(m) {
        Some(v) => {
            *v += c;
            if v.is_zero() {
                terms.remove(m);
            }
        }
        None => {
            terms.insert(m.clone(), c.clone());
        }
    }
}

fn pow_rational(x: &BigRational, e: i32) -> BigRational {
    let base = if e < 0 { x.recip() } else { x.clone() };
    num_traits::pow(base, e.unsigned_abs() as usize)
}

/// Per-variable exponent ranges that any exact quotient must respect.
struct QuotientBox(BTreeMap<SeedVar, (i32, i32)>);

impl QuotientBox {
    fn contains(&self, m: &Monomial) -> bool {
        if m.exponents().iter().any(|(v, _)| !self.0.contains_key(v)) {
            return false;
        }
        self.0.iter().all(|(v, &(lo, hi))| {
            let e = m.exponent(v);
            lo <= e && e <= hi
        })
    }
}

fn exponent_range(p: &LaurentPoly, v: &SeedVar) -> (i32, i32) {
    let mut lo = i32::MAX;
    let mut hi = i32::MIN;
    for m in p.terms.keys() {
        let e = m.exponent(v);
        lo = lo.min(e);
        hi = hi.max(e);
    }
    (lo, hi)
}

fn quotient_box(num: &LaurentPoly, den: &LaurentPoly) -> Option<QuotientBox> {
    let mut vars = num.variables();
    vars.extend(den.variables());
    vars.sort();
    vars.dedup();
    let mut map = BTreeMap::new();
    for v in vars {
        let (nl, nh) = exponent_range(num, &v);
        let (dl, dh) = exponent_range(den, &v);
        let (lo, hi) = (nl - dl, nh - dh);
        if lo > hi {
            return None;
        }
        map.insert(v, (lo, hi));
    }
    Some(QuotientBox(map))
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| if m.is_one() { c.to_string() } else { format!("{c} * {m}") })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Exact commutative ring operations shared by symbolic and numeric values.
pub trait Ring: Clone + PartialEq + fmt::Debug + fmt::Display {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_int(n: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn exact_div(&self, other: &Self) -> Result<Self>;
}

impl Ring for LaurentPoly {
    fn zero() -> Self {
        LaurentPoly::zero()
    }
    fn one() -> Self {
        LaurentPoly::one()
    }
    fn from_int(n: i64) -> Self {
        LaurentPoly::constant(n)
    }
    fn is_zero(&self) -> bool {
        LaurentPoly::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        LaurentPoly::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        LaurentPoly::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        LaurentPoly::mul(self, other)
    }
    fn neg(&self) -> Self {
        LaurentPoly::neg(self)
    }
    fn exact_div(&self, other: &Self) -> Result<Self> {
        LaurentPoly::exact_div(self, other)
    }
}

impl Ring for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_int(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn exact_div(&self, other: &Self) -> Result<Self> {
        if Zero::is_zero(other) {
            Err(Error::DivisionByZero)
        } else {
            Ok(self / other)
        }
    }
}

/// Product of a list of values.
pub fn product<V: Ring>(items: &[V]) -> V {
    items.iter().fold(V::one(), |acc, x| acc.mul(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> LaurentPoly {
        LaurentPoly::var(SeedVar::new(1, 0, 0))
    }
    fn y() -> LaurentPoly {
        LaurentPoly::var(SeedVar::new(1, 1, 0))
    }
    fn xinv() -> LaurentPoly {
        LaurentPoly::one().exact_div(&x()).unwrap()
    }

    #[test]
    fn identity_and_difference_of_squares() {
        let p = x().add(&y().mul(&y()));
        assert_eq!(LaurentPoly::one().mul(&p), p);
        let lhs = x().add(&y()).mul(&x().sub(&y()));
        assert_eq!(lhs, x().mul(&x()).sub(&y().mul(&y())));
    }

    #[test]
    fn laurent_exponents_add() {
        let lhs = xinv().add(&y()).mul(&x());
        assert_eq!(lhs, LaurentPoly::one().add(&x().mul(&y())));
    }

    #[test]
    fn exact_division_examples() {
        let d = x().mul(&x()).sub(&y().mul(&y()));
        assert_eq!(d.exact_div(&x().sub(&y())).unwrap(), x().add(&y()));
        assert_eq!(d.exact_div(&d).unwrap(), LaurentPoly::one());
        let p = LaurentPoly::one().add(&x().mul(&y()));
        assert_eq!(p.exact_div(&x()).unwrap(), xinv().add(&y()));
    }

    #[test]
    fn non_divisible_and_zero() {
        let p = x().add(&LaurentPoly::one());
        assert_eq!(p.exact_div(&x().add(&y())), Err(Error::NotDivisible));
        assert_eq!(p.exact_div(&LaurentPoly::zero()), Err(Error::DivisionByZero));
        let two = LaurentPoly::constant(2);
        assert_eq!(x().exact_div(&two), Err(Error::NotDivisible));
    }

    #[test]
    fn evaluation() {
        let p = x().mul(&LaurentPoly::one().exact_div(&y()).unwrap());
        let pt = |v: &SeedVar| {
            Some(BigRational::from_integer(BigInt::from(if v.j == 0 { 3 } else { 2 })))
        };
        assert_eq!(p.eval(&pt).unwrap(), BigRational::new(3.into(), 2.into()));
        assert_eq!(LaurentPoly::zero().eval(&pt).unwrap(), <BigRational as Zero>::zero());
        let zero_y = |v: &SeedVar| Some(BigRational::from_integer(BigInt::from(1 - v.j)));
        assert_eq!(
            p.eval(&zero_y),
            Err(Error::ZeroSubstitution(SeedVar::new(1, 1, 0)))
        );
        assert_eq!(
            p.eval(&|_: &SeedVar| None),
            Err(Error::MissingVariable(SeedVar::new(1, 0, 0)))
        );
    }

    #[test]
    fn positivity() {
        let p = LaurentPoly::constant(2).mul(&x()).mul(&LaurentPoly::one().exact_div(&y()).unwrap());
        assert!(p.add(&LaurentPoly::constant(3)).is_positive());
        assert!(!x().sub(&y()).is_positive());
    }

    #[test]
    fn order_is_multiplicative() {
        let a = Monomial::from_pairs([(SeedVar::new(1, 0, 0), 2), (SeedVar::new(2, 0, 1), -1)]);
        let b = Monomial::from_pairs([(SeedVar::new(1, 0, 0), 1), (SeedVar::new(2, 0, 1), 5)]);
        let c = Monomial::from_pairs([(SeedVar::new(1, 3, 0), -7)]);
        assert!(a > b);
        assert!(a.mul(&c) > b.mul(&c));
        assert!(Monomial::one() < Monomial::var(SeedVar::new(3, 0, 0)));
    }

    #[test]
    fn rendering() {
        let p = x().add(&LaurentPoly::constant(-2).mul(&y()));
        assert_eq!(p.to_string(), "-2 * T[1,1,0]^1 + 1 * T[1,0,0]^1");
        assert_eq!(LaurentPoly::zero().to_string(), "0");
        assert_eq!(LaurentPoly::constant(3).to_string(), "3");
    }
}
