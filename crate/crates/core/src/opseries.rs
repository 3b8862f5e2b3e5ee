//! Truncated Laurent series in the shift operator `d` with time-dependent coefficients.
//!
//! A series `X = sum_n a_n d^n` acts as `<t| X |t'> = a_{t'-t}(t)`, and
//! `d w = w(. + 1) d`. Coefficients are evaluated lazily and memoized, so only
//! the times a check actually touches are computed.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::rc::Rc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::lattice::LatticeState;
use crate::report::Check;
use crate::weights::TRatio;

/// A time-indexed rational coefficient.
pub struct Coef {
    f: Box<dyn Fn(i64) -> Result<BigRational>>,
    memo: RefCell<HashMap<i64, BigRational>>,
}

impl Coef {
    pub fn new(f: impl Fn(i64) -> Result<BigRational> + 'static) -> Rc<Coef> {
        Rc::new(Coef { f: Box::new(f), memo: RefCell::new(HashMap::new()) })
    }

    pub fn constant(c: BigRational) -> Rc<Coef> {
        Coef::new(move |_| Ok(c.clone()))
    }

    pub fn get(&self, t: i64) -> Result<BigRational> {
        if let Some(v) = self.memo.borrow().get(&t) {
            return Ok(v.clone());
        }
        let v = (self.f)(t)?;
        self.memo.borrow_mut().insert(t, v.clone());
        Ok(v)
    }
}

impl fmt::Debug for Coef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Coef({} cached)", self.memo.borrow().len())
    }
}

/// A weight given on a finite time window.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeWeight {
    pub lo: i64,
    values: Vec<BigRational>,
}

impl TimeWeight {
    pub fn from_fn(lo: i64, hi: i64, mut f: impl FnMut(i64) -> Result<BigRational>) -> Result<Self> {
        Ok(TimeWeight { lo, values: (lo..=hi).map(&mut f).collect::<Result<_>>()? })
    }

    /// Nonzero rationals `+-p/q` with `1 <= p, q <= 9`.
    pub fn random(rng: &mut impl Rng, lo: i64, hi: i64) -> Self {
        let values = (lo..=hi)
            .map(|_| {
                let p: i64 = rng.gen_range(1..=9) * if rng.gen_bool(0.5) { 1 } else { -1 };
                let q: i64 = rng.gen_range(1..=9);
                BigRational::new(p.into(), q.into())
            })
            .collect();
        TimeWeight { lo, values }
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.values.len() as i64 - 1
    }

    pub fn get(&self, t: i64) -> Result<BigRational> {
        if t < self.lo || t > self.hi() {
            return Err(Error::TimeWindowExceeded(t));
        }
        Ok(self.values[(t - self.lo) as usize].clone())
    }

    pub fn coef(&self) -> Rc<Coef> {
        let w = self.clone();
        Coef::new(move |t| w.get(t))
    }
}

/// `sum_{n = val}^{top} a_n d^n`; `None` marks a coefficient known to vanish.
#[derive(Debug, Clone)]
pub struct DSeries {
    val: i32,
    coefs: Vec<Option<Rc<Coef>>>,
}

impl DSeries {
    pub fn from_coefs(val: i32, coefs: Vec<Option<Rc<Coef>>>) -> Self {
        DSeries { val, coefs }
    }

    pub fn zero(top: i32) -> Self {
        DSeries { val: 0, coefs: vec![None; (top + 1).max(0) as usize] }
    }

    fn monomial(deg: i32, c: Rc<Coef>, top: i32) -> Self {
        let mut coefs = vec![None; (top - deg + 1).max(1) as usize];
        coefs[0] = Some(c);
        DSeries { val: deg, coefs }
    }

    pub fn one(top: i32) -> Self {
        DSeries::monomial(0, Coef::constant(BigRational::one()), top)
    }

    /// The shift operator itself.
    pub fn d(top: i32) -> Self {
        DSeries::monomial(1, Coef::constant(BigRational::one()), top)
    }

    /// `w d`: the step operator with `<t| W = w(t) <t+1|`.
    pub fn step(w: Rc<Coef>, top: i32) -> Self {
        DSeries::monomial(1, w, top)
    }

    /// Multiplication by `w(t)` without moving time.
    pub fn diagonal(w: Rc<Coef>, top: i32) -> Self {
        DSeries::monomial(0, w, top)
    }

    pub fn val(&self) -> i32 {
        self.val
    }

    /// Highest degree that is known.
    pub fn top(&self) -> i32 {
        self.val + self.coefs.len() as i32 - 1
    }

    fn slot(&self, n: i32) -> Option<&Rc<Coef>> {
        if n < self.val || n > self.top() {
            return None;
        }
        self.coefs[(n - self.val) as usize].as_ref()
    }

    /// `a_n(t)`.
    pub fn coeff(&self, n: i32, t: i64) -> Result<BigRational> {
        if n > self.top() {
            return Err(Error::InvalidIndex(format!("degree {n} beyond truncation {}", self.top())));
        }
        match self.slot(n) {
            Some(c) => c.get(t),
            None => Ok(BigRational::zero()),
        }
    }

    /// `<t| X |t'>`.
    pub fn element(&self, t: i64, t2: i64) -> Result<BigRational> {
        self.coeff((t2 - t) as i32, t)
    }

    pub fn add(&self, other: &DSeries) -> DSeries {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &DSeries) -> DSeries {
        self.combine(other, true)
    }

    fn combine(&self, other: &DSeries, negate: bool) -> DSeries {
        let val = self.val.min(other.val);
        let top = self.top().min(other.top());
        let coefs = (val..=top)
            .map(|n| match (self.slot(n).cloned(), other.slot(n).cloned()) {
                (None, None) => None,
                (Some(a), None) => Some(a),
                (None, Some(b)) => Some(if negate { Coef::new(move |t| Ok(-b.get(t)?)) } else { b }),
                (Some(a), Some(b)) => Some(Coef::new(move |t| {
                    let (x, y) = (a.get(t)?, b.get(t)?);
                    Ok(if negate { x - y } else { x + y })
                })),
            })
            .collect();
        DSeries { val, coefs }
    }

    pub fn neg(&self) -> DSeries {
        DSeries::zero(self.top()).sub(self)
    }

    /// `(XY)_p(t) = sum_n a_n(t) b_{p-n}(t+n)`.
    pub fn mul(&self, other: &DSeries) -> DSeries {
        let val = self.val + other.val;
        let top = (self.top() + other.val).min(self.val + other.top());
        let coefs = (val..=top)
            .map(|p| {
                let pairs: Vec<(i32, Rc<Coef>, Rc<Coef>)> = (self.val..=self.top())
                    .filter_map(|n| Some((n, self.slot(n)?.clone(), other.slot(p - n)?.clone())))
                    .collect();
                if pairs.is_empty() {
                    None
                } else {
                    Some(Coef::new(move |t| {
                        let mut s = BigRational::zero();
                        for (n, a, b) in &pairs {
                            s += a.get(t)? * b.get(t + *n as i64)?;
                        }
                        Ok(s)
                    }))
                }
            })
            .collect();
        DSeries { val, coefs }
    }

    /// Two-sided inverse; degrees are known up to `top - 2 val`.
    pub fn inv(&self) -> Result<DSeries> {
        let lead = (self.val..=self.top()).find(|&n| self.slot(n).is_some()).ok_or(Error::NonInvertible)?;
        let v = lead;
        let top = self.top() - 2 * v;
        let a0 = self.slot(v).cloned().ok_or(Error::NonInvertible)?;
        let higher: Vec<(i32, Rc<Coef>)> =
            (v + 1..=self.top()).filter_map(|n| Some((n, self.slot(n)?.clone()))).collect();
        let mut coefs: Vec<Option<Rc<Coef>>> = Vec::new();
        for q in -v..=top {
            let known: Vec<(i32, Rc<Coef>, Rc<Coef>)> = higher
                .iter()
                .filter(|(n, _)| q + v - n >= -v)
                .filter_map(|(n, a)| {
                    let z = coefs[(q + v - n + v) as usize].clone()?;
                    Some((*n, a.clone(), z))
                })
                .collect();
            let first = q == -v;
            if !first && known.is_empty() {
                coefs.push(None);
                continue;
            }
            let a0 = a0.clone();
            coefs.push(Some(Coef::new(move |s| {
                let t = s - v as i64;
                let lead = a0.get(t)?;
                if lead.is_zero() {
                    return Err(Error::NonInvertible);
                }
                let mut acc = if first { BigRational::one() } else { BigRational::zero() };
                for (n, a, z) in &known {
                    acc -= a.get(t)? * z.get(t + *n as i64)?;
                }
                Ok(acc / lead)
            })));
        }
        Ok(DSeries { val: -v, coefs })
    }

    /// `d^{-1} X d`: every coefficient table moves one step later.
    pub fn conj(&self) -> DSeries {
        let coefs = self
            .coefs
            .iter()
            .map(|c| c.clone().map(|c| Coef::new(move |t| c.get(t - 1))))
            .collect();
        DSeries { val: self.val, coefs }
    }

    /// First `(degree, time)` with differing coefficients, over degrees up to `order` and the given times.
    pub fn first_difference(&self, other: &DSeries, order: i32, times: impl IntoIterator<Item = i64> + Clone) -> Result<Option<(i32, i64)>> {
        if self.top() < order || other.top() < order {
            return Err(Error::InvalidIndex(format!(
                "comparison to order {order} needs both truncations to reach it ({} and {})",
                self.top(),
                other.top()
            )));
        }
        for n in self.val.min(other.val)..=order {
            for t in times.clone() {
                if self.coeff(n, t)? != other.coeff(n, t)? {
                    return Ok(Some((n, t)));
                }
            }
        }
        Ok(None)
    }
}

fn compare(name: &str, params: String, x: &DSeries, y: &DSeries, order: i32, times: std::ops::RangeInclusive<i64>) -> Result<Check> {
    Ok(match x.first_difference(y, order, times)? {
        None => Check::pass(name, params),
        Some((n, t)) => Check::fail(name, params, format!("d^{n} at t={t}: {} vs {}", x.coeff(n, t)?, y.coeff(n, t)?)),
    })
}

/// `F_0` from skeleton step operators `Y[0] = Y_1, ..., Y[2r] = Y_{2r+1}`.
pub fn build_f(ys: &[DSeries], r: usize) -> Result<DSeries> {
    if ys.len() != 2 * r + 1 {
        return Err(Error::InvalidIndex(format!("{} weights for rank {r}", ys.len())));
    }
    let top = ys.iter().map(DSeries::top).min().unwrap_or(0) + 1;
    let one = DSeries::one(top);
    let d = DSeries::d(top);
    let yy = |b: usize| &ys[b - 1];
    let mut f: Option<DSeries> = None;
    for k in (2..=r + 1).rev() {
        let mut inner = one.sub(&d.mul(yy(2 * k - 1)));
        if let Some(next) = &f {
            inner = inner.sub(&d.mul(next).mul(yy(2 * k)));
        }
        f = Some(inner.inv()?);
    }
    let f1 = match &f {
        Some(f2) => one.sub(&d.mul(f2).mul(yy(2))).inv()?,
        None => one.clone(),
    };
    one.sub(&d.mul(&f1).mul(yy(1))).inv()
}

/// `F_0` for a lattice's level-0 weights, as step operators over `[lo, hi]`.
pub fn lattice_fraction(st: &LatticeState<BigRational>, order: i32, lo: i64, hi: i64) -> Result<DSeries> {
    let r = st.r();
    let ys = (1..=2 * r as i32 + 1)
        .map(|b| {
            let w = TimeWeight::from_fn(lo, hi, |t| crate::weights::y(st, b, t as i32, 0))?;
            Ok(DSeries::step(w.coef(), order))
        })
        .collect::<Result<Vec<_>>>()?;
    build_f(&ys, r)
}

/// `1 + d(1 - A d - d B)^{-1} A` against `(1 - d(1 - d B)^{-1} A)^{-1}` up to `order`.
pub fn check_reroot(a: &DSeries, b: &DSeries, order: i32, times: std::ops::RangeInclusive<i64>) -> Result<Check> {
    let top = a.top().min(b.top()) + 2;
    let one = DSeries::one(top);
    let d = DSeries::d(top);
    let lhs = one.add(&d.mul(&one.sub(&a.mul(&d)).sub(&d.mul(b)).inv()?).mul(a));
    let rhs = one.sub(&d.mul(&one.sub(&d.mul(b)).inv()?).mul(a)).inv()?;
    compare("reroot", format!("order={order}"), &lhs, &rhs, order, times)
}

/// `(A + B, V C B (A+B)^{-1}, d^{-1} V C A (A+B)^{-1} d)` with `V = (1-U)^{-1}`.
pub fn rearrange(a: &DSeries, b: &DSeries, c: &DSeries, u: &DSeries) -> Result<(DSeries, DSeries, DSeries)> {
    let ap = a.add(b);
    let s = ap.inv()?;
    let vc = DSeries::one(u.top()).sub(u).inv()?.mul(c);
    let bp = vc.mul(b).mul(&s);
    let cp = vc.mul(a).mul(&s).conj();
    Ok((ap, bp, cp))
}

/// `A + (1 - d(1-U)^{-1} C)^{-1} B = (1 - d(1 - d C')^{-1} B')^{-1} A'`.
pub fn check_rearrange(a: &DSeries, b: &DSeries, c: &DSeries, u: &DSeries, order: i32, times: std::ops::RangeInclusive<i64>) -> Result<Check> {
    let top = [a, b, c, u].iter().map(|x| x.top()).min().unwrap_or(0) + 2;
    let one = DSeries::one(top);
    let d = DSeries::d(top);
    let (ap, bp, cp) = rearrange(a, b, c, u)?;
    let lhs = rearrange_lhs(a, b, c, u)?;
    let rhs = one.sub(&d.mul(&one.sub(&d.mul(&cp)).inv()?).mul(&bp)).inv()?.mul(&ap);
    compare("rearrange", format!("order={order}"), &lhs, &rhs, order, times)
}

fn rearrange_lhs(a: &DSeries, b: &DSeries, c: &DSeries, u: &DSeries) -> Result<DSeries> {
    let top = [a, b, c, u].iter().map(|x| x.top()).min().unwrap_or(0) + 2;
    let one = DSeries::one(top);
    let d = DSeries::d(top);
    Ok(a.add(&one.sub(&d.mul(&one.sub(u).inv()?).mul(c)).inv()?.mul(b)))
}

fn t(a: i32, j: i32, k: i32) -> TRatio {
    TRatio::t(a, j, k)
}

fn frac(num: &[TRatio], den: &[TRatio]) -> TRatio {
    let n = num.iter().fold(TRatio::one(), |acc, x| acc.mul(x));
    den.iter().fold(n, |acc, x| acc.div(x))
}

/// The explicit A_2 weights of the seeds `(0,0)`, `(0,1)` and `(1,0)` at time `s`.
pub fn a2_weight(seed: &str, i: i32, s: i32) -> Result<TRatio> {
    let w = match (seed, i) {
        ("y", 1) | ("w", 1) => frac(&[t(1, s, 1)], &[t(1, s + 1, 0)]),
        ("y", 2) | ("w", 2) => frac(&[t(2, s, 1)], &[t(1, s, 0), t(1, s + 1, 1)]),
        ("y", 3) => frac(&[t(1, s + 1, 0), t(2, s - 1, 1)], &[t(1, s, 1), t(2, s, 0)]),
        ("y", 4) => frac(&[t(1, s + 1, 0)], &[t(2, s, 0), t(2, s + 1, 1)]),
        ("y", 5) => frac(&[t(2, s + 1, 0)], &[t(2, s, 1)]),
        ("w", 3) => frac(&[t(1, s + 1, 0), t(2, s, 2)], &[t(1, s, 1), t(2, s + 1, 1)]),
        ("w", 4) => frac(&[t(1, s + 1, 1)], &[t(2, s, 1), t(2, s + 1, 2)]),
        ("w", 5) => frac(&[t(2, s + 1, 1)], &[t(2, s, 2)]),
        ("z", 1) => frac(&[t(1, s, 2)], &[t(1, s + 1, 1)]),
        ("z", 2) => frac(&[t(2, s - 1, 1), t(2, s + 1, 1)], &[t(1, s, 1), t(1, s + 1, 2), t(2, s, 0)]),
        ("z", 3) => frac(&[t(1, s + 1, 1), t(2, s - 2, 1)], &[t(1, s, 2), t(2, s - 1, 0)]),
        ("z", 4) => frac(&[t(1, s - 1, 1), t(1, s + 1, 1)], &[t(2, s - 1, 0), t(2, s, 1), t(1, s, 2)]),
        ("z", 5) => frac(&[t(2, s, 0)], &[t(2, s - 1, 1)]),
        ("z", 6) => frac(&[], &[t(1, s, 2), t(2, s - 1, 0)]),
        _ => return Err(Error::InvalidIndex(format!("no A_2 weight {seed}{i}"))),
    };
    Ok(w)
}

/// The A_2 continued-fraction identities on a numeric rank-2 lattice, to `order`.
pub fn a2_fixtures_check(st: &LatticeState<BigRational>, order: i32) -> Result<Vec<Check>> {
    if st.r() != 2 {
        return Err(Error::InvalidIndex(format!("A_2 fixtures need rank 2, got {}", st.r())));
    }
    let (wl, wh) = st.spec().window;
    let (lo, hi) = (wl as i64 + 4, wh as i64 - 4);
    let mid = (lo + hi) / 2;
    let times = mid - 2..=mid + 2;
    if hi - lo < 4 * order as i64 + 8 {
        return Err(Error::TimeWindowExceeded(hi - lo));
    }
    let top = order + 4;
    let table = |seed: &str, i: i32| -> Result<Rc<Coef>> {
        Ok(TimeWeight::from_fn(lo, hi, |s| a2_weight(seed, i, s as i32)?.eval(st))?.coef())
    };
    let step = |seed: &str, i: i32| -> Result<DSeries> { Ok(DSeries::step(table(seed, i)?, top)) };
    let ys = (1..=5).map(|i| step("y", i)).collect::<Result<Vec<_>>>()?;
    let ws = (1..=5).map(|i| step("w", i)).collect::<Result<Vec<_>>>()?;
    let zs = (1..=5).map(|i| step("z", i)).collect::<Result<Vec<_>>>()?;
    let z6 = DSeries::diagonal(table("z", 6)?, top);
    let one = DSeries::one(top + 2);
    let d = DSeries::d(top + 2);

    let f0 = build_f(&ys, 2)?;
    // Seed (0,1) is a straight chain.
    let mut f2 = one.sub(&d.mul(&ws[4])).inv()?;
    for i in (0..4).rev() {
        f2 = one.sub(&d.mul(&f2).mul(&ws[i])).inv()?;
    }
    // Seed (1,0) has the diagonal long step z_6.
    let g5 = one.sub(&d.mul(&zs[4])).inv()?;
    let x = one.sub(&d.mul(&zs[2])).sub(&d.mul(&g5).mul(&zs[3])).inv()?;
    let inner = one.sub(&d.mul(&x).mul(&zs[1].add(&d.mul(&g5).mul(&z6)))).inv()?;
    let f1 = one.sub(&d.mul(&inner).mul(&zs[0])).inv()?;
    let rhs = one.add(&d.mul(&f1).mul(&ys[0]));

    let z6_route = zs[3].mul(&d.mul(&zs[2]).inv()?).mul(&zs[1]);
    let (w3, w4, w5) = rearrange(&ys[2], &ys[3], &ys[4], &DSeries::zero(top))?;
    let p = format!("order={order}");
    let mut out = vec![
        compare("F0(y) = F2(w)", p.clone(), &f0, &f2, order, times.clone())?,
        compare("F0(y) = 1 + d F1(z) Y1", p.clone(), &f0, &rhs, order, times.clone())?,
        compare("z6 = z4 (d z3)^-1 z2", p.clone(), &z6, &z6_route, 0, times.clone())?,
        compare("rearranged y3,y4,y5 = w3", p.clone(), &w3, &ws[2], 1, times.clone())?,
        compare("rearranged y3,y4,y5 = w4", p.clone(), &w4, &ws[3], 1, times.clone())?,
        compare("rearranged y3,y4,y5 = w5", p.clone(), &w5, &ws[4], 1, times.clone())?,
    ];
    let mut second = Check::pass("order-2 element = y1", p);
    for tt in times {
        if f0.element(tt, tt + 2)? != ys[0].coeff(1, tt + 1)? {
            second = Check::fail(second.identity.clone(), second.params.clone(), format!("t={tt}"));
        }
    }
    out.push(second);
    Ok(out)
}

/// Random series `sum_{n=val}^{top} a_n d^n` with tables on `[lo, hi]`.
pub fn random_series(rng: &mut impl Rng, val: i32, top: i32, lo: i64, hi: i64) -> DSeries {
    let coefs = (val..=top).map(|_| Some(TimeWeight::random(rng, lo, hi).coef())).collect();
    DSeries::from_coefs(val, coefs)
}

pub fn rational(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}
