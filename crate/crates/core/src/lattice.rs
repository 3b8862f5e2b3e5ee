//! Seeds and evolution of the A_r T-system
//!
//! `T[a,j,k+1] T[a,j,k-1] = T[a,j+1,k] T[a,j-1,k] + T[a+1,j,k] T[a-1,j,k]`
//! with `T[0,j,k] = T[r+1,j,k] = 1`.

use std::cell::RefCell;
use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::laurent::{LaurentPoly, Ring, SeedVar};

/// Sequence `(m_1, ..., m_r)` with neighbouring entries differing by at most one.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MotzkinPath(Vec<i32>);

impl MotzkinPath {
    pub fn new(m: Vec<i32>) -> Result<Self> {
        if m.is_empty() || m.windows(2).any(|w| (w[0] - w[1]).abs() > 1) {
            return Err(Error::InvalidMotzkin(m));
        }
        Ok(MotzkinPath(m))
    }

    pub fn zero(r: usize) -> Self {
        MotzkinPath(vec![0; r])
    }

    pub fn constant(r: usize, c: i32) -> Self {
        MotzkinPath(vec![c; r])
    }

    pub fn r(&self) -> usize {
        self.0.len()
    }

    /// `m_alpha` for `1 <= alpha <= r`.
    pub fn m(&self, alpha: i32) -> i32 {
        self.0[(alpha - 1) as usize]
    }

    pub fn as_slice(&self) -> &[i32] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&m| m == 0)
    }

    /// Every path of length `r` with entries in `0..=top`, in lexicographic order.
    pub fn enumerate(r: usize, top: i32) -> Vec<MotzkinPath> {
        let mut out: Vec<Vec<i32>> = vec![Vec::new()];
        for _ in 0..r {
            let mut next = Vec::new();
            for p in out {
                for x in (0..=top).filter(|&x| p.last().is_none_or(|&l| (l - x).abs() <= 1)) {
                    let mut q = p.clone();
                    q.push(x);
                    next.push(q);
                }
            }
            out = next;
        }
        out.into_iter().map(MotzkinPath).collect()
    }

    pub fn negated(&self) -> MotzkinPath {
        MotzkinPath(self.0.iter().map(|m| -m).collect())
    }
}

/// Rank, Motzkin path and inclusive j-window of a seed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeedSpec {
    pub r: usize,
    pub motzkin: MotzkinPath,
    pub window: (i32, i32),
}

impl SeedSpec {
    pub fn new(r: usize, motzkin: MotzkinPath, window: (i32, i32)) -> Result<Self> {
        if r == 0 || motzkin.r() != r {
            return Err(Error::InvalidIndex(format!(
                "rank {r} with a Motzkin path of length {}",
                motzkin.r()
            )));
        }
        if window.0 > window.1 {
            return Err(Error::EmptyWindow(window.0, window.1));
        }
        Ok(SeedSpec { r, motzkin, window })
    }

    pub fn fundamental(r: usize, window: (i32, i32)) -> Result<Self> {
        SeedSpec::new(r, MotzkinPath::zero(r), window)
    }

    /// Level distance from row `alpha`'s seed pair to level `k`.
    pub fn level_distance(&self, alpha: i32, k: i32) -> i32 {
        if alpha < 1 || alpha > self.r as i32 {
            return 0;
        }
        let m = self.motzkin.m(alpha);
        if k > m + 1 {
            k - m - 1
        } else if k < m {
            m - k
        } else {
            0
        }
    }

    /// Seed j-range that evaluating `T[alpha,j,k]` reads.
    pub fn cone(&self, alpha: i32, j: i32, k: i32) -> (i32, i32) {
        let d = self.level_distance(alpha, k);
        (j - d, j + d)
    }

    /// Smallest window around `j` that holds the cone of every `(alpha, j, k)` with `|k| <= kmax`.
    pub fn window_for(r: usize, motzkin: &MotzkinPath, j: i32, kmax: i32, margin: i32) -> (i32, i32) {
        let mmax = motzkin.as_slice().iter().map(|m| m.abs()).max().unwrap_or(0);
        let d = kmax + mmax + 1 + margin;
        let _ = r;
        (j - d, j + d)
    }
}

/// Memoized T-system values over a seed.
#[derive(Debug)]
pub struct LatticeState<V: Ring> {
    spec: SeedSpec,
    seed: HashMap<(i32, i32, i32), V>,
    memo: RefCell<HashMap<(i32, i32, i32), V>>,
    twisted: bool,
}

impl<V: Ring> Clone for LatticeState<V> {
    fn clone(&self) -> Self {
        LatticeState {
            spec: self.spec.clone(),
            seed: self.seed.clone(),
            memo: RefCell::new(self.memo.borrow().clone()),
            twisted: self.twisted,
        }
    }
}

impl<V: Ring> LatticeState<V> {
    /// Seeds `T[a,j,m_a]` and `T[a,j,m_a+1]` on the window from `value`.
    pub fn from_fn(spec: SeedSpec, mut value: impl FnMut(SeedVar) -> V) -> Self {
        let mut seed = HashMap::new();
        for a in 1..=spec.r as i32 {
            let m = spec.motzkin.m(a);
            for j in spec.window.0..=spec.window.1 {
                for l in [m, m + 1] {
                    seed.insert((a, j, l), value(SeedVar::new(a, j, l)));
                }
            }
        }
        LatticeState { spec, seed, memo: RefCell::new(HashMap::new()), twisted: false }
    }

    /// Seeds from an explicit table; every seed point of the window must be present.
    pub fn from_map(spec: SeedSpec, map: &HashMap<SeedVar, V>) -> Result<Self> {
        let mut missing = None;
        let st = Self::from_fn(spec, |v| match map.get(&v) {
            Some(x) => x.clone(),
            None => {
                missing.get_or_insert(v);
                V::zero()
            }
        });
        match missing {
            Some(v) => Err(Error::MissingVariable(v)),
            None => Ok(st),
        }
    }

    /// Flips the sign of the product term (the twisted system).
    pub fn twisted(mut self, on: bool) -> Self {
        self.twisted = on;
        self.memo.borrow_mut().clear();
        self
    }

    pub fn spec(&self) -> &SeedSpec {
        &self.spec
    }

    pub fn r(&self) -> usize {
        self.spec.r
    }

    pub fn motzkin(&self) -> &MotzkinPath {
        &self.spec.motzkin
    }

    pub fn seed_value(&self, alpha: i32, j: i32, level: i32) -> Option<&V> {
        self.seed.get(&(alpha, j, level))
    }

    pub fn seed_entries(&self) -> impl Iterator<Item = (SeedVar, &V)> {
        self.seed.iter().map(|(&(a, j, l), v)| (SeedVar::new(a, j, l), v))
    }

    pub fn seed_len(&self) -> usize {
        self.seed.len()
    }

    pub fn memo_keys(&self) -> Vec<(i32, i32, i32)> {
        let mut keys: Vec<_> = self.memo.borrow().keys().copied().collect();
        keys.sort();
        keys
    }

    pub fn check_cone(&self, alpha: i32, j: i32, k: i32) -> Result<()> {
        let (lo, hi) = self.spec.cone(alpha, j, k);
        let (wl, wh) = self.spec.window;
        if lo < wl || hi > wh {
            return Err(Error::WindowExceeded {
                alpha,
                j,
                k,
                need_lo: lo,
                need_hi: hi,
                lo: wl,
                hi: wh,
            });
        }
        Ok(())
    }

    /// `T[alpha,j,k]` in the seed variables.
    pub fn evolve(&self, alpha: i32, j: i32, k: i32) -> Result<V> {
        let r = self.spec.r as i32;
        if alpha < 0 || alpha > r + 1 {
            return Err(Error::InvalidIndex(format!("alpha = {alpha} outside 0..={}", r + 1)));
        }
        if alpha == 0 || alpha == r + 1 {
            return Ok(V::one());
        }
        self.check_cone(alpha, j, k)?;
        self.get(alpha, j, k)
    }

    /// Like `evolve` but also accepts points on which the caller already has a cone guarantee.
    pub fn t(&self, alpha: i32, j: i32, k: i32) -> Result<V> {
        self.evolve(alpha, j, k)
    }

    fn get(&self, alpha: i32, j: i32, k: i32) -> Result<V> {
        let r = self.spec.r as i32;
        if alpha == 0 || alpha == r + 1 {
            return Ok(V::one());
        }
        if let Some(v) = self.seed.get(&(alpha, j, k)) {
            return Ok(v.clone());
        }
        if let Some(v) = self.memo.borrow().get(&(alpha, j, k)) {
            return Ok(v.clone());
        }
        let m = self.spec.motzkin.m(alpha);
        let (lvl, far) = if k > m + 1 {
            (k - 1, k - 2)
        } else if k < m {
            (k + 1, k + 2)
        } else {
            let (wl, wh) = self.spec.window;
            return Err(Error::WindowExceeded {
                alpha,
                j,
                k,
                need_lo: j.min(wl),
                need_hi: j.max(wh),
                lo: wl,
                hi: wh,
            });
        };
        let a = self.get(alpha, j + 1, lvl)?.mul(&self.get(alpha, j - 1, lvl)?);
        let b = self.get(alpha + 1, j, lvl)?.mul(&self.get(alpha - 1, j, lvl)?);
        let num = if self.twisted { a.sub(&b) } else { a.add(&b) };
        let v = num.exact_div(&self.get(alpha, j, far)?)?;
        self.memo.borrow_mut().insert((alpha, j, k), v.clone());
        Ok(v)
    }

    /// The same data read with `j -> -j`.
    pub fn reflected_j(&self) -> LatticeState<V> {
        let spec = SeedSpec {
            window: (-self.spec.window.1, -self.spec.window.0),
            ..self.spec.clone()
        };
        let seed = self.seed.iter().map(|(&(a, j, l), v)| ((a, -j, l), v.clone())).collect();
        LatticeState { spec, seed, memo: RefCell::new(HashMap::new()), twisted: self.twisted }
    }

    /// The same data read with `k -> 1-k`; the Motzkin path is negated.
    pub fn swapped_levels(&self) -> LatticeState<V> {
        let spec = SeedSpec {
            motzkin: self.spec.motzkin.negated(),
            ..self.spec.clone()
        };
        let seed = self.seed.iter().map(|(&(a, j, l), v)| ((a, j, 1 - l), v.clone())).collect();
        LatticeState { spec, seed, memo: RefCell::new(HashMap::new()), twisted: self.twisted }
    }

    /// Rows `first..=r` renumbered `1..`; row `first-1` becomes the unit boundary.
    pub fn upper_rows(&self, first: i32) -> Result<LatticeState<V>> {
        let r = self.spec.r as i32;
        if first < 1 || first > r {
            return Err(Error::InvalidIndex(format!("first row {first} outside 1..={r}")));
        }
        let shift = first - 1;
        let m: Vec<i32> = self.spec.motzkin.as_slice()[shift as usize..].to_vec();
        let spec = SeedSpec::new((r - shift) as usize, MotzkinPath(m), self.spec.window)?;
        let seed = self
            .seed
            .iter()
            .filter(|(&(a, _, _), _)| a > shift)
            .map(|(&(a, j, l), v)| ((a - shift, j, l), v.clone()))
            .collect();
        Ok(LatticeState { spec, seed, memo: RefCell::new(HashMap::new()), twisted: self.twisted })
    }

    /// A state on `target`'s seed whose seed values are evolved from this state.
    pub fn induced(&self, target: &MotzkinPath, window: (i32, i32)) -> Result<LatticeState<V>> {
        let spec = SeedSpec::new(self.spec.r, target.clone(), window)?;
        let mut err = None;
        let st = LatticeState::from_fn(spec, |v| match self.evolve(v.alpha, v.j, v.level) {
            Ok(x) => x,
            Err(e) => {
                err.get_or_insert(e);
                V::zero()
            }
        });
        match err {
            Some(e) => Err(e),
            None => Ok(st),
        }
    }

    /// Residual of the recurrence at `(alpha, j, k)`.
    pub fn exchange_residual(&self, alpha: i32, j: i32, k: i32) -> Result<V> {
        let lhs = self.evolve(alpha, j, k + 1)?.mul(&self.evolve(alpha, j, k - 1)?);
        let a = self.evolve(alpha, j + 1, k)?.mul(&self.evolve(alpha, j - 1, k)?);
        let b = self.evolve(alpha + 1, j, k)?.mul(&self.evolve(alpha - 1, j, k)?);
        let rhs = if self.twisted { a.sub(&b) } else { a.add(&b) };
        Ok(lhs.sub(&rhs))
    }
}

impl LatticeState<LaurentPoly> {
    /// Seed values are the symbols themselves.
    pub fn symbolic(spec: SeedSpec) -> Self {
        Self::from_fn(spec, LaurentPoly::var)
    }
}

impl LatticeState<BigRational> {
    pub fn all_ones(spec: SeedSpec) -> Self {
        Self::from_fn(spec, |_| BigRational::from_integer(BigInt::from(1)))
    }

    /// Positive random rationals `p/q` with `1 <= p, q <= 9`, reproducible from `seed`.
    pub fn random(spec: SeedSpec, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut vars: Vec<SeedVar> = Vec::new();
        for a in 1..=spec.r as i32 {
            let m = spec.motzkin.m(a);
            for j in spec.window.0..=spec.window.1 {
                vars.push(SeedVar::new(a, j, m));
                vars.push(SeedVar::new(a, j, m + 1));
            }
        }
        let vals: HashMap<SeedVar, BigRational> = vars
            .into_iter()
            .map(|v| {
                let p: i64 = rng.gen_range(1..=9);
                let q: i64 = rng.gen_range(1..=9);
                (v, BigRational::new(p.into(), q.into()))
            })
            .collect();
        Self::from_fn(spec, |v| vals[&v].clone())
    }
}

/// `T[alpha,j,k]` written in the variables of `target`'s seed.
pub fn reexpress(spec: &SeedSpec, target: &MotzkinPath, alpha: i32, j: i32, k: i32) -> Result<LaurentPoly> {
    let st = LatticeState::symbolic(SeedSpec::new(spec.r, target.clone(), spec.window)?);
    st.evolve(alpha, j, k)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn seed_counts_and_validation() {
        let st = LatticeState::symbolic(SeedSpec::fundamental(1, (-3, 3)).unwrap());
        assert_eq!(st.seed_len(), 14);
        assert!(st.seed_entries().all(|(v, p)| *p == LaurentPoly::var(v)));
        assert!(matches!(MotzkinPath::new(vec![0, 2]), Err(Error::InvalidMotzkin(_))));
        assert_eq!(SeedSpec::fundamental(1, (2, 1)), Err(Error::EmptyWindow(2, 1)));
        let m = MotzkinPath::new(vec![0, 1]).unwrap();
        let st = LatticeState::symbolic(SeedSpec::new(2, m, (0, 0)).unwrap());
        assert!(st.seed_value(1, 0, 0).is_some() && st.seed_value(1, 0, 1).is_some());
        assert!(st.seed_value(2, 0, 1).is_some() && st.seed_value(2, 0, 2).is_some());
        assert!(st.seed_value(2, 0, 0).is_none());
    }

    #[test]
    fn a1_all_ones() {
        let st = LatticeState::all_ones(SeedSpec::fundamental(1, (-8, 8)).unwrap());
        let got: Vec<BigRational> = (0..=6).map(|k| st.evolve(1, 0, k).unwrap()).collect();
        let want: Vec<BigRational> = [1, 1, 2, 5, 13, 34, 89].iter().map(|&n| q(n)).collect();
        assert_eq!(got, want);
    }

    #[test]
    fn a2_all_ones() {
        let st = LatticeState::all_ones(SeedSpec::fundamental(2, (-5, 5)).unwrap());
        assert_eq!(st.evolve(1, 0, 2).unwrap(), q(2));
        assert_eq!(st.evolve(1, 0, 3).unwrap(), q(6));
    }

    #[test]
    fn a1_two_term_step() {
        let st = LatticeState::symbolic(SeedSpec::fundamental(1, (-3, 3)).unwrap());
        let t = st.evolve(1, 0, 2).unwrap();
        assert_eq!(t.len(), 2);
        let v = |j, l| LaurentPoly::var(SeedVar::new(1, j, l));
        let num = v(1, 1).mul(&v(-1, 1)).add(&LaurentPoly::one());
        assert_eq!(t.mul(&v(0, 0)), num);
    }

    #[test]
    fn window_is_checked_before_work() {
        let st = LatticeState::symbolic(SeedSpec::fundamental(2, (-1, 1)).unwrap());
        match st.evolve(1, 0, 4) {
            Err(Error::WindowExceeded { need_lo, need_hi, .. }) => assert_eq!((need_lo, need_hi), (-3, 3)),
            other => panic!("unexpected {other:?}"),
        }
        assert!(st.memo_keys().is_empty());
    }

    #[test]
    fn backward_and_boundary() {
        let st = LatticeState::symbolic(SeedSpec::fundamental(2, (-4, 4)).unwrap());
        assert_eq!(st.evolve(0, 0, 7).unwrap(), LaurentPoly::one());
        assert_eq!(st.evolve(3, 0, -7).unwrap(), LaurentPoly::one());
        let t = st.evolve(1, 0, -2).unwrap();
        assert!(t.is_positive());
        assert!(st.evolve(4, 0, 0).is_err());
    }

    #[test]
    fn twisted_sign_flips_product_term() {
        let st = LatticeState::symbolic(SeedSpec::fundamental(1, (-2, 2)).unwrap()).twisted(true);
        let v = |j, l| LaurentPoly::var(SeedVar::new(1, j, l));
        let num = v(1, 1).mul(&v(-1, 1)).sub(&LaurentPoly::one());
        assert_eq!(st.evolve(1, 0, 2).unwrap().mul(&v(0, 0)), num);
        assert!(st.exchange_residual(1, 0, 1).unwrap().is_zero());
    }
}
