//! Time-dependent step weights built from ratios of T values.
//!
//! `y_1(j,k)      = T[1,j+k,k+1] / T[1,j+k+1,k]`
//! `y_{2a}(j,k)   = T[a+1,j+k,k+1] T[a-1,j+k+1,k] / (T[a,j+k,k] T[a,j+k+1,k+1])`
//! `y_{2a+1}(j,k) = T[a+1,j+k-1,k+1] T[a,j+k+1,k] / (T[a+1,j+k,k] T[a,j+k,k+1])`

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::lattice::LatticeState;
use crate::laurent::Ring;

/// A product of powers of lattice points `T[a,j,k]`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TRatio {
    factors: BTreeMap<(i32, i32, i32), i32>,
}

impl TRatio {
    pub fn one() -> Self {
        TRatio::default()
    }

    pub fn t(a: i32, j: i32, k: i32) -> Self {
        TRatio::pow_of(a, j, k, 1)
    }

    pub fn pow_of(a: i32, j: i32, k: i32, e: i32) -> Self {
        let mut r = TRatio::one();
        r.push(a, j, k, e);
        r
    }

    fn push(&mut self, a: i32, j: i32, k: i32, e: i32) {
        if e == 0 {
            return;
        }
        let slot = self.factors.entry((a, j, k)).or_insert(0);
        *slot += e;
        if *slot == 0 {
            self.factors.remove(&(a, j, k));
        }
    }

    pub fn mul(&self, other: &TRatio) -> TRatio {
        let mut out = self.clone();
        for (&(a, j, k), &e) in &other.factors {
            out.push(a, j, k, e);
        }
        out
    }

    pub fn inv(&self) -> TRatio {
        TRatio { factors: self.factors.iter().map(|(&p, &e)| (p, -e)).collect() }
    }

    pub fn div(&self, other: &TRatio) -> TRatio {
        self.mul(&other.inv())
    }

    pub fn factors(&self) -> impl Iterator<Item = ((i32, i32, i32), i32)> + '_ {
        self.factors.iter().map(|(&p, &e)| (p, e))
    }

    /// Drops the unit boundary rows `0` and `r+1`.
    pub fn reduced(&self, r: usize) -> TRatio {
        let top = r as i32 + 1;
        TRatio {
            factors: self
                .factors
                .iter()
                .filter(|(&(a, _, _), _)| a != 0 && a != top)
                .map(|(&p, &e)| (p, e))
                .collect(),
        }
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    /// Evaluates with one exact division at the end.
    pub fn eval<V: Ring>(&self, st: &LatticeState<V>) -> Result<V> {
        let mut num = V::one();
        let mut den = V::one();
        for (&(a, j, k), &e) in &self.reduced(st.r()).factors {
            let v = st.evolve(a, j, k)?;
            for _ in 0..e.unsigned_abs() {
                if e > 0 {
                    num = num.mul(&v);
                } else {
                    den = den.mul(&v);
                }
            }
        }
        num.exact_div(&den)
    }

    /// Shifts every j index by `dj` and every level by `dk`.
    pub fn shifted(&self, dj: i32, dk: i32) -> TRatio {
        TRatio { factors: self.factors.iter().map(|(&(a, j, k), &e)| ((a, j + dj, k + dk), e)).collect() }
    }
}

impl fmt::Display for TRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|(&(a, j, k), &e)| format!("T[{a},{j},{k}]^{e}"))
            .collect();
        write!(f, "{}", parts.join(" * "))
    }
}

/// `y_i(j,k)` as a ratio of lattice points, `1 <= i <= 2r+1`.
pub fn y_ratio(r: usize, i: i32, j: i32, k: i32) -> Result<TRatio> {
    if i < 1 || i > 2 * r as i32 + 1 {
        return Err(Error::InvalidIndex(format!("weight index {i} outside 1..={}", 2 * r + 1)));
    }
    let s = j + k;
    let t = TRatio::t;
    let out = if i == 1 {
        t(1, s, k + 1).div(&t(1, s + 1, k))
    } else if i % 2 == 0 {
        let a = i / 2;
        t(a + 1, s, k + 1).mul(&t(a - 1, s + 1, k)).div(&t(a, s, k).mul(&t(a, s + 1, k + 1)))
    } else {
        let a = (i - 1) / 2;
        t(a + 1, s - 1, k + 1).mul(&t(a, s + 1, k)).div(&t(a + 1, s, k).mul(&t(a, s, k + 1)))
    };
    Ok(out.reduced(r))
}

/// `y_i(j,k)` evaluated on a lattice.
pub fn y<V: Ring>(st: &LatticeState<V>, i: i32, j: i32, k: i32) -> Result<V> {
    y_ratio(st.r(), i, j, k)?.eval(st)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::SeedSpec;
    use crate::laurent::{LaurentPoly, SeedVar};

    #[test]
    fn ratio_cancels() {
        let a = TRatio::t(1, 0, 0).mul(&TRatio::t(2, 1, 1));
        assert!(a.div(&a).is_one());
        assert_eq!(a.to_string(), "T[1,0,0]^1 * T[2,1,1]^1");
    }

    #[test]
    fn a1_weights_are_monomials() {
        let st = LatticeState::symbolic(SeedSpec::fundamental(1, (-4, 4)).unwrap());
        let v = |j, l| LaurentPoly::var(SeedVar::new(1, j, l));
        assert_eq!(y(&st, 1, 0, 0).unwrap(), v(0, 1).exact_div(&v(1, 0)).unwrap());
        assert_eq!(y(&st, 2, 0, 0).unwrap(), LaurentPoly::one().exact_div(&v(0, 0).mul(&v(1, 1))).unwrap());
        assert_eq!(y(&st, 3, 0, 0).unwrap(), v(1, 0).exact_div(&v(0, 1)).unwrap());
        assert!(y(&st, 4, 0, 0).is_err());
    }
}
