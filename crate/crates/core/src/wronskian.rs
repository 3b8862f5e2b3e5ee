//! Discrete Wronskians of `T[1,.,.]`, defect Wronskians and conserved quantities.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::lattice::{LatticeState, SeedSpec};
use crate::laurent::{LaurentPoly, Ring};
use crate::report::Check;
use crate::weights::y;

/// Dense matrix with ring entries.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyMatrix<V: Ring> {
    rows: usize,
    cols: usize,
    data: Vec<V>,
}

impl<V: Ring> PolyMatrix<V> {
    pub fn from_rows(rows: Vec<Vec<V>>) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, |r| r.len());
        if n == 0 || m == 0 || rows.iter().any(|r| r.len() != m) {
            return Err(Error::InvalidIndex(format!("ragged or empty {n}-row matrix")));
        }
        Ok(PolyMatrix { rows: n, cols: m, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Result<V>) -> Result<Self> {
        let mut data = Vec::with_capacity(rows * cols);
        for a in 0..rows {
            for b in 0..cols {
                data.push(f(a, b)?);
            }
        }
        Ok(PolyMatrix { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, a: usize, b: usize) -> &V {
        &self.data[a * self.cols + b]
    }

    /// Submatrix keeping the listed rows and columns, in order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> PolyMatrix<V> {
        let data = rows
            .iter()
            .flat_map(|&a| cols.iter().map(move |&b| (a, b)))
            .map(|(a, b)| self.get(a, b).clone())
            .collect();
        PolyMatrix { rows: rows.len(), cols: cols.len(), data }
    }

    /// Drops the listed rows and columns.
    pub fn minor(&self, drop_rows: &[usize], drop_cols: &[usize]) -> PolyMatrix<V> {
        let rows: Vec<usize> = (0..self.rows).filter(|a| !drop_rows.contains(a)).collect();
        let cols: Vec<usize> = (0..self.cols).filter(|b| !drop_cols.contains(b)).collect();
        self.select(&rows, &cols)
    }

    /// Laplace expansion along rows, memoized on the set of unused columns.
    pub fn det(&self) -> Result<V> {
        if self.rows != self.cols {
            return Err(Error::NonSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(V::one());
        }
        if n > 20 {
            return Err(Error::Unsupported(format!("{n}x{n} determinant")));
        }
        let mut memo: HashMap<u32, V> = HashMap::new();
        Ok(self.laplace(0, (1u32 << n) - 1, &mut memo))
    }

    fn laplace(&self, row: usize, cols: u32, memo: &mut HashMap<u32, V>) -> V {
        if row == self.rows {
            return V::one();
        }
        if let Some(v) = memo.get(&cols) {
            return v.clone();
        }
        let mut acc = V::zero();
        let mut sign_neg = false;
        for c in 0..self.cols {
            if cols & (1 << c) == 0 {
                continue;
            }
            let e = self.get(row, c);
            if !e.is_zero() {
                let sub = self.laplace(row + 1, cols & !(1 << c), memo);
                let term = e.mul(&sub);
                acc = if sign_neg { acc.sub(&term) } else { acc.add(&term) };
            }
            sign_neg = !sign_neg;
        }
        memo.insert(cols, acc.clone());
        acc
    }

    /// Dodgson condensation; fails when an interior pivot vanishes.
    pub fn det_dodgson(&self) -> Result<V> {
        if self.rows != self.cols {
            return Err(Error::NonSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(V::one());
        }
        let mut prev: Vec<Vec<V>> = vec![vec![V::one(); n + 1]; n + 1];
        let mut cur: Vec<Vec<V>> = (0..n).map(|a| (0..n).map(|b| self.get(a, b).clone()).collect()).collect();
        for size in (1..n).rev() {
            let mut next = Vec::with_capacity(size);
            for a in 0..size {
                let mut row = Vec::with_capacity(size);
                for b in 0..size {
                    let num = cur[a][b].mul(&cur[a + 1][b + 1]).sub(&cur[a][b + 1].mul(&cur[a + 1][b]));
                    let piv = &prev[a + 1][b + 1];
                    if piv.is_zero() {
                        return Err(Error::DivisionByZero);
                    }
                    row.push(num.exact_div(piv)?);
                }
                next.push(row);
            }
            prev = cur;
            cur = next;
        }
        Ok(cur[0][0].clone())
    }

    /// `|P^{a,b}|`: the signed determinant with columns `a` and `b` deleted.
    pub fn plucker_minor(&self, a: usize, b: usize) -> Result<V> {
        if a == b {
            return Ok(V::zero());
        }
        let d = self.minor(&[], &[a, b]).det()?;
        Ok(if a < b { d } else { d.neg() })
    }
}

fn t1<V: Ring>(st: &LatticeState<V>, j: i32, k: i32) -> Result<V> {
    st.evolve(1, j, k)
}

/// `det_{1<=a,b<=alpha} T[1, j-a+b, k+a+b-alpha-1]`.
pub fn t_from_wronskian<V: Ring>(st: &LatticeState<V>, alpha: i32, j: i32, k: i32) -> Result<V> {
    if alpha < 0 {
        return Err(Error::InvalidIndex(format!("alpha = {alpha}")));
    }
    if alpha == 0 {
        return Ok(V::one());
    }
    let n = alpha as usize;
    PolyMatrix::from_fn(n, n, |a, b| {
        let (a, b) = (a as i32 + 1, b as i32 + 1);
        t1(st, j - a + b, k + a + b - alpha - 1)
    })?
    .det()
}

/// `c_{N,m,j,k}`: the `N x (N+1)` array `T[1, j+a-b, k+a+b-N-1]` with column `N+1-m` deleted.
pub fn defect_wronskian<V: Ring>(st: &LatticeState<V>, n: i32, m: i32, j: i32, k: i32) -> Result<V> {
    if m < 0 || m > n || n < 0 {
        return Ok(V::zero());
    }
    if n == 0 {
        return Ok(V::one());
    }
    let skip = n - m;
    PolyMatrix::from_fn(n as usize, n as usize, |a, b| {
        let a = a as i32 + 1;
        let mut b = b as i32 + 1;
        if b > skip {
            b += 1;
        }
        t1(st, j + a - b, k + a + b - n - 1)
    })?
    .det()
}

/// `c_m(s)` from the defect Wronskian of size `r+1` taken at offset `n`.
pub fn conserved_via_defect<V: Ring>(st: &LatticeState<V>, m: i32, s: i32, n: i32) -> Result<V> {
    let r = st.r() as i32;
    defect_wronskian(st, r + 1, m, s + n, n + r)
}

/// `C_{alpha,m}(j,k)` by the recursion in the hard-particle weights.
pub fn c_recursion<V: Ring>(st: &LatticeState<V>, alpha: i32, m: i32, j: i32, k: i32) -> Result<V> {
    let mut memo = HashMap::new();
    c_rec(st, alpha, m, j, k, &mut memo)
}

fn c_rec<V: Ring>(
    st: &LatticeState<V>,
    alpha: i32,
    m: i32,
    j: i32,
    k: i32,
    memo: &mut HashMap<(i32, i32, i32), V>,
) -> Result<V> {
    if m < 0 || alpha < 0 || m > alpha {
        return Ok(V::zero());
    }
    if m == 0 {
        return Ok(V::one());
    }
    if alpha == 1 {
        return y(st, 1, j - 1, k);
    }
    if let Some(v) = memo.get(&(alpha, m, j)) {
        return Ok(v.clone());
    }
    let a = alpha - 1;
    let mut out = c_rec(st, a, m, j - 2, k, memo)?;
    let lower = c_rec(st, a, m - 1, j, k, memo)?;
    if !lower.is_zero() {
        out = out.add(&y(st, 2 * a + 1, j - a, k)?.mul(&lower));
    }
    let lowest = c_rec(st, a - 1, m - 1, j - 2, k, memo)?;
    if !lowest.is_zero() {
        out = out.add(&y(st, 2 * a, j - a - 1, k)?.mul(&lowest));
    }
    memo.insert((alpha, m, j), out.clone());
    Ok(out)
}

/// `c_m(j)`, computed from the defect Wronskian and from the weight recursion, which must agree.
pub fn conserved_c<V: Ring>(st: &LatticeState<V>, m: i32, j: i32) -> Result<V> {
    let r = st.r() as i32;
    if m < 0 || m > r + 1 {
        return Err(Error::InvalidIndex(format!("m = {m} outside 0..={}", r + 1)));
    }
    let a = conserved_via_defect(st, m, j, 0)?;
    let b = c_recursion(st, r + 1, m, j, 0)?;
    if a != b {
        return Err(Error::InternalMismatch(format!("c_{m}({j}): defect Wronskian {a} vs recursion {b}")));
    }
    Ok(a)
}

/// `d_m(j)`: `c_m(-j)` of the j-reflected data.
pub fn conserved_d<V: Ring>(st: &LatticeState<V>, m: i32, j: i32) -> Result<V> {
    conserved_c(&st.reflected_j(), m, -j)
}

/// Both linear recursions for `T[1,.,.]` at `(j, k)`.
pub fn check_linear_recursions<V: Ring>(st: &LatticeState<V>, j: i32, k: i32) -> Result<Vec<Check>> {
    let r = st.r() as i32;
    let params = format!("r={r} j={j} k={k}");
    let mut lhs = V::zero();
    for b in 0..=r + 1 {
        let term = conserved_c(st, r + 1 - b, j - k)?.mul(&t1(st, j - b, k + b)?);
        lhs = if b % 2 == 0 { lhs.add(&term) } else { lhs.sub(&term) };
    }
    let mut rhs = V::zero();
    for a in 0..=r + 1 {
        let term = conserved_d(st, r + 1 - a, j + k)?.mul(&t1(st, j + a, k + a)?);
        rhs = if a % 2 == 0 { rhs.add(&term) } else { rhs.sub(&term) };
    }
    Ok(vec![
        Check::residual("linear recursion in c", params.clone(), &lhs),
        Check::residual("linear recursion in d", params, &rhs),
    ])
}

/// The defect recursions on a rank `alpha+m+2` fundamental lattice, so the top row stays out of reach.
pub fn check_defect_recursions(alpha: i32, m: i32, j: i32, k: i32) -> Result<Vec<Check>> {
    if alpha < 2 || m < 1 {
        return Err(Error::InvalidIndex(format!("defect recursions need alpha >= 2, m >= 1; got {alpha}, {m}")));
    }
    let rank = (alpha + m + 2) as usize;
    let reach = alpha + k.abs() + 4;
    let st = LatticeState::symbolic(SeedSpec::fundamental(rank, (j - 2 * reach, j + 2 * reach))?);
    let t = |a: i32, jj: i32, kk: i32| st.evolve(a, jj, kk);
    let c = |n: i32, mm: i32, jj: i32, kk: i32| defect_wronskian(&st, n, mm, jj, kk);
    let params = format!("alpha={alpha} m={m} j={j} k={k}");

    let first = t(alpha - 1, j - 1, k - 1)?.mul(&c(alpha - 1, m, j, k)?).sub(
        &t(alpha, j - 1, k)?
            .mul(&c(alpha - 2, m - 1, j, k - 1)?)
            .add(&t(alpha - 1, j, k)?.mul(&c(alpha - 1, m, j - 1, k - 1)?)),
    );
    let second = t(alpha - 1, j - 1, k)?.mul(&c(alpha, m, j, k)?).sub(
        &t(alpha, j - 1, k + 1)?
            .mul(&c(alpha - 1, m - 1, j, k - 1)?)
            .add(&t(alpha, j, k)?.mul(&c(alpha - 1, m, j - 1, k)?)),
    );
    let p = t(alpha - 1, j - 1, k - 1)?;
    let q = t(alpha - 1, j, k)?;
    let u = t(alpha, j, k - 1)?;
    let w = t(alpha, j - 1, k)?;
    let third = p.mul(&q).mul(&c(alpha, m, j, k - 1)?).sub(
        &p.mul(&w)
            .mul(&c(alpha - 1, m - 1, j + 1, k - 1)?)
            .add(&u.mul(&q).mul(&c(alpha - 1, m, j - 1, k - 1)?))
            .add(&u.mul(&w).mul(&c(alpha - 2, m - 1, j, k - 1)?)),
    );
    let delta = |x: bool| if x { LaurentPoly::one() } else { LaurentPoly::zero() };
    let one_row = c(1, m, j, k)?
        .sub(&delta(m == 0).mul(&t(1, j, k)?))
        .sub(&delta(m == 1).mul(&t(1, j - 1, k + 1)?));
    Ok(vec![
        Check::residual("defect recursion (first)", params.clone(), &first),
        Check::residual("defect recursion (second)", params.clone(), &second),
        Check::residual("defect recursion (conserved)", params.clone(), &third),
        Check::residual("defect boundary c_1", params.clone(), &one_row),
        Check::residual("defect boundary c_0", params, &c(0, m, j, k)?.sub(&delta(m == 0))),
    ])
}
