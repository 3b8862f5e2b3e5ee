//! Hard particles on the graph `G_r` and their partition functions.
//!
//! `G_r` has vertices `1..=2r+1`. Edges are the chain `i -- i+1` plus the
//! even-even edges `2k -- 2k+2`. This edge set is the one for which the
//! partition functions satisfy the weight recursion for `C_{r+1,m}` and
//! reproduce its small cases monomial by monomial.

use std::collections::BTreeSet;

use crate::error::Result;
use crate::lattice::LatticeState;
use crate::laurent::Ring;
use crate::report::Check;
use crate::weights::y;
use crate::wronskian::c_recursion;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HardGraph {
    r: i32,
    edges: BTreeSet<(i32, i32)>,
}

impl HardGraph {
    pub fn r(&self) -> i32 {
        self.r
    }

    pub fn vertices(&self) -> std::ops::RangeInclusive<i32> {
        1..=2 * self.r + 1
    }

    pub fn edges(&self) -> impl Iterator<Item = (i32, i32)> + '_ {
        self.edges.iter().copied()
    }

    pub fn adjacent(&self, a: i32, b: i32) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }

    pub fn height(i: i32) -> i32 {
        if i == 1 {
            0
        } else {
            (i + 1) / 2
        }
    }
}

pub fn build_g(r: i32) -> HardGraph {
    let mut edges = BTreeSet::new();
    for i in 1..=2 * r {
        edges.insert((i, i + 1));
    }
    for k in 1..r {
        edges.insert((2 * k, 2 * k + 2));
    }
    HardGraph { r, edges }
}

/// Independent sets of size `m`, each ascending, in lexicographic order.
pub fn enumerate_configs(g: &HardGraph, m: usize) -> Vec<Vec<i32>> {
    fn go(g: &HardGraph, next: i32, m: usize, cur: &mut Vec<i32>, out: &mut Vec<Vec<i32>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for v in next..=2 * g.r + 1 {
            if cur.iter().all(|&u| !g.adjacent(u, v)) {
                cur.push(v);
                go(g, v + 1, m, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    if g.r >= 0 {
        go(g, 1, m, &mut Vec::new(), &mut out);
    } else if m == 0 {
        out.push(Vec::new());
    }
    out
}

/// The factors `(i, time)` of each configuration's weight `prod y_i(time, k)`.
pub fn config_weights(g: &HardGraph, m: usize, j: i32) -> Vec<Vec<(i32, i32)>> {
    let (r, mi) = (g.r, m as i32);
    enumerate_configs(g, m)
        .into_iter()
        .map(|s| {
            s.iter()
                .enumerate()
                .map(|(l, &i)| (i, j - 2 * (r + l as i32 + 1 - mi) - 1 + HardGraph::height(i)))
                .collect()
        })
        .collect()
}

fn weighted_sum<V: Ring>(st: &LatticeState<V>, terms: &[Vec<(i32, i32)>], k: i32) -> Result<V> {
    let mut total = V::zero();
    for t in terms {
        let mut w = V::one();
        for &(i, time) in t {
            w = w.mul(&y(st, i, time, k)?);
        }
        total = total.add(&w);
    }
    Ok(total)
}

/// `Z_m` on `G_r` at `(j, k)`; `r = -1` is the empty graph.
pub fn partition_z<V: Ring>(st: &LatticeState<V>, r: i32, m: i32, j: i32, k: i32) -> Result<V> {
    if m < 0 {
        return Ok(V::zero());
    }
    weighted_sum(st, &config_weights(&build_g(r), m as usize, j), k)
}

/// `Z_m` restricted to configurations avoiding vertex 1, at `k = 0`.
pub fn partition_z_prime<V: Ring>(st: &LatticeState<V>, r: i32, m: i32, j: i32) -> Result<V> {
    if m < 0 {
        return Ok(V::zero());
    }
    let g = build_g(r);
    let terms: Vec<_> = config_weights(&g, m as usize, j).into_iter().filter(|t| t.iter().all(|&(i, _)| i != 1)).collect();
    weighted_sum(st, &terms, 0)
}

/// The recursion in `r` and the agreement with the `C_{r+1,m}` recursion.
pub fn check_recursion<V: Ring>(st: &LatticeState<V>, r: i32, m: i32, j: i32, k: i32) -> Result<Vec<Check>> {
    let params = format!("r={r} m={m} j={j} k={k}");
    let lhs = partition_z(st, r, m, j, k)?;
    let mut rhs = partition_z(st, r - 1, m, j - 2, k)?;
    if m >= 1 {
        rhs = rhs.add(&y(st, 2 * r + 1, j - r, k)?.mul(&partition_z(st, r - 1, m - 1, j, k)?));
        if r >= 1 {
            rhs = rhs.add(&y(st, 2 * r, j - r - 1, k)?.mul(&partition_z(st, r - 2, m - 1, j - 2, k)?));
        }
    }
    let c = c_recursion(st, r + 1, m, j, k)?;
    Ok(vec![
        Check::equal("hard-particle recursion", params.clone(), &lhs, &rhs),
        Check::equal("hard particles = C recursion", params, &lhs, &c),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::SeedSpec;
    use crate::laurent::LaurentPoly;

    #[test]
    fn graphs() {
        assert_eq!(build_g(0).vertices().count(), 1);
        assert_eq!(build_g(0).edges().count(), 0);
        assert_eq!(build_g(1).edges().collect::<Vec<_>>(), vec![(1, 2), (2, 3)]);
        let e: BTreeSet<_> = build_g(2).edges().collect();
        assert_eq!(e, [(1, 2), (2, 3), (3, 4), (2, 4), (4, 5)].into_iter().collect());
        assert_eq!((1..=7).map(HardGraph::height).collect::<Vec<_>>(), vec![0, 1, 2, 2, 3, 3, 4]);
    }

    #[test]
    fn config_counts() {
        let count = |r, m| enumerate_configs(&build_g(r), m).len();
        assert_eq!((0..=2).map(|m| count(1, m)).collect::<Vec<_>>(), vec![1, 3, 1]);
        assert_eq!((0..=3).map(|m| count(2, m)).collect::<Vec<_>>(), vec![1, 5, 5, 1]);
        assert_eq!(count(1, 3), 0);
        assert_eq!(count(3, 5), 0);
        assert_eq!(enumerate_configs(&build_g(2), 2), vec![vec![1, 3], vec![1, 4], vec![1, 5], vec![2, 5], vec![3, 5]]);
    }

    #[test]
    fn z_prime_drops_vertex_one() {
        let st = LatticeState::symbolic(SeedSpec::fundamental(1, (-6, 6)).unwrap());
        assert_eq!(partition_z_prime(&st, 1, 0, 0).unwrap(), LaurentPoly::one());
        let z1 = partition_z(&st, 1, 1, 0, 0).unwrap();
        let y1 = y(&st, 1, -3, 0).unwrap();
        assert_eq!(partition_z_prime(&st, 1, 1, 0).unwrap(), z1.sub(&y1));
    }

    #[test]
    fn recursion_r2() {
        let st = LatticeState::symbolic(SeedSpec::fundamental(2, (-10, 6)).unwrap());
        for m in 0..=3 {
            let checks = check_recursion(&st, 2, m, 0, 0).unwrap();
            assert!(checks.iter().all(|c| c.ok), "{checks:?}");
        }
    }
}
