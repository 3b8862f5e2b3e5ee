//! Exchange matrix of the bipartite A_r T-system and its mutations.
//!
//! Nodes are `(a, j)` carrying `T[a,j,0]`, barred `(a~, j)` carrying `T[a,j,1]`,
//! and optional frozen coefficient nodes `a'`. On a finite j-window the
//! neighbourhoods of edge nodes are truncated, so lemma checks only look at
//! an interior margin.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::lattice::LatticeState;
use crate::laurent::Ring;
use crate::report::Check;

/// Interior margin used by the lemma checks.
pub const MARGIN: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum QuiverNode {
    Unbarred { alpha: i32, j: i32 },
    Barred { alpha: i32, j: i32 },
    Coefficient { alpha: i32 },
}

impl QuiverNode {
    pub fn alpha(&self) -> i32 {
        match *self {
            QuiverNode::Unbarred { alpha, .. } | QuiverNode::Barred { alpha, .. } | QuiverNode::Coefficient { alpha } => alpha,
        }
    }

    pub fn j(&self) -> Option<i32> {
        match *self {
            QuiverNode::Unbarred { j, .. } | QuiverNode::Barred { j, .. } => Some(j),
            QuiverNode::Coefficient { .. } => None,
        }
    }

    pub fn is_coefficient(&self) -> bool {
        matches!(self, QuiverNode::Coefficient { .. })
    }

    /// The lattice point held by this node in the fundamental seed.
    pub fn level(&self) -> Option<i32> {
        match self {
            QuiverNode::Unbarred { .. } => Some(0),
            QuiverNode::Barred { .. } => Some(1),
            QuiverNode::Coefficient { .. } => None,
        }
    }
}

impl fmt::Display for QuiverNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuiverNode::Unbarred { alpha, j } => write!(f, "({alpha},{j})"),
            QuiverNode::Barred { alpha, j } => write!(f, "(b{alpha},{j})"),
            QuiverNode::Coefficient { alpha } => write!(f, "q{alpha}"),
        }
    }
}

/// Rows over all nodes, columns over the mutable ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExchangeMatrix {
    r: usize,
    window: (i32, i32),
    nodes: Vec<QuiverNode>,
    index: HashMap<QuiverNode, usize>,
    cols: usize,
    data: Vec<i32>,
}

fn kron(a: i32, b: i32) -> i32 {
    (a == b) as i32
}

/// `P[a,j; b,l] = delta_ab (delta_{l,j+1} + delta_{l,j-1})`.
pub fn p_entry(a: i32, j: i32, b: i32, l: i32) -> i32 {
    kron(a, b) * (kron(l, j + 1) + kron(l, j - 1))
}

/// `A[a,j; b,l] = I_ab delta_jl` with `I` the A_r incidence matrix.
pub fn a_entry(a: i32, j: i32, b: i32, l: i32) -> i32 {
    (kron(a, b + 1) + kron(a, b - 1)) * kron(j, l)
}

pub fn build_btilde(r: usize, window: (i32, i32), with_coefficients: bool) -> Result<ExchangeMatrix> {
    let (lo, hi) = window;
    if lo > hi || r == 0 {
        return Err(Error::EmptyWindow(lo, hi));
    }
    let r_i = r as i32;
    let mut nodes = Vec::new();
    for alpha in 1..=r_i {
        nodes.extend((lo..=hi).map(|j| QuiverNode::Unbarred { alpha, j }));
    }
    for alpha in 1..=r_i {
        nodes.extend((lo..=hi).map(|j| QuiverNode::Barred { alpha, j }));
    }
    let cols = nodes.len();
    if with_coefficients {
        nodes.extend((1..=r_i).map(|alpha| QuiverNode::Coefficient { alpha }));
    }
    let index = nodes.iter().enumerate().map(|(i, &n)| (n, i)).collect();
    let mut m = ExchangeMatrix { r, window, nodes, index, cols, data: vec![0; 0] };
    m.data = vec![0; m.nodes.len() * cols];
    for row in 0..m.nodes.len() {
        for col in 0..cols {
            m.data[row * cols + col] = fundamental_entry(m.nodes[row], m.nodes[col]);
        }
    }
    Ok(m)
}

fn fundamental_entry(row: QuiverNode, col: QuiverNode) -> i32 {
    use QuiverNode::*;
    match (row, col) {
        (Unbarred { alpha, j }, Barred { alpha: b, j: l }) => a_entry(alpha, j, b, l) - p_entry(alpha, j, b, l),
        (Barred { alpha: b, j: l }, Unbarred { alpha, j }) => p_entry(alpha, j, b, l) - a_entry(alpha, j, b, l),
        (Coefficient { alpha }, Unbarred { alpha: b, .. }) => -kron(alpha, b),
        (Coefficient { alpha }, Barred { alpha: b, .. }) => kron(alpha, b),
        _ => 0,
    }
}

impl ExchangeMatrix {
    pub fn r(&self) -> usize {
        self.r
    }

    pub fn window(&self) -> (i32, i32) {
        self.window
    }

    pub fn nodes(&self) -> &[QuiverNode] {
        &self.nodes
    }

    pub fn mutable_nodes(&self) -> &[QuiverNode] {
        &self.nodes[..self.cols]
    }

    pub fn has_coefficients(&self) -> bool {
        self.nodes.len() > self.cols
    }

    pub fn contains(&self, n: QuiverNode) -> bool {
        self.index.contains_key(&n)
    }

    /// `B[row, col]`, or `None` if either index is not in the matrix.
    pub fn get(&self, row: QuiverNode, col: QuiverNode) -> Option<i32> {
        let (i, k) = (*self.index.get(&row)?, *self.index.get(&col)?);
        (k < self.cols).then(|| self.data[i * self.cols + k])
    }

    fn at(&self, i: usize, k: usize) -> i32 {
        self.data[i * self.cols + k]
    }

    pub fn is_skew(&self) -> bool {
        (0..self.cols).all(|i| (0..self.cols).all(|k| self.at(i, k) == -self.at(k, i)))
    }

    pub fn negated(&self) -> ExchangeMatrix {
        let mut out = self.clone();
        out.data.iter_mut().for_each(|x| *x = -*x);
        out
    }

    /// Column `col` as `(row node, entry)` over nonzero entries.
    pub fn column(&self, col: QuiverNode) -> Result<Vec<(QuiverNode, i32)>> {
        let k = self.mutable_index(col)?;
        Ok((0..self.nodes.len()).filter(|&i| self.at(i, k) != 0).map(|i| (self.nodes[i], self.at(i, k))).collect())
    }

    fn mutable_index(&self, node: QuiverNode) -> Result<usize> {
        if node.is_coefficient() {
            return Err(Error::CoefficientMutation);
        }
        match self.index.get(&node) {
            Some(&k) if k < self.cols => Ok(k),
            _ => Err(Error::InvalidIndex(format!("node {node} outside the window"))),
        }
    }

    /// Matrix mutation at a mutable node.
    pub fn mutate(&self, node: QuiverNode) -> Result<ExchangeMatrix> {
        let m = self.mutable_index(node)?;
        let mut out = self.clone();
        for i in 0..self.nodes.len() {
            for k in 0..self.cols {
                let v = if i == m || k == m {
                    -self.at(i, k)
                } else {
                    let (bim, bmk) = (self.at(i, m), self.at(m, k));
                    self.at(i, k) + bim.signum() * (bim * bmk).max(0)
                };
                out.data[i * self.cols + k] = v;
            }
        }
        Ok(out)
    }

    /// Nodes whose j lies at least `MARGIN` away from the window edges, plus coefficients.
    pub fn interior(&self) -> Vec<QuiverNode> {
        let (lo, hi) = self.window;
        self.nodes.iter().copied().filter(|n| n.j().is_none_or(|j| j >= lo + MARGIN && j <= hi - MARGIN)).collect()
    }
}

impl fmt::Display for ExchangeMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, n) in self.nodes.iter().enumerate() {
            let row: Vec<String> = (0..self.cols).filter(|&k| self.at(i, k) != 0).map(|k| format!("{}:{}", self.nodes[k], self.at(i, k))).collect();
            writeln!(f, "{n} -> {}", row.join(" "))?;
        }
        Ok(())
    }
}

/// Cluster variables attached to the nodes of an exchange matrix.
#[derive(Debug, Clone)]
pub struct ClusterSeed<V: Ring> {
    pub matrix: ExchangeMatrix,
    pub vars: HashMap<QuiverNode, V>,
}

impl<V: Ring> ClusterSeed<V> {
    /// The fundamental seed read off a lattice, with every coefficient set to `q`.
    pub fn fundamental(st: &LatticeState<V>, window: (i32, i32), q: Option<V>) -> Result<Self> {
        let matrix = build_btilde(st.r(), window, q.is_some())?;
        let mut vars = HashMap::new();
        for &n in matrix.nodes() {
            let v = match (n.j(), n.level()) {
                (Some(j), Some(l)) => st.evolve(n.alpha(), j, l)?,
                _ => q.clone().unwrap_or_else(V::one),
            };
            vars.insert(n, v);
        }
        Ok(ClusterSeed { matrix, vars })
    }

    /// The exchanged variable at `node`.
    pub fn exchange(&self, node: QuiverNode) -> Result<V> {
        let mut plus = V::one();
        let mut minus = V::one();
        for (n, b) in self.matrix.column(node)? {
            let x = self.vars.get(&n).ok_or_else(|| Error::InvalidIndex(format!("no variable at {n}")))?;
            for _ in 0..b.unsigned_abs() {
                if b > 0 {
                    plus = plus.mul(x);
                } else {
                    minus = minus.mul(x);
                }
            }
        }
        plus.add(&minus).exact_div(&self.vars[&node])
    }

    pub fn mutate(&self, node: QuiverNode) -> Result<Self> {
        let x = self.exchange(node)?;
        let mut vars = self.vars.clone();
        vars.insert(node, x);
        Ok(ClusterSeed { matrix: self.matrix.mutate(node)?, vars })
    }

    /// Mutates every unbarred (or every barred) node in turn.
    pub fn compound(&self, barred: bool) -> Result<Self> {
        let targets: Vec<QuiverNode> =
            self.matrix.mutable_nodes().iter().copied().filter(|n| matches!(n, QuiverNode::Barred { .. }) == barred).collect();
        let mut s = self.clone();
        for n in targets {
            s = s.mutate(n)?;
        }
        Ok(s)
    }
}

/// Compound mutation over all unbarred (or barred) nodes, compared with `-B` on the interior.
pub fn compound_mutation_check(r: usize, window: (i32, i32), with_coefficients: bool, barred: bool) -> Result<Check> {
    let b = build_btilde(r, window, with_coefficients)?;
    let mut mu = b.clone();
    for &n in b.mutable_nodes() {
        if matches!(n, QuiverNode::Barred { .. }) == barred {
            mu = mu.mutate(n)?;
        }
    }
    let inner = b.interior();
    let mut bad = Vec::new();
    for &row in &inner {
        for &col in inner.iter().filter(|n| !n.is_coefficient()) {
            let (x, y) = (mu.get(row, col).unwrap_or(0), b.get(row, col).unwrap_or(0));
            if x != -y {
                bad.push(format!("{row};{col}: {x} vs {}", -y));
            }
        }
    }
    let name = if barred { "barred compound mutation flips B" } else { "compound mutation flips B" };
    let params = format!("r={r} window=[{},{}] coefficients={with_coefficients}", window.0, window.1);
    Ok(if bad.is_empty() { Check::pass(name, params) } else { Check::fail(name, params, bad.join(", ")) })
}

/// `[P, A] = 0` and `sum_l P[a,j; b,l] = 2 delta_ab` for interior `j`.
pub fn check_p_a(r: usize, window: (i32, i32)) -> Vec<Check> {
    let (lo, hi) = window;
    let r_i = r as i32;
    let params = format!("r={r} window=[{lo},{hi}]");
    let mut comm = Vec::new();
    let mut sums = Vec::new();
    for a in 1..=r_i {
        for j in lo + MARGIN..=hi - MARGIN {
            for c in 1..=r_i {
                for k in lo + MARGIN..=hi - MARGIN {
                    let mut pa = 0;
                    let mut ap = 0;
                    for b in 1..=r_i {
                        for l in lo..=hi {
                            pa += p_entry(a, j, b, l) * a_entry(b, l, c, k);
                            ap += a_entry(a, j, b, l) * p_entry(b, l, c, k);
                        }
                    }
                    if pa != ap {
                        comm.push(format!("({a},{j};{c},{k})"));
                    }
                }
            }
            for b in 1..=r_i {
                let s: i32 = (lo..=hi).map(|l| p_entry(a, j, b, l)).sum();
                if s != 2 * kron(a, b) {
                    sums.push(format!("({a},{j};{b})={s}"));
                }
            }
        }
    }
    let mk = |name: &str, bad: Vec<String>| {
        if bad.is_empty() {
            Check::pass(name, params.clone())
        } else {
            Check::fail(name, params.clone(), bad.join(" "))
        }
    };
    vec![mk("[P,A] = 0", comm), mk("sum_l P = 2 delta", sums)]
}

/// Alternating compound mutations compared with lattice evolution at levels `2..=levels+1`.
///
/// Each step shrinks the region where the finite window matches the lattice by one.
pub fn check_exchange_evolution<V: Ring>(st: &LatticeState<V>, window: (i32, i32), levels: i32, q: Option<V>) -> Result<Vec<Check>> {
    let mut seed = ClusterSeed::fundamental(st, window, q)?;
    let mut out = Vec::new();
    for step in 0..levels {
        let barred = step % 2 == 1;
        seed = seed.compound(barred)?;
        let level = step + 2;
        let (lo, hi) = (window.0 + step + 1, window.1 - step - 1);
        for alpha in 1..=st.r() as i32 {
            for j in lo..=hi {
                let node = if barred { QuiverNode::Barred { alpha, j } } else { QuiverNode::Unbarred { alpha, j } };
                let want = st.evolve(alpha, j, level)?;
                out.push(Check::equal("exchange = evolution", format!("alpha={alpha} j={j} k={level}"), &seed.vars[&node], &want));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::SeedSpec;
    use crate::laurent::LaurentPoly;

    fn ub(alpha: i32, j: i32) -> QuiverNode {
        QuiverNode::Unbarred { alpha, j }
    }

    fn br(alpha: i32, j: i32) -> QuiverNode {
        QuiverNode::Barred { alpha, j }
    }

    #[test]
    fn fundamental_entries() {
        let b = build_btilde(1, (-1, 1), false).unwrap();
        assert_eq!(b.get(ub(1, 0), br(1, 1)), Some(-1));
        assert_eq!(b.get(ub(1, 0), br(1, 0)), Some(0));
        assert_eq!(b.get(br(1, 1), ub(1, 0)), Some(1));
        assert!(b.is_skew());
        let b2 = build_btilde(2, (-2, 2), true).unwrap();
        assert_eq!(b2.get(ub(1, 0), br(2, 0)), Some(1));
        assert_eq!(b2.get(QuiverNode::Coefficient { alpha: 2 }, ub(2, 1)), Some(-1));
        assert_eq!(b2.get(QuiverNode::Coefficient { alpha: 2 }, br(2, 1)), Some(1));
        assert_eq!(b2.get(ub(1, 0), QuiverNode::Coefficient { alpha: 1 }), None);
        assert!(b2.is_skew());
        assert!(build_btilde(2, (1, 0), false).is_err());
    }

    #[test]
    fn mutation_is_involutive_and_local_commutes() {
        let b = build_btilde(2, (-3, 3), true).unwrap();
        for n in [ub(1, 0), br(2, -1), ub(2, 3)] {
            assert_eq!(b.mutate(n).unwrap().mutate(n).unwrap(), b);
        }
        let (x, y) = (ub(1, 0), br(2, 2));
        assert_eq!(b.get(x, y), Some(0));
        assert_eq!(b.mutate(x).unwrap().mutate(y).unwrap(), b.mutate(y).unwrap().mutate(x).unwrap());
        assert!(matches!(b.mutate(QuiverNode::Coefficient { alpha: 1 }), Err(Error::CoefficientMutation)));
        assert!(b.mutate(ub(1, 9)).is_err());
    }

    #[test]
    fn compound_flips_sign() {
        assert!(compound_mutation_check(1, (-4, 4), false, false).unwrap().ok);
        for r in 1..=3 {
            for coef in [false, true] {
                for barred in [false, true] {
                    let c = compound_mutation_check(r, (-5, 5), coef, barred).unwrap();
                    assert!(c.ok, "{c}");
                }
            }
        }
    }

    #[test]
    fn p_and_a() {
        for r in 1..=3 {
            assert!(check_p_a(r, (-5, 5)).iter().all(|c| c.ok));
        }
    }

    #[test]
    fn exchange_is_the_t_system_step() {
        let st = LatticeState::symbolic(SeedSpec::fundamental(2, (-8, 8)).unwrap());
        let seed = ClusterSeed::fundamental(&st, (-3, 3), None).unwrap();
        assert_eq!(seed.exchange(ub(1, 0)).unwrap(), st.evolve(1, 0, 2).unwrap());
        assert_eq!(seed.exchange(br(2, 1)).unwrap(), st.evolve(2, 1, -1).unwrap());
        let checks = check_exchange_evolution(&st, (-4, 4), 3, None).unwrap();
        assert!(checks.iter().all(|c| c.ok));
    }

    #[test]
    fn coefficient_minus_one_is_the_twisted_system() {
        let spec = SeedSpec::fundamental(2, (-8, 8)).unwrap();
        let st = LatticeState::symbolic(spec).twisted(true);
        let q = LaurentPoly::from_int(-1);
        let seed = ClusterSeed::fundamental(&st, (-3, 3), Some(q)).unwrap();
        assert_eq!(seed.exchange(ub(2, 0)).unwrap(), st.evolve(2, 0, 2).unwrap());
    }
}
