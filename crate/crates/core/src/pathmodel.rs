//! Paths with time-dependent weights on the rooted graphs `Γ_M`.
//!
//! A step leaves `(v, t)` and lands at `(w, t + shift)`. Steps away from the
//! root have weight 1. Skeleton steps towards the root carry `y_label(t)`.
//! A long step `b -> a` (possible only inside a descending piece of `M`)
//! carries a product of skeleton weights and their inverses and moves time
//! by `2 - (b - a)`, so it goes back in time when `b - a > 2`.

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::hardparticle::{partition_z, partition_z_prime};
use crate::lattice::{LatticeState, MotzkinPath, SeedSpec};
use crate::laurent::Ring;
use crate::report::Check;
use crate::weights::{y, TRatio};
use crate::wronskian::PolyMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Vertex {
    Spine(i32),
    Pendant(i32),
}

impl Vertex {
    pub fn height(self) -> i32 {
        match self {
            Vertex::Spine(v) | Vertex::Pendant(v) => v,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeWeight {
    One,
    Skeleton(i32),
    Long { from: i32, to: i32 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub src: Vertex,
    pub dst: Vertex,
    pub shift: i32,
    pub weight: EdgeWeight,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathGraph {
    r: usize,
    top: i32,
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    /// Label of the spine edge `c -- c+1`, keyed by `c`.
    spine_labels: BTreeMap<i32, i32>,
    /// Label of the pendant edge at `c`.
    pendant_labels: BTreeMap<i32, i32>,
    out: HashMap<Vertex, Vec<usize>>,
    max_drop: i32,
}

impl PathGraph {
    fn assemble(r: usize, top: i32, spine: Vec<(i32, i32)>, pendants: Vec<i32>, longs: Vec<(i32, i32)>) -> Result<Self> {
        let mut keyed: Vec<((i32, i32), Vertex, Vertex)> = Vec::new();
        for &(lo, hi) in &spine {
            keyed.push(((lo, 1), Vertex::Spine(hi), Vertex::Spine(lo)));
        }
        for &p in &pendants {
            keyed.push(((p, 0), Vertex::Pendant(p), Vertex::Spine(p)));
        }
        keyed.sort();
        if keyed.len() != 2 * r + 1 {
            return Err(Error::InvalidEdges(format!("{} skeleton edges for rank {r}", keyed.len())));
        }
        let mut edges = Vec::new();
        let mut spine_labels = BTreeMap::new();
        let mut pendant_labels = BTreeMap::new();
        for (i, &(_, hi, lo)) in keyed.iter().enumerate() {
            let label = i as i32 + 1;
            edges.push(Edge { src: lo, dst: hi, shift: 1, weight: EdgeWeight::One });
            edges.push(Edge { src: hi, dst: lo, shift: 1, weight: EdgeWeight::Skeleton(label) });
            match hi {
                Vertex::Spine(h) => spine_labels.insert(h - 1, label),
                Vertex::Pendant(p) => pendant_labels.insert(p, label),
            };
        }
        let mut max_drop = 1;
        for &(b, a) in &longs {
            if b - a < 2 || (a + 1..b).any(|c| !pendant_labels.contains_key(&c)) {
                return Err(Error::InvalidEdges(format!("long edge {b} -> {a}")));
            }
            max_drop = max_drop.max(b - a);
            edges.push(Edge {
                src: Vertex::Spine(b),
                dst: Vertex::Spine(a),
                shift: 2 - (b - a),
                weight: EdgeWeight::Long { from: b, to: a },
            });
        }
        let mut vertices: Vec<Vertex> = (0..=top).map(Vertex::Spine).collect();
        vertices.extend(pendants.iter().map(|&p| Vertex::Pendant(p)));
        vertices.sort();
        let mut out: HashMap<Vertex, Vec<usize>> = HashMap::new();
        for (i, e) in edges.iter().enumerate() {
            out.entry(e.src).or_default().push(i);
        }
        Ok(PathGraph { r, top, vertices, edges, spine_labels, pendant_labels, out, max_drop })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn top(&self) -> i32 {
        self.top
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn long_edges(&self) -> impl Iterator<Item = (i32, i32)> + '_ {
        self.edges.iter().filter_map(|e| match e.weight {
            EdgeWeight::Long { from, to } => Some((from, to)),
            _ => None,
        })
    }

    pub fn skeleton_count(&self) -> usize {
        self.edges.iter().filter(|e| matches!(e.weight, EdgeWeight::Skeleton(_))).count()
    }

    /// Label of the spine step `c+1 -> c`.
    pub fn spine_label(&self, c: i32) -> Option<i32> {
        self.spine_labels.get(&c).copied()
    }

    pub fn pendant_label(&self, c: i32) -> Option<i32> {
        self.pendant_labels.get(&c).copied()
    }

    pub fn has_long(&self, b: i32, a: i32) -> bool {
        self.long_edges().any(|e| e == (b, a))
    }

    /// Monotone potential: strictly increases along every edge.
    fn potential(&self, v: Vertex, t: i32) -> i64 {
        let k = self.max_drop as i64;
        k * t as i64 - (k - 1) * v.height() as i64
    }
}

/// The graph for the fundamental seed: spine `0..=r+1`, pendants at `2..=r+1`.
pub fn build_gtilde(r: usize) -> Result<PathGraph> {
    let r1 = r as i32 + 1;
    let spine = (0..r1).map(|c| (c, c + 1)).collect();
    PathGraph::assemble(r, r1, spine, (2..=r1).collect(), Vec::new())
}

/// Maximal runs of equal steps `(step, entries)`; neighbouring runs share one entry.
pub fn pieces(m: &MotzkinPath) -> Vec<(i32, i32)> {
    let v = m.as_slice();
    if v.len() == 1 {
        return vec![(0, 1)];
    }
    let mut out = Vec::new();
    let mut i = 0;
    while i + 1 < v.len() {
        let step = v[i + 1] - v[i];
        let mut j = i + 1;
        while j + 1 < v.len() && v[j + 1] - v[j] == step {
            j += 1;
        }
        out.push((step, (j - i + 1) as i32));
        i = j;
    }
    out
}

/// The graph `Γ_M`, glued from one block per piece of `M`.
pub fn build_gamma(m: &MotzkinPath) -> Result<PathGraph> {
    let mut spine = BTreeSet::from([(0, 1)]);
    let mut pendants = BTreeSet::new();
    let mut longs = Vec::new();
    let mut top = 1;
    for (n, (step, len)) in pieces(m).into_iter().enumerate() {
        // The first two vertices of each later block are the top two of the previous one.
        let off = if n == 0 { 0 } else { top - 2 };
        let span = if step == 1 { 2 * len } else { len + 1 };
        spine.extend((off + 1..off + span).map(|v| (v, v + 1)));
        if step != 1 {
            pendants.extend(off + 2..=off + len);
        }
        if step == -1 {
            for b in 1..=len + 1 {
                for a in 1..b - 1 {
                    longs.push((off + b, off + a));
                }
            }
        }
        top = off + span;
    }
    pendants.insert(top);
    PathGraph::assemble(m.r(), top, spine.into_iter().collect(), pendants.into_iter().collect(), longs)
}

/// Skeleton weights `y_label(t)`.
pub trait SkeletonWeights<V: Ring> {
    fn weight(&self, label: i32, t: i32) -> Result<V>;
}

/// The weights of a lattice at level `k`.
pub struct LevelWeights<'a, V: Ring> {
    pub state: &'a LatticeState<V>,
    pub k: i32,
}

impl<V: Ring> SkeletonWeights<V> for LevelWeights<'_, V> {
    fn weight(&self, label: i32, t: i32) -> Result<V> {
        y(self.state, label, t, self.k)
    }
}

/// Closed-form weights of `Γ_M` on a lattice seeded at `M` (or any lattice reaching those points).
pub struct MotzkinWeights<'a, V: Ring> {
    pub state: &'a LatticeState<V>,
    pub motzkin: MotzkinPath,
}

impl<V: Ring> SkeletonWeights<V> for MotzkinWeights<'_, V> {
    fn weight(&self, label: i32, t: i32) -> Result<V> {
        motzkin_weight_ratio(&self.motzkin, label, t)?.eval(self.state)
    }
}

/// Numeric weights stored per label and time.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightTable {
    pub lo: i32,
    pub hi: i32,
    values: BTreeMap<i32, Vec<BigRational>>,
}

impl WeightTable {
    pub fn from_fn(labels: i32, lo: i32, hi: i32, mut f: impl FnMut(i32, i32) -> Result<BigRational>) -> Result<Self> {
        let mut values = BTreeMap::new();
        for b in 1..=labels {
            values.insert(b, (lo..=hi).map(|t| f(b, t)).collect::<Result<Vec<_>>>()?);
        }
        Ok(WeightTable { lo, hi, values })
    }

    pub fn get(&self, label: i32, t: i32) -> Result<BigRational> {
        if t < self.lo || t > self.hi {
            return Err(Error::TimeWindowExceeded(t as i64));
        }
        self.values
            .get(&label)
            .map(|v| v[(t - self.lo) as usize].clone())
            .ok_or_else(|| Error::InvalidIndex(format!("weight label {label}")))
    }

    pub fn labels(&self) -> i32 {
        self.values.len() as i32
    }
}

impl SkeletonWeights<BigRational> for WeightTable {
    fn weight(&self, label: i32, t: i32) -> Result<BigRational> {
        self.get(label, t)
    }
}

/// `lambda_{a,t,l} = T[a,t,l+1] / T[a,t+1,l]`, trivial on the boundary rows.
fn lambda(r: i32, a: i32, t: i32, l: i32) -> TRatio {
    if a <= 0 || a > r {
        return TRatio::one();
    }
    TRatio::t(a, t, l + 1).div(&TRatio::t(a, t + 1, l))
}

/// `mu_{a,t,l} = T[a,t,l] / T[a-1,t+1,l]`.
fn mu(a: i32, t: i32, l: i32) -> TRatio {
    TRatio::t(a, t, l).div(&TRatio::t(a - 1, t + 1, l))
}

/// Skeleton weight `y_label(t)` of `Γ_M` as a ratio of lattice points.
pub fn motzkin_weight_ratio(m: &MotzkinPath, label: i32, t: i32) -> Result<TRatio> {
    let r = m.r() as i32;
    if label < 1 || label > 2 * r + 1 {
        return Err(Error::InvalidIndex(format!("weight label {label} outside 1..={}", 2 * r + 1)));
    }
    let mm = |a: i32| m.m(a);
    // Offsets accumulate over the descending steps only.
    let mut d = vec![0; r as usize + 2];
    for a in 2..=r {
        d[a as usize] = d[a as usize - 1] + (mm(a) - mm(a - 1)).min(0);
    }
    let dd = |a: i32| d[a as usize];
    let out = if label % 2 == 1 {
        let al = (label + 1) / 2;
        if al == 1 {
            lambda(r, 1, t, mm(1))
        } else {
            let num = if al <= r {
                let asc = (mm(al) == mm(al - 1) + 1) as i32;
                lambda(r, al, t + dd(al) - 1 + asc, mm(al))
            } else {
                TRatio::one()
            };
            num.div(&lambda(r, al - 1, t + dd(al - 1), mm(al - 1)))
        }
    } else {
        let al = label / 2;
        let s = t + dd(al);
        let mut v = mu(al + 1, s, mm(al) + 1).div(&mu(al, s, mm(al)));
        if al < r && mm(al) == mm(al + 1) + 1 {
            v = v.mul(&lambda(r, al + 1, t + dd(al + 1), mm(al + 1)).div(&lambda(r, al + 1, s, mm(al))));
        }
        if al > 1 && mm(al) == mm(al - 1) - 1 {
            v = v.mul(&lambda(r, al - 1, s, mm(al)).div(&lambda(r, al - 1, t + dd(al - 1), mm(al - 1))));
        }
        v
    };
    Ok(out.reduced(m.r()))
}

/// Shortest sequence of single-row moves `m_a -> m_a + 1` from the zero path to `target`.
pub fn mutation_sequence(target: &MotzkinPath) -> Option<Vec<i32>> {
    let r = target.r();
    let cap = *target.as_slice().iter().max()?;
    if target.as_slice().iter().any(|&x| x < 0) {
        return None;
    }
    let start = MotzkinPath::zero(r);
    let mut prev: HashMap<MotzkinPath, Option<(MotzkinPath, i32)>> = HashMap::new();
    prev.insert(start.clone(), None);
    let mut queue = VecDeque::from([start]);
    while let Some(cur) = queue.pop_front() {
        if &cur == target {
            let mut seq = Vec::new();
            let mut at = cur;
            while let Some(Some((p, a))) = prev.get(&at).cloned() {
                seq.push(a);
                at = p;
            }
            seq.reverse();
            return Some(seq);
        }
        for a in 1..=r as i32 {
            if mutation_case(&cur, a).is_some() {
                let mut next = cur.as_slice().to_vec();
                next[a as usize - 1] += 1;
                if next[a as usize - 1] > cap {
                    continue;
                }
                let next = MotzkinPath::new(next).ok()?;
                if !prev.contains_key(&next) {
                    prev.insert(next.clone(), Some((cur.clone(), a)));
                    queue.push_back(next);
                }
            }
        }
    }
    None
}

/// `Some(true)` when raising row `a` moves the neighbour row too (case ii), `None` when not allowed.
fn mutation_case(m: &MotzkinPath, a: i32) -> Option<bool> {
    let r = m.r() as i32;
    if a > 1 && m.m(a - 1) != m.m(a) {
        return None;
    }
    if a == r || m.m(a + 1) == m.m(a) + 1 {
        Some(false)
    } else if m.m(a + 1) == m.m(a) {
        Some(true)
    } else {
        None
    }
}

/// One weight update for raising row `a` of `m`; the result lives on `[lo+1, hi-1]`.
pub fn mutate_weights(w: &WeightTable, m: &MotzkinPath, a: i32) -> Result<WeightTable> {
    let case_two = mutation_case(m, a).ok_or_else(|| Error::InvalidIndex(format!("row {a} of {:?} cannot move", m.as_slice())))?;
    let labels = w.labels();
    let (lo, hi) = (w.lo + 1, w.hi - 1);
    let lower = |t: i32| if a == 1 { w.get(1, t - 1) } else { w.get(2 * a - 1, t) };
    let sum = |t: i32| -> Result<BigRational> { Ok(lower(t)? + w.get(2 * a, t)?) };
    WeightTable::from_fn(labels, lo, hi, |b, t| {
        if b == 2 * a - 1 {
            sum(t)
        } else if b == 2 * a {
            Ok(w.get(2 * a + 1, t)? * w.get(2 * a, t + 1)? / sum(t + 1)?)
        } else if b == 2 * a + 1 {
            Ok(w.get(2 * a + 1, t - 1)? * lower(t)? / sum(t)?)
        } else if case_two && b == 2 * a + 2 {
            Ok(w.get(2 * a + 2, t - 1)? * lower(t)? / sum(t)?)
        } else if case_two && b > 2 * a + 2 {
            w.get(b, t - 1)
        } else {
            w.get(b, t)
        }
    })
}

/// `Γ_M` weights obtained by applying the weight updates along a mutation sequence, on `[lo, hi]`.
pub fn recursion_weights(st: &LatticeState<BigRational>, target: &MotzkinPath, lo: i32, hi: i32) -> Result<WeightTable> {
    if !st.motzkin().is_zero() {
        return Err(Error::Unsupported("weight recursion starts from the fundamental seed".into()));
    }
    let seq = mutation_sequence(target)
        .ok_or_else(|| Error::Unsupported(format!("{:?} is not reachable from the zero path", target.as_slice())))?;
    let pad = seq.len() as i32 + 1;
    let labels = 2 * st.r() as i32 + 1;
    let mut w = WeightTable::from_fn(labels, lo - pad, hi + pad, |b, t| y(st, b, t, 0))?;
    let mut m = MotzkinPath::zero(st.r());
    for a in seq {
        w = mutate_weights(&w, &m, a)?;
        let mut next = m.as_slice().to_vec();
        next[a as usize - 1] += 1;
        m = MotzkinPath::new(next)?;
    }
    Ok(w)
}

/// A graph with weights, memoizing edge weights.
pub struct PathModel<'g, V: Ring, W: SkeletonWeights<V>> {
    graph: &'g PathGraph,
    weights: W,
    cache: RefCell<HashMap<(i32, i32), V>>,
    long_cache: RefCell<HashMap<(i32, i32, i32), V>>,
}

impl<'g, V: Ring, W: SkeletonWeights<V>> PathModel<'g, V, W> {
    pub fn new(graph: &'g PathGraph, weights: W) -> Self {
        PathModel { graph, weights, cache: RefCell::new(HashMap::new()), long_cache: RefCell::new(HashMap::new()) }
    }

    pub fn graph(&self) -> &PathGraph {
        self.graph
    }

    pub fn skeleton(&self, label: i32, t: i32) -> Result<V> {
        if let Some(v) = self.cache.borrow().get(&(label, t)) {
            return Ok(v.clone());
        }
        let v = self.weights.weight(label, t)?;
        self.cache.borrow_mut().insert((label, t), v.clone());
        Ok(v)
    }

    fn spine_down(&self, c: i32, t: i32) -> Result<V> {
        let label = self.graph.spine_label(c).ok_or_else(|| Error::InvalidEdges(format!("no spine edge {} -> {c}", c + 1)))?;
        self.skeleton(label, t)
    }

    fn pendant_down(&self, c: i32, t: i32) -> Result<V> {
        let label = self.graph.pendant_label(c).ok_or_else(|| Error::InvalidEdges(format!("no pendant at {c}")))?;
        self.skeleton(label, t)
    }

    /// Weight of the descending step `b -> a` taken at time `t`: a skeleton step when `b = a+1`.
    pub fn descent(&self, b: i32, a: i32, t: i32) -> Result<V> {
        if b == a + 1 {
            return self.spine_down(a, t);
        }
        if !self.graph.has_long(b, a) {
            return Err(Error::InvalidEdges(format!("no edge {b} -> {a}")));
        }
        if let Some(v) = self.long_cache.borrow().get(&(b, a, t)) {
            return Ok(v.clone());
        }
        let mut num = V::one();
        let mut den = V::one();
        let mut tt = t;
        for c in (a + 1..b).rev() {
            num = num.mul(&self.spine_down(c, tt)?);
            den = den.mul(&self.pendant_down(c, tt)?);
            tt -= 1;
        }
        num = num.mul(&self.spine_down(a, tt)?);
        let v = num.exact_div(&den)?;
        self.long_cache.borrow_mut().insert((b, a, t), v.clone());
        Ok(v)
    }

    /// Weight of edge `e` taken from time `t`.
    pub fn edge_weight(&self, e: &Edge, t: i32) -> Result<V> {
        match e.weight {
            EdgeWeight::One => Ok(V::one()),
            EdgeWeight::Skeleton(l) => self.skeleton(l, t),
            EdgeWeight::Long { from, to } => self.descent(from, to, t),
        }
    }

    /// Sum over paths from `(a, t1)` to `(b, t2)` of the product of step weights.
    pub fn partition(&self, t1: i32, t2: i32, a: Vertex, b: Vertex) -> Result<V> {
        if t2 < t1 {
            return Ok(V::zero());
        }
        let g = self.graph;
        let end = g.potential(b, t2);
        let mut frontier: BTreeMap<(i64, Vertex, i32), V> = BTreeMap::new();
        frontier.insert((g.potential(a, t1), a, t1), V::one());
        let mut total = V::zero();
        while let Some(((_, v, t), w)) = frontier.pop_first() {
            if v == b && t == t2 {
                total = total.add(&w);
                continue;
            }
            for &i in g.out.get(&v).map(|x| x.as_slice()).unwrap_or(&[]) {
                let e = &g.edges[i];
                let nt = t + e.shift;
                let phi = g.potential(e.dst, nt);
                if phi > end {
                    continue;
                }
                let step = w.mul(&self.edge_weight(e, t)?);
                let slot = frontier.entry((phi, e.dst, nt)).or_insert_with(V::zero);
                *slot = slot.add(&step);
            }
        }
        Ok(total)
    }

    /// `Z^{0,0}_{t1,t2}`.
    pub fn root_partition(&self, t1: i32, t2: i32) -> Result<V> {
        self.partition(t1, t2, Vertex::Spine(0), Vertex::Spine(0))
    }
}

/// `T[1,j+k,m_1] * Z^{0,0}_{j-k,j+k}`, which should equal `T[1,j,k+m_1]`.
pub fn t1_via_paths<V: Ring, W: SkeletonWeights<V>>(
    st: &LatticeState<V>,
    model: &PathModel<'_, V, W>,
    j: i32,
    k: i32,
    m1: i32,
) -> Result<V> {
    Ok(st.evolve(1, j + k, m1)?.mul(&model.root_partition(j - k, j + k)?))
}

/// `det_{a,b} T[1, j+k+2b-alpha-1, m_1] Z^{0,0}_{j-k+alpha+1-2a, j+k+2b-alpha-1}`.
pub fn lgv_determinant<V: Ring, W: SkeletonWeights<V>>(
    st: &LatticeState<V>,
    model: &PathModel<'_, V, W>,
    alpha: i32,
    j: i32,
    k: i32,
    m1: i32,
) -> Result<V> {
    if alpha == 0 {
        return Ok(V::one());
    }
    let n = alpha as usize;
    PolyMatrix::from_fn(n, n, |a, b| {
        let (a, b) = (a as i32 + 1, b as i32 + 1);
        let e = j + k + 2 * b - alpha - 1;
        Ok(st.evolve(1, e, m1)?.mul(&model.root_partition(j - k + alpha + 1 - 2 * a, e)?))
    })?
    .det()
}

/// `T[alpha,j,k]` on a fundamental lattice from non-intersecting paths.
///
/// The determinant needs `k >= alpha - 1`. For smaller positive `k` the rows
/// below `alpha - k + 1` never enter and are dropped; for `k <= 0` the two
/// seed levels are exchanged.
pub fn t_alpha_via_lgv<V: Ring>(st: &LatticeState<V>, alpha: i32, j: i32, k: i32) -> Result<V> {
    let r = st.r() as i32;
    if !st.motzkin().is_zero() {
        return Err(Error::Unsupported("t_alpha_via_lgv expects the fundamental seed".into()));
    }
    if alpha < 0 || alpha > r + 1 {
        return Err(Error::InvalidIndex(format!("alpha = {alpha} outside 0..={}", r + 1)));
    }
    if alpha == 0 || alpha == r + 1 {
        return Ok(V::one());
    }
    if k <= 0 {
        return t_alpha_via_lgv(&st.swapped_levels(), alpha, j, 1 - k);
    }
    if k < alpha - 1 {
        let sub = st.upper_rows(alpha - k + 1)?;
        return t_alpha_via_lgv(&sub, k, j, k);
    }
    let g = build_gtilde(st.r())?;
    let model = PathModel::new(&g, LevelWeights { state: st, k: 0 });
    lgv_determinant(st, &model, alpha, j, k, 0)
}

/// The two cancellation identities between hard particles and root-to-root paths at `k = 0`.
pub fn check_involution_identities<V: Ring>(st: &LatticeState<V>, j: i32, k: i32) -> Result<Vec<Check>> {
    let r = st.r() as i32;
    let g = build_gtilde(st.r())?;
    let model = PathModel::new(&g, LevelWeights { state: st, k: 0 });
    let sign = |e: i32| if e % 2 == 0 { V::one() } else { V::one().neg() };
    let mut out = Vec::new();
    let mut acc = V::zero();
    for m in 0..=r + 1 {
        let z = partition_z(st, r, m, j, 0)?;
        let p = model.root_partition(j - 2 * (r + 1 - m), j + 2 * k)?;
        acc = acc.add(&sign(r + 1 - m).mul(&z).mul(&p));
    }
    out.push(Check::residual("path cancellation", format!("r={r} j={j} k={k}"), &acc));
    for i in 1..r {
        let mut acc = V::zero();
        for m in 0..=r + 1 - i {
            let z = partition_z(st, r, m, j, 0)?;
            let p = model.root_partition(j - 2 * (r + 1 - m), j - 2 * i)?;
            acc = acc.add(&sign(r + 1 - m).mul(&z).mul(&p));
        }
        let rhs = sign(i).mul(&partition_z_prime(st, r, r + 1 - i, j)?);
        out.push(Check::equal("path initial values", format!("r={r} j={j} i={i}"), &acc, &rhs));
    }
    Ok(out)
}

/// `y_{h+v,v}(u+h-2) y_{i+k+v,i+v}(u+i+k-2) = y_{h+v,i+v}(u+h-2) y_{i+k+v,v}(u+i+k-2)`.
pub fn check_flip_identity<V: Ring, W: SkeletonWeights<V>>(
    model: &PathModel<'_, V, W>,
    v: i32,
    h: i32,
    i: i32,
    k: i32,
    u: i32,
) -> Result<bool> {
    let g = model.graph();
    for (b, a) in [(h + v, v), (i + k + v, i + v), (h + v, i + v), (i + k + v, v)] {
        let ok = b == a + 1 && g.spine_label(a).is_some() || b > a + 1 && g.has_long(b, a);
        if !ok {
            return Err(Error::InvalidEdges(format!("no descending edge {b} -> {a}")));
        }
    }
    let lhs = model.descent(h + v, v, u + h - 2)?.mul(&model.descent(i + k + v, i + v, u + i + k - 2)?);
    let rhs = model.descent(h + v, i + v, u + h - 2)?.mul(&model.descent(i + k + v, v, u + i + k - 2)?);
    Ok(lhs == rhs)
}

/// Every `(v, h, i, k)` whose four edges exist on `g`.
pub fn flip_tuples(g: &PathGraph) -> Vec<(i32, i32, i32, i32)> {
    let exists = |b: i32, a: i32| b == a + 1 && g.spine_label(a).is_some() || b > a + 1 && g.has_long(b, a);
    let top = g.top();
    let mut out = Vec::new();
    for v in 0..=top {
        for h in 1..=top {
            for i in 0..h {
                for k in 1..=top {
                    let es = [(h + v, v), (i + k + v, i + v), (h + v, i + v), (i + k + v, v)];
                    if es.iter().all(|&(b, a)| exists(b, a)) {
                        out.push((v, h, i, k));
                    }
                }
            }
        }
    }
    out
}

/// A symbolic lattice seeded at `M` with room for paths up to half-length `kmax` around `j`.
pub fn motzkin_state(m: &MotzkinPath, j: i32, kmax: i32) -> Result<LatticeState<crate::laurent::LaurentPoly>> {
    let r = m.r();
    let span = kmax + 2 * r as i32 + m.as_slice().iter().map(|x| x.abs()).max().unwrap_or(0) + 4;
    Ok(LatticeState::symbolic(SeedSpec::new(r, m.clone(), (j - span, j + span))?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::LaurentPoly;

    fn mp(v: &[i32]) -> MotzkinPath {
        MotzkinPath::new(v.to_vec()).unwrap()
    }

    #[test]
    fn gtilde_shape() {
        let g = build_gtilde(1).unwrap();
        assert_eq!(g.vertices().len(), 4);
        let g = build_gtilde(2).unwrap();
        assert_eq!(g.vertices().len(), 6);
        assert_eq!(g.skeleton_count(), 5);
        assert_eq!((0..3).map(|c| g.spine_label(c).unwrap()).collect::<Vec<_>>(), vec![1, 2, 4]);
        assert_eq!([2, 3].map(|c| g.pendant_label(c).unwrap()), [3, 5]);
        for r in 1..=4 {
            assert_eq!(build_gtilde(r).unwrap(), build_gamma(&MotzkinPath::zero(r)).unwrap());
        }
    }

    #[test]
    fn gamma_shapes() {
        let g = build_gamma(&mp(&[1, 0])).unwrap();
        assert_eq!(g.long_edges().collect::<Vec<_>>(), vec![(3, 1)]);
        assert_eq!(g.skeleton_count(), 5);
        assert_eq!(build_gamma(&mp(&[0, 1])).unwrap().long_edges().count(), 0);
        let g = build_gamma(&mp(&[2, 1, 0])).unwrap();
        let mut longs: Vec<_> = g.long_edges().collect();
        longs.sort();
        assert_eq!(longs, vec![(3, 1), (4, 1), (4, 2)]);
        assert_eq!(pieces(&mp(&[0, 1, 1, 0])), vec![(1, 2), (0, 2), (-1, 2)]);
    }

    #[test]
    fn short_paths() {
        let st = LatticeState::symbolic(SeedSpec::fundamental(2, (-8, 8)).unwrap());
        let g = build_gtilde(2).unwrap();
        let model = PathModel::new(&g, LevelWeights { state: &st, k: 0 });
        let y1 = |t| y(&st, 1, t, 0).unwrap();
        let y2 = |t| y(&st, 2, t, 0).unwrap();
        assert_eq!(model.root_partition(0, 0).unwrap(), LaurentPoly::one());
        assert!(model.root_partition(1, 0).unwrap().is_zero());
        assert_eq!(model.root_partition(0, 2).unwrap(), y1(1));
        let four = y1(1).mul(&y1(3)).add(&y2(2).mul(&y1(3)));
        assert_eq!(model.root_partition(0, 4).unwrap(), four);
        assert_eq!(t1_via_paths(&st, &model, 0, 2, 0).unwrap(), st.evolve(1, 0, 2).unwrap());
    }

    #[test]
    fn appendix_long_weight() {
        let m = mp(&[1, 0]);
        let st = motzkin_state(&m, 0, 4).unwrap();
        let g = build_gamma(&m).unwrap();
        let model = PathModel::new(&g, MotzkinWeights { state: &st, motzkin: m });
        let v = |a, j, l| LaurentPoly::var(crate::laurent::SeedVar::new(a, j, l));
        let t = 2;
        let z6 = LaurentPoly::one().exact_div(&v(1, t, 2).mul(&v(2, t - 1, 0))).unwrap();
        assert_eq!(model.descent(3, 1, t).unwrap(), z6);
    }

    #[test]
    fn motzkin_paths_second_row() {
        let m = mp(&[0, 1]);
        let st = motzkin_state(&m, 0, 3).unwrap();
        let g = build_gamma(&m).unwrap();
        let model = PathModel::new(&g, MotzkinWeights { state: &st, motzkin: m });
        for k in 0..=3 {
            assert_eq!(t1_via_paths(&st, &model, 0, k, 0).unwrap(), st.evolve(1, 0, k).unwrap());
        }
    }

    #[test]
    fn lgv_small() {
        let st = LatticeState::symbolic(SeedSpec::fundamental(2, (-10, 10)).unwrap());
        let t = t_alpha_via_lgv(&st, 2, 0, 2).unwrap();
        assert_eq!(t, st.evolve(2, 0, 2).unwrap());
        assert!(t.is_positive());
        assert_eq!(t_alpha_via_lgv(&st, 3, 0, 2).unwrap(), LaurentPoly::one());
        assert_eq!(t_alpha_via_lgv(&st, 2, 0, 0).unwrap(), st.evolve(2, 0, 0).unwrap());
    }

    #[test]
    fn recursion_matches_closed_form_a2() {
        let st = LatticeState::random(SeedSpec::fundamental(2, (-30, 30)).unwrap(), 11);
        for m in [mp(&[1, 0]), mp(&[0, 1]), mp(&[1, 1])] {
            let table = recursion_weights(&st, &m, -3, 3).unwrap();
            let closed = MotzkinWeights { state: &st, motzkin: m.clone() };
            for b in 1..=5 {
                for t in -3..=3 {
                    assert_eq!(table.get(b, t).unwrap(), closed.weight(b, t).unwrap(), "{m:?} y{b}({t})");
                }
            }
        }
    }

    #[test]
    fn flip_degenerate_and_z6() {
        let m = mp(&[1, 0]);
        let st = motzkin_state(&m, 0, 3).unwrap();
        let g = build_gamma(&m).unwrap();
        let model = PathModel::new(&g, MotzkinWeights { state: &st, motzkin: m });
        assert!(check_flip_identity(&model, 1, 2, 0, 2, 0).unwrap());
        let tuples = flip_tuples(&g);
        assert!(!tuples.is_empty());
        for (v, h, i, k) in tuples {
            assert!(check_flip_identity(&model, v, h, i, k, 1).unwrap());
        }
        assert!(matches!(check_flip_identity(&model, 0, 3, 0, 3, 0), Err(Error::InvalidEdges(_))));
    }
}
