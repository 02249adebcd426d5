//! Walks on weighted networks, loop erasure, and Fomin's determinant.
//!
//! A [`Network`] has interior and boundary vertices. Boundary vertices are
//! absorbing: a walk may start at one, step into the interior, and it ends
//! the moment it reaches its target. Every vertex of a walk other than the
//! first and the last is interior. The walk matrix is
//! `W(a, b) = Σ_π w(π)`, including the empty walk when `a = b`, and is
//! computed exactly from `G = (I − Q)^{-1}` on the interior.
//!
//! [`brute_force_fomin`] enumerates walk tuples directly and certifies the
//! determinant identity up to a rigorous bound on the discarded tail.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};

use crate::error::{domain, Error, Result};
use crate::numerics::{det_lu, Execution, TailBounded};

/// Iterations of the power method behind the spectral-radius check.
pub const POWER_ITERATIONS: usize = 200;
/// Networks whose interior spectral radius bound reaches this are rejected.
pub const RADIUS_THRESHOLD: f64 = 1.0 - 1e-6;
/// Default cap on the number of walks enumerated per endpoint pair.
pub const DEFAULT_WALK_BUDGET: usize = 50_000_000;

/// Weighted directed graph with disjoint interior and boundary vertex sets.
#[derive(Debug, Clone)]
pub struct Network {
    vertex_count: usize,
    edges: Vec<(usize, usize, f64)>,
    is_boundary: Vec<bool>,
    /// interior vertex → row of `Q`
    slot: Vec<Option<usize>>,
    interior: Vec<usize>,
    boundary: Vec<usize>,
    out: Vec<Vec<(usize, f64)>>,
    green: DMatrix<f64>,
    radius_bound: f64,
    /// positive vector with `Q x <= radius_bound · x`
    perron: DVector<f64>,
}

impl Network {
    pub fn new(
        vertex_count: usize,
        edges: Vec<(usize, usize, f64)>,
        interior: Vec<usize>,
        boundary: Vec<usize>,
    ) -> Result<Self> {
        let mut is_boundary = vec![false; vertex_count];
        let mut seen = vec![false; vertex_count];
        for &v in interior.iter().chain(&boundary) {
            if v >= vertex_count {
                return Err(domain(format!("vertex {v} out of range 0..{vertex_count}")));
            }
            if seen[v] {
                return Err(domain(format!("vertex {v} listed twice")));
            }
            seen[v] = true;
        }
        if let Some(v) = seen.iter().position(|s| !s) {
            return Err(domain(format!("vertex {v} is neither interior nor boundary")));
        }
        for &v in &boundary {
            is_boundary[v] = true;
        }
        let mut out = vec![Vec::new(); vertex_count];
        for &(u, v, w) in &edges {
            if u >= vertex_count || v >= vertex_count {
                return Err(domain(format!("edge {u}->{v} out of range")));
            }
            if !(w >= 0.0) || !w.is_finite() {
                return Err(domain(format!("edge {u}->{v} has weight {w}")));
            }
            out[u].push((v, w));
        }
        let mut interior = interior;
        interior.sort_unstable();
        let mut boundary = boundary;
        boundary.sort_unstable();
        let mut slot = vec![None; vertex_count];
        for (i, &v) in interior.iter().enumerate() {
            slot[v] = Some(i);
        }
        let m = interior.len();
        let mut q = DMatrix::zeros(m, m);
        for &(u, v, w) in &edges {
            if let (Some(i), Some(j)) = (slot[u], slot[v]) {
                q[(i, j)] += w;
            }
        }
        let (radius_bound, perron) = radius_upper_bound(&q);
        if radius_bound >= RADIUS_THRESHOLD {
            return Err(Error::NonConvergent { radius: radius_bound, threshold: RADIUS_THRESHOLD });
        }
        let green = if m == 0 {
            DMatrix::zeros(0, 0)
        } else {
            (DMatrix::identity(m, m) - &q)
                .try_inverse()
                .ok_or_else(|| Error::Solver("I − Q is singular".into()))?
        };
        Ok(Network {
            vertex_count,
            edges,
            is_boundary,
            slot,
            interior,
            boundary,
            out,
            green,
            radius_bound,
            perron,
        })
    }

    /// `nx × ny` interior grid of a square lattice with its side boundary
    /// (corners omitted). Every nearest-neighbour step, including the first
    /// step out of the boundary, has weight `weight`.
    pub fn grid(nx: usize, ny: usize, weight: f64) -> Result<Self> {
        if nx == 0 || ny == 0 {
            return Err(domain("grid needs at least one interior vertex"));
        }
        let g = GridIndex { nx, ny };
        let mut interior = Vec::new();
        let mut boundary = Vec::new();
        for (id, (i, j)) in g.sites().enumerate() {
            if g.is_interior(i, j) {
                interior.push(id);
            } else {
                boundary.push(id);
            }
        }
        let mut edges = Vec::new();
        for (i, j) in g.sites() {
            let from = g.id(i, j).expect("site");
            let interior_here = g.is_interior(i, j);
            for (di, dj) in [(1i64, 0i64), (-1, 0), (0, 1), (0, -1)] {
                let (ti, tj) = (i as i64 + di, j as i64 + dj);
                if ti < 0 || tj < 0 {
                    continue;
                }
                let (ti, tj) = (ti as usize, tj as usize);
                if let Some(to) = g.id(ti, tj) {
                    if interior_here || g.is_interior(ti, tj) {
                        edges.push((from, to, weight));
                    }
                }
            }
        }
        Network::new(g.count(), edges, interior, boundary)
    }

    /// Vertex id of lattice site `(i, j)` in a [`Network::grid`] network.
    pub fn grid_vertex(nx: usize, ny: usize, i: usize, j: usize) -> Option<usize> {
        GridIndex { nx, ny }.id(i, j)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn interior(&self) -> &[usize] {
        &self.interior
    }

    pub fn boundary(&self) -> &[usize] {
        &self.boundary
    }

    pub fn is_boundary(&self, v: usize) -> bool {
        self.is_boundary[v]
    }

    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    /// Certified upper bound on the spectral radius of `Q`.
    pub fn radius_bound(&self) -> f64 {
        self.radius_bound
    }

    /// Total weight of edges `u → v`.
    pub fn weight(&self, u: usize, v: usize) -> f64 {
        self.out[u].iter().filter(|e| e.0 == v).map(|e| e.1).sum()
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.vertex_count {
            return Err(domain(format!("vertex {v} out of range")));
        }
        Ok(())
    }

    /// Start row: `e_a` for interior `a`, the out-weights into the interior
    /// for boundary `a`.
    fn start_vector(&self, a: usize) -> DVector<f64> {
        let mut u = DVector::zeros(self.interior.len());
        match self.slot[a] {
            Some(i) => u[i] = 1.0,
            None => {
                for &(v, w) in &self.out[a] {
                    if let Some(j) = self.slot[v] {
                        u[j] += w;
                    }
                }
            }
        }
        u
    }

    fn end_vector(&self, b: usize) -> DVector<f64> {
        let mut v = DVector::zeros(self.interior.len());
        match self.slot[b] {
            Some(i) => v[i] = 1.0,
            None => {
                for &(from, to, w) in &self.edges {
                    if to == b {
                        if let Some(i) = self.slot[from] {
                            v[i] += w;
                        }
                    }
                }
            }
        }
        v
    }
}

fn radius_upper_bound(q: &DMatrix<f64>) -> (f64, DVector<f64>) {
    let m = q.nrows();
    if m == 0 {
        return (0.0, DVector::zeros(0));
    }
    let mut x = DVector::from_element(m, 1.0);
    for _ in 0..POWER_ITERATIONS {
        let y = &x + q * &x;
        let norm = y.max();
        x = y / norm;
    }
    let qx = q * &x;
    let bound = (0..m).map(|i| qx[i] / x[i]).fold(0.0, f64::max);
    (bound, x)
}

#[derive(Debug, Clone, Copy)]
struct GridIndex {
    nx: usize,
    ny: usize,
}

impl GridIndex {
    fn is_interior(&self, i: usize, j: usize) -> bool {
        (1..=self.nx).contains(&i) && (1..=self.ny).contains(&j)
    }

    fn on_lattice(&self, i: usize, j: usize) -> bool {
        if i > self.nx + 1 || j > self.ny + 1 {
            return false;
        }
        let corner = (i == 0 || i == self.nx + 1) && (j == 0 || j == self.ny + 1);
        !corner
    }

    fn sites(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..=self.ny + 1)
            .flat_map(move |j| (0..=self.nx + 1).map(move |i| (i, j)))
            .filter(move |&(i, j)| self.on_lattice(i, j))
    }

    fn id(&self, i: usize, j: usize) -> Option<usize> {
        if !self.on_lattice(i, j) {
            return None;
        }
        self.sites().position(|s| s == (i, j))
    }

    fn count(&self) -> usize {
        self.sites().count()
    }
}

impl FromStr for Network {
    type Err = Error;

    /// Plain-text edge list: `interior: ids…`, `boundary: ids…`, then one
    /// `from to weight` per line. `#` starts a comment.
    fn from_str(s: &str) -> Result<Self> {
        let mut interior = None;
        let mut boundary = None;
        let mut edges = Vec::new();
        let ids = |rest: &str, line: usize| -> Result<Vec<usize>> {
            rest.split_whitespace()
                .map(|t| {
                    t.parse::<usize>()
                        .map_err(|e| Error::Parse(format!("line {line}: bad vertex {t:?}: {e}")))
                })
                .collect()
        };
        for (k, raw) in s.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("interior:") {
                interior = Some(ids(rest, k + 1)?);
            } else if let Some(rest) = line.strip_prefix("boundary:") {
                boundary = Some(ids(rest, k + 1)?);
            } else {
                let parts: Vec<&str> = line.split_whitespace().collect();
                if parts.len() != 3 {
                    return Err(Error::Parse(format!("line {}: expected `from to weight`", k + 1)));
                }
                let bad = |e: String| Error::Parse(format!("line {}: {e}", k + 1));
                let u = parts[0].parse::<usize>().map_err(|e| bad(e.to_string()))?;
                let v = parts[1].parse::<usize>().map_err(|e| bad(e.to_string()))?;
                let w = parts[2].parse::<f64>().map_err(|e| bad(e.to_string()))?;
                edges.push((u, v, w));
            }
        }
        let interior = interior.ok_or_else(|| Error::Parse("missing `interior:` line".into()))?;
        let boundary = boundary.ok_or_else(|| Error::Parse("missing `boundary:` line".into()))?;
        let count = interior.iter().chain(&boundary).map(|v| v + 1).max().unwrap_or(0);
        Network::new(count, edges, interior, boundary)
    }
}

impl fmt::Display for Network {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
        writeln!(f, "interior: {}", join(&self.interior))?;
        writeln!(f, "boundary: {}", join(&self.boundary))?;
        for &(u, v, w) in &self.edges {
            writeln!(f, "{u} {v} {w}")?;
        }
        Ok(())
    }
}

/// Read a network from an edge-list file.
pub fn read_network(path: &Path) -> Result<Network> {
    std::fs::read_to_string(path)?.parse()
}

/// A finite vertex sequence along edges of a network.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Walk {
    vertices: Vec<usize>,
}

impl Walk {
    /// Walk with no network check (used for pure loop-erasure).
    pub fn from_vertices(vertices: Vec<usize>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(domain("a walk has at least one vertex"));
        }
        Ok(Walk { vertices })
    }

    /// Walk whose consecutive vertices are joined by edges of `net`.
    pub fn on(net: &Network, vertices: Vec<usize>) -> Result<Self> {
        let w = Walk::from_vertices(vertices)?;
        for &v in &w.vertices {
            net.check_vertex(v)?;
        }
        for p in w.vertices.windows(2) {
            if net.weight(p[0], p[1]) == 0.0 && !net.out[p[0]].iter().any(|e| e.0 == p[1]) {
                return Err(domain(format!("no edge {} -> {}", p[0], p[1])));
            }
        }
        Ok(w)
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    /// Number of steps.
    pub fn len(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn first(&self) -> usize {
        self.vertices[0]
    }

    pub fn last(&self) -> usize {
        *self.vertices.last().expect("nonempty")
    }

    pub fn is_self_avoiding(&self) -> bool {
        let mut v = self.vertices.clone();
        v.sort_unstable();
        v.windows(2).all(|p| p[0] != p[1])
    }

    /// Product of edge weights.
    pub fn weight(&self, net: &Network) -> f64 {
        self.vertices.windows(2).map(|p| net.weight(p[0], p[1])).product()
    }
}

/// Chronological loop erasure: repeatedly remove the first loop.
pub fn loop_erase(walk: &Walk) -> Walk {
    let mut path: Vec<usize> = Vec::with_capacity(walk.vertices.len());
    for &v in &walk.vertices {
        if let Some(p) = path.iter().position(|&u| u == v) {
            path.truncate(p + 1);
        } else {
            path.push(v);
        }
    }
    Walk { vertices: path }
}

/// Ordered start and end vertices on the boundary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryTuple {
    a: Vec<usize>,
    b: Vec<usize>,
}

impl BoundaryTuple {
    pub fn new(net: &Network, a: Vec<usize>, b: Vec<usize>) -> Result<Self> {
        if a.len() != b.len() || a.is_empty() {
            return Err(domain(format!("|A| = {} and |B| = {} must match", a.len(), b.len())));
        }
        let mut all: Vec<usize> = a.iter().chain(&b).copied().collect();
        for &v in &all {
            net.check_vertex(v)?;
            if !net.is_boundary(v) {
                return Err(domain(format!("vertex {v} is not a boundary vertex")));
            }
        }
        all.sort_unstable();
        if all.windows(2).any(|p| p[0] == p[1]) {
            return Err(domain("boundary tuple entries must be distinct"));
        }
        Ok(BoundaryTuple { a, b })
    }

    pub fn a(&self) -> &[usize] {
        &self.a
    }

    pub fn b(&self) -> &[usize] {
        &self.b
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }
}

/// Walk matrix entry `W(a, b)`.
pub fn walk_green(net: &Network, a: usize, b: usize) -> Result<f64> {
    net.check_vertex(a)?;
    net.check_vertex(b)?;
    let through = if net.interior.is_empty() {
        0.0
    } else {
        let u = net.start_vector(a);
        let v = net.end_vector(b);
        (u.transpose() * &net.green * v)[(0, 0)]
    };
    let mut total = through;
    if net.is_boundary(a) {
        // one-step walks between boundary vertices and the empty walk
        if net.is_boundary(b) {
            total += net.weight(a, b);
        }
        if a == b {
            total += 1.0;
        }
    }
    Ok(total)
}

/// Rigorous bound on the weight of walks `a → b` with more than `max_len`
/// steps.
pub fn walk_tail_bound(net: &Network, a: usize, b: usize, max_len: usize) -> f64 {
    if net.interior.is_empty() {
        return 0.0;
    }
    let u = net.start_vector(a);
    let v = net.end_vector(b);
    let x = &net.perron;
    let c = (0..v.len()).map(|i| v[i] / x[i]).fold(0.0, f64::max);
    let offsets = usize::from(net.is_boundary(a)) + usize::from(net.is_boundary(b));
    // walks longer than max_len make at least k0 interior-to-interior steps
    let k0 = (max_len + 1).saturating_sub(offsets) as i32;
    let r = net.radius_bound;
    c * r.powi(k0) / (1.0 - r) * u.dot(x)
}

/// `det[W(a_j, b_k)]`.
pub fn fomin_det(net: &Network, ab: &BoundaryTuple) -> Result<f64> {
    let n = ab.len();
    let mut m = DMatrix::zeros(n, n);
    for j in 0..n {
        for k in 0..n {
            m[(j, k)] = walk_green(net, ab.a[j], ab.b[k])?;
        }
    }
    det_lu(&m)
}

/// Walks `a → b` of length `<= max_len`, grouped by the vertex sets of the
/// loop erasure and of the walk.
type WalkTable = BTreeMap<(u64, u64), f64>;

struct Enumerator<'a> {
    net: &'a Network,
    target: usize,
    max_len: usize,
    budget: usize,
    visited: usize,
    deepest: usize,
    walk: Vec<usize>,
    erased: Vec<usize>,
    position: Vec<Option<usize>>,
}

impl<'a> Enumerator<'a> {
    fn new(net: &'a Network, target: usize, max_len: usize, budget: usize) -> Self {
        Enumerator {
            net,
            target,
            max_len,
            budget,
            visited: 0,
            deepest: 0,
            walk: Vec::new(),
            erased: Vec::new(),
            position: vec![None; net.vertex_count],
        }
    }

    fn mask(vs: &[usize]) -> u64 {
        vs.iter().fold(0u64, |m, &v| m | (1u64 << v))
    }

    /// Push `v`, loop-erasing on the fly; returns what must be restored.
    fn push(&mut self, v: usize) -> Option<Vec<usize>> {
        self.walk.push(v);
        match self.position[v] {
            Some(p) => {
                let removed = self.erased.split_off(p + 1);
                for &u in &removed {
                    self.position[u] = None;
                }
                Some(removed)
            }
            None => {
                self.position[v] = Some(self.erased.len());
                self.erased.push(v);
                None
            }
        }
    }

    fn pop(&mut self, restore: Option<Vec<usize>>) {
        self.walk.pop();
        match restore {
            Some(removed) => {
                for u in removed {
                    self.position[u] = Some(self.erased.len());
                    self.erased.push(u);
                }
            }
            None => {
                let v = self.erased.pop().expect("pushed");
                self.position[v] = None;
            }
        }
    }

    fn visit<F: FnMut(&Self, f64)>(&mut self, weight: f64, sink: &mut F) -> Result<()> {
        self.visited += 1;
        if self.visited > self.budget {
            return Err(Error::Budget { budget: self.budget, reached_len: self.deepest });
        }
        let len = self.walk.len() - 1;
        self.deepest = self.deepest.max(len);
        let here = *self.walk.last().expect("nonempty");
        if here == self.target {
            sink(self, weight);
            // reaching a boundary target ends the walk
            if self.net.is_boundary(here) {
                return Ok(());
            }
        }
        if len > 0 && self.net.is_boundary(here) {
            return Ok(());
        }
        if len == self.max_len {
            return Ok(());
        }
        let net = self.net;
        for &(v, w) in &net.out[here] {
            if w == 0.0 {
                continue;
            }
            let restore = self.push(v);
            let r = self.visit(weight * w, sink);
            self.pop(restore);
            r?;
        }
        Ok(())
    }

    fn run<F: FnMut(&Self, f64)>(&mut self, start: usize, mut sink: F) -> Result<()> {
        let restore = self.push(start);
        let r = self.visit(1.0, &mut sink);
        self.pop(restore);
        r
    }
}

fn check_bitmask_size(net: &Network) -> Result<()> {
    if net.vertex_count > 64 {
        return Err(Error::TooLarge { size: net.vertex_count, max: 64 });
    }
    Ok(())
}

fn walk_table(net: &Network, a: usize, b: usize, max_len: usize, budget: usize) -> Result<WalkTable> {
    let mut table = WalkTable::new();
    let mut e = Enumerator::new(net, b, max_len, budget);
    e.run(a, |en, w| {
        let key = (Enumerator::mask(&en.erased), Enumerator::mask(&en.walk));
        *table.entry(key).or_insert(0.0) += w;
    })?;
    Ok(table)
}

/// Sum of `w(π)` over walks `a → b` with `|π| <= max_len`, in enumeration
/// order.
pub fn walk_partial_sum(net: &Network, a: usize, b: usize, max_len: usize) -> Result<f64> {
    net.check_vertex(a)?;
    net.check_vertex(b)?;
    let mut total = 0.0;
    Enumerator::new(net, b, max_len, DEFAULT_WALK_BUDGET).run(a, |_, w| total += w)?;
    Ok(total)
}

/// Loop-erased walk weights `w̃(ζ)` for every self-avoiding `ζ: a → b`
/// reached by walks of length `<= max_len`.
pub fn lerw_weights(
    net: &Network,
    a: usize,
    b: usize,
    max_len: usize,
) -> Result<BTreeMap<Vec<usize>, f64>> {
    net.check_vertex(a)?;
    net.check_vertex(b)?;
    let mut out = BTreeMap::new();
    Enumerator::new(net, b, max_len, DEFAULT_WALK_BUDGET).run(a, |en, w| {
        *out.entry(en.erased.clone()).or_insert(0.0) += w;
    })?;
    Ok(out)
}

/// `w̃(ζ) = Σ_{LE(π) = ζ} w(π)` over walks of length `<= max_len`, with a
/// bound on the omitted walks.
pub fn lerw_weight(net: &Network, zeta: &Walk, max_len: usize) -> Result<TailBounded> {
    if !zeta.is_self_avoiding() {
        return Err(domain("loop-erased weight needs a self-avoiding walk"));
    }
    let (a, b) = (zeta.first(), zeta.last());
    net.check_vertex(a)?;
    net.check_vertex(b)?;
    let mut total = 0.0;
    Enumerator::new(net, b, max_len, DEFAULT_WALK_BUDGET).run(a, |en, w| {
        if en.erased == zeta.vertices {
            total += w;
        }
    })?;
    Ok(TailBounded::new(total, walk_tail_bound(net, a, b, max_len)))
}

/// Enumerate all `N`-tuples of walks `π_j: a_j → b_{σ(j)}` with
/// `|π_j| <= max_len` and `LE(π_j) ∩ π_k = ∅` for `j < k`, and return
/// `Σ_σ sgn(σ) Σ Π w(π_j)` with a bound on everything discarded.
pub fn brute_force_fomin(net: &Network, ab: &BoundaryTuple, max_len: usize) -> Result<TailBounded> {
    brute_force_fomin_with(net, ab, max_len, DEFAULT_WALK_BUDGET, Execution::default())
}

pub fn brute_force_fomin_with(
    net: &Network,
    ab: &BoundaryTuple,
    max_len: usize,
    budget: usize,
    exec: Execution,
) -> Result<TailBounded> {
    if max_len < 1 {
        return Err(domain("max_len must be at least 1"));
    }
    check_bitmask_size(net)?;
    let n = ab.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|j| (0..n).map(move |k| (j, k))).collect();
    let tables = exec.map(&pairs, |&(j, k)| walk_table(net, ab.a[j], ab.b[k], max_len, budget));
    let mut t: Vec<Vec<WalkList>> = vec![vec![Vec::new(); n]; n];
    for (&(j, k), table) in pairs.iter().zip(tables) {
        t[j][k] = table?.into_iter().collect();
    }
    let mut value = 0.0;
    let mut bound = 0.0;
    for (perm, sign) in permutations(n) {
        let first = &t[0][perm[0]];
        let parts = exec.map(first, |&((le, _), w)| w * tuple_sum(&t, &perm, 1, le));
        let s: f64 = parts.into_iter().sum();
        value += sign * s;
        // at least one walk is longer than max_len
        for j in 0..n {
            let mut term = walk_tail_bound(net, ab.a[j], ab.b[perm[j]], max_len);
            for (l, &pl) in perm.iter().enumerate() {
                if l != j {
                    term *= walk_green(net, ab.a[l], ab.b[pl])?;
                }
            }
            bound += term;
        }
    }
    Ok(TailBounded::new(value, bound))
}

/// A walk table flattened for the inner loops.
type WalkList = Vec<((u64, u64), f64)>;

fn tuple_sum(t: &[Vec<WalkList>], perm: &[usize], j: usize, erased: u64) -> f64 {
    if j == perm.len() {
        return 1.0;
    }
    let mut s = 0.0;
    for &((le, full), w) in &t[j][perm[j]] {
        if full & erased == 0 {
            s += w * tuple_sum(t, perm, j + 1, erased | le);
        }
    }
    s
}

/// All permutations of `0..n` in lexicographic order with their signs.
fn permutations(n: usize) -> Vec<(Vec<usize>, f64)> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                go(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out.into_iter()
        .map(|p| {
            let inversions = (0..n)
                .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
                .filter(|&(i, j)| p[i] > p[j])
                .count();
            let sign = if inversions % 2 == 0 { 1.0 } else { -1.0 };
            (p, sign)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path_graph() -> Network {
        let mut edges = Vec::new();
        for i in 1..4 {
            edges.push((i, i - 1, 0.5));
            edges.push((i, i + 1, 0.5));
        }
        edges.push((0, 1, 1.0));
        edges.push((4, 3, 1.0));
        Network::new(5, edges, vec![1, 2, 3], vec![0, 4]).unwrap()
    }

    #[test]
    fn gamblers_ruin() {
        let net = path_graph();
        assert!((walk_green(&net, 1, 0).unwrap() - 0.75).abs() < 1e-15);
        assert!((walk_green(&net, 2, 2).unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn disconnected_pair_has_zero_weight() {
        let net = Network::new(
            4,
            vec![(0, 1, 0.5), (2, 3, 0.5)],
            vec![1, 2],
            vec![0, 3],
        )
        .unwrap();
        assert_eq!(walk_green(&net, 0, 3).unwrap(), 0.0);
    }

    #[test]
    fn rejects_recurrent_interior() {
        let err = Network::new(3, vec![(1, 1, 1.0), (0, 1, 1.0)], vec![1], vec![0, 2]).unwrap_err();
        assert!(matches!(err, Error::NonConvergent { .. }));
    }

    #[test]
    fn rejects_negative_weight_and_overlap() {
        assert!(Network::new(2, vec![(0, 1, -0.1)], vec![1], vec![0]).is_err());
        assert!(Network::new(2, vec![], vec![0, 1], vec![1]).is_err());
        assert!(Network::new(3, vec![], vec![0], vec![1]).is_err());
    }

    #[test]
    fn loop_erasure_examples() {
        let w = Walk::from_vertices(vec![0, 1, 0, 2]).unwrap();
        assert_eq!(loop_erase(&w).vertices(), &[0, 2]);
        let w = Walk::from_vertices(vec![0, 1, 2, 1, 2, 3]).unwrap();
        assert_eq!(loop_erase(&w).vertices(), &[0, 1, 2, 3]);
        let saw = Walk::from_vertices(vec![4, 2, 7]).unwrap();
        assert_eq!(loop_erase(&saw), saw);
    }

    #[test]
    fn brute_force_single_walk_converges() {
        let net = path_graph();
        let ab = BoundaryTuple::new(&net, vec![0], vec![4]).unwrap();
        let exact = fomin_det(&net, &ab).unwrap();
        let mut prev = f64::INFINITY;
        for len in [4, 10, 20, 40] {
            let r = brute_force_fomin(&net, &ab, len).unwrap();
            assert!((r.value - exact).abs() <= r.bound);
            assert!(r.bound < prev);
            prev = r.bound;
        }
    }

    #[test]
    fn tree_lerw_weight_is_exact() {
        let net = Network::new(
            3,
            vec![(0, 1, 0.5), (1, 2, 0.5)],
            vec![1],
            vec![0, 2],
        )
        .unwrap();
        let zeta = Walk::on(&net, vec![0, 1, 2]).unwrap();
        let r = lerw_weight(&net, &zeta, 10).unwrap();
        assert_eq!(r.value, 0.25);
        assert_eq!(r.bound, 0.0);
    }

    #[test]
    fn lerw_rejects_loops() {
        let net = path_graph();
        let w = Walk::on(&net, vec![1, 2, 1]).unwrap();
        assert!(lerw_weight(&net, &w, 5).is_err());
    }

    #[test]
    fn parse_round_trip() {
        let net = path_graph();
        let back: Network = net.to_string().parse().unwrap();
        assert_eq!(back.edges(), net.edges());
        assert_eq!(walk_green(&back, 1, 0).unwrap(), walk_green(&net, 1, 0).unwrap());
    }

    #[test]
    fn parse_errors_name_the_line() {
        let err = "interior: 1\nboundary: 0 2\n0 1\n".parse::<Network>().unwrap_err();
        assert!(err.to_string().contains("line 3"));
    }

    #[test]
    fn grid_shape() {
        let net = Network::grid(3, 3, 0.25).unwrap();
        assert_eq!(net.interior().len(), 9);
        assert_eq!(net.boundary().len(), 12);
        assert!((net.radius_bound() - 2f64.sqrt() / 2.0).abs() < 1e-9);
    }

    #[test]
    fn permutation_signs() {
        let p = permutations(3);
        assert_eq!(p.len(), 6);
        assert_eq!(p.iter().map(|x| x.1).sum::<f64>(), 0.0);
    }
}
