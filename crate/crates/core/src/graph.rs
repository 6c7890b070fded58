//! Labeled simple graphs, motif graphs and homomorphism densities.
//!
//! Edge sites `{i, j}` (with `i < j`) are indexed in colexicographic order,
//! `index = j(j-1)/2 + i`. The index does not depend on the vertex count, so
//! the sites of `K_n` are exactly the indices `0..n(n-1)/2` and an edge set
//! fits in a `u128` bitmask for up to [`MAX_VERTICES`] vertices.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Largest supported vertex count (120 edge sites fit in a `u128`).
pub const MAX_VERTICES: usize = 16;

/// Default ceiling for exhaustive enumeration of `2^(n(n-1)/2)` graphs.
pub const ENUMERATION_GUARD: usize = 7;

/// Hard ceiling for enumeration even when forced (the counter is a `u64`).
pub const ENUMERATION_HARD_LIMIT: usize = 11;

pub fn site_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// All edge sites of `K_n` in index order.
pub fn sites(n: usize) -> impl Iterator<Item = EdgeSite> {
    (0..site_count(n)).map(EdgeSite::from_index)
}

/// An unordered vertex pair `{i, j}`, stored canonically with `i < j`.
///
/// Sites are ordered by their colex index: `(0,1) < (0,2) < (1,2) < (0,3) < ...`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct EdgeSite {
    lo: u8,
    hi: u8,
}

impl EdgeSite {
    pub fn new(a: usize, b: usize) -> Result<Self> {
        if a == b {
            return invalid(format!("self-loop at vertex {a}"));
        }
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        if hi >= MAX_VERTICES {
            return invalid(format!("vertex {hi} exceeds the supported maximum {}", MAX_VERTICES - 1));
        }
        Ok(EdgeSite { lo: lo as u8, hi: hi as u8 })
    }

    pub fn from_index(index: usize) -> Self {
        // largest hi with hi(hi-1)/2 <= index
        let mut hi = ((1.0 + (1.0 + 8.0 * index as f64).sqrt()) / 2.0) as usize;
        while hi * (hi - 1) / 2 > index {
            hi -= 1;
        }
        while (hi + 1) * hi / 2 <= index {
            hi += 1;
        }
        let lo = index - hi * (hi - 1) / 2;
        EdgeSite { lo: lo as u8, hi: hi as u8 }
    }

    pub fn index(self) -> usize {
        let hi = self.hi as usize;
        hi * (hi - 1) / 2 + self.lo as usize
    }

    pub fn endpoints(self) -> (usize, usize) {
        (self.lo as usize, self.hi as usize)
    }

    pub fn bit(self) -> u128 {
        1u128 << self.index()
    }

    pub fn shares_vertex(self, other: EdgeSite) -> bool {
        self.lo == other.lo || self.lo == other.hi || self.hi == other.lo || self.hi == other.hi
    }
}

impl Ord for EdgeSite {
    fn cmp(&self, other: &Self) -> Ordering {
        self.index().cmp(&other.index())
    }
}

impl PartialOrd for EdgeSite {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for EdgeSite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{},{}}}", self.lo, self.hi)
    }
}

impl fmt::Display for EdgeSite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Serialize for EdgeSite {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.lo as usize, self.hi as usize].serialize(s)
    }
}

impl<'de> Deserialize<'de> for EdgeSite {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [a, b] = <[usize; 2]>::deserialize(d)?;
        EdgeSite::new(a, b).map_err(serde::de::Error::custom)
    }
}

/// A set of edge sites, `X ⊆ E_n`, as a bitmask over site indices.
///
/// Subsets are ordered lexicographically as sorted site sequences, which is
/// the canonical order used for interaction dumps and for "least link"
/// tie-breaking in the expansion.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct EdgeSubset(u128);

impl EdgeSubset {
    pub const EMPTY: EdgeSubset = EdgeSubset(0);

    pub fn from_bits(bits: u128) -> Self {
        EdgeSubset(bits)
    }

    pub fn bits(self) -> u128 {
        self.0
    }

    pub fn singleton(site: EdgeSite) -> Self {
        EdgeSubset(site.bit())
    }

    pub fn from_sites<I: IntoIterator<Item = EdgeSite>>(sites: I) -> Self {
        EdgeSubset(sites.into_iter().fold(0, |acc, s| acc | s.bit()))
    }

    /// Builds a subset from vertex pairs, rejecting self-loops.
    pub fn from_pairs(pairs: &[(usize, usize)]) -> Result<Self> {
        let mut bits = 0;
        for &(a, b) in pairs {
            bits |= EdgeSite::new(a, b)?.bit();
        }
        Ok(EdgeSubset(bits))
    }

    /// All of `E_n`.
    pub fn full(n: usize) -> Self {
        let k = site_count(n);
        EdgeSubset(if k == 128 { u128::MAX } else { (1u128 << k) - 1 })
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, site: EdgeSite) -> bool {
        self.0 & site.bit() != 0
    }

    pub fn is_subset_of(self, other: EdgeSubset) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn overlaps(self, other: EdgeSubset) -> bool {
        self.0 & other.0 != 0
    }

    pub fn union(self, other: EdgeSubset) -> EdgeSubset {
        EdgeSubset(self.0 | other.0)
    }

    pub fn insert(&mut self, site: EdgeSite) {
        self.0 |= site.bit();
    }

    pub fn remove(&mut self, site: EdgeSite) {
        self.0 &= !site.bit();
    }

    /// Sites in ascending order.
    pub fn iter(self) -> impl Iterator<Item = EdgeSite> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(EdgeSite::from_index(i))
            }
        })
    }

    /// Bitmask of the vertices touched by the subset.
    pub fn vertex_mask(self) -> u32 {
        self.iter().fold(0, |acc, s| {
            let (a, b) = s.endpoints();
            acc | (1 << a) | (1 << b)
        })
    }

    /// Whether every site lies in `E_n`.
    pub fn within(self, n: usize) -> bool {
        self.is_subset_of(EdgeSubset::full(n))
    }

    pub fn pairs(self) -> Vec<[usize; 2]> {
        self.iter()
            .map(|s| {
                let (a, b) = s.endpoints();
                [a, b]
            })
            .collect()
    }
}

impl Ord for EdgeSubset {
    fn cmp(&self, other: &Self) -> Ordering {
        let diff = self.0 ^ other.0;
        if diff == 0 {
            return Ordering::Equal;
        }
        // The sequences agree below the first differing site `b`. The set
        // holding `b` is smaller unless the other one has nothing left after
        // the common prefix (then the other is a proper prefix).
        let b = diff.trailing_zeros();
        let above = if b == 127 { 0 } else { u128::MAX << (b + 1) };
        let (holder, other_rest) = if self.0 >> b & 1 == 1 {
            (Ordering::Less, other.0 & above)
        } else {
            (Ordering::Greater, self.0 & above)
        };
        if other_rest == 0 {
            holder.reverse()
        } else {
            holder
        }
    }
}

impl PartialOrd for EdgeSubset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for EdgeSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl Serialize for EdgeSubset {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.pairs().serialize(s)
    }
}

impl<'de> Deserialize<'de> for EdgeSubset {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let sites = Vec::<EdgeSite>::deserialize(d)?;
        Ok(EdgeSubset::from_sites(sites))
    }
}

/// A labeled simple graph on vertices `0..n`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct SimpleGraph {
    n: usize,
    edges: EdgeSubset,
}

impl SimpleGraph {
    /// Strict constructor: out-of-range vertices, self-loops and duplicate
    /// pairs (after canonicalization) are rejected.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        Self::build(n, edges, true)
    }

    /// Like [`SimpleGraph::from_edges`] but duplicate pairs collapse.
    pub fn from_edges_dedup(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        Self::build(n, edges, false)
    }

    fn build(n: usize, edges: &[(usize, usize)], strict: bool) -> Result<Self> {
        check_vertex_count(n)?;
        let mut set = EdgeSubset::EMPTY;
        for &(a, b) in edges {
            if a >= n || b >= n {
                return invalid(format!("edge ({a},{b}) has a vertex outside 0..{n}"));
            }
            let site = EdgeSite::new(a, b)?;
            if strict && set.contains(site) {
                return invalid(format!("duplicate edge {site}"));
            }
            set.insert(site);
        }
        Ok(SimpleGraph { n, edges: set })
    }

    pub fn from_subset(n: usize, edges: EdgeSubset) -> Result<Self> {
        check_vertex_count(n)?;
        if !edges.within(n) {
            return invalid(format!("edge set {edges:?} is not contained in E_{n}"));
        }
        Ok(SimpleGraph { n, edges })
    }

    pub fn empty(n: usize) -> Result<Self> {
        Self::from_subset(n, EdgeSubset::EMPTY)
    }

    pub fn complete(n: usize) -> Result<Self> {
        Self::from_subset(n, EdgeSubset::full(n))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> EdgeSubset {
        self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        EdgeSite::new(a, b).map(|s| self.edges.contains(s)).unwrap_or(false)
    }

    /// Neighbor bitmask of every vertex.
    pub fn adjacency(&self) -> Vec<u32> {
        let mut adj = vec![0u32; self.n];
        for s in self.edges.iter() {
            let (a, b) = s.endpoints();
            adj[a] |= 1 << b;
            adj[b] |= 1 << a;
        }
        adj
    }

    pub fn with_edge(&self, site: EdgeSite) -> Result<Self> {
        let mut edges = self.edges;
        edges.insert(site);
        Self::from_subset(self.n, edges)
    }
}

fn check_vertex_count(n: usize) -> Result<()> {
    if n == 0 || n > MAX_VERTICES {
        return invalid(format!("vertex count {n} outside 1..={MAX_VERTICES}"));
    }
    Ok(())
}

/// On-disk graph document: `{"n": 4, "edges": [[0,1], ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct GraphSpec {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
}

impl TryFrom<GraphSpec> for SimpleGraph {
    type Error = Error;

    fn try_from(spec: GraphSpec) -> Result<Self> {
        let pairs: Vec<_> = spec.edges.iter().map(|e| (e[0], e[1])).collect();
        SimpleGraph::from_edges(spec.n, &pairs)
    }
}

impl From<&SimpleGraph> for GraphSpec {
    fn from(g: &SimpleGraph) -> Self {
        GraphSpec { n: g.n, edges: g.edges.pairs() }
    }
}

/// A pre-chosen finite simple graph `H` used as a sufficient statistic.
///
/// Vertices with no incident edge are accepted. Each one contributes a free
/// factor `n` to every homomorphism count; no named motif has one.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(try_from = "MotifSpec", into = "MotifSpec")]
pub struct Motif {
    name: String,
    m: usize,
    edges: Vec<(usize, usize)>,
}

/// On-disk motif document: `{"name": "two-star", "m": 3, "edges": [[0,1],[0,2]]}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct MotifSpec {
    #[serde(default)]
    pub name: String,
    pub m: usize,
    pub edges: Vec<[usize; 2]>,
}

impl TryFrom<MotifSpec> for Motif {
    type Error = Error;

    fn try_from(spec: MotifSpec) -> Result<Self> {
        let pairs: Vec<_> = spec.edges.iter().map(|e| (e[0], e[1])).collect();
        Motif::new(spec.name, spec.m, &pairs)
    }
}

impl From<Motif> for MotifSpec {
    fn from(m: Motif) -> Self {
        MotifSpec {
            name: m.name,
            m: m.m,
            edges: m.edges.iter().map(|&(a, b)| [a, b]).collect(),
        }
    }
}

impl Motif {
    pub const NAMED: [&'static str; 3] = ["edge", "two-star", "triangle"];

    pub fn new(name: impl Into<String>, m: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if m < 2 {
            return invalid(format!("motif needs at least 2 vertices, got {m}"));
        }
        if m > MAX_VERTICES {
            return invalid(format!("motif has {m} vertices, more than {MAX_VERTICES}"));
        }
        let mut canon = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            if a >= m || b >= m {
                return invalid(format!("motif edge ({a},{b}) outside 0..{m}"));
            }
            if a == b {
                return invalid(format!("motif self-loop at {a}"));
            }
            let e = (a.min(b), a.max(b));
            if canon.contains(&e) {
                return invalid(format!("duplicate motif edge ({},{})", e.0, e.1));
            }
            canon.push(e);
        }
        if canon.is_empty() {
            return invalid("motif needs at least one edge");
        }
        canon.sort_unstable();
        Ok(Motif { name: name.into(), m, edges: canon })
    }

    /// `K_2`.
    pub fn edge() -> Self {
        Motif::new("edge", 2, &[(0, 1)]).unwrap()
    }

    /// Path on three vertices, centered at vertex 0.
    pub fn two_star() -> Self {
        Motif::new("two-star", 3, &[(0, 1), (0, 2)]).unwrap()
    }

    pub fn triangle() -> Self {
        Motif::new("triangle", 3, &[(0, 1), (0, 2), (1, 2)]).unwrap()
    }

    pub fn named(name: &str) -> Result<Self> {
        match name {
            "edge" | "K2" => Ok(Self::edge()),
            "two-star" => Ok(Self::two_star()),
            "triangle" | "K3" => Ok(Self::triangle()),
            other => invalid(format!("unknown motif name {other:?}; known: {:?}", Self::NAMED)),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Vertex count.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Edge count.
    pub fn p(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn is_single_edge(&self) -> bool {
        self.m == 2 && self.edges.len() == 1
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    pub fn isolated_count(&self) -> usize {
        (0..self.m).filter(|&v| self.degree(v) == 0).count()
    }

    /// Non-isolated vertices in a search order where every vertex after the
    /// first of its component has an earlier neighbor, together with those
    /// earlier neighbors.
    pub(crate) fn search_plan(&self) -> Vec<(usize, Vec<usize>)> {
        let mut placed = vec![false; self.m];
        let mut plan: Vec<(usize, Vec<usize>)> = Vec::new();
        loop {
            // Prefer a vertex with the most placed neighbors, then highest degree.
            let next = (0..self.m)
                .filter(|&v| !placed[v] && self.degree(v) > 0)
                .max_by_key(|&v| {
                    let placed_nbrs = self.neighbors(v).filter(|&u| placed[u]).count();
                    (placed_nbrs, self.degree(v), std::cmp::Reverse(v))
                });
            let Some(v) = next else { break };
            let earlier: Vec<usize> = self.neighbors(v).filter(|&u| placed[u]).collect();
            placed[v] = true;
            plan.push((v, earlier));
        }
        plan
    }

    fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges.iter().filter_map(move |&(a, b)| {
            if a == v {
                Some(b)
            } else if b == v {
                Some(a)
            } else {
                None
            }
        })
    }
}

/// Real parameters `β_1..β_k`, one per motif.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ParameterVector(pub Vec<f64>);

impl ParameterVector {
    pub fn new(betas: Vec<f64>) -> Self {
        ParameterVector(betas)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    /// `Σ|β_i|`.
    pub fn l1(&self) -> f64 {
        self.0.iter().map(|b| b.abs()).sum()
    }

    pub fn scaled(&self, t: f64) -> Self {
        ParameterVector(self.0.iter().map(|b| b * t).collect())
    }
}

/// A motif family with aligned parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct ErgmModel {
    motifs: Vec<Motif>,
    betas: ParameterVector,
}

impl ErgmModel {
    pub fn new(motifs: Vec<Motif>, betas: ParameterVector) -> Result<Self> {
        if motifs.is_empty() {
            return invalid("a model needs at least one motif");
        }
        if motifs.len() != betas.len() {
            return invalid(format!(
                "{} motifs but {} parameters",
                motifs.len(),
                betas.len()
            ));
        }
        if let Some(b) = betas.0.iter().find(|b| !b.is_finite()) {
            return invalid(format!("non-finite parameter {b}"));
        }
        Ok(ErgmModel { motifs, betas })
    }

    pub fn single(motif: Motif, beta: f64) -> Result<Self> {
        Self::new(vec![motif], ParameterVector(vec![beta]))
    }

    pub fn motifs(&self) -> &[Motif] {
        &self.motifs
    }

    pub fn betas(&self) -> &ParameterVector {
        &self.betas
    }

    pub fn with_betas(&self, betas: ParameterVector) -> Result<Self> {
        Self::new(self.motifs.clone(), betas)
    }

    /// Largest motif edge count `p`.
    pub fn p_max(&self) -> usize {
        self.motifs.iter().map(Motif::p).max().unwrap_or(0)
    }

    /// Largest motif vertex count `m`.
    pub fn m_max(&self) -> usize {
        self.motifs.iter().map(Motif::m).max().unwrap_or(0)
    }

    /// Whether the family is in standard form with `H_1 = K_2`.
    pub fn starts_with_edge(&self) -> bool {
        self.motifs[0].is_single_edge()
    }
}

/// Deterministic stream of every graph on `n` vertices, in edge-subset
/// bitmask order (graph `k` has edge set with bits `k`).
#[derive(Clone, Debug)]
pub struct GraphStream {
    n: usize,
    next: u64,
    end: u64,
}

impl Iterator for GraphStream {
    type Item = SimpleGraph;

    fn next(&mut self) -> Option<SimpleGraph> {
        if self.next >= self.end {
            return None;
        }
        let g = SimpleGraph { n: self.n, edges: EdgeSubset(self.next as u128) };
        self.next += 1;
        Some(g)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.end - self.next) as usize;
        (left, Some(left))
    }
}

impl ExactSizeIterator for GraphStream {}

/// All `2^(n(n-1)/2)` graphs on `n` vertices; refuses `n` above
/// [`ENUMERATION_GUARD`].
pub fn enumerate_graphs(n: usize) -> Result<GraphStream> {
    enumerate_graphs_with(n, false)
}

/// As [`enumerate_graphs`]; `force` lifts the default guard up to
/// [`ENUMERATION_HARD_LIMIT`].
pub fn enumerate_graphs_with(n: usize, force: bool) -> Result<GraphStream> {
    check_vertex_count(n)?;
    let limit = if force { ENUMERATION_HARD_LIMIT } else { ENUMERATION_GUARD };
    if n > limit {
        return Err(Error::GuardExceeded { what: "graph enumeration vertex count", requested: n, limit });
    }
    Ok(GraphStream { n, next: 0, end: 1u64 << site_count(n) })
}

/// `|hom(H, G)|`: vertex maps `V(H) → V(G)` sending every edge of `H` to an
/// edge of `G`. Backtracking over the motif vertices with degree pruning
/// (a non-isolated motif vertex only lands on a non-isolated graph vertex).
pub fn hom_count(motif: &Motif, graph: &SimpleGraph) -> u128 {
    let n = graph.n();
    let adj = graph.adjacency();
    let all: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let nonisolated = adj
        .iter()
        .enumerate()
        .filter(|(_, &a)| a != 0)
        .fold(0u32, |acc, (v, _)| acc | 1 << v);
    let plan = motif.search_plan();
    let mut image = vec![0usize; motif.m()];

    fn go(depth: usize, plan: &[(usize, Vec<usize>)], adj: &[u32], base: u32, image: &mut [usize]) -> u128 {
        if depth == plan.len() {
            return 1;
        }
        let (v, earlier) = &plan[depth];
        let mut cand = base;
        for &u in earlier {
            cand &= adj[image[u]];
        }
        let mut total = 0;
        while cand != 0 {
            let c = cand.trailing_zeros() as usize;
            cand &= cand - 1;
            image[*v] = c;
            total += go(depth + 1, plan, adj, base, image);
        }
        total
    }

    let core = go(0, &plan, &adj, all & nonisolated, &mut image);
    core * (n as u128).pow(motif.isolated_count() as u32)
}

/// `t(H, G) = |hom(H, G)| / n^m` as an exact rational.
pub fn hom_density(motif: &Motif, graph: &SimpleGraph) -> BigRational {
    let num = BigInt::from(hom_count(motif, graph));
    BigRational::new(num, hom_denominator(motif, graph.n()))
}

/// `|hom(H, K_n)| = n^m`.
pub fn hom_denominator(motif: &Motif, n: usize) -> BigInt {
    num_traits::pow(BigInt::from(n), motif.m())
}

/// `T^β(G) = Σ β_i t(H_i, G)`; each exact density is converted to a float once.
pub fn weighted_density(model: &ErgmModel, graph: &SimpleGraph) -> f64 {
    model
        .motifs()
        .iter()
        .zip(model.betas().as_slice())
        .map(|(h, &b)| {
            if b == 0.0 {
                0.0
            } else {
                b * rational_to_f64(&hom_density(h, graph))
            }
        })
        .sum()
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    r.to_f64().unwrap_or_else(|| {
        // numerator/denominator too large for a direct conversion
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}
