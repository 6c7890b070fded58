//! The lattice-gas view of an ERGM.
//!
//! Every vertex pair of `K_n` is a site carrying an occupation variable
//! `σ_e ∈ {0,1}`. A homomorphism density decomposes over edge subsets,
//! `t(H, G) = Σ_X d(H, X) σ_X`, where the exact density `d(H, X)` counts the
//! homomorphisms whose edge image is precisely `X`. Weighting by `n²β_i` gives
//! the finite-body interaction `K(X)` and the Hamiltonian
//! `H(σ) = -Σ_X K(X) σ_X`.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::graph::{
    hom_denominator, rational_to_f64, site_count, sites, EdgeSite, EdgeSubset, ErgmModel, Motif,
    SimpleGraph, MAX_VERTICES,
};
use crate::numfmt;

/// `d(H, X) = |ehom(H, X)| / n^m`.
///
/// Maps the non-isolated motif vertices into the vertex set of `X`, keeps
/// those whose edge image is contained in `X` and covers it, then multiplies
/// by `n` for every isolated motif vertex.
pub fn exact_density(motif: &Motif, x: EdgeSubset, n: usize) -> Result<BigRational> {
    check_n(n)?;
    if !x.within(n) {
        return invalid(format!("{x:?} is not a subset of E_{n}"));
    }
    if x.is_empty() || x.len() > motif.p() {
        return Ok(BigRational::zero());
    }
    let targets: Vec<usize> = (0..MAX_VERTICES).filter(|v| x.vertex_mask() >> v & 1 == 1).collect();
    let plan: Vec<usize> = motif.search_plan().into_iter().map(|(v, _)| v).collect();
    let mut image = vec![usize::MAX; motif.m()];
    let mut count: u128 = 0;

    fn go(
        depth: usize,
        plan: &[usize],
        motif: &Motif,
        targets: &[usize],
        x: EdgeSubset,
        image: &mut [usize],
        count: &mut u128,
    ) {
        if depth == plan.len() {
            let mut covered = EdgeSubset::EMPTY;
            for &(a, b) in motif.edges() {
                // every edge is checked below, so endpoints differ
                covered.insert(EdgeSite::new(image[a], image[b]).unwrap());
            }
            if covered == x {
                *count += 1;
            }
            return;
        }
        let v = plan[depth];
        'cand: for &t in targets {
            image[v] = t;
            for &(a, b) in motif.edges() {
                let (u, w) = if a == v { (b, t) } else if b == v { (a, t) } else { continue };
                let iu = image[u];
                if iu == usize::MAX {
                    continue;
                }
                match EdgeSite::new(iu, w) {
                    Ok(site) if x.contains(site) => {}
                    _ => continue 'cand,
                }
            }
            go(depth + 1, plan, motif, targets, x, image, count);
        }
        image[v] = usize::MAX;
    }

    go(0, &plan, motif, &targets, x, &mut image, &mut count);
    let free = num_traits::pow(BigInt::from(n), motif.isolated_count());
    Ok(BigRational::new(BigInt::from(count) * free, hom_denominator(motif, n)))
}

/// The nonzero exact densities of one motif on `K_n`.
#[derive(Clone, Debug)]
pub struct SupportFamily {
    n: usize,
    entries: BTreeMap<EdgeSubset, BigRational>,
}

impl SupportFamily {
    /// Enumerates the homomorphisms `H → K_n` and groups them by edge image.
    pub fn new(motif: &Motif, n: usize) -> Result<Self> {
        check_n(n)?;
        let plan = motif.search_plan();
        let mut counts: HashMap<EdgeSubset, u128> = HashMap::new();
        let mut image = vec![0usize; motif.m()];

        fn go(
            depth: usize,
            plan: &[(usize, Vec<usize>)],
            n: usize,
            image: &mut [usize],
            acc: EdgeSubset,
            counts: &mut HashMap<EdgeSubset, u128>,
        ) {
            if depth == plan.len() {
                *counts.entry(acc).or_insert(0) += 1;
                return;
            }
            let (v, earlier) = &plan[depth];
            'cand: for t in 0..n {
                let mut next = acc;
                for &u in earlier {
                    match EdgeSite::new(image[u], t) {
                        Ok(site) => next.insert(site),
                        Err(_) => continue 'cand,
                    }
                }
                image[*v] = t;
                go(depth + 1, plan, n, image, next, counts);
            }
        }

        go(0, &plan, n, &mut image, EdgeSubset::EMPTY, &mut counts);
        let free = num_traits::pow(BigInt::from(n), motif.isolated_count());
        let denom = hom_denominator(motif, n);
        let entries = counts
            .into_iter()
            .map(|(x, c)| (x, BigRational::new(BigInt::from(c) * &free, denom.clone())))
            .collect();
        Ok(SupportFamily { n, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &BTreeMap<EdgeSubset, BigRational> {
        &self.entries
    }

    pub fn into_entries(self) -> BTreeMap<EdgeSubset, BigRational> {
        self.entries
    }

    pub fn density(&self, x: EdgeSubset) -> BigRational {
        self.entries.get(&x).cloned().unwrap_or_else(BigRational::zero)
    }

    /// `Σ_{X ⊆ E(G)} d(H, X)`.
    pub fn lattice_gas_density(&self, graph: &SimpleGraph) -> BigRational {
        let e = graph.edges();
        self.entries
            .iter()
            .filter(|(x, _)| x.is_subset_of(e))
            .fold(BigRational::zero(), |acc, (_, d)| acc + d)
    }

    /// `t_e(H, G) = Σ_{X: e ∈ X ⊆ E(G)} d(H, X)`.
    pub fn pinned(&self, graph: &SimpleGraph, site: EdgeSite) -> BigRational {
        let e = graph.edges();
        self.entries
            .iter()
            .filter(|(x, _)| x.contains(site) && x.is_subset_of(e))
            .fold(BigRational::zero(), |acc, (_, d)| acc + d)
    }

    /// `Σ_{X: e ∈ X ⊆ E_n} d(H, X)`, the pin used by the interaction norm.
    pub fn pinned_unrestricted(&self, site: EdgeSite) -> BigRational {
        self.entries
            .iter()
            .filter(|(x, _)| x.contains(site))
            .fold(BigRational::zero(), |acc, (_, d)| acc + d)
    }
}

/// All `X` with `d(H, X) ≠ 0` on `K_n`, with their exact densities.
pub fn support_families(motif: &Motif, n: usize) -> Result<BTreeMap<EdgeSubset, BigRational>> {
    Ok(SupportFamily::new(motif, n)?.into_entries())
}

/// Both sides of the lattice-gas representation: `(t(H, G), Σ_{X ⊆ E(G)} d(H, X))`.
pub fn representation_sides(motif: &Motif, graph: &SimpleGraph) -> Result<(BigRational, BigRational)> {
    let family = SupportFamily::new(motif, graph.n())?;
    Ok((crate::graph::hom_density(motif, graph), family.lattice_gas_density(graph)))
}

/// Whether `t(H, G) = Σ_{X ⊆ E(G)} d(H, X)` holds exactly.
pub fn representation_check(motif: &Motif, graph: &SimpleGraph) -> Result<bool> {
    let (lhs, rhs) = representation_sides(motif, graph)?;
    Ok(lhs == rhs)
}

/// `t_e(H, G)`, the exact densities of subsets of `E(G)` that contain `e`.
pub fn pinned_density(motif: &Motif, graph: &SimpleGraph, site: EdgeSite) -> Result<BigRational> {
    check_site(site, graph.n())?;
    Ok(SupportFamily::new(motif, graph.n())?.pinned(graph, site))
}

/// The pinned sum over all `X ∋ e` in `E_n`, not restricted to a graph.
pub fn pinned_density_unrestricted(motif: &Motif, n: usize, site: EdgeSite) -> Result<BigRational> {
    check_site(site, n)?;
    Ok(SupportFamily::new(motif, n)?.pinned_unrestricted(site))
}

/// Universal bound `m(m-1)/n²` on every pinned density.
pub fn pinned_bound(motif: &Motif, n: usize) -> BigRational {
    let m = motif.m() as i64;
    BigRational::new(BigInt::from(m * (m - 1)), BigInt::from((n * n) as i64))
}

/// The sparse interaction `K(X) = n² Σ_i β_i d(H_i, X)`.
///
/// Only nonzero values are stored, and no key has more than `p_max` sites.
#[derive(Clone, Debug, PartialEq)]
pub struct Interaction {
    n: usize,
    p_max: usize,
    entries: BTreeMap<EdgeSubset, f64>,
}

/// One record of the interaction dump: `{"sites": [[i,j],...], "value": K}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct InteractionEntry {
    pub sites: EdgeSubset,
    #[serde(with = "numfmt::f64_17")]
    pub value: f64,
}

impl Interaction {
    /// Builds an interaction directly from its nonzero values.
    pub fn from_entries(
        n: usize,
        p_max: usize,
        entries: impl IntoIterator<Item = (EdgeSubset, f64)>,
    ) -> Result<Self> {
        check_n(n)?;
        let mut map = BTreeMap::new();
        for (x, v) in entries {
            if x.is_empty() {
                return invalid("interaction keys must be nonempty");
            }
            if !x.within(n) {
                return invalid(format!("{x:?} is not a subset of E_{n}"));
            }
            if x.len() > p_max {
                return invalid(format!("{x:?} has more than p = {p_max} sites"));
            }
            if !v.is_finite() {
                return invalid(format!("non-finite interaction value at {x:?}"));
            }
            if v != 0.0 {
                map.insert(x, v);
            }
        }
        Ok(Interaction { n, p_max, entries: map })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p_max(&self) -> usize {
        self.p_max
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, x: EdgeSubset) -> f64 {
        self.entries.get(&x).copied().unwrap_or(0.0)
    }

    /// Nonzero links in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = (EdgeSubset, f64)> + '_ {
        self.entries.iter().map(|(&x, &v)| (x, v))
    }

    /// `Σ_{X ∋ e} |K(X)|`.
    pub fn pinned_abs_sum(&self, site: EdgeSite) -> f64 {
        self.entries
            .iter()
            .filter(|(x, _)| x.contains(site))
            .map(|(_, v)| v.abs())
            .sum()
    }

    /// `‖K‖ = sup_e Σ_{X ∋ e} |K(X)|`, taken over every site of `E_n`.
    pub fn banach_norm(&self) -> f64 {
        sites(self.n).map(|e| self.pinned_abs_sum(e)).fold(0.0, f64::max)
    }

    /// `Σ_X K(X) σ_X` over the occupied set.
    pub fn energy_gain(&self, occupied: EdgeSubset) -> f64 {
        self.entries
            .iter()
            .filter(|(x, _)| x.is_subset_of(occupied))
            .map(|(_, v)| v)
            .sum()
    }

    pub fn scaled(&self, t: f64) -> Interaction {
        Interaction {
            n: self.n,
            p_max: self.p_max,
            entries: self
                .entries
                .iter()
                .map(|(&x, &v)| (x, v * t))
                .filter(|(_, v)| *v != 0.0)
                .collect(),
        }
    }

    pub fn dump(&self) -> Vec<InteractionEntry> {
        self.iter().map(|(sites, value)| InteractionEntry { sites, value }).collect()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.dump())?)
    }

    /// Re-reads a dump; `p_max` is taken as the largest key size unless given.
    pub fn from_dump(n: usize, p_max: Option<usize>, dump: &[InteractionEntry]) -> Result<Self> {
        let p = p_max.unwrap_or_else(|| dump.iter().map(|e| e.sites.len()).max().unwrap_or(0));
        Self::from_entries(n, p, dump.iter().map(|e| (e.sites, e.value)))
    }
}

/// `K(X) = n² Σ_i β_i d(H_i, X)`.
///
/// `n² d(H_i, X)` is formed exactly and rounded once; the weighting by the
/// real `β_i` and the sum over motifs happen in floating point.
pub fn build_interaction(model: &ErgmModel, n: usize) -> Result<Interaction> {
    check_n(n)?;
    let n2 = BigRational::from_integer(BigInt::from((n * n) as u64));
    let mut values: BTreeMap<EdgeSubset, f64> = BTreeMap::new();
    for (motif, &beta) in model.motifs().iter().zip(model.betas().as_slice()) {
        if beta == 0.0 {
            continue;
        }
        for (x, d) in SupportFamily::new(motif, n)?.into_entries() {
            let scaled = rational_to_f64(&(&n2 * d));
            *values.entry(x).or_insert(0.0) += beta * scaled;
        }
    }
    Interaction::from_entries(n, model.p_max(), values)
}

/// Occupation numbers `σ_e` for every site of `E_n`, equivalently the graph
/// whose edge set is the occupied sites.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SpinConfiguration {
    n: usize,
    occupied: EdgeSubset,
}

impl SpinConfiguration {
    pub fn from_graph(graph: &SimpleGraph) -> Self {
        SpinConfiguration { n: graph.n(), occupied: graph.edges() }
    }

    pub fn from_occupied(n: usize, occupied: EdgeSubset) -> Result<Self> {
        check_n(n)?;
        if !occupied.within(n) {
            return invalid(format!("{occupied:?} is not a subset of E_{n}"));
        }
        Ok(SpinConfiguration { n, occupied })
    }

    pub fn all_vacant(n: usize) -> Result<Self> {
        Self::from_occupied(n, EdgeSubset::EMPTY)
    }

    pub fn all_occupied(n: usize) -> Result<Self> {
        Self::from_occupied(n, EdgeSubset::full(n))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn occupied(&self) -> EdgeSubset {
        self.occupied
    }

    pub fn value(&self, site: EdgeSite) -> u8 {
        self.occupied.contains(site) as u8
    }

    /// `σ_X = Π_{e ∈ X} σ_e`.
    pub fn product(&self, x: EdgeSubset) -> u8 {
        x.is_subset_of(self.occupied) as u8
    }

    pub fn to_graph(&self) -> SimpleGraph {
        // occupied ⊆ E_n was checked on construction
        SimpleGraph::from_subset(self.n, self.occupied).unwrap()
    }
}

/// `H(σ) = -Σ_X K(X) σ_X`.
pub fn hamiltonian(interaction: &Interaction, sigma: &SpinConfiguration) -> Result<f64> {
    if interaction.n() != sigma.n() {
        return invalid(format!(
            "interaction on {} vertices, configuration on {}",
            interaction.n(),
            sigma.n()
        ));
    }
    Ok(-interaction.energy_gain(sigma.occupied()))
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 || n > MAX_VERTICES {
        return invalid(format!("vertex count {n} outside 1..={MAX_VERTICES}"));
    }
    Ok(())
}

fn check_site(site: EdgeSite, n: usize) -> Result<()> {
    if site.index() >= site_count(n) {
        return invalid(format!("site {site} is not in E_{n}"));
    }
    Ok(())
}
