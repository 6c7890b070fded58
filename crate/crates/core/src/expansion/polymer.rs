//! Polymer activities `w_N`, their bounds `v_N`, and the cluster
//! representation `W = Σ_Δ Π w_N` over collections of disjoint polymers.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::hypergraph::LinkGraph;
use crate::error::{invalid, Error, Result};
use crate::graph::{site_count, EdgeSubset};
use crate::lattice::Interaction;
use crate::numeric::CompensatedSum;
use crate::numfmt;

/// Largest site count for [`cluster_representation_sum`].
pub const REPRESENTATION_SITE_LIMIT: usize = 21;

/// A support `N` with its activity and the activity bound.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Polymer {
    pub support: EdgeSubset,
    #[serde(with = "numfmt::f64_17")]
    pub activity: f64,
    #[serde(with = "numfmt::f64_17")]
    pub activity_bound: f64,
}

/// Contribution of one connected hypergraph with support `N` to `w_N`.
///
/// Only the configuration with every site of `N` occupied survives the
/// normalized spin sum: any vacant site empties some link's factor.
fn hypergraph_activity(values: impl Iterator<Item = f64>, support: EdgeSubset) -> f64 {
    let prod: f64 = values.map(f64::exp_m1).product();
    prod * 0.5f64.powi(support.len() as i32)
}

fn hypergraph_bound(values: impl Iterator<Item = f64>) -> f64 {
    values.map(|k| k.abs().exp_m1()).product()
}

/// Polymers keyed by support, each activity split by the number of links
/// of the contributing hypergraphs.
#[derive(Clone, Debug)]
pub struct PolymerSet {
    max_links: usize,
    // support -> (per link count activity, bound summed over link counts)
    graded: BTreeMap<EdgeSubset, (Vec<f64>, f64)>,
}

impl PolymerSet {
    /// Every support realized by a connected hypergraph with at most
    /// `max_links` links of `K`.
    pub fn build(k: &Interaction, max_links: usize) -> Result<Self> {
        let graph = LinkGraph::from_interaction(k);
        let links = graph.links();
        let mut acc: BTreeMap<EdgeSubset, (Vec<CompensatedSum>, CompensatedSum)> = BTreeMap::new();
        graph.visit(max_links, |idx, support| {
            let values = || idx.iter().map(|&i| links[i].1);
            let entry = acc
                .entry(support)
                .or_insert_with(|| (vec![CompensatedSum::new(); max_links], CompensatedSum::new()));
            entry.0[idx.len() - 1].add(hypergraph_activity(values(), support));
            entry.1.add(hypergraph_bound(values()));
        })?;
        let graded = acc
            .into_iter()
            .map(|(n, (ws, v))| (n, (ws.iter().map(CompensatedSum::value).collect(), v.value())))
            .collect();
        Ok(PolymerSet { max_links, graded })
    }

    pub fn max_links(&self) -> usize {
        self.max_links
    }

    pub fn len(&self) -> usize {
        self.graded.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graded.is_empty()
    }

    /// Polymers in canonical support order.
    pub fn polymers(&self) -> Vec<Polymer> {
        self.graded
            .iter()
            .map(|(&support, (ws, v))| Polymer {
                support,
                activity: ws.iter().copied().collect::<CompensatedSum>().value(),
                activity_bound: *v,
            })
            .collect()
    }

    /// `(support, link count, activity part)` for every nonzero graded part.
    pub fn graded_parts(&self) -> Vec<(EdgeSubset, usize, f64)> {
        self.graded
            .iter()
            .flat_map(|(&n, (ws, _))| {
                ws.iter().enumerate().filter(|(_, w)| **w != 0.0).map(move |(l, &w)| (n, l + 1, w))
            })
            .collect()
    }
}

fn restricted_sum(
    k: &Interaction,
    support: EdgeSubset,
    max_links: usize,
    term: impl Fn(&[usize], &LinkGraph) -> f64,
) -> Result<f64> {
    if support.is_empty() {
        return invalid("polymer support must be nonempty");
    }
    if !support.within(k.n()) {
        return invalid(format!("support {support:?} lies outside E_{}", k.n()));
    }
    let graph = LinkGraph::restricted(k, support);
    let mut sum = CompensatedSum::new();
    graph.visit(max_links, |idx, s| {
        if s == support {
            sum.add(term(idx, &graph));
        }
    })?;
    Ok(sum.value())
}

/// `w_N`: sum over connected hypergraphs with at most `max_links` links and
/// support exactly `N`.
pub fn polymer_activity(k: &Interaction, support: EdgeSubset, max_links: usize) -> Result<f64> {
    restricted_sum(k, support, max_links, |idx, g| {
        hypergraph_activity(idx.iter().map(|&i| g.links()[i].1), support)
    })
}

/// `v_N`, the same sum with every factor replaced by `e^{|K(X)|} - 1`.
pub fn activity_bound(k: &Interaction, support: EdgeSubset, max_links: usize) -> Result<f64> {
    restricted_sum(k, support, max_links, |idx, g| {
        hypergraph_bound(idx.iter().map(|&i| g.links()[i].1))
    })
}

/// `Σ_Δ Π_{N∈Δ} w_N` over all collections of pairwise disjoint polymers on
/// the `C(n,2)` sites. With complete activities this is `W`.
pub fn cluster_representation_sum(polymers: &[Polymer], n: usize) -> Result<f64> {
    let sites = site_count(n);
    if sites > REPRESENTATION_SITE_LIMIT {
        return Err(Error::GuardExceeded {
            what: "cluster representation sites",
            requested: sites,
            limit: REPRESENTATION_SITE_LIMIT,
        });
    }
    let full = EdgeSubset::full(n).bits() as usize;
    let mut by_low: Vec<Vec<(usize, f64)>> = vec![Vec::new(); sites];
    for p in polymers {
        if p.support.is_empty() || !p.support.within(n) {
            return invalid(format!("polymer support {:?} is not a nonempty subset of E_{n}", p.support));
        }
        let bits = p.support.bits() as usize;
        by_low[bits.trailing_zeros() as usize].push((bits, p.activity));
    }
    // f[S] = sum over disjoint collections inside S
    let mut f = vec![0.0f64; full + 1];
    f[0] = 1.0;
    for s in 1..=full {
        let low = s.trailing_zeros() as usize;
        let mut acc = CompensatedSum::new();
        acc.add(f[s & (s - 1)]);
        for &(bits, w) in &by_low[low] {
            if bits & !s == 0 {
                acc.add(w * f[s & !bits]);
            }
        }
        f[s] = acc.value();
    }
    Ok(f[full])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensemble::partition_normalized;
    use crate::expansion::hypergraph::enumerate_connected_hypergraphs;
    use crate::graph::{EdgeSite, ErgmModel, Motif, ParameterVector};
    use crate::lattice::build_interaction;
    use proptest::prelude::*;

    fn site(a: usize, b: usize) -> EdgeSite {
        EdgeSite::new(a, b).unwrap()
    }

    fn two_star(beta: f64) -> Interaction {
        build_interaction(&ErgmModel::single(Motif::two_star(), beta).unwrap(), 4).unwrap()
    }

    /// Explicit normalized spin sum over `σ|N` for one hypergraph.
    fn spin_sum_oracle(links: &[(EdgeSubset, f64)], support: EdgeSubset) -> f64 {
        let sites: Vec<EdgeSite> = support.iter().collect();
        let mut total = 0.0;
        for mask in 0u32..1 << sites.len() {
            let occupied = EdgeSubset::from_sites(
                sites.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, s)| *s),
            );
            let prod: f64 = links
                .iter()
                .map(|&(x, k)| if x.is_subset_of(occupied) { k.exp() - 1.0 } else { 0.0 })
                .product();
            total += prod;
        }
        total / f64::from(1u32 << sites.len())
    }

    #[test]
    fn single_link_activity() {
        let k = two_star(0.3);
        let ab = EdgeSubset::singleton(site(0, 1));
        let kv = k.get(ab);
        let w = polymer_activity(&k, ab, 4).unwrap();
        let v = activity_bound(&k, ab, 4).unwrap();
        assert!((w - 0.5 * kv.exp_m1()).abs() < 1e-15);
        assert!((v - kv.abs().exp_m1()).abs() < 1e-15);
        assert!(w.abs() <= v);
    }

    #[test]
    fn zero_interaction_has_no_activity() {
        let k = Interaction::from_entries(4, 2, []).unwrap();
        let n = EdgeSubset::from_sites([site(0, 1), site(1, 2)]);
        assert_eq!(polymer_activity(&k, n, 4).unwrap(), 0.0);
        assert_eq!(activity_bound(&k, n, 4).unwrap(), 0.0);
        assert!(PolymerSet::build(&k, 4).unwrap().is_empty());
    }

    #[test]
    fn adjacent_pair_matches_hypergraph_spin_sums() {
        let k = two_star(0.7);
        let n = EdgeSubset::from_sites([site(0, 1), site(1, 2)]);
        let mut oracle = 0.0;
        for h in enumerate_connected_hypergraphs(&k, 3, None).unwrap() {
            if h.support() == n {
                let links: Vec<(EdgeSubset, f64)> = h.links().iter().map(|&x| (x, k.get(x))).collect();
                oracle += spin_sum_oracle(&links, n);
            }
        }
        let w = polymer_activity(&k, n, 3).unwrap();
        assert!((w - oracle).abs() < 1e-14, "{w} vs {oracle}");
        // {pair}, {pair, AB}, {pair, BC}, {pair, AB, BC}; the two singletons alone share no site
        let kp = k.get(n);
        let ks = k.get(EdgeSubset::singleton(site(0, 1)));
        let e = |x: f64| x.exp_m1();
        let closed = 0.25 * e(kp) * (1.0 + e(ks)).powi(2);
        assert!((w - closed).abs() < 1e-14);
    }

    #[test]
    fn polymer_set_agrees_with_direct_activity() {
        let k = two_star(0.2);
        let set = PolymerSet::build(&k, 3).unwrap();
        for p in set.polymers() {
            let w = polymer_activity(&k, p.support, 3).unwrap();
            let v = activity_bound(&k, p.support, 3).unwrap();
            assert!((p.activity - w).abs() <= 1e-15 * (1.0 + w.abs()));
            assert!((p.activity_bound - v).abs() <= 1e-15 * (1.0 + v));
        }
    }

    #[test]
    fn representation_reproduces_partition_function() {
        let models = [
            ErgmModel::single(Motif::edge(), 0.2).unwrap(),
            ErgmModel::single(Motif::two_star(), -0.1).unwrap(),
            ErgmModel::new(vec![Motif::edge(), Motif::triangle()], ParameterVector(vec![0.1, -0.2])).unwrap(),
        ];
        for model in &models {
            for n in 3..=4 {
                let k = build_interaction(model, n).unwrap();
                let set = PolymerSet::build(&k, k.len()).unwrap();
                let w = cluster_representation_sum(&set.polymers(), n).unwrap();
                let exact = partition_normalized(&k).unwrap().exp();
                assert!((w - exact).abs() < 1e-12, "n={n}: {w} vs {exact}");
            }
        }
    }

    #[test]
    fn representation_rejects_bad_support() {
        let p = Polymer { support: EdgeSubset::singleton(site(0, 5)), activity: 0.1, activity_bound: 0.1 };
        assert!(cluster_representation_sum(&[p], 4).is_err());
        assert!(cluster_representation_sum(&[], 8).is_err());
    }

    proptest! {
        #[test]
        fn activity_is_dominated(b1 in -0.5f64..0.5, b2 in -0.5f64..0.5, b3 in -0.5f64..0.5) {
            let model = ErgmModel::new(
                vec![Motif::edge(), Motif::two_star(), Motif::triangle()],
                ParameterVector(vec![b1, b2, b3]),
            ).unwrap();
            let k = build_interaction(&model, 4).unwrap();
            for p in PolymerSet::build(&k, 3).unwrap().polymers() {
                prop_assert!(p.activity.abs() <= p.activity_bound * (1.0 + 1e-12));
            }
        }
    }
}
