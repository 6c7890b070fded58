//! Truncated cluster expansion of `log W`.
//!
//! Activities are split by link count, `w_N = Σ_L w_N^{(L)}`, and the
//! expansion is regrouped by the total link count of a cluster. A term of
//! order `L` is then `O(K^L)`, so the partial sums behave like a power series
//! in the interaction strength.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::polymer::PolymerSet;
use super::ursell::{check_size, overlap_adjacency, UrsellCache};
use crate::error::{invalid, Error, Result};
use crate::graph::EdgeSubset;
use crate::lattice::Interaction;
use crate::numeric::CompensatedSum;
use crate::numfmt;

/// Largest expansion order accepted.
pub const ORDER_GUARD: usize = 8;

/// Maximum number of multisets examined in one series evaluation.
pub const MULTISET_LIMIT: usize = 200_000_000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrderTerm {
    pub order: usize,
    #[serde(with = "numfmt::f64_17")]
    pub term: f64,
    #[serde(with = "numfmt::f64_17")]
    pub partial_sum: f64,
}

/// Per-order terms and cumulative sums of the expansion.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogSeries {
    pub orders: Vec<OrderTerm>,
}

impl LogSeries {
    pub fn partial_sum(&self, order: usize) -> Option<f64> {
        self.orders.iter().find(|t| t.order == order).map(|t| t.partial_sum)
    }

    pub fn last(&self) -> Option<f64> {
        self.orders.last().map(|t| t.partial_sum)
    }
}

#[derive(Clone, Copy, Debug)]
struct Item {
    support: EdgeSubset,
    grade: usize,
    weight: f64,
}

/// Walks multisets of `items` (indices nondecreasing), handing each
/// connected one with its `Ursell / Π mult!` factor to `sink`.
struct MultisetWalk<'a> {
    items: &'a [Item],
    max_grade: usize,
    max_size: usize,
    cache: &'a UrsellCache,
    visits: usize,
    chosen: Vec<usize>,
}

impl MultisetWalk<'_> {
    fn run<F: FnMut(&[usize], f64)>(&mut self, start: usize, grade: usize, sink: &mut F) -> Result<()> {
        self.visits += 1;
        if self.visits > MULTISET_LIMIT {
            return Err(Error::GuardExceeded {
                what: "cluster multisets",
                requested: self.visits,
                limit: MULTISET_LIMIT,
            });
        }
        if !self.chosen.is_empty() {
            let supports: Vec<EdgeSubset> = self.chosen.iter().map(|&i| self.items[i].support).collect();
            let adj = overlap_adjacency(&supports);
            if super::ursell::is_connected(&adj) {
                let c = self.cache.get(&adj);
                if c != 0 {
                    sink(&self.chosen, c as f64 / multiplicity_factorials(&self.chosen));
                }
            }
        }
        if self.chosen.len() == self.max_size {
            return Ok(());
        }
        for i in start..self.items.len() {
            let g = grade + self.items[i].grade;
            if g > self.max_grade {
                // items are sorted by grade
                break;
            }
            self.chosen.push(i);
            let res = self.run(i, g, sink);
            self.chosen.pop();
            res?;
        }
        Ok(())
    }
}

fn multiplicity_factorials(sorted: &[usize]) -> f64 {
    let mut out = 1.0;
    let mut run = 1.0;
    for w in sorted.windows(2) {
        if w[0] == w[1] {
            run += 1.0;
            out *= run;
        } else {
            run = 1.0;
        }
    }
    out
}

/// Sums over multisets whose first element is each item in turn, in
/// parallel, merging per-item results in item order.
fn parallel_walk<F>(items: &[Item], max_grade: usize, max_size: usize, buckets: usize, f: F) -> Result<Vec<f64>>
where
    F: Fn(&[usize], f64) -> Option<(usize, f64)> + Sync,
{
    let cache = UrsellCache::new();
    let per_first: Vec<Result<Vec<CompensatedSum>>> = (0..items.len())
        .into_par_iter()
        .map(|first| {
            let mut sums = vec![CompensatedSum::new(); buckets];
            if items[first].grade > max_grade {
                return Ok(sums);
            }
            let mut walk = MultisetWalk {
                items,
                max_grade,
                max_size,
                cache: &cache,
                visits: 0,
                chosen: vec![first],
            };
            let mut sink = |chosen: &[usize], factor: f64| {
                if let Some((bucket, value)) = f(chosen, factor) {
                    sums[bucket].add(value);
                }
            };
            walk.run(first, items[first].grade, &mut sink)?;
            Ok(sums)
        })
        .collect();
    let mut totals = vec![CompensatedSum::new(); buckets];
    for sums in per_first {
        for (t, s) in totals.iter_mut().zip(sums?) {
            t.add(s.value());
        }
    }
    Ok(totals.iter().map(CompensatedSum::value).collect())
}

fn check_order(order: usize) -> Result<()> {
    if order > ORDER_GUARD {
        return Err(Error::GuardExceeded { what: "expansion order", requested: order, limit: ORDER_GUARD });
    }
    Ok(())
}

/// Partial sums of `log W` through total link count `1..=order`, using
/// polymers from hypergraphs with at most `max_links` links. With
/// `max_links >= order` every term up to `order` is complete.
pub fn truncated_log_partition(k: &Interaction, order: usize, max_links: usize) -> Result<LogSeries> {
    check_order(order)?;
    if order == 0 {
        return invalid("expansion order must be at least 1");
    }
    let polymers = PolymerSet::build(k, max_links.min(order))?;
    let mut items: Vec<Item> = polymers
        .graded_parts()
        .into_iter()
        .map(|(support, grade, weight)| Item { support, grade, weight })
        .collect();
    items.sort_by(|a, b| a.grade.cmp(&b.grade).then(a.support.cmp(&b.support)));
    let terms = parallel_walk(&items, order, order, order + 1, |chosen, factor| {
        let grade: usize = chosen.iter().map(|&i| items[i].grade).sum();
        let prod: f64 = chosen.iter().map(|&i| items[i].weight).product();
        Some((grade, factor * prod))
    })?;
    let mut running = CompensatedSum::new();
    let orders = (1..=order)
        .map(|o| {
            running.add(terms[o]);
            OrderTerm { order: o, term: terms[o], partial_sum: running.value() }
        })
        .collect();
    Ok(LogSeries { orders })
}

/// `Σ (1/n!) Σ_{N_1..N_n ∋ target} |C| |w_{N_1}| ⋯ |w_{N_n}|` over tuples of at
/// most `max_polymers` polymers built from at most `max_links` links.
pub fn pinned_cluster_sum(
    k: &Interaction,
    target: EdgeSubset,
    max_polymers: usize,
    max_links: usize,
) -> Result<f64> {
    check_size(max_polymers)?;
    let polymers = PolymerSet::build(k, max_links)?.polymers();
    let mut items: Vec<Item> = polymers
        .iter()
        .map(|p| Item { support: p.support, grade: 1, weight: p.activity.abs() })
        .collect();
    items.sort_by(|a, b| a.support.cmp(&b.support));
    let Some(first_target) = items.iter().position(|it| it.support == target) else {
        return Ok(0.0);
    };
    let total = parallel_walk(&items, max_polymers, max_polymers, 1, |chosen, factor| {
        if !chosen.contains(&first_target) {
            return None;
        }
        let prod: f64 = chosen.iter().map(|&i| items[i].weight).product();
        Some((0, factor.abs() * prod))
    })?;
    Ok(total[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensemble::partition_normalized;
    use crate::expansion::polymer::activity_bound;
    use crate::graph::{site_count, EdgeSite, ErgmModel, Motif, ParameterVector};
    use crate::lattice::build_interaction;

    fn model_k(model: &ErgmModel, n: usize) -> Interaction {
        build_interaction(model, n).unwrap()
    }

    #[test]
    fn edge_only_first_order() {
        let beta = 0.05;
        let n = 4;
        let k = model_k(&ErgmModel::single(Motif::edge(), beta).unwrap(), n);
        let s = truncated_log_partition(&k, 1, 1).unwrap();
        let expected = site_count(n) as f64 * 0.5 * (2.0 * beta).exp_m1();
        assert!((s.orders[0].partial_sum - expected).abs() < 1e-15);
    }

    #[test]
    fn edge_only_matches_log1p_series() {
        // log W = C(n,2) log(1 + w) with w = (e^{2β} - 1)/2; only single-link
        // polymers exist, so order L is the w^L Taylor term.
        let beta = 0.05;
        let n = 4;
        let k = model_k(&ErgmModel::single(Motif::edge(), beta).unwrap(), n);
        let s = truncated_log_partition(&k, 5, 5).unwrap();
        let w = 0.5 * (2.0 * beta).exp_m1();
        let mut partial = 0.0;
        for (l, t) in s.orders.iter().enumerate() {
            let l = l + 1;
            let sign = if l % 2 == 1 { 1.0 } else { -1.0 };
            partial += site_count(n) as f64 * sign * w.powi(l as i32) / l as f64;
            assert!((t.partial_sum - partial).abs() < 1e-15, "order {l}");
        }
    }

    #[test]
    fn zero_interaction_gives_zero() {
        let k = Interaction::from_entries(4, 2, []).unwrap();
        let s = truncated_log_partition(&k, 3, 3).unwrap();
        assert!(s.orders.iter().all(|t| t.partial_sum == 0.0));
    }

    #[test]
    fn two_star_gaps_shrink() {
        let k = model_k(&ErgmModel::single(Motif::two_star(), 0.002).unwrap(), 4);
        let exact = partition_normalized(&k).unwrap();
        let s = truncated_log_partition(&k, 4, 4).unwrap();
        let gaps: Vec<f64> = s.orders.iter().map(|t| (t.partial_sum - exact).abs()).collect();
        for w in gaps.windows(2) {
            assert!(w[1] < w[0], "{gaps:?}");
        }
        assert!(gaps[3] < 1e-12, "{gaps:?}");
    }

    #[test]
    fn mixed_model_converges_at_n3() {
        let model =
            ErgmModel::new(vec![Motif::edge(), Motif::triangle()], ParameterVector(vec![0.01, -0.01])).unwrap();
        let k = model_k(&model, 3);
        let exact = partition_normalized(&k).unwrap();
        let s = truncated_log_partition(&k, 6, 6).unwrap();
        assert!((s.last().unwrap() - exact).abs() < 1e-13);
    }

    #[test]
    fn guards() {
        let k = Interaction::from_entries(4, 2, []).unwrap();
        assert!(matches!(truncated_log_partition(&k, ORDER_GUARD + 1, 2), Err(Error::GuardExceeded { .. })));
        assert!(truncated_log_partition(&k, 0, 2).is_err());
    }

    #[test]
    fn multiplicities() {
        assert_eq!(multiplicity_factorials(&[0, 0, 0, 1, 2, 2]), 12.0);
        assert_eq!(multiplicity_factorials(&[3]), 1.0);
    }

    #[test]
    fn pinned_sum_respects_kp_bound_for_small_coupling() {
        let k = model_k(&ErgmModel::single(Motif::two_star(), 0.001).unwrap(), 4);
        let m_base = 1.44;
        for idx in 0..site_count(4) {
            let target = EdgeSubset::singleton(EdgeSite::from_index(idx));
            let pinned = pinned_cluster_sum(&k, target, 3, 2).unwrap();
            let v = activity_bound(&k, target, 2).unwrap();
            assert!(pinned > 0.0);
            assert!(pinned <= v * m_base, "{pinned} > {}", v * m_base);
        }
    }
}
