//! Certification of the reduced Kotecký-Preiss condition
//! `Σ_{N ∋ e} v_N M^{|N|} ≤ log M` at every edge site.
//!
//! The per-site sum is split by the number of links of the contributing
//! hypergraphs. Hypergraphs with at most `head_links` links are enumerated
//! and contribute exactly `M^{|∪Γ|} Π (e^{|K(X)|} − 1)`. The rest is bounded
//! by `Σ_{n > head_links} ā_n`, the rooted-hypergraph majorant.

use serde::{Deserialize, Serialize};

use super::coefficients::{CoefficientTable, TailBound};
use super::hypergraph::LinkGraph;
use super::region::NORM_CAP;
use crate::error::{invalid, Result};
use crate::graph::{site_count, EdgeSite};
use crate::lattice::Interaction;
use crate::numeric::CompensatedSum;
use crate::numfmt;

/// Exact `ā_n` terms summed before switching to the geometric remainder.
pub const TAIL_TABLE_LEN: usize = 60;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KpVerdict {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FailReason {
    /// `‖K‖` above the cap used to linearize `e^{|K|} − 1`.
    NormAboveCap {
        #[serde(with = "numfmt::f64_17")]
        norm: f64,
    },
    /// `Σ ā_n` diverges at this norm.
    TailDivergent {
        #[serde(with = "numfmt::f64_17")]
        ratio: f64,
    },
    SiteSumExceeded {
        site: EdgeSite,
        #[serde(with = "numfmt::f64_17")]
        sum: f64,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SiteSum {
    pub site: EdgeSite,
    #[serde(with = "numfmt::f64_17")]
    pub head: f64,
    #[serde(with = "numfmt::f64_17")]
    pub total: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KpCertificate {
    #[serde(rename = "M", with = "numfmt::f64_17")]
    pub m_base: f64,
    #[serde(rename = "logM", with = "numfmt::f64_17")]
    pub log_m: f64,
    /// Norm used for the tail (at least the measured `‖K‖`).
    #[serde(with = "numfmt::f64_17")]
    pub norm: f64,
    pub p: usize,
    /// Hypergraphs with more links than this are covered by the tail.
    pub tail_order: usize,
    /// True when no connected hypergraph has more than `tail_order` links,
    /// so the head is the whole sum.
    pub exhausted: bool,
    #[serde(with = "numfmt::f64_17")]
    pub tail: f64,
    pub per_site_sums: Vec<SiteSum>,
    #[serde(with = "numfmt::f64_17")]
    pub max_site_sum: f64,
    pub verdict: KpVerdict,
    pub reason: Option<FailReason>,
}

impl KpCertificate {
    pub fn passed(&self) -> bool {
        self.verdict == KpVerdict::Pass
    }

    pub fn site_sum(&self, site: EdgeSite) -> Option<f64> {
        self.per_site_sums.iter().find(|s| s.site == site).map(|s| s.total)
    }
}

/// Enumerated head sums per site, and whether the enumeration was complete.
fn head_sums(k: &Interaction, m_base: f64, head_links: usize) -> Result<(Vec<f64>, bool)> {
    let graph = LinkGraph::from_interaction(k);
    let links = graph.links();
    let mut sums = vec![CompensatedSum::new(); site_count(k.n())];
    let mut saturated = false;
    graph.visit(head_links, |idx, support| {
        if idx.len() == head_links {
            saturated = true;
        }
        let weight: f64 = idx.iter().map(|&i| links[i].1.abs().exp_m1()).product::<f64>()
            * m_base.powi(support.len() as i32);
        for site in support.iter() {
            sums[site.index()].add(weight);
        }
    })?;
    // a connected set of h + 1 links always contains one of h links
    let exhausted = !saturated && (head_links > 0 || k.is_empty());
    Ok((sums.iter().map(CompensatedSum::value).collect(), exhausted))
}

/// `Σ_{n > head} ā_n`, or `None` when it diverges.
fn tail_sum(p: usize, norm: f64, m_base: f64, head: usize) -> Result<Option<f64>> {
    let len = TAIL_TABLE_LEN.max(head + 1);
    let table = CoefficientTable::new(p, norm, m_base, len)?;
    let c = table.c();
    let remainder = if p == 1 {
        // ā_n = cⁿ exactly
        if c >= 1.0 {
            return Ok(None);
        }
        c.powi(len as i32 + 1) / (1.0 - c)
    } else {
        let bound = TailBound::new(p, norm, m_base)?;
        if !bound.converges() {
            return Ok(None);
        }
        bound.tail(len)
    };
    let mut sum = CompensatedSum::new();
    for n in head + 1..=len {
        sum.add(table.abar(n));
    }
    sum.add(remainder);
    Ok(Some(sum.value()))
}

/// Certificate using the measured norm `‖K‖`.
pub fn kp_certify(k: &Interaction, m_base: f64, head_links: usize) -> Result<KpCertificate> {
    kp_certify_with_norm(k, m_base, head_links, k.banach_norm())
}

/// Certificate whose tail uses `norm`, which must dominate `‖K‖` (for
/// instance the family bound `m(m−1)Σ|β_i|`).
pub fn kp_certify_with_norm(k: &Interaction, m_base: f64, head_links: usize, norm: f64) -> Result<KpCertificate> {
    if !(m_base.is_finite() && m_base > 1.0) {
        return invalid(format!("M must be finite and > 1, got {m_base}"));
    }
    let measured = k.banach_norm();
    if !(norm.is_finite() && norm >= measured * (1.0 - 1e-12)) {
        return invalid(format!("norm {norm} does not dominate the interaction norm {measured}"));
    }
    let p = k.p_max().max(1);
    let log_m = m_base.ln();
    let (head, exhausted) = head_sums(k, m_base, head_links)?;

    let mut reason = None;
    let tail = if exhausted {
        0.0
    } else if norm > NORM_CAP {
        reason = Some(FailReason::NormAboveCap { norm });
        f64::INFINITY
    } else {
        match tail_sum(p, norm, m_base, head_links)? {
            Some(t) => t,
            None => {
                let ratio = if p == 1 {
                    2.0 * norm * m_base
                } else {
                    TailBound::new(p, norm, m_base)?.ratio()
                };
                reason = Some(FailReason::TailDivergent { ratio });
                f64::INFINITY
            }
        }
    };

    let per_site_sums: Vec<SiteSum> = head
        .iter()
        .enumerate()
        .map(|(i, &h)| SiteSum { site: EdgeSite::from_index(i), head: h, total: h + tail })
        .collect();
    let worst = per_site_sums
        .iter()
        .fold(None::<&SiteSum>, |best, s| match best {
            Some(b) if b.total >= s.total => Some(b),
            _ => Some(s),
        });
    let max_site_sum = worst.map_or(0.0, |s| s.total);
    if reason.is_none() {
        if let Some(w) = worst.filter(|w| w.total > log_m) {
            reason = Some(FailReason::SiteSumExceeded { site: w.site, sum: w.total });
        }
    }
    Ok(KpCertificate {
        m_base,
        log_m,
        norm,
        p,
        tail_order: head_links,
        exhausted,
        tail,
        per_site_sums,
        max_site_sum,
        verdict: if reason.is_none() { KpVerdict::Pass } else { KpVerdict::Fail },
        reason,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expansion::hypergraph::enumerate_connected_hypergraphs;
    use crate::expansion::region::{optimal_m, region_bound};
    use crate::expansion::series::pinned_cluster_sum;
    use crate::expansion::polymer::activity_bound;
    use crate::graph::{EdgeSubset, ErgmModel, Motif, ParameterVector};
    use crate::lattice::build_interaction;
    use proptest::prelude::*;

    fn two_star(beta: f64, n: usize) -> Interaction {
        build_interaction(&ErgmModel::single(Motif::two_star(), beta).unwrap(), n).unwrap()
    }

    #[test]
    fn zero_interaction_passes() {
        let k = Interaction::from_entries(4, 2, []).unwrap();
        let cert = kp_certify(&k, 1.5, 3).unwrap();
        assert!(cert.passed());
        assert!(cert.exhausted);
        assert_eq!(cert.max_site_sum, 0.0);
    }

    #[test]
    fn half_budget_two_star_passes() {
        let m = optimal_m(2).unwrap();
        let beta = 0.5 * region_bound(2, 3, m).unwrap();
        let cert = kp_certify(&two_star(beta, 4), m, 3).unwrap();
        assert!(cert.passed(), "{cert:?}");
        assert!(cert.max_site_sum <= cert.log_m);
    }

    #[test]
    fn huge_norm_fails_without_error() {
        let cert = kp_certify(&two_star(1.0, 4), 1.5, 2).unwrap();
        assert_eq!(cert.verdict, KpVerdict::Fail);
        assert!(matches!(cert.reason, Some(FailReason::NormAboveCap { .. })));
        let cert = kp_certify(&two_star(0.1, 4), 1.5, 2).unwrap();
        assert!(matches!(cert.reason, Some(FailReason::TailDivergent { .. })));
        assert_eq!(cert.tail, f64::INFINITY);
    }

    #[test]
    fn head_matches_hypergraph_oracle() {
        let k = two_star(0.01, 4);
        let m = 1.4;
        let cert = kp_certify(&k, m, 2).unwrap();
        for s in &cert.per_site_sums {
            let oracle: f64 = enumerate_connected_hypergraphs(&k, 2, Some(s.site))
                .unwrap()
                .iter()
                .map(|h| {
                    h.links().iter().map(|&x| k.get(x).abs().exp_m1()).product::<f64>()
                        * m.powi(h.support().len() as i32)
                })
                .sum();
            assert!((s.head - oracle).abs() < 1e-15, "{} vs {oracle}", s.head);
        }
    }

    #[test]
    fn edge_only_enumeration_is_complete() {
        let k = build_interaction(&ErgmModel::single(Motif::edge(), 0.05).unwrap(), 5).unwrap();
        let m = 1.5;
        let cert = kp_certify(&k, m, 2).unwrap();
        assert!(cert.exhausted);
        assert_eq!(cert.tail, 0.0);
        let expected = 0.1f64.exp_m1() * m;
        assert!((cert.max_site_sum - expected).abs() < 1e-15);
        assert!(cert.passed());
    }

    #[test]
    fn family_norm_at_four_budgets_diverges() {
        let m = optimal_m(2).unwrap();
        let beta = 4.0 * region_bound(2, 3, m).unwrap();
        let k = two_star(beta, 4);
        let cert = kp_certify_with_norm(&k, m, 3, 6.0 * beta).unwrap();
        assert_eq!(cert.verdict, KpVerdict::Fail);
        assert!(matches!(cert.reason, Some(FailReason::TailDivergent { .. })));
        assert!(kp_certify_with_norm(&k, m, 3, 0.5 * k.banach_norm()).is_err());
    }

    #[test]
    fn certificate_json_round_trip() {
        let cert = kp_certify(&two_star(0.1, 4), 1.5, 2).unwrap();
        let text = serde_json::to_string(&cert).unwrap();
        let back: KpCertificate = serde_json::from_str(&text).unwrap();
        assert_eq!(back, cert);
        assert!(text.contains("\"logM\""));
    }

    #[test]
    fn pinned_clusters_below_kp_weight_when_certified() {
        let m = optimal_m(2).unwrap();
        let beta = 0.5 * region_bound(2, 3, m).unwrap();
        let k = two_star(beta, 4);
        assert!(kp_certify(&k, m, 3).unwrap().passed());
        for idx in 0..6 {
            let target = EdgeSubset::singleton(EdgeSite::from_index(idx));
            let pinned = pinned_cluster_sum(&k, target, 3, 2).unwrap();
            let v = activity_bound(&k, target, 2).unwrap();
            assert!(pinned <= v * m);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn verdict_is_monotone_in_scale(b1 in -1.0f64..1.0, b2 in -1.0f64..1.0, t in 0.0f64..1.0) {
            let m = optimal_m(2).unwrap();
            let budget = region_bound(2, 3, m).unwrap();
            let model = ErgmModel::new(
                vec![Motif::edge(), Motif::two_star()],
                ParameterVector(vec![b1 * budget * 3.0, b2 * budget * 3.0]),
            ).unwrap();
            let k = build_interaction(&model, 4).unwrap();
            if kp_certify(&k, m, 2).unwrap().passed() {
                prop_assert!(kp_certify(&k.scaled(t), m, 2).unwrap().passed());
            }
        }
    }
}
