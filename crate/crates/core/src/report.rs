//! One-stop summary of an expansion run: partial sums against the exact
//! oracle, the convergence certificate, and the parameter budget.

use serde::{Deserialize, Serialize};

use crate::ensemble::{partition_normalized_with, ENSEMBLE_GUARD};
use crate::error::{invalid, Result};
use crate::expansion::kp::{kp_certify, KpCertificate, KpVerdict};
use crate::expansion::region::{optimal_m, region_bound};
use crate::expansion::series::truncated_log_partition;
use crate::expansion::TailBound;
use crate::graph::{site_count, ErgmModel};
use crate::lattice::build_interaction;
use crate::numfmt;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrderRow {
    pub order: usize,
    #[serde(with = "numfmt::f64_17")]
    pub partial_sum: f64,
    /// `|partial_sum − log W|` when the exact value was computed.
    #[serde(with = "numfmt::opt_f64_17")]
    pub gap_to_exact: Option<f64>,
    /// `|E_n| · Σ_{n > order}` of the coefficient majorant; absent for `p < 2`.
    #[serde(with = "numfmt::opt_f64_17")]
    pub tail_bound: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KpSummary {
    #[serde(rename = "M", with = "numfmt::f64_17")]
    pub m_base: f64,
    #[serde(with = "numfmt::f64_17")]
    pub max_site_sum: f64,
    #[serde(rename = "logM", with = "numfmt::f64_17")]
    pub log_m: f64,
    pub verdict: KpVerdict,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegionSummary {
    pub p: usize,
    pub m: usize,
    #[serde(rename = "M", with = "numfmt::f64_17")]
    pub m_base: f64,
    /// Admissible `Σ|β_i|`; absent when the region formula does not apply.
    #[serde(with = "numfmt::opt_f64_17")]
    pub beta_budget: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpansionReport {
    pub n: usize,
    #[serde(with = "numfmt::vec_f64_17")]
    pub betas: Vec<f64>,
    #[serde(with = "numfmt::opt_f64_17")]
    pub exact_log_w: Option<f64>,
    pub orders: Vec<OrderRow>,
    pub kp: KpSummary,
    pub region: RegionSummary,
}

#[derive(Clone, Debug)]
pub struct ReportConfig {
    pub n: usize,
    /// `None` picks the optimal `M` for `max(p, 2)`.
    pub m_base: Option<f64>,
    pub order: usize,
    pub max_links: usize,
    pub head_links: usize,
    /// Compare against exact enumeration (needs `n` within the ensemble guard
    /// unless `force`).
    pub exact: bool,
    pub force: bool,
}

impl ReportConfig {
    pub fn new(n: usize) -> Self {
        ReportConfig { n, m_base: None, order: 4, max_links: 4, head_links: 3, exact: n <= ENSEMBLE_GUARD, force: false }
    }
}

impl ExpansionReport {
    pub fn build(model: &ErgmModel, config: &ReportConfig) -> Result<Self> {
        let n = config.n;
        if n < 2 {
            return invalid(format!("need at least 2 vertices, got {n}"));
        }
        let k = build_interaction(model, n)?;
        let p = model.p_max();
        let m = model.m_max();
        let m_base = match config.m_base {
            Some(v) => v,
            None => optimal_m(p.max(2))?,
        };
        let cert: KpCertificate = kp_certify(&k, m_base, config.head_links)?;
        let series = truncated_log_partition(&k, config.order, config.max_links)?;
        let exact = if config.exact { Some(partition_normalized_with(&k, config.force)?) } else { None };
        let tail = if k.p_max() >= 2 { Some(TailBound::new(k.p_max(), k.banach_norm(), m_base)?) } else { None };
        let sites = site_count(n) as f64;
        let orders = series
            .orders
            .iter()
            .map(|t| OrderRow {
                order: t.order,
                partial_sum: t.partial_sum,
                gap_to_exact: exact.map(|e| (t.partial_sum - e).abs()),
                tail_bound: tail.map(|b| sites * b.tail(t.order)),
            })
            .collect();
        let beta_budget = if p >= 2 { Some(region_bound(p, m, m_base)?) } else { None };
        Ok(ExpansionReport {
            n,
            betas: model.betas().0.clone(),
            exact_log_w: exact,
            orders,
            kp: KpSummary { m_base, max_site_sum: cert.max_site_sum, log_m: cert.log_m, verdict: cert.verdict },
            region: RegionSummary { p, m, m_base, beta_budget },
        })
    }
}
