//! Brute-force ground truth: exact partition functions and free energies by
//! enumerating every graph on `n` vertices.
//!
//! Two independent routes are provided. [`ExactEnsemble`] sums
//! `exp(n² T^β(G))` over graphs using homomorphism densities; and
//! [`partition_normalized`] sums `exp(-H(σ))` over spin configurations using
//! the lattice-gas interaction. They are linked by
//! `ψ_n = (C(n,2) log 2 + log W) / n²`.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::graph::{enumerate_graphs_with, hom_density, rational_to_f64, site_count, ErgmModel, Motif, ParameterVector};
use crate::lattice::Interaction;
use crate::numeric::{log_mean_exp, log_sum_exp, softmax, CompensatedSum};
use crate::numfmt::{self, format_f64};

/// Default vertex-count ceiling for exact ensembles (2^15 graphs).
pub const ENSEMBLE_GUARD: usize = 6;

/// Ceiling when the guard is overridden (2^28 configurations).
pub const ENSEMBLE_HARD_LIMIT: usize = 8;

fn check_guard(n: usize, force: bool) -> Result<()> {
    let limit = if force { ENSEMBLE_HARD_LIMIT } else { ENSEMBLE_GUARD };
    if n > limit {
        return Err(Error::GuardExceeded { what: "exact ensemble vertex count", requested: n, limit });
    }
    Ok(())
}

/// Motif densities of every graph on `n` vertices, in bitmask order.
///
/// The exact densities are computed once and rounded once; all parameter
/// sweeps reuse the table.
#[derive(Clone, Debug)]
pub struct ExactEnsemble {
    n: usize,
    motifs: Vec<Motif>,
    // row-major: graph index × motif index
    densities: Vec<f64>,
}

impl ExactEnsemble {
    pub fn new(motifs: &[Motif], n: usize) -> Result<Self> {
        Self::with_force(motifs, n, false)
    }

    pub fn with_force(motifs: &[Motif], n: usize, force: bool) -> Result<Self> {
        check_guard(n, force)?;
        if motifs.is_empty() {
            return invalid("an ensemble needs at least one motif");
        }
        let graphs: Vec<_> = enumerate_graphs_with(n, true)?.collect();
        // each graph's row is independent; collect keeps bitmask order
        let rows: Vec<Vec<f64>> = graphs
            .par_iter()
            .map(|g| motifs.iter().map(|h| rational_to_f64(&hom_density(h, g))).collect())
            .collect();
        Ok(ExactEnsemble { n, motifs: motifs.to_vec(), densities: rows.concat() })
    }

    pub fn for_model(model: &ErgmModel, n: usize) -> Result<Self> {
        Self::new(model.motifs(), n)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn motifs(&self) -> &[Motif] {
        &self.motifs
    }

    pub fn graph_count(&self) -> usize {
        self.densities.len() / self.motifs.len()
    }

    /// Densities `t(H_i, G)` of the graph with edge bitmask `index`.
    pub fn densities_of(&self, index: usize) -> &[f64] {
        let k = self.motifs.len();
        &self.densities[index * k..(index + 1) * k]
    }

    fn check_betas(&self, betas: &ParameterVector) -> Result<()> {
        if betas.len() != self.motifs.len() {
            return invalid(format!("{} motifs but {} parameters", self.motifs.len(), betas.len()));
        }
        Ok(())
    }

    /// `n² T^β(G)` for every graph.
    pub fn exponents(&self, betas: &ParameterVector) -> Result<Vec<f64>> {
        self.check_betas(betas)?;
        let n2 = (self.n * self.n) as f64;
        let b = betas.as_slice();
        Ok((0..self.graph_count())
            .map(|g| n2 * self.densities_of(g).iter().zip(b).map(|(t, b)| t * b).sum::<f64>())
            .collect())
    }

    /// `log Σ_G exp(n² T^β(G))`.
    pub fn log_partition_sum(&self, betas: &ParameterVector) -> Result<f64> {
        Ok(log_sum_exp(&self.exponents(betas)?))
    }

    /// `ψ_n = (1/n²) log Σ_G exp(n² T^β(G))`.
    pub fn psi_n(&self, betas: &ParameterVector) -> Result<f64> {
        Ok(self.log_partition_sum(betas)? / (self.n * self.n) as f64)
    }

    /// `log W` from the graph route: `log Σ_G exp(n² T^β(G)) − C(n,2) log 2`,
    /// evaluated as a log-mean so no precision is lost to the offset.
    pub fn log_w(&self, betas: &ParameterVector) -> Result<f64> {
        Ok(log_mean_exp(&self.exponents(betas)?))
    }

    /// `E[t(H_i, G)]` under the model's probability mass function.
    pub fn expectations(&self, betas: &ParameterVector) -> Result<Vec<f64>> {
        let weights = softmax(&self.exponents(betas)?);
        let k = self.motifs.len();
        Ok((0..k)
            .map(|i| {
                weights
                    .iter()
                    .enumerate()
                    .map(|(g, w)| w * self.densities_of(g)[i])
                    .collect::<CompensatedSum>()
                    .value()
            })
            .collect())
    }

    pub fn solve(&self, betas: &ParameterVector) -> Result<EnsembleResult> {
        let log_w = self.log_w(betas)?;
        let psi = self.psi_n(betas)?;
        let e = site_count(self.n) as f64;
        Ok(EnsembleResult {
            n: self.n,
            betas: betas.0.clone(),
            log_w_normalized: log_w,
            psi_n: psi,
            phi_n: log_w / e,
            expectations: self.expectations(betas)?,
        })
    }

    /// Central difference of `ψ_n` in coordinate `i`, paired with `E[t(H_i, G)]`.
    pub fn derivative_check(&self, betas: &ParameterVector, i: usize, h: f64) -> Result<(f64, f64)> {
        self.check_betas(betas)?;
        if i >= betas.len() {
            return invalid(format!("coordinate {i} out of range"));
        }
        if !(h > 0.0) {
            return invalid(format!("step must be positive, got {h}"));
        }
        let mut up = betas.clone();
        up.0[i] += h;
        let mut down = betas.clone();
        down.0[i] -= h;
        let fd = (self.psi_n(&up)? - self.psi_n(&down)?) / (2.0 * h);
        Ok((fd, self.expectations(betas)?[i]))
    }
}

/// Exact thermodynamics of one parameter point.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct EnsembleResult {
    pub n: usize,
    #[serde(with = "numfmt::vec_f64_17")]
    pub betas: Vec<f64>,
    /// `log W` of the normalized partition function.
    #[serde(with = "numfmt::f64_17")]
    pub log_w_normalized: f64,
    #[serde(with = "numfmt::f64_17")]
    pub psi_n: f64,
    /// `log W / C(n,2)`.
    #[serde(with = "numfmt::f64_17")]
    pub phi_n: f64,
    #[serde(with = "numfmt::vec_f64_17")]
    pub expectations: Vec<f64>,
}

/// `log W = log(2^{-C(n,2)} Σ_σ exp(Σ_X K(X) σ_X))` by enumerating spins.
pub fn partition_normalized(interaction: &Interaction) -> Result<f64> {
    partition_normalized_with(interaction, false)
}

pub fn partition_normalized_with(interaction: &Interaction, force: bool) -> Result<f64> {
    Ok(log_mean_exp(&spin_energies(interaction, force)?))
}

/// `Σ_X K(X) σ_X` for every configuration, in bitmask order.
pub fn spin_energies(interaction: &Interaction, force: bool) -> Result<Vec<f64>> {
    check_guard(interaction.n(), force)?;
    let sites = site_count(interaction.n());
    let links: Vec<(u128, f64)> = interaction.iter().map(|(x, v)| (x.bits(), v)).collect();
    Ok((0..1u64 << sites)
        .into_par_iter()
        .map(|occ| {
            let occ = occ as u128;
            links.iter().filter(|(x, _)| x & !occ == 0).map(|(_, v)| v).sum()
        })
        .collect())
}

pub fn psi_n(model: &ErgmModel, n: usize) -> Result<f64> {
    ExactEnsemble::for_model(model, n)?.psi_n(model.betas())
}

pub fn expectation_densities(model: &ErgmModel, n: usize) -> Result<Vec<f64>> {
    ExactEnsemble::for_model(model, n)?.expectations(model.betas())
}

pub fn derivative_check(model: &ErgmModel, n: usize, i: usize, h: f64) -> Result<(f64, f64)> {
    ExactEnsemble::for_model(model, n)?.derivative_check(model.betas(), i, h)
}

pub fn solve(model: &ErgmModel, n: usize) -> Result<EnsembleResult> {
    ExactEnsemble::for_model(model, n)?.solve(model.betas())
}

/// Writes rows with columns `n, beta_1..beta_k, psi_n, phi_n, E_1..E_k`.
pub fn write_csv<W: Write>(rows: &[EnsembleResult], out: W) -> Result<()> {
    let k = rows.first().map(|r| r.betas.len()).unwrap_or(0);
    if rows.iter().any(|r| r.betas.len() != k || r.expectations.len() != k) {
        return invalid("rows with differing motif counts");
    }
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["n".to_string()];
    header.extend((1..=k).map(|i| format!("beta_{i}")));
    header.push("psi_n".into());
    header.push("phi_n".into());
    header.extend((1..=k).map(|i| format!("E_{i}")));
    w.write_record(&header)?;
    for r in rows {
        let mut rec = vec![r.n.to_string()];
        rec.extend(r.betas.iter().map(|&b| format_f64(b)));
        rec.push(format_f64(r.psi_n));
        rec.push(format_f64(r.phi_n));
        rec.extend(r.expectations.iter().map(|&e| format_f64(e)));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}
