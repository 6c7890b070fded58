//! Command-line flags and the optional JSON config file. A flag wins over
//! the file, the file wins over built-in defaults.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use crate::failure::Failure;

#[derive(Debug, Parser)]
#[command(name = "ergm-cluster", version, about = "ERGM free energies by exact enumeration and cluster expansion")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub options: Options,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Homomorphism counts and densities of motifs in a graph.
    Density,
    /// Exact-density support families, the representation check and K(X).
    Represent,
    /// Exact partition function, free energies and expectations.
    Exact,
    /// Truncated cluster expansion of log W with its KP certificate.
    Expand,
    /// Admissible parameter budget and the optimal M.
    Region,
    /// Coefficient table of the rooted-hypergraph majorant.
    Coeffs,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Clone, Debug, Default, Args, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct Options {
    /// Vertex count.
    #[arg(long, global = true)]
    pub n: Option<usize>,

    /// Motifs: built-in names (edge, two-star, triangle) or JSON files.
    #[arg(long = "motif", visible_alias = "motifs", global = true, value_delimiter = ',')]
    #[serde(alias = "motif")]
    pub motifs: Vec<String>,

    /// Parameters aligned with the motifs.
    #[arg(long = "beta", visible_alias = "betas", global = true, value_delimiter = ',', allow_hyphen_values = true)]
    #[serde(alias = "beta")]
    pub betas: Vec<f64>,

    /// Kotecký-Preiss base M > 1 (defaults to the optimal M).
    #[arg(long = "M", global = true)]
    #[serde(rename = "M")]
    pub m_base: Option<f64>,

    /// Expansion order (total link count).
    #[arg(long, global = true)]
    pub order: Option<usize>,

    /// Link cap for polymers in the expansion (defaults to the order).
    #[arg(long, global = true)]
    pub max_links: Option<usize>,

    /// Link count enumerated exactly in the KP sums.
    #[arg(long, global = true)]
    pub head_links: Option<usize>,

    /// Graph JSON file {n, edges}.
    #[arg(long, global = true)]
    pub graph: Option<PathBuf>,

    /// Largest motif edge count.
    #[arg(long, global = true)]
    pub p: Option<usize>,

    /// Largest motif vertex count.
    #[arg(long, global = true)]
    pub m: Option<usize>,

    /// Upper end of an n range (exact) or table length (coeffs).
    #[arg(long, global = true)]
    pub n_max: Option<usize>,

    /// Interaction norm for coeffs.
    #[arg(long, global = true)]
    pub norm: Option<f64>,

    /// Artifact path; stdout when absent.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,

    /// Seed for random parameter sweeps.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Number of random parameter vectors (exact).
    #[arg(long, global = true)]
    pub samples: Option<usize>,

    /// Lift the default enumeration guards.
    #[arg(long, global = true, num_args = 0..=1, default_missing_value = "true")]
    pub force: Option<bool>,

    /// Worker threads.
    #[arg(long, global = true, env = "ERGM_CLUSTER_THREADS")]
    pub threads: Option<usize>,

    /// JSON config file with the same keys as the flags.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

macro_rules! prefer {
    ($flags:ident, $file:ident, $($field:ident),*) => {
        $( if $flags.$field.is_none() { $flags.$field = $file.$field.take(); } )*
    };
}

impl Options {
    /// Fills unset flags from the config file, if one was named.
    pub fn merged(mut self) -> Result<Options, Failure> {
        let Some(path) = self.config.clone() else {
            return Ok(self);
        };
        let mut file = load_config(&path)?;
        if self.motifs.is_empty() {
            self.motifs = std::mem::take(&mut file.motifs);
        }
        if self.betas.is_empty() {
            self.betas = std::mem::take(&mut file.betas);
        }
        prefer!(
            self, file, n, m_base, order, max_links, head_links, graph, p, m, n_max, norm, output, format, seed,
            samples, force, threads
        );
        Ok(self)
    }

    pub fn force(&self) -> bool {
        self.force.unwrap_or(false)
    }

    pub fn format(&self) -> Format {
        self.format.unwrap_or_default()
    }
}

fn load_config(path: &Path) -> Result<Options, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::invalid(format!("cannot read config {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::invalid(format!("bad config {}: {e}", path.display())))
}
