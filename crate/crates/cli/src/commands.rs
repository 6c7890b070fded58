use std::path::Path;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use ergm_cluster::ensemble::{write_csv, EnsembleResult, ExactEnsemble, ENSEMBLE_GUARD};
use ergm_cluster::expansion::{
    norm_budget, norm_threshold, optimal_log_m, optimal_m, region_bound, CoefficientTable, TailBound,
};
use ergm_cluster::graph::{enumerate_graphs_with, hom_denominator, rational_to_f64, GraphSpec};
use ergm_cluster::lattice::{InteractionEntry, SupportFamily};
use ergm_cluster::numfmt;
use ergm_cluster::report::{ExpansionReport, ReportConfig};
use ergm_cluster::{
    build_interaction, hom_count, hom_density, weighted_density, EdgeSubset, ErgmModel, Motif,
    ParameterVector, SimpleGraph,
};

use crate::failure::Failure;
use crate::options::{Command, Format, Options};

const DEFAULT_N: usize = 4;
const DEFAULT_ORDER: usize = 4;
const DEFAULT_HEAD_LINKS: usize = 3;
const DEFAULT_TABLE_LEN: usize = 30;
const DEFAULT_M: usize = 3;
/// Largest n for which `represent` checks every graph without --force.
const REPRESENT_SWEEP_LIMIT: usize = 5;

/// Rendered artifact.
pub struct Artifact {
    pub text: String,
}

pub fn run(command: Command, opts: &Options) -> Result<Artifact, Failure> {
    match command {
        Command::Density => density(opts),
        Command::Represent => represent(opts),
        Command::Exact => exact(opts),
        Command::Expand => expand(opts),
        Command::Region => region(opts),
        Command::Coeffs => coeffs(opts),
    }
}

fn json<T: Serialize>(value: &T) -> Result<Artifact, Failure> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Failure::io(e.to_string()))?;
    text.push('\n');
    Ok(Artifact { text })
}

fn csv_rows(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<Artifact, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(|e| Failure::io(e.to_string()))?;
    for row in rows {
        w.write_record(&row).map_err(|e| Failure::io(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Failure::io(e.to_string()))?;
    Ok(Artifact { text: String::from_utf8(bytes).map_err(|e| Failure::io(e.to_string()))? })
}

fn opt_f64(x: Option<f64>) -> String {
    x.map(numfmt::format_f64).unwrap_or_default()
}

fn motif(spec: &str) -> Result<Motif, Failure> {
    if Motif::NAMED.contains(&spec) {
        return Ok(Motif::named(spec)?);
    }
    let path = Path::new(spec);
    if !path.exists() {
        return Err(Failure::invalid(format!(
            "unknown motif {spec:?}: not one of {:?} and no such file",
            Motif::NAMED
        )));
    }
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::invalid(format!("cannot read motif {spec}: {e}")))?;
    Ok(Motif::from_json(&text)?)
}

fn motifs(opts: &Options) -> Result<Vec<Motif>, Failure> {
    if opts.motifs.is_empty() {
        return Err(Failure::invalid("no motifs given (use --motif)"));
    }
    opts.motifs.iter().map(|s| motif(s)).collect()
}

/// Motifs with their parameters; missing parameters default to zero.
fn model(opts: &Options) -> Result<ErgmModel, Failure> {
    let motifs = motifs(opts)?;
    let betas = if opts.betas.is_empty() { vec![0.0; motifs.len()] } else { opts.betas.clone() };
    if betas.len() != motifs.len() {
        return Err(Failure::invalid(format!("{} betas for {} motifs", betas.len(), motifs.len())));
    }
    Ok(ErgmModel::new(motifs, ParameterVector(betas))?)
}

fn graph(opts: &Options) -> Result<SimpleGraph, Failure> {
    let path = opts.graph.as_ref().ok_or_else(|| Failure::invalid("no graph given (use --graph)"))?;
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::invalid(format!("cannot read graph {}: {e}", path.display())))?;
    let spec: GraphSpec =
        serde_json::from_str(&text).map_err(|e| Failure::invalid(format!("bad graph {}: {e}", path.display())))?;
    let g = SimpleGraph::try_from(spec)?;
    if let Some(n) = opts.n.filter(|&n| n != g.n()) {
        return Err(Failure::invalid(format!("--n {n} disagrees with the graph's n = {}", g.n())));
    }
    Ok(g)
}

#[derive(Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityRow {
    pub motif: String,
    pub hom_count: u128,
    /// `hom_count / n^m`, unreduced.
    pub density: String,
    pub reduced: String,
    #[serde(with = "numfmt::f64_17")]
    pub value: f64,
}

#[derive(Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityOutput {
    pub n: usize,
    pub edges: EdgeSubset,
    pub rows: Vec<DensityRow>,
    #[serde(with = "numfmt::opt_f64_17")]
    pub weighted_density: Option<f64>,
}

fn density(opts: &Options) -> Result<Artifact, Failure> {
    let g = graph(opts)?;
    let motifs = motifs(opts)?;
    let rows: Vec<DensityRow> = motifs
        .iter()
        .map(|h| {
            let t = hom_density(h, &g);
            DensityRow {
                motif: h.name().to_string(),
                hom_count: hom_count(h, &g),
                density: format!("{}/{}", hom_count(h, &g), hom_denominator(h, g.n())),
                reduced: t.to_string(),
                value: rational_to_f64(&t),
            }
        })
        .collect();
    let weighted_density = if opts.betas.is_empty() { None } else { Some(weighted_density(&model(opts)?, &g)) };
    let out = DensityOutput { n: g.n(), edges: g.edges(), rows, weighted_density };
    match opts.format() {
        Format::Json => json(&out),
        Format::Csv => csv_rows(
            &["motif", "hom_count", "density", "value"],
            out.rows.iter().map(|r| vec![r.motif.clone(), r.hom_count.to_string(), r.density.clone(), numfmt::format_f64(r.value)]),
        ),
    }
}

#[derive(Debug, PartialEq, Serialize, Deserialize)]
pub struct SupportEntry {
    pub sites: EdgeSubset,
    /// `|ehom(H, X)| / n^m`, unreduced.
    pub density: String,
}

#[derive(Debug, PartialEq, Serialize, Deserialize)]
pub struct MotifSupport {
    pub motif: String,
    pub entries: Vec<SupportEntry>,
    /// Graphs on which `t(H,G) = Σ_{X ⊆ E(G)} d(H,X)` was checked.
    pub graphs_checked: usize,
    pub representation_holds: bool,
}

#[derive(Debug, PartialEq, Serialize, Deserialize)]
pub struct RepresentOutput {
    pub n: usize,
    pub motifs: Vec<MotifSupport>,
    pub interaction: Vec<InteractionEntry>,
    #[serde(with = "numfmt::f64_17")]
    pub banach_norm: f64,
    /// `m(m−1) Σ|β_i|`.
    #[serde(with = "numfmt::f64_17")]
    pub norm_bound: f64,
}

fn represent(opts: &Options) -> Result<Artifact, Failure> {
    let model = model(opts)?;
    let given = opts.graph.as_ref().map(|_| graph(opts)).transpose()?;
    let n = given.as_ref().map_or(opts.n.unwrap_or(DEFAULT_N), SimpleGraph::n);
    let sweep = given.is_none() && (n <= REPRESENT_SWEEP_LIMIT || opts.force());
    let mut supports = Vec::new();
    for h in model.motifs() {
        let family = SupportFamily::new(h, n)?;
        let denom = hom_denominator(h, n);
        let entries = family
            .entries()
            .iter()
            .map(|(&x, d)| {
                let count: BigInt = d.numer() * (&denom / d.denom());
                SupportEntry { sites: x, density: format!("{count}/{denom}") }
            })
            .collect();
        let graphs: Vec<SimpleGraph> = match &given {
            Some(g) => vec![g.clone()],
            None if sweep => enumerate_graphs_with(n, opts.force())?.collect(),
            None => Vec::new(),
        };
        let holds = graphs.iter().all(|g| hom_density(h, g) == family.lattice_gas_density(g));
        supports.push(MotifSupport {
            motif: h.name().to_string(),
            entries,
            graphs_checked: graphs.len(),
            representation_holds: holds,
        });
    }
    let k = build_interaction(&model, n)?;
    let out = RepresentOutput {
        n,
        motifs: supports,
        interaction: k.dump(),
        banach_norm: k.banach_norm(),
        norm_bound: (model.m_max() * (model.m_max() - 1)) as f64 * model.betas().l1(),
    };
    match opts.format() {
        Format::Json => json(&out),
        Format::Csv => csv_rows(
            &["motif", "sites", "density"],
            out.motifs.iter().flat_map(|m| {
                m.entries.iter().map(|e| {
                    let sites: Vec<String> = e.sites.pairs().iter().map(|[a, b]| format!("{a}-{b}")).collect();
                    vec![m.motif.clone(), sites.join(" "), e.density.clone()]
                })
            }),
        ),
    }
}

#[derive(Debug, PartialEq, Serialize, Deserialize)]
pub struct ExactOutput {
    pub rows: Vec<EnsembleResult>,
}

fn exact(opts: &Options) -> Result<Artifact, Failure> {
    let model = model(opts)?;
    let n_lo = opts.n.unwrap_or(DEFAULT_N);
    let n_hi = opts.n_max.unwrap_or(n_lo);
    if n_hi < n_lo {
        return Err(Failure::invalid(format!("--n-max {n_hi} below --n {n_lo}")));
    }
    let parameter_sets: Vec<ParameterVector> = match opts.samples {
        None => vec![model.betas().clone()],
        Some(s) => {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.unwrap_or(0));
            (0..s)
                .map(|_| ParameterVector((0..model.motifs().len()).map(|_| rng.gen_range(-1.0..=1.0)).collect()))
                .collect()
        }
    };
    let mut rows = Vec::new();
    for n in n_lo..=n_hi {
        let ens = ExactEnsemble::with_force(model.motifs(), n, opts.force())?;
        for betas in &parameter_sets {
            rows.push(ens.solve(betas)?);
        }
    }
    match opts.format() {
        Format::Json => json(&ExactOutput { rows }),
        Format::Csv => {
            let mut buf = Vec::new();
            write_csv(&rows, &mut buf)?;
            Ok(Artifact { text: String::from_utf8(buf).map_err(|e| Failure::io(e.to_string()))? })
        }
    }
}

fn expand(opts: &Options) -> Result<Artifact, Failure> {
    let model = model(opts)?;
    let n = opts.n.unwrap_or(DEFAULT_N);
    let order = opts.order.unwrap_or(DEFAULT_ORDER);
    let config = ReportConfig {
        n,
        m_base: opts.m_base,
        order,
        max_links: opts.max_links.unwrap_or(order),
        head_links: opts.head_links.unwrap_or(DEFAULT_HEAD_LINKS),
        exact: n <= ENSEMBLE_GUARD || opts.force(),
        force: opts.force(),
    };
    let report = ExpansionReport::build(&model, &config)?;
    match opts.format() {
        Format::Json => json(&report),
        Format::Csv => csv_rows(
            &["order", "partial_sum", "gap_to_exact", "tail_bound"],
            report.orders.iter().map(|r| {
                vec![r.order.to_string(), numfmt::format_f64(r.partial_sum), opt_f64(r.gap_to_exact), opt_f64(r.tail_bound)]
            }),
        ),
    }
}

#[derive(Debug, PartialEq, Serialize, Deserialize)]
pub struct RegionOutput {
    pub p: usize,
    pub m: usize,
    #[serde(rename = "M", with = "numfmt::f64_17")]
    pub m_base: f64,
    #[serde(rename = "logM", with = "numfmt::f64_17")]
    pub log_m: f64,
    #[serde(rename = "optimal_M", with = "numfmt::f64_17")]
    pub optimal_m: f64,
    #[serde(rename = "optimal_logM", with = "numfmt::f64_17")]
    pub optimal_log_m: f64,
    #[serde(with = "numfmt::f64_17")]
    pub norm_threshold: f64,
    #[serde(with = "numfmt::f64_17")]
    pub norm_budget: f64,
    #[serde(with = "numfmt::f64_17")]
    pub beta_budget: f64,
}

/// `(p, m)` from flags, else from the motifs.
fn family_shape(opts: &Options) -> Result<(usize, usize), Failure> {
    let from_motifs = if opts.motifs.is_empty() {
        None
    } else {
        let ms = motifs(opts)?;
        Some((ms.iter().map(Motif::p).max().unwrap_or(1), ms.iter().map(Motif::m).max().unwrap_or(2)))
    };
    let p = opts.p.or(from_motifs.map(|s| s.0)).ok_or_else(|| Failure::invalid("no --p and no motifs given"))?;
    let m = opts.m.or(from_motifs.map(|s| s.1)).unwrap_or(DEFAULT_M);
    Ok((p, m))
}

fn region(opts: &Options) -> Result<Artifact, Failure> {
    let (p, m) = family_shape(opts)?;
    let optimal = optimal_m(p)?;
    let m_base = opts.m_base.unwrap_or(optimal);
    let out = RegionOutput {
        p,
        m,
        m_base,
        log_m: m_base.ln(),
        optimal_m: optimal,
        optimal_log_m: optimal_log_m(p)?,
        norm_threshold: norm_threshold(p, m_base)?,
        norm_budget: norm_budget(p, m_base)?,
        beta_budget: region_bound(p, m, m_base)?,
    };
    match opts.format() {
        Format::Json => json(&out),
        Format::Csv => csv_rows(
            &["p", "m", "M", "logM", "optimal_M", "norm_threshold", "beta_budget"],
            [vec![
                p.to_string(),
                m.to_string(),
                numfmt::format_f64(out.m_base),
                numfmt::format_f64(out.log_m),
                numfmt::format_f64(out.optimal_m),
                numfmt::format_f64(out.norm_threshold),
                numfmt::format_f64(out.beta_budget),
            ]],
        ),
    }
}

#[derive(Debug, PartialEq, Serialize, Deserialize)]
pub struct CoefficientRow {
    pub n: usize,
    pub gamma: String,
    #[serde(with = "numfmt::f64_17")]
    pub abar: f64,
    /// `(2‖K‖(Mp)^p)ⁿ (p−1)^{−(1+(p−1)n)}`.
    #[serde(with = "numfmt::f64_17")]
    pub bound: f64,
    pub bound_holds_exactly: bool,
}

#[derive(Debug, PartialEq, Serialize, Deserialize)]
pub struct CoeffsOutput {
    pub p: usize,
    #[serde(with = "numfmt::f64_17")]
    pub norm: f64,
    #[serde(rename = "M", with = "numfmt::f64_17")]
    pub m_base: f64,
    #[serde(with = "numfmt::f64_17")]
    pub c: f64,
    #[serde(with = "numfmt::f64_17")]
    pub ratio: f64,
    #[serde(with = "numfmt::f64_17")]
    pub radius: f64,
    /// `Σ_{n≥1}` of the bound; `inf` when divergent.
    #[serde(with = "numfmt::f64_17")]
    pub tail_sum: f64,
    pub generating_function_ok: bool,
    pub rows: Vec<CoefficientRow>,
}

fn coeffs(opts: &Options) -> Result<Artifact, Failure> {
    let (p, _) = family_shape(opts)?;
    let m_base = opts.m_base.unwrap_or(optimal_m(p)?);
    let norm = match opts.norm {
        Some(v) => v,
        None => norm_threshold(p, m_base)?,
    };
    let len = opts.n_max.unwrap_or(DEFAULT_TABLE_LEN);
    let table = CoefficientTable::new(p, norm, m_base, len)?;
    let tail = TailBound::new(p, norm, m_base)?;
    let rows = (1..=len)
        .map(|n| CoefficientRow {
            n,
            gamma: table.gamma(n).to_string(),
            abar: table.abar(n),
            bound: tail.coefficient_bound(n),
            bound_holds_exactly: table.bound_holds_exactly(n),
        })
        .collect();
    let out = CoeffsOutput {
        p,
        norm,
        m_base,
        c: table.c(),
        ratio: tail.ratio(),
        radius: tail.radius(),
        tail_sum: tail.tail(0),
        generating_function_ok: table.generating_function_check(),
        rows,
    };
    match opts.format() {
        Format::Json => json(&out),
        Format::Csv => csv_rows(
            &["n", "gamma", "abar", "bound", "bound_holds_exactly"],
            out.rows.iter().map(|r| {
                vec![
                    r.n.to_string(),
                    r.gamma.clone(),
                    numfmt::format_f64(r.abar),
                    numfmt::format_f64(r.bound),
                    r.bound_holds_exactly.to_string(),
                ]
            }),
        ),
    }
}
