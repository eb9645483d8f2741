//! Geometry scans and growth-strategy comparisons, with CSV/JSON output.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::adapt::{run_adapt, strategy_pool, AdaptConfig, GrowthStrategy, StrategyKind};
use crate::error::{Error, Result};
use crate::hamiltonian::{load_hamiltonian, MolecularHamiltonian};
use crate::reference::{fci_ground_energy, hf_energy, reference_sector, uccsd_vqe};
use crate::units::HARTREE_TO_KCAL;
use crate::vqe::{BfgsOptions, SectorSimulator};

/// What to compute at each geometry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Hf,
    Fci,
    Uccsd,
    /// Run once per epsilon of the scan.
    Growth(StrategyKind),
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::Hf => f.write_str("hf"),
            Method::Fci => f.write_str("fci"),
            Method::Uccsd => f.write_str("uccsd"),
            Method::Growth(k) => f.write_str(k.name()),
        }
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hf" => Ok(Method::Hf),
            "fci" => Ok(Method::Fci),
            "uccsd" => Ok(Method::Uccsd),
            other => other.parse().map(Method::Growth),
        }
    }
}

impl Serialize for Method {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Method {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Geometry {
    /// Bond length in Angstrom.
    pub r: f64,
    pub fcidump: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanSpec {
    pub molecule: String,
    pub geometries: Vec<Geometry>,
    pub methods: Vec<Method>,
    #[serde(default)]
    pub epsilons: Vec<f64>,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
    #[serde(default = "default_max_ops")]
    pub max_ops: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub inner: BfgsOptions,
}

fn default_max_ops() -> usize {
    200
}

impl ScanSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Reads a spec; relative fixture paths are resolved against the file's directory.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let mut spec = Self::from_json(&std::fs::read_to_string(path)?)?;
        let base = path.parent().unwrap_or(Path::new("."));
        for g in &mut spec.geometries {
            if g.fcidump.is_relative() {
                g.fcidump = base.join(&g.fcidump);
            }
        }
        Ok(spec)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub molecule: String,
    pub geometry: f64,
    pub method: String,
    pub energy: f64,
    /// kcal/mol
    pub error_vs_fci: f64,
    pub parameter_count: usize,
    pub outer_iterations: usize,
    /// Seconds.
    pub wall_time: f64,
    /// `ok`, or the failure message.
    pub status: String,
}

impl ScanRow {
    pub const HEADER: [&'static str; 9] = [
        "molecule",
        "geometry",
        "method",
        "energy",
        "error_vs_fci",
        "parameter_count",
        "outer_iterations",
        "wall_time",
        "status",
    ];

    pub fn is_ok(&self) -> bool {
        self.status == "ok"
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodSummary {
    pub method: String,
    pub mean_abs_error: f64,
    pub max_abs_error: f64,
    pub max_parameter_count: usize,
    pub n_points: usize,
    pub n_failed: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    pub molecule: String,
    pub rows: Vec<ScanRow>,
    pub summary: Vec<MethodSummary>,
}

fn method_label(kind: StrategyKind, epsilon: f64) -> String {
    format!("{}({epsilon:e})", kind.name())
}

type Runner = Box<dyn Fn(&MolecularHamiltonian) -> Result<(f64, usize, usize)>>;

/// One row per geometry; `run` is `None` for FCI, which is computed once
/// per geometry for the error column anyway.
struct Job {
    label: String,
    run: Option<Runner>,
}

fn jobs(spec: &ScanSpec) -> Result<Vec<Job>> {
    let mut jobs = Vec::new();
    let inner = spec.inner;
    for &m in &spec.methods {
        match m {
            Method::Hf => jobs.push(Job { label: "hf".into(), run: Some(Box::new(|h| Ok((hf_energy(h)?, 0, 0)))) }),
            Method::Fci => jobs.push(Job { label: "fci".into(), run: None }),
            Method::Uccsd => jobs.push(Job {
                label: "uccsd".into(),
                run: Some(Box::new(move |h| {
                    let u = uccsd_vqe(h, &inner)?;
                    Ok((u.vqe.energy, u.parameter_count, 0))
                })),
            }),
            Method::Growth(kind) => {
                if spec.epsilons.is_empty() {
                    return Err(Error::InvalidInput(format!("method {kind} needs at least one epsilon")));
                }
                for &eps in &spec.epsilons {
                    let config = AdaptConfig {
                        strategy: GrowthStrategy::new(kind, spec.seed),
                        max_ops: spec.max_ops,
                        inner,
                        ..AdaptConfig::new(eps)
                    };
                    jobs.push(Job {
                        label: method_label(kind, eps),
                        run: Some(Box::new(move |h| {
                            let r = crate::adapt::adapt_vqe(h, &config)?;
                            Ok((r.energy, r.parameter_count(), r.history.len()))
                        })),
                    });
                }
            }
        }
    }
    Ok(jobs)
}

/// Runs every method at every geometry. All fixtures are parsed before any
/// computation; failures after that are recorded in the row and the scan
/// continues.
pub fn run_scan(spec: &ScanSpec) -> Result<ScanReport> {
    run_scan_with(spec, |_| {})
}

pub fn run_scan_with(spec: &ScanSpec, mut on_row: impl FnMut(&ScanRow)) -> Result<ScanReport> {
    let jobs = jobs(spec)?;
    let hams = spec
        .geometries
        .iter()
        .map(|g| load_hamiltonian(&g.fcidump))
        .collect::<Result<Vec<_>>>()?;
    let mut rows = Vec::new();
    if !jobs.is_empty() {
        for (g, ham) in spec.geometries.iter().zip(&hams) {
            let t0 = Instant::now();
            let fci = fci_ground_energy(ham, reference_sector(ham));
            let fci_time = t0.elapsed().as_secs_f64();
            for job in &jobs {
                let t = Instant::now();
                let outcome = match &job.run {
                    Some(run) => run(ham),
                    None => fci.as_ref().map(|&e| (e, 0, 0)).map_err(|e| Error::InvalidInput(e.to_string())),
                };
                let wall_time = if job.run.is_none() { fci_time } else { t.elapsed().as_secs_f64() };
                let row = match (&outcome, &fci) {
                    (Ok((e, params, iters)), Ok(f)) => ScanRow {
                        molecule: spec.molecule.clone(),
                        geometry: g.r,
                        method: job.label.clone(),
                        energy: *e,
                        error_vs_fci: if job.run.is_none() { 0.0 } else { (e - f) * HARTREE_TO_KCAL },
                        parameter_count: *params,
                        outer_iterations: *iters,
                        wall_time,
                        status: "ok".into(),
                    },
                    (Ok((e, params, iters)), Err(err)) => ScanRow {
                        molecule: spec.molecule.clone(),
                        geometry: g.r,
                        method: job.label.clone(),
                        energy: *e,
                        error_vs_fci: f64::NAN,
                        parameter_count: *params,
                        outer_iterations: *iters,
                        wall_time,
                        status: format!("fci failed: {err}"),
                    },
                    (Err(err), _) => ScanRow {
                        molecule: spec.molecule.clone(),
                        geometry: g.r,
                        method: job.label.clone(),
                        energy: f64::NAN,
                        error_vs_fci: f64::NAN,
                        parameter_count: 0,
                        outer_iterations: 0,
                        wall_time,
                        status: err.to_string(),
                    },
                };
                on_row(&row);
                rows.push(row);
            }
        }
    }
    let summary = summarize(&rows);
    Ok(ScanReport { molecule: spec.molecule.clone(), rows, summary })
}

/// PES-averaged absolute error and largest parameter count per method, in
/// first-appearance order.
pub fn summarize(rows: &[ScanRow]) -> Vec<MethodSummary> {
    let mut order: Vec<String> = Vec::new();
    let mut groups: BTreeMap<String, Vec<&ScanRow>> = BTreeMap::new();
    for r in rows {
        if !groups.contains_key(&r.method) {
            order.push(r.method.clone());
        }
        groups.entry(r.method.clone()).or_default().push(r);
    }
    order
        .into_iter()
        .map(|m| {
            let rs = &groups[&m];
            let ok: Vec<&&ScanRow> = rs.iter().filter(|r| r.is_ok()).collect();
            let n = ok.len();
            let errs: Vec<f64> = ok.iter().map(|r| r.error_vs_fci.abs()).collect();
            MethodSummary {
                method: m.clone(),
                mean_abs_error: if n == 0 { f64::NAN } else { errs.iter().sum::<f64>() / n as f64 },
                max_abs_error: errs.iter().copied().fold(0.0, f64::max),
                max_parameter_count: ok.iter().map(|r| r.parameter_count).max().unwrap_or(0),
                n_points: n,
                n_failed: rs.len() - n,
            }
        })
        .collect()
}

/// Writes rows as CSV; the header is written even when `rows` is empty.
pub fn write_rows_csv<W: Write>(writer: W, rows: &[ScanRow]) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(writer);
    w.write_record(ScanRow::HEADER)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_rows_csv<R: Read>(reader: R) -> Result<Vec<ScanRow>> {
    let mut r = csv::Reader::from_reader(reader);
    let headers = r.headers()?.clone();
    if headers.iter().ne(ScanRow::HEADER.iter().copied()) {
        return Err(Error::InvalidInput(format!("unexpected CSV header: {headers:?}")));
    }
    r.deserialize().map(|row| row.map_err(Error::from)).collect()
}

/// Writes `rows.csv` and `summary.json` into `dir`.
pub fn write_report(dir: impl AsRef<Path>, report: &ScanReport) -> Result<()> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir)?;
    write_rows_csv(std::fs::File::create(dir.join("rows.csv"))?, &report.rows)?;
    let summary = serde_json::json!({ "molecule": report.molecule, "summary": report.summary });
    std::fs::write(dir.join("summary.json"), serde_json::to_string_pretty(&summary)?)?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub strategy: StrategyKind,
    pub seed: u64,
    /// Optimized energy after each added operator; entry `n - 1` holds
    /// the energy with `n` operators.
    pub energies: Vec<f64>,
    pub labels: Vec<String>,
}

impl Trajectory {
    /// Energy with `n` operators; a run that stopped early keeps its final
    /// energy.
    pub fn energy_at(&self, n: usize, reference_energy: f64) -> f64 {
        if n == 0 || self.energies.is_empty() {
            return reference_energy;
        }
        self.energies[(n - 1).min(self.energies.len() - 1)]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderingComparison {
    pub reference_energy: f64,
    pub fci_energy: f64,
    pub max_ops: usize,
    pub trajectories: Vec<Trajectory>,
    pub uccsd_parameter_count: usize,
    pub uccsd_energy: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrderingOptions {
    pub max_ops: usize,
    /// Gradient threshold for every strategy; small so that runs use the full budget.
    pub epsilon: f64,
    pub inner: BfgsOptions,
}

impl Default for OrderingOptions {
    fn default() -> Self {
        OrderingOptions { max_ops: 40, epsilon: 1e-6, inner: BfgsOptions::default() }
    }
}

/// Energy-versus-operator-count trajectories for each strategy. Random
/// strategies run once per seed; the others once.
pub fn run_ordering_comparison(
    ham: &MolecularHamiltonian,
    strategies: &[StrategyKind],
    seeds: &[u64],
    opts: &OrderingOptions,
) -> Result<OrderingComparison> {
    run_ordering_comparison_with(ham, strategies, seeds, opts, |_| {})
}

pub fn run_ordering_comparison_with(
    ham: &MolecularHamiltonian,
    strategies: &[StrategyKind],
    seeds: &[u64],
    opts: &OrderingOptions,
    mut on_trajectory: impl FnMut(&Trajectory),
) -> Result<OrderingComparison> {
    let fci_energy = fci_ground_energy(ham, reference_sector(ham))?;
    let mut trajectories = Vec::new();
    let mut reference_energy = f64::NAN;
    let mut sims: BTreeMap<bool, (Vec<_>, SectorSimulator)> = BTreeMap::new();
    for &kind in strategies {
        let restricted = kind.restriction() == crate::fermion::pool::PoolRestriction::HfRestrictedIjab;
        if !sims.contains_key(&restricted) {
            let pool = strategy_pool(ham, kind)?;
            let sim = SectorSimulator::new(ham, &pool)?;
            sims.insert(restricted, (pool, sim));
        }
        let (pool, sim) = &sims[&restricted];
        let run_seeds: Vec<u64> = if kind.is_random() { seeds.to_vec() } else { vec![0] };
        for seed in run_seeds {
            let config = AdaptConfig {
                strategy: GrowthStrategy::new(kind, seed),
                max_ops: opts.max_ops,
                inner: opts.inner,
                stall_window: None,
                ..AdaptConfig::new(opts.epsilon)
            };
            let r = run_adapt(sim, pool, &config)?;
            reference_energy = r.reference_energy;
            let t = Trajectory { strategy: kind, seed, energies: r.energy_trajectory(), labels: r.labels };
            on_trajectory(&t);
            trajectories.push(t);
        }
    }
    let u = uccsd_vqe(ham, &opts.inner)?;
    if reference_energy.is_nan() {
        reference_energy = hf_energy(ham)?;
    }
    Ok(OrderingComparison {
        reference_energy,
        fci_energy,
        max_ops: opts.max_ops,
        trajectories,
        uccsd_parameter_count: u.parameter_count,
        uccsd_energy: u.vqe.energy,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRow {
    pub strategy: String,
    pub seed: u64,
    pub parameter_count: usize,
    pub energy: f64,
    pub error_vs_fci: f64,
}

impl OrderingComparison {
    /// One row per stored point, plus the UCCSD point under strategy `uccsd`.
    pub fn rows(&self) -> Vec<TrajectoryRow> {
        let mut rows = Vec::new();
        for t in &self.trajectories {
            for (i, &e) in t.energies.iter().enumerate() {
                rows.push(TrajectoryRow {
                    strategy: t.strategy.name().into(),
                    seed: t.seed,
                    parameter_count: i + 1,
                    energy: e,
                    error_vs_fci: (e - self.fci_energy) * HARTREE_TO_KCAL,
                });
            }
        }
        rows.push(TrajectoryRow {
            strategy: "uccsd".into(),
            seed: 0,
            parameter_count: self.uccsd_parameter_count,
            energy: self.uccsd_energy,
            error_vs_fci: (self.uccsd_energy - self.fci_energy) * HARTREE_TO_KCAL,
        });
        rows
    }

    /// Writes `trajectories.csv` and `orderings.json` into `dir`.
    pub fn write(&self, dir: impl AsRef<Path>) -> Result<()> {
        let dir = dir.as_ref();
        std::fs::create_dir_all(dir)?;
        let mut w = csv::Writer::from_path(dir.join("trajectories.csv"))?;
        for r in self.rows() {
            w.serialize(r)?;
        }
        w.flush()?;
        std::fs::write(dir.join("orderings.json"), serde_json::to_string_pretty(self)?)?;
        Ok(())
    }
}
