//! Experiment runner behind the `ris-pathid` binary.
//!
//! Every command writes one CSV file (RFC 4180, `\n` line endings) whose
//! leading `#` comment lines echo the full scene, layout, sizes, seed and trial
//! count. Files are written to a temporary sibling and renamed into place, so
//! a failed run never leaves a truncated output behind.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use crate::channel::{cascaded_channel, CascadedChannel};
use crate::detector::{analyze, Analysis};
use crate::error::{Error, Result};
use crate::montecarlo::{
    empirical_error, empirical_power_difference, ks_distance, EmpiricalCdf, Simulator, DEFAULT_TRIALS,
};
use crate::patterns::{make_partition, PartitionPolicy, PatternId};
use crate::scene::{build_layout, Scene};

/// Points on the `x` grid of `cdf-compare`.
pub const CDF_GRID_POINTS: usize = 201;

/// Upper edge of the `cdf-compare` grid, as an analytic quantile level.
pub const CDF_GRID_QUANTILE: f64 = 0.999;

#[derive(Debug, Parser)]
#[command(name = "ris-pathid", version, about = "RIS-assisted path identification: analytic detection model and Monte Carlo cross-check")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate one partition: threshold, error probability, power difference, KS distances.
    Eval(SizesArgs),
    /// Analytic vs empirical CDFs of the channel power under both patterns.
    CdfCompare(SizesArgs),
    /// Sweep the random part ratio R with N + K and M held fixed.
    SweepR(SweepRArgs),
    /// Sweep the area 2 size M with R held fixed.
    SweepM(SweepMArgs),
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Scene configuration file (`key = value` lines).
    #[arg(long)]
    pub scene: PathBuf,
    /// Monte Carlo trials per pattern and grid point.
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    pub trials: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Output CSV path.
    #[arg(long)]
    pub out: PathBuf,
    /// Element-to-area layout: contiguous, dynamic-first or interleaved:<seed>.
    #[arg(long, default_value = "dynamic-first")]
    pub layout: PartitionPolicy,
}

#[derive(Debug, Args)]
pub struct SizesArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub k: usize,
}

#[derive(Debug, Args)]
pub struct SweepRArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// `start:stop:step`, inclusive.
    #[arg(long = "r-grid")]
    pub r_grid: Grid,
    /// Fixed N + K.
    #[arg(long)]
    pub nk: usize,
    #[arg(long)]
    pub m: usize,
}

#[derive(Debug, Args)]
pub struct SweepMArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// `start:stop:step`, inclusive, integer values.
    #[arg(long = "m-grid")]
    pub m_grid: Grid,
    #[arg(long)]
    pub r: f64,
}

/// Inclusive arithmetic grid given as `start:stop:step`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub values: Vec<f64>,
}

impl FromStr for Grid {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Experiment(format!("grid `{s}` must be start:stop:step"));
        let parts: Vec<f64> = s
            .split(':')
            .map(|p| p.trim().parse::<f64>().map_err(|_| bad()))
            .collect::<Result<_>>()?;
        let [start, stop, step] = parts[..] else { return Err(bad()) };
        if !(start.is_finite() && stop.is_finite() && step.is_finite()) {
            return Err(bad());
        }
        if step <= 0.0 {
            return Err(Error::Experiment(format!("grid `{s}` needs a positive step")));
        }
        if stop < start {
            return Err(Error::Experiment(format!("grid `{s}` is empty")));
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
        Ok(Grid { values: (0..count).map(|i| start + i as f64 * step).collect() })
    }
}

impl std::fmt::Display for Grid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let items: Vec<String> = self.values.iter().map(|v| v.to_string()).collect();
        f.write_str(&items.join(" "))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Experiment {
    Eval { n: usize, m: usize, k: usize },
    CdfCompare { n: usize, m: usize, k: usize },
    SweepR { r_grid: Vec<f64>, nk: usize, m: usize },
    SweepM { m_grid: Vec<usize>, r: f64 },
}

impl Experiment {
    pub fn name(&self) -> &'static str {
        match self {
            Experiment::Eval { .. } => "eval",
            Experiment::CdfCompare { .. } => "cdf-compare",
            Experiment::SweepR { .. } => "sweep-r",
            Experiment::SweepM { .. } => "sweep-m",
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    pub experiment: Experiment,
    pub scene: Scene,
    pub layout: PartitionPolicy,
    pub n_trials: usize,
    pub seed: u64,
    pub out: PathBuf,
}

fn strictly_increasing(values: &[f64]) -> bool {
    values.windows(2).all(|w| w[0] < w[1])
}

impl ExperimentSpec {
    pub fn from_cli(cli: Cli) -> Result<Self> {
        let (common, experiment) = match cli.command {
            Command::Eval(a) => (a.common, Experiment::Eval { n: a.n, m: a.m, k: a.k }),
            Command::CdfCompare(a) => (a.common, Experiment::CdfCompare { n: a.n, m: a.m, k: a.k }),
            Command::SweepR(a) => (a.common, Experiment::SweepR { r_grid: a.r_grid.values, nk: a.nk, m: a.m }),
            Command::SweepM(a) => {
                let m_grid = a
                    .m_grid
                    .values
                    .iter()
                    .map(|&v| {
                        if v >= 0.0 && v.fract() == 0.0 {
                            Ok(v as usize)
                        } else {
                            Err(Error::Experiment(format!("M grid value {v} is not a nonnegative integer")))
                        }
                    })
                    .collect::<Result<_>>()?;
                (a.common, Experiment::SweepM { m_grid, r: a.r })
            }
        };
        let spec = ExperimentSpec {
            experiment,
            scene: Scene::load(&common.scene)?,
            layout: common.layout,
            n_trials: common.trials,
            seed: common.seed,
            out: common.out,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        self.scene.validate()?;
        if self.n_trials == 0 {
            return Err(Error::Experiment("--trials must be at least 1".into()));
        }
        match &self.experiment {
            Experiment::SweepR { r_grid, .. } => {
                if r_grid.is_empty() || !strictly_increasing(r_grid) {
                    return Err(Error::Experiment("R grid must be nonempty and strictly increasing".into()));
                }
            }
            Experiment::SweepM { m_grid, r } => {
                if m_grid.is_empty() || !m_grid.windows(2).all(|w| w[0] < w[1]) {
                    return Err(Error::Experiment("M grid must be nonempty and strictly increasing".into()));
                }
                if !(0.0..=1.0).contains(r) {
                    return Err(Error::Experiment(format!("R must lie in [0, 1], got {r}")));
                }
            }
            _ => {}
        }
        Ok(())
    }
}

/// One row of `eval`, `sweep-r` or `sweep-m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointResult {
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub r: f64,
    pub p_error_analytic: f64,
    pub p_error_empirical: f64,
    pub g_d_analytic_db: f64,
    pub g_d_empirical_db: f64,
    pub gamma: f64,
    pub mu1: f64,
    pub mu2: f64,
    pub ks_p1: f64,
    pub ks_p2: f64,
}

/// Shortest round-trip text, switching to exponent form for very small or large values.
struct Num(f64);

impl std::fmt::Display for Num {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let a = self.0.abs();
        if a == 0.0 || (1e-4..1e15).contains(&a) || !a.is_finite() {
            write!(f, "{}", self.0)
        } else {
            write!(f, "{:e}", self.0)
        }
    }
}

/// Independent seed for one (grid point, pattern) pair.
pub fn derive_seed(seed: u64, point: usize, pattern: PatternId) -> u64 {
    fn splitmix(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
    splitmix(seed ^ splitmix(((point as u64) << 1) | pattern as u64))
}

struct PointRun {
    analysis: Analysis,
    result: PointResult,
    h1: crate::montecarlo::TrialBatch,
    h2: crate::montecarlo::TrialBatch,
}

fn run_point(
    channel: &CascadedChannel,
    spec: &ExperimentSpec,
    point: usize,
    (n, m, k): (usize, usize, usize),
) -> Result<PointRun> {
    let q = spec.scene.num_elements;
    let partition = make_partition(q, n, m, k, spec.layout)?;
    let noise_variance = spec.scene.noise_variance();
    let analysis = analyze(channel, &partition, noise_variance)?;
    let sim = Simulator::new(channel, &partition, noise_variance)?;
    let h1 = sim.batch(PatternId::Pattern1, spec.n_trials, derive_seed(spec.seed, point, PatternId::Pattern1))?;
    let h2 = sim.batch(PatternId::Pattern2, spec.n_trials, derive_seed(spec.seed, point, PatternId::Pattern2))?;
    let report = analysis.report;
    let result = PointResult {
        n,
        m,
        k,
        r: report.r_ratio,
        p_error_analytic: report.p_error,
        p_error_empirical: empirical_error(&h1, &h2, report.threshold),
        g_d_analytic_db: report.g_d_db,
        g_d_empirical_db: empirical_power_difference(&h1, &h2),
        gamma: report.threshold,
        mu1: report.mean_h1,
        mu2: report.mean_h2,
        ks_p1: ks_distance(&h1, &analysis.h1)?,
        ks_p2: ks_distance(&h2, &analysis.h2)?,
    };
    Ok(PointRun { analysis, result, h1, h2 })
}

fn scene_channel(scene: &Scene) -> Result<CascadedChannel> {
    cascaded_channel(scene, &build_layout(scene)?)
}

fn header(spec: &ExperimentSpec, extra: &[String]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# ris-pathid {}", spec.experiment.name());
    let _ = writeln!(out, "# layout = {}", spec.layout);
    let _ = writeln!(out, "# trials = {}", spec.n_trials);
    let _ = writeln!(out, "# seed = {}", spec.seed);
    for line in extra {
        let _ = writeln!(out, "# {line}");
    }
    for line in spec.scene.to_config_string().lines() {
        let _ = writeln!(out, "# scene: {line}");
    }
    out
}

fn sizes_line(n: usize, m: usize, k: usize) -> String {
    format!("n = {n}, m = {m}, k = {k}")
}

pub fn run_eval(spec: &ExperimentSpec) -> Result<(PointResult, String)> {
    let Experiment::Eval { n, m, k } = spec.experiment else {
        return Err(Error::Experiment("run_eval needs an eval experiment".into()));
    };
    let channel = scene_channel(&spec.scene)?;
    let r = run_point(&channel, spec, 0, (n, m, k))?.result;
    let mut csv = header(spec, &[sizes_line(n, m, k)]);
    csv.push_str(
        "n,m,k,r,gamma,mu1,mu2,p_error_analytic,p_error_empirical,g_d_analytic_db,g_d_empirical_db,ks_distance_p1,ks_distance_p2\n",
    );
    let _ = writeln!(
        csv,
        "{},{},{},{},{},{},{},{},{},{},{},{},{}",
        r.n,
        r.m,
        r.k,
        Num(r.r),
        Num(r.gamma),
        Num(r.mu1),
        Num(r.mu2),
        Num(r.p_error_analytic),
        Num(r.p_error_empirical),
        Num(r.g_d_analytic_db),
        Num(r.g_d_empirical_db),
        Num(r.ks_p1),
        Num(r.ks_p2)
    );
    Ok((r, csv))
}

const SWEEP_COLUMNS: &str =
    "R,K,N,p_error_analytic,p_error_empirical,g_d_analytic_db,g_d_empirical_db,gamma,mu1,mu2";

fn sweep_row(r: &PointResult) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{},{}",
        Num(r.r),
        r.k,
        r.n,
        Num(r.p_error_analytic),
        Num(r.p_error_empirical),
        Num(r.g_d_analytic_db),
        Num(r.g_d_empirical_db),
        Num(r.gamma),
        Num(r.mu1),
        Num(r.mu2)
    )
}

fn ratio_to_count(r: f64, q: usize) -> usize {
    (r * q as f64).round() as usize
}

/// Sizes `(N, M, K)` for every point of an R sweep.
pub fn sweep_r_sizes(q: usize, r_grid: &[f64], nk: usize, m: usize) -> Result<Vec<(usize, usize, usize)>> {
    if nk + m != q {
        return Err(Error::Experiment(format!("N + K ({nk}) plus M ({m}) must equal Q ({q})")));
    }
    r_grid
        .iter()
        .map(|&r| {
            if !(0.0..=1.0).contains(&r) {
                return Err(Error::Experiment(format!("R = {r} is outside [0, 1]")));
            }
            let k = ratio_to_count(r, q);
            if k >= nk {
                return Err(Error::Experiment(format!("R = {r} leaves no elements for area 1")));
            }
            Ok((nk - k, m, k))
        })
        .collect()
}

/// Sizes `(N, M, K)` for every point of an M sweep.
pub fn sweep_m_sizes(q: usize, m_grid: &[usize], r: f64) -> Result<Vec<(usize, usize, usize)>> {
    let k = ratio_to_count(r, q);
    m_grid
        .iter()
        .map(|&m| {
            if m + k >= q {
                return Err(Error::Experiment(format!("M = {m} with K = {k} leaves no elements for area 1")));
            }
            Ok((q - m - k, m, k))
        })
        .collect()
}

fn run_sweep(spec: &ExperimentSpec, sizes: &[(usize, usize, usize)]) -> Result<Vec<PointResult>> {
    let channel = scene_channel(&spec.scene)?;
    sizes
        .par_iter()
        .enumerate()
        .map(|(i, &s)| run_point(&channel, spec, i, s).map(|p| p.result))
        .collect()
}

pub fn run_sweep_r(spec: &ExperimentSpec) -> Result<(Vec<PointResult>, String)> {
    let Experiment::SweepR { r_grid, nk, m } = &spec.experiment else {
        return Err(Error::Experiment("run_sweep_r needs a sweep-r experiment".into()));
    };
    let sizes = sweep_r_sizes(spec.scene.num_elements, r_grid, *nk, *m)?;
    let rows = run_sweep(spec, &sizes)?;
    let grid: Vec<String> = r_grid.iter().map(|v| v.to_string()).collect();
    let mut csv = header(spec, &[format!("nk = {nk}, m = {m}"), format!("r_grid = {}", grid.join(" "))]);
    csv.push_str(SWEEP_COLUMNS);
    csv.push('\n');
    for r in &rows {
        csv.push_str(&sweep_row(r));
        csv.push('\n');
    }
    Ok((rows, csv))
}

pub fn run_sweep_m(spec: &ExperimentSpec) -> Result<(Vec<PointResult>, String)> {
    let Experiment::SweepM { m_grid, r } = &spec.experiment else {
        return Err(Error::Experiment("run_sweep_m needs a sweep-m experiment".into()));
    };
    let sizes = sweep_m_sizes(spec.scene.num_elements, m_grid, *r)?;
    let rows = run_sweep(spec, &sizes)?;
    let grid: Vec<String> = m_grid.iter().map(|v| v.to_string()).collect();
    let mut csv = header(spec, &[format!("r = {r}"), format!("m_grid = {}", grid.join(" "))]);
    let _ = writeln!(csv, "M,{SWEEP_COLUMNS}");
    for row in &rows {
        let _ = writeln!(csv, "{},{}", row.m, sweep_row(row));
    }
    Ok((rows, csv))
}

/// One `x` of the CDF comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CdfRow {
    pub x: f64,
    pub analytic_p1: f64,
    pub empirical_p1: f64,
    pub analytic_p2: f64,
    pub empirical_p2: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CdfComparison {
    pub rows: Vec<CdfRow>,
    pub ks_p1: f64,
    pub ks_p2: f64,
}

pub fn run_cdf_compare(spec: &ExperimentSpec) -> Result<(CdfComparison, String)> {
    let Experiment::CdfCompare { n, m, k } = spec.experiment else {
        return Err(Error::Experiment("run_cdf_compare needs a cdf-compare experiment".into()));
    };
    let channel = scene_channel(&spec.scene)?;
    let point = run_point(&channel, spec, 0, (n, m, k))?;
    let (d1, d2) = (&point.analysis.h1, &point.analysis.h2);
    let (e1, e2) = (EmpiricalCdf::new(&point.h1.samples)?, EmpiricalCdf::new(&point.h2.samples)?);
    let upper = d1.quantile(CDF_GRID_QUANTILE)?.max(d2.quantile(CDF_GRID_QUANTILE)?);
    let rows = (0..CDF_GRID_POINTS)
        .into_par_iter()
        .map(|i| {
            let x = upper * i as f64 / (CDF_GRID_POINTS - 1) as f64;
            Ok(CdfRow {
                x,
                analytic_p1: d1.cdf(x)?,
                empirical_p1: e1.eval(x),
                analytic_p2: d2.cdf(x)?,
                empirical_p2: e2.eval(x),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let cmp = CdfComparison { rows, ks_p1: point.result.ks_p1, ks_p2: point.result.ks_p2 };

    let extra = [
        sizes_line(n, m, k),
        format!("scale_p1 = {}, noncentrality_p1 = {}", Num(d1.scale()), d1.noncentrality()),
        format!("scale_p2 = {}, noncentrality_p2 = {}", Num(d2.scale()), d2.noncentrality()),
    ];
    let mut csv = header(spec, &extra);
    csv.push_str("x,cdf_analytic_p1,cdf_empirical_p1,cdf_analytic_p2,cdf_empirical_p2\n");
    for r in &cmp.rows {
        let _ = writeln!(
            csv,
            "{},{},{},{},{}",
            Num(r.x),
            Num(r.analytic_p1),
            Num(r.empirical_p1),
            Num(r.analytic_p2),
            Num(r.empirical_p2)
        );
    }
    let _ = writeln!(csv, "# summary: ks_distance_p1 = {}, ks_distance_p2 = {}", cmp.ks_p1, cmp.ks_p2);
    Ok((cmp, csv))
}

/// Writes `contents` to `path` through a temporary file in the same directory.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

/// Runs the experiment, writes its CSV and returns a short summary for the terminal.
pub fn execute(spec: &ExperimentSpec) -> Result<String> {
    spec.validate()?;
    let (csv, summary) = match spec.experiment {
        Experiment::Eval { .. } => {
            let (_, csv) = run_eval(spec)?;
            let body = csv.lines().filter(|l| !l.starts_with('#')).collect::<Vec<_>>().join("\n");
            (csv, body)
        }
        Experiment::CdfCompare { .. } => {
            let (cmp, csv) = run_cdf_compare(spec)?;
            (csv, format!("ks_distance_p1 = {:.5}, ks_distance_p2 = {:.5}", cmp.ks_p1, cmp.ks_p2))
        }
        Experiment::SweepR { .. } => {
            let (_, csv) = run_sweep_r(spec)?;
            let body = csv.lines().filter(|l| !l.starts_with('#')).collect::<Vec<_>>().join("\n");
            (csv, body)
        }
        Experiment::SweepM { .. } => {
            let (_, csv) = run_sweep_m(spec)?;
            let body = csv.lines().filter(|l| !l.starts_with('#')).collect::<Vec<_>>().join("\n");
            (csv, body)
        }
    };
    write_atomic(&spec.out, &csv)?;
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scene::Point;

    #[test]
    fn grid_parsing() {
        let g: Grid = "0.025:0.25:0.025".parse().unwrap();
        assert_eq!(g.values.len(), 10);
        assert!((g.values[9] - 0.25).abs() < 1e-12);
        let g: Grid = "0:600:100".parse().unwrap();
        assert_eq!(g.values, vec![0.0, 100.0, 200.0, 300.0, 400.0, 500.0, 600.0]);
        let g: Grid = "5:5:1".parse().unwrap();
        assert_eq!(g.values, vec![5.0]);
        assert!("1:0:1".parse::<Grid>().is_err());
        assert!("0:1:0".parse::<Grid>().is_err());
        assert!("0:1".parse::<Grid>().is_err());
        assert!("a:1:1".parse::<Grid>().is_err());
    }

    #[test]
    fn sweep_sizes() {
        let sizes = sweep_r_sizes(1000, &[0.025, 0.125, 0.25], 600, 400).unwrap();
        assert_eq!(sizes, vec![(575, 400, 25), (475, 400, 125), (350, 400, 250)]);
        assert!(sweep_r_sizes(1000, &[0.1], 500, 400).is_err());
        assert!(sweep_r_sizes(1000, &[0.6], 600, 400).is_err());
        let sizes = sweep_m_sizes(1000, &[0, 300, 600], 0.1).unwrap();
        assert_eq!(sizes, vec![(900, 0, 100), (600, 300, 100), (300, 600, 100)]);
        assert!(sweep_m_sizes(1000, &[900], 0.1).is_err());
    }

    #[test]
    fn seeds_differ_per_point_and_pattern() {
        let a = derive_seed(1, 0, PatternId::Pattern1);
        assert_ne!(a, derive_seed(1, 0, PatternId::Pattern2));
        assert_ne!(a, derive_seed(1, 1, PatternId::Pattern1));
        assert_ne!(a, derive_seed(2, 0, PatternId::Pattern1));
        assert_eq!(a, derive_seed(1, 0, PatternId::Pattern1));
    }

    fn small_spec(experiment: Experiment) -> ExperimentSpec {
        ExperimentSpec {
            experiment,
            scene: Scene::table1(Point::new(7000.0, 0.0)),
            layout: PartitionPolicy::DynamicFirst,
            n_trials: 2_000,
            seed: 3,
            out: PathBuf::from("unused.csv"),
        }
    }

    #[test]
    fn eval_reports_paper_ratio() {
        let (r, csv) = run_eval(&small_spec(Experiment::Eval { n: 500, m: 400, k: 100 })).unwrap();
        assert_eq!(r.r, 0.1);
        assert!(csv.contains("\n500,400,100,0.1,"));
        assert!(csv.starts_with("# ris-pathid eval\n"));
        assert!(csv.contains("# scene: q = 1000\n"));
    }

    #[test]
    fn eval_without_dynamic_area_fails() {
        let err = run_eval(&small_spec(Experiment::Eval { n: 600, m: 400, k: 0 })).unwrap_err();
        assert!(err.to_string().contains("degenerate separation"));
    }

    #[test]
    fn validation() {
        let mut spec = small_spec(Experiment::SweepR { r_grid: vec![0.2, 0.1], nk: 600, m: 400 });
        assert!(spec.validate().is_err());
        spec.experiment = Experiment::SweepM { m_grid: vec![], r: 0.1 };
        assert!(spec.validate().is_err());
        spec.experiment = Experiment::SweepM { m_grid: vec![0, 100], r: 1.5 };
        assert!(spec.validate().is_err());
        spec.experiment = Experiment::Eval { n: 500, m: 400, k: 100 };
        spec.n_trials = 0;
        assert!(spec.validate().is_err());
    }

    #[test]
    fn atomic_write_replaces_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.csv");
        write_atomic(&path, "a\n").unwrap();
        write_atomic(&path, "b\n").unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "b\n");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
