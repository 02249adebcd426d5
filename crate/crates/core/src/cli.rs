//! Command-line front end. Every run is described by a [`RunManifest`];
//! replaying a stored manifest reproduces the output byte for byte.

use std::ffi::OsString;
use std::f64::consts::PI;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::correlation::{
    density_semicircle, kernel_semicircle, kernel_strip, pdf_special_start, two_point_semicircle,
    KernelSpec,
};
use crate::error::{domain, Error, Result};
use crate::figures::{figure, FigureData, FigureGrid};
use crate::graph_fomin::{
    brute_force_fomin_with, fomin_det, read_network, BoundaryTuple, Network, DEFAULT_WALK_BUDGET,
};
use crate::lattice::{boundary_kernel_refinement, density_refinement};
use crate::numerics::exec::configure_threads;
use crate::numerics::{Execution, TailBounded};
use crate::passage_densities::{joint_pdf, pdf_first_passage, pdf_first_passage_finite};
use crate::rect_kernels::{crossing_exponent, fit_crossing_exponent, RectConfig, SeriesPolicy};
use crate::validation::{lattice_density_points, lattice_kernel_points, Report, Suite};
use crate::weyl::{ChamberSequence, WeylPoint};

/// Parse a real number or a rational multiple of π such as `pi/2`,
/// `3pi/4`, `2*pi/3` or `π`.
pub fn parse_angle(s: &str) -> Result<f64> {
    let t = s.trim().to_lowercase().replace('π', "pi");
    let v = match t.find("pi") {
        Some(at) => {
            let (left, right) = (t[..at].trim().trim_end_matches('*').trim(), t[at + 2..].trim());
            let num = match left {
                "" | "+" => 1.0,
                "-" => -1.0,
                l => l.parse::<f64>().map_err(|_| Error::Parse(format!("bad coefficient in {s:?}")))?,
            };
            let den = match right.strip_prefix('/') {
                None if right.is_empty() => 1.0,
                None => return Err(Error::Parse(format!("unexpected {right:?} in {s:?}"))),
                Some(d) => d.trim().parse::<f64>().map_err(|_| Error::Parse(format!("bad denominator in {s:?}")))?,
            };
            num * PI / den
        }
        None => t.parse::<f64>().map_err(|_| Error::Parse(format!("not a number: {s:?}")))?,
    };
    if !v.is_finite() {
        return Err(Error::Parse(format!("{s:?} is not finite")));
    }
    Ok(v)
}

fn angle_arg(s: &str) -> std::result::Result<f64, String> {
    parse_angle(s).map_err(|e| e.to_string())
}

/// Comma-separated angles forming one point of the Weyl chamber.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AngleList(pub Vec<f64>);

impl FromStr for AngleList {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.split(',').map(parse_angle).collect::<Result<Vec<_>>>().map(AngleList)
    }
}

impl AngleList {
    fn weyl(&self) -> Result<WeylPoint> {
        WeylPoint::new(self.0.clone())
    }
}

fn angle_list_arg(s: &str) -> std::result::Result<AngleList, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Domain {
    /// half strip `x > 0, 0 < θ < π`; coordinates `(x, θ)`
    Strip,
    /// outside the unit half disk; coordinates `(r, θ)`
    Semicircle,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Args)]
pub struct KernelArgs {
    #[arg(long, value_enum, default_value = "strip")]
    pub domain: Domain,
    #[arg(long = "N")]
    pub n: usize,
    /// `x` on the strip or `r` on the semicircle domain
    #[arg(long, value_delimiter = ',', value_parser = angle_arg, required = true)]
    pub x: Vec<f64>,
    #[arg(long, value_delimiter = ',', value_parser = angle_arg, required = true)]
    pub theta: Vec<f64>,
    #[arg(long, value_delimiter = ',', value_parser = angle_arg, required = true)]
    pub xp: Vec<f64>,
    #[arg(long, value_delimiter = ',', value_parser = angle_arg, required = true)]
    pub thetap: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Args)]
pub struct DensityArgs {
    #[arg(long, value_enum, default_value = "semicircle")]
    pub domain: Domain,
    #[arg(long = "N")]
    pub n: usize,
    /// `x` on the strip or `r` on the semicircle domain
    #[arg(long, value_delimiter = ',', value_parser = angle_arg, required = true)]
    pub x: Vec<f64>,
    #[arg(long, value_delimiter = ',', value_parser = angle_arg, required = true)]
    pub theta: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Args)]
pub struct TwoPointArgs {
    #[arg(long = "N")]
    pub n: usize,
    #[arg(long, value_parser = angle_arg)]
    pub r: f64,
    #[arg(long, value_parser = angle_arg)]
    pub theta: f64,
    #[arg(long, value_delimiter = ',', value_parser = angle_arg, required = true)]
    pub rp: Vec<f64>,
    #[arg(long, value_delimiter = ',', value_parser = angle_arg, required = true)]
    pub thetap: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Args)]
pub struct PdfArgs {
    /// Rectangle width `L`; omit for the half strip.
    #[arg(long, value_parser = angle_arg)]
    pub width: Option<f64>,
    /// Position of the cut.
    #[arg(long, value_parser = angle_arg)]
    pub x: f64,
    /// Starting angles; omit together with `--special` for the start at `iπ/2`.
    #[arg(long, value_parser = angle_list_arg, required_unless_present = "special")]
    pub phi: Option<AngleList>,
    /// All paths start at `iπ/2` (half strip only).
    #[arg(long, conflicts_with_all = ["phi", "width"])]
    pub special: bool,
    /// Exit angles; repeat for several evaluation points.
    #[arg(long, value_parser = angle_list_arg, required = true)]
    pub theta: Vec<AngleList>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Args)]
pub struct JointPdfArgs {
    #[arg(long, value_parser = angle_arg)]
    pub width: Option<f64>,
    #[arg(long, value_delimiter = ',', value_parser = angle_arg, required = true)]
    pub cuts: Vec<f64>,
    #[arg(long, value_parser = angle_list_arg)]
    pub phi: AngleList,
    /// Angles on each cut, in cut order.
    #[arg(long, value_parser = angle_list_arg, required = true)]
    pub theta: Vec<AngleList>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Args)]
pub struct FominArgs {
    /// Edge-list network file.
    #[arg(long, conflicts_with = "grid", required_unless_present = "grid")]
    pub network: Option<PathBuf>,
    /// Square-lattice grid `nx,ny` of interior sites.
    #[arg(long, value_delimiter = ',')]
    pub grid: Option<Vec<usize>>,
    /// Step weight on the grid.
    #[arg(long, default_value_t = 0.25)]
    pub weight: f64,
    /// Start vertices: ids, or `i:j` sites on a grid.
    #[arg(long, value_delimiter = ',', required = true)]
    pub a: Vec<String>,
    /// End vertices, same format as `--a`.
    #[arg(long, value_delimiter = ',', required = true)]
    pub b: Vec<String>,
    /// Longest walk enumerated by the brute force.
    #[arg(long, default_value_t = 14)]
    pub max_len: usize,
    /// Cap on enumerated walks per start/end pair.
    #[arg(long, default_value_t = DEFAULT_WALK_BUDGET)]
    pub budget: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Args)]
pub struct CrossingArgs {
    #[arg(long = "N")]
    pub n: usize,
    /// Starting angles; equispaced by default.
    #[arg(long, value_parser = angle_list_arg)]
    pub phi: Option<AngleList>,
    /// End angles; equispaced by default.
    #[arg(long, value_parser = angle_list_arg)]
    pub rho: Option<AngleList>,
    #[arg(long, value_delimiter = ',', value_parser = angle_arg, default_value = "6,8,10,12")]
    pub widths: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum LatticeQuantity {
    BoundaryKernel,
    Density,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Args)]
pub struct LatticeArgs {
    #[arg(long, value_enum, default_value = "boundary-kernel")]
    pub quantity: LatticeQuantity,
    /// Cells across the height `π` at each level.
    #[arg(long, value_delimiter = ',', default_value = "16,32,64")]
    pub levels: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Args)]
pub struct FigureArgs {
    /// 7: density for N=3; 8, 9: two-point function on the arc r=4 for
    /// N=5, 20; 10: planar two-point function for N=3 with a point at 2i
    #[arg(long)]
    pub id: u32,
    /// Samples per axis of planar plots.
    #[arg(long, default_value_t = 81)]
    pub planar: usize,
    /// Angles sampled on an arc.
    #[arg(long, default_value_t = 2001)]
    pub angular: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Args)]
pub struct ValidateArgs {
    /// Suite to run; all suites when omitted.
    #[arg(long, value_enum)]
    pub suite: Option<Suite>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Subcommand)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum Command {
    /// Correlation kernel on a grid of point pairs.
    Kernel(KernelArgs),
    /// One-point density of first passage points.
    Density(DensityArgs),
    /// Two-point function on the semicircle domain.
    TwoPoint(TwoPointArgs),
    /// First-passage density on one cut.
    Pdf(PdfArgs),
    /// Joint first-passage density on several cuts.
    JointPdf(JointPdfArgs),
    /// Fomin determinant against brute-force enumeration.
    FominCheck(FominArgs),
    /// Fit the crossing exponent over a range of widths.
    CrossingExponent(CrossingArgs),
    /// Lattice-versus-continuum refinement table.
    LatticeValidate(LatticeArgs),
    /// Data behind the semicircle plots.
    Figure(FigureArgs),
    /// Run validation suites and report measured errors.
    Validate(ValidateArgs),
}

/// Everything that determines the output of a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool_version: String,
    pub command: Command,
    pub policy: SeriesPolicy,
    pub execution: Execution,
    pub output: Option<PathBuf>,
}

impl RunManifest {
    pub fn new(command: Command) -> Self {
        RunManifest {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            command,
            policy: SeriesPolicy::default(),
            execution: Execution::default(),
            output: None,
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self).map_err(|e| Error::Parse(e.to_string()))?;
        std::fs::write(path, text + "\n")?;
        Ok(())
    }
}

#[derive(Debug, Parser)]
#[command(name = "lebp", version, about = "Nonintersecting loop-erased paths: kernels, densities and checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Option<Command>,
    /// Replay a stored run manifest.
    #[arg(long, conflicts_with = "save_manifest")]
    pub manifest: Option<PathBuf>,
    /// Store the manifest of this run.
    #[arg(long)]
    pub save_manifest: Option<PathBuf>,
    /// Output file; standard output by default.
    #[arg(short, long, global = true)]
    pub output: Option<PathBuf>,
    /// Worker threads.
    #[arg(long, env = "LEBP_THREADS", global = true)]
    pub threads: Option<usize>,
    /// Run every loop on the calling thread.
    #[arg(long, global = true)]
    pub sequential: bool,
    /// Target for certified series tail bounds.
    #[arg(long, default_value_t = 1e-15, global = true)]
    pub tol: f64,
    /// Hard cap on series indices.
    #[arg(long, default_value_t = 100_000, global = true)]
    pub n_max: u64,
    /// Smallest accepted distance to a singular edge.
    #[arg(long, default_value_t = 1e-3, global = true)]
    pub min_gap: f64,
}

impl Cli {
    fn manifest(self) -> Result<RunManifest> {
        let mut m = match (self.manifest, self.command) {
            (Some(_), Some(_)) => return Err(domain("give either a subcommand or --manifest")),
            (Some(path), None) => RunManifest::load(&path)?,
            (None, Some(cmd)) => {
                let mut m = RunManifest::new(cmd);
                m.policy = SeriesPolicy::new(self.tol, self.n_max, self.min_gap)?;
                if self.sequential {
                    m.execution = Execution::Sequential;
                }
                m
            }
            (None, None) => return Err(domain("a subcommand or --manifest is required")),
        };
        if self.output.is_some() {
            m.output = self.output;
        }
        if let Some(path) = self.save_manifest {
            m.save(&path)?;
        }
        Ok(m)
    }
}

/// Number with 17 significant digits.
fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn angles(v: &[f64]) -> String {
    v.iter().map(|&a| num(a)).collect::<Vec<_>>().join(" ")
}

struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn write(&self, out: &mut dyn Write) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| Error::Io(e.to_string());
        w.write_record(&self.header).map_err(io)?;
        for r in &self.rows {
            w.write_record(r).map_err(io)?;
        }
        w.flush()?;
        Ok(())
    }
}

fn tb_row(mut lead: Vec<String>, v: TailBounded) -> Vec<String> {
    lead.push(num(v.value));
    lead.push(num(v.bound));
    lead
}

fn kernel_table(a: &KernelArgs, pol: &SeriesPolicy, exec: Execution) -> Result<Table> {
    let mut pts = Vec::new();
    for &x in &a.x {
        for &t in &a.theta {
            for &xp in &a.xp {
                for &tp in &a.thetap {
                    pts.push((x, t, xp, tp));
                }
            }
        }
    }
    let rows = exec
        .map(&pts, |&(x, t, xp, tp)| {
            let v = match a.domain {
                Domain::Strip => kernel_strip(&KernelSpec::new(a.n, x, t, xp, tp)?, pol)?,
                Domain::Semicircle => kernel_semicircle(a.n, x, t, xp, tp, pol)?,
            };
            Ok(tb_row(vec![num(x), num(t), num(xp), num(tp)], v))
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let header = match a.domain {
        Domain::Strip => vec!["x", "theta", "x_prime", "theta_prime", "value", "tail_bound"],
        Domain::Semicircle => vec!["r", "theta", "r_prime", "theta_prime", "value", "tail_bound"],
    };
    Ok(Table { header, rows })
}

fn density_table(a: &DensityArgs, pol: &SeriesPolicy, exec: Execution) -> Result<Table> {
    let pts: Vec<(f64, f64)> =
        a.x.iter().flat_map(|&x| a.theta.iter().map(move |&t| (x, t))).collect();
    let rows = exec
        .map(&pts, |&(x, t)| {
            let v = match a.domain {
                Domain::Strip => kernel_strip(&KernelSpec::new(a.n, x, t, x, t)?, pol)?,
                Domain::Semicircle => TailBounded::exact(density_semicircle(a.n, x, t)?),
            };
            Ok(tb_row(vec![num(x), num(t)], v))
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let header = match a.domain {
        Domain::Strip => vec!["x", "theta", "value", "tail_bound"],
        Domain::Semicircle => vec!["r", "theta", "value", "tail_bound"],
    };
    Ok(Table { header, rows })
}

fn two_point_table(a: &TwoPointArgs, pol: &SeriesPolicy, exec: Execution) -> Result<Table> {
    let pts: Vec<(f64, f64)> =
        a.rp.iter().flat_map(|&r| a.thetap.iter().map(move |&t| (r, t))).collect();
    let rows = exec
        .map(&pts, |&(rp, tp)| {
            let v = two_point_semicircle(a.n, a.r, a.theta, rp, tp, pol)?;
            Ok(tb_row(vec![num(a.r), num(a.theta), num(rp), num(tp)], v))
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    Ok(Table { header: vec!["r", "theta", "r_prime", "theta_prime", "value", "tail_bound"], rows })
}

fn pdf_table(a: &PdfArgs, pol: &SeriesPolicy) -> Result<Table> {
    let mut rows = Vec::new();
    for t in &a.theta {
        let theta = t.weyl()?;
        let v = match (&a.phi, a.width) {
            _ if a.special => pdf_special_start(a.x, &theta)?,
            (Some(phi), Some(l)) => pdf_first_passage_finite(&RectConfig::new(l)?, pol, a.x, &theta, &phi.weyl()?)?,
            (Some(phi), None) => pdf_first_passage(pol, a.x, &theta, &phi.weyl()?)?,
            (None, _) => return Err(domain("--phi is required unless --special is given")),
        };
        rows.push(vec![num(a.x), angles(&t.0), num(v)]);
    }
    Ok(Table { header: vec!["x", "theta", "value"], rows })
}

fn joint_pdf_table(a: &JointPdfArgs, pol: &SeriesPolicy) -> Result<Table> {
    let seq = ChamberSequence::new(a.cuts.clone(), a.width)?;
    let thetas = a.theta.iter().map(AngleList::weyl).collect::<Result<Vec<_>>>()?;
    let v = joint_pdf(pol, &seq, &thetas, &a.phi.weyl()?)?;
    let all: Vec<String> = a.theta.iter().map(|t| angles(&t.0)).collect();
    Ok(Table {
        header: vec!["cuts", "theta", "value"],
        rows: vec![vec![angles(&a.cuts), all.join(" | "), num(v)]],
    })
}

fn vertex(token: &str, grid: Option<(usize, usize)>) -> Result<usize> {
    match (token.split_once(':'), grid) {
        (Some((i, j)), Some((nx, ny))) => {
            let p = |s: &str| s.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad site {token:?}")));
            Network::grid_vertex(nx, ny, p(i)?, p(j)?)
                .ok_or_else(|| domain(format!("site {token} is not on the {nx}×{ny} grid")))
        }
        (Some(_), None) => Err(domain(format!("site {token:?} needs --grid"))),
        (None, _) => token.trim().parse().map_err(|_| Error::Parse(format!("bad vertex id {token:?}"))),
    }
}

fn fomin_table(a: &FominArgs, exec: Execution) -> Result<Table> {
    let (net, grid) = match (&a.network, &a.grid) {
        (Some(path), _) => (read_network(path)?, None),
        (None, Some(g)) if g.len() == 2 => (Network::grid(g[0], g[1], a.weight)?, Some((g[0], g[1]))),
        (None, Some(_)) => return Err(domain("--grid takes two sizes, nx,ny")),
        (None, None) => return Err(domain("give --network or --grid")),
    };
    let ids = |v: &[String]| v.iter().map(|t| vertex(t, grid)).collect::<Result<Vec<_>>>();
    let ab = BoundaryTuple::new(&net, ids(&a.a)?, ids(&a.b)?)?;
    let det = fomin_det(&net, &ab)?;
    let brute = brute_force_fomin_with(&net, &ab, a.max_len, a.budget, exec)?;
    let diff = (det - brute.value).abs();
    Ok(Table {
        header: vec!["det", "brute_force", "difference", "tail_bound", "within_bound"],
        rows: vec![vec![num(det), num(brute.value), num(diff), num(brute.bound), (diff <= brute.bound).to_string()]],
    })
}

fn crossing_table(a: &CrossingArgs, pol: &SeriesPolicy) -> Result<Table> {
    let point = |p: &Option<AngleList>| match p {
        Some(l) if l.0.len() == a.n => l.weyl(),
        Some(l) => Err(domain(format!("{} angles given for N = {}", l.0.len(), a.n))),
        None => Ok(WeylPoint::equispaced(a.n)),
    };
    let (rate, intercept) = fit_crossing_exponent(pol, &point(&a.phi)?, &point(&a.rho)?, &a.widths)?;
    let target = crossing_exponent(a.n);
    let rel = if target == 0.0 { rate.abs() } else { (rate / target - 1.0).abs() };
    Ok(Table {
        header: vec!["N", "rate", "intercept", "target", "relative_error"],
        rows: vec![vec![a.n.to_string(), num(rate), num(intercept), num(target), num(rel)]],
    })
}

fn lattice_table(a: &LatticeArgs, pol: &SeriesPolicy) -> Result<Table> {
    let rows = match a.quantity {
        LatticeQuantity::BoundaryKernel => {
            boundary_kernel_refinement(&a.levels, PI, &lattice_kernel_points(), pol)?
        }
        LatticeQuantity::Density => {
            let (phi, thetas) = lattice_density_points()?;
            density_refinement(&a.levels, PI, PI / 2.0, &phi, &thetas, pol)?
        }
    };
    Ok(Table {
        header: vec!["cells", "h", "error", "ratio"],
        rows: rows
            .iter()
            .map(|r| {
                let ratio = if r.ratio.is_nan() { String::new() } else { num(r.ratio) };
                vec![r.cells.to_string(), num(r.h), num(r.error), ratio]
            })
            .collect(),
    })
}

fn figure_table(a: &FigureArgs, pol: &SeriesPolicy, exec: Execution) -> Result<Table> {
    let grid = FigureGrid { planar: a.planar.max(2), angular: a.angular.max(1) };
    Ok(match figure(a.id, grid, pol, exec)? {
        FigureData::Planar(s) => Table {
            header: vec!["x", "y", "value", "tail_bound"],
            rows: s.iter().map(|p| vec![num(p.x), num(p.y), num(p.value), num(p.tail_bound)]).collect(),
        },
        FigureData::Angular(s) => Table {
            header: vec!["theta_prime", "value", "tail_bound"],
            rows: s.iter().map(|p| vec![num(p.theta), num(p.value), num(p.tail_bound)]).collect(),
        },
    })
}

/// Execute a manifest, writing its output to `out`. Returns `false` when a
/// validation suite failed.
pub fn execute(m: &RunManifest, out: &mut dyn Write) -> Result<bool> {
    let (pol, exec) = (&m.policy, m.execution);
    let table = match &m.command {
        Command::Kernel(a) => kernel_table(a, pol, exec)?,
        Command::Density(a) => density_table(a, pol, exec)?,
        Command::TwoPoint(a) => two_point_table(a, pol, exec)?,
        Command::Pdf(a) => pdf_table(a, pol)?,
        Command::JointPdf(a) => joint_pdf_table(a, pol)?,
        Command::FominCheck(a) => fomin_table(a, exec)?,
        Command::CrossingExponent(a) => crossing_table(a, pol)?,
        Command::LatticeValidate(a) => lattice_table(a, pol)?,
        Command::Figure(a) => figure_table(a, pol, exec)?,
        Command::Validate(a) => {
            let suites = a.suite.map(|s| vec![s]).unwrap_or_else(|| Suite::ALL.to_vec());
            let reports = suites.iter().map(|s| s.run(pol, exec)).collect::<Result<Vec<Report>>>()?;
            let ok = reports.iter().all(Report::passed);
            let text = serde_json::to_string_pretty(&reports).map_err(|e| Error::Parse(e.to_string()))?;
            writeln!(out, "{text}")?;
            return Ok(ok);
        }
    };
    table.write(out)?;
    Ok(true)
}

/// Parse arguments, run, and return the process exit status: 0 on
/// success, 1 when a validation suite fails, 2 on usage or domain errors.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    configure_threads(cli.threads);
    let run = || -> Result<bool> {
        let m = cli.manifest()?;
        match &m.output {
            Some(path) => {
                let mut w = BufWriter::new(File::create(path)?);
                let ok = execute(&m, &mut w)?;
                w.flush()?;
                Ok(ok)
            }
            None => {
                let stdout = io::stdout();
                let mut lock = stdout.lock();
                execute(&m, &mut lock)
            }
        }
    };
    match run() {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
