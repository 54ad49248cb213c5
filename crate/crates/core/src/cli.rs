//! Command-line front end. Every command takes its parameters either from
//! flags or from a JSON document given with `--config`, echoes the
//! parameters into the output header, and writes CSV or JSON.
//!
//! Exit status: 0 on success, 2 for invalid input, 3 for numerical failure
//! (including a failed `check` suite).

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::checks::{run_suite, Suite};
use crate::coordmap::{cauchy_riemann_residual, conjugation_residual, MapKind, SampleGrid, TestFunction};
use crate::error::{Error, Result, Warning};
use crate::hankel::{hankel_transform, QuadratureSpec};
use crate::kernels::{
    heat_kernel, run_batch, write_batch_csv, ContourKind, ContourSpec, HeatKind, HeatQuery, KernelBatch, KernelKind,
    Order,
};
use crate::pde::Field;
use crate::sampled::SampledFunction;
use crate::solve::{compare_with_fd, solve, SolveRequest};
use crate::specfun::{
    bessel_i, bessel_j, gamma_fn, gauss_2f1, legendre_q, pochhammer, BesselSpec, HypergeometricParams, LegendreSpec,
};

/// Environment variable holding the worker-thread count.
pub const WORKERS_ENV: &str = "SINGULAR_POISSON_WORKERS";

#[derive(Debug, Parser)]
#[command(name = "singular-poisson", version, about = "Poisson and heat kernels for singular potentials")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// JSON parameter file; replaces the command's flags.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate one special function.
    Specfun(SpecfunArgs),
    /// Evaluate a Poisson kernel at one point, or a batch from --config.
    Kernel(KernelArgs),
    /// Solve a Dirichlet problem from a JSON request.
    Solve,
    /// Evaluate a heat kernel by contour inversion.
    Heat(HeatArgs),
    /// Hankel transform of a sampled function.
    Hankel(HankelArgs),
    /// Run a verification suite.
    Check(CheckArgs),
    /// Cauchy–Riemann and conjugation residuals of a coordinate map.
    MapCheck(MapCheckArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum SpecialFunction {
    Gamma,
    Pochhammer,
    Hyp2f1,
    LegendreQ,
    BesselJ,
    BesselI,
}

#[derive(Debug, Args, Serialize, Deserialize)]
#[command(allow_negative_numbers = true)]
#[serde(deny_unknown_fields)]
pub struct SpecfunArgs {
    #[arg(long, value_enum)]
    #[serde(rename = "function")]
    pub name: Option<SpecialFunction>,
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<f64>,
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z: Option<f64>,
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    /// Bessel order, or Legendre degree.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<f64>,
    /// Legendre order μ ∈ {0, 1}.
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<u8>,
    /// Exponentially scaled I_ν.
    #[arg(long)]
    #[serde(default)]
    pub scaled: bool,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct KernelArgs {
    #[arg(long, value_enum)]
    pub kind: Option<KernelKindArg>,
    #[arg(long)]
    pub nu: Option<f64>,
    #[arg(long = "Y")]
    pub height: Option<f64>,
    #[arg(long = "X")]
    pub interior: Option<f64>,
    #[arg(long = "Xp")]
    pub boundary: Option<f64>,
    #[arg(long, value_enum)]
    pub map_kind: Option<MapKindArg>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum KernelKindArg {
    Euclidean,
    Trig,
    Hyp,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum MapKindArg {
    Trig,
    HypPaper,
    HypConformal,
}

impl From<MapKindArg> for MapKind {
    fn from(m: MapKindArg) -> MapKind {
        match m {
            MapKindArg::Trig => MapKind::Trig,
            MapKindArg::HypPaper => MapKind::HypPaper,
            MapKindArg::HypConformal => MapKind::HypConformal,
        }
    }
}

#[derive(Debug, Args, Serialize, Deserialize)]
#[command(allow_negative_numbers = true)]
#[serde(deny_unknown_fields)]
pub struct HeatArgs {
    #[arg(long, value_enum)]
    pub kind: Option<HeatKindArg>,
    #[arg(long)]
    pub nu: Option<f64>,
    #[arg(long)]
    pub t: Option<f64>,
    #[arg(long = "X")]
    #[serde(rename = "X")]
    pub interior: Option<f64>,
    #[arg(long = "Xp")]
    #[serde(rename = "Xp")]
    pub boundary: Option<f64>,
    #[arg(long, value_enum)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub map_kind: Option<MapKindArg>,
    #[arg(long, value_enum)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub contour: Option<ContourArg>,
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nodes: Option<usize>,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum HeatKindArg {
    Euclidean,
    Trig,
    Hyp,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum ContourArg {
    Talbot,
    Vertical,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct HankelArgs {
    /// Two-column CSV with the input samples.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub order: Option<f64>,
    /// Largest output frequency.
    #[arg(long, default_value_t = 10.0)]
    pub omega_max: f64,
    /// Number of output frequencies on [0, omega_max].
    #[arg(long, default_value_t = 201)]
    pub points: usize,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct HankelParams {
    order: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    input: Option<SampledFunction>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    input_csv: Option<PathBuf>,
    out_grid: Vec<f64>,
    #[serde(default)]
    quadrature: QuadratureSpec,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(long, value_enum, default_value_t = Suite::All)]
    pub suite: Suite,
}

#[derive(Debug, Args, Serialize, Deserialize)]
#[command(allow_negative_numbers = true)]
#[serde(deny_unknown_fields)]
pub struct MapCheckArgs {
    #[arg(long, value_enum, default_value_t = MapKindArg::Trig)]
    #[serde(default = "default_map")]
    pub kind: MapKindArg,
    #[arg(long, default_value_t = 1.0)]
    #[serde(default = "one")]
    pub c: f64,
    #[arg(long, default_value_t = 1.5)]
    #[serde(default = "default_nu")]
    pub nu: f64,
    #[arg(long, default_value_t = 0.04)]
    #[serde(default = "default_h")]
    pub h: f64,
}

fn default_map() -> MapKindArg {
    MapKindArg::Trig
}
fn one() -> f64 {
    1.0
}
fn default_nu() -> f64 {
    1.5
}
fn default_h() -> f64 {
    0.04
}

/// Optional FD comparison attached to a solve request.
#[derive(Debug, Serialize, Deserialize)]
struct CompareParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    grid: Option<crate::pde::Grid2D>,
    probes: Vec<[f64; 2]>,
}

#[derive(Debug, Serialize, Deserialize)]
struct SolveParams {
    #[serde(flatten)]
    request: SolveRequest,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    compare: Option<CompareParams>,
}

/// Output of one command: the echoed parameters, a CSV body and the JSON
/// form of the same result.
struct Outcome {
    params: Value,
    csv: String,
    json: Value,
    warnings: Vec<Warning>,
    failed: bool,
}

fn read_config(path: &Path) -> Result<Value> {
    let text = fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

fn params_from<T: Serialize + for<'de> Deserialize<'de>>(config: Option<&Value>, flags: T) -> Result<(T, Value)> {
    match config {
        Some(v) => Ok((serde_json::from_value(v.clone())?, v.clone())),
        None => {
            let v = serde_json::to_value(&flags)?;
            Ok((flags, v))
        }
    }
}

fn need<T>(v: Option<T>, name: &str) -> Result<T> {
    v.ok_or_else(|| Error::invalid(format!("missing parameter {name}")))
}

fn specfun_cmd(args: SpecfunArgs, config: Option<&Value>) -> Result<Outcome> {
    let (p, params) = params_from(config, args)?;
    let f = need(p.name, "function")?;
    let value = match f {
        SpecialFunction::Gamma => gamma_fn(need(p.x, "x")?)?,
        SpecialFunction::Pochhammer => pochhammer(need(p.a, "a")?, need(p.n, "n")?),
        SpecialFunction::Hyp2f1 => {
            gauss_2f1(&HypergeometricParams::new(need(p.a, "a")?, need(p.b, "b")?, need(p.c, "c")?, need(p.z, "z")?))?
        }
        SpecialFunction::LegendreQ => {
            legendre_q(&LegendreSpec::new(need(p.order, "order")?, need(p.mu, "mu")?, need(p.z, "z")?))?
        }
        SpecialFunction::BesselJ => bessel_j(&BesselSpec::new(need(p.order, "order")?, need(p.x, "x")?))?,
        SpecialFunction::BesselI => bessel_i(need(p.order, "order")?, need(p.x, "x")?, p.scaled)?,
    };
    let name = serde_json::to_value(f)?;
    let name = name.as_str().unwrap_or_default().to_string();
    Ok(Outcome {
        csv: format!("function,value\n{name},{value}\n"),
        json: json!({ "function": name, "value": value }),
        params,
        warnings: Vec::new(),
        failed: false,
    })
}

fn kernel_cmd(args: KernelArgs, config: Option<&Value>) -> Result<Outcome> {
    if let Some(v) = config {
        let batch: KernelBatch = serde_json::from_value(v.clone())?;
        let rows = run_batch(&batch)?;
        let mut csv = Vec::new();
        write_batch_csv(&batch, &rows, &mut csv)?;
        let json_rows: Vec<Value> = batch
            .points
            .iter()
            .zip(&rows)
            .map(|(p, r)| json!({ "point": p, "value": r.value, "warnings": r.warnings }))
            .collect();
        let warnings = rows.iter().flat_map(|r| r.warnings.clone()).collect();
        return Ok(Outcome {
            params: v.clone(),
            csv: String::from_utf8(csv).map_err(|e| Error::invalid(e.to_string()))?,
            json: Value::Array(json_rows),
            warnings,
            failed: false,
        });
    }
    let kind = match need(args.kind, "kind")? {
        KernelKindArg::Euclidean => KernelKind::Euclidean,
        KernelKindArg::Trig => KernelKind::Trig,
        KernelKindArg::Hyp => KernelKind::Hyp,
    };
    let point = [need(args.height, "Y")?, need(args.interior, "X")?, need(args.boundary, "Xp")?];
    let batch =
        KernelBatch { kind, nu: need(args.nu, "nu")?, map_kind: args.map_kind.map(MapKind::from), points: vec![point] };
    let r = batch.evaluate(point)?;
    let mut params = json!({ "kind": batch.kind, "nu": batch.nu, "Y": point[0], "X": point[1], "Xp": point[2] });
    if let Some(m) = batch.map_kind {
        params["map_kind"] = json!(m);
    }
    let kind_name = params["kind"].as_str().unwrap_or_default().to_string();
    Ok(Outcome {
        csv: format!(
            "kind,nu,Y,X,Xp,value\n{kind_name},{},{},{},{},{}\n",
            batch.nu, point[0], point[1], point[2], r.value
        ),
        json: json!({ "value": r.value, "warnings": r.warnings }),
        params,
        warnings: r.warnings,
        failed: false,
    })
}

fn solve_cmd(config: Option<&Value>) -> Result<Outcome> {
    let v = config.ok_or_else(|| Error::invalid("solve needs --config with a solve request"))?;
    let p: SolveParams = serde_json::from_value(v.clone())?;
    let sol = solve(&p.request)?;
    let mut csv = String::from("coordinate,value\n");
    for (x, u) in sol.value.grid().iter().zip(sol.value.values()) {
        csv.push_str(&format!("{x},{u}\n"));
    }
    let mut json = json!({ "solution": sol.value, "warnings": sol.warnings });
    if let Some(cmp) = &p.compare {
        let grid = cmp.grid.unwrap_or_else(|| crate::pde::Grid2D::default_for(p.request.data.domain_tag.operator()));
        let probes: Vec<(f64, f64)> = cmp.probes.iter().map(|p| (p[0], p[1])).collect();
        json["comparison"] = serde_json::to_value(compare_with_fd(&p.request, &grid, &probes)?)?;
    }
    Ok(Outcome { params: v.clone(), csv, json, warnings: sol.warnings, failed: false })
}

fn heat_cmd(args: HeatArgs, config: Option<&Value>) -> Result<Outcome> {
    let (p, params) = params_from(config, args)?;
    let kind = match need(p.kind, "kind")? {
        HeatKindArg::Euclidean => HeatKind::Euclidean,
        HeatKindArg::Trig => HeatKind::Trig,
        HeatKindArg::Hyp => HeatKind::Hyp,
    };
    let mut contour = match p.contour {
        Some(ContourArg::Vertical) => ContourSpec::vertical(),
        _ => ContourSpec::default(),
    };
    if let Some(n) = p.nodes {
        contour.node_count = n;
    }
    let o = Order::new(need(p.nu, "nu")?)?;
    let hq = HeatQuery { time: need(p.t, "t")?, interior: need(p.interior, "X")?, boundary: need(p.boundary, "Xp")? };
    let value = heat_kernel(kind, o, hq, &contour, p.map_kind.map(MapKind::from))?;
    let contour_name = if contour.kind == ContourKind::Talbot { "talbot" } else { "vertical" };
    Ok(Outcome {
        csv: format!(
            "nu,t,X,Xp,contour,value\n{},{},{},{},{contour_name},{value}\n",
            o.nu(),
            hq.time,
            hq.interior,
            hq.boundary
        ),
        json: json!({ "value": value, "contour": contour }),
        params,
        warnings: Vec::new(),
        failed: false,
    })
}

fn hankel_cmd(args: HankelArgs, config: Option<&Value>) -> Result<Outcome> {
    let flags = || -> Result<HankelParams> {
        let n = args.points.max(2);
        let out_grid = (0..n).map(|i| args.omega_max * i as f64 / (n - 1) as f64).collect();
        Ok(HankelParams {
            order: need(args.order, "order")?,
            input: None,
            input_csv: Some(need(args.input.clone(), "input")?),
            out_grid,
            quadrature: QuadratureSpec::default(),
        })
    };
    let (p, params) = match config {
        Some(v) => (serde_json::from_value::<HankelParams>(v.clone())?, v.clone()),
        None => {
            let p = flags()?;
            let mut v = serde_json::to_value(&p)?;
            if let Some(obj) = v.as_object_mut() {
                obj.remove("out_grid");
                obj.insert("omega_max".into(), json!(args.omega_max));
                obj.insert("points".into(), json!(args.points));
            }
            (p, v)
        }
    };
    let input = match (p.input, p.input_csv) {
        (Some(f), _) => f,
        (None, Some(path)) => SampledFunction::read_csv(std::io::BufReader::new(fs::File::open(path)?))?,
        (None, None) => return Err(Error::invalid("hankel needs input or input_csv")),
    };
    let h = hankel_transform(&input, p.order, &p.out_grid, &p.quadrature)?;
    let mut csv = String::from("omega,value\n");
    for (x, u) in h.value.grid().iter().zip(h.value.values()) {
        csv.push_str(&format!("{x},{u}\n"));
    }
    Ok(Outcome { params, csv, json: json!({ "transform": h.value }), warnings: h.warnings, failed: false })
}

fn check_cmd(args: CheckArgs) -> Result<Outcome> {
    let reports = run_suite(args.suite)?;
    let failed = reports.iter().any(|r| !r.pass);
    let json = if reports.len() == 1 { serde_json::to_value(&reports[0])? } else { serde_json::to_value(&reports)? };
    let mut csv = String::from("suite,pass\n");
    for r in &reports {
        csv.push_str(&format!("{},{}\n", serde_json::to_value(r.suite)?.as_str().unwrap_or_default(), r.pass));
    }
    Ok(Outcome { params: json!({ "suite": args.suite }), csv, json, warnings: Vec::new(), failed })
}

fn map_check_cmd(args: MapCheckArgs, config: Option<&Value>) -> Result<Outcome> {
    let (p, params) = params_from(config, args)?;
    let kind = MapKind::from(p.kind);
    let grid = SampleGrid::default_for(kind);
    let report = conjugation_residual(kind, p.c, p.nu, &TestFunction::default(), &grid, p.h)?;
    let cr = grid
        .points()
        .iter()
        .map(|&(a, y)| cauchy_riemann_residual(kind, a, y, 1e-4))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0f64, f64::max);
    let mut csv = String::from("h,max_residual\n");
    for (h, m) in report.steps.iter().zip(&report.max_by_step) {
        csv.push_str(&format!("{h},{m}\n"));
    }
    Ok(Outcome {
        params,
        csv,
        json: json!({ "conjugation": report, "cauchy_riemann_max": cr }),
        warnings: Vec::new(),
        failed: false,
    })
}

/// A two-column series or a three-column field.
pub enum PlotData<'a> {
    Series(&'a SampledFunction),
    Field(&'a Field),
}

/// Writes plot-ready numbers: a one-line header, then one row per sample.
/// Fields are written row by row in the height coordinate.
pub fn emit_plot_data(data: PlotData<'_>, path: &Path, format: Format) -> Result<()> {
    let (columns, rows): (Vec<&str>, Vec<Vec<f64>>) = match data {
        PlotData::Series(s) => {
            (vec!["coordinate", "value"], s.grid().iter().zip(s.values()).map(|(x, v)| vec![*x, *v]).collect())
        }
        PlotData::Field(f) => {
            let g = &f.grid;
            let mut rows = Vec::new();
            for j in 0..=g.count2 {
                for i in 0..g.nodes1() {
                    rows.push(vec![g.node1(i), g.node2(j), f.get(i, j)]);
                }
            }
            (vec!["coord1", "coord2", "value"], rows)
        }
    };
    let mut out = std::io::BufWriter::new(fs::File::create(path)?);
    match format {
        Format::Csv => {
            writeln!(out, "{}", columns.join(","))?;
            for r in rows {
                let cells: Vec<String> = r.iter().map(|v| v.to_string()).collect();
                writeln!(out, "{}", cells.join(","))?;
            }
        }
        Format::Json => {
            writeln!(out, "{}", serde_json::to_string(&columns)?)?;
            for r in rows {
                writeln!(out, "{}", serde_json::to_string(&r)?)?;
            }
        }
    }
    out.flush()?;
    Ok(())
}

fn render(o: &Outcome, format: Format) -> Result<String> {
    Ok(match format {
        Format::Csv => format!("# {}\n{}", serde_json::to_string(&o.params)?, o.csv),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&json!({ "params": o.params, "result": o.json }))?;
            s.push('\n');
            s
        }
    })
}

fn execute(cli: Cli) -> Result<Outcome> {
    let config = match &cli.config {
        Some(p) => Some(read_config(p)?),
        None => None,
    };
    let config = config.as_ref();
    match cli.command {
        Command::Specfun(a) => specfun_cmd(a, config),
        Command::Kernel(a) => kernel_cmd(a, config),
        Command::Solve => solve_cmd(config),
        Command::Heat(a) => heat_cmd(a, config),
        Command::Hankel(a) => hankel_cmd(a, config),
        Command::Check(a) => check_cmd(a),
        Command::MapCheck(a) => map_check_cmd(a, config),
    }
}

fn exit_code(e: &Error) -> i32 {
    if e.is_numerical() {
        3
    } else {
        2
    }
}

fn log_json(value: Value) {
    eprintln!("{value}");
}

fn configure_workers() -> Result<()> {
    if let Ok(v) = std::env::var(WORKERS_ENV) {
        let n: usize =
            v.parse().map_err(|_| Error::invalid(format!("{WORKERS_ENV} must be a positive integer, got {v:?}")))?;
        if n == 0 {
            return Err(Error::invalid(format!("{WORKERS_ENV} must be positive")));
        }
        // A second call in the same process keeps the first pool.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

/// Runs the parsed command and returns the process exit status. Artifacts
/// are written only after the command has succeeded.
pub fn run(cli: Cli) -> i32 {
    if let Err(e) = configure_workers() {
        log_json(json!({ "error": e.to_string() }));
        return 2;
    }
    let format = cli.format;
    let output = cli.output.clone();
    let outcome = match execute(cli) {
        Ok(o) => o,
        Err(e) => {
            log_json(json!({ "error": e.to_string() }));
            return exit_code(&e);
        }
    };
    for w in &outcome.warnings {
        log_json(serde_json::to_value(w).unwrap_or(Value::Null));
    }
    let text = match render(&outcome, format) {
        Ok(t) => t,
        Err(e) => {
            log_json(json!({ "error": e.to_string() }));
            return 2;
        }
    };
    let written = match output {
        Some(path) => fs::write(path, text).map_err(Error::from),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(Error::from),
    };
    if let Err(e) = written {
        log_json(json!({ "error": e.to_string() }));
        return 2;
    }
    if outcome.failed {
        3
    } else {
        0
    }
}
