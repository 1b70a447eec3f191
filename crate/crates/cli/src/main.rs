use std::f64::consts::PI;
use std::io::Write;
use std::process::ExitCode;
use std::str::FromStr;

use chordmean::chordfun::{
    check_inequality, chord_pmean, local_stability_closed_form, local_stability_derivative,
    polygon_expansion_check, segment_crossover_p, stadium_derivatives, stadium_threshold_p,
    RadialShrink, DEFAULT_M_LIST,
};
use chordmean::curve::{ArcLengthCurve, CurveDescriptor};
use chordmean::electro::renormalized_energy;
use chordmean::leakywire::{green_inequality_check, ground_state_with, GridSchedule};
use chordmean::search::{maximize_pmean, SearchConfig};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Map, Value};

#[derive(Parser, Debug)]
#[command(
    name = "chordmean",
    version,
    about = "Mean-chord inequalities, loop electrostatics and leaky-wire ground states"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Chord p-mean ∫|Γ(s+u) − Γ(s)|^p ds of a curve.
    ChordMean(ChordArgs),
    /// Compare the chord p-mean with the circle of equal length.
    CheckInequality(CheckArgs),
    /// Renormalized self-energy relative to the circle.
    ElectroEnergy(ElectroArgs),
    /// Lowest eigenvalue of the leaky-wire operator.
    GroundState(GroundArgs),
    /// Both sides of the K₀ double-integral inequality.
    GreenCheck(GreenArgs),
    /// Finite-difference and closed-form derivatives along the stadium family.
    StadiumDerivs(StadiumArgs),
    /// Polygon side-count expansion fit.
    PolygonFit(PolygonArgs),
    /// Exponent where the doubled segment overtakes the circle at u = L/2.
    Crossover,
    /// Derivative of the chord p-mean when the circle is shrunk.
    LocalStability(LocalArgs),
    /// Numerical search for curves with a larger chord p-mean than the circle.
    Search(SearchArgs),
}

/// `name:lo:hi:steps`, inclusive on both ends.
#[derive(Debug, Clone, Serialize)]
struct Sweep {
    param: String,
    lo: f64,
    hi: f64,
    steps: usize,
}

impl FromStr for Sweep {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [param, lo, hi, steps] = parts[..] else {
            return Err(format!("expected name:lo:hi:steps, got `{s}`"));
        };
        let num = |t: &str| t.parse::<f64>().map_err(|e| format!("`{t}`: {e}"));
        let steps: usize = steps.parse().map_err(|e| format!("`{steps}`: {e}"))?;
        if steps == 0 {
            return Err("steps must be at least 1".into());
        }
        Ok(Sweep {
            param: param.to_string(),
            lo: num(lo)?,
            hi: num(hi)?,
            steps,
        })
    }
}

impl Sweep {
    fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.lo];
        }
        (0..self.steps)
            .map(|k| self.lo + (self.hi - self.lo) * k as f64 / (self.steps - 1) as f64)
            .collect()
    }
}

#[derive(clap::Args, Debug, Clone, Serialize)]
struct ChordArgs {
    /// Curve name (circle, ellipse:2, stadium:0.5, polygon:6, doubled-segment, trefoil) or JSON.
    #[arg(long, default_value = "circle")]
    curve: String,
    #[arg(long, allow_hyphen_values = true)]
    p: f64,
    /// Arc offset; defaults to half the length.
    #[arg(long)]
    u: Option<f64>,
    /// Quadrature nodes.
    #[arg(long, default_value_t = 256)]
    n: usize,
    #[arg(long)]
    sweep: Option<Sweep>,
}

#[derive(clap::Args, Debug, Clone, Serialize)]
struct CheckArgs {
    #[arg(long, default_value = "circle")]
    curve: String,
    #[arg(long, allow_hyphen_values = true)]
    p: f64,
    #[arg(long)]
    u: Option<f64>,
    #[arg(long, default_value_t = 256)]
    n: usize,
    /// Slack added to the quadrature error.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long)]
    sweep: Option<Sweep>,
}

#[derive(clap::Args, Debug, Clone, Serialize)]
struct ElectroArgs {
    #[arg(long, default_value = "circle")]
    curve: String,
    /// Smallest arc offset integrated; defaults to 1e-4·L.
    #[arg(long)]
    u_min: Option<f64>,
    #[arg(long, default_value_t = 256)]
    n: usize,
    /// Line charge density; the energy scales with its square.
    #[arg(long, default_value_t = 1.0)]
    q: f64,
    #[arg(long)]
    sweep: Option<Sweep>,
}

#[derive(clap::Args, Debug, Clone, Serialize)]
struct GroundArgs {
    #[arg(long, default_value = "circle")]
    curve: String,
    /// Coupling strength.
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    /// Largest grid tried.
    #[arg(long, default_value_t = 1024)]
    n: usize,
    #[arg(long)]
    sweep: Option<Sweep>,
}

#[derive(clap::Args, Debug, Clone, Serialize)]
struct GreenArgs {
    #[arg(long, default_value = "circle")]
    curve: String,
    #[arg(long)]
    kappa: f64,
    #[arg(long, default_value_t = 128)]
    n: usize,
    #[arg(long)]
    sweep: Option<Sweep>,
}

#[derive(clap::Args, Debug, Clone, Serialize)]
struct StadiumArgs {
    #[arg(long)]
    p: f64,
    /// Finite-difference step in the stadium parameter.
    #[arg(long, default_value_t = 1e-2)]
    h: f64,
    #[arg(long, default_value_t = 512)]
    n: usize,
    #[arg(long)]
    sweep: Option<Sweep>,
}

#[derive(clap::Args, Debug, Clone, Serialize)]
struct PolygonArgs {
    #[arg(long)]
    p: f64,
    /// Side-count parameters m (the polygon has 2m sides).
    #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_M_LIST)]
    m: Vec<usize>,
    #[arg(long, default_value_t = 256)]
    n: usize,
    #[arg(long)]
    sweep: Option<Sweep>,
}

#[derive(clap::Args, Debug, Clone, Serialize)]
struct LocalArgs {
    #[arg(long, allow_hyphen_values = true)]
    p: f64,
    #[arg(long, default_value_t = PI)]
    u: f64,
    #[arg(long, default_value_t = 1e-4)]
    h: f64,
    #[arg(long, default_value_t = 256)]
    n: usize,
    #[arg(long)]
    sweep: Option<Sweep>,
}

#[derive(clap::Args, Debug, Clone, Serialize)]
struct SearchArgs {
    #[arg(long)]
    p: f64,
    #[arg(long, default_value_t = PI)]
    u: f64,
    /// Number of Fourier modes in the tangent angle.
    #[arg(long, default_value_t = 8)]
    modes: usize,
    #[arg(long, default_value_t = 20)]
    restarts: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 200)]
    max_iter: usize,
    #[arg(long)]
    sweep: Option<Sweep>,
}

enum Failure {
    Domain(String),
    Internal(String),
}

impl From<chordmean::Error> for Failure {
    fn from(e: chordmean::Error) -> Self {
        if e.is_domain_error() {
            Failure::Domain(e.to_string())
        } else {
            Failure::Internal(e.to_string())
        }
    }
}

type Run<T> = Result<T, Failure>;

fn to_row<T: Serialize>(value: &T) -> Run<Value> {
    serde_json::to_value(value).map_err(|e| Failure::Internal(e.to_string()))
}

fn merge(mut base: Value, extra: Value) -> Value {
    if let (Some(b), Value::Object(e)) = (base.as_object_mut(), extra) {
        b.extend(e);
    }
    base
}

fn build_curve(text: &str) -> Run<ArcLengthCurve> {
    Ok(CurveDescriptor::parse(text)?.build()?)
}

/// Values of the swept parameter, or the single configured value.
fn sweep_points(sweep: &Option<Sweep>, allowed: &[&str]) -> Run<Vec<Option<(String, f64)>>> {
    match sweep {
        None => Ok(vec![None]),
        Some(s) if allowed.contains(&s.param.as_str()) => Ok(s
            .values()
            .into_iter()
            .map(|v| Some((s.param.clone(), v)))
            .collect()),
        Some(s) => Err(Failure::Domain(format!(
            "cannot sweep `{}` here; sweepable: {}",
            s.param,
            allowed.join(", ")
        ))),
    }
}

fn pick(point: &Option<(String, f64)>, name: &str, fallback: f64) -> f64 {
    match point {
        Some((p, v)) if p == name => *v,
        _ => fallback,
    }
}

fn chord_mean(a: &ChordArgs) -> Run<Vec<Value>> {
    let curve = build_curve(&a.curve)?;
    let mut rows = Vec::new();
    for pt in sweep_points(&a.sweep, &["p", "u"])? {
        let p = pick(&pt, "p", a.p);
        let u = pick(&pt, "u", a.u.unwrap_or(0.5 * curve.length()));
        let est = chord_pmean(&curve, p, u, a.n)?;
        rows.push(json!({"p": p, "u": u, "value": est.value, "error": est.error}));
    }
    Ok(rows)
}

fn inequality(a: &CheckArgs) -> Run<Vec<Value>> {
    let curve = build_curve(&a.curve)?;
    let mut rows = Vec::new();
    for pt in sweep_points(&a.sweep, &["p", "u", "tol"])? {
        let p = pick(&pt, "p", a.p);
        let u = pick(&pt, "u", a.u.unwrap_or(0.5 * curve.length()));
        let tol = pick(&pt, "tol", a.tol);
        rows.push(to_row(&check_inequality(&curve, p, u, a.n, tol)?)?);
    }
    Ok(rows)
}

fn electro(a: &ElectroArgs) -> Run<Vec<Value>> {
    let curve = build_curve(&a.curve)?;
    let mut rows = Vec::new();
    for pt in sweep_points(&a.sweep, &["u_min", "q"])? {
        let u_min = match &pt {
            Some((name, v)) if name == "u_min" => Some(*v),
            _ => a.u_min,
        };
        let q = pick(&pt, "q", a.q);
        let r = renormalized_energy(&curve, u_min, a.n)?;
        let q2 = q * q;
        rows.push(merge(
            to_row(&r)?,
            json!({"q": q, "energy": q2 * r.delta, "energy_error": q2 * r.total_error()}),
        ));
    }
    Ok(rows)
}

fn ground(a: &GroundArgs) -> Run<Vec<Value>> {
    let curve = build_curve(&a.curve)?;
    let grid = GridSchedule {
        n_max: a.n,
        ..GridSchedule::default()
    };
    let mut rows = Vec::new();
    for pt in sweep_points(&a.sweep, &["alpha", "tol"])? {
        let alpha = pick(&pt, "alpha", a.alpha);
        let tol = pick(&pt, "tol", a.tol);
        let g = ground_state_with(&curve, alpha, tol, grid)?;
        rows.push(merge(json!({"alpha": alpha}), to_row(&g)?));
    }
    Ok(rows)
}

fn green(a: &GreenArgs) -> Run<Vec<Value>> {
    let curve = build_curve(&a.curve)?;
    let mut rows = Vec::new();
    for pt in sweep_points(&a.sweep, &["kappa"])? {
        let kappa = pick(&pt, "kappa", a.kappa);
        rows.push(to_row(&green_inequality_check(&curve, kappa, a.n)?)?);
    }
    Ok(rows)
}

fn stadium(a: &StadiumArgs) -> Run<Vec<Value>> {
    let mut rows = Vec::new();
    for pt in sweep_points(&a.sweep, &["p", "h"])? {
        let p = pick(&pt, "p", a.p);
        let h = pick(&pt, "h", a.h);
        let d = stadium_derivatives(p, h, a.n)?;
        rows.push(merge(
            to_row(&d)?,
            json!({"threshold_p": stadium_threshold_p()}),
        ));
    }
    Ok(rows)
}

fn polygon(a: &PolygonArgs) -> Run<Vec<Value>> {
    let mut rows = Vec::new();
    for pt in sweep_points(&a.sweep, &["p"])? {
        let p = pick(&pt, "p", a.p);
        rows.push(to_row(&polygon_expansion_check(p, &a.m, a.n)?)?);
    }
    Ok(rows)
}

fn local(a: &LocalArgs) -> Run<Vec<Value>> {
    let mut rows = Vec::new();
    for pt in sweep_points(&a.sweep, &["p", "u", "h"])? {
        let p = pick(&pt, "p", a.p);
        let u = pick(&pt, "u", a.u);
        let h = pick(&pt, "h", a.h);
        let ls = local_stability_derivative(&RadialShrink, p, u, h, a.n)?;
        let rel = (ls.fd - ls.closed_form) / local_stability_closed_form(p, u);
        rows.push(merge(to_row(&ls)?, json!({"relative_difference": rel})));
    }
    Ok(rows)
}

fn search(a: &SearchArgs) -> Run<Vec<Value>> {
    let cfg = SearchConfig {
        restarts: a.restarts,
        seed: a.seed,
        max_iter: a.max_iter,
        ..SearchConfig::default()
    };
    let mut rows = Vec::new();
    for pt in sweep_points(&a.sweep, &["p", "u"])? {
        let p = pick(&pt, "p", a.p);
        let u = pick(&pt, "u", a.u);
        let r = maximize_pmean(p, u, a.modes, &cfg)?;
        rows.push(json!({
            "p": p,
            "u": u,
            "evidence": "best value found by local search; a lower bound on the maximum, not a certificate",
            "best_value": r.best.value,
            "circle_value": r.circle_value,
            "ratio_to_circle": r.best.value / r.circle_value,
            "closure_defect": r.best.closure_defect,
            "best": to_row(&r.best)?,
            "restarts": to_row(&r.trace)?,
        }));
    }
    Ok(rows)
}

fn execute(command: &Command) -> Run<(&'static str, Value, Vec<Value>)> {
    Ok(match command {
        Command::ChordMean(a) => ("chord-mean", to_row(a)?, chord_mean(a)?),
        Command::CheckInequality(a) => ("check-inequality", to_row(a)?, inequality(a)?),
        Command::ElectroEnergy(a) => ("electro-energy", to_row(a)?, electro(a)?),
        Command::GroundState(a) => ("ground-state", to_row(a)?, ground(a)?),
        Command::GreenCheck(a) => ("green-check", to_row(a)?, green(a)?),
        Command::StadiumDerivs(a) => ("stadium-derivs", to_row(a)?, stadium(a)?),
        Command::PolygonFit(a) => ("polygon-fit", to_row(a)?, polygon(a)?),
        Command::Crossover => (
            "crossover",
            json!({}),
            vec![json!({"p_star": segment_crossover_p()})],
        ),
        Command::LocalStability(a) => ("local-stability", to_row(a)?, local(a)?),
        Command::Search(a) => ("search", to_row(a)?, search(a)?),
    })
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

fn write_csv(rows: &[Value], out: impl Write) -> Run<()> {
    let mut w = csv::Writer::from_writer(out);
    let err = |e: csv::Error| Failure::Internal(e.to_string());
    let empty = Map::new();
    let header: Vec<String> = rows
        .first()
        .and_then(Value::as_object)
        .unwrap_or(&empty)
        .keys()
        .cloned()
        .collect();
    w.write_record(&header).map_err(err)?;
    for row in rows {
        let record: Vec<String> = header
            .iter()
            .map(|k| row.get(k).map(cell).unwrap_or_default())
            .collect();
        w.write_record(&record).map_err(err)?;
    }
    w.flush().map_err(|e| Failure::Internal(e.to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = execute(&cli.command).and_then(|(name, config, rows)| {
        let stdout = std::io::stdout();
        match cli.format {
            Format::Json => {
                let doc = json!({
                    "version": env!("CARGO_PKG_VERSION"),
                    "command": name,
                    "config": config,
                    "results": rows,
                });
                let text = serde_json::to_string_pretty(&doc)
                    .map_err(|e| Failure::Internal(e.to_string()))?;
                writeln!(stdout.lock(), "{text}").map_err(|e| Failure::Internal(e.to_string()))
            }
            Format::Csv => write_csv(&rows, stdout.lock()),
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(1)
        }
    }
}
