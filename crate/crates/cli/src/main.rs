use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use squaretile::catalog;
use squaretile::counting::{count, counting_curve, curve_to_csv, estimate_c_area_with};
use squaretile::cylinder::{cylinders_in_direction, Cylinder};
use squaretile::ekz::{format_rational, rational_to_f64, EkzReport};
use squaretile::lyapunov::{simulate_cocycle, SimConfig, DEFAULT_SEED};
use squaretile::sl2z::orbit;
use squaretile::verify::{verify, VerifyConfig, DEFAULT_SAMPLES};
use squaretile::{Error, KzCocycle, Origami};

const SCHEMA_VERSION: u64 = 1;

#[derive(Parser)]
#[command(
    name = "squaretile",
    version,
    about = "Square-tiled surfaces and their Lyapunov exponents"
)]
struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Size, stratum, genus and canonical form.
    Info(SurfaceArgs),
    /// SL(2,Z) orbit size, optionally with the full graph.
    Orbit {
        #[command(flatten)]
        surface: SurfaceArgs,
        /// Print every vertex and edge.
        #[arg(long)]
        graph: bool,
    },
    /// Cylinder decomposition in a rational direction.
    Cylinders {
        #[command(flatten)]
        surface: SurfaceArgs,
        /// Direction `p,q` (default 1,0).
        #[arg(long, value_parser = parse_direction, allow_hyphen_values = true)]
        direction: Option<(i64, i64)>,
    },
    /// Exact sum of the positive Lyapunov exponents.
    Ekz(SurfaceArgs),
    /// Monte-Carlo estimate of the Lyapunov spectrum.
    Lyapunov {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[command(flatten)]
        sim: SimArgs,
    },
    /// Cylinder and saddle connection counts up to length T.
    Count {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[arg(long = "T", default_value_t = 200.0)]
        t: f64,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
        /// Emit the counting curve as CSV.
        #[arg(long)]
        csv: bool,
        /// Break the counts at T down by direction.
        #[arg(long)]
        per_direction: bool,
    },
    /// Compare the exact sum with simulation and counting.
    Verify {
        #[command(flatten)]
        surface: SurfaceArgs,
        /// Verify every catalog entry.
        #[arg(long)]
        all: bool,
        #[command(flatten)]
        sim: SimArgs,
        #[arg(long = "T", default_value_t = 200.0)]
        t: f64,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
        #[arg(long, default_value_t = 0.02)]
        tol_lyap: f64,
        #[arg(long, default_value_t = 0.05)]
        tol_count: f64,
    },
    /// List the named surfaces.
    Catalog,
}

#[derive(Args)]
struct SurfaceArgs {
    /// Catalog name, e.g. `torus`, `figure4`, `l(2,3)`.
    #[arg(long, conflicts_with_all = ["h", "v"])]
    surface: Option<String>,
    /// Right-neighbour permutation (one-line `1,0,2` or cycles `(0 1)`).
    #[arg(long, requires = "v")]
    h: Option<String>,
    /// Up-neighbour permutation.
    #[arg(long, requires = "h")]
    v: Option<String>,
    /// Number of squares, when cycle notation leaves it ambiguous.
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Args)]
struct SimArgs {
    #[arg(long, default_value_t = 1_000_000)]
    steps: u64,
    #[arg(long, default_value_t = 10)]
    runs: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    qr_every: u64,
    #[arg(long, default_value_t = 10_000)]
    slope_refresh: u64,
}

impl SimArgs {
    fn config(&self) -> SimConfig {
        SimConfig {
            steps: self.steps,
            runs: self.runs,
            seed: self.seed,
            qr_every: self.qr_every,
            slope_refresh: self.slope_refresh,
            ..SimConfig::default()
        }
    }
}

fn parse_direction(s: &str) -> Result<(i64, i64), String> {
    let (p, q) = s
        .split_once(',')
        .ok_or_else(|| format!("expected `p,q`, got `{s}`"))?;
    let p = p.trim().parse().map_err(|e| format!("bad p: {e}"))?;
    let q = q.trim().parse().map_err(|e| format!("bad q: {e}"))?;
    Ok((p, q))
}

enum Failure {
    Usage(String),
    Invalid(Error),
    Io(std::io::Error),
    VerifyFailed,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Invalid(e)
    }
}

struct Output {
    json: bool,
    text: String,
}

impl Output {
    fn new(json: bool) -> Self {
        Output {
            json,
            text: String::new(),
        }
    }

    fn line(&mut self, s: impl AsRef<str>) {
        self.text.push_str(s.as_ref());
        self.text.push('\n');
    }

    fn value(&mut self, mut v: Value) {
        if let Value::Object(map) = &mut v {
            map.insert("schema_version".into(), json!(SCHEMA_VERSION));
        }
        self.line(serde_json::to_string_pretty(&v).expect("JSON renders"));
    }
}

fn load(s: &SurfaceArgs) -> Result<Origami, Failure> {
    match (&s.surface, &s.h, &s.v) {
        (Some(name), _, _) => Ok(catalog::lookup(name)?),
        (None, Some(h), Some(v)) => Ok(Origami::parse(h, v, s.n)?),
        _ => Err(Failure::Usage(
            "give --surface <name> or both --h and --v".into(),
        )),
    }
}

fn perm_json(o: &Origami) -> Value {
    json!({ "h": o.h().to_cycle_string(), "v": o.v().to_cycle_string() })
}

fn cylinder_list(cs: &[Cylinder]) -> String {
    cs.iter()
        .map(|c| format!("({},{})", c.width, c.height))
        .collect::<Vec<_>>()
        .join(", ")
}

fn ekz_text(out: &mut Output, r: &EkzReport) {
    out.line(format!("stratum: {}", r.stratum));
    out.line(format!("orbit size: {}", r.orbit_size));
    out.line(format!(
        "combinatorial term: {}",
        format_rational(&r.combinatorial_term)
    ));
    out.line(format!(
        "Siegel-Veech term: {}",
        format_rational(&r.sv_term)
    ));
    out.line(format!(
        "exponent sum: {} ({:.6})",
        format_rational(&r.exponent_sum),
        rational_to_f64(&r.exponent_sum)
    ));
    out.line(format!(
        "C_area: {}/π² ({:.6})",
        format_rational(&r.c_area_coefficient),
        r.c_area()
    ));
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    let mut out = Output::new(cli.json);
    match &cli.command {
        Command::Info(s) => {
            let o = load(s)?;
            let st = o.stratum();
            let canon = o.canonical_form();
            if out.json {
                out.value(json!({
                    "n": o.n(),
                    "stratum": st.to_string(),
                    "orders": st.orders,
                    "genus": st.genus,
                    "marked_points": st.marked_points,
                    "surface": perm_json(&o),
                    "canonical": perm_json(&canon),
                }));
            } else {
                out.line(format!("squares: {}", o.n()));
                out.line(format!("stratum: {st}"));
                out.line(format!("genus: {}", st.genus));
                out.line(format!("marked points: {}", st.marked_points));
                out.line(format!("h: {}", o.h().to_cycle_string()));
                out.line(format!("v: {}", o.v().to_cycle_string()));
                out.line(format!("canonical h: {}", canon.h()));
                out.line(format!("canonical v: {}", canon.v()));
            }
        }
        Command::Orbit { surface, graph } => {
            let o = load(surface)?;
            let g = orbit(&o)?;
            if out.json {
                let mut v = if *graph {
                    g.to_json()
                } else {
                    json!({ "size": g.len() })
                };
                v["stratum"] = json!(o.stratum().to_string());
                out.value(v);
            } else {
                out.line(format!("orbit size: {}", g.len()));
                if *graph {
                    for (i, x) in g.vertices.iter().enumerate() {
                        out.line(format!("{i}: h={} v={}", x.h(), x.v()));
                    }
                    for (i, gen, j) in g.edge_list() {
                        out.line(format!("{i} -{gen}-> {j}"));
                    }
                }
            }
        }
        Command::Cylinders { surface, direction } => {
            let o = load(surface)?;
            let (p, q) = direction.unwrap_or((1, 0));
            let cs = cylinders_in_direction(&o, p, q)?;
            if out.json {
                out.value(json!({
                    "direction": [p, q],
                    "cylinders": cs.iter().map(Cylinder::to_json).collect::<Vec<_>>(),
                }));
            } else {
                out.line(format!("direction ({p},{q}): {}", cylinder_list(&cs)));
                for c in &cs {
                    out.line(format!(
                        "  width {} height {} circumference {:.6} modulus {}",
                        c.width,
                        c.height,
                        c.circumference(),
                        format_rational(&c.modulus())
                    ));
                }
            }
        }
        Command::Ekz(s) => {
            let o = load(s)?;
            let r = EkzReport::from_orbit(&orbit(&o)?);
            if out.json {
                out.value(r.to_json());
            } else {
                ekz_text(&mut out, &r);
            }
        }
        Command::Lyapunov { surface, sim } => {
            let o = load(surface)?;
            let cfg = sim.config();
            cfg.validate()?;
            let e = simulate_cocycle(&KzCocycle::new(&o)?, &cfg)?;
            if out.json {
                out.value(e.to_json());
            } else {
                out.line(format!(
                    "genus {}, orbit size {}, {} runs of {} steps, seed {:#x}",
                    e.genus, e.orbit_size, cfg.runs, cfg.steps, cfg.seed
                ));
                for (i, (l, s)) in e.normalized.iter().zip(&e.stderr).enumerate() {
                    out.line(format!(
                        "  λ{:<2} {:+.6} ± {:.6}   (θ = {:+.6e})",
                        i + 1,
                        l,
                        s,
                        e.raw_exponents[i]
                    ));
                }
                out.line(format!(
                    "positive sum: {:.6} ± {:.6}",
                    e.positive_sum, e.positive_sum_stderr
                ));
                out.line(format!(
                    "digits truncated: {}, slopes drawn: {}, {:.2}s",
                    e.truncated_digits, e.slopes_drawn, e.wall_time_secs
                ));
            }
        }
        Command::Count {
            surface,
            t,
            samples,
            csv,
            per_direction,
        } => {
            let o = load(surface)?;
            if t.is_nan() || *t <= 0.0 {
                return Err(Failure::Invalid(Error::InvalidConfig(format!(
                    "T must be positive, got {t}"
                ))));
            }
            if *csv {
                let rows = counting_curve(&o, *t, (*samples).max(1));
                out.text.push_str(&curve_to_csv(&rows));
            } else {
                let report = count(&o, *t, *per_direction);
                let estimate = if *t >= 20.0 && *samples >= 5 {
                    Some(estimate_c_area_with(
                        &o,
                        &EkzReport::from_orbit(&orbit(&o)?),
                        *t,
                        *samples,
                    )?)
                } else {
                    None
                };
                if out.json {
                    let mut v = serde_json::to_value(&report).expect("report serializes");
                    if let Some(e) = &estimate {
                        v["c_area_estimate"] = e.to_json();
                    }
                    out.value(v);
                } else {
                    out.line(format!("T = {t}"));
                    out.line(format!("N_area(T) = {:.6}", report.n_area));
                    out.line(format!("N(T) = {}", report.n_sc));
                    if let Some(rows) = &report.per_direction {
                        for r in rows.iter().filter(|r| r.n_area > 0.0 || r.n_sc > 0) {
                            out.line(format!(
                                "  ({},{}): N_area {:.6}, N {}",
                                r.p, r.q, r.n_area, r.n_sc
                            ));
                        }
                    }
                    if let Some(e) = &estimate {
                        out.line(format!(
                            "fitted π·C_area = {:.6}, exact {:.6}, relative error {:.3e}",
                            e.fitted_coefficient, e.target, e.relative_error
                        ));
                    }
                }
            }
        }
        Command::Verify {
            surface,
            all,
            sim,
            t,
            samples,
            tol_lyap,
            tol_count,
        } => {
            let cfg = VerifyConfig {
                sim: sim.config(),
                t_max: *t,
                samples: *samples,
                tol_lyap: *tol_lyap,
                tol_count: *tol_count,
            };
            let targets: Vec<(String, Origami)> = if *all {
                catalog::entries()
                    .into_iter()
                    .map(|e| (e.name, e.origami))
                    .collect()
            } else {
                let o = load(surface)?;
                let name = surface.surface.clone().unwrap_or_else(|| "surface".into());
                vec![(name, o)]
            };
            let mut passed = true;
            let mut reports = Vec::new();
            for (name, o) in &targets {
                let r = verify(o, &cfg)?;
                passed &= r.passed();
                if out.json {
                    let mut v = r.to_json();
                    v["name"] = json!(name);
                    reports.push(v);
                } else {
                    out.line(format!("{name}: {}", r.summary()));
                }
            }
            if out.json {
                if *all {
                    out.value(json!({ "passed": passed, "reports": reports }));
                } else {
                    out.value(reports.pop().expect("one report"));
                }
            }
            if !passed {
                emit(cli, &out).map_err(Failure::Io)?;
                return Err(Failure::VerifyFailed);
            }
        }
        Command::Catalog => {
            let entries = catalog::entries();
            if out.json {
                let list: Vec<Value> = entries
                    .iter()
                    .map(|e| {
                        json!({
                            "name": e.name,
                            "n": e.origami.n(),
                            "stratum": e.origami.stratum().to_string(),
                            "surface": perm_json(&e.origami),
                            "provenance": e.provenance,
                        })
                    })
                    .collect();
                out.value(json!({ "entries": list }));
            } else {
                for e in &entries {
                    let mut line = String::new();
                    let _ = write!(
                        line,
                        "{:<26} n={:<3} {:<12} {}",
                        e.name,
                        e.origami.n(),
                        e.origami.stratum().to_string(),
                        e.provenance
                    );
                    out.line(line);
                }
            }
        }
    }
    Ok(out)
}

fn emit(cli: &Cli, out: &Output) -> std::io::Result<()> {
    match &cli.out {
        Some(path) => std::fs::write(path, &out.text),
        None => {
            print!("{}", out.text);
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: cannot start {n} threads: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(out) => match emit(&cli, &out) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(1)
            }
        },
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Invalid(e)) => {
            eprintln!("error: {}: {e}", e.name());
            ExitCode::from(1)
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(Failure::VerifyFailed) => {
            eprintln!("verification failed");
            ExitCode::from(3)
        }
    }
}
