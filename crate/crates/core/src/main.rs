use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use deltafront::cli::{auto_window, emit, parse_scenario, EmitConfig};
use deltafront::interact::run;
use deltafront::riemann::{solve_grp, solve_riemann};
use deltafront::verify::{compare, fan_approx_oracle, mass_balance, overcompressibility, random_tests, weak_residuals};
use deltafront::{CurveGeometry, Error, Point, State, StrengthLaw};

#[derive(Parser)]
#[command(name = "deltafront", version, about = "Exact front tracking for delta-shock interactions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a scenario file and write events, front samples, field grids,
    /// atoms and a wave diagram.
    Solve {
        file: PathBuf,
        #[arg(long)]
        t_max: Option<f64>,
        /// Grid sizes as `NX,NT`.
        #[arg(long, value_parser = pair::<usize>)]
        grid: Option<(usize, usize)>,
        /// Spatial window as `X0,X1`.
        #[arg(long, value_parser = pair::<f64>, allow_hyphen_values = true)]
        window: Option<(f64, f64)>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Write only the wave diagram.
        #[arg(long)]
        svg: bool,
    },
    /// Print the wave fan of a (generalized) Riemann problem.
    Riemann {
        #[arg(long, value_parser = pair::<f64>, allow_hyphen_values = true)]
        left: (f64, f64),
        #[arg(long, value_parser = pair::<f64>, allow_hyphen_values = true)]
        right: (f64, f64),
        /// Point mass at the origin.
        #[arg(long, allow_hyphen_values = true)]
        atom: Option<f64>,
    },
    /// Check weak form, mass balance and admissibility of a solved scenario.
    Verify {
        file: PathBuf,
        #[arg(long, default_value_t = 200)]
        tests: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Largest accepted relative weak residual.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Compare the delta shock inside a rarefaction with an approximation
    /// of the fan by `N` small jumps.
    Oracle {
        file: PathBuf,
        #[arg(long)]
        n: usize,
    },
}

fn pair<T: std::str::FromStr>(s: &str) -> Result<(T, T), String>
where
    T::Err: std::fmt::Display,
{
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected two comma-separated values, got `{s}`"))?;
    let p = |x: &str| x.trim().parse::<T>().map_err(|e| format!("`{x}`: {e}"));
    Ok((p(a)?, p(b)?))
}

/// Failed checks; mapped to exit code 3.
#[derive(Debug)]
struct VerificationFailed(String);

impl std::fmt::Display for VerificationFailed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "verification failed: {}", self.0)
    }
}

impl std::error::Error for VerificationFailed {}

fn geometry_json(g: &CurveGeometry) -> serde_json::Value {
    match *g {
        CurveGeometry::Line { origin, slope } => json!({"line": {"origin": origin, "slope": slope}}),
        CurveGeometry::Sqrt { center, u_k, k } => json!({"sqrt": {"center": center, "u_k": u_k, "k": k}}),
        CurveGeometry::Log { center, c } => json!({"log": {"center": center, "c": c}}),
    }
}

fn riemann(left: (f64, f64), right: (f64, f64), atom: Option<f64>) -> serde_json::Value {
    let (l, r) = (State::new(left.0, left.1), State::new(right.0, right.1));
    let origin = Point::new(0.0, 0.0);
    let fan = match atom {
        Some(g) => solve_grp(l, r, g, origin),
        None => solve_riemann(l, r, origin),
    };
    let fronts: Vec<_> = fan
        .fronts
        .iter()
        .map(|f| {
            let strength = match &f.strength {
                Some(StrengthLaw::Affine { s, gamma, .. }) => json!({"gamma": gamma, "rate": s}),
                Some(StrengthLaw::Constant { gamma }) => json!({"gamma": gamma, "rate": 0.0}),
                Some(StrengthLaw::Tabulated(_)) => json!("tabulated"),
                None => serde_json::Value::Null,
            };
            json!({"kind": f.kind, "geometry": geometry_json(&f.geometry), "strength": strength})
        })
        .collect();
    json!({"case": format!("{:?}", fan.case), "fronts": fronts, "speeds": fan.speeds()})
}

fn verify(file: &Path, tests: usize, seed: u64, tol: f64) -> anyhow::Result<()> {
    let (_, sc, case) = parse_scenario(file)?;
    let sol = run(&sc)?;
    let horizon = sc.t_max.min(5.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let phis = random_tests(&sol, tests, horizon, &mut rng);
    let mut worst = 0.0f64;
    let mut failures = Vec::new();
    for (phi, r) in phis.iter().zip(weak_residuals(&sol, &phis)) {
        match r {
            Ok(w) => worst = worst.max(w.relative()),
            Err(e) => failures.push(format!("{phi:?}: {e}")),
        }
    }
    let [x0, x1] = auto_window(&sol, horizon);
    let times: Vec<f64> = (0..=50).map(|i| horizon * i as f64 / 50.0).collect();
    let mass = mass_balance(&sol, x0 - 1.0, x1 + 1.0, &times)?;
    let monitor = overcompressibility(&sol, 200);
    println!("case {case}");
    println!("weak residual: max relative {worst:.3e} over {tests} test functions (tol {tol:.1e})");
    println!("mass balance: max error {mass:.3e} on [{x0}, {x1}] up to t={horizon}");
    println!("overcompressibility: min margin {:.3e}, {} boundary touches", monitor.min_margin, monitor.touches.len());
    if !failures.is_empty() {
        bail!(VerificationFailed(format!("{} residual evaluations failed, first: {}", failures.len(), failures[0])));
    }
    if worst > tol {
        bail!(VerificationFailed(format!("relative weak residual {worst:.3e} exceeds {tol:.1e}")));
    }
    if mass > 1e-8 {
        bail!(VerificationFailed(format!("mass balance error {mass:.3e}")));
    }
    if monitor.min_margin < -1e-9 {
        bail!(VerificationFailed(format!("delta shock not overcompressive, margin {:.3e}", monitor.min_margin)));
    }
    Ok(())
}

fn main_inner(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Solve { file, t_max, grid, window, out, svg } => {
            let (mut spec, mut sc, case) = parse_scenario(&file)?;
            if let Some(t) = t_max {
                if !(t > 0.0) {
                    return Err(Error::InvalidScenario("t_max > 0 violated".into()).into());
                }
                sc.t_max = t;
                spec.t_max = t;
            }
            let sol = run(&sc)?;
            let (nx, nt) = grid.unwrap_or((spec.grid[0], spec.grid[1]));
            if nx < 2 || nt < 2 {
                bail!("grid needs NX >= 2 and NT >= 2");
            }
            let window = match window.map(|(a, b)| [a, b]).or(spec.window) {
                Some([a, b]) if b > a => [a, b],
                Some(_) => bail!("window must be nonempty"),
                None => auto_window(&sol, sc.t_max),
            };
            let mut outputs = spec.outputs;
            if svg {
                outputs = deltafront::cli::Outputs { events: false, fronts: false, fields: false, atoms: false, svg: true };
            }
            let cfg = EmitConfig { t_max: sc.t_max, nx, nt, window, outputs };
            let written = emit(&sol, case, &cfg, &out).with_context(|| format!("writing outputs to {}", out.display()))?;
            println!("case {case}: {} events, {} fronts", sol.events.len(), sol.fronts.len());
            for p in written {
                println!("wrote {}", p.display());
            }
        }
        Command::Riemann { left, right, atom } => {
            println!("{}", serde_json::to_string_pretty(&riemann(left, right, atom))?);
        }
        Command::Verify { file, tests, seed, tol } => verify(&file, tests, seed, tol)?,
        Command::Oracle { file, n } => {
            let (_, sc, _) = parse_scenario(&file)?;
            let sol = run(&sc)?;
            let approx = fan_approx_oracle(&sc, n)?;
            let errs = compare(&sol, &approx)?;
            println!("{}", serde_json::to_string_pretty(&json!({"n": n, "errors": errs, "t_stop": approx.t_stop}))?);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match main_inner(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<VerificationFailed>().is_some() {
                ExitCode::from(3)
            } else if matches!(e.downcast_ref::<Error>(), Some(Error::InvalidScenario(_))) {
                ExitCode::from(2)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}
