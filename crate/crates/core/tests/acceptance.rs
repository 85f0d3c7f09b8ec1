//! End-to-end acceptance run: one line per criterion, non-zero exit if any
//! criterion fails.

use std::fs;
use std::path::Path;
use std::process::ExitCode;

use deltafront::cli::{auto_window, emit, EmitConfig, Outputs};
use deltafront::interact::{run, validate_scenario};
use deltafront::verify::*;
use deltafront::{CurveGeometry, FrontKind, Point, ResolutionRule, Solution, State};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn solved() -> Vec<(&'static str, Solution)> {
    battery().into_iter().map(|(n, sc)| (n, run(&sc).unwrap())).collect()
}

fn get<'a>(sols: &'a [(&str, Solution)], name: &str) -> &'a Solution {
    &sols.iter().find(|(n, _)| *n == name).unwrap().1
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * b.abs().max(1.0)
}

fn weak_battery(sols: &[(&str, Solution)]) -> Outcome {
    let mut worst = (0.0f64, "");
    let mut failed = Vec::new();
    for (name, sol) in sols {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let phis = random_tests(sol, 200, sol.scenario.t_max.min(5.0), &mut rng);
        for r in weak_residuals(sol, &phis) {
            match r {
                Ok(w) if w.relative() > worst.0 => worst = (w.relative(), name),
                Ok(_) => {}
                Err(e) => failed.push(format!("{name}: {e}")),
            }
        }
    }
    let pass = failed.is_empty() && worst.0 <= 1e-6;
    outcome(pass, format!("max relative residual {:.2e} ({}), {} evaluation failures", worst.0, worst.1, failed.len()))
}

/// Independent first-principles values: delta shock speed is the mean of
/// the side values of `u`, the atom grows at `s [v] - [(u-1) v]`.
fn closed_forms(sols: &[(&str, Solution)]) -> Outcome {
    let rate = |s: f64, l: State, r: State| s * (r.v - l.v) - ((r.u - 1.0) * r.v - (l.u - 1.0) * l.v);
    let mut bad = Vec::new();
    let mut check = |what: &str, got: f64, want: f64| {
        if !close(got, want) {
            bad.push(format!("{what}: {got} vs {want}"));
        }
    };

    let s1 = get(sols, "case1");
    let m = s1.events.iter().find(|e| e.rule == ResolutionRule::MergeDeltas).unwrap();
    let (t, x) = (1.0 / (4.5 - 1.5), -1.0 + 4.5 / 3.0);
    check("case1 merge t", m.point.t, t);
    check("case1 merge x", m.point.x, x);
    let out = s1.front(m.outgoing[0]);
    let gamma = t * rate(4.5, State::new(6.0, 1.0), State::new(3.0, 1.0)) + t * rate(1.5, State::new(3.0, 1.0), State::new(0.0, 1.0));
    check("case1 gamma", out.strength_at(t), gamma);
    check("case1 deficit", out.strength_at(t + 1.0) - out.strength_at(t), rate(3.0, State::new(6.0, 1.0), State::new(0.0, 1.0)));

    // delta shock from -1 at speed 2.5 meets the fan edge x = t
    let s4 = get(sols, "case4-ii-a");
    let entry = s4.events.iter().find(|e| e.rule == ResolutionRule::DeltaEntersFan).unwrap();
    check("case4 entry t", entry.point.t, 2.0 / 3.0);
    check("case4 entry x", entry.point.x, 2.0 / 3.0);
    let curve = entry.outgoing.iter().map(|&id| s4.front(id)).find(|f| f.kind == FrontKind::DeltaShock).unwrap();
    let k = (entry.point.x - 4.0 * entry.point.t) / entry.point.t.sqrt();
    check("case4 K", k, -(6f64.sqrt()));
    if let CurveGeometry::Sqrt { k: kk, .. } = curve.geometry {
        check("case4 engine K", kk, -(6f64.sqrt()));
    }
    let bd = s4.events.iter().find(|e| e.rule == ResolutionRule::BreakdownBifurcation).unwrap();
    check("case4 t_s", bd.point.t, k * k / 4.0);
    check("case4 x_s", bd.point.x, 4.0 * 1.5 + k * 1.5f64.sqrt());

    let (a2, u1, u2) = (1.0, 4.0, 0.0);
    for name in ["case5-below", "case5-between"] {
        let s5 = get(sols, name);
        let entry = s5.events.iter().find(|e| e.rule == ResolutionRule::DeltaEntersFan).unwrap();
        check("case5 t0", entry.point.t, a2 / (u1 - u2) * 2.0);
        check("case5 x0", entry.point.x, a2 + (u1 + u2) / 2.0 * entry.point.t);
        let bd = s5.events.iter().find(|e| e.rule == ResolutionRule::BreakdownBifurcation).unwrap();
        let ts = a2 * (u1 - u2) / 2.0;
        check("case5 t_s", bd.point.t, ts);
        check("case5 x_s", bd.point.x, u2 * ts + (a2 * 2.0 * (u1 - u2) * ts).sqrt());
    }
    let pass = bad.is_empty();
    outcome(pass, if pass { "all event values within 1e-12".into() } else { bad.join("; ") })
}

fn overcompressive(sols: &[(&str, Solution)]) -> Outcome {
    let mut min = f64::INFINITY;
    let mut stray = Vec::new();
    let mut touches = 0;
    for (name, sol) in sols {
        let r = overcompressibility(sol, 200);
        min = min.min(r.min_margin);
        for (id, t) in r.touches {
            touches += 1;
            let f = sol.front(id);
            let at_breakdown = f.t_end.is_some_and(|te| {
                sol.events.iter().any(|e| e.rule == ResolutionRule::BreakdownBifurcation && e.point.t == te)
            });
            let predicted = match f.geometry {
                CurveGeometry::Sqrt { center, k, .. } => center.t + k * k / 4.0,
                _ => f64::NAN,
            };
            if !(at_breakdown && (t - predicted).abs() <= 1e-9) {
                stray.push(format!("{name} front {id} at t={t}"));
            }
        }
    }
    let pass = min >= -1e-12 && stray.is_empty();
    outcome(pass, format!("min margin {min:.2e}, {touches} boundary touches, {} away from breakdown", stray.len()))
}

fn ordering(sols: &[(&str, Solution)]) -> Outcome {
    let (a, u1, u2) = (1.0f64, 4.0, 0.0);
    let mut detail = Vec::new();
    let mut pass = true;
    for name in ["case5-below", "case5-between"] {
        let sol = get(sols, name);
        let bd = sol.events.iter().find(|e| e.rule == ResolutionRule::BreakdownBifurcation).unwrap();
        let ts = bd.point.t;
        let g1 = bd.outgoing.iter().map(|&id| sol.front(id)).find(|f| f.kind == FrontKind::DeltaContact).unwrap().geometry;
        let g2 = bd.outgoing.iter().map(|&id| sol.front(id)).find(|f| f.kind == FrontKind::Shock).unwrap().geometry;
        let c1 = |t: f64| t * (-(t.ln()) + (a * a * (u1 - u2) / 2.0).ln() + u2 + 2.0);
        let c2 = |t: f64| u2 * t + a * (2.0 * (u1 - u2) * t).sqrt();
        let mut min_gap = f64::INFINITY;
        let mut geom_err = 0.0f64;
        for i in 1..=20000 {
            let t = ts * 100f64.powf(i as f64 / 20000.0);
            let (x1, x2) = (g1.x_at(t), g2.x_at(t));
            min_gap = min_gap.min((x2 - x1) / t);
            geom_err = geom_err.max(((x1 - c1(t)).abs()).max((x2 - c2(t)).abs()) / t);
        }
        pass &= min_gap > 0.0 && geom_err <= 1e-12;
        detail.push(format!("{name}: min (c2-c1)/t {min_gap:.2e}, curve mismatch {geom_err:.1e}"));
    }
    outcome(pass, detail.join("; "))
}

fn oracle(sols: &[(&str, Solution)]) -> Outcome {
    let mut pass = true;
    let mut detail = Vec::new();
    for name in ["case4-i", "case5-below", "case5-between", "case5-no-bifurcation"] {
        let sol = get(sols, name);
        let errs: Vec<OracleErrors> =
            [50, 100, 200, 400].iter().map(|&n| compare(sol, &fan_approx_oracle(&sol.scenario, n).unwrap()).unwrap()).collect();
        let worst = errs
            .windows(2)
            .map(|w| (w[1].traj / w[0].traj).max(w[1].strength / w[0].strength))
            .fold(0.0f64, f64::max);
        pass &= worst <= 0.6;
        detail.push(format!("{name} {worst:.3}"));
    }
    outcome(pass, format!("worst ratio per doubling: {}", detail.join(", ")))
}

fn mass(sols: &[(&str, Solution)]) -> Outcome {
    let mut worst = (0.0f64, "");
    for (name, sol) in sols {
        let h = sol.scenario.t_max.min(5.0);
        let times: Vec<f64> = (0..=50).map(|i| h * i as f64 / 50.0).collect();
        let e = mass_balance(sol, -60.0, 60.0, &times).unwrap();
        if e > worst.0 {
            worst = (e, name);
        }
    }
    outcome(worst.0 <= 1e-8, format!("max conservation error {:.2e} ({})", worst.0, worst.1))
}

fn perturbation(sols: &[(&str, Solution)]) -> Outcome {
    let mut min = f64::INFINITY;
    let mut count = 0;
    for (_, sol) in sols {
        for f in sol.fronts.iter().filter(|f| f.kind.carries_atom()) {
            let Some(phi) = front_probe(sol, f.id) else { continue };
            let w = weak_residual(&perturb_strength(sol, f.id, 0.1), &phi).unwrap();
            min = min.min(w.r_v.abs() / w.norm);
            count += 1;
        }
    }
    outcome(min >= 1e-2, format!("min |R_v|/|phi| {min:.4} over {count} atom fronts"))
}

/// Test functions clear of every front and of `t = 0`.
fn smooth_probes(sol: &Solution, rng: &mut ChaCha8Rng, n: usize) -> Vec<TestFunction> {
    let [x0, x1] = auto_window(sol, 5.0);
    let mut out = Vec::new();
    while out.len() < n {
        let c = Point::new(rng.gen_range(0.5..5.0), rng.gen_range(x0..x1));
        let phi = TestFunction::new(c, rng.gen_range(0.05..0.4), rng.gen_range(0.05..0.5));
        let (lo, hi) = phi.t_support();
        let (xa, xb) = phi.x_support();
        if phi.touches_initial_line() {
            continue;
        }
        let hit = sol.fronts.iter().any(|f| {
            (0..=64).any(|i| {
                let t = lo + (hi - lo) * i as f64 / 64.0;
                t >= f.t_start && f.t_end.is_none_or(|e| t <= e) && (xa - 1e-3..=xb + 1e-3).contains(&f.x_at(t))
            })
        });
        if !hit {
            out.push(phi);
        }
    }
    out
}

fn entropy(sols: &[(&str, Solution)]) -> Outcome {
    let quad = || Poly::new(vec![0.0, 0.0, 1.0]);
    let pair = EntropyPair::new(quad(), quad());
    let mut rng = ChaCha8Rng::seed_from_u64(7);

    let mut smooth = 0.0f64;
    for (_, sol) in sols {
        for phi in smooth_probes(sol, &mut rng, 5) {
            smooth = smooth.max(entropy_residual(sol, &pair, &phi).unwrap().abs());
        }
    }

    let epss = [1e-2, 1e-3, 1e-4];
    let uniform = RegularizedContact::uniform(0.5, 1.0, 2.0, 1.3);
    let phi_u = TestFunction::new(Point::new(1.0, -0.5), 0.5, 0.4);
    let uni = epss.iter().map(|&e| uniform.relative_residual(e, &pair, &phi_u).unwrap()).fold(0.0f64, f64::max);

    let fan = RegularizedContact::in_fan(1.0, 1.0, 1.0, 0.8);
    let phi_f = TestFunction::new(Point::new(1.0, fan.path.x_at(1.0)), 0.5, 0.3);
    let series = |p: &EntropyPair| -> Vec<f64> { epss.iter().map(|&e| fan.residual(e, p, &phi_f).unwrap().abs()).collect() };
    let affine = series(&EntropyPair::new(quad(), Poly::new(vec![0.0, 1.0])));
    let quadratic = series(&pair);
    let ratios: Vec<f64> = affine.windows(2).map(|w| w[1] / w[0]).collect();
    let linear = ratios.iter().all(|r| (0.09..=0.11).contains(r));

    let mut fd = 0.0f64;
    for _ in 0..1000 {
        let mut poly = || Poly::new((0..rng.gen_range(1..=5)).map(|_| rng.gen_range(-2.0..2.0)).collect());
        let p = EntropyPair::new(poly(), poly());
        fd = fd.max(pair_identity_error(&p, State::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))));
    }

    let list = |v: &[f64], prec: usize| v.iter().map(|x| format!("{x:.prec$e}")).collect::<Vec<_>>().join(", ");
    let pass = smooth <= 1e-8 && uni <= 1e-12 && linear && fd <= 1e-6;
    outcome(
        pass,
        format!(
            "smooth {smooth:.1e}; piecewise-constant contact relative {uni:.1e}; fan contact (g affine) [{}] ratios [{}]; \
             fan contact (g quadratic, informational) [{}]; identity {fd:.1e}",
            list(&affine, 1),
            list(&ratios, 3),
            list(&quadratic, 1)
        ),
    )
}

fn emit_battery(dir: &Path) {
    for (name, sc) in battery() {
        let case = validate_scenario(&sc).unwrap();
        let sol = run(&sc).unwrap();
        let cfg = EmitConfig { t_max: sc.t_max, nx: 201, nt: 101, window: auto_window(&sol, sc.t_max), outputs: Outputs::default() };
        emit(&sol, case, &cfg, &dir.join(name)).unwrap();
    }
}

fn tree(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out = Vec::new();
    for sub in fs::read_dir(dir).unwrap() {
        let sub = sub.unwrap().path();
        for f in fs::read_dir(&sub).unwrap() {
            let p = f.unwrap().path();
            out.push((p.strip_prefix(dir).unwrap().display().to_string(), fs::read(&p).unwrap()));
        }
    }
    out.sort();
    out
}

fn determinism() -> Outcome {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    emit_battery(a.path());
    emit_battery(b.path());
    let (ta, tb) = (tree(a.path()), tree(b.path()));
    let bytes: usize = ta.iter().map(|(_, d)| d.len()).sum();
    outcome(ta == tb && !ta.is_empty(), format!("{} files, {bytes} bytes compared", ta.len()))
}

fn main() -> ExitCode {
    let sols = solved();
    let checks: [(&str, &dyn Fn() -> Outcome); 9] = [
        ("weak-form battery", &|| weak_battery(&sols)),
        ("closed-form events", &|| closed_forms(&sols)),
        ("overcompressibility", &|| overcompressive(&sols)),
        ("curve ordering after breakdown", &|| ordering(&sols)),
        ("fan oracle convergence", &|| oracle(&sols)),
        ("mass balance", &|| mass(&sols)),
        ("perturbation sensitivity", &|| perturbation(&sols)),
        ("entropy", &|| entropy(&sols)),
        ("determinism", &determinism),
    ];
    let mut failures = 0;
    for (i, (name, check)) in checks.iter().enumerate() {
        let o = check();
        failures += usize::from(!o.pass);
        println!("criterion {} {name}: {} ({})", i + 1, if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failures} criteria failed");
        ExitCode::FAILURE
    }
}
