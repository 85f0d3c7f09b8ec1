use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::cli::scenario_file::Outputs;
use crate::cli::svg::diagram;
use crate::error::Result;
use crate::eval::{atoms_at, sample, Atom};
use crate::interact::CaseId;
use crate::model::{FrontKind, ResolutionRule, Scenario, Solution};

/// Sampling and output choices for [`emit`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmitConfig {
    pub t_max: f64,
    pub nx: usize,
    pub nt: usize,
    pub window: [f64; 2],
    pub outputs: Outputs,
}

/// Number formatting shared by every CSV file: shortest round-trip decimal,
/// `inf`/`-inf` for infinities and `nan` for undefined values.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x == f64::INFINITY {
        "inf".into()
    } else if x == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{x}")
    }
}

/// Smallest window holding every front on `[0, t_max]`, padded by a tenth
/// of its width plus 0.5 on each side.
pub fn auto_window(sol: &Solution, t_max: f64) -> [f64; 2] {
    let (xa, xb) = sol.scenario.jump_positions();
    let (mut lo, mut hi) = (xa, xb);
    for f in &sol.fronts {
        if f.t_start > t_max {
            continue;
        }
        let end = f.t_end.unwrap_or(t_max).min(t_max);
        for i in 0..=64 {
            let x = f.x_at(f.t_start + (end - f.t_start) * i as f64 / 64.0);
            lo = lo.min(x);
            hi = hi.max(x);
        }
    }
    let pad = 0.1 * (hi - lo) + 0.5;
    [lo - pad, hi + pad]
}

fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

#[derive(Serialize)]
struct EventRecord {
    index: usize,
    t: f64,
    x: f64,
    rule: ResolutionRule,
    incoming: Vec<usize>,
    outgoing: Vec<usize>,
}

#[derive(Serialize)]
struct FrontRecord {
    id: usize,
    kind: FrontKind,
    t_start: f64,
    t_end: Option<f64>,
}

#[derive(Serialize)]
struct EventsDoc<'a> {
    scenario: &'a Scenario,
    case: String,
    events: Vec<EventRecord>,
    fronts: Vec<FrontRecord>,
}

pub fn events_json(sol: &Solution, case: CaseId) -> String {
    let doc = EventsDoc {
        scenario: &sol.scenario,
        case: case.to_string(),
        events: sol
            .events
            .iter()
            .enumerate()
            .map(|(index, e)| EventRecord {
                index,
                t: e.point.t,
                x: e.point.x,
                rule: e.rule,
                incoming: e.incoming.clone(),
                outgoing: e.outgoing.clone(),
            })
            .collect(),
        fronts: sol
            .fronts
            .iter()
            .map(|f| FrontRecord { id: f.id, kind: f.kind, t_start: f.t_start, t_end: f.t_end })
            .collect(),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("event list serializes");
    s.push('\n');
    s
}

/// `front,kind,t,x,alpha,alpha0,alpha1` at 33 times per front up to `t_max`.
pub fn fronts_csv(sol: &Solution, t_max: f64) -> String {
    let mut s = String::from("front,kind,t,x,alpha,alpha0,alpha1\n");
    for f in &sol.fronts {
        if f.t_start > t_max {
            continue;
        }
        let end = f.t_end.unwrap_or(t_max).min(t_max);
        let n = if end > f.t_start { 32 } else { 0 };
        for i in 0..=n {
            let t = if n == 0 { f.t_start } else { f.t_start + (end - f.t_start) * i as f64 / n as f64 };
            let (a0, a1) = sol.split_at(f, t);
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{}",
                f.id,
                f.kind.as_str(),
                fmt_num(t),
                fmt_num(f.x_at(t)),
                fmt_num(f.strength_at(t)),
                fmt_num(a0),
                fmt_num(a1)
            );
        }
    }
    s
}

/// `u` and regular `v` on the grid, one row per time; the first row holds
/// the positions. Row `t = 0` is the initial data.
pub fn field_csvs(sol: &Solution, cfg: &EmitConfig) -> Result<(String, String)> {
    let xs = grid(cfg.window[0], cfg.window[1], cfg.nx);
    let header: String = std::iter::once("t".to_string()).chain(xs.iter().map(|&x| fmt_num(x))).collect::<Vec<_>>().join(",");
    let mut u = header.clone() + "\n";
    let mut v = header + "\n";
    for t in grid(0.0, cfg.t_max, cfg.nt) {
        let (us, vs): (Vec<f64>, Vec<f64>) = if t == 0.0 {
            xs.iter().map(|&x| sol.scenario.initial_state(x)).map(|s| (s.u, s.v)).unzip()
        } else {
            let smp = sample(sol, t, &xs)?;
            (smp.u_vals, smp.v_regular_vals)
        };
        let row = |vals: &[f64]| {
            std::iter::once(fmt_num(t)).chain(vals.iter().map(|&x| fmt_num(x))).collect::<Vec<_>>().join(",")
        };
        u += &row(&us);
        u.push('\n');
        v += &row(&vs);
        v.push('\n');
    }
    Ok((u, v))
}

/// `t,front,x,alpha,alpha0,alpha1` for `(t, atoms)` groups; header only when
/// there are no atoms.
pub fn atoms_csv(groups: &[(f64, Vec<Atom>)]) -> String {
    let mut s = String::from("t,front,x,alpha,alpha0,alpha1\n");
    for (t, atoms) in groups {
        for a in atoms {
            let _ = writeln!(
                s,
                "{},{},{},{},{},{}",
                fmt_num(*t),
                a.front,
                fmt_num(a.x),
                fmt_num(a.alpha),
                fmt_num(a.alpha0),
                fmt_num(a.alpha1)
            );
        }
    }
    s
}

/// Writes the selected outputs into `dir` and returns the paths written.
pub fn emit(sol: &Solution, case: CaseId, cfg: &EmitConfig, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let mut put = |name: &str, body: String| -> Result<()> {
        let p = dir.join(name);
        fs::write(&p, body)?;
        written.push(p);
        Ok(())
    };
    if cfg.outputs.events {
        put("events.json", events_json(sol, case))?;
    }
    if cfg.outputs.fronts {
        put("fronts.csv", fronts_csv(sol, cfg.t_max))?;
    }
    if cfg.outputs.fields {
        let (u, v) = field_csvs(sol, cfg)?;
        put("u.csv", u)?;
        put("v.csv", v)?;
    }
    if cfg.outputs.atoms {
        let groups: Vec<(f64, Vec<Atom>)> = grid(0.0, cfg.t_max, cfg.nt).into_iter().map(|t| (t, atoms_at(sol, t))).collect();
        put("atoms.csv", atoms_csv(&groups))?;
    }
    if cfg.outputs.svg {
        put("diagram.svg", diagram(sol, cfg.window, cfg.t_max))?;
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_tokens() {
        assert_eq!(fmt_num(f64::INFINITY), "inf");
        assert_eq!(fmt_num(f64::NEG_INFINITY), "-inf");
        assert_eq!(fmt_num(f64::NAN), "nan");
        assert_eq!(fmt_num(0.5), "0.5");
        assert_eq!(fmt_num(1.0 / 3.0).parse::<f64>().unwrap(), 1.0 / 3.0);
    }

    #[test]
    fn empty_atom_table_is_header_only() {
        assert_eq!(atoms_csv(&[(0.5, Vec::new())]), "t,front,x,alpha,alpha0,alpha1\n");
    }
}
