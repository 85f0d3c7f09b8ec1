//! Brute-force approximation of a rarefaction interaction: the fan is
//! replaced by `n` small jumps on lines through its center, each satisfying
//! the jump conditions of both equations, and the delta shock is tracked as
//! a chain of straight segments with constant strength growth.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::interact::{validate_scenario, CaseId};
use crate::model::{FrontKind, ResolutionRule, Scenario, Solution, State};
use crate::riemann::rh_deficit;

/// Straight piece of the approximate delta shock.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleSegment {
    pub t0: f64,
    pub t1: f64,
    pub x0: f64,
    pub speed: f64,
    pub alpha0: f64,
    pub rate: f64,
}

impl OracleSegment {
    pub fn x_at(&self, t: f64) -> f64 {
        self.x0 + self.speed * (t - self.t0)
    }

    pub fn alpha_at(&self, t: f64) -> f64 {
        self.alpha0 + self.rate * (t - self.t0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleRun {
    pub steps: usize,
    pub segments: Vec<OracleSegment>,
    /// Time after which the approximate delta shock is no longer
    /// overcompressive, if that happens.
    pub t_stop: Option<f64>,
}

impl OracleRun {
    pub fn t_end(&self) -> f64 {
        self.segments.last().map_or(0.0, |s| s.t1)
    }

    pub fn segment_at(&self, t: f64) -> Option<&OracleSegment> {
        self.segments.iter().find(|s| t >= s.t0 && t < s.t1)
    }
}

/// Sup-norm differences between the exact delta shock inside the fan and
/// the approximation, over `[t_from, t_to]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleErrors {
    pub traj: f64,
    pub strength: f64,
    pub t_from: f64,
    pub t_to: f64,
}

/// Line `x = slope t` through the fan center and the state it puts on the
/// delta shock's fan-side.
struct Crossing {
    slope: f64,
    state: State,
}

fn crossings(sc: &Scenario, n: usize, case4: bool) -> Result<Vec<Crossing>> {
    let (lo, hi) = if case4 { (sc.middle.u, sc.right.u) } else { (sc.left.u, sc.middle.u) };
    let eta = (hi - lo) / n as f64;
    if eta >= 2.0 {
        return Err(Error::Domain(format!("fan step {eta} too coarse; use more steps")));
    }
    let mut out = Vec::with_capacity(n + 1);
    if case4 {
        let v_mid = sc.right.v * (sc.middle.u - sc.right.u).exp();
        out.push(Crossing { slope: sc.middle.u - 1.0, state: State::new(sc.middle.u, v_mid) });
        let mut v = v_mid;
        for k in 1..=n {
            let u = lo + k as f64 * eta;
            v *= (1.0 + 0.5 * eta) / (1.0 - 0.5 * eta);
            out.push(Crossing { slope: u - 0.5 * eta, state: State::new(u, v) });
        }
    } else {
        let mut v = sc.middle.v;
        for k in 1..=n {
            let u = hi - k as f64 * eta;
            v *= (1.0 - 0.5 * eta) / (1.0 + 0.5 * eta);
            out.push(Crossing { slope: u + 0.5 * eta, state: State::new(u, v) });
        }
    }
    Ok(out)
}

/// Approximates the interaction of a delta shock with a rarefaction fan
/// split into `n >= 2` jumps.
pub fn fan_approx_oracle(sc: &Scenario, n: usize) -> Result<OracleRun> {
    if n < 2 {
        return Err(Error::Domain("fan approximation needs at least 2 steps".into()));
    }
    let case4 = match validate_scenario(sc)? {
        CaseId::Four(_) => true,
        CaseId::Five(_) => false,
        other => return Err(Error::Domain(format!("case {other} has no rarefaction fan"))),
    };
    let (mut left, mut right) = if case4 { (sc.left, sc.middle) } else { (sc.middle, sc.right) };
    let mut seg = OracleSegment {
        t0: 0.0,
        t1: f64::INFINITY,
        x0: sc.offset,
        speed: 0.5 * (left.u + right.u),
        alpha0: 0.0,
        rate: rh_deficit(left, right, 0.5 * (left.u + right.u)),
    };
    let mut segments = Vec::new();
    let mut t_stop = None;
    for c in crossings(sc, n, case4)? {
        let gap = seg.x_at(0.0);
        let rel = c.slope - seg.speed;
        if rel == 0.0 {
            break;
        }
        let t = gap / rel;
        if !(t >= seg.t0) {
            break;
        }
        if case4 {
            right = c.state;
        } else {
            left = c.state;
        }
        let x = seg.x_at(t);
        let alpha = seg.alpha_at(t);
        seg.t1 = t;
        segments.push(seg);
        if left.u - right.u < 2.0 - 1e-12 {
            t_stop = Some(t);
            break;
        }
        let speed = 0.5 * (left.u + right.u);
        seg = OracleSegment { t0: t, t1: f64::INFINITY, x0: x, speed, alpha0: alpha, rate: rh_deficit(left, right, speed) };
    }
    if t_stop.is_none() {
        segments.push(seg);
    }
    Ok(OracleRun { steps: n, segments, t_stop })
}

/// Compares the curved delta shock of `sol` with `run` on the overlap of
/// their lifetimes, sampled at 2001 times.
pub fn compare(sol: &Solution, run: &OracleRun) -> Result<OracleErrors> {
    let front = sol
        .events
        .iter()
        .filter(|e| e.rule == ResolutionRule::DeltaEntersFan)
        .flat_map(|e| e.outgoing.iter())
        .map(|&id| sol.front(id))
        .find(|f| f.kind == FrontKind::DeltaShock)
        .ok_or_else(|| Error::Domain("no delta shock enters a fan".into()))?;
    let t_from = front.t_start;
    let t_to = front.t_end.unwrap_or(sol.scenario.t_max).min(run.t_end());
    if !(t_to > t_from) {
        return Err(Error::Domain("exact and approximate fan crossings do not overlap".into()));
    }
    let mut traj = 0.0f64;
    let mut strength = 0.0f64;
    let samples = 2000;
    for i in 0..=samples {
        let t = t_from + (t_to - t_from) * (i as f64 / samples as f64).min(1.0 - 1e-12);
        let Some(seg) = run.segment_at(t) else { continue };
        traj = traj.max((front.x_at(t) - seg.x_at(t)).abs());
        strength = strength.max((front.strength_at(t) - seg.alpha_at(t)).abs());
    }
    Ok(OracleErrors { traj, strength, t_from, t_to })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interact::run;

    fn case4() -> Scenario {
        Scenario::new(State::new(4.0, 1.0), State::new(1.0, 1.0), State::new(1.5, 2.0), -1.0)
    }

    #[test]
    fn rejects_too_few_steps_and_non_fan_cases() {
        assert!(fan_approx_oracle(&case4(), 1).is_err());
        let merge = Scenario::new(State::new(6.0, 1.0), State::new(3.0, 1.0), State::new(0.0, 1.0), -1.0);
        assert!(fan_approx_oracle(&merge, 10).is_err());
    }

    #[test]
    fn steps_satisfy_jump_conditions() {
        let sc = case4();
        let cs = crossings(&sc, 8, true).unwrap();
        for w in cs[1..].windows(2) {
            let (l, r) = (w[0].state, w[1].state);
            assert!(rh_deficit(l, r, w[1].slope).abs() < 1e-13);
            assert!((w[1].slope - 0.5 * (l.u + r.u)).abs() < 1e-13);
        }
    }

    #[test]
    fn contact_crossing_matches_exact() {
        let sc = case4();
        let r = fan_approx_oracle(&sc, 10).unwrap();
        assert!((r.segments[0].t1 - 0.4).abs() < 1e-14);
        let errs = compare(&run(&sc).unwrap(), &r).unwrap();
        assert!(errs.traj < 0.05 && errs.strength < 0.05);
    }
}
