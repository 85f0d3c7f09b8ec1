//! Overcompressibility `u_R <= c' <= u_L - 1` along delta shocks.

use serde::Serialize;

use crate::model::{FrontId, FrontKind, Solution};

/// Margins below this count as touching the admissibility boundary.
pub const TOUCH_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonitorReport {
    /// Smallest of `c' - u_R` and `u_L - 1 - c'` over all samples.
    pub min_margin: f64,
    /// Samples `(front, t)` whose margin is below [`TOUCH_TOL`].
    pub touches: Vec<(FrontId, f64)>,
    pub samples: usize,
}

/// `(c' - u_R, u_L - 1 - c')` on front `id` at time `t`, with one-sided
/// traces of `u` taken from the neighbouring regions.
pub fn margins(sol: &Solution, id: FrontId, t: f64) -> (f64, f64) {
    let f = sol.front(id);
    let p = f.geometry.point_at(t);
    let speed = f.geometry.slope_at(t);
    let ul = sol.region(f.left).u.value(p);
    let ur = sol.region(f.right).u.value(p);
    (speed - ur, ul - 1.0 - speed)
}

/// Samples every delta shock of positive length at `n` equally spaced
/// times, endpoints included. Fronts alive forever are followed for
/// `t_max` time units.
pub fn overcompressibility(sol: &Solution, n: usize) -> MonitorReport {
    let mut report = MonitorReport { min_margin: f64::INFINITY, touches: Vec::new(), samples: 0 };
    for f in sol.fronts.iter().filter(|f| f.kind == FrontKind::DeltaShock) {
        let hi = f.t_end.unwrap_or(f.t_start + sol.scenario.t_max);
        if !(hi > f.t_start) {
            continue;
        }
        for i in 0..n {
            let t = f.t_start + (hi - f.t_start) * i as f64 / (n - 1) as f64;
            let (a, b) = margins(sol, f.id, t);
            let m = a.min(b);
            report.min_margin = report.min_margin.min(m);
            report.samples += 1;
            if m < TOUCH_TOL {
                report.touches.push((f.id, t));
            }
        }
    }
    report
}
