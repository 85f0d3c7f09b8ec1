//! Conservation of the `v` mass (regular part plus atoms) over a window.

use crate::error::{Error, Result};
use crate::eval::pieces_at;
use crate::fronts::{w_density, w_tau, w_tau_on_front};
use crate::model::{Point, Solution, VLaw};
use crate::quad::{integrate, integrate_graded, Tolerance};

const TOL: Tolerance = Tolerance::new(1e-14, 1e-13);

/// `int_{x0}^{x1} v_regular(t, x) dx + sum of atoms in the window`.
pub fn window_mass(sol: &Solution, x0: f64, x1: f64, t: f64) -> Result<f64> {
    if t == 0.0 {
        let (xa, xb) = sol.scenario.jump_positions();
        let r = integrate(|x| [sol.scenario.initial_state(x).v], x0, x1, &[xa, xb], TOL);
        let atoms: f64 = sol
            .fronts
            .iter()
            .filter(|f| f.kind.carries_atom() && f.t_start == 0.0)
            .filter(|f| f.x_at(0.0) > x0 && f.x_at(0.0) < x1)
            .map(|f| f.strength_at(0.0))
            .sum();
        return Ok(r.value[0] + atoms);
    }
    let mut total = 0.0;
    for piece in pieces_at(sol, t) {
        let a = piece.x_lo.max(x0);
        let b = piece.x_hi.min(x1);
        if !(b > a) {
            continue;
        }
        let r = sol.region(piece.region);
        total += match &r.v {
            VLaw::Const(v) => v * (b - a),
            VLaw::FanExp { v_ref, u_ref, center } => {
                let s = t - center.t;
                let prim = |x: f64| s * v_ref * ((x - center.x) / s - u_ref).exp();
                prim(b) - prim(a)
            }
            law => {
                let end = |x: f64, bound: Option<usize>, clipped: bool| match bound {
                    Some(id) if !clipped => w_tau_on_front(law, &sol.front(id).geometry, t),
                    _ => w_tau(law, Point::new(t, x)),
                };
                let ta = end(a, piece.left, a > piece.x_lo).unwrap_or(f64::NAN);
                let tb = end(b, piece.right, b < piece.x_hi).unwrap_or(f64::NAN);
                let q = integrate_graded(|tau| [w_density(law, tau)], ta.min(tb), ta.max(tb), TOL);
                if !q.converged {
                    return Err(Error::Quadrature(format!("transported mass in region {} at t={t}", r.id)));
                }
                q.value[0] * if tb >= ta { 1.0 } else { -1.0 }
            }
        };
    }
    for f in sol.fronts.iter().filter(|f| f.kind.carries_atom() && f.alive_at(t)) {
        let x = f.x_at(t);
        if x > x0 && x < x1 {
            total += f.strength_at(t);
        }
    }
    Ok(total)
}

/// Largest deviation of the window mass from `M(0) + t (F(x0) - F(x1))`,
/// where `F = (u - 1) v` is the constant boundary flux, over `times`.
/// Every front must stay strictly inside the window up to the last time.
pub fn mass_balance(sol: &Solution, x0: f64, x1: f64, times: &[f64]) -> Result<f64> {
    let t_end = times.iter().copied().fold(0.0, f64::max);
    for f in &sol.fronts {
        let hi = f.t_end.unwrap_or(t_end).min(t_end);
        if f.t_start > t_end {
            continue;
        }
        for i in 0..=64 {
            let t = f.t_start + (hi - f.t_start) * i as f64 / 64.0;
            let x = f.x_at(t);
            if !(x > x0 && x < x1) {
                return Err(Error::Domain(format!("front {} leaves the window at t={t}", f.id)));
            }
        }
    }
    let left = sol.scenario.left;
    let right = sol.scenario.right;
    let flux_in = left.flux().1 - right.flux().1;
    let m0 = window_mass(sol, x0, x1, 0.0)?;
    let mut worst = 0.0f64;
    for &t in times {
        let m = window_mass(sol, x0, x1, t)?;
        worst = worst.max((m - m0 - t * flux_in).abs());
    }
    Ok(worst)
}
