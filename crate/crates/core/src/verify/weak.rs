//! Distributional residuals of both equations against a test function.
//!
//! The outer integral runs over time with breakpoints at every event and
//! front birth. At fixed time each region piece is integrated in `x`, except
//! transported profiles, which are integrated in the source parameter where
//! the density `v dx/dtau` stays bounded.

use std::cell::RefCell;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::eval::pieces_at;
use crate::fronts::{w_density, w_tau, w_tau_on_front, w_x};
use crate::model::{Front, Point, Region, Solution};
use crate::quad::{integrate, integrate_graded, Tolerance};
use crate::verify::testfn::TestFunction;

const INNER: Tolerance = Tolerance::new(1e-11, 1e-9);
const OUTER: Tolerance = Tolerance::new(1e-10, 1e-9);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeakResidual {
    pub r_u: f64,
    pub r_v: f64,
    /// Integrals of the absolute values of the terms making up `r_u`/`r_v`.
    pub scale_u: f64,
    pub scale_v: f64,
    /// [`TestFunction::norm`]
    pub norm: f64,
}

impl WeakResidual {
    /// Residual relative to the size of the terms that cancel in it. The
    /// size is floored at `1e-6 * norm` so that a test function touching a
    /// region only through its exponentially small tail is not divided by
    /// a vanishing scale.
    pub fn relative(&self) -> f64 {
        let floor = 1e-6 * self.norm;
        let rel = |r: f64, s: f64| r.abs() / s.max(floor);
        rel(self.r_u, self.scale_u).max(rel(self.r_v, self.scale_v))
    }

    /// `max(|r_u|, |r_v|) / norm`
    pub fn per_norm(&self) -> f64 {
        self.r_u.abs().max(self.r_v.abs()) / self.norm
    }
}

/// Times in `(lo, hi)` at which `f` crosses the vertical line `x`, located
/// by sampling and bisection.
fn line_crossings(f: &Front, x: f64, lo: f64, hi: f64, out: &mut Vec<f64>) {
    let a = lo.max(f.t_start);
    let b = f.t_end.map_or(hi, |e| e.min(hi));
    if !(b > a) {
        return;
    }
    let n = 32;
    let g = |t: f64| f.x_at(t) - x;
    let mut t0 = a;
    let mut g0 = g(a);
    for i in 1..=n {
        let t1 = a + (b - a) * i as f64 / n as f64;
        let g1 = g(t1);
        if g0 * g1 < 0.0 {
            let (mut l, mut r) = (t0, t1);
            while r - l > 1e-14 * r.max(1.0) {
                let m = 0.5 * (l + r);
                if (g(m) < 0.0) == (g0 < 0.0) {
                    l = m;
                } else {
                    r = m;
                }
            }
            out.push(0.5 * (l + r));
        }
        t0 = t1;
        g0 = g1;
    }
}

/// Time breakpoints inside the support of `phi`: front ends, events, and the
/// times fronts cross the edges and center line of the support.
pub fn time_breaks(sol: &Solution, phi: &TestFunction) -> Vec<f64> {
    let (lo, hi) = phi.t_support();
    let (xa, xb) = phi.x_support();
    let mut b: Vec<f64> = sol
        .fronts
        .iter()
        .flat_map(|f| [Some(f.t_start), f.t_end])
        .flatten()
        .chain(sol.events.iter().map(|e| e.point.t))
        .collect();
    for f in &sol.fronts {
        for x in [xa, phi.center.x, xb] {
            line_crossings(f, x, lo, hi, &mut b);
        }
    }
    b.push(phi.center.t);
    b.retain(|&t| t > lo && t < hi);
    b.sort_by(f64::total_cmp);
    b.dedup();
    b
}

/// Integrand of the `v` equation and its term-wise absolute value. The
/// absolute value only has kinks on the center lines of the test function.
fn v_terms(v: f64, u: f64, pt: f64, px: f64) -> (f64, f64) {
    let flux = (u - 1.0) * v;
    (v * pt + flux * px, v.abs() * pt.abs() + flux.abs() * px.abs())
}

/// `[R_u, S_u, R_v, S_v]` contributions of region `r` on `[a, b]` at time `t`.
/// `tau_ends` are the source parameters at `a` and `b` for transported profiles.
fn region_terms(
    r: &Region,
    phi: &TestFunction,
    t: f64,
    a: f64,
    b: f64,
    tau_ends: Option<(f64, f64)>,
) -> Result<[f64; 4]> {
    let mut acc = [0.0; 4];
    let singular = r.v.is_singular_profile();
    let res = integrate(
        |x| {
            let p = Point::new(t, x);
            let u = r.u.value(p);
            let (pt, px) = phi.grad(t, x);
            let fu = u * pt + 0.5 * u * u * px;
            let su = u.abs() * pt.abs() + 0.5 * u * u * px.abs();
            if singular {
                [fu, su, 0.0, 0.0]
            } else {
                let v = r.v.value(p);
                let (fv, sv) = v_terms(v, u, pt, px);
                [fu, su, fv, sv]
            }
        },
        a,
        b,
        &[phi.center.x],
        INNER,
    );
    if !res.converged {
        return Err(Error::Quadrature(format!("region {} at t={t}", r.id)));
    }
    for (a, v) in acc.iter_mut().zip(res.value) {
        *a += v;
    }
    if singular {
        let (ta, tb) = tau_ends.expect("transported profile needs source parameters");
        let res = integrate_graded(
            |tau| {
                let x = w_x(&r.v, tau, t);
                let p = Point::new(t, x);
                let u = r.u.value(p);
                let (pt, px) = phi.grad(t, x);
                let (fv, sv) = v_terms(w_density(&r.v, tau), u, pt, px);
                [fv, sv]
            },
            ta.min(tb),
            ta.max(tb),
            INNER,
        );
        if !res.converged {
            return Err(Error::Quadrature(format!("transported profile in region {} at t={t}", r.id)));
        }
        let sign = if tb >= ta { 1.0 } else { -1.0 };
        acc[2] += sign * res.value[0];
        acc[3] += res.value[1];
    }
    Ok(acc)
}

/// `[R_u, S_u, R_v, S_v]` integrands at time `t`.
fn slab(sol: &Solution, phi: &TestFunction, t: f64) -> Result<[f64; 4]> {
    let (xs_lo, xs_hi) = phi.x_support();
    let mut acc = [0.0; 4];
    for piece in pieces_at(sol, t) {
        let a = piece.x_lo.max(xs_lo);
        let b = piece.x_hi.min(xs_hi);
        if !(b > a) {
            continue;
        }
        let r = sol.region(piece.region);
        let tau_ends = if r.v.is_singular_profile() {
            let end = |x: f64, bound: Option<usize>, clipped: bool| -> Option<f64> {
                match bound {
                    Some(id) if !clipped => w_tau_on_front(&r.v, &sol.front(id).geometry, t),
                    _ => w_tau(&r.v, Point::new(t, x)),
                }
            };
            let ta = end(a, piece.left, a > piece.x_lo);
            let tb = end(b, piece.right, b < piece.x_hi);
            Some((ta.unwrap_or(f64::NAN), tb.unwrap_or(f64::NAN)))
        } else {
            None
        };
        let c = region_terms(r, phi, t, a, b, tau_ends)?;
        for j in 0..4 {
            acc[j] += c[j];
        }
    }
    for f in sol.fronts.iter().filter(|f| f.kind.carries_atom() && f.alive_at(t)) {
        let x = f.x_at(t);
        if x <= xs_lo || x >= xs_hi {
            continue;
        }
        let p = Point::new(t, x);
        let (pt, px) = phi.grad(t, x);
        let alpha = f.strength_at(t);
        let (a0, a1) = sol.split_at(f, t);
        let ul = sol.region(f.left).u.value(p);
        let ur = sol.region(f.right).u.value(p);
        let flux = a0 * (ul - 1.0) + a1 * (ur - 1.0);
        acc[2] += alpha * pt + flux * px;
        acc[3] += alpha.abs() * pt.abs() + flux.abs() * px.abs();
    }
    Ok(acc)
}

fn initial_terms(sol: &Solution, phi: &TestFunction) -> Result<[f64; 4]> {
    let (xa, xb) = sol.scenario.jump_positions();
    let (lo, hi) = phi.x_support();
    let res = integrate(
        |x| {
            let s = sol.scenario.initial_state(x);
            let w = phi.value(0.0, x);
            [s.u * w, (s.u * w).abs(), s.v * w, (s.v * w).abs()]
        },
        lo,
        hi,
        &[xa, xb, phi.center.x],
        INNER,
    );
    if !res.converged {
        return Err(Error::Quadrature("initial data term".into()));
    }
    let mut v = res.value;
    for f in sol.fronts.iter().filter(|f| f.kind.carries_atom() && f.t_start == 0.0) {
        let w = f.strength_at(0.0) * phi.value(0.0, f.x_at(0.0));
        v[2] += w;
        v[3] += w.abs();
    }
    Ok(v)
}

pub fn weak_residual(sol: &Solution, phi: &TestFunction) -> Result<WeakResidual> {
    let (lo, hi) = phi.t_support();
    let breaks = time_breaks(sol, phi);
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let res = integrate(
        |t| match slab(sol, phi, t) {
            Ok(v) => v,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                [f64::NAN; 4]
            }
        },
        lo,
        hi,
        &breaks,
        OUTER,
    );
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    if !res.converged {
        return Err(Error::Quadrature(format!("outer time integral for {phi:?}")));
    }
    let mut v = res.value;
    if phi.touches_initial_line() {
        let init = initial_terms(sol, phi)?;
        for j in 0..4 {
            v[j] += init[j];
        }
    }
    Ok(WeakResidual { r_u: v[0], scale_u: v[1], r_v: v[2], scale_v: v[3], norm: phi.norm() })
}

/// Residuals for many test functions, evaluated in parallel. Output order
/// matches `tests`.
pub fn weak_residuals(sol: &Solution, tests: &[TestFunction]) -> Vec<Result<WeakResidual>> {
    tests.par_iter().map(|phi| weak_residual(sol, phi)).collect()
}
