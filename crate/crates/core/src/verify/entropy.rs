//! Entropy pairs `eta = f(u) + g(v e^{-u}) e^u`, `q = (u - 1) eta + f~(u)`
//! with `f~' = f' - f`, and residuals of `eta_t + q_x` in the sense of
//! distributions.

use std::cell::RefCell;

use crate::error::{Error, Result};
use crate::eval::pieces_at;
use crate::model::{CurveGeometry, Point, Solution, State, ULaw, VLaw};
use crate::quad::{integrate, integrate_graded, Tolerance};
use crate::verify::testfn::TestFunction;
use crate::verify::weak::time_breaks;

const INNER: Tolerance = Tolerance::new(1e-12, 1e-10);
const OUTER: Tolerance = Tolerance::new(1e-11, 1e-10);
const REG_INNER: Tolerance = Tolerance::new(1e-14, 1e-12);
const REG_OUTER: Tolerance = Tolerance::new(1e-13, 1e-11);

/// Polynomial `c[0] + c[1] x + c[2] x^2 + ...`
#[derive(Debug, Clone, PartialEq)]
pub struct Poly {
    pub coeffs: Vec<f64>,
}

impl Poly {
    pub fn new(coeffs: Vec<f64>) -> Self {
        Self { coeffs }
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(self.coeffs.iter().enumerate().skip(1).map(|(i, c)| i as f64 * c).collect())
    }

    /// Antiderivative vanishing at 0.
    pub fn antiderivative(&self) -> Poly {
        let mut c = vec![0.0];
        c.extend(self.coeffs.iter().enumerate().map(|(i, c)| c / (i + 1) as f64));
        Poly::new(c)
    }

    fn sub(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let at = |p: &Poly, i: usize| p.coeffs.get(i).copied().unwrap_or(0.0);
        Poly::new((0..n).map(|i| at(self, i) - at(other, i)).collect())
    }

    /// Second derivative nonnegative on a grid over `[lo, hi]`.
    pub fn is_convex_on(&self, lo: f64, hi: f64) -> bool {
        let d2 = self.derivative().derivative();
        (0..=400).all(|i| d2.eval(lo + (hi - lo) * i as f64 / 400.0) >= -1e-12)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntropyPair {
    pub f: Poly,
    pub g: Poly,
    f_tilde: Poly,
}

impl EntropyPair {
    pub fn new(f: Poly, g: Poly) -> Self {
        let f_tilde = f.sub(&f.antiderivative());
        Self { f, g, f_tilde }
    }

    pub fn eta(&self, u: f64, v: f64) -> f64 {
        self.f.eval(u) + self.g.eval(v * (-u).exp()) * u.exp()
    }

    pub fn q(&self, u: f64, v: f64) -> f64 {
        (u - 1.0) * self.eta(u, v) + self.f_tilde.eval(u)
    }

    /// `(eta_u, eta_v)` in closed form.
    pub fn eta_grad(&self, u: f64, v: f64) -> (f64, f64) {
        let m = v * (-u).exp();
        let gp = self.g.derivative().eval(m);
        (self.f.derivative().eval(u) + u.exp() * (self.g.eval(m) - m * gp), gp)
    }

    /// Convexity of `f` and `g` on the given ranges of `u` and `m = v e^{-u}`.
    pub fn check_convex(&self, u_range: (f64, f64), m_range: (f64, f64)) -> Result<()> {
        if !self.f.is_convex_on(u_range.0, u_range.1) {
            return Err(Error::Domain("entropy generator f is not convex".into()));
        }
        if !self.g.is_convex_on(m_range.0, m_range.1) {
            return Err(Error::Domain("entropy generator g is not convex".into()));
        }
        Ok(())
    }
}

/// Largest violation of `q_u = u eta_u + v eta_v`, `q_v = (u - 1) eta_v`
/// at `s`, with `q` differentiated by central differences.
pub fn pair_identity_error(pair: &EntropyPair, s: State) -> f64 {
    let h = 1e-5;
    let qu = (pair.q(s.u + h, s.v) - pair.q(s.u - h, s.v)) / (2.0 * h);
    let qv = (pair.q(s.u, s.v + h) - pair.q(s.u, s.v - h)) / (2.0 * h);
    let (eu, ev) = pair.eta_grad(s.u, s.v);
    (qu - (s.u * eu + s.v * ev)).abs().max((qv - (s.u - 1.0) * ev).abs())
}

fn state_ranges(sol: &Solution) -> ((f64, f64), (f64, f64)) {
    let sc = &sol.scenario;
    let us = [sc.left.u, sc.middle.u, sc.right.u];
    let lo = us.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = us.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let ms = [sc.left, sc.middle, sc.right].map(|s| s.v * (-s.u).exp());
    let mlo = ms.iter().copied().fold(f64::INFINITY, f64::min);
    let mhi = ms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    ((lo - 1.0, hi + 1.0), (mlo - 1.0 - mlo.abs(), mhi + 1.0 + mhi.abs()))
}

/// `iint (eta phi_t + q phi_x)` over the function part of the solution,
/// plus the initial-data term when the support reaches `t = 0`. Atoms are
/// not included. Nonnegative for an admissible shock with a convex pair.
pub fn entropy_residual(sol: &Solution, pair: &EntropyPair, phi: &TestFunction) -> Result<f64> {
    let (ur, mr) = state_ranges(sol);
    pair.check_convex(ur, mr)?;
    let (lo, hi) = phi.t_support();
    let (xs_lo, xs_hi) = phi.x_support();
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let res = integrate(
        |t| {
            let mut acc = 0.0;
            for piece in pieces_at(sol, t) {
                let a = piece.x_lo.max(xs_lo);
                let b = piece.x_hi.min(xs_hi);
                if !(b > a) {
                    continue;
                }
                let r = sol.region(piece.region);
                let g = |x: f64| {
                    let p = Point::new(t, x);
                    let s = r.state_at(p);
                    let (pt, px) = phi.grad(t, x);
                    [pair.eta(s.u, s.v) * pt + pair.q(s.u, s.v) * px]
                };
                let q = if r.v.is_singular_profile() {
                    integrate_graded(g, a, b, INNER)
                } else {
                    integrate(g, a, b, &[], INNER)
                };
                if !q.converged {
                    failure.borrow_mut().get_or_insert(Error::Quadrature(format!("entropy in region {} at t={t}", r.id)));
                }
                acc += q.value[0];
            }
            [acc]
        },
        lo,
        hi,
        &time_breaks(sol, phi),
        OUTER,
    );
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    if !res.converged {
        return Err(Error::Quadrature("entropy time integral".into()));
    }
    let mut total = res.value[0];
    if phi.touches_initial_line() {
        let (xa, xb) = sol.scenario.jump_positions();
        let init = integrate(
            |x| {
                let s = sol.scenario.initial_state(x);
                [pair.eta(s.u, s.v) * phi.value(0.0, x)]
            },
            xs_lo,
            xs_hi,
            &[xa, xb],
            INNER,
        );
        total += init.value[0];
    }
    Ok(total)
}

/// Delta contact of constant strength `gamma` travelling along `path`,
/// which must be a characteristic `x' = u - 1` of `u`, between the smooth
/// fields `v_left` and `v_right`.
#[derive(Debug, Clone, PartialEq)]
pub struct RegularizedContact {
    pub u: ULaw,
    pub path: CurveGeometry,
    pub v_left: VLaw,
    pub v_right: VLaw,
    pub gamma: f64,
}

impl RegularizedContact {
    /// `u = u0` everywhere and a straight path through the origin.
    pub fn uniform(u0: f64, v_left: f64, v_right: f64, gamma: f64) -> Self {
        Self {
            u: ULaw::Const(u0),
            path: CurveGeometry::line(Point::new(0.0, 0.0), u0 - 1.0),
            v_left: VLaw::Const(v_left),
            v_right: VLaw::Const(v_right),
            gamma,
        }
    }

    /// Centered fan `u = x/t` with `v = v_ref exp(x/t - u_ref)` on both
    /// sides of the characteristic `x = t (c - ln t)`.
    pub fn in_fan(c: f64, v_ref: f64, u_ref: f64, gamma: f64) -> Self {
        let center = Point::new(0.0, 0.0);
        let v = VLaw::FanExp { v_ref, u_ref, center };
        Self { u: ULaw::Fan { center }, path: CurveGeometry::Log { center, c }, v_left: v.clone(), v_right: v, gamma }
    }

    /// `v` of the regularized field: `gamma/(2 eps)` on `|x - path(t)| < eps`.
    pub fn v(&self, eps: f64, p: Point) -> f64 {
        let c = self.path.x_at(p.t);
        if p.x < c - eps {
            self.v_left.value(p)
        } else if p.x < c + eps {
            self.gamma / (2.0 * eps)
        } else {
            self.v_right.value(p)
        }
    }

    /// `iint (eta phi_t + q phi_x)` of the field regularized with width
    /// `eps`. `phi` must be supported in `t > 0`.
    pub fn residual(&self, eps: f64, pair: &EntropyPair, phi: &TestFunction) -> Result<f64> {
        self.integral(eps, phi, |u, v, pt, px| pair.eta(u, v) * pt + pair.q(u, v) * px)
    }

    /// [`Self::residual`] divided by `iint (|eta phi_t| + |q phi_x|)`.
    pub fn relative_residual(&self, eps: f64, pair: &EntropyPair, phi: &TestFunction) -> Result<f64> {
        let r = self.residual(eps, pair, phi)?;
        let scale = self.integral(eps, phi, |u, v, pt, px| (pair.eta(u, v) * pt).abs() + (pair.q(u, v) * px).abs())?;
        Ok(r.abs() / scale)
    }

    fn integral(&self, eps: f64, phi: &TestFunction, g: impl Fn(f64, f64, f64, f64) -> f64) -> Result<f64> {
        if phi.touches_initial_line() {
            return Err(Error::Domain("test function must vanish near t = 0".into()));
        }
        if !(eps > 0.0) {
            return Err(Error::Domain("regularization width must be positive".into()));
        }
        let (lo, hi) = phi.t_support();
        let (xs_lo, xs_hi) = phi.x_support();
        let mut ok = true;
        let res = integrate(
            |t| {
                let c = self.path.x_at(t);
                let inner = integrate(
                    |x| {
                        let p = Point::new(t, x);
                        let (pt, px) = phi.grad(t, x);
                        [g(self.u.value(p), self.v(eps, p), pt, px)]
                    },
                    xs_lo,
                    xs_hi,
                    &[c - eps, c + eps, phi.center.x],
                    REG_INNER,
                );
                ok &= inner.converged;
                inner.value
            },
            lo,
            hi,
            &[phi.center.t],
            REG_OUTER,
        );
        if !(ok && res.converged) {
            return Err(Error::Quadrature("regularized contact residual".into()));
        }
        Ok(res.value[0])
    }
}
