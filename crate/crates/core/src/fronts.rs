//! Curve algebra for fronts inside centered fans: trajectories of delta
//! shocks crossing a fan, their breakdown, 1-characteristics, intersections,
//! and the singular `v` profiles that appear after a bifurcation.

use crate::error::{Error, Result};
use crate::model::{CurveGeometry, Point, State, StrengthLaw, StrengthTable, TableNode, Trace, ULaw, VLaw};
use crate::quad::{self, Tolerance};
use crate::riemann;

/// Trajectory of a front with constant `u_const` on one side and the fan
/// `u = (x - xc)/(t - tc)` on the other, through `entry`. Solves
/// `c' = ((c - xc)/(t - tc) + u_const) / 2`.
pub fn fan_delta_trajectory(entry: Point, u_const: f64, fan_center: Point) -> Result<CurveGeometry> {
    let s0 = entry.t - fan_center.t;
    if !(s0 > 0.0) {
        return Err(Error::Domain("entry point at or before the fan center".into()));
    }
    let k = (entry.x - fan_center.x - u_const * s0) / s0.sqrt();
    Ok(CurveGeometry::Sqrt { center: fan_center, u_k: u_const, k })
}

/// Time at which a fan-crossing delta shock stops being overcompressive:
/// the fan-side trace reaches `u_k - 2` (constant side left) or `u_k + 2`
/// (constant side right), i.e. `s = k^2/4`. Only reported inside
/// `(t_lo, t_hi]`.
pub fn breakdown_time(curve: &CurveGeometry, t_lo: f64, t_hi: f64) -> Option<f64> {
    match *curve {
        CurveGeometry::Sqrt { center, k, .. } if k != 0.0 => {
            let ts = center.t + 0.25 * k * k;
            (ts > t_lo && ts <= t_hi).then_some(ts)
        }
        _ => None,
    }
}

/// 1-characteristic `dx/dt = u - 1` of the fan centered at `fan_center`
/// passing through `through`.
pub fn characteristic_in_fan(through: Point, fan_center: Point) -> Result<CurveGeometry> {
    let s = through.t - fan_center.t;
    if !(s > 0.0) {
        return Err(Error::Domain("characteristic through the fan center".into()));
    }
    Ok(CurveGeometry::Log { center: fan_center, c: (through.x - fan_center.x) / s + s.ln() })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Intersection {
    None,
    At(Point),
    /// The curves touch without crossing.
    Grazing(Point),
}

impl Intersection {
    pub fn point(self) -> Option<Point> {
        match self {
            Intersection::At(p) => Some(p),
            _ => None,
        }
    }
}

fn later(t: f64, after: f64) -> bool {
    t > after + 1e-12 * (1.0 + after.abs())
}

fn domain_start(c: &CurveGeometry) -> f64 {
    match *c {
        CurveGeometry::Line { .. } => f64::NEG_INFINITY,
        CurveGeometry::Sqrt { center, .. } | CurveGeometry::Log { center, .. } => center.t,
    }
}

/// Roots `s >= 0` of `a s^2 + b s + c = 0`; the flag marks a double root.
fn nonneg_quadratic_roots(a: f64, b: f64, c: f64) -> (Vec<f64>, bool) {
    let scale = b * b + (4.0 * a * c).abs();
    if a == 0.0 {
        if b == 0.0 {
            return (Vec::new(), false);
        }
        let s = -c / b;
        return (if s >= 0.0 { vec![s] } else { Vec::new() }, false);
    }
    let disc = b * b - 4.0 * a * c;
    if disc.abs() <= 1e-13 * scale {
        let s = -b / (2.0 * a);
        return (if s >= 0.0 { vec![s] } else { Vec::new() }, true);
    }
    if disc < 0.0 {
        return (Vec::new(), false);
    }
    let q = -0.5 * (b + b.signum() * disc.sqrt());
    let mut roots = vec![q / a];
    if q != 0.0 {
        roots.push(c / q);
    }
    roots.retain(|s| *s >= 0.0);
    roots.sort_by(f64::total_cmp);
    (roots, false)
}

/// Earliest intersection strictly after `after`. Closed forms cover every
/// pair the engine produces; other pairs fall back to a bracketed search.
pub fn intersect(a: &CurveGeometry, b: &CurveGeometry, after: f64) -> Intersection {
    use CurveGeometry::*;
    match (*a, *b) {
        (Line { origin: o1, slope: m1 }, Line { origin: o2, slope: m2 }) => {
            if m1 == m2 {
                return Intersection::None;
            }
            // o1.x + m1 (t - o1.t) = o2.x + m2 (t - o2.t)
            let t = (o2.x - o1.x + m1 * o1.t - m2 * o2.t) / (m1 - m2);
            if later(t, after) {
                Intersection::At(Point::new(t, a.x_at(t)))
            } else {
                Intersection::None
            }
        }
        (Line { origin, slope }, Sqrt { center, u_k, k }) | (Sqrt { center, u_k, k }, Line { origin, slope }) => {
            let (roots, double) = nonneg_quadratic_roots(
                u_k - slope,
                k,
                center.x - origin.x - slope * (center.t - origin.t),
            );
            pick(roots, double, center.t, after, a)
        }
        (Sqrt { center: c1, u_k: u1, k: k1 }, Sqrt { center: c2, u_k: u2, k: k2 }) if c1 == c2 => {
            let (roots, double) = nonneg_quadratic_roots(u1 - u2, k1 - k2, 0.0);
            pick(roots, double, c1.t, after, a)
        }
        (Line { origin, slope }, Log { center, c }) | (Log { center, c }, Line { origin, slope })
            if (origin.x + slope * (center.t - origin.t) - center.x).abs() <= 1e-13 * (1.0 + center.x.abs()) =>
        {
            // the line passes through the fan center: s (c - ln s) = slope s
            let t = center.t + (c - slope).exp();
            if later(t, after) {
                Intersection::At(Point::new(t, a.x_at(t)))
            } else {
                Intersection::None
            }
        }
        _ => bracketed(a, b, after),
    }
}

fn pick(roots: Vec<f64>, double: bool, tc: f64, after: f64, a: &CurveGeometry) -> Intersection {
    for s in roots {
        let t = tc + s * s;
        if later(t, after) {
            let p = Point::new(t, a.x_at(t));
            return if double { Intersection::Grazing(p) } else { Intersection::At(p) };
        }
    }
    Intersection::None
}

fn bracketed(a: &CurveGeometry, b: &CurveGeometry, after: f64) -> Intersection {
    let lo = after.max(domain_start(a)).max(domain_start(b));
    let lo = lo + 1e-12 * (1.0 + lo.abs());
    let f = |t: f64| a.x_at(t) - b.x_at(t);
    // values at rounding level carry no sign; curves that touch at `lo`
    // must separate clearly before a crossing counts
    let noise = |t: f64| 1e-11 * (1.0 + a.x_at(t).abs() + b.x_at(t).abs());
    let span = 1e6_f64;
    let n = 4000;
    let mut last: Option<(f64, f64)> = None;
    for i in 0..=n {
        let t1 = lo + span * ((i as f64 / n as f64).powi(4));
        let f1 = f(t1);
        if !f1.is_finite() || f1.abs() <= noise(t1) {
            continue;
        }
        if let Some((t0, f0)) = last {
            if f0.signum() != f1.signum() {
                let (mut l, mut r, mut fl) = (t0, t1, f0);
                while r - l > 1e-13 * (1.0 + l.abs()) {
                    let m = 0.5 * (l + r);
                    let fm = f(m);
                    if fm.signum() == fl.signum() {
                        l = m;
                        fl = fm;
                    } else {
                        r = m;
                    }
                }
                let (fa, fb) = (f(l), f(r));
                let t = if fb != fa { (l - fa * (r - l) / (fb - fa)).clamp(l, r) } else { 0.5 * (l + r) };
                return Intersection::At(Point::new(t, a.x_at(t)));
            }
        }
        last = Some((t1, f1));
    }
    Intersection::None
}

/// Left value of `v` across a shock with the given speed, from the jump
/// condition of the `v` equation.
pub fn shock_left_value(speed: f64, u_l: f64, u_r: f64, v_r: f64) -> f64 {
    v_r * (u_r - 1.0 - speed) / (u_l - 1.0 - speed)
}

/// Trace of `v` on the left side of a post-breakdown shock.
pub fn shock_left_trace(curve: CurveGeometry, left_u: ULaw, right_u: ULaw, right_v: VLaw) -> Trace {
    Trace::ShockLeft { curve, left_u, right_u, right_v: Box::new(right_v) }
}

/// Evaluates a shock trace, rejecting times at or before breakdown.
pub fn shock_left_trace_at(trace: &Trace, t_s: f64, t: f64) -> Result<f64> {
    if !(t > t_s) {
        return Err(Error::Domain(format!("trace requested at t={t} <= breakdown time {t_s}")));
    }
    match trace {
        Trace::ShockLeft { curve, .. } => Ok(trace.value(curve.point_at(t))),
        Trace::Region { .. } => Err(Error::Domain("not a shock trace".into())),
    }
}

/// `v` profile between a delta contact of slope `u_left - 1` and the shock
/// `shock` (constant `u_left` on its left, fan on its right). Constant on
/// lines of slope `u_left - 1`.
pub fn w_profile_straight(shock: CurveGeometry, t_s: f64, u_left: f64, right_u: ULaw, right_v: VLaw) -> VLaw {
    VLaw::WProfileStraight {
        slope: u_left - 1.0,
        source: shock,
        source_t_min: t_s,
        trace: Box::new(shock_left_trace(shock, ULaw::Const(u_left), right_u, right_v)),
    }
}

/// `v` profile inside a fan between a delta contact riding a
/// 1-characteristic and the shock `shock` with constant state `right` on
/// its right. `v (t - tc)` is constant along the characteristics.
pub fn w_profile_curved(shock: CurveGeometry, fan_center: Point, right: State) -> VLaw {
    VLaw::WProfileCurved {
        center: fan_center,
        source: shock,
        trace: Box::new(shock_left_trace(
            shock,
            ULaw::Fan { center: fan_center },
            ULaw::Const(right.u),
            VLaw::Const(right.v),
        )),
    }
}

/// Profile in a constant-`u` region left of a fan edge `edge`, continuing
/// the values of `source_u`/`source_v` found on the edge along lines of
/// slope `u - 1`.
pub fn w_profile_transport(u: f64, edge: CurveGeometry, t_min: f64, source_u: ULaw, source_v: VLaw) -> VLaw {
    VLaw::WProfileStraight {
        slope: u - 1.0,
        source: edge,
        source_t_min: t_min,
        trace: Box::new(Trace::Region { u: source_u, v: Box::new(source_v) }),
    }
}

fn straight_tau(slope: f64, source: &CurveGeometry, t_min: f64, y: f64) -> f64 {
    match *source {
        CurveGeometry::Line { origin, slope: m } => (y - origin.x + m * origin.t) / (m - slope),
        CurveGeometry::Sqrt { center, u_k, k } => {
            let a = u_k - slope;
            let c = center.x - slope * center.t - y;
            let s_min = (t_min - center.t).max(0.0).sqrt();
            let s = if a == 0.0 {
                -c / k
            } else {
                let disc = k * k - 4.0 * a * c;
                if disc <= 0.0 {
                    -k / (2.0 * a)
                } else {
                    let r = disc.sqrt();
                    let mut cands = [(-k - r) / (2.0 * a), (-k + r) / (2.0 * a)];
                    cands.sort_by(f64::total_cmp);
                    let floor = s_min * (1.0 - 1e-9) - 1e-15;
                    cands.into_iter().find(|s| *s >= floor).unwrap_or(cands[1])
                }
            };
            center.t + s * s
        }
        CurveGeometry::Log { .. } => f64::NAN,
    }
}

pub(crate) fn w_straight_value(slope: f64, source: &CurveGeometry, t_min: f64, trace: &Trace, p: Point) -> f64 {
    let tau = straight_tau(slope, source, t_min, p.x - slope * p.t);
    source_trace_value(source, trace, tau)
}

/// `trace` at `source(tau)`. A region trace holding a curved profile is
/// evaluated from the offset to the start of a line source lying on the
/// profile's breakdown characteristic, where the direct invariant loses
/// all digits of the gap.
fn source_trace_value(source: &CurveGeometry, trace: &Trace, tau: f64) -> f64 {
    if let (Trace::Region { v, .. }, CurveGeometry::Line { origin, slope }) = (trace, source) {
        if let VLaw::WProfileCurved { center, source: inner, trace: inner_trace } = &**v {
            if let CurveGeometry::Sqrt { u_k, k, .. } = *inner {
                let s0 = origin.t - center.t;
                let inv0 = (origin.x - center.x) / s0 + s0.ln();
                let cb = curved_breakdown_invariant(u_k, k);
                if (inv0 - cb).abs() <= 1e-12 * (1.0 + cb.abs()) {
                    let dt = tau - origin.t;
                    return w_curved_value_near(*center, inner, inner_trace, *origin, dt, slope * dt);
                }
            }
        }
    }
    trace.value(source.point_at(tau))
}

/// [`w_curved_value`] at `anchor + (dt, dx)` for an anchor on the breakdown
/// characteristic.
fn w_curved_value_near(center: Point, source: &CurveGeometry, trace: &Trace, anchor: Point, dt: f64, dx: f64) -> f64 {
    let k = match *source {
        CurveGeometry::Sqrt { k, .. } if k > 0.0 => k,
        _ => return f64::NAN,
    };
    let s0 = anchor.t - center.t;
    let x0 = anchor.x - center.x;
    let gap = (dx * s0 - x0 * dt) / (s0 * (s0 + dt)) + (dt / s0).ln_1p();
    let tau = curved_tau_from_gap(center, k, gap);
    trace.value(source.point_at(tau)) * (tau - center.t) / (s0 + dt)
}

/// Characteristic invariant `C` of the curved profile at the breakdown point.
fn curved_breakdown_invariant(u_k: f64, k: f64) -> f64 {
    u_k + 2.0 + 2.0 * (0.5 * k).ln()
}

fn curved_tau(center: Point, u_k: f64, k: f64, invariant: f64) -> f64 {
    curved_tau_from_gap(center, k, invariant - curved_breakdown_invariant(u_k, k))
}

fn curved_tau_from_gap(center: Point, k: f64, gap: f64) -> f64 {
    let e = invert_log_gap(gap);
    let r = 0.5 * k * (1.0 + e);
    center.t + r * r
}

/// Solves `2 (ln(1+e) - e/(1+e)) = d` for `e >= 0`.
fn invert_log_gap(d: f64) -> f64 {
    if d <= 0.0 {
        return 0.0;
    }
    let h = |e: f64| 2.0 * (e.ln_1p() - e / (1.0 + e));
    let (mut lo, mut hi) = (0.0, d.sqrt().max(1.0));
    while h(hi) < d {
        hi *= 2.0;
    }
    let mut e = d.sqrt().clamp(lo, hi);
    for _ in 0..100 {
        let f = h(e) - d;
        if f > 0.0 {
            hi = e;
        } else {
            lo = e;
        }
        let df = 2.0 * e / ((1.0 + e) * (1.0 + e));
        let mut next = if df > 0.0 { e - f / df } else { 0.5 * (lo + hi) };
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - e).abs() <= 1e-16 * (1.0 + e) || hi - lo <= 1e-16 * hi {
            return next;
        }
        e = next;
    }
    e
}

pub(crate) fn w_curved_value(center: Point, source: &CurveGeometry, trace: &Trace, p: Point) -> f64 {
    let (u_k, k) = match *source {
        CurveGeometry::Sqrt { u_k, k, .. } if k > 0.0 => (u_k, k),
        _ => return f64::NAN,
    };
    let s = p.t - center.t;
    let tau = curved_tau(center, u_k, k, (p.x - center.x) / s + s.ln());
    trace.value(source.point_at(tau)) * (tau - center.t) / s
}

/// Parameter on the source curve of the characteristic of a transported
/// profile passing through `p`. `None` for non-transported laws.
pub fn w_tau(v: &VLaw, p: Point) -> Option<f64> {
    match v {
        VLaw::WProfileStraight { slope, source, source_t_min, .. } => {
            Some(straight_tau(*slope, source, *source_t_min, p.x - slope * p.t))
        }
        VLaw::WProfileCurved { center, source: CurveGeometry::Sqrt { u_k, k, .. }, .. } => {
            let s = p.t - center.t;
            Some(curved_tau(*center, *u_k, *k, (p.x - center.x) / s + s.ln()))
        }
        _ => None,
    }
}

/// Like [`w_tau`] for a point on the front `front`, exact when the front is
/// the source itself or one of the profile's characteristics (in particular
/// the tangent characteristic through breakdown, where the generic inverse
/// loses half the digits).
pub fn w_tau_on_front(v: &VLaw, front: &CurveGeometry, t: f64) -> Option<f64> {
    match v {
        VLaw::WProfileStraight { slope, source, source_t_min, .. } => {
            if front == source {
                return Some(t);
            }
            if let CurveGeometry::Line { origin, slope: m } = *front {
                if m == *slope {
                    let y = origin.x - m * origin.t;
                    let ys = source.x_at(*source_t_min) - slope * source_t_min;
                    if (y - ys).abs() <= 1e-12 * (1.0 + ys.abs()) {
                        return Some(*source_t_min);
                    }
                    return Some(straight_tau(*slope, source, *source_t_min, y));
                }
            }
            w_tau(v, front.point_at(t))
        }
        VLaw::WProfileCurved { center, source, .. } => {
            if front == source {
                return Some(t);
            }
            if let (CurveGeometry::Log { center: fc, c }, CurveGeometry::Sqrt { u_k, k, .. }) = (*front, *source) {
                if fc == *center {
                    let cb = curved_breakdown_invariant(u_k, k);
                    if (c - cb).abs() <= 1e-12 * (1.0 + cb.abs()) {
                        return Some(center.t + 0.25 * k * k);
                    }
                    return Some(curved_tau(*center, u_k, k, c));
                }
            }
            w_tau(v, front.point_at(t))
        }
        _ => None,
    }
}

/// Position at time `t` of the characteristic leaving the source at `tau`.
pub fn w_x(v: &VLaw, tau: f64, t: f64) -> f64 {
    match v {
        VLaw::WProfileStraight { slope, source, .. } => source.x_at(tau) + slope * (t - tau),
        VLaw::WProfileCurved { center, source, .. } => {
            let ts = tau - center.t;
            let inv = (source.x_at(tau) - center.x) / ts + ts.ln();
            let s = t - center.t;
            center.x + s * (inv - s.ln())
        }
        _ => f64::NAN,
    }
}

/// `v dx/dtau` of a transported profile at fixed time, a function of `tau`
/// only. Bounded even where `v` itself blows up.
pub fn w_density(v: &VLaw, tau: f64) -> f64 {
    let (source, trace, slope) = match v {
        VLaw::WProfileStraight { slope, source, trace, .. } => (source, trace, Some(*slope)),
        VLaw::WProfileCurved { source, trace, .. } => (source, trace, None),
        _ => return f64::NAN,
    };
    let p = source.point_at(tau);
    let cdot = source.slope_at(tau);
    match (&**trace, slope) {
        (Trace::ShockLeft { right_u, right_v, .. }, _) => right_v.value(p) * (1.0 + cdot - right_u.value(p)),
        (Trace::Region { .. }, Some(m)) => source_trace_value(source, trace, tau) * (cdot - m),
        (Trace::Region { .. }, None) => f64::NAN,
    }
}

/// Growth rate of an atom on a front of the given speed between two traces.
pub fn strength_rate(speed: f64, left: State, right: State) -> f64 {
    riemann::rh_deficit(left, right, speed)
}

/// Integrates a strength rate from `t0` (where the strength is `gamma0`) to
/// `t1`. Constant traces give an affine law; otherwise the law is tabulated
/// and refined until cubic interpolation matches quadrature to `1e-10` at
/// every interval midpoint.
pub fn strength_integrate<F: Fn(f64) -> f64>(rate: F, t0: f64, t1: f64, gamma0: f64, constant_traces: bool) -> Result<StrengthLaw> {
    if constant_traces {
        return Ok(StrengthLaw::Affine { s: rate(t0), gamma: gamma0, t_ref: t0 });
    }
    if !(t1 > t0) {
        return Err(Error::Domain("empty strength interval".into()));
    }
    let tol = Tolerance::new(1e-13, 1e-14);
    let seg = |a: f64, b: f64| -> Result<f64> {
        let r = quad::integrate_scalar(&rate, a, b, tol);
        if !r.converged {
            return Err(Error::Quadrature(format!("strength rate on [{a}, {b}]")));
        }
        Ok(r.value[0])
    };
    let n0 = 16;
    let mut ts: Vec<f64> = (0..=n0).map(|i| t0 + (t1 - t0) * i as f64 / n0 as f64).collect();
    for _round in 0..30 {
        let mut nodes = Vec::with_capacity(ts.len());
        let mut alpha = gamma0;
        for (i, &t) in ts.iter().enumerate() {
            if i > 0 {
                alpha += seg(ts[i - 1], t)?;
            }
            nodes.push(TableNode { t, alpha, rate: rate(t) });
        }
        let table = StrengthTable { nodes };
        let mut refined = Vec::with_capacity(ts.len() * 2);
        let mut ok = true;
        for w in table.nodes.windows(2) {
            refined.push(w[0].t);
            let m = 0.5 * (w[0].t + w[1].t);
            let exact = w[0].alpha + seg(w[0].t, m)?;
            if (table.value(m) - exact).abs() > 1e-10 * (1.0 + exact.abs()) {
                refined.push(m);
                ok = false;
            }
        }
        refined.push(t1);
        if ok {
            return Ok(StrengthLaw::Tabulated(table));
        }
        ts = refined;
    }
    Err(Error::Quadrature("strength table refinement did not settle".into()))
}
