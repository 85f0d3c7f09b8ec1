//! Domain types shared by every stage of the engine.
//!
//! All types here are plain values: a [`Solution`] is built once by the
//! interaction engine and then only read.

use serde::{Deserialize, Serialize};

use crate::fronts;

/// A pair of field values `(u, v)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct State {
    pub u: f64,
    pub v: f64,
}

impl State {
    pub const fn new(u: f64, v: f64) -> Self {
        Self { u, v }
    }

    pub fn is_finite(&self) -> bool {
        self.u.is_finite() && self.v.is_finite()
    }

    /// Flux of the system, `(u^2/2, (u-1) v)`.
    pub fn flux(&self) -> (f64, f64) {
        (0.5 * self.u * self.u, (self.u - 1.0) * self.v)
    }
}

/// Characteristic speeds `(u - 1, u)`. The first field is linearly
/// degenerate, the second genuinely nonlinear.
pub fn eigenvalues(s: State) -> (f64, f64) {
    (s.u - 1.0, s.u)
}

/// Point of the x-t half plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub t: f64,
    pub x: f64,
}

impl Point {
    pub const fn new(t: f64, x: f64) -> Self {
        Self { t, x }
    }
}

/// Geometry of a front. The time range lives on the [`Front`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CurveGeometry {
    /// `x = x0 + slope (t - t0)`
    Line { origin: Point, slope: f64 },
    /// `x = xc + u_k s + k sqrt(s)`, `s = t - tc`: a front with a constant
    /// state `u_k` on one side and a centered fan on the other.
    Sqrt { center: Point, u_k: f64, k: f64 },
    /// `x = xc + s (c - ln s)`: a 1-characteristic inside a centered fan.
    Log { center: Point, c: f64 },
}

impl CurveGeometry {
    pub fn line(origin: Point, slope: f64) -> Self {
        CurveGeometry::Line { origin, slope }
    }

    pub fn x_at(&self, t: f64) -> f64 {
        match *self {
            CurveGeometry::Line { origin, slope } => origin.x + slope * (t - origin.t),
            CurveGeometry::Sqrt { center, u_k, k } => {
                let s = t - center.t;
                center.x + u_k * s + k * s.max(0.0).sqrt()
            }
            CurveGeometry::Log { center, c } => {
                let s = t - center.t;
                center.x + s * (c - s.ln())
            }
        }
    }

    pub fn slope_at(&self, t: f64) -> f64 {
        match *self {
            CurveGeometry::Line { slope, .. } => slope,
            CurveGeometry::Sqrt { center, u_k, k } => u_k + k / (2.0 * (t - center.t).sqrt()),
            CurveGeometry::Log { center, c } => c - (t - center.t).ln() - 1.0,
        }
    }

    pub fn curvature_at(&self, t: f64) -> f64 {
        match *self {
            CurveGeometry::Line { .. } => 0.0,
            CurveGeometry::Sqrt { center, k, .. } => {
                let s = t - center.t;
                -k / (4.0 * s * s.sqrt())
            }
            CurveGeometry::Log { center, .. } => -1.0 / (t - center.t),
        }
    }

    pub fn point_at(&self, t: f64) -> Point {
        Point::new(t, self.x_at(t))
    }
}

/// One sample of a tabulated strength law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TableNode {
    pub t: f64,
    pub alpha: f64,
    pub rate: f64,
}

/// Strength law represented by nodes with exact rates, evaluated with
/// piecewise cubic Hermite interpolation.
#[derive(Debug, Clone, PartialEq)]
pub struct StrengthTable {
    pub nodes: Vec<TableNode>,
}

impl StrengthTable {
    fn locate(&self, t: f64) -> usize {
        let n = self.nodes.len();
        match self.nodes.binary_search_by(|nd| nd.t.total_cmp(&t)) {
            Ok(i) => i.min(n - 2),
            Err(i) => i.saturating_sub(1).min(n - 2),
        }
    }

    pub fn value(&self, t: f64) -> f64 {
        let i = self.locate(t);
        let (a, b) = (self.nodes[i], self.nodes[i + 1]);
        let h = b.t - a.t;
        let s = (t - a.t) / h;
        let s2 = s * s;
        let s3 = s2 * s;
        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        h00 * a.alpha + h10 * h * a.rate + h01 * b.alpha + h11 * h * b.rate
    }

    pub fn rate(&self, t: f64) -> f64 {
        let i = self.locate(t);
        let (a, b) = (self.nodes[i], self.nodes[i + 1]);
        let h = b.t - a.t;
        let s = (t - a.t) / h;
        let s2 = s * s;
        let d00 = 6.0 * s2 - 6.0 * s;
        let d10 = 3.0 * s2 - 4.0 * s + 1.0;
        let d01 = -6.0 * s2 + 6.0 * s;
        let d11 = 3.0 * s2 - 2.0 * s;
        (d00 * a.alpha + d01 * b.alpha) / h + d10 * a.rate + d11 * b.rate
    }

    pub fn t_range(&self) -> (f64, f64) {
        (self.nodes[0].t, self.nodes[self.nodes.len() - 1].t)
    }
}

/// Signed mass of the delta atom carried by a front, as a function of time.
#[derive(Debug, Clone, PartialEq)]
pub enum StrengthLaw {
    Affine { s: f64, gamma: f64, t_ref: f64 },
    Tabulated(StrengthTable),
    Constant { gamma: f64 },
}

impl StrengthLaw {
    pub fn value(&self, t: f64) -> f64 {
        match self {
            StrengthLaw::Affine { s, gamma, t_ref } => s * (t - t_ref) + gamma,
            StrengthLaw::Tabulated(tab) => tab.value(t),
            StrengthLaw::Constant { gamma } => *gamma,
        }
    }

    pub fn rate(&self, t: f64) -> f64 {
        match self {
            StrengthLaw::Affine { s, .. } => *s,
            StrengthLaw::Tabulated(tab) => tab.rate(t),
            StrengthLaw::Constant { .. } => 0.0,
        }
    }

    /// Adds `ds * (t - t_ref)` to the law. Used to build deliberately wrong
    /// solutions when checking that the verifier notices.
    pub fn perturbed(&self, ds: f64, t_ref: f64) -> StrengthLaw {
        match self {
            StrengthLaw::Affine { s, gamma, t_ref: r } => StrengthLaw::Affine {
                s: s + ds,
                gamma: gamma + ds * (r - t_ref),
                t_ref: *r,
            },
            StrengthLaw::Constant { gamma } => StrengthLaw::Affine { s: ds, gamma: *gamma, t_ref },
            StrengthLaw::Tabulated(tab) => StrengthLaw::Tabulated(StrengthTable {
                nodes: tab
                    .nodes
                    .iter()
                    .map(|n| TableNode {
                        t: n.t,
                        alpha: n.alpha + ds * (n.t - t_ref),
                        rate: n.rate + ds,
                    })
                    .collect(),
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FrontKind {
    Shock,
    Contact,
    DeltaShock,
    DeltaContact,
    FanEdge,
}

impl FrontKind {
    pub fn carries_atom(self) -> bool {
        matches!(self, FrontKind::DeltaShock | FrontKind::DeltaContact)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            FrontKind::Shock => "Shock",
            FrontKind::Contact => "Contact",
            FrontKind::DeltaShock => "DeltaShock",
            FrontKind::DeltaContact => "DeltaContact",
            FrontKind::FanEdge => "FanEdge",
        }
    }
}

/// How the atom on a front is split into its left/right sided parts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitRule {
    /// Solve the delta-prime balance with the one-sided `u` traces.
    OneSided,
    /// `u` is continuous across the front: half on each side.
    Even,
}

pub type FrontId = usize;
pub type RegionId = usize;

#[derive(Debug, Clone, PartialEq)]
pub struct Front {
    pub id: FrontId,
    pub kind: FrontKind,
    pub geometry: CurveGeometry,
    pub t_start: f64,
    /// `None` while the front is alive for all later times.
    pub t_end: Option<f64>,
    pub left: RegionId,
    pub right: RegionId,
    pub strength: Option<StrengthLaw>,
    pub split: Option<SplitRule>,
}

impl Front {
    /// Alive on `[t_start, t_end)`.
    pub fn alive_at(&self, t: f64) -> bool {
        t >= self.t_start && self.t_end.is_none_or(|e| t < e)
    }

    pub fn x_at(&self, t: f64) -> f64 {
        self.geometry.x_at(t)
    }

    pub fn strength_at(&self, t: f64) -> f64 {
        self.strength.as_ref().map_or(0.0, |s| s.value(t))
    }
}

/// Law for `u` inside a region.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ULaw {
    Const(f64),
    /// `u = (x - xc) / (t - tc)`
    Fan { center: Point },
}

impl ULaw {
    pub fn value(&self, p: Point) -> f64 {
        match *self {
            ULaw::Const(u) => u,
            ULaw::Fan { center } => (p.x - center.x) / (p.t - center.t),
        }
    }

    /// Spatial derivative, needed by the conservative transport of `v`.
    pub fn dx(&self, p: Point) -> f64 {
        match *self {
            ULaw::Const(_) => 0.0,
            ULaw::Fan { center } => 1.0 / (p.t - center.t),
        }
    }

    pub fn fan_center(&self) -> Option<Point> {
        match *self {
            ULaw::Const(_) => None,
            ULaw::Fan { center } => Some(center),
        }
    }
}

/// Boundary data feeding a transported `v` profile.
#[derive(Debug, Clone, PartialEq)]
pub enum Trace {
    /// Left-hand value of `v` on a shock curve, fixed pointwise by the
    /// jump condition for the `v` equation given the right-hand state.
    ShockLeft {
        curve: CurveGeometry,
        left_u: ULaw,
        right_u: ULaw,
        right_v: Box<VLaw>,
    },
    /// Value of another region's law on the source curve.
    Region { u: ULaw, v: Box<VLaw> },
}

/// Law for the regular (function) part of `v` inside a region.
#[derive(Debug, Clone, PartialEq)]
pub enum VLaw {
    Const(f64),
    /// `v = v_ref exp((x - xc)/(t - tc) - u_ref)`
    FanExp { v_ref: f64, u_ref: f64, center: Point },
    /// Constant along lines of the given slope (region with constant `u`),
    /// with values taken from `trace` where each line meets `source`.
    WProfileStraight {
        slope: f64,
        source: CurveGeometry,
        source_t_min: f64,
        trace: Box<Trace>,
    },
    /// Inside a fan: `v (t - tc)` is constant along `dx/dt = u - 1`, with
    /// values taken from `trace` on the square-root curve `source`.
    WProfileCurved {
        center: Point,
        source: CurveGeometry,
        trace: Box<Trace>,
    },
}

impl VLaw {
    pub fn value(&self, p: Point) -> f64 {
        match self {
            VLaw::Const(v) => *v,
            VLaw::FanExp { v_ref, u_ref, center } => {
                v_ref * ((p.x - center.x) / (p.t - center.t) - u_ref).exp()
            }
            VLaw::WProfileStraight { slope, source, source_t_min, trace } => {
                fronts::w_straight_value(*slope, source, *source_t_min, trace, p)
            }
            VLaw::WProfileCurved { center, source, trace } => {
                fronts::w_curved_value(*center, source, trace, p)
            }
        }
    }

    pub fn is_singular_profile(&self) -> bool {
        matches!(self, VLaw::WProfileStraight { .. } | VLaw::WProfileCurved { .. })
    }
}

impl Trace {
    pub fn value(&self, p: Point) -> f64 {
        match self {
            Trace::ShockLeft { curve, left_u, right_u, right_v } => {
                let speed = curve.slope_at(p.t);
                fronts::shock_left_value(speed, left_u.value(p), right_u.value(p), right_v.value(p))
            }
            Trace::Region { v, .. } => v.value(p),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Region {
    pub id: RegionId,
    pub u: ULaw,
    pub v: VLaw,
}

impl Region {
    pub fn state_at(&self, p: Point) -> State {
        State::new(self.u.value(p), self.v.value(p))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ResolutionRule {
    MergeDeltas,
    DeltaCrossesContact,
    ShockHitsDelta,
    DeltaEntersFan,
    BreakdownBifurcation,
    FrontExitsFan,
    ContactContinuation,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Event {
    pub point: Point,
    pub incoming: Vec<FrontId>,
    pub outgoing: Vec<FrontId>,
    pub rule: ResolutionRule,
}

/// Three constant states and the signed start offset of the delta shock.
/// A negative offset puts the delta shock between `left` and `middle` at
/// `x = offset`; a positive one puts it between `middle` and `right`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub left: State,
    pub middle: State,
    pub right: State,
    pub offset: f64,
    pub t_max: f64,
}

impl Scenario {
    pub fn new(left: State, middle: State, right: State, offset: f64) -> Self {
        Self { left, middle, right, offset, t_max: 10.0 }
    }

    /// Origins of the left and right initial jumps.
    pub fn jump_positions(&self) -> (f64, f64) {
        if self.offset < 0.0 {
            (self.offset, 0.0)
        } else {
            (0.0, self.offset)
        }
    }

    pub fn initial_state(&self, x: f64) -> State {
        let (xa, xb) = self.jump_positions();
        if x < xa {
            self.left
        } else if x < xb {
            self.middle
        } else {
            self.right
        }
    }
}

/// Global weak solution as an event graph. Front geometries are valid for
/// all times in their range; the strip covered is unbounded once `complete`.
#[derive(Debug, Clone)]
pub struct Solution {
    pub scenario: Scenario,
    pub regions: Vec<Region>,
    pub fronts: Vec<Front>,
    pub events: Vec<Event>,
    pub t_max_computed: f64,
    pub complete: bool,
}

impl Solution {
    pub fn front(&self, id: FrontId) -> &Front {
        &self.fronts[id]
    }

    pub fn region(&self, id: RegionId) -> &Region {
        &self.regions[id]
    }

    /// Alive fronts at `t` ordered left to right by following shared regions.
    pub fn chain_at(&self, t: f64) -> Vec<FrontId> {
        let alive: Vec<&Front> = self.fronts.iter().filter(|f| f.alive_at(t)).collect();
        order_chain(&alive)
    }

    /// One-sided `u` traces and split of the atom on `front` at time `t`.
    pub fn split_at(&self, front: &Front, t: f64) -> (f64, f64) {
        let alpha = front.strength_at(t);
        match front.split {
            None => (0.0, 0.0),
            Some(SplitRule::Even) => (0.5 * alpha, 0.5 * alpha),
            Some(SplitRule::OneSided) => {
                let p = front.geometry.point_at(t);
                let ul = self.region(front.left).u.value(p);
                let ur = self.region(front.right).u.value(p);
                let speed = front.geometry.slope_at(t);
                crate::riemann::split_strength(alpha, speed, ul, ur)
                    .unwrap_or((0.5 * alpha, 0.5 * alpha))
            }
        }
    }
}

/// Orders fronts so that each one's right region is the next one's left
/// region. Falls back to position order if the chain is broken.
pub fn order_chain(fronts: &[&Front]) -> Vec<FrontId> {
    if fronts.is_empty() {
        return Vec::new();
    }
    let start = fronts
        .iter()
        .find(|f| !fronts.iter().any(|g| g.id != f.id && g.right == f.left))
        .map(|f| f.id);
    let mut out = Vec::with_capacity(fronts.len());
    if let Some(mut cur) = start {
        out.push(cur);
        while out.len() < fronts.len() {
            let right = fronts.iter().find(|f| f.id == cur).unwrap().right;
            match fronts.iter().find(|f| f.left == right && !out.contains(&f.id)) {
                Some(n) => {
                    cur = n.id;
                    out.push(cur);
                }
                None => break,
            }
        }
    }
    if out.len() != fronts.len() {
        out = fronts.iter().map(|f| f.id).collect();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eigenvalue_examples() {
        assert_eq!(eigenvalues(State::new(2.0, 5.0)), (1.0, 2.0));
        assert_eq!(eigenvalues(State::new(0.0, 0.0)), (-1.0, 0.0));
        assert_eq!(eigenvalues(State::new(4.0, 1.0)), (3.0, 4.0));
    }

    #[test]
    fn curve_slopes_match_finite_differences() {
        let curves = [
            CurveGeometry::line(Point::new(0.0, -1.0), 2.5),
            CurveGeometry::Sqrt { center: Point::new(0.0, 0.0), u_k: 4.0, k: -6f64.sqrt() },
            CurveGeometry::Log { center: Point::new(0.0, 0.0), c: 2.0 + 2f64.ln() },
        ];
        for c in curves {
            for &t in &[0.7, 1.5, 3.0, 9.0] {
                let h = 1e-6;
                let fd = (c.x_at(t + h) - c.x_at(t - h)) / (2.0 * h);
                assert!((fd - c.slope_at(t)).abs() < 1e-7, "{c:?} at {t}");
                let fd2 = (c.slope_at(t + h) - c.slope_at(t - h)) / (2.0 * h);
                assert!((fd2 - c.curvature_at(t)).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn hermite_table_reproduces_cubics() {
        let f = |t: f64| t * t * t - 2.0 * t + 1.0;
        let df = |t: f64| 3.0 * t * t - 2.0;
        let nodes = [0.0, 0.5, 1.25, 2.0]
            .iter()
            .map(|&t| TableNode { t, alpha: f(t), rate: df(t) })
            .collect();
        let tab = StrengthTable { nodes };
        for i in 0..=40 {
            let t = 2.0 * i as f64 / 40.0;
            assert!((tab.value(t) - f(t)).abs() < 1e-12);
            assert!((tab.rate(t) - df(t)).abs() < 1e-11);
        }
    }

    #[test]
    fn perturbation_shifts_rate_everywhere() {
        let law = StrengthLaw::Affine { s: 3.0, gamma: 0.0, t_ref: 0.0 };
        let p = law.perturbed(0.1, 0.0);
        assert!((p.rate(1.0) - 3.1).abs() < 1e-15);
        assert!((p.value(2.0) - 6.2).abs() < 1e-14);
        let c = StrengthLaw::Constant { gamma: 2.0 }.perturbed(0.1, 1.0);
        assert!((c.value(1.0) - 2.0).abs() < 1e-15);
        assert!((c.value(3.0) - 2.2).abs() < 1e-14);
    }
}
