//! Event-driven front tracking. The engine is generic: each interaction is
//! resolved by one of seven local rules chosen from the kinds of the
//! incoming fronts and the laws of the regions around the meeting point.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fronts::{self, Intersection};
use crate::model::{
    order_chain, CurveGeometry, Event, Front, FrontId, FrontKind, Point, Region, RegionId, ResolutionRule, Scenario,
    Solution, SplitRule, State, StrengthLaw, ULaw, VLaw,
};
use crate::riemann::{self, WaveFan};

/// Upper bound on events before the engine gives up.
pub const EVENT_LIMIT: usize = 32;

const TIME_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Case4Sub {
    /// `u2 <= u0 - 2`: the delta shock crosses the whole fan.
    I,
    /// `u0 <= u2`: the shock never leaves the fan.
    IIa,
    /// `u0 - 1 <= u2 < u0`
    IIb,
    /// `u0 - 2 < u2 < u0 - 1`
    IIc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Case5Sub {
    /// `u0 <= u2`: bifurcation, the shock stays in the fan.
    Below,
    /// `u2 < u0 < u2 + 2`: bifurcation, both branches leave the fan.
    Between,
    /// `u0 >= u2 + 2`: the delta shock leaves the fan before breakdown.
    NoBifurcation,
}

/// Which of the five interaction configurations a scenario belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum CaseId {
    /// Two delta shocks.
    One,
    /// Delta shock followed by a shock and contact.
    Two,
    /// Shock and contact followed by a delta shock.
    Three,
    /// Delta shock followed by a rarefaction.
    Four(Case4Sub),
    /// Rarefaction followed by a delta shock.
    Five(Case5Sub),
}

impl CaseId {
    pub fn number(self) -> u8 {
        match self {
            CaseId::One => 1,
            CaseId::Two => 2,
            CaseId::Three => 3,
            CaseId::Four(_) => 4,
            CaseId::Five(_) => 5,
        }
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CaseId::One | CaseId::Two | CaseId::Three => write!(f, "{}", self.number()),
            CaseId::Four(Case4Sub::I) => write!(f, "4(i)"),
            CaseId::Four(Case4Sub::IIa) => write!(f, "4(ii)(a)"),
            CaseId::Four(Case4Sub::IIb) => write!(f, "4(ii)(b)"),
            CaseId::Four(Case4Sub::IIc) => write!(f, "4(ii)(c)"),
            CaseId::Five(Case5Sub::Below) => write!(f, "5 bifurcation, u0 <= u2"),
            CaseId::Five(Case5Sub::Between) => write!(f, "5 bifurcation, u2 < u0"),
            CaseId::Five(Case5Sub::NoBifurcation) => write!(f, "5 no bifurcation"),
        }
    }
}

fn reject(msg: &str) -> Error {
    Error::InvalidScenario(format!("{msg} violated"))
}

pub fn validate_scenario(sc: &Scenario) -> Result<CaseId> {
    if !(sc.left.is_finite() && sc.middle.is_finite() && sc.right.is_finite() && sc.offset.is_finite()) {
        return Err(reject("finite states and offset"));
    }
    if !(sc.t_max > 0.0) {
        return Err(reject("t_max > 0"));
    }
    let (u0, u1, u2) = (sc.left.u, sc.middle.u, sc.right.u);
    let d_left = u0 >= u1 + 2.0;
    let d_right = u1 >= u2 + 2.0;
    if sc.offset == 0.0 {
        return Err(reject("offset != 0"));
    }
    if d_left && d_right {
        return Ok(CaseId::One);
    }
    if sc.offset < 0.0 {
        if !d_left {
            return Err(reject("u0 >= u1+2"));
        }
        if u2 < u1 {
            Ok(CaseId::Two)
        } else if u2 > u1 {
            let sub = if u2 <= u0 - 2.0 {
                Case4Sub::I
            } else if u0 <= u2 {
                Case4Sub::IIa
            } else if u0 - 1.0 <= u2 {
                Case4Sub::IIb
            } else {
                Case4Sub::IIc
            };
            Ok(CaseId::Four(sub))
        } else {
            Err(reject("u1 != u2"))
        }
    } else {
        if !d_right {
            return Err(reject("u1 >= u2+2"));
        }
        if u1 < u0 {
            Ok(CaseId::Three)
        } else if u0 < u1 {
            let sub = if u0 >= u2 + 2.0 {
                Case5Sub::NoBifurcation
            } else if u0 <= u2 {
                Case5Sub::Below
            } else {
                Case5Sub::Between
            };
            Ok(CaseId::Five(sub))
        } else {
            Err(reject("u0 != u1"))
        }
    }
}

fn push_region(sol: &mut Solution, u: ULaw, v: VLaw) -> RegionId {
    let id = sol.regions.len();
    sol.regions.push(Region { id, u, v });
    id
}

#[allow(clippy::too_many_arguments)]
fn push_front(
    sol: &mut Solution,
    kind: FrontKind,
    geometry: CurveGeometry,
    t_start: f64,
    left: RegionId,
    right: RegionId,
    strength: Option<StrengthLaw>,
    split: Option<SplitRule>,
) -> FrontId {
    let id = sol.fronts.len();
    sol.fronts.push(Front { id, kind, geometry, t_start, t_end: None, left, right, strength, split });
    id
}

/// Inserts the waves of `fan` between the existing regions `left` and
/// `right`. The outermost fan regions are identified with them.
fn place_fan(sol: &mut Solution, fan: WaveFan, left: RegionId, right: RegionId) -> Vec<FrontId> {
    let t0 = fan.origin.t;
    if fan.is_empty() {
        // keep the region chain intact with a zero-jump contact
        let u = sol.region(left).u.value(fan.origin);
        let g = CurveGeometry::line(fan.origin, u - 1.0);
        return vec![push_front(sol, FrontKind::Contact, g, t0, left, right, None, None)];
    }
    let n = fan.fronts.len();
    let mut ids = Vec::with_capacity(n + 1);
    ids.push(left);
    for (u, v) in fan.regions.iter().take(n).skip(1) {
        ids.push(push_region(sol, *u, v.clone()));
    }
    ids.push(right);
    fan.fronts
        .into_iter()
        .enumerate()
        .map(|(i, f)| push_front(sol, f.kind, f.geometry, t0, ids[i], ids[i + 1], f.strength, f.split))
        .collect()
}

/// Initial fronts from the two Riemann problems at the jumps.
pub fn initial_solution(sc: &Scenario) -> Solution {
    let mut sol = Solution {
        scenario: *sc,
        regions: Vec::new(),
        fronts: Vec::new(),
        events: Vec::new(),
        t_max_computed: 0.0,
        complete: false,
    };
    let (xa, xb) = sc.jump_positions();
    let r0 = push_region(&mut sol, ULaw::Const(sc.left.u), VLaw::Const(sc.left.v));
    let r1 = push_region(&mut sol, ULaw::Const(sc.middle.u), VLaw::Const(sc.middle.v));
    let r2 = push_region(&mut sol, ULaw::Const(sc.right.u), VLaw::Const(sc.right.v));
    let a = riemann::solve_riemann(sc.left, sc.middle, Point::new(0.0, xa));
    place_fan(&mut sol, a, r0, r1);
    let b = riemann::solve_riemann(sc.middle, sc.right, Point::new(0.0, xb));
    place_fan(&mut sol, b, r1, r2);
    sol
}

/// Complete solution of a single Riemann problem at the origin, with a
/// point mass `gamma` there when nonzero. The scenario records `right` as
/// both middle and right state with zero offset, so it is not a valid
/// interaction scenario.
pub fn riemann_solution(left: State, right: State, gamma: f64) -> Solution {
    let sc = Scenario { left, middle: right, right, offset: 0.0, t_max: 10.0 };
    let mut sol = Solution {
        scenario: sc,
        regions: Vec::new(),
        fronts: Vec::new(),
        events: Vec::new(),
        t_max_computed: f64::INFINITY,
        complete: true,
    };
    let r0 = push_region(&mut sol, ULaw::Const(left.u), VLaw::Const(left.v));
    let r1 = push_region(&mut sol, ULaw::Const(right.u), VLaw::Const(right.v));
    let origin = Point::new(0.0, 0.0);
    let fan = if gamma == 0.0 {
        riemann::solve_riemann(left, right, origin)
    } else {
        riemann::solve_grp(left, right, gamma, origin)
    };
    place_fan(&mut sol, fan, r0, r1);
    sol
}

fn alive_chain(sol: &Solution) -> Vec<FrontId> {
    let alive: Vec<&Front> = sol.fronts.iter().filter(|f| f.t_end.is_none()).collect();
    order_chain(&alive)
}

#[derive(Debug, Clone)]
struct Candidate {
    point: Point,
    fronts: Vec<FrontId>,
    breakdown: bool,
}

fn tol(t: f64) -> f64 {
    TIME_TOL * (1.0 + t.abs())
}

fn is_breakdown_candidate(f: &Front) -> bool {
    f.kind == FrontKind::DeltaShock && matches!(f.geometry, CurveGeometry::Sqrt { .. })
}

fn candidates(sol: &Solution, after: f64) -> Vec<Candidate> {
    let chain = alive_chain(sol);
    let mut out = Vec::new();
    for w in chain.windows(2) {
        let (a, b) = (sol.front(w[0]), sol.front(w[1]));
        let born = a.t_start.max(b.t_start);
        let from = born + tol(born);
        if let Intersection::At(p) = fronts::intersect(&a.geometry, &b.geometry, from) {
            if p.t >= after - tol(after) {
                out.push(Candidate { point: p, fronts: vec![a.id, b.id], breakdown: false });
            }
        }
    }
    for &id in &chain {
        let f = sol.front(id);
        if is_breakdown_candidate(f) {
            if let Some(ts) = fronts::breakdown_time(&f.geometry, f.t_start + tol(f.t_start), f64::INFINITY) {
                out.push(Candidate { point: f.geometry.point_at(ts), fronts: vec![id], breakdown: true });
            }
        }
    }
    out
}

fn same_point(a: Point, b: Point) -> bool {
    (a.t - b.t).abs() <= tol(a.t) && (a.x - b.x).abs() <= 1e-8 * (1.0 + a.x.abs())
}

/// Earliest interaction after `after`, with coincident interactions merged.
/// Among simultaneous interactions at distinct positions the leftmost wins.
pub fn next_event(sol: &Solution, after: f64) -> Result<Option<Event>> {
    let cands = candidates(sol, after);
    let Some(t_min) = cands.iter().map(|c| c.point.t).min_by(f64::total_cmp) else {
        return Ok(None);
    };
    let first = cands
        .iter()
        .filter(|c| c.point.t <= t_min + tol(t_min))
        .min_by(|a, b| a.point.x.total_cmp(&b.point.x))
        .unwrap()
        .clone();
    let mut incoming: Vec<FrontId> = Vec::new();
    let mut breakdown = false;
    for c in cands.iter().filter(|c| same_point(c.point, first.point)) {
        for &id in &c.fronts {
            if !incoming.contains(&id) {
                incoming.push(id);
            }
        }
        breakdown |= c.breakdown;
    }
    let chain = alive_chain(sol);
    incoming.sort_by_key(|id| chain.iter().position(|c| c == id));
    let rule = classify_event(sol, &incoming, breakdown, first.point)?;
    Ok(Some(Event { point: first.point, incoming, outgoing: Vec::new(), rule }))
}

fn closing_regions(sol: &Solution, incoming: &[FrontId]) -> Vec<RegionId> {
    incoming[..incoming.len() - 1].iter().map(|&id| sol.front(id).right).collect()
}

fn is_fan(sol: &Solution, r: RegionId) -> bool {
    matches!(sol.region(r).u, ULaw::Fan { .. })
}

fn classify_event(sol: &Solution, incoming: &[FrontId], breakdown: bool, p: Point) -> Result<ResolutionRule> {
    let kinds: Vec<FrontKind> = incoming.iter().map(|&id| sol.front(id).kind).collect();
    if incoming.len() == 1 {
        return if breakdown {
            Ok(ResolutionRule::BreakdownBifurcation)
        } else {
            Err(Error::Inconsistent { t: p.t, x: p.x, msg: "single-front event without breakdown".into() })
        };
    }
    let lr = sol.front(incoming[0]).left;
    let rr = sol.front(*incoming.last().unwrap()).right;
    let closing = closing_regions(sol, incoming);
    if closing.iter().any(|&r| is_fan(sol, r)) {
        return Ok(if kinds.contains(&FrontKind::DeltaContact) {
            ResolutionRule::ContactContinuation
        } else {
            ResolutionRule::FrontExitsFan
        });
    }
    let has_delta_shock = kinds.contains(&FrontKind::DeltaShock);
    if has_delta_shock && (is_fan(sol, lr) || is_fan(sol, rr)) {
        return Ok(ResolutionRule::DeltaEntersFan);
    }
    let atoms = kinds.iter().filter(|k| k.carries_atom()).count();
    if atoms >= 2 && atoms == kinds.len() {
        Ok(ResolutionRule::MergeDeltas)
    } else if atoms >= 1 && kinds.contains(&FrontKind::Shock) {
        Ok(ResolutionRule::ShockHitsDelta)
    } else if atoms >= 1 && kinds.contains(&FrontKind::Contact) {
        Ok(ResolutionRule::DeltaCrossesContact)
    } else {
        Err(Error::Inconsistent { t: p.t, x: p.x, msg: format!("no rule for incoming kinds {kinds:?}") })
    }
}

fn end_fronts(sol: &mut Solution, ids: &[FrontId], t: f64) {
    for &id in ids {
        sol.fronts[id].t_end = Some(t);
    }
}

fn incoming_mass(sol: &Solution, ids: &[FrontId], t: f64) -> f64 {
    ids.iter().map(|&id| sol.front(id).strength_at(t)).sum()
}

/// Applies the rule recorded in `ev` and appends the completed event.
pub fn resolve_event(sol: &mut Solution, mut ev: Event) -> Result<()> {
    let p = ev.point;
    let inc = ev.incoming.clone();
    let lr = sol.front(inc[0]).left;
    let rr = sol.front(*inc.last().unwrap()).right;
    let outgoing = match ev.rule {
        ResolutionRule::BreakdownBifurcation => bifurcate(sol, inc[0], p)?,
        ResolutionRule::DeltaEntersFan => enter_fan(sol, &inc, lr, rr, p)?,
        ResolutionRule::ContactContinuation => continue_contact(sol, &inc, lr, rr, p)?,
        ResolutionRule::FrontExitsFan
        | ResolutionRule::MergeDeltas
        | ResolutionRule::DeltaCrossesContact
        | ResolutionRule::ShockHitsDelta => {
            let gamma = incoming_mass(sol, &inc, p.t);
            let left = sol.region(lr).state_at(p);
            let right = sol.region(rr).state_at(p);
            if !(left.is_finite() && right.is_finite()) {
                return Err(Error::Inconsistent { t: p.t, x: p.x, msg: "non-finite trace at interaction".into() });
            }
            end_fronts(sol, &inc, p.t);
            let fan = riemann::solve_grp(left, right, gamma, p);
            place_fan(sol, fan, lr, rr)
        }
    };
    check_outgoing(sol, &inc, &outgoing, p)?;
    ev.outgoing = outgoing;
    sol.events.push(ev);
    Ok(())
}

fn check_outgoing(sol: &Solution, inc: &[FrontId], out: &[FrontId], p: Point) -> Result<()> {
    let before = incoming_mass(sol, inc, p.t);
    let after = incoming_mass(sol, out, p.t);
    if (before - after).abs() > 1e-10 * (1.0 + before.abs()) {
        return Err(Error::Inconsistent { t: p.t, x: p.x, msg: format!("atom mass {before} -> {after}") });
    }
    for &id in out {
        let f = sol.front(id);
        if f.kind == FrontKind::DeltaShock {
            let q = f.geometry.point_at(p.t);
            let ul = sol.region(f.left).u.value(q);
            let ur = sol.region(f.right).u.value(q);
            if !riemann::overcompressive(ul, ur, f.geometry.slope_at(p.t), 1e-9) {
                return Err(Error::Inconsistent { t: p.t, x: p.x, msg: "spawned delta shock is not overcompressive".into() });
            }
        }
    }
    Ok(())
}

/// Neighbor of the region `r` away from the fronts in `exclude`.
fn front_bordering(sol: &Solution, r: RegionId, on_left_of_region: bool, exclude: &[FrontId]) -> Option<FrontId> {
    sol.fronts
        .iter()
        .filter(|f| f.t_end.is_none() && !exclude.contains(&f.id))
        .find(|f| if on_left_of_region { f.right == r } else { f.left == r })
        .map(|f| f.id)
}

fn enter_fan(sol: &mut Solution, inc: &[FrontId], lr: RegionId, rr: RegionId, p: Point) -> Result<Vec<FrontId>> {
    let fan_on_right = is_fan(sol, rr);
    let (fan_region, const_region) = if fan_on_right { (rr, lr) } else { (lr, rr) };
    let center = sol.region(fan_region).u.fan_center().expect("fan region");
    let u_const = match sol.region(const_region).u {
        ULaw::Const(u) => u,
        ULaw::Fan { .. } => {
            return Err(Error::Inconsistent { t: p.t, x: p.x, msg: "delta shock between two fans".into() })
        }
    };
    let geom = fronts::fan_delta_trajectory(p, u_const, center)?;
    let gamma = incoming_mass(sol, inc, p.t);
    end_fronts(sol, inc, p.t);

    let t_s = fronts::breakdown_time(&geom, f64::NEG_INFINITY, f64::INFINITY).unwrap_or(f64::INFINITY);
    if t_s <= p.t + tol(p.t) {
        // not overcompressive even at entry: bifurcate on the spot
        let id = push_front(
            sol,
            FrontKind::DeltaShock,
            geom,
            p.t,
            lr,
            rr,
            Some(StrengthLaw::Constant { gamma }),
            Some(SplitRule::OneSided),
        );
        return bifurcate(sol, id, p);
    }
    let far = front_bordering(sol, fan_region, !fan_on_right, inc);
    let exit = far
        .and_then(|id| fronts::intersect(&geom, &sol.front(id).geometry, p.t + tol(p.t)).point())
        .map_or(f64::INFINITY, |q| q.t);
    let t_hi = t_s.min(exit);
    if !t_hi.is_finite() {
        return Err(Error::Inconsistent { t: p.t, x: p.x, msg: "fan-crossing delta shock has no end".into() });
    }
    let (left, right) = (sol.region(lr).clone(), sol.region(rr).clone());
    let rate = |t: f64| {
        let q = geom.point_at(t);
        fronts::strength_rate(geom.slope_at(t), left.state_at(q), right.state_at(q))
    };
    let law = fronts::strength_integrate(rate, p.t, t_hi, gamma, false)?;
    let id = push_front(sol, FrontKind::DeltaShock, geom, p.t, lr, rr, Some(law), Some(SplitRule::OneSided));
    Ok(vec![id])
}

fn bifurcate(sol: &mut Solution, id: FrontId, p: Point) -> Result<Vec<FrontId>> {
    let f = sol.front(id).clone();
    let alpha = f.strength_at(p.t);
    sol.fronts[id].t_end = Some(p.t);
    let (l, r) = (sol.region(f.left).clone(), sol.region(f.right).clone());
    let contact_law = Some(StrengthLaw::Constant { gamma: alpha });
    match (l.u, r.u) {
        (ULaw::Const(u_left), ULaw::Fan { .. }) => {
            let w = push_region(sol, ULaw::Const(u_left), fronts::w_profile_straight(f.geometry, p.t, u_left, r.u, r.v));
            let g1 = push_front(
                sol,
                FrontKind::DeltaContact,
                CurveGeometry::line(p, u_left - 1.0),
                p.t,
                f.left,
                w,
                contact_law,
                Some(SplitRule::Even),
            );
            let g2 = push_front(sol, FrontKind::Shock, f.geometry, p.t, w, f.right, None, None);
            Ok(vec![g1, g2])
        }
        (ULaw::Fan { center }, ULaw::Const(u_right)) => {
            let right_state = State::new(u_right, r.v.value(p));
            if !matches!(r.v, VLaw::Const(_)) {
                return Err(Error::Inconsistent { t: p.t, x: p.x, msg: "breakdown next to a non-constant state".into() });
            }
            let a = push_region(sol, l.u, fronts::w_profile_curved(f.geometry, center, right_state));
            let g1 = push_front(
                sol,
                FrontKind::DeltaContact,
                fronts::characteristic_in_fan(p, center)?,
                p.t,
                f.left,
                a,
                contact_law,
                Some(SplitRule::Even),
            );
            let g2 = push_front(sol, FrontKind::Shock, f.geometry, p.t, a, f.right, None, None);
            Ok(vec![g1, g2])
        }
        _ => Err(Error::Inconsistent { t: p.t, x: p.x, msg: "breakdown needs a fan on exactly one side".into() }),
    }
}

fn continue_contact(sol: &mut Solution, inc: &[FrontId], lr: RegionId, rr: RegionId, p: Point) -> Result<Vec<FrontId>> {
    let (edge, contact) = match inc {
        [e, c] if sol.front(*e).kind == FrontKind::FanEdge && sol.front(*c).kind == FrontKind::DeltaContact => (*e, *c),
        _ => {
            return Err(Error::Inconsistent { t: p.t, x: p.x, msg: "delta contact must leave a fan through its left edge".into() })
        }
    };
    let u0 = match sol.region(lr).u {
        ULaw::Const(u) => u,
        ULaw::Fan { .. } => return Err(Error::Inconsistent { t: p.t, x: p.x, msg: "fan outside the fan edge".into() }),
    };
    let alpha = sol.front(contact).strength_at(p.t);
    let edge_geom = CurveGeometry::line(p, sol.front(edge).geometry.slope_at(p.t));
    end_fronts(sol, inc, p.t);
    let a = sol.region(rr).clone();
    let w2 = push_region(sol, ULaw::Const(u0), fronts::w_profile_transport(u0, edge_geom, p.t, a.u, a.v));
    let g3 = push_front(
        sol,
        FrontKind::DeltaContact,
        CurveGeometry::line(p, u0 - 1.0),
        p.t,
        lr,
        w2,
        Some(StrengthLaw::Constant { gamma: alpha }),
        Some(SplitRule::Even),
    );
    let e2 = push_front(sol, FrontKind::FanEdge, edge_geom, p.t, w2, rr, None, None);
    Ok(vec![g3, e2])
}

/// Builds the global solution of a scenario.
pub fn run(sc: &Scenario) -> Result<Solution> {
    validate_scenario(sc)?;
    let mut sol = initial_solution(sc);
    let mut t = 0.0;
    loop {
        match next_event(&sol, t)? {
            None => break,
            Some(ev) => {
                if sol.events.len() >= EVENT_LIMIT {
                    return Err(Error::Inconsistent { t: ev.point.t, x: ev.point.x, msg: "event limit reached".into() });
                }
                t = ev.point.t;
                resolve_event(&mut sol, ev)?;
            }
        }
    }
    sol.complete = true;
    sol.t_max_computed = f64::INFINITY;
    Ok(sol)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sc(a: (f64, f64), b: (f64, f64), c: (f64, f64), offset: f64) -> Scenario {
        Scenario::new(State::new(a.0, a.1), State::new(b.0, b.1), State::new(c.0, c.1), offset)
    }

    #[test]
    fn validation_examples() {
        assert_eq!(validate_scenario(&sc((6., 1.), (3., 1.), (0., 1.), -1.)).unwrap(), CaseId::One);
        assert_eq!(validate_scenario(&sc((4., 1.), (1., 1.), (2., 1.), -1.)).unwrap().number(), 4);
        let e = validate_scenario(&sc((3., 1.), (3., 1.), (0., 1.), -1.)).unwrap_err();
        assert!(e.to_string().contains("u0 >= u1+2 violated"), "{e}");
        assert_eq!(validate_scenario(&sc((6., 1.), (2., 1.), (1., 1.), -1.)).unwrap(), CaseId::Two);
        assert_eq!(validate_scenario(&sc((4., 1.), (3., 2.), (0., 0.5), 1.)).unwrap(), CaseId::Three);
        assert_eq!(
            validate_scenario(&sc((1., 1.), (4., 1.), (0., 1.), 1.)).unwrap(),
            CaseId::Five(Case5Sub::Between)
        );
        assert!(validate_scenario(&sc((6., 1.), (3., 1.), (0., 1.), 0.)).is_err());
    }

    #[test]
    fn sub_case_boundaries_go_to_lower_branch() {
        let sub = |u2: f64| match validate_scenario(&sc((4., 1.), (1., 1.), (u2, 1.), -1.)).unwrap() {
            CaseId::Four(s) => s,
            other => panic!("{other:?}"),
        };
        assert_eq!(sub(2.0), Case4Sub::I);
        assert_eq!(sub(2.5), Case4Sub::IIc);
        assert_eq!(sub(3.0), Case4Sub::IIb);
        assert_eq!(sub(3.5), Case4Sub::IIb);
        assert_eq!(sub(4.0), Case4Sub::IIa);
        let sub5 = |u0: f64| match validate_scenario(&sc((u0, 1.), (4., 1.), (0., 1.), 1.)).unwrap() {
            CaseId::Five(s) => s,
            other => panic!("{other:?}"),
        };
        assert_eq!(sub5(0.0), Case5Sub::Below);
        assert_eq!(sub5(1.0), Case5Sub::Between);
        assert_eq!(sub5(2.0), Case5Sub::NoBifurcation);
    }

    #[test]
    fn first_event_of_two_deltas() {
        let s = sc((6., 1.), (3., 1.), (0., 1.), -1.);
        let sol = initial_solution(&s);
        let ev = next_event(&sol, 0.0).unwrap().unwrap();
        assert_eq!(ev.rule, ResolutionRule::MergeDeltas);
        assert!((ev.point.t - 1.0 / 3.0).abs() < 1e-15 && (ev.point.x - 0.5).abs() < 1e-15);
    }
}
