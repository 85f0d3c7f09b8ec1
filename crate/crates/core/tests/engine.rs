use deltafront::interact::{run, validate_scenario, Case4Sub, Case5Sub, CaseId};
use deltafront::verify::battery;
use deltafront::{CurveGeometry, FrontKind, Point, ResolutionRule, Scenario, Solution, State};
use proptest::prelude::*;

const E: f64 = std::f64::consts::E;

fn solved(name: &str) -> Solution {
    let sc = battery().into_iter().find(|(n, _)| *n == name).unwrap().1;
    run(&sc).unwrap()
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + b.abs())
}

/// `(rule, t, x)` of every event.
fn events(sol: &Solution) -> Vec<(ResolutionRule, f64, f64)> {
    sol.events.iter().map(|e| (e.rule, e.point.t, e.point.x)).collect()
}

fn assert_events(sol: &Solution, expected: &[(ResolutionRule, f64, f64)]) {
    let got = events(sol);
    assert_eq!(got.len(), expected.len(), "{got:?}");
    for (g, e) in got.iter().zip(expected) {
        assert_eq!(g.0, e.0);
        assert!(close(g.1, e.1, 1e-12) && close(g.2, e.2, 1e-12), "{g:?} vs {e:?}");
    }
}

/// Rate and value at birth of the single atom-carrying front leaving event `i`.
fn outgoing_atom(sol: &Solution, i: usize) -> (f64, f64, f64) {
    let f = sol.events[i]
        .outgoing
        .iter()
        .map(|&id| sol.front(id))
        .find(|f| f.kind.carries_atom())
        .unwrap();
    let law = f.strength.as_ref().unwrap();
    (f.geometry.slope_at(f.t_start + 1e-9), law.value(f.t_start), law.rate(f.t_start))
}

use ResolutionRule::*;

#[test]
fn two_delta_shocks_merge() {
    let sol = solved("case1");
    assert_events(&sol, &[(MergeDeltas, 1.0 / 3.0, 0.5)]);
    let (speed, gamma, rate) = outgoing_atom(&sol, 0);
    assert!(close(speed, 3.0, 1e-14) && close(gamma, 2.0, 1e-14) && close(rate, 6.0, 1e-14));
}

#[test]
fn delta_crosses_contact_then_meets_shock() {
    let sol = solved("case2");
    assert_events(&sol, &[(DeltaCrossesContact, 1.0 / 3.0, 1.0 / 3.0), (ShockHitsDelta, 0.4, 0.6)]);
    // behind the contact v = 1 * (2 + 2 - 1) / (2 + 1 - 2) = 3
    let (s1, g1, r1) = outgoing_atom(&sol, 0);
    assert!(close(s1, 4.0, 1e-14) && close(g1, 4.0 / 3.0, 1e-14) && close(r1, 10.0, 1e-13));
    let (s2, g2, r2) = outgoing_atom(&sol, 1);
    assert!(close(s2, 3.5, 1e-14) && close(g2, 2.0, 1e-13) && close(r2, 5.0, 1e-13));
}

#[test]
fn shock_and_contact_overtake_delta() {
    let sol = solved("case3");
    assert_events(&sol, &[(ShockHitsDelta, 0.5, 1.75), (DeltaCrossesContact, 0.75, 2.25)]);
    let (s1, g1, r1) = outgoing_atom(&sol, 0);
    assert!(close(s1, 2.0, 1e-14) && close(g1, 1.125, 1e-14) && close(r1, 7.5, 1e-13));
    let (_, g2, r2) = outgoing_atom(&sol, 1);
    assert!(close(g2, 3.0, 1e-13) && close(r2, 2.5, 1e-13));
}

#[test]
fn delta_crosses_whole_fan() {
    let sol = solved("case4-i");
    assert_events(
        &sol,
        &[(DeltaCrossesContact, 0.4, 0.0), (DeltaEntersFan, 2.0 / 3.0, 2.0 / 3.0), (FrontExitsFan, 0.96, 1.44)],
    );
    let curved = sol.front(sol.events[1].outgoing[0]);
    match curved.geometry {
        CurveGeometry::Sqrt { k, u_k, .. } => {
            assert!(close(k, -6f64.sqrt(), 1e-14));
            assert_eq!(u_k, 4.0);
        }
        g => panic!("expected a square-root curve, got {g:?}"),
    }
    assert!(close(outgoing_atom(&sol, 2).0, 2.75, 1e-14));
}

#[test]
fn breakdown_inside_fan_from_the_left() {
    for name in ["case4-ii-a", "case4-ii-b", "case4-ii-c"] {
        let sol = solved(name);
        let ev = &sol.events[2];
        assert_eq!(ev.rule, BreakdownBifurcation, "{name}");
        assert!(close(ev.point.t, 1.5, 1e-12) && close(ev.point.x, 3.0, 1e-12));
        let kinds: Vec<FrontKind> = ev.outgoing.iter().map(|&id| sol.front(id).kind).collect();
        assert_eq!(kinds, vec![FrontKind::DeltaContact, FrontKind::Shock]);
    }
    assert_eq!(solved("case4-ii-a").events.len(), 3);
    let b = solved("case4-ii-b");
    assert_eq!(b.events[3].rule, FrontExitsFan);
    assert!(close(b.events[3].point.t, 24.0, 1e-12) && close(b.events[3].point.x, 84.0, 1e-12));
    let c = solved("case4-ii-c");
    assert!(close(c.events[3].point.t, 8.0 / 3.0, 1e-12) && close(c.events[3].point.x, 20.0 / 3.0, 1e-12));
}

#[test]
fn fan_from_the_left_overtakes_delta() {
    for name in ["case5-below", "case5-between", "case5-no-bifurcation"] {
        let sol = solved(name);
        assert_eq!(sol.events[0].rule, DeltaEntersFan);
        assert!(close(sol.events[0].point.t, 0.5, 1e-12) && close(sol.events[0].point.x, 2.0, 1e-12));
    }
    let below = solved("case5-below");
    assert_events(
        &below,
        &[(DeltaEntersFan, 0.5, 2.0), (BreakdownBifurcation, 2.0, 4.0), (ContactContinuation, 2.0 * E.powi(3), -2.0 * E.powi(3))],
    );
    let between = solved("case5-between");
    assert_events(
        &between,
        &[
            (DeltaEntersFan, 0.5, 2.0),
            (BreakdownBifurcation, 2.0, 4.0),
            (ContactContinuation, 2.0 * E, 2.0 * E),
            (FrontExitsFan, 8.0, 8.0),
        ],
    );
    let nb = solved("case5-no-bifurcation");
    assert_events(
        &nb,
        &[(DeltaEntersFan, 0.5, 2.0), (FrontExitsFan, 8.0 / 9.0, 8.0 / 3.0), (DeltaCrossesContact, 8.0 / 3.0, 16.0 / 3.0)],
    );
    assert!(close(outgoing_atom(&nb, 1).0, 1.5, 1e-14));
}

#[test]
fn delta_contact_keeps_its_strength() {
    let sol = solved("case5-below");
    for f in sol.fronts.iter().filter(|f| f.kind == FrontKind::DeltaContact) {
        let law = f.strength.as_ref().unwrap();
        let a = law.value(f.t_start);
        for t in [f.t_start + 0.5, f.t_start + 7.0, f.t_start + 100.0] {
            assert_eq!(law.value(t), a);
        }
    }
}

#[test]
fn battery_routes_to_every_sub_case() {
    let ids: Vec<CaseId> = battery().iter().map(|(_, sc)| validate_scenario(sc).unwrap()).collect();
    assert_eq!(
        ids,
        vec![
            CaseId::One,
            CaseId::Two,
            CaseId::Three,
            CaseId::Four(Case4Sub::I),
            CaseId::Four(Case4Sub::IIa),
            CaseId::Four(Case4Sub::IIb),
            CaseId::Four(Case4Sub::IIc),
            CaseId::Five(Case5Sub::Below),
            CaseId::Five(Case5Sub::Between),
            CaseId::Five(Case5Sub::NoBifurcation),
        ]
    );
}

#[test]
fn sub_case_boundaries_go_to_the_lower_branch() {
    let s = State::new;
    let four = |u2: f64| validate_scenario(&Scenario::new(s(4.0, 1.0), s(1.0, 1.0), s(u2, 1.0), -1.0)).unwrap();
    assert_eq!(four(2.0), CaseId::Four(Case4Sub::I));
    assert_eq!(four(4.0), CaseId::Four(Case4Sub::IIa));
    assert_eq!(four(3.0), CaseId::Four(Case4Sub::IIb));
    let five = |u0: f64| validate_scenario(&Scenario::new(s(u0, 1.0), s(4.0, 1.0), s(0.0, 1.0), 1.0)).unwrap();
    assert_eq!(five(2.0), CaseId::Five(Case5Sub::NoBifurcation));
    assert_eq!(five(0.0), CaseId::Five(Case5Sub::Below));
}

#[test]
fn rejected_scenarios_name_the_violated_inequality() {
    let s = State::new;
    let msg = |a: State, b: State, c: State, off: f64| validate_scenario(&Scenario::new(a, b, c, off)).unwrap_err().to_string();
    assert!(msg(s(3.0, 1.0), s(3.0, 1.0), s(0.0, 1.0), -1.0).contains("u0 >= u1+2 violated"));
    assert!(msg(s(3.0, 1.0), s(1.0, 1.0), s(0.0, 1.0), 1.0).contains("u1 >= u2+2 violated"));
    assert!(msg(s(5.0, 1.0), s(1.0, 1.0), s(1.0, 1.0), -1.0).contains("u1 != u2 violated"));
    assert!(msg(s(4.0, 1.0), s(4.0, 1.0), s(1.0, 1.0), 1.0).contains("u0 != u1 violated"));
    assert!(msg(s(6.0, 1.0), s(3.0, 1.0), s(0.0, 1.0), 0.0).contains("offset != 0 violated"));
    let mut sc = Scenario::new(s(6.0, 1.0), s(3.0, 1.0), s(0.0, 1.0), -1.0);
    sc.t_max = 0.0;
    assert!(validate_scenario(&sc).unwrap_err().to_string().contains("t_max > 0 violated"));
}

/// Random scenario of the given case number.
fn scenario(case: u8) -> impl Strategy<Value = Scenario> {
    (-2.0..2.0f64, 0.0..3.0f64, 0.05..3.0f64, [0.1..3.0f64, 0.1..3.0, 0.1..3.0], 0.2..3.0f64, 0.05..0.95f64).prop_map(
        move |(base, d1, d2, v, a, w)| {
            let (u0, u1, u2, offset) = match case {
                1 => (base + 4.0 + d1 + d2, base + 2.0 + d2, base, -a),
                2 => (base + 2.0 + d1 + 2.0 * w, base + 2.0 * w, base, -a),
                3 => (base + 2.0 + d2 + 2.0 * w, base + 2.0 + d2, base, a),
                4 => (base + 2.0 + d1, base, base + d2, -a),
                _ => (base + 2.0 + d2 - (d1 + 0.1), base + 2.0 + d2, base, a),
            };
            Scenario::new(State::new(u0, v[0]), State::new(u1, v[1]), State::new(u2, v[2]), offset)
        },
    )
}

fn check_solution(sol: &Solution) -> Result<(), TestCaseError> {
    prop_assert!(sol.complete);
    for e in &sol.events {
        let t = e.point.t;
        for &id in &e.incoming {
            let f = sol.front(id);
            prop_assert!((f.x_at(t) - e.point.x).abs() < 1e-7 * (1.0 + e.point.x.abs()), "incoming front {id} misses event");
        }
        let mass_in: f64 = e.incoming.iter().map(|&id| sol.front(id)).filter(|f| f.kind.carries_atom()).map(|f| f.strength_at(t)).sum();
        let mass_out: f64 = e.outgoing.iter().map(|&id| sol.front(id)).filter(|f| f.kind.carries_atom()).map(|f| f.strength_at(t)).sum();
        prop_assert!((mass_in - mass_out).abs() < 1e-9 * (1.0 + mass_in.abs()), "atom mass jumps at {:?}", e.rule);
    }
    let horizon = sol.events.last().map_or(1.0, |e| e.point.t) * 1.5 + 1.0;
    for i in 1..=40 {
        let t = horizon * i as f64 / 40.0;
        let chain = sol.chain_at(t);
        for w in chain.windows(2) {
            let (a, b) = (sol.front(w[0]), sol.front(w[1]));
            prop_assert_eq!(a.right, b.left, "chain broken at t={}", t);
            prop_assert!(a.x_at(t) <= b.x_at(t) + 1e-9 * (1.0 + b.x_at(t).abs()), "fronts cross at t={}", t);
        }
    }
    Ok(())
}

fn resolves(sc: Scenario, case: u8) -> Result<(), TestCaseError> {
    prop_assert_eq!(validate_scenario(&sc).unwrap().number(), case);
    check_solution(&run(&sc).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_two_delta_scenarios_resolve(sc in scenario(1)) { resolves(sc, 1)?; }

    #[test]
    fn random_delta_then_shock_scenarios_resolve(sc in scenario(2)) { resolves(sc, 2)?; }

    #[test]
    fn random_shock_then_delta_scenarios_resolve(sc in scenario(3)) { resolves(sc, 3)?; }

    #[test]
    fn random_delta_then_fan_scenarios_resolve(sc in scenario(4)) { resolves(sc, 4)?; }

    #[test]
    fn random_fan_then_delta_scenarios_resolve(sc in scenario(5)) { resolves(sc, 5)?; }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn fan_trajectory_solves_its_ode(
        tc in -1.0..1.0f64, xc in -2.0..2.0f64, dt in 0.05..3.0f64, w in -3.0..3.0f64, uk in -4.0..4.0f64,
    ) {
        let center = Point::new(tc, xc);
        let entry = Point::new(tc + dt, xc + w * dt);
        prop_assume!((w - uk).abs() > 1e-3);
        let c = deltafront::fronts::fan_delta_trajectory(entry, uk, center).unwrap();
        prop_assert!((c.x_at(entry.t) - entry.x).abs() <= 1e-12 * (1.0 + entry.x.abs()));
        for i in 0..1000 {
            let t = entry.t + 10.0 * i as f64 / 999.0;
            let rhs = ((c.x_at(t) - xc) / (t - tc) + uk) / 2.0;
            prop_assert!((c.slope_at(t) - rhs).abs() <= 1e-12 * (1.0 + rhs.abs()), "t={} {} vs {}", t, c.slope_at(t), rhs);
        }
    }
}
