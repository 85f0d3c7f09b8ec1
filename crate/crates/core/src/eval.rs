//! Pointwise evaluation of a [`Solution`]: region lookup, field values and
//! delta atoms at a fixed time.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{FrontId, Point, RegionId, Solution};

/// Delta atom carried by a front at a fixed time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Atom {
    pub x: f64,
    pub alpha: f64,
    pub alpha0: f64,
    pub alpha1: f64,
    pub front: FrontId,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sample {
    pub t: f64,
    pub xs: Vec<f64>,
    pub u_vals: Vec<f64>,
    /// Function part of `v`. May hold `inf`/`-inf` next to the singular
    /// edge of a transported profile.
    pub v_regular_vals: Vec<f64>,
    pub atoms: Vec<Atom>,
}

/// Interval of one region at a fixed time, bounded by the fronts `left` and
/// `right` (`None` for the unbounded ends).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Piece {
    pub region: RegionId,
    pub x_lo: f64,
    pub x_hi: f64,
    pub left: Option<FrontId>,
    pub right: Option<FrontId>,
}

/// Regions crossed by the line of constant `t`, left to right.
pub fn pieces_at(sol: &Solution, t: f64) -> Vec<Piece> {
    let chain = sol.chain_at(t);
    let mut out = Vec::with_capacity(chain.len() + 1);
    let mut prev: Option<FrontId> = None;
    let mut x_lo = f64::NEG_INFINITY;
    let first_region = chain.first().map_or(0, |&id| sol.front(id).left);
    let mut region = first_region;
    for &id in &chain {
        let f = sol.front(id);
        let x = f.x_at(t);
        out.push(Piece { region, x_lo, x_hi: x, left: prev, right: Some(id) });
        prev = Some(id);
        x_lo = x;
        region = f.right;
    }
    out.push(Piece { region, x_lo, x_hi: f64::INFINITY, left: prev, right: None });
    out
}

fn on_front_tol(x: f64) -> f64 {
    1e-12 * (1.0 + x.abs())
}

/// Region containing `x` at time `t`; points on a front go to its left.
pub fn region_at(pieces: &[Piece], x: f64) -> RegionId {
    pieces
        .iter()
        .find(|p| x <= p.x_hi + on_front_tol(p.x_hi))
        .map_or(pieces[pieces.len() - 1].region, |p| p.region)
}

pub fn atoms_at(sol: &Solution, t: f64) -> Vec<Atom> {
    let mut atoms: Vec<Atom> = sol
        .fronts
        .iter()
        .filter(|f| f.kind.carries_atom() && f.alive_at(t))
        .map(|f| {
            let (alpha0, alpha1) = sol.split_at(f, t);
            Atom { x: f.x_at(t), alpha: f.strength_at(t), alpha0, alpha1, front: f.id }
        })
        .collect();
    atoms.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.front.cmp(&b.front)));
    atoms
}

pub fn sample(sol: &Solution, t: f64, xs: &[f64]) -> Result<Sample> {
    if !(t > 0.0) {
        return Err(Error::Domain(format!("sampling time must be positive, got {t}")));
    }
    let pieces = pieces_at(sol, t);
    let mut u_vals = Vec::with_capacity(xs.len());
    let mut v_vals = Vec::with_capacity(xs.len());
    for &x in xs {
        let r = sol.region(region_at(&pieces, x));
        let p = Point::new(t, x);
        u_vals.push(r.u.value(p));
        v_vals.push(r.v.value(p));
    }
    Ok(Sample { t, xs: xs.to_vec(), u_vals, v_regular_vals: v_vals, atoms: atoms_at(sol, t) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interact::run;
    use crate::model::{Scenario, State};

    fn two_deltas() -> Solution {
        run(&Scenario::new(State::new(6.0, 1.0), State::new(3.0, 1.0), State::new(0.0, 1.0), -1.0)).unwrap()
    }

    #[test]
    fn merged_delta_at_unit_time() {
        let sol = two_deltas();
        let s = sample(&sol, 1.0, &[0.0, 2.4, 2.5, 2.6, 9.0]).unwrap();
        assert_eq!(s.u_vals, vec![6.0, 6.0, 6.0, 0.0, 0.0]);
        assert_eq!(s.atoms.len(), 1);
        assert!((s.atoms[0].x - 2.5).abs() < 1e-14);
        assert!((s.atoms[0].alpha - 6.0).abs() < 1e-14);
    }

    #[test]
    fn atoms_before_merge() {
        let sol = two_deltas();
        let a = atoms_at(&sol, 0.25);
        assert_eq!(a.len(), 2);
        for atom in &a {
            assert!((atom.alpha - 0.75).abs() < 1e-15);
            assert!((atom.alpha0 + atom.alpha1 - atom.alpha).abs() < 1e-15);
        }
        assert!(a[0].x < a[1].x);
        // continuity through the merge
        let t = 1.0 / 3.0;
        let before: f64 = atoms_at(&sol, t - 1e-12).iter().map(|a| a.alpha).sum();
        let after: f64 = atoms_at(&sol, t + 1e-12).iter().map(|a| a.alpha).sum();
        assert!((before - after).abs() < 1e-10);
    }

    #[test]
    fn early_samples_match_initial_data() {
        let sol = two_deltas();
        let xs = [-3.0, -0.5, 0.5, 3.0];
        let s = sample(&sol, 1e-9, &xs).unwrap();
        for (i, &x) in xs.iter().enumerate() {
            let st = sol.scenario.initial_state(x);
            assert_eq!((s.u_vals[i], s.v_regular_vals[i]), (st.u, st.v));
        }
        assert!(sample(&sol, 0.0, &xs).is_err());
    }

    #[test]
    fn on_front_queries_resolve_left() {
        let sol = two_deltas();
        let s = sample(&sol, 1.0, &[2.5 + 1e-13]).unwrap();
        assert_eq!(s.u_vals[0], 6.0);
    }

    #[test]
    fn sampling_is_pure() {
        let sol = two_deltas();
        let xs: Vec<f64> = (0..50).map(|i| -2.0 + 0.1 * i as f64).collect();
        let a = sample(&sol, 0.7, &xs).unwrap();
        let b = sample(&sol, 0.7, &xs).unwrap();
        assert_eq!(format!("{a:?}"), format!("{b:?}"));
    }
}
