//! Two-state Riemann problems, with or without a point atom at the origin.
//!
//! Every coefficient here comes from the distributional form of the
//! `v` equation: the coefficient of the delta along a front gives the
//! strength rate (the Rankine-Hugoniot deficit) and the coefficient of the
//! derivative of the delta gives the split into one-sided parts.

use crate::error::{Error, Result};
use crate::model::{CurveGeometry, FrontKind, Point, SplitRule, State, StrengthLaw, ULaw, VLaw};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WaveCase {
    Constant,
    RarefactionContact,
    ShockContact,
    DeltaShock,
}

/// Classifies by the `u` states alone. The boundary `u_L = u_R + 2` is a
/// delta shock: the shock-contact intermediate state is undefined there.
pub fn classify(u_l: f64, u_r: f64) -> WaveCase {
    if u_l == u_r {
        WaveCase::Constant
    } else if u_r > u_l {
        WaveCase::RarefactionContact
    } else if u_l >= u_r + 2.0 {
        WaveCase::DeltaShock
    } else {
        WaveCase::ShockContact
    }
}

/// Amount by which the jump of `v` fails the Rankine-Hugoniot condition at
/// `speed`; equals the growth rate of an atom travelling with the jump.
pub fn rh_deficit(left: State, right: State, speed: f64) -> f64 {
    speed * (right.v - left.v) - ((right.u - 1.0) * right.v - (left.u - 1.0) * left.v)
}

/// Intermediate `v` between the contact and the shock of a shock-contact
/// fan: the value that makes the `v` jump across the shock conservative.
pub fn v_star(u_l: f64, u_r: f64, v_r: f64) -> Result<f64> {
    let den = 2.0 + u_r - u_l;
    let num = 2.0 + u_l - u_r;
    if den == 0.0 || num == 0.0 {
        return Err(Error::Domain(format!(
            "v* undefined for u_L={u_l}, u_R={u_r}: degenerate shock-contact pair"
        )));
    }
    Ok(v_r * num / den)
}

/// Splits `alpha` into left and right parts so the delta-prime coefficient
/// `-speed*alpha + (u_L-1) a0 + (u_R-1) a1` vanishes.
pub fn split_strength(alpha: f64, speed: f64, u_l: f64, u_r: f64) -> Result<(f64, f64)> {
    if u_l == u_r {
        return Err(Error::Domain("split is degenerate when u_L = u_R".into()));
    }
    let du = u_l - u_r;
    Ok((alpha * (speed - u_r + 1.0) / du, alpha * (u_l - 1.0 - speed) / du))
}

/// `u_R <= speed <= u_L - 1`: every characteristic enters the front.
pub fn overcompressive(u_l: f64, u_r: f64, speed: f64, tol: f64) -> bool {
    u_r <= speed + tol && speed <= u_l - 1.0 + tol
}

#[derive(Debug, Clone, PartialEq)]
pub struct FanFront {
    pub kind: FrontKind,
    pub geometry: CurveGeometry,
    pub strength: Option<StrengthLaw>,
    pub split: Option<SplitRule>,
}

/// Waves emanating from one point, ordered left to right, with the field
/// laws of the `fronts.len() + 1` regions they separate.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveFan {
    pub origin: Point,
    pub case: WaveCase,
    pub fronts: Vec<FanFront>,
    pub regions: Vec<(ULaw, VLaw)>,
}

impl WaveFan {
    pub fn is_empty(&self) -> bool {
        self.fronts.is_empty()
    }

    /// Slopes of the fronts at the origin.
    pub fn speeds(&self) -> Vec<f64> {
        self.fronts.iter().map(|f| f.geometry.slope_at(self.origin.t)).collect()
    }
}

pub fn solve_riemann(left: State, right: State, origin: Point) -> WaveFan {
    solve_grp(left, right, 0.0, origin)
}

fn plain(kind: FrontKind, origin: Point, slope: f64) -> FanFront {
    FanFront { kind, geometry: CurveGeometry::line(origin, slope), strength: None, split: None }
}

/// Contact of slope `u - 1`, carrying `gamma` when nonzero.
fn contact(origin: Point, u: f64, gamma: f64) -> FanFront {
    if gamma != 0.0 {
        FanFront {
            kind: FrontKind::DeltaContact,
            geometry: CurveGeometry::line(origin, u - 1.0),
            strength: Some(StrengthLaw::Constant { gamma }),
            split: Some(SplitRule::Even),
        }
    } else {
        plain(FrontKind::Contact, origin, u - 1.0)
    }
}

/// Riemann problem with an extra atom of mass `gamma` at `origin`.
pub fn solve_grp(left: State, right: State, gamma: f64, origin: Point) -> WaveFan {
    let case = classify(left.u, right.u);
    let outer_l = (ULaw::Const(left.u), VLaw::Const(left.v));
    let outer_r = (ULaw::Const(right.u), VLaw::Const(right.v));
    match case {
        WaveCase::Constant => {
            if left.v == right.v && gamma == 0.0 {
                return WaveFan { origin, case, fronts: Vec::new(), regions: vec![outer_l] };
            }
            WaveFan { origin, case, fronts: vec![contact(origin, left.u, gamma)], regions: vec![outer_l, outer_r] }
        }
        WaveCase::RarefactionContact => {
            let v_mid = right.v * (left.u - right.u).exp();
            WaveFan {
                origin,
                case,
                fronts: vec![
                    contact(origin, left.u, gamma),
                    plain(FrontKind::FanEdge, origin, left.u),
                    plain(FrontKind::FanEdge, origin, right.u),
                ],
                regions: vec![
                    outer_l,
                    (ULaw::Const(left.u), VLaw::Const(v_mid)),
                    (ULaw::Fan { center: origin }, VLaw::FanExp { v_ref: right.v, u_ref: right.u, center: origin }),
                    outer_r,
                ],
            }
        }
        WaveCase::ShockContact => {
            let vs = v_star(left.u, right.u, right.v).expect("shock-contact range has a nondegenerate v*");
            WaveFan {
                origin,
                case,
                fronts: vec![
                    contact(origin, left.u, gamma),
                    plain(FrontKind::Shock, origin, 0.5 * (left.u + right.u)),
                ],
                regions: vec![outer_l, (ULaw::Const(left.u), VLaw::Const(vs)), outer_r],
            }
        }
        WaveCase::DeltaShock => {
            let c = 0.5 * (left.u + right.u);
            let s = rh_deficit(left, right, c);
            WaveFan {
                origin,
                case,
                fronts: vec![FanFront {
                    kind: FrontKind::DeltaShock,
                    geometry: CurveGeometry::line(origin, c),
                    strength: Some(StrengthLaw::Affine { s, gamma, t_ref: origin.t }),
                    split: Some(SplitRule::OneSided),
                }],
                regions: vec![outer_l, outer_r],
            }
        }
    }
}
