//! Independent checks of a computed solution: weak-form residuals, mass
//! balance, entropy pairs and a brute-force fan approximation.

pub mod admissible;
pub mod entropy;
pub mod mass;
pub mod oracle;
pub mod testfn;
pub mod weak;

pub use admissible::{overcompressibility, MonitorReport};
pub use entropy::{entropy_residual, pair_identity_error, EntropyPair, Poly, RegularizedContact};
pub use mass::{mass_balance, window_mass};
pub use oracle::{compare, fan_approx_oracle, OracleErrors, OracleRun};
pub use testfn::{front_probe, random_tests, TestFunction};
pub use weak::{weak_residual, weak_residuals, WeakResidual};

use crate::model::{Scenario, Solution, State};

/// Fixed scenarios covering every case and sub-case.
pub fn battery() -> Vec<(&'static str, Scenario)> {
    let s = |u: f64, v: f64| State::new(u, v);
    vec![
        ("case1", Scenario::new(s(6.0, 1.0), s(3.0, 1.0), s(0.0, 1.0), -1.0)),
        ("case2", Scenario::new(s(6.0, 1.0), s(2.0, 1.0), s(1.0, 1.0), -1.0)),
        ("case3", Scenario::new(s(4.0, 1.0), s(3.0, 2.0), s(0.0, 0.5), 1.0)),
        ("case4-i", Scenario::new(s(4.0, 1.0), s(1.0, 1.0), s(1.5, 2.0), -1.0)),
        ("case4-ii-a", Scenario::new(s(4.0, 1.0), s(1.0, 1.0), s(5.0, 0.5), -1.0)),
        ("case4-ii-b", Scenario::new(s(4.0, 1.0), s(1.0, 1.0), s(3.5, 1.0), -1.0)),
        ("case4-ii-c", Scenario::new(s(4.0, -0.5), s(1.0, 1.0), s(2.5, 1.5), -1.0)),
        ("case5-below", Scenario::new(s(-1.0, 1.0), s(4.0, 1.0), s(0.0, 1.0), 1.0)),
        ("case5-between", Scenario::new(s(1.0, 1.0), s(4.0, 1.0), s(0.0, 1.0), 1.0)),
        ("case5-no-bifurcation", Scenario::new(s(3.0, 1.0), s(4.0, 1.0), s(0.0, 1.0), 1.0)),
    ]
}

/// Copy of `sol` with `ds` added to the growth rate of the atom on front
/// `id`, starting from its birth.
pub fn perturb_strength(sol: &Solution, id: usize, ds: f64) -> Solution {
    let mut out = sol.clone();
    let f = &mut out.fronts[id];
    if let Some(law) = &f.strength {
        f.strength = Some(law.perturbed(ds, f.t_start));
    }
    out
}
