//! Exact front tracking for delta-shock interactions in the system
//! `u_t + (u^2/2)_x = 0`, `v_t + ((u-1) v)_x = 0`.

pub mod cli;
pub mod error;
pub mod eval;
pub mod fronts;
pub mod interact;
pub mod model;
pub mod quad;
pub mod riemann;
pub mod verify;

pub use error::{Error, Result};
pub use model::*;
