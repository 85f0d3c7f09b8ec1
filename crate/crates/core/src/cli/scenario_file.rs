use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interact::{validate_scenario, CaseId};
use crate::model::{Scenario, State};

fn default_t_max() -> f64 {
    10.0
}

fn default_grid() -> [usize; 2] {
    [201, 101]
}

fn yes() -> bool {
    true
}

/// Which files `emit` writes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Outputs {
    #[serde(default = "yes")]
    pub events: bool,
    #[serde(default = "yes")]
    pub fronts: bool,
    #[serde(default = "yes")]
    pub fields: bool,
    #[serde(default = "yes")]
    pub atoms: bool,
    #[serde(default = "yes")]
    pub svg: bool,
}

impl Default for Outputs {
    fn default() -> Self {
        Self { events: true, fronts: true, fields: true, atoms: true, svg: true }
    }
}

/// On-disk scenario description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    /// `(u, v)` of the left, middle and right states.
    pub states: [[f64; 2]; 3],
    pub offset: f64,
    #[serde(default = "default_t_max")]
    pub t_max: f64,
    /// `[nx, nt]` sample counts of the field grids.
    #[serde(default = "default_grid")]
    pub grid: [usize; 2],
    /// `[x_min, x_max]`; derived from the front extents when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<[f64; 2]>,
    #[serde(default)]
    pub outputs: Outputs,
}

impl ScenarioFile {
    pub fn from_json(text: &str) -> Result<Self> {
        let file: ScenarioFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        file.check()?;
        Ok(file)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario file serializes")
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    fn check(&self) -> Result<()> {
        if self.grid[0] < 2 || self.grid[1] < 2 {
            return Err(Error::Parse("grid needs nx >= 2 and nt >= 2".into()));
        }
        if let Some([a, b]) = self.window {
            if !(b > a) {
                return Err(Error::Parse("window must be nonempty".into()));
            }
        }
        Ok(())
    }

    pub fn scenario(&self) -> Scenario {
        let s = |i: usize| State::new(self.states[i][0], self.states[i][1]);
        Scenario { left: s(0), middle: s(1), right: s(2), offset: self.offset, t_max: self.t_max }
    }

    pub fn from_scenario(sc: &Scenario) -> Self {
        let p = |s: State| [s.u, s.v];
        Self {
            states: [p(sc.left), p(sc.middle), p(sc.right)],
            offset: sc.offset,
            t_max: sc.t_max,
            grid: default_grid(),
            window: None,
            outputs: Outputs::default(),
        }
    }
}

/// Reads and validates a scenario file.
pub fn parse_scenario(path: &Path) -> Result<(ScenarioFile, Scenario, CaseId)> {
    let file = ScenarioFile::read(path)?;
    let sc = file.scenario();
    let case = validate_scenario(&sc)?;
    Ok((file, sc, case))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_filled() {
        let f = ScenarioFile::from_json(r#"{"states": [[6,1],[3,1],[0,1]], "offset": -1}"#).unwrap();
        assert_eq!(f.t_max, 10.0);
        assert_eq!(f.grid, [201, 101]);
        assert_eq!(f.window, None);
        assert!(f.outputs.svg);
        assert_eq!(validate_scenario(&f.scenario()).unwrap(), CaseId::One);
    }

    #[test]
    fn violated_inequality_is_named() {
        let f = ScenarioFile::from_json(r#"{"states": [[3,1],[3,1],[0,1]], "offset": -1}"#).unwrap();
        let e = validate_scenario(&f.scenario()).unwrap_err().to_string();
        assert!(e.contains("u0 >= u1+2 violated"), "{e}");
    }

    #[test]
    fn bad_grid_and_unknown_fields_rejected() {
        assert!(ScenarioFile::from_json(r#"{"states": [[6,1],[3,1],[0,1]], "offset": -1, "grid": [1, 5]}"#).is_err());
        assert!(ScenarioFile::from_json(r#"{"states": [[6,1],[3,1],[0,1]], "offset": -1, "colour": 3}"#).is_err());
        assert!(ScenarioFile::from_json(r#"{"states": [[6,1],[3,1],[0,1]], "offset": -1, "window": [2, 1]}"#).is_err());
    }

    #[test]
    fn round_trip() {
        let text = r#"{"states": [[4,-0.5],[1,1],[2.5,1.5]], "offset": -1, "t_max": 7.25, "window": [-3, 12]}"#;
        let f = ScenarioFile::from_json(text).unwrap();
        assert_eq!(ScenarioFile::from_json(&f.to_json()).unwrap(), f);
    }
}
