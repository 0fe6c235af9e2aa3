use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use polyberg_core::halfplane::GridSpec;
use polyberg_core::multiplex::{CODEC_MODES, MAX_MODES};
use polyberg_core::verification::Tolerances;

use crate::failure::Failure;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridOverrides {
    #[serde(rename = "X")]
    pub x_half_width: Option<f64>,
    pub n_x: Option<usize>,
    pub s_min: Option<f64>,
    pub s_max: Option<f64>,
    pub n_s: Option<usize>,
}

impl GridOverrides {
    /// Fields set in `other` win.
    pub fn merged(&self, other: &GridOverrides) -> GridOverrides {
        GridOverrides {
            x_half_width: other.x_half_width.or(self.x_half_width),
            n_x: other.n_x.or(self.n_x),
            s_min: other.s_min.or(self.s_min),
            s_max: other.s_max.or(self.s_max),
            n_s: other.n_s.or(self.n_s),
        }
    }

    pub fn spec(&self) -> GridSpec<f64> {
        let base = GridSpec::verification();
        GridSpec {
            x_half_width: self.x_half_width.unwrap_or(base.x_half_width),
            n_x: self.n_x.unwrap_or(base.n_x),
            s_min: self.s_min.unwrap_or(base.s_min),
            s_max: self.s_max.unwrap_or(base.s_max),
            n_s: self.n_s.unwrap_or(base.n_s),
        }
    }
}

/// Contents of `--config <json>`. Command-line flags override it.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CliConfig {
    pub grid: GridOverrides,
    #[serde(rename = "M")]
    pub modes: Option<usize>,
    pub tolerances: Tolerances,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
}

impl CliConfig {
    pub fn load(path: &Path) -> Result<Self, Failure> {
        let text = crate::read_input(path)?;
        let config: CliConfig =
            serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), Failure> {
        if let Some(m) = self.modes {
            if m == 0 || m > MAX_MODES {
                return Err(Failure::Usage(format!("M must be in 1..={MAX_MODES}, got {m}")));
            }
        }
        let t = serde_json::to_value(self.tolerances).map_err(|e| Failure::Usage(e.to_string()))?;
        if let Some((name, _)) = t.as_object().into_iter().flatten().find(|(_, v)| !v.as_f64().is_some_and(|x| x > 0.0)) {
            return Err(Failure::Usage(format!("tolerance `{name}` must be positive")));
        }
        Ok(())
    }

    pub fn modes(&self) -> usize {
        self.modes.unwrap_or(CODEC_MODES)
    }
}
