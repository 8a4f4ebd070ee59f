use std::path::Path;

use bergman_core::gaf::DEFAULT_TRUNCATION_EPS;
use bergman_core::hyperbolic::StatisticParams;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, LabResult};

/// Parameters shared by every experiment. Missing JSON fields take the
/// [`Default`] values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub s: f64,
    /// Centre `z` as `[re, im]`.
    pub z: [f64; 2],
    pub n_list: Vec<u32>,
    pub trials: usize,
    pub eps_truncation: f64,
    pub master_seed: u64,
    /// Worker threads; `None` uses the available parallelism.
    pub threads: Option<usize>,
    pub output_path: Option<String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            s: 1.25,
            z: [0.0, 0.0],
            n_list: vec![2, 3, 4],
            trials: 2000,
            eps_truncation: DEFAULT_TRUNCATION_EPS,
            master_seed: 1,
            threads: None,
            output_path: None,
        }
    }
}

impl RunConfig {
    pub fn from_json_file(path: impl AsRef<Path>) -> LabResult<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn centre(&self) -> Complex64 {
        Complex64::new(self.z[0], self.z[1])
    }

    pub fn params(&self, n: u32) -> LabResult<StatisticParams> {
        StatisticParams::new(self.s, self.centre(), n).map_err(|e| LabError::Config(e.to_string()))
    }

    pub fn max_n(&self) -> u32 {
        self.n_list.last().copied().unwrap_or(0)
    }

    pub fn thread_count(&self) -> usize {
        self.threads
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
            .max(1)
    }

    pub fn validate(&self) -> LabResult<()> {
        let bad = |m: &str| Err(LabError::Config(m.to_owned()));
        if !(self.s > 1.0 && self.s < 1.5) {
            return bad("s must lie in (1, 1.5)");
        }
        if !(self.centre().norm() < 1.0) {
            return bad("|z| must be below 1");
        }
        if self.trials == 0 {
            return bad("trials must be at least 1");
        }
        if self.n_list.is_empty() {
            return bad("n_list must not be empty");
        }
        if self.n_list.windows(2).any(|w| w[0] >= w[1]) {
            return bad("n_list must be strictly ascending");
        }
        if self.n_list[0] == 0 {
            return bad("n_list entries must be positive");
        }
        if !(self.eps_truncation > 0.0 && self.eps_truncation < 1.0) {
            return bad("eps_truncation must lie in (0, 1)");
        }
        if self.threads == Some(0) {
            return bad("threads must be at least 1");
        }
        Ok(())
    }
}
