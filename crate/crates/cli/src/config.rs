//! Run configuration loaded from JSON.

use std::fs;
use std::path::Path;

use focus_addition::model::{InvariantPolynomial, ModelParams};
use focus_addition::verify::ToleranceConfig;
use serde::Deserialize;

use crate::CliError;

pub const DEFAULT_EPSILON: f64 = 0.1;
pub const DEFAULT_DELTA: f64 = 0.3;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    #[serde(rename = "S")]
    s: Option<InvariantSpec>,
    epsilon: Option<f64>,
    delta: Option<f64>,
    samples: Option<usize>,
    seed: Option<u64>,
    tolerances: Option<TolerancesSpec>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct InvariantSpec {
    /// `[i, j, value]` is the coefficient of `b1^i b2^j`.
    coeffs: Vec<(u32, u32, f64)>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct TolerancesSpec {
    fd_step: Option<f64>,
    form_tol: Option<f64>,
    alg_tol: Option<f64>,
    rank_tol: Option<f64>,
}

/// Validated model parameters and tolerances.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub params: ModelParams,
    pub tol: ToleranceConfig,
}

impl RunConfig {
    /// Loads `path`, or the defaults when absent, then applies a seed override.
    pub fn load(path: Option<&Path>, seed: Option<u64>) -> Result<Self, CliError> {
        let file = match path {
            Some(p) => {
                let text = fs::read_to_string(p)
                    .map_err(|e| CliError::config(format!("cannot read {}: {e}", p.display())))?;
                serde_json::from_str(&text)
                    .map_err(|e| CliError::config(format!("{}: {e}", p.display())))?
            }
            None => ConfigFile::default(),
        };
        let mut cfg = Self::from_file(file)?;
        if let Some(seed) = seed {
            cfg.tol.seed = seed;
        }
        Ok(cfg)
    }

    fn from_file(file: ConfigFile) -> Result<Self, CliError> {
        let invariant = match file.s {
            Some(spec) => InvariantPolynomial::from_terms(spec.coeffs),
            None => Ok(InvariantPolynomial::zero()),
        }
        .map_err(|e| CliError::config(e.to_string()))?;
        let params = ModelParams::new(
            file.epsilon.unwrap_or(DEFAULT_EPSILON),
            file.delta.unwrap_or(DEFAULT_DELTA),
            invariant,
        )
        .map_err(|e| CliError::config(e.to_string()))?;

        let mut tol = ToleranceConfig::default();
        let t = file.tolerances.unwrap_or_default();
        tol.fd_step = t.fd_step.unwrap_or(tol.fd_step);
        tol.form_tol = t.form_tol.unwrap_or(tol.form_tol);
        tol.alg_tol = t.alg_tol.unwrap_or(tol.alg_tol);
        tol.rank_tol = t.rank_tol.unwrap_or(tol.rank_tol);
        tol.samples = file.samples.unwrap_or(tol.samples);
        tol.seed = file.seed.unwrap_or(tol.seed);
        tol.validate()
            .map_err(|e| CliError::config(e.to_string()))?;
        Ok(Self { params, tol })
    }
}
