//! Numerical verification suite.
//!
//! Each [`CheckId`] samples the model and reports the worst deviation from
//! the property it tests. Checks with several sub-criteria report the largest
//! ratio `error / threshold` over their components against a threshold of 1;
//! counting criteria report the number of failures against a threshold of 0.5.

mod checks;
pub mod numdiff;
pub mod sampling;

pub use numdiff::{jacobian, numerical_rank, singular_values};

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::group::AdditionLaw;
use crate::model::{ModelParams, SlotSigns};

/// Numerical tolerances and sampling controls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToleranceConfig {
    /// Central-difference step.
    pub fd_step: f64,
    /// Bound on the graph form with finite-difference Jacobians.
    pub form_tol: f64,
    /// Bound on algebraic identities.
    pub alg_tol: f64,
    /// Relative singular-value cutoff for rank decisions.
    pub rank_tol: f64,
    pub samples: usize,
    pub seed: u64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            fd_step: 1e-6,
            form_tol: 1e-4,
            alg_tol: 1e-11,
            rank_tol: 1e-8,
            samples: 1000,
            seed: 42,
        }
    }
}

impl ToleranceConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("fd_step", self.fd_step),
            ("form_tol", self.form_tol),
            ("alg_tol", self.alg_tol),
            ("rank_tol", self.rank_tol),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParams(format!(
                    "{name} = {v} must be positive"
                )));
            }
        }
        Ok(())
    }
}

/// Named checks, in report order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CheckId {
    FlowField,
    LiouvillePullback,
    SectionLagrangian,
    DeckSymplectic,
    GroupLaws,
    SelectionExclusive,
    SingularContinuity,
    PeriodClosure,
    GraphLagrangian,
    GraphImmersion,
    DoublePoint,
    ChartCompatibility,
    Covering,
    Tubular,
    TrivializationInvariance,
}

impl CheckId {
    pub const ALL: [CheckId; 15] = [
        CheckId::FlowField,
        CheckId::LiouvillePullback,
        CheckId::SectionLagrangian,
        CheckId::DeckSymplectic,
        CheckId::GroupLaws,
        CheckId::SelectionExclusive,
        CheckId::SingularContinuity,
        CheckId::PeriodClosure,
        CheckId::GraphLagrangian,
        CheckId::GraphImmersion,
        CheckId::DoublePoint,
        CheckId::ChartCompatibility,
        CheckId::Covering,
        CheckId::Tubular,
        CheckId::TrivializationInvariance,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckId::FlowField => "flow_field",
            CheckId::LiouvillePullback => "liouville_pullback",
            CheckId::SectionLagrangian => "section_lagrangian",
            CheckId::DeckSymplectic => "deck_symplectic",
            CheckId::GroupLaws => "group_laws",
            CheckId::SelectionExclusive => "selection_exclusive",
            CheckId::SingularContinuity => "singular_continuity",
            CheckId::PeriodClosure => "period_closure",
            CheckId::GraphLagrangian => "graph_lagrangian",
            CheckId::GraphImmersion => "graph_immersion",
            CheckId::DoublePoint => "double_point",
            CheckId::ChartCompatibility => "chart_compatibility",
            CheckId::Covering => "covering",
            CheckId::Tubular => "tubular",
            CheckId::TrivializationInvariance => "trivialization_invariance",
        }
    }

    fn index(self) -> u64 {
        CheckId::ALL.iter().position(|c| *c == self).unwrap_or(0) as u64
    }
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CheckId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CheckId::ALL
            .iter()
            .copied()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::UnknownCheckId(s.to_string()))
    }
}

/// One sub-criterion of a check.
#[derive(Debug, Clone, PartialEq)]
pub struct ComponentReport {
    pub name: &'static str,
    pub samples: usize,
    pub max_error: f64,
    pub threshold: f64,
    pub worst_input: Vec<f64>,
}

impl ComponentReport {
    pub fn pass(&self) -> bool {
        self.max_error <= self.threshold
    }
}

/// Outcome of one check.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub check: CheckId,
    pub samples: usize,
    pub max_error: f64,
    pub threshold: f64,
    pub pass: bool,
    /// Input at which `max_error` was attained.
    pub worst_input: Vec<f64>,
    pub details: String,
    pub components: Vec<ComponentReport>,
}

impl CheckReport {
    fn from_components(check: CheckId, samples: usize, components: Vec<ComponentReport>) -> Self {
        let (max_error, threshold, worst_input) = match components.as_slice() {
            [single] => (
                single.max_error,
                single.threshold,
                single.worst_input.clone(),
            ),
            many => {
                let mut worst = (0.0, Vec::new());
                for c in many {
                    let ratio = c.max_error / c.threshold;
                    if ratio > worst.0 || worst.1.is_empty() && ratio >= worst.0 {
                        worst = (ratio, c.worst_input.clone());
                    }
                }
                (worst.0, 1.0, worst.1)
            }
        };
        let details = components
            .iter()
            .map(|c| format!("{}: {:.3e} <= {:.1e}", c.name, c.max_error, c.threshold))
            .collect::<Vec<_>>()
            .join("; ");
        Self {
            check,
            samples,
            max_error,
            threshold,
            pass: max_error <= threshold,
            worst_input,
            details,
            components,
        }
    }

    fn vacuous(check: CheckId) -> Self {
        Self {
            check,
            samples: 0,
            max_error: 0.0,
            threshold: 0.0,
            pass: true,
            worst_input: Vec::new(),
            details: "warning: samples = 0, check is vacuous".into(),
            components: Vec::new(),
        }
    }

    fn failed(check: CheckId, err: Error) -> Self {
        Self {
            check,
            samples: 0,
            max_error: f64::INFINITY,
            threshold: 0.0,
            pass: false,
            worst_input: Vec::new(),
            details: format!("error: {err}"),
            components: Vec::new(),
        }
    }
}

/// Deliberate distortions used as negative controls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Controls {
    /// Slot signs of the product form tested on the graph.
    pub signs: SlotSigns,
    /// Addition law used wherever a check adds points.
    pub law: AdditionLaw,
}

impl Default for Controls {
    fn default() -> Self {
        Self {
            signs: SlotSigns::CORRESPONDENCE,
            law: AdditionLaw::STANDARD,
        }
    }
}

/// Runs one check with the standard formulas.
pub fn run_check(id: CheckId, params: &ModelParams, tol: &ToleranceConfig) -> CheckReport {
    run_check_with(id, params, tol, &Controls::default())
}

/// Runs the check called `name`.
pub fn run_check_named(
    name: &str,
    params: &ModelParams,
    tol: &ToleranceConfig,
) -> Result<CheckReport> {
    Ok(run_check(name.parse()?, params, tol))
}

/// Runs one check with the given controls. Deterministic in `tol.seed`.
pub fn run_check_with(
    id: CheckId,
    params: &ModelParams,
    tol: &ToleranceConfig,
    controls: &Controls,
) -> CheckReport {
    if let Err(e) = tol.validate() {
        return CheckReport::failed(id, e);
    }
    if tol.samples == 0 {
        return CheckReport::vacuous(id);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(tol.seed.wrapping_add(id.index()));
    let ctx = checks::Context {
        params,
        tol,
        controls,
    };
    match checks::run(id, &ctx, &mut rng) {
        Ok((samples, components)) => CheckReport::from_components(id, samples, components),
        Err(e) => CheckReport::failed(id, e),
    }
}

/// Runs every check, in parallel, returning reports in [`CheckId::ALL`] order.
pub fn run_suite(params: &ModelParams, tol: &ToleranceConfig) -> Vec<CheckReport> {
    run_suite_with(params, tol, &Controls::default())
}

pub fn run_suite_with(
    params: &ModelParams,
    tol: &ToleranceConfig,
    controls: &Controls,
) -> Vec<CheckReport> {
    CheckId::ALL
        .par_iter()
        .map(|id| run_check_with(*id, params, tol, controls))
        .collect()
}

/// True iff every report passes.
pub fn suite_passes(reports: &[CheckReport]) -> bool {
    reports.iter().all(|r| r.pass)
}
