//! Representativity-fair K-Means.
//!
//! Minimizes
//!
//! ```text
//! O = Σ d(X, R(C(X)))  +  λ₁ · Σ d(X, R(C(X)))²  +  (λ₂/φ) · ln Σ exp(φ · d(X, R(C(X))))
//! ```
//!
//! by alternating full assignment sweeps ([`assignment_step`]) with
//! fixed-point representative updates ([`update_representative`]). The
//! last term is a smoothed stand-in for the largest loss.

mod assignment;
mod fit;
mod objective;
mod representative;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rng::RngSeed;

pub use assignment::{assignment_step, assignment_step_audited, EditAudit};
pub use fit::{rfkm_fit, rfkm_fit_from, RfkmFit};
pub use objective::{objective, smooth_max, ObjectiveBreakdown};
pub use representative::{log_global_denominator, object_weights, update_representative, WeightParts};

/// Weight of the smoothed-max term.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Lambda2 {
    /// `n / 10`, evaluated on the dataset being clustered.
    #[default]
    Auto,
    Fixed(f64),
}

impl Lambda2 {
    pub fn resolve(self, n: usize) -> f64 {
        match self {
            Lambda2::Auto => n as f64 / 10.0,
            Lambda2::Fixed(v) => v,
        }
    }
}

impl std::str::FromStr for Lambda2 {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(Lambda2::Auto);
        }
        let v: f64 = s
            .parse()
            .map_err(|_| format!("expected a number or `auto`, got `{s}`"))?;
        if !(v >= 0.0 && v.is_finite()) {
            return Err(format!("lambda2 must be a non-negative number, got {v}"));
        }
        Ok(Lambda2::Fixed(v))
    }
}

impl std::fmt::Display for Lambda2 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Lambda2::Auto => f.write_str("auto"),
            Lambda2::Fixed(v) => write!(f, "{v}"),
        }
    }
}

impl Serialize for Lambda2 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Lambda2::Auto => s.serialize_str("auto"),
            Lambda2::Fixed(v) => s.serialize_f64(*v),
        }
    }
}

impl<'de> Deserialize<'de> for Lambda2 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Int(i64),
            Str(String),
        }
        let parsed = match Raw::deserialize(d)? {
            Raw::Num(v) => v.to_string().parse(),
            Raw::Int(v) => v.to_string().parse(),
            Raw::Str(s) => s.parse(),
        };
        parsed.map_err(serde::de::Error::custom)
    }
}

/// Hyper-parameters of an RFKM fit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RfkmParams {
    pub lambda1: f64,
    pub lambda2: Lambda2,
    pub phi: f64,
    pub max_outer_iters: usize,
    pub max_rep_fixed_point_iters: usize,
    pub rep_tol: f64,
    pub objective_tol: f64,
    pub seed: RngSeed,
}

impl Default for RfkmParams {
    fn default() -> Self {
        Self {
            lambda1: 1.0,
            lambda2: Lambda2::Auto,
            phi: 3.0,
            max_outer_iters: 100,
            max_rep_fixed_point_iters: 20,
            rep_tol: 1e-6,
            objective_tol: 1e-6,
            seed: RngSeed(0),
        }
    }
}

/// Parameters with `λ₂` bound to a dataset size.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Resolved {
    pub lambda1: f64,
    pub lambda2: f64,
    pub phi: f64,
    pub max_rep_iters: usize,
    pub rep_tol: f64,
}

impl RfkmParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::invalid(what.to_string()));
        if !(self.lambda1 >= 0.0 && self.lambda1.is_finite()) {
            return bad("lambda1 must be a non-negative number");
        }
        if let Lambda2::Fixed(v) = self.lambda2 {
            if !(v >= 0.0 && v.is_finite()) {
                return bad("lambda2 must be a non-negative number");
            }
        }
        if !(self.phi > 0.0 && self.phi.is_finite()) {
            return bad("phi must be positive");
        }
        if self.max_outer_iters == 0 || self.max_rep_fixed_point_iters == 0 {
            return bad("iteration limits must be at least 1");
        }
        if [self.rep_tol, self.objective_tol]
            .iter()
            .any(|t| t.is_nan() || *t < 0.0)
        {
            return bad("tolerances must be non-negative");
        }
        Ok(())
    }

    pub(crate) fn resolve(&self, n: usize) -> Result<Resolved> {
        self.validate()?;
        Ok(Resolved {
            lambda1: self.lambda1,
            lambda2: self.lambda2.resolve(n),
            phi: self.phi,
            max_rep_iters: self.max_rep_fixed_point_iters,
            rep_tol: self.rep_tol,
        })
    }
}
