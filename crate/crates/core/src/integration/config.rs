use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};

/// Parameters of the integration: cutoff plateau `[0, τ′]` and support
/// bound `τ`, finite-difference step, sample count, seed and tolerances.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntegrationConfig {
    pub tau_prime: f64,
    pub tau: f64,
    pub fd_step: f64,
    pub samples: usize,
    pub seed: u64,
    /// Absolute tolerance for identities that hold up to rounding.
    pub tol: f64,
    /// Relative tolerance for finite-difference comparisons.
    pub tangent_tol: f64,
}

impl Default for IntegrationConfig {
    fn default() -> Self {
        Self {
            tau_prime: PI / 2.0,
            tau: PI,
            fd_step: 1e-3,
            samples: 256,
            seed: 0,
            tol: 1e-9,
            tangent_tol: 1e-4,
        }
    }
}

impl IntegrationConfig {
    /// Requires `0 < τ′ < τ ≤ π`, a positive step and positive tolerances.
    pub fn validate(&self) -> Result<()> {
        if !(self.tau_prime > 0.0 && self.tau_prime < self.tau && self.tau <= PI) {
            return Err(Error::Config(format!(
                "need 0 < tau_prime < tau <= pi, got tau_prime = {}, tau = {}",
                self.tau_prime, self.tau
            )));
        }
        if !(self.fd_step > 0.0 && self.fd_step.is_finite()) {
            return Err(Error::Config(format!("finite-difference step must be positive, got {}", self.fd_step)));
        }
        if !(self.tol > 0.0 && self.tangent_tol > 0.0) {
            return Err(Error::Config("tolerances must be positive".into()));
        }
        if self.samples == 0 {
            return Err(Error::Config("at least one sample is required".into()));
        }
        Ok(())
    }

    pub fn validated(self) -> Result<Self> {
        self.validate()?;
        Ok(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(IntegrationConfig::default().validate().is_ok());
        let bad = |tp: f64, t: f64| IntegrationConfig {
            tau_prime: tp,
            tau: t,
            ..Default::default()
        };
        assert!(matches!(bad(2.0, 2.0).validate(), Err(Error::Config(_))));
        assert!(bad(3.0, 2.0).validate().is_err());
        assert!(bad(1.0, 4.0).validate().is_err());
        assert!(bad(0.0, 1.0).validate().is_err());
        assert!(bad(1.0, PI).validate().is_ok());
    }
}
