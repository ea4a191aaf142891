//! Numeric thresholds shared by every validating operation.

use crate::error::{AlgebraError, Result};
use crate::scalar::{real, RealScalar};

/// All tolerances are dimensionless bounds on max-entry norms, except the
/// unitarity and positivity checks which bound eigenvalues. Each operation
/// documents which field it reads.
///
/// The defaults target `f64`; `f32` users should supply their own, looser
/// values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToleranceConfig<T> {
    /// Bound on the max-entry norm of `P - P†` in the Hermitian test.
    pub hermitian: T,
    /// Gap threshold for eigenvalue clustering and coefficient comparison.
    pub cluster: T,
    /// Bound on the max-entry norm of `P·P† - P` in the projector test.
    pub idempotent: T,
    /// Bound on the max-entry norm of `Ω·Ω† - 1` in the unitarity test.
    pub unitary: T,
    /// Threshold under which a scalar or matrix counts as zero.
    pub zero: T,
}

impl<T: RealScalar> Default for ToleranceConfig<T> {
    fn default() -> Self {
        ToleranceConfig {
            hermitian: real(1e-10),
            cluster: real(1e-8),
            idempotent: real(1e-10),
            unitary: real(1e-10),
            zero: real(1e-12),
        }
    }
}

impl<T: RealScalar> ToleranceConfig<T> {
    /// Builds a config, rejecting non-positive or non-finite thresholds.
    pub fn new(hermitian: T, cluster: T, idempotent: T, unitary: T, zero: T) -> Result<Self> {
        let cfg = ToleranceConfig {
            hermitian,
            cluster,
            idempotent,
            unitary,
            zero,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<()> {
        let ok = |t: T| t.is_finite() && t > T::zero();
        if ok(self.hermitian) && ok(self.cluster) && ok(self.idempotent) && ok(self.unitary) && ok(self.zero) {
            Ok(())
        } else {
            Err(AlgebraError::InvalidTolerance)
        }
    }
}
