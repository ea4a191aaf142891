//! Finite-dimensional pseudo-observable algebra.
//!
//! Pseudo-observables are complex square matrices under sum, product and
//! Hermitian transposition; observables are the Hermitian ones. On top of
//! that ring this crate builds the projector lattice, spectral
//! decomposition into projector bases, the commutator/compatibility
//! calculus, dyad bases with their component isomorphism, unitary changes
//! of dyad basis, and a seeded Monte-Carlo oracle for the outcome-wise
//! semantics of compatible observables.
//!
//! All numeric code is generic over the real scalar type through
//! [`RealScalar`]; the `*64` aliases fix `f64`, the working precision the
//! default tolerances are calibrated for.
//!
//! ```
//! use poa::{decompose, Observable, PseudoObservable64, ToleranceConfig};
//!
//! let tol = ToleranceConfig::default();
//! let x = Observable::new(PseudoObservable64::pauli_x(), &tol)?;
//! let sd = decompose(&x, &tol)?;
//! assert_eq!(sd.coefficients().len(), 2); // spectrum {-1, +1}
//! assert!(sd.reconstruction_residual()? < 1e-12);
//! # Ok::<(), poa::AlgebraError>(())
//! ```

pub mod basis_change;
pub mod compat;
pub mod dyads;
mod eigen;
pub mod ensemble;
pub mod error;
pub mod io;
pub mod projector;
pub mod pseudo;
pub mod random;
pub mod scalar;
pub mod spectral;
pub mod tolerance;

pub use basis_change::{
    change_of_basis, conjugate, phase_change_of_basis, phase_unitary, swap_change_of_basis,
    swap_unitary, ChangeOfBasis,
};
pub use compat::{
    are_compatible, build_complete_set, commutator, express_as_function, incompatibility_measure,
    joint_refine, CompleteSet, CompleteSetOutcome, FunctionTable, IncompatibilityReport,
    IncompleteReport,
};
pub use dyads::{
    build_dyad_basis, component_add, component_mul, decompose_po, dyadic_form, equivalent_basis,
    projection_component, relative_phases, ComponentMatrix, DyadBasis, DyadicForm,
};
pub use ensemble::{
    sample, verify_pointwise_algebra, EnsembleModel, OutcomeTable, PointwiseReport,
    SAMPLING_ALGORITHM,
};
pub use error::{AlgebraError, Result};
pub use projector::{
    event_intersection, event_union, is_projector, leq, Projector, ProjectorBasis,
};
pub use pseudo::{AxiomCheck, Observable, PseudoObservable, TranspositionReport};
pub use scalar::{RealScalar, Scalar};
pub use spectral::{
    apply_function, apply_joint_function, decompose, multiplicity, SpectralDecomposition,
};
pub use tolerance::ToleranceConfig;

pub type PseudoObservable64 = PseudoObservable<f64>;
pub type Observable64 = Observable<f64>;
pub type Projector64 = Projector<f64>;
pub type ProjectorBasis64 = ProjectorBasis<f64>;
pub type SpectralDecomposition64 = SpectralDecomposition<f64>;
pub type CompleteSet64 = CompleteSet<f64>;
pub type DyadBasis64 = DyadBasis<f64>;
pub type ComponentMatrix64 = ComponentMatrix<f64>;
pub type ChangeOfBasis64 = ChangeOfBasis<f64>;
pub type EnsembleModel64 = EnsembleModel<f64>;
pub type ToleranceConfig64 = ToleranceConfig<f64>;
