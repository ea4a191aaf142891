//! The projector lattice: idempotency, complement, mutual exclusivity,
//! partial order, elementarity and the event-algebra operations.

use crate::compat;
use crate::error::{AlgebraError, Result};
use crate::pseudo::{Observable, PseudoObservable};
use crate::scalar::{as_f64, RealScalar};
use crate::tolerance::ToleranceConfig;

/// An observable with spectrum contained in `{0, 1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Projector<T>(Observable<T>);

/// Whether `‖P·P† - P‖ ≤ tol.idempotent`.
///
/// The single generalized test implies both hermiticity and idempotency.
pub fn is_projector<T: RealScalar>(p: &PseudoObservable<T>, tol: &ToleranceConfig<T>) -> bool {
    projector_residual(p) <= tol.idempotent
}

/// Max-entry norm of `P·P† - P`.
pub fn projector_residual<T: RealScalar>(p: &PseudoObservable<T>) -> T {
    p.mul(&p.adjoint())
        .expect("same dimension")
        .sub(p)
        .expect("same dimension")
        .max_norm()
}

impl<T: RealScalar> Projector<T> {
    /// Validates the generalized idempotency test and wraps.
    pub fn new(po: PseudoObservable<T>, tol: &ToleranceConfig<T>) -> Result<Self> {
        let residual = projector_residual(&po);
        if residual > tol.idempotent {
            return Err(AlgebraError::NotAProjector {
                residual: as_f64(residual),
            });
        }
        Ok(Projector(Observable::new(po, tol)?))
    }

    pub fn as_observable(&self) -> &Observable<T> {
        &self.0
    }

    pub fn into_observable(self) -> Observable<T> {
        self.0
    }

    /// The complementary projector `1 - I`.
    pub fn complement(&self, tol: &ToleranceConfig<T>) -> Result<Projector<T>> {
        let one = PseudoObservable::identity(self.dim())?;
        Projector::new(one.sub(self.as_po())?, tol)
    }

    /// Whether `I₁·I₂ = 0` within `tol.zero`.
    pub fn is_mutually_exclusive_with(
        &self,
        other: &Projector<T>,
        tol: &ToleranceConfig<T>,
    ) -> Result<bool> {
        Ok(self.mul(other.as_po())?.max_norm() <= tol.zero)
    }

    /// Whether the projector has rank 1, i.e. cannot be split into non-null
    /// mutually exclusive projectors. The trace is the rank witness.
    pub fn is_elementary(&self, tol: &ToleranceConfig<T>) -> Result<bool> {
        if self.max_norm() <= tol.zero {
            return Err(AlgebraError::ZeroProjector);
        }
        Ok((self.trace().re - T::one()).abs() <= tol.cluster)
    }

    /// Rank of the projector, read off the trace.
    pub fn rank(&self) -> usize {
        let half = T::one() / (T::one() + T::one());
        (self.trace().re + half).floor().to_usize().unwrap_or(0)
    }
}

impl<T: RealScalar> std::ops::Deref for Projector<T> {
    type Target = Observable<T>;

    fn deref(&self) -> &Observable<T> {
        &self.0
    }
}

/// Union of mutually exclusive events: `I₁ + I₂`.
pub fn event_union<T: RealScalar>(
    i1: &Projector<T>,
    i2: &Projector<T>,
    tol: &ToleranceConfig<T>,
) -> Result<Projector<T>> {
    let product_norm = i1.mul(i2.as_po())?.max_norm();
    if product_norm > tol.zero {
        return Err(AlgebraError::NotMutuallyExclusive {
            residual: as_f64(product_norm),
        });
    }
    Projector::new(i1.add(i2.as_po())?, tol)
}

/// Intersection of compatible events: `I₁·I₂`.
pub fn event_intersection<T: RealScalar>(
    i1: &Projector<T>,
    i2: &Projector<T>,
    tol: &ToleranceConfig<T>,
) -> Result<Projector<T>> {
    let comm = compat::commutator(i1.as_po(), i2.as_po())?.max_norm();
    let bound = tol.zero * (T::one() + i1.max_norm() * i2.max_norm());
    if comm > bound {
        return Err(AlgebraError::IncompatibleObservables {
            left: i1.display_label("projector"),
            right: i2.display_label("projector"),
            commutator_norm: as_f64(comm),
        });
    }
    // Numerical products of commuting projectors pick up rounding at the
    // machine scale; symmetrize before re-validating.
    let product = i1.mul(i2.as_po())?;
    Projector::new(product.real_part().into_po(), tol)
}

/// Partial order on compatible observables: outcome-wise `a ≤ b` on every
/// projector of a joint refinement.
pub fn leq<T: RealScalar>(
    a: &Observable<T>,
    b: &Observable<T>,
    tol: &ToleranceConfig<T>,
) -> Result<bool> {
    let basis = compat::joint_refine(&[a.clone(), b.clone()], tol)?;
    for element in basis.elements() {
        let t = element.trace().re;
        let aj = a.mul(element.as_po())?.trace().re / t;
        let bj = b.mul(element.as_po())?.trace().re / t;
        if aj > bj + tol.cluster {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Ordered sequence of mutually exclusive projectors summing to identity.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectorBasis<T> {
    dim: usize,
    elements: Vec<Projector<T>>,
}

impl<T: RealScalar> ProjectorBasis<T> {
    /// Validates exclusivity, closure and non-nullity.
    pub fn new(elements: Vec<Projector<T>>, tol: &ToleranceConfig<T>) -> Result<Self> {
        let first = elements.first().ok_or_else(|| AlgebraError::InvalidMatrix {
            reason: "projector basis cannot be empty".into(),
        })?;
        let dim = first.dim();
        for e in &elements {
            if e.dim() != dim {
                return Err(AlgebraError::DimensionMismatch {
                    left: dim,
                    right: e.dim(),
                });
            }
            if e.max_norm() <= tol.zero {
                return Err(AlgebraError::ZeroProjector);
            }
        }
        for (j, ej) in elements.iter().enumerate() {
            for ek in elements.iter().skip(j + 1) {
                let product_norm = ej.mul(ek.as_po())?.max_norm();
                if product_norm > tol.zero {
                    return Err(AlgebraError::NotMutuallyExclusive {
                        residual: as_f64(product_norm),
                    });
                }
            }
        }
        let mut sum = PseudoObservable::zeros(dim)?;
        for e in &elements {
            sum = sum.add(e.as_po())?;
        }
        let closure = sum.sub(&PseudoObservable::identity(dim)?)?.max_norm();
        if closure > tol.idempotent {
            return Err(AlgebraError::InvalidMatrix {
                reason: format!("projector basis closure residual {:.3e}", as_f64(closure)),
            });
        }
        Ok(ProjectorBasis { dim, elements })
    }

    /// The standard basis of coordinate projectors `diag(0,…,1,…,0)`.
    pub fn standard(dim: usize, tol: &ToleranceConfig<T>) -> Result<Self> {
        let mut elements = Vec::with_capacity(dim);
        for j in 0..dim {
            let mut values = vec![T::zero(); dim];
            values[j] = T::one();
            let po = PseudoObservable::diagonal(&values)?;
            elements.push(Projector::new(po, tol)?);
        }
        ProjectorBasis::new(elements, tol)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Projector<T>] {
        &self.elements
    }

    pub fn element(&self, j: usize) -> Result<&Projector<T>> {
        self.elements.get(j).ok_or(AlgebraError::IndexError {
            index: j,
            dim: self.elements.len(),
        })
    }

    /// Whether every element has rank 1.
    pub fn is_all_elementary(&self, tol: &ToleranceConfig<T>) -> bool {
        self.elements
            .iter()
            .all(|e| e.is_elementary(tol).unwrap_or(false))
    }

    /// Errors with the first offending element when not all-elementary.
    pub fn require_elementary(&self, tol: &ToleranceConfig<T>) -> Result<()> {
        for (index, e) in self.elements.iter().enumerate() {
            if !e.is_elementary(tol)? {
                return Err(AlgebraError::NotElementaryBasis {
                    index,
                    trace: as_f64(e.trace().re),
                });
            }
        }
        Ok(())
    }

    /// Worst pairwise product norm; zero for an exactly exclusive basis.
    pub fn exclusivity_residual(&self) -> Result<T> {
        let mut worst = T::zero();
        for (j, ej) in self.elements.iter().enumerate() {
            for ek in self.elements.iter().skip(j + 1) {
                let n = ej.mul(ek.as_po())?.max_norm();
                if n > worst {
                    worst = n;
                }
            }
        }
        Ok(worst)
    }

    /// Max-entry norm of `Σ_j I_j - 1`.
    pub fn closure_residual(&self) -> Result<T> {
        let mut sum = PseudoObservable::zeros(self.dim)?;
        for e in &self.elements {
            sum = sum.add(e.as_po())?;
        }
        Ok(sum
            .sub(&PseudoObservable::identity(self.dim)?)?
            .max_norm())
    }

    /// Greedy 1-to-1 matching of `self`'s elements onto `other`'s by
    /// maximum trace overlap; ties break toward the smaller index.
    pub fn match_by_overlap(&self, other: &ProjectorBasis<T>) -> Result<Vec<usize>> {
        if self.len() != other.len() {
            return Err(AlgebraError::LengthMismatch {
                expected: self.len(),
                got: other.len(),
            });
        }
        let mut taken = vec![false; other.len()];
        let mut assignment = Vec::with_capacity(self.len());
        for mine in &self.elements {
            let mut best: Option<(usize, T)> = None;
            for (k, theirs) in other.elements.iter().enumerate() {
                if taken[k] {
                    continue;
                }
                let overlap = mine.mul(theirs.as_po())?.trace().re;
                match best {
                    Some((_, score)) if overlap <= score => {}
                    _ => best = Some((k, overlap)),
                }
            }
            let (k, _) = best.expect("lengths match, one slot must be free");
            taken[k] = true;
            assignment.push(k);
        }
        Ok(assignment)
    }
}
