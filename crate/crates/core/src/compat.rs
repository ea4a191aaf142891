//! Commutator calculus, the compatibility test, joint refinement of
//! projector bases, complete sets of compatible observables, and functional
//! expression over a complete set.

use num_complex::Complex;

use crate::eigen::hermitian_eigen;
use crate::error::{AlgebraError, Result};
use crate::projector::{projector_residual, Projector, ProjectorBasis};
use crate::pseudo::{Observable, PseudoObservable};
use crate::scalar::{as_f64, RealScalar};
use crate::tolerance::ToleranceConfig;

/// `[A, B] = AB - BA`.
pub fn commutator<T: RealScalar>(
    a: &PseudoObservable<T>,
    b: &PseudoObservable<T>,
) -> Result<PseudoObservable<T>> {
    a.mul(b)?.sub(&b.mul(a)?)
}

/// Commutator norm threshold scaled to the operand sizes.
fn commutation_bound<T: RealScalar>(
    a: &PseudoObservable<T>,
    b: &PseudoObservable<T>,
    tol: &ToleranceConfig<T>,
) -> T {
    tol.zero * (T::one() + a.max_norm() * b.max_norm())
}

/// Whether two observables commute, hence are compatible.
pub fn are_compatible<T: RealScalar>(
    a: &Observable<T>,
    b: &Observable<T>,
    tol: &ToleranceConfig<T>,
) -> Result<bool> {
    let comm = commutator(a.as_po(), b.as_po())?;
    Ok(comm.max_norm() <= commutation_bound(a.as_po(), b.as_po(), tol))
}

/// The observable `Im(AB) = (AB - BA)/(2i)` quantifying incompatibility.
///
/// `commutator_over_i` carries the alternative normalization `[A,B]/i`,
/// which differs from the definitional form by a factor of two.
#[derive(Debug, Clone)]
pub struct IncompatibilityReport<T> {
    pub measure: Observable<T>,
    pub commutator_over_i: Observable<T>,
}

pub fn incompatibility_measure<T: RealScalar>(
    a: &Observable<T>,
    b: &Observable<T>,
) -> Result<IncompatibilityReport<T>> {
    let product = a.mul(b.as_po())?;
    let measure = product.imag_part();
    let over_i = commutator(a.as_po(), b.as_po())?
        .scale(Complex::new(T::zero(), -T::one()));
    Ok(IncompatibilityReport {
        measure,
        commutator_over_i: Observable::new_unchecked(over_i.real_part().into_po()),
    })
}

/// Snaps a drifted near-projector back onto the projector manifold by
/// rounding its eigenvalues to `{0, 1}`.
pub(crate) fn nearest_projector<T: RealScalar>(
    o: &Observable<T>,
    tol: &ToleranceConfig<T>,
) -> Result<Projector<T>> {
    let eig = hermitian_eigen(o.as_po())?;
    let half = T::one() / (T::one() + T::one());
    let mut sum = PseudoObservable::zeros(o.dim())?;
    for (value, vector) in eig.values.iter().zip(&eig.vectors) {
        if *value > half {
            sum = sum.add(&PseudoObservable::outer(vector)?)?;
        }
    }
    Projector::new(sum, tol)
}

fn require_pairwise_compatible<T: RealScalar>(
    os: &[Observable<T>],
    tol: &ToleranceConfig<T>,
) -> Result<()> {
    for (i, a) in os.iter().enumerate() {
        for (j, b) in os.iter().enumerate().skip(i + 1) {
            if a.dim() != b.dim() {
                return Err(AlgebraError::DimensionMismatch {
                    left: a.dim(),
                    right: b.dim(),
                });
            }
            let comm = commutator(a.as_po(), b.as_po())?.max_norm();
            if comm > commutation_bound(a.as_po(), b.as_po(), tol) {
                return Err(AlgebraError::IncompatibleObservables {
                    left: a.display_label(&format!("#{i}")),
                    right: b.display_label(&format!("#{j}")),
                    commutator_norm: as_f64(comm),
                });
            }
        }
    }
    Ok(())
}

/// Refines the associated bases of pairwise compatible observables into one
/// projector basis on which every input is diagonal.
///
/// Simultaneous block diagonalization: blocks are refined
/// observable-by-observable by diagonalizing each observable restricted to
/// the current block subspace. Cross-block orthogonality then stays at
/// machine scale even when eigenvalues nearly collide, which direct
/// products of global eigenprojectors cannot guarantee.
pub fn joint_refine<T: RealScalar>(
    os: &[Observable<T>],
    tol: &ToleranceConfig<T>,
) -> Result<ProjectorBasis<T>> {
    let first = os.first().ok_or_else(|| AlgebraError::InvalidMatrix {
        reason: "joint refinement needs at least one observable".into(),
    })?;
    require_pairwise_compatible(os, tol)?;

    let dim = first.dim();
    let identity = Projector::new(PseudoObservable::identity(dim)?, tol)?;
    let mut blocks = vec![identity];
    for o in os {
        let mut refined = Vec::new();
        for block in &blocks {
            refined.extend(split_block(o, block, tol)?);
        }
        blocks = refined;
    }
    ProjectorBasis::new(blocks, tol)
}

/// Splits one block along the spectrum of `o` restricted to its range.
fn split_block<T: RealScalar>(
    o: &Observable<T>,
    block: &Projector<T>,
    tol: &ToleranceConfig<T>,
) -> Result<Vec<Projector<T>>> {
    let dim = block.dim();
    let rank = block.rank();
    if rank <= 1 {
        return Ok(vec![block.clone()]);
    }

    // Orthonormal frame of the block's range.
    let eig = crate::eigen::hermitian_eigen(block.as_po())?;
    let half = T::one() / (T::one() + T::one());
    let frame: Vec<&Vec<crate::scalar::Scalar<T>>> = eig
        .values
        .iter()
        .zip(&eig.vectors)
        .filter(|(value, _)| **value > half)
        .map(|(_, vector)| vector)
        .collect();
    if frame.len() != rank {
        return Err(AlgebraError::NumericalDegeneracy {
            detail: format!("block of rank {rank} exposed {} range vectors", frame.len()),
        });
    }

    // Restriction m = V†·O·V on the frame.
    let mut restricted = PseudoObservable::zeros(rank)?;
    for a in 0..rank {
        for b in 0..rank {
            let mut acc = Complex::new(T::zero(), T::zero());
            for row in 0..dim {
                let mut ov = Complex::new(T::zero(), T::zero());
                for (col, weight) in frame[b].iter().enumerate() {
                    ov += o.at(row, col) * *weight;
                }
                acc += frame[a][row].conj() * ov;
            }
            restricted.set(a, b, acc);
        }
    }

    let sub = crate::eigen::hermitian_eigen(&restricted)?;
    let radius = sub.values.iter().map(|v| v.abs()).fold(T::zero(), T::max);
    let gap = tol.cluster * (T::one() + radius);

    let mut pieces = Vec::new();
    let mut previous: Option<T> = None;
    for (value, small) in sub.values.iter().zip(&sub.vectors) {
        // Lift the restricted eigenvector back to the full space.
        let mut lifted = vec![Complex::new(T::zero(), T::zero()); dim];
        for (a, weight) in small.iter().enumerate() {
            for row in 0..dim {
                lifted[row] += frame[a][row] * *weight;
            }
        }
        let outer = PseudoObservable::outer(&lifted)?;
        match previous {
            Some(last) if *value - last <= gap => {
                let current: &mut PseudoObservable<T> = pieces.last_mut().expect("cluster open");
                *current = current.add(&outer)?;
            }
            _ => pieces.push(outer),
        }
        previous = Some(*value);
    }

    pieces
        .into_iter()
        .map(|sum| {
            let symmetrized = sum.real_part();
            if projector_residual(symmetrized.as_po()) > tol.idempotent {
                nearest_projector(&symmetrized, tol)
            } else {
                Projector::new(symmetrized.into_po(), tol)
            }
        })
        .collect()
}

/// Pairwise commuting observables together with the all-elementary basis
/// they individuate and the coefficient tuple labelling each projector.
#[derive(Debug, Clone)]
pub struct CompleteSet<T> {
    observables: Vec<Observable<T>>,
    basis: ProjectorBasis<T>,
    /// `labels[j][r]` is the coefficient of observable `r` on projector `j`.
    labels: Vec<Vec<T>>,
}

impl<T: RealScalar> CompleteSet<T> {
    pub fn observables(&self) -> &[Observable<T>] {
        &self.observables
    }

    pub fn basis(&self) -> &ProjectorBasis<T> {
        &self.basis
    }

    pub fn labels(&self) -> &[Vec<T>] {
        &self.labels
    }

    /// Worst reconstruction residual `‖O_r - Σ_j o_rj·I_j‖` over the set.
    pub fn reconstruction_residual(&self) -> Result<T> {
        let mut worst = T::zero();
        for (r, o) in self.observables.iter().enumerate() {
            let mut sum = PseudoObservable::zeros(o.dim())?;
            for (j, p) in self.basis.elements().iter().enumerate() {
                sum = sum.add(&p.scale(Complex::new(self.labels[j][r], T::zero())))?;
            }
            let res = sum.distance(o.as_po())?;
            if res > worst {
                worst = res;
            }
        }
        Ok(worst)
    }
}

/// A refinement that stopped short of elementary projectors: the offending
/// blocks and their ranks, reported as traces.
#[derive(Debug, Clone)]
pub struct IncompleteReport<T> {
    pub basis: ProjectorBasis<T>,
    /// `(projector index, trace)` for every non-elementary projector.
    pub non_elementary: Vec<(usize, T)>,
}

/// Either a complete set or the report describing why the inputs fall
/// short; the latter is a legitimate outcome, not an error.
#[derive(Debug, Clone)]
pub enum CompleteSetOutcome<T> {
    Complete(CompleteSet<T>),
    Incomplete(IncompleteReport<T>),
}

/// Runs the joint refinement and, when every resulting projector is
/// elementary, labels the basis with the observables' coefficient tuples.
pub fn build_complete_set<T: RealScalar>(
    os: &[Observable<T>],
    tol: &ToleranceConfig<T>,
) -> Result<CompleteSetOutcome<T>> {
    let basis = joint_refine(os, tol)?;

    let mut non_elementary = Vec::new();
    for (index, p) in basis.elements().iter().enumerate() {
        if !p.is_elementary(tol)? {
            non_elementary.push((index, p.trace().re));
        }
    }
    if !non_elementary.is_empty() {
        return Ok(CompleteSetOutcome::Incomplete(IncompleteReport {
            basis,
            non_elementary,
        }));
    }

    let mut labels = Vec::with_capacity(basis.len());
    for p in basis.elements() {
        let weight = p.trace().re;
        let tuple: Result<Vec<T>> = os
            .iter()
            .map(|o| Ok(o.mul(p.as_po())?.trace().re / weight))
            .collect();
        labels.push(tuple?);
    }

    // Distinct projectors must carry distinct coefficient tuples.
    for j in 0..labels.len() {
        for k in (j + 1)..labels.len() {
            let distinct = labels[j]
                .iter()
                .zip(&labels[k])
                .any(|(a, b)| (*a - *b).abs() > tol.cluster);
            if !distinct {
                return Err(AlgebraError::NumericalDegeneracy {
                    detail: format!("coefficient tuples {j} and {k} coincide"),
                });
            }
        }
    }

    Ok(CompleteSetOutcome::Complete(CompleteSet {
        observables: os.to_vec(),
        basis,
        labels,
    }))
}

/// Map from coefficient tuples of a complete set to the components of a
/// compatible observable.
#[derive(Debug, Clone)]
pub struct FunctionTable<T> {
    /// `(tuple, value)` pairs, one per basis projector, in basis order.
    pub entries: Vec<(Vec<T>, T)>,
    /// Max-entry norm of `A - Σ_j a_j·I_j`.
    pub residual: T,
}

/// Expresses an observable commuting with a complete set's basis as a
/// function of the set: the table `o_j ↦ a_j` with `a_j` read off traces.
pub fn express_as_function<T: RealScalar>(
    a: &Observable<T>,
    cs: &CompleteSet<T>,
    tol: &ToleranceConfig<T>,
) -> Result<FunctionTable<T>> {
    let mut entries = Vec::with_capacity(cs.basis().len());
    let mut sum = PseudoObservable::zeros(a.dim())?;
    for (j, p) in cs.basis().elements().iter().enumerate() {
        let comm = commutator(a.as_po(), p.as_po())?.max_norm();
        if comm > commutation_bound(a.as_po(), p.as_po(), tol) {
            return Err(AlgebraError::IncompatibleObservables {
                left: a.display_label("observable"),
                right: p.display_label(&format!("basis[{j}]")),
                commutator_norm: as_f64(comm),
            });
        }
        let value = a.mul(p.as_po())?.trace().re / p.trace().re;
        sum = sum.add(&p.scale(Complex::new(value, T::zero())))?;
        entries.push((cs.labels()[j].clone(), value));
    }
    let residual = sum.distance(a.as_po())?;
    Ok(FunctionTable { entries, residual })
}
