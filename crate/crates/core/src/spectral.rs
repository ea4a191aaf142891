//! Spectral decomposition of observables into associated projector bases,
//! functions of one or several compatible observables, and multiplicity
//! accounting.

use num_complex::Complex;

use crate::compat;
use crate::eigen::hermitian_eigen;
use crate::error::{AlgebraError, Result};
use crate::projector::{Projector, ProjectorBasis};
use crate::pseudo::{Observable, PseudoObservable};
use crate::scalar::{as_f64, real, RealScalar};
use crate::tolerance::ToleranceConfig;

/// An observable written as `Σ_j o_j·I_j` over its associated projector
/// basis, coefficients strictly ascending.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition<T> {
    source: Observable<T>,
    coefficients: Vec<T>,
    basis: ProjectorBasis<T>,
}

/// Decomposes an observable into distinct spectral coefficients and their
/// eigenprojectors.
///
/// Nearby eigenvalues are merged by single-linkage chaining with gap
/// threshold `tol.cluster·(1 + spectral radius)`; each coefficient is the
/// mean of its cluster.
pub fn decompose<T: RealScalar>(
    o: &Observable<T>,
    tol: &ToleranceConfig<T>,
) -> Result<SpectralDecomposition<T>> {
    let eig = hermitian_eigen(o.as_po())?;
    let radius = eig
        .values
        .iter()
        .map(|v| v.abs())
        .fold(T::zero(), T::max);
    let gap = tol.cluster * (T::one() + radius);

    let mut clusters: Vec<(Vec<T>, PseudoObservable<T>)> = Vec::new();
    let mut previous: Option<T> = None;
    for (value, vector) in eig.values.iter().zip(&eig.vectors) {
        let outer = PseudoObservable::outer(vector)?;
        match previous {
            Some(last) if *value - last <= gap => {
                let current = clusters.last_mut().expect("cluster exists");
                current.0.push(*value);
                current.1 = current.1.add(&outer)?;
            }
            _ => clusters.push((vec![*value], outer)),
        }
        previous = Some(*value);
    }

    let mut coefficients = Vec::with_capacity(clusters.len());
    let mut projectors = Vec::with_capacity(clusters.len());
    for (values, sum) in clusters {
        let count = T::from_usize(values.len()).unwrap();
        let mean = values.into_iter().fold(T::zero(), |a, b| a + b) / count;
        coefficients.push(mean);
        projectors.push(Projector::new(sum, tol)?);
    }

    let basis = ProjectorBasis::new(projectors, tol)?;
    let decomposition = SpectralDecomposition {
        source: o.clone(),
        coefficients,
        basis,
    };

    // Reconstruction bound pinned for f64; relaxed only when the scalar
    // type itself cannot reach it.
    let max_coeff = decomposition
        .coefficients
        .iter()
        .map(|c| c.abs())
        .fold(T::zero(), T::max);
    let bound = real::<T>(1e-10).max(T::epsilon() * real(1e3)) * (T::one() + max_coeff);
    let residual = decomposition.reconstruction_residual()?;
    if residual > bound {
        return Err(AlgebraError::NumericalDegeneracy {
            detail: format!("spectral reconstruction residual {:.3e}", as_f64(residual)),
        });
    }
    Ok(decomposition)
}

impl<T: RealScalar> SpectralDecomposition<T> {
    pub fn source(&self) -> &Observable<T> {
        &self.source
    }

    /// Distinct spectral coefficients, ascending.
    pub fn coefficients(&self) -> &[T] {
        &self.coefficients
    }

    pub fn basis(&self) -> &ProjectorBasis<T> {
        &self.basis
    }

    pub fn projectors(&self) -> &[Projector<T>] {
        self.basis.elements()
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// `Σ_j o_j·I_j`.
    pub fn reconstruct(&self) -> Result<Observable<T>> {
        let mut sum = PseudoObservable::zeros(self.source.dim())?;
        for (c, p) in self.coefficients.iter().zip(self.basis.elements()) {
            sum = sum.add(&p.scale(Complex::new(*c, T::zero())))?;
        }
        Ok(Observable::new_unchecked(sum))
    }

    /// Max-entry norm of `source - Σ_j o_j·I_j`.
    pub fn reconstruction_residual(&self) -> Result<T> {
        self.reconstruct()?.distance(self.source.as_po())
    }

    /// Worst residual of `O·I_j = o_j·I_j` across coefficients.
    pub fn eigen_relation_residual(&self) -> Result<T> {
        let mut worst = T::zero();
        for (c, p) in self.coefficients.iter().zip(self.basis.elements()) {
            let lhs = self.source.mul(p.as_po())?;
            let rhs = p.scale(Complex::new(*c, T::zero()));
            let r = lhs.distance(&rhs)?;
            if r > worst {
                worst = r;
            }
        }
        Ok(worst)
    }
}

/// `f(O) = Σ_j f(o_j)·I_j` over the associated basis.
pub fn apply_function<T: RealScalar>(
    o: &Observable<T>,
    f: impl Fn(T) -> T,
    tol: &ToleranceConfig<T>,
) -> Result<Observable<T>> {
    let sd = decompose(o, tol)?;
    let mut sum = PseudoObservable::zeros(o.dim())?;
    for (c, p) in sd.coefficients().iter().zip(sd.projectors()) {
        let y = f(*c);
        if !y.is_finite() {
            return Err(AlgebraError::FunctionDomainError {
                input: as_f64(*c),
            });
        }
        sum = sum.add(&p.scale(Complex::new(y, T::zero())))?;
    }
    Ok(Observable::new_unchecked(sum))
}

/// `f(O₁,…,O_r) = Σ_j f(o_j)·I_j` over a joint refinement of the inputs.
pub fn apply_joint_function<T: RealScalar>(
    os: &[Observable<T>],
    f: impl Fn(&[T]) -> T,
    tol: &ToleranceConfig<T>,
) -> Result<Observable<T>> {
    let basis = compat::joint_refine(os, tol)?;
    let dim = basis.dim();
    let mut sum = PseudoObservable::zeros(dim)?;
    let mut labels = vec![T::zero(); os.len()];
    for p in basis.elements() {
        let weight = p.trace().re;
        for (r, o) in os.iter().enumerate() {
            labels[r] = o.mul(p.as_po())?.trace().re / weight;
        }
        let y = f(&labels);
        if !y.is_finite() {
            return Err(AlgebraError::FunctionDomainError {
                input: as_f64(labels.first().copied().unwrap_or_else(T::zero)),
            });
        }
        sum = sum.add(&p.scale(Complex::new(y, T::zero())))?;
    }
    Ok(Observable::new_unchecked(sum))
}

/// Number of elementary projectors on which `O` has component `value`.
///
/// The basis must be all-elementary and commute with `O`; the count equals
/// `trace(I_{O=value})` whenever `value` is in the spectrum.
pub fn multiplicity<T: RealScalar>(
    o: &Observable<T>,
    value: T,
    basis: &ProjectorBasis<T>,
    tol: &ToleranceConfig<T>,
) -> Result<usize> {
    basis.require_elementary(tol)?;
    let mut count = 0;
    for p in basis.elements() {
        let comm = compat::commutator(o.as_po(), p.as_po())?.max_norm();
        if comm > tol.zero * (T::one() + o.max_norm()) {
            return Err(AlgebraError::IncompatibleObservables {
                left: o.display_label("observable"),
                right: p.display_label("basis element"),
                commutator_norm: as_f64(comm),
            });
        }
        let component = o.mul(p.as_po())?.trace().re / p.trace().re;
        if (component - value).abs() <= tol.cluster {
            count += 1;
        }
    }
    Ok(count)
}
