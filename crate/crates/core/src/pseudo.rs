//! The pseudo-observable ring: complex square matrices under sum, product
//! and Hermitian transposition, together with the observables (the fixed
//! points of transposition).

use std::fmt;
use std::ops::Index;

use crate::error::{AlgebraError, Result};
use crate::scalar::{as_f64, RealScalar, Scalar};
use crate::tolerance::ToleranceConfig;

/// Element of the pseudo-observable ring: a `dim`×`dim` complex matrix,
/// optionally labelled for reports.
///
/// Entries are stored row-major and are always finite.
#[derive(Clone)]
pub struct PseudoObservable<T> {
    dim: usize,
    entries: Vec<Scalar<T>>,
    label: Option<String>,
}

impl<T: RealScalar> PseudoObservable<T> {
    /// The zero matrix.
    pub fn zeros(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(AlgebraError::InvalidMatrix {
                reason: "dimension must be at least 1".into(),
            });
        }
        Ok(PseudoObservable {
            dim,
            entries: vec![Scalar::new(T::zero(), T::zero()); dim * dim],
            label: None,
        })
    }

    /// The identity matrix (the unit observable).
    pub fn identity(dim: usize) -> Result<Self> {
        let mut m = Self::zeros(dim)?;
        for i in 0..dim {
            m.entries[i * dim + i] = Scalar::new(T::one(), T::zero());
        }
        Ok(m)
    }

    /// A complex constant `γ·1`.
    pub fn constant(dim: usize, gamma: Scalar<T>) -> Result<Self> {
        let mut m = Self::zeros(dim)?;
        for i in 0..dim {
            m.entries[i * dim + i] = gamma;
        }
        m.check_finite()?;
        Ok(m)
    }

    /// Builds from a row-major entry vector of length `dim²`.
    pub fn from_entries(dim: usize, entries: Vec<Scalar<T>>) -> Result<Self> {
        if dim == 0 {
            return Err(AlgebraError::InvalidMatrix {
                reason: "dimension must be at least 1".into(),
            });
        }
        if entries.len() != dim * dim {
            return Err(AlgebraError::InvalidMatrix {
                reason: format!("expected {} entries, got {}", dim * dim, entries.len()),
            });
        }
        let m = PseudoObservable {
            dim,
            entries,
            label: None,
        };
        m.check_finite()?;
        Ok(m)
    }

    /// Builds from nested rows, rejecting jagged input.
    pub fn from_rows(rows: Vec<Vec<Scalar<T>>>) -> Result<Self> {
        let dim = rows.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for row in &rows {
            if row.len() != dim {
                return Err(AlgebraError::InvalidMatrix {
                    reason: format!("row of length {} in a {}-dimensional matrix", row.len(), dim),
                });
            }
            entries.extend_from_slice(row);
        }
        Self::from_entries(dim, entries)
    }

    /// Builds a real matrix from nested rows.
    pub fn from_real_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let complex = rows
            .into_iter()
            .map(|r| r.into_iter().map(|x| Scalar::new(x, T::zero())).collect())
            .collect();
        Self::from_rows(complex)
    }

    /// Diagonal matrix from real diagonal values.
    pub fn diagonal(values: &[T]) -> Result<Self> {
        let dim = values.len();
        let mut m = Self::zeros(dim)?;
        for (i, &v) in values.iter().enumerate() {
            m.entries[i * dim + i] = Scalar::new(v, T::zero());
        }
        m.check_finite()?;
        Ok(m)
    }

    /// Rank-1 matrix `v·v†`.
    pub fn outer(v: &[Scalar<T>]) -> Result<Self> {
        let dim = v.len();
        let mut m = Self::zeros(dim)?;
        for j in 0..dim {
            for k in 0..dim {
                m.entries[j * dim + k] = v[j] * v[k].conj();
            }
        }
        m.check_finite()?;
        Ok(m)
    }

    /// Pauli X on a two-dimensional system.
    pub fn pauli_x() -> Self {
        Self::from_real_rows(vec![
            vec![T::zero(), T::one()],
            vec![T::one(), T::zero()],
        ])
        .expect("static entries")
    }

    /// Pauli Y on a two-dimensional system.
    pub fn pauli_y() -> Self {
        let i = Scalar::new(T::zero(), T::one());
        let z = Scalar::new(T::zero(), T::zero());
        Self::from_rows(vec![vec![z, -i], vec![i, z]]).expect("static entries")
    }

    /// Pauli Z on a two-dimensional system.
    pub fn pauli_z() -> Self {
        Self::from_real_rows(vec![
            vec![T::one(), T::zero()],
            vec![T::zero(), -T::one()],
        ])
        .expect("static entries")
    }

    fn check_finite(&self) -> Result<()> {
        for e in &self.entries {
            if !e.re.is_finite() || !e.im.is_finite() {
                return Err(AlgebraError::InvalidMatrix {
                    reason: "non-finite entry".into(),
                });
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn set_label(&mut self, label: Option<String>) {
        self.label = label;
    }

    /// Label if present, otherwise the given fallback.
    pub fn display_label(&self, fallback: &str) -> String {
        self.label.clone().unwrap_or_else(|| fallback.to_string())
    }

    pub fn at(&self, row: usize, col: usize) -> Scalar<T> {
        self.entries[row * self.dim + col]
    }

    pub fn entries(&self) -> &[Scalar<T>] {
        &self.entries
    }

    pub(crate) fn set(&mut self, row: usize, col: usize, value: Scalar<T>) {
        self.entries[row * self.dim + col] = value;
    }

    fn require_same_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(AlgebraError::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        Ok(())
    }

    /// Hermitian transposition `P†` (conjugate transpose).
    pub fn adjoint(&self) -> Self {
        let d = self.dim;
        let mut entries = vec![Scalar::new(T::zero(), T::zero()); d * d];
        for r in 0..d {
            for c in 0..d {
                entries[c * d + r] = self.entries[r * d + c].conj();
            }
        }
        PseudoObservable {
            dim: d,
            entries,
            label: None,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.require_same_dim(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a + b)
            .collect();
        Ok(PseudoObservable {
            dim: self.dim,
            entries,
            label: None,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.require_same_dim(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a - b)
            .collect();
        Ok(PseudoObservable {
            dim: self.dim,
            entries,
            label: None,
        })
    }

    /// Ring product; non-commutative in general.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.require_same_dim(other)?;
        let d = self.dim;
        let mut entries = vec![Scalar::new(T::zero(), T::zero()); d * d];
        for r in 0..d {
            for k in 0..d {
                let a = self.entries[r * d + k];
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                for c in 0..d {
                    entries[r * d + c] += a * other.entries[k * d + c];
                }
            }
        }
        Ok(PseudoObservable {
            dim: d,
            entries,
            label: None,
        })
    }

    /// Scalar multiple `γ·P`.
    pub fn scale(&self, gamma: Scalar<T>) -> Self {
        PseudoObservable {
            dim: self.dim,
            entries: self.entries.iter().map(|e| gamma * e).collect(),
            label: None,
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(Scalar::new(-T::one(), T::zero()))
    }

    /// Max-entry norm: the largest entry modulus.
    pub fn max_norm(&self) -> T {
        let mut worst = T::zero();
        for e in &self.entries {
            let n = e.norm_sqr();
            if n > worst {
                worst = n;
            }
        }
        worst.sqrt()
    }

    pub fn frobenius_norm(&self) -> T {
        self.entries
            .iter()
            .map(|e| e.norm_sqr())
            .fold(T::zero(), |acc, x| acc + x)
            .sqrt()
    }

    pub fn trace(&self) -> Scalar<T> {
        let mut t = Scalar::new(T::zero(), T::zero());
        for i in 0..self.dim {
            t += self.entries[i * self.dim + i];
        }
        t
    }

    /// Max-entry norm of the difference; errors on dimension mismatch.
    pub fn distance(&self, other: &Self) -> Result<T> {
        Ok(self.sub(other)?.max_norm())
    }

    /// Max-entry norm of `P - P†`; zero exactly when `P` is an observable.
    pub fn hermiticity_residual(&self) -> T {
        let d = self.dim;
        let mut worst = T::zero();
        for r in 0..d {
            for c in r..d {
                let diff = self.entries[r * d + c] - self.entries[c * d + r].conj();
                let n = diff.norm_sqr();
                if n > worst {
                    worst = n;
                }
            }
        }
        worst.sqrt()
    }

    /// Whether `P† = P` within `tol.hermitian`.
    pub fn is_observable(&self, tol: &ToleranceConfig<T>) -> bool {
        self.hermiticity_residual() <= tol.hermitian
    }

    /// Symmetric part `(P + P†)/2`, always an observable.
    pub fn real_part(&self) -> Observable<T> {
        let half = Scalar::new(real_half(), T::zero());
        let sym = self
            .add(&self.adjoint())
            .expect("same dimension")
            .scale(half);
        Observable::new_unchecked(sym)
    }

    /// Imaginary part `-i·(P - P†)/2`, always an observable.
    pub fn imag_part(&self) -> Observable<T> {
        let half_over_i = Scalar::new(T::zero(), -real_half::<T>());
        let asym = self
            .sub(&self.adjoint())
            .expect("same dimension")
            .scale(half_over_i);
        Observable::new_unchecked(asym)
    }

    /// Evaluates the six transposition axioms on the pair `(P, Q)`.
    ///
    /// Positivity and definiteness are evaluated on `P` alone; the binary
    /// axioms use both arguments.
    pub fn check_transposition_axioms(
        &self,
        other: &Self,
        tol: &ToleranceConfig<T>,
    ) -> Result<TranspositionReport<T>> {
        self.require_same_dim(other)?;

        let involution_res = self.adjoint().adjoint().sub(self)?.max_norm();

        // Fixed points of transposition are exactly the observables: the
        // symmetric part must always be a fixed point, and the Hermitian
        // test must agree with the residual it is defined by.
        let sym_res = self.real_part().hermiticity_residual();
        let fixed_consistent =
            self.is_observable(tol) == (self.hermiticity_residual() <= tol.hermitian);
        let additivity_res = self
            .add(other)?
            .adjoint()
            .sub(&self.adjoint().add(&other.adjoint())?)?
            .max_norm();
        let antimult_res = self
            .mul(other)?
            .adjoint()
            .sub(&other.adjoint().mul(&self.adjoint())?)?
            .max_norm();

        let gram = self.mul(&self.adjoint())?;
        let eigen = crate::eigen::hermitian_eigen(&gram)?;
        let min_eig = eigen.values.first().copied().unwrap_or_else(T::zero);
        let positivity_res = if min_eig < T::zero() { -min_eig } else { T::zero() };

        let p_norm = self.max_norm();
        let gram_norm = gram.max_norm();
        let zero_p = p_norm <= tol.zero;
        let zero_gram = gram_norm <= tol.zero;
        let definite_pass = (!zero_p || zero_gram)
            && (!zero_gram || p_norm <= (tol.zero * T::from_usize(self.dim).unwrap()).sqrt());
        let definite_res = if zero_gram { p_norm } else { T::zero() };

        Ok(TranspositionReport {
            involution: AxiomCheck {
                pass: involution_res <= tol.zero,
                residual: involution_res,
            },
            observable_iff_fixed: AxiomCheck {
                pass: sym_res <= tol.hermitian && fixed_consistent,
                residual: sym_res,
            },
            additivity: AxiomCheck {
                pass: additivity_res <= tol.zero,
                residual: additivity_res,
            },
            antimultiplicativity: AxiomCheck {
                pass: antimult_res <= tol.zero,
                residual: antimult_res,
            },
            positivity: AxiomCheck {
                pass: min_eig >= -tol.zero,
                residual: positivity_res,
            },
            definiteness: AxiomCheck {
                pass: definite_pass,
                residual: definite_res,
            },
        })
    }
}

fn real_half<T: RealScalar>() -> T {
    T::one() / (T::one() + T::one())
}

impl<T: PartialEq> PartialEq for PseudoObservable<T> {
    /// Entrywise equality; labels are metadata and do not participate.
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.entries == other.entries
    }
}

impl<T: RealScalar> Index<(usize, usize)> for PseudoObservable<T> {
    type Output = Scalar<T>;

    fn index(&self, (row, col): (usize, usize)) -> &Scalar<T> {
        &self.entries[row * self.dim + col]
    }
}

impl<T: fmt::Debug> fmt::Debug for PseudoObservable<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "PseudoObservable(dim={}, label={:?})",
            self.dim, self.label
        )?;
        for r in 0..self.dim {
            write!(f, "  [")?;
            for c in 0..self.dim {
                let e = &self.entries[r * self.dim + c];
                write!(f, " {:?}{:+?}i", e.re, e.im)?;
            }
            writeln!(f, " ]")?;
        }
        Ok(())
    }
}

/// Outcome of a single transposition-axiom check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxiomCheck<T> {
    pub pass: bool,
    pub residual: T,
}

/// The six transposition axioms as checkable predicates.
#[derive(Debug, Clone, PartialEq)]
pub struct TranspositionReport<T> {
    pub involution: AxiomCheck<T>,
    pub observable_iff_fixed: AxiomCheck<T>,
    pub additivity: AxiomCheck<T>,
    pub antimultiplicativity: AxiomCheck<T>,
    pub positivity: AxiomCheck<T>,
    pub definiteness: AxiomCheck<T>,
}

impl<T: RealScalar> TranspositionReport<T> {
    pub fn all_pass(&self) -> bool {
        self.involution.pass
            && self.observable_iff_fixed.pass
            && self.additivity.pass
            && self.antimultiplicativity.pass
            && self.positivity.pass
            && self.definiteness.pass
    }
}

/// A pseudo-observable fixed by Hermitian transposition.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable<T>(PseudoObservable<T>);

impl<T: RealScalar> Observable<T> {
    /// Validates `‖P - P†‖ ≤ tol.hermitian` and wraps.
    pub fn new(po: PseudoObservable<T>, tol: &ToleranceConfig<T>) -> Result<Self> {
        let residual = po.hermiticity_residual();
        if residual > tol.hermitian {
            return Err(AlgebraError::NotHermitian {
                residual: as_f64(residual),
            });
        }
        Ok(Observable(po))
    }

    /// Wraps a matrix known to be Hermitian by construction.
    pub(crate) fn new_unchecked(po: PseudoObservable<T>) -> Self {
        Observable(po)
    }

    pub fn as_po(&self) -> &PseudoObservable<T> {
        &self.0
    }

    pub fn into_po(self) -> PseudoObservable<T> {
        self.0
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.0 = self.0.with_label(label);
        self
    }
}

impl<T: RealScalar> std::ops::Deref for Observable<T> {
    type Target = PseudoObservable<T>;

    fn deref(&self) -> &PseudoObservable<T> {
        &self.0
    }
}
