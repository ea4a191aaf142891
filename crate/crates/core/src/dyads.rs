//! Dyadic forms, normalized dyad bases, decomposition of pseudo-observables
//! into dyadic components, and the component-calculus isomorphism with
//! matrix rings.
//!
//! A dyad basis over an elementary projector basis `{I_j}` is a family
//! `Γ_jk` with `Γ_jj = I_j`, `Γ_kj = Γ_jk†` and `Γ_jl·Γ_l'k = δ_{l,l'}·Γ_jk`;
//! a matrix-unit system spanning the whole pseudo-observable space.

use num_complex::Complex;

use crate::error::{AlgebraError, Result};
use crate::projector::{Projector, ProjectorBasis};
use crate::pseudo::{Observable, PseudoObservable};
use crate::scalar::{as_f64, RealScalar, Scalar};
use crate::tolerance::ToleranceConfig;

/// The real component `c_j` with `I_j·C·I_j = c_j·I_j`.
pub fn projection_component<T: RealScalar>(
    c: &Observable<T>,
    p: &Projector<T>,
    tol: &ToleranceConfig<T>,
) -> Result<T> {
    if c.dim() != p.dim() {
        return Err(AlgebraError::DimensionMismatch {
            left: c.dim(),
            right: p.dim(),
        });
    }
    if !p.is_elementary(tol)? {
        return Err(AlgebraError::NotElementary {
            trace: as_f64(p.trace().re),
        });
    }
    let sandwich = p.mul(c.as_po())?.mul(p.as_po())?;
    let trace = sandwich.trace();
    if trace.im.abs() > tol.zero * (T::one() + c.max_norm()) {
        return Err(AlgebraError::NumericalDegeneracy {
            detail: format!("projection component has imaginary residue {:.3e}", as_f64(trace.im)),
        });
    }
    Ok(trace.re / p.trace().re)
}

/// The block extraction `I_j·C·I_k` between two elementary projectors.
pub fn dyadic_form<T: RealScalar>(
    left: &Projector<T>,
    core: &PseudoObservable<T>,
    right: &Projector<T>,
    tol: &ToleranceConfig<T>,
) -> Result<PseudoObservable<T>> {
    for p in [left, right] {
        if !p.is_elementary(tol)? {
            return Err(AlgebraError::NotElementary {
                trace: as_f64(p.trace().re),
            });
        }
    }
    left.mul(core)?.mul(right.as_po())
}

/// A dyadic form tagged with the indices of its projector pair.
#[derive(Debug, Clone)]
pub struct DyadicForm<T> {
    left: usize,
    right: usize,
    value: PseudoObservable<T>,
    core_label: Option<String>,
}

impl<T: RealScalar> DyadicForm<T> {
    /// Extracts `I_j·C·I_k` from an all-elementary basis.
    pub fn new(
        basis: &ProjectorBasis<T>,
        left: usize,
        right: usize,
        core: &PseudoObservable<T>,
        tol: &ToleranceConfig<T>,
    ) -> Result<Self> {
        let pj = basis.element(left)?;
        let pk = basis.element(right)?;
        let value = dyadic_form(pj, core, pk, tol)?;
        Ok(DyadicForm {
            left,
            right,
            value,
            core_label: core.label().map(str::to_string),
        })
    }

    pub fn left(&self) -> usize {
        self.left
    }

    pub fn right(&self) -> usize {
        self.right
    }

    pub fn value(&self) -> &PseudoObservable<T> {
        &self.value
    }

    pub fn core_label(&self) -> Option<&str> {
        self.core_label.as_deref()
    }
}

/// A `d×d` family of normalized dyadic forms over an elementary basis.
#[derive(Debug, Clone)]
pub struct DyadBasis<T> {
    basis: ProjectorBasis<T>,
    /// Row-major: `dyads[j*d + k]` is `Γ_jk`.
    dyads: Vec<PseudoObservable<T>>,
    basis_ref: String,
}

impl<T: RealScalar> DyadBasis<T> {
    /// Validates the dyad conditions and wraps.
    ///
    /// Conditions 1 and 2 are checked directly. Condition 3 is checked
    /// through its generating relations (block positions, `Γ_j0·Γ_0k = Γ_jk`
    /// and `Γ_0j·Γ_j0 = I_0`), which imply the full `δ_{l,l'}` law given the
    /// exclusivity of the underlying basis; the full scan is quartic in the
    /// dimension and available separately as [`DyadBasis::condition3_residual`].
    pub fn new(
        basis: ProjectorBasis<T>,
        dyads: Vec<PseudoObservable<T>>,
        tol: &ToleranceConfig<T>,
    ) -> Result<Self> {
        basis.require_elementary(tol)?;
        let d = basis.dim();
        if basis.len() != d {
            return Err(AlgebraError::InvalidMatrix {
                reason: format!("elementary basis of {} projectors in dimension {}", basis.len(), d),
            });
        }
        if dyads.len() != d * d {
            return Err(AlgebraError::LengthMismatch {
                expected: d * d,
                got: dyads.len(),
            });
        }
        for g in &dyads {
            if g.dim() != d {
                return Err(AlgebraError::DimensionMismatch {
                    left: d,
                    right: g.dim(),
                });
            }
        }

        let fail = |name: &str, residual: T| -> AlgebraError {
            AlgebraError::InvalidMatrix {
                reason: format!("dyad condition {name} violated (residual {:.3e})", as_f64(residual)),
            }
        };
        let check_bound = tol.zero * crate::scalar::real(1e2);

        // Condition 1: Γ_jj = I_j.
        for j in 0..d {
            let r = dyads[j * d + j].distance(basis.element(j)?.as_po())?;
            if r > check_bound {
                return Err(fail("1", r));
            }
        }
        // Condition 2: Γ_kj = Γ_jk†.
        for j in 0..d {
            for k in 0..d {
                let r = dyads[k * d + j].distance(&dyads[j * d + k].adjoint())?;
                if r > check_bound {
                    return Err(fail("2", r));
                }
            }
        }
        // Block positions: Γ_jk = I_j·Γ_jk·I_k.
        for j in 0..d {
            for k in 0..d {
                let g = &dyads[j * d + k];
                let boxed = basis.element(j)?.mul(g)?.mul(basis.element(k)?.as_po())?;
                let r = boxed.distance(g)?;
                if r > check_bound {
                    return Err(fail("3 (block position)", r));
                }
            }
        }
        // Generating relations for condition 3.
        for j in 0..d {
            let r = dyads[j]
                .mul(&dyads[j * d])?
                .distance(basis.element(0)?.as_po())?;
            if r > check_bound {
                return Err(fail("3 (Γ_0j·Γ_j0 = I_0)", r));
            }
            for k in 0..d {
                let r = dyads[j * d]
                    .mul(&dyads[k])?
                    .distance(&dyads[j * d + k])?;
                if r > check_bound {
                    return Err(fail("3 (Γ_j0·Γ_0k = Γ_jk)", r));
                }
            }
        }

        let basis_ref = content_hash(d, &dyads);
        Ok(DyadBasis {
            basis,
            dyads,
            basis_ref,
        })
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn basis(&self) -> &ProjectorBasis<T> {
        &self.basis
    }

    pub fn dyads(&self) -> &[PseudoObservable<T>] {
        &self.dyads
    }

    pub fn dyad(&self, j: usize, k: usize) -> Result<&PseudoObservable<T>> {
        let d = self.dim();
        if j >= d {
            return Err(AlgebraError::IndexError { index: j, dim: d });
        }
        if k >= d {
            return Err(AlgebraError::IndexError { index: k, dim: d });
        }
        Ok(&self.dyads[j * d + k])
    }

    /// Content fingerprint; component arithmetic is only defined between
    /// matrices carrying the same reference.
    pub fn basis_ref(&self) -> &str {
        &self.basis_ref
    }

    /// Worst residual of `Γ_jj = I_j`.
    pub fn condition1_residual(&self) -> Result<T> {
        let d = self.dim();
        let mut worst = T::zero();
        for j in 0..d {
            let r = self.dyads[j * d + j].distance(self.basis.element(j)?.as_po())?;
            worst = worst.max(r);
        }
        Ok(worst)
    }

    /// Worst residual of `Γ_kj = Γ_jk†`.
    pub fn condition2_residual(&self) -> Result<T> {
        let d = self.dim();
        let mut worst = T::zero();
        for j in 0..d {
            for k in 0..d {
                let r = self.dyads[k * d + j].distance(&self.dyads[j * d + k].adjoint())?;
                worst = worst.max(r);
            }
        }
        Ok(worst)
    }

    /// Worst residual of `Γ_jl·Γ_l'k = δ_{l,l'}·Γ_jk` over all index
    /// quadruples. Quartic in the dimension; intended for desk-scale checks.
    pub fn condition3_residual(&self) -> Result<T> {
        let d = self.dim();
        let mut worst = T::zero();
        for j in 0..d {
            for l in 0..d {
                for lp in 0..d {
                    for k in 0..d {
                        let product = self.dyads[j * d + l].mul(&self.dyads[lp * d + k])?;
                        let r = if l == lp {
                            product.distance(&self.dyads[j * d + k])?
                        } else {
                            product.max_norm()
                        };
                        worst = worst.max(r);
                    }
                }
            }
        }
        Ok(worst)
    }
}

/// FNV-1a over the entry bits, `f64`-normalized so the reference is stable
/// across scalar types and JSON round trips.
fn content_hash<T: RealScalar>(dim: usize, dyads: &[PseudoObservable<T>]) -> String {
    let mut hash: u64 = 0xcbf29ce484222325;
    let mut eat = |bytes: &[u8]| {
        for &b in bytes {
            hash ^= b as u64;
            hash = hash.wrapping_mul(0x100000001b3);
        }
    };
    eat(&(dim as u64).to_le_bytes());
    for g in dyads {
        for e in g.entries() {
            eat(&as_f64(e.re).to_bits().to_le_bytes());
            eat(&as_f64(e.im).to_bits().to_le_bytes());
        }
    }
    format!("{hash:016x}")
}

/// Deterministic range unit vector of an elementary projector: the largest
/// column, normalized, with its first significant entry rotated to be real
/// positive.
fn range_unit_vector<T: RealScalar>(p: &Projector<T>) -> Result<Vec<Scalar<T>>> {
    let d = p.dim();
    let mut best_col = 0;
    let mut best_norm = T::zero();
    for c in 0..d {
        let norm: T = (0..d)
            .map(|r| p.at(r, c).norm_sqr())
            .fold(T::zero(), |a, b| a + b);
        if norm > best_norm {
            best_norm = norm;
            best_col = c;
        }
    }
    if best_norm <= T::zero() {
        return Err(AlgebraError::NumericalDegeneracy {
            detail: "projector has no non-null column".into(),
        });
    }
    let scale = Complex::new(best_norm.sqrt(), T::zero());
    let mut u: Vec<Scalar<T>> = (0..d).map(|r| p.at(r, best_col) / scale).collect();

    let max_abs = u
        .iter()
        .map(|e| e.norm_sqr())
        .fold(T::zero(), T::max)
        .sqrt();
    let threshold = max_abs * crate::scalar::real(1e-6);
    let lead = u
        .iter()
        .find(|e| e.norm_sqr().sqrt() > threshold)
        .copied()
        .expect("unit vector has a significant entry");
    let phase = lead.conj() / Complex::new(lead.norm_sqr().sqrt(), T::zero());
    for e in &mut u {
        *e *= phase;
    }
    Ok(u)
}

/// Builds a dyad basis over an all-elementary projector basis.
///
/// The reference index is 0. For each `j ≠ 0` the core comes from
/// `seed_cores` (first candidate yielding a non-null form wins) or, when no
/// seeds are given, from the deterministic rank-1 default `u_j·u_0†` built
/// on phase-fixed range vectors.
pub fn build_dyad_basis<T: RealScalar>(
    basis: &ProjectorBasis<T>,
    seed_cores: Option<&[PseudoObservable<T>]>,
    tol: &ToleranceConfig<T>,
) -> Result<DyadBasis<T>> {
    basis.require_elementary(tol)?;
    let d = basis.dim();
    if basis.len() != d {
        return Err(AlgebraError::InvalidMatrix {
            reason: format!("elementary basis of {} projectors in dimension {}", basis.len(), d),
        });
    }

    let u0 = range_unit_vector(basis.element(0)?)?;
    let zero = PseudoObservable::zeros(d)?;
    let mut dyads = vec![zero; d * d];
    for j in 0..d {
        dyads[j * d + j] = basis.element(j)?.as_po().clone();
    }

    for j in 1..d {
        let pj = basis.element(j)?;
        let p0 = basis.element(0)?;
        let normalized = if let Some(seeds) = seed_cores {
            let mut found = None;
            for core in seeds {
                if core.dim() != d {
                    return Err(AlgebraError::DimensionMismatch {
                        left: d,
                        right: core.dim(),
                    });
                }
                let phi = pj.mul(core)?.mul(p0.as_po())?;
                let amplitude = phi.mul(&phi.adjoint())?.trace().re;
                if amplitude.sqrt() > tol.zero {
                    let a = amplitude.sqrt();
                    found = Some(phi.scale(Complex::new(T::one() / a, T::zero())));
                    break;
                }
            }
            found.ok_or(AlgebraError::DegenerateCore { index: j })?
        } else {
            // The default core never produces a null form: Φ = u_j·u_0†
            // exactly, already unit-normalized.
            let uj = range_unit_vector(pj)?;
            let mut phi = PseudoObservable::zeros(d)?;
            for (r, left) in uj.iter().enumerate() {
                for (c, right) in u0.iter().enumerate() {
                    phi.set(r, c, *left * right.conj());
                }
            }
            phi
        };
        dyads[j * d] = normalized;
    }
    for k in 1..d {
        dyads[k] = dyads[k * d].adjoint();
    }
    for j in 1..d {
        for k in 1..d {
            if j != k {
                dyads[j * d + k] = dyads[j * d].mul(&dyads[k])?;
            }
        }
    }

    DyadBasis::new(basis.clone(), dyads, tol)
}

/// The equivalent basis `Γ̃_jk = e^{i(ϑ_j - ϑ_k)}·Γ_jk`.
pub fn equivalent_basis<T: RealScalar>(
    db: &DyadBasis<T>,
    phases: &[T],
    tol: &ToleranceConfig<T>,
) -> Result<DyadBasis<T>> {
    let d = db.dim();
    if phases.len() != d {
        return Err(AlgebraError::LengthMismatch {
            expected: d,
            got: phases.len(),
        });
    }
    let mut dyads = Vec::with_capacity(d * d);
    for j in 0..d {
        for k in 0..d {
            let factor = Complex::from_polar(T::one(), phases[j] - phases[k]);
            dyads.push(db.dyad(j, k)?.scale(factor));
        }
    }
    DyadBasis::new(db.basis().clone(), dyads, tol)
}

/// Phase angles `ϑ_jk` with `Γ̃_jk = e^{iϑ_jk}·Γ_jk`, recovered pairwise.
///
/// Errors unless the two bases sit over the same projector basis and every
/// ratio has unit modulus, i.e. unless the bases are equivalent.
pub fn relative_phases<T: RealScalar>(
    a: &DyadBasis<T>,
    b: &DyadBasis<T>,
    tol: &ToleranceConfig<T>,
) -> Result<Vec<T>> {
    let d = a.dim();
    if b.dim() != d {
        return Err(AlgebraError::DimensionMismatch {
            left: d,
            right: b.dim(),
        });
    }
    for j in 0..d {
        let r = a
            .basis()
            .element(j)?
            .distance(b.basis().element(j)?.as_po())?;
        if r > tol.cluster {
            return Err(AlgebraError::NumericalDegeneracy {
                detail: format!("projector bases differ at index {j} (residual {:.3e})", as_f64(r)),
            });
        }
    }
    let mut theta = Vec::with_capacity(d * d);
    for j in 0..d {
        for k in 0..d {
            let ga = a.dyad(j, k)?;
            let gb = b.dyad(j, k)?;
            let mut gamma = Complex::new(T::zero(), T::zero());
            for (x, y) in ga.entries().iter().zip(gb.entries()) {
                gamma += x.conj() * *y;
            }
            let modulus = gamma.norm_sqr().sqrt();
            if (modulus - T::one()).abs() > tol.cluster {
                return Err(AlgebraError::NumericalDegeneracy {
                    detail: format!(
                        "dyads ({j},{k}) are not related by a phase (|γ| = {})",
                        as_f64(modulus)
                    ),
                });
            }
            theta.push(gamma.im.atan2(gamma.re));
        }
    }
    Ok(theta)
}

/// Components of a pseudo-observable over a dyad basis.
#[derive(Debug, Clone, PartialEq)]
pub struct ComponentMatrix<T> {
    dim: usize,
    entries: Vec<Scalar<T>>,
    basis_ref: String,
}

impl<T: RealScalar> ComponentMatrix<T> {
    pub fn from_entries(dim: usize, entries: Vec<Scalar<T>>, basis_ref: String) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(AlgebraError::LengthMismatch {
                expected: dim * dim,
                got: entries.len(),
            });
        }
        for e in &entries {
            if !e.re.is_finite() || !e.im.is_finite() {
                return Err(AlgebraError::InvalidMatrix {
                    reason: "non-finite component".into(),
                });
            }
        }
        Ok(ComponentMatrix {
            dim,
            entries,
            basis_ref,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Scalar<T>] {
        &self.entries
    }

    pub fn at(&self, j: usize, k: usize) -> Scalar<T> {
        self.entries[j * self.dim + k]
    }

    pub fn basis_ref(&self) -> &str {
        &self.basis_ref
    }

    /// `Σ_jk ϖ_jk·Γ_jk` over the originating basis.
    pub fn reconstruct(&self, db: &DyadBasis<T>) -> Result<PseudoObservable<T>> {
        self.require_same_basis_ref(db.basis_ref())?;
        let d = self.dim;
        let mut sum = PseudoObservable::zeros(d)?;
        for j in 0..d {
            for k in 0..d {
                sum = sum.add(&db.dyad(j, k)?.scale(self.at(j, k)))?;
            }
        }
        Ok(sum)
    }

    /// Hermitian pattern `ϖ_kj = ϖ_jk*`, the component-side image of the
    /// observable condition.
    pub fn is_hermitian_pattern(&self, tol: &ToleranceConfig<T>) -> bool {
        self.hermitian_pattern_residual() <= tol.hermitian
    }

    pub fn hermitian_pattern_residual(&self) -> T {
        let d = self.dim;
        let mut worst = T::zero();
        for j in 0..d {
            for k in j..d {
                let diff = self.at(k, j) - self.at(j, k).conj();
                worst = worst.max(diff.norm_sqr().sqrt());
            }
        }
        worst
    }

    fn require_same_basis_ref(&self, other: &str) -> Result<()> {
        if self.basis_ref != other {
            return Err(AlgebraError::BasisMismatch {
                left: self.basis_ref.clone(),
                right: other.to_string(),
            });
        }
        Ok(())
    }
}

/// Components `ϖ_jk = trace(Γ_jk†·P)`; dyads are trace-orthonormal, so the
/// one formula covers every index pair.
pub fn decompose_po<T: RealScalar>(
    p: &PseudoObservable<T>,
    db: &DyadBasis<T>,
) -> Result<ComponentMatrix<T>> {
    let d = db.dim();
    if p.dim() != d {
        return Err(AlgebraError::DimensionMismatch {
            left: p.dim(),
            right: d,
        });
    }
    let mut entries = Vec::with_capacity(d * d);
    for j in 0..d {
        for k in 0..d {
            let dyad = db.dyad(j, k)?;
            let mut component = Complex::new(T::zero(), T::zero());
            for (g, x) in dyad.entries().iter().zip(p.entries()) {
                component += g.conj() * *x;
            }
            entries.push(component);
        }
    }
    ComponentMatrix::from_entries(d, entries, db.basis_ref().to_string())
}

/// Entrywise sum of components; mirrors the sum of pseudo-observables.
pub fn component_add<T: RealScalar>(
    a: &ComponentMatrix<T>,
    b: &ComponentMatrix<T>,
) -> Result<ComponentMatrix<T>> {
    a.require_same_basis_ref(b.basis_ref())?;
    let entries = a
        .entries
        .iter()
        .zip(&b.entries)
        .map(|(x, y)| x + y)
        .collect();
    ComponentMatrix::from_entries(a.dim, entries, a.basis_ref.clone())
}

/// Matrix product of components; mirrors the ring product.
pub fn component_mul<T: RealScalar>(
    a: &ComponentMatrix<T>,
    b: &ComponentMatrix<T>,
) -> Result<ComponentMatrix<T>> {
    a.require_same_basis_ref(b.basis_ref())?;
    let d = a.dim;
    let mut entries = vec![Complex::new(T::zero(), T::zero()); d * d];
    for j in 0..d {
        for l in 0..d {
            let left = a.entries[j * d + l];
            for k in 0..d {
                entries[j * d + k] += left * b.entries[l * d + k];
            }
        }
    }
    ComponentMatrix::from_entries(d, entries, a.basis_ref.clone())
}
