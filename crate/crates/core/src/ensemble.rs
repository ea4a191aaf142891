//! Monte-Carlo oracle for the stochastic-variable reading of compatible
//! observables: seeded, portable sampling of elementary events, and
//! outcome-wise verification that the algebra matches per-event arithmetic.

use rand_chacha::ChaCha12Rng;
use rand_core::{RngCore, SeedableRng};

use crate::compat::commutator;
use crate::error::{AlgebraError, Result};
use crate::projector::ProjectorBasis;
use crate::pseudo::Observable;
use crate::scalar::{as_f64, real, RealScalar};
use crate::tolerance::ToleranceConfig;

/// Identifier of the random source; recorded in every outcome table.
pub const SAMPLING_ALGORITHM: &str = "chacha12";

/// An elementary-event distribution used as a sampling fixture: an
/// all-elementary projector basis with a weight per event and a seed.
#[derive(Debug, Clone)]
pub struct EnsembleModel<T> {
    basis: ProjectorBasis<T>,
    weights: Vec<T>,
    seed: u64,
}

impl<T: RealScalar> EnsembleModel<T> {
    pub fn new(
        basis: ProjectorBasis<T>,
        weights: Vec<T>,
        seed: u64,
        tol: &ToleranceConfig<T>,
    ) -> Result<Self> {
        basis.require_elementary(tol)?;
        if weights.len() != basis.len() {
            return Err(AlgebraError::LengthMismatch {
                expected: basis.len(),
                got: weights.len(),
            });
        }
        let mut total = T::zero();
        for w in &weights {
            if !w.is_finite() || *w < T::zero() {
                return Err(AlgebraError::InvalidModel {
                    reason: "weights must be finite and non-negative".into(),
                });
            }
            total += *w;
        }
        let slack = real::<T>(1e-12).max(T::epsilon() * T::from_usize(weights.len()).unwrap());
        if (total - T::one()).abs() > slack {
            return Err(AlgebraError::InvalidModel {
                reason: format!("weights sum to {}, expected 1", as_f64(total)),
            });
        }
        Ok(EnsembleModel {
            basis,
            weights,
            seed,
        })
    }

    pub fn basis(&self) -> &ProjectorBasis<T> {
        &self.basis
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Component of `o` on each elementary event of the model.
    pub fn component_row(&self, o: &Observable<T>, tol: &ToleranceConfig<T>) -> Result<Vec<T>> {
        self.require_compatible(o, tol)?;
        self.basis
            .elements()
            .iter()
            .map(|p| Ok(o.mul(p.as_po())?.trace().re / p.trace().re))
            .collect()
    }

    /// `Σ_j w_j·o_j`, the mean outcome under the model weights.
    pub fn mean_of(&self, o: &Observable<T>, tol: &ToleranceConfig<T>) -> Result<T> {
        let row = self.component_row(o, tol)?;
        Ok(row
            .iter()
            .zip(&self.weights)
            .map(|(c, w)| *c * *w)
            .fold(T::zero(), |a, b| a + b))
    }

    /// Variance of the outcome distribution under the model weights.
    pub fn variance_of(&self, o: &Observable<T>, tol: &ToleranceConfig<T>) -> Result<T> {
        let row = self.component_row(o, tol)?;
        let mean = row
            .iter()
            .zip(&self.weights)
            .map(|(c, w)| *c * *w)
            .fold(T::zero(), |a, b| a + b);
        Ok(row
            .iter()
            .zip(&self.weights)
            .map(|(c, w)| (*c - mean) * (*c - mean) * *w)
            .fold(T::zero(), |a, b| a + b))
    }

    fn require_compatible(&self, o: &Observable<T>, tol: &ToleranceConfig<T>) -> Result<()> {
        for (j, p) in self.basis.elements().iter().enumerate() {
            let comm = commutator(o.as_po(), p.as_po())?.max_norm();
            if comm > tol.zero * (T::one() + o.max_norm()) {
                return Err(AlgebraError::IncompatibleObservables {
                    left: o.display_label("observable"),
                    right: p.display_label(&format!("event[{j}]")),
                    commutator_norm: as_f64(comm),
                });
            }
        }
        Ok(())
    }

    /// Elementary-event index of draw `t`.
    ///
    /// Every draw reads its own ChaCha12 stream (stream id = draw index) on
    /// the model seed, so chunked or parallel evaluation produces the same
    /// outcomes regardless of chunk boundaries. The uniform variate is the
    /// top 53 bits of one `u64`, giving platform-independent results.
    fn draw_event(&self, t: u64) -> usize {
        let mut rng = ChaCha12Rng::seed_from_u64(self.seed);
        rng.set_stream(t);
        let u = (rng.next_u64() >> 11) as f64 * (1.0 / 9007199254740992.0);
        let mut acc = 0.0f64;
        for (j, w) in self.weights.iter().enumerate() {
            acc += as_f64(*w);
            if u < acc {
                return j;
            }
        }
        self.weights.len() - 1
    }
}

/// Simultaneous-measurement outcomes: one row of component values per draw.
#[derive(Debug, Clone)]
pub struct OutcomeTable<T> {
    pub algorithm: &'static str,
    pub seed: u64,
    pub labels: Vec<String>,
    /// Elementary-event index of each draw.
    pub events: Vec<usize>,
    /// `values[t][r]` is the outcome of observable `r` at draw `t`.
    pub values: Vec<Vec<T>>,
}

impl<T: RealScalar> OutcomeTable<T> {
    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn empirical_means(&self) -> Vec<T> {
        let n = self.values.len();
        if n == 0 {
            return vec![T::zero(); self.labels.len()];
        }
        let count = T::from_usize(n).unwrap();
        let mut sums = vec![T::zero(); self.labels.len()];
        for row in &self.values {
            for (s, v) in sums.iter_mut().zip(row) {
                *s += *v;
            }
        }
        sums.into_iter().map(|s| s / count).collect()
    }
}

/// Draws `n` elementary events and emits the outcome tuple of every
/// observable at each event. Deterministic given the model seed.
pub fn sample<T: RealScalar>(
    model: &EnsembleModel<T>,
    os: &[Observable<T>],
    n: usize,
    tol: &ToleranceConfig<T>,
) -> Result<OutcomeTable<T>> {
    let mut rows = Vec::with_capacity(os.len());
    for o in os {
        rows.push(model.component_row(o, tol)?);
    }
    let labels = os
        .iter()
        .enumerate()
        .map(|(r, o)| o.display_label(&format!("O{}", r + 1)))
        .collect();

    let mut events = Vec::with_capacity(n);
    let mut values = Vec::with_capacity(n);
    for t in 0..n {
        let j = model.draw_event(t as u64);
        events.push(j);
        values.push(rows.iter().map(|row| row[j]).collect());
    }
    Ok(OutcomeTable {
        algorithm: SAMPLING_ALGORITHM,
        seed: model.seed(),
        labels,
        events,
        values,
    })
}

/// Outcome-wise check that sum and product act per event.
#[derive(Debug, Clone, PartialEq)]
pub struct PointwiseReport<T> {
    pub draws: usize,
    pub add_violations: usize,
    pub mul_violations: usize,
    pub max_add_residual: T,
    pub max_mul_residual: T,
}

impl<T: RealScalar> PointwiseReport<T> {
    pub fn clean(&self) -> bool {
        self.add_violations == 0 && self.mul_violations == 0
    }
}

/// For each sampled event `j` checks `(a+b)_j = a_j + b_j` and
/// `(a·b)_j = a_j·b_j`, equality meaning agreement within `tol.zero`
/// scaled to the outcome sizes.
pub fn verify_pointwise_algebra<T: RealScalar>(
    model: &EnsembleModel<T>,
    a: &Observable<T>,
    b: &Observable<T>,
    n: usize,
    tol: &ToleranceConfig<T>,
) -> Result<PointwiseReport<T>> {
    let comm = commutator(a.as_po(), b.as_po())?.max_norm();
    if comm > tol.zero * (T::one() + a.max_norm() * b.max_norm()) {
        return Err(AlgebraError::IncompatibleObservables {
            left: a.display_label("left"),
            right: b.display_label("right"),
            commutator_norm: as_f64(comm),
        });
    }

    let row_a = model.component_row(a, tol)?;
    let row_b = model.component_row(b, tol)?;
    let sum = a.add(b.as_po())?.real_part();
    let product = a.mul(b.as_po())?.real_part();
    let row_sum = model.component_row(&sum, tol)?;
    let row_product = model.component_row(&product, tol)?;

    let mut report = PointwiseReport {
        draws: n,
        add_violations: 0,
        mul_violations: 0,
        max_add_residual: T::zero(),
        max_mul_residual: T::zero(),
    };
    for t in 0..n {
        let j = model.draw_event(t as u64);
        let add_residual = (row_sum[j] - (row_a[j] + row_b[j])).abs();
        let add_bound = tol.zero * (T::one() + row_a[j].abs() + row_b[j].abs());
        if add_residual > add_bound {
            report.add_violations += 1;
        }
        report.max_add_residual = report.max_add_residual.max(add_residual);

        let mul_residual = (row_product[j] - row_a[j] * row_b[j]).abs();
        let mul_bound = tol.zero
            * (T::one() + row_a[j].abs() + row_b[j].abs() + (row_a[j] * row_b[j]).abs());
        if mul_residual > mul_bound {
            report.mul_violations += 1;
        }
        report.max_mul_residual = report.max_mul_residual.max(mul_residual);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pseudo::PseudoObservable;
    use num_complex::Complex;

    type Po = PseudoObservable<f64>;

    fn tol() -> ToleranceConfig<f64> {
        ToleranceConfig::default()
    }

    fn uniform_model(dim: usize, seed: u64) -> EnsembleModel<f64> {
        let basis = ProjectorBasis::standard(dim, &tol()).unwrap();
        let w = 1.0 / dim as f64;
        EnsembleModel::new(basis, vec![w; dim], seed, &tol()).unwrap()
    }

    fn obs(po: Po) -> Observable<f64> {
        Observable::new(po, &tol()).unwrap()
    }

    #[test]
    fn model_validation() {
        let basis = ProjectorBasis::standard(2, &tol()).unwrap();
        assert!(matches!(
            EnsembleModel::new(basis.clone(), vec![0.5], 0, &tol()),
            Err(AlgebraError::LengthMismatch { .. })
        ));
        assert!(matches!(
            EnsembleModel::new(basis.clone(), vec![0.7, 0.7], 0, &tol()),
            Err(AlgebraError::InvalidModel { .. })
        ));
        assert!(matches!(
            EnsembleModel::new(basis, vec![-0.5, 1.5], 0, &tol()),
            Err(AlgebraError::InvalidModel { .. })
        ));

        let coarse = ProjectorBasis::new(
            vec![
                crate::projector::Projector::new(
                    Po::diagonal(&[1.0, 1.0, 0.0]).unwrap(),
                    &tol(),
                )
                .unwrap(),
                crate::projector::Projector::new(
                    Po::diagonal(&[0.0, 0.0, 1.0]).unwrap(),
                    &tol(),
                )
                .unwrap(),
            ],
            &tol(),
        )
        .unwrap();
        assert!(matches!(
            EnsembleModel::new(coarse, vec![0.5, 0.5], 0, &tol()),
            Err(AlgebraError::NotElementaryBasis { .. })
        ));
    }

    #[test]
    fn constant_observable_always_yields_its_value() {
        let model = uniform_model(3, 11);
        let c = obs(Po::constant(3, Complex::new(2.75, 0.0)).unwrap());
        let table = sample(&model, &[c], 64, &tol()).unwrap();
        for row in &table.values {
            assert_eq!(row[0], 2.75);
        }
    }

    #[test]
    fn point_mass_on_projector_event() {
        let basis = ProjectorBasis::standard(2, &tol()).unwrap();
        let model = EnsembleModel::new(basis, vec![1.0, 0.0], 5, &tol()).unwrap();
        let p = obs(Po::diagonal(&[1.0, 0.0]).unwrap());
        let table = sample(&model, &[p], 32, &tol()).unwrap();
        for row in &table.values {
            assert_eq!(row[0], 1.0);
        }
    }

    #[test]
    fn binomial_mean_within_three_sigma() {
        let model = uniform_model(2, 0);
        let o = obs(Po::diagonal(&[1.0, 2.0]).unwrap());
        let n = 10_000;
        let table = sample(&model, std::slice::from_ref(&o), n, &tol()).unwrap();
        let mean = table.empirical_means()[0];
        let sigma = 0.5 / (n as f64).sqrt();
        assert!((mean - 1.5).abs() <= 3.0 * sigma, "mean {mean} too far from 1.5");
        assert!((model.mean_of(&o, &tol()).unwrap() - 1.5).abs() < 1e-12);
        assert!((model.variance_of(&o, &tol()).unwrap() - 0.25).abs() < 1e-12);
    }

    #[test]
    fn sampling_is_reproducible_for_fixed_seed() {
        let model = uniform_model(4, 42);
        let o = obs(Po::diagonal(&[1.0, 2.0, 3.0, 4.0]).unwrap());
        let t1 = sample(&model, std::slice::from_ref(&o), 200, &tol()).unwrap();
        let t2 = sample(&model, std::slice::from_ref(&o), 200, &tol()).unwrap();
        assert_eq!(t1.events, t2.events);

        let other = EnsembleModel::new(
            model.basis().clone(),
            model.weights().to_vec(),
            43,
            &tol(),
        )
        .unwrap();
        let t3 = sample(&other, &[o], 200, &tol()).unwrap();
        assert_ne!(t1.events, t3.events);
    }

    #[test]
    fn draws_are_independent_of_batch_size() {
        // Per-draw streams: a shorter run is a prefix of a longer one, so
        // chunked evaluation cannot depend on chunk boundaries.
        let model = uniform_model(3, 99);
        let o = obs(Po::diagonal(&[1.0, 2.0, 3.0]).unwrap());
        let short = sample(&model, std::slice::from_ref(&o), 50, &tol()).unwrap();
        let long = sample(&model, std::slice::from_ref(&o), 150, &tol()).unwrap();
        assert_eq!(short.events[..], long.events[..50]);
    }

    #[test]
    fn incompatible_observable_is_rejected() {
        let model = uniform_model(2, 0);
        let x = obs(Po::pauli_x());
        assert!(matches!(
            sample(&model, &[x], 10, &tol()),
            Err(AlgebraError::IncompatibleObservables { .. })
        ));
    }

    #[test]
    fn pointwise_algebra_on_compatible_pairs() {
        let model = uniform_model(2, 7);
        let one = obs(Po::identity(2).unwrap());
        let report = verify_pointwise_algebra(&model, &one.clone(), &one, 500, &tol()).unwrap();
        assert!(report.clean());

        let a = obs(Po::diagonal(&[1.0, 2.0]).unwrap());
        let b = obs(Po::diagonal(&[10.0, 20.0]).unwrap());
        let report = verify_pointwise_algebra(&model, &a, &b, 500, &tol()).unwrap();
        assert!(report.clean());
    }

    #[test]
    fn pointwise_algebra_rejects_incompatible_pair() {
        let model = uniform_model(2, 7);
        let x = obs(Po::pauli_x());
        let z = obs(Po::pauli_z());
        assert!(matches!(
            verify_pointwise_algebra(&model, &x, &z, 10, &tol()),
            Err(AlgebraError::IncompatibleObservables { .. })
        ));
    }

    #[test]
    fn zero_product_of_complementary_events() {
        let model = uniform_model(2, 3);
        let p = obs(Po::diagonal(&[1.0, 0.0]).unwrap());
        let c = obs(Po::diagonal(&[0.0, 1.0]).unwrap());
        let product = obs(p.mul(c.as_po()).unwrap());
        let table = sample(&model, &[p, c, product], 100, &tol()).unwrap();
        let mut saw_p = false;
        let mut saw_c = false;
        for row in &table.values {
            assert_eq!(row[2], 0.0);
            saw_p |= row[0] != 0.0;
            saw_c |= row[1] != 0.0;
        }
        // Neither factor is outcome-wise zero, yet the product is.
        assert!(saw_p && saw_c);
    }
}
