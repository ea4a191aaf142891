//! Seeded generators of random algebra elements.
//!
//! Everything is deterministic given the seed; the verification suites and
//! the CLI invariant runner build their randomized workloads here.

use num_complex::Complex;
use rand_chacha::ChaCha12Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::Result;
use crate::projector::Projector;
use crate::pseudo::{Observable, PseudoObservable};
use crate::scalar::{RealScalar, Scalar};
use crate::spectral::decompose;
use crate::tolerance::ToleranceConfig;

pub struct MatrixSampler<T> {
    rng: ChaCha12Rng,
    _marker: std::marker::PhantomData<T>,
}

impl<T: RealScalar> MatrixSampler<T> {
    pub fn new(seed: u64) -> Self {
        MatrixSampler {
            rng: ChaCha12Rng::seed_from_u64(seed),
            _marker: std::marker::PhantomData,
        }
    }

    /// Uniform in `[0, 1)`, from the top 53 bits of one `u64`.
    pub fn uniform(&mut self) -> T {
        let u = (self.rng.next_u64() >> 11) as f64 * (1.0 / 9007199254740992.0);
        T::from_f64(u).unwrap()
    }

    pub fn real_in(&mut self, lo: T, hi: T) -> T {
        lo + (hi - lo) * self.uniform()
    }

    pub fn usize_below(&mut self, bound: usize) -> usize {
        (self.rng.next_u64() % bound as u64) as usize
    }

    fn entry(&mut self) -> Scalar<T> {
        Complex::new(
            self.real_in(-T::one(), T::one()),
            self.real_in(-T::one(), T::one()),
        )
    }

    /// Dense complex matrix with entries uniform in `[-1,1]²`.
    pub fn pseudo(&mut self, dim: usize) -> PseudoObservable<T> {
        let entries = (0..dim * dim).map(|_| self.entry()).collect();
        PseudoObservable::from_entries(dim, entries).expect("finite entries")
    }

    /// Random observable: the symmetric part of a dense matrix.
    pub fn hermitian(&mut self, dim: usize) -> Observable<T> {
        self.pseudo(dim).real_part()
    }

    /// Random unit vector.
    pub fn unit_vector(&mut self, dim: usize) -> Vec<Scalar<T>> {
        loop {
            let v: Vec<Scalar<T>> = (0..dim).map(|_| self.entry()).collect();
            let norm = v
                .iter()
                .map(|e| e.norm_sqr())
                .fold(T::zero(), |a, b| a + b)
                .sqrt();
            if norm > T::from_f64(1e-3).unwrap() {
                let s = Complex::new(T::one() / norm, T::zero());
                return v.into_iter().map(|e| e * s).collect();
            }
        }
    }

    /// Random projector built as a rounded eigenprojector sum of a random
    /// observable; the rank is drawn uniformly from `0..=dim`.
    pub fn projector(&mut self, dim: usize, tol: &ToleranceConfig<T>) -> Result<Projector<T>> {
        let h = self.hermitian(dim);
        let sd = decompose(&h, tol)?;
        let mut flat: Vec<&Projector<T>> = sd.projectors().iter().collect();
        // Degenerate clusters are rare for random input; treat each
        // projector as one slot and draw how many to keep.
        let keep = self.usize_below(flat.len() + 1);
        let mut sum = PseudoObservable::zeros(dim)?;
        flat.truncate(keep);
        for p in flat {
            sum = sum.add(p.as_po())?;
        }
        Projector::new(sum, tol)
    }

    /// Two commuting observables, built as functions of one random
    /// observable: same eigenprojectors, independent random coefficients.
    pub fn commuting_pair(
        &mut self,
        dim: usize,
        tol: &ToleranceConfig<T>,
    ) -> Result<(Observable<T>, Observable<T>)> {
        let h = self.hermitian(dim);
        let sd = decompose(&h, tol)?;
        let two = T::one() + T::one();
        let mut a = PseudoObservable::zeros(dim)?;
        let mut b = PseudoObservable::zeros(dim)?;
        for p in sd.projectors() {
            let ca = self.real_in(-two, two);
            let cb = self.real_in(-two, two);
            a = a.add(&p.scale(Complex::new(ca, T::zero())))?;
            b = b.add(&p.scale(Complex::new(cb, T::zero())))?;
        }
        Ok((a.real_part(), b.real_part()))
    }

    /// Polynomial with small integer coefficients, degree in `1..=max_degree`.
    pub fn integer_polynomial(&mut self, max_degree: usize) -> Vec<T> {
        let degree = 1 + self.usize_below(max_degree);
        (0..=degree)
            .map(|_| {
                let c = self.usize_below(7) as i64 - 3;
                T::from_i64(c).unwrap()
            })
            .collect()
    }
}
