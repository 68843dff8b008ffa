use num_complex::Complex64;
use rayon::prelude::*;

/// Momentum amplitudes on the N³ lattice, index `(i·N + j)·N + k` with `i`
/// running along the first rest-space basis vector. Projections produce
/// unnormalized states, so the norm is not enforced by the type.
#[derive(Clone, Debug, PartialEq)]
pub struct LatticeState {
    n: usize,
    amps: Vec<Complex64>,
}

impl LatticeState {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            amps: vec![Complex64::new(0.0, 0.0); n * n * n],
        }
    }

    pub fn from_amplitudes(n: usize, amps: Vec<Complex64>) -> Self {
        assert_eq!(amps.len(), n * n * n, "amplitude count must be N³");
        Self { n, amps }
    }

    pub fn lattice_size(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// `⟨self|other⟩`, antilinear in `self`.
    pub fn inner(&self, other: &LatticeState) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn normalized(&self) -> LatticeState {
        let norm = self.norm();
        assert!(norm > 0.0, "cannot normalize the zero state");
        self.scaled(Complex64::new(1.0 / norm, 0.0))
    }

    pub fn scaled(&self, alpha: Complex64) -> LatticeState {
        LatticeState {
            n: self.n,
            amps: self.amps.par_iter().map(|a| a * alpha).collect(),
        }
    }

    /// `self + alpha · other`.
    pub fn axpy(&self, alpha: Complex64, other: &LatticeState) -> LatticeState {
        assert_eq!(self.n, other.n);
        LatticeState {
            n: self.n,
            amps: self
                .amps
                .par_iter()
                .zip(other.amps.par_iter())
                .map(|(a, b)| a + alpha * b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &LatticeState) -> LatticeState {
        self.axpy(Complex64::new(-1.0, 0.0), other)
    }

    pub fn add(&self, other: &LatticeState) -> LatticeState {
        self.axpy(Complex64::new(1.0, 0.0), other)
    }

    /// `‖self − other‖`.
    pub fn distance(&self, other: &LatticeState) -> f64 {
        assert_eq!(self.n, other.n);
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}
