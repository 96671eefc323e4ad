//! Random test instances: states, density matrices and ensembles.

use num_complex::Complex64;
use rand::Rng;

use crate::ensemble::SignalEnsemble;
use crate::matrix::{ComplexMatrix, ComplexVector};

fn entry<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

pub fn unit_vector<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexVector {
    loop {
        let v = ComplexVector::from_fn(dim, |_, _| entry(rng));
        let norm = v.norm();
        if norm > 1e-3 {
            return v.unscale(norm);
        }
    }
}

pub fn hermitian<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    let g = ComplexMatrix::from_fn(dim, dim, |_, _| entry(rng));
    (&g + g.adjoint()).scale(0.5)
}

/// `G G^H / tr(G G^H)` with a random `dim x rank` factor `G`.
pub fn density<R: Rng + ?Sized>(rng: &mut R, dim: usize, rank: usize) -> ComplexMatrix {
    let g = ComplexMatrix::from_fn(dim, rank.max(1), |_, _| entry(rng));
    let m = &g * g.adjoint();
    let trace: f64 = m.diagonal().iter().map(|z| z.re).sum();
    m.unscale(trace)
}

/// Random probability vector; with probability 1/4 one entry is zeroed.
pub fn distribution<R: Rng + ?Sized>(rng: &mut R, size: usize) -> Vec<f64> {
    let mut raw: Vec<f64> = (0..size).map(|_| rng.random_range(0.01..1.0)).collect();
    if size > 1 && rng.random_range(0..4) == 0 {
        let k = rng.random_range(0..size);
        raw[k] = 0.0;
    }
    let total: f64 = raw.iter().sum();
    let mut p: Vec<f64> = raw.iter().map(|x| x / total).collect();
    let drift = 1.0 - p.iter().sum::<f64>();
    if let Some(max) = p.iter_mut().max_by(|a, b| a.total_cmp(b)) {
        *max += drift;
    }
    p
}

/// Random valid ensemble with the given dimension and alphabet sizes.
pub fn ensemble<R: Rng + ?Sized>(rng: &mut R, dim: usize, size_a: usize, size_b: usize) -> SignalEnsemble {
    let states = (0..size_a)
        .map(|_| (0..size_b).map(|_| unit_vector(rng, dim)).collect())
        .collect();
    SignalEnsemble::new(
        (0..size_a).map(|i| format!("a{i}")).collect(),
        (0..size_b).map(|i| format!("b{i}")).collect(),
        dim,
        states,
        distribution(rng, size_a),
        distribution(rng, size_b),
    )
}
