//! Entropic side of the converse, evaluated on explicit codebooks.
//!
//! All `MN` codewords are equiprobable. Position `k` of the codebook induces a
//! single-letter ensemble whose `p` and `q` are the empirical letter
//! frequencies of Alice's and Bob's strings at that position.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coding::{block_dimension, codeword, Codebook};
use crate::entropy::{conditional_entropies, matrix_entropy, EntropyProfile, ENTROPY_TOL};
use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, ComplexVector};
use crate::region::{contains, pentagon, RatePair};
use crate::SignalEnsemble;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConverseReport {
    /// `H(rho_code)`
    pub h_code: f64,
    /// `(1/M) sum_a H(rho_code^a)`, Bob's string averaged out per fixed `a`.
    pub h_code_a_avg: f64,
    /// `(1/N) sum_a' H(rho_code^a')`, Alice's string averaged out per fixed `a'`.
    pub h_code_aprime_avg: f64,
    pub per_position: Vec<EntropyProfile>,
    /// `sum_k H^(k)`, `sum_k H_A^(k)`, `sum_k H_B^(k)`
    pub sum_joint: f64,
    pub sum_cond_a: f64,
    pub sum_cond_b: f64,
    /// Right-hand side minus left-hand side of each subadditivity bound;
    /// non-negative up to rounding.
    pub slack_joint: f64,
    pub slack_alice: f64,
    pub slack_bob: f64,
}

impl ConverseReport {
    pub fn inequalities_hold(&self, tol: f64) -> bool {
        self.slack_joint >= -tol && self.slack_alice >= -tol && self.slack_bob >= -tol
    }
}

fn mixture(words: &[ComplexVector], dim: usize) -> ComplexMatrix {
    let w = Complex64::new(1.0 / words.len() as f64, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let mut rho = ComplexMatrix::zeros(dim, dim);
    for s in words {
        rho.gerc(w, s, s, one);
    }
    rho
}

fn frequencies(strings: &[Vec<usize>], position: usize, size: usize) -> Vec<f64> {
    let mut counts = vec![0usize; size];
    for s in strings {
        counts[s[position]] += 1;
    }
    let total = strings.len() as f64;
    let mut f: Vec<f64> = counts.iter().map(|&c| c as f64 / total).collect();
    let drift = 1.0 - f.iter().sum::<f64>();
    if let Some(max) = f.iter_mut().max_by(|a, b| a.total_cmp(b)) {
        *max += drift;
    }
    f
}

/// Ensemble of the letters at position `k`, with empirical frequencies.
pub fn position_ensemble(e: &SignalEnsemble, codebook: &Codebook, k: usize) -> SignalEnsemble {
    e.with_distributions(
        frequencies(codebook.alice(), k, e.size_a()),
        frequencies(codebook.bob(), k, e.size_b()),
    )
}

pub fn codebook_entropies(e: &SignalEnsemble, codebook: &Codebook, cap: usize) -> Result<ConverseReport> {
    e.ensure_valid()?;
    let dim = block_dimension(e, codebook.length(), cap)?;
    let words: Vec<Vec<ComplexVector>> = codebook
        .alice()
        .iter()
        .map(|a| codebook.bob().iter().map(|b| codeword(e, a, b, cap)).collect())
        .collect::<Result<_>>()?;

    let all: Vec<ComplexVector> = words.iter().flatten().cloned().collect();
    let h_code = matrix_entropy(&mixture(&all, dim))?;

    let per_a: Vec<f64> = words
        .par_iter()
        .map(|row| matrix_entropy(&mixture(row, dim)))
        .collect::<Result<_>>()?;
    let h_code_a_avg = per_a.iter().sum::<f64>() / per_a.len() as f64;

    let per_aprime: Vec<f64> = (0..codebook.n())
        .into_par_iter()
        .map(|j| {
            let column: Vec<ComplexVector> = words.iter().map(|row| row[j].clone()).collect();
            matrix_entropy(&mixture(&column, dim))
        })
        .collect::<Result<_>>()?;
    let h_code_aprime_avg = per_aprime.iter().sum::<f64>() / per_aprime.len() as f64;

    let per_position: Vec<EntropyProfile> = (0..codebook.length())
        .into_par_iter()
        .map(|k| conditional_entropies(&position_ensemble(e, codebook, k)))
        .collect::<Result<_>>()?;
    let sum_joint: f64 = per_position.iter().map(|p| p.h_joint).sum();
    let sum_cond_a: f64 = per_position.iter().map(|p| p.h_cond_a).sum();
    let sum_cond_b: f64 = per_position.iter().map(|p| p.h_cond_b).sum();

    Ok(ConverseReport {
        h_code,
        h_code_a_avg,
        h_code_aprime_avg,
        slack_joint: sum_joint - h_code,
        slack_alice: sum_cond_a - h_code_aprime_avg,
        slack_bob: sum_cond_b - h_code_a_avg,
        per_position,
        sum_joint,
        sum_cond_a,
        sum_cond_b,
    })
}

/// Position-averaged rate bounds. `r1_max` and `r2_max` average `H_A^(k)` and
/// `H_B^(k)`; they are not the single-letter `H_A`, `H_B` of an ensemble.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConverseBounds {
    pub r1_max: f64,
    pub r2_max: f64,
    pub rsum_max: f64,
    /// `(rsum - r2, r2)` and `(r1, rsum - r1)`
    pub outmost_vertices: [RatePair; 2],
    pub vertices_inside: bool,
}

pub fn converse_bounds(report: &ConverseReport, l: usize) -> Result<ConverseBounds> {
    if l == 0 || l != report.per_position.len() {
        return Err(Error::LengthMismatch(format!(
            "block length {l} for a report with {} positions",
            report.per_position.len()
        )));
    }
    let n = l as f64;
    let rsum_max = report.sum_joint / n;
    let r1_max = report.sum_cond_a / n;
    let r2_max = report.sum_cond_b / n;
    let averaged = EntropyProfile::new(rsum_max, r1_max, r2_max);
    let region = pentagon(&averaged)?;
    let outmost_vertices = [
        RatePair::new(rsum_max - r2_max, r2_max),
        RatePair::new(r1_max, rsum_max - r1_max),
    ];
    let vertices_inside = outmost_vertices.iter().all(|v| contains(&region, *v, 1e-6));
    Ok(ConverseBounds {
        r1_max,
        r2_max,
        rsum_max,
        outmost_vertices,
        vertices_inside,
    })
}

/// Conditional-sum check on each position: `H_A^(k) + H_B^(k) >= H^(k)`.
pub fn positions_satisfy_sum_bound(report: &ConverseReport) -> bool {
    report
        .per_position
        .iter()
        .all(|p| p.h_cond_a + p.h_cond_b >= p.h_joint - ENTROPY_TOL)
}
