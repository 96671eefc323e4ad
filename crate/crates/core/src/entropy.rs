//! Entropic functionals in bits.

use serde::{Deserialize, Serialize};

use crate::ensemble::{self, distribution_problems, DensityMatrix, Sender, SignalEnsemble};
use crate::error::{Error, Result};
use crate::matrix::{self, ComplexMatrix, Subsystem, SUPPORT_CUTOFF};

/// Slack allowed on entropy inequalities.
pub const ENTROPY_TOL: f64 = 1e-9;

/// `H(rho)`, `H_A = sum_b q_b H(rho_b)` and `H_B = sum_a p_a H(rho_a)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntropyProfile {
    pub h_joint: f64,
    #[serde(rename = "h_cond_A")]
    pub h_cond_a: f64,
    #[serde(rename = "h_cond_B")]
    pub h_cond_b: f64,
}

impl EntropyProfile {
    pub fn new(h_joint: f64, h_cond_a: f64, h_cond_b: f64) -> Self {
        EntropyProfile {
            h_joint,
            h_cond_a,
            h_cond_b,
        }
    }

    /// Broken invariants (concavity bound and the sum bound), empty when valid.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let Self {
            h_joint,
            h_cond_a,
            h_cond_b,
        } = *self;
        if ![h_joint, h_cond_a, h_cond_b].iter().all(|x| x.is_finite()) {
            out.push("non-finite entropy".to_string());
            return out;
        }
        if h_cond_a < -ENTROPY_TOL || h_cond_b < -ENTROPY_TOL {
            out.push(format!("negative conditional entropy ({h_cond_a}, {h_cond_b})"));
        }
        if h_cond_a > h_joint + ENTROPY_TOL {
            out.push(format!("H_A = {h_cond_a} exceeds H = {h_joint}"));
        }
        if h_cond_b > h_joint + ENTROPY_TOL {
            out.push(format!("H_B = {h_cond_b} exceeds H = {h_joint}"));
        }
        if h_cond_a + h_cond_b < h_joint - ENTROPY_TOL {
            out.push(format!("H_A + H_B = {} is below H = {h_joint}", h_cond_a + h_cond_b));
        }
        out
    }

    /// Rate Alice can send when Bob is decoded as noise: `H - H_B`.
    pub fn alice_holevo(&self) -> f64 {
        self.h_joint - self.h_cond_b
    }

    pub fn bob_holevo(&self) -> f64 {
        self.h_joint - self.h_cond_a
    }
}

fn xlog2x(x: f64) -> f64 {
    if x > 0.0 {
        x * x.log2()
    } else {
        0.0
    }
}

pub fn shannon_entropy(dist: &[f64]) -> Result<f64> {
    let problems = distribution_problems(dist);
    if !problems.is_empty() {
        return Err(Error::InvalidDistribution(problems.join("; ")));
    }
    Ok(-dist.iter().map(|&p| xlog2x(p)).sum::<f64>())
}

/// Entropy of a spectrum; values at or below the support cutoff count as zero.
pub fn spectrum_entropy(eigenvalues: &[f64]) -> f64 {
    let h: f64 = -eigenvalues
        .iter()
        .filter(|&&x| x > SUPPORT_CUTOFF)
        .map(|&x| xlog2x(x))
        .sum::<f64>();
    // -0.0 for pure states
    h.max(0.0)
}

pub fn matrix_entropy(m: &ComplexMatrix) -> Result<f64> {
    let eig = matrix::eig_hermitian(m)?;
    if let Some(&lowest) = eig.eigenvalues.last() {
        if lowest < -matrix::NEGATIVE_TOL {
            return Err(Error::NegativeEigenvalue { value: lowest });
        }
    }
    Ok(spectrum_entropy(&eig.eigenvalues))
}

pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    matrix_entropy(rho.matrix())
}

pub fn conditional_entropies(e: &SignalEnsemble) -> Result<EntropyProfile> {
    e.ensure_valid()?;
    let h_joint = von_neumann_entropy(&ensemble::joint_density(e)?)?;
    let mut h_cond_b = 0.0;
    for (alpha, &p) in e.p.iter().enumerate() {
        if p > 0.0 {
            h_cond_b += p * von_neumann_entropy(&ensemble::conditional_density_at(e, Sender::A, alpha)?)?;
        }
    }
    let mut h_cond_a = 0.0;
    for (beta, &q) in e.q.iter().enumerate() {
        if q > 0.0 {
            h_cond_a += q * von_neumann_entropy(&ensemble::conditional_density_at(e, Sender::B, beta)?)?;
        }
    }
    Ok(EntropyProfile {
        h_joint,
        h_cond_a,
        h_cond_b,
    })
}

/// `H(sum w_i sigma_i) - sum w_i H(sigma_i)`.
pub fn holevo_information(states: &[DensityMatrix], weights: &[f64]) -> Result<f64> {
    let problems = distribution_problems(weights);
    if !problems.is_empty() {
        return Err(Error::InvalidDistribution(problems.join("; ")));
    }
    if states.len() != weights.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} states for {} weights",
            states.len(),
            weights.len()
        )));
    }
    let dim = states[0].dim();
    if let Some(bad) = states.iter().find(|s| s.dim() != dim) {
        return Err(Error::DimensionMismatch(format!(
            "state of dimension {} in an ensemble of dimension {dim}",
            bad.dim()
        )));
    }
    let mut average = ComplexMatrix::zeros(dim, dim);
    let mut mean_entropy = 0.0;
    for (s, &w) in states.iter().zip(weights) {
        if w > 0.0 {
            average += s.matrix().scale(w);
            mean_entropy += w * von_neumann_entropy(s)?;
        }
    }
    Ok(matrix_entropy(&average)? - mean_entropy)
}

/// Numerical replay of the strong-subadditivity argument for
/// `H_A + H_B >= H(rho)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SsaWitness {
    pub profile: EntropyProfile,
    pub shannon_p: f64,
    pub shannon_q: f64,
    pub h_rst: f64,
    pub h_rs: f64,
    pub h_rt: f64,
    pub h_r: f64,
    /// `|H(rho^RST) - H(p) - H(q)|`
    pub residual_rst: f64,
    /// `|H(rho^RS) - H(p) - H_B|`
    pub residual_rs: f64,
    /// `|H(rho^RT) - H(q) - H_A|`
    pub residual_rt: f64,
    /// `H(rho^RS) + H(rho^RT) - H(rho^RST) - H(rho^R)`
    pub ssa_slack: f64,
}

impl SsaWitness {
    pub fn identities_hold(&self, tol: f64) -> bool {
        self.residual_rst <= tol && self.residual_rs <= tol && self.residual_rt <= tol
    }
}

/// Trace out the middle factor of a `d1 x d2 x d3` operator.
fn trace_out_middle(m: &ComplexMatrix, (d1, d2, d3): (usize, usize, usize)) -> ComplexMatrix {
    ComplexMatrix::from_fn(d1 * d3, d1 * d3, |row, col| {
        let (i, k) = (row / d3, row % d3);
        let (j, l) = (col / d3, col % d3);
        (0..d2).map(|s| m[((i * d2 + s) * d3 + k, (j * d2 + s) * d3 + l)]).sum()
    })
}

/// Builds `rho^RST = sum p_a q_b |psi_ab><psi_ab| (x) |a><a| (x) |b><b|` in
/// full, takes its marginals and checks the entropy identities.
pub fn ssa_witness_check(e: &SignalEnsemble, dim_cap: usize) -> Result<SsaWitness> {
    e.ensure_valid()?;
    let (d, na, nb) = (e.dim, e.size_a(), e.size_b());
    let total = d * na * nb;
    if total > dim_cap {
        return Err(Error::DimensionCapExceeded { dim: total, cap: dim_cap });
    }
    let mut rho_rst = ComplexMatrix::zeros(total, total);
    for alpha in 0..na {
        for beta in 0..nb {
            let w = e.p[alpha] * e.q[beta];
            if w == 0.0 {
                continue;
            }
            let v = e.state(alpha, beta);
            let block = matrix::outer(v).scale(w);
            for r in 0..d {
                for c in 0..d {
                    rho_rst[((r * na + alpha) * nb + beta, (c * na + alpha) * nb + beta)] += block[(r, c)];
                }
            }
        }
    }
    let rho_rs = matrix::partial_trace(&rho_rst, (d * na, nb), Subsystem::A)?;
    let rho_rt = trace_out_middle(&rho_rst, (d, na, nb));
    let rho_r = matrix::partial_trace(&rho_rs, (d, na), Subsystem::A)?;

    let profile = conditional_entropies(e)?;
    let shannon_p = shannon_entropy(&e.p)?;
    let shannon_q = shannon_entropy(&e.q)?;
    let h_rst = matrix_entropy(&rho_rst)?;
    let h_rs = matrix_entropy(&rho_rs)?;
    let h_rt = matrix_entropy(&rho_rt)?;
    let h_r = matrix_entropy(&rho_r)?;
    Ok(SsaWitness {
        profile,
        shannon_p,
        shannon_q,
        h_rst,
        h_rs,
        h_rt,
        h_r,
        residual_rst: (h_rst - shannon_p - shannon_q).abs(),
        residual_rs: (h_rs - shannon_p - profile.h_cond_b).abs(),
        residual_rt: (h_rt - shannon_q - profile.h_cond_a).abs(),
        ssa_slack: h_rs + h_rt - h_rst - h_r,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensemble::{orthogonal_letters, two_basis_qubit_example};
    use crate::matrix::{ket, outer, real_diag};

    /// Binary entropy of (2 + sqrt 2)/4, the larger root of x^2 - x + 1/8.
    fn h_two_basis() -> f64 {
        let x = (2.0 + 2f64.sqrt()) / 4.0;
        -(x * x.log2() + (1.0 - x) * (1.0 - x).log2())
    }

    #[test]
    fn shannon_cases() {
        assert_eq!(shannon_entropy(&[0.5, 0.5]).unwrap(), 1.0);
        assert_eq!(shannon_entropy(&[1.0, 0.0]).unwrap(), 0.0);
        let h = shannon_entropy(&[0.25, 0.75]).unwrap();
        assert!((h - 0.811278).abs() < 1e-6);
        assert!((h - (0.5 + 0.75 * (4.0f64 / 3.0).log2())).abs() < 1e-15);
        assert!(matches!(shannon_entropy(&[0.5, 0.6]), Err(Error::InvalidDistribution(_))));
        assert!(matches!(shannon_entropy(&[1.5, -0.5]), Err(Error::InvalidDistribution(_))));
    }

    #[test]
    fn von_neumann_cases() {
        assert!((von_neumann_entropy(&DensityMatrix::maximally_mixed(2)).unwrap() - 1.0).abs() < 1e-14);
        let s = 0.5f64.sqrt();
        assert_eq!(von_neumann_entropy(&DensityMatrix::pure(&ket(&[s, s]))).unwrap(), 0.0);
        let e = two_basis_qubit_example();
        let rho_c = ensemble::conditional_density(&e, Sender::B, "C").unwrap();
        let h = von_neumann_entropy(&rho_c).unwrap();
        assert!((h - h_two_basis()).abs() < 1e-12);
        assert!((h - 0.600876).abs() < 1e-6);
    }

    #[test]
    fn example_profile() {
        let p = conditional_entropies(&two_basis_qubit_example()).unwrap();
        assert!((p.h_joint - 1.0).abs() < 1e-12);
        assert!((p.h_cond_a - h_two_basis()).abs() < 1e-12);
        assert!((p.h_cond_b - 1.0).abs() < 1e-12);
        assert!(p.violations().is_empty());
    }

    #[test]
    fn classical_profile() {
        let (pa, qb) = (vec![0.3, 0.7], vec![0.1, 0.2, 0.7]);
        let hp = shannon_entropy(&pa).unwrap();
        let hq = shannon_entropy(&qb).unwrap();
        let p = conditional_entropies(&orthogonal_letters(pa, qb)).unwrap();
        assert!((p.h_joint - hp - hq).abs() < 1e-12);
        assert!((p.h_cond_a - hp).abs() < 1e-12);
        assert!((p.h_cond_b - hq).abs() < 1e-12);
    }

    #[test]
    fn identical_letters_profile() {
        let v = ket(&[0.6, 0.8]);
        let e = SignalEnsemble::from_states(vec![vec![v.clone(), v.clone()], vec![v.clone(), v]]);
        let p = conditional_entropies(&e).unwrap();
        assert!(p.h_joint.abs() < 1e-12 && p.h_cond_a.abs() < 1e-12 && p.h_cond_b.abs() < 1e-12);
    }

    #[test]
    fn holevo_cases() {
        let e = two_basis_qubit_example();
        let rho_alpha: Vec<_> = (0..2)
            .map(|a| ensemble::conditional_density_at(&e, Sender::A, a).unwrap())
            .collect();
        assert!(holevo_information(&rho_alpha, &e.p).unwrap().abs() < 1e-12);
        let rho_beta: Vec<_> = (0..2)
            .map(|b| ensemble::conditional_density_at(&e, Sender::B, b).unwrap())
            .collect();
        let chi = holevo_information(&rho_beta, &e.q).unwrap();
        assert!((chi - (1.0 - h_two_basis())).abs() < 1e-12);
        assert!((chi - 0.399124).abs() < 1e-6);

        let n = 5;
        let orth: Vec<_> = (0..n).map(|i| DensityMatrix::pure(&matrix::basis(n, i))).collect();
        let chi = holevo_information(&orth, &vec![1.0 / n as f64; n]).unwrap();
        assert!((chi - (n as f64).log2()).abs() < 1e-12);

        let mixed = vec![DensityMatrix::maximally_mixed(2), DensityMatrix::maximally_mixed(3)];
        assert!(matches!(
            holevo_information(&mixed, &[0.5, 0.5]),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn witness_on_example() {
        let w = ssa_witness_check(&two_basis_qubit_example(), 4096).unwrap();
        assert!(w.identities_hold(1e-9), "{w:?}");
        assert!((w.ssa_slack - h_two_basis()).abs() < 1e-9);
        assert!((w.h_r - 1.0).abs() < 1e-12);
    }

    #[test]
    fn witness_classical_saturates() {
        let w = ssa_witness_check(&orthogonal_letters(vec![0.2, 0.8], vec![0.5, 0.25, 0.25]), 4096).unwrap();
        assert!(w.identities_hold(1e-9));
        assert!(w.ssa_slack.abs() < 1e-9);
    }

    #[test]
    fn witness_single_letters() {
        let s = 0.5f64.sqrt();
        let e = SignalEnsemble::from_states(vec![vec![ket(&[s, s])]]);
        let w = ssa_witness_check(&e, 4096).unwrap();
        for h in [w.h_rst, w.h_rs, w.h_rt, w.h_r] {
            assert!(h.abs() < 1e-12);
        }
        assert!((w.ssa_slack - w.h_r).abs() < 1e-12);
    }

    #[test]
    fn witness_respects_cap() {
        assert!(matches!(
            ssa_witness_check(&two_basis_qubit_example(), 7),
            Err(Error::DimensionCapExceeded { dim: 8, cap: 7 })
        ));
    }

    #[test]
    fn trace_out_middle_of_product() {
        let a = real_diag(&[0.3, 0.7]);
        let b = real_diag(&[0.1, 0.2, 0.7]);
        let c = outer(&ket(&[0.6, 0.8]));
        let abc = matrix::tensor_product(&matrix::tensor_product(&a, &b), &c);
        let ac = trace_out_middle(&abc, (2, 3, 2));
        assert!(matrix::max_abs(&(ac - matrix::tensor_product(&a, &c))) < 1e-15);
    }
}
