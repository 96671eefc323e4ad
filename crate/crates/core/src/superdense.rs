//! Two senders sharing a Schmidt state `sum_i a_i |i>|i>` encode with local
//! unitaries; the induced signal ensemble feeds the rest of the crate.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::ensemble::{distribution_problems, SignalEnsemble};
use crate::entropy::{conditional_entropies, EntropyProfile, ENTROPY_TOL};
use crate::error::{Error, Result};
use crate::matrix::{self, ComplexMatrix, ComplexVector};
use crate::region::RatePair;

pub const UNITARY_TOL: f64 = 1e-10;

/// Schmidt coefficients `a_i >= 0` with `sum a_i^2 = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchmidtState {
    amplitudes: Vec<f64>,
}

impl SchmidtState {
    pub fn new(amplitudes: Vec<f64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidState("no Schmidt coefficients".into()));
        }
        if let Some(bad) = amplitudes.iter().find(|a| !a.is_finite() || **a < 0.0) {
            return Err(Error::InvalidState(format!("Schmidt coefficient {bad} is not a non-negative number")));
        }
        let norm2: f64 = amplitudes.iter().map(|a| a * a).sum();
        if (norm2 - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidState(format!("squared Schmidt coefficients sum to {norm2}")));
        }
        Ok(SchmidtState { amplitudes })
    }

    /// Coefficients `sqrt(w_i)` for a probability vector `w`.
    pub fn from_weights(weights: &[f64]) -> Result<Self> {
        let problems = distribution_problems(weights);
        if !problems.is_empty() {
            return Err(Error::InvalidState(problems.join("; ")));
        }
        SchmidtState::new(weights.iter().map(|w| w.sqrt()).collect())
    }

    pub fn bell(n: usize) -> Self {
        SchmidtState {
            amplitudes: vec![1.0 / (n as f64).sqrt(); n],
        }
    }

    pub fn n(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amplitudes
    }

    /// `sum_i a_i |i>|i>` in `C^n (x) C^n`.
    pub fn vector(&self) -> ComplexVector {
        let n = self.n();
        let mut v = ComplexVector::zeros(n * n);
        for (i, &a) in self.amplitudes.iter().enumerate() {
            v[i * n + i] = Complex64::new(a, 0.0);
        }
        v
    }
}

/// Shannon entropy of the squared Schmidt coefficients.
pub fn entanglement_entropy(s: &SchmidtState) -> f64 {
    let h: f64 = -s
        .amplitudes
        .iter()
        .map(|a| a * a)
        .filter(|&w| w > 0.0)
        .map(|w| w * w.log2())
        .sum::<f64>();
    h.max(0.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryEnsemble {
    pub labels: Vec<String>,
    pub unitaries: Vec<ComplexMatrix>,
    pub weights: Vec<f64>,
}

impl UnitaryEnsemble {
    pub fn new(labels: Vec<String>, unitaries: Vec<ComplexMatrix>, weights: Vec<f64>) -> Result<Self> {
        if unitaries.is_empty() || unitaries.len() != weights.len() || labels.len() != unitaries.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} labels, {} unitaries, {} weights",
                labels.len(),
                unitaries.len(),
                weights.len()
            )));
        }
        let problems = distribution_problems(&weights);
        if !problems.is_empty() {
            return Err(Error::InvalidDistribution(problems.join("; ")));
        }
        let n = unitaries[0].nrows();
        for (label, u) in labels.iter().zip(&unitaries) {
            if u.nrows() != n || u.ncols() != n {
                return Err(Error::DimensionMismatch(format!("unitary {label} is not {n}x{n}")));
            }
            let deviation = matrix::max_abs(&(u.adjoint() * u - ComplexMatrix::identity(n, n)));
            if deviation > UNITARY_TOL {
                return Err(Error::InvalidState(format!("{label} is not unitary (deviation {deviation:e})")));
            }
        }
        Ok(UnitaryEnsemble {
            labels,
            unitaries,
            weights,
        })
    }

    pub fn identity(n: usize) -> Self {
        UnitaryEnsemble {
            labels: vec!["I".into()],
            unitaries: vec![ComplexMatrix::identity(n, n)],
            weights: vec![1.0],
        }
    }

    pub fn len(&self) -> usize {
        self.unitaries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.unitaries.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.unitaries[0].nrows()
    }

    fn uniform(labels: Vec<String>, unitaries: Vec<ComplexMatrix>) -> Self {
        let k = unitaries.len();
        UnitaryEnsemble {
            labels,
            unitaries,
            weights: vec![1.0 / k as f64; k],
        }
    }
}

/// `X|i> = |i+1 mod n>`.
pub fn shift(n: usize, power: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        m[((i + power) % n, i)] = Complex64::new(1.0, 0.0);
    }
    m
}

/// `Z|i> = exp(2 pi i i / n)|i>`.
pub fn clock(n: usize, power: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |r, c| {
        if r == c {
            Complex64::from_polar(1.0, 2.0 * PI * ((r * power) % n) as f64 / n as f64)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// `X^a Z^b` for `a` in `0..n` when `include_shifts` (else `a = 0`) and `b`
/// in `0..n` when `include_phases` (else `b = 0`), uniformly weighted.
/// Labels read `X{a}Z{b}`.
pub fn pauli_ensemble(n: usize, include_shifts: bool, include_phases: bool) -> UnitaryEnsemble {
    let shifts = if include_shifts { n } else { 1 };
    let phases = if include_phases { n } else { 1 };
    let mut labels = Vec::new();
    let mut unitaries = Vec::new();
    for a in 0..shifts {
        for b in 0..phases {
            labels.push(format!("X{a}Z{b}"));
            unitaries.push(shift(n, a) * clock(n, b));
        }
    }
    UnitaryEnsemble::uniform(labels, unitaries)
}

/// Every permutation of the Schmidt basis, optionally composed with every
/// clock power, uniformly weighted. Size `n!` (times `n` with phases).
pub fn permutation_ensemble(n: usize, include_phases: bool) -> UnitaryEnsemble {
    let mut perms = Vec::new();
    let mut current: Vec<usize> = (0..n).collect();
    permutations(&mut current, 0, &mut perms);
    perms.sort();
    let phases = if include_phases { n } else { 1 };
    let mut labels = Vec::new();
    let mut unitaries = Vec::new();
    for perm in &perms {
        let mut p = ComplexMatrix::zeros(n, n);
        for (i, &target) in perm.iter().enumerate() {
            p[(target, i)] = Complex64::new(1.0, 0.0);
        }
        for b in 0..phases {
            let name: Vec<String> = perm.iter().map(ToString::to_string).collect();
            labels.push(format!("P{}Z{b}", name.join("")));
            unitaries.push(&p * clock(n, b));
        }
    }
    UnitaryEnsemble::uniform(labels, unitaries)
}

fn permutations(items: &mut Vec<usize>, start: usize, out: &mut Vec<Vec<usize>>) {
    if start == items.len() {
        out.push(items.clone());
        return;
    }
    for i in start..items.len() {
        items.swap(start, i);
        permutations(items, start + 1, out);
        items.swap(start, i);
    }
}

/// Signal ensemble with `|psi_ab> = (T_a (x) T_b)|psi>`, `p` and `q` taken
/// from the unitary weights.
pub fn superdense_ensemble(s: &SchmidtState, ens_a: &UnitaryEnsemble, ens_b: &UnitaryEnsemble) -> Result<SignalEnsemble> {
    let n = s.n();
    for (who, ens) in [("Alice", ens_a), ("Bob", ens_b)] {
        if ens.is_empty() || ens.dim() != n {
            return Err(Error::DimensionMismatch(format!(
                "{who}'s unitaries act on dimension {}, the shared state has local dimension {n}",
                if ens.is_empty() { 0 } else { ens.dim() }
            )));
        }
    }
    let psi = s.vector();
    let states = ens_a
        .unitaries
        .iter()
        .map(|ta| {
            ens_b
                .unitaries
                .iter()
                .map(|tb| matrix::tensor_product(ta, tb) * &psi)
                .collect()
        })
        .collect();
    Ok(SignalEnsemble::new(
        ens_a.labels.clone(),
        ens_b.labels.clone(),
        n * n,
        states,
        ens_a.weights.clone(),
        ens_b.weights.clone(),
    ))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundReport {
    pub profile: EntropyProfile,
    pub entanglement_entropy: f64,
    pub log2_n: f64,
    /// `2 log2 N`
    pub sum_bound: f64,
    /// `log2 N + H_E`, bounds both `H_A` and `H_B`
    pub single_bound: f64,
    pub slack_sum: f64,
    pub slack_alice: f64,
    pub slack_bob: f64,
    pub holds: bool,
}

/// Checks `H <= 2 log2 N`, `H_A <= log2 N + H_E` and `H_B <= log2 N + H_E`
/// on the induced ensemble.
pub fn check_bounds(s: &SchmidtState, ens_a: &UnitaryEnsemble, ens_b: &UnitaryEnsemble) -> Result<BoundReport> {
    let e = superdense_ensemble(s, ens_a, ens_b)?;
    let profile = conditional_entropies(&e)?;
    let h_e = entanglement_entropy(s);
    let log2_n = (s.n() as f64).log2();
    let sum_bound = 2.0 * log2_n;
    let single_bound = log2_n + h_e;
    let slack_sum = sum_bound - profile.h_joint;
    let slack_alice = single_bound - profile.h_cond_a;
    let slack_bob = single_bound - profile.h_cond_b;
    Ok(BoundReport {
        profile,
        entanglement_entropy: h_e,
        log2_n,
        sum_bound,
        single_bound,
        slack_sum,
        slack_alice,
        slack_bob,
        holds: slack_sum >= -ENTROPY_TOL && slack_alice >= -ENTROPY_TOL && slack_bob >= -ENTROPY_TOL,
    })
}

/// `(log2 N + H_E, log2 N - H_E)`: Alice runs two-party superdense coding
/// while Bob keeps the remainder.
pub fn alice_corner(s: &SchmidtState) -> RatePair {
    let log2_n = (s.n() as f64).log2();
    let h_e = entanglement_entropy(s);
    RatePair::new(log2_n + h_e, log2_n - h_e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{max_abs, partial_trace, Subsystem};
    use crate::region::{contains, pentagon};

    #[test]
    fn entanglement_entropy_cases() {
        assert!((entanglement_entropy(&SchmidtState::bell(2)) - 1.0).abs() < 1e-12);
        assert_eq!(entanglement_entropy(&SchmidtState::new(vec![1.0, 0.0]).unwrap()), 0.0);
        let s = SchmidtState::new(vec![0.8f64.sqrt(), 0.2f64.sqrt()]).unwrap();
        let h = entanglement_entropy(&s);
        assert!((h - 0.721928).abs() < 1e-6);
        assert!((h - -(0.8 * 0.8f64.log2() + 0.2 * 0.2f64.log2())).abs() < 1e-12);
        assert!(SchmidtState::new(vec![0.5, 0.5]).is_err());
        assert!(SchmidtState::new(vec![-1.0, 0.0]).is_err());
    }

    #[test]
    fn entanglement_entropy_matches_reduced_state() {
        let s = SchmidtState::from_weights(&[0.5, 0.3, 0.2]).unwrap();
        let rho = matrix::outer(&s.vector());
        let reduced = partial_trace(&rho, (3, 3), Subsystem::A).unwrap();
        let h = crate::entropy::matrix_entropy(&reduced).unwrap();
        assert!((h - entanglement_entropy(&s)).abs() < 1e-12);
    }

    #[test]
    fn qubit_paulis() {
        let full = pauli_ensemble(2, true, true);
        assert_eq!(full.len(), 4);
        assert!(full.weights.iter().all(|&w| w == 0.25));
        let x = shift(2, 1);
        let z = clock(2, 1);
        let expected = [ComplexMatrix::identity(2, 2), z.clone(), x.clone(), &x * &z];
        for (u, want) in full.unitaries.iter().zip(&expected) {
            assert!(max_abs(&(u - want)) < 1e-15);
        }
        assert!((z[(1, 1)].re + 1.0).abs() < 1e-15);
        let shifts = pauli_ensemble(2, true, false);
        assert_eq!(shifts.len(), 2);
        assert_eq!(shifts.weights, vec![0.5, 0.5]);
        assert!(max_abs(&(&shifts.unitaries[1] - &x)) == 0.0);
    }

    #[test]
    fn qutrit_paulis_are_unitary() {
        let ens = pauli_ensemble(3, true, true);
        assert_eq!(ens.len(), 9);
        for u in &ens.unitaries {
            assert!(max_abs(&(u.adjoint() * u - ComplexMatrix::identity(3, 3))) < 1e-12);
        }
        assert!(UnitaryEnsemble::new(ens.labels.clone(), ens.unitaries.clone(), ens.weights.clone()).is_ok());
    }

    #[test]
    fn permutation_family_sizes() {
        assert_eq!(permutation_ensemble(3, false).len(), 6);
        assert_eq!(permutation_ensemble(3, true).len(), 18);
    }

    #[test]
    fn bell_full_alice_is_superdense_coding() {
        let e = superdense_ensemble(&SchmidtState::bell(2), &pauli_ensemble(2, true, true), &UnitaryEnsemble::identity(2))
            .unwrap();
        for a in 0..4 {
            for b in 0..4 {
                let overlap = e.state(a, 0).dotc(e.state(b, 0)).norm();
                assert!((overlap - if a == b { 1.0 } else { 0.0 }).abs() < 1e-12);
            }
        }
        let p = conditional_entropies(&e).unwrap();
        assert!((p.h_joint - 2.0).abs() < 1e-9);
        assert!((p.h_cond_a - 2.0).abs() < 1e-9);
        assert!(p.h_cond_b.abs() < 1e-9);
    }

    #[test]
    fn identity_only_is_pure() {
        let s = SchmidtState::from_weights(&[0.7, 0.3]).unwrap();
        let id = UnitaryEnsemble::identity(2);
        let p = conditional_entropies(&superdense_ensemble(&s, &id, &id).unwrap()).unwrap();
        assert!(p.h_joint.abs() < 1e-12);
    }

    #[test]
    fn z_and_x_generate_bell_basis() {
        let z_side = UnitaryEnsemble::new(
            vec!["I".into(), "Z".into()],
            vec![ComplexMatrix::identity(2, 2), clock(2, 1)],
            vec![0.5, 0.5],
        )
        .unwrap();
        let x_side = pauli_ensemble(2, true, false);
        let e = superdense_ensemble(&SchmidtState::bell(2), &z_side, &x_side).unwrap();
        let p = conditional_entropies(&e).unwrap();
        assert!((p.h_joint - 2.0).abs() < 1e-9);
    }

    #[test]
    fn bounds_for_bell_and_product() {
        let full = pauli_ensemble(2, true, true);
        let r = check_bounds(&SchmidtState::bell(2), &full, &full).unwrap();
        assert!((r.profile.h_joint - 2.0).abs() < 1e-9);
        assert!(r.slack_sum.abs() < 1e-9);
        assert!(r.holds);

        let product = SchmidtState::new(vec![1.0, 0.0]).unwrap();
        let r = check_bounds(&product, &full, &full).unwrap();
        assert!(r.holds);
        assert!(r.profile.h_cond_a <= 1.0 + 1e-9 && r.profile.h_cond_b <= 1.0 + 1e-9);

        let r = check_bounds(&SchmidtState::bell(2), &full, &UnitaryEnsemble::identity(2)).unwrap();
        assert!((r.profile.h_cond_a - 2.0).abs() < 1e-9);
        assert!((r.profile.h_cond_a - r.single_bound).abs() < 1e-9);
    }

    #[test]
    fn alice_corner_in_pentagon() {
        let s = SchmidtState::from_weights(&[0.6, 0.4]).unwrap();
        let full = pauli_ensemble(2, true, true);
        let e = superdense_ensemble(&s, &full, &full).unwrap();
        let region = pentagon(&conditional_entropies(&e).unwrap()).unwrap();
        assert!(contains(&region, alice_corner(&s), 1e-6));
    }

    #[test]
    fn mismatched_dimensions() {
        let r = superdense_ensemble(&SchmidtState::bell(3), &pauli_ensemble(2, true, true), &UnitaryEnsemble::identity(3));
        assert!(matches!(r, Err(Error::DimensionMismatch(_))));
    }
}
