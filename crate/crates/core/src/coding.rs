//! Finite-blocklength simulation of the two-stage compound decoder.
//!
//! Codewords are `|S_aa'> = (x)_t |psi_{a_t a'_t}>`. The receiver first
//! applies `A_a = sum_k |t_ak><u_ak|` to identify Alice's string, where
//! `|t_ak>` are the typical eigenvectors of `rho_a` and
//! `|u_ak> = Phi^{-1/2} |t_ak>` with `Phi = sum_a Pi_a` pooled over the
//! codebook. It then runs a pretty good measurement on the projected
//! codewords `Pi_a |S_aa'>` to identify Bob's string.

use std::collections::HashMap;

use num_complex::Complex64;
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ensemble::{self, DensityMatrix, Sender, SignalEnsemble};
use crate::entropy::conditional_entropies;
use crate::error::{Error, Result};
use crate::matrix::{self, ComplexMatrix, ComplexVector, MatrixFn, SUPPORT_CUTOFF};
use crate::rng;

pub const DEFAULT_DIM_CAP: usize = 4096;
pub const DEFAULT_DELTA: f64 = 0.2;

/// `d^L`, refused when above `cap`.
pub fn block_dimension(e: &SignalEnsemble, length: usize, cap: usize) -> Result<usize> {
    match e.dim.checked_pow(length as u32) {
        Some(dim) if dim <= cap => Ok(dim),
        Some(dim) => Err(Error::DimensionCapExceeded { dim, cap }),
        None => Err(Error::DimensionCapExceeded { dim: usize::MAX, cap }),
    }
}

/// `M` Alice strings and `N` Bob strings of common length `L`, stored as
/// letter indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Codebook {
    length: usize,
    alice: Vec<Vec<usize>>,
    bob: Vec<Vec<usize>>,
}

/// JSON form of a codebook, with letters given by label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodebookSpec {
    #[serde(rename = "length_L")]
    pub length: usize,
    pub alice_strings: Vec<Vec<String>>,
    pub bob_strings: Vec<Vec<String>>,
}

impl Codebook {
    pub fn new(e: &SignalEnsemble, length: usize, alice: Vec<Vec<usize>>, bob: Vec<Vec<usize>>) -> Result<Self> {
        if length == 0 {
            return Err(Error::InvalidCodebook("length must be positive".into()));
        }
        if alice.is_empty() || bob.is_empty() {
            return Err(Error::InvalidCodebook(format!(
                "need at least one string per sender (M = {}, N = {})",
                alice.len(),
                bob.len()
            )));
        }
        for (who, strings, size) in [("Alice", &alice, e.size_a()), ("Bob", &bob, e.size_b())] {
            for (i, s) in strings.iter().enumerate() {
                if s.len() != length {
                    return Err(Error::LengthMismatch(format!(
                        "{who} string {i} has length {}, codebook length is {length}",
                        s.len()
                    )));
                }
                if let Some(&bad) = s.iter().find(|&&x| x >= size) {
                    return Err(Error::InvalidCodebook(format!(
                        "{who} string {i} uses letter index {bad} outside an alphabet of {size}"
                    )));
                }
            }
        }
        Ok(Codebook { length, alice, bob })
    }

    pub fn from_spec(spec: &CodebookSpec, e: &SignalEnsemble) -> Result<Self> {
        let resolve = |sender: Sender, strings: &[Vec<String>]| -> Result<Vec<Vec<usize>>> {
            strings
                .iter()
                .map(|s| s.iter().map(|l| e.letter_index(sender, l)).collect())
                .collect()
        };
        let alice = resolve(Sender::A, &spec.alice_strings)?;
        let bob = resolve(Sender::B, &spec.bob_strings)?;
        Codebook::new(e, spec.length, alice, bob)
    }

    pub fn to_spec(&self, e: &SignalEnsemble) -> CodebookSpec {
        let label = |alphabet: &[String], strings: &[Vec<usize>]| -> Vec<Vec<String>> {
            strings.iter().map(|s| s.iter().map(|&i| alphabet[i].clone()).collect()).collect()
        };
        CodebookSpec {
            length: self.length,
            alice_strings: label(&e.alphabet_a, &self.alice),
            bob_strings: label(&e.alphabet_b, &self.bob),
        }
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn alice(&self) -> &[Vec<usize>] {
        &self.alice
    }

    pub fn bob(&self) -> &[Vec<usize>] {
        &self.bob
    }

    pub fn m(&self) -> usize {
        self.alice.len()
    }

    pub fn n(&self) -> usize {
        self.bob.len()
    }
}

/// `M = max(1, floor(2^{L R}))`. A `1e-9` guard absorbs rounding in
/// `2^{L R}` when `L R` is an integer.
pub fn size_from_rate(length: usize, rate: f64) -> usize {
    let size = (length as f64 * rate).exp2();
    ((size + 1e-9).floor() as usize).max(1)
}

/// The first `count` strings of length `length` over an alphabet of `size`
/// letters in lexicographic order.
pub fn lexicographic_strings(size: usize, length: usize, count: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::with_capacity(count);
    let mut current = vec![0usize; length];
    if size == 0 {
        return out;
    }
    while out.len() < count {
        out.push(current.clone());
        let mut pos = length;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            current[pos] += 1;
            if current[pos] < size {
                break;
            }
            current[pos] = 0;
        }
    }
    out
}

fn check_string(e: &SignalEnsemble, s: &[usize], sender: Sender) -> Result<()> {
    let size = e.alphabet(sender).len();
    if let Some(&bad) = s.iter().find(|&&x| x >= size) {
        return Err(Error::UnknownLetter {
            sender: if sender == Sender::A { 'A' } else { 'B' },
            letter: format!("#{bad}"),
        });
    }
    Ok(())
}

/// `(x)_t |psi_{a_t a'_t}>`.
pub fn codeword(e: &SignalEnsemble, a: &[usize], a_prime: &[usize], cap: usize) -> Result<ComplexVector> {
    if a.len() != a_prime.len() {
        return Err(Error::LengthMismatch(format!(
            "Alice string has length {}, Bob string has length {}",
            a.len(),
            a_prime.len()
        )));
    }
    if a.is_empty() {
        return Err(Error::LengthMismatch("empty strings".into()));
    }
    e.ensure_valid()?;
    block_dimension(e, a.len(), cap)?;
    check_string(e, a, Sender::A)?;
    check_string(e, a_prime, Sender::B)?;
    Ok(codeword_unchecked(e, a, a_prime))
}

fn codeword_unchecked(e: &SignalEnsemble, a: &[usize], a_prime: &[usize]) -> ComplexVector {
    let mut v = e.state(a[0], a_prime[0]).clone();
    for t in 1..a.len() {
        v = matrix::tensor_vectors(&v, e.state(a[t], a_prime[t]));
    }
    v
}

/// `rho_a = (x)_t rho_{a_t}`.
pub fn conditional_product_state(e: &SignalEnsemble, a: &[usize], cap: usize) -> Result<DensityMatrix> {
    if a.is_empty() {
        return Err(Error::LengthMismatch("empty string".into()));
    }
    e.ensure_valid()?;
    block_dimension(e, a.len(), cap)?;
    check_string(e, a, Sender::A)?;
    let letters: Vec<DensityMatrix> = (0..e.size_a())
        .map(|alpha| ensemble::conditional_density_at(e, Sender::A, alpha))
        .collect::<Result<_>>()?;
    let mut rho = letters[a[0]].clone();
    for &alpha in &a[1..] {
        rho = rho.tensor(&letters[alpha]);
    }
    Ok(rho)
}

/// Projector onto the eigenvectors of `rho_a` whose eigenvalues lie strictly
/// inside `(2^{-L(H_B + delta)}, 2^{-L(H_B - delta)})`.
#[derive(Debug, Clone)]
pub struct TypicalProjector {
    pub string_a: Vec<usize>,
    pub projector: ComplexMatrix,
    /// `(index in the descending spectrum, eigenvalue)` of every kept vector.
    pub kept_eigs: Vec<(usize, f64)>,
    /// Kept eigenvectors `|t_ak>` as columns.
    pub kept_vectors: ComplexMatrix,
    pub window: (f64, f64),
    /// Full spectrum of `rho_a`, descending.
    pub spectrum: Vec<f64>,
}

impl TypicalProjector {
    pub fn rank(&self) -> usize {
        self.kept_eigs.len()
    }
}

/// Eigenvalue window `(2^{-L(H_B+delta)}, 2^{-L(H_B-delta)})`.
pub fn typical_window(h_cond_b: f64, length: usize, delta: f64) -> (f64, f64) {
    let l = length as f64;
    ((-l * (h_cond_b + delta)).exp2(), (-l * (h_cond_b - delta)).exp2())
}

fn check_delta(delta: f64) -> Result<()> {
    if !delta.is_finite() || delta <= 0.0 {
        return Err(Error::Config(format!("delta must be a positive number, got {delta}")));
    }
    Ok(())
}

fn build_typical(e: &SignalEnsemble, a: &[usize], h_cond_b: f64, delta: f64, cap: usize) -> Result<TypicalProjector> {
    let rho = conditional_product_state(e, a, cap)?;
    let eig = matrix::eig_hermitian(rho.matrix())?;
    let window = typical_window(h_cond_b, a.len(), delta);
    let kept_eigs: Vec<(usize, f64)> = eig
        .eigenvalues
        .iter()
        .copied()
        .enumerate()
        .filter(|&(_, x)| x > SUPPORT_CUTOFF && x > window.0 && x < window.1)
        .collect();
    let dim = eig.dim();
    let kept_vectors = ComplexMatrix::from_fn(dim, kept_eigs.len(), |r, c| eig.eigenvectors[(r, kept_eigs[c].0)]);
    let projector = &kept_vectors * kept_vectors.adjoint();
    Ok(TypicalProjector {
        string_a: a.to_vec(),
        projector,
        kept_eigs,
        kept_vectors,
        window,
        spectrum: eig.eigenvalues,
    })
}

/// The window is centred on `H_B` of `e` (with Bob's letter distribution `q`).
/// Eigenvalues at or below the support cutoff are never kept.
pub fn typical_projector(e: &SignalEnsemble, a: &[usize], delta: f64, cap: usize) -> Result<TypicalProjector> {
    check_delta(delta)?;
    let profile = conditional_entropies(e)?;
    build_typical(e, a, profile.h_cond_b, delta, cap)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TypicalityReport {
    pub rank: usize,
    /// `tr(Pi_a rho_a Pi_a)`
    pub captured_weight: f64,
    /// `tr(Pi_a rho_a^2 Pi_a)`
    pub captured_square: f64,
    /// `2^{-L(H_B - 3 delta)}`
    pub square_bound: f64,
    pub square_bound_holds: bool,
    pub window_low: f64,
    pub window_high: f64,
}

pub fn typicality_report(e: &SignalEnsemble, a: &[usize], delta: f64, cap: usize) -> Result<TypicalityReport> {
    check_delta(delta)?;
    let profile = conditional_entropies(e)?;
    let typical = build_typical(e, a, profile.h_cond_b, delta, cap)?;
    let rho = conditional_product_state(e, a, cap)?;
    let pi = &typical.projector;
    let sandwiched = pi * rho.matrix() * pi;
    let captured_weight = matrix::trace_re(&sandwiched);
    let captured_square = matrix::trace_re(&(pi * rho.matrix() * rho.matrix() * pi));
    let square_bound = (-(a.len() as f64) * (profile.h_cond_b - 3.0 * delta)).exp2();
    Ok(TypicalityReport {
        rank: typical.rank(),
        captured_weight,
        captured_square,
        square_bound,
        square_bound_holds: captured_square <= square_bound + 1e-12,
        window_low: typical.window.0,
        window_high: typical.window.1,
    })
}

/// First decoding stage: one operator `A_a` per Alice string of the codebook.
#[derive(Debug, Clone)]
pub struct FirstStage {
    pub projectors: Vec<TypicalProjector>,
    pub operators: Vec<ComplexMatrix>,
    /// Subnormalized vectors `|u_ak>` as columns, per Alice string.
    pub measurement_vectors: Vec<ComplexMatrix>,
    /// `max(0, lambda_max(sum_a A_a^H A_a - I))`
    pub completeness_defect: f64,
    pub dim: usize,
}

impl FirstStage {
    /// Builds the stage for a list of Alice strings of common length.
    pub fn build(e: &SignalEnsemble, alice: &[Vec<usize>], delta: f64, cap: usize) -> Result<Self> {
        check_delta(delta)?;
        let length = alice.first().map(Vec::len).ok_or_else(|| Error::InvalidCodebook("no Alice strings".into()))?;
        if let Some(bad) = alice.iter().find(|s| s.len() != length) {
            return Err(Error::LengthMismatch(format!(
                "Alice strings of lengths {length} and {}",
                bad.len()
            )));
        }
        let dim = block_dimension(e, length, cap)?;
        let h_cond_b = conditional_entropies(e)?.h_cond_b;

        let mut cache: HashMap<&[usize], TypicalProjector> = HashMap::new();
        let mut projectors = Vec::with_capacity(alice.len());
        for a in alice {
            if !cache.contains_key(a.as_slice()) {
                cache.insert(a.as_slice(), build_typical(e, a, h_cond_b, delta, cap)?);
            }
            projectors.push(cache[a.as_slice()].clone());
        }

        let mut phi = ComplexMatrix::zeros(dim, dim);
        for t in &projectors {
            phi += &t.projector;
        }
        let phi_inv_sqrt = matrix::func_on_support(&phi, MatrixFn::InvSqrt, SUPPORT_CUTOFF)?;

        let mut operators = Vec::with_capacity(projectors.len());
        let mut measurement_vectors = Vec::with_capacity(projectors.len());
        let mut completeness = ComplexMatrix::zeros(dim, dim);
        for t in &projectors {
            let u = &phi_inv_sqrt * &t.kept_vectors;
            let op = &t.kept_vectors * u.adjoint();
            completeness += op.adjoint() * &op;
            operators.push(op);
            measurement_vectors.push(u);
        }
        let excess = completeness - ComplexMatrix::identity(dim, dim);
        let top = matrix::eig_hermitian(&hermitize(excess))?.eigenvalues.first().copied().unwrap_or(0.0);
        Ok(FirstStage {
            projectors,
            operators,
            measurement_vectors,
            completeness_defect: top.max(0.0),
            dim,
        })
    }
}

fn hermitize(m: ComplexMatrix) -> ComplexMatrix {
    (&m + m.adjoint()).scale(0.5)
}

/// `A_a` for every Alice string of `codebook`.
pub fn first_stage_povm(e: &SignalEnsemble, codebook: &Codebook, delta: f64, cap: usize) -> Result<FirstStage> {
    FirstStage::build(e, codebook.alice(), delta, cap)
}

/// `|eta_{a'|a}> = G_a^{-1/2} Pi_a |S_aa'>` with `G_a = sum_a' Pi_a |S_aa'><S_aa'| Pi_a`,
/// one vector per Bob string, for Alice string `alice_index` of the codebook.
pub fn second_stage_pgm(
    e: &SignalEnsemble,
    codebook: &Codebook,
    alice_index: usize,
    projector: &TypicalProjector,
    cap: usize,
) -> Result<Vec<ComplexVector>> {
    let a = codebook
        .alice()
        .get(alice_index)
        .ok_or_else(|| Error::InvalidCodebook(format!("no Alice string {alice_index}")))?;
    block_dimension(e, codebook.length(), cap)?;
    if projector.projector.nrows() != e.dim.pow(codebook.length() as u32) {
        return Err(Error::DimensionMismatch("projector does not match the codebook block".into()));
    }
    let codewords: Vec<ComplexVector> = codebook.bob().iter().map(|b| codeword_unchecked(e, a, b)).collect();
    pretty_good_measurement(&projector.projector, &codewords)
}

fn pretty_good_measurement(pi: &ComplexMatrix, codewords: &[ComplexVector]) -> Result<Vec<ComplexVector>> {
    let projected: Vec<ComplexVector> = codewords.iter().map(|s| pi * s).collect();
    let dim = pi.nrows();
    let mut gram = ComplexMatrix::zeros(dim, dim);
    let one = Complex64::new(1.0, 0.0);
    for v in &projected {
        gram.gerc(one, v, v, one);
    }
    let inv_sqrt = matrix::func_on_support(&hermitize(gram), MatrixFn::InvSqrt, SUPPORT_CUTOFF)?;
    Ok(projected.iter().map(|v| &inv_sqrt * v).collect())
}

/// Exact error probability of the compound decoder on one codebook.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DecodeOutcome {
    pub p_error: f64,
    /// `P_Ea = 1 - (1/N) sum_a' success[a][a']`
    pub per_alice_error: Vec<f64>,
    /// `|<eta_{a'|a}| A_a |S_aa'>|^2`, indexed `[a][a']`
    pub success: Vec<Vec<f64>>,
    pub completeness_defect: f64,
    pub typical_ranks: Vec<usize>,
}

/// `P_E = 1 - (1/MN) sum |<eta_{a'|a}| A_a |S_aa'>|^2`.
pub fn error_probability(e: &SignalEnsemble, codebook: &Codebook, delta: f64, cap: usize) -> Result<DecodeOutcome> {
    e.ensure_valid()?;
    let first = first_stage_povm(e, codebook, delta, cap)?;
    decode_with(e, &first, codebook)
}

/// Evaluates `codebook` against a prebuilt first stage for the same Alice
/// strings.
pub fn decode_with(e: &SignalEnsemble, first: &FirstStage, codebook: &Codebook) -> Result<DecodeOutcome> {
    if first.operators.len() != codebook.m() {
        return Err(Error::DimensionMismatch(format!(
            "first stage has {} operators for {} Alice strings",
            first.operators.len(),
            codebook.m()
        )));
    }
    let n = codebook.n() as f64;
    let mut success = Vec::with_capacity(codebook.m());
    for (i, a) in codebook.alice().iter().enumerate() {
        let codewords: Vec<ComplexVector> = codebook.bob().iter().map(|b| codeword_unchecked(e, a, b)).collect();
        let etas = pretty_good_measurement(&first.projectors[i].projector, &codewords)?;
        let row: Vec<f64> = codewords
            .iter()
            .zip(&etas)
            .map(|(s, eta)| eta.dotc(&(&first.operators[i] * s)).norm_sqr())
            .collect();
        success.push(row);
    }
    let per_alice_error: Vec<f64> = success.iter().map(|row| 1.0 - row.iter().sum::<f64>() / n).collect();
    let p_error = per_alice_error.iter().sum::<f64>() / codebook.m() as f64;
    Ok(DecodeOutcome {
        p_error,
        per_alice_error,
        success,
        completeness_defect: first.completeness_defect,
        typical_ranks: first.projectors.iter().map(TypicalProjector::rank).collect(),
    })
}

/// Monte Carlo estimate of the error probability averaged over Bob's random
/// codes.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RandomCodeAverage {
    pub mean: f64,
    /// Sample standard deviation over trials (zero for a single trial).
    pub std_dev: f64,
    /// `std_dev / sqrt(trials)`
    pub std_error: f64,
    pub trials: Vec<f64>,
}

/// Parameters of a random-coding run.
#[derive(Debug, Clone)]
pub struct RandomCodePlan {
    pub alice_strings: Vec<Vec<usize>>,
    pub n: usize,
    pub length: usize,
    pub delta: f64,
    pub trials: usize,
    pub seed: u64,
}

/// Draws `N` Bob strings i.i.d. from `q` per trial (trial `t` uses
/// [`rng::trial_stream`]`(seed, t)`) and averages the exact error
/// probability.
pub fn random_code_average(e: &SignalEnsemble, plan: &RandomCodePlan, cap: usize) -> Result<RandomCodeAverage> {
    e.ensure_valid()?;
    if plan.trials == 0 {
        return Err(Error::Config("trials must be at least 1".into()));
    }
    if plan.n == 0 {
        return Err(Error::InvalidCodebook("N must be at least 1".into()));
    }
    if let Some(bad) = plan.alice_strings.iter().find(|s| s.len() != plan.length) {
        return Err(Error::LengthMismatch(format!(
            "Alice string of length {} for L = {}",
            bad.len(),
            plan.length
        )));
    }
    // validates the Alice side once
    Codebook::new(e, plan.length, plan.alice_strings.clone(), vec![vec![0; plan.length]])?;
    let first = FirstStage::build(e, &plan.alice_strings, plan.delta, cap)?;
    let letters = WeightedIndex::new(&e.q).map_err(|err| Error::InvalidDistribution(err.to_string()))?;

    let trials: Vec<f64> = (0..plan.trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = rng::trial_stream(plan.seed, t as u64);
            let bob: Vec<Vec<usize>> = (0..plan.n)
                .map(|_| (0..plan.length).map(|_| letters.sample(&mut rng)).collect())
                .collect();
            let codebook = Codebook::new(e, plan.length, plan.alice_strings.clone(), bob)?;
            Ok(decode_with(e, &first, &codebook)?.p_error)
        })
        .collect::<Result<_>>()?;

    let count = trials.len() as f64;
    let mean = trials.iter().sum::<f64>() / count;
    let std_dev = if trials.len() > 1 {
        (trials.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (count - 1.0)).sqrt()
    } else {
        0.0
    };
    Ok(RandomCodeAverage {
        mean,
        std_dev,
        std_error: std_dev / count.sqrt(),
        trials,
    })
}
