//! Two-sender signal ensembles `{|psi_ab>, p_a q_b}` and the density
//! matrices built from them.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{self, ComplexMatrix, ComplexVector};

pub const NORM_TOL: f64 = 1e-10;
pub const PROBABILITY_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sender {
    A,
    B,
}

impl Sender {
    fn tag(self) -> char {
        match self {
            Sender::A => 'A',
            Sender::B => 'B',
        }
    }
}

/// Pure letter states indexed by `(alpha, beta)` together with a product
/// distribution `p_alpha q_beta`.
///
/// The constructor does not validate; call [`validate_ensemble`] for a report
/// or rely on the operations below, which refuse invalid ensembles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "EnsembleRepr", into = "EnsembleRepr")]
pub struct SignalEnsemble {
    pub alphabet_a: Vec<String>,
    pub alphabet_b: Vec<String>,
    pub dim: usize,
    /// `states[alpha][beta]`
    pub states: Vec<Vec<ComplexVector>>,
    pub p: Vec<f64>,
    pub q: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EnsembleRepr {
    alphabet_a: Vec<String>,
    alphabet_b: Vec<String>,
    dim: usize,
    states: Vec<Vec<Vec<[f64; 2]>>>,
    p: Vec<f64>,
    q: Vec<f64>,
}

impl TryFrom<EnsembleRepr> for SignalEnsemble {
    type Error = String;

    fn try_from(r: EnsembleRepr) -> std::result::Result<Self, String> {
        let states = r
            .states
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|v| {
                        ComplexVector::from_iterator(v.len(), v.into_iter().map(|[re, im]| Complex64::new(re, im)))
                    })
                    .collect()
            })
            .collect();
        Ok(SignalEnsemble {
            alphabet_a: r.alphabet_a,
            alphabet_b: r.alphabet_b,
            dim: r.dim,
            states,
            p: r.p,
            q: r.q,
        })
    }
}

impl From<SignalEnsemble> for EnsembleRepr {
    fn from(e: SignalEnsemble) -> Self {
        EnsembleRepr {
            alphabet_a: e.alphabet_a,
            alphabet_b: e.alphabet_b,
            dim: e.dim,
            states: e
                .states
                .iter()
                .map(|row| row.iter().map(|v| v.iter().map(|z| [z.re, z.im]).collect()).collect())
                .collect(),
            p: e.p,
            q: e.q,
        }
    }
}

/// One broken ensemble invariant.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    ZeroDimension,
    EmptyAlphabet { sender: Sender },
    DuplicateLabel { sender: Sender, label: String },
    TableShape { detail: String },
    StateLength { alpha: usize, beta: usize, len: usize, dim: usize },
    NonFiniteState { alpha: usize, beta: usize },
    NonUnitState { alpha: usize, beta: usize, norm: f64 },
    DistributionLength { sender: Sender, len: usize, expected: usize },
    NegativeProbability { sender: Sender, index: usize, value: f64 },
    DistributionSum { sender: Sender, sum: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::ZeroDimension => write!(f, "Hilbert-space dimension is zero"),
            Violation::EmptyAlphabet { sender } => write!(f, "alphabet {} is empty", sender.tag()),
            Violation::DuplicateLabel { sender, label } => {
                write!(f, "alphabet {} repeats label {label:?}", sender.tag())
            }
            Violation::TableShape { detail } => write!(f, "state table is not total: {detail}"),
            Violation::StateLength { alpha, beta, len, dim } => {
                write!(f, "state ({alpha},{beta}) has length {len}, expected {dim}")
            }
            Violation::NonFiniteState { alpha, beta } => {
                write!(f, "state ({alpha},{beta}) has non-finite entries")
            }
            Violation::NonUnitState { alpha, beta, norm } => {
                write!(f, "state ({alpha},{beta}) has norm {norm}, expected 1")
            }
            Violation::DistributionLength { sender, len, expected } => write!(
                f,
                "distribution {} has {len} entries, alphabet has {expected}",
                dist_name(*sender)
            ),
            Violation::NegativeProbability { sender, index, value } => {
                write!(f, "distribution {}[{index}] = {value} is negative", dist_name(*sender))
            }
            Violation::DistributionSum { sender, sum } => {
                write!(f, "distribution {} sums to {sum}", dist_name(*sender))
            }
        }
    }
}

fn dist_name(sender: Sender) -> &'static str {
    match sender {
        Sender::A => "p",
        Sender::B => "q",
    }
}

/// Problems with a probability vector, as human-readable strings.
pub(crate) fn distribution_problems(dist: &[f64]) -> Vec<String> {
    let mut problems = Vec::new();
    if dist.is_empty() {
        problems.push("empty distribution".to_string());
    }
    for (i, &x) in dist.iter().enumerate() {
        if !x.is_finite() || x < 0.0 {
            problems.push(format!("entry {i} = {x} is not a non-negative number"));
        }
    }
    let sum: f64 = dist.iter().sum();
    if (sum - 1.0).abs() > PROBABILITY_TOL {
        problems.push(format!("entries sum to {sum}"));
    }
    problems
}

pub fn validate_ensemble(e: &SignalEnsemble) -> Vec<Violation> {
    let mut out = Vec::new();
    if e.dim == 0 {
        out.push(Violation::ZeroDimension);
    }
    for (sender, alphabet) in [(Sender::A, &e.alphabet_a), (Sender::B, &e.alphabet_b)] {
        if alphabet.is_empty() {
            out.push(Violation::EmptyAlphabet { sender });
        }
        for (i, label) in alphabet.iter().enumerate() {
            if alphabet[..i].contains(label) {
                out.push(Violation::DuplicateLabel {
                    sender,
                    label: label.clone(),
                });
            }
        }
    }
    if e.states.len() != e.alphabet_a.len() {
        out.push(Violation::TableShape {
            detail: format!("{} rows for {} A-letters", e.states.len(), e.alphabet_a.len()),
        });
    }
    for (alpha, row) in e.states.iter().enumerate() {
        if row.len() != e.alphabet_b.len() {
            out.push(Violation::TableShape {
                detail: format!("row {alpha} has {} entries for {} B-letters", row.len(), e.alphabet_b.len()),
            });
        }
        for (beta, v) in row.iter().enumerate() {
            if v.len() != e.dim {
                out.push(Violation::StateLength {
                    alpha,
                    beta,
                    len: v.len(),
                    dim: e.dim,
                });
                continue;
            }
            if v.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                out.push(Violation::NonFiniteState { alpha, beta });
                continue;
            }
            let norm = v.norm();
            if (norm - 1.0).abs() > NORM_TOL {
                out.push(Violation::NonUnitState { alpha, beta, norm });
            }
        }
    }
    for (sender, dist, expected) in [
        (Sender::A, &e.p, e.alphabet_a.len()),
        (Sender::B, &e.q, e.alphabet_b.len()),
    ] {
        if dist.len() != expected {
            out.push(Violation::DistributionLength {
                sender,
                len: dist.len(),
                expected,
            });
        }
        for (index, &value) in dist.iter().enumerate() {
            if !value.is_finite() || value < 0.0 {
                out.push(Violation::NegativeProbability { sender, index, value });
            }
        }
        let sum: f64 = dist.iter().sum();
        if !dist.is_empty() && (sum - 1.0).abs() > PROBABILITY_TOL {
            out.push(Violation::DistributionSum { sender, sum });
        }
    }
    out
}

impl SignalEnsemble {
    pub fn new(
        alphabet_a: Vec<String>,
        alphabet_b: Vec<String>,
        dim: usize,
        states: Vec<Vec<ComplexVector>>,
        p: Vec<f64>,
        q: Vec<f64>,
    ) -> Self {
        SignalEnsemble {
            alphabet_a,
            alphabet_b,
            dim,
            states,
            p,
            q,
        }
    }

    /// Letters labelled `"0"`, `"1"`, ... with uniform distributions.
    pub fn from_states(states: Vec<Vec<ComplexVector>>) -> Self {
        let na = states.len();
        let nb = states.first().map_or(0, Vec::len);
        let dim = states.first().and_then(|r| r.first()).map_or(0, |v| v.len());
        SignalEnsemble {
            alphabet_a: (0..na).map(|i| i.to_string()).collect(),
            alphabet_b: (0..nb).map(|i| i.to_string()).collect(),
            dim,
            states,
            p: vec![1.0 / na.max(1) as f64; na],
            q: vec![1.0 / nb.max(1) as f64; nb],
        }
    }

    pub fn size_a(&self) -> usize {
        self.alphabet_a.len()
    }

    pub fn size_b(&self) -> usize {
        self.alphabet_b.len()
    }

    pub fn state(&self, alpha: usize, beta: usize) -> &ComplexVector {
        &self.states[alpha][beta]
    }

    /// Same states, different product distribution.
    pub fn with_distributions(&self, p: Vec<f64>, q: Vec<f64>) -> Self {
        SignalEnsemble {
            p,
            q,
            ..self.clone()
        }
    }

    pub fn alphabet(&self, sender: Sender) -> &[String] {
        match sender {
            Sender::A => &self.alphabet_a,
            Sender::B => &self.alphabet_b,
        }
    }

    pub fn letter_index(&self, sender: Sender, letter: &str) -> Result<usize> {
        self.alphabet(sender)
            .iter()
            .position(|l| l == letter)
            .ok_or_else(|| Error::UnknownLetter {
                sender: sender.tag(),
                letter: letter.to_string(),
            })
    }

    pub fn ensure_valid(&self) -> Result<()> {
        let violations = validate_ensemble(self);
        if violations.is_empty() {
            Ok(())
        } else {
            let joined: Vec<String> = violations.iter().map(ToString::to_string).collect();
            Err(Error::InvalidEnsemble(joined.join("; ")))
        }
    }
}

/// Hermitian, PSD, unit-trace matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(ComplexMatrix);

impl DensityMatrix {
    /// Checks every density-matrix invariant.
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        let eig = matrix::eig_hermitian(&m)?;
        if let Some(&lowest) = eig.eigenvalues.last() {
            if lowest < -matrix::NEGATIVE_TOL {
                return Err(Error::NegativeEigenvalue { value: lowest });
            }
        }
        let trace = matrix::trace_re(&m);
        if (trace - 1.0).abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace is {trace}, expected 1")));
        }
        Ok(DensityMatrix(m))
    }

    pub fn pure(v: &ComplexVector) -> Self {
        DensityMatrix(matrix::outer(v))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        DensityMatrix(ComplexMatrix::identity(dim, dim).unscale(dim as f64))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        DensityMatrix(matrix::tensor_product(&self.0, &other.0))
    }
}

fn weighted_mixture<'a>(dim: usize, terms: impl Iterator<Item = (f64, &'a ComplexVector)>) -> ComplexMatrix {
    let mut rho = ComplexMatrix::zeros(dim, dim);
    for (w, v) in terms {
        if w != 0.0 {
            rho.gerc(Complex64::new(w, 0.0), v, v, Complex64::new(1.0, 0.0));
        }
    }
    rho
}

/// `rho = sum p_a q_b |psi_ab><psi_ab|`.
pub fn joint_density(e: &SignalEnsemble) -> Result<DensityMatrix> {
    e.ensure_valid()?;
    let terms = e
        .states
        .iter()
        .enumerate()
        .flat_map(|(a, row)| row.iter().enumerate().map(move |(b, v)| (e.p[a] * e.q[b], v)));
    Ok(DensityMatrix(weighted_mixture(e.dim, terms)))
}

/// `rho_alpha` (fix = A, averaged over beta with `q`) or `rho_beta`
/// (fix = B, averaged over alpha with `p`).
pub fn conditional_density(e: &SignalEnsemble, fix: Sender, letter: &str) -> Result<DensityMatrix> {
    let index = e.letter_index(fix, letter)?;
    conditional_density_at(e, fix, index)
}

pub fn conditional_density_at(e: &SignalEnsemble, fix: Sender, index: usize) -> Result<DensityMatrix> {
    e.ensure_valid()?;
    let limit = e.alphabet(fix).len();
    if index >= limit {
        return Err(Error::UnknownLetter {
            sender: fix.tag(),
            letter: format!("#{index}"),
        });
    }
    let rho = match fix {
        Sender::A => weighted_mixture(e.dim, e.q.iter().zip(&e.states[index]).map(|(&w, v)| (w, v))),
        Sender::B => weighted_mixture(e.dim, e.p.iter().zip(&e.states).map(|(&w, row)| (w, &row[index]))),
    };
    Ok(DensityMatrix(rho))
}

/// The four-state qubit example: `|psi_AC> = |0>`, `|psi_AD> = |1>`,
/// `|psi_BC> = |+>`, `|psi_BD> = |->` with uniform `p` and `q`.
pub fn two_basis_qubit_example() -> SignalEnsemble {
    let s = 0.5f64.sqrt();
    SignalEnsemble::new(
        vec!["A".into(), "B".into()],
        vec!["C".into(), "D".into()],
        2,
        vec![
            vec![matrix::ket(&[1.0, 0.0]), matrix::ket(&[0.0, 1.0])],
            vec![matrix::ket(&[s, s]), matrix::ket(&[s, -s])],
        ],
        vec![0.5, 0.5],
        vec![0.5, 0.5],
    )
}

/// `|psi_ab> = |a> (x) |b>` with the given distributions: a classical
/// multiple-access channel.
pub fn orthogonal_letters(p: Vec<f64>, q: Vec<f64>) -> SignalEnsemble {
    let (na, nb) = (p.len(), q.len());
    let dim = na * nb;
    let states = (0..na)
        .map(|a| (0..nb).map(|b| matrix::basis(dim, a * nb + b)).collect())
        .collect();
    SignalEnsemble::new(
        (0..na).map(|i| format!("a{i}")).collect(),
        (0..nb).map(|i| format!("b{i}")).collect(),
        dim,
        states,
        p,
        q,
    )
}
