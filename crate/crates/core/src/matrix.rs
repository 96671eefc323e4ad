//! Dense complex Hermitian matrix engine.
//!
//! Every operator in the crate is a `DMatrix<Complex64>`; kets are
//! `DVector<Complex64>`. Composite indices follow the row-major Kronecker
//! convention `i = i_a * dim_b + i_b`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type ComplexMatrix = DMatrix<Complex64>;
pub type ComplexVector = DVector<Complex64>;

/// Tolerance on `max |m - m^H|` accepted as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Eigenvalues below `-NEGATIVE_TOL` reject a matrix as not PSD.
pub const NEGATIVE_TOL: f64 = 1e-10;
/// Eigenvalues at or below this value are treated as zero.
pub const SUPPORT_CUTOFF: f64 = 1e-12;

/// Full spectral decomposition of a Hermitian matrix.
///
/// Eigenvalues are sorted descending. Each eigenvector column has its first
/// component of modulus above `1e-12` rotated to be real and positive; exact
/// eigenvalue ties are then ordered lexicographically by the `(re, im)`
/// entries of the phase-fixed eigenvectors. Identical input gives identical
/// output.
#[derive(Debug, Clone)]
pub struct HermitianEig {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEig {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Column `k` as a ket.
    pub fn vector(&self, k: usize) -> ComplexVector {
        self.eigenvectors.column(k).into_owned()
    }

    /// `V diag(f(lambda)) V^H`.
    pub fn rebuild_with(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let mut scaled = self.eigenvectors.clone();
        for (k, &lambda) in self.eigenvalues.iter().enumerate() {
            let w = f(lambda);
            scaled.column_mut(k).scale_mut(w);
        }
        scaled * self.eigenvectors.adjoint()
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.rebuild_with(|x| x)
    }
}

/// Scalar function applied on the support of a PSD matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixFn {
    Log2,
    Sqrt,
    InvSqrt,
}

impl MatrixFn {
    fn apply(self, x: f64) -> f64 {
        match self {
            MatrixFn::Log2 => x.log2(),
            MatrixFn::Sqrt => x.sqrt(),
            MatrixFn::InvSqrt => 1.0 / x.sqrt(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

fn ensure_square(m: &ComplexMatrix) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    Ok(m.nrows())
}

/// `max |m_ij - conj(m_ji)|`.
pub fn hermitian_deviation(m: &ComplexMatrix) -> f64 {
    let n = m.nrows().min(m.ncols());
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

pub fn ensure_hermitian(m: &ComplexMatrix) -> Result<()> {
    ensure_square(m)?;
    let deviation = hermitian_deviation(m);
    if deviation > HERMITIAN_TOL || !deviation.is_finite() {
        return Err(Error::NotHermitian { deviation });
    }
    Ok(())
}

pub fn max_abs(m: &ComplexMatrix) -> f64 {
    m.iter().fold(0.0f64, |acc, z| acc.max(z.norm()))
}

fn fix_phase(mut v: nalgebra::DVectorViewMut<'_, Complex64>) {
    if let Some(first) = v.iter().find(|z| z.norm() > 1e-12).copied() {
        let rot = first.conj() / first.norm();
        for z in v.iter_mut() {
            *z *= rot;
        }
    }
}

fn lexicographic(a: &[Complex64], b: &[Complex64]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        let ord = x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im));
        if ord.is_ne() {
            return ord;
        }
    }
    std::cmp::Ordering::Equal
}

pub fn eig_hermitian(m: &ComplexMatrix) -> Result<HermitianEig> {
    ensure_hermitian(m)?;
    let n = m.nrows();
    if n == 0 {
        return Ok(HermitianEig {
            eigenvalues: Vec::new(),
            eigenvectors: ComplexMatrix::zeros(0, 0),
        });
    }
    let symmetric = (m + m.adjoint()).scale(0.5);
    let decomposition = SymmetricEigen::new(symmetric);
    let mut vectors = decomposition.eigenvectors;
    for k in 0..n {
        fix_phase(vectors.column_mut(k));
    }
    let columns: Vec<Vec<Complex64>> = (0..n)
        .map(|k| vectors.column(k).iter().copied().collect())
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        decomposition.eigenvalues[j]
            .total_cmp(&decomposition.eigenvalues[i])
            .then_with(|| lexicographic(&columns[i], &columns[j]))
    });
    let eigenvalues = order.iter().map(|&i| decomposition.eigenvalues[i]).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |r, c| columns[order[c]][r]);
    Ok(HermitianEig {
        eigenvalues,
        eigenvectors,
    })
}

/// Apply `f` to the eigenvalues strictly above `support_cutoff`; all other
/// eigenvalues map to zero.
pub fn func_on_support(m: &ComplexMatrix, f: MatrixFn, support_cutoff: f64) -> Result<ComplexMatrix> {
    let eig = eig_hermitian(m)?;
    func_on_eig(&eig, f, support_cutoff)
}

pub fn func_on_eig(eig: &HermitianEig, f: MatrixFn, support_cutoff: f64) -> Result<ComplexMatrix> {
    if let Some(&lowest) = eig.eigenvalues.last() {
        if lowest < -NEGATIVE_TOL {
            return Err(Error::NegativeEigenvalue { value: lowest });
        }
    }
    Ok(eig.rebuild_with(|x| if x > support_cutoff { f.apply(x) } else { 0.0 }))
}

/// Kronecker product.
pub fn tensor_product(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}

pub fn tensor_vectors(a: &ComplexVector, b: &ComplexVector) -> ComplexVector {
    a.kronecker(b)
}

pub fn partial_trace(m: &ComplexMatrix, dims: (usize, usize), keep: Subsystem) -> Result<ComplexMatrix> {
    let n = ensure_square(m)?;
    let (da, db) = dims;
    if da * db != n {
        return Err(Error::DimensionMismatch(format!(
            "partial trace over {da}x{db} subsystems of a {n}x{n} matrix"
        )));
    }
    ensure_hermitian(m)?;
    let out = match keep {
        Subsystem::A => ComplexMatrix::from_fn(da, da, |i, j| {
            (0..db).map(|k| m[(i * db + k, j * db + k)]).sum()
        }),
        Subsystem::B => ComplexMatrix::from_fn(db, db, |k, l| {
            (0..da).map(|i| m[(i * db + k, i * db + l)]).sum()
        }),
    };
    Ok(out)
}

/// `|v><v|`.
pub fn outer(v: &ComplexVector) -> ComplexMatrix {
    v * v.adjoint()
}

pub fn trace_re(m: &ComplexMatrix) -> f64 {
    m.diagonal().iter().map(|z| z.re).sum()
}

/// Real-valued ket from amplitudes.
pub fn ket(entries: &[f64]) -> ComplexVector {
    ComplexVector::from_iterator(entries.len(), entries.iter().map(|&x| Complex64::new(x, 0.0)))
}

/// Computational basis vector `|index>` of dimension `dim`.
pub fn basis(dim: usize, index: usize) -> ComplexVector {
    let mut v = ComplexVector::zeros(dim);
    v[index] = Complex64::new(1.0, 0.0);
    v
}

pub fn real_diag(values: &[f64]) -> ComplexMatrix {
    ComplexMatrix::from_diagonal(&ket(values))
}
