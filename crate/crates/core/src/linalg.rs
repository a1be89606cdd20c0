//! Dense complex linear algebra for the small operators used here
//! (dimension 2 to 16).
//!
//! Qubit ordering: qubit 1 is the most significant bit, so the basis index
//! of `|b1 b2 b3 b4>` is `b1*8 + b2*4 + b3*2 + b4`. Every module in the
//! crate follows this convention.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Asymmetry tolerated before a matrix is rejected as non-Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-8;

/// Eigenvalues in `[-PSD_CLAMP, 0)` are treated as zero; anything more
/// negative is a hard error.
pub const PSD_CLAMP: f64 = 1e-10;

const JACOBI_OFF_TOL: f64 = 1e-14;
const JACOBI_MAX_SWEEPS: usize = 100;

pub(crate) fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Square complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "matrix dimension must be positive");
        Self {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = c(1.0, 0.0);
        }
        m
    }

    pub fn from_diag_real(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = c(d, 0.0);
        }
        m
    }

    /// Builds a matrix from rows; fails with `BadDim` if the rows are ragged
    /// or the matrix is not square.
    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::BadDim {
                expected: 1,
                found: 0,
            });
        }
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::BadDim {
                    expected: dim,
                    found: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(Self { dim, data })
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| c(x, 0.0)).collect())
                .collect(),
        )
    }

    /// `|v><v|` for an amplitude vector.
    pub fn outer(v: &[Complex64]) -> Self {
        let n = v.len();
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = v[i] * v[j].conj();
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Complex64]> {
        self.data.chunks(self.dim)
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(j, i)] = self[(i, j)].conj();
            }
        }
        m
    }

    /// Entrywise complex conjugate (no transpose).
    pub fn conj(&self) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        let n = self.dim;
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(j, i)] = self[(i, j)];
            }
        }
        m
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn scale_complex(&self, s: Complex64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self - other`, with its position.
    pub fn max_abs_diff_at(&self, other: &Self) -> (f64, (usize, usize)) {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let mut best = (0.0, (0, 0));
        for i in 0..self.dim {
            for j in 0..self.dim {
                let d = (self[(i, j)] - other[(i, j)]).norm();
                if d > best.0 {
                    best = (d, (i, j));
                }
            }
        }
        best
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.max_abs_diff_at(other).0
    }

    /// Entrywise comparison with an explicit absolute tolerance.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.dim == other.dim && self.max_abs_diff(other) <= tol
    }

    /// Largest entrywise `|m - m†|`, with its position.
    pub fn hermiticity_residual(&self) -> (f64, (usize, usize)) {
        self.max_abs_diff_at(&self.adjoint())
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_residual().0 <= tol
    }

    /// `(m + m†)/2`.
    pub fn hermitian_part(&self) -> Self {
        (self + &self.adjoint()).scale(0.5)
    }

    /// Frobenius norm of the strictly off-diagonal part.
    fn off_diagonal_norm(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                if i != j {
                    s += self[(i, j)].norm_sqr();
                }
            }
        }
        s.sqrt()
    }

    fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{})", self.dim, self.dim)?;
        for row in self.rows() {
            let cells: Vec<String> = row
                .iter()
                .map(|z| format!("{:+.6}{:+.6}i", z.re, z.im))
                .collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// Kronecker product; entry `(i*b.dim + k, j*b.dim + l) = a[i,j] * b[k,l]`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (na, nb) = (a.dim, b.dim);
    let mut out = ComplexMatrix::zeros(na * nb);
    for i in 0..na {
        for j in 0..na {
            let aij = a[(i, j)];
            for k in 0..nb {
                for l in 0..nb {
                    out[(i * nb + k, j * nb + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Spectral decomposition of a Hermitian matrix. Eigenvalues ascend; column
/// `k` of `eigenvectors` belongs to `eigenvalues[k]`.
#[derive(Clone, Debug)]
pub struct HermitianEig {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEig {
    pub fn min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max(&self) -> f64 {
        *self.eigenvalues.last().unwrap()
    }

    /// `V f(diag(lambda)) V†`.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.eigenvalues.len();
        let v = &self.eigenvectors;
        let fl: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let mut s = c(0.0, 0.0);
                for k in 0..n {
                    s += v[(i, k)] * fl[k] * v[(j, k)].conj();
                }
                out[(i, j)] = s;
            }
        }
        out
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map_spectrum(|l| l)
    }
}

/// Cyclic complex Jacobi eigensolver. The input is symmetrized as
/// `(m + m†)/2` first; asymmetry above [`HERMITIAN_TOL`] is rejected.
pub fn hermitian_eig(m: &ComplexMatrix) -> Result<HermitianEig> {
    let (residual, _) = m.hermiticity_residual();
    if !(residual < HERMITIAN_TOL) {
        return Err(Error::NotHermitian { residual });
    }
    let n = m.dim;
    let mut a = m.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm().max(1.0);

    for _ in 0..JACOBI_MAX_SWEEPS {
        if a.off_diagonal_norm() < JACOBI_OFF_TOL * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                jacobi_rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));

    let mut vecs = ComplexMatrix::zeros(n);
    for (new_col, &old_col) in order.iter().enumerate() {
        for r in 0..n {
            vecs[(r, new_col)] = v[(r, old_col)];
        }
    }
    Ok(HermitianEig {
        eigenvalues: order.iter().map(|&i| diag[i]).collect(),
        eigenvectors: vecs,
    })
}

/// Zeroes `a[p,q]` with the unitary `U = D R`, where `D` removes the phase of
/// `a[p,q]` and `R` is the real Jacobi rotation of the resulting real block.
fn jacobi_rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r < 1e-300 {
        return;
    }
    let n = a.dim;
    let phase = apq / r; // e^{i phi}
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let theta = (aqq - app) / (2.0 * r);
    let t = if theta >= 0.0 {
        1.0 / (theta + (theta * theta + 1.0).sqrt())
    } else {
        -1.0 / (-theta + (theta * theta + 1.0).sqrt())
    };
    let cs = 1.0 / (t * t + 1.0).sqrt();
    let sn = t * cs;

    // U columns: u_p = c e_p - s e^{-i phi} e_q ; u_q = s e_p + c e^{-i phi} e_q
    let e_neg = phase.conj();
    let upp = c(cs, 0.0);
    let uqp = -e_neg * sn;
    let upq = c(sn, 0.0);
    let uqq = e_neg * cs;

    // A <- A U
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * upp + akq * uqp;
        a[(k, q)] = akp * upq + akq * uqq;
    }
    // A <- U† A
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = upp.conj() * apk + uqp.conj() * aqk;
        a[(q, k)] = upq.conj() * apk + uqq.conj() * aqk;
    }
    a[(p, q)] = c(0.0, 0.0);
    a[(q, p)] = c(0.0, 0.0);
    a[(p, p)] = c(a[(p, p)].re, 0.0);
    a[(q, q)] = c(a[(q, q)].re, 0.0);

    // V <- V U
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * upp + vkq * uqp;
        v[(k, q)] = vkp * upq + vkq * uqq;
    }
}

/// Principal square root of a positive semidefinite matrix.
pub fn psd_sqrt(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = hermitian_eig(m)?;
    if eig.min() < -PSD_CLAMP {
        return Err(Error::NotPsd {
            min_eigenvalue: eig.min(),
        });
    }
    Ok(eig.map_spectrum(|l| l.max(0.0).sqrt()))
}

/// Traces out every qubit not listed in `keep` (1-based, qubit 1 most
/// significant). The kept qubits appear in ascending order.
pub fn partial_trace(m: &ComplexMatrix, qubits_total: usize, keep: &[usize]) -> Result<ComplexMatrix> {
    if qubits_total == 0 || qubits_total >= usize::BITS as usize {
        return Err(Error::BadParam(format!("qubit count {qubits_total}")));
    }
    let dim = 1usize << qubits_total;
    if m.dim != dim {
        return Err(Error::BadDim {
            expected: dim,
            found: m.dim,
        });
    }
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    if kept.len() != keep.len() {
        return Err(Error::BadIndex(format!("duplicate qubit in keep set {keep:?}")));
    }
    if let Some(&bad) = kept.iter().find(|&&q| q == 0 || q > qubits_total) {
        return Err(Error::BadIndex(format!(
            "qubit {bad} outside 1..={qubits_total}"
        )));
    }
    if kept.is_empty() || kept.len() == qubits_total {
        return Err(Error::BadIndex(format!(
            "keep set {keep:?} must be a nonempty strict subset of 1..={qubits_total}"
        )));
    }
    let traced: Vec<usize> = (1..=qubits_total).filter(|q| !kept.contains(q)).collect();
    // bit position (from LSB) of qubit q
    let shift = |q: usize| qubits_total - q;
    let spread = |bits: usize, qubits: &[usize]| -> usize {
        qubits
            .iter()
            .enumerate()
            .map(|(pos, &q)| ((bits >> (qubits.len() - 1 - pos)) & 1) << shift(q))
            .sum()
    };

    let out_dim = 1usize << kept.len();
    let mut out = ComplexMatrix::zeros(out_dim);
    for i in 0..out_dim {
        let row_base = spread(i, &kept);
        for j in 0..out_dim {
            let col_base = spread(j, &kept);
            let mut s = c(0.0, 0.0);
            for t in 0..(1usize << traced.len()) {
                let tb = spread(t, &traced);
                s += m[(row_base | tb, col_base | tb)];
            }
            out[(i, j)] = s;
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subsystem {
    First,
    Second,
}

/// Partial transpose of a two-qubit operator on the chosen qubit.
pub fn partial_transpose(m: &ComplexMatrix, subsystem: Subsystem) -> Result<ComplexMatrix> {
    if m.dim != 4 {
        return Err(Error::BadDim {
            expected: 4,
            found: m.dim,
        });
    }
    let mut out = ComplexMatrix::zeros(4);
    for i1 in 0..2 {
        for i2 in 0..2 {
            for j1 in 0..2 {
                for j2 in 0..2 {
                    let (r, cidx) = match subsystem {
                        Subsystem::First => (j1 * 2 + i2, i1 * 2 + j2),
                        Subsystem::Second => (i1 * 2 + j2, j1 * 2 + i2),
                    };
                    out[(i1 * 2 + i2, j1 * 2 + j2)] = m[(r, cidx)];
                }
            }
        }
    }
    Ok(out)
}

/// Sum of absolute eigenvalues of a Hermitian matrix.
pub fn trace_norm(m: &ComplexMatrix) -> Result<f64> {
    Ok(hermitian_eig(m)?.eigenvalues.iter().map(|l| l.abs()).sum())
}

/// Pauli matrices indexed 1 = X, 2 = Y, 3 = Z; 0 gives the identity.
pub fn pauli(k: usize) -> ComplexMatrix {
    let z = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    let rows = match k {
        0 => vec![vec![one, z], vec![z, one]],
        1 => vec![vec![z, one], vec![one, z]],
        2 => vec![vec![z, -i], vec![i, z]],
        3 => vec![vec![one, z], vec![z, -one]],
        _ => panic!("Pauli index {k} not in 0..=3"),
    };
    ComplexMatrix::from_rows(rows).expect("2x2")
}
