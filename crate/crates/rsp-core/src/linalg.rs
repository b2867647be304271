//! Complex matrix algebra for Hilbert-space dimensions 2, 4 and 8.
//!
//! Matrices are dense, row-major and restricted to the three dimensions the
//! simulator uses, so every operation stays exact and cheap. Basis
//! conventions are fixed globally: `|H⟩ ↔ |0⟩` is the +Z eigenstate,
//! `|V⟩ ↔ |1⟩`, `|D⟩ = (|H⟩+|V⟩)/√2` is +X and `|R⟩` is +Y. Bloch
//! components are extracted with `ρ01 = (px - i·py)/2`.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)] // f64 math comes from the trait in no_std builds
use num_traits::Float;

use crate::error::{Error, Result};

/// Entrywise tolerance for Hermiticity and unit trace of a density matrix.
pub const DENSITY_TOL: f64 = 1e-12;
/// Smallest eigenvalue a density matrix may carry and still be accepted.
pub const POSITIVITY_TOL: f64 = 1e-10;
/// Hermiticity tolerance accepted by the eigensolver.
const EIG_HERMITICITY_TOL: f64 = 1e-10;

const VALID_DIMS: [usize; 3] = [2, 4, 8];

/// Dense square complex matrix of dimension 2, 4 or 8.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Zero matrix of the given dimension.
    pub fn zeros(dim: usize) -> Result<Self> {
        if !VALID_DIMS.contains(&dim) {
            return Err(Error::InvalidDimension(dim));
        }
        Ok(Self {
            dim,
            data: vec![Complex64::ZERO; dim * dim],
        })
    }

    /// Identity matrix of the given dimension.
    pub fn identity(dim: usize) -> Result<Self> {
        let mut m = Self::zeros(dim)?;
        for i in 0..dim {
            m.set(i, i, Complex64::ONE);
        }
        Ok(m)
    }

    /// Builds a matrix from row-major entries; the length must be `dim²`.
    pub fn from_vec(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if !VALID_DIMS.contains(&dim) {
            return Err(Error::InvalidDimension(dim));
        }
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                left: dim * dim,
                right: data.len(),
            });
        }
        Ok(Self { dim, data })
    }

    /// Builds a 2x2 matrix from rows.
    pub fn from_rows2(rows: [[Complex64; 2]; 2]) -> Self {
        Self {
            dim: 2,
            data: vec![rows[0][0], rows[0][1], rows[1][0], rows[1][1]],
        }
    }

    /// Outer product `|ket⟩⟨ket|` of an amplitude vector.
    pub fn outer(ket: &[Complex64]) -> Result<Self> {
        let dim = ket.len();
        let mut m = Self::zeros(dim)?;
        for i in 0..dim {
            for j in 0..dim {
                m.set(i, j, ket[i] * ket[j].conj());
            }
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.data[row * self.dim + col] = value;
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    fn check_same_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        Ok(())
    }

    /// Matrix product `self · rhs`.
    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        self.check_same_dim(rhs)?;
        let n = self.dim;
        let mut out = Self::zeros(n)?;
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == Complex64::ZERO {
                    continue;
                }
                for j in 0..n {
                    let v = out.get(i, j) + a * rhs.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    /// Applies the matrix to a column vector.
    pub fn mul_vec(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: v.len(),
            });
        }
        let mut out = vec![Complex64::ZERO; self.dim];
        for (i, out_i) in out.iter_mut().enumerate() {
            for (j, v_j) in v.iter().enumerate() {
                *out_i += self.get(i, j) * v_j;
            }
        }
        Ok(out)
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.check_same_dim(rhs)?;
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Self {
            dim: self.dim,
            data,
        })
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.check_same_dim(rhs)?;
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Self {
            dim: self.dim,
            data,
        })
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|a| a * factor).collect(),
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n).expect("dimension already validated");
        for i in 0..n {
            for j in 0..n {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// Unitary conjugation `u · self · u†`.
    pub fn conjugate_with(&self, u: &Self) -> Result<Self> {
        u.mul(self)?.mul(&u.adjoint())
    }

    /// Largest entrywise distance to another matrix.
    pub fn max_abs_diff(&self, rhs: &Self) -> f64 {
        self.data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest entrywise deviation from the conjugate transpose.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.dim {
            for j in i..self.dim {
                let d = (self.get(i, j) - self.get(j, i).conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    /// Largest entrywise deviation of `self† · self` from the identity.
    pub fn unitarity_defect(&self) -> f64 {
        let eye = Self::identity(self.dim).expect("dimension already validated");
        match self.adjoint().mul(self) {
            Ok(p) => p.max_abs_diff(&eye),
            Err(_) => f64::INFINITY,
        }
    }
}

/// Kronecker product with `a` as the left (most significant) factor.
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let dim = a.dim() * b.dim();
    if dim > 8 {
        return Err(Error::DimensionOverflow(dim));
    }
    let mut out = ComplexMatrix::zeros(dim)?;
    for ia in 0..a.dim() {
        for ja in 0..a.dim() {
            let f = a.get(ia, ja);
            for ib in 0..b.dim() {
                for jb in 0..b.dim() {
                    out.set(ia * b.dim() + ib, ja * b.dim() + jb, f * b.get(ib, jb));
                }
            }
        }
    }
    Ok(out)
}

/// Result of a Hermitian eigendecomposition.
///
/// Eigenvalues are sorted descending; `vectors` holds the matching
/// orthonormal eigenvectors as columns.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    /// Reassembles `V · diag(f(λ)) · V†`.
    pub fn reassemble(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.vectors.dim();
        let mut out = ComplexMatrix::zeros(n).expect("dimension already validated");
        for (k, &lambda) in self.values.iter().enumerate() {
            let w = f(lambda);
            if w == 0.0 {
                continue;
            }
            for i in 0..n {
                for j in 0..n {
                    let v = out.get(i, j)
                        + self.vectors.get(i, k) * self.vectors.get(j, k).conj() * w;
                    out.set(i, j, v);
                }
            }
        }
        out
    }
}

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi
/// rotations.
///
/// Each rotation zeroes one off-diagonal pair exactly; the sweep converges
/// quadratically, which at dimension 8 reaches machine precision in a
/// handful of passes. Rejects inputs whose Hermiticity defect exceeds 1e-10.
pub fn eig_hermitian(m: &ComplexMatrix) -> Result<HermitianEigen> {
    let defect = m.hermiticity_defect();
    if defect > EIG_HERMITICITY_TOL {
        return Err(Error::NotHermitian(defect));
    }
    let n = m.dim();

    // Work on the exactly Hermitian average (m + m†)/2.
    let mut a = m.add(&m.adjoint())?.scale(Complex64::new(0.5, 0.0));
    let mut v = ComplexMatrix::identity(n)?;

    let scale = a
        .entries()
        .iter()
        .map(|c| c.norm())
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    let stop = 1e-15 * scale;

    let mut converged = false;
    for _ in 0..64 {
        let mut max_off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                max_off = max_off.max(a.get(p, q).norm());
            }
        }
        if max_off <= stop {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a.get(p, q);
                let mag = apq.norm();
                if mag <= stop * 1e-2 {
                    continue;
                }
                let app = a.get(p, p).re;
                let aqq = a.get(q, q).re;
                let tau = (app - aqq) / (2.0 * mag);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    1.0 / (tau - (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let phase = apq / mag;

                // Rows: a ← U† a with u_pp = c, u_pq = -s·phase,
                // u_qp = s·conj(phase), u_qq = c.
                for j in 0..n {
                    let rp = a.get(p, j);
                    let rq = a.get(q, j);
                    a.set(p, j, rp * c + rq * s * phase);
                    a.set(q, j, rq * c - rp * s * phase.conj());
                }
                // Columns: a ← a U, and accumulate v ← v U.
                for i in 0..n {
                    let cp = a.get(i, p);
                    let cq = a.get(i, q);
                    a.set(i, p, cp * c + cq * s * phase.conj());
                    a.set(i, q, cq * c - cp * s * phase);

                    let vp = v.get(i, p);
                    let vq = v.get(i, q);
                    v.set(i, p, vp * c + vq * s * phase.conj());
                    v.set(i, q, vq * c - vp * s * phase);
                }
            }
        }
    }
    if !converged {
        // One final check: the last sweep may have reached the threshold.
        let mut max_off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                max_off = max_off.max(a.get(p, q).norm());
            }
        }
        if max_off > stop {
            return Err(Error::NoConvergence);
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let values_raw: Vec<f64> = (0..n).map(|i| a.get(i, i).re).collect();
    order.sort_by(|&i, &j| values_raw[j].partial_cmp(&values_raw[i]).expect("finite"));

    let mut vectors = ComplexMatrix::zeros(n)?;
    let mut values = Vec::with_capacity(n);
    for (dst, &src) in order.iter().enumerate() {
        values.push(values_raw[src]);
        for i in 0..n {
            vectors.set(i, dst, v.get(i, src));
        }
    }
    Ok(HermitianEigen { values, vectors })
}

/// Hermitian, unit-trace, positive-semidefinite state operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates the three density-matrix invariants and wraps the matrix.
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        let defect = mat.hermiticity_defect();
        if defect > DENSITY_TOL {
            return Err(Error::NotHermitian(defect));
        }
        let trace_defect = (mat.trace() - Complex64::ONE).norm();
        if trace_defect > DENSITY_TOL {
            return Err(Error::NonUnitTrace(trace_defect));
        }
        let eig = eig_hermitian(&mat)?;
        let min = eig.values.last().copied().unwrap_or(0.0);
        if min < -POSITIVITY_TOL {
            return Err(Error::NotPositive(min));
        }
        Ok(Self { mat })
    }

    /// Pure-state projector `|ψ⟩⟨ψ|`; the amplitude vector is normalized.
    pub fn from_pure(ket: &[Complex64]) -> Result<Self> {
        let norm_sq: f64 = ket.iter().map(|c| c.norm_sqr()).sum();
        if norm_sq <= 0.0 {
            return Err(Error::InvalidParameter("state vector has zero norm"));
        }
        let inv = 1.0 / norm_sq.sqrt();
        let normalized: Vec<Complex64> = ket.iter().map(|c| c * inv).collect();
        Ok(Self {
            mat: ComplexMatrix::outer(&normalized)?,
        })
    }

    /// `I/dim`, the maximally mixed state.
    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        let m = ComplexMatrix::identity(dim)?;
        Ok(Self {
            mat: m.scale(Complex64::new(1.0 / dim as f64, 0.0)),
        })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    /// Expectation value `Tr(ρ · op)`.
    pub fn expectation(&self, op: &ComplexMatrix) -> Result<Complex64> {
        Ok(self.mat.mul(op)?.trace())
    }

    /// Unitary evolution `u ρ u†`.
    pub fn evolve(&self, u: &ComplexMatrix) -> Result<Self> {
        Self::new(self.mat.conjugate_with(u)?)
    }

    /// Product state `self ⊗ other` with `self` as the left factor.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        Self::new(tensor(&self.mat, &other.mat)?)
    }

    /// Eigenvalues sorted descending.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        Ok(eig_hermitian(&self.mat)?.values)
    }
}

/// Reduced state over the kept subsystems (qubit 0 is the most significant
/// tensor factor). `keep` must be strictly increasing and non-empty.
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    let qubits = rho.dim().trailing_zeros() as usize;
    if keep.is_empty()
        || keep.windows(2).any(|w| w[0] >= w[1])
        || keep.iter().any(|&q| q >= qubits)
    {
        return Err(Error::InvalidSubsystem);
    }
    let traced: Vec<usize> = (0..qubits).filter(|q| !keep.contains(q)).collect();
    let dim_out = 1usize << keep.len();
    let dim_tr = 1usize << traced.len();

    // Scatter the bits of a reduced index back into the full index.
    let compose = |kept_bits: usize, traced_bits: usize| -> usize {
        let mut idx = 0usize;
        for (pos, &q) in keep.iter().enumerate() {
            let bit = (kept_bits >> (keep.len() - 1 - pos)) & 1;
            idx |= bit << (qubits - 1 - q);
        }
        for (pos, &q) in traced.iter().enumerate() {
            let bit = (traced_bits >> (traced.len() - 1 - pos)) & 1;
            idx |= bit << (qubits - 1 - q);
        }
        idx
    };

    let mut out = ComplexMatrix::zeros(dim_out)?;
    for i in 0..dim_out {
        for j in 0..dim_out {
            let mut acc = Complex64::ZERO;
            for t in 0..dim_tr {
                acc += rho.matrix().get(compose(i, t), compose(j, t));
            }
            out.set(i, j, acc);
        }
    }
    DensityMatrix::new(out)
}

/// Uhlmann fidelity `F = (Tr√(√ρ σ √ρ))²`.
///
/// At dimension 2 the closed form `Tr(ρσ) + 2√(det ρ · det σ)` is used.
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            left: rho.dim(),
            right: sigma.dim(),
        });
    }
    let f = if rho.dim() == 2 {
        let overlap = rho.matrix().mul(sigma.matrix())?.trace().re;
        let det = |m: &ComplexMatrix| (m.get(0, 0) * m.get(1, 1) - m.get(0, 1) * m.get(1, 0)).re;
        let dr = det(rho.matrix()).max(0.0);
        let ds = det(sigma.matrix()).max(0.0);
        overlap + 2.0 * (dr * ds).sqrt()
    } else {
        let sqrt_rho = eig_hermitian(rho.matrix())?.reassemble(|l| l.max(0.0).sqrt());
        let inner = sqrt_rho.mul(sigma.matrix())?.mul(&sqrt_rho)?;
        let sum: f64 = eig_hermitian(&inner)?
            .values
            .iter()
            .map(|&l| l.max(0.0).sqrt())
            .sum();
        sum * sum
    };
    Ok(f.clamp(0.0, 1.0))
}

/// `Tr(ρ²)`, which for a Hermitian matrix is the sum of squared entry
/// magnitudes.
pub fn purity(rho: &DensityMatrix) -> f64 {
    rho.matrix().entries().iter().map(|c| c.norm_sqr()).sum()
}

/// Real Bloch vector of a single-qubit state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector {
    pub px: f64,
    pub py: f64,
    pub pz: f64,
}

impl BlochVector {
    pub fn new(px: f64, py: f64, pz: f64) -> Self {
        Self { px, py, pz }
    }

    /// Modulus `|p|`; equals the visibility of a prepared state.
    pub fn norm(&self) -> f64 {
        (self.px * self.px + self.py * self.py + self.pz * self.pz).sqrt()
    }
}

/// Bloch components of a 2-dimensional state under the convention
/// `ρ01 = (px - i·py)/2`.
pub fn bloch_from_rho(rho: &DensityMatrix) -> Result<BlochVector> {
    if rho.dim() != 2 {
        return Err(Error::InvalidDimension(rho.dim()));
    }
    let m = rho.matrix();
    Ok(BlochVector {
        px: 2.0 * m.get(0, 1).re,
        py: -2.0 * m.get(0, 1).im,
        pz: (m.get(0, 0) - m.get(1, 1)).re,
    })
}

/// `ρ = (I + px·X + py·Y + pz·Z)/2`; rejects vectors outside the Bloch ball.
pub fn rho_from_bloch(p: &BlochVector) -> Result<DensityMatrix> {
    let norm = p.norm();
    if norm > 1.0 + POSITIVITY_TOL {
        return Err(Error::BlochNormTooLarge(norm));
    }
    let half = 0.5;
    let m = ComplexMatrix::from_rows2([
        [
            Complex64::new(half * (1.0 + p.pz), 0.0),
            Complex64::new(half * p.px, -half * p.py),
        ],
        [
            Complex64::new(half * p.px, half * p.py),
            Complex64::new(half * (1.0 - p.pz), 0.0),
        ],
    ]);
    DensityMatrix::new(m)
}
