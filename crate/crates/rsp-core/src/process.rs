//! Pauli-basis process tomography, average fidelity, CHSH estimation and the
//! classical measure-and-resend baseline.
//!
//! The process matrix χ represents a channel as `E(ρ) = Σₘₙ χₘₙ Eₘ ρ Eₙ†`
//! over the base `{I, X, Y, Z}`, which satisfies `Tr(Eₘ Eₙ) = 2δₘₙ`,
//! `Eₘ Eₘ† = I` and `E₀ = I`.

use num_complex::Complex64;
#[allow(unused_imports)] // f64 math comes from the trait in no_std builds
use num_traits::Float;
use rand::Rng;

use crate::elements::{pauli, PauliLabel, Polarization};
use crate::error::{Error, Result};
use crate::linalg::{rho_from_bloch, BlochVector, ComplexMatrix, DensityMatrix};
use crate::sample::{uniform_bloch_direction, uniform_pure_qubit};

/// 4x4 Hermitian process matrix in the Pauli basis.
#[derive(Debug, Clone, PartialEq)]
pub struct ChiMatrix {
    mat: ComplexMatrix,
}

impl ChiMatrix {
    /// Wraps a 4x4 Hermitian matrix indexed by `(I, X, Y, Z)`.
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        if mat.dim() != 4 {
            return Err(Error::InvalidDimension(mat.dim()));
        }
        let defect = mat.hermiticity_defect();
        if defect > 1e-10 {
            return Err(Error::NotHermitian(defect));
        }
        Ok(Self { mat })
    }

    /// Diagonal χ of a probabilistic Pauli mixture.
    pub fn from_pauli_weights(weights: [f64; 4]) -> Self {
        let mut mat = ComplexMatrix::zeros(4).expect("4 is a valid dimension");
        for (k, &w) in weights.iter().enumerate() {
            mat.set(k, k, Complex64::new(w, 0.0));
        }
        Self { mat }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn entry(&self, m: PauliLabel, n: PauliLabel) -> Complex64 {
        self.mat.get(m.index(), n.index())
    }

    /// The identity-identity element, real part.
    pub fn chi00(&self) -> f64 {
        self.mat.get(0, 0).re
    }

    /// Applies the represented channel: `E(ρ) = Σₘₙ χₘₙ Eₘ ρ Eₙ†`.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        let mut out = ComplexMatrix::zeros(2)?;
        for &m in &PauliLabel::ALL {
            for &n in &PauliLabel::ALL {
                let w = self.entry(m, n);
                if w == Complex64::ZERO {
                    continue;
                }
                let term = pauli(m)
                    .mul(rho.matrix())?
                    .mul(&pauli(n).adjoint())?
                    .scale(w);
                out = out.add(&term)?;
            }
        }
        DensityMatrix::new(out)
    }

    /// Largest entrywise deviation of `Σₘₙ χₘₙ Eₙ† Eₘ` from the identity;
    /// zero for a trace-preserving process.
    pub fn trace_preservation_defect(&self) -> f64 {
        let mut acc = ComplexMatrix::zeros(2).expect("2 is a valid dimension");
        for &m in &PauliLabel::ALL {
            for &n in &PauliLabel::ALL {
                let w = self.entry(m, n);
                if w == Complex64::ZERO {
                    continue;
                }
                let term = pauli(n).adjoint().mul(&pauli(m)).expect("2x2").scale(w);
                acc = acc.add(&term).expect("2x2");
            }
        }
        acc.max_abs_diff(&ComplexMatrix::identity(2).expect("2 is a valid dimension"))
    }
}

/// Average channel fidelity `F_AV = (2·Re χ₀₀ + 1)/3`.
pub fn avg_fidelity(chi: &ChiMatrix) -> f64 {
    (2.0 * chi.chi00() + 1.0) / 3.0
}

/// Standard single-qubit process tomography from the probe set
/// `{|H⟩, |V⟩, |D⟩, |R⟩}`.
///
/// The channel's action on the operator basis `|i⟩⟨j|` is assembled
/// linearly, packed into the Choi matrix `J = Σᵢⱼ |i⟩⟨j| ⊗ E(|i⟩⟨j|)` and
/// projected onto the Pauli frame via `χₘₙ = ⟨vₘ|J|vₙ⟩/4` with
/// `|vₘ⟩ = (I ⊗ Eₘ)(|00⟩ + |11⟩)`.
pub fn process_tomography<F>(mut channel: F) -> Result<ChiMatrix>
where
    F: FnMut(&DensityMatrix) -> Result<DensityMatrix>,
{
    let out_h = channel(&Polarization::H.state())?.matrix().clone();
    let out_v = channel(&Polarization::V.state())?.matrix().clone();
    let out_d = channel(&Polarization::D.state())?.matrix().clone();
    let out_r = channel(&Polarization::R.state())?.matrix().clone();

    let half = Complex64::new(0.5, 0.0);
    let sum_hv = out_h.add(&out_v)?;
    // E(|0⟩⟨1|) = E(D) + i·E(R) - (1+i)/2 · (E(|0⟩⟨0|) + E(|1⟩⟨1|)).
    let e01 = out_d
        .add(&out_r.scale(Complex64::I))?
        .sub(&sum_hv.scale(half * (Complex64::ONE + Complex64::I)))?;
    let e10 = out_d
        .sub(&out_r.scale(Complex64::I))?
        .sub(&sum_hv.scale(half * (Complex64::ONE - Complex64::I)))?;

    let blocks = [[&out_h, &e01], [&e10, &out_v]];
    let mut choi = ComplexMatrix::zeros(4)?;
    for (i, row) in blocks.iter().enumerate() {
        for (j, block) in row.iter().enumerate() {
            for k in 0..2 {
                for l in 0..2 {
                    choi.set(2 * i + k, 2 * j + l, block.get(k, l));
                }
            }
        }
    }

    let mut chi = ComplexMatrix::zeros(4)?;
    let basis_vec = |label: PauliLabel| -> [Complex64; 4] {
        let e = pauli(label);
        // v[2i + k] = ⟨k|E|i⟩.
        [e.get(0, 0), e.get(1, 0), e.get(0, 1), e.get(1, 1)]
    };
    for &m in &PauliLabel::ALL {
        let vm = basis_vec(m);
        for &n in &PauliLabel::ALL {
            let vn = basis_vec(n);
            let mut acc = Complex64::ZERO;
            for (a, vm_a) in vm.iter().enumerate() {
                for (b, vn_b) in vn.iter().enumerate() {
                    acc += vm_a.conj() * choi.get(a, b) * vn_b;
                }
            }
            chi.set(m.index(), n.index(), acc * Complex64::new(0.25, 0.0));
        }
    }
    // The construction is Hermitian up to rounding; symmetrize exactly.
    let chi = chi
        .add(&chi.adjoint())?
        .scale(Complex64::new(0.5, 0.0));
    ChiMatrix::new(chi)
}

/// Analyzer angles of the Bell test, radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChshAngles {
    pub a: f64,
    pub a_prime: f64,
    pub b: f64,
    pub b_prime: f64,
}

impl ChshAngles {
    /// The angle set maximizing `S` for the `|φ⁻⟩` resource.
    pub fn optimal_phi_minus() -> Self {
        use core::f64::consts::PI;
        Self {
            a: 0.0,
            a_prime: PI / 4.0,
            b: -PI / 8.0,
            b_prime: -3.0 * PI / 8.0,
        }
    }
}

/// Dichotomic linear-polarizer observable at angle θ:
/// `A(θ) = |θ⟩⟨θ| - |θ⊥⟩⟨θ⊥| = cos 2θ · Z + sin 2θ · X`.
pub fn polarizer_observable(theta: f64) -> ComplexMatrix {
    pauli(PauliLabel::Z)
        .scale(Complex64::new((2.0 * theta).cos(), 0.0))
        .add(&pauli(PauliLabel::X).scale(Complex64::new((2.0 * theta).sin(), 0.0)))
        .expect("2x2 sum")
}

/// Two-party correlation `E(θ_A, θ_B) = Tr[ρ (A ⊗ B)]`.
pub fn correlation(rho4: &DensityMatrix, theta_a: f64, theta_b: f64) -> Result<f64> {
    if rho4.dim() != 4 {
        return Err(Error::InvalidDimension(rho4.dim()));
    }
    let ab = crate::linalg::tensor(
        &polarizer_observable(theta_a),
        &polarizer_observable(theta_b),
    )?;
    Ok(rho4.expectation(&ab)?.re)
}

/// CHSH estimator `S = |E(a,b) - E(a,b') + E(a',b) + E(a',b')|`.
pub fn chsh(rho4: &DensityMatrix, angles: &ChshAngles) -> Result<f64> {
    let e = |ta: f64, tb: f64| correlation(rho4, ta, tb);
    Ok(
        (e(angles.a, angles.b)? - e(angles.a, angles.b_prime)?
            + e(angles.a_prime, angles.b)?
            + e(angles.a_prime, angles.b_prime)?)
        .abs(),
    )
}

/// Fidelity of one measure-and-resend round: project the input onto the
/// basis along `basis` and resend the outcome eigenstate.
///
/// With outcome probabilities `p±` the resent-state fidelity averages to
/// `p₊² + p₋²`.
pub fn measure_resend_fidelity(input: &DensityMatrix, basis: &BlochVector) -> Result<f64> {
    if input.dim() != 2 {
        return Err(Error::InvalidDimension(input.dim()));
    }
    let plus = rho_from_bloch(basis)?;
    let p_plus = input.expectation(plus.matrix())?.re.clamp(0.0, 1.0);
    let p_minus = 1.0 - p_plus;
    Ok(p_plus * p_plus + p_minus * p_minus)
}

/// Mean measure-and-resend fidelity over uniformly sampled pure inputs and
/// uniformly random measurement bases. Converges to 2/3, the best fidelity
/// attainable without the entangled resource.
pub fn classical_baseline(samples: usize, rng: &mut impl Rng) -> Result<f64> {
    if samples < 10_000 {
        return Err(Error::InvalidParameter(
            "classical baseline needs at least 10^4 samples",
        ));
    }
    let mut acc = 0.0;
    for _ in 0..samples {
        let input = uniform_pure_qubit(rng);
        let basis = uniform_bloch_direction(rng);
        acc += measure_resend_fidelity(&input, &basis)?;
    }
    Ok(acc / samples as f64)
}
