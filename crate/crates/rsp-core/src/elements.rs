//! Fixed operators of the optical bench and parameterized entangled-resource
//! models.
//!
//! Global phases are unobservable, so post-conditions on states are stated
//! up to global phase and checked on density matrices where phases cancel.

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)] // f64 math comes from the trait in no_std builds
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg::{tensor, ComplexMatrix, DensityMatrix};

/// Labels of the single-qubit operator base `{I, X, Y, Z}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PauliLabel {
    I,
    X,
    Y,
    Z,
}

impl PauliLabel {
    pub const ALL: [PauliLabel; 4] = [PauliLabel::I, PauliLabel::X, PauliLabel::Y, PauliLabel::Z];

    pub fn index(self) -> usize {
        match self {
            PauliLabel::I => 0,
            PauliLabel::X => 1,
            PauliLabel::Y => 2,
            PauliLabel::Z => 3,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            PauliLabel::I => "I",
            PauliLabel::X => "X",
            PauliLabel::Y => "Y",
            PauliLabel::Z => "Z",
        }
    }
}

impl core::fmt::Display for PauliLabel {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Standard 2x2 Pauli matrix for the label.
///
/// The set satisfies `Tr(Eₘ Eₙ) = 2δₘₙ`, `Eₘ Eₘ† = I` and `E₀ = I`.
pub fn pauli(label: PauliLabel) -> ComplexMatrix {
    let z = Complex64::ZERO;
    let one = Complex64::ONE;
    let i = Complex64::I;
    match label {
        PauliLabel::I => ComplexMatrix::from_rows2([[one, z], [z, one]]),
        PauliLabel::X => ComplexMatrix::from_rows2([[z, one], [one, z]]),
        PauliLabel::Y => ComplexMatrix::from_rows2([[z, -i], [i, z]]),
        PauliLabel::Z => ComplexMatrix::from_rows2([[one, z], [z, -one]]),
    }
}

/// The six canonical polarization states.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarization {
    H,
    V,
    D,
    A,
    R,
    L,
}

impl Polarization {
    pub const ALL: [Polarization; 6] = [
        Polarization::H,
        Polarization::V,
        Polarization::D,
        Polarization::A,
        Polarization::R,
        Polarization::L,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Polarization::H => "H",
            Polarization::V => "V",
            Polarization::D => "D",
            Polarization::A => "A",
            Polarization::R => "R",
            Polarization::L => "L",
        }
    }

    /// Amplitudes in the `{|H⟩, |V⟩}` basis.
    pub fn ket(self) -> [Complex64; 2] {
        let s = 1.0 / 2.0f64.sqrt();
        match self {
            Polarization::H => [Complex64::ONE, Complex64::ZERO],
            Polarization::V => [Complex64::ZERO, Complex64::ONE],
            Polarization::D => [Complex64::new(s, 0.0), Complex64::new(s, 0.0)],
            Polarization::A => [Complex64::new(s, 0.0), Complex64::new(-s, 0.0)],
            Polarization::R => [Complex64::new(s, 0.0), Complex64::new(0.0, s)],
            Polarization::L => [Complex64::new(s, 0.0), Complex64::new(0.0, -s)],
        }
    }

    pub fn state(self) -> DensityMatrix {
        DensityMatrix::from_pure(&self.ket()).expect("canonical states are valid")
    }
}

impl core::fmt::Display for Polarization {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Projector onto `(|HH⟩ - |VV⟩)/√2`.
pub fn bell_phi_minus() -> DensityMatrix {
    let s = 1.0 / 2.0f64.sqrt();
    let ket = [
        Complex64::new(s, 0.0),
        Complex64::ZERO,
        Complex64::ZERO,
        Complex64::new(-s, 0.0),
    ];
    DensityMatrix::from_pure(&ket).expect("Bell state is a valid density matrix")
}

/// Retardance class of a wave plate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WavePlateKind {
    /// Retardance π.
    Half,
    /// Retardance π/2.
    Quarter,
}

/// A wave plate with its fast axis at `angle` radians from horizontal.
///
/// The angle is normalized into `[0, π)`; a wave plate is invariant under a
/// half-turn of its fast axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WavePlateSetting {
    pub kind: WavePlateKind,
    angle: f64,
}

impl WavePlateSetting {
    pub fn new(kind: WavePlateKind, angle: f64) -> Self {
        let mut a = angle % core::f64::consts::PI;
        if a < 0.0 {
            a += core::f64::consts::PI;
        }
        Self { kind, angle: a }
    }

    pub fn half(angle: f64) -> Self {
        Self::new(WavePlateKind::Half, angle)
    }

    pub fn quarter(angle: f64) -> Self {
        Self::new(WavePlateKind::Quarter, angle)
    }

    pub fn angle(&self) -> f64 {
        self.angle
    }

    fn retardance(&self) -> f64 {
        match self.kind {
            WavePlateKind::Half => core::f64::consts::PI,
            WavePlateKind::Quarter => core::f64::consts::FRAC_PI_2,
        }
    }
}

/// Jones matrix of an ideal wave plate: `R(θ) · diag(1, e^{iδ}) · R(-θ)`.
///
/// A half-wave plate comes out real with eigenvalues ±1 on its fast/slow
/// axes; the quarter-wave plate picks up the factor `i` on the slow axis.
pub fn waveplate_jones(setting: &WavePlateSetting) -> ComplexMatrix {
    let (c, s) = (setting.angle.cos(), setting.angle.sin());
    let phase = Complex64::from_polar(1.0, setting.retardance());
    let cc = Complex64::new(c * c, 0.0);
    let ss = Complex64::new(s * s, 0.0);
    let cs = Complex64::new(c * s, 0.0);
    let off = cs * (Complex64::ONE - phase);
    ComplexMatrix::from_rows2([[cc + phase * ss, off], [off, ss + phase * cc]])
}

/// Intensity transmittance/reflectance of the non-polarizing beamsplitter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamsplitterSpec {
    transmittance: f64,
}

impl BeamsplitterSpec {
    /// `t` is the intensity transmittance, strictly inside (0, 1).
    pub fn new(t: f64) -> Result<Self> {
        if !(t > 0.0 && t < 1.0) {
            return Err(Error::InvalidParameter(
                "beamsplitter transmittance must lie strictly inside (0, 1)",
            ));
        }
        Ok(Self { transmittance: t })
    }

    pub fn balanced() -> Self {
        Self {
            transmittance: 0.5,
        }
    }

    pub fn transmittance(&self) -> f64 {
        self.transmittance
    }

    pub fn reflectance(&self) -> f64 {
        1.0 - self.transmittance
    }
}

/// Real unitary `[[√T, √R], [√R, -√T]]` acting on the path qubit.
///
/// At `T = 0.5` this is exactly the Hadamard gate, which is why the balanced
/// beamsplitter implements the protocol's Hadamard step.
pub fn beamsplitter_unitary(spec: &BeamsplitterSpec) -> ComplexMatrix {
    let t = spec.transmittance().sqrt();
    let r = spec.reflectance().sqrt();
    ComplexMatrix::from_rows2([
        [Complex64::new(t, 0.0), Complex64::new(r, 0.0)],
        [Complex64::new(r, 0.0), Complex64::new(-t, 0.0)],
    ])
}

/// Controlled-X with the path qubit (first tensor factor) as control and the
/// polarization qubit as target: polarization is unchanged on path `|0⟩` and
/// rotated 90 degrees on path `|1⟩`.
pub fn path_cnot() -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(4).expect("4 is a valid dimension");
    m.set(0, 0, Complex64::ONE);
    m.set(1, 1, Complex64::ONE);
    m.set(2, 3, Complex64::ONE);
    m.set(3, 2, Complex64::ONE);
    m
}

/// SU(2) rotation `exp(-i θ/2 n̂·σ)` from a rotation vector (axis direction,
/// angle as magnitude, radians). The zero vector yields the exact identity.
pub fn su2_rotation(rotation: [f64; 3]) -> ComplexMatrix {
    let theta = (rotation[0] * rotation[0] + rotation[1] * rotation[1]
        + rotation[2] * rotation[2])
        .sqrt();
    if theta == 0.0 {
        return ComplexMatrix::identity(2).expect("2 is a valid dimension");
    }
    let n = [
        rotation[0] / theta,
        rotation[1] / theta,
        rotation[2] / theta,
    ];
    let half = theta / 2.0;
    let c = Complex64::new(half.cos(), 0.0);
    let s = Complex64::new(0.0, -half.sin());
    let mut m = ComplexMatrix::identity(2).expect("2 is a valid dimension").scale(c);
    for (k, label) in [PauliLabel::X, PauliLabel::Y, PauliLabel::Z].iter().enumerate() {
        m = m
            .add(&pauli(*label).scale(s * Complex64::new(n[k], 0.0)))
            .expect("same dimension");
    }
    m
}

/// The shared two-qubit entangled state handed to the protocol.
#[derive(Debug, Clone, PartialEq)]
pub enum ResourceModel {
    /// Any tomographically specified 4x4 density matrix.
    Exact(DensityMatrix),
    /// `p·|φ⁻⟩⟨φ⁻| + (1-p)·I/4`.
    Werner(f64),
    /// `(U_A ⊗ U_B)|φ⁻⟩⟨φ⁻|(U_A ⊗ U_B)†` with each local unitary given as a
    /// rotation vector.
    RotatedBell { alice: [f64; 3], bob: [f64; 3] },
}

impl ResourceModel {
    /// The ideal resource: `|φ⁻⟩⟨φ⁻|` exactly.
    pub fn ideal() -> Self {
        ResourceModel::Werner(1.0)
    }
}

/// Materializes a resource model as a two-qubit density matrix.
pub fn realize_resource(model: &ResourceModel) -> Result<DensityMatrix> {
    match model {
        ResourceModel::Exact(rho) => {
            if rho.dim() != 4 {
                return Err(Error::InvalidDimension(rho.dim()));
            }
            Ok(rho.clone())
        }
        ResourceModel::Werner(p) => {
            if !(0.0..=1.0).contains(p) {
                return Err(Error::InvalidParameter(
                    "Werner parameter must lie in [0, 1]",
                ));
            }
            let bell = bell_phi_minus();
            let mixed = ComplexMatrix::identity(4)?.scale(Complex64::new((1.0 - p) / 4.0, 0.0));
            let m = bell
                .matrix()
                .scale(Complex64::new(*p, 0.0))
                .add(&mixed)?;
            DensityMatrix::new(m)
        }
        ResourceModel::RotatedBell { alice, bob } => {
            let u = tensor(&su2_rotation(*alice), &su2_rotation(*bob))?;
            bell_phi_minus().evolve(&u)
        }
    }
}

/// Pure states that the tomography stage probes with; re-exported here so
/// tests can iterate the canonical set.
pub fn canonical_six() -> Vec<DensityMatrix> {
    Polarization::ALL.iter().map(|p| p.state()).collect()
}
