//! Photon-counting statistics and Stokes-based state reconstruction.
//!
//! A measurement setting is a half-wave plate followed by a quarter-wave
//! plate in front of a polarizing beamsplitter; the PBS transmits `|H⟩` and
//! reflects `|V⟩`. Coincidence counts are Poisson with mean
//! `rate · duration · Tr(Π ρ)` and every estimator is deterministic given a
//! seed.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};

use crate::elements::{pauli, waveplate_jones, PauliLabel, Polarization, WavePlateSetting};
use crate::error::{Error, Result};
use crate::linalg::{eig_hermitian, ComplexMatrix, DensityMatrix};

/// Output port of the polarizing beamsplitter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolarizationPort {
    /// Transmits `|H⟩`.
    Transmitted,
    /// Reflects `|V⟩`.
    Reflected,
}

impl PolarizationPort {
    pub fn as_str(self) -> &'static str {
        match self {
            PolarizationPort::Transmitted => "T",
            PolarizationPort::Reflected => "R",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "T" => Ok(PolarizationPort::Transmitted),
            "R" => Ok(PolarizationPort::Reflected),
            _ => Err(Error::InvalidParameter("port must be T or R")),
        }
    }
}

/// Wave-plate pair and detector port defining one projective measurement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementSetting {
    pub hwp: WavePlateSetting,
    pub qwp: WavePlateSetting,
    pub port: PolarizationPort,
}

impl MeasurementSetting {
    /// Builds a setting from fast-axis angles in radians.
    pub fn new(hwp_angle: f64, qwp_angle: f64, port: PolarizationPort) -> Self {
        Self {
            hwp: WavePlateSetting::half(hwp_angle),
            qwp: WavePlateSetting::quarter(qwp_angle),
            port,
        }
    }
}

/// The canonical six-setting tomography table. Complementary states share a
/// wave-plate setting and split on the two PBS ports.
pub fn canonical_setting(target: Polarization) -> MeasurementSetting {
    use core::f64::consts::{FRAC_PI_4, FRAC_PI_8};
    use PolarizationPort::{Reflected, Transmitted};
    match target {
        Polarization::H => MeasurementSetting::new(0.0, 0.0, Transmitted),
        Polarization::V => MeasurementSetting::new(0.0, 0.0, Reflected),
        Polarization::D => MeasurementSetting::new(FRAC_PI_8, 0.0, Transmitted),
        Polarization::A => MeasurementSetting::new(FRAC_PI_8, 0.0, Reflected),
        Polarization::L => MeasurementSetting::new(0.0, FRAC_PI_4, Transmitted),
        Polarization::R => MeasurementSetting::new(0.0, FRAC_PI_4, Reflected),
    }
}

/// Rank-1 projector induced by a setting: `Π = J† |port⟩⟨port| J` with
/// `J = J_QWP · J_HWP` (the light passes the HWP first).
pub fn projector_of(setting: &MeasurementSetting) -> DensityMatrix {
    let j = waveplate_jones(&setting.qwp)
        .mul(&waveplate_jones(&setting.hwp))
        .expect("2x2 product");
    let row = match setting.port {
        PolarizationPort::Transmitted => 0,
        PolarizationPort::Reflected => 1,
    };
    let ket = [j.get(row, 0).conj(), j.get(row, 1).conj()];
    DensityMatrix::from_pure(&ket).expect("projector of a unitary row is a valid state")
}

/// One timed coincidence measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct CountsRecord {
    pub setting: MeasurementSetting,
    /// Accumulation time in seconds.
    pub duration: f64,
    pub counts: u64,
    /// Full-setup coincidence rate the simulation was scaled to, in s⁻¹.
    pub rate_reference: f64,
}

/// Draws one Poisson count record from an owned random source.
pub fn sample_counts(
    rho: &DensityMatrix,
    setting: &MeasurementSetting,
    duration: f64,
    rate: f64,
    rng: &mut impl Rng,
) -> Result<CountsRecord> {
    if duration <= 0.0 {
        return Err(Error::InvalidParameter("duration must be positive"));
    }
    if rate < 0.0 {
        return Err(Error::InvalidParameter("rate must be non-negative"));
    }
    let projector = projector_of(setting);
    let mean = (rate * duration * rho.expectation(projector.matrix())?.re).max(0.0);
    let counts = if mean > 0.0 {
        let poisson =
            Poisson::new(mean).map_err(|_| Error::InvalidParameter("invalid Poisson mean"))?;
        poisson.sample(rng) as u64
    } else {
        0
    };
    Ok(CountsRecord {
        setting: *setting,
        duration,
        counts,
        rate_reference: rate,
    })
}

/// Seeded variant of [`sample_counts`]: a fixed seed reproduces the record.
pub fn simulate_counts(
    rho: &DensityMatrix,
    setting: &MeasurementSetting,
    duration: f64,
    rate: f64,
    seed: u64,
) -> Result<CountsRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_counts(rho, setting, duration, rate, &mut rng)
}

/// Simulates the canonical six settings in the order `[H, V, D, A, R, L]`
/// from a single seeded stream.
pub fn simulate_six_counts(
    rho: &DensityMatrix,
    duration: f64,
    rate: f64,
    seed: u64,
) -> Result<[CountsRecord; 6]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: [Option<CountsRecord>; 6] = Default::default();
    for (slot, &target) in Polarization::ALL.iter().enumerate() {
        let setting = canonical_setting(target);
        out[slot] = Some(sample_counts(rho, &setting, duration, rate, &mut rng)?);
    }
    Ok(out.map(|r| r.expect("all six settings simulated")))
}

/// Pauli expectation values `(⟨X⟩, ⟨Y⟩, ⟨Z⟩)` of a polarization state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StokesVector {
    pub s1: f64,
    pub s2: f64,
    pub s3: f64,
}

/// Exact Stokes parameters of a state.
pub fn stokes_of(rho: &DensityMatrix) -> Result<StokesVector> {
    if rho.dim() != 2 {
        return Err(Error::InvalidDimension(rho.dim()));
    }
    Ok(StokesVector {
        s1: rho.expectation(&pauli(PauliLabel::X))?.re,
        s2: rho.expectation(&pauli(PauliLabel::Y))?.re,
        s3: rho.expectation(&pauli(PauliLabel::Z))?.re,
    })
}

/// Stokes estimates from the canonical records, ordered `[H, V, D, A, R, L]`:
/// `sᵢ = (N₊ - N₋) / (N₊ + N₋)` per complementary pair.
pub fn stokes_from_counts(records: &[CountsRecord; 6]) -> Result<StokesVector> {
    let pair = |plus: &CountsRecord, minus: &CountsRecord| -> Result<f64> {
        let total = plus.counts + minus.counts;
        if total == 0 {
            return Err(Error::EmptyCountPair);
        }
        Ok((plus.counts as f64 - minus.counts as f64) / total as f64)
    };
    Ok(StokesVector {
        s3: pair(&records[0], &records[1])?,
        s1: pair(&records[2], &records[3])?,
        s2: pair(&records[4], &records[5])?,
    })
}

/// Linear inversion `ρ̂ = (I + s₁X + s₂Y + s₃Z)/2` with positivity repair:
/// negative eigenvalues are clipped to zero and the trace renormalized.
pub fn reconstruct_from_stokes(s: &StokesVector) -> DensityMatrix {
    let m = ComplexMatrix::from_rows2([
        [
            Complex64::new(0.5 * (1.0 + s.s3), 0.0),
            Complex64::new(0.5 * s.s1, -0.5 * s.s2),
        ],
        [
            Complex64::new(0.5 * s.s1, 0.5 * s.s2),
            Complex64::new(0.5 * (1.0 - s.s3), 0.0),
        ],
    ]);
    match DensityMatrix::new(m.clone()) {
        Ok(rho) => rho,
        Err(_) => {
            let eig = eig_hermitian(&m).expect("linear inversion is Hermitian");
            let total: f64 = eig.values.iter().map(|&l| l.max(0.0)).sum();
            let repaired = eig.reassemble(|l| l.max(0.0) / total);
            DensityMatrix::new(repaired).expect("clipped spectrum is a valid state")
        }
    }
}

/// Full tomography pipeline from counted records.
pub fn reconstruct_state(records: &[CountsRecord; 6]) -> Result<DensityMatrix> {
    Ok(reconstruct_from_stokes(&stokes_from_counts(records)?))
}
