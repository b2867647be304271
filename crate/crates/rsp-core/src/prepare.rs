//! Preparation of the path-qubit input state from interferometer settings.
//!
//! The prepared state is controlled by two relative phases and by a path
//! mismatch ΔL that degrades the fringe visibility through the finite
//! coherence length of the photons. All lengths are in meters, phases in
//! radians.

use num_complex::Complex64;
#[allow(unused_imports)] // f64 math comes from the trait in no_std builds
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, DensityMatrix};

/// Default wavelength: 810 nm.
pub const DEFAULT_WAVELENGTH: f64 = 810e-9;
/// Default FWHM of the visibility envelope: 15 μm.
pub const DEFAULT_ENVELOPE_FWHM: f64 = 15e-6;

/// Envelope shape for the visibility curve.
///
/// Gaussian is the minimal model consistent with the measured FWHM; the enum
/// leaves room for other envelopes without touching callers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EnvelopeShape {
    #[default]
    Gaussian,
}

/// Wavelength and coherence envelope of the photon pairs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherenceModel {
    pub wavelength: f64,
    pub envelope_fwhm: f64,
    pub shape: EnvelopeShape,
}

impl CoherenceModel {
    pub fn new(wavelength: f64, envelope_fwhm: f64, shape: EnvelopeShape) -> Result<Self> {
        if wavelength <= 0.0 || envelope_fwhm <= 0.0 {
            return Err(Error::InvalidParameter(
                "wavelength and envelope FWHM must be positive",
            ));
        }
        Ok(Self {
            wavelength,
            envelope_fwhm,
            shape,
        })
    }
}

impl Default for CoherenceModel {
    fn default() -> Self {
        Self {
            wavelength: DEFAULT_WAVELENGTH,
            envelope_fwhm: DEFAULT_ENVELOPE_FWHM,
            shape: EnvelopeShape::Gaussian,
        }
    }
}

/// Fringe visibility at a signed path mismatch:
/// `V(ΔL) = exp(-4 ln2 · ΔL² / FWHM²)`.
pub fn visibility(delta_l: f64, model: &CoherenceModel) -> f64 {
    match model.shape {
        EnvelopeShape::Gaussian => {
            let x = delta_l / model.envelope_fwhm;
            (-4.0 * core::f64::consts::LN_2 * x * x).exp()
        }
    }
}

/// Visibility after `n` full-cycle phase shifts, i.e. at mismatch `n·λ`.
pub fn cycle_step_visibility(n: u32, model: &CoherenceModel) -> f64 {
    visibility(n as f64 * model.wavelength, model)
}

/// Phase corresponding to a path-length difference: `2π · ΔL / λ`.
pub fn path_phase(delta_l: f64, wavelength: f64) -> f64 {
    core::f64::consts::TAU * delta_l / wavelength
}

/// Interferometer settings defining the remotely prepared qubit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PreparationSettings {
    /// Relative phase between the two paths inside the interferometer.
    pub dphi1: f64,
    /// Additional relative phase at the output.
    pub dphi2: f64,
    /// Signed arm-length mismatch controlling the degree of mixture.
    pub path_mismatch: f64,
    pub coherence: CoherenceModel,
    /// Optional actuator quantization: phases are rounded to the nearest
    /// multiple of this step. Off by default so exact settings stay exact.
    pub quantize_step: Option<f64>,
}

impl PreparationSettings {
    pub fn new(dphi1: f64, dphi2: f64, path_mismatch: f64, coherence: CoherenceModel) -> Self {
        Self {
            dphi1,
            dphi2,
            path_mismatch,
            coherence,
            quantize_step: None,
        }
    }

    pub fn with_quantization(mut self, step: f64) -> Self {
        self.quantize_step = Some(step);
        self
    }

    /// Visibility realized by these settings.
    pub fn visibility(&self) -> f64 {
        visibility(self.path_mismatch, &self.coherence)
    }

    fn effective_phases(&self) -> (f64, f64) {
        match self.quantize_step {
            Some(step) if step > 0.0 => (
                (self.dphi1 / step).round() * step,
                (self.dphi2 / step).round() * step,
            ),
            _ => (self.dphi1, self.dphi2),
        }
    }
}

/// The accessible input states of the preparation stage:
///
/// ```text
/// ρ = 1/2 · [ 1 + V·cos Δφ₁              i e^{-iΔφ₂} V·sin Δφ₁ ]
///           [ -i e^{iΔφ₂} V·sin Δφ₁      1 - V·cos Δφ₁         ]
/// ```
///
/// with `V = visibility(ΔL)`. The Bloch modulus equals `V` and the purity is
/// `(1 + V²)/2`.
pub fn prepare_input(settings: &PreparationSettings) -> DensityMatrix {
    let v = settings.visibility();
    let (dphi1, dphi2) = settings.effective_phases();
    let diag = v * dphi1.cos();
    let off = Complex64::I * Complex64::from_polar(1.0, -dphi2) * (v * dphi1.sin() * 0.5);
    let m = ComplexMatrix::from_rows2([
        [Complex64::new(0.5 * (1.0 + diag), 0.0), off],
        [off.conj(), Complex64::new(0.5 * (1.0 - diag), 0.0)],
    ]);
    DensityMatrix::new(m).expect("prepared state is a valid density matrix")
}

/// Phase increment reported both in radians and as a fraction of λ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseStep {
    pub radians: f64,
    pub wavelength_fraction: f64,
}

impl PhaseStep {
    pub fn from_radians(radians: f64) -> Self {
        Self {
            radians,
            wavelength_fraction: radians / core::f64::consts::TAU,
        }
    }

    /// A step of `f·λ` optical path, e.g. `1/300` for λ/300.
    pub fn from_wavelength_fraction(fraction: f64) -> Self {
        Self {
            radians: core::f64::consts::TAU * fraction,
            wavelength_fraction: fraction,
        }
    }
}

/// Phase per actuator step once the usable actuator range has been
/// calibrated to span one full 2π cycle.
pub fn calibrated_step_phase(steps_per_cycle: u32) -> Result<f64> {
    if steps_per_cycle == 0 {
        return Err(Error::InvalidParameter("steps per cycle must be positive"));
    }
    Ok(core::f64::consts::TAU / steps_per_cycle as f64)
}

/// A plane-parallel phase plate tilted in one interferometer arm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TiltedPlate {
    pub thickness: f64,
    pub refractive_index: f64,
    pub wavelength: f64,
}

impl TiltedPlate {
    pub fn new(thickness: f64, refractive_index: f64, wavelength: f64) -> Result<Self> {
        if thickness <= 0.0 || refractive_index <= 1.0 || wavelength <= 0.0 {
            return Err(Error::InvalidParameter(
                "plate geometry must be positive with refractive index above 1",
            ));
        }
        Ok(Self {
            thickness,
            refractive_index,
            wavelength,
        })
    }

    /// Optical phase added by tilting the plate to `tilt` radians, relative
    /// to normal incidence:
    /// `φ(θ) = 2π t/λ · (√(n² - sin²θ) - cos θ - (n - 1))`.
    pub fn tilt_phase(&self, tilt: f64) -> f64 {
        let n = self.refractive_index;
        let s = tilt.sin();
        let opd = (n * n - s * s).sqrt() - tilt.cos() - (n - 1.0);
        core::f64::consts::TAU * self.thickness * opd / self.wavelength
    }

    /// Phase increment of one actuator step taken from `offset` tilt.
    pub fn phase_resolution(&self, offset: f64, actuator_step: f64) -> PhaseStep {
        PhaseStep::from_radians(self.tilt_phase(offset + actuator_step) - self.tilt_phase(offset))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{bloch_from_rho, purity};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const MICRON: f64 = 1e-6;

    #[test]
    fn visibility_at_matched_arms_is_one() {
        assert_eq!(visibility(0.0, &CoherenceModel::default()), 1.0);
    }

    #[test]
    fn visibility_at_14_microns_brackets_the_reference_point() {
        let v = visibility(14.0 * MICRON, &CoherenceModel::default());
        assert_abs_diff_eq!(v, 0.0893, epsilon = 1e-3);
        assert!((0.07..=0.11).contains(&v));
        let p = (1.0 + v * v) / 2.0;
        assert!((0.5025..=0.506).contains(&p));
    }

    #[test]
    fn visibility_half_maximum_at_half_fwhm() {
        let v = visibility(7.5 * MICRON, &CoherenceModel::default());
        assert_abs_diff_eq!(v, 0.5, epsilon = 1e-12);
    }

    #[test]
    fn cycle_steps_match_reference_scan() {
        let model = CoherenceModel::default();
        assert_eq!(cycle_step_visibility(0, &model), 1.0);
        assert_abs_diff_eq!(cycle_step_visibility(17, &model), 0.0967, epsilon = 1e-3);

        let mut max_step = 0.0f64;
        let mut prev = 1.0;
        for n in 1..60 {
            let v = cycle_step_visibility(n, &model);
            assert!(v <= prev + 1e-15, "monotone non-increasing");
            max_step = max_step.max(prev - v);
            prev = v;
        }
        assert!((0.05..=0.09).contains(&max_step), "max step {max_step}");
    }

    #[test]
    fn prepared_state_poles() {
        let model = CoherenceModel::default();
        // Δφ₁ = 0 puts the state at |0⟩ regardless of Δφ₂.
        for dphi2 in [0.0, 1.3, -2.0] {
            let rho = prepare_input(&PreparationSettings::new(0.0, dphi2, 0.0, model));
            let b = bloch_from_rho(&rho).unwrap();
            assert_abs_diff_eq!(b.pz, 1.0, epsilon = 1e-12);
            assert_abs_diff_eq!(b.px, 0.0, epsilon = 1e-12);
            assert_abs_diff_eq!(b.py, 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn prepared_state_equal_superposition_is_minus_y() {
        let model = CoherenceModel::default();
        let rho = prepare_input(&PreparationSettings::new(
            core::f64::consts::FRAC_PI_2,
            0.0,
            0.0,
            model,
        ));
        let b = bloch_from_rho(&rho).unwrap();
        assert_abs_diff_eq!(b.px, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(b.py, -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(b.pz, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn zero_visibility_gives_maximally_mixed() {
        let model = CoherenceModel::new(810e-9, 1e-6, EnvelopeShape::Gaussian).unwrap();
        // 1 mm mismatch against a 1 μm envelope: V underflows to 0.
        let rho = prepare_input(&PreparationSettings::new(
            core::f64::consts::FRAC_PI_2,
            0.7,
            1e-3,
            model,
        ));
        assert_abs_diff_eq!(purity(&rho), 0.5, epsilon = 1e-12);
    }

    #[test]
    fn purity_law_over_random_settings() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let model = CoherenceModel::default();
        for _ in 0..1000 {
            let s = PreparationSettings::new(
                rng.random_range(0.0..core::f64::consts::TAU),
                rng.random_range(0.0..core::f64::consts::TAU),
                rng.random_range(-30e-6..30e-6),
                model,
            );
            let rho = prepare_input(&s);
            let v = s.visibility();
            assert_abs_diff_eq!(purity(&rho), (1.0 + v * v) / 2.0, epsilon = 1e-12);
            assert_abs_diff_eq!(bloch_from_rho(&rho).unwrap().norm(), v, epsilon = 1e-12);
        }
    }

    #[test]
    fn phi1_sweep_traces_zy_circle_and_phi2_sweep_traces_equator() {
        let model = CoherenceModel::default();
        let v_target = 0.6;
        // Invert the envelope for the mismatch giving V = 0.6.
        let fwhm = model.envelope_fwhm;
        let dl = fwhm * (-(v_target.ln()) / (4.0 * core::f64::consts::LN_2)).sqrt();
        for k in 0..24 {
            let angle = core::f64::consts::TAU * k as f64 / 24.0;

            let s1 = PreparationSettings::new(angle, 0.0, dl, model);
            let b1 = bloch_from_rho(&prepare_input(&s1)).unwrap();
            assert_abs_diff_eq!(b1.px, 0.0, epsilon = 1e-12);
            assert_abs_diff_eq!(
                (b1.py * b1.py + b1.pz * b1.pz).sqrt(),
                v_target,
                epsilon = 1e-12
            );

            let s2 = PreparationSettings::new(core::f64::consts::FRAC_PI_2, angle, dl, model);
            let b2 = bloch_from_rho(&prepare_input(&s2)).unwrap();
            assert_abs_diff_eq!(b2.pz, 0.0, epsilon = 1e-12);
            assert_abs_diff_eq!(
                (b2.px * b2.px + b2.py * b2.py).sqrt(),
                v_target,
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn quantized_actuator_rounds_phases() {
        let model = CoherenceModel::default();
        let step = calibrated_step_phase(180).unwrap();
        let s = PreparationSettings::new(0.5 * step + 1e-6, 0.0, 0.0, model)
            .with_quantization(step);
        let quantized = prepare_input(&s);
        let snapped = prepare_input(&PreparationSettings::new(step, 0.0, 0.0, model));
        assert!(quantized.matrix().max_abs_diff(snapped.matrix()) < 1e-12);
    }

    #[test]
    fn calibrated_step_phase_value() {
        let step = calibrated_step_phase(180).unwrap();
        assert_abs_diff_eq!(step, core::f64::consts::TAU / 180.0, epsilon = 1e-15);
        assert!(calibrated_step_phase(0).is_err());
    }

    #[test]
    fn lambda_over_300_in_radians() {
        let step = PhaseStep::from_wavelength_fraction(1.0 / 300.0);
        assert_abs_diff_eq!(step.radians, core::f64::consts::TAU / 300.0, epsilon = 1e-15);
        assert_abs_diff_eq!(step.radians, 0.0209, epsilon = 1e-4);
    }

    #[test]
    fn tilted_plate_zero_step_zero_phase() {
        let plate = TiltedPlate::new(2e-3, 1.51, DEFAULT_WAVELENGTH).unwrap();
        let step = plate.phase_resolution(0.05, 0.0);
        assert_eq!(step.radians, 0.0);
        assert_eq!(plate.tilt_phase(0.0), 0.0);
    }

    #[test]
    fn tilted_plate_small_angle_expansion() {
        // φ(θ) ≈ 2π t (n-1) θ² / (2 n λ) near normal incidence.
        let plate = TiltedPlate::new(1e-3, 1.51, DEFAULT_WAVELENGTH).unwrap();
        let theta = 1e-3;
        let expected = core::f64::consts::TAU * plate.thickness * (plate.refractive_index - 1.0)
            * theta
            * theta
            / (2.0 * plate.refractive_index * plate.wavelength);
        assert_abs_diff_eq!(
            plate.tilt_phase(theta),
            expected,
            epsilon = expected * 1e-4
        );
    }

    #[test]
    fn tilted_plate_calibrated_range_gives_mean_step_of_cycle_over_steps() {
        // Calibrate the thickness so 180 actuator steps starting at the
        // offset tilt span exactly one 2π cycle; the phase is linear in the
        // thickness, so the calibration solves in closed form. The mean
        // per-step increment is then 2π/180 by telescoping.
        let steps = 180u32;
        let step_size = 0.5e-3; // tilt increment per actuator step, radians
        let offset = 0.05;
        let span = steps as f64 * step_size;
        let probe = TiltedPlate::new(1e-3, 1.51, DEFAULT_WAVELENGTH).unwrap();
        let probe_span = probe.tilt_phase(offset + span) - probe.tilt_phase(offset);
        let thickness = probe.thickness * core::f64::consts::TAU / probe_span;
        let plate = TiltedPlate::new(thickness, 1.51, DEFAULT_WAVELENGTH).unwrap();

        let mut total = 0.0;
        let target = calibrated_step_phase(steps).unwrap();
        for k in 0..steps {
            let inc = plate
                .phase_resolution(offset + k as f64 * step_size, step_size)
                .radians;
            assert!(inc > 0.3 * target && inc < 3.0 * target, "smooth steps");
            total += inc;
        }
        let mean = total / steps as f64;
        assert_abs_diff_eq!(mean, target, epsilon = 1e-9);
    }

    proptest! {
        #[test]
        fn visibility_is_even_and_monotone(dl in 0.0f64..40e-6, shrink in 1.0f64..3.0) {
            let model = CoherenceModel::default();
            let v = visibility(dl, &model);
            prop_assert!((visibility(-dl, &model) - v).abs() < 1e-15);
            prop_assert!(visibility(dl * shrink, &model) <= v + 1e-15);
            prop_assert!((0.0..=1.0).contains(&v));
        }

        #[test]
        fn purity_law_prop(dphi1 in 0.0f64..6.3, dphi2 in 0.0f64..6.3, dl in -25e-6f64..25e-6) {
            let s = PreparationSettings::new(dphi1, dphi2, dl, CoherenceModel::default());
            let rho = prepare_input(&s);
            let v = s.visibility();
            prop_assert!((purity(&rho) - (1.0 + v * v) / 2.0).abs() <= 1e-12);
        }
    }
}
