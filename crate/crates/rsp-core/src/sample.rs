//! Random-state sampling for Monte Carlo averages.
//!
//! All samplers take an owned random source so concurrent tasks never share
//! RNG state. Pure-state sampling uses the rotation-invariant measure on the
//! Bloch sphere (uniform cos θ and φ).

use num_complex::Complex64;
#[allow(unused_imports)] // f64 math comes from the trait in no_std builds
use num_traits::Float;
use rand::Rng;

use crate::linalg::{rho_from_bloch, BlochVector, DensityMatrix};

/// Uniform direction on the unit sphere.
pub fn uniform_bloch_direction(rng: &mut impl Rng) -> BlochVector {
    let z: f64 = rng.random_range(-1.0..=1.0);
    let phi: f64 = rng.random_range(0.0..core::f64::consts::TAU);
    let r = (1.0 - z * z).max(0.0).sqrt();
    BlochVector::new(r * phi.cos(), r * phi.sin(), z)
}

/// Pure qubit state drawn from the invariant measure.
pub fn uniform_pure_qubit(rng: &mut impl Rng) -> DensityMatrix {
    let dir = uniform_bloch_direction(rng);
    rho_from_bloch(&dir).expect("unit Bloch vector is inside the ball")
}

/// Amplitudes of a pure qubit state drawn from the invariant measure.
pub fn uniform_pure_ket(rng: &mut impl Rng) -> [Complex64; 2] {
    let z: f64 = rng.random_range(-1.0..=1.0);
    let phi: f64 = rng.random_range(0.0..core::f64::consts::TAU);
    let theta = z.acos();
    [
        Complex64::new((theta / 2.0).cos(), 0.0),
        Complex64::from_polar((theta / 2.0).sin(), phi),
    ]
}

/// Mixed qubit state drawn uniformly from the Bloch ball.
pub fn uniform_mixed_qubit(rng: &mut impl Rng) -> DensityMatrix {
    let dir = uniform_bloch_direction(rng);
    let r: f64 = rng.random_range(0.0f64..=1.0).cbrt();
    rho_from_bloch(&BlochVector::new(dir.px * r, dir.py * r, dir.pz * r))
        .expect("sampled vector is inside the ball")
}
