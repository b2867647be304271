//! The remote-state-preparation circuit: C-NOT on (path, polarization), a
//! beamsplitter Hadamard on the path qubit, projection of Alice's pair onto
//! the four basis outcomes, and the conditional Pauli correction on Bob.
//!
//! The 3-qubit register is ordered Alice path ⊗ Alice polarization ⊗ Bob
//! polarization, with the path qubit as the most significant tensor factor.

use num_complex::Complex64;

use crate::elements::{
    beamsplitter_unitary, path_cnot, pauli, realize_resource, BeamsplitterSpec, PauliLabel,
    ResourceModel,
};
use crate::error::{Error, Result};
use crate::linalg::{tensor, ComplexMatrix, DensityMatrix};

/// Probability below which a conditional state is reported as undefined.
pub const PROBABILITY_FLOOR: f64 = 1e-12;

/// The four projective outcomes on Alice's side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OutcomeLabel {
    ZeroH,
    ZeroV,
    OneH,
    OneV,
}

impl OutcomeLabel {
    pub const ALL: [OutcomeLabel; 4] = [
        OutcomeLabel::ZeroH,
        OutcomeLabel::ZeroV,
        OutcomeLabel::OneH,
        OutcomeLabel::OneV,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            OutcomeLabel::ZeroH => "0H",
            OutcomeLabel::ZeroV => "0V",
            OutcomeLabel::OneH => "1H",
            OutcomeLabel::OneV => "1V",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "0H" => Ok(OutcomeLabel::ZeroH),
            "0V" => Ok(OutcomeLabel::ZeroV),
            "1H" => Ok(OutcomeLabel::OneH),
            "1V" => Ok(OutcomeLabel::OneV),
            _ => Err(Error::InvalidParameter(
                "outcome label must be one of 0H, 0V, 1H, 1V",
            )),
        }
    }

    /// Raw detector port (path bit, polarization bit) read out for this
    /// label.
    ///
    /// Physical port naming is arbitrary, so the path outputs are labeled by
    /// definition such that `0H` is the outcome needing no correction. With
    /// the `|φ⁻⟩` resource, the stated C-NOT and the Hadamard convention of
    /// this crate, the raw circuit puts the identity on path output 1 for
    /// H-projections; the constant relabeling below flips the path bit on
    /// the H column (raw 1H ↦ 0H, raw 0H ↦ 1H) and keeps the V column.
    fn raw_port(self) -> (usize, usize) {
        match self {
            OutcomeLabel::ZeroH => (1, 0),
            OutcomeLabel::OneH => (0, 0),
            OutcomeLabel::ZeroV => (0, 1),
            OutcomeLabel::OneV => (1, 1),
        }
    }
}

impl core::fmt::Display for OutcomeLabel {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The fixed outcome → correction map `{0H→I, 1H→Z, 0V→Y, 1V→X}`.
pub fn correction_for(label: OutcomeLabel) -> PauliLabel {
    match label {
        OutcomeLabel::ZeroH => PauliLabel::I,
        OutcomeLabel::OneH => PauliLabel::Z,
        OutcomeLabel::ZeroV => PauliLabel::Y,
        OutcomeLabel::OneV => PauliLabel::X,
    }
}

/// Resource and gate imperfections used for one protocol run.
#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolConfig {
    pub resource: ResourceModel,
    pub beamsplitter: BeamsplitterSpec,
}

impl ProtocolConfig {
    pub fn new(resource: ResourceModel, beamsplitter: BeamsplitterSpec) -> Self {
        Self {
            resource,
            beamsplitter,
        }
    }

    /// Ideal `|φ⁻⟩` resource and balanced beamsplitter.
    pub fn ideal() -> Self {
        Self {
            resource: ResourceModel::ideal(),
            beamsplitter: BeamsplitterSpec::balanced(),
        }
    }
}

/// One of the four projective results with its conditional Bob state.
#[derive(Debug, Clone, PartialEq)]
pub struct TeleportOutcome {
    pub label: OutcomeLabel,
    pub probability: f64,
    /// Normalized conditional state; `None` marks an undefined conditional
    /// state at (numerically) zero probability.
    pub bob_state: Option<DensityMatrix>,
    pub correction: PauliLabel,
}

impl TeleportOutcome {
    /// Bob's state after applying the classical-communication correction.
    pub fn corrected_state(&self) -> Option<DensityMatrix> {
        self.bob_state.as_ref().map(|rho| {
            rho.evolve(&pauli(self.correction))
                .expect("Pauli conjugation preserves density-matrix invariants")
        })
    }
}

/// Runs the full circuit and returns the four outcomes in the fixed order
/// `[0H, 0V, 1H, 1V]`.
pub fn run_protocol(
    input: &DensityMatrix,
    cfg: &ProtocolConfig,
) -> Result<[TeleportOutcome; 4]> {
    if input.dim() != 2 {
        return Err(Error::InvalidDimension(input.dim()));
    }
    let resource = realize_resource(&cfg.resource)?;

    // ρ_total = input ⊗ resource on (path, Alice pol, Bob pol).
    let rho_total = tensor(input.matrix(), resource.matrix())?;

    // C-NOT on (path → Alice pol), then the beamsplitter on the path qubit.
    let eye2 = ComplexMatrix::identity(2)?;
    let eye4 = ComplexMatrix::identity(4)?;
    let cnot = tensor(&path_cnot(), &eye2)?;
    let bs = tensor(&beamsplitter_unitary(&cfg.beamsplitter), &eye4)?;
    let u = bs.mul(&cnot)?;
    let evolved = rho_total.conjugate_with(&u)?;

    let mut outcomes: [Option<TeleportOutcome>; 4] = [None, None, None, None];
    let mut total = 0.0;
    for (slot, &label) in OutcomeLabel::ALL.iter().enumerate() {
        let (path_bit, pol_bit) = label.raw_port();
        let base = 4 * path_bit + 2 * pol_bit;
        let mut block = ComplexMatrix::zeros(2)?;
        for i in 0..2 {
            for j in 0..2 {
                block.set(i, j, evolved.get(base + i, base + j));
            }
        }
        let probability = block.trace().re.max(0.0);
        total += probability;
        let bob_state = if probability > PROBABILITY_FLOOR {
            Some(DensityMatrix::new(
                block.scale(Complex64::new(1.0 / probability, 0.0)),
            )?)
        } else {
            None
        };
        outcomes[slot] = Some(TeleportOutcome {
            label,
            probability,
            bob_state,
            correction: correction_for(label),
        });
    }
    if total <= PROBABILITY_FLOOR {
        return Err(Error::DegenerateInput);
    }
    Ok(outcomes.map(|o| o.expect("all four outcomes are filled")))
}

/// Probability that the detector set registers a usable outcome.
///
/// The full four-detector arrangement succeeds on every repetition; the
/// two-detector arrangement keeps only the `{0H, 0V}` pair and discards the
/// rest, which is the rate-accounting view of that setup.
pub fn success_probability(outcomes: &[TeleportOutcome; 4], two_detector: bool) -> f64 {
    outcomes
        .iter()
        .filter(|o| {
            !two_detector
                || matches!(o.label, OutcomeLabel::ZeroH | OutcomeLabel::ZeroV)
        })
        .map(|o| o.probability)
        .sum()
}

/// The single-qubit channel `input ↦ corrected conditional Bob state` for a
/// fixed outcome, as probed by process tomography.
#[derive(Debug, Clone)]
pub struct TeleportChannel {
    config: ProtocolConfig,
    label: OutcomeLabel,
}

impl TeleportChannel {
    pub fn label(&self) -> OutcomeLabel {
        self.label
    }

    pub fn apply(&self, input: &DensityMatrix) -> Result<DensityMatrix> {
        let outcomes = run_protocol(input, &self.config)?;
        let outcome = outcomes
            .iter()
            .find(|o| o.label == self.label)
            .expect("run_protocol returns all four labels");
        outcome
            .corrected_state()
            .ok_or(Error::ZeroProbabilityOutcome(self.label.as_str()))
    }
}

/// Deterministic channel for one outcome of the configured protocol.
pub fn channel_of(cfg: &ProtocolConfig, label: OutcomeLabel) -> TeleportChannel {
    TeleportChannel {
        config: cfg.clone(),
        label,
    }
}
