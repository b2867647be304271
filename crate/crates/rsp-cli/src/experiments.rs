//! End-to-end experiment drivers: trajectory sweeps, per-channel process
//! tomography, CHSH, the resource-limited average fidelity and the classical
//! baseline.
//!
//! Exact mode evaluates analytic states; counting mode pushes every grid
//! point through Poisson-count tomography with per-point seeds derived from
//! the experiment seed, so reruns are byte-identical and grid points stay
//! independent.

use anyhow::{bail, Context, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use rsp_core::counting::{reconstruct_state, simulate_six_counts};
use rsp_core::elements::{BeamsplitterSpec, PauliLabel, ResourceModel};
use rsp_core::linalg::{bloch_from_rho, fidelity, BlochVector};
use rsp_core::prepare::{prepare_input, CoherenceModel, PreparationSettings};
use rsp_core::process::{
    avg_fidelity, chsh, classical_baseline, process_tomography, ChiMatrix, ChshAngles,
};
use rsp_core::protocol::{channel_of, run_protocol, OutcomeLabel, ProtocolConfig};
use rsp_core::sample::uniform_pure_qubit;
use rsp_core::DensityMatrix;

use crate::records::{fmt_f64, fnv1a64, Header, ResultsFile, SummaryFile};

pub const MICRON: f64 = 1e-6;

/// Exact analytic evaluation or Poisson-count tomography.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Counts,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::Counts => "counts",
        }
    }
}

/// Flags shared by every experiment.
#[derive(Debug, Clone)]
pub struct CommonConfig {
    pub resource: ResourceModel,
    pub bs_transmittance: f64,
    pub mode: Mode,
    pub rate: f64,
    pub duration: f64,
    pub seed: u64,
    pub grid: usize,
}

impl CommonConfig {
    pub fn ideal_exact() -> Self {
        Self {
            resource: ResourceModel::ideal(),
            bs_transmittance: 0.5,
            mode: Mode::Exact,
            rate: 600.0,
            duration: 10.0,
            seed: 1,
            grid: 24,
        }
    }

    fn protocol_config(&self) -> Result<ProtocolConfig> {
        let bs = BeamsplitterSpec::new(self.bs_transmittance)
            .map_err(|e| anyhow::anyhow!("{e}"))?;
        Ok(ProtocolConfig::new(self.resource.clone(), bs))
    }

    fn validate(&self) -> Result<()> {
        if self.grid == 0 {
            bail!("sweep grid must be non-empty");
        }
        if self.mode == Mode::Counts && self.duration <= 0.0 {
            bail!("duration must be positive in counting mode");
        }
        Ok(())
    }

    fn descriptor(&self, experiment: &str) -> String {
        format!(
            "experiment={};resource={};bs_t={};mode={};rate={};duration={};grid={}",
            experiment,
            resource_descriptor(&self.resource),
            fmt_f64(self.bs_transmittance),
            self.mode.as_str(),
            fmt_f64(self.rate),
            fmt_f64(self.duration),
            self.grid,
        )
    }

    fn header(&self, experiment: &str) -> Header {
        Header {
            experiment: experiment.to_string(),
            config_hash: fnv1a64(self.descriptor(experiment).as_bytes()),
            seed: self.seed,
            mode: self.mode.as_str().to_string(),
        }
    }
}

fn resource_descriptor(model: &ResourceModel) -> String {
    match model {
        ResourceModel::Exact(rho) => {
            let mut bytes = Vec::new();
            for z in rho.matrix().entries() {
                bytes.extend_from_slice(&z.re.to_le_bytes());
                bytes.extend_from_slice(&z.im.to_le_bytes());
            }
            format!("exact:{:016x}", fnv1a64(&bytes))
        }
        ResourceModel::Werner(p) => format!("werner:{}", fmt_f64(*p)),
        ResourceModel::RotatedBell { alice, bob } => format!(
            "rotated:{},{},{};{},{},{}",
            fmt_f64(alice[0]),
            fmt_f64(alice[1]),
            fmt_f64(alice[2]),
            fmt_f64(bob[0]),
            fmt_f64(bob[1]),
            fmt_f64(bob[2]),
        ),
    }
}

fn mix_seed(seed: u64, index: u64) -> u64 {
    let mut bytes = [0u8; 16];
    bytes[..8].copy_from_slice(&seed.to_le_bytes());
    bytes[8..].copy_from_slice(&index.to_le_bytes());
    fnv1a64(&bytes)
}

/// One sweep grid point after teleportation and (optional) reconstruction.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryRecord {
    pub dphi1: f64,
    pub dphi2: f64,
    pub delta_l: f64,
    pub label: OutcomeLabel,
    pub bloch: BlochVector,
    pub modulus: f64,
    /// Fidelity of the (reconstructed or exact) teleported state to the
    /// preparation target.
    pub fidelity: f64,
}

/// A finished sweep: typed records plus their rendered file forms.
#[derive(Debug, Clone)]
pub struct SweepRun {
    pub records: Vec<TrajectoryRecord>,
    pub results: ResultsFile,
    pub summary: SummaryFile,
}

const SWEEP_COLUMNS: [&str; 9] = [
    "dphi1",
    "dphi2",
    "delta_l_um",
    "label",
    "px",
    "py",
    "pz",
    "modulus",
    "fidelity",
];

fn mean_and_sd(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let sd = if values.len() > 1 {
        (values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0)).sqrt()
    } else {
        0.0
    };
    (mean, sd)
}

/// Which Bloch component a sweep treats as out-of-plane.
enum PlaneStat {
    OutOfPlaneY,
    OutOfPlaneZ,
    Mixture,
}

fn run_sweep(
    cfg: &CommonConfig,
    experiment: &str,
    stat: PlaneStat,
    settings_at: impl Fn(usize) -> PreparationSettings,
) -> Result<SweepRun> {
    cfg.validate()?;
    let protocol = cfg.protocol_config()?;
    let mut records = Vec::with_capacity(cfg.grid);
    for k in 0..cfg.grid {
        let settings = settings_at(k);
        let input = prepare_input(&settings);
        let outcomes = run_protocol(&input, &protocol).map_err(|e| anyhow::anyhow!("{e}"))?;
        let outcome = outcomes
            .iter()
            .find(|o| o.label == OutcomeLabel::ZeroH)
            .expect("0H is always present");
        let bob = outcome
            .corrected_state()
            .context("0H outcome has zero probability")?;
        let teleported = match cfg.mode {
            Mode::Exact => bob,
            Mode::Counts => {
                let counts = simulate_six_counts(
                    &bob,
                    cfg.duration,
                    cfg.rate,
                    mix_seed(cfg.seed, k as u64),
                )
                .map_err(|e| anyhow::anyhow!("{e}"))?;
                reconstruct_state(&counts).map_err(|e| anyhow::anyhow!("{e}"))?
            }
        };
        let bloch = bloch_from_rho(&teleported).map_err(|e| anyhow::anyhow!("{e}"))?;
        records.push(TrajectoryRecord {
            dphi1: settings.dphi1,
            dphi2: settings.dphi2,
            delta_l: settings.path_mismatch,
            label: OutcomeLabel::ZeroH,
            bloch,
            modulus: bloch.norm(),
            fidelity: fidelity(&teleported, &input).map_err(|e| anyhow::anyhow!("{e}"))?,
        });
    }

    let header = cfg.header(experiment);
    let rows = records
        .iter()
        .map(|r| {
            vec![
                fmt_f64(r.dphi1),
                fmt_f64(r.dphi2),
                fmt_f64(r.delta_l / MICRON),
                r.label.as_str().to_string(),
                fmt_f64(r.bloch.px),
                fmt_f64(r.bloch.py),
                fmt_f64(r.bloch.pz),
                fmt_f64(r.modulus),
                fmt_f64(r.fidelity),
            ]
        })
        .collect();
    let results = ResultsFile {
        header: header.clone(),
        columns: SWEEP_COLUMNS.iter().map(|c| c.to_string()).collect(),
        rows,
    };

    let mut entries = vec![("points".to_string(), records.len().to_string())];
    match stat {
        PlaneStat::OutOfPlaneY | PlaneStat::OutOfPlaneZ => {
            let component: Vec<f64> = records
                .iter()
                .map(|r| match stat {
                    PlaneStat::OutOfPlaneY => r.bloch.py,
                    _ => r.bloch.pz,
                })
                .collect();
            let (mean, sd) = mean_and_sd(&component);
            entries.push(("mean_out_of_plane".to_string(), fmt_f64(mean)));
            entries.push(("sd_out_of_plane".to_string(), fmt_f64(sd)));
        }
        PlaneStat::Mixture => {
            entries.push((
                "modulus_first".to_string(),
                fmt_f64(records.first().map(|r| r.modulus).unwrap_or(0.0)),
            ));
            entries.push((
                "modulus_last".to_string(),
                fmt_f64(records.last().map(|r| r.modulus).unwrap_or(0.0)),
            ));
        }
    }
    let moduli: Vec<f64> = records.iter().map(|r| r.modulus).collect();
    let fids: Vec<f64> = records.iter().map(|r| r.fidelity).collect();
    entries.push(("mean_modulus".to_string(), fmt_f64(mean_and_sd(&moduli).0)));
    entries.push(("mean_fidelity".to_string(), fmt_f64(mean_and_sd(&fids).0)));
    entries.push((
        "min_fidelity".to_string(),
        fmt_f64(fids.iter().cloned().fold(f64::INFINITY, f64::min)),
    ));

    let summary = SummaryFile { header, entries };
    Ok(SweepRun {
        records,
        results,
        summary,
    })
}

/// Δφ₁ over a full 2π cycle at Δφ₂ = π/2 and matched arms: the prepared
/// trajectory lies in the Z–X plane, and p_y is the out-of-plane component.
pub fn sweep_phi1(cfg: &CommonConfig) -> Result<SweepRun> {
    let model = CoherenceModel::default();
    let grid = cfg.grid;
    run_sweep(cfg, "sweep-phi1", PlaneStat::OutOfPlaneY, move |k| {
        PreparationSettings::new(
            core::f64::consts::TAU * k as f64 / grid as f64,
            core::f64::consts::FRAC_PI_2,
            0.0,
            model,
        )
    })
}

/// Δφ₂ over a full 2π cycle at Δφ₁ = π/2: the trajectory lies on the
/// equator, and p_z is the out-of-plane component.
pub fn sweep_phi2(cfg: &CommonConfig) -> Result<SweepRun> {
    let model = CoherenceModel::default();
    let grid = cfg.grid;
    run_sweep(cfg, "sweep-phi2", PlaneStat::OutOfPlaneZ, move |k| {
        PreparationSettings::new(
            core::f64::consts::FRAC_PI_2,
            core::f64::consts::TAU * k as f64 / grid as f64,
            0.0,
            model,
        )
    })
}

/// Full-cycle mismatch steps `ΔL = n·λ` at Δφ₁ = π/2, Δφ₂ = 0: the
/// teleported Bloch modulus walks down the visibility envelope.
pub fn sweep_mixture(cfg: &CommonConfig) -> Result<SweepRun> {
    let model = CoherenceModel::default();
    run_sweep(cfg, "sweep-mixture", PlaneStat::Mixture, move |k| {
        PreparationSettings::new(
            core::f64::consts::FRAC_PI_2,
            0.0,
            k as f64 * model.wavelength,
            model,
        )
    })
}

/// Process tomography of one teleportation outcome.
#[derive(Debug, Clone)]
pub struct QptRun {
    pub label: OutcomeLabel,
    pub chi: ChiMatrix,
    pub favg: f64,
    pub results: ResultsFile,
    pub summary: SummaryFile,
}

pub fn qpt_channel(cfg: &CommonConfig, label: OutcomeLabel) -> Result<QptRun> {
    cfg.validate()?;
    let protocol = cfg.protocol_config()?;
    let channel = channel_of(&protocol, label);
    let mut probe_index = 0u64;
    let chi = process_tomography(|probe: &DensityMatrix| {
        let bob = channel.apply(probe)?;
        match cfg.mode {
            Mode::Exact => Ok(bob),
            Mode::Counts => {
                let counts = simulate_six_counts(
                    &bob,
                    cfg.duration,
                    cfg.rate,
                    mix_seed(cfg.seed, {
                        probe_index += 1;
                        probe_index
                    }),
                )?;
                reconstruct_state(&counts)
            }
        }
    })
    .map_err(|e| anyhow::anyhow!("{e}"))?;
    let favg = avg_fidelity(&chi);

    let header = cfg.header("qpt");
    let mut rows = Vec::with_capacity(16);
    for &m in &PauliLabel::ALL {
        for &n in &PauliLabel::ALL {
            let z = chi.entry(m, n);
            rows.push(vec![
                m.as_str().to_string(),
                n.as_str().to_string(),
                fmt_f64(z.re),
                fmt_f64(z.im),
            ]);
        }
    }
    let results = ResultsFile {
        header: header.clone(),
        columns: vec!["m".into(), "n".into(), "re".into(), "im".into()],
        rows,
    };
    let summary = SummaryFile {
        header,
        entries: vec![
            ("label".to_string(), label.as_str().to_string()),
            ("chi00".to_string(), fmt_f64(chi.chi00())),
            ("favg".to_string(), fmt_f64(favg)),
            (
                "trace_preservation_defect".to_string(),
                fmt_f64(chi.trace_preservation_defect()),
            ),
        ],
    };
    Ok(QptRun {
        label,
        chi,
        favg,
        results,
        summary,
    })
}

/// A single-number experiment with its key-value report.
#[derive(Debug, Clone)]
pub struct ScalarRun {
    pub value: f64,
    pub summary: SummaryFile,
}

/// CHSH estimator of the realized resource at the given analyzer angles.
pub fn chsh_experiment(cfg: &CommonConfig, angles: &ChshAngles) -> Result<ScalarRun> {
    let resource = rsp_core::elements::realize_resource(&cfg.resource)
        .map_err(|e| anyhow::anyhow!("{e}"))?;
    let s = chsh(&resource, angles).map_err(|e| anyhow::anyhow!("{e}"))?;
    let summary = SummaryFile {
        header: cfg.header("chsh"),
        entries: vec![
            (
                "angles_deg".to_string(),
                format!(
                    "{};{};{};{}",
                    fmt_f64(angles.a.to_degrees()),
                    fmt_f64(angles.a_prime.to_degrees()),
                    fmt_f64(angles.b.to_degrees()),
                    fmt_f64(angles.b_prime.to_degrees()),
                ),
            ),
            ("s_value".to_string(), fmt_f64(s)),
        ],
    };
    Ok(ScalarRun { value: s, summary })
}

/// Exact-mode mean corrected fidelity of the 0H channel over uniformly
/// sampled pure inputs; the resource-quality ceiling of the protocol.
pub fn favg_limit(cfg: &CommonConfig, samples: usize) -> Result<ScalarRun> {
    if samples < 10_000 {
        bail!("favg-limit needs at least 10000 samples");
    }
    let protocol = cfg.protocol_config()?;
    let channel = channel_of(&protocol, OutcomeLabel::ZeroH);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut acc = 0.0;
    for _ in 0..samples {
        let input = uniform_pure_qubit(&mut rng);
        let out = channel.apply(&input).map_err(|e| anyhow::anyhow!("{e}"))?;
        acc += fidelity(&out, &input).map_err(|e| anyhow::anyhow!("{e}"))?;
    }
    let mean = acc / samples as f64;
    let summary = SummaryFile {
        header: cfg.header("favg-limit"),
        entries: vec![
            ("samples".to_string(), samples.to_string()),
            ("favg_limit".to_string(), fmt_f64(mean)),
        ],
    };
    Ok(ScalarRun {
        value: mean,
        summary,
    })
}

/// Measure-and-resend baseline; converges to 2/3.
pub fn classical_baseline_experiment(cfg: &CommonConfig, samples: usize) -> Result<ScalarRun> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mean =
        classical_baseline(samples, &mut rng).map_err(|e| anyhow::anyhow!("{e}"))?;
    let summary = SummaryFile {
        header: cfg.header("classical-baseline"),
        entries: vec![
            ("samples".to_string(), samples.to_string()),
            ("mean_fidelity".to_string(), fmt_f64(mean)),
        ],
    };
    Ok(ScalarRun {
        value: mean,
        summary,
    })
}
