//! Text formats: results files with a self-describing header, key-value
//! summaries, line-oriented count records and resource matrices.
//!
//! Every emitter formats floats at a fixed 12-decimal precision and every
//! parser keeps cells verbatim, so parsing an emitted file and re-emitting
//! it reproduces the bytes exactly.

use std::fmt::Write as _;

use anyhow::{anyhow, bail, Context, Result};
use num_complex::Complex64;
use rsp_core::counting::{CountsRecord, MeasurementSetting, PolarizationPort};
use rsp_core::elements::Polarization;
use rsp_core::linalg::ComplexMatrix;
use rsp_core::DensityMatrix;

/// Formats a float the way every file in this crate does.
pub fn fmt_f64(value: f64) -> String {
    format!("{value:.12}")
}

/// FNV-1a hash used to fingerprint experiment configurations.
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash = 0xcbf2_9ce4_8422_2325u64;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x0100_0000_01b3);
    }
    hash
}

/// Self-describing first line of every output file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Header {
    pub experiment: String,
    pub config_hash: u64,
    pub seed: u64,
    pub mode: String,
}

impl Header {
    pub fn emit(&self) -> String {
        format!(
            "# experiment={} config={:016x} seed={} mode={}",
            self.experiment, self.config_hash, self.seed, self.mode
        )
    }

    pub fn parse(line: &str) -> Result<Self> {
        let rest = line
            .strip_prefix("# ")
            .ok_or_else(|| anyhow!("header must start with '# '"))?;
        let mut experiment = None;
        let mut config_hash = None;
        let mut seed = None;
        let mut mode = None;
        for field in rest.split_whitespace() {
            let (key, value) = field
                .split_once('=')
                .ok_or_else(|| anyhow!("malformed header field {field:?}"))?;
            match key {
                "experiment" => experiment = Some(value.to_string()),
                "config" => config_hash = Some(u64::from_str_radix(value, 16)?),
                "seed" => seed = Some(value.parse()?),
                "mode" => mode = Some(value.to_string()),
                _ => bail!("unknown header field {key:?}"),
            }
        }
        Ok(Self {
            experiment: experiment.context("header misses experiment")?,
            config_hash: config_hash.context("header misses config")?,
            seed: seed.context("header misses seed")?,
            mode: mode.context("header misses mode")?,
        })
    }
}

/// A header, a column line and verbatim comma-separated rows.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultsFile {
    pub header: Header,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl ResultsFile {
    pub fn emit(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.header.emit());
        let _ = writeln!(out, "{}", self.columns.join(","));
        for row in &self.rows {
            let _ = writeln!(out, "{}", row.join(","));
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = Header::parse(lines.next().context("empty results file")?)?;
        let columns: Vec<String> = lines
            .next()
            .context("results file misses the column line")?
            .split(',')
            .map(str::to_string)
            .collect();
        let mut rows = Vec::new();
        for line in lines {
            if line.is_empty() {
                continue;
            }
            let row: Vec<String> = line.split(',').map(str::to_string).collect();
            if row.len() != columns.len() {
                bail!(
                    "row has {} cells, expected {}: {line:?}",
                    row.len(),
                    columns.len()
                );
            }
            rows.push(row);
        }
        Ok(Self {
            header,
            columns,
            rows,
        })
    }

    /// Value of a named column in a row, parsed as f64.
    pub fn cell_f64(&self, row: usize, column: &str) -> Result<f64> {
        let idx = self
            .columns
            .iter()
            .position(|c| c == column)
            .with_context(|| format!("no column named {column:?}"))?;
        Ok(self.rows[row][idx].parse()?)
    }
}

/// Key-value summary companion: the same header followed by `key=value`
/// lines in emission order.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryFile {
    pub header: Header,
    pub entries: Vec<(String, String)>,
}

impl SummaryFile {
    pub fn emit(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.header.emit());
        for (key, value) in &self.entries {
            let _ = writeln!(out, "{key}={value}");
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = Header::parse(lines.next().context("empty summary file")?)?;
        let mut entries = Vec::new();
        for line in lines {
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .with_context(|| format!("malformed summary line {line:?}"))?;
            entries.push((key.to_string(), value.to_string()));
        }
        Ok(Self { header, entries })
    }

    pub fn value(&self, key: &str) -> Result<&str> {
        self.entries
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
            .with_context(|| format!("summary misses key {key:?}"))
    }

    pub fn value_f64(&self, key: &str) -> Result<f64> {
        Ok(self.value(key)?.parse()?)
    }
}

fn canonical_id(setting: &MeasurementSetting) -> &'static str {
    for &target in &Polarization::ALL {
        let canonical = rsp_core::counting::canonical_setting(target);
        if (canonical.hwp.angle() - setting.hwp.angle()).abs() < 1e-9
            && (canonical.qwp.angle() - setting.qwp.angle()).abs() < 1e-9
            && canonical.port == setting.port
        {
            return target.as_str();
        }
    }
    "-"
}

/// One count record per line:
/// `setting-id,hwp-deg,qwp-deg,port,duration-s,counts`.
pub fn format_count_record(record: &CountsRecord) -> String {
    format!(
        "{},{:.6},{:.6},{},{},{}",
        canonical_id(&record.setting),
        record.setting.hwp.angle().to_degrees(),
        record.setting.qwp.angle().to_degrees(),
        record.setting.port.as_str(),
        fmt_f64(record.duration),
        record.counts
    )
}

/// Parses one count-record line. The wave-plate angles and port are
/// authoritative; the setting id is informational. The reference rate is not
/// part of the wire format, so the observed `counts/duration` stands in.
pub fn parse_count_record(line: &str) -> Result<CountsRecord> {
    let fields: Vec<&str> = line.split(',').collect();
    if fields.len() != 6 {
        bail!("count record needs 6 fields, got {}: {line:?}", fields.len());
    }
    let hwp_deg: f64 = fields[1].parse().context("bad hwp angle")?;
    let qwp_deg: f64 = fields[2].parse().context("bad qwp angle")?;
    let port = PolarizationPort::parse(fields[3]).map_err(|e| anyhow!("{e}"))?;
    let duration: f64 = fields[4].parse().context("bad duration")?;
    let counts: u64 = fields[5].parse().context("bad counts")?;
    if duration <= 0.0 {
        bail!("duration must be positive");
    }
    Ok(CountsRecord {
        setting: MeasurementSetting::new(hwp_deg.to_radians(), qwp_deg.to_radians(), port),
        duration,
        counts,
        rate_reference: counts as f64 / duration,
    })
}

/// Emits the canonical six records, one per line, in `[H,V,D,A,R,L]` order.
pub fn format_count_records(records: &[CountsRecord; 6]) -> String {
    let mut out = String::new();
    for r in records {
        let _ = writeln!(out, "{}", format_count_record(r));
    }
    out
}

/// Parses six count-record lines in `[H,V,D,A,R,L]` order.
pub fn parse_count_records(text: &str) -> Result<[CountsRecord; 6]> {
    let records: Vec<CountsRecord> = text
        .lines()
        .filter(|l| !l.is_empty())
        .map(parse_count_record)
        .collect::<Result<_>>()?;
    records
        .try_into()
        .map_err(|v: Vec<_>| anyhow!("expected 6 count records, got {}", v.len()))
}

/// Parses a 4x4 complex density matrix given as 16 lines of `re,im` in
/// row-major order, validating the density-matrix invariants.
pub fn parse_resource_matrix(text: &str) -> Result<DensityMatrix> {
    let mut entries = Vec::with_capacity(16);
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let (re, im) = line
            .split_once(',')
            .with_context(|| format!("expected `re,im`, got {line:?}"))?;
        entries.push(Complex64::new(re.trim().parse()?, im.trim().parse()?));
    }
    if entries.len() != 16 {
        bail!("resource file needs 16 entries, got {}", entries.len());
    }
    let matrix = ComplexMatrix::from_vec(4, entries).map_err(|e| anyhow!("{e}"))?;
    DensityMatrix::new(matrix).map_err(|e| anyhow!("invalid resource matrix: {e}"))
}

/// Emits a resource matrix in the same 16-line format.
pub fn format_resource_matrix(rho: &DensityMatrix) -> String {
    let mut out = String::new();
    for i in 0..4 {
        for j in 0..4 {
            let z = rho.matrix().get(i, j);
            let _ = writeln!(out, "{},{}", fmt_f64(z.re), fmt_f64(z.im));
        }
    }
    out
}
