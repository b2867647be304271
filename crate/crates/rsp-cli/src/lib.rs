//! Experiment drivers and text formats for the remote-state-preparation
//! simulator, plus the `rsp` command-line front end.

pub mod experiments;
pub mod records;

use anyhow::{anyhow, bail, Context, Result};
use rsp_core::elements::ResourceModel;

/// Parses the CLI resource specifier:
/// `ideal | werner:<p> | rotated:<ax,ay,az;bx,by,bz> | file:<path>`.
pub fn parse_resource_spec(spec: &str) -> Result<ResourceModel> {
    if spec == "ideal" {
        return Ok(ResourceModel::ideal());
    }
    if let Some(p) = spec.strip_prefix("werner:") {
        let p: f64 = p.parse().context("werner parameter must be a number")?;
        if !(0.0..=1.0).contains(&p) {
            bail!("werner parameter must lie in [0, 1]");
        }
        return Ok(ResourceModel::Werner(p));
    }
    if let Some(rot) = spec.strip_prefix("rotated:") {
        let (alice, bob) = rot
            .split_once(';')
            .context("rotated resource needs `ax,ay,az;bx,by,bz`")?;
        let parse_vec = |s: &str| -> Result<[f64; 3]> {
            let parts: Vec<f64> = s
                .split(',')
                .map(|x| x.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .context("rotation components must be numbers")?;
            parts
                .try_into()
                .map_err(|_| anyhow!("each rotation needs exactly 3 components"))
        };
        return Ok(ResourceModel::RotatedBell {
            alice: parse_vec(alice)?,
            bob: parse_vec(bob)?,
        });
    }
    if let Some(path) = spec.strip_prefix("file:") {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read resource file {path:?}"))?;
        return Ok(ResourceModel::Exact(records::parse_resource_matrix(&text)?));
    }
    bail!("unknown resource spec {spec:?} (expected ideal, werner:<p>, rotated:<..>, file:<path>)")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rsp_core::elements::{bell_phi_minus, realize_resource};

    #[test]
    fn resource_specs_parse() {
        assert!(matches!(
            parse_resource_spec("ideal").unwrap(),
            ResourceModel::Werner(p) if p == 1.0
        ));
        assert!(matches!(
            parse_resource_spec("werner:0.9267").unwrap(),
            ResourceModel::Werner(p) if (p - 0.9267).abs() < 1e-12
        ));
        let rotated = parse_resource_spec("rotated:0.1,0,0;0,0.2,0").unwrap();
        assert!(matches!(rotated, ResourceModel::RotatedBell { .. }));
        assert!(parse_resource_spec("werner:1.5").is_err());
        assert!(parse_resource_spec("rotated:1,2;3,4,5").is_err());
        assert!(parse_resource_spec("nonsense").is_err());
    }

    #[test]
    fn resource_file_spec_round_trips() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bell.mat");
        std::fs::write(
            &path,
            records::format_resource_matrix(&bell_phi_minus()),
        )
        .unwrap();
        let model = parse_resource_spec(&format!("file:{}", path.display())).unwrap();
        let realized = realize_resource(&model).unwrap();
        assert!(realized.matrix().max_abs_diff(bell_phi_minus().matrix()) < 1e-12);
    }
}
