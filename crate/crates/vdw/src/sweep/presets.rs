//! Figure presets, one TOML file each under `presets/`.

use super::config::SweepConfig;
use crate::error::{Result, VdwError};

pub struct Preset {
    pub name: &'static str,
    pub text: &'static str,
}

macro_rules! preset {
    ($name:literal) => {
        Preset {
            name: $name,
            text: include_str!(concat!("../../presets/", $name, ".toml")),
        }
    };
}

pub const PRESETS: &[Preset] = &[
    preset!("fig1a"),
    preset!("fig1b"),
    preset!("fig1c"),
    preset!("fig1d"),
    preset!("fig1e"),
    preset!("fig1f"),
    preset!("fig2a"),
    preset!("fig2b"),
    preset!("fig2c"),
    preset!("fig2d"),
    preset!("fig2e"),
    preset!("fig3a"),
    preset!("fig3b"),
    preset!("fig3c"),
    preset!("fig3d"),
];

pub fn find(name: &str) -> Result<&'static Preset> {
    PRESETS.iter().find(|p| p.name == name).ok_or_else(|| {
        let names: Vec<_> = PRESETS.iter().map(|p| p.name).collect();
        VdwError::Config(format!("unknown preset '{name}'; available: {}", names.join(", ")))
    })
}

pub fn load(name: &str) -> Result<SweepConfig> {
    SweepConfig::from_toml(find(name)?.text)
}
