//! Flat TOML run configuration.
//!
//! ```toml
//! eta = 1.0
//! g1 = "ep3"          # or a number, in units of gamma2
//! delta1_sign = 1     # +1 or -1
//! kappa_int = 1.0
//! port_split = 0.5
//! delta_k = 0.01
//! kerr_scale = 2.0    # optional
//! gamma2_mhz = 1.2    # optional, display only
//!
//! # drive, all five or none
//! delta_cd = 0.5
//! delta_1d = -3.0
//! delta_2d = 0.2
//! omega_d = 16.0
//! kerr_k1 = 0.01
//! ```

use std::path::Path;

use ep3_core::kerr_drive::DriveConfig;
use ep3_core::params::{
    derive_pseudo_hermitian, g_ep3, DeltaSign, PhysicalParams, PseudoHermitianConfig,
    CALIBRATED_KERR_SCALE,
};
use thiserror::Error;
use toml::{Table, Value};

pub const REQUIRED_KEYS: [&str; 6] = [
    "eta",
    "g1",
    "delta1_sign",
    "kappa_int",
    "port_split",
    "delta_k",
];
pub const OPTIONAL_KEYS: [&str; 2] = ["kerr_scale", "gamma2_mhz"];
pub const DRIVE_KEYS: [&str; 5] = ["delta_cd", "delta_1d", "delta_2d", "omega_d", "kerr_k1"];

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config: {0}")]
    Read(String),
    #[error("malformed config: {0}")]
    Parse(String),
    #[error("missing required key `{0}`")]
    MissingKey(&'static str),
    #[error("unknown key `{0}`")]
    UnknownKey(String),
    #[error("key `{key}` must be {expected}")]
    WrongType {
        key: &'static str,
        expected: &'static str,
    },
    #[error("drive settings are partial: missing `{0}`")]
    IncompleteDrive(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Coupling {
    Ep3,
    Value(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub eta: f64,
    pub g1: Coupling,
    pub delta1_sign: DeltaSign,
    pub kappa_int: f64,
    pub port_split: f64,
    pub delta_k: f64,
    pub kerr_scale: f64,
    pub gamma2_mhz: Option<f64>,
    pub drive: Option<DriveConfig>,
}

fn number(table: &Table, key: &'static str) -> Result<Option<f64>, ConfigError> {
    match table.get(key) {
        None => Ok(None),
        Some(Value::Float(v)) => Ok(Some(*v)),
        Some(Value::Integer(v)) => Ok(Some(*v as f64)),
        Some(_) => Err(ConfigError::WrongType {
            key,
            expected: "a number",
        }),
    }
}

fn required(table: &Table, key: &'static str) -> Result<f64, ConfigError> {
    number(table, key)?.ok_or(ConfigError::MissingKey(key))
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::Read(format!("{}: {e}", path.display())))?;
        text.parse()
    }

    /// Coupling of magnon 1 in units of `γ₂`.
    pub fn coupling(&self) -> f64 {
        match self.g1 {
            Coupling::Ep3 => g_ep3(self.eta),
            Coupling::Value(g) => g,
        }
    }

    pub fn params(&self) -> ep3_core::Result<PhysicalParams> {
        let cfg = PseudoHermitianConfig::new(self.eta, self.coupling(), self.delta1_sign)?;
        let params = derive_pseudo_hermitian(&cfg, self.kappa_int, self.port_split)?
            .with_kerr_scale(self.kerr_scale)
            .with_delta_k(self.delta_k);
        params.validate()?;
        Ok(params)
    }
}

impl std::str::FromStr for RunConfig {
    type Err = ConfigError;

    fn from_str(text: &str) -> Result<Self, ConfigError> {
        let table: Table = text.parse().map_err(|e: toml::de::Error| {
            ConfigError::Parse(e.message().to_string())
        })?;
        // missing keys are reported in documented order before anything else
        for key in REQUIRED_KEYS {
            if !table.contains_key(key) {
                return Err(ConfigError::MissingKey(key));
            }
        }
        if let Some(key) = table.keys().find(|k| {
            let k = k.as_str();
            !REQUIRED_KEYS.contains(&k) && !OPTIONAL_KEYS.contains(&k) && !DRIVE_KEYS.contains(&k)
        }) {
            return Err(ConfigError::UnknownKey(key.clone()));
        }

        let g1 = match table.get("g1") {
            Some(Value::String(s)) if s == "ep3" => Coupling::Ep3,
            Some(Value::Float(v)) => Coupling::Value(*v),
            Some(Value::Integer(v)) => Coupling::Value(*v as f64),
            _ => {
                return Err(ConfigError::WrongType {
                    key: "g1",
                    expected: "a number or \"ep3\"",
                })
            }
        };
        let delta1_sign = DeltaSign::from_value(required(&table, "delta1_sign")?).ok_or(
            ConfigError::WrongType {
                key: "delta1_sign",
                expected: "+1 or -1",
            },
        )?;

        let present: Vec<&str> = DRIVE_KEYS
            .iter()
            .copied()
            .filter(|k| table.contains_key(*k))
            .collect();
        let drive = if present.is_empty() {
            None
        } else if let Some(missing) = DRIVE_KEYS.iter().find(|k| !table.contains_key(**k)) {
            return Err(ConfigError::IncompleteDrive(missing));
        } else {
            Some(DriveConfig {
                delta_cd: required(&table, "delta_cd")?,
                delta_1d: required(&table, "delta_1d")?,
                delta_2d: required(&table, "delta_2d")?,
                omega_d_rabi: required(&table, "omega_d")?,
                kerr_k1: required(&table, "kerr_k1")?,
            })
        };

        Ok(RunConfig {
            eta: required(&table, "eta")?,
            g1,
            delta1_sign,
            kappa_int: required(&table, "kappa_int")?,
            port_split: required(&table, "port_split")?,
            delta_k: required(&table, "delta_k")?,
            kerr_scale: number(&table, "kerr_scale")?.unwrap_or(CALIBRATED_KERR_SCALE),
            gamma2_mhz: number(&table, "gamma2_mhz")?,
            drive,
        })
    }
}
