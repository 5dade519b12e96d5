//! TOML experiment configuration. Every physical quantity carries its unit in
//! the key name.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Result, SanError};
use crate::geometry::{Point, Receiver, Scenario};
use crate::signaling::{Mode, SanKey};

pub const DEFAULT_SEEDS: usize = 20;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    pub alice_m: [f64; 2],
    pub bob_m: [f64; 2],
    pub eve_m: [f64; 2],
    pub scatterers_m: Vec<[f64; 2]>,
    pub carrier_freq_hz: f64,
    pub bandwidth_hz: f64,
    pub lightspeed_m_per_us: f64,
    pub num_tx_antennas: usize,
    pub num_subcarriers: usize,
    pub num_symbols: usize,
    /// Defaults to half a carrier wavelength.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub antenna_spacing_m: Option<f64>,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        let s = Scenario::default();
        let xy = |p: Point| [p.x, p.y];
        ScenarioConfig {
            alice_m: xy(s.alice),
            bob_m: xy(s.bob),
            eve_m: xy(s.eve),
            scatterers_m: s.scatterers.iter().copied().map(xy).collect(),
            carrier_freq_hz: s.carrier_freq_hz,
            bandwidth_hz: s.bandwidth_hz,
            lightspeed_m_per_us: s.lightspeed_m_per_us,
            num_tx_antennas: s.num_tx,
            num_subcarriers: s.num_subcarriers,
            num_symbols: s.num_symbols,
            antenna_spacing_m: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KeyConfig {
    pub delta_tau_us: f64,
    pub delta_theta_rad: f64,
}

impl Default for KeyConfig {
    fn default() -> Self {
        let k = SanKey::default();
        KeyConfig {
            delta_tau_us: k.delta_tau_us,
            delta_theta_rad: k.delta_theta_rad,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub snr_db: Vec<f64>,
    pub seeds: Vec<u64>,
    pub modes: Vec<Mode>,
    pub receivers: Vec<Receiver>,
    /// Multiplies both key entries.
    pub key_scale: f64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            snr_db: (0..7).map(|i| -10.0 + 5.0 * i as f64).collect(),
            seeds: (0..DEFAULT_SEEDS as u64).collect(),
            modes: Mode::ALL.to_vec(),
            receivers: vec![Receiver::Bob, Receiver::Eve],
            key_scale: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: PathBuf,
    pub results_file: String,
    pub manifest_file: String,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig {
            dir: PathBuf::from("results"),
            results_file: "results.csv".into(),
            manifest_file: "manifest.txt".into(),
        }
    }
}

/// Full experiment description. Missing tables and keys take the reference
/// values.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub scenario: ScenarioConfig,
    pub key: KeyConfig,
    pub sweep: SweepConfig,
    pub output: OutputConfig,
}

/// The part of a config that determines results; hashed into the manifest.
#[derive(Serialize)]
struct Hashed<'a> {
    scenario: &'a ScenarioConfig,
    key: &'a KeyConfig,
    sweep: &'a SweepConfig,
}

fn config_err(field: &str, msg: impl std::fmt::Display) -> SanError {
    SanError::Config(format!("{field}: {msg}"))
}

fn check_point(field: &str, p: &[f64; 2]) -> Result<()> {
    if p.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(config_err(field, "coordinates must be finite"))
    }
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| SanError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| SanError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config serialises")
    }

    /// SHA-256 over the scenario, key and sweep tables (output paths excluded).
    pub fn hash(&self) -> String {
        let text = toml::to_string(&Hashed {
            scenario: &self.scenario,
            key: &self.key,
            sweep: &self.sweep,
        })
        .expect("config serialises");
        let mut h = Sha256::new();
        h.update(text.as_bytes());
        hex::encode(h.finalize())
    }

    pub fn scenario(&self) -> Scenario {
        let c = &self.scenario;
        let pt = |p: [f64; 2]| Point::new(p[0], p[1]);
        let mut s = Scenario {
            alice: pt(c.alice_m),
            bob: pt(c.bob_m),
            eve: pt(c.eve_m),
            scatterers: c.scatterers_m.iter().copied().map(pt).collect(),
            carrier_freq_hz: c.carrier_freq_hz,
            bandwidth_hz: c.bandwidth_hz,
            num_tx: c.num_tx_antennas,
            num_subcarriers: c.num_subcarriers,
            num_symbols: c.num_symbols,
            antenna_spacing_m: 0.0,
            lightspeed_m_per_us: c.lightspeed_m_per_us,
        };
        s.antenna_spacing_m = c.antenna_spacing_m.unwrap_or(s.wavelength_m() / 2.0);
        s
    }

    /// The key actually applied: configured entries times `key_scale`.
    pub fn key(&self) -> SanKey {
        SanKey {
            delta_tau_us: self.key.delta_tau_us,
            delta_theta_rad: self.key.delta_theta_rad,
        }
        .scaled(self.sweep.key_scale)
    }

    pub fn validate(&self) -> Result<()> {
        let c = &self.scenario;
        check_point("scenario.alice_m", &c.alice_m)?;
        check_point("scenario.bob_m", &c.bob_m)?;
        check_point("scenario.eve_m", &c.eve_m)?;
        for (i, v) in c.scatterers_m.iter().enumerate() {
            check_point(&format!("scenario.scatterers_m[{i}]"), v)?;
        }
        for (field, v) in [
            ("scenario.carrier_freq_hz", c.carrier_freq_hz),
            ("scenario.bandwidth_hz", c.bandwidth_hz),
            ("scenario.lightspeed_m_per_us", c.lightspeed_m_per_us),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(config_err(field, format!("must be finite and positive, got {v}")));
            }
        }
        if let Some(d) = c.antenna_spacing_m {
            if !(d.is_finite() && d > 0.0) {
                return Err(config_err("scenario.antenna_spacing_m", format!("must be finite and positive, got {d}")));
            }
        }
        for (field, v) in [
            ("scenario.num_tx_antennas", c.num_tx_antennas),
            ("scenario.num_subcarriers", c.num_subcarriers),
            ("scenario.num_symbols", c.num_symbols),
        ] {
            if v == 0 {
                return Err(config_err(field, "must be at least 1"));
            }
        }
        if !(self.key.delta_tau_us.is_finite()) {
            return Err(config_err("key.delta_tau_us", "must be finite"));
        }
        if !(self.key.delta_theta_rad.is_finite()) {
            return Err(config_err("key.delta_theta_rad", "must be finite"));
        }
        let s = &self.sweep;
        if s.snr_db.is_empty() {
            return Err(config_err("sweep.snr_db", "must not be empty"));
        }
        if let Some(v) = s.snr_db.iter().find(|v| !v.is_finite()) {
            return Err(config_err("sweep.snr_db", format!("entry {v} is not finite")));
        }
        if s.seeds.is_empty() {
            return Err(config_err("sweep.seeds", "must not be empty"));
        }
        if s.modes.is_empty() {
            return Err(config_err("sweep.modes", "must not be empty"));
        }
        if s.receivers.is_empty() {
            return Err(config_err("sweep.receivers", "must not be empty"));
        }
        for (field, n) in [
            ("sweep.snr_db", dedup_len(&s.snr_db)),
            ("sweep.seeds", dedup_len(&s.seeds)),
            ("sweep.modes", dedup_len(&s.modes)),
            ("sweep.receivers", dedup_len(&s.receivers)),
        ] {
            if n.0 != n.1 {
                return Err(config_err(field, "entries must be distinct"));
            }
        }
        if !(s.key_scale.is_finite() && s.key_scale > 0.0) {
            return Err(config_err("sweep.key_scale", format!("must be finite and positive, got {}", s.key_scale)));
        }
        self.scenario().validate()?;
        self.key()
            .validate(&self.scenario().array())
            .map_err(|e| config_err("key", e))?;
        Ok(())
    }
}

fn dedup_len<T: PartialEq>(v: &[T]) -> (usize, usize) {
    let distinct = v.iter().enumerate().filter(|(i, x)| !v[..*i].contains(x)).count();
    (v.len(), distinct)
}

/// Parses a seed list: `0,3,7`, `0..20` (half-open), `0-19` (inclusive), or a
/// comma-separated mix.
pub fn parse_seed_list(text: &str) -> Result<Vec<u64>> {
    let bad = |part: &str| SanError::Config(format!("--seeds: cannot parse '{part}'"));
    let num = |s: &str, part: &str| s.trim().parse::<u64>().map_err(|_| bad(part));
    let mut seeds = Vec::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if let Some((a, b)) = part.split_once("..") {
            seeds.extend(num(a, part)?..num(b, part)?);
        } else if let Some((a, b)) = part.split_once('-') {
            seeds.extend(num(a, part)?..=num(b, part)?);
        } else {
            seeds.push(num(part, part)?);
        }
    }
    if seeds.is_empty() {
        return Err(SanError::Config("--seeds: empty seed list".into()));
    }
    Ok(seeds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn empty_document_gives_reference_values() {
        let cfg = ExperimentConfig::from_toml_str("").unwrap();
        assert_eq!(cfg.scenario(), Scenario::default());
        assert_eq!(cfg.key(), SanKey::default());
        assert_eq!(cfg.key().delta_tau_us, -PI / 61.0);
        assert_eq!(cfg.sweep.seeds.len(), 20);
        assert_eq!(cfg.sweep.snr_db, vec![-10.0, -5.0, 0.0, 5.0, 10.0, 15.0, 20.0]);
        assert_eq!(cfg.sweep.modes, Mode::ALL.to_vec());
    }

    #[test]
    fn round_trips_through_toml() {
        let cfg = ExperimentConfig::default();
        let back = ExperimentConfig::from_toml_str(&cfg.to_toml_string()).unwrap();
        assert_eq!(back, cfg);
        assert_eq!(back.hash(), cfg.hash());
    }

    #[test]
    fn hash_tracks_results_relevant_fields_only() {
        let a = ExperimentConfig::default();
        let mut b = a.clone();
        b.output.dir = PathBuf::from("elsewhere");
        assert_eq!(a.hash(), b.hash());
        b.sweep.seeds.push(99);
        assert_ne!(a.hash(), b.hash());
        let mut c = a.clone();
        c.key.delta_theta_rad = 2e-8;
        assert_ne!(a.hash(), c.hash());
    }

    #[test]
    fn errors_name_the_field() {
        let e = ExperimentConfig::from_toml_str("[sweep]\nsnr_db = []\n").unwrap_err();
        assert!(e.to_string().contains("sweep.snr_db"), "{e}");
        let e = ExperimentConfig::from_toml_str("[scenario]\nbandwidth_hz = -1.0\n").unwrap_err();
        assert!(e.to_string().contains("scenario.bandwidth_hz"), "{e}");
        let e = ExperimentConfig::from_toml_str("[sweep]\nmodes = [\"loud\"]\n").unwrap_err();
        assert!(matches!(e, SanError::Config(_)));
        let e = ExperimentConfig::from_toml_str("[key]\ndelta_tau_s = 1.0\n").unwrap_err();
        assert!(e.to_string().contains("delta_tau_s"), "{e}");
        let e = ExperimentConfig::from_toml_str("[sweep]\nseeds = [1, 1]\n").unwrap_err();
        assert!(e.to_string().contains("distinct"), "{e}");
    }

    #[test]
    fn seed_lists() {
        assert_eq!(parse_seed_list("0..3").unwrap(), vec![0, 1, 2]);
        assert_eq!(parse_seed_list("2-4").unwrap(), vec![2, 3, 4]);
        assert_eq!(parse_seed_list("5, 1,0..2").unwrap(), vec![5, 1, 0, 1]);
        assert!(parse_seed_list("x").is_err());
        assert!(parse_seed_list("").is_err());
    }
}
