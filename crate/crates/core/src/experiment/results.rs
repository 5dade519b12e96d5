//! Result rows, CSV round trip and seed-aggregated summaries.

use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Result, SanError};
use crate::geometry::Receiver;
use crate::signaling::Mode;

pub const SCHEMA_VERSION: u32 = 1;

/// Column order of `results.csv` for [`SCHEMA_VERSION`].
pub const COLUMNS: [&str; 17] = [
    "schema_version",
    "receiver",
    "mode",
    "snr_db",
    "seed",
    "sigma2",
    "noise_variance",
    "peb_m",
    "toa_bound_los_m",
    "aod_bound_los_rad",
    "toa_bounds_m",
    "aod_bounds_rad",
    "lpl",
    "singular_fim",
    "delta_min_toa",
    "delta_min_aod",
    "snr_roundtrip_db",
];

/// Per-path values stored in one CSV cell, separated by `;`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PathValues(pub Vec<f64>);

impl fmt::Display for PathValues {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            write!(f, "{v:e}")?;
        }
        Ok(())
    }
}

impl FromStr for PathValues {
    type Err = SanError;

    fn from_str(s: &str) -> Result<Self> {
        if s.is_empty() {
            return Ok(PathValues(vec![]));
        }
        s.split(';')
            .map(|v| {
                v.parse::<f64>()
                    .map_err(|_| SanError::Config(format!("bad per-path value '{v}'")))
            })
            .collect::<Result<Vec<_>>>()
            .map(PathValues)
    }
}

impl Serialize for PathValues {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PathValues {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// One (receiver, mode, SNR, seed) cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub schema_version: u32,
    pub receiver: Receiver,
    pub mode: Mode,
    pub snr_db: f64,
    pub seed: u64,
    /// Receiver-noise variance calibrated to `snr_db`.
    pub sigma2: f64,
    /// Total noise variance in the bound (adds ς² for Eve's Gaussian baseline).
    pub noise_variance: f64,
    pub peb_m: f64,
    pub toa_bound_los_m: f64,
    pub aod_bound_los_rad: f64,
    pub toa_bounds_m: PathValues,
    pub aod_bounds_rad: PathValues,
    /// (PEB_Bob − PEB_Eve)/PEB_Bob for the matching cell; empty unless both
    /// receivers were run.
    pub lpl: Option<f64>,
    pub singular_fim: bool,
    /// Δ_min over the paths this receiver's signal exhibits (true plus fake
    /// paths for the eavesdropper under SAN). Empty for a single path.
    pub delta_min_toa: Option<f64>,
    pub delta_min_aod: Option<f64>,
    pub snr_roundtrip_db: f64,
}

pub fn write_csv<W: Write>(rows: &[ResultRow], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(COLUMNS).map_err(csv_err)?;
    for r in rows {
        w.serialize(r).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a results file, rejecting any header other than the current schema.
pub fn read_csv<R: Read>(input: R) -> Result<Vec<ResultRow>> {
    let mut r = csv::Reader::from_reader(input);
    let header = r.headers().map_err(csv_err)?.clone();
    let missing: Vec<&str> = COLUMNS.iter().copied().filter(|c| !header.iter().any(|h| h == *c)).collect();
    if !missing.is_empty() || header.len() != COLUMNS.len() {
        return Err(SanError::Config(format!(
            "results schema mismatch (expected version {SCHEMA_VERSION}); missing columns: {}",
            missing.join(", ")
        )));
    }
    let rows: Vec<ResultRow> = r.deserialize().collect::<std::result::Result<_, _>>().map_err(csv_err)?;
    if let Some(row) = rows.iter().find(|r| r.schema_version != SCHEMA_VERSION) {
        return Err(SanError::Config(format!(
            "row has schema version {}, expected {SCHEMA_VERSION}",
            row.schema_version
        )));
    }
    Ok(rows)
}

fn csv_err(e: csv::Error) -> SanError {
    SanError::Io(e.to_string())
}

/// Which bound a comparison reads from each row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    Peb,
    ToaLos,
    AodLos,
}

impl Metric {
    pub fn of(&self, row: &ResultRow) -> f64 {
        match self {
            Metric::Peb => row.peb_m,
            Metric::ToaLos => row.toa_bound_los_m,
            Metric::AodLos => row.aod_bound_los_rad,
        }
    }
}

/// Linear-interpolation quantile of unsorted data; NaN for an empty slice.
pub fn quantile(values: &[f64], q: f64) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let pos = q.clamp(0.0, 1.0) * (v.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    v[lo] + (v[hi] - v[lo]) * (pos - lo as f64)
}

pub fn median(values: &[f64]) -> f64 {
    quantile(values, 0.5)
}

/// Median and interquartile range over seeds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spread {
    pub median: f64,
    pub q1: f64,
    pub q3: f64,
    pub count: usize,
}

impl Spread {
    pub fn of(values: &[f64]) -> Spread {
        Spread {
            median: median(values),
            q1: quantile(values, 0.25),
            q3: quantile(values, 0.75),
            count: values.len(),
        }
    }
}

/// Per-seed 20·log10(a/b) between two series at matched (SNR, seed).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairedRatio {
    pub snr_db: f64,
    pub seed: u64,
    pub db: f64,
}

pub fn paired_ratio_db(
    rows: &[ResultRow],
    numerator: (Receiver, Mode),
    denominator: (Receiver, Mode),
    metric: Metric,
) -> Vec<PairedRatio> {
    rows.iter()
        .filter(|r| (r.receiver, r.mode) == numerator)
        .filter_map(|a| {
            rows.iter()
                .find(|b| (b.receiver, b.mode) == denominator && b.snr_db == a.snr_db && b.seed == a.seed)
                .map(|b| PairedRatio {
                    snr_db: a.snr_db,
                    seed: a.seed,
                    db: 20.0 * (metric.of(a) / metric.of(b)).log10(),
                })
        })
        .collect()
}

/// SNR grid values present in `rows`, in first-seen order.
pub fn snr_grid(rows: &[ResultRow]) -> Vec<f64> {
    let mut grid: Vec<f64> = Vec::new();
    for r in rows {
        if !grid.contains(&r.snr_db) {
            grid.push(r.snr_db);
        }
    }
    grid
}

/// Seed-median of a paired ratio at each SNR.
pub fn median_ratio_by_snr(
    rows: &[ResultRow],
    numerator: (Receiver, Mode),
    denominator: (Receiver, Mode),
    metric: Metric,
) -> Vec<(f64, Spread)> {
    let pairs = paired_ratio_db(rows, numerator, denominator, metric);
    snr_grid(rows)
        .into_iter()
        .map(|snr| {
            let v: Vec<f64> = pairs.iter().filter(|p| p.snr_db == snr).map(|p| p.db).collect();
            (snr, Spread::of(&v))
        })
        .filter(|(_, s)| s.count > 0)
        .collect()
}

/// Eve-over-Bob PEB gap in dB for `mode`, seed-median per SNR.
pub fn privacy_gap_db(rows: &[ResultRow], mode: Mode) -> Vec<(f64, Spread)> {
    median_ratio_by_snr(rows, (Receiver::Eve, mode), (Receiver::Bob, mode), Metric::Peb)
}

/// Seed spread of one series' metric at each SNR.
pub fn series_spread(rows: &[ResultRow], receiver: Receiver, mode: Mode, metric: Metric) -> Vec<(f64, Spread)> {
    snr_grid(rows)
        .into_iter()
        .map(|snr| {
            let v: Vec<f64> = rows
                .iter()
                .filter(|r| r.receiver == receiver && r.mode == mode && r.snr_db == snr)
                .map(|r| metric.of(r))
                .collect();
            (snr, Spread::of(&v))
        })
        .filter(|(_, s)| s.count > 0)
        .collect()
}

/// Seed spread of the LPL for `mode` at each SNR (Bob rows carry it).
pub fn lpl_spread(rows: &[ResultRow], mode: Mode) -> Vec<(f64, Spread)> {
    snr_grid(rows)
        .into_iter()
        .map(|snr| {
            let v: Vec<f64> = rows
                .iter()
                .filter(|r| r.receiver == Receiver::Bob && r.mode == mode && r.snr_db == snr)
                .filter_map(|r| r.lpl)
                .collect();
            (snr, Spread::of(&v))
        })
        .filter(|(_, s)| s.count > 0)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(receiver: Receiver, mode: Mode, snr_db: f64, seed: u64, peb: f64) -> ResultRow {
        ResultRow {
            schema_version: SCHEMA_VERSION,
            receiver,
            mode,
            snr_db,
            seed,
            sigma2: 1.0,
            noise_variance: 1.0,
            peb_m: peb,
            toa_bound_los_m: peb,
            aod_bound_los_rad: 0.1,
            toa_bounds_m: PathValues(vec![0.5, 1.25e-3]),
            aod_bounds_rad: PathValues(vec![1e-4]),
            lpl: None,
            singular_fim: false,
            delta_min_toa: Some(0.01),
            delta_min_aod: None,
            snr_roundtrip_db: 0.0,
        }
    }

    #[test]
    fn csv_round_trip() {
        let mut rows = vec![row(Receiver::Bob, Mode::San, -10.0, 3, 0.25)];
        rows[0].lpl = Some(-0.5);
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert_eq!(text.lines().next().unwrap(), COLUMNS.join(","));
        assert_eq!(read_csv(buf.as_slice()).unwrap(), rows);
    }

    #[test]
    fn header_mismatch_names_missing_columns() {
        let e = read_csv("receiver,mode\nbob,san\n".as_bytes()).unwrap_err();
        assert!(e.to_string().contains("peb_m"), "{e}");
    }

    #[test]
    fn quantiles() {
        let v = [4.0, 1.0, 3.0, 2.0];
        assert_eq!(median(&v), 2.5);
        assert_eq!(quantile(&v, 0.0), 1.0);
        assert_eq!(quantile(&v, 1.0), 4.0);
        assert_eq!(quantile(&v, 0.25), 1.75);
        assert!(median(&[]).is_nan());
    }

    #[test]
    fn gap_pairs_by_seed() {
        let rows = vec![
            row(Receiver::Bob, Mode::San, 0.0, 0, 1.0),
            row(Receiver::Eve, Mode::San, 0.0, 0, 10.0),
            row(Receiver::Bob, Mode::San, 0.0, 1, 2.0),
            row(Receiver::Eve, Mode::San, 0.0, 1, 2.0),
        ];
        let gap = privacy_gap_db(&rows, Mode::San);
        assert_eq!(gap.len(), 1);
        assert!((gap[0].1.median - 10.0).abs() < 1e-12);
    }
}
