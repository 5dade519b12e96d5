//! Scenario geometry and the mapping from positions to per-path channel
//! parameters (time of arrival, angle of departure, free-space gain).
//!
//! Units: metres for positions, microseconds for delays, and the speed of
//! light in m/µs. Frequencies are carried in Hz and converted where needed.

use std::f64::consts::PI;
use std::fmt;

use nalgebra::Vector2;
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::channel::{OfdmGrid, UniformLinearArray};
use crate::error::{Result, SanError};
use crate::rng;

pub type Point = Vector2<f64>;

/// Narrowband limit on the fractional bandwidth B / f_c.
pub const NARROWBAND_RATIO: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Receiver {
    Bob,
    Eve,
}

impl fmt::Display for Receiver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Receiver::Bob => f.write_str("bob"),
            Receiver::Eve => f.write_str("eve"),
        }
    }
}

/// Positions of all parties plus the OFDM/array system constants.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub alice: Point,
    pub bob: Point,
    pub eve: Point,
    pub scatterers: Vec<Point>,
    pub carrier_freq_hz: f64,
    pub bandwidth_hz: f64,
    pub num_tx: usize,
    pub num_subcarriers: usize,
    pub num_symbols: usize,
    pub antenna_spacing_m: f64,
    pub lightspeed_m_per_us: f64,
}

impl Default for Scenario {
    /// 60 GHz carrier, 15 MHz bandwidth, 16 antennas/subcarriers/symbols,
    /// two scatterers, Bob and Eve co-located.
    fn default() -> Self {
        let lightspeed_m_per_us = 300.0;
        let carrier_freq_hz = 60e9;
        let wavelength = lightspeed_m_per_us * 1e6 / carrier_freq_hz;
        Scenario {
            alice: Point::new(3.0, 0.0),
            bob: Point::new(10.0, 5.0),
            eve: Point::new(10.0, 5.0),
            scatterers: vec![Point::new(8.89, -6.05), Point::new(7.45, 8.54)],
            carrier_freq_hz,
            bandwidth_hz: 15e6,
            num_tx: 16,
            num_subcarriers: 16,
            num_symbols: 16,
            antenna_spacing_m: wavelength / 2.0,
            lightspeed_m_per_us,
        }
    }
}

impl Scenario {
    pub fn num_scatterers(&self) -> usize {
        self.scatterers.len()
    }

    pub fn num_paths(&self) -> usize {
        self.scatterers.len() + 1
    }

    /// T_s = 1/B in microseconds.
    pub fn sampling_period_us(&self) -> f64 {
        1e6 / self.bandwidth_hz
    }

    /// λ_c = c/f_c in metres.
    pub fn wavelength_m(&self) -> f64 {
        self.lightspeed_m_per_us * 1e6 / self.carrier_freq_hz
    }

    pub fn anchor(&self, receiver: Receiver) -> Point {
        match receiver {
            Receiver::Bob => self.bob,
            Receiver::Eve => self.eve,
        }
    }

    pub fn array(&self) -> UniformLinearArray {
        UniformLinearArray {
            num_elements: self.num_tx,
            spacing_m: self.antenna_spacing_m,
            wavelength_m: self.wavelength_m(),
        }
    }

    pub fn ofdm(&self) -> OfdmGrid {
        OfdmGrid {
            num_subcarriers: self.num_subcarriers,
            sampling_period_us: self.sampling_period_us(),
        }
    }

    /// Checks counts, finiteness and that no two parties coincide.
    ///
    /// A fractional bandwidth above [`NARROWBAND_RATIO`] is logged as a
    /// warning rather than rejected.
    pub fn validate(&self) -> Result<()> {
        if self.num_tx == 0 || self.num_subcarriers == 0 || self.num_symbols == 0 {
            return Err(SanError::Config(
                "num_tx, num_subcarriers and num_symbols must all be >= 1".into(),
            ));
        }
        for (name, v) in [
            ("carrier_freq_hz", self.carrier_freq_hz),
            ("bandwidth_hz", self.bandwidth_hz),
            ("antenna_spacing_m", self.antenna_spacing_m),
            ("lightspeed_m_per_us", self.lightspeed_m_per_us),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(SanError::Config(format!("{name} must be finite and positive, got {v}")));
            }
        }
        if self.bandwidth_hz / self.carrier_freq_hz >= NARROWBAND_RATIO {
            log::warn!(
                "fractional bandwidth {:.4} violates the narrowband assumption",
                self.bandwidth_hz / self.carrier_freq_hz
            );
        }
        let mut named = vec![("alice", self.alice), ("bob", self.bob), ("eve", self.eve)];
        for (k, v) in self.scatterers.iter().enumerate() {
            if !(v.x.is_finite() && v.y.is_finite()) {
                return Err(SanError::Config(format!("scatterer {} is not finite", k + 1)));
            }
            named.push(("scatterer", *v));
        }
        for (name, p) in &named[..3] {
            if !(p.x.is_finite() && p.y.is_finite()) {
                return Err(SanError::Config(format!("{name} position is not finite")));
            }
        }
        for (i, (name, p)) in named.iter().enumerate() {
            if i == 0 {
                continue;
            }
            if (p - self.alice).norm() == 0.0 {
                return Err(SanError::DegenerateGeometry(format!("alice coincides with {name}")));
            }
        }
        for (k, v) in self.scatterers.iter().enumerate() {
            for r in [Receiver::Bob, Receiver::Eve] {
                if (v - self.anchor(r)).norm() == 0.0 {
                    return Err(SanError::DegenerateGeometry(format!(
                        "scatterer {} coincides with {r}",
                        k + 1
                    )));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PathKind {
    LineOfSight,
    Scattered,
}

/// Location-relevant parameters of one propagation path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathParams {
    pub toa_us: f64,
    pub aod_rad: f64,
    pub gain: Complex64,
    pub kind: PathKind,
}

/// τ = (‖v0 − vk‖ + ‖p − vk‖)/c. Pass `vk = v0` for the direct path.
pub fn toa_of_path(p: &Point, v0: &Point, vk: &Point, c: f64) -> Result<f64> {
    let leg_tx = (p - vk).norm();
    let leg_rx = (v0 - vk).norm();
    if leg_tx == 0.0 {
        return Err(SanError::DegenerateGeometry("transmitter coincides with path vertex".into()));
    }
    if (p - v0).norm() == 0.0 {
        return Err(SanError::DegenerateGeometry("transmitter coincides with receiver".into()));
    }
    Ok((leg_rx + leg_tx) / c)
}

/// θ = arctan(Δy/Δx) with Δ = vk − p, two-quadrant. Δx = 0 maps to π/2.
pub fn aod_of_path(p: &Point, vk: &Point) -> Result<f64> {
    let d = vk - p;
    if d.x == 0.0 && d.y == 0.0 {
        return Err(SanError::DegenerateGeometry("path vertex coincides with transmitter".into()));
    }
    if d.x == 0.0 {
        return Ok(PI / 2.0);
    }
    Ok((d.y / d.x).atan())
}

/// Total propagation length of each path: direct distance for LOS, sum of
/// both legs for a scattered path.
pub fn path_lengths(alice: &Point, anchor: &Point, scatterers: &[Point]) -> Vec<f64> {
    std::iter::once((alice - anchor).norm())
        .chain(scatterers.iter().map(|v| (anchor - v).norm() + (alice - v).norm()))
        .collect()
}

/// Free-space gains |γ_k| = λ_c / (4π L_k) with seeded uniform phases.
///
/// Phases depend only on the seed and path index, so co-located receivers see
/// identical gains. No reflection loss is applied to scattered paths.
pub fn path_gains(scenario: &Scenario, receiver: Receiver, seed: u64) -> Result<Vec<Complex64>> {
    scenario.validate()?;
    let lambda = scenario.wavelength_m();
    let lengths = path_lengths(&scenario.alice, &scenario.anchor(receiver), &scenario.scatterers);
    let mut rng = rng::stream(seed, rng::GAIN_STREAM);
    Ok(lengths
        .into_iter()
        .map(|len| {
            let phase = rng.random_range(0.0..2.0 * PI);
            Complex64::from_polar(lambda / (4.0 * PI * len), phase)
        })
        .collect())
}

/// Builds per-path parameters from positions without range validation.
pub fn geometric_paths(
    alice: &Point,
    anchor: &Point,
    scatterers: &[Point],
    gains: &[Complex64],
    c: f64,
) -> Result<Vec<PathParams>> {
    if gains.len() != scatterers.len() + 1 {
        return Err(SanError::InvalidArgument(format!(
            "{} gains for {} paths",
            gains.len(),
            scatterers.len() + 1
        )));
    }
    let mut out = Vec::with_capacity(gains.len());
    out.push(PathParams {
        toa_us: toa_of_path(alice, anchor, anchor, c)?,
        aod_rad: aod_of_path(alice, anchor)?,
        gain: gains[0],
        kind: PathKind::LineOfSight,
    });
    for (v, g) in scatterers.iter().zip(&gains[1..]) {
        if (anchor - v).norm() == 0.0 {
            return Err(SanError::DegenerateGeometry("scatterer coincides with receiver".into()));
        }
        out.push(PathParams {
            toa_us: toa_of_path(alice, anchor, v, c)?,
            aod_rad: aod_of_path(alice, v)?,
            gain: *g,
            kind: PathKind::Scattered,
        });
    }
    Ok(out)
}

/// Checks the normalised delay range (0, 1], the spatial-frequency range
/// (−1/2, 1/2] and that the direct path arrives first.
pub fn validate_paths(paths: &[PathParams], scenario: &Scenario) -> Result<()> {
    let ofdm = scenario.ofdm();
    let array = scenario.array();
    for (k, path) in paths.iter().enumerate() {
        let nd = ofdm.normalized_delay(path.toa_us);
        if !(nd > 0.0 && nd <= 1.0) {
            return Err(SanError::Config(format!(
                "path {k}: normalised delay {nd} outside (0, 1]"
            )));
        }
        let u = array.spatial_frequency(path.aod_rad);
        if !(u > -0.5 && u <= 0.5) {
            return Err(SanError::Config(format!(
                "path {k}: spatial frequency {u} outside (-1/2, 1/2]"
            )));
        }
    }
    if let Some(los) = paths.first() {
        if let Some((k, p)) = paths.iter().enumerate().skip(1).find(|(_, p)| p.toa_us < los.toa_us) {
            return Err(SanError::Config(format!(
                "path {k}: delay {} shorter than line of sight {}",
                p.toa_us, los.toa_us
            )));
        }
    }
    Ok(())
}

/// Per-path parameters seen by `receiver` (anchor q for Bob, z for Eve).
pub fn channel_params(scenario: &Scenario, receiver: Receiver, seed: u64) -> Result<Vec<PathParams>> {
    let gains = path_gains(scenario, receiver, seed)?;
    let paths = geometric_paths(
        &scenario.alice,
        &scenario.anchor(receiver),
        &scenario.scatterers,
        &gains,
        scenario.lightspeed_m_per_us,
    )?;
    validate_paths(&paths, scenario)?;
    Ok(paths)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn los_toa_reference_geometry() {
        let p = Point::new(3.0, 0.0);
        let q = Point::new(10.0, 5.0);
        let tau = toa_of_path(&p, &q, &q, 300.0).unwrap();
        assert_relative_eq!(tau, 74f64.sqrt() / 300.0, max_relative = 1e-15);
        assert_relative_eq!(tau, 0.028674, epsilon = 1e-6);
    }

    #[test]
    fn unit_toa() {
        let tau = toa_of_path(&Point::zeros(), &Point::new(1.0, 0.0), &Point::new(1.0, 0.0), 1.0).unwrap();
        assert_eq!(tau, 1.0);
    }

    #[test]
    fn nlos_toa_reference_geometry() {
        let p = Point::new(3.0, 0.0);
        let q = Point::new(10.0, 5.0);
        let v = Point::new(8.89, -6.05);
        // legs computed by hand: sqrt(1.11² + 11.05²) + sqrt(5.89² + 6.05²)
        let expected = ((1.11f64.powi(2) + 11.05f64.powi(2)).sqrt()
            + (5.89f64.powi(2) + 6.05f64.powi(2)).sqrt())
            / 300.0;
        let tau = toa_of_path(&p, &q, &v, 300.0).unwrap();
        assert_relative_eq!(tau, expected, max_relative = 1e-14);
        assert_relative_eq!(tau, 0.06516, epsilon = 1e-5);
    }

    #[test]
    fn coincident_points_error() {
        let p = Point::new(1.0, 1.0);
        assert!(matches!(
            toa_of_path(&p, &Point::zeros(), &p, 300.0),
            Err(SanError::DegenerateGeometry(_))
        ));
        assert!(matches!(aod_of_path(&p, &p), Err(SanError::DegenerateGeometry(_))));
    }

    #[test]
    fn aod_examples() {
        let p = Point::new(3.0, 0.0);
        assert_relative_eq!(aod_of_path(&p, &Point::new(10.0, 5.0)).unwrap(), (5.0f64 / 7.0).atan());
        assert_relative_eq!(aod_of_path(&p, &Point::new(10.0, 5.0)).unwrap(), 0.62025, epsilon = 1e-5);
        assert_eq!(aod_of_path(&Point::zeros(), &Point::new(1.0, 0.0)).unwrap(), 0.0);
        assert_eq!(aod_of_path(&p, &Point::new(3.0, 2.0)).unwrap(), PI / 2.0);
        assert_eq!(aod_of_path(&p, &Point::new(3.0, -2.0)).unwrap(), PI / 2.0);
    }

    #[test]
    fn aod_is_two_quadrant() {
        // A target behind the array folds onto the front half-plane.
        let a = aod_of_path(&Point::zeros(), &Point::new(-1.0, 1.0)).unwrap();
        assert_relative_eq!(a, -PI / 4.0);
    }

    #[test]
    fn gain_normalisation_distance() {
        let mut s = Scenario {
            scatterers: vec![],
            ..Scenario::default()
        };
        let lambda = s.wavelength_m();
        s.bob = s.alice + Point::new(lambda / (4.0 * PI), 0.0);
        let g = path_gains(&s, Receiver::Bob, 3).unwrap();
        assert_relative_eq!(g[0].norm(), 1.0, max_relative = 1e-12);
    }

    #[test]
    fn gains_reference_magnitude_and_determinism() {
        let s = Scenario::default();
        assert_relative_eq!(s.wavelength_m(), 0.005, max_relative = 1e-12);
        let g1 = path_gains(&s, Receiver::Bob, 11).unwrap();
        let g2 = path_gains(&s, Receiver::Bob, 11).unwrap();
        assert_eq!(g1, g2);
        assert_relative_eq!(g1[0].norm(), 0.005 / (4.0 * PI * 74f64.sqrt()), max_relative = 1e-12);
        assert_relative_eq!(g1[0].norm(), 4.625e-5, max_relative = 1e-3);
        assert_ne!(path_gains(&s, Receiver::Bob, 12).unwrap(), g1);
    }

    #[test]
    fn reference_scenario_paths() {
        let s = Scenario::default();
        let bob = channel_params(&s, Receiver::Bob, 0).unwrap();
        let eve = channel_params(&s, Receiver::Eve, 0).unwrap();
        assert_eq!(bob.len(), 3);
        assert_eq!(bob, eve);
        assert_eq!(bob[0].kind, PathKind::LineOfSight);
        assert!(bob[1..].iter().all(|p| p.kind == PathKind::Scattered));
    }

    #[test]
    fn single_los_path_is_composition() {
        let s = Scenario {
            scatterers: vec![],
            ..Scenario::default()
        };
        let paths = channel_params(&s, Receiver::Bob, 1).unwrap();
        assert_eq!(paths.len(), 1);
        assert_eq!(paths[0].toa_us, toa_of_path(&s.alice, &s.bob, &s.bob, 300.0).unwrap());
        assert_eq!(paths[0].aod_rad, aod_of_path(&s.alice, &s.bob).unwrap());
    }

    #[test]
    fn delay_out_of_range_names_path() {
        let s = Scenario {
            scatterers: vec![Point::new(3.0, 400.0)],
            ..Scenario::default()
        };
        let err = channel_params(&s, Receiver::Bob, 0).unwrap_err();
        assert!(matches!(&err, SanError::Config(m) if m.starts_with("path 1")), "{err}");
    }

    #[test]
    fn alice_on_scatterer_rejected() {
        let s = Scenario {
            scatterers: vec![Point::new(3.0, 0.0)],
            ..Scenario::default()
        };
        assert!(matches!(s.validate(), Err(SanError::DegenerateGeometry(_))));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn pt() -> impl Strategy<Value = Point> {
            (-20.0f64..20.0, -20.0f64..20.0).prop_map(|(x, y)| Point::new(x, y))
        }

        proptest! {
            #[test]
            fn translation_invariance(p in pt(), v0 in pt(), vk in pt(), t in pt()) {
                prop_assume!((p - v0).norm() > 1e-3 && (p - vk).norm() > 1e-3 && (vk.x - p.x).abs() > 1e-6);
                let tau = toa_of_path(&p, &v0, &vk, 300.0).unwrap();
                let tau_t = toa_of_path(&(p + t), &(v0 + t), &(vk + t), 300.0).unwrap();
                prop_assert!((tau - tau_t).abs() <= 1e-12 * tau.max(1.0));
                let th = aod_of_path(&p, &vk).unwrap();
                let th_t = aod_of_path(&(p + t), &(vk + t)).unwrap();
                prop_assert!((th - th_t).abs() < 1e-9);
            }

            #[test]
            fn nlos_legs_symmetric(p in pt(), v0 in pt(), vk in pt()) {
                prop_assume!((p - v0).norm() > 1e-3 && (p - vk).norm() > 1e-3 && (v0 - vk).norm() > 1e-3);
                let a = toa_of_path(&p, &v0, &vk, 300.0).unwrap();
                let b = toa_of_path(&v0, &p, &vk, 300.0).unwrap();
                prop_assert_eq!(a, b);
            }

            #[test]
            fn lightspeed_scaling(p in pt(), v0 in pt(), vk in pt(), s in 0.1f64..10.0) {
                prop_assume!((p - v0).norm() > 1e-3 && (p - vk).norm() > 1e-3);
                let a = toa_of_path(&p, &v0, &vk, 300.0).unwrap();
                let b = toa_of_path(&p, &v0, &vk, 300.0 * s).unwrap();
                prop_assert!((a / s - b).abs() <= 1e-12 * a);
            }

            #[test]
            fn rotation_about_alice(p in pt(), vk in pt(), phi in -0.3f64..0.3) {
                prop_assume!((vk - p).norm() > 1e-2);
                let th = aod_of_path(&p, &vk).unwrap();
                prop_assume!(th.abs() < 1.2);
                let rot = nalgebra::Rotation2::new(phi);
                let vr = p + rot * (vk - p);
                let th_r = aod_of_path(&p, &vr).unwrap();
                prop_assert!((th_r - (th + phi)).abs() < 1e-9);
            }
        }
    }
}
