//! Fourier and steering vectors, the per-subcarrier MISO channel row and the
//! fake channel induced by structured artificial noise.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Result, SanError};
use crate::geometry::PathParams;

/// Uniform linear transmit array.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformLinearArray {
    pub num_elements: usize,
    pub spacing_m: f64,
    pub wavelength_m: f64,
}

impl UniformLinearArray {
    /// d·sin(θ)/λ_c in cycles per element.
    pub fn spatial_frequency(&self, aod_rad: f64) -> f64 {
        self.spatial_frequency_from_sine(aod_rad.sin())
    }

    pub fn spatial_frequency_from_sine(&self, sine: f64) -> f64 {
        self.spacing_m * sine / self.wavelength_m
    }

    /// α(θ) = a_{N_t}(d sin θ / λ_c).
    pub fn steering(&self, aod_rad: f64) -> Result<Vec<Complex64>> {
        steering_vector(aod_rad, self.num_elements, self.spacing_m, self.wavelength_m)
    }
}

/// Subcarrier layout of the OFDM pilot block.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OfdmGrid {
    pub num_subcarriers: usize,
    pub sampling_period_us: f64,
}

impl OfdmGrid {
    /// N·T_s in microseconds.
    pub fn symbol_duration_us(&self) -> f64 {
        self.num_subcarriers as f64 * self.sampling_period_us
    }

    /// τ/(N·T_s).
    pub fn normalized_delay(&self, toa_us: f64) -> f64 {
        toa_us / self.symbol_duration_us()
    }

    /// e^{−j2πnτ/(N·T_s)}.
    pub fn delay_phase(&self, n: usize, toa_us: f64) -> Complex64 {
        Complex64::from_polar(1.0, -2.0 * PI * n as f64 * self.normalized_delay(toa_us))
    }
}

/// a_L(f) = [1, e^{−j2πf}, …, e^{−j2π(L−1)f}]ᵀ.
pub fn fourier_vector(len: usize, freq: f64) -> Vec<Complex64> {
    (0..len)
        .map(|m| Complex64::from_polar(1.0, -2.0 * PI * m as f64 * freq))
        .collect()
}

/// Array response for departure angle `aod_rad`; errors if the spatial
/// frequency leaves (−1/2, 1/2].
pub fn steering_vector(aod_rad: f64, num_tx: usize, spacing_m: f64, wavelength_m: f64) -> Result<Vec<Complex64>> {
    let f = spacing_m * aod_rad.sin() / wavelength_m;
    // sin(π/2) rounds to exactly 1, so the endfire boundary stays inside.
    if !(f > -0.5 && f <= 0.5) {
        return Err(SanError::SpatialFrequencyRange(f));
    }
    Ok(fourier_vector(num_tx, f))
}

/// One row h^(n) ∈ C^{1×N_t}.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelVector {
    pub subcarrier: usize,
    pub entries: Vec<Complex64>,
}

impl ChannelVector {
    pub fn zeros(subcarrier: usize, num_tx: usize) -> Self {
        ChannelVector {
            subcarrier,
            entries: vec![Complex64::new(0.0, 0.0); num_tx],
        }
    }

    /// Scalar h·s.
    pub fn apply(&self, s: &[Complex64]) -> Complex64 {
        self.entries.iter().zip(s).map(|(h, x)| h * x).sum()
    }

    pub fn norm(&self) -> f64 {
        self.entries.iter().map(|h| h.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn add(&self, other: &ChannelVector) -> ChannelVector {
        ChannelVector {
            subcarrier: self.subcarrier,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect(),
        }
    }
}

/// A virtual path injected through the SAN beamformer.
///
/// The sine of the departure angle is carried alongside the angle so that
/// tiny key offsets do not lose precision through an arcsin/sin round trip.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FakePath {
    pub gain: Complex64,
    pub toa_us: f64,
    pub aod_rad: f64,
    pub sin_aod: f64,
}

impl From<&PathParams> for FakePath {
    fn from(p: &PathParams) -> Self {
        FakePath {
            gain: p.gain,
            toa_us: p.toa_us,
            aod_rad: p.aod_rad,
            sin_aod: p.aod_rad.sin(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct FakePathParams {
    pub paths: Vec<FakePath>,
}

impl FakePathParams {
    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }
}

fn accumulate_path(
    row: &mut [Complex64],
    gain: Complex64,
    toa_us: f64,
    sine: f64,
    n: usize,
    grid: &OfdmGrid,
    array: &UniformLinearArray,
) {
    let weight = gain * grid.delay_phase(n, toa_us);
    let u = array.spatial_frequency_from_sine(sine);
    // α(θ)^H has entries e^{+j2π m u}
    for (m, h) in row.iter_mut().enumerate() {
        *h += weight * Complex64::from_polar(1.0, 2.0 * PI * m as f64 * u);
    }
}

/// h^(n) = Σ_k γ_k e^{−j2πnτ_k/(NT_s)} α(θ_k)^H.
pub fn subcarrier_channel(paths: &[PathParams], n: usize, grid: &OfdmGrid, array: &UniformLinearArray) -> ChannelVector {
    let mut row = ChannelVector::zeros(n, array.num_elements);
    for p in paths {
        accumulate_path(&mut row.entries, p.gain, p.toa_us, p.aod_rad.sin(), n, grid, array);
    }
    row
}

/// h̃^(n) = Σ_k̃ γ̃ e^{−j2πnτ̃/(NT_s)} α(θ̃)^H. Zero when there are no fake paths.
pub fn fake_channel(fake: &FakePathParams, n: usize, grid: &OfdmGrid, array: &UniformLinearArray) -> ChannelVector {
    let mut row = ChannelVector::zeros(n, array.num_elements);
    for p in &fake.paths {
        accumulate_path(&mut row.entries, p.gain, p.toa_us, p.sin_aod, n, grid, array);
    }
    row
}

/// All N subcarrier rows for a path list.
pub fn channel_rows(paths: &[PathParams], grid: &OfdmGrid, array: &UniformLinearArray) -> Vec<ChannelVector> {
    (0..grid.num_subcarriers)
        .map(|n| subcarrier_channel(paths, n, grid, array))
        .collect()
}

pub fn fake_channel_rows(fake: &FakePathParams, grid: &OfdmGrid, array: &UniformLinearArray) -> Vec<ChannelVector> {
    (0..grid.num_subcarriers)
        .map(|n| fake_channel(fake, n, grid, array))
        .collect()
}
