//! Pilots, the SAN transmit beamformer, the legitimate receiver's effective
//! pilots, the eavesdropper's fake-path channel and noisy observation
//! synthesis.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::channel::{
    channel_rows, fake_channel_rows, fourier_vector, ChannelVector, FakePath, FakePathParams, OfdmGrid,
    UniformLinearArray,
};
use crate::error::{Result, SanError};
use crate::geometry::{PathParams, Receiver, Scenario};
use crate::rng;

/// Sign `s` in sin θ̃ = sin θ + s·sin δ_θ.
///
/// With the Hermitian steering convention, h·diag(α(δ_θ)) multiplies entry m
/// of h by e^{−j2πm d sin δ_θ/λ}, which moves every spatial frequency down.
/// [`resolve_fake_aod_sign`] re-derives this numerically.
pub const FAKE_AOD_SIGN: f64 = -1.0;

/// Shared secret δ = [δ_τ, δ_θ].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SanKey {
    pub delta_tau_us: f64,
    pub delta_theta_rad: f64,
}

impl Default for SanKey {
    fn default() -> Self {
        SanKey {
            delta_tau_us: -PI / 61.0,
            delta_theta_rad: 1e-8,
        }
    }
}

impl SanKey {
    pub const ZERO: SanKey = SanKey {
        delta_tau_us: 0.0,
        delta_theta_rad: 0.0,
    };

    pub fn scaled(&self, factor: f64) -> SanKey {
        SanKey {
            delta_tau_us: self.delta_tau_us * factor,
            delta_theta_rad: self.delta_theta_rad * factor,
        }
    }

    pub fn validate(&self, array: &UniformLinearArray) -> Result<()> {
        if !(self.delta_tau_us.is_finite() && self.delta_theta_rad.is_finite()) {
            return Err(SanError::Config("SAN key entries must be finite".into()));
        }
        let u = array.spatial_frequency(self.delta_theta_rad);
        if u.abs() >= 0.5 {
            return Err(SanError::Config(format!(
                "SAN key angular offset gives spatial frequency {u}, must satisfy |u| < 1/2"
            )));
        }
        Ok(())
    }
}

/// G × N grid of N_t-vectors, stored symbol-major.
#[derive(Debug, Clone, PartialEq)]
pub struct PilotGrid {
    pub num_symbols: usize,
    pub num_subcarriers: usize,
    pub num_tx: usize,
    data: Vec<Complex64>,
}

impl PilotGrid {
    pub fn from_fn(
        num_symbols: usize,
        num_subcarriers: usize,
        num_tx: usize,
        mut f: impl FnMut(usize, usize) -> Vec<Complex64>,
    ) -> Self {
        let mut data = Vec::with_capacity(num_symbols * num_subcarriers * num_tx);
        for g in 0..num_symbols {
            for n in 0..num_subcarriers {
                let v = f(g, n);
                assert_eq!(v.len(), num_tx, "pilot vector length");
                data.extend(v);
            }
        }
        PilotGrid {
            num_symbols,
            num_subcarriers,
            num_tx,
            data,
        }
    }

    /// Vector for symbol `g` (0-based) on subcarrier `n`.
    pub fn at(&self, g: usize, n: usize) -> &[Complex64] {
        let start = (g * self.num_subcarriers + n) * self.num_tx;
        &self.data[start..start + self.num_tx]
    }

    pub fn len(&self) -> usize {
        self.num_symbols * self.num_subcarriers
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Unit-modulus pilot symbols x^(g,n) and unit-norm beamformers f^(g,n).
#[derive(Debug, Clone, PartialEq)]
pub struct PilotSet {
    symbols: Vec<Complex64>,
    beamformers: PilotGrid,
}

impl PilotSet {
    pub fn num_symbols(&self) -> usize {
        self.beamformers.num_symbols
    }

    pub fn num_subcarriers(&self) -> usize {
        self.beamformers.num_subcarriers
    }

    pub fn num_tx(&self) -> usize {
        self.beamformers.num_tx
    }

    pub fn symbol(&self, g: usize, n: usize) -> Complex64 {
        self.symbols[g * self.num_subcarriers() + n]
    }

    pub fn beamformer(&self, g: usize, n: usize) -> &[Complex64] {
        self.beamformers.at(g, n)
    }

    /// s^(g,n) = f^(g,n) x^(g,n).
    pub fn pilots(&self) -> PilotGrid {
        PilotGrid::from_fn(self.num_symbols(), self.num_subcarriers(), self.num_tx(), |g, n| {
            let x = self.symbol(g, n);
            self.beamformer(g, n).iter().map(|f| f * x).collect()
        })
    }
}

pub fn generate_pilots(num_symbols: usize, num_subcarriers: usize, num_tx: usize, seed: u64) -> Result<PilotSet> {
    if num_symbols == 0 || num_subcarriers == 0 || num_tx == 0 {
        return Err(SanError::InvalidArgument("pilot dimensions must all be >= 1".into()));
    }
    let mut rng = rng::stream(seed, rng::PILOT_STREAM);
    let mut unit = move || Complex64::from_polar(1.0, rng.random_range(0.0..2.0 * PI));
    let symbols: Vec<Complex64> = (0..num_symbols * num_subcarriers).map(|_| unit()).collect();
    let scale = 1.0 / (num_tx as f64).sqrt();
    let beamformers = PilotGrid::from_fn(num_symbols, num_subcarriers, num_tx, |_, _| {
        (0..num_tx).map(|_| unit() * scale).collect()
    });
    Ok(PilotSet { symbols, beamformers })
}

/// (I + e^{−j2πnδ_τ/(NT_s)} diag(α(δ_θ))) v.
fn apply_san_operator(
    v: &[Complex64],
    n: usize,
    key: &SanKey,
    grid: &OfdmGrid,
    array: &UniformLinearArray,
) -> Vec<Complex64> {
    let phase = grid.delay_phase(n, key.delta_tau_us);
    let alpha = fourier_vector(v.len(), array.spatial_frequency(key.delta_theta_rad));
    v.iter().zip(alpha).map(|(x, a)| x + phase * a * x).collect()
}

/// Alice's SAN beamformer f̃^(g,n) for subcarrier `n`.
pub fn san_beamformer(
    f: &[Complex64],
    n: usize,
    key: &SanKey,
    grid: &OfdmGrid,
    array: &UniformLinearArray,
) -> Vec<Complex64> {
    apply_san_operator(f, n, key, grid, array)
}

/// Bob's reconstruction s̃^(g,n) from the pilot and the shared key.
pub fn bob_effective_pilot(
    s: &[Complex64],
    n: usize,
    key: &SanKey,
    grid: &OfdmGrid,
    array: &UniformLinearArray,
) -> Vec<Complex64> {
    apply_san_operator(s, n, key, grid, array)
}

pub fn bob_effective_pilots(pilots: &PilotGrid, key: &SanKey, grid: &OfdmGrid, array: &UniformLinearArray) -> PilotGrid {
    PilotGrid::from_fn(pilots.num_symbols, pilots.num_subcarriers, pilots.num_tx, |g, n| {
        bob_effective_pilot(pilots.at(g, n), n, key, grid, array)
    })
}

/// Fake paths induced by the SAN beamformer: one per true path, with
/// γ̃ = γ, τ̃ = τ + δ_τ and sin θ̃ = sin θ + s·sin δ_θ, s = [`FAKE_AOD_SIGN`].
///
/// Fake delays are not range-checked: the delay phase is periodic in N·T_s and
/// τ + δ_τ is routinely negative.
pub fn fake_path_params(paths: &[PathParams], key: &SanKey) -> Result<FakePathParams> {
    fake_path_params_with_sign(paths, key, FAKE_AOD_SIGN)
}

pub fn fake_path_params_with_sign(paths: &[PathParams], key: &SanKey, sign: f64) -> Result<FakePathParams> {
    let shift = sign * key.delta_theta_rad.sin();
    paths
        .iter()
        .enumerate()
        .map(|(k, p)| {
            let sine = p.aod_rad.sin() + shift;
            if !(-1.0..=1.0).contains(&sine) {
                return Err(SanError::KeyTooLarge { path: k, sine });
            }
            Ok(FakePath {
                gain: p.gain,
                toa_us: p.toa_us + key.delta_tau_us,
                aod_rad: sine.asin(),
                sin_aod: sine,
            })
        })
        .collect::<Result<Vec<_>>>()
        .map(|paths| FakePathParams { paths })
}

/// max over (g, n) of |h·f̃·x − (h + h̃)·s| for a given fake-angle sign.
pub fn equivalence_error(
    scenario: &Scenario,
    paths: &[PathParams],
    pilots: &PilotSet,
    key: &SanKey,
    sign: f64,
) -> Result<f64> {
    let grid = scenario.ofdm();
    let array = scenario.array();
    let rows = channel_rows(paths, &grid, &array);
    let fake = fake_path_params_with_sign(paths, key, sign)?;
    let fake_rows = fake_channel_rows(&fake, &grid, &array);
    let s = pilots.pilots();
    let mut worst = 0.0f64;
    for g in 0..pilots.num_symbols() {
        for n in 0..pilots.num_subcarriers() {
            let f_san = san_beamformer(pilots.beamformer(g, n), n, key, &grid, &array);
            let lhs = rows[n].apply(&f_san) * pilots.symbol(g, n);
            let rhs = rows[n].add(&fake_rows[n]).apply(s.at(g, n));
            worst = worst.max((lhs - rhs).norm());
        }
    }
    Ok(worst)
}

/// Determines which fake-angle sign makes the beamformer and fake-path
/// formulations agree. Returns the sign and the residual error with each
/// candidate `(+1, -1)`.
pub fn resolve_fake_aod_sign(scenario: &Scenario, seed: u64) -> Result<(f64, [f64; 2])> {
    let paths = crate::geometry::channel_params(scenario, Receiver::Eve, seed)?;
    let pilots = generate_pilots(scenario.num_symbols, scenario.num_subcarriers, scenario.num_tx, seed)?;
    // a key large enough that the two signs are distinguishable
    let key = SanKey {
        delta_tau_us: 0.013,
        delta_theta_rad: 0.05,
    };
    let plus = equivalence_error(scenario, &paths, &pilots, &key, 1.0)?;
    let minus = equivalence_error(scenario, &paths, &pilots, &key, -1.0)?;
    let sign = if minus <= plus { -1.0 } else { 1.0 };
    Ok((sign, [plus, minus]))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// No artificial noise.
    Clean,
    /// Structured artificial noise via the SAN beamformer.
    San,
    /// Unstructured Gaussian artificial noise of matched average power.
    GaussianBaseline,
}

impl Mode {
    pub const ALL: [Mode; 3] = [Mode::Clean, Mode::San, Mode::GaussianBaseline];

    pub fn as_str(&self) -> &'static str {
        match self {
            Mode::Clean => "clean",
            Mode::San => "san",
            Mode::GaussianBaseline => "gaussian-baseline",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Mode {
    type Err = SanError;

    fn from_str(s: &str) -> Result<Self> {
        Mode::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| SanError::InvalidArgument(format!("unknown mode '{s}'")))
    }
}

/// Received samples y^(g,n), symbol-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservationSet {
    pub receiver: Receiver,
    pub mode: Mode,
    pub sigma2: f64,
    pub num_symbols: usize,
    pub num_subcarriers: usize,
    pub samples: Vec<Complex64>,
}

impl ObservationSet {
    pub fn at(&self, g: usize, n: usize) -> Complex64 {
        self.samples[g * self.num_subcarriers + n]
    }
}

/// Noiseless received samples for one receiver under `mode`.
///
/// Bob under SAN uses the reconstructed pilots h·s̃; Eve under SAN sees the
/// fake-path channel (h + h̃)·s. Both reduce to h·f̃·x.
pub fn noiseless_received(
    scenario: &Scenario,
    paths: &[PathParams],
    pilots: &PilotSet,
    mode: Mode,
    key: Option<&SanKey>,
    receiver: Receiver,
) -> Result<Vec<Complex64>> {
    let grid = scenario.ofdm();
    let array = scenario.array();
    let rows = channel_rows(paths, &grid, &array);
    let s = pilots.pilots();
    let (g_len, n_len) = (pilots.num_symbols(), pilots.num_subcarriers());
    let sample = |rows: &[ChannelVector], s: &PilotGrid| -> Vec<Complex64> {
        (0..g_len)
            .flat_map(|g| (0..n_len).map(move |n| (g, n)))
            .map(|(g, n)| rows[n].apply(s.at(g, n)))
            .collect()
    };
    match mode {
        Mode::Clean | Mode::GaussianBaseline => Ok(sample(&rows, &s)),
        Mode::San => {
            let key = key.ok_or(SanError::MissingKey("san"))?;
            match receiver {
                Receiver::Bob => Ok(sample(&rows, &bob_effective_pilots(&s, key, &grid, &array))),
                Receiver::Eve => {
                    let fake = fake_path_params(paths, key)?;
                    let eff: Vec<ChannelVector> = rows
                        .iter()
                        .zip(fake_channel_rows(&fake, &grid, &array))
                        .map(|(h, ht)| h.add(&ht))
                        .collect();
                    Ok(sample(&eff, &s))
                }
            }
        }
    }
}

fn circular_normal(rng: &mut impl Rng, variance: f64) -> Complex64 {
    let sd = (variance / 2.0).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re * sd, im * sd)
}

/// Draws `count` samples of CN(0, σ²) from the receiver-noise stream.
pub fn noise_samples(count: usize, sigma2: f64, seed: u64) -> Vec<Complex64> {
    let mut rng = rng::stream(seed, rng::NOISE_STREAM);
    (0..count).map(|_| circular_normal(&mut rng, sigma2)).collect()
}

/// Synthesises y = mean + w, plus ζ ~ CN(0, ς²) in the Gaussian-baseline
/// mode. Draws are made in fixed (g, n) order from per-purpose streams.
#[allow(clippy::too_many_arguments)]
pub fn synthesize_received(
    scenario: &Scenario,
    paths: &[PathParams],
    pilots: &PilotSet,
    mode: Mode,
    key: Option<&SanKey>,
    sigma2: f64,
    seed: u64,
    receiver: Receiver,
) -> Result<ObservationSet> {
    if !(sigma2 > 0.0) {
        return Err(SanError::InvalidArgument(format!("noise variance must be positive, got {sigma2}")));
    }
    let mut samples = noiseless_received(scenario, paths, pilots, mode, key, receiver)?;
    if mode == Mode::GaussianBaseline {
        let key = key.ok_or(SanError::MissingKey("gaussian-baseline"))?;
        let varsigma2 = baseline_variance(scenario, paths, pilots, key)?;
        let mut rng = rng::stream(seed, rng::ARTIFICIAL_NOISE_STREAM);
        for y in samples.iter_mut() {
            *y += circular_normal(&mut rng, varsigma2);
        }
    }
    for (y, w) in samples.iter_mut().zip(noise_samples(pilots.pilots().len(), sigma2, seed)) {
        *y += w;
    }
    Ok(ObservationSet {
        receiver,
        mode,
        sigma2,
        num_symbols: pilots.num_symbols(),
        num_subcarriers: pilots.num_subcarriers(),
        samples,
    })
}

/// ς² = Σ_g Σ_n |h̃^(n) s^(g,n)|² / (NG).
pub fn gaussian_noise_variance(fake_rows: &[ChannelVector], pilots: &PilotGrid) -> f64 {
    let mut acc = 0.0;
    for g in 0..pilots.num_symbols {
        for n in 0..pilots.num_subcarriers {
            acc += fake_rows[n].apply(pilots.at(g, n)).norm_sqr();
        }
    }
    acc / pilots.len() as f64
}

/// ς² for the SAN that `key` would inject over `paths`.
pub fn baseline_variance(scenario: &Scenario, paths: &[PathParams], pilots: &PilotSet, key: &SanKey) -> Result<f64> {
    let fake = fake_path_params(paths, key)?;
    let rows = fake_channel_rows(&fake, &scenario.ofdm(), &scenario.array());
    Ok(gaussian_noise_variance(&rows, &pilots.pilots()))
}
