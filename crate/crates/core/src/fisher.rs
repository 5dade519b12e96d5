//! Fisher information and Cramér-Rao bounds for the legitimate receiver and
//! the eavesdropper.
//!
//! The observation model is y = μ(η) + w with w ~ CN(0, σ²I), so
//! J = (2/σ²) Re{(∂μ/∂η)^H (∂μ/∂η)}. Position-domain parameters are
//! η = [p, v_1..v_K, Re/Im γ_0..γ_K] with [δ_τ, δ_θ] appended for the
//! eavesdropper, who knows the beamformer structure but not the key. The
//! channel-domain parametrisation replaces positions by [τ_0..τ_K, θ_0..θ_K].

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::channel::{channel_rows, fake_channel_rows, ChannelVector};
use crate::error::{Result, SanError};
use crate::geometry::{geometric_paths, PathParams, Point, Receiver, Scenario};
use crate::signaling::{bob_effective_pilots, fake_path_params, Mode, PilotGrid, PilotSet, SanKey, FAKE_AOD_SIGN};

const J: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Equilibrated condition number above which the FIM is reported singular.
pub const SINGULAR_CONDITION: f64 = 1e13;

/// Relative eigenvalue floor for the PSD check.
pub const PSD_EPSILON: f64 = 1e-10;

/// Which noiseless mean the receiver fits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SignalModel {
    /// μ = h·s.
    Clean,
    /// μ = h·s̃ with the key known.
    BobSan(SanKey),
    /// μ = (h + h̃(δ))·s with δ part of the unknowns.
    EveSan,
}

impl SignalModel {
    /// Model used by `receiver` in `mode`. Both receivers fit the clean
    /// channel in the Gaussian baseline; the artificial noise only inflates
    /// the eavesdropper's noise variance.
    pub fn for_mode(mode: Mode, receiver: Receiver, key: &SanKey) -> SignalModel {
        match (mode, receiver) {
            (Mode::San, Receiver::Bob) => SignalModel::BobSan(*key),
            (Mode::San, Receiver::Eve) => SignalModel::EveSan,
            _ => SignalModel::Clean,
        }
    }

    pub fn estimates_key(&self) -> bool {
        matches!(self, SignalModel::EveSan)
    }
}

/// Ordered real unknowns of one receiver's estimation problem.
#[derive(Debug, Clone, PartialEq)]
pub struct ParameterVector {
    pub values: Vec<f64>,
    pub num_scatterers: usize,
    pub with_key: bool,
}

impl ParameterVector {
    pub fn new(alice: Point, scatterers: &[Point], gains: &[Complex64], key: Option<&SanKey>) -> Self {
        let mut values = vec![alice.x, alice.y];
        for v in scatterers {
            values.extend([v.x, v.y]);
        }
        for g in gains {
            values.extend([g.re, g.im]);
        }
        if let Some(k) = key {
            values.extend([k.delta_tau_us, k.delta_theta_rad]);
        }
        ParameterVector {
            values,
            num_scatterers: scatterers.len(),
            with_key: key.is_some(),
        }
    }

    pub fn expected_len(num_scatterers: usize, with_key: bool) -> usize {
        2 + 2 * num_scatterers + 2 * (num_scatterers + 1) + if with_key { 2 } else { 0 }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn alice(&self) -> Point {
        Point::new(self.values[0], self.values[1])
    }

    pub fn scatterers(&self) -> Vec<Point> {
        (0..self.num_scatterers)
            .map(|k| Point::new(self.values[2 + 2 * k], self.values[3 + 2 * k]))
            .collect()
    }

    fn gain_offset(&self) -> usize {
        2 + 2 * self.num_scatterers
    }

    pub fn gains(&self) -> Vec<Complex64> {
        let off = self.gain_offset();
        (0..=self.num_scatterers)
            .map(|k| Complex64::new(self.values[off + 2 * k], self.values[off + 2 * k + 1]))
            .collect()
    }

    pub fn key(&self) -> Option<SanKey> {
        self.with_key.then(|| {
            let n = self.values.len();
            SanKey {
                delta_tau_us: self.values[n - 2],
                delta_theta_rad: self.values[n - 1],
            }
        })
    }

    /// Labels matching `values`, e.g. `p_x`, `v1_y`, `re_gamma0`, `delta_tau_us`.
    pub fn labels(&self) -> Vec<String> {
        position_labels(self.num_scatterers, self.with_key)
    }

    pub fn with_values(&self, values: Vec<f64>) -> Self {
        ParameterVector { values, ..self.clone() }
    }
}

fn gain_labels(num_paths: usize) -> impl Iterator<Item = String> {
    (0..num_paths).flat_map(|k| [format!("re_gamma{k}"), format!("im_gamma{k}")])
}

fn key_labels(with_key: bool) -> Vec<String> {
    if with_key {
        vec!["delta_tau_us".into(), "delta_theta_rad".into()]
    } else {
        vec![]
    }
}

pub fn position_labels(num_scatterers: usize, with_key: bool) -> Vec<String> {
    let mut l = vec!["p_x".to_string(), "p_y".to_string()];
    for k in 1..=num_scatterers {
        l.push(format!("v{k}_x"));
        l.push(format!("v{k}_y"));
    }
    l.extend(gain_labels(num_scatterers + 1));
    l.extend(key_labels(with_key));
    l
}

pub fn channel_labels(num_paths: usize, with_key: bool) -> Vec<String> {
    let mut l: Vec<String> = (0..num_paths).map(|k| format!("tau{k}_us")).collect();
    l.extend((0..num_paths).map(|k| format!("theta{k}_rad")));
    l.extend(gain_labels(num_paths));
    l.extend(key_labels(with_key));
    l
}

/// Per-path partial derivatives of μ on the G×N grid (symbol-major).
struct PathTerms {
    /// ∂μ/∂γ_k (response with unit gain).
    response: Vec<Complex64>,
    /// ∂μ/∂τ_k.
    d_toa: Vec<Complex64>,
    /// ∂μ/∂u_k with u = d sin θ / λ.
    d_freq: Vec<Complex64>,
}

struct Derivatives {
    paths: Vec<PathTerms>,
    /// ∂μ/∂δ_τ and ∂μ/∂δ_θ for the eavesdropper model.
    key: Option<[Vec<Complex64>; 2]>,
}

/// A receiver's localisation problem: geometry, pilots and signal model.
#[derive(Debug, Clone)]
pub struct LocalizationModel<'a> {
    scenario: &'a Scenario,
    anchor: Point,
    pilots: PilotGrid,
    effective: Option<PilotGrid>,
    model: SignalModel,
}

impl<'a> LocalizationModel<'a> {
    pub fn new(scenario: &'a Scenario, receiver: Receiver, pilots: &PilotSet, model: SignalModel) -> Self {
        let s = pilots.pilots();
        let effective = match model {
            SignalModel::BobSan(key) => Some(bob_effective_pilots(&s, &key, &scenario.ofdm(), &scenario.array())),
            _ => None,
        };
        LocalizationModel {
            scenario,
            anchor: scenario.anchor(receiver),
            pilots: s,
            effective,
            model,
        }
    }

    pub fn model(&self) -> SignalModel {
        self.model
    }

    pub fn scenario(&self) -> &Scenario {
        self.scenario
    }

    /// Parameter vector at the true geometry with the given gains (and, for
    /// the eavesdropper, the true key).
    pub fn truth(&self, gains: &[Complex64], key: &SanKey) -> ParameterVector {
        ParameterVector::new(
            self.scenario.alice,
            &self.scenario.scatterers,
            gains,
            self.model.estimates_key().then_some(key),
        )
    }

    fn check_len(&self, eta: &ParameterVector) -> Result<()> {
        let expected = ParameterVector::expected_len(self.scenario.num_scatterers(), self.model.estimates_key());
        if eta.len() != expected || eta.with_key != self.model.estimates_key() {
            return Err(SanError::ParameterLength {
                got: eta.len(),
                expected,
            });
        }
        Ok(())
    }

    fn paths(&self, eta: &ParameterVector) -> Result<Vec<PathParams>> {
        geometric_paths(
            &eta.alice(),
            &self.anchor,
            &eta.scatterers(),
            &eta.gains(),
            self.scenario.lightspeed_m_per_us,
        )
    }

    fn sample(&self, rows: &[ChannelVector], pilots: &PilotGrid) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(pilots.len());
        for g in 0..pilots.num_symbols {
            for n in 0..pilots.num_subcarriers {
                out.push(rows[n].apply(pilots.at(g, n)));
            }
        }
        out
    }

    /// Noiseless mean μ^(g,n)(η), symbol-major.
    pub fn mean(&self, eta: &ParameterVector) -> Result<Vec<Complex64>> {
        self.check_len(eta)?;
        let grid = self.scenario.ofdm();
        let array = self.scenario.array();
        let paths = self.paths(eta)?;
        let rows = channel_rows(&paths, &grid, &array);
        match self.model {
            SignalModel::Clean => Ok(self.sample(&rows, &self.pilots)),
            SignalModel::BobSan(_) => Ok(self.sample(&rows, self.effective.as_ref().expect("effective pilots"))),
            SignalModel::EveSan => {
                let key = eta.key().expect("key parameters");
                let fake = fake_path_params(&paths, &key)?;
                let eff: Vec<ChannelVector> = rows
                    .iter()
                    .zip(fake_channel_rows(&fake, &grid, &array))
                    .map(|(h, ht)| h.add(&ht))
                    .collect();
                Ok(self.sample(&eff, &self.pilots))
            }
        }
    }

    fn derivatives(&self, eta: &ParameterVector, paths: &[PathParams]) -> Result<Derivatives> {
        let grid = self.scenario.ofdm();
        let array = self.scenario.array();
        let nt = array.num_elements;
        let big_n = grid.num_subcarriers;
        let cells = self.pilots.len();
        let w = 2.0 * PI / grid.symbol_duration_us();

        // Unit-gain row e^{-jωnτ} α(u)^H and its τ- and u-derivatives.
        let rows_for = |toa: f64, u: f64, n: usize| -> (Vec<Complex64>, Vec<Complex64>, Vec<Complex64>) {
            let ph = grid.delay_phase(n, toa);
            let mut h = Vec::with_capacity(nt);
            let mut dt = Vec::with_capacity(nt);
            let mut du = Vec::with_capacity(nt);
            for m in 0..nt {
                let e = ph * Complex64::from_polar(1.0, 2.0 * PI * m as f64 * u);
                h.push(e);
                dt.push(e * (-J * w * n as f64));
                du.push(e * (J * 2.0 * PI * m as f64));
            }
            (h, dt, du)
        };
        let dot = |row: &[Complex64], s: &[Complex64]| -> Complex64 { row.iter().zip(s).map(|(a, b)| a * b).sum() };

        let fake = match self.model {
            SignalModel::EveSan => {
                let key = eta.key().expect("key parameters");
                let fake = fake_path_params(paths, &key)?;
                if let Some((k, _)) = fake.paths.iter().enumerate().find(|(_, f)| f.sin_aod.abs() >= 1.0) {
                    return Err(SanError::DerivativeSingularity(k));
                }
                Some((key, fake))
            }
            _ => None,
        };
        let pilots = self.effective.as_ref().unwrap_or(&self.pilots);

        let mut out_paths = Vec::with_capacity(paths.len());
        let mut d_key = fake.as_ref().map(|_| [vec![Complex64::default(); cells], vec![Complex64::default(); cells]]);
        let key_freq_gain = fake
            .as_ref()
            .map(|(key, _)| FAKE_AOD_SIGN * array.spacing_m * key.delta_theta_rad.cos() / array.wavelength_m);

        for (k, p) in paths.iter().enumerate() {
            let u = array.spatial_frequency(p.aod_rad);
            let mut terms = PathTerms {
                response: vec![Complex64::default(); cells],
                d_toa: vec![Complex64::default(); cells],
                d_freq: vec![Complex64::default(); cells],
            };
            for n in 0..big_n {
                let (h, dt, du) = rows_for(p.toa_us, u, n);
                let fake_rows = fake.as_ref().map(|(_, f)| {
                    let fp = &f.paths[k];
                    rows_for(fp.toa_us, array.spatial_frequency_from_sine(fp.sin_aod), n)
                });
                for g in 0..pilots.num_symbols {
                    let idx = g * big_n + n;
                    let s = pilots.at(g, n);
                    let (mut r, mut rt, mut ru) = (dot(&h, s), dot(&dt, s), dot(&du, s));
                    if let Some((fh, fdt, fdu)) = &fake_rows {
                        let (fr, frt, fru) = (dot(fh, s), dot(fdt, s), dot(fdu, s));
                        r += fr;
                        rt += frt;
                        ru += fru;
                        if let (Some(dk), Some(kf)) = (d_key.as_mut(), key_freq_gain) {
                            dk[0][idx] += p.gain * frt;
                            dk[1][idx] += p.gain * fru * kf;
                        }
                    }
                    terms.response[idx] = r;
                    terms.d_toa[idx] = p.gain * rt;
                    terms.d_freq[idx] = p.gain * ru;
                }
            }
            out_paths.push(terms);
        }
        Ok(Derivatives {
            paths: out_paths,
            key: d_key,
        })
    }

    /// Analytic ∂μ/∂η in the position domain, (G·N) × dim(η).
    pub fn jacobian(&self, eta: &ParameterVector) -> Result<DMatrix<Complex64>> {
        self.check_len(eta)?;
        let paths = self.paths(eta)?;
        let d = self.derivatives(eta, &paths)?;
        let array = self.scenario.array();
        let c = self.scenario.lightspeed_m_per_us;
        let alice = eta.alice();
        let scatterers = eta.scatterers();
        let kk = scatterers.len();
        let rows = self.pilots.len();
        let mut jac = DMatrix::<Complex64>::zeros(rows, eta.len());

        for (k, (p, terms)) in paths.iter().zip(&d.paths).enumerate() {
            let vertex = if k == 0 { self.anchor } else { scatterers[k - 1] };
            let delta = vertex - alice;
            let r2 = delta.norm_squared();
            let r = r2.sqrt();
            let du_dtheta = array.spacing_m * p.aod_rad.cos() / array.wavelength_m;
            // ∂τ/∂p, ∂θ/∂p
            let dtau_dp = -delta / (c * r);
            let dtheta_dp = Point::new(delta.y, -delta.x) / r2;
            for i in 0..rows {
                let (a, b) = (terms.d_toa[i], terms.d_freq[i] * du_dtheta);
                jac[(i, 0)] += a * dtau_dp.x + b * dtheta_dp.x;
                jac[(i, 1)] += a * dtau_dp.y + b * dtheta_dp.y;
            }
            if k > 0 {
                let back = vertex - self.anchor;
                let dtau_dv = (back / back.norm() + delta / r) / c;
                let dtheta_dv = -dtheta_dp;
                let col = 2 * k;
                for i in 0..rows {
                    let (a, b) = (terms.d_toa[i], terms.d_freq[i] * du_dtheta);
                    jac[(i, col)] = a * dtau_dv.x + b * dtheta_dv.x;
                    jac[(i, col + 1)] = a * dtau_dv.y + b * dtheta_dv.y;
                }
            }
            let gcol = 2 + 2 * kk + 2 * k;
            for i in 0..rows {
                jac[(i, gcol)] = terms.response[i];
                jac[(i, gcol + 1)] = J * terms.response[i];
            }
        }
        if let Some([dt, dth]) = &d.key {
            let n = eta.len();
            for i in 0..rows {
                jac[(i, n - 2)] = dt[i];
                jac[(i, n - 1)] = dth[i];
            }
        }
        Ok(jac)
    }

    /// Analytic ∂μ/∂η_ch for η_ch = [τ_0..τ_K, θ_0..θ_K, Re/Im γ, (δ_τ, δ_θ)].
    pub fn channel_jacobian(&self, eta: &ParameterVector) -> Result<DMatrix<Complex64>> {
        self.check_len(eta)?;
        let paths = self.paths(eta)?;
        let d = self.derivatives(eta, &paths)?;
        let array = self.scenario.array();
        let np = paths.len();
        let rows = self.pilots.len();
        let cols = 4 * np + if d.key.is_some() { 2 } else { 0 };
        let mut jac = DMatrix::<Complex64>::zeros(rows, cols);
        for (k, (p, terms)) in paths.iter().zip(&d.paths).enumerate() {
            let du_dtheta = array.spacing_m * p.aod_rad.cos() / array.wavelength_m;
            for i in 0..rows {
                jac[(i, k)] = terms.d_toa[i];
                jac[(i, np + k)] = terms.d_freq[i] * du_dtheta;
                jac[(i, 2 * np + 2 * k)] = terms.response[i];
                jac[(i, 2 * np + 2 * k + 1)] = J * terms.response[i];
            }
        }
        if let Some([dt, dth]) = &d.key {
            for i in 0..rows {
                jac[(i, cols - 2)] = dt[i];
                jac[(i, cols - 1)] = dth[i];
            }
        }
        Ok(jac)
    }
}

/// Numerical health of a Fisher matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FimDiagnostics {
    /// Condition number after unit-diagonal equilibration.
    pub condition: f64,
    /// Smallest eigenvalue relative to the largest, before equilibration.
    pub min_eigen_ratio: f64,
    pub symmetric: bool,
    pub psd: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FimResult {
    pub matrix: DMatrix<f64>,
    pub labels: Vec<String>,
    pub diagnostics: FimDiagnostics,
}

/// J = (2/σ²) Re{Jacᴴ Jac}.
pub fn fim(jacobian: &DMatrix<Complex64>, sigma2: f64, labels: Vec<String>) -> Result<FimResult> {
    if !(sigma2 > 0.0) {
        return Err(SanError::InvalidArgument(format!("noise variance must be positive, got {sigma2}")));
    }
    let gram = jacobian.adjoint() * jacobian;
    let mut matrix = gram.map(|z| 2.0 * z.re / sigma2);
    // Re{AᴴA} is symmetric in exact arithmetic; remove rounding asymmetry.
    let sym = (&matrix + matrix.transpose()) * 0.5;
    let asym = (&matrix - &sym).amax();
    matrix = sym;
    let diagnostics = diagnose(&matrix, asym);
    Ok(FimResult {
        matrix,
        labels,
        diagnostics,
    })
}

fn equilibrate(m: &DMatrix<f64>) -> (DMatrix<f64>, Vec<f64>) {
    let scale: Vec<f64> = (0..m.nrows())
        .map(|i| {
            let d = m[(i, i)];
            if d > 0.0 {
                1.0 / d.sqrt()
            } else {
                1.0
            }
        })
        .collect();
    let eq = DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)] * scale[i] * scale[j]);
    (eq, scale)
}

fn diagnose(m: &DMatrix<f64>, asym: f64) -> FimDiagnostics {
    let eig = m.clone().symmetric_eigenvalues();
    let max = eig.iter().cloned().fold(0.0f64, |a, b| a.max(b.abs()));
    let min = eig.iter().cloned().fold(f64::INFINITY, f64::min);
    let (eq, _) = equilibrate(m);
    let eq_eig = eq.symmetric_eigenvalues();
    let eq_max = eq_eig.iter().cloned().fold(0.0f64, f64::max);
    let eq_min = eq_eig.iter().cloned().fold(f64::INFINITY, f64::min);
    let condition = if eq_min > 0.0 { eq_max / eq_min } else { f64::INFINITY };
    FimDiagnostics {
        condition,
        min_eigen_ratio: if max > 0.0 { min / max } else { 0.0 },
        symmetric: asym <= 1e-12 * m.amax().max(f64::MIN_POSITIVE),
        psd: min >= -PSD_EPSILON * max,
    }
}

/// Inverse of a Fisher matrix (the CRLB), falling back to the Moore-Penrose
/// pseudo-inverse when the equilibrated matrix is numerically singular.
/// Returns the inverse and whether the fallback was used.
pub fn invert_fim(m: &DMatrix<f64>) -> (DMatrix<f64>, bool) {
    let (eq, scale) = equilibrate(m);
    let eig = eq.clone().symmetric_eigenvalues();
    let eq_max = eig.iter().cloned().fold(0.0f64, f64::max);
    let eq_min = eig.iter().cloned().fold(f64::INFINITY, f64::min);
    let well_posed = eq_min > 0.0 && eq_max / eq_min < SINGULAR_CONDITION;
    let (inv, singular) = match eq.clone().cholesky() {
        Some(ch) if well_posed => (ch.inverse(), false),
        _ => {
            let svd = eq.svd(true, true);
            let tol = eq_max * 1e-14 * m.nrows() as f64;
            (svd.pseudo_inverse(tol).expect("svd with u and v"), true)
        }
    };
    let n = m.nrows();
    (DMatrix::from_fn(n, n, |i, j| inv[(i, j)] * scale[i] * scale[j]), singular)
}

/// Position error bound extracted from a position-domain FIM.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PositionBound {
    /// √(CRLB_{p_x} + CRLB_{p_y}) in metres.
    pub peb_m: f64,
    pub singular: bool,
}

/// PEB with all nuisance parameters marginalised by full inversion.
pub fn crlb_position(fim: &FimResult) -> PositionBound {
    let (inv, singular) = invert_fim(&fim.matrix);
    PositionBound {
        peb_m: (inv[(0, 0)] + inv[(1, 1)]).max(0.0).sqrt(),
        singular: singular || !fim.diagnostics.psd,
    }
}

/// Per-path channel-parameter bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelBounds {
    pub toa_us: Vec<f64>,
    pub aod_rad: Vec<f64>,
    pub singular: bool,
}

impl ChannelBounds {
    pub fn scaled(&self, factor: f64) -> ChannelBounds {
        ChannelBounds {
            toa_us: self.toa_us.iter().map(|x| x * factor).collect(),
            aod_rad: self.aod_rad.iter().map(|x| x * factor).collect(),
            singular: self.singular,
        }
    }
}

/// √CRLB of every τ_k and θ_k from a channel-domain FIM.
pub fn channel_bounds_from_fim(fim: &FimResult, num_paths: usize) -> ChannelBounds {
    let (inv, singular) = invert_fim(&fim.matrix);
    ChannelBounds {
        toa_us: (0..num_paths).map(|k| inv[(k, k)].max(0.0).sqrt()).collect(),
        aod_rad: (0..num_paths)
            .map(|k| inv[(num_paths + k, num_paths + k)].max(0.0).sqrt())
            .collect(),
        singular: singular || !fim.diagnostics.psd,
    }
}

/// Channel-domain bounds at noise variance σ².
pub fn crlb_channel_domain(model: &LocalizationModel<'_>, eta: &ParameterVector, sigma2: f64) -> Result<ChannelBounds> {
    let jac = model.channel_jacobian(eta)?;
    let np = model.scenario().num_paths();
    let f = fim(&jac, sigma2, channel_labels(np, eta.with_key))?;
    Ok(channel_bounds_from_fim(&f, np))
}

/// Position and channel bounds at unit noise variance. Every √CRLB scales
/// with σ, so one evaluation serves a whole SNR sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitBounds {
    pub position: PositionBound,
    pub channel: ChannelBounds,
    pub diagnostics: FimDiagnostics,
}

impl UnitBounds {
    pub fn evaluate(model: &LocalizationModel<'_>, eta: &ParameterVector) -> Result<UnitBounds> {
        let pos = fim(&model.jacobian(eta)?, 1.0, eta.labels())?;
        let np = model.scenario().num_paths();
        let ch = fim(&model.channel_jacobian(eta)?, 1.0, channel_labels(np, eta.with_key))?;
        Ok(UnitBounds {
            position: crlb_position(&pos),
            channel: channel_bounds_from_fim(&ch, np),
            diagnostics: pos.diagnostics,
        })
    }

    pub fn peb_at(&self, sigma2: f64) -> f64 {
        self.position.peb_m * sigma2.sqrt()
    }

    pub fn channel_at(&self, sigma2: f64) -> ChannelBounds {
        self.channel.scaled(sigma2.sqrt())
    }

    pub fn singular(&self) -> bool {
        self.position.singular || self.channel.singular
    }
}

/// Bounds for one (receiver, mode, SNR, seed) cell.
#[derive(Debug, Clone, PartialEq)]
pub struct CrlbReport {
    pub receiver: Receiver,
    pub mode: Mode,
    pub snr_db: f64,
    pub seed: u64,
    pub peb_m: f64,
    pub toa_bound_us: Vec<f64>,
    pub toa_bound_m: Vec<f64>,
    pub aod_bound_rad: Vec<f64>,
    pub singular_fim: bool,
}
