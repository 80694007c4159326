//! Dispersive function-space machinery on a periodic space-time lattice.
//!
//! Fields live on an `N x M` torus: the spatial grid crossed with a time
//! window of length `T_w`, both with symmetric frequency lattices. The
//! weighted norms measure distance from a free dispersive wave through the
//! modulation variable, `tau + xi^2` for the Schrodinger channel and
//! `tau - p(xi)` for the Kawahara channel, optionally refined by a dyadic
//! decomposition in that variable. Everything here is a finite sum, so the
//! norm evaluators can be checked against brute-force summation exactly.

use rustfft::num_complex::Complex64;
use std::sync::Arc;

use crate::grid::{make_grid, ComplexField, Grid};
use crate::propagators::{dispersion_p, PhysParams};
use crate::spectral::Fourier;
use crate::{Error, Result};

/// Which free evolution the modulation weight is centered on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModulationKind {
    Schrodinger,
    Kawahara,
}

/// Summation exponent over dyadic modulation shells.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BesovQ {
    One,
    Infinity,
}

/// A complex field sampled on the space-time torus, tagged with the
/// modulation weight its norms are taken against.
#[derive(Debug, Clone)]
pub struct SpaceTimeField {
    grid: Arc<Grid>,
    time_grid: Arc<Grid>,
    samples: Vec<Complex64>,
    kind: ModulationKind,
    params: PhysParams,
}

impl SpaceTimeField {
    /// `samples` is row-major over time: entry `l * n + j` holds the value
    /// at `(x_j, t_l)` with `t_l = -T_w/2 + l T_w/M`.
    pub fn new(
        grid: &Arc<Grid>,
        time_window: f64,
        n_time: usize,
        samples: Vec<Complex64>,
        kind: ModulationKind,
        params: &PhysParams,
    ) -> Result<Self> {
        params.validate()?;
        let time_grid = make_grid(n_time, time_window)?;
        if samples.len() != grid.n() * n_time {
            return Err(Error::Shape(format!(
                "expected {} x {} = {} samples, got {}",
                grid.n(),
                n_time,
                grid.n() * n_time,
                samples.len()
            )));
        }
        Ok(SpaceTimeField {
            grid: Arc::clone(grid),
            time_grid,
            samples,
            kind,
            params: *params,
        })
    }

    pub fn from_fn(
        grid: &Arc<Grid>,
        time_window: f64,
        n_time: usize,
        kind: ModulationKind,
        params: &PhysParams,
        f: impl Fn(f64, f64) -> Complex64,
    ) -> Result<Self> {
        let time_grid = make_grid(n_time, time_window)?;
        let f = &f;
        let samples = time_grid
            .x()
            .iter()
            .flat_map(|&t| grid.x().iter().map(move |&x| f(x, t)))
            .collect();
        Self::new(grid, time_window, n_time, samples, kind, params)
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn time_window(&self) -> f64 {
        self.time_grid.length()
    }

    pub fn n_time(&self) -> usize {
        self.time_grid.n()
    }

    pub fn times(&self) -> &[f64] {
        self.time_grid.x()
    }

    pub fn kind(&self) -> ModulationKind {
        self.kind
    }

    pub fn params(&self) -> &PhysParams {
        &self.params
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn samples_mut(&mut self) -> &mut [Complex64] {
        &mut self.samples
    }

    /// Space-time Fourier coefficients, laid out like `samples` with the
    /// time index slow: entry `m * n + k` belongs to `(xi_k, tau_m)`.
    pub(crate) fn spectrum(&self) -> Vec<Complex64> {
        let n = self.grid.n();
        let m = self.time_grid.n();
        let fx = Fourier::new(&self.grid);
        let ft = Fourier::new(&self.time_grid);
        let mut out = self.samples.clone();
        for row in out.chunks_mut(n) {
            fx.forward_into(row);
        }
        let mut col = vec![Complex64::default(); m];
        for k in 0..n {
            for l in 0..m {
                col[l] = out[l * n + k];
            }
            ft.forward_into(&mut col);
            for l in 0..m {
                out[l * n + k] = col[l];
            }
        }
        out
    }

    /// Inverse of [`SpaceTimeField::spectrum`].
    pub(crate) fn from_spectrum(
        grid: &Arc<Grid>,
        time_window: f64,
        n_time: usize,
        mut coeffs: Vec<Complex64>,
        kind: ModulationKind,
        params: &PhysParams,
    ) -> Result<Self> {
        if coeffs.len() != grid.n() * n_time {
            return Err(Error::Shape(format!(
                "expected {} coefficients, got {}",
                grid.n() * n_time,
                coeffs.len()
            )));
        }
        let time_grid = make_grid(n_time, time_window)?;
        let n = grid.n();
        let fx = Fourier::new(grid);
        let ft = Fourier::new(&time_grid);
        let mut col = vec![Complex64::default(); n_time];
        for k in 0..n {
            for l in 0..n_time {
                col[l] = coeffs[l * n + k];
            }
            ft.inverse_into(&mut col);
            for l in 0..n_time {
                coeffs[l * n + k] = col[l];
            }
        }
        for row in coeffs.chunks_mut(n) {
            fx.inverse_into(row);
        }
        Self::new(grid, time_window, n_time, coeffs, kind, params)
    }

    fn modulation(&self, xi: f64, tau: f64) -> f64 {
        match self.kind {
            ModulationKind::Schrodinger => tau + xi * xi,
            ModulationKind::Kawahara => tau - dispersion_p(xi, &self.params),
        }
    }

    fn require(&self, kind: ModulationKind, space: &str) -> Result<()> {
        if self.kind != kind {
            return Err(Error::SpaceMismatch(format!(
                "{space} norms need a field tagged {kind:?}, this one is {:?}",
                self.kind
            )));
        }
        Ok(())
    }

    fn norm_factor(&self) -> f64 {
        self.grid.length() * self.time_grid.length()
    }

    fn weighted_norm(&self, s: f64, b: f64) -> f64 {
        let spec = self.spectrum();
        let n = self.grid.n();
        let mut acc = 0.0;
        for (l, &tau) in self.time_grid.wavenumbers().iter().enumerate() {
            for (k, &xi) in self.grid.wavenumbers().iter().enumerate() {
                let mu = self.modulation(xi, tau);
                let w = (1.0 + xi * xi).powf(s) * (1.0 + mu * mu).powf(b);
                acc += w * spec[l * n + k].norm_sqr();
            }
        }
        (acc / self.norm_factor()).sqrt()
    }

    /// Shell-restricted L2 pieces `A_j = |<xi>^s phi_j(mu) f^|_{L2}`, with
    /// enough shells that the dyadic partition covers every lattice
    /// modulation.
    fn shell_amplitudes(&self, s: f64) -> Vec<f64> {
        let spec = self.spectrum();
        let n = self.grid.n();
        let mut terms = Vec::with_capacity(spec.len());
        let mut max_mu: f64 = 0.0;
        for (l, &tau) in self.time_grid.wavenumbers().iter().enumerate() {
            for (k, &xi) in self.grid.wavenumbers().iter().enumerate() {
                let mu = self.modulation(xi, tau);
                max_mu = max_mu.max(mu.abs());
                terms.push((mu, (1.0 + xi * xi).powf(s) * spec[l * n + k].norm_sqr()));
            }
        }
        let top = if max_mu <= PLATEAU {
            0
        } else {
            (max_mu / PLATEAU).log2().ceil() as usize
        };
        let mut acc = vec![0.0; top + 1];
        for &(mu, w) in &terms {
            for (j, a) in acc.iter_mut().enumerate() {
                let phi = phi_shell(j, mu);
                if phi > 0.0 {
                    *a += phi * phi * w;
                }
            }
        }
        let factor = self.norm_factor();
        acc.iter().map(|a| (a / factor).sqrt()).collect()
    }

    fn besov_norm(&self, s: f64, b: f64, q: BesovQ) -> f64 {
        let shells = self.shell_amplitudes(s);
        let weighted = shells.iter().enumerate().map(|(j, a)| (b * j as f64).exp2() * a);
        match q {
            BesovQ::One => weighted.sum(),
            BesovQ::Infinity => weighted.fold(0.0, f64::max),
        }
    }
}

/// `|f|_{X^{s,b}}` with weight `<xi>^s <tau + xi^2>^b`.
pub fn xsb_norm(f: &SpaceTimeField, s: f64, b: f64) -> Result<f64> {
    f.require(ModulationKind::Schrodinger, "X^{s,b}")?;
    Ok(f.weighted_norm(s, b))
}

/// `|f|_{Y^{s,b}}` with weight `<xi>^s <tau - p(xi)>^b`.
pub fn ysb_norm(f: &SpaceTimeField, s: f64, b: f64) -> Result<f64> {
    f.require(ModulationKind::Kawahara, "Y^{s,b}")?;
    Ok(f.weighted_norm(s, b))
}

/// Besov refinement of [`xsb_norm`]: `l^q` over dyadic modulation shells of
/// the pieces `2^{bj} A_j`.
pub fn besov_xsb_norm(f: &SpaceTimeField, s: f64, b: f64, q: BesovQ) -> Result<f64> {
    f.require(ModulationKind::Schrodinger, "X^{s,b,q}")?;
    Ok(f.besov_norm(s, b, q))
}

/// Besov refinement of [`ysb_norm`].
pub fn besov_ysb_norm(f: &SpaceTimeField, s: f64, b: f64, q: BesovQ) -> Result<f64> {
    f.require(ModulationKind::Kawahara, "Y^{s,b,q}")?;
    Ok(f.besov_norm(s, b, q))
}

/// Discrete `H^s` norm `sqrt((1/L) sum <xi>^{2s} |f^(xi)|^2)`.
pub fn sobolev_norm(f: &ComplexField, s: f64) -> f64 {
    let fourier = Fourier::new(f.grid());
    let mut buf = f.samples().to_vec();
    fourier.forward_into(&mut buf);
    let acc: f64 = f
        .grid()
        .wavenumbers()
        .iter()
        .zip(&buf)
        .map(|(&xi, c)| (1.0 + xi * xi).powf(s) * c.norm_sqr())
        .sum();
    (acc / f.grid().length()).sqrt()
}

/// High-frequency projection: zeroes every mode with `|xi| < threshold`.
/// Thresholds at or below zero keep all modes, exactly.
pub fn high_pass(f: &ComplexField, threshold: f64) -> ComplexField {
    if threshold <= 0.0 {
        return f.clone();
    }
    let fourier = Fourier::new(f.grid());
    let mut buf = f.samples().to_vec();
    fourier.forward_into(&mut buf);
    for (c, &xi) in buf.iter_mut().zip(f.grid().wavenumbers()) {
        if xi.abs() < threshold {
            *c = Complex64::default();
        }
    }
    fourier.inverse_into(&mut buf);
    ComplexField::new(f.grid(), buf).expect("matching grid")
}

const PLATEAU: f64 = 1.25;
const SUPPORT_END: f64 = 1.5;

/// C-infinity drop from 1 at `s <= 0` to 0 at `s >= 1`.
fn shoulder(s: f64) -> f64 {
    if s <= 0.0 {
        1.0
    } else if s >= 1.0 {
        0.0
    } else {
        (1.0 - 1.0 / (1.0 - s * s)).exp()
    }
}

/// Base bump: 1 on `|x| <= 5/4`, 0 beyond `3/2`, smooth on the shoulder.
fn phi0(x: f64) -> f64 {
    shoulder((x.abs() - PLATEAU) / (SUPPORT_END - PLATEAU))
}

/// Shell `j` of the dyadic decomposition subordinate to [`phi0`].
fn phi_shell(j: usize, x: f64) -> f64 {
    if j == 0 {
        phi0(x)
    } else {
        phi0(x / (j as f64).exp2()) - phi0(x / ((j - 1) as f64).exp2())
    }
}

/// Dyadic partition of unity `phi_0, ..., phi_{j_max}` covering the band
/// `|xi| <= (5/4) 2^{j_max}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DyadicPartition {
    j_max: usize,
}

pub fn lp_partition(j_max: usize) -> DyadicPartition {
    DyadicPartition { j_max }
}

impl DyadicPartition {
    pub fn j_max(&self) -> usize {
        self.j_max
    }

    /// Largest `|xi|` on which the shells still sum to one.
    pub fn covered_band(&self) -> f64 {
        PLATEAU * (self.j_max as f64).exp2()
    }

    pub fn phi(&self, j: usize, xi: f64) -> f64 {
        assert!(j <= self.j_max, "shell {j} beyond j_max {}", self.j_max);
        phi_shell(j, xi)
    }
}

/// Smooth time cutoff: 1 on `[-T, T]`, 0 outside `[-2T, 2T]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeCutoff {
    scale: f64,
}

pub fn time_cutoff(t: f64) -> Result<TimeCutoff> {
    if t <= 0.0 || !t.is_finite() {
        return Err(Error::InvalidParams(format!(
            "cutoff width must be positive and finite, got {t}"
        )));
    }
    Ok(TimeCutoff { scale: t })
}

impl TimeCutoff {
    pub fn eval(&self, t: f64) -> f64 {
        shoulder(t.abs() / self.scale - 1.0)
    }
}

/// `|5 delta xi^4 + 3 gamma xi^2 + 2 xi_1|^power`, the symbol controlling
/// how far the Kawahara resonance surface sits from the Schrodinger one.
pub fn resonance_weight(xi: f64, xi1: f64, params: &PhysParams, power: f64) -> f64 {
    let xi2 = xi * xi;
    (5.0 * params.delta * xi2 * xi2 + 3.0 * params.gamma * xi2 + 2.0 * xi1)
        .abs()
        .powf(power)
}
