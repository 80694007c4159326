//! Exact free propagators for the two linear flows.
//!
//! The Schrodinger group `S(t)` acts as the multiplier `exp(-i t xi^2)`;
//! the fifth-order dispersive group `W(t)` acts as `exp(+i t p(xi))` with
//! `p(xi) = gamma xi^3 + delta xi^5`. Both are unitary on the discrete L2
//! space and commute with spectral derivatives.

use rustfft::num_complex::Complex64;

use crate::grid::{ComplexField, Grid, RealField};
use crate::spectral::Fourier;
use crate::{Error, Result};

/// Coefficients of the coupled system. `delta` must stay away from zero:
/// the fifth-order term is what the long-wave analysis leans on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
    pub epsilon: f64,
}

impl PhysParams {
    pub fn new(alpha: f64, beta: f64, gamma: f64, delta: f64, epsilon: f64) -> Result<Self> {
        let p = PhysParams { alpha, beta, gamma, delta, epsilon };
        p.validate()?;
        Ok(p)
    }

    /// Rejects `delta = 0` and non-finite coefficients.
    pub fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("gamma", self.gamma),
            ("delta", self.delta),
            ("epsilon", self.epsilon),
        ] {
            if !value.is_finite() {
                return Err(Error::InvalidParams(format!("{name} must be finite, got {value}")));
            }
        }
        if self.delta == 0.0 {
            return Err(Error::InvalidParams("delta must be nonzero".into()));
        }
        Ok(())
    }
}

impl Default for PhysParams {
    fn default() -> Self {
        PhysParams { alpha: 1.0, beta: 1.0, gamma: 1.0, delta: 1.0, epsilon: 1.0 }
    }
}

/// Dispersion polynomial `p(xi) = gamma xi^3 + delta xi^5`.
pub fn dispersion_p(xi: f64, params: &PhysParams) -> f64 {
    let xi3 = xi * xi * xi;
    params.gamma * xi3 + params.delta * xi3 * xi * xi
}

/// Schrodinger phase array `xi^2` in storage order.
pub(crate) fn schrodinger_symbol(grid: &Grid) -> Vec<f64> {
    grid.wavenumbers().iter().map(|&k| k * k).collect()
}

/// Long-wave phase array `p(xi)` in storage order, with the unpaired
/// Nyquist entry zeroed (p is odd, so this keeps real fields real).
pub(crate) fn kawahara_symbol(grid: &Grid, params: &PhysParams) -> Vec<f64> {
    let nyq = grid.nyquist_index();
    grid.wavenumbers()
        .iter()
        .enumerate()
        .map(|(i, &k)| if i == nyq { 0.0 } else { dispersion_p(k, params) })
        .collect()
}

fn phase_multiply(spectrum: &mut [Complex64], phases: &[f64], t: f64) {
    for (c, &p) in spectrum.iter_mut().zip(phases) {
        *c *= Complex64::from_polar(1.0, t * p);
    }
}

/// Applies `S(t) = exp(i t d_xx)`: multiplier `exp(-i t xi^2)`.
pub fn schrodinger_propagate(field: &ComplexField, t: f64) -> ComplexField {
    let fourier = Fourier::new(field.grid());
    let mut spec = fourier.forward(field);
    let phases = schrodinger_symbol(field.grid());
    phase_multiply(spec.coeffs_mut(), &phases, -t);
    fourier.inverse(&spec)
}

/// Applies `W(t)`: multiplier `exp(+i t p(xi))`.
pub fn kawahara_propagate(field: &RealField, t: f64, params: &PhysParams) -> Result<RealField> {
    params.validate()?;
    let fourier = Fourier::new(field.grid());
    let mut spec = fourier.forward_real(field);
    let phases = kawahara_symbol(field.grid(), params);
    phase_multiply(spec.coeffs_mut(), &phases, t);
    Ok(fourier.inverse_real(&spec))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::make_grid;
    use crate::spectral::spectral_derivative_real;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn dispersion_examples() {
        let p = PhysParams { gamma: 1.0, delta: 1.0, ..Default::default() };
        assert_eq!(dispersion_p(2.0, &p), 40.0);
        let p = PhysParams { gamma: 2.0, delta: 3.0, ..Default::default() };
        assert_eq!(dispersion_p(-1.0, &p), -5.0);
        assert_eq!(dispersion_p(0.0, &p), 0.0);
    }

    #[test]
    fn delta_zero_rejected() {
        assert!(PhysParams::new(1.0, 1.0, 1.0, 0.0, 1.0).is_err());
        assert!(PhysParams::new(1.0, 1.0, 1.0, f64::NAN, 1.0).is_err());
        assert!(PhysParams::new(0.0, 0.0, 0.0, -2.0, 0.0).is_ok());
    }

    #[test]
    fn plane_wave_picks_up_schrodinger_phase() {
        // u = exp(ix) at t = pi: multiplier exp(-i pi) = -1
        let g = make_grid(64, 2.0 * PI).unwrap();
        let u0 = ComplexField::from_fn(&g, |x| Complex64::new(0.0, x).exp());
        let u = schrodinger_propagate(&u0, PI);
        for (a, b) in u.samples().iter().zip(u0.samples()) {
            assert!((a + b).norm() < 1e-12);
        }
    }

    #[test]
    fn zero_time_is_identity() {
        let g = make_grid(64, 2.0 * PI).unwrap();
        let u0 = ComplexField::from_fn(&g, |x| Complex64::new((-x * x / 4.0).exp(), 0.3 * x.sin()));
        let u = schrodinger_propagate(&u0, 0.0);
        for (a, b) in u.samples().iter().zip(u0.samples()) {
            assert!((a - b).norm() < 1e-14);
        }
        let v0 = RealField::from_fn(&g, |x| x.cos());
        let v = kawahara_propagate(&v0, 0.0, &PhysParams::default()).unwrap();
        for (a, b) in v.samples().iter().zip(v0.samples()) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn gaussian_norm_is_preserved() {
        let g = make_grid(256, 100.0).unwrap();
        let u0 = ComplexField::from_fn(&g, |x| Complex64::new((-x * x).exp(), 0.0));
        let n0 = u0.l2_norm();
        for t in [0.1, 1.0, 10.0] {
            let n = schrodinger_propagate(&u0, t).l2_norm();
            assert!((n - n0).abs() <= 1e-12 * n0, "t={t}: {n} vs {n0}");
        }
    }

    #[test]
    fn cosine_translates_under_kawahara_flow() {
        // v0 = cos(x), gamma = delta = 1: p(1) = 2, so v(t) = cos(x + 2t)
        let g = make_grid(64, 2.0 * PI).unwrap();
        let v0 = RealField::from_fn(&g, |x| x.cos());
        let v = kawahara_propagate(&v0, 0.1, &PhysParams::default()).unwrap();
        for (x, got) in g.x().iter().zip(v.samples()) {
            assert!((got - (x + 0.2).cos()).abs() < 1e-12);
        }
    }

    #[test]
    fn kawahara_flow_is_unitary_on_mixed_data() {
        let g = make_grid(128, 50.0).unwrap();
        let v0 = RealField::from_fn(&g, |x| (0.5 * x).cos() + (-x * x / 2.0).exp());
        let n0 = v0.l2_norm();
        let params = PhysParams { gamma: -0.7, delta: 2.3, ..Default::default() };
        for t in [0.05, 0.8, 5.0] {
            let n = kawahara_propagate(&v0, t, &params).unwrap().l2_norm();
            assert!((n - n0).abs() <= 1e-12 * n0);
        }
    }

    #[test]
    fn kawahara_commutes_with_derivative() {
        let g = make_grid(128, 30.0).unwrap();
        let params = PhysParams { gamma: 0.4, delta: -1.1, ..Default::default() };
        let v0 = RealField::from_fn(&g, |x| (-x * x / 3.0).exp() * (1.3 * x).sin());
        let a = spectral_derivative_real(&kawahara_propagate(&v0, 0.3, &params).unwrap(), 1);
        let b = kawahara_propagate(&spectral_derivative_real(&v0, 1), 0.3, &params).unwrap();
        let scale = a.samples().iter().map(|s| s.abs()).fold(0.0, f64::max);
        for (x, y) in a.samples().iter().zip(b.samples()) {
            assert!((x - y).abs() <= 1e-11 * scale.max(1.0));
        }
    }

    proptest! {
        #[test]
        fn prop_group_law(t in -2.0f64..2.0, s in -2.0f64..2.0) {
            let g = make_grid(64, 20.0).unwrap();
            let u0 = ComplexField::from_fn(&g, |x| {
                Complex64::new((-x * x / 6.0).exp(), (0.9 * x).cos() * (-x * x / 8.0).exp())
            });
            let once = schrodinger_propagate(&u0, t + s);
            let twice = schrodinger_propagate(&schrodinger_propagate(&u0, t), s);
            for (a, b) in once.samples().iter().zip(twice.samples()) {
                prop_assert!((a - b).norm() < 1e-12);
            }

            let params = PhysParams { gamma: 0.8, delta: 0.6, ..Default::default() };
            let v0 = RealField::from_fn(&g, |x| (-x * x / 5.0).exp() * (0.6 * x).cos());
            let vonce = kawahara_propagate(&v0, t + s, &params).unwrap();
            let vtwice = kawahara_propagate(
                &kawahara_propagate(&v0, t, &params).unwrap(), s, &params).unwrap();
            for (a, b) in vonce.samples().iter().zip(vtwice.samples()) {
                prop_assert!((a - b).abs() < 1e-12);
            }
        }
    }
}
