//! Discrete Fourier layer: transforms, spectral derivatives, dealiasing,
//! and quadrature.
//!
//! Normalization is chosen so that the discrete transform approximates the
//! line transform `u_hat(xi) = integral exp(-i x xi) u(x) dx` over the
//! centered domain, and Parseval holds exactly against the dx-weighted L2
//! norm: `||u||^2 = (1/L) sum_k |u_hat(xi_k)|^2`.

use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::grid::{ComplexField, Grid, RealField};
use crate::{Error, Result};

/// Fourier coefficients of a field, indexed like [`Grid::wavenumbers`].
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    grid: Arc<Grid>,
    coeffs: Vec<Complex64>,
}

impl Spectrum {
    pub fn new(grid: &Arc<Grid>, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.n() {
            return Err(Error::Shape(format!(
                "expected {} coefficients for this grid, got {}",
                grid.n(),
                coeffs.len()
            )));
        }
        Ok(Spectrum { grid: Arc::clone(grid), coeffs })
    }

    pub fn zeros(grid: &Arc<Grid>) -> Self {
        Spectrum { grid: Arc::clone(grid), coeffs: vec![Complex64::default(); grid.n()] }
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    /// L2 norm of the underlying field via Parseval:
    /// `sqrt((1/L) sum |c_k|^2)`.
    pub fn l2_norm(&self) -> f64 {
        (self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>() / self.grid.length()).sqrt()
    }
}

/// Cached FFT plans for one grid size, with the centered-domain phase
/// convention applied on both directions.
pub(crate) struct Fourier {
    grid: Arc<Grid>,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

/// Alternating sign `(-1)^j`, the phase factor translating FFT indexing to
/// the centered domain `[-L/2, L/2)`.
#[inline]
pub(crate) fn centered_sign(j: usize) -> f64 {
    if j.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

impl Fourier {
    pub(crate) fn new(grid: &Arc<Grid>) -> Self {
        let mut planner = FftPlanner::new();
        Fourier {
            grid: Arc::clone(grid),
            fwd: planner.plan_fft_forward(grid.n()),
            inv: planner.plan_fft_inverse(grid.n()),
        }
    }

    /// samples -> coefficients, in place.
    pub(crate) fn forward_into(&self, buf: &mut [Complex64]) {
        self.fwd.process(buf);
        let dx = self.grid.dx();
        for (j, c) in buf.iter_mut().enumerate() {
            *c *= dx * centered_sign(j);
        }
    }

    /// coefficients -> samples, in place.
    pub(crate) fn inverse_into(&self, buf: &mut [Complex64]) {
        let scale = 1.0 / self.grid.length();
        for (j, c) in buf.iter_mut().enumerate() {
            *c *= centered_sign(j) * scale;
        }
        self.inv.process(buf);
    }

    pub(crate) fn forward(&self, field: &ComplexField) -> Spectrum {
        let mut buf = field.samples().to_vec();
        self.forward_into(&mut buf);
        Spectrum { grid: Arc::clone(&self.grid), coeffs: buf }
    }

    pub(crate) fn forward_real(&self, field: &RealField) -> Spectrum {
        let mut buf: Vec<Complex64> =
            field.samples().iter().map(|&s| Complex64::new(s, 0.0)).collect();
        self.forward_into(&mut buf);
        Spectrum { grid: Arc::clone(&self.grid), coeffs: buf }
    }

    pub(crate) fn inverse(&self, spectrum: &Spectrum) -> ComplexField {
        let mut buf = spectrum.coeffs.clone();
        self.inverse_into(&mut buf);
        ComplexField::new(&self.grid, buf).expect("matching grid")
    }

    pub(crate) fn inverse_real(&self, spectrum: &Spectrum) -> RealField {
        let mut buf = spectrum.coeffs.clone();
        self.inverse_into(&mut buf);
        RealField::new(&self.grid, buf.iter().map(|c| c.re).collect()).expect("matching grid")
    }
}

fn check_same_grid(a: &Grid, b: &Grid) -> Result<()> {
    if a != b {
        return Err(Error::Shape("fields live on different grids".into()));
    }
    Ok(())
}

/// Forward transform of a complex field.
pub fn transform_forward(field: &ComplexField) -> Spectrum {
    Fourier::new(field.grid()).forward(field)
}

/// Forward transform of a real field.
pub fn transform_forward_real(field: &RealField) -> Spectrum {
    Fourier::new(field.grid()).forward_real(field)
}

/// Inverse transform back to complex samples.
pub fn transform_inverse(spectrum: &Spectrum) -> ComplexField {
    Fourier::new(spectrum.grid()).inverse(spectrum)
}

/// Inverse transform for spectra of real fields; imaginary round-off is
/// discarded.
pub fn transform_inverse_real(spectrum: &Spectrum) -> RealField {
    Fourier::new(spectrum.grid()).inverse_real(spectrum)
}

/// Multiplies a spectrum by `(i xi)^order` in place. The unpaired Nyquist
/// mode is zeroed for odd orders so that derivatives of real fields stay
/// real.
pub(crate) fn derivative_multiplier_into(spectrum: &mut Spectrum, order: u32) {
    if order == 0 {
        return;
    }
    let nyq = spectrum.grid().nyquist_index();
    let ks: Vec<f64> = spectrum.grid().wavenumbers().to_vec();
    for (idx, c) in spectrum.coeffs_mut().iter_mut().enumerate() {
        if order % 2 == 1 && idx == nyq {
            *c = Complex64::default();
        } else {
            *c *= Complex64::new(0.0, ks[idx]).powu(order);
        }
    }
}

/// Spectral derivative of the given order for complex fields.
pub fn spectral_derivative(field: &ComplexField, order: u32) -> ComplexField {
    let fourier = Fourier::new(field.grid());
    let mut spec = fourier.forward(field);
    derivative_multiplier_into(&mut spec, order);
    fourier.inverse(&spec)
}

/// Spectral derivative of the given order for real fields.
pub fn spectral_derivative_real(field: &RealField, order: u32) -> RealField {
    let fourier = Fourier::new(field.grid());
    let mut spec = fourier.forward_real(field);
    derivative_multiplier_into(&mut spec, order);
    fourier.inverse_real(&spec)
}

/// Dealias cutoff rule, as a fraction of the Nyquist index.
///
/// `Half` keeps modes `|k| <= n/4` and removes aliasing from products up to
/// cubic; `TwoThirds` keeps `|k| <= n/3` and covers quadratic products.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DealiasRule {
    Half,
    TwoThirds,
}

impl DealiasRule {
    /// Accepts exactly 1/2 or 2/3; anything else is `UnsupportedRule`.
    pub fn from_fraction(fraction: f64) -> Result<Self> {
        if fraction == 0.5 {
            Ok(DealiasRule::Half)
        } else if (fraction - 2.0 / 3.0).abs() < 1e-12 {
            Ok(DealiasRule::TwoThirds)
        } else {
            Err(Error::UnsupportedRule(fraction))
        }
    }

    pub fn fraction(self) -> f64 {
        match self {
            DealiasRule::Half => 0.5,
            DealiasRule::TwoThirds => 2.0 / 3.0,
        }
    }

    /// Highest retained absolute mode index on an `n`-point grid.
    pub fn cutoff_index(self, n: usize) -> usize {
        (self.fraction() * (n as f64 / 2.0)).floor() as usize
    }
}

/// True for storage slots whose integer mode survives the rule's cutoff.
pub(crate) fn dealias_keep(rule: DealiasRule, n: usize) -> Vec<bool> {
    let cut = rule.cutoff_index(n) as i64;
    (0..n)
        .map(|k| {
            let m = if k < n / 2 { k as i64 } else { k as i64 - n as i64 };
            m.abs() <= cut
        })
        .collect()
}

/// Zeroes all modes with `|k| > rule * n/2` (sharp spectral projection).
pub fn dealias(spectrum: &Spectrum, rule: DealiasRule) -> Spectrum {
    let mut out = spectrum.clone();
    dealias_into(&mut out, rule);
    out
}

pub(crate) fn dealias_into(spectrum: &mut Spectrum, rule: DealiasRule) {
    let keep = dealias_keep(rule, spectrum.grid().n());
    for (c, keep) in spectrum.coeffs_mut().iter_mut().zip(keep) {
        if !keep {
            *c = Complex64::default();
        }
    }
}

/// dx-weighted quadrature `sum_j f_j dx`, exact for trigonometric
/// polynomials the grid resolves.
pub fn integrate_quadrature(field: &RealField) -> f64 {
    field.samples().iter().sum::<f64>() * field.grid().dx()
}

/// Pointwise product of two complex fields.
pub fn pointwise_mul(a: &ComplexField, b: &ComplexField) -> Result<ComplexField> {
    check_same_grid(a.grid(), b.grid())?;
    let samples = a.samples().iter().zip(b.samples()).map(|(x, y)| x * y).collect();
    ComplexField::new(a.grid(), samples)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::make_grid;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn random_complex_field(grid: &Arc<Grid>, seed: u64) -> ComplexField {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        ComplexField::new(
            grid,
            (0..grid.n())
                .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn single_mode_concentrates_on_its_wavenumber() {
        let g = make_grid(64, 2.0 * PI).unwrap();
        let f = ComplexField::from_fn(&g, |x| Complex64::new(0.0, x).exp());
        let spec = transform_forward(&f);
        let max = spec.coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max);
        for (k, c) in g.wavenumbers().iter().zip(spec.coeffs()) {
            if (k - 1.0).abs() < 0.5 {
                // coefficient approximates the line transform: amplitude L
                assert!((c.norm() - g.length()).abs() < 1e-10);
            } else {
                assert!(c.norm() < 1e-12 * max, "leak at k={k}: {}", c.norm());
            }
        }
    }

    #[test]
    fn round_trip_is_identity() {
        let g = make_grid(128, 37.5).unwrap();
        let f = random_complex_field(&g, 1);
        let back = transform_inverse(&transform_forward(&f));
        let err = f
            .samples()
            .iter()
            .zip(back.samples())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        let scale = f.samples().iter().map(|c| c.norm()).fold(0.0, f64::max);
        assert!(err <= 1e-13 * scale.max(1.0), "round-trip error {err}");
    }

    #[test]
    fn parseval_against_direct_sum() {
        let g = make_grid(96, 11.0).unwrap();
        let f = random_complex_field(&g, 2);
        // direct dx-weighted sum on the sample side
        let direct = (f.samples().iter().map(|c| c.norm_sqr()).sum::<f64>() * g.dx()).sqrt();
        let spectral = transform_forward(&f).l2_norm();
        assert!((direct - spectral).abs() <= 1e-12 * direct);
    }

    #[test]
    fn derivative_of_sine_is_cosine() {
        let g = make_grid(64, 2.0 * PI).unwrap();
        let f = RealField::from_fn(&g, |x| x.sin());
        let d = spectral_derivative_real(&f, 1);
        for (x, got) in g.x().iter().zip(d.samples()) {
            assert!((got - x.cos()).abs() < 1e-12);
        }
    }

    #[test]
    fn derivative_of_constant_vanishes() {
        let g = make_grid(32, 5.0).unwrap();
        let f = RealField::from_fn(&g, |_| 4.25);
        let d = spectral_derivative_real(&f, 1);
        for got in d.samples() {
            assert!(got.abs() < 1e-13);
        }
    }

    #[test]
    fn gaussian_derivative_matches_analytic_formula() {
        let g = make_grid(256, 40.0).unwrap();
        let f = RealField::from_fn(&g, |x| (-x * x).exp());
        let d = spectral_derivative_real(&f, 1);
        for (x, got) in g.x().iter().zip(d.samples()) {
            let want = -2.0 * x * (-x * x).exp();
            assert!((got - want).abs() < 1e-10, "at x={x}: {got} vs {want}");
        }
    }

    #[test]
    fn repeated_first_derivatives_compose() {
        // band-limited data: orders a then b equals order a+b
        let g = make_grid(64, 2.0 * PI).unwrap();
        let f = ComplexField::from_fn(&g, |x| {
            Complex64::new((3.0 * x).cos(), (2.0 * x).sin() + 0.5 * x.cos())
        });
        let d12 = spectral_derivative(&spectral_derivative(&f, 1), 2);
        let d3 = spectral_derivative(&f, 3);
        let err = d12
            .samples()
            .iter()
            .zip(d3.samples())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(err < 1e-11, "composition error {err}");
    }

    #[test]
    fn derivative_is_linear() {
        let g = make_grid(64, 7.0).unwrap();
        let a = random_complex_field(&g, 3);
        let b = random_complex_field(&g, 4);
        let sum = ComplexField::new(
            &g,
            a.samples().iter().zip(b.samples()).map(|(x, y)| x + 2.0 * y).collect(),
        )
        .unwrap();
        let lhs = spectral_derivative(&sum, 1);
        let da = spectral_derivative(&a, 1);
        let db = spectral_derivative(&b, 1);
        for ((l, x), y) in lhs.samples().iter().zip(da.samples()).zip(db.samples()) {
            assert!((l - (x + 2.0 * y)).norm() < 1e-10);
        }
    }

    #[test]
    fn dealias_half_zeroes_above_quarter_band() {
        let g = make_grid(64, 2.0 * PI).unwrap();
        let f = random_complex_field(&g, 5);
        let spec = dealias(&transform_forward(&f), DealiasRule::Half);
        for (k, c) in g.wavenumbers().iter().zip(spec.coeffs()) {
            if k.abs() > 16.0 {
                assert_eq!(*c, Complex64::default(), "mode {k} not zeroed");
            }
        }
    }

    #[test]
    fn dealias_keeps_band_limited_data_unchanged() {
        let g = make_grid(64, 2.0 * PI).unwrap();
        let f = ComplexField::from_fn(&g, |x| Complex64::new((5.0 * x).cos(), (3.0 * x).sin()));
        let spec = transform_forward(&f);
        let masked = dealias(&spec, DealiasRule::Half);
        for (a, b) in spec.coeffs().iter().zip(masked.coeffs()) {
            assert!((a - b).norm() < 1e-14);
        }
    }

    #[test]
    fn unsupported_rules_rejected() {
        assert!(matches!(DealiasRule::from_fraction(0.9), Err(Error::UnsupportedRule(_))));
        assert!(matches!(DealiasRule::from_fraction(0.0), Err(Error::UnsupportedRule(_))));
        assert!(DealiasRule::from_fraction(0.5).is_ok());
        assert!(DealiasRule::from_fraction(2.0 / 3.0).is_ok());
    }

    #[test]
    fn quadrature_of_cos_squared() {
        let g = make_grid(64, 2.0 * PI).unwrap();
        let f = RealField::from_fn(&g, |x| x.cos().powi(2));
        assert!((integrate_quadrature(&f) - PI).abs() < 1e-13);
    }

    #[test]
    fn quadrature_of_zero_field() {
        let g = make_grid(16, 3.0).unwrap();
        assert_eq!(integrate_quadrature(&RealField::zeros(&g)), 0.0);
    }

    #[test]
    fn quadrature_of_gaussian_matches_sqrt_pi() {
        // domain wide enough that the periodic tail is below 1e-12
        let g = make_grid(256, 40.0).unwrap();
        let f = RealField::from_fn(&g, |x| (-x * x).exp());
        assert!((integrate_quadrature(&f) - PI.sqrt()).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn prop_round_trip_identity(seed in 0u64..500) {
            let g = make_grid(32, 9.25).unwrap();
            let f = random_complex_field(&g, seed);
            let back = transform_inverse(&transform_forward(&f));
            for (a, b) in f.samples().iter().zip(back.samples()) {
                prop_assert!((a - b).norm() < 1e-13);
            }
        }

        #[test]
        fn prop_parseval(seed in 0u64..500) {
            let g = make_grid(32, 4.0).unwrap();
            let f = random_complex_field(&g, seed);
            let direct = f.l2_norm();
            let spectral = transform_forward(&f).l2_norm();
            prop_assert!((direct - spectral).abs() <= 1e-12 * direct.max(1e-300));
        }

        #[test]
        fn prop_dealias_idempotent_and_contractive(seed in 0u64..500) {
            let g = make_grid(64, 2.0).unwrap();
            let spec = transform_forward(&random_complex_field(&g, seed));
            for rule in [DealiasRule::Half, DealiasRule::TwoThirds] {
                let once = dealias(&spec, rule);
                let twice = dealias(&once, rule);
                prop_assert_eq!(once.coeffs(), twice.coeffs());
                prop_assert!(once.l2_norm() <= spec.l2_norm() * (1.0 + 1e-14));
            }
        }
    }
}
