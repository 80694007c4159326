//! Periodic grid and the sampled field types that live on it.
//!
//! The domain is `[-L/2, L/2)` sampled at `n` equispaced points. Wavenumbers
//! use the symmetric FFT layout `(2*pi/L) * {0, 1, ..., n/2-1, -n/2, ..., -1}`,
//! so every mode except the unpaired Nyquist entry has its negative partner.

use std::sync::Arc;

use rustfft::num_complex::Complex64;

use crate::{Error, Result};

/// Uniform periodic grid on `[-length/2, length/2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    n: usize,
    length: f64,
    wavenumbers: Vec<f64>,
    x: Vec<f64>,
}

impl Grid {
    /// Builds a grid with `n` points (even, at least 4) on a domain of the
    /// given positive length.
    pub fn new(n: usize, length: f64) -> Result<Arc<Grid>> {
        if n < 4 || !n.is_multiple_of(2) {
            return Err(Error::InvalidGrid(format!(
                "n_points must be even and >= 4, got {n}"
            )));
        }
        if length <= 0.0 || !length.is_finite() {
            return Err(Error::InvalidGrid(format!(
                "length must be positive and finite, got {length}"
            )));
        }
        let dk = 2.0 * std::f64::consts::PI / length;
        let half = n / 2;
        let wavenumbers = (0..n)
            .map(|k| {
                let m = if k < half { k as i64 } else { k as i64 - n as i64 };
                dk * m as f64
            })
            .collect();
        let dx = length / n as f64;
        let x = (0..n).map(|j| -0.5 * length + j as f64 * dx).collect();
        Ok(Arc::new(Grid { n, length, wavenumbers, x }))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    /// Grid spacing `length / n`.
    pub fn dx(&self) -> f64 {
        self.length / self.n as f64
    }

    /// Wavenumbers in FFT storage order (symmetric layout).
    pub fn wavenumbers(&self) -> &[f64] {
        &self.wavenumbers
    }

    /// Sample coordinates `x_j = -length/2 + j*dx`.
    pub fn x(&self) -> &[f64] {
        &self.x
    }

    /// Storage index of the unpaired Nyquist mode.
    pub(crate) fn nyquist_index(&self) -> usize {
        self.n / 2
    }
}

fn check_len(grid: &Grid, len: usize) -> Result<()> {
    if len != grid.n() {
        return Err(Error::Shape(format!(
            "expected {} samples for this grid, got {}",
            grid.n(),
            len
        )));
    }
    Ok(())
}

/// Complex-valued samples on a [`Grid`] (the short wave `u`).
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexField {
    grid: Arc<Grid>,
    samples: Vec<Complex64>,
}

impl ComplexField {
    pub fn new(grid: &Arc<Grid>, samples: Vec<Complex64>) -> Result<Self> {
        check_len(grid, samples.len())?;
        Ok(ComplexField { grid: Arc::clone(grid), samples })
    }

    pub fn zeros(grid: &Arc<Grid>) -> Self {
        ComplexField { grid: Arc::clone(grid), samples: vec![Complex64::default(); grid.n()] }
    }

    pub fn from_fn(grid: &Arc<Grid>, mut f: impl FnMut(f64) -> Complex64) -> Self {
        let samples = grid.x().iter().map(|&x| f(x)).collect();
        ComplexField { grid: Arc::clone(grid), samples }
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn samples_mut(&mut self) -> &mut [Complex64] {
        &mut self.samples
    }

    pub fn into_samples(self) -> Vec<Complex64> {
        self.samples
    }

    /// dx-weighted discrete L2 norm.
    pub fn l2_norm(&self) -> f64 {
        let dx = self.grid.dx();
        (self.samples.iter().map(|s| s.norm_sqr()).sum::<f64>() * dx).sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.samples.iter().all(|s| s.re.is_finite() && s.im.is_finite())
    }
}

/// Real-valued samples on a [`Grid`] (the long wave `v`).
#[derive(Debug, Clone, PartialEq)]
pub struct RealField {
    grid: Arc<Grid>,
    samples: Vec<f64>,
}

impl RealField {
    pub fn new(grid: &Arc<Grid>, samples: Vec<f64>) -> Result<Self> {
        check_len(grid, samples.len())?;
        Ok(RealField { grid: Arc::clone(grid), samples })
    }

    pub fn zeros(grid: &Arc<Grid>) -> Self {
        RealField { grid: Arc::clone(grid), samples: vec![0.0; grid.n()] }
    }

    pub fn from_fn(grid: &Arc<Grid>, mut f: impl FnMut(f64) -> f64) -> Self {
        let samples = grid.x().iter().map(|&x| f(x)).collect();
        RealField { grid: Arc::clone(grid), samples }
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn samples_mut(&mut self) -> &mut [f64] {
        &mut self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    /// dx-weighted discrete L2 norm.
    pub fn l2_norm(&self) -> f64 {
        let dx = self.grid.dx();
        (self.samples.iter().map(|s| s * s).sum::<f64>() * dx).sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.samples.iter().all(|s| s.is_finite())
    }

    /// Promotes to a complex field with zero imaginary part.
    pub fn to_complex(&self) -> ComplexField {
        ComplexField {
            grid: Arc::clone(&self.grid),
            samples: self.samples.iter().map(|&s| Complex64::new(s, 0.0)).collect(),
        }
    }
}

/// Convenience constructor mirroring the library naming: an even-`n` periodic
/// grid on `[-length/2, length/2)`.
pub fn make_grid(n: usize, length: f64) -> Result<Arc<Grid>> {
    Grid::new(n, length)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wavenumber_layout_matches_symmetric_convention() {
        let g = Grid::new(8, 2.0 * std::f64::consts::PI).unwrap();
        let got: Vec<i64> = g.wavenumbers().iter().map(|k| k.round() as i64).collect();
        assert_eq!(got, vec![0, 1, 2, 3, -4, -3, -2, -1]);
        for (m, k) in got.iter().zip(g.wavenumbers()) {
            assert!((k - *m as f64).abs() < 1e-14);
        }
    }

    #[test]
    fn wavenumber_spacing_scales_with_length() {
        let g = Grid::new(4, std::f64::consts::PI).unwrap();
        let got: Vec<i64> = g.wavenumbers().iter().map(|k| k.round() as i64).collect();
        assert_eq!(got, vec![0, 2, -4, -2]);
    }

    #[test]
    fn odd_or_small_n_rejected() {
        assert!(matches!(Grid::new(7, 1.0), Err(Error::InvalidGrid(_))));
        assert!(matches!(Grid::new(2, 1.0), Err(Error::InvalidGrid(_))));
        assert!(matches!(Grid::new(0, 1.0), Err(Error::InvalidGrid(_))));
    }

    #[test]
    fn non_positive_length_rejected() {
        assert!(matches!(Grid::new(8, 0.0), Err(Error::InvalidGrid(_))));
        assert!(matches!(Grid::new(8, -3.0), Err(Error::InvalidGrid(_))));
        assert!(matches!(Grid::new(8, f64::NAN), Err(Error::InvalidGrid(_))));
    }

    #[test]
    fn wavenumbers_antisymmetric_except_nyquist() {
        let g = Grid::new(16, 3.7).unwrap();
        let k = g.wavenumbers();
        let n = g.n();
        for i in 1..n {
            if i == g.nyquist_index() {
                continue;
            }
            assert!((k[i] + k[n - i]).abs() < 1e-13, "mode {i} has no negative partner");
        }
        assert!(k[g.nyquist_index()] < 0.0);
    }

    #[test]
    fn sample_coordinates_cover_centered_domain() {
        let g = Grid::new(8, 4.0).unwrap();
        assert!((g.x()[0] + 2.0).abs() < 1e-15);
        assert!((g.x()[7] - (2.0 - g.dx())).abs() < 1e-15);
    }

    #[test]
    fn field_sample_count_must_match_grid() {
        let g = Grid::new(8, 1.0).unwrap();
        assert!(matches!(
            ComplexField::new(&g, vec![Complex64::default(); 7]),
            Err(Error::Shape(_))
        ));
        assert!(matches!(RealField::new(&g, vec![0.0; 9]), Err(Error::Shape(_))));
    }

    #[test]
    fn l2_norm_uses_dx_weight() {
        // Constant 1 on a length-5 domain has L2 norm sqrt(5).
        let g = Grid::new(16, 5.0).unwrap();
        let f = RealField::from_fn(&g, |_| 1.0);
        assert!((f.l2_norm() - 5.0f64.sqrt()).abs() < 1e-13);
    }
}
