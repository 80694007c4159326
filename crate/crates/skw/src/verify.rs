//! The invariant suite behind `skw verify`.
//!
//! Each check runs a pinned experiment against a pinned tolerance and
//! reports one pass/fail line; the tolerances are part of the library's
//! contract, not knobs. [`run_suite`] executes every check, with a `quick`
//! mode that shrinks only the ratio-ensemble sweep, which dominates the
//! runtime. Errors inside a check (a rejected configuration, a blowup)
//! fail that check rather than abort the suite.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bilinear::{ratio_ensemble, BilinearCase, EnsemblePlan};
use crate::bourgain::{
    besov_xsb_norm, lp_partition, sobolev_norm, xsb_norm, ysb_norm, BesovQ, ModulationKind,
    SpaceTimeField,
};
use crate::dynamics::{
    conservation_derivative_check, conserved_quantities, integrate, kawahara_integrate,
    CoupledState, SolverConfig, SystemOps,
};
use crate::globalization::{growth_fit, growth_sweep, run_globalization};
use crate::grid::{make_grid, ComplexField, Grid, RealField};
use crate::io::{read_snapshot, write_snapshot};
use crate::propagators::{
    dispersion_p, kawahara_propagate, schrodinger_propagate, PhysParams,
};
use crate::scaling::{dilate_real, dilated_residual, DilationParams};
use crate::{Complex64, Result};

/// Outcome of one check: a stable name, the verdict, and the measured
/// numbers next to their tolerances.
#[derive(Debug, Clone)]
pub struct CheckReport {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CheckReport {
    /// The one-line form: `PASS <name>: <detail>`.
    pub fn line(&self) -> String {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        format!("{verdict} {}: {}", self.name, self.detail)
    }
}

fn guard(
    name: &'static str,
    run: impl FnOnce() -> Result<(bool, String)>,
) -> CheckReport {
    match run() {
        Ok((passed, detail)) => CheckReport { name, passed, detail },
        Err(e) => CheckReport { name, passed: false, detail: format!("error: {e}") },
    }
}

/// Runs every check in order. `quick` keeps the whole suite under a few
/// seconds by shrinking the ensemble sweep; everything else is identical.
pub fn run_suite(quick: bool) -> Vec<CheckReport> {
    vec![
        check_mass_conservation(),
        check_momentum_energy(),
        check_kawahara_l2(),
        check_propagators(),
        check_integrator_order(),
        check_decomposition(),
        check_dilation(),
        check_bourgain(),
        check_bilinear_ensembles(quick),
        check_continuous_dependence(),
        check_plumbing(),
    ]
}

pub fn suite_passed(reports: &[CheckReport]) -> bool {
    reports.iter().all(|r| r.passed)
}

fn unit_params() -> PhysParams {
    PhysParams { alpha: 1.0, beta: 1.0, gamma: 1.0, delta: 1.0, epsilon: 1.0 }
}

/// The conservation benchmark: Gaussian data on the 256-point, length-100
/// grid with unit coefficients.
fn benchmark_state() -> Result<CoupledState> {
    let grid = make_grid(256, 100.0)?;
    let u = ComplexField::from_fn(&grid, |x| {
        Complex64::from_polar(1.5 * (-x * x).exp(), x)
    });
    let v = RealField::from_fn(&grid, |x| 0.8 * (-x * x).exp());
    CoupledState::new(u, v, 0.0)
}

struct DriftTrack {
    first: Option<[f64; 3]>,
    max_rel: [f64; 3],
}

impl DriftTrack {
    fn new() -> Self {
        DriftTrack { first: None, max_rel: [0.0; 3] }
    }

    fn record(&mut self, values: [f64; 3]) {
        match self.first {
            None => self.first = Some(values),
            Some(base) => {
                for i in 0..3 {
                    let rel = (values[i] - base[i]).abs() / base[i].abs();
                    self.max_rel[i] = self.max_rel[i].max(rel);
                }
            }
        }
    }
}

fn benchmark_drifts(dt: f64) -> Result<[f64; 3]> {
    let state = benchmark_state()?;
    let params = unit_params();
    let config = SolverConfig { dt, ..Default::default() };
    let mut track = DriftTrack::new();
    integrate(&state, 1.0, &params, &config, 25, |d| {
        track.record([d.conserved.mass, d.conserved.momentum, d.conserved.energy]);
    })?;
    Ok(track.max_rel)
}

/// Mass stays flat to 1e-9 over the unit-time benchmark run, and halving
/// the step cuts the drift by at least 8x.
pub fn check_mass_conservation() -> CheckReport {
    guard("mass-conservation", || {
        let coarse = benchmark_drifts(1e-3)?[0];
        let fine = benchmark_drifts(5e-4)?[0];
        let reduction = coarse / fine;
        let passed = coarse <= 1e-9 && reduction >= 8.0;
        Ok((
            passed,
            format!(
                "relative drift {coarse:.3e} at dt=1e-3 (tolerance 1e-9), \
                 {fine:.3e} at dt=5e-4 (reduction {reduction:.1}x, need >= 8x)"
            ),
        ))
    })
}

/// Momentum and energy stay flat to 1e-6 on the same run, and the
/// independent derivative check vanishes at ten random smooth states.
pub fn check_momentum_energy() -> CheckReport {
    guard("momentum-energy", || {
        let [_, dq, de] = benchmark_drifts(1e-3)?;
        let grid = make_grid(256, 100.0)?;
        let params = unit_params();
        let mut worst = 0.0f64;
        for seed in 0..10u64 {
            let state = random_smooth_state(&grid, seed)?;
            let c = conserved_quantities(&state, &params);
            let scale = 1.0 + c.mass.abs() + c.momentum.abs() + c.energy.abs();
            let (_, dq_dt, de_dt) = conservation_derivative_check(&state, &params);
            worst = worst.max(dq_dt.abs() / scale).max(de_dt.abs() / scale);
        }
        let passed = dq <= 1e-6 && de <= 1e-6 && worst <= 1e-8;
        Ok((
            passed,
            format!(
                "momentum drift {dq:.3e}, energy drift {de:.3e} (tolerance 1e-6); \
                 worst scaled |dQ/dt|, |dE/dt| over 10 random states {worst:.3e} \
                 (tolerance 1e-8)"
            ),
        ))
    })
}

fn random_smooth_state(grid: &Arc<Grid>, seed: u64) -> Result<CoupledState> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fundamental = std::f64::consts::TAU / grid.length();
    let mode_sum = |scale: f64, rng: &mut ChaCha8Rng| -> Vec<Complex64> {
        let coeffs: Vec<Complex64> = (-8i64..=8)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        grid.x()
            .iter()
            .map(|&x| {
                let mut sum = Complex64::default();
                for (offset, c) in coeffs.iter().enumerate() {
                    let m = offset as f64 - 8.0;
                    sum += c * Complex64::new(0.0, m * fundamental * x).exp();
                }
                scale * sum
            })
            .collect()
    };
    let u = ComplexField::new(grid, mode_sum(0.4, &mut rng))?;
    let v_samples: Vec<f64> = mode_sum(0.3, &mut rng).iter().map(|c| c.re).collect();
    let v = RealField::new(grid, v_samples)?;
    CoupledState::new(u, v, 0.0)
}

/// The standalone long-wave flow preserves the L2 norm of mixed
/// cosine-plus-Gaussian data to 1e-9 over unit time.
pub fn check_kawahara_l2() -> CheckReport {
    guard("kawahara-l2", || {
        let grid = make_grid(256, 100.0)?;
        let params = unit_params();
        let config = SolverConfig { dt: 1e-3, ..Default::default() };
        let fundamental = std::f64::consts::TAU / grid.length();
        let v0 = RealField::from_fn(&grid, |x| {
            0.6 * (3.0 * fundamental * x).cos() + 0.8 * (-x * x).exp()
        });

        // The stepper works on the dealiased band, so the conserved norm is
        // that of the projected data.
        let ops = SystemOps::standard(&grid, &params, &config);
        let mut hat = ops.forward_real(&v0);
        ops.project(&mut hat);
        let banded = ops.inverse_real(&hat);

        let final_v = kawahara_integrate(&v0, 1.0, &params, &config)?;
        let drift = (final_v.l2_norm() - banded.l2_norm()).abs() / banded.l2_norm();
        Ok((drift <= 1e-9, format!("relative L2 drift {drift:.3e} (tolerance 1e-9)")))
    })
}

/// Free flows reproduce plane waves exactly, preserve norms, and compose.
pub fn check_propagators() -> CheckReport {
    guard("propagators", || {
        let grid = make_grid(128, 40.0)?;
        let params = unit_params();
        let fundamental = std::f64::consts::TAU / 40.0;
        let tol = 1e-12;
        let mut worst = 0.0f64;

        let k = 5.0 * fundamental;
        let u0 = ComplexField::from_fn(&grid, |x| Complex64::new(0.0, k * x).exp());
        let t = 0.7;
        let moved = schrodinger_propagate(&u0, t);
        for (got, &x) in moved.samples().iter().zip(grid.x()) {
            let want = Complex64::new(0.0, k * x - k * k * t).exp();
            worst = worst.max((got - want).norm());
        }

        let xi = 3.0 * fundamental;
        let v0 = RealField::from_fn(&grid, |x| (xi * x).cos());
        let tv = 0.35;
        let moved_v = kawahara_propagate(&v0, tv, &params)?;
        let phase = dispersion_p(xi, &params) * tv;
        for (got, &x) in moved_v.samples().iter().zip(grid.x()) {
            worst = worst.max((got - (xi * x + phase).cos()).abs());
        }

        let wave = random_smooth_state(&grid, 5)?;
        let norm0 = wave.u.l2_norm();
        let norm1 = schrodinger_propagate(&wave.u, 1.3).l2_norm();
        worst = worst.max((norm1 - norm0).abs() / norm0);
        let vnorm0 = wave.v.l2_norm();
        let vnorm1 = kawahara_propagate(&wave.v, 1.3, &params)?.l2_norm();
        worst = worst.max((vnorm1 - vnorm0).abs() / vnorm0);

        let (s, t2) = (0.4, 0.9);
        let composed = schrodinger_propagate(&schrodinger_propagate(&wave.u, t2), s);
        let direct = schrodinger_propagate(&wave.u, s + t2);
        for (a, b) in composed.samples().iter().zip(direct.samples()) {
            worst = worst.max((a - b).norm());
        }
        let composed_v =
            kawahara_propagate(&kawahara_propagate(&wave.v, t2, &params)?, s, &params)?;
        let direct_v = kawahara_propagate(&wave.v, s + t2, &params)?;
        for (a, b) in composed_v.samples().iter().zip(direct_v.samples()) {
            worst = worst.max((a - b).abs());
        }

        Ok((
            worst <= tol,
            format!(
                "worst plane-wave/unitarity/group-law deviation {worst:.3e} \
                 (tolerance 1e-12)"
            ),
        ))
    })
}

fn loglog_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &(x, y) in points {
        let (lx, ly) = (x.ln(), y.ln());
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

/// Self-convergence on spectrally narrow data shows the stepper's fourth
/// order: consecutive-step differences fall with slope 4.0 +/- 0.3.
pub fn check_integrator_order() -> CheckReport {
    guard("integrator-order", || {
        let grid = make_grid(128, 40.0)?;
        let u0 = ComplexField::from_fn(&grid, |x| {
            Complex64::from_polar(2.0 * (-x * x / 8.0).exp(), 0.5 * x)
        });
        let v0 = RealField::from_fn(&grid, |x| 1.5 * (-x * x / 8.0).exp());
        let state = CoupledState::new(u0, v0, 0.0)?;
        let params = unit_params();
        let dts = [4e-3, 2e-3, 1e-3, 5e-4];
        let finals: Vec<CoupledState> = dts
            .iter()
            .map(|&dt| {
                let config = SolverConfig { dt, ..Default::default() };
                integrate(&state, 0.5, &params, &config, 0, |_| {})
            })
            .collect::<Result<_>>()?;
        let points: Vec<(f64, f64)> = (0..3)
            .map(|i| (dts[i], state_distance(&finals[i], &finals[i + 1])))
            .collect();
        let slope = loglog_slope(&points);
        Ok((
            (3.7..=4.3).contains(&slope),
            format!("self-convergence slope {slope:.3} over dt in 4e-3..5e-4 (need 4.0 +/- 0.3)"),
        ))
    })
}

fn state_distance(a: &CoupledState, b: &CoupledState) -> f64 {
    let dx = a.grid().dx();
    let mut sum = 0.0;
    for (x, y) in a.u.samples().iter().zip(b.u.samples()) {
        sum += (x - y).norm_sqr();
    }
    for (x, y) in a.v.samples().iter().zip(b.v.samples()) {
        sum += (x - y) * (x - y);
    }
    (dx * sum).sqrt()
}

/// Pinned scale for the interval-decomposition growth bound
/// `‖w(T)‖ <= C sqrt(T) ‖u0‖^2`: one constant must cover every window
/// length tested.
const GROWTH_CONSTANT: f64 = 1.0;

/// The long-wave decomposition: the three channels recombine exactly, the
/// forced channel vanishes without forcing, and its size follows the
/// amplitude-squared, sqrt-of-window law.
pub fn check_decomposition() -> CheckReport {
    guard("decomposition", || {
        let grid = make_grid(64, 30.0)?;
        let profile =
            ComplexField::from_fn(&grid, |x| Complex64::from_polar((-x * x).exp(), 1.5 * x));
        let v0 = RealField::from_fn(&grid, |x| 0.5 * (-x * x).exp());
        let params = unit_params();
        let config = SolverConfig { dt: 1e-3, ..Default::default() };

        let u_mid = ComplexField::new(
            &grid,
            profile.samples().iter().map(|c| 0.4 * c).collect(),
        )?;
        let reports = run_globalization(&u_mid, &v0, &params, &config, 0.1, 5)?;
        let worst_identity =
            reports.iter().map(|r| r.identity_residual).fold(0.0, f64::max);

        let mut quiet = params;
        quiet.epsilon = 0.0;
        let unforced = run_globalization(&u_mid, &v0, &quiet, &config, 0.1, 5)?;
        let worst_w = unforced.iter().map(|r| r.w_norm_end).fold(0.0, f64::max);

        let sweep =
            growth_sweep(&profile, &v0, &[0.05, 0.1, 0.2, 0.4], &params, &config, 0.05)?;
        let slope = growth_fit(&sweep)?;

        let mass = {
            let state = CoupledState::new(u_mid.clone(), RealField::zeros(&grid), 0.0)?;
            conserved_quantities(&state, &params).mass
        };
        let mut ratio_max = 0.0f64;
        for t_window in [0.05, 0.1, 0.2] {
            let r = run_globalization(&u_mid, &v0, &params, &config, t_window, 1)?;
            ratio_max = ratio_max.max(r[0].w_norm_end / (t_window.sqrt() * mass));
        }

        let passed = worst_identity <= 1e-8
            && worst_w <= 1e-10
            && (1.9..=2.1).contains(&slope)
            && ratio_max <= GROWTH_CONSTANT;
        Ok((
            passed,
            format!(
                "identity residual {worst_identity:.3e} (tolerance 1e-8); \
                 unforced ‖w‖ {worst_w:.3e} (tolerance 1e-10); \
                 amplitude exponent {slope:.3} (need 2.0 +/- 0.1); \
                 ‖w(T)‖/(sqrt(T)‖u0‖²) <= {ratio_max:.3} (constant {GROWTH_CONSTANT})"
            ),
        ))
    })
}

/// The dilation symmetry: residuals survive rescaling, and the rescaled
/// data obeys the exact L2 law and the negative-Sobolev bound.
pub fn check_dilation() -> CheckReport {
    guard("dilation", || {
        let grid = make_grid(128, 40.0)?;
        let u0 = ComplexField::from_fn(&grid, |x| {
            Complex64::from_polar(0.5 * (-x * x / 8.0).exp(), 0.5 * x)
        });
        let v0 = RealField::from_fn(&grid, |x| 0.4 * (-x * x / 8.0).exp());
        let params = unit_params();
        let config = SolverConfig { dt: 2e-3, ..Default::default() };

        let unit = DilationParams::new(1.0)?;
        let base_a = dilated_residual(&u0, &v0, &unit, 0.1, &params, &config)?;
        let base_b = dilated_residual(&u0, &v0, &unit, 0.1, &params, &config)?;
        let baseline_stable =
            base_a.residual_u == base_b.residual_u && base_a.residual_v == base_b.residual_v;

        let half = DilationParams::new(0.5)?;
        let dilated = dilated_residual(&u0, &v0, &half, 0.1, &params, &config)?;
        let within = dilated.residual_u <= 10.0 * base_a.residual_u
            && dilated.residual_v <= 10.0 * base_a.residual_v;

        let mut l2_err = 0.0f64;
        for lambda in [0.5, 0.25] {
            let lam = DilationParams::new(lambda)?;
            let scaled = dilate_real(&v0, &lam);
            let want = lambda.powf(3.5) * v0.l2_norm();
            l2_err = l2_err.max((scaled.l2_norm() - want).abs() / want);
        }

        let corpus = [
            RealField::from_fn(&grid, |x| (-x * x).exp()),
            RealField::from_fn(&grid, |x| (-x * x / 4.0).exp() * (2.0 * x).cos()),
            RealField::from_fn(&grid, |x| x * (-x * x / 2.0).exp()),
            RealField::from_fn(&grid, |x| {
                0.4 * (-((x - 3.0) * (x - 3.0)) / 2.0).exp()
                    - 0.7 * (-((x + 2.0) * (x + 2.0)) / 3.0).exp()
            }),
        ];
        let mut sobolev_ok = true;
        for field in &corpus {
            let rhs_norm = sobolev_norm(&field.to_complex(), -2.0);
            for lambda in [0.5, 0.25, 0.125] {
                let lam = DilationParams::new(lambda)?;
                let lhs = sobolev_norm(&dilate_real(field, &lam).to_complex(), -2.0);
                if lhs > lambda.powf(1.5) * rhs_norm * (1.0 + 1e-12) {
                    sobolev_ok = false;
                }
            }
        }

        let passed = baseline_stable && within && l2_err <= 1e-10 && sobolev_ok;
        Ok((
            passed,
            format!(
                "baseline residual ({:.3e}, {:.3e}) reproduced at lambda=1: {}; \
                 lambda=1/2 residual ({:.3e}, {:.3e}) within 10x: {}; \
                 L2 law error {:.3e} (tolerance 1e-10); H^-2 bound holds: {}",
                base_a.residual_u,
                base_a.residual_v,
                baseline_stable,
                dilated.residual_u,
                dilated.residual_v,
                within,
                l2_err,
                sobolev_ok,
            ),
        ))
    })
}

fn random_spacetime(
    grid: &Arc<Grid>,
    time_window: f64,
    n_time: usize,
    kind: ModulationKind,
    seed: u64,
) -> Result<SpaceTimeField> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples: Vec<Complex64> = (0..grid.n() * n_time)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    SpaceTimeField::new(grid, time_window, n_time, samples, kind, &unit_params())
}

/// The dyadic machinery and the space-time norms: partition of unity,
/// supports, the L2 identity at (0,0), the Besov embedding, and agreement
/// with brute-force summation.
pub fn check_bourgain() -> CheckReport {
    guard("bourgain-norms", || {
        let partition = lp_partition(6);
        let envelope_scale = (partition.j_max() as f64).exp2();
        let mut partition_ok = true;
        for i in 0..10_000 {
            let xi = -100.0 + 200.0 * i as f64 / 9_999.0;
            let sum: f64 = (0..=partition.j_max()).map(|j| partition.phi(j, xi)).sum();
            let envelope = partition.phi(0, xi / envelope_scale);
            if (sum - envelope).abs() > 1e-12 {
                partition_ok = false;
            }
            if xi.abs() <= partition.covered_band() && (sum - 1.0).abs() > 1e-12 {
                partition_ok = false;
            }
            for j in 0..=partition.j_max() {
                let phi = partition.phi(j, xi);
                if !(0.0..=1.0 + 1e-12).contains(&phi) {
                    partition_ok = false;
                }
                let scale = (j as f64).exp2();
                let (lo, hi) = if j == 0 {
                    (0.0, 1.5)
                } else {
                    (1.25 * scale / 2.0, 1.5 * scale)
                };
                if (xi.abs() < lo || xi.abs() > hi) && phi != 0.0 {
                    partition_ok = false;
                }
            }
        }

        let grid = make_grid(32, 20.0)?;
        let f = random_spacetime(&grid, 8.0, 16, ModulationKind::Schrodinger, 11)?;
        let direct = {
            let dx = grid.dx();
            let dt = 8.0 / 16.0;
            let sum: f64 = f.samples().iter().map(|c| c.norm_sqr()).sum();
            (dx * dt * sum).sqrt()
        };
        let at_zero = xsb_norm(&f, 0.0, 0.0)?;
        let parseval_err = (at_zero - direct).abs() / direct;

        let small = make_grid(16, 12.0)?;
        let mut embedding_ok = true;
        for seed in 0..100 {
            let g = random_spacetime(&small, 4.0, 8, ModulationKind::Schrodinger, 300 + seed)?;
            let sup = besov_xsb_norm(&g, 0.4, 0.375, BesovQ::Infinity)?;
            let sum = besov_xsb_norm(&g, 0.4, 0.375, BesovQ::One)?;
            if sup > sum * (1.0 + 1e-12) {
                embedding_ok = false;
            }
        }

        let brute_err = brute_force_error()?;

        let passed =
            partition_ok && parseval_err <= 1e-12 && embedding_ok && brute_err <= 1e-12;
        Ok((
            passed,
            format!(
                "partition/support pointwise on 10^4 samples: {partition_ok}; \
                 |X^(0,0) - L2|/L2 = {parseval_err:.3e} (tolerance 1e-12); \
                 sup-norm <= sum-norm on 100 fields: {embedding_ok}; \
                 brute-force mismatch {brute_err:.3e} (tolerance 1e-12)"
            ),
        ))
    })
}

fn brute_force_error() -> Result<f64> {
    let grid = make_grid(16, 12.0)?;
    let t_w = 4.0;
    let m = 8;
    let params = unit_params();
    let time_grid = make_grid(m, t_w)?;
    let (s, b) = (0.7, 0.3);
    let mut worst = 0.0f64;
    for kind in [ModulationKind::Schrodinger, ModulationKind::Kawahara] {
        let f = random_spacetime(&grid, t_w, m, kind, 23)?;
        let dx = grid.dx();
        let dt = t_w / m as f64;
        let n = grid.n();
        let mut acc = 0.0;
        for &tau in time_grid.wavenumbers() {
            for &xi in grid.wavenumbers() {
                let mut c = Complex64::default();
                for (l, &t) in time_grid.x().iter().enumerate() {
                    for (j, &x) in grid.x().iter().enumerate() {
                        c += f.samples()[l * n + j]
                            * Complex64::from_polar(dx * dt, -(xi * x + tau * t));
                    }
                }
                let mu = match kind {
                    ModulationKind::Schrodinger => tau + xi * xi,
                    ModulationKind::Kawahara => tau - dispersion_p(xi, &params),
                };
                let weight =
                    (1.0 + xi * xi).powf(s) * (1.0 + mu * mu).powf(b);
                acc += weight * c.norm_sqr();
            }
        }
        let expected = (acc / (12.0 * t_w)).sqrt();
        let got = match kind {
            ModulationKind::Schrodinger => xsb_norm(&f, s, b)?,
            ModulationKind::Kawahara => ysb_norm(&f, s, b)?,
        };
        worst = worst.max((got - expected).abs() / expected);
    }
    Ok(worst)
}

fn ensemble_plan(n: usize, n_samples: usize) -> Result<EnsemblePlan> {
    Ok(EnsemblePlan {
        grid: make_grid(n, std::f64::consts::TAU)?,
        time_window: std::f64::consts::TAU,
        n_time: 32,
        params: unit_params(),
        kmax: 6,
        mmax: 5,
        n_samples,
    })
}

/// Seeded ratio ensembles stay finite, agree across seeds within 2x, and
/// grow under lattice refinement by less than 50%.
pub fn check_bilinear_ensembles(quick: bool) -> CheckReport {
    guard("bilinear-ensembles", || {
        if quick {
            let plan = ensemble_plan(32, 20)?;
            let report = ratio_ensemble(BilinearCase::Uv, &plan, 1)?;
            let passed = report.max_ratio.is_finite() && report.max_ratio > 0.0;
            return Ok((
                passed,
                format!(
                    "quick probe: uv max ratio {:.3e} over {} samples (finite)",
                    report.max_ratio, report.n_samples
                ),
            ));
        }

        let coarse = ensemble_plan(32, 100)?;
        let fine = ensemble_plan(64, 100)?;
        let mut passed = true;
        let mut parts = Vec::new();
        for case in BilinearCase::ALL {
            let mut ratios = Vec::new();
            for seed in [1, 2, 3] {
                ratios.push(ratio_ensemble(case, &coarse, seed)?.max_ratio);
            }
            let lo = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = ratios.iter().cloned().fold(0.0, f64::max);
            let spread = hi / lo;
            let refined = ratio_ensemble(case, &fine, 1)?.max_ratio;
            let growth = refined / ratios[0];
            let ok = hi.is_finite()
                && hi > 0.0
                && spread < 2.0
                && refined.is_finite()
                && growth < 1.5;
            passed = passed && ok;
            parts.push(format!(
                "{}: max {:.3e}, seed spread {:.2}x, refinement growth {:.2}x",
                case.name(),
                hi,
                spread,
                growth
            ));
        }
        Ok((
            passed,
            format!("{} (need spread < 2x, growth < 1.5x)", parts.join("; ")),
        ))
    })
}

/// Solution divergence at t = 0.5 scales linearly in the size of a data
/// perturbation across three decades.
pub fn check_continuous_dependence() -> CheckReport {
    guard("continuous-dependence", || {
        let grid = make_grid(128, 40.0)?;
        let u0 = ComplexField::from_fn(&grid, |x| {
            Complex64::from_polar(1.2 * (-x * x / 8.0).exp(), 0.3 * x)
        });
        let v0 = RealField::from_fn(&grid, |x| 0.8 * (-x * x / 8.0).exp());
        let state = CoupledState::new(u0.clone(), v0.clone(), 0.0)?;
        let params = unit_params();
        let config = SolverConfig { dt: 1e-3, ..Default::default() };
        let base = integrate(&state, 0.5, &params, &config, 0, |_| {})?;

        let bump = ComplexField::from_fn(&grid, |x| {
            Complex64::from_polar((-((x - 2.0) * (x - 2.0)) / 4.0).exp(), 0.2 * x)
        });
        let bump_norm = bump.l2_norm();

        let sizes = [1e-5, 1e-4, 1e-3, 1e-2];
        let mut scaled = Vec::new();
        for &eta in &sizes {
            let perturbed_u = ComplexField::new(
                &grid,
                u0.samples()
                    .iter()
                    .zip(bump.samples())
                    .map(|(a, b)| a + (eta / bump_norm) * b)
                    .collect(),
            )?;
            let perturbed = CoupledState::new(perturbed_u, v0.clone(), 0.0)?;
            let evolved = integrate(&perturbed, 0.5, &params, &config, 0, |_| {})?;
            scaled.push(state_distance(&evolved, &base) / eta);
        }
        let lo = scaled.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = scaled.iter().cloned().fold(0.0, f64::max);
        let spread = hi / lo;
        Ok((
            spread <= 2.0,
            format!(
                "divergence/size over sizes 1e-5..1e-2: {:.4}..{:.4} \
                 (spread {spread:.3}, need <= 2)",
                lo, hi
            ),
        ))
    })
}

/// Snapshots round-trip bit-exactly and a checkpointed run rejoins the
/// uninterrupted one.
pub fn check_plumbing() -> CheckReport {
    guard("plumbing", || {
        let grid = make_grid(64, 40.0)?;
        let u0 = ComplexField::from_fn(&grid, |x| {
            Complex64::from_polar(0.9 * (-x * x / 8.0).exp(), 0.4 * x)
        });
        let v0 = RealField::from_fn(&grid, |x| 0.6 * (-x * x / 8.0).exp());
        let state = CoupledState::new(u0, v0, 0.0)?;
        let params = unit_params();
        let config = SolverConfig { dt: 1e-3, ..Default::default() };

        let uninterrupted = integrate(&state, 0.1, &params, &config, 0, |_| {})?;
        let mid = integrate(&state, 0.04, &params, &config, 0, |_| {})?;

        let path = std::env::temp_dir().join(format!(
            "skw-verify-{}-{}.snap",
            std::process::id(),
            std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_nanos())
                .unwrap_or(0)
        ));
        write_snapshot(&path, &mid, &params)?;
        let (reloaded, reloaded_params) = read_snapshot(&path)?;
        let _ = std::fs::remove_file(&path);

        let bit_exact = reloaded_params == params
            && reloaded.t.to_bits() == mid.t.to_bits()
            && reloaded
                .u
                .samples()
                .iter()
                .zip(mid.u.samples())
                .all(|(a, b)| a.re.to_bits() == b.re.to_bits() && a.im.to_bits() == b.im.to_bits())
            && reloaded
                .v
                .samples()
                .iter()
                .zip(mid.v.samples())
                .all(|(a, b)| a.to_bits() == b.to_bits());

        let resumed = integrate(&reloaded, 0.1, &params, &config, 0, |_| {})?;
        let scale = uninterrupted.u.l2_norm() + uninterrupted.v.l2_norm();
        let mismatch = state_distance(&resumed, &uninterrupted) / scale;

        let passed = bit_exact && mismatch <= 1e-12;
        Ok((
            passed,
            format!(
                "snapshot round-trip bit-exact: {bit_exact}; \
                 checkpoint-resume mismatch {mismatch:.3e} (tolerance 1e-12)"
            ),
        ))
    })
}
