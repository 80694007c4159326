//! Run configuration, initial-condition presets, and on-disk formats.
//!
//! Three file formats live here:
//!
//! * a flat `key = value` run configuration ([`parse_config`],
//!   [`serialize_config`]), diff-friendly by design;
//! * the `SKW1` binary snapshot, a little-endian dump of one state plus the
//!   coefficients that produced it ([`write_snapshot`], [`read_snapshot`]),
//!   lossless down to the bit pattern;
//! * CSV reports for diagnostics, interval decompositions, and ratio
//!   ensembles, with floats printed to 17 significant digits so they reparse
//!   exactly.
//!
//! Randomized presets draw from a ChaCha8 generator seeded by a single
//! `u64`, so a run is reproducible within a build from `(config, seed)`
//! alone. Across implementations the draw sequence is documented (mode
//! index ascending, real part before imaginary) but bit-exact agreement is
//! not promised.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bilinear::EnsembleReport;
use crate::dynamics::{CoupledState, Diagnostics, SolverConfig};
use crate::globalization::IntervalReport;
use crate::grid::{ComplexField, Grid, RealField};
use crate::propagators::PhysParams;
use crate::spectral::DealiasRule;
use crate::{Complex64, Error, Result};

/// Environment variable naming the default output root for runs whose
/// configuration does not set `output_dir`.
pub const OUTPUT_ROOT_VAR: &str = "SKW_OUTPUT_ROOT";

/// Default output root: `$SKW_OUTPUT_ROOT`, or the working directory.
pub fn output_root() -> PathBuf {
    match std::env::var(OUTPUT_ROOT_VAR) {
        Ok(dir) if !dir.is_empty() => PathBuf::from(dir),
        _ => PathBuf::from("."),
    }
}

/// Initial-condition preset: a name, its numeric arguments, and an optional
/// seed overriding the run-level one. Recognized presets:
///
/// * `gaussian(a, x0, k0)` — `a·exp(−(x−x0)²)·exp(i k0 x)`;
/// * `sech(a, x0)` — `a·sech(x−x0)`;
/// * `random_bandlimited(a, kmax, [seed])` — `a` times a sum of Fourier
///   modes with integer index `|m| ≤ kmax` whose coefficients are drawn
///   uniformly from the complex unit square.
///
/// Real fields take the real part of the same construction, so `gaussian`
/// with a nonzero `k0` becomes a cosine-modulated bump.
#[derive(Debug, Clone, PartialEq)]
pub struct IcPreset {
    pub name: String,
    pub args: Vec<f64>,
    pub seed: Option<u64>,
}

impl IcPreset {
    pub fn gaussian(a: f64, x0: f64, k0: f64) -> Self {
        IcPreset { name: "gaussian".into(), args: vec![a, x0, k0], seed: None }
    }

    pub fn sech(a: f64, x0: f64) -> Self {
        IcPreset { name: "sech".into(), args: vec![a, x0], seed: None }
    }

    pub fn random_bandlimited(a: f64, kmax: usize, seed: Option<u64>) -> Self {
        IcPreset { name: "random_bandlimited".into(), args: vec![a, kmax as f64], seed }
    }

    /// Checks the name and arity; rejections carry no line number.
    pub fn validate(&self) -> Result<()> {
        let arity_err = |want: &str| {
            Error::config(
                0,
                format!("preset '{}' takes {want}, got {} arguments", self.name, self.args.len()),
            )
        };
        match self.name.as_str() {
            "gaussian" => {
                if self.args.len() != 3 {
                    return Err(arity_err("3 arguments (a, x0, k0)"));
                }
                if self.seed.is_some() {
                    return Err(Error::config(0, "preset 'gaussian' takes no seed"));
                }
            }
            "sech" => {
                if self.args.len() != 2 {
                    return Err(arity_err("2 arguments (a, x0)"));
                }
                if self.seed.is_some() {
                    return Err(Error::config(0, "preset 'sech' takes no seed"));
                }
            }
            "random_bandlimited" => {
                if self.args.len() != 2 {
                    return Err(arity_err("2 arguments (a, kmax) plus an optional seed"));
                }
                let kmax = self.args[1];
                if !(kmax.is_finite() && kmax >= 0.0 && kmax.fract() == 0.0) {
                    return Err(Error::config(
                        0,
                        format!("kmax must be a nonnegative integer, got {kmax}"),
                    ));
                }
            }
            other => {
                return Err(Error::config(0, format!("unknown initial-condition preset '{other}'")))
            }
        }
        if let Some(bad) = self.args.iter().find(|a| !a.is_finite()) {
            return Err(Error::config(0, format!("preset argument must be finite, got {bad}")));
        }
        Ok(())
    }
}

impl std::fmt::Display for IcPreset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}(", self.name)?;
        for (i, a) in self.args.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{a}")?;
        }
        if let Some(seed) = self.seed {
            write!(f, ", {seed}")?;
        }
        write!(f, ")")
    }
}

fn parse_preset(text: &str) -> std::result::Result<IcPreset, String> {
    let text = text.trim();
    let open = text.find('(').ok_or_else(|| format!("expected 'name(args...)', got '{text}'"))?;
    if !text.ends_with(')') {
        return Err(format!("expected 'name(args...)', got '{text}'"));
    }
    let name = text[..open].trim().to_string();
    let inner = text[open + 1..text.len() - 1].trim();
    let mut tokens: Vec<&str> = if inner.is_empty() {
        Vec::new()
    } else {
        inner.split(',').map(str::trim).collect()
    };

    // The optional trailing seed of random_bandlimited is kept as an exact
    // integer rather than going through f64.
    let mut seed = None;
    if name == "random_bandlimited" && tokens.len() == 3 {
        let tok = tokens.pop().expect("len checked");
        seed = Some(
            tok.parse::<u64>()
                .map_err(|_| format!("seed must be an unsigned integer, got '{tok}'"))?,
        );
    }

    let mut args = Vec::with_capacity(tokens.len());
    for tok in tokens {
        let v: f64 =
            tok.parse().map_err(|_| format!("malformed preset argument '{tok}'"))?;
        args.push(v);
    }
    let preset = IcPreset { name, args, seed };
    preset.validate().map_err(|e| match e {
        Error::Config { msg, .. } => msg,
        other => other.to_string(),
    })?;
    Ok(preset)
}

/// Builds the complex field a preset describes. `default_seed` feeds
/// `random_bandlimited` when the descriptor carries no seed of its own.
pub fn make_initial_condition(
    preset: &IcPreset,
    grid: &Arc<Grid>,
    default_seed: u64,
) -> Result<ComplexField> {
    preset.validate()?;
    match preset.name.as_str() {
        "gaussian" => {
            let (a, x0, k0) = (preset.args[0], preset.args[1], preset.args[2]);
            Ok(ComplexField::from_fn(grid, |x| {
                let envelope = a * (-(x - x0) * (x - x0)).exp();
                envelope * Complex64::new(0.0, k0 * x).exp()
            }))
        }
        "sech" => {
            let (a, x0) = (preset.args[0], preset.args[1]);
            Ok(ComplexField::from_fn(grid, |x| Complex64::new(a / (x - x0).cosh(), 0.0)))
        }
        "random_bandlimited" => {
            let a = preset.args[0];
            let kmax = preset.args[1] as usize;
            if 2 * kmax >= grid.n() {
                return Err(Error::InvalidGrid(format!(
                    "band |m| <= {kmax} does not fit a grid of {} points",
                    grid.n()
                )));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(preset.seed.unwrap_or(default_seed));
            let coeffs: Vec<Complex64> = (-(kmax as i64)..=kmax as i64)
                .map(|_| {
                    let re = rng.gen_range(-1.0..1.0);
                    let im = rng.gen_range(-1.0..1.0);
                    Complex64::new(re, im)
                })
                .collect();
            let fundamental = std::f64::consts::TAU / grid.length();
            Ok(ComplexField::from_fn(grid, |x| {
                let mut sum = Complex64::new(0.0, 0.0);
                for (offset, c) in coeffs.iter().enumerate() {
                    let m = offset as f64 - kmax as f64;
                    sum += c * Complex64::new(0.0, m * fundamental * x).exp();
                }
                a * sum
            }))
        }
        _ => unreachable!("validate filters unknown presets"),
    }
}

/// Real-field counterpart: the real part of [`make_initial_condition`].
pub fn make_initial_condition_real(
    preset: &IcPreset,
    grid: &Arc<Grid>,
    default_seed: u64,
) -> Result<RealField> {
    let complex = make_initial_condition(preset, grid, default_seed)?;
    RealField::new(grid, complex.samples().iter().map(|c| c.re).collect())
}

/// One run, fully specified: coefficients, grid, stepper, horizon, initial
/// data, and where the outputs go.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: PhysParams,
    pub n: usize,
    pub length: f64,
    pub solver: SolverConfig,
    pub t_end: f64,
    pub ic_u: IcPreset,
    pub ic_v: IcPreset,
    pub seed: u64,
    pub output_dir: String,
    pub cadence: usize,
}

impl Default for RunConfig {
    /// The documented defaults: unit coefficients, a 256-point grid of
    /// length 100, `dt = 1e-3` with the 1/2 dealias rule and every term on,
    /// horizon 1, Gaussian data, seed 0, diagnostics every 100 steps, and
    /// outputs under [`output_root`].
    fn default() -> Self {
        RunConfig {
            params: PhysParams { alpha: 1.0, beta: 1.0, gamma: 1.0, delta: 1.0, epsilon: 1.0 },
            n: 256,
            length: 100.0,
            solver: SolverConfig::default(),
            t_end: 1.0,
            ic_u: IcPreset::gaussian(1.0, 0.0, 0.0),
            ic_v: IcPreset::gaussian(0.5, 0.0, 0.0),
            seed: 0,
            output_dir: output_root().display().to_string(),
            cadence: 100,
        }
    }
}

impl RunConfig {
    pub fn grid(&self) -> Result<Arc<Grid>> {
        Grid::new(self.n, self.length)
    }

    /// Materializes the initial state at `t = 0` from the two presets.
    pub fn initial_state(&self) -> Result<CoupledState> {
        let grid = self.grid()?;
        let u = make_initial_condition(&self.ic_u, &grid, self.seed)?;
        let v = make_initial_condition_real(&self.ic_v, &grid, self.seed)?;
        CoupledState::new(u, v, 0.0)
    }
}

fn parse_number<T: std::str::FromStr>(
    line: usize,
    key: &str,
    value: &str,
    kind: &str,
) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::config(line, format!("'{key}' expects {kind}, got '{value}'")))
}

fn parse_finite(line: usize, key: &str, value: &str) -> Result<f64> {
    let v: f64 = parse_number(line, key, value, "a number")?;
    if !v.is_finite() {
        return Err(Error::config(line, format!("'{key}' must be finite, got '{value}'")));
    }
    Ok(v)
}

fn parse_bool(line: usize, key: &str, value: &str) -> Result<bool> {
    match value {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(Error::config(line, format!("'{key}' expects true or false, got '{value}'"))),
    }
}

/// Parses a flat `key = value` configuration. Blank lines and `#` comments
/// are skipped; every other line must assign a known key exactly once.
/// Values are validated as they are read, so malformed numbers, a zero
/// `delta`, an unusable grid, or an unknown preset are all rejected with
/// the offending line number. Keys that never appear keep the defaults of
/// [`RunConfig::default`].
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let mut cfg = RunConfig::default();
    let mut seen: BTreeSet<String> = BTreeSet::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::config(line_no, format!("expected 'key = value', got '{line}'")))?;
        let key = key.trim();
        let value = value.trim();
        if value.is_empty() {
            return Err(Error::config(line_no, format!("empty value for '{key}'")));
        }
        if !seen.insert(key.to_string()) {
            return Err(Error::config(line_no, format!("duplicate key '{key}'")));
        }
        match key {
            "alpha" => cfg.params.alpha = parse_finite(line_no, key, value)?,
            "beta" => cfg.params.beta = parse_finite(line_no, key, value)?,
            "gamma" => cfg.params.gamma = parse_finite(line_no, key, value)?,
            "delta" => {
                let d = parse_finite(line_no, key, value)?;
                if d == 0.0 {
                    return Err(Error::config(line_no, "delta must be nonzero".to_string()));
                }
                cfg.params.delta = d;
            }
            "epsilon" => cfg.params.epsilon = parse_finite(line_no, key, value)?,
            "n" => {
                let n: usize = parse_number(line_no, key, value, "a positive even integer")?;
                if n < 4 || !n.is_multiple_of(2) {
                    return Err(Error::config(
                        line_no,
                        format!("'n' must be an even integer of at least 4, got {n}"),
                    ));
                }
                cfg.n = n;
            }
            "length" => {
                let length = parse_finite(line_no, key, value)?;
                if length <= 0.0 {
                    return Err(Error::config(line_no, format!("'length' must be positive, got {length}")));
                }
                cfg.length = length;
            }
            "dt" => {
                let dt = parse_finite(line_no, key, value)?;
                if dt <= 0.0 {
                    return Err(Error::config(line_no, format!("'dt' must be positive, got {dt}")));
                }
                cfg.solver.dt = dt;
            }
            "dealias" => {
                cfg.solver.dealias_rule = match value {
                    "half" => DealiasRule::Half,
                    "two-thirds" => DealiasRule::TwoThirds,
                    _ => {
                        return Err(Error::config(
                            line_no,
                            format!("'dealias' expects half or two-thirds, got '{value}'"),
                        ))
                    }
                };
            }
            "coupling_uv" => cfg.solver.terms.coupling_uv = parse_bool(line_no, key, value)?,
            "cubic_u" => cfg.solver.terms.cubic_u = parse_bool(line_no, key, value)?,
            "burgers_v" => cfg.solver.terms.burgers_v = parse_bool(line_no, key, value)?,
            "source_u2" => cfg.solver.terms.source_u2 = parse_bool(line_no, key, value)?,
            "t_end" => {
                let t = parse_finite(line_no, key, value)?;
                if t < 0.0 {
                    return Err(Error::config(line_no, format!("'t_end' must be nonnegative, got {t}")));
                }
                cfg.t_end = t;
            }
            "seed" => cfg.seed = parse_number(line_no, key, value, "an unsigned integer")?,
            "ic_u" => {
                cfg.ic_u = parse_preset(value).map_err(|msg| Error::config(line_no, msg))?
            }
            "ic_v" => {
                cfg.ic_v = parse_preset(value).map_err(|msg| Error::config(line_no, msg))?
            }
            "output_dir" => cfg.output_dir = value.to_string(),
            "cadence" => cfg.cadence = parse_number(line_no, key, value, "an unsigned integer")?,
            _ => return Err(Error::config(line_no, format!("unknown key '{key}'"))),
        }
    }
    Ok(cfg)
}

/// Writes every key explicitly, in a fixed order, with `Display`-formatted
/// floats (shortest exact representation), so the output reparses to an
/// equal `RunConfig`.
pub fn serialize_config(cfg: &RunConfig) -> String {
    let mut out = String::new();
    let p = &cfg.params;
    let _ = writeln!(out, "alpha = {}", p.alpha);
    let _ = writeln!(out, "beta = {}", p.beta);
    let _ = writeln!(out, "gamma = {}", p.gamma);
    let _ = writeln!(out, "delta = {}", p.delta);
    let _ = writeln!(out, "epsilon = {}", p.epsilon);
    let _ = writeln!(out, "n = {}", cfg.n);
    let _ = writeln!(out, "length = {}", cfg.length);
    let _ = writeln!(out, "dt = {}", cfg.solver.dt);
    let rule = match cfg.solver.dealias_rule {
        DealiasRule::Half => "half",
        DealiasRule::TwoThirds => "two-thirds",
    };
    let _ = writeln!(out, "dealias = {rule}");
    let t = &cfg.solver.terms;
    let _ = writeln!(out, "coupling_uv = {}", t.coupling_uv);
    let _ = writeln!(out, "cubic_u = {}", t.cubic_u);
    let _ = writeln!(out, "burgers_v = {}", t.burgers_v);
    let _ = writeln!(out, "source_u2 = {}", t.source_u2);
    let _ = writeln!(out, "t_end = {}", cfg.t_end);
    let _ = writeln!(out, "seed = {}", cfg.seed);
    let _ = writeln!(out, "ic_u = {}", cfg.ic_u);
    let _ = writeln!(out, "ic_v = {}", cfg.ic_v);
    let _ = writeln!(out, "output_dir = {}", cfg.output_dir);
    let _ = writeln!(out, "cadence = {}", cfg.cadence);
    out
}

pub const SNAPSHOT_MAGIC: [u8; 4] = *b"SKW1";
pub const SNAPSHOT_VERSION: u32 = 1;

fn snapshot_bytes(state: &CoupledState, params: &PhysParams) -> Vec<u8> {
    let grid = state.grid();
    let n = grid.n();
    let mut bytes = Vec::with_capacity(72 + 24 * n);
    bytes.extend_from_slice(&SNAPSHOT_MAGIC);
    bytes.extend_from_slice(&SNAPSHOT_VERSION.to_le_bytes());
    bytes.extend_from_slice(&(n as u64).to_le_bytes());
    bytes.extend_from_slice(&grid.length().to_le_bytes());
    bytes.extend_from_slice(&state.t.to_le_bytes());
    for value in [params.alpha, params.beta, params.gamma, params.delta, params.epsilon] {
        bytes.extend_from_slice(&value.to_le_bytes());
    }
    for c in state.u.samples() {
        bytes.extend_from_slice(&c.re.to_le_bytes());
        bytes.extend_from_slice(&c.im.to_le_bytes());
    }
    for &s in state.v.samples() {
        bytes.extend_from_slice(&s.to_le_bytes());
    }
    bytes
}

fn read_f64(bytes: &[u8], offset: usize) -> f64 {
    f64::from_le_bytes(bytes[offset..offset + 8].try_into().expect("length checked"))
}

fn snapshot_from_bytes(bytes: &[u8]) -> Result<(CoupledState, PhysParams)> {
    if bytes.len() < 72 {
        return Err(Error::Format(format!(
            "truncated snapshot: {} bytes, header alone needs 72",
            bytes.len()
        )));
    }
    if bytes[..4] != SNAPSHOT_MAGIC {
        return Err(Error::Format(format!(
            "bad magic {:?}, expected {:?}",
            &bytes[..4],
            SNAPSHOT_MAGIC
        )));
    }
    let version = u32::from_le_bytes(bytes[4..8].try_into().expect("length checked"));
    if version != SNAPSHOT_VERSION {
        return Err(Error::Format(format!(
            "unsupported snapshot version {version}, expected {SNAPSHOT_VERSION}"
        )));
    }
    let n_raw = u64::from_le_bytes(bytes[8..16].try_into().expect("length checked"));
    let expected = 72u128 + 24 * n_raw as u128;
    if bytes.len() as u128 != expected {
        return Err(Error::Format(format!(
            "expected {expected} bytes for n = {n_raw}, got {}",
            bytes.len()
        )));
    }
    let n = n_raw as usize;
    let length = read_f64(bytes, 16);
    let t = read_f64(bytes, 24);
    let params = PhysParams::new(
        read_f64(bytes, 32),
        read_f64(bytes, 40),
        read_f64(bytes, 48),
        read_f64(bytes, 56),
        read_f64(bytes, 64),
    )?;
    let grid = Grid::new(n, length)?;
    let u_base = 72;
    let u: Vec<Complex64> = (0..n)
        .map(|j| Complex64::new(read_f64(bytes, u_base + 16 * j), read_f64(bytes, u_base + 16 * j + 8)))
        .collect();
    let v_base = u_base + 16 * n;
    let v: Vec<f64> = (0..n).map(|j| read_f64(bytes, v_base + 8 * j)).collect();
    let state = CoupledState::new(ComplexField::new(&grid, u)?, RealField::new(&grid, v)?, t)?;
    Ok((state, params))
}

/// Writes one state and its coefficients in the `SKW1` layout: the magic,
/// a format version, `n`, the domain length, the time, the five
/// coefficients, `u` as interleaved re/im pairs, then `v`, all as
/// little-endian 64-bit values (header counters aside).
pub fn write_snapshot(
    path: impl AsRef<Path>,
    state: &CoupledState,
    params: &PhysParams,
) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, snapshot_bytes(state, params))
        .map_err(|e| Error::io(path.display().to_string(), e))
}

/// Reads a snapshot back. The byte length must match the header's `n`
/// exactly; wrong magic, an unknown version, or a size mismatch are format
/// errors, and the recovered samples are bit-identical to what was written.
pub fn read_snapshot(path: impl AsRef<Path>) -> Result<(CoupledState, PhysParams)> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    snapshot_from_bytes(&bytes)
}

/// One diagnostics record. Plain integrations have no decomposition
/// channel, so their `l2_w` is zero; interval runs fill it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagnosticsRow {
    pub t: f64,
    pub mass: f64,
    pub momentum: f64,
    pub energy: f64,
    pub l2_u: f64,
    pub l2_v: f64,
    pub l2_w: f64,
}

impl DiagnosticsRow {
    pub fn from_diagnostics(d: &Diagnostics) -> Self {
        DiagnosticsRow {
            t: d.t,
            mass: d.conserved.mass,
            momentum: d.conserved.momentum,
            energy: d.conserved.energy,
            l2_u: d.l2_u,
            l2_v: d.l2_v,
            l2_w: 0.0,
        }
    }
}

pub const DIAGNOSTICS_HEADER: &str = "t,mass,momentum,energy,l2_u,l2_v,l2_w";

/// `{:.16e}`: 17 significant digits, enough for every f64 to survive a
/// print/parse round trip.
fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::io(path.display().to_string(), e))
}

/// Writes the diagnostics CSV: the fixed header, then one row per record.
pub fn write_diagnostics_csv(path: impl AsRef<Path>, rows: &[DiagnosticsRow]) -> Result<()> {
    let mut out = String::from(DIAGNOSTICS_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            fmt_f64(r.t),
            fmt_f64(r.mass),
            fmt_f64(r.momentum),
            fmt_f64(r.energy),
            fmt_f64(r.l2_u),
            fmt_f64(r.l2_v),
            fmt_f64(r.l2_w),
        );
    }
    write_text(path.as_ref(), &out)
}

pub const INTERVAL_HEADER: &str =
    "interval,t_interval,w_norm_end,v_norm_end,z_norm_end,identity_residual";

/// Writes per-window decomposition reports, one row per interval.
pub fn write_interval_csv(path: impl AsRef<Path>, reports: &[IntervalReport]) -> Result<()> {
    let mut out = String::from(INTERVAL_HEADER);
    out.push('\n');
    for r in reports {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            r.interval_index,
            fmt_f64(r.t_interval),
            fmt_f64(r.w_norm_end),
            fmt_f64(r.v_norm_end),
            fmt_f64(r.z_norm_end),
            fmt_f64(r.identity_residual),
        );
    }
    write_text(path.as_ref(), &out)
}

pub const ENSEMBLE_HEADER: &str = "case,seed,n_samples,max_ratio,argmax_index";

/// Writes ratio-ensemble reports, one row per (case, seed) run.
pub fn write_ensemble_csv(path: impl AsRef<Path>, reports: &[EnsembleReport]) -> Result<()> {
    let mut out = String::from(ENSEMBLE_HEADER);
    out.push('\n');
    for r in reports {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            r.case.name(),
            r.seed,
            r.n_samples,
            fmt_f64(r.max_ratio),
            r.argmax_index,
        );
    }
    write_text(path.as_ref(), &out)
}
