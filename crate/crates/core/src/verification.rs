//! Invariant suite behind `polyberg verify`.
//!
//! Every check reports the measured value next to its tolerance. Checks
//! that integrate over the grid fail on an under-resolved grid; a check
//! whose computation raises an [`Error`] is recorded as failed with the
//! error text rather than aborting the suite.

use std::f64::consts::{LN_2, PI};

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::calibration::{calibrate, CalibrationReport};
use crate::error::{Error, Result};
use crate::frames::{h_checks, necessary_condition, necessary_threshold};
use crate::halfplane::{GridSpec, HalfPlaneGrid, HalfPlanePoint, Measure};
use crate::laguerre::{laguerre_poly, GaussLaguerre};
use crate::multiplex::{random_channels, roundtrip, DecodeMethod, RoundTripMode};
use crate::polyspace::{basis_block, basis_e, kernel_true, kernel_true_columns, polyanalytic_degree, KernelSpec, KERNEL_MODES};
use crate::scalar::cx;
use crate::transforms::{ber_alpha, cross_admissibility, true_ber, true_ber_oracle, AnalyzerProfile, RPlusCoeffs, TrueBerMethod};

pub const SUITE_VERSION: &str = "polyberg-verify/1";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub laguerre_gram: f64,
    pub admissibility: f64,
    /// Relative deviation of the grid norm from `π‖f̂‖²`.
    pub isometry: f64,
    pub three_forms: f64,
    pub basis_gram: f64,
    pub kernel_closed_form: f64,
    pub kernel_methods: f64,
    pub reproducing: f64,
    pub codec: f64,
    pub h_lattice_zeros: f64,
    pub h_quasi_periodicity: f64,
    pub h_slope: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            laguerre_gram: 1e-8,
            admissibility: 1e-10,
            isometry: 1e-2,
            three_forms: 1e-9,
            basis_gram: 2e-2,
            kernel_closed_form: 1e-6,
            kernel_methods: 1e-3,
            reproducing: 1e-2,
            codec: 1e-3,
            h_lattice_zeros: 1e-10,
            h_quasi_periodicity: 1e-6,
            h_slope: 5e-2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    /// `None` when the computation itself failed.
    pub measured: Option<f64>,
    pub tolerance: f64,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub version: String,
    pub grid: GridSpec<f64>,
    pub seed: u64,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
    pub calibration: Option<CalibrationReport>,
    pub calibration_error: Option<String>,
}

impl SuiteReport {
    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

fn record(checks: &mut Vec<CheckResult>, name: &str, tolerance: f64, outcome: Result<(f64, String)>) {
    let result = match outcome {
        Ok((measured, detail)) => CheckResult {
            name: name.into(),
            passed: measured.is_finite() && measured <= tolerance,
            measured: Some(measured),
            tolerance,
            detail,
        },
        Err(e) => CheckResult { name: name.into(), measured: None, tolerance, passed: false, detail: e.to_string() },
    };
    checks.push(result);
}

fn pt(x: f64, s: f64) -> HalfPlanePoint<f64> {
    HalfPlanePoint { x, s }
}

fn rel(a: Complex<f64>, b: Complex<f64>) -> f64 {
    (a - b).norm() / b.norm()
}

fn random_signal(rng: &mut ChaCha8Rng) -> RPlusCoeffs<f64> {
    let modes = rng.random_range(1..=8);
    let coeffs = (0..modes).map(|_| cx(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
    RPlusCoeffs::new(coeffs).expect("finite coefficients")
}

fn laguerre_gram() -> Result<(f64, String)> {
    let rule = GaussLaguerre::new(128, 0.0)?;
    let mut worst = 0.0f64;
    for i in 0..=12 {
        for j in 0..=12 {
            let g = rule.integrate(|x: f64| laguerre_poly(i, 0.0, x).unwrap_or(f64::NAN) * laguerre_poly(j, 0.0, x).unwrap_or(f64::NAN));
            worst = worst.max((g - if i == j { 1.0 } else { 0.0 }).abs());
        }
    }
    Ok((worst, "max |<L_i, L_j> - δ_ij|, i, j <= 12, 128-node Gauss-Laguerre".into()))
}

fn admissibility() -> Result<(f64, String)> {
    let mut worst = 0.0f64;
    for i in 0..=4 {
        for j in 0..=4 {
            let v: f64 = cross_admissibility(&AnalyzerProfile::phi(i), &AnalyzerProfile::phi(j))?;
            worst = worst.max((v - if i == j { 0.5 } else { 0.0 }).abs());
        }
    }
    Ok((worst, "max |<φ_i, φ_j> - δ_ij/2|, i, j <= 4".into()))
}

fn isometry(grid: &HalfPlaneGrid<f64>, seed: u64) -> Result<(f64, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..4 {
        let f = random_signal(&mut rng);
        let norm = f.norm_sq();
        let samples = grid.sample(|p| ber_alpha(&f, 1.0, p).unwrap_or(cx(f64::NAN, 0.0)))?;
        worst = worst.max((grid.norm_sq_samples(&samples)? / (PI * norm) - 1.0).abs());
        for n in 1..=2 {
            let samples = grid.sample(|p| true_ber(&f, n, p))?;
            worst = worst.max((grid.norm_sq_samples(&samples)? / (PI * norm) - 1.0).abs());
        }
    }
    Ok((worst, "max |‖Berⁿ f̂‖² / (π‖f̂‖²) - 1| over 4 random signals, n <= 2".into()))
}

fn three_forms(seed: u64) -> Result<(f64, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let f = random_signal(&mut rng);
        let n = rng.random_range(0..=4);
        let z = pt(rng.random_range(-3.0..3.0), rng.random_range(0.2..3.0));
        let direct = true_ber(&f, n, z);
        for method in [TrueBerMethod::Orders, TrueBerMethod::Wavelet] {
            worst = worst.max(rel(true_ber_oracle(&f, n, z, method)?, direct));
        }
    }
    Ok((worst, "max relative disagreement of the derivative, orders and wavelet forms over 50 draws".into()))
}

fn degrees() -> Result<(f64, String)> {
    let probes: Vec<_> = [(0.0, 3.0), (2.0, 4.0), (-3.0, 3.5), (1.0, 5.0), (-1.0, 2.5)].iter().map(|&(x, s)| pt(x, s)).collect();
    let mut wrong = Vec::new();
    for n in 0..=3 {
        for m in 0..=2 {
            let d = polyanalytic_degree(|p| basis_e(n, m, p), &probes, 1e-4, 1e-3, 8)?;
            if d != Some(n + 1) {
                wrong.push(format!("e_({n},{m}) -> {d:?}"));
            }
        }
    }
    Ok((wrong.len() as f64, format!("count of e_(n,m), n <= 3, m <= 2, whose degree is not n + 1 {wrong:?}")))
}

/// Normalized basis samples `ẽ_{n,m}` on the grid, one column per `(n, m)`.
fn basis_columns(grid: &HalfPlaneGrid<f64>, order: usize, modes: usize) -> Vec<Vec<Complex<f64>>> {
    let blocks: Vec<_> = grid.nodes.iter().map(|&p| basis_block(order, modes, p)).collect();
    (0..order * modes).map(|i| blocks.iter().map(|b| b[i]).collect()).collect()
}

fn basis_gram(grid: &HalfPlaneGrid<f64>) -> Result<(f64, String)> {
    let columns = basis_columns(grid, 3, 4);
    let mut worst = 0.0f64;
    for i in 0..columns.len() {
        for j in i..columns.len() {
            let g = grid.inner_samples(&columns[i], &columns[j])?;
            worst = worst.max((g - if i == j { 1.0 } else { 0.0 }).norm());
        }
    }
    Ok((worst, "max |<ẽ_(n,m), ẽ_(n',m')> - δ| on the grid, n <= 2, m <= 3".into()))
}

const MODERATE: [(f64, f64); 4] = [(0.0, 1.0), (0.8, 0.6), (-1.2, 1.5), (0.3, 2.4)];

fn kernel_closed_form() -> Result<(f64, String)> {
    let spec = KernelSpec::basis_sum(0, KERNEL_MODES)?;
    let mut worst = 0.0f64;
    for &(x1, s1) in &MODERATE {
        for &(x2, s2) in &MODERATE {
            let (z, w) = (pt(x1, s1), pt(x2, s2));
            let d = z.z() - w.z().conj();
            worst = worst.max(rel(kernel_true(spec, z, w)?.value, -(d * d).inv() / PI));
        }
    }
    Ok((worst, format!("K⁰ basis sum ({KERNEL_MODES} modes) vs -(1/π)(z - w̄)⁻²")))
}

fn kernel_methods() -> Result<(f64, String)> {
    let mut worst = 0.0f64;
    for n in 0..=2 {
        let sum = KernelSpec::basis_sum(n, KERNEL_MODES)?;
        for &(x1, s1) in &MODERATE {
            for &(x2, s2) in &MODERATE {
                let (z, w) = (pt(x1, s1), pt(x2, s2));
                worst = worst.max(rel(kernel_true(KernelSpec::rodrigues(n), z, w)?.value, kernel_true(sum, z, w)?.value));
            }
        }
    }
    Ok((worst, "Kⁿ basis sum vs closed form, n <= 2".into()))
}

fn reproducing(grid: &HalfPlaneGrid<f64>) -> Result<(f64, String)> {
    let probes = [pt(1.2, 1.0), pt(0.0, 1.5), pt(-0.97, 0.71)];
    let columns = basis_columns(grid, 3, 3);
    let mut worst = 0.0f64;
    for n in 0..=2 {
        let kernels = kernel_true_columns(KernelSpec::basis_sum(n, KERNEL_MODES)?, &grid.nodes, &probes)?;
        for m in 0..=2 {
            let f = &columns[n * 3 + m];
            for (z, k) in probes.iter().zip(&kernels) {
                let want = basis_block(n + 1, 3, *z)[n * 3 + m];
                worst = worst.max(rel(grid.inner_samples(f, k)?, want));
            }
        }
    }
    Ok((worst, "max relative error of <e_(n,m), Kⁿ(·, z)> against e_(n,m)(z), n, m <= 2".into()))
}

fn codec(grid: &HalfPlaneGrid<f64>, seed: u64) -> Result<(f64, String)> {
    let f = random_channels::<f64>(3, 8, seed)?;
    let exact = roundtrip(&f, RoundTripMode::Coefficient, None, DecodeMethod::default(), seed)?;
    let sampled = roundtrip(&f, RoundTripMode::Sampled, Some(grid), DecodeMethod::Galerkin, seed)?;
    let worst = [exact.max_error(), exact.max_crosstalk(), sampled.max_error(), sampled.max_crosstalk()]
        .into_iter()
        .fold(0.0, f64::max);
    Ok((
        worst,
        format!(
            "n = 3, M = 8: coefficient error {:.1e}, crosstalk {:.1e}; sampled error {:.2e}, crosstalk {:.2e}",
            exact.max_error(),
            exact.max_crosstalk(),
            sampled.max_error(),
            sampled.max_crosstalk()
        ),
    ))
}

fn h_lattice() -> Result<(f64, String)> {
    let (a, b) = (2.0f64, 1.0);
    let mut worst = 0.0f64;
    for m in -5..=5 {
        for k in -8..=8 {
            let scale = a.powi(m);
            worst = worst.max(crate::frames::h_eval(pt(scale * b * k as f64, scale), a, b, 60)?.norm());
        }
    }
    Ok((worst, "max |h(z)| on Γ(2, 1), |m| <= 5, |k| <= 8".into()))
}

fn h_probes() -> Vec<HalfPlanePoint<f64>> {
    (0..20).map(|j| pt(-1.3 + 0.29 * j as f64, 0.37 + 0.083 * j as f64)).collect()
}

fn condition_flips() -> Result<(f64, String)> {
    let cases = [(9.0, 0, 0.0, true), (10.0, 0, 0.0, false), (18.0, 1, 0.0, true), (19.0, 1, 0.0, false)];
    let mut wrong = Vec::new();
    for (b, n, alpha, want) in cases {
        if necessary_condition(2.0, b, n, alpha)?.satisfied != want {
            wrong.push(format!("a = 2, b = {b}, n = {n}"));
        }
    }
    let weighted = PI / LN_2;
    if !necessary_condition(2.0, 0.99 * weighted, 0, 1.0)?.satisfied || necessary_condition(2.0, 1.01 * weighted, 0, 1.0)?.satisfied
    {
        wrong.push("α = 1 threshold".into());
    }
    Ok((
        wrong.len() as f64,
        format!("wrong side of b ln a < 2π(n+1)/(α+1) (α = 1 threshold {}): {wrong:?}", necessary_threshold(0, 1.0f64)),
    ))
}

/// Runs every check on the grid described by `spec` (plain measure).
pub fn run_suite(spec: GridSpec<f64>, tol: &Tolerances, seed: u64) -> Result<SuiteReport> {
    let grid = spec.build(Measure::Plain)?;
    let mut checks = Vec::new();
    record(&mut checks, "laguerre_gram", tol.laguerre_gram, laguerre_gram());
    record(&mut checks, "admissibility", tol.admissibility, admissibility());
    record(&mut checks, "isometry", tol.isometry, isometry(&grid, seed));
    record(&mut checks, "three_forms", tol.three_forms, three_forms(seed));
    record(&mut checks, "polyanalytic_degree", 0.0, degrees());
    record(&mut checks, "basis_gram", tol.basis_gram, basis_gram(&grid));
    record(&mut checks, "kernel_closed_form", tol.kernel_closed_form, kernel_closed_form());
    record(&mut checks, "kernel_methods", tol.kernel_methods, kernel_methods());
    record(&mut checks, "reproducing", tol.reproducing, reproducing(&grid));
    record(&mut checks, "codec", tol.codec, codec(&grid, seed));
    record(&mut checks, "h_lattice_zeros", tol.h_lattice_zeros, h_lattice());
    let h = h_checks(2.0, 1.0, 200, &h_probes());
    record(
        &mut checks,
        "h_quasi_periodicity",
        tol.h_quasi_periodicity,
        h.clone().map(|r| (r.quasi_periodicity, "max |h(2z) + e^{-2π} h(z)| / |h(z)|".into())),
    );
    record(
        &mut checks,
        "h_slope",
        tol.h_slope,
        h.map(|r| (r.slope_rel_error, format!("slope of ln|h(is)| {:.4} vs {:.4}", r.slope, r.expected_slope))),
    );
    record(&mut checks, "condition_flips", 0.0, condition_flips());
    let (calibration, calibration_error) = match calibrate(spec) {
        Ok(c) => (Some(c), None),
        Err(e @ (Error::Accuracy { .. } | Error::NumericOverflow { .. } | Error::PoleProximity { .. })) => {
            (None, Some(e.to_string()))
        }
        Err(e) => return Err(e),
    };
    let passed = checks.iter().all(|c| c.passed);
    Ok(SuiteReport { version: SUITE_VERSION.into(), grid: spec, seed, passed, checks, calibration, calibration_error })
}
