//! Measured relation constants.
//!
//! Each object has one normative definition; every constant relating two
//! of them (isometry factors, normalizations, kernel prefactors) is measured
//! here against a brute-force evaluation and recorded with its reference
//! value. Tests assert that the measurements stay put.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::halfplane::{GridSpec, HalfPlaneGrid, HalfPlanePoint, Measure};
use crate::laguerre::GaussLaguerre;
use crate::polyspace::{basis_e, psi_beta, psi_beta_printed, rodrigues_constants};
use crate::scalar::cx;
use crate::transforms::{
    admissibility, ber_alpha, cwt, true_ber, true_ber_literal, true_ber_oracle, AnalyzerProfile, RPlusCoeffs,
    TrueBerMethod,
};

/// Bumped whenever a definition or measurement procedure changes.
pub const CALIBRATION_VERSION: &str = "polyberg-calibration/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationEntry {
    pub name: String,
    pub measured: Complex<f64>,
    /// Closed-form value the measurement is compared with.
    pub reference: Complex<f64>,
    /// `|measured - reference| / |reference|`
    pub rel_dev: f64,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationReport {
    pub version: String,
    pub grid: GridSpec<f64>,
    pub entries: Vec<CalibrationEntry>,
}

impl CalibrationReport {
    pub fn get(&self, name: &str) -> Option<&CalibrationEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    pub fn max_rel_dev(&self) -> f64 {
        self.entries.iter().map(|e| e.rel_dev).fold(0.0, f64::max)
    }
}

fn entry(name: impl Into<String>, measured: Complex<f64>, reference: Complex<f64>, note: &str) -> CalibrationEntry {
    let rel_dev = (measured - reference).norm() / reference.norm().max(f64::MIN_POSITIVE);
    CalibrationEntry { name: name.into(), measured, reference, rel_dev, note: note.into() }
}

fn real(v: f64) -> Complex<f64> {
    cx(v, 0.0)
}

/// `Ber(M_{-μ} D_{1/η} f̂)(z)` by Gauss–Laguerre quadrature, with
/// `(M_{-μ} D_{1/η} f̂)(t) = e^{iμt} η^{1/2} f̂(ηt)`. Accurate while
/// `|x + μ| < η/2 + s`; faster oscillation needs far more nodes.
pub fn ber_affine_quadrature(fhat: &RPlusCoeffs<f64>, mu: f64, eta: f64, z: HalfPlanePoint<f64>) -> Result<Complex<f64>> {
    if !(eta > 0.0) || !eta.is_finite() || !mu.is_finite() {
        return invalid(format!("affine parameters need eta > 0 and finite mu, got ({mu}, {eta})"));
    }
    // integrand = η t E(ηt) e^{i(x+μ)t} e^{-(η/2+s)t}, E the Laguerre envelope
    let rate = 0.5 * eta + z.s;
    let rule = GaussLaguerre::cached(96, 1.0)?;
    let mut acc = cx(0.0, 0.0);
    for (&u, &w) in rule.nodes.iter().zip(&rule.weights) {
        let t = u / rate;
        let env = crate::halfplane::RPlusFunction::envelope(fhat, eta * t);
        acc += env * cx(0.0, (z.x + mu) * t).exp() * w;
    }
    Ok(acc * eta / (rate * rate))
}

/// `ln|Ber(M_{-μ} D_{1/η} f̂)(z) / Ber f̂((z+μ)/η)| / ln η`.
pub fn intertwining_exponent(fhat: &RPlusCoeffs<f64>, mu: f64, eta: f64, z: HalfPlanePoint<f64>) -> Result<Complex<f64>> {
    let lhs = ber_affine_quadrature(fhat, mu, eta, z)?;
    let moved = HalfPlanePoint::new((z.x + mu) / eta, z.s / eta)?;
    let rhs = ber_alpha(fhat, 1.0, moved)?;
    Ok((lhs / rhs).ln() / eta.ln())
}

fn grid_norm(grid: &HalfPlaneGrid<f64>, f: impl Fn(HalfPlanePoint<f64>) -> Complex<f64> + Sync) -> Result<f64> {
    grid.norm_sq_samples(&grid.sample(f)?)
}

/// Runs every measurement on the grid described by `spec`.
pub fn calibrate(spec: GridSpec<f64>) -> Result<CalibrationReport> {
    let plain = spec.build(Measure::Plain)?;
    let affine = plain.with_measure(Measure::Affine);
    let pi = std::f64::consts::PI;
    let mut entries = Vec::new();

    let probe = RPlusCoeffs::new(vec![cx(1.0, 0.0), cx(-0.4, 0.3), cx(0.2, 0.0), cx(0.0, -0.1)])?;
    let probe_norm = probe.norm_sq();
    let ber_norm = grid_norm(&plain, |p| ber_alpha(&probe, 1.0, p).unwrap_or(cx(f64::NAN, 0.0)))?;
    entries.push(entry("bergman_isometry", real(ber_norm / probe_norm), real(pi), "‖Ber f̂‖²_{dxds} / ‖f̂‖²"));
    for n in 1..=3 {
        let v = grid_norm(&plain, |p| true_ber(&probe, n, p))?;
        entries.push(entry(
            format!("true_ber_isometry_n{n}"),
            real(v / probe_norm),
            real(pi),
            "‖Berⁿ f̂‖²_{dxds} / ‖f̂‖²",
        ));
    }
    for m in 0..4 {
        let v = grid_norm(&plain, |p| basis_e(1, m, p))?;
        entries.push(entry(format!("basis_norm_m{m}"), real(v / (pi * (m + 1) as f64)), real(1.0), "‖e_{1,m}‖² / (π(m+1))"));
    }

    let l0 = RPlusCoeffs::mode(0);
    let phi0 = AnalyzerProfile::phi(0);
    let w_norm = grid_norm(&affine, |p| cwt(&l0, &phi0, p.x, p.s).unwrap_or(cx(f64::NAN, 0.0)))?;
    let adm = admissibility(&phi0)?;
    entries.push(entry(
        "wavelet_constant",
        real(w_norm / (adm * l0.norm_sq())),
        real(2.0 * pi),
        "‖W_Φ₀ f̂‖²_{s⁻²dxds} / (admissibility · ‖f̂‖²)",
    ));
    for n in 0..5 {
        entries.push(entry(
            format!("admissibility_phi{n}"),
            real(admissibility(&AnalyzerProfile::phi(n))?),
            real(0.5),
            "∫ (ℱΦ_n)² t⁻¹ dt",
        ));
    }

    let z = HalfPlanePoint::new(0.3, 1.1)?;
    for n in 1..=4 {
        let ratio = true_ber(&probe, n, z) / true_ber_literal(&probe, n, z);
        entries.push(entry(
            format!("literal_ratio_n{n}"),
            ratio,
            real((-4.0f64).powi(n as i32)),
            "Berⁿ / (1/((2i)ⁿ n!)) ∂ⁿ[sⁿ Ber]",
        ));
        for (name, method) in [("orders", TrueBerMethod::Orders), ("wavelet", TrueBerMethod::Wavelet)] {
            let ratio = true_ber_oracle(&probe, n, z, method)? / true_ber(&probe, n, z);
            entries.push(entry(format!("{name}_method_constant_n{n}"), ratio, real(1.0), "oracle / Berⁿ"));
        }
    }

    for n in 0..=2 {
        let c = rodrigues_constants(n)?;
        let fact: f64 = (1..=n).map(|j| j as f64).product();
        let reference = cx(0.0, 2.0).powi(n as i32) / (pi * fact);
        entries.push(entry(format!("rodrigues_gamma_n{n}"), c.gamma, reference, "basis-sum / raw Rodrigues at z = w = i"));
        entries.push(entry(format!("rodrigues_exponent_n{n}"), real(c.exponent), real(-2.0), "η-power of the Rodrigues form"));
    }

    for n in 0..=2 {
        let zc = HalfPlanePoint::new(0.4, 0.9)?;
        let ratio = psi_beta_printed(n, 2.0, zc.z() * 2.0)? / psi_beta(n, 2.0, zc)?;
        entries.push(entry(format!("psi_printed_ratio_n{n}"), ratio, cx(0.0, 2.0), "printed(2z) / normative(z), β = 2"));
    }

    let e = intertwining_exponent(&probe, 0.7, 2.0, z)?;
    entries.push(entry("intertwining_exponent", e, real(-1.0), "D_{1/η} f̂(t) = η^{1/2} f̂(ηt)"));

    Ok(CalibrationReport { version: CALIBRATION_VERSION.into(), grid: spec, entries })
}
