//! Time-domain import. Not part of the library model: signals there are
//! Fourier-side objects. This converts a uniformly sampled `f(t)` to
//! `f̂(ω) = (2π)^{-1/2} ∫ f(t) e^{-iωt} dt` on `ω ≥ 0` by FFT and fits the
//! Laguerre expansion. Negative-frequency content is dropped and its energy
//! share reported.

use num_complex::Complex64;
use rustfft::FftPlanner;

use polyberg_core::transforms::{fit_laguerre, RPlusCoeffs};

use crate::failure::Failure;

pub struct Imported {
    pub coeffs: RPlusCoeffs<f64>,
    /// Share of spectral energy at `ω < 0`.
    pub negative_energy: f64,
    pub samples: usize,
}

/// Reads `t,value` or `t,re,im` rows; `#` lines and a non-numeric header
/// row are skipped.
pub fn read_time_csv(text: &str) -> Result<(Vec<f64>, Vec<Complex64>), Failure> {
    let mut reader =
        csv::ReaderBuilder::new().has_headers(false).comment(Some(b'#')).flexible(true).trim(csv::Trim::All).from_reader(text.as_bytes());
    let (mut t, mut values) = (Vec::new(), Vec::new());
    for (row, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Failure::Usage(format!("time CSV: {e}")))?;
        let nums: Result<Vec<f64>, _> = record.iter().map(str::parse::<f64>).collect();
        let nums = match nums {
            Ok(n) => n,
            Err(_) if row == 0 && t.is_empty() => continue,
            Err(_) => return Err(Failure::Usage(format!("time CSV row {}: non-numeric field", row + 1))),
        };
        match nums[..] {
            [x, re] => {
                t.push(x);
                values.push(Complex64::new(re, 0.0));
            }
            [x, re, im] => {
                t.push(x);
                values.push(Complex64::new(re, im));
            }
            _ => return Err(Failure::Usage(format!("time CSV row {}: expected 2 or 3 columns", row + 1))),
        }
    }
    if t.len() < 2 {
        return Err(Failure::Usage("time CSV needs at least two samples".into()));
    }
    let dt = t[1] - t[0];
    let uniform = dt > 0.0 && t.windows(2).all(|w| ((w[1] - w[0]) - dt).abs() <= 1e-9 * dt.max(w[1].abs()));
    if !uniform || values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(Failure::Usage("time CSV must be finite and uniformly sampled with increasing t".into()));
    }
    Ok((t, values))
}

pub fn import(t: &[f64], values: &[Complex64], modes: usize) -> Result<Imported, Failure> {
    let n = values.len();
    let dt = t[1] - t[0];
    let mut spectrum = values.to_vec();
    FftPlanner::new().plan_fft_forward(n).process(&mut spectrum);
    let d_omega = std::f64::consts::TAU / (n as f64 * dt);
    let scale = dt / std::f64::consts::TAU.sqrt();
    let (mut omega, mut fhat) = (Vec::new(), Vec::new());
    let (mut positive, mut negative) = (0.0, 0.0);
    for (k, &c) in spectrum.iter().enumerate() {
        // bins above n/2 alias to negative frequencies
        if 2 * k >= n {
            negative += c.norm_sqr();
            continue;
        }
        positive += c.norm_sqr();
        let w = k as f64 * d_omega;
        omega.push(w);
        fhat.push(c * scale * Complex64::from_polar(1.0, -w * t[0]));
    }
    let weights = vec![d_omega; omega.len()];
    let coeffs = fit_laguerre(&omega, &fhat, &weights, modes).map_err(Failure::from)?;
    Ok(Imported { coeffs, negative_energy: negative / (positive + negative).max(f64::MIN_POSITIVE), samples: n })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_analytic_signal() {
        // l_0¹(ω) = √ω e^{-ω/2}; its inverse transform sampled densely
        let target = RPlusCoeffs::<f64>::mode(0);
        let (n, dt) = (8192usize, 0.02);
        let t0 = -(n as f64) * dt / 2.0;
        let t: Vec<f64> = (0..n).map(|j| t0 + j as f64 * dt).collect();
        // f(t) = (2π)^{-1/2} ∫ f̂(ω) e^{iωt} dω by midpoint rule
        let dw = 0.01;
        let values: Vec<Complex64> = t
            .iter()
            .map(|&x| {
                (0..6000)
                    .map(|k| {
                        let w = (k as f64 + 0.5) * dw;
                        target.eval(w) * Complex64::from_polar(1.0, w * x)
                    })
                    .sum::<Complex64>()
                    * dw
                    / std::f64::consts::TAU.sqrt()
            })
            .collect();
        let out = import(&t, &values, 3).unwrap();
        assert!((out.coeffs.coeffs[0] - 1.0).norm() < 2e-2, "{:?}", out.coeffs.coeffs);
        assert!(out.coeffs.coeffs[1].norm() < 2e-2 && out.coeffs.coeffs[2].norm() < 2e-2);
        assert!(out.negative_energy < 1e-3);
    }

    #[test]
    fn rejects_irregular_sampling() {
        assert!(read_time_csv("t,f\n0,1\n1,2\n3,3\n").is_err());
        assert!(read_time_csv("0,1\n").is_err());
        let (t, v) = read_time_csv("# c\nt,re,im\n0,1,0\n0.5,2,1\n1,0,0\n").unwrap();
        assert_eq!(t, vec![0.0, 0.5, 1.0]);
        assert_eq!(v[1], Complex64::new(2.0, 1.0));
    }
}
