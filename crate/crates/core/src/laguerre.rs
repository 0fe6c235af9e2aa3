//! Laguerre polynomials and functions, `ln Γ`, and Gauss–Laguerre rules.
//!
//! Polynomials are evaluated with the three-term recurrence
//!
//! ```text
//! (k+1) L_{k+1}^α(x) = (2k+α+1-x) L_k^α(x) - (k+α) L_{k-1}^α(x)
//! ```
//!
//! which, unlike the hypergeometric power series, does not suffer from
//! cancellation for large `x`. The recurrence is written over any numeric
//! field ([`laguerre_recurrence`]) so the same code path can be checked in
//! exact rational arithmetic.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{FromPrimitive, Num};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::scalar::{from_usize, lit, Real};

/// Degree and order of a Laguerre polynomial `L_n^α`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LaguerreParams<T> {
    pub n: usize,
    pub alpha: T,
}

impl<T: Real> LaguerreParams<T> {
    pub fn new(n: usize, alpha: T) -> Result<Self> {
        if !(alpha >= T::zero()) {
            return invalid(format!("Laguerre order must be >= 0, got {alpha}"));
        }
        Ok(Self { n, alpha })
    }

    pub fn poly(&self, x: T) -> Result<T> {
        laguerre_poly(self.n, self.alpha, x)
    }

    pub fn function(&self, x: T) -> Result<T> {
        laguerre_fn(self.n, self.alpha, x)
    }

    /// `‖l_n^α‖² = Γ(n+α+1)/n!`.
    pub fn norm_sq(&self) -> T {
        (log_gamma_unchecked(self.alpha + from_usize(self.n + 1))
            - log_gamma_unchecked(from_usize(self.n + 1)))
        .exp()
    }
}

/// Evaluates `L_n^α(x)` by the three-term recurrence over an arbitrary field.
pub fn laguerre_recurrence<F>(n: usize, alpha: &F, x: &F) -> F
where
    F: Num + Clone + FromPrimitive,
{
    let one = F::one();
    if n == 0 {
        return one;
    }
    let mut prev = one.clone();
    let mut cur = one.clone() + alpha.clone() - x.clone();
    for k in 1..n {
        let kf = F::from_usize(k).expect("degree fits field");
        let two_k = F::from_usize(2 * k + 1).expect("degree fits field");
        let next = ((two_k + alpha.clone() - x.clone()) * cur.clone()
            - (kf.clone() + alpha.clone()) * prev)
            / (kf + one.clone());
        prev = cur;
        cur = next;
    }
    cur
}

/// `L_n^α(x)` for `α > -1` and finite `x`.
pub fn laguerre_poly<T: Real>(n: usize, alpha: T, x: T) -> Result<T> {
    if !x.is_finite() {
        return invalid(format!("laguerre_poly: non-finite x = {x}"));
    }
    if !(alpha > -T::one()) {
        return invalid(format!("laguerre_poly: alpha must exceed -1, got {alpha}"));
    }
    Ok(laguerre_recurrence(n, &alpha, &x))
}

/// Laguerre function `l_n^α(x) = 1_{x>=0} e^{-x/2} x^{α/2} L_n^α(x)`.
///
/// Returns exactly zero for negative `x`.
pub fn laguerre_fn<T: Real>(n: usize, alpha: T, x: T) -> Result<T> {
    if !x.is_finite() {
        return invalid(format!("laguerre_fn: non-finite x = {x}"));
    }
    if !(alpha >= T::zero()) {
        return invalid(format!("laguerre_fn: alpha must be >= 0, got {alpha}"));
    }
    if x < T::zero() {
        return Ok(T::zero());
    }
    let envelope = if alpha == T::zero() {
        (-x * T::half()).exp()
    } else {
        (-x * T::half()).exp() * x.powf(alpha * T::half())
    };
    Ok(envelope * laguerre_recurrence(n, &alpha, &x))
}

// Lanczos approximation, g = 7, 9 terms.
const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// `ln Γ(x)` for `x > 0`.
pub fn log_gamma<T: Real>(x: T) -> Result<T> {
    if !(x > T::zero()) || !x.is_finite() {
        return invalid(format!("log_gamma: argument must be positive and finite, got {x}"));
    }
    Ok(log_gamma_unchecked(x))
}

pub(crate) fn log_gamma_unchecked<T: Real>(x: T) -> T {
    lit::<T>(log_gamma_f64(x.to_f64().expect("finite scalar")))
}

fn log_gamma_f64(x: f64) -> f64 {
    // Exact for small positive integers, where the Lanczos sum loses its
    // last digit or two.
    if x == x.floor() && x <= 30.0 {
        let n = x as u64;
        return (1..n).map(|k| (k as f64).ln()).sum();
    }
    if x < 0.5 {
        // Γ(x) = Γ(x+1)/x
        return log_gamma_f64(x + 1.0) - x.ln();
    }
    let z = x - 1.0;
    let mut acc = LANCZOS[0];
    for (k, c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (z + k as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (z + 0.5) * t.ln() - t + acc.ln()
}

/// Gauss–Laguerre rule for `∫_0^∞ x^α e^{-x} f(x) dx`.
///
/// Nodes are the eigenvalues of the Jacobi matrix, isolated by Sturm-sequence
/// bisection and polished with Newton steps on `L_n^α`; weights use
/// `w_i = Γ(n+α+1) x_i / (n! (n+1)² L_{n+1}^α(x_i)²)` evaluated in log space.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussLaguerre {
    pub alpha: f64,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLaguerre {
    pub fn new(order: usize, alpha: f64) -> Result<Self> {
        if order == 0 {
            return invalid("Gauss-Laguerre order must be positive");
        }
        if !(alpha > -1.0) || !alpha.is_finite() {
            return invalid(format!("Gauss-Laguerre alpha must exceed -1, got {alpha}"));
        }
        let nodes = jacobi_eigenvalues(order, alpha)
            .into_iter()
            .map(|x| newton_polish(order, alpha, x))
            .collect::<Vec<_>>();
        let log_norm = log_gamma_f64(order as f64 + alpha + 1.0) - log_gamma_f64(order as f64 + 1.0);
        let weights = nodes
            .iter()
            .map(|&x| {
                let (_, _, next, log_scale) = scaled_triplet(order, alpha, x);
                let log_l = next.abs().ln() + log_scale;
                (log_norm + x.ln() - 2.0 * ((order + 1) as f64).ln() - 2.0 * log_l).exp()
            })
            .collect::<Vec<f64>>();
        // Pin the zeroth moment to Γ(α+1); removes the common rounding drift of
        // the three-term recurrence at the large nodes.
        let total = crate::reduce::pairwise_sum(&weights);
        let scale = log_gamma_f64(alpha + 1.0).exp() / total;
        let weights = weights.into_iter().map(|w| w * scale).collect();
        Ok(Self { alpha, nodes, weights })
    }

    /// Shared, lazily built rule.
    pub fn cached(order: usize, alpha: f64) -> Result<Arc<Self>> {
        static CACHE: OnceLock<Mutex<HashMap<(usize, u64), Arc<GaussLaguerre>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let key = (order, alpha.to_bits());
        if let Some(rule) = cache.lock().expect("rule cache poisoned").get(&key) {
            return Ok(rule.clone());
        }
        let rule = Arc::new(Self::new(order, alpha)?);
        cache
            .lock()
            .expect("rule cache poisoned")
            .insert(key, rule.clone());
        Ok(rule)
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// `Σ w_i f(x_i)`.
    pub fn integrate<T: Real, F: Fn(T) -> T>(&self, f: F) -> T {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| lit::<T>(w) * f(lit(x)))
            .sum()
    }
}

fn sturm_count(diag: &[f64], off_sq: &[f64], lambda: f64) -> usize {
    let mut count = 0;
    let mut q = diag[0] - lambda;
    if q < 0.0 {
        count += 1;
    }
    for i in 1..diag.len() {
        let prev = if q == 0.0 { f64::EPSILON * (diag[i - 1].abs() + 1.0) } else { q };
        q = diag[i] - lambda - off_sq[i] / prev;
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

fn jacobi_eigenvalues(n: usize, alpha: f64) -> Vec<f64> {
    let diag: Vec<f64> = (0..n).map(|i| 2.0 * i as f64 + alpha + 1.0).collect();
    let off_sq: Vec<f64> = (0..n).map(|i| i as f64 * (i as f64 + alpha)).collect();
    let upper = (0..n)
        .map(|i| {
            let left = off_sq[i].sqrt();
            let right = if i + 1 < n { off_sq[i + 1].sqrt() } else { 0.0 };
            diag[i] + left + right
        })
        .fold(0.0, f64::max);
    (0..n)
        .map(|k| {
            let (mut lo, mut hi) = (0.0, upper);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if sturm_count(&diag, &off_sq, mid) > k {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            0.5 * (lo + hi)
        })
        .collect()
}

/// `(L_{n-1}, L_n, L_{n+1})` scaled by `e^{-log_scale}`.
fn scaled_triplet(n: usize, alpha: f64, x: f64) -> (f64, f64, f64, f64) {
    let mut log_scale = 0.0;
    let mut prev = 0.0;
    let mut cur = 1.0;
    for k in 0..=n {
        let kf = k as f64;
        let next = ((2.0 * kf + alpha + 1.0 - x) * cur - (kf + alpha) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
        let mag = cur.abs().max(prev.abs());
        if mag > 1e100 {
            prev /= mag;
            cur /= mag;
            log_scale += mag.ln();
        }
    }
    // After the loop: prev = L_n, cur = L_{n+1}. Recover L_{n-1} from the recurrence.
    let nf = n as f64;
    let l_n = prev;
    let l_np1 = cur;
    let l_nm1 = if n == 0 {
        0.0
    } else {
        ((2.0 * nf + alpha + 1.0 - x) * l_n - (nf + 1.0) * l_np1) / (nf + alpha)
    };
    (l_nm1, l_n, l_np1, log_scale)
}

fn newton_polish(n: usize, alpha: f64, mut x: f64) -> f64 {
    for _ in 0..3 {
        let (l_nm1, l_n, _, _) = scaled_triplet(n, alpha, x);
        // x L_n' = n L_n - (n+α) L_{n-1}
        let deriv = (n as f64 * l_n - (n as f64 + alpha) * l_nm1) / x;
        if deriv == 0.0 {
            break;
        }
        let step = l_n / deriv;
        if !step.is_finite() || step.abs() > 1e-6 * x.max(1.0) {
            break;
        }
        x -= step;
        if step.abs() <= f64::EPSILON * x {
            break;
        }
    }
    x
}
