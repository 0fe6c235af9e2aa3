//! Bergman transforms of Fourier-side signals, in closed form per Laguerre
//! mode.
//!
//! With `σ = 1/2 - i z` every mode reduces to a Laplace transform
//!
//! ```text
//! ∫_0^∞ t^w L_n^a(t) e^{-σ t} dt
//! ```
//!
//! which is evaluated by re-expanding `L_n^a` in the family `L_j^w`
//! (a finite connection sum) and then using
//! `∫ t^w L_j^w e^{-σt} dt = Γ(w+j+1)/j! · σ^{-w-j-1} (σ-1)^j`.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::halfplane::HalfPlanePoint;
use crate::laguerre::log_gamma_unchecked;
use crate::scalar::{binomial, cx, factorial, falling, from_usize, i_pow, lit, re, Cx, Real};

use super::profile::AnalyzerProfile;
use super::signal::{ChannelSet, RPlusCoeffs};
use super::wavelet::cwt;

/// `σ = 1/2 - i z`.
#[inline]
pub fn sigma<T: Real>(z: HalfPlanePoint<T>) -> Cx<T> {
    cx(T::half() + z.s, -z.x)
}

fn is_integer<T: Real>(x: T) -> bool {
    x == x.round() && x.abs() < lit(1e6)
}

/// `σ^e` on the principal branch; integer exponents use repeated products.
pub(crate) fn cpow<T: Real>(sigma: Cx<T>, e: T) -> Cx<T> {
    if is_integer(e) {
        sigma.powi(e.to_i32().expect("small integer exponent"))
    } else {
        sigma.powf(e)
    }
}

/// `Γ(w+j+1)/j!`.
pub(crate) fn gamma_ratio<T: Real>(w: T, j: usize) -> T {
    if is_integer(w) && w >= T::zero() {
        let w = w.to_usize().expect("small integer");
        (1..=w).fold(T::one(), |acc, i| acc * from_usize::<T>(j + i))
    } else {
        (log_gamma_unchecked(w + from_usize(j + 1)) - log_gamma_unchecked(from_usize::<T>(j + 1))).exp()
    }
}

/// `∫_0^∞ t^w L_n^a(t) e^{-σ t} dt` for `w > -1`, `a > -1`, `Re σ > 0`.
pub fn laguerre_laplace<T: Real>(w: T, n: usize, a: T, sigma: Cx<T>) -> Result<Cx<T>> {
    if !(w > -T::one()) || !(a > -T::one()) {
        return invalid(format!("Laplace image needs w > -1 and a > -1, got w = {w}, a = {a}"));
    }
    if !(sigma.re > T::zero()) {
        return invalid(format!("Laplace image needs Re σ > 0, got σ = {sigma}"));
    }
    // L_n^a = Σ_r (a-w)_r / r! · L_{n-r}^w   (rising factorial)
    let shift = a - w;
    let mut connect = T::one();
    let mut acc = cx(T::zero(), T::zero());
    let sm1 = sigma - T::one();
    for r in 0..=n {
        if r > 0 {
            connect = connect * (shift + from_usize::<T>(r - 1)) / from_usize::<T>(r);
        }
        if connect == T::zero() {
            break;
        }
        let j = n - r;
        let term = cpow(sigma, -(w + from_usize::<T>(j + 1))) * sm1.powi(j as i32);
        acc = acc + term * (connect * gamma_ratio(w, j));
    }
    Ok(acc)
}

/// `k`-th `z`-derivative of `Ber l_m¹(z) = (m+1) σ^{-2-m} (σ-1)^m`.
pub fn ber_mode<T: Real>(m: usize, z: HalfPlanePoint<T>, k: usize) -> Cx<T> {
    let sg = sigma(z);
    let sm1 = sg - T::one();
    let a = -(from_usize::<T>(m + 2));
    let mut acc = cx(T::zero(), T::zero());
    // Leibniz on σ^a · (σ-1)^m; d/dz = -i d/dσ
    for j in 0..=k {
        let rest = k - j;
        if rest > m {
            continue;
        }
        let coef = binomial::<T>(k, j) * falling(a, j) * falling(from_usize::<T>(m), rest);
        let power_sigma = -(m as i32 + 2) - j as i32;
        acc = acc + sg.powi(power_sigma) * sm1.powi((m - rest) as i32) * coef;
    }
    acc * from_usize::<T>(m + 1) * i_pow::<T>(-(k as i64))
}

/// `(d/dz)^k Ber f̂(z)`.
pub fn ber_derivative<T: Real>(fhat: &RPlusCoeffs<T>, z: HalfPlanePoint<T>, k: usize) -> Cx<T> {
    fhat.coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| c.norm_sqr() > T::zero())
        .map(|(m, c)| c * ber_mode(m, z, k))
        .fold(cx(T::zero(), T::zero()), |acc, v| acc + v)
}

/// `Ber_α f̂(z) = ∫_0^∞ t^{α-1/2} f̂(t) e^{izt} dt`, for `α >= 1/2`.
pub fn ber_alpha<T: Real>(fhat: &RPlusCoeffs<T>, alpha: T, z: HalfPlanePoint<T>) -> Result<Cx<T>> {
    if !(alpha >= T::half()) || !alpha.is_finite() {
        return invalid(format!("Bergman transform order must be >= 1/2, got {alpha}"));
    }
    let sg = sigma(z);
    let mut acc = cx(T::zero(), T::zero());
    for (m, c) in fhat.coeffs.iter().enumerate() {
        if c.norm_sqr() > T::zero() {
            acc = acc + c * laguerre_laplace(alpha, m, T::one(), sg)?;
        }
    }
    Ok(acc)
}

/// True polyanalytic Bergman transform of order `n`:
///
/// ```text
/// Berⁿ f̂(z) = Σ_k C(n,k) (2is)^k / k! · F^{(k)}(z),     F = Ber f̂
/// ```
///
/// which is `(-4)ⁿ` times `(1/((2i)ⁿ n!)) (d/dz)ⁿ [sⁿ F]` (see
/// [`true_ber_literal`]). This normalization makes `‖Berⁿ f̂‖² = π ‖f̂‖²`
/// for every `n` and coincides with `s⁻¹ W_{Φ_n} f̂`.
pub fn true_ber<T: Real>(fhat: &RPlusCoeffs<T>, n: usize, z: HalfPlanePoint<T>) -> Cx<T> {
    let two_is = cx(T::zero(), z.s + z.s);
    let mut acc = cx(T::zero(), T::zero());
    let mut pow = cx(T::one(), T::zero());
    for k in 0..=n {
        if k > 0 {
            pow = pow * two_is;
        }
        acc = acc + pow * ber_derivative(fhat, z, k) * (binomial::<T>(n, k) / factorial::<T>(k));
    }
    acc
}

/// `(1/((2i)ⁿ n!)) (d/dz)ⁿ [sⁿ Ber f̂(z)]` with the Wirtinger derivative
/// `∂s/∂z = 1/(2i)`, expanded by the Leibniz rule. Equals
/// `(-1/4)ⁿ · true_ber`.
pub fn true_ber_literal<T: Real>(fhat: &RPlusCoeffs<T>, n: usize, z: HalfPlanePoint<T>) -> Cx<T> {
    let inv_2i = cx(T::zero(), -T::half());
    let mut acc = cx(T::zero(), T::zero());
    for j in 0..=n {
        // (d/dz)^{n-j} sⁿ = (2i)^{-(n-j)} n!/j! s^j
        let d_sn = inv_2i.powi((n - j) as i32) * (factorial::<T>(n) / factorial::<T>(j)) * z.s.powi(j as i32);
        acc = acc + d_sn * ber_derivative(fhat, z, j) * binomial::<T>(n, j);
    }
    acc * inv_2i.powi(n as i32) / factorial::<T>(n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrueBerMethod {
    /// `Σ_k (-2)^k C(n,k) s^k / k! · Ber_{k+1} f̂(z)`
    Orders,
    /// `s⁻¹ W_{Φ_n} f̂(x, s)`
    Wavelet,
}

/// Alternative evaluations of [`true_ber`].
pub fn true_ber_oracle<T: Real>(
    fhat: &RPlusCoeffs<T>,
    n: usize,
    z: HalfPlanePoint<T>,
    method: TrueBerMethod,
) -> Result<Cx<T>> {
    match method {
        TrueBerMethod::Orders => {
            let mut acc = cx(T::zero(), T::zero());
            for k in 0..=n {
                let sign = if k % 2 == 0 { T::one() } else { -T::one() };
                let coef = sign * T::two().powi(k as i32) * binomial::<T>(n, k) * z.s.powi(k as i32)
                    / factorial::<T>(k);
                acc = acc + ber_alpha(fhat, from_usize::<T>(k + 1), z)? * coef;
            }
            Ok(acc)
        }
        TrueBerMethod::Wavelet => Ok(cwt(fhat, &AnalyzerProfile::phi(n), z.x, z.s)? / z.s),
    }
}

/// `Σ_k Berᵏ f̂_k(z)` over the channels `k = 0..n-1`.
pub fn poly_ber<T: Real>(f: &ChannelSet<T>, z: HalfPlanePoint<T>) -> Cx<T> {
    f.channels
        .iter()
        .enumerate()
        .map(|(k, ch)| true_ber(ch, k, z))
        .fold(re(T::zero()), |acc, v| acc + v)
}
