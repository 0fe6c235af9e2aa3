//! Finite-difference Wirtinger derivatives and polyanalyticity degree.

use crate::error::{invalid, Result};
use crate::halfplane::HalfPlanePoint;
use crate::scalar::{binomial, cx, from_usize, i_pow, lit, Cx, Real};

/// Steps below this lose more to cancellation than they gain in truncation.
pub const MIN_STEP: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct DbarEstimate<T> {
    pub value: Cx<T>,
    pub warning: Option<String>,
}

/// Weights of `(∂/∂z̄)^j` on the `(2j+1)²` stencil, indexed
/// `[(a + j) * (2j+1) + (b + j)]` for offsets `(a h, b h)` in `(x, s)`,
/// before the `(2h)^{-j}` scaling.
fn stencil<T: Real>(j: usize) -> Vec<Cx<T>> {
    let width = 2 * j + 1;
    let mut w = vec![cx(T::zero(), T::zero()); width * width];
    // ∂z̄ = ½(∂x + i ∂s);  (∂z̄)^j = 2^{-j} Σ_l C(j,l) i^l ∂x^{j-l} ∂s^l
    for l in 0..=j {
        let (ax, bs) = (j - l, l);
        let outer = i_pow::<T>(l as i64) * binomial::<T>(j, l);
        for p in 0..=ax {
            for q in 0..=bs {
                let sign = if (p + q) % 2 == 0 { T::one() } else { -T::one() };
                let off_x = ax as i64 - 2 * p as i64;
                let off_s = bs as i64 - 2 * q as i64;
                let idx = (off_x + j as i64) as usize * width + (off_s + j as i64) as usize;
                w[idx] = w[idx] + outer * (sign * binomial::<T>(ax, p) * binomial::<T>(bs, q));
            }
        }
    }
    let scale = T::two().powi(-(j as i32));
    w.into_iter().map(|v| v * scale).collect()
}

/// Central-difference estimate of `(∂/∂z̄)^j F(z)`; `O(h²)` accurate.
pub fn dbar_power<T, F>(f: F, z: HalfPlanePoint<T>, j: usize, h: T) -> Result<DbarEstimate<T>>
where
    T: Real,
    F: Fn(HalfPlanePoint<T>) -> Cx<T>,
{
    if j == 0 {
        return invalid("dbar_power needs j >= 1");
    }
    if !(h > T::zero()) || !h.is_finite() {
        return invalid(format!("finite-difference step must be positive, got {h}"));
    }
    if z.s - from_usize::<T>(j) * h <= T::zero() {
        return invalid(format!("stencil of order {j} with step {h} leaves the half-plane at {z}"));
    }
    let warning = (h < lit(MIN_STEP)).then(|| format!("step {h:e} is below {MIN_STEP:e}; result is dominated by rounding"));
    let width = 2 * j + 1;
    let weights = stencil::<T>(j);
    let mut acc = cx(T::zero(), T::zero());
    for a in 0..width {
        for b in 0..width {
            let wt = weights[a * width + b];
            if wt.norm_sqr() == T::zero() {
                continue;
            }
            let x = z.x + lit::<T>(a as f64 - j as f64) * h;
            let s = z.s + lit::<T>(b as f64 - j as f64) * h;
            acc = acc + wt * f(HalfPlanePoint { x, s });
        }
    }
    let value = acc / (h + h).powi(j as i32);
    Ok(DbarEstimate { value, warning })
}

/// Smallest `j <= j_max` with `max_probes |(∂/∂z̄)^j F| / max_probes |F| < tol`,
/// or `None` if no such `j` exists.
pub fn polyanalytic_degree<T, F>(
    f: F,
    probes: &[HalfPlanePoint<T>],
    tol: T,
    h: T,
    j_max: usize,
) -> Result<Option<usize>>
where
    T: Real,
    F: Fn(HalfPlanePoint<T>) -> Cx<T>,
{
    if probes.is_empty() {
        return invalid("polyanalytic_degree needs at least one probe");
    }
    let scale = probes.iter().map(|&p| f(p).norm()).fold(T::zero(), T::max);
    if !(scale > T::zero()) {
        // the zero field is analytic
        return Ok(Some(1));
    }
    for j in 1..=j_max {
        let mut worst = T::zero();
        for &p in probes {
            worst = worst.max(dbar_power(&f, p, j, h)?.value.norm());
        }
        if worst / scale < tol {
            return Ok(Some(j));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(x: f64, s: f64) -> HalfPlanePoint<f64> {
        HalfPlanePoint::new(x, s).unwrap()
    }

    #[test]
    fn elementary_derivatives() {
        let z = pt(0.3, 1.2);
        let conj = |p: HalfPlanePoint<f64>| p.z().conj();
        assert!((dbar_power(conj, z, 1, 1e-3).unwrap().value - cx(1.0, 0.0)).norm() < 1e-6);
        let sq = |p: HalfPlanePoint<f64>| p.z() * p.z();
        assert!(dbar_power(sq, z, 1, 1e-3).unwrap().value.norm() < 1e-6);
        let s = |p: HalfPlanePoint<f64>| cx(p.s, 0.0);
        assert!((dbar_power(s, z, 1, 1e-3).unwrap().value - cx(0.0, 0.5)).norm() < 1e-6);
        // (∂z̄)² z̄² = 2
        let c2 = |p: HalfPlanePoint<f64>| p.z().conj().powi(2);
        assert!((dbar_power(c2, z, 2, 1e-3).unwrap().value - cx(2.0, 0.0)).norm() < 1e-5);
    }

    #[test]
    fn stencil_validation() {
        let f = |p: HalfPlanePoint<f64>| p.z();
        assert!(dbar_power(f, pt(0.0, 0.002), 2, 1e-3).is_err());
        assert!(dbar_power(f, pt(0.0, 1.0), 1, 0.0).is_err());
        assert!(dbar_power(f, pt(0.0, 1.0), 1, 1e-7).unwrap().warning.is_some());
    }

    #[test]
    fn degree_of_monomials() {
        let probes = [pt(0.0, 1.0), pt(1.0, 2.0), pt(-0.5, 1.5)];
        let analytic = |p: HalfPlanePoint<f64>| (p.z() + cx(0.0, 1.0)).inv();
        assert_eq!(polyanalytic_degree(analytic, &probes, 1e-6, 1e-3, 5).unwrap(), Some(1));
        let quad = |p: HalfPlanePoint<f64>| p.z().conj().powi(2) * p.z();
        assert_eq!(polyanalytic_degree(quad, &probes, 1e-6, 1e-3, 5).unwrap(), Some(3));
        let non = |p: HalfPlanePoint<f64>| cx((p.x * p.s).exp(), 0.0);
        assert_eq!(polyanalytic_degree(non, &probes, 1e-6, 1e-3, 3).unwrap(), None);
    }
}
