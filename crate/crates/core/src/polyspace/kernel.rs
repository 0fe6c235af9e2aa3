//! Reproducing kernels of the true and full polyanalytic spaces.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::halfplane::HalfPlanePoint;
use crate::scalar::{binomial, cx, factorial, lit, Cx, Real};

use super::basis::{basis_block, omega_derivative};

/// Default basis cutoff for kernel evaluation.
pub const KERNEL_MODES: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelMethod {
    /// `Σ_{m<M} ẽ_{n,m}(z) conj(ẽ_{n,m}(w))`
    BasisSum { modes: usize },
    /// `γ_n η^p (d/dz)ⁿ [sⁿ Ω̃_n((z-u)/η)]` with calibrated `γ_n`, `p`.
    Rodrigues,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelSpec {
    pub n: usize,
    pub method: KernelMethod,
}

impl KernelSpec {
    pub fn basis_sum(n: usize, modes: usize) -> Result<Self> {
        if modes < 8 {
            return invalid(format!("basis-sum kernel needs at least 8 modes, got {modes}"));
        }
        Ok(Self { n, method: KernelMethod::BasisSum { modes } })
    }

    pub fn rodrigues(n: usize) -> Self {
        Self { n, method: KernelMethod::Rodrigues }
    }
}

/// Kernel value with truncation metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelEval<T> {
    pub value: Cx<T>,
    /// Size of the last retained basis term relative to the sum (zero for
    /// the closed form).
    pub tail: T,
    pub warning: Option<String>,
}

const TAIL_WARNING: f64 = 1e-8;

/// `Kⁿ(z, w)`; `w ↦ Kⁿ(w, z)` reproduces the true space at `z`.
pub fn kernel_true<T: Real>(spec: KernelSpec, z: HalfPlanePoint<T>, w: HalfPlanePoint<T>) -> Result<KernelEval<T>> {
    match spec.method {
        KernelMethod::BasisSum { modes } => {
            if modes < 8 {
                return invalid(format!("basis-sum kernel needs at least 8 modes, got {modes}"));
            }
            let bz = basis_block(spec.n + 1, modes, z);
            let bw = basis_block(spec.n + 1, modes, w);
            let mut acc = cx(T::zero(), T::zero());
            let mut last = T::zero();
            for (ez, ew) in bz[spec.n * modes..].iter().zip(&bw[spec.n * modes..]) {
                let term = ez * ew.conj();
                acc = acc + term;
                last = term.norm();
            }
            let tail = if acc.norm() > T::zero() { last / acc.norm() } else { T::zero() };
            let warning = (tail > lit(TAIL_WARNING)).then(|| {
                format!("basis sum with {modes} modes not converged at ({z}, {w}): last term {tail:e} of total")
            });
            Ok(KernelEval { value: acc, tail, warning })
        }
        KernelMethod::Rodrigues => {
            let c = rodrigues_constants(spec.n)?;
            let gamma = cx(lit::<T>(c.gamma.re), lit::<T>(c.gamma.im));
            let value = gamma * w.s.powf(lit(c.exponent)) * kernel_rodrigues_raw(spec.n, z, w);
            Ok(KernelEval { value, tail: T::zero(), warning: None })
        }
    }
}

/// `out[p][j] = Kⁿ(nodes[j], probes[p])`. The basis-sum method evaluates
/// the basis once per node instead of once per pair.
pub fn kernel_true_columns<T: Real>(
    spec: KernelSpec,
    nodes: &[HalfPlanePoint<T>],
    probes: &[HalfPlanePoint<T>],
) -> Result<Vec<Vec<Cx<T>>>> {
    for &z in probes {
        kernel_true(spec, z, z)?;
    }
    match spec.method {
        KernelMethod::BasisSum { modes } => {
            let n = spec.n;
            let rows: Vec<Vec<Cx<T>>> = probes
                .iter()
                .map(|&z| basis_block(n + 1, modes, z)[n * modes..].iter().map(|v| v.conj()).collect())
                .collect();
            let per_node: Vec<Vec<Cx<T>>> = nodes
                .par_iter()
                .map(|&w| {
                    let bw = basis_block(n + 1, modes, w);
                    let own = &bw[n * modes..];
                    rows.iter()
                        .map(|row| own.iter().zip(row).fold(cx(T::zero(), T::zero()), |acc, (a, b)| acc + a * b))
                        .collect()
                })
                .collect();
            Ok((0..probes.len()).map(|p| per_node.iter().map(|v| v[p]).collect()).collect())
        }
        KernelMethod::Rodrigues => probes
            .iter()
            .map(|&z| nodes.iter().map(|&w| kernel_true(spec, w, z).map(|e| e.value)).collect())
            .collect(),
    }
}

/// `(d/dz)ⁿ [sⁿ Ω̃_n((z-u)/η)]` with `∂s/∂z = 1/(2i)`, `w = u + iη`.
pub fn kernel_rodrigues_raw<T: Real>(n: usize, z: HalfPlanePoint<T>, w: HalfPlanePoint<T>) -> Cx<T> {
    let zeta = cx((z.x - w.x) / w.s, z.s / w.s);
    let inv_2i = cx(T::zero(), -T::half());
    let mut acc = cx(T::zero(), T::zero());
    for j in 0..=n {
        // (d/dz)^{n-j} sⁿ = (2i)^{-(n-j)} n!/j! s^j
        let d_sn = inv_2i.powi((n - j) as i32) * (factorial::<T>(n) / factorial::<T>(j)) * z.s.powi(j as i32);
        let g_j = omega_derivative(n, zeta, j) * w.s.powi(-(j as i32));
        acc = acc + d_sn * g_j * binomial::<T>(n, j);
    }
    acc
}

/// Constants of the closed-form kernel, measured against the basis sum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RodriguesConstants {
    pub gamma: Complex<f64>,
    pub exponent: f64,
}

/// Measures `γ_n` at `z = w = i` and the `η`-exponent from `z = w = 2i`.
pub fn calibrate_rodrigues(n: usize) -> Result<RodriguesConstants> {
    let spec = KernelSpec::basis_sum(n, KERNEL_MODES)?;
    let p1 = HalfPlanePoint::new(0.0f64, 1.0)?;
    let p2 = HalfPlanePoint::new(0.0f64, 2.0)?;
    let gamma = kernel_true(spec, p1, p1)?.value / kernel_rodrigues_raw(n, p1, p1);
    let ratio2 = kernel_true(spec, p2, p2)?.value / kernel_rodrigues_raw(n, p2, p2);
    let exponent = (ratio2.norm() / gamma.norm()).ln() / 2f64.ln();
    Ok(RodriguesConstants { gamma, exponent })
}

/// Cached [`calibrate_rodrigues`].
pub fn rodrigues_constants(n: usize) -> Result<RodriguesConstants> {
    static CACHE: OnceLock<Mutex<HashMap<usize, RodriguesConstants>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(c) = cache.lock().expect("kernel constant cache poisoned").get(&n) {
        return Ok(*c);
    }
    let c = calibrate_rodrigues(n)?;
    cache.lock().expect("kernel constant cache poisoned").insert(n, c);
    Ok(c)
}

/// `𝐊ⁿ(z, w) = Σ_{k<n} Kᵏ(z, w)`.
pub fn kernel_poly<T: Real>(n: usize, method: KernelMethod, z: HalfPlanePoint<T>, w: HalfPlanePoint<T>) -> Result<Cx<T>> {
    if n < 1 {
        return invalid("full polyanalytic kernel needs order n >= 1");
    }
    let mut acc = cx(T::zero(), T::zero());
    for k in 0..n {
        acc = acc + kernel_true(KernelSpec { n: k, method }, z, w)?.value;
    }
    Ok(acc)
}

/// Kernel of the wavelet space `{ s·F : F ∈ 𝒜ⁿ }` under `s⁻² dx ds`:
/// `kⁿ(z, w) = s η Kⁿ(z, w)`.
pub fn kernel_wavelet<T: Real>(
    n: usize,
    method: KernelMethod,
    z: HalfPlanePoint<T>,
    w: HalfPlanePoint<T>,
) -> Result<Cx<T>> {
    Ok(kernel_true(KernelSpec { n, method }, z, w)?.value * (z.s * w.s))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(x: f64, s: f64) -> HalfPlanePoint<f64> {
        HalfPlanePoint::new(x, s).unwrap()
    }

    fn probes() -> Vec<HalfPlanePoint<f64>> {
        vec![pt(0.0, 1.0), pt(0.8, 0.6), pt(-1.2, 1.5), pt(0.3, 2.4), pt(-0.5, 0.8)]
    }

    #[test]
    fn columns_match_pointwise() {
        let nodes = probes();
        let targets = [pt(0.1, 0.9), pt(-2.0, 3.0)];
        for spec in [KernelSpec::basis_sum(2, 16).unwrap(), KernelSpec::rodrigues(1)] {
            let cols = kernel_true_columns(spec, &nodes, &targets).unwrap();
            for (p, z) in targets.iter().enumerate() {
                for (j, w) in nodes.iter().enumerate() {
                    let want = kernel_true(spec, *w, *z).unwrap().value;
                    assert!((cols[p][j] - want).norm() < 1e-13 * want.norm().max(1.0));
                }
            }
        }
    }

    #[test]
    fn classical_bergman_kernel() {
        let spec = KernelSpec::basis_sum(0, 64).unwrap();
        for &z in &probes() {
            for &w in &probes() {
                let k = kernel_true(spec, z, w).unwrap();
                let d = z.z() - w.z().conj();
                let want = -(d * d).inv() / std::f64::consts::PI;
                assert!((k.value - want).norm() < 1e-6 * want.norm(), "{z} {w}");
            }
        }
    }

    #[test]
    fn hermitian_symmetry() {
        for n in 0..3 {
            for method in [KernelMethod::BasisSum { modes: 32 }, KernelMethod::Rodrigues] {
                let spec = KernelSpec { n, method };
                let (z, w) = (pt(0.4, 0.9), pt(-1.1, 1.6));
                let a = kernel_true(spec, z, w).unwrap().value;
                let b = kernel_true(spec, w, z).unwrap().value;
                assert!((a - b.conj()).norm() < 1e-10 * a.norm());
            }
        }
    }

    #[test]
    fn calibrated_constants() {
        for n in 0..4 {
            let c = calibrate_rodrigues(n).unwrap();
            assert!((c.exponent + 2.0).abs() < 1e-9, "n={n}: {}", c.exponent);
            // γ_n = (2i)ⁿ / (π n!)
            let want = Complex::new(0.0, 2.0).powi(n as i32) / (std::f64::consts::PI * factorial::<f64>(n));
            assert!((c.gamma - want).norm() < 1e-10 * want.norm(), "n={n}: {}", c.gamma);
        }
    }

    #[test]
    fn methods_agree() {
        for n in 0..3 {
            for &z in &probes() {
                for &w in &probes() {
                    let a = kernel_true(KernelSpec::basis_sum(n, 64).unwrap(), z, w).unwrap().value;
                    let b = kernel_true(KernelSpec::rodrigues(n), z, w).unwrap().value;
                    assert!((a - b).norm() < 1e-3 * b.norm(), "n={n} {z} {w}");
                }
            }
        }
    }

    #[test]
    fn full_and_wavelet_kernels() {
        let (z, w) = (pt(0.2, 1.1), pt(-0.4, 0.7));
        let m = KernelMethod::Rodrigues;
        let k0 = kernel_true(KernelSpec::rodrigues(0), z, w).unwrap().value;
        assert_eq!(kernel_poly(1, m, z, w).unwrap(), k0);
        assert!(kernel_poly(0, m, z, w).is_err());
        let ratio = kernel_wavelet(0, m, z, w).unwrap() / k0;
        assert!((ratio - z.s * w.s).norm() < 1e-14);
    }

    #[test]
    fn truncation_warning() {
        let near_axis = pt(4.0, 0.05);
        let k = kernel_true(KernelSpec::basis_sum(0, 8).unwrap(), near_axis, near_axis).unwrap();
        assert!(k.warning.is_some());
        assert!(KernelSpec::basis_sum(0, 4).is_err());
    }
}
