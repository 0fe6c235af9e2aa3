//! The orthogonal basis `e_{n,m}` of the true polyanalytic spaces and the
//! closed-form profiles used by the kernels.

use crate::error::{invalid, Result};
use crate::halfplane::HalfPlanePoint;
use crate::scalar::{binomial, cx, factorial, falling, from_usize, i_pow, Cx, Real};
use crate::transforms::{ber_mode, laguerre_laplace, sigma};

/// `e_{n,m} = Berⁿ l_m¹`, with `‖e_{n,m}‖² = π(m+1)`.
///
/// Evaluated in double-double arithmetic, so the value is accurate to about
/// one ulp even where the defining sum cancels. [`basis_block`] is the fast
/// path for bulk evaluation.
pub fn basis_e<T: Real>(n: usize, m: usize, z: HalfPlanePoint<T>) -> Cx<T> {
    super::extended::basis_e_dd(n, m, z)
}

/// `e_{n,m}` summed directly in `T`.
pub fn basis_e_fast<T: Real>(n: usize, m: usize, z: HalfPlanePoint<T>) -> Cx<T> {
    let two_is = cx(T::zero(), z.s + z.s);
    let mut acc = cx(T::zero(), T::zero());
    let mut pow = cx(T::one(), T::zero());
    for k in 0..=n {
        if k > 0 {
            pow = pow * two_is;
        }
        acc = acc + pow * ber_mode(m, z, k) * (binomial::<T>(n, k) / factorial::<T>(k));
    }
    acc
}

/// `√(π(m+1))`.
pub fn basis_norm<T: Real>(m: usize) -> T {
    (T::PI() * from_usize(m + 1)).sqrt()
}

/// `ẽ_{n,m} = e_{n,m} / √(π(m+1))`.
pub fn basis_e_normalized<T: Real>(n: usize, m: usize, z: HalfPlanePoint<T>) -> Cx<T> {
    basis_e(n, m, z) / basis_norm::<T>(m)
}

/// `ẽ_{k,m}(z)` for `k < order`, `m < modes`, k-major.
pub fn basis_block<T: Real>(order: usize, modes: usize, z: HalfPlanePoint<T>) -> Vec<Cx<T>> {
    if order == 0 || modes == 0 {
        return Vec::new();
    }
    let derivs = mode_derivatives(order, modes, z);
    let two_is = cx(T::zero(), z.s + z.s);
    let mut weights = vec![cx(T::one(), T::zero()); order];
    for j in 1..order {
        weights[j] = weights[j - 1] * two_is / from_usize::<T>(j);
    }
    let norms: Vec<T> = (0..modes).map(basis_norm::<T>).collect();
    let mut out = Vec::with_capacity(order * modes);
    for k in 0..order {
        for m in 0..modes {
            let mut acc = cx(T::zero(), T::zero());
            for j in 0..=k {
                acc = acc + weights[j] * derivs[m][j] * binomial::<T>(k, j);
            }
            out.push(acc / norms[m]);
        }
    }
    out
}

/// `derivs[m][j] = (d/dz)^j Ber l_m¹(z)` for `j < order`, `m < modes`; the
/// same Leibniz sum as [`ber_mode`] with the powers of `σ` and `σ-1`
/// tabulated once.
fn mode_derivatives<T: Real>(order: usize, modes: usize, z: HalfPlanePoint<T>) -> Vec<Vec<Cx<T>>> {
    let sg = sigma(z);
    let inv = sg.inv();
    let mut inv_pow = vec![cx(T::one(), T::zero()); modes + order + 2];
    for p in 1..inv_pow.len() {
        inv_pow[p] = inv_pow[p - 1] * inv;
    }
    let sm1 = sg - T::one();
    let mut sm1_pow = vec![cx(T::one(), T::zero()); modes.max(1)];
    for q in 1..sm1_pow.len() {
        sm1_pow[q] = sm1_pow[q - 1] * sm1;
    }
    let rot: Vec<Cx<T>> = (0..order).map(|k| i_pow::<T>(-(k as i64))).collect();
    (0..modes)
        .map(|m| {
            let a = -from_usize::<T>(m + 2);
            let scale = from_usize::<T>(m + 1);
            (0..order)
                .map(|k| {
                    let mut acc = cx(T::zero(), T::zero());
                    for j in 0..=k {
                        let rest = k - j;
                        if rest > m {
                            continue;
                        }
                        let coef = binomial::<T>(k, j) * falling(a, j) * falling(from_usize::<T>(m), rest);
                        acc = acc + inv_pow[m + 2 + j] * sm1_pow[m - rest] * coef;
                    }
                    acc * scale * rot[k]
                })
                .collect()
        })
        .collect()
}

/// `Ber_{β/2} l_n^{β-1}(z) = Γ(β+n)/n! · σ^{-β-n} (σ-1)^n`, `σ = 1/2 - iz`.
pub fn psi_beta<T: Real>(n: usize, beta: T, z: HalfPlanePoint<T>) -> Result<Cx<T>> {
    if !(beta > T::one()) || !beta.is_finite() {
        return invalid(format!("psi_beta needs beta > 1, got {beta}"));
    }
    let bm1 = beta - T::one();
    laguerre_laplace(bm1, n, bm1, sigma(z))
}

/// `(2i)^{β+1} Γ(β+n)/n! · ((z-i)/(z+i))ⁿ (z+i)^{-β}`, principal branches.
///
/// Related to [`psi_beta`] by `printed(2z) = 2i · psi_beta(z)`.
pub fn psi_beta_printed<T: Real>(n: usize, beta: T, z: Cx<T>) -> Result<Cx<T>> {
    if !(beta > T::one()) || !beta.is_finite() {
        return invalid(format!("psi_beta needs beta > 1, got {beta}"));
    }
    let i = cx(T::zero(), T::one());
    let ratio = crate::transforms::gamma_ratio(beta - T::one(), n);
    let two_i = cx(T::zero(), T::two());
    let pre = two_i.powf(beta + T::one()) * ratio;
    Ok(pre * ((z - i) / (z + i)).powi(n as i32) * (z + i).powf(-beta))
}

/// `Ω̃_n(ζ) = ∫_0^∞ t l_n^0(2t) e^{iζt} dt`:
/// `-(ζ+i)^{-2}` for `n = 0`, else `((ζ-i)/(ζ+i))^{n-1} (2in - ζ + i)/(ζ+i)³`.
pub fn omega<T: Real>(n: usize, zeta: Cx<T>) -> Cx<T> {
    let i = cx(T::zero(), T::one());
    let zp = zeta + i;
    if n == 0 {
        return -(zp * zp).inv();
    }
    let num = cx(T::zero(), T::two() * from_usize::<T>(n)) - zeta + i;
    ((zeta - i) / zp).powi(n as i32 - 1) * num / (zp * zp * zp)
}

/// `(d/dζ)^k Ω̃_n(ζ) = i^k Σ_j a_j (j+k+1)! q^{-(j+k+2)}` with `q = 1 - iζ` and
/// `L_n^0(2t) = Σ_j a_j t^j`.
pub fn omega_derivative<T: Real>(n: usize, zeta: Cx<T>, k: usize) -> Cx<T> {
    let q = cx(T::one() + zeta.im, -zeta.re);
    let qinv = q.inv();
    let mut acc = cx(T::zero(), T::zero());
    for j in 0..=n {
        let sign = if j % 2 == 0 { T::one() } else { -T::one() };
        let a = sign * T::two().powi(j as i32) * binomial::<T>(n, j) / factorial::<T>(j);
        acc = acc + qinv.powi((j + k + 2) as i32) * (a * factorial::<T>(j + k + 1));
    }
    acc * i_pow::<T>(k as i64)
}

/// Signal whose Bergman transform is `Ω̃_n`: `t ↦ t^{1/2} l_n^0(2t)` is not in
/// the `l_m¹` span, so this is only used to cross-check [`omega`] through the
/// Laplace engine: `Ω̃_n(ζ) = ¼ ∫ u L_n^0(u) e^{-(1-iζ)u/2} du`.
pub fn omega_via_laplace<T: Real>(n: usize, zeta: Cx<T>) -> Result<Cx<T>> {
    let p = cx(T::one() + zeta.im, -zeta.re) * T::half();
    Ok(laguerre_laplace(T::one(), n, T::zero(), p)? / (T::two() * T::two()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laguerre::{laguerre_fn, GaussLaguerre};
    use crate::transforms::{true_ber, true_ber_literal, RPlusCoeffs};

    fn pt(x: f64, s: f64) -> HalfPlanePoint<f64> {
        HalfPlanePoint::new(x, s).unwrap()
    }

    fn close(a: Cx<f64>, b: Cx<f64>, tol: f64) {
        assert!((a - b).norm() <= tol * b.norm().max(1e-300), "{a} vs {b}");
    }

    #[test]
    fn tabulated_derivatives_match_ber_mode() {
        for z in [pt(0.0, 1.0), pt(-2.5, 0.03), pt(7.0, 40.0)] {
            let d = mode_derivatives(4, 20, z);
            for (m, row) in d.iter().enumerate() {
                for (k, v) in row.iter().enumerate() {
                    close(*v, ber_mode(m, z, k), 1e-10);
                }
            }
        }
    }

    #[test]
    fn basis_values_at_i() {
        let z = pt(0.0, 1.0);
        close(basis_e(0, 0, z), cx(4.0 / 9.0, 0.0), 1e-15);
        close(basis_e(1, 0, z), cx(-20.0 / 27.0, 0.0), 1e-14);
        close(true_ber_literal(&RPlusCoeffs::mode(0), 1, z), cx(5.0 / 27.0, 0.0), 1e-14);
    }

    #[test]
    fn block_matches_pointwise() {
        let z = pt(-0.6, 1.7);
        let block = basis_block(3, 4, z);
        for k in 0..3 {
            for m in 0..4 {
                close(block[k * 4 + m], basis_e_normalized(k, m, z), 1e-13);
                close(basis_e(k, m, z), true_ber(&RPlusCoeffs::mode(m), k, z), 1e-13);
            }
        }
    }

    #[test]
    fn psi_beta_examples() {
        let z = pt(0.0, 1.0);
        close(psi_beta(0, 2.0, z).unwrap(), cx(4.0 / 9.0, 0.0), 1e-15);
        close(psi_beta(1, 2.0, z).unwrap(), cx(8.0 / 27.0, 0.0), 1e-15);
        assert!(psi_beta(0, 1.0, z).is_err());
    }

    #[test]
    fn printed_psi_is_rescaled_normative() {
        for &beta in &[2.0, 2.5, 3.7] {
            for n in 0..4 {
                for &(x, s) in &[(0.0, 1.0), (1.3, 0.4), (-2.0, 2.5)] {
                    let z = pt(x, s);
                    let printed = psi_beta_printed(n, beta, z.z() * 2.0).unwrap();
                    close(printed, psi_beta(n, beta, z).unwrap() * cx(0.0, 2.0), 1e-12);
                }
            }
        }
    }

    #[test]
    fn omega_examples() {
        let i = cx(0.0, 1.0);
        close(omega(0, i), cx(0.25, 0.0), 1e-15);
        close(omega(1, i), cx(-0.25, 0.0), 1e-15);
    }

    #[test]
    fn omega_matches_defining_integral() {
        let rule = GaussLaguerre::new(128, 1.0).unwrap();
        for n in 0..5 {
            for &(x, s) in &[(0.0, 1.0), (0.7, 0.2), (-1.5, 2.0), (3.0, 0.5)] {
                let zeta = cx(x, s);
                // ∫ t l_n^0(2t) e^{iζt} dt with weight t e^{-(1+s)t}
                let rate = 1.0 + s;
                let mut q = cx(0.0, 0.0);
                for (&u, &w) in rule.nodes.iter().zip(&rule.weights) {
                    let t = u / rate;
                    let lag = laguerre_fn(n, 0.0, 2.0 * t).unwrap() * t.exp();
                    q += cx(0.0, x * t).exp() * lag * w;
                }
                q /= rate * rate;
                assert!((omega(n, zeta) - q).norm() < 1e-8, "n={n} {zeta}");
                close(omega_via_laplace(n, zeta).unwrap(), omega(n, zeta), 1e-12);
                close(omega_derivative(n, zeta, 0), omega(n, zeta), 1e-12);
            }
        }
    }

    #[test]
    fn omega_derivatives_by_difference() {
        let zeta = cx(0.4, 0.8);
        let h = 1e-5;
        for n in 0..4 {
            for k in 0..3 {
                let fd = (omega_derivative(n, zeta + h, k) - omega_derivative(n, zeta - h, k)) / (2.0 * h);
                close(omega_derivative(n, zeta, k + 1), fd, 1e-7);
            }
        }
    }

    #[test]
    fn extended_and_fast_paths_agree() {
        for n in 0..5 {
            for m in 0..4 {
                for &(x, s) in &[(0.0, 1.0), (1.3, 0.4), (-2.0, 3.5), (0.2, 0.05)] {
                    let z = pt(x, s);
                    close(basis_e(n, m, z), basis_e_fast(n, m, z), 1e-11);
                }
            }
        }
        let z32 = HalfPlanePoint::new(0.5f32, 1.5).unwrap();
        assert!((basis_e(2, 1, z32) - basis_e_fast(2, 1, z32)).norm() < 1e-5);
    }
}
