//! Continuous wavelet transform on the Fourier side.

use crate::error::{invalid, Result};
use crate::halfplane::RPlusFunction;
use crate::scalar::{cx, from_usize, Cx, Real};

use super::bergman::laguerre_laplace;
use super::profile::AnalyzerProfile;
use super::signal::{ChannelSet, RPlusCoeffs};

/// `W_g f̂(x, s) = ∫_0^∞ f̂(t) e^{ixt} s^{1/2} g(st) dt`.
///
/// With `g(t) = t^p e^{-rt} Σ_j g_j t^j` and `f̂ = Σ_m c_m l_m¹`, each term is
/// a Laplace image of `t^{p+j+1/2} L_m¹(t)` at `σ = 1/2 + rs - ix`.
pub fn cwt<T: Real>(fhat: &RPlusCoeffs<T>, g: &AnalyzerProfile<T>, x: T, s: T) -> Result<Cx<T>> {
    if !(s > T::zero()) || !s.is_finite() || !x.is_finite() {
        return invalid(format!("wavelet transform needs finite x and s > 0, got ({x}, {s})"));
    }
    let p = g.power();
    let sg = cx(T::half() + g.rate() * s, -x);
    let mut acc = cx(T::zero(), T::zero());
    for (j, &gj) in g.monomials().iter().enumerate() {
        if gj == T::zero() {
            continue;
        }
        let w = p + from_usize::<T>(j) + T::half();
        let mut mode_sum = cx(T::zero(), T::zero());
        for (m, c) in fhat.coeffs.iter().enumerate() {
            if c.norm_sqr() > T::zero() {
                mode_sum = mode_sum + c * laguerre_laplace(w, m, T::one(), sg)?;
            }
        }
        acc = acc + mode_sum * (gj * s.powi(j as i32));
    }
    Ok(acc * s.powf(T::half() + p))
}

/// `Σ_k W_{g_k} f̂_k(x, s)`.
pub fn vector_cwt<T: Real>(f: &ChannelSet<T>, g: &[AnalyzerProfile<T>], x: T, s: T) -> Result<Cx<T>> {
    if f.len() != g.len() {
        return invalid(format!("{} channels but {} analyzing profiles", f.len(), g.len()));
    }
    let mut acc = cx(T::zero(), T::zero());
    for (ch, prof) in f.channels.iter().zip(g) {
        acc = acc + cwt(ch, prof, x, s)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laguerre::GaussLaguerre;

    fn close(a: Cx<f64>, b: Cx<f64>, tol: f64) {
        assert!((a - b).norm() <= tol * b.norm().max(1e-300), "{a} vs {b}");
    }

    /// Direct quadrature of the defining integral.
    fn cwt_quadrature(f: &RPlusCoeffs<f64>, g: &AnalyzerProfile<f64>, x: f64, s: f64) -> Cx<f64> {
        let rate = 0.5 + s;
        // the integrand behaves like t^{p+1/2} at the origin
        let a = g.power() + 0.5;
        let rule = GaussLaguerre::new(160, a).unwrap();
        let mut acc = cx(0.0, 0.0);
        for (&u, &w) in rule.nodes.iter().zip(&rule.weights) {
            let t = u / rate;
            // undo the u^a e^{-u} weight
            let integrand =
                f.eval(t) * cx(0.0, x * t).exp() * s.sqrt() * g.evaluate(s * t) * u.exp() / u.powf(a);
            acc += integrand * w;
        }
        acc / rate
    }

    #[test]
    fn examples_at_origin() {
        let l0 = RPlusCoeffs::mode(0);
        let phi0 = AnalyzerProfile::phi(0);
        close(cwt(&l0, &phi0, 0.0, 1.0).unwrap(), cx(4.0 / 9.0, 0.0), 1e-15);
        for &s in &[0.1f64, 0.7, 4.0] {
            let want: f64 = s / (0.5f64 + s).powi(2);
            close(cwt(&l0, &phi0, 0.0, s).unwrap(), cx(want, 0.0), 1e-14);
        }
        assert!(cwt(&l0, &phi0, 0.0, 0.0).is_err());
    }

    #[test]
    fn closed_form_matches_quadrature() {
        let f = RPlusCoeffs::new(vec![cx(0.5, 0.1), cx(-0.3, 0.9), cx(0.2, 0.0), cx(0.0, -0.4)]).unwrap();
        let profiles = [
            AnalyzerProfile::phi(0),
            AnalyzerProfile::phi(2),
            AnalyzerProfile::phi(3),
            AnalyzerProfile::psi(0.5).unwrap(),
            AnalyzerProfile::psi(1.0).unwrap(),
            AnalyzerProfile::psi(1.3).unwrap(),
        ];
        for g in &profiles {
            for &(x, s) in &[(0.0, 1.0), (1.1, 0.5), (-0.7, 2.0)] {
                close(cwt(&f, g, x, s).unwrap(), cwt_quadrature(&f, g, x, s), 1e-10);
            }
        }
    }

    #[test]
    fn vector_transform() {
        let l0 = RPlusCoeffs::mode(0);
        let phis = AnalyzerProfile::phi_vector(2);
        let set = ChannelSet::new(vec![l0.clone(), RPlusCoeffs::zeros(1)]).unwrap();
        close(vector_cwt(&set, &phis, 0.3, 1.2).unwrap(), cwt(&l0, &phis[0], 0.3, 1.2).unwrap(), 1e-15);
        assert!(vector_cwt(&set, &phis[..1], 0.3, 1.2).is_err());
    }
}
