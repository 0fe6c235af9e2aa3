//! Fourier-side analyzing wavelets.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::halfplane::{inner_rplus, RPlusFunction};
use crate::laguerre::laguerre_recurrence;
use crate::scalar::{binomial, factorial, lit, re, Cx, Real};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileKind<T> {
    /// `ℱΦ_n(t) = t^{1/2} l_n^0(2t)`
    Phi(usize),
    /// `ℱψ_α(t) = t^α e^{-t}`
    Psi(T),
}

/// A profile `g(t) = t^p e^{-r t} P(t)` on `t > 0`, zero elsewhere.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalyzerProfile<T> {
    pub kind: ProfileKind<T>,
    /// Monomial coefficients of `P`.
    #[serde(skip)]
    monomials: Vec<T>,
}

impl<T: Real> AnalyzerProfile<T> {
    pub fn phi(n: usize) -> Self {
        // L_n^0(2t) = Σ_j (-2)^j C(n,j)/j! t^j
        let monomials = (0..=n)
            .map(|j| {
                let sign = if j % 2 == 0 { T::one() } else { -T::one() };
                sign * T::two().powi(j as i32) * binomial::<T>(n, j) / factorial::<T>(j)
            })
            .collect();
        Self { kind: ProfileKind::Phi(n), monomials }
    }

    pub fn psi(alpha: T) -> Result<Self> {
        if !(alpha > -T::half()) || !alpha.is_finite() {
            return invalid(format!("psi profile needs alpha > -1/2, got {alpha}"));
        }
        Ok(Self { kind: ProfileKind::Psi(alpha), monomials: vec![T::one()] })
    }

    /// The vector `(Φ_0, …, Φ_{n-1})`.
    pub fn phi_vector(n: usize) -> Vec<Self> {
        (0..n).map(Self::phi).collect()
    }

    pub fn from_kind(kind: ProfileKind<T>) -> Result<Self> {
        match kind {
            ProfileKind::Phi(n) => Ok(Self::phi(n)),
            ProfileKind::Psi(alpha) => Self::psi(alpha),
        }
    }

    pub fn monomials(&self) -> &[T] {
        &self.monomials
    }

    /// Pointwise value, evaluated from the defining formula.
    pub fn evaluate(&self, t: T) -> T {
        if t <= T::zero() {
            return T::zero();
        }
        match self.kind {
            ProfileKind::Phi(n) => {
                let x = t + t;
                t.sqrt() * (-t).exp() * laguerre_recurrence(n, &T::zero(), &x)
            }
            ProfileKind::Psi(alpha) => t.powf(alpha) * (-t).exp(),
        }
    }
}

impl<T: Real> RPlusFunction<T> for AnalyzerProfile<T> {
    fn power(&self) -> T {
        match self.kind {
            ProfileKind::Phi(_) => T::half(),
            ProfileKind::Psi(alpha) => alpha,
        }
    }

    fn rate(&self) -> T {
        T::one()
    }

    fn envelope_degree(&self) -> usize {
        self.monomials.len() - 1
    }

    fn envelope(&self, t: T) -> Cx<T> {
        re(self.monomials.iter().rev().fold(T::zero(), |acc, &c| acc * t + c))
    }
}

// Exact for the polynomial envelopes used here; lower orders also keep the
// weight-sum rounding below 1e-14.
const ADMISSIBILITY_ORDER: usize = 48;

/// `∫_0^∞ g(t)² t^{-1} dt`.
pub fn admissibility<T: Real>(g: &AnalyzerProfile<T>) -> Result<T> {
    cross_admissibility(g, g)
}

/// `∫_0^∞ g₁(t) g₂(t) t^{-1} dt`.
pub fn cross_admissibility<T: Real>(g1: &AnalyzerProfile<T>, g2: &AnalyzerProfile<T>) -> Result<T> {
    Ok(inner_rplus(g1, g2, -T::one(), ADMISSIBILITY_ORDER)?.re)
}

/// `Γ(2α) 2^{-2α}`, the closed form of `admissibility(psi(α))`.
pub fn psi_admissibility_closed<T: Real>(alpha: T) -> T {
    let two_alpha = alpha + alpha;
    (crate::laguerre::log_gamma_unchecked(two_alpha) - two_alpha * lit::<T>(std::f64::consts::LN_2)).exp()
}
