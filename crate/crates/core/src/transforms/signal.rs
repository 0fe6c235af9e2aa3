//! Fourier-side signals: `f̂ ∈ L²(ℝ⁺)` expanded in the Laguerre functions
//! `l_m¹`.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::halfplane::RPlusFunction;
use crate::laguerre::laguerre_recurrence;
use crate::linalg::{Cholesky, Matrix};
use crate::scalar::{cx, from_usize, is_finite_cx, Cx, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum Basis {
    #[default]
    #[serde(rename = "laguerre-alpha1")]
    LaguerreAlpha1,
}

/// `f̂ = Σ_m c_m l_m¹`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct RPlusCoeffs<T: Real> {
    #[serde(default)]
    pub basis: Basis,
    pub coeffs: Vec<Cx<T>>,
}

impl<T: Real> RPlusCoeffs<T> {
    pub fn new(coeffs: Vec<Cx<T>>) -> Result<Self> {
        if let Some(j) = coeffs.iter().position(|c| !is_finite_cx(*c)) {
            return Err(Error::NumericOverflow {
                at: format!("coefficient {j}"),
                detail: format!("{}", coeffs[j]),
            });
        }
        Ok(Self { basis: Basis::LaguerreAlpha1, coeffs })
    }

    pub fn from_real(coeffs: &[T]) -> Self {
        Self { basis: Basis::LaguerreAlpha1, coeffs: coeffs.iter().map(|&c| cx(c, T::zero())).collect() }
    }

    /// The single mode `l_m¹`.
    pub fn mode(m: usize) -> Self {
        let mut coeffs = vec![cx(T::zero(), T::zero()); m + 1];
        coeffs[m] = cx(T::one(), T::zero());
        Self { basis: Basis::LaguerreAlpha1, coeffs }
    }

    pub fn zeros(modes: usize) -> Self {
        Self { basis: Basis::LaguerreAlpha1, coeffs: vec![cx(T::zero(), T::zero()); modes] }
    }

    pub fn modes(&self) -> usize {
        self.coeffs.len()
    }

    /// `‖f̂‖² = Σ |c_m|² (m+1)`.
    pub fn norm_sq(&self) -> T {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(m, c)| c.norm_sqr() * from_usize(m + 1))
            .sum()
    }

    /// `⟨f̂, ĝ⟩_{L²(ℝ⁺)}`.
    pub fn inner(&self, other: &Self) -> Cx<T> {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .enumerate()
            .map(|(m, (a, b))| a * b.conj() * from_usize::<T>(m + 1))
            .fold(cx(T::zero(), T::zero()), |acc, v| acc + v)
    }

    /// Pointwise value `f̂(t)`.
    pub fn eval(&self, t: T) -> Cx<T> {
        RPlusFunction::eval(self, t)
    }

    pub fn padded(&self, modes: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(modes.max(coeffs.len()), cx(T::zero(), T::zero()));
        Self { basis: self.basis, coeffs }
    }

    pub fn add(&self, other: &Self) -> Self {
        let modes = self.modes().max(other.modes());
        let (a, b) = (self.padded(modes), other.padded(modes));
        Self {
            basis: self.basis,
            coeffs: a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect(),
        }
    }

    pub fn scale(&self, k: Cx<T>) -> Self {
        Self { basis: self.basis, coeffs: self.coeffs.iter().map(|c| c * k).collect() }
    }
}

impl<T: Real> RPlusFunction<T> for RPlusCoeffs<T> {
    fn power(&self) -> T {
        T::half()
    }

    fn rate(&self) -> T {
        T::half()
    }

    fn envelope_degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    fn envelope(&self, t: T) -> Cx<T> {
        let one = T::one();
        self.coeffs
            .iter()
            .enumerate()
            .map(|(m, c)| c * laguerre_recurrence(m, &one, &t))
            .fold(cx(T::zero(), T::zero()), |acc, v| acc + v)
    }
}

/// Weighted least-squares fit `f̂ ≈ Σ_{m<modes} c_m l_m¹` to samples
/// `(t_j, f̂(t_j))` with quadrature weights `w_j`, via the normal equations.
pub fn fit_laguerre<T: Real>(t: &[T], values: &[Cx<T>], weights: &[T], modes: usize) -> Result<RPlusCoeffs<T>> {
    if t.len() != values.len() || t.len() != weights.len() {
        return invalid(format!(
            "fit needs matching lengths, got {} abscissas, {} values, {} weights",
            t.len(),
            values.len(),
            weights.len()
        ));
    }
    if modes == 0 || t.len() < modes {
        return invalid(format!("fit of {modes} modes needs at least that many samples, got {}", t.len()));
    }
    if let Some(j) = t.iter().position(|&x| !(x >= T::zero()) || !x.is_finite()) {
        return invalid(format!("sample {j} lies outside the half-line: t = {}", t[j]));
    }
    let one = T::one();
    let mut gram = Matrix::zeros(modes);
    let mut rhs = vec![cx(T::zero(), T::zero()); modes];
    let mut row = vec![T::zero(); modes];
    for ((&x, &v), &w) in t.iter().zip(values).zip(weights) {
        let envelope = (-x * T::half()).exp() * x.sqrt();
        for (m, r) in row.iter_mut().enumerate() {
            *r = envelope * laguerre_recurrence(m, &one, &x);
        }
        for i in 0..modes {
            rhs[i] = rhs[i] + v * (w * row[i]);
            for j in 0..modes {
                gram.set(i, j, gram.get(i, j) + cx(w * row[i] * row[j], T::zero()));
            }
        }
    }
    let chol = Cholesky::new(&gram)?;
    RPlusCoeffs::new(chol.solve(&rhs))
}

/// `n` Fourier-side channels sharing a mode cutoff.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct ChannelSet<T: Real> {
    pub channels: Vec<RPlusCoeffs<T>>,
}

impl<T: Real> ChannelSet<T> {
    /// Pads every channel to the longest one.
    pub fn new(channels: Vec<RPlusCoeffs<T>>) -> Result<Self> {
        if channels.is_empty() {
            return invalid("a channel set needs at least one channel");
        }
        let modes = channels.iter().map(RPlusCoeffs::modes).max().unwrap_or(0);
        Ok(Self { channels: channels.iter().map(|c| c.padded(modes)).collect() })
    }

    pub fn len(&self) -> usize {
        self.channels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.channels.is_empty()
    }

    pub fn modes(&self) -> usize {
        self.channels.first().map_or(0, RPlusCoeffs::modes)
    }

    /// `Σ_k ‖f̂_k‖²`.
    pub fn norm_sq(&self) -> T {
        self.channels.iter().map(RPlusCoeffs::norm_sq).sum()
    }

    /// Checks the invariants after deserialization.
    pub fn validate(&self) -> Result<()> {
        if self.channels.is_empty() {
            return invalid("a channel set needs at least one channel");
        }
        let modes = self.modes();
        for (k, ch) in self.channels.iter().enumerate() {
            if ch.modes() != modes {
                return invalid(format!(
                    "channel {k} has {} modes, channel 0 has {modes}",
                    ch.modes()
                ));
            }
            RPlusCoeffs::new(ch.coeffs.clone())
                .map_err(|e| Error::InvalidArgument(format!("channel {k}: {e}")))?;
        }
        Ok(())
    }
}
