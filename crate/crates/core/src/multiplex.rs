//! Multiplexing `n` Fourier-side channels into one polyanalytic field and
//! recovering them by projection onto the true components.
//!
//! Channel `k` with Laguerre coefficients `c[k][m]` becomes the component
//! `Σ_m c[k][m] e_{k,m}`, since `Berᵏ l_m¹ = e_{k,m}`. The components are
//! mutually orthogonal, so decoding is a projection.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::halfplane::{HalfPlaneGrid, HalfPlanePoint};
use crate::polyspace::{basis_norm, grid_moments, FieldRepr, GalerkinSystem, PolyField};
use crate::scalar::{cx, is_finite_cx, lit, Cx, Real};
use crate::transforms::{ChannelSet, RPlusCoeffs};

/// Default channel limit.
pub const MAX_CHANNELS: usize = 8;
/// Default mode limit.
pub const MAX_MODES: usize = 64;
/// Mode cutoff used for codec work.
pub const CODEC_MODES: usize = 16;

/// An encoded field `F = Σ_{k<n} Σ_{m<M} c[k][m] e_{k,m}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct MuxField<T: Real> {
    pub n: usize,
    #[serde(rename = "M")]
    pub modes: usize,
    pub coeffs: Vec<Vec<Cx<T>>>,
    #[serde(skip)]
    pub samples: Option<Vec<Cx<T>>>,
}

impl<T: Real> MuxField<T> {
    /// Checks shape, limits and finiteness (e.g. after deserialization).
    pub fn validate(&self) -> Result<()> {
        check_shape(self.n, self.modes)?;
        if self.coeffs.len() != self.n {
            return invalid(format!("{} coefficient rows for {} channels", self.coeffs.len(), self.n));
        }
        for (k, row) in self.coeffs.iter().enumerate() {
            if row.len() != self.modes {
                return invalid(format!("row {k} has {} modes, expected {}", row.len(), self.modes));
            }
            if let Some(m) = row.iter().position(|c| !is_finite_cx(*c)) {
                return Err(Error::NumericOverflow { at: format!("c[{k}][{m}]"), detail: format!("{}", row[m]) });
            }
        }
        Ok(())
    }

    pub fn to_field(&self) -> Result<PolyField<T>> {
        PolyField::from_coefficients(self.n, self.coeffs.clone())
    }

    pub fn eval(&self, z: HalfPlanePoint<T>) -> Result<Cx<T>> {
        Ok(self.to_field()?.eval(z))
    }

    /// Samples the field on `grid` and stores them.
    pub fn render(&mut self, grid: &HalfPlaneGrid<T>) -> Result<&[Cx<T>]> {
        let field = self.to_field()?;
        let samples = grid.sample(|p| field.eval(p))?;
        Ok(self.samples.insert(samples))
    }

    /// `‖F‖² = π Σ_{k,m} |c[k][m]|² (m+1)`.
    pub fn norm_sq(&self) -> T {
        self.coeffs
            .iter()
            .flat_map(|row| row.iter().enumerate())
            .map(|(m, c)| c.norm_sqr() * basis_norm::<T>(m).powi(2))
            .sum()
    }
}

fn check_shape(n: usize, modes: usize) -> Result<()> {
    if n == 0 || n > MAX_CHANNELS {
        return invalid(format!("channel count must be in 1..={MAX_CHANNELS}, got {n}"));
    }
    if modes == 0 || modes > MAX_MODES {
        return invalid(format!("mode cutoff must be in 1..={MAX_MODES}, got {modes}"));
    }
    Ok(())
}

/// Coefficient-level encoding; exact.
pub fn encode<T: Real>(f: &ChannelSet<T>) -> Result<MuxField<T>> {
    f.validate()?;
    let (n, modes) = (f.len(), f.modes());
    check_shape(n, modes)?;
    Ok(MuxField { n, modes, coeffs: f.channels.iter().map(|c| c.coeffs.clone()).collect(), samples: None })
}

/// Reads the channels back from the coefficient table; exact.
pub fn decode_coefficients<T: Real>(field: &MuxField<T>, n: usize, modes: usize) -> Result<ChannelSet<T>> {
    field.validate()?;
    if field.n != n || field.modes != modes {
        return invalid(format!(
            "field has {}x{} coefficients, caller declared {n}x{modes}",
            field.n, field.modes
        ));
    }
    ChannelSet::new(field.coeffs.iter().map(|row| RPlusCoeffs::new(row.clone())).collect::<Result<_>>()?)
}

/// How sampled fields are projected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum DecodeMethod {
    /// Discrete orthogonal projection: solves the grid's Gram system.
    #[default]
    Galerkin,
    /// `c[k][m] = ⟨F, ẽ_{k,m}⟩_grid / √(π(m+1))`, no Gram correction.
    Plain,
}

/// Reusable decoder for fields sampled on one grid.
#[derive(Debug, Clone)]
pub struct SampledDecoder<T> {
    pub n: usize,
    pub modes: usize,
    pub method: DecodeMethod,
    system: Option<GalerkinSystem<T>>,
}

impl<T: Real> SampledDecoder<T> {
    /// Assembles the Gram system (Galerkin) and checks its conditioning.
    pub fn new(grid: &HalfPlaneGrid<T>, n: usize, modes: usize, method: DecodeMethod) -> Result<Self> {
        check_shape(n, modes)?;
        let system = match method {
            DecodeMethod::Galerkin => Some(GalerkinSystem::assemble(grid, n, modes)?),
            DecodeMethod::Plain => None,
        };
        Ok(Self { n, modes, method, system })
    }

    /// Gram condition number and `max |G - I|`, when assembled.
    pub fn conditioning(&self) -> Option<(T, T)> {
        self.system.as_ref().map(|s| (s.condition, s.max_gram_dev))
    }

    pub fn decode(&self, grid: &HalfPlaneGrid<T>, samples: &[Cx<T>]) -> Result<ChannelSet<T>> {
        if samples.len() != grid.len() {
            return invalid(format!("{} samples for a grid of {} nodes", samples.len(), grid.len()));
        }
        let normalized: Vec<Cx<T>> = match &self.system {
            Some(system) => system.solve_samples(grid, samples)?,
            None => grid_moments(grid, samples, self.n, self.modes)?,
        };
        let channels = (0..self.n)
            .map(|k| {
                let row = (0..self.modes)
                    .map(|m| normalized[k * self.modes + m] / basis_norm::<T>(m))
                    .collect();
                RPlusCoeffs::new(row)
            })
            .collect::<Result<Vec<_>>>()?;
        ChannelSet::new(channels)
    }
}

/// One-shot sampled decode with the default method.
pub fn decode_samples<T: Real>(grid: &HalfPlaneGrid<T>, samples: &[Cx<T>], n: usize, modes: usize) -> Result<ChannelSet<T>> {
    SampledDecoder::new(grid, n, modes, DecodeMethod::Galerkin)?.decode(grid, samples)
}

/// Decodes a field that may or may not carry coefficients: coefficient
/// tables are read exactly, closures are sampled on `grid`.
pub fn decode_field<T: Real>(
    field: &PolyField<T>,
    n: usize,
    modes: usize,
    grid: Option<&HalfPlaneGrid<T>>,
) -> Result<ChannelSet<T>> {
    match &field.repr {
        FieldRepr::Coefficients(c) => {
            let mux = MuxField { n: field.order, modes: c.first().map_or(0, Vec::len), coeffs: c.clone(), samples: None };
            decode_coefficients(&mux, n, modes)
        }
        FieldRepr::Closure(_) => {
            let grid = grid.ok_or_else(|| Error::InvalidArgument("sampled decode needs a grid".into()))?;
            let samples = grid.sample(|p| field.eval(p))?;
            decode_samples(grid, &samples, n, modes)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RoundTripMode {
    Coefficient,
    Sampled,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct StageTimings {
    pub encode_s: f64,
    pub render_s: f64,
    pub decode_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct RoundTripReport<T: Real> {
    pub mode: RoundTripMode,
    /// `‖decoded_k - f_k‖ / ‖f_k‖` (absolute when `f_k = 0`).
    pub errors: Vec<T>,
    /// `X[k][j] = ‖decoded_j‖² / ‖f_k‖²` when only channel `k` is sent.
    pub crosstalk: Vec<Vec<T>>,
    pub timings: StageTimings,
    pub seed: u64,
}

impl<T: Real> RoundTripReport<T> {
    pub fn max_error(&self) -> T {
        self.errors.iter().copied().fold(T::zero(), T::max)
    }

    pub fn max_crosstalk(&self) -> T {
        let mut worst = T::zero();
        for (k, row) in self.crosstalk.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                if j != k {
                    worst = worst.max(x);
                }
            }
        }
        worst
    }

    /// `max_k |X[k][k] - 1|`
    pub fn max_diagonal_dev(&self) -> T {
        self.crosstalk
            .iter()
            .enumerate()
            .map(|(k, row)| (row[k] - T::one()).abs())
            .fold(T::zero(), T::max)
    }
}

/// `n` channels of `modes` complex Gaussian coefficients, scaled by
/// `1/(m+1)` so every channel has a decaying spectrum. Channel `k` uses
/// stream `k` of a ChaCha8 generator seeded with `seed`.
pub fn random_channels<T: Real>(n: usize, modes: usize, seed: u64) -> Result<ChannelSet<T>> {
    check_shape(n, modes)?;
    let channels = (0..n)
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k as u64);
            let coeffs = (0..modes)
                .map(|m| {
                    let re: f64 = StandardNormal.sample(&mut rng);
                    let im: f64 = StandardNormal.sample(&mut rng);
                    cx(lit::<T>(re), lit(im)) / lit::<T>((m + 1) as f64)
                })
                .collect();
            RPlusCoeffs::new(coeffs)
        })
        .collect::<Result<Vec<_>>>()?;
    ChannelSet::new(channels)
}

/// Per-channel `‖got_k - want_k‖ / ‖want_k‖` (absolute when `want_k = 0`).
pub fn channel_errors<T: Real>(got: &ChannelSet<T>, want: &ChannelSet<T>) -> Result<Vec<T>> {
    if got.len() != want.len() {
        return invalid(format!("{} channels compared with {}", got.len(), want.len()));
    }
    let modes = got.modes().max(want.modes());
    Ok(got.channels.iter().zip(&want.channels).map(|(g, w)| channel_error(&g.padded(modes), &w.padded(modes))).collect())
}

fn channel_error<T: Real>(got: &RPlusCoeffs<T>, want: &RPlusCoeffs<T>) -> T {
    let diff = got.add(&want.scale(cx(-T::one(), T::zero())));
    let ref_norm = want.norm_sq();
    if ref_norm > T::zero() {
        (diff.norm_sq() / ref_norm).sqrt()
    } else {
        diff.norm_sq().sqrt()
    }
}

fn isolate<T: Real>(f: &ChannelSet<T>, k: usize) -> Result<ChannelSet<T>> {
    ChannelSet::new(
        f.channels
            .iter()
            .enumerate()
            .map(|(j, c)| if j == k { c.clone() } else { RPlusCoeffs::zeros(c.modes()) })
            .collect(),
    )
}

/// Encodes, optionally renders on `grid`, decodes, and measures per-channel
/// error and crosstalk. `seed` is recorded for provenance.
pub fn roundtrip<T: Real>(
    f: &ChannelSet<T>,
    mode: RoundTripMode,
    grid: Option<&HalfPlaneGrid<T>>,
    method: DecodeMethod,
    seed: u64,
) -> Result<RoundTripReport<T>> {
    let (n, modes) = (f.len(), f.modes());
    let mut timings = StageTimings::default();
    let decoder = match mode {
        RoundTripMode::Coefficient => None,
        RoundTripMode::Sampled => {
            let grid = grid.ok_or_else(|| Error::InvalidArgument("sampled roundtrip needs a grid".into()))?;
            let t = Instant::now();
            let d = SampledDecoder::new(grid, n, modes, method)?;
            timings.decode_s += t.elapsed().as_secs_f64();
            Some((grid, d))
        }
    };
    let run = |input: &ChannelSet<T>, timings: &mut StageTimings| -> Result<ChannelSet<T>> {
        let t = Instant::now();
        let mut mux = encode(input)?;
        timings.encode_s += t.elapsed().as_secs_f64();
        match &decoder {
            None => {
                let t = Instant::now();
                let out = decode_coefficients(&mux, n, modes);
                timings.decode_s += t.elapsed().as_secs_f64();
                out
            }
            Some((grid, d)) => {
                let t = Instant::now();
                mux.render(grid)?;
                timings.render_s += t.elapsed().as_secs_f64();
                let t = Instant::now();
                let out = d.decode(grid, mux.samples.as_deref().unwrap_or(&[]));
                timings.decode_s += t.elapsed().as_secs_f64();
                out
            }
        }
    };
    let decoded = run(f, &mut timings)?;
    let errors = decoded.channels.iter().zip(&f.channels).map(|(g, w)| channel_error(g, w)).collect();
    let mut crosstalk = Vec::with_capacity(n);
    for k in 0..n {
        let sent = f.channels[k].norm_sq();
        if sent == T::zero() {
            crosstalk.push((0..n).map(|j| if j == k { T::one() } else { T::zero() }).collect());
            continue;
        }
        let out = run(&isolate(f, k)?, &mut timings)?;
        crosstalk.push(out.channels.iter().map(|c| c.norm_sq() / sent).collect());
    }
    Ok(RoundTripReport { mode, errors, crosstalk, timings, seed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::halfplane::{make_grid, Measure};
    use crate::transforms::true_ber;

    fn one() -> Cx<f64> {
        cx(1.0, 0.0)
    }

    fn zero() -> Cx<f64> {
        cx(0.0, 0.0)
    }

    #[test]
    fn encode_examples() {
        let f = ChannelSet::new(vec![RPlusCoeffs::<f64>::mode(0)]).unwrap();
        assert_eq!(encode(&f).unwrap().coeffs, vec![vec![one()]]);
        let f = ChannelSet::new(vec![RPlusCoeffs::<f64>::mode(0), RPlusCoeffs::mode(1)]).unwrap();
        let mux = encode(&f).unwrap();
        assert_eq!(mux.coeffs, vec![vec![one(), zero()], vec![zero(), one()]]);

        let twice = ChannelSet::new(vec![RPlusCoeffs::<f64>::mode(0), RPlusCoeffs::mode(0)]).unwrap();
        let z = HalfPlanePoint::new(0.0, 1.0).unwrap();
        let v = encode(&twice).unwrap().eval(z).unwrap();
        let l0 = RPlusCoeffs::mode(0);
        let oracle = true_ber(&l0, 0, z) + true_ber(&l0, 1, z);
        assert!((v - oracle).norm() < 1e-14);
        assert!((v - cx(4.0 / 9.0 - 20.0 / 27.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn shape_limits() {
        let many = ChannelSet::new(vec![RPlusCoeffs::<f64>::mode(0); MAX_CHANNELS + 1]).unwrap();
        assert!(encode(&many).is_err());
        let f = ChannelSet::new(vec![RPlusCoeffs::<f64>::mode(2)]).unwrap();
        let mux = encode(&f).unwrap();
        assert!(decode_coefficients(&mux, 2, 3).is_err());
        let mut bad = mux.clone();
        bad.coeffs[0][1] = cx(f64::NAN, 0.0);
        assert!(bad.validate().is_err());
    }

    #[test]
    fn json_shape() {
        let f = ChannelSet::new(vec![RPlusCoeffs::<f64>::mode(0)]).unwrap();
        let text = serde_json::to_string(&encode(&f).unwrap()).unwrap();
        assert_eq!(text, r#"{"n":1,"M":1,"coeffs":[[[1.0,0.0]]]}"#);
        let back: MuxField<f64> = serde_json::from_str(&text).unwrap();
        assert!(back.validate().is_ok());
    }

    #[test]
    fn coefficient_roundtrip_is_exact() {
        let f = random_channels::<f64>(3, 6, 9).unwrap();
        let rep = roundtrip(&f, RoundTripMode::Coefficient, None, DecodeMethod::Galerkin, 9).unwrap();
        assert_eq!(rep.max_error(), 0.0);
        assert_eq!(rep.max_crosstalk(), 0.0);
        assert_eq!(rep.max_diagonal_dev(), 0.0);
    }

    #[test]
    fn sampled_roundtrip_small() {
        let grid = make_grid(40.0, 512, 1e-5, 1e3, 200, Measure::Plain).unwrap();
        let f = random_channels::<f64>(2, 4, 5).unwrap();
        let rep = roundtrip(&f, RoundTripMode::Sampled, Some(&grid), DecodeMethod::Galerkin, 5).unwrap();
        assert!(rep.max_error() < 1e-6, "{rep:?}");
        assert!(rep.max_crosstalk() < 1e-6, "{rep:?}");
        let plain = roundtrip(&f, RoundTripMode::Sampled, Some(&grid), DecodeMethod::Plain, 5).unwrap();
        assert!(plain.max_error() < 0.05, "{plain:?}");
    }

    #[test]
    fn random_channels_are_reproducible() {
        let a = random_channels::<f64>(3, 5, 11).unwrap();
        assert_eq!(a, random_channels(3, 5, 11).unwrap());
        assert_ne!(a, random_channels(3, 5, 12).unwrap());
        assert_ne!(a.channels[0], a.channels[1]);
    }
}
