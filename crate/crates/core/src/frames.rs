//! Sampling sums on hyperbolic lattices, empirical frame bounds, the density
//! condition and the quasi-periodic function `h`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::halfplane::{make_lattice_window, GridSpec, HalfPlanePoint, IndexRange, Lattice};
use crate::linalg::{extreme_eigenvalues, Cholesky, Matrix};
use crate::polyspace::{basis_block, PolyField};
use crate::reduce::pairwise_sum;
use crate::scalar::{cx, from_usize, is_finite_cx, lit, Cx, Real};

/// `Σ_{z∈Γ} s² |F(z)|²`, summed in lattice order.
pub fn sampling_sum<T: Real>(field: &PolyField<T>, lattice: &Lattice<T>) -> Result<T> {
    let terms = lattice
        .points
        .par_iter()
        .map(|p| {
            let v = field.eval(p.z);
            if !is_finite_cx(v) {
                return Err(Error::NumericOverflow {
                    at: format!("lattice index (m={}, k={})", p.m, p.k),
                    detail: format!("{v}"),
                });
            }
            Ok(p.z.s * p.z.s * v.norm_sqr())
        })
        .collect::<Result<Vec<T>>>()?;
    Ok(pairwise_sum(&terms))
}

/// Which subspace the random test functions are drawn from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum FrameSpace {
    /// The true space spanned by `ẽ_{n,m}`.
    #[default]
    True,
    /// `𝐀^{n+1}`, spanned by `ẽ_{k,m}` for `k <= n`.
    Full,
}

/// Empirical frame bounds from a finite random dictionary. `lower_est` is an
/// upper bound for the optimal lower frame bound and `upper_est` a lower
/// bound for the optimal upper one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct FrameReport<T: Real> {
    pub a: T,
    pub b: T,
    pub n: usize,
    pub lower_est: T,
    pub upper_est: T,
    pub ratio: T,
    pub density_value: T,
    pub threshold: T,
    pub dictionary_size: usize,
    pub seed: u64,
}

/// Default level range for frame scans.
pub const FRAME_LEVELS: IndexRange = IndexRange { lo: -6, hi: 6 };

/// Lattice used by frame scans: levels [`FRAME_LEVELS`], `|x|` up to 1.5
/// times the verification grid half-width.
pub fn frame_lattice<T: Real>(a: T, b: T) -> Result<Lattice<T>> {
    let x_max = lit::<T>(1.5) * GridSpec::<T>::verification().x_half_width;
    make_lattice_window(a, b, FRAME_LEVELS, x_max)
}

/// `ẽ` values at every lattice point, row per point, restricted to the
/// dictionary's span.
fn dictionary_rows<T: Real>(space: FrameSpace, n: usize, modes: usize, lattice: &Lattice<T>) -> Result<Vec<Vec<Cx<T>>>> {
    let (order, first) = match space {
        FrameSpace::True => (n + 1, n),
        FrameSpace::Full => (n + 1, 0),
    };
    lattice
        .points
        .par_iter()
        .map(|p| {
            let block = basis_block(order, modes, p.z);
            let row: Vec<Cx<T>> = block[first * modes..].iter().map(|v| *v * p.z.s).collect();
            if let Some(bad) = row.iter().find(|v| !is_finite_cx(**v)) {
                return Err(Error::NumericOverflow {
                    at: format!("lattice index (m={}, k={})", p.m, p.k),
                    detail: format!("{bad}"),
                });
            }
            Ok(row)
        })
        .collect()
}

fn random_unit<T: Real>(dim: usize, seed: u64, trial: u64) -> Vec<Cx<T>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    let mut v: Vec<Cx<T>> = (0..dim)
        .map(|_| {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            cx(lit(re), lit(im))
        })
        .collect();
    let norm = v.iter().map(|c| c.norm_sqr()).sum::<T>().sqrt();
    for c in &mut v {
        *c = *c / norm;
    }
    v
}

/// [`frame_ratio_in`] on the true space.
pub fn frame_ratio<T: Real>(n: usize, lattice: &Lattice<T>, modes: usize, trials: usize, seed: u64) -> Result<FrameReport<T>> {
    frame_ratio_in(FrameSpace::True, n, lattice, modes, trials, seed)
}

/// Draws `trials` unit coefficient vectors (Gaussian, stream `trial` of a
/// ChaCha8 generator seeded with `seed`), and reports the extremes of
/// `sampling_sum(F) / ‖F‖²`.
pub fn frame_ratio_in<T: Real>(
    space: FrameSpace,
    n: usize,
    lattice: &Lattice<T>,
    modes: usize,
    trials: usize,
    seed: u64,
) -> Result<FrameReport<T>> {
    if trials == 0 || modes == 0 {
        return invalid("frame estimation needs trials >= 1 and modes >= 1");
    }
    if lattice.is_empty() {
        return invalid("frame estimation needs a non-empty lattice");
    }
    let rows = dictionary_rows(space, n, modes, lattice)?;
    let dim = rows[0].len();
    let ratios: Vec<T> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let c = random_unit::<T>(dim, seed, t as u64);
            let terms: Vec<T> = rows
                .iter()
                .map(|row| row.iter().zip(&c).fold(cx(T::zero(), T::zero()), |acc, (e, c)| acc + e * c).norm_sqr())
                .collect();
            pairwise_sum(&terms)
        })
        .collect();
    let lower_est = ratios.iter().copied().fold(T::infinity(), T::min);
    let upper_est = ratios.iter().copied().fold(T::zero(), T::max);
    let density_value = lattice.density_value();
    Ok(FrameReport {
        a: lattice.a,
        b: lattice.b,
        n,
        lower_est,
        upper_est,
        ratio: if upper_est > T::zero() { lower_est / upper_est } else { T::zero() },
        density_value,
        threshold: necessary_threshold(n, T::zero()),
        dictionary_size: trials,
        seed,
    })
}

/// Exact extremes of `sampling_sum(F)/‖F‖²` over the whole span of the
/// dictionary, from the eigenvalues of its lattice Gram matrix. A singular
/// Gram matrix reports a lower bound of zero.
pub fn span_frame_bounds<T: Real>(space: FrameSpace, n: usize, lattice: &Lattice<T>, modes: usize) -> Result<(T, T)> {
    if modes == 0 || lattice.is_empty() {
        return invalid("span bounds need modes >= 1 and a non-empty lattice");
    }
    let rows = dictionary_rows(space, n, modes, lattice)?;
    let dim = rows[0].len();
    let mut gram = Matrix::zeros(dim);
    for row in &rows {
        for i in 0..dim {
            for j in 0..dim {
                gram.set(i, j, gram.get(i, j) + row[i].conj() * row[j]);
            }
        }
    }
    match Cholesky::new(&gram) {
        Ok(chol) => Ok(extreme_eigenvalues(&gram, &chol, 4000)),
        Err(_) => {
            let upper = (0..dim).map(|i| gram.get(i, i).re).fold(T::zero(), T::max);
            Ok((T::zero(), upper))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct ConditionReport<T: Real> {
    pub value: T,
    pub threshold: T,
    pub satisfied: bool,
    pub margin: T,
}

/// `2π(n+1)/(α+1)`.
pub fn necessary_threshold<T: Real>(n: usize, alpha: T) -> T {
    T::two() * T::PI() * from_usize::<T>(n + 1) / (alpha + T::one())
}

/// Compares `b ln a` against `2π(n+1)/(α+1)`; sampling sequences must lie
/// strictly below. Pass `n = 0` for the vector-valued (superframe) case.
pub fn necessary_condition<T: Real>(a: T, b: T, n: usize, alpha: T) -> Result<ConditionReport<T>> {
    if !(a > T::one()) || !a.is_finite() {
        return invalid(format!("dilation a must exceed 1, got {a}"));
    }
    if !(b > T::zero()) || !b.is_finite() {
        return invalid(format!("translation b must be positive, got {b}"));
    }
    if !(alpha >= T::zero()) || !alpha.is_finite() {
        return invalid(format!("weight alpha must be >= 0, got {alpha}"));
    }
    let value = b * a.ln();
    let threshold = necessary_threshold(n, alpha);
    Ok(ConditionReport { value, threshold, satisfied: value < threshold, margin: threshold - value })
}

/// Smallest truncation accepted by [`h_eval`].
pub const MIN_H_TRUNCATION: usize = 8;

const POLE_FLOOR: f64 = 1e-14;

/// `ln sin w`, exact for any `w`: the dominant exponential is factored out
/// so large imaginary parts never overflow. Also returns `|1 - e^{±2iw}|`,
/// the size of `sin w` relative to that exponential, for pole checks.
fn ln_sin<T: Real>(w: Cx<T>) -> (Cx<T>, T) {
    let i = cx(T::zero(), T::one());
    let ln2 = lit::<T>(std::f64::consts::LN_2);
    if w.im >= T::zero() {
        // sin w = i/2 · e^{-iw} (1 - e^{2iw})
        let rest = cx(T::one(), T::zero()) - (i * w * T::two()).exp();
        (-i * w + rest.ln() + cx(-ln2, T::FRAC_PI_2()), rest.norm())
    } else {
        // sin w = -i/2 · e^{iw} (1 - e^{-2iw})
        let rest = cx(T::one(), T::zero()) - (-i * w * T::two()).exp();
        (i * w + rest.ln() + cx(-ln2, -T::FRAC_PI_2()), rest.norm())
    }
}

/// `y - n` with `n` the integer nearest `Re y`, so `|Re y| <= 1/2`; exact in
/// binary floating point. `sin π(y - n) = (-1)ⁿ sin πy`.
fn reduce_pi<T: Real>(y: Cx<T>) -> (Cx<T>, T) {
    let n = y.re.round();
    (cx(y.re - n, y.im), n)
}

/// `ln(sin πy₁ / sin πy₂)` given `dy = y₁ - y₂` exactly. When both lie in
/// the upper half-plane the large exponentials cancel analytically.
fn ln_sinpi_ratio<T: Real>(y1: Cx<T>, y2: Cx<T>, dy: Cx<T>) -> (Cx<T>, T) {
    let one = cx(T::one(), T::zero());
    let i = cx(T::zero(), T::one());
    let (r1, n1) = reduce_pi(y1);
    let (r2, n2) = reduce_pi(y2);
    let (w1, w2) = (r1 * T::PI(), r2 * T::PI());
    if w1.im >= T::zero() && w2.im >= T::zero() {
        // e^{2iw} has period π, so the reduced arguments suffice here
        let q1 = one - (i * w1 * T::two()).exp();
        let q2 = one - (i * w2 * T::two()).exp();
        (-i * dy * T::PI() + q1.ln() - q2.ln(), q2.norm())
    } else {
        let (l1, _) = ln_sin(w1);
        let (l2, mag) = ln_sin(w2);
        // (-1)^{n₁-n₂}
        let parity = ((n1 - n2) / T::two()).fract().abs() * T::two();
        (l1 - l2 + cx(T::zero(), T::PI() * parity), mag)
    }
}

fn h_params<T: Real>(a: T, b: T, trunc: usize) -> Result<()> {
    if !(a > T::one()) || !a.is_finite() || !(b > T::zero()) || !b.is_finite() {
        return invalid(format!("h needs a > 1 and b > 0, got ({a}, {b})"));
    }
    if trunc < MIN_H_TRUNCATION {
        return invalid(format!("h truncation must be >= {MIN_H_TRUNCATION}, got {trunc}"));
    }
    Ok(())
}

/// `ln h_K(z)` (imaginary part modulo 2π), where
///
/// ```text
/// h_K(z) = Π_{k=0}^{K} sin(π b⁻¹ a^{-k} (i a^k - z)) / sin(π b⁻¹ a^{-k} (i a^k + z))
///        · Π_{m=1}^{K} e^{2π/b} sin(π b⁻¹ a^m (z - i a^{-m})) / sin(π b⁻¹ a^m (z + i a^{-m}))
/// ```
///
/// Returns `-∞` real part when `z` hits a zero exactly.
pub fn h_log<T: Real>(z: HalfPlanePoint<T>, a: T, b: T, trunc: usize) -> Result<Cx<T>> {
    h_params(a, b, trunc)?;
    let zc = z.z();
    let i = cx(T::zero(), T::one());
    let inv_b = T::one() / b;
    let mut acc = cx(T::zero(), T::zero());
    let mut scale = T::one();
    for k in 0..=trunc {
        // scale = a^{-k}; factor sin π(i - z a^{-k})/b / sin π(i + z a^{-k})/b
        let t = zc * scale * inv_b;
        let c = i * inv_b;
        let (ratio, den_mag) = ln_sinpi_ratio(c - t, c + t, -(t * T::two()));
        if den_mag < lit(POLE_FLOOR) {
            return Err(Error::PoleProximity { at: format!("first product, k={k}"), magnitude: den_mag.to_f64().unwrap_or(0.0) });
        }
        acc = acc + ratio;
        scale = scale / a;
    }
    let boost = cx(T::two() * T::PI() * inv_b, T::zero());
    let mut scale = a;
    for m in 1..=trunc {
        // scale = a^m; factor e^{2π/b} sin π(a^m z - i)/b / sin π(a^m z + i)/b
        let t = zc * scale * inv_b;
        let c = i * inv_b;
        let (ratio, den_mag) = ln_sinpi_ratio(t - c, t + c, -(c * T::two()));
        if den_mag < lit(POLE_FLOOR) {
            return Err(Error::PoleProximity { at: format!("second product, m={m}"), magnitude: den_mag.to_f64().unwrap_or(0.0) });
        }
        acc = acc + boost + ratio;
        scale = scale * a;
        if !scale.is_finite() {
            // remaining factors are 1 to working precision
            break;
        }
    }
    if acc.re.is_nan() || acc.im.is_nan() {
        return Err(Error::NumericOverflow { at: format!("h({})", zc), detail: "log-product is NaN".into() });
    }
    Ok(acc)
}

/// The truncated product `h_K(z)`; see [`h_log`].
pub fn h_eval<T: Real>(z: HalfPlanePoint<T>, a: T, b: T, trunc: usize) -> Result<Cx<T>> {
    let l = h_log(z, a, b, trunc)?;
    if l.re == T::neg_infinity() {
        return Ok(cx(T::zero(), T::zero()));
    }
    let v = l.exp();
    if !is_finite_cx(v) {
        return Err(Error::NumericOverflow { at: format!("h({})", z.z()), detail: format!("ln|h| = {}", l.re) });
    }
    Ok(v)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct HCheckReport<T: Real> {
    /// `max |h(az) + e^{-2π/b} h(z)| / |h(z)|` over the probes.
    pub quasi_periodicity: T,
    pub slope: T,
    pub expected_slope: T,
    /// `|slope / expected - 1|`
    pub slope_rel_error: T,
}

/// Quasi-periodicity residual over `probes` and the least-squares slope of
/// `ln|h(is)|` against `ln s`. The slope is sampled at `s = a^{j+1/2}`,
/// `j = -3..=2`, midway between the zeros `s = a^j` on the imaginary axis.
pub fn h_checks<T: Real>(a: T, b: T, trunc: usize, probes: &[HalfPlanePoint<T>]) -> Result<HCheckReport<T>> {
    h_params(a, b, trunc)?;
    if probes.is_empty() {
        return invalid("h checks need at least one probe");
    }
    let factor = (-T::two() * T::PI() / b).exp();
    let residuals = probes
        .par_iter()
        .map(|&z| {
            let hz = h_eval(z, a, b, trunc)?;
            let haz = h_eval(z.scaled(a), a, b, trunc)?;
            if hz.norm() == T::zero() {
                return invalid(format!("probe {} is a zero of h", z.z()));
            }
            Ok((haz + hz * factor).norm() / hz.norm())
        })
        .collect::<Result<Vec<T>>>()?;
    let quasi_periodicity = residuals.into_iter().fold(T::zero(), T::max);

    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for j in -3i32..=2 {
        let s = a.powf(lit::<T>(j as f64 + 0.5));
        let l = h_log(HalfPlanePoint { x: T::zero(), s }, a, b, trunc)?;
        xs.push(s.ln());
        ys.push(l.re);
    }
    let slope = least_squares_slope(&xs, &ys);
    let expected_slope = -T::two() * T::PI() / (b * a.ln());
    Ok(HCheckReport {
        quasi_periodicity,
        slope,
        expected_slope,
        slope_rel_error: (slope / expected_slope - T::one()).abs(),
    })
}

fn least_squares_slope<T: Real>(xs: &[T], ys: &[T]) -> T {
    let n = from_usize::<T>(xs.len());
    let mx = xs.iter().copied().sum::<T>() / n;
    let my = ys.iter().copied().sum::<T>() / n;
    let sxy: T = xs.iter().zip(ys).map(|(&x, &y)| (x - mx) * (y - my)).sum();
    let sxx: T = xs.iter().map(|&x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::halfplane::make_lattice;
    use crate::polyspace::{basis_e, basis_e_normalized};

    fn pt(x: f64, s: f64) -> HalfPlanePoint<f64> {
        HalfPlanePoint::new(x, s).unwrap()
    }

    #[test]
    fn sinpi_ratio_matches_direct() {
        let pi = std::f64::consts::PI;
        for &(y1, y2) in &[(cx(0.4, 1.5), cx(-0.2, 2.5)), (cx(7.4, -0.5), cx(-3.2, 0.5)), (cx(1e6 + 0.3, 0.2), cx(0.1, 0.3))] {
            let (l, _) = ln_sinpi_ratio(y1, y2, y1 - y2);
            let want = (y1 * pi).sin() / (y2 * pi).sin();
            assert!((l.exp() - want).norm() < 1e-9 * want.norm(), "{y1} {y2}");
        }
        let (l, _) = ln_sinpi_ratio(cx(-4.0, 0.0), cx(-4.0, 0.5), cx(0.0, -0.5));
        assert_eq!(l.re, f64::NEG_INFINITY);
    }

    #[test]
    fn ln_sin_matches_direct() {
        for &(re, im) in &[(0.3, 0.2), (-1.1, -0.7), (2.0, 5.0), (0.1, -3.0), (4.0, 0.0)] {
            let w = cx(re, im);
            let (l, _) = ln_sin(w);
            let d = w.sin();
            assert!((l.exp() - d).norm() < 1e-13 * d.norm(), "{w}: {} vs {d}", l.exp());
        }
        // no overflow far from the real axis
        let (l, _) = ln_sin(cx(0.5, 2000.0));
        assert!((l.re - (2000.0 - std::f64::consts::LN_2)).abs() < 1e-9);
    }

    #[test]
    fn sampling_sum_examples() {
        let one = make_lattice(2.0, 1.0, IndexRange::single(0), IndexRange::single(0)).unwrap();
        let zero = PolyField::from_closure(1, |_| cx(0.0, 0.0));
        assert_eq!(sampling_sum(&zero, &one).unwrap(), 0.0);
        let e00 = PolyField::from_closure(1, |z| basis_e(0, 0, z));
        assert!((sampling_sum(&e00, &one).unwrap() - (4.0f64 / 9.0).powi(2)).abs() < 1e-15);

        let l = make_lattice(2.0, 1.0, IndexRange::symmetric(2), IndexRange::symmetric(8)).unwrap();
        let f = |z: HalfPlanePoint<f64>| basis_e(1, 2, z) + basis_e(0, 1, z) * cx(0.0, 2.0);
        let field = PolyField::from_closure(2, f);
        let mut oracle = 0.0;
        for m in -2..=2 {
            for k in -8..=8 {
                let s = 2f64.powi(m);
                oracle += s * s * f(pt(s * k as f64, s)).norm_sqr();
            }
        }
        assert!((sampling_sum(&field, &l).unwrap() - oracle).abs() < 1e-12 * oracle);

        let bad = PolyField::from_closure(1, |z: HalfPlanePoint<f64>| if z.s > 3.0 { cx(f64::NAN, 0.0) } else { cx(1.0, 0.0) });
        match sampling_sum(&bad, &l) {
            Err(Error::NumericOverflow { at, .. }) => assert!(at.contains("m=2"), "{at}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn single_mode_dictionary() {
        let l = frame_lattice(2.0, 1.0).unwrap();
        let rep: FrameReport<f64> = frame_ratio(0, &l, 1, 1, 3).unwrap();
        let e00 = PolyField::from_closure(1, |z| basis_e_normalized(0, 0, z));
        let want = sampling_sum(&e00, &l).unwrap();
        assert!((rep.lower_est - want).abs() < 1e-12 * want);
        assert_eq!(rep.lower_est, rep.upper_est);
        assert_eq!(rep.dictionary_size, 1);
        assert!(frame_ratio(0, &l, 0, 1, 3).is_err());
        let empty = make_lattice(2.0, 1.0, IndexRange::new(1, 0), IndexRange::single(0)).unwrap();
        assert!(frame_ratio(0, &empty, 4, 4, 3).is_err());
    }

    #[test]
    fn frame_estimates_are_reproducible_and_ordered() {
        let l = frame_lattice(2f64.powf(0.25), 0.25).unwrap();
        let r1 = frame_ratio(0, &l, 8, 12, 42).unwrap();
        let r2 = frame_ratio(0, &l, 8, 12, 42).unwrap();
        assert_eq!(r1, r2);
        assert!(r1.lower_est > 0.0 && r1.lower_est <= r1.upper_est);
        let (lo, hi) = span_frame_bounds(FrameSpace::True, 0, &l, 8).unwrap();
        assert!(lo <= r1.lower_est * (1.0 + 1e-9) && hi >= r1.upper_est * (1.0 - 1e-9));
        let full = frame_ratio_in(FrameSpace::Full, 1, &l, 4, 6, 42).unwrap();
        assert!(full.lower_est > 0.0);
    }

    #[test]
    fn condition_flips() {
        let check = |a: f64, b: f64, n: usize, alpha: f64| necessary_condition(a, b, n, alpha).unwrap().satisfied;
        assert!(check(2.0, 9.0, 0, 0.0));
        assert!(!check(2.0, 10.0, 0, 0.0));
        assert!(check(2.0, 10.0, 1, 0.0));
        assert!(check(2.0, 18.0, 1, 0.0));
        assert!(!check(2.0, 19.0, 1, 0.0));
        let r = necessary_condition(2.0f64, 9.0, 0, 0.0).unwrap();
        assert!((r.value - 6.238324625039508).abs() < 1e-12);
        assert!((r.margin - (r.threshold - r.value)).abs() == 0.0);
        assert!((necessary_threshold(0, 1.0f64) - std::f64::consts::PI).abs() < 1e-15);
        assert!(necessary_condition(1.0, 1.0, 0, 0.0).is_err());
        assert!(necessary_condition(2.0, 0.0, 0, 0.0).is_err());
        assert!(necessary_condition(2.0, 1.0, 0, -0.5).is_err());
    }

    #[test]
    fn h_vanishes_on_lattice() {
        assert_eq!(h_eval(pt(0.0, 1.0), 2.0, 1.0, 60).unwrap().norm(), 0.0);
        for m in -5..=5 {
            for k in -4..=4 {
                let s = 2f64.powi(m);
                let v = h_eval(pt(s * k as f64, s), 2.0, 1.0, 60).unwrap();
                assert!(v.norm() < 1e-10, "(m={m}, k={k}) -> {v}");
            }
        }
        // every level at distance >= 5 from the truncation boundary
        for m in (-55..=55).step_by(5) {
            for k in [-3i64, 0, 2] {
                let s = 2f64.powi(m);
                let v = h_eval(pt(s * k as f64, s), 2.0, 1.0, 60).unwrap();
                assert!(v.norm() < 1e-10, "(m={m}, k={k}) -> {v}");
            }
        }
    }

    #[test]
    fn h_tail_converges() {
        // 0.5i = 2^{-1} i is itself a lattice point; use a point between levels
        assert_eq!(h_eval(pt(0.0, 0.5), 2.0, 1.0, 200).unwrap().norm(), 0.0);
        let z = pt(0.0, 0.7);
        let a = h_eval(z, 2.0, 1.0, 200).unwrap();
        let b = h_eval(z, 2.0, 1.0, 250).unwrap();
        assert!(a.norm() > 0.0);
        assert!((a - b).norm() < 1e-8 * a.norm());
        assert!(h_eval(z, 2.0, 1.0, 4).is_err());
    }

    #[test]
    fn h_identities() {
        let probes: Vec<_> = (0..20).map(|j| pt(-2.0 + 0.23 * j as f64, 0.3 + 0.17 * j as f64)).collect();
        let rep = h_checks(2.0, 1.0, 200, &probes).unwrap();
        assert!(rep.quasi_periodicity < 1e-6, "{rep:?}");
        assert!(rep.slope_rel_error < 0.05, "{rep:?}");
        let scaled: Vec<_> = probes.iter().map(|p| p.scaled(2.0)).collect();
        assert!(h_checks(2.0, 1.0, 200, &scaled).unwrap().quasi_periodicity < 1e-6);
    }
}
