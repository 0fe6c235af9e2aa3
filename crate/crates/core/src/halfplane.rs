//! Geometry and quadrature on the upper half-plane and on the half-line.

use std::fmt;
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::laguerre::GaussLaguerre;
use crate::reduce::pairwise_sum_cx;
use crate::scalar::{cx, from_usize, lit, Cx, Real};

/// A point `z = x + i s` with `s > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HalfPlanePoint<T> {
    pub x: T,
    pub s: T,
}

impl<T: Real> HalfPlanePoint<T> {
    pub fn new(x: T, s: T) -> Result<Self> {
        if !x.is_finite() || !s.is_finite() || !(s > T::zero()) {
            return invalid(format!("half-plane point needs finite x and s > 0, got ({x}, {s})"));
        }
        Ok(Self { x, s })
    }

    pub fn from_complex(z: Cx<T>) -> Result<Self> {
        Self::new(z.re, z.im)
    }

    pub fn z(&self) -> Cx<T> {
        cx(self.x, self.s)
    }

    /// `a·z` for real `a > 0`.
    pub fn scaled(&self, a: T) -> Self {
        Self { x: self.x * a, s: self.s * a }
    }
}

impl<T: Real> fmt::Display for HalfPlanePoint<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:+}i", self.x, self.s)
    }
}

/// Area measure on the half-plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure<T> {
    /// `dx ds`
    Plain,
    /// `s^{-2} dx ds`
    Affine,
    /// `s^α dx ds`
    Weighted(T),
}

impl<T: Real> Measure<T> {
    pub fn density(&self, s: T) -> T {
        match *self {
            Measure::Plain => T::one(),
            Measure::Affine => (s * s).recip(),
            Measure::Weighted(alpha) => s.powf(alpha),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Truncation<T> {
    pub x_range: [T; 2],
    pub s_range: [T; 2],
}

/// Tensor-product quadrature grid: midpoint rule in `x`, midpoint rule in
/// `ln s`. Nodes are ordered x-major, then s.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HalfPlaneGrid<T> {
    pub nodes: Vec<HalfPlanePoint<T>>,
    pub weights: Vec<T>,
    pub measure: Measure<T>,
    pub truncation: Truncation<T>,
}

/// Parameters of [`make_grid`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec<T> {
    pub x_half_width: T,
    pub n_x: usize,
    pub s_min: T,
    pub s_max: T,
    pub n_s: usize,
}

impl<T: Real> GridSpec<T> {
    /// `x ∈ [-60, 60]` with 1024 nodes, `s ∈ [1e-6, 1e3]` with 400
    /// log-uniform nodes.
    ///
    /// The lower `s` cutoff controls the dominant truncation error: a field
    /// `F = Ber f̂` loses roughly `s_min · ∫|F(x+i0)|² dx` of its norm below the
    /// cutoff, which for the Laguerre mode `m` is `4(m+1)·s_min` relative.
    pub fn verification() -> Self {
        Self {
            x_half_width: lit(60.0),
            n_x: 1024,
            s_min: lit(1e-6),
            s_max: lit(1e3),
            n_s: 400,
        }
    }

    pub fn build(&self, measure: Measure<T>) -> Result<HalfPlaneGrid<T>> {
        make_grid(self.x_half_width, self.n_x, self.s_min, self.s_max, self.n_s, measure)
    }
}

pub fn make_grid<T: Real>(
    x_half_width: T,
    n_x: usize,
    s_min: T,
    s_max: T,
    n_s: usize,
    measure: Measure<T>,
) -> Result<HalfPlaneGrid<T>> {
    if !(x_half_width > T::zero()) || !x_half_width.is_finite() {
        return invalid(format!("grid half-width must be positive, got {x_half_width}"));
    }
    if !(s_min > T::zero()) || !(s_max > s_min) || !s_max.is_finite() {
        return invalid(format!("grid needs 0 < s_min < s_max, got [{s_min}, {s_max}]"));
    }
    if n_x < 2 || n_s < 2 {
        return invalid(format!("grid needs at least 2 nodes per axis, got {n_x}x{n_s}"));
    }
    if let Measure::Weighted(alpha) = measure {
        if !alpha.is_finite() {
            return invalid("weighted measure exponent must be finite");
        }
    }
    let dx = (x_half_width + x_half_width) / from_usize(n_x);
    let (u_lo, u_hi) = (s_min.ln(), s_max.ln());
    let du = (u_hi - u_lo) / from_usize(n_s);
    let s_nodes: Vec<T> = (0..n_s)
        .map(|j| (u_lo + (from_usize::<T>(j) + T::half()) * du).exp())
        .collect();
    let mut nodes = Vec::with_capacity(n_x * n_s);
    let mut weights = Vec::with_capacity(n_x * n_s);
    for i in 0..n_x {
        let x = -x_half_width + (from_usize::<T>(i) + T::half()) * dx;
        for &s in &s_nodes {
            nodes.push(HalfPlanePoint { x, s });
            weights.push(dx * s * du * measure.density(s));
        }
    }
    Ok(HalfPlaneGrid {
        nodes,
        weights,
        measure,
        truncation: Truncation { x_range: [-x_half_width, x_half_width], s_range: [s_min, s_max] },
    })
}

impl<T: Real> HalfPlaneGrid<T> {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Same nodes under a different measure.
    pub fn with_measure(&self, measure: Measure<T>) -> Self {
        let weights = self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(p, &w)| w / self.measure.density(p.s) * measure.density(p.s))
            .collect();
        Self { nodes: self.nodes.clone(), weights, measure, truncation: self.truncation }
    }

    /// Evaluates a field at every node, failing on the first non-finite value.
    pub fn sample<F>(&self, field: F) -> Result<Vec<Cx<T>>>
    where
        F: Fn(HalfPlanePoint<T>) -> Cx<T> + Sync,
    {
        let values: Vec<Cx<T>> = self.nodes.par_iter().map(|&p| field(p)).collect();
        if let Some((j, v)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !(v.re.is_finite() && v.im.is_finite()))
        {
            return Err(Error::NumericOverflow {
                at: format!("grid node {j} ({})", self.nodes[j]),
                detail: format!("sample = {v}"),
            });
        }
        Ok(values)
    }

    /// `Σ_j w_j a_j conj(b_j)` over pre-sampled fields.
    pub fn inner_samples(&self, a: &[Cx<T>], b: &[Cx<T>]) -> Result<Cx<T>> {
        if a.len() != self.len() || b.len() != self.len() {
            return invalid(format!(
                "sample count mismatch: grid {} vs {} and {}",
                self.len(),
                a.len(),
                b.len()
            ));
        }
        let terms: Vec<Cx<T>> = a
            .par_iter()
            .zip(b.par_iter())
            .zip(self.weights.par_iter())
            .map(|((&u, &v), &w)| u * v.conj() * w)
            .collect();
        Ok(pairwise_sum_cx(&terms))
    }

    /// `Σ_j w_j |a_j|²`.
    pub fn norm_sq_samples(&self, a: &[Cx<T>]) -> Result<T> {
        Ok(self.inner_samples(a, a)?.re)
    }

    /// Writes `x,s,re,im` CSV rows for pre-sampled values.
    /// Checks that `points` are this grid's nodes in order, to relative
    /// precision `rel_tol`.
    pub fn check_nodes(&self, points: &[HalfPlanePoint<T>], rel_tol: T) -> Result<()> {
        if points.len() != self.nodes.len() {
            return invalid(format!("{} points given for a grid of {} nodes", points.len(), self.nodes.len()));
        }
        for (j, (p, q)) in points.iter().zip(&self.nodes).enumerate() {
            let scale = q.x.abs().max(q.s);
            if (p.x - q.x).abs() > rel_tol * scale || (p.s - q.s).abs() > rel_tol * q.s {
                return invalid(format!("point {j} ({}, {}) is not grid node ({}, {})", p.x, p.s, q.x, q.s));
            }
        }
        Ok(())
    }

    pub fn write_csv<W: Write>(&self, out: W, values: &[Cx<T>]) -> std::io::Result<()> {
        write_field_csv(out, &self.nodes, values)
    }
}

/// `⟨F, G⟩ = Σ_j w_j F(z_j) conj(G(z_j))` with a fixed pairwise reduction.
pub fn inner_u<T, F, G>(f: F, g: G, grid: &HalfPlaneGrid<T>) -> Result<Cx<T>>
where
    T: Real,
    F: Fn(HalfPlanePoint<T>) -> Cx<T> + Sync,
    G: Fn(HalfPlanePoint<T>) -> Cx<T> + Sync,
{
    let a = grid.sample(f)?;
    let b = grid.sample(g)?;
    grid.inner_samples(&a, &b)
}

/// Writes a sampled field as CSV with header `x,s,re,im`.
pub fn write_field_csv<T: Real, W: Write>(
    mut out: W,
    points: &[HalfPlanePoint<T>],
    values: &[Cx<T>],
) -> std::io::Result<()> {
    writeln!(out, "x,s,re,im")?;
    for (p, v) in points.iter().zip(values) {
        writeln!(out, "{:e},{:e},{:e},{:e}", p.x, p.s, v.re, v.im)?;
    }
    Ok(())
}

/// Parses a CSV written by [`write_field_csv`]. Lines starting with `#`
/// are comments.
pub fn read_field_csv(text: &str) -> Result<(Vec<HalfPlanePoint<f64>>, Vec<Cx<f64>>)> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'));
    match lines.next() {
        Some((_, header)) if header.trim() == "x,s,re,im" => {}
        Some((_, header)) => return invalid(format!("expected header `x,s,re,im`, found `{header}`")),
        None => return invalid("empty field CSV"),
    }
    let mut points = Vec::new();
    let mut values = Vec::new();
    for (lineno, line) in lines {
        let cols: Vec<&str> = line.split(',').map(str::trim).collect();
        if cols.len() != 4 {
            return invalid(format!("line {}: expected 4 columns, found {}", lineno + 1, cols.len()));
        }
        let mut nums = [0.0f64; 4];
        for (slot, col) in nums.iter_mut().zip(&cols) {
            *slot = col
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("line {}: bad number `{col}`", lineno + 1)))?;
        }
        points.push(HalfPlanePoint::new(nums[0], nums[1])?);
        values.push(cx(nums[2], nums[3]));
    }
    Ok((points, values))
}

/// Pseudohyperbolic distance `ρ = |z₁-z₂|/|z₁-conj(z₂)|` and hyperbolic
/// distance `d = ½ ln((1+ρ)/(1-ρ))`.
pub fn distances<T: Real>(z1: HalfPlanePoint<T>, z2: HalfPlanePoint<T>) -> (T, T) {
    let num = z1.z() - z2.z();
    let den = z1.z() - z2.z().conj();
    let rho = num.norm() / den.norm();
    let d = T::half() * ((T::one() + rho) / (T::one() - rho)).ln();
    (rho, d)
}

/// Inclusive integer interval; `lo > hi` denotes the empty interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexRange {
    pub lo: i64,
    pub hi: i64,
}

impl IndexRange {
    pub fn new(lo: i64, hi: i64) -> Self {
        Self { lo, hi }
    }

    pub fn single(k: i64) -> Self {
        Self { lo: k, hi: k }
    }

    pub fn symmetric(half: i64) -> Self {
        Self { lo: -half, hi: half }
    }

    pub fn len(&self) -> usize {
        if self.hi < self.lo {
            0
        } else {
            (self.hi - self.lo + 1) as usize
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = i64> {
        self.lo..=self.hi
    }

    pub fn contains(&self, k: i64) -> bool {
        self.lo <= k && k <= self.hi
    }
}

/// A lattice point together with its `(m, k)` index.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatticePoint<T> {
    pub m: i64,
    pub k: i64,
    pub z: HalfPlanePoint<T>,
}

/// Truncated hyperbolic lattice `{ a^m (b k + i) }`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Lattice<T> {
    pub a: T,
    pub b: T,
    pub m_range: IndexRange,
    pub k_range: IndexRange,
    pub points: Vec<LatticePoint<T>>,
}

fn check_lattice_params<T: Real>(a: T, b: T) -> Result<()> {
    if !(a > T::one()) || !a.is_finite() {
        return invalid(format!("lattice dilation a must exceed 1, got {a}"));
    }
    if !(b > T::zero()) || !b.is_finite() {
        return invalid(format!("lattice translation b must be positive, got {b}"));
    }
    Ok(())
}

fn lattice_level<T: Real>(a: T, m: i64) -> Result<T> {
    let scale = a.powi(m as i32);
    if !(scale > T::zero()) || !scale.is_finite() {
        return invalid(format!("lattice level a^{m} is not representable"));
    }
    Ok(scale)
}

/// Enumerates `z_mk = a^m b k + i a^m` in `(m, k)` lexicographic order.
pub fn make_lattice<T: Real>(a: T, b: T, m_range: IndexRange, k_range: IndexRange) -> Result<Lattice<T>> {
    check_lattice_params(a, b)?;
    let mut points = Vec::with_capacity(m_range.len() * k_range.len());
    for m in m_range.iter() {
        let scale = lattice_level(a, m)?;
        for k in k_range.iter() {
            points.push(LatticePoint {
                m,
                k,
                z: HalfPlanePoint { x: scale * b * lit::<T>(k as f64), s: scale },
            });
        }
    }
    Ok(Lattice { a, b, m_range, k_range, points })
}

/// Like [`make_lattice`], but each level keeps only the points with
/// `|x| <= x_max`, so coarse levels are not padded with far-away points.
/// `k_range` records the widest level.
pub fn make_lattice_window<T: Real>(a: T, b: T, m_range: IndexRange, x_max: T) -> Result<Lattice<T>> {
    check_lattice_params(a, b)?;
    if !(x_max >= T::zero()) || !x_max.is_finite() {
        return invalid(format!("lattice window must be finite and >= 0, got {x_max}"));
    }
    let mut points = Vec::new();
    let mut widest = 0i64;
    for m in m_range.iter() {
        let scale = lattice_level(a, m)?;
        let half = (x_max / (scale * b)).floor().to_i64().unwrap_or(i64::MAX);
        if half > 1 << 24 {
            return invalid(format!("lattice window needs {half} points per side at level {m}"));
        }
        widest = widest.max(half);
        for k in -half..=half {
            points.push(LatticePoint {
                m,
                k,
                z: HalfPlanePoint { x: scale * b * lit::<T>(k as f64), s: scale },
            });
        }
    }
    Ok(Lattice { a, b, m_range, k_range: IndexRange::symmetric(widest), points })
}

impl<T: Real> Lattice<T> {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `b · ln a`
    pub fn density_value(&self) -> T {
        self.b * self.a.ln()
    }
}

/// Anything living on `ℝ⁺` of the form `t^p e^{-r t} E(t)` with `E` a
/// polynomial envelope of known degree. Such functions integrate exactly
/// against Gauss–Laguerre rules.
pub trait RPlusFunction<T: Real> {
    fn power(&self) -> T;
    fn rate(&self) -> T;
    fn envelope_degree(&self) -> usize;
    fn envelope(&self, t: T) -> Cx<T>;

    fn eval(&self, t: T) -> Cx<T> {
        if t <= T::zero() {
            return cx(T::zero(), T::zero());
        }
        self.envelope(t) * (t.powf(self.power()) * (-self.rate() * t).exp())
    }
}

/// Default Gauss–Laguerre order for half-line inner products.
pub const DEFAULT_RPLUS_ORDER: usize = 128;

/// `∫_0^∞ f(t) conj(g(t)) t^p dt` by a generalized Gauss–Laguerre rule
/// matched to the combined power and decay rate.
pub fn inner_rplus<T, F, G>(f: &F, g: &G, p: T, order: usize) -> Result<Cx<T>>
where
    T: Real,
    F: RPlusFunction<T> + ?Sized,
    G: RPlusFunction<T> + ?Sized,
{
    if order < 16 {
        return invalid(format!("half-line quadrature order must be >= 16, got {order}"));
    }
    let power = f.power() + g.power() + p;
    if !(power > -T::one()) {
        return invalid(format!(
            "divergent weight: integrand behaves like t^{power} at the origin"
        ));
    }
    let rate = f.rate() + g.rate();
    if !(rate > T::zero()) {
        return invalid("integrand does not decay exponentially");
    }
    let needed = (f.envelope_degree() + g.envelope_degree()) / 2 + 1;
    let rule = GaussLaguerre::cached(order.max(needed), power.to_f64().expect("finite power"))?;
    let terms: Vec<Cx<T>> = rule
        .nodes
        .iter()
        .zip(&rule.weights)
        .map(|(&x, &w)| {
            let t = lit::<T>(x) / rate;
            f.envelope(t) * g.envelope(t).conj() * lit::<T>(w)
        })
        .collect();
    Ok(pairwise_sum_cx(&terms) * rate.powf(-power - T::one()))
}
