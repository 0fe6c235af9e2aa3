//! Fields in the full polyanalytic space `𝐀ⁿ(𝐔)` and their projections onto
//! the true components.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::halfplane::{HalfPlaneGrid, HalfPlanePoint};
use crate::linalg::{condition_number, Cholesky, Matrix};
use crate::scalar::{cx, is_finite_cx, lit, Cx, Real};

use super::basis::{basis_block, basis_norm};
use super::kernel::{kernel_true_columns, KernelSpec};

type Closure<T> = Arc<dyn Fn(HalfPlanePoint<T>) -> Cx<T> + Send + Sync>;

#[derive(Clone)]
pub enum FieldRepr<T> {
    /// `F = Σ_{k,m} c[k][m] e_{k,m}`, k-major.
    Coefficients(Vec<Vec<Cx<T>>>),
    Closure(Closure<T>),
}

impl<T: fmt::Debug> fmt::Debug for FieldRepr<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldRepr::Coefficients(c) => f.debug_tuple("Coefficients").field(c).finish(),
            FieldRepr::Closure(_) => f.write_str("Closure(..)"),
        }
    }
}

/// A member of `𝐀ⁿ(𝐔)` with declared order `n`.
#[derive(Debug, Clone)]
pub struct PolyField<T> {
    pub repr: FieldRepr<T>,
    pub order: usize,
}

/// JSON form of a coefficient-form field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct PolyFieldCoeffs<T: Real> {
    pub order: usize,
    pub modes: usize,
    pub coeffs: Vec<Vec<Cx<T>>>,
}

impl<T: Real> PolyField<T> {
    /// Coefficient form; rows beyond `order` are rejected, short rows padded.
    pub fn from_coefficients(order: usize, coeffs: Vec<Vec<Cx<T>>>) -> Result<Self> {
        if coeffs.len() > order {
            return invalid(format!("{} coefficient rows exceed declared order {order}", coeffs.len()));
        }
        for (k, row) in coeffs.iter().enumerate() {
            if let Some(m) = row.iter().position(|c| !is_finite_cx(*c)) {
                return Err(Error::NumericOverflow { at: format!("coefficient [{k}][{m}]"), detail: format!("{}", row[m]) });
            }
        }
        let modes = coeffs.iter().map(Vec::len).max().unwrap_or(0);
        let mut table: Vec<Vec<Cx<T>>> = coeffs;
        table.resize(order, Vec::new());
        for row in &mut table {
            row.resize(modes, cx(T::zero(), T::zero()));
        }
        Ok(Self { repr: FieldRepr::Coefficients(table), order })
    }

    pub fn from_closure<F>(order: usize, f: F) -> Self
    where
        F: Fn(HalfPlanePoint<T>) -> Cx<T> + Send + Sync + 'static,
    {
        Self { repr: FieldRepr::Closure(Arc::new(f)), order }
    }

    pub fn to_json_form(&self) -> Option<PolyFieldCoeffs<T>> {
        match &self.repr {
            FieldRepr::Coefficients(c) => Some(PolyFieldCoeffs {
                order: self.order,
                modes: c.first().map_or(0, Vec::len),
                coeffs: c.clone(),
            }),
            FieldRepr::Closure(_) => None,
        }
    }

    pub fn from_json_form(form: PolyFieldCoeffs<T>) -> Result<Self> {
        if form.coeffs.len() != form.order || form.coeffs.iter().any(|r| r.len() != form.modes) {
            return invalid(format!(
                "coefficient table does not match declared shape {}x{}",
                form.order, form.modes
            ));
        }
        Self::from_coefficients(form.order, form.coeffs)
    }

    pub fn modes(&self) -> Option<usize> {
        match &self.repr {
            FieldRepr::Coefficients(c) => Some(c.first().map_or(0, Vec::len)),
            FieldRepr::Closure(_) => None,
        }
    }

    pub fn eval(&self, z: HalfPlanePoint<T>) -> Cx<T> {
        match &self.repr {
            FieldRepr::Closure(f) => f(z),
            FieldRepr::Coefficients(c) => {
                let modes = c.first().map_or(0, Vec::len);
                let block = basis_block(self.order, modes, z);
                let mut acc = cx(T::zero(), T::zero());
                for (k, row) in c.iter().enumerate() {
                    for (m, &coef) in row.iter().enumerate() {
                        if coef.norm_sqr() > T::zero() {
                            acc = acc + coef * block[k * modes + m] * basis_norm::<T>(m);
                        }
                    }
                }
                acc
            }
        }
    }

    /// `‖F‖²` in closed form for the coefficient form.
    pub fn norm_sq_exact(&self) -> Option<T> {
        match &self.repr {
            FieldRepr::Coefficients(c) => Some(
                c.iter()
                    .flat_map(|row| row.iter().enumerate())
                    .map(|(m, v)| v.norm_sqr() * basis_norm::<T>(m).powi(2))
                    .sum(),
            ),
            FieldRepr::Closure(_) => None,
        }
    }
}

const CHUNK: usize = 2048;

fn tree_sum<T: Real>(mut parts: Vec<Matrix<T>>) -> Matrix<T> {
    while parts.len() > 1 {
        let mut next = Vec::with_capacity(parts.len().div_ceil(2));
        let mut it = parts.into_iter();
        while let Some(mut a) = it.next() {
            if let Some(b) = it.next() {
                a.add_assign(&b);
            }
            next.push(a);
        }
        parts = next;
    }
    parts.pop().expect("at least one chunk")
}

fn tree_sum_vec<T: Real>(mut parts: Vec<Vec<Cx<T>>>) -> Vec<Cx<T>> {
    while parts.len() > 1 {
        let mut next = Vec::with_capacity(parts.len().div_ceil(2));
        let mut it = parts.into_iter();
        while let Some(mut a) = it.next() {
            if let Some(b) = it.next() {
                for (x, y) in a.iter_mut().zip(&b) {
                    *x = *x + *y;
                }
            }
            next.push(a);
        }
        parts = next;
    }
    parts.pop().expect("at least one chunk")
}

/// Discrete Gram matrix of `{ẽ_{k,m}}` (`k < order`, `m < modes`) on a grid,
/// with its factorization and conditioning.
#[derive(Debug, Clone)]
pub struct GalerkinSystem<T> {
    pub order: usize,
    pub modes: usize,
    pub gram: Matrix<T>,
    pub condition: T,
    /// `max |G - I|`
    pub max_gram_dev: T,
    chol: Cholesky<T>,
}

/// Largest acceptable Gram condition number.
pub const MAX_CONDITION: f64 = 1e8;
/// Largest acceptable `max |G - I|`; beyond this the grid does not resolve
/// the basis at all.
pub const MAX_GRAM_DEVIATION: f64 = 0.25;

impl<T: Real> GalerkinSystem<T> {
    pub fn assemble(grid: &HalfPlaneGrid<T>, order: usize, modes: usize) -> Result<Self> {
        if order == 0 || modes == 0 {
            return invalid("Galerkin system needs order >= 1 and modes >= 1");
        }
        let dim = order * modes;
        let parts: Vec<Matrix<T>> = grid
            .nodes
            .par_chunks(CHUNK)
            .zip(grid.weights.par_chunks(CHUNK))
            .map(|(nodes, weights)| {
                let mut g = Matrix::zeros(dim);
                for (&p, &w) in nodes.iter().zip(weights) {
                    let b = basis_block(order, modes, p);
                    for i in 0..dim {
                        let bi = b[i] * w;
                        for j in 0..=i {
                            let idx = i * dim + j;
                            g.data[idx] = g.data[idx] + bi * b[j].conj();
                        }
                    }
                }
                g
            })
            .collect();
        let mut gram = tree_sum(parts);
        for i in 0..dim {
            for j in 0..i {
                gram.set(j, i, gram.get(i, j).conj());
            }
        }
        let max_gram_dev = gram.max_dev_from_identity();
        let diagnostics = |cond: f64| {
            vec![
                ("gram_condition".to_string(), cond),
                ("max_gram_deviation".to_string(), max_gram_dev.to_f64().unwrap_or(f64::NAN)),
                ("nodes".to_string(), grid.len() as f64),
            ]
        };
        let chol = Cholesky::new(&gram).map_err(|_| Error::Accuracy {
            reason: "discrete Gram matrix is singular on this grid".into(),
            diagnostics: diagnostics(f64::INFINITY),
        })?;
        let condition = condition_number(&gram, &chol, 300);
        let cond_f = condition.to_f64().unwrap_or(f64::INFINITY);
        if !(cond_f < MAX_CONDITION) || !(max_gram_dev < lit(MAX_GRAM_DEVIATION)) {
            return Err(Error::Accuracy {
                reason: format!(
                    "grid too coarse for {order}x{modes} basis: Gram condition {cond_f:e}, max |G-I| {max_gram_dev:e}"
                ),
                diagnostics: diagnostics(cond_f),
            });
        }
        Ok(Self { order, modes, gram, condition, max_gram_dev, chol })
    }

    pub fn dim(&self) -> usize {
        self.order * self.modes
    }

    /// `r_j = Σ_nodes w F conj(ẽ_j)` for pre-sampled `F`.
    pub fn moments(&self, grid: &HalfPlaneGrid<T>, samples: &[Cx<T>]) -> Result<Vec<Cx<T>>> {
        grid_moments(grid, samples, self.order, self.modes)
    }

    /// Coefficients in the normalized basis, k-major.
    pub fn solve_moments(&self, moments: &[Cx<T>]) -> Vec<Cx<T>> {
        self.chol.solve(moments)
    }

    /// Least-squares coefficients of sampled values, k-major.
    pub fn solve_samples(&self, grid: &HalfPlaneGrid<T>, samples: &[Cx<T>]) -> Result<Vec<Cx<T>>> {
        Ok(self.solve_moments(&self.moments(grid, samples)?))
    }
}

/// Plain quadrature moments `r_{k,m} = Σ_nodes w F conj(ẽ_{k,m})` of
/// pre-sampled values, k-major, for `k < order`, `m < modes`.
pub fn grid_moments<T: Real>(grid: &HalfPlaneGrid<T>, samples: &[Cx<T>], order: usize, modes: usize) -> Result<Vec<Cx<T>>> {
    if samples.len() != grid.len() {
        return invalid(format!("{} samples for a grid of {} nodes", samples.len(), grid.len()));
    }
    if let Some(j) = samples.iter().position(|v| !is_finite_cx(*v)) {
        return Err(Error::NumericOverflow {
            at: format!("grid node {j} ({})", grid.nodes[j]),
            detail: format!("sample = {}", samples[j]),
        });
    }
    let dim = order * modes;
    let parts: Vec<Vec<Cx<T>>> = grid
        .nodes
        .par_chunks(CHUNK)
        .zip(grid.weights.par_chunks(CHUNK))
        .zip(samples.par_chunks(CHUNK))
        .map(|((nodes, weights), vals)| {
            let mut r = vec![cx(T::zero(), T::zero()); dim];
            for ((&p, &w), &v) in nodes.iter().zip(weights).zip(vals) {
                let b = basis_block(order, modes, p);
                let fw = v * w;
                for j in 0..dim {
                    r[j] = r[j] + fw * b[j].conj();
                }
            }
            r
        })
        .collect();
    Ok(tree_sum_vec(parts))
}

/// `⟨F, ẽ_{k,m}⟩` for `m < modes`.
///
/// Coefficient-form fields are read exactly. Closure-form fields are
/// projected by a Galerkin solve against all `ẽ_{j,m}` with `j < order` on
/// the given grid, which removes the quadrature's cross-talk between basis
/// functions.
pub fn project_true<T: Real>(
    field: &PolyField<T>,
    k: usize,
    modes: usize,
    grid: Option<&HalfPlaneGrid<T>>,
) -> Result<Vec<Cx<T>>> {
    if k >= field.order {
        return invalid(format!("channel {k} out of range for order {}", field.order));
    }
    match &field.repr {
        FieldRepr::Coefficients(c) => Ok((0..modes)
            .map(|m| c[k].get(m).copied().unwrap_or(cx(T::zero(), T::zero())) * basis_norm::<T>(m))
            .collect()),
        FieldRepr::Closure(_) => {
            let grid = grid.ok_or_else(|| Error::InvalidArgument("closure-form projection needs a grid".into()))?;
            let system = GalerkinSystem::assemble(grid, field.order, modes)?;
            let samples = grid.sample(|p| field.eval(p))?;
            let coeffs = system.solve_samples(grid, &samples)?;
            Ok(coeffs[k * modes..(k + 1) * modes].to_vec())
        }
    }
}

/// Plain quadrature projection `Σ_nodes w F conj(ẽ_{k,m})`, without the
/// Gram correction.
pub fn project_true_plain<T: Real>(
    field: &PolyField<T>,
    k: usize,
    modes: usize,
    grid: &HalfPlaneGrid<T>,
) -> Result<Vec<Cx<T>>> {
    if k >= field.order {
        return invalid(format!("channel {k} out of range for order {}", field.order));
    }
    let samples = grid.sample(|p| field.eval(p))?;
    let r = grid_moments(grid, &samples, k + 1, modes)?;
    Ok(r[k * modes..].to_vec())
}

/// `F_k(z) = ⟨F, Kᵏ(·, z)⟩` by quadrature, at each of `points`.
pub fn project_true_kernel<T: Real>(
    field: &PolyField<T>,
    k: usize,
    points: &[HalfPlanePoint<T>],
    spec_method: super::kernel::KernelMethod,
    grid: &HalfPlaneGrid<T>,
) -> Result<Vec<Cx<T>>> {
    if k >= field.order {
        return invalid(format!("channel {k} out of range for order {}", field.order));
    }
    let spec = KernelSpec { n: k, method: spec_method };
    let f = grid.sample(|p| field.eval(p))?;
    kernel_true_columns(spec, &grid.nodes, points)?
        .iter()
        .map(|column| grid.inner_samples(&f, column))
        .collect()
}

/// `Σ_m coeffs[m] ẽ_{k,m}(z)`.
pub fn synthesize_channel<T: Real>(k: usize, coeffs: &[Cx<T>], z: HalfPlanePoint<T>) -> Cx<T> {
    let block = basis_block(k + 1, coeffs.len(), z);
    let row = &block[k * coeffs.len()..];
    coeffs.iter().zip(row).fold(cx(T::zero(), T::zero()), |acc, (c, b)| acc + c * b)
}
