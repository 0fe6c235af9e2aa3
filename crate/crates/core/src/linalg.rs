//! Small dense Hermitian systems (Gram matrices of a few dozen basis
//! functions).

use crate::error::{Error, Result};
use crate::scalar::{cx, Cx, Real};

/// Row-major square complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    pub dim: usize,
    pub data: Vec<Cx<T>>,
}

impl<T: Real> Matrix<T> {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![cx(T::zero(), T::zero()); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = cx(T::one(), T::zero());
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Cx<T> {
        self.data[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Cx<T>) {
        self.data[i * self.dim + j] = v;
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a = *a + *b;
        }
    }

    pub fn mul_vec(&self, v: &[Cx<T>]) -> Vec<Cx<T>> {
        (0..self.dim)
            .map(|i| {
                (0..self.dim).fold(cx(T::zero(), T::zero()), |acc, j| acc + self.get(i, j) * v[j])
            })
            .collect()
    }

    /// `max |A_ij - δ_ij|`.
    pub fn max_dev_from_identity(&self) -> T {
        let mut worst = T::zero();
        for i in 0..self.dim {
            for j in 0..self.dim {
                let target = if i == j { T::one() } else { T::zero() };
                worst = worst.max((self.get(i, j) - target).norm());
            }
        }
        worst
    }
}

/// Lower-triangular Cholesky factor of a Hermitian positive-definite matrix.
#[derive(Debug, Clone)]
pub struct Cholesky<T> {
    l: Matrix<T>,
}

impl<T: Real> Cholesky<T> {
    pub fn new(a: &Matrix<T>) -> Result<Self> {
        let n = a.dim;
        let mut l = Matrix::zeros(n);
        for j in 0..n {
            let mut d = a.get(j, j).re;
            for k in 0..j {
                d = d - l.get(j, k).norm_sqr();
            }
            if !(d > T::zero()) || !d.is_finite() {
                return Err(Error::Accuracy {
                    reason: format!("Gram matrix is not positive definite at pivot {j}"),
                    diagnostics: vec![("pivot".into(), d.to_f64().unwrap_or(f64::NAN))],
                });
            }
            let djj = d.sqrt();
            l.set(j, j, cx(djj, T::zero()));
            for i in (j + 1)..n {
                let mut v = a.get(i, j);
                for k in 0..j {
                    v = v - l.get(i, k) * l.get(j, k).conj();
                }
                l.set(i, j, v / djj);
            }
        }
        Ok(Self { l })
    }

    pub fn solve(&self, b: &[Cx<T>]) -> Vec<Cx<T>> {
        let n = self.l.dim;
        let mut y = b.to_vec();
        for i in 0..n {
            let mut v = y[i];
            for k in 0..i {
                v = v - self.l.get(i, k) * y[k];
            }
            y[i] = v / self.l.get(i, i).re;
        }
        for i in (0..n).rev() {
            let mut v = y[i];
            for k in (i + 1)..n {
                v = v - self.l.get(k, i).conj() * y[k];
            }
            y[i] = v / self.l.get(i, i).re;
        }
        y
    }
}

fn normalize<T: Real>(v: &mut [Cx<T>]) -> T {
    let norm = v.iter().map(|x| x.norm_sqr()).sum::<T>().sqrt();
    if norm > T::zero() {
        for x in v.iter_mut() {
            *x = *x / norm;
        }
    }
    norm
}

fn start_vector<T: Real>(n: usize) -> Vec<Cx<T>> {
    // fixed, non-degenerate start
    (0..n)
        .map(|i| {
            let t = T::from_usize(i + 1).expect("index fits") * T::from_f64(0.618_033_988_749_895).expect("literal");
            cx(T::one() + t.sin(), t.cos())
        })
        .collect()
}

/// Smallest and largest eigenvalue of a Hermitian positive-definite matrix,
/// from power iteration on `A` and on `A⁻¹`.
pub fn extreme_eigenvalues<T: Real>(a: &Matrix<T>, chol: &Cholesky<T>, iterations: usize) -> (T, T) {
    let n = a.dim;
    if n == 0 {
        return (T::one(), T::one());
    }
    let mut v = start_vector::<T>(n);
    normalize(&mut v);
    let mut lambda_max = T::zero();
    for _ in 0..iterations {
        let mut w = a.mul_vec(&v);
        lambda_max = normalize(&mut w);
        v = w;
    }
    let mut v = start_vector::<T>(n);
    normalize(&mut v);
    let mut inv_min = T::zero();
    for _ in 0..iterations {
        let mut w = chol.solve(&v);
        inv_min = normalize(&mut w);
        v = w;
    }
    (T::one() / inv_min, lambda_max)
}

/// 2-norm condition number of a Hermitian positive-definite matrix.
pub fn condition_number<T: Real>(a: &Matrix<T>, chol: &Cholesky<T>, iterations: usize) -> T {
    let (lo, hi) = extreme_eigenvalues(a, chol, iterations);
    hi / lo
}
