//! Deterministic pairwise reduction.
//!
//! The split points depend only on the slice length, so serial and parallel
//! evaluation produce bit-identical sums.

use num_complex::Complex;

use crate::scalar::Real;

const LEAF: usize = 64;
const PARALLEL_CUTOFF: usize = 1 << 14;

pub fn pairwise_sum<T: Real>(xs: &[T]) -> T {
    if xs.len() <= LEAF {
        return xs.iter().fold(T::zero(), |acc, &x| acc + x);
    }
    let mid = xs.len() / 2;
    let (left, right) = xs.split_at(mid);
    if xs.len() >= PARALLEL_CUTOFF {
        let (a, b) = rayon::join(|| pairwise_sum(left), || pairwise_sum(right));
        a + b
    } else {
        pairwise_sum(left) + pairwise_sum(right)
    }
}

pub fn pairwise_sum_cx<T: Real>(xs: &[Complex<T>]) -> Complex<T> {
    if xs.len() <= LEAF {
        return xs
            .iter()
            .fold(Complex::new(T::zero(), T::zero()), |acc, &x| acc + x);
    }
    let mid = xs.len() / 2;
    let (left, right) = xs.split_at(mid);
    if xs.len() >= PARALLEL_CUTOFF {
        let (a, b) = rayon::join(|| pairwise_sum_cx(left), || pairwise_sum_cx(right));
        a + b
    } else {
        pairwise_sum_cx(left) + pairwise_sum_cx(right)
    }
}
