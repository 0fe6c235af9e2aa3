//! Double-double evaluation of `e_{n,m}`.
//!
//! The binomial sum defining `e_{n,m}` cancels heavily once `n >= 3`, which
//! swamps high-order finite differences. Carrying ~32 digits through the sum
//! leaves a result correct to the last bit of `f64`.

use std::ops::{Add, Mul, Sub};

use twofloat::TwoFloat;

use crate::halfplane::HalfPlanePoint;
use crate::scalar::{cx, Cx, Real};

#[derive(Clone, Copy)]
struct Dd {
    re: TwoFloat,
    im: TwoFloat,
}

impl Dd {
    fn real(v: f64) -> Self {
        Self { re: TwoFloat::from(v), im: TwoFloat::from(0.0) }
    }

    fn scale(self, k: TwoFloat) -> Self {
        Self { re: self.re * k, im: self.im * k }
    }

    fn inv(self) -> Self {
        let d = self.re * self.re + self.im * self.im;
        Self { re: self.re / d, im: -self.im / d }
    }

    fn powi(self, e: usize) -> Self {
        let mut out = Self::real(1.0);
        let mut base = self;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                out = out * base;
            }
            base = base * base;
            e >>= 1;
        }
        out
    }
}

impl Add for Dd {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self { re: self.re + o.re, im: self.im + o.im }
    }
}

impl Sub for Dd {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self { re: self.re - o.re, im: self.im - o.im }
    }
}

impl Mul for Dd {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self { re: self.re * o.re - self.im * o.im, im: self.re * o.im + self.im * o.re }
    }
}

fn exact(v: u128) -> TwoFloat {
    // integer coefficients stay far below 2^106
    let hi = v as f64;
    let lo = (v as i128 - hi as i128) as f64;
    TwoFloat::from(hi) + TwoFloat::from(lo)
}

fn falling_int(a: i64, j: usize) -> i128 {
    (0..j as i64).fold(1i128, |acc, r| acc * (a - r) as i128)
}

fn binom(n: usize, k: usize) -> u128 {
    (0..k).fold(1u128, |acc, r| acc * (n - r) as u128 / (r as u128 + 1))
}

fn signed(v: i128) -> TwoFloat {
    let mag = exact(v.unsigned_abs());
    if v < 0 {
        -mag
    } else {
        mag
    }
}

/// `e_{n,m}(z) = (m+1) Σ_k C(n,k) (2s)^k/k! (d/dσ)^k [σ^{-2-m} (σ-1)^m]`.
pub(crate) fn basis_e_dd<T: Real>(n: usize, m: usize, z: HalfPlanePoint<T>) -> Cx<T> {
    let x = z.x.to_f64().unwrap_or(f64::NAN);
    let s = z.s.to_f64().unwrap_or(f64::NAN);
    let sg = Dd { re: TwoFloat::from(0.5) + TwoFloat::from(s), im: -TwoFloat::from(x) };
    let sm1 = sg - Dd::real(1.0);
    let inv = sg.inv();
    let two_s = TwoFloat::from(s) * 2.0;
    let a = -(m as i64) - 2;
    let mut acc = Dd::real(0.0);
    let mut pow_2s = TwoFloat::from(1.0);
    let mut k_fact: u128 = 1;
    for k in 0..=n {
        if k > 0 {
            pow_2s *= two_s;
            k_fact *= k as u128;
        }
        let mut deriv = Dd::real(0.0);
        for j in 0..=k {
            let rest = k - j;
            if rest > m {
                continue;
            }
            let coef = falling_int(a, j) * binom(k, j) as i128 * falling_int(m as i64, rest);
            let term = inv.powi(m + 2 + j) * sm1.powi(m - rest);
            deriv = deriv + term.scale(signed(coef));
        }
        let w = pow_2s * exact(binom(n, k)) / exact(k_fact);
        acc = acc + deriv.scale(w);
    }
    let acc = acc.scale(exact(m as u128 + 1));
    let to_t = |v: TwoFloat| T::from_f64(v.hi() + v.lo()).unwrap_or_else(T::nan);
    cx(to_t(acc.re), to_t(acc.im))
}
