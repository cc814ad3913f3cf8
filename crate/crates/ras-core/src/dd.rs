//! Double-double arithmetic: an unevaluated sum `hi + lo` of two floats with
//! `|lo| <= ulp(hi)/2`, giving roughly 32 significant digits.
//!
//! The reduced-system verifiers need this: steep recipes push row terms to
//! ~1e8 while the certification tolerance is 1e-8, right at the f64 rounding
//! floor. Evaluating the rows in double-double moves the floor far below any
//! tolerance of interest. Products use the fused multiply-add error-free
//! transformation, sums use the Knuth two-sum.

use core::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Dd {
    hi: f64,
    lo: f64,
}

/// Exact sum: `a + b = s + e` with `s = fl(a + b)`.
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

/// Exact sum assuming `|a| >= |b|` (three operations).
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

/// Exact product: `a * b = p + e` with `p = fl(a * b)`.
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, libm::fma(a, b, -p))
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };

    fn renorm(hi: f64, lo: f64) -> Dd {
        let (h, l) = quick_two_sum(hi, lo);
        Dd { hi: h, lo: l }
    }

    pub fn value(self) -> f64 {
        self.hi + self.lo
    }
}

impl From<f64> for Dd {
    fn from(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, o: Dd) -> Dd {
        let (s, mut e) = two_sum(self.hi, o.hi);
        let (t, te) = two_sum(self.lo, o.lo);
        e += t;
        let (s, mut e) = quick_two_sum(s, e);
        e += te;
        Dd::renorm(s, e)
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, o: Dd) -> Dd {
        self + (-o)
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, o: Dd) -> Dd {
        let (p, mut e) = two_prod(self.hi, o.hi);
        e += self.hi * o.lo + self.lo * o.hi;
        Dd::renorm(p, e)
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self - o * Dd::from(q1);
        let q2 = r.hi / o.hi;
        let r = r - o * Dd::from(q2);
        let q3 = r.hi / o.hi;
        Dd::renorm(q1, q2) + Dd::from(q3)
    }
}

/// Shorthand used heavily in row evaluations.
pub fn dd(x: f64) -> Dd {
    Dd::from(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn add_keeps_bits_a_plain_sum_drops() {
        let big = dd(1.0e16);
        let small = dd(1.0);
        let s = big + small - big;
        assert_eq!(s.value(), 1.0);
    }

    #[test]
    fn product_error_term_is_recovered() {
        // (1 + 2^-30)^2 = 1 + 2^-29 + 2^-60; plain f64 drops the 2^-60.
        let x = 1.0 + crate::math::powi(0.5, 30);
        let p = dd(x) * dd(x);
        let exact_lo = crate::math::powi(0.5, 60);
        assert_eq!(p.value(), x * x);
        assert_eq!((p - dd(x * x)).value(), exact_lo);
    }

    #[test]
    fn division_round_trips() {
        let a = dd(1.0) / dd(3.0);
        let back = a * dd(3.0) - dd(1.0);
        assert!(back.value().abs() < 1e-31);
    }

    #[test]
    fn steep_row_cancellation_survives() {
        // The radial row-1 shape: t + phi * (-t / phi) with t ~ 1e8 and a
        // tiny phi; in plain f64 this leaves ~1e-8, in dd it vanishes.
        let t = dd(1.2700331e8);
        let phi = dd(1.12535e-7);
        let fpp = -t / phi;
        let row = t + phi * fpp;
        assert!(row.value().abs() < 1e-22, "row = {:e}", row.value());
    }
}
