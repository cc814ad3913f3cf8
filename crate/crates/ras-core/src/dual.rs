//! Second-order forward-mode scalar: value, first and second derivative.
//!
//! `Dual2` carries the truncated Taylor data `(u, u', u'')` of a univariate
//! expression through arithmetic and elementary functions. All derivative
//! lanes are exact (no finite differencing), so profile jets are accurate to
//! rounding.

use core::ops::{Add, Div, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::math;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dual2 {
    pub v: f64,
    pub d1: f64,
    pub d2: f64,
}

impl Dual2 {
    pub const ZERO: Dual2 = Dual2 { v: 0.0, d1: 0.0, d2: 0.0 };
    pub const ONE: Dual2 = Dual2 { v: 1.0, d1: 0.0, d2: 0.0 };

    pub const fn new(v: f64, d1: f64, d2: f64) -> Self {
        Dual2 { v, d1, d2 }
    }

    /// The evaluation point itself: seed `(t, 1, 0)`.
    pub const fn variable(t: f64) -> Self {
        Dual2 { v: t, d1: 1.0, d2: 0.0 }
    }

    pub const fn constant(v: f64) -> Self {
        Dual2 { v, d1: 0.0, d2: 0.0 }
    }

    pub fn is_finite(&self) -> bool {
        self.v.is_finite() && self.d1.is_finite() && self.d2.is_finite()
    }

    /// Composition with `g` given `g(u)`, `g'(u)`, `g''(u)`:
    /// `(g∘u)'' = g''·u'^2 + g'·u''`.
    fn chain(self, g: f64, dg: f64, ddg: f64) -> Self {
        Dual2 {
            v: g,
            d1: dg * self.d1,
            d2: ddg * self.d1 * self.d1 + dg * self.d2,
        }
    }

    pub fn exp(self) -> Self {
        let e = math::exp(self.v);
        self.chain(e, e, e)
    }

    pub fn ln(self) -> Result<Self> {
        if self.v <= 0.0 {
            return Err(Error::EvalDomain { what: "ln of a non-positive value", at: self.v });
        }
        let inv = 1.0 / self.v;
        Ok(self.chain(math::ln(self.v), inv, -inv * inv))
    }

    pub fn sin(self) -> Self {
        let (s, c) = (math::sin(self.v), math::cos(self.v));
        self.chain(s, c, -s)
    }

    pub fn cos(self) -> Self {
        let (s, c) = (math::sin(self.v), math::cos(self.v));
        self.chain(c, -s, -c)
    }

    pub fn sinh(self) -> Self {
        let (s, c) = (math::sinh(self.v), math::cosh(self.v));
        self.chain(s, c, s)
    }

    pub fn cosh(self) -> Self {
        let (s, c) = (math::sinh(self.v), math::cosh(self.v));
        self.chain(c, s, c)
    }

    pub fn sqrt(self) -> Result<Self> {
        if self.v <= 0.0 {
            return Err(Error::EvalDomain { what: "sqrt of a non-positive value", at: self.v });
        }
        let s = math::sqrt(self.v);
        let d = 0.5 / s;
        Ok(self.chain(s, d, -0.5 * d / self.v))
    }

    /// Integer power; valid for any base (including negative and, for
    /// `k >= 2`, zero).
    pub fn powi(self, k: i32) -> Result<Self> {
        if self.v == 0.0 && k < 0 {
            return Err(Error::EvalDomain { what: "negative power of zero", at: 0.0 });
        }
        let kf = k as f64;
        let g = math::powi(self.v, k);
        let dg = if k == 0 { 0.0 } else { kf * math::powi(self.v, k - 1) };
        let ddg = if k == 0 || k == 1 { 0.0 } else { kf * (kf - 1.0) * math::powi(self.v, k - 2) };
        Ok(self.chain(g, dg, ddg))
    }

    /// General power `a^b = exp(b·ln a)`; requires a positive base.
    pub fn powf(self, e: Dual2) -> Result<Self> {
        if self.v <= 0.0 {
            return Err(Error::EvalDomain {
                what: "non-integer power of a non-positive base",
                at: self.v,
            });
        }
        Ok((e * self.ln()?).exp())
    }

    pub fn recip(self) -> Result<Self> {
        if self.v == 0.0 {
            return Err(Error::EvalDomain { what: "division by zero", at: 0.0 });
        }
        Ok(Dual2::ONE / self)
    }
}

impl Add for Dual2 {
    type Output = Dual2;
    fn add(self, o: Dual2) -> Dual2 {
        Dual2::new(self.v + o.v, self.d1 + o.d1, self.d2 + o.d2)
    }
}

impl Sub for Dual2 {
    type Output = Dual2;
    fn sub(self, o: Dual2) -> Dual2 {
        Dual2::new(self.v - o.v, self.d1 - o.d1, self.d2 - o.d2)
    }
}

impl Mul for Dual2 {
    type Output = Dual2;
    fn mul(self, o: Dual2) -> Dual2 {
        Dual2::new(
            self.v * o.v,
            self.d1 * o.v + self.v * o.d1,
            self.d2 * o.v + 2.0 * self.d1 * o.d1 + self.v * o.d2,
        )
    }
}

impl Div for Dual2 {
    type Output = Dual2;
    /// Quotient rule in recurrence form: with `c = a/b`,
    /// `c' = (a' - c·b')/b` and `c'' = (a'' - 2c'·b' - c·b'')/b`.
    fn div(self, o: Dual2) -> Dual2 {
        let v = self.v / o.v;
        let d1 = (self.d1 - v * o.d1) / o.v;
        let d2 = (self.d2 - 2.0 * d1 * o.d1 - v * o.d2) / o.v;
        Dual2::new(v, d1, d2)
    }
}

impl Neg for Dual2 {
    type Output = Dual2;
    fn neg(self) -> Dual2 {
        Dual2::new(-self.v, -self.d1, -self.d2)
    }
}

impl Mul<f64> for Dual2 {
    type Output = Dual2;
    fn mul(self, s: f64) -> Dual2 {
        Dual2::new(self.v * s, self.d1 * s, self.d2 * s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const E_INV: f64 = 0.36787944117144233;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-12 * (1.0 + a.abs().max(b.abs()))
    }

    #[test]
    fn reciprocal_of_one_plus_square_at_zero() {
        let t = Dual2::variable(0.0);
        let d = Dual2::ONE / (Dual2::ONE + t * t);
        assert_eq!(d.v, 1.0);
        assert_eq!(d.d1, 0.0);
        assert_eq!(d.d2, -2.0);
    }

    #[test]
    fn exp_neg_cosh_at_zero() {
        let t = Dual2::variable(0.0);
        let d = (-t.cosh()).exp();
        assert!(close(d.v, E_INV));
        assert_eq!(d.d1, 0.0);
        assert!(close(d.d2, -E_INV));
    }

    #[test]
    fn product_second_derivative_identity() {
        let a = Dual2::new(1.3, -0.7, 2.1);
        let b = Dual2::new(-0.4, 1.9, 0.6);
        let p = a * b;
        assert_eq!(p.d2, a.d2 * b.v + 2.0 * a.d1 * b.d1 + a.v * b.d2);
    }

    #[test]
    fn division_round_trips_multiplication() {
        let a = Dual2::new(0.9, 1.4, -2.2);
        let b = Dual2::new(-1.7, 0.3, 0.8);
        let q = a / b;
        let back = q * b;
        assert!(close(back.v, a.v) && close(back.d1, a.d1) && close(back.d2, a.d2));
    }

    #[test]
    fn chain_rule_against_closed_form() {
        // d²/dt² sin(t²) = 2cos(t²) − 4t²sin(t²)
        let t = 0.8;
        let d = (Dual2::variable(t) * Dual2::variable(t)).sin();
        let tt = t * t;
        assert!(close(d.d1, 2.0 * t * tt.cos()));
        assert!(close(d.d2, 2.0 * tt.cos() - 4.0 * tt * tt.sin()));
    }

    #[test]
    fn powi_handles_negative_base_and_exponent() {
        let d = Dual2::variable(-2.0).powi(-2).unwrap();
        assert_eq!(d.v, 0.25);
        assert!(close(d.d1, 0.25)); // -2·x^-3 at -2
        assert!(close(d.d2, 0.375)); // 6·x^-4 at -2
    }

    #[test]
    fn domain_errors_are_reported() {
        assert!(Dual2::variable(-1.0).ln().is_err());
        assert!(Dual2::variable(-1.0).sqrt().is_err());
        assert!(Dual2::variable(0.0).powi(-1).is_err());
        assert!(Dual2::variable(-1.0).powf(Dual2::constant(0.5)).is_err());
    }
}
