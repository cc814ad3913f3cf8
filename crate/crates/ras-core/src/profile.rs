//! Conformal profiles: univariate curves with exact second-order jets.
//!
//! A [`Profile`] is the scalar ingredient of every construction: the function
//! `phi` of the invariant variable. Profiles come from the expression parser
//! or from a small catalog of hand-coded entries, and carry an optional
//! validity domain on which `|phi|` has been checked against the floor
//! [`limits::CONFORMAL_EPS`].

use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::dd::Dd;
use crate::dual::Dual2;
use crate::error::{Error, Result};
use crate::expr::{self, ParsedExpr, VarKind};
use crate::limits;

/// Closed interval `[lo, hi]` with `lo < hi`, both finite.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Interval> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::Invalid(format!("invalid interval [{lo}, {hi}]")));
        }
        Ok(Interval { lo, hi })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, t: f64) -> bool {
        self.lo <= t && t <= self.hi
    }

    /// Expands each side by `frac * len`, keeping the lower end at or above
    /// `floor` when one is given.
    pub fn pad(&self, frac: f64, floor: Option<f64>) -> Interval {
        let d = frac * self.len();
        let mut lo = self.lo - d;
        if let Some(fl) = floor {
            if self.lo >= fl {
                lo = lo.max(fl);
            }
        }
        Interval { lo, hi: self.hi + d }
    }
}

/// `count` evenly spaced points over `iv`, endpoints included.
pub fn linspace(iv: Interval, count: usize) -> Vec<f64> {
    if count == 0 {
        return Vec::new();
    }
    if count == 1 {
        return alloc::vec![iv.midpoint()];
    }
    let step = iv.len() / (count - 1) as f64;
    (0..count)
        .map(|k| if k + 1 == count { iv.hi() } else { iv.lo() + step * k as f64 })
        .collect()
}

/// A univariate function with value, first and second derivative.
pub trait Curve: Send + Sync {
    fn eval2(&self, t: f64) -> Result<Dual2>;

    fn value(&self, t: f64) -> Result<f64> {
        Ok(self.eval2(t)?.v)
    }

    /// Extended-precision lanes for verifiers certifying residuals below the
    /// f64 noise floor (steep recipes push row terms to ~1e8 against 1e-8
    /// tolerances). The default lifts the f64 lanes exactly; recipe curves
    /// override it with genuine double-double evaluations.
    fn eval2_dd(&self, t: f64) -> Result<(Dd, Dd, Dd)> {
        let d = self.eval2(t)?;
        Ok((Dd::from(d.v), Dd::from(d.d1), Dd::from(d.d2)))
    }
}

impl Curve for Arc<dyn Curve> {
    fn eval2(&self, t: f64) -> Result<Dual2> {
        (**self).eval2(t)
    }

    fn value(&self, t: f64) -> Result<f64> {
        (**self).value(t)
    }

    fn eval2_dd(&self, t: f64) -> Result<(Dd, Dd, Dd)> {
        (**self).eval2_dd(t)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Builtin {
    /// `1/(1+xi^2)`
    InverseOnePlusSq,
    /// `exp(-cosh(xi))`
    ExpNegCosh,
    /// `exp(-r^2)`
    ExpNegSq,
    /// The identity curve `t`.
    Linear,
    Const(f64),
}

impl Builtin {
    fn eval2(&self, t: f64) -> Dual2 {
        let u = Dual2::variable(t);
        match self {
            Builtin::InverseOnePlusSq => Dual2::ONE / (Dual2::ONE + u * u),
            Builtin::ExpNegCosh => (-u.cosh()).exp(),
            Builtin::ExpNegSq => (-(u * u)).exp(),
            Builtin::Linear => u,
            Builtin::Const(a) => Dual2::constant(*a),
        }
    }

    fn label(&self) -> String {
        match self {
            Builtin::InverseOnePlusSq => "1/(1+xi^2)".to_string(),
            Builtin::ExpNegCosh => "exp(-cosh(xi))".to_string(),
            Builtin::ExpNegSq => "exp(-r^2)".to_string(),
            Builtin::Linear => "linear".to_string(),
            Builtin::Const(a) => format!("const({a})"),
        }
    }

    fn var(&self) -> Option<VarKind> {
        match self {
            Builtin::InverseOnePlusSq | Builtin::ExpNegCosh => Some(VarKind::Xi),
            Builtin::ExpNegSq => Some(VarKind::R),
            Builtin::Linear | Builtin::Const(_) => None,
        }
    }
}

#[derive(Clone, Debug)]
enum ProfileKind {
    Parsed(ParsedExpr),
    Builtin(Builtin),
}

/// A profile curve, optionally restricted to a validated domain.
#[derive(Clone, Debug)]
pub struct Profile {
    kind: ProfileKind,
    label: String,
    var: Option<VarKind>,
    domain: Option<Interval>,
}

/// Parses an expression in `xi` or `r` into an unrestricted profile.
pub fn parse_profile(text: &str) -> Result<Profile> {
    Profile::parse(text)
}

impl Profile {
    pub fn parse(text: &str) -> Result<Profile> {
        let parsed = expr::parse_expr(text)?;
        Ok(Profile {
            var: parsed.var,
            label: parsed.pretty(),
            kind: ProfileKind::Parsed(parsed),
            domain: None,
        })
    }

    /// Resolves a catalog name (`paperA`, `paperB`, `paperC`, `linear`,
    /// `const(a)`) or, failing that, parses the text as an expression.
    pub fn from_spec(text: &str) -> Result<Profile> {
        let t = text.trim();
        let builtin = match t {
            "paperA" => Some(Builtin::InverseOnePlusSq),
            "paperB" => Some(Builtin::ExpNegCosh),
            "paperC" => Some(Builtin::ExpNegSq),
            "linear" => Some(Builtin::Linear),
            _ => {
                if let Some(rest) = t.strip_prefix("const(") {
                    if let Some(arg) = rest.strip_suffix(')') {
                        let a: f64 = arg.trim().parse().map_err(|_| {
                            Error::Invalid(format!("bad constant profile argument: {arg}"))
                        })?;
                        Some(Builtin::Const(a))
                    } else {
                        return Err(Error::Invalid(format!("unterminated const(...): {t}")));
                    }
                } else {
                    None
                }
            }
        };
        match builtin {
            Some(b) => Ok(Profile::builtin(b)),
            None => Profile::parse(t),
        }
    }

    pub fn catalog_names() -> &'static [&'static str] {
        &["paperA", "paperB", "paperC", "linear", "const(a)"]
    }

    fn builtin(b: Builtin) -> Profile {
        Profile { label: b.label(), var: b.var(), kind: ProfileKind::Builtin(b), domain: None }
    }

    pub fn constant(a: f64) -> Profile {
        Profile::builtin(Builtin::Const(a))
    }

    pub fn linear() -> Profile {
        Profile::builtin(Builtin::Linear)
    }

    /// Human-readable formula, used in reports.
    pub fn label(&self) -> &str {
        &self.label
    }

    /// Which invariant variable the formula mentions, if any.
    pub fn var(&self) -> Option<VarKind> {
        self.var
    }

    pub fn domain(&self) -> Option<Interval> {
        self.domain
    }

    /// Restricts to `domain` after checking validity there.
    pub fn with_domain(mut self, domain: Interval) -> Result<Profile> {
        self.scan_validity(domain)?;
        self.domain = Some(domain);
        Ok(self)
    }

    /// Samples [`limits::PROFILE_SCAN_POINTS`] points of `window` and fails if
    /// `|phi|` ever drops to the validity floor. A scan, not a proof: zeros
    /// between probe points can escape it, but every downstream consumer
    /// rechecks magnitudes pointwise.
    pub fn scan_validity(&self, window: Interval) -> Result<()> {
        for t in linspace(window, limits::PROFILE_SCAN_POINTS) {
            let d = self.eval2(t)?;
            if d.v.abs() <= limits::CONFORMAL_EPS {
                return Err(Error::DomainViolation(format!(
                    "profile {} has magnitude {:.3e} at t = {t}, below the validity floor",
                    self.label,
                    d.v.abs()
                )));
            }
        }
        Ok(())
    }

    /// Minimum sampled value over `window` (same grid as the validity scan).
    pub fn min_value_on(&self, window: Interval) -> Result<f64> {
        let mut min = f64::INFINITY;
        for t in linspace(window, limits::PROFILE_SCAN_POINTS) {
            min = min.min(self.eval2(t)?.v);
        }
        Ok(min)
    }
}

impl Curve for Profile {
    fn eval2(&self, t: f64) -> Result<Dual2> {
        match &self.kind {
            ProfileKind::Parsed(p) => p.eval2(t),
            ProfileKind::Builtin(b) => {
                let d = b.eval2(t);
                if !d.is_finite() {
                    return Err(Error::EvalDomain { what: "non-finite profile value", at: t });
                }
                Ok(d)
            }
        }
    }
}

/// `inner(t) + eps·t^2`: the standard way to break a soliton on purpose in
/// negative-control tests (bends the potential without touching the profile).
pub struct QuadraticBump {
    pub inner: Arc<dyn Curve>,
    pub eps: f64,
}

impl Curve for QuadraticBump {
    fn eval2(&self, t: f64) -> Result<Dual2> {
        let d = self.inner.eval2(t)?;
        Ok(Dual2::new(d.v + self.eps * t * t, d.d1 + 2.0 * self.eps * t, d.d2 + 2.0 * self.eps))
    }
}

/// `inner(t) + delta`: constant offset, used to perturb `rho`.
pub struct OffsetCurve {
    pub inner: Arc<dyn Curve>,
    pub delta: f64,
}

impl Curve for OffsetCurve {
    fn eval2(&self, t: f64) -> Result<Dual2> {
        let d = self.inner.eval2(t)?;
        Ok(Dual2::new(d.v + self.delta, d.d1, d.d2))
    }
}

/// Central-difference first and second derivatives of a value-only curve,
/// with the step shrunk to stay inside `[lo, hi]`.
pub(crate) fn fd_jet(value: &dyn Fn(f64) -> Result<f64>, t: f64, lo: f64, hi: f64) -> Result<(f64, f64)> {
    let mut h = limits::FD_STEP * t.abs().max(1.0);
    let room = (hi - t).min(t - lo);
    if room <= 0.0 {
        return Err(Error::Invalid(format!(
            "finite-difference stencil at t = {t} falls outside [{lo}, {hi}]"
        )));
    }
    h = h.min(room);
    let fp = value(t + h)?;
    let fm = value(t - h)?;
    let f0 = value(t)?;
    Ok(((fp - fm) / (2.0 * h), (fp - 2.0 * f0 + fm) / (h * h)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_entry_a_matches_frozen_jet() {
        let p = Profile::from_spec("paperA").unwrap();
        let d = p.eval2(0.0).unwrap();
        assert_eq!((d.v, d.d1, d.d2), (1.0, 0.0, -2.0));
        assert_eq!(p.var(), Some(VarKind::Xi));
    }

    #[test]
    fn catalog_entries_match_their_parsed_forms() {
        let pairs = [
            ("paperA", "1/(1+xi^2)"),
            ("paperB", "exp(-cosh(xi))"),
            ("paperC", "exp(-r^2)"),
        ];
        for (name, formula) in pairs {
            let b = Profile::from_spec(name).unwrap();
            let p = Profile::parse(formula).unwrap();
            for t in linspace(Interval::new(-2.0, 2.0).unwrap(), 41) {
                let db = b.eval2(t).unwrap();
                let dp = p.eval2(t).unwrap();
                for (x, y) in [(db.v, dp.v), (db.d1, dp.d1), (db.d2, dp.d2)] {
                    assert!((x - y).abs() <= 1e-14 * (1.0 + x.abs()), "{name} at {t}");
                }
            }
        }
    }

    #[test]
    fn const_catalog_entry_parses_its_argument() {
        let p = Profile::from_spec("const(2.5)").unwrap();
        let d = p.eval2(7.0).unwrap();
        assert_eq!((d.v, d.d1, d.d2), (2.5, 0.0, 0.0));
        assert!(Profile::from_spec("const(oops)").is_err());
    }

    #[test]
    fn linear_profile_is_the_identity() {
        let p = Profile::from_spec("linear").unwrap();
        let d = p.eval2(-3.5).unwrap();
        assert_eq!((d.v, d.d1, d.d2), (-3.5, 1.0, 0.0));
    }

    #[test]
    fn validity_scan_rejects_tiny_profiles() {
        let window = Interval::new(-1.0, 1.0).unwrap();
        assert!(Profile::constant(0.0).with_domain(window).is_err());
        assert!(Profile::constant(1e-10).with_domain(window).is_err());
        assert!(Profile::from_spec("paperA").unwrap().with_domain(window).is_ok());
    }

    #[test]
    fn linspace_hits_both_endpoints_exactly() {
        let iv = Interval::new(0.1, 0.7).unwrap();
        let pts = linspace(iv, 7);
        assert_eq!(pts.len(), 7);
        assert_eq!(pts[0], 0.1);
        assert_eq!(pts[6], 0.7);
        assert!(pts.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn padding_respects_the_floor() {
        let iv = Interval::new(0.1, 4.0).unwrap();
        let padded = iv.pad(0.05, Some(0.0));
        assert_eq!(padded.lo(), 0.0);
        assert!(padded.hi() > 4.0);
        let free = Interval::new(-3.0, 3.0).unwrap().pad(0.05, Some(0.0));
        assert!(free.lo() < -3.0);
    }

    #[test]
    fn fd_jet_matches_exact_derivatives() {
        let p = Profile::from_spec("paperB").unwrap();
        let value = |t: f64| p.value(t);
        let (d1, d2) = fd_jet(&value, 0.7, -2.0, 2.0).unwrap();
        let exact = p.eval2(0.7).unwrap();
        assert!((d1 - exact.d1).abs() < 1e-7);
        assert!((d2 - exact.d2).abs() < 1e-6);
    }
}
