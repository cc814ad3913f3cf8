//! Antiderivative tables by adaptive Simpson quadrature.
//!
//! [`Antiderivative`] tabulates `F(t) = int_base^t f(s) ds` over an interval
//! once, then answers point queries by cubic Hermite interpolation. The slopes
//! at the knots are integrand values, so `F' = f` holds exactly at every knot.
//!
//! Accuracy budget: a panel `[a, b]` inside an interval of length `W` may
//! contribute at most `tol·(b-a)/W` of absolute error, so the accumulated
//! quadrature error up to any point stays below `tol`. Panels whose integral
//! is too large for that absolute budget to be meaningful in f64 (steep
//! recipe integrands reach ~1e15) fall back to a relative budget of
//! [`limits::QUAD_REL`]. Accepted segments are stored as four sub-panels,
//! which keeps the Hermite interpolation error far below the quadrature
//! budget as well.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::limits;
use crate::profile::Interval;

#[derive(Clone, Copy, Debug)]
pub struct QuadSettings {
    /// Absolute error budget for the whole table.
    pub tol: f64,
    /// Cap on stored knots; exceeding it is a [`Error::QuadratureFailure`].
    pub node_budget: usize,
}

impl Default for QuadSettings {
    fn default() -> Self {
        QuadSettings { tol: limits::QUAD_TOL, node_budget: limits::QUAD_NODE_BUDGET }
    }
}

const MAX_DEPTH: u32 = 40;

/// Tabulated antiderivative with `F(base) = 0` exactly.
#[derive(Clone, Debug)]
pub struct Antiderivative {
    base: f64,
    knots: Vec<f64>,
    /// `F` at each knot.
    cum: Vec<f64>,
    /// Integrand at each knot (`F'`).
    slope: Vec<f64>,
}

/// Builds the antiderivative table of `f` over `interval`, anchored so that
/// the result vanishes at `base`.
pub fn antiderivative(
    f: &dyn Fn(f64) -> Result<f64>,
    interval: Interval,
    base: f64,
    settings: &QuadSettings,
) -> Result<Antiderivative> {
    Antiderivative::build(f, interval, base, settings)
}

fn simpson(h: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    h / 6.0 * (fa + 4.0 * fm + fb)
}

struct Builder<'a> {
    f: &'a dyn Fn(f64) -> Result<f64>,
    total_len: f64,
    tol: f64,
    node_budget: usize,
    knots: Vec<f64>,
    increments: Vec<f64>,
    slope: Vec<f64>,
}

impl<'a> Builder<'a> {
    fn eval(&self, t: f64) -> Result<f64> {
        let v = (self.f)(t)?;
        if !v.is_finite() {
            return Err(Error::QuadratureFailure {
                detail: format!("integrand is not finite at t = {t}"),
            });
        }
        Ok(v)
    }

    fn push_knot(&mut self, t: f64, slope: f64, increment: f64) -> Result<()> {
        if self.knots.len() >= self.node_budget {
            return Err(Error::QuadratureFailure {
                detail: format!(
                    "node budget {} exhausted near t = {t}; integrand may be singular",
                    self.node_budget
                ),
            });
        }
        self.knots.push(t);
        self.slope.push(slope);
        self.increments.push(increment);
        Ok(())
    }

    /// Adaptive subdivision of `[a, b]`, appending knots left to right.
    /// The first knot of the segment is assumed already pushed.
    fn segment(&mut self, a: f64, fa: f64, b: f64, fb: f64) -> Result<()> {
        struct Frame {
            a: f64,
            fa: f64,
            b: f64,
            fb: f64,
            m: f64,
            fm: f64,
            s1: f64,
            depth: u32,
        }
        let mut stack: Vec<Frame> = Vec::new();
        let m = 0.5 * (a + b);
        let fm = self.eval(m)?;
        stack.push(Frame { a, fa, b, fb, m, fm, s1: simpson(b - a, fa, fm, fb), depth: 0 });
        while let Some(fr) = stack.pop() {
            let h = fr.b - fr.a;
            let lm = 0.5 * (fr.a + fr.m);
            let rm = 0.5 * (fr.m + fr.b);
            let flm = self.eval(lm)?;
            let frm = self.eval(rm)?;
            let sl = simpson(fr.m - fr.a, fr.fa, flm, fr.fm);
            let sr = simpson(fr.b - fr.m, fr.fm, frm, fr.fb);
            let s2 = sl + sr;
            // Absolute budget proportional to panel width, with a relative
            // term for recipe integrands that reach ~1e15 (where the absolute
            // budget is below one ulp) and a floor at the rounding noise of
            // the Simpson sums themselves.
            let eps = (self.tol * h / self.total_len)
                .max(limits::QUAD_REL * s2.abs())
                .max(2.0 * f64::EPSILON * (sl.abs() + sr.abs()));
            if (s2 - fr.s1).abs() <= 15.0 * eps || fr.depth >= MAX_DEPTH {
                if fr.depth >= MAX_DEPTH && (s2 - fr.s1).abs() > 15.0 * eps {
                    return Err(Error::QuadratureFailure {
                        detail: format!(
                            "maximum depth reached on [{}, {}] without convergence",
                            fr.a, fr.b
                        ),
                    });
                }
                // Store four sub-panels with their own Simpson values; the
                // extra midpoint evaluations keep both the per-panel integral
                // and the interpolation error far inside the budget.
                let quarters = [(fr.a, fr.fa, lm, flm), (lm, flm, fr.m, fr.fm),
                                (fr.m, fr.fm, rm, frm), (rm, frm, fr.b, fr.fb)];
                for (qa, fqa, qb, fqb) in quarters {
                    let qm = 0.5 * (qa + qb);
                    let fqm = self.eval(qm)?;
                    let inc = simpson(qb - qa, fqa, fqm, fqb);
                    self.push_knot(qb, fqb, inc)?;
                }
            } else {
                // Right first so the left half is processed first (LIFO).
                stack.push(Frame {
                    a: fr.m,
                    fa: fr.fm,
                    b: fr.b,
                    fb: fr.fb,
                    m: rm,
                    fm: frm,
                    s1: sr,
                    depth: fr.depth + 1,
                });
                stack.push(Frame {
                    a: fr.a,
                    fa: fr.fa,
                    b: fr.m,
                    fb: fr.fm,
                    m: lm,
                    fm: flm,
                    s1: sl,
                    depth: fr.depth + 1,
                });
            }
        }
        Ok(())
    }
}

impl Antiderivative {
    pub fn build(
        f: &dyn Fn(f64) -> Result<f64>,
        interval: Interval,
        base: f64,
        settings: &QuadSettings,
    ) -> Result<Antiderivative> {
        if !interval.contains(base) {
            return Err(Error::Invalid(format!(
                "base point {base} lies outside [{}, {}]",
                interval.lo(),
                interval.hi()
            )));
        }
        if !(settings.tol > 0.0) {
            return Err(Error::Invalid("quadrature tolerance must be positive".into()));
        }
        let mut b = Builder {
            f,
            total_len: interval.len(),
            tol: settings.tol,
            node_budget: settings.node_budget.max(16),
            knots: Vec::new(),
            increments: Vec::new(),
            slope: Vec::new(),
        };
        let lo = interval.lo();
        let hi = interval.hi();
        let flo = b.eval(lo)?;
        b.push_knot(lo, flo, 0.0)?;
        // Segment boundaries at the base guarantee it lands on a knot.
        if base > lo && base < hi {
            let fbase = b.eval(base)?;
            b.segment(lo, flo, base, fbase)?;
            let fhi = b.eval(hi)?;
            b.segment(base, fbase, hi, fhi)?;
        } else {
            let fhi = b.eval(hi)?;
            b.segment(lo, flo, hi, fhi)?;
        }
        let mut cum = Vec::with_capacity(b.increments.len());
        let mut running = 0.0;
        for inc in &b.increments {
            running += inc;
            cum.push(running);
        }
        let idx = b
            .knots
            .iter()
            .position(|&t| t == base)
            .expect("base is a segment boundary, hence a knot");
        let anchor = cum[idx];
        for c in &mut cum {
            *c -= anchor;
        }
        debug_assert_eq!(cum[idx], 0.0);
        debug_assert!(b.knots.windows(2).all(|w| w[0] < w[1]));
        Ok(Antiderivative { base, knots: b.knots, cum, slope: b.slope })
    }

    pub fn base(&self) -> f64 {
        self.base
    }

    /// Range actually covered by the table.
    pub fn range(&self) -> Interval {
        Interval::new(self.knots[0], *self.knots.last().unwrap())
            .expect("table spans a nonempty interval")
    }

    pub fn knot_count(&self) -> usize {
        self.knots.len()
    }

    /// `F(t)` by cubic Hermite interpolation; knots reproduce their stored
    /// values exactly (in particular `F(base) = 0`).
    pub fn eval(&self, t: f64) -> Result<f64> {
        let lo = self.knots[0];
        let hi = *self.knots.last().unwrap();
        let slack = 16.0 * f64::EPSILON * hi.abs().max(lo.abs()).max(1.0);
        let t = if t < lo && t >= lo - slack {
            lo
        } else if t > hi && t <= hi + slack {
            hi
        } else {
            t
        };
        if t < lo || t > hi {
            return Err(Error::DomainViolation(format!(
                "antiderivative query at t = {t} outside tabulated range [{lo}, {hi}]"
            )));
        }
        // First knot strictly greater than t; the panel starts one before.
        let idx = self.knots.partition_point(|&x| x <= t);
        if idx == 0 {
            return Ok(self.cum[0]);
        }
        let i1 = idx.min(self.knots.len() - 1).max(1);
        let i0 = i1 - 1;
        let x0 = self.knots[i0];
        let x1 = self.knots[i1];
        if t == x0 {
            return Ok(self.cum[i0]);
        }
        if t == x1 {
            return Ok(self.cum[i1]);
        }
        let h = x1 - x0;
        let u = (t - x0) / h;
        let u2 = u * u;
        let u3 = u2 * u;
        let h00 = 2.0 * u3 - 3.0 * u2 + 1.0;
        let h10 = u3 - 2.0 * u2 + u;
        let h01 = -2.0 * u3 + 3.0 * u2;
        let h11 = u3 - u2;
        Ok(h00 * self.cum[i0]
            + h01 * self.cum[i1]
            + h * (h10 * self.slope[i0] + h11 * self.slope[i1]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::linspace;

    fn cos_table(tol: f64) -> Antiderivative {
        let f = |t: f64| Ok(t.cos());
        let iv = Interval::new(-6.0, 6.0).unwrap();
        Antiderivative::build(&f, iv, 0.0, &QuadSettings { tol, ..Default::default() }).unwrap()
    }

    #[test]
    fn cosine_antiderivative_matches_sine_everywhere() {
        let table = cos_table(1e-10);
        let mut worst = 0.0f64;
        for t in linspace(Interval::new(-6.0, 6.0).unwrap(), 1000) {
            let err = (table.eval(t).unwrap() - t.sin()).abs();
            worst = worst.max(err);
        }
        assert!(worst <= 1e-10, "worst error {worst:.3e}");
    }

    #[test]
    fn frozen_value_at_one() {
        let table = cos_table(1e-10);
        assert!((table.eval(1.0).unwrap() - 0.8414709848078965).abs() <= 1e-10);
    }

    #[test]
    fn base_value_is_exactly_zero() {
        let table = cos_table(1e-10);
        assert_eq!(table.eval(0.0).unwrap(), 0.0);
        let f = |t: f64| Ok((-t).exp());
        let iv = Interval::new(0.25, 3.0).unwrap();
        let shifted =
            Antiderivative::build(&f, iv, 1.5, &QuadSettings::default()).unwrap();
        assert_eq!(shifted.eval(1.5).unwrap(), 0.0);
    }

    #[test]
    fn base_shift_is_a_constant_offset() {
        let f = |t: f64| Ok(1.0 / (1.0 + t * t));
        let iv = Interval::new(-3.0, 3.0).unwrap();
        let s = QuadSettings::default();
        let a0 = Antiderivative::build(&f, iv, 0.0, &s).unwrap();
        let a1 = Antiderivative::build(&f, iv, 1.0, &s).unwrap();
        let offset = a0.eval(1.0).unwrap();
        for t in linspace(iv, 101) {
            let d = a0.eval(t).unwrap() - a1.eval(t).unwrap();
            assert!((d - offset).abs() <= 2e-10, "t = {t}");
        }
    }

    #[test]
    fn endpoint_base_is_supported() {
        let f = |t: f64| Ok(t);
        let iv = Interval::new(0.0, 2.0).unwrap();
        let a = Antiderivative::build(&f, iv, 0.0, &QuadSettings::default()).unwrap();
        assert_eq!(a.eval(0.0).unwrap(), 0.0);
        assert!((a.eval(2.0).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn node_budget_exhaustion_is_reported() {
        let f = |t: f64| Ok(t.cos());
        let iv = Interval::new(-6.0, 6.0).unwrap();
        let err = Antiderivative::build(
            &f,
            iv,
            0.0,
            &QuadSettings { tol: 1e-12, node_budget: 32 },
        )
        .unwrap_err();
        assert!(matches!(err, Error::QuadratureFailure { .. }));
    }

    #[test]
    fn non_finite_integrand_is_reported() {
        let f = |t: f64| Ok(1.0 / t);
        let iv = Interval::new(-1.0, 1.0).unwrap();
        let err = Antiderivative::build(&f, iv, 0.0, &QuadSettings::default()).unwrap_err();
        assert!(matches!(err, Error::QuadratureFailure { .. }));
    }

    #[test]
    fn out_of_range_query_is_rejected() {
        let table = cos_table(1e-8);
        assert!(table.eval(6.5).is_err());
        assert!(table.eval(-6.0 - 1e-3).is_err());
        // A hair outside the edge clamps instead of failing.
        assert!(table.eval(6.0 + 1e-15).is_ok());
    }

    #[test]
    fn integrand_errors_propagate() {
        let f = |t: f64| {
            if t > 0.5 {
                Err(Error::EvalDomain { what: "test failure", at: t })
            } else {
                Ok(t)
            }
        };
        let iv = Interval::new(0.0, 1.0).unwrap();
        let err = Antiderivative::build(&f, iv, 0.0, &QuadSettings::default()).unwrap_err();
        assert!(matches!(err, Error::EvalDomain { .. }));
    }
}
