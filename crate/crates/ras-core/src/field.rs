//! Scalar and metric fields on coordinate space, with second-order jets.
//!
//! A jet carries exactly the data the curvature operators need: value,
//! gradient and Hessian for scalars; entries, first and second coordinate
//! derivatives for metrics. Closed-form fields compute jets by chain rule;
//! the finite-difference wrappers exist to cross-check them and to admit
//! black-box fields in tests.

use alloc::format;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::invariant::Signature;
use crate::limits;
use crate::linalg::{packed_index, packed_len, SymMat};

#[derive(Clone, Debug, PartialEq)]
pub struct Point {
    coords: Vec<f64>,
}

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Point> {
        if coords.is_empty() {
            return Err(Error::Invalid("point needs at least one coordinate".into()));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::Invalid(format!("non-finite coordinate in {coords:?}")));
        }
        Ok(Point { coords })
    }

    pub fn from_slice(coords: &[f64]) -> Result<Point> {
        Point::new(coords.to_vec())
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }
}

/// Value, gradient and Hessian of a scalar field at a point.
#[derive(Clone, Debug)]
pub struct ScalarJet {
    pub v: f64,
    pub grad: Vec<f64>,
    pub hess: SymMat,
}

pub trait ScalarField: Send + Sync {
    fn dim(&self) -> usize;

    fn jet(&self, p: &Point) -> Result<ScalarJet>;

    fn value(&self, p: &Point) -> Result<f64> {
        Ok(self.jet(p)?.v)
    }
}

impl ScalarField for Arc<dyn ScalarField> {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn jet(&self, p: &Point) -> Result<ScalarJet> {
        (**self).jet(p)
    }

    fn value(&self, p: &Point) -> Result<f64> {
        (**self).value(p)
    }
}

fn check_dim(expected: usize, p: &Point) -> Result<()> {
    if p.dim() != expected {
        return Err(Error::Dimension { expected, got: p.dim() });
    }
    Ok(())
}

pub struct ConstantField {
    dim: usize,
    v: f64,
}

impl ConstantField {
    pub fn new(dim: usize, v: f64) -> ConstantField {
        ConstantField { dim, v }
    }
}

impl ScalarField for ConstantField {
    fn dim(&self) -> usize {
        self.dim
    }

    fn jet(&self, p: &Point) -> Result<ScalarJet> {
        check_dim(self.dim, p)?;
        Ok(ScalarJet { v: self.v, grad: vec![0.0; self.dim], hess: SymMat::zeros(self.dim) })
    }
}

/// `u(x) = (a/2)|x|^2 + b·x + c`; the potential of the Gaussian soliton when
/// `b = 0`, `c = 0`.
pub struct QuadraticPotential {
    pub a: f64,
    pub b: Vec<f64>,
    pub c: f64,
}

impl ScalarField for QuadraticPotential {
    fn dim(&self) -> usize {
        self.b.len()
    }

    fn jet(&self, p: &Point) -> Result<ScalarJet> {
        check_dim(self.b.len(), p)?;
        let x = p.coords();
        let n = x.len();
        let r2: f64 = x.iter().map(|c| c * c).sum();
        let bx: f64 = x.iter().zip(&self.b).map(|(x, b)| x * b).sum();
        let grad = (0..n).map(|i| self.a * x[i] + self.b[i]).collect();
        let hess = SymMat::from_fn(n, |i, j| if i == j { self.a } else { 0.0 });
        Ok(ScalarJet { v: 0.5 * self.a * r2 + bx + self.c, grad, hess })
    }
}

/// Black-box scalar field; jets by central differences.
pub struct FdScalarField<F: Fn(&[f64]) -> Result<f64> + Send + Sync> {
    dim: usize,
    f: F,
    step: f64,
}

impl<F: Fn(&[f64]) -> Result<f64> + Send + Sync> FdScalarField<F> {
    pub fn new(dim: usize, f: F) -> Self {
        FdScalarField { dim, f, step: limits::FD_STEP }
    }
}

impl<F: Fn(&[f64]) -> Result<f64> + Send + Sync> ScalarField for FdScalarField<F> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn jet(&self, p: &Point) -> Result<ScalarJet> {
        check_dim(self.dim, p)?;
        let x = p.coords();
        let n = self.dim;
        let h: Vec<f64> = x.iter().map(|c| self.step * c.abs().max(1.0)).collect();
        let f0 = (self.f)(x)?;
        let mut buf = x.to_vec();
        let mut grad = vec![0.0; n];
        let mut hess = SymMat::zeros(n);
        for i in 0..n {
            buf[i] = x[i] + h[i];
            let fp = (self.f)(&buf)?;
            buf[i] = x[i] - h[i];
            let fm = (self.f)(&buf)?;
            buf[i] = x[i];
            grad[i] = (fp - fm) / (2.0 * h[i]);
            hess.set(i, i, (fp - 2.0 * f0 + fm) / (h[i] * h[i]));
        }
        for i in 0..n {
            for j in 0..i {
                let mut s = 0.0;
                for (si, sj) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
                    buf[i] = x[i] + si * h[i];
                    buf[j] = x[j] + sj * h[j];
                    s += si * sj * (self.f)(&buf)?;
                }
                buf[i] = x[i];
                buf[j] = x[j];
                hess.set(i, j, s / (4.0 * h[i] * h[j]));
            }
        }
        Ok(ScalarJet { v: f0, grad, hess })
    }

    fn value(&self, p: &Point) -> Result<f64> {
        check_dim(self.dim, p)?;
        (self.f)(p.coords())
    }
}

/// Metric entries with first and second coordinate derivatives.
/// `dg[k]` is the derivative along coordinate `k`; `ddg[packed_index(k, l)]`
/// the mixed second derivative.
#[derive(Clone, Debug)]
pub struct MetricJet {
    pub g: SymMat,
    pub dg: Vec<SymMat>,
    pub ddg: Vec<SymMat>,
}

pub trait MetricField: Send + Sync {
    fn dim(&self) -> usize;

    fn jet(&self, p: &Point) -> Result<MetricJet>;

    /// Metric entries only; override when that is cheaper than a full jet.
    fn matrix(&self, p: &Point) -> Result<SymMat> {
        Ok(self.jet(p)?.g)
    }
}

impl MetricField for Arc<dyn MetricField> {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn jet(&self, p: &Point) -> Result<MetricJet> {
        (**self).jet(p)
    }

    fn matrix(&self, p: &Point) -> Result<SymMat> {
        (**self).matrix(p)
    }
}

/// The flat background `g_ij = eps_i delta_ij`.
pub struct FlatMetric {
    sig: Signature,
}

impl FlatMetric {
    pub fn new(sig: Signature) -> FlatMetric {
        FlatMetric { sig }
    }
}

impl MetricField for FlatMetric {
    fn dim(&self) -> usize {
        self.sig.dim()
    }

    fn jet(&self, p: &Point) -> Result<MetricJet> {
        let n = self.sig.dim();
        check_dim(n, p)?;
        Ok(MetricJet {
            g: self.matrix(p)?,
            dg: vec![SymMat::zeros(n); n],
            ddg: vec![SymMat::zeros(n); packed_len(n)],
        })
    }

    fn matrix(&self, p: &Point) -> Result<SymMat> {
        let n = self.sig.dim();
        check_dim(n, p)?;
        Ok(SymMat::from_fn(n, |i, j| if i == j { self.sig.eps(i) } else { 0.0 }))
    }
}

/// Shared conformal weight `1/phi^2`, written so that every metric built on
/// the same `phi` value produces bit-identical entries.
#[inline]
fn conformal_weight(phiv: f64) -> f64 {
    let inv = 1.0 / phiv;
    inv * inv
}

fn check_conformal_factor(phiv: f64) -> Result<()> {
    if phiv.abs() <= limits::CONFORMAL_EPS {
        return Err(Error::DomainViolation(format!(
            "conformal factor {phiv:.3e} vanishes to working precision"
        )));
    }
    Ok(())
}

/// Weight derivatives for `w = 1/phi^2`:
/// `w_k = -2 phi_k / phi^3`, `w_kl = -2 phi_kl / phi^3 + 6 phi_k phi_l / phi^4`.
fn conformal_weight_jet(pj: &ScalarJet) -> (f64, Vec<f64>, SymMat) {
    let n = pj.grad.len();
    let w = conformal_weight(pj.v);
    let inv = 1.0 / pj.v;
    let p3 = w * inv;
    let p4 = w * w;
    let wk = pj.grad.iter().map(|pk| -2.0 * pk * p3).collect();
    let wkl = SymMat::from_fn(n, |k, l| {
        -2.0 * pj.hess.get(k, l) * p3 + 6.0 * pj.grad[k] * pj.grad[l] * p4
    });
    (w, wk, wkl)
}

/// Conformally flat metric `(1/phi^2) g`, `g` the flat background.
pub struct ConformalFlat {
    sig: Signature,
    phi: Arc<dyn ScalarField>,
}

impl ConformalFlat {
    pub fn new(sig: Signature, phi: Arc<dyn ScalarField>) -> Result<ConformalFlat> {
        if phi.dim() != sig.dim() {
            return Err(Error::Dimension { expected: sig.dim(), got: phi.dim() });
        }
        Ok(ConformalFlat { sig, phi })
    }
}

impl MetricField for ConformalFlat {
    fn dim(&self) -> usize {
        self.sig.dim()
    }

    fn jet(&self, p: &Point) -> Result<MetricJet> {
        let n = self.sig.dim();
        check_dim(n, p)?;
        let pj = self.phi.jet(p)?;
        check_conformal_factor(pj.v)?;
        let (w, wk, wkl) = conformal_weight_jet(&pj);
        let diag = |v: f64, i: usize, j: usize| if i == j { v * self.sig.eps(i) } else { 0.0 };
        let g = SymMat::from_fn(n, |i, j| diag(w, i, j));
        let dg = (0..n).map(|k| SymMat::from_fn(n, |i, j| diag(wk[k], i, j))).collect();
        let mut ddg = Vec::with_capacity(packed_len(n));
        for k in 0..n {
            for l in 0..=k {
                debug_assert_eq!(ddg.len(), packed_index(k, l));
                ddg.push(SymMat::from_fn(n, |i, j| diag(wkl.get(k, l), i, j)));
            }
        }
        Ok(MetricJet { g, dg, ddg })
    }

    fn matrix(&self, p: &Point) -> Result<SymMat> {
        let n = self.sig.dim();
        check_dim(n, p)?;
        let phiv = self.phi.value(p)?;
        check_conformal_factor(phiv)?;
        let w = conformal_weight(phiv);
        Ok(SymMat::from_fn(n, |i, j| if i == j { w * self.sig.eps(i) } else { 0.0 }))
    }
}

/// Warped product over a conformally flat base:
/// base block `(1/phi^2) eps_i` on the first `n` coordinates, fiber block
/// `f^2 delta_ab` on the remaining `m`. Both `phi` and `f` are fields on the
/// full `n+m`-dimensional space (constructed ones ignore fiber coordinates).
pub struct WarpedProduct {
    base_sig: Signature,
    m: usize,
    phi: Arc<dyn ScalarField>,
    warp: Arc<dyn ScalarField>,
}

impl WarpedProduct {
    pub fn new(
        base_sig: Signature,
        m: usize,
        phi: Arc<dyn ScalarField>,
        warp: Arc<dyn ScalarField>,
    ) -> Result<WarpedProduct> {
        if m == 0 {
            return Err(Error::Invalid("warped product needs a fiber dimension of at least 1".into()));
        }
        let total = base_sig.dim() + m;
        if phi.dim() != total {
            return Err(Error::Dimension { expected: total, got: phi.dim() });
        }
        if warp.dim() != total {
            return Err(Error::Dimension { expected: total, got: warp.dim() });
        }
        Ok(WarpedProduct { base_sig, m, phi, warp })
    }

    pub fn base_dim(&self) -> usize {
        self.base_sig.dim()
    }

    pub fn fiber_dim(&self) -> usize {
        self.m
    }
}

impl MetricField for WarpedProduct {
    fn dim(&self) -> usize {
        self.base_sig.dim() + self.m
    }

    fn jet(&self, p: &Point) -> Result<MetricJet> {
        let n = self.base_sig.dim();
        let total = n + self.m;
        check_dim(total, p)?;
        let pj = self.phi.jet(p)?;
        check_conformal_factor(pj.v)?;
        let fj = self.warp.jet(p)?;
        if fj.v.abs() <= limits::CONFORMAL_EPS {
            return Err(Error::DomainViolation(format!(
                "warping function {:.3e} vanishes to working precision",
                fj.v
            )));
        }
        let (w, wk, wkl) = conformal_weight_jet(&pj);
        let entry = |i: usize, j: usize, base: f64, fiber: f64| {
            if i != j {
                0.0
            } else if i < n {
                base * self.base_sig.eps(i)
            } else {
                fiber
            }
        };
        let g = SymMat::from_fn(total, |i, j| entry(i, j, w, fj.v * fj.v));
        let dg = (0..total)
            .map(|k| SymMat::from_fn(total, |i, j| entry(i, j, wk[k], 2.0 * fj.v * fj.grad[k])))
            .collect();
        let mut ddg = Vec::with_capacity(packed_len(total));
        for k in 0..total {
            for l in 0..=k {
                debug_assert_eq!(ddg.len(), packed_index(k, l));
                let fiber = 2.0 * (fj.grad[k] * fj.grad[l] + fj.v * fj.hess.get(k, l));
                ddg.push(SymMat::from_fn(total, |i, j| entry(i, j, wkl.get(k, l), fiber)));
            }
        }
        Ok(MetricJet { g, dg, ddg })
    }

    fn matrix(&self, p: &Point) -> Result<SymMat> {
        let n = self.base_sig.dim();
        let total = n + self.m;
        check_dim(total, p)?;
        let phiv = self.phi.value(p)?;
        check_conformal_factor(phiv)?;
        let fv = self.warp.value(p)?;
        let w = conformal_weight(phiv);
        Ok(SymMat::from_fn(total, |i, j| {
            if i != j {
                0.0
            } else if i < n {
                w * self.base_sig.eps(i)
            } else {
                fv * fv
            }
        }))
    }
}

/// Black-box metric; jets by central differences of the entry matrix.
pub struct FdMetric<F: Fn(&Point) -> Result<SymMat> + Send + Sync> {
    dim: usize,
    f: F,
    step: f64,
}

impl<F: Fn(&Point) -> Result<SymMat> + Send + Sync> FdMetric<F> {
    pub fn new(dim: usize, f: F) -> Self {
        FdMetric { dim, f, step: limits::FD_STEP }
    }
}

impl<F: Fn(&Point) -> Result<SymMat> + Send + Sync> MetricField for FdMetric<F> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn jet(&self, p: &Point) -> Result<MetricJet> {
        check_dim(self.dim, p)?;
        let x = p.coords();
        let n = self.dim;
        let h: Vec<f64> = x.iter().map(|c| self.step * c.abs().max(1.0)).collect();
        let at = |coords: &[f64]| (self.f)(&Point::from_slice(coords)?);
        let g0 = at(x)?;
        let mut buf = x.to_vec();
        let mut dg = Vec::with_capacity(n);
        let mut plus = Vec::with_capacity(n);
        let mut minus = Vec::with_capacity(n);
        for k in 0..n {
            buf[k] = x[k] + h[k];
            let gp = at(&buf)?;
            buf[k] = x[k] - h[k];
            let gm = at(&buf)?;
            buf[k] = x[k];
            dg.push(gp.sub(&gm).scale(1.0 / (2.0 * h[k])));
            plus.push(gp);
            minus.push(gm);
        }
        let mut ddg = Vec::with_capacity(packed_len(n));
        for k in 0..n {
            for l in 0..=k {
                if k == l {
                    let second =
                        plus[k].add(&minus[k]).sub(&g0.scale(2.0)).scale(1.0 / (h[k] * h[k]));
                    ddg.push(second);
                } else {
                    let mut acc = SymMat::zeros(n);
                    for (sk, sl) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
                        buf[k] = x[k] + sk * h[k];
                        buf[l] = x[l] + sl * h[l];
                        acc = acc.add(&at(&buf)?.scale(sk * sl));
                    }
                    buf[k] = x[k];
                    buf[l] = x[l];
                    ddg.push(acc.scale(1.0 / (4.0 * h[k] * h[l])));
                }
            }
        }
        Ok(MetricJet { g: g0, dg, ddg })
    }

    fn matrix(&self, p: &Point) -> Result<SymMat> {
        check_dim(self.dim, p)?;
        (self.f)(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariant::{lift_translation, TranslationDirection};
    use crate::profile::{Curve, Profile};

    fn pt(coords: &[f64]) -> Point {
        Point::from_slice(coords).unwrap()
    }

    #[test]
    fn point_rejects_non_finite_coordinates() {
        assert!(Point::new(vec![1.0, f64::NAN]).is_err());
        assert!(Point::new(vec![]).is_err());
        assert!(Point::new(vec![0.0]).is_ok());
    }

    #[test]
    fn quadratic_potential_jet() {
        let f = QuadraticPotential { a: 3.0, b: vec![1.0, -2.0], c: 0.5 };
        let jet = f.jet(&pt(&[2.0, 1.0])).unwrap();
        assert_eq!(jet.v, 0.5 * 3.0 * 5.0 + 0.0 + 0.5);
        assert_eq!(&jet.grad[..], &[7.0, 1.0]);
        assert_eq!(jet.hess.get(0, 0), 3.0);
        assert_eq!(jet.hess.get(1, 1), 3.0);
        assert_eq!(jet.hess.get(0, 1), 0.0);
    }

    #[test]
    fn fd_scalar_matches_quadratic_exactly_enough() {
        let exact = QuadraticPotential { a: 1.5, b: vec![0.3, -0.7, 0.1], c: -2.0 };
        let fd = FdScalarField::new(3, |x: &[f64]| {
            exact.value(&Point::from_slice(x)?)
        });
        let p = pt(&[0.4, -1.2, 2.0]);
        let je = exact.jet(&p).unwrap();
        let jf = fd.jet(&p).unwrap();
        assert_eq!(jf.v, je.v);
        for i in 0..3 {
            assert!((jf.grad[i] - je.grad[i]).abs() < 1e-9);
            for j in 0..=i {
                assert!((jf.hess.get(i, j) - je.hess.get(i, j)).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn conformal_weight_jet_for_coordinate_profile() {
        // phi(x) = x3 over Euclidean 3-space: w = 1/x3^2.
        let sig = Signature::euclidean(3).unwrap();
        let dir = TranslationDirection::new(sig.clone(), &[0.0, 0.0, 1.0]).unwrap();
        let curve: Arc<dyn Curve> = Arc::new(Profile::linear());
        let phi: Arc<dyn ScalarField> = Arc::new(lift_translation(curve, dir));
        let m = ConformalFlat::new(sig, phi).unwrap();
        let jet = m.jet(&pt(&[0.0, 0.0, 1.0])).unwrap();
        for i in 0..3 {
            assert_eq!(jet.g.get(i, i), 1.0);
        }
        // d_3 w = -2/x3^3 = -2; d_3 d_3 w = 6/x3^4 = 6.
        assert_eq!(jet.dg[2].get(0, 0), -2.0);
        assert_eq!(jet.dg[0].get(0, 0), 0.0);
        assert_eq!(jet.ddg[packed_index(2, 2)].get(1, 1), 6.0);
        assert_eq!(jet.ddg[packed_index(0, 2)].get(1, 1), 0.0);
    }

    #[test]
    fn conformal_metric_rejects_vanishing_factor() {
        let sig = Signature::euclidean(2).unwrap();
        let phi: Arc<dyn ScalarField> = Arc::new(QuadraticPotential { a: 0.0, b: vec![1.0, 0.0], c: 0.0 });
        let m = ConformalFlat::new(sig, phi).unwrap();
        assert!(matches!(m.matrix(&pt(&[0.0, 5.0])), Err(Error::DomainViolation(_))));
        assert!(m.matrix(&pt(&[1.0, 5.0])).is_ok());
    }

    #[test]
    fn warped_product_blocks() {
        // n = 2 base with phi = const 2, m = 1 fiber with f = x1 (base coord).
        let sig = Signature::parse_symbols("+-").unwrap();
        let phi: Arc<dyn ScalarField> = Arc::new(ConstantField::new(3, 2.0));
        let warp: Arc<dyn ScalarField> =
            Arc::new(QuadraticPotential { a: 0.0, b: vec![1.0, 0.0, 0.0], c: 0.0 });
        let m = WarpedProduct::new(sig, 1, phi, warp).unwrap();
        let jet = m.jet(&pt(&[3.0, 7.0, -4.0])).unwrap();
        assert_eq!(jet.g.get(0, 0), 0.25);
        assert_eq!(jet.g.get(1, 1), -0.25);
        assert_eq!(jet.g.get(2, 2), 9.0);
        assert_eq!(jet.g.get(0, 2), 0.0);
        // d_0 (f^2) = 2f = 6 on the fiber entry; base entries are constant.
        assert_eq!(jet.dg[0].get(2, 2), 6.0);
        assert_eq!(jet.dg[0].get(0, 0), 0.0);
        // d_0 d_0 (f^2) = 2.
        assert_eq!(jet.ddg[packed_index(0, 0)].get(2, 2), 2.0);
    }

    #[test]
    fn fd_metric_agrees_with_conformal_jets() {
        let sig = Signature::euclidean(2).unwrap();
        let curve: Arc<dyn Curve> = Arc::new(Profile::from_spec("paperA").unwrap());
        let dir = TranslationDirection::new(sig.clone(), &[1.0, 0.5]).unwrap();
        let phi: Arc<dyn ScalarField> = Arc::new(lift_translation(curve, dir));
        let exact = ConformalFlat::new(sig.clone(), phi).unwrap();
        let sig2 = sig;
        let phi2: Arc<dyn ScalarField> = {
            let curve: Arc<dyn Curve> = Arc::new(Profile::from_spec("paperA").unwrap());
            let dir = TranslationDirection::new(sig2.clone(), &[1.0, 0.5]).unwrap();
            Arc::new(lift_translation(curve, dir))
        };
        let inner = ConformalFlat::new(sig2, phi2).unwrap();
        let fd = FdMetric::new(2, move |p: &Point| inner.matrix(p));
        let p = pt(&[0.3, -0.6]);
        let je = exact.jet(&p).unwrap();
        let jf = fd.jet(&p).unwrap();
        assert!(je.g.sub(&jf.g).max_abs() == 0.0);
        for k in 0..2 {
            assert!(je.dg[k].sub(&jf.dg[k]).max_abs() < 1e-7, "dg[{k}]");
        }
        for kl in 0..3 {
            assert!(je.ddg[kl].sub(&jf.ddg[kl]).max_abs() < 1e-5, "ddg[{kl}]");
        }
    }
}
