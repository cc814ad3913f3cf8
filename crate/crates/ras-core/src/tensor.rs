//! Pointwise curvature operators: Christoffel symbols, Ricci tensor, metric
//! Hessian, and the soliton residual `Ric + Hess(f) - rho·g`.
//!
//! Everything here works from metric jets alone. In particular the residual
//! knows nothing about conformal factors, invariant ansatz or quadrature, so
//! it serves as an independent oracle for the constructions.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::{MetricField, MetricJet, Point, ScalarField};
use crate::invariant::Signature;
use crate::limits;
use crate::linalg::{invert_dense, packed_index, SymMat};

/// Metric entries at `p`, after a non-degeneracy check on the determinant.
pub fn metric_at(m: &dyn MetricField, p: &Point) -> Result<SymMat> {
    let g = m.matrix(p)?;
    let (det, _) = invert_dense(&g.to_dense(), g.dim());
    if det.abs() <= limits::DET_EPS {
        return Err(Error::DegenerateMetric { det });
    }
    Ok(g)
}

/// `gamma[k].get(i, j)` is the Christoffel symbol with upper index `k`.
#[derive(Clone, Debug)]
pub struct Christoffels {
    pub gamma: Vec<SymMat>,
}

impl Christoffels {
    pub fn dim(&self) -> usize {
        self.gamma.len()
    }
}

struct Connection {
    gamma: Vec<SymMat>,
    /// `dgamma[m][k]` = derivative of `gamma[k]` along coordinate `m`;
    /// empty unless second derivatives were requested.
    dgamma: Vec<Vec<SymMat>>,
}

/// `T^l_ij = d_i g_lj + d_j g_li - d_l g_ij` (twice the lowered symbol).
fn lowered(jet: &MetricJet, l: usize, i: usize, j: usize) -> f64 {
    jet.dg[i].get(l, j) + jet.dg[j].get(l, i) - jet.dg[l].get(i, j)
}

/// `d_m T^l_ij` from the second metric derivatives.
fn lowered_deriv(jet: &MetricJet, m: usize, l: usize, i: usize, j: usize) -> f64 {
    jet.ddg[packed_index(m, i)].get(l, j) + jet.ddg[packed_index(m, j)].get(l, i)
        - jet.ddg[packed_index(m, l)].get(i, j)
}

fn connection(jet: &MetricJet, with_second: bool) -> Result<Connection> {
    let n = jet.g.dim();
    let (det, inv) = invert_dense(&jet.g.to_dense(), n);
    let ginv = match inv {
        Some(inv) if det.abs() > limits::DET_EPS => inv,
        _ => return Err(Error::DegenerateMetric { det }),
    };
    let gamma: Vec<SymMat> = (0..n)
        .map(|k| {
            SymMat::from_fn(n, |i, j| {
                0.5 * (0..n).map(|l| ginv[k * n + l] * lowered(jet, l, i, j)).sum::<f64>()
            })
        })
        .collect();
    if !with_second {
        return Ok(Connection { gamma, dgamma: Vec::new() });
    }
    // d_m g^{kl} = -g^{ka} (d_m g_ab) g^{bl}
    let mut dginv = Vec::with_capacity(n);
    for m in 0..n {
        let mut d = alloc::vec![0.0; n * n];
        for k in 0..n {
            for l in 0..n {
                let mut s = 0.0;
                for a in 0..n {
                    for b in 0..n {
                        s -= ginv[k * n + a] * jet.dg[m].get(a, b) * ginv[b * n + l];
                    }
                }
                d[k * n + l] = s;
            }
        }
        dginv.push(d);
    }
    let dgamma: Vec<Vec<SymMat>> = (0..n)
        .map(|m| {
            (0..n)
                .map(|k| {
                    SymMat::from_fn(n, |i, j| {
                        let mut s = 0.0;
                        for l in 0..n {
                            s += dginv[m][k * n + l] * lowered(jet, l, i, j)
                                + ginv[k * n + l] * lowered_deriv(jet, m, l, i, j);
                        }
                        0.5 * s
                    })
                })
                .collect()
        })
        .collect();
    Ok(Connection { gamma, dgamma })
}

pub fn christoffel_at(m: &dyn MetricField, p: &Point) -> Result<Christoffels> {
    check_point(m, p)?;
    let jet = m.jet(p)?;
    let conn = connection(&jet, false)?;
    Ok(Christoffels { gamma: conn.gamma })
}

/// `Ric_ij = d_k Gamma^k_ij - d_j Gamma^k_ik
///         + Gamma^k_kl Gamma^l_ij - Gamma^k_jl Gamma^l_ik`.
pub fn ricci_at(m: &dyn MetricField, p: &Point) -> Result<SymMat> {
    check_point(m, p)?;
    let jet = m.jet(p)?;
    let conn = connection(&jet, true)?;
    Ok(ricci_from(&conn, jet.g.dim()))
}

fn ricci_from(conn: &Connection, n: usize) -> SymMat {
    SymMat::from_fn(n, |i, j| {
        let mut s = 0.0;
        for k in 0..n {
            s += conn.dgamma[k][k].get(i, j) - conn.dgamma[j][k].get(i, k);
            for l in 0..n {
                s += conn.gamma[k].get(k, l) * conn.gamma[l].get(i, j)
                    - conn.gamma[k].get(j, l) * conn.gamma[l].get(i, k);
            }
        }
        s
    })
}

/// Covariant Hessian `Hess(f)_ij = f_ij - Gamma^k_ij f_k`.
pub fn hessian_at(m: &dyn MetricField, f: &dyn ScalarField, p: &Point) -> Result<SymMat> {
    check_point(m, p)?;
    if f.dim() != m.dim() {
        return Err(Error::Dimension { expected: m.dim(), got: f.dim() });
    }
    let jet = m.jet(p)?;
    let conn = connection(&jet, false)?;
    let fj = f.jet(p)?;
    Ok(hessian_from(&conn, &fj.grad, &fj.hess))
}

fn hessian_from(conn: &Connection, grad: &[f64], hess: &SymMat) -> SymMat {
    let n = grad.len();
    SymMat::from_fn(n, |i, j| {
        hess.get(i, j) - (0..n).map(|k| conn.gamma[k].get(i, j) * grad[k]).sum::<f64>()
    })
}

/// Laplacian and squared gradient norm of `u` for the flat background
/// `g_ij = eps_i delta_ij` (both signature-weighted).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FlatGradData {
    pub laplacian: f64,
    pub grad_norm_sq: f64,
}

pub fn flat_gradient_data(sig: &Signature, u: &dyn ScalarField, p: &Point) -> Result<FlatGradData> {
    let n = sig.dim();
    if u.dim() != n {
        return Err(Error::Dimension { expected: n, got: u.dim() });
    }
    if p.dim() != n {
        return Err(Error::Dimension { expected: n, got: p.dim() });
    }
    let jet = u.jet(p)?;
    let mut laplacian = 0.0;
    let mut grad_norm_sq = 0.0;
    for i in 0..n {
        laplacian += sig.eps(i) * jet.hess.get(i, i);
        grad_norm_sq += sig.eps(i) * jet.grad[i] * jet.grad[i];
    }
    Ok(FlatGradData { laplacian, grad_norm_sq })
}

/// The defining residual `Ric + Hess(f) - rho·g` at one point. A metric,
/// potential and soliton function solve the gradient almost soliton equation
/// exactly when this vanishes identically.
pub fn soliton_residual_at(
    m: &dyn MetricField,
    f: &dyn ScalarField,
    rho: &dyn ScalarField,
    p: &Point,
) -> Result<SymMat> {
    check_point(m, p)?;
    for d in [f.dim(), rho.dim()] {
        if d != m.dim() {
            return Err(Error::Dimension { expected: m.dim(), got: d });
        }
    }
    let jet = m.jet(p)?;
    let conn = connection(&jet, true)?;
    let n = jet.g.dim();
    let ric = ricci_from(&conn, n);
    let fj = f.jet(p)?;
    let hess = hessian_from(&conn, &fj.grad, &fj.hess);
    let rho_v = rho.value(p)?;
    Ok(ric.add(&hess).sub(&jet.g.scale(rho_v)))
}

fn check_point(m: &dyn MetricField, p: &Point) -> Result<()> {
    if p.dim() != m.dim() {
        return Err(Error::Dimension { expected: m.dim(), got: p.dim() });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::sync::Arc;
    use alloc::vec;

    use crate::field::{ConstantField, ConformalFlat, FlatMetric, QuadraticPotential};
    use crate::invariant::{lift_translation, TranslationDirection};
    use crate::profile::{Curve, Profile};

    fn pt(coords: &[f64]) -> Point {
        Point::from_slice(coords).unwrap()
    }

    /// Hyperbolic space as a conformal graph: phi(x) = x_n over the upper
    /// half-space.
    fn hyperbolic(n: usize) -> ConformalFlat {
        let sig = Signature::euclidean(n).unwrap();
        let mut alphas = vec![0.0; n];
        alphas[n - 1] = 1.0;
        let dir = TranslationDirection::new(sig.clone(), &alphas).unwrap();
        let curve: Arc<dyn Curve> = Arc::new(Profile::linear());
        let phi: Arc<dyn crate::field::ScalarField> = Arc::new(lift_translation(curve, dir));
        ConformalFlat::new(sig, phi).unwrap()
    }

    #[test]
    fn flat_metric_is_flat() {
        let m = FlatMetric::new(Signature::parse_symbols("+-+").unwrap());
        let p = pt(&[0.3, -0.9, 2.0]);
        let ch = christoffel_at(&m, &p).unwrap();
        for k in 0..3 {
            assert_eq!(ch.gamma[k].max_abs(), 0.0);
        }
        assert_eq!(ricci_at(&m, &p).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn hyperbolic_christoffel_frozen_entry() {
        let m = hyperbolic(3);
        let ch = christoffel_at(&m, &pt(&[0.0, 0.0, 1.0])).unwrap();
        // Gamma^1_{13} = -1/x3 = -1.
        assert!((ch.gamma[0].get(0, 2) + 1.0).abs() < 1e-13);
        // Gamma^3_{11} = 1/x3 = 1, Gamma^3_{33} = -1/x3 = -1.
        assert!((ch.gamma[2].get(0, 0) - 1.0).abs() < 1e-13);
        assert!((ch.gamma[2].get(2, 2) + 1.0).abs() < 1e-13);
    }

    #[test]
    fn hyperbolic_ricci_is_negative_einstein() {
        for n in [3usize, 4] {
            let m = hyperbolic(n);
            let mut coords = vec![0.2; n];
            coords[n - 1] = 1.7;
            let p = pt(&coords);
            let ric = ricci_at(&m, &p).unwrap();
            let g = metric_at(&m, &p).unwrap();
            // Ric = -(n-1) g for the hyperbolic metric.
            let diff = ric.sub(&g.scale(-((n - 1) as f64)));
            assert!(diff.max_abs() < 1e-11, "n = {n}: {:?}", diff.max_abs());
        }
    }

    #[test]
    fn hyperbolic_hessian_of_log_height() {
        let m = hyperbolic(3);
        let sig = Signature::euclidean(3).unwrap();
        let dir = TranslationDirection::new(sig, &[0.0, 0.0, 1.0]).unwrap();
        let curve: Arc<dyn Curve> = Arc::new(Profile::parse("ln(xi)").unwrap());
        let f = lift_translation(curve, dir);
        let h = hessian_at(&m, &f, &pt(&[0.0, 0.0, 1.0])).unwrap();
        for (i, want) in [(0, -1.0), (1, -1.0), (2, 0.0)] {
            assert!((h.get(i, i) - want).abs() < 1e-12, "entry {i}");
        }
        assert!(h.get(0, 1).abs() < 1e-13);
    }

    #[test]
    fn einstein_metric_is_an_exact_soliton_with_constant_potential() {
        let m = hyperbolic(3);
        let f = ConstantField::new(3, 4.0);
        let rho = ConstantField::new(3, -2.0);
        let res = soliton_residual_at(&m, &f, &rho, &pt(&[0.1, -0.4, 0.8])).unwrap();
        assert!(res.max_abs() < 1e-11);
    }

    #[test]
    fn gaussian_soliton_residual_vanishes_exactly() {
        let m = FlatMetric::new(Signature::euclidean(3).unwrap());
        let f = QuadraticPotential { a: 0.7, b: vec![0.0; 3], c: 0.0 };
        let rho = ConstantField::new(3, 0.7);
        let res = soliton_residual_at(&m, &f, &rho, &pt(&[1.0, -2.0, 0.5])).unwrap();
        assert_eq!(res.max_abs(), 0.0);
    }

    #[test]
    fn flat_gradient_data_respects_signature() {
        let sig = Signature::parse_symbols("+-").unwrap();
        let u = QuadraticPotential { a: 2.0, b: vec![0.0, 0.0], c: 0.0 };
        let d = flat_gradient_data(&sig, &u, &pt(&[3.0, 1.0])).unwrap();
        assert_eq!(d.laplacian, 0.0);
        // grad = (2x1, 2x2); norm^2 = 4x1^2 - 4x2^2 = 32.
        assert_eq!(d.grad_norm_sq, 32.0);
    }

    #[test]
    fn degenerate_metric_is_rejected() {
        let m = crate::field::FdMetric::new(2, |_: &Point| Ok(SymMat::zeros(2)));
        assert!(matches!(
            metric_at(&m, &pt(&[0.0, 0.0])),
            Err(Error::DegenerateMetric { .. })
        ));
        assert!(matches!(
            ricci_at(&m, &pt(&[0.0, 0.0])),
            Err(Error::DegenerateMetric { .. })
        ));
    }

    #[test]
    fn dimension_mismatches_are_rejected() {
        let m = FlatMetric::new(Signature::euclidean(3).unwrap());
        assert!(matches!(metric_at(&m, &pt(&[1.0, 2.0])), Err(Error::Dimension { .. })));
        let f = ConstantField::new(2, 0.0);
        assert!(matches!(
            hessian_at(&m, &f, &pt(&[1.0, 2.0, 3.0])),
            Err(Error::Dimension { .. })
        ));
    }
}
