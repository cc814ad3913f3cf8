//! Cross-checks the numeric curvature pipeline against the closed-form
//! conformal transformation law. For `g~ = (1/phi^2) g` with `g` flat
//! diagonal and `u = -ln phi`:
//!
//!   Ric~_ij = -(n-2) (u_ij - u_i u_j) - (lap u + (n-2) |grad u|^2) eps_i d_ij
//!   Hess~(f)_ij = f_ij - u_i f_j - u_j f_i + eps_i d_ij sum_k eps_k u_k f_k
//!
//! with all derivatives, traces and norms taken in the flat metric. The
//! pipeline instead differentiates Christoffel symbols numerically, so an
//! entrywise match is a genuine two-route consistency check.

use ras_core::construct::{
    construct_radial, construct_translation, BuildOptions, IntegrationConstants, SolitonData,
};
use ras_core::field::{Point, ScalarField};
use ras_core::invariant::{Signature, TranslationDirection};
use ras_core::linalg::SymMat;
use ras_core::profile::{Interval, Profile};
use ras_core::tensor::{metric_at, ricci_at, soliton_residual_at};

struct FlatJet {
    v: f64,
    grad: Vec<f64>,
    hess: SymMat,
}

fn flat_jet(field: &dyn ScalarField, p: &Point) -> FlatJet {
    let j = field.jet(p).unwrap();
    FlatJet { v: j.v, grad: j.grad, hess: j.hess }
}

/// Ricci tensor of `(1/phi^2) g` from the conformal transformation law.
fn oracle_ricci(sig: &Signature, phi: &FlatJet) -> SymMat {
    let n = sig.dim();
    let nm2 = (n - 2) as f64;
    let u_grad: Vec<f64> = phi.grad.iter().map(|&pi| -pi / phi.v).collect();
    let u_hess = SymMat::from_fn(n, |i, j| {
        -phi.hess.get(i, j) / phi.v + phi.grad[i] * phi.grad[j] / (phi.v * phi.v)
    });
    let lap: f64 = (0..n).map(|k| sig.eps(k) * u_hess.get(k, k)).sum();
    let grad_sq: f64 = (0..n).map(|k| sig.eps(k) * u_grad[k] * u_grad[k]).sum();
    SymMat::from_fn(n, |i, j| {
        let mut r = -nm2 * (u_hess.get(i, j) - u_grad[i] * u_grad[j]);
        if i == j {
            r -= (lap + nm2 * grad_sq) * sig.eps(i);
        }
        r
    })
}

/// Full soliton defect `Ric~ + Hess~(f) - rho g~` from the closed forms.
fn oracle_residual(sig: &Signature, phi: &FlatJet, f: &FlatJet, rho: f64) -> SymMat {
    let n = sig.dim();
    let ric = oracle_ricci(sig, phi);
    let u_grad: Vec<f64> = phi.grad.iter().map(|&pi| -pi / phi.v).collect();
    let cross: f64 = (0..n).map(|k| sig.eps(k) * u_grad[k] * f.grad[k]).sum();
    SymMat::from_fn(n, |i, j| {
        let mut h = f.hess.get(i, j) - u_grad[i] * f.grad[j] - u_grad[j] * f.grad[i];
        if i == j {
            h += sig.eps(i) * cross;
            h -= rho * sig.eps(i) / (phi.v * phi.v);
        }
        ric.get(i, j) + h
    })
}

fn max_entry_diff(a: &SymMat, b: &SymMat) -> f64 {
    a.sub(b).max_abs()
}

fn check_on_points(sd: &SolitonData, points: &[Point], tol: f64) {
    let metric = sd.conformal_metric().unwrap();
    let phi = sd.phi_field().unwrap();
    let pot = sd.potential_field().unwrap();
    let rho = sd.rho_field().unwrap();
    for p in points {
        let pj = flat_jet(phi.as_ref(), p);
        let fj = flat_jet(pot.as_ref(), p);
        let rv = rho.value(p).unwrap();

        let ric_numeric = ricci_at(metric.as_ref(), p).unwrap();
        let ric_closed = oracle_ricci(sd.signature(), &pj);
        assert!(
            max_entry_diff(&ric_numeric, &ric_closed) < tol,
            "Ricci mismatch {} at {:?}",
            max_entry_diff(&ric_numeric, &ric_closed),
            p.coords()
        );

        let res_numeric = soliton_residual_at(&metric, &pot, &rho, p).unwrap();
        let res_closed = oracle_residual(sd.signature(), &pj, &fj, rv);
        assert!(
            max_entry_diff(&res_numeric, &res_closed) < tol,
            "residual mismatch {} at {:?}",
            max_entry_diff(&res_numeric, &res_closed),
            p.coords()
        );
    }
}

fn cube_points(n: usize, lo: f64, hi: f64, per_axis: usize) -> Vec<Point> {
    let step = (hi - lo) / (per_axis - 1) as f64;
    let mut pts = Vec::new();
    let total = per_axis.pow(n as u32);
    for flat in 0..total {
        let mut rem = flat;
        let mut c = Vec::with_capacity(n);
        for _ in 0..n {
            c.push(lo + step * (rem % per_axis) as f64);
            rem /= per_axis;
        }
        pts.push(Point::new(c).unwrap());
    }
    pts
}

#[test]
fn translation_euclidean_matches_closed_form() {
    let profile = Profile::from_spec("paperA")
        .unwrap()
        .with_domain(Interval::new(-3.0, 3.0).unwrap())
        .unwrap();
    let sig = Signature::euclidean(3).unwrap();
    let dir = TranslationDirection::new(sig, &[1.0, 0.0, 0.0]).unwrap();
    let sd = construct_translation(
        &profile,
        &dir,
        IntegrationConstants::default(),
        &BuildOptions::default(),
    )
    .unwrap();
    check_on_points(&sd, &cube_points(3, -0.9, 0.9, 4), 1e-6);
}

#[test]
fn translation_mixed_signature_matches_closed_form() {
    let profile = Profile::from_spec("paperB")
        .unwrap()
        .with_domain(Interval::new(-2.0, 2.0).unwrap())
        .unwrap();
    let sig = Signature::parse_symbols("+-+").unwrap();
    let dir = TranslationDirection::new(sig, &[0.6, 0.3, 0.8]).unwrap();
    let sd = construct_translation(
        &profile,
        &dir,
        IntegrationConstants::default(),
        &BuildOptions::default(),
    )
    .unwrap();
    check_on_points(&sd, &cube_points(3, -0.7, 0.7, 4), 1e-6);
}

#[test]
fn radial_matches_closed_form() {
    let profile = Profile::from_spec("paperC")
        .unwrap()
        .with_domain(Interval::new(0.1, 4.0).unwrap())
        .unwrap();
    let sd =
        construct_radial(&profile, 3, IntegrationConstants::default(), &BuildOptions::default())
            .unwrap();
    let pts: Vec<Point> = cube_points(3, 0.3, 0.8, 4)
        .into_iter()
        .filter(|p| {
            let r: f64 = p.coords().iter().map(|x| x * x).sum();
            (0.1..=4.0).contains(&r)
        })
        .collect();
    assert!(!pts.is_empty());
    check_on_points(&sd, &pts, 1e-6);
}

#[test]
fn linear_profile_gives_hyperbolic_einstein_metric() {
    // phi = xi with xi = x_n and c = 0 yields the upper half space model:
    // rho is the constant -(n-1) and Ric~ = -(n-1) g~.
    for n in [3usize, 4] {
        let profile = Profile::linear().with_domain(Interval::new(0.5, 3.0).unwrap()).unwrap();
        let sig = Signature::euclidean(n).unwrap();
        let mut alphas = vec![0.0; n];
        alphas[n - 1] = 1.0;
        let dir = TranslationDirection::new(sig, &alphas).unwrap();
        let ic = IntegrationConstants { c: 0.0, k: 0.0, base: 1.0 };
        let sd = construct_translation(&profile, &dir, ic, &BuildOptions::default()).unwrap();

        let rho = sd.rho_field().unwrap();
        let metric = sd.conformal_metric().unwrap();
        let want = -((n - 1) as f64);
        for i in 0..8 {
            let h = 0.5 + 2.5 * i as f64 / 7.0;
            let mut c = vec![0.25 * i as f64; n];
            c[n - 1] = h;
            let p = Point::new(c).unwrap();
            assert!((rho.value(&p).unwrap() - want).abs() < 1e-12);
            let ric = ricci_at(metric.as_ref(), &p).unwrap();
            let g = metric_at(metric.as_ref(), &p).unwrap();
            assert!(max_entry_diff(&ric, &g.scale(want)) < 1e-8);
        }
    }
}
