//! Residual checks at three independent levels.
//!
//! * reduced systems: the ODE rows in the invariant variable,
//! * invariant PDEs: the coordinate-space systems the reductions came from,
//! * full tensor: `Ric + Hess(f) - rho·g` assembled by the curvature oracle,
//!   which shares no code with the reductions.
//!
//! All checks return a [`ResidualReport`]; a failing residual is a result,
//! not an error. Errors are reserved for structural problems (wrong family,
//! dimension mismatch, evaluation outside tabulated ranges).

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::construct::{Family, SolitonData};
use crate::dd::dd;
use crate::error::{Error, Result};
use crate::field::{Point, ScalarField};
use crate::invariant::Signature;
use crate::limits;
use crate::profile::{linspace, Curve, Interval, Profile};
use crate::tensor::soliton_residual_at;

/// Fiber data for warped-product checks.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WarpedSpec {
    pub n: usize,
    pub m: usize,
    /// Einstein constant of the fiber.
    pub lambda_f: f64,
}

impl WarpedSpec {
    pub fn new(n: usize, m: usize, lambda_f: f64) -> Result<WarpedSpec> {
        if n < 3 {
            return Err(Error::Invalid(format!("warped base needs n >= 3, got {n}")));
        }
        if m < 1 {
            return Err(Error::Invalid(format!("warped fiber needs m >= 1, got {m}")));
        }
        Ok(WarpedSpec { n, m, lambda_f })
    }

    pub fn for_data(sd: &SolitonData) -> Result<WarpedSpec> {
        let m = sd
            .m()
            .ok_or_else(|| Error::Invalid("soliton data carries no fiber dimension".into()))?;
        WarpedSpec::new(sd.n(), m, sd.lambda_f())
    }
}

/// Where a residual record was evaluated.
#[derive(Clone, Debug, PartialEq)]
pub enum SampleSite {
    /// Value of the invariant variable (`xi` or `r`).
    Invariant(f64),
    /// Coordinates on the (product) space.
    Coords(Vec<f64>),
}

#[derive(Clone, Debug)]
pub struct ResidualRecord {
    pub site: SampleSite,
    pub components: Vec<f64>,
}

/// Summary of one residual check over a sample set.
#[derive(Clone, Debug)]
pub struct ResidualReport {
    pub name: String,
    pub records: Vec<ResidualRecord>,
    /// Largest absolute component.
    pub sup: f64,
    /// Root mean square over all components.
    pub rms: f64,
    pub tol: f64,
    pub pass: bool,
    /// Samples skipped by the near-singular rule.
    pub skipped: usize,
}

impl ResidualReport {
    fn from_records(
        name: &str,
        records: Vec<ResidualRecord>,
        tol: f64,
        skipped: usize,
    ) -> Result<ResidualReport> {
        if records.is_empty() {
            return Err(Error::Invalid(format!(
                "residual check {name:?} evaluated no samples (all skipped or none given)"
            )));
        }
        let mut sup = 0.0f64;
        let mut sumsq = 0.0f64;
        let mut count = 0usize;
        for r in &records {
            for &c in &r.components {
                sup = sup.max(c.abs());
                sumsq += c * c;
                count += 1;
            }
        }
        if !sup.is_finite() {
            sup = f64::INFINITY;
        }
        let rms = crate::math::sqrt(sumsq / count as f64);
        let pass = sup.is_finite() && sup <= tol;
        Ok(ResidualReport { name: name.into(), records, sup, rms, tol, pass, skipped })
    }

    pub fn worst_site(&self) -> Option<&SampleSite> {
        let mut best: Option<(&SampleSite, f64)> = None;
        for r in &self.records {
            let m = r.components.iter().fold(0.0f64, |a, c| a.max(c.abs()));
            if best.map(|(_, b)| m > b).unwrap_or(true) {
                best = Some((&r.site, m));
            }
        }
        best.map(|(s, _)| s)
    }
}

fn require_family(sd: &SolitonData, family: Family) -> Result<()> {
    if sd.family() != family {
        return Err(Error::Invalid(format!(
            "expected {} data, got {}",
            family.name(),
            sd.family().name()
        )));
    }
    Ok(())
}

/// Reduced translation system at each sample `xi`:
/// `R1 = (n-2)phi'' + 2 phi' f' + phi f''`,
/// `R2 = eps_{i0}[phi phi'' - (n-1) phi'^2 - phi phi' f'] - rho`.
///
/// Rows are assembled in double-double arithmetic from the curves'
/// extended-precision lanes, so the reported residual reflects the data, not
/// the f64 rounding of the row itself (which can reach the tolerance for
/// steep recipes).
pub fn residual_system_translation(
    sd: &SolitonData,
    samples: &[f64],
    tol: f64,
) -> Result<ResidualReport> {
    require_family(sd, Family::Translation)?;
    let e0 = sd.eps_i0().expect("translation data has a direction");
    let n = sd.n() as f64;
    let mut records = Vec::new();
    let mut skipped = 0usize;
    for &t in samples {
        let p = sd.profile().eval2(t)?;
        if p.v.abs() <= limits::GRID_SKIP_EPS {
            skipped += 1;
            continue;
        }
        let (_, fp, fpp) = sd.potential_curve().eval2_dd(t)?;
        let rho = sd.rho_curve().value(t)?;
        let (pv, pd1, pd2) = (dd(p.v), dd(p.d1), dd(p.d2));
        let r1 = (dd(n - 2.0) * pd2 + dd(2.0 * p.d1) * fp + pv * fpp).value();
        let r2 = (dd(e0) * (pv * pd2 - dd(n - 1.0) * pd1 * pd1 - pv * pd1 * fp) - dd(rho))
            .value();
        records.push(ResidualRecord {
            site: SampleSite::Invariant(t),
            components: alloc::vec![r1, r2],
        });
    }
    ResidualReport::from_records("system", records, tol, skipped)
}

/// Reduced radial system at each sample `r`:
/// `R1 = (n-2)phi'' + 2 phi' f' + phi f''`,
/// `R2 = 4(n-1) phi phi' + 4r phi phi'' - 4(n-1) r phi'^2
///      - 4r phi phi' f' + 2 phi^2 f' - rho`.
pub fn residual_system_radial(
    sd: &SolitonData,
    samples: &[f64],
    tol: f64,
) -> Result<ResidualReport> {
    require_family(sd, Family::Radial)?;
    let n = sd.n() as f64;
    let mut records = Vec::new();
    let mut skipped = 0usize;
    for &t in samples {
        let p = sd.profile().eval2(t)?;
        if p.v.abs() <= limits::GRID_SKIP_EPS {
            skipped += 1;
            continue;
        }
        let (_, fp, fpp) = sd.potential_curve().eval2_dd(t)?;
        let rho = sd.rho_curve().value(t)?;
        let (pv, pd1, pd2) = (dd(p.v), dd(p.d1), dd(p.d2));
        let r1 = (dd(n - 2.0) * pd2 + dd(2.0 * p.d1) * fp + pv * fpp).value();
        let r2 = (dd(4.0 * (n - 1.0)) * pv * pd1 + dd(4.0 * t) * pv * pd2
            - dd(4.0 * (n - 1.0) * t) * pd1 * pd1
            - dd(4.0 * t) * pv * pd1 * fp
            + dd(2.0) * pv * pv * fp
            - dd(rho))
            .value();
        records.push(ResidualRecord {
            site: SampleSite::Invariant(t),
            components: alloc::vec![r1, r2],
        });
    }
    ResidualReport::from_records("system", records, tol, skipped)
}

/// Reduced warped system at each sample `xi`; components are the three rows
/// plus the consistency gap between the two `rho` eliminations:
/// `R1 = f[(n-2)phi'' + 2 phi' h' + phi h''] - m phi f'' - 2m phi' f'`,
/// `R2 = eps_{i0}[f phi phi'' - (n-1) f phi'^2 + m phi phi' f'
///       - f phi phi' h'] - rho f`,
/// `R3 = eps_{i0}[-f phi^2 f'' + (n-2) f phi f' phi' - (m-1) phi^2 f'^2
///       + f phi^2 f' h'] - (rho f^2 - lambda_F)`,
/// `gap = R2/f - R3/f^2` evaluated as the two implied `rho` values.
pub fn residual_system_warped(
    sd: &SolitonData,
    spec: &WarpedSpec,
    samples: &[f64],
    tol: f64,
) -> Result<ResidualReport> {
    require_family(sd, Family::Warped)?;
    if spec.n != sd.n() || Some(spec.m) != sd.m() {
        return Err(Error::Invalid(format!(
            "warped spec (n = {}, m = {}) does not match data (n = {}, m = {:?})",
            spec.n,
            spec.m,
            sd.n(),
            sd.m()
        )));
    }
    let e0 = sd.eps_i0().expect("warped data has a direction");
    let n = spec.n as f64;
    let m = spec.m as f64;
    let warp = sd
        .warping_curve()
        .ok_or_else(|| Error::Invalid("warped data carries no warping curve".into()))?;
    let mut records = Vec::new();
    let mut skipped = 0usize;
    for &t in samples {
        let p = sd.profile().eval2(t)?;
        if p.v.abs() <= limits::GRID_SKIP_EPS {
            skipped += 1;
            continue;
        }
        let (fv, fp, fpp) = warp.eval2_dd(t)?;
        if fv.value().abs() <= limits::GRID_SKIP_EPS {
            skipped += 1;
            continue;
        }
        let (_, hp, hpp) = sd.potential_curve().eval2_dd(t)?;
        let rho = dd(sd.rho_curve().value(t)?);
        let lam = dd(spec.lambda_f);
        let (pv, pd1, pd2) = (dd(p.v), dd(p.d1), dd(p.d2));
        let r1 = (fv * (dd(n - 2.0) * pd2 + dd(2.0 * p.d1) * hp + pv * hpp)
            - dd(m) * pv * fpp
            - dd(2.0 * m) * pd1 * fp)
            .value();
        let row2 = dd(e0)
            * (fv * pv * pd2 - dd(n - 1.0) * fv * pd1 * pd1 + dd(m) * pv * pd1 * fp
                - fv * pv * pd1 * hp);
        let row3 = dd(e0)
            * (-(fv * pv * pv * fpp) + dd(n - 2.0) * fv * pv * fp * pd1
                - dd(m - 1.0) * pv * pv * fp * fp
                + fv * pv * pv * fp * hp);
        let r2 = (row2 - rho * fv).value();
        let r3 = (row3 - (rho * fv * fv - lam)).value();
        let gap = (row2 / fv - (row3 + lam) / (fv * fv)).value();
        records.push(ResidualRecord {
            site: SampleSite::Invariant(t),
            components: alloc::vec![r1, r2, r3, gap],
        });
    }
    ResidualReport::from_records("system", records, tol, skipped)
}

/// Conformal PDE system at coordinate points. Components per point: one per
/// off-diagonal pair `(i < j)` for
/// `(n-2) phi_ij + phi_i f_j + phi_j f_i + phi f_ij = 0`
/// and one per diagonal index for
/// `(n-2) phi phi_ii + [phi lap(phi) - (n-1)|grad phi|^2] eps_i
///  + 2 phi phi_i f_i + phi^2 f_ii - phi eps_i sum_k eps_k f_k phi_k
///  = rho eps_i`.
pub fn residual_pde_conformal(
    sig: &Signature,
    phi: &dyn ScalarField,
    potential: &dyn ScalarField,
    rho: &dyn ScalarField,
    points: &[Point],
    tol: f64,
) -> Result<ResidualReport> {
    let n = sig.dim();
    for (what, d) in
        [("phi", phi.dim()), ("potential", potential.dim()), ("rho", rho.dim())]
    {
        if d != n {
            return Err(Error::Invalid(format!(
                "{what} field has dimension {d}, signature has {n}"
            )));
        }
    }
    let nf = n as f64;
    let mut records = Vec::new();
    let mut skipped = 0usize;
    for p in points {
        let pj = phi.jet(p)?;
        if pj.v.abs() <= limits::GRID_SKIP_EPS {
            skipped += 1;
            continue;
        }
        let fj = potential.jet(p)?;
        let rho_v = rho.value(p)?;
        let mut lap = 0.0;
        let mut norm = 0.0;
        let mut cross = 0.0;
        for k in 0..n {
            lap += sig.eps(k) * pj.hess.get(k, k);
            norm += sig.eps(k) * pj.grad[k] * pj.grad[k];
            cross += sig.eps(k) * fj.grad[k] * pj.grad[k];
        }
        let mut components = Vec::with_capacity(n * (n + 1) / 2);
        for i in 0..n {
            for j in 0..i {
                components.push(
                    (nf - 2.0) * pj.hess.get(i, j)
                        + pj.grad[i] * fj.grad[j]
                        + pj.grad[j] * fj.grad[i]
                        + pj.v * fj.hess.get(i, j),
                );
            }
        }
        for i in 0..n {
            let e = sig.eps(i);
            components.push(
                (nf - 2.0) * pj.v * pj.hess.get(i, i) + (pj.v * lap - (nf - 1.0) * norm) * e
                    + 2.0 * pj.v * pj.grad[i] * fj.grad[i]
                    + pj.v * pj.v * fj.hess.get(i, i)
                    - pj.v * e * cross
                    - rho_v * e,
            );
        }
        records.push(ResidualRecord {
            site: SampleSite::Coords(p.coords().to_vec()),
            components,
        });
    }
    ResidualReport::from_records("pde", records, tol, skipped)
}

/// Warped PDE system on base points; fields live on the base coordinates.
/// Components per point: off-diagonal pairs, then the `n` diagonal rows, then
/// the fiber-trace row.
pub fn residual_pde_warped(
    sig: &Signature,
    spec: &WarpedSpec,
    phi: &dyn ScalarField,
    warp: &dyn ScalarField,
    potential: &dyn ScalarField,
    rho: &dyn ScalarField,
    points: &[Point],
    tol: f64,
) -> Result<ResidualReport> {
    let n = sig.dim();
    if spec.n != n {
        return Err(Error::Invalid(format!(
            "warped spec has n = {}, signature has {}",
            spec.n, n
        )));
    }
    for (what, d) in [
        ("phi", phi.dim()),
        ("warping", warp.dim()),
        ("potential", potential.dim()),
        ("rho", rho.dim()),
    ] {
        if d != n {
            return Err(Error::Invalid(format!(
                "{what} field has dimension {d}, base has {n}"
            )));
        }
    }
    let nf = n as f64;
    let mf = spec.m as f64;
    let mut records = Vec::new();
    let mut skipped = 0usize;
    for p in points {
        let pj = phi.jet(p)?;
        if pj.v.abs() <= limits::GRID_SKIP_EPS {
            skipped += 1;
            continue;
        }
        let wj = warp.jet(p)?;
        if wj.v.abs() <= limits::GRID_SKIP_EPS {
            skipped += 1;
            continue;
        }
        let hj = potential.jet(p)?;
        let rho_v = rho.value(p)?;
        let mut components = Vec::with_capacity(n * (n + 1) / 2 + 1);
        for i in 0..n {
            for j in 0..i {
                components.push(
                    (nf - 2.0) * wj.v * pj.hess.get(i, j) + wj.v * pj.v * hj.hess.get(i, j)
                        - mf * pj.v * wj.hess.get(i, j)
                        - mf * pj.grad[i] * wj.grad[j]
                        - mf * pj.grad[j] * wj.grad[i]
                        + wj.v * pj.grad[i] * hj.grad[j]
                        + wj.v * pj.grad[j] * hj.grad[i],
                );
            }
        }
        let mut trace = 0.0;
        for k in 0..n {
            trace += sig.eps(k)
                * (wj.v * pj.v * pj.hess.get(k, k) - (nf - 1.0) * wj.v * pj.grad[k] * pj.grad[k]
                    + mf * pj.v * pj.grad[k] * wj.grad[k]
                    - wj.v * pj.v * pj.grad[k] * hj.grad[k]);
        }
        for i in 0..n {
            let e = sig.eps(i);
            components.push(
                pj.v * ((nf - 2.0) * wj.v * pj.hess.get(i, i) + wj.v * pj.v * hj.hess.get(i, i)
                    - mf * pj.v * wj.hess.get(i, i)
                    - 2.0 * mf * pj.grad[i] * wj.grad[i]
                    + 2.0 * wj.v * pj.grad[i] * hj.grad[i])
                    + e * trace
                    - e * rho_v * wj.v,
            );
        }
        let mut fiber = 0.0;
        for k in 0..n {
            fiber += sig.eps(k)
                * (-wj.v * pj.v * pj.v * wj.hess.get(k, k)
                    + (nf - 2.0) * wj.v * pj.v * wj.grad[k] * pj.grad[k]
                    - (mf - 1.0) * pj.v * pj.v * wj.grad[k] * wj.grad[k]
                    + wj.v * pj.v * pj.v * wj.grad[k] * hj.grad[k]);
        }
        components.push(fiber - (rho_v * wj.v * wj.v - spec.lambda_f));
        records.push(ResidualRecord {
            site: SampleSite::Coords(p.coords().to_vec()),
            components,
        });
    }
    ResidualReport::from_records("pde", records, tol, skipped)
}

/// Full-tensor check: assembles the metric named by the family and hands it
/// to the pointwise curvature oracle. Components per point are the packed
/// entries of `Ric + Hess(f) - rho·g`.
pub fn residual_full_tensor(sd: &SolitonData, points: &[Point], tol: f64) -> Result<ResidualReport> {
    let (metric, phi, warp, potential, rho) = match sd.family() {
        Family::Translation | Family::Radial => (
            sd.conformal_metric()?,
            sd.phi_field()?,
            None,
            sd.potential_field()?,
            sd.rho_field()?,
        ),
        Family::Warped => {
            if sd.lambda_f() != 0.0 {
                return Err(Error::Invalid(
                    "full-tensor mode models the fiber as flat space; it requires lambda_F = 0"
                        .into(),
                ));
            }
            (
                sd.warped_metric()?,
                sd.phi_field_ext()?,
                Some(sd.warp_field_ext()?),
                sd.potential_field_ext()?,
                sd.rho_field_ext()?,
            )
        }
    };
    let mut records = Vec::new();
    let mut skipped = 0usize;
    for p in points {
        let phi_v = phi.value(p)?;
        if phi_v.abs() <= limits::GRID_SKIP_EPS {
            skipped += 1;
            continue;
        }
        if let Some(w) = &warp {
            if w.value(p)?.abs() <= limits::GRID_SKIP_EPS {
                skipped += 1;
                continue;
            }
        }
        let res = soliton_residual_at(&metric, &potential, &rho, p)?;
        records.push(ResidualRecord {
            site: SampleSite::Coords(p.coords().to_vec()),
            components: res.packed().to_vec(),
        });
    }
    ResidualReport::from_records("tensor", records, tol, skipped)
}

/// Samples the invariant window uniformly (for the reduced-system checks).
pub fn sample_window(sd: &SolitonData, count: usize) -> Vec<f64> {
    linspace(sd.window(), count)
}

/// Cartesian grid over `box_iv` per axis, in the dimension the family's
/// metric lives in, filtered to points whose invariant value stays inside
/// the profile window.
pub fn grid_for(sd: &SolitonData, box_iv: Interval, per_axis: usize) -> Result<Vec<Point>> {
    if per_axis == 0 {
        return Err(Error::Invalid("grid needs at least one point per axis".into()));
    }
    let dim = match sd.family() {
        Family::Warped => sd.n() + sd.m().expect("warped data has a fiber"),
        _ => sd.n(),
    };
    let axis = linspace(box_iv, per_axis);
    let total = axis.len().checked_pow(dim as u32).ok_or_else(|| {
        Error::Invalid("grid is too large".into())
    })?;
    if total > 1_000_000 {
        return Err(Error::Invalid(format!(
            "grid of {total} points is too large; lower the per-axis count"
        )));
    }
    let window = sd.window();
    let mut out = Vec::new();
    let mut idx = alloc::vec![0usize; dim];
    loop {
        let coords: Vec<f64> = idx.iter().map(|&i| axis[i]).collect();
        let inv = invariant_of(sd, &coords)?;
        if window.contains(inv) {
            out.push(Point::new(coords)?);
        }
        // Odometer increment.
        let mut k = 0;
        loop {
            if k == dim {
                if out.is_empty() {
                    return Err(Error::Invalid(
                        "sampling box contains no points whose invariant lies in the window"
                            .into(),
                    ));
                }
                return Ok(out);
            }
            idx[k] += 1;
            if idx[k] < axis.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// Value of the invariant variable at raw coordinates.
pub fn invariant_of(sd: &SolitonData, coords: &[f64]) -> Result<f64> {
    match sd.family() {
        Family::Translation => sd
            .direction()
            .expect("translation data has a direction")
            .xi(coords),
        Family::Radial => {
            if coords.len() != sd.n() {
                return Err(Error::Dimension { expected: sd.n(), got: coords.len() });
            }
            Ok(coords.iter().map(|x| x * x).sum())
        }
        Family::Warped => {
            let m = sd.m().expect("warped data has a fiber");
            let dir = sd.direction().expect("warped data has a direction").extended(m);
            dir.xi(coords)
        }
    }
}

/// Completeness heuristic from the window scan: positivity and the observed
/// bound of `phi`. A positive, bounded profile keeps `1/phi^2` bounded away
/// from zero, the standard sufficient sign for completeness of the conformal
/// metric on the sampled region.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CompletenessProbe {
    pub positive: bool,
    /// Largest sampled `|phi|`.
    pub bound: f64,
    /// Smallest sampled `|phi|`.
    pub min_abs: f64,
    pub bounded: bool,
}

pub fn completeness_probe(
    profile: &Profile,
    window: Interval,
    samples: usize,
) -> Result<CompletenessProbe> {
    if samples == 0 {
        return Err(Error::Invalid("completeness probe needs at least one sample".into()));
    }
    let mut positive = true;
    let mut bound = 0.0f64;
    let mut min_abs = f64::INFINITY;
    for t in linspace(window, samples) {
        let v = profile.eval2(t)?.v;
        positive &= v > 0.0;
        bound = bound.max(v.abs());
        min_abs = min_abs.min(v.abs());
    }
    Ok(CompletenessProbe { positive, bound, min_abs, bounded: bound.is_finite() })
}
