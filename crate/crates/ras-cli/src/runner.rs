//! Resolves command-line configuration into soliton data, runs the three
//! verification levels, and assembles the report and samples table.

use std::sync::Arc;

use ras_core::construct::{
    construct_radial, construct_translation, construct_warped, BuildOptions, CurveBundle, Family,
    IntegrationConstants, SolitonData,
};
use ras_core::field::Point;
use ras_core::invariant::{Signature, TranslationDirection};
use ras_core::limits;
use ras_core::profile::{Curve, Interval, Profile};
use ras_core::verify::{
    grid_for, residual_full_tensor, residual_pde_conformal, residual_pde_warped,
    residual_system_radial, residual_system_translation, residual_system_warped, sample_window,
    ResidualReport, SampleSite, WarpedSpec,
};
use ras_core::{Error, Result};

use crate::report::{CheckSummary, Report, SampleRow};

/// Resolved run configuration shared by `construct` and `verify`.
#[derive(Clone, Debug)]
pub struct RunSpec {
    pub family: Family,
    pub profile: String,
    pub n: Option<usize>,
    pub m: Option<usize>,
    pub signature: Option<String>,
    pub alphas: Option<String>,
    pub c: f64,
    pub k: f64,
    pub base: Option<f64>,
    pub window: Option<(f64, f64)>,
    pub samples: usize,
    pub grid_box: (f64, f64),
    pub per_axis: usize,
    pub tol: f64,
    pub tensor_tol: f64,
}

impl RunSpec {
    fn dim(&self) -> Result<usize> {
        if let Some(text) = &self.signature {
            let sig = Signature::parse_symbols(text)?;
            if let Some(n) = self.n {
                if n != sig.dim() {
                    return Err(Error::Invalid(format!(
                        "--n {n} contradicts --signature of length {}",
                        sig.dim()
                    )));
                }
            }
            Ok(sig.dim())
        } else {
            Ok(self.n.unwrap_or(3))
        }
    }

    fn signature(&self) -> Result<Signature> {
        match &self.signature {
            Some(text) => Signature::parse_symbols(text),
            None => Signature::euclidean(self.dim()?),
        }
    }

    fn direction(&self) -> Result<TranslationDirection> {
        let sig = self.signature()?;
        let alphas = match &self.alphas {
            Some(text) => parse_floats(text)?,
            None => {
                let mut a = vec![0.0; sig.dim()];
                a[0] = 1.0;
                a
            }
        };
        TranslationDirection::new(sig, &alphas)
    }

    fn window(&self, profile: &Profile) -> Result<Interval> {
        if let Some((lo, hi)) = self.window {
            return Interval::new(lo, hi);
        }
        if let Some(domain) = profile.domain() {
            return Ok(domain);
        }
        match self.family {
            Family::Radial => Interval::new(0.1, 4.0),
            _ => Interval::new(-2.0, 2.0),
        }
    }

    fn profile(&self) -> Result<(Profile, Interval)> {
        let raw = Profile::from_spec(&self.profile)?;
        let window = self.window(&raw)?;
        let p = raw.with_domain(window)?;
        Ok((p, window))
    }

    fn constants(&self, window: Interval) -> IntegrationConstants {
        let mut ic = IntegrationConstants::default_for(self.family, window);
        ic.c = self.c;
        ic.k = self.k;
        if let Some(base) = self.base {
            ic.base = base;
        }
        ic
    }
}

pub fn parse_floats(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|part| {
            part.trim()
                .parse::<f64>()
                .map_err(|_| Error::Invalid(format!("bad number in list: {part:?}")))
        })
        .collect()
}

/// Expressions in `xi` belong to translation-invariant families, expressions
/// in `r` to the radial one; constants fit anywhere.
fn check_variable(family: Family, p: &Profile, what: &str) -> Result<()> {
    use ras_core::expr::VarKind;
    match (family, p.var()) {
        (Family::Radial, Some(VarKind::Xi)) => Err(Error::Invalid(format!(
            "{what} for the radial family must use the variable r, not xi"
        ))),
        (Family::Translation | Family::Warped, Some(VarKind::R)) => Err(Error::Invalid(format!(
            "{what} for a translation-invariant family must use the variable xi, not r"
        ))),
        _ => Ok(()),
    }
}

pub fn build_construct(spec: &RunSpec) -> Result<SolitonData> {
    let (profile, window) = spec.profile()?;
    let ic = spec.constants(window);
    let opts = BuildOptions::default();
    match spec.family {
        Family::Translation => {
            if spec.m.is_some() {
                return Err(Error::Invalid("--m only applies to the warped family".into()));
            }
            construct_translation(&profile, &spec.direction()?, ic, &opts)
        }
        Family::Radial => {
            if spec.m.is_some() || spec.alphas.is_some() {
                return Err(Error::Invalid(
                    "the radial family takes neither --m nor --alphas".into(),
                ));
            }
            if let Some(text) = &spec.signature {
                if !Signature::parse_symbols(text)?.is_euclidean() {
                    return Err(Error::Invalid(
                        "the radial family requires a Euclidean signature".into(),
                    ));
                }
            }
            construct_radial(&profile, spec.dim()?, ic, &opts)
        }
        Family::Warped => {
            construct_warped(&profile, &spec.direction()?, spec.m.unwrap_or(2), ic, &opts)
        }
    }
}

/// Assembles hand-written curves without running the quadrature recipes.
/// For conformal families `f` is the potential; for the warped family `f`
/// is the warping function and `h` the potential on the base.
pub fn build_verify(spec: &RunSpec, f: &str, rho: &str, h: Option<&str>) -> Result<SolitonData> {
    let (profile, window) = spec.profile()?;
    check_variable(spec.family, &profile, "the profile")?;
    let f_curve = Profile::parse(f)?;
    check_variable(spec.family, &f_curve, "--f")?;
    let rho_curve = Profile::parse(rho)?;
    check_variable(spec.family, &rho_curve, "--rho")?;

    let (direction, m, potential, warping): (_, _, Arc<dyn Curve>, Option<Arc<dyn Curve>>) =
        match spec.family {
            Family::Translation => {
                (Some(spec.direction()?), None, Arc::new(f_curve) as _, None)
            }
            Family::Radial => (None, None, Arc::new(f_curve) as _, None),
            Family::Warped => {
                let h_text = h.ok_or_else(|| {
                    Error::Invalid("verifying a warped family needs --h (base potential)".into())
                })?;
                let h_curve = Profile::parse(h_text)?;
                check_variable(spec.family, &h_curve, "--h")?;
                (
                    Some(spec.direction()?),
                    Some(spec.m.unwrap_or(2)),
                    Arc::new(h_curve) as _,
                    Some(Arc::new(f_curve) as _),
                )
            }
        };

    SolitonData::from_curves(CurveBundle {
        family: spec.family,
        signature: spec.signature()?,
        direction,
        m,
        lambda_f: 0.0,
        profile,
        potential,
        rho: Arc::new(rho_curve),
        warping,
        constants: spec.constants(window),
        window,
    })
}

pub struct Outcome {
    pub report: Report,
    pub rows: Vec<SampleRow>,
}

pub fn run_checks(sd: &SolitonData, spec: &RunSpec) -> Result<Outcome> {
    let ts = sample_window(sd, spec.samples);
    let sys = match sd.family() {
        Family::Translation => residual_system_translation(sd, &ts, spec.tol)?,
        Family::Radial => residual_system_radial(sd, &ts, spec.tol)?,
        Family::Warped => {
            let ws = WarpedSpec::for_data(sd)?;
            residual_system_warped(sd, &ws, &ts, spec.tol)?
        }
    };

    let box_iv = Interval::new(spec.grid_box.0, spec.grid_box.1)?;
    let pts = grid_for(sd, box_iv, spec.per_axis)?;
    let pde = match sd.family() {
        Family::Warped => {
            let ws = WarpedSpec::for_data(sd)?;
            let base_pts: Vec<Point> = pts
                .iter()
                .map(|p| Point::from_slice(&p.coords()[..sd.n()]))
                .collect::<Result<_>>()?;
            residual_pde_warped(
                sd.signature(),
                &ws,
                &sd.phi_field()?,
                &sd.warp_field()?,
                &sd.potential_field()?,
                &sd.rho_field()?,
                &base_pts,
                spec.tol,
            )?
        }
        _ => residual_pde_conformal(
            sd.signature(),
            &sd.phi_field()?,
            &sd.potential_field()?,
            &sd.rho_field()?,
            &pts,
            spec.tol,
        )?,
    };
    let tensor = residual_full_tensor(sd, &pts, spec.tensor_tol)?;

    let rows = sample_rows(sd, &sys)?;
    let skipped = sys.skipped + pde.skipped + tensor.skipped;
    let checks = vec![summary(&sys), summary(&pde), summary(&tensor)];

    let report = Report {
        family: family_name(sd.family()).into(),
        n: sd.n(),
        m: sd.m(),
        signature: sd.signature().symbols(),
        alphas: sd.direction().map(|d| d.alphas().to_vec()),
        eps_i0: sd.eps_i0(),
        c: sd.constants().c,
        k: sd.constants().k,
        base: sd.constants().base,
        profile: sd.profile().label().into(),
        window: [sd.window().lo(), sd.window().hi()],
        samples: spec.samples,
        grid_box: [spec.grid_box.0, spec.grid_box.1],
        per_axis: spec.per_axis,
        checks,
        skipped_points: skipped,
    };
    Ok(Outcome { report, rows })
}

pub fn family_name(f: Family) -> &'static str {
    match f {
        Family::Translation => "translation",
        Family::Radial => "radial",
        Family::Warped => "warped",
    }
}

fn summary(r: &ResidualReport) -> CheckSummary {
    CheckSummary { name: r.name.clone(), sup: r.sup, rms: r.rms, tol: r.tol, pass: r.pass }
}

/// One CSV row per evaluated system sample; skipped samples produce no row.
/// Residual columns hold the first three system components, zero-padded for
/// families with fewer.
fn sample_rows(sd: &SolitonData, sys: &ResidualReport) -> Result<Vec<SampleRow>> {
    let mut rows = Vec::with_capacity(sys.records.len());
    for rec in &sys.records {
        let t = match rec.site {
            SampleSite::Invariant(t) => t,
            SampleSite::Coords(_) => continue,
        };
        let p = sd.profile().eval2(t)?;
        let f = sd.potential_curve().eval2(t)?;
        let rho = Curve::value(sd.rho_curve(), t)?;
        let mut res = [0.0; 3];
        for (slot, value) in res.iter_mut().zip(&rec.components) {
            *slot = *value;
        }
        rows.push(SampleRow {
            invariant: t,
            phi: [p.v, p.d1, p.d2],
            f: [f.v, f.d1],
            rho,
            res,
        });
    }
    Ok(rows)
}

pub fn default_tol() -> f64 {
    limits::SYSTEM_TOL
}

pub fn default_tensor_tol() -> f64 {
    limits::TENSOR_TOL
}
