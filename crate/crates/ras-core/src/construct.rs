//! Builders for the three soliton families.
//!
//! Each constructor takes a profile `phi` with a declared sampling window,
//! tabulates the inner antiderivative `I(t) = int phi·phi'' `, and wires up
//! potential and soliton-function curves whose derivative lanes come from the
//! closed-form recipes:
//!
//! * conformal families: `f' = [c - (n-2)·I]/phi^2`, and
//!   `f'' = -[(n-2)·phi'' + 2·phi'·f']/phi` from the first reduced equation;
//! * warped family (`f·phi = 1`): `h' = [k - (m+n-2)·I]/phi^2`, with
//!   `h = c - k/phi - (m+n-2)·int I/phi^2` as the value lane.
//!
//! Sharing one `I` table between the potential and `rho` makes the reduced
//! system residuals cancel to rounding, which is what the verifier relies on.

use alloc::format;
use alloc::sync::Arc;

use crate::dd::{dd, Dd};
use crate::error::{Error, Result};
use crate::dual::Dual2;
use crate::field::{MetricField, ScalarField, ConformalFlat, WarpedProduct};
use crate::invariant::{lift_radial, lift_translation, RadialCoordinate, Signature, TranslationDirection};
use crate::limits;
use crate::profile::{fd_jet, Curve, Interval, Profile};
use crate::quad::{antiderivative, Antiderivative, QuadSettings};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Translation,
    Radial,
    Warped,
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Translation => "translation",
            Family::Radial => "radial",
            Family::Warped => "warped",
        }
    }
}

/// Constants of the quadrature recipe: `c` scales the potential slope, `k`
/// shifts it (or enters `h'` for the warped family), and `base` anchors both
/// antiderivatives.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntegrationConstants {
    pub c: f64,
    pub k: f64,
    pub base: f64,
}

impl Default for IntegrationConstants {
    fn default() -> Self {
        IntegrationConstants { c: 1.0, k: 0.0, base: 0.0 }
    }
}

impl IntegrationConstants {
    /// Family defaults: base 0 for the translation and warped ansatz, 1 for
    /// the radial one (whose windows usually exclude the origin). Falls back
    /// to the window midpoint when the canonical base is outside; shifting
    /// the anchor only relabels `c`, it never leaves the family.
    pub fn default_for(family: Family, window: Interval) -> IntegrationConstants {
        let canonical = match family {
            Family::Translation | Family::Warped => 0.0,
            Family::Radial => 1.0,
        };
        let base = if window.contains(canonical) { canonical } else { window.midpoint() };
        IntegrationConstants { c: 1.0, k: 0.0, base }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct BuildOptions {
    pub quad: QuadSettings,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions { quad: QuadSettings::default() }
    }
}

/// A constructed (or hand-assembled) soliton candidate: profile, potential,
/// soliton function and, for warped products, the warping function, all as
/// curves in the invariant variable.
pub struct SolitonData {
    family: Family,
    signature: Signature,
    n: usize,
    m: Option<usize>,
    lambda_f: f64,
    direction: Option<TranslationDirection>,
    profile: Profile,
    potential: Arc<dyn Curve>,
    rho: Arc<dyn Curve>,
    warping: Option<Arc<dyn Curve>>,
    constants: IntegrationConstants,
    window: Interval,
    working: Interval,
}

/// Everything needed to assemble a [`SolitonData`] by hand, bypassing the
/// quadrature recipes. The verifier treats hand-assembled data exactly like
/// constructed data, which is what negative-control tests need.
pub struct CurveBundle {
    pub family: Family,
    pub signature: Signature,
    pub direction: Option<TranslationDirection>,
    pub m: Option<usize>,
    pub lambda_f: f64,
    pub profile: Profile,
    pub potential: Arc<dyn Curve>,
    pub rho: Arc<dyn Curve>,
    pub warping: Option<Arc<dyn Curve>>,
    pub constants: IntegrationConstants,
    pub window: Interval,
}

pub fn from_curves(bundle: CurveBundle) -> Result<SolitonData> {
    SolitonData::from_curves(bundle)
}

impl SolitonData {
    pub fn from_curves(b: CurveBundle) -> Result<SolitonData> {
        let n = b.signature.dim();
        if n < 3 {
            return Err(Error::Invalid(format!("base dimension must be at least 3, got {n}")));
        }
        let floor = match b.family {
            Family::Radial => Some(0.0),
            _ => None,
        };
        match b.family {
            Family::Translation => {
                if b.direction.is_none() {
                    return Err(Error::Invalid("translation family needs a direction".into()));
                }
                if b.m.is_some() || b.warping.is_some() {
                    return Err(Error::Invalid(
                        "translation family takes neither a fiber nor a warping".into(),
                    ));
                }
            }
            Family::Radial => {
                if !b.signature.is_euclidean() {
                    return Err(Error::Invalid(
                        "radial family requires a Euclidean signature".into(),
                    ));
                }
                if b.direction.is_some() || b.m.is_some() || b.warping.is_some() {
                    return Err(Error::Invalid(
                        "radial family takes no direction, fiber, or warping".into(),
                    ));
                }
                if b.window.lo() < 0.0 {
                    return Err(Error::Invalid(
                        "radial windows live in r = |x|^2 >= 0".into(),
                    ));
                }
            }
            Family::Warped => {
                if b.direction.is_none() || b.warping.is_none() {
                    return Err(Error::Invalid(
                        "warped family needs a direction and a warping curve".into(),
                    ));
                }
                match b.m {
                    Some(m) if m >= 1 => {}
                    _ => {
                        return Err(Error::Invalid(
                            "warped family needs a fiber dimension of at least 1".into(),
                        ))
                    }
                }
            }
        }
        if let Some(d) = &b.direction {
            if d.dim() != n {
                return Err(Error::Dimension { expected: n, got: d.dim() });
            }
        }
        let working = b.window.pad(limits::WORKING_PAD, floor);
        Ok(SolitonData {
            family: b.family,
            signature: b.signature,
            n,
            m: b.m,
            lambda_f: b.lambda_f,
            direction: b.direction,
            profile: b.profile,
            potential: b.potential,
            rho: b.rho,
            warping: b.warping,
            constants: b.constants,
            window: b.window,
            working,
        })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    /// Signature of the base factor.
    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> Option<usize> {
        self.m
    }

    /// Einstein constant of the fiber; the construction always uses a
    /// Ricci-flat fiber, so this is zero unless hand-assembled otherwise.
    pub fn lambda_f(&self) -> f64 {
        self.lambda_f
    }

    pub fn direction(&self) -> Option<&TranslationDirection> {
        self.direction.as_ref()
    }

    pub fn eps_i0(&self) -> Option<f64> {
        self.direction.as_ref().map(|d| d.eps_i0())
    }

    pub fn profile(&self) -> &Profile {
        &self.profile
    }

    pub fn potential_curve(&self) -> &Arc<dyn Curve> {
        &self.potential
    }

    pub fn rho_curve(&self) -> &Arc<dyn Curve> {
        &self.rho
    }

    pub fn warping_curve(&self) -> Option<&Arc<dyn Curve>> {
        self.warping.as_ref()
    }

    pub fn constants(&self) -> IntegrationConstants {
        self.constants
    }

    /// Sampling window requested by the caller.
    pub fn window(&self) -> Interval {
        self.window
    }

    /// Padded interval actually covered by the quadrature tables.
    pub fn working(&self) -> Interval {
        self.working
    }

    fn lift(&self, curve: Arc<dyn Curve>, extended: bool) -> Result<Arc<dyn ScalarField>> {
        match self.family {
            Family::Translation => {
                let dir = self.direction.clone().expect("validated at construction");
                Ok(Arc::new(lift_translation(curve, dir)))
            }
            Family::Radial => {
                let rc = RadialCoordinate::new(self.n)?;
                Ok(Arc::new(lift_radial(curve, rc)))
            }
            Family::Warped => {
                let dir = self.direction.clone().expect("validated at construction");
                let dir = if extended {
                    dir.extended(self.m.expect("validated at construction"))
                } else {
                    dir
                };
                Ok(Arc::new(lift_translation(curve, dir)))
            }
        }
    }

    /// `phi` as a scalar field on the base coordinates.
    pub fn phi_field(&self) -> Result<Arc<dyn ScalarField>> {
        self.lift(Arc::new(self.profile.clone()), false)
    }

    pub fn potential_field(&self) -> Result<Arc<dyn ScalarField>> {
        self.lift(self.potential.clone(), false)
    }

    pub fn rho_field(&self) -> Result<Arc<dyn ScalarField>> {
        self.lift(self.rho.clone(), false)
    }

    /// Warping function as a field on the base coordinates (the invariant
    /// PDE check works on the base factor alone).
    pub fn warp_field(&self) -> Result<Arc<dyn ScalarField>> {
        self.require_warped()?;
        let warp = self
            .warping
            .clone()
            .ok_or_else(|| Error::Invalid("no warping curve present".into()))?;
        self.lift(warp, false)
    }

    /// `phi` lifted to the full `n+m` coordinates of a warped product.
    pub fn phi_field_ext(&self) -> Result<Arc<dyn ScalarField>> {
        self.require_warped()?;
        self.lift(Arc::new(self.profile.clone()), true)
    }

    pub fn potential_field_ext(&self) -> Result<Arc<dyn ScalarField>> {
        self.require_warped()?;
        self.lift(self.potential.clone(), true)
    }

    pub fn rho_field_ext(&self) -> Result<Arc<dyn ScalarField>> {
        self.require_warped()?;
        self.lift(self.rho.clone(), true)
    }

    pub fn warp_field_ext(&self) -> Result<Arc<dyn ScalarField>> {
        self.require_warped()?;
        let warp = self
            .warping
            .clone()
            .ok_or_else(|| Error::Invalid("no warping curve present".into()))?;
        self.lift(warp, true)
    }

    /// The conformal metric `(1/phi^2) g` on the base coordinates.
    pub fn conformal_metric(&self) -> Result<Arc<dyn MetricField>> {
        if self.family == Family::Warped {
            return Err(Error::Invalid(
                "the warped family's metric lives on n+m coordinates; use warped_metric".into(),
            ));
        }
        Ok(Arc::new(ConformalFlat::new(self.signature.clone(), self.phi_field()?)?))
    }

    /// The full warped-product metric on `n+m` coordinates.
    pub fn warped_metric(&self) -> Result<Arc<dyn MetricField>> {
        self.require_warped()?;
        let m = self.m.expect("warped data has a fiber");
        Ok(Arc::new(WarpedProduct::new(
            self.signature.clone(),
            m,
            self.phi_field_ext()?,
            self.warp_field_ext()?,
        )?))
    }

    fn require_warped(&self) -> Result<()> {
        if self.family != Family::Warped {
            return Err(Error::Invalid(format!(
                "operation only applies to the warped family, not {}",
                self.family.name()
            )));
        }
        Ok(())
    }
}

fn guard_phi(v: f64) -> Result<()> {
    if v.abs() <= limits::CONFORMAL_EPS {
        return Err(Error::DomainViolation(format!(
            "profile value {v:.3e} is below the validity floor"
        )));
    }
    Ok(())
}

/// Potential of the conformal families, and `h` of the warped family when
/// built with the matching coefficient and constants.
struct PotentialCurve {
    phi: Profile,
    inner: Arc<Antiderivative>,
    outer: Antiderivative,
    k: f64,
    c: f64,
    /// `n - 2` for conformal families.
    coeff: f64,
}

impl Curve for PotentialCurve {
    fn eval2(&self, t: f64) -> Result<Dual2> {
        let p = self.phi.eval2(t)?;
        guard_phi(p.v)?;
        let i = self.inner.eval(t)?;
        let fp = (self.c - self.coeff * i) / (p.v * p.v);
        let fpp = -(self.coeff * p.d2 + 2.0 * p.d1 * fp) / p.v;
        Ok(Dual2::new(self.outer.eval(t)? + self.k, fp, fpp))
    }

    // Same lanes in double-double; near a window edge f' can reach ~1e15,
    // where f64 lanes cannot express the reduced-system identity below the
    // certification tolerance.
    fn eval2_dd(&self, t: f64) -> Result<(Dd, Dd, Dd)> {
        let p = self.phi.eval2(t)?;
        guard_phi(p.v)?;
        let i = self.inner.eval(t)?;
        let fp = (dd(self.c) - dd(self.coeff) * dd(i)) / (dd(p.v) * dd(p.v));
        let fpp = -((dd(self.coeff) * dd(p.d2) + dd(2.0 * p.d1) * fp) / dd(p.v));
        Ok((dd(self.outer.eval(t)? + self.k), fp, fpp))
    }
}

/// Warped potential `h`: value from the printed closed form, derivative lanes
/// from the reduced system (`h' = [k - (m+n-2)·I]/phi^2`).
struct WarpedPotential {
    phi: Profile,
    inner: Arc<Antiderivative>,
    outer: Antiderivative,
    c: f64,
    k: f64,
    /// `m + n - 2`.
    coeff: f64,
}

impl Curve for WarpedPotential {
    fn eval2(&self, t: f64) -> Result<Dual2> {
        let p = self.phi.eval2(t)?;
        guard_phi(p.v)?;
        let i = self.inner.eval(t)?;
        let hp = (self.k - self.coeff * i) / (p.v * p.v);
        let hpp = -(self.coeff * p.d2 + 2.0 * p.d1 * hp) / p.v;
        let v = self.c - self.k / p.v - self.coeff * self.outer.eval(t)?;
        Ok(Dual2::new(v, hp, hpp))
    }

    fn eval2_dd(&self, t: f64) -> Result<(Dd, Dd, Dd)> {
        let p = self.phi.eval2(t)?;
        guard_phi(p.v)?;
        let i = self.inner.eval(t)?;
        let hp = (dd(self.k) - dd(self.coeff) * dd(i)) / (dd(p.v) * dd(p.v));
        let hpp = -((dd(self.coeff) * dd(p.d2) + dd(2.0 * p.d1) * hp) / dd(p.v));
        let v = self.c - self.k / p.v - self.coeff * self.outer.eval(t)?;
        Ok((dd(v), hp, hpp))
    }
}

/// `f = 1/phi`, the warping function of the normalized warped construction.
struct WarpCurve {
    phi: Profile,
}

impl Curve for WarpCurve {
    fn eval2(&self, t: f64) -> Result<Dual2> {
        let p = self.phi.eval2(t)?;
        guard_phi(p.v)?;
        Ok(Dual2::ONE / p)
    }

    // `1/phi` with `d2 = (2 phi'^2/phi - phi'') / phi^2`, in double-double.
    fn eval2_dd(&self, t: f64) -> Result<(Dd, Dd, Dd)> {
        let p = self.phi.eval2(t)?;
        guard_phi(p.v)?;
        let sq = dd(p.v) * dd(p.v);
        let v = dd(1.0) / dd(p.v);
        let d1 = -(dd(p.d1) / sq);
        let d2 = (dd(2.0 * p.d1) * dd(p.d1) / dd(p.v) - dd(p.d2)) / sq;
        Ok((v, d1, d2))
    }
}

/// Common shape of the soliton-function curves: exact value lane, finite
/// differences (inside the working interval) for the derivative lanes, which
/// only reports ever consume.
macro_rules! rho_curve {
    ($name:ident, $self_:ident, $t:ident, $body:expr) => {
        impl $name {
            fn rho_value(&$self_, $t: f64) -> Result<f64> {
                $body
            }
        }

        impl Curve for $name {
            fn eval2(&self, t: f64) -> Result<Dual2> {
                let v = self.rho_value(t)?;
                let value = |s: f64| self.rho_value(s);
                let (d1, d2) = fd_jet(&value, t, self.working.lo(), self.working.hi())?;
                Ok(Dual2::new(v, d1, d2))
            }

            fn value(&self, t: f64) -> Result<f64> {
                self.rho_value(t)
            }
        }
    };
}

/// Translation soliton function:
/// `rho = eps_{i0}·[phi·phi'' - (n-1)·phi'^2 - phi·phi'·f']`.
struct RhoTranslation {
    phi: Profile,
    inner: Arc<Antiderivative>,
    c: f64,
    nm1: f64,
    nm2: f64,
    e0: f64,
    working: Interval,
}

rho_curve!(RhoTranslation, self, t, {
    let p = self.phi.eval2(t)?;
    guard_phi(p.v)?;
    let i = self.inner.eval(t)?;
    let fp = (self.c - self.nm2 * i) / (p.v * p.v);
    Ok(self.e0 * (p.v * p.d2 - self.nm1 * p.d1 * p.d1 - p.v * p.d1 * fp))
});

/// Radial soliton function:
/// `rho = 4(n-1)·phi·phi' + 4r·phi·phi'' - 4(n-1)·r·phi'^2 - 4c·r·phi'/phi
///      + 2c - 2(n-2)·(1 - 2r·phi'/phi)·I`.
struct RhoRadial {
    phi: Profile,
    inner: Arc<Antiderivative>,
    c: f64,
    nm1: f64,
    nm2: f64,
    working: Interval,
}

rho_curve!(RhoRadial, self, t, {
    let p = self.phi.eval2(t)?;
    guard_phi(p.v)?;
    let i = self.inner.eval(t)?;
    let ratio = p.d1 / p.v;
    Ok(4.0 * self.nm1 * p.v * p.d1 + 4.0 * t * p.v * p.d2
        - 4.0 * self.nm1 * t * p.d1 * p.d1
        - 4.0 * self.c * t * ratio
        + 2.0 * self.c
        - 2.0 * self.nm2 * (1.0 - 2.0 * t * ratio) * i)
});

/// Warped soliton function:
/// `rho = eps_{i0}·[phi·phi'' - (m+n-1)·phi'^2 - k·phi'/phi
///       + (m+n-2)·(phi'/phi)·I]`.
struct RhoWarped {
    phi: Profile,
    inner: Arc<Antiderivative>,
    k: f64,
    mnm1: f64,
    mnm2: f64,
    e0: f64,
    working: Interval,
}

rho_curve!(RhoWarped, self, t, {
    let p = self.phi.eval2(t)?;
    guard_phi(p.v)?;
    let i = self.inner.eval(t)?;
    let ratio = p.d1 / p.v;
    Ok(self.e0
        * (p.v * p.d2 - self.mnm1 * p.d1 * p.d1 - self.k * ratio + self.mnm2 * ratio * i))
});

struct Tables {
    working: Interval,
    inner: Arc<Antiderivative>,
}

/// Pads the window, re-scans validity, and tabulates `I = int phi·phi''`.
fn prepare(
    profile: &Profile,
    ic: &IntegrationConstants,
    opts: &BuildOptions,
    floor: Option<f64>,
) -> Result<Tables> {
    let window = profile.domain().ok_or_else(|| {
        Error::Invalid("profile needs a declared domain before construction".into())
    })?;
    let working = window.pad(limits::WORKING_PAD, floor);
    profile.scan_validity(working)?;
    if !working.contains(ic.base) {
        return Err(Error::Invalid(format!(
            "base point {} lies outside the working interval [{}, {}]",
            ic.base,
            working.lo(),
            working.hi()
        )));
    }
    let phi = profile.clone();
    let integrand = move |t: f64| {
        let p = phi.eval2(t)?;
        Ok(p.v * p.d2)
    };
    let inner = antiderivative(&integrand, working, ic.base, &opts.quad)?;
    Ok(Tables { working, inner: Arc::new(inner) })
}

/// Tabulates `int [c - coeff·I]/phi^2` (the potential value lane).
fn outer_table(
    profile: &Profile,
    tables: &Tables,
    c: f64,
    coeff: f64,
    ic: &IntegrationConstants,
    opts: &BuildOptions,
) -> Result<Antiderivative> {
    let phi = profile.clone();
    let inner = tables.inner.clone();
    let integrand = move |t: f64| {
        let p = phi.eval2(t)?;
        guard_phi(p.v)?;
        Ok((c - coeff * inner.eval(t)?) / (p.v * p.v))
    };
    antiderivative(&integrand, tables.working, ic.base, &opts.quad)
}

/// Tabulates `int I/phi^2` (the warped potential value lane).
fn outer_table_warped(
    profile: &Profile,
    tables: &Tables,
    ic: &IntegrationConstants,
    opts: &BuildOptions,
) -> Result<Antiderivative> {
    let phi = profile.clone();
    let inner = tables.inner.clone();
    let integrand = move |t: f64| {
        let p = phi.eval2(t)?;
        guard_phi(p.v)?;
        Ok(inner.eval(t)? / (p.v * p.v))
    };
    antiderivative(&integrand, tables.working, ic.base, &opts.quad)
}

/// Translation-invariant conformal soliton on `(R^n, g)`, `n = dir.dim()`.
pub fn construct_translation(
    profile: &Profile,
    dir: &TranslationDirection,
    ic: IntegrationConstants,
    opts: &BuildOptions,
) -> Result<SolitonData> {
    let n = dir.dim();
    if n < 3 {
        return Err(Error::Invalid(format!("translation family needs n >= 3, got {n}")));
    }
    if profile.var() == Some(crate::expr::VarKind::R) {
        return Err(Error::Invalid(
            "translation family expects a profile in xi, not r".into(),
        ));
    }
    let tables = prepare(profile, &ic, opts, None)?;
    let nm2 = (n - 2) as f64;
    let outer = outer_table(profile, &tables, ic.c, nm2, &ic, opts)?;
    let potential = Arc::new(PotentialCurve {
        phi: profile.clone(),
        inner: tables.inner.clone(),
        outer,
        k: ic.k,
        c: ic.c,
        coeff: nm2,
    });
    let rho = Arc::new(RhoTranslation {
        phi: profile.clone(),
        inner: tables.inner.clone(),
        c: ic.c,
        nm1: (n - 1) as f64,
        nm2,
        e0: dir.eps_i0(),
        working: tables.working,
    });
    Ok(SolitonData {
        family: Family::Translation,
        signature: dir.signature().clone(),
        n,
        m: None,
        lambda_f: 0.0,
        direction: Some(dir.clone()),
        profile: profile.clone(),
        potential,
        rho,
        warping: None,
        constants: ic,
        window: profile.domain().expect("checked in prepare"),
        working: tables.working,
    })
}

/// Rotation-invariant conformal soliton on Euclidean `R^n`, profile in
/// `r = |x|^2`.
pub fn construct_radial(
    profile: &Profile,
    n: usize,
    ic: IntegrationConstants,
    opts: &BuildOptions,
) -> Result<SolitonData> {
    if n < 3 {
        return Err(Error::Invalid(format!("radial family needs n >= 3, got {n}")));
    }
    if profile.var() == Some(crate::expr::VarKind::Xi) {
        return Err(Error::Invalid("radial family expects a profile in r, not xi".into()));
    }
    if let Some(window) = profile.domain() {
        if window.lo() < 0.0 {
            return Err(Error::Invalid("radial windows live in r = |x|^2 >= 0".into()));
        }
    }
    let tables = prepare(profile, &ic, opts, Some(0.0))?;
    let nm2 = (n - 2) as f64;
    let outer = outer_table(profile, &tables, ic.c, nm2, &ic, opts)?;
    let potential = Arc::new(PotentialCurve {
        phi: profile.clone(),
        inner: tables.inner.clone(),
        outer,
        k: ic.k,
        c: ic.c,
        coeff: nm2,
    });
    let rho = Arc::new(RhoRadial {
        phi: profile.clone(),
        inner: tables.inner.clone(),
        c: ic.c,
        nm1: (n - 1) as f64,
        nm2,
        working: tables.working,
    });
    Ok(SolitonData {
        family: Family::Radial,
        signature: Signature::euclidean(n)?,
        n,
        m: None,
        lambda_f: 0.0,
        direction: None,
        profile: profile.clone(),
        potential,
        rho,
        warping: None,
        constants: ic,
        window: profile.domain().expect("checked in prepare"),
        working: tables.working,
    })
}

/// Warped-product soliton `(R^n, g/phi^2) ×_{1/phi} R^m` with potential `h`
/// and a Ricci-flat fiber.
pub fn construct_warped(
    profile: &Profile,
    dir: &TranslationDirection,
    m: usize,
    ic: IntegrationConstants,
    opts: &BuildOptions,
) -> Result<SolitonData> {
    let n = dir.dim();
    if n < 3 {
        return Err(Error::Invalid(format!("warped family needs n >= 3, got {n}")));
    }
    if m == 0 {
        return Err(Error::Invalid("warped family needs a fiber dimension of at least 1".into()));
    }
    if profile.var() == Some(crate::expr::VarKind::R) {
        return Err(Error::Invalid("warped family expects a profile in xi, not r".into()));
    }
    let tables = prepare(profile, &ic, opts, None)?;
    // The warping 1/phi must be positive, not merely nonzero.
    let min = profile.min_value_on(tables.working)?;
    if min <= limits::CONFORMAL_EPS {
        return Err(Error::DomainViolation(format!(
            "warped construction needs a positive profile; minimum sampled value is {min:.3e}"
        )));
    }
    let coeff = (m + n - 2) as f64;
    let outer = outer_table_warped(profile, &tables, &ic, opts)?;
    let potential = Arc::new(WarpedPotential {
        phi: profile.clone(),
        inner: tables.inner.clone(),
        outer,
        c: ic.c,
        k: ic.k,
        coeff,
    });
    let rho = Arc::new(RhoWarped {
        phi: profile.clone(),
        inner: tables.inner.clone(),
        k: ic.k,
        mnm1: (m + n - 1) as f64,
        mnm2: coeff,
        e0: dir.eps_i0(),
        working: tables.working,
    });
    let warping = Arc::new(WarpCurve { phi: profile.clone() });
    Ok(SolitonData {
        family: Family::Warped,
        signature: dir.signature().clone(),
        n,
        m: Some(m),
        lambda_f: 0.0,
        direction: Some(dir.clone()),
        profile: profile.clone(),
        potential,
        rho,
        warping: Some(warping),
        constants: ic,
        window: profile.domain().expect("checked in prepare"),
        working: tables.working,
    })
}
