//! Invariant ansatz machinery: metric signatures, translation directions,
//! the squared radial coordinate, and the lifts that turn univariate curves
//! into scalar fields on coordinate space.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::{Point, ScalarField, ScalarJet};
use crate::linalg::SymMat;
use crate::profile::Curve;

/// Diagonal flat signature `g_ij = eps_i delta_ij`, entries `±1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Signature {
    eps: Vec<i8>,
}

impl Signature {
    pub fn new(entries: &[i8]) -> Result<Signature> {
        if entries.is_empty() {
            return Err(Error::Invalid("signature must have at least one entry".into()));
        }
        if entries.iter().any(|&e| e != 1 && e != -1) {
            return Err(Error::Invalid("signature entries must be +1 or -1".into()));
        }
        Ok(Signature { eps: entries.to_vec() })
    }

    pub fn euclidean(n: usize) -> Result<Signature> {
        Signature::new(&alloc::vec![1i8; n])
    }

    /// Parses a symbol string like `"++-"`.
    pub fn parse_symbols(s: &str) -> Result<Signature> {
        let mut eps = Vec::new();
        for (i, c) in s.chars().enumerate() {
            match c {
                '+' => eps.push(1),
                '-' => eps.push(-1),
                other => {
                    return Err(Error::Invalid(format!(
                        "signature symbol {other:?} at position {i}; expected '+' or '-'"
                    )))
                }
            }
        }
        Signature::new(&eps)
    }

    pub fn symbols(&self) -> String {
        self.eps.iter().map(|&e| if e > 0 { '+' } else { '-' }).collect()
    }

    pub fn dim(&self) -> usize {
        self.eps.len()
    }

    pub fn eps(&self, i: usize) -> f64 {
        self.eps[i] as f64
    }

    pub fn is_euclidean(&self) -> bool {
        self.eps.iter().all(|&e| e > 0)
    }

    /// Appends `m` Euclidean entries (the flat fiber of a warped product).
    pub fn extended(&self, m: usize) -> Signature {
        let mut eps = self.eps.clone();
        eps.extend(core::iter::repeat(1).take(m));
        Signature { eps }
    }
}

/// The scale of a translation direction: `eps_{i0} = sum eps_i alpha_i^2`.
/// Zero exactly when the direction is null for the flat metric.
pub fn eps_i0(sig: &Signature, alphas: &[f64]) -> Result<f64> {
    if alphas.len() != sig.dim() {
        return Err(Error::Dimension { expected: sig.dim(), got: alphas.len() });
    }
    Ok(alphas.iter().zip(0..sig.dim()).map(|(&a, i)| sig.eps(i) * a * a).sum())
}

/// Direction of a translation ansatz: all fields depend on
/// `xi = sum alpha_i x_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct TranslationDirection {
    sig: Signature,
    alphas: Vec<f64>,
    e0: f64,
}

impl TranslationDirection {
    pub fn new(sig: Signature, alphas: &[f64]) -> Result<TranslationDirection> {
        if alphas.iter().any(|a| !a.is_finite()) {
            return Err(Error::Invalid("direction coefficients must be finite".into()));
        }
        if alphas.iter().all(|&a| a == 0.0) {
            return Err(Error::Invalid("direction must be a nonzero vector".into()));
        }
        let e0 = eps_i0(&sig, alphas)?;
        Ok(TranslationDirection { sig, alphas: alphas.to_vec(), e0 })
    }

    pub fn dim(&self) -> usize {
        self.alphas.len()
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn eps_i0(&self) -> f64 {
        self.e0
    }

    /// Null directions have `eps_{i0} = 0`; the soliton they induce is steady
    /// (`rho = 0`) for any profile.
    pub fn is_null(&self) -> bool {
        self.e0 == 0.0
    }

    pub fn xi(&self, coords: &[f64]) -> Result<f64> {
        if coords.len() != self.alphas.len() {
            return Err(Error::Dimension { expected: self.alphas.len(), got: coords.len() });
        }
        Ok(self.alphas.iter().zip(coords).map(|(a, x)| a * x).sum())
    }

    /// Pads with `m` zero coefficients over a Euclidean fiber; `xi` and
    /// `eps_{i0}` are unchanged.
    pub fn extended(&self, m: usize) -> TranslationDirection {
        let mut alphas = self.alphas.clone();
        alphas.extend(core::iter::repeat(0.0).take(m));
        TranslationDirection { sig: self.sig.extended(m), alphas, e0: self.e0 }
    }
}

/// The squared distance from the origin, `r = sum x_i^2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RadialCoordinate {
    dim: usize,
}

impl RadialCoordinate {
    pub fn new(dim: usize) -> Result<RadialCoordinate> {
        if dim == 0 {
            return Err(Error::Invalid("radial coordinate needs a positive dimension".into()));
        }
        Ok(RadialCoordinate { dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn r(&self, coords: &[f64]) -> Result<f64> {
        if coords.len() != self.dim {
            return Err(Error::Dimension { expected: self.dim, got: coords.len() });
        }
        Ok(coords.iter().map(|x| x * x).sum())
    }
}

/// `u(x) = curve(sum alpha_i x_i)` as a scalar field with exact jets.
pub struct LiftedTranslation {
    curve: Arc<dyn Curve>,
    dir: TranslationDirection,
}

pub fn lift_translation(curve: Arc<dyn Curve>, dir: TranslationDirection) -> LiftedTranslation {
    LiftedTranslation { curve, dir }
}

impl ScalarField for LiftedTranslation {
    fn dim(&self) -> usize {
        self.dir.dim()
    }

    fn jet(&self, p: &Point) -> Result<ScalarJet> {
        let xi = self.dir.xi(p.coords())?;
        let d = self.curve.eval2(xi)?;
        let a = self.dir.alphas();
        let n = a.len();
        let grad = a.iter().map(|ai| ai * d.d1).collect();
        let hess = SymMat::from_fn(n, |i, j| a[i] * a[j] * d.d2);
        Ok(ScalarJet { v: d.v, grad, hess })
    }

    fn value(&self, p: &Point) -> Result<f64> {
        self.curve.value(self.dir.xi(p.coords())?)
    }
}

/// `u(x) = curve(|x|^2)` as a scalar field with exact jets:
/// `grad_i = 2 x_i u'`, `hess_ij = 4 x_i x_j u'' + 2 delta_ij u'`.
pub struct LiftedRadial {
    curve: Arc<dyn Curve>,
    rc: RadialCoordinate,
}

pub fn lift_radial(curve: Arc<dyn Curve>, rc: RadialCoordinate) -> LiftedRadial {
    LiftedRadial { curve, rc }
}

impl ScalarField for LiftedRadial {
    fn dim(&self) -> usize {
        self.rc.dim()
    }

    fn jet(&self, p: &Point) -> Result<ScalarJet> {
        let x = p.coords();
        let r = self.rc.r(x)?;
        let d = self.curve.eval2(r)?;
        let n = x.len();
        let grad = x.iter().map(|xi| 2.0 * xi * d.d1).collect();
        let hess = SymMat::from_fn(n, |i, j| {
            let mut h = 4.0 * x[i] * x[j] * d.d2;
            if i == j {
                h += 2.0 * d.d1;
            }
            h
        });
        Ok(ScalarJet { v: d.v, grad, hess })
    }

    fn value(&self, p: &Point) -> Result<f64> {
        self.curve.value(self.rc.r(p.coords())?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::Profile;

    #[test]
    fn eps_i0_of_a_mixed_signature() {
        let sig = Signature::parse_symbols("++-").unwrap();
        assert_eq!(eps_i0(&sig, &[1.0, 2.0, 3.0]).unwrap(), -4.0);
    }

    #[test]
    fn null_direction_has_zero_scale() {
        let sig = Signature::parse_symbols("+-").unwrap();
        let d = TranslationDirection::new(sig, &[1.0, 1.0]).unwrap();
        assert_eq!(d.eps_i0(), 0.0);
        assert!(d.is_null());
    }

    #[test]
    fn signature_symbols_round_trip() {
        for s in ["+++", "+-", "-", "++--+"] {
            assert_eq!(Signature::parse_symbols(s).unwrap().symbols(), s);
        }
        assert!(Signature::parse_symbols("+0-").is_err());
        assert!(Signature::parse_symbols("").is_err());
    }

    #[test]
    fn zero_direction_is_rejected() {
        let sig = Signature::euclidean(2).unwrap();
        assert!(TranslationDirection::new(sig, &[0.0, 0.0]).is_err());
    }

    #[test]
    fn translation_lift_jet() {
        let sig = Signature::euclidean(2).unwrap();
        let dir = TranslationDirection::new(sig, &[2.0, -1.0]).unwrap();
        let curve: Arc<dyn Curve> = Arc::new(Profile::parse("xi^2").unwrap());
        let field = lift_translation(curve, dir);
        let p = Point::new(alloc::vec![1.0, 1.0]).unwrap();
        let jet = field.jet(&p).unwrap();
        // xi = 1, u = xi^2: value 1, u' = 2, u'' = 2.
        assert_eq!(jet.v, 1.0);
        assert_eq!(&jet.grad[..], &[4.0, -2.0]);
        assert_eq!(jet.hess.get(0, 0), 8.0);
        assert_eq!(jet.hess.get(0, 1), -4.0);
        assert_eq!(jet.hess.get(1, 1), 2.0);
    }

    #[test]
    fn radial_lift_of_identity_is_r() {
        let rc = RadialCoordinate::new(2).unwrap();
        let curve: Arc<dyn Curve> = Arc::new(Profile::linear());
        let field = lift_radial(curve, rc);
        let p = Point::new(alloc::vec![1.0, 2.0]).unwrap();
        let jet = field.jet(&p).unwrap();
        assert_eq!(jet.v, 5.0);
        assert_eq!(&jet.grad[..], &[2.0, 4.0]);
        assert_eq!(jet.hess.get(0, 0), 2.0);
        assert_eq!(jet.hess.get(1, 1), 2.0);
        assert_eq!(jet.hess.get(0, 1), 0.0);
    }

    #[test]
    fn extended_direction_ignores_fiber_coordinates() {
        let sig = Signature::parse_symbols("+-+").unwrap();
        let dir = TranslationDirection::new(sig, &[1.0, 2.0, 2.0]).unwrap();
        let ext = dir.extended(2);
        assert_eq!(ext.dim(), 5);
        assert_eq!(ext.eps_i0(), dir.eps_i0());
        let xi = ext.xi(&[1.0, 1.0, 1.0, 9.0, -9.0]).unwrap();
        assert_eq!(xi, dir.xi(&[1.0, 1.0, 1.0]).unwrap());
        assert_eq!(ext.signature().symbols(), "+-+++");
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let sig = Signature::euclidean(3).unwrap();
        assert!(eps_i0(&sig, &[1.0, 2.0]).is_err());
        let dir = TranslationDirection::new(sig, &[1.0, 0.0, 0.0]).unwrap();
        assert!(dir.xi(&[1.0, 2.0]).is_err());
    }
}
