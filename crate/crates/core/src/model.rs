//! Physical parameters and their reduction to the dimensionless pair `(s, alpha)`.
//!
//! Units: hbar = c = 1.

use crate::error::{Error, Result};
use crate::precision::BigReal;

/// Physical inputs of one radial model.
#[derive(Clone, Debug, PartialEq)]
pub struct PhysicalParams {
    /// Particle mass, > 0.
    pub m: BigReal,
    /// Oscillator angular frequency, > 0.
    pub omega: BigReal,
    /// Magnetic quadrupole moment magnitude.
    pub big_m: BigReal,
    /// Current-density constant.
    pub b0: BigReal,
    /// Axial wavenumber.
    pub k: BigReal,
    /// Angular momentum quantum number.
    pub l: i64,
    /// Geometric phase, not reduced modulo 2 pi.
    pub phi1: BigReal,
}

impl PhysicalParams {
    pub fn validate(&self) -> Result<()> {
        if self.m.signum() <= 0 {
            return Err(Error::InvalidParameter("mass m must be > 0".into()));
        }
        if self.omega.signum() <= 0 {
            return Err(Error::InvalidParameter("omega must be > 0".into()));
        }
        Ok(())
    }
}

/// The reduced problem `(gamma, s = |gamma|, alpha)`.
#[derive(Clone, Debug, PartialEq)]
pub struct DimensionlessProblem {
    pub gamma: BigReal,
    pub s: BigReal,
    pub alpha: BigReal,
}

impl DimensionlessProblem {
    /// Builds directly from `(s, alpha)` with `gamma = s`.
    pub fn new(s: BigReal, alpha: BigReal) -> Result<Self> {
        check_s(&s)?;
        Ok(DimensionlessProblem {
            gamma: s.clone(),
            s,
            alpha,
        })
    }
}

pub(crate) fn check_s(s: &BigReal) -> Result<()> {
    if s.is_sign_negative() && !s.is_zero() {
        return Err(Error::InvalidParameter(format!("s must be >= 0, got {s}")));
    }
    Ok(())
}

/// Energy quantities attached to one eigenvalue `W`.
#[derive(Clone, Debug, PartialEq)]
pub struct EnergyResult {
    pub w: BigReal,
    /// `zeta^2 = m omega W`.
    pub zeta_sq: BigReal,
    /// `E = omega W / 2 + k^2 / (2m)`.
    pub energy: BigReal,
}

pub fn dimensionless_from_physical(p: &PhysicalParams) -> Result<DimensionlessProblem> {
    p.validate()?;
    let gamma = BigReal::from_i64(p.l) + &p.phi1 / (BigReal::pi() * 2);
    let s = gamma.abs();
    let alpha = &p.big_m * &p.b0 / (&p.m * &p.omega).sqrt()?;
    Ok(DimensionlessProblem { gamma, s, alpha })
}

pub fn energy_from_w(w: &BigReal, p: &PhysicalParams) -> Result<EnergyResult> {
    p.validate()?;
    let zeta_sq = &p.m * &p.omega * w;
    let energy = &p.omega * w / 2 + p.k.square() / (&p.m * 2);
    Ok(EnergyResult {
        w: w.clone(),
        zeta_sq,
        energy,
    })
}

/// The single frequency at which the lowest-degree (`n = 1`) polynomial
/// solution exists: `omega = M^2 B0^2 / (2 m (2s + 1))`.
pub fn allowed_frequency_n1(s: &BigReal, big_m: &BigReal, b0: &BigReal, m: &BigReal) -> Result<BigReal> {
    check_s(s)?;
    if m.signum() <= 0 {
        return Err(Error::InvalidParameter("mass m must be > 0".into()));
    }
    Ok((big_m * b0).square() / (m * 2 * (s * 2 + 1)))
}

/// Value of the radial operator applied to `f`, given `f`, `f'` and `f''`
/// at the point `y > 0`:
/// `f'' + f'/y - gamma^2 f / y^2 + alpha f / y - y^2 f + W f`.
pub fn radial_residual(
    s: &BigReal,
    alpha: &BigReal,
    w: &BigReal,
    y: &BigReal,
    f: &BigReal,
    df: &BigReal,
    d2f: &BigReal,
) -> BigReal {
    let y2 = y.square();
    d2f + df / y - s.square() * f / &y2 + alpha * f / y - &y2 * f + w * f
}
