//! Closed-form matrix elements in the basis `u_j = y^(s+j) exp(-y^2/2)`.
//!
//! Every element reduces to `I(q) = int_0^inf y^q exp(-y^2) dy = Gamma((q+1)/2) / 2`
//! with `q = 2s + m` for integer `m >= -1`.

use crate::error::{Error, Result};
use crate::model::check_s;
use crate::precision::{BigReal, SymMatrix};

/// `Gamma(k/2)` for integer `k >= 1`, by upward recursion from
/// `Gamma(1/2) = sqrt(pi)` or `Gamma(1) = 1`.
pub fn gamma_half_integer(k: u64) -> Result<BigReal> {
    if k == 0 {
        return Err(Error::InvalidArgument("Gamma has a pole at 0".into()));
    }
    let (mut x2, mut g) = if k % 2 == 1 {
        (1u64, BigReal::pi().sqrt()?)
    } else {
        (2u64, BigReal::one())
    };
    while x2 < k {
        g *= BigReal::ratio(x2 as i64, 2);
        x2 += 2;
    }
    Ok(g)
}

/// `Gamma(s + k/2)` for `k = 0 ..= kmax`, built from two seeds and the
/// recursion `Gamma(x + 1) = x Gamma(x)`. Entry 0 is `None` when `s = 0`.
#[derive(Clone, Debug)]
pub struct GammaLadder {
    s: BigReal,
    values: Vec<Option<BigReal>>,
}

impl GammaLadder {
    pub fn new(s: &BigReal, kmax: usize) -> Result<Self> {
        check_s(s)?;
        let two_s = s * 2;
        let (g_half, g_one) = if two_s.is_integer() {
            let t = two_s.to_f64() as u64;
            (gamma_half_integer(t + 1)?, gamma_half_integer(t + 2)?)
        } else {
            ((s + BigReal::ratio(1, 2)).gamma()?, (s + 1).gamma()?)
        };
        let mut values: Vec<Option<BigReal>> = Vec::with_capacity(kmax.max(2) + 1);
        values.push(if s.is_zero() { None } else { Some(&g_one / s) });
        values.push(Some(g_half));
        values.push(Some(g_one));
        for k in 3..=kmax {
            // Gamma(s + k/2) = (s + k/2 - 1) Gamma(s + k/2 - 1)
            let prev = values[k - 2].clone().expect("k - 2 >= 1");
            let x = s + BigReal::ratio(k as i64 - 2, 2);
            values.push(Some(prev * x));
        }
        values.truncate(kmax + 1);
        Ok(GammaLadder { s: s.clone(), values })
    }

    pub fn s(&self) -> &BigReal {
        &self.s
    }

    /// `Gamma(s + k/2)`.
    pub fn gamma(&self, k: usize) -> Result<&BigReal> {
        self.values
            .get(k)
            .ok_or_else(|| Error::Internal(format!("gamma ladder too short for k={k}")))?
            .as_ref()
            .ok_or_else(|| Error::InvalidArgument("Gamma pole at s + 0/2 with s = 0".into()))
    }

    /// `I(2s + m) = Gamma(s + (m+1)/2) / 2` for `m >= -1`.
    pub fn moment(&self, m: i64) -> Result<BigReal> {
        if m < -1 {
            return Err(Error::InvalidArgument(format!("moment index {m} < -1")));
        }
        Ok(self.gamma((m + 1) as usize)? / 2)
    }
}

/// `S_ij = I(2s + i + j + 1)`.
pub fn overlap_matrix(n: usize, s: &BigReal) -> Result<SymMatrix> {
    let ladder = GammaLadder::new(s, 2 * n + 4)?;
    overlap_from(&ladder, n)
}

pub(crate) fn overlap_from(ladder: &GammaLadder, n: usize) -> Result<SymMatrix> {
    let mut out = SymMatrix::zeros(n);
    for i in 0..n {
        for j in 0..=i {
            out.set(i, j, ladder.moment((i + j + 1) as i64)?);
        }
    }
    Ok(out)
}

/// `H_ij = [(s+i)(s+j) + s^2] I(p-1) - alpha I(p) - p I(p+1) + 2 I(p+3)`,
/// `p = 2s + i + j`. Terms with an exactly zero prefactor are skipped.
pub fn hamiltonian_matrix(n: usize, s: &BigReal, alpha: &BigReal) -> Result<SymMatrix> {
    let ladder = GammaLadder::new(s, 2 * n + 4)?;
    hamiltonian_from(&ladder, n, alpha)
}

pub(crate) fn hamiltonian_from(ladder: &GammaLadder, n: usize, alpha: &BigReal) -> Result<SymMatrix> {
    let s = ladder.s();
    let mut out = SymMatrix::zeros(n);
    for i in 0..n {
        for j in 0..=i {
            let m = (i + j) as i64;
            let mut h = BigReal::zero();
            let c1 = (s + i as i32) * (s + j as i32) + s.square();
            if !c1.is_zero() {
                h += c1 * ladder.moment(m - 1)?;
            }
            if !alpha.is_zero() {
                h -= alpha * ladder.moment(m)?;
            }
            let p = s * 2 + m as i32;
            if !p.is_zero() {
                h -= p * ladder.moment(m + 1)?;
            }
            h += ladder.moment(m + 3)? * 2;
            out.set(i, j, h);
        }
    }
    Ok(out)
}

/// Matrix of `1/y`: `T_ij = I(2s + i + j)`.
pub fn inverse_y_matrix(n: usize, s: &BigReal) -> Result<SymMatrix> {
    let ladder = GammaLadder::new(s, 2 * n + 4)?;
    inverse_y_from(&ladder, n)
}

pub(crate) fn inverse_y_from(ladder: &GammaLadder, n: usize) -> Result<SymMatrix> {
    let mut out = SymMatrix::zeros(n);
    for i in 0..n {
        for j in 0..=i {
            out.set(i, j, ladder.moment((i + j) as i64)?);
        }
    }
    Ok(out)
}
