//! Independent numerical check of the closed-form matrix elements.
//!
//! Double-exponential (tanh-sinh) quadrature on `[0, L]`, refining the step
//! by halves until successive estimates agree. The integrands carry a factor
//! `exp(-y^2)`, so truncating at `L = 40` drops less than `1e-600`.

use crate::error::{Error, Result};
use crate::model::check_s;
use crate::precision::{working_precision, BigReal};

pub const ORACLE_UPPER_LIMIT: i64 = 40;
pub const ORACLE_MAX_LEVEL: u32 = 14;

/// Integral estimate with its refinement error.
#[derive(Clone, Debug)]
pub struct Quadrature {
    pub value: BigReal,
    pub error: BigReal,
    pub level: u32,
}

/// `int_0^upper f(y) dy` to relative tolerance `rel_tol`, measured against
/// `int |f|`.
pub fn tanh_sinh<F>(f: F, upper: &BigReal, rel_tol: &BigReal) -> Result<Quadrature>
where
    F: Fn(&BigReal) -> BigReal,
{
    let half_pi = BigReal::pi() / 2;
    let half_len = upper / 2;
    let weight_floor = BigReal::pow2(-2 * working_precision() as i32 - 20);

    // Sum over the nodes t = k h with k in `ks`, returning (sum w f, sum w |f|).
    let sample = |h: &BigReal, odd_only: bool| -> (BigReal, BigReal) {
        let mut acc = BigReal::zero();
        let mut acc_abs = BigReal::zero();
        for dir in [1i64, -1] {
            let mut k: i64 = if odd_only {
                1
            } else if dir == 1 {
                0
            } else {
                1
            };
            loop {
                let t = h * (dir * k) as i32;
                let u = &half_pi * sinh(&t);
                // y = upper / (1 + exp(-2u)), dy/dt = upper * (pi/2) cosh t / (2 cosh^2 u)
                let e = (-(&u * 2)).exp();
                let y = upper / (&e + 1);
                let cu = cosh(&u);
                let w = &half_len * &half_pi * cosh(&t) / cu.square();
                if w < weight_floor {
                    break;
                }
                if y.signum() > 0 && &y < upper {
                    let fy = f(&y);
                    acc += &w * &fy;
                    acc_abs += &w * fy.abs();
                }
                k += if odd_only { 2 } else { 1 };
            }
        }
        (acc, acc_abs)
    };

    let mut h = BigReal::one();
    let (mut sum, mut sum_abs) = sample(&h, false);
    let mut estimate = &sum * &h;
    for level in 1..=ORACLE_MAX_LEVEL {
        h = h / 2;
        let (s, sa) = sample(&h, true);
        sum += s;
        sum_abs += sa;
        let next = &sum * &h;
        let error = (&next - &estimate).abs();
        let scale = &sum_abs * &h;
        estimate = next;
        if level >= 3 && error <= rel_tol * &scale {
            return Ok(Quadrature {
                value: estimate,
                error,
                level,
            });
        }
        if level == ORACLE_MAX_LEVEL {
            return Err(Error::QuadratureFailure {
                estimate: estimate.to_f64(),
                error: error.to_f64(),
            });
        }
    }
    unreachable!("loop returns at the last level")
}

fn sinh(x: &BigReal) -> BigReal {
    let e = x.exp();
    (&e - e.recip().expect("exp is positive")) / 2
}

fn cosh(x: &BigReal) -> BigReal {
    let e = x.exp();
    (&e + e.recip().expect("exp is positive")) / 2
}

/// `(S_ij, H_ij)` by direct numerical integration of
/// `u_i u_j y` and `[u_i' u_j' + (s^2/y^2 - alpha/y + y^2) u_i u_j] y`.
pub fn quadrature_oracle(i: usize, j: usize, s: &BigReal, alpha: &BigReal) -> Result<(BigReal, BigReal)> {
    check_s(s)?;
    let upper = BigReal::from_i64(ORACLE_UPPER_LIMIT);
    let tol = BigReal::from_f64(1e-30);
    let si = s + i as i32;
    let sj = s + j as i32;
    let s2 = s.square();

    let basis = |sk: &BigReal, y: &BigReal| -> (BigReal, BigReal) {
        // u = y^sk e, u' = (sk / y - y) u
        let u = y.powr(sk).expect("y > 0") * (-(y.square()) / 2).exp();
        let du = (sk / y - y) * &u;
        (u, du)
    };

    let overlap = tanh_sinh(
        |y| {
            let (ui, _) = basis(&si, y);
            let (uj, _) = basis(&sj, y);
            ui * uj * y
        },
        &upper,
        &tol,
    )?;
    let hamiltonian = tanh_sinh(
        |y| {
            let (ui, dui) = basis(&si, y);
            let (uj, duj) = basis(&sj, y);
            let mut v = -(alpha / y) + y.square();
            if !s2.is_zero() {
                v += &s2 / y.square();
            }
            (dui * duj + v * ui * uj) * y
        },
        &upper,
        &tol,
    )?;
    Ok((overlap.value, hamiltonian.value))
}
