//! Exact polynomial solutions `f = y^s H(y) exp(-y^2/2)`.
//!
//! `H = sum a_j y^j` obeys a three-term recurrence; it terminates at degree
//! `n` exactly when `W = 2(n + s + 1)` and `a_{n+1}(alpha) = 0`, the latter
//! being a polynomial of degree `n + 1` in `alpha`.

use std::ops::Bound;

use crate::error::{Error, Result};
use crate::model::{check_s, radial_residual};
use crate::precision::{BigReal, Polynomial};

/// One terminating solution.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncationSolution {
    pub n: usize,
    /// 1-based index of the root, ascending in `alpha_root`.
    pub i: usize,
    pub s: BigReal,
    pub alpha_root: BigReal,
    /// `2(n + s + 1)`.
    pub w: BigReal,
    /// `W - 2s - 2 = 2n`.
    pub nu: BigReal,
    /// `a_0 = 1, .., a_n`.
    pub coeffs: Vec<BigReal>,
}

impl TruncationSolution {
    /// The polynomial factor `H`.
    pub fn h(&self) -> Polynomial {
        Polynomial::new(self.coeffs.clone())
    }
}

/// Denominator `(j + 2)(j + 2s + 2)` of the step producing `a_{j+2}`.
fn step_denominator(j: i64, s: &BigReal) -> BigReal {
    (s * 2 + (j + 2) as i32) * BigReal::from_i64(j + 2)
}

/// `a_0 ..= a_jmax` for arbitrary `(s, alpha, W)`.
pub fn recurrence_coeffs(s: &BigReal, alpha: &BigReal, w: &BigReal, jmax: usize) -> Vec<BigReal> {
    let nu = w - (s * 2) - 2;
    let mut a = Vec::with_capacity(jmax + 1);
    a.push(BigReal::one());
    // j = -1 step, a_{-1} = 0
    if jmax >= 1 {
        a.push(-alpha / step_denominator(-1, s));
    }
    for j in 0..jmax.saturating_sub(1) {
        let next =
            (-(alpha * &a[j + 1]) + (BigReal::from_i64(2 * j as i64) - &nu) * &a[j]) / step_denominator(j as i64, s);
        a.push(next);
    }
    a
}

/// `a_{n+1}` as a polynomial in `alpha` with `nu = 2n`.
pub fn truncation_alpha_polynomial(n: usize, s: &BigReal) -> Polynomial {
    let nu = BigReal::from_i64(2 * n as i64);
    let mut prev = Polynomial::zero();
    let mut cur = Polynomial::constant(BigReal::one());
    for j in -1..n as i64 {
        let twoj_minus_nu = BigReal::from_i64(2 * j) - &nu;
        let next = cur
            .mul_x()
            .scale(&BigReal::from(-1))
            .add(&prev.scale(&twoj_minus_nu))
            .scale(&step_denominator(j, s).recip().expect("positive denominator"));
        prev = cur;
        cur = next;
    }
    cur
}

/// The `n + 1` solutions of degree `n`, ascending in `alpha`.
pub fn truncation_solutions(n: usize, s: &BigReal) -> Result<Vec<TruncationSolution>> {
    check_s(s)?;
    let poly = truncation_alpha_polynomial(n, s);
    let roots = poly.real_roots(..)?;
    let count: usize = roots.iter().map(|r| r.multiplicity).sum();
    if count != n + 1 || roots.len() != n + 1 {
        return Err(Error::Internal(format!(
            "truncation polynomial n={n} s={s} has {} distinct real roots, expected {}",
            roots.len(),
            n + 1
        )));
    }
    let w = (s + n as i32 + 1) * 2;
    let nu = BigReal::from_i64(2 * n as i64);
    Ok(roots
        .into_iter()
        .enumerate()
        .map(|(k, r)| {
            let alpha = if n % 2 == 0 && k == n / 2 {
                // odd polynomial: the middle root is exactly zero
                BigReal::zero()
            } else {
                r.value
            };
            let coeffs = recurrence_coeffs(s, &alpha, &w, n);
            TruncationSolution {
                n,
                i: k + 1,
                s: s.clone(),
                alpha_root: alpha,
                w: w.clone(),
                nu: nu.clone(),
                coeffs,
            }
        })
        .collect())
}

/// Distinct zeros of `H` on `(0, inf)`.
pub fn count_nodes(sol: &TruncationSolution) -> Result<usize> {
    let h = sol.h();
    if h.degree().unwrap_or(0) == 0 {
        return Ok(0);
    }
    Ok(h.real_roots((Bound::Excluded(BigReal::zero()), Bound::Unbounded))?
        .len())
}

/// `y^s H(y) exp(-y^2/2)`.
pub fn eval_eigenfunction(sol: &TruncationSolution, y: &BigReal) -> Result<BigReal> {
    if y.is_sign_negative() && !y.is_zero() {
        return Err(Error::InvalidArgument("eigenfunction needs y >= 0".into()));
    }
    let ys = y.powr(&sol.s)?;
    Ok(ys * sol.h().eval(y) * (-(y.square()) / 2).exp())
}

/// `(f, f', f'')` of the eigenfunction at `y > 0`, from exact derivative
/// formulas.
pub fn eigenfunction_derivatives(sol: &TruncationSolution, y: &BigReal) -> Result<[BigReal; 3]> {
    if y.signum() <= 0 {
        return Err(Error::InvalidArgument("derivatives need y > 0".into()));
    }
    let h = sol.h();
    let dh = h.derivative();
    let d2h = dh.derivative();
    let (h0, h1, h2) = (h.eval(y), dh.eval(y), d2h.eval(y));
    let e = (-(y.square()) / 2).exp();
    // g = H e, g' = (H' - yH) e, g'' = (H'' - 2yH' + (y^2 - 1)H) e
    let g = &h0 * &e;
    let dg = (&h1 - y * &h0) * &e;
    let d2g = (&h2 - y * &h1 * 2 + (y.square() - 1) * &h0) * &e;
    let s = &sol.s;
    let ys = y.powr(s)?;
    let ys1 = &ys / y;
    let ys2 = &ys1 / y;
    let f = &ys * &g;
    let df = s * &ys1 * &g + &ys * &dg;
    let d2f = s * (s - 1) * &ys2 * &g + s * &ys1 * &dg * 2 + &ys * &d2g;
    Ok([f, df, d2f])
}

/// Radial-operator residual of a solution at `y > 0`.
pub fn ode_residual(sol: &TruncationSolution, y: &BigReal) -> Result<BigReal> {
    let [f, df, d2f] = eigenfunction_derivatives(sol, y)?;
    Ok(radial_residual(&sol.s, &sol.alpha_root, &sol.w, y, &f, &df, &d2f))
}

/// Partial sum of the Frobenius series `sum a_j y^j` at `(s, alpha, W)`,
/// continued until the terms fall below working precision.
pub fn frobenius_series(s: &BigReal, alpha: &BigReal, w: &BigReal, y: &BigReal) -> BigReal {
    const MAX_TERMS: usize = 4000;
    let nu = w - (s * 2) - 2;
    let eps = BigReal::epsilon();
    let mut prev = BigReal::zero();
    let mut cur = BigReal::one();
    let mut ypow = BigReal::one();
    let mut sum = BigReal::one();
    let mut quiet = 0;
    for j in -1..MAX_TERMS as i64 {
        let next = (-(alpha * &cur) + (BigReal::from_i64(2 * j) - &nu) * &prev) / step_denominator(j, s);
        ypow *= y;
        let term = &next * &ypow;
        sum += &term;
        if term.abs() <= sum.abs() * &eps {
            quiet += 1;
            if quiet >= 3 && j > 4 {
                break;
            }
        } else {
            quiet = 0;
        }
        prev = cur;
        cur = next;
    }
    sum
}
