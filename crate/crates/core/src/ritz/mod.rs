//! Rayleigh-Ritz upper bounds in the non-orthogonal basis
//! `u_j = y^(s+j) exp(-y^2/2)`, `j = 0 .. N-1`.

mod integrals;
mod quadrature;

pub use integrals::{gamma_half_integer, hamiltonian_matrix, inverse_y_matrix, overlap_matrix, GammaLadder};
pub use quadrature::{quadrature_oracle, tanh_sinh, Quadrature, ORACLE_MAX_LEVEL, ORACLE_UPPER_LIMIT};

use crate::error::{Error, Result};
use crate::model::check_s;
use crate::precision::{back_substitute_transposed, cholesky, forward_substitute, sym_eigen, BigReal, SymMatrix};

/// Solution of `H c = W S c` for one basis size.
#[derive(Clone, Debug)]
pub struct RitzResult {
    pub n: usize,
    pub s: BigReal,
    pub alpha: BigReal,
    /// Ascending.
    pub eigenvalues: Vec<BigReal>,
    /// `eigenvectors[j]` are the basis coefficients of level `j`, normalized
    /// so that `c^T S c = 1`.
    pub eigenvectors: Vec<Vec<BigReal>>,
    /// `log10` of the overlap-matrix condition number.
    pub gram_condition_log: f64,
}

pub fn ritz_spectrum(s: &BigReal, alpha: &BigReal, n: usize) -> Result<RitzResult> {
    check_s(s)?;
    if n == 0 {
        return Err(Error::InvalidArgument("basis size N must be >= 1".into()));
    }
    let ladder = GammaLadder::new(s, 2 * n + 4)?;
    let overlap = integrals::overlap_from(&ladder, n)?;
    let ham = integrals::hamiltonian_from(&ladder, n, alpha)?;

    let l = cholesky(&overlap)?;
    // A = L^-1 H L^-T; H symmetric so A = L^-1 (L^-1 H)^T.
    let x = forward_substitute(&l, &ham.to_dense());
    let a = forward_substitute(&l, &x.transpose());
    let a = SymMatrix::from_fn(n, |i, j| (&a[(i, j)] + &a[(j, i)]) / 2);
    let eig = sym_eigen(&a)?;

    let eigenvectors = (0..n)
        .map(|k| back_substitute_transposed(&l, &eig.vectors.column(k)))
        .collect();

    let gram = sym_eigen(&overlap)?;
    let gram_condition_log = (gram.values[n - 1].log10()? - gram.values[0].log10()?).to_f64();

    Ok(RitzResult {
        n,
        s: s.clone(),
        alpha: alpha.clone(),
        eigenvalues: eig.values,
        eigenvectors,
        gram_condition_log,
    })
}

/// `<1/y>` in level `j`: `c^T T c / c^T S c`.
pub fn expectation_inv_y(result: &RitzResult, j: usize) -> Result<BigReal> {
    let c = result
        .eigenvectors
        .get(j)
        .ok_or_else(|| Error::InvalidArgument(format!("level {j} >= N = {}", result.n)))?;
    let ladder = GammaLadder::new(&result.s, 2 * result.n + 4)?;
    let t = integrals::inverse_y_from(&ladder, result.n)?;
    let o = integrals::overlap_from(&ladder, result.n)?;
    Ok(t.bilinear(c, c) / o.bilinear(c, c))
}

/// Stopping rule for [`ritz_converged`].
#[derive(Clone, Debug)]
pub struct ConvergenceOptions {
    /// Number of lowest eigenvalues that must settle.
    pub levels: usize,
    /// Largest allowed change between successive basis sizes.
    pub tolerance: f64,
    /// Largest basis tried.
    pub max_basis: usize,
}

pub const DEFAULT_MAX_BASIS: usize = 24;
pub const DEFAULT_TOLERANCE: f64 = 1e-10;

impl Default for ConvergenceOptions {
    fn default() -> Self {
        ConvergenceOptions {
            levels: 4,
            tolerance: DEFAULT_TOLERANCE,
            max_basis: DEFAULT_MAX_BASIS,
        }
    }
}

impl ConvergenceOptions {
    pub fn with_levels(levels: usize) -> Self {
        ConvergenceOptions {
            levels,
            ..Self::default()
        }
    }
}

/// Ritz spectrum at the first basis size whose lowest `levels` eigenvalues
/// moved by less than `tolerance` from the previous size.
#[derive(Clone, Debug)]
pub struct ConvergedRitz {
    pub result: RitzResult,
    /// `max_j |W_j(N) - W_j(N-1)|` over the tracked levels.
    pub last_change: f64,
    pub converged: bool,
}

impl ConvergedRitz {
    pub fn eigenvalue(&self, j: usize) -> Option<&BigReal> {
        self.result.eigenvalues.get(j)
    }
}

pub fn ritz_converged(s: &BigReal, alpha: &BigReal, opts: &ConvergenceOptions) -> Result<ConvergedRitz> {
    if opts.levels == 0 {
        return Err(Error::InvalidArgument("levels must be >= 1".into()));
    }
    let start = opts.levels;
    if opts.max_basis <= start {
        return Err(Error::InvalidArgument(format!(
            "max basis {} must exceed the number of levels {}",
            opts.max_basis, opts.levels
        )));
    }
    let tol = BigReal::from_f64(opts.tolerance);
    let mut prev = ritz_spectrum(s, alpha, start)?;
    let mut change = f64::INFINITY;
    for n in start + 1..=opts.max_basis {
        let cur = ritz_spectrum(s, alpha, n)?;
        let delta = (0..opts.levels)
            .map(|j| (&cur.eigenvalues[j] - &prev.eigenvalues[j]).abs())
            .fold(BigReal::zero(), BigReal::max);
        change = delta.to_f64();
        prev = cur;
        if delta < tol {
            return Ok(ConvergedRitz {
                result: prev,
                last_change: change,
                converged: true,
            });
        }
    }
    Ok(ConvergedRitz {
        result: prev,
        last_change: change,
        converged: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sqrt(v: i64) -> BigReal {
        BigReal::from(v as i32).sqrt().unwrap()
    }

    #[test]
    fn table_one_first_row() {
        let r = ritz_spectrum(&BigReal::zero(), &-sqrt(2), 2).unwrap();
        assert_eq!(r.eigenvalues[0].to_sig_string(10), "4.000000000");
        assert_eq!(r.eigenvalues[1].to_sig_string(10), "10.49997602");
    }

    #[test]
    fn eigenvectors_are_s_normalized() {
        let s = BigReal::one();
        let r = ritz_spectrum(&s, &sqrt(6), 6).unwrap();
        let o = overlap_matrix(6, &s).unwrap();
        for c in &r.eigenvectors {
            assert!((o.bilinear(c, c) - BigReal::one()).abs() < BigReal::pow2(-150));
        }
    }

    #[test]
    fn oscillator_ground_inverse_y() {
        let r = ritz_spectrum(&BigReal::zero(), &BigReal::zero(), 4).unwrap();
        let v = expectation_inv_y(&r, 0).unwrap();
        assert!((v - BigReal::pi().sqrt().unwrap()).abs() < BigReal::pow2(-150));
    }
}
