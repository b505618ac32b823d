//! Eigenvalue curves `W_j(alpha)` and the checks built on them.
//!
//! Curves come from converged Ritz bounds; truncation points are overlaid
//! on them, the Hellmann-Feynman slope is compared with `-<1/y>`, and the
//! Coulomb-dominated regime is handed to the Riccati-Pade roots.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::check_s;
use crate::precision::BigReal;
use crate::ritz::{expectation_inv_y, ritz_converged, ritz_spectrum, ConvergenceOptions, DEFAULT_TOLERANCE};
use crate::rpm::{rpm_converged, RpmResult, RpmRoot, ScanOptions, Window};
use crate::truncation::truncation_solutions;

/// Basis cap for sweeps. Higher levels at large positive `alpha` need more
/// functions than the tables do.
pub const SWEEP_MAX_BASIS: usize = 32;
/// Overlay residuals must lie in `[0, OVERLAY_TOLERANCE]`.
pub const OVERLAY_TOLERANCE: f64 = 1e-8;
pub const DEFAULT_HF_STEP: f64 = 1e-5;
/// Dimension used for the large-`alpha` roots.
pub const ASYMPTOTIC_DMAX: usize = 15;

pub const FIGURE_ALPHA_MIN: f64 = -8.0;
pub const FIGURE_ALPHA_MAX: f64 = 8.0;
pub const FIGURE_POINTS: usize = 81;
pub const FIGURE_LEVELS: usize = 7;
pub const FIGURE_OVERLAY_NMAX: usize = 6;

fn sweep_options(levels: usize) -> ConvergenceOptions {
    ConvergenceOptions {
        levels,
        tolerance: DEFAULT_TOLERANCE,
        max_basis: SWEEP_MAX_BASIS.max(levels + 1),
    }
}

/// Converged Ritz levels at one grid point.
#[derive(Clone, Debug)]
pub struct SweepPoint {
    pub alpha: BigReal,
    /// Lowest `levels` eigenvalues; `None` when the Ritz solve failed.
    pub values: Option<Vec<BigReal>>,
    pub basis: usize,
    pub converged: bool,
}

impl SweepPoint {
    /// Unusable for the curve invariants.
    pub fn flagged(&self) -> bool {
        self.values.is_none() || !self.converged
    }
}

/// A truncation solution placed on its Ritz curve.
#[derive(Clone, Debug)]
pub struct OverlayPoint {
    pub n: usize,
    pub i: usize,
    pub alpha: BigReal,
    /// `2(n + s + 1)`.
    pub w: BigReal,
    /// Converged Ritz value of level `i - 1` at `alpha`.
    pub ritz: BigReal,
    /// `ritz - w`; nonnegative up to rounding.
    pub residual: BigReal,
}

impl OverlayPoint {
    /// Residual inside `[-slack, OVERLAY_TOLERANCE]`, where the slack
    /// absorbs rounding in an exact hit.
    pub fn on_curve(&self) -> bool {
        let slack = rounding_slack(&self.w);
        self.residual >= -slack && self.residual.to_f64() <= OVERLAY_TOLERANCE
    }
}

/// `2^(-prec/2) max(1, |w|)`.
pub fn rounding_slack(w: &BigReal) -> BigReal {
    let bits = crate::precision::working_precision() as i32;
    w.abs().max(BigReal::one()) * BigReal::pow2(-bits / 2)
}

#[derive(Clone, Debug, PartialEq)]
pub enum CurveViolation {
    /// `W_level` failed to decrease between grid points `index` and `index + 1`.
    NotDecreasing { level: usize, index: usize },
    /// `W_level >= W_{level+1}` at grid point `index`.
    Crossing { level: usize, index: usize },
}

#[derive(Clone, Debug)]
pub struct SpectralCurveSet {
    pub s: BigReal,
    pub levels: usize,
    pub alpha_grid: Vec<BigReal>,
    /// One entry per grid point, in grid order.
    pub points: Vec<SweepPoint>,
    pub truncation_points: Vec<OverlayPoint>,
    pub violations: Vec<CurveViolation>,
}

impl SpectralCurveSet {
    /// `(alpha, W_level)` over the unflagged grid points.
    pub fn curve(&self, level: usize) -> Vec<(&BigReal, &BigReal)> {
        self.points
            .iter()
            .filter(|p| !p.flagged())
            .filter_map(|p| p.values.as_ref().and_then(|v| v.get(level)).map(|w| (&p.alpha, w)))
            .collect()
    }

    pub fn flagged(&self) -> Vec<usize> {
        self.points
            .iter()
            .enumerate()
            .filter(|(_, p)| p.flagged())
            .map(|(k, _)| k)
            .collect()
    }
}

fn sweep_point(s: &BigReal, alpha: &BigReal, levels: usize) -> SweepPoint {
    match ritz_converged(s, alpha, &sweep_options(levels)) {
        Ok(c) => SweepPoint {
            alpha: alpha.clone(),
            values: Some(c.result.eigenvalues[..levels].to_vec()),
            basis: c.result.n,
            converged: c.converged,
        },
        Err(_) => SweepPoint {
            alpha: alpha.clone(),
            values: None,
            basis: 0,
            converged: false,
        },
    }
}

/// Converged Ritz levels `0 .. levels` at every grid point, computed in
/// parallel and returned in grid order, with the curve invariants checked.
pub fn sweep(s: &BigReal, alpha_grid: &[BigReal], levels: usize) -> Result<SpectralCurveSet> {
    check_s(s)?;
    if levels == 0 {
        return Err(Error::InvalidArgument("levels must be >= 1".into()));
    }
    if alpha_grid.is_empty() {
        return Err(Error::InvalidArgument("empty alpha grid".into()));
    }
    if alpha_grid.windows(2).any(|p| p[0] >= p[1]) {
        return Err(Error::InvalidArgument("alpha grid must be strictly ascending".into()));
    }
    let points: Vec<SweepPoint> = alpha_grid.par_iter().map(|a| sweep_point(s, a, levels)).collect();
    let violations = curve_violations(&points, levels);
    Ok(SpectralCurveSet {
        s: s.clone(),
        levels,
        alpha_grid: alpha_grid.to_vec(),
        points,
        truncation_points: Vec::new(),
        violations,
    })
}

/// Evenly spaced grid with exact endpoints.
pub fn alpha_grid(lo: f64, hi: f64, points: usize) -> Result<Vec<BigReal>> {
    if points < 2 || !(lo < hi) {
        return Err(Error::InvalidArgument(format!(
            "bad grid [{lo}, {hi}] with {points} points"
        )));
    }
    let (lo, hi) = (BigReal::from_f64(lo), BigReal::from_f64(hi));
    let step = (&hi - &lo) / (points as i32 - 1);
    Ok((0..points)
        .map(|k| {
            if k + 1 == points {
                hi.clone()
            } else {
                &lo + &step * k as i32
            }
        })
        .collect())
}

fn curve_violations(points: &[SweepPoint], levels: usize) -> Vec<CurveViolation> {
    let mut out = Vec::new();
    for (index, p) in points.iter().enumerate() {
        let Some(v) = p.values.as_ref().filter(|_| p.converged) else {
            continue;
        };
        for level in 0..levels.saturating_sub(1) {
            if v[level] >= v[level + 1] {
                out.push(CurveViolation::Crossing { level, index });
            }
        }
        let next = points.get(index + 1).filter(|q| !q.flagged());
        if let Some(w) = next.and_then(|q| q.values.as_ref()) {
            for level in 0..levels {
                if w[level] >= v[level] {
                    out.push(CurveViolation::NotDecreasing { level, index });
                }
            }
        }
    }
    out
}

/// Places every truncation solution with `n <= n_max` on Ritz level
/// `i - 1` and stores the points in `set`.
pub fn truncation_overlay(set: &mut SpectralCurveSet, n_max: usize) -> Result<&[OverlayPoint]> {
    let s = set.s.clone();
    let mut jobs = Vec::new();
    for n in 0..=n_max {
        jobs.extend(truncation_solutions(n, &s)?);
    }
    let points = jobs
        .par_iter()
        .map(|sol| {
            let level = sol.i - 1;
            let c = ritz_converged(&s, &sol.alpha_root, &sweep_options(level + 1))?;
            let ritz = c.result.eigenvalues[level].clone();
            Ok(OverlayPoint {
                n: sol.n,
                i: sol.i,
                alpha: sol.alpha_root.clone(),
                residual: &ritz - &sol.w,
                w: sol.w.clone(),
                ritz,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    set.truncation_points = points;
    Ok(&set.truncation_points)
}

/// Smallest `|W_j(alpha) - 2(n + s + 1)|` over levels `j < levels` and
/// `n <= n_max`. Away from the truncation roots it stays well above zero.
pub fn truncation_gap(s: &BigReal, alpha: &BigReal, levels: usize, n_max: usize) -> Result<BigReal> {
    let c = ritz_converged(s, alpha, &sweep_options(levels))?;
    let mut gap: Option<BigReal> = None;
    for w in &c.result.eigenvalues[..levels] {
        for n in 0..=n_max {
            let d = (w - (s + n as i32 + 1) * 2).abs();
            gap = Some(match gap {
                Some(g) => g.min(d),
                None => d,
            });
        }
    }
    gap.ok_or(Error::EmptyResult)
}

#[derive(Clone, Debug)]
pub struct HellmannFeynman {
    /// Central difference `(W(alpha + h) - W(alpha - h)) / 2h`.
    pub slope: BigReal,
    /// `<1/y>` in the same level.
    pub expectation: BigReal,
    /// `|slope + expectation|`.
    pub residual: BigReal,
    /// Basis size used on both sides.
    pub basis: usize,
}

impl HellmannFeynman {
    /// Residual below `max(1e-8, 10 h^2)`.
    pub fn passes(&self, h: f64) -> bool {
        self.residual.to_f64() < (10.0 * h * h).max(1e-8)
    }
}

/// Compares the finite-difference slope of level `level` with `-<1/y>`.
///
/// The basis size is fixed by convergence at `alpha` and reused at
/// `alpha +- h`, so the difference is taken on one smooth Ritz curve.
pub fn hellmann_feynman_residual(s: &BigReal, alpha: &BigReal, level: usize, h: f64) -> Result<HellmannFeynman> {
    if !(h > 0.0) {
        return Err(Error::InvalidArgument(format!("step h = {h} must be positive")));
    }
    let c = ritz_converged(s, alpha, &sweep_options(level + 1))?;
    let n = c.result.n;
    let h = BigReal::from_f64(h);
    let up = ritz_spectrum(s, &(alpha + &h), n)?;
    let down = ritz_spectrum(s, &(alpha - &h), n)?;
    let slope = (&up.eigenvalues[level] - &down.eigenvalues[level]) / (&h * 2);
    let expectation = expectation_inv_y(&c.result, level)?;
    let residual = (&slope + &expectation).abs();
    Ok(HellmannFeynman {
        slope,
        expectation,
        residual,
        basis: n,
    })
}

#[derive(Clone, Debug)]
pub struct Asymptotic {
    pub w: BigReal,
    /// `-alpha^2 / (2j + 2s + 1)^2`.
    pub leading: BigReal,
    /// `w / leading`.
    pub ratio: BigReal,
}

/// Level `level` at large `alpha` from the Riccati-Pade roots, against the
/// Coulomb-limit formula.
pub fn asymptotic_check(s: &BigReal, level: usize, alpha: &BigReal) -> Result<Asymptotic> {
    check_s(s)?;
    let window = Window::for_levels(s, alpha, level + 1);
    let res = rpm_converged(s, alpha, ASYMPTOTIC_DMAX, 0, &window, &ScanOptions::default())?;
    let own: Vec<&RpmRoot> = res
        .stable_levels()
        .into_iter()
        .filter(|r| r.attribution.includes_same())
        .collect();
    let w = own.get(level).ok_or(Error::EmptyResult)?.w.clone();
    let leading = -alpha.square() / (s * 2 + (2 * level as i32 + 1)).square();
    let ratio = w.checked_div(&leading)?;
    Ok(Asymptotic { w, leading, ratio })
}

/// An RPM root paired with the nearest converged Ritz level of the sign
/// it belongs to.
#[derive(Clone, Debug)]
pub struct CrossCheck {
    pub rpm: BigReal,
    pub ritz: BigReal,
    /// `+1` when matched against `alpha`, `-1` against `-alpha`.
    pub sign: i8,
    pub difference: BigReal,
}

/// Every stable RPM level below the `levels`-th Ritz eigenvalue of either
/// sign, matched with Ritz.
pub fn cross_validate(s: &BigReal, alpha: &BigReal, levels: usize, d_max: usize) -> Result<Vec<CrossCheck>> {
    let window = Window::for_levels(s, alpha, levels);
    let rpm = rpm_converged(s, alpha, d_max, 0, &window, &ScanOptions::default())?;
    cross_validate_result(s, &rpm, levels)
}

/// As [`cross_validate`], for roots already computed at `rpm.alpha`.
pub fn cross_validate_result(s: &BigReal, rpm: &RpmResult, levels: usize) -> Result<Vec<CrossCheck>> {
    if levels == 0 {
        return Err(Error::InvalidArgument("levels must be >= 1".into()));
    }
    let alpha = &rpm.alpha;
    let opts = sweep_options(levels);
    let plus = ritz_converged(s, alpha, &opts)?.result.eigenvalues;
    let minus = ritz_converged(s, &-alpha, &opts)?.result.eigenvalues;
    let (plus, minus) = (&plus[..levels], &minus[..levels]);
    let ceiling = plus[levels - 1].clone().min(minus[levels - 1].clone()) + 1;
    let mut out = Vec::new();
    for root in rpm.stable_levels() {
        if root.w > ceiling {
            continue;
        }
        let mut best: Option<CrossCheck> = None;
        for (sign, set, allowed) in [
            (1i8, plus, root.attribution.includes_same()),
            (-1i8, minus, root.attribution.includes_opposite()),
        ] {
            if !allowed {
                continue;
            }
            for r in set {
                let diff = (r - &root.w).abs();
                if best.as_ref().map_or(true, |b| diff < b.difference) {
                    best = Some(CrossCheck {
                        rpm: root.w.clone(),
                        ritz: r.clone(),
                        sign,
                        difference: diff,
                    });
                }
            }
        }
        out.extend(best);
    }
    Ok(out)
}
