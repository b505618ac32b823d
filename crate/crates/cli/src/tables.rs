//! Builders for the row/column layouts printed by `ritz`, `rpm`, `sweep`
//! and `reproduce`.

use radspec_core::ritz::ritz_spectrum;
use radspec_core::rpm::{rpm_track, RpmResult, ScanOptions, Window};
use radspec_core::spectra::{
    alpha_grid, sweep, truncation_overlay, SpectralCurveSet, FIGURE_ALPHA_MAX, FIGURE_ALPHA_MIN, FIGURE_LEVELS,
    FIGURE_OVERLAY_NMAX, FIGURE_POINTS,
};
use radspec_core::{BigReal, Error, Result};

use crate::golden::GoldenTable;
use crate::output::{Cell, Table};

fn level_header(key: &str, levels: usize) -> Vec<String> {
    std::iter::once(key.to_string())
        .chain((0..levels).map(|j| format!("W_{j}")))
        .collect()
}

/// One row per basis size `N`, columns `W_0 .. W_{levels-1}`; level `j`
/// is blank while `j >= N`.
pub fn ritz_table(s: &BigReal, alpha: &BigReal, nmin: usize, nmax: usize, levels: usize) -> Result<Table> {
    if nmin == 0 || nmin > nmax {
        return Err(Error::InvalidArgument(format!("bad basis range {nmin}..={nmax}")));
    }
    let mut table = Table::new(level_header("N", levels));
    for n in nmin..=nmax {
        let res = ritz_spectrum(s, alpha, n)?;
        let mut row = vec![Cell::from(n)];
        row.extend((0..levels).map(|j| Cell::from(res.eigenvalues.get(j).cloned())));
        table.push(row);
    }
    Ok(table)
}

/// Levels of `alpha` (own attribution) that are stable at the top dimension.
fn reference_levels(top: &RpmResult, levels: usize) -> Vec<BigReal> {
    top.stable_levels()
        .into_iter()
        .filter(|r| r.attribution.includes_same())
        .take(levels)
        .map(|r| r.w.clone())
        .collect()
}

/// Own root of `row` assigned to reference level `j`: the nearest one, kept
/// only if it is closer than half the gap to a neighbouring level.
fn assign(row: &RpmResult, reference: &[BigReal], j: usize) -> Option<BigReal> {
    let target = &reference[j];
    let mut reach: Option<BigReal> = None;
    for k in [j.checked_sub(1), Some(j + 1)].into_iter().flatten() {
        if let Some(other) = reference.get(k) {
            let half = (other - target).abs() / 2;
            reach = Some(match reach {
                Some(r) => r.min(half),
                None => half,
            });
        }
    }
    let best = row
        .own()
        .into_iter()
        .map(|r| &r.w)
        .min_by(|a, b| (*a - target).abs().total_cmp(&(*b - target).abs()))?;
    match reach {
        Some(r) if (best - target).abs() >= r => None,
        _ => Some(best.clone()),
    }
}

#[derive(Clone, Debug)]
pub struct RpmTableSpec {
    pub s: BigReal,
    pub alpha: BigReal,
    pub dmin: usize,
    pub dmax: usize,
    pub d: usize,
    pub levels: usize,
    pub window: Option<Window>,
    pub grid_points: usize,
}

/// Roots for every dimension of `spec`.
pub fn rpm_table_track(spec: &RpmTableSpec) -> Result<Vec<RpmResult>> {
    if spec.levels == 0 {
        return Err(Error::InvalidArgument("levels must be >= 1".into()));
    }
    let window = spec
        .window
        .clone()
        .unwrap_or_else(|| Window::for_levels(&spec.s, &spec.alpha, spec.levels));
    let opts = ScanOptions {
        grid_points: spec.grid_points,
    };
    rpm_track(&spec.s, &spec.alpha, spec.dmin..=spec.dmax, spec.d, &window, &opts)
}

/// One row per Hankel dimension `D`, columns `W_0 ..`: each column follows
/// one level of `alpha` as converged at the last dimension back to lower ones.
pub fn rpm_table_from_track(track: &[RpmResult], levels: usize) -> Result<Table> {
    let top = track.last().ok_or(Error::EmptyResult)?;
    let reference = reference_levels(top, levels);
    let mut table = Table::new(level_header("D", levels));
    for row in track {
        let mut cells = vec![Cell::from(row.dim)];
        cells.extend((0..levels).map(|j| {
            if j < reference.len() {
                Cell::from(assign(row, &reference, j))
            } else {
                Cell::Empty
            }
        }));
        table.push(cells);
    }
    Ok(table)
}

pub fn rpm_table(spec: &RpmTableSpec) -> Result<Table> {
    rpm_table_from_track(&rpm_table_track(spec)?, spec.levels)
}

/// `(alpha, W_0 ..)` per grid point; points without a converged basis are
/// left blank.
pub fn curves_table(set: &SpectralCurveSet) -> Table {
    let mut table = Table::new(
        std::iter::once("alpha".to_string())
            .chain((0..set.levels).map(|j| format!("W_{j}")))
            .collect(),
    );
    for p in &set.points {
        let mut row = vec![Cell::Real(p.alpha.clone())];
        match p.values.as_ref().filter(|_| !p.flagged()) {
            Some(v) => row.extend(v.iter().cloned().map(Cell::Real)),
            None => row.extend((0..set.levels).map(|_| Cell::Empty)),
        }
        table.push(row);
    }
    table
}

/// `(n, i, alpha, W, residual)` per truncation point.
pub fn points_table(set: &SpectralCurveSet) -> Table {
    let mut table = Table::new(
        ["n", "i", "alpha", "W", "residual"]
            .iter()
            .map(|h| h.to_string())
            .collect(),
    );
    for p in &set.truncation_points {
        table.push(vec![
            Cell::from(p.n),
            Cell::from(p.i),
            Cell::Real(p.alpha.clone()),
            Cell::Real(p.w.clone()),
            Cell::Real(p.residual.clone()),
        ]);
    }
    table
}

fn sqrt2() -> Result<BigReal> {
    BigReal::from(2).sqrt()
}

/// Layout parameters of a Riccati-Pade table; `None` for the Ritz ones.
pub fn published_rpm_spec(which: GoldenTable) -> Result<Option<RpmTableSpec>> {
    let alpha = match which {
        GoldenTable::Table1 | GoldenTable::Table2 => return Ok(None),
        GoldenTable::Table3 => -sqrt2()?,
        GoldenTable::Table4 => sqrt2()?,
    };
    Ok(Some(RpmTableSpec {
        s: BigReal::zero(),
        alpha,
        dmin: 8,
        dmax: 15,
        d: 0,
        levels: 4,
        window: None,
        grid_points: radspec_core::rpm::DEFAULT_GRID_POINTS,
    }))
}

/// The table in its printed layout.
pub fn reproduce_table(which: GoldenTable) -> Result<Table> {
    let s = BigReal::zero();
    match which {
        GoldenTable::Table1 => ritz_table(&s, &-sqrt2()?, 2, 10, 4),
        GoldenTable::Table2 => ritz_table(&s, &sqrt2()?, 2, 13, 4),
        GoldenTable::Table3 | GoldenTable::Table4 => {
            let spec = published_rpm_spec(which)?.ok_or(Error::EmptyResult)?;
            rpm_table(&spec)
        }
    }
}

/// Spectral curves for `s = 0` over the default figure grid, with the
/// truncation points overlaid.
pub fn reproduce_figure() -> Result<SpectralCurveSet> {
    let grid = alpha_grid(FIGURE_ALPHA_MIN, FIGURE_ALPHA_MAX, FIGURE_POINTS)?;
    let mut set = sweep(&BigReal::zero(), &grid, FIGURE_LEVELS)?;
    truncation_overlay(&mut set, FIGURE_OVERLAY_NMAX)?;
    Ok(set)
}

/// Why a figure reproduction fails its check, if it does.
pub fn figure_problems(set: &SpectralCurveSet) -> Vec<String> {
    let mut out: Vec<String> = set
        .violations
        .iter()
        .map(|v| format!("curve invariant violated: {v:?}"))
        .collect();
    out.extend(set.flagged().into_iter().map(|k| {
        format!(
            "grid point {k} (alpha = {}) did not converge",
            set.points[k].alpha.to_sig_string(6)
        )
    }));
    out.extend(set.truncation_points.iter().filter(|p| !p.on_curve()).map(|p| {
        format!(
            "truncation point n={} i={} off its curve by {}",
            p.n,
            p.i,
            p.residual.to_sig_string(3)
        )
    }));
    out
}
