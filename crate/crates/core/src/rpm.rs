//! Riccati-Padé quantization.
//!
//! With `f = y^s g` and `v = -g'/g`, the radial equation becomes the Riccati
//! equation `v' = v^2 - (2s+1) v / y + alpha / y - y^2 + W`, whose Taylor
//! coefficients at the origin satisfy
//!
//! ```text
//! (j + 2s + 1) v_j = sum_{k<j} v_k v_{j-1-k} + alpha [j=0] + W [j=1] - [j=3]
//! ```
//!
//! Eigenvalues are the zeros in `W` of the Hankel determinants
//! `det [v_{p+q+d+2}]_{p,q<D}`. These determinants are invariant (up to sign)
//! under `alpha -> -alpha`, so their zeros are the union of both spectra;
//! every root carries an attribution to the sign(s) of `alpha` it belongs to.

use crate::error::{Error, Result};
use crate::model::check_s;
use crate::precision::{lu_logdet, working_precision, BigReal, LogDet, Matrix};
use crate::truncation::{frobenius_series, truncation_alpha_polynomial};

/// Default number of scan points per window.
pub const DEFAULT_GRID_POINTS: usize = 400;
/// Largest `|W(D) - W(D-1)|` for a root to count as converged.
/// Relative spread below which stable roots count as one level.
pub const CLUSTER_WIDTH: f64 = 1e-8;
pub const STABILITY_THRESHOLD: f64 = 1e-9;
/// Radius at which the Frobenius series is probed for sign attribution.
pub const ATTRIBUTION_RADIUS: i64 = 5;

/// Taylor coefficients `v_0 ..= v_jmax` of the Riccati function.
#[derive(Clone, Debug, PartialEq)]
pub struct RiccatiSeries {
    pub s: BigReal,
    pub alpha: BigReal,
    pub w: BigReal,
    pub coeffs: Vec<BigReal>,
}

pub fn riccati_series(s: &BigReal, alpha: &BigReal, w: &BigReal, jmax: usize) -> Result<RiccatiSeries> {
    check_s(s)?;
    if jmax < 3 {
        return Err(Error::InvalidArgument(format!("jmax must be >= 3, got {jmax}")));
    }
    let two_s1 = s * 2 + 1;
    let mut v: Vec<BigReal> = Vec::with_capacity(jmax + 1);
    v.push(alpha / &two_s1);
    for j in 1..=jmax {
        let mut acc = BigReal::zero();
        for k in 0..j {
            acc.add_mul_assign(&v[k], &v[j - 1 - k]);
        }
        if j == 1 {
            acc += w;
        }
        if j == 3 {
            acc -= 1;
        }
        v.push(acc / (&two_s1 + j as i32));
    }
    Ok(RiccatiSeries {
        s: s.clone(),
        alpha: alpha.clone(),
        w: w.clone(),
        coeffs: v,
    })
}

/// Highest coefficient index needed by a `D x D` Hankel matrix at offset `d`.
pub fn required_order(dim: usize, d: usize) -> usize {
    (2 * dim + d).max(3)
}

/// `M_pq = v_{p+q+d+2}`, `p, q < D`.
pub fn hankel_matrix(series: &RiccatiSeries, dim: usize, d: usize) -> Result<Matrix> {
    if dim == 0 {
        return Err(Error::InvalidArgument("Hankel dimension must be >= 1".into()));
    }
    let need = 2 * dim + d;
    if series.coeffs.len() <= need {
        return Err(Error::InvalidArgument(format!(
            "Hankel D={dim} d={d} needs v_0..v_{need}, series has {} coefficients",
            series.coeffs.len()
        )));
    }
    Ok(Matrix::from_fn(dim, dim, |p, q| series.coeffs[p + q + d + 2].clone()))
}

pub fn hankel_logdet(series: &RiccatiSeries, dim: usize, d: usize) -> Result<LogDet> {
    lu_logdet(&hankel_matrix(series, dim, d)?)
}

/// Hankel determinant at one `W`.
pub fn hankel_at(s: &BigReal, alpha: &BigReal, w: &BigReal, dim: usize, d: usize) -> Result<LogDet> {
    let series = riccati_series(s, alpha, w, required_order(dim, d))?;
    hankel_logdet(&series, dim, d)
}

/// Which sign of `alpha` a root belongs to, relative to the `alpha` the
/// determinant was built with.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Attribution {
    Same,
    Opposite,
    Both,
}

impl Attribution {
    pub fn includes_same(self) -> bool {
        matches!(self, Attribution::Same | Attribution::Both)
    }

    pub fn includes_opposite(self) -> bool {
        matches!(self, Attribution::Opposite | Attribution::Both)
    }

    pub fn flipped(self) -> Self {
        match self {
            Attribution::Same => Attribution::Opposite,
            Attribution::Opposite => Attribution::Same,
            Attribution::Both => Attribution::Both,
        }
    }
}

#[derive(Clone, Debug)]
pub struct RpmRoot {
    pub w: BigReal,
    /// `|W(D) - W(D-1)|` against the nearest root one dimension lower;
    /// zero for exact roots, `None` when there is no lower dimension.
    pub stability_error: Option<BigReal>,
    pub attribution: Attribution,
    /// Closed-form truncation eigenvalue at which the determinant vanishes
    /// identically.
    pub exact: bool,
}

impl RpmRoot {
    pub fn is_stable(&self) -> bool {
        self.exact
            || self
                .stability_error
                .as_ref()
                .is_some_and(|e| e.to_f64() < STABILITY_THRESHOLD)
    }
}

#[derive(Clone, Debug)]
pub struct RpmResult {
    pub dim: usize,
    pub d: usize,
    pub alpha: BigReal,
    /// Ascending in `W`; union of the spectra for `alpha` and `-alpha`.
    pub roots: Vec<RpmRoot>,
}

impl RpmResult {
    pub fn values(&self) -> Vec<BigReal> {
        self.roots.iter().map(|r| r.w.clone()).collect()
    }

    /// Roots belonging to the `alpha` this result was computed for.
    pub fn own(&self) -> Vec<&RpmRoot> {
        self.roots.iter().filter(|r| r.attribution.includes_same()).collect()
    }

    /// Roots belonging to `-alpha`.
    pub fn opposite(&self) -> Vec<&RpmRoot> {
        self.roots
            .iter()
            .filter(|r| r.attribution.includes_opposite())
            .collect()
    }
    /// Stable roots with each cluster of nearly coincident ones (gaps below
    /// `CLUSTER_WIDTH * max(1, |W|)`) collapsed to its most stable member.
    pub fn stable_levels(&self) -> Vec<&RpmRoot> {
        let mut out: Vec<&RpmRoot> = Vec::new();
        let mut last: Option<&BigReal> = None;
        for root in self.roots.iter().filter(|r| r.is_stable()) {
            let joins = last
                .is_some_and(|prev| (&root.w - prev).abs().to_f64() < CLUSTER_WIDTH * root.w.abs().to_f64().max(1.0));
            last = Some(&root.w);
            match out.last_mut() {
                Some(rep) if joins => {
                    if stability_key(root) < stability_key(rep) {
                        *rep = root;
                    }
                }
                _ => out.push(root),
            }
        }
        out
    }
}

fn stability_key(r: &RpmRoot) -> f64 {
    if r.exact {
        return -1.0;
    }
    r.stability_error.as_ref().map_or(f64::INFINITY, BigReal::to_f64)
}

/// Scan window for `W`.
#[derive(Clone, Debug, PartialEq)]
pub struct Window {
    pub lo: BigReal,
    pub hi: BigReal,
}

impl Window {
    pub fn new(lo: BigReal, hi: BigReal) -> Result<Self> {
        if lo >= hi {
            return Err(Error::InvalidArgument(format!("empty window [{lo}, {hi}]")));
        }
        Ok(Window { lo, hi })
    }

    /// Covers the lowest `levels` eigenvalues for both signs of `alpha`:
    /// the Coulomb-like ground state `-alpha^2/(2s+1)^2` from below and the
    /// oscillator ladder plus a margin linear in `|alpha|` from above.
    pub fn for_levels(s: &BigReal, alpha: &BigReal, levels: usize) -> Self {
        let coulomb = alpha.square() / (s * 2 + 1).square() * BigReal::ratio(6, 5);
        let lo = (-coulomb - 5).min(BigReal::from(-5));
        let hi = (s + (2 * levels) as i32 + 1) * 2 + alpha.abs() * 2 + 2;
        Window { lo, hi }
    }

    pub fn contains(&self, w: &BigReal) -> bool {
        w >= &self.lo && w <= &self.hi
    }
}

/// Options for the root scan.
#[derive(Clone, Debug)]
pub struct ScanOptions {
    pub grid_points: usize,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            grid_points: DEFAULT_GRID_POINTS,
        }
    }
}

#[derive(Clone, Debug)]
struct Sample {
    w: BigReal,
    sign: i8,
    /// `ln |det|`; `None` stands for minus infinity.
    ln: Option<BigReal>,
}

fn ln_lt(a: &Option<BigReal>, b: &Option<BigReal>) -> bool {
    match (a, b) {
        (None, None) => false,
        (None, Some(_)) => true,
        (Some(_), None) => false,
        (Some(x), Some(y)) => x < y,
    }
}

fn linspace(lo: &BigReal, hi: &BigReal, points: usize) -> Vec<BigReal> {
    let step = (hi - lo) / (points as i32 - 1);
    (0..points)
        .map(|k| {
            if k + 1 == points {
                hi.clone()
            } else {
                lo + &step * k as i32
            }
        })
        .collect()
}

/// Points per refinement level inside a candidate bracket.
const REFINE_POINTS: usize = 17;
/// Cell width (relative to `max(1, |W|)`) below which candidate intervals
/// are resolved directly instead of subdivided further.
const REFINE_FLOOR: f64 = 1e-9;
/// Cells refined on each side of a sampled minimum.
const MINIMUM_REACH: usize = 2;
/// Most zeros extracted from one resolved interval.
const MAX_CLUSTER: usize = 16;
/// Half-width, in units of the root resolution, of the neighbourhood of a
/// known zero excluded from further search.
const EXCLUSION_RESOLUTIONS: i32 = 256;
/// Brent iteration at which shallow minima are abandoned.
const BRENT_EARLY_CHECK: usize = 60;
/// Depth (natural-log units) a minimum must reach by that iteration.
const BRENT_EARLY_DEPTH: f64 = 8.0;
/// A polished minimum counts as a zero when `|det|` drops this many
/// natural-log units below the bracket ends.
const DEEP_MINIMUM_LN: f64 = 46.0;

/// Zeros of a scalar function of `W` known only through sign and log
/// magnitude, located by sign changes and by deep minima of `|f|`.
pub struct RootScanner<F>
where
    F: Fn(&BigReal) -> Result<LogDet>,
{
    f: F,
}

impl<F> RootScanner<F>
where
    F: Fn(&BigReal) -> Result<LogDet>,
{
    pub fn new(f: F) -> Self {
        RootScanner { f }
    }

    fn sample(&self, w: BigReal) -> Result<Sample> {
        let ld = (self.f)(&w)?;
        Ok(Sample {
            w,
            sign: ld.sign,
            ln: ld.ln_abs,
        })
    }

    fn resolution(w: &BigReal) -> BigReal {
        w.abs().max(BigReal::one()) * BigReal::pow2(-(working_precision() as i32) / 2)
    }

    pub fn scan(&self, lo: &BigReal, hi: &BigReal, points: usize) -> Result<Vec<BigReal>> {
        if points < 3 {
            return Err(Error::InvalidArgument("scan needs at least 3 grid points".into()));
        }
        let samples = linspace(lo, hi, points)
            .into_iter()
            .map(|w| self.sample(w))
            .collect::<Result<Vec<_>>>()?;
        let mut roots = Vec::new();
        self.collect(&samples, &mut roots)?;
        roots.sort_by(|a, b| a.total_cmp(b));
        roots.dedup_by(|a, b| (&*a - &*b).abs() <= Self::resolution(b));
        Ok(roots)
    }

    fn collect(&self, samples: &[Sample], roots: &mut Vec<BigReal>) -> Result<()> {
        let n = samples.len();
        let width = &samples[1].w - &samples[0].w;
        let floor = samples[n / 2].w.abs().max(BigReal::one()) * BigReal::from_f64(REFINE_FLOOR);
        // cells [k, k+1] that need a finer look
        let mut marked = vec![false; n - 1];
        for k in 0..n - 1 {
            if samples[k].sign * samples[k + 1].sign < 0 {
                marked[k] = true;
            }
        }
        for k in 1..n - 1 {
            let (l, c, r) = (&samples[k - 1], &samples[k], &samples[k + 1]);
            if c.sign == 0 {
                roots.push(c.w.clone());
            } else if !ln_lt(&l.ln, &c.ln) && ln_lt(&c.ln, &r.ln) {
                // a dip may hide further zeros a cell or two away
                for m in marked
                    .iter_mut()
                    .take((k + MINIMUM_REACH).min(n - 1))
                    .skip(k.saturating_sub(MINIMUM_REACH))
                {
                    *m = true;
                }
            }
        }
        // Touching marked cells are handled together so that no candidate
        // sits on the edge of an interval.
        let mut k = 0;
        while k < n - 1 {
            if !marked[k] {
                k += 1;
                continue;
            }
            let start = k;
            while k < n - 1 && marked[k] {
                k += 1;
            }
            let (first, last) = (&samples[start], &samples[k]);
            if width <= floor {
                self.resolve(first, last, roots)?;
                continue;
            }
            let grid = linspace(&first.w, &last.w, (k - start) * (REFINE_POINTS - 1) + 1);
            let end = grid.len() - 1;
            let sub = grid
                .into_iter()
                .enumerate()
                .map(|(i, w)| match i {
                    0 => Ok(first.clone()),
                    i if i == end => Ok(last.clone()),
                    _ => self.sample(w),
                })
                .collect::<Result<Vec<_>>>()?;
            self.collect(&sub, roots)?;
        }
        Ok(())
    }

    /// All zeros in a short interval, found one at a time: each zero is
    /// divided out before the search repeats, so clustered zeros that share
    /// a bracket are still separated.
    fn resolve(&self, l: &Sample, r: &Sample, roots: &mut Vec<BigReal>) -> Result<()> {
        let mut known = Vec::new();
        let mut budget = MAX_CLUSTER;
        self.resolve_into(l, r, &mut known, &mut budget)?;
        roots.extend(known);
        Ok(())
    }

    fn resolve_into(&self, l: &Sample, r: &Sample, known: &mut Vec<BigReal>, budget: &mut usize) -> Result<()> {
        while *budget > 0 {
            *budget -= 1;
            let (dl, dr) = (deflate(l, known), deflate(r, known));
            let found = if dl.sign * dr.sign < 0 {
                Some(self.illinois(dl, dr, known)?)
            } else if dl.sign != 0 && dl.sign == dr.sign {
                self.brent(&dl, &dr, known)?
            } else {
                None
            };
            let Some(w) = found else {
                return Ok(());
            };
            if !known.iter().any(|k| (k - &w).abs() <= Self::resolution(&w)) {
                known.push(w);
                continue;
            }
            // A known zero is only approximate, so its quotient keeps a
            // spurious sign change there; search either side of it instead.
            let gap = Self::resolution(&w) * EXCLUSION_RESOLUTIONS;
            let left = &w - &gap;
            let right = &w + &gap;
            if left > l.w {
                let left = self.sample(left)?;
                self.resolve_into(l, &left, known, budget)?;
            }
            if right < r.w {
                let right = self.sample(right)?;
                self.resolve_into(&right, r, known, budget)?;
            }
            return Ok(());
        }
        Ok(())
    }

    fn sample_deflated(&self, w: BigReal, known: &[BigReal]) -> Result<Sample> {
        Ok(deflate(&self.sample(w)?, known))
    }

    /// Illinois-modified regula falsi on a sign-change bracket, with a
    /// bisection step whenever the bracket fails to halve twice running.
    fn illinois(&self, a: Sample, b: Sample, known: &[BigReal]) -> Result<BigReal> {
        let (mut flo, mut fhi) = (signed_value(&a), signed_value(&b));
        let lo_sign = a.sign;
        let (mut lo, mut hi) = (a.w, b.w);
        let mut side = 0i8;
        let mut slow = 0u32;
        for _ in 0..working_precision() as usize + 64 {
            let width = &hi - &lo;
            if width <= Self::resolution(&lo) {
                break;
            }
            let c = match (&lo * &fhi - &hi * &flo).checked_div(&(&fhi - &flo)) {
                Ok(c) if slow < 2 && c > lo && c < hi => c,
                _ => (&lo + &hi) / 2,
            };
            let m = self.sample_deflated(c, known)?;
            if m.sign == 0 {
                return Ok(m.w);
            }
            let fm = signed_value(&m);
            if m.sign == lo_sign {
                lo = m.w;
                flo = fm;
                if side == -1 {
                    fhi = fhi / 2;
                }
                side = -1;
            } else {
                hi = m.w;
                fhi = fm;
                if side == 1 {
                    flo = flo / 2;
                }
                side = 1;
            }
            slow = if (&hi - &lo) * 2 > width { (slow + 1) % 3 } else { 0 };
        }
        Ok((lo + hi) / 2)
    }

    /// Brent minimization of `|f|` on `[l, r]`, where `f` has the same sign
    /// at both ends. Returns a zero when a sample changes sign (then
    /// refined by [`Self::illinois`]) or when the minimum is deep enough to
    /// be a zero of even multiplicity.
    fn brent(&self, l: &Sample, r: &Sample, known: &[BigReal]) -> Result<Option<BigReal>> {
        let ends = match (&l.ln, &r.ln) {
            (Some(a), Some(b)) => a.clone().min(b.clone()),
            _ => return Ok(None),
        };
        let golden = (BigReal::from(3) - BigReal::from(5).sqrt()?) / 2;
        let mut a = l.w.clone();
        let mut b = r.w.clone();
        let mut x = self.sample_deflated((&a + &b) / 2, known)?;
        if x.sign == 0 {
            return Ok(Some(x.w));
        }
        if x.sign != l.sign {
            return Ok(Some(self.illinois(l.clone(), x, known)?));
        }
        let mut gx = signed_value(&x).abs();
        let (mut w, mut gw) = (x.w.clone(), gx.clone());
        let (mut v, mut gv) = (x.w.clone(), gx.clone());
        let mut d = BigReal::zero();
        let mut e = BigReal::zero();
        let depth = |s: &Sample| s.ln.as_ref().map_or(f64::INFINITY, |v| (&ends - v).to_f64());
        for iter in 0..4 * working_precision() as usize {
            let tol = Self::resolution(&x.w);
            let tol2 = &tol * 2;
            let xm = (&a + &b) / 2;
            if (&x.w - &xm).abs() <= &tol2 - (&b - &a) / 2 {
                break;
            }
            if iter == BRENT_EARLY_CHECK && depth(&x) < BRENT_EARLY_DEPTH {
                return Ok(None);
            }
            let mut use_golden = true;
            if e.abs() > tol {
                let rr = (&x.w - &w) * (&gx - &gv);
                let mut q = (&x.w - &v) * (&gx - &gw);
                let mut p = (&x.w - &v) * &q - (&x.w - &w) * &rr;
                q = (q - rr) * 2;
                if q.signum() > 0 {
                    p = -p;
                }
                q = q.abs();
                let etemp = std::mem::replace(&mut e, d.clone());
                let acceptable = p.abs() < (&q * &etemp).abs() / 2 && p > &q * (&a - &x.w) && p < &q * (&b - &x.w);
                if acceptable {
                    d = p / &q;
                    let u = &x.w + &d;
                    if &u - &a < tol2 || &b - &u < tol2 {
                        d = if xm > x.w { tol.clone() } else { -&tol };
                    }
                    use_golden = false;
                }
            }
            if use_golden {
                e = if x.w >= xm { &a - &x.w } else { &b - &x.w };
                d = &golden * &e;
            }
            let u = if d.abs() >= tol {
                &x.w + &d
            } else if d.signum() >= 0 {
                &x.w + &tol
            } else {
                &x.w - &tol
            };
            let fu = self.sample_deflated(u, known)?;
            if fu.sign == 0 {
                return Ok(Some(fu.w));
            }
            if fu.sign != l.sign {
                return Ok(Some(self.illinois(l.clone(), fu, known)?));
            }
            let gu = signed_value(&fu).abs();
            if gu <= gx {
                if fu.w >= x.w {
                    a = x.w.clone();
                } else {
                    b = x.w.clone();
                }
                v = std::mem::replace(&mut w, x.w.clone());
                gv = std::mem::replace(&mut gw, gx);
                gx = gu;
                x = fu;
            } else {
                if fu.w < x.w {
                    a = fu.w.clone();
                } else {
                    b = fu.w.clone();
                }
                if gu <= gw || w == x.w {
                    v = std::mem::replace(&mut w, fu.w);
                    gv = std::mem::replace(&mut gw, gu);
                } else if gu <= gv || v == x.w || v == w {
                    v = fu.w;
                    gv = gu;
                }
            }
        }
        Ok((depth(&x) >= DEEP_MINIMUM_LN).then_some(x.w))
    }
}

/// Signed value `sign * |f|`.
fn signed_value(s: &Sample) -> BigReal {
    match &s.ln {
        None => BigReal::zero(),
        Some(l) if s.sign < 0 => -l.exp(),
        Some(l) => l.exp(),
    }
}

/// `f(w) / prod (w - r)` over the known zeros `r`.
fn deflate(s: &Sample, known: &[BigReal]) -> Sample {
    let mut out = s.clone();
    for r in known {
        let gap = &s.w - r;
        match (&mut out.ln, gap.abs().ln().ok()) {
            (Some(ln), Some(g)) => {
                *ln -= g;
                out.sign *= gap.signum();
            }
            _ => {
                out.ln = None;
                out.sign = 0;
            }
        }
    }
    out
}

/// Truncation eigenvalues `2(n+s+1)` in the window for which `a_{n+1}`
/// vanishes at `alpha` or `-alpha`, with their attribution.
fn exact_candidates(s: &BigReal, alpha: &BigReal, window: &Window) -> Vec<(BigReal, Attribution)> {
    let mut out = Vec::new();
    let slack = BigReal::pow2(-(working_precision() as i32) / 2);
    let neg = -alpha;
    for n in 0.. {
        let w = (s + n as i32 + 1) * 2;
        if w > window.hi {
            break;
        }
        if w < window.lo {
            continue;
        }
        let p = truncation_alpha_polynomial(n, s);
        let vanishes = |x: &BigReal| p.eval(x).abs() <= p.eval_abs(x) * &slack;
        let attribution = match (vanishes(alpha), vanishes(&neg)) {
            (true, true) => Attribution::Both,
            (true, false) => Attribution::Same,
            (false, true) => Attribution::Opposite,
            (false, false) => continue,
        };
        out.push((w, attribution));
    }
    out
}

/// Assigns a root to the sign of `alpha` whose Frobenius series stays
/// smaller at a fixed radius (the eigen-solution lacks the growing branch).
pub fn attribute(s: &BigReal, alpha: &BigReal, w: &BigReal) -> Attribution {
    if alpha.is_zero() {
        return Attribution::Both;
    }
    let y = BigReal::from_i64(ATTRIBUTION_RADIUS);
    let tiny = BigReal::pow2(-(working_precision() as i32));
    let mag = |a: &BigReal| {
        let v = frobenius_series(s, a, w, &y).abs().max(tiny.clone());
        v.log10().expect("positive").to_f64()
    };
    let same = mag(alpha);
    let opposite = mag(&-alpha);
    if (same - opposite).abs() <= 1.0 {
        Attribution::Both
    } else if same < opposite {
        Attribution::Same
    } else {
        Attribution::Opposite
    }
}

/// Raw roots at one dimension: scanned zeros plus identically vanishing
/// exact cases, the latter replacing any scanned zeros around them.
fn roots_at(
    s: &BigReal,
    alpha: &BigReal,
    dim: usize,
    d: usize,
    window: &Window,
    opts: &ScanOptions,
) -> Result<Vec<(BigReal, Option<Attribution>)>> {
    let scanner = RootScanner::new(|w: &BigReal| hankel_at(s, alpha, w, dim, d));
    let scanned = scanner.scan(&window.lo, &window.hi, opts.grid_points)?;
    let mut exact = Vec::new();
    for (w, attr) in exact_candidates(s, alpha, window) {
        if hankel_at(s, alpha, &w, dim, d)?.sign == 0 {
            exact.push((w, attr));
        }
    }
    let radius = BigReal::from_f64(REFINE_FLOOR);
    let mut out: Vec<(BigReal, Option<Attribution>)> = scanned
        .into_iter()
        .filter(|w| {
            exact
                .iter()
                .all(|(e, _)| (w - e).abs() > &radius * e.abs().max(BigReal::one()))
        })
        .map(|w| (w, None))
        .collect();
    out.extend(exact.into_iter().map(|(w, a)| (w, Some(a))));
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(out)
}

fn nearest<'a>(w: &BigReal, pool: &'a [(BigReal, Option<Attribution>)]) -> Option<&'a BigReal> {
    pool.iter()
        .map(|(v, _)| v)
        .min_by(|a, b| (*a - w).abs().total_cmp(&(*b - w).abs()))
}

/// Zeros of the `D x D` Hankel determinant in `window`, with stability
/// errors measured against dimension `D - 1`.
pub fn rpm_roots(
    s: &BigReal,
    alpha: &BigReal,
    dim: usize,
    d: usize,
    window: &Window,
    opts: &ScanOptions,
) -> Result<RpmResult> {
    check_s(s)?;
    if dim == 0 {
        return Err(Error::InvalidArgument("Hankel dimension must be >= 1".into()));
    }
    if opts.grid_points < 100 {
        return Err(Error::InvalidArgument("grid_points must be >= 100".into()));
    }
    let current = roots_at(s, alpha, dim, d, window, opts)?;
    let lower = if dim > 1 {
        Some(roots_at(s, alpha, dim - 1, d, window, opts)?)
    } else {
        None
    };
    Ok(assemble(s, alpha, dim, d, current, lower.as_deref()))
}

fn assemble(
    s: &BigReal,
    alpha: &BigReal,
    dim: usize,
    d: usize,
    current: Vec<(BigReal, Option<Attribution>)>,
    lower: Option<&[(BigReal, Option<Attribution>)]>,
) -> RpmResult {
    let roots = current
        .into_iter()
        .map(|(w, exact)| {
            let stability_error = match (&exact, lower) {
                (Some(_), _) => Some(BigReal::zero()),
                (None, Some(pool)) => nearest(&w, pool).map(|v| (&w - v).abs()),
                (None, None) => None,
            };
            let attribution = exact.unwrap_or_else(|| attribute(s, alpha, &w));
            RpmRoot {
                w,
                stability_error,
                attribution,
                exact: exact.is_some(),
            }
        })
        .collect();
    RpmResult {
        dim,
        d,
        alpha: alpha.clone(),
        roots,
    }
}

/// Roots for every `D` in `dims` (ascending), each with its stability error
/// against the previous dimension.
pub fn rpm_track(
    s: &BigReal,
    alpha: &BigReal,
    dims: std::ops::RangeInclusive<usize>,
    d: usize,
    window: &Window,
    opts: &ScanOptions,
) -> Result<Vec<RpmResult>> {
    check_s(s)?;
    let (first, last) = (*dims.start(), *dims.end());
    if first == 0 || first > last {
        return Err(Error::InvalidArgument(format!("bad dimension range {first}..={last}")));
    }
    let mut prev = if first > 1 {
        Some(roots_at(s, alpha, first - 1, d, window, opts)?)
    } else {
        None
    };
    let mut out = Vec::with_capacity(last - first + 1);
    for dim in first..=last {
        let cur = roots_at(s, alpha, dim, d, window, opts)?;
        out.push(assemble(s, alpha, dim, d, cur.clone(), prev.as_deref()));
        prev = Some(cur);
    }
    Ok(out)
}

/// Roots at `D_max` that moved by less than the stability threshold since
/// `D_max - 1`.
pub fn rpm_converged(
    s: &BigReal,
    alpha: &BigReal,
    d_max: usize,
    d: usize,
    window: &Window,
    opts: &ScanOptions,
) -> Result<RpmResult> {
    if d_max < 3 {
        return Err(Error::InvalidArgument("D_max must be >= 3".into()));
    }
    let mut res = rpm_roots(s, alpha, d_max, d, window, opts)?;
    res.roots.retain(RpmRoot::is_stable);
    Ok(res)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sqrt2() -> BigReal {
        BigReal::from(2).sqrt().unwrap()
    }

    #[test]
    fn first_coefficients() {
        let s = BigReal::ratio(1, 2);
        let a = BigReal::ratio(3, 4);
        let w = BigReal::ratio(7, 5);
        let v = riccati_series(&s, &a, &w, 5).unwrap().coeffs;
        assert_eq!(v[0], &a / BigReal::from(2));
        let v1 = (v[0].square() + &w) / (&s * 2 + 2);
        assert!((&v[1] - v1).abs() < BigReal::pow2(-250));
    }

    #[test]
    fn oscillator_ground_state_series() {
        let s = BigReal::from(3);
        let v = riccati_series(&s, &BigReal::zero(), &((&s + 1) * 2), 12)
            .unwrap()
            .coeffs;
        for (j, c) in v.iter().enumerate() {
            if j == 1 {
                assert_eq!(*c, 1);
            } else {
                assert!(c.is_zero(), "v_{j} = {c}");
            }
        }
    }

    #[test]
    fn exact_case_vanishes() {
        let s = BigReal::zero();
        for dim in 2..=6 {
            let ld = hankel_at(&s, &sqrt2(), &BigReal::from(4), dim, 0).unwrap();
            assert_eq!(ld.sign, 0, "D={dim}");
        }
        let ld = hankel_at(&s, &sqrt2(), &BigReal::ratio(11, 2), 3, 0).unwrap();
        assert_ne!(ld.sign, 0);
    }

    #[test]
    fn short_series_is_rejected() {
        let series = riccati_series(&BigReal::zero(), &sqrt2(), &BigReal::one(), 5).unwrap();
        assert!(matches!(hankel_logdet(&series, 3, 0), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn scanner_finds_double_root() {
        // (W - 1)^2 (W + 2)
        let scanner = RootScanner::new(|w: &BigReal| {
            let v = (w - 1).square() * (w + 2);
            let m = Matrix::from_rows(vec![vec![v]]).unwrap();
            lu_logdet(&m)
        });
        let roots = scanner.scan(&BigReal::from(-5), &BigReal::from(5), 101).unwrap();
        assert_eq!(roots.len(), 2, "{roots:?}");
        assert!((&roots[0] + 2).abs() < BigReal::from_f64(1e-30));
        assert!((&roots[1] - 1).abs() < BigReal::from_f64(1e-30));
    }

    #[test]
    fn window_for_levels() {
        let w = Window::for_levels(&BigReal::zero(), &BigReal::from(10), 4);
        assert!(w.lo < BigReal::from(-120));
        assert!(w.hi > BigReal::from(18));
    }
}
