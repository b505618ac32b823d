//! Dense real polynomials and real-root isolation.
//!
//! Roots are isolated by recursion on the derivative: between consecutive
//! real critical points the polynomial is monotone, so each such interval
//! holds at most one simple root and plain bisection is enough. A critical
//! point at which the polynomial vanishes is a multiple root whose
//! multiplicity is one more than its multiplicity in the derivative.

use std::fmt;
use std::ops::{Bound, RangeBounds};

use super::real::{working_precision, BigReal};
use crate::error::{Error, Result};

/// Coefficients in ascending order of power; no trailing zeros except for
/// the zero polynomial, which is empty.
#[derive(Clone, PartialEq, Default)]
pub struct Polynomial {
    coeffs: Vec<BigReal>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<BigReal>) -> Self {
        while coeffs.last().is_some_and(BigReal::is_zero) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: BigReal) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `x`.
    pub fn x() -> Self {
        Self::new(vec![BigReal::zero(), BigReal::one()])
    }

    /// Monic product of `(x - r)` over `roots`.
    pub fn from_roots(roots: &[BigReal]) -> Self {
        let mut p = Self::constant(BigReal::one());
        for r in roots {
            p = p.mul(&Self::new(vec![-r, BigReal::one()]));
        }
        p
    }

    pub fn coeffs(&self) -> &[BigReal] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigReal> {
        self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, k: usize) -> BigReal {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn leading(&self) -> Option<&BigReal> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &BigReal) -> BigReal {
        let mut acc = BigReal::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// `sum |c_k| |x|^k`, the natural scale of rounding error in `eval(x)`.
    pub fn eval_abs(&self, x: &BigReal) -> BigReal {
        let ax = x.abs();
        let mut acc = BigReal::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * &ax + c.abs();
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigReal::from(k))
                .collect(),
        )
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }

    pub fn scale(&self, c: &BigReal) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigReal::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// `x * self`.
    pub fn mul_x(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut out = Vec::with_capacity(self.coeffs.len() + 1);
        out.push(BigReal::zero());
        out.extend(self.coeffs.iter().cloned());
        Self::new(out)
    }

    /// `self(-x)`.
    pub fn reflect(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| if k % 2 == 1 { -c } else { c.clone() })
                .collect(),
        )
    }

    /// Real roots in `range`; see [`poly_real_roots`].
    pub fn real_roots(&self, range: impl RangeBounds<BigReal>) -> Result<Vec<PolyRoot>> {
        poly_real_roots(&self.coeffs, range)
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| format!("{}*x^{k}", c.to_sig_string(10)))
            .collect();
        write!(f, "Polynomial({})", terms.join(" + "))
    }
}

/// A real root and its multiplicity.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyRoot {
    pub value: BigReal,
    pub multiplicity: usize,
}

/// All real roots of `sum coeffs[k] x^k` inside `range`, ascending, with
/// multiplicities.
///
/// Coefficients are ascending in power. Trailing zero coefficients are
/// dropped; a polynomial of degree 0 (or the zero polynomial) is an error.
pub fn poly_real_roots(coeffs: &[BigReal], range: impl RangeBounds<BigReal>) -> Result<Vec<PolyRoot>> {
    let p = Polynomial::new(coeffs.to_vec());
    match p.degree() {
        None | Some(0) => return Err(Error::EmptyResult),
        _ => {}
    }
    let roots = all_real_roots(&p)?;
    Ok(roots.into_iter().filter(|r| in_range(&r.value, &range)).collect())
}

fn in_range(x: &BigReal, range: &impl RangeBounds<BigReal>) -> bool {
    let lo = match range.start_bound() {
        Bound::Included(a) => x >= a,
        Bound::Excluded(a) => x > a,
        Bound::Unbounded => true,
    };
    let hi = match range.end_bound() {
        Bound::Included(b) => x <= b,
        Bound::Excluded(b) => x < b,
        Bound::Unbounded => true,
    };
    lo && hi
}

/// Cauchy bound: every root satisfies `|x| < 1 + max |c_k / c_n|`.
fn root_bound(p: &Polynomial) -> BigReal {
    let lead = p.leading().expect("nonzero polynomial").abs();
    let n = p.coeffs.len() - 1;
    let m = p.coeffs[..n]
        .iter()
        .map(|c| c.abs() / &lead)
        .fold(BigReal::zero(), BigReal::max);
    m + 1
}

/// `|p(x)|` is indistinguishable from zero at the current precision.
fn vanishes_at(p: &Polynomial, x: &BigReal) -> bool {
    let scale = p.eval_abs(x);
    let slack = BigReal::pow2(-(working_precision() as i32) / 2);
    p.eval(x).abs() <= scale * slack
}

fn all_real_roots(p: &Polynomial) -> Result<Vec<PolyRoot>> {
    let deg = p.degree().unwrap_or(0);
    if deg == 0 {
        return Ok(Vec::new());
    }
    // An exact x^z factor: a root at zero has no relative accuracy, so the
    // multiple-root test below cannot see it.
    let zeros = p.coeffs.iter().take_while(|c| c.is_zero()).count();
    if zeros > 0 {
        let mut out = all_real_roots(&Polynomial::new(p.coeffs[zeros..].to_vec()))?;
        out.push(PolyRoot {
            value: BigReal::zero(),
            multiplicity: zeros,
        });
        out.sort_by(|x, y| x.value.total_cmp(&y.value));
        return Ok(out);
    }
    if deg == 1 {
        let x = -(&p.coeffs[0] / &p.coeffs[1]);
        return Ok(vec![PolyRoot {
            value: x,
            multiplicity: 1,
        }]);
    }

    let critical = all_real_roots(&p.derivative())?;
    let bound = root_bound(p);

    // Breakpoints: -bound, critical points, +bound. Critical points where p
    // vanishes become multiple roots.
    let mut out = Vec::new();
    let mut points: Vec<(BigReal, bool)> = Vec::with_capacity(critical.len() + 2);
    points.push((-&bound, false));
    for c in &critical {
        let is_root = vanishes_at(p, &c.value);
        if is_root {
            out.push(PolyRoot {
                value: c.value.clone(),
                multiplicity: c.multiplicity + 1,
            });
        }
        points.push((c.value.clone(), is_root));
    }
    points.push((bound, false));

    for w in points.windows(2) {
        let (a, a_root) = &w[0];
        let (b, b_root) = &w[1];
        if *a_root || *b_root || a >= b {
            continue;
        }
        let fa = p.eval(a);
        let fb = p.eval(b);
        if fa.signum() * fb.signum() < 0 {
            out.push(PolyRoot {
                value: bisect(p, a.clone(), b.clone(), fa.signum())?,
                multiplicity: 1,
            });
        }
    }
    out.sort_by(|x, y| x.value.total_cmp(&y.value));
    Ok(out)
}

fn bisect(p: &Polynomial, mut a: BigReal, mut b: BigReal, sign_a: i8) -> Result<BigReal> {
    let max_iter = working_precision() as usize + 64;
    for _ in 0..max_iter {
        let mid = (&a + &b) / 2;
        if mid == a || mid == b {
            break;
        }
        let s = p.eval(&mid).signum();
        if s == 0 {
            return Ok(mid);
        }
        if s == sign_a {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok((a + b) / 2)
}
