//! Real-valued command-line arguments.
//!
//! Accepted forms: decimal literals (`0.5`, `-1e-3`), ratios (`1/2`) and
//! square roots (`sqrt(2)`, `-sqrt(6)`, `sqrt(1/2)`), each parsed at the
//! working precision so that `sqrt(2)` is not rounded through `f64`.

use radspec_core::{BigReal, Error, Result};

/// Parses one real. Must run after the working precision is set.
pub fn parse_real(text: &str) -> Result<BigReal> {
    let t = text.trim();
    let (negative, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest.trim_start()),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let value = match body.strip_prefix("sqrt(").and_then(|r| r.strip_suffix(')')) {
        Some(inner) => {
            let x = parse_plain(inner)?;
            if x.signum() < 0 {
                return Err(Error::InvalidArgument(format!(
                    "`{text}`: square root of a negative number"
                )));
            }
            x.sqrt()?
        }
        None => parse_plain(body)?,
    };
    Ok(if negative { -value } else { value })
}

fn parse_plain(text: &str) -> Result<BigReal> {
    match text.split_once('/') {
        Some((num, den)) => {
            let den: BigReal = den.trim().parse()?;
            let num: BigReal = num.trim().parse()?;
            num.checked_div(&den)
        }
        None => text.trim().parse(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forms() {
        let r2 = BigReal::from(2).sqrt().unwrap();
        assert_eq!(parse_real("sqrt(2)").unwrap(), r2);
        assert_eq!(parse_real("-sqrt(2)").unwrap(), -&r2);
        assert_eq!(parse_real("1/2").unwrap(), BigReal::ratio(1, 2));
        assert_eq!(parse_real(" -0.25 ").unwrap(), BigReal::ratio(-1, 4));
        assert_eq!(parse_real("sqrt(1/4)").unwrap(), BigReal::ratio(1, 2));
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_real("sqrt(-2)").is_err());
        assert!(parse_real("two").is_err());
        assert!(parse_real("1/0").is_err());
    }
}
