//! Parameter grids: `a:b:step` (inclusive of `b`), comma lists, or a single value.

use crate::{CliError, Result};

/// Parses a float grid. Range points are rounded to the decimal places written
/// in the bounds and step, so `0.05:0.5:0.01` ends exactly at `0.5`.
pub fn parse_floats(spec: &str) -> Result<Vec<f64>> {
    let spec = spec.trim();
    if spec.is_empty() {
        return Err(invalid(spec, "empty grid"));
    }
    if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').map(str::trim).collect();
        let [a, b, step] = parts[..] else {
            return Err(invalid(spec, "expected start:stop:step"));
        };
        let (start, stop, step_v) = (number(spec, a)?, number(spec, b)?, number(spec, step)?);
        if !(step_v > 0.0) {
            return Err(invalid(spec, "step must be positive"));
        }
        if stop < start {
            return Err(invalid(spec, "stop is below start"));
        }
        let count = ((stop - start) / step_v + 1e-9).floor() as usize + 1;
        if count > 10_000_000 {
            return Err(invalid(spec, "grid has more than 10^7 points"));
        }
        let scale = 10f64.powi([a, b, step].iter().map(|s| decimals(s)).max().unwrap_or(0));
        Ok((0..count)
            .map(|i| {
                let x = start + i as f64 * step_v;
                if scale > 1e15 {
                    x
                } else {
                    (x * scale).round() / scale
                }
            })
            .collect())
    } else {
        spec.split(',').map(|s| number(spec, s.trim())).collect()
    }
}

/// Parses a grid of non-negative integers with the same syntax.
pub fn parse_counts(spec: &str) -> Result<Vec<usize>> {
    let spec = spec.trim();
    let ints = |s: &str| {
        s.trim()
            .parse::<usize>()
            .map_err(|_| invalid(spec, &format!("`{s}` is not a non-negative integer")))
    };
    if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        let [a, b, step] = parts[..] else {
            return Err(invalid(spec, "expected start:stop:step"));
        };
        let (start, stop, step) = (ints(a)?, ints(b)?, ints(step)?);
        if step == 0 {
            return Err(invalid(spec, "step must be positive"));
        }
        if stop < start {
            return Err(invalid(spec, "stop is below start"));
        }
        Ok((start..=stop).step_by(step).collect())
    } else {
        spec.split(',').map(ints).collect()
    }
}

fn number(spec: &str, s: &str) -> Result<f64> {
    match s.parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(x),
        _ => Err(invalid(spec, &format!("`{s}` is not a finite number"))),
    }
}

fn decimals(s: &str) -> i32 {
    let mantissa = s.split(['e', 'E']).next().unwrap_or("");
    let exp: i32 = s
        .split_once(['e', 'E'])
        .and_then(|(_, e)| e.parse().ok())
        .unwrap_or(0);
    let frac = mantissa.split_once('.').map_or(0, |(_, f)| f.len() as i32);
    (frac - exp).max(0)
}

fn invalid(spec: &str, why: &str) -> CliError {
    CliError::Validation(format!("grid `{spec}`: {why}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_hits_the_endpoint_exactly() {
        let g = parse_floats("0.05:0.5:0.01").unwrap();
        assert_eq!(g.len(), 46);
        assert_eq!(g[0], 0.05);
        assert_eq!(*g.last().unwrap(), 0.5);
        assert_eq!(g[25], 0.3);
    }

    #[test]
    fn lists_and_scalars() {
        assert_eq!(parse_floats("0.1, 0.25,0.4").unwrap(), vec![0.1, 0.25, 0.4]);
        assert_eq!(parse_floats("1e-3").unwrap(), vec![1e-3]);
        assert_eq!(parse_counts("10:200:10").unwrap().len(), 20);
        assert_eq!(parse_counts("3,5").unwrap(), vec![3, 5]);
    }

    #[test]
    fn exponent_notation_counts_decimals() {
        assert_eq!(decimals("1e-3"), 3);
        assert_eq!(decimals("2.5e1"), 0);
        assert_eq!(parse_floats("0:5e-3:1e-3").unwrap()[3], 0.003);
    }

    #[test]
    fn rejects_malformed() {
        for bad in ["", "a", "1:2", "0:1:0", "1:0:0.1", "0:1:-1", "nan"] {
            assert!(parse_floats(bad).is_err(), "{bad}");
        }
        assert!(parse_counts("1.5").is_err());
    }
}
