//! Parsing of numeric grids given on the command line.

use std::str::FromStr;

use serde::Serialize;

/// Accepted forms:
///
/// * `start:stop:step`, both ends included when `step` divides the span;
/// * `geom:start:stop:count`, `count` log-spaced points;
/// * `lin:start:stop:count`, `count` evenly spaced points;
/// * `a,b,c`, an explicit list;
/// * a single number.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Grid(pub Vec<f64>);

impl Grid {
    pub fn values(&self) -> &[f64] {
        &self.0
    }
}

fn number(s: &str) -> Result<f64, String> {
    let x: f64 = s.trim().parse().map_err(|_| format!("`{s}` is not a number"))?;
    if !x.is_finite() {
        return Err(format!("`{s}` is not finite"));
    }
    Ok(x)
}

fn count(s: &str) -> Result<usize, String> {
    let n: usize = s.trim().parse().map_err(|_| format!("`{s}` is not a point count"))?;
    if n < 2 {
        return Err(format!("a spaced grid needs at least 2 points, got {n}"));
    }
    Ok(n)
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let values = match parts.as_slice() {
            ["geom", a, b, n] => {
                let (a, b, n) = (number(a)?, number(b)?, count(n)?);
                if !(a > 0.0 && b > 0.0) {
                    return Err("geometric grids need positive ends".into());
                }
                let (la, lb) = (a.ln(), b.ln());
                (0..n).map(|i| (la + (lb - la) * i as f64 / (n - 1) as f64).exp()).collect()
            }
            ["lin", a, b, n] => {
                let (a, b, n) = (number(a)?, number(b)?, count(n)?);
                (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
            }
            [a, b, step] => {
                let (a, b, step) = (number(a)?, number(b)?, number(step)?);
                if !(step > 0.0) || b < a {
                    return Err("`start:stop:step` needs step > 0 and stop ≥ start".into());
                }
                let span = (b - a) / step;
                let mut n = span.floor() as usize;
                if (span - span.round()).abs() < 1e-9 {
                    n = span.round() as usize;
                }
                (0..=n).map(|i| a + step * i as f64).collect()
            }
            [_] => s.split(',').map(number).collect::<Result<Vec<_>, _>>()?,
            _ => return Err(format!("cannot parse grid `{s}`")),
        };
        if values.is_empty() {
            return Err("grid is empty".into());
        }
        Ok(Grid(values))
    }
}

/// Closed interval `lo:hi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Window(pub f64, pub f64);

impl FromStr for Window {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (a, b) = s.split_once(':').ok_or_else(|| format!("expected `lo:hi`, got `{s}`"))?;
        let (a, b) = (number(a)?, number(b)?);
        if a >= b {
            return Err(format!("window `{s}` is empty"));
        }
        Ok(Window(a, b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> Vec<f64> {
        s.parse::<Grid>().unwrap().0
    }

    #[test]
    fn stepped_ranges_include_both_ends() {
        assert_eq!(g("1:8:0.5").len(), 15);
        assert_eq!(*g("1:8:0.5").last().unwrap(), 8.0);
        assert_eq!(g("0:1:0.3"), vec![0.0, 0.3, 0.6, 0.8999999999999999]);
        assert_eq!(g("0.1:0.3:0.1").len(), 3);
    }

    #[test]
    fn spaced_and_listed_grids() {
        let v = g("geom:0.01:100:5");
        assert!((v[2] - 1.0).abs() < 1e-12 && (v[4] - 100.0).abs() < 1e-9);
        assert_eq!(g("lin:0:1:3"), vec![0.0, 0.5, 1.0]);
        assert_eq!(g("0.5,1,2,4"), vec![0.5, 1.0, 2.0, 4.0]);
        assert_eq!(g("3"), vec![3.0]);
    }

    #[test]
    fn bad_grids() {
        for s in ["", "1:0:1", "0:1:0", "geom:0:1:4", "geom:1:2:1", "a,b", "1:2", "1:2:3:4"] {
            assert!(s.parse::<Grid>().is_err(), "{s}");
        }
        assert_eq!("8:63".parse::<Window>().unwrap(), Window(8.0, 63.0));
        assert!("8".parse::<Window>().is_err());
        assert!("3:3".parse::<Window>().is_err());
    }
}
