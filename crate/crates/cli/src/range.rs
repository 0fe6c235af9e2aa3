//! Scan ranges: `1,2.5,4`, `1..12` (unit steps, inclusive) or
//! `1..3:5` (5 evenly spaced values, inclusive).

use crate::failure::Failure;

pub fn parse_range(text: &str) -> Result<Vec<f64>, Failure> {
    let bad = |why: &str| Failure::Usage(format!("range `{text}`: {why}"));
    let num = |s: &str| s.trim().parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(|| bad("bad number"));
    let text = text.trim();
    if text.is_empty() {
        return Err(bad("empty"));
    }
    let values = if let Some((lo, rest)) = text.split_once("..") {
        let (hi, count) = match rest.split_once(':') {
            Some((hi, c)) => (hi, Some(c.trim().parse::<usize>().map_err(|_| bad("bad count"))?)),
            None => (rest, None),
        };
        let (lo, hi) = (num(lo)?, num(hi)?);
        if hi < lo {
            return Err(bad("empty"));
        }
        match count {
            Some(0) => return Err(bad("empty")),
            Some(1) => vec![lo],
            Some(c) => (0..c).map(|j| lo + (hi - lo) * j as f64 / (c - 1) as f64).collect(),
            None => (0..).map(|j| lo + j as f64).take_while(|&v| v <= hi).collect(),
        }
    } else {
        text.split(',').map(num).collect::<Result<Vec<_>, _>>()?
    };
    Ok(values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forms() {
        assert_eq!(parse_range("1..12").unwrap().len(), 12);
        assert_eq!(parse_range("2").unwrap(), vec![2.0]);
        assert_eq!(parse_range("1, 2.5,4").unwrap(), vec![1.0, 2.5, 4.0]);
        assert_eq!(parse_range("1..3:5").unwrap(), vec![1.0, 1.5, 2.0, 2.5, 3.0]);
        assert_eq!(parse_range("4..4").unwrap(), vec![4.0]);
    }

    #[test]
    fn empty_or_malformed() {
        for text in ["", "  ", "5..1", "1..2:0", "a..2", "1,,2", "1..inf"] {
            assert!(parse_range(text).is_err(), "{text}");
        }
    }
}
