//! Term-by-term comparison against sequence b-files.
//!
//! A b-file lists one term per line as `index value`; lines starting with
//! `#` and blank lines are ignored.

use std::str::FromStr;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::Natural;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BFile {
    terms: Vec<(i64, BigInt)>,
}

impl BFile {
    /// Terms in file order.
    pub fn terms(&self) -> &[(i64, BigInt)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

impl FromStr for BFile {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut terms = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = || Error::Parse(format!("b-file line {}: expected `index value`, got `{line}`", lineno + 1));
            let mut fields = line.split_whitespace();
            let (Some(index), Some(value), None) = (fields.next(), fields.next(), fields.next()) else {
                return Err(bad());
            };
            let index: i64 = index.parse().map_err(|_| bad())?;
            let value: BigInt = value.parse().map_err(|_| bad())?;
            if let Some(&(last, _)) = terms.last() {
                if index <= last {
                    return Err(Error::Parse(format!("b-file line {}: index {index} is not increasing", lineno + 1)));
                }
            }
            terms.push((index, value));
        }
        Ok(BFile { terms })
    }
}

/// One compared term: b-file `index` maps to generator argument `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub index: i64,
    pub n: usize,
    pub expected: BigInt,
    pub generated: Natural,
}

impl Verdict {
    pub fn agree(&self) -> bool {
        BigInt::from(self.generated.clone()) == self.expected
    }
}

/// Compares b-file terms with `generate(index + offset)` for every term whose
/// shifted index lies in `min_n..=n_max`, stopping after the first mismatch.
pub fn compare(
    bfile: &BFile,
    offset: i64,
    min_n: usize,
    n_max: usize,
    mut generate: impl FnMut(usize) -> Result<Natural>,
) -> Result<Vec<Verdict>> {
    let mut out = Vec::new();
    for (index, expected) in &bfile.terms {
        let Some(n) = index.checked_add(offset).and_then(|n| usize::try_from(n).ok()) else { continue };
        if n < min_n || n > n_max {
            continue;
        }
        let verdict = Verdict { index: *index, n, expected: expected.clone(), generated: generate(n)? };
        let agree = verdict.agree();
        out.push(verdict);
        if !agree {
            break;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_blanks() {
        let b: BFile = "# A test\n\n0 1\n1 1\n2   3\n".parse().unwrap();
        assert_eq!(b.len(), 3);
        assert_eq!(b.terms()[2], (2, BigInt::from(3)));
    }

    #[test]
    fn rejects_malformed() {
        assert!("0 1 2\n".parse::<BFile>().is_err());
        assert!("x 1\n".parse::<BFile>().is_err());
        assert!("0\n".parse::<BFile>().is_err());
        assert!("1 1\n1 2\n".parse::<BFile>().is_err());
    }

    #[test]
    fn compare_applies_offset_and_stops() {
        let b: BFile = "0 1\n1 2\n2 4\n3 9\n4 16\n".parse().unwrap();
        let pow2 = |n: usize| Ok(Natural::from(1u32) << (n - 1));
        let v = compare(&b, 1, 1, 10, pow2).unwrap();
        assert_eq!(v.len(), 4);
        assert!(v[..3].iter().all(Verdict::agree));
        assert!(!v[3].agree());
        let v = compare(&b, 1, 1, 2, pow2).unwrap();
        assert_eq!(v.iter().map(|t| t.n).collect::<Vec<_>>(), [1, 2]);
    }
}
