//! Number encoding shared by spec and report files.
//!
//! Reals are written in scientific notation with 17 significant digits,
//! which round-trips every `f64` exactly, so re-serializing a parsed report
//! reproduces it byte for byte. Non-finite values are written as `null` and
//! read back as NaN. Complex numbers are `[re, im]` pairs.

use std::fmt;
use std::str::FromStr;

use ergochan::{Complex64, Matrix};
use serde::de::Error as _;
use serde::ser::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{CliError, Result};

/// A real number with the fixed 17-digit encoding.
#[derive(Clone, Copy, Debug, Default)]
pub struct Num(pub f64);

impl PartialEq for Num {
    /// Bitwise equality, except that all NaNs are equal (they share the
    /// `null` encoding).
    fn eq(&self, other: &Self) -> bool {
        (self.0.is_nan() && other.0.is_nan()) || self.0.to_bits() == other.0.to_bits()
    }
}

impl fmt::Display for Num {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.16e}", self.0)
    }
}

impl From<f64> for Num {
    fn from(x: f64) -> Self {
        Num(x)
    }
}

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return s.serialize_none();
        }
        serde_json::Number::from_str(&self.to_string())
            .map_err(S::Error::custom)?
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Num {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match Option::<serde_json::Number>::deserialize(d)? {
            None => Ok(Num(f64::NAN)),
            Some(n) => n
                .as_f64()
                .map(Num)
                .ok_or_else(|| D::Error::custom(format!("number {n} is not representable as f64"))),
        }
    }
}

/// `[re, im]`.
pub type Pair = [Num; 2];

/// Rows of `[re, im]` pairs.
pub type MatrixJson = Vec<Vec<Pair>>;

pub fn pair(z: Complex64) -> Pair {
    [Num(z.re), Num(z.im)]
}

pub fn nums(xs: &[f64]) -> Vec<Num> {
    xs.iter().copied().map(Num).collect()
}

pub fn matrix_to_json(m: &Matrix) -> MatrixJson {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| pair(m[(i, j)])).collect())
        .collect()
}

/// Validate a nested `[re, im]` array as a `dim × dim` matrix. `what` names
/// the matrix in error messages.
pub fn matrix_from_json(m: &MatrixJson, dim: usize, what: &str) -> Result<Matrix> {
    if m.len() != dim {
        return Err(CliError::Validation(format!("{what} has {} rows, expected {dim}", m.len())));
    }
    let mut entries = Vec::with_capacity(dim * dim);
    for (i, row) in m.iter().enumerate() {
        if row.len() != dim {
            return Err(CliError::Validation(format!(
                "{what} row {i} has {} entries, expected {dim}",
                row.len()
            )));
        }
        for (j, [re, im]) in row.iter().enumerate() {
            if !re.0.is_finite() || !im.0.is_finite() {
                return Err(CliError::Validation(format!("{what} entry ({i}, {j}) is not finite")));
            }
            entries.push(Complex64::new(re.0, im.0));
        }
    }
    Ok(Matrix::from_row_major(dim, dim, entries)?)
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types always serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits_round_trip() {
        for x in [0.1, -0.0, 1.0 / 3.0, 1e-300, 6.02214076e23, f64::MIN_POSITIVE, 5e-324] {
            let s = serde_json::to_string(&Num(x)).unwrap();
            let back: Num = serde_json::from_str(&s).unwrap();
            assert_eq!(back.0.to_bits(), x.to_bits(), "{s}");
            assert_eq!(serde_json::to_string(&back).unwrap(), s);
        }
        assert_eq!(serde_json::to_string(&Num(0.5)).unwrap(), "5.0000000000000000e-1");
    }

    #[test]
    fn non_finite_is_null() {
        assert_eq!(serde_json::to_string(&Num(f64::INFINITY)).unwrap(), "null");
        let back: Num = serde_json::from_str("null").unwrap();
        assert!(back.0.is_nan());
        assert_eq!(back, Num(f64::NAN));
    }

    #[test]
    fn integers_and_plain_decimals_parse() {
        let m: MatrixJson = serde_json::from_str("[[[1, 0], [0.5, -2]], [[0, 0], [1e0, 0]]]").unwrap();
        let mat = matrix_from_json(&m, 2, "test").unwrap();
        assert_eq!(mat[(0, 1)], Complex64::new(0.5, -2.0));
        assert!(matrix_from_json(&m, 3, "test").is_err());
    }
}
