//! Tridiagonal and bidiagonal matrix value types.
//!
//! Storage is top-to-bottom: index 0 is the top-left entry. Subdiagonal
//! entry `subdiag[j]` sits at position (j+1, j).

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Real symmetric tridiagonal matrix with nonnegative subdiagonal.
///
/// Sign flips of subdiagonal entries are diagonal similarities, so requiring
/// `b_j >= 0` loses no spectral information; a zero entry marks a reducible
/// (degenerate) matrix, which samplers produce with probability zero.
#[derive(Clone, Debug, PartialEq)]
pub struct TridiagonalSym {
    diag: Vec<f64>,
    subdiag: Vec<f64>,
}

impl TridiagonalSym {
    pub fn new(diag: Vec<f64>, subdiag: Vec<f64>) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::InvalidParameter("empty diagonal".into()));
        }
        if subdiag.len() + 1 != diag.len() {
            return Err(Error::InvalidParameter(format!(
                "subdiagonal length {} does not match order {}",
                subdiag.len(),
                diag.len()
            )));
        }
        if diag.iter().chain(subdiag.iter()).any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("tridiagonal entry"));
        }
        if subdiag.iter().any(|&b| b < 0.0) {
            return Err(Error::InvalidParameter(
                "subdiagonal entries must be nonnegative".into(),
            ));
        }
        Ok(Self { diag, subdiag })
    }

    pub fn n(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn subdiag(&self) -> &[f64] {
        &self.subdiag
    }

    /// True if any subdiagonal entry vanishes (matrix reducible).
    pub fn is_degenerate(&self) -> bool {
        self.subdiag.iter().any(|&b| b == 0.0)
    }

    pub fn trace(&self) -> f64 {
        self.diag.iter().sum()
    }

    pub fn frobenius_norm_sq(&self) -> f64 {
        let d: f64 = self.diag.iter().map(|x| x * x).sum();
        let b: f64 = self.subdiag.iter().map(|x| x * x).sum();
        d + 2.0 * b
    }

    /// Infinity-norm bound from Gershgorin rows; also bounds |λ|.
    pub fn norm_bound(&self) -> f64 {
        let n = self.n();
        let mut best: f64 = 0.0;
        for i in 0..n {
            let left = if i > 0 { self.subdiag[i - 1].abs() } else { 0.0 };
            let right = if i + 1 < n { self.subdiag[i].abs() } else { 0.0 };
            best = best.max(self.diag[i].abs() + left + right);
        }
        best
    }

    /// Gershgorin interval [lo, hi] containing every eigenvalue.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.n();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let left = if i > 0 { self.subdiag[i - 1].abs() } else { 0.0 };
            let right = if i + 1 < n { self.subdiag[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - left - right);
            hi = hi.max(self.diag[i] + left + right);
        }
        (lo, hi)
    }

    /// Determinant through the leading-minor recurrence
    /// `M_k = d_{k-1} M_{k-1} - b_{k-2}^2 M_{k-2}`.
    pub fn determinant(&self) -> f64 {
        let n = self.n();
        let mut prev = 1.0;
        let mut cur = self.diag[0];
        for k in 1..n {
            let next = self.diag[k] * cur - self.subdiag[k - 1] * self.subdiag[k - 1] * prev;
            prev = cur;
            cur = next;
        }
        cur
    }

    pub fn to_record(&self) -> MatrixRecord {
        MatrixRecord::Tridiagonal {
            diag: self.diag.clone(),
            subdiag: self.subdiag.clone(),
        }
    }
}

/// Lower bidiagonal matrix with positive entries: the β-Laguerre factor.
#[derive(Clone, Debug, PartialEq)]
pub struct BidiagonalPos {
    diag: Vec<f64>,
    subdiag: Vec<f64>,
}

impl BidiagonalPos {
    pub fn new(diag: Vec<f64>, subdiag: Vec<f64>) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::InvalidParameter("empty diagonal".into()));
        }
        if subdiag.len() + 1 != diag.len() {
            return Err(Error::InvalidParameter(format!(
                "subdiagonal length {} does not match order {}",
                subdiag.len(),
                diag.len()
            )));
        }
        if diag.iter().chain(subdiag.iter()).any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("bidiagonal entry"));
        }
        if diag.iter().chain(subdiag.iter()).any(|&x| x < 0.0) {
            return Err(Error::InvalidParameter(
                "bidiagonal entries must be nonnegative".into(),
            ));
        }
        Ok(Self { diag, subdiag })
    }

    pub fn m(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn subdiag(&self) -> &[f64] {
        &self.subdiag
    }

    /// True if any entry vanishes (rank-deficient factor).
    pub fn is_degenerate(&self) -> bool {
        self.diag
            .iter()
            .chain(self.subdiag.iter())
            .any(|&x| x == 0.0)
    }

    pub fn to_record(&self) -> MatrixRecord {
        MatrixRecord::Bidiagonal {
            diag: self.diag.clone(),
            subdiag: self.subdiag.clone(),
        }
    }
}

/// Serialized matrix form shared with the CLI.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum MatrixRecord {
    Tridiagonal { diag: Vec<f64>, subdiag: Vec<f64> },
    Bidiagonal { diag: Vec<f64>, subdiag: Vec<f64> },
}

impl MatrixRecord {
    pub fn into_tridiagonal(self) -> Result<TridiagonalSym> {
        match self {
            MatrixRecord::Tridiagonal { diag, subdiag } => TridiagonalSym::new(diag, subdiag),
            MatrixRecord::Bidiagonal { .. } => Err(Error::InvalidParameter(
                "expected a tridiagonal record".into(),
            )),
        }
    }

    pub fn into_bidiagonal(self) -> Result<BidiagonalPos> {
        match self {
            MatrixRecord::Bidiagonal { diag, subdiag } => BidiagonalPos::new(diag, subdiag),
            MatrixRecord::Tridiagonal { .. } => Err(Error::InvalidParameter(
                "expected a bidiagonal record".into(),
            )),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constructors_validate() {
        assert!(TridiagonalSym::new(vec![], vec![]).is_err());
        assert!(TridiagonalSym::new(vec![1.0, 2.0], vec![]).is_err());
        assert!(TridiagonalSym::new(vec![1.0, 2.0], vec![-0.5]).is_err());
        assert!(TridiagonalSym::new(vec![1.0, f64::NAN], vec![0.5]).is_err());
        let t = TridiagonalSym::new(vec![1.0, 2.0], vec![0.5]).unwrap();
        assert_eq!(t.n(), 2);
        assert!(!t.is_degenerate());
        let z = TridiagonalSym::new(vec![1.0, 2.0], vec![0.0]).unwrap();
        assert!(z.is_degenerate());
    }

    #[test]
    fn determinant_small_cases() {
        let t = TridiagonalSym::new(vec![3.0], vec![]).unwrap();
        assert_eq!(t.determinant(), 3.0);
        let t = TridiagonalSym::new(vec![0.0, 0.0], vec![1.0]).unwrap();
        assert_eq!(t.determinant(), -1.0);
        let t = TridiagonalSym::new(vec![2.0, 2.0, 2.0], vec![1.0, 1.0]).unwrap();
        // det = 2*(2*2-1) - 1*2 = 4
        assert_eq!(t.determinant(), 4.0);
    }

    #[test]
    fn json_schema_round_trip() {
        let t = TridiagonalSym::new(vec![0.25, -1.0], vec![2.0]).unwrap();
        let json = serde_json::to_string(&t.to_record()).unwrap();
        assert_eq!(
            json,
            r#"{"kind":"tridiagonal","diag":[0.25,-1.0],"subdiag":[2.0]}"#
        );
        let back: MatrixRecord = serde_json::from_str(&json).unwrap();
        assert_eq!(back.into_tridiagonal().unwrap(), t);

        let b = BidiagonalPos::new(vec![1.5, 2.5], vec![0.5]).unwrap();
        let json = serde_json::to_string(&b.to_record()).unwrap();
        assert_eq!(
            json,
            r#"{"kind":"bidiagonal","diag":[1.5,2.5],"subdiag":[0.5]}"#
        );
        let back: MatrixRecord = serde_json::from_str(&json).unwrap();
        assert_eq!(back.into_bidiagonal().unwrap(), b);
    }
}
