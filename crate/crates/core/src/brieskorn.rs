//! Fano index of Brieskorn–Pham links `z₀^{a₀}+z₁^{a₁}+z₂^{a₂}+z₃^{a₃} = 0`
//! and their joins with the round `S³`.

use std::collections::BTreeMap;
use std::fmt;
use std::io::BufRead;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BrieskornError {
    #[error("exponents must be at least 1, got {0:?}")]
    BadExponent([u64; 4]),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("Fano index {0} is not positive")]
    NonPositiveIndex(BigInt),
    #[error("order must be positive")]
    ZeroOrder,
    #[error("io error: {0}")]
    Io(String),
}

impl BrieskornError {
    pub fn kind(&self) -> &'static str {
        match self {
            BrieskornError::BadExponent(_) => "BadExponent",
            BrieskornError::Parse { .. } => "ParseError",
            BrieskornError::NonPositiveIndex(_) => "NonPositiveIndex",
            BrieskornError::ZeroOrder => "ZeroOrder",
            BrieskornError::Io(_) => "Io",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ExponentVector([u64; 4]);

impl ExponentVector {
    pub fn new(a: [u64; 4]) -> Result<Self, BrieskornError> {
        if a.contains(&0) {
            return Err(BrieskornError::BadExponent(a));
        }
        Ok(ExponentVector(a))
    }

    pub fn exponents(&self) -> [u64; 4] {
        self.0
    }

    pub fn lcm(&self) -> BigInt {
        self.0
            .iter()
            .fold(BigInt::one(), |acc, &a| acc.lcm(&BigInt::from(a)))
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.0;
        write!(f, "({a},{b},{c},{d})")
    }
}

impl FromStr for ExponentVector {
    type Err = String;

    /// Four positive integers separated by commas and/or whitespace.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .collect();
        if parts.len() != 4 {
            return Err(format!("expected 4 exponents, found {}", parts.len()));
        }
        let mut a = [0u64; 4];
        for (slot, p) in a.iter_mut().zip(&parts) {
            *slot = p
                .parse()
                .map_err(|_| format!("{p:?} is not a positive integer"))?;
        }
        ExponentVector::new(a).map_err(|e| e.to_string())
    }
}

/// `I = lcm(a)·(Σ 1/aᵢ − 1)`, evaluated in exact rationals.
pub fn fano_index(a: &ExponentVector) -> BigInt {
    let lcm = BigRational::from_integer(a.lcm());
    let sum: BigRational = a
        .0
        .iter()
        .map(|&x| BigRational::new(BigInt::one(), BigInt::from(x)))
        .sum();
    let value = lcm * (sum - BigRational::one());
    debug_assert!(value.is_integer());
    value.to_integer()
}

/// Same quantity as `Σ lcm/aᵢ − lcm`, using only integer division.
pub fn fano_index_integral(a: &ExponentVector) -> BigInt {
    let lcm = a.lcm();
    let sum: BigInt = a.0.iter().map(|&x| &lcm / BigInt::from(x)).sum();
    sum - lcm
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct S3JoinReport {
    pub exponents: ExponentVector,
    #[serde(serialize_with = "crate::json::big")]
    pub index_i: BigInt,
    /// Relative indices `(l₁, l₂)` of `S³` (index 2) against the link.
    #[serde(serialize_with = "crate::json::big_pair")]
    pub weights: (BigInt, BigInt),
    pub order_v2: u64,
    /// `gcd(l₂, υ₂) ≠ 1`: the join is only an orbifold.
    pub orbifold_only: bool,
    /// Lens space `L⁵(l₂)`.
    pub fibre: String,
    pub base: String,
    /// Order of `H⁴`, which is cyclic `Z_{l₂}`.
    #[serde(serialize_with = "crate::json::big")]
    pub h4_torsion: BigInt,
    pub homeo_s2xs5: bool,
}

/// Join `S³ ⋆_{l₁,l₂} S⁵_w` at the relative indices. A lens-space bundle over
/// `S²`; homeomorphic to `S² × S⁵` exactly when `l₂ = 1`.
pub fn s3_join(a: &ExponentVector, order_v2: u64) -> Result<S3JoinReport, BrieskornError> {
    if order_v2 == 0 {
        return Err(BrieskornError::ZeroOrder);
    }
    let index = fano_index(a);
    if !index.is_positive() {
        return Err(BrieskornError::NonPositiveIndex(index));
    }
    let g = if index.is_even() { 2u64 } else { 1 };
    let l1 = BigInt::from(2 / g);
    let l2 = &index / BigInt::from(g);
    let orbifold_only = !l2.gcd(&BigInt::from(order_v2)).is_one();
    Ok(S3JoinReport {
        exponents: *a,
        index_i: index,
        fibre: format!("L5({l2})"),
        base: "S2".into(),
        homeo_s2xs5: l2.is_one(),
        h4_torsion: l2.clone(),
        weights: (l1, l2),
        order_v2,
        orbifold_only,
    })
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Census {
    pub total: usize,
    /// Index value -> number of exponent vectors with that index.
    #[serde(serialize_with = "crate::json::big_keyed_map")]
    pub counts: BTreeMap<BigInt, usize>,
    /// Vectors whose index is not positive.
    pub non_fano: usize,
}

impl Census {
    pub fn count(&self, index: i64) -> usize {
        self.counts.get(&BigInt::from(index)).copied().unwrap_or(0)
    }
}

/// One exponent vector per line (`a0 a1 a2 a3`, commas allowed); `#` starts a
/// comment and blank lines are skipped.
pub fn parse_exponent_file<R: BufRead>(reader: R) -> Result<Vec<ExponentVector>, BrieskornError> {
    let mut out = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| BrieskornError::Io(e.to_string()))?;
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let v = body.parse().map_err(|message| BrieskornError::Parse {
            line: idx + 1,
            message,
        })?;
        out.push(v);
    }
    Ok(out)
}

pub fn batch_index_census<R: BufRead>(reader: R) -> Result<Census, BrieskornError> {
    let vectors = parse_exponent_file(reader)?;
    Ok(census_of(&vectors))
}

pub fn census_of(vectors: &[ExponentVector]) -> Census {
    let indices: Vec<BigInt> = vectors.par_iter().map(fano_index).collect();
    let mut census = Census {
        total: vectors.len(),
        ..Census::default()
    };
    for i in indices {
        if !i.is_positive() {
            census.non_fano += 1;
        }
        *census.counts.entry(i).or_insert(0) += 1;
    }
    census
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(a: [u64; 4]) -> ExponentVector {
        ExponentVector::new(a).unwrap()
    }

    #[test]
    fn known_indices() {
        assert_eq!(fano_index(&ev([2, 3, 7, 35])), BigInt::from(1));
        assert_eq!(fano_index(&ev([1, 1, 1, 1])), BigInt::from(3));
        assert_eq!(fano_index(&ev([2, 2, 2, 2])), BigInt::from(2));
        // lcm 210, Σ 210/aᵢ = 105+70+42+30 = 247 -> 37; hand check of the integral route
        assert_eq!(fano_index_integral(&ev([2, 3, 5, 7])), BigInt::from(37));
        assert_eq!(fano_index(&ev([2, 3, 5, 7])), BigInt::from(37));
    }

    #[test]
    fn non_positive_index() {
        // lcm 42, Σ = 21+14+6+1 = 42 -> 0
        let a = ev([2, 3, 7, 42]);
        assert_eq!(fano_index(&a), BigInt::from(0));
        assert_eq!(
            s3_join(&a, 1).unwrap_err(),
            BrieskornError::NonPositiveIndex(BigInt::from(0))
        );
        assert_eq!(fano_index(&ev([3, 3, 3, 3])), BigInt::from(1));
        assert!(fano_index(&ev([5, 5, 5, 5])).is_negative());
    }

    #[test]
    fn s3_join_cases() {
        let r = s3_join(&ev([2, 3, 7, 35]), 35).unwrap();
        assert_eq!(r.weights, (BigInt::from(2), BigInt::from(1)));
        assert!(r.homeo_s2xs5);
        assert!(!r.orbifold_only);
        let r = s3_join(&ev([2, 2, 2, 2]), 1).unwrap();
        assert_eq!(r.weights, (BigInt::from(1), BigInt::from(1)));
        assert!(r.homeo_s2xs5);
        let r = s3_join(&ev([1, 1, 1, 1]), 1).unwrap();
        assert_eq!(r.weights, (BigInt::from(2), BigInt::from(3)));
        assert_eq!(r.fibre, "L5(3)");
        assert_eq!(r.h4_torsion, BigInt::from(3));
        assert!(!r.homeo_s2xs5);
        assert!(s3_join(&ev([1, 1, 1, 1]), 6).unwrap().orbifold_only);
        assert_eq!(s3_join(&ev([1, 1, 1, 1]), 0).unwrap_err(), BrieskornError::ZeroOrder);
    }

    #[test]
    fn parsing() {
        assert_eq!("2,3,7,35".parse::<ExponentVector>().unwrap(), ev([2, 3, 7, 35]));
        assert_eq!(" 2 3  7 35 ".parse::<ExponentVector>().unwrap(), ev([2, 3, 7, 35]));
        assert!("2,3,7".parse::<ExponentVector>().is_err());
        assert!("2,3,0,5".parse::<ExponentVector>().is_err());
        assert!("2,x,7,5".parse::<ExponentVector>().is_err());
    }

    #[test]
    fn census_basic() {
        let c = batch_index_census("# header\n2 3 7 35\n\n".as_bytes()).unwrap();
        assert_eq!(c.total, 1);
        assert_eq!(c.count(1), 1);
        let c = batch_index_census("".as_bytes()).unwrap();
        assert_eq!(c.total, 0);
        assert!(c.counts.is_empty());
        let err = batch_index_census("2 3 7 35\n1 2 three 4\n".as_bytes()).unwrap_err();
        assert!(matches!(err, BrieskornError::Parse { line: 2, .. }));
    }
}
