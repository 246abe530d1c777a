//! Smooth complete toric surfaces given by 2D fans: Hirzebruch surfaces, their
//! equivariant blow-ups at torus-fixed points, intersection numbers, the
//! anticanonical class and ampleness on invariant curves.
//!
//! A divisor `Σ cᵢ Dᵢ` is stored by its coefficients on the ray divisors.
//! For adjacent rays `Dᵢ·Dᵢ₊₁ = 1`, non-adjacent distinct rays meet in 0, and
//! `Dᵢ² = −aᵢ` where `vᵢ₋₁ + vᵢ₊₁ = aᵢ vᵢ`.
//!
//! Hirzebruch `S_n` uses the rays `(1,0), (0,1), (−1,n), (0,−1)`. Then
//! `F = D₀ = D₂`, `D₁` is the negative section (`−n`), and `C = D₃ = D₁ + nF`,
//! so `C·C = n`, `F·F = 0`, `C·F = 1`. Blow-ups extend the named basis
//! `(C, F)` by total transforms of the exceptional curves `E₁, …, E_k`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact_lattice::{solve_unimodular, IntMatrix, IntVec, LatticeError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ToricError {
    #[error("a complete fan needs at least 3 rays, got {0}")]
    TooFewRays(usize),
    #[error("ray {0:?} is not primitive")]
    NotPrimitive([i64; 2]),
    #[error("rays {0} and {1} do not span a smooth counterclockwise cone")]
    NotSmooth(usize, usize),
    #[error("rays wind {0} times around the origin")]
    NotComplete(i64),
    #[error("corner {corner} does not index one of the {cones} cones")]
    BadCorner { corner: usize, cones: usize },
    #[error("ray coordinates overflow")]
    Overflow,
    #[error("class has {got} coefficients, expected {expected}")]
    WrongLength { expected: usize, got: usize },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

impl ToricError {
    pub fn kind(&self) -> &'static str {
        match self {
            ToricError::TooFewRays(_) => "TooFewRays",
            ToricError::NotPrimitive(_) => "NotPrimitive",
            ToricError::NotSmooth(..) => "NotSmooth",
            ToricError::NotComplete(_) => "NotComplete",
            ToricError::BadCorner { .. } => "BadCorner",
            ToricError::Overflow => "Overflow",
            ToricError::WrongLength { .. } => "WrongLength",
            ToricError::Lattice(e) => e.kind(),
        }
    }
}

fn det(a: [i64; 2], b: [i64; 2]) -> i128 {
    i128::from(a[0]) * i128::from(b[1]) - i128::from(a[1]) * i128::from(b[0])
}

fn gcd_i64(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a as i64
}

/// Complete smooth fan in `Z²` with rays listed counterclockwise.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "FanJson", into = "FanJson")]
pub struct Fan2D {
    rays: Vec<[i64; 2]>,
}

#[derive(Serialize, Deserialize)]
struct FanJson {
    rays: Vec<[i64; 2]>,
}

impl TryFrom<FanJson> for Fan2D {
    type Error = ToricError;

    fn try_from(j: FanJson) -> Result<Self, Self::Error> {
        Fan2D::new(j.rays)
    }
}

impl From<Fan2D> for FanJson {
    fn from(f: Fan2D) -> Self {
        FanJson { rays: f.rays }
    }
}

impl Fan2D {
    pub fn new(rays: Vec<[i64; 2]>) -> Result<Self, ToricError> {
        let r = rays.len();
        if r < 3 {
            return Err(ToricError::TooFewRays(r));
        }
        for &v in &rays {
            if gcd_i64(v[0], v[1]) != 1 {
                return Err(ToricError::NotPrimitive(v));
            }
        }
        for i in 0..r {
            let j = (i + 1) % r;
            if det(rays[i], rays[j]) != 1 {
                return Err(ToricError::NotSmooth(i, j));
            }
        }
        // Each cone is strictly convex and counterclockwise, so completeness
        // reduces to the cones covering the positive x-axis exactly once.
        let winding = (0..r)
            .filter(|&i| {
                let (a, b) = (rays[i], rays[(i + 1) % r]);
                // (1,0) in the half-open cone [a, b)
                let from_a = -i128::from(a[1]); // det(a, e1)
                let to_b = i128::from(b[1]); // det(e1, b)
                from_a >= 0 && to_b > 0 || (a[1] == 0 && a[0] > 0)
            })
            .count() as i64;
        if winding != 1 {
            return Err(ToricError::NotComplete(winding));
        }
        Ok(Fan2D { rays })
    }

    pub fn rays(&self) -> &[[i64; 2]] {
        &self.rays
    }

    pub fn len(&self) -> usize {
        self.rays.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rays.is_empty()
    }

    pub fn picard_rank(&self) -> usize {
        self.rays.len() - 2
    }

    /// `Dᵢ·Dᵢ` for every ray.
    pub fn self_intersections(&self) -> Vec<i64> {
        let r = self.rays.len();
        (0..r)
            .map(|i| {
                let prev = self.rays[(i + r - 1) % r];
                let next = self.rays[(i + 1) % r];
                let v = self.rays[i];
                let w = [prev[0] + next[0], prev[1] + next[1]];
                let a = if v[0] != 0 { w[0] / v[0] } else { w[1] / v[1] };
                -a
            })
            .collect()
    }

    /// Gram matrix of the ray divisors (degenerate: rank `r − 2`).
    pub fn ray_intersection_matrix(&self) -> IntMatrix {
        let r = self.rays.len();
        let selfs = self.self_intersections();
        let mut m = IntMatrix::zeros(r, r);
        for i in 0..r {
            m.set(i, i, BigInt::from(selfs[i]));
            let j = (i + 1) % r;
            m.set(i, j, BigInt::one());
            m.set(j, i, BigInt::one());
        }
        m
    }

    /// Intersection number of two classes given on the ray basis.
    pub fn pairing(&self, a: &IntVec, b: &IntVec) -> Result<BigInt, ToricError> {
        self.check_len(a)?;
        self.check_len(b)?;
        let g = self.ray_intersection_matrix();
        let gb = g.mul_vec(b)?;
        Ok(a.entries().iter().zip(&gb).map(|(x, y)| x * y).sum())
    }

    fn check_len(&self, v: &IntVec) -> Result<(), ToricError> {
        if v.len() != self.rays.len() {
            return Err(ToricError::WrongLength {
                expected: self.rays.len(),
                got: v.len(),
            });
        }
        Ok(())
    }

    /// Star subdivision of cone `(v_corner, v_corner+1)`; the new ray sits
    /// at index `corner + 1`.
    pub fn blow_up(&self, corner: usize) -> Result<Fan2D, ToricError> {
        let r = self.rays.len();
        if corner >= r {
            return Err(ToricError::BadCorner { corner, cones: r });
        }
        let a = self.rays[corner];
        let b = self.rays[(corner + 1) % r];
        let v = [
            a[0].checked_add(b[0]).ok_or(ToricError::Overflow)?,
            a[1].checked_add(b[1]).ok_or(ToricError::Overflow)?,
        ];
        let mut rays = self.rays.clone();
        rays.insert(corner + 1, v);
        Fan2D::new(rays)
    }

    /// Sum of all ray divisors, i.e. `−K`.
    pub fn anticanonical(&self) -> IntVec {
        IntVec::new(vec![BigInt::one(); self.rays.len()], "D").expect("nonempty fan")
    }
}

/// Hirzebruch surface `S_n = P(O ⊕ O(n))`.
pub fn hirzebruch_fan(n: u32) -> Fan2D {
    Fan2D::new(vec![[1, 0], [0, 1], [-1, i64::from(n)], [0, -1]]).expect("valid Hirzebruch fan")
}

/// Result of the Nakai test on torus-invariant curves.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AmpleCertificate {
    /// `(ray index, class·Dᵢ)` for every invariant curve.
    #[serde(serialize_with = "pairs")]
    pub pairings: Vec<(usize, BigInt)>,
    #[serde(serialize_with = "crate::json::big")]
    pub square: BigInt,
    pub ample: bool,
}

fn pairs<S: serde::Serializer>(p: &[(usize, BigInt)], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(p.len()))?;
    for (i, v) in p {
        seq.serialize_element(&(i, i64::try_from(v).map_err(serde::ser::Error::custom)?))?;
    }
    seq.end()
}

/// Ample iff the class meets every invariant curve positively and has positive
/// square. For toric surfaces the invariant curves suffice.
pub fn is_ample(fan: &Fan2D, class: &IntVec) -> Result<AmpleCertificate, ToricError> {
    fan.check_len(class)?;
    let g = fan.ray_intersection_matrix();
    let gc = g.mul_vec(class)?;
    let square: BigInt = class.entries().iter().zip(&gc).map(|(x, y)| x * y).sum();
    let pairings: Vec<(usize, BigInt)> = gc.into_iter().enumerate().collect();
    let ample = pairings.iter().all(|(_, p)| p.is_positive()) && square.is_positive();
    Ok(AmpleCertificate {
        pairings,
        square,
        ample,
    })
}

/// Signature `(positive, negative, zero)` of a symmetric integer matrix.
pub fn signature(m: &IntMatrix) -> (usize, usize, usize) {
    let n = m.rows();
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|r| m.row(r).iter().map(|x| BigRational::from_integer(x.clone())).collect())
        .collect();
    let (mut pos, mut neg, mut zero) = (0, 0, 0);
    for k in 0..n {
        if a[k][k].is_zero() {
            if let Some(j) = (k + 1..n).find(|&j| !a[j][j].is_zero()) {
                a.swap(k, j);
                for row in a.iter_mut() {
                    row.swap(k, j);
                }
            } else if let Some(j) = (k + 1..n).find(|&j| !a[k][j].is_zero()) {
                // congruence by e_k -> e_k + e_j makes the pivot 2·a_kj
                for c in 0..n {
                    let v = a[j][c].clone();
                    a[k][c] += v;
                }
                for row in a.iter_mut() {
                    let v = row[j].clone();
                    row[k] += v;
                }
            }
        }
        let p = a[k][k].clone();
        if p.is_zero() {
            zero += 1;
            continue;
        }
        if p.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        for i in k + 1..n {
            let f = &a[i][k] / &p;
            if f.is_zero() {
                continue;
            }
            for c in k..n {
                let v = &f * &a[k][c];
                a[i][c] -= v;
            }
        }
        for i in k + 1..n {
            a[k][i] = BigRational::zero();
        }
    }
    (pos, neg, zero)
}

/// A Hirzebruch surface blown up `k` times, carrying the named basis
/// `(C, F, E₁, …, E_k)` as classes on the ray basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToricSurface {
    n: u32,
    fan: Fan2D,
    basis: Vec<Vec<BigInt>>,
    labels: Vec<String>,
    /// Indices of the four original Hirzebruch rays in the current fan.
    original: [usize; 4],
}

impl ToricSurface {
    pub fn hirzebruch(n: u32) -> Self {
        let c = [0, 0, 0, 1].map(BigInt::from).to_vec();
        let f = [1, 0, 0, 0].map(BigInt::from).to_vec();
        ToricSurface {
            n,
            fan: hirzebruch_fan(n),
            basis: vec![c, f],
            labels: vec!["C".into(), "F".into()],
            original: [0, 1, 2, 3],
        }
    }

    /// `k` blow-ups: first at the four torus-fixed points of `S_n` in turn,
    /// then repeatedly at corner 0.
    pub fn blown_up_hirzebruch(n: u32, k: usize) -> Self {
        let mut s = Self::hirzebruch(n);
        for j in 0..k {
            let corner = if j < 4 { s.original[j] } else { 0 };
            s = s.blow_up(corner).expect("corner index in range");
        }
        s
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn fan(&self) -> &Fan2D {
        &self.fan
    }

    pub fn exceptional_count(&self) -> usize {
        self.basis.len() - 2
    }

    pub fn basis_labels(&self) -> &[String] {
        &self.labels
    }

    pub fn blow_up(&self, corner: usize) -> Result<ToricSurface, ToricError> {
        let fan = self.fan.blow_up(corner)?;
        let r = self.fan.len();
        let pull = |c: &Vec<BigInt>| {
            let mut out = c.clone();
            let extra = &c[corner] + &c[(corner + 1) % r];
            out.insert(corner + 1, extra);
            out
        };
        let mut basis: Vec<Vec<BigInt>> = self.basis.iter().map(pull).collect();
        let mut e = vec![BigInt::zero(); r + 1];
        e[corner + 1] = BigInt::one();
        basis.push(e);
        let mut labels = self.labels.clone();
        labels.push(format!("E{}", self.exceptional_count() + 1));
        let original = self.original.map(|i| if i > corner { i + 1 } else { i });
        Ok(ToricSurface {
            n: self.n,
            fan,
            basis,
            labels,
            original,
        })
    }

    /// Gram matrix of the named basis `(C, F, E₁, …)`.
    pub fn intersection_matrix(&self) -> IntMatrix {
        let g = self.fan.ray_intersection_matrix();
        let m = self.basis.len();
        let mut out = IntMatrix::zeros(m, m);
        for i in 0..m {
            let gi = g
                .mul_vec(&IntVec::new(self.basis[i].clone(), "D").expect("nonempty"))
                .expect("sizes agree");
            for j in 0..m {
                let v: BigInt = gi.iter().zip(&self.basis[j]).map(|(a, b)| a * b).sum();
                out.set(i, j, v);
            }
        }
        out
    }

    /// Ray-basis class of a named-basis coefficient vector.
    pub fn from_named(&self, coeffs: &IntVec) -> Result<IntVec, ToricError> {
        if coeffs.len() != self.basis.len() {
            return Err(ToricError::WrongLength {
                expected: self.basis.len(),
                got: coeffs.len(),
            });
        }
        let r = self.fan.len();
        let mut out = vec![BigInt::zero(); r];
        for (c, b) in coeffs.entries().iter().zip(&self.basis) {
            for (o, x) in out.iter_mut().zip(b) {
                *o += c * x;
            }
        }
        Ok(IntVec::new(out, "D")?)
    }

    /// Named-basis coordinates of a ray-basis class (solves against the
    /// unimodular Gram matrix).
    pub fn to_named(&self, class: &IntVec) -> Result<IntVec, ToricError> {
        self.fan.check_len(class)?;
        let g = self.fan.ray_intersection_matrix();
        let gc = g.mul_vec(class)?;
        let rhs: Vec<BigInt> = self
            .basis
            .iter()
            .map(|b| b.iter().zip(&gc).map(|(x, y)| x * y).sum())
            .collect();
        let x = solve_unimodular(&self.intersection_matrix(), &rhs)?;
        Ok(IntVec::new(x, "CFE")?)
    }

    pub fn anticanonical(&self) -> DivisorClass {
        let rays = self.fan.anticanonical();
        let named = self.to_named(&rays).ok();
        DivisorClass { rays, named }
    }

    /// Kähler class `l₁C + l₂F − Σ l_{i+2}Eᵢ` (exceptional coefficients enter
    /// with a minus sign so that positive entries give positive classes).
    pub fn kahler_class(&self, l: &[i64]) -> Result<IntVec, ToricError> {
        if l.len() != self.basis.len() {
            return Err(ToricError::WrongLength {
                expected: self.basis.len(),
                got: l.len(),
            });
        }
        let signed: Vec<i64> = l
            .iter()
            .enumerate()
            .map(|(i, &x)| if i >= 2 { -x } else { x })
            .collect();
        self.from_named(&IntVec::from_i64(&signed, "CFE")?)
    }
}

/// A divisor class on the ray basis with its named-basis expression when known.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisorClass {
    pub rays: IntVec,
    pub named: Option<IntVec>,
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.named {
            Some(n) => write!(f, "{} = {}", self.rays, n),
            None => write!(f, "{}", self.rays),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn hirzebruch_basics() {
        let f0 = hirzebruch_fan(0);
        assert_eq!(f0.self_intersections(), vec![0, 0, 0, 0]);
        let f1 = hirzebruch_fan(1);
        assert_eq!(f1.self_intersections().iter().filter(|&&x| x == -1).count(), 1);
        for n in 0..6 {
            let s = ToricSurface::hirzebruch(n);
            assert_eq!(
                s.intersection_matrix(),
                IntMatrix::from_rows(&[vec![i64::from(n), 1], vec![1, 0]]).unwrap()
            );
        }
    }

    #[test]
    fn fan_validation() {
        assert_eq!(Fan2D::new(vec![[1, 0], [0, 1]]).unwrap_err(), ToricError::TooFewRays(2));
        assert_eq!(
            Fan2D::new(vec![[2, 0], [0, 1], [-1, -1]]).unwrap_err(),
            ToricError::NotPrimitive([2, 0])
        );
        assert!(matches!(
            Fan2D::new(vec![[1, 0], [-1, 2], [0, -1]]),
            Err(ToricError::NotSmooth(..))
        ));
        // P² is fine
        assert!(Fan2D::new(vec![[1, 0], [0, 1], [-1, -1]]).is_ok());
        // twice around: every cone smooth but winding 2
        let twice = vec![
            [1, 0], [0, 1], [-1, 0], [0, -1],
            [1, 0], [0, 1], [-1, 0], [0, -1],
        ];
        assert_eq!(Fan2D::new(twice).unwrap_err(), ToricError::NotComplete(2));
    }

    #[test]
    fn blow_up_shapes() {
        let f = hirzebruch_fan(0).blow_up(2).unwrap();
        assert_eq!(f.len(), 5);
        assert_eq!(f.picard_rank(), 3);
        assert_eq!(f.self_intersections()[3], -1);
        assert_eq!(
            hirzebruch_fan(0).blow_up(4).unwrap_err(),
            ToricError::BadCorner { corner: 4, cones: 4 }
        );
        // the wrap-around cone (last ray, first ray)
        let g = hirzebruch_fan(2).blow_up(3).unwrap();
        assert_eq!(g.rays()[4], [1, -1]);
        assert_eq!(g.self_intersections()[4], -1);
    }

    #[test]
    fn adjacent_self_intersections_drop() {
        let f = hirzebruch_fan(3);
        let before = f.self_intersections();
        let g = f.blow_up(1).unwrap();
        let after = g.self_intersections();
        assert_eq!(after[1], before[1] - 1);
        assert_eq!(after[3], before[2] - 1);
        assert_eq!(after[2], -1);
    }

    #[test]
    fn anticanonical_named() {
        for n in 0..5u32 {
            let s = ToricSurface::hirzebruch(n);
            let k = s.anticanonical().named.unwrap();
            assert_eq!(k.entries(), &[big(2), big(2 - i64::from(n))]);
        }
        let s = ToricSurface::blown_up_hirzebruch(1, 3);
        let k = s.anticanonical().named.unwrap();
        assert_eq!(k.entries(), &[big(2), big(1), big(-1), big(-1), big(-1)]);
    }

    #[test]
    fn ampleness_on_hirzebruch() {
        let s = ToricSurface::hirzebruch(2);
        let yes = s.kahler_class(&[1, 1]).unwrap();
        assert!(is_ample(s.fan(), &yes).unwrap().ample);
        let edge = s.kahler_class(&[0, 3]).unwrap();
        let cert = is_ample(s.fan(), &edge).unwrap();
        assert!(!cert.ample);
        assert!(cert.pairings.iter().any(|(_, p)| p.is_zero()));
    }

    #[test]
    fn signature_examples() {
        let h = IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(signature(&h), (1, 1, 0));
        let s = ToricSurface::blown_up_hirzebruch(3, 2);
        assert_eq!(signature(&s.intersection_matrix()), (1, 3, 0));
        assert_eq!(signature(&s.fan().ray_intersection_matrix()), (1, 3, 2));
    }

    #[test]
    fn named_round_trip() {
        let s = ToricSurface::blown_up_hirzebruch(2, 3);
        let x = IntVec::from_i64(&[3, -2, 5, 0, 1], "CFE").unwrap();
        let rays = s.from_named(&x).unwrap();
        assert_eq!(s.to_named(&rays).unwrap().entries(), x.entries());
    }

    #[test]
    fn fan_json() {
        let f = hirzebruch_fan(1);
        let j = serde_json::to_string(&f).unwrap();
        assert_eq!(j, r#"{"rays":[[1,0],[0,1],[-1,1],[0,-1]]}"#);
        let back: Fan2D = serde_json::from_str(&j).unwrap();
        assert_eq!(back, f);
        assert!(serde_json::from_str::<Fan2D>(r#"{"rays":[[1,0],[0,1]]}"#).is_err());
    }
}
