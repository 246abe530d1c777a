//! Simply connected closed oriented 5-manifolds, named from `(H₂, i(M))`.
//!
//! `H₂` is kept in prime-power normal form `Z^k ⊕ ⊕ (Z_{p^i})^{c(p^i)}`. The
//! Barden invariant `i(M)` is `0` for spin manifolds, `∞` when `w₂` is nonzero
//! on an element of infinite order only, and otherwise the smallest `j` such
//! that `w₂` is nonzero on some element of order `2^j`.
//!
//! Every such manifold is `X_j # M_{k₁} # ⋯ # M_{k_s}` with `k₁ > 1` and
//! `kᵢ | kᵢ₊₁` (or `kᵢ₊₁ = ∞`). The building blocks:
//!
//! | name               | H₂                  | i  |
//! |--------------------|---------------------|----|
//! | X₋₁ = SU(3)/SO(3)  | Z₂                  | 1  |
//! | X₀ = M₀ = S⁵       | 0                   | 0  |
//! | X_j, 0 < j < ∞     | Z_{2^j} ⊕ Z_{2^j}   | j  |
//! | X_∞                | Z                   | ∞  |
//! | M_k, 0 < k < ∞     | Z_k ⊕ Z_k           | 0  |
//! | M_∞ = S²×S³        | Z                   | 0  |

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("prime-power exponents and multiplicities must be at least 1")]
    ZeroExponent,
    #[error("torsion order overflows 64 bits")]
    Overflow,
    #[error("Barden invariant {0} is not admissible for this H2")]
    InvalidBardenInvariant(BardenInvariant),
    #[error("H2 torsion {0} is not of the form Z2^(0|1) + A + A required of a simply connected 5-manifold")]
    NotRealizable(String),
    #[error("cannot parse manifold name {0:?}")]
    BadName(String),
    #[error("cyclic order must be at least 1, got {0}")]
    BadCyclicOrder(u64),
}

impl ClassifyError {
    pub fn kind(&self) -> &'static str {
        match self {
            ClassifyError::NotPrime(_) => "NotPrime",
            ClassifyError::ZeroExponent => "ZeroExponent",
            ClassifyError::Overflow => "Overflow",
            ClassifyError::InvalidBardenInvariant(_) => "InvalidBardenInvariant",
            ClassifyError::NotRealizable(_) => "NotRealizable",
            ClassifyError::BadName(_) => "BadName",
            ClassifyError::BadCyclicOrder(_) => "BadCyclicOrder",
        }
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factorisation by trial division, primes ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Finitely generated abelian group `Z^rank ⊕ ⊕ (Z_{p^i})^{c}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct FinAbGroup {
    rank: u32,
    // (p, i) -> c, ordered by p then i
    torsion: BTreeMap<(u64, u32), u32>,
}

impl FinAbGroup {
    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn free(rank: u32) -> Self {
        FinAbGroup {
            rank,
            torsion: BTreeMap::new(),
        }
    }

    /// From `(p, i, c)` triples; repeated `(p, i)` pairs accumulate.
    pub fn new(rank: u32, parts: &[(u64, u32, u32)]) -> Result<Self, ClassifyError> {
        let mut torsion = BTreeMap::new();
        for &(p, i, c) in parts {
            if !is_prime(p) {
                return Err(ClassifyError::NotPrime(p));
            }
            if i == 0 || c == 0 {
                return Err(ClassifyError::ZeroExponent);
            }
            p.checked_pow(i).ok_or(ClassifyError::Overflow)?;
            *torsion.entry((p, i)).or_insert(0) += c;
        }
        Ok(FinAbGroup { rank, torsion })
    }

    /// From the orders of arbitrary cyclic summands (order 1 summands vanish).
    pub fn from_cyclic_orders(rank: u32, orders: &[u64]) -> Result<Self, ClassifyError> {
        let mut parts = Vec::new();
        for &n in orders {
            if n == 0 {
                return Err(ClassifyError::BadCyclicOrder(0));
            }
            for (p, e) in factorize(n) {
                parts.push((p, e, 1));
            }
        }
        Self::new(rank, &parts)
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    /// `(p, i, c(p^i))` in canonical order.
    pub fn torsion(&self) -> Vec<(u64, u32, u32)> {
        self.torsion.iter().map(|(&(p, i), &c)| (p, i, c)).collect()
    }

    pub fn multiplicity(&self, p: u64, i: u32) -> u32 {
        self.torsion.get(&(p, i)).copied().unwrap_or(0)
    }

    pub fn is_torsion_free(&self) -> bool {
        self.torsion.is_empty()
    }

    pub fn has_two_torsion(&self) -> bool {
        self.torsion.keys().any(|&(p, _)| p == 2)
    }

    pub fn direct_sum(&self, other: &FinAbGroup) -> FinAbGroup {
        let mut torsion = self.torsion.clone();
        for (&k, &c) in &other.torsion {
            *torsion.entry(k).or_insert(0) += c;
        }
        FinAbGroup {
            rank: self.rank + other.rank,
            torsion,
        }
    }

    /// Torsion invariant factors `k₁ | k₂ | ⋯`, each `> 1`.
    pub fn invariant_factors(&self) -> Vec<u64> {
        // Per prime, list the prime powers descending; the t-th largest factor
        // is the product over primes of their t-th largest power.
        let mut per_prime: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
        for (&(p, i), &c) in &self.torsion {
            let q = p.pow(i);
            per_prime
                .entry(p)
                .or_default()
                .extend(std::iter::repeat_n(q, c as usize));
        }
        let len = per_prime.values().map(Vec::len).max().unwrap_or(0);
        let mut factors = vec![1u64; len];
        for powers in per_prime.values_mut() {
            powers.sort_unstable_by(|a, b| b.cmp(a));
            for (t, q) in powers.iter().enumerate() {
                factors[t] *= q;
            }
        }
        factors.reverse();
        factors
    }

    fn remove(&mut self, p: u64, i: u32, c: u32) -> bool {
        match self.torsion.get_mut(&(p, i)) {
            Some(m) if *m >= c => {
                *m -= c;
                if *m == 0 {
                    self.torsion.remove(&(p, i));
                }
                true
            }
            _ => false,
        }
    }

    /// `Some(A)` when the torsion is `A ⊕ A`.
    fn halve_torsion(&self) -> Option<FinAbGroup> {
        let mut half = BTreeMap::new();
        for (&k, &c) in &self.torsion {
            if c % 2 != 0 {
                return None;
            }
            half.insert(k, c / 2);
        }
        Some(FinAbGroup {
            rank: self.rank,
            torsion: half,
        })
    }
}

impl fmt::Display for FinAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.rank == 1 {
            parts.push("Z".to_string());
        } else if self.rank > 1 {
            parts.push(format!("Z^{}", self.rank));
        }
        for (&(p, i), &c) in &self.torsion {
            let q = p.pow(i);
            for _ in 0..c {
                parts.push(format!("Z_{q}"));
            }
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join("+"))
        }
    }
}

/// Barden invariant: a non-negative integer or `∞`, with `∞` above every integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BardenInvariant {
    Finite(u32),
    Infinite,
}

impl BardenInvariant {
    pub const SPIN: BardenInvariant = BardenInvariant::Finite(0);

    pub fn is_spin(self) -> bool {
        self == Self::SPIN
    }
}

impl fmt::Display for BardenInvariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BardenInvariant::Finite(j) => write!(f, "{j}"),
            BardenInvariant::Infinite => write!(f, "inf"),
        }
    }
}

impl FromStr for BardenInvariant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("inf") || t == "∞" {
            return Ok(BardenInvariant::Infinite);
        }
        t.parse::<u32>()
            .map(BardenInvariant::Finite)
            .map_err(|_| format!("expected a non-negative integer or \"inf\", got {s:?}"))
    }
}

impl Serialize for BardenInvariant {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            BardenInvariant::Finite(j) => s.serialize_u32(*j),
            BardenInvariant::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for BardenInvariant {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(u32),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(j) => Ok(BardenInvariant::Finite(j)),
            Raw::Str(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// A simply connected closed oriented 5-manifold up to diffeomorphism.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Manifold5 {
    h2: FinAbGroup,
    barden: BardenInvariant,
}

impl Manifold5 {
    pub fn new(h2: FinAbGroup, barden: BardenInvariant) -> Result<Self, ClassifyError> {
        let ok = match barden {
            BardenInvariant::Finite(0) => true,
            BardenInvariant::Infinite => h2.rank >= 1,
            BardenInvariant::Finite(j) => h2.multiplicity(2, j) > 0,
        };
        if !ok {
            return Err(ClassifyError::InvalidBardenInvariant(barden));
        }
        let m = Manifold5 { h2, barden };
        m.decompose()?;
        Ok(m)
    }

    pub fn s5() -> Self {
        Manifold5 {
            h2: FinAbGroup::trivial(),
            barden: BardenInvariant::SPIN,
        }
    }

    /// `k(S²×S³)`.
    pub fn spin_free(k: u32) -> Self {
        Manifold5 {
            h2: FinAbGroup::free(k),
            barden: BardenInvariant::SPIN,
        }
    }

    /// `X_∞ # (k−1)(S²×S³)`, `k ≥ 1`.
    pub fn nonspin_free(k: u32) -> Self {
        assert!(k >= 1, "X_inf needs b2 >= 1");
        Manifold5 {
            h2: FinAbGroup::free(k),
            barden: BardenInvariant::Infinite,
        }
    }

    pub fn h2(&self) -> &FinAbGroup {
        &self.h2
    }

    pub fn barden(&self) -> BardenInvariant {
        self.barden
    }

    pub fn b2(&self) -> u32 {
        self.h2.rank
    }

    fn decompose(&self) -> Result<BardenName, ClassifyError> {
        let mut rest = self.h2.clone();
        let head = match self.barden {
            BardenInvariant::Finite(0) => {
                if self.h2.rank == 0 && self.h2.is_torsion_free() {
                    Head::X0
                } else {
                    Head::None
                }
            }
            BardenInvariant::Infinite => {
                rest.rank -= 1;
                Head::XInf
            }
            BardenInvariant::Finite(1) if self.h2.multiplicity(2, 1) % 2 == 1 => {
                rest.remove(2, 1, 1);
                Head::XMinus1
            }
            BardenInvariant::Finite(j) => {
                if !rest.remove(2, j, 2) {
                    return Err(ClassifyError::NotRealizable(self.h2.to_string()));
                }
                Head::X(j)
            }
        };
        let half = rest
            .halve_torsion()
            .ok_or_else(|| ClassifyError::NotRealizable(self.h2.to_string()))?;
        let mut summands: Vec<Summand> = half
            .invariant_factors()
            .into_iter()
            .map(Summand::M)
            .collect();
        summands.extend(std::iter::repeat_n(Summand::MInf, rest.rank as usize));
        Ok(BardenName { head, summands })
    }
}

impl Serialize for Manifold5 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        Manifold5Json {
            rank: self.h2.rank,
            torsion: self.h2.torsion().into_iter().map(|(p, i, c)| [p, i as u64, c as u64]).collect(),
            barden: self.barden,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Manifold5 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = Manifold5Json::deserialize(d)?;
        let mut parts = Vec::with_capacity(raw.torsion.len());
        for [p, i, c] in raw.torsion {
            let i = u32::try_from(i).map_err(serde::de::Error::custom)?;
            let c = u32::try_from(c).map_err(serde::de::Error::custom)?;
            parts.push((p, i, c));
        }
        let h2 = FinAbGroup::new(raw.rank, &parts).map_err(serde::de::Error::custom)?;
        Manifold5::new(h2, raw.barden).map_err(serde::de::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct Manifold5Json {
    rank: u32,
    #[serde(default)]
    torsion: Vec<[u64; 3]>,
    barden: BardenInvariant,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Head {
    /// `X₋₁ = SU(3)/SO(3)`
    XMinus1,
    /// `X₀ = S⁵`, used only when there are no summands.
    X0,
    X(u32),
    XInf,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Summand {
    /// `M_k`, `1 < k < ∞`
    M(u64),
    /// `M_∞ = S²×S³`
    MInf,
}

/// Canonical Barden name `X_j # M_{k₁} # ⋯ # M_{k_s}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BardenName {
    pub head: Head,
    pub summands: Vec<Summand>,
}

impl BardenName {
    pub fn to_manifold(&self) -> Result<Manifold5, ClassifyError> {
        let (mut h2, barden) = match self.head {
            Head::XMinus1 => (FinAbGroup::new(0, &[(2, 1, 1)])?, BardenInvariant::Finite(1)),
            Head::X0 | Head::None => (FinAbGroup::trivial(), BardenInvariant::SPIN),
            Head::X(j) => (FinAbGroup::new(0, &[(2, j, 2)])?, BardenInvariant::Finite(j)),
            Head::XInf => (FinAbGroup::free(1), BardenInvariant::Infinite),
        };
        let mut prev: Option<u64> = None;
        let mut seen_inf = false;
        for s in &self.summands {
            match *s {
                Summand::M(k) => {
                    if k <= 1 || seen_inf || prev.is_some_and(|p| k % p != 0) {
                        return Err(ClassifyError::BadName(self.to_string()));
                    }
                    prev = Some(k);
                    h2 = h2.direct_sum(&FinAbGroup::from_cyclic_orders(0, &[k, k])?);
                }
                Summand::MInf => {
                    seen_inf = true;
                    h2 = h2.direct_sum(&FinAbGroup::free(1));
                }
            }
        }
        let m = Manifold5::new(h2, barden)?;
        if classify(&m)? != *self {
            return Err(ClassifyError::BadName(self.to_string()));
        }
        Ok(m)
    }

    /// Short alias used in reports, e.g. `SU(3)/SO(3)` for `X_-1`.
    pub fn alias(&self) -> Option<&'static str> {
        match (self.head, self.summands.as_slice()) {
            (Head::XMinus1, []) => Some("SU(3)/SO(3)"),
            (Head::X0, []) => Some("S5"),
            (Head::None, [Summand::MInf]) => Some("S2xS3"),
            _ => None,
        }
    }
}

impl fmt::Display for BardenName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        match self.head {
            Head::XMinus1 => parts.push("X_-1".into()),
            Head::X0 => parts.push("S5".into()),
            Head::X(j) => parts.push(format!("X_{j}")),
            Head::XInf => parts.push("X_inf".into()),
            Head::None => {}
        }
        let mut inf = 0usize;
        for s in &self.summands {
            match s {
                Summand::M(k) => parts.push(format!("M_{k}")),
                Summand::MInf => inf += 1,
            }
        }
        match inf {
            0 => {}
            1 => parts.push("S2xS3".into()),
            n => parts.push(format!("{n}(S2xS3)")),
        }
        write!(f, "{}", parts.join("#"))
    }
}

impl FromStr for BardenName {
    type Err = ClassifyError;

    /// Accepts the canonical rendering plus the aliases `SU(3)/SO(3)`, `X_0`,
    /// `M_0`, `M_inf` and `k(M_inf)`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ClassifyError::BadName(s.to_string());
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(bad());
        }
        let mut head = Head::None;
        let mut summands = Vec::new();
        for (idx, tok) in compact.split('#').enumerate() {
            let h = match tok {
                "X_-1" | "SU(3)/SO(3)" => Some(Head::XMinus1),
                "S5" | "X_0" | "M_0" => Some(Head::X0),
                "X_inf" => Some(Head::XInf),
                _ => tok
                    .strip_prefix("X_")
                    .and_then(|j| j.parse::<u32>().ok())
                    .filter(|&j| j > 0)
                    .map(Head::X),
            };
            if let Some(h) = h {
                if idx != 0 {
                    return Err(bad());
                }
                head = h;
                continue;
            }
            let (count, body) = split_multiplier(tok).ok_or_else(bad)?;
            let summand = match body {
                "S2xS3" | "M_inf" => Summand::MInf,
                _ => body
                    .strip_prefix("M_")
                    .and_then(|k| k.parse::<u64>().ok())
                    .filter(|&k| k > 1)
                    .map(Summand::M)
                    .ok_or_else(bad)?,
            };
            summands.extend(std::iter::repeat_n(summand, count));
        }
        if head == Head::X0 && !summands.is_empty() {
            head = Head::None;
        }
        if head == Head::None && summands.is_empty() {
            return Err(bad());
        }
        Ok(BardenName { head, summands })
    }
}

/// `"3(S2xS3)"` -> `(3, "S2xS3")`; bare tokens have multiplier 1.
fn split_multiplier(tok: &str) -> Option<(usize, &str)> {
    let digits = tok.chars().take_while(char::is_ascii_digit).count();
    if digits == 0 {
        return Some((1, tok));
    }
    let n: usize = tok[..digits].parse().ok()?;
    let rest = tok[digits..].strip_prefix('(')?.strip_suffix(')')?;
    if n == 0 {
        return None;
    }
    Some((n, rest))
}

/// Canonical Barden name of `m`.
pub fn classify(m: &Manifold5) -> Result<BardenName, ClassifyError> {
    m.decompose()
}

/// `H₂` adds; the Barden invariant is 0 when both summands are spin and
/// otherwise the smallest nonzero value among them (`1 < 2 < ⋯ < ∞`).
pub fn connected_sum(a: &Manifold5, b: &Manifold5) -> Manifold5 {
    let barden = match (a.barden, b.barden) {
        (BardenInvariant::Finite(0), x) | (x, BardenInvariant::Finite(0)) => x,
        (x, y) => match x.cmp(&y) {
            Ordering::Greater => y,
            _ => x,
        },
    };
    Manifold5 {
        h2: a.h2.direct_sum(&b.h2),
        barden,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ToricVerdict {
    pub admits: bool,
    /// Matching entry of the list `S⁵`, `k(S²×S³)`, `X_∞#(k−1)(S²×S³)`.
    pub witness: Option<String>,
}

/// Admissibility of a toric Sasakian structure (effective `T³` action): the
/// manifold must be torsion free with Barden invariant 0 or ∞.
pub fn admits_toric_sasakian(m: &Manifold5) -> ToricVerdict {
    let admits = m.h2.is_torsion_free()
        && matches!(m.barden, BardenInvariant::Finite(0) | BardenInvariant::Infinite);
    let witness = if admits {
        classify(m).ok().map(|n| n.to_string())
    } else {
        None
    };
    ToricVerdict { admits, witness }
}
