//! Descriptor-level calculus for the `(k₁,k₂)`-join of quasi-regular Sasakian
//! spaces: `M₁ ⋆_{k₁,k₂} M₂ = (M₁ × M₂)/S¹` with the circle acting by
//! `(x, y) ↦ (e^{ik₂θ}x, e^{−ik₁θ}y)`.

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::brieskorn::{self, ExponentVector};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum JoinError {
    #[error("the identity circle only joins with weights (1,1), got ({0},{1})")]
    IdentityMisuse(u64, u64),
    #[error("join weights must be positive, got ({0},{1})")]
    NonPositiveWeight(u64, u64),
    #[error("eta-Einstein join needs two definite descriptors of the same type with indices: {0}")]
    TypeMismatch(String),
    #[error("order of {0} is unknown; the smoothness criterion needs it")]
    UnknownOrder(String),
    #[error("invalid descriptor: {0}")]
    InvalidDescriptor(String),
}

impl JoinError {
    pub fn kind(&self) -> &'static str {
        match self {
            JoinError::IdentityMisuse(..) => "IdentityMisuse",
            JoinError::NonPositiveWeight(..) => "NonPositiveWeight",
            JoinError::TypeMismatch(_) => "TypeMismatch",
            JoinError::UnknownOrder(_) => "UnknownOrder",
            JoinError::InvalidDescriptor(_) => "InvalidDescriptor",
        }
    }
}

/// Sign of the basic first Chern class of the characteristic foliation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SasakiType {
    Positive,
    Negative,
    Null,
    Indefinite,
    Undetermined,
}

impl SasakiType {
    pub fn is_definite(self) -> bool {
        matches!(self, SasakiType::Positive | SasakiType::Negative)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regularity {
    Regular,
    QuasiRegular,
}

/// Symbolic record of a quasi-regular Sasakian space of dimension `2n+1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SasakiDescriptor {
    /// Transverse complex dimension.
    pub n: u32,
    /// lcm of the leaf holonomy orders; `None` when not known.
    pub order: Option<u64>,
    /// Divisibility index of `c₁^{orb}` of the leaf space.
    pub index: Option<u64>,
    pub stype: SasakiType,
    pub regularity: Regularity,
    pub smooth: bool,
    pub simply_connected: Option<bool>,
    pub toric_rank: Option<u32>,
    pub eta_einstein: bool,
    pub label: String,
}

impl SasakiDescriptor {
    pub fn dimension(&self) -> u32 {
        2 * self.n + 1
    }

    pub fn is_identity(&self) -> bool {
        self.n == 0
    }

    pub fn validate(&self) -> Result<(), JoinError> {
        let bad = |m: &str| Err(JoinError::InvalidDescriptor(format!("{}: {m}", self.label)));
        if self.regularity == Regularity::Regular && self.order != Some(1) {
            return bad("regular structures have order 1");
        }
        if self.order == Some(0) {
            return bad("order must be positive");
        }
        if let Some(i) = self.index {
            if i == 0 {
                return bad("index must be positive");
            }
            if !self.stype.is_definite() {
                return bad("an index needs a definite type");
            }
        }
        Ok(())
    }
}

/// Standard round `S^{2p+1}`: regular, positive, index `p+1`, toric.
pub fn sphere(p: u32) -> SasakiDescriptor {
    SasakiDescriptor {
        n: p,
        order: Some(1),
        index: if p == 0 { None } else { Some(u64::from(p) + 1) },
        stype: if p == 0 { SasakiType::Null } else { SasakiType::Positive },
        regularity: Regularity::Regular,
        smooth: true,
        simply_connected: Some(p > 0),
        toric_rank: Some(p + 1),
        eta_einstein: p > 0,
        label: format!("S{}", 2 * p + 1),
    }
}

/// The circle with `ξ = ∂/∂t`; unit of the join.
pub fn identity_circle() -> SasakiDescriptor {
    SasakiDescriptor {
        label: "S1".into(),
        ..sphere(0)
    }
}

/// Heisenberg nilmanifold `𝒩_{2n+1}`, a circle bundle over a principally
/// polarised abelian variety; null type.
pub fn heisenberg(n: u32) -> SasakiDescriptor {
    SasakiDescriptor {
        n,
        order: Some(1),
        index: None,
        stype: SasakiType::Null,
        regularity: Regularity::Regular,
        smooth: true,
        simply_connected: Some(false),
        toric_rank: None,
        eta_einstein: true,
        label: format!("N{}", 2 * n + 1),
    }
}

/// Brieskorn–Pham link `S⁵_w` with caller-supplied order `υ`. The index is the
/// Fano index of the exponents when positive.
pub fn brieskorn_link(a: &ExponentVector, order: u64) -> Result<SasakiDescriptor, JoinError> {
    if order == 0 {
        return Err(JoinError::InvalidDescriptor("order must be positive".into()));
    }
    let fano = brieskorn::fano_index(a);
    let index = u64::try_from(&fano).ok().filter(|&i| i > 0);
    let stype = match fano.sign() {
        num_bigint::Sign::Plus => SasakiType::Positive,
        num_bigint::Sign::Minus => SasakiType::Negative,
        num_bigint::Sign::NoSign => SasakiType::Null,
    };
    Ok(SasakiDescriptor {
        n: 2,
        order: Some(order),
        index,
        stype,
        regularity: if order == 1 { Regularity::Regular } else { Regularity::QuasiRegular },
        smooth: true,
        simply_connected: Some(true),
        toric_rank: None,
        eta_einstein: false,
        label: format!("L{a}"),
    })
}

/// Named presets: `S1`, `S3`, `S5`, ... and `N3`, `N5`, ...
pub fn preset(name: &str) -> Option<SasakiDescriptor> {
    match name {
        "S1" | "circle" | "identity" => Some(identity_circle()),
        _ => {
            let (kind, rest) = name.split_at(1);
            let dim: u32 = rest.parse().ok()?;
            if dim.is_multiple_of(2) || dim < 3 {
                return None;
            }
            match kind {
                "S" => Some(sphere((dim - 1) / 2)),
                "N" => Some(heisenberg((dim - 1) / 2)),
                _ => None,
            }
        }
    }
}

pub fn presets() -> Vec<SasakiDescriptor> {
    vec![
        identity_circle(),
        sphere(1),
        sphere(2),
        sphere(3),
        heisenberg(1),
        heisenberg(2),
    ]
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JoinResult {
    pub descriptor: SasakiDescriptor,
    pub k_pair: (u64, u64),
    /// `m = gcd` of the weights as given; the join is the `Z_m` quotient of the
    /// join with the reduced weights.
    pub quotient_group_order: u64,
    pub fibre_view: String,
}

/// `(k₁/m, k₂/m, m)` with `m = gcd(k₁, k₂)`.
pub fn normalize_k(k1: u64, k2: u64) -> Result<(u64, u64, u64), JoinError> {
    if k1 == 0 || k2 == 0 {
        return Err(JoinError::NonPositiveWeight(k1, k2));
    }
    let m = k1.gcd(&k2);
    Ok((k1 / m, k2 / m, m))
}

/// `lᵢ = Iᵢ / gcd(I₁, I₂)`.
pub fn relative_indices(i1: u64, i2: u64) -> Result<(u64, u64), JoinError> {
    let (l1, l2, _) = normalize_k(i1, i2)?;
    Ok((l1, l2))
}

/// Smoothness criterion for the join of two quasi-regular manifolds:
/// `gcd(υ₁k₂, υ₂k₁) = 1`.
pub fn join_is_smooth(order1: u64, order2: u64, k1: u64, k2: u64) -> bool {
    (order1 * k2).gcd(&(order2 * k1)) == 1
}

fn order_of(s: &SasakiDescriptor) -> Result<u64, JoinError> {
    s.order.ok_or_else(|| JoinError::UnknownOrder(s.label.clone()))
}

pub fn join(
    s1: &SasakiDescriptor,
    s2: &SasakiDescriptor,
    k1: u64,
    k2: u64,
) -> Result<JoinResult, JoinError> {
    s1.validate()?;
    s2.validate()?;
    let (k1r, k2r, m) = normalize_k(k1, k2)?;
    if s1.is_identity() || s2.is_identity() {
        if (k1, k2) != (1, 1) {
            return Err(JoinError::IdentityMisuse(k1, k2));
        }
        let other = if s1.is_identity() { s2 } else { s1 };
        return Ok(JoinResult {
            descriptor: other.clone(),
            k_pair: (1, 1),
            quotient_group_order: 1,
            fibre_view: format!("fibre {} over a point", other.label),
        });
    }
    let o1 = order_of(s1)?;
    let o2 = order_of(s2)?;
    let smooth = s1.smooth && s2.smooth && join_is_smooth(o1, o2, k1r, k2r);
    let both_regular =
        s1.regularity == Regularity::Regular && s2.regularity == Regularity::Regular;
    let regular = both_regular && smooth && m == 1;

    let stype = match (s1.stype, s2.stype) {
        (a, b) if a == b && matches!(a, SasakiType::Positive | SasakiType::Negative | SasakiType::Null) => a,
        _ => SasakiType::Undetermined,
    };

    let relative = match (s1.index, s2.index) {
        (Some(i1), Some(i2)) if s1.stype == s2.stype && s1.stype.is_definite() => {
            relative_indices(i1, i2).ok()
        }
        _ => None,
    };
    let at_relative_indices = m == 1 && relative == Some((k1r, k2r));

    let simply_connected = if m > 1 {
        Some(false)
    } else if both_regular
        && s1.simply_connected == Some(true)
        && s2.simply_connected == Some(true)
    {
        // Euler class k₁ω₁ + k₂ω₂ on a simply connected base is primitive.
        Some(true)
    } else if at_relative_indices && smooth && stype == SasakiType::Positive {
        // Indivisible positive quasi-regular structures are simply connected.
        Some(true)
    } else {
        None
    };

    let toric_rank = match (s1.toric_rank, s2.toric_rank) {
        (Some(r1), Some(r2)) => Some(r1 + r2 - 1),
        _ => None,
    };

    let eta_einstein = at_relative_indices && s1.eta_einstein && s2.eta_einstein;

    // Operands are listed in a canonical order so that swapping them with
    // their weights gives the same descriptor.
    let mut ops = [(s1.label.as_str(), k1), (s2.label.as_str(), k2)];
    ops.sort();
    let label = format!("{}*[{},{}]{}", ops[0].0, ops[0].1, ops[1].1, ops[1].0);

    let descriptor = SasakiDescriptor {
        n: s1.n + s2.n,
        order: if regular { Some(1) } else { None },
        index: None,
        stype,
        regularity: if regular { Regularity::Regular } else { Regularity::QuasiRegular },
        smooth,
        simply_connected,
        toric_rank,
        eta_einstein,
        label,
    };
    Ok(JoinResult {
        descriptor,
        k_pair: (k1r, k2r),
        quotient_group_order: m,
        fibre_view: format!("fibre {}/Z_{} over Z({})", s2.label, k2r, s1.label),
    })
}

/// Join at the relative indices of two definite η-Einstein descriptors of the
/// same type; the result carries an η-Einstein structure of that type.
pub fn eta_einstein_join(
    s1: &SasakiDescriptor,
    s2: &SasakiDescriptor,
) -> Result<JoinResult, JoinError> {
    if s1.stype != s2.stype || !s1.stype.is_definite() {
        return Err(JoinError::TypeMismatch(format!(
            "{:?} vs {:?}",
            s1.stype, s2.stype
        )));
    }
    if !(s1.eta_einstein && s2.eta_einstein) {
        return Err(JoinError::TypeMismatch("both inputs must be eta-Einstein".into()));
    }
    let (Some(i1), Some(i2)) = (s1.index, s2.index) else {
        return Err(JoinError::TypeMismatch("both indices must be present".into()));
    };
    let (l1, l2) = relative_indices(i1, i2)?;
    let mut r = join(s1, s2, l1, l2)?;
    r.descriptor.eta_einstein = true;
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quasi(order: u64) -> SasakiDescriptor {
        SasakiDescriptor {
            order: Some(order),
            regularity: Regularity::QuasiRegular,
            simply_connected: None,
            toric_rank: None,
            label: format!("Q{order}"),
            ..sphere(1)
        }
    }

    #[test]
    fn preset_indices() {
        assert_eq!(sphere(1).index, Some(2));
        assert_eq!(sphere(2).index, Some(3));
        let s5 = brieskorn_link(&ExponentVector::new([1, 1, 1, 1]).unwrap(), 1).unwrap();
        assert_eq!(s5.index, Some(3));
        assert_eq!(identity_circle().n, 0);
        assert_eq!(preset("S7").unwrap().n, 3);
        assert_eq!(preset("N5").unwrap().stype, SasakiType::Null);
        assert!(preset("S4").is_none());
        assert!(preset("Q3").is_none());
        for p in presets() {
            p.validate().unwrap();
        }
    }

    #[test]
    fn normalize() {
        assert_eq!(normalize_k(2, 3).unwrap(), (2, 3, 1));
        assert_eq!(normalize_k(4, 6).unwrap(), (2, 3, 2));
        assert_eq!(normalize_k(7, 7).unwrap(), (1, 1, 7));
        assert!(normalize_k(0, 3).is_err());
    }

    #[test]
    fn join_spheres() {
        let r = join(&sphere(1), &sphere(2), 1, 1).unwrap();
        let d = &r.descriptor;
        assert!(d.smooth);
        assert_eq!(d.regularity, Regularity::Regular);
        assert_eq!(d.stype, SasakiType::Positive);
        assert_eq!(d.dimension(), 7);
        assert_eq!(d.simply_connected, Some(true));
        assert_eq!(d.toric_rank, Some(4));
    }

    #[test]
    fn join_orbifold() {
        let r = join(&quasi(2), &sphere(1), 2, 3).unwrap();
        assert!(!r.descriptor.smooth);
        assert_eq!(r.descriptor.order, None);
    }

    #[test]
    fn null_join_and_mixed() {
        let r = join(&heisenberg(2), &heisenberg(2), 1, 1).unwrap();
        assert_eq!(r.descriptor.stype, SasakiType::Null);
        let r = join(&heisenberg(1), &sphere(1), 1, 1).unwrap();
        assert_eq!(r.descriptor.stype, SasakiType::Undetermined);
    }

    #[test]
    fn non_coprime_weights_record_quotient() {
        let r = join(&sphere(1), &sphere(1), 4, 6).unwrap();
        assert_eq!(r.k_pair, (2, 3));
        assert_eq!(r.quotient_group_order, 2);
        assert_eq!(r.descriptor.simply_connected, Some(false));
    }

    #[test]
    fn identity_rules() {
        let s = sphere(2);
        let r = join(&identity_circle(), &s, 1, 1).unwrap();
        assert_eq!(r.descriptor, s);
        assert_eq!(
            join(&s, &identity_circle(), 2, 1).unwrap_err(),
            JoinError::IdentityMisuse(2, 1)
        );
    }

    #[test]
    fn relative() {
        assert_eq!(relative_indices(2, 1).unwrap(), (2, 1));
        assert_eq!(relative_indices(2, 2).unwrap(), (1, 1));
        assert_eq!(relative_indices(6, 4).unwrap(), (3, 2));
    }

    #[test]
    fn eta_einstein() {
        let mut w = brieskorn_link(&ExponentVector::new([2, 3, 7, 35]).unwrap(), 35).unwrap();
        w.eta_einstein = true;
        let r = eta_einstein_join(&sphere(1), &w).unwrap();
        assert_eq!(r.k_pair, (2, 1));
        assert!(r.descriptor.smooth);
        assert!(r.descriptor.eta_einstein);
        assert_eq!(r.descriptor.simply_connected, Some(true));

        let r = eta_einstein_join(&sphere(1), &sphere(1)).unwrap();
        assert_eq!(r.k_pair, (1, 1));
        assert_eq!(r.descriptor, join(&sphere(1), &sphere(1), 1, 1).unwrap().descriptor);

        let mut neg = quasi(1);
        neg.regularity = Regularity::Regular;
        neg.stype = SasakiType::Negative;
        neg.eta_einstein = true;
        assert!(matches!(
            eta_einstein_join(&sphere(1), &neg),
            Err(JoinError::TypeMismatch(_))
        ));
        assert!(matches!(
            eta_einstein_join(&heisenberg(1), &heisenberg(1)),
            Err(JoinError::TypeMismatch(_))
        ));
    }

    #[test]
    fn descriptor_validation() {
        let mut d = sphere(1);
        d.order = Some(3);
        assert!(matches!(join(&d, &sphere(1), 1, 1), Err(JoinError::InvalidDescriptor(_))));
        let mut d = quasi(3);
        d.order = None;
        assert_eq!(
            join(&d, &sphere(1), 1, 1).unwrap_err(),
            JoinError::UnknownOrder("Q3".into())
        );
    }
}
