//! Circle bundles over simply connected bases. Cohomology of the total space
//! comes from the Gysin sequence: `H²(M) = H²(B)/⟨e⟩` for the Euler class `e`,
//! and `c₁(𝒟) = π*c₁(B)`. Closed forms for Hirzebruch bases, their blow-ups
//! and Wang–Ziller joins are computed next to the lattice pipeline so the two
//! can be compared.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::exact_lattice::{
    mod2, quotient_by_vector_with, reduce_mod2, snf, IntMatrix, IntVec, LatticeError, PivotOrder,
    Z2Vec,
};
use crate::smale_barden::{classify, BardenInvariant, FinAbGroup, Manifold5};
use crate::toric_surface::{is_ample, AmpleCertificate, ToricError, ToricSurface};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BundleError {
    #[error("Euler class is zero")]
    ZeroEuler,
    #[error("base is not simply connected")]
    BaseNotSimplyConnected,
    #[error("Euler class is not primitive (content {0})")]
    NotPrimitive(BigInt),
    #[error("Kähler class is not positive: {0}")]
    NotKahler(String),
    #[error("{0}")]
    BadParameter(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Toric(#[from] ToricError),
}

impl BundleError {
    pub fn kind(&self) -> &'static str {
        match self {
            BundleError::ZeroEuler => "ZeroEuler",
            BundleError::BaseNotSimplyConnected => "BaseNotSimplyConnected",
            BundleError::NotPrimitive(_) => "NotPrimitive",
            BundleError::NotKahler(_) => "NotKahler",
            BundleError::BadParameter(_) => "BadParameter",
            BundleError::Lattice(e) => e.kind(),
            BundleError::Toric(e) => e.kind(),
        }
    }
}

/// `H²(B; Z)` of the base: its rank and, for surfaces, the cup-product pairing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionLattice {
    pub rank: usize,
    pub pairing: Option<IntMatrix>,
}

impl IntersectionLattice {
    pub fn free(rank: usize) -> Self {
        IntersectionLattice {
            rank,
            pairing: None,
        }
    }

    pub fn with_pairing(pairing: IntMatrix) -> Result<Self, BundleError> {
        if pairing.rows() != pairing.cols() || !pairing.is_symmetric() {
            return Err(BundleError::BadParameter(
                "pairing must be a symmetric square matrix".into(),
            ));
        }
        Ok(IntersectionLattice {
            rank: pairing.rows(),
            pairing: Some(pairing),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BundleSpec {
    pub base_lattice: IntersectionLattice,
    pub c1_base: IntVec,
    pub euler: IntVec,
    pub base_simply_connected: bool,
    /// Complex dimension of the base; the total space has real dimension `2d + 1`.
    pub base_complex_dim: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TotalSpaceReport {
    pub dimension: u32,
    pub b2: usize,
    #[serde(rename = "c1D", serialize_with = "crate::json::int_vec")]
    pub c1d: IntVec,
    /// Orders of the cyclic torsion summands of `H²(M)`.
    #[serde(serialize_with = "crate::json::big_slice")]
    pub torsion: Vec<BigInt>,
    #[serde(rename = "c1D_torsion", serialize_with = "crate::json::big_slice")]
    pub c1d_torsion: Vec<BigInt>,
    /// Mod-2 reduction of `c₁(𝒟)`: free coordinates, then even-order torsion coordinates.
    #[serde(rename = "w2")]
    pub w2_class: Z2Vec,
    pub spin: bool,
    #[serde(rename = "pi1", serialize_with = "crate::json::big")]
    pub pi1_order: BigInt,
    pub m5: Option<Manifold5>,
    #[serde(rename = "name")]
    pub diffeo_name: Option<String>,
}

pub fn total_space(spec: &BundleSpec) -> Result<TotalSpaceReport, BundleError> {
    total_space_with(spec, &PivotOrder::SmallestAbs)
}

/// Same as [`total_space`] with an explicit SNF pivot strategy, which only
/// changes the basis of the free quotient.
pub fn total_space_with(
    spec: &BundleSpec,
    order: &PivotOrder,
) -> Result<TotalSpaceReport, BundleError> {
    let r = spec.base_lattice.rank;
    if spec.euler.len() != r || spec.c1_base.len() != r {
        return Err(LatticeError::DimensionMismatch(format!(
            "base rank {r}, euler length {}, c1 length {}",
            spec.euler.len(),
            spec.c1_base.len()
        ))
        .into());
    }
    if spec.euler.is_zero() {
        return Err(BundleError::ZeroEuler);
    }
    if !spec.base_simply_connected {
        return Err(BundleError::BaseNotSimplyConnected);
    }
    let q = quotient_by_vector_with(r, &spec.euler, order)?;
    let c1d = IntVec::coordinates(q.project(&spec.c1_base)?, "gamma");
    let c1d_torsion = q.project_torsion(&spec.c1_base)?;
    let mut bits = mod2(&c1d).0;
    for (t, d) in c1d_torsion.iter().zip(&q.torsion) {
        if d.is_even() {
            bits.push(reduce_mod2(t));
        }
    }
    let w2_class = Z2Vec(bits);
    let spin = w2_class.is_zero();
    let pi1_order = spec.euler.content();
    let dimension = 2 * spec.base_complex_dim + 1;

    let (m5, diffeo_name) = if dimension == 5 && pi1_order.is_one() {
        let barden = if spin {
            BardenInvariant::SPIN
        } else {
            BardenInvariant::Infinite
        };
        let rank = u32::try_from(q.rank).map_err(|_| BundleError::BadParameter("rank".into()))?;
        let m = Manifold5::new(FinAbGroup::free(rank), barden)
            .map_err(|e| BundleError::BadParameter(e.to_string()))?;
        let name = classify(&m)
            .map_err(|e| BundleError::BadParameter(e.to_string()))?
            .to_string();
        (Some(m), Some(name))
    } else {
        (None, None)
    };

    Ok(TotalSpaceReport {
        dimension,
        b2: q.rank,
        c1d,
        torsion: q.torsion,
        c1d_torsion,
        w2_class,
        spin,
        pi1_order,
        m5,
        diffeo_name,
    })
}

/// Spin test straight from the mod-2 Gysin sequence: `w₂(M) = π*w₂(B)` and
/// the kernel of `π*` on `H²(B; Z₂)` is `{0, ē}`.
pub fn gysin_spin_check(c1_base: &IntVec, euler: &IntVec) -> bool {
    let c = mod2(c1_base);
    c.is_zero() || c == mod2(euler)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClosedForm {
    #[serde(rename = "c1D", serialize_with = "crate::json::big")]
    pub c1d: BigInt,
    pub w2: u8,
    pub name: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Methods<T> {
    pub closed_form: T,
    pub lattice: TotalSpaceReport,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HirzebruchBundle {
    pub l1: i64,
    pub l2: i64,
    pub n: u32,
    pub b2: usize,
    #[serde(rename = "c1D", serialize_with = "crate::json::big")]
    pub c1d: BigInt,
    pub w2: u8,
    pub spin: bool,
    #[serde(serialize_with = "crate::json::big")]
    pub pi1: BigInt,
    pub name: String,
    pub method: Methods<ClosedForm>,
    /// Closed form and lattice agree on `|c₁(𝒟)|`, parity and name.
    pub agree: bool,
}

/// Circle bundle over `S_n` with Euler class `l₁α₁ + l₂α₂` (`α₁ = PD(C)`,
/// `α₂ = PD(F)`). The generator `γ` is oriented so that `π*α₂ = l₁γ`.
pub fn hirzebruch_bundle(l1: i64, l2: i64, n: u32) -> Result<HirzebruchBundle, BundleError> {
    if l1 <= 0 || l2 <= 0 {
        return Err(BundleError::NotKahler(format!(
            "l1 = {l1}, l2 = {l2}; both must be positive"
        )));
    }
    let g = l1.gcd(&l2);
    if g != 1 {
        return Err(BundleError::NotPrimitive(BigInt::from(g)));
    }
    let surface = ToricSurface::hirzebruch(n);
    let spec = BundleSpec {
        base_lattice: IntersectionLattice::with_pairing(surface.intersection_matrix())?,
        c1_base: IntVec::from_i64(&[2, 2 - i64::from(n)], "alpha")?,
        euler: IntVec::from_i64(&[l1, l2], "alpha")?,
        base_simply_connected: true,
        base_complex_dim: 2,
    };
    let mut lattice = total_space(&spec)?;
    // projection·α₂ is ±l₁; flip γ if needed
    let q = quotient_by_vector_with(2, &spec.euler, &PivotOrder::SmallestAbs)?;
    if q.projection.get(0, 1).is_negative() {
        lattice.c1d = lattice.c1d.scaled(&BigInt::from(-1));
    }

    let n64 = i64::from(n);
    let cf_c1d = BigInt::from(-(2 * l2 + l1 * (n64 - 2)));
    let cf_w2 = ((n64 * l1) % 2) as u8;
    let cf_name = if cf_w2 == 0 { "S2xS3" } else { "X_inf" }.to_string();
    let closed_form = ClosedForm {
        c1d: cf_c1d.clone(),
        w2: cf_w2,
        name: cf_name.clone(),
    };

    let lat_c1d = lattice.c1d.entries()[0].clone();
    let lat_w2 = lattice.w2_class.bits()[0];
    let lat_name = lattice.diffeo_name.clone().unwrap_or_default();
    let agree = lat_c1d.abs() == cf_c1d.abs() && lat_w2 == cf_w2 && lat_name == cf_name;

    Ok(HirzebruchBundle {
        l1,
        l2,
        n,
        b2: lattice.b2,
        c1d: lat_c1d,
        w2: lat_w2,
        spin: lattice.spin,
        pi1: lattice.pi1_order.clone(),
        name: lat_name,
        method: Methods {
            closed_form,
            lattice,
        },
        agree,
    })
}

/// The `(k+2) × (k+1)` matrix expressing `π*α̃ᵢ` in a proposed basis `β` of
/// `H²(M_{n,k})`: first row `(−l₂, 2, …, 2)`, second row `(1, 0, …, 0)`, and
/// `−2` on the shifted diagonal below.
pub fn explicit_blowup_matrix(k: usize, l2: i64) -> IntMatrix {
    let mut m = IntMatrix::zeros(k + 2, k + 1);
    m.set(0, 0, BigInt::from(-l2));
    for j in 1..=k {
        m.set(0, j, BigInt::from(2));
        m.set(j + 1, j, BigInt::from(-2));
    }
    m.set(1, 0, BigInt::one());
    m
}

/// `Σᵢ lᵢ m_ij = 0` for each column `j`.
pub fn orthogonality_check(m: &IntMatrix, l: &IntVec) -> Result<Vec<bool>, BundleError> {
    let lt = m.transpose().mul_vec(l)?;
    Ok(lt.iter().map(Zero::is_zero).collect())
}

/// What the proposed basis gives for `c₁(𝒟)`, next to the index of the
/// lattice its rows actually span.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExplicitMatrixRoute {
    #[serde(rename = "c1D", serialize_with = "crate::json::big_slice")]
    pub c1_beta: Vec<BigInt>,
    pub w2: Z2Vec,
    pub spin: bool,
    pub orthogonal: bool,
    /// Index of the span of `π*α̃ᵢ` inside `Z^{k+1}`; 1 means a genuine basis.
    #[serde(serialize_with = "crate::json::big")]
    pub basis_index: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlowupBundle {
    pub n: u32,
    pub k: usize,
    pub l2: i64,
    /// `(π*(C + l₂F) − ΣEᵢ)² = 2l₂ + n − k`.
    #[serde(serialize_with = "crate::json::big")]
    pub kahler_square: BigInt,
    /// Nakai test on invariant curves for the same class.
    pub nakai: AmpleCertificate,
    pub lattice: TotalSpaceReport,
    pub explicit_matrix: ExplicitMatrixRoute,
    /// Name from `b₂(M) = k + 1`.
    pub name: String,
    /// Same family with k summands instead of k+1, kept next to `name` for comparison.
    pub theorem_name: Option<String>,
    /// The lattice and the proposed basis give the same spin verdict.
    pub agree: bool,
}

/// Circle bundle over the `k`-fold blow-up `S_{n,k}` with Kähler class
/// `π*(C + l₂F) − ΣEᵢ`. Requires the square `2l₂ + n − k` to be positive.
pub fn blowup_bundle(n: u32, k: usize, l2: i64) -> Result<BlowupBundle, BundleError> {
    if l2 <= 0 {
        return Err(BundleError::NotKahler(format!("l2 = {l2} must be positive")));
    }
    let n64 = i64::from(n);
    let k64 = i64::try_from(k).map_err(|_| BundleError::BadParameter("k too large".into()))?;
    let square = 2 * l2 + n64 - k64;
    if square <= 0 {
        return Err(BundleError::NotKahler(format!(
            "2*l2 + n - k = {square} is not positive"
        )));
    }
    let surface = ToricSurface::blown_up_hirzebruch(n, k);
    let gram = surface.intersection_matrix();

    let mut l = vec![1, l2];
    l.extend(std::iter::repeat_n(1, k));
    let kahler_rays = surface.kahler_class(&l)?;
    let kahler_named = surface.to_named(&kahler_rays)?;
    let nakai = is_ample(surface.fan(), &kahler_rays)?;
    let gk = gram.mul_vec(&kahler_named)?;
    let kahler_square: BigInt = kahler_named.entries().iter().zip(&gk).map(|(a, b)| a * b).sum();

    let c1 = surface
        .anticanonical()
        .named
        .ok_or_else(|| BundleError::BadParameter("anticanonical class".into()))?;
    let spec = BundleSpec {
        base_lattice: IntersectionLattice::with_pairing(gram)?,
        c1_base: c1.clone(),
        euler: kahler_named,
        base_simply_connected: true,
        base_complex_dim: 2,
    };
    let lattice = total_space(&spec)?;

    let m = explicit_blowup_matrix(k, l2);
    let l_literal = IntVec::from_i64(&l, "alpha")?;
    let orthogonal = orthogonality_check(&m, &l_literal)?.into_iter().all(|b| b);
    let c1_beta = m.transpose().mul_vec(&c1)?;
    let w2 = mod2(&IntVec::coordinates(c1_beta.clone(), "beta"));
    let basis_index: BigInt = snf(&m)?
        .diagonal()
        .into_iter()
        .filter(|d| !d.is_zero())
        .product();
    let explicit_matrix = ExplicitMatrixRoute {
        spin: w2.is_zero(),
        c1_beta,
        w2,
        orthogonal,
        basis_index: basis_index.abs(),
    };

    let name = lattice.diffeo_name.clone().unwrap_or_default();
    let theorem_name = match (k, n % 2) {
        (0, _) => None,
        (_, 0) => Some(classify(&Manifold5::spin_free(k as u32))),
        _ => Some(classify(&Manifold5::nonspin_free(k as u32))),
    }
    .transpose()
    .map_err(|e| BundleError::BadParameter(e.to_string()))?
    .map(|b| b.to_string());
    let agree = explicit_matrix.spin == lattice.spin;

    Ok(BlowupBundle {
        n,
        k,
        l2,
        kahler_square,
        nakai,
        lattice,
        explicit_matrix,
        name,
        theorem_name,
        agree,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WangZiller {
    pub p1: u32,
    pub p2: u32,
    pub k1: u64,
    pub k2: u64,
    pub dimension: u32,
    #[serde(rename = "c1D", serialize_with = "crate::json::big")]
    pub c1d: BigInt,
    pub w2: u8,
    pub spin: bool,
    pub method: Methods<ClosedForm>,
    /// For `p₁ = 1, k₂ = 1`: whether `M` is the trivial `S^{2p₂+1}`-bundle over `S²`.
    pub bundle_trivial: Option<bool>,
    pub agree: bool,
}

/// `M^{p₁,p₂}_{k₁,k₂} = S^{2p₁+1} ⋆_{k₁,k₂} S^{2p₂+1}`, a circle bundle over
/// `CP^{p₁} × CP^{p₂}` with Euler class `k₁x₁ + k₂x₂`.
pub fn wang_ziller(p1: u32, p2: u32, k1: u64, k2: u64) -> Result<WangZiller, BundleError> {
    if p1 == 0 || p2 == 0 || k1 == 0 || k2 == 0 {
        return Err(BundleError::BadParameter(
            "p1, p2, k1, k2 must all be at least 1".into(),
        ));
    }
    let (bp1, bp2, bk1, bk2) = (
        BigInt::from(p1),
        BigInt::from(p2),
        BigInt::from(k1),
        BigInt::from(k2),
    );
    let one = BigInt::one();
    let spec = BundleSpec {
        base_lattice: IntersectionLattice::free(2),
        c1_base: IntVec::new(vec![&bp1 + &one, &bp2 + &one], "x")?,
        euler: IntVec::new(vec![bk1.clone(), bk2.clone()], "x")?,
        base_simply_connected: true,
        base_complex_dim: p1 + p2,
    };
    let mut lattice = total_space(&spec)?;
    let q = quotient_by_vector_with(2, &spec.euler, &PivotOrder::SmallestAbs)?;
    if q.rank == 1 && q.projection.get(0, 0).is_negative() {
        lattice.c1d = lattice.c1d.scaled(&BigInt::from(-1));
    }

    let cf_c1d = &bk2 * (&bp1 + &one) - &bk1 * (&bp2 + &one);
    let cf_w2 = reduce_mod2(&(&bk2 * (&bp1 + &one) + &bk1 * (&bp2 + &one)));
    let dimension = 2 * (p1 + p2) + 1;
    let cf_name = match (dimension, cf_w2) {
        (5, 0) => "S2xS3".to_string(),
        (5, _) => "X_inf".to_string(),
        (_, 0) => "spin".to_string(),
        _ => "non-spin".to_string(),
    };
    let closed_form = ClosedForm {
        c1d: cf_c1d.clone(),
        w2: cf_w2,
        name: cf_name,
    };
    let primitive = lattice.pi1_order.is_one();
    let lat_c1d = lattice.c1d.entries().first().cloned().unwrap_or_default();
    let agree = if primitive {
        lat_c1d.abs() == cf_c1d.abs() && lattice.spin == (cf_w2 == 0)
    } else {
        // the closed form presumes a primitive Euler class
        false
    };
    let bundle_trivial = (p1 == 1 && k2 == 1).then(|| (&bk1 * (&bp2 + &one)).is_even());

    Ok(WangZiller {
        p1,
        p2,
        k1,
        k2,
        dimension,
        c1d: lat_c1d,
        w2: cf_w2,
        spin: lattice.spin,
        method: Methods {
            closed_form,
            lattice,
        },
        bundle_trivial,
        agree,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AbBasis {
    pub a1: i64,
    pub a2: i64,
    /// `a₁ > m·a₂ > 0`.
    pub positive: bool,
    #[serde(rename = "c1D")]
    pub c1d: i64,
}

/// Euler class `l₁α₁ + l₂α₂` rewritten as `a₁ = l₁m + l₂`, `a₂ = l₁`, for
/// which `c₁(𝒟) = 2(a₁ − a₂)γ`.
pub fn ab_basis(l1: i64, l2: i64, m: i64) -> AbBasis {
    let a1 = l1 * m + l2;
    let a2 = l1;
    AbBasis {
        a1,
        a2,
        positive: a1 > m * a2 && m * a2 > 0,
        c1d: 2 * (a1 - a2),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LermanCount {
    pub count: u64,
    /// `a₁ > a₂`, where `⌈a₂/a₁⌉` collapses to 1 and the fraction may be inverted.
    pub suspect_inverted: bool,
}

/// `⌈a₂/a₁⌉` regular toric structures, as stated.
pub fn lerman_count(a1: u64, a2: u64) -> Result<LermanCount, BundleError> {
    if a1 == 0 || a2 == 0 {
        return Err(BundleError::BadParameter("a1 and a2 must be positive".into()));
    }
    if a1.gcd(&a2) != 1 {
        return Err(BundleError::BadParameter(format!(
            "gcd({a1}, {a2}) must be 1"
        )));
    }
    Ok(LermanCount {
        count: a2.div_ceil(a1),
        suspect_inverted: a1 > a2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn hirzebruch_examples() {
        let r = hirzebruch_bundle(1, 1, 1).unwrap();
        assert_eq!(r.name, "X_inf");
        assert_eq!(r.w2, 1);
        assert_eq!(r.c1d, big(-1));
        assert!(r.agree);
        let r = hirzebruch_bundle(1, 1, 0).unwrap();
        assert_eq!(r.name, "S2xS3");
        assert_eq!(r.c1d, big(0));
        assert!(r.spin);
        let r = hirzebruch_bundle(3, 2, 5).unwrap();
        // −(2·2 + 3·3) = −13
        assert_eq!(r.c1d, big(-13));
        assert_eq!(r.name, "X_inf");
    }

    #[test]
    fn hirzebruch_errors() {
        assert_eq!(hirzebruch_bundle(2, 4, 1).unwrap_err(), BundleError::NotPrimitive(big(2)));
        assert!(matches!(hirzebruch_bundle(0, 1, 1), Err(BundleError::NotKahler(_))));
    }

    #[test]
    fn total_space_errors_and_torsion() {
        let spec = BundleSpec {
            base_lattice: IntersectionLattice::free(2),
            c1_base: IntVec::from_i64(&[2, 2], "x").unwrap(),
            euler: IntVec::from_i64(&[0, 0], "x").unwrap(),
            base_simply_connected: true,
            base_complex_dim: 2,
        };
        assert_eq!(total_space(&spec).unwrap_err(), BundleError::ZeroEuler);
        let spec = BundleSpec {
            euler: IntVec::from_i64(&[2, 4], "x").unwrap(),
            ..spec
        };
        let r = total_space(&spec).unwrap();
        assert_eq!(r.pi1_order, big(2));
        assert_eq!(r.torsion, vec![big(2)]);
        assert_eq!(r.m5, None);
        assert_eq!(r.spin, gysin_spin_check(&spec.c1_base, &spec.euler));
    }

    #[test]
    fn gysin_agrees_on_small_cases() {
        for e in [[1, 0], [1, 1], [3, 2], [2, 2], [4, 6], [5, 0]] {
            for c in [[0, 0], [1, 0], [2, 1], [3, 3], [1, 1], [0, 2]] {
                let spec = BundleSpec {
                    base_lattice: IntersectionLattice::free(2),
                    c1_base: IntVec::from_i64(&c, "x").unwrap(),
                    euler: IntVec::from_i64(&e, "x").unwrap(),
                    base_simply_connected: true,
                    base_complex_dim: 2,
                };
                let r = total_space(&spec).unwrap();
                assert_eq!(r.spin, gysin_spin_check(&spec.c1_base, &spec.euler), "{e:?} {c:?}");
            }
        }
    }

    #[test]
    fn blowup_square_and_parity() {
        let r = blowup_bundle(2, 3, 4).unwrap();
        assert_eq!(r.kahler_square, big(2 * 4 + 2 - 3));
        assert_eq!(r.lattice.b2, 4);
        assert!(r.explicit_matrix.orthogonal);
        assert_eq!(r.explicit_matrix.basis_index, big(8));
        // a blown-up base always has odd w₂ on some exceptional curve
        assert!(!r.lattice.spin);
        assert_eq!(r.name, "X_inf#3(S2xS3)");
        assert_eq!(r.theorem_name.as_deref(), Some("3(S2xS3)"));
        assert!(matches!(blowup_bundle(0, 3, 1), Err(BundleError::NotKahler(_))));
        let r = blowup_bundle(2, 0, 1).unwrap();
        assert!(r.lattice.spin);
        assert_eq!(r.name, "S2xS3");
        assert_eq!(r.theorem_name, None);
    }

    #[test]
    fn explicit_matrix_shape() {
        let m = explicit_blowup_matrix(2, 5);
        assert_eq!(
            m,
            IntMatrix::from_rows(&[vec![-5, 2, 2], vec![1, 0, 0], vec![0, -2, 0], vec![0, 0, -2]])
                .unwrap()
        );
        let l = IntVec::from_i64(&[1, 5, 1, 1], "alpha").unwrap();
        assert_eq!(orthogonality_check(&m, &l).unwrap(), vec![true; 3]);
        // c₁ = (2, −(n−2), −1, −1) at n = 3 gives (−2l₂ − n + 2, 6, 6)
        let c1 = IntVec::from_i64(&[2, -1, -1, -1], "alpha").unwrap();
        assert_eq!(m.transpose().mul_vec(&c1).unwrap(), vec![big(-11), big(6), big(6)]);
    }

    #[test]
    fn wang_ziller_examples() {
        let r = wang_ziller(1, 1, 3, 2).unwrap();
        assert_eq!(r.w2, 0);
        assert!(r.spin);
        assert_eq!(r.c1d.abs(), big(2));
        assert_eq!(r.method.lattice.diffeo_name.as_deref(), Some("S2xS3"));
        assert!(r.agree);
        // q even, k odd: non-trivial
        assert_eq!(wang_ziller(1, 2, 3, 1).unwrap().bundle_trivial, Some(false));
        assert_eq!(wang_ziller(1, 3, 3, 1).unwrap().bundle_trivial, Some(true));
        assert_eq!(wang_ziller(1, 2, 4, 1).unwrap().bundle_trivial, Some(true));
        assert_eq!(wang_ziller(2, 2, 3, 1).unwrap().bundle_trivial, None);
        assert!(wang_ziller(0, 1, 1, 1).is_err());
    }

    #[test]
    fn ab_and_lerman() {
        assert_eq!(ab_basis(1, 1, 1), AbBasis { a1: 2, a2: 1, positive: true, c1d: 2 });
        assert_eq!(ab_basis(1, 1, 0), AbBasis { a1: 1, a2: 1, positive: false, c1d: 0 });
        let r = ab_basis(2, 3, 1);
        assert_eq!((r.a1, r.a2, r.positive), (5, 2, true));
        assert_eq!(lerman_count(1, 1).unwrap().count, 1);
        let r = lerman_count(3, 2).unwrap();
        assert_eq!(r.count, 1);
        assert!(r.suspect_inverted);
        assert_eq!(lerman_count(2, 5).unwrap().count, 3);
        assert!(lerman_count(2, 4).is_err());
    }
}
