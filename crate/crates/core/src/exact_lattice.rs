//! Exact integer linear algebra: vectors and matrices over arbitrary-precision
//! integers, Smith normal form with tracked unimodular transforms, quotients of
//! free abelian groups by sublattices and reduction mod 2.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("vector must have at least one entry")]
    EmptyVector,
    #[error("matrix must be nonempty")]
    EmptyMatrix,
    #[error("entry count {got} does not match {rows}x{cols}")]
    EntryCount { rows: usize, cols: usize, got: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("cannot quotient by the zero vector")]
    ZeroVector,
    #[error("matrix is not unimodular")]
    NotUnimodular,
    #[error("invalid pivot permutation")]
    BadPermutation,
}

impl LatticeError {
    pub fn kind(&self) -> &'static str {
        match self {
            LatticeError::EmptyVector => "EmptyVector",
            LatticeError::EmptyMatrix => "EmptyMatrix",
            LatticeError::EntryCount { .. } => "EntryCount",
            LatticeError::DimensionMismatch(_) => "DimensionMismatch",
            LatticeError::ZeroVector => "ZeroVector",
            LatticeError::NotUnimodular => "NotUnimodular",
            LatticeError::BadPermutation => "BadPermutation",
        }
    }
}

/// Greatest common divisor of a sequence; zero for an empty or all-zero input.
pub fn gcd_all<'a, I>(values: I) -> BigInt
where
    I: IntoIterator<Item = &'a BigInt>,
{
    values
        .into_iter()
        .fold(BigInt::zero(), |acc, v| acc.gcd(v))
}

pub fn lcm_all<'a, I>(values: I) -> BigInt
where
    I: IntoIterator<Item = &'a BigInt>,
{
    values.into_iter().fold(BigInt::one(), |acc, v| acc.lcm(v))
}

/// Integer coefficient vector expressed in a named basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntVec {
    entries: Vec<BigInt>,
    basis: String,
}

impl IntVec {
    pub fn new(entries: Vec<BigInt>, basis: impl Into<String>) -> Result<Self, LatticeError> {
        if entries.is_empty() {
            return Err(LatticeError::EmptyVector);
        }
        Ok(IntVec {
            entries,
            basis: basis.into(),
        })
    }

    /// Coordinates in a quotient basis, which may be empty when the quotient
    /// has rank 0.
    pub fn coordinates(entries: Vec<BigInt>, basis: impl Into<String>) -> Self {
        IntVec {
            entries,
            basis: basis.into(),
        }
    }

    pub fn from_i64(entries: &[i64], basis: impl Into<String>) -> Result<Self, LatticeError> {
        Self::new(entries.iter().map(|&x| BigInt::from(x)).collect(), basis)
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn basis(&self) -> &str {
        &self.basis
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    /// gcd of the entries (the divisibility of the vector).
    pub fn content(&self) -> BigInt {
        gcd_all(&self.entries)
    }

    pub fn is_primitive(&self) -> bool {
        self.content().is_one()
    }

    pub fn dot(&self, other: &IntVec) -> Result<BigInt, LatticeError> {
        if self.len() != other.len() {
            return Err(LatticeError::DimensionMismatch(format!(
                "dot of lengths {} and {}",
                self.len(),
                other.len()
            )));
        }
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a * b)
            .sum())
    }

    pub fn scaled(&self, c: &BigInt) -> IntVec {
        IntVec {
            entries: self.entries.iter().map(|x| x * c).collect(),
            basis: self.basis.clone(),
        }
    }

    pub fn with_basis(mut self, basis: impl Into<String>) -> IntVec {
        self.basis = basis.into();
        self
    }
}

impl fmt::Display for IntVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")?;
        if !self.basis.is_empty() {
            write!(f, "_{}", self.basis)?;
        }
        Ok(())
    }
}

/// A vector over Z/2.
#[derive(Debug, Clone, PartialEq, Eq, Hash, serde::Serialize)]
pub struct Z2Vec(pub Vec<u8>);

impl Z2Vec {
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&b| b == 0)
    }

    pub fn bits(&self) -> &[u8] {
        &self.0
    }
}

/// Entrywise reduction mod 2. Sign-insensitive and idempotent.
pub fn mod2(v: &IntVec) -> Z2Vec {
    Z2Vec(v.entries.iter().map(reduce_mod2).collect())
}

pub fn reduce_mod2(x: &BigInt) -> u8 {
    if x.is_even() {
        0
    } else {
        1
    }
}

/// Row-major integer matrix. Zero-row matrices are allowed as the projection
/// of a quotient with no free part.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self, LatticeError> {
        if rows * cols != entries.len() {
            return Err(LatticeError::EntryCount {
                rows,
                cols,
                got: entries.len(),
            });
        }
        Ok(IntMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self, LatticeError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(LatticeError::DimensionMismatch("ragged rows".into()));
        }
        let entries = rows
            .iter()
            .flat_map(|row| row.iter().map(|&x| BigInt::from(x)))
            .collect();
        Self::new(r, c, entries)
    }

    pub fn from_big_rows(rows: Vec<Vec<BigInt>>, cols: usize) -> Result<Self, LatticeError> {
        if rows.iter().any(|row| row.len() != cols) {
            return Err(LatticeError::DimensionMismatch("ragged rows".into()));
        }
        let r = rows.len();
        Self::new(r, cols, rows.into_iter().flatten().collect())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = BigInt::one();
        }
        m
    }

    /// A single column holding `v`.
    pub fn column(v: &IntVec) -> Self {
        IntMatrix {
            rows: v.len(),
            cols: 1,
            entries: v.entries.clone(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: BigInt) {
        self.entries[r * self.cols + c] = value;
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col(&self, c: usize) -> Vec<BigInt> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix, LatticeError> {
        if self.cols != other.rows {
            return Err(LatticeError::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if !b.is_zero() {
                        out.entries[r * other.cols + c] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &IntVec) -> Result<Vec<BigInt>, LatticeError> {
        if self.cols != v.len() {
            return Err(LatticeError::DimensionMismatch(format!(
                "{}x{} times vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|r| self.row(r).iter().zip(v.entries()).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|r| (0..r).all(|c| self.get(r, c) == self.get(c, r)))
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<BigInt, LatticeError> {
        if self.rows != self.cols {
            return Err(LatticeError::DimensionMismatch(
                "determinant of a non-square matrix".into(),
            ));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut m = self.to_rows();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                    Some(i) => {
                        m.swap(i, k);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                    m[i][j] = v / &prev;
                }
            }
            prev = m[k][k].clone();
        }
        Ok(sign * &m[n - 1][n - 1])
    }

    pub fn is_unimodular(&self) -> bool {
        self.determinant()
            .map(|d| d.abs().is_one())
            .unwrap_or(false)
    }

    /// Integer inverse of a unimodular matrix (adjugate route).
    pub fn unimodular_inverse(&self) -> Result<IntMatrix, LatticeError> {
        let det = self.determinant()?;
        if !det.abs().is_one() {
            return Err(LatticeError::NotUnimodular);
        }
        let n = self.rows;
        let mut inv = Self::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                let minor = self.minor(c, r);
                let cof = minor.determinant()?;
                let signed = if (r + c) % 2 == 0 { cof } else { -cof };
                inv.set(r, c, signed * &det);
            }
        }
        Ok(inv)
    }

    fn minor(&self, skip_r: usize, skip_c: usize) -> IntMatrix {
        let mut entries = Vec::with_capacity((self.rows - 1) * (self.cols - 1));
        for r in (0..self.rows).filter(|&r| r != skip_r) {
            for c in (0..self.cols).filter(|&c| c != skip_c) {
                entries.push(self.get(r, c).clone());
            }
        }
        IntMatrix {
            rows: self.rows - 1,
            cols: self.cols - 1,
            entries,
        }
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.entries.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for r in 0..self.rows {
            self.entries.swap(r * self.cols + i, r * self.cols + j);
        }
    }

    /// row_i += c * row_j
    fn add_row(&mut self, i: usize, j: usize, c: &BigInt) {
        for k in 0..self.cols {
            let v = self.get(j, k) * c;
            self.entries[i * self.cols + k] += v;
        }
    }

    /// col_i += c * col_j
    fn add_col(&mut self, i: usize, j: usize, c: &BigInt) {
        for r in 0..self.rows {
            let v = self.get(r, j) * c;
            self.entries[r * self.cols + i] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for k in 0..self.cols {
            let idx = i * self.cols + k;
            self.entries[idx] = -std::mem::take(&mut self.entries[idx]);
        }
    }

    fn negate_col(&mut self, i: usize) {
        for r in 0..self.rows {
            let idx = r * self.cols + i;
            self.entries[idx] = -std::mem::take(&mut self.entries[idx]);
        }
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Smith normal form `A = U·D·V` with `U`, `V` unimodular and `D` diagonal,
/// nonnegative, with `d_i | d_{i+1}`. The inverses are carried along so that
/// `U⁻¹·A·V⁻¹ = D` is available without a separate inversion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnfResult {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub u_inv: IntMatrix,
    pub v_inv: IntMatrix,
}

impl SnfResult {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d.get(i, i).clone())
            .collect()
    }

    /// Nonzero invariant factors.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.diagonal().into_iter().filter(|d| !d.is_zero()).collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

/// Order in which the elimination first visits rows and columns. The default
/// picks the smallest nonzero absolute value, breaking ties by lowest row then
/// lowest column. `Permuted` applies the given permutations before running the
/// default rule, which changes every tie-break and hence the transforms.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub enum PivotOrder {
    #[default]
    SmallestAbs,
    Permuted { rows: Vec<usize>, cols: Vec<usize> },
}

pub fn snf(a: &IntMatrix) -> Result<SnfResult, LatticeError> {
    snf_with(a, &PivotOrder::SmallestAbs)
}

pub fn snf_with(a: &IntMatrix, order: &PivotOrder) -> Result<SnfResult, LatticeError> {
    if a.rows() == 0 || a.cols() == 0 {
        return Err(LatticeError::EmptyMatrix);
    }
    let mut st = SnfState {
        d: a.clone(),
        u: IntMatrix::identity(a.rows()),
        u_inv: IntMatrix::identity(a.rows()),
        v: IntMatrix::identity(a.cols()),
        v_inv: IntMatrix::identity(a.cols()),
    };
    if let PivotOrder::Permuted { rows, cols } = order {
        if !is_permutation(rows, a.rows()) || !is_permutation(cols, a.cols()) {
            return Err(LatticeError::BadPermutation);
        }
        st.permute_rows(rows);
        st.permute_cols(cols);
    }
    st.reduce();
    Ok(SnfResult {
        u: st.u,
        d: st.d,
        v: st.v,
        u_inv: st.u_inv,
        v_inv: st.v_inv,
    })
}

fn is_permutation(p: &[usize], n: usize) -> bool {
    let mut seen = vec![false; n];
    p.len() == n
        && p.iter().all(|&i| {
            if i >= n || seen[i] {
                false
            } else {
                seen[i] = true;
                true
            }
        })
}

struct SnfState {
    d: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
    v_inv: IntMatrix,
}

impl SnfState {
    // Invariant maintained by every elementary step: A = u·d·v and u_inv·A·v_inv = d.

    fn swap_rows(&mut self, i: usize, j: usize) {
        self.d.swap_rows(i, j);
        self.u.swap_cols(i, j);
        self.u_inv.swap_rows(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.d.swap_cols(i, j);
        self.v.swap_rows(i, j);
        self.v_inv.swap_cols(i, j);
    }

    fn add_row(&mut self, i: usize, j: usize, c: &BigInt) {
        self.d.add_row(i, j, c);
        self.u.add_col(j, i, &-c);
        self.u_inv.add_row(i, j, c);
    }

    fn add_col(&mut self, i: usize, j: usize, c: &BigInt) {
        self.d.add_col(i, j, c);
        self.v.add_row(j, i, &-c);
        self.v_inv.add_col(i, j, c);
    }

    fn negate_row(&mut self, i: usize) {
        self.d.negate_row(i);
        self.u.negate_col(i);
        self.u_inv.negate_row(i);
    }

    fn permute_rows(&mut self, perm: &[usize]) {
        // Selection by swaps: position t receives original row perm[t].
        let mut current: Vec<usize> = (0..perm.len()).collect();
        for t in 0..perm.len() {
            let pos = current.iter().position(|&x| x == perm[t]).unwrap_or(t);
            self.swap_rows(t, pos);
            current.swap(t, pos);
        }
    }

    fn permute_cols(&mut self, perm: &[usize]) {
        let mut current: Vec<usize> = (0..perm.len()).collect();
        for t in 0..perm.len() {
            let pos = current.iter().position(|&x| x == perm[t]).unwrap_or(t);
            self.swap_cols(t, pos);
            current.swap(t, pos);
        }
    }

    fn smallest_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for r in t..self.d.rows() {
            for c in t..self.d.cols() {
                let x = self.d.get(r, c);
                if x.is_zero() {
                    continue;
                }
                match best {
                    Some((br, bc)) if self.d.get(br, bc).abs() <= x.abs() => {}
                    _ => best = Some((r, c)),
                }
            }
        }
        best
    }

    fn reduce(&mut self) {
        let steps = self.d.rows().min(self.d.cols());
        for t in 0..steps {
            let Some((pr, pc)) = self.smallest_pivot(t) else {
                break;
            };
            self.swap_rows(t, pr);
            self.swap_cols(t, pc);
            loop {
                let pivot = self.d.get(t, t).clone();
                let mut clear = true;
                for r in t + 1..self.d.rows() {
                    let q = self.d.get(r, t).div_floor(&pivot);
                    if !q.is_zero() {
                        self.add_row(r, t, &-q);
                    }
                    if !self.d.get(r, t).is_zero() {
                        clear = false;
                    }
                }
                for c in t + 1..self.d.cols() {
                    let q = self.d.get(t, c).div_floor(&pivot);
                    if !q.is_zero() {
                        self.add_col(c, t, &-q);
                    }
                    if !self.d.get(t, c).is_zero() {
                        clear = false;
                    }
                }
                if !clear {
                    let (pr, pc) = self.smallest_pivot(t).expect("nonzero entries remain");
                    self.swap_rows(t, pr);
                    self.swap_cols(t, pc);
                    continue;
                }
                // Divisibility chain: pull any entry not divisible by the pivot into row t.
                let bad = (t + 1..self.d.rows()).find(|&r| {
                    (t + 1..self.d.cols()).any(|c| !self.d.get(r, c).is_multiple_of(&pivot))
                });
                match bad {
                    Some(r) => self.add_row(t, r, &BigInt::one()),
                    None => break,
                }
            }
            if self.d.get(t, t).is_negative() {
                self.negate_row(t);
            }
        }
    }
}

/// `Z^n / L` for a sublattice `L`. Free coordinates come from `projection`,
/// torsion coordinates from `torsion_projection` read modulo the matching
/// entry of `torsion`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientLattice {
    pub ambient_rank: usize,
    pub rank: usize,
    pub torsion: Vec<BigInt>,
    pub projection: IntMatrix,
    pub torsion_projection: IntMatrix,
}

impl QuotientLattice {
    /// Free coordinates of the image of `x`.
    pub fn project(&self, x: &IntVec) -> Result<Vec<BigInt>, LatticeError> {
        self.projection.mul_vec(x)
    }

    /// Torsion coordinates of the image of `x`, reduced into `[0, d)`.
    pub fn project_torsion(&self, x: &IntVec) -> Result<Vec<BigInt>, LatticeError> {
        let raw = self.torsion_projection.mul_vec(x)?;
        Ok(raw
            .into_iter()
            .zip(&self.torsion)
            .map(|(v, d)| v.mod_floor(d))
            .collect())
    }

    /// Replace the free basis by `g·basis` for a unimodular `g` of size `rank`.
    pub fn change_free_basis(&self, g: &IntMatrix) -> Result<QuotientLattice, LatticeError> {
        if g.rows() != self.rank || g.cols() != self.rank {
            return Err(LatticeError::DimensionMismatch(
                "basis change must be rank x rank".into(),
            ));
        }
        if !g.is_unimodular() {
            return Err(LatticeError::NotUnimodular);
        }
        Ok(QuotientLattice {
            projection: g.mul(&self.projection)?,
            ..self.clone()
        })
    }
}

/// Quotient of `Z^n` by the span of the columns of `generators` (n rows).
pub fn quotient_by_sublattice(
    generators: &IntMatrix,
    order: &PivotOrder,
) -> Result<QuotientLattice, LatticeError> {
    let n = generators.rows();
    let res = snf_with(generators, order)?;
    let diag = res.diagonal();
    let mut torsion = Vec::new();
    let mut torsion_rows = Vec::new();
    let mut free_rows = Vec::new();
    for r in 0..n {
        let d = diag.get(r).cloned().unwrap_or_else(BigInt::zero);
        if d.is_zero() {
            free_rows.push(res.u_inv.row(r).to_vec());
        } else if !d.is_one() {
            torsion.push(d);
            torsion_rows.push(res.u_inv.row(r).to_vec());
        }
    }
    Ok(QuotientLattice {
        ambient_rank: n,
        rank: free_rows.len(),
        torsion,
        projection: IntMatrix::from_big_rows(free_rows, n)?,
        torsion_projection: IntMatrix::from_big_rows(torsion_rows, n)?,
    })
}

pub fn quotient_by_vector(ambient_rank: usize, e: &IntVec) -> Result<QuotientLattice, LatticeError> {
    quotient_by_vector_with(ambient_rank, e, &PivotOrder::SmallestAbs)
}

pub fn quotient_by_vector_with(
    ambient_rank: usize,
    e: &IntVec,
    order: &PivotOrder,
) -> Result<QuotientLattice, LatticeError> {
    if e.len() != ambient_rank {
        return Err(LatticeError::DimensionMismatch(format!(
            "vector of length {} in rank {ambient_rank}",
            e.len()
        )));
    }
    if e.is_zero() {
        return Err(LatticeError::ZeroVector);
    }
    quotient_by_sublattice(&IntMatrix::column(e), order)
}

/// Solve `G·x = b` over the integers for unimodular `G`.
pub fn solve_unimodular(g: &IntMatrix, b: &[BigInt]) -> Result<Vec<BigInt>, LatticeError> {
    let inv = g.unimodular_inverse()?;
    let v = IntVec::new(b.to_vec(), "")?;
    inv.mul_vec(&v)
}
