//! Integer matrices, Smith/Hermite normal forms, integer kernels, and
//! finitely generated abelian groups with their symmetric tensor squares.
//!
//! Conventions used across the crate:
//! * lattices are stored as the *rows* of a matrix;
//! * `v ∈ ℤⁿ` acts as a column vector in `M·v`;
//! * pairs `(i,j)` with `i ≤ j` are enumerated lexicographically.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AbgroupError {
    #[error("cannot parse matrix line `{0}`")]
    Parse(String),
    #[error("matrix dimensions do not match: {0}")]
    DimensionMismatch(String),
    #[error("invariant factors must form a divisor chain of integers ≥ 2, got {0}")]
    InvalidGroup(String),
}

/// Number of unordered pairs `(i,j)`, `i ≤ j`, drawn from `0..n`.
pub fn pair_count(n: usize) -> usize {
    n * (n + 1) / 2
}

/// Lexicographic position of the pair `(i,j)` with `i ≤ j` among all such
/// pairs drawn from `0..n`.
pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i <= j && j < n);
    // pairs starting at i' < i: Σ (n - i') for i' in 0..i
    i * n - i * (i + 1) / 2 + i + (j - i)
}

/// All pairs `(i,j)`, `i ≤ j`, in lexicographic order.
pub fn pairs(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(pair_count(n));
    for i in 0..n {
        for j in i..n {
            out.push((i, j));
        }
    }
    out
}

// ---------------------------------------------------------------------------
// matrices

/// Dense integer matrix with arbitrary-precision entries, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        IntMatrix {
            rows: r,
            cols: c,
            data: rows.iter().flatten().map(|&x| BigInt::from(x)).collect(),
        }
    }

    pub fn from_bigint_rows(rows: Vec<Vec<BigInt>>, cols: usize) -> Self {
        let r = rows.len();
        assert!(rows.iter().all(|row| row.len() == cols), "ragged rows");
        IntMatrix { rows: r, cols, data: rows.into_iter().flatten().collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zero(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c).clone());
            }
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        let mut out = Self::zero(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let v = out.get(r, c) + a * other.get(k, c);
                    out.set(r, c, v);
                }
            }
        }
        out
    }

    /// `M·x` for a column vector `x`.
    pub fn mul_vec(&self, x: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, x.len(), "dimension mismatch in matrix-vector product");
        (0..self.rows)
            .map(|r| self.row(r).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `xᵀ·M` for a row vector `x`.
    pub fn vec_mul(&self, x: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.rows, x.len(), "dimension mismatch in vector-matrix product");
        let mut out = vec![BigInt::zero(); self.cols];
        for r in 0..self.rows {
            if x[r].is_zero() {
                continue;
            }
            for c in 0..self.cols {
                out[c] += &x[r] * self.get(r, c);
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// row[dst] += q · row[src]
    fn row_axpy(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for c in 0..self.cols {
            let v = self.get(dst, c) + q * self.get(src, c);
            self.set(dst, c, v);
        }
    }

    /// col[dst] += q · col[src]
    fn col_axpy(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for r in 0..self.rows {
            let v = self.get(r, dst) + q * self.get(r, src);
            self.set(r, dst, v);
        }
    }

    fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let v = -self.get(r, c);
            self.set(r, c, v);
        }
    }

    /// Determinant by fraction-free (Bareiss) elimination. Square only.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m.get(k, k).is_zero() {
                match (k + 1..n).find(|&i| !m.get(i, k).is_zero()) {
                    Some(i) => {
                        m.swap_rows(k, i);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (m.get(i, j) * m.get(k, k) - m.get(i, k) * m.get(k, j)) / &prev;
                    m.set(i, j, v);
                }
                m.set(i, k, BigInt::zero());
            }
            prev = m.get(k, k).clone();
        }
        sign * m.get(n - 1, n - 1)
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(BigInt::to_string).collect();
            writeln!(f, "  {}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for IntMatrix {
    /// One row per line, entries separated by single spaces.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// Dense rational matrix, row-major. Used for kernel computations and the
/// text interchange format (`p/q` entries).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl RatMatrix {
    pub fn from_rows(rows: Vec<Vec<BigRational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        RatMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigRational {
        &self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[BigRational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// Clears denominators row by row (row scaling does not change the
    /// kernel) and returns the resulting integer matrix.
    pub fn scale_rows_to_integer(&self) -> IntMatrix {
        let mut out = IntMatrix::zero(self.rows, self.cols);
        for r in 0..self.rows {
            let lcm = self
                .row(r)
                .iter()
                .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            for c in 0..self.cols {
                let x = self.get(r, c);
                out.set(r, c, x.numer() * (&lcm / x.denom()));
            }
        }
        out
    }
}

/// Parses the plain-text matrix format: one row per line, entries separated
/// by whitespace, each a decimal integer or `p/q`. Blank lines and lines
/// starting with `#` are ignored.
pub fn parse_rat_matrix(text: &str) -> Result<RatMatrix, AbgroupError> {
    let mut rows: Vec<Vec<BigRational>> = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let row = line
            .split_whitespace()
            .map(parse_rational)
            .collect::<Result<Vec<_>, _>>()?;
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(AbgroupError::DimensionMismatch(format!(
                    "row `{line}` has {} entries, expected {}",
                    row.len(),
                    first.len()
                )));
            }
        }
        rows.push(row);
    }
    Ok(RatMatrix::from_rows(rows))
}

/// Parses the same format restricted to integer entries.
pub fn parse_int_matrix(text: &str) -> Result<IntMatrix, AbgroupError> {
    let m = parse_rat_matrix(text)?;
    let mut out = IntMatrix::zero(m.rows(), m.cols());
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            let x = m.get(r, c);
            if !x.is_integer() {
                return Err(AbgroupError::Parse(format!("non-integer entry {x}")));
            }
            out.set(r, c, x.numer().clone());
        }
    }
    Ok(out)
}

/// Parses a single `p/q` or decimal-integer token.
pub fn parse_rational(tok: &str) -> Result<BigRational, AbgroupError> {
    let err = || AbgroupError::Parse(tok.to_owned());
    match tok.split_once('/') {
        Some((p, q)) => {
            let num: BigInt = p.trim().parse().map_err(|_| err())?;
            let den: BigInt = q.trim().parse().map_err(|_| err())?;
            if den.is_zero() {
                return Err(err());
            }
            Ok(BigRational::new(num, den))
        }
        None => {
            let n: BigInt = tok.trim().parse().map_err(|_| err())?;
            Ok(BigRational::from_integer(n))
        }
    }
}

/// Renders a rational as `p/q`, or a bare integer when the denominator is 1.
pub fn format_rational(x: &BigRational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

// ---------------------------------------------------------------------------
// Smith normal form

/// Smith normal form `U·M·V = D` with `U, V` unimodular and the diagonal a
/// divisor chain `d₁ | d₂ | …`, all `dᵢ ≥ 0`.
pub struct SmithNormalForm {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
    /// Inverse of `v`, maintained alongside it (needed to change coordinates
    /// back out of Smith form).
    pub v_inv: IntMatrix,
}

impl SmithNormalForm {
    /// Diagonal entries up to `min(rows, cols)`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d.get(i, i).clone())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|d| !d.is_zero()).count()
    }
}

/// `a / b` rounded to nearest (ties toward zero is fine here: any choice
/// with `|a - qb| ≤ |b|/2 + 1` keeps the elimination shrinking).
fn nearest_div(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = a.div_rem(b);
    if (&r * 2i32).abs() > b.abs() {
        if a.sign() == b.sign() {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}

/// Computes the Smith normal form by minimal-absolute-value pivoting.
/// Total over arbitrary-precision integers; no primality or factoring
/// anywhere.
pub fn smith_normal_form(m: &IntMatrix) -> SmithNormalForm {
    let rows = m.rows();
    let cols = m.cols();
    let mut d = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    let mut v_inv = IntMatrix::identity(cols);
    let limit = rows.min(cols);

    let mut k = 0;
    while k < limit {
        // minimal-absolute-value nonzero pivot in the trailing submatrix
        let mut pivot: Option<(usize, usize)> = None;
        for i in k..rows {
            for j in k..cols {
                if d.get(i, j).is_zero() {
                    continue;
                }
                let better = match pivot {
                    None => true,
                    Some((pi, pj)) => d.get(i, j).abs() < d.get(pi, pj).abs(),
                };
                if better {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        d.swap_rows(k, pi);
        u.swap_rows(k, pi);
        d.swap_cols(k, pj);
        v.swap_cols(k, pj);
        v_inv.swap_rows(k, pj);

        // clear row k and column k against the pivot
        let mut clean = true;
        for i in k + 1..rows {
            if d.get(i, k).is_zero() {
                continue;
            }
            let q = -nearest_div(d.get(i, k), d.get(k, k));
            d.row_axpy(i, k, &q);
            u.row_axpy(i, k, &q);
            if !d.get(i, k).is_zero() {
                clean = false;
            }
        }
        for j in k + 1..cols {
            if d.get(k, j).is_zero() {
                continue;
            }
            let q = -nearest_div(d.get(k, j), d.get(k, k));
            d.col_axpy(j, k, &q);
            v.col_axpy(j, k, &q);
            // (M·E)⁻¹ bookkeeping: col_j += q·col_k on V is row_k -= q·row_j on V⁻¹
            v_inv.row_axpy(k, j, &-q);
            if !d.get(k, j).is_zero() {
                clean = false;
            }
        }
        if !clean {
            continue; // leftover remainders became new, smaller pivot candidates
        }

        // enforce d_k | every entry of the trailing submatrix
        let mut fixed = true;
        'scan: for i in k + 1..rows {
            for j in k + 1..cols {
                if !d.get(i, j).mod_floor(d.get(k, k)).is_zero() {
                    d.row_axpy(k, i, &BigInt::one());
                    u.row_axpy(k, i, &BigInt::one());
                    fixed = false;
                    break 'scan;
                }
            }
        }
        if fixed {
            k += 1;
        }
    }

    for i in 0..limit {
        if d.get(i, i).is_negative() {
            d.negate_row(i);
            u.negate_row(i);
        }
    }
    SmithNormalForm { d, u, v, v_inv }
}

// ---------------------------------------------------------------------------
// Hermite normal form (row style)

/// Row-style Hermite normal form `H = U·M`: pivot columns strictly increase,
/// pivots are positive, entries above a pivot are reduced into `[0, pivot)`,
/// zero rows sink to the bottom.
pub struct HermiteNormalForm {
    pub h: IntMatrix,
    pub u: IntMatrix,
    /// Number of nonzero rows of `h`.
    pub rank: usize,
}

pub fn hermite_normal_form(m: &IntMatrix) -> HermiteNormalForm {
    let rows = m.rows();
    let cols = m.cols();
    let mut h = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        // Euclid down column c until at most one nonzero entry remains at r
        loop {
            let mut best: Option<usize> = None;
            for i in r..rows {
                if h.get(i, c).is_zero() {
                    continue;
                }
                best = match best {
                    None => Some(i),
                    Some(b) if h.get(i, c).abs() < h.get(b, c).abs() => Some(i),
                    keep => keep,
                };
            }
            let Some(b) = best else { break };
            h.swap_rows(r, b);
            u.swap_rows(r, b);
            let mut finished = true;
            for i in r + 1..rows {
                if h.get(i, c).is_zero() {
                    continue;
                }
                let q = -nearest_div(h.get(i, c), h.get(r, c));
                h.row_axpy(i, r, &q);
                u.row_axpy(i, r, &q);
                if !h.get(i, c).is_zero() {
                    finished = false;
                }
            }
            if finished {
                break;
            }
        }
        if h.get(r, c).is_zero() {
            continue;
        }
        if h.get(r, c).is_negative() {
            h.negate_row(r);
            u.negate_row(r);
        }
        // reduce the entries above the pivot into [0, pivot)
        for i in 0..r {
            let q = -h.get(i, c).div_floor(h.get(r, c));
            h.row_axpy(i, r, &q);
            u.row_axpy(i, r, &q);
        }
        r += 1;
    }
    HermiteNormalForm { h, u, rank: r }
}

/// The nonzero rows of the row-HNF of `m`: a canonical basis of the row
/// lattice when `m`'s rows are independent, and a canonical generating-set
/// reduction otherwise.
pub fn hnf_row_basis(m: &IntMatrix) -> IntMatrix {
    let hnf = hermite_normal_form(m);
    let rows: Vec<Vec<BigInt>> = (0..hnf.rank).map(|r| hnf.h.row(r).to_vec()).collect();
    IntMatrix::from_bigint_rows(rows, m.cols())
}

/// Decides whether `v` lies in the row lattice of `basis` (rows need not be
/// in HNF). Back-substitution against the HNF.
pub fn row_lattice_contains(basis: &IntMatrix, v: &[BigInt]) -> bool {
    assert_eq!(basis.cols(), v.len());
    let h = hnf_row_basis(basis);
    let mut rest: Vec<BigInt> = v.to_vec();
    for r in 0..h.rows() {
        let pivot_col = (0..h.cols()).find(|&c| !h.get(r, c).is_zero()).unwrap();
        if rest[pivot_col].is_zero() {
            continue;
        }
        let (q, rem) = rest[pivot_col].div_rem(h.get(r, pivot_col));
        if !rem.is_zero() {
            return false;
        }
        for c in 0..h.cols() {
            let x = &rest[c] - &q * h.get(r, c);
            rest[c] = x;
        }
    }
    rest.iter().all(Zero::is_zero)
}

// ---------------------------------------------------------------------------
// integer kernel

/// ℤ-basis of `{v ∈ ℤⁿ : M·v = 0}` for a rational matrix `M`, returned as
/// the rows of an integer matrix in row-HNF. The kernel of a rational matrix
/// is automatically saturated, and every row of a basis of a saturated
/// lattice is primitive.
pub fn integer_kernel(m: &RatMatrix) -> IntMatrix {
    let a = m.scale_rows_to_integer();
    integer_kernel_int(&a)
}

/// Same as [`integer_kernel`] for an integer matrix.
pub fn integer_kernel_int(a: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(a);
    let rank = snf.rank();
    let n = a.cols();
    // A·(col_j V) = d_j · (col_j U⁻¹) vanishes exactly for j ≥ rank
    let rows: Vec<Vec<BigInt>> = (rank..n)
        .map(|j| (0..n).map(|i| snf.v.get(i, j).clone()).collect())
        .collect();
    hnf_row_basis(&IntMatrix::from_bigint_rows(rows, n))
}

/// Extends a saturated lattice basis (rows of `k`, assumed independent) to a
/// unimodular matrix: returns `P` with `P` unimodular whose first `k.rows()`
/// rows span the same lattice as `k`, together with `P⁻¹`.
pub fn unimodular_completion(k: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let snf = smith_normal_form(k);
    assert_eq!(snf.rank(), k.rows(), "completion needs independent rows");
    debug_assert!(
        snf.diagonal().iter().all(|d| d.is_one()),
        "completion needs a saturated lattice"
    );
    // K = U⁻¹·[I 0]·V⁻¹, so the first rows of V⁻¹ span the same lattice.
    (snf.v_inv, snf.v)
}

// ---------------------------------------------------------------------------
// finitely generated abelian groups

/// A finitely generated abelian group in canonical form
/// `ℤ^free_rank ⊕ ℤ/d₁ ⊕ … ⊕ ℤ/dₖ` with `d₁ | d₂ | … | dₖ` and every
/// `dᵢ ≥ 2`. Generator order everywhere: free generators first, then the
/// torsion generators in chain order.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct FgAbelianGroup {
    pub free_rank: usize,
    #[serde(serialize_with = "crate::abgroup::serialize_bigint_vec")]
    pub invariant_factors: Vec<BigInt>,
}

impl FgAbelianGroup {
    pub fn new(free_rank: usize, invariant_factors: Vec<BigInt>) -> Result<Self, AbgroupError> {
        for w in invariant_factors.windows(2) {
            if !w[1].mod_floor(&w[0]).is_zero() {
                return Err(AbgroupError::InvalidGroup(format!("{} ∤ {}", w[0], w[1])));
            }
        }
        if invariant_factors.iter().any(|d| d < &BigInt::from(2)) {
            return Err(AbgroupError::InvalidGroup("factor below 2".into()));
        }
        Ok(FgAbelianGroup { free_rank, invariant_factors })
    }

    pub fn trivial() -> Self {
        FgAbelianGroup { free_rank: 0, invariant_factors: vec![] }
    }

    pub fn free(rank: usize) -> Self {
        FgAbelianGroup { free_rank: rank, invariant_factors: vec![] }
    }

    /// Canonicalizes an arbitrary multiset of cyclic orders (`0` meaning ℤ)
    /// into invariant-factor form, by the gcd/lcm exchange: replacing any
    /// non-comparable pair `(a, b)` by `(gcd, lcm)` preserves the group and
    /// terminates in a divisor chain. No factoring involved.
    pub fn from_cyclic_orders(extra_free_rank: usize, orders: &[BigInt]) -> Self {
        let mut free = extra_free_rank;
        let mut tors: Vec<BigInt> = Vec::new();
        for d in orders {
            let d = d.abs();
            if d.is_zero() {
                free += 1;
            } else if !d.is_one() {
                tors.push(d);
            }
        }
        loop {
            let mut changed = false;
            for i in 0..tors.len() {
                for j in i + 1..tors.len() {
                    let (a, b) = (tors[i].clone(), tors[j].clone());
                    if b.mod_floor(&a).is_zero() {
                        continue;
                    }
                    let g = a.gcd(&b);
                    let l = &a / &g * &b;
                    tors[i] = g;
                    tors[j] = l;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        tors.retain(|d| !d.is_one());
        tors.sort();
        FgAbelianGroup { free_rank: free, invariant_factors: tors }
    }

    /// Number of generators in the canonical presentation.
    pub fn generator_count(&self) -> usize {
        self.free_rank + self.invariant_factors.len()
    }

    /// Group order; `None` when infinite.
    pub fn order(&self) -> Option<BigInt> {
        if self.free_rank > 0 {
            return None;
        }
        Some(self.invariant_factors.iter().product())
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.invariant_factors.is_empty()
    }
}

impl fmt::Display for FgAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        for d in &self.invariant_factors {
            parts.push(format!("Z/{d}"));
        }
        if parts.is_empty() {
            return f.write_str("0");
        }
        f.write_str(&parts.join(" + "))
    }
}

// ---------------------------------------------------------------------------
// symmetric tensor square

/// The symmetric square `A ⊙ A = (A ⊗ A)/⟨x − xᵒᵖ⟩` together with the images
/// of the pair generators.
#[derive(Clone, Debug)]
pub struct SymSquare {
    pub result: FgAbelianGroup,
    /// For each pair `(i ≤ j)` of source generators (lexicographic order):
    /// the coordinates of the image of `eᵢ ⊙ eⱼ` in the canonical result,
    /// free coordinates first, then torsion coordinates reduced modulo their
    /// factors.
    pub generator_map: Vec<Vec<BigInt>>,
}

/// Symmetric square of a finitely generated abelian group, computed from the
/// presentation: pair generators `e_{ij}` (`i ≤ j`), and for every torsion
/// relation `d_a·g_a = 0` and every generator `j` the relation
/// `d_a·e_{pair(a,j)} = 0`; the cokernel is put in canonical form via Smith
/// reduction.
pub fn sym_tensor_square(a: &FgAbelianGroup) -> SymSquare {
    let r = a.free_rank;
    let n = a.generator_count();
    let np = pair_count(n);

    // columns of the relation matrix
    let mut rels: Vec<Vec<BigInt>> = Vec::new();
    for (t, d) in a.invariant_factors.iter().enumerate() {
        let g = r + t;
        for j in 0..n {
            let mut col = vec![BigInt::zero(); np];
            col[pair_index(n, g.min(j), g.max(j))] = d.clone();
            rels.push(col);
        }
    }
    let rel_count = rels.len();
    let mut m = IntMatrix::zero(np, rel_count);
    for (c, col) in rels.iter().enumerate() {
        for (row, v) in col.iter().enumerate() {
            if !v.is_zero() {
                m.set(row, c, v.clone());
            }
        }
    }

    let snf = smith_normal_form(&m);
    // cokernel coordinate i has modulus diag_i (0 beyond the diagonal / rank)
    let mut moduli = vec![BigInt::zero(); np];
    for (i, d) in snf.diagonal().into_iter().enumerate() {
        moduli[i] = d;
    }

    let free_pos: Vec<usize> = (0..np).filter(|&i| moduli[i].is_zero()).collect();
    let tors_pos: Vec<usize> = (0..np).filter(|&i| moduli[i] > BigInt::one()).collect();
    let factors: Vec<BigInt> = tors_pos.iter().map(|&i| moduli[i].clone()).collect();
    let result = FgAbelianGroup::new(free_pos.len(), factors.clone())
        .expect("Smith chain is already canonical");

    // image of e_p is column p of U, reordered into canonical coordinates
    let mut generator_map = Vec::with_capacity(np);
    for p in 0..np {
        let mut coords = Vec::with_capacity(free_pos.len() + tors_pos.len());
        for &i in &free_pos {
            coords.push(snf.u.get(i, p).clone());
        }
        for (t, &i) in tors_pos.iter().enumerate() {
            coords.push(snf.u.get(i, p).mod_floor(&factors[t]));
        }
        generator_map.push(coords);
    }
    SymSquare { result, generator_map }
}

pub(crate) fn serialize_bigint_vec<S: serde::Serializer>(
    v: &[BigInt],
    s: S,
) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        seq.serialize_element(&x.to_string())?;
    }
    seq.end()
}
