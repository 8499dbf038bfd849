//! Integral quadratic forms on ℤⁿ and their bilinear companions.
//!
//! A quadratic form is stored as its diagonal coefficients plus one integer
//! per unordered pair `i < j` — never as a half-integer symmetric matrix, so
//! everything stays in ℤ. `polarize` produces the canonical upper-triangular
//! integral bilinear form inducing the quadratic form on the diagonal.

use crate::abgroup::{pair_count, pair_index, IntMatrix};
use crate::exactreal::{ExactReal, ExactRealError};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum QformsError {
    #[error("matrix is not antisymmetric at entry ({0}, {1})")]
    NotAntisymmetric(usize, usize),
    #[error("cannot parse form literal: {0}")]
    Parse(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

/// An integral bilinear form: an arbitrary `n×n` integer matrix acting as
/// `B(x, y) = xᵀ·B·y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegralBilinearForm {
    matrix: IntMatrix,
}

impl IntegralBilinearForm {
    pub fn new(matrix: IntMatrix) -> Self {
        assert_eq!(matrix.rows(), matrix.cols(), "bilinear form must be square");
        IntegralBilinearForm { matrix }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        Self::new(IntMatrix::from_rows(rows))
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn entry(&self, i: usize, j: usize) -> &BigInt {
        self.matrix.get(i, j)
    }

    pub fn is_antisymmetric(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (i..n).all(|j| self.entry(i, j) == &-self.entry(j, i)))
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim());
        let n = self.dim();
        let mut m = IntMatrix::zero(n, n);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, self.entry(i, j) + other.entry(i, j));
            }
        }
        IntegralBilinearForm { matrix: m }
    }

    /// `B(x, y)` on integer vectors.
    pub fn evaluate_int(&self, x: &[BigInt], y: &[BigInt]) -> BigInt {
        assert_eq!(x.len(), self.dim());
        assert_eq!(y.len(), self.dim());
        let mut acc = BigInt::zero();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                acc += xi * self.entry(i, j) * yj;
            }
        }
        acc
    }

    /// `B(x, y)` on rational vectors.
    pub fn evaluate_rat(&self, x: &[BigRational], y: &[BigRational]) -> BigRational {
        assert_eq!(x.len(), self.dim());
        assert_eq!(y.len(), self.dim());
        let mut acc = BigRational::zero();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                acc += xi * BigRational::from_integer(self.entry(i, j).clone()) * yj;
            }
        }
        acc
    }
}

/// An integral quadratic form `q(x) = Σ qᵢᵢ xᵢ² + Σ_{i<j} qᵢⱼ xᵢ xⱼ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegralQuadraticForm {
    n: usize,
    diag: Vec<BigInt>,
    /// Cross coefficients indexed by strict pairs `i < j`, lexicographic.
    cross: Vec<BigInt>,
}

fn strict_pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Lexicographic position of the strict pair `(i, j)`, `i < j`, within `0..n`.
fn strict_pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

impl IntegralQuadraticForm {
    pub fn new(diag: Vec<BigInt>, cross: Vec<BigInt>) -> Self {
        let n = diag.len();
        assert_eq!(cross.len(), strict_pair_count(n), "cross coefficient count");
        IntegralQuadraticForm { n, diag, cross }
    }

    pub fn zero(n: usize) -> Self {
        IntegralQuadraticForm {
            n,
            diag: vec![BigInt::zero(); n],
            cross: vec![BigInt::zero(); strict_pair_count(n)],
        }
    }

    pub fn from_ints(diag: &[i64], cross: &[(usize, usize, i64)]) -> Self {
        let mut q = Self::zero(diag.len());
        for (i, d) in diag.iter().enumerate() {
            q.diag[i] = BigInt::from(*d);
        }
        for &(i, j, c) in cross {
            assert!(i < j && j < q.n, "cross indices must satisfy i < j < n");
            q.cross[strict_pair_index(q.n, i, j)] = BigInt::from(c);
        }
        q
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn diag(&self, i: usize) -> &BigInt {
        &self.diag[i]
    }

    /// The coefficient of `xᵢxⱼ`: `qᵢᵢ` when `i = j`, else the cross term.
    pub fn coeff(&self, i: usize, j: usize) -> &BigInt {
        if i == j {
            &self.diag[i]
        } else {
            &self.cross[strict_pair_index(self.n, i.min(j), i.max(j))]
        }
    }

    pub fn is_zero(&self) -> bool {
        self.diag.iter().all(Zero::is_zero) && self.cross.iter().all(Zero::is_zero)
    }

    /// `q(v)` on a rational vector — exact.
    pub fn evaluate_rat(&self, v: &[BigRational]) -> BigRational {
        assert_eq!(v.len(), self.n, "vector length mismatch");
        let mut acc = BigRational::zero();
        for i in 0..self.n {
            if !self.diag[i].is_zero() {
                acc += BigRational::from_integer(self.diag[i].clone()) * &v[i] * &v[i];
            }
        }
        for i in 0..self.n {
            for j in i + 1..self.n {
                let c = self.coeff(i, j);
                if !c.is_zero() {
                    acc += BigRational::from_integer(c.clone()) * &v[i] * &v[j];
                }
            }
        }
        acc
    }

    /// `q(t)` on a vector of exact reals, via the basis product table: the
    /// result lives on the products basis. A missing product entry surfaces
    /// as `ProductIncomplete`.
    pub fn evaluate_exact(&self, t: &[ExactReal]) -> Result<ExactReal, ExactRealError> {
        assert_eq!(t.len(), self.n, "vector length mismatch");
        let mut acc: Option<ExactReal> = None;
        for i in 0..self.n {
            for j in i..self.n {
                let c = self.coeff(i, j);
                if c.is_zero() {
                    continue;
                }
                let prod = t[i]
                    .multiply(&t[j])?
                    .scale(&BigRational::from_integer(c.clone()));
                acc = Some(match acc {
                    None => prod,
                    Some(a) => a.add(&prod)?,
                });
            }
        }
        match acc {
            Some(a) => Ok(a),
            None => {
                // zero form: produce the zero of the products basis
                let target = t
                    .first()
                    .and_then(|x| x.basis().product_target().cloned())
                    .ok_or(ExactRealError::NoProducts)?;
                Ok(target.zero_on())
            }
        }
    }

    /// Canonical `diag:[…];cross:[(i,j,c),…]` literal (0-based indices).
    pub fn to_literal(&self) -> String {
        let diag: Vec<String> = self.diag.iter().map(BigInt::to_string).collect();
        let mut cross: Vec<String> = Vec::new();
        for i in 0..self.n {
            for j in i + 1..self.n {
                let c = self.coeff(i, j);
                if !c.is_zero() {
                    cross.push(format!("({i},{j},{c})"));
                }
            }
        }
        format!("diag:[{}];cross:[{}]", diag.join(","), cross.join(","))
    }

    /// Parses the literal format produced by [`to_literal`]. Whitespace is
    /// ignored; the cross list may be empty or omitted entirely.
    pub fn parse_literal(text: &str) -> Result<Self, QformsError> {
        let err = |msg: &str| QformsError::Parse(format!("{msg} in `{text}`"));
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let mut diag_part = None;
        let mut cross_part = None;
        for section in compact.split(';') {
            if section.is_empty() {
                continue;
            }
            if let Some(rest) = section.strip_prefix("diag:") {
                diag_part = Some(rest);
            } else if let Some(rest) = section.strip_prefix("cross:") {
                cross_part = Some(rest);
            } else {
                return Err(err("unknown section"));
            }
        }
        let diag_body = diag_part
            .ok_or_else(|| err("missing diag section"))?
            .strip_prefix('[')
            .and_then(|s| s.strip_suffix(']'))
            .ok_or_else(|| err("diag needs [...]"))?;
        let diag: Vec<BigInt> = if diag_body.is_empty() {
            vec![]
        } else {
            diag_body
                .split(',')
                .map(|t| t.parse().map_err(|_| err("bad diagonal entry")))
                .collect::<Result<_, _>>()?
        };
        let n = diag.len();
        let mut q = Self::zero(n);
        q.diag = diag;
        if let Some(cross) = cross_part {
            let body = cross
                .strip_prefix('[')
                .and_then(|s| s.strip_suffix(']'))
                .ok_or_else(|| err("cross needs [...]"))?;
            if !body.is_empty() {
                for triple in body.split("),") {
                    let triple = triple
                        .trim_start_matches('(')
                        .trim_end_matches(')');
                    let parts: Vec<&str> = triple.split(',').collect();
                    if parts.len() != 3 {
                        return Err(err("cross entries are (i,j,c)"));
                    }
                    let i: usize = parts[0].parse().map_err(|_| err("bad index"))?;
                    let j: usize = parts[1].parse().map_err(|_| err("bad index"))?;
                    let c: BigInt = parts[2].parse().map_err(|_| err("bad coefficient"))?;
                    if i >= j || j >= n {
                        return Err(err("cross indices must satisfy i < j < n"));
                    }
                    q.cross[strict_pair_index(n, i, j)] = c;
                }
            }
        }
        Ok(q)
    }
}

impl fmt::Display for IntegralQuadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_literal())
    }
}

impl serde::Serialize for IntegralQuadraticForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("IntegralQuadraticForm", 3)?;
        st.serialize_field("n", &self.n)?;
        let diag: Vec<String> = self.diag.iter().map(BigInt::to_string).collect();
        st.serialize_field("diag", &diag)?;
        let mut cross: Vec<(usize, usize, String)> = Vec::new();
        for i in 0..self.n {
            for j in i + 1..self.n {
                let c = self.coeff(i, j);
                if !c.is_zero() {
                    cross.push((i, j, c.to_string()));
                }
            }
        }
        st.serialize_field("cross", &cross)?;
        st.end()
    }
}

/// An element of the symmetric square `ℤⁿ ⊙ ℤⁿ`: one coefficient per pair
/// `i ≤ j` in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymSquareElement {
    n: usize,
    coeffs: Vec<BigInt>,
}

impl SymSquareElement {
    pub fn new(n: usize, coeffs: Vec<BigInt>) -> Self {
        assert_eq!(coeffs.len(), pair_count(n), "coefficient count");
        SymSquareElement { n, coeffs }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize, j: usize) -> &BigInt {
        &self.coeffs[pair_index(self.n, i.min(j), i.max(j))]
    }
}

/// The quadratic form induced by a bilinear form on the diagonal:
/// `q(x) = B(x, x)`, so `qᵢᵢ = Bᵢᵢ` and `qᵢⱼ = Bᵢⱼ + Bⱼᵢ` for `i < j`.
pub fn quad_of_bilinear(b: &IntegralBilinearForm) -> IntegralQuadraticForm {
    let n = b.dim();
    let mut q = IntegralQuadraticForm::zero(n);
    for i in 0..n {
        q.diag[i] = b.entry(i, i).clone();
        for j in i + 1..n {
            q.cross[strict_pair_index(n, i, j)] = b.entry(i, j) + b.entry(j, i);
        }
    }
    q
}

/// The canonical upper-triangular bilinear form inducing `q`: diagonal
/// `qᵢᵢ`, entry `(i, j)` above the diagonal `qᵢⱼ = q(eᵢ+eⱼ) − q(eᵢ) − q(eⱼ)`,
/// zero below. Integral by construction — no halving anywhere.
pub fn polarize(q: &IntegralQuadraticForm) -> IntegralBilinearForm {
    let n = q.dim();
    let mut m = IntMatrix::zero(n, n);
    for i in 0..n {
        m.set(i, i, q.diag[i].clone());
        for j in i + 1..n {
            m.set(i, j, q.coeff(i, j).clone());
        }
    }
    IntegralBilinearForm::new(m)
}

/// Writes an antisymmetric `B` as `D − Dᵀ` with `D` the strictly upper
/// triangular part. Fails on any matrix that is not antisymmetric.
pub fn antisym_decompose(b: &IntegralBilinearForm) -> Result<IntMatrix, QformsError> {
    let n = b.dim();
    for i in 0..n {
        for j in i..n {
            if b.entry(i, j) != &-b.entry(j, i) {
                return Err(QformsError::NotAntisymmetric(i, j));
            }
        }
    }
    let mut d = IntMatrix::zero(n, n);
    for i in 0..n {
        for j in i + 1..n {
            d.set(i, j, b.entry(i, j).clone());
        }
    }
    Ok(d)
}

/// Coefficient transport `ℤⁿ ⊙ ℤⁿ → quadratic forms`: `eᵢ⊙eⱼ ↦ xᵢxⱼ`.
pub fn form_from_symsquare(s: &SymSquareElement) -> IntegralQuadraticForm {
    let n = s.dim();
    let mut q = IntegralQuadraticForm::zero(n);
    for i in 0..n {
        q.diag[i] = s.coeff(i, i).clone();
        for j in i + 1..n {
            q.cross[strict_pair_index(n, i, j)] = s.coeff(i, j).clone();
        }
    }
    q
}

/// Inverse of [`form_from_symsquare`].
pub fn symsquare_from_form(q: &IntegralQuadraticForm) -> SymSquareElement {
    let n = q.dim();
    let mut coeffs = Vec::with_capacity(pair_count(n));
    for i in 0..n {
        for j in i..n {
            coeffs.push(q.coeff(i, j).clone());
        }
    }
    SymSquareElement::new(n, coeffs)
}
