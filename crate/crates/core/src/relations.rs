//! Quadratic relations of finitely generated subgroups of (ℝ₊*, ·) through
//! their logarithms: basis reduction, the lattice of quadratic relations,
//! freeness certificates, and transport of relations to integral quadratic
//! forms.
//!
//! Exact mode works on logarithms expressed over a shared real basis with a
//! product table, and every verdict is a proof. Numeric mode works on
//! big-float logarithms with integer-relation detection; it can certify a
//! relation (residual checked against `2^(−prec/2)`) but never independence,
//! so "free" weakens to "free up to a coefficient bound".

use crate::abgroup::{
    hnf_row_basis, integer_kernel, pair_count, pair_index, pairs, row_lattice_contains,
    smith_normal_form, unimodular_completion, IntMatrix, RatMatrix,
};
use crate::bigfloat::BigFloat;
use crate::exactreal::{ExactReal, ExactRealError};
use crate::qforms::{form_from_symsquare, IntegralQuadraticForm, SymSquareElement};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RelationsError {
    #[error("generator list is empty")]
    EmptyGenerators,
    #[error("generator {0} is zero — the logarithm of 1 generates nothing")]
    ZeroGenerator(usize),
    #[error("exact generators must all live on one shared basis")]
    MixedBases,
    #[error(transparent)]
    Exact(#[from] ExactRealError),
    #[error("precision exhausted after {steps} detection steps; retry with more bits")]
    PrecisionExhausted { steps: usize },
}

/// The logarithms of the multiplicative generators, in one of two modes.
#[derive(Debug, Clone)]
pub enum LogGenerators {
    /// Exact coordinates over a shared [`crate::exactreal::RealBasis`].
    Exact(Vec<ExactReal>),
    /// Big-float values `ln λᵢ` at a caller-chosen precision.
    Numeric(Vec<BigFloat>),
}

impl LogGenerators {
    pub fn exact(values: Vec<ExactReal>) -> Result<Self, RelationsError> {
        if values.is_empty() {
            return Err(RelationsError::EmptyGenerators);
        }
        for (i, v) in values.iter().enumerate() {
            if v.basis() != values[0].basis() {
                return Err(RelationsError::MixedBases);
            }
            if v.is_zero() {
                return Err(RelationsError::ZeroGenerator(i));
            }
        }
        Ok(LogGenerators::Exact(values))
    }

    pub fn numeric(values: Vec<BigFloat>) -> Result<Self, RelationsError> {
        if values.is_empty() {
            return Err(RelationsError::EmptyGenerators);
        }
        if let Some(i) = values.iter().position(BigFloat::is_zero) {
            return Err(RelationsError::ZeroGenerator(i));
        }
        Ok(LogGenerators::Numeric(values))
    }

    pub fn len(&self) -> usize {
        match self {
            LogGenerators::Exact(v) => v.len(),
            LogGenerators::Numeric(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn mode_name(&self) -> &'static str {
        match self {
            LogGenerators::Exact(_) => "exact",
            LogGenerators::Numeric(_) => "numeric",
        }
    }
}

/// Knobs for the numeric path; ignored in exact mode.
#[derive(Debug, Clone)]
pub struct NumericOptions {
    /// Detection gives up on relations with any coefficient beyond this.
    pub coeff_bound: BigInt,
    /// Iteration cap per detection run before declaring precision exhausted.
    pub max_steps: usize,
}

impl Default for NumericOptions {
    fn default() -> Self {
        NumericOptions { coeff_bound: BigInt::from(1_000_000), max_steps: 4096 }
    }
}

/// How strong a "no further relations" statement is.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certainty {
    /// Exact arithmetic: the statement is a proof.
    Proven,
    /// Numeric detection: no relation with coefficients up to the bound was
    /// detectable at the working precision.
    UpToBound { coeff_bound: BigInt },
}

// ---------------------------------------------------------------------------
// quadratic relations

/// A primitive integer vector `c` over the pairs `tᵢ⊙tⱼ` (`i ≤ j`,
/// lexicographic) with `Σ c_(i,j) tᵢtⱼ = 0`. Normalized: gcd of the
/// coefficients is 1 and the first nonzero coefficient is positive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticRelation {
    n: usize,
    coeffs: Vec<BigInt>,
}

impl QuadraticRelation {
    /// Normalizes arbitrary nonzero coefficients over `pair_count(n)` pairs.
    pub fn from_coeffs(n: usize, mut coeffs: Vec<BigInt>) -> Self {
        assert_eq!(coeffs.len(), pair_count(n), "coefficient count");
        let mut g = BigInt::zero();
        for c in &coeffs {
            g = g.gcd(c);
        }
        assert!(!g.is_zero(), "a relation must have a nonzero coefficient");
        if !g.is_one() {
            for c in coeffs.iter_mut() {
                *c = &*c / &g;
            }
        }
        if coeffs.iter().find(|c| !c.is_zero()).unwrap().is_negative() {
            for c in coeffs.iter_mut() {
                *c = -&*c;
            }
        }
        QuadraticRelation { n, coeffs }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficient of `tᵢ⊙tⱼ` (order of `i`, `j` irrelevant).
    pub fn coeff(&self, i: usize, j: usize) -> &BigInt {
        &self.coeffs[pair_index(self.n, i.min(j), i.max(j))]
    }

    pub fn to_symsquare(&self) -> SymSquareElement {
        SymSquareElement::new(self.n, self.coeffs.clone())
    }

    /// The integral quadratic form `q(x) = Σ c_(i,j) xᵢxⱼ` whose isotropy
    /// locus on the dual torus carries the relation.
    pub fn to_form(&self) -> IntegralQuadraticForm {
        form_from_symsquare(&self.to_symsquare())
    }
}

impl fmt::Display for QuadraticRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for ((i, j), c) in pairs(self.n).into_iter().zip(&self.coeffs) {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if !mag.is_one() {
                write!(f, "{mag}·")?;
            }
            write!(f, "t{}⊙t{}", i + 1, j + 1)?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Maps a relation to its quadratic form; the relation vanishing is exactly
/// the statement that the logs land on the form's isotropy locus.
pub fn relation_to_form(rel: &QuadraticRelation) -> IntegralQuadraticForm {
    rel.to_form()
}

/// The lattice `{c : Σ c_(i,j) tᵢtⱼ = 0}` as a canonical row-HNF basis.
#[derive(Debug, Clone)]
pub struct QuadraticRelationLattice {
    n: usize,
    basis: Vec<QuadraticRelation>,
    certainty: Certainty,
}

impl QuadraticRelationLattice {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[QuadraticRelation] {
        &self.basis
    }

    pub fn certainty(&self) -> &Certainty {
        &self.certainty
    }

    pub fn is_trivial(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn contains(&self, rel: &QuadraticRelation) -> bool {
        assert_eq!(rel.n(), self.n, "relation arity mismatch");
        if self.basis.is_empty() {
            return false;
        }
        let rows: Vec<Vec<BigInt>> = self.basis.iter().map(|r| r.coeffs.clone()).collect();
        let m = IntMatrix::from_bigint_rows(rows, pair_count(self.n));
        row_lattice_contains(&m, rel.coeffs())
    }
}

/// A verdict on quadratic freeness of the generated subgroup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FreenessVerdict {
    /// Exact proof: the quadratic relation lattice of the basis is zero.
    Free,
    /// Numeric: no relation with coefficients up to the bound detected.
    FreeUpToBound { coeff_bound: BigInt },
    /// A genuine relation among the basis products; exact mode proves it,
    /// numeric mode verifies the residual against `2^(−prec/2)`.
    NotFree { witness: QuadraticRelation },
}

impl FreenessVerdict {
    pub fn from_lattice(lat: &QuadraticRelationLattice) -> Self {
        if let Some(first) = lat.basis().first() {
            FreenessVerdict::NotFree { witness: first.clone() }
        } else {
            match lat.certainty() {
                Certainty::Proven => FreenessVerdict::Free,
                Certainty::UpToBound { coeff_bound } => {
                    FreenessVerdict::FreeUpToBound { coeff_bound: coeff_bound.clone() }
                }
            }
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            FreenessVerdict::Free => "free",
            FreenessVerdict::FreeUpToBound { .. } => "free-up-to-bound",
            FreenessVerdict::NotFree { .. } => "not-free",
        }
    }
}

/// Freeness is a property of the subgroup `⟨t₁,…,tₙ⟩ < ℝ`, not of the
/// presenting family: the inputs are reduced to a ℤ-basis first and the
/// quadratic relation lattice is computed there. A witness is therefore a
/// relation over the *basis* products; `reduction` ties it back to the
/// inputs.
#[derive(Debug, Clone)]
pub struct FreenessCertificate {
    pub verdict: FreenessVerdict,
    pub reduction: BasisReduction,
}

// ---------------------------------------------------------------------------
// basis reduction

/// Result of reducing a generating family to a ℤ-independent one.
///
/// Invariants: `basis` generates the same subgroup of ℝ as the input family;
/// `expression` is the integer matrix with `gens[i] = Σ_j expression[i][j] ·
/// basis[j]`; `relations` are HNF rows spanning `ker(ℤᵐ → ℝ)`, so
/// `gens.len() = basis.len() + relations.len()`.
#[derive(Debug, Clone)]
pub struct BasisReduction {
    pub basis: LogGenerators,
    pub expression: IntMatrix,
    pub relations: Vec<Vec<BigInt>>,
    pub certainty: Certainty,
}

/// Reduces the generators to a ℤ-independent basis of the subgroup they
/// generate. Exact mode proves independence; numeric mode eliminates every
/// relation the detector can find below the coefficient bound.
pub fn reduce_to_basis(
    gens: &LogGenerators,
    opts: &NumericOptions,
) -> Result<BasisReduction, RelationsError> {
    match gens {
        LogGenerators::Exact(values) => {
            let m = values.len();
            let kernel = exact_value_kernel(values);
            let r = kernel.rows();
            if r == 0 {
                return Ok(BasisReduction {
                    basis: LogGenerators::Exact(values.clone()),
                    expression: IntMatrix::identity(m),
                    relations: vec![],
                    certainty: Certainty::Proven,
                });
            }
            let (p, p_inv) = unimodular_completion(&kernel);
            // rows 0..r of P are relations, so P·t = (0,…,0, s) exactly
            for i in 0..r {
                let zero = combo_exact(p.row(i), values)?;
                assert!(zero.is_zero(), "kernel row failed to annihilate the generators");
            }
            let mut basis_vals = Vec::with_capacity(m - r);
            for i in r..m {
                basis_vals.push(combo_exact(p.row(i), values)?);
            }
            let mut expr_rows: Vec<Vec<BigInt>> = (0..m)
                .map(|i| (r..m).map(|j| p_inv.get(i, j).clone()).collect())
                .collect();
            // canonical basis signs: leading coordinate positive
            for (j, v) in basis_vals.iter_mut().enumerate() {
                let leading_negative =
                    v.coords().iter().find(|c| !c.is_zero()).is_some_and(|c| c.is_negative());
                if leading_negative {
                    *v = v.neg();
                    for row in expr_rows.iter_mut() {
                        row[j] = -&row[j];
                    }
                }
            }
            let relations: Vec<Vec<BigInt>> =
                (0..r).map(|i| kernel.row(i).to_vec()).collect();
            Ok(BasisReduction {
                basis: LogGenerators::Exact(basis_vals),
                expression: IntMatrix::from_bigint_rows(expr_rows, m - r),
                relations,
                certainty: Certainty::Proven,
            })
        }
        LogGenerators::Numeric(values) => {
            let m = values.len();
            let mut el = eliminate(values, opts)?;
            let z = el.zeroed;
            let rel_rows: Vec<Vec<BigInt>> = (0..z).map(|i| el.g.row(i).to_vec()).collect();
            let rel_hnf = hnf_row_basis(&IntMatrix::from_bigint_rows(rel_rows, m));
            let relations = (0..rel_hnf.rows()).map(|i| rel_hnf.row(i).to_vec()).collect();
            let mut expr_rows: Vec<Vec<BigInt>> = (0..m)
                .map(|i| (z..m).map(|j| el.g_inv.get(i, j).clone()).collect())
                .collect();
            // canonical basis signs: values positive
            for (j, v) in el.values.iter_mut().enumerate() {
                if v.is_negative() {
                    *v = v.neg();
                    for row in expr_rows.iter_mut() {
                        row[j] = -&row[j];
                    }
                }
            }
            Ok(BasisReduction {
                basis: LogGenerators::Numeric(el.values),
                expression: IntMatrix::from_bigint_rows(expr_rows, m - z),
                relations,
                certainty: Certainty::UpToBound { coeff_bound: opts.coeff_bound.clone() },
            })
        }
    }
}

/// The lattice of quadratic relations `Σ c_(i,j) tᵢtⱼ = 0` of the given
/// logarithms. Exact mode needs a complete product table on the basis.
pub fn quadratic_relation_lattice(
    gens: &LogGenerators,
    opts: &NumericOptions,
) -> Result<QuadraticRelationLattice, RelationsError> {
    let n = gens.len();
    match gens {
        LogGenerators::Exact(values) => {
            let mut products = Vec::with_capacity(pair_count(n));
            for (i, j) in pairs(n) {
                products.push(values[i].multiply(&values[j])?);
            }
            let kernel = exact_value_kernel(&products);
            let basis = (0..kernel.rows())
                .map(|i| QuadraticRelation::from_coeffs(n, kernel.row(i).to_vec()))
                .collect();
            Ok(QuadraticRelationLattice { n, basis, certainty: Certainty::Proven })
        }
        LogGenerators::Numeric(values) => {
            let products: Vec<BigFloat> = pairs(n)
                .into_iter()
                .map(|(i, j)| values[i].mul(&values[j]))
                .collect();
            let el = eliminate(&products, opts)?;
            let rel_rows: Vec<Vec<BigInt>> =
                (0..el.zeroed).map(|i| el.g.row(i).to_vec()).collect();
            let rel_hnf = hnf_row_basis(&IntMatrix::from_bigint_rows(rel_rows, pair_count(n)));
            let basis = (0..rel_hnf.rows())
                .map(|i| QuadraticRelation::from_coeffs(n, rel_hnf.row(i).to_vec()))
                .collect();
            Ok(QuadraticRelationLattice {
                n,
                basis,
                certainty: Certainty::UpToBound { coeff_bound: opts.coeff_bound.clone() },
            })
        }
    }
}

/// Decides quadratic freeness of the generated subgroup: extracts a ℤ-basis
/// and derives the verdict from that basis's relation lattice. (A dependent
/// presentation like `(L, L/3, L/5)` is free — the subgroup is `(L/15)·ℤ` —
/// even though the presented products satisfy many relations.)
pub fn is_quadratically_free(
    gens: &LogGenerators,
    opts: &NumericOptions,
) -> Result<FreenessCertificate, RelationsError> {
    let reduction = reduce_to_basis(gens, opts)?;
    let lat = quadratic_relation_lattice(&reduction.basis, opts)?;
    Ok(FreenessCertificate { verdict: FreenessVerdict::from_lattice(&lat), reduction })
}

/// `Σ qᵢᵢtᵢ² + Σ_{i<j} qᵢⱼtᵢtⱼ` on big-float logs. On the dual torus with
/// coordinates `2π·tᵢ` this is the form's value scaled by `4π²`, so it
/// vanishes exactly when the point is isotropic.
pub fn isotropy_defect(q: &IntegralQuadraticForm, logs: &[BigFloat]) -> BigFloat {
    assert_eq!(q.dim(), logs.len(), "form dimension mismatch");
    let prec = logs.iter().map(BigFloat::precision_bits).max().unwrap_or(64);
    let mut acc = BigFloat::zero(prec);
    for (i, j) in pairs(q.dim()) {
        let c = q.coeff(i, j);
        if !c.is_zero() {
            acc = acc.add(&logs[i].mul(&logs[j]).mul_bigint(c));
        }
    }
    acc
}

// ---------------------------------------------------------------------------
// exact kernels

/// Kernel of `ℤᵐ → ℝ`, `x ↦ Σ xᵢ·values[i]`, as HNF rows. Works on the
/// transposed coordinate matrix: column scaling cannot change this kernel.
fn exact_value_kernel(values: &[ExactReal]) -> IntMatrix {
    let m = values.len();
    let d = values[0].basis().dim();
    let rows: Vec<Vec<BigRational>> = (0..d)
        .map(|c| values.iter().map(|v| v.coords()[c].clone()).collect())
        .collect();
    if rows.is_empty() {
        // zero-dimensional basis: everything is a relation
        return hnf_row_basis(&IntMatrix::identity(m));
    }
    integer_kernel(&RatMatrix::from_rows(rows))
}

fn combo_exact(coeffs: &[BigInt], values: &[ExactReal]) -> Result<ExactReal, ExactRealError> {
    let mut acc = values[0].scale(&BigRational::from_integer(coeffs[0].clone()));
    for (c, v) in coeffs.iter().zip(values).skip(1) {
        if !c.is_zero() {
            acc = acc.add(&v.scale(&BigRational::from_integer(c.clone())))?;
        }
    }
    Ok(acc)
}

fn combo_bigfloat(coeffs: &[BigInt], values: &[BigFloat]) -> BigFloat {
    let prec = values.iter().map(BigFloat::precision_bits).max().unwrap();
    let mut acc = BigFloat::zero(prec);
    for (c, v) in coeffs.iter().zip(values) {
        if !c.is_zero() {
            acc = acc.add(&v.mul_bigint(c));
        }
    }
    acc
}

// ---------------------------------------------------------------------------
// numeric elimination

/// State after eliminating every detectable relation from a value list:
/// `g` is unimodular with `g·t = (0,…,0 ⧺ values)` (zeroed entries first),
/// so rows `0..zeroed` of `g` are the detected relations and the expression
/// of `t` in the surviving values sits in the last columns of `g_inv`.
struct Elimination {
    g: IntMatrix,
    g_inv: IntMatrix,
    zeroed: usize,
    values: Vec<BigFloat>,
}

fn eliminate(values: &[BigFloat], opts: &NumericOptions) -> Result<Elimination, RelationsError> {
    let m = values.len();
    let mut g = IntMatrix::identity(m);
    let mut g_inv = IntMatrix::identity(m);
    let mut zeroed = 0usize;
    let mut w: Vec<BigFloat> = values.to_vec();
    while !w.is_empty() {
        let Some(c) = pslq(&w, &opts.coeff_bound, opts.max_steps)? else { break };
        let k = w.len();
        // unimodular Q with first row c: c·V = (±1, 0, …, 0) from the SNF of
        // the single-row matrix, so ±c is the first row of V⁻¹
        let snf = smith_normal_form(&IntMatrix::from_bigint_rows(vec![c.clone()], k));
        let mut q = snf.v_inv;
        let mut q_inv = snf.v;
        if q.row(0) != &c[..] {
            for j in 0..k {
                let neg = -q.get(0, j);
                q.set(0, j, neg);
                let neg = -q_inv.get(j, 0);
                q_inv.set(j, 0, neg);
            }
        }
        assert_eq!(q.row(0), &c[..], "completion failed to place the relation first");
        g = lift_block(&q, zeroed, m).mul(&g);
        g_inv = g_inv.mul(&lift_block(&q_inv, zeroed, m));
        w = (1..k).map(|r| combo_bigfloat(q.row(r), &w)).collect();
        zeroed += 1;
    }
    Ok(Elimination { g, g_inv, zeroed, values: w })
}

/// Embeds `q` as the lower-right block of an `m×m` identity.
fn lift_block(q: &IntMatrix, offset: usize, m: usize) -> IntMatrix {
    let k = q.rows();
    assert_eq!(offset + k, m);
    let mut out = IntMatrix::identity(m);
    for i in 0..k {
        for j in 0..k {
            out.set(offset + i, offset + j, q.get(i, j).clone());
        }
    }
    out
}

// ---------------------------------------------------------------------------
// integer-relation detection

/// Finds an integer relation `Σ cᵢ·values[i] = 0` with all `|cᵢ| ≤ max_coeff`,
/// or certifies that none exists below the bound.
///
/// Fixed-point lattice reduction in the Bailey style: the values are scaled
/// to integers at `prec + 64` bits and the full algorithm runs on `BigInt`.
/// A candidate is only returned after its residual `|Σ cᵢ·values[i]|`,
/// recomputed against the original values, drops below `2^(−prec/2)` where
/// `prec` is the largest input precision. `Ok(None)` means the diagonal norm
/// bound proves every relation has coefficients beyond `max_coeff`;
/// `PrecisionExhausted` means the iteration or the precision ran out first.
pub fn pslq(
    values: &[BigFloat],
    max_coeff: &BigInt,
    max_steps: usize,
) -> Result<Option<Vec<BigInt>>, RelationsError> {
    let n = values.len();
    if n == 0 {
        return Ok(None);
    }
    let in_prec = values.iter().map(BigFloat::precision_bits).max().unwrap();
    // an exact zero in the input is already a unit relation
    for (i, v) in values.iter().enumerate() {
        if v.is_zero() {
            let mut c = vec![BigInt::zero(); n];
            c[i] = BigInt::one();
            return Ok(Some(c));
        }
    }
    if n == 1 {
        // one nonzero real admits no relation at any bound
        return Ok(None);
    }

    let target = (in_prec as usize) * 3 / 4;
    let prec = in_prec as usize + 64;
    let tol = BigInt::one() << (prec - target);

    let x: Vec<BigInt> = values.iter().map(|v| to_fixed(v, prec)).collect();
    let min_abs = x.iter().map(|v| v.abs()).min().unwrap();
    if min_abs < &tol / BigInt::from(128) {
        // indistinguishable from zero at this precision
        return Err(RelationsError::PrecisionExhausted { steps: 0 });
    }

    let fmul = |a: &BigInt, b: &BigInt| -> BigInt { (a * b) >> prec };
    let fdiv = |a: &BigInt, b: &BigInt| -> BigInt { (a << prec) / b };
    // fixed-point sqrt of a fixed-point value: √(a/2^p)·2^p = isqrt(a·2^p)
    let fsqrt = |a: &BigInt| -> BigInt { (a << prec).sqrt() };

    // partial norms s_k = √(Σ_{j≥k} x_j²), then y = x/s₀ and s normalized
    let mut s = vec![BigInt::zero(); n];
    for k in 0..n {
        let mut t = BigInt::zero();
        for xj in &x[k..] {
            t += fmul(xj, xj);
        }
        s[k] = fsqrt(&t);
    }
    let total = s[0].clone();
    let mut y: Vec<BigInt> = x.iter().map(|xi| fdiv(xi, &total)).collect();
    for sk in s.iter_mut() {
        *sk = fdiv(sk, &total);
    }

    // H: n×(n−1) lower trapezoidal
    let mut h = vec![vec![BigInt::zero(); n - 1]; n];
    for i in 0..n {
        if i < n - 1 {
            if s[i].is_zero() {
                return Err(RelationsError::PrecisionExhausted { steps: 0 });
            }
            h[i][i] = fdiv(&s[i + 1], &s[i]);
        }
        for j in 0..i.min(n - 1) {
            let d = fmul(&s[j], &s[j + 1]);
            h[i][j] = if d.is_zero() {
                BigInt::zero()
            } else {
                fdiv(&-fmul(&y[i], &y[j]), &d)
            };
        }
    }

    // B columns carry relation candidates; kept as plain integers
    let mut b: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| BigInt::from(u8::from(i == j))).collect())
        .collect();

    // Hermite size-reduction of row i against rows j_hi..0, mirrored on y
    // and on the columns of B
    fn size_reduce(
        h: &mut [Vec<BigInt>],
        y: &mut [BigInt],
        b: &mut [Vec<BigInt>],
        i: usize,
        j_hi: usize,
    ) -> Result<(), RelationsError> {
        for j in (0..=j_hi).rev() {
            if h[j][j].is_zero() {
                return Err(RelationsError::PrecisionExhausted { steps: 0 });
            }
            let t = round_ratio(&h[i][j], &h[j][j]);
            if t.is_zero() {
                continue;
            }
            let add = &t * &y[i];
            y[j] += add;
            for k in 0..=j {
                let sub = &t * &h[j][k];
                h[i][k] -= sub;
            }
            for row in b.iter_mut() {
                let add = &t * &row[i];
                row[j] += add;
            }
        }
        Ok(())
    }

    // initial full reduction
    for i in 1..n {
        size_reduce(&mut h, &mut y, &mut b, i, i - 1)?;
    }

    let gamma = fsqrt(&((BigInt::from(4) << prec) / BigInt::from(3)));

    for step in 0..max_steps {
        // candidate check: a collapsed y-entry points at a relation in B
        for i in 0..n {
            if y[i].abs() < tol {
                let mut c: Vec<BigInt> = b.iter().map(|row| row[i].clone()).collect();
                let mut g = BigInt::zero();
                for ck in &c {
                    g = g.gcd(ck);
                }
                if g.is_zero() {
                    continue;
                }
                if !g.is_one() {
                    for ck in c.iter_mut() {
                        *ck = &*ck / &g;
                    }
                }
                let ok_bound = c.iter().all(|ck| &ck.abs() <= max_coeff);
                if ok_bound && residual_small(&c, values, in_prec) {
                    return Ok(Some(c));
                }
            }
        }

        // diagonal norm bound: 1/max|H| ≤ ‖c‖ for every relation c
        let recnorm = h
            .iter()
            .flat_map(|row| row.iter())
            .map(|v| v.abs())
            .max()
            .unwrap();
        if recnorm.is_zero() {
            return Err(RelationsError::PrecisionExhausted { steps: step });
        }
        let norm = (((BigInt::one() << (2 * prec)) / &recnorm) >> prec) / BigInt::from(100);
        if &norm >= max_coeff {
            return Ok(None);
        }

        // pivot: maximize γ^(i+1)·|H_ii|
        let mut m_row = 0usize;
        let mut best = BigInt::from(-1);
        let mut gpow = gamma.clone();
        for (i, row) in h.iter().enumerate().take(n - 1) {
            let sz = fmul(&gpow, &row[i].abs());
            if sz > best {
                best = sz;
                m_row = i;
            }
            gpow = fmul(&gpow, &gamma);
        }

        y.swap(m_row, m_row + 1);
        h.swap(m_row, m_row + 1);
        for row in b.iter_mut() {
            row.swap(m_row, m_row + 1);
        }

        if m_row < n - 2 {
            // Givens rotation restoring the trapezoidal corner
            let aa = h[m_row][m_row].clone();
            let bb = h[m_row][m_row + 1].clone();
            let t0 = (&aa * &aa + &bb * &bb).sqrt();
            if t0.is_zero() {
                return Err(RelationsError::PrecisionExhausted { steps: step });
            }
            let t1 = fdiv(&aa, &t0);
            let t2 = fdiv(&bb, &t0);
            for row in h.iter_mut().skip(m_row) {
                let t3 = row[m_row].clone();
                let t4 = row[m_row + 1].clone();
                row[m_row] = fmul(&t1, &t3) + fmul(&t2, &t4);
                row[m_row + 1] = fmul(&t1, &t4) - fmul(&t2, &t3);
            }
        }

        for i in m_row + 1..n {
            let j_hi = (i - 1).min(m_row + 1);
            size_reduce(&mut h, &mut y, &mut b, i, j_hi)?;
        }
    }

    Err(RelationsError::PrecisionExhausted { steps: max_steps })
}

/// `|Σ cᵢ·values[i]| < 2^(−prec/2)` recomputed on the original inputs.
fn residual_small(c: &[BigInt], values: &[BigFloat], in_prec: u32) -> bool {
    combo_bigfloat(c, values).abs_lt_pow2(-i64::from(in_prec / 2))
}

fn to_fixed(v: &BigFloat, prec: usize) -> BigInt {
    let p = v.precision_bits() as usize;
    if prec >= p {
        v.mantissa() << (prec - p)
    } else {
        v.mantissa() >> (p - prec)
    }
}

/// Round-to-nearest of `a/b`, ties toward +∞; `b` of either sign.
fn round_ratio(a: &BigInt, b: &BigInt) -> BigInt {
    let (na, nb) = if b.is_negative() { (-a, -b) } else { (a.clone(), b.clone()) };
    (BigInt::from(2) * na + &nb).div_floor(&(BigInt::from(2) * nb))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactreal::{fixtures, parse_generator};
    use proptest::prelude::*;

    fn bi(n: i64) -> BigInt {
        BigInt::from(n)
    }

    fn big(vals: &[i64]) -> Vec<BigInt> {
        vals.iter().map(|&v| bi(v)).collect()
    }

    fn ln_of(k: i64, prec: u32) -> BigFloat {
        BigFloat::from_i64(k, prec).ln().unwrap()
    }

    fn normalize_sign(mut c: Vec<BigInt>) -> Vec<BigInt> {
        if c.iter().find(|x| !x.is_zero()).is_some_and(Signed::is_negative) {
            for x in c.iter_mut() {
                *x = -&*x;
            }
        }
        c
    }

    #[test]
    fn pslq_recovers_logarithmic_relation() {
        // ln 2 + ln 3 − ln 6 = 0
        let vals = vec![ln_of(2, 192), ln_of(3, 192), ln_of(6, 192)];
        let c = pslq(&vals, &bi(1000), 500).unwrap().unwrap();
        assert_eq!(normalize_sign(c), big(&[1, 1, -1]));
    }

    #[test]
    fn pslq_certifies_absence_below_bound() {
        // 1 and √2: any relation would make √2 rational
        let vals = vec![BigFloat::from_i64(1, 256), BigFloat::from_i64(2, 256).sqrt().unwrap()];
        assert_eq!(pslq(&vals, &bi(1000), 2000).unwrap(), None);
    }

    #[test]
    fn pslq_degenerate_inputs() {
        let z = BigFloat::zero(128);
        let v = ln_of(2, 128);
        assert_eq!(pslq(&[v.clone(), z], &bi(10), 100).unwrap(), Some(big(&[0, 1])));
        assert_eq!(pslq(&[v], &bi(10), 100).unwrap(), None);
        assert_eq!(pslq(&[], &bi(10), 100).unwrap(), None);
    }

    #[test]
    fn pslq_respects_coefficient_bound() {
        // relation 355·t₁ − 113·t₂ = 0 exists but exceeds a tiny bound
        let t1 = ln_of(2, 256);
        let t2 = t1.mul_rational(&BigRational::new(bi(355), bi(113)));
        let found = pslq(&[t1.clone(), t2.clone()], &bi(30), 2000).unwrap();
        assert_eq!(found, None);
        let found = pslq(&[t1, t2], &bi(1000), 2000).unwrap().unwrap();
        assert_eq!(normalize_sign(found), big(&[355, -113]));
    }

    #[test]
    fn exact_reduction_collapses_commensurable_generators() {
        let basis = fixtures::lambda_q_basis();
        let gens = LogGenerators::exact(vec![
            parse_generator(&basis, "L").unwrap(),
            parse_generator(&basis, "L/3").unwrap(),
            parse_generator(&basis, "L/5").unwrap(),
        ])
        .unwrap();
        let red = reduce_to_basis(&gens, &NumericOptions::default()).unwrap();
        assert_eq!(red.relations.len(), 2);
        assert_eq!(red.certainty, Certainty::Proven);
        let LogGenerators::Exact(basis_vals) = &red.basis else { panic!("mode") };
        assert_eq!(basis_vals.len(), 1);
        // the subgroup ⟨L, L/3, L/5⟩ is (1/15)·ℤ·L
        let fifteenth = BigRational::new(bi(1), bi(15));
        assert_eq!(basis_vals[0].coords(), &[fifteenth.clone()]);
        let e: Vec<BigInt> = (0..3).map(|i| red.expression.get(i, 0).clone()).collect();
        assert_eq!(e, big(&[15, 5, 3]));
    }

    #[test]
    fn exact_reduction_keeps_independent_generators() {
        let basis = fixtures::sqrt2_basis();
        let gens =
            LogGenerators::exact(vec![basis.unit(0), basis.unit(1)]).unwrap();
        let red = reduce_to_basis(&gens, &NumericOptions::default()).unwrap();
        assert!(red.relations.is_empty());
        assert_eq!(red.expression, IntMatrix::identity(2));
        let LogGenerators::Exact(vals) = &red.basis else { panic!("mode") };
        assert_eq!(vals.len(), 2);
        assert!(vals[0].sub(&basis.unit(0)).unwrap().is_zero());
    }

    #[test]
    fn sqrt2_relation_lattice_and_witness_form() {
        let basis = fixtures::sqrt2_basis();
        let gens = LogGenerators::exact(vec![basis.unit(0), basis.unit(1)]).unwrap();
        let lat = quadratic_relation_lattice(&gens, &NumericOptions::default()).unwrap();
        assert_eq!(lat.rank(), 1);
        // pairs lex: t₁⊙t₁, t₁⊙t₂, t₂⊙t₂ — the relation is 2t₁² = t₂²
        assert_eq!(lat.basis()[0].coeffs(), &big(&[2, 0, -1])[..]);
        assert_eq!(lat.basis()[0].to_string(), "2·t1⊙t1 - t2⊙t2");
        let cert = is_quadratically_free(&gens, &NumericOptions::default()).unwrap();
        let FreenessVerdict::NotFree { witness } = &cert.verdict else {
            panic!("expected a relation, got {}", cert.verdict.name())
        };
        assert_eq!(witness.to_form().to_literal(), "diag:[2,-1];cross:[]");
        // the witness form annihilates the generators exactly
        let LogGenerators::Exact(vals) = &gens else { unreachable!() };
        assert!(witness.to_form().evaluate_exact(vals).unwrap().is_zero());
    }

    #[test]
    fn golden_ratio_relation_exact() {
        let basis = fixtures::golden_basis();
        let gens = LogGenerators::exact(vec![basis.unit(0), basis.unit(1)]).unwrap();
        let lat = quadratic_relation_lattice(&gens, &NumericOptions::default()).unwrap();
        assert_eq!(lat.rank(), 1);
        assert_eq!(lat.basis()[0].coeffs(), &big(&[1, 1, -1])[..]);
        assert_eq!(
            lat.basis()[0].to_form().to_literal(),
            "diag:[1,-1];cross:[(0,1,1)]"
        );
    }

    #[test]
    fn golden_ratio_relation_numeric_with_residualcheck() {
        // t₁ = ln 2, t₂ = φ·ln 2 at 256 bits
        let prec = 256;
        let t1 = ln_of(2, prec);
        let phi = BigFloat::from_i64(5, prec)
            .sqrt()
            .unwrap()
            .add(&BigFloat::from_i64(1, prec))
            .shr(1);
        let t2 = phi.mul(&t1);
        let gens = LogGenerators::numeric(vec![t1.clone(), t2.clone()]).unwrap();
        let lat = quadratic_relation_lattice(&gens, &NumericOptions::default()).unwrap();
        assert_eq!(lat.rank(), 1);
        assert_eq!(lat.basis()[0].coeffs(), &big(&[1, 1, -1])[..]);
        assert!(matches!(lat.certainty(), Certainty::UpToBound { .. }));
        // residual of the witness form on the logs: < 2^-128 at 256 bits
        let defect = isotropy_defect(&lat.basis()[0].to_form(), &[t1, t2]);
        assert!(defect.abs_lt_pow2(-128));
    }

    #[test]
    fn numeric_reduction_recovers_the_generated_subgroup() {
        // ⟨ln 8, ln 2⟩ = ℤ·ln 2
        let prec = 256;
        let vals = vec![ln_of(8, prec), ln_of(2, prec)];
        let gens = LogGenerators::numeric(vals.clone()).unwrap();
        let red = reduce_to_basis(&gens, &NumericOptions::default()).unwrap();
        assert_eq!(red.relations, vec![big(&[1, -3])]);
        let LogGenerators::Numeric(basis_vals) = &red.basis else { panic!("mode") };
        assert_eq!(basis_vals.len(), 1);
        // basis value is +ln 2 after sign normalization, expression (3, 1)
        assert_eq!(red.expression.get(0, 0), &bi(3));
        assert_eq!(red.expression.get(1, 0), &bi(1));
        // expression reproduces the inputs: |E[i]·w − tᵢ| tiny
        for i in 0..2 {
            let rebuilt = basis_vals[0].mul_bigint(red.expression.get(i, 0));
            assert!(rebuilt.sub(&vals[i]).abs_lt_pow2(-200));
        }
    }

    #[test]
    fn free_verdicts_in_both_modes() {
        // single exact generator with a nonzero square: proven free
        let basis = fixtures::lambda_q_basis();
        let gens = LogGenerators::exact(vec![basis.unit(0)]).unwrap();
        let cert = is_quadratically_free(&gens, &NumericOptions::default()).unwrap();
        assert_eq!(cert.verdict, FreenessVerdict::Free);
        // ln 2, ln 3 numerically: certified only up to the bound
        let opts = NumericOptions { coeff_bound: bi(1000), max_steps: 4096 };
        let gens = LogGenerators::numeric(vec![ln_of(2, 320), ln_of(3, 320)]).unwrap();
        let cert = is_quadratically_free(&gens, &opts).unwrap();
        assert_eq!(cert.verdict, FreenessVerdict::FreeUpToBound { coeff_bound: bi(1000) });
        assert_eq!(cert.verdict.name(), "free-up-to-bound");
    }

    #[test]
    fn freeness_judges_the_subgroup_not_the_presentation() {
        // (L, L/3, L/5) generates (L/15)·ℤ — rank 1, quadratically free —
        // even though the presented products satisfy many relations
        let basis = fixtures::lambda_q_basis();
        let l = basis.unit(0);
        let gens = LogGenerators::exact(vec![
            l.clone(),
            l.scale(&BigRational::new(bi(1), bi(3))),
            l.scale(&BigRational::new(bi(1), bi(5))),
        ])
        .unwrap();
        let cert = is_quadratically_free(&gens, &NumericOptions::default()).unwrap();
        assert_eq!(cert.verdict, FreenessVerdict::Free);
        assert_eq!(cert.reduction.basis.len(), 1);
        // the presentation itself is maximally related: 6 products, 1 ray
        let lat = quadratic_relation_lattice(&gens, &NumericOptions::default()).unwrap();
        assert_eq!(lat.rank(), 5);
    }

    #[test]
    fn sqrt23_has_rank_two_quadratic_lattice() {
        let basis = fixtures::sqrt23_basis();
        let gens = LogGenerators::exact(vec![basis.unit(0), basis.unit(1), basis.unit(2)])
            .unwrap();
        let lat = quadratic_relation_lattice(&gens, &NumericOptions::default()).unwrap();
        assert_eq!(lat.rank(), 2);
        // 2t₁⊙t₁ = t₂⊙t₂ and 3t₁⊙t₁ = t₃⊙t₃ span the lattice
        let r1 = QuadraticRelation::from_coeffs(3, big(&[2, 0, 0, -1, 0, 0]));
        let r2 = QuadraticRelation::from_coeffs(3, big(&[3, 0, 0, 0, 0, -1]));
        assert!(lat.contains(&r1));
        assert!(lat.contains(&r2));
        // but the lattice knows nothing like t₂⊙t₃ alone
        let not_there = QuadraticRelation::from_coeffs(3, big(&[0, 0, 0, 0, 1, 0]));
        assert!(!lat.contains(&not_there));
    }

    #[test]
    fn duplicated_generator_embeds_the_smaller_lattice() {
        let basis = fixtures::sqrt2_basis();
        let l = basis.unit(0);
        let r = basis.unit(1);
        let gens3 = LogGenerators::exact(vec![l.clone(), r, l]).unwrap();
        let lat = quadratic_relation_lattice(&gens3, &NumericOptions::default()).unwrap();
        // pairs lex on 3 gens: 11,12,13,22,23,33
        assert_eq!(lat.rank(), 4);
        let embedded = QuadraticRelation::from_coeffs(3, big(&[2, 0, 0, -1, 0, 0]));
        assert!(lat.contains(&embedded));
        let dup = QuadraticRelation::from_coeffs(3, big(&[1, 0, -1, 0, 0, 0]));
        assert!(lat.contains(&dup));
    }

    #[test]
    fn scaling_every_generator_preserves_the_lattice() {
        let basis = fixtures::sqrt2_basis();
        let c = BigRational::new(bi(3), bi(7));
        let gens = LogGenerators::exact(vec![basis.unit(0), basis.unit(1)]).unwrap();
        let scaled = LogGenerators::exact(vec![
            basis.unit(0).scale(&c),
            basis.unit(1).scale(&c),
        ])
        .unwrap();
        let a = quadratic_relation_lattice(&gens, &NumericOptions::default()).unwrap();
        let b = quadratic_relation_lattice(&scaled, &NumericOptions::default()).unwrap();
        let ca: Vec<_> = a.basis().iter().map(|r| r.coeffs().to_vec()).collect();
        let cb: Vec<_> = b.basis().iter().map(|r| r.coeffs().to_vec()).collect();
        assert_eq!(ca, cb);
    }

    #[test]
    fn constructor_rejections() {
        assert_eq!(
            LogGenerators::exact(vec![]).unwrap_err(),
            RelationsError::EmptyGenerators
        );
        let basis = fixtures::sqrt2_basis();
        let zero = basis.unit(0).scale(&BigRational::zero());
        assert_eq!(
            LogGenerators::exact(vec![basis.unit(0), zero]).unwrap_err(),
            RelationsError::ZeroGenerator(1)
        );
        let other = fixtures::golden_basis();
        assert_eq!(
            LogGenerators::exact(vec![basis.unit(0), other.unit(0)]).unwrap_err(),
            RelationsError::MixedBases
        );
        assert_eq!(
            LogGenerators::numeric(vec![BigFloat::zero(64)]).unwrap_err(),
            RelationsError::ZeroGenerator(0)
        );
    }

    #[test]
    fn isotropy_defect_reference_value() {
        // q = x²: defect on (ln 2, ln 3) is (ln 2)² ≈ 0.4804530139182014
        let q = IntegralQuadraticForm::from_ints(&[1, 0], &[]);
        let d = isotropy_defect(&q, &[ln_of(2, 256), ln_of(3, 256)]);
        assert!((d.to_f64() - 0.480_453_013_918_201_4).abs() < 1e-12);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn rational_multiples_of_one_log_always_collapse(
            nums in proptest::collection::vec(1i64..=9, 3),
            dens in proptest::collection::vec(1i64..=9, 3),
        ) {
            let basis = fixtures::lambda_q_basis();
            let vals: Vec<ExactReal> = nums.iter().zip(&dens).map(|(&p, &q)| {
                basis.unit(0).scale(&BigRational::new(bi(p), bi(q)))
            }).collect();
            let gens = LogGenerators::exact(vals.clone()).unwrap();
            let red = reduce_to_basis(&gens, &NumericOptions::default()).unwrap();
            prop_assert_eq!(red.relations.len(), 2);
            let LogGenerators::Exact(bv) = &red.basis else { panic!("mode") };
            prop_assert_eq!(bv.len(), 1);
            // expression reconstructs every generator exactly
            for (i, v) in vals.iter().enumerate() {
                let rebuilt = bv[0].scale(&BigRational::from_integer(
                    red.expression.get(i, 0).clone(),
                ));
                prop_assert!(rebuilt.sub(v).unwrap().is_zero());
            }
            // and the quadratic lattice has full corank 1
            let lat = quadratic_relation_lattice(&gens, &NumericOptions::default()).unwrap();
            prop_assert_eq!(lat.rank(), pair_count(3) - 1);
        }
    }
}
