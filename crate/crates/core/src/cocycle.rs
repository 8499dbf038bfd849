//! Group cochains on the rational torus (ℚ/ℤ)^d, the canonical
//! fractional-part section, and the explicit degree-3 obstruction cocycle of
//! an integral bilinear form together with its integral Bockstein
//! representative.
//!
//! Everything is exact: torus points are rational vectors mod 1, cochain
//! values are rationals, and the canonical section `s(g) ∈ [0,1)^d` has the
//! integer-valued coboundary `∂s(h,k) = s(h) + s(k) − s(h+k) ∈ {0,1}^d`
//! (the carry vector). For a bilinear form `B` the degree-3 cochain
//! `C = B(s ⌣ ∂s)` reduces mod 1 to a cocycle `c`, and `∂C = B(∂s ⌣ ∂s)`
//! is the integer 4-cocycle representing the Bockstein of `c`.

use crate::abgroup::format_rational;
use crate::qforms::IntegralBilinearForm;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::fmt;
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CocycleError {
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("torus dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("cup pairing mismatch: {0}")]
    PairingMismatch(String),
    #[error("value rings are incompatible: {0}")]
    RingMismatch(String),
    #[error("grid too large: {0}")]
    GridTooLarge(String),
}

// ---------------------------------------------------------------------------
// torus points

/// A point of (ℚ/ℤ)^d stored by its canonical representative in `[0,1)^d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TorusPoint {
    coords: Vec<BigRational>,
}

fn frac(x: &BigRational) -> BigRational {
    x - x.floor()
}

impl TorusPoint {
    /// Reduces arbitrary rational coordinates mod 1.
    pub fn new(coords: Vec<BigRational>) -> Self {
        TorusPoint { coords: coords.iter().map(frac).collect() }
    }

    pub fn zero(dim: usize) -> Self {
        TorusPoint { coords: vec![BigRational::zero(); dim] }
    }

    /// The grid point `(digits[0]/n, …, digits[d-1]/n)`.
    pub fn from_grid(digits: &[u32], n: u64) -> Self {
        assert!(n >= 1);
        TorusPoint::new(
            digits
                .iter()
                .map(|&k| BigRational::new(BigInt::from(k), BigInt::from(n)))
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// Canonical representatives in `[0,1)` — exactly the section values.
    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim(), "torus dimension mismatch");
        TorusPoint {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| frac(&(a + b)))
                .collect(),
        }
    }

    pub fn neg(&self) -> Self {
        TorusPoint { coords: self.coords.iter().map(|a| frac(&-a)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }
}

impl fmt::Display for TorusPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(format_rational).collect();
        write!(f, "({})", parts.join(","))
    }
}

// ---------------------------------------------------------------------------
// cochains

/// Where a cochain's values live. `Mod1` values are normalized to `[0,1)`,
/// `Integer` values are asserted integral on evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ValueRing {
    Real,
    Integer,
    Mod1,
}

/// How a cup product pairs the two value vectors into a scalar.
#[derive(Clone)]
pub enum Pairing {
    /// Scalar values multiplied: needs `value_len == 1` on both sides.
    Product,
    /// `B(x, y)` on vector values: needs `value_len == B.dim()` on both.
    Bilinear(IntegralBilinearForm),
}

type EvalFn = dyn Fn(&[TorusPoint]) -> Vec<BigRational> + Send + Sync;

/// A homogeneous group cochain on (ℚ/ℤ)^d with values in `ℝ^value_len`
/// (inhomogeneous bar convention: a degree-n cochain takes n arguments).
#[derive(Clone)]
pub struct Cochain {
    degree: usize,
    dim: usize,
    value_len: usize,
    ring: ValueRing,
    eval: Arc<EvalFn>,
}

fn normalize_value(ring: ValueRing, mut v: Vec<BigRational>) -> Vec<BigRational> {
    match ring {
        ValueRing::Real => v,
        ValueRing::Integer => {
            assert!(
                v.iter().all(BigRational::is_integer),
                "integer-ring cochain produced a non-integer value"
            );
            v
        }
        ValueRing::Mod1 => {
            for x in v.iter_mut() {
                *x = frac(x);
            }
            v
        }
    }
}

impl Cochain {
    pub fn from_fn<F>(degree: usize, dim: usize, value_len: usize, ring: ValueRing, f: F) -> Self
    where
        F: Fn(&[TorusPoint]) -> Vec<BigRational> + Send + Sync + 'static,
    {
        Cochain { degree, dim, value_len, ring, eval: Arc::new(f) }
    }

    /// Degree-0 cochain with a constant value.
    pub fn constant(dim: usize, value: Vec<BigRational>, ring: ValueRing) -> Self {
        let len = value.len();
        Cochain::from_fn(0, dim, len, ring, move |_| value.clone())
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn value_len(&self) -> usize {
        self.value_len
    }

    pub fn ring(&self) -> ValueRing {
        self.ring
    }

    pub fn evaluate(&self, args: &[TorusPoint]) -> Vec<BigRational> {
        assert_eq!(args.len(), self.degree, "cochain arity mismatch");
        for a in args {
            assert_eq!(a.dim(), self.dim, "torus dimension mismatch");
        }
        let raw = (self.eval)(args);
        assert_eq!(raw.len(), self.value_len, "cochain value length mismatch");
        normalize_value(self.ring, raw)
    }

    /// The bar-complex coboundary
    /// `(∂φ)(g₁,…,g_{n+1}) = φ(g₂,…) + Σᵢ (−1)ⁱ φ(…, gᵢ·gᵢ₊₁, …)
    /// + (−1)^{n+1} φ(g₁,…,gₙ)`.
    ///
    /// Degree-0 cochains have zero coboundary.
    pub fn coboundary(&self) -> Cochain {
        let inner = self.eval.clone();
        let n = self.degree;
        let value_len = self.value_len;
        Cochain::from_fn(n + 1, self.dim, value_len, self.ring, move |args| {
            let mut acc = inner(&args[1..]);
            for i in 0..n {
                let mut merged: Vec<TorusPoint> = Vec::with_capacity(n);
                merged.extend_from_slice(&args[..i]);
                merged.push(args[i].add(&args[i + 1]));
                merged.extend_from_slice(&args[i + 2..]);
                let term = inner(&merged);
                // 1-based slot is i+1, so the sign is (−1)^(i+1)
                accumulate(&mut acc, &term, (i + 1) % 2 == 0);
            }
            let term = inner(&args[..n]);
            accumulate(&mut acc, &term, (n + 1) % 2 == 0);
            acc
        })
    }

    fn ring_join(&self, other: &Cochain) -> Result<ValueRing, CocycleError> {
        match (self.ring, other.ring) {
            (a, b) if a == b => Ok(a),
            (ValueRing::Integer, ValueRing::Real) | (ValueRing::Real, ValueRing::Integer) => {
                Ok(ValueRing::Real)
            }
            _ => Err(CocycleError::RingMismatch(
                "mod-1 values only combine with mod-1 values".into(),
            )),
        }
    }

    pub fn add(&self, other: &Cochain) -> Result<Cochain, CocycleError> {
        self.combine(other, true)
    }

    pub fn sub(&self, other: &Cochain) -> Result<Cochain, CocycleError> {
        self.combine(other, false)
    }

    fn combine(&self, other: &Cochain, add: bool) -> Result<Cochain, CocycleError> {
        if self.degree != other.degree {
            return Err(CocycleError::DegreeMismatch(format!(
                "{} vs {}",
                self.degree, other.degree
            )));
        }
        if self.dim != other.dim || self.value_len != other.value_len {
            return Err(CocycleError::DimensionMismatch(format!(
                "dim {}≠{} or value length {}≠{}",
                self.dim, other.dim, self.value_len, other.value_len
            )));
        }
        let ring = self.ring_join(other)?;
        let f = self.eval.clone();
        let g = other.eval.clone();
        Ok(Cochain::from_fn(self.degree, self.dim, self.value_len, ring, move |args| {
            let mut acc = f(args);
            let term = g(args);
            accumulate(&mut acc, &term, add);
            acc
        }))
    }

    pub fn neg(&self) -> Cochain {
        let f = self.eval.clone();
        Cochain::from_fn(self.degree, self.dim, self.value_len, self.ring, move |args| {
            f(args).into_iter().map(|x| -x).collect()
        })
    }

    /// Cup product `(φ ⌣ ψ)(g₁,…,g_{n+m}) = ⟨φ(g₁..gₙ), ψ(g_{n+1}..)⟩` with
    /// the given pairing. Mod-1 operands are rejected: a mod-1 value cannot
    /// be paired bilinearly.
    pub fn cup(&self, other: &Cochain, pairing: &Pairing) -> Result<Cochain, CocycleError> {
        if self.dim != other.dim {
            return Err(CocycleError::DimensionMismatch(format!(
                "cup across torus dimensions {} and {}",
                self.dim, other.dim
            )));
        }
        if self.ring == ValueRing::Mod1 || other.ring == ValueRing::Mod1 {
            return Err(CocycleError::PairingMismatch("cup on mod-1 values".into()));
        }
        match pairing {
            Pairing::Product => {
                if self.value_len != 1 || other.value_len != 1 {
                    return Err(CocycleError::PairingMismatch(format!(
                        "scalar pairing on value lengths {} and {}",
                        self.value_len, other.value_len
                    )));
                }
            }
            Pairing::Bilinear(b) => {
                if self.value_len != b.dim() || other.value_len != b.dim() {
                    return Err(CocycleError::PairingMismatch(format!(
                        "bilinear form of dimension {} on value lengths {} and {}",
                        b.dim(),
                        self.value_len,
                        other.value_len
                    )));
                }
            }
        }
        let ring = match (self.ring, other.ring) {
            (ValueRing::Integer, ValueRing::Integer) => ValueRing::Integer,
            _ => ValueRing::Real,
        };
        let n = self.degree;
        let f = self.eval.clone();
        let g = other.eval.clone();
        let pairing = pairing.clone();
        Ok(Cochain::from_fn(
            self.degree + other.degree,
            self.dim,
            1,
            ring,
            move |args| {
                let left = f(&args[..n]);
                let right = g(&args[n..]);
                let value = match &pairing {
                    Pairing::Product => &left[0] * &right[0],
                    Pairing::Bilinear(b) => b.evaluate_rat(&left, &right),
                };
                vec![value]
            },
        ))
    }

    /// Reinterprets the values mod 1.
    pub fn into_mod1(self) -> Cochain {
        Cochain { ring: ValueRing::Mod1, ..self }
    }
}

fn accumulate(acc: &mut [BigRational], term: &[BigRational], add: bool) {
    for (a, t) in acc.iter_mut().zip(term) {
        if add {
            *a += t;
        } else {
            *a -= t;
        }
    }
}

// ---------------------------------------------------------------------------
// the canonical section and the obstruction construction

/// The canonical section `s: (ℚ/ℤ)^d → ℝ^d`, `s(g) ∈ [0,1)^d` — a degree-1
/// real-valued cochain.
pub fn section(dim: usize) -> Cochain {
    Cochain::from_fn(1, dim, dim, ValueRing::Real, |args| args[0].coords().to_vec())
}

/// The carry 2-cocycle `∂s(h,k) = s(h) + s(k) − s(h+k) ∈ {0,1}^d`,
/// integer-valued by construction.
pub fn section_coboundary(dim: usize) -> Cochain {
    Cochain::from_fn(2, dim, dim, ValueRing::Integer, |args| {
        let sum = args[0].add(&args[1]);
        args[0]
            .coords()
            .iter()
            .zip(args[1].coords())
            .zip(sum.coords())
            .map(|((a, b), c)| a + b - c)
            .collect()
    })
}

/// The real-valued degree-3 lift `C = B(s ⌣ ∂s)`:
/// `C(g,h,k) = B(s(g), ∂s(h,k))`. Not a cocycle — its coboundary is the
/// integral Bockstein representative.
pub fn obstruction_lift(b: &IntegralBilinearForm) -> Cochain {
    let d = b.dim();
    section(d)
        .cup(&section_coboundary(d), &Pairing::Bilinear(b.clone()))
        .expect("section and carry always pair")
}

/// The degree-3 torus cocycle `c = B(s ⌣ ∂s) mod 1` with values in ℚ/ℤ.
pub fn obstruction_cocycle(b: &IntegralBilinearForm) -> Cochain {
    obstruction_lift(b).into_mod1()
}

/// The integer 4-cocycle `B(∂s ⌣ ∂s)(g,h,k,l) = B(∂s(g,h), ∂s(k,l))`.
/// Pointwise equal to `∂C` for the real lift `C`, hence a representative of
/// the integral Bockstein of the obstruction cocycle.
pub fn bockstein_rep(b: &IntegralBilinearForm) -> Cochain {
    let d = b.dim();
    let carry = section_coboundary(d);
    carry
        .cup(&carry, &Pairing::Bilinear(b.clone()))
        .expect("carry always pairs with itself")
}

// ---------------------------------------------------------------------------
// grid verification

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyMode {
    Exhaustive,
    Sampled,
}

impl serde::Serialize for VerifyMode {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(match self {
            VerifyMode::Exhaustive => "exhaustive",
            VerifyMode::Sampled => "sampled",
        })
    }
}

/// Outcome of checking an identity over tuples of grid points of
/// denominator `grid` on the torus. `max_defect` is the exact largest
/// deviation observed: distance to the nearest integer for mod-1 values,
/// absolute value otherwise.
#[derive(Debug, Clone, serde::Serialize)]
pub struct VerifyReport {
    pub check: String,
    pub grid: u64,
    pub dim: usize,
    pub tuple_len: usize,
    pub tuples_total: String,
    pub tuples_checked: u64,
    pub mode: VerifyMode,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub max_defect: String,
    pub ok: bool,
}

struct Plan {
    mode: VerifyMode,
    total: BigInt,
    checked: u64,
}

fn plan_tuples(grid_n: u64, dim: usize, tuple_len: usize, limit: u64) -> Plan {
    let total = BigInt::from(grid_n).pow(dim as u32).pow(tuple_len as u32);
    if total <= BigInt::from(limit) {
        let checked = total.to_u64().expect("bounded by limit");
        Plan { mode: VerifyMode::Exhaustive, total, checked }
    } else {
        Plan { mode: VerifyMode::Sampled, total, checked: limit }
    }
}

fn defect_of(ring: ValueRing, v: &[BigRational]) -> BigRational {
    let mut worst = BigRational::zero();
    for x in v {
        let d = match ring {
            ValueRing::Mod1 => {
                let r = frac(x);
                let alt = BigRational::from_integer(BigInt::from(1)) - &r;
                r.min(alt)
            }
            _ => x.abs(),
        };
        if d > worst {
            worst = d;
        }
    }
    worst
}

/// Draws one tuple of grid points as digit vectors; both the slow and the
/// fast verifiers sample through this, so equal seeds mean equal tuples.
fn sample_tuple(rng: &mut ChaCha8Rng, tuple_len: usize, dim: usize, n: u64) -> Vec<Vec<u32>> {
    (0..tuple_len)
        .map(|_| (0..dim).map(|_| rng.gen_range(0..n) as u32).collect())
        .collect()
}

/// Mixed-radix digit odometer over `tuple_len · dim` digits in base `n`.
/// Returns false once the odometer wraps.
fn advance_digits(digits: &mut [Vec<u32>], n: u64) -> bool {
    for v in digits.iter_mut().rev() {
        for d in v.iter_mut().rev() {
            *d += 1;
            if u64::from(*d) < n {
                return true;
            }
            *d = 0;
        }
    }
    false
}

/// Checks `∂c = 0` over tuples of grid points with denominator `grid_n`.
/// Exhaustive when the tuple count is at most `limit`, otherwise `limit`
/// tuples sampled from the seed. Exact rational evaluation throughout; use
/// [`verify_obstruction`]/[`verify_bockstein`] for the optimized standard
/// checks.
pub fn verify_cocycle(c: &Cochain, grid_n: u64, limit: u64, seed: u64) -> VerifyReport {
    assert!(grid_n >= 1 && limit >= 1);
    let tuple_len = c.degree() + 1;
    let dc = c.coboundary();
    let plan = plan_tuples(grid_n, c.dim(), tuple_len, limit);
    let mut max_defect = BigRational::zero();
    let mut run = |digits: &[Vec<u32>]| {
        let args: Vec<TorusPoint> =
            digits.iter().map(|d| TorusPoint::from_grid(d, grid_n)).collect();
        let v = dc.evaluate(&args);
        let d = defect_of(c.ring(), &v);
        if d > max_defect {
            max_defect = d;
        }
    };
    match plan.mode {
        VerifyMode::Exhaustive => {
            let mut digits = vec![vec![0u32; c.dim()]; tuple_len];
            loop {
                run(&digits);
                if !advance_digits(&mut digits, grid_n) {
                    break;
                }
            }
        }
        VerifyMode::Sampled => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..plan.checked {
                let digits = sample_tuple(&mut rng, tuple_len, c.dim(), grid_n);
                run(&digits);
            }
        }
    }
    let ok = max_defect.is_zero();
    VerifyReport {
        check: "cocycle".into(),
        grid: grid_n,
        dim: c.dim(),
        tuple_len,
        tuples_total: plan.total.to_string(),
        tuples_checked: plan.checked,
        mode: plan.mode,
        seed: match plan.mode {
            VerifyMode::Sampled => Some(seed),
            VerifyMode::Exhaustive => None,
        },
        max_defect: format_rational(&max_defect),
        ok,
    }
}

// --- fast integer kernels for the two standard checks ---

enum FastCheck {
    /// `∂(C mod 1) = 0` — obstruction cocycle condition.
    Obstruction,
    /// `∂C − B(∂s ⌣ ∂s) = 0` pointwise — Bockstein identity.
    Bockstein,
}

/// Verifies that `c = B(s ⌣ ∂s) mod 1` is a 3-cocycle on the grid.
pub fn verify_obstruction(
    b: &IntegralBilinearForm,
    grid_n: u64,
    limit: u64,
    seed: u64,
) -> VerifyReport {
    fast_or_slow(b, grid_n, limit, seed, FastCheck::Obstruction)
}

/// Verifies `∂C(g,h,k,l) = B(∂s(g,h), ∂s(k,l))` pointwise on the grid, the
/// identity exhibiting the integer 4-cocycle as the Bockstein coboundary of
/// the real lift.
pub fn verify_bockstein(
    b: &IntegralBilinearForm,
    grid_n: u64,
    limit: u64,
    seed: u64,
) -> VerifyReport {
    fast_or_slow(b, grid_n, limit, seed, FastCheck::Bockstein)
}

fn check_name(check: &FastCheck) -> &'static str {
    match check {
        FastCheck::Obstruction => "obstruction-cocycle",
        FastCheck::Bockstein => "bockstein-identity",
    }
}

fn fast_or_slow(
    b: &IntegralBilinearForm,
    grid_n: u64,
    limit: u64,
    seed: u64,
    check: FastCheck,
) -> VerifyReport {
    assert!(grid_n >= 1 && limit >= 1);
    if let Some(bi) = small_form(b, grid_n) {
        return fast_verify(b.dim(), &bi, grid_n, limit, seed, check);
    }
    // enormous coefficients: fall back to exact rational evaluation
    let mut report = match check {
        FastCheck::Obstruction => verify_cocycle(&obstruction_cocycle(b), grid_n, limit, seed),
        FastCheck::Bockstein => {
            slow_bockstein(b, grid_n, limit, seed)
        }
    };
    report.check = check_name(&check).into();
    report
}

/// Flattened i64 form entries when the fast kernel cannot overflow:
/// every intermediate is bounded by `6·d²·max|B|·n`, kept below 2^57.
fn small_form(b: &IntegralBilinearForm, grid_n: u64) -> Option<Vec<i64>> {
    let d = b.dim();
    let mut flat = Vec::with_capacity(d * d);
    let mut max_abs: i64 = 0;
    for i in 0..d {
        for j in 0..d {
            let e = b.entry(i, j).to_i64()?;
            max_abs = max_abs.max(e.checked_abs()?);
            flat.push(e);
        }
    }
    let budget = (1i64 << 57) / 6;
    let cost = (d as i64 * d as i64)
        .checked_mul(max_abs.max(1))?
        .checked_mul(i64::try_from(grid_n).ok()?)?;
    (cost < budget).then_some(flat)
}

fn slow_bockstein(b: &IntegralBilinearForm, grid_n: u64, limit: u64, seed: u64) -> VerifyReport {
    let lift = obstruction_lift(b);
    let diff = lift
        .coboundary()
        .sub(&bockstein_rep(b))
        .expect("lift coboundary and Bockstein representative share shape");
    // the difference is a degree-4 cochain that must vanish pointwise; reuse
    // the tuple plan of a degree-3 cocycle check (arity 4)
    let plan = plan_tuples(grid_n, b.dim(), 4, limit);
    let mut max_defect = BigRational::zero();
    let mut run = |digits: &[Vec<u32>]| {
        let args: Vec<TorusPoint> =
            digits.iter().map(|v| TorusPoint::from_grid(v, grid_n)).collect();
        let d = defect_of(ValueRing::Real, &diff.evaluate(&args));
        if d > max_defect {
            max_defect = d;
        }
    };
    match plan.mode {
        VerifyMode::Exhaustive => {
            let mut digits = vec![vec![0u32; b.dim()]; 4];
            loop {
                run(&digits);
                if !advance_digits(&mut digits, grid_n) {
                    break;
                }
            }
        }
        VerifyMode::Sampled => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..plan.checked {
                run(&sample_tuple(&mut rng, 4, b.dim(), grid_n));
            }
        }
    }
    let ok = max_defect.is_zero();
    VerifyReport {
        check: "bockstein-identity".into(),
        grid: grid_n,
        dim: b.dim(),
        tuple_len: 4,
        tuples_total: plan.total.to_string(),
        tuples_checked: plan.checked,
        mode: plan.mode,
        seed: match plan.mode {
            VerifyMode::Sampled => Some(seed),
            VerifyMode::Exhaustive => None,
        },
        max_defect: format_rational(&max_defect),
        ok,
    }
}

/// Scaled-integer state for one grid: all section values are multiples of
/// `1/n`, so everything is exact in `i64` after scaling by `n`.
struct FastGrid {
    n: i64,
    d: usize,
}

impl FastGrid {
    /// carry vector ∂s(a,b) ∈ {0,1}^d from digit vectors
    fn carry(&self, a: &[u32], b: &[u32], out: &mut [i64]) {
        for i in 0..self.d {
            out[i] = i64::from(i64::from(a[i]) + i64::from(b[i]) >= self.n);
        }
    }

    /// scaled lift `n·C(g,h,k) = Σᵢⱼ Bᵢⱼ·digit_i(g)·carry_j(h,k)`
    fn lift_scaled(&self, bmat: &[i64], g: &[u32], carry_hk: &[i64]) -> i64 {
        let mut acc = 0i64;
        for i in 0..self.d {
            let gi = i64::from(g[i]);
            if gi == 0 {
                continue;
            }
            let row = &bmat[i * self.d..(i + 1) * self.d];
            let mut w = 0i64;
            for (bij, cj) in row.iter().zip(carry_hk) {
                w += bij * cj;
            }
            acc += gi * w;
        }
        acc
    }

    /// `B(x, y)` on small integer vectors
    fn pair(&self, bmat: &[i64], x: &[i64], y: &[i64]) -> i64 {
        let mut acc = 0i64;
        for i in 0..self.d {
            if x[i] == 0 {
                continue;
            }
            let row = &bmat[i * self.d..(i + 1) * self.d];
            let mut w = 0i64;
            for (bij, yj) in row.iter().zip(y) {
                w += bij * yj;
            }
            acc += x[i] * w;
        }
        acc
    }

    fn digit_sum(&self, a: &[u32], b: &[u32], out: &mut Vec<u32>) {
        out.clear();
        for i in 0..self.d {
            let s = u64::from(a[i]) + u64::from(b[i]);
            out.push((s % self.n as u64) as u32);
        }
    }
}

fn fast_verify(
    d: usize,
    bmat: &[i64],
    grid_n: u64,
    limit: u64,
    seed: u64,
    check: FastCheck,
) -> VerifyReport {
    let plan = plan_tuples(grid_n, d, 4, limit);
    let grid = FastGrid { n: grid_n as i64, d };
    let n_i64 = grid_n as i64;

    // per-tuple defect, scaled by n
    let mut carry_a = vec![0i64; d];
    let mut carry_b = vec![0i64; d];
    let mut tmp = Vec::with_capacity(d);
    let mut max_scaled: i64 = 0;
    let mut eval_tuple = |pts: &[Vec<u32>]| {
        let (g, h, k, l) = (&pts[0], &pts[1], &pts[2], &pts[3]);
        // the five faces of ∂C(g,h,k,l)
        grid.carry(k, l, &mut carry_a);
        let t1 = grid.lift_scaled(bmat, h, &carry_a); // C(h,k,l)
        grid.digit_sum(g, h, &mut tmp);
        let t2 = grid.lift_scaled(bmat, &tmp, &carry_a); // C(gh,k,l)
        grid.digit_sum(h, k, &mut tmp);
        grid.carry(&tmp, l, &mut carry_b);
        let t3 = grid.lift_scaled(bmat, g, &carry_b); // C(g,hk,l)
        grid.digit_sum(k, l, &mut tmp);
        grid.carry(h, &tmp, &mut carry_b);
        let t4 = grid.lift_scaled(bmat, g, &carry_b); // C(g,h,kl)
        grid.carry(h, k, &mut carry_b);
        let t5 = grid.lift_scaled(bmat, g, &carry_b); // C(g,h,k)
        let boundary = t1 - t2 + t3 - t4 + t5;
        let scaled = match check {
            FastCheck::Obstruction => {
                // distance of ∂C to the nearest multiple of n = defect of
                // ∂(C mod 1) in units of 1/n
                let r = boundary.rem_euclid(n_i64);
                r.min(n_i64 - r) % n_i64
            }
            FastCheck::Bockstein => {
                grid.carry(g, h, &mut carry_a);
                grid.carry(k, l, &mut carry_b);
                let rhs = grid.pair(bmat, &carry_a, &carry_b);
                (boundary - n_i64 * rhs).abs()
            }
        };
        if scaled > max_scaled {
            max_scaled = scaled;
        }
    };

    match plan.mode {
        VerifyMode::Exhaustive => {
            let mut digits = vec![vec![0u32; d]; 4];
            loop {
                eval_tuple(&digits);
                if !advance_digits(&mut digits, grid_n) {
                    break;
                }
            }
        }
        VerifyMode::Sampled => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..plan.checked {
                let digits = sample_tuple(&mut rng, 4, d, grid_n);
                eval_tuple(&digits);
            }
        }
    }

    let max_defect = BigRational::new(BigInt::from(max_scaled), BigInt::from(grid_n));
    let ok = max_scaled == 0;
    VerifyReport {
        check: check_name(&check).into(),
        grid: grid_n,
        dim: d,
        tuple_len: 4,
        tuples_total: plan.total.to_string(),
        tuples_checked: plan.checked,
        mode: plan.mode,
        seed: match plan.mode {
            VerifyMode::Sampled => Some(seed),
            VerifyMode::Exhaustive => None,
        },
        max_defect: format_rational(&max_defect),
        ok,
    }
}
