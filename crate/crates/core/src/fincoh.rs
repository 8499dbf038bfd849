//! Finite-grid group cohomology oracle: dense cochain tables on a finite
//! abelian group with ℤ/L coefficients, Moore coboundary matrices, exact
//! computation of Hⁿ(G; ℤ/L) via Smith normal form, coboundary membership
//! tests, and restriction of torus cochains to grid subgroups.
//!
//! Cocycles mod L form the lattice `Z = {x : Mₙx ≡ 0 (mod L)} ⊆ ℤ^{Dₙ}`
//! which contains `L·ℤ^{Dₙ}`, and coboundaries span
//! `B = im(Mₙ₋₁) + L·ℤ^{Dₙ}`; both are full rank, so `Hⁿ = Z/B` is a finite
//! group read off from one more Smith normal form. No factoring anywhere.

use crate::abgroup::{
    hnf_row_basis, smith_normal_form, FgAbelianGroup, IntMatrix,
};
use crate::cocycle::{obstruction_cocycle, Cochain, ValueRing};
use crate::qforms::IntegralBilinearForm;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

/// Default cap on table/matrix domain sizes (`|G|^arity`).
pub const DEFAULT_TABLE_LIMIT: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FincohError {
    #[error("table too large: {0}")]
    SizeLimit(String),
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("not a cocycle: {0}")]
    NotACocycle(String),
    #[error("value does not land in ℤ/{0} (denominator mismatch)")]
    DenominatorMismatch(i64),
    #[error("restriction undefined: {0}")]
    Restriction(String),
}

// ---------------------------------------------------------------------------
// the group

/// `ℤ/f₁ ⊕ … ⊕ ℤ/f_d` with elements indexed `0..order` in mixed radix,
/// component 0 least significant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteAbelianGroup {
    factors: Vec<u64>,
    order: usize,
}

impl FiniteAbelianGroup {
    pub fn new(factors: Vec<u64>) -> Result<Self, FincohError> {
        if factors.contains(&0) {
            return Err(FincohError::InvalidGroup("zero cyclic factor".into()));
        }
        let mut order: usize = 1;
        for &f in &factors {
            order = order
                .checked_mul(usize::try_from(f).map_err(|_| {
                    FincohError::InvalidGroup(format!("factor {f} too large"))
                })?)
                .filter(|&o| o <= (1 << 31))
                .ok_or_else(|| FincohError::InvalidGroup("group order exceeds 2^31".into()))?;
        }
        Ok(FiniteAbelianGroup { factors, order })
    }

    pub fn cyclic(n: u64) -> Result<Self, FincohError> {
        Self::new(vec![n])
    }

    /// `(ℤ/n)^d`
    pub fn power(n: u64, d: usize) -> Result<Self, FincohError> {
        Self::new(vec![n; d])
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn digits(&self, mut idx: usize) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.factors.len());
        for &f in &self.factors {
            out.push((idx % f as usize) as u64);
            idx /= f as usize;
        }
        debug_assert_eq!(idx, 0);
        out
    }

    pub fn index(&self, digits: &[u64]) -> usize {
        assert_eq!(digits.len(), self.factors.len());
        let mut idx = 0usize;
        for (i, (&d, &f)) in digits.iter().zip(&self.factors).enumerate().rev() {
            assert!(d < f, "digit {d} out of range for factor {f} at {i}");
            idx = idx * f as usize + d as usize;
        }
        idx
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        let (da, db) = (self.digits(a), self.digits(b));
        let sum: Vec<u64> = da
            .iter()
            .zip(&db)
            .zip(&self.factors)
            .map(|((&x, &y), &f)| (x + y) % f)
            .collect();
        self.index(&sum)
    }

    pub fn neg(&self, a: usize) -> usize {
        let d: Vec<u64> =
            self.digits(a).iter().zip(&self.factors).map(|(&x, &f)| (f - x) % f).collect();
        self.index(&d)
    }
}

/// `|G|^arity` with overflow and size-limit guards.
fn domain_size(group: &FiniteAbelianGroup, arity: usize, limit: u64) -> Result<usize, FincohError> {
    let size = arity
        .try_into()
        .ok()
        .and_then(|a: u32| group.order().checked_pow(a))
        .ok_or_else(|| {
            FincohError::SizeLimit(format!("|G|^{arity} overflows with |G| = {}", group.order()))
        })?;
    if size as u64 > limit {
        return Err(FincohError::SizeLimit(format!(
            "|G|^{arity} = {size} exceeds the limit {limit}"
        )));
    }
    Ok(size)
}

/// Visits every `arity`-tuple over `0..count` together with its flat index
/// `Σ tupleᵢ·countⁱ` (component 0 fastest).
fn for_each_tuple(count: usize, arity: usize, total: usize, mut f: impl FnMut(&[usize], usize)) {
    let mut tuple = vec![0usize; arity];
    for flat in 0..total {
        f(&tuple, flat);
        for slot in tuple.iter_mut() {
            *slot += 1;
            if *slot < count {
                break;
            }
            *slot = 0;
        }
    }
}

// ---------------------------------------------------------------------------
// cochain tables

/// Dense table of a degree-n cochain `Gⁿ → ℤ/L`, values stored in `[0, L)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CochainTable {
    group: FiniteAbelianGroup,
    degree: usize,
    modulus: i64,
    values: Vec<i64>,
}

impl CochainTable {
    pub fn from_fn(
        group: FiniteAbelianGroup,
        degree: usize,
        modulus: i64,
        limit: u64,
        f: impl Fn(&[usize]) -> i64,
    ) -> Result<Self, FincohError> {
        assert!((2..=1 << 31).contains(&modulus), "modulus must be in 2..=2^31");
        let total = domain_size(&group, degree, limit)?;
        let mut values = vec![0i64; total];
        for_each_tuple(group.order(), degree, total, |tuple, flat| {
            values[flat] = f(tuple).rem_euclid(modulus);
        });
        Ok(CochainTable { group, degree, modulus, values })
    }

    pub fn zero(
        group: FiniteAbelianGroup,
        degree: usize,
        modulus: i64,
        limit: u64,
    ) -> Result<Self, FincohError> {
        Self::from_fn(group, degree, modulus, limit, |_| 0)
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn modulus(&self) -> i64 {
        self.modulus
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    fn flat(&self, tuple: &[usize]) -> usize {
        assert_eq!(tuple.len(), self.degree, "tuple arity mismatch");
        let n = self.group.order();
        let mut idx = 0usize;
        for &g in tuple.iter().rev() {
            assert!(g < n, "group index out of range");
            idx = idx * n + g;
        }
        idx
    }

    pub fn value(&self, tuple: &[usize]) -> i64 {
        self.values[self.flat(tuple)]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    /// Moore coboundary as a table of degree `n+1`, values mod L.
    pub fn coboundary(&self, limit: u64) -> Result<CochainTable, FincohError> {
        let n = self.degree;
        let total = domain_size(&self.group, n + 1, limit)?;
        let mut values = vec![0i64; total];
        let mut face = vec![0usize; n];
        for_each_tuple(self.group.order(), n + 1, total, |tuple, flat| {
            let mut acc: i64 = 0;
            face.clear();
            face.extend_from_slice(&tuple[1..]);
            acc += self.values[self.flat(&face)];
            for p in 0..n {
                face.clear();
                face.extend_from_slice(&tuple[..p]);
                face.push(self.group.add(tuple[p], tuple[p + 1]));
                face.extend_from_slice(&tuple[p + 2..]);
                let v = self.values[self.flat(&face)];
                if p % 2 == 0 {
                    acc -= v; // 1-based slot p+1, sign (−1)^{p+1}
                } else {
                    acc += v;
                }
            }
            face.clear();
            face.extend_from_slice(&tuple[..n]);
            let v = self.values[self.flat(&face)];
            if (n + 1) % 2 == 0 {
                acc += v;
            } else {
                acc -= v;
            }
            values[flat] = acc.rem_euclid(self.modulus);
        });
        Ok(CochainTable {
            group: self.group.clone(),
            degree: n + 1,
            modulus: self.modulus,
            values,
        })
    }

    pub fn is_cocycle(&self, limit: u64) -> Result<bool, FincohError> {
        Ok(self.coboundary(limit)?.is_zero())
    }

    fn check_shape(&self, other: &CochainTable) -> Result<(), FincohError> {
        if self.group != other.group || self.modulus != other.modulus {
            return Err(FincohError::ShapeMismatch(
                "tables live over different groups or moduli".into(),
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &CochainTable) -> Result<CochainTable, FincohError> {
        self.combine(other, 1)
    }

    pub fn sub(&self, other: &CochainTable) -> Result<CochainTable, FincohError> {
        self.combine(other, -1)
    }

    fn combine(&self, other: &CochainTable, sign: i64) -> Result<CochainTable, FincohError> {
        self.check_shape(other)?;
        if self.degree != other.degree {
            return Err(FincohError::ShapeMismatch(format!(
                "degrees {} and {}",
                self.degree, other.degree
            )));
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| (a + sign * b).rem_euclid(self.modulus))
            .collect();
        Ok(CochainTable { values, ..self.clone() })
    }

    /// Cup product of scalar tables:
    /// `(α ⌣ β)(g₁,…,g_{p+q}) = α(g₁..g_p)·β(g_{p+1}..) mod L`.
    pub fn cup(&self, other: &CochainTable, limit: u64) -> Result<CochainTable, FincohError> {
        self.check_shape(other)?;
        let (p, q) = (self.degree, other.degree);
        let total = domain_size(&self.group, p + q, limit)?;
        let mut values = vec![0i64; total];
        for_each_tuple(self.group.order(), p + q, total, |tuple, flat| {
            let a = self.values[self.flat(&tuple[..p])];
            let b = other.values[other.flat(&tuple[p..])];
            values[flat] = (a * b).rem_euclid(self.modulus);
        });
        Ok(CochainTable {
            group: self.group.clone(),
            degree: p + q,
            modulus: self.modulus,
            values,
        })
    }

    pub fn as_bigint_vector(&self) -> Vec<BigInt> {
        self.values.iter().map(|&v| BigInt::from(v)).collect()
    }
}

// ---------------------------------------------------------------------------
// coboundary matrices and cohomology

/// Integer matrix of `∂: Cⁿ → Cⁿ⁺¹` in the delta-function basis, of shape
/// `|G|ⁿ⁺¹ × |G|ⁿ`, acting on column vectors of table values. Entries are
/// independent of the coefficient modulus.
pub fn coboundary_matrix(
    group: &FiniteAbelianGroup,
    degree: usize,
    limit: u64,
) -> Result<IntMatrix, FincohError> {
    let n = degree;
    let rows = domain_size(group, n + 1, limit)?;
    let cols = domain_size(group, n, limit)?;
    let mut m = IntMatrix::zero(rows, cols);
    let flat_of = |tuple: &[usize]| -> usize {
        let mut idx = 0usize;
        for &g in tuple.iter().rev() {
            idx = idx * group.order() + g;
        }
        idx
    };
    let mut face = vec![0usize; n];
    let bump = |m: &mut IntMatrix, r: usize, c: usize, sign: i64| {
        let v = m.get(r, c) + BigInt::from(sign);
        m.set(r, c, v);
    };
    for_each_tuple(group.order(), n + 1, rows, |tuple, r| {
        face.clear();
        face.extend_from_slice(&tuple[1..]);
        bump(&mut m, r, flat_of(&face), 1);
        for p in 0..n {
            face.clear();
            face.extend_from_slice(&tuple[..p]);
            face.push(group.add(tuple[p], tuple[p + 1]));
            face.extend_from_slice(&tuple[p + 2..]);
            bump(&mut m, r, flat_of(&face), if p % 2 == 0 { -1 } else { 1 });
        }
        face.clear();
        face.extend_from_slice(&tuple[..n]);
        bump(&mut m, r, flat_of(&face), if (n + 1) % 2 == 0 { 1 } else { -1 });
    });
    Ok(m)
}

/// `Hⁿ(G; ℤ/L)` with trivial action, as a finite abelian group in invariant
/// factor form.
///
/// Change to Smith coordinates `x = V·y` for `U·Mₙ·V = D`: the cocycle
/// lattice becomes diagonal, `Z = ⊕ mⱼ·ℤ` with `mⱼ = L/gcd(dⱼ, L)`, the
/// coboundary lattice `B = im(Mₙ₋₁) + L·ℤ^{Dₙ}` transforms by `(V⁻¹)ᵀ`, and
/// the quotient is the cokernel of B's coordinates in Z's basis.
pub fn cohomology(
    group: &FiniteAbelianGroup,
    degree: usize,
    modulus: i64,
    limit: u64,
) -> Result<FgAbelianGroup, FincohError> {
    assert!(modulus >= 2, "coefficient modulus must be at least 2");
    let n = degree;
    let d_n = domain_size(group, n, limit)?;
    let l = BigInt::from(modulus);

    let m_n = coboundary_matrix(group, n, limit)?;
    let snf = smith_normal_form(&m_n);
    let diag = snf.diagonal();
    let mult: Vec<BigInt> = (0..d_n)
        .map(|j| {
            let dj = if j < diag.len() { diag[j].clone() } else { BigInt::zero() };
            &l / dj.gcd(&l)
        })
        .collect();

    // boundary generators in the standard basis: columns of M_{n−1}, then L·I
    let mut b_rows: Vec<Vec<BigInt>> = Vec::new();
    if n > 0 {
        let m_prev = coboundary_matrix(group, n - 1, limit)?;
        debug_assert!(m_n.mul(&m_prev).is_zero(), "∂∂ must vanish");
        for c in 0..m_prev.cols() {
            b_rows.push((0..m_prev.rows()).map(|r| m_prev.get(r, c).clone()).collect());
        }
    }
    for i in 0..d_n {
        let mut row = vec![BigInt::zero(); d_n];
        row[i] = l.clone();
        b_rows.push(row);
    }
    let b_basis = hnf_row_basis(&IntMatrix::from_bigint_rows(b_rows, d_n));

    // to Smith coordinates, then divide out Z's diagonal basis
    let b_y = b_basis.mul(&snf.v_inv.transpose());
    let mut x_rows = Vec::with_capacity(b_y.rows());
    for i in 0..b_y.rows() {
        let mut row = Vec::with_capacity(d_n);
        for j in 0..d_n {
            let (q, r) = b_y.get(i, j).div_rem(&mult[j]);
            assert!(r.is_zero(), "coboundary escaped the cocycle lattice");
            row.push(q);
        }
        x_rows.push(row);
    }
    let x = IntMatrix::from_bigint_rows(x_rows, d_n);
    let orders = smith_normal_form(&x).diagonal();
    let h = FgAbelianGroup::from_cyclic_orders(0, &orders);
    assert_eq!(h.free_rank, 0, "finite-group cohomology mod L is finite");
    Ok(h)
}

/// Is the cocycle a coboundary mod L? Solves `Mₙ₋₁·x ≡ c (mod L)` through
/// Smith form: with `U·M·V = D`, solvability is the per-row congruence
/// `gcd(dᵢ, L) | (U·c)ᵢ`.
pub fn class_is_trivial(c: &CochainTable, limit: u64) -> Result<bool, FincohError> {
    if !c.is_cocycle(limit)? {
        return Err(FincohError::NotACocycle(format!(
            "degree-{} table has nonzero coboundary",
            c.degree()
        )));
    }
    if c.degree() == 0 {
        return Ok(c.is_zero());
    }
    let m_prev = coboundary_matrix(c.group(), c.degree() - 1, limit)?;
    let snf = smith_normal_form(&m_prev);
    let diag = snf.diagonal();
    let l = BigInt::from(c.modulus());
    let uc = snf.u.mul_vec(&c.as_bigint_vector());
    for (i, v) in uc.iter().enumerate() {
        let di = if i < diag.len() { diag[i].clone() } else { BigInt::zero() };
        if !v.mod_floor(&di.gcd(&l)).is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Do two cocycles represent the same cohomology class?
pub fn class_equal(a: &CochainTable, b: &CochainTable, limit: u64) -> Result<bool, FincohError> {
    for t in [a, b] {
        if !t.is_cocycle(limit)? {
            return Err(FincohError::NotACocycle(format!(
                "degree-{} table has nonzero coboundary",
                t.degree()
            )));
        }
    }
    class_is_trivial(&a.sub(b)?, limit)
}

// ---------------------------------------------------------------------------
// restriction of torus cochains to grid subgroups

/// Restricts a scalar torus cochain to the grid subgroup
/// `(1/N)ℤ^d/ℤ^d ≅ (ℤ/N)^d` with ℤ/L coefficients: mod-1 values are carried
/// by `v ↦ L·v` (which must be integral), integer values reduce mod L.
pub fn restrict_torus(
    c: &Cochain,
    grid_n: u64,
    modulus: i64,
    limit: u64,
) -> Result<CochainTable, FincohError> {
    if c.value_len() != 1 {
        return Err(FincohError::Restriction(format!(
            "only scalar cochains restrict to tables (value length {})",
            c.value_len()
        )));
    }
    let group = FiniteAbelianGroup::power(grid_n, c.dim())?;
    let total = domain_size(&group, c.degree(), limit)?;
    let mut values = vec![0i64; total];
    let l = BigInt::from(modulus);
    let mut err = None;
    for_each_tuple(group.order(), c.degree(), total, |tuple, flat| {
        if err.is_some() {
            return;
        }
        let args: Vec<crate::cocycle::TorusPoint> = tuple
            .iter()
            .map(|&g| {
                let digits: Vec<u32> = group.digits(g).iter().map(|&d| d as u32).collect();
                crate::cocycle::TorusPoint::from_grid(&digits, grid_n)
            })
            .collect();
        let v = &c.evaluate(&args)[0];
        let scaled = match c.ring() {
            ValueRing::Mod1 => {
                let w = v * &l;
                if !w.is_integer() {
                    err = Some(FincohError::DenominatorMismatch(modulus));
                    return;
                }
                w.to_integer()
            }
            ValueRing::Integer => v.to_integer(),
            ValueRing::Real => {
                err = Some(FincohError::Restriction(
                    "real-valued cochain has no canonical finite restriction".into(),
                ));
                return;
            }
        };
        values[flat] = scaled
            .mod_floor(&l)
            .to_i64()
            .expect("reduced value fits i64");
    });
    if let Some(e) = err {
        return Err(e);
    }
    Ok(CochainTable { group, degree: c.degree(), modulus, values })
}

/// The obstruction cocycle of `b` restricted to the grid subgroup — the
/// degree-3 table fed to the finite oracle.
pub fn restrict_obstruction(
    b: &IntegralBilinearForm,
    grid_n: u64,
    modulus: i64,
    limit: u64,
) -> Result<CochainTable, FincohError> {
    restrict_torus(&obstruction_cocycle(b), grid_n, modulus, limit)
}

#[cfg(test)]
mod tests {
    use super::*;

    const LIM: u64 = DEFAULT_TABLE_LIMIT;

    fn fg(free: usize, tors: &[i64]) -> FgAbelianGroup {
        FgAbelianGroup::new(free, tors.iter().map(|&t| BigInt::from(t)).collect()).unwrap()
    }

    #[test]
    fn group_indexing_round_trips() {
        let g = FiniteAbelianGroup::new(vec![2, 3]).unwrap();
        assert_eq!(g.order(), 6);
        for i in 0..6 {
            assert_eq!(g.index(&g.digits(i)), i);
        }
        let a = g.index(&[1, 2]);
        let b = g.index(&[1, 1]);
        assert_eq!(g.add(a, b), g.index(&[0, 0]));
        assert_eq!(g.add(a, g.neg(a)), 0);
        assert!(FiniteAbelianGroup::new(vec![2, 0]).is_err());
    }

    #[test]
    fn coboundary_matrices_compose_to_zero() {
        for factors in [vec![2], vec![3], vec![2, 2]] {
            let g = FiniteAbelianGroup::new(factors).unwrap();
            for n in 0..=2 {
                let m_n = coboundary_matrix(&g, n, LIM).unwrap();
                let m_next = coboundary_matrix(&g, n + 1, LIM).unwrap();
                assert!(m_next.mul(&m_n).is_zero(), "∂∂ ≠ 0 at degree {n}");
            }
        }
    }

    #[test]
    fn table_coboundary_matches_matrix() {
        let g = FiniteAbelianGroup::cyclic(3).unwrap();
        let t = CochainTable::from_fn(g.clone(), 2, 6, LIM, |args| {
            (3 * args[0] + 5 * args[1] * args[1] + 1) as i64
        })
        .unwrap();
        let dt = t.coboundary(LIM).unwrap();
        let m = coboundary_matrix(&g, 2, LIM).unwrap();
        let mx = m.mul_vec(&t.as_bigint_vector());
        for (flat, v) in dt.values().iter().enumerate() {
            assert_eq!(BigInt::from(*v), mx[flat].mod_floor(&BigInt::from(6)));
        }
    }

    #[test]
    fn degree_zero_cohomology_is_the_coefficients() {
        for factors in [vec![2], vec![4], vec![2, 2]] {
            let g = FiniteAbelianGroup::new(factors).unwrap();
            for l in [2i64, 6] {
                assert_eq!(cohomology(&g, 0, l, LIM).unwrap(), fg(0, &[l]));
            }
        }
    }

    #[test]
    fn degree_one_cohomology_is_hom() {
        // H¹(ℤ/m; ℤ/L) = ℤ/gcd(m, L)
        for (m, l, gcd) in [(2u64, 2i64, 2i64), (4, 2, 2), (3, 6, 3), (5, 3, 1)] {
            let g = FiniteAbelianGroup::cyclic(m).unwrap();
            let h = cohomology(&g, 1, l, LIM).unwrap();
            let expect = if gcd == 1 { FgAbelianGroup::trivial() } else { fg(0, &[gcd]) };
            assert_eq!(h, expect, "H¹(ℤ/{m}; ℤ/{l})");
        }
        // H¹((ℤ/2)²; ℤ/2) = (ℤ/2)²
        let g = FiniteAbelianGroup::power(2, 2).unwrap();
        assert_eq!(cohomology(&g, 1, 2, LIM).unwrap(), fg(0, &[2, 2]));
    }

    #[test]
    fn higher_cyclic_cohomology() {
        // even degrees > 0: H²(ℤ/m; ℤ/L) = ℤ/gcd(m, L)
        let g = FiniteAbelianGroup::cyclic(2).unwrap();
        assert_eq!(cohomology(&g, 2, 4, LIM).unwrap(), fg(0, &[2]));
        let g = FiniteAbelianGroup::cyclic(3).unwrap();
        assert_eq!(cohomology(&g, 2, 3, LIM).unwrap(), fg(0, &[3]));
        // odd: H³(ℤ/N; ℤ/N) = ℤ/N
        for n in [2u64, 3] {
            let g = FiniteAbelianGroup::cyclic(n).unwrap();
            assert_eq!(cohomology(&g, 3, n as i64, LIM).unwrap(), fg(0, &[n as i64]));
        }
    }

    #[test]
    fn klein_four_mod_two_cohomology() {
        // H^n((ℤ/2)²; ℤ/2) has F₂-dimension n+1 (polynomial algebra on two
        // degree-1 classes)
        let g = FiniteAbelianGroup::power(2, 2).unwrap();
        assert_eq!(cohomology(&g, 2, 2, LIM).unwrap(), fg(0, &[2, 2, 2]));
        assert_eq!(cohomology(&g, 3, 2, LIM).unwrap(), fg(0, &[2, 2, 2, 2]));
    }

    #[test]
    fn coboundaries_are_trivial_classes() {
        let g = FiniteAbelianGroup::cyclic(2).unwrap();
        let t = CochainTable::from_fn(g.clone(), 2, 2, LIM, |args| {
            (args[0] * args[1] + args[0]) as i64
        })
        .unwrap();
        let dt = t.coboundary(LIM).unwrap();
        assert!(dt.is_cocycle(LIM).unwrap());
        assert!(class_is_trivial(&dt, LIM).unwrap());
        // a random non-cocycle is rejected
        let junk =
            CochainTable::from_fn(g, 3, 2, LIM, |args| (args[0] + args[1] * args[2]) as i64)
                .unwrap();
        assert!(matches!(class_is_trivial(&junk, LIM), Err(FincohError::NotACocycle(_))));
    }

    #[test]
    fn quadratic_witness_restricts_to_a_nontrivial_class() {
        // q(x) = x² over one generator: the restricted degree-3 cocycle on
        // ℤ/2 with ℤ/2 coefficients generates H³(ℤ/2; ℤ/2) = ℤ/2
        let b = IntegralBilinearForm::from_rows(&[vec![1]]);
        let c = restrict_obstruction(&b, 2, 2, LIM).unwrap();
        assert!(c.is_cocycle(LIM).unwrap());
        assert!(!class_is_trivial(&c, LIM).unwrap());
        // the zero form restricts to the zero class
        let z = restrict_obstruction(&IntegralBilinearForm::from_rows(&[vec![0]]), 2, 2, LIM)
            .unwrap();
        assert!(class_is_trivial(&z, LIM).unwrap());
    }

    #[test]
    fn antisymmetric_forms_restrict_to_trivial_classes() {
        // The explicit primitive for c_{D−Dᵀ} involves D(s(g), s(h)), whose
        // values have denominator N² — so the vanishing on antisymmetric
        // forms is visible exactly when the coefficients can hold it, L = N².
        let a = IntegralBilinearForm::from_rows(&[vec![0, 1], vec![-1, 0]]);
        for n in [2u64, 3] {
            let l = (n * n) as i64;
            let c = restrict_obstruction(&a, n, l, LIM).unwrap();
            assert!(c.is_cocycle(LIM).unwrap());
            assert!(class_is_trivial(&c, LIM).unwrap(), "grid {n}, modulus {l}");
        }
        // With the smaller coefficients ℤ/N the class survives: it is the
        // mod-N Bockstein of the product of the two coordinate characters,
        // which dies on the torus (divisible coefficients) but not here.
        // Pinned so the coefficient-size effect stays visible.
        for n in [2u64, 3] {
            let c = restrict_obstruction(&a, n, n as i64, LIM).unwrap();
            assert!(!class_is_trivial(&c, LIM).unwrap(), "grid {n}, modulus {n}");
        }
    }

    #[test]
    fn class_depends_only_on_the_quadratic_form() {
        // adding D − Dᵀ changes the cocycle but not its class (coefficients
        // L = N² so the primitive built from D(s, s) exists, see above)
        let b1 = IntegralBilinearForm::from_rows(&[vec![1, 1], vec![0, 1]]);
        let b2 = IntegralBilinearForm::from_rows(&[vec![1, 2], vec![-1, 1]]);
        for (n, l) in [(2u64, 4i64), (3, 9)] {
            let c1 = restrict_obstruction(&b1, n, l, LIM).unwrap();
            let c2 = restrict_obstruction(&b2, n, l, LIM).unwrap();
            assert!(class_equal(&c1, &c2, LIM).unwrap(), "grid {n}");
            assert_ne!(c1.values(), c2.values(), "cocycles differ pointwise at grid {n}");
        }
    }

    #[test]
    fn restriction_is_additive_in_the_form() {
        let b1 = IntegralBilinearForm::from_rows(&[vec![1, 0], vec![1, 2]]);
        let b2 = IntegralBilinearForm::from_rows(&[vec![0, 1], vec![0, 1]]);
        let sum = b1.add(&b2);
        let c1 = restrict_obstruction(&b1, 3, 3, LIM).unwrap();
        let c2 = restrict_obstruction(&b2, 3, 3, LIM).unwrap();
        let cs = restrict_obstruction(&sum, 3, 3, LIM).unwrap();
        // B ↦ B(s ⌣ ∂s) is linear, so the tables agree pointwise
        assert_eq!(c1.add(&c2).unwrap(), cs);
    }

    #[test]
    fn cup_products_on_tables() {
        // G = (ℤ/2)², L = 2, coordinate homomorphisms α, β
        let g = FiniteAbelianGroup::power(2, 2).unwrap();
        let alpha = CochainTable::from_fn(g.clone(), 1, 2, LIM, {
            let g = g.clone();
            move |args| g.digits(args[0])[0] as i64
        })
        .unwrap();
        let beta = CochainTable::from_fn(g.clone(), 1, 2, LIM, {
            let g = g.clone();
            move |args| g.digits(args[0])[1] as i64
        })
        .unwrap();
        let ab = alpha.cup(&beta, LIM).unwrap();
        let ba = beta.cup(&alpha, LIM).unwrap();
        assert!(ab.is_cocycle(LIM).unwrap());
        // α⌣β + β⌣α is a coboundary, but α⌣α = x² is not
        assert!(class_is_trivial(&ab.add(&ba).unwrap(), LIM).unwrap());
        let aa = alpha.cup(&alpha, LIM).unwrap();
        assert!(!class_is_trivial(&aa, LIM).unwrap());
    }

    #[test]
    fn restriction_guards() {
        let b = IntegralBilinearForm::from_rows(&[vec![1]]);
        // values have denominator 4; ℤ/2 coefficients cannot hold them
        assert!(matches!(
            restrict_obstruction(&b, 4, 2, LIM),
            Err(FincohError::DenominatorMismatch(2))
        ));
        // multiples of the grid size work
        assert!(restrict_obstruction(&b, 4, 4, LIM).is_ok());
        assert!(restrict_obstruction(&b, 4, 8, LIM).is_ok());
        // real-valued cochains have no canonical restriction
        let lift = crate::cocycle::obstruction_lift(&b);
        assert!(matches!(
            restrict_torus(&lift, 2, 2, LIM),
            Err(FincohError::Restriction(_))
        ));
    }

    #[test]
    fn restriction_matches_pointwise_evaluation() {
        // table(g₁..gₙ) = L·c(points) mod L, bit-exactly
        let b = IntegralBilinearForm::from_rows(&[vec![1, 2], vec![0, -1]]);
        let c = crate::cocycle::obstruction_cocycle(&b);
        let (n, l) = (3u64, 3i64);
        let t = restrict_torus(&c, n, l, LIM).unwrap();
        let g = t.group().clone();
        for tuple in [[0usize, 4, 7], [8, 8, 8], [1, 0, 5]] {
            let args: Vec<crate::cocycle::TorusPoint> = tuple
                .iter()
                .map(|&i| {
                    let d: Vec<u32> = g.digits(i).iter().map(|&x| x as u32).collect();
                    crate::cocycle::TorusPoint::from_grid(&d, n)
                })
                .collect();
            let v = &c.evaluate(&args)[0] * BigInt::from(l);
            assert_eq!(
                BigInt::from(t.value(&tuple)),
                v.to_integer().mod_floor(&BigInt::from(l))
            );
        }
        // the documented witness value: all-halves triple of the x² form
        let b = IntegralBilinearForm::from_rows(&[vec![1]]);
        let t = restrict_obstruction(&b, 2, 2, LIM).unwrap();
        assert_eq!(t.value(&[1, 1, 1]), 1);
        assert_eq!(t.value(&[0, 1, 1]), 0);
    }

    #[test]
    fn degree_two_cup_classes_commute() {
        // carry components are degree-2 cocycles; with 2·2 even, w₀⌣w₁ and
        // w₁⌣w₀ must be cohomologous (not equal pointwise)
        let g = FiniteAbelianGroup::power(2, 2).unwrap();
        let carry = |comp: usize| {
            let g = g.clone();
            CochainTable::from_fn(g.clone(), 2, 2, LIM, move |args| {
                let (a, b) = (g.digits(args[0]), g.digits(args[1]));
                i64::from(a[comp] + b[comp] >= 2)
            })
            .unwrap()
        };
        let (w0, w1) = (carry(0), carry(1));
        let ab = w0.cup(&w1, LIM).unwrap();
        let ba = w1.cup(&w0, LIM).unwrap();
        assert!(class_equal(&ab, &ba, LIM).unwrap());
        assert!(!class_is_trivial(&ab, LIM).unwrap());
    }

    #[test]
    fn size_limits_are_enforced() {
        let g = FiniteAbelianGroup::cyclic(5).unwrap();
        assert!(matches!(
            coboundary_matrix(&g, 3, 100),
            Err(FincohError::SizeLimit(_))
        ));
        assert!(matches!(
            CochainTable::zero(g, 5, 2, 1000),
            Err(FincohError::SizeLimit(_))
        ));
    }
}
