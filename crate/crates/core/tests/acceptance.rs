//! Acceptance gate: one test per criterion, each printing a single
//! `criterion N: PASS — …` line (run with `--nocapture` to see them on
//! success; a failing criterion fails its test). Tolerances and budgets are
//! pinned in the constants below.

use modob_core::exactreal::fixtures;
use modob_core::{
    class_is_trivial, coboundary_matrix, cohomology, form_from_symsquare, hermite_normal_form,
    is_quadratically_free, isotropy_defect, polarize, quad_of_bilinear,
    quadratic_relation_lattice, reduce_to_basis, relation_to_form, restrict_obstruction,
    smith_normal_form, symsquare_from_form,
    verify_bockstein, verify_obstruction, BigFloat, Certainty, Cochain, FgAbelianGroup,
    FiniteAbelianGroup, FreenessVerdict, IntMatrix, IntegralBilinearForm,
    IntegralQuadraticForm, LogGenerators, NumericOptions, Pairing, QuadraticRelation,
    RealBasis, TorusPoint, ValueRing, VerifyMode,
};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::cmp::Ordering;
use std::sync::Arc;
use std::time::{Duration, Instant};

const NUMERIC_PRECISION: u32 = 256;
/// Residual bound for the 256-bit numeric golden-ratio relation.
const RESIDUAL_EXP: i64 = -128;
/// Non-relations must show at least this much isotropy defect at 256 bits.
const NONRELATION_FLOOR: (i64, u32) = (1, 20); // 1/10^20
const TABLE_LIMIT: u64 = 100_000_000;
const GRID_LIMIT: u64 = 20_000_000;

fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

fn exact_units(basis: &Arc<RealBasis>, n: usize) -> Vec<modob_core::ExactReal> {
    (0..n).map(|i| basis.unit(i)).collect()
}

/// 256-bit numeric logs for a fixture basis, straight from its anchors.
fn numeric_logs(values: &[modob_core::ExactReal]) -> Vec<BigFloat> {
    values.iter().map(|v| v.eval_numeric(NUMERIC_PRECISION).unwrap()).collect()
}

#[test]
fn criterion_1_sqrt2_is_not_quadratically_free() {
    let t0 = Instant::now();
    let basis = fixtures::sqrt2_basis();
    let gens = LogGenerators::exact(exact_units(&basis, 2)).unwrap();
    let opts = NumericOptions::default();
    let lat = quadratic_relation_lattice(&gens, &opts).unwrap();
    assert_eq!(lat.rank(), 1, "relation lattice rank");
    assert_eq!(*lat.certainty(), Certainty::Proven);
    // pair order (t₁⊙t₁, t₁⊙t₂, t₂⊙t₂); generator is ±(2, 0, −1) and the
    // canonical sign makes the leading coefficient positive
    let gen: Vec<BigInt> = lat.basis()[0].coeffs().to_vec();
    assert_eq!(gen, vec![BigInt::from(2), BigInt::zero(), BigInt::from(-1)]);
    let cert = is_quadratically_free(&gens, &opts).unwrap();
    assert_eq!(cert.verdict.name(), "not-free");
    let FreenessVerdict::NotFree { witness } = &cert.verdict else { unreachable!() };
    assert_eq!(witness.coeffs(), &gen[..], "witness differs from the lattice generator");
    let elapsed = t0.elapsed();
    assert!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    println!(
        "criterion 1: PASS — √2 generators: not-free, rank 1, generator \
         ±(2·t1⊙t1 − t2⊙t2), {elapsed:?}"
    );
}

#[test]
fn criterion_2_rational_powers_are_free() {
    let t0 = Instant::now();
    let basis = fixtures::lambda_q_basis();
    let l = basis.unit(0);
    let gens = LogGenerators::exact(vec![l.clone(), l.scale(&rat(1, 3)), l.scale(&rat(1, 5))])
        .unwrap();
    let cert = is_quadratically_free(&gens, &NumericOptions::default()).unwrap();
    assert_eq!(cert.verdict.name(), "free");
    assert!(matches!(cert.verdict, FreenessVerdict::Free));
    // the subgroup is (L/15)·ℤ — the certificate records the rank-1 basis
    assert_eq!(cert.reduction.basis.len(), 1);
    let elapsed = t0.elapsed();
    assert!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    println!(
        "criterion 2: PASS — (L, L/3, L/5): free with exact certificate, {elapsed:?}"
    );
}

#[test]
fn criterion_3_golden_ratio_relation_in_both_modes() {
    let expected: Vec<BigInt> = vec![BigInt::one(), BigInt::one(), BigInt::from(-1)];

    // exact mode
    let basis = fixtures::golden_basis();
    let gens = LogGenerators::exact(exact_units(&basis, 2)).unwrap();
    let opts = NumericOptions::default();
    let lat = quadratic_relation_lattice(&gens, &opts).unwrap();
    assert_eq!(lat.rank(), 1);
    assert_eq!(lat.basis()[0].coeffs(), &expected[..]);
    let form_exact = relation_to_form(&lat.basis()[0]);

    // numeric mode at 256 bits: t₂ = φ·t₁ with φ = (1+√5)/2
    let t1 = modob_core::ln2(NUMERIC_PRECISION);
    let phi = BigFloat::from_i64(5, NUMERIC_PRECISION)
        .sqrt()
        .unwrap()
        .add(&BigFloat::from_i64(1, NUMERIC_PRECISION))
        .div(&BigFloat::from_i64(2, NUMERIC_PRECISION))
        .unwrap();
    let t2 = t1.mul(&phi);
    let gens = LogGenerators::numeric(vec![t1.clone(), t2.clone()]).unwrap();
    let lat = quadratic_relation_lattice(&gens, &opts).unwrap();
    assert_eq!(lat.rank(), 1, "numeric lattice rank");
    assert_eq!(lat.basis()[0].coeffs(), &expected[..]);
    let form_numeric = relation_to_form(&lat.basis()[0]);

    // the detected relation holds to PSLQ accuracy: residual < 2^RESIDUAL_EXP
    let defect = isotropy_defect(&form_numeric, &[t1, t2]);
    assert!(defect.abs_lt_pow2(RESIDUAL_EXP), "residual {}", defect.to_decimal_string(50));
    assert_eq!(form_exact, form_numeric, "modes disagree on the witness form");
    println!(
        "criterion 3: PASS — golden relation (1, 1, −1) in exact and 256-bit \
         numeric mode, residual < 2^{RESIDUAL_EXP}, forms agree"
    );
}

#[test]
fn criterion_4_isotropy_identity_on_random_forms() {
    let mut rng = ChaCha8Rng::seed_from_u64(40);
    let opts = NumericOptions::default();

    // lattice fixtures with nontrivial relation spaces
    let cases: Vec<(Arc<RealBasis>, usize)> = vec![
        (fixtures::sqrt2_basis(), 2),
        (fixtures::golden_basis(), 2),
        (fixtures::sqrt23_basis(), 3),
    ];

    let mut relations_checked = 0usize;
    let mut nonrelations_checked = 0usize;
    let floor = BigFloat::from_rational(
        &BigRational::new(BigInt::from(NONRELATION_FLOOR.0), BigInt::from(10u8).pow(NONRELATION_FLOOR.1)),
        NUMERIC_PRECISION,
    );

    for (basis, n) in &cases {
        let values = exact_units(basis, *n);
        let gens = LogGenerators::exact(values.clone()).unwrap();
        let lat = quadratic_relation_lattice(&gens, &opts).unwrap();
        assert!(lat.rank() > 0);
        let logs = numeric_logs(&values);
        let pair_len = n * (n + 1) / 2;

        // random lattice elements: exact isotropy, defect is literally zero
        for _ in 0..17 {
            let mut coeffs = vec![BigInt::zero(); pair_len];
            let mut nonzero = false;
            for rel in lat.basis() {
                let k = rng.gen_range(-9i64..=9);
                if k != 0 {
                    nonzero = true;
                }
                for (c, r) in coeffs.iter_mut().zip(rel.coeffs()) {
                    *c += BigInt::from(k) * r;
                }
            }
            if !nonzero {
                coeffs.clone_from_slice(lat.basis()[0].coeffs());
            }
            let rel = QuadraticRelation::from_coeffs(*n, coeffs);
            let q = relation_to_form(&rel);
            let v = q.evaluate_exact(&values).unwrap();
            assert!(v.is_zero(), "lattice element not isotropic: {q}");
            relations_checked += 1;
        }

        // random non-relations: defect bounded away from zero at 256 bits
        for _ in 0..17 {
            let (rel, q) = loop {
                let coeffs: Vec<BigInt> =
                    (0..pair_len).map(|_| BigInt::from(rng.gen_range(-9i64..=9))).collect();
                if coeffs.iter().all(Zero::is_zero) {
                    continue;
                }
                let rel = QuadraticRelation::from_coeffs(*n, coeffs);
                if !lat.contains(&rel) {
                    let q = relation_to_form(&rel);
                    break (rel, q);
                }
            };
            let defect = isotropy_defect(&q, &logs);
            assert_eq!(
                defect.abs().cmp_value(&floor),
                Ordering::Greater,
                "non-relation {rel} has defect {}",
                defect.to_decimal_string(40)
            );
            nonrelations_checked += 1;
        }
    }
    assert!(relations_checked >= 50, "only {relations_checked} relations drawn");
    assert!(nonrelations_checked >= 50, "only {nonrelations_checked} non-relations drawn");
    println!(
        "criterion 4: PASS — {relations_checked} random lattice relations have \
         defect exactly 0; {nonrelations_checked} non-relations exceed 10^-20 at 256 bits"
    );
}

#[test]
fn criterion_5_grid_exactness_of_cocycle_and_bockstein() {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(50);
    for i in 0..10 {
        let d = 1 + i % 3;
        let rows: Vec<Vec<i64>> =
            (0..d).map(|_| (0..d).map(|_| rng.gen_range(-5i64..=5)).collect()).collect();
        let b = IntegralBilinearForm::from_rows(&rows);
        let obstruction = verify_obstruction(&b, 4, GRID_LIMIT, 0);
        assert_eq!(obstruction.mode, VerifyMode::Exhaustive, "form {i} not exhaustive");
        assert_eq!(obstruction.max_defect, "0", "form {i}: {rows:?}");
        assert!(obstruction.ok);
        let bockstein = verify_bockstein(&b, 4, GRID_LIMIT, 0);
        assert_eq!(bockstein.mode, VerifyMode::Exhaustive);
        assert_eq!(bockstein.max_defect, "0", "form {i}: {rows:?}");
        assert!(bockstein.ok);
    }
    let elapsed = t0.elapsed();
    assert!(elapsed < Duration::from_secs(60), "took {elapsed:?}");
    println!(
        "criterion 5: PASS — 10 random forms (d ≤ 3): exhaustive (ℤ/4)^d \
         cocycle and Bockstein checks, max_defect = 0, {elapsed:?}"
    );
}

#[test]
fn criterion_6_finite_oracle_small_group_cohomology() {
    let t0 = Instant::now();

    // |H³(ℤ/N; ℤ/N)| = N, with rank–nullity bookkeeping as a cross-check:
    // |Z³ mod L| · |im ∂³ mod L| = L^{D₃}, where Z comes from an HNF
    // determinant and im from the Smith diagonal — two different
    // eliminations that must agree.
    for n in 2u64..=5 {
        let g = FiniteAbelianGroup::cyclic(n).unwrap();
        let l = n as i64;
        let h3 = cohomology(&g, 3, l, TABLE_LIMIT).unwrap();
        assert_eq!(h3.order(), Some(BigInt::from(n)), "H³(ℤ/{n}; ℤ/{n})");

        let m3 = coboundary_matrix(&g, 3, TABLE_LIMIT).unwrap();
        let snf = smith_normal_form(&m3);
        let d3 = m3.cols();
        let lb = BigInt::from(l);
        let diag = snf.diagonal();
        let mut im_order = BigInt::one();
        let mut z_rows = Vec::with_capacity(d3);
        for j in 0..d3 {
            let dj = if j < diag.len() { diag[j].clone() } else { BigInt::zero() };
            let m = &lb / dj.gcd(&lb);
            im_order *= &m;
            z_rows.push((0..d3).map(|i| snf.v.get(i, j) * &m).collect::<Vec<BigInt>>());
        }
        let z_hnf = hermite_normal_form(&IntMatrix::from_bigint_rows(z_rows, d3));
        assert_eq!(z_hnf.rank, d3);
        let mut z_index = BigInt::one();
        for r in 0..d3 {
            let pivot = (0..d3).find(|&c| !z_hnf.h.get(r, c).is_zero()).unwrap();
            z_index *= z_hnf.h.get(r, pivot).abs();
        }
        let z_order = lb.pow(d3 as u32) / z_index;
        assert_eq!(&z_order * &im_order, lb.pow(d3 as u32), "rank–nullity at N={n}");
    }

    // H⁰ = ℤ/L and H¹ = Hom(G, ℤ/L) on five small groups
    let groups: Vec<(Vec<u64>, i64)> =
        vec![(vec![2], 2), (vec![3], 3), (vec![4], 4), (vec![5], 5), (vec![2, 2], 2)];
    for (factors, l) in groups {
        let g = FiniteAbelianGroup::new(factors.clone()).unwrap();
        let h0 = cohomology(&g, 0, l, TABLE_LIMIT).unwrap();
        assert_eq!(h0, FgAbelianGroup::from_cyclic_orders(0, &[BigInt::from(l)]));
        let h1 = cohomology(&g, 1, l, TABLE_LIMIT).unwrap();
        let hom: Vec<BigInt> =
            factors.iter().map(|&f| BigInt::from(f).gcd(&BigInt::from(l))).collect();
        assert_eq!(h1, FgAbelianGroup::from_cyclic_orders(0, &hom), "H¹ of {factors:?}");
    }

    let elapsed = t0.elapsed();
    assert!(elapsed < Duration::from_secs(30), "took {elapsed:?}");
    println!(
        "criterion 6: PASS — |H³(ℤ/N; ℤ/N)| = N for N ∈ {{2,3,4,5}} with \
         rank–nullity cross-check; H⁰/H¹ identities on 5 groups, {elapsed:?}"
    );
}

#[test]
fn criterion_7_obstruction_witness_and_antisymmetric_vanishing() {
    // the q(x) = x² witness is NOT a coboundary on ℤ/2 with ℤ/2 coefficients
    let b = IntegralBilinearForm::from_rows(&[vec![1]]);
    let c = restrict_obstruction(&b, 2, 2, TABLE_LIMIT).unwrap();
    assert!(c.is_cocycle(TABLE_LIMIT).unwrap());
    assert!(!class_is_trivial(&c, TABLE_LIMIT).unwrap(), "x² class must be nontrivial");

    // the zero form is a coboundary (it is zero on the nose)
    let z = restrict_obstruction(&IntegralBilinearForm::from_rows(&[vec![0]]), 2, 2, TABLE_LIMIT)
        .unwrap();
    assert!(class_is_trivial(&z, TABLE_LIMIT).unwrap());

    // antisymmetric forms give class-trivial restrictions for d ≤ 2, N ≤ 3.
    // Coefficients are ℤ/N²: the primitive trivializing c_{D−Dᵀ} is built
    // from D(s(g), s(h)), whose values need denominator N². With the smaller
    // modulus L = N the class genuinely survives (the finite Bockstein has a
    // kernel the torus-level argument never sees) — that behavior is pinned
    // in the library's own regression tests.
    for d in [
        IntegralBilinearForm::from_rows(&[vec![0]]),
        IntegralBilinearForm::from_rows(&[vec![0, 1], vec![-1, 0]]),
        IntegralBilinearForm::from_rows(&[vec![0, -2], vec![2, 0]]),
    ] {
        for n in 2u64..=3 {
            if d.dim() == 1 && n == 3 {
                continue;
            }
            let l = (n * n) as i64;
            let c = restrict_obstruction(&d, n, l, TABLE_LIMIT).unwrap();
            assert!(
                class_is_trivial(&c, TABLE_LIMIT).unwrap(),
                "antisymmetric {d:?} at grid {n}, modulus {l}"
            );
        }
    }
    println!(
        "criterion 7: PASS — x² witness nontrivial on ℤ/2 (L = 2), zero form \
         trivial, antisymmetric forms class-trivial for d ≤ 2, N ≤ 3 (L = N²)"
    );
}

#[test]
fn criterion_8_property_suite_rerun() {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(80);

    // ∂∂ = 0 and the cup Leibniz rule for nonlinear cochains
    let poly = |degree: usize, dim: usize, a: Vec<i64>, b: Vec<i64>| {
        Cochain::from_fn(degree, dim, 1, ValueRing::Real, move |args| {
            let mut lin = BigRational::zero();
            let mut sq = BigRational::zero();
            let mut idx = 0usize;
            for arg in args {
                for x in arg.coords() {
                    lin += BigRational::from_integer(BigInt::from(a[idx % a.len()])) * x;
                    sq += BigRational::from_integer(BigInt::from(b[idx % b.len()])) * x;
                    idx += 1;
                }
            }
            // constant term keeps the degree-0 cases non-vacuous
            vec![lin + &sq * &sq + BigRational::one()]
        })
    };
    let grid_args = |arity: usize, dim: usize, rng: &mut ChaCha8Rng| -> Vec<TorusPoint> {
        (0..arity)
            .map(|_| {
                let digits: Vec<u32> = (0..dim).map(|_| rng.gen_range(0u32..3)).collect();
                TorusPoint::from_grid(&digits, 3)
            })
            .collect()
    };
    for _ in 0..12 {
        let (p, q, dim) = (rng.gen_range(0usize..=2), rng.gen_range(0usize..=1), 2usize);
        let coeffs = |rng: &mut ChaCha8Rng| (0..4).map(|_| rng.gen_range(-4i64..=4)).collect();
        let (a, b): (Vec<i64>, Vec<i64>) = (coeffs(&mut rng), coeffs(&mut rng));
        let phi = poly(p, dim, a.clone(), b.clone());
        let psi = poly(q, dim, b, a);
        let args = grid_args(p + 2, dim, &mut rng);
        assert!(phi.coboundary().coboundary().evaluate(&args)[0].is_zero(), "∂∂ ≠ 0");
        let cup = phi.cup(&psi, &Pairing::Product).unwrap();
        let lhs = cup.coboundary();
        let t1 = phi.coboundary().cup(&psi, &Pairing::Product).unwrap();
        let t2 = phi.cup(&psi.coboundary(), &Pairing::Product).unwrap();
        let rhs = if p % 2 == 0 { t1.add(&t2).unwrap() } else { t1.sub(&t2).unwrap() };
        let args = grid_args(p + q + 1, dim, &mut rng);
        assert_eq!(lhs.evaluate(&args), rhs.evaluate(&args), "Leibniz failed");
    }

    // polarization and ⊙-isomorphism round-trips
    for _ in 0..25 {
        let n = rng.gen_range(1usize..=4);
        let diag: Vec<BigInt> = (0..n).map(|_| BigInt::from(rng.gen_range(-9i64..=9))).collect();
        let cross: Vec<BigInt> =
            (0..n * (n - 1) / 2).map(|_| BigInt::from(rng.gen_range(-9i64..=9))).collect();
        let q = IntegralQuadraticForm::new(diag, cross);
        assert_eq!(quad_of_bilinear(&polarize(&q)), q);
        assert_eq!(form_from_symsquare(&symsquare_from_form(&q)), q);
    }

    // SNF postconditions on random matrices
    for _ in 0..20 {
        let (r, c) = (rng.gen_range(1usize..=5), rng.gen_range(1usize..=5));
        let rows: Vec<Vec<i64>> =
            (0..r).map(|_| (0..c).map(|_| rng.gen_range(-9i64..=9)).collect()).collect();
        let m = IntMatrix::from_rows(&rows);
        let s = smith_normal_form(&m);
        assert_eq!(s.u.mul(&m).mul(&s.v), s.d, "U·M·V ≠ D");
        assert_eq!(s.u.determinant().abs(), BigInt::one());
        assert_eq!(s.v.determinant().abs(), BigInt::one());
        let diag = s.diagonal();
        for w in diag.windows(2) {
            assert!(!w[0].is_negative() && !w[1].is_negative());
            if !w[0].is_zero() {
                assert!((&w[1] % &w[0]).is_zero(), "divisor chain broken");
            } else {
                assert!(w[1].is_zero());
            }
        }
    }

    // relation-lattice invariance under rational scaling of the generators
    let basis = fixtures::sqrt2_basis();
    let units = exact_units(&basis, 2);
    let opts = NumericOptions::default();
    let reference = quadratic_relation_lattice(
        &LogGenerators::exact(units.clone()).unwrap(),
        &opts,
    )
    .unwrap();
    for scale in [rat(3, 7), rat(5, 2), rat(-1, 4)] {
        let scaled: Vec<_> = units.iter().map(|u| u.scale(&scale)).collect();
        let lat =
            quadratic_relation_lattice(&LogGenerators::exact(scaled).unwrap(), &opts).unwrap();
        let a: Vec<_> = reference.basis().iter().map(|r| r.coeffs().to_vec()).collect();
        let b: Vec<_> = lat.basis().iter().map(|r| r.coeffs().to_vec()).collect();
        assert_eq!(a, b, "lattice moved under scaling by {scale}");
    }

    // numeric mode must never output a proven "free": 256-bit audit on one
    // dependent and one (conjecturally) independent family
    let prec = NUMERIC_PRECISION;
    let ln2 = modob_core::ln2(prec);
    let ln3 = BigFloat::from_i64(3, prec).ln().unwrap();
    let ln8 = ln2.mul_bigint(&BigInt::from(3));
    for gens in [vec![ln2.clone(), ln8], vec![ln2, ln3]] {
        let cert =
            is_quadratically_free(&LogGenerators::numeric(gens).unwrap(), &opts).unwrap();
        assert!(
            !matches!(cert.verdict, FreenessVerdict::Free),
            "numeric mode claimed proven freeness"
        );
    }
    // the reduction path agrees: numeric reduction never claims exactness
    let nums = vec![modob_core::ln2(prec).mul_bigint(&BigInt::from(2)), modob_core::ln2(prec)];
    let red = reduce_to_basis(&LogGenerators::numeric(nums).unwrap(), &opts).unwrap();
    assert!(matches!(red.certainty, Certainty::UpToBound { .. }));

    let elapsed = t0.elapsed();
    assert!(elapsed < Duration::from_secs(300), "took {elapsed:?}");
    println!(
        "criterion 8: PASS — condensed property rerun (coboundary, Leibniz, \
         polarization, ⊙, SNF, scaling invariance, numeric audit), {elapsed:?}"
    );
}
