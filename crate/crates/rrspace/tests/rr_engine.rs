mod common;

use common::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rrspace::divisors::*;
use rrspace::field_tower::PrimeField;
use rrspace::funcfield::*;
use rrspace::om_places::*;
use rrspace::rr_engine::*;
use rrspace::Error;

fn sorted(mut v: Vec<i64>) -> Vec<i64> {
    v.sort();
    v
}

fn show(k: &PrimeField, m: &rrspace::polymat::PolyMatrix) -> Vec<Vec<String>> {
    m.rows()
        .iter()
        .map(|r| r.iter().map(|a| format_tpoly(k, a, "t")).collect())
        .collect()
}

#[test]
fn worked_example_matrices() {
    let m = cubic();
    let k = *m.field();
    let table = PlaceTable::new(m.clone());
    let c = riemann_roch_with(&table, &worked_divisor(&k), Route::Auto).unwrap();
    assert!(!c.shifted);
    assert_eq!(
        show(&k, &c.p),
        vec![
            vec!["t^5", "0", "0"],
            vec!["-t^3", "t^4", "0"],
            vec!["-t^4 + t^3 + t^2", "-t^3 - t^2", "t^2"],
        ]
    );
    assert_eq!(c.p.determinant(&k).deg(), 11);
    assert_eq!(c.p.rdeg_sum(), 13);
    assert!(c.p_red.is_row_reduced(&k, None));
    assert_eq!(sorted(c.p_red_row_degrees()), vec![3, 4, 4]);
    assert_eq!(c.shift, 4);
    assert_eq!(sorted(c.basis.degrees()), vec![0, 0, 1]);
    assert_eq!(c.basis.dimension(0), 4);
}

#[test]
fn reference_rows_lie_in_the_computed_space() {
    let m = cubic();
    let k = *m.field();
    let table = PlaceTable::new(m.clone());
    let d = worked_divisor(&k);
    let cb = riemann_roch(&table, &d).unwrap();
    let ours = expand_basis(&cb, 0);
    assert_eq!(rank(5, coefficient_rows(&k, &ours)), 4);
    let (_, rows) = reference_elements(&m);
    let mut all = ours.clone();
    let reference = [
        rows[0].clone(),
        rows[0].mul_t_pow(1),
        rows[1].clone(),
        rows[3].clone(),
    ];
    for b in &reference {
        assert!(contains(&table, &d, b).unwrap().holds());
        all.push(b.clone());
    }
    assert_eq!(rank(5, coefficient_rows(&k, &reference)), 4);
    assert_eq!(rank(5, coefficient_rows(&k, &all)), 4);
}

#[test]
fn inconsistent_reference_elements_fail_membership() {
    let m = cubic();
    let k = *m.field();
    let table = PlaceTable::new(m.clone());
    let d = worked_divisor(&k);
    let (closed, rows) = reference_elements(&m);
    let p3 = PlaceId::new(Center::Finite(tpoly(&k, &[0, 1])), 2);
    for b in closed.iter().chain([&rows[2]]) {
        let mem = contains(&table, &d, b).unwrap();
        assert!(mem.violations.iter().any(|v| v.place == p3));
    }
}

#[test]
fn expansion_counts() {
    let m = cubic();
    let k = *m.field();
    let table = PlaceTable::new(m.clone());
    let cb = riemann_roch(&table, &worked_divisor(&k)).unwrap();
    assert_eq!(expand_basis(&cb, 0).len(), 4);
    assert_eq!(expand_basis(&cb, -2).len(), 0);
    assert_eq!(expand_basis(&cb, 1).len(), 7);
    assert_eq!(cb.dimension(1), 7);
}

#[test]
fn membership_and_maximality_on_worked_example() {
    let m = cubic();
    let k = *m.field();
    let table = PlaceTable::new(m.clone());
    let d = worked_divisor(&k);
    let cb = riemann_roch(&table, &d).unwrap();
    for (b, di) in &cb.pairs {
        assert!(contains(&table, &d, &b.mul_t_pow(*di)).unwrap().holds());
        assert!(!contains(&table, &d, &b.mul_t_pow(di + 1)).unwrap().holds());
    }
    let (b0, _) = cb.pairs.iter().find(|(_, d)| *d == 1).unwrap();
    assert!(!contains(&table, &d, &b0.mul_t_pow(2)).unwrap().holds());
}

#[test]
fn zero_and_negative_divisors() {
    let m = cubic();
    let k = *m.field();
    let table = PlaceTable::new(m.clone());
    let cb = riemann_roch(&table, &Divisor::zero()).unwrap();
    assert_eq!(cb.dimension(0), 1);
    let basis = expand_basis(&cb, 0);
    assert_eq!(basis.len(), 1);
    let (h, den) = basis[0].to_common();
    assert_eq!(h.degree(), Some(0));
    assert_eq!(h.coeff(0).deg(), 0);
    assert_eq!(den.deg(), 0);
    let neg = worked_divisor(&k).neg();
    assert_eq!(riemann_roch(&table, &neg).unwrap().dimension(0), 0);
}

#[test]
fn constants_and_effective_divisors() {
    let m = cubic();
    let k = *m.field();
    let table = PlaceTable::new(m.clone());
    let one = FunctionFieldElement::one(&m);
    let t = Center::Finite(tpoly(&k, &[0, 1]));
    let eff = Divisor::from_terms([
        (PlaceId::new(t.clone(), 2), 2),
        (PlaceId::new(Center::Infinity, 0), 1),
    ]);
    assert!(contains(&table, &eff, &one).unwrap().holds());
    let not_eff = Divisor::from_terms([(PlaceId::new(t, 2), -1)]);
    let mem = contains(&table, &not_eff, &one).unwrap();
    assert_eq!(mem.violations.len(), 1);
    assert_eq!(mem.violations[0].valuation, 0);
    assert_eq!(mem.violations[0].multiplicity, -1);
}

#[test]
fn membership_certificate_at_infinity() {
    let m = cubic();
    let k = *m.field();
    let table = PlaceTable::new(m.clone());
    // q = (x − 1 + t)(x − t)/t
    let a = FunctionFieldElement::from_bipoly(&m, &bp(&k, &[&[-1, 1], &[1]]), &tpoly(&k, &[1]));
    let b = FunctionFieldElement::from_bipoly(&m, &bp(&k, &[&[0, -1], &[1]]), &tpoly(&k, &[0, 1]));
    let q = a.mul(&b).unwrap();
    let t = Center::Finite(tpoly(&k, &[0, 1]));
    let p1 = PlaceId::new(t, 1);
    assert_eq!(table.valuation(&p1, &q).unwrap(), Some(1));
    let d = Divisor::from_terms([(p1, -1)]);
    let mem = contains(&table, &d, &q).unwrap();
    assert!(!mem.holds());
    assert!(mem
        .violations
        .iter()
        .all(|v| v.place.center == Center::Infinity));
    assert!(matches!(
        contains(&table, &d, &FunctionFieldElement::zero(&m)),
        Err(Error::InvalidInput(_))
    ));
}

#[test]
fn invariants_of_the_worked_curve() {
    let table = PlaceTable::new(cubic());
    let inv = curve_invariants(&table).unwrap();
    assert_eq!(inv.delta_finite, 1);
    assert_eq!(inv.delta_infinite, 0);
    assert_eq!(inv.delta_curve, 1);
    assert_eq!(inv.genus, Some(0));
}

#[test]
fn smooth_conic_and_cubic() {
    let conic = PlaceTable::new(model(7, &[&[-1, 0, -1], &[], &[1]]));
    let inv = curve_invariants(&conic).unwrap();
    assert_eq!((inv.delta_curve, inv.genus), (0, Some(0)));
    // X³ + X − t³ − t − 1 over F5
    let m = model(5, &[&[-1, -1, 0, -1], &[1], &[], &[1]]);
    let k = *m.field();
    let sf = factor_is_squarefree(&k, m.discriminant());
    let inv = curve_invariants(&PlaceTable::new(m)).unwrap();
    if sf {
        assert_eq!((inv.delta_curve, inv.genus), (0, Some(1)));
    }
    assert_eq!(inv.genus, Some(1 - inv.delta_curve));
}

fn factor_is_squarefree(k: &PrimeField, a: &TPoly) -> bool {
    rrspace::field_tower::factor(k, a)
        .unwrap()
        .iter()
        .all(|(_, e)| *e == 1)
}

#[test]
fn corpus_genera() {
    for c in CORPUS {
        let m = c.model();
        let n = m.n() as i64;
        let inv = curve_invariants(&PlaceTable::new(m.clone())).unwrap();
        assert_eq!(inv.rho, 1, "{}", c.name);
        assert_eq!(inv.genus, Some(c.genus), "{}", c.name);
        assert_eq!(inv.delta_curve > 0, c.singular, "{}", c.name);
        if m.lambda() == 1 {
            assert_eq!(
                c.genus,
                (n - 1) * (n - 2) / 2 - inv.delta_curve,
                "{}",
                c.name
            );
        }
    }
}

#[test]
fn constant_field_extension_is_detected() {
    // X² − 2t² over F5: 2 is not a square, so L(0) = F25.
    let m = model(5, &[&[0, 0, -2], &[], &[1]]);
    let inv = curve_invariants(&PlaceTable::new(m)).unwrap();
    assert_eq!(inv.rho, 2);
    assert_eq!(inv.genus, None);
}

#[test]
fn routes_agree_when_infinity_is_trivial() {
    for c in CORPUS {
        let table = PlaceTable::new(c.model());
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..4 {
            let d = random_divisor(&table, &mut rng, 4, -2, 4);
            let general = riemann_roch_with(&table, &d, Route::General).unwrap();
            match riemann_roch_with(&table, &d, Route::Shifted) {
                Ok(s) => assert_eq!(
                    sorted(s.basis.degrees()),
                    sorted(general.basis.degrees()),
                    "{}",
                    c.name
                ),
                Err(Error::InvalidInput(_)) => {}
                Err(e) => panic!("{e}"),
            }
        }
    }
}

#[test]
fn oracle_agreement_on_smooth_curves() {
    let mut checked = 0;
    for c in CORPUS.iter().filter(|c| c.smooth_plane) {
        let m = c.model();
        let k = *m.field();
        let table = PlaceTable::new(m.clone());
        let fibres = split_fibres(c.p, c.rows);
        if fibres.is_empty() {
            continue;
        }
        checked += 1;
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for trial in 0..6 {
            let (d, points) = oracle_divisor(&table, &fibres, &mut rng, trial);
            let ours = riemann_roch(&table, &d).unwrap().dimension(0);
            assert_eq!(
                ours,
                oracle_dimension(c.p, c.rows, &points),
                "{} {}",
                c.name,
                d.format(&k)
            );
        }
    }
    assert!(checked >= 3);
}

fn check_instance(table: &PlaceTable, d: &Divisor, genus: i64) -> Result<(), TestCaseError> {
    let k = *table.model().field();
    let cb = riemann_roch(table, d).unwrap();
    let deg = d.degree(table).unwrap();
    if deg >= 2 * genus - 1 {
        prop_assert_eq!(cb.dimension(0) as i64, deg + 1 - genus);
    }
    if deg < 0 {
        prop_assert_eq!(cb.dimension(0), 0);
    }
    let basis = expand_basis(&cb, 0);
    for b in &basis {
        prop_assert!(contains(table, d, b).unwrap().holds());
    }
    for (b, di) in &cb.pairs {
        prop_assert!(!contains(table, d, &b.mul_t_pow(di + 1)).unwrap().holds());
    }
    if !basis.is_empty() {
        prop_assert_eq!(rank(k.p(), coefficient_rows(&k, &basis)), basis.len());
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn dimension_law_membership_and_maximality(ci in 0..CORPUS.len(), seed in any::<u64>()) {
        let c = &CORPUS[ci];
        let table = PlaceTable::new(c.model());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = random_divisor(&table, &mut rng, 3, -2, 3);
        check_instance(&table, &d, c.genus)?;
    }

    #[test]
    fn shift_law(ci in 0..CORPUS.len(), seed in any::<u64>()) {
        let c = &CORPUS[ci];
        let table = PlaceTable::new(c.model());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = random_divisor(&table, &mut rng, 3, -2, 3);
        let dinf = infinity_divisor(&table).unwrap();
        let base = sorted(riemann_roch(&table, &d).unwrap().degrees());
        for r in -2..=2 {
            let shifted = sorted(riemann_roch(&table, &d.add(&dinf.scale(r))).unwrap().degrees());
            prop_assert_eq!(shifted, base.iter().map(|x| x + r).collect::<Vec<_>>());
        }
    }

    #[test]
    fn rewriting_by_a_principal_divisor(ci in 0..CORPUS.len(), seed in any::<u64>(), a in 1i64..13, b in 0i64..13) {
        let c = &CORPUS[ci];
        let m = c.model();
        let k = *m.field();
        let table = PlaceTable::new(m.clone());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = random_divisor(&table, &mut rng, 3, 0, 3);
        let q = RationalFunction::new(&k, tpoly(&k, &[b, 1]), tpoly(&k, &[a, 0, 1]));
        prop_assume!(!q.is_zero());
        let qe = FunctionFieldElement::from_rational(&m, q);
        let d2 = d.add(&principal_divisor(&table, &qe).unwrap());
        let cb = riemann_roch(&table, &d).unwrap();
        let cb2 = riemann_roch(&table, &d2).unwrap();
        prop_assert_eq!(cb.dimension(0), cb2.dimension(0));
        let qinv = qe.inv().unwrap();
        for b in expand_basis(&cb, 0) {
            prop_assert!(contains(&table, &d2, &b.mul(&qinv).unwrap()).unwrap().holds());
        }
    }
}

#[test]
fn prepare_keeps_a_monic_model() {
    let k = PrimeField::new(5).unwrap();
    let f = bp(&k, &[&[0, 0, 1], &[], &[-1], &[1]]);
    let big_f = HomogeneousPoly::homogenize(k, &f).unwrap();
    let m = prepare_curve(&big_f, 4096).unwrap();
    assert!(m.transform().is_none());
    assert_eq!(m.f(), &f);
}

#[test]
fn prepare_moves_points_off_the_curve() {
    // X0³ + X1²X2 + X1X2² over F7 has neither X1³ nor X2³.
    let k = PrimeField::new(7).unwrap();
    let big_f = HomogeneousPoly::new(k, [([3, 0, 0], 1), ([0, 2, 1], 1), ([0, 1, 2], 1)]).unwrap();
    let m = prepare_curve(&big_f, 4096).unwrap();
    let tr = m.transform().unwrap().clone();
    let g = big_f.transform(&tr.matrix);
    assert_ne!(g.eval(&[0, 1, 0]), 0);
    assert_ne!(g.eval(&[0, 0, 1]), 0);
    assert_eq!(m.n(), 3);
    let inv = curve_invariants(&PlaceTable::new(std::sync::Arc::new(m))).unwrap();
    assert_eq!(inv.genus, Some(1));
}

#[test]
fn prepare_swaps_to_the_separable_variable() {
    // X2² + X1² + X0X1 over F2 is inseparable in X2 but not in X1.
    let k = PrimeField::new(2).unwrap();
    let big_f = HomogeneousPoly::new(k, [([0, 0, 2], 1), ([0, 2, 0], 1), ([1, 1, 0], 1)]).unwrap();
    let m = prepare_curve(&big_f, 4096).unwrap();
    assert!(m.transform().unwrap().swapped);
    assert_eq!(m.f(), &bp(&k, &[&[0, 0, 1], &[1], &[1]]));
}

#[test]
fn prepare_reports_small_fields_and_reducible_curves() {
    // Σ X_i X_j (X_i + X_j) vanishes on all of P²(F2).
    let k = PrimeField::new(2).unwrap();
    let all = HomogeneousPoly::new(
        k,
        [
            ([2, 1, 0], 1),
            ([1, 2, 0], 1),
            ([2, 0, 1], 1),
            ([1, 0, 2], 1),
            ([0, 2, 1], 1),
            ([0, 1, 2], 1),
        ],
    )
    .unwrap();
    assert!(matches!(
        prepare_curve(&all, 4096),
        Err(Error::FieldTooSmall { size: 2, degree: 3 })
    ));
    let k = PrimeField::new(7).unwrap();
    let split = HomogeneousPoly::new(k, [([0, 0, 2], 1), ([0, 2, 0], 6)]).unwrap();
    assert!(matches!(
        prepare_curve(&split, 4096),
        Err(Error::NotIrreducible)
    ));
}

#[test]
fn corpus_curves_are_irreducible() {
    for c in CORPUS {
        assert!(
            is_irreducible_curve(&c.model(), 4096).unwrap(),
            "{}",
            c.name
        );
    }
    // (X² − t²)(X² − t² + 1)
    let k = PrimeField::new(5).unwrap();
    let f = bp(&k, &[&[0, 0, -1], &[], &[1]]).mul(&k, &bp(&k, &[&[1, 0, -1], &[], &[1]]));
    let reducible = CurveModel::new(k, f).unwrap();
    assert!(!is_irreducible_curve(&reducible, 4096).unwrap());
}
