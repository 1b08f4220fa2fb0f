//! Acceptance criteria, one pass/fail line each.

mod common;

use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rrspace::divisors::*;
use rrspace::field_tower::is_irreducible;
use rrspace::funcfield::*;
use rrspace::integral_bases::*;
use rrspace::om_places::*;
use rrspace::rr_engine::*;
use std::time::{Duration, Instant};

type Outcome = Result<String, String>;

macro_rules! check {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn sorted(mut v: Vec<i64>) -> Vec<i64> {
    v.sort();
    v
}

fn within(elapsed: Duration, limit: f64, what: &str) -> Result<(), String> {
    check!(
        elapsed.as_secs_f64() < limit,
        "{what} took {:.2} s, limit {limit} s",
        elapsed.as_secs_f64()
    );
    Ok(())
}

fn worked_example() -> Outcome {
    let start = Instant::now();
    let m = cubic();
    let k = *m.field();
    let table = PlaceTable::new(m.clone());
    let d = worked_divisor(&k);
    let fin = ok(triangular_basis_finite(&table, &d))?;
    check!(format_ratfunc(&k, &fin.q, "t") == "t - 1", "q_I = {}", format_ratfunc(&k, &fin.q, "t"));
    let dens: Vec<String> = fin.denominators.iter().map(|p| format_tpoly(&k, p, "t")).collect();
    check!(dens == ["1", "t^2", "t^4"], "denominators {dens:?}");
    let inf = ok(triangular_basis_infinity(&table, &d))?;
    let nums: Vec<String> = inf.numerators.iter().map(|h| format_bipoly(&k, h, "u", "y")).collect();
    check!(
        nums == ["1", "y", "y^2"] && inf.exponents == [0, 0, 1] && inf.m == 0,
        "infinite basis {nums:?} {:?}",
        inf.exponents
    );
    let c = ok(riemann_roch_with(&table, &d, Route::Auto))?;
    let det = c.p.determinant(&k).deg();
    check!(det == 11 && c.p.rdeg_sum() == 13, "deg det P = {det}, |rdeg P| = {}", c.p.rdeg_sum());
    check!(c.p_red.is_row_reduced(&k, None), "P_red is not row reduced");
    let rd = sorted(c.p_red_row_degrees());
    check!(rd == [3, 4, 4], "rdeg(P_red) = {rd:?}");
    check!(c.shift == 4, "shift {}", c.shift);
    let ds = sorted(c.basis.degrees());
    check!(ds == [0, 0, 1], "d = {ds:?}");
    check!(c.basis.dimension(0) == 4, "dim {}", c.basis.dimension(0));
    let ours = expand_basis(&c.basis, 0);
    let (_, rows) = reference_elements(&m);
    let reference = [rows[0].clone(), rows[0].mul_t_pow(1), rows[1].clone(), rows[3].clone()];
    let mut all = ours.clone();
    all.extend(reference.iter().cloned());
    let (r1, r2, r3) = (
        rank(5, coefficient_rows(&k, &ours)),
        rank(5, coefficient_rows(&k, &reference)),
        rank(5, coefficient_rows(&k, &all)),
    );
    check!(r1 == 4 && r2 == 4 && r3 == 4, "ranks {r1} {r2} {r3}");
    within(start.elapsed(), 1.0, "worked example")?;
    Ok(format!(
        "q = t - 1, dens (1, t^2, t^4), deg det 11 vs 13, rdeg {{3,4,4}}, d {{1,0,0}}, dim 4, rank 4 span match (corrected third row), {:.3} s",
        start.elapsed().as_secs_f64()
    ))
}

fn valuations() -> Outcome {
    let start = Instant::now();
    let m = cubic();
    let k = *m.field();
    let table = PlaceTable::new(m.clone());
    let t = Center::Finite(tpoly(&k, &[0, 1]));
    // ids: [t;0] has key x + t, [t;1] has x − t, [t;2] has x − 1
    let (p1, p2, p3) = (
        PlaceId::new(t.clone(), 1),
        PlaceId::new(t.clone(), 0),
        PlaceId::new(t.clone(), 2),
    );
    let q = FunctionFieldElement::from_bipoly(
        &m,
        &bp(&k, &[&[-1, 1], &[1]]).mul(&k, &bp(&k, &[&[0, -1], &[1]])),
        &tpoly(&k, &[0, 1]),
    );
    let v = |id: &PlaceId, b: &FunctionFieldElement| table.valuation(id, b).unwrap().unwrap();
    let vq = [v(&p1, &q), v(&p2, &q), v(&p3, &q)];
    check!(vq == [1, 0, 0], "v(q) = {vq:?}");
    let tt = FunctionFieldElement::t(&m);
    let vt = [v(&p1, &tt), v(&p2, &tt), v(&p3, &tt)];
    check!(vt == [1, 1, 1], "v(t) = {vt:?}");
    let x1 = FunctionFieldElement::from_bipoly(&m, &bp(&k, &[&[-1], &[1]]), &tpoly(&k, &[1]));
    check!(v(&p3, &x1) == 2, "v_p3(x - 1) = {}", v(&p3, &x1));
    within(start.elapsed(), 0.1, "valuations")?;
    Ok(format!(
        "v(q) = (1, 0, 0), v(t) = (1, 1, 1), v_p3(x - 1) = 2, {:.3} s",
        start.elapsed().as_secs_f64()
    ))
}

fn decompositions() -> Outcome {
    let m = cubic();
    let k = *m.field();
    let table = PlaceTable::new(m.clone());
    let over_t = ok(table.places(&Center::Finite(tpoly(&k, &[0, 1]))))?;
    check!(over_t.len() == 3, "{} places over t", over_t.len());
    let inf = ok(table.places(&Center::Infinity))?;
    check!(inf.len() == 1 && inf[0].e == 3, "infinity: {} places", inf.len());
    // (x^2+1)^2 + t x + t + t^2; one place needs −1 to be a non-square
    let quartic = |p| model(p, &[&[1, 1, 1], &[0, 1], &[2], &[], &[1]]);
    let m7 = quartic(7);
    let k7 = *m7.field();
    let t7 = ok(PlaceTable::new(m7).places(&Center::Finite(tpoly(&k7, &[0, 1]))))?;
    let ef: usize = t7.iter().map(|p| p.e * p.f).sum();
    check!(t7.len() == 1 && ef == 4, "quartic over F7: {} places, sum ef {ef}", t7.len());
    let m5 = quartic(5);
    let k5 = *m5.field();
    let t5 = ok(PlaceTable::new(m5).places(&Center::Finite(tpoly(&k5, &[0, 1]))))?;
    let ef5: usize = t5.iter().map(|p| p.e * p.f).sum();
    check!(ef5 == 4, "quartic over F5: sum ef {ef5}");
    Ok(format!(
        "cubic: 3 places over t, one place at infinity with e = 3; quartic over F7: 1 place, sum ef = 4 (over F5: {} places, sum ef = 4)",
        t5.len()
    ))
}

struct Instance {
    curve: usize,
    divisor: Divisor,
}

fn wild(table: &PlaceTable) -> bool {
    let p = table.model().field().p() as usize;
    let centers = table
        .model()
        .discriminant_primes()
        .iter()
        .cloned()
        .map(Center::Finite)
        .chain([Center::Infinity]);
    centers
        .flat_map(|c| table.places(&c).unwrap().iter().map(|pl| pl.e).collect::<Vec<_>>())
        .any(|e| e % p == 0)
}

fn corpus_instances() -> Result<Vec<Instance>, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut out = Vec::new();
    for (ci, c) in CORPUS.iter().enumerate() {
        let table = PlaceTable::new(c.model());
        let dinf = ok(infinity_divisor(&table))?;
        for _ in 0..4 {
            let mut d = random_divisor(&table, &mut rng, 4, -2, 4);
            while ok(d.degree(&table))? < 2 * c.genus - 1 {
                d = d.add(&dinf);
            }
            out.push(Instance { curve: ci, divisor: d });
        }
    }
    Ok(out)
}

fn dimension_law(instances: &[Instance]) -> Outcome {
    let start = Instant::now();
    let primes: std::collections::BTreeSet<u64> = CORPUS.iter().map(|c| c.p).collect();
    check!(CORPUS.len() >= 12, "corpus has {} curves", CORPUS.len());
    check!(
        primes.iter().all(|p| [2, 3, 5, 7, 13].contains(p)),
        "primes {primes:?}"
    );
    let singular = CORPUS.iter().filter(|c| c.singular).count();
    check!(singular >= 3, "{singular} singular curves");
    check!(CORPUS.iter().all(|c| c.model().n() <= 6), "a curve has n > 6");
    let wild_small = CORPUS
        .iter()
        .filter(|c| c.p <= 3 && wild(&PlaceTable::new(c.model())))
        .count();
    check!(wild_small >= 1, "no wildly ramified place in characteristic 2 or 3");
    check!(instances.len() >= 50, "{} instances", instances.len());
    for inst in instances {
        let c = &CORPUS[inst.curve];
        let table = PlaceTable::new(c.model());
        let deg = ok(inst.divisor.degree(&table))?;
        check!(deg >= 2 * c.genus - 1, "{}: deg {deg} below 2g - 1", c.name);
        let cb = ok(riemann_roch(&table, &inst.divisor))?;
        let dim = cb.dimension(0) as i64;
        check!(
            dim == deg + 1 - c.genus,
            "{} D = {}: dim {dim}, expected {}",
            c.name,
            inst.divisor.format(table.model().field()),
            deg + 1 - c.genus
        );
    }
    within(start.elapsed(), 300.0, "dimension law")?;
    Ok(format!(
        "{} curves (p in {primes:?}, {singular} singular, {wild_small} with wild places in char 2/3), {} divisors with deg >= 2g - 1, {:.1} s",
        CORPUS.len(),
        instances.len(),
        start.elapsed().as_secs_f64()
    ))
}

fn structural(table: &PlaceTable, d: &Divisor) -> Result<(), String> {
    let model = table.model().clone();
    let k = *model.field();
    let n = model.n();
    // Σ e·f = n
    let mut centers = d.centers();
    centers.insert(Center::Infinity);
    centers.extend(model.discriminant_primes().iter().cloned().map(Center::Finite));
    for c in &centers {
        let ef: usize = ok(table.places(c))?.iter().map(|p| p.e * p.f).sum();
        check!(ef == n, "sum ef = {ef} over {}", c.format(&k));
    }
    // triangular shape and sandwiches
    let zero = Divisor::zero();
    let fin = ok(triangular_basis_finite(table, d))?;
    let inf = ok(triangular_basis_infinity(table, d))?;
    let fin0 = ok(triangular_basis_finite(table, &zero))?;
    let inf0 = ok(triangular_basis_infinity(table, &zero))?;
    for (i, (g, p)) in fin.numerators.iter().zip(&fin.denominators).enumerate() {
        check!(g.degree() == Some(i) && g.is_monic(&k), "numerator {i} not monic of degree {i}");
        if i > 0 {
            check!(p.rem(&k, &fin.denominators[i - 1]).is_zero(), "denominator chain breaks at {i}");
        }
    }
    check!(inf.exponents.windows(2).all(|w| w[0] <= w[1]), "infinite exponents not ascending");
    for (delta, exp, delta0, exp0) in [
        (fin.delta(), fin.exp(), fin0.delta(), fin0.exp()),
        (inf.delta(), inf.exp(), inf0.delta(), inf0.exp()),
    ] {
        check!(
            delta0 <= delta && exp0 <= exp && exp <= delta && delta <= n * exp,
            "sandwich fails: delta {delta}, exp {exp}, maximal order {delta0}/{exp0}"
        );
    }
    // exponent bound and the D* identities
    let pos = ok(d.positive().degree(table))?;
    let neg = ok(d.negative().degree(table))?;
    check!(
        (fin.exp() + inf.exp()) as i64 <= pos + neg + (fin0.exp() + inf0.exp()) as i64,
        "exponent bound fails"
    );
    let norm = ok(normalize(table, d))?;
    let dinf = ok(infinity_divisor(table))?;
    let q = FunctionFieldElement::from_rational(&model, norm.q_i.clone());
    let rhs = d.add(&ok(principal_divisor(table, &q))?).add(&dinf.scale(norm.r_d));
    check!(norm.star == rhs, "D* != D + div(q_I) + r_D D_inf");
    check!(
        ok(norm.star.degree(table))? == ok(d.degree(table))? + n as i64 * norm.r_d,
        "deg D* != deg D + n r_D"
    );
    // det-degree equivalence
    let c = ok(riemann_roch_with(table, d, Route::Auto))?;
    check!(c.p_red.is_row_reduced(&k, None), "P_red not row reduced");
    let dp = c.p.determinant(&k).deg();
    let dr = c.p_red.determinant(&k).deg();
    check!(dp == dr && dr as i64 == c.p_red.rdeg_sum(), "deg det P {dp}, P_red {dr}, rdeg sum {}", c.p_red.rdeg_sum());
    // principal divisors of basis elements
    for (b, _) in &c.basis.pairs {
        check!(ok(ok(principal_divisor(table, b))?.degree(table))? == 0, "deg div(b) != 0");
    }
    // shift law
    let base = sorted(c.basis.degrees());
    for r in -2..=2 {
        let s = sorted(ok(riemann_roch(table, &d.add(&dinf.scale(r))))?.degrees());
        check!(
            s == base.iter().map(|x| x + r).collect::<Vec<_>>(),
            "shift law fails at r = {r}"
        );
    }
    Ok(())
}

fn structural_suite(instances: &[Instance]) -> Outcome {
    let start = Instant::now();
    for inst in instances {
        let c = &CORPUS[inst.curve];
        let table = PlaceTable::new(c.model());
        structural(&table, &inst.divisor).map_err(|e| {
            format!("{} D = {}: {e}", c.name, inst.divisor.format(table.model().field()))
        })?;
    }
    Ok(format!(
        "{} instances: sum ef = n, chains, sandwiches, exponent bound, D* identities, det degrees, deg div(b) = 0, shift law r in -2..2, {:.1} s",
        instances.len(),
        start.elapsed().as_secs_f64()
    ))
}

fn membership(table: &PlaceTable, d: &Divisor) -> Result<usize, String> {
    let cb = ok(riemann_roch(table, d))?;
    let basis = expand_basis(&cb, 0);
    for b in &basis {
        check!(ok(contains(table, d, b))?.holds(), "basis element outside L(D)");
    }
    for (b, di) in &cb.pairs {
        check!(!ok(contains(table, d, &b.mul_t_pow(di + 1)))?.holds(), "t^(d+1) b lies in L(D)");
    }
    Ok(basis.len())
}

fn membership_suite(instances: &[Instance]) -> Outcome {
    let start = Instant::now();
    let m = cubic();
    let k = *m.field();
    let mut elements = membership(&PlaceTable::new(m), &worked_divisor(&k))?;
    for inst in instances {
        let c = &CORPUS[inst.curve];
        let table = PlaceTable::new(c.model());
        elements += membership(&table, &inst.divisor).map_err(|e| {
            format!("{} D = {}: {e}", c.name, inst.divisor.format(table.model().field()))
        })?;
    }
    Ok(format!(
        "{} instances, {elements} basis elements in L(D), every t^(d+1) b outside, {:.1} s",
        instances.len() + 1,
        start.elapsed().as_secs_f64()
    ))
}

fn oracle() -> Outcome {
    let start = Instant::now();
    let mut curves = Vec::new();
    let mut cases = 0;
    for c in CORPUS.iter().filter(|c| c.smooth_plane) {
        let fibres = split_fibres(c.p, c.rows);
        if fibres.is_empty() {
            continue;
        }
        let table = PlaceTable::new(c.model());
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for trial in 0..6 {
            let (d, points) = oracle_divisor(&table, &fibres, &mut rng, trial);
            let ours = ok(riemann_roch(&table, &d))?.dimension(0);
            let theirs = oracle_dimension(c.p, c.rows, &points);
            check!(
                ours == theirs,
                "{} D = {}: dim {ours}, oracle {theirs}",
                c.name,
                d.format(table.model().field())
            );
            cases += 1;
        }
        curves.push(c.name);
    }
    check!(curves.len() >= 3, "only {} curves with split fibres", curves.len());
    Ok(format!(
        "{cases} effective divisors (deg <= 8) on {} smooth curves ({}), {:.1} s",
        curves.len(),
        curves.join(", "),
        start.elapsed().as_secs_f64()
    ))
}

/// x^8 + t^8 + 1 over F_17: a smooth octic, genus 21.
fn octic() -> std::sync::Arc<rrspace::funcfield::CurveModel> {
    model(17, &[&[1, 0, 0, 0, 0, 0, 0, 0, 1], &[], &[], &[], &[], &[], &[], &[], &[1]])
}

fn smoke() -> Outcome {
    let start = Instant::now();
    let m = cubic();
    let k = *m.field();
    let dim = ok(riemann_roch(&PlaceTable::new(m), &worked_divisor(&k)))?.dimension(0);
    check!(dim == 4, "worked example dim {dim}");
    let t1 = start.elapsed();
    within(t1, 10.0, "worked example")?;

    let m = octic();
    let k = *m.field();
    let table = PlaceTable::new(m.clone());
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut d = Divisor::zero();
    let mut pos = 0;
    while pos < 20 {
        let a = rng.gen_range(0..17i64);
        let deg2 = rng.gen_bool(0.3);
        let center = if deg2 {
            let g = tpoly(&k, &[a, rng.gen_range(0..17), 1]);
            if !is_irreducible(&k, &g) {
                continue;
            }
            Center::Finite(g)
        } else {
            Center::Finite(tpoly(&k, &[-a, 1]))
        };
        let places = ok(table.places(&center))?;
        let place = &places[rng.gen_range(0..places.len())];
        if pos + place.degree() > 20 || d.get(&place.id) < 0 {
            continue;
        }
        d.add_term(place.id.clone(), 1);
        pos += place.degree();
    }
    d.add_term(PlaceId::new(Center::Finite(tpoly(&k, &[-5, 1])), 0), -2);
    check!(ok(d.positive().degree(&table))? == 20, "deg D+ != 20");
    let t2 = Instant::now();
    let cb = ok(riemann_roch(&table, &d))?;
    let elapsed = t2.elapsed();
    within(elapsed, 10.0, "octic instance")?;
    let deg = ok(d.degree(&table))?;
    Ok(format!(
        "worked example {:.3} s; x^8 + t^8 + 1 over F17 (n = 8), deg D+ = 20, deg D = {deg}, dim {}, {:.2} s",
        t1.as_secs_f64(),
        cb.dimension(0),
        elapsed.as_secs_f64()
    ))
}

fn main() {
    let instances = corpus_instances();
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome>)> = vec![
        ("1 worked example", Box::new(worked_example)),
        ("2 valuation vectors", Box::new(valuations)),
        ("3 place decompositions", Box::new(decompositions)),
        ("4 dimension law", Box::new(|| dimension_law(instances.as_ref()?))),
        ("5 structural invariants", Box::new(|| structural_suite(instances.as_ref()?))),
        ("6 membership and maximality", Box::new(|| membership_suite(instances.as_ref()?))),
        ("7 oracle equivalence", Box::new(oracle)),
        ("8 smoke benchmark", Box::new(smoke)),
    ];
    let mut failed = 0;
    for (name, f) in &criteria {
        let r = std::panic::catch_unwind(std::panic::AssertUnwindSafe(f))
            .unwrap_or_else(|_| Err("panicked".into()));
        match r {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name}: {why}");
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
