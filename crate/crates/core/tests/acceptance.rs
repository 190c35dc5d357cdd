//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Built with `harness = false`.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{brute_force_dependent, conjugated_strict_upper, cube_vanishes_at, test_points};
use nilpotent_maps::families::degree_bounds;
use nilpotent_maps::jacobian::{matrix_cube_is_zero, nilpotency_residuals, xy_shape_system, PolyMatrix};
use nilpotent_maps::kernel::recombine;
use nilpotent_maps::parser::ParseError;
use nilpotent_maps::poly::{int, rat, Degree, Monomial};
use nilpotent_maps::search::{DEFAULT_SEED, DEFAULT_TRIALS};
use nilpotent_maps::{
    conjugate_by_transposition, conjugate_linear, corollary_3_7_family, express_in, find_kernel_generator, format,
    is_nilpotent, jacobian_matrix, linear_dependence, origin_check, parse, parse_map, theorem_3_3_family,
    verify_theorem, FamilyParams, LinearMap, MapSource, PolyMap, Polynomial, Rational, SearchSpace, ShapeId,
    UniPoly, Var,
};
use num_traits::Zero;
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Criterion = (&'static str, fn() -> Outcome);
type RejectionCase = (&'static str, usize, fn(&ParseError) -> bool);

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn within(elapsed: Duration, limit_s: f64) -> bool {
    elapsed.as_secs_f64() < limit_s
}

fn coeffs_m1_0_1() -> Vec<Rational> {
    (-1..=1).map(int).collect()
}

/// Random polynomial with integer or half-integer coefficients.
fn random_poly(rng: &mut ChaCha8Rng, max_exp: u32, z_max: u32, max_terms: usize) -> Polynomial {
    let n = rng.random_range(0..=max_terms);
    Polynomial::from_terms((0..n).map(|_| {
        let m = Monomial::new(
            rng.random_range(0..=max_exp),
            rng.random_range(0..=max_exp),
            rng.random_range(0..=z_max),
        );
        (m, rat(rng.random_range(-5..=5), rng.random_range(1..=2)))
    }))
}

fn random_uni(rng: &mut ChaCha8Rng, max_deg: u32) -> UniPoly {
    let d = rng.random_range(1..=max_deg);
    let mut c: Vec<Rational> = (0..d).map(|_| int(rng.random_range(-2..=2))).collect();
    c.push(int(*[-2, -1, 1, 2].choose(rng).unwrap()));
    UniPoly::from_coeffs(c)
}

fn family_soundness() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    let mut failures = Vec::new();
    for i in 0..DEFAULT_TRIALS {
        let p = FamilyParams::sample(&mut rng);
        let Ok(map) = theorem_3_3_family(&p) else {
            failures.push(format!("#{i}: construction failed"));
            continue;
        };
        let mut bad = Vec::new();
        if !nilpotency_residuals(&map).all_zero() {
            bad.push("residuals".to_string());
        }
        if !origin_check(&map) {
            bad.push("origin".to_string());
        }
        if !linear_dependence(&map).is_independent() {
            bad.push("dependent".to_string());
        }
        bad.extend(degree_bounds(&map).into_iter().filter(|c| !c.holds).map(|c| c.name));
        if !bad.is_empty() {
            failures.push(format!("#{i}: {}", bad.join(", ")));
        }
    }
    let space = SearchSpace::default_for(ShapeId::T3_3);
    let report = verify_theorem(&space, DEFAULT_TRIALS, DEFAULT_SEED, u64::MAX);
    let elapsed = start.elapsed();
    let report_ok = report.as_ref().is_ok_and(|r| r.family_failures == 0 && r.family_trials == DEFAULT_TRIALS);
    outcome(
        failures.is_empty() && report_ok && within(elapsed, 30.0),
        format!(
            "{} members, {} failures{}, report family_failures = {}, {:.2} s",
            DEFAULT_TRIALS,
            failures.len(),
            if failures.is_empty() { String::new() } else { format!(" ({})", failures.join("; ")) },
            report.map(|r| r.family_failures.to_string()).unwrap_or_else(|e| e.to_string()),
            elapsed.as_secs_f64()
        ),
    )
}

fn hand_instance() -> Outcome {
    let start = Instant::now();
    let p = FamilyParams::simple(UniPoly::t());
    let map = theorem_3_3_family(&p).expect("valid params");
    let expected = parse_map(&MapSource::new("y + x^2", "z - 2*x*(y + x^2)", "(y + x^2)^2")).unwrap();
    let exact = map == expected;
    let residuals_zero = nilpotency_residuals(&map).all_zero();

    // The minor-sum residual, term by term, with v = v0 + v1 z.
    let v0 = &map.v - &(&map.v.coeff_of_power(Var::Z, 1) * &Polynomial::z());
    let v1 = map.v.coeff_of_power(Var::Z, 1);
    let d = |p: &Polynomial, v| p.partial(v);
    let t1 = &d(&map.u, Var::X) * &d(&v0, Var::Y);
    let t2 = -&(&d(&v0, Var::X) * &d(&map.u, Var::Y));
    let t3 = -&(&v1 * &d(&map.h, Var::Y));
    let expect = |s: &str| parse(s).unwrap();
    let terms_ok = t1 == expect("-4*x^2") && t2 == expect("6*x^2 + 2*y") && t3 == expect("-2*x^2 - 2*y");
    let sum_zero = (&(&t1 + &t2) + &t3).is_zero();
    let system_ok = xy_shape_system(&map).is_some_and(|s| s[1] == &(&t1 + &t2) + &t3);
    let elapsed = start.elapsed();
    outcome(
        exact && residuals_zero && terms_ok && sum_zero && system_ok && within(elapsed, 1.0),
        format!(
            "H = ({}, {}, {}); terms {} | {} | {} sum to 0: {}; {:.3} s",
            format(&map.u),
            format(&map.v),
            format(&map.h),
            format(&t1),
            format(&t2),
            format(&t3),
            sum_zero,
            elapsed.as_secs_f64()
        ),
    )
}

fn dependence_searches() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for shape in [ShapeId::T2_1, ShapeId::T2_4, ShapeId::T2_6] {
        let start = Instant::now();
        let space = SearchSpace::new(shape, 2, coeffs_m1_0_1(), true);
        match verify_theorem(&space, 0, DEFAULT_SEED, u64::MAX) {
            Ok(r) => {
                ok &= r.nilpotent_found >= 1 && r.counterexamples.is_empty();
                parts.push(format!(
                    "{shape}: {} instances, {} nilpotent, {} counterexamples, {:.1} s",
                    r.instances_examined,
                    r.nilpotent_found,
                    r.counterexamples.len(),
                    start.elapsed().as_secs_f64()
                ));
            }
            Err(e) => {
                ok = false;
                parts.push(format!("{shape}: {e}"));
            }
        }
    }
    outcome(ok, parts.join("; "))
}

fn constant_component_witness() -> Outcome {
    let start = Instant::now();
    let src = MapSource::new("y", "1", "x");
    let map = parse_map(&src).unwrap();
    let nilpotent = is_nilpotent(&jacobian_matrix(&map));
    let independent = linear_dependence(&map).is_independent();
    let off_origin = !origin_check(&map);
    let single = start.elapsed();

    let start = Instant::now();
    let space = SearchSpace::new(ShapeId::T2_1, 2, coeffs_m1_0_1(), false);
    let (found, detail) = match verify_theorem(&space, 0, DEFAULT_SEED, u64::MAX) {
        Ok(r) => {
            let canonical = MapSource::from_map(&map);
            let listed = r.expected_witnesses.contains(&canonical);
            (
                listed && r.counterexamples.is_empty(),
                format!(
                    "search without H(0) = 0: {} instances, {} expected witnesses, (y, 1, x) listed: {listed}, {:.1} s",
                    r.instances_examined,
                    r.expected_witness_count.unwrap_or(0),
                    start.elapsed().as_secs_f64()
                ),
            )
        }
        Err(e) => (false, e.to_string()),
    };
    outcome(
        nilpotent && independent && off_origin && found && within(single, 1.0),
        format!(
            "(y, 1, x): nilpotent {nilpotent}, independent {independent}, H(0) != 0 {off_origin}, {:.3} s; {detail}",
            single.as_secs_f64()
        ),
    )
}

fn homogeneous_search() -> Outcome {
    let start = Instant::now();
    let space = SearchSpace::new(ShapeId::T3_11, 2, coeffs_m1_0_1(), true);
    match verify_theorem(&space, 0, DEFAULT_SEED, u64::MAX) {
        Ok(r) => outcome(
            r.counterexamples.is_empty() && r.nilpotent_found >= 1,
            format!(
                "{} instances, {} nilpotent, {} counterexamples, {:.1} s",
                r.instances_examined,
                r.nilpotent_found,
                r.counterexamples.len(),
                start.elapsed().as_secs_f64()
            ),
        ),
        Err(e) => outcome(false, e.to_string()),
    }
}

fn kernel_oracle() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    let mut failures = Vec::new();
    let mut built = 0;
    while built < 25 {
        let q0 = random_poly(&mut rng, 3, 0, 4);
        let q0 = &q0 - &Polynomial::constant(q0.constant_term());
        if !matches!(q0.total_degree(), Degree::Finite(1..=3)) {
            continue;
        }
        built += 1;
        let u = random_uni(&mut rng, 3).eval_at(&q0);
        let h = random_uni(&mut rng, 3).eval_at(&q0);
        let top = u.total_degree().max(h.total_degree()).finite().unwrap();
        let result = find_kernel_generator(&u, &h, top).and_then(|g| {
            for p in [&u, &h, &q0] {
                let c = express_in(p, &g.q, top)?;
                if &recombine(&c, &g.q) != p {
                    return Ok(false);
                }
            }
            Ok(true)
        });
        if !matches!(result, Ok(true)) {
            failures.push(format!("q0 = {}: {:?}", format(&q0), result));
        }
    }
    let elapsed = start.elapsed();
    outcome(
        failures.is_empty() && within(elapsed, 60.0),
        format!(
            "{built} constructions, {} failures{}, {:.2} s",
            failures.len(),
            if failures.is_empty() { String::new() } else { format!(" ({})", failures.join("; ")) },
            elapsed.as_secs_f64()
        ),
    )
}

fn criterion_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    let mut agree = 0;
    let mut constructed_nilpotent = 0;
    let mut random_nilpotent = 0;
    for i in 0..200 {
        let m = if i < 100 {
            let above = std::array::from_fn(|_| random_poly(&mut rng, 2, 2, 3));
            let shears = std::array::from_fn(|_| rng.random_range(-2..=2));
            conjugated_strict_upper(above, shears)
        } else {
            PolyMatrix::new(std::array::from_fn(|_| {
                std::array::from_fn(|_| random_poly(&mut rng, 2, 2, 3))
            }))
        };
        let a = is_nilpotent(&m);
        let b = matrix_cube_is_zero(&m);
        agree += usize::from(a == b);
        if a && i < 100 {
            constructed_nilpotent += 1;
        } else if a {
            random_nilpotent += 1;
        }
    }
    outcome(
        agree == 200 && constructed_nilpotent == 100,
        format!(
            "{agree}/200 agree; constructed recognized nilpotent {constructed_nilpotent}/100; random nilpotent {random_nilpotent}/100"
        ),
    )
}

fn random_invertible(rng: &mut ChaCha8Rng) -> LinearMap {
    let entries = [rat(-2, 1), rat(-1, 1), rat(-1, 2), rat(0, 1), rat(1, 2), rat(1, 1), rat(2, 1)];
    loop {
        let t = LinearMap {
            rows: std::array::from_fn(|_| std::array::from_fn(|_| entries.choose(rng).unwrap().clone())),
        };
        if !t.determinant().is_zero() {
            return t;
        }
    }
}

/// Family members with `deg g <= 2`, alternating with random maps, every
/// fourth of which carries a planted relation.
fn sample_maps(rng: &mut ChaCha8Rng, n: usize) -> Vec<PolyMap> {
    let mut maps = Vec::new();
    while maps.len() < n {
        if maps.len() % 2 == 0 {
            let p = FamilyParams::sample(rng);
            if p.g.degree() <= Degree::Finite(2) {
                maps.push(theorem_3_3_family(&p).unwrap());
            }
        } else {
            let u = random_poly(rng, 2, 1, 3);
            let v = random_poly(rng, 2, 1, 3);
            let h = if maps.len() % 4 == 1 {
                &u.scale(&int(2)) - &v
            } else {
                random_poly(rng, 2, 1, 3)
            };
            maps.push(PolyMap::new(u, v, h));
        }
    }
    maps
}

fn conjugation_invariance() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    let maps = sample_maps(&mut rng, 20);
    let ts: Vec<LinearMap> = (0..10).map(|_| random_invertible(&mut rng)).collect();
    let mut preserved = 0;
    let mut nilpotent_maps = 0;
    let mut dependent_maps = 0;
    for map in &maps {
        let nil = is_nilpotent(&jacobian_matrix(map));
        let indep = linear_dependence(map).is_independent();
        nilpotent_maps += usize::from(nil);
        dependent_maps += usize::from(!indep);
        for t in &ts {
            let c = conjugate_linear(map, t).unwrap();
            let same = is_nilpotent(&jacobian_matrix(&c)) == nil && linear_dependence(&c).is_independent() == indep;
            preserved += usize::from(same);
        }
    }
    let mut transposed_equal = 0;
    let mut sampled = 0;
    while sampled < 20 {
        let p = FamilyParams::sample(&mut rng);
        sampled += 1;
        let (Ok(a), Ok(b)) = (theorem_3_3_family(&p), corollary_3_7_family(&p)) else {
            continue;
        };
        transposed_equal += usize::from(conjugate_by_transposition(&a) == b);
    }
    outcome(
        preserved == 200 && transposed_equal == 20 && nilpotent_maps >= 10 && dependent_maps >= 1,
        format!(
            "{preserved}/200 conjugations preserve nilpotency and dependence ({nilpotent_maps} nilpotent, {dependent_maps} dependent maps); transposition {transposed_equal}/20 exact; {:.1} s",
            start.elapsed().as_secs_f64()
        ),
    )
}

fn parser_round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    let mut round_trips = 0;
    for _ in 0..500 {
        let p = random_poly(&mut rng, 4, 3, 8);
        round_trips += usize::from(parse(&format(&p)).as_ref() == Ok(&p));
    }
    let cases: [RejectionCase; 3] = [
        ("x**2", 1, |e| matches!(e, ParseError::UnknownOperator { .. })),
        ("x^-1", 2, |e| matches!(e, ParseError::BadExponent { .. })),
        ("x + w", 4, |e| matches!(e, ParseError::UnknownIdentifier { .. })),
    ];
    let mut rejected = Vec::new();
    for (text, offset, kind) in cases {
        let ok = parse(text).is_err_and(|e| kind(&e) && e.offset() == Some(offset));
        rejected.push(format!("{text:?} at {offset}: {}", if ok { "ok" } else { "wrong" }));
    }
    let rejections_ok = rejected.iter().all(|s| s.ends_with("ok"));
    outcome(
        round_trips == 500 && rejections_ok,
        format!("{round_trips}/500 round trips; rejections {}", rejected.join(", ")),
    )
}

fn main() -> ExitCode {
    // Keep the oracle helpers honest on the hand instance before the run.
    let hand = parse_map(&MapSource::new("y + x^2", "z - 2*x*(y + x^2)", "(y + x^2)^2")).unwrap();
    assert!(cube_vanishes_at(&hand, &test_points()));
    assert!(brute_force_dependent(&hand).is_none());

    let criteria: [Criterion; 9] = [
        ("family soundness", family_soundness),
        ("hand-checkable instance", hand_instance),
        ("dependence searches", dependence_searches),
        ("constant-component witness", constant_component_witness),
        ("homogeneous-u search", homogeneous_search),
        ("kernel oracle", kernel_oracle),
        ("nilpotency criterion equivalence", criterion_equivalence),
        ("conjugation invariance", conjugation_invariance),
        ("parser round trip", parser_round_trip),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        failed += usize::from(!o.passed);
        println!("[{}] {} {}: {}", if o.passed { "PASS" } else { "FAIL" }, i + 1, name, o.detail);
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
