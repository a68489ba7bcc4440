//! Acceptance suite: one test per criterion, each printing a PASS line
//! with its runtime. Run with `cargo test --test acceptance -- --nocapture`
//! to see the lines; every tolerance and time budget is pinned here.

#![allow(clippy::needless_range_loop)]

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{pow, One, Signed, Zero};

use delone_forge::bounds::{
    bound_table, dt_lower, growth_constants, mv_lower_table, mv_upper,
};
use delone_forge::delone::{certify_delone, enumerate_in_ellipsoid};
use delone_forge::exact::{
    ceil_center_minus_sqrt, floor_center_plus_sqrt, rat, Int, Rat,
};
use delone_forge::hadamard::{hadamard_simplex_instance, is_hadamard, sylvester};
use delone_forge::json;
use delone_forge::lattice::{QuadraticForm, VertexSet};
use delone_forge::matrix::IntMat;
use delone_forge::product::{product_pipeline, ProductFactor, ProductOptions};

fn pass(criterion: &str, start: Instant, budget: Duration) {
    let elapsed = start.elapsed();
    assert!(
        elapsed <= budget,
        "{criterion} exceeded its budget: {elapsed:.2?} > {budget:.2?}"
    );
    println!("ACCEPTANCE {criterion}: PASS ({elapsed:.2?} within {budget:.2?})");
}

#[test]
fn criterion_1_sylvester_validity() {
    let start = Instant::now();
    for n in 0..=8u32 {
        let h = sylvester(n);
        assert_eq!(h.order(), 1usize << n);
        assert!(is_hadamard(&h), "sylvester({n}) failed the Hadamard check");
    }
    pass("1 sylvester validity n=0..8", start, Duration::from_secs(30));
}

#[test]
fn criterion_2_hadamard_simplex_volumes() {
    let start = Instant::now();
    let expected = [(2u32, 1i64), (3, 2), (4, 64), (5, 8388608)];
    for (n, value) in expected {
        let d = (1usize << n) - 1;
        let instance = hadamard_simplex_instance(n).unwrap();
        // independent recomputation of (d+1)^((d+3)/2) / 4^d
        let numer = pow(BigInt::from(d + 1), (d + 3) / 2);
        let denom = pow(BigInt::from(4), d);
        assert!((&numer % &denom).is_zero(), "formula not integral at d={d}");
        let formula = numer / denom;
        assert_eq!(formula, BigInt::from(value), "formula value at d={d}");
        assert_eq!(instance.expected_relvol, formula, "packaged value at d={d}");
        assert_eq!(
            instance.simplex.relative_volume(),
            &formula,
            "constructed volume at d={d}"
        );
    }
    pass(
        "2 hadamard volumes d=3,7,15,31",
        start,
        Duration::from_secs(10),
    );
}

#[test]
fn criterion_3_hadamard_delone_certificates() {
    let small = Instant::now();
    for n in [2u32, 3] {
        let instance = hadamard_simplex_instance(n).unwrap();
        let cert = instance.certify().unwrap();
        assert!(cert.is_delone(), "d={} not certified", instance.dim());
        assert_eq!(cert.on_sphere.len(), instance.dim() + 1);
    }
    pass(
        "3a hadamard certificates d=3,7",
        small,
        Duration::from_secs(10),
    );

    let large = Instant::now();
    let instance = hadamard_simplex_instance(4).unwrap();
    let cert = instance.certify().unwrap();
    assert!(cert.is_delone());
    assert_eq!(cert.on_sphere.len(), 16);
    pass(
        "3b hadamard certificate d=15",
        large,
        Duration::from_secs(120),
    );
}

#[test]
fn criterion_4_product_pipeline() {
    let start = Instant::now();
    let options = ProductOptions::default();

    // (a) d=7 instance x unit interval
    let h3 = ProductFactor::from_instance(&hadamard_simplex_instance(3).unwrap());
    let report = product_pipeline(&h3, &ProductFactor::unit_interval(), &options).unwrap();
    assert_eq!(report.count(), 8);
    assert_eq!(
        Int::from(report.count()),
        binomial(Int::from(8), Int::from(1))
    );
    assert_eq!(report.relvol_each, Int::from(2));
    assert!(report.exhaustive);
    assert_eq!(report.certifications.len(), 8);
    assert!(report
        .certifications
        .iter()
        .all(|c| c.certificate.is_delone()));

    // (b) d=3 x d=3, exhaustive
    let h2 = ProductFactor::from_instance(&hadamard_simplex_instance(2).unwrap());
    let report = product_pipeline(&h2, &h2, &options).unwrap();
    assert_eq!(report.count(), 20);
    assert_eq!(
        Int::from(report.count()),
        binomial(Int::from(6), Int::from(3))
    );
    assert_eq!(report.relvol_each, Int::from(1));
    assert!(report.exhaustive);
    assert_eq!(report.certifications.len(), 20);
    assert!(report
        .certifications
        .iter()
        .all(|c| c.certificate.is_delone()));

    // (c) d=7 x d=7: exhaustive volume check inside the pipeline,
    // certification on the deterministic sample with both extreme paths
    let report = product_pipeline(&h3, &h3, &options).unwrap();
    assert_eq!(report.count(), 3432);
    assert_eq!(
        Int::from(report.count()),
        binomial(Int::from(14), Int::from(7))
    );
    assert_eq!(report.relvol_each, Int::from(4));
    assert!(!report.exhaustive);
    assert!(report.certifications.len() >= 32);
    assert!(report
        .certifications
        .iter()
        .all(|c| c.certificate.is_delone()));
    let indices: Vec<usize> = report.certifications.iter().map(|c| c.path_index).collect();
    assert_eq!(indices.first(), Some(&0), "first extreme path sampled");
    assert_eq!(indices.last(), Some(&3431), "last extreme path sampled");
    assert_eq!(report.certifications[0].path.word(), "RRRRRRRUUUUUUU");
    assert_eq!(
        report.certifications.last().unwrap().path.word(),
        "UUUUUUURRRRRRR"
    );

    pass(
        "4 product pipeline 7x1, 3x3, 7x7",
        start,
        Duration::from_secs(600),
    );
}

/// SplitMix64: a tiny deterministic generator for the randomized oracle.
struct SplitMix64(u64);

impl SplitMix64 {
    fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    fn range(&mut self, lo: i64, hi: i64) -> i64 {
        lo + (self.next() % (hi - lo + 1) as u64) as i64
    }
}

/// Independent oracle: a bounding-box scan driven by the inverse-form
/// diagonal, with every point checked by exact evaluation.
fn brute_force_ball(q: &QuadraticForm, center: &[Rat], radius_sq: &Rat) -> Vec<Vec<Int>> {
    let d = q.dim();
    let mut ranges = Vec::with_capacity(d);
    for i in 0..d {
        let mut unit = vec![Rat::zero(); d];
        unit[i] = Rat::one();
        let col = q.gram().solve(&unit).unwrap();
        let t = radius_sq * &col[i];
        ranges.push((
            ceil_center_minus_sqrt(&center[i], &t),
            floor_center_plus_sqrt(&center[i], &t),
        ));
    }
    let mut out = Vec::new();
    let mut cursor: Vec<Int> = ranges.iter().map(|(lo, _)| lo.clone()).collect();
    'scan: loop {
        if &q.distance_sq(&cursor, center) <= radius_sq {
            out.push(cursor.clone());
        }
        for i in (0..d).rev() {
            if cursor[i] < ranges[i].1 {
                cursor[i] += 1;
                for (c, r) in cursor.iter_mut().zip(ranges.iter()).skip(i + 1) {
                    *c = r.0.clone();
                }
                continue 'scan;
            }
        }
        break;
    }
    out.sort_unstable();
    out
}

#[test]
fn criterion_5_enumeration_oracle() {
    let start = Instant::now();
    let mut rng = SplitMix64(0x5eed_cafe_f00d_0001);
    let mut checked = 0usize;
    while checked < 100 {
        let dim = 2 + (checked % 3); // cycles 2, 3, 4
        // random integer basis, regenerated until clearly nonsingular
        let basis = loop {
            let entries: Vec<Int> = (0..dim * dim)
                .map(|_| Int::from(rng.range(-4, 4)))
                .collect();
            let m = IntMat::new(dim, dim, entries);
            let det = m.det().unwrap();
            if det.abs() >= Int::from(2) {
                break m;
            }
        };
        let scale = rat(1, rng.range(1, 4));
        let mut gram = basis.mul(&basis.transpose()).to_rat();
        for i in 0..dim {
            for j in 0..dim {
                let v = gram.at(i, j) * &scale;
                gram.set(i, j, v);
            }
        }
        let q = QuadraticForm::new(gram).unwrap();
        let center: Vec<Rat> = (0..dim)
            .map(|_| rat(rng.range(-20, 20), rng.range(1, 5)))
            .collect();
        let mut radius_sq = rat(rng.range(1, 30), rng.range(1, 4));
        // keep the brute-force box affordable
        loop {
            let mut cells = Rat::one();
            for i in 0..dim {
                let mut unit = vec![Rat::zero(); dim];
                unit[i] = Rat::one();
                let col = q.gram().solve(&unit).unwrap();
                let t = &radius_sq * &col[i];
                let width: Int = floor_center_plus_sqrt(&center[i], &t)
                    - ceil_center_minus_sqrt(&center[i], &t)
                    + 1;
                cells *= Rat::from(width.max(Int::zero()));
            }
            if cells <= rat(2_000_000, 1) {
                break;
            }
            radius_sq /= rat(2, 1);
        }
        let fast = enumerate_in_ellipsoid(&q, &center, &radius_sq).unwrap();
        let slow = brute_force_ball(&q, &center, &radius_sq);
        assert_eq!(fast, slow, "case {checked}: dim {dim}");
        checked += 1;
    }
    pass(
        "5 enumeration oracle, 100 randomized forms",
        start,
        Duration::from_secs(120),
    );
}

#[test]
fn criterion_6_bound_table() {
    let start = Instant::now();
    let rows = bound_table(32);
    assert_eq!(rows.len(), 32);
    for row in &rows {
        assert!(
            row.mv_lower <= row.mv_upper,
            "lb > ub at d = {}",
            row.d
        );
    }
    assert_eq!(mv_upper(1), Int::from(1));
    assert_eq!(mv_upper(5), Int::from(15));
    assert_eq!(mv_upper(7), Int::from(187));
    let lower = mv_lower_table(6);
    assert_eq!(lower[4].value, Int::from(2));
    assert_eq!(lower[5].value, Int::from(3));
    let (mv5_growth, leech_growth) = growth_constants();
    assert_eq!(mv5_growth, "1.1487");
    assert_eq!(leech_growth, "1.5123");
    assert_eq!(dt_lower(5), Int::from(8));
    assert_eq!(dt_lower(10), Int::from(181));
    pass("6 bound table dmax=32", start, Duration::from_secs(5));
}

/// Minimal independent rational: parses "p/q" and does exact arithmetic
/// through num_rational directly, sharing no code with the library's
/// evaluation path.
fn parse_fraction(s: &str) -> BigRational {
    match s.split_once('/') {
        Some((p, q)) => BigRational::new(p.parse().unwrap(), q.parse().unwrap()),
        None => BigRational::from_integer(s.parse().unwrap()),
    }
}

/// Independent re-checker: reads only the certificate JSON and the form
/// JSON, re-evaluates Q[v - c] for every listed point, and verifies each
/// stated relation exactly.
fn recheck_certificate_json(cert_text: &str, form_text: &str) {
    let cert: serde_json::Value = serde_json::from_str(cert_text).unwrap();
    let form: serde_json::Value = serde_json::from_str(form_text).unwrap();
    let dim = form["dim"].as_u64().unwrap() as usize;
    let gram: Vec<Vec<BigRational>> = form["gram"]
        .as_array()
        .unwrap()
        .iter()
        .map(|row| {
            row.as_array()
                .unwrap()
                .iter()
                .map(|v| parse_fraction(v.as_str().unwrap()))
                .collect()
        })
        .collect();
    assert_eq!(gram.len(), dim);
    // symmetry of the published form
    for i in 0..dim {
        assert_eq!(gram[i].len(), dim);
        for j in 0..dim {
            assert_eq!(gram[i][j], gram[j][i], "asymmetric gram at ({i},{j})");
        }
    }
    let center: Vec<BigRational> = cert["center"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| parse_fraction(v.as_str().unwrap()))
        .collect();
    assert_eq!(center.len(), dim);
    let radius_sq = parse_fraction(cert["radius_sq"].as_str().unwrap());
    assert!(radius_sq.is_positive());

    let eval = |point: &serde_json::Value| -> BigRational {
        let p: Vec<BigRational> = point
            .as_array()
            .unwrap()
            .iter()
            .map(|v| parse_fraction(v.as_str().unwrap()))
            .collect();
        assert_eq!(p.len(), dim);
        let diff: Vec<BigRational> = p.iter().zip(&center).map(|(a, b)| a - b).collect();
        let mut acc = BigRational::zero();
        for i in 0..dim {
            for j in 0..dim {
                acc += &diff[i] * &gram[i][j] * &diff[j];
            }
        }
        acc
    };

    let verdict = cert["verdict"].as_str().unwrap();
    let on_sphere = cert["on_sphere"].as_array().unwrap();
    assert!(!on_sphere.is_empty());
    for point in on_sphere {
        assert_eq!(eval(point), radius_sq, "on-sphere relation violated");
    }
    match verdict {
        "delone" => assert!(cert["witness"].is_null()),
        "not_delone" => {
            let witness = &cert["witness"];
            assert!(!witness.is_null());
            assert!(
                eval(witness) <= radius_sq,
                "witness is outside the closed ball"
            );
        }
        other => panic!("unexpected verdict {other}"),
    }
}

#[test]
fn criterion_7_certificate_self_containedness() {
    let start = Instant::now();
    let mut emitted: Vec<(String, String)> = Vec::new();

    // Hadamard certificates at d = 3, 7, 15
    for n in [2u32, 3, 4] {
        let instance = hadamard_simplex_instance(n).unwrap();
        let cert = instance.certify().unwrap();
        emitted.push((
            json::to_canonical_string(&json::certificate_to_json(&cert)),
            json::to_canonical_string(&json::form_to_json(&instance.form)),
        ));
    }

    // a refutation certificate
    let identity = QuadraticForm::identity(2);
    let triangle = VertexSet::new(vec![
        vec![Int::zero(), Int::zero()],
        vec![Int::one(), Int::zero()],
        vec![Int::zero(), Int::one()],
    ])
    .unwrap();
    let cert = certify_delone(&triangle, &identity).unwrap();
    assert!(!cert.is_delone());
    emitted.push((
        json::to_canonical_string(&json::certificate_to_json(&cert)),
        json::to_canonical_string(&json::form_to_json(&identity)),
    ));

    // product pipeline certificates: the polytope cert under the base
    // form and every staircase cert under the perturbed form
    let h2 = ProductFactor::from_instance(&hadamard_simplex_instance(2).unwrap());
    let report = product_pipeline(
        &h2,
        &ProductFactor::unit_interval(),
        &ProductOptions::default(),
    )
    .unwrap();
    let base_form_text = json::to_canonical_string(&json::form_to_json(&report.perturbed.base));
    let perturbed_form_text =
        json::to_canonical_string(&json::form_to_json(&report.perturbed.form));
    emitted.push((
        json::to_canonical_string(&json::certificate_to_json(&report.product_certificate)),
        base_form_text,
    ));
    for c in &report.certifications {
        emitted.push((
            json::to_canonical_string(&json::certificate_to_json(&c.certificate)),
            perturbed_form_text.clone(),
        ));
    }

    for (cert_text, form_text) in &emitted {
        // byte-exact round trip of the canonical encoding
        let reparsed: json::CertificateJson = json::from_str(cert_text).unwrap();
        assert_eq!(&json::to_canonical_string(&reparsed), cert_text);
        // independent numeric revalidation
        recheck_certificate_json(cert_text, form_text);
    }
    assert!(emitted.len() >= 9);
    pass(
        "7 certificate self-containedness",
        start,
        Duration::from_secs(180),
    );
}

#[test]
fn criterion_8_asymptotics_as_properties() {
    let start = Instant::now();
    let table = mv_lower_table(32);
    // super-multiplicativity of the lower bound
    for a in 1..=31usize {
        for b in 1..=(32 - a) {
            assert!(
                table[a + b - 1].value >= &table[a - 1].value * &table[b - 1].value,
                "supermultiplicativity fails at ({a},{b})"
            );
        }
    }
    // monotone lower bound and lb <= ub on every row
    let rows = bound_table(32);
    for d in 2..=32usize {
        assert!(rows[d - 1].mv_lower >= rows[d - 2].mv_lower);
    }
    // ratio columns reported in order (exact comparison in micro-units)
    let micro = |s: &str| -> i64 { s.replace('.', "").parse().unwrap() };
    for row in &rows[1..] {
        let lo = micro(row.lower_ratio.as_ref().unwrap());
        let hi = micro(row.upper_ratio.as_ref().unwrap());
        assert!(lo <= hi, "ratio columns out of order at d = {}", row.d);
    }
    pass(
        "8 asymptotics covered by properties",
        start,
        Duration::from_secs(60),
    );
}
