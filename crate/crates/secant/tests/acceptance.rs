//! Acceptance run: one `PASS`/`FAIL` line per criterion, nonzero exit on any failure.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use secant_core::certify::{
    block_specialization_check, certify, degree_gap, irreducibility_certificate, lemma_gap_scan, line_determinant,
    specialize_to_line, CertificateKind, CertifyOptions, CertifyTarget, UnivariatePoly, DEFAULT_PRIME_BUDGET,
};
use secant_core::flattening::{box_product, det_phi, det_vanishes, phi_evaluate, phi_matrix, kronecker_det_check, GenericSkewMatrix};
use secant_core::homotopy::{hypersurface_degree, DegreeReport, HomotopyConfig};
use secant_core::invariants::{allowed_invariant_degrees, young_symmetrize, young_symmetrize_eval, FillingPair};
use secant_core::linalg::{self, gaussian_matrix, hadamard_scale, numeric_rank, CMatrix, RANK_TOL};
use secant_core::poly::{Monomial, SparsePoly};
use secant_core::tensor::{expected_dimension, plucker_coords, sample_ambient_point, sample_rank_one, sample_secant_point, secant_dimension};
use secant_core::{SecantSpec, TensorPoint};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration, what: &str) -> Result<(), String> {
    ensure(elapsed <= limit, || format!("{what} took {:.1} s, limit {} s", elapsed.as_secs_f64(), limit.as_secs()))
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn spec(m: usize, k: usize, n: usize, s: usize) -> SecantSpec {
    SecantSpec::new(m, k, n, s).unwrap()
}

fn single_threaded<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap().install(f)
}

fn dimensions() -> Outcome {
    let start = Instant::now();
    for (sp, cone) in [(spec(2, 2, 5, 5), 59), (spec(2, 1, 6, 5), 62)] {
        let expected = expected_dimension(&sp) + 1;
        for seed in 0..3 {
            let d = secant_dimension(&sp, &mut rng(seed), 1).map_err(|e| e.to_string())?;
            ensure(d == cone, || format!("{sp:?} seed {seed}: cone {d}, expected {cone}"))?;
        }
        ensure(cone < expected && expected == sp.num_coords(), || format!("{sp:?}: expected fill {expected}"))?;
    }
    within(start.elapsed(), Duration::from_secs(30), "dimension checks")?;
    Ok(format!("cones 59 in C^60 and 62 in C^63 over 3 seeds ({:.1} s)", start.elapsed().as_secs_f64()))
}

fn degree_run(sp: SecantSpec, seed: u64, expected: usize) -> Result<(DegreeReport, Duration), String> {
    let start = Instant::now();
    let config = HomotopyConfig {
        seed,
        ..HomotopyConfig::default()
    };
    let r = hypersurface_degree(&sp, &config).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let residual = r.trace_residual.unwrap_or(f64::INFINITY);
    ensure(r.certified && r.degree == expected && residual < 1e-6, || {
        format!("degree {} certified {} residual {residual:e}, expected {expected}", r.degree, r.certified)
    })?;
    ensure(r.loops <= config.loop_budget, || format!("{} loops", r.loops))?;
    Ok((r, elapsed))
}

fn degree_six() -> Outcome {
    let (r, elapsed) = single_threaded(|| degree_run(spec(2, 2, 5, 5), 7, 6))?;
    within(elapsed, Duration::from_secs(15 * 60), "degree 6")?;
    Ok(format!(
        "degree 6 after {} loops, trace residual {:.1e}, {:.1} s on one thread",
        r.loops,
        r.trace_residual.unwrap(),
        elapsed.as_secs_f64()
    ))
}

fn degree_twenty_one() -> Outcome {
    let (r, elapsed) = degree_run(spec(2, 1, 6, 5), 1, 21)?;
    within(elapsed, Duration::from_secs(2 * 3600), "degree 21")?;
    Ok(format!(
        "degree 21 after {} loops, trace residual {:.1e}, {:.1} s",
        r.loops,
        r.trace_residual.unwrap(),
        elapsed.as_secs_f64()
    ))
}

fn invariant_terms() -> Outcome {
    let start = Instant::now();
    let inv = young_symmetrize(&FillingPair::degree_six()).map_err(|e| e.to_string())?;
    let count = |c: i64| inv.poly.terms().filter(|(_, x)| **x == BigInt::from(c)).count();
    let (terms, plus, minus) = (inv.poly.len(), count(1), count(-1));
    ensure((terms, plus, minus) == (10080, 5040, 5040), || format!("{terms} terms, {plus} +1, {minus} -1"))?;
    within(start.elapsed(), Duration::from_secs(600), "full expansion")?;
    Ok(format!("10080 monomials, 5040 at +1 and 5040 at -1 ({:.1} s)", start.elapsed().as_secs_f64()))
}

fn invariant_vanishing() -> Outcome {
    let sp = spec(2, 2, 5, 5);
    let mut r = rng(5);
    let filling = FillingPair::degree_six();
    let secant: Vec<TensorPoint> = (0..100).map(|_| sample_secant_point(&sp, &mut r).unwrap()).collect();
    let generic: Vec<TensorPoint> = (0..100).map(|_| sample_ambient_point(&sp, &mut r)).collect();
    let eval = |pts: &[TensorPoint]| {
        let coords: Vec<&[Complex64]> = pts.iter().map(|p| p.coords.as_slice()).collect();
        young_symmetrize_eval(&filling, &coords).unwrap()
    };
    let on = eval(&secant);
    let off = eval(&generic);
    let vanish_on = on.iter().filter(|e| e.vanishes(1e-6)).count();
    let nonzero_off = off.iter().filter(|e| !e.vanishes(1e-6)).count();
    ensure(vanish_on == 100 && nonzero_off == 100, || {
        format!("vanishes on {vanish_on}/100 secant points, nonzero on {nonzero_off}/100 generic points")
    })?;
    let worst = on.iter().map(|e| e.relative()).fold(0.0, f64::max);
    let least = off.iter().map(|e| e.relative()).fold(f64::INFINITY, f64::min);
    Ok(format!("100/100 vanish on sigma_5 (max {worst:.1e}), 100/100 nonzero generically (min {least:.1e})"))
}

fn flattening_ranks() -> Outcome {
    let phi = phi_matrix(1);
    let sp = phi.tensor_spec();
    let mut r = rng(6);
    let rank = |t: &TensorPoint| numeric_rank(&phi_evaluate(&phi, t).unwrap(), RANK_TOL);
    for _ in 0..20 {
        let t = sample_rank_one(&sp, &mut r).unwrap();
        ensure(rank(&t) == 4, || format!("rank-one tensor gave rank {}", rank(&t)))?;
    }
    for s in 2..=5 {
        for _ in 0..20 {
            let t = sample_secant_point(&sp.with_s(s), &mut r).unwrap();
            let k = rank(&t);
            ensure(k <= 4 * s, || format!("rank-{s} tensor gave rank {k}"))?;
            if s == 5 {
                let d = det_phi(&t).unwrap();
                ensure(det_vanishes(&d), || format!("det phi {:.2e} on a rank-5 tensor", d.value.norm()))?;
            }
        }
    }
    for _ in 0..20 {
        let t = sample_ambient_point(&sp, &mut r);
        ensure(rank(&t) == 21, || format!("generic tensor gave rank {}", rank(&t)))?;
        ensure(!det_vanishes(&det_phi(&t).unwrap()), || "det phi vanished on a generic tensor".into())?;
    }
    ensure(rank(&TensorPoint::zero(sp)) == 0, || "zero tensor has nonzero rank".into())?;
    Ok("rank 4 on rank one, at most 4r for r = 2..5, 21 generically; det phi vanishes exactly on the rank-5 samples".into())
}

fn skew(r: &mut ChaCha8Rng, n: usize) -> CMatrix {
    let a = gaussian_matrix(r, n, n);
    &a - a.transpose()
}

fn kronecker_identity() -> Outcome {
    let mut r = rng(7);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let (m, n) = (r.random_range(1..=5), r.random_range(1..=5));
        let p = gaussian_matrix(&mut r, m, m);
        let q = gaussian_matrix(&mut r, n, n);
        let (lhs, rhs) = kronecker_det_check(&p, &q).map_err(|e| e.to_string())?;
        let rel = (lhs - rhs).norm() / lhs.norm().max(rhs.norm());
        worst = worst.max(rel);
        ensure(rel <= 1e-10, || format!("m={m} n={n}: relative {rel:e}"))?;
    }
    for _ in 0..100 {
        let n = r.random_range(1..=5);
        let p = skew(&mut r, 3);
        let q = gaussian_matrix(&mut r, n, n);
        let (lhs, rhs) = kronecker_det_check(&p, &q).map_err(|e| e.to_string())?;
        let scale = hadamard_scale(&linalg::kronecker(&p, &q));
        ensure(lhs.norm() <= 1e-10 * scale && rhs.norm() <= 1e-10 * scale, || {
            format!("3x3 skew P, n={n}: det {:.2e} against scale {scale:.2e}", lhs.norm())
        })?;
    }
    Ok(format!("100 pairs agree to {worst:.1e}; det(P⊗Q) vanishes for 3x3 skew P"))
}

fn structure_table() -> Outcome {
    let start = Instant::now();
    let opts = CertifyOptions {
        degree_gap_shortcut: false,
        ..CertifyOptions::default()
    };
    let pp = |base_degree, exponent| CertificateKind::PerfectPower { base_degree, exponent };
    let expected = [
        CertificateKind::Zero,
        CertificateKind::Zero,
        pp(3, 3),
        pp(6, 2),
        CertificateKind::Irreducible,
        CertificateKind::Irreducible,
        CertificateKind::Irreducible,
        CertificateKind::Irreducible,
    ];
    let mut kinds = Vec::new();
    for (i, want) in expected.iter().enumerate() {
        let c = certify(CertifyTarget::Box { s: i + 1 }, 1, &opts).map_err(|e| e.to_string())?;
        ensure(c.kind == *want, || format!("s={}: {} instead of {want}", i + 1, c.kind))?;
        kinds.push(c.kind.to_string());
    }
    let c = certify(CertifyTarget::Phi { ell: 0 }, 1, &opts).map_err(|e| e.to_string())?;
    ensure(c.kind == pp(3, 3), || format!("phi l=0: {}", c.kind))?;
    within(start.elapsed(), Duration::from_secs(20 * 60), "structure table")?;
    Ok(format!("s=1..8: {}; phi l=0: {} ({:.1} s)", kinds.join(", "), c.kind, start.elapsed().as_secs_f64()))
}

fn block_identity() -> Outcome {
    let mut worst = 0.0f64;
    for s in 4..=10 {
        for seed in 0..5 {
            let res = block_specialization_check(s, &mut rng(seed)).map_err(|e| e.to_string())?;
            ensure(res < 1e-9, || format!("s={s} seed {seed}: residual {res:e}"))?;
            worst = worst.max(res);
        }
    }
    Ok(format!("s=4..10, 5 seeds each, worst residual {worst:.1e}"))
}

fn degree_arithmetic() -> Outcome {
    let seven: Vec<usize> = allowed_invariant_degrees(7, 21).into_iter().collect();
    ensure(seven == [0, 21], || format!("s=7 degrees {seven:?}"))?;
    ensure(degree_gap(7).forced(), || "s=7 not forced".into())?;
    ensure(allowed_invariant_degrees(15, 45).contains(&15), || "s=15 lacks degree 15".into())?;
    let fifteen = degree_gap(15);
    ensure(!fifteen.forced() && fifteen.intermediate.contains(&15), || format!("s=15: {:?}", fifteen.intermediate))?;
    let scan = lemma_gap_scan(15);
    ensure(scan[6].forced() && !scan[14].forced(), || "scan disagrees with single entries".into())?;
    Ok("s=7 allows {0, 21} and is forced; s=15 allows 15 and is not forced".into())
}

fn random_irreducible_quadratic(r: &mut ChaCha8Rng) -> UnivariatePoly {
    loop {
        let (b, c) = (r.random_range(-20i64..=20), r.random_range(-20i64..=20));
        let disc = b * b - 4 * c;
        if disc < 0 || (0..=disc).all(|x| x * x != disc) {
            return UnivariatePoly::from_i64s(&[c, b, 1]);
        }
    }
}

fn properties() -> Outcome {
    let mut r = rng(11);
    let close = |a: &[Complex64], b: &[Complex64], tol: f64| {
        let scale = linalg::norm(b).max(1.0);
        a.iter().zip(b).all(|(x, y)| (x - y).norm() <= tol * scale)
    };

    // Plücker coordinates alternate under row swaps
    for k in 1..4 {
        let e = gaussian_matrix(&mut r, k + 1, k + 4);
        let mut swapped = e.clone();
        swapped.swap_rows(0, k);
        let neg: Vec<Complex64> = plucker_coords(&e).unwrap().iter().map(|z| -z).collect();
        ensure(close(&plucker_coords(&swapped).unwrap(), &neg, 1e-12), || "Plücker alternation".into())?;
    }

    // coordinates are recovered from stored summands
    for s in 1..5 {
        let t = sample_secant_point(&spec(2, 1, 5, s), &mut r).unwrap();
        ensure(close(&t.reconstruct().unwrap(), &t.coords, 1e-12), || "reconstruction".into())?;
    }

    // φ is linear in T and its rank is subadditive
    let phi = phi_matrix(1);
    let sp = phi.tensor_spec();
    for _ in 0..5 {
        let (a, b) = (sample_secant_point(&sp.with_s(2), &mut r).unwrap(), sample_rank_one(&sp, &mut r).unwrap());
        let c = Complex64::new(0.3, -1.2);
        let combo = TensorPoint::from_coords(sp, a.coords.iter().zip(&b.coords).map(|(x, y)| c * x + y).collect()).unwrap();
        let lhs = phi_evaluate(&phi, &combo).unwrap();
        let rhs = phi_evaluate(&phi, &a).unwrap() * c + phi_evaluate(&phi, &b).unwrap();
        ensure((&lhs - &rhs).norm() <= 1e-12 * rhs.norm(), || "flattening linearity".into())?;
        let rank = |m: &CMatrix| numeric_rank(m, RANK_TOL);
        let sum = a.add(&b).unwrap();
        ensure(
            rank(&phi_evaluate(&phi, &sum).unwrap()) <= rank(&phi_evaluate(&phi, &a).unwrap()) + rank(&phi_evaluate(&phi, &b).unwrap()),
            || "flattening subadditivity".into(),
        )?;
    }

    // taking a coefficient is linear
    let poly = |r: &mut ChaCha8Rng| {
        SparsePoly::from_terms(
            6,
            (0..8)
                .map(|_| {
                    let vars: Vec<usize> = (0..r.random_range(0..4)).map(|_| r.random_range(0..6)).collect();
                    (Monomial::from_vars(&vars).unwrap(), BigInt::from(r.random_range(-5i64..5)))
                })
                .collect::<Vec<_>>(),
        )
    };
    for _ in 0..20 {
        let (a, b) = (poly(&mut r), poly(&mut r));
        let mono = Monomial::from_vars(&[r.random_range(0..3)]).unwrap();
        let k = BigInt::from(r.random_range(-4i64..4));
        let group = |v: usize| v < 3;
        let lhs = a.scale(&k).add(&b).coefficient_in(&mono, group);
        let rhs = a.coefficient_in(&mono, group).scale(&k).add(&b.coefficient_in(&mono, group));
        ensure(lhs == rhs, || "contraction linearity".into())?;
    }

    // witness points lie on the line and solve the system, and are distinct
    let w = hypersurface_degree(&spec(2, 1, 2, 2), &HomotopyConfig::default()).map_err(|e| e.to_string())?;
    let (distance, residual) = w.witness.diagnostics(&w.system);
    ensure(w.certified && distance < 1e-8 && residual < 1e-10, || format!("witness residuals {distance:e} {residual:e}"))?;
    let pts = &w.witness.points;
    for i in 0..pts.len() {
        for j in 0..i {
            let d: f64 = pts[i].image.iter().zip(&pts[j].image).map(|(x, y)| (x - y).norm_sqr()).sum();
            ensure(d.sqrt() > w.witness.dedup_tol, || "duplicate witness points".into())?;
        }
    }

    // interpolated specializations match direct determinants
    for s in 3..=6 {
        let pattern = box_product(&GenericSkewMatrix::generic(3), &GenericSkewMatrix::generic(s));
        let f = specialize_to_line(&pattern, &mut r).map_err(|e| e.to_string())?;
        ensure(f.poly.degree() == Some(3 * s), || format!("s={s}: degree {:?}", f.poly.degree()))?;
        for _ in 0..3 {
            let t = BigInt::from(r.random_range(1000i64..100_000));
            ensure(f.poly.eval(&t) == line_determinant(&pattern, &f.line, &t), || format!("interpolation s={s}"))?;
        }
    }

    // products of two irreducible quadratics are never certified
    for _ in 0..20 {
        let f = random_irreducible_quadratic(&mut r).mul(&random_irreducible_quadratic(&mut r));
        let c = irreducibility_certificate(&f, DEFAULT_PRIME_BUDGET);
        ensure(c.kind != CertificateKind::Irreducible, || format!("{f} certified irreducible"))?;
    }
    Ok("Plücker alternation, reconstruction, flattening linearity and subadditivity, contraction linearity, \
        witness residuals, interpolation agreement, certificate negatives"
        .into())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("dimension and defectivity", dimensions),
        ("degree 6", degree_six),
        ("degree 21", degree_twenty_one),
        ("invariant structure", invariant_terms),
        ("invariant vanishing", invariant_vanishing),
        ("flattening ranks", flattening_ranks),
        ("Kronecker identity", kronecker_identity),
        ("structure table", structure_table),
        ("block identity", block_identity),
        ("degree arithmetic", degree_arithmetic),
        ("property suites", properties),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name}: {detail}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
