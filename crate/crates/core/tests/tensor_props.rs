use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use secant_core::linalg::{self, CMatrix};
use secant_core::tensor::{
    expected_dimension, parametrization_jacobian, plucker_coords, sample_secant_point, secant_dimension,
};
use secant_core::SecantSpec;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[test]
fn defective_dimensions_of_examples() {
    let cases = [((2, 2, 5, 5), 59), ((2, 1, 6, 5), 62)];
    for ((m, k, n, s), cone) in cases {
        let spec = SecantSpec::new(m, k, n, s).unwrap();
        assert_eq!(secant_dimension(&spec, &mut rng(1), 2).unwrap(), cone);
        assert_eq!(spec.num_coords(), cone + 1);
        assert!(cone < expected_dimension(&spec) + 1);
    }
}

#[test]
fn jacobian_ranks_of_examples() {
    let spec = SecantSpec::new(2, 2, 5, 5).unwrap();
    let p = sample_secant_point(&spec, &mut rng(3)).unwrap();
    let jac = parametrization_jacobian(&p).unwrap();
    assert_eq!(jac.shape(), (60, 105));
    assert_eq!(linalg::numeric_rank(&jac, linalg::RANK_TOL), 59);
}

#[test]
fn secant_dimension_monotone_and_bounded() {
    let base = SecantSpec::new(2, 1, 4, 1).unwrap();
    let mut prev = 0;
    for s in 1..=6 {
        let spec = base.with_s(s);
        let d = secant_dimension(&spec, &mut rng(s as u64), 2).unwrap();
        assert!(d >= prev, "s={s}: {d} < {prev}");
        assert!(d <= (expected_dimension(&spec) + 1).min(spec.num_coords()));
        prev = d;
    }
}

#[test]
fn swapping_columns_negates_minor() {
    let mut r = rng(17);
    let e = linalg::gaussian_matrix(&mut r, 3, 6);
    let base = plucker_coords(&e).unwrap();
    // swap columns 1 and 4: Δ_{0,1,4} flips sign; Δ_{0,2,3} untouched.
    let mut swapped = e.clone();
    swapped.swap_columns(1, 4);
    let after = plucker_coords(&swapped).unwrap();
    let spec = SecantSpec::new(0, 2, 5, 1).unwrap();
    let j = spec.coord_index(0, &[0, 1, 4]);
    assert!((after[j] + base[j]).norm() < 1e-12);
    let untouched = spec.coord_index(0, &[0, 2, 3]);
    assert!((after[untouched] - base[untouched]).norm() < 1e-12);
}

fn seeds() -> impl Strategy<Value = u64> {
    any::<u64>()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn plucker_equivariant_under_row_operations(seed in seeds(), k in 0usize..3, extra in 1usize..4) {
        let mut r = rng(seed);
        let rows = k + 1;
        let cols = rows + extra;
        let e = linalg::gaussian_matrix(&mut r, rows, cols);
        let g = linalg::gaussian_matrix(&mut r, rows, rows);
        let det_g = linalg::determinant(&g);
        let lhs = plucker_coords(&(&g * &e)).unwrap();
        let rhs = plucker_coords(&e).unwrap();
        let scale = rhs.iter().map(|z| z.norm()).fold(0.0, f64::max) * det_g.norm().max(1.0);
        for (a, b) in lhs.iter().zip(&rhs) {
            prop_assert!((a - det_g * b).norm() <= 1e-10 * scale);
        }
    }

    #[test]
    fn reconstruction_reproduces_coords(seed in seeds(), s in 1usize..5) {
        let spec = SecantSpec::new(2, 1, 5, s).unwrap();
        let p = sample_secant_point(&spec, &mut rng(seed)).unwrap();
        let again = p.reconstruct().unwrap();
        let scale = linalg::norm(&p.coords);
        let diff: Vec<Complex64> = again.iter().zip(&p.coords).map(|(a, b)| a - b).collect();
        prop_assert!(linalg::norm(&diff) <= 1e-12 * scale);
    }

    #[test]
    fn transform_matches_transformed_params(seed in seeds()) {
        let spec = SecantSpec::new(1, 1, 3, 2).unwrap();
        let mut r = rng(seed);
        let p = sample_secant_point(&spec, &mut r).unwrap();
        let g: CMatrix = linalg::gaussian_matrix(&mut r, 2, 2);
        let h: CMatrix = linalg::gaussian_matrix(&mut r, 4, 4);
        let moved = p.transform(&g, &h).unwrap();
        let rebuilt = moved.reconstruct().unwrap();
        let scale = linalg::norm(&moved.coords);
        let diff: Vec<Complex64> = rebuilt.iter().zip(&moved.coords).map(|(a, b)| a - b).collect();
        prop_assert!(linalg::norm(&diff) <= 1e-10 * scale);
    }
}
