//! The optimized evaluators (distinct index subsets and permutation pairs)
//! against the literal full-tuple reference evaluators.

use cgb_core::functionals::{
    boundary_el_tensor, boundary_transgression, euler_form, interior_el_tensor, naive,
};
use cgb_core::tensor::{AlgebraicCurvature, SecondFundamentalForm, Signature, TensorError};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_signature(rng: &mut ChaCha8Rng, dim: usize) -> Signature {
    let signs: Vec<i8> = (0..dim)
        .map(|_| if rng.gen_bool(0.25) { -1 } else { 1 })
        .collect();
    Signature::from_signs(signs).unwrap()
}

fn random_l(rng: &mut ChaCha8Rng, dim: usize) -> SecondFundamentalForm {
    let raw: Vec<f64> = (0..dim * dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
    SecondFundamentalForm::from_raw_symmetrize(dim, &raw)
}

fn rel_close(a: f64, b: f64, tol: f64, scale: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + scale.abs().max(a.abs()).max(b.abs()))
}

#[test]
fn euler_form_matches_naive_on_100_inputs() {
    let mut rng = ChaCha8Rng::seed_from_u64(901);
    for case in 0..100u64 {
        let m = 2 + (case as usize % 4); // 2..=5
        let n = if m >= 4 && case % 2 == 0 { 4 } else { 2 };
        let r = AlgebraicCurvature::random(m, 1000 + case).unwrap();
        let signs = random_signature(&mut rng, m);
        let fast = euler_form(&r, &signs, n);
        let slow = naive::euler_form(&r, &signs, n);
        assert!(
            rel_close(fast, slow, 1e-12, 1.0),
            "case {case}: m={m} n={n}: {fast} vs {slow}"
        );
    }
}

#[test]
fn interior_el_tensor_matches_naive_on_100_inputs() {
    let mut rng = ChaCha8Rng::seed_from_u64(902);
    for case in 0..100u64 {
        let m = 2 + (case as usize % 4);
        // keep the slow full-tuple runs tractable: degree 4 only in a few
        // of the dimension-5 cases
        let n = if m == 5 && case % 20 == 3 { 4 } else { 2 };
        let r = AlgebraicCurvature::random(m, 2000 + case).unwrap();
        let signs = random_signature(&mut rng, m);
        let fast = interior_el_tensor(&r, &signs, n);
        let slow = naive::interior_el_tensor(&r, &signs, n);
        for i in 1..=m {
            for j in 1..=m {
                assert!(
                    rel_close(fast.at(i, j), slow.at(i, j), 1e-12, fast.max_abs()),
                    "case {case}: m={m} n={n} ({i},{j}): {} vs {}",
                    fast.at(i, j),
                    slow.at(i, j)
                );
            }
        }
    }
}

#[test]
fn boundary_transgression_matches_naive_on_100_inputs() {
    let mut rng = ChaCha8Rng::seed_from_u64(903);
    for case in 0..100u64 {
        let mt = 1 + (case as usize % 4); // boundary dimension 1..=4, ambient <= 5
        let n = 1 + (case as usize % 4).min(mt); // 1..=min(4, mt+...)
        let r = AlgebraicCurvature::random(mt, 3000 + case).unwrap();
        let l = random_l(&mut rng, mt);
        let signs = random_signature(&mut rng, mt);
        let fast = boundary_transgression(&r, &l, &signs, n, None).unwrap();
        let slow = naive::boundary_transgression(&r, &l, &signs, n, None).unwrap();
        assert!(
            rel_close(fast, slow, 1e-12, 1.0),
            "case {case}: mt={mt} n={n}: {fast} vs {slow}"
        );
        // per-nu values agree as well
        for nu in 0..=(n - 1) / 2 {
            let f = boundary_transgression(&r, &l, &signs, n, Some(nu)).unwrap();
            let s = naive::boundary_transgression(&r, &l, &signs, n, Some(nu)).unwrap();
            assert!(rel_close(f, s, 1e-12, 1.0), "case {case} nu={nu}");
        }
    }
}

#[test]
fn boundary_el_tensor_matches_naive_on_100_inputs() {
    let mut rng = ChaCha8Rng::seed_from_u64(904);
    for case in 0..100u64 {
        let mt = 1 + (case as usize % 4);
        let n = 1 + (case as usize % 3).min(mt);
        let r = AlgebraicCurvature::random(mt, 4000 + case).unwrap();
        let l = random_l(&mut rng, mt);
        let signs = random_signature(&mut rng, mt);
        let fast = boundary_el_tensor(&r, &l, &signs, n, None).unwrap();
        let slow = naive::boundary_el_tensor(&r, &l, &signs, n, None).unwrap();
        for a in 1..=mt {
            for b in 1..=mt {
                assert!(
                    rel_close(fast.at(a, b), slow.at(a, b), 1e-12, fast.max_abs()),
                    "case {case}: mt={mt} n={n} ({a},{b})"
                );
            }
        }
    }
}

#[test]
fn nu_range_rejected_consistently() {
    let r = AlgebraicCurvature::zero(2);
    let l = SecondFundamentalForm::zero(2);
    let s = Signature::riemannian(2);
    for n in [1usize, 2, 3] {
        let bad = n; // 2*n > n-1 always
        assert!(matches!(
            boundary_transgression(&r, &l, &s, n, Some(bad)),
            Err(TensorError::Domain(_))
        ));
        assert!(matches!(
            naive::boundary_transgression(&r, &l, &s, n, Some(bad)),
            Err(TensorError::Domain(_))
        ));
    }
}
