//! Acceptance suite: every shipped guarantee runs here at its stated
//! tolerance, one pass/fail line per check. Run with
//! `cargo test -p cgb-cli --test acceptance -- --nocapture`.

use cgb_cli::spec::ManifoldSpec;
use cgb_core::expr::{parse_expression, Expr};
use cgb_core::functionals::{
    boundary_el_tensor, boundary_transgression, euler_form, interior_el_tensor, naive,
};
use cgb_core::invariants::{
    exchange_check, in_span, invariant_subspace, is_invariant, q_basis_count, q_polynomial, rank_of,
};
use cgb_core::linalg::pseudo_orthogonal;
use cgb_core::quadrature::QuadratureRule;
use cgb_core::tensor::{AlgebraicCurvature, SecondFundamentalForm, Signature};
use cgb_core::verify::{
    gauss_bonnet_boundary, gauss_bonnet_closed, identity_check, restriction_product_check,
    variational_check_boundary, variational_check_interior, VerificationReport,
};
use cgb_core::MetricChart;
use std::path::PathBuf;
use std::time::Instant;

fn spec_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../specs")
        .join(name)
}

fn load_chart(name: &str) -> (MetricChart, ManifoldSpec) {
    let spec = ManifoldSpec::load(&spec_path(name)).expect("catalog spec must load");
    let chart = spec.to_chart().expect("catalog spec must build");
    (chart, spec)
}

fn assert_pass(rep: &VerificationReport) {
    println!("{}", rep.line());
    assert!(rep.pass, "{}", rep.line());
}

/// Every Gauss-Bonnet value must be an integer within its tolerance.
fn assert_integer(rep: &VerificationReport) {
    let nearest = rep.value.round();
    assert!(
        (rep.value - nearest).abs() <= rep.tol.max(1e-12),
        "{}: not an integer within tolerance",
        rep.name
    );
}

fn h_entries(coords: &[&str], dim: usize, entries: &[(usize, usize, &str)]) -> Vec<Expr> {
    let mut v = vec![Expr::constant(0.0); dim * (dim + 1) / 2];
    for (i, j, src) in entries {
        let idx = (i - 1) * dim - (i - 1) * i / 2 + (j - 1);
        v[idx] = parse_expression(src, coords).unwrap();
    }
    v
}

#[test]
fn gauss_bonnet_closed_surfaces() {
    let start = Instant::now();
    let (s2, spec) = load_chart("sphere2.json");
    let rep = gauss_bonnet_closed(
        &s2,
        &QuadratureRule::new(spec.quadrature_order.unwrap()),
        None,
        2.0,
        1e-6,
    )
    .unwrap();
    assert_pass(&rep);
    assert_integer(&rep);
    assert!(
        start.elapsed().as_secs_f64() < 1.0,
        "2-sphere budget exceeded"
    );

    let (t2, spec) = load_chart("torus2.json");
    let rep = gauss_bonnet_closed(
        &t2,
        &QuadratureRule::new(spec.quadrature_order.unwrap()),
        None,
        0.0,
        1e-12,
    )
    .unwrap();
    assert_pass(&rep);
    assert_integer(&rep);

    let start = Instant::now();
    let (s4, spec) = load_chart("sphere4.json");
    assert_eq!(spec.quadrature_order, Some(24));
    let rep = gauss_bonnet_closed(&s4, &QuadratureRule::new(24), None, 2.0, 1e-4).unwrap();
    assert_pass(&rep);
    assert_integer(&rep);
    assert!(
        start.elapsed().as_secs_f64() < 60.0,
        "4-sphere budget exceeded"
    );

    let (ss, spec) = load_chart("s2xs2.json");
    let rep = gauss_bonnet_closed(
        &ss,
        &QuadratureRule::new(spec.quadrature_order.unwrap()),
        None,
        4.0,
        1e-4,
    )
    .unwrap();
    assert_pass(&rep);
    assert_integer(&rep);

    let (s3, spec) = load_chart("sphere3.json");
    let rep = gauss_bonnet_closed(
        &s3,
        &QuadratureRule::new(spec.quadrature_order.unwrap()),
        None,
        0.0,
        0.0,
    )
    .unwrap();
    assert_pass(&rep);
    assert_eq!(
        rep.value, 0.0,
        "odd-dimensional integrand must vanish identically"
    );
}

#[test]
fn gauss_bonnet_with_boundary() {
    for (file, chi, tol) in [
        ("disc.json", 1.0, 1e-8),
        ("ball3.json", 1.0, 1e-6),
        ("hemisphere2.json", 1.0, 1e-6),
        ("cylinder.json", 0.0, 1e-10),
    ] {
        let start = Instant::now();
        let (chart, spec) = load_chart(file);
        let rep = gauss_bonnet_boundary(
            &chart,
            &QuadratureRule::new(spec.quadrature_order.unwrap()),
            chi,
            tol,
        )
        .unwrap();
        assert_pass(&rep);
        assert_integer(&rep);
        assert!(
            start.elapsed().as_secs_f64() < 30.0,
            "{file} budget exceeded"
        );
    }
}

#[test]
fn interior_variational_identity() {
    // volume variation (degree 0) on the 2-sphere
    let (s2, _) = load_chart("sphere2.json");
    let c2 = ["t1", "ph"];
    let h0 = h_entries(
        &c2,
        2,
        &[
            (1, 1, "0.3+0.1*cos(t1)"),
            (2, 2, "(0.3+0.1*cos(t1))*sin(t1)^2"),
        ],
    );
    let rep =
        variational_check_interior(&s2, &h0, 0, 1e-3, &QuadratureRule::new(32), 1e-8).unwrap();
    assert_pass(&rep);

    // round 4-sphere, degree 2, three distinct smooth perturbations
    let (s4, spec4) = load_chart("sphere4.json");
    let rule4 = QuadratureRule::new(16);
    let conformal = spec4
        .perturbation_entries()
        .unwrap()
        .expect("catalog perturbation");
    let rep = variational_check_interior(&s4, &conformal, 2, 1e-3, &rule4, 1e-4).unwrap();
    assert_pass(&rep);

    let c4 = ["t1", "t2", "t3", "ph"];
    // single-entry bump: h = 0.4 dz² with z the first ambient coordinate
    let bump = h_entries(&c4, 4, &[(1, 1, "0.4*sin(t1)^2")]);
    let rep = variational_check_interior(&s4, &bump, 2, 1e-3, &rule4, 1e-4).unwrap();
    assert_pass(&rep);

    // random trigonometric combination (smooth by construction)
    let trig = h_entries(
        &c4,
        4,
        &[
            (
                1,
                1,
                "0.3*sin(t1)^2 + 0.2*sin(t1)*cos(t2) - 0.15*sin(t1)*cos(t1)*cos(t2)",
            ),
            (1, 2, "0.075*sin(t1)^2*sin(t2)"),
            (2, 2, "0.2*sin(t1)*cos(t2)*sin(t1)^2"),
            (3, 3, "0.2*sin(t1)*cos(t2)*sin(t1)^2*sin(t2)^2"),
            (4, 4, "0.2*sin(t1)*cos(t2)*sin(t1)^2*sin(t2)^2*sin(t3)^2"),
        ],
    );
    let rep = variational_check_interior(&s4, &trig, 2, 1e-3, &rule4, 1e-4).unwrap();
    assert_pass(&rep);

    // the degenerate case: dimension equals the degree, derivative of a
    // topological constant
    let (s2b, spec2) = load_chart("sphere2.json");
    let hc = spec2.perturbation_entries().unwrap().unwrap();
    let rep =
        variational_check_interior(&s2b, &hc, 2, 1e-3, &QuadratureRule::new(32), 1e-6).unwrap();
    assert_pass(&rep);
}

#[test]
fn boundary_variational_identity() {
    let (ball, spec) = load_chart("ball3.json");
    let rule = QuadratureRule::new(20);
    let cb = ["s", "th", "ph"];

    // (a) perturbation supported away from the boundary
    let interior_supported = h_entries(&cb, 3, &[(1, 1, "s^3*(1-s)^2")]);
    let rep = variational_check_boundary(&ball, &interior_supported, 2, 1e-3, &rule, 1e-3).unwrap();
    assert_pass(&rep);

    // (b) general perturbation with tangential boundary components
    let general = spec
        .perturbation_entries()
        .unwrap()
        .expect("catalog perturbation");
    let rep = variational_check_boundary(&ball, &general, 2, 1e-3, &rule, 1e-3).unwrap();
    assert_pass(&rep);

    // informational: unrestricted variation with a non-zero normal
    // component on the boundary; reported, and it satisfies the identity
    let unrestricted = h_entries(
        &cb,
        3,
        &[
            (1, 1, "0.25*(1-s)^2"),
            (2, 2, "0.2*(1-s)^4"),
            (3, 3, "0.2*(1-s)^4*sin(th)^2"),
        ],
    );
    let rep = variational_check_boundary(&ball, &unrestricted, 2, 1e-3, &rule, 1e-3).unwrap();
    println!(
        "(informational, unrestricted normal component) {}",
        rep.line()
    );

    // the degenerate case on the disc: total derivative of the Euler
    // characteristic vanishes
    let (disc, spec) = load_chart("disc.json");
    let hd = spec.perturbation_entries().unwrap().unwrap();
    let rep =
        variational_check_boundary(&disc, &hd, 2, 1e-3, &QuadratureRule::new(32), 1e-6).unwrap();
    assert_pass(&rep);
}

#[test]
fn universal_identity_suite() {
    let start = Instant::now();
    for (dim, samples) in [
        (1usize, 1000usize),
        (2, 1000),
        (3, 1000),
        (4, 1000),
        (5, 1000),
        (6, 1000),
    ] {
        let signs = Signature::riemannian(dim);
        let rep = identity_check(dim, samples, 1, &signs).unwrap();
        assert_pass(&rep);
    }
    // signature reruns in dimension 3: only the dimension matters
    for p in [1usize, 2] {
        let mut signs = vec![1i8; 3];
        for s in signs.iter_mut().take(p) {
            *s = -1;
        }
        let signs = Signature::from_signs(signs).unwrap();
        let rep = identity_check(3, 1000, 1, &signs).unwrap();
        assert_pass(&rep);
    }
    let elapsed = start.elapsed().as_secs_f64();
    println!("identity suite runtime: {elapsed:.2}s");
    assert!(elapsed < 60.0, "identity suite budget exceeded");
}

#[test]
fn identity_residuals_invariant_under_frame_rotation() {
    // residuals of the vanishing identities stay at roundoff after
    // rotating the sampled tensors
    let signs = Signature::riemannian(3);
    for seed in 0..20u64 {
        let r = AlgebraicCurvature::random(3, seed).unwrap();
        let o = pseudo_orthogonal(&signs, 7000 + seed);
        let rot = r.rotate(&o);
        // quadratic identity residual for both
        let resid = |r: &AlgebraicCurvature| {
            let mut tau = 0.0;
            let mut rho = [[0.0f64; 3]; 3];
            let mut rr = 0.0;
            for i in 1..=3 {
                for j in 1..=3 {
                    tau += r.at(i, j, j, i);
                    for a in 1..=3 {
                        rho[i - 1][j - 1] += r.at(a, i, j, a);
                    }
                    for k in 1..=3 {
                        for l in 1..=3 {
                            rr += r.at(i, j, k, l) * r.at(i, j, k, l);
                        }
                    }
                }
            }
            let rho2: f64 = rho.iter().flatten().map(|v| v * v).sum();
            (tau * tau - 4.0 * rho2 + rr).abs()
        };
        assert!((resid(&r) - resid(&rot)).abs() <= 1e-12 * (1.0 + resid(&r)));
    }
    println!("[PASS] identity residuals are frame-rotation invariant");
}

#[test]
fn restriction_product_property() {
    let rule = QuadratureRule::new(10);
    for file in ["disc.json", "hemisphere2.json"] {
        let (chart, _) = load_chart(file);
        let n = chart.dim();
        let rep = restriction_product_check(&chart, n, 1, &rule, 1e-8).unwrap();
        assert_pass(&rep);
    }
    // curvature enters at the next dimension: half the 3-sphere
    let (h3, _) = load_chart("hemisphere3.json");
    let rep = restriction_product_check(&h3, 3, 1, &rule, 1e-8).unwrap();
    assert_pass(&rep);
    let rep = restriction_product_check(&h3, 3, -1, &rule, 1e-8).unwrap();
    assert_pass(&rep);
}

#[test]
fn invariant_dimensions_exact() {
    let start = Instant::now();
    let expected = [1usize, 1, 2, 2, 3, 3];
    for dim in 1..=6u8 {
        let signs = Signature::riemannian(dim as usize);
        let basis = invariant_subspace(dim, &signs);
        let want = expected[dim as usize - 1];
        let qn = q_basis_count(dim);
        assert_eq!(qn, want);

        // both all-definite sign choices give the same dimension
        let all_minus = Signature::from_signs(vec![-1i8; dim as usize]).unwrap();
        assert_eq!(
            invariant_subspace(dim, &all_minus).dimension(),
            want,
            "all-minus signature dimension differs at m={dim}"
        );
        let mut rep = VerificationReport::upper_bound(
            format!("invariant kernel dimension m={dim}"),
            basis.dimension() as f64,
            want as f64,
            0.0,
        );

        // the determinant contractions lie in the kernel and are
        // independent (exact rational rank)
        let mut qs = Vec::new();
        let mut k = (dim as usize - 1) % 2;
        while k < dim as usize {
            let q = q_polynomial(dim, k, &signs).unwrap();
            assert!(is_invariant(&q, &signs), "Q_{k} not invariant at m={dim}");
            assert!(
                in_span(&basis.basis, &q),
                "Q_{k} outside the kernel at m={dim}"
            );
            qs.push(q);
            k += 2;
        }
        rep.pass = rep.pass && rank_of(&qs) == qs.len();
        assert_pass(&rep);

        // the published closed form disagrees in even dimensions; report
        // the discrepancy rather than adopting either count silently
        let closed_form = if dim % 2 == 1 {
            1 + (dim as usize - 1) / 2
        } else {
            1 + dim as usize / 2
        };
        if closed_form != basis.dimension() {
            println!(
                "  note: closed-form count {closed_form} disagrees with the exact kernel \
                 {} at m={dim}; the exact kernel is reported",
                basis.dimension()
            );
            assert!(dim % 2 == 0, "discrepancy expected only in even dimensions");
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    println!("invariant dimension suite runtime: {elapsed:.2}s");
    assert!(elapsed < 120.0, "invariant dimension budget exceeded");
}

#[test]
fn exchange_property() {
    let mut triples = 0usize;
    for dim in 2..=4u8 {
        let signs = Signature::riemannian(dim as usize);
        let basis = invariant_subspace(dim, &signs);
        for p in &basis.basis {
            for a in 1..=dim {
                for b in 1..=dim {
                    if a == b {
                        continue;
                    }
                    let rep = exchange_check(p, a, b, &signs).unwrap();
                    assert!(rep.ok(), "violations at dim {dim}, pair ({a},{b})");
                    triples += rep.triples_checked;
                }
            }
        }
    }
    println!("[PASS] exchange property: 0 violations over {triples} triples");
    assert!(triples > 0);
}

#[test]
fn oracle_equivalence() {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    fn random_signs(rng: &mut ChaCha8Rng, dim: usize) -> Signature {
        let signs: Vec<i8> = (0..dim)
            .map(|_| if rng.gen_bool(0.25) { -1 } else { 1 })
            .collect();
        Signature::from_signs(signs).unwrap()
    }
    let rel = |a: f64, b: f64, scale: f64| (a - b).abs() <= 1e-12 * (1.0 + scale);

    let mut checked = [0usize; 4];
    for case in 0..100u64 {
        let m = 2 + (case as usize % 4);
        let r = AlgebraicCurvature::random(m, 100 + case).unwrap();
        let signs = random_signs(&mut rng, m);
        let n_e = if m >= 4 && case % 2 == 0 { 4 } else { 2 };
        assert!(rel(
            euler_form(&r, &signs, n_e),
            naive::euler_form(&r, &signs, n_e),
            1.0
        ));
        checked[0] += 1;

        let n_el = 2;
        let fast = interior_el_tensor(&r, &signs, n_el);
        let slow = naive::interior_el_tensor(&r, &signs, n_el);
        for i in 1..=m {
            for j in 1..=m {
                assert!(rel(fast.at(i, j), slow.at(i, j), fast.max_abs()));
            }
        }
        checked[1] += 1;

        let mt = 1 + (case as usize % 4);
        let rt = AlgebraicCurvature::random(mt, 200 + case).unwrap();
        let raw: Vec<f64> = (0..mt * mt).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let l = SecondFundamentalForm::from_raw_symmetrize(mt, &raw);
        let st = random_signs(&mut rng, mt);
        let n_b = 1 + (case as usize % 3).min(mt);
        assert!(rel(
            boundary_transgression(&rt, &l, &st, n_b, None).unwrap(),
            naive::boundary_transgression(&rt, &l, &st, n_b, None).unwrap(),
            1.0
        ));
        checked[2] += 1;

        let fb = boundary_el_tensor(&rt, &l, &st, n_b, None).unwrap();
        let sb = naive::boundary_el_tensor(&rt, &l, &st, n_b, None).unwrap();
        for a in 1..=mt {
            for b in 1..=mt {
                assert!(rel(fb.at(a, b), sb.at(a, b), fb.max_abs()));
            }
        }
        checked[3] += 1;
    }
    println!(
        "[PASS] oracle equivalence: optimized vs full-tuple evaluators on {:?} inputs",
        checked
    );
}

#[test]
fn frame_independence() {
    let tol = 1e-10;
    let m = 4;
    let signs = Signature::riemannian(m);
    let r = AlgebraicCurvature::random(m, 5).unwrap();
    let e_base = euler_form(&r, &signs, 4);
    let el_base = interior_el_tensor(&r, &signs, 2);

    let mt = 3;
    let signs_t = Signature::riemannian(mt);
    let rt = AlgebraicCurvature::random(mt, 6).unwrap();
    let raw: Vec<f64> = (0..mt * mt)
        .map(|k| ((2 * k + 1) as f64 * 0.61).cos())
        .collect();
    let l = SecondFundamentalForm::from_raw_symmetrize(mt, &raw);
    let f_base = boundary_transgression(&rt, &l, &signs_t, 3, None).unwrap();
    let fl_base = boundary_el_tensor(&rt, &l, &signs_t, 3, None).unwrap();

    for seed in 0..100u64 {
        let o = pseudo_orthogonal(&signs, seed);
        assert!(
            (euler_form(&r.rotate(&o), &signs, 4) - e_base).abs() <= tol * (1.0 + e_base.abs())
        );
        let el = interior_el_tensor(&r.rotate(&o), &signs, 2);
        let transported = el_base.rotate(&o);
        for i in 1..=m {
            for j in 1..=m {
                assert!(
                    (el.at(i, j) - transported.at(i, j)).abs() <= tol * (1.0 + el_base.max_abs())
                );
            }
        }

        let ot = pseudo_orthogonal(&signs_t, 1000 + seed);
        let f = boundary_transgression(&rt.rotate(&ot), &l.rotate(&ot), &signs_t, 3, None).unwrap();
        assert!((f - f_base).abs() <= tol * (1.0 + f_base.abs()));
        let fl = boundary_el_tensor(&rt.rotate(&ot), &l.rotate(&ot), &signs_t, 3, None).unwrap();
        let ftr = fl_base.rotate(&ot);
        for a in 1..=mt {
            for b in 1..=mt {
                assert!((fl.at(a, b) - ftr.at(a, b)).abs() <= tol * (1.0 + fl_base.max_abs()));
            }
        }
    }
    println!("[PASS] frame independence: 100 rotations, scalars invariant, tensors covariant");
}
