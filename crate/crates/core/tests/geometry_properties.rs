//! Chart-level geometric properties: curvature symmetries through the
//! frame pipeline, second-fundamental-form covariance, and the
//! circle-product structure.

use cgb_core::geometry::{charts, curvature_in_frame};
use cgb_core::linalg::pseudo_orthogonal;
use cgb_core::tensor::Signature;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_interior(chart: &cgb_core::MetricChart, rng: &mut ChaCha8Rng) -> Vec<f64> {
    chart
        .domain()
        .iter()
        .map(|(lo, hi)| {
            let w = hi - lo;
            lo + w * rng.gen_range(0.15..0.85)
        })
        .collect()
}

#[test]
fn curvature_symmetries_hold_in_frames_on_catalog_charts() {
    let mut rng = ChaCha8Rng::seed_from_u64(71);
    let catalog = [
        charts::sphere(2),
        charts::sphere(3),
        charts::sphere(4),
        charts::s2xs2(),
        charts::disc(),
        charts::ball3(),
        charts::hemisphere(),
        charts::hemisphere3(),
        charts::torus2(),
    ];
    for chart in &catalog {
        for _ in 0..5 {
            let x = random_interior(chart, &mut rng);
            let (r, _) = chart.frame_curvature_at(&x, false).unwrap();
            // stored pair symmetries are exact by construction; the
            // geometric content is the Bianchi residual
            let scale = 1.0 + r.max_abs();
            assert!(
                r.bianchi_residual() <= 1e-10 * scale,
                "{} at {x:?}: bianchi {:.3e}",
                chart.name(),
                r.bianchi_residual()
            );
        }
    }
}

#[test]
fn raw_frame_conversion_symmetry_residual_is_small() {
    // measure the symmetry residual before canonicalization
    let mut rng = ChaCha8Rng::seed_from_u64(72);
    for chart in [charts::sphere(2), charts::ball3(), charts::hemisphere3()] {
        for _ in 0..5 {
            let x = random_interior(&chart, &mut rng);
            let m = chart.dim();
            let r = chart.riemann_at(&x).unwrap();
            let frame = chart.orthonormal_frame_at(&x, false).unwrap();
            let rf = curvature_in_frame(m, &r, &frame);
            // compare a hand-contracted component against the stored one
            let mut worst = 0.0f64;
            for i in 0..m {
                for j in 0..m {
                    for k in 0..m {
                        for l in 0..m {
                            let mut s = 0.0;
                            for a in 0..m {
                                for b in 0..m {
                                    for c in 0..m {
                                        for d in 0..m {
                                            s += r[((a * m + b) * m + c) * m + d]
                                                * frame.vectors[i][a]
                                                * frame.vectors[j][b]
                                                * frame.vectors[k][c]
                                                * frame.vectors[l][d];
                                        }
                                    }
                                }
                            }
                            worst = worst.max((s - rf.at0(i, j, k, l)).abs());
                        }
                    }
                }
            }
            assert!(
                worst <= 1e-10 * (1.0 + rf.max_abs()),
                "{}: {worst:.3e}",
                chart.name()
            );
        }
    }
}

#[test]
fn second_fundamental_form_is_frame_covariant() {
    let chart = charts::ball3();
    let mut rng = ChaCha8Rng::seed_from_u64(73);
    for seed in 0..10u64 {
        let rest: Vec<f64> = vec![rng.gen_range(0.5..2.5), rng.gen_range(0.5..5.0)];
        let y = chart.boundary_point(&rest);
        let l = chart.second_fundamental_form(&y).unwrap();
        let frame = chart.orthonormal_frame_at(&y, true).unwrap();
        let m = chart.dim();
        let mt = m - 1;
        let o = pseudo_orthogonal(&Signature::riemannian(mt), seed);
        // rotate the tangential frame and recompute L from first principles
        let gamma = chart.christoffel(&y).unwrap();
        let g = chart.metric_at(&y).unwrap();
        let e1 = &frame.vectors[0];
        let mut w = vec![0.0; m];
        for k in 0..m {
            for lidx in 0..m {
                w[k] += g[k * m + lidx] * e1[lidx];
            }
        }
        let rotated_tangent = |a: usize| -> Vec<f64> {
            let mut v = vec![0.0; m];
            for b in 0..mt {
                for (c, vc) in v.iter_mut().enumerate() {
                    *vc += o[b * mt + a] * frame.vectors[b + 1][c];
                }
            }
            v
        };
        for a in 0..mt {
            for b in 0..mt {
                let ea = rotated_tangent(a);
                let eb = rotated_tangent(b);
                let mut val = 0.0;
                for i in 0..m {
                    for j in 0..m {
                        let mut t = 0.0;
                        for k in 0..m {
                            t += gamma[(k * m + i) * m + j] * w[k];
                        }
                        val += ea[i] * eb[j] * t;
                    }
                }
                let expected = l.rotate(&o).at(a + 1, b + 1);
                assert!(
                    (val - expected).abs() <= 1e-10,
                    "seed {seed} ({a},{b}): {val} vs {expected}"
                );
            }
        }
    }
}

#[test]
fn circle_product_curvature_and_second_form_structure() {
    for base in [charts::disc(), charts::hemisphere3()] {
        let product = base.product_with_circle(1);
        let m = product.dim();
        // interior: no curvature component touches the circle direction
        let x: Vec<f64> = product
            .domain()
            .iter()
            .map(|(lo, hi)| 0.4 * lo + 0.6 * hi)
            .collect();
        let (r, _) = product.frame_curvature_at(&x, false).unwrap();
        for i in 1..=m {
            for j in 1..=m {
                for k in 1..=m {
                    assert!(r.at(i, j, k, m).abs() <= 1e-11, "{}", base.name());
                }
            }
        }
        // boundary: L_product = L_base ⊕ 0
        let rest: Vec<f64> = product.domain()[1..]
            .iter()
            .map(|(lo, hi)| 0.3 * lo + 0.7 * hi)
            .collect();
        let y = product.boundary_point(&rest);
        let l = product.second_fundamental_form(&y).unwrap();
        let y_base = base.boundary_point(&rest[..rest.len() - 1]);
        let l_base = base.second_fundamental_form(&y_base).unwrap();
        let mt = m - 1;
        for a in 1..=mt {
            assert!(l.at(a, mt).abs() <= 1e-11);
        }
        for a in 1..=mt - 1 {
            for b in 1..=mt - 1 {
                assert!((l.at(a, b) - l_base.at(a, b)).abs() <= 1e-10);
            }
        }
    }
}

#[test]
fn scalar_invariants_unchanged_by_frame_rotation_on_charts() {
    // rotate the frame a curvature tensor came from; the quadratic
    // invariants stay put
    use cgb_core::tensor::AlgebraicCurvature;
    let chart = charts::sphere(3);
    let x = [1.2, 0.9, 2.2];
    let (r, frame) = chart.frame_curvature_at(&x, false).unwrap();
    let quad = |r: &AlgebraicCurvature| {
        let m = r.dim();
        let mut tau = 0.0;
        let mut norm2 = 0.0;
        for i in 1..=m {
            for j in 1..=m {
                tau += r.at(i, j, j, i);
                for k in 1..=m {
                    for l in 1..=m {
                        norm2 += r.at(i, j, k, l) * r.at(i, j, k, l);
                    }
                }
            }
        }
        (tau, norm2)
    };
    let (tau0, n0) = quad(&r);
    for seed in 0..20u64 {
        let o = pseudo_orthogonal(&frame.signs, seed);
        let (tau, n2) = quad(&r.rotate(&o));
        assert!((tau - tau0).abs() <= 1e-11 * (1.0 + tau0.abs()));
        assert!((n2 - n0).abs() <= 1e-11 * (1.0 + n0.abs()));
    }
}
