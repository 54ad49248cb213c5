use approx::assert_relative_eq;
use proptest::prelude::*;
use singular_poisson::coordmap::MapKind;
use singular_poisson::kernels::{
    poisson_kernel_euclidean, poisson_kernel_hyp, poisson_kernel_trig, KernelQuery, Order,
};
use singular_poisson::quadrature::QuadratureSpec;
use singular_poisson::sampled::SampledFunction;
use singular_poisson::solve::{bump, solve, BoundaryData, DomainTag, SolveRequest};
use singular_poisson::specfun::{gauss_2f1, HypergeometricParams};

fn p(nu: f64, y: f64, x: f64, xp: f64) -> f64 {
    poisson_kernel_euclidean(Order::new(nu).unwrap(), KernelQuery::new(y, x, xp)).unwrap().value
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn hyp2f1_symmetric_in_a_b(a in -2.5f64..3.0, b in -2.5f64..3.0, c in 0.3f64..4.0, z in -0.9f64..0.9) {
        let ab = gauss_2f1(&HypergeometricParams::new(a, b, c, z)).unwrap();
        let ba = gauss_2f1(&HypergeometricParams::new(b, a, c, z)).unwrap();
        prop_assert!((ab - ba).abs() <= 1e-12 * ab.abs().max(1.0));
    }

    #[test]
    fn kernel_positive(nu in -0.45f64..4.0, y in 0.01f64..5.0, x in 0.01f64..5.0, xp in 0.01f64..5.0) {
        prop_assert!(p(nu, y, x, xp) > 0.0);
    }

    #[test]
    fn kernel_symmetric_and_homogeneous(nu in -0.45f64..4.0, y in 0.01f64..5.0, x in 0.01f64..5.0,
                                        xp in 0.01f64..5.0, lam in 0.1f64..10.0) {
        let v = p(nu, y, x, xp);
        prop_assert!((p(nu, y, xp, x) - v).abs() <= 1e-12 * v);
        prop_assert!((lam * p(nu, lam * y, lam * x, lam * xp) - v).abs() <= 1e-12 * v);
    }

    #[test]
    fn trig_kernel_symmetric(y in 0.05f64..2.0, t in 0.05f64..3.0, tp in 0.05f64..3.0) {
        let o = Order::new(1.5).unwrap();
        let a = poisson_kernel_trig(o, y, t, tp).unwrap().value;
        let b = poisson_kernel_trig(o, y, tp, t).unwrap().value;
        prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1e-300));
    }
}

#[test]
fn hyp_kernels_positive() {
    let o = Order::new(1.5).unwrap();
    for kind in [MapKind::HypPaper, MapKind::HypConformal] {
        for (y, x, xp) in [(0.3, 1.0, 1.2), (1.0, 2.0, 0.5), (0.1, 0.7, 0.7)] {
            assert!(poisson_kernel_hyp(o, y, x, xp, kind).unwrap().value > 0.0);
        }
    }
}

#[test]
fn solve_is_linear() {
    let f = SampledFunction::from_fn(0.0, 8.0, 801, bump(3.0, 1.5)).unwrap();
    let g = SampledFunction::from_fn(0.0, 8.0, 801, bump(5.0, 1.0)).unwrap();
    let h = SampledFunction::new(
        f.grid().to_vec(),
        f.values().iter().zip(g.values()).map(|(a, b)| 2.0 * a - 3.0 * b).collect(),
    )
    .unwrap();
    let run = |s: &SampledFunction| {
        let r = SolveRequest {
            order: Order::new(1.0).unwrap(),
            data: BoundaryData::new(s.clone(), DomainTag::Euclidean).unwrap(),
            height: 0.7,
            output_grid: vec![1.0, 3.0, 4.5, 6.0],
            quadrature: QuadratureSpec::default(),
            map_kind: None,
            potential_coeff: 1.0,
        };
        solve(&r).unwrap().value.values().to_vec()
    };
    let (uf, ug, uh) = (run(&f), run(&g), run(&h));
    // each solve integrates over its own data support, so agreement is at
    // quadrature accuracy rather than roundoff
    for i in 0..uh.len() {
        assert_relative_eq!(uh[i], 2.0 * uf[i] - 3.0 * ug[i], epsilon = 1e-9);
    }
}
