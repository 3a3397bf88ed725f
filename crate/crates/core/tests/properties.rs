use proptest::prelude::*;

use switchstab::linalg::{determinant, mat_exp, spectral_radius, spectrum, Matrix};
use switchstab::model::{SubSystem, SwitchedSystem};
use switchstab::signals::{PeriodicSignal, Segment};
use switchstab::simulate::{hausdorff_distance, limit_cycle, poincare_map, simulate};
use switchstab::Vector;

fn matrix(n: usize, scale: f64) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(-scale..scale, n * n).prop_map(move |d| Matrix::new(n, n, d).unwrap())
}

fn square(scale: f64) -> impl Strategy<Value = Matrix> {
    (1usize..=4).prop_flat_map(move |n| matrix(n, scale))
}

fn pair(scale: f64) -> impl Strategy<Value = (Matrix, Matrix)> {
    (1usize..=4).prop_flat_map(move |n| (matrix(n, scale), matrix(n, scale)))
}

fn vector(n: usize, scale: f64) -> impl Strategy<Value = Vector> {
    prop::collection::vec(-scale..scale, n).prop_map(|d| Vector::new(d).unwrap())
}

/// Affine system with `m` modes in dimension 2 and a signal over them.
fn affine_case() -> impl Strategy<Value = (SwitchedSystem, PeriodicSignal)> {
    (1usize..=3).prop_flat_map(|m| {
        let subs = prop::collection::vec((matrix(2, 1.0), vector(2, 2.0)), m);
        let segs = prop::collection::vec((0..m, 0.1f64..1.0), 1..=4);
        (subs, segs).prop_map(|(subs, segs)| {
            let sys = SwitchedSystem::new(
                subs.into_iter()
                    .map(|(a, b)| SubSystem::new(a, b).unwrap())
                    .collect(),
            )
            .unwrap();
            let sig =
                PeriodicSignal::new(segs.into_iter().map(|(i, d)| Segment::new(i, d)).collect())
                    .unwrap();
            (sys, sig)
        })
    })
}

fn close(a: &Matrix, b: &Matrix, tol: f64) -> bool {
    (a - b).max_abs() <= tol * (1.0 + a.max_abs().max(b.max_abs()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn det_exp_is_exp_trace(m in square(2.0)) {
        let d = determinant(&mat_exp(&m).unwrap()).unwrap();
        let want = m.trace().exp();
        prop_assert!((d - want).abs() <= 1e-10 * want);
    }

    #[test]
    fn exp_inverse(m in square(2.0)) {
        let n = m.rows();
        let prod = &mat_exp(&m).unwrap() * &mat_exp(&-&m).unwrap();
        prop_assert!(close(&prod, &Matrix::identity(n), 1e-10));
    }

    #[test]
    fn exp_commutes_with_its_generator(m in square(2.0)) {
        let e = mat_exp(&m).unwrap();
        prop_assert!(close(&(&e * &m), &(&m * &e), 1e-10));
    }

    #[test]
    fn radius_of_product_is_order_free((a, b) in pair(1.0)) {
        let ab = spectral_radius(&(&a * &b)).unwrap();
        let ba = spectral_radius(&(&b * &a)).unwrap();
        prop_assert!((ab - ba).abs() <= 1e-7 * (1.0 + ab));
    }

    #[test]
    fn eigenvalues_reproduce_trace_and_determinant(m in square(2.0)) {
        let s = spectrum(&m).unwrap();
        let sum: f64 = s.eigenvalues().iter().map(|z| z.re).sum();
        let prod = s.eigenvalues().iter().fold(num_complex::Complex64::new(1.0, 0.0), |acc, z| acc * z);
        prop_assert!((sum - m.trace()).abs() <= 1e-9 * (1.0 + m.trace().abs()));
        let det = determinant(&m).unwrap();
        prop_assert!((prod.re - det).abs() <= 1e-8 * (1.0 + det.abs()));
        prop_assert!(prod.im.abs() <= 1e-8 * (1.0 + det.abs()));
    }

    #[test]
    fn one_period_of_simulation_is_the_poincare_map((sys, sig) in affine_case(), x0 in vector(2, 1.0)) {
        let map = poincare_map(&sys, &sig).unwrap();
        let t = sig.period();
        let traj = simulate(&sys, &sig, &x0, t, t / 7.0).unwrap();
        let end = &traj.last().unwrap().x;
        let want = map.apply(&x0);
        prop_assert!(end.distance(&want) <= 1e-9 * (1.0 + want.norm2()));
    }

    #[test]
    fn linear_flow_is_odd((sys, sig) in affine_case(), x0 in vector(2, 1.0)) {
        let lin = sys.linear_part();
        let t = 2.0 * sig.period();
        let up = simulate(&lin, &sig, &x0, t, t / 5.0).unwrap();
        let down = simulate(&lin, &sig, &-&x0, t, t / 5.0).unwrap();
        for (p, q) in up.samples.iter().zip(&down.samples) {
            prop_assert!(p.x.distance(&-&q.x) <= 1e-12 * (1.0 + p.x.norm2()));
        }
    }

    #[test]
    fn shifted_signal_traces_the_same_attractor(
        (sys, sig) in affine_case(),
        j in 0usize..300,
    ) {
        let Ok(base) = limit_cycle(&sys, &sig, 300) else { return Ok(()); };
        prop_assume!(base.spectral_radius < 0.999);
        // A shift on the sampling lattice makes both polylines share vertices,
        // so the comparison sees no chord error.
        let gamma = sig.period() * j as f64 / 300.0;
        let shifted = limit_cycle(&sys, &sig.shift(gamma).unwrap(), 300).unwrap();
        let scale = 1.0 + base.diameter() + base.fixed_point.norm2();
        prop_assert!(hausdorff_distance(&base.orbit, &shifted.orbit) <= 1e-6 * scale);
    }
}

#[test]
fn common_equilibrium_is_preserved() {
    let a1 = Matrix::from_rows(&[vec![-1.0, 2.0], vec![0.0, 3.0]]).unwrap();
    let a2 = Matrix::from_rows(&[vec![0.5, -1.0], vec![1.0, -2.0]]).unwrap();
    let e = Vector::new(vec![1.5, -0.5]).unwrap();
    // b_i = -A_i e puts the equilibrium of every mode at e.
    let sys = SwitchedSystem::new(vec![
        SubSystem::new(a1.clone(), -&a1.apply(&e).unwrap()).unwrap(),
        SubSystem::new(a2.clone(), -&a2.apply(&e).unwrap()).unwrap(),
    ])
    .unwrap();
    let sig = PeriodicSignal::from_pairs(&[(0, 0.3), (1, 0.7), (0, 0.2)]).unwrap();
    let traj = simulate(&sys, &sig, &e, 25.0, 0.1).unwrap();
    for s in &traj.samples {
        assert!(
            s.x.distance(&e) < 1e-9,
            "drifted to {:?} at t = {}",
            s.x,
            s.t
        );
    }
}
