use glars::simulation::median;
use glars::{rmse, run_path, standardize, EstimatorKind, EstimatorSpec, PathEvent, Termination};
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;

fn design(n: usize, p: usize) -> impl Strategy<Value = (DMatrix<f64>, DVector<f64>)> {
    (
        prop::collection::vec(-3.0f64..3.0, n * p),
        prop::collection::vec(-1.0f64..1.0, n),
        prop::collection::vec(-2.0f64..2.0, p),
    )
        .prop_map(move |(xs, noise, beta)| {
            let x = DMatrix::from_vec(n, p, xs);
            let y = &x * DVector::from_vec(beta) + DVector::from_vec(noise);
            (x, y)
        })
}

fn spec_for(kind: EstimatorKind, shrink: f64) -> EstimatorSpec {
    let spec = EstimatorSpec::new(kind);
    match kind.shrinkage() {
        glars::ShrinkageParam::None => spec,
        glars::ShrinkageParam::Ridge => spec.with_shrinkage(shrink * 2.0),
        glars::ShrinkageParam::Liu => spec.with_shrinkage(shrink),
    }
}

fn any_kind() -> impl Strategy<Value = EstimatorKind> {
    prop::sample::select(EstimatorKind::ALL.to_vec())
}

fn rss(x: &DMatrix<f64>, y: &DVector<f64>, beta: &[f64]) -> f64 {
    (y - x * DVector::from_column_slice(beta)).norm_squared()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn breakpoints_are_well_formed(
        (x, y) in design(20, 5),
        kind in any_kind(),
        shrink in 0.05f64..0.95,
        alpha in 0.25f64..2.0,
    ) {
        let std = standardize(&x, &y).unwrap();
        let path = match run_path(&std, &spec_for(kind, shrink), alpha) {
            Ok(p) => p,
            Err(glars::GlarsError::NonConvergence { partial, .. }) => *partial,
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        let first = &path.steps[0];
        prop_assert_eq!(first.rho, 0.0);
        prop_assert!(first.beta_scaled.iter().all(|b| *b == 0.0));
        prop_assert!(matches!(first.event, PathEvent::Enter(_)));

        for pair in path.steps.windows(2) {
            let (prev, step) = (&pair[0], &pair[1]);
            prop_assert!(step.rho > 0.0 && step.rho <= 1.0, "rho {}", step.rho);
            let delta = step.active.len() as isize - prev.active.len() as isize;
            match step.event {
                PathEvent::Enter(j) => {
                    prop_assert_eq!(delta, 1);
                    prop_assert!(step.active.contains(&j) && !prev.active.contains(&j));
                }
                PathEvent::Drop(j) => {
                    prop_assert_eq!(delta, -1);
                    prop_assert!(!step.active.contains(&j));
                    prop_assert_eq!(step.beta_scaled[j], 0.0);
                }
                PathEvent::Terminal => prop_assert_eq!(delta, 0),
            }
        }
        for step in &path.steps {
            let l1: f64 = step.beta_scaled.iter().map(|b| b.abs()).sum();
            prop_assert!((l1 - step.t_weighted).abs() <= 1e-12 * (1.0 + l1));
            // inactive coordinates stay at zero
            for (j, b) in step.beta_scaled.iter().enumerate() {
                if !step.active.contains(&j) {
                    prop_assert_eq!(*b, 0.0);
                }
            }
        }
        if path.termination == Termination::Complete {
            prop_assert_eq!(path.steps.last().unwrap().event, PathEvent::Terminal);
        }
    }

    #[test]
    fn olse_residuals_never_grow((x, y) in design(25, 6), alpha in 0.25f64..2.0) {
        let std = standardize(&x, &y).unwrap();
        let path = run_path(&std, &EstimatorSpec::olse(), alpha).unwrap();
        let mut last = f64::INFINITY;
        for step in &path.steps {
            let beta = path.adaptive_from_scaled(&step.beta_scaled);
            let r = rss(&std.x, &std.y, &beta);
            prop_assert!(r <= last * (1.0 + 1e-9) + 1e-12, "rss rose from {} to {}", last, r);
            last = r;
        }
    }

    #[test]
    fn back_transform_reproduces_standardized_fit(
        (x, y) in design(15, 4),
        kind in any_kind(),
        shift in -10.0f64..10.0,
        scale in 0.1f64..20.0,
    ) {
        let x = x.map(|v| v * scale + shift);
        let std = standardize(&x, &y).unwrap();
        let Ok(path) = run_path(&std, &spec_for(kind, 0.5), 1.0) else { return Ok(()); };
        for step in &path.steps {
            let adaptive = path.adaptive_from_scaled(&step.beta_scaled);
            let std_fit = &std.x * DVector::from_vec(adaptive) + DVector::from_element(std.n(), std.y_mean);
            let (slopes, intercept) = path.original_from_scaled(&step.beta_scaled);
            let raw_fit = &x * DVector::from_vec(slopes) + DVector::from_element(x.nrows(), intercept);
            prop_assert!((std_fit - raw_fit).amax() <= 1e-8 * (1.0 + y.amax()));
        }
    }

    #[test]
    fn paths_are_deterministic((x, y) in design(12, 4), kind in any_kind()) {
        let std = standardize(&x, &y).unwrap();
        let spec = spec_for(kind, 0.3);
        let a = run_path(&std, &spec, 1.0).map(|p| p.steps);
        let b = run_path(&std, &spec, 1.0).map(|p| p.steps);
        match (a, b) {
            (Ok(a), Ok(b)) => prop_assert_eq!(a, b),
            (Err(a), Err(b)) => prop_assert_eq!(a.to_string(), b.to_string()),
            _ => prop_assert!(false, "one run failed and the other did not"),
        }
    }

    #[test]
    fn rmse_ignores_row_order(
        (x, y) in design(10, 3),
        beta in prop::collection::vec(-2.0f64..2.0, 3),
        intercept in -1.0f64..1.0,
        perm in Just((0..10usize).collect::<Vec<_>>()).prop_shuffle(),
    ) {
        let xp = x.select_rows(perm.iter());
        let yp = DVector::from_iterator(10, perm.iter().map(|&i| y[i]));
        let a = rmse(&beta, intercept, &x, &y).unwrap();
        let b = rmse(&beta, intercept, &xp, &yp).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * (1.0 + a));
    }

    #[test]
    fn median_splits_the_sample(mut values in prop::collection::vec(-100.0f64..100.0, 1..40)) {
        let m = median(&values).unwrap();
        let below = values.iter().filter(|v| **v < m).count();
        let above = values.iter().filter(|v| **v > m).count();
        prop_assert!(below <= values.len() / 2 && above <= values.len() / 2);
        values.sort_by(f64::total_cmp);
        prop_assert!(m >= values[0] && m <= values[values.len() - 1]);
    }
}

#[test]
fn weighted_norm_at_terminal_matches_full_fit_for_olse() {
    let x = DMatrix::from_row_slice(
        8,
        3,
        &[
            1.0, 0.2, -0.5, 0.3, 1.1, 0.4, -0.7, 0.5, 1.3, 1.5, -0.2, 0.1, 0.2, 0.9, -1.0, -1.2, 0.3, 0.6, 0.8,
            -0.6, 0.2, -0.4, -1.4, -0.9,
        ],
    );
    let y = DVector::from_vec(vec![1.0, 0.5, -0.2, 1.8, -0.6, -1.1, 1.2, -1.5]);
    let std = standardize(&x, &y).unwrap();
    let path = run_path(&std, &EstimatorSpec::olse(), 1.0).unwrap();
    let ols = glars::fit_olse(&std.x, &std.y).unwrap();
    for (a, b) in path.final_beta_adaptive.iter().zip(ols.iter()) {
        assert!((a - b).abs() < 1e-9, "{a} vs {b}");
    }
}
