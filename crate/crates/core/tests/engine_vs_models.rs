//! Cross-validation of the generic finite-difference engine against the
//! built-in models' closed forms, and of the expression language against
//! the native implementations.

use homog_core::homogeneity::{
    dh_at, homogenized_surrogate, pdh_map, radial_dh, remainder_metric, DesignPoint, DiffSettings,
};
use homog_core::models::{
    beam_two_actions, cable_dh, column_dh, shear_wall, tension_dh, BeamTwoActions, BeamVariant,
    CableLateral, ColumnBuckling, EccentricTension, MasonryShearWall,
};
use homog_core::{expr, var_map, EffectModel, VarMap};

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64)).collect()
}

#[test]
fn generic_dh_matches_closed_forms_on_grids() {
    let settings = DiffSettings::default();

    for xi in log_grid(1e-3, 0.85, 50) {
        let point = DesignPoint::new(&ColumnBuckling, var_map([("load_ratio", xi)])).unwrap();
        let generic = dh_at(&ColumnBuckling, &point, &settings).unwrap();
        assert!(
            (generic - column_dh(xi).unwrap()).abs() < 1e-6,
            "column at {xi}: {generic}"
        );
    }

    for xi in log_grid(1e-3, 10.0, 50) {
        let point = DesignPoint::new(&EccentricTension, var_map([("load_ratio", xi)])).unwrap();
        let generic = dh_at(&EccentricTension, &point, &settings).unwrap();
        assert!(
            (generic - tension_dh(xi).unwrap()).abs() < 1e-6,
            "tension at {xi}: {generic}"
        );
    }

    for lam in log_grid(1e-6, 1e3, 50) {
        let point = DesignPoint::new(&CableLateral, var_map([("load_ratio", lam)])).unwrap();
        let generic = dh_at(&CableLateral, &point, &settings).unwrap();
        assert!(
            (generic - cable_dh(lam).unwrap()).abs() < 1e-6,
            "cable at {lam}: {generic}"
        );
    }

    for (variant, hi) in [(BeamVariant::Compression, 0.85), (BeamVariant::Tension, 10.0)] {
        let beam = BeamTwoActions { variant };
        for xi in log_grid(1e-3, hi, 50) {
            let point = DesignPoint::new(&beam, var_map([("G", 1.3), ("P", xi)])).unwrap();
            let pdh = pdh_map(&beam, &point, &settings).unwrap();
            let closed = beam_two_actions(xi, variant).unwrap();
            assert!((pdh["G"] - 1.0).abs() < 1e-6, "beam n_G at {xi}");
            assert!(
                (pdh["P"] - closed.n_p).abs() < 1e-6,
                "beam n_P at {xi}: {} vs {}",
                pdh["P"],
                closed.n_p
            );
        }
    }

    let wall = MasonryShearWall { a: 0.7 };
    for (f1, f2) in [(10.0, 2.0), (5.0, 1.0), (40.0, 11.0), (3.0, 0.2)] {
        let point = DesignPoint::new(&wall, var_map([("F1", f1), ("F2", f2)])).unwrap();
        let pdh = pdh_map(&wall, &point, &settings).unwrap();
        let closed = shear_wall(f1, f2, 0.7).unwrap();
        assert!((pdh["F1"] - closed.n_f1).abs() < 1e-6);
        assert!((pdh["F2"] - closed.n_f2).abs() < 1e-6);
    }
}

#[test]
fn per_variable_sum_agrees_with_radial_estimator() {
    // The DH identity: sum of per-variable stencils vs the radial stencil,
    // within the step-squared tolerance used by the engine's own guard.
    let settings = DiffSettings::default();
    let models: Vec<(Box<dyn EffectModel>, VarMap)> = vec![
        (Box::new(ColumnBuckling), var_map([("load_ratio", 0.4)])),
        (Box::new(CableLateral), var_map([("load_ratio", 2.0)])),
        (
            Box::new(BeamTwoActions { variant: BeamVariant::Compression }),
            var_map([("G", 2.0), ("P", 0.5)]),
        ),
        (Box::new(MasonryShearWall { a: 0.5 }), var_map([("F1", 10.0), ("F2", 2.0)])),
    ];
    for (model, values) in &models {
        let point = DesignPoint::new(model.as_ref(), values.clone()).unwrap();
        let sum: f64 = pdh_map(model.as_ref(), &point, &settings).unwrap().values().sum();
        let radial = radial_dh(model.as_ref(), &point, &settings).unwrap();
        let tol = 50.0 * settings.step * settings.step * (1.0 + sum.abs());
        assert!((sum - radial).abs() < tol, "sum {sum} vs radial {radial}");
    }
}

#[test]
fn expression_language_reproduces_native_models() {
    const HALF_PI: &str = "1.5707963267948966";

    // Column.
    let e = expr::parse(&format!("load_ratio / cos({HALF_PI} * sqrt(load_ratio))")).unwrap();
    for xi in log_grid(1e-3, 0.95, 40) {
        let native = ColumnBuckling.eval(&var_map([("load_ratio", xi)])).unwrap();
        let dsl = e.eval(&var_map([("load_ratio", xi)])).unwrap();
        assert!((dsl - native).abs() <= 1e-12 * native.abs(), "column at {xi}");
    }

    // Eccentric tension.
    let e = expr::parse(&format!("load_ratio / cosh({HALF_PI} * sqrt(load_ratio))")).unwrap();
    for xi in log_grid(1e-3, 20.0, 40) {
        let native = EccentricTension.eval(&var_map([("load_ratio", xi)])).unwrap();
        let dsl = e.eval(&var_map([("load_ratio", xi)])).unwrap();
        assert!((dsl - native).abs() <= 1e-12 * native.abs(), "tension at {xi}");
    }

    // Beam, both variants.
    for (variant, src, hi) in [
        (BeamVariant::Compression, format!("G * tan({HALF_PI} * sqrt(P)) / ({HALF_PI} * sqrt(P))"), 0.95),
        (BeamVariant::Tension, format!("G * tanh({HALF_PI} * sqrt(P)) / ({HALF_PI} * sqrt(P))"), 20.0),
    ] {
        let e = expr::parse(&src).unwrap();
        let beam = BeamTwoActions { variant };
        for xi in log_grid(1e-3, hi, 40) {
            let v = var_map([("G", 1.7), ("P", xi)]);
            let native = beam.eval(&v).unwrap();
            let dsl = e.eval(&v).unwrap();
            assert!((dsl - native).abs() <= 1e-12 * native.abs(), "beam at {xi}");
        }
    }

    // Shear wall.
    let e = expr::parse("F1^2/(F1 - 2*a*F2)").unwrap();
    let wall = MasonryShearWall { a: 0.5 };
    for (f1, f2) in [(10.0, 2.0), (5.0, 0.5), (30.0, 12.0)] {
        let native = wall.eval(&var_map([("F1", f1), ("F2", f2)])).unwrap();
        let dsl = e.eval(&var_map([("F1", f1), ("F2", f2), ("a", 0.5)])).unwrap();
        assert!((dsl - native).abs() <= 1e-12 * native.abs());
    }

    // The cable has no closed-form expression (parametric solve); it is
    // deliberately absent here.
}

#[test]
fn surrogate_tangency_decays_quadratically() {
    let settings = DiffSettings::default();

    // max |ln E~ - ln E| over probe directions at log-radius r.
    fn tangency_error(model: &dyn EffectModel, values: &VarMap, r: f64, settings: &DiffSettings) -> f64 {
        let point = DesignPoint::new(model, values.clone()).unwrap();
        let pdh = pdh_map(model, &point, settings).unwrap();
        let sur = homogenized_surrogate(&point, &pdh);
        let names: Vec<&String> = values.keys().collect();
        let mut worst = 0.0f64;
        let dirs: Vec<Vec<f64>> = match names.len() {
            1 => vec![vec![1.0], vec![-1.0]],
            2 => {
                let s = 1.0 / 2.0f64.sqrt();
                vec![
                    vec![1.0, 0.0],
                    vec![-1.0, 0.0],
                    vec![0.0, 1.0],
                    vec![0.0, -1.0],
                    vec![s, s],
                    vec![s, -s],
                    vec![-s, s],
                    vec![-s, -s],
                ]
            }
            _ => unreachable!(),
        };
        for dir in dirs {
            let mut probe = values.clone();
            for (i, name) in names.iter().enumerate() {
                *probe.get_mut(*name).unwrap() *= (r * dir[i]).exp();
            }
            let truth = model.eval(&probe).unwrap().ln();
            let approx = sur.eval(&probe).unwrap().ln();
            worst = worst.max((truth - approx).abs());
        }
        worst
    }

    let cases: Vec<(Box<dyn EffectModel>, VarMap)> = vec![
        (Box::new(ColumnBuckling), var_map([("load_ratio", 0.25)])),
        (Box::new(MasonryShearWall { a: 0.5 }), var_map([("F1", 10.0), ("F2", 2.0)])),
    ];
    for (model, values) in &cases {
        let point = DesignPoint::new(model.as_ref(), values.clone()).unwrap();
        let h_norm = remainder_metric(model.as_ref(), &point, point.values(), &settings).unwrap();
        let errs: Vec<f64> =
            [0.1, 0.05, 0.025].iter().map(|r| tangency_error(model.as_ref(), values, *r, &settings)).collect();
        // Bounded by the remainder form with headroom for the cubic term.
        for (r, err) in [0.1, 0.05, 0.025].iter().zip(&errs) {
            assert!(
                *err <= 0.75 * h_norm * r * r + 1e-12,
                "error {err} at radius {r} (|H| = {h_norm})"
            );
        }
        // Quadratic decay: halving the radius divides the error by ~4.
        assert!((0.1..0.4).contains(&(errs[1] / errs[0])), "decay {}", errs[1] / errs[0]);
        assert!((0.1..0.4).contains(&(errs[2] / errs[1])), "decay {}", errs[2] / errs[1]);
    }
}
