//! Property-based invariants across the crate.

use proptest::prelude::*;

use homog_core::dist::{CharRule, DistKind, DistributionSpec};
use homog_core::expr::{self, BinOp, Expr, Func};
use homog_core::homogeneity::{
    dh_at, equivalent_psf, pdh_map, psf_effect, DesignPoint, DiffSettings,
};
use homog_core::reliability::{kappa_factors, ri_bounds, ri_of_xi};
use homog_core::{EffectModel, ModelError, VarMap};

// ---------------------------------------------------------------------------
// Expression language
// ---------------------------------------------------------------------------

fn arb_func() -> impl Strategy<Value = Func> {
    prop_oneof![
        Just(Func::Sin),
        Just(Func::Cos),
        Just(Func::Tan),
        Just(Func::Sinh),
        Just(Func::Cosh),
        Just(Func::Tanh),
        Just(Func::Sqrt),
        Just(Func::Exp),
        Just(Func::Ln),
        Just(Func::Abs),
        Just(Func::Min),
        Just(Func::Max),
    ]
}

fn arb_binop() -> impl Strategy<Value = BinOp> {
    prop_oneof![
        Just(BinOp::Add),
        Just(BinOp::Sub),
        Just(BinOp::Mul),
        Just(BinOp::Div),
        Just(BinOp::Pow),
    ]
}

fn arb_expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        // Non-negative literals: the lexer never produces negative numbers,
        // so a negative literal could not survive a print/parse round trip.
        (0.0..1e6f64).prop_map(Expr::Number),
        prop_oneof![Just("x"), Just("y"), Just("F1"), Just("load_ratio"), Just("a_b")]
            .prop_map(|s| Expr::Variable(s.to_string())),
    ];
    leaf.prop_recursive(4, 48, 3, |inner| {
        prop_oneof![
            inner.clone().prop_map(|e| Expr::Neg(Box::new(e))),
            (arb_binop(), inner.clone(), inner.clone())
                .prop_map(|(op, a, b)| Expr::Binary(op, Box::new(a), Box::new(b))),
            (arb_func(), inner.clone(), inner).prop_map(|(f, a, b)| {
                let mut args = vec![a];
                if matches!(f, Func::Min | Func::Max) {
                    args.push(b);
                }
                Expr::Call(f, args)
            }),
        ]
    })
}

proptest! {
    #[test]
    fn parse_print_parse_is_a_fixpoint(ast in arb_expr()) {
        let printed = ast.to_string();
        let reparsed = expr::parse(&printed)
            .unwrap_or_else(|e| panic!("printed form `{printed}` failed to parse: {e}"));
        prop_assert_eq!(ast, reparsed);
    }

    #[test]
    fn evaluation_never_yields_non_finite(ast in arb_expr(), x in 0.1..10.0f64, y in 0.1..10.0f64) {
        let mut bindings = VarMap::new();
        for name in ["x", "y", "F1", "load_ratio", "a_b"] {
            bindings.insert(name.to_string(), if name == "y" { y } else { x });
        }
        match ast.evaluate(&bindings) {
            Ok(v) => prop_assert!(v.is_finite()),
            Err(ModelError::NonFinite { .. }) => {}
            Err(e) => prop_assert!(false, "unexpected error {e}"),
        }
    }
}

// ---------------------------------------------------------------------------
// Distributions
// ---------------------------------------------------------------------------

fn arb_kind() -> impl Strategy<Value = DistKind> {
    prop_oneof![Just(DistKind::Normal), Just(DistKind::Lognormal), Just(DistKind::Gumbel)]
}

proptest! {
    #[test]
    fn quantile_cdf_round_trip(
        kind in arb_kind(),
        mean in 0.1..10.0f64,
        cov in 0.01..0.5f64,
        p in 0.00005..0.99995f64,
    ) {
        let spec = DistributionSpec::new(kind, mean, cov, CharRule::Percentile(0.5)).unwrap();
        let x = spec.quantile(p).unwrap();
        let back = spec.quantile(spec.cdf(x).unwrap()).unwrap();
        prop_assert!(
            (back - x).abs() <= 1e-7 * x.abs().max(1e-300),
            "x = {x}, back = {back}"
        );
    }

    #[test]
    fn tau_is_unity_for_lognormal_everywhere(
        mean in 0.1..10.0f64,
        cov in 0.01..0.5f64,
        x_exp in -2.0..2.0f64,
    ) {
        let spec = DistributionSpec::new(DistKind::Lognormal, mean, cov, CharRule::Percentile(0.5))
            .unwrap();
        let x = mean * 10f64.powf(x_exp);
        prop_assert!((spec.tau_dhn(x).unwrap() - 1.0).abs() < 1e-9);
    }
}

// ---------------------------------------------------------------------------
// Reduction factors
// ---------------------------------------------------------------------------

proptest! {
    #[test]
    fn kappa_constraint_and_linear_oracle(xi_r in 0.0..20.0f64, delta in 0.0..20.0f64) {
        let xi_f = xi_r + delta;
        let k = kappa_factors(xi_r, xi_f).unwrap();
        prop_assert!(k.kappa_f * k.kappa_f + k.kappa_r * k.kappa_r >= 1.0 - 1e-9);
        prop_assert!(k.kappa_r > 0.0 && k.kappa_r <= 1.0 + 1e-12);
        prop_assert!(k.kappa_f >= 0.0 && k.kappa_f <= 1.0 + 1e-12);

        // Exactly on target at the range ends.
        let beta_t = 3.8;
        let (beta_r, beta_f) = (k.kappa_r * beta_t, k.kappa_f * beta_t);
        prop_assert!((ri_of_xi(beta_r, beta_f, xi_r) - beta_t).abs() < 1e-9);
        prop_assert!((ri_of_xi(beta_r, beta_f, xi_f) - beta_t).abs() < 1e-9);

        if delta > 1e-6 {
            let s_r = (1.0 + xi_r * xi_r).sqrt();
            let s_f = (1.0 + xi_f * xi_f).sqrt();
            let oracle_f = (s_f - s_r) / (xi_f - xi_r);
            let oracle_r = (s_r * xi_f - s_f * xi_r) / (xi_f - xi_r);
            prop_assert!((k.kappa_f - oracle_f).abs() <= 1e-9 * (1.0 + oracle_f.abs()));
            prop_assert!((k.kappa_r - oracle_r).abs() <= 1e-7 * (1.0 + oracle_r.abs()));
        }
    }

    #[test]
    fn bounds_hold_for_random_pri_and_sensitivities(
        pri in prop::collection::vec(0.5..6.0f64, 1..7),
        raw_alpha in prop::collection::vec(0.0..1.0f64, 7),
    ) {
        let n = pri.len();
        let mut alpha: Vec<f64> = raw_alpha[..n].to_vec();
        let norm = alpha.iter().map(|a| a * a).sum::<f64>().sqrt();
        prop_assume!(norm > 1e-6);
        for a in &mut alpha {
            *a /= norm;
        }
        let beta: f64 = pri.iter().zip(&alpha).map(|(b, a)| b * a).sum();
        let (beta_max, beta_min) = ri_bounds(&pri).unwrap();
        prop_assert!(beta >= beta_min - 1e-12);
        prop_assert!(beta <= beta_max + 1e-12);
    }
}

// ---------------------------------------------------------------------------
// Homogenization identities on random monomials
// ---------------------------------------------------------------------------

struct Monomial {
    coeff: f64,
    exponents: Vec<(String, f64)>,
}

impl EffectModel for Monomial {
    fn variables(&self) -> Vec<String> {
        self.exponents.iter().map(|(n, _)| n.clone()).collect()
    }
    fn eval(&self, values: &VarMap) -> Result<f64, ModelError> {
        let mut e = self.coeff;
        for (name, a) in &self.exponents {
            let v = values
                .get(name)
                .copied()
                .ok_or_else(|| ModelError::UnboundVariable(name.clone()))?;
            e *= v.powf(*a);
        }
        Ok(e)
    }
}

proptest! {
    #[test]
    fn monomial_dh_equals_exponent_sum_and_psf_identity(
        coeff in 0.1..10.0f64,
        exps in prop::collection::vec(-3.0..3.0f64, 1..5),
        values in prop::collection::vec(0.2..5.0f64, 5),
        psfs_raw in prop::collection::vec(1.0..2.0f64, 5),
    ) {
        let model = Monomial {
            coeff,
            exponents: exps.iter().enumerate().map(|(i, a)| (format!("v{i}"), *a)).collect(),
        };
        let point_values: VarMap =
            exps.iter().enumerate().map(|(i, _)| (format!("v{i}"), values[i])).collect();
        let point = DesignPoint::new(&model, point_values).unwrap();
        let settings = DiffSettings::default();

        // DH identity: the measured DH is the exponent sum, and the radial
        // cross-check inside dh_at must hold.
        let n_e = dh_at(&model, &point, &settings).unwrap();
        let expected: f64 = exps.iter().sum();
        prop_assert!((n_e - expected).abs() < 1e-7, "dh {n_e} vs {expected}");

        // PSF propagation identity: gamma_eq^n_E = gamma_E.
        let pdh = pdh_map(&model, &point, &settings).unwrap();
        let psfs: VarMap =
            exps.iter().enumerate().map(|(i, _)| (format!("v{i}"), psfs_raw[i])).collect();
        if n_e.abs() > 0.05 {
            let gamma_e = psf_effect(&pdh, &psfs).unwrap();
            let gamma_eq = equivalent_psf(&pdh, &psfs).unwrap();
            prop_assert!(
                (gamma_eq.powf(n_e) - gamma_e).abs() <= 1e-9 * gamma_e,
                "gamma_eq^n = {} vs gamma_E = {gamma_e}",
                gamma_eq.powf(n_e)
            );
        }
    }
}
