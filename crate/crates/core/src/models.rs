//! Built-in nonlinear structural models with closed-form effects and
//! closed-form degrees of homogeneity.
//!
//! These serve double duty: as ready-to-use models in the CLI and as ground
//! truth for the generic finite-difference homogenization engine. Every
//! model's effect is positive on its declared domain; domain violations are
//! reported as errors rather than infinities because the downstream
//! log-space machinery needs finite positive effects.
//!
//! Load ratios here are the models' own normalized actions (e.g. axial load
//! over Euler buckling load). They are distinct from the relative
//! sensitivity parameter used in the reliability module.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;

use crate::{EffectModel, ModelError, VarMap};

fn get(values: &VarMap, name: &str) -> Result<f64, ModelError> {
    values
        .get(name)
        .copied()
        .ok_or_else(|| ModelError::UnboundVariable(name.to_string()))
}

fn domain(model: &str, detail: impl Into<String>) -> ModelError {
    ModelError::Domain { model: model.to_string(), detail: detail.into() }
}

// ---------------------------------------------------------------------------
// Flexural buckling of a column under eccentric compression
// ---------------------------------------------------------------------------

/// Relative mid-height bending moment of a simply supported column under an
/// eccentric compression load: `eta = xi / cos(alpha)`, `alpha = (pi/2) sqrt(xi)`,
/// with `xi` the load over the Euler buckling load. Strictly increasing on
/// (0, 1) with a pole at the buckling load.
pub fn column_effect(load_ratio: f64) -> Result<f64, ModelError> {
    if !(load_ratio > 0.0 && load_ratio < 1.0) {
        return Err(domain(
            "column",
            format!("load_ratio must lie in (0, 1), got {load_ratio} (buckling at 1)"),
        ));
    }
    let alpha = FRAC_PI_2 * load_ratio.sqrt();
    Ok(load_ratio / alpha.cos())
}

/// Degree of homogeneity of the column effect:
/// `n = 1 + (alpha/2) tan(alpha) > 1` for any compression level.
pub fn column_dh(load_ratio: f64) -> Result<f64, ModelError> {
    if !(load_ratio > 0.0 && load_ratio < 1.0) {
        return Err(domain(
            "column",
            format!("load_ratio must lie in (0, 1), got {load_ratio} (buckling at 1)"),
        ));
    }
    let alpha = FRAC_PI_2 * load_ratio.sqrt();
    Ok(1.0 + 0.5 * alpha * alpha.tan())
}

// ---------------------------------------------------------------------------
// Bending under eccentric tension
// ---------------------------------------------------------------------------

/// Same member as [`column_effect`] but with a tension load:
/// `eta = xi / cosh(alpha)`. The effect rises to a maximum of about 0.431
/// and then decreases; the maximum sits where the degree of homogeneity
/// crosses zero.
pub fn tension_effect(load_ratio: f64) -> Result<f64, ModelError> {
    if !(load_ratio > 0.0) {
        return Err(domain("tension", format!("load_ratio must be positive, got {load_ratio}")));
    }
    let alpha = FRAC_PI_2 * load_ratio.sqrt();
    Ok(load_ratio / alpha.cosh())
}

/// Degree of homogeneity of the tension effect:
/// `n = 1 - (alpha/2) tanh(alpha) < 1`, negative on the descending branch.
pub fn tension_dh(load_ratio: f64) -> Result<f64, ModelError> {
    if !(load_ratio > 0.0) {
        return Err(domain("tension", format!("load_ratio must be positive, got {load_ratio}")));
    }
    let alpha = FRAC_PI_2 * load_ratio.sqrt();
    Ok(1.0 - 0.5 * alpha * alpha.tanh())
}

// ---------------------------------------------------------------------------
// Taut cable with a transversal midspan load
// ---------------------------------------------------------------------------
//
// Cable of axial stiffness EA and length 2l between fixed supports, no
// pretension, point load P at midspan. With u the midspan sag over l and
// s = sqrt(1 + u^2), large-deformation equilibrium gives
//
//   load_ratio = P/EA = 2u(s - 1)/s,    effect = N/EA = s - 1.
//
// Both are evaluated in cancellation-free form (s - 1 = u^2/(1 + s)).

fn cable_load_of_sag(u: f64) -> f64 {
    let s = u.mul_add(u, 1.0).sqrt();
    2.0 * u * u * u / (s * (1.0 + s))
}

/// Solve the sag ratio `u` for a given load ratio by monotone bisection to
/// 1e-12 relative accuracy.
fn cable_sag(load_ratio: f64) -> Result<f64, ModelError> {
    let mut hi = 1.0f64;
    let mut grow = 0;
    while cable_load_of_sag(hi) < load_ratio {
        hi *= 2.0;
        grow += 1;
        if grow > 1100 {
            return Err(ModelError::Internal(format!(
                "cable sag bracket failed for load_ratio = {load_ratio}"
            )));
        }
    }
    let mut lo = 0.0f64;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if cable_load_of_sag(mid) < load_ratio {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-12 * hi {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Cable tension ratio `N/EA` as a function of the load ratio `P/EA`.
pub fn cable_effect(load_ratio: f64) -> Result<f64, ModelError> {
    if !(load_ratio > 0.0) {
        return Err(domain("cable", format!("load_ratio must be positive, got {load_ratio}")));
    }
    let u = cable_sag(load_ratio)?;
    let s = u.mul_add(u, 1.0).sqrt();
    Ok(u * u / (1.0 + s))
}

/// Degree of homogeneity of the cable effect, by the chain rule through the
/// sag parameterization. Confined to [2/3, 1): 2/3 in the small-load limit,
/// approaching 1 from below as the cable straightens.
pub fn cable_dh(load_ratio: f64) -> Result<f64, ModelError> {
    if !(load_ratio > 0.0) {
        return Err(domain("cable", format!("load_ratio must be positive, got {load_ratio}")));
    }
    let u = cable_sag(load_ratio)?;
    let s = u.mul_add(u, 1.0).sqrt();
    // d(effect)/du = u/s; d(load)/du = 2(s^3 - 1)/s^3.
    let effect = u * u / (1.0 + s);
    let d_effect = u / s;
    let d_load = 2.0 * (s * s * s - 1.0) / (s * s * s);
    Ok(d_effect * load_ratio / (d_load * effect))
}

// ---------------------------------------------------------------------------
// Beam with a transversal load G and a normal force P
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BeamVariant {
    Compression,
    Tension,
}

/// Homogeneity characteristics of the beam with two actions at one load
/// ratio: the normalized effect `eta = M_m/M_0`, both partial degrees of
/// homogeneity, their sum, and the relative partial degrees.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamCharacteristics {
    pub effect: f64,
    pub n_g: f64,
    pub n_p: f64,
    pub n_e: f64,
    pub v_g: f64,
    pub v_p: f64,
}

/// Closed-form homogeneity characteristics for the beam.
///
/// Compression: `eta = tan(alpha)/alpha`, `n_P = (2a/sin 2a - 1)/2`,
/// `n_E = (1 + 2a/sin 2a)/2`; the transversal load is always linear
/// (`n_G = 1`). Tension replaces the circular functions by hyperbolic ones.
pub fn beam_two_actions(load_ratio: f64, variant: BeamVariant) -> Result<BeamCharacteristics, ModelError> {
    let alpha = match variant {
        BeamVariant::Compression => {
            if !(load_ratio > 0.0 && load_ratio < 1.0) {
                return Err(domain(
                    "beam_compression",
                    format!("load_ratio must lie in (0, 1), got {load_ratio}"),
                ));
            }
            FRAC_PI_2 * load_ratio.sqrt()
        }
        BeamVariant::Tension => {
            if !(load_ratio > 0.0) {
                return Err(domain(
                    "beam_tension",
                    format!("load_ratio must be positive, got {load_ratio}"),
                ));
            }
            FRAC_PI_2 * load_ratio.sqrt()
        }
    };
    let two_alpha = 2.0 * alpha;
    let (effect, sin2a) = match variant {
        BeamVariant::Compression => (alpha.tan() / alpha, two_alpha.sin()),
        BeamVariant::Tension => (alpha.tanh() / alpha, two_alpha.sinh()),
    };
    let ratio = two_alpha / sin2a;
    let n_p = 0.5 * (ratio - 1.0);
    let n_e = 0.5 * (1.0 + ratio);
    let v_g = 2.0 * sin2a / (two_alpha + sin2a);
    let v_p = (two_alpha - sin2a) / (two_alpha + sin2a);
    Ok(BeamCharacteristics { effect, n_g: 1.0, n_p, n_e, v_g, v_p })
}

// ---------------------------------------------------------------------------
// Masonry shear wall
// ---------------------------------------------------------------------------

/// Homogeneity characteristics of the shear wall at one pair of actions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WallCharacteristics {
    pub effect: f64,
    pub n_f1: f64,
    pub n_f2: f64,
    pub n_e: f64,
    pub v_f1: f64,
    pub v_f2: f64,
}

/// Base stress resultant of a cracked masonry wall under a vertical action
/// `F1` and a horizontal action `F2`, rectangular stress block:
/// `E = F1^2 / (F1 - 2 a F2)`. Homogeneous of degree exactly 1 even though
/// each action alone acts nonlinearly.
pub fn shear_wall(f1: f64, f2: f64, a: f64) -> Result<WallCharacteristics, ModelError> {
    if !(f1 > 0.0) || !(f2 >= 0.0) || !(a > 0.0) {
        return Err(domain(
            "shear_wall",
            format!("requires F1 > 0, F2 >= 0, a > 0; got F1 = {f1}, F2 = {f2}, a = {a}"),
        ));
    }
    let web = f1 - 2.0 * a * f2;
    if !(web > 0.0) {
        return Err(domain(
            "shear_wall",
            format!("overturning: F1 - 2*a*F2 = {web} <= 0 (stress block vanishes)"),
        ));
    }
    let effect = f1 * f1 / web;
    let n_f1 = (f1 - 4.0 * a * f2) / web;
    let n_f2 = 2.0 * a * f2 / web;
    Ok(WallCharacteristics { effect, n_f1, n_f2, n_e: 1.0, v_f1: n_f1, v_f2: n_f2 })
}

// ---------------------------------------------------------------------------
// EffectModel wrappers
// ---------------------------------------------------------------------------

/// Column buckling model over the single variable `load_ratio`.
#[derive(Debug, Clone, Copy)]
pub struct ColumnBuckling;

impl EffectModel for ColumnBuckling {
    fn variables(&self) -> Vec<String> {
        vec!["load_ratio".to_string()]
    }
    fn eval(&self, values: &VarMap) -> Result<f64, ModelError> {
        column_effect(get(values, "load_ratio")?)
    }
    fn in_domain(&self, values: &VarMap) -> bool {
        matches!(get(values, "load_ratio"), Ok(x) if x > 0.0 && x < 1.0)
    }
}

/// Eccentric tension model over the single variable `load_ratio`.
#[derive(Debug, Clone, Copy)]
pub struct EccentricTension;

impl EffectModel for EccentricTension {
    fn variables(&self) -> Vec<String> {
        vec!["load_ratio".to_string()]
    }
    fn eval(&self, values: &VarMap) -> Result<f64, ModelError> {
        tension_effect(get(values, "load_ratio")?)
    }
    fn in_domain(&self, values: &VarMap) -> bool {
        matches!(get(values, "load_ratio"), Ok(x) if x > 0.0)
    }
}

/// Taut-cable model over the single variable `load_ratio`.
#[derive(Debug, Clone, Copy)]
pub struct CableLateral;

impl EffectModel for CableLateral {
    fn variables(&self) -> Vec<String> {
        vec!["load_ratio".to_string()]
    }
    fn eval(&self, values: &VarMap) -> Result<f64, ModelError> {
        cable_effect(get(values, "load_ratio")?)
    }
    fn in_domain(&self, values: &VarMap) -> bool {
        matches!(get(values, "load_ratio"), Ok(x) if x > 0.0)
    }
}

/// Beam with two actions: transversal load `G` applied first, then a normal
/// force `P` (in units of the Euler buckling load). The mid-span moment is
/// `G * eta(P)` up to a constant factor.
#[derive(Debug, Clone, Copy)]
pub struct BeamTwoActions {
    pub variant: BeamVariant,
}

impl EffectModel for BeamTwoActions {
    fn variables(&self) -> Vec<String> {
        vec!["G".to_string(), "P".to_string()]
    }
    fn eval(&self, values: &VarMap) -> Result<f64, ModelError> {
        let g = get(values, "G")?;
        let p = get(values, "P")?;
        if !(g > 0.0) {
            return Err(domain("beam", format!("G must be positive, got {g}")));
        }
        Ok(g * beam_two_actions(p, self.variant)?.effect)
    }
    fn in_domain(&self, values: &VarMap) -> bool {
        let g = get(values, "G");
        let p = get(values, "P");
        match (g, p, self.variant) {
            (Ok(g), Ok(p), BeamVariant::Compression) => g > 0.0 && p > 0.0 && p < 1.0,
            (Ok(g), Ok(p), BeamVariant::Tension) => g > 0.0 && p > 0.0,
            _ => false,
        }
    }
}

/// Masonry shear wall over `F1` (vertical) and `F2` (horizontal), with the
/// geometry ratio `a` as a fixed parameter.
#[derive(Debug, Clone, Copy)]
pub struct MasonryShearWall {
    pub a: f64,
}

impl EffectModel for MasonryShearWall {
    fn variables(&self) -> Vec<String> {
        vec!["F1".to_string(), "F2".to_string()]
    }
    fn eval(&self, values: &VarMap) -> Result<f64, ModelError> {
        Ok(shear_wall(get(values, "F1")?, get(values, "F2")?, self.a)?.effect)
    }
    fn in_domain(&self, values: &VarMap) -> bool {
        match (get(values, "F1"), get(values, "F2")) {
            (Ok(f1), Ok(f2)) => f1 > 0.0 && f2 >= 0.0 && self.a > 0.0 && f1 - 2.0 * self.a * f2 > 0.0,
            _ => false,
        }
    }
}

// ---------------------------------------------------------------------------
// Registry
// ---------------------------------------------------------------------------

/// Identifiers for the built-in models as used in CLI configs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuiltinId {
    ColumnBuckling,
    EccentricTension,
    CableLateral,
    BeamTwoActionsCompression,
    BeamTwoActionsTension,
    MasonryShearWall,
}

impl BuiltinId {
    pub const ALL: [BuiltinId; 6] = [
        BuiltinId::ColumnBuckling,
        BuiltinId::EccentricTension,
        BuiltinId::CableLateral,
        BuiltinId::BeamTwoActionsCompression,
        BuiltinId::BeamTwoActionsTension,
        BuiltinId::MasonryShearWall,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            BuiltinId::ColumnBuckling => "column",
            BuiltinId::EccentricTension => "tension",
            BuiltinId::CableLateral => "cable",
            BuiltinId::BeamTwoActionsCompression => "beam_compression",
            BuiltinId::BeamTwoActionsTension => "beam_tension",
            BuiltinId::MasonryShearWall => "shear_wall",
        }
    }
}

impl std::str::FromStr for BuiltinId {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        BuiltinId::ALL
            .iter()
            .copied()
            .find(|id| id.name() == s)
            .ok_or_else(|| ModelError::Domain {
                model: s.to_string(),
                detail: format!(
                    "unknown builtin model; expected one of {}",
                    BuiltinId::ALL.map(|id| id.name()).join(", ")
                ),
            })
    }
}

/// Instantiate a built-in model. `params` supplies model parameters
/// (currently only `a` for the shear wall).
pub fn builtin(id: BuiltinId, params: &BTreeMap<String, f64>) -> Result<Box<dyn EffectModel>, ModelError> {
    Ok(match id {
        BuiltinId::ColumnBuckling => Box::new(ColumnBuckling),
        BuiltinId::EccentricTension => Box::new(EccentricTension),
        BuiltinId::CableLateral => Box::new(CableLateral),
        BuiltinId::BeamTwoActionsCompression => {
            Box::new(BeamTwoActions { variant: BeamVariant::Compression })
        }
        BuiltinId::BeamTwoActionsTension => Box::new(BeamTwoActions { variant: BeamVariant::Tension }),
        BuiltinId::MasonryShearWall => {
            let a = params.get("a").copied().ok_or_else(|| ModelError::Domain {
                model: "shear_wall".to_string(),
                detail: "missing parameter `a` (geometry ratio)".to_string(),
            })?;
            if !(a > 0.0) {
                return Err(domain("shear_wall", format!("parameter a must be positive, got {a}")));
            }
            Box::new(MasonryShearWall { a })
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::var_map;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn column_effect_values_and_limits() {
        assert_abs_diff_eq!(column_effect(0.25).unwrap(), 0.35355339059327376, epsilon = 1e-14);
        // Linear limit: effect/load_ratio -> 1.
        let x = 1e-9;
        assert_abs_diff_eq!(column_effect(x).unwrap() / x, 1.0, epsilon = 1e-8);
        // Pole at the Euler load.
        assert!(column_effect(0.999).unwrap() > 100.0);
        assert!(column_effect(0.999).unwrap().is_finite());
        assert!(column_effect(1.0).is_err());
        assert!(column_effect(0.0).is_err());
        assert!(column_effect(-0.1).is_err());
    }

    #[test]
    fn column_effect_strictly_increasing() {
        let mut prev = 0.0;
        for i in 1..100 {
            let xi = i as f64 / 100.0;
            let e = column_effect(xi).unwrap();
            assert!(e > prev, "effect not increasing at xi = {xi}");
            prev = e;
        }
    }

    #[test]
    fn column_dh_values() {
        assert_abs_diff_eq!(column_dh(0.25).unwrap(), 1.3926990816987242, epsilon = 1e-14);
        assert_abs_diff_eq!(column_dh(1e-12).unwrap(), 1.0, epsilon = 1e-6);
        for i in 1..100 {
            let xi = i as f64 / 100.0;
            assert!(column_dh(xi).unwrap() > 1.0);
        }
    }

    #[test]
    fn tension_dh_root_and_peak() {
        // Bisection oracle for the root of the DH.
        let (mut lo, mut hi) = (1.0f64, 3.0f64);
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if tension_dh(mid).unwrap() > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let root = 0.5 * (lo + hi);
        assert_abs_diff_eq!(root, 1.7287913294002659, epsilon = 1e-6);
        assert_abs_diff_eq!(tension_effect(root).unwrap(), 0.4314029674937449, epsilon = 1e-9);
        // Descending branch.
        assert!(tension_dh(4.0).unwrap() < 0.0);
        // Linear limit.
        assert_abs_diff_eq!(tension_dh(1e-12).unwrap(), 1.0, epsilon = 1e-6);
        assert!(tension_dh(0.0).is_err());
    }

    #[test]
    fn tension_effect_peaks_at_dh_root() {
        let peak = tension_effect(1.7287913294002659).unwrap();
        for xi in [1.5, 1.6, 1.85, 2.0] {
            assert!(tension_effect(xi).unwrap() < peak);
        }
    }

    #[test]
    fn cable_parametric_point() {
        // u = 1 gives load_ratio = 2(sqrt(2)-1)/sqrt(2), effect = sqrt(2)-1.
        let lam = 0.585786437626905;
        assert_relative_eq!(cable_effect(lam).unwrap(), 0.41421356237309505, max_relative = 1e-9);
        assert_relative_eq!(cable_dh(lam).unwrap(), 0.7734590803390136, max_relative = 1e-9);
    }

    #[test]
    fn cable_dh_matches_sag_closed_form() {
        // Chain rule must reduce to s(s+1)/(s^2+s+1) with s = sqrt(1+u^2).
        for lam in [1e-5, 1e-3, 0.1, 0.5858, 2.0, 50.0] {
            let dh = cable_dh(lam).unwrap();
            let u = cable_sag(lam).unwrap();
            let s = (1.0 + u * u).sqrt();
            let closed = s * (s + 1.0) / (s * s + s + 1.0);
            assert_relative_eq!(dh, closed, max_relative = 1e-9);
        }
    }

    #[test]
    fn cable_dh_range() {
        assert_abs_diff_eq!(cable_dh(1e-6).unwrap(), 2.0 / 3.0, epsilon = 1e-4);
        assert!(cable_dh(1e6).unwrap() < 1.0);
        assert!(cable_dh(1e6).unwrap() > 0.999);
        for i in 0..=60 {
            let lam = 10f64.powf(-6.0 + i as f64 * 9.0 / 60.0);
            let n = cable_dh(lam).unwrap();
            assert!((2.0 / 3.0..1.0).contains(&n), "dh {n} out of range at {lam}");
        }
    }

    #[test]
    fn beam_compression_characteristics() {
        // n_P crosses 1 near load_ratio = 0.526.
        let c = beam_two_actions(0.52618269308896297, BeamVariant::Compression).unwrap();
        assert_abs_diff_eq!(c.n_p, 1.0, epsilon = 1e-10);
        assert_abs_diff_eq!(c.n_e, 2.0, epsilon = 1e-10);
        assert_abs_diff_eq!(c.v_g, 0.5, epsilon = 1e-10);
        assert_abs_diff_eq!(c.v_p, 0.5, epsilon = 1e-10);

        for i in 1..50 {
            let xi = i as f64 / 50.0;
            let c = beam_two_actions(xi, BeamVariant::Compression).unwrap();
            assert_eq!(c.n_g, 1.0);
            assert!(c.n_p > 0.0);
            assert!(c.n_e > 1.0);
            assert_abs_diff_eq!(c.n_e, c.n_g + c.n_p, epsilon = 1e-12);
            assert_abs_diff_eq!(c.v_g + c.v_p, 1.0, epsilon = 1e-12);
        }
        assert!(beam_two_actions(1.0, BeamVariant::Compression).is_err());
    }

    #[test]
    fn beam_tension_characteristics() {
        for i in 1..50 {
            let xi = i as f64 * 0.2;
            let c = beam_two_actions(xi, BeamVariant::Tension).unwrap();
            assert!(c.n_p < 0.0 && c.n_p > -0.5, "n_p = {} at xi = {xi}", c.n_p);
            assert!(c.n_e > 0.5 && c.n_e < 1.0, "n_e = {} at xi = {xi}", c.n_e);
            assert_abs_diff_eq!(c.n_e, c.n_g + c.n_p, epsilon = 1e-12);
            assert_abs_diff_eq!(c.v_g + c.v_p, 1.0, epsilon = 1e-12);
        }
        assert!(beam_two_actions(0.0, BeamVariant::Tension).is_err());
    }

    #[test]
    fn shear_wall_characteristics() {
        let w = shear_wall(10.0, 2.0, 0.5).unwrap();
        assert_eq!(w.effect, 12.5);
        assert_abs_diff_eq!(w.n_f1, 0.75, epsilon = 1e-14);
        assert_abs_diff_eq!(w.n_f2, 0.25, epsilon = 1e-14);
        assert_eq!(w.n_e, 1.0);

        // Pure axial case.
        let w = shear_wall(7.0, 0.0, 0.5).unwrap();
        assert_eq!(w.n_f1, 1.0);
        assert_eq!(w.n_f2, 0.0);
        assert_eq!(w.effect, 7.0);

        // PDHs always sum to 1.
        for (f1, f2, a) in [(10.0, 2.0, 0.5), (4.0, 1.0, 1.2), (100.0, 3.0, 0.9)] {
            let w = shear_wall(f1, f2, a).unwrap();
            assert_abs_diff_eq!(w.n_f1 + w.n_f2, 1.0, epsilon = 1e-12);
        }

        // Overturning.
        assert!(shear_wall(1.0, 2.0, 0.5).is_err());
        assert!(shear_wall(2.0, 2.0, 0.5).is_err());
    }

    #[test]
    fn effect_model_wrappers() {
        let wall = MasonryShearWall { a: 0.5 };
        let v = var_map([("F1", 10.0), ("F2", 2.0)]);
        assert_eq!(wall.eval(&v).unwrap(), 12.5);
        assert!(wall.in_domain(&v));
        assert!(!wall.in_domain(&var_map([("F1", 1.0), ("F2", 2.0)])));
        assert_eq!(wall.variables(), vec!["F1", "F2"]);

        let beam = BeamTwoActions { variant: BeamVariant::Compression };
        let v = var_map([("G", 2.0), ("P", 0.25)]);
        let eta = beam_two_actions(0.25, BeamVariant::Compression).unwrap().effect;
        assert_relative_eq!(beam.eval(&v).unwrap(), 2.0 * eta, max_relative = 1e-14);

        let col = ColumnBuckling;
        assert!(col.eval(&var_map([("load_ratio", 1.5)])).is_err());
        assert!(matches!(
            col.eval(&VarMap::new()),
            Err(ModelError::UnboundVariable(_))
        ));
    }

    #[test]
    fn builtin_registry() {
        use std::str::FromStr;
        assert_eq!(BuiltinId::from_str("column").unwrap(), BuiltinId::ColumnBuckling);
        assert_eq!(BuiltinId::from_str("shear_wall").unwrap(), BuiltinId::MasonryShearWall);
        assert!(BuiltinId::from_str("nope").is_err());

        let mut params = BTreeMap::new();
        assert!(builtin(BuiltinId::MasonryShearWall, &params).is_err());
        params.insert("a".to_string(), 0.5);
        let m = builtin(BuiltinId::MasonryShearWall, &params).unwrap();
        assert_eq!(m.eval(&var_map([("F1", 10.0), ("F2", 2.0)])).unwrap(), 12.5);
    }
}
