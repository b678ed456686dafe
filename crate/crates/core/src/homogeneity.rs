//! The homogenization engine.
//!
//! A nonlinear positive effect `E(F)` is homogenized at a design point by
//! measuring its log-log slopes there: the partial degree of homogeneity
//! (PDH) of variable `i` is `n_i = (F_i/E) dE/dF_i`, the degree of
//! homogeneity (DH) is their sum, and the relative PDHs `v_i = n_i / n_E`
//! weight the equivalent safety factor. Partial safety factors propagate
//! through the PDHs as `gamma_E = prod gamma_i^{n_i}`.
//!
//! Models are treated as black-box evaluators; all derivatives are central
//! differences in log-space, where the PDH is a plain slope and steep
//! responses cannot cause catastrophic cancellation. Built-in models carry
//! closed forms, but those are used only to cross-validate this engine.

use std::collections::BTreeMap;

use crate::{EffectModel, ModelError, VarMap};

/// PDH (or RPDH, or PSF) values keyed by variable name.
pub type PdhMap = BTreeMap<String, f64>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum HomogeneityError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("effect is not positive at probe point {probe}: E = {value}")]
    NonPositiveEffect { probe: String, value: f64 },
    #[error("design-point value for `{name}` must be positive, got {value}")]
    NonPositiveValue { name: String, value: f64 },
    #[error(
        "per-variable and radial DH estimates disagree: sum = {sum}, radial = {radial} \
         (tolerance {tol}); the model may be too rough for the step size"
    )]
    RadialCrossCheck { sum: f64, radial: f64, tol: f64 },
    #[error("RPDH undefined: DH = {0} (effect is stationary under uniform scaling)")]
    UndefinedRpdh(f64),
    #[error("equivalent PSF undefined: DH = 0")]
    UndefinedEquivalent,
    #[error("ratio estimate indeterminate: PSF of `{0}` equals 1")]
    IndeterminateRatio(String),
    #[error("missing PSF for variable `{0}`")]
    MissingPsf(String),
    #[error("PSF for `{name}` must be positive, got {value}")]
    InvalidPsf { name: String, value: f64 },
    #[error("invalid settings: {0}")]
    InvalidSettings(String),
}

/// Finite-difference policy for the engine.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiffSettings {
    /// Relative step of the central first-difference stencils (log-space).
    pub step: f64,
    /// One extra Richardson extrapolation level on first derivatives.
    pub richardson: bool,
    /// Relative step of the second-difference stencils for the remainder
    /// matrix; larger than `step` to keep cancellation noise down.
    pub hessian_step: f64,
    /// Position `c` in (0, 1) of the intermediate point used by the
    /// remainder matrix. The Lagrange form guarantees a valid midpoint
    /// exists somewhere in (0, 1) but not where.
    pub midpoint_c: f64,
}

impl Default for DiffSettings {
    fn default() -> Self {
        Self { step: 1e-4, richardson: false, hessian_step: 1e-3, midpoint_c: 0.5 }
    }
}

impl DiffSettings {
    pub fn with_step(step: f64) -> Self {
        Self { step, ..Self::default() }
    }

    fn validate(&self) -> Result<(), HomogeneityError> {
        if !(self.step > 0.0 && self.step.is_finite()) {
            return Err(HomogeneityError::InvalidSettings(format!(
                "step must be positive and finite, got {}",
                self.step
            )));
        }
        if !(self.hessian_step > 0.0 && self.hessian_step.is_finite()) {
            return Err(HomogeneityError::InvalidSettings(format!(
                "hessian_step must be positive and finite, got {}",
                self.hessian_step
            )));
        }
        if !(self.midpoint_c > 0.0 && self.midpoint_c < 1.0) {
            return Err(HomogeneityError::InvalidSettings(format!(
                "midpoint_c must lie in (0, 1), got {}",
                self.midpoint_c
            )));
        }
        Ok(())
    }
}

/// A validated design point: strictly positive variable values plus the
/// cached (positive) effect there.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignPoint {
    values: VarMap,
    effect: f64,
}

impl DesignPoint {
    pub fn new(model: &dyn EffectModel, values: VarMap) -> Result<Self, HomogeneityError> {
        for (name, v) in &values {
            if !(*v > 0.0 && v.is_finite()) {
                return Err(HomogeneityError::NonPositiveValue { name: name.clone(), value: *v });
            }
        }
        let effect = ln_effect(model, &values)?.exp();
        Ok(Self { values, effect })
    }

    pub fn values(&self) -> &VarMap {
        &self.values
    }

    pub fn effect(&self) -> f64 {
        self.effect
    }
}

/// Full homogenization result at one design point.
#[derive(Debug, Clone, PartialEq)]
pub struct HomogeneityReport {
    /// Partial degree of homogeneity per variable.
    pub pdh: PdhMap,
    /// Degree of homogeneity (sum of the PDHs, radially cross-checked).
    pub dh: f64,
    /// Relative partial degrees, summing to 1.
    pub rpdh: PdhMap,
    /// PSF of the effect, `prod gamma_i^{n_i}`.
    pub gamma_effect: f64,
    /// Equivalent PSF, `prod gamma_i^{v_i}`.
    pub gamma_equivalent: f64,
    /// Frobenius norm of the homogenization remainder matrix at the design
    /// point; 0 signals exact homogeneity.
    pub remainder_norm: f64,
}

fn ln_effect(model: &dyn EffectModel, values: &VarMap) -> Result<f64, HomogeneityError> {
    let e = model.eval(values)?;
    if !(e > 0.0 && e.is_finite()) {
        return Err(HomogeneityError::NonPositiveEffect {
            probe: format!("{values:?}"),
            value: e,
        });
    }
    Ok(e.ln())
}

/// Central log-log slope along one variable (`Some(name)`) or along the
/// radial direction scaling every variable together (`None`).
fn log_slope(
    model: &dyn EffectModel,
    base: &VarMap,
    var: Option<&str>,
    step: f64,
) -> Result<f64, HomogeneityError> {
    let scale = |factor: f64| -> VarMap {
        let mut probe = base.clone();
        match var {
            Some(name) => {
                if let Some(v) = probe.get_mut(name) {
                    *v *= factor;
                }
            }
            None => {
                for v in probe.values_mut() {
                    *v *= factor;
                }
            }
        }
        probe
    };
    let up = ln_effect(model, &scale(step.exp()))?;
    let down = ln_effect(model, &scale((-step).exp()))?;
    Ok((up - down) / (2.0 * step))
}

fn slope_with_policy(
    model: &dyn EffectModel,
    base: &VarMap,
    var: Option<&str>,
    settings: &DiffSettings,
) -> Result<f64, HomogeneityError> {
    let d1 = log_slope(model, base, var, settings.step)?;
    if settings.richardson {
        let d2 = log_slope(model, base, var, settings.step / 2.0)?;
        Ok((4.0 * d2 - d1) / 3.0)
    } else {
        Ok(d1)
    }
}

/// Partial degree of homogeneity of `var` at the design point.
pub fn pdh_at(
    model: &dyn EffectModel,
    point: &DesignPoint,
    var: &str,
    settings: &DiffSettings,
) -> Result<f64, HomogeneityError> {
    settings.validate()?;
    if !point.values.contains_key(var) {
        return Err(ModelError::UnboundVariable(var.to_string()).into());
    }
    slope_with_policy(model, &point.values, Some(var), settings)
}

/// PDHs of every design-point variable. Values whose magnitude falls below
/// 1e-12 are reported as exactly 0: such a variable does not influence
/// structural safety, and the rounding keeps the RPDH normalization stable.
pub fn pdh_map(
    model: &dyn EffectModel,
    point: &DesignPoint,
    settings: &DiffSettings,
) -> Result<PdhMap, HomogeneityError> {
    settings.validate()?;
    let mut out = PdhMap::new();
    for name in point.values.keys() {
        let mut n = slope_with_policy(model, &point.values, Some(name), settings)?;
        if n.abs() < 1e-12 {
            n = 0.0;
        }
        out.insert(name.clone(), n);
    }
    Ok(out)
}

/// Radial DH estimator: log-log slope under uniform scaling of all
/// variables.
pub fn radial_dh(
    model: &dyn EffectModel,
    point: &DesignPoint,
    settings: &DiffSettings,
) -> Result<f64, HomogeneityError> {
    settings.validate()?;
    slope_with_policy(model, &point.values, None, settings)
}

fn check_radial(sum: f64, radial: f64, step: f64) -> Result<(), HomogeneityError> {
    let tol = (50.0 * step * step * (1.0 + sum.abs())).max(1e-9);
    if (sum - radial).abs() > tol {
        return Err(HomogeneityError::RadialCrossCheck { sum, radial, tol });
    }
    Ok(())
}

/// Degree of homogeneity at the design point: the sum of the PDHs,
/// cross-checked against the independent radial estimator. The two stencils
/// agree to the order of the truncation error; a larger gap means the model
/// is too rough for the step and the result cannot be trusted.
pub fn dh_at(
    model: &dyn EffectModel,
    point: &DesignPoint,
    settings: &DiffSettings,
) -> Result<f64, HomogeneityError> {
    let pdh = pdh_map(model, point, settings)?;
    let sum: f64 = pdh.values().sum();
    let radial = radial_dh(model, point, settings)?;
    check_radial(sum, radial, settings.step)?;
    Ok(sum)
}

/// Relative partial degrees of homogeneity, `v_i = n_i / n_E`.
pub fn rpdh(pdh: &PdhMap, dh: f64) -> Result<PdhMap, HomogeneityError> {
    if dh == 0.0 {
        return Err(HomogeneityError::UndefinedRpdh(dh));
    }
    Ok(pdh.iter().map(|(k, n)| (k.clone(), n / dh)).collect())
}

/// Secant PDH estimate from characteristic values and PSFs: the log-ratio
/// of the effect at the full design point to the effect with variable `var`
/// alone reset to its characteristic value, divided by `ln gamma_var`.
/// With a single action this is the plain two-point estimate
/// `ln[E(gamma F_k)/E(F_k)] / ln gamma`.
pub fn pdh_ratio_estimate(
    model: &dyn EffectModel,
    characteristic_values: &VarMap,
    psfs: &PdhMap,
    var: &str,
) -> Result<f64, HomogeneityError> {
    let gamma_var = *psfs.get(var).ok_or_else(|| HomogeneityError::MissingPsf(var.to_string()))?;
    validate_psf(var, gamma_var)?;
    if gamma_var == 1.0 {
        return Err(HomogeneityError::IndeterminateRatio(var.to_string()));
    }
    if !characteristic_values.contains_key(var) {
        return Err(ModelError::UnboundVariable(var.to_string()).into());
    }
    let mut design = VarMap::new();
    for (name, ck) in characteristic_values {
        let gamma =
            *psfs.get(name).ok_or_else(|| HomogeneityError::MissingPsf(name.clone()))?;
        validate_psf(name, gamma)?;
        design.insert(name.clone(), ck * gamma);
    }
    let numerator = ln_effect(model, &design)?;
    let mut denom_point = design.clone();
    denom_point.insert(var.to_string(), characteristic_values[var]);
    let denominator = ln_effect(model, &denom_point)?;
    Ok((numerator - denominator) / gamma_var.ln())
}

/// Secant DH estimate: `ln[E(gamma F)/E(F)] / ln gamma` with every variable
/// scaled by the same factor.
pub fn dh_ratio_estimate(
    model: &dyn EffectModel,
    values: &VarMap,
    gamma: f64,
) -> Result<f64, HomogeneityError> {
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(HomogeneityError::InvalidPsf { name: "gamma".to_string(), value: gamma });
    }
    if gamma == 1.0 {
        return Err(HomogeneityError::IndeterminateRatio("gamma".to_string()));
    }
    let scaled: VarMap = values.iter().map(|(k, v)| (k.clone(), v * gamma)).collect();
    let up = ln_effect(model, &scaled)?;
    let down = ln_effect(model, values)?;
    Ok((up - down) / gamma.ln())
}

/// The homogenized surrogate `E~(F) = E_d * prod (F_i/F_di)^{n_i}`:
/// anchored at the design point and globally homogeneous of degree
/// `sum n_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct Surrogate {
    anchor: VarMap,
    effect_at_anchor: f64,
    exponents: PdhMap,
}

impl Surrogate {
    pub fn exponents(&self) -> &PdhMap {
        &self.exponents
    }

    pub fn degree(&self) -> f64 {
        self.exponents.values().sum()
    }
}

impl EffectModel for Surrogate {
    fn variables(&self) -> Vec<String> {
        self.exponents.keys().cloned().collect()
    }

    fn eval(&self, values: &VarMap) -> Result<f64, ModelError> {
        let mut ln_e = self.effect_at_anchor.ln();
        for (name, n) in &self.exponents {
            let v = values
                .get(name)
                .copied()
                .ok_or_else(|| ModelError::UnboundVariable(name.clone()))?;
            if !(v > 0.0) {
                return Err(ModelError::Domain {
                    model: "surrogate".to_string(),
                    detail: format!("variable `{name}` must be positive, got {v}"),
                });
            }
            ln_e += n * (v / self.anchor[name]).ln();
        }
        let e = ln_e.exp();
        if e.is_finite() {
            Ok(e)
        } else {
            Err(ModelError::NonFinite { expr: "surrogate".to_string() })
        }
    }
}

/// Build the homogenized surrogate for a measured PDH map.
pub fn homogenized_surrogate(point: &DesignPoint, pdh: &PdhMap) -> Surrogate {
    Surrogate {
        anchor: point.values.clone(),
        effect_at_anchor: point.effect,
        exponents: pdh.clone(),
    }
}

/// Log-space Hessian of `ln E` as a function of `ln F`, evaluated at `at`,
/// by central second differences.
///
/// This matrix is exactly the homogenization remainder matrix
/// `H_ij = n_{F_i F_j} + n_i (delta_ij - n_j)`: expanding the log-space
/// second derivative by the chain rule reproduces that combination of
/// normalized x-space derivatives term by term.
pub fn remainder_matrix(
    model: &dyn EffectModel,
    at: &VarMap,
    settings: &DiffSettings,
) -> Result<Vec<Vec<f64>>, HomogeneityError> {
    settings.validate()?;
    let s = settings.hessian_step;
    let names: Vec<&String> = at.keys().collect();
    let n = names.len();
    let probe = |shifts: &[(usize, f64)]| -> Result<f64, HomogeneityError> {
        let mut p = at.clone();
        for (idx, k) in shifts {
            *p.get_mut(names[*idx]).unwrap() *= (k * s).exp();
        }
        ln_effect(model, &p)
    };
    let center = probe(&[])?;
    let mut h = vec![vec![0.0; n]; n];
    for i in 0..n {
        let up = probe(&[(i, 1.0)])?;
        let down = probe(&[(i, -1.0)])?;
        h[i][i] = (up - 2.0 * center + down) / (s * s);
        for j in (i + 1)..n {
            let pp = probe(&[(i, 1.0), (j, 1.0)])?;
            let pm = probe(&[(i, 1.0), (j, -1.0)])?;
            let mp = probe(&[(i, -1.0), (j, 1.0)])?;
            let mm = probe(&[(i, -1.0), (j, -1.0)])?;
            let hij = (pp - pm - mp + mm) / (4.0 * s * s);
            h[i][j] = hij;
            h[j][i] = hij;
        }
    }
    Ok(h)
}

/// Frobenius norm of the remainder matrix at the Lagrange intermediate
/// point `F_m = F_d (target/F_d)^c` between the design point and `target`.
/// With `target` equal to the design point the matrix is evaluated at the
/// design point itself and the norm measures local homogenization quality:
/// zero for exactly homogeneous models.
pub fn remainder_metric(
    model: &dyn EffectModel,
    point: &DesignPoint,
    target: &VarMap,
    settings: &DiffSettings,
) -> Result<f64, HomogeneityError> {
    settings.validate()?;
    let c = settings.midpoint_c;
    let mut mid = VarMap::new();
    for (name, fd) in &point.values {
        let ft = target.get(name).copied().unwrap_or(*fd);
        if !(ft > 0.0) {
            return Err(HomogeneityError::NonPositiveValue { name: name.clone(), value: ft });
        }
        mid.insert(name.clone(), fd * (ft / fd).powf(c));
    }
    let h = remainder_matrix(model, &mid, settings)?;
    let sum_sq: f64 = h.iter().flatten().map(|x| x * x).sum();
    Ok(sum_sq.sqrt())
}

fn validate_psf(name: &str, gamma: f64) -> Result<(), HomogeneityError> {
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(HomogeneityError::InvalidPsf { name: name.to_string(), value: gamma });
    }
    Ok(())
}

/// PSF of the effect: `gamma_E = prod gamma_i^{n_i}`. The same formula
/// serves resistance models with their parameter PSFs.
pub fn psf_effect(pdh: &PdhMap, psfs: &PdhMap) -> Result<f64, HomogeneityError> {
    let mut ln_gamma = 0.0;
    for (name, n) in pdh {
        let gamma = *psfs.get(name).ok_or_else(|| HomogeneityError::MissingPsf(name.clone()))?;
        validate_psf(name, gamma)?;
        ln_gamma += n * gamma.ln();
    }
    Ok(ln_gamma.exp())
}

/// Equivalent PSF: the single factor on all variables that reproduces the
/// combined effect factor, `gamma_eq = prod gamma_i^{v_i}`, satisfying
/// `gamma_eq^{n_E} = gamma_E`.
pub fn equivalent_psf(pdh: &PdhMap, psfs: &PdhMap) -> Result<f64, HomogeneityError> {
    let n_e: f64 = pdh.values().sum();
    if n_e == 0.0 {
        return Err(HomogeneityError::UndefinedEquivalent);
    }
    let v = rpdh(pdh, n_e).expect("n_e checked nonzero");
    psf_effect(&v, psfs)
}

/// One-stop homogenization: PDHs, DH (radially cross-checked), RPDHs, the
/// propagated and equivalent PSFs, and the remainder norm at the design
/// point.
pub fn analyze(
    model: &dyn EffectModel,
    point: &DesignPoint,
    psfs: &PdhMap,
    settings: &DiffSettings,
) -> Result<HomogeneityReport, HomogeneityError> {
    let pdh = pdh_map(model, point, settings)?;
    let dh: f64 = pdh.values().sum();
    let radial = radial_dh(model, point, settings)?;
    check_radial(dh, radial, settings.step)?;
    let rpdh = rpdh(&pdh, dh)?;
    let gamma_effect = psf_effect(&pdh, psfs)?;
    let gamma_equivalent = equivalent_psf(&pdh, psfs)?;
    let remainder_norm = remainder_metric(model, point, point.values(), settings)?;
    Ok(HomogeneityReport { pdh, dh, rpdh, gamma_effect, gamma_equivalent, remainder_norm })
}
