//! Reliability indexes assembled from degrees of homogeneity and
//! distribution statistics.
//!
//! The central objects are the nonlinearity-invariant partial reliability
//! indexes (PRIs): `beta_i` is the reliability index the system would have
//! if variable `i` alone dominated it. The PRI of a variable is the
//! standard-normal fractile of its design value under its own distribution,
//! oriented so that safer design values give larger values; for a lognormal
//! variable this reduces to the closed form `beta_i = k_i + ln(gamma_i)/Q_i`.
//!
//! From the PRIs and the sensitivity weights `q_i = n_i tau_i Q_i` the
//! reliability index is `beta = sum(alpha_i beta_i)` with `alpha = q/|q|`,
//! and two nonlinearity-invariant bounds follow: `beta_max = sqrt(sum
//! beta_i^2)` (Cauchy–Schwarz) and `beta_min = min(beta_i)`. Critical
//! partial safety factors are the PSFs that place each variable's design
//! value at the target-reliability fractile, which makes `beta >= beta_t`
//! for any nonlinearity.

use crate::dist::{self, DistError, DistKind, DistributionSpec};
use crate::homogeneity::{dh_at, DesignPoint, DiffSettings, HomogeneityError};
use crate::{EffectModel, VarMap};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ReliabilityError {
    #[error(transparent)]
    Dist(#[from] DistError),
    #[error(transparent)]
    Homogeneity(#[from] HomogeneityError),
    #[error("PSF of `{name}` must be >= 1 (design-value orientation handles favourability), got {value}")]
    InvalidPsf { name: String, value: f64 },
    #[error("model-error variable `{name}` must have PDH 1, got {pdh}")]
    ModelErrorPdh { name: String, pdh: f64 },
    #[error("variable `{name}` is degenerate: cov = 0 but PSF = {psf} != 1")]
    DegenerateVariable { name: String, psf: f64 },
    #[error("no variable carries sensitivity (all q_i = 0)")]
    NoSensitivity,
    #[error("empty PRI vector")]
    EmptyPri,
    #[error("target {beta_t} is not below the peak reliability index {beta_m}: no crossing")]
    NoCrossing { beta_t: f64, beta_m: f64 },
    #[error("formula breakdown: {0}")]
    FormulaBreakdown(String),
    #[error("no critical-PSF formula for a {status:?} {kind} variable")]
    UnsupportedCriticalPsf { kind: DistKind, status: Status },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Action,
    ResistanceParameter,
    ModelError,
}

/// Safety orientation of a variable: unfavourable means an increase reduces
/// safety. Design values follow this orientation: an unfavourable variable
/// is designed at `gamma * X_k` (upper characteristic value), a favourable
/// one at `X_k / gamma` (lower characteristic value), with `gamma >= 1` in
/// both cases. Codes that write favourable-action factors as numbers below
/// one are expressing the same design value as `1/gamma` here.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Favourable,
    Unfavourable,
}

impl Status {
    fn opposite(self) -> Status {
        match self {
            Status::Favourable => Status::Unfavourable,
            Status::Unfavourable => Status::Favourable,
        }
    }
}

/// One basic variable of the limit state: role, orientation, stochastic
/// model, partial safety factor, and its partial degree of homogeneity.
#[derive(Debug, Clone, PartialEq)]
pub struct BasicVariable {
    pub name: String,
    pub role: Role,
    pub status: Status,
    pub dist: DistributionSpec,
    pub psf: f64,
    pub pdh: f64,
}

impl BasicVariable {
    pub fn new(
        name: impl Into<String>,
        role: Role,
        status: Status,
        dist: DistributionSpec,
        psf: f64,
        pdh: f64,
    ) -> Result<Self, ReliabilityError> {
        let name = name.into();
        if !(psf >= 1.0 && psf.is_finite()) {
            return Err(ReliabilityError::InvalidPsf { name, value: psf });
        }
        if role == Role::ModelError && pdh != 1.0 {
            return Err(ReliabilityError::ModelErrorPdh { name, pdh });
        }
        if !pdh.is_finite() {
            return Err(ReliabilityError::InvalidArgument(format!(
                "PDH of `{name}` must be finite, got {pdh}"
            )));
        }
        Ok(Self { name, role, status, dist, psf, pdh })
    }

    /// Model-error variable: PDH is 1 by definition.
    pub fn model_error(
        name: impl Into<String>,
        status: Status,
        dist: DistributionSpec,
        psf: f64,
    ) -> Result<Self, ReliabilityError> {
        Self::new(name, Role::ModelError, status, dist, psf, 1.0)
    }

    /// Re-orients a variable whose measured PDH came out negative: the
    /// variable actually works in the opposite direction, so its status
    /// flips and the magnitude is kept.
    pub fn oriented(&self) -> BasicVariable {
        if self.pdh < 0.0 {
            BasicVariable { status: self.status.opposite(), pdh: -self.pdh, ..self.clone() }
        } else {
            self.clone()
        }
    }

    /// Characteristic value per the distribution's rule.
    pub fn characteristic_value(&self) -> Result<f64, ReliabilityError> {
        Ok(self.dist.characteristic_value()?)
    }

    /// Design value: `gamma * X_k` for unfavourable variables,
    /// `X_k / gamma` for favourable ones.
    pub fn design_value(&self) -> Result<f64, ReliabilityError> {
        let x_k = self.characteristic_value()?;
        Ok(match self.status {
            Status::Unfavourable => self.psf * x_k,
            Status::Favourable => x_k / self.psf,
        })
    }
}

/// Partial reliability index of one variable: the oriented standard-normal
/// fractile of its design value under its own distribution.
///
/// For a lognormal variable this is exactly `k_i + ln(gamma_i)/Q_i` with
/// `k_i` the (implied) characteristic fractile; for normal and Gumbel
/// variables it is the fractile of the design value in their own tails,
/// which is what makes the critical-PSF inverse relation exact for every
/// supported distribution.
pub fn pri(var: &BasicVariable) -> Result<f64, ReliabilityError> {
    let q = var.dist.log_sigma();
    if q == 0.0 {
        if var.psf != 1.0 {
            return Err(ReliabilityError::DegenerateVariable {
                name: var.name.clone(),
                psf: var.psf,
            });
        }
        // Limit of the closed form at gamma = 1: the characteristic
        // fractile itself. The variable carries no sensitivity, so this
        // never enters an assembled index.
        let stats = var.dist.log_space_stats()?;
        return Ok(match var.status {
            Status::Unfavourable => stats.k,
            Status::Favourable => -stats.k,
        });
    }
    let x_d = var.design_value()?;
    let z = var.dist.standard_fractile(x_d)?;
    Ok(match var.status {
        Status::Unfavourable => z,
        Status::Favourable => -z,
    })
}

/// Assembled reliability index with its decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct ReliabilityAssessment {
    /// Variables carrying sensitivity, in input order.
    pub names: Vec<String>,
    /// Reliability index `beta = pri . alpha`.
    pub beta: f64,
    /// Sensitivity contributions `q_i = n_i tau_i Q_i` (all non-negative
    /// after orientation).
    pub q: Vec<f64>,
    /// Normalized sensitivities, `|alpha| = 1`.
    pub alpha: Vec<f64>,
    /// Partial reliability indexes.
    pub pri: Vec<f64>,
    /// Non-lognormality degrees at the design values (1 for lognormal).
    pub tau: Vec<f64>,
    /// Upper bound `sqrt(sum beta_i^2)`.
    pub beta_max: f64,
    /// Lower bound `min(beta_i)`.
    pub beta_min: f64,
    /// Variables excluded for zero sensitivity (cov = 0 or PDH = 0).
    pub excluded: Vec<String>,
}

/// Upper and lower bounds of the reliability index from the PRI vector
/// alone: `(sqrt(sum beta_i^2), min(beta_i))`. Valid for non-negative
/// sensitivities and non-negative PRIs.
pub fn ri_bounds(pri: &[f64]) -> Result<(f64, f64), ReliabilityError> {
    if pri.is_empty() {
        return Err(ReliabilityError::EmptyPri);
    }
    let max = pri.iter().map(|b| b * b).sum::<f64>().sqrt();
    let min = pri.iter().copied().fold(f64::INFINITY, f64::min);
    Ok((max, min))
}

/// Assemble the reliability index of a set of basic variables.
///
/// Variables with a negative PDH are re-oriented first (status flipped,
/// magnitude kept). Variables without sensitivity (cov = 0 or PDH = 0) are
/// excluded from the index and the bounds — they cannot dominate the
/// system — and reported in `excluded`.
pub fn reliability_index(vars: &[BasicVariable]) -> Result<ReliabilityAssessment, ReliabilityError> {
    let mut names = Vec::new();
    let mut q = Vec::new();
    let mut pris = Vec::new();
    let mut taus = Vec::new();
    let mut excluded = Vec::new();

    for raw in vars {
        let var = raw.oriented();
        let q_ln = var.dist.log_sigma();
        if q_ln == 0.0 && var.psf != 1.0 {
            return Err(ReliabilityError::DegenerateVariable {
                name: var.name.clone(),
                psf: var.psf,
            });
        }
        if var.pdh == 0.0 || q_ln == 0.0 {
            excluded.push(var.name.clone());
            continue;
        }
        let tau = match var.dist.kind() {
            // Identity; avoids pointless cdf/quantile round-trips.
            DistKind::Lognormal => 1.0,
            _ => var.dist.tau_dhn(var.design_value()?)?,
        };
        names.push(var.name.clone());
        q.push(var.pdh * tau * q_ln);
        pris.push(pri(&var)?);
        taus.push(tau);
    }

    if names.is_empty() {
        return Err(ReliabilityError::NoSensitivity);
    }
    let norm = q.iter().map(|x| x * x).sum::<f64>().sqrt();
    let alpha: Vec<f64> = q.iter().map(|x| x / norm).collect();
    let beta = pris.iter().zip(&alpha).map(|(b, a)| b * a).sum::<f64>();
    let (beta_max, beta_min) = ri_bounds(&pris)?;
    Ok(ReliabilityAssessment {
        names,
        beta,
        q,
        alpha,
        pri: pris,
        tau: taus,
        beta_max,
        beta_min,
        excluded,
    })
}

// ---------------------------------------------------------------------------
// Reliability as a function of the relative sensitivity parameter (RSP)
// ---------------------------------------------------------------------------

/// Reliability index of a two-variable system as a function of the RSP
/// `xi = q_F/q_R`: `beta(xi) = (beta_R + xi beta_F)/sqrt(1 + xi^2)`.
/// Negative `xi` describes favourable actions.
pub fn ri_of_xi(beta_r: f64, beta_f: f64, xi: f64) -> f64 {
    (beta_r + xi * beta_f) / xi.mul_add(xi, 1.0).sqrt()
}

/// Location and value of the peak of `ri_of_xi`:
/// `xi_m = beta_F/beta_R`, `beta_m = sqrt(beta_R^2 + beta_F^2)`.
pub fn rsp_peak(beta_r: f64, beta_f: f64) -> (f64, f64) {
    (beta_f / beta_r, beta_r.hypot(beta_f))
}

/// Degree of homogeneity at which the peak occurs for a linear lognormal
/// resistance: `n = (beta_F/Q_F)/(beta_R/Q_R)`.
pub fn peak_dh(beta_r: f64, beta_f: f64, q_f: f64, q_r: f64) -> f64 {
    (beta_f / q_f) / (beta_r / q_r)
}

/// Three-variable surface with model uncertainty:
/// `beta(xi_F, xi_theta) = (beta_R + xi_F beta_F + xi_theta beta_theta) /
/// sqrt(1 + xi_F^2 + xi_theta^2)`. Its unique peak is
/// `sqrt(beta_R^2 + beta_F^2 + beta_theta^2)` at
/// `xi_F = beta_F/beta_R`, `xi_theta = beta_theta/beta_R`.
pub fn ri_of_xi_theta(beta_r: f64, beta_f: f64, beta_theta: f64, xi_f: f64, xi_theta: f64) -> f64 {
    (beta_r + xi_f * beta_f + xi_theta * beta_theta)
        / (1.0 + xi_f * xi_f + xi_theta * xi_theta).sqrt()
}

/// The RSP values at which `ri_of_xi` crosses a target.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TargetCrossings {
    /// Two genuine crossings bracketing the peak.
    Two { xi_r: f64, xi_f: f64 },
    /// A single genuine crossing (`beta_t = beta_F` degenerates the
    /// quadratic, or one algebraic root solves `beta = -beta_t` instead).
    Single { xi: f64 },
}

/// Solve `beta(xi) = beta_t` for the RSP.
///
/// The quadratic in `xi` is solved in closed form and each root is verified
/// by substitution; squaring introduces a spurious root whenever
/// `beta_t < beta_F`, which is filtered out here.
pub fn xi_at_target(
    beta_r: f64,
    beta_f: f64,
    beta_t: f64,
) -> Result<TargetCrossings, ReliabilityError> {
    let beta_m = beta_r.hypot(beta_f);
    if beta_t >= beta_m {
        return Err(ReliabilityError::NoCrossing { beta_t, beta_m });
    }
    let verify =
        |xi: f64| (ri_of_xi(beta_r, beta_f, xi) - beta_t).abs() <= 1e-9 * (1.0 + beta_t.abs());
    let denom = beta_t * beta_t - beta_f * beta_f;
    if denom.abs() <= 1e-9 * beta_t * beta_t {
        // beta_t = beta_F: the quadratic degenerates to a linear equation.
        let xi = (beta_t * beta_t - beta_r * beta_r) / (2.0 * beta_r * beta_f);
        return Ok(TargetCrossings::Single { xi });
    }
    let disc = beta_t * (beta_m * beta_m - beta_t * beta_t).sqrt();
    let lo = (beta_f * beta_r - disc) / denom;
    let hi = (beta_f * beta_r + disc) / denom;
    let (lo, hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    match (verify(lo), verify(hi)) {
        (true, true) => Ok(TargetCrossings::Two { xi_r: lo, xi_f: hi }),
        (true, false) => Ok(TargetCrossings::Single { xi: lo }),
        (false, true) => Ok(TargetCrossings::Single { xi: hi }),
        (false, false) => Err(ReliabilityError::NoCrossing { beta_t, beta_m }),
    }
}

// ---------------------------------------------------------------------------
// Reduction factors for a confined RSP range
// ---------------------------------------------------------------------------

/// Reduction factors on the target reliability index applicable when the
/// RSP is confined to `[xi_r, xi_f]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KappaFactors {
    pub kappa_r: f64,
    pub kappa_f: f64,
}

/// Compute the reduction factors for the range `xi_r <= xi <= xi_f`.
///
/// With `A = sqrt(1+xi_f^2) sqrt(1+xi_r^2)` and `B = xi_f xi_r`:
///
/// ```text
/// kappa_R = sqrt((A - B + 1)/(A + B + 1))
/// kappa_F = kappa_R (xi_f sqrt(1+xi_r^2) + xi_r sqrt(1+xi_f^2))
///           / (sqrt(1+xi_r^2) + sqrt(1+xi_f^2))
/// ```
///
/// The square root on `kappa_R` makes the pair satisfy the defining system
/// `kappa_R + xi kappa_F = sqrt(1+xi^2)` at both range ends (equivalently
/// `beta(xi_r) = beta(xi_f) = beta_t` with `beta_R = kappa_R beta_t`,
/// `beta_F = kappa_F beta_t`) and the constraint
/// `kappa_F^2 + kappa_R^2 >= 1`; without it those checks fail.
/// `xi_f = inf` is supported through the algebraic limit
/// `kappa_R = 1/(xi_r + sqrt(1+xi_r^2))`, `kappa_F = 1`.
pub fn kappa_factors(xi_r: f64, xi_f: f64) -> Result<KappaFactors, ReliabilityError> {
    if !(xi_r >= 0.0) || !(xi_f >= xi_r) {
        return Err(ReliabilityError::InvalidArgument(format!(
            "kappa factors need 0 <= xi_r <= xi_f, got xi_r = {xi_r}, xi_f = {xi_f}"
        )));
    }
    let s_r = xi_r.mul_add(xi_r, 1.0).sqrt();
    if xi_f.is_infinite() {
        let kappa_r = 1.0 / (s_r + xi_r);
        return Ok(KappaFactors { kappa_r, kappa_f: 1.0 });
    }
    let s_f = xi_f.mul_add(xi_f, 1.0).sqrt();
    let a = s_f * s_r;
    let b = xi_f * xi_r;
    let kappa_r = ((a - b + 1.0) / (a + b + 1.0)).sqrt();
    let kappa_f = kappa_r * (xi_f * s_r + xi_r * s_f) / (s_r + s_f);
    Ok(KappaFactors { kappa_r, kappa_f })
}

/// Map a DH range to an RSP range for a linear lognormal resistance:
/// `xi = n Q_F / Q_R` applied to both ends.
pub fn dh_range_to_xi(
    n_low: f64,
    n_high: f64,
    q_f: f64,
    q_r: f64,
) -> Result<(f64, f64), ReliabilityError> {
    if !(q_r > 0.0) {
        return Err(ReliabilityError::InvalidArgument(format!(
            "Q_R must be positive, got {q_r}"
        )));
    }
    Ok((n_low * q_f / q_r, n_high * q_f / q_r))
}

/// RSP grid of the published reduction-factor table.
pub const KAPPA_TABLE_XI: [f64; 12] =
    [0.0, 0.2, 0.4, 0.6, 0.8, 1.0, 2.0, 4.0, 6.0, 8.0, 10.0, f64::INFINITY];

/// One cell of the reduction-factor table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KappaCell {
    pub xi_r: f64,
    pub xi_f: f64,
    pub kappa: KappaFactors,
}

/// The full upper-triangular reduction-factor grid over [`KAPPA_TABLE_XI`].
pub fn kappa_table() -> Vec<KappaCell> {
    let mut cells = Vec::new();
    for &xi_r in &KAPPA_TABLE_XI[..KAPPA_TABLE_XI.len() - 1] {
        for &xi_f in &KAPPA_TABLE_XI {
            if xi_f >= xi_r {
                let kappa = kappa_factors(xi_r, xi_f).expect("grid values are valid");
                cells.push(KappaCell { xi_r, xi_f, kappa });
            }
        }
    }
    cells
}

// ---------------------------------------------------------------------------
// Critical partial safety factors
// ---------------------------------------------------------------------------

/// Critical PSF of a variable at target reliability `beta_t`: the PSF that
/// places the design value at the target fractile assuming the variable
/// dominates the system. Any PSF at or above the critical one then
/// guarantees `beta >= beta_t` regardless of the system's nonlinearity.
///
/// Closed forms per distribution and orientation (`k` the characteristic
/// fractile, implied from the distribution's own cdf for ratio rules,
/// `p = Phi(k)`):
///
/// - lognormal, unfavourable: `exp(Q (beta_t - k))`
/// - lognormal, favourable:   `exp(Q (beta_t + k))`
/// - normal, unfavourable:    `(1 + beta_t V)/(1 + k V)`
/// - normal, favourable:      `(1 + k V)/(1 - beta_t V)`
/// - Gumbel, unfavourable:
///   `[1 - V c (g + ln(-ln Phi(beta_t)))]/[1 - V c (g + ln(-ln p))]`
///   with `c = sqrt(6)/pi` and `g` the Euler–Mascheroni constant.
///
/// No formula is published for favourable Gumbel variables; that
/// combination is rejected rather than invented. Model-error variables use
/// the rows matching their orientation.
///
/// With `clamp` (the default in the CLI) the result is floored at 1: a PSF
/// below 1 on a dominating variable is never intended by the format.
pub fn critical_psf(var: &BasicVariable, beta_t: f64, clamp: bool) -> Result<f64, ReliabilityError> {
    if !beta_t.is_finite() {
        return Err(ReliabilityError::InvalidArgument(format!(
            "target reliability index must be finite, got {beta_t}"
        )));
    }
    let v = var.dist.cov();
    if v == 0.0 {
        return Ok(1.0);
    }
    let stats = var.dist.log_space_stats()?;
    let (q, k) = (stats.q, stats.k);
    let gamma = match (var.status, var.dist.kind()) {
        (Status::Unfavourable, DistKind::Lognormal) => (q * (beta_t - k)).exp(),
        (Status::Favourable, DistKind::Lognormal) => (q * (beta_t + k)).exp(),
        (Status::Unfavourable, DistKind::Normal) => {
            let denom = 1.0 + k * v;
            if denom <= 0.0 {
                return Err(ReliabilityError::FormulaBreakdown(format!(
                    "normal characteristic value not positive: 1 + k V = {denom}"
                )));
            }
            (1.0 + beta_t * v) / denom
        }
        (Status::Favourable, DistKind::Normal) => {
            let denom = 1.0 - beta_t * v;
            if denom <= 0.0 {
                return Err(ReliabilityError::FormulaBreakdown(format!(
                    "normal design value not positive: 1 - beta_t V = {denom} \
                     (beta_t V = {} >= 1)",
                    beta_t * v
                )));
            }
            let num = 1.0 + k * v;
            if num <= 0.0 {
                return Err(ReliabilityError::FormulaBreakdown(format!(
                    "normal characteristic value not positive: 1 + k V = {num}"
                )));
            }
            num / denom
        }
        (Status::Unfavourable, DistKind::Gumbel) => {
            let c = v * 6.0_f64.sqrt() / std::f64::consts::PI;
            let p = match var.dist.char_rule() {
                dist::CharRule::Percentile(p) => p,
                dist::CharRule::MeanRatio(_) => var.dist.cdf(stats.char_value)?,
            };
            let num =
                1.0 - c * (dist::EULER_MASCHERONI + (-dist::std_normal_cdf(beta_t).ln()).ln());
            let den = 1.0 - c * (dist::EULER_MASCHERONI + (-p.ln()).ln());
            if den <= 0.0 {
                return Err(ReliabilityError::FormulaBreakdown(format!(
                    "Gumbel characteristic value not positive (denominator {den})"
                )));
            }
            if num <= 0.0 {
                return Err(ReliabilityError::FormulaBreakdown(format!(
                    "Gumbel design value not positive (numerator {num})"
                )));
            }
            num / den
        }
        (Status::Favourable, DistKind::Gumbel) => {
            return Err(ReliabilityError::UnsupportedCriticalPsf {
                kind: DistKind::Gumbel,
                status: Status::Favourable,
            });
        }
    };
    Ok(if clamp { gamma.max(1.0) } else { gamma })
}

// ---------------------------------------------------------------------------
// Safety-format option comparison (single action, single resistance)
// ---------------------------------------------------------------------------

/// Reliability indexes of the three safety-format options for a system with
/// one unfavourable action and one resistance, plus the DH used.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptionComparison {
    /// PSF on the action: `E_d = E(gamma_F F_k)`.
    pub beta_1: f64,
    /// PSF on the effect: `E_d = gamma_F E(F_k)` (equivalently the global
    /// factor `gamma_R gamma_F` on resistance).
    pub beta_2: f64,
    /// Global factor on the action: `E_d = E(gamma_R gamma_F F_k)`.
    pub beta_3: f64,
    /// Degree of homogeneity at the reference design point.
    pub n_e: f64,
}

/// Compare the three application options of the safety factors through the
/// homogenized description of the system.
///
/// The DH `n_E` is measured at the reference design point `gamma_F F_k`;
/// each option is then evaluated on the homogenized surrogate, which turns
/// option 2's factor on the effect into the factor `gamma_F^(1/n_E)` on the
/// action. For `n_E > 1` the orderings `beta_2 < beta_1 < beta_3` follow,
/// for `0 < n_E < 1` they reverse, and for `n_E = 1` all three coincide.
pub fn compare_safety_format_options(
    model: &dyn EffectModel,
    action: &BasicVariable,
    resistance: &BasicVariable,
    settings: &DiffSettings,
) -> Result<OptionComparison, ReliabilityError> {
    let vars = model.variables();
    if vars.len() != 1 {
        return Err(ReliabilityError::InvalidArgument(format!(
            "option comparison needs a single-action model, got variables {vars:?}"
        )));
    }
    if action.status != Status::Unfavourable {
        return Err(ReliabilityError::InvalidArgument(
            "option comparison is defined for an unfavourable action".to_string(),
        ));
    }
    let q_f = action.dist.log_sigma();
    let q_r = resistance.dist.log_sigma();
    if q_f == 0.0 || q_r == 0.0 {
        return Err(ReliabilityError::DegenerateVariable {
            name: if q_f == 0.0 { action.name.clone() } else { resistance.name.clone() },
            psf: 1.0,
        });
    }
    let f_k = action.characteristic_value()?;
    let gamma_f = action.psf;
    let gamma_r = resistance.psf;

    let mut point_values = VarMap::new();
    point_values.insert(vars[0].clone(), gamma_f * f_k);
    let point = DesignPoint::new(model, point_values)?;
    let n_e = dh_at(model, &point, settings)?;
    if n_e <= 0.0 {
        return Err(ReliabilityError::FormulaBreakdown(format!(
            "option comparison needs an increasing effect (n_E > 0), got {n_e}"
        )));
    }

    let tau_f = match action.dist.kind() {
        DistKind::Lognormal => 1.0,
        _ => action.dist.tau_dhn(action.design_value()?)?,
    };
    let tau_r = match resistance.dist.kind() {
        DistKind::Lognormal => 1.0,
        _ => resistance.dist.tau_dhn(resistance.design_value()?)?,
    };
    let xi = n_e * tau_f * q_f / (tau_r * q_r);

    // Action-side PRI at an effective design value; resistance-side PRI at
    // an effective PSF.
    let beta_f_at = |x_d: f64| -> Result<f64, ReliabilityError> {
        Ok(action.dist.standard_fractile(x_d)?)
    };
    let beta_r_at = |gamma: f64| -> Result<f64, ReliabilityError> {
        let x_d = resistance.characteristic_value()? / gamma;
        Ok(-resistance.dist.standard_fractile(x_d)?)
    };

    let beta_r_12 = beta_r_at(gamma_r)?;
    let beta_r_3 = beta_r_at(1.0)?;
    let beta_f_1 = beta_f_at(gamma_f * f_k)?;
    let beta_f_2 = beta_f_at(gamma_f.powf(1.0 / n_e) * f_k)?;
    let beta_f_3 = beta_f_at(gamma_r * gamma_f * f_k)?;

    Ok(OptionComparison {
        beta_1: ri_of_xi(beta_r_12, beta_f_1, xi),
        beta_2: ri_of_xi(beta_r_12, beta_f_2, xi),
        beta_3: ri_of_xi(beta_r_3, beta_f_3, xi),
        n_e,
    })
}
