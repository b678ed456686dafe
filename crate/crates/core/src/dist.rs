//! Probability primitives for normal, lognormal, and Gumbel variables.
//!
//! Everything downstream works in log-space, so the module centres on three
//! quantities per variable: the log-space standard deviation
//! `Q = sqrt(ln(1 + V^2))`, the standard-normal fractile `k` of the
//! characteristic value, and the degree of homogeneity of the
//! non-lognormality `tau`, which carries the distribution-shape correction
//! for non-lognormal variables.
//!
//! All functions are pure; no shared mutable state.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

/// Euler–Mascheroni constant, used by the Gumbel moment fit.
pub const EULER_MASCHERONI: f64 = 0.577_215_664_901_532_9;

const SQRT_PI: f64 = 1.772_453_850_905_516;
const FRAC_1_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tail {
    Lower,
    Upper,
}

impl std::fmt::Display for Tail {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Tail::Lower => write!(f, "lower"),
            Tail::Upper => write!(f, "upper"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DistError {
    #[error("invalid distribution parameter: {0}")]
    InvalidParameter(String),
    #[error("probability {0} outside the open interval (0, 1)")]
    ProbabilityOutOfRange(f64),
    #[error("negative coefficient of variation: {0}")]
    NegativeCov(f64),
    #[error("x = {x} outside the support of the {kind:?} distribution")]
    OutOfSupport { kind: DistKind, x: f64 },
    #[error("cdf at x = {x} saturates numerically in the {tail} tail")]
    TailOverflow { x: f64, tail: Tail },
    #[error("degenerate distribution (cov = 0) does not define {0}")]
    Degenerate(&'static str),
}

// ---------------------------------------------------------------------------
// Standard normal distribution
// ---------------------------------------------------------------------------

/// Standard normal density.
pub fn std_normal_pdf(x: f64) -> f64 {
    FRAC_1_SQRT_2PI * (-0.5 * x * x).exp()
}

/// erf by its Maclaurin series; adequate for |x| < 2.
fn erf_series(x: f64) -> f64 {
    let x2 = x * x;
    let mut term = x; // (-1)^n x^{2n+1} / n!
    let mut sum = x;
    for n in 1..120 {
        term *= -x2 / n as f64;
        let delta = term / (2 * n + 1) as f64;
        sum += delta;
        if delta.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    sum * 2.0 / SQRT_PI
}

/// Continued fraction for `sqrt(pi) * exp(x^2) * erfc(x)`, valid for x >= 2.
///
/// Partial numerators are n/2 with constant denominator x; evaluated by
/// backward recurrence at fixed depth, which converges to full double
/// precision for x >= 2.
fn erfc_cf(x: f64) -> f64 {
    let mut h = 0.0;
    for k in (1..=100u32).rev() {
        h = (k as f64 / 2.0) / (x + h);
    }
    1.0 / (x + h)
}

/// Complementary error function for non-negative argument.
fn erfc_nonneg(x: f64) -> f64 {
    debug_assert!(x >= 0.0);
    if x < 2.0 {
        1.0 - erf_series(x)
    } else {
        (-x * x).exp() / SQRT_PI * erfc_cf(x)
    }
}

/// Standard normal cumulative distribution function.
///
/// Relative accuracy is preserved in the lower tail, which matters when
/// mapping design values to fractiles far from the median.
pub fn std_normal_cdf(x: f64) -> f64 {
    let z = -x * FRAC_1_SQRT_2;
    if z >= 0.0 {
        0.5 * erfc_nonneg(z)
    } else {
        1.0 - 0.5 * erfc_nonneg(-z)
    }
}

/// Standard normal quantile, absolute error below 1e-9.
///
/// Rational approximation AS 241 (Wichura 1988) followed by one Newton
/// refinement step against [`std_normal_cdf`]. Tail fractiles feed directly
/// into safety-factor formulas, so the refinement step is kept even though
/// the raw approximation is usually already at machine precision.
pub fn std_normal_quantile(p: f64) -> Result<f64, DistError> {
    if !(p > 0.0 && p < 1.0) {
        return Err(DistError::ProbabilityOutOfRange(p));
    }
    let x = inverse_norm_cdf_as241(p);
    // One Newton step: x <- x + (p - Phi(x)) / phi(x).
    let pdf = std_normal_pdf(x);
    let refined = if pdf > 1e-280 {
        x + (p - std_normal_cdf(x)) / pdf
    } else {
        x
    };
    Ok(refined)
}

/// ALGORITHM AS 241, Appl. Statist. (1988) Vol. 37, No. 3.
///
/// Raw rational approximation (no Newton step), already accurate to about
/// one part in 1e15; the Monte Carlo sampler draws through this directly.
#[allow(clippy::excessive_precision)]
pub(crate) fn inverse_norm_cdf_as241(u: f64) -> f64 {
    const SPLIT1: f64 = 0.425;
    const SPLIT2: f64 = 5.0;
    const CONST1: f64 = 0.180625;
    const CONST2: f64 = 1.6;

    const A0: f64 = 3.3871328727963666080E0;
    const A1: f64 = 1.3314166789178437745E+2;
    const A2: f64 = 1.9715909503065514427E+3;
    const A3: f64 = 1.3731693765509461125E+4;
    const A4: f64 = 4.5921953931549871457E+4;
    const A5: f64 = 6.7265770927008700853E+4;
    const A6: f64 = 3.3430575583588128105E+4;
    const A7: f64 = 2.5090809287301226727E+3;
    const B1: f64 = 4.2313330701600911252E+1;
    const B2: f64 = 6.8718700749205790830E+2;
    const B3: f64 = 5.3941960214247511077E+3;
    const B4: f64 = 2.1213794301586595867E+4;
    const B5: f64 = 3.9307895800092710610E+4;
    const B6: f64 = 2.8729085735721942674E+4;
    const B7: f64 = 5.2264952788528545610E+3;

    const C0: f64 = 1.42343711074968357734E0;
    const C1: f64 = 4.63033784615654529590E0;
    const C2: f64 = 5.76949722146069140550E0;
    const C3: f64 = 3.64784832476320460504E0;
    const C4: f64 = 1.27045825245236838258E0;
    const C5: f64 = 2.41780725177450611770E-1;
    const C6: f64 = 2.27238449892691845833E-2;
    const C7: f64 = 7.74545014278341407640E-4;
    const D1: f64 = 2.05319162663775882187E0;
    const D2: f64 = 1.67638483018380384940E0;
    const D3: f64 = 6.89767334985100004550E-1;
    const D4: f64 = 1.48103976427480074590E-1;
    const D5: f64 = 1.51986665636164571966E-2;
    const D6: f64 = 5.47593808499534494600E-4;
    const D7: f64 = 1.05075007164441684324E-9;

    const E0: f64 = 6.65790464350110377720E0;
    const E1: f64 = 5.46378491116411436990E0;
    const E2: f64 = 1.78482653991729133580E0;
    const E3: f64 = 2.96560571828504891230E-1;
    const E4: f64 = 2.65321895265761230930E-2;
    const E5: f64 = 1.24266094738807843860E-3;
    const E6: f64 = 2.71155556874348757815E-5;
    const E7: f64 = 2.01033439929228813265E-7;
    const F1: f64 = 5.99832206555887937690E-1;
    const F2: f64 = 1.36929880922735805310E-1;
    const F3: f64 = 1.48753612908506148525E-2;
    const F4: f64 = 7.86869131145613259100E-4;
    const F5: f64 = 1.84631831751005468180E-5;
    const F6: f64 = 1.42151175831644588870E-7;
    const F7: f64 = 2.04426310338993978564E-15;

    let q = u - 0.5;
    if q.abs() <= SPLIT1 {
        let r = CONST1 - q * q;
        q * (((((((A7 * r + A6) * r + A5) * r + A4) * r + A3) * r + A2) * r + A1) * r + A0)
            / (((((((B7 * r + B6) * r + B5) * r + B4) * r + B3) * r + B2) * r + B1) * r + 1.0)
    } else {
        let mut r = if q < 0.0 { u } else { 1.0 - u };
        r = (-r.ln()).sqrt();
        let ret = if r < SPLIT2 {
            r -= CONST2;
            (((((((C7 * r + C6) * r + C5) * r + C4) * r + C3) * r + C2) * r + C1) * r + C0)
                / (((((((D7 * r + D6) * r + D5) * r + D4) * r + D3) * r + D2) * r + D1) * r + 1.0)
        } else {
            r -= SPLIT2;
            (((((((E7 * r + E6) * r + E5) * r + E4) * r + E3) * r + E2) * r + E1) * r + E0)
                / (((((((F7 * r + F6) * r + F5) * r + F4) * r + F3) * r + F2) * r + F1) * r + 1.0)
        };
        if q < 0.0 {
            -ret
        } else {
            ret
        }
    }
}

/// Log-space standard deviation `Q = sqrt(ln(1 + cov^2))`.
///
/// Approaches the coefficient of variation itself for small `cov`.
pub fn log_std(cov: f64) -> Result<f64, DistError> {
    if !(cov >= 0.0) {
        return Err(DistError::NegativeCov(cov));
    }
    Ok((cov * cov).ln_1p().sqrt())
}

// ---------------------------------------------------------------------------
// Distribution specifications
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistKind {
    Normal,
    Lognormal,
    Gumbel,
}

impl std::fmt::Display for DistKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DistKind::Normal => write!(f, "normal"),
            DistKind::Lognormal => write!(f, "lognormal"),
            DistKind::Gumbel => write!(f, "gumbel"),
        }
    }
}

/// Rule fixing the characteristic value of a variable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CharRule {
    /// Characteristic value is the `p`-fractile of the distribution.
    Percentile(f64),
    /// Characteristic value is `ratio * mean`; the implied fractile is read
    /// off the distribution's own cdf so the log-space formulas stay uniform.
    MeanRatio(f64),
}

/// Stochastic model of one basic variable: distribution kind, mean,
/// coefficient of variation, and the characteristic-value rule.
#[derive(Debug, Clone, PartialEq)]
pub struct DistributionSpec {
    kind: DistKind,
    mean: f64,
    cov: f64,
    char_rule: CharRule,
}

/// Log-space statistics of a variable: `q = sqrt(ln(1 + cov^2))`, the
/// standard-normal fractile `k` of the characteristic value, and the
/// characteristic value itself.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogSpaceStats {
    pub q: f64,
    pub k: f64,
    pub char_value: f64,
}

impl DistributionSpec {
    pub fn new(kind: DistKind, mean: f64, cov: f64, char_rule: CharRule) -> Result<Self, DistError> {
        if !mean.is_finite() || mean <= 0.0 {
            return Err(DistError::InvalidParameter(format!(
                "mean must be finite and positive, got {mean}"
            )));
        }
        if !cov.is_finite() {
            return Err(DistError::InvalidParameter(format!("cov must be finite, got {cov}")));
        }
        if cov < 0.0 {
            return Err(DistError::NegativeCov(cov));
        }
        match char_rule {
            CharRule::Percentile(p) if !(p > 0.0 && p < 1.0) => {
                return Err(DistError::ProbabilityOutOfRange(p));
            }
            CharRule::MeanRatio(r) if !(r.is_finite() && r > 0.0) => {
                return Err(DistError::InvalidParameter(format!(
                    "characteristic-to-mean ratio must be positive, got {r}"
                )));
            }
            _ => {}
        }
        Ok(Self { kind, mean, cov, char_rule })
    }

    pub fn kind(&self) -> DistKind {
        self.kind
    }
    pub fn mean(&self) -> f64 {
        self.mean
    }
    pub fn cov(&self) -> f64 {
        self.cov
    }
    pub fn char_rule(&self) -> CharRule {
        self.char_rule
    }

    /// Standard deviation in the original space.
    pub fn std_dev(&self) -> f64 {
        self.cov * self.mean
    }

    /// `Q = sqrt(ln(1 + cov^2))`.
    pub fn log_sigma(&self) -> f64 {
        log_std(self.cov).expect("cov validated at construction")
    }

    /// Lognormal parameters `(mu_ln, sigma_ln)` fitted by moments.
    pub fn lognormal_params(&self) -> (f64, f64) {
        let sigma = self.log_sigma();
        (self.mean.ln() - 0.5 * sigma * sigma, sigma)
    }

    /// Gumbel parameters `(location, scale)` fitted by moments:
    /// `scale = cov * mean * sqrt(6) / pi`,
    /// `location = mean - scale * gamma_EM`.
    pub fn gumbel_params(&self) -> (f64, f64) {
        let scale = self.cov * self.mean * 6.0_f64.sqrt() / PI;
        (self.mean - scale * EULER_MASCHERONI, scale)
    }

    fn check_support(&self, x: f64) -> Result<(), DistError> {
        if !x.is_finite() || (self.kind == DistKind::Lognormal && x <= 0.0) {
            return Err(DistError::OutOfSupport { kind: self.kind, x });
        }
        Ok(())
    }

    /// Probability density at `x`.
    pub fn pdf(&self, x: f64) -> Result<f64, DistError> {
        self.check_support(x)?;
        if self.cov == 0.0 {
            return Err(DistError::Degenerate("a probability density"));
        }
        Ok(match self.kind {
            DistKind::Normal => {
                let s = self.std_dev();
                std_normal_pdf((x - self.mean) / s) / s
            }
            DistKind::Lognormal => {
                let (mu, sigma) = self.lognormal_params();
                std_normal_pdf((x.ln() - mu) / sigma) / (sigma * x)
            }
            DistKind::Gumbel => {
                let (loc, scale) = self.gumbel_params();
                let y = (x - loc) / scale;
                ((-y) - (-y).exp()).exp() / scale
            }
        })
    }

    /// Natural log of the density at `x`; stays finite far into the tails
    /// where `pdf` itself underflows.
    pub fn ln_pdf(&self, x: f64) -> Result<f64, DistError> {
        self.check_support(x)?;
        if self.cov == 0.0 {
            return Err(DistError::Degenerate("a probability density"));
        }
        const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;
        Ok(match self.kind {
            DistKind::Normal => {
                let s = self.std_dev();
                let z = (x - self.mean) / s;
                -0.5 * z * z - LN_SQRT_2PI - s.ln()
            }
            DistKind::Lognormal => {
                let (mu, sigma) = self.lognormal_params();
                let z = (x.ln() - mu) / sigma;
                -0.5 * z * z - LN_SQRT_2PI - sigma.ln() - x.ln()
            }
            DistKind::Gumbel => {
                let (loc, scale) = self.gumbel_params();
                let y = (x - loc) / scale;
                -y - (-y).exp() - scale.ln()
            }
        })
    }

    /// Cumulative distribution at `x`. A degenerate (cov = 0) variable has a
    /// step cdf at its mean.
    pub fn cdf(&self, x: f64) -> Result<f64, DistError> {
        self.check_support(x)?;
        if self.cov == 0.0 {
            return Ok(if x < self.mean { 0.0 } else { 1.0 });
        }
        Ok(match self.kind {
            DistKind::Normal => std_normal_cdf((x - self.mean) / self.std_dev()),
            DistKind::Lognormal => {
                let (mu, sigma) = self.lognormal_params();
                std_normal_cdf((x.ln() - mu) / sigma)
            }
            DistKind::Gumbel => {
                let (loc, scale) = self.gumbel_params();
                (-(-(x - loc) / scale).exp()).exp()
            }
        })
    }

    /// `p`-quantile. For cov = 0 every quantile is the mean.
    pub fn quantile(&self, p: f64) -> Result<f64, DistError> {
        if !(p > 0.0 && p < 1.0) {
            return Err(DistError::ProbabilityOutOfRange(p));
        }
        if self.cov == 0.0 {
            return Ok(self.mean);
        }
        Ok(match self.kind {
            DistKind::Normal => self.mean + self.std_dev() * std_normal_quantile(p)?,
            DistKind::Lognormal => {
                let (mu, sigma) = self.lognormal_params();
                (mu + sigma * std_normal_quantile(p)?).exp()
            }
            DistKind::Gumbel => {
                let (loc, scale) = self.gumbel_params();
                loc - scale * (-p.ln()).ln()
            }
        })
    }

    /// Standard-normal fractile of `x` under this distribution:
    /// the `z` with `Phi(z) = G(x)`, computed tail-stably.
    pub fn standard_fractile(&self, x: f64) -> Result<f64, DistError> {
        self.check_support(x)?;
        if self.cov == 0.0 {
            return Err(DistError::Degenerate("a fractile"));
        }
        match self.kind {
            DistKind::Normal => Ok((x - self.mean) / self.std_dev()),
            DistKind::Lognormal => {
                let (mu, sigma) = self.lognormal_params();
                Ok((x.ln() - mu) / sigma)
            }
            DistKind::Gumbel => {
                let (loc, scale) = self.gumbel_params();
                let y = (x - loc) / scale;
                let lower = (-(-y).exp()).exp();
                if lower == 0.0 {
                    return Err(DistError::TailOverflow { x, tail: Tail::Lower });
                }
                if lower <= 0.5 {
                    std_normal_quantile(lower)
                } else {
                    // 1 - exp(-exp(-y)) computed without cancellation.
                    let upper = -(-(-y).exp()).exp_m1();
                    if upper == 0.0 {
                        return Err(DistError::TailOverflow { x, tail: Tail::Upper });
                    }
                    Ok(-std_normal_quantile(upper)?)
                }
            }
        }
    }

    /// Characteristic value per the spec's rule.
    pub fn characteristic_value(&self) -> Result<f64, DistError> {
        match self.char_rule {
            CharRule::Percentile(p) => self.quantile(p),
            CharRule::MeanRatio(r) => Ok(r * self.mean),
        }
    }

    /// Log-space statistics: `q`, the (possibly implied) fractile `k` of the
    /// characteristic value, and the characteristic value itself.
    ///
    /// For a percentile rule, `k = Phi^-1(p)` directly; for a
    /// characteristic-to-mean ratio, `k` is the implied fractile
    /// `Phi^-1(G(ratio * mean))` under the variable's own distribution.
    pub fn log_space_stats(&self) -> Result<LogSpaceStats, DistError> {
        let q = self.log_sigma();
        let char_value = self.characteristic_value()?;
        let k = match self.char_rule {
            CharRule::Percentile(p) => std_normal_quantile(p)?,
            CharRule::MeanRatio(_) => {
                if self.cov == 0.0 {
                    return Err(DistError::Degenerate("an implied fractile"));
                }
                self.standard_fractile(char_value)?
            }
        };
        Ok(LogSpaceStats { q, k, char_value })
    }

    /// Degree of homogeneity of the non-lognormality at `x_d`:
    ///
    /// `tau = Q * g(x_d) * x_d / phi(Phi^-1(G(x_d)))`.
    ///
    /// Identically 1 for lognormal variables; the trailing factor is read as
    /// `x_d` (not `x_d^2` or the mean) precisely because that reading makes
    /// the lognormal identity hold.
    pub fn tau_dhn(&self, x_d: f64) -> Result<f64, DistError> {
        self.check_support(x_d)?;
        if x_d <= 0.0 {
            return Err(DistError::OutOfSupport { kind: self.kind, x: x_d });
        }
        let q = self.log_sigma();
        if q == 0.0 {
            return Err(DistError::Degenerate("the non-lognormality degree"));
        }
        let z = self.standard_fractile(x_d)?;
        let g = self.pdf(x_d)?;
        Ok(q * g * x_d / std_normal_pdf(z))
    }
}
