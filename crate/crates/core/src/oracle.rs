//! Deterministic Monte Carlo estimation of failure probability and
//! reliability index, used to validate the closed-form machinery at desk
//! scale.
//!
//! Sampling is inverse-transform from a counter-based uniform stream keyed
//! by `(seed, chunk index, draw index)`: no mutable generator state, so the
//! estimate is bit-identical for a fixed configuration regardless of how
//! chunks are scheduled, and chunks could run in parallel without
//! coordination. Crude Monte Carlo only — the oracle must stay simple
//! enough to trust, and the test suites keep target indexes low enough
//! (beta <= 3.5) that 1e6–1e7 samples resolve them.

use crate::dist::{self, DistError, DistKind, DistributionSpec};
use crate::reliability::BasicVariable;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum OracleError {
    #[error(transparent)]
    Dist(#[from] DistError),
    #[error("invalid Monte Carlo configuration: {0}")]
    InvalidConfig(String),
    #[error("limit state returned a non-finite value at draw {index} of chunk {chunk}")]
    NonFiniteLimitState { chunk: u64, index: u64 },
}

/// Monte Carlo run configuration. Output is a pure function of
/// `(samples, seed, chunk_size)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McConfig {
    pub samples: u64,
    pub seed: u64,
    pub chunk_size: u64,
}

impl McConfig {
    pub fn new(samples: u64, seed: u64) -> Self {
        Self { samples, seed, chunk_size: 65_536 }
    }

    fn validate(&self) -> Result<(), OracleError> {
        if self.samples == 0 || self.chunk_size == 0 {
            return Err(OracleError::InvalidConfig(
                "samples and chunk_size must be positive".to_string(),
            ));
        }
        if self.samples < self.chunk_size {
            return Err(OracleError::InvalidConfig(format!(
                "samples ({}) must be at least chunk_size ({})",
                self.samples, self.chunk_size
            )));
        }
        Ok(())
    }
}

/// Monte Carlo estimate. `beta` is `-Phi^-1(pf)` and becomes infinite when
/// no failures (or no survivals) are observed; in that case the two-sided
/// confidence interval is unavailable and `beta_one_sided` carries the
/// rule-of-three 95% bound instead.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McResult {
    pub pf: f64,
    pub failures: u64,
    pub samples: u64,
    pub beta: f64,
    /// Half-width of the 95% confidence interval on beta (binomial normal
    /// approximation mapped through the quantile derivative).
    pub ci_halfwidth_beta: Option<f64>,
    /// One-sided 95% bound on beta when pf saturates at 0 (lower bound) or
    /// 1 (upper bound).
    pub beta_one_sided: Option<f64>,
}

const Z_975: f64 = 1.959963984540054;

// ---------------------------------------------------------------------------
// Counter-based uniform stream
// ---------------------------------------------------------------------------

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

/// Stafford mix 13, the splitmix64 finalizer.
#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// 64-bit value of the stream at `(seed, chunk, draw)`.
#[inline]
fn counter_value(seed: u64, chunk: u64, draw: u64) -> u64 {
    let z = mix64(seed ^ GOLDEN.wrapping_mul(chunk.wrapping_add(1)));
    mix64(z ^ GOLDEN.wrapping_mul(draw.wrapping_add(1)))
}

/// Uniform draw in the open interval (0, 1): 53 mantissa bits, centered so
/// the endpoints are never hit and inverse transforms stay finite.
#[inline]
fn uniform(seed: u64, chunk: u64, draw: u64) -> f64 {
    ((counter_value(seed, chunk, draw) >> 11) as f64 + 0.5) * (1.0 / 9_007_199_254_740_992.0)
}

// ---------------------------------------------------------------------------
// Inverse-transform samplers
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy)]
enum Sampler {
    Degenerate(f64),
    Normal { mean: f64, sd: f64 },
    Lognormal { mu: f64, sigma: f64 },
    Gumbel { loc: f64, scale: f64 },
}

impl Sampler {
    fn from_spec(spec: &DistributionSpec) -> Sampler {
        if spec.cov() == 0.0 {
            return Sampler::Degenerate(spec.mean());
        }
        match spec.kind() {
            DistKind::Normal => Sampler::Normal { mean: spec.mean(), sd: spec.std_dev() },
            DistKind::Lognormal => {
                let (mu, sigma) = spec.lognormal_params();
                Sampler::Lognormal { mu, sigma }
            }
            DistKind::Gumbel => {
                let (loc, scale) = spec.gumbel_params();
                Sampler::Gumbel { loc, scale }
            }
        }
    }

    #[inline]
    fn draw(&self, u: f64) -> f64 {
        match *self {
            Sampler::Degenerate(mean) => mean,
            Sampler::Normal { mean, sd } => mean + sd * dist::inverse_norm_cdf_as241(u),
            Sampler::Lognormal { mu, sigma } => (mu + sigma * dist::inverse_norm_cdf_as241(u)).exp(),
            Sampler::Gumbel { loc, scale } => loc - scale * (-u.ln()).ln(),
        }
    }
}

/// Draw `n` reproducible samples of one variable (chunk 0 of the stream).
pub fn sample_variable(spec: &DistributionSpec, n: usize, seed: u64) -> Vec<f64> {
    let sampler = Sampler::from_spec(spec);
    (0..n).map(|i| sampler.draw(uniform(seed, 0, i as u64))).collect()
}

fn chunk_failures<F>(
    lsf: &F,
    samplers: &[Sampler],
    seed: u64,
    chunk: u64,
    count: u64,
    x: &mut [f64],
) -> Result<u64, OracleError>
where
    F: Fn(&[f64]) -> f64,
{
    let n_vars = samplers.len() as u64;
    let mut failures = 0u64;
    for j in 0..count {
        for (i, sampler) in samplers.iter().enumerate() {
            x[i] = sampler.draw(uniform(seed, chunk, j * n_vars + i as u64));
        }
        let g = lsf(x);
        if g.is_nan() {
            return Err(OracleError::NonFiniteLimitState { chunk, index: j });
        }
        if g < 1.0 {
            failures += 1;
        }
    }
    Ok(failures)
}

/// Estimate the failure probability and reliability index of the limit
/// state `g(X)`, failure iff `g < 1`, with `X` sampled from the variables'
/// distributions in the order given.
///
/// The limit state is typically the design-value ratio form
/// `g = (R/R_d)/(E/E_d)`, which equals 1 on the design boundary. The
/// closure receives one value per variable, ordered as in `vars`.
pub fn mc_beta<F>(lsf: F, vars: &[BasicVariable], cfg: &McConfig) -> Result<McResult, OracleError>
where
    F: Fn(&[f64]) -> f64,
{
    cfg.validate()?;
    if vars.is_empty() {
        return Err(OracleError::InvalidConfig("no variables to sample".to_string()));
    }
    let samplers: Vec<Sampler> = vars.iter().map(|v| Sampler::from_spec(&v.dist)).collect();
    let mut x = vec![0.0; samplers.len()];

    let mut failures = 0u64;
    let full_chunks = cfg.samples / cfg.chunk_size;
    let tail = cfg.samples % cfg.chunk_size;
    for chunk in 0..full_chunks {
        failures += chunk_failures(&lsf, &samplers, cfg.seed, chunk, cfg.chunk_size, &mut x)?;
    }
    if tail > 0 {
        failures += chunk_failures(&lsf, &samplers, cfg.seed, full_chunks, tail, &mut x)?;
    }

    Ok(summarize(failures, cfg.samples))
}

fn summarize(failures: u64, samples: u64) -> McResult {
    let n = samples as f64;
    let pf = failures as f64 / n;
    if failures == 0 || failures == samples {
        // Unbounded estimate; report the rule-of-three 95% bound.
        let bound_pf = (3.0 / n).min(1.0);
        let (beta, one_sided) = if failures == 0 {
            (f64::INFINITY, -dist::inverse_norm_cdf_as241(bound_pf))
        } else {
            (f64::NEG_INFINITY, -dist::inverse_norm_cdf_as241(1.0 - bound_pf))
        };
        return McResult {
            pf,
            failures,
            samples,
            beta,
            ci_halfwidth_beta: None,
            beta_one_sided: Some(one_sided),
        };
    }
    let beta = -dist::inverse_norm_cdf_as241(pf);
    let se_pf = (pf * (1.0 - pf) / n).sqrt();
    let halfwidth = Z_975 * se_pf / dist::std_normal_pdf(beta);
    McResult {
        pf,
        failures,
        samples,
        beta,
        ci_halfwidth_beta: Some(halfwidth),
        beta_one_sided: None,
    }
}
