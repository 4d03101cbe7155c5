//! Gram eigen-spectra, water-filling power allocation, and capacity.
//!
//! The optimal-spacing channel has a two-level Gram spectrum
//! `{mu1*beta*M, mu2*beta*M}` with multiplicity `M` each, for which the
//! water-filling allocation and the capacity have closed forms. The general
//! path (matrix -> eigenvalues -> bisection water-filling -> capacity) agrees
//! with the closed forms wherever both are defined and also covers arbitrary
//! spacings and the `mu2 = 0` case where the closed-form capacity is
//! undefined.

use nalgebra::linalg::SymmetricEigen;

use crate::channel::{ChannelMatrix, XpdModel};
use crate::{Error, Result};

/// Relative threshold under which slightly negative eigenvalues (floating
/// point residue of a positive semidefinite Gram) are clamped to zero.
const EIG_CLAMP_REL: f64 = 1e-10;

const WATERFILL_MAX_ITER: usize = 200;
const WATERFILL_REL_TOL: f64 = 1e-12;

/// Nonnegative eigenvalues in descending order.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSpectrum {
    values: Vec<f64>,
}

impl EigenSpectrum {
    /// Sorts descending and clamps floating-point negatives to zero. Values
    /// below `-1e-10 * max` are rejected: they indicate a matrix that is not
    /// a Gram.
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::domain("eigen spectrum must be nonempty".to_string()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain(
                "eigen spectrum must hold finite values".to_string(),
            ));
        }
        values.sort_by(|a, b| b.partial_cmp(a).expect("finite values"));
        let max = values[0].max(0.0);
        for v in values.iter_mut() {
            if *v < 0.0 {
                if *v < -EIG_CLAMP_REL * max {
                    return Err(Error::domain(format!(
                        "eigenvalue {v} is negative beyond the clamping threshold"
                    )));
                }
                *v = 0.0;
            }
        }
        Ok(EigenSpectrum { values })
    }

    /// The optimal-spacing dual-polarized spectrum: `mu1*beta*M` and
    /// `mu2*beta*M`, each with multiplicity `M`.
    pub fn two_level(mu1: f64, mu2: f64, beta: f64, m: usize) -> Result<Self> {
        if !(mu1 >= mu2 && mu2 >= 0.0) {
            return Err(Error::domain(format!(
                "two-level spectrum requires mu1 >= mu2 >= 0 (got {mu1}, {mu2})"
            )));
        }
        if !(beta > 0.0) || m < 1 {
            return Err(Error::domain(format!(
                "two-level spectrum requires beta > 0 and m >= 1 (got {beta}, {m})"
            )));
        }
        let strong = mu1 * beta * m as f64;
        let weak = mu2 * beta * m as f64;
        let mut values = vec![strong; m];
        values.extend(std::iter::repeat_n(weak, m));
        Ok(EigenSpectrum { values })
    }

    /// Kronecker expansion of a single-polarized spectrum by the XPD
    /// eigenvalues: all pairwise products `mu_i * lambda_m`, descending.
    pub fn with_xpd(&self, xpd: &XpdModel) -> Self {
        let (mu1, mu2) = xpd.eigenvalues();
        let mut values: Vec<f64> = self
            .values
            .iter()
            .flat_map(|l| [mu1 * l, mu2 * l])
            .collect();
        values.sort_by(|a, b| b.partial_cmp(a).expect("finite values"));
        EigenSpectrum { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn max(&self) -> f64 {
        self.values[0]
    }
}

/// Eigenvalues of `H^H H`, descending. Backed by a Hermitian
/// eigendecomposition; the eigenvalue sum equals the squared Frobenius norm.
pub fn gram_eigenvalues(channel: &ChannelMatrix) -> Result<EigenSpectrum> {
    if channel.entries().iter().any(|e| !e.is_finite()) {
        return Err(Error::domain(
            "channel matrix holds non-finite entries".to_string(),
        ));
    }
    let gram = channel.gram();
    let n = gram.nrows();
    let max_iter = 200 * n + 1000;
    let eig = SymmetricEigen::try_new(gram, f64::EPSILON, max_iter).ok_or(
        Error::NonConvergence {
            op: "gram_eigenvalues",
            iterations: max_iter,
            dimension: n,
        },
    )?;
    EigenSpectrum::new(eig.eigenvalues.iter().copied().collect())
}

/// Power allocation over parallel channel dimensions, ordered to match the
/// spectrum it was computed for.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerAllocation {
    powers: Vec<f64>,
    total: f64,
    water_level: Option<f64>,
}

impl PowerAllocation {
    /// Uniform split of `total` over `n` dimensions (`total` may be zero).
    pub fn equal(total: f64, n: usize) -> Result<Self> {
        if n == 0 || !(total >= 0.0) {
            return Err(Error::domain(format!(
                "equal allocation requires n >= 1 and total >= 0 (got {n}, {total})"
            )));
        }
        Ok(PowerAllocation {
            powers: vec![total / n as f64; n],
            total,
            water_level: None,
        })
    }

    pub fn powers(&self) -> &[f64] {
        &self.powers
    }

    pub fn total(&self) -> f64 {
        self.total
    }

    /// The common level `nu` such that active dimensions hold
    /// `nu - sigma^2/lambda_n`; present when produced by water-filling.
    pub fn water_level(&self) -> Option<f64> {
        self.water_level
    }

    pub fn len(&self) -> usize {
        self.powers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.powers.is_empty()
    }
}

/// Water-filling by bisection on the water level `nu` over
/// `[sigma^2/lambda_max, sigma^2/lambda_min + total_power]` (the smallest
/// positive eigenvalue bounds from above). Monotone and robust for repeated
/// eigenvalues; zero eigenvalues receive zero power.
pub fn waterfill(
    spectrum: &EigenSpectrum,
    total_power: f64,
    sigma2: f64,
) -> Result<PowerAllocation> {
    if !(total_power > 0.0) || !(sigma2 > 0.0) {
        return Err(Error::domain(format!(
            "waterfill requires total_power > 0 and sigma2 > 0 (got {total_power}, {sigma2})"
        )));
    }
    let lambda_max = spectrum.max();
    let lambda_min_pos = spectrum
        .values()
        .iter()
        .rev()
        .find(|l| **l > 0.0)
        .copied();
    let Some(lambda_min_pos) = lambda_min_pos else {
        return Err(Error::domain(
            "waterfill requires at least one positive eigenvalue".to_string(),
        ));
    };

    let fill = |nu: f64| -> f64 {
        spectrum
            .values()
            .iter()
            .filter(|l| **l > 0.0)
            .map(|l| (nu - sigma2 / l).max(0.0))
            .sum()
    };

    let mut lo = sigma2 / lambda_max;
    let mut hi = sigma2 / lambda_min_pos + total_power;
    let tol = WATERFILL_REL_TOL * total_power;
    let mut nu = 0.5 * (lo + hi);
    let mut converged = false;
    for _ in 0..WATERFILL_MAX_ITER {
        nu = 0.5 * (lo + hi);
        let sum = fill(nu);
        if (sum - total_power).abs() <= tol {
            converged = true;
            break;
        }
        if sum < total_power {
            lo = nu;
        } else {
            hi = nu;
        }
    }
    if !converged && (fill(nu) - total_power).abs() > 1e-9 * total_power {
        return Err(Error::NonConvergence {
            op: "waterfill",
            iterations: WATERFILL_MAX_ITER,
            dimension: spectrum.len(),
        });
    }

    let powers: Vec<f64> = spectrum
        .values()
        .iter()
        .map(|l| {
            if *l > 0.0 {
                (nu - sigma2 / l).max(0.0)
            } else {
                0.0
            }
        })
        .collect();
    Ok(PowerAllocation {
        powers,
        total: total_power,
        water_level: Some(nu),
    })
}

/// Threshold power below which water-filling puts everything on the strong
/// level: `sigma^2/(mu2*beta) - sigma^2/(mu1*beta)`; infinite when `mu2 = 0`.
fn two_level_threshold(mu1: f64, mu2: f64, beta: f64, sigma2: f64) -> f64 {
    if mu2 <= 0.0 {
        f64::INFINITY
    } else {
        sigma2 / (mu2 * beta) - sigma2 / (mu1 * beta)
    }
}

/// Closed-form water-filling over the two-level spectrum
/// `{mu1*beta*M x M, mu2*beta*M x M}`. Below the threshold the whole budget
/// spreads over the `M` strong dimensions; above it every dimension is
/// active.
pub fn two_level_waterfill(
    mu1: f64,
    mu2: f64,
    beta: f64,
    m: usize,
    total_power: f64,
    sigma2: f64,
) -> Result<PowerAllocation> {
    if !(mu1 > 0.0) {
        return Err(Error::domain(format!(
            "two-level waterfill requires mu1 > 0 (got {mu1})"
        )));
    }
    if !(mu1 >= mu2 && mu2 >= 0.0) {
        return Err(Error::domain(format!(
            "two-level waterfill requires mu1 >= mu2 >= 0 (got {mu1}, {mu2})"
        )));
    }
    if !(beta > 0.0) || m < 1 || !(total_power > 0.0) || !(sigma2 > 0.0) {
        return Err(Error::domain(
            "two-level waterfill requires positive beta, power, sigma2 and m >= 1".to_string(),
        ));
    }
    let mf = m as f64;
    let threshold = two_level_threshold(mu1, mu2, beta, sigma2);
    let (q1, q2, level) = if total_power <= threshold {
        let q1 = total_power / mf;
        (q1, 0.0, q1 + sigma2 / (mu1 * beta * mf))
    } else {
        let half = total_power / (2.0 * mf);
        let s1 = sigma2 / (2.0 * mu1 * beta * mf);
        let s2 = sigma2 / (2.0 * mu2 * beta * mf);
        (half + s2 - s1, half + s1 - s2, half + s1 + s2)
    };
    let mut powers = vec![q1; m];
    powers.extend(std::iter::repeat_n(q2, m));
    Ok(PowerAllocation {
        powers,
        total: total_power,
        water_level: Some(level),
    })
}

/// Per-dimension rates and the resulting capacity in bits per channel use.
#[derive(Debug, Clone, PartialEq)]
pub struct CapacityResult {
    bits_per_use: f64,
    per_dimension_rates: Vec<f64>,
    allocation: PowerAllocation,
    noise_variance: f64,
    bits_per_second: Option<BitsPerSecond>,
}

/// Bits-per-second view of a capacity result.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BitsPerSecond {
    pub bandwidth: f64,
    pub noise_density: f64,
    pub value: f64,
}

impl CapacityResult {
    pub fn bits_per_use(&self) -> f64 {
        self.bits_per_use
    }

    pub fn per_dimension_rates(&self) -> &[f64] {
        &self.per_dimension_rates
    }

    pub fn allocation(&self) -> &PowerAllocation {
        &self.allocation
    }

    pub fn noise_variance(&self) -> f64 {
        self.noise_variance
    }

    pub fn bits_per_second(&self) -> Option<&BitsPerSecond> {
        self.bits_per_second.as_ref()
    }

    /// Attaches a bits-per-second figure for a system of bandwidth `b` and
    /// noise density `n0`. The capacity must have been computed with
    /// `sigma2 = b * n0` for the figure to be meaningful, so that is checked.
    pub fn with_bandwidth(mut self, bandwidth: f64, noise_density: f64) -> Result<Self> {
        if !(bandwidth > 0.0) || !(noise_density > 0.0) {
            return Err(Error::domain(format!(
                "bandwidth and noise density must be positive (got {bandwidth}, {noise_density})"
            )));
        }
        let sigma2 = bandwidth * noise_density;
        if (sigma2 - self.noise_variance).abs() > 1e-6 * self.noise_variance {
            return Err(Error::domain(format!(
                "noise variance {} does not match bandwidth * noise density = {sigma2}",
                self.noise_variance
            )));
        }
        self.bits_per_second = Some(BitsPerSecond {
            bandwidth,
            noise_density,
            value: bandwidth * self.bits_per_use,
        });
        Ok(self)
    }
}

/// Capacity `sum log2(1 + q_n*lambda_n/sigma^2)` for a spectrum and an
/// allocation of matching length.
pub fn capacity(
    spectrum: &EigenSpectrum,
    allocation: &PowerAllocation,
    sigma2: f64,
) -> Result<CapacityResult> {
    if spectrum.len() != allocation.len() {
        return Err(Error::domain(format!(
            "allocation length {} does not match spectrum length {}",
            allocation.len(),
            spectrum.len()
        )));
    }
    if !(sigma2 > 0.0) {
        return Err(Error::domain(format!(
            "sigma2 must be positive (got {sigma2})"
        )));
    }
    let rates: Vec<f64> = spectrum
        .values()
        .iter()
        .zip(allocation.powers())
        .map(|(l, q)| (1.0 + q * l / sigma2).log2())
        .collect();
    Ok(CapacityResult {
        bits_per_use: rates.iter().sum(),
        per_dimension_rates: rates,
        allocation: allocation.clone(),
        noise_variance: sigma2,
        bits_per_second: None,
    })
}

/// Optimal-spacing capacity in closed form, valid above the water-filling
/// threshold (all `2M` dimensions active):
/// `M*log2(1 + P*mu1*beta/(2*sigma^2) + (mu1-mu2)/(2*mu2))
///  + M*log2(1 + P*mu2*beta/(2*sigma^2) + (mu2-mu1)/(2*mu1))`.
/// Undefined at `mu2 = 0`; route that case through [`waterfill`].
pub fn optimal_capacity_closed_form(
    mu1: f64,
    mu2: f64,
    beta: f64,
    m: usize,
    total_power: f64,
    sigma2: f64,
) -> Result<f64> {
    if !(mu2 > 0.0) {
        return Err(Error::domain(format!(
            "closed-form capacity is undefined at mu2 = {mu2}; use the water-filling path"
        )));
    }
    if !(mu1 >= mu2) {
        return Err(Error::domain(format!(
            "closed-form capacity requires mu1 >= mu2 (got {mu1}, {mu2})"
        )));
    }
    if !(beta > 0.0) || m < 1 || !(total_power > 0.0) || !(sigma2 > 0.0) {
        return Err(Error::domain(
            "closed-form capacity requires positive beta, power, sigma2 and m >= 1".to_string(),
        ));
    }
    let threshold = two_level_threshold(mu1, mu2, beta, sigma2);
    if total_power <= threshold {
        return Err(Error::domain(format!(
            "closed-form capacity requires total_power > {threshold} (got {total_power})"
        )));
    }
    let mf = m as f64;
    let snr = total_power * beta / (2.0 * sigma2);
    Ok(mf * (1.0 + snr * mu1 + (mu1 - mu2) / (2.0 * mu2)).log2()
        + mf * (1.0 + snr * mu2 + (mu2 - mu1) / (2.0 * mu1)).log2())
}

/// Jensen upper bound on the equal-power dual-polarized capacity of any
/// spacing with the given single-polarized factor spectrum:
/// `sum_i M*log2(1 + P*mu_i/(2*M*sigma^2) * mean(lambda))`. Tight exactly
/// when all factor eigenvalues are equal.
pub fn jensen_equal_power_bound(
    factor_spectrum: &EigenSpectrum,
    xpd: &XpdModel,
    total_power: f64,
    sigma2: f64,
    m: usize,
) -> Result<f64> {
    if factor_spectrum.len() != m {
        return Err(Error::domain(format!(
            "factor spectrum length {} does not match antenna count {m}",
            factor_spectrum.len()
        )));
    }
    if !(total_power >= 0.0) || !(sigma2 > 0.0) {
        return Err(Error::domain(
            "jensen bound requires total_power >= 0 and sigma2 > 0".to_string(),
        ));
    }
    let mf = m as f64;
    let mean = factor_spectrum.sum() / mf;
    let (mu1, mu2) = xpd.eigenvalues();
    Ok([mu1, mu2]
        .iter()
        .map(|mu| mf * (1.0 + total_power * mu * mean / (2.0 * mf * sigma2)).log2())
        .sum())
}

/// Bits per second from bits per channel use at bandwidth `b`.
pub fn capacity_bps(bits_per_use: f64, bandwidth: f64) -> Result<f64> {
    if !(bandwidth > 0.0) {
        return Err(Error::domain(format!(
            "bandwidth must be positive (got {bandwidth})"
        )));
    }
    if !(bits_per_use >= 0.0) {
        return Err(Error::domain(format!(
            "bits per use must be nonnegative (got {bits_per_use})"
        )));
    }
    Ok(bandwidth * bits_per_use)
}

/// Perfect-XPD optimal-spacing capacity in bits per second:
/// `2*B*M*log2(1 + (P/N0)*beta/(2*B))`. `m` may be fractional to admit the
/// continuous antenna-count law.
pub fn kappa_zero_capacity_bps(m: f64, p_over_n0: f64, beta: f64, bandwidth: f64) -> Result<f64> {
    if !(m > 0.0) || !(p_over_n0 > 0.0) || !(beta > 0.0) || !(bandwidth > 0.0) {
        return Err(Error::domain(
            "capacity inputs must all be positive".to_string(),
        ));
    }
    let snr = p_over_n0 * beta / (2.0 * bandwidth);
    Ok(2.0 * bandwidth * m * (1.0 + snr).log2())
}
