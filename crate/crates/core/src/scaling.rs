//! Capacity scaling with the carrier frequency at fixed array area.
//!
//! A fixed face area admits more optimally spaced antennas as the wavelength
//! shrinks — asymptotically `(A/(lambda*d))^2` — so the multiplexing gain
//! grows quadratically in the carrier frequency while the per-dimension SNR
//! falls. With isotropic elements the capacity saturates at a finite limit;
//! with directive elements whose gain product grows like `1/lambda^rho` it
//! diverges like `f^rho`.

use crate::channel::{far_field_gain, GainModel};
use crate::eigencap::kappa_zero_capacity_bps;
use crate::par;
use crate::{Error, Result};

/// Bandwidth as a function of the carrier frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BandwidthModel {
    /// `B = coefficient * f`, e.g. 0.03 (90 MHz at 3 GHz, 900 MHz at 30 GHz).
    Proportional { coefficient: f64 },
    /// Constant bandwidth in hertz.
    Fixed { hz: f64 },
}

impl BandwidthModel {
    fn validate(&self) -> Result<()> {
        match self {
            BandwidthModel::Proportional { coefficient } if !(*coefficient > 0.0) => Err(
                Error::domain(format!("bandwidth coefficient must be positive (got {coefficient})")),
            ),
            BandwidthModel::Fixed { hz } if !(*hz > 0.0) => Err(Error::domain(format!(
                "fixed bandwidth must be positive (got {hz})"
            ))),
            _ => Ok(()),
        }
    }

    pub fn bandwidth(&self, frequency: f64) -> f64 {
        match self {
            BandwidthModel::Proportional { coefficient } => coefficient * frequency,
            BandwidthModel::Fixed { hz } => *hz,
        }
    }
}

/// A fixed-area deployment: per-array face area `A`, link distance `d`,
/// element width `W = w * lambda`, transmit SNR density `P/N0` (linear,
/// in hertz), and the bandwidth and gain laws.
#[derive(Debug, Clone, PartialEq)]
pub struct FixedAreaSpec {
    area: f64,
    distance: f64,
    element_width_factor: f64,
    power_density_ratio: f64,
    bandwidth_model: BandwidthModel,
    gain_model: GainModel,
}

impl FixedAreaSpec {
    pub fn new(
        area: f64,
        distance: f64,
        element_width_factor: f64,
        power_density_ratio: f64,
        bandwidth_model: BandwidthModel,
        gain_model: GainModel,
    ) -> Result<Self> {
        if !(area > 0.0) || !(distance > 0.0) {
            return Err(Error::domain(format!(
                "area and distance must be positive (got {area}, {distance})"
            )));
        }
        if !(element_width_factor >= 0.0) {
            return Err(Error::domain(format!(
                "element width factor must be nonnegative (got {element_width_factor})"
            )));
        }
        if !(power_density_ratio > 0.0) {
            return Err(Error::domain(format!(
                "P/N0 must be positive (got {power_density_ratio})"
            )));
        }
        bandwidth_model.validate()?;
        gain_model.validate()?;
        if matches!(gain_model, GainModel::PerPair(_)) {
            return Err(Error::domain(
                "per-pair gain tables cannot drive a frequency sweep".to_string(),
            ));
        }
        Ok(FixedAreaSpec {
            area,
            distance,
            element_width_factor,
            power_density_ratio,
            bandwidth_model,
            gain_model,
        })
    }

    pub fn area(&self) -> f64 {
        self.area
    }

    pub fn distance(&self) -> f64 {
        self.distance
    }

    pub fn element_width_factor(&self) -> f64 {
        self.element_width_factor
    }

    pub fn power_density_ratio(&self) -> f64 {
        self.power_density_ratio
    }

    pub fn bandwidth_model(&self) -> BandwidthModel {
        self.bandwidth_model
    }

    pub fn gain_model(&self) -> &GainModel {
        &self.gain_model
    }

    /// Side length of a square array of `n x n` antennas at the optimal
    /// spacing with element width `w*lambda`.
    fn side_length(&self, wavelength: f64, n: u64) -> f64 {
        let spacing = (wavelength * self.distance / n as f64).sqrt();
        spacing * (n - 1) as f64 + self.element_width_factor * wavelength
    }
}

/// Which antenna-count law a sweep uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountModel {
    /// Continuous closed form (quartic root).
    Exact,
    /// Small-wavelength approximation `(A/(lambda*d))^2`.
    Approximate,
    /// Physically deployable integer count (square per-side floor).
    Integer,
}

/// One evaluated point of a frequency sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrequencyPoint {
    pub frequency: f64,
    pub wavelength: f64,
    /// Continuous closed-form count.
    pub count_real: f64,
    /// Deployable count: the square of the per-side floor.
    pub count_int: u64,
    pub capacity_bps: f64,
}

/// Maximum (continuous) number of antennas in a square array of fixed area
/// following the optimal spacing: `M = ((k0 + sqrt(k0^2-4))/2)^2` with
/// `k0 = 2 + (w*lambda - sqrt(A))^2/(lambda*d)`. Equivalently the root of
/// `M^(1/4) - M^(-1/4) = sqrt(A/(lambda*d)) - w*sqrt(lambda/d)`.
pub fn max_antennas_exact(spec: &FixedAreaSpec, wavelength: f64) -> Result<f64> {
    if !(wavelength > 0.0) {
        return Err(Error::domain(format!(
            "wavelength must be positive (got {wavelength})"
        )));
    }
    let sqrt_a = spec.area.sqrt();
    let w_lambda = spec.element_width_factor * wavelength;
    if w_lambda >= sqrt_a {
        return Err(Error::domain(format!(
            "element width {w_lambda} m is not smaller than the aperture side {sqrt_a} m"
        )));
    }
    let k0 = 2.0 + (w_lambda - sqrt_a).powi(2) / (wavelength * spec.distance);
    let root = 0.5 * (k0 + (k0 * k0 - 4.0).sqrt());
    Ok(root * root)
}

/// Largest deployable count: the biggest `n` with
/// `sqrt(lambda*d/n)*(n-1) + w*lambda <= sqrt(A)`, returned as `n^2`.
/// Coincides with the per-side floor of [`max_antennas_exact`].
pub fn max_antennas_integer(spec: &FixedAreaSpec, wavelength: f64) -> Result<u64> {
    let m_real = max_antennas_exact(spec, wavelength)?;
    let sqrt_a = spec.area.sqrt();
    let mut n = m_real.sqrt().floor().max(1.0) as u64;
    // Guard the closed form against rounding at the boundary.
    while spec.side_length(wavelength, n + 1) <= sqrt_a {
        n += 1;
    }
    while n > 1 && spec.side_length(wavelength, n) > sqrt_a {
        n -= 1;
    }
    Ok(n * n)
}

/// Small-wavelength approximation `(A/(lambda*d))^2` of the antenna count;
/// its relative error against the exact count decays like `4*lambda*d/A`.
pub fn max_antennas_approx(wavelength: f64, distance: f64, area: f64) -> Result<f64> {
    if !(wavelength > 0.0) || !(distance > 0.0) || !(area > 0.0) {
        return Err(Error::domain(
            "approximate count requires positive wavelength, distance and area".to_string(),
        ));
    }
    Ok((area / (wavelength * distance)).powi(2))
}

/// Evaluates an ascending frequency grid: per point the wavelength, antenna
/// counts, bandwidth, gain-scaled channel gain, and the perfect-XPD capacity
/// `2*B*M*log2(1 + (P/N0)*beta/(2B))`. Points evaluate independently in
/// parallel; the output preserves grid order.
pub fn capacity_vs_frequency(
    spec: &FixedAreaSpec,
    frequency_grid: &[f64],
    count_model: CountModel,
    c: f64,
) -> Result<Vec<FrequencyPoint>> {
    if frequency_grid.is_empty() {
        return Err(Error::domain("frequency grid must be nonempty".to_string()));
    }
    if frequency_grid.iter().any(|f| !(*f > 0.0)) {
        return Err(Error::domain(
            "frequency grid must be strictly positive".to_string(),
        ));
    }
    if frequency_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::domain(
            "frequency grid must be strictly ascending".to_string(),
        ));
    }
    if !(c > 0.0) {
        return Err(Error::domain(format!("c must be positive (got {c})")));
    }

    par::try_map_range(frequency_grid.len(), |i| {
        let frequency = frequency_grid[i];
        evaluate_point(spec, frequency, count_model, c)
            .map_err(|e| Error::domain(format!("at frequency {frequency} Hz: {e}")))
    })
}

fn evaluate_point(
    spec: &FixedAreaSpec,
    frequency: f64,
    count_model: CountModel,
    c: f64,
) -> Result<FrequencyPoint> {
    let wavelength = c / frequency;
    let count_real = max_antennas_exact(spec, wavelength)?;
    let count_int = max_antennas_integer(spec, wavelength)?;
    let m = match count_model {
        CountModel::Exact => count_real,
        CountModel::Approximate => max_antennas_approx(wavelength, spec.distance, spec.area)?,
        CountModel::Integer => count_int as f64,
    };
    let bandwidth = spec.bandwidth_model.bandwidth(frequency);
    let beta = far_field_gain(&spec.gain_model, wavelength, spec.distance)?;
    let capacity_bps = kappa_zero_capacity_bps(m, spec.power_density_ratio, beta, bandwidth)?;
    Ok(FrequencyPoint {
        frequency,
        wavelength,
        count_real,
        count_int,
        capacity_bps,
    })
}

/// Finite capacity limit with isotropic antennas as the wavelength shrinks:
/// `(A/(4*pi*d^2))^2 * (P/N0) * log2(e)` — independent of the bandwidth law.
pub fn asymptotic_capacity_limit(area: f64, distance: f64, p_over_n0: f64) -> Result<f64> {
    if !(area > 0.0) || !(distance > 0.0) || !(p_over_n0 > 0.0) {
        return Err(Error::domain(
            "asymptotic limit requires positive area, distance and P/N0".to_string(),
        ));
    }
    let ratio = area / (4.0 * std::f64::consts::PI * distance * distance);
    Ok(ratio * ratio * p_over_n0 * std::f64::consts::LOG2_E)
}

/// Least-squares slope of `log C` against `log f` over the given series.
pub fn growth_exponent(series: &[(f64, f64)]) -> Result<f64> {
    if series.len() < 2 {
        return Err(Error::domain(format!(
            "growth exponent needs at least 2 points (got {})",
            series.len()
        )));
    }
    if series.iter().any(|(f, c)| !(*f > 0.0) || !(*c > 0.0)) {
        return Err(Error::domain(
            "growth exponent requires positive frequencies and capacities".to_string(),
        ));
    }
    let n = series.len() as f64;
    let xs: Vec<f64> = series.iter().map(|(f, _)| f.ln()).collect();
    let ys: Vec<f64> = series.iter().map(|(_, c)| c.ln()).collect();
    let x_mean = xs.iter().sum::<f64>() / n;
    let y_mean = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - x_mean).powi(2)).sum();
    if sxx <= 0.0 {
        return Err(Error::domain(
            "growth exponent window is degenerate: all frequencies equal".to_string(),
        ));
    }
    let sxy: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (x - x_mean) * (y - y_mean))
        .sum();
    Ok(sxy / sxx)
}

/// Geometrically spaced grid of `points` frequencies covering `[lo, hi]`.
pub fn log_grid(lo: f64, hi: f64, points: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0) || !(hi > lo) || points < 2 {
        return Err(Error::domain(format!(
            "log grid requires 0 < lo < hi and points >= 2 (got {lo}, {hi}, {points})"
        )));
    }
    let step = (hi / lo).ln() / (points - 1) as f64;
    Ok((0..points)
        .map(|i| lo * (step * i as f64).exp())
        .collect())
}
