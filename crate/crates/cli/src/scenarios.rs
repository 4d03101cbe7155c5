//! Scenario implementations: each resolves its parameters from the config
//! (defaults reproduce the reference experiment recipes), computes rows, and
//! returns a [`ScenarioOutput`] for CSV emission.

use rayon::prelude::*;

use losmimo::aperture_gain::{
    directive_element_side, realistic_pair_gains, GainConvention, QuadratureRule,
};
use losmimo::channel::{
    channel_gain_far, dual_pol, exact_single_pol, fresnel_single_pol, ChannelMatrix, GainModel,
    PairGainTable, XpdModel,
};
use losmimo::eigencap::{
    capacity, gram_eigenvalues, kappa_zero_capacity_bps, waterfill, EigenSpectrum,
};
use losmimo::geometry::{
    beam_footprint, first_null_beamwidth, fraunhofer_array_distance, LinkGeometry, SpacingSplit,
};
use losmimo::optimizer::{
    grid_oracle_with_surface, minimize_area, minimize_length, ApertureObjective, GeometryProblem,
    GeometrySolution, SolutionSource,
};
use losmimo::scaling::{
    capacity_vs_frequency, log_grid, max_antennas_approx, max_antennas_exact,
    max_antennas_integer, BandwidthModel, CountModel, FixedAreaSpec,
};

use crate::config::Config;
use crate::output::{Cell, ScenarioOutput};
use crate::{CliError, RunEnv};

pub const SCENARIOS: &[&str] = &[
    "spacing-sweep",
    "kappa-sweep",
    "antennas-vs-frequency",
    "design",
    "capacity",
    "geometry",
    "freq-sweep",
    "realistic",
    "vc-example",
];

pub fn run_scenario(name: &str, cfg: &Config, env: &RunEnv) -> Result<ScenarioOutput, CliError> {
    let out = match name {
        "spacing-sweep" => spacing_sweep(cfg, env),
        "kappa-sweep" => kappa_sweep(cfg, env),
        "antennas-vs-frequency" => antennas_vs_frequency(cfg, env),
        "design" => design(cfg, env),
        "capacity" => capacity_query(cfg, env),
        "geometry" => geometry_query(cfg, env),
        "freq-sweep" => freq_sweep(cfg, env),
        "realistic" => realistic(cfg, env),
        "vc-example" => vc_example(cfg, env),
        other => Err(CliError::config(format!(
            "unknown scenario `{other}` (expected one of: {})",
            SCENARIOS.join(", ")
        ))),
    }?;
    let unused = cfg.unused_keys();
    if !unused.is_empty() {
        return Err(CliError::config(format!(
            "unrecognized parameters: {}",
            unused.join(", ")
        )));
    }
    Ok(out)
}

/// `link.wavelength_m` wins when present; otherwise `link.frequency_hz`
/// converted with the run's speed of light.
fn resolve_wavelength(cfg: &Config, env: &RunEnv, default_f: f64) -> Result<f64, CliError> {
    if let Some(lambda) = cfg.get_f64("link.wavelength_m")? {
        if !(lambda > 0.0) {
            return Err(CliError::config(format!(
                "parameter `link.wavelength_m` must be positive (got {lambda})"
            )));
        }
        return Ok(lambda);
    }
    let f = cfg.f64_or("link.frequency_hz", default_f)?;
    Ok(losmimo::wavelength(f, env.c)?)
}

fn snr_linear(cfg: &Config, key: &str, default_db: f64) -> Result<f64, CliError> {
    let db = cfg.f64_or(key, default_db)?;
    Ok(10f64.powf(db / 10.0))
}

fn output(
    scenario: &str,
    columns: Vec<&str>,
    rows: Vec<Vec<Cell>>,
    cfg: &Config,
    notices: Vec<String>,
) -> ScenarioOutput {
    ScenarioOutput {
        scenario: scenario.to_string(),
        columns: columns.into_iter().map(str::to_string).collect(),
        rows,
        params: cfg.resolved(),
        notices,
    }
}

/// Full pipeline: Gram spectrum, water-filling, capacity in bits/use.
fn pipeline_capacity(
    channel: &ChannelMatrix,
    total_power: f64,
    sigma2: f64,
) -> Result<f64, losmimo::Error> {
    let spectrum = gram_eigenvalues(channel)?;
    let alloc = waterfill(&spectrum, total_power, sigma2)?;
    Ok(capacity(&spectrum, &alloc, sigma2)?.bits_per_use())
}

fn spectrum_capacity(
    spectrum: &EigenSpectrum,
    total_power: f64,
    sigma2: f64,
) -> Result<f64, losmimo::Error> {
    let alloc = waterfill(spectrum, total_power, sigma2)?;
    Ok(capacity(spectrum, &alloc, sigma2)?.bits_per_use())
}

/// Capacity against a symmetric spacing sweep with the exact and Fresnel
/// models, dual- and single-polarized.
fn spacing_sweep(cfg: &Config, env: &RunEnv) -> Result<ScenarioOutput, CliError> {
    let lambda = resolve_wavelength(cfg, env, 30e9)?;
    let distance = cfg.f64_or("link.distance_m", 100.0)?;
    let m_h = cfg.usize_or("array.m_h", 8)?;
    let m_v = cfg.usize_or("array.m_v", 8)?;
    let width = cfg.f64_or("array.element_width_m", lambda / 2.0)?;
    let kappas = cfg.list_f64_or("xpd.kappa_list", &[0.0, 0.1])?;
    let snr = snr_linear(cfg, "snr.p_beta_over_sigma2_db", 25.0)?;
    let start = cfg.f64_or("sweep.start_m", 0.05)?;
    let stop = cfg.f64_or("sweep.stop_m", 0.60)?;
    let points = cfg.usize_or("sweep.points", 200)?;
    if !(start > 0.0) || !(stop > start) || points < 2 {
        return Err(CliError::config(format!(
            "invalid spacing grid: start {start}, stop {stop}, points {points}"
        )));
    }
    let xpds = kappas
        .iter()
        .map(|k| XpdModel::from_kappa(*k))
        .collect::<Result<Vec<_>, _>>()?;

    let sigma2 = 1.0;
    let rows: Vec<Vec<Cell>> = (0..points)
        .into_par_iter()
        .map(|i| {
            let delta = start + (stop - start) * i as f64 / (points - 1) as f64;
            let link = LinkGeometry::uniform_spacing(m_h, m_v, lambda, distance, width, delta)?;
            let beta = channel_gain_far(&link, &GainModel::Isotropic)?;
            let p = snr * sigma2 / beta;

            let h_exact = exact_single_pol(&link, &GainModel::Isotropic)?;
            let h_fresnel = fresnel_single_pol(&link, &GainModel::Isotropic)?;

            let mut row = vec![Cell::F(delta)];
            for xpd in &xpds {
                let c_exact = pipeline_capacity(&dual_pol(&h_exact, xpd)?, p, sigma2)?;
                let c_fresnel = pipeline_capacity(&dual_pol(&h_fresnel, xpd)?, p, sigma2)?;
                row.push(Cell::F(c_exact));
                row.push(Cell::F(c_fresnel));
            }
            row.push(Cell::F(pipeline_capacity(&h_exact, p, sigma2)?));
            Ok::<_, losmimo::Error>(row)
        })
        .collect::<Result<_, _>>()?;

    let mut columns = vec!["delta_m".to_string()];
    for k in &kappas {
        columns.push(format!("capacity_exact_dual_kappa{k}"));
        columns.push(format!("capacity_fresnel_dual_kappa{k}"));
    }
    columns.push("capacity_exact_single".to_string());

    Ok(ScenarioOutput {
        scenario: "spacing-sweep".to_string(),
        columns,
        rows,
        params: cfg.resolved(),
        notices: vec![],
    })
}

/// Optimal-spacing capacity against the cross-talk fraction, dual- vs
/// single-polarized.
fn kappa_sweep(cfg: &Config, env: &RunEnv) -> Result<ScenarioOutput, CliError> {
    let lambda = resolve_wavelength(cfg, env, 30e9)?;
    let distance = cfg.f64_or("link.distance_m", 100.0)?;
    let m = cfg.usize_or("antennas.m", 128)?;
    let snr = snr_linear(cfg, "snr.p_beta_over_sigma2_db", 25.0)?;
    let points = cfg.usize_or("sweep.points", 21)?;
    if m < 1 || points < 2 {
        return Err(CliError::config(format!(
            "kappa sweep requires antennas.m >= 1 and sweep.points >= 2 (got {m}, {points})"
        )));
    }

    let link = LinkGeometry::uniform_spacing(1, 1, lambda, distance, 0.0, 0.0)?;
    let beta = channel_gain_far(&link, &GainModel::Isotropic)?;
    let sigma2 = 1.0;
    let p = snr * sigma2 / beta;

    let single_spectrum = EigenSpectrum::new(vec![beta * m as f64; m])?;
    let c_single = spectrum_capacity(&single_spectrum, p, sigma2)?;

    let rows: Vec<Vec<Cell>> = (0..points)
        .into_par_iter()
        .map(|i| {
            let kappa = i as f64 / (points - 1) as f64;
            let (mu1, mu2) = XpdModel::from_kappa(kappa)?.eigenvalues();
            let spectrum = EigenSpectrum::two_level(mu1, mu2, beta, m)?;
            let c_dual = spectrum_capacity(&spectrum, p, sigma2)?;
            Ok::<_, losmimo::Error>(vec![Cell::F(kappa), Cell::F(c_dual), Cell::F(c_single)])
        })
        .collect::<Result<_, _>>()?;

    Ok(output(
        "kappa-sweep",
        vec!["kappa", "capacity_dual", "capacity_single"],
        rows,
        cfg,
        vec![],
    ))
}

/// Antenna-count laws against the carrier frequency at fixed array area.
fn antennas_vs_frequency(cfg: &Config, env: &RunEnv) -> Result<ScenarioOutput, CliError> {
    let area = cfg.f64_or("area.per_array_m2", 5.0)?;
    let distance = cfg.f64_or("link.distance_m", 80.0)?;
    let w = cfg.f64_or("element.width_factor", 0.5)?;
    let start = cfg.f64_or("sweep.start_hz", 3e9)?;
    let stop = cfg.f64_or("sweep.stop_hz", 3e12)?;
    let points = cfg.usize_or("sweep.points", 61)?;
    let grid = log_grid(start, stop, points)?;

    let spec = FixedAreaSpec::new(
        area,
        distance,
        w,
        1.0,
        BandwidthModel::Fixed { hz: 1.0 },
        GainModel::Isotropic,
    )?;

    let rows: Vec<Vec<Cell>> = grid
        .par_iter()
        .map(|f| {
            let lambda = env.c / f;
            let m_exact = max_antennas_exact(&spec, lambda)
                .map_err(|e| losmimo::Error::Domain(format!("at frequency {f} Hz: {e}")))?;
            let m_approx = max_antennas_approx(lambda, distance, area)?;
            let m_int = max_antennas_integer(&spec, lambda)?;
            Ok::<_, losmimo::Error>(vec![
                Cell::F(*f),
                Cell::F(lambda),
                Cell::F(m_exact),
                Cell::F(m_approx),
                Cell::I(m_int),
            ])
        })
        .collect::<Result<_, _>>()?;

    Ok(output(
        "antennas-vs-frequency",
        vec!["f_hz", "lambda_m", "m_exact", "m_approx", "m_int"],
        rows,
        cfg,
        vec![],
    ))
}

/// One-shot design report: optimal spacing, aperture dimensions, Fraunhofer
/// distance, beamwidths and footprints.
fn design(cfg: &Config, env: &RunEnv) -> Result<ScenarioOutput, CliError> {
    let lambda = resolve_wavelength(cfg, env, 30e9)?;
    let distance = cfg.req_f64("link.distance_m")?;
    let m_h = cfg.req_usize("array.m_h")?;
    let m_v = cfg.req_usize("array.m_v")?;
    let width = cfg.f64_or("array.element_width_m", lambda / 2.0)?;

    let link = LinkGeometry::symmetric_optimal(m_h, m_v, lambda, distance, width)?;
    let array = link.tx();
    let (l_h, l_v) = array.aperture_lengths();
    let d_fa = fraunhofer_array_distance(distance, m_h, m_v)?;
    let bw_h = first_null_beamwidth(lambda, m_h, array.spacing_h())?;
    let bw_v = first_null_beamwidth(lambda, m_v, array.spacing_v())?;

    let row = vec![
        Cell::I(m_h as u64),
        Cell::I(m_v as u64),
        Cell::F(lambda),
        Cell::F(array.spacing_h()),
        Cell::F(array.spacing_v()),
        Cell::F(l_h),
        Cell::F(l_v),
        Cell::F(array.diagonal()),
        Cell::F(d_fa),
        Cell::B(distance <= d_fa / 10.0),
        Cell::B(link.far_channel_gain_ok()),
        Cell::F(bw_h),
        Cell::F(bw_v),
        Cell::F(beam_footprint(distance, lambda, m_h)?),
        Cell::F(beam_footprint(distance, lambda, m_v)?),
    ];

    Ok(output(
        "design",
        vec![
            "m_h",
            "m_v",
            "lambda_m",
            "spacing_h_m",
            "spacing_v_m",
            "aperture_l_h_m",
            "aperture_l_v_m",
            "array_diagonal_m",
            "fraunhofer_array_distance_m",
            "finite_depth_beamforming",
            "far_channel_gain_ok",
            "first_null_beamwidth_h_rad",
            "first_null_beamwidth_v_rad",
            "beam_footprint_h_m",
            "beam_footprint_v_m",
        ],
        vec![row],
        cfg,
        vec![],
    ))
}

/// One-shot capacity at a configured spacing (optimal by default) through
/// the chosen channel model.
fn capacity_query(cfg: &Config, env: &RunEnv) -> Result<ScenarioOutput, CliError> {
    let lambda = resolve_wavelength(cfg, env, 30e9)?;
    let distance = cfg.f64_or("link.distance_m", 100.0)?;
    let m_h = cfg.usize_or("array.m_h", 8)?;
    let m_v = cfg.usize_or("array.m_v", 8)?;
    let width = cfg.f64_or("array.element_width_m", lambda / 2.0)?;
    let kappa = cfg.f64_or("xpd.kappa", 0.0)?;
    let snr = snr_linear(cfg, "snr.p_beta_over_sigma2_db", 25.0)?;
    let model = cfg.str_or("channel.model", "exact");
    let bandwidth = cfg.get_f64("bandwidth.hz")?;

    let link = match cfg.get_f64("array.spacing_m")? {
        Some(delta) => LinkGeometry::uniform_spacing(m_h, m_v, lambda, distance, width, delta)?,
        None => LinkGeometry::symmetric_optimal(m_h, m_v, lambda, distance, width)?,
    };
    let beta = channel_gain_far(&link, &GainModel::Isotropic)?;
    let sigma2 = 1.0;
    let p = snr * sigma2 / beta;
    let m = link.tx().count();
    let xpd = XpdModel::from_kappa(kappa)?;

    let bits = match model.as_str() {
        "two-level" => {
            let (mu1, mu2) = xpd.eigenvalues();
            spectrum_capacity(&EigenSpectrum::two_level(mu1, mu2, beta, m)?, p, sigma2)?
        }
        "fresnel" => {
            let h = fresnel_single_pol(&link, &GainModel::Isotropic)?;
            pipeline_capacity(&dual_pol(&h, &xpd)?, p, sigma2)?
        }
        "exact" => {
            let h = exact_single_pol(&link, &GainModel::Isotropic)?;
            pipeline_capacity(&dual_pol(&h, &xpd)?, p, sigma2)?
        }
        other => {
            return Err(CliError::config(format!(
                "parameter `channel.model`: `{other}` is not one of exact, fresnel, two-level"
            )))
        }
    };

    let mut columns = vec![
        "model",
        "kappa",
        "m_locations",
        "multiplexing_gain",
        "capacity_bits_per_use",
        "mean_bits_per_dimension",
    ];
    let mut row = vec![
        Cell::S(model.clone()),
        Cell::F(kappa),
        Cell::I(m as u64),
        Cell::I(2 * m as u64),
        Cell::F(bits),
        Cell::F(bits / (2 * m) as f64),
    ];
    if let Some(b) = bandwidth {
        columns.push("capacity_bps");
        row.push(Cell::F(losmimo::eigencap::capacity_bps(bits, b)?));
    }

    Ok(output("capacity", columns, vec![row], cfg, vec![]))
}

fn solution_row(objective: &str, sol: &GeometrySolution) -> Vec<Cell> {
    let source = match sol.source {
        SolutionSource::ClosedForm => "closed_form",
        SolutionSource::GridOracle => "grid_oracle",
    };
    vec![
        Cell::S(objective.to_string()),
        Cell::S(source.to_string()),
        Cell::I(sol.m_h as u64),
        Cell::I(sol.m_v as u64),
        Cell::F(sol.alpha),
        Cell::F(sol.gamma),
        Cell::F(sol.objective_value),
    ]
}

/// Closed-form aperture minimizers with the exhaustive grid oracle beside
/// them.
fn geometry_query(cfg: &Config, env: &RunEnv) -> Result<ScenarioOutput, CliError> {
    let m = cfg.usize_or("antennas.m", 64)?;
    let lambda = resolve_wavelength(cfg, env, 30e9)?;
    let distance = cfg.f64_or("link.distance_m", 100.0)?;
    let width = cfg.f64_or("array.element_width_m", lambda / 2.0)?;
    let alpha_steps = cfg.usize_or("oracle.alpha_steps", 101)?;
    let gamma_steps = cfg.usize_or("oracle.gamma_steps", 101)?;

    let mut rows = Vec::new();
    for (name, objective) in [
        ("length", ApertureObjective::Length),
        ("area", ApertureObjective::Area),
    ] {
        let problem = GeometryProblem::new(m, lambda, distance, width, objective)?;
        let closed = match objective {
            ApertureObjective::Length => minimize_length(&problem)?,
            ApertureObjective::Area => minimize_area(&problem)?,
        };
        let (oracle, _surface) = grid_oracle_with_surface(&problem, alpha_steps, gamma_steps)?;
        rows.push(solution_row(name, &closed));
        rows.push(solution_row(name, &oracle));
    }

    Ok(output(
        "geometry",
        vec![
            "objective",
            "source",
            "m_h",
            "m_v",
            "alpha",
            "gamma",
            "objective_value",
        ],
        rows,
        cfg,
        vec![],
    ))
}

fn bandwidth_model(cfg: &Config) -> Result<BandwidthModel, CliError> {
    let model = cfg.str_or("bandwidth.model", "proportional");
    match model.as_str() {
        "proportional" => Ok(BandwidthModel::Proportional {
            coefficient: cfg.f64_or("bandwidth.coefficient", 0.03)?,
        }),
        "fixed" => Ok(BandwidthModel::Fixed {
            hz: cfg.f64_or("bandwidth.hz", 90e6)?,
        }),
        other => Err(CliError::config(format!(
            "parameter `bandwidth.model`: `{other}` is not one of proportional, fixed"
        ))),
    }
}

/// Capacity versus carrier frequency for the three gain designs.
fn freq_sweep(cfg: &Config, env: &RunEnv) -> Result<ScenarioOutput, CliError> {
    let area = cfg.f64_or("area.per_array_m2", 5.0)?;
    let distance = cfg.f64_or("link.distance_m", 80.0)?;
    let w = cfg.f64_or("element.width_factor", 0.5)?;
    let p_over_n0 = snr_linear(cfg, "power.p_over_n0_db", 204.0)?;
    let bw = bandwidth_model(cfg)?;
    let count_model = match cfg.str_or("count.model", "exact").as_str() {
        "exact" => CountModel::Exact,
        "approx" => CountModel::Approximate,
        "integer" => CountModel::Integer,
        other => {
            return Err(CliError::config(format!(
                "parameter `count.model`: `{other}` is not one of exact, approx, integer"
            )))
        }
    };
    let start = cfg.f64_or("sweep.start_hz", 3e9)?;
    let stop = cfg.f64_or("sweep.stop_hz", 10e12)?;
    let points = cfg.usize_or("sweep.points", 41)?;
    let grid = log_grid(start, stop, points)?;

    let gains = [
        GainModel::Isotropic,
        GainModel::WavelengthPower { g0: 1.0, rho: 1.0 },
        GainModel::WavelengthPower { g0: 1.0, rho: 2.0 },
    ];
    let mut sweeps = Vec::new();
    for gain in gains {
        let spec = FixedAreaSpec::new(area, distance, w, p_over_n0, bw, gain)?;
        sweeps.push(capacity_vs_frequency(&spec, &grid, count_model, env.c)?);
    }

    let rows: Vec<Vec<Cell>> = (0..grid.len())
        .map(|i| {
            vec![
                Cell::F(sweeps[0][i].frequency),
                Cell::F(sweeps[0][i].wavelength),
                Cell::F(sweeps[0][i].count_real),
                Cell::I(sweeps[0][i].count_int),
                Cell::F(sweeps[0][i].capacity_bps),
                Cell::F(sweeps[1][i].capacity_bps),
                Cell::F(sweeps[2][i].capacity_bps),
            ]
        })
        .collect();

    Ok(output(
        "freq-sweep",
        vec![
            "f_hz",
            "lambda_m",
            "m_exact",
            "m_int",
            "capacity_isotropic_bps",
            "capacity_directive_rx_bps",
            "capacity_directive_both_bps",
        ],
        rows,
        cfg,
        vec![],
    ))
}

/// Realistic quadrature-gain pipeline against the ideal directive model.
fn realistic(cfg: &Config, env: &RunEnv) -> Result<ScenarioOutput, CliError> {
    let area = cfg.f64_or("area.per_array_m2", 5.0)?;
    let distance = cfg.f64_or("link.distance_m", 80.0)?;
    let w = cfg.f64_or("element.width_factor", 0.5)?;
    let p_over_n0 = snr_linear(cfg, "power.p_over_n0_db", 204.0)?;
    let bw_coefficient = cfg.f64_or("bandwidth.coefficient", 0.03)?;
    let max_locations = cfg.usize_or("realistic.max_locations", 2500)?;
    let directive = cfg.str_or("realistic.directive", "both");
    if directive != "both" && directive != "rx" {
        return Err(CliError::config(format!(
            "parameter `realistic.directive`: `{directive}` is not one of both, rx"
        )));
    }
    let start = cfg.f64_or("sweep.start_hz", 10e9)?;
    let stop = cfg.f64_or("sweep.stop_hz", 100e9)?;
    let points = cfg.usize_or("sweep.points", 5)?;
    let grid = log_grid(start, stop, points)?;
    let rule = QuadratureRule::new(env.quad_order)?;

    let count_spec = FixedAreaSpec::new(
        area,
        distance,
        w,
        p_over_n0,
        BandwidthModel::Proportional {
            coefficient: bw_coefficient,
        },
        GainModel::Isotropic,
    )?;

    let mut rows = Vec::new();
    let mut notices = Vec::new();
    for f in grid {
        let lambda = env.c / f;
        let m_int = max_antennas_integer(&count_spec, lambda)?;
        if m_int as usize > max_locations {
            notices.push(format!(
                "skipped {f} Hz: {m_int} antenna locations exceed realistic.max_locations = {max_locations}"
            ));
            continue;
        }
        let n_side = (m_int as f64).sqrt().round() as usize;
        let bandwidth = bw_coefficient * f;
        let n0 = 1e-20;
        let p = p_over_n0 * n0;
        let sigma2 = bandwidth * n0;

        let side = directive_element_side(lambda)?;
        let link =
            LinkGeometry::symmetric_optimal(n_side, n_side, lambda, distance, w * lambda)?;
        let report = realistic_pair_gains(&link, side, side, GainConvention::ApertureScaled, &rule)?;
        let table = if directive == "rx" {
            // Isotropic transmit side: unit transmit gains, quadrature
            // receive gains.
            let m = link.tx().count();
            let mut rx = Vec::with_capacity(m * m);
            for mm in 1..=m {
                for kk in 1..=m {
                    rx.push(report.table.rx_gain(mm, kk));
                }
            }
            PairGainTable::new(m, m, vec![1.0; m * m], rx)?
        } else {
            report.table
        };
        if report.accuracy_warnings > 0 {
            notices.push(format!(
                "{f} Hz: {} pair integrals tripped the phase-resolution estimate",
                report.accuracy_warnings
            ));
        }

        let h = exact_single_pol(&link, &GainModel::PerPair(table))?;
        let factor = gram_eigenvalues(&h)?;
        let spectrum = factor.with_xpd(&XpdModel::perfect());
        let bits = spectrum_capacity(&spectrum, p, sigma2)?;
        let realistic_bps = bits * bandwidth;

        let beta_ideal = match directive.as_str() {
            "rx" => lambda / (4.0 * std::f64::consts::PI * distance).powi(2),
            _ => 1.0 / (4.0 * std::f64::consts::PI * distance).powi(2),
        };
        let ideal_bps = kappa_zero_capacity_bps(m_int as f64, p_over_n0, beta_ideal, bandwidth)?;

        rows.push(vec![
            Cell::F(f),
            Cell::F(lambda),
            Cell::I(m_int),
            Cell::F(ideal_bps),
            Cell::F(realistic_bps),
            Cell::F(realistic_bps / ideal_bps),
        ]);
    }

    Ok(output(
        "realistic",
        vec![
            "f_hz",
            "lambda_m",
            "m_locations",
            "capacity_ideal_bps",
            "capacity_realistic_bps",
            "capacity_ratio",
        ],
        rows,
        cfg,
        notices,
    ))
}

/// Base-station/device report: asymmetric spacing splits that keep the
/// capacity while shrinking one array.
fn vc_example(cfg: &Config, env: &RunEnv) -> Result<ScenarioOutput, CliError> {
    let lambda = resolve_wavelength(cfg, env, 100e9)?;
    let distance = cfg.f64_or("link.distance_m", 50.0)?;
    let m_h = cfg.usize_or("array.m_h", 8)?;
    let m_v = cfg.usize_or("array.m_v", 8)?;
    let width = cfg.f64_or("array.element_width_m", lambda / 2.0)?;
    let alphas = cfg.list_f64_or("split.alpha_list", &[0.5, 0.25, 0.01])?;
    let bandwidth = cfg.f64_or("bandwidth.hz", 3e9)?;
    let per_element = cfg.f64_or("power.per_element_w", 1.0)?;
    // Thermal noise density at 290 K by default.
    let n0 = cfg.f64_or("noise.density_w_per_hz", 4.0e-21)?;
    let kappa = cfg.f64_or("xpd.kappa", 0.0)?;

    let m = m_h * m_v;
    let p = per_element * (2 * m) as f64;
    let sigma2 = bandwidth * n0;
    let xpd = XpdModel::from_kappa(kappa)?;

    let rows: Vec<Vec<Cell>> = alphas
        .par_iter()
        .map(|alpha| {
            let split = SpacingSplit::new(*alpha, *alpha)?;
            let link =
                LinkGeometry::split_optimal(m_h, m_v, lambda, distance, width, &split)?;
            let h = fresnel_single_pol(&link, &GainModel::Isotropic)?;
            let dual = dual_pol(&h, &xpd)?;
            let spectrum = gram_eigenvalues(&dual)?;
            let alloc = waterfill(&spectrum, p, sigma2)?;
            let result = capacity(&spectrum, &alloc, sigma2)?.with_bandwidth(bandwidth, n0)?;
            let bps = result.bits_per_second().expect("bandwidth attached").value;
            Ok::<_, losmimo::Error>(vec![
                Cell::F(*alpha),
                Cell::F(link.tx().spacing_h()),
                Cell::F(link.rx().spacing_h()),
                Cell::F(link.tx().aperture_area()),
                Cell::F(link.rx().aperture_area()),
                Cell::F(result.bits_per_use()),
                Cell::F(bps),
            ])
        })
        .collect::<Result<_, _>>()?;

    Ok(output(
        "vc-example",
        vec![
            "alpha",
            "spacing_tx_m",
            "spacing_rx_m",
            "tx_area_m2",
            "rx_area_m2",
            "capacity_bits_per_use",
            "capacity_bps",
        ],
        rows,
        cfg,
        vec![],
    ))
}
