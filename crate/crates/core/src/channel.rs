//! Free-space LOS channel matrices for single- and dual-polarized arrays.
//!
//! The exact model phases each entry by the true spherical-wavefront distance
//! `d_{m,k}`; the Fresnel model keeps the paraxial second-order phase and a
//! common gain. Dual polarization with imperfect cross-polar discrimination
//! (XPD) is the Kronecker composition `K (x) H`, whose Gram spectrum is the
//! elementwise product of the factor spectra.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::geometry::LinkGeometry;
use crate::par;
use crate::{Error, Result};

/// Threshold below which a Dirichlet-kernel denominator is treated as null
/// and the removable singularity replaced by its limit.
const DIRICHLET_SIN_EPS: f64 = 1e-12;

/// Cross-polar discrimination model: a fraction `kappa` of the power couples
/// into the opposite polarization between a dual-polarized transmit/receive
/// antenna pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XpdModel {
    kappa: f64,
    leakage: Option<f64>,
}

impl XpdModel {
    /// Model from the cross-talk fraction `kappa` in [0, 1].
    pub fn from_kappa(kappa: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&kappa) {
            return Err(Error::domain(format!(
                "kappa must lie in [0, 1] (got {kappa})"
            )));
        }
        Ok(XpdModel {
            kappa,
            leakage: None,
        })
    }

    /// Model from the per-element leakage fraction `gamma` in [0, 1]:
    /// `kappa = 2*(1-gamma)*gamma`, which never exceeds 0.5.
    pub fn from_leakage(gamma: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&gamma) {
            return Err(Error::domain(format!(
                "leakage gamma must lie in [0, 1] (got {gamma})"
            )));
        }
        Ok(XpdModel {
            kappa: 2.0 * (1.0 - gamma) * gamma,
            leakage: Some(gamma),
        })
    }

    /// Perfect polarization isolation.
    pub fn perfect() -> Self {
        XpdModel {
            kappa: 0.0,
            leakage: Some(0.0),
        }
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn leakage(&self) -> Option<f64> {
        self.leakage
    }

    /// The 2x2 polarization coupling matrix `K`.
    pub fn coupling_matrix(&self) -> [[f64; 2]; 2] {
        let a = (1.0 - self.kappa).sqrt();
        let b = self.kappa.sqrt();
        [[a, b], [b, a]]
    }

    /// Eigenvalues `(mu1, mu2)` of `K^H K`, descending:
    /// `1 +- 2*sqrt((1-kappa)*kappa)`. They sum to 2 for every `kappa` and
    /// are invariant under `kappa -> 1-kappa`.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let s = 2.0 * ((1.0 - self.kappa) * self.kappa).sqrt();
        (1.0 + s, (1.0 - s).max(0.0))
    }
}

/// Eigenpairs of `K^H K`, strongest first. The strong direction transmits the
/// same signal on both polarizations; the weak one transmits with opposite
/// signs.
pub fn xpd_eigenpairs(xpd: &XpdModel) -> [(f64, [f64; 2]); 2] {
    let (mu1, mu2) = xpd.eigenvalues();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    [(mu1, [s, s]), (mu2, [-s, s])]
}

/// Per-pair gain tables indexed by (transmit antenna, receive antenna),
/// both 1-based.
#[derive(Debug, Clone, PartialEq)]
pub struct PairGainTable {
    tx_count: usize,
    rx_count: usize,
    tx_gain: Vec<f64>,
    rx_gain: Vec<f64>,
}

impl PairGainTable {
    pub fn new(
        tx_count: usize,
        rx_count: usize,
        tx_gain: Vec<f64>,
        rx_gain: Vec<f64>,
    ) -> Result<Self> {
        let n = tx_count * rx_count;
        if tx_gain.len() != n || rx_gain.len() != n {
            return Err(Error::domain(format!(
                "pair gain tables must hold {n} entries (got {} and {})",
                tx_gain.len(),
                rx_gain.len()
            )));
        }
        if tx_gain.iter().chain(rx_gain.iter()).any(|g| !(*g > 0.0)) {
            return Err(Error::domain(
                "pair gains must all be positive".to_string(),
            ));
        }
        Ok(PairGainTable {
            tx_count,
            rx_count,
            tx_gain,
            rx_gain,
        })
    }

    /// (transmit count, receive count) the table was built for.
    pub fn dims(&self) -> (usize, usize) {
        (self.tx_count, self.rx_count)
    }

    fn idx(&self, m: usize, k: usize) -> usize {
        (m - 1) * self.rx_count + (k - 1)
    }

    pub fn tx_gain(&self, m: usize, k: usize) -> f64 {
        self.tx_gain[self.idx(m, k)]
    }

    pub fn rx_gain(&self, m: usize, k: usize) -> f64 {
        self.rx_gain[self.idx(m, k)]
    }
}

/// Antenna gain model entering the channel gain
/// `beta_{m,k} = G^t_{m,k} * G^r_{m,k} * (lambda/(4*pi*d_{m,k}))^2`.
#[derive(Debug, Clone, PartialEq)]
pub enum GainModel {
    /// Unit gain at both ends.
    Isotropic,
    /// Constant linear gains over the whole array.
    Fixed { tx: f64, rx: f64 },
    /// Wavelength-scaled product `G^t * G^r = g0 / lambda^rho` with
    /// `rho` in (0, 2]; models directive elements whose effective area
    /// shrinks slower than `lambda^2`.
    WavelengthPower { g0: f64, rho: f64 },
    /// Explicit per-pair gains, e.g. from aperture-integral evaluation.
    PerPair(PairGainTable),
}

impl GainModel {
    /// Checks the table covers every pair of the link's arrays.
    fn validate_for_link(&self, link: &LinkGeometry) -> Result<()> {
        self.validate()?;
        if let GainModel::PerPair(t) = self {
            let want = (link.tx().count(), link.rx().count());
            if t.dims() != want {
                return Err(Error::domain(format!(
                    "pair gain table covers {:?} antennas but the link has {:?}",
                    t.dims(),
                    want
                )));
            }
        }
        Ok(())
    }

    pub(crate) fn validate(&self) -> Result<()> {
        match self {
            GainModel::Isotropic | GainModel::PerPair(_) => Ok(()),
            GainModel::Fixed { tx, rx } => {
                if *tx > 0.0 && *rx > 0.0 {
                    Ok(())
                } else {
                    Err(Error::domain(format!(
                        "fixed gains must be positive (got tx={tx}, rx={rx})"
                    )))
                }
            }
            GainModel::WavelengthPower { g0, rho } => {
                if !(*g0 > 0.0) {
                    Err(Error::domain(format!("g0 must be positive (got {g0})")))
                } else if !(*rho > 0.0 && *rho <= 2.0) {
                    Err(Error::domain(format!(
                        "rho must lie in (0, 2] (got {rho})"
                    )))
                } else {
                    Ok(())
                }
            }
        }
    }

    /// Gain product `G^t * G^r` for the pair `(m, k)`.
    fn product(&self, wavelength: f64, m: usize, k: usize) -> f64 {
        match self {
            GainModel::Isotropic => 1.0,
            GainModel::Fixed { tx, rx } => tx * rx,
            GainModel::WavelengthPower { g0, rho } => g0 / wavelength.powf(*rho),
            GainModel::PerPair(t) => t.tx_gain(m, k) * t.rx_gain(m, k),
        }
    }
}

/// Channel gain `beta_{m,k}` between transmit antenna `m` and receive
/// antenna `k` at the true pair distance.
pub fn channel_gain(link: &LinkGeometry, gains: &GainModel, m: usize, k: usize) -> Result<f64> {
    gains.validate_for_link(link)?;
    let d = link.pair_distance(m, k)?;
    let lambda = link.wavelength();
    Ok(gains.product(lambda, m, k) * (lambda / (4.0 * PI * d)).powi(2))
}

/// Far channel gain `beta`: the common value with the reference distance `d`
/// in place of `d_{m,k}`. Requires a gain model that is constant over pairs.
pub fn channel_gain_far(link: &LinkGeometry, gains: &GainModel) -> Result<f64> {
    far_field_gain(gains, link.wavelength(), link.distance())
}

/// Free-space channel gain `G^t*G^r*(lambda/(4*pi*d))^2` at distance `d` for
/// a pair-independent gain model.
pub fn far_field_gain(gains: &GainModel, wavelength: f64, distance: f64) -> Result<f64> {
    gains.validate()?;
    if matches!(gains, GainModel::PerPair(_)) {
        return Err(Error::domain(
            "far channel gain is undefined for per-pair gain tables".to_string(),
        ));
    }
    if !(wavelength > 0.0) || !(distance > 0.0) {
        return Err(Error::domain(format!(
            "far gain requires positive wavelength and distance (got {wavelength}, {distance})"
        )));
    }
    Ok(gains.product(wavelength, 1, 1) * (wavelength / (4.0 * PI * distance)).powi(2))
}

/// Which phase model generated a channel matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChannelModel {
    Exact,
    Fresnel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarization {
    Single,
    Dual,
}

/// A complex channel matrix (rows: receive antennas, columns: transmit
/// antennas) together with the model that produced it. `M x M` when
/// single-polarized, `2M x 2M` when dual-polarized with polarization blocks
/// ordered first/second.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelMatrix {
    entries: DMatrix<Complex64>,
    model: ChannelModel,
    polarization: Polarization,
    locations: usize,
    link: LinkGeometry,
    gains: GainModel,
    xpd: Option<XpdModel>,
}

impl ChannelMatrix {
    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn model(&self) -> ChannelModel {
        self.model
    }

    pub fn polarization(&self) -> Polarization {
        self.polarization
    }

    /// Number of antenna locations `M` per array (matrix dimension is `M` or
    /// `2M` depending on polarization).
    pub fn locations(&self) -> usize {
        self.locations
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn link(&self) -> &LinkGeometry {
        &self.link
    }

    pub fn gains(&self) -> &GainModel {
        &self.gains
    }

    pub fn xpd(&self) -> Option<&XpdModel> {
        self.xpd.as_ref()
    }

    /// Squared Frobenius norm; equals the Gram trace and the eigenvalue sum.
    pub fn frobenius_sq(&self) -> f64 {
        self.entries.norm_squared()
    }

    /// Gram matrix `H^H H`, computed column-parallel.
    pub fn gram(&self) -> DMatrix<Complex64> {
        let n = self.entries.ncols();
        let cols = par::map_range(n, |j| {
            let cj = self.entries.column(j);
            let mut col = Vec::with_capacity(n);
            for i in 0..n {
                col.push(self.entries.column(i).dotc(&cj));
            }
            col
        });
        let mut data = Vec::with_capacity(n * n);
        for col in cols {
            data.extend(col);
        }
        DMatrix::from_vec(n, n, data)
    }
}

fn check_square(link: &LinkGeometry) -> Result<usize> {
    let m = link.tx().count();
    if m != link.rx().count() {
        return Err(Error::domain(format!(
            "channel matrix requires equal antenna counts on both arrays (got {} tx, {} rx)",
            m,
            link.rx().count()
        )));
    }
    Ok(m)
}

/// Exact single-polarized channel: entry `(k, m)` is
/// `sqrt(beta_{m,k}) * exp(-i*2*pi*(d_{m,k}-d)/lambda)`; the phase reference
/// subtracts the broadside distance `d`.
pub fn exact_single_pol(link: &LinkGeometry, gains: &GainModel) -> Result<ChannelMatrix> {
    gains.validate_for_link(link)?;
    let m_count = check_square(link)?;
    let lambda = link.wavelength();
    let d = link.distance();
    let tx_idx: Vec<_> = (1..=m_count)
        .map(|m| link.tx().antenna_index(m).expect("index in range"))
        .collect();
    let rx_idx: Vec<_> = (1..=m_count)
        .map(|k| link.rx().antenna_index(k).expect("index in range"))
        .collect();

    let mut data = vec![Complex64::default(); m_count * m_count];
    par::for_each_chunk(&mut data, m_count, |m, col| {
        // Column m holds all receive antennas for transmit antenna m+1.
        for (k, slot) in col.iter_mut().enumerate() {
            let dist = link.pair_distance_indexed(tx_idx[m], rx_idx[k]);
            // d_{m,k} - d without cancellation: delta / (d_{m,k} + d).
            let excess = link.transverse_offset_sq(tx_idx[m], rx_idx[k]) / (dist + d);
            let amp = gains.product(lambda, m + 1, k + 1).sqrt() * lambda / (4.0 * PI * dist);
            *slot = Complex64::from_polar(amp, -2.0 * PI * excess / lambda);
        }
    });

    Ok(ChannelMatrix {
        entries: DMatrix::from_vec(m_count, m_count, data),
        model: ChannelModel::Exact,
        polarization: Polarization::Single,
        locations: m_count,
        link: link.clone(),
        gains: gains.clone(),
        xpd: None,
    })
}

/// Fresnel (paraxial) single-polarized channel: constant far gain and entry
/// `(k, m) = sqrt(beta) * exp(-i*pi*delta_{m,k}/(d*lambda))` with
/// `delta_{m,k}` the squared transverse offset. Its squared Frobenius norm is
/// exactly `beta * M^2`.
pub fn fresnel_single_pol(link: &LinkGeometry, gains: &GainModel) -> Result<ChannelMatrix> {
    let m_count = check_square(link)?;
    let beta = channel_gain_far(link, gains)?;
    let amp = beta.sqrt();
    let lambda = link.wavelength();
    let d = link.distance();
    let tx_idx: Vec<_> = (1..=m_count)
        .map(|m| link.tx().antenna_index(m).expect("index in range"))
        .collect();
    let rx_idx: Vec<_> = (1..=m_count)
        .map(|k| link.rx().antenna_index(k).expect("index in range"))
        .collect();

    let mut data = vec![Complex64::default(); m_count * m_count];
    par::for_each_chunk(&mut data, m_count, |m, col| {
        for (k, slot) in col.iter_mut().enumerate() {
            let delta = link.transverse_offset_sq(tx_idx[m], rx_idx[k]);
            *slot = Complex64::from_polar(amp, -PI * delta / (d * lambda));
        }
    });

    Ok(ChannelMatrix {
        entries: DMatrix::from_vec(m_count, m_count, data),
        model: ChannelModel::Fresnel,
        polarization: Polarization::Single,
        locations: m_count,
        link: link.clone(),
        gains: gains.clone(),
        xpd: None,
    })
}

/// Dual-polarized channel `K (x) H`: the 2M x 2M block matrix
/// `[[sqrt(1-kappa)H, sqrt(kappa)H], [sqrt(kappa)H, sqrt(1-kappa)H]]` with
/// element indices 1..M on the first polarization and M+1..2M on the second.
pub fn dual_pol(single: &ChannelMatrix, xpd: &XpdModel) -> Result<ChannelMatrix> {
    if single.polarization != Polarization::Single {
        return Err(Error::domain(
            "dual_pol expects a single-polarized channel".to_string(),
        ));
    }
    let m = single.dim();
    let a = Complex64::from((1.0 - xpd.kappa()).sqrt());
    let b = Complex64::from(xpd.kappa().sqrt());
    let h = &single.entries;
    let mut out = DMatrix::zeros(2 * m, 2 * m);
    out.view_mut((0, 0), (m, m)).copy_from(&(h * a));
    out.view_mut((0, m), (m, m)).copy_from(&(h * b));
    out.view_mut((m, 0), (m, m)).copy_from(&(h * b));
    out.view_mut((m, m), (m, m)).copy_from(&(h * a));
    Ok(ChannelMatrix {
        entries: out,
        model: single.model,
        polarization: Polarization::Dual,
        locations: single.locations,
        link: single.link.clone(),
        gains: single.gains.clone(),
        xpd: Some(*xpd),
    })
}

/// Magnitude of a uniform geometric phasor sum of length `n`:
/// `|sin(pi*n*x)/sin(pi*x)|`, with the removable singularity at integer `x`
/// replaced by its limit `n`.
fn dirichlet_magnitude(n: usize, x: f64) -> f64 {
    let den = (PI * x).sin();
    if den.abs() < DIRICHLET_SIN_EPS {
        n as f64
    } else {
        ((PI * n as f64 * x).sin() / den).abs()
    }
}

/// Closed-form magnitude of the `(l, k)` off-diagonal Gram entry of the
/// Fresnel channel: the far gain times a product of two Dirichlet kernels
/// whose arguments scale with the index differences of antennas `l` and `k`.
/// Vanishes for every pair exactly when `h_t*h_r = lambda*d/m_h` and
/// `v_t*v_r = lambda*d/m_v`.
pub fn gram_offdiag_magnitude(
    link: &LinkGeometry,
    gains: &GainModel,
    l: usize,
    k: usize,
) -> Result<f64> {
    if l == k {
        return Err(Error::domain(
            "gram_offdiag_magnitude requires two distinct antennas".to_string(),
        ));
    }
    let beta = channel_gain_far(link, gains)?;
    let (il, jl) = link.tx().antenna_index(l)?;
    let (ik, jk) = link.tx().antenna_index(k)?;
    let ld = link.wavelength() * link.distance();
    let di = il as f64 - ik as f64;
    let dj = jl as f64 - jk as f64;
    let x_h = di * link.tx().spacing_h() * link.rx().spacing_h() / ld;
    let x_v = dj * link.tx().spacing_v() * link.rx().spacing_v() / ld;
    Ok(beta
        * dirichlet_magnitude(link.rx().m_h(), x_h)
        * dirichlet_magnitude(link.rx().m_v(), x_v))
}
