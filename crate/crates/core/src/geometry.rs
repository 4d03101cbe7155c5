//! Uniform rectangular array geometry.
//!
//! Antennas are numbered row by row from 1 to `m_h * m_v`. Element `m` of the
//! transmit array sits at `(-i(m)*h_t, -j(m)*v_t, 0)` and element `k` of the
//! receive array at `(-i(k)*h_r, -j(k)*v_r, d)`, with both arrays broadside
//! aligned. All lengths are meters.

use crate::{Error, Result};

/// Layout of one uniform rectangular array: antenna counts per axis, spacings,
/// and the physical side of a (square) element.
#[derive(Debug, Clone, PartialEq)]
pub struct UraSpec {
    m_h: usize,
    m_v: usize,
    spacing_h: f64,
    spacing_v: f64,
    element_width: f64,
}

impl UraSpec {
    /// A spacing must be positive only when its axis actually has more than
    /// one antenna; a single row or column carries no spacing.
    pub fn new(
        m_h: usize,
        m_v: usize,
        spacing_h: f64,
        spacing_v: f64,
        element_width: f64,
    ) -> Result<Self> {
        if m_h < 1 || m_v < 1 {
            return Err(Error::domain(format!(
                "antenna counts must be at least 1 (got {m_h} x {m_v})"
            )));
        }
        if m_h > 1 && !(spacing_h > 0.0) {
            return Err(Error::domain(format!(
                "spacing_h must be positive when m_h > 1 (got {spacing_h})"
            )));
        }
        if m_v > 1 && !(spacing_v > 0.0) {
            return Err(Error::domain(format!(
                "spacing_v must be positive when m_v > 1 (got {spacing_v})"
            )));
        }
        if !(element_width >= 0.0) || !element_width.is_finite() {
            return Err(Error::domain(format!(
                "element_width must be finite and nonnegative (got {element_width})"
            )));
        }
        if !spacing_h.is_finite() || !spacing_v.is_finite() {
            return Err(Error::domain("spacings must be finite".to_string()));
        }
        Ok(UraSpec {
            m_h,
            m_v,
            spacing_h,
            spacing_v,
            element_width,
        })
    }

    /// Square array with equal spacing on both axes.
    pub fn square(side: usize, spacing: f64, element_width: f64) -> Result<Self> {
        UraSpec::new(side, side, spacing, spacing, element_width)
    }

    pub fn m_h(&self) -> usize {
        self.m_h
    }

    pub fn m_v(&self) -> usize {
        self.m_v
    }

    pub fn spacing_h(&self) -> f64 {
        self.spacing_h
    }

    pub fn spacing_v(&self) -> f64 {
        self.spacing_v
    }

    pub fn element_width(&self) -> f64 {
        self.element_width
    }

    /// Total number of antenna locations `M = m_h * m_v`.
    pub fn count(&self) -> usize {
        self.m_h * self.m_v
    }

    /// Horizontal and vertical indices `(i, j)` of the 1-based antenna `m`,
    /// counting row by row: `i = (m-1) - m_h*floor((m-1)/m_h)`,
    /// `j = floor((m-1)/m_h)`.
    pub fn antenna_index(&self, m: usize) -> Result<(usize, usize)> {
        if m < 1 || m > self.count() {
            return Err(Error::domain(format!(
                "antenna number {m} out of range 1..={}",
                self.count()
            )));
        }
        Ok(antenna_index_unchecked(m, self.m_h))
    }

    /// Array diagonal `sqrt(((m_h-1)*spacing_h)^2 + ((m_v-1)*spacing_v)^2)`.
    pub fn diagonal(&self) -> f64 {
        let dh = (self.m_h - 1) as f64 * self.spacing_h;
        let dv = (self.m_v - 1) as f64 * self.spacing_v;
        dh.hypot(dv)
    }

    /// Physical aperture lengths `(L_h, L_v)` including the element width:
    /// `L = spacing*(count-1) + W`. A single-antenna axis has length `W`.
    pub fn aperture_lengths(&self) -> (f64, f64) {
        let l_h = self.spacing_h * (self.m_h - 1) as f64 + self.element_width;
        let l_v = self.spacing_v * (self.m_v - 1) as f64 + self.element_width;
        (l_h, l_v)
    }

    /// Face area `L_h * L_v`.
    pub fn aperture_area(&self) -> f64 {
        let (l_h, l_v) = self.aperture_lengths();
        l_h * l_v
    }
}

fn antenna_index_unchecked(m: usize, m_h: usize) -> (usize, usize) {
    let j = (m - 1) / m_h;
    let i = (m - 1) - m_h * j;
    (i, j)
}

/// A point-to-point link: the two array layouts, their broadside separation,
/// and the carrier wavelength.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkGeometry {
    tx: UraSpec,
    rx: UraSpec,
    distance: f64,
    wavelength: f64,
}

impl LinkGeometry {
    pub fn new(tx: UraSpec, rx: UraSpec, distance: f64, wavelength: f64) -> Result<Self> {
        if !(distance > 0.0) || !distance.is_finite() {
            return Err(Error::domain(format!(
                "link distance must be positive (got {distance})"
            )));
        }
        if !(wavelength > 0.0) || !wavelength.is_finite() {
            return Err(Error::domain(format!(
                "wavelength must be positive (got {wavelength})"
            )));
        }
        Ok(LinkGeometry {
            tx,
            rx,
            distance,
            wavelength,
        })
    }

    /// Identical arrays on both ends at the capacity-optimal symmetric
    /// spacing `h = sqrt(lambda*d/m_h)`, `v = sqrt(lambda*d/m_v)`.
    pub fn symmetric_optimal(
        m_h: usize,
        m_v: usize,
        wavelength: f64,
        distance: f64,
        element_width: f64,
    ) -> Result<Self> {
        let (h, v) = symmetric_optimal_spacing(wavelength, distance, m_h, m_v)?;
        let tx = UraSpec::new(m_h, m_v, h, v, element_width)?;
        let rx = tx.clone();
        LinkGeometry::new(tx, rx, distance, wavelength)
    }

    /// Arrays at the optimal spacing split between transmitter and receiver
    /// by the exponents in `split`.
    pub fn split_optimal(
        m_h: usize,
        m_v: usize,
        wavelength: f64,
        distance: f64,
        element_width: f64,
        split: &SpacingSplit,
    ) -> Result<Self> {
        let s = split_optimal_spacing(wavelength, distance, m_h, m_v, split)?;
        let tx = UraSpec::new(m_h, m_v, s.h_t, s.v_t, element_width)?;
        let rx = UraSpec::new(m_h, m_v, s.h_r, s.v_r, element_width)?;
        LinkGeometry::new(tx, rx, distance, wavelength)
    }

    /// Same layouts with a common spacing on every axis of both arrays.
    pub fn uniform_spacing(
        m_h: usize,
        m_v: usize,
        wavelength: f64,
        distance: f64,
        element_width: f64,
        spacing: f64,
    ) -> Result<Self> {
        let tx = UraSpec::new(m_h, m_v, spacing, spacing, element_width)?;
        let rx = tx.clone();
        LinkGeometry::new(tx, rx, distance, wavelength)
    }

    pub fn tx(&self) -> &UraSpec {
        &self.tx
    }

    pub fn rx(&self) -> &UraSpec {
        &self.rx
    }

    pub fn distance(&self) -> f64 {
        self.distance
    }

    pub fn wavelength(&self) -> f64 {
        self.wavelength
    }

    /// Diagnostic only: whether `d >= 2*max(D_t, D_r)`, the regime in which
    /// the channel gain is nearly equal across antenna pairs. Never enforced.
    pub fn far_channel_gain_ok(&self) -> bool {
        self.distance >= 2.0 * self.tx.diagonal().max(self.rx.diagonal())
    }

    /// Distance between transmit antenna `m` and receive antenna `k`
    /// (1-based): `sqrt(d^2 + (i_m*h_t - i_k*h_r)^2 + (j_m*v_t - j_k*v_r)^2)`.
    pub fn pair_distance(&self, m: usize, k: usize) -> Result<f64> {
        let (im, jm) = self.tx.antenna_index(m)?;
        let (ik, jk) = self.rx.antenna_index(k)?;
        Ok(self.pair_distance_indexed((im, jm), (ik, jk)))
    }

    pub(crate) fn pair_distance_indexed(&self, tx_ij: (usize, usize), rx_ij: (usize, usize)) -> f64 {
        let dx = tx_ij.0 as f64 * self.tx.spacing_h - rx_ij.0 as f64 * self.rx.spacing_h;
        let dy = tx_ij.1 as f64 * self.tx.spacing_v - rx_ij.1 as f64 * self.rx.spacing_v;
        (self.distance * self.distance + dx * dx + dy * dy).sqrt()
    }

    /// Transverse offset squared `delta_{m,k}` between the two antennas,
    /// the quantity driving the Fresnel phase `pi*delta/(d*lambda)`.
    pub(crate) fn transverse_offset_sq(&self, tx_ij: (usize, usize), rx_ij: (usize, usize)) -> f64 {
        let dx = tx_ij.0 as f64 * self.tx.spacing_h - rx_ij.0 as f64 * self.rx.spacing_h;
        let dy = tx_ij.1 as f64 * self.tx.spacing_v - rx_ij.1 as f64 * self.rx.spacing_v;
        dx * dx + dy * dy
    }
}

/// Exponent pair `(alpha, gamma)` in `[0, 1]` distributing the optimal spacing
/// product between the transmitter and receiver: the transmitter takes
/// `(lambda*d/m)^alpha` on the horizontal axis (gamma on the vertical) and
/// the receiver the complementary power.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpacingSplit {
    alpha: f64,
    gamma: f64,
}

impl SpacingSplit {
    pub fn new(alpha: f64, gamma: f64) -> Result<Self> {
        for (name, value) in [("alpha", alpha), ("gamma", gamma)] {
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::domain(format!(
                    "{name} must lie in [0, 1] (got {value})"
                )));
            }
        }
        Ok(SpacingSplit { alpha, gamma })
    }

    /// Equal split: identical spacing at both ends.
    pub fn symmetric() -> Self {
        SpacingSplit {
            alpha: 0.5,
            gamma: 0.5,
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }
}

/// The four spacings produced by a split of the optimal product.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpacingArrangement {
    pub h_t: f64,
    pub h_r: f64,
    pub v_t: f64,
    pub v_r: f64,
}

/// Symmetric optimal spacing `(h, v) = (sqrt(lambda*d/m_h), sqrt(lambda*d/m_v))`
/// for identical arrays at both ends.
pub fn symmetric_optimal_spacing(
    wavelength: f64,
    distance: f64,
    m_h: usize,
    m_v: usize,
) -> Result<(f64, f64)> {
    check_positive_link(wavelength, distance, m_h, m_v)?;
    let ld = wavelength * distance;
    Ok(((ld / m_h as f64).sqrt(), (ld / m_v as f64).sqrt()))
}

/// All optimal spacings, parametrized by the split exponents:
/// `h_t = (lambda*d/m_h)^alpha`, `h_r = (lambda*d/m_h)^(1-alpha)` and the
/// vertical analog with `gamma`. The products `h_t*h_r` and `v_t*v_r` equal
/// `lambda*d/m_h` and `lambda*d/m_v` for every split.
pub fn split_optimal_spacing(
    wavelength: f64,
    distance: f64,
    m_h: usize,
    m_v: usize,
    split: &SpacingSplit,
) -> Result<SpacingArrangement> {
    check_positive_link(wavelength, distance, m_h, m_v)?;
    let ld = wavelength * distance;
    let ph = ld / m_h as f64;
    let pv = ld / m_v as f64;
    Ok(SpacingArrangement {
        h_t: ph.powf(split.alpha),
        h_r: ph.powf(1.0 - split.alpha),
        v_t: pv.powf(split.gamma),
        v_r: pv.powf(1.0 - split.gamma),
    })
}

/// Fraunhofer array distance `2d(m_h + m_v)` of an array at the symmetric
/// optimal spacing; the link is in the radiative near field when
/// `d <= d_FA / 10`, i.e. whenever `m_h + m_v >= 5`.
pub fn fraunhofer_array_distance(distance: f64, m_h: usize, m_v: usize) -> Result<f64> {
    if !(distance > 0.0) {
        return Err(Error::domain(format!(
            "distance must be positive (got {distance})"
        )));
    }
    if m_h < 1 || m_v < 1 {
        return Err(Error::domain("counts must be at least 1".to_string()));
    }
    Ok(2.0 * distance * (m_h + m_v) as f64)
}

/// First-null beamwidth `2*asin(lambda/(m_h*h_r))` in radians of a uniform
/// line of `m_h` antennas spaced `h_r` apart.
pub fn first_null_beamwidth(wavelength: f64, m_h: usize, spacing: f64) -> Result<f64> {
    if !(wavelength > 0.0) || m_h < 1 || !(spacing > 0.0) {
        return Err(Error::domain(
            "first_null_beamwidth requires positive wavelength, count and spacing".to_string(),
        ));
    }
    let ratio = wavelength / (m_h as f64 * spacing);
    if ratio > 1.0 {
        return Err(Error::domain(format!(
            "first-null beamwidth undefined: lambda/(m_h*spacing) = {ratio} exceeds 1"
        )));
    }
    Ok(2.0 * ratio.asin())
}

/// Physical beam width `2*sqrt(lambda*d/m_h)` at distance `d` under the
/// optimal spacing — exactly twice the transmit spacing, which is why the
/// nulls of one focused beam land on all other antennas.
pub fn beam_footprint(distance: f64, wavelength: f64, m_h: usize) -> Result<f64> {
    if !(distance > 0.0) || !(wavelength > 0.0) || m_h < 1 {
        return Err(Error::domain(
            "beam_footprint requires positive distance, wavelength and count".to_string(),
        ));
    }
    Ok(2.0 * (wavelength * distance / m_h as f64).sqrt())
}

fn check_positive_link(wavelength: f64, distance: f64, m_h: usize, m_v: usize) -> Result<()> {
    if !(wavelength > 0.0) || !(distance > 0.0) {
        return Err(Error::domain(format!(
            "wavelength and distance must be positive (got {wavelength}, {distance})"
        )));
    }
    if m_h < 1 || m_v < 1 {
        return Err(Error::domain("counts must be at least 1".to_string()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ura(m_h: usize, m_v: usize, s: f64) -> UraSpec {
        UraSpec::new(m_h, m_v, s, s, 0.0).unwrap()
    }

    #[test]
    fn antenna_index_matches_row_major_numbering() {
        let a = ura(4, 3, 0.1);
        assert_eq!(a.antenna_index(6).unwrap(), (1, 1));
        assert_eq!(a.antenna_index(1).unwrap(), (0, 0));

        // Enumerate the 4x3 grid row by row and check every element.
        let mut m = 1;
        for j in 0..3 {
            for i in 0..4 {
                assert_eq!(a.antenna_index(m).unwrap(), (i, j));
                m += 1;
            }
        }
        assert_eq!(a.antenna_index(12).unwrap(), (3, 2));
    }

    #[test]
    fn antenna_index_rejects_out_of_range() {
        let a = ura(4, 3, 0.1);
        assert!(a.antenna_index(0).is_err());
        assert!(a.antenna_index(13).is_err());
    }

    #[test]
    fn pair_distance_broadside_and_offset() {
        let link = LinkGeometry::uniform_spacing(8, 1, 0.01, 100.0, 0.0, 0.353553).unwrap();
        assert_eq!(link.pair_distance(1, 1).unwrap(), 100.0);

        let d12 = link.pair_distance(1, 2).unwrap();
        let expect = (100.0f64 * 100.0 + 0.353553f64 * 0.353553).sqrt();
        assert!((d12 - expect).abs() < 1e-12);
        assert!((d12 - 100.000625).abs() < 1e-6);

        // Swapping roles leaves the distance unchanged for identical layouts.
        assert_eq!(link.pair_distance(2, 1).unwrap(), d12);
    }

    #[test]
    fn diagonal_values() {
        assert_eq!(ura(1, 1, 0.0).diagonal(), 0.0);
        let d = ura(8, 8, 0.353553).diagonal();
        assert!((d - 2.0f64.sqrt() * 7.0 * 0.353553).abs() < 1e-12);
        assert!((d - 3.5).abs() < 1e-4);
        assert!((ura(64, 1, 0.125).diagonal() - 7.875).abs() < 1e-12);
    }

    #[test]
    fn aperture_lengths_values() {
        let a = UraSpec::new(8, 8, 0.353553, 0.353553, 0.005).unwrap();
        let (lh, lv) = a.aperture_lengths();
        assert!((lh - 2.479871).abs() < 1e-5);
        assert_eq!(lh, lv);

        let single = UraSpec::new(1, 4, 0.0, 0.2, 0.007).unwrap();
        assert_eq!(single.aperture_lengths().0, 0.007);

        let ula = UraSpec::new(64, 1, 0.125, 0.0, 0.005).unwrap();
        let (lh, lv) = ula.aperture_lengths();
        assert!((lh - 7.880).abs() < 1e-12);
        assert_eq!(lv, 0.005);
    }

    #[test]
    fn symmetric_spacing_values() {
        let (h, _) = symmetric_optimal_spacing(0.01, 100.0, 8, 8).unwrap();
        assert!((h - 0.35355339).abs() < 1e-7);

        let (h1, _) = symmetric_optimal_spacing(0.01, 100.0, 1, 1).unwrap();
        assert_eq!(h1, 1.0f64.sqrt());

        let (h, _) = symmetric_optimal_spacing(0.003, 50.0, 8, 8).unwrap();
        assert!((h - 0.136931).abs() < 1e-6);
    }

    #[test]
    fn split_spacing_values_and_product() {
        let sym = split_optimal_spacing(0.01, 100.0, 8, 8, &SpacingSplit::symmetric()).unwrap();
        let (h, v) = symmetric_optimal_spacing(0.01, 100.0, 8, 8).unwrap();
        assert_eq!(sym.h_t, h);
        assert_eq!(sym.h_r, h);
        assert_eq!(sym.v_t, v);
        assert_eq!(sym.v_r, v);

        let split = SpacingSplit::new(0.01, 0.01).unwrap();
        let s = split_optimal_spacing(0.003, 50.0, 8, 8, &split).unwrap();
        assert!((s.h_t - 0.96101).abs() < 1e-5);
        assert!((s.h_r - 0.019510).abs() < 1e-6);
        assert!((s.h_t * s.h_r - 0.003 * 50.0 / 8.0).abs() < 1e-15);
    }

    #[test]
    fn split_products_exact_on_full_grid() {
        let ld = 0.003 * 50.0;
        for ai in 0..=100 {
            for gi in 0..=100 {
                let split = SpacingSplit::new(ai as f64 / 100.0, gi as f64 / 100.0).unwrap();
                let s = split_optimal_spacing(0.003, 50.0, 8, 4, &split).unwrap();
                assert!((s.h_t * s.h_r / (ld / 8.0) - 1.0).abs() <= 1e-12);
                assert!((s.v_t * s.v_r / (ld / 4.0) - 1.0).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn fraunhofer_values() {
        assert_eq!(fraunhofer_array_distance(100.0, 8, 8).unwrap(), 3200.0);
        assert_eq!(fraunhofer_array_distance(80.0, 1, 1).unwrap(), 320.0);
        // m_h + m_v = 5 puts the link exactly at the finite-depth boundary.
        let d = 7.0;
        assert_eq!(fraunhofer_array_distance(d, 2, 3).unwrap() / 10.0, d);
    }

    #[test]
    #[allow(clippy::approx_constant)]
    fn beamwidth_and_footprint() {
        // At lambda = m_h*h_r the argument hits 1 and the beamwidth is pi.
        let bw = first_null_beamwidth(0.4, 4, 0.1).unwrap();
        assert!((bw - std::f64::consts::PI).abs() < 1e-12);

        assert!(first_null_beamwidth(0.5, 4, 0.1).is_err());

        let fp = beam_footprint(100.0, 0.01, 8).unwrap();
        assert!((fp - 0.70711).abs() < 1e-5);

        // Under optimal spacing the footprint is exactly twice the spacing.
        let (h, _) = symmetric_optimal_spacing(0.01, 100.0, 8, 8).unwrap();
        assert!((fp - 2.0 * h).abs() < 1e-12);
    }

    #[test]
    fn far_gain_diagnostic() {
        let near = LinkGeometry::symmetric_optimal(8, 8, 0.01, 100.0, 0.0).unwrap();
        // Diagonal is 3.5 m, so 2*D = 7 m <= 100 m: gain variation negligible.
        assert!(near.far_channel_gain_ok());

        let tight = LinkGeometry::uniform_spacing(8, 8, 0.01, 1.0, 0.0, 0.3).unwrap();
        assert!(!tight.far_channel_gain_ok());
    }

    #[test]
    fn spacing_split_bounds() {
        assert!(SpacingSplit::new(-0.1, 0.5).is_err());
        assert!(SpacingSplit::new(0.5, 1.1).is_err());
        assert!(SpacingSplit::new(0.0, 1.0).is_ok());
    }

    #[test]
    fn ura_validation() {
        assert!(UraSpec::new(0, 1, 0.1, 0.1, 0.0).is_err());
        assert!(UraSpec::new(2, 1, 0.0, 0.0, 0.0).is_err());
        // A 1 x n array needs no horizontal spacing.
        assert!(UraSpec::new(1, 2, 0.0, 0.1, 0.0).is_ok());
        assert!(UraSpec::new(2, 2, 0.1, 0.1, -0.5).is_err());
    }
}
