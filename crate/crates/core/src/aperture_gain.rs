//! Realistic aperture-antenna gains by numerical quadrature.
//!
//! The gain of a square aperture under an incident spherical wave is the
//! Cauchy–Schwarz ratio `|int E dA|^2 / (A_phy * int |E|^2 dA)`, at most 1
//! with equality for a uniform field. Per-pair tables computed here feed the
//! exact channel model through [`GainModel::PerPair`](crate::channel::GainModel::PerPair).

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::channel::PairGainTable;
use crate::geometry::LinkGeometry;
use crate::quad::GaussLegendre;
use crate::{par, Error, Result};

/// Hard cap for the automatic quadrature-order doubling.
const MAX_AUTO_ORDER: usize = 64;

/// A square receiving aperture in the `z = 0` plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApertureElement {
    center: (f64, f64),
    side: f64,
}

impl ApertureElement {
    pub fn new(center: (f64, f64), side: f64) -> Result<Self> {
        if !(side > 0.0) || !side.is_finite() {
            return Err(Error::domain(format!(
                "element side must be positive (got {side})"
            )));
        }
        Ok(ApertureElement { center, side })
    }

    pub fn center(&self) -> (f64, f64) {
        self.center
    }

    pub fn side(&self) -> f64 {
        self.side
    }

    /// Physical area `side^2`.
    pub fn area(&self) -> f64 {
        self.side * self.side
    }
}

/// A point source at height `z > 0` above the aperture plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SourcePoint {
    position: (f64, f64, f64),
    amplitude: f64,
}

impl SourcePoint {
    pub fn new(position: (f64, f64, f64), amplitude: f64) -> Result<Self> {
        if !(position.2 > 0.0) {
            return Err(Error::domain(format!(
                "source height must be positive (got {})",
                position.2
            )));
        }
        if !(amplitude > 0.0) {
            return Err(Error::domain(format!(
                "source amplitude must be positive (got {amplitude})"
            )));
        }
        Ok(SourcePoint {
            position,
            amplitude,
        })
    }

    pub fn position(&self) -> (f64, f64, f64) {
        self.position
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }
}

/// Points per axis of the tensor-product Gauss–Legendre rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadratureRule {
    order: usize,
}

impl QuadratureRule {
    pub fn new(order: usize) -> Result<Self> {
        if order < 2 {
            return Err(Error::domain(format!(
                "quadrature order must be at least 2 (got {order})"
            )));
        }
        Ok(QuadratureRule { order })
    }

    pub fn order(&self) -> usize {
        self.order
    }
}

impl Default for QuadratureRule {
    fn default() -> Self {
        QuadratureRule { order: 16 }
    }
}

/// Scalar incident field at point `(x, y)` of the aperture plane from a
/// source at `(x0, y0, z0)`:
/// `E0/sqrt(4*pi) * sqrt(z0*((x-x0)^2 + z0^2)) / r^(5/4) * exp(-i*2*pi*sqrt(r)/lambda)`
/// where `r` is the squared distance to the source. On axis the magnitude
/// reduces to `E0/(sqrt(4*pi)*z0)` and the wavelength enters the phase only.
pub fn incident_field(p: (f64, f64), src: &SourcePoint, wavelength: f64) -> Complex64 {
    let (x0, y0, z0) = src.position;
    let dx = p.0 - x0;
    let dy = p.1 - y0;
    let r = dx * dx + dy * dy + z0 * z0;
    let amp = src.amplitude / (4.0 * PI).sqrt() * (z0 * (dx * dx + z0 * z0)).sqrt() / r.powf(1.25);
    Complex64::from_polar(amp, -2.0 * PI * r.sqrt() / wavelength)
}

/// A gain value with the quadrature order that produced it and whether the
/// phase-variation estimate still exceeded the resolvable budget at that
/// order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GainEstimate {
    pub value: f64,
    pub order_used: usize,
    pub accuracy_warning: bool,
}

/// Estimated worst-case phase span of the field across the element: the
/// distance to the source varies by at most the element diagonal.
fn phase_span(el: &ApertureElement, wavelength: f64) -> f64 {
    2.0 * PI * el.side * std::f64::consts::SQRT_2 / wavelength
}

/// Normalized aperture gain `|int E|^2 / (A_phy * int |E|^2)` over the
/// element square by tensor Gauss–Legendre quadrature. Always in `(0, 1]`.
///
/// Starting from the rule's order, the order doubles (up to 64) while the
/// estimated phase change per node spacing exceeds `pi/2`; if the budget is
/// still exceeded at the final order the estimate carries an accuracy
/// warning.
pub fn normalized_gain(
    el: &ApertureElement,
    src: &SourcePoint,
    wavelength: f64,
    rule: &QuadratureRule,
) -> Result<GainEstimate> {
    if !(wavelength > 0.0) {
        return Err(Error::domain(format!(
            "wavelength must be positive (got {wavelength})"
        )));
    }
    let span = phase_span(el, wavelength);
    let mut order = rule.order();
    while span / order as f64 > PI / 2.0 && order * 2 <= MAX_AUTO_ORDER {
        order *= 2;
    }
    let accuracy_warning = span / order as f64 > PI / 2.0;

    let gl = GaussLegendre::new(order)?;
    let (cx, cy) = el.center;
    let half = el.side / 2.0;
    let (xs, wxs) = gl.scaled(cx - half, cx + half);
    let (ys, wys) = gl.scaled(cy - half, cy + half);

    let mut field_sum = Complex64::default();
    let mut power_sum = 0.0;
    for (x, wx) in xs.iter().zip(&wxs) {
        for (y, wy) in ys.iter().zip(&wys) {
            let e = incident_field((*x, *y), src, wavelength);
            let w = wx * wy;
            field_sum += e * w;
            power_sum += e.norm_sqr() * w;
        }
    }
    let value = field_sum.norm_sqr() / (el.area() * power_sum);
    Ok(GainEstimate {
        value,
        order_used: order,
        accuracy_warning,
    })
}

/// How a computed aperture gain enters the channel gain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GainConvention {
    /// The raw Cauchy–Schwarz ratio in `(0, 1]`.
    Normalized,
    /// Normalized gain times the aperture factor `4*pi*A_phy/lambda^2`, the
    /// far-field gain of a uniformly illuminated aperture.
    ApertureScaled,
}

/// Per-pair gain tables plus quadrature diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct PairGainReport {
    pub table: PairGainTable,
    /// Number of pair evaluations whose phase-variation estimate exceeded
    /// the budget even at the maximum automatic order.
    pub accuracy_warnings: usize,
}

/// Computes transmit and receive gains for every antenna pair of a link with
/// square elements of sides `side_t` (transmit) and `side_r` (receive).
///
/// The receive gain of pair `(m, k)` integrates over element `k` with the
/// transmit element center as the source; the transmit gain follows by
/// reciprocity with the roles swapped. Pairs evaluate independently in
/// parallel. The resulting table plugs into [`GainModel::PerPair`](crate::channel::GainModel::PerPair).
pub fn realistic_pair_gains(
    link: &LinkGeometry,
    side_t: f64,
    side_r: f64,
    convention: GainConvention,
    rule: &QuadratureRule,
) -> Result<PairGainReport> {
    for (name, side, array) in [("transmit", side_t, link.tx()), ("receive", side_r, link.rx())] {
        if !(side > 0.0) {
            return Err(Error::domain(format!(
                "{name} element side must be positive (got {side})"
            )));
        }
        if (array.m_h() > 1 && side > array.spacing_h())
            || (array.m_v() > 1 && side > array.spacing_v())
        {
            return Err(Error::domain(format!(
                "{name} elements of side {side} m overlap at spacings ({}, {}) m",
                array.spacing_h(),
                array.spacing_v()
            )));
        }
    }

    let m_count = link.tx().count();
    let k_count = link.rx().count();
    let lambda = link.wavelength();
    let d = link.distance();
    let tx_pos: Vec<(f64, f64)> = (1..=m_count)
        .map(|m| {
            let (i, j) = link.tx().antenna_index(m).expect("index in range");
            (
                -(i as f64) * link.tx().spacing_h(),
                -(j as f64) * link.tx().spacing_v(),
            )
        })
        .collect();
    let rx_pos: Vec<(f64, f64)> = (1..=k_count)
        .map(|k| {
            let (i, j) = link.rx().antenna_index(k).expect("index in range");
            (
                -(i as f64) * link.rx().spacing_h(),
                -(j as f64) * link.rx().spacing_v(),
            )
        })
        .collect();

    let scale = |side: f64, g: f64| match convention {
        GainConvention::Normalized => g,
        GainConvention::ApertureScaled => g * 4.0 * PI * side * side / (lambda * lambda),
    };

    let pairs = par::try_map_range(m_count * k_count, |idx| {
        let m = idx / k_count;
        let k = idx % k_count;
        let rx_el = ApertureElement::new(rx_pos[k], side_r)?;
        let tx_src = SourcePoint::new((tx_pos[m].0, tx_pos[m].1, d), 1.0)?;
        let g_r = normalized_gain(&rx_el, &tx_src, lambda, rule)?;

        let tx_el = ApertureElement::new(tx_pos[m], side_t)?;
        let rx_src = SourcePoint::new((rx_pos[k].0, rx_pos[k].1, d), 1.0)?;
        let g_t = normalized_gain(&tx_el, &rx_src, lambda, rule)?;

        let warnings = usize::from(g_r.accuracy_warning) + usize::from(g_t.accuracy_warning);
        Ok::<_, Error>((scale(side_t, g_t.value), scale(side_r, g_r.value), warnings))
    })?;

    let mut tx_gain = Vec::with_capacity(pairs.len());
    let mut rx_gain = Vec::with_capacity(pairs.len());
    let mut accuracy_warnings = 0;
    for (t, r, w) in pairs {
        tx_gain.push(t);
        rx_gain.push(r);
        accuracy_warnings += w;
    }
    Ok(PairGainReport {
        table: PairGainTable::new(m_count, k_count, tx_gain, rx_gain)?,
        accuracy_warnings,
    })
}

/// Element side `sqrt(lambda/(4*pi))`: with it, the aperture-scaled gain of
/// a uniformly illuminated element is exactly `1/lambda`, the directive-gain
/// law whose effective area shrinks proportionally to the wavelength.
pub fn directive_element_side(wavelength: f64) -> Result<f64> {
    if !(wavelength > 0.0) {
        return Err(Error::domain(format!(
            "wavelength must be positive (got {wavelength})"
        )));
    }
    Ok((wavelength / (4.0 * PI)).sqrt())
}
