//! Array-geometry optimization under the optimal-spacing constraint.
//!
//! Capacity depends on the antenna count `M = m_h * m_v` only, so the
//! factorization and the spacing split are free to minimize either the total
//! aperture length (diagonals) or the total aperture area of the two arrays.
//! Closed-form minimizers are validated by an exhaustive grid oracle.

use crate::geometry::{split_optimal_spacing, SpacingSplit};
use crate::par;
use crate::{Error, Result};

/// Which physical dimension to minimize.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ApertureObjective {
    /// Sum of the two array diagonals; binds when the deployment spot has a
    /// maximal dimension.
    Length,
    /// Sum of the two array face areas; binds when wind load limits the
    /// deployment.
    Area,
}

/// An instance of the geometry optimization: `M` antenna locations at
/// wavelength `lambda` over distance `d` with element width `W`.
#[derive(Debug, Clone, PartialEq)]
pub struct GeometryProblem {
    antennas: usize,
    wavelength: f64,
    distance: f64,
    element_width: f64,
    objective: ApertureObjective,
}

impl GeometryProblem {
    pub fn new(
        antennas: usize,
        wavelength: f64,
        distance: f64,
        element_width: f64,
        objective: ApertureObjective,
    ) -> Result<Self> {
        if antennas < 1 {
            return Err(Error::domain(format!(
                "antenna count must be at least 1 (got {antennas})"
            )));
        }
        if !(wavelength > 0.0) || !(distance > 0.0) {
            return Err(Error::domain(format!(
                "wavelength and distance must be positive (got {wavelength}, {distance})"
            )));
        }
        if !(element_width >= 0.0) {
            return Err(Error::domain(format!(
                "element width must be nonnegative (got {element_width})"
            )));
        }
        Ok(GeometryProblem {
            antennas,
            wavelength,
            distance,
            element_width,
            objective,
        })
    }

    pub fn antennas(&self) -> usize {
        self.antennas
    }

    pub fn wavelength(&self) -> f64 {
        self.wavelength
    }

    pub fn distance(&self) -> f64 {
        self.distance
    }

    pub fn element_width(&self) -> f64 {
        self.element_width
    }

    pub fn objective(&self) -> ApertureObjective {
        self.objective
    }

    fn evaluate(&self, m_h: usize, alpha: f64, gamma: f64) -> Result<f64> {
        match self.objective {
            ApertureObjective::Length => total_aperture_length(
                self.antennas,
                m_h,
                self.wavelength,
                self.distance,
                self.element_width,
                alpha,
                gamma,
            ),
            ApertureObjective::Area => total_aperture_area(
                self.antennas,
                m_h,
                self.wavelength,
                self.distance,
                self.element_width,
                alpha,
                gamma,
            ),
        }
    }
}

/// How a solution was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolutionSource {
    ClosedForm,
    GridOracle,
}

/// A factorization and spacing split together with its objective value.
#[derive(Debug, Clone, PartialEq)]
pub struct GeometrySolution {
    pub m_h: usize,
    pub m_v: usize,
    pub alpha: f64,
    pub gamma: f64,
    pub objective_value: f64,
    pub source: SolutionSource,
}

/// One evaluated cell of the oracle grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleCell {
    pub m_h: usize,
    pub m_v: usize,
    pub alpha: f64,
    pub gamma: f64,
    pub value: f64,
}

fn aperture_sides(
    m: usize,
    m_h: usize,
    wavelength: f64,
    distance: f64,
    element_width: f64,
    alpha: f64,
    gamma: f64,
) -> Result<((f64, f64), (f64, f64))> {
    if m_h == 0 || !m.is_multiple_of(m_h) {
        return Err(Error::domain(format!(
            "m_h = {m_h} does not divide the antenna count {m}"
        )));
    }
    let m_v = m / m_h;
    let split = SpacingSplit::new(alpha, gamma)?;
    let s = split_optimal_spacing(wavelength, distance, m_h, m_v, &split)?;
    let hf = (m_h - 1) as f64;
    let vf = (m_v - 1) as f64;
    let tx = (s.h_t * hf + element_width, s.v_t * vf + element_width);
    let rx = (s.h_r * hf + element_width, s.v_r * vf + element_width);
    Ok((tx, rx))
}

/// Total aperture length: sum of the two array diagonals for the
/// factorization `m_h x (M/m_h)` at the split `(alpha, gamma)`.
pub fn total_aperture_length(
    m: usize,
    m_h: usize,
    wavelength: f64,
    distance: f64,
    element_width: f64,
    alpha: f64,
    gamma: f64,
) -> Result<f64> {
    let (tx, rx) = aperture_sides(m, m_h, wavelength, distance, element_width, alpha, gamma)?;
    Ok(tx.0.hypot(tx.1) + rx.0.hypot(rx.1))
}

/// Total aperture area: sum of the two array face areas.
pub fn total_aperture_area(
    m: usize,
    m_h: usize,
    wavelength: f64,
    distance: f64,
    element_width: f64,
    alpha: f64,
    gamma: f64,
) -> Result<f64> {
    let (tx, rx) = aperture_sides(m, m_h, wavelength, distance, element_width, alpha, gamma)?;
    Ok(tx.0 * tx.1 + rx.0 * rx.1)
}

fn divisors(m: usize) -> Vec<usize> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= m {
        if m.is_multiple_of(d) {
            small.push(d);
            if d != m / d {
                large.push(m / d);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

/// Tie-break order after the objective value: square-most factorization
/// first, then the horizontally wider one (so a transposed ULA pair resolves
/// to `m_h = M`), then smaller `alpha`, then smaller `gamma`.
fn better(a: &OracleCell, b: &OracleCell) -> bool {
    let ka = (
        a.value,
        a.m_h.abs_diff(a.m_v),
        std::cmp::Reverse(a.m_h),
        a.alpha,
        a.gamma,
    );
    let kb = (
        b.value,
        b.m_h.abs_diff(b.m_v),
        std::cmp::Reverse(b.m_h),
        b.alpha,
        b.gamma,
    );
    ka.partial_cmp(&kb).expect("finite objective values") == std::cmp::Ordering::Less
}

/// Minimizes the total aperture length: the symmetric split is stationary
/// and optimal, and the best factorization is the divisor pair closest to a
/// square (exactly `sqrt(M) x sqrt(M)` when `M` is a perfect square). For
/// non-square `M` every divisor pair is evaluated directly.
pub fn minimize_length(problem: &GeometryProblem) -> Result<GeometrySolution> {
    if problem.objective != ApertureObjective::Length {
        return Err(Error::domain(
            "minimize_length requires a length-objective problem".to_string(),
        ));
    }
    let mut best: Option<OracleCell> = None;
    for m_h in divisors(problem.antennas) {
        let value = problem.evaluate(m_h, 0.5, 0.5)?;
        let cell = OracleCell {
            m_h,
            m_v: problem.antennas / m_h,
            alpha: 0.5,
            gamma: 0.5,
            value,
        };
        if best.as_ref().is_none_or(|b| better(&cell, b)) {
            best = Some(cell);
        }
    }
    let cell = best.expect("at least one divisor");
    Ok(GeometrySolution {
        m_h: cell.m_h,
        m_v: cell.m_v,
        alpha: 0.5,
        gamma: 0.5,
        objective_value: cell.value,
        source: SolutionSource::ClosedForm,
    })
}

/// Minimizes the total aperture area: a horizontal ULA (`m_h = M`,
/// `m_v = 1`) at the symmetric split. The square factorization is the area
/// maximizer, so the minimum sits at the boundary of the divisor range.
pub fn minimize_area(problem: &GeometryProblem) -> Result<GeometrySolution> {
    if problem.objective != ApertureObjective::Area {
        return Err(Error::domain(
            "minimize_area requires an area-objective problem".to_string(),
        ));
    }
    let m_h = problem.antennas;
    let value = problem.evaluate(m_h, 0.5, 0.5)?;
    Ok(GeometrySolution {
        m_h,
        m_v: 1,
        alpha: 0.5,
        gamma: 0.5,
        objective_value: value,
        source: SolutionSource::ClosedForm,
    })
}

/// Exhaustive minimum over every divisor pair of `M` and an
/// `alpha_steps x gamma_steps` grid on `[0,1]^2`, with the deterministic
/// tie-break order of [`grid_oracle`]. Also returns every evaluated cell so
/// the value surface can be inspected.
pub fn grid_oracle_with_surface(
    problem: &GeometryProblem,
    alpha_steps: usize,
    gamma_steps: usize,
) -> Result<(GeometrySolution, Vec<OracleCell>)> {
    if alpha_steps < 2 || gamma_steps < 2 {
        return Err(Error::domain(format!(
            "grid oracle needs at least 2 steps per axis (got {alpha_steps}, {gamma_steps})"
        )));
    }
    let divs = divisors(problem.antennas);
    let cells_per_div = alpha_steps * gamma_steps;
    let total = divs.len() * cells_per_div;

    let surface = par::try_map_range(total, |idx| {
        let d = idx / cells_per_div;
        let rem = idx % cells_per_div;
        let ai = rem / gamma_steps;
        let gi = rem % gamma_steps;
        let alpha = ai as f64 / (alpha_steps - 1) as f64;
        let gamma = gi as f64 / (gamma_steps - 1) as f64;
        let m_h = divs[d];
        let value = problem.evaluate(m_h, alpha, gamma)?;
        Ok::<_, Error>(OracleCell {
            m_h,
            m_v: problem.antennas / m_h,
            alpha,
            gamma,
            value,
        })
    })?;

    let best = surface
        .iter()
        .copied()
        .reduce(|a, b| if better(&b, &a) { b } else { a })
        .expect("nonempty grid");

    Ok((
        GeometrySolution {
            m_h: best.m_h,
            m_v: best.m_v,
            alpha: best.alpha,
            gamma: best.gamma,
            objective_value: best.value,
            source: SolutionSource::GridOracle,
        },
        surface,
    ))
}

/// Exhaustive grid-search minimum; see [`grid_oracle_with_surface`].
pub fn grid_oracle(
    problem: &GeometryProblem,
    alpha_steps: usize,
    gamma_steps: usize,
) -> Result<GeometrySolution> {
    grid_oracle_with_surface(problem, alpha_steps, gamma_steps).map(|(s, _)| s)
}

#[cfg(test)]
mod tests {
    use super::*;

    const LAMBDA: f64 = 0.01;
    const DIST: f64 = 100.0;
    const WIDTH: f64 = 0.005;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    #[test]
    fn length_values() {
        let v = total_aperture_length(64, 8, LAMBDA, DIST, WIDTH, 0.5, 0.5).unwrap();
        let l = (LAMBDA * DIST / 8.0).sqrt() * 7.0 + WIDTH;
        assert_close(v, 2.0 * 2f64.sqrt() * l, 1e-12);
        assert_close(v, 7.0141, 1e-4);

        let ula = total_aperture_length(64, 64, LAMBDA, DIST, WIDTH, 0.5, 0.5).unwrap();
        assert_close(ula, 2.0 * (7.880f64.powi(2) + WIDTH * WIDTH).sqrt(), 1e-12);
        assert_close(ula, 15.760, 1e-3);

        // Symmetric split makes the tx and rx terms equal.
        let (tx, rx) = aperture_sides(64, 8, LAMBDA, DIST, WIDTH, 0.5, 0.5).unwrap();
        assert_eq!(tx, rx);
    }

    #[test]
    fn area_values() {
        let v = total_aperture_area(64, 8, LAMBDA, DIST, WIDTH, 0.5, 0.5).unwrap();
        let l: f64 = (LAMBDA * DIST / 8.0).sqrt() * 7.0 + WIDTH;
        assert_close(v, 2.0 * l * l, 1e-12);
        assert_close(v, 12.300, 1e-3);

        let ula = total_aperture_area(64, 64, LAMBDA, DIST, WIDTH, 0.5, 0.5).unwrap();
        assert_close(ula, 2.0 * 7.880 * WIDTH, 1e-12);
        assert_close(ula, 0.0788, 1e-6);

        // Zero-width line array has zero area.
        let zero = total_aperture_area(16, 16, LAMBDA, DIST, 0.0, 0.3, 0.8).unwrap();
        assert_eq!(zero, 0.0);
    }

    #[test]
    fn nondivisor_rejected() {
        assert!(total_aperture_length(64, 5, LAMBDA, DIST, WIDTH, 0.5, 0.5).is_err());
    }

    #[test]
    fn length_minimizer_is_square() {
        let p = GeometryProblem::new(64, LAMBDA, DIST, WIDTH, ApertureObjective::Length).unwrap();
        let sol = minimize_length(&p).unwrap();
        assert_eq!((sol.m_h, sol.m_v), (8, 8));
        assert_eq!((sol.alpha, sol.gamma), (0.5, 0.5));

        let p1 = GeometryProblem::new(1, LAMBDA, DIST, WIDTH, ApertureObjective::Length).unwrap();
        let sol1 = minimize_length(&p1).unwrap();
        assert_eq!((sol1.m_h, sol1.m_v), (1, 1));
        assert_close(sol1.objective_value, 2.0 * 2f64.sqrt() * WIDTH, 1e-15);
    }

    #[test]
    fn length_minimizer_non_square_matches_scan() {
        let p = GeometryProblem::new(12, LAMBDA, DIST, WIDTH, ApertureObjective::Length).unwrap();
        let sol = minimize_length(&p).unwrap();
        // Exhaustive oracle over {1, 2, 3, 4, 6, 12}. The transposed pair
        // (3,4)/(4,3) ties exactly; the rule resolves to the wider one.
        let mut best = f64::INFINITY;
        for m_h in [1usize, 2, 3, 4, 6, 12] {
            let v = total_aperture_length(12, m_h, LAMBDA, DIST, WIDTH, 0.5, 0.5).unwrap();
            best = best.min(v);
        }
        assert_close(sol.objective_value, best, 1e-15);
        assert_eq!((sol.m_h, sol.m_v), (4, 3));
    }

    #[test]
    fn area_minimizer_is_ula() {
        let p = GeometryProblem::new(64, LAMBDA, DIST, WIDTH, ApertureObjective::Area).unwrap();
        let sol = minimize_area(&p).unwrap();
        assert_eq!((sol.m_h, sol.m_v), (64, 1));
        assert_close(sol.objective_value, 0.0788, 1e-6);

        let square = total_aperture_area(64, 8, LAMBDA, DIST, WIDTH, 0.5, 0.5).unwrap();
        assert!(sol.objective_value < square);

        let p2 = GeometryProblem::new(2, LAMBDA, DIST, WIDTH, ApertureObjective::Area).unwrap();
        assert_eq!(minimize_area(&p2).unwrap().m_h, 2);
    }

    #[test]
    fn square_maximizes_area_over_divisors() {
        for m_h in divisors(64) {
            if m_h == 8 {
                continue;
            }
            let v = total_aperture_area(64, m_h, LAMBDA, DIST, WIDTH, 0.5, 0.5).unwrap();
            let square = total_aperture_area(64, 8, LAMBDA, DIST, WIDTH, 0.5, 0.5).unwrap();
            assert!(v < square, "m_h = {m_h}");
        }
        // ... and the boundary divisors are the minimum.
        let edge = total_aperture_area(64, 64, LAMBDA, DIST, WIDTH, 0.5, 0.5).unwrap();
        for m_h in divisors(64) {
            let v = total_aperture_area(64, m_h, LAMBDA, DIST, WIDTH, 0.5, 0.5).unwrap();
            assert!(edge <= v + 1e-15, "m_h = {m_h}");
        }
    }

    #[test]
    fn oracle_agrees_with_closed_forms() {
        for m in [4usize, 16, 36, 64] {
            let p =
                GeometryProblem::new(m, LAMBDA, DIST, WIDTH, ApertureObjective::Length).unwrap();
            let closed = minimize_length(&p).unwrap();
            let oracle = grid_oracle(&p, 21, 21).unwrap();
            assert_eq!((oracle.m_h, oracle.m_v), (closed.m_h, closed.m_v));
            assert_close(oracle.alpha, 0.5, 1e-12);
            assert_close(oracle.gamma, 0.5, 1e-12);
            assert_close(oracle.objective_value, closed.objective_value, 1e-12);

            let pa = GeometryProblem::new(m, LAMBDA, DIST, WIDTH, ApertureObjective::Area).unwrap();
            let closed_a = minimize_area(&pa).unwrap();
            let oracle_a = grid_oracle(&pa, 21, 21).unwrap();
            // Transposed ULA ties are broken toward the horizontal one.
            assert_eq!((oracle_a.m_h, oracle_a.m_v), (closed_a.m_h, closed_a.m_v));
            assert_close(oracle_a.objective_value, closed_a.objective_value, 1e-12);
        }
    }

    #[test]
    fn oracle_area_minimum_is_ula_on_every_alpha_row() {
        let p = GeometryProblem::new(64, LAMBDA, DIST, WIDTH, ApertureObjective::Area).unwrap();
        let (_, surface) = grid_oracle_with_surface(&p, 5, 5).unwrap();
        // For each (alpha, gamma) cell, the minimizing divisor is a ULA.
        for ai in 0..5 {
            for gi in 0..5 {
                let alpha = ai as f64 / 4.0;
                let gamma = gi as f64 / 4.0;
                let mut best: Option<&OracleCell> = None;
                for c in surface
                    .iter()
                    .filter(|c| c.alpha == alpha && c.gamma == gamma)
                {
                    if best.is_none_or(|b| c.value < b.value) {
                        best = Some(c);
                    }
                }
                let best = best.unwrap();
                assert!(
                    best.m_h == 64 || best.m_v == 64,
                    "alpha {alpha}, gamma {gamma}: best {best:?}"
                );
            }
        }
    }

    #[test]
    fn oracle_tiny_instance() {
        let p = GeometryProblem::new(4, LAMBDA, DIST, WIDTH, ApertureObjective::Length).unwrap();
        let sol = grid_oracle(&p, 3, 3).unwrap();
        assert_eq!((sol.m_h, sol.m_v), (2, 2));
        assert!(grid_oracle(&p, 1, 3).is_err());
    }

    #[test]
    fn symmetric_split_is_stationary() {
        // Central differences in alpha and gamma at (0.5, 0.5).
        let eps = 1e-4;
        for objective in [ApertureObjective::Length, ApertureObjective::Area] {
            let p = GeometryProblem::new(64, LAMBDA, DIST, WIDTH, objective).unwrap();
            let da = (p.evaluate(8, 0.5 + eps, 0.5).unwrap()
                - p.evaluate(8, 0.5 - eps, 0.5).unwrap())
                / (2.0 * eps);
            let dg = (p.evaluate(8, 0.5, 0.5 + eps).unwrap()
                - p.evaluate(8, 0.5, 0.5 - eps).unwrap())
                / (2.0 * eps);
            assert!(da.abs() < 1e-6, "{objective:?} d/dalpha = {da}");
            assert!(dg.abs() < 1e-6, "{objective:?} d/dgamma = {dg}");
        }
    }
}
