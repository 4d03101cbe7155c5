//! Gauss–Legendre quadrature nodes and weights.
//!
//! Nodes are the Legendre roots found by Newton iteration from the Chebyshev
//! initial guess; weights follow from the derivative. Exact for polynomials
//! of degree `2n - 1`.

use crate::{Error, Result};

/// An n-point Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

/// Legendre polynomial `P_n(x)` and its derivative via the three-term
/// recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p_prev = 1.0;
    let mut p = x;
    for k in 1..n {
        let kf = k as f64;
        let p_next = ((2.0 * kf + 1.0) * x * p - kf * p_prev) / (kf + 1.0);
        p_prev = p;
        p = p_next;
    }
    let dp = n as f64 * (x * p - p_prev) / (x * x - 1.0);
    (p, dp)
}

impl GaussLegendre {
    pub fn new(order: usize) -> Result<Self> {
        if order < 1 {
            return Err(Error::domain("quadrature order must be at least 1"));
        }
        if order == 1 {
            return Ok(GaussLegendre {
                nodes: vec![0.0],
                weights: vec![2.0],
            });
        }
        let mut nodes = vec![0.0; order];
        let mut weights = vec![0.0; order];
        let nf = order as f64;
        for i in 0..order.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(order, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-15 {
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x.abs();
            nodes[order - 1 - i] = x.abs();
            weights[i] = w;
            weights[order - 1 - i] = w;
        }
        if order % 2 == 1 {
            nodes[order / 2] = 0.0;
        }
        Ok(GaussLegendre { nodes, weights })
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Nodes and weights mapped onto `[a, b]`.
    pub fn scaled(&self, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let nodes = self.nodes.iter().map(|x| mid + half * x).collect();
        let weights = self.weights.iter().map(|w| w * half).collect();
        (nodes, weights)
    }

    /// Integrates `f` over `[a, b]`.
    pub fn integrate<F: Fn(f64) -> f64>(&self, a: f64, b: f64, f: F) -> f64 {
        let (nodes, weights) = self.scaled(a, b);
        nodes
            .iter()
            .zip(&weights)
            .map(|(x, w)| w * f(*x))
            .sum()
    }
}
