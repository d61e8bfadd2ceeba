//! Numerical validation of the inequalities on the product model
//! CP^1 x CP^1 = S^2 x S^2 (m = 2, Ric = rho g). Test functions are zonal
//! (depend only on the polar angle on each factor), so every integral
//! reduces to a one-dimensional weighted integral. Substituting x = cos
//! theta turns the weight (1/2) sin theta dtheta on [0, pi] into the
//! uniform weight 1/2 dx on [-1, 1], which Gauss-Legendre handles exactly
//! for polynomial data.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::constants::{kahler_beckner_constant, kahler_sobolev_constant};
use crate::error::{Error, Result};
use crate::geometry::GeometryParams;
use crate::quad::gauss_legendre;

/// Margins this small in magnitude are attributed to floating-point noise.
pub const MARGIN_NOISE: f64 = 1e-9;

/// A zonal function on S^2, given in terms of x = cos(theta).
#[derive(Debug, Clone)]
pub enum ZonalFunction {
    /// P(cos theta) for a polynomial P of degree <= 8
    PolyInCos(Vec<f64>),
    /// exp(P(cos theta))
    ExpPolyInCos(Vec<f64>),
}

fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

fn horner_derivative(coeffs: &[f64], x: f64) -> f64 {
    let mut acc = 0.0;
    for (j, &c) in coeffs.iter().enumerate().skip(1).rev() {
        acc = acc * x + j as f64 * c;
    }
    acc
}

impl ZonalFunction {
    fn check_degree(&self) -> Result<()> {
        let coeffs = match self {
            ZonalFunction::PolyInCos(c) | ZonalFunction::ExpPolyInCos(c) => c,
        };
        if coeffs.is_empty() || coeffs.len() > 9 {
            return Err(Error::Domain(format!(
                "polynomial degree must be <= 8, got {} coefficients",
                coeffs.len()
            )));
        }
        Ok(())
    }

    /// f as a function of x = cos(theta)
    pub fn eval_x(&self, x: f64) -> f64 {
        match self {
            ZonalFunction::PolyInCos(c) => horner(c, x),
            ZonalFunction::ExpPolyInCos(c) => horner(c, x).exp(),
        }
    }

    /// (d f / d theta)^2 expressed in x: (P'(x))^2 (1 - x^2), times f^2
    /// for the exponential form.
    pub fn dtheta_sq_x(&self, x: f64) -> f64 {
        match self {
            ZonalFunction::PolyInCos(c) => {
                let dp = horner_derivative(c, x);
                dp * dp * (1.0 - x * x)
            }
            ZonalFunction::ExpPolyInCos(c) => {
                let f = horner(c, x).exp();
                let dp = horner_derivative(c, x);
                dp * dp * (1.0 - x * x) * f * f
            }
        }
    }
}

/// f(theta_1) * g(theta_2) on the product of the two sphere factors.
#[derive(Debug, Clone)]
pub struct ProductFunction {
    pub f: ZonalFunction,
    pub g: ZonalFunction,
}

/// The model manifold: S^2 x S^2 with each factor scaled so Ric = rho g.
#[derive(Debug, Clone, Copy)]
pub struct ManifoldSpec {
    pub rho: f64,
    pub quad_order: usize,
}

impl ManifoldSpec {
    pub fn new(rho: f64, quad_order: usize) -> Result<Self> {
        if !(rho > 0.0) {
            return Err(Error::Domain(format!("rho must be positive, got {rho}")));
        }
        if quad_order < 32 {
            return Err(Error::Domain(format!(
                "quad_order must be >= 32, got {quad_order}"
            )));
        }
        Ok(ManifoldSpec { rho, quad_order })
    }

    pub fn geometry(&self) -> GeometryParams {
        GeometryParams::new(2, self.rho).expect("valid by construction")
    }

    /// normalized integral over one factor: (1/2) int_{-1}^{1} h(x) dx
    fn factor_integral(&self, h: impl Fn(f64) -> f64) -> f64 {
        let (nodes, weights) = gauss_legendre(self.quad_order);
        0.5 * nodes
            .iter()
            .zip(&weights)
            .map(|(&x, &w)| w * h(x))
            .sum::<f64>()
    }

    /// normalized integral of phi(f(theta_1)) psi(g(theta_2)) over the product
    pub fn integrate_product(
        &self,
        u: &ProductFunction,
        phi: impl Fn(f64) -> f64,
        psi: impl Fn(f64) -> f64,
    ) -> f64 {
        self.factor_integral(|x| phi(u.f.eval_x(x))) * self.factor_integral(|x| psi(u.g.eval_x(x)))
    }

    /// normalized integral of |u|^p for u = f x g
    pub fn lp_norm_pow(&self, u: &ProductFunction, p: f64) -> f64 {
        self.integrate_product(u, |v| v.abs().powf(p), |v| v.abs().powf(p))
    }

    /// normalized Dirichlet energy int |grad u|^2 for u = f x g. The metric
    /// on each factor is (1/rho) times the round Ric = 1 metric, so the
    /// gradient squared picks up a factor rho.
    pub fn dirichlet_energy(&self, u: &ProductFunction) -> f64 {
        let df2 = self.factor_integral(|x| u.f.dtheta_sq_x(x));
        let f2 = self.factor_integral(|x| {
            let v = u.f.eval_x(x);
            v * v
        });
        let dg2 = self.factor_integral(|x| u.g.dtheta_sq_x(x));
        let g2 = self.factor_integral(|x| {
            let v = u.g.eval_x(x);
            v * v
        });
        self.rho * (df2 * g2 + f2 * dg2)
    }

    fn validate(&self, u: &ProductFunction) -> Result<()> {
        u.f.check_degree()?;
        u.g.check_degree()
    }

    /// Poincare margin (1/(2 rho)) * energy - variance; nonnegative up to
    /// noise since lambda_1 = 2 rho on this model, with equality for
    /// cos(theta_1).
    pub fn check_poincare(&self, u: &ProductFunction) -> Result<f64> {
        self.validate(u)?;
        let mean = self.integrate_product(u, |v| v, |v| v);
        let second = self.lp_norm_pow(u, 2.0);
        let variance = second - mean * mean;
        Ok(self.dirichlet_energy(u) / (2.0 * self.rho) - variance)
    }

    /// Beckner margin for p in (1, 2]:
    /// C_B * energy - [ int F^2 - (int F^{2/p})^p ]. At p = 2 this is the
    /// Poincare inequality; as p -> 1 it degenerates to log-Sobolev.
    pub fn check_beckner(&self, u: &ProductFunction, p: f64) -> Result<f64> {
        self.validate(u)?;
        if !(p > 1.0 && p <= 2.0) {
            return Err(Error::Domain(format!("p = {p} outside (1, 2]")));
        }
        // Beckner needs a positive function; reject sign changes
        let (nodes, _) = gauss_legendre(self.quad_order);
        if nodes
            .iter()
            .any(|&x| u.f.eval_x(x) <= 0.0 || u.g.eval_x(x) <= 0.0)
        {
            return Err(Error::Domain(
                "Beckner check requires a positive test function".into(),
            ));
        }
        let c = kahler_beckner_constant(self.geometry(), p)?;
        let n2 = self.lp_norm_pow(u, 2.0);
        let low = self.lp_norm_pow(u, 2.0 / p).powf(p);
        Ok(c * self.dirichlet_energy(u) - (n2 - low))
    }

    /// Sobolev margin for p in (2, 2m/(m-1)):
    /// ||u||_p^2 - ||u||_2^2 <= C_S * energy.
    pub fn check_sobolev(&self, u: &ProductFunction, p: f64) -> Result<f64> {
        self.validate(u)?;
        if !(p > 2.0 && p <= 4.0) {
            return Err(Error::Domain(format!("p = {p} outside (2, 4]")));
        }
        let c = kahler_sobolev_constant(self.geometry(), p)?;
        let n2 = self.lp_norm_pow(u, 2.0);
        let np = self.lp_norm_pow(u, p).powf(2.0 / p);
        Ok(c * self.dirichlet_energy(u) - (np - n2))
    }

    /// Dirichlet energy over variance.
    pub fn rayleigh_quotient(&self, u: &ProductFunction) -> f64 {
        let mean = self.integrate_product(u, |v| v, |v| v);
        let variance = self.lp_norm_pow(u, 2.0) - mean * mean;
        self.dirichlet_energy(u) / variance
    }

    /// Rayleigh quotient of cos(theta_1), a first eigenfunction; returns
    /// the quotient itself, which equals lambda_1 = 2 rho on this model.
    pub fn check_lambda1(&self) -> f64 {
        self.rayleigh_quotient(&ProductFunction {
            f: ZonalFunction::PolyInCos(vec![0.0, 1.0]),
            g: ZonalFunction::PolyInCos(vec![1.0]),
        })
    }
}

/// Deterministic random test function exp(sum_{j=0}^{4} c_j cos^j theta)
/// with c_j uniform in [-1, 1], drawn from an independent stream of a
/// seeded generator so index i is reproducible regardless of order.
pub fn random_exp_zonal(seed: u64, stream: u64) -> ZonalFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let coeffs: Vec<f64> = (0..5).map(|_| rng.gen_range(-1.0..1.0)).collect();
    ZonalFunction::ExpPolyInCos(coeffs)
}

pub fn random_product(seed: u64, index: u64) -> ProductFunction {
    ProductFunction {
        f: random_exp_zonal(seed, 2 * index),
        g: random_exp_zonal(seed, 2 * index + 1),
    }
}

/// Result of a randomized margin sweep.
#[derive(Debug, Clone, serde::Serialize)]
pub struct SweepSummary {
    pub functions: usize,
    pub exponents: Vec<f64>,
    pub min_margin: f64,
    pub violations: usize,
}

/// Beckner sweep: `count` random products against each p in `ps`. A margin
/// below -MARGIN_NOISE counts as a violation.
pub fn beckner_sweep(spec: &ManifoldSpec, seed: u64, count: usize, ps: &[f64]) -> Result<SweepSummary> {
    let mut min_margin = f64::INFINITY;
    let mut violations = 0;
    for i in 0..count {
        let u = random_product(seed, i as u64);
        for &p in ps {
            let margin = spec.check_beckner(&u, p)?;
            if margin < min_margin {
                min_margin = margin;
            }
            if margin < -MARGIN_NOISE {
                violations += 1;
            }
        }
    }
    Ok(SweepSummary {
        functions: count,
        exponents: ps.to_vec(),
        min_margin,
        violations,
    })
}

/// Sobolev sweep over exponents p in (2, 4].
pub fn sobolev_sweep(spec: &ManifoldSpec, seed: u64, count: usize, ps: &[f64]) -> Result<SweepSummary> {
    let mut min_margin = f64::INFINITY;
    let mut violations = 0;
    for i in 0..count {
        let u = random_product(seed, i as u64);
        for &p in ps {
            let margin = spec.check_sobolev(&u, p)?;
            if margin < min_margin {
                min_margin = margin;
            }
            if margin < -MARGIN_NOISE {
                violations += 1;
            }
        }
    }
    Ok(SweepSummary {
        functions: count,
        exponents: ps.to_vec(),
        min_margin,
        violations,
    })
}

pub const BECKNER_TEST_PS: [f64; 5] = [1.1, 1.25, 1.5, 1.75, 2.0];
pub const SOBOLEV_TEST_PS: [f64; 4] = [2.5, 3.0, 3.5, 4.0];
