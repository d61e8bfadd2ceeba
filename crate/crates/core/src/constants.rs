//! Closed-form evaluation of the inequality constants: the Riemannian
//! Sobolev baseline, the Kahler Sobolev and Beckner constants, the
//! log-Sobolev and Poincare specializations, and the one-parameter family
//! of constants they optimize over.

use crate::error::{Error, Result};
use crate::geometry::GeometryParams;

/// Tolerance for a radicand that lands slightly below zero when the
/// critical exponent is hit by a floating-point `p`.
const RADICAND_TOL: f64 = 1e-12;

/// Constant families produced by this module.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstantFamily {
    RiemannianSobolev,
    KahlerSobolev,
    KahlerBeckner,
    LogSobolev,
    Poincare,
    PropositionC,
}

/// A tagged inequality constant with its validity domain.
#[derive(Debug, Clone, serde::Serialize)]
pub struct InequalityConstant {
    pub family: ConstantFamily,
    pub p: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<f64>,
    pub value: f64,
    /// Closed-open interval of exponents for which the family is defined.
    pub valid_p_range: (f64, f64),
}

/// Sobolev constant (n-1)(p-2)/(n*rho) on a Riemannian n-manifold with
/// Ric >= rho and unit volume, valid for 2 <= p <= 2n/(n-2).
pub fn riemannian_sobolev_constant(n: u32, p: f64, rho: f64) -> Result<f64> {
    if n < 3 {
        return Err(Error::Domain(format!("real dimension n must be >= 3, got {n}")));
    }
    if !(rho > 0.0) {
        return Err(Error::Domain(format!("rho must be positive, got {rho}")));
    }
    let n = n as f64;
    let p_max = 2.0 * n / (n - 2.0);
    if !(2.0..=p_max + RADICAND_TOL).contains(&p) {
        return Err(Error::Domain(format!(
            "p = {p} outside [2, 2n/(n-2)] = [2, {p_max}]"
        )));
    }
    Ok((n - 1.0) * (p - 2.0) / (n * rho))
}

/// Kahler Sobolev constant
/// C_S = (p-2)/((p-1) 2m rho) * (2m+p+1 - 2 sqrt((m+1)(2m-(m-1)p))),
/// valid for 2 <= p <= 2m/(m-1). p = 2 is accepted and returns 0.
pub fn kahler_sobolev_constant(g: GeometryParams, p: f64) -> Result<f64> {
    let m = g.m() as f64;
    let p_max = g.critical_exponent();
    if !(2.0..=p_max + RADICAND_TOL).contains(&p) {
        return Err(Error::Domain(format!(
            "p = {p} outside [2, 2m/(m-1)] = [2, {p_max}]"
        )));
    }
    let mut radicand = (m + 1.0) * (2.0 * m - (m - 1.0) * p);
    if radicand < 0.0 {
        if radicand >= -RADICAND_TOL {
            radicand = 0.0;
        } else {
            return Err(Error::Domain(format!(
                "negative radicand {radicand} (p beyond the critical exponent)"
            )));
        }
    }
    Ok((p - 2.0) / ((p - 1.0) * 2.0 * m * g.rho())
        * (2.0 * m + p + 1.0 - 2.0 * radicand.sqrt()))
}

/// Kahler Beckner constant C_B = ((p-1)/p) * 2m/(((m-1)p+2) rho) for
/// 1 < p <= 2. At p = 2 this is the sharp Poincare constant 1/(2 rho).
pub fn kahler_beckner_constant(g: GeometryParams, p: f64) -> Result<f64> {
    if !(p > 1.0 && p <= 2.0) {
        return Err(Error::Domain(format!("p = {p} outside (1, 2]")));
    }
    let m = g.m() as f64;
    Ok((p - 1.0) / p * 2.0 * m / (((m - 1.0) * p + 2.0) * g.rho()))
}

/// Log-Sobolev constant 2m/((m+1) rho), the p -> 1 limit of the Beckner
/// family after dividing out the (p-1) factor.
pub fn log_sobolev_constant(g: GeometryParams) -> Result<f64> {
    let m = g.m() as f64;
    Ok(2.0 * m / ((m + 1.0) * g.rho()))
}

/// Smaller root k of (p-1)(m-1)(k+1)^2 = 4(m+1)k for 2 < p <= 2m/(m-1).
/// The smaller root is the one whose family constant reproduces C_S: the
/// constant of `proposition_c_constant` is strictly increasing in k.
pub fn optimal_k_for_p(m: u32, p: f64) -> Result<f64> {
    if m < 2 {
        return Err(Error::Domain(format!("m must be >= 2, got {m}")));
    }
    let mf = m as f64;
    let p_max = 2.0 * mf / (mf - 1.0);
    if !(p > 2.0) {
        return Err(Error::Domain(format!("p = {p} must exceed 2")));
    }
    // quadratic c k^2 + b k + c with c = (p-1)(m-1), b = 2(p-1)(m-1) - 4(m+1)
    let c = (p - 1.0) * (mf - 1.0);
    let b = 2.0 * c - 4.0 * (mf + 1.0);
    let mut disc = b * b - 4.0 * c * c;
    if disc < 0.0 {
        if disc >= -RADICAND_TOL * (b * b).max(1.0) {
            disc = 0.0;
        } else {
            return Err(Error::Domain(format!(
                "p = {p} exceeds the critical exponent {p_max}: negative discriminant"
            )));
        }
    }
    // smaller root via the numerically stable form 2c / (-b + sqrt(disc))
    Ok(2.0 * c / (-b + disc.sqrt()))
}

/// Family constant (m+(m-1)k)(p-2)/(2m rho), admissible for k > 0 with
/// p <= 1 + (m+1)/(m-1) * 4k/(k+1)^2.
pub fn proposition_c_constant(g: GeometryParams, p: f64, k: f64) -> Result<f64> {
    if !(k > 0.0) {
        return Err(Error::Domain(format!("k must be positive, got {k}")));
    }
    if !(p >= 2.0) {
        return Err(Error::Domain(format!("p = {p} must be >= 2")));
    }
    let m = g.m() as f64;
    let p_bound = 1.0 + (m + 1.0) / (m - 1.0) * 4.0 * k / ((k + 1.0) * (k + 1.0));
    if p > p_bound + RADICAND_TOL {
        return Err(Error::Admissibility(format!(
            "constraint violated: p = {p} > 1 + (m+1)/(m-1)*4k/(k+1)^2 = {p_bound} at k = {k}"
        )));
    }
    Ok((m + (m - 1.0) * k) * (p - 2.0) / (2.0 * m * g.rho()))
}

/// Tagged constant for reporting: picks the family from the exponent.
pub fn constant_for(g: GeometryParams, p: f64) -> Result<InequalityConstant> {
    if p > 2.0 {
        Ok(InequalityConstant {
            family: ConstantFamily::KahlerSobolev,
            p,
            k: None,
            value: kahler_sobolev_constant(g, p)?,
            valid_p_range: (2.0, g.critical_exponent()),
        })
    } else if (p - 2.0).abs() < f64::EPSILON {
        Ok(InequalityConstant {
            family: ConstantFamily::Poincare,
            p,
            k: None,
            value: kahler_beckner_constant(g, 2.0)?,
            valid_p_range: (2.0, 2.0),
        })
    } else {
        Ok(InequalityConstant {
            family: ConstantFamily::KahlerBeckner,
            p,
            k: None,
            value: kahler_beckner_constant(g, p)?,
            valid_p_range: (1.0, 2.0),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(m: u32, rho: f64) -> GeometryParams {
        GeometryParams::new(m, rho).unwrap()
    }

    #[test]
    fn riemannian_baseline() {
        assert!((riemannian_sobolev_constant(4, 3.0, 1.0).unwrap() - 0.75).abs() < 1e-15);
        assert_eq!(riemannian_sobolev_constant(4, 2.0, 1.0).unwrap(), 0.0);
        assert!((riemannian_sobolev_constant(3, 6.0, 2.0).unwrap() - 4.0 / 3.0).abs() < 1e-15);
        assert!(riemannian_sobolev_constant(4, 1.5, 1.0).is_err());
        assert!(riemannian_sobolev_constant(4, 3.0, 0.0).is_err());
    }

    #[test]
    fn kahler_sobolev_values() {
        let expected = (8.0 - 2.0 * 3.0f64.sqrt()) / 8.0;
        assert!((kahler_sobolev_constant(g(2, 1.0), 3.0).unwrap() - expected).abs() < 1e-14);

        // critical exponent: radicand vanishes, equals the Riemannian constant
        let cs = kahler_sobolev_constant(g(2, 1.0), 4.0).unwrap();
        assert!((cs - 1.5).abs() < 1e-14);
        assert!((cs - riemannian_sobolev_constant(4, 4.0, 1.0).unwrap()).abs() < 1e-14);

        assert_eq!(kahler_sobolev_constant(g(3, 1.0), 2.0).unwrap(), 0.0);
        assert!(kahler_sobolev_constant(g(2, 1.0), 4.5).is_err());
    }

    #[test]
    fn kahler_beckner_values() {
        assert!((kahler_beckner_constant(g(2, 1.0), 2.0).unwrap() - 0.5).abs() < 1e-16);
        assert!((kahler_beckner_constant(g(3, 5.0), 2.0).unwrap() - 0.1).abs() < 1e-16);
        assert!(
            (kahler_beckner_constant(g(2, 1.0), 1.5).unwrap() - 8.0 / 21.0).abs() < 1e-15
        );
        assert!(kahler_beckner_constant(g(2, 1.0), 1.0).is_err());
        assert!(kahler_beckner_constant(g(2, 1.0), 2.5).is_err());
    }

    #[test]
    fn log_sobolev_values() {
        assert!((log_sobolev_constant(g(2, 1.0)).unwrap() - 4.0 / 3.0).abs() < 1e-15);
        // equals the p -> 1 evaluation of (1/p) * 2m/(((m-1)p+2) rho)
        let m = 2.0;
        let at_one = 2.0 * m / ((m - 1.0) + 2.0);
        assert!((log_sobolev_constant(g(2, 1.0)).unwrap() - at_one).abs() < 1e-15);
        assert!(GeometryParams::new(1, 1.0).is_err());
    }

    #[test]
    fn optimal_k_values() {
        assert!((optimal_k_for_p(2, 3.0).unwrap() - (2.0 - 3.0f64.sqrt())).abs() < 1e-14);
        assert!((optimal_k_for_p(2, 4.0).unwrap() - 1.0).abs() < 1e-7);
        assert!(optimal_k_for_p(2, 5.0).is_err());
    }

    #[test]
    fn proposition_c_values() {
        let k = 2.0 - 3.0f64.sqrt();
        let c = proposition_c_constant(g(2, 1.0), 3.0, k).unwrap();
        assert!((c - (4.0 - 3.0f64.sqrt()) / 4.0).abs() < 1e-14);
        assert!((c - kahler_sobolev_constant(g(2, 1.0), 3.0).unwrap()).abs() < 1e-12);

        // k = 1 recovers the Riemannian constant with n = 2m
        let c1 = proposition_c_constant(g(2, 1.0), 3.0, 1.0).unwrap();
        assert!((c1 - 0.75).abs() < 1e-15);

        assert!(matches!(
            proposition_c_constant(g(2, 1.0), 3.0, 0.05),
            Err(Error::Admissibility(_))
        ));
    }

    #[test]
    fn rho_scaling() {
        for rho in [0.5, 1.0, 3.0, 10.0] {
            let a = kahler_sobolev_constant(g(2, rho), 3.0).unwrap() * rho;
            let b = kahler_sobolev_constant(g(2, 1.0), 3.0).unwrap();
            assert!((a - b).abs() <= 1e-15 * b.abs());
            let a = kahler_beckner_constant(g(3, rho), 1.7).unwrap() * rho;
            let b = kahler_beckner_constant(g(3, 1.0), 1.7).unwrap();
            assert!((a - b).abs() <= 1e-15 * b.abs());
        }
    }

    #[test]
    fn beckner_limit_matches_log_sobolev() {
        // lim_{p->1} C_B/(p-1) = (1/p) 2m/(((m-1)p+2) rho) at p = 1
        let geo = g(2, 1.0);
        let p = 1.0 + 1e-9;
        let ratio = kahler_beckner_constant(geo, p).unwrap() / (p - 1.0);
        assert!((ratio - log_sobolev_constant(geo).unwrap()).abs() < 1e-6);
    }
}
