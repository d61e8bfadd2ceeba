//! Diameter bound pipelines: the Bonnet-Myers baseline, the Bakry-Ledoux
//! bound applied to the one-parameter Sobolev family, the fixed choice
//! k = 1 - 1/(2m) with its exact inequality chain, and numerical
//! optimization over the admissible k interval.

use num::rational::BigRational;

use crate::error::{Error, Result};
use crate::geometry::GeometryParams;
use crate::identities::CheckReport;
use crate::ratpoly::big;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiameterMethod {
    BonnetMyers,
    FamilyAtK,
    FamilyOptimized,
    ClosedForm24m,
    ClosedForm200,
    RayleighSolve,
}

/// Parameters attached to a bound, when the method has any.
#[derive(Debug, Clone, Copy, Default, serde::Serialize)]
pub struct BoundParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d_star: Option<f64>,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct DiameterBound {
    pub method: DiameterMethod,
    pub value: f64,
    pub params: BoundParams,
    pub m: u32,
    pub rho: f64,
}

/// Bonnet-Myers: pi sqrt((2m-1)/rho) for real dimension 2m.
pub fn bonnet_myers_bound(g: GeometryParams) -> f64 {
    std::f64::consts::PI * ((2.0 * g.m() as f64 - 1.0) / g.rho()).sqrt()
}

/// Diameter bound pi sqrt(2pA)/(p-2) implied by a Sobolev inequality with
/// constant A at exponent p > 2.
pub fn bakry_ledoux_bound(p: f64, a: f64) -> Result<f64> {
    if !(p > 2.0) {
        return Err(Error::Domain(format!("p = {p} must exceed 2")));
    }
    if !(a > 0.0) {
        return Err(Error::Domain(format!("Sobolev constant must be positive, got {a}")));
    }
    Ok(std::f64::consts::PI * (2.0 * p * a).sqrt() / (p - 2.0))
}

/// Boundary exponent p(k) = 1 + (m+1)/(m-1) * 4k/(k+1)^2.
pub fn boundary_exponent(m: u32, k: f64) -> f64 {
    let mf = m as f64;
    1.0 + (mf + 1.0) / (mf - 1.0) * 4.0 * k / ((k + 1.0) * (k + 1.0))
}

/// Open interval of k for which p(k) > 2.
pub fn admissible_k_interval(m: u32) -> (f64, f64) {
    let mf = m as f64;
    let root = 2.0 * (2.0 * (mf + 1.0)).sqrt();
    ((mf + 3.0 - root) / (mf - 1.0), (mf + 3.0 + root) / (mf - 1.0))
}

/// Bakry-Ledoux applied to the family constant at parameter k:
/// (pi/sqrt(rho)) sqrt(p(m+(m-1)k)/(m(p-2))) with p = p(k).
pub fn family_bound(g: GeometryParams, k: f64) -> Result<DiameterBound> {
    let m = g.m() as f64;
    if !(4.0 * (m + 1.0) * k > (m - 1.0) * (k + 1.0) * (k + 1.0)) {
        let (lo, hi) = admissible_k_interval(g.m());
        return Err(Error::Admissibility(format!(
            "k = {k} outside the admissible interval ({lo}, {hi}) for m = {}",
            g.m()
        )));
    }
    let p = boundary_exponent(g.m(), k);
    let radicand = p * (m + (m - 1.0) * k) / (m * (p - 2.0));
    let value = std::f64::consts::PI / g.rho().sqrt() * radicand.sqrt();
    Ok(DiameterBound {
        method: DiameterMethod::FamilyAtK,
        value,
        params: BoundParams {
            k: Some(k),
            p: Some(p),
            d_star: None,
        },
        m: g.m(),
        rho: g.rho(),
    })
}

/// Closed form (pi/sqrt(rho)) sqrt(2m-1) (1 - 1/(24m)).
pub fn closed_form_24m(g: GeometryParams) -> DiameterBound {
    let m = g.m() as f64;
    let value = std::f64::consts::PI / g.rho().sqrt()
        * (2.0 * m - 1.0).sqrt()
        * (1.0 - 1.0 / (24.0 * m));
    DiameterBound {
        method: DiameterMethod::ClosedForm24m,
        value,
        params: BoundParams::default(),
        m: g.m(),
        rho: g.rho(),
    }
}

/// Minimize the family bound over the admissible k interval (shrunk by
/// 1e-9 at both ends): 64-point pre-scan for the global basin, then
/// golden-section refinement to absolute tolerance `tol` in k.
pub fn optimize_family(g: GeometryParams, tol: f64) -> Result<DiameterBound> {
    if !(tol > 0.0 && tol <= 1e-6) {
        return Err(Error::Domain(format!("tol = {tol} outside (0, 1e-6]")));
    }
    let (lo, hi) = admissible_k_interval(g.m());
    let lo = lo + 1e-9;
    let hi = hi - 1e-9;
    let objective = |k: f64| family_bound(g, k).map(|b| b.value).unwrap_or(f64::INFINITY);

    // pre-scan to locate the global basin (the objective is empirically
    // unimodal; the scan guards against a second local minimum)
    let n = 64;
    let mut best_i: u32 = 0;
    let mut best_v = f64::INFINITY;
    for i in 0..=n {
        let k = lo + (hi - lo) * i as f64 / n as f64;
        let v = objective(k);
        if v < best_v {
            best_v = v;
            best_i = i;
        }
    }
    let mut a = lo + (hi - lo) * (best_i.saturating_sub(1)) as f64 / n as f64;
    let mut b = lo + (hi - lo) * (best_i + 1).min(n) as f64 / n as f64;

    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = objective(x1);
    let mut f2 = objective(x2);
    while b - a > tol {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = objective(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = objective(x2);
        }
    }
    let k_star = 0.5 * (a + b);
    let mut bound = family_bound(g, k_star)?;
    bound.method = DiameterMethod::FamilyOptimized;
    Ok(bound)
}

/// Closed form pi (1 - 1/(200 sqrt(m) ln m)), stated for Ric >= 2m-1.
pub fn closed_form_200(m: u32) -> Result<DiameterBound> {
    if m < 2 {
        return Err(Error::Domain(format!("m must be >= 2, got {m} (ln 1 = 0)")));
    }
    let mf = m as f64;
    let value = std::f64::consts::PI * (1.0 - 1.0 / (200.0 * mf.sqrt() * mf.ln()));
    Ok(DiameterBound {
        method: DiameterMethod::ClosedForm200,
        value,
        params: BoundParams::default(),
        m,
        rho: 2.0 * mf - 1.0,
    })
}

/// Exact verification of the inequality chain establishing the 1/(24m)
/// improvement at k = 1 - 1/(2m), for each m in 2..=m_max:
///   1. p - 2 > 0
///   2. Psi >= 2
///   3. m(p-2)(k+1)^2 <= 8m/(m-1)
///   4. p(m+(m-1)k) <= 2m(2m-1)/(m-1)
///   5. sqrt(2m-1) - sqrt(p(m+(m-1)k)/(m(p-2))) >= sqrt(2m-1)/(24m)
/// Steps 1-4 are exact rational comparisons; step 5 is checked exactly by
/// squaring (both sides are nonnegative once 1-4 hold).
pub fn chain_24m_check(m_max: u32) -> Result<CheckReport> {
    if m_max < 2 {
        return Err(Error::Domain(format!("m_max must be >= 2, got {m_max}")));
    }
    let one = big(1);
    let two = big(2);
    for m_val in 2..=m_max {
        let m = big(m_val as i64);
        let k = &one - &one / (&two * &m); // 1 - 1/(2m)
        let kp1_sq = (&k + &one) * (&k + &one);
        let m_minus_1 = &m - &one;
        let p = &one + (&m + &one) / &m_minus_1 * big(4) * &k / &kp1_sq;
        let p_minus_2 = &p - &two;
        if p_minus_2 <= BigRational::from_integer(0.into()) {
            return Ok(chain_fail(m_val, "p - 2 > 0"));
        }
        // Psi = 4(m+1)(2m-k)k - (2m^2+(m-1)k)(k+1)^2 >= 2
        let psi = big(4) * (&m + &one) * (&two * &m - &k) * &k
            - (&two * &m * &m + &m_minus_1 * &k) * &kp1_sq;
        if psi < two {
            return Ok(chain_fail(m_val, "Psi >= 2"));
        }
        // m(p-2)(k+1)^2 <= 8m/(m-1)
        let lhs3 = &m * &p_minus_2 * &kp1_sq;
        let rhs3 = big(8) * &m / &m_minus_1;
        if lhs3 > rhs3 {
            return Ok(chain_fail(m_val, "m(p-2)(k+1)^2 <= 8m/(m-1)"));
        }
        // p(m+(m-1)k) <= 2m(2m-1)/(m-1)
        let weight = &m + &m_minus_1 * &k;
        let lhs4 = &p * &weight;
        let two_m_minus_1 = &two * &m - &one;
        let rhs4 = &two * &m * &two_m_minus_1 / &m_minus_1;
        if lhs4 > rhs4 {
            return Ok(chain_fail(m_val, "p(m+(m-1)k) <= 2m(2m-1)/(m-1)"));
        }
        // sqrt(2m-1)(1 - 1/(24m)) >= sqrt(radicand), squared form
        let radicand = &p * &weight / (&m * &p_minus_2);
        let scale = &one - &one / (big(24) * &m);
        let lhs5 = &two_m_minus_1 * &scale * &scale;
        if lhs5 < radicand {
            return Ok(chain_fail(m_val, "sqrt gap >= sqrt(2m-1)/(24m)"));
        }
    }
    Ok(CheckReport {
        id: "chain_24m".to_string(),
        pass: true,
        residual: "0".to_string(),
        assumptions: vec![format!("k = 1 - 1/(2m), m in 2..={m_max}")],
    })
}

fn chain_fail(m: u32, step: &str) -> CheckReport {
    CheckReport {
        id: "chain_24m".to_string(),
        pass: false,
        residual: format!("step '{step}' fails at m = {m}"),
        assumptions: vec!["k = 1 - 1/(2m)".to_string()],
    }
}

/// Exact rational radicand p(m+(m-1)k)/(m(p-2)) at k = 1 - 1/(2m),
/// exposed for tests that pin the spot values (e.g. 2123/760 at m = 2
/// before the 1/rho scaling).
pub fn family_radicand_at_default_k(m_val: u32) -> BigRational {
    let one = big(1);
    let m = big(m_val as i64);
    let k = &one - &one / (big(2) * &m);
    let kp1_sq = (&k + &one) * (&k + &one);
    let p = &one + (&m + &one) / (&m - &one) * big(4) * &k / &kp1_sq;
    let weight = &m + (&m - &one) * &k;
    &p * &weight / (&m * (&p - big(2)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn g(m: u32, rho: f64) -> GeometryParams {
        GeometryParams::new(m, rho).unwrap()
    }

    #[test]
    fn bonnet_myers_values() {
        assert!((bonnet_myers_bound(g(2, 3.0)) - PI).abs() < 1e-14);
        assert!((bonnet_myers_bound(g(5, 9.0)) - PI).abs() < 1e-14);
        assert!((bonnet_myers_bound(g(2, 1.0)) - PI * 3.0f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn bakry_ledoux_values() {
        assert!((bakry_ledoux_bound(4.0, 1.5).unwrap() - PI * 3.0f64.sqrt()).abs() < 1e-14);
        let cs = (8.0 - 2.0 * 3.0f64.sqrt()) / 8.0;
        let b = bakry_ledoux_bound(3.0, cs).unwrap();
        assert!((b - PI * (6.0 * cs).sqrt()).abs() < 1e-14);
        assert!((b / PI - 1.84444).abs() < 1e-5);
        assert!(bakry_ledoux_bound(2.0, 1.0).is_err());
    }

    #[test]
    fn family_bound_exact_radicand() {
        // m=2, rho=3, k=3/4: radicand 2123/760 with p = 193/49, then 1/rho
        let b = family_bound(g(2, 3.0), 0.75).unwrap();
        assert!((b.params.p.unwrap() - 193.0 / 49.0).abs() < 1e-13);
        let expected = PI * (2123.0f64 / 2280.0).sqrt();
        assert!((b.value - expected).abs() < 1e-12);
        assert!((b.value - 3.031486).abs() < 1e-6);

        let rad = family_radicand_at_default_k(2);
        assert_eq!(rad, big_ratio_pair(2123, 760));
    }

    fn big_ratio_pair(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn family_recovers_bonnet_myers_at_k_one() {
        for m in 2..=50 {
            let geo = g(m, 3.0);
            let b = family_bound(geo, 1.0).unwrap();
            let bm = bonnet_myers_bound(geo);
            assert!((b.value - bm).abs() <= 1e-14 * bm, "m={m}");
        }
    }

    #[test]
    fn family_inadmissible_k() {
        // m=2: admissible interval is (5 - 2 sqrt(6), 5 + 2 sqrt(6))
        let (lo, hi) = admissible_k_interval(2);
        assert!((lo - (5.0 - 2.0 * 6.0f64.sqrt())).abs() < 1e-12);
        assert!((hi - (5.0 + 2.0 * 6.0f64.sqrt())).abs() < 1e-12);
        assert!(matches!(
            family_bound(g(2, 3.0), 0.05),
            Err(Error::Admissibility(_))
        ));
    }

    #[test]
    fn family_scale_covariance() {
        for rho in [0.5, 1.0, 3.0, 7.0] {
            let v = family_bound(g(3, rho), 0.9).unwrap().value * rho.sqrt();
            let v1 = family_bound(g(3, 1.0), 0.9).unwrap().value;
            assert!((v - v1).abs() < 1e-12 * v1);
        }
    }

    #[test]
    fn closed_form_values() {
        assert!((closed_form_24m(g(2, 3.0)).value - PI * (1.0 - 1.0 / 48.0)).abs() < 1e-14);
        assert!((closed_form_24m(g(2, 3.0)).value - 3.076142).abs() < 1e-6);
        assert!(
            (closed_form_24m(g(10, 19.0)).value - PI * (1.0 - 1.0 / 240.0)).abs() < 1e-14
        );
        assert!(
            (closed_form_24m(g(2, 1.0)).value - PI * 3.0f64.sqrt() * 47.0 / 48.0).abs()
                < 1e-14
        );
    }

    #[test]
    fn optimizer_beats_fixed_choices() {
        let geo = g(2, 3.0);
        let opt = optimize_family(geo, 1e-8).unwrap();
        assert!(opt.value <= family_bound(geo, 0.75).unwrap().value + 1e-8);
        assert!(opt.value <= bonnet_myers_bound(geo));
        // fixed k = 1 - 1/(2m) already beats the 24m closed form
        let fixed = family_bound(geo, 1.0 - 0.25).unwrap().value;
        assert!(fixed <= closed_form_24m(geo).value);
    }

    #[test]
    fn optimizer_below_bonnet_myers_sweep() {
        for m in (2..=1000).step_by(97) {
            let geo = g(m, 1.0);
            let fixed = family_bound(geo, 1.0 - 1.0 / (2.0 * m as f64)).unwrap().value;
            let opt = optimize_family(geo, 1e-7).unwrap().value;
            let bm = bonnet_myers_bound(geo);
            assert!(opt <= fixed + 1e-7, "m={m}");
            assert!(fixed < bm, "m={m}");
            assert!(opt < bm, "m={m}");
        }
    }

    #[test]
    fn chain_check_small_sweep() {
        assert!(chain_24m_check(200).unwrap().pass);
    }

    #[test]
    fn closed_form_200_values() {
        let b = closed_form_200(2).unwrap();
        let expected = PI * (1.0 - 1.0 / (200.0 * 2.0f64.sqrt() * 2.0f64.ln()));
        assert!((b.value - expected).abs() < 1e-14);
        assert!((b.value / PI - 0.994900).abs() < 1e-6);
        assert!(closed_form_200(1).is_err());
    }
}
