//! Rayleigh-quotient diameter pipeline: stable sin-power integrals with two
//! independent backends, the transcendental solve for the sharpest diameter
//! the eigenvalue comparison allows, and a step-by-step numerical replay of
//! the contradiction chain behind the 1/(200 sqrt(m) ln m) closed form.

use num::rational::BigRational;
use num::ToPrimitive;

use crate::diameter::{BoundParams, DiameterBound, DiameterMethod};
use crate::error::{Error, Result};
use crate::quad::{adaptive_simpson, QuadratureEstimate};
use crate::ratpoly::big;

const QUAD_TOL: f64 = 1e-12;

/// sin^e(theta) with log-space evaluation for large exponents, where the
/// plain power would underflow near theta ~ 0.
fn sin_pow(sin_theta: f64, e: u32) -> f64 {
    if e == 0 {
        return 1.0;
    }
    if sin_theta <= 0.0 {
        return 0.0;
    }
    if e > 300 {
        (e as f64 * sin_theta.ln()).exp()
    } else {
        sin_theta.powi(e as i32)
    }
}

/// Closed recurrence for I_n(theta) = int_0^theta sin^n r dr:
/// I_n = ((n-1) I_{n-2} - sin^{n-1}(theta) cos(theta)) / n,
/// I_0 = theta, I_1 = 1 - cos(theta). Forward iteration is stable (the
/// multiplier (n-1)/n is below one).
pub fn sin_power_recurrence(n: u32, theta: f64) -> f64 {
    let s = theta.sin();
    let c = theta.cos();
    let mut even = theta; // I_0
    let mut odd = 1.0 - c; // I_1
    if n == 0 {
        return even;
    }
    for j in 2..=n {
        let boundary = sin_pow(s, j - 1) * c;
        let prev = if j % 2 == 0 { even } else { odd };
        let next = ((j as f64 - 1.0) * prev - boundary) / j as f64;
        if j % 2 == 0 {
            even = next;
        } else {
            odd = next;
        }
    }
    if n % 2 == 0 {
        even
    } else {
        odd
    }
}

/// Adaptive-quadrature backend for the same integral.
pub fn sin_power_quadrature(n: u32, theta: f64) -> QuadratureEstimate {
    adaptive_simpson(|r| sin_pow(r.sin(), n), 0.0, theta, QUAD_TOL)
}

/// I_n(theta) via the recurrence, cross-checked against quadrature. The
/// reported error estimate covers the disagreement between the backends.
pub fn sin_power_integral(n: u32, theta: f64) -> Result<QuadratureEstimate> {
    if !(0.0..=std::f64::consts::PI).contains(&theta) {
        return Err(Error::Domain(format!("theta = {theta} outside [0, pi]")));
    }
    let rec = sin_power_recurrence(n, theta);
    let quad = sin_power_quadrature(n, theta);
    Ok(QuadratureEstimate {
        value: rec,
        error_estimate: quad.error_estimate.max((rec - quad.value).abs()),
    })
}

/// Exact Wallis factor 2^{2m} (m!)^2 / (2m+1)!, the closed form of
/// I_{2m+1}(pi/2).
pub fn wallis_factor(m: u32) -> BigRational {
    let mut num = big(1);
    for j in 1..=m as i64 {
        num *= big(j);
    }
    let mut result = num.clone() * num; // (m!)^2
    for _ in 0..2 * m {
        result *= big(2);
    }
    let mut fact = big(1);
    for j in 1..=(2 * m as i64 + 1) {
        fact *= big(j);
    }
    result / fact
}

/// Natural log of n!, by direct summation (exact enough for n <= a few
/// hundred, which is all the chain needs).
pub fn ln_factorial(n: u32) -> f64 {
    (2..=n).map(|j| (j as f64).ln()).sum()
}

/// Stirling sandwich bounds on ln(n!):
/// ln(sqrt(2 pi) (n/e)^n sqrt(n)) <= ln(n!) <= ln(e (n/e)^n sqrt(n)).
pub fn stirling_log_bounds(n: u32) -> (f64, f64) {
    let nf = n as f64;
    let core = nf * (nf.ln() - 1.0) + 0.5 * nf.ln();
    (core + 0.5 * (2.0 * std::f64::consts::PI).ln(), core + 1.0)
}

/// Numerator and denominator of the Rayleigh quotient of cos(pi r / d) on
/// a ball of radius d/2 in the comparison sphere:
/// N = int_0^{d/2} sin^2(pi r/d) sin^{2m-1} r dr and the cos^2 companion.
pub fn rayleigh_parts(m: u32, d: f64) -> Result<(QuadratureEstimate, QuadratureEstimate)> {
    if m < 2 {
        return Err(Error::Domain(format!("m must be >= 2, got {m}")));
    }
    if !(d > 0.0 && d <= std::f64::consts::PI) {
        return Err(Error::Domain(format!("d = {d} outside (0, pi]")));
    }
    let n_exp = 2 * m - 1;
    let omega = std::f64::consts::PI / d;
    let numerator = adaptive_simpson(
        |r| {
            let s = (omega * r).sin();
            s * s * sin_pow(r.sin(), n_exp)
        },
        0.0,
        0.5 * d,
        QUAD_TOL,
    );
    let denominator = adaptive_simpson(
        |r| {
            let c = (omega * r).cos();
            c * c * sin_pow(r.sin(), n_exp)
        },
        0.0,
        0.5 * d,
        QUAD_TOL,
    );
    Ok((numerator, denominator))
}

/// N/D with propagated error estimate.
pub fn rayleigh_ratio(m: u32, d: f64) -> Result<QuadratureEstimate> {
    let (n, dpart) = rayleigh_parts(m, d)?;
    if dpart.value.abs() < 1e-300 {
        return Err(Error::Domain(format!(
            "degenerate domain: cos^2 integral vanishes at d = {d}"
        )));
    }
    let value = n.value / dpart.value;
    let error_estimate =
        (n.error_estimate + value.abs() * dpart.error_estimate) / dpart.value.abs();
    Ok(QuadratureEstimate {
        value,
        error_estimate,
    })
}

/// (pi/d)^2 * N/D - 2(2m-1). Any diameter d actually attained by a Kahler
/// manifold with Ric >= 2m-1 must give a nonnegative margin.
pub fn prop_p_margin(m: u32, d: f64) -> Result<f64> {
    let ratio = rayleigh_ratio(m, d)?;
    let omega = std::f64::consts::PI / d;
    Ok(omega * omega * ratio.value - 2.0 * (2.0 * m as f64 - 1.0))
}

/// Largest d in (0, pi) with nonnegative margin: 2048-point scan for the
/// last nonnegative-to-negative crossing, then bisection to width `tol`.
pub fn solve_max_diameter(m: u32, tol: f64) -> Result<DiameterBound> {
    if !(tol > 0.0 && tol <= 1e-8) {
        return Err(Error::Domain(format!("tol = {tol} outside (0, 1e-8]")));
    }
    const SCAN: usize = 2048;
    let pi = std::f64::consts::PI;
    let d_at = |i: usize| pi * i as f64 / SCAN as f64;

    if prop_p_margin(m, pi)? >= 0.0 {
        return Err(Error::Solver(format!(
            "margin at d = pi is nonnegative for m = {m}; no admissible supremum below pi"
        )));
    }
    // walk down from pi to the last nonnegative sample
    let mut hi_idx = None;
    for i in (1..SCAN).rev() {
        if prop_p_margin(m, d_at(i))? >= 0.0 {
            hi_idx = Some(i);
            break;
        }
    }
    let i = hi_idx.ok_or_else(|| {
        Error::Solver(format!("no sign change found in (0, pi) for m = {m}"))
    })?;
    let mut lo = d_at(i); // margin >= 0
    let mut hi = d_at(i + 1); // margin < 0
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if prop_p_margin(m, mid)? >= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let d_star = lo;
    Ok(DiameterBound {
        method: DiameterMethod::RayleighSolve,
        value: d_star,
        params: BoundParams {
            k: None,
            p: None,
            d_star: Some(d_star),
        },
        m,
        rho: 2.0 * m as f64 - 1.0,
    })
}

/// One recorded comparison in the chain replay.
#[derive(Debug, Clone, serde::Serialize)]
pub struct ChainStep {
    pub label: String,
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
}

impl ChainStep {
    fn ge(label: &str, lhs: f64, rhs: f64) -> Self {
        ChainStep {
            label: label.to_string(),
            lhs,
            rhs,
            pass: lhs >= rhs,
        }
    }
}

/// Replay of the contradiction chain at a given (m, epsilon), with
/// d = pi/(1+epsilon). Every step's truth value is recorded as computed;
/// nothing is forced. The final flag is the strict comparison
/// 2(2m-1) > (3/2)(1+epsilon)^2 (2m+1).
#[derive(Debug, Clone, serde::Serialize)]
pub struct ChainReport {
    pub m: u32,
    pub epsilon: f64,
    /// epsilon threshold 1/(100 sqrt(m) ln m) of the contradiction hypothesis
    pub epsilon_threshold: f64,
    pub out_of_hypothesis: bool,
    pub steps: Vec<ChainStep>,
    pub all_steps_hold: bool,
    pub contradiction: bool,
}

pub fn replay_chain(m: u32, epsilon: f64) -> Result<ChainReport> {
    if m < 2 {
        return Err(Error::Domain(format!("m must be >= 2, got {m}")));
    }
    if !(epsilon > 0.0) {
        return Err(Error::Domain(format!("epsilon must be positive, got {epsilon}")));
    }
    let mf = m as f64;
    let threshold = 1.0 / (100.0 * mf.sqrt() * mf.ln());
    let d = std::f64::consts::PI / (1.0 + epsilon);
    let half_d = 0.5 * d;
    let mut steps = Vec::new();

    // (m3) elementary bounds at sampled 0 < t < pi/2
    let samples = [0.1, 0.5, 1.0, 1.5];
    let mut cos_low: Option<ChainStep> = None;
    let mut sin_low: Option<ChainStep> = None;
    let mut sin_high: Option<ChainStep> = None;
    for &t in &samples {
        let x = epsilon * t;
        let cl = ChainStep::ge("m3_cos_lower", x.cos(), 1.0 - 0.5 * x * x);
        let sl = ChainStep::ge("m3_sin_lower", x.sin(), 0.5 * x);
        let sh = ChainStep::ge("m3_sin_upper", x, x.sin());
        for (slot, cand) in [(&mut cos_low, cl), (&mut sin_low, sl), (&mut sin_high, sh)] {
            let worse = match slot {
                Some(cur) => cand.lhs - cand.rhs < cur.lhs - cur.rhs,
                None => true,
            };
            if worse {
                *slot = Some(cand);
            }
        }
    }
    steps.push(cos_low.unwrap());
    steps.push(sin_low.unwrap());
    steps.push(sin_high.unwrap());

    // (m4) epsilon/2 <= cos(d/2) <= 2 epsilon
    let cos_half_d = half_d.cos();
    steps.push(ChainStep::ge("m4_lower", cos_half_d, 0.5 * epsilon));
    steps.push(ChainStep::ge("m4_upper", 2.0 * epsilon, cos_half_d));

    // (m5)/(m3') recurrence relaxation I_{2k+1} >= (2k/(2k+1)) I_{2k-1} - 2eps/(2k+1)
    let mut worst_m5: Option<ChainStep> = None;
    for k in 1..=m {
        let i_hi = sin_power_recurrence(2 * k + 1, half_d);
        let i_lo = sin_power_recurrence(2 * k - 1, half_d);
        let kf = k as f64;
        let rhs = 2.0 * kf / (2.0 * kf + 1.0) * i_lo - 2.0 * epsilon / (2.0 * kf + 1.0);
        let cand = ChainStep::ge("m5_recurrence", i_hi, rhs);
        let worse = match &worst_m5 {
            Some(cur) => cand.lhs - cand.rhs < cur.lhs - cur.rhs,
            None => true,
        };
        if worse {
            worst_m5 = Some(cand);
        }
    }
    steps.push(worst_m5.unwrap());

    // iterated lower bound: I_{2m+1} >= W_m (1 - cos(d/2)) - 2 eps * sum 1/(2j+1)
    let i_2m1 = sin_power_recurrence(2 * m + 1, half_d);
    let w_m = wallis_factor(m).to_f64().unwrap();
    let harmonic: f64 = (1..=m).map(|j| 1.0 / (2.0 * j as f64 + 1.0)).sum();
    steps.push(ChainStep::ge(
        "m5_iterated",
        i_2m1,
        w_m * (1.0 - cos_half_d) - 2.0 * epsilon * harmonic,
    ));

    // the harmonic sum is bounded by ln(2m+1); recorded separately since
    // the chain uses it implicitly
    let log_2m1 = (2.0 * mf + 1.0).ln();
    steps.push(ChainStep::ge("m6_harmonic_le_log", log_2m1, harmonic));

    // Stirling consequence W_m >= 1/sqrt(2m+1)
    let inv_sqrt = 1.0 / (2.0 * mf + 1.0).sqrt();
    steps.push(ChainStep::ge("m6_wallis_stirling", w_m, inv_sqrt));

    // (m6) and (m6')
    steps.push(ChainStep::ge(
        "m6",
        i_2m1,
        inv_sqrt - 2.0 * epsilon * log_2m1,
    ));
    steps.push(ChainStep::ge("m6_prime", i_2m1, 0.8 * inv_sqrt));

    // (m8) cos^2 integral >= (2/3) I_{2m-1} / (2m+1), via quadrature
    let (_, den) = rayleigh_parts(m, d)?;
    let i_2m_minus_1 = sin_power_recurrence(2 * m - 1, half_d);
    steps.push(ChainStep::ge(
        "m8",
        den.value,
        2.0 / 3.0 * i_2m_minus_1 / (2.0 * mf + 1.0),
    ));

    // final comparison: contradiction iff strict
    let lhs = 2.0 * (2.0 * mf - 1.0);
    let rhs = 1.5 * (1.0 + epsilon) * (1.0 + epsilon) * (2.0 * mf + 1.0);
    let contradiction = lhs > rhs;
    steps.push(ChainStep {
        label: "final_contradiction".to_string(),
        lhs,
        rhs,
        pass: contradiction,
    });

    let all_steps_hold = steps
        .iter()
        .filter(|s| s.label != "final_contradiction")
        .all(|s| s.pass);
    Ok(ChainReport {
        m,
        epsilon,
        epsilon_threshold: threshold,
        out_of_hypothesis: epsilon >= threshold,
        steps,
        all_steps_hold,
        contradiction,
    })
}
