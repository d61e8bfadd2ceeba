//! Command implementations behind the CLI binary. Each returns a Report;
//! the binary renders it and maps errors to exit codes.

use serde_json::{json, Value};

use crate::constants::{constant_for, riemannian_sobolev_constant};
use crate::diameter::{
    bonnet_myers_bound, chain_24m_check, closed_form_200, closed_form_24m, family_bound,
    optimize_family, DiameterBound, DiameterMethod,
};
use crate::error::{Error, Result};
use crate::geometry::GeometryParams;
use crate::identities::{check_e_nonneg, verify_identity, IDENTITY_IDS};
use crate::model::{
    beckner_sweep, sobolev_sweep, ManifoldSpec, BECKNER_TEST_PS, SOBOLEV_TEST_PS,
};
use crate::rayleigh::{replay_chain, solve_max_diameter};
use crate::report::{num12, Report, Status};

/// Global knobs shared by all commands.
#[derive(Debug, Clone, Copy)]
pub struct GlobalOpts {
    pub seed: u64,
    pub tol: f64,
    pub quad_order: usize,
}

impl Default for GlobalOpts {
    fn default() -> Self {
        GlobalOpts {
            seed: 0,
            tol: 1e-10,
            quad_order: 64,
        }
    }
}

/// `constants`: the inequality constant for (m, rho, p), with the
/// Riemannian baseline and improvement ratio when p > 2.
pub fn cmd_constants(m: u32, rho: f64, p: f64) -> Result<Report> {
    let g = GeometryParams::new(m, rho)?;
    let c = constant_for(g, p)?;
    let mut report = Report::new("constants");
    report.input("m", json!(m));
    report.input("rho", num12(rho));
    report.input("p", num12(p));
    let mut record = serde_json::Map::new();
    record.insert("label".into(), json!("constant"));
    record.insert(
        "family".into(),
        serde_json::to_value(&c.family).expect("serializable"),
    );
    record.insert("value".into(), num12(c.value));
    report.push(Value::Object(record));
    if p > 2.0 {
        let baseline = riemannian_sobolev_constant(2 * m, p, rho)?;
        report.push(json!({
            "label": "riemannian_baseline",
            "value": num12(baseline),
        }));
        report.push(json!({
            "label": "improvement_ratio",
            "value": num12(c.value / baseline),
        }));
    }
    Ok(report)
}

fn bound_record(b: &DiameterBound) -> Value {
    let mut map = serde_json::Map::new();
    map.insert(
        "method".into(),
        serde_json::to_value(b.method).expect("serializable"),
    );
    map.insert("value".into(), num12(b.value));
    if let Some(k) = b.params.k {
        map.insert("k".into(), num12(k));
    }
    if let Some(p) = b.params.p {
        map.insert("p".into(), num12(p));
    }
    if let Some(d) = b.params.d_star {
        map.insert("d_star".into(), num12(d));
    }
    Value::Object(map)
}

/// Rayleigh and 200-form bounds are computed at the normalization
/// rho = 2m - 1 and rescaled to the requested rho.
fn rescale_to_rho(mut b: DiameterBound, rho: f64) -> DiameterBound {
    let factor = ((2.0 * b.m as f64 - 1.0) / rho).sqrt();
    b.value *= factor;
    b.rho = rho;
    b
}

/// `diameter`: one bound, or every bound plus the minimum with `all`.
pub fn cmd_diameter(
    m: u32,
    rho: f64,
    method: &str,
    k: Option<f64>,
    opts: GlobalOpts,
) -> Result<Report> {
    let g = GeometryParams::new(m, rho)?;
    let default_k = 1.0 - 1.0 / (2.0 * m as f64);
    let k = k.unwrap_or(default_k);
    let opt_tol = opts.tol.min(1e-8);
    let mut report = Report::new("diameter");
    report.input("m", json!(m));
    report.input("rho", num12(rho));
    report.input("method", json!(method));
    report.input("k", num12(k));
    report.input("tol", num12(opts.tol));

    let compute = |name: &str| -> Result<DiameterBound> {
        match name {
            "bonnet-myers" => Ok(DiameterBound {
                method: DiameterMethod::BonnetMyers,
                value: bonnet_myers_bound(g),
                params: Default::default(),
                m,
                rho,
            }),
            "family" => family_bound(g, k),
            "family-opt" => optimize_family(g, opt_tol),
            "closed-24m" => Ok(closed_form_24m(g)),
            "closed-200" => Ok(rescale_to_rho(closed_form_200(m)?, rho)),
            "rayleigh" => Ok(rescale_to_rho(solve_max_diameter(m, opt_tol)?, rho)),
            other => Err(Error::Domain(format!("unknown method '{other}'"))),
        }
    };

    if method == "all" {
        let names = [
            "bonnet-myers",
            "family",
            "family-opt",
            "closed-24m",
            "closed-200",
            "rayleigh",
        ];
        let bounds: Vec<DiameterBound> = names
            .iter()
            .map(|n| compute(n))
            .collect::<Result<_>>()?;
        let best = bounds
            .iter()
            .map(|b| b.value)
            .fold(f64::INFINITY, f64::min);
        for b in &bounds {
            let mut rec = bound_record(b);
            if let Value::Object(map) = &mut rec {
                map.insert("is_minimum".into(), json!(b.value <= best));
            }
            report.push(rec);
        }
    } else {
        report.push(bound_record(&compute(method)?));
    }
    Ok(report)
}

fn push_check(report: &mut Report, label: &str, pass: bool, detail: Value) -> bool {
    report.push(json!({
        "label": label,
        "pass": pass,
        "detail": detail,
    }));
    pass
}

fn verify_identities(report: &mut Report) -> Result<bool> {
    let mut all = true;
    for id in IDENTITY_IDS {
        let check = verify_identity(id)?;
        all &= push_check(report, id, check.pass, json!(check.residual));
    }
    let e_check = check_e_nonneg(6, 4.0, 12)?;
    all &= push_check(report, "E-nonneg", e_check.pass, json!(e_check.residual));
    Ok(all)
}

fn verify_chain_24m(report: &mut Report, m_max: u32) -> Result<bool> {
    let check = chain_24m_check(m_max)?;
    Ok(push_check(
        report,
        "chain-24m",
        check.pass,
        json!(check.residual),
    ))
}

fn verify_chain_200(report: &mut Report, m_max: u32) -> Result<bool> {
    let mut all = true;
    for m in 2..=m_max {
        let mf = m as f64;
        let eps = 0.5 / (100.0 * mf.sqrt() * mf.ln());
        let rep = replay_chain(m, eps)?;
        let informational = m <= 3;
        let pass = rep.all_steps_hold && (informational || rep.contradiction);
        report.push(json!({
            "label": format!("chain-200-m{m}"),
            "pass": pass,
            "informational": informational,
            "steps_hold": rep.all_steps_hold,
            "contradiction": rep.contradiction,
            "epsilon": num12(eps),
        }));
        all &= pass;
    }
    Ok(all)
}

fn verify_model(report: &mut Report, opts: GlobalOpts) -> Result<bool> {
    let spec = ManifoldSpec::new(3.0, opts.quad_order)?;
    let mut all = true;
    let beck = beckner_sweep(&spec, opts.seed, 200, &BECKNER_TEST_PS)?;
    all &= push_check(
        report,
        "model-beckner",
        beck.violations == 0,
        json!({"min_margin": num12(beck.min_margin), "checks": beck.functions * beck.exponents.len()}),
    );
    let sob = sobolev_sweep(&spec, opts.seed, 200, &SOBOLEV_TEST_PS)?;
    all &= push_check(
        report,
        "model-sobolev",
        sob.violations == 0,
        json!({"min_margin": num12(sob.min_margin), "checks": sob.functions * sob.exponents.len()}),
    );
    let lambda1 = spec.check_lambda1();
    all &= push_check(
        report,
        "model-lambda1",
        (lambda1 - 6.0).abs() <= 1e-8,
        json!({"quotient": num12(lambda1)}),
    );
    Ok(all)
}

/// `verify`: run a named suite (or all of them) and aggregate pass/fail.
pub fn cmd_verify(suite: &str, m_max: u32, opts: GlobalOpts) -> Result<Report> {
    let mut report = Report::new("verify");
    report.input("suite", json!(suite));
    report.input("seed", json!(opts.seed));
    report.input("m_max", json!(m_max));
    report.input("quad_order", json!(opts.quad_order));
    let all = match suite {
        "identities" => verify_identities(&mut report)?,
        "chain-24m" => verify_chain_24m(&mut report, m_max)?,
        "chain-200" => verify_chain_200(&mut report, m_max.min(50))?,
        "model" => verify_model(&mut report, opts)?,
        "all" => {
            let a = verify_identities(&mut report)?;
            let b = verify_chain_24m(&mut report, m_max.min(1000))?;
            let c = verify_chain_200(&mut report, m_max.min(12))?;
            let d = verify_model(&mut report, opts)?;
            a && b && c && d
        }
        other => {
            return Err(Error::Domain(format!(
                "unknown suite '{other}' (expected identities, chain-24m, chain-200, model, all)"
            )))
        }
    };
    report.status = if all { Status::Pass } else { Status::Fail };
    Ok(report)
}

/// `table`: comparison table of every diameter bound for a range of m.
/// rho_mode `unit` uses rho = 1, `ric2m1` uses rho = 2m - 1.
pub fn cmd_table(
    m_lo: u32,
    m_hi: u32,
    rho_mode: &str,
    out_path: Option<&str>,
    opts: GlobalOpts,
) -> Result<Report> {
    if m_lo < 2 || m_hi < m_lo {
        return Err(Error::Domain(format!(
            "invalid m range {m_lo}:{m_hi} (need 2 <= lo <= hi)"
        )));
    }
    let mut report = Report::new("table");
    report.input("m_range", json!(format!("{m_lo}:{m_hi}")));
    report.input("rho_mode", json!(rho_mode));
    let opt_tol = opts.tol.min(1e-8);
    for m in m_lo..=m_hi {
        let rho = match rho_mode {
            "unit" => 1.0,
            "ric2m1" => 2.0 * m as f64 - 1.0,
            other => return Err(Error::Domain(format!("unknown rho mode '{other}'"))),
        };
        let g = GeometryParams::new(m, rho)?;
        let k = 1.0 - 1.0 / (2.0 * m as f64);
        let values = [
            bonnet_myers_bound(g),
            family_bound(g, k)?.value,
            optimize_family(g, opt_tol)?.value,
            closed_form_24m(g).value,
            rescale_to_rho(solve_max_diameter(m, opt_tol)?, rho).value,
            rescale_to_rho(closed_form_200(m)?, rho).value,
        ];
        let best = values.iter().copied().fold(f64::INFINITY, f64::min);
        report.push(json!({
            "m": m,
            "bonnet_myers": num12(values[0]),
            "family_at_k": num12(values[1]),
            "family_opt": num12(values[2]),
            "closed_24m": num12(values[3]),
            "rayleigh_solve": num12(values[4]),
            "closed_200": num12(values[5]),
            "best": num12(best),
        }));
    }
    if let Some(path) = out_path {
        std::fs::write(path, report.render_csv())?;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_examples() {
        let r = cmd_constants(2, 1.0, 3.0).unwrap();
        let v = r.to_json();
        let results = v["results"].as_array().unwrap();
        assert!((results[0]["value"].as_f64().unwrap() - 0.566987).abs() < 1e-6);
        assert!((results[1]["value"].as_f64().unwrap() - 0.75).abs() < 1e-12);
        assert!((results[2]["value"].as_f64().unwrap() - 0.75598).abs() < 1e-5);

        let r = cmd_constants(2, 1.0, 2.0).unwrap();
        let v = r.to_json();
        assert!((v["results"][0]["value"].as_f64().unwrap() - 0.5).abs() < 1e-15);

        assert!(cmd_constants(1, 1.0, 2.0).is_err());
    }

    #[test]
    fn diameter_examples() {
        let opts = GlobalOpts::default();
        let get = |method: &str, k: Option<f64>| -> f64 {
            let r = cmd_diameter(2, 3.0, method, k, opts).unwrap();
            r.to_json()["results"][0]["value"].as_f64().unwrap()
        };
        assert!((get("closed-24m", None) - 3.076142).abs() < 1e-6);
        assert!((get("family", Some(0.75)) - 3.031486).abs() < 1e-6);
        assert!((get("bonnet-myers", None) - std::f64::consts::PI).abs() < 1e-12);
    }

    #[test]
    fn diameter_all_marks_minimum() {
        let r = cmd_diameter(2, 3.0, "all", None, GlobalOpts::default()).unwrap();
        let v = r.to_json();
        let results = v["results"].as_array().unwrap();
        assert_eq!(results.len(), 6);
        let best = results
            .iter()
            .map(|rec| rec["value"].as_f64().unwrap())
            .fold(f64::INFINITY, f64::min);
        for rec in results {
            let is_min = rec["is_minimum"].as_bool().unwrap();
            assert_eq!(is_min, rec["value"].as_f64().unwrap() <= best);
        }
    }

    #[test]
    fn verify_identities_suite_passes() {
        let r = cmd_verify("identities", 100, GlobalOpts::default()).unwrap();
        assert_eq!(r.status, Status::Pass);
    }

    #[test]
    fn verify_chain_200_reports_gap_informationally() {
        let r = cmd_verify("chain-200", 6, GlobalOpts::default()).unwrap();
        assert_eq!(r.status, Status::Pass);
        let v = r.to_json();
        for rec in v["results"].as_array().unwrap() {
            let m = rec["label"].as_str().unwrap();
            let contradiction = rec["contradiction"].as_bool().unwrap();
            if m == "chain-200-m2" || m == "chain-200-m3" {
                assert!(rec["informational"].as_bool().unwrap());
                assert!(!contradiction);
            } else {
                assert!(contradiction);
            }
        }
    }

    #[test]
    fn table_rows_and_best_column() {
        let r = cmd_table(2, 5, "ric2m1", None, GlobalOpts::default()).unwrap();
        let v = r.to_json();
        let rows = v["results"].as_array().unwrap();
        assert_eq!(rows.len(), 4);
        let m2 = &rows[0];
        assert!((m2["bonnet_myers"].as_f64().unwrap() - std::f64::consts::PI).abs() < 1e-11);
        assert!((m2["closed_24m"].as_f64().unwrap() - 3.076142).abs() < 1e-6);
        for row in rows {
            let best = row["best"].as_f64().unwrap();
            for col in [
                "bonnet_myers",
                "family_at_k",
                "family_opt",
                "closed_24m",
                "rayleigh_solve",
                "closed_200",
            ] {
                assert!(best <= row[col].as_f64().unwrap() + 1e-15);
            }
        }
    }

    #[test]
    fn unknown_suite_is_domain_error() {
        assert!(cmd_verify("bogus", 10, GlobalOpts::default()).is_err());
        assert!(cmd_table(1, 5, "unit", None, GlobalOpts::default()).is_err());
    }
}
