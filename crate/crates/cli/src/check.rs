//! The `check` command: identity suites over every valuation and body of a scene.

use serde_json::{json, Value};
use valuations::{
    alesker_product, euler, mc_volume, nc_valuation, normal_cycle::NormalCycle, MultiPoly, Polytope, Rational,
    RealValue, RngSpec, ThetaValuation, Valuation,
};

use crate::{angle_config, Cli, CliError, Outcome, Scene};

/// Products are checked only where the diagonal hulls stay small.
const PRODUCT_DIM_LIMIT: usize = 2;
const FLOAT_SLACK: f64 = 1e-9;

struct Suite {
    rows: Vec<Value>,
    failures: usize,
}

impl Suite {
    fn record(&mut self, law: &str, subject: String, passed: bool, detail: Value) {
        if !passed {
            self.failures += 1;
        }
        self.rows.push(json!({"law": law, "subject": subject, "passed": passed, "detail": detail}));
    }

    fn exact(&mut self, law: &str, subject: String, lhs: &Rational, rhs: &Rational) {
        self.record(law, subject, lhs == rhs, json!({"lhs": lhs.to_string(), "rhs": rhs.to_string()}));
    }

    fn real(&mut self, law: &str, subject: String, lhs: &RealValue, rhs: &RealValue) {
        let passed = match (lhs.as_exact(), rhs.as_exact()) {
            (Some(a), Some(b)) => a == b,
            _ => (lhs.to_f64() - rhs.to_f64()).abs() <= lhs.error_bound() + rhs.error_bound() + FLOAT_SLACK,
        };
        self.record(law, subject, passed, json!({"lhs": crate::report::real(lhs), "rhs": crate::report::real(rhs)}));
    }
}

/// A hyperplane through an interior point, in a direction that is not a facet normal of a box.
fn split_plane(p: &Polytope) -> (Vec<Rational>, Rational) {
    let n = p.ambient_dim();
    let normal: Vec<Rational> = (0..n).map(|i| Rational::new(1, i as i64 + 1)).collect();
    let values: Vec<Rational> = p.vertices().iter().map(|v| v.iter().zip(&normal).map(|(a, b)| a * b).sum()).collect();
    let lo = values.iter().min().cloned().unwrap_or_else(Rational::zero);
    let hi = values.iter().max().cloned().unwrap_or_else(Rational::zero);
    (normal, (lo * Rational::from(2) + hi) / Rational::from(3))
}

fn split_identity<F>(suite: &mut Suite, law: &str, subject: String, p: &Polytope, mut f: F) -> Result<(), CliError>
where
    F: FnMut(&Polytope) -> Result<RealValue, CliError>,
{
    let (normal, offset) = split_plane(p);
    let (a, b) = p.split_by_hyperplane(&normal, &offset)?;
    let mid = p.section(&normal, &offset)?;
    let whole = f(p)?;
    let parts = f(&a)?.add(&f(&b)?).sub(&f(&mid)?);
    suite.real(law, subject, &whole, &parts);
    Ok(())
}

fn exact_value(v: Rational) -> RealValue {
    RealValue::rational(v)
}

pub fn run_checks(cli: &Cli, scene: &Scene) -> Result<Outcome, CliError> {
    let n = scene.dimension;
    let mut suite = Suite { rows: Vec::new(), failures: 0 };
    let chi = euler(n);
    let mut valuations: Vec<(String, ThetaValuation)> =
        scene.valuations.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
    if valuations.is_empty() {
        valuations.push(("volume".into(), ThetaValuation::lebesgue(n)));
    }
    let full: Vec<(&String, &Polytope)> = scene.bodies.iter().filter(|(_, b)| b.is_full_dimensional()).collect();

    for (vid, v) in &valuations {
        for (bid, k) in &scene.bodies {
            let subject = format!("{vid} on {bid}");
            suite.exact(
                "polarization_matches_interpolation",
                subject.clone(),
                &v.evaluate(k)?,
                &v.evaluate_by_interpolation(k)?,
            );
            if n <= PRODUCT_DIM_LIMIT {
                let unit = alesker_product(&chi, v)?.evaluate(k)?;
                suite.exact("euler_is_unit", subject.clone(), &unit, &v.evaluate(k)?);
            }
        }
        for (bid, k) in &full {
            split_identity(&mut suite, "valuation_identity", format!("{vid} on {bid}"), k, |p| {
                Ok(exact_value(v.evaluate(p)?))
            })?;
        }
    }

    if n <= PRODUCT_DIM_LIMIT {
        for (i, (aid, a)) in valuations.iter().enumerate() {
            for (bid, b) in valuations.iter().skip(i + 1) {
                let ab = alesker_product(a, b)?;
                let ba = alesker_product(b, a)?;
                for (kid, k) in &scene.bodies {
                    suite.exact("commutativity", format!("{aid}*{bid} on {kid}"), &ab.evaluate(k)?, &ba.evaluate(k)?);
                }
            }
        }
    }

    let mut intrinsic = nc_valuation(n, (0..=n).map(|k| (k, MultiPoly::one(n))).collect())?;
    intrinsic.config = angle_config(cli);
    for (bid, k) in &full {
        let cycle: NormalCycle = valuations::normal_cycle::build_normal_cycle_with(k, &angle_config(cli))?;
        let mut sum = RealValue::zero();
        for c in cycle.components_of_dim(0) {
            sum = sum.add(&c.angle.value);
        }
        suite.real("vertex_angles_sum_to_one", bid.to_string(), &sum, &exact_value(Rational::one()));
        split_identity(&mut suite, "curvature_valuation_identity", bid.to_string(), k, |p| Ok(intrinsic.evaluate(p)?))?;
        let rng = RngSpec::new(cli.seed);
        let est = mc_volume(k, cli.mc_samples, &rng)?;
        let exact = k.volume().to_f64();
        suite.record(
            "volume_matches_monte_carlo",
            bid.to_string(),
            est.agrees(exact, 4.0),
            json!({"exact": k.volume().to_string(), "estimate": crate::report::estimate(&est, cli.seed)}),
        );
    }

    let failures = suite.failures;
    Ok(Outcome {
        results: json!({"checks": suite.rows, "failures": failures, "total": suite.rows.len()}),
        probe_families: Vec::new(),
        violations: failures,
    })
}
