//! Report assembly: a run-metadata header, a deterministic body and the
//! list of checks that decides the exit status.

use pencil_core::exactcore::{ComplexF, Poly, Rat};
use serde_json::{json, Map, Value};

use crate::config::Command;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: Option<String>,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool) -> Self {
        Check {
            name: name.into(),
            passed,
            detail: None,
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }
}

/// What a command produced.
#[derive(Debug, Clone, Default)]
pub struct Outcome {
    pub body: Map<String, Value>,
    pub checks: Vec<Check>,
    /// Polynomial list for CSV output, when the command has one.
    pub polys: Option<Vec<Poly>>,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn set(&mut self, key: &str, v: Value) {
        self.body.insert(key.to_string(), v);
    }

    pub fn check(&mut self, c: Check) {
        self.checks.push(c);
    }
}

pub fn rat(x: &Rat) -> Value {
    Value::String(x.to_string())
}

pub fn rats(xs: &[Rat]) -> Value {
    Value::Array(xs.iter().map(rat).collect())
}

/// Coefficients in increasing powers.
pub fn poly(p: &Poly) -> Value {
    rats(p.coeffs())
}

pub fn poly_list(ps: &[Poly]) -> Value {
    Value::Array(
        ps.iter()
            .enumerate()
            .map(|(n, p)| json!({ "n": n, "coeffs": poly(p) }))
            .collect(),
    )
}

pub fn complex(z: ComplexF) -> Value {
    json!({ "re": z.re, "im": z.im })
}

/// A float together with the tolerance it is judged against.
pub fn tagged(value: f64, tol: f64) -> Value {
    json!({ "value": value, "tol": tol })
}

pub fn render_json(command: Command, config: &str, out: &Outcome) -> String {
    let checks: Vec<Value> = out
        .checks
        .iter()
        .map(|c| {
            let mut m = Map::new();
            m.insert("name".into(), Value::String(c.name.clone()));
            m.insert("passed".into(), Value::Bool(c.passed));
            if let Some(d) = &c.detail {
                m.insert("detail".into(), Value::String(d.clone()));
            }
            Value::Object(m)
        })
        .collect();
    let doc = json!({
        "header": {
            "tool": env!("CARGO_PKG_NAME"),
            "version": env!("CARGO_PKG_VERSION"),
            "command": command.name(),
            "config": config,
        },
        "body": Value::Object(out.body.clone()),
        "checks": checks,
        "status": if out.passed() { "pass" } else { "fail" },
    });
    let mut s = serde_json::to_string_pretty(&doc).expect("report serializes");
    s.push('\n');
    s
}

/// One row per polynomial: `n,c_0,c_1,...`.
pub fn render_csv(polys: &[Poly]) -> String {
    let mut s = String::new();
    for (n, p) in polys.iter().enumerate() {
        s.push_str(&n.to_string());
        for c in p.coeffs() {
            s.push(',');
            s.push_str(&c.to_string());
        }
        if p.is_zero() {
            s.push_str(",0");
        }
        s.push('\n');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use pencil_core::exactcore::{int, rat as r};

    #[test]
    fn rationals_are_strings() {
        assert_eq!(rat(&r(-3, 4)), json!("-3/4"));
        assert_eq!(poly(&Poly::from_ints(&[0, -2, 0, 1])), json!(["0", "-2", "0", "1"]));
    }

    #[test]
    fn csv_rows() {
        let ps = vec![Poly::one(), Poly::linear(r(1, 2), int(1)), Poly::zero()];
        assert_eq!(render_csv(&ps), "0,1\n1,1/2,1\n2,0\n");
    }

    #[test]
    fn status_follows_checks() {
        let mut out = Outcome::default();
        out.check(Check::new("a", true));
        let text = render_json(Command::Moments, "x.json", &out);
        assert!(text.contains("\"status\": \"pass\""));
        out.check(Check::new("b", false).with_detail("off"));
        let text = render_json(Command::Moments, "x.json", &out);
        assert!(text.contains("\"status\": \"fail\""));
        assert!(text.find("\"header\"").unwrap() < text.find("\"body\"").unwrap());
    }
}
