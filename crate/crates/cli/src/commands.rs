//! One function per subcommand. Each returns the body and checks of its
//! report, or a [`ConfigError`] when the input cannot be used.

use num_traits::Zero;
use pencil_core::bandcheck::{band_fit, symmetry_defect};
use pencil_core::exactcore::{int, rat as r, Poly, Rat};
use pencil_core::odecheck::{perturbed_jacobi, solve_polynomial_eigen, jacobi_ode_coeffs, verify_ode};
use pencil_core::pencil::{associated_polynomials, christoffel_darboux, recurrence_residual, PencilData};
use pencil_core::perturb::{
    measure_moments, monic_recurrence, orthonormality_check, orthonormality_check_f64, p_from_r,
    p_from_r_f64, perturbation_moment_table, r_from_p, recurrence3_residual_with, Measure, OrthoMode,
    ThreeTerm,
};
use pencil_core::spectral::{detrep_check, detrep_polynomial, moment_table, second_kind, DetRep, MomentTable};
use pencil_core::truncated::{
    char_poly, factorization_check, orthogonality_report, pencil_eigs, REAL_TOL, RESIDUAL_TOL,
};
use pencil_core::Error as CoreError;
use serde_json::{json, Value};

use crate::config::{core_field, Command, ConfigError, Perturbation, RunConfig, Source};
use crate::report::{complex, poly, poly_list, rat, rats, tagged, Check, Outcome};

pub type Run = Result<Outcome, ConfigError>;

const PAIRING_DEFAULT: f64 = 1e-8;
const FLOAT_ORTHO_DEFAULT: f64 = 1e-10;

/// Input-shaped errors become config errors; the rest fail the named check.
fn classify(route: &str, step: &str, e: CoreError) -> Run {
    match core_field(route, &e) {
        Some(field) => Err(ConfigError::new(field, e.to_string())),
        None => {
            let mut out = Outcome::default();
            out.check(Check::new(step, false).with_detail(e.to_string()));
            Ok(out)
        }
    }
}

macro_rules! core {
    ($route:expr, $step:expr, $e:expr) => {
        match $e {
            Ok(v) => v,
            Err(err) => return classify($route, $step, err),
        }
    };
}

pub fn run(cfg: &RunConfig) -> Run {
    match cfg.command {
        Command::Generate => generate(cfg),
        Command::Residuals => residuals(cfg),
        Command::CdCheck => cd_check(cfg),
        Command::Spectrum => spectrum(cfg),
        Command::Moments => moments(cfg),
        Command::Detrep => detrep(cfg),
        Command::Perturb => perturb(cfg),
        Command::OdeCheck => ode_check(cfg),
        Command::BandCheck => band_check(cfg),
    }
}

fn need_pencil(cfg: &RunConfig) -> Result<(&'static str, &PencilData), ConfigError> {
    match &cfg.source {
        Some(Source::Pencil { route, pencil }) => Ok((route, pencil)),
        Some(Source::Perturbation(_)) => Err(ConfigError::new(
            "perturbation",
            format!("`{}` needs an explicit `pencil` or a `degenerate` build", cfg.command.name()),
        )),
        None => Err(ConfigError::new("pencil", "missing; give `pencil` or `degenerate`")),
    }
}

fn need_perturbation(cfg: &RunConfig) -> Result<&Perturbation, ConfigError> {
    match &cfg.source {
        Some(Source::Perturbation(p)) => Ok(p),
        Some(Source::Pencil { route, .. }) => Err(ConfigError::new(
            *route,
            format!("`{}` needs a `perturbation` block", cfg.command.name()),
        )),
        None => Err(ConfigError::new("perturbation", "missing")),
    }
}

fn measure_json(m: &Measure) -> Value {
    match m {
        Measure::JacobiWeight { a, b } => json!({ "jacobi": { "a": rat(a), "b": rat(b) } }),
        Measure::Discrete { nodes, weights } => {
            json!({ "discrete": { "nodes": rats(nodes), "weights": rats(weights) } })
        }
    }
}

fn perturbation_header(out: &mut Outcome, pt: &Perturbation) {
    out.set("route", json!("perturbation"));
    out.set("c", rat(pt.params.c()));
    out.set("d", rat(pt.params.d()));
    out.set("measure", measure_json(&pt.measure));
}

/// Monic `r_0..r_depth` of the measure and the perturbed `p_0..p_depth`.
fn perturbed_family(pt: &Perturbation, depth: usize) -> Result<(ThreeTerm, Vec<Poly>, Vec<Poly>), CoreError> {
    let rec = monic_recurrence(&pt.measure, depth + 1)?;
    let r = rec.monic_polys(depth)?;
    let p = p_from_r(&pt.params, &r);
    Ok((ThreeTerm::from(&rec), r, p))
}

fn generate(cfg: &RunConfig) -> Run {
    let mut out = Outcome::default();
    let polys = match &cfg.source {
        Some(Source::Perturbation(pt)) => {
            perturbation_header(&mut out, pt);
            out.set("normalization", json!("monic"));
            core!("perturbation", "generate", perturbed_family(pt, cfg.depth)).2
        }
        _ => {
            let (route, pencil) = need_pencil(cfg)?;
            out.set("route", json!(route));
            out.set("normalization", json!("orthonormal"));
            core!(route, "generate", associated_polynomials(pencil, cfg.depth))
        }
    };
    out.set("depth", json!(cfg.depth));
    out.set("polynomials", poly_list(&polys));
    let bad: Vec<usize> = (0..polys.len()).filter(|&n| polys[n].degree() != Some(n)).collect();
    let mut c = Check::new("degrees", bad.is_empty());
    if !bad.is_empty() {
        c = c.with_detail(format!("deg p_n != n at n = {bad:?}"));
    }
    out.check(c);
    out.polys = Some(polys);
    Ok(out)
}

fn residuals(cfg: &RunConfig) -> Run {
    let (route, pencil) = need_pencil(cfg)?;
    if cfg.depth < 2 {
        return Err(ConfigError::new("depth", "residuals needs depth >= 2"));
    }
    let depth = cfg.depth;
    let p = core!(route, "p-recurrence", associated_polynomials(pencil, depth));
    let table = core!(route, "moment-table", moment_table(pencil, depth - 1));
    let q = core!(route, "q-pattern", second_kind(pencil, &table, depth));
    let mut out = Outcome::default();
    out.set("route", json!(route));
    out.set("depth", json!(depth));
    let mut p_rows = Vec::new();
    let mut q_rows = Vec::new();
    let mut p_bad = Vec::new();
    let mut q_bad = Vec::new();
    for n in 0..=depth - 2 {
        let rp = core!(route, "p-recurrence", recurrence_residual(pencil, &p, n));
        let rq = core!(route, "q-pattern", recurrence_residual(pencil, &q, n));
        if !rp.is_zero() {
            p_bad.push(n);
        }
        let expected = match n {
            0 => Poly::constant(pencil.b[0].clone()),
            1 => Poly::constant(pencil.a[0].clone()),
            _ => Poly::zero(),
        };
        if rq != expected {
            q_bad.push(n);
        }
        p_rows.push(json!({ "n": n, "residual": poly(&rp) }));
        q_rows.push(json!({ "n": n, "residual": poly(&rq), "expected": poly(&expected) }));
    }
    out.set("p", Value::Array(p_rows));
    out.set("q", Value::Array(q_rows));
    out.check(detail_if(Check::new("p-recurrence", p_bad.is_empty()), &p_bad, "nonzero residual at n"));
    out.check(detail_if(Check::new("q-pattern", q_bad.is_empty()), &q_bad, "unexpected residual at n"));
    Ok(out)
}

fn detail_if(c: Check, bad: &[usize], what: &str) -> Check {
    if bad.is_empty() {
        c
    } else {
        c.with_detail(format!("{what} = {bad:?}"))
    }
}

/// `(n, (2n+1)/3, -(n+2)/5)` for `n < depth`.
fn default_points(depth: usize) -> Vec<(usize, Rat, Rat)> {
    (0..depth)
        .map(|n| (n, r(2 * n as i64 + 1, 3), r(-(n as i64 + 2), 5)))
        .collect()
}

fn cd_check(cfg: &RunConfig) -> Run {
    let (route, pencil) = need_pencil(cfg)?;
    let points = cfg.points.clone().unwrap_or_else(|| default_points(cfg.depth));
    let mut out = Outcome::default();
    out.set("route", json!(route));
    let mut rows = Vec::new();
    let mut bad = Vec::new();
    for (i, (n, lam, y)) in points.iter().enumerate() {
        let sides = core!(route, "christoffel-darboux", christoffel_darboux(pencil, *n, lam, y));
        if !sides.holds() {
            bad.push(i);
        }
        rows.push(json!({
            "n": n,
            "lambda": rat(lam),
            "y": rat(y),
            "lhs": rat(&sides.lhs),
            "rhs": rat(&sides.rhs),
            "holds": sides.holds(),
        }));
    }
    out.set("points", Value::Array(rows));
    out.check(detail_if(Check::new("christoffel-darboux", bad.is_empty()), &bad, "fails at point"));
    Ok(out)
}

fn spectrum(cfg: &RunConfig) -> Run {
    let (route, pencil) = need_pencil(cfg)?;
    let tol = cfg.tol.unwrap_or(PAIRING_DEFAULT);
    let mut out = Outcome::default();
    out.set("route", json!(route));
    let mut rows = Vec::new();
    let (mut factor_bad, mut ortho_bad, mut real_bad, mut eig_bad) = (vec![], vec![], vec![], vec![]);
    for j in 1..=cfg.depth {
        let charpoly = core!(route, "spectrum", char_poly(pencil, j));
        let mut row = serde_json::Map::new();
        row.insert("j".into(), json!(j));
        row.insert("charpoly".into(), poly(&charpoly));
        match factorization_check(pencil, j) {
            Ok(f) => {
                if !f.ok {
                    factor_bad.push(j);
                }
                row.insert("factorization".into(), json!({ "c": rat(&f.c), "holds": f.ok }));
            }
            Err(e) if core_field(route, &e).is_some() => return classify(route, "factorization", e),
            Err(e) => {
                factor_bad.push(j);
                row.insert("factorization".into(), json!({ "error": e.to_string() }));
            }
        }
        match pencil_eigs(pencil, j) {
            Ok(spec) => {
                let eigs: Vec<Value> = spec
                    .eigenpairs
                    .iter()
                    .map(|e| {
                        json!({
                            "value": complex(e.value),
                            "multiplicity": e.multiplicity,
                            "eigenspace_dim": e.vectors.len(),
                            "residual": tagged(e.residual, RESIDUAL_TOL),
                        })
                    })
                    .collect();
                row.insert("eigenvalues".into(), Value::Array(eigs));
                let rep = core!(route, "eigen-orthogonality", orthogonality_report(&spec, pencil));
                let max_bi = rep.pairs.iter().map(|p| p.bilinear.norm()).fold(0.0, f64::max);
                let max_sesq = rep
                    .pairs
                    .iter()
                    .filter(|p| !p.conjugate_pair)
                    .map(|p| p.sesquilinear.norm())
                    .fold(0.0, f64::max);
                if max_bi > tol || max_sesq > tol {
                    ortho_bad.push(j);
                }
                if rep.all_real == Some(false) {
                    real_bad.push(j);
                }
                row.insert(
                    "orthogonality".into(),
                    json!({
                        "pairs": rep.pairs.len(),
                        "max_bilinear": tagged(max_bi, tol),
                        "max_sesquilinear": tagged(max_sesq, tol),
                        "j3_positive_definite": rep.j3_positive_definite,
                        "max_abs_imag": tagged(rep.max_abs_imag, REAL_TOL),
                        "all_real": rep.all_real,
                    }),
                );
            }
            Err(e) if core_field(route, &e).is_some() => return classify(route, "eigenpairs", e),
            Err(e) => {
                eig_bad.push(j);
                row.insert("eigenvalues".into(), json!({ "error": e.to_string() }));
            }
        }
        rows.push(Value::Object(row));
    }
    out.set("truncations", Value::Array(rows));
    out.check(detail_if(Check::new("factorization", factor_bad.is_empty()), &factor_bad, "fails at j"));
    out.check(detail_if(Check::new("eigenpairs", eig_bad.is_empty()), &eig_bad, "no eigenpairs at j"));
    out.check(detail_if(Check::new("eigen-orthogonality", ortho_bad.is_empty()), &ortho_bad, "fails at j"));
    out.check(detail_if(Check::new("real-spectrum", real_bad.is_empty()), &real_bad, "complex eigenvalue at j"));
    Ok(out)
}

fn table_json(t: &MomentTable) -> Value {
    json!({
        "max_degree": t.max_degree(),
        "s": Value::Array(t.rows().iter().map(|row| rats(row)).collect()),
        "delta": rats(t.deltas()),
    })
}

fn moments(cfg: &RunConfig) -> Run {
    let mut out = Outcome::default();
    let table = match &cfg.source {
        Some(Source::Perturbation(pt)) => {
            perturbation_header(&mut out, pt);
            let m = core!("perturbation", "moments", measure_moments(&pt.measure, 2 * cfg.depth));
            core!("perturbation", "hankel-positive", perturbation_moment_table(&pt.params, &m, cfg.depth))
        }
        _ => {
            let (route, pencil) = need_pencil(cfg)?;
            out.set("route", json!(route));
            core!(route, "hankel-positive", moment_table(pencil, cfg.depth))
        }
    };
    out.set("table", table_json(&table));
    out.check(Check::new("hankel-positive", true));
    Ok(out)
}

fn detrep(cfg: &RunConfig) -> Run {
    let (route, pencil) = need_pencil(cfg)?;
    let table = core!(route, "hankel-positive", moment_table(pencil, cfg.depth));
    let basis = core!(route, "determinant-representation", associated_polynomials(pencil, cfg.depth));
    let mut out = Outcome::default();
    out.set("route", json!(route));
    let mut rows = Vec::new();
    let mut bad = Vec::new();
    for n in 0..=cfg.depth {
        let m = core!(route, "determinant-representation", detrep_polynomial(&table, n));
        let verdict = core!(route, "determinant-representation", detrep_check(&table, &basis, n));
        if verdict != DetRep::Ok {
            bad.push(n);
        }
        rows.push(json!({
            "n": n,
            "m_n": poly(&m),
            "delta_prev": rat(&table.delta(n as isize - 1)),
            "delta": rat(&table.delta(n as isize)),
            "holds": verdict == DetRep::Ok,
        }));
    }
    out.set("entries", Value::Array(rows));
    out.check(detail_if(Check::new("determinant-representation", bad.is_empty()), &bad, "fails at n"));
    Ok(out)
}

fn perturb(cfg: &RunConfig) -> Run {
    let pt = need_perturbation(cfg)?;
    let tol = cfg.tol.unwrap_or(FLOAT_ORTHO_DEFAULT);
    let depth = cfg.depth;
    let prm = &pt.params;
    let (coeffs, r, p) = core!("perturbation", "perturb", perturbed_family(pt, depth));
    let mut out = Outcome::default();
    perturbation_header(&mut out, pt);
    out.set("depth", json!(depth));
    out.set("r", poly_list(&r));
    out.set("p", poly_list(&p));

    out.check(Check::new("roundtrip", r_from_p(prm, &p) == r));

    let at_d: Vec<Rat> = p.iter().map(|q| q.eval(prm.d())).collect();
    let mismatch: Vec<usize> = (0..=depth).filter(|&n| at_d[n] != r[n].coeff(0)).collect();
    out.set("values_at_d", rats(&at_d));
    out.check(detail_if(Check::new("value-at-d", mismatch.is_empty()), &mismatch, "p_n(d) != r_n(0) at n"));

    let mut bad = Vec::new();
    for n in 0..depth {
        let res = core!("perturbation", "recurrence", recurrence3_residual_with(prm, &p, &coeffs, n));
        if !res.is_zero() {
            bad.push(n);
        }
    }
    out.check(detail_if(Check::new("recurrence", bad.is_empty()), &bad, "nonzero residual at n"));

    let gram = core!(
        "perturbation",
        "orthogonality",
        orthonormality_check(prm, &pt.measure, &p, depth, OrthoMode::Monic)
    );
    let off: Vec<(usize, usize)> = (0..=depth)
        .flat_map(|n| (0..=depth).map(move |k| (n, k)))
        .filter(|&(n, k)| n != k && !gram[n][k].is_zero())
        .collect();
    let diag: Vec<Rat> = (0..=depth).map(|n| gram[n][n].clone()).collect();
    out.set("squared_norms", rats(&diag));
    let mut c = Check::new("orthogonality", off.is_empty());
    if let Some((n, k)) = off.first() {
        c = c.with_detail(format!("entry ({n}, {k}) = {}", gram[*n][*k]));
    }
    out.check(c);

    let rec = core!("perturbation", "orthonormality-float", monic_recurrence(&pt.measure, depth + 1));
    let r_on = core!("perturbation", "orthonormality-float", rec.orthonormal_polys_f64(depth));
    let p_on = p_from_r_f64(prm, &r_on);
    let defect = core!(
        "perturbation",
        "orthonormality-float",
        orthonormality_check_f64(prm, &pt.measure, &p_on, depth)
    );
    let worst = defect.iter().flatten().map(|v| v.abs()).fold(0.0, f64::max);
    out.set("float_defect", tagged(worst, tol));
    out.check(Check::new("orthonormality-float", worst <= tol));
    out.polys = Some(p);
    Ok(out)
}

fn ode_check(cfg: &RunConfig) -> Run {
    let Some((a, b, n)) = cfg.ode.clone() else {
        return Err(ConfigError::new("ode", "missing; give {\"a\", \"b\", \"n\"}"));
    };
    for (field, v) in [("ode.a", &a), ("ode.b", &b)] {
        if *v <= -int(1) {
            return Err(ConfigError::new(field, format!("{v} must exceed -1")));
        }
    }
    let co = jacobi_ode_coeffs(&a, &b);
    let (lam, mu) = core!("ode", "eigenvalue", solve_polynomial_eigen(&co, n));
    let nn = int(n as i64);
    let expected = &nn * (&nn + &a + &b + int(1));
    let y = Poly::from_coeffs(mu);
    let residual = verify_ode(&co, &lam, &y);
    let shifted = verify_ode(&co, &(&lam + int(1)), &y);
    let pn = core!("ode", "solution", perturbed_jacobi(&a, &b, n));
    let mut out = Outcome::default();
    out.set("a", rat(&a));
    out.set("b", rat(&b));
    out.set("n", json!(n));
    out.set("lambda", rat(&lam));
    out.set("expected_lambda", rat(&expected));
    out.set("solution", poly(&y));
    out.set("residual", json!(residual.to_string()));
    out.set("residual_coeffs", poly(&residual));
    out.set("perturbed_jacobi", poly(&pn));
    out.set("shifted_residual_zero", json!(shifted.is_zero()));
    out.check(Check::new("eigenvalue", lam == expected));
    out.check(Check::new("residual", residual.is_zero()));
    let scale = pn.leading().cloned().unwrap_or_else(|| int(1));
    out.check(Check::new("solution", y.scale(&scale) == pn));
    out.check(Check::new("shifted-lambda-fails", !shifted.is_zero()));
    Ok(out)
}

fn band_check(cfg: &RunConfig) -> Run {
    let pt = need_perturbation(cfg)?;
    let prm = &pt.params;
    let (order, grid, fit_degree) = (cfg.order, cfg.grid_degree, cfg.depth);
    if fit_degree <= order {
        return Err(ConfigError::new("depth", format!("band fit degree {fit_degree} must exceed order {order}")));
    }
    let sym = core!("perturbation", "symmetry", symmetry_defect(prm, &pt.measure, order, grid));
    let m = core!("perturbation", "band-fit", measure_moments(&pt.measure, 2 * fit_degree));
    let table = core!("perturbation", "band-fit", perturbation_moment_table(prm, &m, fit_degree));
    let (_, _, p) = core!("perturbation", "band-fit", perturbed_family(pt, fit_degree));
    let fit = core!("perturbation", "band-fit", band_fit(&p, &table, order));
    let banded = sym.symmetric_on_grid() && fit.banded;

    let mut out = Outcome::default();
    perturbation_header(&mut out, pt);
    out.set("order", json!(order));
    out.set("grid_degree", json!(grid));
    out.set("fit_degree", json!(fit_degree));
    out.set("basis", json!("monic"));
    let witness = sym.witness.as_ref().map(|w| {
        json!({
            "m": w.m,
            "phi": poly(&w.phi),
            "r_m": poly(&w.r_m),
            "defect": rat(&w.defect),
        })
    });
    out.set(
        "symmetry",
        json!({
            "max_defect": rat(&sym.max_defect),
            "grid_witness": sym.grid_witness.map(|(i, j)| json!([i, j])),
            "witness": witness,
            "symmetric_on_grid": sym.symmetric_on_grid(),
        }),
    );
    let off: Vec<Value> = fit
        .off_band()
        .iter()
        .map(|(k, i, v)| json!({ "k": k, "i": i, "xi": rat(v) }))
        .collect();
    let recurrence = fit
        .recurrence
        .as_ref()
        .map(|rows| Value::Array(rows.iter().map(|row| rats(row)).collect()));
    out.set(
        "band_fit",
        json!({
            "banded": fit.banded,
            "off_band": off,
            "recurrence": recurrence,
        }),
    );
    out.set("banded", json!(banded));
    if cfg.expect_banded {
        let mut c = Check::new("banded", banded);
        if !banded {
            let detail = match (&sym.witness, fit.off_band().first()) {
                (Some(w), _) if !w.defect.is_zero() => format!("witness defect {} with r_{}", w.defect, w.m),
                (_, Some((k, i, v))) => format!("xi[{k}][{i}] = {v}"),
                _ => format!("grid defect {}", sym.max_defect),
            };
            c = c.with_detail(detail);
        }
        out.check(c);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{parse_config, Overrides};

    fn run_text(command: Command, text: &str) -> Run {
        run(&RunConfig::resolve(command, parse_config(text).unwrap(), Overrides::default())?)
    }

    const CHEB: &str = r#"{"degenerate": {"a": [1,1,1,1,1,1,1,1], "b": [0,0,0,0,0,0,0,0]}"#;

    fn with(extra: &str) -> String {
        format!("{CHEB}{extra}}}")
    }

    #[test]
    fn generate_chebyshev_like() {
        let out = run_text(Command::Generate, &with(r#", "depth": 3"#)).unwrap();
        assert!(out.passed());
        assert_eq!(out.polys.unwrap()[3], Poly::from_ints(&[0, -2, 0, 1]));
    }

    #[test]
    fn pencil_commands_pass() {
        for cmd in [Command::Residuals, Command::CdCheck, Command::Spectrum, Command::Moments, Command::Detrep] {
            let out = run_text(cmd, &with(r#", "depth": 4"#)).unwrap();
            assert!(out.passed(), "{cmd:?}: {:?}", out.checks);
        }
    }

    #[test]
    fn short_prefix_names_field() {
        let e = run_text(Command::Generate, &with(r#", "depth": 20"#)).unwrap_err();
        assert!(e.field.starts_with("degenerate."), "{e}");
    }

    #[test]
    fn wrong_route() {
        let e = run_text(Command::Perturb, &with("")).unwrap_err();
        assert_eq!(e.field, "degenerate");
        let e = run_text(
            Command::Spectrum,
            r#"{"perturbation": {"c": 0, "d": 0, "measure": "jacobi:0,0"}}"#,
        )
        .unwrap_err();
        assert_eq!(e.field, "perturbation");
    }

    #[test]
    fn perturb_legendre() {
        let out = run_text(
            Command::Perturb,
            r#"{"perturbation": {"c": "1/2", "d": "1/3", "measure": "jacobi:0,0"}, "depth": 6}"#,
        )
        .unwrap();
        assert!(out.passed(), "{:?}", out.checks);
    }

    #[test]
    fn ode_example() {
        let out = run_text(Command::OdeCheck, r#"{"ode": {"a": 0, "b": 0, "n": 2}}"#).unwrap();
        assert!(out.passed());
        assert_eq!(out.body["lambda"], json!("6"));
        assert_eq!(out.body["residual"], json!("0"));
        let e = run_text(Command::OdeCheck, r#"{"ode": {"a": -1, "b": 0, "n": 2}}"#).unwrap_err();
        assert_eq!(e.field, "ode.a");
    }

    #[test]
    fn band_check_identity_is_banded() {
        let mut cfg = RunConfig::resolve(
            Command::BandCheck,
            parse_config(r#"{"perturbation": {"c": 0, "d": 0, "measure": "jacobi:0,0"}, "grid_degree": 4}"#)
                .unwrap(),
            Overrides::default(),
        )
        .unwrap();
        cfg.expect_banded = true;
        let out = run(&cfg).unwrap();
        assert!(out.passed(), "{:?}", out.checks);
        assert_eq!(out.body["banded"], json!(true));
    }
}
