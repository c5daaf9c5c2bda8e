//! One function per subcommand. Each resolves its flags into a list of
//! points, evaluates them in parallel and assembles the rows in order.

use crate::args::*;
use crate::config::{default_sample, load_sample, set_field, SAMPLE_KEYS};
use crate::sweep::{Scale, SweepSpec};
use crate::table::{Cell, Table};
use crate::{CliError, UsageError};
use nonasym::integralxs::{
    sigma_total, sigma_total_finite, sigma_transport, transport_decomposition, transport_registry, universal_totals,
    IntegralConfig,
};
use nonasym::optical::{flux_balance_signed, flux_ratio, forward_amplitude_with};
use nonasym::quadrature::{oscillatory_registry, QuadratureConfig};
use nonasym::scattering::{
    differential_xs_with, rutherford_xs, CoulombInteraction, ObservationGeometry, KR_WARNING, KR_WARNING_LABEL,
};
use nonasym::semiconductor::{
    mobility, Evaluation, MobilityMethod, MobilityOptions, SemiconductorSample, X_MAX, X_MIN,
};
use nonasym::specfun::{self, tricomi_registry, RegimeConfig};
use nonasym::{Error, Sign};
use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::{json, Map, Value};
use std::f64::consts::PI;

pub struct Report {
    pub command: &'static str,
    pub table: Table,
    pub parameters: Map<String, Value>,
    pub tolerances: Map<String, Value>,
    pub notes: Vec<String>,
}

pub fn dispatch(cli: &crate::args::Cli) -> Result<Report, CliError> {
    let scale = cli.scale;
    match &cli.command {
        Command::DiffXs(a) => diff_xs(a, scale),
        Command::TotalXs(a) => total_xs(a, scale),
        Command::TransportXs(a) => transport_xs(a, scale),
        Command::Universal(a) => universal(a, scale),
        Command::OpticalCheck(a) => optical_check(a, scale),
        Command::Mobility(a) => mobility_cmd(a, scale),
        Command::SpecfunEval(a) => specfun_eval(a, scale),
    }
}

/// Evaluates every point in parallel; rows come back in input order and the
/// first failing point (in order) decides the error.
fn rows<F>(values: &[f64], f: F) -> Result<Vec<Vec<Cell>>, Error>
where
    F: Fn(f64) -> Result<Vec<Cell>, Error> + Sync,
{
    let out: Vec<Result<Vec<Cell>, Error>> = values.par_iter().map(|&v| f(v)).collect();
    out.into_iter().collect()
}

/// At most one sweep per run, from `--sweep` or a variable-specific flag.
fn resolve_sweep(
    scale: Scale,
    generic: &Option<String>,
    specific: &[(&str, &str, &Option<String>)],
    allowed: &[&str],
) -> Result<Option<(String, SweepSpec)>, UsageError> {
    let mut found: Option<(String, SweepSpec)> = None;
    let mut take = |flag: &str, spec: SweepSpec| -> Result<(), UsageError> {
        if let Some((prev, _)) = &found {
            return Err(UsageError::new(flag, format!("only one sweep per run ({prev} already given)")));
        }
        found = Some((flag.to_string(), spec));
        Ok(())
    };
    if let Some(text) = generic {
        let spec = SweepSpec::parse_named("--sweep", text, scale)?;
        if !allowed.contains(&spec.variable.as_str()) {
            return Err(UsageError::new(
                "--sweep",
                format!("cannot sweep '{}' here (expected one of {})", spec.variable, allowed.join(", ")),
            ));
        }
        take("--sweep", spec)?;
    }
    for (flag, var, text) in specific {
        if let Some(text) = text {
            take(flag, SweepSpec::parse_unnamed(flag, var, text, scale)?)?;
        }
    }
    Ok(found)
}

fn swept<'a>(sweep: &'a Option<(String, SweepSpec)>, var: &str) -> Option<&'a (String, SweepSpec)> {
    sweep.as_ref().filter(|(_, s)| s.variable == var)
}

/// A fixed value that must be given unless the same variable is swept.
fn fixed(flag: &str, value: Option<f64>, sweep: &Option<(String, SweepSpec)>, var: &str) -> Result<f64, UsageError> {
    match (value, swept(sweep, var)) {
        (Some(_), Some((sf, _))) => Err(UsageError::new(flag, format!("conflicts with {sf}"))),
        (Some(v), None) => Ok(v),
        (None, Some(_)) => Ok(f64::NAN),
        (None, None) => Err(UsageError::new(flag, "is required")),
    }
}

/// Sweep values, or the single fixed value when nothing is swept.
fn points(sweep: &Option<(String, SweepSpec)>) -> Vec<f64> {
    sweep.as_ref().map_or(vec![f64::NAN], |(_, s)| s.values())
}

/// Checks a fixed value or every sweep value against `ok`.
fn check_all(
    flag: &str,
    value: f64,
    var: &str,
    sweep: &Option<(String, SweepSpec)>,
    ok: impl Fn(f64) -> bool,
    what: &str,
) -> Result<(), UsageError> {
    match swept(sweep, var) {
        Some((sf, s)) => {
            if let Some(v) = s.values().into_iter().find(|&v| !ok(v)) {
                return Err(UsageError::new(sf, format!("{var} {what}, got {v}")));
            }
        }
        None => {
            if !ok(value) {
                return Err(UsageError::new(flag, format!("{what}, got {value}")));
            }
        }
    }
    Ok(())
}

fn positive(v: f64) -> bool {
    v > 0.0 && v.is_finite()
}

fn sweep_param(params: &mut Map<String, Value>, sweep: &Option<(String, SweepSpec)>) {
    if let Some((_, s)) = sweep {
        params.insert("sweep".into(), json!(s));
    }
}

fn opt_insert(params: &mut Map<String, Value>, key: &str, v: Option<f64>) {
    if let Some(v) = v {
        params.insert(key.into(), json!(v));
    }
}

/// Resolved interaction and distance, with NaN marking the swept one.
struct Setup {
    xi: f64,
    sign: Sign,
    k: f64,
    /// "kr" or "r", whichever was given or swept
    dist_var: &'static str,
    dist: f64,
}

impl Setup {
    fn new(ia: &InteractionArgs, d: &DistanceArgs, sweep: &Option<(String, SweepSpec)>) -> Result<Self, UsageError> {
        let xi = fixed("--xi", ia.xi, sweep, "xi")?;
        check_all("--xi", xi, "xi", sweep, positive, "must be positive")?;
        if !positive(ia.k) {
            return Err(UsageError::new("--k", format!("must be positive, got {}", ia.k)));
        }
        let (dist_var, flag, given) =
            if d.r.is_some() || swept(sweep, "r").is_some() { ("r", "--r", d.r) } else { ("kr", "--kr", d.kr) };
        let dist = fixed(flag, given, sweep, dist_var).map_err(|e| {
            if given.is_none() && sweep.is_none() {
                UsageError::new("--kr", "one of --kr or --r is required")
            } else {
                e
            }
        })?;
        check_all(flag, dist, dist_var, sweep, positive, "must be positive")?;
        Ok(Setup { xi, sign: ia.sign, k: ia.k, dist_var, dist })
    }

    /// (ξ, r, kr) at one point of the sweep over `var`.
    fn at(&self, var: Option<&str>, v: f64) -> (f64, f64, f64) {
        let xi = if var == Some("xi") { v } else { self.xi };
        let d = if var == Some(self.dist_var) { v } else { self.dist };
        let (r, kr) = if self.dist_var == "r" { (d, self.k * d) } else { (d / self.k, d) };
        (xi, r, kr)
    }

    fn params(&self, ia: &InteractionArgs, d: &DistanceArgs) -> Map<String, Value> {
        let mut p = Map::new();
        opt_insert(&mut p, "xi", ia.xi);
        p.insert("sign".into(), json!(self.sign));
        p.insert("k".into(), json!(self.k));
        opt_insert(&mut p, "r", d.r);
        opt_insert(&mut p, "kr", d.kr);
        p
    }

    fn kr_notes(&self, var: Option<&str>, values: &[f64]) -> Vec<String> {
        let low = values.iter().any(|&v| self.at(var, v).2 < KR_WARNING);
        if low {
            vec![format!("{KR_WARNING_LABEL} (k r < {KR_WARNING})")]
        } else {
            vec![]
        }
    }
}

fn integral_tolerances() -> Map<String, Value> {
    let c = IntegralConfig::default();
    let mut t = Map::new();
    t.insert("quad_rel_tol".into(), json!(c.quad.rel_tol));
    t.insert("z_cut_min".into(), json!(c.z_cut_min));
    t.insert("z_cut_xi2".into(), json!(c.z_cut_xi2));
    t.insert("xi_max".into(), json!(c.xi_max));
    t
}

fn diff_xs(a: &DiffXsArgs, scale: Scale) -> Result<Report, CliError> {
    let sweep = resolve_sweep(
        scale,
        &a.sweep,
        &[("--theta-sweep", "theta", &a.theta_sweep), ("--x-sweep", "x", &a.x_sweep)],
        &["theta", "x", "xi", "kr", "r"],
    )?;
    let setup = Setup::new(&a.interaction, &a.distance, &sweep)?;
    let var = sweep.as_ref().map(|(_, s)| s.variable.clone());
    let var = var.as_deref();
    let angle_swept = matches!(var, Some("theta" | "x"));
    // angle: exactly one of theta / x, fixed or swept
    let (angle_var, angle) = match (a.theta, a.x, angle_swept) {
        (Some(_), Some(_), _) => return Err(UsageError::new("--x", "conflicts with --theta").into()),
        (Some(_), None, true) | (None, Some(_), true) => {
            let flag = if a.theta.is_some() { "--theta" } else { "--x" };
            return Err(UsageError::new(flag, format!("conflicts with {}", sweep.as_ref().unwrap().0)).into());
        }
        (Some(t), None, false) => ("theta", t),
        (None, Some(x), false) => ("x", x),
        (None, None, true) => (var.unwrap(), f64::NAN),
        (None, None, false) => {
            return Err(UsageError::new("--theta", "one of --theta, --x or an angle sweep is required").into())
        }
    };
    let to_rad = if a.degrees { PI / 180.0 } else { 1.0 };
    if angle_var == "theta" {
        let flag = if angle_swept { "" } else { "--theta" };
        check_all(
            flag,
            angle,
            "theta",
            &sweep,
            |t| (0.0..=PI + 1e-15).contains(&(t * to_rad)),
            if a.degrees { "must lie in [0, 180] degrees" } else { "must lie in [0, pi]" },
        )?;
    } else {
        check_all("--x", angle, "x", &sweep, |x| x >= 0.0 && x.is_finite(), "must be nonnegative")?;
    }
    let strategy = tricomi_registry(RegimeConfig::default()).get(&a.regime).map_err(|e| match e {
        Error::UnknownStrategy { name, .. } => CliError::Usage(UsageError::new(
            "--regime",
            format!("unknown regime '{name}' (expected auto, series, integral or asymptotic)"),
        )),
        e => e.into(),
    })?;
    let values = points(&sweep);
    let prefix = var.filter(|v| matches!(*v, "xi" | "kr" | "r"));
    let mut cols: Vec<&str> = prefix.into_iter().collect();
    cols.extend(["theta", "x", "sigma1", "sigma_rutherford"]);
    let mut table = Table::new(&cols);
    table.rows = rows(&values, |v| {
        let (xi, r, kr) = setup.at(var, v);
        let ci = CoulombInteraction::new(xi, setup.sign, setup.k)?;
        let theta0 = (2.0 / kr).sqrt();
        let av = if var == Some(angle_var) { v } else { angle };
        let theta = if angle_var == "theta" { (av * to_rad).min(PI) } else { av * theta0 };
        if theta > PI {
            return Err(Error::DomainError(format!("x = {av} puts theta beyond pi at kr = {kr}")));
        }
        let g = ObservationGeometry::new(setup.k, r, theta)?;
        let s1 = differential_xs_with(strategy.as_ref(), &ci, &g)?;
        let ruth = if theta > 0.0 { rutherford_xs(&ci, theta)? } else { f64::NAN };
        let mut row: Vec<Cell> = prefix.map(|_| Cell::Num(v)).into_iter().collect();
        row.extend([Cell::Num(theta / to_rad), Cell::Num(g.x), Cell::Num(s1), Cell::Num(ruth)]);
        Ok(row)
    })?;
    let mut p = setup.params(&a.interaction, &a.distance);
    opt_insert(&mut p, "theta", a.theta);
    opt_insert(&mut p, "x", a.x);
    p.insert("degrees".into(), json!(a.degrees));
    p.insert("regime".into(), json!(a.regime));
    sweep_param(&mut p, &sweep);
    let rc = RegimeConfig::default();
    let mut t = Map::new();
    t.insert("switch_z_low".into(), json!(rc.switch_z_low));
    t.insert("switch_z_high".into(), json!(rc.switch_z_high));
    t.insert("asymptotic_tol".into(), json!(rc.asymptotic_tol));
    let notes = setup.kr_notes(var, &values);
    Ok(Report { command: "diff-xs", table, parameters: p, tolerances: t, notes })
}

fn total_xs(a: &TotalXsArgs, scale: Scale) -> Result<Report, CliError> {
    let sweep = resolve_sweep(scale, &a.sweep, &[], &["xi", "kr", "r"])?;
    let setup = Setup::new(&a.interaction, &a.distance, &sweep)?;
    let var = sweep.as_ref().map(|(_, s)| s.variable.as_str());
    let values = points(&sweep);
    let mut cols = vec!["xi", "r", "kr", "sigma_tot", "flux_ratio"];
    if a.finite {
        cols.push("sigma_tot_finite");
    }
    let mut table = Table::new(&cols);
    table.rows = rows(&values, |v| {
        let (xi, r, kr) = setup.at(var, v);
        let ci = CoulombInteraction::new(xi, setup.sign, setup.k)?;
        let tot = sigma_total(&ci, r)?.value;
        let mut row = vec![Cell::Num(xi), Cell::Num(r), Cell::Num(kr), Cell::Num(tot), Cell::Num(flux_ratio(&ci, r)?)];
        if a.finite {
            row.push(Cell::Num(sigma_total_finite(&ci, r)?.value));
        }
        Ok(row)
    })?;
    let mut p = setup.params(&a.interaction, &a.distance);
    p.insert("finite".into(), json!(a.finite));
    sweep_param(&mut p, &sweep);
    Ok(Report {
        command: "total-xs",
        table,
        parameters: p,
        tolerances: integral_tolerances(),
        notes: setup.kr_notes(var, &values),
    })
}

fn transport_xs(a: &TransportXsArgs, scale: Scale) -> Result<Report, CliError> {
    let sweep = resolve_sweep(scale, &a.sweep, &[], &["xi", "kr", "r"])?;
    let setup = Setup::new(&a.interaction, &a.distance, &sweep)?;
    let registry = transport_registry();
    if registry.get(&a.method).is_err() {
        let mut names = registry.names();
        names.sort();
        return Err(UsageError::new(
            "--method",
            format!("unknown method '{}' (expected one of {})", a.method, names.join(", ")),
        )
        .into());
    }
    let var = sweep.as_ref().map(|(_, s)| s.variable.as_str());
    let values = points(&sweep);
    let mut table = Table::new(&["xi", "r", "kr", "sigma_tr", "sigma_tr_prime", "method"]);
    table.rows = rows(&values, |v| {
        let (xi, r, kr) = setup.at(var, v);
        let ci = CoulombInteraction::new(xi, setup.sign, setup.k)?;
        let s = sigma_transport(&ci, r, &a.method)?;
        let prime = s.value * setup.k * setup.k / (2.0 * PI * xi * xi);
        let m = serde_json::to_value(s.method).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
        Ok(vec![Cell::Num(xi), Cell::Num(r), Cell::Num(kr), Cell::Num(s.value), Cell::Num(prime), Cell::Text(m)])
    })?;
    let mut p = setup.params(&a.interaction, &a.distance);
    p.insert("method".into(), json!(a.method));
    sweep_param(&mut p, &sweep);
    let mut t = integral_tolerances();
    t.insert("auto_direct_below_kr".into(), json!(1e3));
    Ok(Report { command: "transport-xs", table, parameters: p, tolerances: t, notes: setup.kr_notes(var, &values) })
}

fn universal(a: &UniversalArgs, scale: Scale) -> Result<Report, CliError> {
    let sweep = resolve_sweep(scale, &a.sweep, &[("--xi-sweep", "xi", &a.xi_sweep)], &["xi"])?;
    let xi = fixed("--xi", a.xi, &sweep, "xi")?;
    check_all("--xi", xi, "xi", &sweep, positive, "must be positive")?;
    let cfg = IntegralConfig::default();
    let values = points(&sweep);
    let mut table = Table::new(&["xi", "i_attract", "i_repel", "itr_attract", "itr_repel", "i_error"]);
    table.rows = rows(&values, |v| {
        let x = if sweep.is_some() { v } else { xi };
        let u = universal_totals(x, &cfg)?;
        // k²σ_tr − 2πξ² ln(2kr), the r-independent part
        let itr =
            |s: Sign| -> Result<f64, Error> { Ok(2.0 * PI * x * x * transport_decomposition(x, s)?.regular_part()) };
        Ok(vec![
            Cell::Num(x),
            Cell::Num(u.i_attract),
            Cell::Num(u.i_repel),
            Cell::Num(itr(Sign::Attract)?),
            Cell::Num(itr(Sign::Repel)?),
            Cell::Num(u.err),
        ])
    })?;
    let mut p = Map::new();
    opt_insert(&mut p, "xi", a.xi);
    sweep_param(&mut p, &sweep);
    Ok(Report { command: "universal", table, parameters: p, tolerances: integral_tolerances(), notes: vec![] })
}

fn optical_check(a: &OpticalCheckArgs, scale: Scale) -> Result<Report, CliError> {
    if a.forward {
        return forward(a, scale);
    }
    let sweep = resolve_sweep(scale, &a.sweep, &[("--kr-sweep", "kr", &a.kr_sweep)], &["xi", "kr"])?;
    if a.sign == Sign::Repel && !a.experimental_repel {
        return Err(UsageError::new("--sign", "the repulsive flux balance needs --experimental-repel").into());
    }
    let xi = fixed("--xi", a.xi, &sweep, "xi")?;
    check_all("--xi", xi, "xi", &sweep, |v| v > 0.0 && v <= 5.0, "must lie in (0, 5]")?;
    let kr = fixed("--kr", a.kr, &sweep, "kr")?;
    check_all("--kr", kr, "kr", &sweep, |v| v >= 100.0 && v.is_finite(), "must be at least 100")?;
    let var = sweep.as_ref().map(|(_, s)| s.variable.as_str());
    let values = points(&sweep);
    let mut table = Table::new(&[
        "xi",
        "kr",
        "j1_num",
        "j1_asym",
        "j2_num",
        "j2_asym",
        "j3_num",
        "j3_asym",
        "residual",
        "asymptotic_residual",
        "oscillating",
    ]);
    table.rows = rows(&values, |v| {
        let (x, k) = match var {
            Some("xi") => (v, kr),
            Some("kr") => (xi, v),
            _ => (xi, kr),
        };
        let b = flux_balance_signed(x, a.sign, k)?;
        Ok([
            b.xi,
            b.kr,
            b.j1_num,
            b.j1_asym,
            b.j2_num,
            b.j2_asym,
            b.j3_num,
            b.j3_asym,
            b.residual,
            b.asymptotic_residual,
            b.oscillating,
        ]
        .into_iter()
        .map(Cell::Num)
        .collect())
    })?;
    let mut p = Map::new();
    opt_insert(&mut p, "xi", a.xi);
    p.insert("sign".into(), json!(a.sign));
    opt_insert(&mut p, "kr", a.kr);
    p.insert("experimental_repel".into(), json!(a.experimental_repel));
    sweep_param(&mut p, &sweep);
    let mut t = Map::new();
    t.insert("quad_rel_tol".into(), json!(1e-13));
    let notes = if a.sign == Sign::Repel { vec!["repulsive flux balance is experimental".to_string()] } else { vec![] };
    Ok(Report { command: "optical-check", table, parameters: p, tolerances: t, notes })
}

fn forward(a: &OpticalCheckArgs, scale: Scale) -> Result<Report, CliError> {
    let sweep = resolve_sweep(scale, &a.sweep, &[], &["xi"])?;
    if a.kr.is_some() || a.kr_sweep.is_some() {
        return Err(UsageError::new("--kr", "not used with --forward").into());
    }
    let xi = fixed("--xi", a.xi, &sweep, "xi")?;
    check_all("--xi", xi, "xi", &sweep, |v| v > 0.0 && v <= 5.0, "must lie in (0, 5]")?;
    if !(a.rel_tol > 0.0 && a.rel_tol < 1.0) {
        return Err(UsageError::new("--rel-tol", format!("must lie in (0, 1), got {}", a.rel_tol)).into());
    }
    let method = match a.method {
        AmplitudeMethod::Contour => "contour",
        AmplitudeMethod::Acceleration => "acceleration",
        AmplitudeMethod::Abel => "abel",
    };
    oscillatory_registry().get(method)?;
    let cfg = QuadratureConfig::with_tol(a.rel_tol, 1e-14);
    let values = points(&sweep);
    let mut table = Table::new(&["xi", "a_re", "a_im", "a_abs", "abs_error", "method"]);
    table.rows = rows(&values, |v| {
        let x = if sweep.is_some() { v } else { xi };
        let r = forward_amplitude_with(x, a.sign, method, &cfg)?;
        Ok(vec![
            Cell::Num(x),
            Cell::Num(r.value.re),
            Cell::Num(r.value.im),
            Cell::Num(r.value.norm()),
            Cell::Num(r.abs_error),
            method.into(),
        ])
    })?;
    let mut p = Map::new();
    opt_insert(&mut p, "xi", a.xi);
    p.insert("sign".into(), json!(a.sign));
    p.insert("forward".into(), json!(true));
    p.insert("method".into(), json!(method));
    sweep_param(&mut p, &sweep);
    let mut t = Map::new();
    t.insert("rel_tol".into(), json!(a.rel_tol));
    t.insert("abs_tol".into(), json!(1e-14));
    Ok(Report { command: "optical-check", table, parameters: p, tolerances: t, notes: vec![] })
}

fn mobility_cmd(a: &MobilityArgs, scale: Scale) -> Result<Report, CliError> {
    let sweep = resolve_sweep(scale, &a.sweep, &[], &SAMPLE_KEYS[..5])?;
    let (mut base, file_keys) = match &a.config {
        Some(path) => load_sample(path)?,
        None => (default_sample(), vec![]),
    };
    let overrides: [(&str, &str, Option<f64>); 7] = [
        ("--T", "T", a.t),
        ("--n", "n", a.n),
        ("--K", "K", a.k),
        ("--eps", "eps", a.eps),
        ("--m-eff-ratio", "m_eff_ratio", a.m_eff_ratio),
        ("--Z1", "Z1", a.z1.map(f64::from)),
        ("--Z2", "Z2", a.z2.map(f64::from)),
    ];
    let mut p = Map::new();
    if let Some(path) = &a.config {
        p.insert("config".into(), json!(path.display().to_string()));
    }
    for (flag, key, v) in overrides {
        if let Some(v) = v {
            if swept(&sweep, key).is_some() {
                return Err(UsageError::new(flag, format!("conflicts with --sweep over {key}")).into());
            }
            set_field(&mut base, key, v, flag)?;
            p.insert(key.into(), json!(v));
        }
    }
    if a.table_nodes < 8 {
        return Err(UsageError::new("--table-nodes", format!("must be at least 8, got {}", a.table_nodes)).into());
    }
    if !(a.rel_tol > 0.0 && a.rel_tol < 1.0) {
        return Err(UsageError::new("--rel-tol", format!("must lie in (0, 1), got {}", a.rel_tol)).into());
    }
    let var = sweep.as_ref().map(|(_, s)| s.variable.clone());
    let values = points(&sweep);
    let samples: Vec<SemiconductorSample> = values
        .iter()
        .map(|&v| {
            let mut s = base;
            if let Some((flag, spec)) = &sweep {
                set_field(&mut s, &spec.variable, v, flag)?;
            }
            Ok(s)
        })
        .collect::<Result<_, UsageError>>()?;
    for s in &samples {
        s.validate()?;
    }
    let opts = MobilityOptions {
        evaluation: match a.evaluation {
            EvaluationArg::Table => Evaluation::Table,
            EvaluationArg::Direct => Evaluation::Direct,
        },
        swap_signs: a.swap_signs,
        table_nodes: a.table_nodes,
        rel_tol: a.rel_tol,
    };
    let method = match a.model {
        ModelArg::Integral => MobilityMethod::Integral,
        ModelArg::Analytic => MobilityMethod::Analytic,
    };
    let abscissa = var.clone().unwrap_or_else(|| "n".into());
    let mut table = Table::new(&[
        abscissa.as_str(),
        "mu_nonasym",
        "mu_cw",
        "sigma_tr1_prime",
        "sigma_tr2_prime",
        "kinematic_ratio",
        "kinematic_ok",
    ]);
    let idx: Vec<f64> = (0..samples.len()).map(|i| i as f64).collect();
    let invalid = std::sync::atomic::AtomicBool::new(false);
    table.rows = rows(&idx, |i| {
        let s = &samples[i as usize];
        let m = mobility(s, method, &opts)?;
        if !m.validity.kinematic_ok {
            invalid.store(true, std::sync::atomic::Ordering::Relaxed);
        }
        let x = match abscissa.as_str() {
            "T" => s.t,
            "K" => s.k,
            "eps" => s.eps,
            "m_eff_ratio" => s.m_eff_ratio,
            _ => s.n,
        };
        Ok(vec![
            Cell::Num(x),
            Cell::Num(m.mu_nonasym),
            m.mu_cw.into(),
            Cell::Num(m.sigma_tr1_prime),
            m.sigma_tr2_prime.into(),
            Cell::Num(m.validity.kinematic_ratio),
            Cell::Bool(m.validity.kinematic_ok),
        ])
    })?;
    let mut sample_json = serde_json::to_value(base).map_err(|e| CliError::Io(e.to_string()))?;
    if let (Some(obj), Some(v)) = (sample_json.as_object_mut(), &var) {
        obj.remove(v.as_str());
    }
    p.insert("sample".into(), sample_json);
    p.insert("from_config".into(), json!(file_keys));
    p.insert("model".into(), json!(method.name()));
    p.insert("evaluation".into(), json!(opts.evaluation));
    p.insert("swap_signs".into(), json!(a.swap_signs));
    sweep_param(&mut p, &sweep);
    let mut t = Map::new();
    t.insert("rel_tol".into(), json!(opts.rel_tol));
    t.insert("table_nodes".into(), json!(opts.table_nodes));
    t.insert("x_min".into(), json!(X_MIN));
    t.insert("x_max".into(), json!(X_MAX));
    let mut notes = Vec::new();
    if invalid.into_inner() {
        notes.push("kinematic validity ratio is below 1 for some rows (see kinematic_ok)".to_string());
    }
    Ok(Report { command: "mobility", table, parameters: p, tolerances: t, notes })
}

fn parse_complex(flag: &str, text: &Option<String>) -> Result<Option<Complex64>, UsageError> {
    let Some(text) = text else { return Ok(None) };
    let bad = || UsageError::new(flag, format!("expected re or re,im, got '{text}'"));
    let mut parts = text.split(',').map(|s| s.trim().parse::<f64>());
    let re = parts.next().ok_or_else(bad)?.map_err(|_| bad())?;
    let im = match parts.next() {
        Some(v) => v.map_err(|_| bad())?,
        None => 0.0,
    };
    if parts.next().is_some() {
        return Err(bad());
    }
    Ok(Some(Complex64::new(re, im)))
}

fn specfun_eval(a: &SpecfunArgs, scale: Scale) -> Result<Report, CliError> {
    let sweep = resolve_sweep(scale, &a.sweep, &[], &["z"])?;
    let z0 = parse_complex("--z", &a.z)?;
    if z0.is_none() && sweep.is_none() {
        return Err(UsageError::new("--z", "is required").into());
    }
    let zim = z0.map_or(0.0, |z| z.im);
    let av = parse_complex("--a", &a.a)?;
    let bv = parse_complex("--b", &a.b)?;
    let need =
        |flag: &str, v: Option<Complex64>| v.ok_or_else(|| UsageError::new(flag, "is required for this function"));
    use SpecFunction as F;
    let coulomb = matches!(a.function, F::UShifted | F::U1U2 | F::G1 | F::G2);
    let xi = if coulomb {
        let xi = a.xi.ok_or_else(|| UsageError::new("--xi", "is required for this function"))?;
        if !positive(xi) {
            return Err(UsageError::new("--xi", format!("must be positive, got {xi}")).into());
        }
        if zim != 0.0 {
            return Err(UsageError::new("--z", "must be real for this function").into());
        }
        xi
    } else {
        f64::NAN
    };
    let strategy = tricomi_registry(RegimeConfig::default()).get(&a.regime).map_err(|_| {
        UsageError::new(
            "--regime",
            format!("unknown regime '{}' (expected auto, series, integral or asymptotic)", a.regime),
        )
    })?;
    let (pa, pb) = match a.function {
        F::KummerM => (Some(need("--a", av)?), Some(need("--b", bv)?)),
        F::TricomiU => (Some(need("--a", av)?), None),
        _ => (None, None),
    };
    let cols: &[&str] = if a.function == F::U1U2 {
        &["z_re", "z_im", "u1_re", "u1_im", "u2_re", "u2_im"]
    } else {
        &["z_re", "z_im", "re", "im"]
    };
    let values = points(&sweep);
    let mut table = Table::new(cols);
    table.rows = rows(&values, |v| {
        let z = if sweep.is_some() { Complex64::new(v, zim) } else { z0.unwrap() };
        let vals: Vec<Complex64> = match a.function {
            F::Gamma => vec![specfun::complex_gamma(z)?],
            F::Digamma => vec![specfun::complex_digamma(z)?],
            F::KummerM => vec![specfun::kummer_m(pa.unwrap(), pb.unwrap(), z)?],
            F::TricomiU => vec![strategy.eval(pa.unwrap(), z)?],
            F::UShifted => vec![specfun::u_shifted_with(strategy.as_ref(), xi, a.sign, z.re)?],
            F::U1U2 => {
                let (u1, u2) = specfun::u1_u2_with(strategy.as_ref(), xi, a.sign, z.re)?;
                vec![u1, u2]
            }
            F::G1 => vec![specfun::g1(xi, a.sign, z.re)?],
            F::G2 => vec![specfun::g2(xi, a.sign, z.re)?],
        };
        let mut row = vec![Cell::Num(z.re), Cell::Num(z.im)];
        for c in vals {
            row.push(Cell::Num(c.re));
            row.push(Cell::Num(c.im));
        }
        Ok(row)
    })?;
    let mut p = Map::new();
    p.insert("function".into(), json!(format!("{:?}", a.function)));
    for (k, v) in [("z", &a.z), ("a", &a.a), ("b", &a.b)] {
        if let Some(v) = v {
            p.insert(k.into(), json!(v));
        }
    }
    opt_insert(&mut p, "xi", a.xi);
    p.insert("sign".into(), json!(a.sign));
    p.insert("regime".into(), json!(a.regime));
    sweep_param(&mut p, &sweep);
    Ok(Report { command: "specfun-eval", table, parameters: p, tolerances: Map::new(), notes: vec![] })
}
