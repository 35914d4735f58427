//! One function per subcommand, each turning a resolved scenario into a report.

use btchar_building::{enumerate_ball, val_q, BallOptions, BuildingPatch, QpMatrix, Simplex};
use btchar_charformula::{
    apartment_isotypic_check, build_coefficient_system, chain_complex, char_fixed_sum, char_orbital, char_simple,
    char_supercuspidal_oracle, ep_function, orbital_integral_stabilization, CharError, CharacterValue, CoefficientSystem,
    DiscreteSeriesSpec, Route,
};
use btchar_elliptic::{analyze_elliptic, divisibility_gate, fixed_point_set, EllipticReport};
use btchar_finite_gl::{load_or_compute, Cyclo};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use crate::error::{CliError, Result};
use crate::report::{to_value, CycloJson, Report, Table};
use crate::scenario::Resolved;

fn patch(r: &Resolved, base: &[usize], radius: usize) -> Result<BuildingPatch> {
    let opts = BallOptions { budget: r.run.ball_budget.unwrap_or(BallOptions::default().budget), ..BallOptions::default() };
    let s = Simplex::standard(r.p, r.precision, base)?;
    Ok(enumerate_ball(&s, radius, opts)?)
}

fn base_or(r: &Resolved, default: Vec<usize>) -> Result<Vec<usize>> {
    let base = r.run.base.clone().unwrap_or(default);
    if base.iter().sum::<usize>() != r.n()? || base.contains(&0) {
        return Err(CliError::Schema(format!("base composition {base:?} does not partition N = {}", r.n()?)));
    }
    Ok(base)
}

fn join<T: ToString>(xs: &[T], sep: &str) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(sep)
}

fn opt<T: ToString>(x: Option<T>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

pub fn building_ball(r: &Resolved) -> Result<Report> {
    let n = r.n()?;
    let radius = r.radius()?;
    let base = base_or(r, vec![n])?;
    let patch = patch(r, &base, radius)?;
    let export = patch.export();
    let mut table = Table::new(&["dim", "count"]);
    for (d, c) in export.counts.iter().enumerate() {
        table.push(vec![d.to_string(), c.to_string()]);
    }
    let mut rep = Report::new(&r.command, &r.name, table);
    rep.param("p", r.p)?;
    rep.param("n", n)?;
    rep.param("radius", radius)?;
    rep.param("base", &base)?;
    rep.param("precision", r.precision)?;
    rep.results.push(to_value(&export)?);
    Ok(rep)
}

#[derive(Serialize)]
struct FixedSummary {
    radius: usize,
    reach: usize,
    complete: bool,
    cells: Vec<Vec<String>>,
    fixed_dims: Vec<usize>,
}

pub fn elliptic_analyze(r: &Resolved) -> Result<Report> {
    let mut table = Table::new(&[
        "gamma",
        "elliptic_regular",
        "e",
        "f",
        "v",
        "minimal",
        "order_composition",
        "gate",
        "fixed_cells",
        "complete",
    ]);
    let patch = match r.radius {
        Some(radius) => Some(patch(r, &base_or(r, vec![r.n()?])?, radius)?),
        None => None,
    };
    let mut rep = Report::new(&r.command, &r.name, Table::default());
    rep.param("p", r.p)?;
    rep.param("precision", r.precision)?;
    rep.param("radius", r.radius)?;
    if let Some(s) = &r.spec {
        rep.param("spec", s)?;
    }
    for (label, g) in &r.gammas {
        let report = analyze_elliptic(g, r.p, r.precision)?;
        let gate = match (&r.spec, report.minimal_over_f) {
            (Some(s), Some(true)) => Some(divisibility_gate(s.gate_data(), &report)?),
            _ => None,
        };
        let fixed = match (&patch, report.elliptic_regular) {
            (Some(pt), true) => {
                let f = fixed_point_set(g, pt)?;
                Some(FixedSummary {
                    radius: f.radius,
                    reach: f.reach,
                    complete: f.complete,
                    cells: f.cells.iter().map(|c| c.vertices.iter().map(|&v| pt.key(v).label()).collect()).collect(),
                    fixed_dims: f.cells.iter().map(|c| c.fixed_dim).collect(),
                })
            }
            _ => None,
        };
        let export = report.export();
        table.push(vec![
            label.clone(),
            export.elliptic_regular.to_string(),
            opt(export.e_gamma),
            opt(export.f_gamma),
            opt(export.v_gamma),
            opt(export.minimal_over_f),
            export.order_a_gamma.as_ref().map(|o| join(&o.composition, " ")).unwrap_or_default(),
            opt(gate),
            opt(fixed.as_ref().map(|f| f.cells.len())),
            opt(fixed.as_ref().map(|f| f.complete)),
        ]);
        let mut v = serde_json::Map::new();
        v.insert("gamma".into(), Value::from(label.clone()));
        v.insert("analysis".into(), to_value(&export)?);
        v.insert("gate".into(), to_value(&gate)?);
        v.insert("fixed_set".into(), to_value(&fixed)?);
        rep.results.push(Value::Object(v));
    }
    rep.table = table;
    Ok(rep)
}

#[derive(Serialize)]
struct CharacterRow {
    label: String,
    degree: u64,
    cuspidal: bool,
    generic: bool,
    values: Vec<CycloJson>,
}

#[derive(Serialize)]
struct ClassRow {
    representative: Vec<u8>,
    size: u64,
    element_order: u32,
}

#[derive(Serialize)]
struct TableChecks {
    row_orthogonal: bool,
    column_orthogonal: bool,
    degree_square_sum: bool,
    cuspidal_count: usize,
}

pub fn fgl_table(r: &Resolved) -> Result<Report> {
    let n = r.n()?;
    let q = r.run.q.unwrap_or(r.p);
    let data = load_or_compute(n, q, r.tables.budget, r.tables.cache_dir.as_deref())?;
    let t = &data.table;
    let row_orthogonal = t
        .characters
        .iter()
        .enumerate()
        .all(|(i, a)| t.characters.iter().enumerate().all(|(j, b)| t.inner(&a.values, &b.values) == Some((i == j) as i64)));
    let column_orthogonal = t.classes.iter().enumerate().all(|(k, c)| {
        let s = t.characters.iter().fold(Cyclo::zero(t.modulus), |acc, x| acc.add(&x.values[k].mul(&x.values[k].conj())));
        s.as_integer() == Some((t.order / c.size) as i64)
    });
    let checks = TableChecks {
        row_orthogonal,
        column_orthogonal,
        degree_square_sum: t.characters.iter().map(|c| c.degree * c.degree).sum::<u64>() == t.order,
        cuspidal_count: t.cuspidals().len(),
    };
    let mut table = Table::new(&["label", "degree", "cuspidal", "generic", "values"]);
    for c in &t.characters {
        let vals: Vec<String> = c.values.iter().map(|v| v.render()).collect();
        table.push(vec![c.label.clone(), c.degree.to_string(), c.cuspidal.to_string(), c.generic.to_string(), vals.join(";")]);
    }
    let mut rep = Report::new(&r.command, &r.name, table);
    rep.param("n", n)?;
    rep.param("q", q)?;
    rep.param("order", t.order)?;
    rep.param("modulus", t.modulus)?;
    let classes: Vec<ClassRow> =
        t.classes.iter().map(|c| ClassRow { representative: c.rep.clone(), size: c.size, element_order: c.elem_order }).collect();
    let characters: Vec<CharacterRow> = t
        .characters
        .iter()
        .map(|c| CharacterRow {
            label: c.label.clone(),
            degree: c.degree,
            cuspidal: c.cuspidal,
            generic: c.generic,
            values: c.values.iter().map(CycloJson::from).collect(),
        })
        .collect();
    let mut v = serde_json::Map::new();
    v.insert("classes".into(), to_value(&classes)?);
    v.insert("characters".into(), to_value(&characters)?);
    v.insert("checks".into(), to_value(&checks)?);
    rep.results.push(Value::Object(v));
    Ok(rep)
}

fn spec_params(rep: &mut Report, r: &Resolved, spec: &DiscreteSeriesSpec) -> Result<()> {
    rep.param("spec", spec)?;
    rep.param("precision", r.precision)?;
    Ok(())
}

pub fn coeffsys_build(r: &Resolved) -> Result<Report> {
    let spec = r.spec()?;
    let radius = r.radius()?;
    let base = base_or(r, vec![spec.n])?;
    let patch = patch(r, &base, radius)?;
    let cs = build_coefficient_system(spec, &patch, &r.tables)?;
    let ep = ep_function(&cs)?;
    let complex = if radius >= 1 { Some(chain_complex(&cs, &patch, radius - 1)?) } else { None };
    let mut table = Table::new(&["composition", "simplex_dim", "rotations", "quotient_order", "labels", "dim", "count"]);
    for o in &cs.orbits {
        let d = &o.datum;
        table.push(vec![
            join(&d.composition, " "),
            d.simplex_dim.to_string(),
            d.rotations.to_string(),
            d.quotient_order.to_string(),
            d.labels.join(" "),
            d.dim.to_string(),
            o.count.to_string(),
        ]);
    }
    let mut rep = Report::new(&r.command, &r.name, table);
    spec_params(&mut rep, r, spec)?;
    rep.param("radius", radius)?;
    rep.param("base", &base)?;
    rep.param("modulus", cs.modulus)?;
    let mut v = serde_json::Map::new();
    v.insert("support".into(), to_value(&cs.support_types())?);
    v.insert("orbits".into(), to_value(&cs.orbits)?);
    v.insert("ep_terms".into(), to_value(&ep.terms)?);
    v.insert("chain_complex".into(), to_value(&complex)?);
    rep.results.push(Value::Object(v));
    Ok(rep)
}

fn default_radii(radius: usize) -> Result<Vec<usize>> {
    if radius < 3 {
        return Err(CliError::Schema("orbital sums need a radius of at least 3 unless run.radii is given".into()));
    }
    Ok(vec![radius - 2, radius - 1])
}

pub fn ep_check(r: &Resolved) -> Result<Report> {
    let spec = r.spec()?;
    let radius = r.radius()?;
    let default_base = if spec.n == 2 && spec.e == 2 { vec![1, 1] } else { vec![spec.n] };
    let base = base_or(r, default_base)?;
    let patch = patch(r, &base, radius)?;
    let cs = CoefficientSystem::resolve(spec, &r.tables)?;
    let ep = ep_function(&cs)?;
    let complex = if radius >= 1 { Some(chain_complex(&cs, &patch, radius - 1)?) } else { None };
    let apartment = if spec.n == 2 && radius >= 2 { Some(apartment_isotypic_check(&cs, &patch, radius - 1)?) } else { None };
    let radii = match &r.run.radii {
        Some(x) => x.clone(),
        None if r.gammas.is_empty() => Vec::new(),
        None => default_radii(radius)?,
    };
    let mut table = Table::new(&["gamma", "radius", "partial_sum"]);
    let mut rep = Report::new(&r.command, &r.name, Table::default());
    spec_params(&mut rep, r, spec)?;
    rep.param("radius", radius)?;
    rep.param("radii", &radii)?;
    rep.param("base", &base)?;
    let mut orbital = Vec::new();
    for (label, g) in &r.gammas {
        let st = orbital_integral_stabilization(&cs, &ep, g, &patch, &radii)?;
        for (rad, v) in st.radii.iter().zip(&st.profile) {
            table.push(vec![label.clone(), rad.to_string(), v.render()]);
        }
        let mut m = serde_json::Map::new();
        m.insert("gamma".into(), Value::from(label.clone()));
        m.insert("profile".into(), to_value(&st.profile.iter().map(|x| x.render()).collect::<Vec<_>>())?);
        m.insert("reach".into(), to_value(&st.reach)?);
        m.insert("stabilized_from".into(), to_value(&st.stabilized_from)?);
        m.insert("value".into(), to_value(&st.value.as_ref().map(CycloJson::from))?);
        m.insert("certified".into(), Value::from(st.certified));
        orbital.push(Value::Object(m));
    }
    let mut v = serde_json::Map::new();
    v.insert("ep_terms".into(), to_value(&ep.terms)?);
    v.insert("chain_complex".into(), to_value(&complex)?);
    v.insert("apartment".into(), to_value(&apartment)?);
    v.insert("orbital".into(), Value::Array(orbital));
    rep.results.push(Value::Object(v));
    rep.table = table;
    Ok(rep)
}

/// Outcome of one route on one element.
#[derive(Serialize)]
struct RouteOutcome {
    route: Route,
    status: &'static str,
    value: Option<CycloJson>,
    radius: Option<usize>,
    certified: Option<bool>,
    gate: Option<bool>,
    terms: Option<usize>,
    reason: Option<String>,
}

impl RouteOutcome {
    fn from_value(v: &CharacterValue) -> RouteOutcome {
        RouteOutcome {
            route: v.route,
            status: "ok",
            value: Some(CycloJson::from(&v.value)),
            radius: v.radius,
            certified: Some(v.certified),
            gate: v.gate,
            terms: Some(v.terms),
            reason: None,
        }
    }

    fn skipped(route: Route, reason: String) -> RouteOutcome {
        RouteOutcome {
            route,
            status: "not_applicable",
            value: None,
            radius: None,
            certified: None,
            gate: None,
            terms: None,
            reason: Some(reason),
        }
    }
}

/// Errors that make a route inapplicable to an element rather than failing the run.
fn inapplicable(e: &CharError) -> bool {
    matches!(
        e,
        CharError::MinimalityRequired
            | CharError::ExtendedActionNeeded
            | CharError::UnsupportedLevel(_)
            | CharError::UnsupportedShape(_)
    )
}

fn run_route(
    route: Route,
    f: impl FnOnce() -> std::result::Result<CharacterValue, CharError>,
) -> Result<(RouteOutcome, Option<Cyclo>)> {
    match f() {
        Ok(v) => Ok((RouteOutcome::from_value(&v), Some(v.value))),
        Err(e) if inapplicable(&e) => Ok((RouteOutcome::skipped(route, e.to_string()), None)),
        Err(e) => Err(e.into()),
    }
}

struct Evaluated {
    label: String,
    analysis: EllipticReport,
    outcomes: Vec<RouteOutcome>,
    value: Option<Cyclo>,
    det_valuation: i64,
    twist_factor: Cyclo,
}

fn evaluate(
    cs: &CoefficientSystem,
    patch: &BuildingPatch,
    radii: &[usize],
    routes: &[Route],
    label: &str,
    g: &QpMatrix,
    precision: u32,
) -> Result<Evaluated> {
    let analysis = analyze_elliptic(g, cs.p(), precision)?;
    if !analysis.elliptic_regular {
        return Err(CliError::Compute(format!("{label} is not elliptic regular")));
    }
    let mut outcomes = Vec::new();
    let mut values: Vec<(Route, Cyclo)> = Vec::new();
    for &route in routes {
        let (o, v) = match route {
            Route::Simple => {
                if analysis.minimal_over_f == Some(false) {
                    (RouteOutcome::skipped(route, CharError::MinimalityRequired.to_string()), None)
                } else {
                    run_route(route, || char_simple(cs, &analysis))?
                }
            }
            Route::FixedSum => run_route(route, || char_fixed_sum(cs, g, patch))?,
            Route::Orbital => run_route(route, || char_orbital(cs, g, patch, radii).map(|x| x.0))?,
            Route::FrobeniusOracle => {
                if cs.spec.e != 1 {
                    (RouteOutcome::skipped(route, "the Frobenius oracle needs e = 1".into()), None)
                } else {
                    run_route(route, || char_supercuspidal_oracle(cs, g, patch))?
                }
            }
        };
        outcomes.push(o);
        if let Some(v) = v {
            values.push((route, v));
        }
    }
    if let Some((r0, v0)) = values.first() {
        if let Some((r1, v1)) = values.iter().find(|(_, v)| v != v0) {
            return Err(CliError::Disagreement(format!(
                "{label}: {} gives {} but {} gives {}",
                r0.name(),
                v0.render(),
                r1.name(),
                v1.render()
            )));
        }
    }
    let det_valuation = val_q(cs.p(), &g.det()).ok_or_else(|| CliError::Compute("singular element".into()))?;
    Ok(Evaluated {
        label: label.to_string(),
        analysis,
        outcomes,
        value: values.first().map(|(_, v)| v.clone()),
        det_valuation,
        twist_factor: cs.twist_power(det_valuation),
    })
}

pub fn char_eval(r: &Resolved) -> Result<Report> {
    let spec = r.spec()?;
    let radius = r.radius()?;
    let base = base_or(r, vec![spec.n])?;
    let patch = patch(r, &base, radius)?;
    let cs = CoefficientSystem::resolve(spec, &r.tables)?;
    let radii = match &r.run.radii {
        Some(x) => x.clone(),
        None => default_radii(radius)?,
    };
    let routes =
        r.run.routes.clone().unwrap_or_else(|| vec![Route::Simple, Route::FixedSum, Route::Orbital, Route::FrobeniusOracle]);
    let evaluated: Vec<Result<Evaluated>> =
        r.gammas.par_iter().map(|(label, g)| evaluate(&cs, &patch, &radii, &routes, label, g, r.precision)).collect();
    let evaluated: Vec<Evaluated> = evaluated.into_iter().collect::<Result<_>>()?;
    let mut table = Table::new(&[
        "gamma",
        "route",
        "status",
        "value",
        "coefficients",
        "modulus",
        "radius",
        "certified",
        "gate",
        "terms",
        "extension",
        "twist_factor",
    ]);
    let mut rep = Report::new(&r.command, &r.name, Table::default());
    spec_params(&mut rep, r, spec)?;
    rep.param("radius", radius)?;
    rep.param("radii", &radii)?;
    rep.param("base", &base)?;
    rep.param("modulus", cs.modulus)?;
    rep.param("routes", &routes)?;
    for ev in &evaluated {
        for o in &ev.outcomes {
            table.push(vec![
                ev.label.clone(),
                o.route.name().to_string(),
                o.status.to_string(),
                o.value.as_ref().map(|v| v.decimal.clone()).unwrap_or_default(),
                o.value.as_ref().map(|v| join(&v.coefficients, " ")).unwrap_or_default(),
                o.value.as_ref().map(|v| v.modulus.to_string()).unwrap_or_default(),
                opt(o.radius),
                opt(o.certified),
                opt(o.gate),
                opt(o.terms),
                spec.extension.name().to_string(),
                ev.twist_factor.render(),
            ]);
        }
        let a = ev.analysis.export();
        let mut m = serde_json::Map::new();
        m.insert("gamma".into(), Value::from(ev.label.clone()));
        m.insert("e_gamma".into(), to_value(&a.e_gamma)?);
        m.insert("f_gamma".into(), to_value(&a.f_gamma)?);
        m.insert("minimal".into(), to_value(&a.minimal_over_f)?);
        m.insert("order_composition".into(), to_value(&a.order_a_gamma.as_ref().map(|o| o.composition.clone()))?);
        m.insert("routes".into(), to_value(&ev.outcomes)?);
        m.insert("agreed".into(), to_value(&ev.value.as_ref().map(CycloJson::from))?);
        m.insert("extension".into(), Value::from(spec.extension.name()));
        m.insert("det_valuation".into(), Value::from(ev.det_valuation));
        m.insert("twist_factor".into(), to_value(&CycloJson::from(&ev.twist_factor))?);
        rep.results.push(Value::Object(m));
    }
    rep.table = table;
    Ok(rep)
}
