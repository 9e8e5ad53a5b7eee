use std::cmp::Ordering;
use std::io::Write;

use clifford_iso::geometry::{
    self, classify_inversion_center, cyclide_measurements, fold_to_canonical, inversion_branch, lambda1, lambda2,
    maxwell_data, p1_to_p2, InversionBranch, MeasurementRecord,
};
use clifford_iso::quadrature::{iso_curve, iso_sample, rounding_scan, Grid, QuadratureError, Surface};
use clifford_iso::recurrence::{
    asymptotic_fit, char_roots, format_rational, guess as guess_rec, positivity_scan, AsymptoticModel, Positivity,
    RecurrenceError,
};
use clifford_iso::series::{SeriesError, SeriesKind, SeriesTable};
use serde_json::{json, Value};

use crate::output::{csv_rows, real, sink, text_table, Format};
use crate::{Failure, RunConfig, Verdict};

type Outcome = Result<Verdict, Failure>;

fn from_recurrence(e: RecurrenceError) -> Failure {
    use RecurrenceError::*;
    match e {
        Violation { .. }
        | NoRecurrence { .. }
        | SingularExtension { .. }
        | NonRealRoot { .. }
        | UnresolvedCluster(..)
        | NoConvergence
        | NonPositiveTerm { .. }
        | Degenerate => Failure::Check(e.to_string()),
        other => Failure::Usage(other.to_string()),
    }
}

fn from_series(e: SeriesError) -> Failure {
    match e {
        SeriesError::CrossCheck { .. } => Failure::Check(e.to_string()),
        SeriesError::Recurrence(r) => from_recurrence(r),
        other => Failure::Usage(other.to_string()),
    }
}

fn from_quadrature(e: QuadratureError) -> Failure {
    match e {
        QuadratureError::Series(s) => from_series(s),
        other => Failure::Usage(other.to_string()),
    }
}

fn from_geometry(e: geometry::GeometryError) -> Failure {
    Failure::Usage(e.to_string())
}

fn table(kind: SeriesKind, count: usize, crossover: usize) -> Result<SeriesTable, Failure> {
    SeriesTable::build(kind, count, crossover).map_err(from_series)
}

fn emit_json(cfg: &RunConfig, v: &Value) -> Result<(), Failure> {
    let mut w = sink(cfg.out.as_deref())?;
    writeln!(w, "{}", serde_json::to_string_pretty(v).map_err(|e| Failure::Usage(e.to_string()))?)?;
    w.flush()?;
    Ok(())
}

fn emit_table(cfg: &RunConfig, header: &[&str], rows: &[Vec<String>]) -> Result<(), Failure> {
    let mut w = sink(cfg.out.as_deref())?;
    match cfg.format {
        Format::Csv => csv_rows(&mut w, header, rows)?,
        _ => text_table(&mut w, header, rows)?,
    }
    w.flush()?;
    Ok(())
}

fn emit_lines(cfg: &RunConfig, lines: &[String]) -> Result<(), Failure> {
    let mut w = sink(cfg.out.as_deref())?;
    for l in lines {
        writeln!(w, "{l}")?;
    }
    w.flush()?;
    Ok(())
}

pub fn coeffs(cfg: &RunConfig, kind: SeriesKind, count: usize, crossover: usize) -> Outcome {
    let t = table(kind, count, crossover)?;
    let mut w = sink(cfg.out.as_deref())?;
    match cfg.format {
        Format::Text => {
            for (j, c) in t.terms().iter().enumerate() {
                writeln!(w, "{j} {}", format_rational(c))?;
            }
        }
        Format::Json => writeln!(w, "{}", t.to_json().map_err(from_series)?)?,
        Format::Csv => t.write_csv(&mut w).map_err(from_series)?,
    }
    w.flush()?;
    if !t.leading_term_ok() {
        return Ok(Verdict::Fail(format!("{kind} starts with {}", format_rational(&t.terms()[0]))));
    }
    Ok(Verdict::Pass)
}

pub fn guess(
    cfg: &RunConfig,
    kind: SeriesKind,
    order: usize,
    degree: usize,
    equations: Option<usize>,
    crossover: usize,
) -> Outcome {
    let equations = equations.unwrap_or(2 * (order + 1) * (degree + 1));
    // Terms come from direct summation whenever the crossover allows it.
    let t = table(kind, equations + order, crossover.max(equations + order))?;
    let result = match guess_rec(t.terms(), order, degree, equations) {
        Ok(r) => r,
        Err(RecurrenceError::NoRecurrence { .. }) => {
            let msg = format!("no recurrence of order {order} and degree {degree} fits {equations} equations");
            match cfg.format {
                Format::Json => emit_json(
                    cfg,
                    &json!({"kind": kind, "order": order, "degree": degree, "equations": equations,
                            "unique": false, "candidates": []}),
                )?,
                _ => emit_lines(cfg, std::slice::from_ref(&msg))?,
            }
            return Ok(Verdict::Fail(msg));
        }
        Err(e) => return Err(from_recurrence(e)),
    };
    let known = kind.recurrence();
    let matches_known = result.unique && result.basis[0].equivalent(&known);
    match cfg.format {
        Format::Json => {
            let candidates: Vec<Value> = result
                .basis
                .iter()
                .map(|r| {
                    serde_json::from_str(&r.to_json().map_err(from_recurrence)?)
                        .map_err(|e| Failure::Usage(e.to_string()))
                })
                .collect::<Result<_, _>>()?;
            emit_json(
                cfg,
                &json!({"kind": kind, "order": order, "degree": degree, "equations": result.equations_used,
                        "unique": result.unique, "matches_known": matches_known, "candidates": candidates}),
            )?;
        }
        Format::Csv => {
            let mut rows = Vec::new();
            for (c, rec) in result.basis.iter().enumerate() {
                for (i, row) in rec.coeffs().iter().enumerate() {
                    let mut r = vec![c.to_string(), i.to_string()];
                    r.extend(row.iter().map(format_rational));
                    rows.push(r);
                }
            }
            let mut header = vec!["candidate".to_string(), "shift".to_string()];
            header.extend((0..=degree).map(|k| format!("n^{k}")));
            let header: Vec<&str> = header.iter().map(String::as_str).collect();
            emit_table(cfg, &header, &rows)?;
        }
        Format::Text => {
            let mut lines = vec![
                format!("kind {kind} order {order} degree {degree} equations {}", result.equations_used),
                format!("candidates {}", result.basis.len()),
            ];
            for rec in &result.basis {
                lines.push(rec.to_string().trim_end().to_string());
            }
            lines.push(format!("unique {}", yes_no(result.unique)));
            lines.push(format!("matches known recurrence {}", yes_no(matches_known)));
            emit_lines(cfg, &lines)?;
        }
    }
    if result.unique {
        Ok(Verdict::Pass)
    } else {
        Ok(Verdict::Fail(format!("{} independent candidates", result.basis.len())))
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn report(cfg: &RunConfig, pairs: &[(&str, Value)]) -> Result<(), Failure> {
    match cfg.format {
        Format::Json => {
            let map: serde_json::Map<String, Value> = pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect();
            emit_json(cfg, &Value::Object(map))
        }
        _ => {
            let header: Vec<&str> = pairs.iter().map(|(k, _)| *k).collect();
            let row: Vec<String> = pairs
                .iter()
                .map(|(_, v)| match v {
                    Value::String(s) => s.clone(),
                    Value::Null => "none".to_string(),
                    other => other.to_string(),
                })
                .collect();
            if cfg.format == Format::Csv {
                emit_table(cfg, &header, &[row])
            } else {
                let lines: Vec<String> = header.iter().zip(&row).map(|(k, v)| format!("{k} {v}")).collect();
                emit_lines(cfg, &lines)
            }
        }
    }
}

pub fn verify(cfg: &RunConfig, kind: SeriesKind, n: usize, crossover: usize) -> Outcome {
    let rec = kind.recurrence();
    let t = table(kind, n + rec.order() + 1, crossover)?;
    let outcome = rec.check_satisfies(t.terms(), n);
    let (pass, violation) = match &outcome {
        Ok(()) => (true, Value::Null),
        Err(RecurrenceError::Violation { n, .. }) => (false, json!(n)),
        Err(_) => return Err(from_recurrence(outcome.unwrap_err())),
    };
    report(cfg, &[("kind", json!(kind)), ("n", json!(n)), ("pass", json!(pass)), ("first_violation", violation)])?;
    match outcome {
        Ok(()) => Ok(Verdict::Pass),
        Err(e) => Ok(Verdict::Fail(e.to_string())),
    }
}

pub fn positivity(cfg: &RunConfig, kind: SeriesKind, n: usize, crossover: usize) -> Outcome {
    let t = table(kind, n + 1, crossover)?;
    let scan = positivity_scan(t.terms());
    let (pass, first) = match scan {
        Positivity::AllPositive { .. } => (true, Value::Null),
        Positivity::FirstNonPositive { index } => (false, json!(index)),
    };
    report(
        cfg,
        &[
            ("kind", json!(kind)),
            ("checked", json!(t.len())),
            ("all_positive", json!(pass)),
            ("first_nonpositive", first),
        ],
    )?;
    match scan {
        Positivity::AllPositive { .. } => Ok(Verdict::Pass),
        Positivity::FirstNonPositive { index } => Ok(Verdict::Fail(format!("{kind} term {index} is not positive"))),
    }
}

pub fn charpoly(cfg: &RunConfig, kind: SeriesKind) -> Outcome {
    let poly = kind.recurrence().characteristic_poly().map_err(from_recurrence)?;
    let deg = poly.len() - 1;
    let palindromic =
        (0..=deg).all(|i| poly[i] == poly[deg - i]) || (0..=deg).all(|i| poly[i] == -poly[deg - i].clone());
    let roots = char_roots(&poly).map_err(from_recurrence)?;
    let coeffs: Vec<String> = poly.iter().map(|c| c.to_string()).collect();
    match cfg.format {
        Format::Json => {
            let rs: Vec<Value> =
                roots.iter().map(|r| json!({"root": r.to_f64(), "multiplicity": r.multiplicity})).collect();
            emit_json(
                cfg,
                &json!({"kind": kind, "degree": deg, "coefficients": coeffs, "palindromic": palindromic, "roots": rs}),
            )?;
        }
        Format::Csv => {
            let rows: Vec<Vec<String>> =
                roots.iter().map(|r| vec![real(r.to_f64()), r.multiplicity.to_string()]).collect();
            emit_table(cfg, &["root", "multiplicity"], &rows)?;
        }
        Format::Text => {
            let mut lines = vec![
                format!("degree {deg}"),
                format!("coefficients {}", coeffs.join(" ")),
                format!("palindromic {}", yes_no(palindromic)),
            ];
            for r in &roots {
                lines.push(format!("root {} multiplicity {}", real(r.to_f64()), r.multiplicity));
            }
            emit_lines(cfg, &lines)?;
        }
    }
    Ok(Verdict::Pass)
}

pub fn asymptotic(
    cfg: &RunConfig,
    kind: SeriesKind,
    n: usize,
    theta: f64,
    log_power: u32,
    crossover: usize,
) -> Outcome {
    let start = n / 4;
    if start < 2 {
        return Err(Failure::Usage(format!("--n must be at least 8, got {n}")));
    }
    let t = table(kind, n + 1, crossover)?;
    let model = AsymptoticModel::silver(theta, log_power, cfg.precision);
    let fit = asymptotic_fit(t.terms(), start..=n, &model, cfg.precision).map_err(from_recurrence)?;
    let at = |m: usize| fit.value_at(m).expect("inside window");
    let (c1, c2, c3) = (at(start), at(n / 2), at(n));
    let shrinking = (c3 - c2).abs() < (c2 - c1).abs();
    match cfg.format {
        Format::Json => emit_json(
            cfg,
            &json!({"kind": kind, "theta": theta, "log_power": log_power, "precision": cfg.precision,
                    "values": [[start, c1], [n / 2, c2], [n, c3]],
                    "max_drift": fit.max_drift, "drift_shrinking": shrinking}),
        )?,
        _ => {
            let rows = vec![
                vec![start.to_string(), real(c1)],
                vec![(n / 2).to_string(), real(c2)],
                vec![n.to_string(), real(c3)],
            ];
            emit_table(cfg, &["n", "c_n"], &rows)?;
        }
    }
    if shrinking {
        Ok(Verdict::Pass)
    } else {
        Ok(Verdict::Fail("c_n drift does not shrink".into()))
    }
}

pub fn iso(cfg: &RunConfig, samples: usize, max_a: f64, grid: Option<Grid>) -> Outcome {
    let curve = match grid {
        None => iso_curve(samples, max_a),
        Some(g) => (0..samples)
            .map(|i| {
                let a = if samples == 1 { 0.0 } else { max_a * i as f64 / (samples - 1) as f64 };
                iso_sample(a, g)
            })
            .collect(),
    }
    .map_err(from_quadrature)?;
    let rows: Vec<Vec<String>> =
        curve.iter().map(|s| vec![real(s.a), real(s.area), real(s.volume), real(s.iso)]).collect();
    match cfg.format {
        Format::Json => {
            let v: Vec<Value> =
                curve.iter().map(|s| json!({"a": s.a, "area": s.area, "volume": s.volume, "iso": s.iso})).collect();
            emit_json(cfg, &Value::Array(v))?;
        }
        _ => emit_table(cfg, &["a", "area", "volume", "iso"], &rows)?,
    }
    match curve.windows(2).position(|w| w[1].iso.partial_cmp(&w[0].iso) != Some(Ordering::Greater)) {
        None => Ok(Verdict::Pass),
        Some(i) => Ok(Verdict::Fail(format!("iso not increasing between a = {} and {}", curve[i].a, curve[i + 1].a))),
    }
}

pub fn rounding(cfg: &RunConfig, surface: Surface, eps: &[f64]) -> Outcome {
    let table = rounding_scan(surface, eps).map_err(from_quadrature)?;
    let header = ["eps", "scaled_area", "scaled_volume", "iso", "area_error", "volume_error"];
    let rows: Vec<Vec<String>> = table
        .iter()
        .map(|r| {
            vec![
                real(r.eps),
                real(r.scaled_area),
                real(r.scaled_volume),
                real(r.iso),
                real(r.area_error),
                real(r.volume_error),
            ]
        })
        .collect();
    match cfg.format {
        Format::Json => {
            emit_json(cfg, &serde_json::to_value(&table).map_err(|e| Failure::Usage(e.to_string()))?)?;
        }
        _ => emit_table(cfg, &header, &rows)?,
    }
    Ok(Verdict::Pass)
}

fn record_json(r: &MeasurementRecord) -> Value {
    serde_json::to_value(r).expect("plain record")
}

pub fn geometry(cfg: &RunConfig, major: f64, rho: f64) -> Outcome {
    let center = classify_inversion_center(rho, major).map_err(from_geometry)?;
    let canonical = fold_to_canonical(rho, major).map_err(from_geometry)?;
    let p1 = cyclide_measurements(canonical, major).map_err(from_geometry)?;
    let p2 = p1_to_p2(&p1).map_err(from_geometry)?;
    let branch = inversion_branch(&canonical, &major).map_err(from_geometry)?;
    let lambda = match branch {
        InversionBranch::Exterior => lambda1(canonical, major),
        InversionBranch::Interior => lambda2(canonical, major),
    }
    .map_err(from_geometry)?;
    let ratio = p1.r1 / p1.r2;
    let consistent = (ratio - lambda).abs() <= 1e-12 * lambda;
    let maxwell = maxwell_data(&p1).ok();
    let records = [MeasurementRecord::new(&canonical, &major, &p1), MeasurementRecord::new(&canonical, &major, &p2)];
    let branch_name = match branch {
        InversionBranch::Exterior => "exterior",
        InversionBranch::Interior => "interior",
    };
    let center_name = format!("{center:?}").to_lowercase();
    match cfg.format {
        Format::Json => emit_json(
            cfg,
            &json!({
                "records": records.iter().map(record_json).collect::<Vec<_>>(),
                "rho_canonical": canonical,
                "branch": branch_name,
                "center": center_name,
                "lambda": lambda,
                "r1_over_r2": ratio,
                "maxwell": maxwell.as_ref().map(|m| json!({"a": m.a, "f": m.f, "L": m.l})),
            }),
        )?,
        _ => {
            let rows: Vec<Vec<String>> = records
                .iter()
                .map(|r| vec![r.plane.to_string(), real(r.rho), real(r.major), real(r.r1), real(r.r2), real(r.d)])
                .collect();
            if cfg.format == Format::Csv {
                emit_table(cfg, &["plane", "rho", "R", "r1", "r2", "d"], &rows)?;
            } else {
                let mut w = sink(cfg.out.as_deref())?;
                text_table(&mut w, &["plane", "rho", "R", "r1", "r2", "d"], &rows)?;
                writeln!(w, "branch {branch_name}")?;
                writeln!(w, "center {center_name}")?;
                writeln!(w, "lambda {}", real(lambda))?;
                writeln!(w, "r1/r2 {}", real(ratio))?;
                if let Some(m) = &maxwell {
                    writeln!(w, "maxwell a {} f {} L {}", real(m.a), real(m.f), real(m.l))?;
                }
                w.flush()?;
            }
        }
    }
    if consistent {
        Ok(Verdict::Pass)
    } else {
        Ok(Verdict::Fail(format!("r1/r2 = {ratio} but lambda = {lambda}")))
    }
}
