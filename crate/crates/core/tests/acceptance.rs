//! Acceptance gate: runs every criterion at its stated tolerance and prints
//! one PASS/FAIL line each. Exits nonzero if any criterion fails.

use std::cmp::Ordering;
use std::f64::consts::{PI, SQRT_2};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clifford_iso::geometry::{branch_shape_gap, duality_deviation, homothety_deviation};
use clifford_iso::quadrature::{
    area_numeric, iso_curve, iso_ratio, rounding_scan, series_value, sphere_rounding_exact, volume_numeric, Grid,
    Surface,
};
use clifford_iso::recurrence::{
    asymptotic_fit, char_roots, guess_default, known, positivity_scan, AsymptoticModel, PRecurrence, Positivity,
};
use clifford_iso::series::{area_coeffs, d_coeffs, volume_coeffs, SeriesKind, SeriesTable};
use clifford_iso::{Integer, Rational};

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn q(s: &str) -> Rational {
    s.parse().unwrap()
}

fn golden_coefficients() -> Check {
    let want = |v: &[&str]| v.iter().map(|s| q(s)).collect::<Vec<_>>();
    let a = area_coeffs(6);
    let v = volume_coeffs(6);
    let d = d_coeffs(5, &a, &v).map_err(|e| e.to_string())?;
    ensure(a[..5] == want(&["4", "52", "477", "3809", "451625/16"])[..], || format!("area {:?}", &a[..5]))?;
    ensure(v[..5] == want(&["2", "48", "1269/2", "6600", "1928025/32"])[..], || format!("volume {:?}", &v[..5]))?;
    ensure(d == want(&["72", "1932", "31248", "790101/2", "17208645/4"]), || format!("dseq {d:?}"))?;
    Ok("a, v, d exact".into())
}

fn recurrence_verification() -> Check {
    let spot = -84 * 4 + 399 * 52 - 474 * 477 + 54 * 3809;
    ensure(spot == 0, || format!("spot identity gives {spot}"))?;
    for (kind, rec, n_max) in [
        (SeriesKind::Area, known::area(), 200),
        (SeriesKind::Volume, known::volume(), 200),
        (SeriesKind::Dseq, known::dseq(), 100),
    ] {
        let seq = SeriesTable::direct(kind, n_max + rec.order() + 1);
        rec.check_satisfies(seq.terms(), n_max).map_err(|e| format!("{kind}: {e}"))?;
    }
    Ok("area, volume n <= 200; dseq n <= 100; zero residues".into())
}

fn guessing() -> Check {
    let mut notes = Vec::new();
    for (kind, rec, r, d) in [
        (SeriesKind::Area, known::area(), 3, 4),
        (SeriesKind::Volume, known::volume(), 3, 4),
        (SeriesKind::Dseq, known::dseq(), 7, 7),
    ] {
        let t0 = Instant::now();
        let seq = SeriesTable::direct(kind, 2 * (r + 1) * (d + 1) + r);
        let g = guess_default(seq.terms(), r, d).map_err(|e| format!("{kind}: {e}"))?;
        ensure(g.basis.len() == 1, || format!("{kind}: nullspace dimension {}", g.basis.len()))?;
        ensure(g.basis[0].equivalent(&rec), || format!("{kind}: unexpected recurrence\n{}", g.basis[0]))?;
        notes.push(format!("{kind} ({r},{d}) {:.2}s", t0.elapsed().as_secs_f64()));
    }
    Ok(notes.join(", "))
}

fn roots_match(rec: &PRecurrence, want: &[f64]) -> Result<(), String> {
    let poly = rec.characteristic_poly().map_err(|e| e.to_string())?;
    let mut got = Vec::new();
    for r in char_roots(&poly).map_err(|e| e.to_string())? {
        got.extend(std::iter::repeat_n(r.to_f64(), r.multiplicity));
    }
    ensure(got.len() == want.len(), || format!("root count {} vs {}", got.len(), want.len()))?;
    for (x, y) in got.iter().zip(want) {
        ensure((x - y).abs() <= 1e-10 * y.abs().max(1.0), || format!("root {x} vs {y}"))?;
    }
    Ok(())
}

fn same_up_to_sign(p: &[Integer], want: &[i64]) -> bool {
    p.len() == want.len() && (p.iter().zip(want).all(|(a, b)| *a == *b) || p.iter().zip(want).all(|(a, b)| *a == -*b))
}

fn characteristic_polynomials() -> Check {
    let rho = (SQRT_2 + 1.0).powi(2);
    for rec in [known::area(), known::volume()] {
        let p = rec.characteristic_poly().map_err(|e| e.to_string())?;
        ensure(same_up_to_sign(&p, &[-1, 7, -7, 1]), || format!("cubic {p:?}"))?;
        roots_match(&rec, &[1.0 / rho, 1.0, rho])?;
    }
    let rec = known::dseq();
    let p = rec.characteristic_poly().map_err(|e| e.to_string())?;
    ensure(same_up_to_sign(&p, &[-1, 15, -77, 163, -163, 77, -15, 1]), || format!("septic {p:?}"))?;
    roots_match(&rec, &[1.0 / rho, 1.0 / rho, 1.0, 1.0, 1.0, rho, rho])?;
    Ok("z^3-7z^2+7z-1 twice, degree-7 palindrome, roots to 1e-10".into())
}

fn dseq_to(n: usize) -> Result<SeriesTable, String> {
    SeriesTable::build(SeriesKind::Dseq, n + 1, 200).map_err(|e| e.to_string())
}

fn positivity() -> Check {
    let t = dseq_to(10_000)?;
    match positivity_scan(t.terms()) {
        Positivity::AllPositive { checked } => Ok(format!("{checked} terms positive")),
        Positivity::FirstNonPositive { index } => Err(format!("d_{index} <= 0")),
    }
}

fn asymptotics() -> Check {
    const C: f64 = 8.071956;
    let t = dseq_to(5000)?;
    let model = AsymptoticModel::silver(3.0, 1, 256);
    let fit = asymptotic_fit(t.terms(), 1250..=5000, &model, 256).map_err(|e| e.to_string())?;
    let c = |n| fit.value_at(n).unwrap();
    let (c1, c2, c3) = (c(1250), c(2500), c(5000));
    ensure((c3 / C - 1.0).abs() < 0.05, || format!("c_5000 = {c3}"))?;
    ensure((c3 - c2).abs() < (c2 - c1).abs(), || format!("drift {c1} {c2} {c3}"))?;
    Ok(format!("c_1250 = {c1:.4}, c_2500 = {c2:.4}, c_5000 = {c3:.4}"))
}

fn cross_validation() -> Check {
    let mut worst: f64 = 0.0;
    for a in [0.0, 0.1, 0.2, 0.3] {
        let grid = Grid::for_parameter(a).map_err(|e| e.to_string())?;
        let area = area_numeric(a, grid).map_err(|e| e.to_string())?.value;
        let vol = volume_numeric(a, grid).map_err(|e| e.to_string())?.value;
        let sa = series_value(SeriesKind::Area, a).map_err(|e| e.to_string())?;
        let sv = series_value(SeriesKind::Volume, a).map_err(|e| e.to_string())?;
        let da = (area / sa - 1.0).abs();
        let dv = (vol / sv - 1.0).abs();
        ensure(da <= 1e-8 && dv <= 1e-8, || format!("a = {a}: area {da:e}, volume {dv:e}"))?;
        worst = worst.max(da).max(dv);
    }
    let curve = iso_curve(41, 0.40).map_err(|e| e.to_string())?;
    let iso0 = 1.5 * (2.0 * PI * PI).powf(-0.25);
    ensure((curve[0].iso - iso0).abs() <= 1e-8, || format!("Iso(0) = {}", curve[0].iso))?;
    if let Some(i) = curve.windows(2).position(|w| w[1].iso.partial_cmp(&w[0].iso) != Some(Ordering::Greater)) {
        return Err(format!("Iso not increasing at a = {}", curve[i + 1].a));
    }
    let grid = Grid::for_parameter(0.41).map_err(|e| e.to_string())?;
    let iso41 = iso_ratio(0.41, grid).map_err(|e| e.to_string())?;
    ensure(iso41 >= 0.98, || format!("Iso(0.41) = {iso41}"))?;
    Ok(format!("max rel. gap {worst:.1e}, Iso(0.40) = {:.5}, Iso(0.41) = {iso41:.5}", curve[40].iso))
}

fn rounding() -> Check {
    let sphere = sphere_rounding_exact(1e-2).scaled_area / PI;
    ensure((0.99..=1.01).contains(&sphere), || format!("sphere {sphere}"))?;
    let row = rounding_scan(Surface::Torus { major: SQRT_2 }, &[1e-3]).map_err(|e| e.to_string())?[0];
    let area = row.scaled_area / PI;
    let vol = 6.0 * row.scaled_volume / PI;
    ensure((area - 1.0).abs() < 0.02 && (vol - 1.0).abs() < 0.02, || format!("torus {area} {vol}"))?;
    Ok(format!("sphere {sphere:.5}; torus area {area:.5}, volume {vol:.5}"))
}

fn geometry() -> Check {
    let mut worst: f64 = 0.0;
    for (rho, major) in [(0.2, SQRT_2), (0.3, 2.0), (0.1, 1.2)] {
        let dev = homothety_deviation(rho, major, 10).map_err(|e| e.to_string())?;
        ensure(dev < 1e-12, || format!("homothety rho = {rho}, R = {major}: {dev:e}"))?;
        worst = worst.max(dev);
    }
    for (major, rho) in [(SQRT_2, 0.0), (SQRT_2, 0.3), (2.0, 0.5), (1.2, 0.1), (3.0, 2.5)] {
        let dev = duality_deviation(major, rho).map_err(|e| e.to_string())?;
        ensure(dev < 1e-12, || format!("duality R = {major}, rho = {rho}: {dev:e}"))?;
        worst = worst.max(dev);
    }
    for rho in [0.05, 0.2, 0.35] {
        let gap = branch_shape_gap(rho, SQRT_2).map_err(|e| e.to_string())?;
        ensure(gap < 1e-12, || format!("R = sqrt2 branches differ at rho = {rho}: {gap:e}"))?;
    }
    let mut least = f64::INFINITY;
    for rho in [0.05, 0.1, 0.15] {
        let gap = branch_shape_gap(rho, 1.2).map_err(|e| e.to_string())?;
        ensure(gap > 1e-3, || format!("R = 1.2 branches coincide at rho = {rho}: {gap:e}"))?;
        least = least.min(gap);
    }
    Ok(format!("max deviation {worst:.1e}; R = 1.2 branch gap >= {least:.2e}"))
}

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Option<Duration>,
    run: fn() -> Check,
}

fn main() -> ExitCode {
    let criteria = [
        Criterion {
            id: 1,
            name: "coefficient goldens",
            limit: Some(Duration::from_secs(10)),
            run: golden_coefficients,
        },
        Criterion { id: 2, name: "recurrence verification", limit: None, run: recurrence_verification },
        Criterion { id: 3, name: "guessing", limit: Some(Duration::from_secs(120)), run: guessing },
        Criterion { id: 4, name: "characteristic polynomials", limit: None, run: characteristic_polynomials },
        Criterion { id: 5, name: "positivity to 10000", limit: Some(Duration::from_secs(300)), run: positivity },
        Criterion { id: 6, name: "asymptotic constant", limit: None, run: asymptotics },
        Criterion { id: 7, name: "series vs quadrature", limit: None, run: cross_validation },
        Criterion { id: 8, name: "rounding limits", limit: None, run: rounding },
        Criterion { id: 9, name: "geometry invariants", limit: None, run: geometry },
    ];
    let mut failed = 0;
    for c in &criteria {
        let t0 = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = t0.elapsed();
        let outcome = match (outcome, c.limit) {
            (Ok(_), Some(limit)) if elapsed > limit => Err(format!("took {elapsed:?}, limit {limit:?}")),
            (o, _) => o,
        };
        let secs = elapsed.as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {}. {} ({secs:.2}s): {detail}", c.id, c.name),
            Err(why) => {
                failed += 1;
                println!("FAIL {}. {} ({secs:.2}s): {why}", c.id, c.name);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
