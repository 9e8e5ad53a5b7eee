use std::fmt;
use std::io::{Read, Write};

use rug::ops::Pow;
use rug::{Float, Integer, Rational};
use serde::{Deserialize, Serialize};

use super::{d_coeffs, CoefficientEngine, SeriesError};
use crate::recurrence::{known, PRecurrence};

const EVAL_BITS: u32 = 192;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SeriesKind {
    Area,
    Volume,
    Dseq,
}

impl SeriesKind {
    pub fn normalization(self) -> &'static str {
        match self {
            SeriesKind::Area | SeriesKind::Volume => "sqrt2*pi^2",
            SeriesKind::Dseq => "4*pi^4",
        }
    }

    pub fn normalization_constant(self) -> f64 {
        let pi2 = std::f64::consts::PI * std::f64::consts::PI;
        match self {
            SeriesKind::Area | SeriesKind::Volume => std::f64::consts::SQRT_2 * pi2,
            SeriesKind::Dseq => 4.0 * pi2 * pi2,
        }
    }

    /// Exponent of `a` carried by term `j`.
    pub fn power(self, j: usize) -> u32 {
        match self {
            SeriesKind::Dseq => 2 * j as u32 + 1,
            _ => 2 * j as u32,
        }
    }

    /// The known recurrence this sequence satisfies.
    pub fn recurrence(self) -> PRecurrence {
        match self {
            SeriesKind::Area => known::area(),
            SeriesKind::Volume => known::volume(),
            SeriesKind::Dseq => known::dseq(),
        }
    }

    fn first_term(self) -> Rational {
        Rational::from(match self {
            SeriesKind::Area => 4,
            SeriesKind::Volume => 2,
            SeriesKind::Dseq => 72,
        })
    }
}

impl fmt::Display for SeriesKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SeriesKind::Area => "area",
            SeriesKind::Volume => "volume",
            SeriesKind::Dseq => "dseq",
        })
    }
}

impl std::str::FromStr for SeriesKind {
    type Err = SeriesError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "area" => Ok(SeriesKind::Area),
            "volume" => Ok(SeriesKind::Volume),
            "dseq" => Ok(SeriesKind::Dseq),
            other => Err(SeriesError::Parse(format!("unknown series kind {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawTable", into = "RawTable")]
pub struct SeriesTable {
    kind: SeriesKind,
    terms: Vec<Rational>,
}

#[derive(Serialize, Deserialize)]
struct RawTable {
    kind: SeriesKind,
    normalization: String,
    terms: Vec<String>,
}

impl From<SeriesTable> for RawTable {
    fn from(t: SeriesTable) -> Self {
        RawTable {
            kind: t.kind,
            normalization: t.kind.normalization().to_string(),
            terms: t.terms.iter().map(|q| format!("{}/{}", q.numer(), q.denom())).collect(),
        }
    }
}

impl TryFrom<RawTable> for SeriesTable {
    type Error = SeriesError;

    fn try_from(raw: RawTable) -> Result<Self, Self::Error> {
        if raw.normalization != raw.kind.normalization() {
            return Err(SeriesError::Parse(format!(
                "normalization {:?} does not match kind {}",
                raw.normalization, raw.kind
            )));
        }
        let terms = raw.terms.iter().map(|s| parse_rational(s)).collect::<Result<_, _>>()?;
        Ok(SeriesTable { kind: raw.kind, terms })
    }
}

pub(crate) fn parse_rational(s: &str) -> Result<Rational, SeriesError> {
    s.trim().parse::<Rational>().map_err(|e| SeriesError::Parse(format!("{s:?}: {e}")))
}

impl SeriesTable {
    pub fn new(kind: SeriesKind, terms: Vec<Rational>) -> Self {
        Self { kind, terms }
    }

    /// Direct summation for the first `count` terms.
    pub fn direct(kind: SeriesKind, count: usize) -> Self {
        if count == 0 {
            return Self::new(kind, Vec::new());
        }
        let terms = match kind {
            SeriesKind::Area => CoefficientEngine::new(count - 1).areas(count),
            SeriesKind::Volume => CoefficientEngine::new(count - 1).volumes(count),
            SeriesKind::Dseq => {
                let e = CoefficientEngine::new(count);
                let a = e.areas(count + 1);
                let v = e.volumes(count + 1);
                d_coeffs(count, &a, &v).expect("count + 1 terms were computed")
            }
        };
        Self::new(kind, terms)
    }

    /// Direct summation up to `crossover` terms, recurrence extension beyond.
    ///
    /// The extension is restarted from the first `r` direct terms and compared
    /// with every direct term before it is trusted.
    pub fn build(kind: SeriesKind, count: usize, crossover: usize) -> Result<Self, SeriesError> {
        let rec = kind.recurrence();
        let r = rec.order();
        let direct_len = crossover.max(r);
        if count <= direct_len {
            return Ok(Self::direct(kind, count));
        }
        let direct = Self::direct(kind, direct_len);
        let extended = rec.extend(&direct.terms[..r], count)?;
        for (index, (x, y)) in direct.terms.iter().zip(extended.iter()).enumerate() {
            if x != y {
                return Err(SeriesError::CrossCheck { kind, index });
            }
        }
        let mut terms = extended;
        terms.truncate(count);
        Ok(Self::new(kind, terms))
    }

    /// Exact extension by the kind's recurrence alone, seeded with direct terms.
    pub fn by_recurrence(kind: SeriesKind, count: usize) -> Result<Self, SeriesError> {
        let rec = kind.recurrence();
        let seed = Self::direct(kind, rec.order());
        let mut terms = rec.extend(seed.terms(), count.max(rec.order()))?;
        terms.truncate(count);
        Ok(Self::new(kind, terms))
    }

    pub fn kind(&self) -> SeriesKind {
        self.kind
    }

    pub fn normalization(&self) -> &'static str {
        self.kind.normalization()
    }

    pub fn terms(&self) -> &[Rational] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<Rational> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Whether `terms[0]` equals the known constant term of the kind.
    pub fn leading_term_ok(&self) -> bool {
        self.terms.first().is_none_or(|t| *t == self.kind.first_term())
    }

    pub fn to_json(&self) -> Result<String, SeriesError> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self, SeriesError> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<(), SeriesError> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["index", "numerator", "denominator"])?;
        for (i, t) in self.terms.iter().enumerate() {
            out.write_record([i.to_string(), t.numer().to_string(), t.denom().to_string()])?;
        }
        out.flush().map_err(csv::Error::from)?;
        Ok(())
    }

    pub fn read_csv<R: Read>(kind: SeriesKind, r: R) -> Result<Self, SeriesError> {
        let mut input = csv::Reader::from_reader(r);
        let mut terms = Vec::new();
        for (expected, rec) in input.records().enumerate() {
            let rec = rec?;
            if rec.len() != 3 {
                return Err(SeriesError::Parse(format!("row {expected}: expected 3 fields")));
            }
            let index: usize =
                rec[0].trim().parse().map_err(|_| SeriesError::Parse(format!("row {expected}: bad index")))?;
            if index != expected {
                return Err(SeriesError::Parse(format!("gap before index {index}")));
            }
            let num: Integer =
                rec[1].trim().parse().map_err(|_| SeriesError::Parse(format!("row {expected}: bad numerator")))?;
            let den: Integer =
                rec[2].trim().parse().map_err(|_| SeriesError::Parse(format!("row {expected}: bad denominator")))?;
            if den.cmp0() != std::cmp::Ordering::Greater {
                return Err(SeriesError::Parse(format!("row {expected}: denominator must be positive")));
            }
            terms.push(Rational::from((num, den)));
        }
        Ok(Self::new(kind, terms))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesEval {
    /// Partial sum of the normalized series.
    pub normalized: f64,
    /// `normalized` times the kind's normalization constant.
    pub value: f64,
    /// Geometric tail bound in normalized units.
    pub tail_estimate: f64,
    pub terms_used: usize,
    pub slow_convergence: bool,
}

fn check_disk(a: f64) -> Result<(), SeriesError> {
    if !(a.abs() < crate::CONVERGENCE_RADIUS) {
        return Err(SeriesError::OutsideDisk(a));
    }
    Ok(())
}

fn finish(kind: SeriesKind, sum: Float, last: Float, a: f64, terms_used: usize) -> SeriesEval {
    let x = crate::SILVER_SQUARED * a * a;
    let tail_estimate = last.to_f64().abs() * x / (1.0 - x);
    let normalized = sum.to_f64();
    SeriesEval {
        normalized,
        value: normalized * kind.normalization_constant(),
        tail_estimate,
        terms_used,
        slow_convergence: x > 0.9 || tail_estimate > 1e-8 * normalized.abs(),
    }
}

/// Partial sum of the first `truncation` terms at `a`.
pub fn series_eval(table: &SeriesTable, a: f64, truncation: usize) -> Result<SeriesEval, SeriesError> {
    check_disk(a)?;
    if truncation == 0 || truncation > table.len() {
        return Err(SeriesError::InsufficientTerms { needed: truncation.max(1), available: table.len() });
    }
    let af = Float::with_val(EVAL_BITS, a);
    let mut sum = Float::new(EVAL_BITS);
    let mut last = Float::new(EVAL_BITS);
    for (j, t) in table.terms[..truncation].iter().enumerate() {
        let p = Float::with_val(EVAL_BITS, (&af).pow(table.kind.power(j)));
        last = p * t;
        sum += &last;
    }
    Ok(finish(table.kind, sum, last, a, truncation))
}

/// Termwise derivative in `a` of the first `truncation` terms.
pub fn series_derivative(table: &SeriesTable, a: f64, truncation: usize) -> Result<SeriesEval, SeriesError> {
    check_disk(a)?;
    if truncation == 0 || truncation > table.len() {
        return Err(SeriesError::InsufficientTerms { needed: truncation.max(1), available: table.len() });
    }
    let af = Float::with_val(EVAL_BITS, a);
    let mut sum = Float::new(EVAL_BITS);
    let mut last = Float::new(EVAL_BITS);
    for (j, t) in table.terms[..truncation].iter().enumerate() {
        let k = table.kind.power(j);
        if k == 0 {
            continue;
        }
        let p = Float::with_val(EVAL_BITS, (&af).pow(k - 1)) * k;
        last = p * t;
        sum += &last;
    }
    Ok(finish(table.kind, sum, last, a, truncation))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn json_layout() {
        let t = SeriesTable::new(SeriesKind::Area, vec![q(4, 1), q(451625, 16)]);
        let s = t.to_json().unwrap();
        assert_eq!(s, r#"{"kind":"area","normalization":"sqrt2*pi^2","terms":["4/1","451625/16"]}"#);
        assert_eq!(SeriesTable::from_json(&s).unwrap(), t);
    }

    #[test]
    fn json_rejects_mismatched_normalization() {
        let s = r#"{"kind":"dseq","normalization":"sqrt2*pi^2","terms":["72"]}"#;
        assert!(SeriesTable::from_json(s).is_err());
        let s = r#"{"kind":"dseq","normalization":"4*pi^4","terms":["72","790101/2"]}"#;
        assert_eq!(SeriesTable::from_json(s).unwrap().terms()[1], q(790101, 2));
    }

    #[test]
    fn csv_round_trip() {
        let t = SeriesTable::new(SeriesKind::Volume, vec![q(2, 1), q(48, 1), q(1269, 2)]);
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert_eq!(text, "index,numerator,denominator\n0,2,1\n1,48,1\n2,1269,2\n");
        assert_eq!(SeriesTable::read_csv(SeriesKind::Volume, &buf[..]).unwrap(), t);
    }

    #[test]
    fn csv_rejects_gaps() {
        let text = "index,numerator,denominator\n0,2,1\n2,48,1\n";
        assert!(SeriesTable::read_csv(SeriesKind::Volume, text.as_bytes()).is_err());
    }

    #[test]
    fn build_crosses_over_to_recurrence() {
        for kind in [SeriesKind::Area, SeriesKind::Volume, SeriesKind::Dseq] {
            let direct = SeriesTable::direct(kind, 24);
            let built = SeriesTable::build(kind, 24, 12).unwrap();
            assert_eq!(direct, built, "{kind}");
            assert!(built.leading_term_ok());
        }
    }

    #[test]
    fn eval_at_origin() {
        let t = SeriesTable::direct(SeriesKind::Area, 3);
        let e = series_eval(&t, 0.0, 3).unwrap();
        assert_eq!(e.normalized, 4.0);
        assert!((e.value - 4.0 * SeriesKind::Area.normalization_constant()).abs() < 1e-12);
        assert!(!e.slow_convergence);
    }

    #[test]
    fn eval_near_radius_flags_slow_convergence() {
        let t = SeriesTable::by_recurrence(SeriesKind::Area, 400).unwrap();
        let e = series_eval(&t, 0.41, 400).unwrap();
        assert!(e.slow_convergence);
        assert!(e.tail_estimate > 1e-6 * e.normalized);
        assert!(matches!(series_eval(&t, 0.5, 10), Err(SeriesError::OutsideDisk(_))));
        assert!(matches!(series_eval(&t, 0.1, 401), Err(SeriesError::InsufficientTerms { .. })));
    }

    #[test]
    fn derivative_matches_difference_quotient() {
        let t = SeriesTable::by_recurrence(SeriesKind::Volume, 80).unwrap();
        let h = 1e-6;
        let fd = (series_eval(&t, 0.2 + h, 80).unwrap().normalized - series_eval(&t, 0.2 - h, 80).unwrap().normalized)
            / (2.0 * h);
        let d = series_derivative(&t, 0.2, 80).unwrap().normalized;
        assert!((fd - d).abs() < 1e-6 * d.abs(), "{fd} vs {d}");
    }
}
