//! Growth-exponent fits, empirical domination checks, CSV and reports.

use std::fmt;
use std::fs::File;
use std::io::{Read, Write};
use std::ops::RangeInclusive;
use std::path::Path;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::constructions::RationalExponent;
use crate::explorer::{AvoidStatus, DivergenceSample, RegionMode, SearchCaps};
use crate::presentation::DefiningGraph;

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("malformed row: {0}")]
    Row(String),
}

/// Least-squares line through `(ln r, ln value)`.
#[derive(Clone, Debug, PartialEq)]
pub struct FitReport {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    /// Smallest and largest radius actually used.
    pub r_range: (u32, u32),
    pub sample_count: usize,
    /// Samples inside the requested range left out because they were not
    /// `Found` or not stabilised.
    pub excluded: usize,
}

impl fmt::Display for FitReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "slope {:.4}  intercept {:.4}  r^2 {:.4}  r {}..{}  samples {}  excluded {}",
            self.slope,
            self.intercept,
            self.r_squared,
            self.r_range.0,
            self.r_range.1,
            self.sample_count,
            self.excluded
        )
    }
}

/// Samples usable for fitting: `Found`, stabilised, positive radius.
pub fn usable_points(samples: &[DivergenceSample]) -> Vec<(u32, f64)> {
    samples
        .iter()
        .filter(|s| s.stabilized && s.r > 0)
        .filter_map(|s| s.value().map(|v| (s.r, f64::from(v))))
        .collect()
}

/// Fits a power law to the usable samples with `r` in `r_range`.
pub fn loglog_fit(
    samples: &[DivergenceSample],
    r_range: RangeInclusive<u32>,
) -> Result<FitReport, AnalysisError> {
    let in_range: Vec<&DivergenceSample> =
        samples.iter().filter(|s| r_range.contains(&s.r)).collect();
    let points: Vec<(u32, f64)> = in_range
        .iter()
        .filter(|s| s.stabilized && s.r > 0 && s.value().is_some_and(|v| v > 0))
        .map(|s| (s.r, f64::from(s.value().unwrap_or(0))))
        .collect();
    let mut report = fit_points(&points)?;
    report.excluded = in_range.len() - points.len();
    Ok(report)
}

/// Power-law fit of raw `(r, value)` points; all coordinates must be positive.
pub fn fit_points(points: &[(u32, f64)]) -> Result<FitReport, AnalysisError> {
    if points.len() < 3 {
        return Err(AnalysisError::InsufficientData(format!(
            "{} usable samples, need 3",
            points.len()
        )));
    }
    if points.iter().any(|&(r, v)| r == 0 || v <= 0.0) {
        return Err(AnalysisError::InsufficientData(
            "non-positive coordinate".into(),
        ));
    }
    let xs: Vec<f64> = points.iter().map(|&(r, _)| f64::from(r).ln()).collect();
    let ys: Vec<f64> = points.iter().map(|&(_, v)| v.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(AnalysisError::InsufficientData(
            "all samples share one radius".into(),
        ));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_tot: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let ss_res: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    // a constant series is fitted exactly by a flat line
    let r_squared = if ss_tot <= f64::EPSILON * n {
        1.0
    } else {
        (1.0 - ss_res / ss_tot).clamp(0.0, 1.0)
    };
    let lo = points.iter().map(|p| p.0).min().unwrap_or(0);
    let hi = points.iter().map(|p| p.0).max().unwrap_or(0);
    Ok(FitReport {
        slope,
        intercept,
        r_squared,
        r_range: (lo, hi),
        sample_count: points.len(),
        excluded: 0,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct DominationVerdict {
    pub holds: bool,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    /// First sampled `x > C` where `f(x) > g(Ax) + Bx`.
    pub counterexample: Option<u32>,
    /// Number of sampled `x` that were checked.
    pub checked: usize,
}

impl fmt::Display for DominationVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.counterexample {
            None => write!(f, "dominated with A={} B={} C={}", self.a, self.b, self.c)?,
            Some(x) => write!(
                f,
                "not dominated: counterexample x={x} for A={} B={} C={}",
                self.a, self.b, self.c
            )?,
        }
        write!(f, " (empirical, {} sampled points)", self.checked)
    }
}

/// Checks `f(x) ≤ g(Ax) + Bx` at every sampled `x > C`, evaluating `g` at the
/// nearest sampled radius `≥ Ax`.
pub fn dominates_check(
    f: &[(u32, f64)],
    g: &[(u32, f64)],
    a: f64,
    b: f64,
    c: f64,
) -> Result<DominationVerdict, AnalysisError> {
    let mut fs = f.to_vec();
    fs.sort_by_key(|p| p.0);
    let mut gs = g.to_vec();
    gs.sort_by_key(|p| p.0);
    let mut checked = 0;
    for &(x, fx) in fs.iter().filter(|p| f64::from(p.0) > c) {
        let ax = a * f64::from(x);
        let Some(&(_, gx)) = gs.iter().find(|p| f64::from(p.0) >= ax) else {
            return Err(AnalysisError::InsufficientData(format!(
                "g not sampled at or beyond {ax}"
            )));
        };
        checked += 1;
        if fx > gx + b * f64::from(x) {
            return Ok(DominationVerdict {
                holds: false,
                a,
                b,
                c,
                counterexample: Some(x),
                checked,
            });
        }
    }
    if checked == 0 {
        return Err(AnalysisError::InsufficientData(format!(
            "no sampled x > {c}"
        )));
    }
    Ok(DominationVerdict {
        holds: true,
        a,
        b,
        c,
        counterexample: None,
        checked,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExponentVerdict {
    pub pass: bool,
    pub slope: f64,
    pub expected: Rational64,
    pub tol: f64,
}

impl fmt::Display for ExponentVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: slope {:.4} vs expected {} ({:.4}), tol {}",
            if self.pass { "PASS" } else { "FAIL" },
            self.slope,
            self.expected,
            rational_f64(self.expected),
            self.tol
        )
    }
}

pub fn rational_f64(x: Rational64) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}

pub fn compare_exponent(report: &FitReport, expected: Rational64, tol: f64) -> ExponentVerdict {
    let pass = (report.slope - rational_f64(expected)).abs() <= tol;
    ExponentVerdict {
        pass,
        slope: report.slope,
        expected,
        tol,
    }
}

/// One CSV row; column order is fixed by field order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleRow {
    pub graph: String,
    pub geodesic: String,
    pub m: Option<u32>,
    pub t: Option<String>,
    pub r: u32,
    pub status: String,
    pub value: Option<u32>,
    pub cap_radius: u32,
    pub cap_nodes: u64,
    pub nodes_explored: u64,
    pub stabilized: bool,
    pub min_t: Option<i64>,
}

pub const CSV_HEADER: &str =
    "graph,geodesic,m,t,r,status,value,cap_radius,cap_nodes,nodes_explored,stabilized,min_t";

impl SampleRow {
    pub fn new(
        graph: &str,
        geodesic: &str,
        m: Option<u32>,
        t: Option<String>,
        s: &DivergenceSample,
    ) -> Self {
        SampleRow {
            graph: graph.to_string(),
            geodesic: geodesic.to_string(),
            m,
            t,
            r: s.r,
            status: s.status.tag().to_string(),
            value: s.value(),
            cap_radius: s.caps.cap_radius,
            cap_nodes: s.caps.cap_nodes,
            nodes_explored: s.nodes_explored,
            stabilized: s.stabilized,
            min_t: s.min_t,
        }
    }

    /// Rebuilds the sample. The region mode and stabilisation delta are not
    /// stored and come back as defaults.
    pub fn to_sample(&self) -> Result<DivergenceSample, AnalysisError> {
        let status = match (self.status.as_str(), self.value) {
            ("found", Some(v)) => AvoidStatus::Found(v),
            ("budget", None) => AvoidStatus::NotFoundWithinBudget,
            ("infinite", None) => AvoidStatus::Infinite,
            (s, v) => return Err(AnalysisError::Row(format!("status {s:?} with value {v:?}"))),
        };
        let mut caps = SearchCaps::for_radius(self.r);
        caps.cap_radius = self.cap_radius;
        caps.cap_nodes = self.cap_nodes;
        caps.region = RegionMode::Reduced;
        Ok(DivergenceSample {
            r: self.r,
            status,
            caps,
            nodes_explored: self.nodes_explored,
            stabilized: self.stabilized,
            min_t: self.min_t,
        })
    }
}

/// Rows for a sweep over one graph; `geodesic` labels the measured object.
pub fn sample_rows(
    g: &DefiningGraph,
    geodesic: &str,
    t: Option<RationalExponent>,
    samples: &[DivergenceSample],
) -> Vec<SampleRow> {
    let graph = g.family().to_string();
    let t = t.map(|t| t.to_string());
    samples
        .iter()
        .map(|s| SampleRow::new(&graph, geodesic, g.family().m(), t.clone(), s))
        .collect()
}

/// Writes rows with a header and LF line endings.
pub fn emit_csv<W: Write>(rows: &[SampleRow], out: W) -> Result<(), AnalysisError> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(CSV_HEADER.split(','))?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush().map_err(|source| AnalysisError::Io {
        path: "<csv>".into(),
        source,
    })?;
    Ok(())
}

pub fn write_csv(rows: &[SampleRow], path: &Path) -> Result<(), AnalysisError> {
    let io = |source| AnalysisError::Io {
        path: path.display().to_string(),
        source,
    };
    let file = File::create(path).map_err(io)?;
    emit_csv(rows, file).map_err(|e| match e {
        AnalysisError::Io { source, .. } => io(source),
        other => other,
    })
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<SampleRow>, AnalysisError> {
    let mut r = csv::Reader::from_reader(input);
    let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    if header.join(",") != CSV_HEADER {
        return Err(AnalysisError::Row(format!(
            "unexpected header {}",
            header.join(",")
        )));
    }
    r.deserialize()
        .map(|row| row.map_err(AnalysisError::from))
        .collect()
}

pub fn read_csv_file(path: &Path) -> Result<Vec<SampleRow>, AnalysisError> {
    let file = File::open(path).map_err(|source| AnalysisError::Io {
        path: path.display().to_string(),
        source,
    })?;
    read_csv(file)
}

/// Plain-text experiment report.
#[derive(Clone, Debug, Default)]
pub struct Report {
    /// Effective configuration, echoed first.
    pub config: Vec<(String, String)>,
    pub sections: Vec<ReportSection>,
    /// Free-form lines printed at the end.
    pub notes: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct ReportSection {
    pub title: String,
    pub samples: Vec<DivergenceSample>,
    pub fit: Option<Result<FitReport, String>>,
    pub verdict: Option<ExponentVerdict>,
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# configuration")?;
        for (k, v) in &self.config {
            writeln!(f, "{k} = {v}")?;
        }
        for s in &self.sections {
            writeln!(f)?;
            writeln!(f, "## {}", s.title)?;
            writeln!(
                f,
                "{:>4} {:>10} {:>8} {:>12} {:>6}",
                "r", "status", "value", "nodes", "stable"
            )?;
            for x in &s.samples {
                let value = x.value().map_or("-".to_string(), |v| v.to_string());
                writeln!(
                    f,
                    "{:>4} {:>10} {:>8} {:>12} {:>6}",
                    x.r,
                    x.status.tag(),
                    value,
                    x.nodes_explored,
                    if x.stabilized { "yes" } else { "no" }
                )?;
            }
            match &s.fit {
                Some(Ok(fit)) => writeln!(f, "fit: {fit}")?,
                Some(Err(e)) => writeln!(f, "fit: unavailable ({e})")?,
                None => {}
            }
            if let Some(v) = &s.verdict {
                writeln!(f, "exponent: {v}")?;
            }
        }
        if !self.notes.is_empty() {
            writeln!(f)?;
            for n in &self.notes {
                writeln!(f, "{n}")?;
            }
        }
        Ok(())
    }
}
