//! CSV tables with fixed headers. Floats are written with 9 significant
//! digits in scientific notation.

use crate::risk::{CompareRow, CurveRow};

pub const RISK_CURVE_HEADER: &str = "n,d,k,delta,excess_mean,excess_stderr,bayes_risk,classifier";
pub const MARGIN_HEADER: &str = "delta,eps,prob,stderr,upper_bound,lower_bound";
pub const LOWERBOUND_HEADER: &str = "lemma,params,bound,estimate,stderr,pass";
pub const KNN_COMPARE_HEADER: &str = "n,method,d,k,excess_mean,excess_stderr";
pub const CLASSIFY_PATH_HEADER: &str = "method,d,label,eta";
pub const LABELS_HEADER: &str = "index,label,file";

/// `x` with 9 significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.8e}")
}

/// A table under construction.
#[derive(Debug, Clone)]
pub struct Table {
    header: &'static str,
    columns: usize,
    body: String,
}

impl Table {
    pub fn new(header: &'static str) -> Self {
        Table {
            header,
            columns: header.split(',').count(),
            body: String::new(),
        }
    }

    /// Appends a row; panics if the column count does not match the header.
    pub fn push(&mut self, fields: &[String]) {
        assert_eq!(fields.len(), self.columns, "row width must match `{}`", self.header);
        debug_assert!(fields.iter().all(|f| !f.contains(',') && !f.contains('\n')));
        self.body.push_str(&fields.join(","));
        self.body.push('\n');
    }

    pub fn to_csv(&self) -> String {
        format!("{}\n{}", self.header, self.body)
    }
}

/// One row of a lower-bound verification report.
#[derive(Debug, Clone, PartialEq)]
pub struct LemmaRow {
    pub lemma: &'static str,
    /// `key=value` pairs joined by `;`.
    pub params: String,
    pub bound: f64,
    pub estimate: f64,
    pub stderr: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarginRow {
    pub delta: f64,
    pub eps: f64,
    pub prob: f64,
    pub stderr: f64,
    pub upper_bound: f64,
    pub lower_bound: f64,
}

pub fn risk_curve_csv(rows: &[CurveRow]) -> String {
    let mut t = Table::new(RISK_CURVE_HEADER);
    for r in rows {
        t.push(&[
            r.n.to_string(),
            r.d.to_string(),
            r.k.to_string(),
            num(r.delta),
            num(r.excess_mean),
            num(r.excess_stderr),
            num(r.bayes_risk),
            r.classifier.name().to_string(),
        ]);
    }
    t.to_csv()
}

pub fn knn_compare_csv(rows: &[CompareRow]) -> String {
    let mut t = Table::new(KNN_COMPARE_HEADER);
    for r in rows {
        t.push(&[
            r.n.to_string(),
            r.method.name().to_string(),
            r.d.to_string(),
            r.k.to_string(),
            num(r.excess_mean),
            num(r.excess_stderr),
        ]);
    }
    t.to_csv()
}

pub fn margin_csv(rows: &[MarginRow]) -> String {
    let mut t = Table::new(MARGIN_HEADER);
    for r in rows {
        t.push(&[
            num(r.delta),
            num(r.eps),
            num(r.prob),
            num(r.stderr),
            num(r.upper_bound),
            num(r.lower_bound),
        ]);
    }
    t.to_csv()
}

pub fn lowerbound_csv(rows: &[LemmaRow]) -> String {
    let mut t = Table::new(LOWERBOUND_HEADER);
    for r in rows {
        t.push(&[
            r.lemma.to_string(),
            r.params.clone(),
            num(r.bound),
            num(r.estimate),
            num(r.stderr),
            r.pass.to_string(),
        ]);
    }
    t.to_csv()
}
