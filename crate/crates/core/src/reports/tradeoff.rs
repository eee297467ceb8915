//! Classical cheating tradeoff against the quantum point.

use serde::{Deserialize, Serialize};

use super::format::{fmt_opt, fmt_real, CsvRow};
use crate::cheat::classical::{
    classical_tradeoff_exact, margin_comparison, quantum_point, Exact, TradeoffPoint,
    REFERENCE_LOWER_BOUND_ALICE, REFERENCE_LOWER_BOUND_BOB,
};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TradeoffRow {
    pub kind: String,
    pub s: Option<f64>,
    pub a: f64,
    pub b: f64,
    pub metric: f64,
    pub a_exact: String,
    pub b_exact: String,
    pub metric_exact: String,
}

impl TradeoffRow {
    fn new(kind: &str, s: Option<Exact>, p: TradeoffPoint<Exact>) -> Self {
        Self {
            kind: kind.into(),
            s: s.map(to_f64),
            a: to_f64(p.a),
            b: to_f64(p.b),
            metric: to_f64(p.metric),
            a_exact: p.a.to_string(),
            b_exact: p.b.to_string(),
            metric_exact: p.metric.to_string(),
        }
    }
}

impl CsvRow for TradeoffRow {
    fn header() -> &'static [&'static str] {
        &["kind", "s", "a", "b", "metric", "a_exact", "b_exact", "metric_exact"]
    }

    fn fields(&self) -> Vec<String> {
        vec![
            self.kind.clone(),
            fmt_opt(self.s),
            fmt_real(self.a),
            fmt_real(self.b),
            fmt_real(self.metric),
            self.a_exact.clone(),
            self.b_exact.clone(),
            self.metric_exact.clone(),
        ]
    }
}

pub fn to_f64(r: Exact) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// `n` classical rows at `s = i / (n - 1)`, then the quantum row.
pub fn tradeoff_rows(n: usize) -> Result<Vec<TradeoffRow>> {
    if n < 2 {
        return Err(Error::OutOfRange(format!("need at least 2 s-points, got {n}")));
    }
    let m = i64::try_from(n - 1).map_err(|_| Error::OutOfRange("too many s-points".into()))?;
    let mut rows = (0..=m)
        .map(|i| {
            let s = Exact::new(i, m);
            Ok(TradeoffRow::new("classical", Some(s), classical_tradeoff_exact(s)?))
        })
        .collect::<Result<Vec<_>>>()?;
    rows.push(TradeoffRow::new("quantum", None, quantum_point()));
    Ok(rows)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TradeoffSummary {
    pub classical_metric: String,
    pub quantum_metric: String,
    pub xot_margin: String,
    pub ot_margin: String,
    pub xot_advantage_larger: bool,
    pub reference_lower_bound_bob: f64,
    pub reference_lower_bound_alice: f64,
}

pub fn tradeoff_summary() -> TradeoffSummary {
    let m = margin_comparison();
    TradeoffSummary {
        classical_metric: "5".into(),
        quantum_metric: quantum_point().metric.to_string(),
        xot_margin: m.xot_margin.to_string(),
        ot_margin: m.ot_margin.to_string(),
        xot_advantage_larger: m.xot_advantage_larger,
        reference_lower_bound_bob: REFERENCE_LOWER_BOUND_BOB,
        reference_lower_bound_alice: REFERENCE_LOWER_BOUND_ALICE,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classical_rows_sit_on_the_line() {
        let rows = tradeoff_rows(11).unwrap();
        assert_eq!(rows.len(), 12);
        for r in &rows[..11] {
            assert_eq!(r.metric_exact, "5");
        }
        assert_eq!(rows[0].a_exact, "1/3");
        assert_eq!(rows[10].b_exact, "1/2");
        let q = rows.last().unwrap();
        assert_eq!((q.kind.as_str(), q.metric_exact.as_str()), ("quantum", "9/2"));
        assert!(q.s.is_none());
    }

    #[test]
    fn summary_values() {
        let s = tradeoff_summary();
        assert_eq!(s.xot_margin, "1");
        assert_eq!(s.ot_margin, "147/1000");
        assert!(s.xot_advantage_larger);
        assert!(tradeoff_rows(1).is_err());
    }
}
