//! Parameter sweeps over `(ReF, ImF, G)` on the square `[-1/3, 1/3]`.

use std::io::Read;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::format::{fmt_opt, fmt_real, parse_flag, parse_opt, parse_real, CsvRow};
use crate::cheat::{alice_notest_closed_form, alice_test_bound_closed_form, bob_cheat_closed_form};
use crate::error::{Error, Result};
use crate::state_family::OverlapParams;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Plane {
    /// `ImF = 0`.
    ReFG,
    /// `ReF = 0`.
    ImFG,
    ThreeD,
}

impl Plane {
    pub fn default_grid(self) -> usize {
        match self {
            Plane::ThreeD => 51,
            _ => 201,
        }
    }
}

impl std::str::FromStr for Plane {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "reF-g" => Ok(Plane::ReFG),
            "imF-g" => Ok(Plane::ImFG),
            "3d" => Ok(Plane::ThreeD),
            other => Err(Error::Parse(format!("unknown plane {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub re_f: f64,
    pub im_f: f64,
    pub g: f64,
    pub realizable: bool,
    pub honest_feasible: bool,
    pub b_ot: Option<f64>,
    pub a_test_bound: Option<f64>,
    pub a_notest_overall: Option<f64>,
    pub a_notest_p01: Option<f64>,
    pub a_notest_p2: Option<f64>,
    pub dominant_branch: Option<String>,
}

pub const SWEEP_HEADER: [&str; 11] = [
    "re_f",
    "im_f",
    "g",
    "realizable",
    "honest_feasible",
    "b_ot",
    "a_test_bound",
    "a_notest_overall",
    "a_notest_p01",
    "a_notest_p2",
    "dominant_branch",
];

impl CsvRow for SweepRow {
    fn header() -> &'static [&'static str] {
        &SWEEP_HEADER
    }

    fn fields(&self) -> Vec<String> {
        vec![
            fmt_real(self.re_f),
            fmt_real(self.im_f),
            fmt_real(self.g),
            self.realizable.to_string(),
            self.honest_feasible.to_string(),
            fmt_opt(self.b_ot),
            fmt_opt(self.a_test_bound),
            fmt_opt(self.a_notest_overall),
            fmt_opt(self.a_notest_p01),
            fmt_opt(self.a_notest_p2),
            self.dominant_branch.clone().unwrap_or_default(),
        ]
    }
}

/// Evaluate every closed form at one point. Values are present iff the
/// overlaps are realizable.
pub fn sweep_row(p: &OverlapParams) -> Result<SweepRow> {
    let mut row = SweepRow {
        re_f: p.re_f,
        im_f: p.im_f,
        g: p.g,
        realizable: p.is_realizable(),
        honest_feasible: p.is_honest_feasible(),
        b_ot: None,
        a_test_bound: None,
        a_notest_overall: None,
        a_notest_p01: None,
        a_notest_p2: None,
        dominant_branch: None,
    };
    if row.realizable {
        let notest = alice_notest_closed_form(p)?;
        row.b_ot = Some(bob_cheat_closed_form(p)?);
        row.a_test_bound = Some(alice_test_bound_closed_form(p));
        row.a_notest_overall = Some(notest.overall);
        row.a_notest_p01 = Some(notest.p01);
        row.a_notest_p2 = Some(notest.p2);
        row.dominant_branch = Some(notest.dominant_branch.to_string());
    }
    Ok(row)
}

/// `(2i - (n-1)) / (3(n-1))` for `i = 0..n`.
pub fn grid_values(n: usize) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(Error::OutOfRange(format!("grid must be at least 2, got {n}")));
    }
    let m = (n - 1) as f64;
    Ok((0..n).map(|i| (2.0 * i as f64 - m) / (3.0 * m)).collect())
}

/// Points in lexicographic order of `(re_f, im_f, g)`.
pub fn sweep_points(plane: Plane, n: usize) -> Result<Vec<OverlapParams>> {
    let v = grid_values(n)?;
    let zero = [0.0];
    let (res, ims): (&[f64], &[f64]) = match plane {
        Plane::ReFG => (&v, &zero),
        Plane::ImFG => (&zero, &v),
        Plane::ThreeD => (&v, &v),
    };
    let mut pts = Vec::with_capacity(res.len() * ims.len() * v.len());
    for &re in res {
        for &im in ims {
            for &g in &v {
                pts.push(OverlapParams::new(re, im, g));
            }
        }
    }
    Ok(pts)
}

pub fn sweep(plane: Plane, n: usize) -> Result<Vec<SweepRow>> {
    sweep_points(plane, n)?.par_iter().map(sweep_row).collect()
}

/// Read rows back from the CSV layout.
pub fn parse_sweep_csv<R: Read>(input: R) -> Result<Vec<SweepRow>> {
    let mut reader = csv::Reader::from_reader(input);
    let header: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
    if header != SWEEP_HEADER {
        return Err(Error::Parse(format!("unexpected sweep header {header:?}")));
    }
    reader
        .records()
        .map(|rec| {
            let rec = rec?;
            let f = |i: usize| rec.get(i).unwrap_or("");
            Ok(SweepRow {
                re_f: parse_real(f(0))?,
                im_f: parse_real(f(1))?,
                g: parse_real(f(2))?,
                realizable: parse_flag(f(3))?,
                honest_feasible: parse_flag(f(4))?,
                b_ot: parse_opt(f(5))?,
                a_test_bound: parse_opt(f(6))?,
                a_notest_overall: parse_opt(f(7))?,
                a_notest_p01: parse_opt(f(8))?,
                a_notest_p2: parse_opt(f(9))?,
                dominant_branch: (!f(10).is_empty()).then(|| f(10).to_string()),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_by_three_plane() {
        let rows = sweep(Plane::ReFG, 3).unwrap();
        assert_eq!(rows.len(), 9);
        let origin = rows.iter().find(|r| r.re_f == 0.0 && r.g == 0.0).unwrap();
        assert!((origin.b_ot.unwrap() - 1.0).abs() < 1e-15);
        assert!((origin.a_notest_overall.unwrap() - 1.0 / 3.0).abs() < 1e-12);
        let q = rows
            .iter()
            .find(|r| r.re_f == 1.0 / 3.0 && r.g == -1.0 / 3.0)
            .unwrap();
        assert!((q.b_ot.unwrap() - 0.75).abs() < 1e-12);
        assert!((q.a_notest_overall.unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn lexicographic_order() {
        let rows = sweep(Plane::ThreeD, 4).unwrap();
        assert_eq!(rows.len(), 64);
        for w in rows.windows(2) {
            let a = (w[0].re_f, w[0].im_f, w[0].g);
            let b = (w[1].re_f, w[1].im_f, w[1].g);
            assert!(a < b);
        }
    }

    #[test]
    fn unrealizable_rows_are_empty() {
        let row = sweep_row(&OverlapParams::new(0.6, 0.0, 0.0)).unwrap();
        assert!(!row.realizable);
        assert!(row.b_ot.is_none() && row.dominant_branch.is_none());
    }

    #[test]
    fn hourglass_region_is_branch_iii() {
        let rows = sweep(Plane::ReFG, 61).unwrap();
        let mut seen = 0;
        for r in rows.iter().filter(|r| r.re_f > 0.0) {
            let (f, g) = (r.re_f, r.g);
            if g > f + 1e-9 && g < 1.0 / 3.0 - 2.0 * f - 1e-9 {
                assert_eq!(r.dominant_branch.as_deref(), Some("(iii)"), "F={f} G={g}");
                seen += 1;
            }
        }
        assert!(seen > 50);
    }

    #[test]
    fn rejects_tiny_grid() {
        assert!(sweep(Plane::ReFG, 1).is_err());
        assert!("xy".parse::<Plane>().is_err());
    }
}
