//! Invariant checks with residuals. Each group is usable on its own; the
//! full report runs all of them.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::format::{fmt_real, CsvRow};
use super::sweep::grid_values;
use crate::cheat::alice_test::alice_test_certificate;
use crate::cheat::classical::{classical_tradeoff_exact, margin_comparison, quantum_point, Exact};
use crate::cheat::reversed::theta_states;
use crate::cheat::{
    alice_notest_closed_form, alice_notest_oracle, alice_test_bound_closed_form,
    alice_test_oracle, bob_cheat_closed_form, bob_cheat_oracle, reversed_alice_cheat,
    reversed_bob_cheat, TestMode,
};
use crate::error::Result;
use crate::linalg::{gram, CMat, CVec};
use crate::measurements::{
    elimination_outcome, elimination_povm_weighted, min_error_certificate,
    six_dim_projective_lift, square_root_measurement, Povm, StateEnsemble, COMPLETENESS_TOL,
    ELIMINATION_WEIGHT,
};
use crate::protocol::reversed::reversed_support_consistent;
use crate::protocol::wrapper::{
    enumerate_reversed_postprocess, enumerate_round_trip, enumerate_standard_wrapper,
};
use crate::state_family::{
    qutrit_family, qutrit_states, three_qutrit_states, OverlapParams, CYCLIC_ORDER,
};

pub const EXACT_TOL: f64 = 1e-12;
pub const ORACLE_TOL: f64 = 1e-8;
pub const CERTIFICATE_TOL: f64 = 1e-9;
pub const FLOOR_TOL: f64 = 1e-9;
pub const GRAM_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub residual: f64,
    pub tolerance: f64,
    pub detail: String,
}

impl Check {
    /// Passes when `residual <= tolerance`.
    pub fn within(name: impl Into<String>, residual: f64, tolerance: f64, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed: residual <= tolerance,
            residual,
            tolerance,
            detail: detail.into(),
        }
    }

    /// An exact (boolean) check; the residual is 0 or 1.
    pub fn exact(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed,
            residual: if passed { 0.0 } else { 1.0 },
            tolerance: 0.0,
            detail: detail.into(),
        }
    }

    fn failed(name: impl Into<String>, err: impl std::fmt::Display) -> Self {
        Self {
            name: name.into(),
            passed: false,
            residual: f64::INFINITY,
            tolerance: 0.0,
            detail: err.to_string(),
        }
    }
}

impl CsvRow for Check {
    fn header() -> &'static [&'static str] {
        &["name", "passed", "residual", "tolerance", "detail"]
    }

    fn fields(&self) -> Vec<String> {
        vec![
            self.name.clone(),
            self.passed.to_string(),
            fmt_real(self.residual),
            fmt_real(self.tolerance),
            self.detail.clone(),
        ]
    }
}

/// Turn an error into a failed check instead of aborting the report.
fn guard(name: &str, f: impl FnOnce() -> Result<Check>) -> Check {
    f().unwrap_or_else(|e| Check::failed(name, e))
}

fn guard_many(name: &str, f: impl FnOnce() -> Result<Vec<Check>>) -> Vec<Check> {
    f().unwrap_or_else(|e| vec![Check::failed(name, e)])
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VerifyOptions {
    /// Weight of each elimination operator; anything but the true value
    /// breaks completeness.
    pub elimination_weight: f64,
    pub oracle_points: usize,
    pub certificate_points: usize,
    pub floor_grid: usize,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            elimination_weight: ELIMINATION_WEIGHT,
            oracle_points: 200,
            certificate_points: 20,
            floor_grid: 201,
            seed: 42,
        }
    }
}

/// Uniform Fourier weights on the simplex, mapped to `(ReF, ImF, G)`.
pub fn random_realizable_points(n: usize, seed: u64) -> Vec<OverlapParams> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let e: [f64; 4] = std::array::from_fn(|_| -(1.0 - rng.gen::<f64>()).ln());
            let total: f64 = e.iter().sum();
            let w = e.map(|x| x / total);
            OverlapParams::new(w[0] - w[2], w[3] - w[1], (w[0] + w[2]) - (w[1] + w[3]))
        })
        .collect()
}

/// Rejection-sampled points with `|F| <= 1/3` and `|G| <= 1/3`.
pub fn random_feasible_points(n: usize, seed: u64) -> Vec<OverlapParams> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let third = 1.0 / 3.0;
    let mut pts = Vec::with_capacity(n);
    while pts.len() < n {
        let p = OverlapParams::new(
            rng.gen_range(-third..=third),
            rng.gen_range(-third..=third),
            rng.gen_range(-third..=third),
        );
        if p.is_honest_feasible() {
            pts.push(p);
        }
    }
    pts
}

/// Points where the four-outcome measurement is minimum-error: real `F`
/// with `G <= 0, |F| <= |G|`, or imaginary `F` with `G >= 0, |F| <= G`.
/// Alternates between the two slices.
pub fn random_certificate_points(n: usize, seed: u64) -> Vec<OverlapParams> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|i| {
            let g = rng.gen_range(0.0..=1.0 / 3.0);
            let f = rng.gen_range(-g..=g);
            if i % 2 == 0 {
                OverlapParams::new(f, 0.0, -g)
            } else {
                OverlapParams::new(0.0, f, g)
            }
        })
        .collect()
}

/// Completeness, positivity and unambiguity of the elimination measurement,
/// and its six-dimensional projective lift.
pub fn measurement_checks(weight: f64) -> Vec<Check> {
    let povm = elimination_povm_weighted(weight);
    let mut out = vec![Check::within(
        "elimination POVM completeness",
        povm.completeness_error(),
        COMPLETENESS_TOL,
        format!("operator weight {weight}"),
    )];
    out.push(Check::exact(
        "elimination POVM positivity",
        povm.operators.iter().all(CMat::is_psd),
        "every operator positive semidefinite",
    ));
    let excluded = CYCLIC_ORDER
        .iter()
        .zip(qutrit_states())
        .flat_map(|(bits, psi)| {
            let probs = povm.probabilities(&psi);
            (0..6)
                .filter(move |&k| {
                    let (bit, value) = elimination_outcome(k);
                    bits.get(bit) != value
                })
                .map(move |k| probs[k].abs())
        })
        .fold(0.0, f64::max);
    out.push(Check::within(
        "elimination outcomes are unambiguous",
        excluded,
        EXACT_TOL,
        "largest probability of an outcome contradicting the sent pair",
    ));
    let lift = six_dim_projective_lift();
    let lift_residual = (0..6)
        .map(|k| {
            let v = &lift[k];
            let cut = CVec::new(v.entries()[..3].to_vec());
            cut.projector().max_abs_diff(&povm.operators[k])
        })
        .fold(0.0, f64::max);
    out.push(Check::within(
        "projective lift reproduces the elimination operators",
        lift_residual,
        EXACT_TOL,
        "restriction of six orthonormal projectors to the qutrit",
    ));
    out
}

/// Closed-form values at the qutrit point and its family's overlaps.
pub fn exact_values() -> Vec<Check> {
    let q = OverlapParams::QUTRIT;
    let family = qutrit_family();
    let (f, g) = family.overlaps();
    let mut out = vec![Check::within(
        "qutrit family overlaps (F, G) = (1/3, -1/3)",
        (f - q.f()).norm().max((g.re - q.g).abs()).max(g.im.abs()),
        EXACT_TOL,
        format!("F = {f}, G = {g}"),
    )];
    out.push(guard("B_OT(1/3, -1/3) = 0.75", || {
        let v = bob_cheat_closed_form(&q)?;
        Ok(Check::within("B_OT(1/3, -1/3) = 0.75", (v - 0.75).abs(), EXACT_TOL, format!("B_OT = {v}")))
    }));
    let a = alice_test_bound_closed_form(&q);
    out.push(Check::within(
        "A_OT with testing (1/3, -1/3) = 0.5",
        (a - 0.5).abs(),
        EXACT_TOL,
        format!("bound = {a}"),
    ));
    out.push(guard("A_OT without testing (1/3, -1/3) = 0.5", || {
        let v = alice_notest_closed_form(&q)?.overall;
        Ok(Check::within(
            "A_OT without testing (1/3, -1/3) = 0.5",
            (v - 0.5).abs(),
            EXACT_TOL,
            format!("max = {v}"),
        ))
    }));
    out
}

/// Closed forms against their numerical oracles at random points. The
/// four-outcome oracle needs honest-feasible overlaps, so it runs on a
/// separate feasible sample.
pub fn oracle_equivalence(n: usize, seed: u64) -> Vec<Check> {
    guard_many("oracle equivalence", || {
        let mut b_worst: f64 = 0.0;
        let mut notest_worst: f64 = 0.0;
        for p in random_realizable_points(n, seed) {
            b_worst = b_worst.max((bob_cheat_closed_form(&p)? - bob_cheat_oracle(&p)?).abs());
            let cf = alice_notest_closed_form(&p)?;
            let or = alice_notest_oracle(&p)?;
            notest_worst = notest_worst
                .max((cf.lambda00.max(cf.lambda01) - or.p01).abs())
                .max((cf.p2 - or.p2).abs());
        }
        let mut a_worst: f64 = 0.0;
        for p in random_feasible_points(n, seed ^ 0x5eed) {
            a_worst = a_worst.max((alice_test_bound_closed_form(&p) - alice_test_oracle(&p)?.value).abs());
        }
        Ok(vec![
            Check::within(
                "B_OT closed form vs square-root measurement",
                b_worst,
                ORACLE_TOL,
                format!("{n} random realizable points"),
            ),
            Check::within(
                "A_OT testing bound vs four-outcome measurement",
                a_worst,
                ORACLE_TOL,
                format!("{n} random honest-feasible points"),
            ),
            Check::within(
                "A_OT no-testing closed forms vs eigenvalue oracle",
                notest_worst,
                ORACLE_TOL,
                format!("{n} random realizable points"),
            ),
        ])
    })
}

/// A small rotation in the `(0, 1)` plane.
fn rotation(angle: f64) -> CMat {
    let (s, c) = angle.sin_cos();
    CMat::from_real_rows(&[&[c, -s, 0.0], &[s, c, 0.0], &[0.0, 0.0, 1.0]])
}

fn certificate_check(name: &str, p: &Povm, e: &StateEnsemble) -> Check {
    let rep = min_error_certificate(p, e);
    Check::within(name, rep.max_violation, CERTIFICATE_TOL, format!("min gap {:e}", rep.min_gap))
}

/// Minimum-error optimality certificates, plus a perturbed measurement that
/// must fail.
pub fn certificates(n: usize, seed: u64) -> Vec<Check> {
    guard_many("optimality certificates", || {
        let ensemble = StateEnsemble::uniform_pure(qutrit_states())?;
        let srm = square_root_measurement(&ensemble)?;
        let mut out = vec![certificate_check("square-root measurement on the qutrit family", &srm, &ensemble)];

        let mut worst: f64 = 0.0;
        for p in random_certificate_points(n, seed) {
            worst = worst.max(alice_test_certificate(&p)?.max_violation);
        }
        out.push(Check::within(
            "four-outcome measurement certificate",
            worst,
            CERTIFICATE_TOL,
            format!("{n} random points on the real-F and imaginary-F slices"),
        ));

        let rev = reversed_alice_cheat()?;
        out.push(Check::within(
            "reversed mixed-state discrimination certificate",
            rev.mixed_certificate.max_violation,
            CERTIFICATE_TOL,
            format!("success {}", rev.mixed_value),
        ));
        out.push(Check::within(
            "reversed basis measurement certificate",
            rev.basis_certificate.max_violation,
            CERTIFICATE_TOL,
            format!("success {}", rev.basis_value),
        ));

        let perturbed = srm.conjugated(&rotation(0.05));
        let rep = min_error_certificate(&perturbed, &ensemble);
        out.push(Check::exact(
            "perturbed measurement fails its certificate",
            !rep.optimal,
            format!("max violation {:e}", rep.max_violation),
        ));
        Ok(out)
    })
}

/// Minimum of `B_OT` on the `ReF-G` and `ImF-G` planes of the honest-feasible
/// square, and the points attaining it.
pub fn floor_property(grid: usize) -> Vec<Check> {
    guard_many("B_OT floor", || {
        let v = grid_values(grid)?;
        let mut min = f64::INFINITY;
        let mut minimizers = Vec::new();
        for &a in &v {
            for &g in &v {
                for p in [OverlapParams::new(a, 0.0, g), OverlapParams::new(0.0, a, g)] {
                    if !p.is_honest_feasible() {
                        continue;
                    }
                    let b = bob_cheat_closed_form(&p)?;
                    min = min.min(b);
                    if b <= 0.75 + FLOOR_TOL {
                        minimizers.push(p);
                    }
                }
            }
        }
        let third = 1.0 / 3.0;
        let corners = [
            OverlapParams::new(third, 0.0, -third),
            OverlapParams::new(-third, 0.0, -third),
            OverlapParams::new(0.0, third, third),
            OverlapParams::new(0.0, -third, third),
        ];
        let at_corners = minimizers.len() == corners.len()
            && corners.iter().all(|c| minimizers.contains(c));
        Ok(vec![
            Check::within(
                "B_OT never below 3/4",
                (0.75 - min).max(0.0),
                FLOOR_TOL,
                format!("grid {grid}x{grid} per plane, minimum {min}"),
            ),
            Check::exact(
                "B_OT minimum attained exactly at the four corners",
                at_corners,
                format!("{} grid minimizers", minimizers.len()),
            ),
        ])
    })
}

/// Exhaustive enumeration of both classical post-processing layers.
pub fn reduction_correctness() -> Vec<Check> {
    let w = enumerate_standard_wrapper();
    let (rev_cases, rev_ok, rev_uniform) = enumerate_reversed_postprocess();
    let (trip_cases, trip_ok) = enumerate_round_trip();
    vec![
        Check::exact(
            "standard wrapper output equals X_B",
            w.correct == w.cases,
            format!("{}/{} cases", w.correct, w.cases),
        ),
        Check::exact(
            "wrapper message r independent of the choice",
            w.r_independent_of_choice,
            format!("r counts {:?}", w.r_counts),
        ),
        Check::exact(
            "uniform posterior on the unchosen bits",
            w.uniform_views == w.views,
            format!("{}/{} views", w.uniform_views, w.views),
        ),
        Check::exact(
            "reversed post-processing gives X_b = x_b xor t_b",
            rev_ok == rev_cases && rev_uniform,
            format!("{rev_ok}/{rev_cases} cases"),
        ),
        Check::exact(
            "standard and semi-random round trip",
            trip_ok == trip_cases,
            format!("{trip_ok}/{trip_cases} cases"),
        ),
    ]
}

/// `3A + 4B` along the classical line and at the quantum point.
pub fn classical_baseline() -> Vec<Check> {
    let five = Exact::from_integer(5);
    let line_ok = (0..=100).all(|i| {
        classical_tradeoff_exact(Exact::new(i, 100)).is_ok_and(|p| p.metric == five)
    });
    let q = quantum_point();
    let m = margin_comparison();
    vec![
        Check::exact("classical line has 3A + 4B = 5", line_ok, "101 exact points s = i/100"),
        Check::exact(
            "quantum point has 3A + 4B = 9/2",
            q.metric == Exact::new(9, 2),
            format!("A = {}, B = {}", q.a, q.b),
        ),
        Check::exact(
            "XOT margin exceeds the 1-out-of-2 OT margin",
            m.xot_advantage_larger
                && m.xot_margin == Exact::from_integer(1)
                && m.ot_margin == Exact::new(147, 1000),
            format!("{} > {}", m.xot_margin, m.ot_margin),
        ),
    ]
}

/// The three-qutrit encoding and the reversed protocol's conditional states
/// share the qutrit family's Gram matrix.
pub fn gram_equivalence() -> Vec<Check> {
    let qutrit = gram(&qutrit_states());
    let three = gram(&three_qutrit_states());
    let theta = gram(&theta_states().into_iter().map(|(_, v)| v).collect::<Vec<_>>());
    vec![
        Check::within(
            "three-qutrit Gram matrix equals the qutrit Gram matrix",
            three.max_abs_diff(&qutrit),
            GRAM_TOL,
            "dimension 27 vs 3",
        ),
        Check::within(
            "reversed conditional states share the qutrit Gram matrix",
            theta.max_abs_diff(&qutrit),
            GRAM_TOL,
            "states left with Bob after each receiver outcome",
        ),
    ]
}

/// Cheating values and supports of the reversed protocol.
pub fn reversed_checks() -> Vec<Check> {
    guard_many("reversed protocol", || {
        let notest = reversed_bob_cheat(TestMode::AliceNoTest)?;
        let tests = reversed_bob_cheat(TestMode::AliceTests)?;
        let alice = reversed_alice_cheat()?;
        Ok(vec![
            Check::within(
                "reversed cheating Bob = 3/4 with and without testing",
                (notest - 0.75).abs().max((tests - 0.75).abs()),
                EXACT_TOL,
                format!("{notest}, {tests}"),
            ),
            Check::within(
                "reversed cheating Alice = 1/2 for both measurements",
                (alice.mixed_value - 0.5).abs().max((alice.basis_value - 0.5).abs()),
                EXACT_TOL,
                format!("{}, {}", alice.mixed_value, alice.basis_value),
            ),
            Check::exact(
                "reversed receiver outcomes consistent with the sent bit",
                reversed_support_consistent(),
                "all six states",
            ),
        ])
    })
}

/// Every check in a fixed order.
pub fn run_verify(opts: &VerifyOptions) -> Vec<Check> {
    let mut out = measurement_checks(opts.elimination_weight);
    out.extend(exact_values());
    out.extend(oracle_equivalence(opts.oracle_points, opts.seed));
    out.extend(certificates(opts.certificate_points, opts.seed));
    out.extend(floor_property(opts.floor_grid));
    out.extend(reduction_correctness());
    out.extend(classical_baseline());
    out.extend(gram_equivalence());
    out.extend(reversed_checks());
    out
}

pub fn all_passed(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.passed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_report_passes() {
        let opts = VerifyOptions {
            oracle_points: 10,
            certificate_points: 3,
            floor_grid: 31,
            ..VerifyOptions::default()
        };
        let checks = run_verify(&opts);
        let failed: Vec<_> = checks.iter().filter(|c| !c.passed).collect();
        assert!(failed.is_empty(), "{failed:#?}");
        assert!(checks.iter().any(|c| c.name == "B_OT(1/3, -1/3) = 0.75"));
    }

    #[test]
    fn tampered_weight_fails_completeness() {
        let checks = measurement_checks(0.26);
        let c = checks
            .iter()
            .find(|c| c.name == "elimination POVM completeness")
            .unwrap();
        assert!(!c.passed);
        assert!((c.residual - 0.04).abs() < 1e-12);
    }

    #[test]
    fn samplers_stay_in_their_regions() {
        assert!(random_realizable_points(500, 1).iter().all(OverlapParams::is_realizable));
        assert!(random_feasible_points(500, 1).iter().all(OverlapParams::is_honest_feasible));
        assert!(random_certificate_points(50, 1).iter().all(OverlapParams::is_honest_feasible));
        assert_eq!(random_realizable_points(5, 7), random_realizable_points(5, 7));
    }
}
