//! Sender cheating when the receiver tests a fraction of the states.
//!
//! To pass every test the sender entangles a kept four-level register with an
//! equal superposition of the honest states,
//! `|Psi> = (1/2) sum_m |m>_A (x) |psi_m>`, and later measures the register to
//! guess which bit index the receiver learned.

use crate::error::Result;
use crate::linalg::{r, CMat, CVec, C64};
use crate::measurements::{
    best_guess_map, condition_on_outcomes, elimination_groups, elimination_povm,
    four_outcome_cheat_measurement, min_error_certificate, regroup_by_guess, OptimalityReport,
    StateEnsemble,
};
use crate::state_family::{qutrit_states, OverlapParams};

/// `1/3 + |ImF|/2 + max(|ReF|, |G|)/2` for `G <= 0`, and
/// `1/3 + |ReF|/2 + max(|ImF|, |G|)/2` for `G > 0`.
pub fn alice_test_bound_closed_form(p: &OverlapParams) -> f64 {
    let (re, im, g) = (p.re_f.abs(), p.im_f.abs(), p.g.abs());
    if p.g <= 0.0 {
        1.0 / 3.0 + im / 2.0 + re.max(g) / 2.0
    } else {
        1.0 / 3.0 + re / 2.0 + im.max(g) / 2.0
    }
}

/// `(1/2) sum_m |m> (x) |psi_m>` for a family given in cyclic order.
pub fn entangled_cheat_state(states: &[CVec]) -> CVec {
    let d = states[0].dim();
    let mut v = vec![C64::default(); 4 * d];
    for (m, psi) in states.iter().enumerate() {
        for (j, amp) in psi.entries().iter().enumerate() {
            v[m * d + j] = amp * 0.5;
        }
    }
    CVec::new(v)
}

/// The sender's register conditioned on the receiver learning bit index
/// `b = 0, 1, 2`, written as functions of `(F, G)`.
pub fn conditional_states(p: &OverlapParams) -> [CMat; 3] {
    let f = p.f() * 3.0;
    let fc = f.conj();
    let g = r(3.0 * p.g);
    let one = r(1.0);
    let z = C64::default();
    let q = |rows: [[C64; 4]; 4]| {
        CMat::from_rows(&rows.iter().map(|row| row.to_vec()).collect::<Vec<_>>()).scale_real(0.25)
    };
    [
        q([[one, f, z, z], [fc, one, z, z], [z, z, one, f], [z, z, fc, one]]),
        q([[one, z, z, fc], [z, one, f, z], [z, fc, one, z], [f, z, z, one]]),
        q([[one, z, g, z], [z, one, z, g], [g, z, one, z], [z, g, z, one]]),
    ]
}

/// The same conditional states obtained by explicitly applying the honest
/// elimination measurement to the entangled state built from the qutrit
/// protocol states; returns `(probability of b, state)` per bit index.
pub fn qutrit_conditional_states_explicit() -> Result<Vec<(f64, CMat)>> {
    let psi = entangled_cheat_state(&qutrit_states());
    let grouped = elimination_povm().coarse_grain(
        &elimination_groups(),
        vec!["b=0".into(), "b=1".into(), "b=2".into()],
    )?;
    Ok(condition_on_outcomes(&psi, (4, 3), &grouped)?
        .into_iter()
        .map(|(prob, state)| (prob, state.expect("every bit index occurs")))
        .collect())
}

fn conditional_ensemble(p: &OverlapParams) -> Result<StateEnsemble> {
    p.require_honest_feasible()?;
    Ok(StateEnsemble::new(conditional_states(p).to_vec(), vec![1.0 / 3.0; 3])?
        .with_labels(vec!["b=0".into(), "b=1".into(), "b=2".into()]))
}

/// Result of the four-outcome measurement strategy.
#[derive(Clone, Debug, PartialEq)]
pub struct AliceTestOracle {
    /// Probability of guessing the receiver's bit index.
    pub value: f64,
    /// `outcome_probabilities[b][k]` = probability of outcome `k` given `b`.
    pub outcome_probabilities: Vec<Vec<f64>>,
    /// Guessed bit index per outcome.
    pub guesses: Vec<usize>,
}

/// Apply the `|+R>, |+L>, |-+>, |-->` measurement to the conditional states
/// (equal priors `1/3`) and guess the most likely bit index per outcome.
/// Requires honest-feasible overlaps so that the conditional states are
/// density operators.
pub fn alice_test_oracle(p: &OverlapParams) -> Result<AliceTestOracle> {
    let ensemble = conditional_ensemble(p)?;
    let measurement = four_outcome_cheat_measurement();
    let (guesses, value) = best_guess_map(&measurement, &ensemble)?;
    let outcome_probabilities = ensemble
        .states
        .iter()
        .map(|mu| measurement.probabilities_mixed(mu))
        .collect();
    Ok(AliceTestOracle {
        value,
        outcome_probabilities,
        guesses,
    })
}

/// Minimum-error certificate for the four-outcome measurement, with each
/// outcome relabelled by the guess it triggers.
pub fn alice_test_certificate(p: &OverlapParams) -> Result<OptimalityReport> {
    let ensemble = conditional_ensemble(p)?;
    let measurement = four_outcome_cheat_measurement();
    let (guesses, _) = best_guess_map(&measurement, &ensemble)?;
    let regrouped = regroup_by_guess(&measurement, &guesses, 3)?;
    Ok(min_error_certificate(&regrouped, &ensemble))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bound_values() {
        assert!((alice_test_bound_closed_form(&OverlapParams::QUTRIT) - 0.5).abs() < 1e-15);
        assert!(
            (alice_test_bound_closed_form(&OverlapParams::new(0.0, 0.0, 0.0)) - 1.0 / 3.0).abs()
                < 1e-15
        );
        let imag = OverlapParams::new(0.0, 1.0 / 3.0, 1.0 / 3.0);
        assert!((alice_test_bound_closed_form(&imag) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn qutrit_outcome_probabilities() {
        let o = alice_test_oracle(&OverlapParams::QUTRIT).unwrap();
        // Outcome order +R, +L, -+, --.
        assert!((o.outcome_probabilities[0][2] - 0.5).abs() < 1e-14);
        assert!((o.outcome_probabilities[0][3] - 0.0).abs() < 1e-14);
        assert!((o.outcome_probabilities[0][0] - 0.25).abs() < 1e-14);
        assert!((o.outcome_probabilities[2][0] - 0.0).abs() < 1e-14);
        assert!((o.value - 0.5).abs() < 1e-14);
    }

    #[test]
    fn origin_is_random_guess() {
        let o = alice_test_oracle(&OverlapParams::new(0.0, 0.0, 0.0)).unwrap();
        assert!((o.value - 1.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn explicit_construction_matches_display() {
        let explicit = qutrit_conditional_states_explicit().unwrap();
        let display = conditional_states(&OverlapParams::QUTRIT);
        for ((prob, mu), shown) in explicit.iter().zip(&display) {
            assert!((prob - 1.0 / 3.0).abs() < 1e-12);
            assert!(mu.max_abs_diff(shown) < 1e-12);
        }
    }

    #[test]
    fn rejects_infeasible() {
        assert!(alice_test_oracle(&OverlapParams::real(0.5, 0.0)).is_err());
    }
}
