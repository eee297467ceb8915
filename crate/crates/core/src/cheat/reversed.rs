//! Cheating in the reversed protocol, where Bob sends one of six states and
//! Alice measures.

use crate::error::Result;
use crate::linalg::{contract, r, CMat, CVec, Keep, C64};
use crate::measurements::{
    best_guess_map, computational_basis_povm, identity_map, max_eigenvectors,
    min_error_certificate, mixed_discrimination_povm, regroup_by_guess, reversed_receiver_povm,
    square_root_measurement, success_probability, OptimalityReport, StateEnsemble,
};
use crate::state_family::reversed_states;

/// Whether Alice checks a fraction of the received states against Bob's
/// declarations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TestMode {
    AliceTests,
    AliceNoTest,
}

/// `(1/sqrt 6) sum_s |s>_B (x) |chi_s>`: Bob keeps a six-level register
/// entangled with a uniform superposition of his six honest states.
pub fn reversed_cheat_state() -> CVec {
    let states = reversed_states();
    let w = 1.0 / 6f64.sqrt();
    let mut v = vec![C64::default(); 18];
    for (s, ls) in states.iter().enumerate() {
        for (j, amp) in ls.state.entries().iter().enumerate() {
            v[s * 3 + j] = amp * w;
        }
    }
    CVec::new(v)
}

/// Bob's register after Alice's honest measurement returns each pair, in
/// cyclic order, as `(probability, normalized state)`.
pub fn theta_states() -> Vec<(f64, CVec)> {
    let joint = reversed_cheat_state();
    reversed_receiver_povm()
        .operators
        .iter()
        .map(|op| {
            // Each operator is |Phi><Phi| with Phi = (|0> +- |1> +- |2>)/2.
            let phi = CVec::new((0..3).map(|j| op[(j, 0)] / op[(0, 0)].sqrt()).collect());
            let v = contract(&joint, (6, 3), Keep::First, &phi).expect("dimensions match");
            let prob = v.norm_sqr();
            (prob, v.scale(r(1.0 / prob.sqrt())))
        })
        .collect()
}

/// Bob's probability of learning both of Alice's output bits.
pub fn reversed_bob_cheat(mode: TestMode) -> Result<f64> {
    match mode {
        TestMode::AliceNoTest => Ok(max_eigenvectors(&reversed_receiver_povm())?
            .iter()
            .map(|(value, _)| *value)
            .fold(f64::NEG_INFINITY, f64::max)),
        TestMode::AliceTests => {
            let (priors, kets): (Vec<f64>, Vec<CVec>) = theta_states().into_iter().unzip();
            let ensemble = StateEnsemble::pure(kets, priors)?;
            let srm = square_root_measurement(&ensemble)?;
            success_probability(&srm, &ensemble, &identity_map(4))
        }
    }
}

/// `rho_{x_b}`: equal mixture of the two states carrying bit index `b`.
pub fn bit_index_states() -> Vec<CMat> {
    let states = reversed_states();
    (0..3)
        .map(|b| (&states[2 * b].state.projector() + &states[2 * b + 1].state.projector()).scale_real(0.5))
        .collect()
}

pub fn bit_index_ensemble() -> Result<StateEnsemble> {
    Ok(StateEnsemble::new(bit_index_states(), vec![1.0 / 3.0; 3])?
        .with_labels(vec!["b=0".into(), "b=1".into(), "b=2".into()]))
}

/// Alice's two optimal strategies for guessing Bob's bit index.
#[derive(Clone, Debug, PartialEq)]
pub struct ReversedAliceReport {
    pub mixed_value: f64,
    pub basis_value: f64,
    /// Guessed bit index for basis outcomes `|0>, |1>, |2>`.
    pub basis_guesses: Vec<usize>,
    pub mixed_certificate: OptimalityReport,
    pub basis_certificate: OptimalityReport,
}

pub fn reversed_alice_cheat() -> Result<ReversedAliceReport> {
    let ensemble = bit_index_ensemble()?;
    let mixed = mixed_discrimination_povm();
    let mixed_value = success_probability(&mixed, &ensemble, &identity_map(3))?;
    let basis = computational_basis_povm(3);
    let (basis_guesses, basis_value) = best_guess_map(&basis, &ensemble)?;
    let regrouped = regroup_by_guess(&basis, &basis_guesses, 3)?;
    Ok(ReversedAliceReport {
        mixed_value,
        basis_value,
        mixed_certificate: min_error_certificate(&mixed, &ensemble),
        basis_certificate: min_error_certificate(&regrouped, &ensemble),
        basis_guesses,
    })
}
