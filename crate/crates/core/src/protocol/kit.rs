//! States, measurements and cheating tables shared by every round, built once.

use std::sync::OnceLock;

use crate::cheat::alice_test::{alice_test_oracle, entangled_cheat_state};
use crate::cheat::reversed::{reversed_cheat_state, theta_states};
use crate::linalg::{CMat, CVec};
use crate::measurements::{
    best_guess_map, computational_basis_povm, condition_on_outcomes, elimination_groups,
    elimination_povm, max_eigenvectors, mixed_discrimination_povm, reversed_receiver_povm,
    square_root_measurement, Povm, StateEnsemble,
};
use crate::state_family::{qutrit_state, qutrit_states, reversed_states, OverlapParams, XorBits, CYCLIC_ORDER};

use super::lex_index;

pub(crate) struct Kit {
    /// `|phi_x>` by lexicographic index of `x`.
    pub qutrit_lex: Vec<CVec>,
    pub elimination: Povm,
    /// Bit index a basis-state injector guesses for `|0>, |1>, |2>`.
    pub injection_guess: Vec<usize>,
    /// Square-root measurement with outcomes in lexicographic order.
    pub srm_lex: Povm,
    /// Entangled sender against the elimination measurement: per elimination
    /// outcome, its probability and the distribution of the sender's
    /// four-outcome register measurement.
    pub entangled_direct: Vec<(f64, Vec<f64>)>,
    pub entangled_guess: Vec<usize>,
    /// The six reversed states, index `2 * bit + value`.
    pub reversed: Vec<CVec>,
    /// Honest reversed receiver with outcomes in lexicographic order.
    pub receiver_lex: Povm,
    pub mixed: Povm,
    pub basis: Povm,
    pub basis_guess: Vec<usize>,
    /// Top eigenvector of each receiver operator, lexicographic.
    pub eigen_lex: Vec<CVec>,
    /// Entangled reversed sender: per receiver outcome (cyclic order), its
    /// probability and the distribution of the square-root measurement on
    /// the kept register (outcomes in cyclic order).
    pub entangled_reversed: Vec<(f64, Vec<f64>)>,
    /// Joint states of the entangled senders, register first.
    pub direct_joint: CVec,
    pub reversed_joint: CVec,
}

fn reorder_lex(p: &Povm) -> Povm {
    let order: Vec<usize> = XorBits::all().iter().map(|b| b.cyclic_index()).collect();
    Povm::new(
        order.iter().map(|&m| p.operators[m].clone()).collect(),
        order.iter().map(|&m| p.labels[m].clone()).collect(),
    )
    .expect("a permuted POVM is a POVM")
}

impl Kit {
    fn build() -> Self {
        let qutrit_lex: Vec<CVec> = XorBits::all().iter().map(|&b| qutrit_state(b)).collect();
        let elimination = elimination_povm();
        let groups = elimination_groups();

        let injection_guess = (0..3)
            .map(|j| {
                let probs = elimination.probabilities(&CVec::basis(3, j));
                let per_b: Vec<f64> = groups.iter().map(|g| g.iter().map(|&k| probs[k]).sum()).collect();
                let mut best = 0;
                for b in 1..3 {
                    if per_b[b] > per_b[best] + 1e-12 {
                        best = b;
                    }
                }
                best
            })
            .collect();

        let lex_ensemble = StateEnsemble::uniform_pure(qutrit_lex.clone())
            .expect("qutrit states form an ensemble")
            .with_labels(XorBits::all().iter().map(|b| b.to_string()).collect());
        let srm_lex = square_root_measurement(&lex_ensemble).expect("square-root measurement exists");

        let direct_joint = entangled_cheat_state(&qutrit_states());
        let four = crate::measurements::four_outcome_cheat_measurement();
        let entangled_direct = condition_on_outcomes(&direct_joint, (4, 3), &elimination)
            .expect("dimensions match")
            .into_iter()
            .map(|(prob, rho)| {
                let dist = rho.map_or_else(|| vec![0.25; 4], |rho| four.probabilities_mixed(&rho));
                (prob, dist)
            })
            .collect();
        let entangled_guess = alice_test_oracle(&OverlapParams::QUTRIT)
            .expect("qutrit overlaps are honest-feasible")
            .guesses;

        let receiver_lex = reorder_lex(&reversed_receiver_povm());
        let basis = computational_basis_povm(3);
        let basis_ensemble = crate::cheat::reversed::bit_index_ensemble().expect("valid ensemble");
        let (basis_guess, _) = best_guess_map(&basis, &basis_ensemble).expect("dimensions match");
        let eigen_lex = max_eigenvectors(&receiver_lex)
            .expect("receiver operators are Hermitian")
            .into_iter()
            .map(|(_, v)| v)
            .collect();

        let thetas = theta_states();
        let theta_ensemble = StateEnsemble::pure(
            thetas.iter().map(|(_, v)| v.clone()).collect(),
            thetas.iter().map(|(p, _)| *p).collect(),
        )
        .expect("theta states form an ensemble");
        let theta_srm = square_root_measurement(&theta_ensemble).expect("square-root measurement exists");
        let entangled_reversed = thetas
            .iter()
            .map(|(p, v)| (*p, theta_srm.probabilities(v)))
            .collect();

        Kit {
            qutrit_lex,
            elimination,
            injection_guess,
            srm_lex,
            entangled_direct,
            entangled_guess,
            reversed: reversed_states().into_iter().map(|s| s.state).collect(),
            receiver_lex,
            mixed: mixed_discrimination_povm(),
            basis,
            basis_guess,
            eigen_lex,
            entangled_reversed,
            direct_joint,
            reversed_joint: reversed_cheat_state(),
        }
    }

    /// Density operator of the qutrit an entangled sender transmits.
    pub fn entangled_marginal(joint: &CVec, register: usize) -> CMat {
        crate::linalg::partial_trace(&joint.projector(), (register, 3), crate::linalg::Keep::Second)
            .expect("dimensions match")
    }
}

pub(crate) fn kit() -> &'static Kit {
    static KIT: OnceLock<Kit> = OnceLock::new();
    KIT.get_or_init(Kit::build)
}

/// Pair guessed from a cyclic-order outcome index.
pub(crate) fn cyclic_pair(m: usize) -> XorBits {
    CYCLIC_ORDER[m]
}

/// Lexicographic index of a cyclic-order index.
pub(crate) fn cyclic_to_lex(m: usize) -> usize {
    lex_index(CYCLIC_ORDER[m])
}
