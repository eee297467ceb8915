//! Testing subprotocol: the sender transmits a sequence of states, the
//! receiver picks a random subset, the sender declares those states and the
//! receiver aborts on any outcome the declared state could not produce.

use rand::seq::index::sample;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::kit::{cyclic_to_lex, kit};
use super::{lex_index, random_pair, sample_index, Cheat, Direction, Injection, Mode, PartyStrategy, Role};
use crate::error::{Error, Result};
use crate::linalg::{contract, CVec, Keep};
use crate::measurements::Povm;

pub const DEFAULT_TEST_FRACTION: f64 = 0.5;

/// Born probabilities below this count as impossible outcomes.
const IMPOSSIBLE_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TestReport {
    pub aborted: bool,
    pub mismatches: usize,
    pub tested: usize,
}

enum Prepared {
    /// A state together with its true label.
    Labeled(usize, CVec),
    /// A state with no honest label.
    Unlabeled(CVec),
    Entangled,
}

/// Run the subprotocol for `n_rounds` states. Alice is the sender in the
/// direct protocol and Bob in the reversed one; `sender.role` selects which.
pub fn testing_subprotocol(
    n_rounds: usize,
    test_fraction: f64,
    sender: PartyStrategy,
    seed: u64,
) -> Result<TestReport> {
    if !(test_fraction > 0.0 && test_fraction < 1.0) {
        return Err(Error::OutOfRange(format!(
            "test fraction {test_fraction} is not strictly between 0 and 1"
        )));
    }
    let direction = match sender.role {
        Role::Alice => Direction::Direct,
        Role::Bob => Direction::Reversed,
    };
    sender.validate(sender.role, direction)?;
    let k = kit();
    let (labels, receiver, register, joint): (&[CVec], &Povm, usize, &CVec) = match direction {
        Direction::Direct => (&k.qutrit_lex, &k.elimination, 4, &k.direct_joint),
        _ => (&k.reversed, &k.receiver_lex, 6, &k.reversed_joint),
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let prepared: Vec<Prepared> = (0..n_rounds)
        .map(|_| match (direction, sender.mode) {
            (Direction::Direct, Mode::Honest) => {
                let x = lex_index(random_pair(&mut rng));
                Prepared::Labeled(x, labels[x].clone())
            }
            (_, Mode::Honest) => {
                let s = rng.gen_range(0..6);
                Prepared::Labeled(s, labels[s].clone())
            }
            (_, Mode::Cheat(Cheat::Injection(inj))) => {
                let j = match inj {
                    Injection::Uniform => rng.gen_range(0..3),
                    Injection::Fixed(j) => j,
                };
                Prepared::Unlabeled(CVec::basis(3, j))
            }
            (_, Mode::Cheat(Cheat::EigenvectorInjection)) => {
                Prepared::Unlabeled(k.eigen_lex[rng.gen_range(0..4)].clone())
            }
            _ => Prepared::Entangled,
        })
        .collect();

    let n_test = ((n_rounds as f64) * test_fraction).round() as usize;
    let mut mismatches = 0;
    for i in sample(&mut rng, n_rounds, n_test) {
        let (declared, state) = match &prepared[i] {
            Prepared::Labeled(label, psi) => (*label, psi.clone()),
            Prepared::Unlabeled(psi) => (rng.gen_range(0..labels.len()), psi.clone()),
            Prepared::Entangled => {
                // Measure the kept register; the transmitted qutrit collapses
                // onto the matching honest state.
                let branches: Vec<CVec> = (0..register)
                    .map(|m| {
                        contract(joint, (register, 3), Keep::Second, &CVec::basis(register, m))
                            .expect("dimensions match")
                    })
                    .collect();
                let probs: Vec<f64> = branches.iter().map(CVec::norm_sqr).collect();
                let m = sample_index(&mut rng, &probs);
                let declared = match direction {
                    Direction::Direct => cyclic_to_lex(m),
                    _ => m,
                };
                (declared, branches[m].normalized())
            }
        };
        let outcome = sample_index(&mut rng, &receiver.probabilities(&state));
        if receiver.probabilities(&labels[declared])[outcome] <= IMPOSSIBLE_TOL {
            mismatches += 1;
        }
    }
    Ok(TestReport {
        aborted: mismatches > 0,
        mismatches,
        tested: n_test,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn honest_senders_pass() {
        for role in [Role::Alice, Role::Bob] {
            let r = testing_subprotocol(400, 0.3, PartyStrategy::honest(role), 1).unwrap();
            assert_eq!(r, TestReport { aborted: false, mismatches: 0, tested: 120 });
        }
    }

    #[test]
    fn entangled_senders_pass() {
        for role in [Role::Alice, Role::Bob] {
            let s = PartyStrategy::cheat(role, Cheat::Entangled);
            let r = testing_subprotocol(2000, 0.5, s, 2).unwrap();
            assert_eq!(r.mismatches, 0);
            assert_eq!(r.tested, 1000);
        }
    }

    #[test]
    fn naive_injection_is_caught() {
        let s = PartyStrategy::cheat(Role::Alice, Cheat::Injection(Injection::Fixed(0)));
        let r = testing_subprotocol(1000, 0.5, s, 3).unwrap();
        assert!(r.aborted);
        assert!(r.mismatches > 100);
    }

    #[test]
    fn bad_fraction() {
        let s = PartyStrategy::honest(Role::Alice);
        assert!(testing_subprotocol(10, 0.0, s, 0).is_err());
        assert!(testing_subprotocol(10, 1.0, s, 0).is_err());
    }
}
