//! Semi-random XOT: Alice sends one qutrit, Bob eliminates two of the four
//! possible states and so learns one of `x0, x1, x2`.
//!
//! Transmission indices: `sent` is the lexicographic index of `x` for honest
//! Alice and `j` for an injected `|j>`; `outcome` indexes the elimination
//! measurement (honest Bob) or the lexicographic square-root measurement
//! (cheating Bob).

use rand::Rng;

use super::kit::kit;
use super::{
    from_lex, lex_index, random_pair, sample_index, validate_pair, Cheat, Direction, Injection,
    Mode, PartyStrategy, RoundRecord, RoundSeed, Transmission,
};
use crate::error::Result;
use crate::linalg::CVec;
use crate::measurements::elimination_outcome;

pub fn run_semirandom(
    alice: PartyStrategy,
    bob: PartyStrategy,
    seed: impl Into<RoundSeed>,
) -> Result<RoundRecord> {
    validate_pair(&alice, &bob, Direction::Direct)?;
    let mut rng = seed.into().rng();
    Ok(direct_round(alice, bob, &mut rng))
}

pub(crate) fn direct_round<R: Rng>(alice: PartyStrategy, bob: PartyStrategy, rng: &mut R) -> RoundRecord {
    let k = kit();
    let mut rec = RoundRecord::new(Direction::Direct, alice, bob);

    let state: Option<CVec> = match alice.mode {
        Mode::Honest => {
            let x = random_pair(rng);
            rec.x = Some(x);
            rec.transmission = Some(Transmission {
                sent: Some(lex_index(x)),
                outcome: 0,
            });
            Some(k.qutrit_lex[lex_index(x)].clone())
        }
        Mode::Cheat(Cheat::Injection(inj)) => {
            let j = match inj {
                Injection::Uniform => rng.gen_range(0..3),
                Injection::Fixed(j) => j,
            };
            rec.alice_guess_b = Some(k.injection_guess[j]);
            rec.transmission = Some(Transmission {
                sent: Some(j),
                outcome: 0,
            });
            Some(CVec::basis(3, j))
        }
        // Entangled: the joint statistics are sampled on Bob's side below.
        _ => None,
    };

    let outcome = match (bob.mode, &state) {
        (Mode::Honest, Some(psi)) => sample_index(rng, &k.elimination.probabilities(psi)),
        (Mode::Honest, None) => {
            let probs: Vec<f64> = k.entangled_direct.iter().map(|(p, _)| *p).collect();
            let out = sample_index(rng, &probs);
            let register = sample_index(rng, &k.entangled_direct[out].1);
            rec.alice_guess_b = Some(k.entangled_guess[register]);
            rec.transmission = Some(Transmission {
                sent: None,
                outcome: 0,
            });
            out
        }
        (_, Some(psi)) => {
            let out = sample_index(rng, &k.srm_lex.probabilities(psi));
            rec.bob_guess_x = Some(from_lex(out));
            out
        }
        (_, None) => unreachable!("validate_pair rejects two cheating parties"),
    };
    if bob.is_honest() {
        let (b, value) = elimination_outcome(outcome);
        rec.b = Some(b);
        rec.y = Some(value);
    }
    if let Some(t) = rec.transmission.as_mut() {
        t.outcome = outcome;
    }
    rec
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocol::Role;

    const HA: PartyStrategy = PartyStrategy::honest(Role::Alice);
    const HB: PartyStrategy = PartyStrategy::honest(Role::Bob);

    #[test]
    fn honest_rounds_are_correct() {
        for round in 0..2000 {
            let rec = run_semirandom(HA, HB, RoundSeed::new(3, round)).unwrap();
            assert!(!rec.abort);
            assert_eq!(rec.honest_output_correct(), Some(true));
        }
    }

    #[test]
    fn phi00_never_gives_eliminating_outcomes() {
        // B, D, F eliminate |phi_00>.
        let psi = &kit().qutrit_lex[0];
        let probs = kit().elimination.probabilities(psi);
        for k in [1, 3, 5] {
            assert!(probs[k].abs() < 1e-15);
        }
        for round in 0..3000 {
            let rec = run_semirandom(HA, HB, RoundSeed::new(11, round)).unwrap();
            let t = rec.transmission.unwrap();
            if t.sent == Some(0) {
                assert!(![1, 3, 5].contains(&t.outcome));
            }
        }
    }

    #[test]
    fn same_seed_same_record() {
        let a = run_semirandom(HA, HB, RoundSeed::new(5, 17)).unwrap();
        let b = run_semirandom(HA, HB, RoundSeed::new(5, 17)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn fixed_injection_guess() {
        let alice = PartyStrategy::cheat(Role::Alice, Cheat::Injection(Injection::Fixed(1)));
        let rec = run_semirandom(alice, HB, 9u64).unwrap();
        assert_eq!(rec.alice_guess_b, Some(1));
        assert_eq!(rec.transmission.unwrap().sent, Some(1));
        assert!(rec.x.is_none());
        assert!(rec.b.is_some());
    }

    #[test]
    fn rejects_reversed_strategies() {
        let alice = PartyStrategy::cheat(Role::Alice, Cheat::BasisMeasurement);
        assert!(run_semirandom(alice, HB, 1u64).is_err());
    }
}
