//! Reversed protocol: Bob sends one of six states fixing `(b, x_b)`, Alice
//! measures and obtains both bits.
//!
//! Transmission indices: `sent` is `2 * b + x_b` for honest Bob and the
//! lexicographic index of the targeted pair for an eigenvector injector;
//! `outcome` indexes the lexicographic receiver measurement (honest Alice),
//! the mixed-state discrimination or the computational basis.

use rand::Rng;

use super::kit::{cyclic_pair, cyclic_to_lex, kit};
use super::{
    from_lex, sample_index, validate_pair, Cheat, Direction, Mode, PartyStrategy,
    ReversalLayer, RoundRecord, RoundSeed, Transmission,
};
use crate::error::{Error, Result};
use crate::linalg::CVec;
use crate::state_family::XorBits;

pub fn run_reversed(
    alice: PartyStrategy,
    bob: PartyStrategy,
    seed: impl Into<RoundSeed>,
) -> Result<RoundRecord> {
    validate_pair(&alice, &bob, Direction::Reversed)?;
    let mut rng = seed.into().rng();
    Ok(reversed_round(alice, bob, &mut rng))
}

pub(crate) fn reversed_round<R: Rng>(alice: PartyStrategy, bob: PartyStrategy, rng: &mut R) -> RoundRecord {
    let k = kit();
    let mut rec = RoundRecord::new(Direction::Reversed, alice, bob);

    let (sent, state): (Option<usize>, Option<CVec>) = match bob.mode {
        Mode::Honest => {
            let s = rng.gen_range(0..6);
            rec.b = Some(s / 2);
            rec.y = Some((s % 2) as u8);
            (Some(s), Some(k.reversed[s].clone()))
        }
        Mode::Cheat(Cheat::EigenvectorInjection) => {
            let target = rng.gen_range(0..4);
            rec.bob_guess_x = Some(from_lex(target));
            (Some(target), Some(k.eigen_lex[target].clone()))
        }
        _ => (None, None),
    };

    let outcome = match (alice.mode, &state) {
        (Mode::Honest, Some(psi)) => {
            let out = sample_index(rng, &k.receiver_lex.probabilities(psi));
            rec.x = Some(from_lex(out));
            out
        }
        (Mode::Honest, None) => {
            // Entangled Bob: Alice's outcome, then Bob's measurement of the
            // register he kept.
            let probs: Vec<f64> = k.entangled_reversed.iter().map(|(p, _)| *p).collect();
            let m = sample_index(rng, &probs);
            let guess = sample_index(rng, &k.entangled_reversed[m].1);
            rec.x = Some(cyclic_pair(m));
            rec.bob_guess_x = Some(cyclic_pair(guess));
            cyclic_to_lex(m)
        }
        (Mode::Cheat(Cheat::MixedDiscrimination), Some(psi)) => {
            let out = sample_index(rng, &k.mixed.probabilities(psi));
            rec.alice_guess_b = Some(out);
            out
        }
        (_, Some(psi)) => {
            let out = sample_index(rng, &k.basis.probabilities(psi));
            rec.alice_guess_b = Some(k.basis_guess[out]);
            out
        }
        (_, None) => unreachable!("validate_pair rejects two cheating parties"),
    };
    rec.transmission = Some(Transmission { sent, outcome });
    rec
}

/// Alice announces `t_c = x_c ^ X_c`; honest Bob outputs `y ^ t_b = X_b`.
/// A cheating Alice holds no measured pair and announces `t = X`. A cheating
/// Bob guesses `X = x_guess ^ t`.
pub fn reversed_postprocess(inputs: XorBits, mut record: RoundRecord) -> Result<RoundRecord> {
    if record.direction != Direction::Reversed {
        return Err(Error::OutOfRange(
            "post-processing applies to reversed rounds only".into(),
        ));
    }
    let t = match (record.alice.is_honest(), record.x) {
        (true, Some(x)) => x.xor(inputs),
        (true, None) => {
            return Err(Error::OutOfRange(
                "honest Alice has no measured pair to post-process".into(),
            ))
        }
        (false, _) => inputs,
    };
    let final_bit = match (record.b, record.y) {
        (Some(b), Some(y)) if record.bob.is_honest() => Some(y ^ t.get(b)),
        _ => None,
    };
    record.reversal = Some(ReversalLayer {
        inputs,
        t,
        final_bit,
        bob_guess_inputs: record.bob_guess_x.map(|g| g.xor(t)),
    });
    Ok(record)
}

/// Bob's final bit from the raw messages.
pub fn reversed_final_bit(x: XorBits, inputs: XorBits, b: usize) -> u8 {
    let t = x.xor(inputs);
    x.get(b) ^ t.get(b)
}

/// Every outcome that honest Alice can obtain from each of the six states
/// agrees with the bit Bob encoded.
pub fn reversed_support_consistent() -> bool {
    let k = kit();
    k.reversed.iter().enumerate().all(|(s, psi)| {
        let (b, v) = (s / 2, (s % 2) as u8);
        k.receiver_lex
            .probabilities(psi)
            .iter()
            .enumerate()
            .filter(|(_, &p)| p > 1e-12)
            .all(|(out, _)| from_lex(out).get(b) == v)
    })
}
