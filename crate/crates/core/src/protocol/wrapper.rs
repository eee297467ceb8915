//! Classical post-processing between semi-random and standard XOT.
//!
//! Standard from semi-random: Bob sends `r = (b + 2B) mod 3`, Alice shifts her
//! bits to `x'_c = x_{(c+r) mod 3}` and sends `s_c = x'_c ^ X_c`, Bob outputs
//! `y' = y ^ s_B`.

use rand::Rng;

use super::direct::direct_round;
use super::reversed::reversed_round;
use super::{
    random_pair, validate_pair, Direction, PartyStrategy, RoundRecord, RoundSeed, SemiRandomView,
    StandardLayer,
};
use crate::error::{Error, Result};
use crate::state_family::XorBits;

pub fn wrapper_r(b: usize, choice: usize) -> usize {
    (b + 2 * choice) % 3
}

pub fn wrapper_s(x: XorBits, r: usize, inputs: XorBits) -> XorBits {
    XorBits::new(x.get(r % 3) ^ inputs.x0, x.get((1 + r) % 3) ^ inputs.x1)
}

pub fn wrapper_output(y: u8, s: XorBits, choice: usize) -> u8 {
    y ^ s.get(choice)
}

/// `B` recovered from `r` and a guess of `b`.
pub fn choice_from_r(r: usize, b_guess: usize) -> usize {
    (2 * (r + 3 - b_guess)) % 3
}

/// `X_c = x_{(c+r) mod 3} ^ s_c` from a guess of `x`.
pub fn inputs_from_s(x_guess: XorBits, r: usize, s: XorBits) -> XorBits {
    wrapper_s(x_guess, r, s)
}

/// Apply the wrapper to a finished semi-random round. Cheating parties send
/// uniformly random messages and convert their semi-random guesses.
pub fn wrap_standard<R: Rng>(
    mut record: RoundRecord,
    inputs: XorBits,
    choice: usize,
    rng: &mut R,
) -> Result<RoundRecord> {
    if choice > 2 {
        return Err(Error::OutOfRange(format!("choice B = {choice} is not in 0..3")));
    }
    if record.direction == Direction::Classical {
        return Err(Error::OutOfRange(
            "the wrapper applies to quantum rounds".into(),
        ));
    }
    let r = match record.b {
        Some(b) if record.bob.is_honest() => wrapper_r(b, choice),
        _ => rng.gen_range(0..3),
    };
    let s = match record.x {
        Some(x) if record.alice.is_honest() => wrapper_s(x, r, inputs),
        _ => random_pair(rng),
    };
    let y_prime = match record.y {
        Some(y) if record.bob.is_honest() => Some(wrapper_output(y, s, choice)),
        _ => None,
    };
    record.standard = Some(StandardLayer {
        inputs,
        choice,
        r,
        s,
        y_prime,
        alice_guess_choice: record.alice_guess_b.map(|g| choice_from_r(r, g)),
        bob_guess_inputs: record.bob_guess_x.map(|g| inputs_from_s(g, r, s)),
    });
    Ok(record)
}

fn semirandom_round<R: Rng>(
    direction: Direction,
    alice: PartyStrategy,
    bob: PartyStrategy,
    rng: &mut R,
) -> Result<RoundRecord> {
    validate_pair(&alice, &bob, direction)?;
    match direction {
        Direction::Direct => Ok(direct_round(alice, bob, rng)),
        Direction::Reversed => Ok(reversed_round(alice, bob, rng)),
        Direction::Classical => Err(Error::OutOfRange(
            "the wrapper applies to quantum rounds".into(),
        )),
    }
}

/// Standard XOT with inputs `X` and choice `B`, built on one semi-random
/// round of the given direction.
pub fn standard_from_semirandom(
    inputs: XorBits,
    choice: usize,
    direction: Direction,
    alice: PartyStrategy,
    bob: PartyStrategy,
    seed: impl Into<RoundSeed>,
) -> Result<RoundRecord> {
    let mut rng = seed.into().rng();
    let rec = semirandom_round(direction, alice, bob, &mut rng)?;
    wrap_standard(rec, inputs, choice, &mut rng)
}

/// Semi-random XOT from the standard one: Alice's bits and Bob's index are
/// sampled uniformly and fed to the wrapper as `X` and `B`.
pub fn semirandom_from_standard(
    direction: Direction,
    alice: PartyStrategy,
    bob: PartyStrategy,
    seed: impl Into<RoundSeed>,
) -> Result<RoundRecord> {
    let mut rng = seed.into().rng();
    let inputs = random_pair(&mut rng);
    let b = rng.gen_range(0..3);
    let rec = semirandom_round(direction, alice, bob, &mut rng)?;
    let mut rec = wrap_standard(rec, inputs, b, &mut rng)?;
    let st = rec.standard.expect("wrapper layer was just added");
    rec.relabeled = Some(SemiRandomView {
        x: Some(inputs),
        b: Some(b),
        y: st.y_prime,
        alice_guess_b: st.alice_guess_choice,
        bob_guess_x: st.bob_guess_inputs,
    });
    Ok(rec)
}

/// Exhaustive checks of the wrapper over all messages, with exact counts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WrapperEnumeration {
    pub cases: usize,
    pub correct: usize,
    /// `r_counts[B][r]` over uniform `b`.
    pub r_counts: [[usize; 3]; 3],
    pub r_independent_of_choice: bool,
    /// Bob's views checked and how many had a uniform posterior on the bits
    /// he did not choose.
    pub views: usize,
    pub uniform_views: usize,
}

pub fn enumerate_standard_wrapper() -> WrapperEnumeration {
    let mut cases = 0;
    let mut correct = 0;
    for inputs in XorBits::all() {
        for choice in 0..3 {
            for x in XorBits::all() {
                for b in 0..3 {
                    let r = wrapper_r(b, choice);
                    let s = wrapper_s(x, r, inputs);
                    cases += 1;
                    if wrapper_output(x.get(b), s, choice) == inputs.get(choice) {
                        correct += 1;
                    }
                }
            }
        }
    }

    let mut r_counts = [[0usize; 3]; 3];
    for (choice, row) in r_counts.iter_mut().enumerate() {
        for b in 0..3 {
            row[wrapper_r(b, choice)] += 1;
        }
    }
    let r_independent_of_choice = r_counts.iter().all(|row| *row == r_counts[0]);

    // Bob's view: (B, b, y = x_b, r, s). Count the unknown bit X_{B+1} over all
    // uniformly weighted (X, x) consistent with each view.
    use std::collections::BTreeMap;
    let mut tallies: BTreeMap<(usize, usize, u8, XorBits, u8), [usize; 2]> = BTreeMap::new();
    for choice in 0..3 {
        for b in 0..3 {
            for inputs in XorBits::all() {
                for x in XorBits::all() {
                    let r = wrapper_r(b, choice);
                    let s = wrapper_s(x, r, inputs);
                    let key = (choice, b, x.get(b), s, inputs.get(choice));
                    let hidden = inputs.get((choice + 1) % 3) as usize;
                    tallies.entry(key).or_insert([0, 0])[hidden] += 1;
                }
            }
        }
    }
    let views = tallies.len();
    let uniform_views = tallies.values().filter(|c| c[0] == c[1]).count();

    WrapperEnumeration {
        cases,
        correct,
        r_counts,
        r_independent_of_choice,
        views,
        uniform_views,
    }
}

/// Reversed post-processing over all `(X, x, b)`: number of cases, number
/// where Bob's final bit is `X_b`, and whether `t` is uniform for each `X`.
pub fn enumerate_reversed_postprocess() -> (usize, usize, bool) {
    let mut cases = 0;
    let mut correct = 0;
    let mut t_uniform = true;
    for inputs in XorBits::all() {
        let mut t_counts = [0usize; 4];
        for x in XorBits::all() {
            t_counts[super::lex_index(x.xor(inputs))] += 1;
            for b in 0..3 {
                cases += 1;
                if super::reversed::reversed_final_bit(x, inputs, b) == inputs.get(b) {
                    correct += 1;
                }
            }
        }
        t_uniform &= t_counts.iter().all(|&c| c == 1);
    }
    (cases, correct, t_uniform)
}

/// Semi-random to standard to semi-random over every outer `(X, b)` and
/// inner `(x, b')` consistent with the wrapper: the relabeled output is
/// always `X_b`. Returns `(cases, correct)`.
pub fn enumerate_round_trip() -> (usize, usize) {
    let mut cases = 0;
    let mut correct = 0;
    for outer_x in XorBits::all() {
        for outer_b in 0..3 {
            for inner_x in XorBits::all() {
                for inner_b in 0..3 {
                    let r = wrapper_r(inner_b, outer_b);
                    let s = wrapper_s(inner_x, r, outer_x);
                    let y = wrapper_output(inner_x.get(inner_b), s, outer_b);
                    cases += 1;
                    if y == outer_x.get(outer_b) {
                        correct += 1;
                    }
                }
            }
        }
    }
    (cases, correct)
}
