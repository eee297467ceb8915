//! Classical baselines.
//!
//! `One`: Alice sends one of `x0, x1, x2` of her choice and forgets which.
//! `Two`: Alice sends all three and Bob reads one.
//! `Mixed(s)`: `One` with probability `s`, otherwise `Two`.

use rand::Rng;

use super::{random_pair, validate_pair, Direction, PartyStrategy, RoundRecord, RoundSeed};
use crate::error::{Error, Result};
use crate::state_family::XorBits;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ClassicalProtocol {
    One,
    Two,
    Mixed(f64),
}

pub fn run_classical(
    which: ClassicalProtocol,
    alice: PartyStrategy,
    bob: PartyStrategy,
    seed: impl Into<RoundSeed>,
) -> Result<RoundRecord> {
    validate_pair(&alice, &bob, Direction::Classical)?;
    if let ClassicalProtocol::Mixed(s) = which {
        if !(0.0..=1.0).contains(&s) {
            return Err(Error::OutOfRange(format!("mixing weight s = {s} is outside [0, 1]")));
        }
    }
    let mut rng = seed.into().rng();
    let one = match which {
        ClassicalProtocol::One => true,
        ClassicalProtocol::Two => false,
        ClassicalProtocol::Mixed(s) => rng.gen::<f64>() < s,
    };
    let mut rec = RoundRecord::new(Direction::Classical, alice, bob);
    let x = random_pair(&mut rng);
    rec.x = Some(x);
    if one {
        rec.classical_protocol = Some(1);
        let c = rng.gen_range(0..3);
        if bob.is_honest() {
            rec.b = Some(c);
            rec.y = Some(x.get(c));
        } else {
            // Bob knows x_c and guesses the rest.
            let guess = rng.gen_range(0..2u8);
            rec.bob_guess_x = Some(match c {
                0 => XorBits::new(x.x0, guess),
                1 => XorBits::new(guess, x.x1),
                _ => XorBits::new(guess, guess ^ x.x2()),
            });
        }
        if !alice.is_honest() {
            rec.alice_guess_b = Some(c);
        }
    } else {
        rec.classical_protocol = Some(2);
        if bob.is_honest() {
            let b = rng.gen_range(0..3);
            rec.b = Some(b);
            rec.y = Some(x.get(b));
        } else {
            rec.bob_guess_x = Some(x);
        }
        if !alice.is_honest() {
            rec.alice_guess_b = Some(rng.gen_range(0..3));
        }
    }
    Ok(rec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocol::{Cheat, Role};

    const HA: PartyStrategy = PartyStrategy::honest(Role::Alice);
    const HB: PartyStrategy = PartyStrategy::honest(Role::Bob);
    const CA: PartyStrategy = PartyStrategy::cheat(Role::Alice, Cheat::ClassicalOptimal);
    const CB: PartyStrategy = PartyStrategy::cheat(Role::Bob, Cheat::ClassicalOptimal);

    #[test]
    fn perfect_cheats() {
        for round in 0..300 {
            let r = run_classical(ClassicalProtocol::One, CA, HB, RoundSeed::new(1, round)).unwrap();
            assert_eq!(r.alice_cheat_success(), Some(true));
            let r = run_classical(ClassicalProtocol::Two, HA, CB, RoundSeed::new(1, round)).unwrap();
            assert_eq!(r.bob_cheat_success(), Some(true));
        }
    }

    #[test]
    fn honest_rounds_correct() {
        for which in [ClassicalProtocol::One, ClassicalProtocol::Two, ClassicalProtocol::Mixed(0.4)] {
            for round in 0..300 {
                let r = run_classical(which, HA, HB, RoundSeed::new(2, round)).unwrap();
                assert_eq!(r.honest_output_correct(), Some(true));
            }
        }
    }

    #[test]
    fn bob_in_protocol_one_knows_one_bit() {
        for round in 0..300 {
            let r = run_classical(ClassicalProtocol::One, HA, CB, RoundSeed::new(3, round)).unwrap();
            let (x, g) = (r.x.unwrap(), r.bob_guess_x.unwrap());
            let known = (0..3).filter(|&c| x.get(c) == g.get(c)).count();
            assert!(known == 1 || known == 3);
        }
    }

    #[test]
    fn rejects_quantum_strategies() {
        let sq = PartyStrategy::cheat(Role::Bob, Cheat::SquareRoot);
        assert!(run_classical(ClassicalProtocol::One, HA, sq, 0u64).is_err());
        assert!(run_classical(ClassicalProtocol::Mixed(1.2), HA, HB, 0u64).is_err());
    }
}
