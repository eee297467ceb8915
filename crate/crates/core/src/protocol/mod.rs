//! Two-party protocol state machines with Born-rule sampling.
//!
//! Each round is driven by its own [`RoundSeed`], so a batch gives the same
//! records however it is scheduled.

pub mod batch;
pub mod classical;
pub mod direct;
pub(crate) mod kit;
pub mod reversed;
pub mod testing;
pub mod wrapper;

use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::state_family::XorBits;

pub use batch::{run_rounds, tally_rounds, RoundCounts, Tally};
pub use classical::{run_classical, ClassicalProtocol};
pub use direct::run_semirandom;
pub use reversed::{reversed_postprocess, run_reversed};
pub use testing::{testing_subprotocol, TestReport, DEFAULT_TEST_FRACTION};
pub use wrapper::{semirandom_from_standard, standard_from_semirandom, wrap_standard};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Role {
    Alice,
    Bob,
}

/// Which protocol a round belongs to. In `Direct` Alice sends qutrits and Bob
/// measures; in `Reversed` Bob sends and Alice measures.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Direct,
    Reversed,
    Classical,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Injection {
    /// A basis state chosen uniformly per round.
    Uniform,
    /// Always the same basis state `|j>`.
    Fixed(usize),
}

/// Cheating strategies. Each one is tied to a role and a direction:
///
/// | strategy | role | direction |
/// |---|---|---|
/// | `SquareRoot` | Bob | direct |
/// | `Injection` | Alice | direct |
/// | `Entangled` | Alice / Bob | direct / reversed |
/// | `MixedDiscrimination`, `BasisMeasurement` | Alice | reversed |
/// | `EigenvectorInjection` | Bob | reversed |
/// | `ClassicalOptimal` | either | classical |
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Cheat {
    SquareRoot,
    Injection(Injection),
    Entangled,
    MixedDiscrimination,
    BasisMeasurement,
    EigenvectorInjection,
    ClassicalOptimal,
}

impl Cheat {
    pub fn name(self) -> &'static str {
        match self {
            Cheat::SquareRoot => "square-root measurement",
            Cheat::Injection(_) => "basis-state injection",
            Cheat::Entangled => "entangled cheat state",
            Cheat::MixedDiscrimination => "mixed-state discrimination",
            Cheat::BasisMeasurement => "basis measurement",
            Cheat::EigenvectorInjection => "eigenvector injection",
            Cheat::ClassicalOptimal => "classical cheating",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Honest,
    Cheat(Cheat),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PartyStrategy {
    pub role: Role,
    pub mode: Mode,
}

impl PartyStrategy {
    pub const fn honest(role: Role) -> Self {
        Self {
            role,
            mode: Mode::Honest,
        }
    }

    pub const fn cheat(role: Role, cheat: Cheat) -> Self {
        Self {
            role,
            mode: Mode::Cheat(cheat),
        }
    }

    pub fn is_honest(&self) -> bool {
        self.mode == Mode::Honest
    }

    /// Check that this strategy can play `role` in `direction`.
    pub fn validate(&self, role: Role, direction: Direction) -> Result<()> {
        if self.role != role {
            return Err(Error::InvalidStrategy {
                strategy: match self.role {
                    Role::Alice => "an Alice strategy",
                    Role::Bob => "a Bob strategy",
                },
                context: match role {
                    Role::Alice => "in Alice's seat",
                    Role::Bob => "in Bob's seat",
                },
            });
        }
        let Mode::Cheat(cheat) = self.mode else {
            return Ok(());
        };
        let ok = match (direction, role, cheat) {
            (Direction::Direct, Role::Alice, Cheat::Injection(Injection::Fixed(j))) => j < 3,
            (Direction::Direct, Role::Alice, Cheat::Injection(Injection::Uniform)) => true,
            (Direction::Direct, Role::Alice, Cheat::Entangled) => true,
            (Direction::Direct, Role::Bob, Cheat::SquareRoot) => true,
            (Direction::Reversed, Role::Alice, Cheat::MixedDiscrimination) => true,
            (Direction::Reversed, Role::Alice, Cheat::BasisMeasurement) => true,
            (Direction::Reversed, Role::Bob, Cheat::EigenvectorInjection) => true,
            (Direction::Reversed, Role::Bob, Cheat::Entangled) => true,
            (Direction::Classical, _, Cheat::ClassicalOptimal) => true,
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidStrategy {
                strategy: cheat.name(),
                context: match direction {
                    Direction::Direct => "in the direct protocol for this role",
                    Direction::Reversed => "in the reversed protocol for this role",
                    Direction::Classical => "in the classical protocols",
                },
            })
        }
    }
}

/// Validate both seats. Rounds where both parties cheat are rejected: every
/// strategy here is optimal only against an honest counterpart.
pub fn validate_pair(alice: &PartyStrategy, bob: &PartyStrategy, direction: Direction) -> Result<()> {
    alice.validate(Role::Alice, direction)?;
    bob.validate(Role::Bob, direction)?;
    if !alice.is_honest() && !bob.is_honest() {
        return Err(Error::InvalidStrategy {
            strategy: "two cheating parties",
            context: "in one round",
        });
    }
    Ok(())
}

/// Per-round randomness: stream `round` of the ChaCha8 generator seeded with
/// `master`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RoundSeed {
    pub master: u64,
    pub round: u64,
}

impl RoundSeed {
    pub fn new(master: u64, round: u64) -> Self {
        Self { master, round }
    }

    pub fn rng(self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master);
        rng.set_stream(self.round);
        rng
    }
}

impl From<u64> for RoundSeed {
    fn from(master: u64) -> Self {
        Self::new(master, 0)
    }
}

/// The quantum message: which state was sent (`None` for an entangled sender)
/// and the receiver's outcome. Indices refer to the tables in
/// [`crate::reports::frequency`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Transmission {
    pub sent: Option<usize>,
    pub outcome: usize,
}

/// Messages and outputs of the semi-random to standard XOT wrapper.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StandardLayer {
    /// `X0, X1` (`X2 = X0 ^ X1`).
    pub inputs: XorBits,
    /// `B`.
    pub choice: usize,
    pub r: usize,
    /// `s0, s1` (`s2 = s0 ^ s1`).
    pub s: XorBits,
    pub y_prime: Option<u8>,
    pub alice_guess_choice: Option<usize>,
    pub bob_guess_inputs: Option<XorBits>,
}

/// Post-processing that turns a reversed round into standard XOT.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReversalLayer {
    pub inputs: XorBits,
    /// `t_c = x_c ^ X_c`.
    pub t: XorBits,
    pub final_bit: Option<u8>,
    pub bob_guess_inputs: Option<XorBits>,
}

/// Outputs re-expressed as a semi-random XOT round.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SemiRandomView {
    pub x: Option<XorBits>,
    pub b: Option<usize>,
    pub y: Option<u8>,
    pub alice_guess_b: Option<usize>,
    pub bob_guess_x: Option<XorBits>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RoundRecord {
    pub direction: Direction,
    pub alice: PartyStrategy,
    pub bob: PartyStrategy,
    /// Alice's pair; absent when a cheating Alice never holds one.
    pub x: Option<XorBits>,
    /// Bit index Bob learned; absent when Bob cheats.
    pub b: Option<usize>,
    pub y: Option<u8>,
    pub transmission: Option<Transmission>,
    pub alice_guess_b: Option<usize>,
    pub bob_guess_x: Option<XorBits>,
    /// 1 or 2 for classical rounds.
    pub classical_protocol: Option<u8>,
    pub standard: Option<StandardLayer>,
    pub reversal: Option<ReversalLayer>,
    pub relabeled: Option<SemiRandomView>,
    pub abort: bool,
}

impl RoundRecord {
    pub(crate) fn new(direction: Direction, alice: PartyStrategy, bob: PartyStrategy) -> Self {
        Self {
            direction,
            alice,
            bob,
            x: None,
            b: None,
            y: None,
            transmission: None,
            alice_guess_b: None,
            bob_guess_x: None,
            classical_protocol: None,
            standard: None,
            reversal: None,
            relabeled: None,
            abort: false,
        }
    }

    /// Whether a cheating Alice guessed Bob's index, judged at the outermost
    /// layer (the wrapper's `B` when present).
    pub fn alice_cheat_success(&self) -> Option<bool> {
        if self.alice.is_honest() {
            return None;
        }
        if let Some(v) = self.relabeled {
            return Some(v.alice_guess_b? == v.b?);
        }
        if let Some(st) = self.standard {
            return Some(st.alice_guess_choice? == st.choice);
        }
        Some(self.alice_guess_b? == self.b?)
    }

    /// Whether a cheating Bob guessed both of Alice's bits.
    pub fn bob_cheat_success(&self) -> Option<bool> {
        if self.bob.is_honest() {
            return None;
        }
        if let Some(v) = self.relabeled {
            return Some(v.bob_guess_x? == v.x?);
        }
        if let Some(st) = self.standard {
            return Some(st.bob_guess_inputs? == st.inputs);
        }
        if let Some(rv) = self.reversal {
            return Some(rv.bob_guess_inputs? == rv.inputs);
        }
        Some(self.bob_guess_x? == self.x?)
    }

    /// Whether honest Bob's output is the bit he is entitled to.
    pub fn honest_output_correct(&self) -> Option<bool> {
        if !self.alice.is_honest() || !self.bob.is_honest() || self.abort {
            return None;
        }
        if let Some(v) = self.relabeled {
            return Some(v.x?.get(v.b?) == v.y?);
        }
        if let Some(st) = self.standard {
            return Some(st.inputs.get(st.choice) == st.y_prime?);
        }
        if let Some(rv) = self.reversal {
            return Some(rv.inputs.get(self.b?) == rv.final_bit?);
        }
        Some(self.x?.get(self.b?) == self.y?)
    }
}

/// Sample an index from Born probabilities, clamping rounding noise below 0.
pub(crate) fn sample_index<R: Rng + ?Sized>(rng: &mut R, probs: &[f64]) -> usize {
    let weights = probs.iter().map(|p| p.max(0.0));
    WeightedIndex::new(weights)
        .expect("outcome probabilities sum to one")
        .sample(rng)
}

pub(crate) fn random_pair<R: Rng + ?Sized>(rng: &mut R) -> XorBits {
    XorBits::new(rng.gen_range(0..2), rng.gen_range(0..2))
}

/// Index of a pair in the lexicographic order `00, 01, 10, 11`.
pub fn lex_index(bits: XorBits) -> usize {
    2 * bits.x0 as usize + bits.x1 as usize
}

pub fn from_lex(k: usize) -> XorBits {
    XorBits::all()[k]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation_table() {
        let sq = PartyStrategy::cheat(Role::Bob, Cheat::SquareRoot);
        assert!(sq.validate(Role::Bob, Direction::Direct).is_ok());
        assert!(sq.validate(Role::Bob, Direction::Reversed).is_err());
        assert!(sq.validate(Role::Alice, Direction::Direct).is_err());
        let bad = PartyStrategy::cheat(Role::Alice, Cheat::Injection(Injection::Fixed(3)));
        assert!(bad.validate(Role::Alice, Direction::Direct).is_err());
        let both = validate_pair(
            &PartyStrategy::cheat(Role::Alice, Cheat::Entangled),
            &sq,
            Direction::Direct,
        );
        assert!(matches!(both, Err(Error::InvalidStrategy { .. })));
    }

    #[test]
    fn seeds_are_independent_streams() {
        let a: u64 = RoundSeed::new(7, 0).rng().gen();
        let b: u64 = RoundSeed::new(7, 1).rng().gen();
        let a2: u64 = RoundSeed::new(7, 0).rng().gen();
        assert_ne!(a, b);
        assert_eq!(a, a2);
    }

    #[test]
    fn lex_round_trip() {
        for k in 0..4 {
            assert_eq!(lex_index(from_lex(k)), k);
        }
    }
}
