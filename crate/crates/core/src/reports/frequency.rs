//! Monte Carlo frequency tables: counts of (sent state, outcome) pairs
//! compared with exact Born probabilities.

use serde::{Deserialize, Serialize};

use super::format::{fmt_real, CsvRow};
use crate::cheat::{
    alice_notest_closed_form, alice_test_bound_closed_form, bob_cheat_closed_form,
    reversed_alice_cheat, reversed_bob_cheat, TestMode,
};
use crate::error::{Error, Result};
use crate::linalg::{CMat, CVec};
use crate::measurements::{Povm, ELIMINATION_LABELS, ELIMINATION_NAMES};
use crate::protocol::kit::{kit, Kit};
use crate::protocol::{
    run_reversed, run_semirandom, tally_rounds, testing_subprotocol, Cheat, Injection, Mode,
    PartyStrategy, Role, RoundCounts, TestReport,
};
use crate::state_family::{OverlapParams, XorBits};

/// Deviations up to this many standard deviations pass.
pub const SIGMA_LIMIT: f64 = 5.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Protocol {
    Direct,
    Reversed,
}

impl std::str::FromStr for Protocol {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "direct" => Ok(Protocol::Direct),
            "reversed" => Ok(Protocol::Reversed),
            other => Err(Error::Parse(format!("unknown protocol {other:?}"))),
        }
    }
}

/// Which strategies a simulation runs. A cheating party uses the strategy
/// the analysis shows optimal for the chosen protocol; with a test fraction
/// the sender switches to the entangled strategy that passes every test.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Scenario {
    pub protocol: Protocol,
    pub alice: PartyStrategy,
    pub bob: PartyStrategy,
    pub test_fraction: Option<f64>,
}

impl Scenario {
    pub fn new(
        protocol: Protocol,
        alice_cheats: bool,
        bob_cheats: bool,
        test_fraction: Option<f64>,
    ) -> Result<Self> {
        let tested = test_fraction.is_some();
        let alice = match (protocol, alice_cheats) {
            (_, false) => PartyStrategy::honest(Role::Alice),
            (Protocol::Direct, true) if tested => PartyStrategy::cheat(Role::Alice, Cheat::Entangled),
            (Protocol::Direct, true) => {
                PartyStrategy::cheat(Role::Alice, Cheat::Injection(Injection::Uniform))
            }
            (Protocol::Reversed, true) => PartyStrategy::cheat(Role::Alice, Cheat::BasisMeasurement),
        };
        let bob = match (protocol, bob_cheats) {
            (_, false) => PartyStrategy::honest(Role::Bob),
            (Protocol::Direct, true) => PartyStrategy::cheat(Role::Bob, Cheat::SquareRoot),
            (Protocol::Reversed, true) if tested => PartyStrategy::cheat(Role::Bob, Cheat::Entangled),
            (Protocol::Reversed, true) => {
                PartyStrategy::cheat(Role::Bob, Cheat::EigenvectorInjection)
            }
        };
        let direction = match protocol {
            Protocol::Direct => crate::protocol::Direction::Direct,
            Protocol::Reversed => crate::protocol::Direction::Reversed,
        };
        crate::protocol::validate_pair(&alice, &bob, direction)?;
        if let Some(f) = test_fraction {
            if !(f > 0.0 && f < 1.0) {
                return Err(Error::OutOfRange(format!(
                    "test fraction {f} is not strictly between 0 and 1"
                )));
            }
        }
        Ok(Self {
            protocol,
            alice,
            bob,
            test_fraction,
        })
    }

    fn sender(&self) -> PartyStrategy {
        match self.protocol {
            Protocol::Direct => self.alice,
            Protocol::Reversed => self.bob,
        }
    }

    fn receiver(&self) -> PartyStrategy {
        match self.protocol {
            Protocol::Direct => self.bob,
            Protocol::Reversed => self.alice,
        }
    }
}

enum RowState {
    Pure(CVec),
    Mixed(CMat),
}

/// Row labels with their states, column labels with the receiver's
/// measurement.
fn layout(s: &Scenario) -> (Vec<(String, RowState)>, Vec<String>, &'static Povm) {
    let k = kit();
    let pairs = XorBits::all();
    let rows: Vec<(String, RowState)> = match (s.protocol, s.sender().mode) {
        (Protocol::Direct, Mode::Honest) => pairs
            .iter()
            .zip(&k.qutrit_lex)
            .map(|(b, v)| (format!("phi_{b}"), RowState::Pure(v.clone())))
            .collect(),
        (Protocol::Direct, Mode::Cheat(Cheat::Injection(_))) => (0..3)
            .map(|j| (format!("|{j}>"), RowState::Pure(CVec::basis(3, j))))
            .collect(),
        (Protocol::Reversed, Mode::Honest) => ELIMINATION_LABELS
            .iter()
            .zip(&k.reversed)
            .map(|(l, v)| (format!("phi_{{{l}}}"), RowState::Pure(v.clone())))
            .collect(),
        (Protocol::Reversed, Mode::Cheat(Cheat::EigenvectorInjection)) => pairs
            .iter()
            .zip(&k.eigen_lex)
            .map(|(b, v)| (format!("phi_{b}"), RowState::Pure(v.clone())))
            .collect(),
        (Protocol::Direct, _) => vec![(
            "entangled".into(),
            RowState::Mixed(Kit::entangled_marginal(&k.direct_joint, 4)),
        )],
        (Protocol::Reversed, _) => vec![(
            "entangled".into(),
            RowState::Mixed(Kit::entangled_marginal(&k.reversed_joint, 6)),
        )],
    };
    let pi_labels = || pairs.iter().map(|b| format!("Pi_{b}")).collect::<Vec<_>>();
    let (cols, povm): (Vec<String>, &Povm) = match (s.protocol, s.receiver().mode) {
        (Protocol::Direct, Mode::Honest) => (
            ELIMINATION_NAMES
                .iter()
                .zip(ELIMINATION_LABELS)
                .map(|(n, l)| format!("Pi_{n} ({l})"))
                .collect(),
            &k.elimination,
        ),
        (Protocol::Direct, _) => (pi_labels(), &k.srm_lex),
        (Protocol::Reversed, Mode::Honest) => (pi_labels(), &k.receiver_lex),
        (Protocol::Reversed, _) => ((0..3).map(|j| format!("|{j}><{j}|")).collect(), &k.basis),
    };
    (rows, cols, povm)
}

/// Exact outcome probabilities, one row per sent state.
pub fn theory_table(s: &Scenario) -> (Vec<String>, Vec<String>, Vec<Vec<f64>>) {
    let (rows, cols, povm) = layout(s);
    let p = rows
        .iter()
        .map(|(_, st)| match st {
            RowState::Pure(v) => povm.probabilities(v),
            RowState::Mixed(rho) => povm.probabilities_mixed(rho),
        })
        .collect();
    (rows.into_iter().map(|(l, _)| l).collect(), cols, p)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrequencyCell {
    pub sent: String,
    pub outcome: String,
    pub count: u64,
    pub frequency: f64,
    pub p_t: f64,
    pub sigma: f64,
    pub deviation_sigmas: f64,
}

impl FrequencyCell {
    pub fn within(&self) -> bool {
        self.deviation_sigmas <= SIGMA_LIMIT
    }
}

impl CsvRow for FrequencyCell {
    fn header() -> &'static [&'static str] {
        &["sent", "outcome", "count", "frequency", "p_t", "sigma", "deviation_sigmas"]
    }

    fn fields(&self) -> Vec<String> {
        vec![
            self.sent.clone(),
            self.outcome.clone(),
            self.count.to_string(),
            fmt_real(self.frequency),
            fmt_real(self.p_t),
            fmt_real(self.sigma),
            fmt_real(self.deviation_sigmas),
        ]
    }
}

/// `sqrt(p(1-p)/n)`, floored at `1/n` when `p` is 0 or 1.
pub fn binomial_sigma(p: f64, n: u64) -> f64 {
    let n = n.max(1) as f64;
    if p <= 1e-12 || p >= 1.0 - 1e-12 {
        1.0 / n
    } else {
        (p * (1.0 - p) / n).sqrt()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FrequencyTable {
    pub rows: Vec<String>,
    pub cols: Vec<String>,
    pub row_totals: Vec<u64>,
    pub cells: Vec<Vec<FrequencyCell>>,
}

impl FrequencyTable {
    pub fn flat(&self) -> Vec<FrequencyCell> {
        self.cells.iter().flatten().cloned().collect()
    }

    pub fn max_deviation_sigmas(&self) -> f64 {
        self.cells
            .iter()
            .flatten()
            .map(|c| c.deviation_sigmas)
            .fold(0.0, f64::max)
    }

    pub fn all_within(&self) -> bool {
        self.cells.iter().flatten().all(FrequencyCell::within)
    }

    /// Largest `|sum_j f_ij - 1|` over rows that received any rounds.
    pub fn row_sum_error(&self) -> f64 {
        self.cells
            .iter()
            .zip(&self.row_totals)
            .filter(|(_, &n)| n > 0)
            .map(|(row, _)| (row.iter().map(|c| c.frequency).sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

/// Success frequency of the cheating party, or of honest correctness.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Headline {
    pub party: String,
    pub quantity: String,
    pub trials: u64,
    pub successes: u64,
    pub frequency: f64,
    pub expected: f64,
    pub sigma: f64,
    pub deviation_sigmas: f64,
}

impl Headline {
    pub fn within(&self) -> bool {
        self.deviation_sigmas <= SIGMA_LIMIT
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TestSummary {
    pub test_fraction: f64,
    pub tested: usize,
    pub mismatches: usize,
    pub aborted: bool,
}

impl From<(f64, TestReport)> for TestSummary {
    fn from((f, r): (f64, TestReport)) -> Self {
        Self {
            test_fraction: f,
            tested: r.tested,
            mismatches: r.mismatches,
            aborted: r.aborted,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimulationSummary {
    pub protocol: String,
    pub alice: String,
    pub bob: String,
    pub rounds: u64,
    pub seed: u64,
    pub b_counts: [u64; 3],
    pub headline: Headline,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub testing: Option<TestSummary>,
    pub table_within_limit: bool,
    pub max_deviation_sigmas: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Simulation {
    pub table: FrequencyTable,
    pub summary: SimulationSummary,
}

fn describe(p: &PartyStrategy) -> String {
    match p.mode {
        Mode::Honest => "honest".into(),
        Mode::Cheat(c) => format!("cheat ({})", c.name()),
    }
}

/// Theoretical success of the scenario's cheating party (or 1 for honest
/// correctness), from the cheating analysis.
pub fn expected_success(s: &Scenario) -> Result<f64> {
    let q = OverlapParams::QUTRIT;
    Ok(match (s.protocol, s.alice.mode, s.bob.mode) {
        (Protocol::Direct, Mode::Cheat(Cheat::Entangled), _) => alice_test_bound_closed_form(&q),
        (Protocol::Direct, Mode::Cheat(_), _) => alice_notest_closed_form(&q)?.overall,
        (Protocol::Direct, _, Mode::Cheat(_)) => bob_cheat_closed_form(&q)?,
        (Protocol::Reversed, Mode::Cheat(_), _) => reversed_alice_cheat()?.basis_value,
        (Protocol::Reversed, _, Mode::Cheat(Cheat::Entangled)) => {
            reversed_bob_cheat(TestMode::AliceTests)?
        }
        (Protocol::Reversed, _, Mode::Cheat(_)) => reversed_bob_cheat(TestMode::AliceNoTest)?,
        _ => 1.0,
    })
}

fn deviation(freq: f64, p: f64, sigma: f64) -> f64 {
    (freq - p).abs() / sigma
}

pub fn simulate(s: &Scenario, rounds: u64, seed: u64) -> Result<Simulation> {
    if rounds == 0 {
        return Err(Error::OutOfRange("rounds must be at least 1".into()));
    }
    let (alice, bob) = (s.alice, s.bob);
    let counts: RoundCounts = match s.protocol {
        Protocol::Direct => tally_rounds(seed, rounds, |rs| run_semirandom(alice, bob, rs))?,
        Protocol::Reversed => tally_rounds(seed, rounds, |rs| run_reversed(alice, bob, rs))?,
    };

    let (row_labels, col_labels, p_t) = theory_table(s);
    let entangled = row_labels.len() == 1 && row_labels[0] == "entangled";
    let row_key = |i: usize| if entangled { None } else { Some(i) };
    let row_totals: Vec<u64> = (0..row_labels.len())
        .map(|i| {
            counts
                .cells
                .iter()
                .filter(|((sent, _), _)| *sent == row_key(i))
                .map(|(_, n)| n)
                .sum()
        })
        .collect();
    let cells = (0..row_labels.len())
        .map(|i| {
            (0..col_labels.len())
                .map(|j| {
                    let n = row_totals[i];
                    let count = counts.cells.get(&(row_key(i), j)).copied().unwrap_or(0);
                    let frequency = if n > 0 { count as f64 / n as f64 } else { 0.0 };
                    let sigma = binomial_sigma(p_t[i][j], n);
                    FrequencyCell {
                        sent: row_labels[i].clone(),
                        outcome: col_labels[j].clone(),
                        count,
                        frequency,
                        p_t: p_t[i][j],
                        sigma,
                        deviation_sigmas: deviation(frequency, p_t[i][j], sigma),
                    }
                })
                .collect()
        })
        .collect();
    let table = FrequencyTable {
        rows: row_labels,
        cols: col_labels,
        row_totals,
        cells,
    };

    let expected = expected_success(s)?;
    let (party, quantity, tally) = if !s.alice.is_honest() {
        ("alice", "guess of b", &counts.alice_cheat)
    } else if !s.bob.is_honest() {
        ("bob", "guess of (x0, x1)", &counts.bob_cheat)
    } else {
        ("both", "y = x_b", &counts.honest)
    };
    let frequency = tally.frequency().unwrap_or(0.0);
    let sigma = binomial_sigma(expected, tally.attempts);
    let headline = Headline {
        party: party.into(),
        quantity: quantity.into(),
        trials: tally.attempts,
        successes: tally.successes,
        frequency,
        expected,
        sigma,
        deviation_sigmas: deviation(frequency, expected, sigma),
    };

    let testing = match s.test_fraction {
        Some(f) => Some(TestSummary::from((
            f,
            testing_subprotocol(rounds as usize, f, s.sender(), seed)?,
        ))),
        None => None,
    };

    let summary = SimulationSummary {
        protocol: match s.protocol {
            Protocol::Direct => "direct".into(),
            Protocol::Reversed => "reversed".into(),
        },
        alice: describe(&s.alice),
        bob: describe(&s.bob),
        rounds,
        seed,
        b_counts: counts.b_counts,
        headline,
        testing,
        table_within_limit: table.all_within(),
        max_deviation_sigmas: table.max_deviation_sigmas(),
    };
    Ok(Simulation { table, summary })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theory_columns() {
        let s = Scenario::new(Protocol::Direct, false, false, None).unwrap();
        let (rows, cols, p) = theory_table(&s);
        assert_eq!(rows, ["phi_00", "phi_01", "phi_10", "phi_11"]);
        assert_eq!(cols.len(), 6);
        let third = 1.0 / 3.0;
        let want_00 = [third, 0.0, third, 0.0, third, 0.0];
        for (a, b) in p[0].iter().zip(want_00) {
            assert!((a - b).abs() < 1e-15);
        }

        let s = Scenario::new(Protocol::Direct, false, true, None).unwrap();
        let (_, _, p) = theory_table(&s);
        for (i, row) in p.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                let want = if i == j { 0.75 } else { 1.0 / 12.0 };
                assert!((v - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn both_cheating_is_rejected() {
        assert!(Scenario::new(Protocol::Direct, true, true, None).is_err());
        assert!(Scenario::new(Protocol::Direct, true, false, Some(1.5)).is_err());
    }

    #[test]
    fn small_simulation_is_deterministic() {
        let s = Scenario::new(Protocol::Reversed, true, false, None).unwrap();
        let a = simulate(&s, 5000, 42).unwrap();
        let b = simulate(&s, 5000, 42).unwrap();
        assert_eq!(a, b);
        assert!(a.table.row_sum_error() < 1e-12);
        assert!((a.summary.headline.expected - 0.5).abs() < 1e-12);
        assert_eq!(a.table.row_totals.iter().sum::<u64>(), 5000);
    }

    #[test]
    fn sigma_floor() {
        assert_eq!(binomial_sigma(0.0, 100), 0.01);
        assert_eq!(binomial_sigma(1.0, 100), 0.01);
        assert!((binomial_sigma(0.25, 100) - (0.1875f64 / 100.0).sqrt()).abs() < 1e-15);
    }
}
