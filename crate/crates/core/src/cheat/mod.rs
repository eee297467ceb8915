//! Optimal cheating probabilities: closed forms and the numerical oracles
//! that check them.

pub mod alice_notest;
pub mod alice_test;
pub mod bob;
pub mod classical;
pub mod reversed;

pub use alice_notest::{alice_notest_closed_form, alice_notest_oracle, NotestClosedForm, NotestOracle};
pub use alice_test::{alice_test_bound_closed_form, alice_test_oracle, AliceTestOracle};
pub use bob::{bob_cheat_closed_form, bob_cheat_oracle};
pub use classical::{classical_tradeoff, classical_tradeoff_exact, margin_comparison, quantum_point};
pub use reversed::{reversed_alice_cheat, reversed_bob_cheat, TestMode};

use crate::error::Result;
use crate::state_family::OverlapParams;

/// Every cheating figure at one parameter point, with the gap between each
/// closed form and its oracle.
#[derive(Clone, Debug, PartialEq)]
pub struct CheatReport {
    pub params: OverlapParams,
    pub b_ot: f64,
    pub b_ot_residual: f64,
    pub a_test_bound: f64,
    pub a_test_residual: f64,
    pub notest: NotestClosedForm,
    pub notest_residual: f64,
}

/// Requires honest-feasible overlaps.
pub fn analyze(p: &OverlapParams) -> Result<CheatReport> {
    p.require_honest_feasible()?;
    let b_ot = bob_cheat_closed_form(p)?;
    let a_test_bound = alice_test_bound_closed_form(p);
    let notest = alice_notest_closed_form(p)?;
    let oracle = alice_notest_oracle(p)?;
    Ok(CheatReport {
        params: *p,
        b_ot_residual: (b_ot - bob_cheat_oracle(p)?).abs(),
        a_test_residual: (a_test_bound - alice_test_oracle(p)?.value).abs(),
        notest_residual: (notest.overall - oracle.overall()).abs(),
        b_ot,
        a_test_bound,
        notest,
    })
}
