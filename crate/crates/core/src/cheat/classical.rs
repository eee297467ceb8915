//! Classical baseline: mix a protocol where Alice can always cheat with one
//! where Bob can always cheat, and compare against the quantum protocol with
//! the metric `3A + 4B`.

use num_rational::Ratio;

use crate::error::{Error, Result};

pub type Exact = Ratio<i64>;

/// Published general lower bounds on the receiver's and sender's cheating
/// probabilities for quantum XOT. Quoted for reference only.
pub const REFERENCE_LOWER_BOUND_BOB: f64 = 0.5073;
pub const REFERENCE_LOWER_BOUND_ALICE: f64 = 0.3382;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TradeoffPoint<T> {
    pub a: T,
    pub b: T,
    pub metric: T,
}

pub fn tradeoff_metric(a: Exact, b: Exact) -> Exact {
    Exact::from_integer(3) * a + Exact::from_integer(4) * b
}

/// `A = 1/3 + 2s/3`, `B = 1 - s/2` in exact arithmetic.
pub fn classical_tradeoff_exact(s: Exact) -> Result<TradeoffPoint<Exact>> {
    if s < Exact::from_integer(0) || s > Exact::from_integer(1) {
        return Err(Error::OutOfRange(format!("mixing weight s = {s} is outside [0, 1]")));
    }
    let a = Exact::new(1, 3) + Exact::new(2, 3) * s;
    let b = Exact::from_integer(1) - Exact::new(1, 2) * s;
    Ok(TradeoffPoint {
        a,
        b,
        metric: tradeoff_metric(a, b),
    })
}

pub fn classical_tradeoff(s: f64) -> Result<TradeoffPoint<f64>> {
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::OutOfRange(format!("mixing weight s = {s} is outside [0, 1]")));
    }
    let a = 1.0 / 3.0 + 2.0 * s / 3.0;
    let b = 1.0 - s / 2.0;
    Ok(TradeoffPoint {
        a,
        b,
        metric: 3.0 * a + 4.0 * b,
    })
}

/// The qutrit protocol: `A = 1/2`, `B = 3/4`.
pub fn quantum_point() -> TradeoffPoint<Exact> {
    let a = Exact::new(1, 2);
    let b = Exact::new(3, 4);
    TradeoffPoint {
        a,
        b,
        metric: tradeoff_metric(a, b),
    }
}

/// Compare the quantum advantage for XOT with the one known for 1-out-of-2
/// OT, whose classical line is `A + B = 3/2` and best quantum sum `1479/1000`.
/// Each gap is scaled by the coefficient sum of its metric (2 and 7).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MarginComparison {
    pub xot_margin: Exact,
    pub ot_margin: Exact,
    pub xot_advantage_larger: bool,
}

pub fn margin_comparison() -> MarginComparison {
    let q = quantum_point();
    let xot_margin = (Exact::from_integer(5) - q.metric) * Exact::from_integer(2);
    let ot_margin = (Exact::new(3, 2) - Exact::new(1479, 1000)) * Exact::from_integer(7);
    MarginComparison {
        xot_margin,
        ot_margin,
        xot_advantage_larger: xot_margin > ot_margin,
    }
}
