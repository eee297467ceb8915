//! Receiver cheating: guess both of the sender's bits.

use crate::error::{Error, Result};
use crate::measurements::{identity_map, square_root_measurement, success_probability, StateEnsemble};
use crate::state_family::{build_symmetric_family, OverlapParams, WEIGHT_TOL};

/// `(1/16) (sqrt(1+G+2ReF) + sqrt(1+G-2ReF) + sqrt(1-G+2ImF) + sqrt(1-G-2ImF))^2`.
///
/// The radicands are four times the Fourier weights, so a radicand below
/// `-4 * WEIGHT_TOL` is reported as the corresponding unrealizable weight.
pub fn bob_cheat_closed_form(p: &OverlapParams) -> Result<f64> {
    let (re, im, g) = (p.re_f, p.im_f, p.g);
    // (Fourier index, radicand)
    let radicands = [
        (0, 1.0 + g + 2.0 * re),
        (2, 1.0 + g - 2.0 * re),
        (3, 1.0 - g + 2.0 * im),
        (1, 1.0 - g - 2.0 * im),
    ];
    let mut total = 0.0;
    for (index, rad) in radicands {
        let weight = rad / 4.0;
        if !weight.is_finite() || weight < -WEIGHT_TOL {
            return Err(Error::NotRealizable {
                re_f: re,
                im_f: im,
                g,
                index,
                weight,
            });
        }
        if weight.abs() > WEIGHT_TOL {
            total += rad.sqrt();
        }
    }
    Ok(total * total / 16.0)
}

/// Success of the square-root measurement on the family built from `p`.
pub fn bob_cheat_oracle(p: &OverlapParams) -> Result<f64> {
    let family = build_symmetric_family(p)?;
    let ensemble = StateEnsemble::uniform_pure(family.states)?;
    let srm = square_root_measurement(&ensemble)?;
    success_probability(&srm, &ensemble, &identity_map(4))
}
