//! Symmetric four-state families and the concrete protocol states.
//!
//! Families are indexed by `m in 0..4` in the cyclic order
//! `00 -> 01 -> 11 -> 10`, so that `U |psi_m> = |psi_{m+1 mod 4}>`.

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{c, gram, r, CMat, CVec, C64};

/// Weights within this distance of zero are snapped to exactly zero.
pub const WEIGHT_TOL: f64 = 1e-12;
/// Slack on `|F| <= 1/3` and `|G| <= 1/3`.
pub const FEASIBILITY_TOL: f64 = 1e-12;

/// Alice's two bits together with their XOR.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct XorBits {
    pub x0: u8,
    pub x1: u8,
}

impl XorBits {
    pub fn new(x0: u8, x1: u8) -> Self {
        Self {
            x0: x0 & 1,
            x1: x1 & 1,
        }
    }

    pub fn x2(self) -> u8 {
        self.x0 ^ self.x1
    }

    /// Bit `x_c` for `c in {0, 1, 2}`.
    pub fn get(self, c: usize) -> u8 {
        match c {
            0 => self.x0,
            1 => self.x1,
            2 => self.x2(),
            _ => panic!("bit index {c} out of range"),
        }
    }

    /// Position of this pair in the cyclic order `00, 01, 11, 10`.
    pub fn cyclic_index(self) -> usize {
        match (self.x0, self.x1) {
            (0, 0) => 0,
            (0, 1) => 1,
            (1, 1) => 2,
            _ => 3,
        }
    }

    pub fn from_cyclic(m: usize) -> Self {
        CYCLIC_ORDER[m % 4]
    }

    pub fn xor(self, other: XorBits) -> XorBits {
        XorBits::new(self.x0 ^ other.x0, self.x1 ^ other.x1)
    }

    /// All four pairs in lexicographic order `00, 01, 10, 11`.
    pub fn all() -> [XorBits; 4] {
        [
            XorBits::new(0, 0),
            XorBits::new(0, 1),
            XorBits::new(1, 0),
            XorBits::new(1, 1),
        ]
    }
}

impl fmt::Display for XorBits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.x0, self.x1)
    }
}

/// The cyclic order used to index every symmetric family.
pub const CYCLIC_ORDER: [XorBits; 4] = [
    XorBits { x0: 0, x1: 0 },
    XorBits { x0: 0, x1: 1 },
    XorBits { x0: 1, x1: 1 },
    XorBits { x0: 1, x1: 0 },
];

/// Adjacent overlap `F = <psi_01|psi_00>` and diagonal overlap `G = <psi_00|psi_11>`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OverlapParams {
    pub re_f: f64,
    pub im_f: f64,
    pub g: f64,
}

impl OverlapParams {
    /// `F = 1/3`, `G = -1/3`: the overlaps of the qutrit protocol states.
    pub const QUTRIT: OverlapParams = OverlapParams {
        re_f: 1.0 / 3.0,
        im_f: 0.0,
        g: -1.0 / 3.0,
    };

    pub fn new(re_f: f64, im_f: f64, g: f64) -> Self {
        Self { re_f, im_f, g }
    }

    pub fn real(f: f64, g: f64) -> Self {
        Self::new(f, 0.0, g)
    }

    pub fn f(&self) -> C64 {
        c(self.re_f, self.im_f)
    }

    pub fn abs_f(&self) -> f64 {
        self.re_f.hypot(self.im_f)
    }

    pub fn theta_f(&self) -> f64 {
        self.im_f.atan2(self.re_f)
    }

    /// `F -> -F` at fixed `G`.
    pub fn negate_f(&self) -> Self {
        Self::new(-self.re_f, -self.im_f, self.g)
    }

    /// `Re F <-> Im F` together with `G -> -G`.
    pub fn exchange(&self) -> Self {
        Self::new(self.im_f, self.re_f, -self.g)
    }

    /// Squared amplitudes of `|psi_00>` in the eigenbasis of `U`, where
    /// `U e_k = i^k e_k`. Not snapped and not checked.
    pub fn raw_fourier_weights(&self) -> [f64; 4] {
        let (re, im, g) = (self.re_f, self.im_f, self.g);
        [
            (1.0 + g + 2.0 * re) / 4.0,
            (1.0 - g - 2.0 * im) / 4.0,
            (1.0 + g - 2.0 * re) / 4.0,
            (1.0 - g + 2.0 * im) / 4.0,
        ]
    }

    /// Fourier weights with near-zero entries snapped to zero; rejects any
    /// weight below `-WEIGHT_TOL`.
    pub fn fourier_weights(&self) -> Result<[f64; 4]> {
        let mut w = self.raw_fourier_weights();
        for (index, weight) in w.iter_mut().enumerate() {
            if !weight.is_finite() || *weight < -WEIGHT_TOL {
                return Err(Error::NotRealizable {
                    re_f: self.re_f,
                    im_f: self.im_f,
                    g: self.g,
                    index,
                    weight: *weight,
                });
            }
            if weight.abs() <= WEIGHT_TOL {
                *weight = 0.0;
            }
        }
        Ok(w)
    }

    pub fn is_realizable(&self) -> bool {
        self.fourier_weights().is_ok()
    }

    pub fn is_honest_feasible(&self) -> bool {
        self.is_realizable()
            && self.abs_f() <= 1.0 / 3.0 + FEASIBILITY_TOL
            && self.g.abs() <= 1.0 / 3.0 + FEASIBILITY_TOL
    }

    pub fn require_honest_feasible(&self) -> Result<()> {
        self.fourier_weights()?;
        if self.is_honest_feasible() {
            Ok(())
        } else {
            Err(Error::NotHonestFeasible {
                re_f: self.re_f,
                im_f: self.im_f,
                g: self.g,
            })
        }
    }
}

impl fmt::Display for OverlapParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F = {} + {}i, G = {}", self.re_f, self.im_f, self.g)
    }
}

/// Four pure states `|psi_m> = U^m |psi_00>` and the unitary that cycles them.
#[derive(Clone, Debug)]
pub struct SymmetricFamily {
    pub states: Vec<CVec>,
    pub u: CMat,
    pub fourier_weights: [f64; 4],
}

impl SymmetricFamily {
    pub fn dim(&self) -> usize {
        self.u.rows()
    }

    pub fn state(&self, bits: XorBits) -> &CVec {
        &self.states[bits.cyclic_index()]
    }

    pub fn gram(&self) -> CMat {
        gram(&self.states)
    }

    /// Measured `(F, G)` read back from the states.
    pub fn overlaps(&self) -> (C64, C64) {
        (
            self.states[1].inner(&self.states[0]),
            self.states[0].inner(&self.states[2]),
        )
    }
}

/// Build the family in the eigenbasis of `U`, dropping Fourier directions
/// whose weight is exactly zero after snapping.
pub fn build_symmetric_family(p: &OverlapParams) -> Result<SymmetricFamily> {
    let weights = p.fourier_weights()?;
    let support: Vec<usize> = (0..4).filter(|&k| weights[k] > 0.0).collect();
    let phases = [r(1.0), c(0.0, 1.0), r(-1.0), c(0.0, -1.0)];
    let u = CMat::from_fn(support.len(), support.len(), |i, j| {
        if i == j {
            phases[support[i]]
        } else {
            C64::default()
        }
    });
    let seed = CVec::new(support.iter().map(|&k| r(weights[k].sqrt())).collect());
    let mut states = vec![seed];
    for m in 1..4 {
        let next = u.mul_vec(&states[m - 1]);
        states.push(next);
    }
    Ok(SymmetricFamily {
        states,
        u,
        fourier_weights: weights,
    })
}

/// `|phi_{x0x1}> = (|0> + (-1)^{x1}|1> + (-1)^{x0}|2>) / sqrt(3)` in cyclic order.
pub fn qutrit_states() -> Vec<CVec> {
    CYCLIC_ORDER
        .iter()
        .map(|bits| qutrit_state(*bits))
        .collect()
}

pub fn qutrit_state(bits: XorBits) -> CVec {
    let sign = |b: u8| if b == 0 { 1.0 } else { -1.0 };
    CVec::from_real(&[1.0, sign(bits.x1), sign(bits.x0)]).scale(r(1.0 / 3f64.sqrt()))
}

/// The qutrit cycling unitary with `U^4 = 1`.
pub fn qutrit_unitary() -> CMat {
    CMat::from_real_rows(&[&[1.0, 0.0, 0.0], &[0.0, 0.0, -1.0], &[0.0, 1.0, 0.0]])
}

pub fn qutrit_family() -> SymmetricFamily {
    SymmetricFamily {
        states: qutrit_states(),
        u: qutrit_unitary(),
        fourier_weights: OverlapParams::QUTRIT
            .fourier_weights()
            .expect("qutrit overlaps are realizable"),
    }
}

/// A state carrying one bit `x_bit = value`.
#[derive(Clone, Debug, PartialEq)]
pub struct LabeledState {
    pub bit: usize,
    pub value: u8,
    pub state: CVec,
}

impl LabeledState {
    pub fn label(&self) -> String {
        format!("x{}={}", self.bit, self.value)
    }
}

/// The six states Bob sends in the reversed protocol, ordered
/// `x0=0, x0=1, x1=0, x1=1, x2=0, x2=1` (index `2 * bit + value`).
pub fn reversed_states() -> Vec<LabeledState> {
    let h = 1.0 / 2f64.sqrt();
    let vectors: [[f64; 3]; 6] = [
        [h, 0.0, h],
        [h, 0.0, -h],
        [h, h, 0.0],
        [h, -h, 0.0],
        [0.0, h, h],
        [0.0, h, -h],
    ];
    vectors
        .iter()
        .enumerate()
        .map(|(s, v)| LabeledState {
            bit: s / 2,
            value: (s % 2) as u8,
            state: CVec::from_real(v),
        })
        .collect()
}

/// Four states on three qutrits (dimension 27) with the same Gram matrix as
/// [`qutrit_states`], in cyclic order.
pub fn three_qutrit_states() -> Vec<CVec> {
    let idx = |a: usize, b: usize, c: usize| 9 * a + 3 * b + c;
    CYCLIC_ORDER
        .iter()
        .map(|bits| {
            let s0 = if bits.x0 == 0 { 1.0 } else { -1.0 };
            let s1 = if bits.x1 == 0 { 1.0 } else { -1.0 };
            let mut v = vec![0.0; 27];
            v[idx(0, 0, 0)] += s0;
            v[idx(2, 2, 0)] += 1.0;
            v[idx(1, 1, 1)] += s1;
            v[idx(2, 2, 1)] += 1.0;
            v[idx(0, 0, 2)] += s0;
            v[idx(1, 1, 2)] += s1;
            CVec::from_real(&v).scale(r(1.0 / 6f64.sqrt()))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b}");
    }

    #[test]
    fn orthonormal_family_at_origin() {
        let fam = build_symmetric_family(&OverlapParams::new(0.0, 0.0, 0.0)).unwrap();
        assert_eq!(fam.fourier_weights, [0.25; 4]);
        assert!(fam.gram().max_abs_diff(&CMat::identity(4)) < 1e-15);
    }

    #[test]
    fn qutrit_point_is_three_dimensional() {
        let fam = build_symmetric_family(&OverlapParams::QUTRIT).unwrap();
        let w = fam.fourier_weights;
        assert_close(w[0], 1.0 / 3.0, 1e-15);
        assert_close(w[1], 1.0 / 3.0, 1e-15);
        assert_eq!(w[2], 0.0);
        assert_close(w[3], 1.0 / 3.0, 1e-15);
        assert_eq!(fam.dim(), 3);
        assert!(fam.gram().max_abs_diff(&gram(&qutrit_states())) < 1e-12);
    }

    #[test]
    fn weights_solve_the_overlap_system() {
        // Independent route: the Gram eigenvalues of a symmetric family are 4 * lambda_k,
        // and F, G follow from the inverse Fourier transform of the weights.
        let p = OverlapParams::new(0.1, -0.2, 0.15);
        let w = p.fourier_weights().unwrap();
        assert_close(w.iter().sum::<f64>(), 1.0, 1e-15);
        assert_close(w[0] - w[2], p.re_f, 1e-15);
        assert_close(w[3] - w[1], p.im_f, 1e-15);
        assert_close(w[0] - w[1] + w[2] - w[3], p.g, 1e-15);
    }

    #[test]
    fn realizable_but_not_feasible() {
        let p = OverlapParams::real(0.5, 0.5);
        assert_close(p.fourier_weights().unwrap()[2], 0.125, 1e-15);
        assert!(p.is_realizable());
        assert!(!p.is_honest_feasible());
        assert!(matches!(
            p.require_honest_feasible(),
            Err(Error::NotHonestFeasible { .. })
        ));
    }

    #[test]
    fn unrealizable_reports_weight() {
        match OverlapParams::real(0.9, 0.0).fourier_weights() {
            Err(Error::NotRealizable { index, weight, .. }) => {
                assert_eq!(index, 2);
                assert_close(weight, -0.2, 1e-15);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn qutrit_overlaps() {
        let s = qutrit_states();
        let at = |bits: XorBits| &s[bits.cyclic_index()];
        assert_close(at(XorBits::new(0, 1)).inner(at(XorBits::new(0, 0))).re, 1.0 / 3.0, 1e-15);
        assert_close(at(XorBits::new(0, 0)).inner(at(XorBits::new(1, 1))).re, -1.0 / 3.0, 1e-15);
        for v in &s {
            assert!(v.is_normalized());
        }
    }

    #[test]
    fn qutrit_unitary_cycles() {
        let fam = qutrit_family();
        for m in 0..4 {
            let next = fam.u.mul_vec(&fam.states[m]);
            assert!(next.max_abs_diff(&fam.states[(m + 1) % 4]) < 1e-15);
        }
        let u2 = &fam.u * &fam.u;
        assert!((&u2 * &u2).max_abs_diff(&CMat::identity(3)) < 1e-15);
    }

    #[test]
    fn reversed_state_overlaps() {
        let s = reversed_states();
        let h = 1.0 / 2f64.sqrt();
        assert!(s[0].state.max_abs_diff(&CVec::from_real(&[h, 0.0, h])) < 1e-15);
        assert_eq!(s[0].label(), "x0=0");
        assert_close(s[0].state.inner(&s[1].state).norm(), 0.0, 1e-15);
        assert_close(s[0].state.inner(&s[2].state).re, 0.5, 1e-15);
        for ls in &s {
            assert!(ls.state.is_normalized());
        }
    }

    #[test]
    fn three_qutrit_overlaps() {
        let s = three_qutrit_states();
        assert_close(s[0].inner(&s[1]).re, 1.0 / 3.0, 1e-15);
        assert_close(s[0].inner(&s[2]).re, -1.0 / 3.0, 1e-15);
        for v in &s {
            assert_close(v.norm_sqr(), 1.0, 1e-15);
        }
    }

    #[test]
    fn xor_bits_cycle() {
        for m in 0..4 {
            assert_eq!(XorBits::from_cyclic(m).cyclic_index(), m);
        }
        assert_eq!(XorBits::new(1, 1).x2(), 0);
        assert_eq!(XorBits::new(1, 0).get(2), 1);
        assert_eq!(XorBits::new(1, 0).to_string(), "10");
    }
}
