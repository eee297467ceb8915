//! Sender cheating when the receiver does not test.
//!
//! The sender sends a pure state `sum_m c_m |psi_m>` in the span of the honest
//! states. The probability that the receiver learns bit index `b` is the
//! quadratic form `c^dagger M_b c`, subject to `c^dagger (M_0+M_1+M_2) c = 1`.
//! The Fourier vectors diagonalize `M_0+M_1+M_2`; rescaling by the square
//! roots of its eigenvalues turns the constraint into the unit sphere, so the
//! best achievable probability is the largest eigenvalue of the rescaled `M_b`.

use crate::error::{Error, Result};
use crate::linalg::{c, hermitian_eig, r, CMat, CVec, C64};
use crate::state_family::OverlapParams;

/// Below this a denominator or constraint eigenvalue counts as zero.
pub const DEGENERACY_TOL: f64 = 1e-12;
/// Agreement required between alternative closed-form branches.
pub const BRANCH_TOL: f64 = 1e-10;

/// The quadratic forms of the optimization and the Fourier change of basis.
#[derive(Clone, Debug)]
pub struct EigProblem {
    pub m0: CMat,
    pub m1: CMat,
    pub m2: CMat,
    /// Columns `(1/2)(1, i^k, (-1)^k, (-i)^k)`.
    pub v: CMat,
    /// `diag(sqrt(Lambda_k))`.
    pub d_sq: CMat,
    /// Eigenvalues `1+G+2ReF, 1-G+2ImF, 1+G-2ReF, 1-G-2ImF` of `M_0+M_1+M_2`.
    pub lambdas: [f64; 4],
}

impl EigProblem {
    pub fn new(p: &OverlapParams) -> Result<Self> {
        p.fourier_weights()?;
        let f = p.f();
        let fc = f.conj();
        let t = r(1.0 / 3.0);
        let g = r(p.g);
        let z = C64::default();
        let m = |rows: [[C64; 4]; 4]| {
            CMat::from_rows(&rows.iter().map(|row| row.to_vec()).collect::<Vec<_>>())
        };
        let m0 = m([[t, fc, z, z], [f, t, z, z], [z, z, t, fc], [z, z, f, t]]);
        let m1 = m([[t, z, z, f], [z, t, fc, z], [z, f, t, z], [fc, z, z, t]]);
        let m2 = m([[t, z, g, z], [z, t, z, g], [g, z, t, z], [z, g, z, t]]);
        let omega = [r(1.0), c(0.0, 1.0), r(-1.0), c(0.0, -1.0)];
        let v = CMat::from_fn(4, 4, |j, k| omega[(j * k) % 4] * 0.5);
        let lambdas = raw_lambdas(p).map(|l| if l.abs() <= DEGENERACY_TOL { 0.0 } else { l });
        let d_sq = CMat::diag(&lambdas.map(|l| l.max(0.0).sqrt()));
        Ok(Self {
            m0,
            m1,
            m2,
            v,
            d_sq,
            lambdas,
        })
    }

    pub fn m(&self, b: usize) -> &CMat {
        match b {
            0 => &self.m0,
            1 => &self.m1,
            _ => &self.m2,
        }
    }

    /// Fourier indices with a nonzero constraint eigenvalue.
    pub fn support(&self) -> Vec<usize> {
        (0..4).filter(|&k| self.lambdas[k] > DEGENERACY_TOL).collect()
    }

    /// `D^{-1} V^dagger M_b V D^{-1}` restricted to the support.
    pub fn transformed(&self, b: usize) -> CMat {
        let s = self.support();
        let vmv = &(&self.v.adjoint() * self.m(b)) * &self.v;
        CMat::from_fn(s.len(), s.len(), |i, j| {
            vmv[(s[i], s[j])] / (self.lambdas[s[i]] * self.lambdas[s[j]]).sqrt()
        })
    }

    /// Map rescaled coordinates `y` on the support back to coefficients
    /// `c = V D^{-1} y`.
    pub fn coefficients(&self, y: &CVec) -> CVec {
        let s = self.support();
        let mut full = vec![C64::default(); 4];
        for (i, &k) in s.iter().enumerate() {
            full[k] = y[i] / self.lambdas[k].sqrt();
        }
        self.v.mul_vec(&CVec::new(full))
    }
}

fn raw_lambdas(p: &OverlapParams) -> [f64; 4] {
    [
        1.0 + p.g + 2.0 * p.re_f,
        1.0 - p.g + 2.0 * p.im_f,
        1.0 + p.g - 2.0 * p.re_f,
        1.0 - p.g - 2.0 * p.im_f,
    ]
}

/// Eigenvalue oracle output.
#[derive(Clone, Debug, PartialEq)]
pub struct NotestOracle {
    /// Largest achievable `p(b=0)` (equal to that of `b=1`).
    pub p01: f64,
    /// Largest achievable `p(b=1)`, computed separately as a symmetry check.
    pub p1: f64,
    pub p2: f64,
    /// Rescaled eigenvalues of `M_2` on the support, ascending.
    pub m2_spectrum: Vec<f64>,
    /// Worst `|p(b=0)+p(b=1)+p(b=2) - 1|` over the maximizing states.
    pub normalization_residual: f64,
}

impl NotestOracle {
    pub fn overall(&self) -> f64 {
        self.p01.max(self.p2)
    }
}

/// Maximize each `p(b=i)` by eigen-decomposition of the rescaled forms.
pub fn alice_notest_oracle(p: &OverlapParams) -> Result<NotestOracle> {
    let prob = EigProblem::new(p)?;
    let mut tops = [0.0; 3];
    let mut residual = 0.0f64;
    let mut m2_spectrum = Vec::new();
    for (b, top) in tops.iter_mut().enumerate() {
        let eig = hermitian_eig(&prob.transformed(b).hermitian_part())?;
        let k = eig.values.len() - 1;
        *top = eig.values[k];
        let coeffs = prob.coefficients(&eig.vector(k));
        let total: f64 = (0..3).map(|i| prob.m(i).expectation(&coeffs)).sum();
        residual = residual.max((total - 1.0).abs());
        if b == 2 {
            m2_spectrum = eig.values.clone();
        }
    }
    Ok(NotestOracle {
        p01: tops[0],
        p1: tops[1],
        p2: tops[2],
        m2_spectrum,
        normalization_residual: residual,
    })
}

/// The four reduced expressions available when `F` is real.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RealBranches {
    /// `(1/3+|F|)/(1-G)`
    pub i: Option<f64>,
    /// `(1/3+|F|)/(1+G+2|F|)`
    pub ii: Option<f64>,
    /// `(1/3+G)/(1+G-2|F|)`
    pub iii: Option<f64>,
    /// `(1/3-G)/(1-G)`
    pub iv: Option<f64>,
}

impl RealBranches {
    pub fn new(f: f64, g: f64) -> Self {
        let a = f.abs();
        Self {
            i: ratio(1.0 / 3.0 + a, 1.0 - g),
            ii: ratio(1.0 / 3.0 + a, 1.0 + g + 2.0 * a),
            iii: ratio(1.0 / 3.0 + g, 1.0 + g - 2.0 * a),
            iv: ratio(1.0 / 3.0 - g, 1.0 - g),
        }
    }
}

fn ratio(num: f64, den: f64) -> Option<f64> {
    (den > DEGENERACY_TOL).then(|| num / den)
}

fn max_opt(values: &[Option<f64>]) -> Option<f64> {
    values.iter().flatten().copied().reduce(f64::max)
}

/// Piecewise choice between two branches; near the boundary both are
/// evaluated and the larger is used.
fn piecewise(
    x: f64,
    threshold: f64,
    at_or_above: Option<f64>,
    below: Option<f64>,
) -> Option<f64> {
    if (x - threshold).abs() <= DEGENERACY_TOL {
        max_opt(&[at_or_above, below])
    } else if x >= threshold {
        at_or_above
    } else {
        below
    }
}

/// Closed-form evaluation of the no-test cheating probabilities.
#[derive(Clone, Debug, PartialEq)]
pub struct NotestClosedForm {
    pub lambda00: f64,
    pub lambda01: f64,
    /// Smaller eigenvalue of each block; absent when the block is degenerate.
    pub lambda02: Option<f64>,
    pub lambda03: Option<f64>,
    /// `(1/3 +- G) / Lambda_k`, absent where `Lambda_k = 0`.
    pub lambda2: [Option<f64>; 4],
    /// `p(b=0)_max = p(b=1)_max`.
    pub p01: f64,
    /// `p(b=2)_max`.
    pub p2: f64,
    pub overall: f64,
    /// True when a block denominator vanished and the support-restricted
    /// value was used instead of the quadratic-formula expression.
    pub degenerate: bool,
    pub real_branches: Option<RealBranches>,
    pub dominant_branch: &'static str,
}

/// Larger and smaller eigenvalue of one rescaled `2x2` block of `M_0`.
/// For the `{0, 2}` block pass `(G, ReF, ImF)`; for `{1, 3}` pass
/// `(-G, ImF, ReF)`. `lambda_plus`/`lambda_minus` are the constraint
/// eigenvalues `1 + g +- 2a` of the two coordinates.
fn block_eigenvalues(
    g_sign: f64,
    a: f64,
    other: f64,
    lambda_plus: f64,
    lambda_minus: f64,
) -> (f64, Option<f64>, bool) {
    let gg = 1.0 + g_sign;
    let den = gg * gg - 4.0 * a * a;
    if den > DEGENERACY_TOL && lambda_plus > DEGENERACY_TOL && lambda_minus > DEGENERACY_TOL {
        let centre = gg / 3.0 - 2.0 * a * a;
        let k = 1.0 / 3.0 + g_sign;
        let disc = (k * k * a * a + den * other * other).max(0.0).sqrt();
        ((centre + disc) / den, Some((centre - disc) / den), false)
    } else {
        let plus = ratio(1.0 / 3.0 + a, lambda_plus);
        let minus = ratio(1.0 / 3.0 - a, lambda_minus);
        (max_opt(&[plus, minus]).unwrap_or(0.0), None, true)
    }
}

/// Closed forms for `lambda~_00`, `lambda~_01`, `p(b=2)_max` and, for real
/// `F`, the reduced expressions (i)-(iv). Alternative branch formulas are
/// cross-checked and a disagreement beyond `1e-10` is an error.
pub fn alice_notest_closed_form(p: &OverlapParams) -> Result<NotestClosedForm> {
    p.fourier_weights()?;
    let lam = raw_lambdas(p).map(|l| if l.abs() <= DEGENERACY_TOL { 0.0 } else { l });
    let (re, im, g) = (p.re_f, p.im_f, p.g);

    let (lambda00, lambda02, deg0) = block_eigenvalues(g, re, im, lam[0], lam[2]);
    let (lambda01, lambda03, deg1) = block_eigenvalues(-g, im, re, lam[1], lam[3]);
    let p01 = lambda00.max(lambda01);

    let m2 = [1.0 / 3.0 + g, 1.0 / 3.0 - g, 1.0 / 3.0 + g, 1.0 / 3.0 - g];
    let lambda2: [Option<f64>; 4] = std::array::from_fn(|k| ratio(m2[k], lam[k]));
    let p2 = max_opt(&lambda2).unwrap_or(0.0);

    if p.is_honest_feasible() {
        let (ar, ai) = (re.abs(), im.abs());
        let tden = 2.0 - 3.0 * ar - 3.0 * ai;
        if tden > DEGENERACY_TOL {
            let threshold = (ai - ar) / tden;
            let upper = ratio(1.0 / 3.0 + g, 1.0 + g - 2.0 * ar);
            let lower = ratio(1.0 / 3.0 - g, 1.0 - g - 2.0 * ai);
            if let Some(v) = piecewise(g, threshold, upper, lower) {
                check_branch("p(b=2) piecewise", v, p2)?;
            }
        }
    }

    let is_real = im == 0.0;
    let real_branches = is_real.then(|| RealBranches::new(re, g));
    if let (Some(rb), true) = (real_branches, p.is_honest_feasible()) {
        let a = re.abs();
        if let Some(v) = piecewise(g, -a, rb.i, rb.ii) {
            check_branch("p(b=0) real-F reduction", v, p01)?;
        }
        if 2.0 - 3.0 * a > DEGENERACY_TOL {
            if let Some(v) = piecewise(g, -a / (2.0 - 3.0 * a), rb.iii, rb.iv) {
                check_branch("p(b=2) real-F reduction", v, p2)?;
            }
        }
    }

    let overall = p01.max(p2);
    let dominant_branch = match real_branches {
        Some(rb) => pick(
            overall,
            &[("(i)", rb.i), ("(iii)", rb.iii), ("(iv)", rb.iv), ("(ii)", rb.ii)],
        ),
        None => pick(
            overall,
            &[
                ("lambda00", Some(lambda00)),
                ("lambda01", Some(lambda01)),
                ("p2", Some(p2)),
            ],
        ),
    };

    Ok(NotestClosedForm {
        lambda00,
        lambda01,
        lambda02,
        lambda03,
        lambda2,
        p01,
        p2,
        overall,
        degenerate: deg0 || deg1,
        real_branches,
        dominant_branch,
    })
}

fn check_branch(name: &str, branch: f64, general: f64) -> Result<()> {
    if (branch - general).abs() > BRANCH_TOL {
        return Err(Error::BranchMismatch(format!(
            "{name} gives {branch}, general expression gives {general}"
        )));
    }
    Ok(())
}

/// First candidate (in the given order) that attains the maximum within
/// `1e-12`.
fn pick(overall: f64, candidates: &[(&'static str, Option<f64>)]) -> &'static str {
    candidates
        .iter()
        .find(|(_, v)| v.is_some_and(|v| v >= overall - DEGENERACY_TOL))
        .map(|(name, _)| *name)
        .unwrap_or("none")
}
