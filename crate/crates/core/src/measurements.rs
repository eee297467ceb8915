//! POVMs, state ensembles, minimum-error discrimination and its optimality
//! certificate.

use crate::error::{Error, Result};
use crate::linalg::{
    self, c, hermitian_eig, mat_pow_half, min_eigenvalue, r, CMat, CVec, HalfPower, PSD_TOL,
};
use crate::state_family::{qutrit_states, CYCLIC_ORDER};

/// Completeness tolerance on `sum_i Pi_i - I`.
pub const COMPLETENESS_TOL: f64 = 1e-10;
/// Tolerance on ensemble priors summing to one.
pub const PRIOR_TOL: f64 = 1e-12;
/// Trace tolerance for density operators.
pub const TRACE_TOL: f64 = 1e-10;
/// Largest acceptable violation of the minimum-error optimality conditions.
pub const CERTIFICATE_TOL: f64 = 1e-9;

/// Labels of the six elimination outcomes, indexed `2 * bit + value`.
pub const ELIMINATION_LABELS: [&str; 6] = ["x0=0", "x0=1", "x1=0", "x1=1", "x2=0", "x2=1"];
/// Letter names of the same outcomes.
pub const ELIMINATION_NAMES: [&str; 6] = ["A", "B", "C", "D", "E", "F"];

/// Bit index and value learned from elimination outcome `k`.
pub fn elimination_outcome(k: usize) -> (usize, u8) {
    (k / 2, (k % 2) as u8)
}

/// A positive operator-valued measure with one label per outcome.
#[derive(Clone, Debug, PartialEq)]
pub struct Povm {
    pub operators: Vec<CMat>,
    pub labels: Vec<String>,
}

impl Povm {
    /// Build and validate positivity and completeness.
    pub fn new(operators: Vec<CMat>, labels: Vec<String>) -> Result<Self> {
        let p = Self::unchecked(operators, labels)?;
        p.validate()?;
        Ok(p)
    }

    /// Build without checking positivity or completeness (shapes are still
    /// checked). Used for deliberately broken fixtures.
    pub fn unchecked(operators: Vec<CMat>, labels: Vec<String>) -> Result<Self> {
        if operators.is_empty() {
            return Err(Error::InvalidPovm("no operators".into()));
        }
        if operators.len() != labels.len() {
            return Err(Error::InvalidPovm(format!(
                "{} operators but {} labels",
                operators.len(),
                labels.len()
            )));
        }
        let d = operators[0].rows();
        if let Some(k) = operators
            .iter()
            .position(|op| op.rows() != d || op.cols() != d)
        {
            return Err(Error::DimensionMismatch(format!(
                "operator {k} is not {d}x{d}"
            )));
        }
        Ok(Self { operators, labels })
    }

    pub fn dim(&self) -> usize {
        self.operators[0].rows()
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    /// Largest deviation of `sum_i Pi_i` from the identity.
    pub fn completeness_error(&self) -> f64 {
        linalg::sum(&self.operators).max_abs_diff(&CMat::identity(self.dim()))
    }

    pub fn validate(&self) -> Result<()> {
        for (k, op) in self.operators.iter().enumerate() {
            if !op.is_hermitian() {
                return Err(Error::InvalidPovm(format!(
                    "operator {} ({}) is not Hermitian",
                    k, self.labels[k]
                )));
            }
            let min = min_eigenvalue(op)?;
            if min < -PSD_TOL {
                return Err(Error::InvalidPovm(format!(
                    "operator {} ({}) has eigenvalue {min:e}",
                    k, self.labels[k]
                )));
            }
        }
        let err = self.completeness_error();
        if err > COMPLETENESS_TOL {
            return Err(Error::InvalidPovm(format!(
                "operators sum to identity only within {err:e}"
            )));
        }
        Ok(())
    }

    /// Born probabilities for a pure state.
    pub fn probabilities(&self, psi: &CVec) -> Vec<f64> {
        self.operators.iter().map(|op| op.expectation(psi)).collect()
    }

    /// Born probabilities `Tr(rho Pi_k)` for a density operator.
    pub fn probabilities_mixed(&self, rho: &CMat) -> Vec<f64> {
        self.operators
            .iter()
            .map(|op| (rho * op).trace().re)
            .collect()
    }

    /// Merge outcomes into groups; group `j` gets the sum of its members.
    pub fn coarse_grain(&self, groups: &[Vec<usize>], labels: Vec<String>) -> Result<Povm> {
        let ops = groups
            .iter()
            .map(|g| linalg::sum(&g.iter().map(|&k| self.operators[k].clone()).collect::<Vec<_>>()))
            .collect();
        Povm::new(ops, labels)
    }

    /// `{W Pi_k W^dagger}`; a valid POVM whenever `W` is unitary.
    pub fn conjugated(&self, w: &CMat) -> Povm {
        Povm {
            operators: self.operators.iter().map(|op| op.conjugate_by(w)).collect(),
            labels: self.labels.clone(),
        }
    }

    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

/// Weighted collection of density operators.
#[derive(Clone, Debug)]
pub struct StateEnsemble {
    pub states: Vec<CMat>,
    pub priors: Vec<f64>,
    /// Kets, present when every member was supplied as a pure state.
    pub kets: Option<Vec<CVec>>,
    pub labels: Vec<String>,
}

impl StateEnsemble {
    pub fn new(states: Vec<CMat>, priors: Vec<f64>) -> Result<Self> {
        let labels = (0..states.len()).map(|i| i.to_string()).collect();
        let e = Self {
            states,
            priors,
            kets: None,
            labels,
        };
        e.validate()?;
        Ok(e)
    }

    pub fn pure(kets: Vec<CVec>, priors: Vec<f64>) -> Result<Self> {
        if let Some(i) = kets.iter().position(|v| !v.is_normalized()) {
            return Err(Error::InvalidEnsemble(format!(
                "state {i} has squared norm {}",
                kets[i].norm_sqr()
            )));
        }
        let mut e = Self::new(kets.iter().map(CVec::projector).collect(), priors)?;
        e.kets = Some(kets);
        Ok(e)
    }

    pub fn uniform_pure(kets: Vec<CVec>) -> Result<Self> {
        let n = kets.len();
        Self::pure(kets, vec![1.0 / n as f64; n])
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.states.len());
        self.labels = labels;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.states.is_empty() || self.states.len() != self.priors.len() {
            return Err(Error::InvalidEnsemble(format!(
                "{} states with {} priors",
                self.states.len(),
                self.priors.len()
            )));
        }
        if let Some(p) = self.priors.iter().find(|p| p.is_nan() || **p < 0.0) {
            return Err(Error::InvalidEnsemble(format!("negative prior {p}")));
        }
        let total: f64 = self.priors.iter().sum();
        if (total - 1.0).abs() > PRIOR_TOL {
            return Err(Error::InvalidEnsemble(format!("priors sum to {total}")));
        }
        let d = self.states[0].rows();
        for (i, rho) in self.states.iter().enumerate() {
            if rho.rows() != d || rho.cols() != d {
                return Err(Error::DimensionMismatch(format!("state {i} is not {d}x{d}")));
            }
            if !rho.is_psd() {
                return Err(Error::InvalidEnsemble(format!("state {i} is not PSD")));
            }
            let tr = rho.trace().re;
            if (tr - 1.0).abs() > TRACE_TOL {
                return Err(Error::InvalidEnsemble(format!("state {i} has trace {tr}")));
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.states[0].rows()
    }

    /// `sum_i p_i rho_i`.
    pub fn average(&self) -> CMat {
        linalg::sum(
            &self
                .states
                .iter()
                .zip(&self.priors)
                .map(|(rho, &p)| rho.scale_real(p))
                .collect::<Vec<_>>(),
        )
    }

    /// Joint probabilities `p_i Tr(rho_i Pi_k)`, indexed `[i][k]`.
    pub fn joint_probabilities(&self, p: &Povm) -> Result<Vec<Vec<f64>>> {
        if p.dim() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "POVM on dimension {} applied to states of dimension {}",
                p.dim(),
                self.dim()
            )));
        }
        Ok(self
            .states
            .iter()
            .zip(&self.priors)
            .map(|(rho, &prior)| {
                p.probabilities_mixed(rho)
                    .into_iter()
                    .map(|q| prior * q)
                    .collect()
            })
            .collect())
    }
}

/// `sum_i p_i sum_{k in correct[i]} Tr(rho_i Pi_k)`.
pub fn success_probability(p: &Povm, e: &StateEnsemble, correct: &[Vec<usize>]) -> Result<f64> {
    let joint = e.joint_probabilities(p)?;
    let mut total = 0.0;
    for (i, row) in joint.iter().enumerate() {
        let outcomes = correct.get(i).filter(|o| !o.is_empty()).ok_or(Error::UnmappedState(i))?;
        for &k in outcomes {
            total += row.get(k).copied().ok_or_else(|| {
                Error::OutOfRange(format!("outcome {k} does not exist for state {i}"))
            })?;
        }
    }
    Ok(total)
}

/// Correct-outcome map where outcome `i` identifies state `i`.
pub fn identity_map(n: usize) -> Vec<Vec<usize>> {
    (0..n).map(|i| vec![i]).collect()
}

/// For each outcome, the ensemble member with the largest joint probability
/// (ties go to the lowest index), and the resulting success probability.
pub fn best_guess_map(p: &Povm, e: &StateEnsemble) -> Result<(Vec<usize>, f64)> {
    let joint = e.joint_probabilities(p)?;
    let mut guesses = Vec::with_capacity(p.len());
    let mut success = 0.0;
    for k in 0..p.len() {
        let mut best = 0;
        for i in 1..e.len() {
            if joint[i][k] > joint[best][k] {
                best = i;
            }
        }
        guesses.push(best);
        success += joint[best][k];
    }
    Ok((guesses, success))
}

/// Square-root measurement `Pi_i = p rho^{-1/2} rho_i rho^{-1/2}` for an
/// equiprobable pure ensemble. If the states do not span the whole space a
/// final `"residual"` outcome completes the identity.
pub fn square_root_measurement(e: &StateEnsemble) -> Result<Povm> {
    let p0 = e.priors[0];
    if e.priors.iter().any(|p| (p - p0).abs() > PRIOR_TOL) {
        return Err(Error::UnequalPriors(e.priors.clone()));
    }
    if e.kets.is_none() {
        return Err(Error::InvalidEnsemble(
            "square-root measurement needs pure states".into(),
        ));
    }
    let inv_root = mat_pow_half(&e.average(), HalfPower::InverseSqrt)?;
    let mut operators: Vec<CMat> = e
        .states
        .iter()
        .zip(&e.priors)
        .map(|(rho, &p)| (&(&inv_root * rho) * &inv_root).scale_real(p))
        .map(|op| op.hermitian_part())
        .collect();
    let mut labels = e.labels.clone();
    let residual = &CMat::identity(e.dim()) - &linalg::sum(&operators);
    if residual.max_abs() > COMPLETENESS_TOL {
        operators.push(residual.hermitian_part());
        labels.push("residual".into());
    }
    Povm::new(operators, labels)
}

/// Outcome of checking the minimum-error optimality conditions.
#[derive(Clone, Debug, PartialEq)]
pub struct OptimalityReport {
    pub optimal: bool,
    pub max_violation: f64,
    /// `max |Gamma - Gamma^dagger|`.
    pub asymmetry: f64,
    /// Smallest eigenvalue over all `Herm(Gamma) - p_j rho_j`.
    pub min_gap: f64,
}

/// Check `Gamma = sum_i p_i rho_i Pi_i` Hermitian and `Gamma - p_j rho_j >= 0`
/// for every `j`. Outcome `k` is read as a guess of state `k`; outcomes past
/// the last state (such as a residual) guess nothing. Any feasible `Gamma`
/// bounds every POVM's success from above by `Tr Gamma`, so passing the check
/// proves optimality.
pub fn min_error_certificate(p: &Povm, e: &StateEnsemble) -> OptimalityReport {
    let failed = OptimalityReport {
        optimal: false,
        max_violation: f64::INFINITY,
        asymmetry: f64::INFINITY,
        min_gap: f64::NEG_INFINITY,
    };
    if p.dim() != e.dim() {
        return failed;
    }
    let n = e.len().min(p.len());
    let gamma = linalg::sum(
        &(0..n)
            .map(|k| (&e.states[k] * &p.operators[k]).scale_real(e.priors[k]))
            .collect::<Vec<_>>(),
    );
    let asymmetry = gamma.max_asymmetry();
    let herm = gamma.hermitian_part();
    let mut min_gap = f64::INFINITY;
    for (rho, &prior) in e.states.iter().zip(&e.priors) {
        let diff = (&herm - &rho.scale_real(prior)).hermitian_part();
        match min_eigenvalue(&diff) {
            Ok(v) => min_gap = min_gap.min(v),
            Err(_) => return failed,
        }
    }
    let max_violation = asymmetry.max(-min_gap).max(0.0);
    OptimalityReport {
        optimal: max_violation <= CERTIFICATE_TOL,
        max_violation,
        asymmetry,
        min_gap,
    }
}

/// Scale of each elimination operator: `1/4` times the unnormalized
/// projector onto a vector with two entries of modulus one.
pub const ELIMINATION_WEIGHT: f64 = 0.25;

/// The six unambiguous elimination operators on the qutrit, each
/// [`ELIMINATION_WEIGHT`] times a projector onto a vector orthogonal to two
/// of the protocol states.
pub fn elimination_povm() -> Povm {
    let p = elimination_povm_weighted(ELIMINATION_WEIGHT);
    p.validate().expect("elimination operators form a POVM");
    p
}

/// The elimination operators with an arbitrary weight and no validation,
/// for fault-injection fixtures.
pub fn elimination_povm_weighted(weight: f64) -> Povm {
    let vectors: [[f64; 3]; 6] = [
        [1.0, 0.0, 1.0],
        [1.0, 0.0, -1.0],
        [1.0, 1.0, 0.0],
        [1.0, -1.0, 0.0],
        [0.0, 1.0, 1.0],
        [0.0, 1.0, -1.0],
    ];
    let ops = vectors
        .iter()
        .map(|v| CVec::from_real(v).projector().scale_real(weight))
        .collect();
    Povm::unchecked(ops, ELIMINATION_LABELS.iter().map(|s| s.to_string()).collect())
        .expect("six 3x3 operators with six labels")
}

/// Outcomes of the elimination POVM grouped by the bit index they reveal.
pub fn elimination_groups() -> Vec<Vec<usize>> {
    vec![vec![0, 1], vec![2, 3], vec![4, 5]]
}

/// Orthonormal vectors in six dimensions whose projectors, cut down to the
/// first three coordinates, reproduce the elimination operators.
pub fn six_dim_projective_lift() -> Vec<CVec> {
    let rows: [[f64; 6]; 6] = [
        [1.0, 0.0, 1.0, 1.0, 0.0, -1.0],
        [1.0, 0.0, -1.0, 1.0, 0.0, 1.0],
        [1.0, 1.0, 0.0, -1.0, 1.0, 0.0],
        [1.0, -1.0, 0.0, -1.0, -1.0, 0.0],
        [0.0, 1.0, 1.0, 0.0, -1.0, 1.0],
        [0.0, 1.0, -1.0, 0.0, -1.0, -1.0],
    ];
    rows.iter()
        .map(|v| CVec::from_real(v).scale(r(0.5)))
        .collect()
}

/// Honest receiver's measurement in the reversed protocol:
/// `Pi_{x0x1} = |Phi><Phi|` with `Phi = (|0> + (-1)^{x1}|1> + (-1)^{x0}|2>) / 2`,
/// in cyclic order. Equal to the square-root measurement of the qutrit states.
pub fn reversed_receiver_povm() -> Povm {
    let ops = qutrit_states()
        .iter()
        .map(|phi| phi.projector().scale_real(0.75))
        .collect();
    Povm::new(ops, CYCLIC_ORDER.iter().map(|b| b.to_string()).collect())
        .expect("reversed receiver operators form a POVM")
}

/// `{(P0+P2)/2, (P0+P1)/2, (P1+P2)/2}`: guesses which bit index the reversed
/// sender encoded.
pub fn mixed_discrimination_povm() -> Povm {
    let ops = [[0.5, 0.0, 0.5], [0.5, 0.5, 0.0], [0.0, 0.5, 0.5]]
        .iter()
        .map(|d| CMat::diag(d))
        .collect();
    Povm::new(ops, vec!["b=0".into(), "b=1".into(), "b=2".into()])
        .expect("mixed discrimination operators form a POVM")
}

pub fn computational_basis_povm(d: usize) -> Povm {
    let ops = (0..d).map(|k| CVec::basis(d, k).projector()).collect();
    Povm::new(ops, (0..d).map(|k| format!("|{k}>")).collect())
        .expect("basis projectors form a POVM")
}

/// Four-dimensional Hadamard-Walsh matrix (rows are `|++>, |+->, |-+>, |-->`).
pub fn hadamard_walsh() -> CMat {
    CMat::from_real_rows(&[
        &[1.0, 1.0, 1.0, 1.0],
        &[1.0, -1.0, 1.0, -1.0],
        &[1.0, 1.0, -1.0, -1.0],
        &[1.0, -1.0, -1.0, 1.0],
    ])
    .scale_real(0.5)
}

/// Projective measurement on `|+R>, |+L>, |-+>, |-->` used by an entangled
/// cheating sender on the register she keeps.
pub fn four_outcome_cheat_measurement() -> Povm {
    let h = hadamard_walsh();
    let s = 1.0 / 2f64.sqrt();
    let rotated = [
        CVec::new(vec![r(s), c(0.0, s), r(0.0), r(0.0)]),
        CVec::new(vec![r(s), c(0.0, -s), r(0.0), r(0.0)]),
        CVec::basis(4, 2),
        CVec::basis(4, 3),
    ];
    let ops = rotated
        .iter()
        .map(|v| h.mul_vec(v).projector())
        .collect();
    Povm::new(
        ops,
        vec!["+R".into(), "+L".into(), "-+".into(), "--".into()],
    )
    .expect("four-outcome measurement is projective")
}

/// Replace each outcome by the guess it triggers: outcome `k` of the result
/// sums every operator whose guess is `k`, for `n` possible guesses.
pub fn regroup_by_guess(p: &Povm, guesses: &[usize], n: usize) -> Result<Povm> {
    let d = p.dim();
    let mut ops = vec![CMat::zeros(d, d); n];
    for (op, &g) in p.operators.iter().zip(guesses) {
        if g >= n {
            return Err(Error::OutOfRange(format!("guess {g} with only {n} hypotheses")));
        }
        ops[g] = &ops[g] + op;
    }
    Povm::new(ops, (0..n).map(|g| format!("guess {g}")).collect())
}

/// Measure the second factor of a bipartite pure state on `C^{d1} (x) C^{d2}`
/// and return, for every outcome, its probability and the normalized state
/// left on the first factor (`None` when the outcome cannot occur). Uses the
/// Lueders instrument `I (x) Pi_k^{1/2}`.
pub fn condition_on_outcomes(
    joint: &CVec,
    (d1, d2): (usize, usize),
    p: &Povm,
) -> Result<Vec<(f64, Option<CMat>)>> {
    if joint.dim() != d1 * d2 || p.dim() != d2 {
        return Err(Error::DimensionMismatch(format!(
            "state of dimension {} with factors {d1}x{d2} and a POVM on dimension {}",
            joint.dim(),
            p.dim()
        )));
    }
    let id = CMat::identity(d1);
    p.operators
        .iter()
        .map(|op| {
            let k = linalg::kron(&id, &mat_pow_half(op, HalfPower::Sqrt)?);
            let v = k.mul_vec(joint);
            let prob = v.norm_sqr();
            if prob <= 1e-15 {
                return Ok((0.0, None));
            }
            let reduced =
                linalg::partial_trace(&v.projector(), (d1, d2), linalg::Keep::First)?;
            Ok((prob, Some(reduced.scale_real(1.0 / prob))))
        })
        .collect()
}

/// Top eigenvector of each operator of a POVM.
pub fn max_eigenvectors(p: &Povm) -> Result<Vec<(f64, CVec)>> {
    p.operators
        .iter()
        .map(|op| {
            let eig = hermitian_eig(op)?;
            let k = eig.values.len() - 1;
            Ok((eig.values[k], eig.vector(k)))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state_family::{qutrit_state, XorBits};

    fn qutrit_ensemble() -> StateEnsemble {
        StateEnsemble::uniform_pure(qutrit_states()).unwrap()
    }

    #[test]
    fn elimination_is_unambiguous() {
        let p = elimination_povm();
        let a = &p.operators[0];
        assert!(a.expectation(&qutrit_state(XorBits::new(1, 1))).abs() < 1e-15);
        assert!(a.expectation(&qutrit_state(XorBits::new(1, 0))).abs() < 1e-15);
        assert!((a.expectation(&qutrit_state(XorBits::new(0, 0))) - 1.0 / 3.0).abs() < 1e-15);
        assert!(p.completeness_error() < 1e-15);
        // Each outcome reveals the bit value it is labelled with.
        for bits in CYCLIC_ORDER {
            let probs = p.probabilities(&qutrit_state(bits));
            for (k, q) in probs.iter().enumerate() {
                let (bit, value) = elimination_outcome(k);
                if bits.get(bit) != value {
                    assert!(q.abs() < 1e-15);
                } else {
                    assert!((q - 1.0 / 3.0).abs() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn srm_on_qutrits() {
        let e = qutrit_ensemble();
        let srm = square_root_measurement(&e).unwrap();
        assert_eq!(srm.len(), 4);
        let expected = reversed_receiver_povm();
        for (a, b) in srm.operators.iter().zip(&expected.operators) {
            assert!(a.max_abs_diff(b) < 1e-12);
        }
        let p = success_probability(&srm, &e, &identity_map(4)).unwrap();
        assert!((p - 0.75).abs() < 1e-12);
        assert!(min_error_certificate(&srm, &e).optimal);
    }

    #[test]
    fn srm_on_orthonormal_basis() {
        let e = StateEnsemble::uniform_pure((0..3).map(|k| CVec::basis(3, k)).collect()).unwrap();
        let srm = square_root_measurement(&e).unwrap();
        let p = success_probability(&srm, &e, &identity_map(3)).unwrap();
        assert!((p - 1.0).abs() < 1e-14);
    }

    #[test]
    fn srm_adds_residual_for_small_span() {
        let e = StateEnsemble::uniform_pure(vec![CVec::basis(3, 0), CVec::basis(3, 1)]).unwrap();
        let srm = square_root_measurement(&e).unwrap();
        assert_eq!(srm.labels.last().unwrap(), "residual");
        assert!(srm.operators[2].max_abs_diff(&CVec::basis(3, 2).projector()) < 1e-14);
    }

    #[test]
    fn srm_rejects_unequal_priors() {
        let e = StateEnsemble::pure(vec![CVec::basis(2, 0), CVec::basis(2, 1)], vec![0.3, 0.7])
            .unwrap();
        assert!(matches!(
            square_root_measurement(&e),
            Err(Error::UnequalPriors(_))
        ));
    }

    #[test]
    fn unmapped_state_rejected() {
        let e = qutrit_ensemble();
        let p = elimination_povm();
        let map = vec![vec![0], vec![0], vec![1]];
        assert!(matches!(
            success_probability(&p, &e, &map),
            Err(Error::UnmappedState(3))
        ));
    }

    #[test]
    fn elimination_never_wrong() {
        let e = qutrit_ensemble();
        let p = elimination_povm();
        let map: Vec<Vec<usize>> = CYCLIC_ORDER
            .iter()
            .map(|bits| {
                (0..6)
                    .filter(|&k| {
                        let (bit, value) = elimination_outcome(k);
                        bits.get(bit) == value
                    })
                    .collect()
            })
            .collect();
        assert!((success_probability(&p, &e, &map).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn trivial_povm_is_not_optimal() {
        let e = qutrit_ensemble();
        let quarter = CMat::identity(3).scale_real(0.25);
        let p = Povm::new(vec![quarter; 4], (0..4).map(|k| k.to_string()).collect()).unwrap();
        let report = min_error_certificate(&p, &e);
        assert!(!report.optimal);
        let s = success_probability(&p, &e, &identity_map(4)).unwrap();
        assert!((s - 0.25).abs() < 1e-15);
    }

    #[test]
    fn invalid_povms_rejected() {
        let half = CMat::identity(2).scale_real(0.5);
        assert!(Povm::new(vec![half.clone()], vec!["a".into()]).is_err());
        let neg = CMat::diag(&[1.5, 1.0]);
        let fix = CMat::diag(&[-0.5, 0.0]);
        assert!(Povm::new(vec![neg, fix], vec!["a".into(), "b".into()]).is_err());
        assert!(Povm::new(vec![half.clone(), half], vec!["a".into()]).is_err());
    }

    #[test]
    fn lift_restricts_to_elimination() {
        let xi = six_dim_projective_lift();
        assert!(linalg::gram(&xi).max_abs_diff(&CMat::identity(6)) < 1e-15);
        let elim = elimination_povm();
        for (v, op) in xi.iter().zip(&elim.operators) {
            let block = v.projector().select(&[0, 1, 2], &[0, 1, 2]);
            assert!(block.max_abs_diff(op) < 1e-12);
        }
    }

    #[test]
    fn reversed_alice_measurements() {
        let states: Vec<CMat> = [[0.5, 0.0, 0.5], [0.5, 0.5, 0.0], [0.0, 0.5, 0.5]]
            .iter()
            .map(|d| CMat::diag(d))
            .collect();
        let e = StateEnsemble::new(states, vec![1.0 / 3.0; 3]).unwrap();
        let mixed = mixed_discrimination_povm();
        let s = success_probability(&mixed, &e, &identity_map(3)).unwrap();
        assert!((s - 0.5).abs() < 1e-15);
        assert!(min_error_certificate(&mixed, &e).optimal);
        let (guess, best) = best_guess_map(&computational_basis_povm(3), &e).unwrap();
        assert_eq!(guess, vec![0, 1, 0]);
        assert!((best - 0.5).abs() < 1e-15);
    }

    #[test]
    fn four_outcome_measurement_is_projective() {
        let p = four_outcome_cheat_measurement();
        for op in &p.operators {
            assert!((op * op).max_abs_diff(op) < 1e-14);
        }
    }

    #[test]
    fn coarse_graining_elimination() {
        let g = elimination_povm()
            .coarse_grain(&elimination_groups(), vec!["0".into(), "1".into(), "2".into()])
            .unwrap();
        assert!(g.operators[0].max_abs_diff(&CMat::diag(&[0.5, 0.0, 0.5])) < 1e-15);
    }
}
