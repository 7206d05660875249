//! Non-log-concave densities from sphere bundles over four-manifolds with
//! `b⁺ > 1`.
//!
//! Given an integral symplectic class `[ω₀]`, pick an integral `c` with
//! `Q(c,c) > 0` and `Q(c,ω₀) = 0`. The circle action on the associated
//! `S²`-bundle with Euler class `c` has density `½Q(ω₀ + tc, ω₀ + tc)` on
//! `(−ε, ε)`, and its defect `2h = Q(c,c)Q(ω₀,ω₀) − Q(c,c)²t²` is positive
//! there once `Q(ω₀,ω₀) > ε²Q(c,c)`.

use crate::exactlin::{
    evaluate, find_positive_orthogonal_class, ClassVector, IntegerSymmetricForm, LinAlgError,
};
use crate::polycert::{logconcavity_defect, sign_on_interval, Interval, Polynomial, SignKind, SignVerdict};
use crate::rational::{int, rat, Rational};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructError {
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
    #[error("omega0 must have integer coordinates")]
    NonIntegralOmega,
    #[error("internal certificate failure: {0}")]
    CertificateFailed(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CounterexampleInput {
    pub name: String,
    pub form: IntegerSymmetricForm,
    pub omega0: ClassVector,
}

impl CounterexampleInput {
    pub fn new(
        name: impl Into<String>,
        form: IntegerSymmetricForm,
        omega0: ClassVector,
    ) -> Result<Self, ConstructError> {
        let volume = evaluate(&form, &omega0, &omega0)?;
        if !omega0.is_integral() {
            return Err(ConstructError::NonIntegralOmega);
        }
        if omega0.is_zero() {
            return Err(LinAlgError::ZeroVector.into());
        }
        if !volume.is_positive() {
            return Err(LinAlgError::NotPositive(volume).into());
        }
        Ok(Self {
            name: name.into(),
            form,
            omega0,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CounterexampleReport {
    pub name: String,
    pub c: ClassVector,
    pub epsilon: Rational,
    pub density: Polynomial,
    pub interval: Interval,
    pub defect: Polynomial,
    pub certificate: SignVerdict,
    /// `Q(c,c)`, `Q(c,ω₀)`, `Q(ω₀,ω₀)`.
    pub pairings: [Rational; 3],
}

/// Largest `ε = 1/m` with `ε² ≤ Q(ω₀,ω₀) / (2·Q(c,c))`.
pub fn choose_epsilon(
    form: &IntegerSymmetricForm,
    omega0: &ClassVector,
    c: &ClassVector,
) -> Result<Rational, LinAlgError> {
    let ww = evaluate(form, omega0, omega0)?;
    let cc = evaluate(form, c, c)?;
    Ok(epsilon_for(&ww, &cc))
}

fn epsilon_for(ww: &Rational, cc: &Rational) -> Rational {
    // m² ≥ 2cc/ww  ⇔  m² ≥ ⌈2cc/ww⌉ since m² is an integer.
    let ratio = (int(2) * cc / ww).ceil().to_integer();
    let target = ratio.max(BigInt::one());
    let mut m = target.sqrt();
    if &m * &m < target {
        m += 1;
    }
    Rational::new(BigInt::one(), m)
}

pub fn build_counterexample(input: &CounterexampleInput) -> Result<CounterexampleReport, ConstructError> {
    let form = &input.form;
    let omega0 = &input.omega0;
    let c = find_positive_orthogonal_class(form, omega0)?;
    let cc = evaluate(form, &c, &c)?;
    let cw = evaluate(form, &c, omega0)?;
    let ww = evaluate(form, omega0, omega0)?;
    let epsilon = epsilon_for(&ww, &cc);

    let half = rat(1, 2);
    let density = Polynomial::new(vec![&ww * &half, cw.clone(), &cc * &half]);
    let defect = logconcavity_defect(&density);
    let interval = Interval::symmetric(&epsilon).expect("epsilon > 0");
    let certificate = sign_on_interval(&defect, &interval);

    if certificate.kind != SignKind::PositiveThroughout {
        return Err(ConstructError::CertificateFailed(format!(
            "defect {defect} is {:?} on {interval}",
            certificate.kind
        )));
    }
    let report = CounterexampleReport {
        name: input.name.clone(),
        c,
        epsilon,
        density,
        interval,
        defect,
        certificate,
        pairings: [cc, cw, ww],
    };
    if !defect_identity_check(&report, form, omega0) {
        return Err(ConstructError::CertificateFailed(
            "defect does not match Q(c,c)Q(w,w) - Q(c,c)^2 t^2".into(),
        ));
    }
    Ok(report)
}

/// `2h = Q(c,c)·Q(ω₀,ω₀) − Q(c,c)²·t²`, coefficient by coefficient.
///
/// The identity needs `Q(c,ω₀) = 0`, so a report carrying a non-orthogonal
/// class fails.
pub fn defect_identity_check(
    report: &CounterexampleReport,
    form: &IntegerSymmetricForm,
    omega0: &ClassVector,
) -> bool {
    let (Ok(cc), Ok(ww)) = (
        evaluate(form, &report.c, &report.c),
        evaluate(form, omega0, omega0),
    ) else {
        return false;
    };
    let Ok(cw) = evaluate(form, &report.c, omega0) else {
        return false;
    };
    let half = rat(1, 2);
    let density = Polynomial::new(vec![&ww * &half, cw, &cc * &half]);
    let closed = Polynomial::new(vec![&cc * &ww, Rational::zero(), -(&cc * &cc)]);
    logconcavity_defect(&density).scale(&int(2)) == closed
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn t4() -> CounterexampleInput {
        CounterexampleInput::new(
            "T4",
            IntegerSymmetricForm::hyperbolic(3),
            ClassVector::from_integers(&[1, 1, 0, 0, 0, 0]),
        )
        .unwrap()
    }

    #[test]
    fn epsilon_examples() {
        assert_eq!(epsilon_for(&int(2), &int(2)), rat(1, 2));
        assert_eq!(epsilon_for(&int(100), &int(1)), int(1));
        assert_eq!(epsilon_for(&int(1), &int(50)), rat(1, 10));
    }

    #[test]
    fn choose_epsilon_from_classes() {
        let q = IntegerSymmetricForm::hyperbolic(3);
        let w = ClassVector::from_integers(&[1, 1, 0, 0, 0, 0]);
        let c = ClassVector::from_integers(&[0, 0, 1, 1, 0, 0]);
        assert_eq!(choose_epsilon(&q, &w, &c).unwrap(), rat(1, 2));
    }

    #[test]
    fn torus_counterexample() {
        let input = t4();
        let r = build_counterexample(&input).unwrap();
        assert_eq!(r.c, ClassVector::from_integers(&[0, 0, 1, 1, 0, 0]));
        assert_eq!(r.epsilon, rat(1, 2));
        assert_eq!(r.density, Polynomial::from_integers(&[1, 0, 1]));
        assert_eq!(r.defect, Polynomial::from_integers(&[2, 0, -2]));
        assert_eq!(r.certificate.kind, SignKind::PositiveThroughout);
        assert!(defect_identity_check(&r, &input.form, &input.omega0));
    }

    #[test]
    fn diagonal_counterexample() {
        let input = CounterexampleInput::new(
            "diag",
            IntegerSymmetricForm::diagonal(&[1, 1]),
            ClassVector::from_integers(&[1, 0]),
        )
        .unwrap();
        let r = build_counterexample(&input).unwrap();
        assert_eq!(r.c, ClassVector::from_integers(&[0, 1]));
        assert_eq!(r.density, Polynomial::new(vec![rat(1, 2), int(0), rat(1, 2)]));
        assert_eq!(r.defect.scale(&int(2)), Polynomial::from_integers(&[1, 0, -1]));
        assert!(r.epsilon <= rat(1, 2));
        assert!(defect_identity_check(&r, &input.form, &input.omega0));
    }

    #[test]
    fn insufficient_bplus() {
        let input = CounterexampleInput::new(
            "b+=1",
            IntegerSymmetricForm::diagonal(&[1, -1]),
            ClassVector::from_integers(&[1, 0]),
        )
        .unwrap();
        assert_eq!(
            build_counterexample(&input),
            Err(ConstructError::LinAlg(LinAlgError::InsufficientBPlus(1)))
        );
    }

    #[test]
    fn input_validation() {
        let q = IntegerSymmetricForm::diagonal(&[1, 1]);
        let half = ClassVector::new(vec![rat(1, 2), int(0)]);
        assert_eq!(
            CounterexampleInput::new("x", q.clone(), half),
            Err(ConstructError::NonIntegralOmega)
        );
        assert!(CounterexampleInput::new("x", q, ClassVector::zeros(2)).is_err());
    }

    #[test]
    fn tampered_report_fails_identity() {
        let input = t4();
        let mut r = build_counterexample(&input).unwrap();
        r.c = ClassVector::from_integers(&[1, 0, 1, 1, 0, 0]);
        assert!(!defect_identity_check(&r, &input.form, &input.omega0));
    }
}
