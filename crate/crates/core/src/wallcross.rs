//! Wall crossing for symplectic quotients of a Hamiltonian circle action on a
//! six-manifold.
//!
//! Crossing a critical level changes the signature by
//! `Σ_{q odd} (−1)^b σ(X)` and the Poincaré polynomial by
//! `Σ P(X)·(t^{2b} − t^{2f})/(1 − t²)`, where the critical submanifold `X`
//! has Hessian type `(2f, 2b)` and `q = f + b`. Between critical levels the
//! quotient does not change, so tracking these two jumps is enough to follow
//! `b⁺ = (σ + b₂)/2` across the whole moment image.

use crate::polycert::{quadratic_discriminant, Interval, Polynomial};
use crate::rational::{int, is_integral, Rational};
use num_traits::{Signed, Zero};
use std::collections::HashSet;
use thiserror::Error;

pub const SIX_MANIFOLD: u32 = 6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WallError {
    #[error("stratum {label}: {reason}")]
    InvalidStratum { label: String, reason: String },
    #[error("level {0} has no strata")]
    EmptyLevel(Rational),
    #[error("duplicate stratum label {label:?} at level {value}")]
    DuplicateLabel { value: Rational, label: String },
    #[error("critical values must be strictly increasing")]
    UnorderedLevels,
    #[error("at least two critical levels (minimum and maximum) are required")]
    TooFewLevels,
    #[error("ambient dimension {0} is not supported; only 6 is")]
    UnsupportedAmbient(u32),
    #[error("division by 1 - t^2 is inexact for stratum {0}")]
    InternalDivisionInexact(String),
    #[error("Betti number b_{degree} = {value} is negative on interval {interval}")]
    NegativeBetti { interval: String, degree: usize, value: Rational },
    #[error("b+ = {value} is not a non-negative integer on interval {interval}")]
    NonIntegralBPlus { interval: String, value: Rational },
    #[error("illegal stratum {label} at level {value}: {reason}")]
    IllegalStratum { value: Rational, label: String, reason: String },
    #[error("lambda must be non-empty")]
    EmptyLambda,
    #[error("r = {0} must be positive")]
    NonPositiveRadius(Rational),
    #[error("discriminant cross-check failed: generic {generic}, closed form {closed}")]
    DiscriminantMismatch { generic: Rational, closed: Rational },
}

/// A connected critical submanifold with Hessian type `(2f, 2b)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriticalStratumData {
    pub label: String,
    pub dimension: u32,
    pub two_f: u32,
    pub two_b: u32,
    pub signature: i64,
    pub poincare: Polynomial,
}

impl CriticalStratumData {
    pub fn new(
        label: impl Into<String>,
        dimension: u32,
        (two_f, two_b): (u32, u32),
        signature: i64,
        poincare: Polynomial,
    ) -> Result<Self, WallError> {
        let s = Self {
            label: label.into(),
            dimension,
            two_f,
            two_b,
            signature,
            poincare,
        };
        s.validate(SIX_MANIFOLD)?;
        Ok(s)
    }

    /// Isolated fixed point: `P = 1`, `σ = 1`.
    pub fn point(label: impl Into<String>, hessian: (u32, u32)) -> Result<Self, WallError> {
        Self::new(label, 0, hessian, 1, Polynomial::from_integers(&[1]))
    }

    /// Surface of genus `g` with Hessian `(2, 2)`.
    pub fn surface(label: impl Into<String>, genus: i64) -> Result<Self, WallError> {
        Self::new(
            label,
            2,
            (2, 2),
            0,
            Polynomial::from_integers(&[1, 2 * genus, 1]),
        )
    }

    fn invalid(&self, reason: impl Into<String>) -> WallError {
        WallError::InvalidStratum {
            label: self.label.clone(),
            reason: reason.into(),
        }
    }

    fn validate(&self, ambient: u32) -> Result<(), WallError> {
        if !self.dimension.is_multiple_of(2) || !self.two_f.is_multiple_of(2) || !self.two_b.is_multiple_of(2) {
            return Err(self.invalid("dimension and Hessian ranks must be even"));
        }
        if self.dimension + self.two_f + self.two_b != ambient {
            return Err(self.invalid(format!(
                "dimension {} + 2f {} + 2b {} != {ambient}",
                self.dimension, self.two_f, self.two_b
            )));
        }
        if self
            .poincare
            .coeffs()
            .iter()
            .any(|c| c.is_negative() || !is_integral(c))
        {
            return Err(self.invalid("Poincare coefficients must be non-negative integers"));
        }
        if !self.poincare.evaluate(&int(1)).is_positive() {
            return Err(self.invalid("Poincare polynomial must be nonzero"));
        }
        if self.poincare.degree().unwrap_or(0) > self.dimension as usize {
            return Err(self.invalid("Poincare polynomial exceeds the dimension"));
        }
        Ok(())
    }

    pub fn f(&self) -> u32 {
        self.two_f / 2
    }

    pub fn b(&self) -> u32 {
        self.two_b / 2
    }

    /// Half rank of the symplectic normal bundle.
    pub fn half_rank(&self) -> u32 {
        (self.two_f + self.two_b) / 2
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CriticalLevelData {
    pub value: Rational,
    pub strata: Vec<CriticalStratumData>,
}

impl CriticalLevelData {
    pub fn new(value: Rational, strata: Vec<CriticalStratumData>) -> Result<Self, WallError> {
        if strata.is_empty() {
            return Err(WallError::EmptyLevel(value));
        }
        let mut seen = HashSet::new();
        for s in &strata {
            if !seen.insert(s.label.as_str()) {
                return Err(WallError::DuplicateLabel {
                    value,
                    label: s.label.clone(),
                });
            }
        }
        Ok(Self { value, strata })
    }
}

/// Topological invariants of the quotient over one open interval of regular
/// values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientProfile {
    pub interval: Interval,
    pub signature: i64,
    pub poincare: Polynomial,
    pub b2: Rational,
    pub b_plus: Rational,
}

impl QuotientProfile {
    pub fn new(interval: Interval, signature: i64, poincare: Polynomial) -> Self {
        let b2 = poincare.coeff(2);
        let b_plus = (int(signature) + &b2) / int(2);
        Self {
            interval,
            signature,
            poincare,
            b2,
            b_plus,
        }
    }

    fn validate(&self) -> Result<(), WallError> {
        for (degree, value) in self.poincare.coeffs().iter().enumerate() {
            if value.is_negative() {
                return Err(WallError::NegativeBetti {
                    interval: self.interval.to_string(),
                    degree,
                    value: value.clone(),
                });
            }
        }
        if self.b_plus.is_negative() || !is_integral(&self.b_plus) {
            return Err(WallError::NonIntegralBPlus {
                interval: self.interval.to_string(),
                value: self.b_plus.clone(),
            });
        }
        Ok(())
    }

    /// Poincaré duality for a 4-dimensional quotient: `P(t) = t⁴·P(1/t)`.
    pub fn is_palindromic(&self) -> bool {
        self.poincare.degree().is_some_and(|d| d <= 4) && self.poincare.reversed(4) == self.poincare
    }
}

/// Critical levels of the moment map plus the quotient just above the minimum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MomentProfileSpec {
    ambient_dimension: u32,
    critical_levels: Vec<CriticalLevelData>,
    initial: QuotientProfile,
}

impl MomentProfileSpec {
    /// `initial_signature` and `initial_poincare` describe the quotient on the
    /// first regular interval `(a₀, a₁)`.
    pub fn new(
        critical_levels: Vec<CriticalLevelData>,
        initial_signature: i64,
        initial_poincare: Polynomial,
    ) -> Result<Self, WallError> {
        Self::with_ambient(SIX_MANIFOLD, critical_levels, initial_signature, initial_poincare)
    }

    pub fn with_ambient(
        ambient_dimension: u32,
        critical_levels: Vec<CriticalLevelData>,
        initial_signature: i64,
        initial_poincare: Polynomial,
    ) -> Result<Self, WallError> {
        if ambient_dimension != SIX_MANIFOLD {
            return Err(WallError::UnsupportedAmbient(ambient_dimension));
        }
        if critical_levels.len() < 2 {
            return Err(WallError::TooFewLevels);
        }
        if critical_levels.windows(2).any(|w| w[0].value >= w[1].value) {
            return Err(WallError::UnorderedLevels);
        }
        for level in &critical_levels {
            for s in &level.strata {
                s.validate(ambient_dimension)?;
            }
        }
        let interval = Interval::bounded(
            critical_levels[0].value.clone(),
            critical_levels[1].value.clone(),
        )
        .expect("levels are increasing");
        let initial = QuotientProfile::new(interval, initial_signature, initial_poincare);
        initial.validate()?;
        Ok(Self {
            ambient_dimension,
            critical_levels,
            initial,
        })
    }

    pub fn ambient_dimension(&self) -> u32 {
        self.ambient_dimension
    }

    pub fn critical_levels(&self) -> &[CriticalLevelData] {
        &self.critical_levels
    }

    pub fn initial(&self) -> &QuotientProfile {
        &self.initial
    }

    /// Levels strictly between the minimum and the maximum.
    pub fn interior_levels(&self) -> &[CriticalLevelData] {
        &self.critical_levels[1..self.critical_levels.len() - 1]
    }
}

pub fn signature_jump(level: &CriticalLevelData) -> i64 {
    level
        .strata
        .iter()
        .filter(|s| s.half_rank() % 2 == 1)
        .map(|s| if s.b() % 2 == 0 { s.signature } else { -s.signature })
        .sum()
}

pub fn poincare_jump(level: &CriticalLevelData) -> Result<Polynomial, WallError> {
    let one_minus_t2 = Polynomial::from_integers(&[1, 0, -1]);
    let mut total = Polynomial::zero();
    for s in &level.strata {
        let numerator = &Polynomial::monomial(int(1), s.two_b as usize)
            - &Polynomial::monomial(int(1), s.two_f as usize);
        let (q, r) = numerator
            .div_rem(&one_minus_t2)
            .expect("1 - t^2 is nonzero");
        if !r.is_zero() {
            return Err(WallError::InternalDivisionInexact(s.label.clone()));
        }
        total = &total + &(&s.poincare * &q);
    }
    Ok(total)
}

/// Quotient invariants on every open interval between consecutive critical
/// values, starting just above the minimum.
pub fn propagate(spec: &MomentProfileSpec) -> Result<Vec<QuotientProfile>, WallError> {
    let levels = &spec.critical_levels;
    let mut profiles = vec![spec.initial.clone()];
    for (i, level) in spec.interior_levels().iter().enumerate() {
        let prev = profiles.last().expect("non-empty");
        let interval = Interval::bounded(level.value.clone(), levels[i + 2].value.clone())
            .expect("levels are increasing");
        let signature = prev.signature + signature_jump(level);
        let poincare = &prev.poincare + &poincare_jump(level)?;
        let next = QuotientProfile::new(interval, signature, poincare);
        next.validate()?;
        profiles.push(next);
    }
    Ok(profiles)
}

/// Intervals on which the propagated Poincaré polynomial violates duality.
pub fn duality_warnings(profiles: &[QuotientProfile]) -> Vec<String> {
    profiles
        .iter()
        .filter(|p| !p.is_palindromic())
        .map(|p| {
            format!(
                "Poincare polynomial {} on {} is not palindromic of degree 4",
                p.poincare, p.interval
            )
        })
        .collect()
}

fn check_taxonomy(spec: &MomentProfileSpec) -> Result<(), WallError> {
    let levels = spec.critical_levels();
    let last = levels.len() - 1;
    for (i, level) in levels.iter().enumerate() {
        for s in &level.strata {
            let illegal = |reason: &str| WallError::IllegalStratum {
                value: level.value.clone(),
                label: s.label.clone(),
                reason: reason.to_string(),
            };
            if i == 0 || i == last {
                if s.dimension > 4 {
                    return Err(illegal("extremal strata have dimension at most 4"));
                }
                if s.two_f != 0 && s.two_b != 0 {
                    return Err(illegal("extremal strata have a one-sided Hessian"));
                }
                continue;
            }
            match (s.dimension, s.two_f, s.two_b) {
                (0, 2, 4) | (0, 4, 2) | (2, 2, 2) => {}
                (4, ..) => {
                    return Err(illegal(
                        "four-dimensional fixed components occur only at the extremes",
                    ))
                }
                _ => {
                    return Err(illegal(
                        "interior strata must be (2,4)/(4,2) points or (2,2) surfaces",
                    ))
                }
            }
            if s.dimension == 2 && s.signature != 0 {
                return Err(illegal("a surface has signature 0"));
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BPlusConstancy {
    pub constant: bool,
    pub b_plus: Vec<Rational>,
    /// Change of `σ + b₂` across each interior level.
    pub sigma_b2_changes: Vec<Rational>,
    pub profiles: Vec<QuotientProfile>,
}

/// Propagates and reports whether `b⁺` is the same on every interval.
///
/// With `strict` set, interior strata must be `(2,4)`/`(4,2)` points or
/// `(2,2)` surfaces and extremal strata one-sided of dimension ≤ 4.
pub fn bplus_constancy_check(
    spec: &MomentProfileSpec,
    strict: bool,
) -> Result<BPlusConstancy, WallError> {
    if strict {
        check_taxonomy(spec)?;
    }
    let profiles = propagate(spec)?;
    let b_plus: Vec<Rational> = profiles.iter().map(|p| p.b_plus.clone()).collect();
    let sigma_b2_changes = profiles
        .windows(2)
        .map(|w| (int(w[1].signature) + &w[1].b2) - (int(w[0].signature) + &w[0].b2))
        .collect();
    Ok(BPlusConstancy {
        constant: b_plus.windows(2).all(|w| w[0] == w[1]),
        b_plus,
        sigma_b2_changes,
        profiles,
    })
}

/// Signature of a fibre bundle with compact connected structure group.
pub fn fiber_signature(sigma_base: i64, sigma_fiber: i64) -> i64 {
    sigma_base * sigma_fiber
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BPlusOneDefect {
    /// `2(g″g − g′²)` along the line.
    pub defect2: Polynomial,
    /// `−4 S² (λ₂² + … + λ_k²) r²`.
    pub discriminant: Rational,
    /// `S = λ₁² − λ₂² − … − λ_k² = Q(c, c)`.
    pub s: Rational,
}

/// Twice the log-concavity defect of the density on a `b⁺ = 1` quotient, in
/// a basis where `[ω_a] = r·α₁` and `Q = diag(1, −1, …, −1)`; `λ` are the
/// coordinates of `c`.
pub fn bplus_one_defect(lambda: &[Rational], r: &Rational) -> Result<BPlusOneDefect, WallError> {
    let (first, rest) = lambda.split_first().ok_or(WallError::EmptyLambda)?;
    if !r.is_positive() {
        return Err(WallError::NonPositiveRadius(r.clone()));
    }
    let rest_sq: Rational = rest.iter().map(|l| l * l).sum();
    let first_sq = first * first;
    let s = &first_sq - &rest_sq;
    let r2 = r * r;
    let defect2 = Polynomial::new(vec![
        -(&first_sq + &rest_sq) * &r2,
        -(int(2) * &s * first * r),
        -(&s * &s),
    ]);
    let discriminant = -int(4) * &s * &s * &rest_sq * &r2;
    if !s.is_zero() {
        let generic = quadratic_discriminant(&defect2).expect("leading coefficient -S^2 != 0");
        if generic != discriminant {
            return Err(WallError::DiscriminantMismatch {
                generic,
                closed: discriminant,
            });
        }
    }
    Ok(BPlusOneDefect {
        defect2,
        discriminant,
        s,
    })
}

/// The density `g(t) = ½(S t² + 2λ₁ r t + r²)` whose defect
/// [`bplus_one_defect`] describes.
pub fn bplus_one_density(lambda: &[Rational], r: &Rational) -> Result<Polynomial, WallError> {
    let (first, rest) = lambda.split_first().ok_or(WallError::EmptyLambda)?;
    if !r.is_positive() {
        return Err(WallError::NonPositiveRadius(r.clone()));
    }
    let s = first * first - rest.iter().map(|l| l * l).sum::<Rational>();
    let half = crate::rational::rat(1, 2);
    Ok(Polynomial::new(vec![r * r * &half, first * r, s * half]))
}
