use super::Polynomial;
use crate::rational::{int, sign, Rational};
use num_traits::{Signed, Zero};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IntervalError {
    #[error("interval lower bound {lower} is not below upper bound {upper}")]
    Empty { lower: String, upper: String },
}

/// Open interval `(lower, upper)`; `None` stands for an infinite end.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Interval {
    lower: Option<Rational>,
    upper: Option<Rational>,
}

impl Interval {
    pub fn new(lower: Option<Rational>, upper: Option<Rational>) -> Result<Self, IntervalError> {
        if let (Some(l), Some(u)) = (&lower, &upper) {
            if l >= u {
                return Err(IntervalError::Empty {
                    lower: l.to_string(),
                    upper: u.to_string(),
                });
            }
        }
        Ok(Self { lower, upper })
    }

    pub fn bounded(lower: Rational, upper: Rational) -> Result<Self, IntervalError> {
        Self::new(Some(lower), Some(upper))
    }

    pub fn real_line() -> Self {
        Self {
            lower: None,
            upper: None,
        }
    }

    /// `(−r, r)` for `r > 0`.
    pub fn symmetric(radius: &Rational) -> Result<Self, IntervalError> {
        Self::bounded(-radius.clone(), radius.clone())
    }

    pub fn lower(&self) -> Option<&Rational> {
        self.lower.as_ref()
    }

    pub fn upper(&self) -> Option<&Rational> {
        self.upper.as_ref()
    }

    pub fn contains(&self, t: &Rational) -> bool {
        self.lower.as_ref().is_none_or(|l| l < t) && self.upper.as_ref().is_none_or(|u| t < u)
    }

    /// A rational point strictly inside.
    pub fn midpoint(&self) -> Rational {
        match (&self.lower, &self.upper) {
            (Some(l), Some(u)) => (l + u) / int(2),
            (Some(l), None) => l + int(1),
            (None, Some(u)) => u - int(1),
            (None, None) => Rational::zero(),
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.lower {
            Some(l) => write!(f, "({l}, ")?,
            None => write!(f, "(-inf, ")?,
        }
        match &self.upper {
            Some(u) => write!(f, "{u})"),
            None => write!(f, "inf)"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SignKind {
    PositiveThroughout,
    NegativeThroughout,
    IdenticallyZero,
    NonNegative,
    NonPositive,
    Mixed,
}

impl SignKind {
    /// `p ≤ 0` everywhere on the interval.
    pub fn is_nonpositive(self) -> bool {
        matches!(
            self,
            Self::NegativeThroughout | Self::NonPositive | Self::IdenticallyZero
        )
    }

    pub fn is_nonnegative(self) -> bool {
        matches!(
            self,
            Self::PositiveThroughout | Self::NonNegative | Self::IdenticallyZero
        )
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::PositiveThroughout => "PositiveThroughout",
            Self::NegativeThroughout => "NegativeThroughout",
            Self::IdenticallyZero => "IdenticallyZero",
            Self::NonNegative => "NonNegative",
            Self::NonPositive => "NonPositive",
            Self::Mixed => "Mixed",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        [
            Self::PositiveThroughout,
            Self::NegativeThroughout,
            Self::IdenticallyZero,
            Self::NonNegative,
            Self::NonPositive,
            Self::Mixed,
        ]
        .into_iter()
        .find(|k| k.name() == name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Witness {
    pub point: Rational,
    pub value: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignVerdict {
    pub kind: SignKind,
    pub witnesses: Vec<Witness>,
}

impl SignVerdict {
    /// Re-evaluates every witness and checks it against the verdict.
    pub fn verify(&self, p: &Polynomial, interval: &Interval) -> bool {
        self.witnesses.iter().all(|w| {
            interval.contains(&w.point)
                && p.evaluate(&w.point) == w.value
                && match self.kind {
                    SignKind::PositiveThroughout => w.value.is_positive(),
                    SignKind::NegativeThroughout => w.value.is_negative(),
                    SignKind::IdenticallyZero => w.value.is_zero(),
                    SignKind::NonNegative => !w.value.is_negative(),
                    SignKind::NonPositive => !w.value.is_positive(),
                    SignKind::Mixed => true,
                }
        }) && (self.kind != SignKind::Mixed
            || (self.witnesses.iter().any(|w| w.value.is_positive())
                && self.witnesses.iter().any(|w| w.value.is_negative())))
    }
}

/// Sturm chain of a square-free polynomial, content-normalised at each step.
struct SturmChain {
    chain: Vec<Polynomial>,
}

impl SturmChain {
    fn new(square_free: &Polynomial) -> Self {
        let mut chain = vec![square_free.primitive()];
        let d = square_free.derivative().primitive();
        if !d.is_zero() {
            chain.push(d);
        }
        while chain.len() >= 2 {
            let n = chain.len();
            let (_, r) = chain[n - 2]
                .div_rem(&chain[n - 1])
                .expect("chain members are nonzero");
            if r.is_zero() {
                break;
            }
            chain.push((-&r).primitive());
        }
        Self { chain }
    }

    fn variations(&self, t: &Rational) -> usize {
        let signs: Vec<i8> = self
            .chain
            .iter()
            .map(|p| sign(&p.evaluate(t)))
            .filter(|&s| s != 0)
            .collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }

    /// Distinct roots in the open interval `(lo, hi)`.
    fn count_open(&self, lo: &Rational, hi: &Rational) -> usize {
        let half_open = self.variations(lo) - self.variations(hi);
        if self.chain[0].evaluate(hi).is_zero() {
            half_open - 1
        } else {
            half_open
        }
    }
}

#[derive(Debug, Clone)]
enum RootCell {
    Exact(Rational),
    /// Exactly one root in `(l, u)`; neither end is a root.
    Isolated(Rational, Rational),
}

impl RootCell {
    fn left(&self) -> &Rational {
        match self {
            Self::Exact(x) => x,
            Self::Isolated(l, _) => l,
        }
    }

    fn right(&self) -> &Rational {
        match self {
            Self::Exact(x) => x,
            Self::Isolated(_, u) => u,
        }
    }
}

/// Strict bound on the modulus of every complex root (Cauchy, plus one).
fn root_bound(p: &Polynomial) -> Rational {
    let lead = p.leading().expect("nonzero").abs();
    let n = p.coeffs().len() - 1;
    let max = p.coeffs()[..n]
        .iter()
        .map(|c| c.abs() / &lead)
        .max()
        .unwrap_or_else(Rational::zero);
    max + int(2)
}

struct Isolator<'a> {
    square_free: &'a Polynomial,
    sturm: SturmChain,
    search_lo: Rational,
    search_hi: Rational,
}

impl Isolator<'_> {
    fn isolate(&self, lo: Rational, hi: Rational, out: &mut Vec<RootCell>) {
        let n = self.sturm.count_open(&lo, &hi);
        if n == 0 {
            return;
        }
        if n == 1
            && lo != self.search_lo
            && hi != self.search_hi
            && !self.square_free.evaluate(&lo).is_zero()
            && !self.square_free.evaluate(&hi).is_zero()
        {
            out.push(RootCell::Isolated(lo, hi));
            return;
        }
        let mid = (&lo + &hi) / int(2);
        self.isolate(lo, mid.clone(), out);
        if self.square_free.evaluate(&mid).is_zero() {
            out.push(RootCell::Exact(mid.clone()));
        }
        self.isolate(mid, hi, out);
    }

    /// Tries to pin an isolated root to an exact rational by alternating
    /// simplest-rational probes with bisection.
    fn exact_root(&self, l: &Rational, u: &Rational) -> Option<Rational> {
        let (mut l, mut u) = (l.clone(), u.clone());
        for _ in 0..64 {
            let probe = simplest_between(&l, &u);
            if self.square_free.evaluate(&probe).is_zero() {
                return Some(probe);
            }
            let mid = (&l + &u) / int(2);
            if self.square_free.evaluate(&mid).is_zero() {
                return Some(mid);
            }
            if self.sturm.count_open(&l, &mid) == 1 {
                u = mid;
            } else {
                l = mid;
            }
        }
        None
    }
}

/// The rational with the smallest denominator in the open interval `(l, u)`,
/// ties broken towards zero.
fn simplest_between(l: &Rational, u: &Rational) -> Rational {
    debug_assert!(l < u);
    if l.is_negative() && u.is_positive() {
        return Rational::zero();
    }
    if !l.is_negative() {
        simplest_positive(l, Some(u))
    } else {
        -simplest_positive(&-u, Some(&-l))
    }
}

/// Simplest rational in `(l, u)` with `l ≥ 0`; `u = None` means `+∞`.
fn simplest_positive(l: &Rational, u: Option<&Rational>) -> Rational {
    let next = Rational::from_integer(l.floor().to_integer() + 1);
    if u.is_none_or(|u| &next < u) {
        return next;
    }
    let u = u.expect("bounded here");
    let fl = l.floor();
    let lo_frac = l - &fl;
    let hi_frac = u - &fl;
    let upper = if lo_frac.is_zero() {
        None
    } else {
        Some(lo_frac.recip())
    };
    fl + simplest_positive(&hi_frac.recip(), upper.as_ref()).recip()
}

/// Certifies the sign of `p` on the open interval `interval`.
///
/// Distinct real roots of the square-free part are isolated by Sturm
/// bisection; the sign between consecutive roots is read off at a rational
/// sample point. Rational roots that can be located exactly are reported as
/// zero witnesses.
pub fn sign_on_interval(p: &Polynomial, interval: &Interval) -> SignVerdict {
    if p.is_zero() {
        return SignVerdict {
            kind: SignKind::IdenticallyZero,
            witnesses: Vec::new(),
        };
    }
    if p.degree() == Some(0) {
        let t = interval.midpoint();
        let value = p.evaluate(&t);
        let kind = if value.is_positive() {
            SignKind::PositiveThroughout
        } else {
            SignKind::NegativeThroughout
        };
        return SignVerdict {
            kind,
            witnesses: vec![Witness { point: t, value }],
        };
    }

    let square_free = p.square_free();
    let bound = root_bound(&square_free);
    // Infinite ends are replaced by points beyond every root.
    let search_lo = match (interval.lower(), interval.upper()) {
        (Some(l), _) => l.clone(),
        (None, Some(u)) => (-bound.clone()).min(u - int(1)),
        (None, None) => -bound.clone(),
    };
    let search_hi = match interval.upper() {
        Some(u) => u.clone(),
        None => bound.max(&search_lo + int(1)),
    };
    let isolator = Isolator {
        sturm: SturmChain::new(&square_free),
        square_free: &square_free,
        search_lo: search_lo.clone(),
        search_hi: search_hi.clone(),
    };

    let mut cells = Vec::new();
    isolator.isolate(search_lo.clone(), search_hi.clone(), &mut cells);

    // One sample between each pair of consecutive root cells, and one on
    // either side of all of them.
    let mut samples = Vec::with_capacity(cells.len() + 1);
    let mut left = search_lo.clone();
    for cell in &cells {
        samples.push(gap_sample(&left, cell.left(), interval));
        left = cell.right().clone();
    }
    samples.push(gap_sample(&left, &search_hi, interval));
    let samples: Vec<Witness> = samples
        .into_iter()
        .map(|t| Witness {
            value: p.evaluate(&t),
            point: t,
        })
        .collect();
    debug_assert!(samples.iter().all(|w| !w.value.is_zero()));

    let any_pos = samples.iter().any(|w| w.value.is_positive());
    let any_neg = samples.iter().any(|w| w.value.is_negative());

    if cells.is_empty() {
        let kind = if any_pos {
            SignKind::PositiveThroughout
        } else {
            SignKind::NegativeThroughout
        };
        return SignVerdict {
            kind,
            witnesses: vec![samples[0].clone()],
        };
    }

    if any_pos && any_neg {
        let mut witnesses = vec![
            samples.iter().find(|w| w.value.is_negative()).unwrap().clone(),
            samples.iter().find(|w| w.value.is_positive()).unwrap().clone(),
        ];
        witnesses.sort_by(|a, b| a.point.cmp(&b.point));
        return SignVerdict {
            kind: SignKind::Mixed,
            witnesses,
        };
    }

    let kind = if any_pos {
        SignKind::NonNegative
    } else {
        SignKind::NonPositive
    };
    let mut witnesses: Vec<Witness> = cells
        .iter()
        .filter_map(|cell| match cell {
            RootCell::Exact(x) => Some(x.clone()),
            RootCell::Isolated(l, u) => isolator.exact_root(l, u),
        })
        .map(|x| Witness {
            point: x,
            value: Rational::zero(),
        })
        .collect();
    witnesses.push(samples[0].clone());
    witnesses.sort_by(|a, b| a.point.cmp(&b.point));
    SignVerdict { kind, witnesses }
}

/// A point strictly between `a` and `b`, kept inside `interval`.
fn gap_sample(a: &Rational, b: &Rational, interval: &Interval) -> Rational {
    let mid = (a + b) / int(2);
    debug_assert!(interval.contains(&mid) || a == b);
    if a == b {
        return a.clone();
    }
    // Prefer a short representation when one is available in the gap.
    let simple = simplest_between(a, b);
    if interval.contains(&simple) && is_simpler(&simple, &mid) {
        simple
    } else {
        mid
    }
}

fn is_simpler(a: &Rational, b: &Rational) -> bool {
    a.denom() < b.denom() || (a.denom() == b.denom() && a.numer().abs() < b.numer().abs())
}
