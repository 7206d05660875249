//! JSON input and report documents. Rationals travel as integers or `"p/q"`
//! strings on input and always as strings on output.

use dhlab_core::polycert::{Interval, Polynomial, SignVerdict};
use dhlab_core::rational::format_rational;
use dhlab_core::{parse_rational, Rational};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;

pub const FORMAT_VERSION: &str = "1";

/// Exact rational in a document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Q(pub Rational);

impl From<Rational> for Q {
    fn from(value: Rational) -> Self {
        Self(value)
    }
}

impl From<&Rational> for Q {
    fn from(value: &Rational) -> Self {
        Self(value.clone())
    }
}

impl Serialize for Q {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&format_rational(&self.0))
    }
}

struct QVisitor;

impl Visitor<'_> for QVisitor {
    type Value = Q;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("an integer or a \"p/q\" string with q > 0")
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<Q, E> {
        Ok(Q(Rational::from_integer(v.into())))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<Q, E> {
        Ok(Q(Rational::from_integer(v.into())))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<Q, E> {
        parse_rational(v)
            .map(Q)
            .ok_or_else(|| E::invalid_value(de::Unexpected::Str(v), &self))
    }
}

impl<'de> Deserialize<'de> for Q {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        deserializer.deserialize_any(QVisitor)
    }
}

pub fn qs(values: &[Rational]) -> Vec<Q> {
    values.iter().map(Q::from).collect()
}

pub fn rationals(values: &[Q]) -> Vec<Rational> {
    values.iter().map(|q| q.0.clone()).collect()
}

/// Open interval as `[lower, upper]`, `null` for an infinite end.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalDoc(pub Option<Q>, pub Option<Q>);

impl From<&Interval> for IntervalDoc {
    fn from(iv: &Interval) -> Self {
        Self(iv.lower().map(Q::from), iv.upper().map(Q::from))
    }
}

impl IntervalDoc {
    pub fn to_interval(&self) -> Option<Interval> {
        Interval::new(self.0.as_ref().map(|q| q.0.clone()), self.1.as_ref().map(|q| q.0.clone())).ok()
    }
}

/// Polynomial with ascending coefficients, plus a readable rendering.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyDoc {
    pub coeffs: Vec<Q>,
    pub text: String,
}

impl From<&Polynomial> for PolyDoc {
    fn from(p: &Polynomial) -> Self {
        Self {
            coeffs: qs(p.coeffs()),
            text: p.to_string(),
        }
    }
}

impl PolyDoc {
    pub fn to_polynomial(&self) -> Polynomial {
        Polynomial::new(rationals(&self.coeffs))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessDoc {
    pub point: Q,
    pub value: Q,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateDoc {
    pub kind: String,
    pub witnesses: Vec<WitnessDoc>,
}

impl From<&SignVerdict> for CertificateDoc {
    fn from(v: &SignVerdict) -> Self {
        Self {
            kind: v.kind.name().to_string(),
            witnesses: v
                .witnesses
                .iter()
                .map(|w| WitnessDoc {
                    point: Q::from(&w.point),
                    value: Q::from(&w.value),
                })
                .collect(),
        }
    }
}

// ---------- input ----------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioKind {
    Form,
    Counterexample,
    DhProfile,
    WallcrossSpec,
    HlData,
}

impl ScenarioKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Form => "form",
            Self::Counterexample => "counterexample",
            Self::DhProfile => "dh_profile",
            Self::WallcrossSpec => "wallcross_spec",
            Self::HlData => "hl_data",
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputDocument {
    pub version: String,
    pub kind: ScenarioKind,
    pub payload: serde_json::Value,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormPayload {
    #[serde(default)]
    pub name: Option<String>,
    pub entries: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CounterexamplePayload {
    #[serde(default)]
    pub name: Option<String>,
    pub form: Vec<Vec<i64>>,
    pub omega0: Vec<Q>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentPayload {
    pub form: Vec<Vec<i64>>,
    pub omega_a: Vec<Q>,
    pub chern: Vec<Q>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PiecePayload {
    pub interval: IntervalDoc,
    #[serde(default)]
    pub density: Option<Vec<Q>>,
    #[serde(default)]
    pub component: Option<ComponentPayload>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DhProfilePayload {
    pub pieces: Vec<PiecePayload>,
    #[serde(default)]
    pub walls: Vec<Q>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StratumPayload {
    pub label: String,
    pub dimension: u32,
    pub hessian: [u32; 2],
    pub signature: i64,
    pub poincare: Vec<Q>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LevelPayload {
    pub value: Q,
    pub strata: Vec<StratumPayload>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialPayload {
    pub signature: i64,
    pub poincare: Vec<Q>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WallcrossPayload {
    #[serde(default)]
    pub ambient_dimension: Option<u32>,
    pub levels: Vec<LevelPayload>,
    pub initial: InitialPayload,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingPayload {
    pub b1: usize,
    #[serde(default)]
    pub cup_12_3: Vec<Vec<Vec<Q>>>,
    #[serde(default)]
    pub pairing_13: Option<Vec<Vec<Q>>>,
    pub form: Vec<Vec<i64>>,
    #[serde(default)]
    pub volume_normalization: Option<Q>,
}

fn default_bound() -> u64 {
    1000
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HlPayload {
    pub ring: RingPayload,
    pub omega0: Vec<Q>,
    #[serde(default)]
    pub beta2: Option<Vec<Q>>,
    #[serde(default)]
    pub beta4: Option<Q>,
    #[serde(default)]
    pub epsilon: Option<Q>,
    #[serde(default = "default_bound")]
    pub bound: u64,
    #[serde(default)]
    pub c: Option<Vec<Q>>,
}

// ---------- reports ----------

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportDocument {
    pub version: String,
    pub report: ReportBody,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "result", rename_all = "snake_case")]
pub enum ReportBody {
    Signature(SignatureReport),
    Counterexample(CounterexampleReportDoc),
    DhProfile(DhReport),
    Walls(WallsReport),
    HardLefschetz(HlReport),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignatureReport {
    pub name: Option<String>,
    pub b_plus: usize,
    pub b_minus: usize,
    pub b_zero: usize,
    pub signature: i64,
    pub diagonal: Vec<Q>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairingsDoc {
    pub cc: Q,
    pub cw: Q,
    pub ww: Q,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CounterexampleReportDoc {
    pub name: String,
    pub c: Vec<Q>,
    pub epsilon: Q,
    pub interval: IntervalDoc,
    pub density: PolyDoc,
    pub defect: PolyDoc,
    pub certificate: CertificateDoc,
    pub pairings: PairingsDoc,
    pub defect_identity: bool,
    pub verdict: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PieceReportDoc {
    pub interval: IntervalDoc,
    pub density: PolyDoc,
    pub defect: PolyDoc,
    pub certificate: CertificateDoc,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WallCheckDoc {
    pub wall: Q,
    pub left_derivative: Q,
    pub right_derivative: Q,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DhReport {
    pub pieces: Vec<PieceReportDoc>,
    pub wall_checks: Vec<WallCheckDoc>,
    pub boundary_walls: Vec<Q>,
    pub verdict: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientDoc {
    pub interval: IntervalDoc,
    pub signature: i64,
    pub poincare: PolyDoc,
    pub b2: Q,
    pub b_plus: Q,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JumpDoc {
    pub value: Q,
    pub signature_jump: i64,
    pub poincare_jump: PolyDoc,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WallsReport {
    pub strict_taxonomy: bool,
    pub profiles: Vec<QuotientDoc>,
    pub jumps: Vec<JumpDoc>,
    pub b_plus_constant: bool,
    pub sigma_b2_changes: Vec<Q>,
    pub duality_warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Map2WitnessDoc {
    pub phi: Vec<Q>,
    pub k: Q,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HlReport {
    pub epsilon: Q,
    /// `"given"` or `"searched"`.
    pub epsilon_source: String,
    pub base_hard_lefschetz: bool,
    pub map1_class: Vec<Q>,
    pub map1_injective: bool,
    pub map2_injective: bool,
    pub det_nonzero: bool,
    pub neq1_holds: bool,
    pub overall: bool,
    pub map1_witness: Option<Vec<Q>>,
    pub map2_witness: Option<Map2WitnessDoc>,
}

impl ReportDocument {
    pub fn new(report: ReportBody) -> Self {
        Self {
            version: FORMAT_VERSION.to_string(),
            report,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }
}
