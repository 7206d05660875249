use crate::document::*;
use crate::plot::{plot_pieces, PlotSource};
use crate::CliError;
use dhlab_core::construct::{build_counterexample, defect_identity_check, ConstructError, CounterexampleInput};
use dhlab_core::dhcore::{dh_density, log_concavity_verdict, DHProfile, DhError, ReducedComponentData, Verdict};
use dhlab_core::exactlin::{diagonalize, ClassVector, IntegerSymmetricForm, LinAlgError, RationalMatrix};
use dhlab_core::lefschetz::{
    check_hl_four, check_hl_six, find_hl_epsilon, FourManifoldRing, LefschetzError, SixManifoldLefschetzData,
};
use dhlab_core::polycert::{Interval, Polynomial};
use dhlab_core::wallcross::{
    bplus_constancy_check, duality_warnings, poincare_jump, signature_jump, CriticalLevelData, CriticalStratumData,
    MomentProfileSpec, WallError, SIX_MANIFOLD,
};
use dhlab_core::Rational;
use num_traits::{One, Zero};
use serde::de::DeserializeOwned;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Sig,
    Counterexample,
    Dh,
    Walls,
    Hl,
    Plot,
}

impl Command {
    fn expected_kind(self) -> Option<ScenarioKind> {
        match self {
            Self::Sig => Some(ScenarioKind::Form),
            Self::Counterexample => Some(ScenarioKind::Counterexample),
            Self::Dh => Some(ScenarioKind::DhProfile),
            Self::Walls => Some(ScenarioKind::WallcrossSpec),
            Self::Hl => Some(ScenarioKind::HlData),
            Self::Plot => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Options {
    pub resolution: usize,
    pub strict_taxonomy: bool,
}

impl Default for Options {
    fn default() -> Self {
        Self {
            resolution: 100,
            strict_taxonomy: true,
        }
    }
}

fn json_error(e: serde_path_to_error::Error<serde_json::Error>, prefix: &str) -> CliError {
    let path = e.path().to_string();
    let path = match (prefix.is_empty(), path.as_str()) {
        (true, _) => path,
        (false, ".") => prefix.to_string(),
        (false, p) => format!("{prefix}.{p}"),
    };
    CliError::parse(path, e.into_inner().to_string())
}

fn from_text<T: DeserializeOwned>(text: &str) -> Result<T, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| json_error(e, ""))
}

fn from_payload<T: DeserializeOwned>(value: &serde_json::Value) -> Result<T, CliError> {
    serde_path_to_error::deserialize(value).map_err(|e| json_error(e, "payload"))
}

pub fn parse_input(text: &str) -> Result<InputDocument, CliError> {
    let doc: InputDocument = from_text(text)?;
    if doc.version != FORMAT_VERSION {
        return Err(CliError::parse(
            "version",
            format!("unsupported version {:?}, expected {FORMAT_VERSION:?}", doc.version),
        ));
    }
    Ok(doc)
}

pub fn parse_report(text: &str) -> Result<ReportDocument, CliError> {
    let doc: ReportDocument = from_text(text)?;
    if doc.version != FORMAT_VERSION {
        return Err(CliError::parse(
            "version",
            format!("unsupported version {:?}, expected {FORMAT_VERSION:?}", doc.version),
        ));
    }
    Ok(doc)
}

/// Runs one command on one document and returns the text to emit.
pub fn run(command: Command, text: &str, options: &Options) -> Result<String, CliError> {
    if command == Command::Plot {
        return plot_text(text, options);
    }
    let doc = parse_input(text)?;
    let expected = command.expected_kind().expect("non-plot command");
    if doc.kind != expected {
        return Err(CliError::parse(
            "kind",
            format!("this command expects kind {:?}, found {:?}", expected.name(), doc.kind.name()),
        ));
    }
    Ok(ReportDocument::new(compute(&doc, options)?).to_json())
}

pub fn compute(doc: &InputDocument, options: &Options) -> Result<ReportBody, CliError> {
    match doc.kind {
        ScenarioKind::Form => cmd_sig(from_payload(&doc.payload)?).map(ReportBody::Signature),
        ScenarioKind::Counterexample => {
            cmd_counterexample(from_payload(&doc.payload)?).map(ReportBody::Counterexample)
        }
        ScenarioKind::DhProfile => cmd_dh(from_payload(&doc.payload)?).map(ReportBody::DhProfile),
        ScenarioKind::WallcrossSpec => {
            cmd_walls(from_payload(&doc.payload)?, options.strict_taxonomy).map(ReportBody::Walls)
        }
        ScenarioKind::HlData => cmd_hl(from_payload(&doc.payload)?).map(ReportBody::HardLefschetz),
    }
}

// ---------- conversions ----------

fn form_at(entries: Vec<Vec<i64>>, path: &str) -> Result<IntegerSymmetricForm, CliError> {
    IntegerSymmetricForm::new(entries).map_err(|e| {
        let at = match &e {
            LinAlgError::NotSquare { row, .. } => format!("{path}[{row}]"),
            LinAlgError::NotSymmetric { row, col } => format!("{path}[{row}][{col}]"),
            _ => path.to_string(),
        };
        CliError::parse(at, e.to_string())
    })
}

fn class_at(values: &[Q], expected: usize, path: &str) -> Result<ClassVector, CliError> {
    if values.len() != expected {
        return Err(CliError::parse(
            path,
            format!("expected {expected} coordinates, found {}", values.len()),
        ));
    }
    Ok(ClassVector::new(rationals(values)))
}

/// `"VariantName: message"` for a domain error.
fn named<E: std::fmt::Debug + std::fmt::Display>(e: &E) -> String {
    let debug = format!("{e:?}");
    let name = debug.split(['(', ' ', '{']).next().unwrap_or_default();
    format!("{name}: {e}")
}

fn construct_error(e: ConstructError) -> CliError {
    match e {
        ConstructError::CertificateFailed(_) => CliError::Internal(named(&e)),
        ConstructError::LinAlg(inner) => CliError::Invalid(named(&inner)),
        other => CliError::Invalid(named(&other)),
    }
}

fn dh_error(e: DhError) -> CliError {
    match e {
        DhError::LinAlg(inner) => CliError::Invalid(named(&inner)),
        other => CliError::Invalid(named(&other)),
    }
}

fn wall_error(e: WallError) -> CliError {
    match e {
        WallError::InternalDivisionInexact(_) | WallError::DiscriminantMismatch { .. } => {
            CliError::Internal(named(&e))
        }
        other => CliError::Invalid(named(&other)),
    }
}

fn lefschetz_error(e: LefschetzError) -> CliError {
    match e {
        LefschetzError::InternalInconsistency { .. } => CliError::Internal(named(&e)),
        LefschetzError::LinAlg(inner) => CliError::Invalid(named(&inner)),
        LefschetzError::NoEpsilonFound { bound, ref failures } => {
            let summary: Vec<String> = failures
                .iter()
                .take(5)
                .map(|f| {
                    let mut why = Vec::new();
                    if f.map1_singular {
                        why.push("map1 singular");
                    }
                    if f.neq1_violated {
                        why.push("kernel equality");
                    }
                    if f.volume_bound_violated {
                        why.push("volume bound");
                    }
                    format!("m={}: {}", f.m, why.join(", "))
                })
                .collect();
            CliError::Invalid(format!(
                "NoEpsilonFound: no admissible epsilon = 1/m with m <= {bound} ({}{})",
                summary.join("; "),
                if failures.len() > 5 { "; ..." } else { "" }
            ))
        }
        other => CliError::Invalid(named(&other)),
    }
}

// ---------- commands ----------

pub fn cmd_sig(p: FormPayload) -> Result<SignatureReport, CliError> {
    let form = form_at(p.entries, "payload.entries")?;
    let d = diagonalize(&form);
    Ok(SignatureReport {
        name: p.name,
        b_plus: d.b_plus,
        b_minus: d.b_minus,
        b_zero: d.b_zero,
        signature: d.signature(),
        diagonal: qs(&d.diagonal),
    })
}

pub fn cmd_counterexample(p: CounterexamplePayload) -> Result<CounterexampleReportDoc, CliError> {
    let form = form_at(p.form, "payload.form")?;
    let omega0 = class_at(&p.omega0, form.dimension(), "payload.omega0")?;
    let name = p.name.unwrap_or_else(|| "counterexample".to_string());
    let input = CounterexampleInput::new(name, form, omega0).map_err(construct_error)?;
    let r = build_counterexample(&input).map_err(construct_error)?;
    let identity = defect_identity_check(&r, &input.form, &input.omega0);
    if !identity {
        return Err(CliError::Internal("closed-form defect identity failed".into()));
    }
    let [cc, cw, ww] = &r.pairings;
    Ok(CounterexampleReportDoc {
        name: r.name.clone(),
        c: qs(r.c.coords()),
        epsilon: Q::from(&r.epsilon),
        interval: IntervalDoc::from(&r.interval),
        density: PolyDoc::from(&r.density),
        defect: PolyDoc::from(&r.defect),
        certificate: CertificateDoc::from(&r.certificate),
        pairings: PairingsDoc {
            cc: cc.into(),
            cw: cw.into(),
            ww: ww.into(),
        },
        defect_identity: identity,
        verdict: Verdict::StrictlyNonLogConcave.name().to_string(),
    })
}

fn profile_from(p: DhProfilePayload) -> Result<DHProfile, CliError> {
    let mut pieces = Vec::with_capacity(p.pieces.len());
    for (i, piece) in p.pieces.into_iter().enumerate() {
        let path = format!("payload.pieces[{i}]");
        let interval = piece
            .interval
            .to_interval()
            .ok_or_else(|| CliError::parse(format!("{path}.interval"), "lower end must be below upper end"))?;
        let density = match (piece.density, piece.component) {
            (Some(d), None) => Polynomial::new(rationals(&d)),
            (None, Some(c)) => {
                let form = form_at(c.form, &format!("{path}.component.form"))?;
                let n = form.dimension();
                let omega = class_at(&c.omega_a, n, &format!("{path}.component.omega_a"))?;
                let chern = class_at(&c.chern, n, &format!("{path}.component.chern"))?;
                let comp = ReducedComponentData::new(form, omega, chern, interval.clone()).map_err(dh_error)?;
                dh_density(&comp).map_err(dh_error)?
            }
            _ => {
                return Err(CliError::parse(path, "exactly one of `density` or `component` is required"));
            }
        };
        pieces.push((interval, density));
    }
    DHProfile::new(pieces, rationals(&p.walls)).map_err(dh_error)
}

pub fn cmd_dh(p: DhProfilePayload) -> Result<DhReport, CliError> {
    let profile = profile_from(p)?;
    let report = log_concavity_verdict(&profile);
    Ok(DhReport {
        pieces: report
            .per_piece
            .iter()
            .map(|piece| PieceReportDoc {
                interval: IntervalDoc::from(&piece.interval),
                density: PolyDoc::from(&piece.density),
                defect: PolyDoc::from(&piece.defect),
                certificate: CertificateDoc::from(&piece.certificate),
            })
            .collect(),
        wall_checks: report
            .wall_checks
            .iter()
            .map(|w| WallCheckDoc {
                wall: Q::from(&w.wall),
                left_derivative: Q::from(&w.left_derivative),
                right_derivative: Q::from(&w.right_derivative),
                pass: w.pass,
            })
            .collect(),
        boundary_walls: qs(&report.boundary_walls),
        verdict: report.verdict.name().to_string(),
    })
}

fn spec_from(p: WallcrossPayload) -> Result<MomentProfileSpec, CliError> {
    let mut levels = Vec::with_capacity(p.levels.len());
    for (i, level) in p.levels.into_iter().enumerate() {
        let mut strata = Vec::with_capacity(level.strata.len());
        for s in level.strata {
            let stratum = CriticalStratumData::new(
                s.label,
                s.dimension,
                (s.hessian[0], s.hessian[1]),
                s.signature,
                Polynomial::new(rationals(&s.poincare)),
            )
            .map_err(|e| CliError::Invalid(format!("payload.levels[{i}]: {}", named(&e))))?;
            strata.push(stratum);
        }
        levels.push(
            CriticalLevelData::new(level.value.0, strata)
                .map_err(|e| CliError::Invalid(format!("payload.levels[{i}]: {}", named(&e))))?,
        );
    }
    MomentProfileSpec::with_ambient(
        p.ambient_dimension.unwrap_or(SIX_MANIFOLD),
        levels,
        p.initial.signature,
        Polynomial::new(rationals(&p.initial.poincare)),
    )
    .map_err(wall_error)
}

pub fn cmd_walls(p: WallcrossPayload, strict: bool) -> Result<WallsReport, CliError> {
    let spec = spec_from(p)?;
    let check = bplus_constancy_check(&spec, strict).map_err(wall_error)?;
    let mut jumps = Vec::new();
    for level in spec.interior_levels() {
        jumps.push(JumpDoc {
            value: Q::from(&level.value),
            signature_jump: signature_jump(level),
            poincare_jump: PolyDoc::from(&poincare_jump(level).map_err(wall_error)?),
        });
    }
    Ok(WallsReport {
        strict_taxonomy: strict,
        duality_warnings: duality_warnings(&check.profiles),
        profiles: check
            .profiles
            .iter()
            .map(|q| QuotientDoc {
                interval: IntervalDoc::from(&q.interval),
                signature: q.signature,
                poincare: PolyDoc::from(&q.poincare),
                b2: Q::from(&q.b2),
                b_plus: Q::from(&q.b_plus),
            })
            .collect(),
        jumps,
        b_plus_constant: check.constant,
        sigma_b2_changes: qs(&check.sigma_b2_changes),
    })
}

fn ring_from(p: RingPayload) -> Result<FourManifoldRing, CliError> {
    let form = form_at(p.form, "payload.ring.form")?;
    let cup: Vec<Vec<Vec<Rational>>> = p
        .cup_12_3
        .iter()
        .map(|slice| slice.iter().map(|row| rationals(row)).collect())
        .collect();
    let pairing = match p.pairing_13 {
        Some(rows) => {
            let rows: Vec<Vec<Rational>> = rows.iter().map(|r| rationals(r)).collect();
            RationalMatrix::from_rows(rows)
                .ok_or_else(|| CliError::parse("payload.ring.pairing_13", "rows have different lengths"))?
        }
        None => RationalMatrix::identity(p.b1),
    };
    let vol = p.volume_normalization.map(|q| q.0).unwrap_or_else(Rational::one);
    FourManifoldRing::new(p.b1, cup, pairing, form, vol).map_err(lefschetz_error)
}

pub fn cmd_hl(p: HlPayload) -> Result<HlReport, CliError> {
    let ring = ring_from(p.ring)?;
    let n = ring.b2();
    let omega0 = class_at(&p.omega0, n, "payload.omega0")?;
    let beta2 = match &p.beta2 {
        Some(b) => class_at(b, n, "payload.beta2")?,
        None => ClassVector::zeros(n),
    };
    let beta4 = p.beta4.map(|q| q.0).unwrap_or_else(Rational::zero);
    let c = p.c.as_ref().map(|c| class_at(c, n, "payload.c")).transpose()?;
    let (epsilon, source) = match p.epsilon {
        Some(e) => (e.0, "given"),
        None => {
            if p.bound == 0 {
                return Err(CliError::parse("payload.bound", "bound must be positive"));
            }
            let e = find_hl_epsilon(&ring, &omega0, &beta2, &beta4, p.bound, c.as_ref()).map_err(lefschetz_error)?;
            (e, "searched")
        }
    };
    let base = check_hl_four(&ring, &omega0).map_err(lefschetz_error)?.injective;
    let data = SixManifoldLefschetzData::new(ring, omega0, beta2, beta4, epsilon).map_err(lefschetz_error)?;
    let verdict = check_hl_six(&data).map_err(lefschetz_error)?;
    Ok(HlReport {
        epsilon: Q::from(&data.epsilon),
        epsilon_source: source.to_string(),
        base_hard_lefschetz: base,
        map1_class: qs(data.map1_class().coords()),
        map1_injective: verdict.map1_injective,
        map2_injective: verdict.map2_injective,
        det_nonzero: verdict.epsilon_conditions.0,
        neq1_holds: verdict.epsilon_conditions.1,
        overall: verdict.overall,
        map1_witness: verdict.map1_witness.as_deref().map(qs),
        map2_witness: verdict.map2_witness.map(|(phi, k)| Map2WitnessDoc {
            phi: qs(phi.coords()),
            k: Q(k),
        }),
    })
}

// ---------- plot ----------

fn pieces_of_report(body: &ReportBody) -> Result<Vec<(Interval, Polynomial)>, CliError> {
    let convert = |iv: &IntervalDoc, d: &PolyDoc, path: String| {
        iv.to_interval()
            .map(|i| (i, d.to_polynomial()))
            .ok_or_else(|| CliError::parse(path, "lower end must be below upper end"))
    };
    match body {
        ReportBody::Counterexample(r) => Ok(vec![convert(&r.interval, &r.density, "report.result.interval".into())?]),
        ReportBody::DhProfile(r) => r
            .pieces
            .iter()
            .enumerate()
            .map(|(i, p)| convert(&p.interval, &p.density, format!("report.result.pieces[{i}].interval")))
            .collect(),
        _ => Err(CliError::Invalid("report does not contain a density".into())),
    }
}

fn plot_text(text: &str, options: &Options) -> Result<String, CliError> {
    let value: serde_json::Value = from_text(text)?;
    let pieces = if value.get("report").is_some() {
        pieces_of_report(&parse_report(text)?.report)?
    } else {
        let doc = parse_input(text)?;
        match doc.kind {
            ScenarioKind::Counterexample => {
                let r = cmd_counterexample(from_payload(&doc.payload)?)?;
                pieces_of_report(&ReportBody::Counterexample(r))?
            }
            ScenarioKind::DhProfile => profile_from(from_payload(&doc.payload)?)?.pieces().to_vec(),
            other => {
                return Err(CliError::Invalid(format!(
                    "kind {:?} has no density to plot",
                    other.name()
                )))
            }
        }
    };
    plot_pieces(&PlotSource { pieces }, options.resolution)
}
