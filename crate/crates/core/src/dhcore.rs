//! Duistermaat-Heckman densities of complexity-two actions restricted to a
//! line `a + t·v` through the moment image.
//!
//! On a chamber the reduced space is a fixed 4-orbifold with intersection
//! form `Q`, and the reduced class moves affinely, `ω_{a+tv} = ω_a + t·c`.
//! The density is therefore the quadratic `½·Q(ω_a + t c, ω_a + t c)`.

use crate::exactlin::{evaluate, ClassVector, IntegerSymmetricForm, LinAlgError};
use crate::polycert::{
    logconcavity_defect, sign_on_interval, Interval, Polynomial, SignKind, SignVerdict,
};
use crate::rational::{rat, Rational};
use num_traits::Signed;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DhError {
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
    #[error("Q(omega_a, omega_a) = {0} is not positive")]
    NonPositiveVolume(Rational),
    #[error("profile has no pieces")]
    EmptyProfile,
    #[error("pieces {0} and {1} do not abut")]
    PiecesDoNotAbut(usize, usize),
    #[error("junction {0} between pieces is not declared as a wall")]
    UndeclaredWall(Rational),
    #[error("wall {0} is not an endpoint of any piece")]
    StrayWall(Rational),
    #[error("walls are not strictly increasing")]
    UnorderedWalls,
    #[error("density of piece {index} is not positive on {interval}: {kind:?}")]
    NonPositiveDensity { index: usize, interval: String, kind: SignKind },
    #[error("wall index {0} out of range")]
    NoSuchWall(usize),
    #[error("wall {0} lies on the boundary of the moment image")]
    BoundaryWall(Rational),
}

/// Cohomological data of one chamber of regular values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedComponentData {
    form: IntegerSymmetricForm,
    omega_a: ClassVector,
    chern: ClassVector,
    interval: Interval,
}

impl ReducedComponentData {
    /// `chern` is the class `⟨c, v⟩` for the chosen direction `v`.
    pub fn new(
        form: IntegerSymmetricForm,
        omega_a: ClassVector,
        chern: ClassVector,
        interval: Interval,
    ) -> Result<Self, DhError> {
        let volume = evaluate(&form, &omega_a, &omega_a)?;
        evaluate(&form, &chern, &chern)?;
        if !volume.is_positive() {
            return Err(DhError::NonPositiveVolume(volume));
        }
        Ok(Self {
            form,
            omega_a,
            chern,
            interval,
        })
    }

    pub fn form(&self) -> &IntegerSymmetricForm {
        &self.form
    }

    pub fn omega_a(&self) -> &ClassVector {
        &self.omega_a
    }

    pub fn chern(&self) -> &ClassVector {
        &self.chern
    }

    pub fn interval(&self) -> &Interval {
        &self.interval
    }

    /// Moves the reference point to `a + shift·v`; the interval is translated
    /// so that it describes the same chamber.
    pub fn rebase(&self, shift: &Rational) -> Self {
        let lower = self.interval.lower().map(|l| l - shift);
        let upper = self.interval.upper().map(|u| u - shift);
        Self {
            form: self.form.clone(),
            omega_a: self.omega_a.add_scaled(shift, &self.chern),
            chern: self.chern.clone(),
            interval: Interval::new(lower, upper).expect("translation keeps the order"),
        }
    }
}

/// `f(t) = ½·(Q(c,c)t² + 2Q(c,ω_a)t + Q(ω_a,ω_a))`.
pub fn dh_density(component: &ReducedComponentData) -> Result<Polynomial, DhError> {
    let q = &component.form;
    let cc = evaluate(q, &component.chern, &component.chern)?;
    let cw = evaluate(q, &component.chern, &component.omega_a)?;
    let ww = evaluate(q, &component.omega_a, &component.omega_a)?;
    let half = rat(1, 2);
    Ok(Polynomial::new(vec![&ww * &half, cw, &cc * &half]))
}

/// Piecewise density along a line; pieces are ordered and abut at walls.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DHProfile {
    pieces: Vec<(Interval, Polynomial)>,
    walls: Vec<Rational>,
}

impl DHProfile {
    /// Validates ordering, abutment and positivity of every piece.
    ///
    /// `walls` must list every junction between consecutive pieces; it may
    /// also list outer endpoints, which are then boundary walls.
    pub fn new(pieces: Vec<(Interval, Polynomial)>, walls: Vec<Rational>) -> Result<Self, DhError> {
        if pieces.is_empty() {
            return Err(DhError::EmptyProfile);
        }
        if walls.windows(2).any(|w| w[0] >= w[1]) {
            return Err(DhError::UnorderedWalls);
        }
        for (i, pair) in pieces.windows(2).enumerate() {
            let (left, right) = (&pair[0].0, &pair[1].0);
            match (left.upper(), right.lower()) {
                (Some(u), Some(l)) if u == l => {
                    if walls.binary_search(u).is_err() {
                        return Err(DhError::UndeclaredWall(u.clone()));
                    }
                }
                _ => return Err(DhError::PiecesDoNotAbut(i, i + 1)),
            }
        }
        for w in &walls {
            let touches = pieces
                .iter()
                .any(|(iv, _)| iv.lower() == Some(w) || iv.upper() == Some(w));
            if !touches {
                return Err(DhError::StrayWall(w.clone()));
            }
        }
        for (index, (interval, density)) in pieces.iter().enumerate() {
            let verdict = sign_on_interval(density, interval);
            if verdict.kind != SignKind::PositiveThroughout {
                return Err(DhError::NonPositiveDensity {
                    index,
                    interval: interval.to_string(),
                    kind: verdict.kind,
                });
            }
        }
        Ok(Self { pieces, walls })
    }

    pub fn single(interval: Interval, density: Polynomial) -> Result<Self, DhError> {
        Self::new(vec![(interval, density)], Vec::new())
    }

    /// Builds each piece from its chamber data; junctions become walls.
    pub fn from_components(components: &[ReducedComponentData]) -> Result<Self, DhError> {
        let pieces = components
            .iter()
            .map(|c| Ok((c.interval.clone(), dh_density(c)?)))
            .collect::<Result<Vec<_>, DhError>>()?;
        let walls = pieces
            .windows(2)
            .filter_map(|p| p[0].0.upper().cloned())
            .collect();
        Self::new(pieces, walls)
    }

    pub fn pieces(&self) -> &[(Interval, Polynomial)] {
        &self.pieces
    }

    pub fn walls(&self) -> &[Rational] {
        &self.walls
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WallCheck {
    pub wall: Rational,
    pub left_derivative: Rational,
    pub right_derivative: Rational,
    pub pass: bool,
}

/// One-sided slopes at an interior wall; passes when `g'₊ ≤ g'₋`.
pub fn graham_wall_check(profile: &DHProfile, wall_index: usize) -> Result<WallCheck, DhError> {
    let wall = profile
        .walls
        .get(wall_index)
        .ok_or(DhError::NoSuchWall(wall_index))?;
    let left = profile.pieces.iter().find(|(iv, _)| iv.upper() == Some(wall));
    let right = profile.pieces.iter().find(|(iv, _)| iv.lower() == Some(wall));
    let (Some((_, left)), Some((_, right))) = (left, right) else {
        return Err(DhError::BoundaryWall(wall.clone()));
    };
    let left_derivative = left.derivative().evaluate(wall);
    let right_derivative = right.derivative().evaluate(wall);
    Ok(WallCheck {
        wall: wall.clone(),
        pass: right_derivative <= left_derivative,
        left_derivative,
        right_derivative,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    LogConcave,
    /// Some piece has `ln f` strictly convex on its whole interval.
    StrictlyNonLogConcave,
    /// Neither certificate applies: a piece is of mixed or weakly positive
    /// defect sign, or a wall slope increases.
    Inconclusive,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Self::LogConcave => "LogConcave",
            Self::StrictlyNonLogConcave => "StrictlyNonLogConcave",
            Self::Inconclusive => "Inconclusive",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PieceReport {
    pub interval: Interval,
    pub density: Polynomial,
    pub defect: Polynomial,
    pub certificate: SignVerdict,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogConcavityReport {
    pub per_piece: Vec<PieceReport>,
    pub wall_checks: Vec<WallCheck>,
    /// Declared walls with a piece on one side only.
    pub boundary_walls: Vec<Rational>,
    pub verdict: Verdict,
}

pub fn log_concavity_verdict(profile: &DHProfile) -> LogConcavityReport {
    let per_piece: Vec<PieceReport> = profile
        .pieces
        .iter()
        .map(|(interval, density)| {
            let defect = logconcavity_defect(density);
            let certificate = sign_on_interval(&defect, interval);
            PieceReport {
                interval: interval.clone(),
                density: density.clone(),
                defect,
                certificate,
            }
        })
        .collect();

    let mut wall_checks = Vec::new();
    let mut boundary_walls = Vec::new();
    for i in 0..profile.walls.len() {
        match graham_wall_check(profile, i) {
            Ok(check) => wall_checks.push(check),
            Err(DhError::BoundaryWall(w)) => boundary_walls.push(w),
            Err(e) => unreachable!("wall index in range: {e}"),
        }
    }

    let verdict = if per_piece
        .iter()
        .any(|p| p.certificate.kind == SignKind::PositiveThroughout)
    {
        Verdict::StrictlyNonLogConcave
    } else if per_piece.iter().all(|p| p.certificate.kind.is_nonpositive())
        && wall_checks.iter().all(|w| w.pass)
    {
        Verdict::LogConcave
    } else {
        Verdict::Inconclusive
    };

    LogConcavityReport {
        per_piece,
        wall_checks,
        boundary_walls,
        verdict,
    }
}
