//! Hard Lefschetz checks for four-manifolds and for the sphere bundles
//! `M → N` whose cohomology is free over `H*(N)` on `1` and `[η]`, with
//! `[η²] = β₂·[η] + β₄`.
//!
//! For `ω = π*ω₀ + ε·η` Poincaré duality reduces Hard Lefschetz on `M` to two
//! injectivity statements: `L²_ω : H¹(M) → H⁵(M)`, which is the map
//! `L_{2εω₀ + ε²β₂} : H¹(N) → H³(N)`, and `L_ω : H²(M) → H⁴(M)`, which sends
//! `φ + k·η` to `(ω₀φ + εkβ₄) + (kω₀ + εφ + εkβ₂)·η`.
//!
//! Cohomology ring data is trusted as declared: associativity and graded
//! commutativity of the supplied structure constants are not checked.

use crate::exactlin::{evaluate, ClassVector, IntegerSymmetricForm, LinAlgError, RationalMatrix};
use crate::rational::{int, rat, Rational};
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LefschetzError {
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
    #[error("cup product tensor has shape mismatch: {0}")]
    Shape(String),
    #[error("H^1 x H^3 pairing is degenerate")]
    DegeneratePairing,
    #[error("intersection form is degenerate")]
    DegenerateForm,
    #[error("volume normalization must be nonzero")]
    ZeroVolume,
    #[error("epsilon = {0} must be positive")]
    NonPositiveEpsilon(Rational),
    #[error("no admissible epsilon = 1/m with m <= {bound}")]
    NoEpsilonFound { bound: u64, failures: Vec<EpsilonFailure> },
    #[error("kernel route and scalar route disagree: kernel trivial = {kernel_trivial}, inequality holds = {inequality}")]
    InternalInconsistency { kernel_trivial: bool, inequality: bool },
}

/// Which conditions failed for one candidate `ε = 1/m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpsilonFailure {
    pub m: u64,
    pub map1_singular: bool,
    pub neq1_violated: bool,
    pub volume_bound_violated: bool,
}

/// Rational cohomology ring of a closed oriented four-manifold, in chosen
/// bases of `H¹`, `H²`, `H³` and a generator of `H⁴`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FourManifoldRing {
    b1: usize,
    /// `cup_12_3[i][j][k]`: coefficient of the `k`-th `H³` basis vector in
    /// `eᵢ¹ ∪ eⱼ²`.
    cup_12_3: Vec<Vec<Vec<Rational>>>,
    pairing_13: RationalMatrix,
    form: IntegerSymmetricForm,
    volume_normalization: Rational,
}

impl FourManifoldRing {
    pub fn new(
        b1: usize,
        cup_12_3: Vec<Vec<Vec<Rational>>>,
        pairing_13: RationalMatrix,
        form: IntegerSymmetricForm,
        volume_normalization: Rational,
    ) -> Result<Self, LefschetzError> {
        let b2 = form.dimension();
        if cup_12_3.len() != b1 {
            return Err(LefschetzError::Shape(format!(
                "expected {b1} H^1 slices, found {}",
                cup_12_3.len()
            )));
        }
        for (i, slice) in cup_12_3.iter().enumerate() {
            if slice.len() != b2 {
                return Err(LefschetzError::Shape(format!(
                    "slice {i} has {} H^2 rows, expected {b2}",
                    slice.len()
                )));
            }
            if let Some(j) = slice.iter().position(|row| row.len() != b1) {
                return Err(LefschetzError::Shape(format!(
                    "entry [{i}][{j}] has {} H^3 coordinates, expected {b1}",
                    slice[j].len()
                )));
            }
        }
        if pairing_13.rows() != b1 || pairing_13.cols() != b1 {
            return Err(LefschetzError::Shape(format!(
                "pairing_13 is {}x{}, expected {b1}x{b1}",
                pairing_13.rows(),
                pairing_13.cols()
            )));
        }
        if b1 > 0 && pairing_13.determinant().is_zero() {
            return Err(LefschetzError::DegeneratePairing);
        }
        if form.to_rational_matrix().determinant().is_zero() {
            return Err(LefschetzError::DegenerateForm);
        }
        if volume_normalization.is_zero() {
            return Err(LefschetzError::ZeroVolume);
        }
        Ok(Self {
            b1,
            cup_12_3,
            pairing_13,
            form,
            volume_normalization,
        })
    }

    /// `b₁ = 0`: no odd cohomology to check.
    pub fn simply_connected(form: IntegerSymmetricForm) -> Result<Self, LefschetzError> {
        Self::new(0, Vec::new(), RationalMatrix::zeros(0, 0), form, int(1))
    }

    pub fn b1(&self) -> usize {
        self.b1
    }

    pub fn b2(&self) -> usize {
        self.form.dimension()
    }

    pub fn form(&self) -> &IntegerSymmetricForm {
        &self.form
    }

    pub fn cup_12_3(&self) -> &[Vec<Vec<Rational>>] {
        &self.cup_12_3
    }

    pub fn pairing_13(&self) -> &RationalMatrix {
        &self.pairing_13
    }

    pub fn volume_normalization(&self) -> &Rational {
        &self.volume_normalization
    }

    fn check_class(&self, class: &ClassVector) -> Result<(), LefschetzError> {
        if class.len() != self.b2() {
            return Err(LinAlgError::DimensionMismatch {
                expected: self.b2(),
                found: class.len(),
            }
            .into());
        }
        Ok(())
    }

    /// Matrix of `L_class : H¹ → H³`; column `i` is the image of `eᵢ¹`.
    pub fn lefschetz_matrix(&self, class: &ClassVector) -> Result<RationalMatrix, LefschetzError> {
        self.check_class(class)?;
        let mut m = RationalMatrix::zeros(self.b1, self.b1);
        for (i, slice) in self.cup_12_3.iter().enumerate() {
            for (j, row) in slice.iter().enumerate() {
                let w = &class.coords()[j];
                if w.is_zero() {
                    continue;
                }
                for (k, v) in row.iter().enumerate() {
                    m[(k, i)] += w * v;
                }
            }
        }
        Ok(m)
    }
}

/// Outcome of an injectivity test, with a kernel vector when it fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InjectivityCheck {
    pub injective: bool,
    pub matrix: RationalMatrix,
    pub witness: Option<Vec<Rational>>,
}

impl InjectivityCheck {
    fn of(matrix: RationalMatrix) -> Self {
        let witness = matrix.nullspace().into_iter().next();
        Self {
            injective: witness.is_none(),
            matrix,
            witness,
        }
    }
}

/// Hard Lefschetz for a four-manifold: `L_ω : H¹ → H³` bijective and
/// `Q(ω, ω) ≠ 0`.
pub fn check_hl_four(ring: &FourManifoldRing, omega: &ClassVector) -> Result<InjectivityCheck, LefschetzError> {
    let check = InjectivityCheck::of(ring.lefschetz_matrix(omega)?);
    let volume = evaluate(&ring.form, omega, omega)?;
    Ok(InjectivityCheck {
        injective: check.injective && !volume.is_zero(),
        ..check
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SixManifoldLefschetzData {
    pub ring: FourManifoldRing,
    pub omega0: ClassVector,
    pub beta2: ClassVector,
    /// Coefficient of `β₄` on the chosen `H⁴` generator.
    pub beta4: Rational,
    pub epsilon: Rational,
}

impl SixManifoldLefschetzData {
    pub fn new(
        ring: FourManifoldRing,
        omega0: ClassVector,
        beta2: ClassVector,
        beta4: Rational,
        epsilon: Rational,
    ) -> Result<Self, LefschetzError> {
        validate_classes(&ring, &omega0, &beta2)?;
        if !epsilon.is_positive() {
            return Err(LefschetzError::NonPositiveEpsilon(epsilon));
        }
        Ok(Self {
            ring,
            omega0,
            beta2,
            beta4,
            epsilon,
        })
    }

    /// The degree-two class `2εω₀ + ε²β₂` whose action on `H¹(N)` is `L²_ω`.
    pub fn map1_class(&self) -> ClassVector {
        let e = &self.epsilon;
        self.omega0
            .scale(&(int(2) * e))
            .add_scaled(&(e * e), &self.beta2)
    }

    /// Matrix of `(φ, k) ↦ (ω₀φ + εkβ₄, kω₀ + εφ + εkβ₂)`; the first row is
    /// the `H⁴` component, the remaining rows the `[η]`-coefficient in `H²`.
    pub fn map2_matrix(&self) -> RationalMatrix {
        let n = self.ring.b2();
        let e = &self.epsilon;
        let w = self
            .ring
            .form
            .apply(&self.omega0)
            .expect("validated dimension");
        let mut m = RationalMatrix::zeros(n + 1, n + 1);
        for (j, wj) in w.iter().enumerate() {
            m[(0, j)] = wj.clone();
        }
        m[(0, n)] = e * &self.beta4 * &self.ring.volume_normalization;
        for i in 0..n {
            m[(i + 1, i)] = e.clone();
            m[(i + 1, n)] = &self.omega0.coords()[i] + e * &self.beta2.coords()[i];
        }
        m
    }
}

fn validate_classes(
    ring: &FourManifoldRing,
    omega0: &ClassVector,
    beta2: &ClassVector,
) -> Result<(), LefschetzError> {
    ring.check_class(omega0)?;
    ring.check_class(beta2)?;
    let volume = evaluate(&ring.form, omega0, omega0)?;
    if omega0.is_zero() {
        return Err(LinAlgError::ZeroVector.into());
    }
    if !volume.is_positive() {
        return Err(LinAlgError::NotPositive(volume).into());
    }
    Ok(())
}

pub fn check_map1(data: &SixManifoldLefschetzData) -> InjectivityCheck {
    InjectivityCheck::of(
        data.ring
            .lefschetz_matrix(&data.map1_class())
            .expect("validated dimension"),
    )
}

/// Scalar form of the `k ≠ 0` obstruction:
/// `Q(ω₀,ω₀) ≠ ε²β₄·vol − ε·Q(ω₀,β₂)`.
pub fn neq1_holds(
    ring: &FourManifoldRing,
    omega0: &ClassVector,
    beta2: &ClassVector,
    beta4: &Rational,
    epsilon: &Rational,
) -> bool {
    let ww = evaluate(&ring.form, omega0, omega0).expect("validated dimension");
    let wb = evaluate(&ring.form, omega0, beta2).expect("validated dimension");
    ww != epsilon * epsilon * beta4 * &ring.volume_normalization - epsilon * wb
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Map2Check {
    pub injective: bool,
    pub neq1_holds: bool,
    pub matrix: RationalMatrix,
    /// Kernel vector `(φ, k)` when injectivity fails.
    pub witness: Option<(ClassVector, Rational)>,
}

/// Kernel of `L_ω` on `H²(M)`, cross-checked against the scalar inequality.
pub fn check_map2(data: &SixManifoldLefschetzData) -> Result<Map2Check, LefschetzError> {
    let matrix = data.map2_matrix();
    let n = data.ring.b2();
    let kernel = InjectivityCheck::of(matrix);
    let scalar = neq1_holds(
        &data.ring,
        &data.omega0,
        &data.beta2,
        &data.beta4,
        &data.epsilon,
    );
    if kernel.injective != scalar {
        return Err(LefschetzError::InternalInconsistency {
            kernel_trivial: kernel.injective,
            inequality: scalar,
        });
    }
    let witness = kernel.witness.map(|mut v| {
        let k = v.pop().expect("length n + 1");
        debug_assert_eq!(v.len(), n);
        (ClassVector::new(v), k)
    });
    Ok(Map2Check {
        injective: kernel.injective,
        neq1_holds: scalar,
        matrix: kernel.matrix,
        witness,
    })
}

/// Largest `ε = 1/m`, `m ≤ bound`, for which `L²_ω` on `H¹` is injective, the
/// scalar inequality holds and, when `c` is given, `Q(ω₀,ω₀) > ε²·Q(c,c)`.
pub fn find_hl_epsilon(
    ring: &FourManifoldRing,
    omega0: &ClassVector,
    beta2: &ClassVector,
    beta4: &Rational,
    bound: u64,
    c: Option<&ClassVector>,
) -> Result<Rational, LefschetzError> {
    validate_classes(ring, omega0, beta2)?;
    let ww = evaluate(&ring.form, omega0, omega0)?;
    let cc = match c {
        Some(c) => Some(evaluate(&ring.form, c, c)?),
        None => None,
    };
    let mut failures = Vec::new();
    for m in 1..=bound {
        let epsilon = rat(1, m as i64);
        let data = SixManifoldLefschetzData {
            ring: ring.clone(),
            omega0: omega0.clone(),
            beta2: beta2.clone(),
            beta4: beta4.clone(),
            epsilon: epsilon.clone(),
        };
        let map1_singular = !check_map1(&data).injective;
        let neq1_violated = !neq1_holds(ring, omega0, beta2, beta4, &epsilon);
        let volume_bound_violated = cc
            .as_ref()
            .is_some_and(|cc| ww <= &epsilon * &epsilon * cc);
        if !(map1_singular || neq1_violated || volume_bound_violated) {
            return Ok(epsilon);
        }
        failures.push(EpsilonFailure {
            m,
            map1_singular,
            neq1_violated,
            volume_bound_violated,
        });
    }
    Err(LefschetzError::NoEpsilonFound { bound, failures })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HLVerdict {
    pub map1_injective: bool,
    pub map2_injective: bool,
    /// `(det L_{2εω₀+ε²β₂} ≠ 0, scalar inequality holds)`.
    pub epsilon_conditions: (bool, bool),
    pub overall: bool,
    pub map1_witness: Option<Vec<Rational>>,
    pub map2_witness: Option<(ClassVector, Rational)>,
}

pub fn check_hl_six(data: &SixManifoldLefschetzData) -> Result<HLVerdict, LefschetzError> {
    let map1 = check_map1(data);
    let det_nonzero = data.ring.b1 == 0 || !map1.matrix.determinant().is_zero();
    let map2 = check_map2(data)?;
    Ok(HLVerdict {
        map1_injective: map1.injective,
        map2_injective: map2.injective,
        epsilon_conditions: (det_nonzero, map2.neq1_holds),
        overall: map1.injective && map2.injective,
        map1_witness: map1.witness,
        map2_witness: map2.witness,
    })
}

/// Applies the `H²(M) → H⁴(M)` map to `(φ, k)`; zero for kernel witnesses.
pub fn apply_map2(data: &SixManifoldLefschetzData, phi: &ClassVector, k: &Rational) -> Vec<Rational> {
    let mut v = phi.coords().to_vec();
    v.push(k.clone());
    data.map2_matrix().mul_vec(&v)
}

/// Identity `H¹ × H² → H³` pairing against a single `H²` slot, used in demos
/// and tests: `eᵢ¹ ∪ e_slot² = eᵢ³`.
pub fn diagonal_cup(b1: usize, b2: usize, slot: usize) -> Vec<Vec<Vec<Rational>>> {
    (0..b1)
        .map(|i| {
            (0..b2)
                .map(|j| {
                    (0..b1)
                        .map(|k| {
                            if j == slot && i == k {
                                Rational::one()
                            } else {
                                Rational::zero()
                            }
                        })
                        .collect()
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn simply_connected() -> FourManifoldRing {
        FourManifoldRing::simply_connected(IntegerSymmetricForm::diagonal(&[1, 1, -1])).unwrap()
    }

    fn ring_b1_2(cup: Vec<Vec<Vec<Rational>>>) -> FourManifoldRing {
        FourManifoldRing::new(
            2,
            cup,
            RationalMatrix::identity(2),
            IntegerSymmetricForm::diagonal(&[1, 1]),
            int(1),
        )
        .unwrap()
    }

    fn data(ring: FourManifoldRing, beta2: &[i64], beta4: Rational, eps: Rational) -> SixManifoldLefschetzData {
        let n = ring.b2();
        let mut omega = vec![0; n];
        omega[0] = 1;
        SixManifoldLefschetzData::new(
            ring,
            ClassVector::from_integers(&omega),
            ClassVector::from_integers(beta2),
            beta4,
            eps,
        )
        .unwrap()
    }

    #[test]
    fn hl_four_examples() {
        let omega = ClassVector::from_integers(&[1, 0, 0]);
        assert!(check_hl_four(&simply_connected(), &omega).unwrap().injective);

        let ring = ring_b1_2(diagonal_cup(2, 2, 0));
        let omega = ClassVector::from_integers(&[1, 0]);
        assert!(check_hl_four(&ring, &omega).unwrap().injective);

        let zero = vec![vec![vec![int(0); 2]; 2]; 2];
        let ring = ring_b1_2(zero);
        let check = check_hl_four(&ring, &omega).unwrap();
        assert!(!check.injective);
        let w = check.witness.unwrap();
        assert!(check.matrix.mul_vec(&w).iter().all(Zero::is_zero));
        assert!(w.iter().any(|v| !v.is_zero()));
    }

    #[test]
    fn map1_examples() {
        let d = data(simply_connected(), &[0, 0, 0], int(0), rat(1, 2));
        assert!(check_map1(&d).injective);

        let d = data(ring_b1_2(diagonal_cup(2, 2, 0)), &[0, 0], int(0), rat(1, 2));
        let check = check_map1(&d);
        assert!(check.injective);
        assert_eq!(check.matrix, RationalMatrix::identity(2));

        // β₂ = −(2/ε)ω₀ kills the class 2εω₀ + ε²β₂ at ε = 1/2.
        let d = data(ring_b1_2(diagonal_cup(2, 2, 0)), &[-4, 0], int(0), rat(1, 2));
        let check = check_map1(&d);
        assert!(!check.injective);
        let w = check.witness.unwrap();
        assert!(check.matrix.mul_vec(&w).iter().all(Zero::is_zero));
    }

    #[test]
    fn map2_injective_without_twisting() {
        for eps in [int(1), rat(1, 3), rat(7, 2)] {
            let d = data(simply_connected(), &[0, 0, 0], int(0), eps);
            let check = check_map2(&d).unwrap();
            assert!(check.injective && check.neq1_holds);
        }
    }

    #[test]
    fn map2_equality_case_has_kernel() {
        // Q(ω₀,ω₀) = ε²β₄ with β₂ = 0.
        let eps = rat(1, 2);
        let d = data(simply_connected(), &[0, 0, 0], int(4), eps);
        let check = check_map2(&d).unwrap();
        assert!(!check.injective && !check.neq1_holds);
        let (phi, k) = check.witness.unwrap();
        assert!(!k.is_zero());
        assert!(apply_map2(&d, &phi, &k).iter().all(Zero::is_zero));
    }

    #[test]
    fn map2_negative_beta4_is_injective() {
        // β₄ = −Q(ω₀,ω₀)/ε²: the k ≠ 0 branch leaves −2kQ(ω₀,ω₀)/ε ≠ 0.
        let d = data(simply_connected(), &[0, 0, 0], int(-4), rat(1, 2));
        let check = check_map2(&d).unwrap();
        assert!(check.injective && check.neq1_holds && check.witness.is_none());
    }

    #[test]
    fn map2_with_beta2() {
        // Q(ω₀,ω₀) = 1, Q(ω₀,β₂) = 2, ε = 1: equality needs β₄ = 3.
        let d = data(simply_connected(), &[2, 0, 0], int(3), int(1));
        assert!(!check_map2(&d).unwrap().injective);
        let d = data(simply_connected(), &[2, 0, 0], int(-3), int(1));
        assert!(check_map2(&d).unwrap().injective);
    }

    #[test]
    fn data_validation() {
        let ring = simply_connected();
        let r = SixManifoldLefschetzData::new(
            ring.clone(),
            ClassVector::zeros(3),
            ClassVector::zeros(3),
            int(0),
            int(1),
        );
        assert_eq!(r, Err(LefschetzError::LinAlg(LinAlgError::ZeroVector)));
        let r = SixManifoldLefschetzData::new(
            ring.clone(),
            ClassVector::from_integers(&[0, 0, 1]),
            ClassVector::zeros(3),
            int(0),
            int(1),
        );
        assert!(matches!(r, Err(LefschetzError::LinAlg(LinAlgError::NotPositive(_)))));
        let r = SixManifoldLefschetzData::new(
            ring,
            ClassVector::from_integers(&[1, 0, 0]),
            ClassVector::zeros(2),
            int(0),
            int(1),
        );
        assert!(matches!(r, Err(LefschetzError::LinAlg(LinAlgError::DimensionMismatch { .. }))));
        assert_eq!(
            FourManifoldRing::simply_connected(IntegerSymmetricForm::diagonal(&[1, 0])),
            Err(LefschetzError::DegenerateForm)
        );
    }

    #[test]
    fn epsilon_search_examples() {
        let ring = ring_b1_2(diagonal_cup(2, 2, 0));
        let omega = ClassVector::from_integers(&[1, 0]);
        let zero = ClassVector::zeros(2);
        assert_eq!(find_hl_epsilon(&ring, &omega, &zero, &int(0), 10, None).unwrap(), int(1));

        // With c = (0, 3): Q(c,c) = 9 needs ε² < 1/9, so ε = 1/4.
        let c = ClassVector::from_integers(&[0, 3]);
        assert_eq!(
            find_hl_epsilon(&ring, &omega, &zero, &int(0), 10, Some(&c)).unwrap(),
            rat(1, 4)
        );

        // β₄ = Q(ω₀,ω₀) makes ε = 1 the equality case.
        assert_eq!(
            find_hl_epsilon(&ring, &omega, &zero, &int(1), 10, None).unwrap(),
            rat(1, 2)
        );

        let dead = ring_b1_2(vec![vec![vec![int(0); 2]; 2]; 2]);
        match find_hl_epsilon(&dead, &omega, &zero, &int(0), 5, None) {
            Err(LefschetzError::NoEpsilonFound { bound: 5, failures }) => {
                assert_eq!(failures.len(), 5);
                assert!(failures.iter().all(|f| f.map1_singular));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn six_manifold_verdicts() {
        let ring = simply_connected();
        let omega = ClassVector::from_integers(&[1, 0, 0]);
        let zero = ClassVector::zeros(3);
        let eps = find_hl_epsilon(&ring, &omega, &zero, &int(0), 100, None).unwrap();
        let d = SixManifoldLefschetzData::new(ring, omega, zero, int(0), eps).unwrap();
        let v = check_hl_six(&d).unwrap();
        assert!(v.overall && v.epsilon_conditions == (true, true));

        let d = data(simply_connected(), &[0, 0, 0], int(4), rat(1, 2));
        let v = check_hl_six(&d).unwrap();
        assert!(!v.overall && v.map1_injective && !v.map2_injective);
        assert!(v.map2_witness.is_some());
    }
}
