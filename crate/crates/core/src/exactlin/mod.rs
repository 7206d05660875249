//! Exact linear algebra for symmetric bilinear forms over the rationals.
//!
//! Intersection forms enter as [`IntegerSymmetricForm`]; cohomology classes
//! as [`ClassVector`]s of rational coordinates in the same basis. Nothing in
//! this module touches floating point.

mod matrix;

pub use matrix::RationalMatrix;

use crate::rational::{denominator_lcm, int, Rational};
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinAlgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("form must have positive dimension")]
    EmptyForm,
    #[error("matrix is not square: row {row} has {len} entries, expected {expected}")]
    NotSquare { row: usize, len: usize, expected: usize },
    #[error("form is not symmetric: entry ({row}, {col}) differs from ({col}, {row})")]
    NotSymmetric { row: usize, col: usize },
    #[error("Q(omega, omega) = {0} is not positive")]
    NotPositive(Rational),
    #[error("b+ = {0}, at least 2 is required")]
    InsufficientBPlus(usize),
    #[error("class is the zero vector")]
    ZeroVector,
}

/// Intersection form on H² of a closed four-manifold, as an exact integer matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerSymmetricForm {
    entries: Vec<Vec<i64>>,
}

impl IntegerSymmetricForm {
    pub fn new(entries: Vec<Vec<i64>>) -> Result<Self, LinAlgError> {
        let n = entries.len();
        if n == 0 {
            return Err(LinAlgError::EmptyForm);
        }
        for (row, r) in entries.iter().enumerate() {
            if r.len() != n {
                return Err(LinAlgError::NotSquare {
                    row,
                    len: r.len(),
                    expected: n,
                });
            }
        }
        for i in 0..n {
            for j in 0..i {
                if entries[i][j] != entries[j][i] {
                    return Err(LinAlgError::NotSymmetric { row: i, col: j });
                }
            }
        }
        Ok(Self { entries })
    }

    pub fn diagonal(values: &[i64]) -> Self {
        let n = values.len();
        let entries = (0..n)
            .map(|i| (0..n).map(|j| if i == j { values[i] } else { 0 }).collect())
            .collect();
        Self::new(entries).expect("diagonal matrices are symmetric")
    }

    /// The hyperbolic plane `[[0,1],[1,0]]` repeated `copies` times.
    pub fn hyperbolic(copies: usize) -> Self {
        let blocks = vec![Self::new(vec![vec![0, 1], vec![1, 0]]).unwrap(); copies];
        Self::direct_sum(&blocks)
    }

    pub fn direct_sum(blocks: &[Self]) -> Self {
        let n: usize = blocks.iter().map(Self::dimension).sum();
        let mut entries = vec![vec![0; n]; n];
        let mut offset = 0;
        for b in blocks {
            for i in 0..b.dimension() {
                for j in 0..b.dimension() {
                    entries[offset + i][offset + j] = b.entries[i][j];
                }
            }
            offset += b.dimension();
        }
        Self::new(entries).expect("direct sum of symmetric blocks is symmetric")
    }

    pub fn dimension(&self) -> usize {
        self.entries.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.entries[i][j]
    }

    pub fn entries(&self) -> &[Vec<i64>] {
        &self.entries
    }

    pub fn to_rational_matrix(&self) -> RationalMatrix {
        RationalMatrix::from_rows(
            self.entries
                .iter()
                .map(|r| r.iter().map(|&v| int(v)).collect())
                .collect(),
        )
        .expect("square by construction")
    }

    fn check(&self, x: &ClassVector) -> Result<(), LinAlgError> {
        if x.len() != self.dimension() {
            return Err(LinAlgError::DimensionMismatch {
                expected: self.dimension(),
                found: x.len(),
            });
        }
        Ok(())
    }

    /// `Q·x` as a rational vector.
    pub fn apply(&self, x: &ClassVector) -> Result<Vec<Rational>, LinAlgError> {
        self.check(x)?;
        Ok(self
            .entries
            .iter()
            .map(|row| {
                row.iter()
                    .zip(x.coords())
                    .filter(|(q, _)| **q != 0)
                    .fold(Rational::zero(), |acc, (&q, v)| acc + int(q) * v)
            })
            .collect())
    }
}

/// A cohomology class written in the basis of the form it is paired with.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ClassVector(Vec<Rational>);

impl ClassVector {
    pub fn new(coords: Vec<Rational>) -> Self {
        Self(coords)
    }

    pub fn from_integers(coords: &[i64]) -> Self {
        Self(coords.iter().map(|&v| int(v)).collect())
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![Rational::zero(); n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<Rational> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|v| v.denom().is_one())
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self(self.0.iter().map(|v| v * k).collect())
    }

    /// `self + k·other`; panics on length mismatch.
    pub fn add_scaled(&self, k: &Rational, other: &Self) -> Self {
        assert_eq!(self.len(), other.len());
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + k * b).collect())
    }
}

/// Result of congruence diagonalization: `Bᵀ Q B = diag(d)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagonalization {
    /// Columns are the new basis vectors.
    pub basis: RationalMatrix,
    pub diagonal: Vec<Rational>,
    pub b_plus: usize,
    pub b_minus: usize,
    pub b_zero: usize,
}

impl Diagonalization {
    pub fn signature(&self) -> i64 {
        self.b_plus as i64 - self.b_minus as i64
    }

    pub fn inertia(&self) -> Inertia {
        Inertia {
            b_plus: self.b_plus,
            b_minus: self.b_minus,
            b_zero: self.b_zero,
            signature: self.signature(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Inertia {
    pub b_plus: usize,
    pub b_minus: usize,
    pub b_zero: usize,
    pub signature: i64,
}

/// `xᵀ Q y`, exactly.
pub fn evaluate(
    form: &IntegerSymmetricForm,
    x: &ClassVector,
    y: &ClassVector,
) -> Result<Rational, LinAlgError> {
    form.check(x)?;
    let qy = form.apply(y)?;
    Ok(x.coords()
        .iter()
        .zip(&qy)
        .fold(Rational::zero(), |acc, (a, b)| acc + a * b))
}

pub fn diagonalize(form: &IntegerSymmetricForm) -> Diagonalization {
    diagonalize_symmetric(&form.to_rational_matrix())
}

/// Symmetric Gaussian elimination by congruence moves.
///
/// A zero pivot `Q(eₖ, eₖ) = 0` with some `Q(eₖ, eⱼ) ≠ 0` is repaired by
/// `eₖ ← eₖ + eⱼ` (or `eₖ − eⱼ` when the sum is still isotropic). Output is
/// sorted positives, negatives, zeros, each group in elimination order.
///
/// Panics unless `matrix` is symmetric.
pub fn diagonalize_symmetric(matrix: &RationalMatrix) -> Diagonalization {
    assert!(matrix.is_symmetric(), "diagonalize requires a symmetric matrix");
    let n = matrix.rows();
    let mut a = matrix.clone();
    let mut basis = RationalMatrix::identity(n);

    for k in 0..n {
        if a[(k, k)].is_zero() {
            let Some(j) = (k + 1..n).find(|&j| !a[(k, j)].is_zero()) else {
                continue;
            };
            let mut s = Rational::one();
            let two = int(2);
            if (&two * &a[(k, j)] + &a[(j, j)]).is_zero() {
                s = -s;
            }
            add_congruence(&mut a, &mut basis, k, j, &s);
        }
        let pivot = a[(k, k)].clone();
        for j in k + 1..n {
            if a[(k, j)].is_zero() {
                continue;
            }
            let f = -(&a[(k, j)] / &pivot);
            add_congruence(&mut a, &mut basis, j, k, &f);
        }
    }
    debug_assert!(a.is_diagonal());

    let d = a.diagonal();
    let mut order: Vec<usize> = (0..n).filter(|&i| d[i].is_positive()).collect();
    let b_plus = order.len();
    order.extend((0..n).filter(|&i| d[i].is_negative()));
    let b_minus = order.len() - b_plus;
    order.extend((0..n).filter(|&i| d[i].is_zero()));
    let b_zero = n - b_plus - b_minus;

    let columns: Vec<Vec<Rational>> = order.iter().map(|&i| basis.column(i)).collect();
    Diagonalization {
        basis: RationalMatrix::from_columns(&columns, n),
        diagonal: order.iter().map(|&i| d[i].clone()).collect(),
        b_plus,
        b_minus,
        b_zero,
    }
}

/// Replaces basis vector `target` by `target + s·source` and updates the
/// Gram matrix accordingly.
fn add_congruence(
    a: &mut RationalMatrix,
    basis: &mut RationalMatrix,
    target: usize,
    source: usize,
    s: &Rational,
) {
    let n = a.rows();
    for i in 0..n {
        let v = s * &a[(source, i)];
        a[(target, i)] += v;
    }
    for i in 0..n {
        let v = s * &a[(i, source)];
        a[(i, target)] += v;
    }
    for i in 0..n {
        let v = s * &basis[(i, source)];
        basis[(i, target)] += v;
    }
}

pub fn inertia(form: &IntegerSymmetricForm) -> Inertia {
    diagonalize(form).inertia()
}

/// An integral class `c` with `Q(c,c) > 0` and `Q(c,ω) = 0`.
///
/// The orthogonal complement of ω is spanned by `eⱼ − (wⱼ/w_p)·e_p`, where
/// `w = Qω` and `p` is the first index with `w_p ≠ 0`. The restriction of `Q`
/// to that span is diagonalized and the first positive direction is lifted
/// back, then scaled by the lcm of its denominators.
pub fn find_positive_orthogonal_class(
    form: &IntegerSymmetricForm,
    omega: &ClassVector,
) -> Result<ClassVector, LinAlgError> {
    let n = form.dimension();
    form.check(omega)?;
    if omega.is_zero() {
        return Err(LinAlgError::ZeroVector);
    }
    let self_pairing = evaluate(form, omega, omega)?;
    if !self_pairing.is_positive() {
        return Err(LinAlgError::NotPositive(self_pairing));
    }
    let b_plus = inertia(form).b_plus;
    if b_plus < 2 {
        return Err(LinAlgError::InsufficientBPlus(b_plus));
    }

    let w = form.apply(omega)?;
    let p = w
        .iter()
        .position(|v| !v.is_zero())
        .expect("Q(omega, omega) > 0 forces Q·omega ≠ 0");
    let complement: Vec<Vec<Rational>> = (0..n)
        .filter(|&j| j != p)
        .map(|j| {
            let mut v = vec![Rational::zero(); n];
            v[j] = Rational::one();
            v[p] = -(&w[j] / &w[p]);
            v
        })
        .collect();
    let span = RationalMatrix::from_columns(&complement, n);
    let q = form.to_rational_matrix();
    let restricted = span.transpose().mul(&q).mul(&span);
    let diag = diagonalize_symmetric(&restricted);
    debug_assert!(diag.b_plus >= 1);

    let direction = span.mul_vec(&diag.basis.column(0));
    let scale = Rational::from_integer(denominator_lcm(&direction));
    let c = ClassVector::new(direction.iter().map(|v| v * &scale).collect());
    debug_assert!(c.is_integral());
    Ok(c)
}
