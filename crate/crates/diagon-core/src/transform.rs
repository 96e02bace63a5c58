//! Affine changes of variables and recorded transform pipelines.

use crate::error::Error;
use crate::matrix::RatMatrix;
use crate::rat::{is_integer, rat, Rat};
use crate::Result;
use num::Zero;

/// An affine substitution `x_old = C * x_new + c` with `det(C) != 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineTransform {
    matrix: RatMatrix,
    translation: Vec<Rat>,
}

impl AffineTransform {
    pub fn new(matrix: RatMatrix, translation: Vec<Rat>) -> Self {
        assert!(matrix.is_square(), "transform matrix must be square");
        assert_eq!(
            matrix.n_rows(),
            translation.len(),
            "translation length must match the matrix dimension"
        );
        assert!(
            !matrix.determinant().is_zero(),
            "transform matrix must be invertible"
        );
        AffineTransform {
            matrix,
            translation,
        }
    }

    pub fn linear(matrix: RatMatrix) -> Self {
        let n = matrix.n_rows();
        AffineTransform::new(matrix, vec![Rat::zero(); n])
    }

    pub fn identity(dim: usize) -> Self {
        AffineTransform::linear(RatMatrix::identity(dim))
    }

    /// Pure translation `x_old = x_new + c`.
    pub fn translation_of(c: Vec<Rat>) -> Self {
        let n = c.len();
        AffineTransform::new(RatMatrix::identity(n), c)
    }

    /// Diagonal scaling `x_old_j = d_j * x_new_j`.
    pub fn scaling(diag: &[Rat]) -> Self {
        let n = diag.len();
        let mut m = RatMatrix::zero(n, n);
        for (j, d) in diag.iter().enumerate() {
            m.set(j, j, d.clone());
        }
        AffineTransform::linear(m)
    }

    pub fn dim(&self) -> usize {
        self.matrix.n_rows()
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.matrix
    }

    pub fn translation(&self) -> &[Rat] {
        &self.translation
    }

    pub fn det(&self) -> Rat {
        self.matrix.determinant()
    }

    pub fn is_identity(&self) -> bool {
        self.matrix == RatMatrix::identity(self.dim())
            && self.translation.iter().all(|v| v.is_zero())
    }

    /// True iff every matrix entry is an integer (translation not checked).
    pub fn has_integer_matrix(&self) -> bool {
        self.matrix.is_integer()
    }

    pub fn has_integer_translation(&self) -> bool {
        self.translation.iter().all(is_integer)
    }

    /// Applies the substitution to a point: `C * p + c`.
    pub fn apply(&self, point: &[Rat]) -> Vec<Rat> {
        let mut out = self.matrix.mul_vec(point);
        for (o, c) in out.iter_mut().zip(&self.translation) {
            *o += c;
        }
        out
    }

    /// Inverse map sending old coordinates to new: `C^{-1} (p - c)`.
    pub fn apply_inverse(&self, point: &[Rat]) -> Result<Vec<Rat>> {
        let inv = self.matrix.inverse()?;
        let shifted: Vec<Rat> = point
            .iter()
            .zip(&self.translation)
            .map(|(p, c)| p - c)
            .collect();
        Ok(inv.mul_vec(&shifted))
    }
}

/// Composition `r` with `r(x) = outer(inner(x))`.
///
/// In substitution terms: if `outer` rewrites old variables in terms of mid
/// ones and `inner` rewrites mid variables in terms of new ones, `r`
/// rewrites old directly in terms of new.
pub fn compose(outer: &AffineTransform, inner: &AffineTransform) -> Result<AffineTransform> {
    if outer.dim() != inner.dim() {
        return Err(Error::DimensionMismatch {
            expected: outer.dim(),
            got: inner.dim(),
        });
    }
    let matrix = outer.matrix.mul(&inner.matrix);
    let mut translation = outer.matrix.mul_vec(&inner.translation);
    for (t, c) in translation.iter_mut().zip(&outer.translation) {
        *t += c;
    }
    Ok(AffineTransform {
        matrix,
        translation,
    })
}

/// What a pipeline step did to the variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepLabel {
    /// Completion of squares / powers (triangular substitution).
    Lagrange,
    /// Translation of the origin.
    Transfer,
    /// Per-variable integer scaling clearing denominators.
    Deformation,
    /// Uniform scaling by a single factor.
    Homothety,
    /// Variable swap.
    Permutation,
}

impl StepLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            StepLabel::Lagrange => "lagrange",
            StepLabel::Transfer => "transfer",
            StepLabel::Deformation => "deformation",
            StepLabel::Homothety => "homothety",
            StepLabel::Permutation => "permutation",
        }
    }
}

/// Ordered record of substitutions with their composition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransformChain {
    steps: Vec<(StepLabel, AffineTransform)>,
    composed: AffineTransform,
}

impl TransformChain {
    pub fn empty(dim: usize) -> Self {
        TransformChain {
            steps: Vec::new(),
            composed: AffineTransform::identity(dim),
        }
    }

    /// Builds a chain from steps applied in order, composing as it goes.
    pub fn from_steps(dim: usize, steps: Vec<(StepLabel, AffineTransform)>) -> Result<Self> {
        let mut composed = AffineTransform::identity(dim);
        for (_, t) in &steps {
            composed = compose(&composed, t)?;
        }
        Ok(TransformChain { steps, composed })
    }

    /// Appends a step, skipping identities so chains stay readable.
    pub fn push(&mut self, label: StepLabel, t: AffineTransform) -> Result<()> {
        if t.is_identity() {
            return Ok(());
        }
        self.composed = compose(&self.composed, &t)?;
        self.steps.push((label, t));
        Ok(())
    }

    pub fn steps(&self) -> &[(StepLabel, AffineTransform)] {
        &self.steps
    }

    pub fn composed(&self) -> &AffineTransform {
        &self.composed
    }
}

/// Builds the scaling that multiplies variable `j` by `t_j`, given as
/// integers.
pub fn integer_scaling(factors: &[num::BigInt]) -> AffineTransform {
    let diag: Vec<Rat> = factors.iter().map(|f| Rat::from_integer(f.clone())).collect();
    AffineTransform::scaling(&diag)
}

/// Convenience constructor for small test matrices.
pub fn affine_i64(matrix: &[&[i64]], translation: &[i64]) -> AffineTransform {
    AffineTransform::new(
        RatMatrix::from_i64(matrix),
        translation.iter().map(|&v| rat(v)).collect(),
    )
}
