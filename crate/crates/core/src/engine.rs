//! Multilinear forms on the columns of a matrix tuple and their signed sums
//! over the product group that permutes those columns.
//!
//! For a form `f` and a tuple `𝒜` of square matrices of shape `(n_1..n_k)`,
//!
//! ```text
//!   Σ_σ sgn(σ) f(σ⁻¹·𝒜) = I(f, n) · det(¹A) ⋯ det(ᵏA)
//! ```
//!
//! where `I(f, n)` is the same sum evaluated at identity matrices. The
//! engine sums `sgn(σ) f(σ·𝒜)` instead: `σ ↦ σ⁻¹` is a sign-preserving
//! bijection of the group, so both sums are equal term for term after
//! reindexing.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{det, Matrix, Rational};
use crate::parallel::{sum_ranges, ExecConfig};
use crate::perms::{act, ProductStream, Shape, SignedPermTuple};

/// A tuple `(¹A, .., ᵏA)` of square rational matrices.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MatrixTuple {
    shape: Shape,
    matrices: Vec<Matrix>,
}

impl MatrixTuple {
    pub fn new(matrices: Vec<Matrix>) -> Result<MatrixTuple> {
        if let Some((i, m)) = matrices.iter().enumerate().find(|(_, m)| !m.is_square()) {
            return Err(Error::Dimension(format!(
                "matrix {} is {}x{}, expected square",
                i + 1,
                m.rows(),
                m.cols()
            )));
        }
        let shape = Shape::new(matrices.iter().map(Matrix::rows).collect())?;
        Ok(MatrixTuple { shape, matrices })
    }

    pub fn identity(shape: &Shape) -> MatrixTuple {
        MatrixTuple {
            shape: shape.clone(),
            matrices: shape.sizes().iter().map(|&n| Matrix::identity(n)).collect(),
        }
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn matrices(&self) -> &[Matrix] {
        &self.matrices
    }

    pub fn into_matrices(self) -> Vec<Matrix> {
        self.matrices
    }

    pub fn dets(&self) -> Result<Vec<Rational>> {
        self.matrices.iter().map(det).collect()
    }

    /// `det(¹A) ⋯ det(ᵏA)`.
    pub fn det_product(&self) -> Result<Rational> {
        self.matrices
            .iter()
            .try_fold(Rational::one(), |acc, m| Ok(acc * det(m)?))
    }

    /// True when every matrix in the tuple is invertible.
    pub fn is_nonsingular(&self) -> Result<bool> {
        for m in &self.matrices {
            if det(m)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl fmt::Debug for MatrixTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.matrices).finish()
    }
}

/// A form evaluated with its matrix tuple fixed, as a function of the group
/// element acting on that tuple.
pub trait BoundForm: Sync {
    /// `f(σ·𝒜)` for the bound `𝒜`.
    fn eval_acted(&self, sigma: &SignedPermTuple) -> Result<Rational>;
}

/// A multilinear form in the columns of a matrix tuple of a fixed shape:
/// linear separately in each of the `n_1 + .. + n_k` column arguments.
pub trait MultilinearForm: Send + Sync {
    fn shape(&self) -> &Shape;

    fn description(&self) -> String;

    fn evaluate(&self, tuple: &MatrixTuple) -> Result<Rational>;

    /// Fixes `tuple`. The default rebuilds `σ·𝒜` for every term; forms with
    /// structure override this to precompute whatever does not depend on `σ`.
    fn bind<'a>(&'a self, tuple: &'a MatrixTuple) -> Result<Box<dyn BoundForm + 'a>> {
        Ok(Box::new(Acted { form: self, tuple }))
    }
}

struct Acted<'a, F: ?Sized> {
    form: &'a F,
    tuple: &'a MatrixTuple,
}

impl<F: MultilinearForm + ?Sized> BoundForm for Acted<'_, F> {
    fn eval_acted(&self, sigma: &SignedPermTuple) -> Result<Rational> {
        self.form.evaluate(&act(sigma, self.tuple)?)
    }
}

/// A form given by an arbitrary evaluation closure. The caller is
/// responsible for the closure actually being multilinear.
pub struct FnForm<F> {
    shape: Shape,
    description: String,
    eval: F,
}

impl<F> FnForm<F>
where
    F: Fn(&MatrixTuple) -> Result<Rational> + Send + Sync,
{
    pub fn new(shape: Shape, description: impl Into<String>, eval: F) -> Self {
        FnForm {
            shape,
            description: description.into(),
            eval,
        }
    }
}

impl<F> MultilinearForm for FnForm<F>
where
    F: Fn(&MatrixTuple) -> Result<Rational> + Send + Sync,
{
    fn shape(&self) -> &Shape {
        &self.shape
    }

    fn description(&self) -> String {
        self.description.clone()
    }

    fn evaluate(&self, tuple: &MatrixTuple) -> Result<Rational> {
        check_shape(&self.shape, tuple)?;
        (self.eval)(tuple)
    }
}

/// An arbitrary element of `⊗_i (V_{n_i}^*)^{⊗ n_i}` stored densely.
///
/// There is one slot per column: block `i` contributes `n_i` slots, each
/// ranging over the `n_i` row indices. Coefficients are laid out row-major
/// over the slots, the first column of the first block being most
/// significant, so the array has `∏ n_i^{n_i}` entries.
#[derive(Clone, PartialEq, Eq)]
pub struct DenseTensorForm {
    shape: Shape,
    coeffs: Vec<Rational>,
}

impl DenseTensorForm {
    pub fn coefficient_count(shape: &Shape) -> Option<usize> {
        shape
            .sizes()
            .iter()
            .try_fold(1usize, |acc, &n| acc.checked_mul(n.checked_pow(n as u32)?))
    }

    pub fn new(shape: Shape, coeffs: Vec<Rational>) -> Result<Self> {
        let expected = DenseTensorForm::coefficient_count(&shape).ok_or_else(|| {
            Error::InvalidArgument(format!("dense form of shape {shape:?} is too large"))
        })?;
        if coeffs.len() != expected {
            return Err(Error::Dimension(format!(
                "dense form of shape {shape:?} needs {expected} coefficients, got {}",
                coeffs.len()
            )));
        }
        Ok(DenseTensorForm { shape, coeffs })
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// `alpha·f + beta·g`.
    pub fn linear_combination(
        alpha: &Rational,
        f: &DenseTensorForm,
        beta: &Rational,
        g: &DenseTensorForm,
    ) -> Result<DenseTensorForm> {
        if f.shape != g.shape {
            return Err(Error::Dimension("forms of different shapes".into()));
        }
        Ok(DenseTensorForm {
            shape: f.shape.clone(),
            coeffs: f
                .coeffs
                .iter()
                .zip(&g.coeffs)
                .map(|(a, b)| alpha * a + beta * b)
                .collect(),
        })
    }
}

impl MultilinearForm for DenseTensorForm {
    fn shape(&self) -> &Shape {
        &self.shape
    }

    fn description(&self) -> String {
        format!("dense tensor form of shape {:?}", self.shape)
    }

    fn evaluate(&self, tuple: &MatrixTuple) -> Result<Rational> {
        check_shape(&self.shape, tuple)?;
        // Contract one slot at a time, starting from the least significant.
        let slots: Vec<(usize, usize)> = tuple
            .matrices()
            .iter()
            .enumerate()
            .flat_map(|(b, m)| (0..m.cols()).map(move |c| (b, c)))
            .collect();
        let mut current = self.coeffs.clone();
        for &(block, col) in slots.iter().rev() {
            let m = &tuple.matrices()[block];
            let d = m.rows();
            current = current
                .chunks_exact(d)
                .map(|chunk| {
                    chunk
                        .iter()
                        .enumerate()
                        .filter(|(_, c)| !c.is_zero())
                        .fold(Rational::zero(), |acc, (r, c)| acc + c * m.get(r, col))
                })
                .collect();
        }
        debug_assert_eq!(current.len(), 1);
        Ok(current.pop().unwrap_or_else(Rational::zero))
    }
}

pub(crate) fn check_shape(expected: &Shape, tuple: &MatrixTuple) -> Result<()> {
    if expected != tuple.shape() {
        return Err(Error::Dimension(format!(
            "form of shape {expected:?} evaluated on a tuple of shape {:?}",
            tuple.shape()
        )));
    }
    Ok(())
}

/// `Σ_σ sgn(σ) f(σ⁻¹·𝒜)` over `S_{n_1} x .. x S_{n_k}`, exactly.
pub fn alternating_sum(
    form: &dyn MultilinearForm,
    tuple: &MatrixTuple,
    config: &ExecConfig,
) -> Result<Rational> {
    check_shape(form.shape(), tuple)?;
    let total = config.check_budget(tuple.shape().group_order())?;
    let bound = form.bind(tuple)?;
    let bound = bound.as_ref();
    let shape = tuple.shape();
    sum_ranges(total, config, |start, len| {
        let mut stream = ProductStream::range(shape, start, len)?;
        let mut acc = Rational::zero();
        while let Some(sigma) = stream.next_ref() {
            let value = bound.eval_acted(sigma)?;
            if value.is_zero() {
                continue;
            }
            if sigma.sign().is_odd() {
                acc -= value;
            } else {
                acc += value;
            }
        }
        Ok(acc)
    })
}

/// `I(f, n)`: the alternating sum at the tuple of identity matrices.
pub fn invariant_at_identity(form: &dyn MultilinearForm, config: &ExecConfig) -> Result<Rational> {
    alternating_sum(form, &MatrixTuple::identity(form.shape()), config)
}

/// Result of a constructive search whose success a nonzero invariant
/// guarantees on nonsingular input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome<T> {
    Found { witness: T, nodes: u64 },
    Exhausted { nodes: u64 },
}

impl<T> SearchOutcome<T> {
    pub fn witness(&self) -> Option<&T> {
        match self {
            SearchOutcome::Found { witness, .. } => Some(witness),
            SearchOutcome::Exhausted { .. } => None,
        }
    }

    pub fn nodes(&self) -> u64 {
        match self {
            SearchOutcome::Found { nodes, .. } | SearchOutcome::Exhausted { nodes } => *nodes,
        }
    }
}

/// Both sides of the determinantal identity for one form and one tuple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityReport {
    pub lhs: Rational,
    pub invariant: Rational,
    pub det_product: Rational,
    pub rhs: Rational,
    pub term_count: u128,
}

impl IdentityReport {
    pub fn new(lhs: Rational, invariant: Rational, det_product: Rational, term_count: u128) -> Self {
        let rhs = &invariant * &det_product;
        IdentityReport {
            lhs,
            invariant,
            det_product,
            rhs,
            term_count,
        }
    }

    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// Computes the alternating sum directly and compares it against
/// `I(f, n) · ∏ det(ⁱA)`.
pub fn verify_identity(
    form: &dyn MultilinearForm,
    tuple: &MatrixTuple,
    config: &ExecConfig,
) -> Result<IdentityReport> {
    let lhs = alternating_sum(form, tuple, config)?;
    let invariant = invariant_at_identity(form, config)?;
    let term_count = tuple.shape().group_order().unwrap_or(u128::MAX);
    Ok(IdentityReport::new(
        lhs,
        invariant,
        tuple.det_product()?,
        term_count,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;
    use crate::perms::enumerate_product;

    fn seq() -> ExecConfig {
        ExecConfig::with_threads(1)
    }

    fn tuple(rows: &[&[Vec<i64>]]) -> MatrixTuple {
        MatrixTuple::new(rows.iter().map(|m| Matrix::from_i64_rows(m).unwrap()).collect()).unwrap()
    }

    /// The sum as literally written, with `σ⁻¹` applied.
    fn literal_sum(form: &dyn MultilinearForm, a: &MatrixTuple) -> Rational {
        enumerate_product(a.shape())
            .unwrap()
            .map(|s| s.sign().apply(form.evaluate(&act(&s.inverse(), a).unwrap()).unwrap()))
            .sum()
    }

    fn seeded_dense(shape: &Shape, seed: i64) -> DenseTensorForm {
        let count = DenseTensorForm::coefficient_count(shape).unwrap();
        let coeffs = (0..count as i64)
            .map(|k| int((k * 7 + seed * 13 + (k * k) % 11) % 9 - 4))
            .collect();
        DenseTensorForm::new(shape.clone(), coeffs).unwrap()
    }

    #[test]
    fn single_covector_shape_1() {
        let shape = Shape::new(vec![1]).unwrap();
        let u = DenseTensorForm::new(shape, vec![int(5)]).unwrap();
        let a = tuple(&[&[vec![3]]]);
        assert_eq!(alternating_sum(&u, &a, &seq()).unwrap(), int(15));
    }

    #[test]
    fn dense_evaluation_matches_hand_expansion() {
        // shape (2): f(a, b) = Σ c[r][s] a_r b_s
        let shape = Shape::new(vec![2]).unwrap();
        let f = DenseTensorForm::new(shape, vec![int(1), int(2), int(3), int(4)]).unwrap();
        let a = tuple(&[&[vec![5, 7], vec![6, 8]]]);
        // a = (5, 6), b = (7, 8)
        let expected = 5 * 7 + 2 * 5 * 8 + 3 * 6 * 7 + 4 * 6 * 8;
        assert_eq!(f.evaluate(&a).unwrap(), int(expected));
    }

    #[test]
    fn inverse_convention_matches_literal_sum() {
        let shape = Shape::new(vec![2, 2]).unwrap();
        let a = tuple(&[&[vec![1, 2], vec![3, -4]], &[vec![0, 5], vec![-2, 1]]]);
        for seed in 0..5 {
            let f = seeded_dense(&shape, seed);
            assert_eq!(alternating_sum(&f, &a, &seq()).unwrap(), literal_sum(&f, &a));
        }
        let shape = Shape::new(vec![3, 2]).unwrap();
        let b = tuple(&[
            &[vec![1, 2, 0], vec![3, -4, 1], vec![2, 2, 7]],
            &[vec![0, 5], vec![-2, 1]],
        ]);
        let f = seeded_dense(&shape, 3);
        assert_eq!(alternating_sum(&f, &b, &seq()).unwrap(), literal_sum(&f, &b));
    }

    #[test]
    fn first_entry_product_invariant() {
        let shape = Shape::new(vec![1, 1]).unwrap();
        let f = FnForm::new(shape, "first entries", |t: &MatrixTuple| {
            Ok(t.matrices().iter().map(|m| m.get(0, 0).clone()).product())
        });
        assert_eq!(invariant_at_identity(&f, &seq()).unwrap(), int(1));
    }

    #[test]
    fn identity_holds_on_dense_2_2() {
        let shape = Shape::new(vec![2, 2]).unwrap();
        let a = tuple(&[&[vec![2, 1], vec![1, 3]], &[vec![4, -1], vec![2, 2]]]);
        let f = seeded_dense(&shape, 1);
        let report = verify_identity(&f, &a, &seq()).unwrap();
        assert!(report.holds(), "{report:?}");
        assert_eq!(report.term_count, 4);
        assert_eq!(report.det_product, int(5 * 10));
    }

    #[test]
    fn singular_tuple_gives_zero_sum() {
        let shape = Shape::new(vec![2, 2]).unwrap();
        let a = tuple(&[&[vec![1, 1], vec![2, 2]], &[vec![4, -1], vec![2, 2]]]);
        let f = seeded_dense(&shape, 2);
        let report = verify_identity(&f, &a, &seq()).unwrap();
        assert_eq!(report.rhs, int(0));
        assert_eq!(report.lhs, int(0));
    }

    #[test]
    fn shape_mismatch_and_budget() {
        let f = seeded_dense(&Shape::new(vec![2, 2]).unwrap(), 0);
        let a = tuple(&[&[vec![1, 0], vec![0, 1]]]);
        assert!(matches!(
            alternating_sum(&f, &a, &seq()),
            Err(Error::Dimension(_))
        ));
        let tight = ExecConfig {
            threads: 1,
            term_budget: 3,
        };
        assert_eq!(
            invariant_at_identity(&f, &tight).unwrap_err(),
            Error::BudgetExceeded {
                terms: Some(4),
                budget: 3
            }
        );
    }

    #[test]
    fn non_square_matrix_rejected() {
        let err = MatrixTuple::new(vec![Matrix::zeros(2, 3)]).unwrap_err();
        assert!(matches!(err, Error::Dimension(_)));
    }
}
