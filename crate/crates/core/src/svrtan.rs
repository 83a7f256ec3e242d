//! Spinor assignments on the complete graph and the `n!` formula.
//!
//! Every unordered edge `{i, j}` (`i < j`) of the complete graph on `n`
//! vertices carries an ordered basis `(p₁, p₂)` of the polynomials of degree
//! at most one. A [`Choice`] sends one of the two to the oriented edge
//! `e_ij` and the other to `e_ji`; vertex `i` then gets the product of the
//! spinors on its outgoing edges, a polynomial of degree `< n`. Summed with
//! signs over all `2^C(n,2)` choices, the determinant of those `n`
//! polynomials equals `n! ∏ det(p₁, p₂)`.
//!
//! Edges are numbered lexicographically: `{0,1}, {0,2}, .., {0,n-1}, {1,2}, ..`
//! (0-based here, 1-based in external formats). Bit `e` of a choice is
//! clear when `e_ij` (`i < j`) receives `p₁`.

use num_traits::{One, Zero};

use crate::engine::{check_shape, IdentityReport, MatrixTuple, MultilinearForm, SearchOutcome};
use crate::error::{Error, Result};
use crate::exact::{det, poly_det, poly_mul, Matrix, Polynomial, Rational};
use crate::parallel::{map_ranges, sum_ranges, ExecConfig};
use crate::perms::{factorial, Shape, Sign};

/// Edge bits are packed in a `u64`.
pub const MAX_VERTICES: usize = 11;

pub fn edge_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Lexicographic number of edge `{i, j}`, `i < j < n`.
pub fn edge_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

/// All edges `(i, j)`, `i < j`, in lexicographic order.
pub fn edges(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
}

/// Ordered basis `(p₁, p₂)` of the degree-≤1 polynomials for one edge.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EdgeBasis {
    pub p1: Polynomial,
    pub p2: Polynomial,
}

impl EdgeBasis {
    pub fn new(p1: Polynomial, p2: Polynomial) -> Result<EdgeBasis> {
        Ok(EdgeBasis {
            p1: p1.embed(2)?,
            p2: p2.embed(2)?,
        })
    }

    /// The basis `(1, t)`.
    pub fn standard() -> EdgeBasis {
        EdgeBasis {
            p1: Polynomial::one(2),
            p2: Polynomial::monomial(1, 2),
        }
    }

    /// 2x2 matrix with columns `p₁`, `p₂` (row 0 constant terms, row 1 `t`).
    pub fn matrix(&self) -> Matrix {
        Matrix::from_columns(&[self.p1.coeffs().to_vec(), self.p2.coeffs().to_vec()])
            .expect("two columns of length two")
    }

    pub fn from_matrix(m: &Matrix) -> Result<EdgeBasis> {
        if m.rows() != 2 || m.cols() != 2 {
            return Err(Error::Dimension(format!(
                "edge basis matrix must be 2x2, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        Ok(EdgeBasis {
            p1: Polynomial::new(m.column(0)),
            p2: Polynomial::new(m.column(1)),
        })
    }

    pub fn det(&self) -> Rational {
        let a = self.p1.coeffs();
        let b = self.p2.coeffs();
        &a[0] * &b[1] - &a[1] * &b[0]
    }

    pub fn scale(&self, factor: &Rational) -> EdgeBasis {
        EdgeBasis {
            p1: self.p1.scale(factor),
            p2: self.p2.scale(factor),
        }
    }
}

/// A basis for every edge of the complete graph on `n` vertices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SpinorInstance {
    n: usize,
    bases: Vec<EdgeBasis>,
}

impl SpinorInstance {
    /// `bases` in lexicographic edge order.
    pub fn new(n: usize, bases: Vec<EdgeBasis>) -> Result<SpinorInstance> {
        if n == 0 {
            return Err(Error::InvalidArgument("a spinor instance needs at least one vertex".into()));
        }
        if n > MAX_VERTICES {
            return Err(Error::InvalidArgument(format!(
                "at most {MAX_VERTICES} vertices are supported, got {n}"
            )));
        }
        if bases.len() != edge_count(n) {
            return Err(Error::Dimension(format!(
                "{n} vertices need {} edge bases, got {}",
                edge_count(n),
                bases.len()
            )));
        }
        Ok(SpinorInstance { n, bases })
    }

    /// Every edge carries `(1, t)`.
    pub fn standard(n: usize) -> Result<SpinorInstance> {
        SpinorInstance::new(n, vec![EdgeBasis::standard(); edge_count(n)])
    }

    pub fn vertices(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.bases.len()
    }

    pub fn bases(&self) -> &[EdgeBasis] {
        &self.bases
    }

    pub fn basis(&self, i: usize, j: usize) -> &EdgeBasis {
        &self.bases[edge_index(self.n, i, j)]
    }

    pub fn edge_dets(&self) -> Vec<Rational> {
        self.bases.iter().map(EdgeBasis::det).collect()
    }

    pub fn is_nonsingular(&self) -> bool {
        self.bases.iter().all(|b| !b.det().is_zero())
    }

    pub fn with_basis(&self, edge: usize, basis: EdgeBasis) -> SpinorInstance {
        let mut out = self.clone();
        out.bases[edge] = basis;
        out
    }

    /// Spinor assigned to the oriented edge `e_ij` under `c`.
    fn spinor(&self, c: &Choice, i: usize, j: usize) -> &Polynomial {
        let (lo, hi) = if i < j { (i, j) } else { (j, i) };
        let e = edge_index(self.n, lo, hi);
        let basis = &self.bases[e];
        // bit clear: e_lo,hi gets p₁ and e_hi,lo gets p₂
        if c.bit(e) == (i < j) {
            &basis.p2
        } else {
            &basis.p1
        }
    }

    /// `p^c_i = ∏_{j≠i} p^c_{ij}` in the space of degree `< n`.
    fn vertex_poly(&self, c: &Choice, i: usize) -> Result<Polynomial> {
        (0..self.n)
            .filter(|&j| j != i)
            .try_fold(Polynomial::one(self.n), |acc, j| {
                poly_mul(&acc, self.spinor(c, i, j), self.n)
            })
    }
}

/// One bit per unordered edge: set when `e_ij` (`i < j`) receives `p₂`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Choice {
    edges: usize,
    bits: u64,
}

impl Choice {
    pub fn new(edges: usize, bits: u64) -> Result<Choice> {
        if edges > 63 || bits >> edges != 0 {
            return Err(Error::InvalidArgument(format!(
                "bits {bits:#b} do not fit in {edges} edges"
            )));
        }
        Ok(Choice { edges, bits })
    }

    /// The base choice: every `e_ij`, `i < j`, receives `p₁`.
    pub fn base(edges: usize) -> Choice {
        Choice { edges, bits: 0 }
    }

    pub fn edges(&self) -> usize {
        self.edges
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn bit(&self, edge: usize) -> bool {
        self.bits >> edge & 1 == 1
    }

    /// `(-1)^{number of p₂ selections}`.
    pub fn sign(&self) -> Sign {
        Sign::from_parity(self.bits.count_ones() % 2 == 1)
    }

    pub fn flipped(&self, edge: usize) -> Choice {
        Choice {
            edges: self.edges,
            bits: self.bits ^ (1 << edge),
        }
    }

    /// Out-degree of every vertex when edge `{i, j}` is oriented `i → j`
    /// exactly when `e_ij` receives `p₁`.
    pub fn out_degrees(&self, n: usize) -> Vec<usize> {
        let mut out = vec![0; n];
        for (e, (i, j)) in edges(n).enumerate() {
            if self.bit(e) {
                out[j] += 1;
            } else {
                out[i] += 1;
            }
        }
        out
    }

    /// True when the out-degrees are `0, 1, .., n-1` in some order.
    pub fn is_transitive(&self, n: usize) -> bool {
        let mut degrees = self.out_degrees(n);
        degrees.sort_unstable();
        degrees.iter().enumerate().all(|(k, &d)| k == d)
    }
}

fn check_choice(inst: &SpinorInstance, c: &Choice) -> Result<()> {
    if c.edges != inst.edge_count() {
        return Err(Error::BitCountMismatch {
            got: c.edges,
            expected: inst.edge_count(),
        });
    }
    Ok(())
}

/// The `n` vertex polynomials `p^c_1, .., p^c_n`, each in the space of
/// degree `< n`.
pub fn choice_polys(inst: &SpinorInstance, c: &Choice) -> Result<Vec<Polynomial>> {
    check_choice(inst, c)?;
    (0..inst.n).map(|i| inst.vertex_poly(c, i)).collect()
}

/// `det(p^c_1, .., p^c_n)`.
pub fn choice_det(inst: &SpinorInstance, c: &Choice) -> Result<Rational> {
    poly_det(&choice_polys(inst, c)?)
}

fn choice_space(inst: &SpinorInstance, config: &ExecConfig) -> Result<u128> {
    config.check_budget(1u128.checked_shl(inst.edge_count() as u32))
}

/// Computes `Σ_c sgn(c) det(p^c_1, .., p^c_n)` and `n! ∏ det(p₁, p₂)`.
pub fn verify_svrtan(inst: &SpinorInstance, config: &ExecConfig) -> Result<IdentityReport> {
    let total = choice_space(inst, config)?;
    let edges = inst.edge_count();
    let lhs = sum_ranges(total, config, |start, len| {
        let mut acc = Rational::zero();
        for bits in start..start + len {
            let c = Choice::new(edges, bits as u64)?;
            let d = choice_det(inst, &c)?;
            if !d.is_zero() {
                acc += c.sign().apply(d);
            }
        }
        Ok(acc)
    })?;
    let n_factorial = factorial(inst.n).expect("n <= MAX_VERTICES");
    let det_product = inst.edge_dets().into_iter().product();
    Ok(IdentityReport::new(
        lhs,
        Rational::from_integer(n_factorial.into()),
        det_product,
        total,
    ))
}

/// Tally of nonzero terms for the standard bases `(1, t)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Census {
    pub vertices: usize,
    pub total: u64,
    pub nonzero: u64,
    /// Nonzero terms whose orientation is a transitive tournament.
    pub nonzero_transitive: u64,
    /// Transitive orientations whose term vanished anyway.
    pub transitive_zero: u64,
}

impl Census {
    /// `n!` nonzero terms, exactly the transitive tournaments.
    pub fn holds(&self) -> bool {
        factorial(self.vertices) == Some(self.nonzero)
            && self.nonzero_transitive == self.nonzero
            && self.transitive_zero == 0
    }
}

/// Counts the choices with a nonzero determinant for the standard spinor
/// bases and checks each against the transitive-tournament condition.
pub fn nonzero_term_census(n: usize, config: &ExecConfig) -> Result<Census> {
    let inst = SpinorInstance::standard(n)?;
    let total = choice_space(&inst, config)?;
    let edges = inst.edge_count();
    let parts = map_ranges(total, config, |start, len| {
        let mut tally = (0u64, 0u64, 0u64);
        for bits in start..start + len {
            let c = Choice::new(edges, bits as u64)?;
            let nonzero = !choice_det(&inst, &c)?.is_zero();
            let transitive = c.is_transitive(n);
            match (nonzero, transitive) {
                (true, true) => {
                    tally.0 += 1;
                    tally.1 += 1;
                }
                (true, false) => tally.0 += 1,
                (false, true) => tally.2 += 1,
                (false, false) => {}
            }
        }
        Ok(tally)
    })?;
    let (nonzero, nonzero_transitive, transitive_zero) = parts
        .into_iter()
        .fold((0, 0, 0), |a, b| (a.0 + b.0, a.1 + b.1, a.2 + b.2));
    Ok(Census {
        vertices: n,
        total: total as u64,
        nonzero,
        nonzero_transitive,
        transitive_zero,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    /// Update only the two vertex polynomials touched by each Gray-code step.
    pub incremental: bool,
    /// Maximum number of choices examined.
    pub node_cap: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            incremental: false,
            node_cap: crate::onn::DEFAULT_NODE_CAP,
        }
    }
}

/// Walks the choices in reflected binary order and returns the first with
/// a nonzero determinant.
pub fn svrtan_search(inst: &SpinorInstance, opts: &SearchOptions) -> Result<SearchOutcome<Choice>> {
    let edges = inst.edge_count();
    let total = 1u64 << edges;
    let mut choice = Choice::base(edges);
    let mut polys = choice_polys(inst, &choice)?;
    for k in 0..total {
        if k >= opts.node_cap {
            return Err(Error::SearchBudgetExceeded {
                nodes: opts.node_cap,
            });
        }
        if k > 0 {
            let edge = k.trailing_zeros() as usize;
            choice = choice.flipped(edge);
            if opts.incremental {
                let (i, j) = edges_nth(inst.n, edge);
                polys[i] = inst.vertex_poly(&choice, i)?;
                polys[j] = inst.vertex_poly(&choice, j)?;
            } else {
                polys = choice_polys(inst, &choice)?;
            }
        }
        if !poly_det(&polys)?.is_zero() {
            return Ok(SearchOutcome::Found {
                witness: choice,
                nodes: k + 1,
            });
        }
    }
    Ok(SearchOutcome::Exhausted { nodes: total })
}

fn edges_nth(n: usize, e: usize) -> (usize, usize) {
    edges(n).nth(e).expect("edge index in range")
}

/// The multilinear form `f(𝒜) = det(p^{c₀}_1, .., p^{c₀}_n)` on tuples of
/// `C(n,2)` matrices of size 2, where column 1 of the `e`-th matrix plays
/// `p₁` and column 2 plays `p₂` for edge `e`.
#[derive(Debug, Clone)]
pub struct SpinorBaseForm {
    n: usize,
    shape: Shape,
}

impl SpinorBaseForm {
    pub fn new(n: usize) -> Result<SpinorBaseForm> {
        Ok(SpinorBaseForm {
            n,
            shape: Shape::uniform(2, edge_count(n))?,
        })
    }
}

impl MultilinearForm for SpinorBaseForm {
    fn shape(&self) -> &Shape {
        &self.shape
    }

    fn description(&self) -> String {
        format!("base-choice spinor determinant, n = {}", self.n)
    }

    fn evaluate(&self, tuple: &MatrixTuple) -> Result<Rational> {
        check_shape(&self.shape, tuple)?;
        let bases = tuple
            .matrices()
            .iter()
            .map(EdgeBasis::from_matrix)
            .collect::<Result<Vec<_>>>()?;
        let inst = SpinorInstance::new(self.n, bases)?;
        choice_det(&inst, &Choice::base(inst.edge_count()))
    }
}

/// Recasts `inst` as a form and a matrix tuple of shape `(2, .., 2)`. The
/// transposition in factor `e` swaps the two spinors of edge `e`, so the
/// group sum visits exactly the choices, with matching signs. Needs `n >= 2`
/// (with one vertex there are no edges and no tuple).
pub fn as_engine_instance(inst: &SpinorInstance) -> Result<(SpinorBaseForm, MatrixTuple)> {
    let form = SpinorBaseForm::new(inst.n)?;
    let tuple = MatrixTuple::new(inst.bases.iter().map(EdgeBasis::matrix).collect())?;
    Ok((form, tuple))
}

/// Product of the edge determinants, `∏ det(p₁, p₂)`.
pub fn edge_det_product(inst: &SpinorInstance) -> Result<Rational> {
    inst.bases
        .iter()
        .try_fold(Rational::one(), |acc, b| Ok(acc * det(&b.matrix())?))
}
