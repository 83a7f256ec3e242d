//! Colorful determinants, signed Latin squares and transversal search.
//!
//! The colorful form of `n` matrices of size `n x n` multiplies, over every
//! position `j`, the determinant of the matrix whose `i`-th column is the
//! `j`-th column of `ⁱA`. Its invariant at identity matrices is the signed
//! count `l(n)` of Latin squares of order `n`, so
//!
//! ```text
//!   Σ_σ sgn(σ) ∏_j det(¹A^{σ₁(j)}, .., ⁿA^{σₙ(j)}) = l(n) ∏_i det(ⁱA)
//! ```
//!
//! Whenever `l(n) ≠ 0` and every `ⁱA` is invertible, some term is nonzero,
//! which is exactly an ordering of the columns whose transversals are all
//! bases. [`rota_search`] finds one.

use std::collections::HashMap;

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::engine::{
    alternating_sum, check_shape, BoundForm, IdentityReport, MatrixTuple, MultilinearForm,
    SearchOutcome,
};
use crate::error::{Error, Result};
use crate::exact::{det, Matrix, Rational};
use crate::parallel::{partition, ExecConfig};
use crate::perms::{factorial, PlainChanges, Shape, Sign, SignedPerm, SignedPermTuple};

/// Largest order accepted by [`alon_tarsi_count`].
pub const MAX_LATIN_ORDER: usize = 7;
pub const DEFAULT_NODE_CAP: u64 = 10_000_000;

/// The colorful product-of-determinants form on `n` matrices of size `n`.
#[derive(Debug, Clone)]
pub struct ColorfulForm {
    n: usize,
    shape: Shape,
}

pub fn colorful_form(n: usize) -> Result<ColorfulForm> {
    Ok(ColorfulForm {
        n,
        shape: Shape::uniform(n, n)?,
    })
}

impl ColorfulForm {
    pub fn order(&self) -> usize {
        self.n
    }

    /// Matrix whose `i`-th column is column `picks[i]` of `ⁱA`.
    fn transversal(tuple: &MatrixTuple, picks: &[usize]) -> Result<Matrix> {
        let columns: Vec<Vec<Rational>> = tuple
            .matrices()
            .iter()
            .zip(picks)
            .map(|(m, &c)| m.column(c))
            .collect();
        Matrix::from_columns(&columns)
    }
}

impl MultilinearForm for ColorfulForm {
    fn shape(&self) -> &Shape {
        &self.shape
    }

    fn description(&self) -> String {
        format!("colorful determinant product, n = {}", self.n)
    }

    fn evaluate(&self, tuple: &MatrixTuple) -> Result<Rational> {
        check_shape(&self.shape, tuple)?;
        let mut acc = Rational::one();
        for j in 0..self.n {
            let d = det(&ColorfulForm::transversal(tuple, &vec![j; self.n])?)?;
            if d.is_zero() {
                return Ok(d);
            }
            acc *= d;
        }
        Ok(acc)
    }

    fn bind<'a>(&'a self, tuple: &'a MatrixTuple) -> Result<Box<dyn BoundForm + 'a>> {
        check_shape(&self.shape, tuple)?;
        Ok(Box::new(TransversalTable::build(tuple)?))
    }
}

/// Determinants of every transversal `(¹A^{c₁}, .., ⁿA^{cₙ})`, indexed by
/// `c` read as a base-`n` number. Each term of the colorful sum is then a
/// product of `n` lookups.
struct TransversalTable {
    n: usize,
    dets: Vec<Rational>,
}

impl TransversalTable {
    fn build(tuple: &MatrixTuple) -> Result<TransversalTable> {
        let n = tuple.matrices().len();
        let size = n
            .checked_pow(n as u32)
            .filter(|&s| s <= 1 << 24)
            .ok_or_else(|| {
                Error::InvalidArgument(format!("transversal table for n = {n} is too large"))
            })?;
        let mut picks = vec![0usize; n];
        let mut dets = Vec::with_capacity(size);
        for index in 0..size {
            let mut rest = index;
            for slot in picks.iter_mut().rev() {
                *slot = rest % n;
                rest /= n;
            }
            dets.push(det(&ColorfulForm::transversal(tuple, &picks)?)?);
        }
        Ok(TransversalTable { n, dets })
    }
}

impl BoundForm for TransversalTable {
    fn eval_acted(&self, sigma: &SignedPermTuple) -> Result<Rational> {
        // column j of σ·ⁱA is column σᵢ⁻¹(j) of ⁱA
        let n = self.n;
        let mut inverses = vec![0usize; n * n];
        for (i, part) in sigma.parts().iter().enumerate() {
            for (j, &v) in part.mapping().iter().enumerate() {
                inverses[i * n + v] = j;
            }
        }
        let mut acc = Rational::one();
        for j in 0..n {
            let index = (0..n).fold(0, |idx, i| idx * n + inverses[i * n + j]);
            let d = &self.dets[index];
            if d.is_zero() {
                return Ok(Rational::zero());
            }
            acc *= d;
        }
        Ok(acc)
    }
}

/// An `n x n` array over `{1, .., n}` with every row and column a permutation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LatinSquare {
    grid: Vec<Vec<usize>>,
}

impl LatinSquare {
    pub fn new(grid: Vec<Vec<usize>>) -> Result<LatinSquare> {
        let n = grid.len();
        if n == 0 {
            return Err(Error::InvalidLatinSquare("empty grid".into()));
        }
        if grid.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidLatinSquare("grid is not square".into()));
        }
        let is_perm = |values: &mut dyn Iterator<Item = usize>| {
            let mut seen = vec![false; n + 1];
            for v in values {
                if !(1..=n).contains(&v) || std::mem::replace(&mut seen[v], true) {
                    return false;
                }
            }
            true
        };
        for (r, row) in grid.iter().enumerate() {
            if !is_perm(&mut row.iter().copied()) {
                return Err(Error::InvalidLatinSquare(format!(
                    "row {} is not a permutation of 1..{n}",
                    r + 1
                )));
            }
        }
        for c in 0..n {
            if !is_perm(&mut grid.iter().map(|row| row[c])) {
                return Err(Error::InvalidLatinSquare(format!(
                    "column {} is not a permutation of 1..{n}",
                    c + 1
                )));
            }
        }
        Ok(LatinSquare { grid })
    }

    pub fn order(&self) -> usize {
        self.grid.len()
    }

    pub fn grid(&self) -> &[Vec<usize>] {
        &self.grid
    }

    pub fn transpose(&self) -> LatinSquare {
        let n = self.order();
        LatinSquare {
            grid: (0..n).map(|c| (0..n).map(|r| self.grid[r][c]).collect()).collect(),
        }
    }

    fn row_perm(&self, r: usize) -> SignedPerm {
        SignedPerm::from_mapping(self.grid[r].iter().map(|v| v - 1).collect())
            .expect("validated on construction")
    }

    fn col_perm(&self, c: usize) -> SignedPerm {
        SignedPerm::from_mapping(self.grid.iter().map(|row| row[c] - 1).collect())
            .expect("validated on construction")
    }
}

/// Product of the signs of the `n` rows and the `n` columns, each read as a
/// permutation of `{1, .., n}`.
pub fn latin_sign(square: &LatinSquare) -> Sign {
    let n = square.order();
    (0..n)
        .map(|k| square.row_perm(k).sign() * square.col_perm(k).sign())
        .fold(Sign::Plus, |acc, s| acc * s)
}

/// Row-by-row, cell-by-cell completion of Latin rectangles. The running
/// parity counts row inversions and column inversions as each cell is
/// placed; the last row is forced by the column masks.
struct LatinWalker {
    n: usize,
    full: u32,
    col_used: [u32; MAX_LATIN_ORDER],
}

impl LatinWalker {
    fn above(&self, v: u32) -> u32 {
        self.full & !((2u32 << v) - 1)
    }

    fn fill(&mut self, row: usize, col: usize, row_used: u32, odd: bool) -> i128 {
        let n = self.n;
        if row == n - 1 {
            return self.finish(odd);
        }
        if col == n {
            return self.fill(row + 1, 0, 0, odd);
        }
        let mut avail = self.full & !row_used & !self.col_used[col];
        let mut total = 0;
        while avail != 0 {
            let v = avail.trailing_zeros();
            let bit = 1u32 << v;
            avail &= avail - 1;
            let above = self.above(v);
            let inv = (row_used & above).count_ones() + (self.col_used[col] & above).count_ones();
            self.col_used[col] |= bit;
            total += self.fill(row, col + 1, row_used | bit, odd ^ (inv & 1 == 1));
            self.col_used[col] &= !bit;
        }
        total
    }

    fn finish(&self, mut odd: bool) -> i128 {
        let mut row_used = 0u32;
        for c in 0..self.n {
            let bit = self.full & !self.col_used[c];
            debug_assert_eq!(bit.count_ones(), 1);
            let v = bit.trailing_zeros();
            let above = self.above(v);
            let inv = (row_used & above).count_ones() + (self.col_used[c] & above).count_ones();
            odd ^= inv & 1 == 1;
            row_used |= bit;
        }
        if odd {
            -1
        } else {
            1
        }
    }
}

/// Signed count of Latin squares of order `first_row.len()` whose first
/// row is `first_row` (0-based values).
fn count_with_first_row(first_row: &SignedPerm) -> i128 {
    let n = first_row.len();
    if n == 1 {
        return 1;
    }
    let mut walker = LatinWalker {
        n,
        full: (1u32 << n) - 1,
        col_used: [0; MAX_LATIN_ORDER],
    };
    for (c, &v) in first_row.mapping().iter().enumerate() {
        walker.col_used[c] = 1 << v;
    }
    walker.fill(1, 0, 0, first_row.sign().is_odd())
}

/// `l(n)`: even Latin squares of order `n` minus odd ones, by full
/// enumeration. Work is split across threads by the first row.
pub fn alon_tarsi_count(n: usize, config: &ExecConfig) -> Result<i128> {
    if n == 0 {
        return Err(Error::EmptyShape);
    }
    if n > MAX_LATIN_ORDER {
        let bound = factorial(n).and_then(|f| u128::from(f).checked_pow(n as u32));
        return Err(Error::BudgetExceeded {
            terms: bound,
            budget: config.term_budget,
        });
    }
    let rows = factorial(n).expect("n <= 7");
    let ranges = partition(u128::from(rows), (config.threads.max(1) * 4) as u128);
    let run = |&(start, len): &(u128, u128)| -> Result<i128> {
        let mut stream = PlainChanges::range(n, start as u64, len as u64)?;
        let mut acc = 0;
        while let Some(first) = stream.next_ref() {
            acc += count_with_first_row(first);
        }
        Ok(acc)
    };
    if config.threads <= 1 || n <= 4 {
        return ranges.iter().map(run).sum();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.threads)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    pool.install(|| ranges.par_iter().map(run).collect::<Vec<_>>())
        .into_iter()
        .sum()
}

/// `n` square matrices of size `n x n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColorfulInstance {
    tuple: MatrixTuple,
}

impl ColorfulInstance {
    pub fn new(matrices: Vec<Matrix>) -> Result<ColorfulInstance> {
        let n = matrices.len();
        let tuple = MatrixTuple::new(matrices)?;
        if tuple.shape().sizes().iter().any(|&s| s != n) {
            return Err(Error::Dimension(format!(
                "a colorful instance of {n} matrices needs every matrix to be {n}x{n}, got shape {:?}",
                tuple.shape()
            )));
        }
        Ok(ColorfulInstance { tuple })
    }

    pub fn order(&self) -> usize {
        self.tuple.matrices().len()
    }

    pub fn tuple(&self) -> &MatrixTuple {
        &self.tuple
    }

    pub fn matrices(&self) -> &[Matrix] {
        self.tuple.matrices()
    }
}

/// Checks the colorful identity on `inst`, with `l(n)` obtained by Latin
/// square enumeration rather than from the engine.
pub fn verify_onn(inst: &ColorfulInstance, config: &ExecConfig) -> Result<IdentityReport> {
    let n = inst.order();
    let form = colorful_form(n)?;
    let lhs = alternating_sum(&form, inst.tuple(), config)?;
    let l = alon_tarsi_count(n, config)?;
    Ok(IdentityReport::new(
        lhs,
        Rational::from_integer(l.into()),
        inst.tuple().det_product()?,
        inst.tuple().shape().group_order().unwrap_or(u128::MAX),
    ))
}

/// An ordering of the columns of every matrix: the `j`-th transversal is
/// `(¹A^{σ₁(j)}, .., ⁿA^{σₙ(j)})`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransversalSelection {
    sigma: SignedPermTuple,
}

impl TransversalSelection {
    pub fn new(sigma: SignedPermTuple) -> TransversalSelection {
        TransversalSelection { sigma }
    }

    pub fn sigma(&self) -> &SignedPermTuple {
        &self.sigma
    }

    /// Column indices (0-based) of the `j`-th transversal, one per matrix.
    pub fn transversal(&self, j: usize) -> Vec<usize> {
        self.sigma.parts().iter().map(|p| p.apply(j)).collect()
    }

    pub fn transversals(&self) -> Vec<Vec<usize>> {
        let n = self.sigma.parts().first().map_or(0, SignedPerm::len);
        (0..n).map(|j| self.transversal(j)).collect()
    }
}

/// Recomputes every transversal determinant of `selection` from scratch.
pub fn transversal_dets(inst: &ColorfulInstance, selection: &TransversalSelection) -> Result<Vec<Rational>> {
    if !selection.sigma.matches(inst.tuple().shape()) {
        return Err(Error::Dimension("selection shape does not match instance".into()));
    }
    selection
        .transversals()
        .iter()
        .map(|picks| det(&ColorfulForm::transversal(inst.tuple(), picks)?))
        .collect()
}

/// True when every transversal of `selection` is a basis.
pub fn verify_selection(inst: &ColorfulInstance, selection: &TransversalSelection) -> Result<bool> {
    Ok(transversal_dets(inst, selection)?.iter().all(|d| !d.is_zero()))
}

struct RotaSearch<'a> {
    inst: &'a ColorfulInstance,
    n: usize,
    cap: u64,
    nodes: u64,
    nonzero: HashMap<Vec<usize>, bool>,
    used: Vec<u32>,
    chosen: Vec<Vec<usize>>,
}

impl RotaSearch<'_> {
    fn is_basis(&mut self, picks: &[usize]) -> Result<bool> {
        if let Some(&known) = self.nonzero.get(picks) {
            return Ok(known);
        }
        let ok = !det(&ColorfulForm::transversal(self.inst.tuple(), picks)?)?.is_zero();
        self.nonzero.insert(picks.to_vec(), ok);
        Ok(ok)
    }

    /// Tries every lexicographically ordered tuple of unused columns at
    /// position `j`, descending only into those forming a basis.
    fn place(&mut self, j: usize) -> Result<bool> {
        if j == self.n {
            return Ok(true);
        }
        let n = self.n;
        let free: Vec<Vec<usize>> = self
            .used
            .iter()
            .map(|&mask| (0..n).filter(|c| mask & (1 << c) == 0).collect())
            .collect();
        let mut cursor = vec![0usize; n];
        loop {
            self.nodes += 1;
            if self.nodes > self.cap {
                return Err(Error::SearchBudgetExceeded { nodes: self.cap });
            }
            let picks: Vec<usize> = cursor.iter().zip(&free).map(|(&k, f)| f[k]).collect();
            if self.is_basis(&picks)? {
                for (mask, &c) in self.used.iter_mut().zip(&picks) {
                    *mask |= 1 << c;
                }
                self.chosen.push(picks.clone());
                if self.place(j + 1)? {
                    return Ok(true);
                }
                self.chosen.pop();
                for (mask, &c) in self.used.iter_mut().zip(&picks) {
                    *mask &= !(1 << c);
                }
            }
            // odometer over the free columns, last matrix fastest
            let mut i = n;
            loop {
                if i == 0 {
                    return Ok(false);
                }
                i -= 1;
                cursor[i] += 1;
                if cursor[i] < free[i].len() {
                    break;
                }
                cursor[i] = 0;
            }
        }
    }
}

/// Backtracking search for a column ordering whose every transversal is a
/// basis. Returns the lexicographically first one, or `Exhausted` when none
/// exists. Visiting more than `node_cap` candidate transversals is an error.
pub fn rota_search(
    inst: &ColorfulInstance,
    node_cap: u64,
) -> Result<SearchOutcome<TransversalSelection>> {
    let n = inst.order();
    if n > 31 {
        return Err(Error::InvalidArgument(format!("order {n} is too large to search")));
    }
    let mut search = RotaSearch {
        inst,
        n,
        cap: node_cap,
        nodes: 0,
        nonzero: HashMap::new(),
        used: vec![0; n],
        chosen: Vec::with_capacity(n),
    };
    if !search.place(0)? {
        return Ok(SearchOutcome::Exhausted {
            nodes: search.nodes,
        });
    }
    let mut mappings = vec![vec![0usize; n]; n];
    for (j, picks) in search.chosen.iter().enumerate() {
        for (i, &c) in picks.iter().enumerate() {
            mappings[i][j] = c;
        }
    }
    let parts = mappings
        .into_iter()
        .map(SignedPerm::from_mapping)
        .collect::<Result<Vec<_>>>()?;
    Ok(SearchOutcome::Found {
        witness: TransversalSelection::new(SignedPermTuple::new(parts)),
        nodes: search.nodes,
    })
}
