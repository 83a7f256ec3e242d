//! Signed permutations, plain-changes enumeration of `S_n` and of products
//! `S_{n_1} x ... x S_{n_k}`, and the column action on matrix tuples.
//!
//! Plain changes (Steinhaus-Johnson-Trotter order) moves from one permutation
//! to the next by a single adjacent transposition, so the parity of the
//! permutation at rank `r` is simply `(-1)^r`. Every stream can be started at
//! an arbitrary rank, which is what the parallel engine uses to split work.

use std::fmt;
use std::ops::Mul;

use crate::engine::MatrixTuple;
use crate::error::{Error, Result};
use crate::exact::{Matrix, Rational};

/// Parity of a permutation, or a product of parities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn from_parity(odd: bool) -> Sign {
        if odd {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn is_odd(self) -> bool {
        self == Sign::Minus
    }

    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    /// `self * value`.
    pub fn apply(self, value: Rational) -> Rational {
        match self {
            Sign::Plus => value,
            Sign::Minus => -value,
        }
    }
}

impl Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        Sign::from_parity(self.is_odd() != rhs.is_odd())
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+1",
            Sign::Minus => "-1",
        })
    }
}

/// A permutation of `{0, .., n-1}` in one-line notation (`mapping[j] = σ(j)`)
/// together with its parity.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SignedPerm {
    mapping: Vec<usize>,
    sign: Sign,
}

impl SignedPerm {
    pub fn identity(n: usize) -> SignedPerm {
        SignedPerm {
            mapping: (0..n).collect(),
            sign: Sign::Plus,
        }
    }

    /// Validates the bijection and computes the parity from its cycle type.
    pub fn from_mapping(mapping: Vec<usize>) -> Result<SignedPerm> {
        let n = mapping.len();
        let mut seen = vec![false; n];
        for &v in &mapping {
            if v >= n || seen[v] {
                return Err(Error::InvalidArgument(format!(
                    "{mapping:?} is not a permutation of 0..{n}"
                )));
            }
            seen[v] = true;
        }
        // parity = (n - number of cycles) mod 2
        let mut visited = vec![false; n];
        let mut cycles = 0;
        for start in 0..n {
            if visited[start] {
                continue;
            }
            cycles += 1;
            let mut j = start;
            while !visited[j] {
                visited[j] = true;
                j = mapping[j];
            }
        }
        Ok(SignedPerm {
            mapping,
            sign: Sign::from_parity((n - cycles) % 2 == 1),
        })
    }

    /// The transposition exchanging `a` and `b`.
    pub fn transposition(n: usize, a: usize, b: usize) -> SignedPerm {
        let mut mapping: Vec<usize> = (0..n).collect();
        mapping.swap(a, b);
        SignedPerm {
            mapping,
            sign: Sign::from_parity(a != b),
        }
    }

    pub fn len(&self) -> usize {
        self.mapping.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mapping.is_empty()
    }

    pub fn mapping(&self) -> &[usize] {
        &self.mapping
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn apply(&self, j: usize) -> usize {
        self.mapping[j]
    }

    pub fn is_identity(&self) -> bool {
        self.mapping.iter().enumerate().all(|(j, &v)| j == v)
    }

    pub fn inverse(&self) -> SignedPerm {
        let mut inv = vec![0; self.len()];
        for (j, &v) in self.mapping.iter().enumerate() {
            inv[v] = j;
        }
        SignedPerm {
            mapping: inv,
            sign: self.sign,
        }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &SignedPerm) -> Result<SignedPerm> {
        if self.len() != other.len() {
            return Err(Error::Dimension(format!(
                "composing permutations of {} and {} points",
                self.len(),
                other.len()
            )));
        }
        Ok(SignedPerm {
            mapping: other.mapping.iter().map(|&j| self.mapping[j]).collect(),
            sign: self.sign * other.sign,
        })
    }

    fn swap_positions(&mut self, p: usize, q: usize) {
        self.mapping.swap(p, q);
        self.sign = self.sign.flip();
    }
}

impl fmt::Debug for SignedPerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}", self.mapping, self.sign)
    }
}

/// Mixed-radix digits of a plain-changes rank. For element `e >= 1`,
/// `digit[e]` in `0..=e` is how far `e` has travelled through the sub-list of
/// elements `<= e`, and `odd[e]` tells which direction it is travelling.
#[derive(Clone, Debug)]
struct SjtState {
    digit: Vec<usize>,
    odd: Vec<bool>,
    position: Vec<usize>,
}

impl SjtState {
    fn at_rank(n: usize, rank: u64) -> (SjtState, SignedPerm) {
        let mut digit = vec![0; n];
        let mut odd = vec![false; n];
        let mut r = rank;
        for e in (1..n).rev() {
            let m = e as u64 + 1;
            digit[e] = (r % m) as usize;
            r /= m;
            odd[e] = r % 2 == 1;
        }
        let mut list: Vec<usize> = Vec::with_capacity(n);
        if n > 0 {
            list.push(0);
        }
        for e in 1..n {
            let pos = if odd[e] { digit[e] } else { e - digit[e] };
            list.insert(pos, e);
        }
        let mut position = vec![0; n];
        for (p, &e) in list.iter().enumerate() {
            position[e] = p;
        }
        let perm = SignedPerm {
            mapping: list,
            sign: Sign::from_parity(rank % 2 == 1),
        };
        (
            SjtState {
                digit,
                odd,
                position,
            },
            perm,
        )
    }

    /// Advances by one adjacent transposition. Returns `false` (leaving the
    /// state unusable) when the last permutation has already been reached.
    fn step(&mut self, perm: &mut SignedPerm) -> bool {
        for e in (1..perm.len()).rev() {
            if self.digit[e] < e {
                self.digit[e] += 1;
                let p = self.position[e];
                let q = if self.odd[e] { p + 1 } else { p - 1 };
                let other = perm.mapping[q];
                perm.swap_positions(p, q);
                self.position[e] = q;
                self.position[other] = p;
                return true;
            }
            self.digit[e] = 0;
            self.odd[e] = !self.odd[e];
        }
        false
    }
}

pub fn factorial(n: usize) -> Option<u64> {
    (1..=n as u64).try_fold(1u64, |acc, k| acc.checked_mul(k))
}

/// Rank of `perm` in plain-changes order.
pub fn plain_changes_rank(perm: &SignedPerm) -> u64 {
    let mut r: u64 = 0;
    for e in 1..perm.len() {
        let pos = perm.mapping.iter().take_while(|&&v| v != e).filter(|&&v| v < e).count();
        let i = if r % 2 == 1 { pos } else { e - pos };
        r = r * (e as u64 + 1) + i as u64;
    }
    r
}

/// Permutation at `rank` in plain-changes order.
pub fn plain_changes_unrank(n: usize, rank: u64) -> Result<SignedPerm> {
    match factorial(n) {
        Some(total) if rank < total => Ok(SjtState::at_rank(n, rank).1),
        _ => Err(Error::InvalidArgument(format!(
            "rank {rank} out of range for permutations of {n} points"
        ))),
    }
}

/// Stream over a contiguous rank range of `S_n` in plain-changes order.
#[derive(Clone, Debug)]
pub struct PlainChanges {
    state: SjtState,
    perm: SignedPerm,
    remaining: u64,
    primed: bool,
}

impl PlainChanges {
    pub fn range(n: usize, start: u64, len: u64) -> Result<PlainChanges> {
        if n == 0 {
            return Err(Error::EmptyShape);
        }
        let total = factorial(n).ok_or_else(|| {
            Error::InvalidArgument(format!("{n}! does not fit in 64 bits"))
        })?;
        if start.checked_add(len).is_none_or(|end| end > total) {
            return Err(Error::InvalidArgument(format!(
                "rank range {start}+{len} exceeds {n}! = {total}"
            )));
        }
        let (state, perm) = SjtState::at_rank(n, start.min(total - 1));
        Ok(PlainChanges {
            state,
            perm,
            remaining: len,
            primed: false,
        })
    }

    pub fn next_ref(&mut self) -> Option<&SignedPerm> {
        if self.remaining == 0 {
            return None;
        }
        if self.primed {
            let moved = self.state.step(&mut self.perm);
            debug_assert!(moved);
        }
        self.primed = true;
        self.remaining -= 1;
        Some(&self.perm)
    }
}

impl Iterator for PlainChanges {
    type Item = SignedPerm;

    fn next(&mut self) -> Option<SignedPerm> {
        self.next_ref().cloned()
    }
}

/// All `n!` permutations of `n` points, each exactly once, in plain-changes
/// order starting from the identity.
pub fn enumerate_signed(n: usize) -> Result<PlainChanges> {
    let total = factorial(n)
        .ok_or_else(|| Error::InvalidArgument(format!("{n}! does not fit in 64 bits")))?;
    PlainChanges::range(n, 0, total)
}

/// Sizes `(n_1, .., n_k)` of a tuple of square matrices.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Shape {
    sizes: Vec<usize>,
}

impl Shape {
    pub fn new(sizes: Vec<usize>) -> Result<Shape> {
        if sizes.is_empty() || sizes.contains(&0) {
            return Err(Error::EmptyShape);
        }
        Ok(Shape { sizes })
    }

    /// `k` copies of size `n`.
    pub fn uniform(n: usize, k: usize) -> Result<Shape> {
        Shape::new(vec![n; k])
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn factors(&self) -> usize {
        self.sizes.len()
    }

    /// `∏ n_i!`, the order of the product group, or `None` on overflow.
    pub fn group_order(&self) -> Option<u128> {
        self.sizes
            .iter()
            .try_fold(1u128, |acc, &n| acc.checked_mul(u128::from(factorial(n)?)))
    }
}

impl fmt::Debug for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.sizes)
    }
}

/// An element `σ = (σ_1, .., σ_k)` of a product of symmetric groups.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SignedPermTuple {
    parts: Vec<SignedPerm>,
    sign: Sign,
}

impl SignedPermTuple {
    pub fn new(parts: Vec<SignedPerm>) -> SignedPermTuple {
        let sign = parts.iter().fold(Sign::Plus, |s, p| s * p.sign);
        SignedPermTuple { parts, sign }
    }

    pub fn identity(shape: &Shape) -> SignedPermTuple {
        SignedPermTuple::new(shape.sizes.iter().map(|&n| SignedPerm::identity(n)).collect())
    }

    pub fn parts(&self) -> &[SignedPerm] {
        &self.parts
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn shape(&self) -> Shape {
        Shape {
            sizes: self.parts.iter().map(SignedPerm::len).collect(),
        }
    }

    pub fn matches(&self, shape: &Shape) -> bool {
        self.parts.len() == shape.sizes.len()
            && self.parts.iter().zip(&shape.sizes).all(|(p, &n)| p.len() == n)
    }

    pub fn inverse(&self) -> SignedPermTuple {
        SignedPermTuple {
            parts: self.parts.iter().map(SignedPerm::inverse).collect(),
            sign: self.sign,
        }
    }

    /// Factor-wise `self ∘ other`.
    pub fn compose(&self, other: &SignedPermTuple) -> Result<SignedPermTuple> {
        if self.parts.len() != other.parts.len() {
            return Err(Error::Dimension("tuples with different factor counts".into()));
        }
        let parts = self
            .parts
            .iter()
            .zip(&other.parts)
            .map(|(a, b)| a.compose(b))
            .collect::<Result<Vec<_>>>()?;
        Ok(SignedPermTuple::new(parts))
    }
}

impl fmt::Debug for SignedPermTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.parts).finish()?;
        write!(f, "{}", self.sign)
    }
}

/// Mixed-radix walk over a rank range of a product group; the last factor
/// varies fastest. The tuple rank is `((r_1 * n_2! + r_2) * n_3! + r_3) ...`.
#[derive(Clone, Debug)]
pub struct ProductStream {
    radices: Vec<u64>,
    states: Vec<SjtState>,
    tuple: SignedPermTuple,
    remaining: u128,
    primed: bool,
}

impl ProductStream {
    pub fn range(shape: &Shape, start: u128, len: u128) -> Result<ProductStream> {
        let total = shape.group_order().ok_or(Error::BudgetExceeded {
            terms: None,
            budget: u64::MAX,
        })?;
        if start.checked_add(len).is_none_or(|end| end > total) {
            return Err(Error::InvalidArgument(format!(
                "rank range {start}+{len} exceeds group order {total}"
            )));
        }
        let radices: Vec<u64> = shape
            .sizes
            .iter()
            .map(|&n| factorial(n).expect("bounded by group order"))
            .collect();
        let mut ranks = vec![0u64; radices.len()];
        let mut r = start.min(total - 1);
        for i in (0..radices.len()).rev() {
            let radix = u128::from(radices[i]);
            ranks[i] = (r % radix) as u64;
            r /= radix;
        }
        let (states, parts): (Vec<_>, Vec<_>) = shape
            .sizes
            .iter()
            .zip(&ranks)
            .map(|(&n, &rank)| SjtState::at_rank(n, rank))
            .unzip();
        Ok(ProductStream {
            radices,
            states,
            tuple: SignedPermTuple::new(parts),
            remaining: len,
            primed: false,
        })
    }

    fn step(&mut self) {
        for i in (0..self.states.len()).rev() {
            if self.radices[i] > 1 && self.states[i].step(&mut self.tuple.parts[i]) {
                self.tuple.sign = self.tuple.sign.flip();
                return;
            }
            // factor i wrapped around; restart it and carry into factor i-1
            let n = self.tuple.parts[i].len();
            let old = self.tuple.parts[i].sign;
            let (state, perm) = SjtState::at_rank(n, 0);
            self.states[i] = state;
            self.tuple.parts[i] = perm;
            self.tuple.sign = self.tuple.sign * old;
        }
    }

    pub fn next_ref(&mut self) -> Option<&SignedPermTuple> {
        if self.remaining == 0 {
            return None;
        }
        if self.primed {
            self.step();
        }
        self.primed = true;
        self.remaining -= 1;
        Some(&self.tuple)
    }
}

impl Iterator for ProductStream {
    type Item = SignedPermTuple;

    fn next(&mut self) -> Option<SignedPermTuple> {
        self.next_ref().cloned()
    }
}

/// Every element of `S_{n_1} x ... x S_{n_k}` exactly once, with its sign.
pub fn enumerate_product(shape: &Shape) -> Result<ProductStream> {
    let total = shape.group_order().ok_or(Error::BudgetExceeded {
        terms: None,
        budget: u64::MAX,
    })?;
    ProductStream::range(shape, 0, total)
}

/// `(ρ·A)_{ij} = A_{i ρ⁻¹(j)}`: column `j` of `A` is moved to position `ρ(j)`.
pub fn act_on_matrix(rho: &SignedPerm, a: &Matrix) -> Result<Matrix> {
    if rho.len() != a.cols() {
        return Err(Error::Dimension(format!(
            "permutation of {} points acting on a matrix with {} columns",
            rho.len(),
            a.cols()
        )));
    }
    let mut out = Matrix::zeros(a.rows(), a.cols());
    for j in 0..a.cols() {
        let target = rho.apply(j);
        for i in 0..a.rows() {
            out.set(i, target, a.get(i, j).clone());
        }
    }
    Ok(out)
}

/// `σ·𝒜`, permuting the columns of each matrix by the matching factor.
pub fn act(sigma: &SignedPermTuple, tuple: &MatrixTuple) -> Result<MatrixTuple> {
    if !sigma.matches(tuple.shape()) {
        return Err(Error::Dimension(format!(
            "permutation tuple of shape {:?} acting on a matrix tuple of shape {:?}",
            sigma.shape(),
            tuple.shape()
        )));
    }
    let matrices = sigma
        .parts
        .iter()
        .zip(tuple.matrices())
        .map(|(rho, m)| act_on_matrix(rho, m))
        .collect::<Result<Vec<_>>>()?;
    MatrixTuple::new(matrices)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{det, int};
    use std::collections::HashSet;

    fn inversions(mapping: &[usize]) -> usize {
        let mut count = 0;
        for a in 0..mapping.len() {
            for b in a + 1..mapping.len() {
                if mapping[a] > mapping[b] {
                    count += 1;
                }
            }
        }
        count
    }

    #[test]
    fn small_orders() {
        let one: Vec<_> = enumerate_signed(1).unwrap().collect();
        assert_eq!(one.len(), 1);
        assert_eq!(one[0].sign(), Sign::Plus);

        let three: Vec<_> = enumerate_signed(3).unwrap().collect();
        assert_eq!(three.len(), 6);
        assert_eq!(three.iter().map(|p| p.sign().as_i64()).sum::<i64>(), 0);
    }

    #[test]
    fn zero_points_is_an_error() {
        assert_eq!(enumerate_signed(0).unwrap_err(), Error::EmptyShape);
        assert_eq!(Shape::new(vec![]).unwrap_err(), Error::EmptyShape);
        assert_eq!(Shape::new(vec![2, 0]).unwrap_err(), Error::EmptyShape);
    }

    #[test]
    fn parity_matches_inversions_n4() {
        let perms: Vec<_> = enumerate_signed(4).unwrap().collect();
        assert_eq!(perms.len(), 24);
        for p in &perms {
            assert_eq!(p.sign().is_odd(), inversions(p.mapping()) % 2 == 1, "{p:?}");
        }
    }

    #[test]
    fn consecutive_perms_differ_by_adjacent_swap() {
        let perms: Vec<_> = enumerate_signed(5).unwrap().collect();
        for w in perms.windows(2) {
            let diff: Vec<usize> = (0..5)
                .filter(|&j| w[0].mapping()[j] != w[1].mapping()[j])
                .collect();
            assert_eq!(diff.len(), 2);
            assert_eq!(diff[1], diff[0] + 1);
        }
    }

    #[test]
    fn all_distinct_up_to_7() {
        for n in 1..=7 {
            let set: HashSet<Vec<usize>> = enumerate_signed(n)
                .unwrap()
                .map(|p| p.mapping().to_vec())
                .collect();
            assert_eq!(set.len() as u64, factorial(n).unwrap());
        }
    }

    #[test]
    fn rank_unrank_agree_with_stream() {
        for n in 1..=6 {
            for (r, p) in enumerate_signed(n).unwrap().enumerate() {
                assert_eq!(plain_changes_rank(&p), r as u64);
                assert_eq!(plain_changes_unrank(n, r as u64).unwrap(), p);
            }
        }
        assert!(plain_changes_unrank(3, 6).is_err());
    }

    #[test]
    fn range_streams_resume_mid_order() {
        let all: Vec<_> = enumerate_signed(5).unwrap().collect();
        let tail: Vec<_> = PlainChanges::range(5, 37, 50).unwrap().collect();
        assert_eq!(tail, all[37..87]);
        assert!(PlainChanges::range(5, 100, 21).is_err());
        assert_eq!(PlainChanges::range(3, 6, 0).unwrap().count(), 0);
    }

    #[test]
    fn product_small_shapes() {
        let ones: Vec<_> = enumerate_product(&Shape::new(vec![1, 1, 1]).unwrap())
            .unwrap()
            .collect();
        assert_eq!(ones.len(), 1);
        assert_eq!(ones[0].sign(), Sign::Plus);

        let signs: Vec<i64> = enumerate_product(&Shape::new(vec![2, 2]).unwrap())
            .unwrap()
            .map(|t| t.sign().as_i64())
            .collect();
        assert_eq!(signs, vec![1, -1, -1, 1]);
    }

    #[test]
    fn product_2_3_matches_direct_enumeration() {
        let shape = Shape::new(vec![2, 3]).unwrap();
        let streamed: Vec<_> = enumerate_product(&shape).unwrap().collect();
        assert_eq!(streamed.len(), 12);

        // oracle: nested loops over inversion-counted permutations
        let mut expected = HashSet::new();
        for a in [[0, 1], [1, 0]] {
            for b in [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
                let parity = (inversions(&a) + inversions(&b)) % 2;
                expected.insert((a.to_vec(), b.to_vec(), parity));
            }
        }
        let got: HashSet<_> = streamed
            .iter()
            .map(|t| {
                let parity = usize::from(t.sign().is_odd());
                (t.parts()[0].mapping().to_vec(), t.parts()[1].mapping().to_vec(), parity)
            })
            .collect();
        assert_eq!(got, expected);
        assert_eq!(streamed.iter().filter(|t| t.sign() == Sign::Plus).count(), 6);
    }

    #[test]
    fn product_ranges_concatenate() {
        let shape = Shape::new(vec![3, 2, 3]).unwrap();
        let all: Vec<_> = enumerate_product(&shape).unwrap().collect();
        let mut pieces = Vec::new();
        for start in (0..72).step_by(7) {
            let len = 7.min(72 - start);
            pieces.extend(ProductStream::range(&shape, start, len).unwrap());
        }
        assert_eq!(pieces, all);
    }

    #[test]
    fn from_mapping_validates() {
        assert!(SignedPerm::from_mapping(vec![0, 0]).is_err());
        assert!(SignedPerm::from_mapping(vec![0, 2]).is_err());
        assert_eq!(SignedPerm::from_mapping(vec![1, 2, 0]).unwrap().sign(), Sign::Plus);
        assert_eq!(SignedPerm::from_mapping(vec![1, 0, 2]).unwrap().sign(), Sign::Minus);
    }

    fn sample_tuple() -> MatrixTuple {
        MatrixTuple::new(vec![
            Matrix::from_i64_rows(&[vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 10]]).unwrap(),
            Matrix::from_i64_rows(&[vec![2, -1], vec![3, 5]]).unwrap(),
        ])
        .unwrap()
    }

    #[test]
    fn identity_action_is_trivial() {
        let a = sample_tuple();
        let e = SignedPermTuple::identity(a.shape());
        assert_eq!(act(&e, &a).unwrap(), a);
    }

    #[test]
    fn transposition_swaps_columns_of_one_factor() {
        let a = sample_tuple();
        let sigma = SignedPermTuple::new(vec![
            SignedPerm::transposition(3, 0, 2),
            SignedPerm::identity(2),
        ]);
        let b = act(&sigma, &a).unwrap();
        assert_eq!(b.matrices()[0].column(0), a.matrices()[0].column(2));
        assert_eq!(b.matrices()[0].column(2), a.matrices()[0].column(0));
        assert_eq!(b.matrices()[0].column(1), a.matrices()[0].column(1));
        assert_eq!(b.matrices()[1], a.matrices()[1]);
    }

    #[test]
    fn action_rule_on_entries() {
        let a = sample_tuple();
        let rho = SignedPerm::from_mapping(vec![1, 2, 0]).unwrap();
        let moved = act_on_matrix(&rho, &a.matrices()[0]).unwrap();
        let inv = rho.inverse();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(moved.get(i, j), a.matrices()[0].get(i, inv.apply(j)));
            }
        }
    }

    #[test]
    fn left_action_law_on_3_2() {
        let a = sample_tuple();
        let shape = a.shape().clone();
        let elements: Vec<_> = enumerate_product(&shape).unwrap().collect();
        for s in &elements {
            for t in &elements {
                let lhs = act(s, &act(t, &a).unwrap()).unwrap();
                let rhs = act(&s.compose(t).unwrap(), &a).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn act_flips_determinant_by_sign() {
        let a = sample_tuple();
        for sigma in enumerate_product(a.shape()).unwrap() {
            let b = act(&sigma, &a).unwrap();
            for (i, part) in sigma.parts().iter().enumerate() {
                let expected = part.sign().apply(det(&a.matrices()[i]).unwrap());
                assert_eq!(det(&b.matrices()[i]).unwrap(), expected);
            }
        }
        assert_eq!(det(&a.matrices()[0]).unwrap(), int(-3));
    }

    #[test]
    fn act_rejects_shape_mismatch() {
        let a = sample_tuple();
        let wrong = SignedPermTuple::identity(&Shape::new(vec![2, 2]).unwrap());
        assert!(matches!(act(&wrong, &a), Err(Error::Dimension(_))));
    }
}
