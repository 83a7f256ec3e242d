//! Exact scalars, dense matrices and dense polynomials over the rationals.
//!
//! Everything downstream is an exact identity check, so nothing in this
//! module ever rounds. Determinants go through fraction-free Bareiss
//! elimination on an integer matrix obtained by clearing column denominators.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Exact rational scalar. Always kept in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Parses the scalar text format: an optional sign, a decimal integer and
/// optionally `/` followed by a positive decimal integer (`"-3/7"`, `"4"`).
pub fn parse_rational(text: &str) -> Result<Rational> {
    let bad = || Error::ParseRational(text.to_string());
    let (negative, body) = match text.as_bytes().first() {
        Some(b'-') => (true, &text[1..]),
        Some(b'+') => (false, &text[1..]),
        _ => (false, text),
    };
    let (num, den) = match body.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (body, None),
    };
    let digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
    if !digits(num) {
        return Err(bad());
    }
    let mut numer: BigInt = num.parse().map_err(|_| bad())?;
    if negative {
        numer = -numer;
    }
    let denom = match den {
        None => BigInt::one(),
        Some(d) if digits(d) => d.parse::<BigInt>().map_err(|_| bad())?,
        Some(_) => return Err(bad()),
    };
    if denom.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(numer, denom))
}

/// Canonical text form, the inverse of [`parse_rational`].
pub fn format_rational(value: &Rational) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Dense row-major matrix of rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rational>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        Ok(Matrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            entries: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        let n_rows = rows.len();
        Matrix::new(n_rows, cols, rows.into_iter().flatten().collect())
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Result<Self> {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| int(v)).collect())
                .collect(),
        )
    }

    /// Builds a square-or-not matrix whose `c`-th column is `columns[c]`.
    pub fn from_columns(columns: &[Vec<Rational>]) -> Result<Self> {
        let rows = columns.first().map_or(0, Vec::len);
        if columns.iter().any(|c| c.len() != rows) {
            return Err(Error::Dimension("columns of unequal length".into()));
        }
        let cols = columns.len();
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for col in columns {
                entries.push(col[r].clone());
            }
        }
        Matrix::new(rows, cols, entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> &Rational {
        &self.entries[row * self.cols + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Rational) {
        self.entries[row * self.cols + col] = value;
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn column(&self, col: usize) -> Vec<Rational> {
        (0..self.rows).map(|r| self.get(r, col).clone()).collect()
    }

    pub fn row(&self, row: usize) -> &[Rational] {
        &self.entries[row * self.cols..(row + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc = Rational::zero();
                for k in 0..self.cols {
                    acc += self.get(r, k) * other.get(k, c);
                }
                out.set(r, c, acc);
            }
        }
        Ok(out)
    }

    pub fn scale_column(&mut self, col: usize, factor: &Rational) {
        for r in 0..self.rows {
            let v = self.get(r, col) * factor;
            self.set(r, col, v);
        }
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for r in 0..self.rows {
            if r > 0 {
                f.write_str(", ")?;
            }
            f.write_str("[")?;
            for c in 0..self.cols {
                if c > 0 {
                    f.write_str(", ")?;
                }
                f.write_str(&format_rational(self.get(r, c)))?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

/// Exact determinant of a square matrix.
///
/// Each column is scaled by the lcm of its denominators so the elimination
/// runs on integers; the accumulated scale is divided back out at the end.
pub fn det(m: &Matrix) -> Result<Rational> {
    if !m.is_square() {
        return Err(Error::Dimension(format!(
            "determinant of a non-square {}x{} matrix",
            m.rows, m.cols
        )));
    }
    let n = m.rows;
    if n == 0 {
        return Ok(Rational::one());
    }

    let mut grid = vec![BigInt::zero(); n * n];
    let mut scale = BigInt::one();
    for c in 0..n {
        let lcm = (0..n).fold(BigInt::one(), |acc, r| acc.lcm(m.get(r, c).denom()));
        for r in 0..n {
            let v = m.get(r, c);
            grid[r * n + c] = if lcm.is_one() {
                v.numer().clone()
            } else {
                v.numer() * (&lcm / v.denom())
            };
        }
        scale *= lcm;
    }
    Ok(Rational::new(bareiss(&mut grid, n), scale))
}

/// Fraction-free elimination; every division is exact by Sylvester's identity.
fn bareiss(a: &mut [BigInt], n: usize) -> BigInt {
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k * n + k].is_zero() {
            let Some(pivot) = (k + 1..n).find(|&r| !a[r * n + k].is_zero()) else {
                return BigInt::zero();
            };
            for c in k..n {
                a.swap(k * n + c, pivot * n + c);
            }
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i * n + j] * &a[k * n + k] - &a[i * n + k] * &a[k * n + j];
                a[i * n + j] = if prev.is_one() { v } else { v / &prev };
            }
        }
        prev = a[k * n + k].clone();
    }
    let d = a[n * n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// Dense polynomial in one variable `t`, embedded in the space of
/// polynomials of degree `< ambient`. Index `d` holds the coefficient of
/// `t^d`; the vector length is exactly the ambient dimension.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    coeffs: Vec<Rational>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<Rational>) -> Self {
        Polynomial { coeffs }
    }

    pub fn zero(ambient: usize) -> Self {
        Polynomial {
            coeffs: vec![Rational::zero(); ambient],
        }
    }

    pub fn one(ambient: usize) -> Self {
        Polynomial::monomial(0, ambient)
    }

    /// `t^degree` in a space of dimension `ambient` (`degree < ambient`).
    pub fn monomial(degree: usize, ambient: usize) -> Self {
        let mut p = Polynomial::zero(ambient);
        p.coeffs[degree] = Rational::one();
        p
    }

    /// Degree-one polynomial `constant + linear * t` in a two-dimensional space.
    pub fn linear(constant: Rational, linear: Rational) -> Self {
        Polynomial {
            coeffs: vec![constant, linear],
        }
    }

    pub fn ambient(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Highest index with a nonzero coefficient; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    /// Re-embeds into a space of another dimension.
    pub fn embed(&self, ambient: usize) -> Result<Polynomial> {
        if let Some(d) = self.degree() {
            if d >= ambient {
                return Err(Error::Overflow { degree: d, ambient });
            }
        }
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(ambient, Rational::zero());
        Ok(Polynomial { coeffs })
    }

    pub fn scale(&self, factor: &Rational) -> Polynomial {
        Polynomial {
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial> {
        if self.ambient() != other.ambient() {
            return Err(Error::Dimension(format!(
                "adding polynomials from spaces of dimension {} and {}",
                self.ambient(),
                other.ambient()
            )));
        }
        Ok(Polynomial {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(d, c)| match d {
                0 => format_rational(c),
                1 => format!("{}*t", format_rational(c)),
                _ => format!("{}*t^{d}", format_rational(c)),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0 (in V_{})", self.ambient())
        } else {
            write!(f, "{} (in V_{})", terms.join(" + "), self.ambient())
        }
    }
}

/// Product of two polynomials, embedded in a space of dimension `ambient`.
pub fn poly_mul(a: &Polynomial, b: &Polynomial, ambient: usize) -> Result<Polynomial> {
    let (Some(da), Some(db)) = (a.degree(), b.degree()) else {
        return Ok(Polynomial::zero(ambient));
    };
    if da + db >= ambient {
        return Err(Error::Overflow {
            degree: da + db,
            ambient,
        });
    }
    let mut out = Polynomial::zero(ambient);
    for (i, x) in a.coeffs[..=da].iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.coeffs[..=db].iter().enumerate() {
            if !y.is_zero() {
                out.coeffs[i + j] += x * y;
            }
        }
    }
    Ok(out)
}

/// Determinant of the `n x n` matrix whose column `i` is the coefficient
/// vector of `ps[i]` (row `d` holds the coefficient of `t^d`).
pub fn poly_det(ps: &[Polynomial]) -> Result<Rational> {
    let n = ps.len();
    if let Some(p) = ps.iter().find(|p| p.ambient() != n) {
        return Err(Error::Dimension(format!(
            "{n} polynomials must live in a space of dimension {n}, found one of dimension {}",
            p.ambient()
        )));
    }
    let columns: Vec<Vec<Rational>> = ps.iter().map(|p| p.coeffs.clone()).collect();
    det(&Matrix::from_columns(&columns)?)
}
