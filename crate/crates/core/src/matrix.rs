//! Exact integer and rational matrices.
//!
//! Two dense row-major types: [`IntMat`] for lattice bases and other
//! integer data, [`Mat`] for rational data (Gram matrices, linear
//! systems). Determinants use fraction-free Bareiss elimination so integer
//! inputs produce integer intermediates; rational inputs are cleared to a
//! common denominator first.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{Int, Rat};

/// Dense integer matrix, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMat {
    rows: usize,
    cols: usize,
    data: Vec<Int>,
}

/// Dense rational matrix, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

/// Outcome of solving a (possibly overdetermined) linear system exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LinearSolution {
    /// Full column rank and consistent: the unique solution.
    Unique(Vec<Rat>),
    /// Coefficient matrix has rank below the number of unknowns.
    RankDeficient,
    /// Full column rank but the equations contradict each other.
    Inconsistent,
}

impl IntMat {
    pub fn new(rows: usize, cols: usize, data: Vec<Int>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count must be rows*cols");
        IntMat { rows, cols, data }
    }

    pub fn from_rows(rows_in: Vec<Vec<Int>>) -> Result<Self> {
        let rows = rows_in.len();
        let cols = rows_in.first().map_or(0, Vec::len);
        if rows_in.iter().any(|r| r.len() != cols) {
            return Err(Error::Invalid("ragged rows in matrix".into()));
        }
        Ok(IntMat::new(rows, cols, rows_in.into_iter().flatten().collect()))
    }

    /// Test/build convenience for small constant matrices.
    pub fn from_i64(rows_in: &[&[i64]]) -> Self {
        let rows = rows_in.len();
        let cols = rows_in.first().map_or(0, |r| r.len());
        assert!(rows_in.iter().all(|r| r.len() == cols));
        let data = rows_in
            .iter()
            .flat_map(|r| r.iter().map(|&v| Int::from(v)))
            .collect();
        IntMat::new(rows, cols, data)
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Int::one());
        }
        m
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMat::new(rows, cols, vec![Int::zero(); rows * cols])
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

    pub fn at(&self, i: usize, j: usize) -> &Int {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Int) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Int] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Int>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> IntMat {
        let mut out = IntMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.at(i, j).clone());
            }
        }
        out
    }

    pub fn mul(&self, other: &IntMat) -> IntMat {
        assert_eq!(self.cols, other.rows, "inner dimensions must agree");
        let mut out = IntMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Int::zero();
                for k in 0..self.cols {
                    acc += self.at(i, k) * other.at(k, j);
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn to_rat(&self) -> Mat {
        Mat::new(
            self.rows,
            self.cols,
            self.data.iter().map(|v| Rat::from(v.clone())).collect(),
        )
    }

    pub fn is_upper_triangular(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        for i in 0..self.rows {
            for j in 0..i {
                if !self.at(i, j).is_zero() {
                    return false;
                }
            }
        }
        true
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Result<Int> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Int::one());
        }
        let mut a = self.data.clone();
        let mut sign_neg = false;
        let mut prev = Int::one();
        for k in 0..n - 1 {
            if a[k * n + k].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a[i * n + k].is_zero()) else {
                    return Ok(Int::zero());
                };
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
                sign_neg = !sign_neg;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let t = &a[k * n + k] * &a[i * n + j] - &a[i * n + k] * &a[k * n + j];
                    // Bareiss division is exact for integer input.
                    a[i * n + j] = t / &prev;
                }
                a[i * n + k] = Int::zero();
            }
            prev = a[k * n + k].clone();
        }
        let d = a[(n - 1) * n + (n - 1)].clone();
        Ok(if sign_neg { -d } else { d })
    }

    /// Canonical row Hermite Normal Form of the lattice generated by the
    /// rows: square upper triangular, positive pivots, entries above each
    /// pivot reduced into `[0, pivot)`. The rows must span a full-rank
    /// sublattice of `Z^cols`.
    pub fn hnf_rows(&self) -> Result<IntMat> {
        let m = self.cols;
        if m == 0 || self.rows == 0 {
            return Err(Error::RankDeficient);
        }
        let mut rows = self.row_vecs();
        let n = rows.len();
        let mut fixed = 0;
        for col in 0..m {
            if fixed == n {
                return Err(Error::RankDeficient);
            }
            loop {
                let mut best: Option<usize> = None;
                for r in fixed..n {
                    if !rows[r][col].is_zero()
                        && best.is_none_or(|b| rows[r][col].abs() < rows[b][col].abs())
                    {
                        best = Some(r);
                    }
                }
                let Some(p) = best else {
                    return Err(Error::RankDeficient);
                };
                rows.swap(fixed, p);
                let pivot = rows[fixed][col].clone();
                let mut clean = true;
                for r in fixed + 1..n {
                    if rows[r][col].is_zero() {
                        continue;
                    }
                    let q = rows[r][col].div_floor(&pivot);
                    if !q.is_zero() {
                        for j in col..m {
                            let t = &rows[r][j] - &q * &rows[fixed][j];
                            rows[r][j] = t;
                        }
                    }
                    if !rows[r][col].is_zero() {
                        clean = false;
                    }
                }
                if clean {
                    break;
                }
            }
            if rows[fixed][col].is_negative() {
                for j in col..m {
                    let t = -rows[fixed][j].clone();
                    rows[fixed][j] = t;
                }
            }
            fixed += 1;
        }
        // Reduce entries above each pivot into [0, pivot).
        for col in 0..m {
            let pivot = rows[col][col].clone();
            for r in 0..col {
                let q = rows[r][col].div_floor(&pivot);
                if !q.is_zero() {
                    for j in col..m {
                        let t = &rows[r][j] - &q * &rows[col][j];
                        rows[r][j] = t;
                    }
                }
            }
        }
        rows.truncate(m);
        IntMat::from_rows(rows)
    }
}

impl Mat {
    pub fn new(rows: usize, cols: usize, data: Vec<Rat>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count must be rows*cols");
        Mat { rows, cols, data }
    }

    pub fn from_rows(rows_in: Vec<Vec<Rat>>) -> Result<Self> {
        let rows = rows_in.len();
        let cols = rows_in.first().map_or(0, Vec::len);
        if rows_in.iter().any(|r| r.len() != cols) {
            return Err(Error::Invalid("ragged rows in matrix".into()));
        }
        Ok(Mat::new(rows, cols, rows_in.into_iter().flatten().collect()))
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rat::one());
        }
        m
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat::new(rows, cols, vec![Rat::zero(); rows * cols])
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

    pub fn at(&self, i: usize, j: usize) -> &Rat {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rat) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Mat {
        let mut out = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.at(i, j).clone());
            }
        }
        out
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "inner dimensions must agree");
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Rat::zero();
                for k in 0..self.cols {
                    acc += self.at(i, k) * other.at(k, j);
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn is_symmetric(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        for i in 0..self.rows {
            for j in 0..i {
                if self.at(i, j) != self.at(j, i) {
                    return false;
                }
            }
        }
        true
    }

    /// Returns `(M, l)` with `M` integer and `self = M / l`.
    pub fn clear_denominators(&self) -> (IntMat, Int) {
        let mut l = Int::one();
        for v in &self.data {
            l = l.lcm(v.denom());
        }
        let data = self
            .data
            .iter()
            .map(|v| v.numer() * (&l / v.denom()))
            .collect();
        (IntMat::new(self.rows, self.cols, data), l)
    }

    pub fn to_int(&self) -> Option<IntMat> {
        let one = Int::one();
        if self.data.iter().all(|v| v.denom() == &one) {
            Some(IntMat::new(
                self.rows,
                self.cols,
                self.data.iter().map(|v| v.numer().clone()).collect(),
            ))
        } else {
            None
        }
    }

    /// Exact determinant; integer Bareiss after clearing denominators.
    pub fn det(&self) -> Result<Rat> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let (m, l) = self.clear_denominators();
        let d = m.det()?;
        let scale = num_traits::pow::pow(l, self.rows);
        Ok(Rat::new(d, scale))
    }

    /// Unique exact solution of `self * x = b` for square `self`.
    pub fn solve(&self, b: &[Rat]) -> Result<Vec<Rat>> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                got: b.len(),
            });
        }
        match self.solve_rectangular(b) {
            LinearSolution::Unique(x) => Ok(x),
            _ => Err(Error::Singular),
        }
    }

    /// Exact row-echelon solve of a possibly overdetermined system.
    pub fn solve_rectangular(&self, b: &[Rat]) -> LinearSolution {
        assert_eq!(b.len(), self.rows, "rhs length must match row count");
        let (n, d) = (self.rows, self.cols);
        let mut a: Vec<Vec<Rat>> = (0..n)
            .map(|i| {
                let mut r = self.row(i).to_vec();
                r.push(b[i].clone());
                r
            })
            .collect();
        let mut rank = 0;
        for col in 0..d {
            let Some(p) = (rank..n).find(|&r| !a[r][col].is_zero()) else {
                continue;
            };
            a.swap(rank, p);
            let pivot = a[rank][col].clone();
            for r in rank + 1..n {
                if a[r][col].is_zero() {
                    continue;
                }
                let f = &a[r][col] / &pivot;
                for j in col..=d {
                    let t = &a[r][j] - &f * &a[rank][j];
                    a[r][j] = t;
                }
            }
            rank += 1;
            if rank == n {
                break;
            }
        }
        // Rank deficiency takes precedence: for geometric callers it means
        // "no affine span", which subsumes any contradiction in the rhs.
        if rank < d {
            return LinearSolution::RankDeficient;
        }
        for r in rank..n {
            if !a[r][d].is_zero() {
                return LinearSolution::Inconsistent;
            }
        }
        // rank == d: pivots sit on consecutive rows but possibly skipped
        // columns only when rank < d, so here row i has pivot in column i.
        let mut x = vec![Rat::zero(); d];
        for i in (0..d).rev() {
            let mut acc = a[i][d].clone();
            for j in i + 1..d {
                acc -= &a[i][j] * &x[j];
            }
            x[i] = acc / &a[i][i];
        }
        LinearSolution::Unique(x)
    }

    /// Leading-principal-minor test for positive definiteness, computed
    /// exactly with a single fraction-free elimination pass.
    pub fn is_positive_definite(&self) -> Result<bool> {
        if !self.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        let n = self.rows;
        if n == 0 {
            return Ok(true);
        }
        let (m, _) = self.clear_denominators();
        // In swap-free Bareiss elimination the pivot a[k][k] equals the
        // (k+1)-st leading principal minor (of the scaled matrix, which has
        // the same minor signs).
        let mut a = m.data;
        if !a[0].is_positive() {
            return Ok(false);
        }
        let mut prev = Int::one();
        for k in 0..n - 1 {
            for i in k + 1..n {
                for j in k + 1..n {
                    let t = &a[k * n + k] * &a[i * n + j] - &a[i * n + k] * &a[k * n + j];
                    a[i * n + j] = t / &prev;
                }
            }
            prev = a[k * n + k].clone();
            if !a[(k + 1) * n + k + 1].is_positive() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Exact factorization `self = L * diag(D) * L^T` with `L` unit lower
    /// triangular and all `D` entries positive. Errors with
    /// [`Error::NotPositiveDefinite`] when no such factorization exists.
    pub fn ldl(&self) -> Result<(Mat, Vec<Rat>)> {
        if !self.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        let n = self.rows;
        let mut l = Mat::identity(n);
        let mut d = vec![Rat::zero(); n];
        for j in 0..n {
            let mut dj = self.at(j, j).clone();
            for k in 0..j {
                dj -= l.at(j, k) * l.at(j, k) * &d[k];
            }
            if !dj.is_positive() {
                return Err(Error::NotPositiveDefinite);
            }
            for i in j + 1..n {
                let mut v = self.at(i, j).clone();
                for k in 0..j {
                    v -= l.at(i, k) * l.at(j, k) * &d[k];
                }
                l.set(i, j, v / &dj);
            }
            d[j] = dj;
        }
        Ok((l, d))
    }
}

impl std::fmt::Debug for IntMat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "IntMat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(
                f,
                "  {:?}",
                self.row(i).iter().map(Int::to_string).collect::<Vec<_>>()
            )?;
        }
        write!(f, "]")
    }
}

impl std::fmt::Debug for Mat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(
                f,
                "  {:?}",
                self.row(i)
                    .iter()
                    .map(crate::exact::format_rat)
                    .collect::<Vec<_>>()
            )?;
        }
        write!(f, "]")
    }
}
