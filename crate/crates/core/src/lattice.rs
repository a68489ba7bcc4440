//! Lattices, positive definite quadratic forms, simplices, and relative
//! volume.
//!
//! The canonical representation throughout the crate is "`Z^d` with a Gram
//! matrix": a lattice embedded in some `Z^m` exists only at construction
//! boundaries and is converted via [`EmbeddedLattice::gram`] and
//! [`EmbeddedLattice::to_lattice_coords`] before any certification runs.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{Int, Rat};
use crate::matrix::{IntMat, LinearSolution, Mat};

/// A positive definite quadratic form `Q[x] = x^T * gram * x`.
///
/// Construction validates symmetry and positive definiteness exactly, so a
/// value of this type is always a usable metric.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticForm {
    gram: Mat,
}

impl QuadraticForm {
    pub fn new(gram: Mat) -> Result<Self> {
        if !gram.is_positive_definite()? {
            return Err(Error::NotPositiveDefinite);
        }
        Ok(QuadraticForm { gram })
    }

    /// The standard inner product on `Z^d`.
    pub fn identity(dim: usize) -> Self {
        QuadraticForm {
            gram: Mat::identity(dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &Mat {
        &self.gram
    }

    /// `Q[x]` for a rational vector.
    pub fn eval(&self, x: &[Rat]) -> Rat {
        assert_eq!(x.len(), self.dim());
        let n = self.dim();
        let mut acc = Rat::zero();
        for i in 0..n {
            let mut row = Rat::zero();
            for j in 0..n {
                row += self.gram.at(i, j) * &x[j];
            }
            acc += &x[i] * row;
        }
        acc
    }

    /// `Q[v - c]` for an integer point `v` and rational center `c`.
    pub fn distance_sq(&self, v: &[Int], c: &[Rat]) -> Rat {
        assert_eq!(v.len(), self.dim());
        assert_eq!(c.len(), self.dim());
        let diff: Vec<Rat> = v
            .iter()
            .zip(c)
            .map(|(vi, ci)| Rat::from(vi.clone()) - ci)
            .collect();
        self.eval(&diff)
    }

    /// Block-diagonal sum `Q1 ⊕ Q2`.
    pub fn direct_sum(&self, other: &QuadraticForm) -> QuadraticForm {
        let (d1, d2) = (self.dim(), other.dim());
        let mut gram = Mat::zeros(d1 + d2, d1 + d2);
        for i in 0..d1 {
            for j in 0..d1 {
                gram.set(i, j, self.gram.at(i, j).clone());
            }
        }
        for i in 0..d2 {
            for j in 0..d2 {
                gram.set(d1 + i, d1 + j, other.gram.at(i, j).clone());
            }
        }
        QuadraticForm { gram }
    }
}

/// A full-rank sublattice of `Z^m`, given by a square integer basis whose
/// rows are the basis vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbeddedLattice {
    basis: IntMat,
}

impl EmbeddedLattice {
    /// Builds the lattice spanned by `generators` (any number of rows) and
    /// stores its canonical HNF basis.
    pub fn from_generators(generators: &IntMat) -> Result<Self> {
        Ok(EmbeddedLattice {
            basis: generators.hnf_rows()?,
        })
    }

    /// Wraps a caller-specified square basis without renormalizing it.
    /// Coordinates produced by [`Self::to_lattice_coords`] are relative to
    /// exactly this basis.
    pub fn from_basis(basis: IntMat) -> Result<Self> {
        if !basis.is_square() {
            return Err(Error::NotSquare {
                rows: basis.rows(),
                cols: basis.cols(),
            });
        }
        if basis.det()?.is_zero() {
            return Err(Error::RankDeficient);
        }
        Ok(EmbeddedLattice { basis })
    }

    pub fn standard(dim: usize) -> Self {
        EmbeddedLattice {
            basis: IntMat::identity(dim),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &IntMat {
        &self.basis
    }

    /// Index of the lattice in `Z^m`; positive.
    pub fn det(&self) -> Int {
        if self.basis.is_upper_triangular() {
            return (0..self.rank())
                .map(|i| self.basis.at(i, i))
                .fold(Int::one(), |acc, p| acc * p)
                .abs();
        }
        self.basis.det().expect("basis is square").abs()
    }

    /// Gram matrix of the basis under `ambient_form` (standard inner
    /// product when `None`): the lattice as `Z^d` with a form.
    pub fn gram(&self, ambient_form: Option<&QuadraticForm>) -> Result<QuadraticForm> {
        gram_of_basis(&self.basis, ambient_form)
    }

    /// Unique integer coordinates `x` with `x * basis = point`.
    pub fn to_lattice_coords(&self, point: &[Int]) -> Result<Vec<Int>> {
        if point.len() != self.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim(),
                got: point.len(),
            });
        }
        if self.basis.is_upper_triangular() {
            return self.triangular_coords(point);
        }
        // x * B = p  <=>  B^T x^T = p^T
        let bt = self.basis.transpose().to_rat();
        let rhs: Vec<Rat> = point.iter().map(|v| Rat::from(v.clone())).collect();
        let x = bt.solve(&rhs).map_err(|_| Error::RankDeficient)?;
        let one = Int::one();
        x.into_iter()
            .map(|c| {
                if c.denom() == &one {
                    Ok(c.numer().clone())
                } else {
                    Err(Error::NotInLattice)
                }
            })
            .collect()
    }

    /// Integer forward substitution for triangular bases (the HNF case):
    /// `p_k = sum_{i <= k} x_i * B[i][k]` determines `x_k` left to right,
    /// and any inexact division proves the point is outside the lattice.
    fn triangular_coords(&self, point: &[Int]) -> Result<Vec<Int>> {
        let d = self.rank();
        let mut x: Vec<Int> = Vec::with_capacity(d);
        for k in 0..d {
            let mut acc = point[k].clone();
            for i in 0..k {
                acc -= &x[i] * self.basis.at(i, k);
            }
            let (q, r) = num_integer::Integer::div_rem(&acc, self.basis.at(k, k));
            if !r.is_zero() {
                return Err(Error::NotInLattice);
            }
            x.push(q);
        }
        Ok(x)
    }

    /// Block-diagonal direct sum of the two bases.
    pub fn direct_sum(&self, other: &EmbeddedLattice) -> EmbeddedLattice {
        let (d1, d2) = (self.ambient_dim(), other.ambient_dim());
        let mut basis = IntMat::zeros(d1 + d2, d1 + d2);
        for i in 0..d1 {
            for j in 0..d1 {
                basis.set(i, j, self.basis.at(i, j).clone());
            }
        }
        for i in 0..d2 {
            for j in 0..d2 {
                basis.set(d1 + i, d1 + j, other.basis.at(i, j).clone());
            }
        }
        EmbeddedLattice { basis }
    }
}

/// Gram matrix `B * G_ambient * B^T` of a full-rank basis, expressing the
/// spanned sublattice as `Z^d` with a form.
///
/// Positive definiteness of the result is equivalent to `B` having full
/// row rank (the ambient form is always definite), so the rank is what
/// gets checked.
pub fn gram_of_basis(
    basis: &IntMat,
    ambient_form: Option<&QuadraticForm>,
) -> Result<QuadraticForm> {
    if basis.rows() > basis.cols() {
        return Err(Error::RankDeficient);
    }
    let gram = match ambient_form {
        Some(q) => {
            if q.dim() != basis.cols() {
                return Err(Error::DimensionMismatch {
                    expected: basis.cols(),
                    got: q.dim(),
                });
            }
            let b = basis.to_rat();
            b.mul(q.gram()).mul(&b.transpose())
        }
        None => basis.mul(&basis.transpose()).to_rat(),
    };
    let full_rank = if basis.is_square() {
        if basis.is_upper_triangular() {
            (0..basis.rows()).all(|i| !basis.at(i, i).is_zero())
        } else {
            !basis.det()?.is_zero()
        }
    } else {
        // rectangular bases stay on the validating constructor
        return QuadraticForm::new(gram).map_err(|_| Error::RankDeficient);
    };
    if !full_rank {
        return Err(Error::RankDeficient);
    }
    debug_assert!(gram.is_symmetric());
    Ok(QuadraticForm { gram })
}

/// Direct sum of two (lattice, form) pairs: block-diagonal basis and Gram.
pub fn direct_sum(
    l1: &EmbeddedLattice,
    q1: &QuadraticForm,
    l2: &EmbeddedLattice,
    q2: &QuadraticForm,
) -> Result<(EmbeddedLattice, QuadraticForm)> {
    if l1.rank() != q1.dim() {
        return Err(Error::DimensionMismatch {
            expected: l1.rank(),
            got: q1.dim(),
        });
    }
    if l2.rank() != q2.dim() {
        return Err(Error::DimensionMismatch {
            expected: l2.rank(),
            got: q2.dim(),
        });
    }
    Ok((l1.direct_sum(l2), q1.direct_sum(q2)))
}

/// A nondegenerate lattice simplex: `d + 1` integer vertices in the
/// lattice basis, in caller order (the first vertex is the base vertex).
/// The relative volume is computed once at construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeSimplex {
    vertices: Vec<Vec<Int>>,
    relative_volume: Int,
}

impl LatticeSimplex {
    pub fn new(vertices: Vec<Vec<Int>>) -> Result<Self> {
        let Some(first) = vertices.first() else {
            return Err(Error::Degenerate);
        };
        let d = first.len();
        if vertices.len() != d + 1 {
            return Err(Error::DimensionMismatch {
                expected: d + 1,
                got: vertices.len(),
            });
        }
        if vertices.iter().any(|v| v.len() != d) {
            return Err(Error::Invalid("ragged vertex coordinates".into()));
        }
        let relative_volume = edge_determinant(&vertices)?.abs();
        if relative_volume.is_zero() {
            return Err(Error::Degenerate);
        }
        Ok(LatticeSimplex {
            vertices,
            relative_volume,
        })
    }

    pub fn from_i64(vertices: &[&[i64]]) -> Result<Self> {
        LatticeSimplex::new(
            vertices
                .iter()
                .map(|v| v.iter().map(|&c| Int::from(c)).collect())
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn vertices(&self) -> &[Vec<Int>] {
        &self.vertices
    }

    /// `|det(v_1 - v_0, ..., v_d - v_0)|`: the index in `Z^d` of the
    /// sublattice affinely spanned by the vertices.
    pub fn relative_volume(&self) -> &Int {
        &self.relative_volume
    }

    pub fn to_vertex_set(&self) -> VertexSet {
        VertexSet::new(self.vertices.clone()).expect("simplex vertices form a valid set")
    }
}

fn edge_determinant(vertices: &[Vec<Int>]) -> Result<Int> {
    let base = &vertices[0];
    let rows: Vec<Vec<Int>> = vertices[1..]
        .iter()
        .map(|v| v.iter().zip(base).map(|(a, b)| a - b).collect())
        .collect();
    IntMat::from_rows(rows)?.det()
}

/// Relative volume of a simplex (see [`LatticeSimplex::relative_volume`]).
pub fn relative_volume(simplex: &LatticeSimplex) -> Int {
    simplex.relative_volume().clone()
}

/// A finite set of lattice points that affinely spans its ambient space
/// (checked where it is consumed); used for Delone polytopes with more
/// than `d + 1` vertices, such as products of simplices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexSet {
    points: Vec<Vec<Int>>,
}

impl VertexSet {
    pub fn new(points: Vec<Vec<Int>>) -> Result<Self> {
        let Some(first) = points.first() else {
            return Err(Error::Degenerate);
        };
        let d = first.len();
        if d == 0 {
            return Err(Error::Degenerate);
        }
        if points.iter().any(|p| p.len() != d) {
            return Err(Error::Invalid("ragged point coordinates".into()));
        }
        Ok(VertexSet { points })
    }

    pub fn dim(&self) -> usize {
        self.points[0].len()
    }

    pub fn points(&self) -> &[Vec<Int>] {
        &self.points
    }

    /// Exact check that the points affinely span `R^dim`.
    pub fn affinely_spans(&self) -> bool {
        let d = self.dim();
        if self.points.len() < d + 1 {
            return false;
        }
        let base = &self.points[0];
        let rows: Vec<Vec<Rat>> = self.points[1..]
            .iter()
            .map(|p| p.iter().zip(base).map(|(a, b)| Rat::from(a - b)).collect())
            .collect();
        let m = Mat::from_rows(rows).expect("rectangular by construction");
        // rank == d  <=>  no free unknowns in the homogeneous system
        !matches!(
            m.solve_rectangular(&vec![Rat::zero(); m.rows()]),
            LinearSolution::RankDeficient
        )
    }
}
