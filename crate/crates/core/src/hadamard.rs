//! Hadamard matrices and the Construction-A simplex instance: Sylvester
//! doubling, column normalization, 0/1 reduction, simplex-code linearity,
//! the mod-2 preimage lattice, and the packaged Delone simplex whose
//! relative volume is `(d+1)^{(d+3)/2} / 4^d` at `d = 2^n - 1`.

use num_traits::Zero;

use crate::delone::{certify_delone_capped, DeloneCertificate, DEFAULT_ENUMERATION_CAP};
use crate::error::{Error, Result};
use crate::exact::Int;
use crate::lattice::{EmbeddedLattice, LatticeSimplex, QuadraticForm};
use crate::matrix::IntMat;

/// Largest supported Sylvester exponent (order 4096); matrix construction
/// stays cheap up to here while instance generation is capped lower.
pub const MAX_SYLVESTER_EXPONENT: u32 = 12;

/// A square matrix with entries in `{+1, -1}`, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignMatrix {
    order: usize,
    entries: Vec<i8>,
}

impl SignMatrix {
    pub fn new(order: usize, entries: Vec<i8>) -> Result<Self> {
        if entries.len() != order * order {
            return Err(Error::NotSquare {
                rows: entries.len() / order.max(1),
                cols: order,
            });
        }
        if entries.iter().any(|&e| e != 1 && e != -1) {
            return Err(Error::NotSignMatrix);
        }
        Ok(SignMatrix { order, entries })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn at(&self, i: usize, j: usize) -> i8 {
        self.entries[i * self.order + j]
    }

    pub fn column(&self, j: usize) -> Vec<i8> {
        (0..self.order).map(|i| self.at(i, j)).collect()
    }

    pub fn to_int_mat(&self) -> IntMat {
        IntMat::new(
            self.order,
            self.order,
            self.entries.iter().map(|&e| Int::from(e)).collect(),
        )
    }
}

/// The doubling construction `H_1 = (1)`, `H_{2m} = [[H, H], [-H, H]]`;
/// order `2^n`, Hadamard, first row all `+1`.
pub fn sylvester(n: u32) -> SignMatrix {
    assert!(
        n <= MAX_SYLVESTER_EXPONENT,
        "sylvester exponent above practical cap"
    );
    let mut entries = vec![1i8];
    let mut m = 1usize;
    for _ in 0..n {
        let order = 2 * m;
        let mut next = vec![0i8; order * order];
        for i in 0..m {
            for j in 0..m {
                let e = entries[i * m + j];
                next[i * order + j] = e;
                next[i * order + (j + m)] = e;
                next[(i + m) * order + j] = -e;
                next[(i + m) * order + (j + m)] = e;
            }
        }
        entries = next;
        m = order;
    }
    SignMatrix { order: m, entries }
}

/// `true` iff `H^T H = order * I`, i.e. distinct columns are orthogonal
/// (diagonal entries are automatic for sign matrices).
pub fn is_hadamard(h: &SignMatrix) -> bool {
    let n = h.order;
    for j in 0..n {
        for k in j + 1..n {
            let mut dot = 0i64;
            for i in 0..n {
                dot += (h.at(i, j) as i64) * (h.at(i, k) as i64);
            }
            if dot != 0 {
                return false;
            }
        }
    }
    true
}

/// Negates every column whose first entry is `-1`, producing a Hadamard
/// matrix with an all-ones first row. Column order is preserved.
pub fn normalize_columns(h: &SignMatrix) -> Result<SignMatrix> {
    if !is_hadamard(h) {
        return Err(Error::NotHadamard);
    }
    let n = h.order;
    let mut entries = h.entries.clone();
    for j in 0..n {
        if entries[j] == -1 {
            for i in 0..n {
                entries[i * n + j] = -entries[i * n + j];
            }
        }
    }
    Ok(SignMatrix { order: n, entries })
}

/// The `(order-1) x order` 0/1 matrix obtained from a normalized Hadamard
/// matrix by deleting the first row and mapping `+1 -> 0`, `-1 -> 1`.
/// Its columns are the vertices of the Hadamard simplex in the unit cube.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryVertexMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<u8>,
}

impl BinaryVertexMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<u8>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Invalid("entry count must be rows*cols".into()));
        }
        if entries.iter().any(|&e| e > 1) {
            return Err(Error::Invalid("entries must be 0 or 1".into()));
        }
        Ok(BinaryVertexMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> u8 {
        self.entries[i * self.cols + j]
    }

    /// Column `j` as a 0/1 vector of length `rows`.
    pub fn column(&self, j: usize) -> Vec<u8> {
        (0..self.rows).map(|i| self.at(i, j)).collect()
    }

    pub fn column_as_point(&self, j: usize) -> Vec<Int> {
        (0..self.rows).map(|i| Int::from(self.at(i, j))).collect()
    }
}

pub fn reduce_to_binary(h: &SignMatrix) -> Result<BinaryVertexMatrix> {
    let n = h.order;
    if (0..n).any(|j| h.at(0, j) != 1) {
        return Err(Error::NotNormalized);
    }
    let mut entries = Vec::with_capacity((n - 1) * n);
    for i in 1..n {
        for j in 0..n {
            entries.push(if h.at(i, j) == 1 { 0 } else { 1 });
        }
    }
    Ok(BinaryVertexMatrix {
        rows: n - 1,
        cols: n,
        entries,
    })
}

/// Bit-packed vector over F2 for the linearity check.
type BitVec = Vec<u64>;

fn to_bits(col: &[u8]) -> BitVec {
    let words = col.len().div_ceil(64);
    let mut bits = vec![0u64; words];
    for (i, &b) in col.iter().enumerate() {
        if b != 0 {
            bits[i / 64] |= 1 << (i % 64);
        }
    }
    bits
}

fn leading_bit(v: &BitVec) -> Option<usize> {
    for (w, &word) in v.iter().enumerate() {
        if word != 0 {
            return Some(w * 64 + word.trailing_zeros() as usize);
        }
    }
    None
}

/// Echelon basis of the F2 span of the columns, keyed by leading bit.
fn f2_row_basis(columns: &[Vec<u8>]) -> Vec<(usize, BitVec)> {
    let mut basis: Vec<(usize, BitVec)> = Vec::new();
    for col in columns {
        let mut v = to_bits(col);
        while let Some(lead) = leading_bit(&v) {
            match basis.binary_search_by_key(&lead, |(l, _)| *l) {
                Ok(pos) => {
                    let other = basis[pos].1.clone();
                    for (x, y) in v.iter_mut().zip(&other) {
                        *x ^= y;
                    }
                }
                Err(pos) => {
                    basis.insert(pos, (lead, v));
                    break;
                }
            }
        }
    }
    basis
}

/// The Construction-A lattice of the binary code spanned by the columns:
/// all integer vectors whose mod-2 reduction is a codeword. Returns the
/// canonical HNF basis; the determinant is `2^(d - n)` for a code of
/// dimension `n` in length `d`.
///
/// Fails with [`Error::CodeNotLinear`] when the column set is not closed
/// under mod-2 addition (general Hadamard inputs are accepted by the sign
/// matrix operations, but only linear column sets define a lattice here).
pub fn construction_a(hb: &BinaryVertexMatrix) -> Result<EmbeddedLattice> {
    let d = hb.rows();
    let columns: std::collections::BTreeSet<Vec<u8>> =
        (0..hb.cols()).map(|j| hb.column(j)).collect();
    let column_list: Vec<Vec<u8>> = columns.iter().cloned().collect();
    let basis = f2_row_basis(&column_list);
    let rank = basis.len();
    if rank > 63 || columns.len() != (1usize << rank) {
        return Err(Error::CodeNotLinear);
    }
    let mut generators = Vec::with_capacity(rank + d);
    for (_, bits) in &basis {
        generators.push(
            (0..d)
                .map(|i| Int::from((bits[i / 64] >> (i % 64)) & 1))
                .collect::<Vec<Int>>(),
        );
    }
    for i in 0..d {
        let mut row = vec![Int::zero(); d];
        row[i] = Int::from(2);
        generators.push(row);
    }
    EmbeddedLattice::from_generators(&IntMat::from_rows(generators)?)
}

/// `(d+1)^{(d+3)/2} / 4^d` as an exact integer; `d` must be odd and the
/// division must be exact (both hold at every `d = 2^n - 1`, `n >= 1`).
pub fn hadamard_relative_volume(d: usize) -> Result<Int> {
    if d % 2 == 0 {
        return Err(Error::Invalid(format!(
            "relative-volume formula needs odd dimension, got {d}"
        )));
    }
    let numer = num_traits::pow(Int::from(d + 1), (d + 3) / 2);
    let denom = num_traits::pow(Int::from(4), d);
    if (&numer % &denom) != Int::zero() {
        return Err(Error::Invalid(format!(
            "(d+1)^((d+3)/2) is not divisible by 4^d at d = {d}"
        )));
    }
    Ok(numer / denom)
}

/// The packaged Hadamard simplex: the Construction-A lattice of the
/// Sylvester code as `Z^d` with its Gram matrix, the `d + 1` reduced
/// columns in lattice coordinates (column order preserved), and the
/// exact expected relative volume.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HadamardInstance {
    pub exponent: u32,
    pub lattice: EmbeddedLattice,
    pub form: QuadraticForm,
    pub simplex: LatticeSimplex,
    pub expected_relvol: Int,
}

impl HadamardInstance {
    /// Runs the empty-sphere certification of the simplex under the
    /// instance form.
    pub fn certify(&self) -> Result<DeloneCertificate> {
        self.certify_capped(DEFAULT_ENUMERATION_CAP)
    }

    pub fn certify_capped(&self, cap: usize) -> Result<DeloneCertificate> {
        certify_delone_capped(&self.simplex.to_vertex_set(), &self.form, cap)
    }

    pub fn dim(&self) -> usize {
        self.simplex.dim()
    }
}

pub fn hadamard_simplex_instance(n: u32) -> Result<HadamardInstance> {
    if n == 0 {
        return Err(Error::Degenerate);
    }
    if n > MAX_SYLVESTER_EXPONENT {
        return Err(Error::Invalid(format!(
            "sylvester exponent {n} above the practical cap {MAX_SYLVESTER_EXPONENT}"
        )));
    }
    let d = (1usize << n) - 1;
    let reduced = reduce_to_binary(&sylvester(n))?;
    let lattice = construction_a(&reduced)?;
    let form = lattice.gram(None)?;
    let vertices = (0..reduced.cols())
        .map(|j| lattice.to_lattice_coords(&reduced.column_as_point(j)))
        .collect::<Result<Vec<_>>>()?;
    let simplex = LatticeSimplex::new(vertices)?;
    let expected_relvol = hadamard_relative_volume(d)?;
    if simplex.relative_volume() != &expected_relvol {
        return Err(Error::Invalid(format!(
            "constructed simplex volume {} differs from formula value {expected_relvol}",
            simplex.relative_volume()
        )));
    }
    Ok(HadamardInstance {
        exponent: n,
        lattice,
        form,
        simplex,
        expected_relvol,
    })
}
