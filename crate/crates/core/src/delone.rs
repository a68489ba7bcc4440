//! Empty-sphere machinery: exact circumspheres with respect to a form,
//! exact enumeration of lattice points inside an ellipsoid, and Delone
//! certificates.
//!
//! Everything here is decided over exact rationals. Per-level integer
//! ranges in the enumerator come from integer-square-root bounds on the
//! level's quadratic inequality, and every reported point is confirmed by
//! a full exact evaluation of `Q[v - c]`, so no boundary case can be
//! misclassified.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{ceil_center_minus_sqrt, floor_center_plus_sqrt, Int, Rat};
use crate::lattice::{QuadraticForm, VertexSet};
use crate::matrix::{LinearSolution, Mat};

/// Abort threshold for [`enumerate_in_ellipsoid`]; oversized radii fail
/// with [`Error::EnumerationCap`] instead of exhausting memory.
pub const DEFAULT_ENUMERATION_CAP: usize = 1_000_000;

/// A sphere in the metric of a quadratic form: rational center and
/// positive rational squared radius.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sphere {
    pub center: Vec<Rat>,
    pub radius_sq: Rat,
}

/// Outcome of a Delone certification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// The sphere is empty and touches exactly the queried points.
    Delone,
    /// `witness` is a lattice point with `Q[v - c] < r²`, or an on-sphere
    /// point outside the queried set.
    NotDelone { witness: Vec<Int> },
    /// Reserved for degenerate inputs surfaced by certificate loaders;
    /// the certifier itself reports degeneracy as [`Error::Degenerate`].
    Degenerate,
}

/// A self-contained, independently re-checkable proof (or refutation) of
/// the Delone property: re-evaluating `Q[v - c]` for every listed point
/// reproduces its stated relation to `r²` exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeloneCertificate {
    pub sphere: Sphere,
    pub on_sphere: Vec<Vec<Int>>,
    pub verdict: Verdict,
}

impl DeloneCertificate {
    pub fn is_delone(&self) -> bool {
        matches!(self.verdict, Verdict::Delone)
    }

    pub fn witness(&self) -> Option<&[Int]> {
        match &self.verdict {
            Verdict::NotDelone { witness } => Some(witness),
            _ => None,
        }
    }
}

/// The unique sphere through `points` in the metric of `q`.
///
/// Solves the linear system `(v_i - v_0)^T * gram * c = (Q[v_i] - Q[v_0]) / 2`.
/// For more than `d + 1` points the overdetermined system must be exactly
/// consistent, otherwise [`Error::NotCospherical`] is returned;
/// [`Error::Degenerate`] signals that the points do not affinely span.
pub fn circumsphere(points: &VertexSet, q: &QuadraticForm) -> Result<Sphere> {
    let d = q.dim();
    if points.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: points.dim(),
        });
    }
    let pts = points.points();
    if pts.len() < d + 1 {
        return Err(Error::Degenerate);
    }
    let origin = vec![Rat::zero(); d];
    let base = &pts[0];
    let base_norm = q.distance_sq(base, &origin);
    let mut rows = Vec::with_capacity(pts.len() - 1);
    let mut rhs = Vec::with_capacity(pts.len() - 1);
    for v in &pts[1..] {
        let diff: Vec<Rat> = v.iter().zip(base).map(|(a, b)| Rat::from(a - b)).collect();
        let row: Vec<Rat> = (0..d)
            .map(|j| {
                let mut acc = Rat::zero();
                for (k, dk) in diff.iter().enumerate() {
                    acc += dk * q.gram().at(k, j);
                }
                acc
            })
            .collect();
        let norm = q.distance_sq(v, &origin);
        rows.push(row);
        rhs.push((norm - &base_norm) / Rat::from(Int::from(2)));
    }
    let system = Mat::from_rows(rows).expect("rows share the form dimension");
    match system.solve_rectangular(&rhs) {
        LinearSolution::Unique(center) => {
            let radius_sq = q.distance_sq(base, &center);
            debug_assert!(radius_sq.is_positive());
            Ok(Sphere { center, radius_sq })
        }
        LinearSolution::RankDeficient => Err(Error::Degenerate),
        LinearSolution::Inconsistent => Err(Error::NotCospherical),
    }
}

/// All points of `Z^d` with `Q[v - center] <= radius_sq`, sorted
/// lexicographically, with the default reporting cap.
pub fn enumerate_in_ellipsoid(
    q: &QuadraticForm,
    center: &[Rat],
    radius_sq: &Rat,
) -> Result<Vec<Vec<Int>>> {
    enumerate_in_ellipsoid_capped(q, center, radius_sq, DEFAULT_ENUMERATION_CAP)
}

/// See [`enumerate_in_ellipsoid`]; aborts with [`Error::EnumerationCap`]
/// once more than `cap` points would be reported.
pub fn enumerate_in_ellipsoid_capped(
    q: &QuadraticForm,
    center: &[Rat],
    radius_sq: &Rat,
    cap: usize,
) -> Result<Vec<Vec<Int>>> {
    let d = q.dim();
    if center.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: center.len(),
        });
    }
    if radius_sq.is_negative() {
        return Ok(Vec::new());
    }
    let (l, diag) = q.gram().ldl()?;
    let mut walker = Walker {
        q,
        l,
        diag,
        center,
        radius_sq,
        cap,
        out: Vec::new(),
        coords: vec![Int::zero(); d],
        diffs: vec![Rat::zero(); d],
    };
    walker.descend(d - 1, radius_sq.clone())?;
    let mut out = walker.out;
    out.sort_unstable();
    Ok(out)
}

/// Depth-first coordinate recursion over the exact LDL factorization
/// `Q = L * diag(D) * L^T`: with `z = x - c` and `y_i = z_i + Σ_{j>i}
/// L[j][i] z_j`, the form splits as `Q[z] = Σ d_i y_i²`, so coordinates
/// are fixed from the last level downward and each level solves
/// `d_i y_i² <= remaining` for an exact integer range.
struct Walker<'a> {
    q: &'a QuadraticForm,
    l: Mat,
    diag: Vec<Rat>,
    center: &'a [Rat],
    radius_sq: &'a Rat,
    cap: usize,
    out: Vec<Vec<Int>>,
    coords: Vec<Int>,
    diffs: Vec<Rat>,
}

impl Walker<'_> {
    fn descend(&mut self, level: usize, remaining: Rat) -> Result<()> {
        let dim = self.coords.len();
        let mut shift = Rat::zero();
        for j in level + 1..dim {
            shift += self.l.at(j, level) * &self.diffs[j];
        }
        // x_level ranges over [m - sqrt(t), m + sqrt(t)]
        let m = &self.center[level] - &shift;
        let t = &remaining / &self.diag[level];
        let lo = ceil_center_minus_sqrt(&m, &t);
        let hi = floor_center_plus_sqrt(&m, &t);
        let mut x = lo;
        while x <= hi {
            let z = Rat::from(x.clone()) - &self.center[level];
            let y = &z + &shift;
            let spent = &self.diag[level] * &y * &y;
            if spent <= remaining {
                self.coords[level] = x.clone();
                if level == 0 {
                    self.confirm()?;
                } else {
                    self.diffs[level] = z;
                    self.descend(level - 1, &remaining - spent)?;
                }
            }
            x += 1;
        }
        Ok(())
    }

    /// Final gate: a full exact evaluation of `Q[v - center]`, independent
    /// of the incremental level sums.
    fn confirm(&mut self) -> Result<()> {
        let dist = self.q.distance_sq(&self.coords, self.center);
        if &dist <= self.radius_sq {
            if self.out.len() == self.cap {
                return Err(Error::EnumerationCap { cap: self.cap });
            }
            self.out.push(self.coords.clone());
        }
        Ok(())
    }
}

/// Certifies whether `points` is exactly the vertex set of a Delone
/// polytope of `Z^d` under `q`: computes the circumsphere, enumerates all
/// lattice points with `Q[v - c] <= r²`, and compares.
pub fn certify_delone(points: &VertexSet, q: &QuadraticForm) -> Result<DeloneCertificate> {
    certify_delone_capped(points, q, DEFAULT_ENUMERATION_CAP)
}

pub fn certify_delone_capped(
    points: &VertexSet,
    q: &QuadraticForm,
    cap: usize,
) -> Result<DeloneCertificate> {
    let sphere = circumsphere(points, q)?;
    let enumerated = enumerate_in_ellipsoid_capped(q, &sphere.center, &sphere.radius_sq, cap)?;
    let queried: std::collections::BTreeSet<&Vec<Int>> = points.points().iter().collect();
    let extra = enumerated.iter().find(|v| !queried.contains(v));
    let on_sphere: Vec<Vec<Int>> = enumerated
        .iter()
        .filter(|v| q.distance_sq(v, &sphere.center) == sphere.radius_sq)
        .cloned()
        .collect();
    let verdict = match extra {
        // enumerated is sorted, so the witness is the lexicographically
        // smallest offending point.
        Some(witness) => Verdict::NotDelone {
            witness: witness.clone(),
        },
        None => Verdict::Delone,
    };
    debug_assert!(
        !matches!(verdict, Verdict::Delone) || on_sphere.len() == queried.len(),
        "a Delone verdict must put every queried vertex on the sphere"
    );
    Ok(DeloneCertificate {
        sphere,
        on_sphere,
        verdict,
    })
}
