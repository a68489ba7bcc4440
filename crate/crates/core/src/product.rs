//! Products of Delone simplices: staircase triangulation, explicit
//! rational perturbation of the block form, and re-certification.
//!
//! The orthogonal product of two Delone simplices is a Delone polytope of
//! the product lattice. A rank-one coupling block `-ε a b^T` (with `a`, `b`
//! pinned so that `a^T(v_i - v_0) = i` and `b^T(w_j - w_0) = j`) makes the
//! induced lifting on product vertices carry a bilinear term proportional
//! to `-i·j`, which selects the monotone-path staircase containing both
//! `(v_0, w_0)` and `(v_{d1}, w_{d2})`. Instead of relying on that theory,
//! the pipeline halves `ε` until every (sampled) staircase simplex is
//! certified Delone by exact enumeration.

use num_traits::Signed;
use rayon::prelude::*;

use crate::delone::{certify_delone_capped, DeloneCertificate, DEFAULT_ENUMERATION_CAP};
use crate::error::{Error, Result};
use crate::exact::{rat, Int, Rat};
use crate::lattice::{LatticeSimplex, QuadraticForm, VertexSet};
use crate::matrix::Mat;

/// One step of a monotone lattice path.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Step {
    Right,
    Up,
}

/// A monotone lattice path from `(0, 0)` to `(d1, d2)`: a word over
/// `{R, U}` with `d1` R's and `d2` U's. Its `d1 + d2 + 1` grid points
/// index the vertices of one staircase simplex of the product.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct StaircasePath {
    steps: Vec<Step>,
}

impl StaircasePath {
    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn word(&self) -> String {
        self.steps
            .iter()
            .map(|s| match s {
                Step::Right => 'R',
                Step::Up => 'U',
            })
            .collect()
    }

    /// The visited grid points `(i, j)`, starting at `(0, 0)`.
    pub fn grid_points(&self) -> Vec<(usize, usize)> {
        let mut points = Vec::with_capacity(self.steps.len() + 1);
        let (mut i, mut j) = (0, 0);
        points.push((i, j));
        for step in &self.steps {
            match step {
                Step::Right => i += 1,
                Step::Up => j += 1,
            }
            points.push((i, j));
        }
        points
    }

    /// The product simplex with vertices `(v_i, w_j)` along the path.
    pub fn materialize(
        &self,
        left: &LatticeSimplex,
        right: &LatticeSimplex,
    ) -> Result<LatticeSimplex> {
        let vertices = self
            .grid_points()
            .into_iter()
            .map(|(i, j)| {
                let mut v = left.vertices()[i].clone();
                v.extend_from_slice(&right.vertices()[j]);
                v
            })
            .collect();
        LatticeSimplex::new(vertices)
    }
}

/// All `binomial(d1 + d2, d1)` monotone paths in lexicographic order
/// (`R < U`).
pub fn staircase_triangulation(d1: usize, d2: usize) -> Vec<StaircasePath> {
    assert!(d1 >= 1 && d2 >= 1, "factor dimensions must be positive");
    let mut out = Vec::new();
    let mut word = Vec::with_capacity(d1 + d2);
    fn emit(word: &mut Vec<Step>, r_left: usize, u_left: usize, out: &mut Vec<StaircasePath>) {
        if r_left == 0 && u_left == 0 {
            out.push(StaircasePath {
                steps: word.clone(),
            });
            return;
        }
        if r_left > 0 {
            word.push(Step::Right);
            emit(word, r_left - 1, u_left, out);
            word.pop();
        }
        if u_left > 0 {
            word.push(Step::Up);
            emit(word, r_left, u_left - 1, out);
            word.pop();
        }
    }
    emit(&mut word, d1, d2, &mut out);
    out
}

/// The block form `[[Q1, -ε a b^T], [-ε b a^T, Q2]]` with the vertex-index
/// vectors `a`, `b`, validated positive definite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerturbedForm {
    pub base: QuadraticForm,
    pub epsilon: Rat,
    pub a: Vec<Rat>,
    pub b: Vec<Rat>,
    pub form: QuadraticForm,
}

/// Index-gradient vector: the unique `a` with `a^T (v_i - v_0) = i`.
fn index_gradient(simplex: &LatticeSimplex) -> Result<Vec<Rat>> {
    let d = simplex.dim();
    let base = &simplex.vertices()[0];
    let rows: Vec<Vec<Rat>> = simplex.vertices()[1..]
        .iter()
        .map(|v| v.iter().zip(base).map(|(x, y)| Rat::from(x - y)).collect())
        .collect();
    let rhs: Vec<Rat> = (1..=d).map(|i| Rat::from(Int::from(i))).collect();
    Mat::from_rows(rows)?.solve(&rhs).map_err(|_| Error::Degenerate)
}

/// Assembles and validates the perturbed block form for a given `ε > 0`.
/// Fails with [`Error::NotPositiveDefinite`] when `ε` is too large; the
/// caller is expected to shrink it.
pub fn perturbation_form(
    q1: &QuadraticForm,
    simplex1: &LatticeSimplex,
    q2: &QuadraticForm,
    simplex2: &LatticeSimplex,
    epsilon: &Rat,
) -> Result<PerturbedForm> {
    if simplex1.dim() != q1.dim() {
        return Err(Error::DimensionMismatch {
            expected: q1.dim(),
            got: simplex1.dim(),
        });
    }
    if simplex2.dim() != q2.dim() {
        return Err(Error::DimensionMismatch {
            expected: q2.dim(),
            got: simplex2.dim(),
        });
    }
    if !epsilon.is_positive() {
        return Err(Error::Invalid("epsilon must be positive".into()));
    }
    let a = index_gradient(simplex1)?;
    let b = index_gradient(simplex2)?;
    let base = q1.direct_sum(q2);
    let (d1, d2) = (q1.dim(), q2.dim());
    let mut gram = base.gram().clone();
    for i in 0..d1 {
        for j in 0..d2 {
            let coupling = -epsilon * &a[i] * &b[j];
            gram.set(i, d1 + j, coupling.clone());
            gram.set(d1 + j, i, coupling);
        }
    }
    let form = QuadraticForm::new(gram)?;
    Ok(PerturbedForm {
        base,
        epsilon: epsilon.clone(),
        a,
        b,
        form,
    })
}

/// One input of the product pipeline: a simplex Delone (or certifiable
/// Delone) for `Z^d` under its form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductFactor {
    pub form: QuadraticForm,
    pub simplex: LatticeSimplex,
}

impl ProductFactor {
    /// The segment `{0, 1}` in `Z` with the unit form.
    pub fn unit_interval() -> Self {
        ProductFactor {
            form: QuadraticForm::identity(1),
            simplex: LatticeSimplex::from_i64(&[&[0], &[1]]).expect("segment is nondegenerate"),
        }
    }

    pub fn from_instance(instance: &crate::hadamard::HadamardInstance) -> Self {
        ProductFactor {
            form: instance.form.clone(),
            simplex: instance.simplex.clone(),
        }
    }

    pub fn dim(&self) -> usize {
        self.form.dim()
    }
}

#[derive(Clone, Debug)]
pub struct ProductOptions {
    /// Certify every staircase simplex regardless of count.
    pub exhaustive: bool,
    /// First epsilon of the halving schedule.
    pub start_epsilon: Rat,
    /// Halvings tried before giving up.
    pub max_halvings: u32,
    /// Per-certification enumeration cap.
    pub enumeration_cap: usize,
    /// Sample size when not exhaustive (both extreme paths always join).
    pub sample_target: usize,
    /// Counts up to this bound are certified exhaustively.
    pub exhaustive_threshold: usize,
}

impl Default for ProductOptions {
    fn default() -> Self {
        ProductOptions {
            exhaustive: false,
            start_epsilon: rat(1, 2),
            max_halvings: 60,
            enumeration_cap: DEFAULT_ENUMERATION_CAP,
            sample_target: 32,
            exhaustive_threshold: 64,
        }
    }
}

/// Certification attached to one staircase simplex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplexCertification {
    /// Index into the lexicographic path list.
    pub path_index: usize,
    pub path: StaircasePath,
    pub certificate: DeloneCertificate,
}

/// Full pipeline output; deterministic for fixed inputs and options.
#[derive(Clone, Debug)]
pub struct ProductReport {
    pub left_dim: usize,
    pub right_dim: usize,
    /// Shared relative volume of every staircase simplex: `rv1 * rv2`.
    pub relvol_each: Int,
    /// `binomial(d1 + d2, d1)` staircase paths, lexicographic.
    pub paths: Vec<StaircasePath>,
    /// Certificate of the unperturbed product polytope under `Q1 ⊕ Q2`.
    pub product_certificate: DeloneCertificate,
    pub perturbed: PerturbedForm,
    /// Chosen epsilon: the first of the halving schedule under which every
    /// selected simplex certifies.
    pub epsilon: Rat,
    pub certifications: Vec<SimplexCertification>,
    /// Whether `certifications` covers all paths.
    pub exhaustive: bool,
}

impl ProductReport {
    pub fn count(&self) -> usize {
        self.paths.len()
    }
}

/// Deterministic sample: evenly spaced path indices including both
/// extremes (the all-R-first and all-U-first staircases).
fn sample_indices(count: usize, target: usize) -> Vec<usize> {
    if target <= 1 || count <= 1 {
        return vec![0];
    }
    let mut picks: Vec<usize> = (0..target)
        .map(|k| k * (count - 1) / (target - 1))
        .collect();
    picks.dedup();
    picks
}

/// Builds the orthogonal product of two certified factors, certifies the
/// product polytope under the block form, triangulates by staircases,
/// checks every simplex volume equals `rv1 * rv2`, and searches the
/// epsilon halving schedule until every selected staircase simplex is
/// certified Delone under the perturbed form.
pub fn product_pipeline(
    left: &ProductFactor,
    right: &ProductFactor,
    options: &ProductOptions,
) -> Result<ProductReport> {
    let (d1, d2) = (left.dim(), right.dim());
    if left.simplex.dim() != d1 {
        return Err(Error::DimensionMismatch {
            expected: d1,
            got: left.simplex.dim(),
        });
    }
    if right.simplex.dim() != d2 {
        return Err(Error::DimensionMismatch {
            expected: d2,
            got: right.simplex.dim(),
        });
    }
    let relvol_each = left.simplex.relative_volume() * right.simplex.relative_volume();

    // Product polytope under the unperturbed block form. This also
    // re-validates both inputs: any extra lattice point near a factor
    // sphere shows up as a witness here.
    let base_form = left.form.direct_sum(&right.form);
    let mut product_points = Vec::with_capacity((d1 + 1) * (d2 + 1));
    for v in left.simplex.vertices() {
        for w in right.simplex.vertices() {
            let mut p = v.clone();
            p.extend_from_slice(w);
            product_points.push(p);
        }
    }
    let product_certificate = certify_delone_capped(
        &VertexSet::new(product_points)?,
        &base_form,
        options.enumeration_cap,
    )?;
    if let Some(witness) = product_certificate.witness() {
        return Err(Error::NotDelone {
            witness: format_point(witness),
        });
    }

    // Staircase triangulation; every simplex must have volume rv1 * rv2
    // (total unimodularity of the product polytope).
    let paths = staircase_triangulation(d1, d2);
    let simplices: Vec<LatticeSimplex> = paths
        .par_iter()
        .map(|p| p.materialize(&left.simplex, &right.simplex))
        .collect::<Result<Vec<_>>>()?;
    for (idx, s) in simplices.iter().enumerate() {
        if s.relative_volume() != &relvol_each {
            return Err(Error::Invalid(format!(
                "staircase simplex {idx} has volume {}, expected {relvol_each}",
                s.relative_volume()
            )));
        }
    }

    let exhaustive = options.exhaustive || paths.len() <= options.exhaustive_threshold;
    let selected: Vec<usize> = if exhaustive {
        (0..paths.len()).collect()
    } else {
        sample_indices(paths.len(), options.sample_target)
    };

    let mut epsilon = options.start_epsilon.clone();
    for _ in 0..=options.max_halvings {
        match try_epsilon(left, right, &simplices, &selected, &epsilon, options) {
            Some((perturbed, certificates)) => {
                let certifications = selected
                    .iter()
                    .zip(certificates)
                    .map(|(&path_index, certificate)| SimplexCertification {
                        path_index,
                        path: paths[path_index].clone(),
                        certificate,
                    })
                    .collect();
                return Ok(ProductReport {
                    left_dim: d1,
                    right_dim: d2,
                    relvol_each,
                    paths,
                    product_certificate,
                    epsilon: perturbed.epsilon.clone(),
                    perturbed,
                    certifications,
                    exhaustive,
                });
            }
            None => epsilon /= Rat::from(Int::from(2)),
        }
    }
    Err(Error::EpsilonExhausted {
        halvings: options.max_halvings,
    })
}

/// One schedule round: `None` means "shrink epsilon and retry" (not
/// positive definite, a failed certification, or an enumeration abort at
/// an oversized sphere).
fn try_epsilon(
    left: &ProductFactor,
    right: &ProductFactor,
    simplices: &[LatticeSimplex],
    selected: &[usize],
    epsilon: &Rat,
    options: &ProductOptions,
) -> Option<(PerturbedForm, Vec<DeloneCertificate>)> {
    let perturbed = match perturbation_form(
        &left.form,
        &left.simplex,
        &right.form,
        &right.simplex,
        epsilon,
    ) {
        Ok(p) => p,
        Err(_) => return None,
    };
    let certificates: Option<Vec<DeloneCertificate>> = selected
        .par_iter()
        .map(|&idx| {
            let cert = certify_delone_capped(
                &simplices[idx].to_vertex_set(),
                &perturbed.form,
                options.enumeration_cap,
            )
            .ok()?;
            cert.is_delone().then_some(cert)
        })
        .collect();
    certificates.map(|certs| (perturbed, certs))
}

fn format_point(p: &[Int]) -> String {
    let coords: Vec<String> = p.iter().map(Int::to_string).collect();
    format!("({})", coords.join(", "))
}
