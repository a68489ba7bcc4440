//! JSON wire formats.
//!
//! Every integer and rational travels as a string in the `p/q` encoding
//! (`p` when the denominator is 1); the ratio columns of the bound table
//! are the single documented exception. Struct fields are declared in
//! alphabetical order and point lists are kept sorted where the producing
//! operation sorts them, so emitted documents are canonical and byte
//! stable. Loading enforces the type invariants (symmetry, positive
//! definiteness, full rank) before any computation sees the value.

use serde::{Deserialize, Serialize};

use crate::bounds::{BoundTableRow, CUBE_UPPER_GROWTH};
use crate::delone::{DeloneCertificate, Sphere, Verdict};
use crate::error::{Error, Result};
use crate::exact::{format_rat, parse_int, parse_rat, Int, Rat};
use crate::hadamard::HadamardInstance;
use crate::lattice::{EmbeddedLattice, LatticeSimplex, QuadraticForm, VertexSet};
use crate::matrix::{IntMat, Mat};
use crate::product::{ProductFactor, ProductReport};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeJson {
    pub ambient_dim: usize,
    pub basis: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormJson {
    pub dim: usize,
    pub gram: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplexJson {
    pub vertices: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexSetJson {
    pub points: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub center: Vec<String>,
    pub on_sphere: Vec<Vec<String>>,
    pub radius_sq: String,
    pub verdict: String,
    pub witness: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceJson {
    pub certificate: Option<CertificateJson>,
    pub expected_relvol: String,
    pub form: FormJson,
    pub lattice: LatticeJson,
    pub simplex: SimplexJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorJson {
    pub form: FormJson,
    pub simplex: SimplexJson,
}

/// Per-simplex certificate summary in the product report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplexCertJson {
    pub on_sphere_count: usize,
    pub path: String,
    pub verdict: String,
    pub witness: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductReportJson {
    pub base_form: FormJson,
    pub certificates: Vec<SimplexCertJson>,
    pub count: usize,
    pub epsilon: String,
    pub exhaustive: bool,
    pub left: FactorJson,
    pub perturbed_form: FormJson,
    pub product_certificate: CertificateJson,
    pub relvol_each: String,
    pub right: FactorJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundRowJson {
    pub d: usize,
    pub dt_lower: String,
    pub lower_ratio: Option<String>,
    pub mv_lower: String,
    pub mv_lower_source: String,
    pub mv_upper: String,
    pub t_lower: Option<String>,
    pub upper_ratio: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundTableJson {
    pub cube_upper_growth: String,
    pub rows: Vec<BoundRowJson>,
}

/// Canonical serialization: pretty-printed with a trailing newline.
pub fn to_canonical_string<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serialization cannot fail");
    s.push('\n');
    s
}

pub fn from_str<'a, T: Deserialize<'a>>(s: &'a str) -> Result<T> {
    serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
}

fn int_rows(rows: &[Vec<String>]) -> Result<Vec<Vec<Int>>> {
    rows.iter()
        .map(|r| r.iter().map(|s| parse_int(s)).collect())
        .collect()
}

fn int_rows_to_json(rows: &[Vec<Int>]) -> Vec<Vec<String>> {
    rows.iter()
        .map(|r| r.iter().map(Int::to_string).collect())
        .collect()
}

pub fn lattice_to_json(lattice: &EmbeddedLattice) -> LatticeJson {
    LatticeJson {
        ambient_dim: lattice.ambient_dim(),
        basis: int_rows_to_json(&lattice.basis().row_vecs()),
    }
}

/// Loads a lattice, canonicalizing the given generators to the HNF basis.
pub fn lattice_from_json(json: &LatticeJson) -> Result<EmbeddedLattice> {
    let rows = int_rows(&json.basis)?;
    if rows.iter().any(|r| r.len() != json.ambient_dim) {
        return Err(Error::Invalid(
            "basis row length differs from ambient_dim".into(),
        ));
    }
    EmbeddedLattice::from_generators(&IntMat::from_rows(rows)?)
}

pub fn form_to_json(form: &QuadraticForm) -> FormJson {
    let g = form.gram();
    FormJson {
        dim: form.dim(),
        gram: (0..g.rows())
            .map(|i| g.row(i).iter().map(format_rat).collect())
            .collect(),
    }
}

pub fn form_from_json(json: &FormJson) -> Result<QuadraticForm> {
    let rows: Vec<Vec<Rat>> = json
        .gram
        .iter()
        .map(|r| r.iter().map(|s| parse_rat(s)).collect())
        .collect::<Result<_>>()?;
    if rows.len() != json.dim || rows.iter().any(|r| r.len() != json.dim) {
        return Err(Error::Invalid("gram shape differs from dim".into()));
    }
    QuadraticForm::new(Mat::from_rows(rows)?)
}

pub fn simplex_to_json(simplex: &LatticeSimplex) -> SimplexJson {
    SimplexJson {
        vertices: int_rows_to_json(simplex.vertices()),
    }
}

pub fn simplex_from_json(json: &SimplexJson) -> Result<LatticeSimplex> {
    LatticeSimplex::new(int_rows(&json.vertices)?)
}

pub fn vertex_set_to_json(points: &VertexSet) -> VertexSetJson {
    VertexSetJson {
        points: int_rows_to_json(points.points()),
    }
}

pub fn vertex_set_from_json(json: &VertexSetJson) -> Result<VertexSet> {
    VertexSet::new(int_rows(&json.points)?)
}

fn verdict_str(verdict: &Verdict) -> &'static str {
    match verdict {
        Verdict::Delone => "delone",
        Verdict::NotDelone { .. } => "not_delone",
        Verdict::Degenerate => "degenerate",
    }
}

pub fn certificate_to_json(cert: &DeloneCertificate) -> CertificateJson {
    CertificateJson {
        center: cert.sphere.center.iter().map(format_rat).collect(),
        on_sphere: int_rows_to_json(&cert.on_sphere),
        radius_sq: format_rat(&cert.sphere.radius_sq),
        verdict: verdict_str(&cert.verdict).to_string(),
        witness: cert
            .witness()
            .map(|w| w.iter().map(Int::to_string).collect()),
    }
}

pub fn certificate_from_json(json: &CertificateJson) -> Result<DeloneCertificate> {
    let center: Vec<Rat> = json
        .center
        .iter()
        .map(|s| parse_rat(s))
        .collect::<Result<_>>()?;
    let radius_sq = parse_rat(&json.radius_sq)?;
    let on_sphere = int_rows(&json.on_sphere)?;
    let witness = json
        .witness
        .as_ref()
        .map(|w| w.iter().map(|s| parse_int(s)).collect::<Result<Vec<_>>>())
        .transpose()?;
    let verdict = match (json.verdict.as_str(), witness) {
        ("delone", None) => Verdict::Delone,
        ("delone", Some(_)) => {
            return Err(Error::Invalid("delone verdict carries a witness".into()))
        }
        ("not_delone", Some(witness)) => Verdict::NotDelone { witness },
        ("not_delone", None) => {
            return Err(Error::Invalid("not_delone verdict lacks a witness".into()))
        }
        ("degenerate", None) => Verdict::Degenerate,
        ("degenerate", Some(_)) => {
            return Err(Error::Invalid("degenerate verdict carries a witness".into()))
        }
        (other, _) => return Err(Error::Invalid(format!("unknown verdict {other:?}"))),
    };
    Ok(DeloneCertificate {
        sphere: Sphere { center, radius_sq },
        on_sphere,
        verdict,
    })
}

pub fn instance_to_json(
    instance: &HadamardInstance,
    certificate: Option<&DeloneCertificate>,
) -> InstanceJson {
    InstanceJson {
        certificate: certificate.map(certificate_to_json),
        expected_relvol: instance.expected_relvol.to_string(),
        form: form_to_json(&instance.form),
        lattice: lattice_to_json(&instance.lattice),
        simplex: simplex_to_json(&instance.simplex),
    }
}

/// Loads the factor (form + simplex) of an instance document, checking
/// that the stated expected volume matches the simplex. The embedded
/// lattice is validated (full rank) even though only the normalized form
/// participates in downstream computation.
pub fn factor_from_instance_json(json: &InstanceJson) -> Result<ProductFactor> {
    lattice_from_json(&json.lattice)?;
    let form = form_from_json(&json.form)?;
    let simplex = simplex_from_json(&json.simplex)?;
    if simplex.dim() != form.dim() {
        return Err(Error::DimensionMismatch {
            expected: form.dim(),
            got: simplex.dim(),
        });
    }
    let expected = parse_int(&json.expected_relvol)?;
    if simplex.relative_volume() != &expected {
        return Err(Error::Invalid(format!(
            "instance states relative volume {expected} but the simplex has {}",
            simplex.relative_volume()
        )));
    }
    Ok(ProductFactor { form, simplex })
}

pub fn report_to_json(
    report: &ProductReport,
    left: &ProductFactor,
    right: &ProductFactor,
) -> ProductReportJson {
    ProductReportJson {
        base_form: form_to_json(&report.perturbed.base),
        certificates: report
            .certifications
            .iter()
            .map(|c| SimplexCertJson {
                on_sphere_count: c.certificate.on_sphere.len(),
                path: c.path.word(),
                verdict: verdict_str(&c.certificate.verdict).to_string(),
                witness: c
                    .certificate
                    .witness()
                    .map(|w| w.iter().map(Int::to_string).collect()),
            })
            .collect(),
        count: report.count(),
        epsilon: format_rat(&report.epsilon),
        exhaustive: report.exhaustive,
        left: FactorJson {
            form: form_to_json(&left.form),
            simplex: simplex_to_json(&left.simplex),
        },
        perturbed_form: form_to_json(&report.perturbed.form),
        product_certificate: certificate_to_json(&report.product_certificate),
        relvol_each: report.relvol_each.to_string(),
        right: FactorJson {
            form: form_to_json(&right.form),
            simplex: simplex_to_json(&right.simplex),
        },
    }
}

pub fn bound_table_to_json(rows: &[BoundTableRow]) -> BoundTableJson {
    BoundTableJson {
        cube_upper_growth: CUBE_UPPER_GROWTH.to_string(),
        rows: rows
            .iter()
            .map(|r| BoundRowJson {
                d: r.d,
                dt_lower: r.dt_lower.to_string(),
                lower_ratio: r.lower_ratio.clone(),
                mv_lower: r.mv_lower.to_string(),
                mv_lower_source: r.mv_lower_source.to_string(),
                mv_upper: r.mv_upper.to_string(),
                t_lower: r.t_lower.as_ref().map(Int::to_string),
                upper_ratio: r.upper_ratio.clone(),
            })
            .collect(),
    }
}
