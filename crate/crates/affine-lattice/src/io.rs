//! File formats: structured text (JSON) for polytopes, complexes, and
//! reports, with rationals written as strings (`"3/4"`, `"-2"`) so files
//! stay hand-editable and exact. Parse errors name the offending field.

use std::path::Path;

use num::BigInt;
use serde::{Deserialize, Serialize};

use crate::arith::{format_rational, parse_rational, AffZMap, QVector, ZMatrix};
use crate::complex::{
    AffineComplex, ComplexMode, Gluing, VerificationReport, VerificationRow,
};
use crate::polytope::RationalPolytope;
use crate::quasipoly::QuasiPolynomial;
use crate::Error;

/// A polytope given by its vertex list, e.g.
/// `{"dim": 2, "vertices": [["0", "0"], ["1", "0"], ["0", "1/2"]]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PolytopeFile {
    pub dim: usize,
    pub vertices: Vec<Vec<String>>,
}

impl PolytopeFile {
    pub fn from_polytope(p: &RationalPolytope) -> Self {
        PolytopeFile {
            dim: p.ambient_dim(),
            vertices: p
                .vertices()
                .iter()
                .map(|v| v.iter().map(format_rational).collect())
                .collect(),
        }
    }

    pub fn to_polytope(&self, dim_cap: usize) -> Result<RationalPolytope, Error> {
        let mut points = Vec::with_capacity(self.vertices.len());
        for (i, row) in self.vertices.iter().enumerate() {
            if row.len() != self.dim {
                return Err(Error::DimensionMismatch {
                    expected: self.dim,
                    got: row.len(),
                }
                .in_field(format!("vertices[{i}]")));
            }
            let mut point = Vec::with_capacity(row.len());
            for (j, entry) in row.iter().enumerate() {
                let r = parse_rational(entry)
                    .map_err(|e| e.in_field(format!("vertices[{i}][{j}]")))?;
                point.push(r);
            }
            points.push(point);
        }
        RationalPolytope::from_points_capped(&points, dim_cap)
    }
}

/// One gluing of a complex file: `region` in the source chart is identified
/// with its image under `x ↦ Ax + b` in the target chart.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GluingFile {
    pub source: usize,
    pub target: usize,
    pub region: Vec<Vec<String>>,
    #[serde(rename = "A")]
    pub linear: Vec<Vec<i64>>,
    pub b: Vec<i64>,
}

/// A glued complex, e.g. a torus:
/// `{"dim": 1, "mode": "facet-glued", "charts": [...], "gluings": [...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComplexFile {
    pub dim: usize,
    pub mode: String,
    pub charts: Vec<Vec<Vec<String>>>,
    pub gluings: Vec<GluingFile>,
}

impl ComplexFile {
    pub fn from_complex(c: &AffineComplex) -> Self {
        let vertex_strings = |p: &RationalPolytope| -> Vec<Vec<String>> {
            p.vertices()
                .iter()
                .map(|v| v.iter().map(format_rational).collect())
                .collect()
        };
        ComplexFile {
            dim: c.ambient_dim(),
            mode: c.mode().as_str().to_string(),
            charts: c.charts().iter().map(vertex_strings).collect(),
            gluings: c
                .gluings()
                .iter()
                .map(|g| GluingFile {
                    source: g.source_chart,
                    target: g.target_chart,
                    region: vertex_strings(&g.source_region),
                    linear: g
                        .map
                        .linear()
                        .rows()
                        .iter()
                        .map(|row| {
                            row.iter()
                                .map(|x| i64::try_from(x).expect("map entry exceeds i64"))
                                .collect()
                        })
                        .collect(),
                    b: g
                        .map
                        .translation()
                        .iter()
                        .map(|x| i64::try_from(x).expect("translation entry exceeds i64"))
                        .collect(),
                })
                .collect(),
        }
    }

    pub fn to_complex(&self, dim_cap: usize) -> Result<AffineComplex, Error> {
        let mode = ComplexMode::parse(&self.mode).map_err(|e| e.in_field("mode"))?;
        let parse_vertices = |rows: &[Vec<String>], field: &str| -> Result<Vec<QVector>, Error> {
            let mut points = Vec::with_capacity(rows.len());
            for (i, row) in rows.iter().enumerate() {
                let mut point = Vec::with_capacity(row.len());
                for (j, entry) in row.iter().enumerate() {
                    point.push(
                        parse_rational(entry)
                            .map_err(|e| e.in_field(format!("{field}[{i}][{j}]")))?,
                    );
                }
                points.push(point);
            }
            Ok(points)
        };
        let mut charts = Vec::with_capacity(self.charts.len());
        for (i, rows) in self.charts.iter().enumerate() {
            let points = parse_vertices(rows, &format!("charts[{i}]"))?;
            charts.push(
                RationalPolytope::from_points_capped(&points, dim_cap)
                    .map_err(|e| e.in_field(format!("charts[{i}]")))?,
            );
        }
        let mut gluings = Vec::with_capacity(self.gluings.len());
        for (i, g) in self.gluings.iter().enumerate() {
            let points = parse_vertices(&g.region, &format!("gluings[{i}].region"))?;
            let region = RationalPolytope::from_points_capped(&points, dim_cap)
                .map_err(|e| e.in_field(format!("gluings[{i}].region")))?;
            let linear = ZMatrix::new(
                g.linear
                    .iter()
                    .map(|row| row.iter().map(|&x| BigInt::from(x)).collect())
                    .collect(),
            )
            .map_err(|e| e.in_field(format!("gluings[{i}].A")))?;
            let map = AffZMap::new(linear, g.b.iter().map(|&x| BigInt::from(x)).collect())
                .map_err(|e| e.in_field(format!("gluings[{i}]")))?;
            gluings.push(Gluing {
                source_chart: g.source,
                source_region: region,
                target_chart: g.target,
                map,
            });
        }
        AffineComplex::new(self.dim, charts, gluings, mode)
    }
}

/// Structured form of a quasi-polynomial: `coefficients[k][r]` is the
/// coefficient of `m^k` on the residue class `r`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QuasiPolynomialFile {
    pub degree: usize,
    pub period: u64,
    pub coefficients: Vec<Vec<String>>,
}

impl QuasiPolynomialFile {
    pub fn from_quasipoly(q: &QuasiPolynomial) -> Self {
        QuasiPolynomialFile {
            degree: q.degree_bound(),
            period: q.period(),
            coefficients: (0..=q.degree_bound())
                .map(|k| {
                    (0..q.period())
                        .map(|r| format_rational(q.coefficient(k, r)))
                        .collect()
                })
                .collect(),
        }
    }

    pub fn to_quasipoly(&self) -> Result<QuasiPolynomial, Error> {
        if self.period == 0 || self.coefficients.len() != self.degree + 1 {
            return Err(Error::InvalidInput(
                "coefficients must have degree + 1 rows and period >= 1".into(),
            ));
        }
        let mut coeffs = Vec::with_capacity(self.coefficients.len());
        for (k, row) in self.coefficients.iter().enumerate() {
            if row.len() != self.period as usize {
                return Err(Error::InvalidInput(format!(
                    "coefficients[{k}] must have one entry per residue class"
                )));
            }
            let mut parsed = Vec::with_capacity(row.len());
            for (r, entry) in row.iter().enumerate() {
                parsed.push(
                    parse_rational(entry)
                        .map_err(|e| e.in_field(format!("coefficients[{k}][{r}]")))?,
                );
            }
            coeffs.push(parsed);
        }
        Ok(QuasiPolynomial::new(self.degree, self.period, coeffs))
    }
}

/// Structured form of a verification report row.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerificationRowFile {
    pub m: u64,
    pub count: u64,
    pub expected: String,
    pub pass: bool,
}

/// Structured form of a verification report.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerificationFile {
    pub dim: usize,
    pub volume: String,
    pub fitted: QuasiPolynomialFile,
    pub residual_is_zero: bool,
    pub rows: Vec<VerificationRowFile>,
    pub passed: bool,
}

impl VerificationFile {
    pub fn from_report(r: &VerificationReport) -> Self {
        VerificationFile {
            dim: r.dim,
            volume: format_rational(&r.volume),
            fitted: QuasiPolynomialFile::from_quasipoly(&r.fitted),
            residual_is_zero: r.residual_is_zero,
            rows: r
                .rows
                .iter()
                .map(|row| VerificationRowFile {
                    m: row.m,
                    count: row.count,
                    expected: format_rational(&row.expected),
                    pass: row.pass,
                })
                .collect(),
            passed: r.passed,
        }
    }

    pub fn to_report(&self) -> Result<VerificationReport, Error> {
        Ok(VerificationReport {
            dim: self.dim,
            volume: parse_rational(&self.volume).map_err(|e| e.in_field("volume"))?,
            fitted: self.fitted.to_quasipoly()?,
            residual_is_zero: self.residual_is_zero,
            rows: self
                .rows
                .iter()
                .enumerate()
                .map(|(i, row)| {
                    Ok(VerificationRow {
                        m: row.m,
                        count: row.count,
                        expected: parse_rational(&row.expected)
                            .map_err(|e| e.in_field(format!("rows[{i}].expected")))?,
                        pass: row.pass,
                    })
                })
                .collect::<Result<_, Error>>()?,
            passed: self.passed,
        })
    }
}

/// Renders any of the structured documents; all structured output goes
/// through this so rendering is deterministic and round-trips are
/// byte-identical.
pub fn to_structured<T: Serialize>(value: &T) -> Result<String, Error> {
    Ok(serde_json::to_string_pretty(value)?)
}

fn read_to_string(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::from(e).in_field(path.display().to_string()))
}

/// Loads a polytope from a JSON vertex file.
pub fn load_polytope(path: &Path, dim_cap: usize) -> Result<RationalPolytope, Error> {
    let text = read_to_string(path)?;
    let file: PolytopeFile = serde_json::from_str(&text)
        .map_err(|e| Error::from(e).in_field(path.display().to_string()))?;
    file.to_polytope(dim_cap)
        .map_err(|e| e.in_field(path.display().to_string()))
}

/// Loads a glued complex from a JSON file.
pub fn load_complex(path: &Path, dim_cap: usize) -> Result<AffineComplex, Error> {
    let text = read_to_string(path)?;
    let file: ComplexFile = serde_json::from_str(&text)
        .map_err(|e| Error::from(e).in_field(path.display().to_string()))?;
    file.to_complex(dim_cap)
        .map_err(|e| e.in_field(path.display().to_string()))
}
