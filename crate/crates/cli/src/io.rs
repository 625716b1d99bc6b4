//! JSON wire formats: request and response shapes for every subcommand.

use num::bigint::BigInt;
use num::rational::BigRational;
use serde::{Deserialize, Serialize};

use maxplus::curve::pwl::EdgePwl;
use maxplus::curve::{CurvePoint, Divisor, Edge, MetricGraph, RationalFunction};
use maxplus::module::{Bound, CMatrix, StraightnessReport};
use maxplus::planecurve::{PlanePoint, Skeleton};
use maxplus::poly::TermData;
use maxplus::{
    Dichotomy, Error, LatticeCheck, Polytope, ProjPoint, Submodule, TropMatrix, TropPolynomial,
    TropScalar, TropVector,
};

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidScalar(msg.into())
}

/// A finite rational encoded as `p/q` (or `p`).
pub fn parse_rational(s: &str) -> Result<BigRational, Error> {
    let scalar: TropScalar = s.parse()?;
    scalar
        .as_rational()
        .cloned()
        .ok_or_else(|| invalid(format!("expected a finite rational, got {s}")))
}

pub fn rational_string(r: &BigRational) -> String {
    TropScalar::from_rational(r.clone()).to_string()
}

// ---------------------------------------------------------------- modules

#[derive(Debug, Deserialize)]
pub struct ModuleData {
    pub ambient: usize,
    pub generators: Vec<Vec<TropScalar>>,
}

impl ModuleData {
    pub fn build(self) -> Result<Submodule, Error> {
        Submodule::new(
            self.ambient,
            self.generators.into_iter().map(TropVector::new).collect(),
        )
    }
}

#[derive(Debug, Serialize)]
pub struct LatticeCheckOut {
    pub preserving: bool,
    pub minima: Vec<TropVector>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failing: Option<usize>,
}

impl From<LatticeCheck> for LatticeCheckOut {
    fn from(c: LatticeCheck) -> Self {
        LatticeCheckOut {
            preserving: c.preserving,
            minima: c.minima,
            failing: c.failing,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct StraightnessOut {
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<StraightnessCounterexample>,
}

#[derive(Debug, Serialize)]
pub struct StraightnessCounterexample {
    pub triple: Vec<TropVector>,
    pub join_of_infima: TropVector,
    pub infimum_of_joins: TropVector,
}

impl From<StraightnessReport> for StraightnessOut {
    fn from(r: StraightnessReport) -> Self {
        StraightnessOut {
            holds: r.holds,
            counterexample: r.counterexample.map(|c| StraightnessCounterexample {
                triple: vec![c.triple.0, c.triple.1, c.triple.2],
                join_of_infima: c.rhs,
                infimum_of_joins: c.lhs,
            }),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct CMatrixOut {
    pub n: usize,
    /// `x_j >= x_i - entries[i][j]`; `"+inf"` marks the absence of a bound.
    pub entries: Vec<Vec<String>>,
}

impl From<&CMatrix> for CMatrixOut {
    fn from(c: &CMatrix) -> Self {
        CMatrixOut {
            n: c.n,
            entries: c
                .entries
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|b| match b {
                            Bound::Finite(r) => rational_string(r),
                            Bound::Unbounded => "+inf".to_string(),
                        })
                        .collect()
                })
                .collect(),
        }
    }
}

// ---------------------------------------------------------------- matrices

#[derive(Debug, Deserialize)]
pub struct MatrixData {
    pub n: usize,
    pub entries: Vec<Vec<TropScalar>>,
}

impl MatrixData {
    pub fn build(self) -> Result<TropMatrix, Error> {
        if self.entries.len() != self.n {
            return Err(Error::SizeMismatch {
                left: self.n,
                right: self.entries.len(),
            });
        }
        TropMatrix::new(self.entries)
    }
}

pub fn matrix_out(a: &TropMatrix) -> serde_json::Value {
    serde_json::json!({
        "n": a.order(),
        "entries": a.rows(),
    })
}

#[derive(Debug, Serialize)]
#[serde(tag = "case")]
pub enum DichotomyOut {
    #[serde(rename = "I")]
    Diagonal { v: TropVector, epsilon: TropScalar },
    #[serde(rename = "II")]
    OffDiagonal { v: TropVector },
}

impl From<Dichotomy> for DichotomyOut {
    fn from(d: Dichotomy) -> Self {
        match d {
            Dichotomy::Diagonal { v, epsilon } => DichotomyOut::Diagonal { v, epsilon },
            Dichotomy::OffDiagonal { v } => DichotomyOut::OffDiagonal { v },
        }
    }
}

// ---------------------------------------------------------------- polytopes

#[derive(Debug, Deserialize)]
pub struct PolytopeData {
    pub dim: usize,
    pub points: Vec<Vec<TropScalar>>,
}

impl PolytopeData {
    pub fn build(self) -> Result<Polytope, Error> {
        let points = self
            .points
            .into_iter()
            .map(|p| {
                let v = TropVector::new(p);
                if v.len() != self.dim + 1 {
                    return Err(Error::DimensionMismatch {
                        left: self.dim,
                        right: v.len() - 1,
                    });
                }
                ProjPoint::new(v)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Polytope::hull(points)
    }
}

pub fn polytope_out(p: &Polytope) -> serde_json::Value {
    serde_json::json!({
        "dim": p.dim(),
        "points": p.points().iter().map(|q| q.rep().clone()).collect::<Vec<_>>(),
    })
}

// ---------------------------------------------------------------- polynomials

pub fn polynomial_from_terms(nvars: usize, terms: Vec<TermData>) -> Result<TropPolynomial, Error> {
    for t in &terms {
        if t.exp.len() != nvars {
            return Err(Error::DimensionMismatch {
                left: nvars,
                right: t.exp.len(),
            });
        }
    }
    Ok(TropPolynomial::from_terms(nvars, terms))
}

// ---------------------------------------------------------------- curves

#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum VerticesData {
    Count(usize),
    Names(Vec<String>),
}

#[derive(Debug, Deserialize)]
pub struct EdgeData {
    pub ends: Vec<usize>,
    #[serde(default)]
    pub len: Option<String>,
    #[serde(default)]
    pub ray: bool,
}

#[derive(Debug, Deserialize)]
pub struct GraphData {
    pub vertices: VerticesData,
    pub edges: Vec<EdgeData>,
}

impl GraphData {
    pub fn build(self) -> Result<MetricGraph, Error> {
        let n = match &self.vertices {
            VerticesData::Count(n) => *n,
            VerticesData::Names(names) => names.len(),
        };
        let edges = self
            .edges
            .into_iter()
            .map(|e| {
                if e.ray {
                    let [base] = e.ends[..] else {
                        return Err(Error::InvalidGraph("a ray has exactly one end".into()));
                    };
                    Ok(Edge::Ray { base })
                } else {
                    let [u, v] = e.ends[..] else {
                        return Err(Error::InvalidGraph("a segment has exactly two ends".into()));
                    };
                    let len = e
                        .len
                        .as_deref()
                        .ok_or_else(|| Error::InvalidGraph("a segment needs a length".into()))?;
                    Ok(Edge::Segment {
                        ends: (u, v),
                        len: parse_rational(len)?,
                    })
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        MetricGraph::new(n, edges)
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct EdgeFunctionData {
    /// Control points as `[offset, value]` pairs of rational strings.
    pub points: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail_slope: Option<i64>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct FunctionData {
    #[serde(default)]
    pub bottom: bool,
    #[serde(default)]
    pub edges: Vec<EdgeFunctionData>,
}

impl FunctionData {
    pub fn build(self, graph: &MetricGraph) -> Result<RationalFunction, Error> {
        if self.bottom {
            return Ok(RationalFunction::Bottom);
        }
        let edges = self
            .edges
            .into_iter()
            .map(|e| {
                let points = e
                    .points
                    .iter()
                    .map(|(o, v)| Ok((parse_rational(o)?, parse_rational(v)?)))
                    .collect::<Result<Vec<_>, Error>>()?;
                Ok(EdgePwl {
                    points,
                    tail_slope: e.tail_slope.map(BigInt::from),
                })
            })
            .collect::<Result<Vec<_>, Error>>()?;
        RationalFunction::new(graph, edges)
    }
}

pub fn function_out(f: &RationalFunction) -> FunctionData {
    match f {
        RationalFunction::Bottom => FunctionData {
            bottom: true,
            edges: vec![],
        },
        RationalFunction::Graph(edges) => FunctionData {
            bottom: false,
            edges: edges
                .iter()
                .map(|e| EdgeFunctionData {
                    points: e
                        .points
                        .iter()
                        .map(|(o, v)| (rational_string(o), rational_string(v)))
                        .collect(),
                    tail_slope: e
                        .tail_slope
                        .as_ref()
                        .map(|s| i64::try_from(s.clone()).expect("slopes fit machine integers")),
                })
                .collect(),
        },
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PointData {
    Vertex { vertex: usize },
    Interior { edge: usize, offset: String },
}

impl PointData {
    pub fn build(self) -> Result<CurvePoint, Error> {
        Ok(match self {
            PointData::Vertex { vertex } => CurvePoint::Vertex(vertex),
            PointData::Interior { edge, offset } => {
                CurvePoint::interior(edge, parse_rational(&offset)?)
            }
        })
    }
}

pub fn point_out(p: &CurvePoint) -> PointData {
    match p {
        CurvePoint::Vertex(v) => PointData::Vertex { vertex: *v },
        CurvePoint::Interior { edge, offset } => PointData::Interior {
            edge: *edge,
            offset: rational_string(offset),
        },
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct DivisorEntry {
    pub point: PointData,
    pub mult: i64,
}

pub fn divisor_from(entries: Vec<DivisorEntry>, graph: &MetricGraph) -> Result<Divisor, Error> {
    let mut d = Divisor::zero();
    for e in entries {
        let p = e.point.build()?;
        graph.validate_point(&p)?;
        d.add_weight(p, &BigInt::from(e.mult));
    }
    Ok(d)
}

pub fn divisor_out(d: &Divisor) -> Vec<DivisorEntry> {
    d.entries()
        .map(|(p, w)| DivisorEntry {
            point: point_out(p),
            mult: i64::try_from(w.clone()).expect("weights fit machine integers"),
        })
        .collect()
}

// ---------------------------------------------------------------- plane curves

pub fn plane_point_out(p: &PlanePoint) -> (String, String) {
    (rational_string(&p.x), rational_string(&p.y))
}

pub fn skeleton_out(sk: &Skeleton) -> serde_json::Value {
    serde_json::json!({
        "vertices": sk.vertices.iter().map(plane_point_out).collect::<Vec<_>>(),
        "bounded_edges": sk.bounded_edges.iter().map(|e| serde_json::json!({
            "ends": [e.ends.0, e.ends.1],
            "direction": [e.direction.0, e.direction.1],
            "multiplicity": e.multiplicity,
        })).collect::<Vec<_>>(),
        "rays": sk.rays.iter().map(|r| serde_json::json!({
            "base": r.base,
            "direction": [r.direction.0, r.direction.1],
            "multiplicity": r.multiplicity,
        })).collect::<Vec<_>>(),
    })
}
