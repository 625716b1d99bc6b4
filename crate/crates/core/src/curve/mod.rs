//! Tropical curves as finite metric graphs: piecewise-linear rational
//! functions with integer slopes, order and divisor calculus, section
//! checking, and the box-or-section construction bounding the rank of a
//! divisor by the module dimension of its sections.

pub mod pwl;

use std::collections::BTreeMap;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matrix::{Dichotomy, TropMatrix};
use crate::module::Submodule;
use crate::scalar::TropScalar;
use crate::vector::TropVector;
use pwl::EdgePwl;

/// One edge of a metric graph: a bounded segment with a positive rational
/// length (loops and multi-edges allowed), or an unbounded ray.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Edge {
    Segment {
        ends: (usize, usize),
        len: BigRational,
    },
    Ray {
        base: usize,
    },
}

/// A connected finite metric graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetricGraph {
    n_vertices: usize,
    edges: Vec<Edge>,
}

/// A point of the curve: a vertex, or a point strictly inside an edge given
/// by its offset from the edge's first end.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum CurvePoint {
    Vertex(usize),
    Interior { edge: usize, offset: BigRational },
}

impl CurvePoint {
    pub fn interior(edge: usize, offset: BigRational) -> Self {
        CurvePoint::Interior { edge, offset }
    }
}

/// An end of an edge incident to a vertex; loops contribute both ends.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Germ {
    Start(usize),
    Finish(usize),
}

impl MetricGraph {
    pub fn new(n_vertices: usize, edges: Vec<Edge>) -> Result<Self> {
        if n_vertices == 0 {
            return Err(Error::InvalidGraph(
                "graph needs at least one vertex".into(),
            ));
        }
        if edges.is_empty() {
            return Err(Error::InvalidGraph("graph needs at least one edge".into()));
        }
        for e in &edges {
            match e {
                Edge::Segment { ends: (u, v), len } => {
                    if *u >= n_vertices || *v >= n_vertices {
                        return Err(Error::InvalidGraph(format!(
                            "edge end out of range: ({u}, {v})"
                        )));
                    }
                    if !len.is_positive() {
                        return Err(Error::InvalidGraph(format!(
                            "edge length {len} must be > 0"
                        )));
                    }
                }
                Edge::Ray { base } => {
                    if *base >= n_vertices {
                        return Err(Error::InvalidGraph(format!("ray base {base} out of range")));
                    }
                }
            }
        }
        let graph = MetricGraph { n_vertices, edges };
        for v in 0..n_vertices {
            if graph.germs_at(v).is_empty() {
                return Err(Error::InvalidGraph(format!("vertex {v} is isolated")));
            }
        }
        if !graph.is_connected() {
            return Err(Error::InvalidGraph("graph must be connected".into()));
        }
        Ok(graph)
    }

    /// The local model of an (n+1)-valent point: one vertex carrying n+1
    /// unbounded rays.
    pub fn star(rays: usize) -> Self {
        MetricGraph::new(1, (0..rays).map(|_| Edge::Ray { base: 0 }).collect())
            .expect("a star is a valid graph")
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn is_compact(&self) -> bool {
        self.edges.iter().all(|e| matches!(e, Edge::Segment { .. }))
    }

    fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.n_vertices];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for e in &self.edges {
                if let Edge::Segment { ends: (a, b), .. } = e {
                    for (x, y) in [(*a, *b), (*b, *a)] {
                        if x == v && !seen[y] {
                            seen[y] = true;
                            stack.push(y);
                        }
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    fn germs_at(&self, v: usize) -> Vec<Germ> {
        let mut out = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            match e {
                Edge::Segment { ends: (a, b), .. } => {
                    if *a == v {
                        out.push(Germ::Start(i));
                    }
                    if *b == v {
                        out.push(Germ::Finish(i));
                    }
                }
                Edge::Ray { base } => {
                    if *base == v {
                        out.push(Germ::Start(i));
                    }
                }
            }
        }
        out
    }

    pub fn validate_point(&self, p: &CurvePoint) -> Result<()> {
        match p {
            CurvePoint::Vertex(v) => {
                if *v >= self.n_vertices {
                    return Err(Error::PointOffGraph(format!("vertex {v} out of range")));
                }
            }
            CurvePoint::Interior { edge, offset } => {
                let Some(e) = self.edges.get(*edge) else {
                    return Err(Error::PointOffGraph(format!("edge {edge} out of range")));
                };
                let ok = match e {
                    Edge::Segment { len, .. } => offset.is_positive() && offset < len,
                    Edge::Ray { .. } => offset.is_positive(),
                };
                if !ok {
                    return Err(Error::PointOffGraph(format!(
                        "offset {offset} not strictly inside edge {edge}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// An integer point-weight with finite support.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Divisor {
    weights: BTreeMap<CurvePoint, BigInt>,
}

impl Divisor {
    pub fn zero() -> Self {
        Divisor::default()
    }

    pub fn from_weights(weights: impl IntoIterator<Item = (CurvePoint, BigInt)>) -> Self {
        let mut d = Divisor::zero();
        for (p, w) in weights {
            d.add_weight(p, &w);
        }
        d
    }

    pub fn add_weight(&mut self, p: CurvePoint, w: &BigInt) {
        if w.is_zero() {
            return;
        }
        let total = self.weight(&p) + w;
        if total.is_zero() {
            self.weights.remove(&p);
        } else {
            self.weights.insert(p, total);
        }
    }

    pub fn weight(&self, p: &CurvePoint) -> BigInt {
        self.weights.get(p).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn support(&self) -> impl Iterator<Item = &CurvePoint> {
        self.weights.keys()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&CurvePoint, &BigInt)> {
        self.weights.iter()
    }

    pub fn degree(&self) -> BigInt {
        self.weights.values().sum()
    }

    pub fn is_effective(&self) -> bool {
        self.weights.values().all(|w| !w.is_negative())
    }

    pub fn add(&self, other: &Divisor) -> Divisor {
        let mut out = self.clone();
        for (p, w) in &other.weights {
            out.add_weight(p.clone(), w);
        }
        out
    }

    pub fn negate(&self) -> Divisor {
        Divisor {
            weights: self.weights.iter().map(|(p, w)| (p.clone(), -w)).collect(),
        }
    }

    pub fn sub(&self, other: &Divisor) -> Divisor {
        self.add(&other.negate())
    }
}

/// A rational function on the graph: either identically `-inf`, or a
/// continuous piecewise-linear function with integer slopes given per edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RationalFunction {
    Bottom,
    Graph(Vec<EdgePwl>),
}

impl RationalFunction {
    /// Validates per-edge data against the graph: domains, integer slopes,
    /// and continuity at every vertex.
    pub fn new(graph: &MetricGraph, edges: Vec<EdgePwl>) -> Result<Self> {
        if edges.len() != graph.edges().len() {
            return Err(Error::InvalidFunction(format!(
                "function covers {} edges, graph has {}",
                edges.len(),
                graph.edges().len()
            )));
        }
        for (e, f) in graph.edges().iter().zip(&edges) {
            match e {
                Edge::Segment { len, .. } => f.validate(Some(len))?,
                Edge::Ray { .. } => f.validate(None)?,
            }
        }
        let f = RationalFunction::Graph(edges);
        for v in 0..graph.n_vertices() {
            let values: Vec<BigRational> = graph
                .germs_at(v)
                .iter()
                .map(|g| f.germ_value(graph, *g))
                .collect();
            if values.windows(2).any(|w| w[0] != w[1]) {
                return Err(Error::InvalidFunction(format!(
                    "germ values at vertex {v} disagree"
                )));
            }
        }
        Ok(f)
    }

    pub fn constant(graph: &MetricGraph, value: &TropScalar) -> Self {
        match value.as_rational() {
            None => RationalFunction::Bottom,
            Some(r) => RationalFunction::Graph(
                graph
                    .edges()
                    .iter()
                    .map(|e| match e {
                        Edge::Segment { len, .. } => EdgePwl::constant_segment(len, r),
                        Edge::Ray { .. } => EdgePwl::constant_ray(r),
                    })
                    .collect(),
            ),
        }
    }

    pub fn is_bottom(&self) -> bool {
        matches!(self, RationalFunction::Bottom)
    }

    fn edge_fns(&self) -> Result<&[EdgePwl]> {
        match self {
            RationalFunction::Bottom => Err(Error::BottomFunction),
            RationalFunction::Graph(edges) => Ok(edges),
        }
    }

    fn germ_value(&self, graph: &MetricGraph, germ: Germ) -> BigRational {
        let edges = self
            .edge_fns()
            .expect("germ_value on a non-bottom function");
        match germ {
            Germ::Start(e) => edges[e].value_at(&BigRational::zero()),
            Germ::Finish(e) => match &graph.edges()[e] {
                Edge::Segment { len, .. } => edges[e].value_at(len),
                Edge::Ray { .. } => unreachable!("rays have no finish germ"),
            },
        }
    }

    /// Value at a point of the curve (`-inf` for the bottom function).
    pub fn evaluate(&self, graph: &MetricGraph, p: &CurvePoint) -> Result<TropScalar> {
        graph.validate_point(p)?;
        let edges = match self {
            RationalFunction::Bottom => return Ok(TropScalar::NegInf),
            RationalFunction::Graph(edges) => edges,
        };
        let value = match p {
            CurvePoint::Vertex(v) => {
                let germ = graph.germs_at(*v)[0];
                self.germ_value(graph, germ)
            }
            CurvePoint::Interior { edge, offset } => edges[*edge].value_at(offset),
        };
        Ok(TropScalar::from_rational(value))
    }

    /// The order at a point: the sum of the integer slopes of the function
    /// moving away from the point along each germ. Zero wherever the
    /// function is locally affine.
    pub fn order_at(&self, graph: &MetricGraph, p: &CurvePoint) -> Result<BigInt> {
        graph.validate_point(p)?;
        let edges = self.edge_fns()?;
        let total = match p {
            CurvePoint::Vertex(v) => {
                let mut acc = BigRational::zero();
                for germ in graph.germs_at(*v) {
                    match germ {
                        Germ::Start(e) => acc += edges[e].slope_after(&BigRational::zero()),
                        Germ::Finish(e) => {
                            let Edge::Segment { len, .. } = &graph.edges()[e] else {
                                unreachable!()
                            };
                            acc -= edges[e].slope_before(len);
                        }
                    }
                }
                acc
            }
            CurvePoint::Interior { edge, offset } => {
                edges[*edge].slope_after(offset) - edges[*edge].slope_before(offset)
            }
        };
        debug_assert!(total.is_integer());
        Ok(total.to_integer())
    }

    /// The divisor of the function: its order at every vertex and at every
    /// interior breakpoint. On a compact graph the total degree telescopes
    /// to zero.
    pub fn principal_divisor(&self, graph: &MetricGraph) -> Result<Divisor> {
        let edges = self.edge_fns()?;
        let mut d = Divisor::zero();
        for v in 0..graph.n_vertices() {
            let p = CurvePoint::Vertex(v);
            let w = self.order_at(graph, &p)?;
            d.add_weight(p, &w);
        }
        for (e, f) in edges.iter().enumerate() {
            for offset in f.interior_offsets() {
                let p = CurvePoint::interior(e, offset);
                let w = self.order_at(graph, &p)?;
                d.add_weight(p, &w);
            }
        }
        Ok(d)
    }

    /// Scalar action `a ⊙ f`: shifts all values; `-inf` collapses to the
    /// bottom function.
    pub fn scale(&self, a: &TropScalar) -> RationalFunction {
        match (self, a.as_rational()) {
            (RationalFunction::Bottom, _) | (_, None) => RationalFunction::Bottom,
            (RationalFunction::Graph(edges), Some(r)) => {
                RationalFunction::Graph(edges.iter().map(|f| f.shift(r)).collect())
            }
        }
    }

    /// Pointwise maximum (the module addition of sections).
    pub fn join(&self, other: &RationalFunction) -> RationalFunction {
        match (self, other) {
            (RationalFunction::Bottom, g) => g.clone(),
            (f, RationalFunction::Bottom) => f.clone(),
            (RationalFunction::Graph(a), RationalFunction::Graph(b)) => {
                RationalFunction::Graph(a.iter().zip(b).map(|(f, g)| f.max(g)).collect())
            }
        }
    }

    /// Pointwise tropical product (ordinary sum of values).
    pub fn product(&self, other: &RationalFunction) -> RationalFunction {
        match (self, other) {
            (RationalFunction::Graph(a), RationalFunction::Graph(b)) => {
                RationalFunction::Graph(a.iter().zip(b).map(|(f, g)| f.sum(g)).collect())
            }
            _ => RationalFunction::Bottom,
        }
    }
}

/// Is `f` a section of `D`, i.e. `f = -inf` or `(f) + D >= 0`?
pub fn is_section(graph: &MetricGraph, f: &RationalFunction, d: &Divisor) -> Result<bool> {
    if f.is_bottom() {
        return Ok(true);
    }
    let princ = f.principal_divisor(graph)?;
    Ok(princ.add(d).is_effective())
}

/// Spot-checks that tropical combinations of sections stay sections: the
/// section set of a divisor is a module. Inputs must individually pass
/// [`is_section`]; the sampled combinations are then re-checked.
pub fn closure_check(
    graph: &MetricGraph,
    sections: &[RationalFunction],
    d: &Divisor,
    samples: usize,
    seed: u64,
) -> Result<bool> {
    for (index, f) in sections.iter().enumerate() {
        if !is_section(graph, f, d)? {
            return Err(Error::NotASection { index });
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let mut combo = RationalFunction::Bottom;
        for f in sections {
            if rng.gen_bool(0.25) {
                continue;
            }
            let coeff = TropScalar::ratio(rng.gen_range(-6..=6), rng.gen_range(1..=2));
            combo = combo.join(&f.scale(&coeff));
        }
        if !is_section(graph, &combo, d)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Witness that some tropical combination of the input sections is a
/// non-bottom section of `D - E`.
#[derive(Debug, Clone)]
pub struct SectionWitness {
    pub coeffs: TropVector,
    pub function: RationalFunction,
    /// For each evaluation point, an off-diagonal input whose scaled value
    /// attains the combination there.
    pub attained_by: Vec<usize>,
}

/// Certificate that a straight reflexive module of dimension `m` embeds in
/// the section module of `D`, so the rank of `D` is at most `m - 1`.
#[derive(Debug, Clone)]
pub struct BoxCertificate {
    pub base: TropVector,
    pub epsilon: TropScalar,
    pub generators: Vec<TropVector>,
    pub dimension: usize,
    pub matrix: TropMatrix,
}

#[derive(Debug, Clone)]
pub enum SectionOrBox {
    Section(SectionWitness),
    Box(BoxCertificate),
}

/// The rank-bound construction: given sections `f_i` of `D - E + P_i` for
/// pairwise distinct points `P_i` (with `E = P_1 + ... + P_m`), evaluate
/// them into the square matrix `A_ij = f_j(P_i)` and solve its dichotomy.
///
/// * The off-diagonal case assembles a verified non-bottom section of
///   `D - E` (so the chosen points failed to cut the sections down).
/// * The diagonal case yields a box module of dimension `m` on which `A`
///   acts diagonally, certifying `m` independent directions of sections.
///
/// Both outcomes are re-verified before returning.
pub fn section_or_box(
    graph: &MetricGraph,
    d: &Divisor,
    sections: &[RationalFunction],
    points: &[CurvePoint],
) -> Result<SectionOrBox> {
    let m = sections.len();
    if m == 0 || points.len() != m {
        return Err(Error::PreconditionFailed(
            "need equally many sections and points, at least one each".into(),
        ));
    }
    for p in points {
        graph.validate_point(p)?;
    }
    for i in 0..m {
        for j in i + 1..m {
            if points[i] == points[j] {
                return Err(Error::PreconditionFailed(format!(
                    "points {i} and {j} coincide; evaluation points must be distinct"
                )));
            }
        }
    }
    let e_div = Divisor::from_weights(points.iter().map(|p| (p.clone(), BigInt::from(1))));
    for (i, f) in sections.iter().enumerate() {
        if f.is_bottom() {
            return Err(Error::PreconditionFailed(format!("section {i} is bottom")));
        }
        let mut target = d.sub(&e_div);
        target.add_weight(points[i].clone(), &BigInt::from(1));
        if !is_section(graph, f, &target)? {
            return Err(Error::PreconditionFailed(format!(
                "function {i} is not a section of D - E + P_{i}"
            )));
        }
    }

    let a = TropMatrix::new(
        points
            .iter()
            .map(|p| {
                sections
                    .iter()
                    .map(|f| f.evaluate(graph, p))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?,
    )?;

    match a.dichotomy()? {
        Dichotomy::OffDiagonal { v } => {
            let mut combo = RationalFunction::Bottom;
            for (f, c) in sections.iter().zip(v.coords()) {
                combo = combo.join(&f.scale(c));
            }
            let av = a.apply(&v)?;
            let mut attained_by = Vec::with_capacity(m);
            for i in 0..m {
                let hit = (0..m).find(|&j| j != i && &v[j] * a.entry(i, j) == av[i]);
                let Some(j) = hit else {
                    return Err(Error::InternalVerificationFailed(format!(
                        "no off-diagonal index attains the value at point {i}"
                    )));
                };
                attained_by.push(j);
            }
            let target = d.sub(&e_div);
            if combo.is_bottom() || !is_section(graph, &combo, &target)? {
                return Err(Error::InternalVerificationFailed(
                    "assembled combination is not a section of D - E".into(),
                ));
            }
            Ok(SectionOrBox::Section(SectionWitness {
                coeffs: v,
                function: combo,
                attained_by,
            }))
        }
        Dichotomy::Diagonal { v, epsilon } => {
            // generators of the box between v and ε ⊙ v: the i-th one sits
            // at v with only the i-th coordinate raised by ε. Every box
            // element w is the join of these scaled by w_i - v_i - ε, so
            // they span the whole scaled box.
            let generators: Vec<TropVector> = (0..m)
                .map(|i| {
                    TropVector::new(
                        (0..m)
                            .map(|j| {
                                if i == j {
                                    &epsilon * &v[j]
                                } else {
                                    v[j].clone()
                                }
                            })
                            .collect(),
                    )
                })
                .collect();
            let module = Submodule::new(m, generators.clone())?;
            if module.dimension() != m {
                return Err(Error::InternalVerificationFailed(
                    "box module dimension is not the number of points".into(),
                ));
            }
            let diag = a.diagonal_part();
            for g in &generators {
                if a.apply(g)? != diag.apply(g)? {
                    return Err(Error::InternalVerificationFailed(
                        "matrix does not act diagonally on the box".into(),
                    ));
                }
            }
            Ok(SectionOrBox::Box(BoxCertificate {
                base: v,
                epsilon,
                generators,
                dimension: m,
                matrix: a,
            }))
        }
    }
}
