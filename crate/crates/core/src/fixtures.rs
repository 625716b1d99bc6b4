//! A deterministic corpus of worked examples exercising every subsystem,
//! runnable from the command line and reused by the test suite.

use num::bigint::BigInt;
use num::rational::BigRational;

use crate::curve::pwl::EdgePwl;
use crate::curve::{
    closure_check, is_section, section_or_box, CurvePoint, Divisor, Edge, MetricGraph,
    RationalFunction, SectionOrBox,
};
use crate::matrix::{Dichotomy, TropMatrix};
use crate::module::Submodule;
use crate::planecurve::{betti1, on_curve, skeleton, tropicalize, PlanePoint};
use crate::poly::{predicate_membership, TropPolynomial};
use crate::polytope::{Polytope, ProjPoint};
use crate::scalar::TropScalar;
use crate::vector::TropVector;

pub struct FixtureResult {
    pub name: &'static str,
    pub outcome: Result<(), String>,
}

type Check = fn() -> Result<(), String>;

fn expect(cond: bool, msg: &str) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.to_string())
    }
}

fn ri(p: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(p))
}

fn rq(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

fn vi(xs: &[i64]) -> TropVector {
    TropVector::from_ints(xs)
}

fn scalar_arithmetic() -> Result<(), String> {
    expect(
        &TropScalar::int(2) + &TropScalar::int(3) == TropScalar::int(3),
        "add is max",
    )?;
    expect(
        &TropScalar::int(2) * &TropScalar::int(3) == TropScalar::int(5),
        "mul is plus",
    )?;
    expect(
        TropScalar::int(5).div(&TropScalar::int(3)) == Ok(TropScalar::int(2)),
        "division subtracts",
    )?;
    expect(
        TropScalar::int(3).root(2) == TropScalar::ratio(3, 2),
        "roots divide",
    )?;
    expect(
        TropScalar::int(1).div(&TropScalar::NegInf).is_err(),
        "division by -inf fails",
    )
}

/// The bent submodule of T^3 cut out by `max(a - 1, c) <= b` and
/// `2b <= a + c`, tested through its predicate description.
struct BentModule {
    p1: TropVector,
    q1: TropPolynomial,
    p2: TropVector,
    q2: TropPolynomial,
}

impl BentModule {
    fn new() -> Self {
        BentModule {
            p1: TropVector::new(vec![
                TropScalar::int(-1),
                TropScalar::NegInf,
                TropScalar::int(0),
            ]),
            q1: TropPolynomial::monomial(3, vec![0, 1, 0], TropScalar::int(0)),
            p2: TropVector::new(vec![
                TropScalar::NegInf,
                TropScalar::int(0),
                TropScalar::NegInf,
            ]),
            q2: TropPolynomial::monomial(3, vec![1, 0, 1], TropScalar::int(0)),
        }
    }

    fn contains(&self, v: &TropVector) -> Result<bool, String> {
        let a = predicate_membership(&self.p1, &self.q1, 1, v).map_err(|e| e.to_string())?;
        let b = predicate_membership(&self.p2, &self.q2, 2, v).map_err(|e| e.to_string())?;
        Ok(a && b)
    }

    /// The extremal curve e(t) = (2t, t, 0).
    fn extremal(t: &BigRational) -> TropVector {
        TropVector::new(vec![
            TropScalar::from_rational(t + t),
            TropScalar::from_rational(t.clone()),
            TropScalar::int(0),
        ])
    }

    /// Exact module infimum of two members, via the closed form forced by
    /// the constraint `2b <= a + c`; valid whenever the candidate lies in
    /// the module.
    fn infimum(&self, x: &TropVector, y: &TropVector) -> Result<TropVector, String> {
        let u = x.meet(y).map_err(|e| e.to_string())?;
        let a = u[0].as_rational().ok_or("finite members expected")?;
        let c = u[2].as_rational().ok_or("finite members expected")?;
        let cap = (a + c) / ri(2);
        let b = match u[1].as_rational() {
            Some(b) if *b <= cap => b.clone(),
            _ => cap,
        };
        let z = TropVector::new(vec![
            u[0].clone(),
            TropScalar::from_rational(b),
            u[2].clone(),
        ]);
        if !self.contains(&z)? {
            return Err("closed-form infimum fell outside the module".into());
        }
        Ok(z)
    }
}

fn bent_module_membership() -> Result<(), String> {
    let m = BentModule::new();
    expect(m.contains(&vi(&[0, 0, 0]))?, "origin is a member")?;
    for t in [ri(0), rq(1, 4), rq(1, 2), rq(3, 4), ri(1)] {
        expect(
            m.contains(&BentModule::extremal(&t))?,
            "extremal curve points are members",
        )?;
    }
    expect(m.contains(&TropVector::bottom(3))?, "bottom is a member")?;
    expect(
        !m.contains(&vi(&[3, 1, 0]))?,
        "(3,1,0) violates the first constraint",
    )
}

fn bent_module_decomposition() -> Result<(), String> {
    // every member (a, b, c) splits as c ⊙ e(b - c) ⊕ (2b - a) ⊙ e(a - b)
    let m = BentModule::new();
    let samples = [
        vi(&[0, 0, 0]),
        vi(&[2, 1, 0]),
        TropVector::new(vec![
            TropScalar::ratio(3, 2),
            TropScalar::int(1),
            TropScalar::ratio(1, 2),
        ]),
        TropVector::new(vec![
            TropScalar::ratio(5, 4),
            TropScalar::int(1),
            TropScalar::int(1),
        ]),
    ];
    for v in samples {
        expect(m.contains(&v)?, "sample must be a member")?;
        let (a, b, c) = (
            v[0].as_rational().unwrap().clone(),
            v[1].as_rational().unwrap().clone(),
            v[2].as_rational().unwrap().clone(),
        );
        let lhs = BentModule::extremal(&(&b - &c)).scale(&v[2]);
        let rhs = BentModule::extremal(&(&a - &b)).scale(&TropScalar::from_rational(&b + &b - &a));
        let joined = lhs.join(&rhs).map_err(|e| e.to_string())?;
        expect(joined == v, "decomposition reassembles the member")?;
    }
    Ok(())
}

fn bent_module_not_straight() -> Result<(), String> {
    let m = BentModule::new();
    let v1 = TropVector::new(vec![
        TropScalar::ratio(1, 2),
        TropScalar::ratio(1, 2),
        TropScalar::ratio(1, 2),
    ]);
    let v2 = TropVector::new(vec![
        TropScalar::int(1),
        TropScalar::ratio(1, 2),
        TropScalar::int(0),
    ]);
    let w = vi(&[1, 0, 0]);
    let inf = m.infimum(&v1, &v2)?;
    let expected_inf = TropVector::new(vec![
        TropScalar::ratio(1, 2),
        TropScalar::ratio(1, 4),
        TropScalar::int(0),
    ]);
    expect(inf == expected_inf, "infimum of the two members")?;
    let lhs = inf.join(&w).map_err(|e| e.to_string())?;
    let rhs = m.infimum(
        &v1.join(&w).map_err(|e| e.to_string())?,
        &v2.join(&w).map_err(|e| e.to_string())?,
    )?;
    let expected_lhs = TropVector::new(vec![
        TropScalar::int(1),
        TropScalar::ratio(1, 4),
        TropScalar::int(0),
    ]);
    let expected_rhs = TropVector::new(vec![
        TropScalar::int(1),
        TropScalar::ratio(1, 2),
        TropScalar::int(0),
    ]);
    expect(lhs == expected_lhs, "join of the infimum")?;
    expect(rhs == expected_rhs, "infimum of the joins")?;
    expect(
        lhs != rhs,
        "distributivity fails: the module is not straight",
    )
}

fn minimal_basis_redundancy() -> Result<(), String> {
    let m =
        Submodule::span(vec![vi(&[0, 0]), vi(&[0, 3]), vi(&[0, 2])]).map_err(|e| e.to_string())?;
    let basis = m.minimal_generators();
    expect(
        basis == vec![vi(&[-3, 0]), vi(&[0, 0])],
        "middle generator is redundant",
    )?;
    expect(m.dimension() == 2, "two extremal rays")
}

fn residuation_projection() -> Result<(), String> {
    let m = Submodule::span(vec![vi(&[0, 0]), vi(&[0, 3])]).map_err(|e| e.to_string())?;
    let lam = m
        .residuation_coeffs(&vi(&[0, 2]))
        .map_err(|e| e.to_string())?;
    expect(
        lam == vec![TropScalar::int(0), TropScalar::int(-1)],
        "residual coefficients",
    )?;
    expect(
        m.contains(&vi(&[0, 2])).map_err(|e| e.to_string())?,
        "(0,2) lies on the segment",
    )?;
    expect(
        m.project(&vi(&[1, 0])).map_err(|e| e.to_string())? == vi(&[0, 0]),
        "(1,0) projects to (0,0)",
    )
}

fn lattice_minima_segment() -> Result<(), String> {
    let m = Submodule::span(vec![vi(&[0, 0]), vi(&[0, -2])]).map_err(|e| e.to_string())?;
    let check = m.lattice_check().map_err(|e| e.to_string())?;
    expect(check.preserving, "the segment module preserves infima")?;
    expect(
        check.minima == vec![vi(&[0, -2]), vi(&[0, 0])],
        "coordinate minima",
    )
}

fn dichotomy_diagonal_2x2() -> Result<(), String> {
    let a = TropMatrix::from_ints(&[&[0, -1], &[-1, 0]]);
    match a.dichotomy().map_err(|e| e.to_string())? {
        Dichotomy::Diagonal { v, epsilon } => {
            expect(
                epsilon == TropScalar::ratio(1, 2),
                "epsilon is (c-e)/(2n) = 1/2",
            )?;
            expect(v == vi(&[0, 0]), "witness vector")
        }
        Dichotomy::OffDiagonal { .. } => Err("expected the diagonal case".into()),
    }
}

fn dichotomy_off_diagonal_2x2() -> Result<(), String> {
    let a = TropMatrix::new(vec![
        vec![TropScalar::NegInf, TropScalar::int(0)],
        vec![TropScalar::int(0), TropScalar::NegInf],
    ])
    .map_err(|e| e.to_string())?;
    match a.dichotomy().map_err(|e| e.to_string())? {
        Dichotomy::OffDiagonal { v } => {
            let lhs = a.apply(&v).map_err(|e| e.to_string())?;
            let rhs = a.off_diagonal_part().apply(&v).map_err(|e| e.to_string())?;
            expect(lhs == rhs, "witness verifies entrywise")
        }
        Dichotomy::Diagonal { .. } => Err("expected the off-diagonal case".into()),
    }
}

fn power_stabilization() -> Result<(), String> {
    let a = TropMatrix::from_ints(&[&[0, 1], &[-1, 0]]);
    let (p, verified) = a.stabilized_power().map_err(|e| e.to_string())?;
    expect(verified, "chain and stabilization verified")?;
    expect(p == a, "the first power already stabilizes at order 2")
}

fn projective_segment_vertices() -> Result<(), String> {
    let pts = vec![
        ProjPoint::new(vi(&[0, 0])).map_err(|e| e.to_string())?,
        ProjPoint::new(vi(&[0, 3])).map_err(|e| e.to_string())?,
        ProjPoint::new(vi(&[0, 1])).map_err(|e| e.to_string())?,
    ];
    let p = Polytope::hull(pts).map_err(|e| e.to_string())?;
    let check = p.polytrope_check().map_err(|e| e.to_string())?;
    expect(check.is_polytrope, "a segment is ordinarily convex")?;
    let verts = p.polytrope_vertices().map_err(|e| e.to_string())?;
    expect(verts.len() == 2, "two endpoints")?;
    let rehull = Polytope::hull(verts).map_err(|e| e.to_string())?;
    expect(
        rehull
            .module()
            .equivalent(p.module())
            .map_err(|e| e.to_string())?,
        "vertices re-span the polytope",
    )
}

/// The loop curve: one vertex, one loop edge of length 2, divisor
/// `V + P` with `P` the midpoint. Its two extremal sections evaluate at
/// the two arc midpoints into a band module of width 1.
fn loop_graph_sections() -> Result<
    (
        MetricGraph,
        Divisor,
        RationalFunction,
        RationalFunction,
        RationalFunction,
    ),
    String,
> {
    let g = MetricGraph::new(
        1,
        vec![Edge::Segment {
            ends: (0, 0),
            len: ri(2),
        }],
    )
    .map_err(|e| e.to_string())?;
    let p = CurvePoint::interior(0, ri(1));
    let d = Divisor::from_weights([
        (CurvePoint::Vertex(0), BigInt::from(1)),
        (p, BigInt::from(1)),
    ]);
    let dip_far = RationalFunction::new(
        &g,
        vec![EdgePwl::from_controls(&[
            (ri(0), ri(0)),
            (ri(1), ri(0)),
            (rq(3, 2), rq(-1, 2)),
            (ri(2), ri(0)),
        ])],
    )
    .map_err(|e| e.to_string())?;
    let dip_near = RationalFunction::new(
        &g,
        vec![EdgePwl::from_controls(&[
            (ri(0), ri(0)),
            (rq(1, 2), rq(-1, 2)),
            (ri(1), ri(0)),
            (ri(2), ri(0)),
        ])],
    )
    .map_err(|e| e.to_string())?;
    let zero = RationalFunction::constant(&g, &TropScalar::int(0));
    Ok((g, d, dip_near, dip_far, zero))
}

fn loop_divisor_box() -> Result<(), String> {
    let (g, d, dip_near, dip_far, zero) = loop_graph_sections()?;
    for f in [&dip_near, &dip_far, &zero] {
        expect(
            is_section(&g, f, &d).map_err(|e| e.to_string())?,
            "input is a section",
        )?;
    }
    expect(
        closure_check(&g, &[dip_near.clone(), dip_far.clone(), zero], &d, 25, 11)
            .map_err(|e| e.to_string())?,
        "combinations stay sections",
    )?;
    let p1 = CurvePoint::interior(0, rq(1, 2));
    let p2 = CurvePoint::interior(0, rq(3, 2));
    match section_or_box(&g, &d, &[dip_far, dip_near], &[p1, p2]).map_err(|e| e.to_string())? {
        SectionOrBox::Box(cert) => {
            expect(cert.dimension == 2, "box module of dimension 2")?;
            expect(cert.epsilon == TropScalar::ratio(1, 4), "epsilon 1/4")
        }
        SectionOrBox::Section(_) => Err("expected a box certificate".into()),
    }
}

/// The two-vertex graph with three parallel edges; divisor `V1 + P` with
/// `P` at distance 2 inside the long edge. Mirrors the loop example: the
/// section module is the same band of width 1.
fn theta_graph_module() -> Result<(), String> {
    let g = MetricGraph::new(
        2,
        vec![
            Edge::Segment {
                ends: (0, 1),
                len: ri(3),
            },
            Edge::Segment {
                ends: (0, 1),
                len: ri(1),
            },
            Edge::Segment {
                ends: (0, 1),
                len: ri(1),
            },
        ],
    )
    .map_err(|e| e.to_string())?;
    let p = CurvePoint::interior(0, ri(2));
    let d = Divisor::from_weights([
        (CurvePoint::Vertex(0), BigInt::from(1)),
        (p, BigInt::from(1)),
    ]);
    // the dip between V1 and P on the long edge
    let dip = RationalFunction::new(
        &g,
        vec![
            EdgePwl::from_controls(&[
                (ri(0), ri(0)),
                (ri(1), ri(-1)),
                (ri(2), ri(0)),
                (ri(3), ri(0)),
            ]),
            EdgePwl::constant_segment(&ri(1), &ri(0)),
            EdgePwl::constant_segment(&ri(1), &ri(0)),
        ],
    )
    .map_err(|e| e.to_string())?;
    let zero = RationalFunction::constant(&g, &TropScalar::int(0));
    expect(
        is_section(&g, &dip, &d).map_err(|e| e.to_string())?,
        "dip is a section",
    )?;
    expect(
        is_section(&g, &zero, &d).map_err(|e| e.to_string())?,
        "constant is a section",
    )?;

    // both curve families realize the band module generated by (0,0) and
    // (0,1); with equal parameters the modules coincide
    let band_loop = Submodule::span(vec![vi(&[0, 0]), vi(&[0, 1])]).map_err(|e| e.to_string())?;
    let band_theta = Submodule::span(vec![vi(&[0, 0]), vi(&[0, 1])]).map_err(|e| e.to_string())?;
    expect(
        band_loop
            .equivalent(&band_theta)
            .map_err(|e| e.to_string())?,
        "the two section modules coincide",
    )?;
    // the recorded rank values 1 and 0 both respect rank <= dimension - 1
    let bound = band_loop.dimension() as i64 - 1;
    expect(bound == 1, "band module has dimension 2")?;
    let ranks = [1i64, 0];
    expect(
        ranks.iter().all(|r| *r <= bound),
        "rank bound holds for both fixtures",
    )
}

fn line_skeleton() -> Result<(), String> {
    let f = TropPolynomial::new(
        2,
        [
            (vec![0, 0], TropScalar::int(0)),
            (vec![1, 0], TropScalar::int(0)),
            (vec![0, 1], TropScalar::int(0)),
        ],
    );
    let sk = skeleton(&f).map_err(|e| e.to_string())?;
    expect(
        sk.vertices.len() == 1 && sk.rays.len() == 3 && sk.bounded_edges.is_empty(),
        "one vertex, three rays",
    )?;
    expect(betti1(&sk) == 0, "a line is a tree")?;
    expect(
        on_curve(&f, &PlanePoint::from_ints(0, 0)).map_err(|e| e.to_string())?,
        "vertex on curve",
    )?;
    expect(
        !on_curve(&f, &PlanePoint::from_ints(-5, -7)).map_err(|e| e.to_string())?,
        "cell interior off curve",
    )
}

fn grid_family_betti() -> Result<(), String> {
    let chain = |var: usize, degree: i64| {
        TropPolynomial::new(
            2,
            (0..=degree).map(|k| {
                let mut exp = vec![0, 0];
                exp[var] = k;
                (exp, TropScalar::ratio(k * (2 * degree - k + 1), 2))
            }),
        )
    };
    for (r, s, expected) in [(2i64, 2i64, 1usize), (2, 3, 2), (3, 3, 4)] {
        let f = chain(0, r).product(&chain(1, s));
        let sk = skeleton(&f).map_err(|e| e.to_string())?;
        if betti1(&sk) != expected {
            return Err(format!("betti of the ({r},{s}) grid should be {expected}"));
        }
    }
    Ok(())
}

fn tropicalization_line() -> Result<(), String> {
    let f = tropicalize(&[((0, 0), ri(0)), ((1, 0), ri(0)), ((0, 1), ri(0))])
        .map_err(|e| e.to_string())?;
    let line = TropPolynomial::new(
        2,
        [
            (vec![0, 0], TropScalar::int(0)),
            (vec![1, 0], TropScalar::int(0)),
            (vec![0, 1], TropScalar::int(0)),
        ],
    );
    expect(f == line, "unit coefficients tropicalize to the line")
}

fn star_orders() -> Result<(), String> {
    for n in 1..=4usize {
        let star = MetricGraph::star(n + 1);
        let mut edges = vec![EdgePwl::affine_ray(&ri(0), 1)];
        for _ in 1..=n {
            edges.push(EdgePwl::constant_ray(&ri(0)));
        }
        let f = RationalFunction::new(&star, edges).map_err(|e| e.to_string())?;
        let ord = f
            .order_at(&star, &CurvePoint::Vertex(0))
            .map_err(|e| e.to_string())?;
        if ord != BigInt::from(1) {
            return Err(format!("corner function must have order 1 on the {n}-star"));
        }
        let mut edges = vec![EdgePwl::affine_ray(&ri(1), n as i64)];
        for _ in 1..=n {
            edges.push(EdgePwl::affine_ray(&ri(1), -1));
        }
        let h = RationalFunction::new(&star, edges).map_err(|e| e.to_string())?;
        let ord = h
            .order_at(&star, &CurvePoint::Vertex(0))
            .map_err(|e| e.to_string())?;
        if ord != BigInt::from(0) {
            return Err(format!("monomials have order 0 on the {n}-star"));
        }
    }
    Ok(())
}

/// Runs the whole corpus in a fixed order.
pub fn run_all() -> Vec<FixtureResult> {
    let checks: &[(&'static str, Check)] = &[
        ("scalar-arithmetic", scalar_arithmetic),
        ("bent-module-membership", bent_module_membership),
        ("bent-module-decomposition", bent_module_decomposition),
        ("bent-module-not-straight", bent_module_not_straight),
        ("minimal-basis-redundancy", minimal_basis_redundancy),
        ("residuation-projection", residuation_projection),
        ("lattice-minima-segment", lattice_minima_segment),
        ("dichotomy-diagonal-2x2", dichotomy_diagonal_2x2),
        ("dichotomy-off-diagonal-2x2", dichotomy_off_diagonal_2x2),
        ("power-stabilization", power_stabilization),
        ("projective-segment-vertices", projective_segment_vertices),
        ("loop-divisor-box", loop_divisor_box),
        ("theta-graph-module", theta_graph_module),
        ("line-skeleton", line_skeleton),
        ("grid-family-betti", grid_family_betti),
        ("tropicalization-line", tropicalization_line),
        ("star-orders", star_orders),
    ];
    checks
        .iter()
        .map(|(name, check)| FixtureResult {
            name,
            outcome: check(),
        })
        .collect()
}
