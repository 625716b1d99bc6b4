//! Shared generators and independent oracles for the integration suites.
#![allow(dead_code)]

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use maxplus::curve::pwl::EdgePwl;
use maxplus::curve::{CurvePoint, Edge, MetricGraph, RationalFunction};
use maxplus::{Submodule, TropMatrix, TropScalar, TropVector};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn ri(p: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(p))
}

pub fn rq(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// Random scalar from the half-integer grid [-bound, bound], `-inf` with
/// the given probability.
pub fn random_scalar(rng: &mut ChaCha8Rng, bound: i64, neg_inf_prob: f64) -> TropScalar {
    if rng.gen_bool(neg_inf_prob) {
        TropScalar::NegInf
    } else {
        TropScalar::ratio(rng.gen_range(-2 * bound..=2 * bound), 2)
    }
}

pub fn random_vector(rng: &mut ChaCha8Rng, n: usize, bound: i64, neg_inf_prob: f64) -> TropVector {
    TropVector::new(
        (0..n)
            .map(|_| random_scalar(rng, bound, neg_inf_prob))
            .collect(),
    )
}

pub fn random_matrix(rng: &mut ChaCha8Rng, n: usize, bound: i64, neg_inf_prob: f64) -> TropMatrix {
    TropMatrix::new(
        (0..n)
            .map(|_| {
                (0..n)
                    .map(|_| random_scalar(rng, bound, neg_inf_prob))
                    .collect()
            })
            .collect(),
    )
    .expect("square")
}

/// A random tropical combination of the generators with finite half-integer
/// coefficients; always a module member.
pub fn random_member(rng: &mut ChaCha8Rng, m: &Submodule, bound: i64) -> TropVector {
    let mut acc = TropVector::bottom(m.ambient_dim());
    for g in m.generators() {
        if rng.gen_bool(0.3) {
            continue;
        }
        let a = TropScalar::ratio(rng.gen_range(-2 * bound..=2 * bound), 2);
        acc = acc.join(&g.scale(&a)).unwrap();
    }
    if acc.is_bottom() {
        // keep at least one generator so the sample is interesting
        let g = &m.generators()[rng.gen_range(0..m.generators().len())];
        acc = g.clone();
    }
    acc
}

/// Exhaustive membership by coefficient search over `grid ∪ {-inf}`, with
/// pruning of partial joins that already exceed the target. Independent of
/// the residuation path.
pub fn grid_search_member(gens: &[TropVector], v: &TropVector, grid: &[TropScalar]) -> bool {
    fn rec(
        gens: &[TropVector],
        v: &TropVector,
        grid: &[TropScalar],
        idx: usize,
        acc: &TropVector,
    ) -> bool {
        if idx == gens.len() {
            return acc == v;
        }
        // skipping the generator = coefficient -inf
        if rec(gens, v, grid, idx + 1, acc) {
            return true;
        }
        for a in grid {
            let scaled = gens[idx].scale(a);
            if !scaled.leq(v).unwrap() {
                continue;
            }
            let joined = acc.join(&scaled).unwrap();
            if rec(gens, v, grid, idx + 1, &joined) {
                return true;
            }
        }
        false
    }
    rec(gens, v, grid, 0, &TropVector::bottom(v.len()))
}

/// The half-integer coefficient grid [-4, 4].
pub fn coefficient_grid() -> Vec<TropScalar> {
    (-8..=8).map(|p| TropScalar::ratio(p, 2)).collect()
}

/// Exact maximum-weight perfect assignment via the Hungarian algorithm with
/// potentials, run over the rationals with a big-M substitute for forbidden
/// (`-inf`) entries. Returns `-inf` when no fully finite assignment exists.
pub fn hungarian_assignment(a: &TropMatrix) -> TropScalar {
    let n = a.order();
    let mut max_abs = BigRational::zero();
    for i in 0..n {
        for j in 0..n {
            if let Some(r) = a.entry(i, j).as_rational() {
                if r.abs() > max_abs {
                    max_abs = r.abs();
                }
            }
        }
    }
    let big = ri(1) + ri(2 * n as i64) * &max_abs;
    // minimize cost = -weight, with forbidden entries at +big
    let cost: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| match a.entry(i, j).as_rational() {
                    Some(r) => -r,
                    None => big.clone(),
                })
                .collect()
        })
        .collect();

    let inf = &big * ri(4 * n as i64 + 4) + ri(1);
    let mut u = vec![BigRational::zero(); n + 1];
    let mut v = vec![BigRational::zero(); n + 1];
    let mut p = vec![n; n + 1]; // p[j] = row matched to column j, n = free
    let mut way = vec![0usize; n + 1];
    for i in 0..n {
        p[n] = i;
        let mut j0 = n;
        let mut minv = vec![inf.clone(); n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = inf.clone();
            let mut j1 = n;
            for j in 0..n {
                if used[j] {
                    continue;
                }
                let cur = &cost[i0][j] - &u[i0] - &v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j].clone();
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    let row = p[j];
                    u[row] = &u[row] + &delta;
                    v[j] = &v[j] - &delta;
                } else {
                    minv[j] = &minv[j] - &delta;
                }
            }
            j0 = j1;
            if p[j0] == n {
                break;
            }
        }
        // augment along the alternating path
        while j0 != n {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        }
    }
    let total: BigRational = (0..n).map(|j| cost[p[j]][j].clone()).sum();
    // any assignment through a forbidden entry costs at least big - n*max_abs
    if total > ri(n as i64) * &max_abs {
        TropScalar::NegInf
    } else {
        TropScalar::from_rational(-total)
    }
}

/// Ordinary midpoint of two fully finite vectors.
pub fn midpoint(x: &TropVector, y: &TropVector) -> TropVector {
    TropVector::new(
        x.coords()
            .iter()
            .zip(y.coords())
            .map(|(a, b)| {
                TropScalar::from_rational(
                    (a.as_rational().unwrap() + b.as_rational().unwrap()) / ri(2),
                )
            })
            .collect(),
    )
}

/// Sampling refutation of ordinary convexity: hunts for two module points
/// whose midpoint leaves the module, bisecting a few levels and trying
/// generator pairs first. Sound when it reports a violation; silence is not
/// a proof.
pub fn convexity_violation(
    m: &Submodule,
    rng: &mut ChaCha8Rng,
    random_pairs: usize,
) -> Option<TropVector> {
    fn search(m: &Submodule, x: &TropVector, y: &TropVector, depth: usize) -> Option<TropVector> {
        let mid = midpoint(x, y);
        if !m.contains(&mid).unwrap() {
            return Some(mid);
        }
        if depth == 0 {
            return None;
        }
        search(m, x, &mid, depth - 1).or_else(|| search(m, &mid, y, depth - 1))
    }
    let gens = m.generators();
    for i in 0..gens.len() {
        for j in i + 1..gens.len() {
            if let Some(w) = search(m, &gens[i], &gens[j], 2) {
                return Some(w);
            }
        }
    }
    for _ in 0..random_pairs {
        let x = random_member(rng, m, 3);
        let y = random_member(rng, m, 3);
        if !x.all_finite() || !y.all_finite() {
            continue;
        }
        if let Some(w) = search(m, &x, &y, 2) {
            return Some(w);
        }
    }
    None
}

/// A random polytrope cone in T^n: the span of the rows of the min-plus
/// transitive closure of a random consistent constraint matrix (negated).
/// All generators are finite and the module preserves infima by
/// construction.
pub fn random_polytrope_module(rng: &mut ChaCha8Rng, n: usize) -> Submodule {
    loop {
        let mut c: Vec<Vec<BigRational>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            ri(0)
                        } else {
                            rq(rng.gen_range(-4..=4), 2)
                        }
                    })
                    .collect()
            })
            .collect();
        // min-plus closure
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let via = &c[i][k] + &c[k][j];
                    if via < c[i][j] {
                        c[i][j] = via;
                    }
                }
            }
        }
        if (0..n).any(|i| c[i][i].is_negative()) {
            continue;
        }
        let gens: Vec<TropVector> = (0..n)
            .map(|i| {
                TropVector::new(
                    (0..n)
                        .map(|j| TropScalar::from_rational(-&c[i][j]))
                        .collect(),
                )
            })
            .collect();
        return Submodule::new(n, gens).unwrap();
    }
}

/// Tightens the constraints of a polytrope module, producing a random
/// lattice-preserving submodule of it. Each tightening stays within the
/// two-sided cycle slack `c[i][j] + c[j][i]`, so no negative cycle can
/// appear and the closure stays consistent.
pub fn random_nested_polytrope(
    rng: &mut ChaCha8Rng,
    outer_constraints: &[Vec<BigRational>],
) -> Submodule {
    let n = outer_constraints.len();
    let mut c: Vec<Vec<BigRational>> = outer_constraints.to_vec();
    let close = |c: &mut Vec<Vec<BigRational>>| {
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let via = &c[i][k] + &c[k][j];
                    if via < c[i][j] {
                        c[i][j] = via;
                    }
                }
            }
        }
    };
    close(&mut c);
    for _ in 0..2 * n {
        let i = rng.gen_range(0..n);
        let j = rng.gen_range(0..n);
        if i == j {
            continue;
        }
        let slack = &c[i][j] + &c[j][i];
        if slack.is_positive() {
            c[i][j] = &c[i][j] - slack * rq(rng.gen_range(1..=2), 4);
            close(&mut c);
        }
    }
    let gens: Vec<TropVector> = (0..n)
        .map(|i| {
            TropVector::new(
                (0..n)
                    .map(|j| TropScalar::from_rational(-&c[i][j]))
                    .collect(),
            )
        })
        .collect();
    Submodule::new(n, gens).unwrap()
}

/// The closure constraint matrix of a polytrope module (for nesting).
pub fn polytrope_constraints(m: &Submodule) -> Vec<Vec<BigRational>> {
    let n = m.ambient_dim();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    m.generators()
                        .iter()
                        .map(|g| g[i].as_rational().unwrap() - g[j].as_rational().unwrap())
                        .max()
                        .unwrap()
                })
                .collect()
        })
        .collect()
}

/// Membership in the scaled box `T ⊙ { w : v <= w <= ε ⊙ v }` by the closed
/// form: the spread of `x - v` is at most ε.
pub fn in_scaled_box(v: &TropVector, eps: &TropScalar, x: &TropVector) -> bool {
    if x.is_bottom() {
        return true;
    }
    if !x.all_finite() {
        return false;
    }
    let diffs: Vec<BigRational> = x
        .coords()
        .iter()
        .zip(v.coords())
        .map(|(a, b)| a.as_rational().unwrap() - b.as_rational().unwrap())
        .collect();
    let max = diffs.iter().max().unwrap();
    let min = diffs.iter().min().unwrap();
    TropScalar::from_rational(max - min) <= *eps
}

/// Cycle rank of an abstract multigraph by Gaussian elimination of the
/// vertex-edge incidence matrix over GF(2); loops contribute zero columns.
pub fn cycle_rank_gf2(n_vertices: usize, edges: &[(usize, usize)]) -> usize {
    let mut columns: Vec<Vec<bool>> = edges
        .iter()
        .map(|&(u, v)| {
            let mut col = vec![false; n_vertices];
            if u != v {
                col[u] = true;
                col[v] = true;
            }
            col
        })
        .collect();
    let mut rank = 0usize;
    for row in 0..n_vertices {
        let Some(pivot) = (rank..columns.len()).find(|&c| columns[c][row]) else {
            continue;
        };
        columns.swap(rank, pivot);
        let pivot_col = columns[rank].clone();
        for (c, col) in columns.iter_mut().enumerate() {
            if c != rank && col[row] {
                for (dst, src) in col.iter_mut().zip(&pivot_col) {
                    *dst ^= src;
                }
            }
        }
        rank += 1;
        if rank == columns.len() {
            break;
        }
    }
    edges.len() - rank
}

/// A random connected compact metric graph with up to 4 vertices,
/// loops and multi-edges allowed.
pub fn random_compact_graph(rng: &mut ChaCha8Rng) -> MetricGraph {
    let nv = rng.gen_range(1..=4usize);
    let mut edges = Vec::new();
    for i in 1..nv {
        edges.push(Edge::Segment {
            ends: (rng.gen_range(0..i), i),
            len: rq(rng.gen_range(1..=6), 2),
        });
    }
    let extra = rng.gen_range(if nv == 1 { 1 } else { 0 }..=2);
    for _ in 0..extra {
        edges.push(Edge::Segment {
            ends: (rng.gen_range(0..nv), rng.gen_range(0..nv)),
            len: rq(rng.gen_range(1..=6), 2),
        });
    }
    if edges.is_empty() {
        edges.push(Edge::Segment {
            ends: (0, 0),
            len: ri(1),
        });
    }
    MetricGraph::new(nv, edges).unwrap()
}

/// A random continuous piecewise-linear function with integer slopes on the
/// graph: random vertex values joined by one- or two-segment paths.
pub fn random_function(rng: &mut ChaCha8Rng, graph: &MetricGraph) -> RationalFunction {
    let values: Vec<BigRational> = (0..graph.n_vertices())
        .map(|_| rq(rng.gen_range(-6..=6), 2))
        .collect();
    let edges = graph
        .edges()
        .iter()
        .map(|e| {
            let Edge::Segment { ends: (u, v), len } = e else {
                panic!("random functions are built on compact graphs");
            };
            let delta = &values[*v] - &values[*u];
            let lower = (&delta / len).floor();
            if &lower * len == delta {
                EdgePwl::from_controls(&[
                    (ri(0), values[*u].clone()),
                    (len.clone(), values[*v].clone()),
                ])
            } else {
                let upper = &lower + ri(1);
                // slope `upper` for x, then `lower`: upper*x + lower*(len-x) = delta
                let x = &delta - &lower * len;
                let mid_val = &values[*u] + &upper * &x;
                EdgePwl::from_controls(&[
                    (ri(0), values[*u].clone()),
                    (x, mid_val),
                    (len.clone(), values[*v].clone()),
                ])
            }
        })
        .collect();
    RationalFunction::new(graph, edges).expect("constructed data is continuous with integer slopes")
}

/// A richer random function: join and product of a few basic ones.
pub fn random_rich_function(rng: &mut ChaCha8Rng, graph: &MetricGraph) -> RationalFunction {
    let mut f = random_function(rng, graph);
    if rng.gen_bool(0.5) {
        let shift = TropScalar::ratio(rng.gen_range(-2..=2), 2);
        f = f.join(&random_function(rng, graph).scale(&shift));
    }
    if rng.gen_bool(0.3) {
        f = f.product(&random_function(rng, graph));
    }
    f
}

/// Random points of the graph: vertices and interior edge points.
pub fn random_point(rng: &mut ChaCha8Rng, graph: &MetricGraph) -> CurvePoint {
    if rng.gen_bool(0.4) {
        CurvePoint::Vertex(rng.gen_range(0..graph.n_vertices()))
    } else {
        let e = rng.gen_range(0..graph.edges().len());
        let Edge::Segment { len, .. } = &graph.edges()[e] else {
            return CurvePoint::Vertex(0);
        };
        // a dyadic fraction strictly inside the edge
        let k = rng.gen_range(1..=7);
        CurvePoint::interior(e, len * rq(k, 8))
    }
}
