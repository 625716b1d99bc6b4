//! Tropical plane curves from bivariate Laurent polynomials: corner locus
//! membership, exact skeleton extraction, first Betti number, and the
//! tropicalization map from valued coefficients.

use num::bigint::BigInt;
use num::integer::Integer;
use num::rational::BigRational;
use num::traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::TropPolynomial;
use crate::scalar::TropScalar;
use crate::vector::TropVector;

/// A point of the real plane with exact rational coordinates.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct PlanePoint {
    pub x: BigRational,
    pub y: BigRational,
}

impl PlanePoint {
    pub fn new(x: BigRational, y: BigRational) -> Self {
        PlanePoint { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        PlanePoint::new(
            BigRational::from_integer(BigInt::from(x)),
            BigRational::from_integer(BigInt::from(y)),
        )
    }

    fn to_vector(&self) -> TropVector {
        TropVector::new(vec![
            TropScalar::from_rational(self.x.clone()),
            TropScalar::from_rational(self.y.clone()),
        ])
    }
}

/// A bounded edge of a skeleton, with the primitive integer direction
/// pointing from `ends.0` to `ends.1` and the lattice multiplicity of the
/// dual edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkelEdge {
    pub ends: (usize, usize),
    pub direction: (i64, i64),
    pub multiplicity: u64,
}

/// An unbounded edge: a base vertex and an outgoing primitive direction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkelRay {
    pub base: usize,
    pub direction: (i64, i64),
    pub multiplicity: u64,
}

/// The corner locus of a generic bivariate tropical polynomial, as an
/// embedded graph.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Skeleton {
    pub vertices: Vec<PlanePoint>,
    pub bounded_edges: Vec<SkelEdge>,
    pub rays: Vec<SkelRay>,
}

fn check_bivariate(f: &TropPolynomial) -> Result<Vec<(i64, i64, BigRational)>> {
    if f.nvars() != 2 {
        return Err(Error::DimensionMismatch {
            left: 2,
            right: f.nvars(),
        });
    }
    if f.is_empty() {
        return Err(Error::EmptyPolynomial);
    }
    Ok(f.terms()
        .map(|(exp, coeff)| {
            let r = coeff
                .as_rational()
                .expect("stored coefficients are finite")
                .clone();
            (exp[0], exp[1], r)
        })
        .collect())
}

/// Is `p` on the curve of `f`, i.e. is the maximum of the terms attained at
/// least twice there?
pub fn on_curve(f: &TropPolynomial, p: &PlanePoint) -> Result<bool> {
    if f.is_empty() {
        return Err(Error::EmptyPolynomial);
    }
    if f.nvars() != 2 {
        return Err(Error::DimensionMismatch {
            left: 2,
            right: f.nvars(),
        });
    }
    let (_, hits) = f.attaining(&p.to_vector())?;
    Ok(hits.len() >= 2)
}

fn term_value(t: &(i64, i64, BigRational), p: &PlanePoint) -> BigRational {
    &t.2 + BigRational::from_integer(BigInt::from(t.0)) * &p.x
        + BigRational::from_integer(BigInt::from(t.1)) * &p.y
}

fn attaining_count(terms: &[(i64, i64, BigRational)], p: &PlanePoint) -> (BigRational, usize) {
    let mut best: Option<BigRational> = None;
    let mut count = 0usize;
    for t in terms {
        let v = term_value(t, p);
        match &best {
            None => {
                best = Some(v);
                count = 1;
            }
            Some(b) => {
                if v > *b {
                    best = Some(v);
                    count = 1;
                } else if v == *b {
                    count += 1;
                }
            }
        }
    }
    (best.expect("at least one term"), count)
}

/// One clipped dominance interval of a two-term tie line.
struct Piece {
    lo: Option<BigRational>,
    hi: Option<BigRational>,
    base: PlanePoint,
    dir: (i64, i64),
    multiplicity: u64,
}

impl Piece {
    fn at(&self, s: &BigRational) -> PlanePoint {
        PlanePoint::new(
            &self.base.x + s * BigRational::from_integer(BigInt::from(self.dir.0)),
            &self.base.y + s * BigRational::from_integer(BigInt::from(self.dir.1)),
        )
    }
}

/// Computes the skeleton of the curve of `f`.
///
/// Vertices are the on-curve solutions of three-term ties; edges and rays
/// are two-term tie lines clipped to their dominance intervals. Inputs whose
/// tie structure is not locally one-dimensional are rejected: a third term
/// tying along a whole positive-length edge, an unbounded line with no
/// vertex to anchor it, or a vertex with fewer than three germs.
pub fn skeleton(f: &TropPolynomial) -> Result<Skeleton> {
    let terms = check_bivariate(f)?;
    let n = terms.len();
    if n == 1 {
        return Ok(Skeleton::default());
    }

    // candidate vertices from all consistent three-term ties
    let mut vertices: Vec<PlanePoint> = Vec::new();
    for s in 0..n {
        for t in s + 1..n {
            for u in t + 1..n {
                let a11 = BigInt::from(terms[s].0 - terms[t].0);
                let a12 = BigInt::from(terms[s].1 - terms[t].1);
                let b1 = &terms[t].2 - &terms[s].2;
                let a21 = BigInt::from(terms[s].0 - terms[u].0);
                let a22 = BigInt::from(terms[s].1 - terms[u].1);
                let b2 = &terms[u].2 - &terms[s].2;
                let det = &a11 * &a22 - &a12 * &a21;
                if det.is_zero() {
                    continue;
                }
                let det = BigRational::from_integer(det);
                let x = (&b1 * BigRational::from_integer(a22)
                    - &b2 * BigRational::from_integer(a12))
                    / &det;
                let y = (&b2 * BigRational::from_integer(a11)
                    - &b1 * BigRational::from_integer(a21))
                    / &det;
                let p = PlanePoint::new(x, y);
                let (best, _) = attaining_count(&terms, &p);
                if best == term_value(&terms[s], &p) && !vertices.contains(&p) {
                    vertices.push(p);
                }
            }
        }
    }
    vertices.sort();

    // clipped dominance intervals of every two-term tie line
    let mut pieces: Vec<Piece> = Vec::new();
    for s in 0..n {
        for t in s + 1..n {
            let di = terms[s].0 - terms[t].0;
            let dj = terms[s].1 - terms[t].1;
            // base point of the line di*x + dj*y = c_t - c_s
            let rhs = &terms[t].2 - &terms[s].2;
            let base = if di != 0 {
                PlanePoint::new(
                    rhs.clone() / BigRational::from_integer(BigInt::from(di)),
                    BigRational::zero(),
                )
            } else {
                PlanePoint::new(
                    BigRational::zero(),
                    rhs.clone() / BigRational::from_integer(BigInt::from(dj)),
                )
            };
            let g = BigInt::from(di.unsigned_abs()).gcd(&BigInt::from(dj.unsigned_abs()));
            let g_i64: i64 = g.clone().try_into().expect("small exponents");
            let mut dir = (-dj / g_i64, di / g_i64);
            if dir.0 < 0 || (dir.0 == 0 && dir.1 < 0) {
                dir = (-dir.0, -dir.1);
            }
            let piece_probe = Piece {
                lo: None,
                hi: None,
                base: base.clone(),
                dir,
                multiplicity: g_i64 as u64,
            };

            let mut lo: Option<BigRational> = None;
            let mut hi: Option<BigRational> = None;
            let mut empty = false;
            let mut cotier: Option<usize> = None;
            for (u, term) in terms.iter().enumerate() {
                if u == s || u == t {
                    continue;
                }
                // value difference along the line is affine: a + b*s
                let a = term_value(term, &base) - term_value(&terms[s], &base);
                let b = BigInt::from(dir.0) * BigInt::from(term.0 - terms[s].0)
                    + BigInt::from(dir.1) * BigInt::from(term.1 - terms[s].1);
                if b.is_zero() {
                    if a.is_positive() {
                        empty = true;
                        break;
                    }
                    if a.is_zero() {
                        cotier = Some(u);
                    }
                    continue;
                }
                let bound = -a / BigRational::from_integer(b.clone());
                if b.is_positive() {
                    hi = Some(match hi {
                        None => bound,
                        Some(h) => {
                            if bound < h {
                                bound
                            } else {
                                h
                            }
                        }
                    });
                } else {
                    lo = Some(match lo {
                        None => bound,
                        Some(l) => {
                            if bound > l {
                                bound
                            } else {
                                l
                            }
                        }
                    });
                }
            }
            if empty {
                continue;
            }
            if let (Some(l), Some(h)) = (&lo, &hi) {
                if l > h {
                    continue;
                }
                if l == h {
                    // the pair dominates at a single point, handled as a vertex
                    continue;
                }
            }
            if let Some(u) = cotier {
                return Err(Error::DegenerateCurve(format!(
                    "terms {:?}, {:?} and {:?} tie along a whole edge",
                    (terms[s].0, terms[s].1),
                    (terms[t].0, terms[t].1),
                    (terms[u].0, terms[u].1),
                )));
            }
            if lo.is_none() && hi.is_none() {
                return Err(Error::DegenerateCurve(format!(
                    "the tie of terms {:?} and {:?} is an unbounded line with no vertex",
                    (terms[s].0, terms[s].1),
                    (terms[t].0, terms[t].1),
                )));
            }
            pieces.push(Piece {
                lo,
                hi,
                ..piece_probe
            });
        }
    }

    // assemble: map piece endpoints to vertex indices
    let find_vertex = |p: &PlanePoint| -> Result<usize> {
        vertices.iter().position(|v| v == p).ok_or_else(|| {
            Error::InternalVerificationFailed(format!(
                "edge endpoint ({}, {}) is not a recognized vertex",
                p.x, p.y
            ))
        })
    };
    let mut bounded_edges: Vec<SkelEdge> = Vec::new();
    let mut rays: Vec<SkelRay> = Vec::new();
    for piece in &pieces {
        match (&piece.lo, &piece.hi) {
            (Some(l), Some(h)) => {
                let a = find_vertex(&piece.at(l))?;
                let b = find_vertex(&piece.at(h))?;
                let (ends, direction) = if a <= b {
                    ((a, b), piece.dir)
                } else {
                    ((b, a), (-piece.dir.0, -piece.dir.1))
                };
                bounded_edges.push(SkelEdge {
                    ends,
                    direction,
                    multiplicity: piece.multiplicity,
                });
            }
            (Some(l), None) => {
                let a = find_vertex(&piece.at(l))?;
                rays.push(SkelRay {
                    base: a,
                    direction: piece.dir,
                    multiplicity: piece.multiplicity,
                });
            }
            (None, Some(h)) => {
                let a = find_vertex(&piece.at(h))?;
                rays.push(SkelRay {
                    base: a,
                    direction: (-piece.dir.0, -piece.dir.1),
                    multiplicity: piece.multiplicity,
                });
            }
            (None, None) => unreachable!("unbounded lines were rejected above"),
        }
    }

    // self-checks: every vertex has at least three germs, every emitted
    // sample point really lies on the curve, every edge interior carries
    // exactly two attaining terms
    let mut germs = vec![0usize; vertices.len()];
    for e in &bounded_edges {
        germs[e.ends.0] += 1;
        germs[e.ends.1] += 1;
    }
    for r in &rays {
        germs[r.base] += 1;
    }
    for (v, g) in germs.iter().enumerate() {
        if *g < 3 {
            return Err(Error::DegenerateCurve(format!(
                "vertex ({}, {}) has only {g} germs",
                vertices[v].x, vertices[v].y
            )));
        }
    }
    let poly_probe = f;
    for piece in &pieces {
        let sample = match (&piece.lo, &piece.hi) {
            (Some(l), Some(h)) => piece.at(&((l + h) / BigRational::from_integer(2.into()))),
            (Some(l), None) => piece.at(&(l + BigRational::from_integer(1.into()))),
            (None, Some(h)) => piece.at(&(h - BigRational::from_integer(1.into()))),
            (None, None) => unreachable!(),
        };
        if !on_curve(poly_probe, &sample)? {
            return Err(Error::InternalVerificationFailed(
                "edge sample point is off the curve".into(),
            ));
        }
        let (_, count) = attaining_count(&terms, &sample);
        if count != 2 {
            return Err(Error::DegenerateCurve(format!(
                "{count} terms attain the maximum inside an edge"
            )));
        }
    }
    for v in &vertices {
        if !on_curve(poly_probe, v)? {
            return Err(Error::InternalVerificationFailed(
                "vertex is off the curve".into(),
            ));
        }
    }

    bounded_edges.sort_by_key(|e| (e.ends, e.direction));
    rays.sort_by_key(|r| (r.base, r.direction));
    Ok(Skeleton {
        vertices,
        bounded_edges,
        rays,
    })
}

/// First Betti number of the skeleton: bounded edges minus vertices plus
/// connected components. Rays are contractible and ignored; a disconnected
/// skeleton gets the cycle rank of the whole graph.
pub fn betti1(sk: &Skeleton) -> usize {
    let n = sk.vertices.len();
    if n == 0 {
        return 0;
    }
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, x: usize) -> usize {
        if parent[x] != x {
            let root = find(parent, parent[x]);
            parent[x] = root;
        }
        parent[x]
    }
    for e in &sk.bounded_edges {
        let a = find(&mut parent, e.ends.0);
        let b = find(&mut parent, e.ends.1);
        if a != b {
            parent[a] = b;
        }
    }
    let mut roots: Vec<usize> = (0..n).map(|v| find(&mut parent, v)).collect();
    roots.sort_unstable();
    roots.dedup();
    let components = roots.len();
    sk.bounded_edges.len() + components - n
}

/// Tropicalization of a polynomial with valued coefficients: the
/// coefficient of the monomial `(i, j)` is minus the valuation of `c_ij`.
pub fn tropicalize(terms: &[((i64, i64), BigRational)]) -> Result<TropPolynomial> {
    let mut seen: Vec<(i64, i64)> = Vec::new();
    for ((i, j), _) in terms {
        if seen.contains(&(*i, *j)) {
            return Err(Error::DuplicateExponent(vec![*i, *j]));
        }
        seen.push((*i, *j));
    }
    Ok(TropPolynomial::new(
        2,
        terms
            .iter()
            .map(|((i, j), val)| (vec![*i, *j], TropScalar::from_rational(-val))),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line() -> TropPolynomial {
        TropPolynomial::new(
            2,
            [
                (vec![0, 0], TropScalar::int(0)),
                (vec![1, 0], TropScalar::int(0)),
                (vec![0, 1], TropScalar::int(0)),
            ],
        )
    }

    /// 1-variable chain with strictly concave coefficients 0, 2, 3, ...
    fn concave_chain(var: usize, degree: usize) -> TropPolynomial {
        // coefficients c_k = k * (2 * degree - k + 1) / 2 are strictly concave
        TropPolynomial::new(
            2,
            (0..=degree).map(|k| {
                let k = k as i64;
                let d = degree as i64;
                let mut exp = vec![0, 0];
                exp[var] = k;
                (exp, TropScalar::ratio(k * (2 * d - k + 1), 2))
            }),
        )
    }

    #[test]
    fn on_curve_examples() {
        let f = line();
        assert!(on_curve(&f, &PlanePoint::from_ints(0, 0)).unwrap());
        assert!(!on_curve(&f, &PlanePoint::from_ints(-5, -7)).unwrap());
        // one ray of the line: x = 0, y < 0
        assert!(on_curve(&f, &PlanePoint::from_ints(0, -3)).unwrap());
        let mono = TropPolynomial::monomial(2, vec![2, 1], TropScalar::int(1));
        assert!(!on_curve(&mono, &PlanePoint::from_ints(0, 0)).unwrap());
        let empty = TropPolynomial::new(2, []);
        assert!(matches!(
            on_curve(&empty, &PlanePoint::from_ints(0, 0)),
            Err(Error::EmptyPolynomial)
        ));
    }

    #[test]
    fn line_skeleton() {
        let sk = skeleton(&line()).unwrap();
        assert_eq!(sk.vertices, vec![PlanePoint::from_ints(0, 0)]);
        assert!(sk.bounded_edges.is_empty());
        let mut dirs: Vec<(i64, i64)> = sk.rays.iter().map(|r| r.direction).collect();
        dirs.sort();
        assert_eq!(dirs, vec![(-1, 0), (0, -1), (1, 1)]);
        assert_eq!(betti1(&sk), 0);
    }

    #[test]
    fn single_monomial_skeleton_is_empty() {
        let mono = TropPolynomial::monomial(2, vec![3, -1], TropScalar::int(2));
        let sk = skeleton(&mono).unwrap();
        assert!(sk.vertices.is_empty() && sk.rays.is_empty() && sk.bounded_edges.is_empty());
        assert_eq!(betti1(&sk), 0);
    }

    #[test]
    fn product_family_betti_numbers() {
        for (r, s, expected) in [(2usize, 2usize, 1usize), (2, 3, 2), (3, 3, 4)] {
            let f = concave_chain(0, r).product(&concave_chain(1, s));
            let sk = skeleton(&f).unwrap();
            assert_eq!(sk.vertices.len(), r * s, "grid vertices for ({r},{s})");
            assert_eq!(betti1(&sk), expected, "betti for ({r},{s})");
        }
    }

    #[test]
    fn balancing_at_every_vertex() {
        for f in [line(), concave_chain(0, 2).product(&concave_chain(1, 2))] {
            let sk = skeleton(&f).unwrap();
            let mut sums = vec![(0i64, 0i64); sk.vertices.len()];
            for e in &sk.bounded_edges {
                let m = e.multiplicity as i64;
                sums[e.ends.0].0 += m * e.direction.0;
                sums[e.ends.0].1 += m * e.direction.1;
                sums[e.ends.1].0 -= m * e.direction.0;
                sums[e.ends.1].1 -= m * e.direction.1;
            }
            for r in &sk.rays {
                let m = r.multiplicity as i64;
                sums[r.base].0 += m * r.direction.0;
                sums[r.base].1 += m * r.direction.1;
            }
            assert!(
                sums.iter().all(|&(a, b)| a == 0 && b == 0),
                "unbalanced vertex in {sums:?}"
            );
        }
    }

    #[test]
    fn degenerate_inputs_are_rejected() {
        // two terms: a full line with no vertex
        let two = TropPolynomial::new(
            2,
            [
                (vec![0, 0], TropScalar::int(0)),
                (vec![1, 0], TropScalar::int(0)),
            ],
        );
        assert!(matches!(skeleton(&two), Err(Error::DegenerateCurve(_))));

        // flat coefficients: three collinear exponents tying along one line
        let flat = TropPolynomial::new(
            2,
            [
                (vec![0, 0], TropScalar::int(0)),
                (vec![1, 0], TropScalar::int(1)),
                (vec![2, 0], TropScalar::int(2)),
            ],
        );
        assert!(matches!(skeleton(&flat), Err(Error::DegenerateCurve(_))));
    }

    #[test]
    fn tropicalize_examples() {
        // unit coefficients (valuation 0) give the tropical line
        let f = tropicalize(&[
            ((0, 0), BigRational::zero()),
            ((1, 0), BigRational::zero()),
            ((0, 1), BigRational::zero()),
        ])
        .unwrap();
        assert_eq!(f, line());

        // val(t^a) = -a: a coefficient t^3 becomes the tropical coefficient 3
        let g = tropicalize(&[((1, 0), BigRational::from_integer((-3).into()))]).unwrap();
        let (exp, coeff) = g.terms().next().unwrap();
        assert_eq!(exp, &vec![1, 0]);
        assert_eq!(coeff, &TropScalar::int(3));

        assert!(matches!(
            tropicalize(&[
                ((0, 0), BigRational::zero()),
                ((0, 0), BigRational::from_integer(1.into()))
            ]),
            Err(Error::DuplicateExponent(_))
        ));
    }

    #[test]
    fn off_skeleton_points_fail_membership() {
        let f = concave_chain(0, 2).product(&concave_chain(1, 2));
        let sk = skeleton(&f).unwrap();
        // cell interiors are off the curve
        for p in [
            PlanePoint::from_ints(-100, -100),
            PlanePoint::from_ints(100, 100),
        ] {
            assert!(!on_curve(&f, &p).unwrap());
        }
        // every vertex is on it
        for v in &sk.vertices {
            assert!(on_curve(&f, v).unwrap());
        }
    }
}
