//! Tropical projective polytopes: hulls, polytrope detection, vertex
//! reduction, and defining inequality extraction.

use crate::error::{Error, Result};
use crate::module::{CMatrix, Submodule};
use crate::vector::TropVector;

/// A point of tropical projective space, stored as the canonical
/// representative whose first finite coordinate is 0. Equality of points is
/// equality of canonical representatives.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ProjPoint {
    rep: TropVector,
}

impl ProjPoint {
    pub fn new(rep: TropVector) -> Result<Self> {
        if rep.is_bottom() {
            return Err(Error::NotInteriorVector { index: 0 });
        }
        let first = rep
            .coords()
            .iter()
            .find(|c| c.is_finite())
            .expect("non-bottom vector has a finite coordinate")
            .clone();
        let scaled = TropVector::new(
            rep.coords()
                .iter()
                .map(|c| c.div(&first).expect("first finite coordinate"))
                .collect(),
        );
        Ok(ProjPoint { rep: scaled })
    }

    /// The canonical representative in T^{n+1}.
    pub fn rep(&self) -> &TropVector {
        &self.rep
    }

    /// Projective dimension n (representatives live in T^{n+1}).
    pub fn dim(&self) -> usize {
        self.rep.len() - 1
    }

    pub fn is_finite(&self) -> bool {
        self.rep.all_finite()
    }
}

/// The tropically convex hull of finitely many projective points, carried
/// together with the cone module of all representatives.
#[derive(Debug, Clone)]
pub struct Polytope {
    points: Vec<ProjPoint>,
    module: Submodule,
}

/// Certificate returned by [`Polytope::polytrope_check`].
#[derive(Debug, Clone)]
pub struct PolytropeCheck {
    pub is_polytrope: bool,
    /// Coordinate minima of the cone module (the vertex representatives on
    /// success).
    pub minima: Vec<TropVector>,
    pub failing: Option<usize>,
}

impl Polytope {
    /// Builds the hull of the given points; all must share one projective
    /// dimension.
    pub fn hull(points: Vec<ProjPoint>) -> Result<Self> {
        let Some(first) = points.first() else {
            return Err(Error::EmptyGenerators);
        };
        let dim = first.dim();
        for p in &points {
            if p.dim() != dim {
                return Err(Error::DimensionMismatch {
                    left: dim,
                    right: p.dim(),
                });
            }
        }
        let module = Submodule::new(dim + 1, points.iter().map(|p| p.rep().clone()).collect())?;
        Ok(Polytope { points, module })
    }

    pub fn dim(&self) -> usize {
        self.module.ambient_dim() - 1
    }

    pub fn points(&self) -> &[ProjPoint] {
        &self.points
    }

    /// The cone `φ^{-1}(P) ∪ {⊥}` in T^{n+1}.
    pub fn module(&self) -> &Submodule {
        &self.module
    }

    /// Projective membership: representative membership in the cone module.
    pub fn contains_point(&self, p: &ProjPoint) -> Result<bool> {
        if p.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: p.dim(),
            });
        }
        self.module.contains(p.rep())
    }

    /// Decides whether the polytope is also ordinarily convex, by the exact
    /// lattice-preservation test on the cone module. Requires fully finite
    /// points.
    pub fn polytrope_check(&self) -> Result<PolytropeCheck> {
        for (index, p) in self.points.iter().enumerate() {
            if !p.is_finite() {
                return Err(Error::NotFinitePoints { index });
            }
        }
        let check = self.module.lattice_check()?;
        Ok(PolytropeCheck {
            is_polytrope: check.preserving,
            minima: check.minima,
            failing: check.failing,
        })
    }

    /// The at most n+1 vertices of a polytrope: the coordinate minima of the
    /// cone module, projectivized and deduplicated. Their hull re-spans the
    /// polytope.
    pub fn polytrope_vertices(&self) -> Result<Vec<ProjPoint>> {
        let check = self.polytrope_check()?;
        if !check.is_polytrope {
            return Err(Error::NotPolytrope);
        }
        let mut vertices: Vec<ProjPoint> = Vec::new();
        for v in &check.minima {
            let p = ProjPoint::new(v.clone())?;
            if !vertices.contains(&p) {
                vertices.push(p);
            }
        }
        vertices.sort();
        Ok(vertices)
    }

    /// The inequality description `x_j >= x_i - c[i][j]` of the cone module
    /// of a polytrope. A sampled representative satisfies every constraint
    /// iff the projective point lies in the polytope.
    pub fn defining_inequalities(&self) -> Result<CMatrix> {
        let check = self.polytrope_check()?;
        if !check.is_polytrope {
            return Err(Error::NotPolytrope);
        }
        Ok(self.module.section_map()?.constraints)
    }
}
