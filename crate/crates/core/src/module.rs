//! Finitely generated submodules of T^n: membership by residuation,
//! canonical projection, minimal generating sets, dual evaluations,
//! inversions, and the lattice-preservation test battery.

use num::rational::BigRational;

use crate::error::{Error, Result};
use crate::scalar::TropScalar;
use crate::vector::TropVector;

/// A finitely generated submodule of T^n, held as a generator list.
/// Bottom generators are pruned at construction; a list consisting only of
/// bottom vectors denotes the zero module `{⊥}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Submodule {
    ambient: usize,
    generators: Vec<TropVector>,
}

/// Largest scalar `a` with `a ⊙ gen <= v`, i.e. the residual of `v` by one
/// generator: the min of `v_i - gen_i` over the finite coordinates of `gen`.
fn resid_coeff(gen: &TropVector, v: &TropVector) -> TropScalar {
    let mut lam: Option<TropScalar> = None;
    for i in 0..gen.len() {
        let Some(g) = gen[i].as_rational() else {
            continue;
        };
        let cand = v[i].minus_rat(g);
        lam = Some(match lam {
            None => cand,
            Some(cur) => {
                if cand < cur {
                    cand
                } else {
                    cur
                }
            }
        });
    }
    // a bottom generator scales below anything only by -inf
    lam.unwrap_or(TropScalar::NegInf)
}

/// Greatest element of `span(gens)` below `v`.
fn project_on(gens: &[TropVector], v: &TropVector) -> TropVector {
    let mut acc = TropVector::bottom(v.len());
    for g in gens {
        let lam = resid_coeff(g, v);
        acc = acc.join(&g.scale(&lam)).expect("equal lengths");
    }
    acc
}

/// Certificate returned by [`Submodule::lattice_check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeCheck {
    pub preserving: bool,
    /// Candidate minimum of `M ∩ {x_i = 0}` for each coordinate `i`. On a
    /// preserving module these are exactly the coordinate minima.
    pub minima: Vec<TropVector>,
    /// First coordinate whose candidate fails membership, when not preserving.
    pub failing: Option<usize>,
}

/// One entry of a constraint matrix: either a finite bound or "no constraint".
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Bound {
    Finite(BigRational),
    Unbounded,
}

/// The inequality description `x_j >= x_i - c[i][j]` of a lattice-preserving
/// module. `Unbounded` entries impose nothing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CMatrix {
    pub n: usize,
    pub entries: Vec<Vec<Bound>>,
}

impl CMatrix {
    /// Does `x` satisfy every constraint `x_j >= x_i - c[i][j]`?
    pub fn satisfied_by(&self, x: &TropVector) -> Result<bool> {
        if x.len() != self.n {
            return Err(Error::LengthMismatch {
                left: self.n,
                right: x.len(),
            });
        }
        for i in 0..self.n {
            let Some(xi) = x[i].as_rational() else {
                continue;
            };
            for j in 0..self.n {
                let Bound::Finite(c) = &self.entries[i][j] else {
                    continue;
                };
                let lower = xi - c;
                match x[j].as_rational() {
                    None => return Ok(false),
                    Some(xj) => {
                        if *xj < lower {
                            return Ok(false);
                        }
                    }
                }
            }
        }
        Ok(true)
    }
}

/// Result of [`Submodule::section_map`]: for each coordinate the basis
/// element generating the ray of the coordinate minimum, plus the derived
/// inequality matrix.
#[derive(Debug, Clone)]
pub struct SectionMap {
    /// The minimal basis the assignment refers to.
    pub basis: Vec<TropVector>,
    /// `assignment[i]` is the basis index whose ray carries the minimum of
    /// `M ∩ {x_i = 0}`.
    pub assignment: Vec<usize>,
    pub constraints: CMatrix,
}

#[derive(Debug, Clone)]
pub struct StraightnessViolation {
    pub triple: (TropVector, TropVector, TropVector),
    pub lhs: TropVector,
    pub rhs: TropVector,
}

#[derive(Debug, Clone)]
pub struct StraightnessReport {
    pub holds: bool,
    pub counterexample: Option<StraightnessViolation>,
}

impl Submodule {
    /// Builds a submodule from a non-empty generator list. Bottom generators
    /// are pruned silently.
    pub fn new(ambient: usize, generators: Vec<TropVector>) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::EmptyGenerators);
        }
        for g in &generators {
            if g.len() != ambient {
                return Err(Error::LengthMismatch {
                    left: ambient,
                    right: g.len(),
                });
            }
        }
        let generators = generators.into_iter().filter(|g| !g.is_bottom()).collect();
        Ok(Submodule {
            ambient,
            generators,
        })
    }

    pub fn span(generators: Vec<TropVector>) -> Result<Self> {
        let ambient = generators.first().ok_or(Error::EmptyGenerators)?.len();
        Submodule::new(ambient, generators)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    /// The pruned generator list (no bottom entries).
    pub fn generators(&self) -> &[TropVector] {
        &self.generators
    }

    pub fn is_zero_module(&self) -> bool {
        self.generators.is_empty()
    }

    fn check_vector(&self, v: &TropVector) -> Result<()> {
        if v.len() != self.ambient {
            return Err(Error::LengthMismatch {
                left: self.ambient,
                right: v.len(),
            });
        }
        Ok(())
    }

    /// The residual coefficients: for each generator the largest scalar
    /// `a` with `a ⊙ w_h <= v`.
    pub fn residuation_coeffs(&self, v: &TropVector) -> Result<Vec<TropScalar>> {
        self.check_vector(v)?;
        Ok(self.generators.iter().map(|g| resid_coeff(g, v)).collect())
    }

    /// Greatest element of the module below `v`.
    pub fn project(&self, v: &TropVector) -> Result<TropVector> {
        self.check_vector(v)?;
        Ok(project_on(&self.generators, v))
    }

    /// Exact membership: `v` is in the module iff its projection is `v`.
    pub fn contains(&self, v: &TropVector) -> Result<bool> {
        Ok(self.project(v)? == *v)
    }

    /// Do the two modules span the same subset of T^n?
    pub fn equivalent(&self, other: &Submodule) -> Result<bool> {
        if self.ambient != other.ambient {
            return Err(Error::LengthMismatch {
                left: self.ambient,
                right: other.ambient,
            });
        }
        for g in &other.generators {
            if !self.contains(g)? {
                return Ok(false);
            }
        }
        for g in &self.generators {
            if !other.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// A minimal generating set: one normalized representative per extremal
    /// ray, sorted lexicographically. Normalization scales each generator so
    /// its largest coordinate is 0, making ray identity structural equality.
    pub fn minimal_generators(&self) -> Vec<TropVector> {
        let mut survivors: Vec<TropVector> = Vec::new();
        for g in &self.generators {
            let n = g.normalize_ray().expect("generators are pruned non-bottom");
            if !survivors.contains(&n) {
                survivors.push(n);
            }
        }
        // drop generators contained in the span of the remaining ones;
        // extremal rays can never be dropped, so the resulting ray set is
        // canonical whatever the input order
        let mut i = 0;
        while i < survivors.len() {
            let mut others = survivors.clone();
            let g = others.remove(i);
            if project_on(&others, &g) == g {
                survivors.remove(i);
            } else {
                i += 1;
            }
        }
        survivors.sort();
        survivors
    }

    /// Number of extremal rays, the dimension of a straight module.
    pub fn dimension(&self) -> usize {
        self.minimal_generators().len()
    }

    /// Infimum of two module elements taken inside the module: the greatest
    /// module element below both.
    pub fn inf_in(&self, v: &TropVector, w: &TropVector) -> Result<TropVector> {
        if !self.contains(v)? || !self.contains(w)? {
            return Err(Error::NotInModule);
        }
        self.project(&v.meet(w)?)
    }

    /// Candidate coordinate minima from any generating set: for coordinate
    /// `i`, the meet of `(⊘w_h[i]) ⊙ w_h` over the generators finite at `i`.
    /// A coordinate where every generator is `-inf` has an empty section
    /// `M ∩ {x_i = 0}`, hence no minimum.
    fn coordinate_minima(&self) -> Result<Vec<TropVector>> {
        let mut minima = Vec::with_capacity(self.ambient);
        for i in 0..self.ambient {
            let mut m: Option<TropVector> = None;
            for g in &self.generators {
                let Some(a) = g[i].as_rational() else {
                    continue;
                };
                let shifted = TropVector::new(g.coords().iter().map(|c| c.minus_rat(a)).collect());
                m = Some(match m {
                    None => shifted,
                    Some(cur) => cur.meet(&shifted)?,
                });
            }
            minima.push(m.ok_or(Error::NotLatticePreserving { coord: i })?);
        }
        Ok(minima)
    }

    /// The exact lattice-preservation test: the inclusion `M ⊂ T^n`
    /// preserves pairwise infima iff every coordinate section `M ∩ {x_i = 0}`
    /// has a minimum, and the candidate minimum is the meet of the rescaled
    /// generators. Requires fully finite generators; non-interior modules
    /// only get the sample-based straightness check.
    pub fn lattice_check(&self) -> Result<LatticeCheck> {
        for (index, g) in self.generators.iter().enumerate() {
            if !g.all_finite() {
                return Err(Error::NotInteriorGenerators { index });
            }
        }
        if self.generators.is_empty() {
            return Err(Error::NotLatticePreserving { coord: 0 });
        }
        let minima = self.coordinate_minima()?;
        let mut failing = None;
        for (i, v) in minima.iter().enumerate() {
            if !self.contains(v)? {
                failing = Some(i);
                break;
            }
        }
        Ok(LatticeCheck {
            preserving: failing.is_none(),
            minima,
            failing,
        })
    }

    /// Builds the section `s` (coordinate -> basis element carrying the
    /// coordinate minimum) and the inequality matrix `x_j >= x_i - c[i][j]`
    /// cutting out the module. Entries with nothing to force are an explicit
    /// `Unbounded` sentinel, never a scalar.
    pub fn section_map(&self) -> Result<SectionMap> {
        if self.generators.is_empty() {
            return Err(Error::NotLatticePreserving { coord: 0 });
        }
        let minima = self.coordinate_minima()?;
        for (i, v) in minima.iter().enumerate() {
            if !self.contains(v)? {
                return Err(Error::NotLatticePreserving { coord: i });
            }
        }
        let basis = self.minimal_generators();
        let mut assignment = Vec::with_capacity(self.ambient);
        for (i, v) in minima.iter().enumerate() {
            let ray = v
                .normalize_ray()
                .ok_or(Error::NotLatticePreserving { coord: i })?;
            let idx = basis.iter().position(|b| *b == ray).ok_or_else(|| {
                Error::InternalVerificationFailed(format!(
                    "coordinate minimum {v} is not on a basis ray"
                ))
            })?;
            assignment.push(idx);
        }
        for (b, _) in basis.iter().enumerate() {
            if !assignment.contains(&b) {
                return Err(Error::InternalVerificationFailed(format!(
                    "section misses basis element {b}"
                )));
            }
        }
        let n = self.ambient;
        let mut entries = Vec::with_capacity(n);
        for v in &minima {
            // v[i] = 0 by construction, so c[i][j] = -v[j]
            let row: Vec<Bound> = (0..n)
                .map(|j| match v[j].as_rational() {
                    Some(r) => Bound::Finite(-r),
                    None => Bound::Unbounded,
                })
                .collect();
            entries.push(row);
        }
        Ok(SectionMap {
            basis,
            assignment,
            constraints: CMatrix { n, entries },
        })
    }

    /// Checks that every sample decomposes through the dual evaluations of
    /// the minimal basis: `v = ⊕_i ⟨v, η_i⟩ ⊙ e_i` exactly.
    pub fn right_inverse_check(
        &self,
        basis: &[TropVector],
        samples: &[TropVector],
    ) -> Result<bool> {
        let mut sorted: Vec<TropVector> = basis.to_vec();
        sorted.sort();
        if sorted != self.minimal_generators() {
            return Err(Error::PreconditionFailed(
                "basis must be the minimal generating set of the module".into(),
            ));
        }
        // duals of the basis elements exist when the module preserves infima
        let minima = self.coordinate_minima()?;
        for (i, v) in minima.iter().enumerate() {
            if !self.contains(v)? {
                return Err(Error::NotLatticePreserving { coord: i });
            }
        }
        for v in samples {
            if !self.contains(v)? {
                return Err(Error::NotInModule);
            }
            let mut acc = TropVector::bottom(self.ambient);
            for e in basis {
                let coeff = dual_eval(e, v)?;
                acc = acc.join(&e.scale(&coeff))?;
            }
            if acc != *v {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Sample-based distributivity check: on each supplied triple from the
    /// module, the module infimum must distribute over joins. Sound for
    /// refutation, incomplete for proof.
    pub fn straightness_on_samples(
        &self,
        triples: &[(TropVector, TropVector, TropVector)],
    ) -> Result<StraightnessReport> {
        for (v1, v2, w) in triples {
            let lhs = self.inf_in(&v1.join(v2)?, w)?;
            let rhs = self.inf_in(v1, w)?.join(&self.inf_in(v2, w)?)?;
            if lhs != rhs {
                return Ok(StraightnessReport {
                    holds: false,
                    counterexample: Some(StraightnessViolation {
                        triple: (v1.clone(), v2.clone(), w.clone()),
                        lhs,
                        rhs,
                    }),
                });
            }
        }
        Ok(StraightnessReport {
            holds: true,
            counterexample: None,
        })
    }
}

/// The dual evaluation `⟨v, η⟩` of the functional attached to an extremal
/// element `e`: the min of `v_i - e_i` over the finite coordinates of `e`.
/// Pairs to 0 with `e` itself and minorizes every functional through `e`.
pub fn dual_eval(e: &TropVector, v: &TropVector) -> Result<TropScalar> {
    if e.is_bottom() {
        return Err(Error::BottomBase);
    }
    if e.len() != v.len() {
        return Err(Error::LengthMismatch {
            left: e.len(),
            right: v.len(),
        });
    }
    Ok(resid_coeff(e, v))
}

/// The residuated left inverse of the column map `T^m -> T^n`: sends `w` to
/// the greatest `v` with `A ⊙ v <= w`. The columns must form a minimal
/// generating set (no column in the span of the others); otherwise the
/// column map collapses distinct coefficient vectors and `NotInjective`
/// is returned.
pub fn left_inverse(columns: &[TropVector], w: &TropVector) -> Result<TropVector> {
    if columns.is_empty() {
        return Err(Error::EmptyGenerators);
    }
    let n = columns[0].len();
    for c in columns {
        if c.len() != n {
            return Err(Error::LengthMismatch {
                left: n,
                right: c.len(),
            });
        }
    }
    if w.len() != n {
        return Err(Error::LengthMismatch {
            left: n,
            right: w.len(),
        });
    }
    for (index, c) in columns.iter().enumerate() {
        if c.is_bottom() {
            return Err(Error::NotInjective { index });
        }
        let mut others = columns.to_vec();
        others.remove(index);
        if !others.is_empty() && project_on(&others, c) == *c {
            return Err(Error::NotInjective { index });
        }
    }
    Ok(TropVector::new(
        columns.iter().map(|c| resid_coeff(c, w)).collect(),
    ))
}
