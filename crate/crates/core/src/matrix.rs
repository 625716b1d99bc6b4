//! Square max-plus matrices: diagonal/off-diagonal splits, the tropical
//! determinant, power stabilization, and the eigen-dichotomy solver with
//! machine-checkable certificates.

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::scalar::TropScalar;
use crate::vector::TropVector;

/// Exact permutation enumeration is kept to small orders.
pub const DET_ORDER_BOUND: usize = 10;

/// A square matrix over the tropical semifield, acting on column vectors by
/// `(A ⊙ v)_i = max_j (A_ij + v_j)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TropMatrix {
    n: usize,
    entries: Vec<Vec<TropScalar>>,
}

/// Certificate produced by [`TropMatrix::dichotomy`]. Exactly one of the two
/// shapes holds for every square matrix:
///
/// * `Diagonal`: a fully finite `v` and an `ε > 0` with
///   `(A ⊕ ε ⊙ off(A)) ⊙ v = diag(A) ⊙ v`;
/// * `OffDiagonal`: a non-bottom `v` with `A ⊙ v = off(A) ⊙ v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Dichotomy {
    Diagonal { v: TropVector, epsilon: TropScalar },
    OffDiagonal { v: TropVector },
}

impl TropMatrix {
    pub fn new(entries: Vec<Vec<TropScalar>>) -> Result<Self> {
        let n = entries.len();
        if n == 0 {
            return Err(Error::SizeMismatch { left: 0, right: 0 });
        }
        for row in &entries {
            if row.len() != n {
                return Err(Error::SizeMismatch {
                    left: n,
                    right: row.len(),
                });
            }
        }
        Ok(TropMatrix { n, entries })
    }

    pub fn from_ints(rows: &[&[i64]]) -> Self {
        TropMatrix::new(
            rows.iter()
                .map(|r| r.iter().map(|&x| TropScalar::int(x)).collect())
                .collect(),
        )
        .expect("square integer matrix")
    }

    /// The identity: 0 on the diagonal, -inf off it.
    pub fn identity(n: usize) -> Self {
        let mut entries = vec![vec![TropScalar::NegInf; n]; n];
        for (i, row) in entries.iter_mut().enumerate() {
            row[i] = TropScalar::one();
        }
        TropMatrix { n, entries }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> &TropScalar {
        &self.entries[i][j]
    }

    pub fn rows(&self) -> &[Vec<TropScalar>] {
        &self.entries
    }

    pub fn column(&self, j: usize) -> TropVector {
        TropVector::new((0..self.n).map(|i| self.entries[i][j].clone()).collect())
    }

    fn check_order(&self, other: usize) -> Result<()> {
        if self.n != other {
            return Err(Error::SizeMismatch {
                left: self.n,
                right: other,
            });
        }
        Ok(())
    }

    pub fn apply(&self, v: &TropVector) -> Result<TropVector> {
        self.check_order(v.len())?;
        Ok(TropVector::new(
            self.entries
                .iter()
                .map(|row| {
                    row.iter()
                        .zip(v.coords())
                        .fold(TropScalar::zero(), |acc, (a, x)| &acc + &(a * x))
                })
                .collect(),
        ))
    }

    pub fn matmul(&self, other: &TropMatrix) -> Result<TropMatrix> {
        self.check_order(other.n)?;
        let n = self.n;
        let entries = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        (0..n).fold(TropScalar::NegInf, |acc, k| {
                            &acc + &(&self.entries[i][k] * &other.entries[k][j])
                        })
                    })
                    .collect()
            })
            .collect();
        Ok(TropMatrix { n, entries })
    }

    pub fn pow(&self, k: u32) -> TropMatrix {
        let mut acc = TropMatrix::identity(self.n);
        for _ in 0..k {
            acc = acc.matmul(self).expect("same order");
        }
        acc
    }

    /// Entrywise join.
    pub fn join(&self, other: &TropMatrix) -> Result<TropMatrix> {
        self.check_order(other.n)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(r, s)| r.iter().zip(s).map(|(a, b)| a + b).collect())
            .collect();
        Ok(TropMatrix { n: self.n, entries })
    }

    /// Scales every entry by `a`.
    pub fn scale(&self, a: &TropScalar) -> TropMatrix {
        TropMatrix {
            n: self.n,
            entries: self
                .entries
                .iter()
                .map(|r| r.iter().map(|x| a * x).collect())
                .collect(),
        }
    }

    /// The diagonal part: keeps the diagonal, -inf elsewhere.
    pub fn diagonal_part(&self) -> TropMatrix {
        let mut entries = vec![vec![TropScalar::NegInf; self.n]; self.n];
        for (i, row) in entries.iter_mut().enumerate() {
            row[i] = self.entries[i][i].clone();
        }
        TropMatrix { n: self.n, entries }
    }

    /// The off-diagonal part: -inf on the diagonal.
    pub fn off_diagonal_part(&self) -> TropMatrix {
        let mut entries = self.entries.clone();
        for (i, row) in entries.iter_mut().enumerate() {
            row[i] = TropScalar::NegInf;
        }
        TropMatrix { n: self.n, entries }
    }

    pub fn leq(&self, other: &TropMatrix) -> Result<bool> {
        self.check_order(other.n)?;
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .all(|(r, s)| r.iter().zip(s).all(|(a, b)| a <= b)))
    }

    fn permutation_weight(&self, perm: &[usize]) -> TropScalar {
        let mut acc = TropScalar::one();
        for (i, &j) in perm.iter().enumerate() {
            acc = &acc * &self.entries[i][j];
            if acc.is_neg_inf() {
                return acc;
            }
        }
        acc
    }

    /// The tropical determinant (permanent): the max over permutations of
    /// the diagonal-product weight, by exact enumeration.
    pub fn det(&self) -> Result<TropScalar> {
        if self.n > DET_ORDER_BOUND {
            return Err(Error::OrderTooLarge {
                order: self.n,
                bound: DET_ORDER_BOUND,
            });
        }
        let mut best = TropScalar::NegInf;
        for perm in (0..self.n).permutations(self.n) {
            best = &best + &self.permutation_weight(&perm);
        }
        Ok(best)
    }

    /// Max weight over non-identity permutations (`-inf` for order 1).
    fn off_identity_weight(&self) -> Result<TropScalar> {
        if self.n > DET_ORDER_BOUND {
            return Err(Error::OrderTooLarge {
                order: self.n,
                bound: DET_ORDER_BOUND,
            });
        }
        let mut best = TropScalar::NegInf;
        for perm in (0..self.n).permutations(self.n) {
            if perm.iter().enumerate().all(|(i, &j)| i == j) {
                continue;
            }
            best = &best + &self.permutation_weight(&perm);
        }
        Ok(best)
    }

    /// Weight of the diagonal permutation.
    fn diagonal_weight(&self) -> TropScalar {
        let mut acc = TropScalar::one();
        for i in 0..self.n {
            acc = &acc * &self.entries[i][i];
        }
        acc
    }

    /// Under the hypotheses "diagonal part is the identity" and
    /// "determinant 0", powers stabilize at the (n-1)-st: returns that power
    /// together with the verification that the monotone chain
    /// `E <= A <= A^2 <= ...` holds and `A^n = A^(n-1)` entrywise.
    pub fn stabilized_power(&self) -> Result<(TropMatrix, bool)> {
        if self.diagonal_part() != TropMatrix::identity(self.n) {
            return Err(Error::HypothesisViolated(
                "diagonal part must be the identity".into(),
            ));
        }
        let det = self.det()?;
        if det != TropScalar::one() {
            return Err(Error::HypothesisViolated(format!(
                "determinant must be 0, got {det}"
            )));
        }
        let mut verified = true;
        let mut prev = TropMatrix::identity(self.n);
        for _ in 0..self.n.saturating_sub(1) {
            let next = prev.matmul(self)?;
            verified &= prev.leq(&next)?;
            prev = next;
        }
        let stabilized = prev;
        let one_more = stabilized.matmul(self)?;
        verified &= stabilized.leq(&one_more)? && one_more == stabilized;
        Ok((stabilized, verified))
    }

    /// Decides the eigen-dichotomy and returns a re-verified certificate:
    /// either the diagonal dominates on a box around a finite vector
    /// (`Diagonal`, with an explicit positive `ε`), or a non-bottom vector
    /// witnesses that the off-diagonal part already attains `A ⊙ v`
    /// (`OffDiagonal`).
    pub fn dichotomy(&self) -> Result<Dichotomy> {
        let e = self.off_identity_weight()?;
        let c = self.diagonal_weight();
        let cert = if e < c {
            self.diagonal_certificate(&e, &c)?
        } else {
            self.off_diagonal_certificate()?
        };
        if !self.verify_dichotomy(&cert)? {
            return Err(Error::InternalVerificationFailed(
                "dichotomy certificate failed re-verification".into(),
            ));
        }
        Ok(cert)
    }

    fn diagonal_certificate(&self, e: &TropScalar, c: &TropScalar) -> Result<Dichotomy> {
        let n = self.n;
        if n == 1 {
            return Ok(Dichotomy::Diagonal {
                v: TropVector::new(vec![TropScalar::one()]),
                epsilon: TropScalar::int(1),
            });
        }
        // c > e >= -inf forces a finite diagonal; row-scale it to 0
        let diag_inverse = TropMatrix::new(
            (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| {
                            if i == j {
                                TropScalar::one()
                                    .div(&self.entries[i][i])
                                    .expect("diagonal is finite when e < c")
                            } else {
                                TropScalar::NegInf
                            }
                        })
                        .collect()
                })
                .collect(),
        )?;
        let normalized = diag_inverse.matmul(self)?;
        // any ε with 0 < ε <= (c - e)/n keeps all non-identity permutation
        // weights of the perturbed matrix at most 0; take half that bound
        let epsilon = match e {
            TropScalar::NegInf => TropScalar::int(1),
            _ => {
                let gap = c.div(e).expect("e is finite here");
                let half = gap.root(2 * n as u64);
                if TropScalar::int(1) < half {
                    TropScalar::int(1)
                } else {
                    half
                }
            }
        };
        let perturbed = normalized.join(&normalized.off_diagonal_part().scale(&epsilon))?;
        let ones = TropVector::new(vec![TropScalar::one(); n]);
        let v = perturbed.pow(n as u32 - 1).apply(&ones)?;
        // row scaling cancels on both sides of the certificate identity, so
        // v is already valid in the original coordinates
        Ok(Dichotomy::Diagonal { v, epsilon })
    }

    fn off_diagonal_certificate(&self) -> Result<Dichotomy> {
        let n = self.n;
        // a -inf diagonal entry makes the unit vector a witness directly
        if let Some(i) = (0..n).find(|&i| self.entries[i][i].is_neg_inf()) {
            return Ok(Dichotomy::OffDiagonal {
                v: TropVector::unit(n, i),
            });
        }
        // otherwise normalize the diagonal away and hunt for a simple cycle
        // of non-negative weight, shortest first, lexicographic within a
        // length; one must exist since some non-identity permutation weighs
        // at least the diagonal
        let normalized_entry = |i: usize, j: usize| -> TropScalar {
            self.entries[i][j]
                .div(&self.entries[i][i])
                .expect("diagonal is finite")
        };
        for len in 2..=n {
            let mut found: Option<Vec<usize>> = None;
            'outer: for start in 0..n {
                for rest in (0..n).filter(|&x| x != start).permutations(len - 1) {
                    if rest.iter().any(|&x| x < start) {
                        continue;
                    }
                    let mut cycle = vec![start];
                    cycle.extend(&rest);
                    cycle.push(start);
                    let mut weight = TropScalar::one();
                    for w in cycle.windows(2) {
                        weight = &weight * &normalized_entry(w[0], w[1]);
                        if weight.is_neg_inf() {
                            break;
                        }
                    }
                    if weight >= TropScalar::one() {
                        found = Some(cycle);
                        break 'outer;
                    }
                }
            }
            if let Some(cycle) = found {
                // v = ⊕_m (weight of the cycle tail from m) ⊙ e_{cycle[m]}
                let l = cycle.len() - 1;
                let mut v = TropVector::bottom(n);
                for m in 1..=l {
                    let mut tail = TropScalar::one();
                    for w in cycle[m..].windows(2) {
                        tail = &tail * &normalized_entry(w[0], w[1]);
                    }
                    v = v.join(&TropVector::unit(n, cycle[m]).scale(&tail))?;
                }
                return Ok(Dichotomy::OffDiagonal { v });
            }
        }
        Err(Error::InternalVerificationFailed(
            "no off-diagonal witness found although the diagonal does not dominate".into(),
        ))
    }

    /// Entrywise re-verification of a certificate against this matrix.
    pub fn verify_dichotomy(&self, cert: &Dichotomy) -> Result<bool> {
        match cert {
            Dichotomy::Diagonal { v, epsilon } => {
                if v.len() != self.n || !v.all_finite() || *epsilon <= TropScalar::one() {
                    return Ok(false);
                }
                let perturbed = self.join(&self.off_diagonal_part().scale(epsilon))?;
                Ok(perturbed.apply(v)? == self.diagonal_part().apply(v)?)
            }
            Dichotomy::OffDiagonal { v } => {
                if v.len() != self.n || v.is_bottom() {
                    return Ok(false);
                }
                Ok(self.apply(v)? == self.off_diagonal_part().apply(v)?)
            }
        }
    }
}
