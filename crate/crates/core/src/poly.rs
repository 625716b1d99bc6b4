//! Tropical (Laurent) polynomials: finite maps from integer exponent
//! vectors to coefficients, evaluated as a max of affine terms.

use std::collections::BTreeMap;

use num::bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::TropScalar;
use crate::vector::TropVector;

/// A tropical polynomial in `nvars` variables. Exponents may be negative
/// (Laurent terms). A missing exponent means coefficient `-inf`; stored
/// terms are always finite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TropPolynomial {
    nvars: usize,
    terms: BTreeMap<Vec<i64>, TropScalar>,
}

/// Wire form of a single term, shared by the CLI formats.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TermData {
    pub exp: Vec<i64>,
    pub coeff: TropScalar,
}

impl TropPolynomial {
    /// Builds a polynomial, combining repeated exponents by tropical
    /// addition and dropping `-inf` coefficients.
    pub fn new(nvars: usize, terms: impl IntoIterator<Item = (Vec<i64>, TropScalar)>) -> Self {
        let mut map: BTreeMap<Vec<i64>, TropScalar> = BTreeMap::new();
        for (exp, coeff) in terms {
            assert_eq!(exp.len(), nvars, "exponent arity must match nvars");
            if coeff.is_neg_inf() {
                continue;
            }
            map.entry(exp)
                .and_modify(|c| *c = &*c + &coeff)
                .or_insert(coeff);
        }
        TropPolynomial { nvars, terms: map }
    }

    pub fn monomial(nvars: usize, exp: Vec<i64>, coeff: TropScalar) -> Self {
        TropPolynomial::new(nvars, [(exp, coeff)])
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &TropScalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// True iff every exponent vector sums to `m`.
    pub fn is_homogeneous(&self, m: i64) -> bool {
        self.terms.keys().all(|exp| exp.iter().sum::<i64>() == m)
    }

    /// Value of one term at `v`: coefficient plus the exponent-weighted
    /// coordinates. Fails when a negative exponent meets `-inf`.
    fn term_value(&self, exp: &[i64], coeff: &TropScalar, v: &TropVector) -> Result<TropScalar> {
        let mut acc = coeff.clone();
        for (j, &e) in exp.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if v[j].is_neg_inf() {
                if e < 0 {
                    return Err(Error::NegativePowerOfBottom { index: j });
                }
                return Ok(TropScalar::NegInf);
            }
            acc = &acc * &v[j].scale_int(&BigInt::from(e));
        }
        Ok(acc)
    }

    /// Evaluates the polynomial function: the max over terms.
    pub fn eval(&self, v: &TropVector) -> Result<TropScalar> {
        if v.len() != self.nvars {
            return Err(Error::LengthMismatch {
                left: self.nvars,
                right: v.len(),
            });
        }
        let mut best = TropScalar::NegInf;
        for (exp, coeff) in &self.terms {
            let val = self.term_value(exp, coeff, v)?;
            best = &best + &val;
        }
        Ok(best)
    }

    /// Returns the terms attaining the maximum at `v`, with the value.
    pub fn attaining(&self, v: &TropVector) -> Result<(TropScalar, Vec<Vec<i64>>)> {
        let best = self.eval(v)?;
        let mut hits = Vec::new();
        for (exp, coeff) in &self.terms {
            if self.term_value(exp, coeff, v)? == best {
                hits.push(exp.clone());
            }
        }
        Ok((best, hits))
    }

    /// Polynomial product: exponents add, coefficients multiply, colliding
    /// terms combine by tropical addition.
    pub fn product(&self, other: &TropPolynomial) -> TropPolynomial {
        assert_eq!(
            self.nvars, other.nvars,
            "operands must share the variable count"
        );
        let mut terms = Vec::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let exp: Vec<i64> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                terms.push((exp, c1 * c2));
            }
        }
        TropPolynomial::new(self.nvars, terms)
    }

    pub fn to_terms(&self) -> Vec<TermData> {
        self.terms
            .iter()
            .map(|(exp, coeff)| TermData {
                exp: exp.clone(),
                coeff: coeff.clone(),
            })
            .collect()
    }

    pub fn from_terms(nvars: usize, terms: Vec<TermData>) -> Self {
        TropPolynomial::new(nvars, terms.into_iter().map(|t| (t.exp, t.coeff)))
    }
}

/// Membership in the predicate submodule `{ v | m·p(v) <= q(v) }` where `p`
/// is the linear functional paired against a fixed vector and `q` is
/// homogeneous of degree `m`. This is the only window into modules that are
/// not finitely generated; `p` may have `-inf` coordinates.
pub fn predicate_membership(
    p: &TropVector,
    q: &TropPolynomial,
    m: u64,
    v: &TropVector,
) -> Result<bool> {
    if !q.is_homogeneous(m as i64) {
        return Err(Error::NotHomogeneous { expected: m as i64 });
    }
    let lhs = v.pairing(p)?.scale_int(&BigInt::from(m));
    let rhs = q.eval(v)?;
    Ok(lhs <= rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v(xs: &[i64]) -> TropVector {
        TropVector::from_ints(xs)
    }

    fn line_poly() -> TropPolynomial {
        // 0 ⊕ x ⊕ y
        TropPolynomial::new(
            2,
            [
                (vec![0, 0], TropScalar::int(0)),
                (vec![1, 0], TropScalar::int(0)),
                (vec![0, 1], TropScalar::int(0)),
            ],
        )
    }

    #[test]
    fn eval_examples() {
        assert_eq!(line_poly().eval(&v(&[3, 1])).unwrap(), TropScalar::int(3));
        // a monomial evaluates to the weighted coordinate sum
        let m = TropPolynomial::monomial(3, vec![2, 0, -1], TropScalar::int(1));
        assert_eq!(m.eval(&v(&[3, 7, 4])).unwrap(), TropScalar::int(3));
        // negative exponent on a -inf coordinate is an error
        let bad = TropVector::new(vec![
            TropScalar::int(0),
            TropScalar::int(0),
            TropScalar::NegInf,
        ]);
        assert!(matches!(
            m.eval(&bad),
            Err(Error::NegativePowerOfBottom { index: 2 })
        ));
        // positive exponent on -inf just kills the term
        let pos = TropPolynomial::monomial(1, vec![2], TropScalar::int(5));
        assert_eq!(
            pos.eval(&TropVector::bottom(1)).unwrap(),
            TropScalar::NegInf
        );
    }

    #[test]
    fn square_of_a_sum_as_functions() {
        // the second power of (x ⊕ y) equals 2x ⊕ x⊙y ⊕ 2y as a function
        let square = TropPolynomial::new(
            2,
            [
                (vec![2, 0], TropScalar::int(0)),
                (vec![1, 1], TropScalar::int(0)),
                (vec![0, 2], TropScalar::int(0)),
            ],
        );
        for (a, b) in [(0, 0), (3, -1), (-2, 5), (7, 7)] {
            let p = v(&[a, b]);
            let direct = &(&p[0] + &p[1]) * &(&p[0] + &p[1]);
            assert_eq!(square.eval(&p).unwrap(), direct);
        }
    }

    #[test]
    fn predicate_membership_fixture() {
        // the two defining constraints of the running non-straight module in T^3:
        //   max(a - 1, c) <= b   and   2b <= a + c
        let p1 = TropVector::new(vec![
            TropScalar::int(-1),
            TropScalar::NegInf,
            TropScalar::int(0),
        ]);
        let q1 = TropPolynomial::monomial(3, vec![0, 1, 0], TropScalar::int(0));
        let p2 = TropVector::new(vec![
            TropScalar::NegInf,
            TropScalar::int(0),
            TropScalar::NegInf,
        ]);
        let q2 = TropPolynomial::new(3, [(vec![1, 0, 1], TropScalar::int(0))]);

        let member = |x: &TropVector| {
            predicate_membership(&p1, &q1, 1, x).unwrap()
                && predicate_membership(&p2, &q2, 2, x).unwrap()
        };

        assert!(member(&v(&[0, 0, 0])));
        for t in [
            TropScalar::int(0),
            TropScalar::ratio(1, 2),
            TropScalar::int(1),
        ] {
            let two_t = t.scale_int(&num::BigInt::from(2));
            let e = TropVector::new(vec![two_t, t.clone(), TropScalar::int(0)]);
            assert!(member(&e));
        }
        assert!(member(&TropVector::bottom(3)));
        assert!(!member(&v(&[3, 1, 0])));

        // degree check is enforced
        assert!(matches!(
            predicate_membership(&p2, &q2, 3, &v(&[0, 0, 0])),
            Err(Error::NotHomogeneous { expected: 3 })
        ));
    }

    prop_compose! {
        fn scalar()(kind in 0u8..6, p in -8i64..=8, q in 1i64..=2) -> TropScalar {
            if kind == 0 { TropScalar::NegInf } else { TropScalar::ratio(p, q) }
        }
    }

    prop_compose! {
        fn poly2()(terms in proptest::collection::vec(
            (proptest::collection::vec(0i64..4, 2), scalar()), 1..5)) -> TropPolynomial {
            TropPolynomial::new(2, terms)
        }
    }

    prop_compose! {
        fn vec2()(xs in proptest::collection::vec(scalar(), 2)) -> TropVector {
            TropVector::new(xs)
        }
    }

    proptest! {
        #[test]
        fn superadditive_on_joins(f in poly2(), a in vec2(), b in vec2()) {
            // polynomial functions with non-negative exponents dominate the
            // join of their values
            let j = a.join(&b).unwrap();
            let lhs = f.eval(&j).unwrap();
            let rhs = &f.eval(&a).unwrap() + &f.eval(&b).unwrap();
            prop_assert!(lhs >= rhs);
        }

        #[test]
        fn predicate_set_is_a_submodule(a in vec2(), b in vec2(), s in -4i64..=4) {
            // m p(v) <= q(v) with p = (0,0) (so p(v) = max coordinate) and
            // q = 2x ⊕ 2y of degree 2
            let p = TropVector::from_ints(&[0, 0]);
            let q = TropPolynomial::new(2, [
                (vec![2, 0], TropScalar::int(0)),
                (vec![0, 2], TropScalar::int(0)),
            ]);
            let in_m = |x: &TropVector| predicate_membership(&p, &q, 2, x).unwrap();
            if in_m(&a) && in_m(&b) {
                prop_assert!(in_m(&a.join(&b).unwrap()));
                prop_assert!(in_m(&a.scale(&TropScalar::ratio(s, 2))));
            }
        }
    }
}
