//! Piecewise-linear data along a single edge: exact rational breakpoints
//! with integer slopes, plus max/sum combination with exact crossing
//! insertion.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{Signed, Zero};

use crate::error::{Error, Result};

/// The restriction of a rational function to one edge, as control points
/// `(offset, value)` with strictly increasing offsets starting at 0.
/// Bounded edges end at the edge length; unbounded rays instead carry a
/// `tail_slope` valid past the last control point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgePwl {
    pub points: Vec<(BigRational, BigRational)>,
    pub tail_slope: Option<BigInt>,
}

impl EdgePwl {
    /// Constant function on a bounded edge of the given length.
    pub fn constant_segment(len: &BigRational, value: &BigRational) -> Self {
        EdgePwl {
            points: vec![
                (BigRational::zero(), value.clone()),
                (len.clone(), value.clone()),
            ],
            tail_slope: None,
        }
    }

    /// Constant function on a ray.
    pub fn constant_ray(value: &BigRational) -> Self {
        EdgePwl {
            points: vec![(BigRational::zero(), value.clone())],
            tail_slope: Some(BigInt::zero()),
        }
    }

    /// Affine function on a ray: `value + slope * t`.
    pub fn affine_ray(value: &BigRational, slope: i64) -> Self {
        EdgePwl {
            points: vec![(BigRational::zero(), value.clone())],
            tail_slope: Some(BigInt::from(slope)),
        }
    }

    /// Builds a segment function from integer data, panicking on malformed
    /// input; convenient in tests and fixtures.
    pub fn from_controls(points: &[(BigRational, BigRational)]) -> Self {
        EdgePwl {
            points: points.to_vec(),
            tail_slope: None,
        }
    }

    pub fn is_ray(&self) -> bool {
        self.tail_slope.is_some()
    }

    fn last_offset(&self) -> &BigRational {
        &self.points.last().expect("non-empty control list").0
    }

    /// Structural validation against the edge domain: `len = None` means an
    /// unbounded ray. Checks monotone offsets, domain ends, and that every
    /// slope is an integer.
    pub fn validate(&self, len: Option<&BigRational>) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidFunction(msg));
        if self.points.is_empty() {
            return fail("edge function needs at least one control point".into());
        }
        if !self.points[0].0.is_zero() {
            return fail("first control offset must be 0".into());
        }
        for w in self.points.windows(2) {
            if w[0].0 >= w[1].0 {
                return fail("control offsets must be strictly increasing".into());
            }
            let slope = (&w[1].1 - &w[0].1) / (&w[1].0 - &w[0].0);
            if !slope.is_integer() {
                return fail(format!("slope {slope} is not an integer"));
            }
        }
        match len {
            Some(len) => {
                if self.tail_slope.is_some() {
                    return fail("bounded edge cannot carry a tail slope".into());
                }
                if self.last_offset() != len {
                    return fail(format!(
                        "last control offset {} must equal the edge length {len}",
                        self.last_offset()
                    ));
                }
            }
            None => {
                if self.tail_slope.is_none() {
                    return fail("ray needs a tail slope".into());
                }
            }
        }
        Ok(())
    }

    /// Exact value at an offset inside the domain.
    pub fn value_at(&self, t: &BigRational) -> BigRational {
        debug_assert!(!t.is_negative());
        match self.points.binary_search_by(|(o, _)| o.cmp(t)) {
            Ok(k) => self.points[k].1.clone(),
            Err(k) => {
                if k == self.points.len() {
                    let (o, v) = self.points.last().expect("non-empty");
                    let slope = self
                        .tail_slope
                        .as_ref()
                        .expect("offset beyond the last control needs a ray");
                    v + BigRational::from_integer(slope.clone()) * (t - o)
                } else {
                    debug_assert!(k > 0, "offsets before 0 are outside the domain");
                    let (o1, v1) = &self.points[k - 1];
                    let (o2, v2) = &self.points[k];
                    v1 + (v2 - v1) / (o2 - o1) * (t - o1)
                }
            }
        }
    }

    fn segment_slope(&self, k: usize) -> BigRational {
        let (o1, v1) = &self.points[k];
        let (o2, v2) = &self.points[k + 1];
        (v2 - v1) / (o2 - o1)
    }

    /// Slope immediately to the right of `t`.
    pub fn slope_after(&self, t: &BigRational) -> BigRational {
        for k in 0..self.points.len() - 1 {
            if *t < self.points[k + 1].0 {
                return self.segment_slope(k);
            }
        }
        match &self.tail_slope {
            Some(s) => BigRational::from_integer(s.clone()),
            None => panic!("no domain to the right of the last control point"),
        }
    }

    /// Slope immediately to the left of `t > 0`.
    pub fn slope_before(&self, t: &BigRational) -> BigRational {
        debug_assert!(t.is_positive());
        let mut k = self.points.len() - 1;
        while self.points[k].0 >= *t {
            k -= 1;
        }
        if k + 1 < self.points.len() {
            self.segment_slope(k)
        } else {
            BigRational::from_integer(self.tail_slope.clone().expect("ray tail"))
        }
    }

    /// Control offsets strictly inside the domain.
    pub fn interior_offsets(&self) -> Vec<BigRational> {
        let mut out = Vec::new();
        for (k, (o, _)) in self.points.iter().enumerate() {
            if k == 0 {
                continue;
            }
            if k == self.points.len() - 1 && !self.is_ray() {
                continue;
            }
            out.push(o.clone());
        }
        out
    }

    /// Adds a constant to all values.
    pub fn shift(&self, a: &BigRational) -> EdgePwl {
        EdgePwl {
            points: self
                .points
                .iter()
                .map(|(o, v)| (o.clone(), v + a))
                .collect(),
            tail_slope: self.tail_slope.clone(),
        }
    }

    /// Drops control points that do not break the slope.
    pub fn simplified(&self) -> EdgePwl {
        let n = self.points.len();
        let mut points: Vec<(BigRational, BigRational)> = self
            .points
            .iter()
            .enumerate()
            .filter(|&(k, _)| {
                k == 0 || k + 1 == n || self.segment_slope(k - 1) != self.segment_slope(k)
            })
            .map(|(_, p)| p.clone())
            .collect();
        // a ray's last control is redundant when it does not break the tail
        if let Some(tail) = &self.tail_slope {
            while points.len() >= 2 {
                let m = points.len();
                let slope =
                    (&points[m - 1].1 - &points[m - 2].1) / (&points[m - 1].0 - &points[m - 2].0);
                if slope == BigRational::from_integer(tail.clone()) {
                    points.pop();
                } else {
                    break;
                }
            }
        }
        EdgePwl {
            points,
            tail_slope: self.tail_slope.clone(),
        }
    }

    /// Pointwise maximum, inserting exact crossing points.
    pub fn max(&self, other: &EdgePwl) -> EdgePwl {
        let mut offs: Vec<BigRational> = self
            .points
            .iter()
            .chain(&other.points)
            .map(|(o, _)| o.clone())
            .collect();
        offs.sort();
        offs.dedup();
        let mut points: Vec<(BigRational, BigRational)> = Vec::new();
        for k in 0..offs.len() {
            let o = &offs[k];
            let fv = self.value_at(o);
            let gv = other.value_at(o);
            points.push((o.clone(), if fv >= gv { fv.clone() } else { gv.clone() }));
            if k + 1 < offs.len() {
                let o2 = &offs[k + 1];
                let d1 = &fv - &gv;
                let d2 = self.value_at(o2) - other.value_at(o2);
                if (d1.is_positive() && d2.is_negative()) || (d1.is_negative() && d2.is_positive())
                {
                    let t = o + (o2 - o) * &d1 / (&d1 - &d2);
                    let v = self.value_at(&t);
                    points.push((t, v));
                }
            }
        }
        let tail_slope = match (&self.tail_slope, &other.tail_slope) {
            (Some(sf), Some(sg)) => {
                let last = offs.last().expect("non-empty").clone();
                let fv = self.value_at(&last);
                let gv = other.value_at(&last);
                if fv == gv {
                    Some(sf.max(sg).clone())
                } else {
                    let (hi_v, hi_s, lo_v, lo_s) = if fv > gv {
                        (fv, sf, gv, sg)
                    } else {
                        (gv, sg, fv, sf)
                    };
                    if hi_s >= lo_s {
                        Some(hi_s.clone())
                    } else {
                        // the steeper lower branch overtakes at an exact offset
                        let gap = hi_v - lo_v;
                        let t = &last + gap / BigRational::from_integer(lo_s - hi_s);
                        let v = self.value_at(&t).max(other.value_at(&t));
                        points.push((t, v));
                        Some(lo_s.clone())
                    }
                }
            }
            _ => None,
        };
        EdgePwl { points, tail_slope }.simplified()
    }

    /// Pointwise sum (the restriction of a tropical product).
    pub fn sum(&self, other: &EdgePwl) -> EdgePwl {
        let mut offs: Vec<BigRational> = self
            .points
            .iter()
            .chain(&other.points)
            .map(|(o, _)| o.clone())
            .collect();
        offs.sort();
        offs.dedup();
        let points = offs
            .iter()
            .map(|o| (o.clone(), self.value_at(o) + other.value_at(o)))
            .collect();
        let tail_slope = match (&self.tail_slope, &other.tail_slope) {
            (Some(a), Some(b)) => Some(a + b),
            _ => None,
        };
        EdgePwl { points, tail_slope }.simplified()
    }
}
