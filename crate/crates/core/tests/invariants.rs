//! Structural invariants on randomly generated instances: dimension
//! monotonicity under inclusion, extremality of coordinate minima, the
//! agreement between the lattice test and the inequality representation,
//! and reconstruction through dual evaluations.

mod common;

use common::*;
use rand::Rng;

use maxplus::{dual_eval, left_inverse, Submodule, TropVector};

#[test]
fn dimension_is_monotone_under_inclusion() {
    let mut r = rng(0x0d131);
    for _ in 0..60 {
        let n = r.gen_range(2..=4);
        let outer = random_polytrope_module(&mut r, n);
        let inner = random_nested_polytrope(&mut r, &polytrope_constraints(&outer));
        // sanity: the inner module is contained in the outer one
        for g in inner.generators() {
            assert!(
                outer.contains(g).unwrap(),
                "inner generator escapes the outer module"
            );
        }
        assert!(inner.lattice_check().unwrap().preserving);
        assert!(outer.lattice_check().unwrap().preserving);
        assert!(
            inner.dimension() <= outer.dimension(),
            "dimension must not grow under inclusion"
        );
    }
}

#[test]
fn lattice_preserving_modules_have_at_most_ambient_dimension() {
    let mut r = rng(0x0d132);
    for _ in 0..80 {
        let n = r.gen_range(1..=5);
        let m = random_polytrope_module(&mut r, n);
        assert!(m.dimension() <= n);
    }
}

#[test]
fn coordinate_minima_are_extremal() {
    let mut r = rng(0x0d133);
    for _ in 0..60 {
        let n = r.gen_range(2..=4);
        let m = random_polytrope_module(&mut r, n);
        let check = m.lattice_check().unwrap();
        assert!(check.preserving);
        let basis = m.minimal_generators();
        for v in &check.minima {
            let ray = v.normalize_ray().unwrap();
            let idx = basis
                .iter()
                .position(|b| *b == ray)
                .expect("each minimum generates a basis ray");
            // dropping the carrier of the minimum loses the span
            let mut rest = basis.clone();
            rest.remove(idx);
            if rest.is_empty() {
                continue;
            }
            let sub = Submodule::new(n, rest).unwrap();
            assert!(
                !sub.contains(v).unwrap(),
                "minimum {v} still spanned after dropping its ray"
            );
        }
    }
}

#[test]
fn section_map_agrees_with_membership_on_samples() {
    let mut r = rng(0x0d134);
    for _ in 0..50 {
        let n = r.gen_range(2..=4);
        let m = random_polytrope_module(&mut r, n);
        let sm = m.section_map().unwrap();
        // the section hits every basis element
        let mut hit = sm.assignment.clone();
        hit.sort_unstable();
        hit.dedup();
        assert_eq!(hit.len(), sm.basis.len());
        for _ in 0..30 {
            let x = if r.gen_bool(0.5) {
                random_member(&mut r, &m, 3)
            } else {
                random_vector(&mut r, n, 3, 0.1)
            };
            assert_eq!(
                sm.constraints.satisfied_by(&x).unwrap(),
                m.contains(&x).unwrap(),
                "inequality description disagrees with membership at {x}"
            );
        }
    }
}

#[test]
fn dual_evaluations_reconstruct_members() {
    let mut r = rng(0x0d135);
    for _ in 0..50 {
        let n = r.gen_range(1..=4);
        let m = random_polytrope_module(&mut r, n);
        let basis = m.minimal_generators();
        let samples: Vec<TropVector> = (0..20).map(|_| random_member(&mut r, &m, 3)).collect();
        assert!(
            m.right_inverse_check(&basis, &samples).unwrap(),
            "a member failed to reconstruct through its dual evaluations"
        );
        // the dual evaluation axioms against coordinate functionals
        for e in &basis {
            assert_eq!(dual_eval(e, e).unwrap(), maxplus::TropScalar::int(0));
            for v in &samples {
                let c = dual_eval(e, v).unwrap();
                for j in 0..n {
                    let lhs = &c * &e[j];
                    assert!(
                        lhs <= v[j],
                        "dual evaluation exceeds a coordinate functional"
                    );
                }
            }
        }
    }
}

#[test]
fn residuated_left_inverse_round_trips_on_module_points() {
    let mut r = rng(0x0d136);
    for _ in 0..50 {
        let n = r.gen_range(1..=4);
        let m = random_polytrope_module(&mut r, n);
        let columns = m.minimal_generators();
        for _ in 0..20 {
            let w = random_member(&mut r, &m, 3);
            let coeffs = left_inverse(&columns, &w).unwrap();
            let mut rebuilt = TropVector::bottom(n);
            for (c, col) in coeffs.coords().iter().zip(&columns) {
                rebuilt = rebuilt.join(&col.scale(c)).unwrap();
            }
            assert_eq!(rebuilt, w, "column map does not invert on its image");
        }
    }
}

#[test]
fn sampled_straightness_holds_on_lattice_preserving_modules() {
    let mut r = rng(0x0d137);
    for _ in 0..40 {
        let n = r.gen_range(2..=4);
        let m = random_polytrope_module(&mut r, n);
        let triples: Vec<(TropVector, TropVector, TropVector)> = (0..15)
            .map(|_| {
                (
                    random_member(&mut r, &m, 3),
                    random_member(&mut r, &m, 3),
                    random_member(&mut r, &m, 3),
                )
            })
            .collect();
        let report = m.straightness_on_samples(&triples).unwrap();
        assert!(
            report.holds,
            "distributivity failed: {:?}",
            report.counterexample
        );
    }
}

#[test]
fn hull_is_idempotent_on_sampled_points() {
    let mut r = rng(0x0d13a);
    for _ in 0..30 {
        let ambient = r.gen_range(2..=4);
        let m = random_polytrope_module(&mut r, ambient);
        let mut reps: Vec<maxplus::ProjPoint> = m
            .generators()
            .iter()
            .map(|g| maxplus::ProjPoint::new(g.clone()).unwrap())
            .collect();
        // extra sampled module points cannot enlarge the hull
        for _ in 0..5 {
            reps.push(maxplus::ProjPoint::new(random_member(&mut r, &m, 3)).unwrap());
        }
        let hull = maxplus::Polytope::hull(reps).unwrap();
        assert!(hull.module().equivalent(&m).unwrap());
        for p in hull.points() {
            assert!(hull.contains_point(p).unwrap());
        }
    }
}

#[test]
fn divisor_calculus_works_on_unbounded_rays() {
    use maxplus::curve::pwl::EdgePwl;
    use maxplus::curve::{CurvePoint, MetricGraph, RationalFunction};
    use num::bigint::BigInt;
    use num::rational::BigRational;

    let star = MetricGraph::star(2);
    let ri = |p: i64| BigRational::from_integer(BigInt::from(p));
    // dips to -1 at distance 1 along the first ray, then climbs forever
    let dip = EdgePwl {
        points: vec![(ri(0), ri(0)), (ri(1), ri(-1))],
        tail_slope: Some(BigInt::from(1)),
    };
    let f = RationalFunction::new(&star, vec![dip, EdgePwl::constant_ray(&ri(0))]).unwrap();
    let center = CurvePoint::Vertex(0);
    let kink = CurvePoint::interior(0, ri(1));
    assert_eq!(f.order_at(&star, &center).unwrap(), BigInt::from(-1));
    assert_eq!(f.order_at(&star, &kink).unwrap(), BigInt::from(2));
    assert_eq!(
        f.evaluate(&star, &CurvePoint::interior(0, ri(5))).unwrap(),
        maxplus::TropScalar::int(3)
    );
    let d = f.principal_divisor(&star).unwrap();
    assert_eq!(d.weight(&center), BigInt::from(-1));
    assert_eq!(d.weight(&kink), BigInt::from(2));
    // no telescoping on a non-compact graph: the tail slope escapes
    assert_eq!(d.degree(), BigInt::from(1));
}

/// The half-open band `{ (a, b) : b finite } ∪ {⊥}` in T^2 is closed under
/// joins, scalings, and ambient meets (so the inclusion preserves infima),
/// yet no finite generating set can reach it: members make `a - b`
/// arbitrarily large while any finite span bounds it.
#[test]
fn an_infimum_preserving_module_need_not_be_finitely_generated() {
    let member = |v: &TropVector| v.is_bottom() || v[1].is_finite();
    let mut r = rng(0x0d140);
    let sample = |r: &mut rand_chacha::ChaCha8Rng| {
        TropVector::new(vec![
            random_scalar(r, 5, 0.2),
            maxplus::TropScalar::ratio(r.gen_range(-10..=10), 2),
        ])
    };
    for _ in 0..200 {
        let x = sample(&mut r);
        let y = sample(&mut r);
        assert!(member(&x) && member(&y));
        assert!(member(&x.join(&y).unwrap()));
        assert!(member(&x.meet(&y).unwrap()));
        assert!(member(&x.scale(&random_scalar(&mut r, 5, 0.2))));
    }
    // any finite candidate generating set drawn from the band misses the
    // member (B + 1, 0), where B bounds the spread of the candidates
    for count in 1..=6 {
        let candidates: Vec<TropVector> = (0..count).map(|_| sample(&mut r)).collect();
        let span = Submodule::new(2, candidates).unwrap();
        let spread = span
            .generators()
            .iter()
            .filter_map(|g| {
                let b = g[1].as_rational().unwrap();
                g[0].as_rational().map(|a| a - b)
            })
            .max()
            .unwrap_or_else(|| num::BigRational::from_integer(0.into()));
        let witness = TropVector::new(vec![
            maxplus::TropScalar::from_rational(spread + num::BigRational::from_integer(1.into())),
            maxplus::TropScalar::int(0),
        ]);
        assert!(member(&witness));
        assert!(
            !span.contains(&witness).unwrap(),
            "a finite span cannot exhaust the band"
        );
    }
}

/// Negative fixture: in any submodule of T^n, a failed comparison `v <= w`
/// cannot be repaired by joining a strictly negative multiple of `v` into
/// `w`. The synthetic module below (pairs of a semigroup element and a
/// number, where scalars act only on the number) breaks that law, so it
/// embeds in no power of the semifield; everything this crate computes on
/// stays on the safe side of the fixture.
#[test]
fn rescaling_law_separates_embeddable_modules() {
    #[derive(Clone, PartialEq, Debug)]
    struct Pair {
        tag: TropVector,
        level: i64,
    }
    let join = |x: &Pair, y: &Pair| Pair {
        tag: x.tag.join(&y.tag).unwrap(),
        level: x.level.max(y.level),
    };
    // scalars act on the level only, leaving the tag untouched
    let scale = |c: i64, x: &Pair| Pair {
        tag: x.tag.clone(),
        level: x.level + c,
    };
    let leq = |x: &Pair, y: &Pair| x.tag.leq(&y.tag).unwrap() && x.level <= y.level;

    let v = Pair {
        tag: TropVector::unit(2, 0),
        level: 0,
    };
    let w = Pair {
        tag: TropVector::unit(2, 1),
        level: 0,
    };
    assert!(!leq(&v, &w));
    // joining a strictly negative multiple of v "repairs" the comparison
    let repaired = join(&w, &scale(-1, &v));
    assert!(
        leq(&v, &repaired),
        "the synthetic module violates the rescaling law"
    );

    // whereas in T^n the law holds on the same data
    let tv = TropVector::unit(2, 0);
    let tw = TropVector::unit(2, 1);
    let joined = tw.join(&tv.scale(&maxplus::TropScalar::int(-1))).unwrap();
    assert!(!tv.leq(&joined).unwrap());
}

#[test]
fn principal_divisors_of_random_functions_have_degree_zero() {
    let mut r = rng(0x0d138);
    for _ in 0..60 {
        let g = random_compact_graph(&mut r);
        let f = random_rich_function(&mut r, &g);
        let d = f.principal_divisor(&g).unwrap();
        assert_eq!(
            d.degree(),
            0.into(),
            "slopes must telescope on a compact graph"
        );
    }
}

#[test]
fn order_calculus_on_random_functions() {
    let mut r = rng(0x0d139);
    for _ in 0..60 {
        let g = random_compact_graph(&mut r);
        let f = random_rich_function(&mut r, &g);
        let h = random_rich_function(&mut r, &g);
        for _ in 0..6 {
            let p = random_point(&mut r, &g);
            // orders add under tropical products
            let sum = f.product(&h);
            assert_eq!(
                sum.order_at(&g, &p).unwrap(),
                f.order_at(&g, &p).unwrap() + h.order_at(&g, &p).unwrap()
            );
            // joining something no larger at the point cannot lower the order
            let (fv, hv) = (f.evaluate(&g, &p).unwrap(), h.evaluate(&g, &p).unwrap());
            if hv <= fv {
                assert!(f.order_at(&g, &p).unwrap() <= f.join(&h).order_at(&g, &p).unwrap());
            }
            // and the join order is at least the smaller of the two
            let j = f.join(&h);
            let min = f.order_at(&g, &p).unwrap().min(h.order_at(&g, &p).unwrap());
            assert!(j.order_at(&g, &p).unwrap() >= min);
        }
    }
}
