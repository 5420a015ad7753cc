use dcdual::conjcalc::{c_conjugate, eco_hull, fenchel_conjugate, is_econvex, WPoint};
use dcdual::duals::{
    cconj_dual_value, cconj_inner, fl_dual_value, fl_dual_value_bar, fl_objective, lagrange_dual_value,
    lagrange_inner, primal_value, DCProblem,
};
use dcdual::extreal::{add_lower, int, ratio, sub_lower};
use dcdual::generate::{corpus, max_of_lines, Variant};
use dcdual::interval::{EndPoint, Interval};
use dcdual::lpexact::{solve_max, LinearProgram, LpStatus, Relation, VarBound};
use dcdual::oracle::{approx_value, GridSpec, Quantity};
use dcdual::problem::{parse_problem_file, ProblemFile};
use dcdual::witness::{classify_bar_pair, classify_fl_pair, classify_l_pair, epco_ray, ray_subset, RaySet};
use dcdual::{ExtReal, Multiplier, PwaFunction, Rational, Witness};
use proptest::prelude::*;

fn ext() -> impl Strategy<Value = ExtReal> {
    prop_oneof![
        1 => Just(ExtReal::NegInf),
        1 => Just(ExtReal::PosInf),
        4 => (-20i64..20, 1i64..5).prop_map(|(n, d)| ExtReal::Finite(ratio(n, d))),
    ]
}

fn ray() -> impl Strategy<Value = RaySet> {
    (ext(), any::<bool>()).prop_map(|(t, c)| RaySet::new(t, c))
}

fn endpoint(lo: bool) -> impl Strategy<Value = EndPoint> {
    prop_oneof![
        1 => Just(if lo { EndPoint::neg_inf() } else { EndPoint::pos_inf() }),
        3 => (-3i64..=3, any::<bool>()).prop_map(|(x, c)| if c { EndPoint::closed(int(x)) } else { EndPoint::open(int(x)) }),
    ]
}

/// A convex piecewise affine function: a max of lines on an interval.
fn convex_fn() -> impl Strategy<Value = PwaFunction> {
    (prop::collection::vec((-3i64..=3, -3i64..=3), 1..4), endpoint(true), endpoint(false)).prop_filter_map(
        "nonempty domain",
        |(lines, lo, hi)| {
            let dom = Interval::new(lo, hi).ok()?;
            let lines: Vec<(Rational, Rational)> = lines.into_iter().map(|(a, b)| (int(a), int(b))).collect();
            Some(max_of_lines(&lines, &dom))
        },
    )
}

fn samples() -> Vec<Rational> {
    (-20..=20).map(|k| ratio(k, 4)).collect()
}

/// Maximum over all feasible basic points of a 2-variable LP with
/// nonnegative variables, by enumerating pairs of tight constraints.
fn brute_force_lp(rows: &[(i64, i64, i64)], obj: (i64, i64)) -> Option<Rational> {
    let mut lines: Vec<(Rational, Rational, Rational)> =
        rows.iter().map(|&(a, b, c)| (int(a), int(b), int(c))).collect();
    lines.push((int(1), int(0), int(0)));
    lines.push((int(0), int(1), int(0)));
    let feasible = |x: &Rational, y: &Rational| {
        *x >= int(0) && *y >= int(0) && rows.iter().all(|&(a, b, c)| int(a) * x + int(b) * y <= int(c))
    };
    let mut best: Option<Rational> = None;
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            let (a1, b1, c1) = &lines[i];
            let (a2, b2, c2) = &lines[j];
            let det = a1 * b2 - a2 * b1;
            if det == int(0) {
                continue;
            }
            let x = (c1 * b2 - c2 * b1) / &det;
            let y = (a1 * c2 - a2 * c1) / &det;
            if feasible(&x, &y) {
                let v = int(obj.0) * &x + int(obj.1) * &y;
                best = Some(best.map_or(v.clone(), |b: Rational| b.max(v)));
            }
        }
    }
    best
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lower_addition_is_commutative_and_prefers_neg_inf(a in ext(), b in ext()) {
        prop_assert_eq!(add_lower(&a, &b), add_lower(&b, &a));
        if a == ExtReal::NegInf || b == ExtReal::NegInf {
            prop_assert_eq!(add_lower(&a, &b), ExtReal::NegInf);
        }
        prop_assert_eq!(sub_lower(&a, &b), add_lower(&a, &b.neg()));
    }

    #[test]
    fn epco_is_idempotent_and_monotone(r in ray(), s in ray()) {
        let c = epco_ray(&r);
        prop_assert_eq!(epco_ray(&c), c.clone());
        prop_assert!(ray_subset(&r, &c));
        if ray_subset(&r, &s) {
            prop_assert!(ray_subset(&c, &epco_ray(&s)));
        }
        prop_assert!(ray_subset(&r, &r));
    }

    #[test]
    fn simplex_matches_vertex_enumeration(
        rows in prop::collection::vec((-3i64..=3, -3i64..=3, -2i64..=6), 1..4),
        obj in (-3i64..=3, -3i64..=3),
    ) {
        let mut rows = rows;
        // a box keeps every instance bounded
        rows.push((1, 0, 5));
        rows.push((0, 1, 5));
        let mut lp = LinearProgram::new(vec![int(obj.0), int(obj.1)], vec![VarBound::NonNeg; 2]);
        for &(a, b, c) in &rows {
            lp.push(vec![int(a), int(b)], Relation::Le, int(c));
        }
        let out = solve_max(&lp).unwrap();
        match brute_force_lp(&rows, obj) {
            Some(v) => {
                prop_assert_eq!(out.status, LpStatus::Optimal);
                prop_assert_eq!(out.value, ExtReal::Finite(v));
                let w = out.witness.unwrap();
                prop_assert!(lp.is_feasible_point(&w));
            }
            None => prop_assert_eq!(out.status, LpStatus::Infeasible),
        }
    }

    #[test]
    fn pointwise_arithmetic(f in convex_fn(), g in convex_fn()) {
        let sum = f.add(&g);
        let diff = f.sub_dc(&g);
        for x in samples() {
            let (a, b) = (f.eval(&x), g.eval(&x));
            let want_sum = if a == ExtReal::PosInf || b == ExtReal::PosInf { ExtReal::PosInf } else { add_lower(&a, &b) };
            prop_assert_eq!(sum.eval(&x), want_sum);
            if a != ExtReal::PosInf && b != ExtReal::PosInf {
                prop_assert_eq!(diff.eval(&x), sub_lower(&a, &b));
            }
        }
        prop_assert!(sum.is_convex() || sum.domain_is_empty());
    }

    #[test]
    fn conjugate_obeys_fenchel_young(f in convex_fn()) {
        let star = fenchel_conjugate(&f);
        for s in samples() {
            let fs = star.eval(&s);
            for x in f.probe_points().iter().chain(samples().iter()) {
                if let ExtReal::Finite(fx) = f.eval(x) {
                    prop_assert!(fs >= ExtReal::Finite(&s * x - fx));
                }
            }
        }
        let bi = fenchel_conjugate(&star);
        for x in samples() {
            prop_assert!(bi.eval(&x) <= f.eval(&x));
        }
    }

    #[test]
    fn eco_hull_properties(f in convex_fn(), jump in 0i64..3, at_lo in any::<bool>()) {
        // add an upward jump at a closed end when there is one
        let dom = f.domain_hull().unwrap();
        let end = if at_lo { &dom.lo } else { &dom.hi };
        let f = match (end.finite(), end.closed) {
            (Some(x), true) => {
                let v = f.eval(x).finite().unwrap() + int(jump);
                let mut o = f.overrides();
                o.retain(|o| &o.x != x);
                o.push(dcdual::pwafun::Override { x: x.clone(), value: v });
                PwaFunction::from_pieces(&f.pieces(), &o).unwrap()
            }
            _ => f,
        };
        let e = eco_hull(&f);
        for x in samples() {
            prop_assert!(e.eval(&x) <= f.eval(&x));
        }
        prop_assert_eq!(eco_hull(&e), e.clone());
        prop_assert!(is_econvex(&e));
        let (fc, ec) = (c_conjugate(&f), c_conjugate(&e));
        for x in -2..=2 {
            for y in -1..=1 {
                for a in [ratio(1, 2), int(1), int(3)] {
                    let w = WPoint::new(int(x), int(y), a);
                    prop_assert_eq!(fc.eval_c(&w), ec.eval_c(&w));
                }
            }
        }
    }

    #[test]
    fn problem_files_round_trip(seed in 0u64..500) {
        let p = corpus(seed, 1, Variant::General, 3).remove(0);
        let text = ProblemFile::from_problem(&p).to_json();
        prop_assert_eq!(parse_problem_file(&text).unwrap().problem().unwrap(), p);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn dual_values_dominate_inner_values(seed in 0u64..10_000) {
        let p = corpus(seed, 1, Variant::General, 2).remove(0);
        let dl = lagrange_dual_value(&p);
        let db = cconj_dual_value(&p);
        let n = p.num_constraints();
        for k in 0..=8 {
            let lam = Multiplier::new(vec![ratio(k, 2); n]).unwrap();
            prop_assert!(lagrange_inner(&p, &lam).unwrap().value <= dl.value);
            prop_assert!(cconj_inner(&p, &lam).unwrap().value <= db.value);
        }
        if let Some(Witness::Multiplier(m)) = &dl.witness {
            prop_assert_eq!(&lagrange_inner(&p, m).unwrap().value, &dl.value);
        }
        if let Some(Witness::Multiplier(m)) = &db.witness {
            prop_assert_eq!(&cconj_inner(&p, m).unwrap().value, &db.value);
        }
        prop_assert!(dl.value <= primal_value(&p).value);
    }

    #[test]
    fn fenchel_lagrange_witnesses_attain(seed in 0u64..10_000) {
        let p = corpus(seed, 1, Variant::General, 1).remove(0);
        let v = fl_dual_value(&p).unwrap();
        if let Some(Witness::MultiplierAndW { multiplier, w }) = &v.witness {
            prop_assert_eq!(&fl_objective(&p, multiplier, w).unwrap(), &v.value);
        }
        for k in 0..=4 {
            let lam = Multiplier::new(vec![int(k)]).unwrap();
            for x in -4..=4 {
                let w = WPoint::new(int(x), int(0), int(1));
                prop_assert!(fl_objective(&p, &lam, &w).unwrap() <= v.value);
            }
        }
        prop_assert!(v.value <= primal_value(&p).value);
        prop_assert!(fl_dual_value_bar(&p).unwrap().value >= v.value);
    }

    #[test]
    fn verdicts_match_values(seed in 0u64..10_000) {
        let p = corpus(seed, 1, Variant::General, 3).remove(0);
        prop_assert!(classify_bar_pair(&p).consistent);
        prop_assert!(classify_l_pair(&p).consistent);
        if p.num_constraints() == 1 {
            prop_assert!(classify_fl_pair(&p).unwrap().consistent);
        }
    }

    #[test]
    fn econvex_duals_coincide(seed in 0u64..10_000) {
        let p: DCProblem = corpus(seed, 1, Variant::EConvex, 2).remove(0);
        prop_assert_eq!(lagrange_dual_value(&p).value, cconj_dual_value(&p).value);
    }

    #[test]
    fn oracle_restriction_semantics(seed in 0u64..10_000) {
        let p = corpus(seed, 1, Variant::Bounded, 1).remove(0);
        let spec = GridSpec::new((int(-5), int(5)), (int(-3), int(3)), int(3), ratio(1, 4)).unwrap();
        let exact = [
            (Quantity::Primal, primal_value(&p).value),
            (Quantity::Lagrange, lagrange_dual_value(&p).value),
            (Quantity::CConjugate, cconj_dual_value(&p).value),
            (Quantity::FenchelLagrangeBar, fl_dual_value_bar(&p).unwrap().value),
        ];
        for (q, v) in exact {
            let b = approx_value(&p, q, &spec).unwrap();
            prop_assert!(b.contains(&v), "{} exact {} vs {}", q, v, b);
            prop_assert!(b.is_monotone());
        }
    }
}
