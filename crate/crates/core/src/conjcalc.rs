//! Fenchel conjugates, the c-conjugate over `W = ℝ × ℝ × ℝ`, and evenly
//! convex hulls of piecewise-affine functions.

use std::cmp::Ordering;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::extreal::{format_rational, int, rational_serde, ExtReal, Rational};
use crate::interval::Interval;
use crate::pwafun::{span_sample, Affine, PwaFunction, Segment};

/// A point `(x*, y*, α)` of `W`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WPoint {
    #[serde(with = "rational_serde")]
    pub xstar: Rational,
    #[serde(with = "rational_serde")]
    pub ystar: Rational,
    #[serde(with = "rational_serde")]
    pub alpha: Rational,
}

impl WPoint {
    pub fn new(xstar: Rational, ystar: Rational, alpha: Rational) -> Self {
        WPoint { xstar, ystar, alpha }
    }

    pub fn ints(x: i64, y: i64, a: i64) -> Self {
        WPoint::new(int(x), int(y), int(a))
    }
}

impl std::fmt::Display for WPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "({}, {}, {})",
            format_rational(&self.xstar),
            format_rational(&self.ystar),
            format_rational(&self.alpha)
        )
    }
}

/// `x·x*` when `x·y* < α`, `+∞` otherwise.
pub fn coupling_c(x: &Rational, w: &WPoint) -> ExtReal {
    if x * &w.ystar < w.alpha {
        ExtReal::Finite(x * &w.xstar)
    } else {
        ExtReal::PosInf
    }
}

/// The dual coupling `c′(w, x) = c(x, w)`.
pub fn coupling_cprime(w: &WPoint, x: &Rational) -> ExtReal {
    coupling_c(x, w)
}

/// `sup_{x ∈ I} x·y*` and whether the sup is attained.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupCertificate {
    pub sup_value: ExtReal,
    pub attained: bool,
}

pub fn sup_linear(dom: &Interval, ystar: &Rational) -> SupCertificate {
    match ystar.cmp(&Rational::zero()) {
        Ordering::Equal => SupCertificate { sup_value: ExtReal::zero(), attained: true },
        Ordering::Greater => match dom.hi.finite() {
            Some(b) => SupCertificate { sup_value: ExtReal::Finite(b * ystar), attained: dom.hi.closed },
            None => SupCertificate { sup_value: ExtReal::PosInf, attained: false },
        },
        Ordering::Less => match dom.lo.finite() {
            Some(a) => SupCertificate { sup_value: ExtReal::Finite(a * ystar), attained: dom.lo.closed },
            None => SupCertificate { sup_value: ExtReal::PosInf, attained: false },
        },
    }
}

/// Whether `dom ⊆ {x : x·y* < α}`. An empty domain is contained in every set.
pub fn halfspace_contains(dom: Option<&Interval>, ystar: &Rational, alpha: &Rational) -> bool {
    let Some(dom) = dom else { return true };
    let s = sup_linear(dom, ystar);
    let a = ExtReal::Finite(alpha.clone());
    s.sup_value < a || (s.sup_value == a && !s.attained)
}

pub fn halfspace_contains_dom(f: &PwaFunction, ystar: &Rational, alpha: &Rational) -> bool {
    halfspace_contains(f.domain_hull().as_ref(), ystar, alpha)
}

/// A line `u ↦ slope·u − offset` contributed to a conjugate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Line {
    pub slope: Rational,
    pub offset: Rational,
}

/// The conjugate `F*` as an upper envelope of lines over `[lower, upper]`.
#[derive(Clone, Debug)]
pub(crate) enum ConjugateShape {
    /// `F` takes `-∞` somewhere.
    AllPosInf,
    /// `F ≡ +∞`.
    AllNegInf,
    Lines { lines: Vec<Line>, lower: ExtReal, upper: ExtReal },
}

/// Lines and slope bounds of `F*` read off the cells of `F`.
pub(crate) fn conjugate_shape(f: &PwaFunction) -> ConjugateShape {
    if f.has_neg_inf() {
        return ConjugateShape::AllPosInf;
    }
    if f.domain_is_empty() {
        return ConjugateShape::AllNegInf;
    }
    let mut lines = vec![];
    let mut lower = ExtReal::NegInf;
    let mut upper = ExtReal::PosInf;
    for (k, v) in f.knots().iter().zip(f.knot_values()) {
        if let ExtReal::Finite(v) = v {
            lines.push(Line { slope: k.clone(), offset: v.clone() });
        }
    }
    for (i, s) in f.spans().iter().enumerate() {
        let Segment::Affine(a) = s else { continue };
        let (lo, hi) = f.span_bounds(i);
        match &lo {
            ExtReal::Finite(l) => lines.push(Line { slope: l.clone(), offset: a.at(l) }),
            _ => lower = lower.max(ExtReal::Finite(a.slope.clone())),
        }
        match &hi {
            ExtReal::Finite(h) => lines.push(Line { slope: h.clone(), offset: a.at(h) }),
            _ => upper = upper.min(ExtReal::Finite(a.slope.clone())),
        }
        if lo.is_infinite() && hi.is_infinite() {
            lines.push(Line { slope: Rational::zero(), offset: a.intercept.clone() });
        }
    }
    ConjugateShape::Lines { lines, lower, upper }
}

/// Upper envelope of `lines`, as (breakpoints, lines between them).
fn upper_envelope(mut lines: Vec<Line>) -> (Vec<Rational>, Vec<Line>) {
    // highest line first among equal slopes
    lines.sort_by(|a, b| a.slope.cmp(&b.slope).then(a.offset.cmp(&b.offset)));
    lines.dedup_by(|later, earlier| later.slope == earlier.slope);
    let cross = |a: &Line, b: &Line| (&b.offset - &a.offset) / (&b.slope - &a.slope);
    let mut hull: Vec<Line> = vec![];
    for l in lines {
        while hull.len() >= 2 {
            let n = hull.len();
            if cross(&hull[n - 2], &hull[n - 1]) >= cross(&hull[n - 1], &l) {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(l);
    }
    let breaks = hull.windows(2).map(|w| cross(&w[0], &w[1])).collect();
    (breaks, hull)
}

/// Exact Fenchel conjugate `F*(u) = sup_x {x·u − F(x)}` of any
/// piecewise-affine `F`, convex or not.
pub fn fenchel_conjugate(f: &PwaFunction) -> PwaFunction {
    match conjugate_shape(f) {
        ConjugateShape::AllPosInf => PwaFunction::infinite(),
        ConjugateShape::AllNegInf => PwaFunction::constant_segment(Segment::NegInf),
        ConjugateShape::Lines { lines, lower, upper } => envelope_on(lines, &lower, &upper),
    }
}

fn envelope_on(lines: Vec<Line>, lower: &ExtReal, upper: &ExtReal) -> PwaFunction {
    if lower > upper {
        return PwaFunction::infinite();
    }
    let (breaks, hull) = upper_envelope(lines);
    let inside = |u: &Rational| {
        let u = ExtReal::Finite(u.clone());
        &u >= lower && &u <= upper
    };
    let line_at = |u: &Rational| {
        let i = breaks.partition_point(|b| b < u);
        &hull[i]
    };
    let mut knots: Vec<Rational> = breaks.iter().filter(|b| inside(b)).cloned().collect();
    knots.extend([lower.finite(), upper.finite()].into_iter().flatten().cloned());
    knots.sort();
    knots.dedup();
    let values = knots
        .iter()
        .map(|k| {
            let l = line_at(k);
            ExtReal::Finite(&l.slope * k - &l.offset)
        })
        .collect();
    let spans = (0..=knots.len())
        .map(|i| {
            let u = span_sample(&knots, i);
            if inside(&u) {
                let l = line_at(&u);
                Segment::Affine(Affine::new(l.slope.clone(), -l.offset.clone()))
            } else {
                Segment::PosInf
            }
        })
        .collect();
    PwaFunction::from_cells(knots, values, spans)
}

/// `f^c`, stored as the pair `(f*, dom f)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CConjugate {
    pub fstar: PwaFunction,
    /// Smallest interval containing `dom f`; `None` when `f ≡ +∞`.
    pub dom: Option<Interval>,
}

impl CConjugate {
    /// `f*(x*)` if `dom f ⊆ H⁻_{y*,α}`, `+∞` otherwise.
    pub fn eval_c(&self, w: &WPoint) -> ExtReal {
        if halfspace_contains(self.dom.as_ref(), &w.ystar, &w.alpha) {
            self.fstar.eval(&w.xstar)
        } else {
            ExtReal::PosInf
        }
    }

    /// Whether `w ∈ dom f^c`.
    pub fn in_domain(&self, w: &WPoint) -> bool {
        self.eval_c(w) < ExtReal::PosInf
    }
}

pub fn c_conjugate(f: &PwaFunction) -> CConjugate {
    CConjugate { fstar: fenchel_conjugate(f), dom: f.domain_hull() }
}

/// `f^{cc′}(x) = sup_W {c′(w, x) − f^c(w)}` in closed form: the closed
/// convex hull `f**` on the domain hull of `f` (with its open ends), `+∞`
/// off it.
pub fn biconjugate_ccprime(f: &PwaFunction) -> PwaFunction {
    if f.has_neg_inf() {
        return PwaFunction::constant_segment(Segment::NegInf);
    }
    let Some(hull) = f.domain_hull() else {
        return PwaFunction::infinite();
    };
    let fstar = fenchel_conjugate(f);
    if fstar.domain_is_empty() {
        // no affine minorant: every c′(w, x) − (+∞) is −∞
        return PwaFunction::constant_segment(Segment::NegInf);
    }
    fenchel_conjugate(&fstar).add(&PwaFunction::indicator_of(&hull))
}

/// Evenly convex hull; identical to [`biconjugate_ccprime`] for the inputs
/// handled here.
pub fn eco_hull(f: &PwaFunction) -> PwaFunction {
    biconjugate_ccprime(f)
}

pub fn is_econvex_at(f: &PwaFunction, x: &Rational) -> bool {
    f.eval(x) == eco_hull(f).eval(x)
}

pub fn is_econvex(f: &PwaFunction) -> bool {
    *f == eco_hull(f)
}

/// Whether each closed finite end of the domain carries the inner limit
/// value (no upward jump at the boundary).
pub fn is_lsc_at_domain_ends(f: &PwaFunction) -> bool {
    let Some(hull) = f.domain_hull() else { return true };
    let ok = [(&hull.lo, false), (&hull.hi, true)].into_iter().all(|(end, inner_on_left)| {
        let Some(x) = end.finite() else { return true };
        if !end.closed {
            return true;
        }
        match f.segment_near(x, inner_on_left) {
            Segment::Affine(a) => f.eval(x) == ExtReal::Finite(a.at(x)),
            _ => true,
        }
    });
    ok
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extreal::ratio;
    use crate::instances::{abs, jump_ramp, neg_ramp, ramp};
    use crate::interval::EndPoint;
    use num_traits::Signed;

    fn fin(n: i64) -> ExtReal {
        ExtReal::from_int(n)
    }

    #[test]
    fn coupling_examples() {
        assert_eq!(coupling_c(&int(0), &WPoint::ints(1, -1, 1)), fin(0));
        assert_eq!(coupling_c(&int(2), &WPoint::ints(3, 1, 2)), ExtReal::PosInf);
        assert_eq!(coupling_c(&int(1), &WPoint::ints(5, 0, 1)), fin(5));
        assert_eq!(coupling_cprime(&WPoint::ints(5, 0, 1), &int(1)), fin(5));
    }

    #[test]
    fn conjugate_of_ramp() {
        let fs = fenchel_conjugate(&ramp());
        let expected = PwaFunction::indicator_of(&Interval::new(EndPoint::neg_inf(), EndPoint::closed(int(1))).unwrap());
        assert_eq!(fs, expected);
    }

    #[test]
    fn conjugate_of_zero_is_origin_indicator() {
        assert_eq!(fenchel_conjugate(&PwaFunction::zero()), PwaFunction::indicator_of(&Interval::point(int(0))));
    }

    /// Grid sup over `x ∈ [−10, 10]` at step 1/100.
    fn grid_conjugate(f: &PwaFunction, u: &Rational) -> ExtReal {
        (-1000..=1000)
            .map(|i| ratio(i, 100))
            .map(|x| crate::extreal::sub_lower(&ExtReal::Finite(&x * u), &f.eval(&x)))
            .max()
            .unwrap()
    }

    #[test]
    fn conjugate_of_abs_matches_grid() {
        let fs = fenchel_conjugate(&abs());
        for i in -8..=8 {
            let u = ratio(i, 8);
            assert_eq!(fs.eval(&u), fin(0));
            assert_eq!(grid_conjugate(&abs(), &u), fin(0));
        }
        for u in [ratio(9, 8), int(2), int(-3)] {
            assert_eq!(fs.eval(&u), ExtReal::PosInf);
            // grid value keeps growing with the range
            assert!(grid_conjugate(&abs(), &u) >= ExtReal::Finite((u.abs() - int(1)) * int(10)));
        }
    }

    #[test]
    fn conjugate_of_nonconvex_function() {
        // min(|x|, 1) on [-2, 2]: conjugate equals that of the convex hull of the graph
        let pieces = r#"{"pieces":[
            {"lo":-2,"lo_closed":true,"hi":-1,"hi_closed":false,"slope":0,"intercept":1},
            {"lo":-1,"lo_closed":true,"hi":0,"hi_closed":false,"slope":-1,"intercept":0},
            {"lo":0,"lo_closed":true,"hi":1,"hi_closed":true,"slope":1,"intercept":0},
            {"lo":1,"lo_closed":false,"hi":2,"hi_closed":true,"slope":0,"intercept":1}]}"#;
        let f: PwaFunction = serde_json::from_str(pieces).unwrap();
        let fs = fenchel_conjugate(&f);
        for i in -40..=40 {
            let u = ratio(i, 10);
            let grid = (-200..=200)
                .map(|j| ratio(j, 100))
                .map(|x| crate::extreal::sub_lower(&ExtReal::Finite(&x * &u), &f.eval(&x)))
                .max()
                .unwrap();
            assert_eq!(fs.eval(&u), grid, "u = {u}");
        }
    }

    #[test]
    fn halfspace_examples() {
        let nonneg = ramp();
        assert!(halfspace_contains_dom(&nonneg, &int(-1), &int(1)));
        assert!(!halfspace_contains_dom(&nonneg, &int(0), &int(0)));
        let open = PwaFunction::indicator_of(&Interval::new(EndPoint::open(int(0)), EndPoint::open(int(1))).unwrap());
        assert!(halfspace_contains_dom(&open, &int(1), &int(1)));
        assert!(!halfspace_contains_dom(&open, &int(1), &ratio(1, 2)));
    }

    #[test]
    fn c_conjugate_of_jump_ramp() {
        let gc = c_conjugate(&jump_ramp());
        assert_eq!(gc.eval_c(&WPoint::ints(0, -1, 1)), fin(0));
        assert_eq!(gc.eval_c(&WPoint::ints(2, -1, 1)), ExtReal::PosInf);
        assert_eq!(gc.eval_c(&WPoint::ints(0, 1, 5)), ExtReal::PosInf);
        assert_eq!(gc.eval_c(&WPoint::ints(1, 0, 1)), fin(0));
        assert_eq!(gc.eval_c(&WPoint::ints(1, 0, 0)), ExtReal::PosInf);
    }

    /// `sup_w {c′(w, x) − f^c(w)}` over a rational box of `W`.
    fn definitional_ccprime(f: &PwaFunction, x: &Rational) -> ExtReal {
        let fc = c_conjugate(f);
        let mut best = ExtReal::NegInf;
        for xs in (-40..=10).map(|i| ratio(i, 4)) {
            for ys in (-4..=4).map(|i| ratio(i, 2)) {
                for a in (-4..=4).map(|i| ratio(i, 2)) {
                    let w = WPoint::new(xs.clone(), ys.clone(), a);
                    let fcw = fc.eval_c(&w);
                    if fcw == ExtReal::PosInf {
                        continue;
                    }
                    best = best.max(crate::extreal::sub_lower(&coupling_cprime(&w, x), &fcw));
                }
            }
        }
        best
    }

    #[test]
    fn eco_hull_of_jump_ramp() {
        let g = jump_ramp();
        let eco = eco_hull(&g);
        assert_eq!(eco, ramp());
        assert_eq!(biconjugate_ccprime(&g).eval(&int(0)), fin(0));
        assert_eq!(biconjugate_ccprime(&g).eval(&int(2)), fin(2));
        assert_eq!(definitional_ccprime(&g, &int(0)), fin(0));
        assert_eq!(definitional_ccprime(&g, &int(2)), fin(2));
        assert_eq!(definitional_ccprime(&g, &int(-1)), ExtReal::PosInf);
        assert!(!is_econvex_at(&g, &int(0)));
        assert!(is_econvex_at(&g, &int(3)));
        assert!(is_econvex_at(&ramp(), &int(0)));
        assert!(!is_econvex(&g));
        assert!(is_econvex(&ramp()));
        assert!(is_econvex(&neg_ramp()));
    }

    #[test]
    fn open_interval_indicator_is_econvex() {
        let f = PwaFunction::indicator_of(&Interval::new(EndPoint::open(int(0)), EndPoint::open(int(1))).unwrap());
        assert_eq!(biconjugate_ccprime(&f).eval(&int(0)), ExtReal::PosInf);
        assert_eq!(definitional_ccprime(&f, &int(0)), ExtReal::PosInf);
        assert_eq!(definitional_ccprime(&f, &ratio(1, 2)), fin(0));
        assert!(is_econvex(&f));
    }

    #[test]
    fn lsc_at_ends() {
        assert!(is_lsc_at_domain_ends(&ramp()));
        assert!(!is_lsc_at_domain_ends(&jump_ramp()));
    }
}
