//! Piecewise-affine extended-real functions on the real line.
//!
//! A [`PwaFunction`] is stored in a canonical cell form: finitely many knots
//! `k_0 < k_1 < … < k_{n-1}` with an explicit value at every knot, and one
//! [`Segment`] on each of the `n + 1` open spans between consecutive knots
//! (the outer spans are unbounded). Knots that carry no information are
//! removed, so two functions are equal exactly when their representations
//! are equal.
//!
//! The user-facing literal form is a list of affine pieces over intervals
//! with open or closed ends plus isolated point overrides; jumps of a convex
//! function at a closed end of its domain are written as overrides.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::extreal::{format_rational, int, rational_serde, ExtReal, Rational};
use crate::interval::{EndPoint, Interval};
use crate::value::{DualValue, Witness};
use crate::Error;

/// `x ↦ slope·x + intercept`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Affine {
    pub slope: Rational,
    pub intercept: Rational,
}

impl Affine {
    pub fn new(slope: Rational, intercept: Rational) -> Self {
        Affine { slope, intercept }
    }

    pub fn at(&self, x: &Rational) -> Rational {
        &self.slope * x + &self.intercept
    }
}

/// The behaviour of a function on one open span.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Segment {
    Affine(Affine),
    PosInf,
    NegInf,
}

impl Segment {
    pub fn at(&self, x: &Rational) -> ExtReal {
        match self {
            Segment::Affine(a) => ExtReal::Finite(a.at(x)),
            Segment::PosInf => ExtReal::PosInf,
            Segment::NegInf => ExtReal::NegInf,
        }
    }

    fn in_domain(&self) -> bool {
        !matches!(self, Segment::PosInf)
    }
}

/// Location of a point relative to the knots.
enum Locus {
    Knot(usize),
    Span(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PwaFunction {
    knots: Vec<Rational>,
    values: Vec<ExtReal>,
    spans: Vec<Segment>,
}

/// An affine piece of a function literal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Piece {
    pub interval: Interval,
    pub slope: Rational,
    pub intercept: Rational,
}

/// An isolated point value that replaces whatever the pieces say.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Override {
    pub x: Rational,
    pub value: Rational,
}

/// Why a function failed the convexity test, with a midpoint-violation
/// triple `(x1, x2, (x1+x2)/2)` when one was found.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvexityViolation {
    pub reason: String,
    pub triple: Option<(Rational, Rational, Rational)>,
}

impl fmt::Display for ConvexityViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.reason)?;
        if let Some((a, b, m)) = &self.triple {
            write!(
                f,
                " (midpoint violation at x1={}, x2={}, mid={})",
                format_rational(a),
                format_rational(b),
                format_rational(m)
            )?;
        }
        Ok(())
    }
}

fn two() -> Rational {
    int(2)
}

impl PwaFunction {
    /// Builds from raw cells and canonicalizes. `spans.len()` must be
    /// `knots.len() + 1` and knots strictly increasing.
    pub fn from_cells(knots: Vec<Rational>, values: Vec<ExtReal>, spans: Vec<Segment>) -> Self {
        assert_eq!(knots.len(), values.len());
        assert_eq!(spans.len(), knots.len() + 1);
        debug_assert!(knots.windows(2).all(|w| w[0] < w[1]));
        let mut out = PwaFunction {
            knots: Vec::with_capacity(knots.len()),
            values: Vec::with_capacity(knots.len()),
            spans: Vec::with_capacity(spans.len()),
        };
        let mut spans = spans.into_iter();
        out.spans.push(spans.next().unwrap());
        for ((k, v), right) in knots.into_iter().zip(values).zip(spans) {
            let left = out.spans.last().unwrap();
            if *left == right && left.at(&k) == v {
                continue;
            }
            out.knots.push(k);
            out.values.push(v);
            out.spans.push(right);
        }
        out
    }

    /// The function that is `+∞` everywhere.
    pub fn infinite() -> Self {
        Self::constant_segment(Segment::PosInf)
    }

    pub fn constant_segment(seg: Segment) -> Self {
        PwaFunction { knots: vec![], values: vec![], spans: vec![seg] }
    }

    /// The zero function on the whole line.
    pub fn zero() -> Self {
        Self::affine(Rational::zero(), Rational::zero())
    }

    /// An affine function on the whole line.
    pub fn affine(slope: Rational, intercept: Rational) -> Self {
        Self::constant_segment(Segment::Affine(Affine::new(slope, intercept)))
    }

    /// `slope·x + intercept` on `interval`, `+∞` elsewhere.
    pub fn affine_on(interval: &Interval, slope: Rational, intercept: Rational) -> Self {
        Self::from_pieces(&[Piece { interval: interval.clone(), slope, intercept }], &[])
            .expect("a single piece is always well formed")
    }

    /// The indicator function of `interval` (0 inside, `+∞` outside).
    pub fn indicator_of(interval: &Interval) -> Self {
        Self::affine_on(interval, Rational::zero(), Rational::zero())
    }

    /// Builds from pieces and overrides, validating disjointness.
    pub fn from_pieces(pieces: &[Piece], overrides: &[Override]) -> Result<Self, Error> {
        for (i, a) in pieces.iter().enumerate() {
            for b in &pieces[i + 1..] {
                if a.interval.intersect(&b.interval).is_some() {
                    return Err(Error::Invalid(format!(
                        "pieces on {} and {} overlap",
                        a.interval, b.interval
                    )));
                }
            }
        }
        for (i, a) in overrides.iter().enumerate() {
            if overrides[i + 1..].iter().any(|b| b.x == a.x) {
                return Err(Error::Invalid(format!(
                    "duplicate override at x = {}",
                    format_rational(&a.x)
                )));
            }
        }
        let mut knots: Vec<Rational> = pieces
            .iter()
            .flat_map(|p| [p.interval.lo.finite().cloned(), p.interval.hi.finite().cloned()])
            .flatten()
            .chain(overrides.iter().map(|o| o.x.clone()))
            .collect();
        knots.sort();
        knots.dedup();
        let piece_at = |x: &Rational| pieces.iter().find(|p| p.interval.contains(x));
        let values = knots
            .iter()
            .map(|k| match overrides.iter().find(|o| &o.x == k) {
                Some(o) => ExtReal::Finite(o.value.clone()),
                None => match piece_at(k) {
                    Some(p) => ExtReal::Finite(&p.slope * k + &p.intercept),
                    None => ExtReal::PosInf,
                },
            })
            .collect();
        let spans = (0..=knots.len())
            .map(|i| {
                let x = span_sample(&knots, i);
                match piece_at(&x) {
                    Some(p) => Segment::Affine(Affine::new(p.slope.clone(), p.intercept.clone())),
                    None => Segment::PosInf,
                }
            })
            .collect();
        Ok(Self::from_cells(knots, values, spans))
    }

    pub fn knots(&self) -> &[Rational] {
        &self.knots
    }

    pub fn knot_values(&self) -> &[ExtReal] {
        &self.values
    }

    pub fn spans(&self) -> &[Segment] {
        &self.spans
    }

    /// The open interval covered by span `i`.
    pub fn span_bounds(&self, i: usize) -> (ExtReal, ExtReal) {
        let lo = if i == 0 { ExtReal::NegInf } else { ExtReal::Finite(self.knots[i - 1].clone()) };
        let hi = match self.knots.get(i) {
            Some(k) => ExtReal::Finite(k.clone()),
            None => ExtReal::PosInf,
        };
        (lo, hi)
    }

    fn locate(&self, x: &Rational) -> Locus {
        match self.knots.binary_search(x) {
            Ok(i) => Locus::Knot(i),
            Err(i) => Locus::Span(i),
        }
    }

    pub fn eval(&self, x: &Rational) -> ExtReal {
        match self.locate(x) {
            Locus::Knot(i) => self.values[i].clone(),
            Locus::Span(i) => self.spans[i].at(x),
        }
    }

    /// Segment in effect just left (`from_left`) or right of `x`.
    pub fn segment_near(&self, x: &Rational, from_left: bool) -> &Segment {
        match self.locate(x) {
            Locus::Span(i) => &self.spans[i],
            Locus::Knot(i) => &self.spans[if from_left { i } else { i + 1 }],
        }
    }

    /// Same function with extra (redundant) knots inserted; not canonical.
    fn refined(&self, extra: &[Rational]) -> (Vec<Rational>, Vec<ExtReal>, Vec<Segment>) {
        let mut knots: Vec<Rational> = self.knots.iter().chain(extra).cloned().collect();
        knots.sort();
        knots.dedup();
        let values = knots.iter().map(|k| self.eval(k)).collect();
        let spans = (0..=knots.len())
            .map(|i| self.segment_near(&span_sample(&knots, i), true).clone())
            .collect();
        (knots, values, spans)
    }

    /// Pointwise combination on the common refinement.
    fn zip_with(
        &self,
        other: &PwaFunction,
        point: impl Fn(&ExtReal, &ExtReal) -> ExtReal,
        segment: impl Fn(&Segment, &Segment) -> Segment,
    ) -> PwaFunction {
        let mut knots: Vec<Rational> = self.knots.iter().chain(&other.knots).cloned().collect();
        knots.sort();
        knots.dedup();
        let values = knots.iter().map(|k| point(&self.eval(k), &other.eval(k))).collect();
        let spans = (0..=knots.len())
            .map(|i| {
                let x = span_sample(&knots, i);
                segment(self.segment_near(&x, true), other.segment_near(&x, true))
            })
            .collect();
        PwaFunction::from_cells(knots, values, spans)
    }

    /// Pointwise sum with `+∞` absorbing (the domain is the intersection).
    pub fn add(&self, other: &PwaFunction) -> PwaFunction {
        self.zip_with(
            other,
            |a, b| match (a, b) {
                (ExtReal::PosInf, _) | (_, ExtReal::PosInf) => ExtReal::PosInf,
                (ExtReal::NegInf, _) | (_, ExtReal::NegInf) => ExtReal::NegInf,
                (ExtReal::Finite(x), ExtReal::Finite(y)) => ExtReal::Finite(x + y),
            },
            |a, b| match (a, b) {
                (Segment::PosInf, _) | (_, Segment::PosInf) => Segment::PosInf,
                (Segment::NegInf, _) | (_, Segment::NegInf) => Segment::NegInf,
                (Segment::Affine(p), Segment::Affine(q)) => Segment::Affine(Affine::new(
                    &p.slope + &q.slope,
                    &p.intercept + &q.intercept,
                )),
            },
        )
    }

    /// `self - other`, `+∞` wherever `self` is `+∞` and otherwise following
    /// the `-∞`-priority rule (so `finite - (+∞) = -∞`).
    pub fn sub_dc(&self, other: &PwaFunction) -> PwaFunction {
        self.zip_with(
            other,
            |a, b| match a {
                ExtReal::PosInf => ExtReal::PosInf,
                _ => crate::extreal::sub_lower(a, b),
            },
            |a, b| match (a, b) {
                (Segment::PosInf, _) => Segment::PosInf,
                (Segment::NegInf, _) | (_, Segment::PosInf) => Segment::NegInf,
                (Segment::Affine(_), Segment::NegInf) => Segment::PosInf,
                (Segment::Affine(p), Segment::Affine(q)) => Segment::Affine(Affine::new(
                    &p.slope - &q.slope,
                    &p.intercept - &q.intercept,
                )),
            },
        )
    }

    /// `q·F` for `q > 0`; `q = 0` yields the zero function on the whole line.
    pub fn scaled(&self, q: &Rational) -> PwaFunction {
        assert!(!q.is_negative(), "negative scale factor");
        if q.is_zero() {
            return PwaFunction::zero();
        }
        let values = self
            .values
            .iter()
            .map(|v| match v {
                ExtReal::Finite(x) => ExtReal::Finite(x * q),
                other => other.clone(),
            })
            .collect();
        let spans = self
            .spans
            .iter()
            .map(|s| match s {
                Segment::Affine(a) => Segment::Affine(Affine::new(&a.slope * q, &a.intercept * q)),
                other => other.clone(),
            })
            .collect();
        PwaFunction::from_cells(self.knots.clone(), values, spans)
    }

    /// `u ↦ F(u - t)`.
    pub fn translated(&self, t: &Rational) -> PwaFunction {
        let knots = self.knots.iter().map(|k| k + t).collect();
        let spans = self
            .spans
            .iter()
            .map(|s| match s {
                Segment::Affine(a) => {
                    Segment::Affine(Affine::new(a.slope.clone(), &a.intercept - &a.slope * t))
                }
                other => other.clone(),
            })
            .collect();
        PwaFunction::from_cells(knots, self.values.clone(), spans)
    }

    /// Replaces the values on `interval` by the constant segment `seg`.
    pub fn overlay(&self, interval: &Interval, seg: Segment) -> PwaFunction {
        let extra: Vec<Rational> =
            [interval.lo.finite(), interval.hi.finite()].into_iter().flatten().cloned().collect();
        let (knots, mut values, mut spans) = self.refined(&extra);
        for (k, v) in knots.iter().zip(values.iter_mut()) {
            if interval.contains(k) {
                *v = seg.at(k);
            }
        }
        for (i, s) in spans.iter_mut().enumerate() {
            if interval.contains(&span_sample(&knots, i)) {
                *s = seg.clone();
            }
        }
        PwaFunction::from_cells(knots, values, spans)
    }

    pub fn has_neg_inf(&self) -> bool {
        self.values.contains(&ExtReal::NegInf)
            || self.spans.contains(&Segment::NegInf)
    }

    pub fn domain_is_empty(&self) -> bool {
        self.values.iter().all(|v| *v == ExtReal::PosInf)
            && self.spans.iter().all(|s| *s == Segment::PosInf)
    }

    /// Never `-∞` and somewhere finite.
    pub fn is_proper(&self) -> bool {
        !self.has_neg_inf() && !self.domain_is_empty()
    }

    /// Cells in order: span 0, knot 0, span 1, …; `true` when in the domain.
    fn cell_in_domain(&self) -> Vec<bool> {
        let mut out = Vec::with_capacity(2 * self.knots.len() + 1);
        for i in 0..self.spans.len() {
            out.push(self.spans[i].in_domain());
            if let Some(v) = self.values.get(i) {
                out.push(*v != ExtReal::PosInf);
            }
        }
        out
    }

    fn cell_lower_end(&self, cell: usize) -> EndPoint {
        if cell % 2 == 1 {
            EndPoint::closed(self.knots[cell / 2].clone())
        } else if cell == 0 {
            EndPoint::neg_inf()
        } else {
            EndPoint::open(self.knots[cell / 2 - 1].clone())
        }
    }

    fn cell_upper_end(&self, cell: usize) -> EndPoint {
        if cell % 2 == 1 {
            EndPoint::closed(self.knots[cell / 2].clone())
        } else {
            match self.knots.get(cell / 2) {
                Some(k) => EndPoint::open(k.clone()),
                None => EndPoint::pos_inf(),
            }
        }
    }

    /// Smallest interval containing the effective domain, with the open or
    /// closed ends the domain actually has. `None` when the domain is empty.
    pub fn domain_hull(&self) -> Option<Interval> {
        let cells = self.cell_in_domain();
        let first = cells.iter().position(|&c| c)?;
        let last = cells.iter().rposition(|&c| c)?;
        Some(Interval { lo: self.cell_lower_end(first), hi: self.cell_upper_end(last) })
    }

    /// The effective domain as a list of maximal intervals.
    pub fn domain_components(&self) -> Vec<Interval> {
        let cells = self.cell_in_domain();
        let mut out = vec![];
        let mut start = None;
        for (c, &inside) in cells.iter().enumerate() {
            match (inside, start) {
                (true, None) => start = Some(c),
                (false, Some(s)) => {
                    out.push(Interval { lo: self.cell_lower_end(s), hi: self.cell_upper_end(c - 1) });
                    start = None;
                }
                _ => {}
            }
        }
        if let Some(s) = start {
            out.push(Interval { lo: self.cell_lower_end(s), hi: self.cell_upper_end(cells.len() - 1) });
        }
        out
    }

    /// 0 on the effective domain, `+∞` elsewhere.
    pub fn domain_indicator(&self) -> PwaFunction {
        let zero = |inside: bool| if inside { ExtReal::zero() } else { ExtReal::PosInf };
        let values = self.values.iter().map(|v| zero(*v != ExtReal::PosInf)).collect();
        let spans = self
            .spans
            .iter()
            .map(|s| {
                if s.in_domain() {
                    Segment::Affine(Affine::new(Rational::zero(), Rational::zero()))
                } else {
                    Segment::PosInf
                }
            })
            .collect();
        PwaFunction::from_cells(self.knots.clone(), values, spans)
    }

    /// Knots plus one interior sample per span.
    pub fn critical_points(&self) -> Vec<Rational> {
        let mut pts: Vec<Rational> = self.knots.clone();
        pts.extend((0..self.spans.len()).map(|i| span_sample(&self.knots, i)));
        pts.sort();
        pts.dedup();
        pts
    }

    /// Critical points plus points approaching every knot from both sides.
    pub fn probe_points(&self) -> Vec<Rational> {
        let mut pts = self.critical_points();
        for (i, k) in self.knots.iter().enumerate() {
            let left = if i == 0 { int(1) } else { k - &self.knots[i - 1] };
            let right = match self.knots.get(i + 1) {
                Some(n) => n - k,
                None => int(1),
            };
            let mut eps = left.min(right) / two();
            for _ in 0..5 {
                pts.push(k - &eps);
                pts.push(k + &eps);
                eps /= two();
            }
        }
        pts.sort();
        pts.dedup();
        pts
    }

    /// Exact infimum over the line with attainment and a minimizer.
    pub fn infimum(&self) -> DualValue {
        let mut best = DualValue::pos_inf();
        let mut consider = |value: ExtReal, at: Option<Rational>| {
            let cand = match (value, at) {
                (ExtReal::Finite(v), Some(x)) => DualValue::attained(v, Witness::Point(x)),
                (v, _) => DualValue::unattained(v),
            };
            if cand.value < best.value || (cand.value == best.value && cand.attained && !best.attained) {
                best = cand;
            }
        };
        for (k, v) in self.knots.iter().zip(&self.values) {
            consider(v.clone(), Some(k.clone()));
        }
        for (i, s) in self.spans.iter().enumerate() {
            let (lo, hi) = self.span_bounds(i);
            match s {
                Segment::PosInf => {}
                Segment::NegInf => consider(ExtReal::NegInf, None),
                Segment::Affine(a) => {
                    if a.slope.is_zero() {
                        consider(ExtReal::Finite(a.intercept.clone()), Some(span_sample(&self.knots, i)));
                    } else {
                        let end = if a.slope.is_positive() { lo } else { hi };
                        match end {
                            ExtReal::Finite(x) => consider(ExtReal::Finite(a.at(&x)), None),
                            _ => consider(ExtReal::NegInf, None),
                        }
                    }
                }
            }
        }
        best
    }

    /// `None` when the function is convex, otherwise a description of the
    /// first failure found.
    pub fn convexity_violation(&self) -> Option<ConvexityViolation> {
        let reason = self.structural_convexity_failure()?;
        Some(ConvexityViolation { reason, triple: self.midpoint_violation() })
    }

    pub fn is_convex(&self) -> bool {
        self.structural_convexity_failure().is_none()
    }

    fn structural_convexity_failure(&self) -> Option<String> {
        if self.has_neg_inf() {
            return Some("function takes the value -inf".into());
        }
        let cells = self.cell_in_domain();
        if let (Some(first), Some(last)) =
            (cells.iter().position(|&c| c), cells.iter().rposition(|&c| c))
        {
            if let Some(gap) = (first..=last).find(|&c| !cells[c]) {
                let where_ = if gap % 2 == 1 {
                    format!("x = {}", format_rational(&self.knots[gap / 2]))
                } else {
                    let (lo, hi) = self.span_bounds(gap / 2);
                    format!("({lo}, {hi})")
                };
                return Some(format!("domain is not an interval: gap at {where_}"));
            }
        }
        for (i, (k, v)) in self.knots.iter().zip(&self.values).enumerate() {
            let ExtReal::Finite(v) = v else { continue };
            let left = match &self.spans[i] {
                Segment::Affine(a) => Some(a),
                _ => None,
            };
            let right = match &self.spans[i + 1] {
                Segment::Affine(a) => Some(a),
                _ => None,
            };
            let at = format_rational(k);
            match (left, right) {
                (Some(l), Some(r)) => {
                    let (lv, rv) = (l.at(k), r.at(k));
                    if lv != rv {
                        return Some(format!("jump discontinuity at interior point x = {at}"));
                    }
                    if *v != lv {
                        return Some(format!(
                            "value {} at interior point x = {at} differs from the limit {}",
                            format_rational(v),
                            format_rational(&lv)
                        ));
                    }
                    if l.slope > r.slope {
                        return Some(format!("slope decreases at x = {at}"));
                    }
                }
                (Some(side), None) | (None, Some(side)) => {
                    let lim = side.at(k);
                    if *v < lim {
                        return Some(format!(
                            "value {} at domain end x = {at} is below the limit {}",
                            format_rational(v),
                            format_rational(&lim)
                        ));
                    }
                }
                (None, None) => {}
            }
        }
        None
    }

    /// Searches probe points for `F((x1+x2)/2) > (F(x1)+F(x2))/2`.
    fn midpoint_violation(&self) -> Option<(Rational, Rational, Rational)> {
        let pts: Vec<(Rational, Rational)> = self
            .probe_points()
            .into_iter()
            .filter_map(|x| self.eval(&x).finite().cloned().map(|v| (x, v)))
            .collect();
        for (i, (x1, v1)) in pts.iter().enumerate() {
            for (x2, v2) in &pts[i + 1..] {
                let mid = (x1 + x2) / two();
                let avg = (v1 + v2) / two();
                if self.eval(&mid) > ExtReal::Finite(avg) {
                    return Some((x1.clone(), x2.clone(), mid));
                }
            }
        }
        None
    }

    /// Affine pieces of the literal form (finite part only).
    pub fn pieces(&self) -> Vec<Piece> {
        self.literal_parts().0
    }

    /// Point overrides of the literal form.
    pub fn overrides(&self) -> Vec<Override> {
        self.literal_parts().1
    }

    /// Maximal intervals on which the function is `-∞`.
    pub fn neg_inf_parts(&self) -> Vec<Interval> {
        let n = 2 * self.knots.len() + 1;
        let is_neg = |c: usize| {
            if c.is_multiple_of(2) {
                self.spans[c / 2] == Segment::NegInf
            } else {
                self.values[c / 2] == ExtReal::NegInf
            }
        };
        let mut out = vec![];
        let mut c = 0;
        while c < n {
            if is_neg(c) {
                let start = c;
                while c + 1 < n && is_neg(c + 1) {
                    c += 1;
                }
                out.push(Interval { lo: self.cell_lower_end(start), hi: self.cell_upper_end(c) });
            }
            c += 1;
        }
        out
    }

    fn literal_parts(&self) -> (Vec<Piece>, Vec<Override>) {
        let mut pieces: Vec<Option<Piece>> = (0..self.spans.len())
            .map(|i| match &self.spans[i] {
                Segment::Affine(a) => Some(Piece {
                    interval: Interval { lo: self.cell_lower_end(2 * i), hi: self.cell_upper_end(2 * i) },
                    slope: a.slope.clone(),
                    intercept: a.intercept.clone(),
                }),
                _ => None,
            })
            .collect();
        let mut overrides = vec![];
        for (i, (k, v)) in self.knots.iter().zip(&self.values).enumerate() {
            let ExtReal::Finite(v) = v else { continue };
            let matches = |p: &Option<Piece>| {
                p.as_ref().is_some_and(|p| &(&p.slope * k + &p.intercept) == v)
            };
            if matches(&pieces[i]) {
                pieces[i].as_mut().unwrap().interval.hi.closed = true;
            } else if matches(&pieces[i + 1]) {
                pieces[i + 1].as_mut().unwrap().interval.lo.closed = true;
            } else {
                overrides.push(Override { x: k.clone(), value: v.clone() });
            }
        }
        (pieces.into_iter().flatten().collect(), overrides)
    }
}

/// Interior sample of span `i` for the given knots.
pub(crate) fn span_sample(knots: &[Rational], i: usize) -> Rational {
    match (i.checked_sub(1).and_then(|j| knots.get(j)), knots.get(i)) {
        (Some(a), Some(b)) => (a + b) / two(),
        (Some(a), None) => a + Rational::one(),
        (None, Some(b)) => b - Rational::one(),
        (None, None) => Rational::zero(),
    }
}

impl fmt::Display for PwaFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (pieces, overrides) = self.literal_parts();
        let mut parts: Vec<String> = pieces
            .iter()
            .map(|p| {
                format!("{}x+{} on {}", format_rational(&p.slope), format_rational(&p.intercept), p.interval)
            })
            .collect();
        parts.extend(
            overrides
                .iter()
                .map(|o| format!("{} at x={}", format_rational(&o.value), format_rational(&o.x))),
        );
        parts.extend(self.neg_inf_parts().iter().map(|iv| format!("-inf on {iv}")));
        if parts.is_empty() {
            f.write_str("+inf everywhere")
        } else {
            f.write_str(&parts.join("; "))
        }
    }
}

/// Nonnegative multipliers indexed by the constraint set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Multiplier(Vec<Rational>);

impl Multiplier {
    pub fn new(entries: Vec<Rational>) -> Result<Self, Error> {
        if let Some(bad) = entries.iter().find(|e| e.is_negative()) {
            return Err(Error::Invalid(format!("negative multiplier {}", format_rational(bad))));
        }
        Ok(Multiplier(entries))
    }

    pub fn zeros(n: usize) -> Self {
        Multiplier(vec![Rational::zero(); n])
    }

    pub fn entries(&self) -> &[Rational] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl Serialize for Multiplier {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(self.0.len()))?;
        for q in &self.0 {
            seq.serialize_element(&format_rational(q))?;
        }
        seq.end()
    }
}

/// `Σ_{λ_t > 0} λ_t h_t`, or the zero function when every `λ_t` is zero.
pub fn combine_constraints(h: &[PwaFunction], lambda: &Multiplier) -> Result<PwaFunction, Error> {
    if h.len() != lambda.len() {
        return Err(Error::Invalid(format!(
            "multiplier has {} entries for {} constraints",
            lambda.len(),
            h.len()
        )));
    }
    Ok(h.iter()
        .zip(lambda.entries())
        .filter(|(_, l)| l.is_positive())
        .fold(PwaFunction::zero(), |acc, (ht, l)| acc.add(&ht.scaled(l))))
}

/// Indicator of `{x : h(x) ≤ 0}`.
pub fn sublevel_indicator(h: &PwaFunction) -> PwaFunction {
    let roots: Vec<Rational> = h
        .spans()
        .iter()
        .enumerate()
        .filter_map(|(i, s)| match s {
            Segment::Affine(a) if !a.slope.is_zero() => {
                let r = -&a.intercept / &a.slope;
                let (lo, hi) = h.span_bounds(i);
                let rr = ExtReal::Finite(r.clone());
                (rr > lo && rr < hi).then_some(r)
            }
            _ => None,
        })
        .collect();
    let (knots, values, spans) = h.refined(&roots);
    let inside = |v: &ExtReal| *v <= ExtReal::zero();
    let zero = || Segment::Affine(Affine::new(Rational::zero(), Rational::zero()));
    let values = values
        .iter()
        .map(|v| if inside(v) { ExtReal::zero() } else { ExtReal::PosInf })
        .collect();
    let spans = spans
        .iter()
        .enumerate()
        .map(|(i, s)| if inside(&s.at(&span_sample(&knots, i))) { zero() } else { Segment::PosInf })
        .collect();
    PwaFunction::from_cells(knots, values, spans)
}

/// Indicator of the feasible set `A = ∩_t {h_t ≤ 0}`; `None` when `A` is empty.
pub fn indicator(constraints: &[PwaFunction]) -> Option<PwaFunction> {
    let ind = constraints
        .iter()
        .fold(PwaFunction::zero(), |acc, h| acc.add(&sublevel_indicator(h)));
    (!ind.domain_is_empty()).then_some(ind)
}

/// Serialized form: pieces, overrides and (for derived improper functions)
/// intervals carrying `-∞`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionLiteral {
    #[serde(default)]
    pub pieces: Vec<PieceLiteral>,
    #[serde(default)]
    pub overrides: Vec<OverrideLiteral>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub neg_inf: Vec<Interval>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PieceLiteral {
    pub lo: ExtReal,
    pub lo_closed: bool,
    pub hi: ExtReal,
    pub hi_closed: bool,
    #[serde(with = "rational_serde")]
    pub slope: Rational,
    #[serde(with = "rational_serde")]
    pub intercept: Rational,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OverrideLiteral {
    #[serde(with = "rational_serde")]
    pub x: Rational,
    #[serde(with = "rational_serde")]
    pub value: Rational,
}

impl TryFrom<FunctionLiteral> for PwaFunction {
    type Error = Error;

    fn try_from(lit: FunctionLiteral) -> Result<Self, Error> {
        let pieces = lit
            .pieces
            .into_iter()
            .enumerate()
            .map(|(i, p)| {
                let interval = Interval::new(
                    EndPoint { value: p.lo, closed: p.lo_closed },
                    EndPoint { value: p.hi, closed: p.hi_closed },
                )
                .map_err(|e| Error::Invalid(format!("pieces[{i}]: {e}")))?;
                Ok(Piece { interval, slope: p.slope, intercept: p.intercept })
            })
            .collect::<Result<Vec<_>, Error>>()?;
        let overrides: Vec<Override> =
            lit.overrides.into_iter().map(|o| Override { x: o.x, value: o.value }).collect();
        let mut f = PwaFunction::from_pieces(&pieces, &overrides)?;
        for iv in &lit.neg_inf {
            f = f.overlay(iv, Segment::NegInf);
        }
        Ok(f)
    }
}

impl From<&PwaFunction> for FunctionLiteral {
    fn from(f: &PwaFunction) -> Self {
        let (pieces, overrides) = f.literal_parts();
        FunctionLiteral {
            pieces: pieces
                .into_iter()
                .map(|p| PieceLiteral {
                    lo: p.interval.lo.value,
                    lo_closed: p.interval.lo.closed,
                    hi: p.interval.hi.value,
                    hi_closed: p.interval.hi.closed,
                    slope: p.slope,
                    intercept: p.intercept,
                })
                .collect(),
            overrides: overrides
                .into_iter()
                .map(|o| OverrideLiteral { x: o.x, value: o.value })
                .collect(),
            neg_inf: f.neg_inf_parts(),
        }
    }
}

impl Serialize for PwaFunction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        FunctionLiteral::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for PwaFunction {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let lit = FunctionLiteral::deserialize(d)?;
        PwaFunction::try_from(lit).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extreal::ratio;
    use crate::instances::{abs, jump_ramp, neg_ramp, ramp};

    fn fin(n: i64) -> ExtReal {
        ExtReal::from_int(n)
    }

    #[test]
    fn eval_jump_ramp() {
        let g = jump_ramp();
        assert_eq!(g.eval(&int(0)), fin(1));
        assert_eq!(g.eval(&int(2)), fin(2));
        assert_eq!(g.eval(&int(-1)), ExtReal::PosInf);
        assert_eq!(g.eval(&ratio(1, 1000)), ExtReal::Finite(ratio(1, 1000)));
    }

    #[test]
    fn canonical_form_merges_redundant_knots() {
        // |x| written as three pieces with a redundant split at 1.
        let lit = r#"{"pieces":[
            {"lo":"-inf","lo_closed":false,"hi":"0","hi_closed":true,"slope":"-1","intercept":"0"},
            {"lo":"0","lo_closed":false,"hi":"1","hi_closed":false,"slope":"1","intercept":"0"},
            {"lo":"1","lo_closed":true,"hi":"+inf","hi_closed":false,"slope":"1","intercept":"0"}]}"#;
        let f: PwaFunction = serde_json::from_str(lit).unwrap();
        assert_eq!(f, abs());
        assert_eq!(f.knots().len(), 1);
    }

    #[test]
    fn overlapping_pieces_rejected() {
        let lit = r#"{"pieces":[
            {"lo":"0","lo_closed":true,"hi":"2","hi_closed":true,"slope":"1","intercept":"0"},
            {"lo":"2","lo_closed":true,"hi":"3","hi_closed":true,"slope":"1","intercept":"0"}]}"#;
        assert!(serde_json::from_str::<PwaFunction>(lit).is_err());
    }

    #[test]
    fn convexity_examples() {
        assert!(jump_ramp().is_convex());
        assert!(ramp().is_convex());
        assert!(abs().is_convex());
        let neg_abs = abs().scaled(&int(1)).sub_dc(&abs()).sub_dc(&abs());
        assert!(!neg_abs.is_convex());
        let v = neg_abs.convexity_violation().unwrap();
        assert!(v.reason.contains("slope decreases"), "{v}");
        let (a, b, m) = v.triple.expect("a midpoint violation exists");
        let avg = (neg_abs.eval(&a).finite().unwrap() + neg_abs.eval(&b).finite().unwrap()) / int(2);
        assert!(neg_abs.eval(&m) > ExtReal::Finite(avg));
    }

    #[test]
    fn override_below_limit_or_interior_is_not_convex() {
        let below = PwaFunction::from_pieces(
            &[Piece {
                interval: Interval::new(EndPoint::closed(int(0)), EndPoint::pos_inf()).unwrap(),
                slope: int(1),
                intercept: int(0),
            }],
            &[Override { x: int(0), value: int(-1) }],
        )
        .unwrap();
        assert!(!below.is_convex());
        assert!(below.convexity_violation().unwrap().triple.is_some());
        let interior = abs().overlay(&Interval::point(int(0)), Segment::Affine(Affine::new(int(0), int(1))));
        assert!(!interior.is_convex());
        let gap = PwaFunction::indicator_of(&Interval::new(EndPoint::closed(int(0)), EndPoint::closed(int(1))).unwrap())
            .add(&PwaFunction::zero().overlay(&Interval::point(ratio(1, 2)), Segment::PosInf));
        let v = gap.convexity_violation().unwrap();
        assert!(v.reason.contains("not an interval"));
        assert_eq!(v.triple.map(|t| t.2), Some(ratio(1, 2)));
    }

    /// Midpoint inequality on a rational grid over [-2, 2]².
    #[test]
    fn jump_ramp_convex_by_grid_midpoints() {
        let g = jump_ramp();
        let grid: Vec<Rational> = (-16..=16).map(|i| ratio(i, 8)).collect();
        for a in &grid {
            for b in &grid {
                let (fa, fb) = (g.eval(a), g.eval(b));
                let mid = g.eval(&((a + b) / int(2)));
                if let (Some(fa), Some(fb)) = (fa.finite(), fb.finite()) {
                    assert!(mid <= ExtReal::Finite((fa + fb) / int(2)), "a={a} b={b}");
                }
            }
        }
    }

    #[test]
    fn add_and_sub_dc() {
        let (f, g, h) = (ramp(), jump_ramp(), neg_ramp());
        let fh = f.add(&h);
        assert_eq!(fh.eval(&int(3)), fin(0));
        assert_eq!(fh.eval(&int(-1)), ExtReal::PosInf);
        assert_eq!(f.add(&PwaFunction::zero()), f);
        let d = f.sub_dc(&g);
        assert_eq!(d.eval(&int(0)), fin(-1));
        assert_eq!(d.eval(&int(5)), fin(0));
        assert_eq!(d.eval(&int(-1)), ExtReal::PosInf);
        // x in dom f outside dom g gives -inf; outside dom f stays +inf
        let narrow = PwaFunction::indicator_of(&Interval::new(EndPoint::open(int(1)), EndPoint::pos_inf()).unwrap());
        let d2 = f.sub_dc(&narrow);
        assert_eq!(d2.eval(&int(1)), ExtReal::NegInf);
        assert_eq!(d2.eval(&int(-3)), ExtReal::PosInf);
        assert!(!d2.is_proper());
    }

    #[test]
    fn combine_constraints_examples() {
        let h = vec![neg_ramp()];
        let zero = combine_constraints(&h, &Multiplier::zeros(1)).unwrap();
        assert_eq!(zero, PwaFunction::zero());
        let two = combine_constraints(&h, &Multiplier::new(vec![int(2)]).unwrap()).unwrap();
        assert_eq!(two.eval(&int(1)), fin(-2));
        assert_eq!(two.eval(&int(-1)), ExtReal::PosInf);
        assert!(combine_constraints(&h, &Multiplier::zeros(2)).is_err());
        assert!(Multiplier::new(vec![int(-1)]).is_err());
    }

    #[test]
    fn indicator_examples() {
        let a = indicator(&[neg_ramp()]).unwrap();
        assert_eq!(a, PwaFunction::indicator_of(&Interval::new(EndPoint::closed(int(0)), EndPoint::pos_inf()).unwrap()));
        let b = indicator(&[PwaFunction::affine(int(1), int(0))]).unwrap();
        assert_eq!(b.domain_hull().unwrap(), Interval::new(EndPoint::neg_inf(), EndPoint::closed(int(0))).unwrap());
        assert!(indicator(&[PwaFunction::affine(int(0), int(1))]).is_none());
        assert_eq!(indicator(&[]).unwrap(), PwaFunction::zero());
    }

    #[test]
    fn infimum_examples() {
        let (f, g, h) = (ramp(), jump_ramp(), neg_ramp());
        let a = indicator(&[h]).unwrap();
        let p = f.sub_dc(&g).add(&a).infimum();
        assert_eq!(p.value, fin(-1));
        assert!(p.attained);
        assert_eq!(p.witness, Some(Witness::Point(int(0))));
        let open = PwaFunction::affine_on(&Interval::new(EndPoint::open(int(0)), EndPoint::open(int(1))).unwrap(), int(1), int(0));
        let v = open.infimum();
        assert_eq!(v.value, fin(0));
        assert!(!v.attained);
        let down = PwaFunction::affine_on(&Interval::new(EndPoint::closed(int(0)), EndPoint::pos_inf()).unwrap(), int(-1), int(0));
        assert_eq!(down.infimum().value, ExtReal::NegInf);
        assert_eq!(PwaFunction::infinite().infimum().value, ExtReal::PosInf);
    }

    #[test]
    fn domain_hull_and_components() {
        let g = jump_ramp();
        assert_eq!(g.domain_hull().unwrap(), Interval::new(EndPoint::closed(int(0)), EndPoint::pos_inf()).unwrap());
        let two_parts = PwaFunction::indicator_of(&Interval::new(EndPoint::closed(int(0)), EndPoint::closed(int(3))).unwrap())
            .overlay(&Interval::new(EndPoint::open(int(1)), EndPoint::closed(int(2))).unwrap(), Segment::PosInf);
        assert_eq!(two_parts.domain_components().len(), 2);
        assert_eq!(two_parts.domain_hull().unwrap(), Interval::new(EndPoint::closed(int(0)), EndPoint::closed(int(3))).unwrap());
    }

    #[test]
    fn literal_round_trip_keeps_override() {
        let g = jump_ramp();
        let text = serde_json::to_string(&g).unwrap();
        assert!(text.contains("overrides"));
        let back: PwaFunction = serde_json::from_str(&text).unwrap();
        assert_eq!(back, g);
        assert_eq!(g.overrides(), vec![Override { x: int(0), value: int(1) }]);
    }

    #[test]
    fn translate_and_scale() {
        let f = abs().translated(&int(2));
        assert_eq!(f.eval(&int(2)), fin(0));
        assert_eq!(f.eval(&int(0)), fin(2));
        assert_eq!(abs().scaled(&int(3)).eval(&int(-2)), fin(6));
    }
}
