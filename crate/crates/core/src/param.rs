//! Piecewise-affine functions whose values depend affinely on a few real
//! parameters (multipliers, dual coordinates), and the linear programs that
//! optimize over those parameters.

use num_traits::{One, Signed, Zero};

use crate::extreal::{ExtReal, Rational};
use crate::lpexact::{solve_max, LinearProgram, LpStatus, Relation, VarBound};
use crate::pwafun::{span_sample, PwaFunction, Segment};

/// `constant + Σ coeffs[i]·v_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct LinExpr {
    pub constant: Rational,
    pub coeffs: Vec<Rational>,
}

impl LinExpr {
    pub fn constant(c: Rational, n: usize) -> Self {
        LinExpr { constant: c, coeffs: vec![Rational::zero(); n] }
    }

    pub fn var(i: usize, n: usize) -> Self {
        let mut e = LinExpr::constant(Rational::zero(), n);
        e.coeffs[i] = Rational::one();
        e
    }

    pub fn plus(&self, other: &LinExpr) -> LinExpr {
        LinExpr {
            constant: &self.constant + &other.constant,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn minus(&self, other: &LinExpr) -> LinExpr {
        self.plus(&other.times(&-Rational::one()))
    }

    pub fn times(&self, q: &Rational) -> LinExpr {
        LinExpr { constant: &self.constant * q, coeffs: self.coeffs.iter().map(|a| a * q).collect() }
    }

    pub fn plus_const(&self, q: &Rational) -> LinExpr {
        LinExpr { constant: &self.constant + q, coeffs: self.coeffs.clone() }
    }

    #[cfg(test)]
    pub fn eval(&self, x: &[Rational]) -> Rational {
        &self.constant + self.coeffs.iter().zip(x).map(|(a, b)| a * b).sum::<Rational>()
    }

    fn width(&self) -> usize {
        self.coeffs.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum PValue {
    Finite(LinExpr),
    PosInf,
    NegInf,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum PSegment {
    Affine { slope: LinExpr, intercept: LinExpr },
    PosInf,
    NegInf,
}

/// A piecewise-affine function of `x` with parameter-dependent pieces on a
/// fixed knot set. Domains never depend on the parameters.
#[derive(Clone, Debug)]
pub(crate) struct ParamPwa {
    nvars: usize,
    knots: Vec<Rational>,
    values: Vec<PValue>,
    spans: Vec<PSegment>,
}

impl ParamPwa {
    pub fn lift(f: &PwaFunction, nvars: usize) -> Self {
        let c = |q: &Rational| LinExpr::constant(q.clone(), nvars);
        ParamPwa {
            nvars,
            knots: f.knots().to_vec(),
            values: f
                .knot_values()
                .iter()
                .map(|v| match v {
                    ExtReal::Finite(q) => PValue::Finite(c(q)),
                    ExtReal::PosInf => PValue::PosInf,
                    ExtReal::NegInf => PValue::NegInf,
                })
                .collect(),
            spans: f
                .spans()
                .iter()
                .map(|s| match s {
                    Segment::Affine(a) => PSegment::Affine { slope: c(&a.slope), intercept: c(&a.intercept) },
                    Segment::PosInf => PSegment::PosInf,
                    Segment::NegInf => PSegment::NegInf,
                })
                .collect(),
        }
    }

    fn value_at(&self, x: &Rational) -> PValue {
        match self.knots.binary_search(x) {
            Ok(i) => self.values[i].clone(),
            Err(i) => match &self.spans[i] {
                PSegment::Affine { slope, intercept } => PValue::Finite(slope.times(x).plus(intercept)),
                PSegment::PosInf => PValue::PosInf,
                PSegment::NegInf => PValue::NegInf,
            },
        }
    }

    fn segment_at(&self, x: &Rational) -> &PSegment {
        let i = self.knots.partition_point(|k| k < x);
        &self.spans[i]
    }

    /// `self + v_var · h` with `+∞` absorbing.
    pub fn add_scaled(&self, h: &PwaFunction, var: usize) -> ParamPwa {
        let n = self.nvars;
        let v = LinExpr::var(var, n);
        let mut knots: Vec<Rational> = self.knots.iter().chain(h.knots()).cloned().collect();
        knots.sort();
        knots.dedup();
        let values = knots
            .iter()
            .map(|k| match (self.value_at(k), h.eval(k)) {
                (PValue::PosInf, _) | (_, ExtReal::PosInf) => PValue::PosInf,
                (PValue::NegInf, _) | (_, ExtReal::NegInf) => PValue::NegInf,
                (PValue::Finite(e), ExtReal::Finite(q)) => PValue::Finite(e.plus(&v.times(&q))),
            })
            .collect();
        let spans = (0..=knots.len())
            .map(|i| {
                let x = span_sample(&knots, i);
                match (self.segment_at(&x), h.segment_near(&x, true)) {
                    (PSegment::PosInf, _) | (_, Segment::PosInf) => PSegment::PosInf,
                    (PSegment::NegInf, _) | (_, Segment::NegInf) => PSegment::NegInf,
                    (PSegment::Affine { slope, intercept }, Segment::Affine(a)) => PSegment::Affine {
                        slope: slope.plus(&v.times(&a.slope)),
                        intercept: intercept.plus(&v.times(&a.intercept)),
                    },
                }
            })
            .collect();
        ParamPwa { nvars: n, knots, values, spans }
    }

    fn span_bounds(&self, i: usize) -> (Option<&Rational>, Option<&Rational>) {
        (i.checked_sub(1).map(|j| &self.knots[j]), self.knots.get(i))
    }

    /// The (parameter-independent) domain with a sample value of 0.
    pub fn domain(&self) -> PwaFunction {
        let values = self
            .values
            .iter()
            .map(|v| if *v == PValue::PosInf { ExtReal::PosInf } else { ExtReal::zero() })
            .collect();
        let spans = self
            .spans
            .iter()
            .map(|s| {
                if *s == PSegment::PosInf {
                    Segment::PosInf
                } else {
                    Segment::Affine(crate::pwafun::Affine::new(Rational::zero(), Rational::zero()))
                }
            })
            .collect();
        PwaFunction::from_cells(self.knots.clone(), values, spans)
    }

    /// Lines and domain bounds of the conjugate, parameter by parameter.
    pub fn conjugate_shape(&self) -> ParamConjugate {
        let n = self.nvars;
        let has_neg = self.values.contains(&PValue::NegInf) || self.spans.contains(&PSegment::NegInf);
        if has_neg {
            return ParamConjugate::AllPosInf;
        }
        let mut lines = vec![];
        let mut lower = vec![];
        let mut upper = vec![];
        for (k, v) in self.knots.iter().zip(&self.values) {
            if let PValue::Finite(e) = v {
                lines.push((k.clone(), e.clone()));
            }
        }
        for (i, s) in self.spans.iter().enumerate() {
            let PSegment::Affine { slope, intercept } = s else { continue };
            let (lo, hi) = self.span_bounds(i);
            match lo {
                Some(l) => lines.push((l.clone(), slope.times(l).plus(intercept))),
                None => lower.push(slope.clone()),
            }
            match hi {
                Some(h) => lines.push((h.clone(), slope.times(h).plus(intercept))),
                None => upper.push(slope.clone()),
            }
            if lo.is_none() && hi.is_none() {
                lines.push((Rational::zero(), intercept.clone()));
            }
        }
        if lines.is_empty() {
            return ParamConjugate::AllNegInf;
        }
        debug_assert!(lines.iter().all(|(_, e)| e.width() == n));
        ParamConjugate::Lines { lines, lower, upper }
    }
}

/// `F*(u) = max_j (p_j·u − c_j)` on `{u : lower_i ≤ u ≤ upper_k}`, with
/// `c_j`, `lower_i`, `upper_k` affine in the parameters.
#[derive(Clone, Debug)]
pub(crate) enum ParamConjugate {
    AllPosInf,
    AllNegInf,
    Lines { lines: Vec<(Rational, LinExpr)>, lower: Vec<LinExpr>, upper: Vec<LinExpr> },
}

/// Maximize `Σ_g min(groups[g])` over the parameters subject to
/// `ge ≥ 0`, `eq = 0`, bounds, and strict positivity of `positive`.
#[derive(Clone, Debug)]
pub(crate) struct PatternProblem {
    pub bounds: Vec<VarBound>,
    pub positive: Vec<usize>,
    pub ge: Vec<LinExpr>,
    pub eq: Vec<LinExpr>,
    pub groups: Vec<Vec<LinExpr>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct PatternResult {
    pub value: ExtReal,
    pub attained: bool,
    pub witness: Option<Vec<Rational>>,
}

impl PatternResult {
    pub fn neg_inf() -> Self {
        PatternResult { value: ExtReal::NegInf, attained: false, witness: None }
    }
}

impl PatternProblem {
    pub fn new(bounds: Vec<VarBound>, positive: Vec<usize>) -> Self {
        PatternProblem { bounds, positive, ge: vec![], eq: vec![], groups: vec![] }
    }

    fn nvars(&self) -> usize {
        self.bounds.len()
    }

    /// Base LP over `[vars, z_1..z_G, extra…]` with the region constraints
    /// and `z_g ≤ candidates`.
    fn base_lp(&self, extra: usize) -> LinearProgram {
        let n = self.nvars();
        let ng = self.groups.len();
        let width = n + ng + extra;
        let mut bounds = self.bounds.clone();
        bounds.extend(std::iter::repeat_n(VarBound::Free, ng + extra));
        let mut lp = LinearProgram::new(vec![Rational::zero(); width], bounds);
        let row = |e: &LinExpr| {
            let mut r = e.coeffs.clone();
            r.resize(width, Rational::zero());
            r
        };
        for e in &self.ge {
            lp.push(row(e), Relation::Ge, -e.constant.clone());
        }
        for e in &self.eq {
            lp.push(row(e), Relation::Eq, -e.constant.clone());
        }
        for (g, cands) in self.groups.iter().enumerate() {
            for c in cands {
                // z_g - c(v) <= c0
                let mut r: Vec<Rational> = row(c).into_iter().map(|a| -a).collect();
                r[n + g] = Rational::one();
                lp.push(r, Relation::Le, c.constant.clone());
            }
        }
        lp
    }

    /// Some point of the strict region where the objective is at least
    /// `threshold` (`None` threshold: just the region).
    pub fn strict_point(&self, threshold: Option<&Rational>) -> Option<Vec<Rational>> {
        let n = self.nvars();
        let ng = self.groups.len();
        let mut lp = self.base_lp(1);
        let t = n + ng;
        let width = t + 1;
        lp.objective[t] = Rational::one();
        if let Some(thr) = threshold {
            let mut r = vec![Rational::zero(); width];
            for g in 0..ng {
                r[n + g] = Rational::one();
            }
            lp.push(r, Relation::Ge, thr.clone());
        }
        for &s in &self.positive {
            let mut r = vec![Rational::zero(); width];
            r[t] = Rational::one();
            r[s] = -Rational::one();
            lp.push(r, Relation::Le, Rational::zero());
        }
        let mut r = vec![Rational::zero(); width];
        r[t] = Rational::one();
        lp.push(r, Relation::Le, Rational::one());
        let out = solve_max(&lp).expect("pattern LP is well formed");
        match (out.status, out.value) {
            (LpStatus::Optimal, ExtReal::Finite(v)) if v.is_positive() => {
                Some(out.witness.unwrap()[..n].to_vec())
            }
            _ => None,
        }
    }

    /// Supremum of the objective over the strict region.
    pub fn solve(&self) -> PatternResult {
        let Some(seed) = self.strict_point(None) else {
            return PatternResult::neg_inf();
        };
        if self.groups.iter().any(|g| g.is_empty()) {
            return PatternResult { value: ExtReal::PosInf, attained: false, witness: Some(seed) };
        }
        let n = self.nvars();
        let mut lp = self.base_lp(0);
        for g in 0..self.groups.len() {
            lp.objective[n + g] = Rational::one();
        }
        let out = solve_max(&lp).expect("pattern LP is well formed");
        let v = match (out.status, out.value) {
            (LpStatus::Optimal, ExtReal::Finite(v)) => v,
            (LpStatus::Unbounded, _) => {
                return PatternResult { value: ExtReal::PosInf, attained: false, witness: None }
            }
            // the strict region is nonempty, so the closure is feasible
            _ => unreachable!("value LP infeasible on a nonempty region"),
        };
        match self.strict_point(Some(&v)) {
            Some(w) => PatternResult { value: ExtReal::Finite(v), attained: true, witness: Some(w) },
            None => PatternResult { value: ExtReal::Finite(v), attained: false, witness: None },
        }
    }

    /// Objective at a parameter point (for cross-checks).
    #[cfg(test)]
    pub fn objective_at(&self, x: &[Rational]) -> ExtReal {
        let in_region = self.ge.iter().all(|e| !e.eval(x).is_negative())
            && self.eq.iter().all(|e| e.eval(x).is_zero())
            && self.positive.iter().all(|&s| x[s].is_positive());
        if !in_region {
            return ExtReal::NegInf;
        }
        let mut total = ExtReal::zero();
        for g in &self.groups {
            let m = g.iter().map(|e| e.eval(x)).min();
            total = match m {
                Some(m) => crate::extreal::add_lower(&total, &ExtReal::Finite(m)),
                None => ExtReal::PosInf,
            };
        }
        total
    }
}

/// All subsets of `0..n` as sorted index lists.
pub(crate) fn subsets(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (0u32..(1u32 << n)).map(move |mask| (0..n).filter(|i| mask & (1 << i) != 0).collect())
}

/// Keeps the larger result; ties prefer an attained one.
pub(crate) fn better(a: PatternResult, b: PatternResult) -> PatternResult {
    if b.value > a.value || (b.value == a.value && b.attained && !a.attained) {
        b
    } else {
        a
    }
}
