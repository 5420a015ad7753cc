//! The primal value and the Lagrange and Fenchel-Lagrange dual values.
//!
//! Suprema over multipliers are computed exactly by fixing which
//! multipliers are strictly positive (a support pattern). On each pattern
//! every domain and every `-∞` trigger is fixed, and the inner value is a
//! minimum of affine functions of the multipliers subject to linear
//! constraints, which [`crate::param`] maximizes with exact LPs.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::conjcalc::{c_conjugate, eco_hull, fenchel_conjugate, halfspace_contains, WPoint};
use crate::extreal::{sub_lower, ExtReal, Rational};
use crate::interval::Interval;
use crate::lpexact::VarBound;
use crate::param::{better, subsets, LinExpr, ParamConjugate, ParamPwa, PatternProblem, PatternResult};
use crate::pwafun::{combine_constraints, indicator, Multiplier, PwaFunction};
use crate::value::{DualValue, Witness};
use crate::Error;

/// Largest constraint count accepted (patterns are enumerated).
pub const MAX_CONSTRAINTS: usize = 10;

/// `inf { f(x) − g(x) : h_t(x) ≤ 0, t ∈ T }`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DCProblem {
    pub f: PwaFunction,
    pub g: PwaFunction,
    pub constraints: Vec<PwaFunction>,
}

impl DCProblem {
    /// Validates convexity and properness of every function and rejects
    /// problems whose objective takes `-∞` on the feasible set.
    pub fn new(f: PwaFunction, g: PwaFunction, constraints: Vec<PwaFunction>) -> Result<Self, Error> {
        let p = Self::new_allow_improper(f, g, constraints)?;
        if let Some(a) = p.feasible_indicator() {
            if p.objective().add(&a).has_neg_inf() {
                return Err(Error::Improper(
                    "f - g takes -inf on the feasible set (dom f is not contained in dom g there)".into(),
                ));
            }
        }
        Ok(p)
    }

    /// Like [`DCProblem::new`] but lets `f − g` reach `-∞` on the feasible
    /// set, in which case the primal value is reported as `-inf`.
    pub fn new_allow_improper(
        f: PwaFunction,
        g: PwaFunction,
        constraints: Vec<PwaFunction>,
    ) -> Result<Self, Error> {
        if constraints.len() > MAX_CONSTRAINTS {
            return Err(Error::Unsupported(format!(
                "{} constraints; at most {MAX_CONSTRAINTS} are supported",
                constraints.len()
            )));
        }
        let named = [("f".to_string(), &f), ("g".to_string(), &g)]
            .into_iter()
            .chain(constraints.iter().enumerate().map(|(i, h)| (format!("h{i}"), h)));
        for (name, func) in named {
            if func.domain_is_empty() {
                return Err(Error::Improper(format!("{name} is +inf everywhere")));
            }
            if let Some(violation) = func.convexity_violation() {
                return Err(Error::NotConvex { name, violation: Box::new(violation) });
            }
        }
        Ok(DCProblem { f, g, constraints })
    }

    pub fn num_constraints(&self) -> usize {
        self.constraints.len()
    }

    /// `f − g`, `+∞` off `dom f`.
    pub fn objective(&self) -> PwaFunction {
        self.f.sub_dc(&self.g)
    }

    /// Indicator of the feasible set; `None` when it is empty.
    pub fn feasible_indicator(&self) -> Option<PwaFunction> {
        indicator(&self.constraints)
    }

    /// `f − g + δ_A`.
    pub fn restricted_objective(&self) -> PwaFunction {
        match self.feasible_indicator() {
            Some(a) => self.objective().add(&a),
            None => PwaFunction::infinite(),
        }
    }

    /// The same problem with `g` replaced by its evenly convex hull.
    pub fn with_eco_g(&self) -> DCProblem {
        DCProblem { f: self.f.clone(), g: eco_hull(&self.g), constraints: self.constraints.clone() }
    }

    fn zero_multiplier(&self) -> Multiplier {
        Multiplier::zeros(self.num_constraints())
    }

    fn fl_guard(&self) -> Result<(), Error> {
        if self.num_constraints() != 1 {
            return Err(Error::Unsupported(format!(
                "exact Fenchel-Lagrange duals need exactly one constraint (got {}); use oracle",
                self.num_constraints()
            )));
        }
        Ok(())
    }
}

fn multiplier_from(pattern_witness: &[Rational]) -> Multiplier {
    Multiplier::new(pattern_witness.to_vec()).expect("pattern witnesses are nonnegative")
}

fn to_dual_value(r: PatternResult, witness: impl FnOnce(&[Rational]) -> Witness) -> DualValue {
    match (r.attained, r.value, r.witness) {
        (true, ExtReal::Finite(v), Some(w)) => DualValue::attained(v, witness(&w)),
        (_, v, _) => DualValue::unattained(v),
    }
}

/// Exact `inf_A (f − g)`.
pub fn primal_value(p: &DCProblem) -> DualValue {
    p.restricted_objective().infimum()
}

/// Exact `inf_A (f − eco g)`.
pub fn primal_value_eco(p: &DCProblem) -> DualValue {
    primal_value(&p.with_eco_g())
}

/// `inf_x (f − g + λh)(x)` for one multiplier.
pub fn lagrange_inner(p: &DCProblem, lambda: &Multiplier) -> Result<DualValue, Error> {
    let lh = combine_constraints(&p.constraints, lambda)?;
    Ok(p.objective().add(&lh).infimum())
}

/// `sup_{λ ≥ 0} inf_x (base + λh)(x)` by support patterns.
fn sup_inf_over_patterns(base: &PwaFunction, h: &[PwaFunction]) -> DualValue {
    let n = h.len();
    let mut best = PatternResult::neg_inf();
    for pattern in subsets(n) {
        let mut lifted = ParamPwa::lift(base, n);
        for &t in &pattern {
            lifted = lifted.add_scaled(&h[t], t);
        }
        let mut pp = PatternProblem::new(vec![VarBound::NonNeg; n], pattern.clone());
        for t in (0..n).filter(|t| !pattern.contains(t)) {
            pp.eq.push(LinExpr::var(t, n));
        }
        let r = match lifted.conjugate_shape() {
            ParamConjugate::AllPosInf => {
                // -∞ somewhere in the domain: the inner inf is -∞ on this pattern
                PatternResult::neg_inf()
            }
            ParamConjugate::AllNegInf => {
                pp.groups.push(vec![]);
                pp.solve()
            }
            ParamConjugate::Lines { lines, lower, upper } => {
                // inf F = -F*(0): need lower ≤ 0 ≤ upper
                pp.ge.extend(lower.iter().map(|e| e.times(&-Rational::one())));
                pp.ge.extend(upper);
                pp.groups.push(lines.into_iter().map(|(_, c)| c).collect());
                pp.solve()
            }
        };
        best = better(best, r);
    }
    to_dual_value(best, |w| Witness::Multiplier(multiplier_from(w)))
}

/// Exact `v(D_L) = sup_{λ ≥ 0} inf_x (f − g + λh)(x)`.
pub fn lagrange_dual_value(p: &DCProblem) -> DualValue {
    sup_inf_over_patterns(&p.objective(), &p.constraints)
}

/// `sup_{λ ≥ 0} inf_{x ∈ dom g} (f − g + λh)(x)`; the set `Ω` of
/// thresholds is the ray above minus this value.
pub fn omega_dual_value(p: &DCProblem) -> DualValue {
    let base = p.objective().add(&p.g.domain_indicator());
    sup_inf_over_patterns(&base, &p.constraints)
}

/// The inner value of the c-conjugate dual for one multiplier:
/// `inf_{w ∈ dom g^c} { g^c(w) − (f + λh)^c(w) }`.
pub fn cconj_inner(p: &DCProblem, lambda: &Multiplier) -> Result<DualValue, Error> {
    let fl = p.f.add(&combine_constraints(&p.constraints, lambda)?);
    let Some(dom_fl) = fl.domain_hull() else {
        // (f + λh)^c ≡ -∞ and every difference is +∞
        return Ok(DualValue::pos_inf());
    };
    let dom_g = p.g.domain_hull().expect("g is proper");
    if !dom_fl.is_subset_of(&dom_g) {
        return Ok(DualValue::neg_inf());
    }
    let gstar = fenchel_conjugate(&p.g);
    let flstar = fenchel_conjugate(&fl);
    Ok(gstar.sub_dc(&flstar).infimum())
}

struct GData {
    dom: Interval,
    star_lower: ExtReal,
    star_upper: ExtReal,
    /// Closed hull `g**`.
    closure: PwaFunction,
}

fn g_data(g: &PwaFunction) -> GData {
    let gstar = fenchel_conjugate(g);
    let hull = gstar.domain_hull().expect("a proper convex function has a proper conjugate");
    GData {
        dom: g.domain_hull().expect("g is proper"),
        star_lower: hull.lo.value,
        star_upper: hull.hi.value,
        closure: fenchel_conjugate(&gstar),
    }
}

/// Exact `v(D̄_L) = sup_{λ ≥ 0} inf_{dom g^c} { g^c − (f + λh)^c }`.
pub fn cconj_dual_value(p: &DCProblem) -> DualValue {
    let r = cconj_patterns(p).into_iter().fold(PatternResult::neg_inf(), |a, (pp, _)| better(a, pp.solve()));
    to_dual_value(r, |w| Witness::Multiplier(multiplier_from(w)))
}

/// One pattern problem per support pattern for the c-conjugate dual; the
/// flag says whether the pattern is structurally `-∞`.
fn cconj_patterns(p: &DCProblem) -> Vec<(PatternProblem, bool)> {
    let n = p.num_constraints();
    let gd = g_data(&p.g);
    let mut out = vec![];
    for pattern in subsets(n) {
        let mut lifted = ParamPwa::lift(&p.f, n);
        for &t in &pattern {
            lifted = lifted.add_scaled(&p.constraints[t], t);
        }
        let mut pp = PatternProblem::new(vec![VarBound::NonNeg; n], pattern.clone());
        for t in (0..n).filter(|t| !pattern.contains(t)) {
            pp.eq.push(LinExpr::var(t, n));
        }
        let dead = |mut pp: PatternProblem| {
            // an always-violated constraint: the pattern contributes -∞
            pp.ge.push(LinExpr::constant(-Rational::one(), n));
            (pp, true)
        };
        let Some(dom) = lifted.domain().domain_hull() else {
            pp.groups.push(vec![]);
            out.push((pp, false));
            continue;
        };
        if !dom.is_subset_of(&gd.dom) {
            out.push(dead(pp));
            continue;
        }
        let ParamConjugate::Lines { lines, lower, upper } = lifted.conjugate_shape() else {
            unreachable!("f + λh is proper with a nonempty domain")
        };
        // dom g* ⊆ dom (f+λh)*
        let mut feasible = true;
        for e in &lower {
            match &gd.star_lower {
                ExtReal::Finite(l) => pp.ge.push(e.times(&-Rational::one()).plus_const(l)),
                _ => feasible = false,
            }
        }
        for e in &upper {
            match &gd.star_upper {
                ExtReal::Finite(u) => pp.ge.push(e.plus_const(&-u.clone())),
                _ => feasible = false,
            }
        }
        let mut group = vec![];
        for (pt, c) in &lines {
            match gd.closure.eval(pt) {
                ExtReal::Finite(v) => group.push(c.plus_const(&-v)),
                _ => feasible = false,
            }
        }
        if !feasible {
            out.push(dead(pp));
            continue;
        }
        pp.groups.push(group);
        out.push((pp, false));
    }
    out
}

/// Whether `(0, 0, 0, β) ∈ K`: some `λ ≥ 0` has
/// `g^c(w) − (f + λh)^c(w) ≥ −β` for every `w ∈ dom g^c`.
pub fn member_k(p: &DCProblem, beta: &Rational) -> bool {
    let target = -beta.clone();
    cconj_patterns(p).into_iter().any(|(pp, dead)| !dead && pp.strict_point(Some(&target)).is_some())
}

/// Shapes shared by the two Fenchel-Lagrange duals with one constraint.
/// Parameters are `(λ, x*)`.
fn fl_patterns(first: Option<(Vec<LinExpr>, Vec<LinExpr>)>, h: &PwaFunction) -> [PatternProblem; 2] {
    let nv = 2;
    let lam = LinExpr::var(0, nv);
    let xs = LinExpr::var(1, nv);
    let base = |positive: Vec<usize>| PatternProblem::new(vec![VarBound::NonNeg, VarBound::Free], positive);
    let mut zero = base(vec![]);
    zero.eq.push(lam.clone());
    zero.eq.push(xs.clone());
    zero.groups.push(vec![LinExpr::constant(Rational::zero(), nv)]);
    let mut pos = base(vec![0]);
    // -(λh)*(x*) = min_j (−p_j x* + λ c_j) on x* ≥ λ·a (left tails), x* ≤ λ·a (right tails)
    let ParamConjugate::Lines { lines, lower, upper } = ParamPwa::lift(h, 1).conjugate_shape() else {
        unreachable!("h is proper")
    };
    let k = |e: &LinExpr| e.constant.clone();
    for a in &lower {
        pos.ge.push(xs.minus(&lam.times(&k(a))));
    }
    for a in &upper {
        pos.ge.push(lam.times(&k(a)).minus(&xs));
    }
    pos.groups.push(lines.iter().map(|(pt, c)| lam.times(&k(c)).minus(&xs.times(pt))).collect());
    let mut out = [zero, pos];
    for pp in out.iter_mut() {
        match &first {
            Some((ge, group)) => {
                pp.ge.extend(ge.iter().cloned());
                pp.groups.insert(0, group.clone());
            }
            None => pp.ge.push(LinExpr::constant(-Rational::one(), nv)),
        }
    }
    out
}

fn fl_witness(w: &[Rational]) -> Witness {
    Witness::MultiplierAndW {
        multiplier: multiplier_from(&w[..1]),
        w: WPoint::new(w[1].clone(), Rational::zero(), Rational::one()),
    }
}

enum FirstTerm {
    NegInf,
    PosInf,
    /// Region constraints and candidates in `(λ, x*)`.
    Shape(Vec<LinExpr>, Vec<LinExpr>),
}

/// `−(f−g)*(−x*)` in `(λ, x*)`.
fn fl_first_term(p: &DCProblem) -> FirstTerm {
    let xs = LinExpr::var(1, 2);
    match ParamPwa::lift(&p.objective(), 1).conjugate_shape() {
        ParamConjugate::AllPosInf => FirstTerm::NegInf,
        ParamConjugate::AllNegInf => FirstTerm::PosInf,
        ParamConjugate::Lines { lines, lower, upper } => {
            let mut ge = vec![];
            // s = −x* must satisfy s ≥ a and s ≤ a'
            for a in &lower {
                ge.push(xs.times(&-Rational::one()).plus_const(&-a.constant.clone()));
            }
            for a in &upper {
                ge.push(xs.plus_const(&a.constant));
            }
            let group = lines.iter().map(|(q, c)| xs.times(q).plus_const(&c.constant)).collect();
            FirstTerm::Shape(ge, group)
        }
    }
}

/// Exact `v(D_FL)` for a single constraint.
pub fn fl_dual_value(p: &DCProblem) -> Result<DualValue, Error> {
    p.fl_guard()?;
    let first = match fl_first_term(p) {
        FirstTerm::PosInf => return Ok(DualValue::pos_inf()),
        FirstTerm::NegInf => None,
        FirstTerm::Shape(ge, group) => Some((ge, group)),
    };
    let r = fl_patterns(first, &p.constraints[0])
        .iter()
        .fold(PatternResult::neg_inf(), |a, pp| better(a, pp.solve()));
    Ok(to_dual_value(r, fl_witness))
}

/// Region constraints and candidates for
/// `inf_{u ∈ dom g*} { g*(u) − f*(u − x*) }` in `(λ, x*)`.
fn fl_bar_first_part(p: &DCProblem) -> Option<(Vec<LinExpr>, Vec<LinExpr>)> {
    let nv = 2;
    let xs = LinExpr::var(1, nv);
    let gd = g_data(&p.g);
    let ParamConjugate::Lines { lines, lower, upper } = ParamPwa::lift(&p.f, 1).conjugate_shape() else {
        unreachable!("f is proper")
    };
    let mut ge = vec![];
    // u − x* ≥ a for all u ≥ L_g  ⇔  x* ≤ L_g − a
    for a in &lower {
        let ExtReal::Finite(l) = &gd.star_lower else { return None };
        ge.push(xs.times(&-Rational::one()).plus_const(&(l - &a.constant)));
    }
    for a in &upper {
        let ExtReal::Finite(u) = &gd.star_upper else { return None };
        ge.push(xs.plus_const(&(&a.constant - u)));
    }
    let mut group = vec![];
    for (q, c) in &lines {
        let ExtReal::Finite(cl) = gd.closure.eval(q) else { return None };
        group.push(xs.times(q).plus_const(&(&c.constant - cl)));
    }
    Some((ge, group))
}

/// Exact `v(D̄_FL)` for a single constraint.
pub fn fl_dual_value_bar(p: &DCProblem) -> Result<DualValue, Error> {
    p.fl_guard()?;
    let r = fl_patterns(fl_bar_first_part(p), &p.constraints[0])
        .iter()
        .fold(PatternResult::neg_inf(), |a, pp| better(a, pp.solve()));
    Ok(to_dual_value(r, fl_witness))
}

/// Whether `(0, 0, 0, β)` lies in the Fenchel-Lagrange analogue of `K`:
/// some `λ ≥ 0` and `(x*, y*, α) ∈ Z` make the inner expression of
/// `D̄_FL` at least `−β`.
pub fn member_kpp(p: &DCProblem, beta: &Rational) -> Result<bool, Error> {
    p.fl_guard()?;
    let target = -beta.clone();
    Ok(fl_patterns(fl_bar_first_part(p), &p.constraints[0])
        .iter()
        .any(|pp| pp.strict_point(Some(&target)).is_some()))
}

/// `−(f−g)^c(−x*, −y*, α) − (λh)^c(x*, y*, α)`, `-∞` off `α > 0`.
pub fn fl_objective(p: &DCProblem, lambda: &Multiplier, w: &WPoint) -> Result<ExtReal, Error> {
    if !w.alpha.is_positive() {
        return Ok(ExtReal::NegInf);
    }
    let lh = combine_constraints(&p.constraints, lambda)?;
    let a = c_conjugate(&p.objective())
        .eval_c(&WPoint::new(-w.xstar.clone(), -w.ystar.clone(), w.alpha.clone()));
    let b = c_conjugate(&lh).eval_c(w);
    Ok(sub_lower(&a.neg(), &b))
}

/// `inf_{dom g^c} { g^c(u*, v*, γ) − f^c(u* − x*, −y*, α) } − (λh)^c(x*, y*, α)`,
/// `-∞` off `α > 0`.
pub fn fl_bar_objective(p: &DCProblem, lambda: &Multiplier, w: &WPoint) -> Result<ExtReal, Error> {
    if !w.alpha.is_positive() {
        return Ok(ExtReal::NegInf);
    }
    let lh = combine_constraints(&p.constraints, lambda)?;
    let fc = c_conjugate(&p.f);
    let inner = if halfspace_contains(fc.dom.as_ref(), &-w.ystar.clone(), &w.alpha) {
        let gstar = fenchel_conjugate(&p.g);
        gstar.sub_dc(&fc.fstar.translated(&w.xstar)).infimum().value
    } else {
        ExtReal::NegInf
    };
    Ok(sub_lower(&inner, &c_conjugate(&lh).eval_c(w)))
}

/// Per-`λ` inner value of the c-conjugate dual evaluated by brute force
/// over an explicit list of points of `W` (for cross-checks).
pub fn cconj_integrand(p: &DCProblem, lambda: &Multiplier, w: &WPoint) -> Result<Option<ExtReal>, Error> {
    let gc = c_conjugate(&p.g);
    let gw = gc.eval_c(w);
    if gw == ExtReal::PosInf {
        return Ok(None);
    }
    let fl = p.f.add(&combine_constraints(&p.constraints, lambda)?);
    Ok(Some(sub_lower(&gw, &c_conjugate(&fl).eval_c(w))))
}

/// `inf_x (f − g + λh)` restricted to `dom g`, for one multiplier.
pub fn omega_inner(p: &DCProblem, lambda: &Multiplier) -> Result<DualValue, Error> {
    let lh = combine_constraints(&p.constraints, lambda)?;
    Ok(p.objective().add(&p.g.domain_indicator()).add(&lh).infimum())
}

/// `λ = 0`, handy for callers.
pub fn zero_multiplier(p: &DCProblem) -> Multiplier {
    p.zero_multiplier()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extreal::{int, ratio};
    use crate::instances::{boundary_jump, slater};

    fn fin(n: i64) -> ExtReal {
        ExtReal::from_int(n)
    }

    fn lam(v: i64) -> Multiplier {
        Multiplier::new(vec![int(v)]).unwrap()
    }

    #[test]
    fn boundary_jump_values() {
        let p = boundary_jump();
        let v = primal_value(&p);
        assert_eq!(v.value, fin(-1));
        assert_eq!(v.witness, Some(Witness::Point(int(0))));
        let dl = lagrange_dual_value(&p);
        assert_eq!(dl.value, fin(-1));
        assert!(dl.attained);
        assert_eq!(dl.witness, Some(Witness::Multiplier(lam(0))));
        let dbar = cconj_dual_value(&p);
        assert_eq!(dbar.value, fin(0));
        assert!(dbar.attained);
        assert_eq!(dbar.witness, Some(Witness::Multiplier(lam(0))));
        assert_eq!(primal_value_eco(&p).value, fin(0));
    }

    #[test]
    fn boundary_jump_inner_values() {
        let p = boundary_jump();
        assert_eq!(lagrange_inner(&p, &lam(0)).unwrap().value, fin(-1));
        assert_eq!(lagrange_inner(&p, &lam(1)).unwrap().value, ExtReal::NegInf);
        assert_eq!(cconj_inner(&p, &lam(0)).unwrap().value, fin(0));
        assert_eq!(cconj_inner(&p, &lam(1)).unwrap().value, ExtReal::NegInf);
        assert_eq!(cconj_inner(&p, &Multiplier::new(vec![ratio(1, 100)]).unwrap()).unwrap().value, ExtReal::NegInf);
    }

    #[test]
    fn boundary_jump_fl_values() {
        let p = boundary_jump();
        let d = fl_dual_value(&p).unwrap();
        assert_eq!(d.value, fin(-1));
        assert!(d.attained);
        let db = fl_dual_value_bar(&p).unwrap();
        assert_eq!(db.value, fin(0));
        assert!(db.attained);
        let w0 = WPoint::ints(0, 0, 1);
        assert_eq!(fl_bar_objective(&p, &lam(0), &w0).unwrap(), fin(0));
        assert_eq!(fl_objective(&p, &lam(0), &w0).unwrap(), fin(-1));
        assert_eq!(fl_bar_objective(&p, &lam(1), &WPoint::ints(-1, 0, 1)).unwrap(), ExtReal::NegInf);
        assert!(member_kpp(&p, &int(0)).unwrap());
        assert!(!member_kpp(&p, &ratio(-1, 2)).unwrap());
    }

    #[test]
    fn slater_values() {
        let p = slater();
        for v in [
            primal_value(&p),
            lagrange_dual_value(&p),
            cconj_dual_value(&p),
            fl_dual_value(&p).unwrap(),
            fl_dual_value_bar(&p).unwrap(),
        ] {
            assert_eq!(v.value, fin(0));
            assert!(v.attained);
        }
    }

    /// Grid of exact inner values over λ ∈ [0, 4] at step 1/8.
    #[test]
    fn slater_lagrange_matches_lambda_grid() {
        let p = slater();
        let grid_best = (0..=32)
            .map(|i| lagrange_inner(&p, &Multiplier::new(vec![ratio(i, 8)]).unwrap()).unwrap().value)
            .max()
            .unwrap();
        assert_eq!(grid_best, lagrange_dual_value(&p).value);
    }

    #[test]
    fn membership_in_k() {
        let p = boundary_jump();
        assert!(member_k(&p, &int(0)));
        assert!(member_k(&p, &int(5)));
        assert!(!member_k(&p, &ratio(-1, 2)));
    }

    #[test]
    fn omega_value() {
        let p = boundary_jump();
        let o = omega_dual_value(&p);
        assert_eq!(o.value, fin(-1));
        assert!(o.attained);
    }

    #[test]
    fn validation() {
        use crate::instances::{abs, line, ramp};
        let neg_abs = abs().sub_dc(&abs()).sub_dc(&abs());
        let err = DCProblem::new(neg_abs, line(0, 0), vec![]).unwrap_err();
        assert!(matches!(err, Error::NotConvex { ref name, .. } if name == "f"), "{err}");
        // dom f ⊄ dom g on A
        let err = DCProblem::new(line(0, 0), ramp(), vec![]).unwrap_err();
        assert!(matches!(err, Error::Improper(_)));
        let p = DCProblem::new_allow_improper(line(0, 0), ramp(), vec![]).unwrap();
        assert_eq!(primal_value(&p).value, ExtReal::NegInf);
        assert!(fl_dual_value(&DCProblem::new(abs(), line(0, 0), vec![]).unwrap()).is_err());
    }

    #[test]
    fn empty_feasible_set() {
        use crate::instances::{abs, line};
        let p = DCProblem::new(abs(), line(0, 0), vec![line(0, 1)]).unwrap();
        assert_eq!(primal_value(&p).value, ExtReal::PosInf);
        assert_eq!(lagrange_dual_value(&p).value, ExtReal::PosInf);
    }
}
