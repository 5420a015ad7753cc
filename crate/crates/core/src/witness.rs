//! Vertical ray sets `{(0, 0, δ, β) : δ > 0, β ≥ or > threshold}` and the
//! duality verdicts read off them.
//!
//! Every characterization set compared here (epigraph of the conjugate of
//! the restricted objective, `K′`, `Ω′`, `Λ`, `K″`) meets the slab
//! `B = {0} × {0} × (0, ∞) × ℝ` in such a ray, so a set comparison is a
//! comparison of thresholds plus a closedness flag.

use std::fmt;

use num_traits::Signed;
use serde::Serialize;

use crate::conjcalc::{c_conjugate, eco_hull, WPoint};
use crate::duals::{
    cconj_dual_value, fl_dual_value_bar, lagrange_dual_value, member_k, member_kpp, omega_dual_value,
    primal_value, primal_value_eco, DCProblem,
};
use crate::extreal::{add_lower, ExtReal, Rational};
use crate::pwafun::{combine_constraints, Multiplier};
use crate::value::DualValue;
use crate::Error;

/// `{(0, 0, δ, β) : δ > 0, β > threshold}`, plus `β = threshold` when
/// `includes_threshold`. `+inf` is the empty set, `-inf` the whole slab.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RaySet {
    pub threshold: ExtReal,
    pub includes_threshold: bool,
}

impl RaySet {
    pub fn new(threshold: ExtReal, includes_threshold: bool) -> Self {
        let includes_threshold = includes_threshold && threshold.is_finite();
        RaySet { threshold, includes_threshold }
    }

    pub fn empty() -> Self {
        RaySet::new(ExtReal::PosInf, false)
    }

    pub fn full() -> Self {
        RaySet::new(ExtReal::NegInf, false)
    }

    pub fn closed(t: Rational) -> Self {
        RaySet::new(ExtReal::Finite(t), true)
    }

    pub fn open(t: Rational) -> Self {
        RaySet::new(ExtReal::Finite(t), false)
    }

    /// Whether `(0, 0, δ, β)` (any `δ > 0`) belongs to the set.
    pub fn contains(&self, beta: &Rational) -> bool {
        let b = ExtReal::Finite(beta.clone());
        b > self.threshold || (b == self.threshold && self.includes_threshold)
    }
}

impl fmt::Display for RaySet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.threshold {
            ExtReal::PosInf => f.write_str("empty"),
            ExtReal::NegInf => f.write_str("all beta"),
            t if self.includes_threshold => write!(f, "beta >= {t}"),
            t => write!(f, "beta > {t}"),
        }
    }
}

/// Closes a finite threshold; empty and full rays are unchanged.
pub fn epco_ray(r: &RaySet) -> RaySet {
    RaySet::new(r.threshold.clone(), r.threshold.is_finite())
}

pub fn ray_subset(r1: &RaySet, r2: &RaySet) -> bool {
    if r1.threshold == ExtReal::PosInf {
        return true;
    }
    r2.threshold < r1.threshold
        || (r2.threshold == r1.threshold && (!r1.includes_threshold || r2.includes_threshold))
}

pub fn ray_equal(r1: &RaySet, r2: &RaySet) -> bool {
    ray_subset(r1, r2) && ray_subset(r2, r1)
}

/// The ray `{β ≥ −v}` for an infimum-type value `v` (closed when finite).
fn ray_from_primal(v: &DualValue) -> RaySet {
    RaySet::new(v.value.neg(), true)
}

/// `{β ≥ −v}` or `{β > −v}` for a supremum-type value, closed exactly when
/// the supremum is attained.
fn ray_from_dual(v: &DualValue, attained: bool) -> RaySet {
    RaySet::new(v.value.neg(), attained)
}

/// `epi(f − g + δ_A)^c ∩ B`.
pub fn ray_epi_primal(p: &DCProblem) -> RaySet {
    ray_from_primal(&primal_value(p))
}

/// `Λ ∩ B = epi(f − eco g + δ_A)^c ∩ B`.
pub fn ray_lambda(p: &DCProblem) -> RaySet {
    ray_from_primal(&primal_value_eco(p))
}

/// `K′`, closed at the threshold exactly when `(0, 0, 0, −v(D̄_L)) ∈ K`.
pub fn ray_kprime(p: &DCProblem) -> RaySet {
    let v = cconj_dual_value(p);
    let closed = match v.value.finite() {
        Some(t) => member_k(p, &-t.clone()),
        None => false,
    };
    ray_from_dual(&v, closed)
}

/// `Ω′`: thresholds `β` for which some `λ` has `g − f − λh ≤ β` on `dom g`.
pub fn ray_omegaprime(p: &DCProblem) -> RaySet {
    let v = omega_dual_value(p);
    let attained = v.attained;
    ray_from_dual(&v, attained)
}

/// `K″ ∩ B` for a single constraint.
pub fn ray_kprimeprime(p: &DCProblem) -> Result<RaySet, Error> {
    let v = fl_dual_value_bar(p)?;
    let closed = match v.value.finite() {
        Some(t) => member_kpp(p, &-t.clone())?,
        None => false,
    };
    Ok(ray_from_dual(&v, closed))
}

/// Whether `(0, 0, δ, β) ∈ epi(f − g + δ_A)^c`, by evaluating the
/// c-conjugate at `(0, 0, δ)`.
pub fn member_epi_primal(p: &DCProblem, beta: &Rational, delta: &Rational) -> Result<bool, Error> {
    if !delta.is_positive() {
        return Err(Error::Invalid("delta must be positive".into()));
    }
    let w = WPoint::new(Rational::from_integer(0.into()), Rational::from_integer(0.into()), delta.clone());
    Ok(c_conjugate(&p.restricted_objective()).eval_c(&w) <= ExtReal::Finite(beta.clone()))
}

/// Checks `(w, β) ∈ K` with the multiplier `λ` against the listed points
/// of `dom g^c`: `(f + λh)^c(w + w′) ≤ β + g^c(w′)`. Returns the first
/// violating `w′`.
pub fn k_shift_violation(
    p: &DCProblem,
    lambda: &Multiplier,
    w: &WPoint,
    beta: &Rational,
    probes: &[WPoint],
) -> Result<Option<WPoint>, Error> {
    let fl = c_conjugate(&p.f.add(&combine_constraints(&p.constraints, lambda)?));
    let gc = c_conjugate(&p.g);
    for wp in probes {
        let gw = gc.eval_c(wp);
        if gw == ExtReal::PosInf {
            continue;
        }
        let shifted = WPoint::new(&w.xstar + &wp.xstar, &w.ystar + &wp.ystar, &w.alpha + &wp.alpha);
        if fl.eval_c(&shifted) > add_lower(&ExtReal::Finite(beta.clone()), &gw) {
            return Ok(Some(wp.clone()));
        }
    }
    Ok(None)
}

/// `(f − eco g + λh)^c(w)`, the function whose epigraph `K` must contain.
pub fn eco_lagrangian_conjugate(p: &DCProblem, lambda: &Multiplier, w: &WPoint) -> Result<ExtReal, Error> {
    let lh = combine_constraints(&p.constraints, lambda)?;
    let func = p.f.sub_dc(&eco_hull(&p.g)).add(&lh);
    Ok(c_conjugate(&func).eval_c(w))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Pair {
    /// Primal against the Lagrange dual.
    #[serde(rename = "L")]
    Lagrange,
    /// Primal against the c-conjugate Lagrange dual.
    #[serde(rename = "bar")]
    CConjugate,
    /// Primal against the c-conjugate Fenchel-Lagrange dual.
    #[serde(rename = "fl")]
    FenchelLagrange,
}

impl fmt::Display for Pair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Pair::Lagrange => "L",
            Pair::CConjugate => "bar",
            Pair::FenchelLagrange => "fl",
        })
    }
}

/// Weak, zero-gap and strong duality flags.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Verdicts {
    pub weak: bool,
    pub zero_gap: bool,
    pub strong: bool,
}

impl Verdicts {
    /// From the values directly: `v(P) ≥ v(D)`, equality, equality with
    /// the dual attained (or both infinite).
    pub fn from_values(primal: &DualValue, dual: &DualValue) -> Self {
        let zero_gap = primal.value == dual.value;
        Verdicts {
            weak: primal.value >= dual.value,
            zero_gap,
            strong: zero_gap && (dual.attained || dual.value.is_infinite()),
        }
    }

    fn from_rays(dual_ray: &RaySet, epi: &RaySet) -> Self {
        Verdicts {
            weak: ray_subset(dual_ray, epi),
            zero_gap: ray_equal(&epco_ray(dual_ray), epi),
            strong: ray_equal(dual_ray, epi),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualityVerdict {
    pub pair: Pair,
    pub weak: bool,
    pub zero_gap: bool,
    pub strong: bool,
    /// `epi(f − g + δ_A)^c ∩ B`.
    pub primal_ray: RaySet,
    /// The dual-side set the primal ray is compared with.
    pub dual_ray: RaySet,
    pub primal: DualValue,
    pub dual: DualValue,
    /// The same three verdicts read from the values.
    pub by_values: Verdicts,
    pub consistent: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

fn verdict(pair: Pair, primal: DualValue, dual: DualValue, primal_ray: RaySet, dual_ray: RaySet) -> DualityVerdict {
    let rays = Verdicts::from_rays(&dual_ray, &primal_ray);
    let by_values = Verdicts::from_values(&primal, &dual);
    DualityVerdict {
        pair,
        weak: rays.weak,
        zero_gap: rays.zero_gap,
        strong: rays.strong,
        primal_ray,
        dual_ray,
        primal,
        dual,
        by_values,
        consistent: rays == by_values,
        notes: vec![],
    }
}

/// Note attached to the c-conjugate Lagrange pair.
pub const DOM_GC_NOTE: &str = "inner infimum of the c-conjugate dual is taken over dom g^c; \
over all of W it would be -inf for every multiplier (points with y* = 0, alpha <= 0 make both \
c-conjugates +inf, and +inf - +inf = -inf)";

/// Note attached to the Lagrange pair.
pub const OMEGA_NOTE: &str = "containment of Omega' is checked against epi(f - g + delta_A)^c (the \
sign pattern used by every neighbouring statement), not epi(f + g - delta_A)^c";

/// `(P)` against `(D̄_L)`: `K′` compared with the epigraph ray.
pub fn classify_bar_pair(p: &DCProblem) -> DualityVerdict {
    let mut v = verdict(
        Pair::CConjugate,
        primal_value(p),
        cconj_dual_value(p),
        ray_epi_primal(p),
        ray_kprime(p),
    );
    v.notes.push(DOM_GC_NOTE.into());
    v
}

/// `(P)` against `(D_L)`: `Ω′` compared with the epigraph ray. Weak
/// duality always holds for this pair; the containment `Ω′ ⊆ epi ∩ B` is
/// recorded as a consistency check.
pub fn classify_l_pair(p: &DCProblem) -> DualityVerdict {
    let primal = primal_value(p);
    let dual = lagrange_dual_value(p);
    let epi = ray_epi_primal(p);
    let omega = ray_omegaprime(p);
    let mut v = verdict(Pair::Lagrange, primal, dual, epi, omega);
    let contained = v.weak;
    v.weak = true;
    v.consistent = v.consistent && contained;
    v.notes.push(OMEGA_NOTE.into());
    if !contained {
        v.notes.push("Omega' is not contained in the epigraph ray".into());
    }
    v
}

/// `(P)` against `(D̄_FL)` for a single constraint.
pub fn classify_fl_pair(p: &DCProblem) -> Result<DualityVerdict, Error> {
    Ok(verdict(
        Pair::FenchelLagrange,
        primal_value(p),
        fl_dual_value_bar(p)?,
        ray_epi_primal(p),
        ray_kprimeprime(p)?,
    ))
}

/// Outcome of checking: when `epi ∩ B = Λ ∩ B`, strong duality for the
/// Lagrange pair holds iff strong duality for the c-conjugate pair holds
/// and `Ω′ = K′`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StrongDualityLink {
    pub hypothesis: bool,
    pub epi: RaySet,
    pub lambda: RaySet,
    pub omega: RaySet,
    pub kprime: RaySet,
    pub lagrange_strong: bool,
    pub cconj_strong: bool,
    pub omega_equals_kprime: bool,
    /// `None` when the hypothesis fails and nothing is asserted.
    pub holds: Option<bool>,
}

impl fmt::Display for StrongDualityLink {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "epi: {}; Lambda: {}; Omega': {}; K': {}; ",
            self.epi, self.lambda, self.omega, self.kprime
        )?;
        match self.holds {
            None => f.write_str("hypothesis epi = Lambda fails, not applicable"),
            Some(true) => f.write_str("biconditional holds"),
            Some(false) => f.write_str("BICONDITIONAL VIOLATED"),
        }
    }
}

pub fn strong_duality_link(p: &DCProblem) -> StrongDualityLink {
    let epi = ray_epi_primal(p);
    let lambda = ray_lambda(p);
    let omega = ray_omegaprime(p);
    let kprime = ray_kprime(p);
    let hypothesis = ray_equal(&epi, &lambda);
    let lagrange_strong = ray_equal(&omega, &epi);
    let cconj_strong = ray_equal(&kprime, &epi);
    let omega_equals_kprime = ray_equal(&omega, &kprime);
    let holds = hypothesis.then_some(lagrange_strong == (cconj_strong && omega_equals_kprime));
    StrongDualityLink {
        hypothesis,
        epi,
        lambda,
        omega,
        kprime,
        lagrange_strong,
        cconj_strong,
        omega_equals_kprime,
        holds,
    }
}
