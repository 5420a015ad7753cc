//! Brute-force approximations on rational grids.
//!
//! Nothing here uses the support-pattern machinery. Infimum-type values
//! (the primal problems) are minima over an `x` grid, so they can only
//! overestimate. Supremum-type values (the duals) are maxima over a grid
//! of multipliers (and dual points `x*` for the Fenchel-Lagrange duals)
//! with the innermost infimum evaluated exactly, so they can only
//! underestimate.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::conjcalc::{c_conjugate, fenchel_conjugate, halfspace_contains, WPoint};
use crate::duals::{cconj_inner, fl_bar_objective, lagrange_inner, DCProblem};
use crate::extreal::{int, ratio, sub_lower, ExtReal, Rational};
use crate::pwafun::{combine_constraints, Multiplier};
use crate::Error;

/// Per-axis point budget used for multi-constraint multiplier grids, which
/// are not refined.
const MULTI_AXIS_POINTS: i64 = 8;
/// Escape threshold for declaring a grid value infinite.
const ESCAPE: i64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GridSpec {
    #[serde(with = "pair_serde")]
    pub x_range: (Rational, Rational),
    /// Box for each coordinate of a dual point.
    #[serde(with = "pair_serde")]
    pub w_range: (Rational, Rational),
    #[serde(with = "crate::extreal::rational_serde")]
    pub lambda_max: Rational,
    #[serde(with = "crate::extreal::rational_serde")]
    pub step: Rational,
}

mod pair_serde {
    use serde::{Serialize, Serializer};

    use crate::extreal::{format_rational, Rational};

    pub fn serialize<S: Serializer>(p: &(Rational, Rational), s: S) -> Result<S::Ok, S::Error> {
        [format_rational(&p.0), format_rational(&p.1)].serialize(s)
    }
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            x_range: (int(-8), int(8)),
            w_range: (int(-4), int(4)),
            lambda_max: int(4),
            step: ratio(1, 16),
        }
    }
}

impl GridSpec {
    pub fn new(
        x_range: (Rational, Rational),
        w_range: (Rational, Rational),
        lambda_max: Rational,
        step: Rational,
    ) -> Result<Self, Error> {
        if !step.is_positive() {
            return Err(Error::Invalid("grid step must be positive".into()));
        }
        if x_range.0 > x_range.1 || w_range.0 > w_range.1 {
            return Err(Error::Invalid("grid ranges must be nonempty".into()));
        }
        if lambda_max.is_negative() {
            return Err(Error::Invalid("lambda_max must be nonnegative".into()));
        }
        Ok(GridSpec { x_range, w_range, lambda_max, step })
    }

    pub fn with_step(&self, step: Rational) -> Result<Self, Error> {
        GridSpec::new(self.x_range.clone(), self.w_range.clone(), self.lambda_max.clone(), step)
    }
}

/// The quantity approximated by [`approx_value`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Quantity {
    #[serde(rename = "P")]
    Primal,
    #[serde(rename = "P_e")]
    PrimalEco,
    #[serde(rename = "D_L")]
    Lagrange,
    #[serde(rename = "D_bar_L")]
    CConjugate,
    #[serde(rename = "D_FL")]
    FenchelLagrange,
    #[serde(rename = "D_bar_FL")]
    FenchelLagrangeBar,
}

impl Quantity {
    pub const ALL: [Quantity; 6] = [
        Quantity::Primal,
        Quantity::PrimalEco,
        Quantity::Lagrange,
        Quantity::CConjugate,
        Quantity::FenchelLagrange,
        Quantity::FenchelLagrangeBar,
    ];

    pub fn is_inf_type(self) -> bool {
        matches!(self, Quantity::Primal | Quantity::PrimalEco)
    }

    pub fn name(self) -> &'static str {
        match self {
            Quantity::Primal => "P",
            Quantity::PrimalEco => "P_e",
            Quantity::Lagrange => "D_L",
            Quantity::CConjugate => "D_bar_L",
            Quantity::FenchelLagrange => "D_FL",
            Quantity::FenchelLagrangeBar => "D_bar_FL",
        }
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Quantity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Quantity::ALL
            .into_iter()
            .find(|q| q.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Parse(format!("unknown quantity {s:?}")))
    }
}

/// A one-sided bracket: `[-inf, grid]` for infima, `[grid, +inf]` for
/// suprema, with the grid value at `step`, `step/2` and `step/4`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Bracket {
    pub quantity: Quantity,
    pub lower: ExtReal,
    pub upper: ExtReal,
    pub refinements: Vec<Refinement>,
    /// Set when the finest grid value exceeds the escape threshold.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub escaped: Option<ExtReal>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Refinement {
    #[serde(with = "crate::extreal::rational_serde")]
    pub step: Rational,
    pub value: ExtReal,
}

impl Bracket {
    pub fn estimate(&self) -> &ExtReal {
        &self.refinements.last().expect("three refinements").value
    }

    /// Whether `v` is consistent with every refinement level.
    pub fn contains(&self, v: &ExtReal) -> bool {
        self.refinements.iter().all(|r| {
            if self.quantity.is_inf_type() {
                v <= &r.value
            } else {
                v >= &r.value
            }
        })
    }

    /// Halving the step never worsens the grid value.
    pub fn is_monotone(&self) -> bool {
        self.refinements.windows(2).all(|w| {
            if self.quantity.is_inf_type() {
                w[1].value <= w[0].value
            } else {
                w[1].value >= w[0].value
            }
        })
    }
}

impl fmt::Display for Bracket {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: [{}, {}]", self.quantity, self.lower, self.upper)?;
        for r in &self.refinements {
            write!(f, "  step {}: {}", crate::extreal::format_rational(&r.step), r.value)?;
        }
        if let Some(e) = &self.escaped {
            write!(f, "  (escaped to {e})")?;
        }
        Ok(())
    }
}

/// Best values per refinement level (0 = coarsest).
struct Tracker {
    minimize: bool,
    raw: [ExtReal; 3],
}

impl Tracker {
    fn new(minimize: bool) -> Self {
        let init = if minimize { ExtReal::PosInf } else { ExtReal::NegInf };
        Tracker { minimize, raw: [init.clone(), init.clone(), init] }
    }

    fn offer(&mut self, level: usize, v: ExtReal) {
        let slot = &mut self.raw[level];
        let cur = std::mem::replace(slot, ExtReal::NegInf);
        *slot = if self.minimize { cur.min(v) } else { cur.max(v) };
    }

    fn cumulative(&self) -> [ExtReal; 3] {
        let pick = |a: ExtReal, b: ExtReal| if self.minimize { a.min(b) } else { a.max(b) };
        let c0 = self.raw[0].clone();
        let c1 = pick(c0.clone(), self.raw[1].clone());
        let c2 = pick(c1.clone(), self.raw[2].clone());
        [c0, c1, c2]
    }
}

fn level_of(indices: &[usize]) -> usize {
    if indices.iter().all(|i| i % 4 == 0) {
        0
    } else if indices.iter().all(|i| i % 2 == 0) {
        1
    } else {
        2
    }
}

/// Points `lo, lo + h, …` up to `hi` with `h = step / 4`, tagged with
/// their refinement level.
fn axis(lo: &Rational, hi: &Rational, step: &Rational) -> Vec<(Rational, usize)> {
    let h = step / int(4);
    let mut out = vec![];
    let mut k = 0usize;
    let mut x = lo.clone();
    while &x <= hi {
        out.push((x.clone(), level_of(&[k])));
        k += 1;
        x = &x + &h;
    }
    out
}

/// `count + 1` evenly spaced points, all at level 0.
fn fixed_axis(lo: &Rational, hi: &Rational, count: i64) -> Vec<(Rational, usize)> {
    let h = (hi - lo) / int(count.max(1));
    (0..=count.max(1)).map(|k| (lo + &h * int(k), 0)).collect()
}

fn lambda_points(spec: &GridSpec, n: usize) -> Vec<(Multiplier, usize)> {
    let zero = Rational::zero();
    if n == 1 {
        return axis(&zero, &spec.lambda_max, &spec.step)
            .into_iter()
            .map(|(l, lvl)| (Multiplier::new(vec![l]).expect("nonnegative"), lvl))
            .collect();
    }
    let ax: Vec<Rational> =
        fixed_axis(&zero, &spec.lambda_max, MULTI_AXIS_POINTS).into_iter().map(|(l, _)| l).collect();
    let mut out: Vec<Vec<Rational>> = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                ax.iter().map(move |l| {
                    let mut v = prefix.clone();
                    v.push(l.clone());
                    v
                })
            })
            .collect();
    }
    out.into_iter().map(|v| (Multiplier::new(v).expect("nonnegative"), 0)).collect()
}

fn xstar_points(spec: &GridSpec, n: usize) -> Vec<(Rational, usize)> {
    if n == 1 {
        axis(&spec.w_range.0, &spec.w_range.1, &spec.step)
    } else {
        fixed_axis(&spec.w_range.0, &spec.w_range.1, 4 * MULTI_AXIS_POINTS)
    }
}

fn unit_w(xstar: &Rational) -> WPoint {
    WPoint::new(xstar.clone(), Rational::zero(), Rational::one())
}

/// Grid approximation of one optimal value.
pub fn approx_value(p: &DCProblem, q: Quantity, spec: &GridSpec) -> Result<Bracket, Error> {
    let mut t = Tracker::new(q.is_inf_type());
    let n = p.num_constraints();
    match q {
        Quantity::Primal | Quantity::PrimalEco => {
            let func = if q == Quantity::Primal {
                p.restricted_objective()
            } else {
                p.with_eco_g().restricted_objective()
            };
            for (x, lvl) in axis(&spec.x_range.0, &spec.x_range.1, &spec.step) {
                t.offer(lvl, func.eval(&x));
            }
        }
        Quantity::Lagrange | Quantity::CConjugate => {
            for (lam, lvl) in lambda_points(spec, n) {
                let inner = if q == Quantity::Lagrange { lagrange_inner(p, &lam)? } else { cconj_inner(p, &lam)? };
                t.offer(lvl, inner.value);
            }
        }
        Quantity::FenchelLagrange | Quantity::FenchelLagrangeBar => {
            let xs = xstar_points(spec, n);
            let first: Vec<ExtReal> = if q == Quantity::FenchelLagrange {
                let oc = c_conjugate(&p.objective());
                xs.iter().map(|(x, _)| oc.eval_c(&unit_w(&-x.clone())).neg()).collect()
            } else {
                let fc = c_conjugate(&p.f);
                let gstar = fenchel_conjugate(&p.g);
                let open = halfspace_contains(fc.dom.as_ref(), &Rational::zero(), &Rational::one());
                xs.iter()
                    .map(|(x, _)| {
                        if open {
                            gstar.sub_dc(&fc.fstar.translated(x)).infimum().value
                        } else {
                            ExtReal::NegInf
                        }
                    })
                    .collect()
            };
            for (lam, llvl) in lambda_points(spec, n) {
                let lc = c_conjugate(&combine_constraints(&p.constraints, &lam)?);
                for ((x, xlvl), a) in xs.iter().zip(&first) {
                    let v = sub_lower(a, &lc.eval_c(&unit_w(x)));
                    t.offer(llvl.max(*xlvl), v);
                }
            }
        }
    }
    let values = t.cumulative();
    let steps = [spec.step.clone(), &spec.step / int(2), &spec.step / int(4)];
    let refinements: Vec<Refinement> =
        steps.into_iter().zip(values).map(|(step, value)| Refinement { step, value }).collect();
    let finest = refinements[2].value.clone();
    let escaped = match finest.finite() {
        Some(v) if v.abs() > int(ESCAPE) => Some(if v.is_positive() { ExtReal::PosInf } else { ExtReal::NegInf }),
        _ => None,
    };
    let (lower, upper) = if q.is_inf_type() { (ExtReal::NegInf, finest) } else { (finest, ExtReal::PosInf) };
    Ok(Bracket { quantity: q, lower, upper, refinements, escaped })
}

/// Sets probed by [`approx_member`], each at a point `(0, 0, δ, β)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum MemberSet {
    #[serde(rename = "epi")]
    EpiPrimal,
    K,
    #[serde(rename = "Omega")]
    Omega,
    #[serde(rename = "K''")]
    Kpp,
}

impl FromStr for MemberSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "epi" | "epi_primal" => Ok(MemberSet::EpiPrimal),
            "K" => Ok(MemberSet::K),
            "Omega" | "omega" => Ok(MemberSet::Omega),
            "K''" | "Kpp" => Ok(MemberSet::Kpp),
            _ => Err(Error::Parse(format!("unknown set {s:?}"))),
        }
    }
}

/// A grid point that decided a membership query.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GridWitness {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<Multiplier>,
    #[serde(skip_serializing_if = "Option::is_none", with = "opt_rational")]
    pub x: Option<Rational>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub w: Option<WPoint>,
}

mod opt_rational {
    use serde::Serializer;

    use crate::extreal::{format_rational, Rational};

    pub fn serialize<S: Serializer>(q: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match q {
            Some(q) => s.serialize_str(&format_rational(q)),
            None => s.serialize_none(),
        }
    }
}

/// Outcome of a grid membership query. `conclusive` answers carry the
/// witnesses that decided them. For `K` and `Ω` a negative answer is
/// conclusive per multiplier on the grid: every grid multiplier comes with
/// its own violating point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MemberReport {
    pub set: MemberSet,
    #[serde(with = "crate::extreal::rational_serde")]
    pub beta: Rational,
    pub member: bool,
    pub conclusive: bool,
    pub witnesses: Vec<GridWitness>,
}

fn k_probe_points(spec: &GridSpec) -> Vec<WPoint> {
    let xs = axis(&spec.w_range.0, &spec.w_range.1, &(&spec.step * int(4)));
    let ys = fixed_axis(&spec.w_range.0, &spec.w_range.1, 8);
    let alphas = [ratio(1, 4), ratio(1, 2), int(1), int(2), int(4)];
    let mut out = vec![];
    for (x, _) in &xs {
        for (y, _) in &ys {
            for a in &alphas {
                out.push(WPoint::new(x.clone(), y.clone(), a.clone()));
            }
        }
    }
    out
}

/// Grid test of whether `(0, 0, δ, β)` belongs to the chosen set.
pub fn approx_member(
    p: &DCProblem,
    set: MemberSet,
    beta: &Rational,
    delta: &Rational,
    spec: &GridSpec,
) -> Result<MemberReport, Error> {
    if !delta.is_positive() {
        return Err(Error::Invalid("delta must be positive".into()));
    }
    let neg_beta = ExtReal::Finite(-beta.clone());
    let report = |member, conclusive, witnesses| MemberReport { set, beta: beta.clone(), member, conclusive, witnesses };
    let n = p.num_constraints();
    match set {
        MemberSet::EpiPrimal => {
            // c(x, (0, 0, δ)) = 0 everywhere, so the conjugate is sup −F
            let func = p.restricted_objective();
            for (x, _) in axis(&spec.x_range.0, &spec.x_range.1, &spec.step) {
                if func.eval(&x) < neg_beta {
                    return Ok(report(false, true, vec![GridWitness { lambda: None, x: Some(x), w: None }]));
                }
            }
            Ok(report(true, false, vec![]))
        }
        MemberSet::Omega => {
            let base = p.objective();
            let xs: Vec<Rational> = axis(&spec.x_range.0, &spec.x_range.1, &spec.step)
                .into_iter()
                .map(|(x, _)| x)
                .filter(|x| p.g.eval(x) != ExtReal::PosInf)
                .collect();
            let mut witnesses = vec![];
            for (lam, _) in lambda_points(spec, n) {
                let func = base.add(&combine_constraints(&p.constraints, &lam)?);
                match xs.iter().find(|x| func.eval(x) < neg_beta) {
                    Some(x) => witnesses.push(GridWitness { lambda: Some(lam), x: Some(x.clone()), w: None }),
                    None => return Ok(report(true, false, vec![GridWitness { lambda: Some(lam), x: None, w: None }])),
                }
            }
            Ok(report(false, true, witnesses))
        }
        MemberSet::K => {
            let gc = c_conjugate(&p.g);
            let probes: Vec<(WPoint, ExtReal)> = k_probe_points(spec)
                .into_iter()
                .filter_map(|w| {
                    let v = gc.eval_c(&w);
                    (v != ExtReal::PosInf).then_some((w, v))
                })
                .collect();
            let mut witnesses = vec![];
            for (lam, _) in lambda_points(spec, n) {
                let fl = c_conjugate(&p.f.add(&combine_constraints(&p.constraints, &lam)?));
                match probes.iter().find(|(w, gv)| sub_lower(gv, &fl.eval_c(w)) < neg_beta) {
                    Some((w, _)) => witnesses.push(GridWitness { lambda: Some(lam), x: None, w: Some(w.clone()) }),
                    None => return Ok(report(true, false, vec![GridWitness { lambda: Some(lam), x: None, w: None }])),
                }
            }
            Ok(report(false, true, witnesses))
        }
        MemberSet::Kpp => {
            let xs = xstar_points(spec, n);
            for (lam, _) in lambda_points(spec, n) {
                for (x, _) in &xs {
                    let w = unit_w(x);
                    if fl_bar_objective(p, &lam, &w)? >= neg_beta {
                        return Ok(report(true, true, vec![GridWitness { lambda: Some(lam), x: None, w: Some(w) }]));
                    }
                }
            }
            Ok(report(false, false, vec![]))
        }
    }
}

/// Re-checks every witness of a conclusive report with the exact
/// evaluators. Presumptive reports pass trivially.
pub fn reverify(p: &DCProblem, r: &MemberReport) -> Result<bool, Error> {
    if !r.conclusive {
        return Ok(true);
    }
    let neg_beta = ExtReal::Finite(-r.beta.clone());
    for wit in &r.witnesses {
        let ok = match (r.set, &wit.lambda, &wit.x, &wit.w) {
            (MemberSet::EpiPrimal, _, Some(x), _) => p.restricted_objective().eval(x) < neg_beta,
            (MemberSet::Omega, Some(lam), Some(x), _) => {
                let func = p.objective().add(&combine_constraints(&p.constraints, lam)?);
                p.g.eval(x) != ExtReal::PosInf && func.eval(x) < neg_beta
            }
            (MemberSet::K, Some(lam), _, Some(w)) => {
                matches!(crate::duals::cconj_integrand(p, lam, w)?, Some(v) if v < neg_beta)
            }
            (MemberSet::Kpp, Some(lam), _, Some(w)) => fl_bar_objective(p, lam, w)? >= neg_beta,
            _ => false,
        };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}
