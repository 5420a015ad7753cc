//! Full analyses of one problem and the property suite behind `verify`.

use std::fmt;

use serde::Serialize;

use crate::conjcalc::{c_conjugate, eco_hull, is_econvex, is_lsc_at_domain_ends, WPoint};
use crate::duals::{
    cconj_dual_value, fl_dual_value, fl_dual_value_bar, lagrange_dual_value, member_k, primal_value,
    primal_value_eco, DCProblem,
};
use crate::extreal::{format_rational, int, ratio, ExtReal};
use crate::oracle::{approx_member, approx_value, reverify, Bracket, GridSpec, MemberSet, Quantity};
use crate::problem::{parse_problem_file, Expected, ProblemFile};
use crate::pwafun::Multiplier;
use crate::value::DualValue;
use crate::witness::{
    classify_bar_pair, classify_fl_pair, classify_l_pair, epco_ray, k_shift_violation, member_epi_primal,
    ray_epi_primal, ray_kprime, ray_kprimeprime, ray_lambda, ray_omegaprime, ray_subset,
    strong_duality_link, DualityVerdict, Pair, RaySet, StrongDualityLink,
};
use crate::Error;

/// Note attached whenever the Fenchel-Lagrange set decides a verdict.
pub const KPP_NOTE: &str = "K'' membership reads the second union as ranging over (y*, v*, alpha) with \
(-y*, -v*, alpha) in dom (lambda h)^c and the intersection over dom g^c; membership is reduced to \
dual points (x*, 0, 1)";

/// One optimal value: exact, or a grid bracket when no exact method
/// applies (Fenchel-Lagrange duals with several constraints).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ValueEntry {
    Exact(DualValue),
    OracleOnly { bracket: Bracket },
}

impl ValueEntry {
    pub fn exact(&self) -> Option<&DualValue> {
        match self {
            ValueEntry::Exact(v) => Some(v),
            ValueEntry::OracleOnly { .. } => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Values {
    #[serde(rename = "P")]
    pub primal: ValueEntry,
    #[serde(rename = "P_e")]
    pub primal_eco: ValueEntry,
    #[serde(rename = "D_L")]
    pub lagrange: ValueEntry,
    #[serde(rename = "D_bar_L")]
    pub cconj: ValueEntry,
    #[serde(rename = "D_FL")]
    pub fl: ValueEntry,
    #[serde(rename = "D_bar_FL")]
    pub fl_bar: ValueEntry,
}

impl Values {
    pub fn get(&self, q: Quantity) -> &ValueEntry {
        match q {
            Quantity::Primal => &self.primal,
            Quantity::PrimalEco => &self.primal_eco,
            Quantity::Lagrange => &self.lagrange,
            Quantity::CConjugate => &self.cconj,
            Quantity::FenchelLagrange => &self.fl,
            Quantity::FenchelLagrangeBar => &self.fl_bar,
        }
    }
}

/// The B-sections of the characterization sets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Rays {
    pub epi: RaySet,
    pub lambda: RaySet,
    pub omega: RaySet,
    pub kprime: RaySet,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kprimeprime: Option<RaySet>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

impl Check {
    fn new(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        Check { name: name.into(), passed, detail: detail.into() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub num_constraints: usize,
    pub g_econvex: bool,
    pub values: Values,
    pub rays: Rays,
    pub verdicts: Vec<DualityVerdict>,
    pub strong_duality_link: StrongDualityLink,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
}

impl Report {
    pub fn all_checks_pass(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn exact_or_oracle(p: &DCProblem, q: Quantity, grid: &GridSpec) -> Result<ValueEntry, Error> {
    if p.num_constraints() == 1 {
        let v = match q {
            Quantity::FenchelLagrange => fl_dual_value(p)?,
            _ => fl_dual_value_bar(p)?,
        };
        Ok(ValueEntry::Exact(v))
    } else {
        Ok(ValueEntry::OracleOnly { bracket: approx_value(p, q, grid)? })
    }
}

/// Values, rays, verdicts and consistency checks for one problem.
/// `pair` restricts the verdicts; the grid is used only for values no
/// exact method covers.
pub fn analyze(p: &DCProblem, pair: Option<Pair>, grid: &GridSpec) -> Result<Report, Error> {
    let single = p.num_constraints() == 1;
    let values = Values {
        primal: ValueEntry::Exact(primal_value(p)),
        primal_eco: ValueEntry::Exact(primal_value_eco(p)),
        lagrange: ValueEntry::Exact(lagrange_dual_value(p)),
        cconj: ValueEntry::Exact(cconj_dual_value(p)),
        fl: exact_or_oracle(p, Quantity::FenchelLagrange, grid)?,
        fl_bar: exact_or_oracle(p, Quantity::FenchelLagrangeBar, grid)?,
    };
    let rays = Rays {
        epi: ray_epi_primal(p),
        lambda: ray_lambda(p),
        omega: ray_omegaprime(p),
        kprime: ray_kprime(p),
        kprimeprime: if single { Some(ray_kprimeprime(p)?) } else { None },
    };
    let wants = |q: Pair| pair.is_none() || pair == Some(q);
    let mut verdicts = vec![];
    let mut notes = vec![];
    if wants(Pair::Lagrange) {
        verdicts.push(classify_l_pair(p));
    }
    if wants(Pair::CConjugate) {
        verdicts.push(classify_bar_pair(p));
    }
    if wants(Pair::FenchelLagrange) {
        if single {
            let mut v = classify_fl_pair(p)?;
            v.notes.push(KPP_NOTE.into());
            verdicts.push(v);
        } else {
            notes.push("Fenchel-Lagrange pair skipped: exact analysis needs a single constraint; values are oracle-only".into());
        }
    }
    for v in &verdicts {
        for n in &v.notes {
            if !notes.contains(n) {
                notes.push(n.clone());
            }
        }
    }
    let link = strong_duality_link(p);
    let mut checks: Vec<Check> = verdicts
        .iter()
        .map(|v| Check::new(&format!("verdicts match values ({})", v.pair), v.consistent, ""))
        .collect();
    checks.push(Check::new(
        "Omega' inside epigraph ray",
        ray_subset(&rays.omega, &rays.epi),
        format!("Omega': {}, epi: {}", rays.omega, rays.epi),
    ));
    if let Some(holds) = link.holds {
        checks.push(Check::new("strong duality link", holds, link.to_string()));
    }
    if !link.hypothesis {
        notes.push(format!("strong duality link not applicable: epi {} differs from Lambda {}", rays.epi, rays.lambda));
    }
    Ok(Report {
        name: None,
        num_constraints: p.num_constraints(),
        g_econvex: is_econvex(&p.g),
        values,
        rays,
        verdicts,
        strong_duality_link: link,
        checks,
        notes,
    })
}

fn show_value(e: &ValueEntry) -> String {
    match e {
        ValueEntry::Exact(v) => {
            let mut s = v.value.to_string();
            if v.attained {
                s.push_str(" (attained");
                if let Some(w) = &v.witness {
                    s.push_str(&format!(" at {w}"));
                }
                s.push(')');
            } else if v.value.is_finite() {
                s.push_str(" (not attained)");
            }
            s
        }
        ValueEntry::OracleOnly { bracket } => format!("oracle-only, bracket [{}, {}]", bracket.lower, bracket.upper),
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(n) = &self.name {
            writeln!(f, "problem {n}")?;
        }
        writeln!(f, "constraints: {}; g e-convex: {}", self.num_constraints, self.g_econvex)?;
        writeln!(f, "values:")?;
        for q in Quantity::ALL {
            let label = format!("v({q})");
            writeln!(f, "  {label:<12}= {}", show_value(self.values.get(q)))?;
        }
        writeln!(f, "rays in B = {{(0, 0, delta, beta) : delta > 0}}:")?;
        writeln!(f, "  epi(f - g + delta_A)^c : {}", self.rays.epi)?;
        writeln!(f, "  Lambda                 : {}", self.rays.lambda)?;
        writeln!(f, "  Omega'                 : {}", self.rays.omega)?;
        writeln!(f, "  K'                     : {}", self.rays.kprime)?;
        if let Some(k) = &self.rays.kprimeprime {
            writeln!(f, "  K''                    : {k}")?;
        }
        writeln!(f, "verdicts:")?;
        for v in &self.verdicts {
            writeln!(
                f,
                "  {:<4} weak={} zero_gap={} strong={} (dual ray {} vs {})",
                v.pair.to_string(),
                v.weak,
                v.zero_gap,
                v.strong,
                v.dual_ray,
                v.primal_ray
            )?;
        }
        writeln!(f, "strong duality link: {}", self.strong_duality_link)?;
        writeln!(f, "checks:")?;
        for c in &self.checks {
            let mark = if c.passed { "ok  " } else { "FAIL" };
            writeln!(f, "  {mark} {}", c.name)?;
        }
        if !self.notes.is_empty() {
            writeln!(f, "notes:")?;
            for n in &self.notes {
                writeln!(f, "  - {n}")?;
            }
        }
        Ok(())
    }
}

/// A property that failed during `verify`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub property: String,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SuiteOutcome {
    pub checked: usize,
    pub failures: Vec<Failure>,
}

impl SuiteOutcome {
    fn record(&mut self, property: &str, ok: bool, detail: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(Failure { property: property.into(), detail: detail() });
        }
    }

    fn record_err<T>(&mut self, property: &str, r: Result<T, Error>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.record(property, false, || e.to_string());
                None
            }
        }
    }
}

fn dual_probes() -> Vec<WPoint> {
    let mut out = vec![];
    for x in -3..=3 {
        for y in -1..=1 {
            for a in [ratio(1, 2), int(1), int(2)] {
                out.push(WPoint::new(int(x), int(y), a));
            }
        }
    }
    out
}

fn check_expected(out: &mut SuiteOutcome, report: &Report, expected: &Expected) {
    for (key, want) in &expected.values {
        let Ok(q) = key.parse::<Quantity>() else {
            out.record("expected value", false, || format!("unknown quantity {key:?}"));
            continue;
        };
        match report.values.get(q) {
            ValueEntry::Exact(v) => out.record("expected value", &v.value == want, || {
                format!("v({q}) = {} but the file expects {want}", v.value)
            }),
            ValueEntry::OracleOnly { bracket } => out.record("expected value", bracket.contains(want), || {
                format!("expected v({q}) = {want} lies outside the oracle bracket {bracket}")
            }),
        }
    }
    for (key, want) in &expected.verdicts {
        match report.verdicts.iter().find(|v| v.pair.to_string() == *key) {
            Some(v) => out.record("expected verdict", (v.weak, v.zero_gap, v.strong) == (want.weak, want.zero_gap, want.strong), || {
                format!(
                    "pair {key}: weak={} zero_gap={} strong={} but the file expects weak={} zero_gap={} strong={}",
                    v.weak, v.zero_gap, v.strong, want.weak, want.zero_gap, want.strong
                )
            }),
            None => out.record("expected verdict", false, || format!("pair {key} was not analyzed")),
        }
    }
}

/// Runs every property check on one problem. `file` supplies expected
/// results and the round-trip check when present.
pub fn run_suite(p: &DCProblem, file: Option<&ProblemFile>, grid: &GridSpec) -> SuiteOutcome {
    let mut out = SuiteOutcome::default();
    let Some(report) = out.record_err("analysis", analyze(p, None, grid)) else { return out };
    for c in &report.checks {
        out.record(&c.name, c.passed, || c.detail.clone());
    }
    if let Some(file) = file {
        if let Some(e) = &file.expected {
            check_expected(&mut out, &report, e);
        }
        let again = parse_problem_file(&file.to_json()).and_then(|f| f.problem());
        out.record("round trip", again.as_ref().ok() == Some(p), || format!("{again:?}"));
    }

    let vp = primal_value(p).value;
    out.record("weak duality (L)", lagrange_dual_value(p).value <= vp, || "v(D_L) > v(P)".into());
    if let Some(v) = vp.finite() {
        for d in [-1, 0, 1] {
            let beta = -v.clone() + int(d);
            let m1 = member_epi_primal(p, &beta, &int(1));
            let m100 = member_epi_primal(p, &beta, &int(100));
            out.record("epigraph membership", matches!((&m1, &m100), (Ok(a), Ok(b)) if *a == (d >= 0) && a == b), || {
                format!("beta {}: delta 1 gives {m1:?}, delta 100 gives {m100:?}", format_rational(&beta))
            });
        }
    }
    if let Some(v) = cconj_dual_value(p).value.finite() {
        let above = member_k(p, &(-v.clone() + ratio(1, 2)));
        let below = member_k(p, &(-v.clone() - ratio(1, 2)));
        out.record("K sandwich", above && !below, || format!("above: {above}, below: {below}"));
    }
    for r in [&report.rays.epi, &report.rays.kprime, &report.rays.omega] {
        let c = epco_ray(r);
        out.record("epco idempotent and monotone", epco_ray(&c) == c && ray_subset(r, &c), || r.to_string());
    }

    let probes = dual_probes();
    for k in 0..3 {
        let lam = Multiplier::new(vec![ratio(k, 2); p.num_constraints()]).expect("nonnegative");
        let lh = crate::pwafun::combine_constraints(&p.constraints, &lam).expect("dimensions");
        let func = p.f.sub_dc(&eco_hull(&p.g)).add(&lh);
        let fc = c_conjugate(&func);
        for w in probes.iter().step_by(7) {
            let beta = match fc.eval_c(w) {
                ExtReal::Finite(b) => b,
                ExtReal::NegInf => int(0),
                ExtReal::PosInf => continue,
            };
            let bad = k_shift_violation(p, &lam, w, &beta, &probes);
            out.record("K contains epi (f - eco g + lambda h)^c", matches!(bad, Ok(None)), || {
                format!("lambda {lam:?}, w {w}, beta {}: {bad:?}", format_rational(&beta))
            });
        }
    }

    for (name, func) in [("f", &p.f), ("g", &p.g)] {
        let e = eco_hull(func);
        let below = func.probe_points().iter().chain(e.probe_points().iter()).all(|x| e.eval(x) <= func.eval(x));
        out.record("eco below function", below, || name.into());
        out.record("eco idempotent", eco_hull(&e) == e, || name.into());
        let (fc, ec) = (c_conjugate(func), c_conjugate(&e));
        out.record("eco preserves c-conjugate", probes.iter().all(|w| fc.eval_c(w) == ec.eval_c(w)), || name.into());
        out.record("e-convex iff closed at domain ends", is_econvex(func) == is_lsc_at_domain_ends(func), || name.into());
    }
    if report.g_econvex {
        out.record("e-convex collapse (L)", report.values.lagrange.exact().map(|v| &v.value) == report.values.cconj.exact().map(|v| &v.value), || {
            "v(D_L) differs from v(D_bar_L)".into()
        });
        if let (Some(a), Some(b)) = (report.values.fl.exact(), report.values.fl_bar.exact()) {
            out.record("e-convex collapse (FL)", a.value == b.value, || format!("{} vs {}", a.value, b.value));
        }
    }

    for q in Quantity::ALL {
        let Some(exact) = report.values.get(q).exact() else { continue };
        if let Some(b) = out.record_err("oracle", approx_value(p, q, grid)) {
            out.record("oracle bracket", b.contains(&exact.value) && b.is_monotone(), || {
                format!("{q}: exact {} vs {b}", exact.value)
            });
        }
    }
    let mut queries = vec![];
    if let Some(v) = vp.finite() {
        queries.push((MemberSet::EpiPrimal, -v.clone() - ratio(1, 2)));
    }
    if let Some(v) = report.values.cconj.exact().and_then(|v| v.value.finite().cloned()) {
        queries.push((MemberSet::K, -v - ratio(1, 2)));
    }
    for (set, beta) in queries {
        if let Some(r) = out.record_err("oracle membership", approx_member(p, set, &beta, &int(1), grid)) {
            let ok = reverify(p, &r);
            out.record("oracle witness re-verified", matches!(ok, Ok(true)), || format!("{set:?} at {}", format_rational(&beta)));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{boundary_jump, slater};

    fn grid() -> GridSpec {
        GridSpec::new((int(-4), int(4)), (int(-4), int(4)), int(4), ratio(1, 8)).unwrap()
    }

    #[test]
    fn boundary_jump_report() {
        let r = analyze(&boundary_jump(), None, &grid()).unwrap();
        assert_eq!(r.values.primal.exact().unwrap().value, ExtReal::from_int(-1));
        assert_eq!(r.values.cconj.exact().unwrap().value, ExtReal::from_int(0));
        let bar = r.verdicts.iter().find(|v| v.pair == Pair::CConjugate).unwrap();
        assert!(!bar.weak);
        assert!(r.all_checks_pass());
        assert!(r.to_string().contains("not applicable"));
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.contains("\"D_bar_L\""));
    }

    #[test]
    fn suites_pass_on_hand_made_problems() {
        for p in [boundary_jump(), slater()] {
            let file = ProblemFile::from_problem(&p);
            let out = run_suite(&p, Some(&file), &grid());
            assert!(out.failures.is_empty(), "{:?}", out.failures);
            assert!(out.checked > 20);
        }
    }

    #[test]
    fn corrupted_expectation_is_reported() {
        let p = boundary_jump();
        let mut file = ProblemFile::from_problem(&p);
        let mut e = Expected::default();
        e.values.insert("D_bar_L".into(), ExtReal::from_int(-1));
        file.expected = Some(e);
        let out = run_suite(&p, Some(&file), &grid());
        assert_eq!(out.failures.len(), 1);
        assert!(out.failures[0].detail.contains("D_bar_L"));
    }

    #[test]
    fn restricted_pair_and_oracle_only_values() {
        let p = DCProblem::new(
            crate::instances::abs(),
            crate::instances::line(0, 0),
            vec![crate::instances::line(1, -1), crate::instances::line(-1, -1)],
        )
        .unwrap();
        let r = analyze(&p, Some(Pair::Lagrange), &grid()).unwrap();
        assert_eq!(r.verdicts.len(), 1);
        assert!(matches!(r.values.fl, ValueEntry::OracleOnly { .. }));
        assert!(r.to_string().contains("oracle-only"));
    }
}
