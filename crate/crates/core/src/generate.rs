//! Seeded random problem instances.
//!
//! Every function is a maximum of a few integer lines restricted to an
//! interval with random endpoint types. `g` may carry an upward jump at a
//! closed endpoint of its domain, which keeps it convex but breaks even
//! convexity. The domain of `f` always sits inside the domain of `g`.

use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::duals::DCProblem;
use crate::extreal::{int, Rational};
use crate::interval::{EndPoint, Interval};
use crate::pwafun::{Override, Piece, PwaFunction};
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    /// Any shape, jumps allowed on `g`.
    General,
    /// `g` evenly convex: no jump (or a jump of height zero).
    EConvex,
    /// Like `General` with a bounded domain for `f` inside `[-4, 4]`.
    Bounded,
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "general" => Ok(Variant::General),
            "econvex" | "e-convex" => Ok(Variant::EConvex),
            "bounded" => Ok(Variant::Bounded),
            _ => Err(Error::Parse(format!("unknown variant {s:?}"))),
        }
    }
}

/// Upper envelope of `lines` restricted to `dom`.
pub fn max_of_lines(lines: &[(Rational, Rational)], dom: &Interval) -> PwaFunction {
    let mut cuts: Vec<Rational> = vec![];
    for (i, (a1, b1)) in lines.iter().enumerate() {
        for (a2, b2) in &lines[i + 1..] {
            if a1 != a2 {
                let x = (b2 - b1) / (a1 - a2);
                if dom.contains(&x) && Some(&x) != dom.lo.finite() && Some(&x) != dom.hi.finite() {
                    cuts.push(x);
                }
            }
        }
    }
    cuts.sort();
    cuts.dedup();
    let mut ends: Vec<EndPoint> = vec![dom.lo.clone()];
    ends.extend(cuts.iter().map(|c| EndPoint::closed(c.clone())));
    ends.push(dom.hi.clone());
    let pieces: Vec<Piece> = ends
        .windows(2)
        .enumerate()
        .map(|(i, w)| {
            let last = i + 2 == ends.len();
            let hi = if last { w[1].clone() } else { EndPoint::open(w[1].finite().expect("cut").clone()) };
            let interval = Interval { lo: w[0].clone(), hi };
            let s = interval.interior_sample();
            let (a, b) = lines
                .iter()
                .max_by(|(a1, b1), (a2, b2)| (a1 * &s + b1).cmp(&(a2 * &s + b2)))
                .expect("at least one line");
            Piece { interval, slope: a.clone(), intercept: b.clone() }
        })
        .collect();
    PwaFunction::from_pieces(&pieces, &[]).expect("disjoint pieces")
}

fn random_lines(rng: &mut ChaCha8Rng, max_count: usize, slope: i64, icpt: i64) -> Vec<(Rational, Rational)> {
    let count = rng.gen_range(1..=max_count);
    (0..count).map(|_| (int(rng.gen_range(-slope..=slope)), int(rng.gen_range(-icpt..=icpt)))).collect()
}

fn endpoint(rng: &mut ChaCha8Rng, x: i64) -> EndPoint {
    if rng.gen_bool(0.5) {
        EndPoint::closed(int(x))
    } else {
        EndPoint::open(int(x))
    }
}

fn random_domain(rng: &mut ChaCha8Rng, bounded: bool) -> Interval {
    let lo_x = rng.gen_range(-3..=0);
    let hi_x = lo_x + rng.gen_range(0..=4);
    let lo = if !bounded && rng.gen_bool(0.3) { EndPoint::neg_inf() } else { endpoint(rng, lo_x) };
    let hi = if !bounded && rng.gen_bool(0.3) { EndPoint::pos_inf() } else { endpoint(rng, hi_x) };
    match Interval::new(lo, hi) {
        Ok(i) => i,
        // a degenerate open interval: fall back to the point
        Err(_) => Interval::point(int(lo_x)),
    }
}

/// An interval containing `inner`, sharing an endpoint with it at random.
fn widen(rng: &mut ChaCha8Rng, inner: &Interval) -> Interval {
    let lo = match inner.lo.finite() {
        None => EndPoint::neg_inf(),
        Some(x) => match rng.gen_range(0..3) {
            0 => EndPoint::neg_inf(),
            1 => EndPoint { value: (x - int(rng.gen_range(1..=2))).into(), closed: rng.gen_bool(0.5) },
            _ => EndPoint { value: x.clone().into(), closed: inner.lo.closed || rng.gen_bool(0.5) },
        },
    };
    let hi = match inner.hi.finite() {
        None => EndPoint::pos_inf(),
        Some(x) => match rng.gen_range(0..3) {
            0 => EndPoint::pos_inf(),
            1 => EndPoint { value: (x + int(rng.gen_range(1..=2))).into(), closed: rng.gen_bool(0.5) },
            _ => EndPoint { value: x.clone().into(), closed: inner.hi.closed || rng.gen_bool(0.5) },
        },
    };
    Interval::new(lo, hi).expect("contains a nonempty interval")
}

/// Adds an upward jump (height `0..=max_jump`) at one closed finite
/// endpoint, if there is one.
fn with_jump(rng: &mut ChaCha8Rng, base: PwaFunction, dom: &Interval, lines: &[(Rational, Rational)], max_jump: i64) -> PwaFunction {
    let mut ends = vec![];
    for e in [&dom.lo, &dom.hi] {
        if let (Some(x), true) = (e.finite(), e.closed) {
            ends.push(x.clone());
        }
    }
    if ends.is_empty() || !rng.gen_bool(0.6) {
        return base;
    }
    let x = ends[rng.gen_range(0..ends.len())].clone();
    let limit = lines.iter().map(|(a, b)| a * &x + b).max().expect("lines");
    let value = limit + int(rng.gen_range(0..=max_jump));
    let pieces = base.pieces();
    let overrides: Vec<Override> =
        base.overrides().into_iter().filter(|o| o.x != x).chain([Override { x: x.clone(), value }]).collect();
    PwaFunction::from_pieces(&pieces, &overrides).expect("well formed")
}

/// One random instance with `num_constraints` constraints.
pub fn random_problem(rng: &mut ChaCha8Rng, variant: Variant, num_constraints: usize) -> DCProblem {
    let bounded = variant == Variant::Bounded;
    let f_dom = random_domain(rng, bounded);
    let f_lines = random_lines(rng, 3, 3, 3);
    let mut f = max_of_lines(&f_lines, &f_dom);
    if variant != Variant::EConvex {
        f = with_jump(rng, f, &f_dom, &f_lines, 2);
    }
    let g_dom = widen(rng, &f_dom);
    let g_lines = random_lines(rng, 2, 2, 3);
    let g = max_of_lines(&g_lines, &g_dom);
    let g = match variant {
        Variant::EConvex => with_jump(rng, g, &g_dom, &g_lines, 0),
        _ => with_jump(rng, g, &g_dom, &g_lines, 2),
    };
    let constraints = (0..num_constraints)
        .map(|_| {
            let dom = if rng.gen_bool(0.8) { Interval::real_line() } else { widen(rng, &f_dom) };
            let lines = random_lines(rng, 2, 2, 3);
            max_of_lines(&lines, &dom)
        })
        .collect();
    DCProblem::new(f, g, constraints).expect("generated data is convex and proper")
}

/// `count` instances from `seed`; constraint counts cycle through
/// `1..=max_constraints`.
pub fn corpus(seed: u64, count: usize, variant: Variant, max_constraints: usize) -> Vec<DCProblem> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|i| random_problem(&mut rng, variant, 1 + i % max_constraints.max(1))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conjcalc::is_econvex;
    use crate::extreal::ExtReal;

    #[test]
    fn envelope_matches_pointwise_max() {
        let lines = vec![(int(-1), int(0)), (int(1), int(0)), (int(0), int(1))];
        let f = max_of_lines(&lines, &Interval::real_line());
        for x in -4..=4 {
            let want = lines.iter().map(|(a, b)| a * int(x) + b).max().unwrap();
            assert_eq!(f.eval(&int(x)), ExtReal::Finite(want));
        }
        assert!(f.is_convex());
    }

    #[test]
    fn deterministic_and_valid() {
        let a = corpus(7, 40, Variant::General, 3);
        let b = corpus(7, 40, Variant::General, 3);
        assert_eq!(a, b);
        for p in &a {
            let fd = p.f.domain_hull().unwrap();
            assert!(fd.is_subset_of(&p.g.domain_hull().unwrap()));
        }
    }

    #[test]
    fn econvex_variant_keeps_g_econvex() {
        for p in corpus(3, 40, Variant::EConvex, 2) {
            assert!(is_econvex(&p.g), "{}", p.g);
        }
    }

    #[test]
    fn bounded_variant_has_bounded_f() {
        for p in corpus(5, 20, Variant::Bounded, 2) {
            let d = p.f.domain_hull().unwrap();
            assert!(d.lo.finite().is_some() && d.hi.finite().is_some());
        }
    }
}
