//! Small hand-made functions and problems used by tests, the corpus and
//! the documentation.

use crate::duals::DCProblem;
use crate::extreal::int;
use crate::interval::{EndPoint, Interval};
use crate::pwafun::{Override, Piece, PwaFunction};

fn nonneg() -> Interval {
    Interval { lo: EndPoint::closed(int(0)), hi: EndPoint::pos_inf() }
}

/// `x` on `[0, ∞)`.
pub fn ramp() -> PwaFunction {
    PwaFunction::affine_on(&nonneg(), int(1), int(0))
}

/// `x` on `(0, ∞)` with the value 1 at 0: convex, not lower semicontinuous.
pub fn jump_ramp() -> PwaFunction {
    let piece = Piece {
        interval: Interval { lo: EndPoint::open(int(0)), hi: EndPoint::pos_inf() },
        slope: int(1),
        intercept: int(0),
    };
    PwaFunction::from_pieces(&[piece], &[Override { x: int(0), value: int(1) }]).unwrap()
}

/// `−x` on `[0, ∞)`.
pub fn neg_ramp() -> PwaFunction {
    PwaFunction::affine_on(&nonneg(), int(-1), int(0))
}

/// `|x|`.
pub fn abs() -> PwaFunction {
    let left = Piece { interval: Interval { lo: EndPoint::neg_inf(), hi: EndPoint::open(int(0)) }, slope: int(-1), intercept: int(0) };
    let right = Piece { interval: Interval { lo: EndPoint::closed(int(0)), hi: EndPoint::pos_inf() }, slope: int(1), intercept: int(0) };
    PwaFunction::from_pieces(&[left, right], &[]).unwrap()
}

/// `slope·x + intercept` on the whole line.
pub fn line(slope: i64, intercept: i64) -> PwaFunction {
    PwaFunction::affine(int(slope), int(intercept))
}


/// `f = x` on `[0, ∞)`, `g` = [`jump_ramp`], one constraint `−x ≤ 0` on
/// `[0, ∞)`: convex data whose `g` is not evenly convex at 0.
pub fn boundary_jump() -> DCProblem {
    DCProblem::new(ramp(), jump_ramp(), vec![neg_ramp()]).unwrap()
}

/// `f = |x|`, `g ≡ 0`, one constraint `x − 1 ≤ 0` with `x = 0` strictly
/// feasible.
pub fn slater() -> DCProblem {
    DCProblem::new(abs(), line(0, 0), vec![line(1, -1)]).unwrap()
}
