//! Optimal values with attainment information.

use std::fmt;

use serde::Serialize;

use crate::conjcalc::WPoint;
use crate::extreal::{format_rational, ExtReal, Rational};
use crate::pwafun::Multiplier;

/// What attains an optimal value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Witness {
    Point(#[serde(with = "crate::extreal::rational_serde")] Rational),
    Multiplier(Multiplier),
    MultiplierAndW { multiplier: Multiplier, w: WPoint },
}

fn show_multiplier(m: &Multiplier) -> String {
    let parts: Vec<String> = m.entries().iter().map(format_rational).collect();
    format!("lambda = ({})", parts.join(", "))
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Point(x) => write!(f, "x = {}", format_rational(x)),
            Witness::Multiplier(m) => f.write_str(&show_multiplier(m)),
            Witness::MultiplierAndW { multiplier, w } => write!(f, "{}, w = {w}", show_multiplier(multiplier)),
        }
    }
}

/// An extended-real optimal value.
///
/// `attained` implies a finite value and a witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualValue {
    pub value: ExtReal,
    pub attained: bool,
    pub witness: Option<Witness>,
}

impl DualValue {
    pub fn unattained(value: ExtReal) -> Self {
        DualValue { value, attained: false, witness: None }
    }

    pub fn attained(value: Rational, witness: Witness) -> Self {
        DualValue { value: ExtReal::Finite(value), attained: true, witness: Some(witness) }
    }

    pub fn neg_inf() -> Self {
        Self::unattained(ExtReal::NegInf)
    }

    pub fn pos_inf() -> Self {
        Self::unattained(ExtReal::PosInf)
    }

    /// Keeps the larger value; ties prefer an attained entry.
    pub fn max_merge(self, other: DualValue) -> DualValue {
        match self.value.cmp(&other.value) {
            std::cmp::Ordering::Less => other,
            std::cmp::Ordering::Greater => self,
            std::cmp::Ordering::Equal => {
                if !self.attained && other.attained {
                    other
                } else {
                    self
                }
            }
        }
    }
}
