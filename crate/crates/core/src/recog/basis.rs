use std::fmt;

use serde::Serialize;

use crate::poly::Poly;
use crate::series::TruncatedSeries;
use crate::word::Colour;

/// Building blocks of the basis elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Atom {
    B,
    R,
    /// `(y b)* = (1 - y b)^{-1}`
    StarYb,
    /// `(y r)* = (1 - y r)^{-1}`
    StarYr,
}

impl Atom {
    fn series(self, max_len: usize) -> TruncatedSeries {
        match self {
            Atom::B => TruncatedSeries::letter(max_len, Colour::Blue),
            Atom::R => TruncatedSeries::letter(max_len, Colour::Red),
            Atom::StarYb | Atom::StarYr => {
                let c = if self == Atom::StarYb {
                    Colour::Blue
                } else {
                    Colour::Red
                };
                TruncatedSeries::letter(max_len, c)
                    .scale(&Poly::y())
                    .star()
                    .expect("proper")
            }
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Atom::B => "b",
            Atom::R => "r",
            Atom::StarYb => "(yb)*",
            Atom::StarYr => "(yr)*",
        })
    }
}

/// `T_1 = 1` and `T_{k+1} = S_k P*` with `P = A_b + A_r`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BasisElement {
    pub index: usize,
    pub factors: Vec<Atom>,
    pub p_star: bool,
}

impl BasisElement {
    /// The truncation of this element, given `P*` truncated at the same bound.
    pub fn series(&self, p_star: &TruncatedSeries) -> TruncatedSeries {
        let l = p_star.max_len();
        let tail = if self.p_star {
            p_star.clone()
        } else {
            TruncatedSeries::one(l)
        };
        self.factors
            .iter()
            .rev()
            .fold(tail, |acc, a| a.series(l).mul(&acc).expect("same bound"))
    }
}

impl fmt::Display for BasisElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T{} = ", self.index)?;
        if self.factors.is_empty() && !self.p_star {
            return f.write_str("1");
        }
        let mut parts: Vec<String> = self.factors.iter().map(|a| a.to_string()).collect();
        if self.p_star {
            parts.push("P*".into());
        }
        f.write_str(&parts.join(" "))
    }
}

/// The factors of `S_k`, `k = 1..=19`.
fn s_factors(k: usize) -> Vec<Atom> {
    use Atom::*;
    match k {
        1 => vec![],
        2 => vec![StarYb],
        3 => vec![R],
        4 => vec![StarYb, R],
        5 => vec![B],
        6 => vec![B, StarYb],
        7 => vec![B, StarYb, R],
        8 => vec![R, B],
        9 => vec![R, B, StarYb],
        10 => vec![R, B, StarYb, R],
        11 => vec![R, R],
        12 => vec![StarYr],
        13 => vec![StarYr, B],
        14 => vec![R, StarYr],
        15 => vec![R, StarYr, B],
        16 => vec![B, R],
        17 => vec![B, R, StarYr],
        18 => vec![B, R, StarYr, B],
        19 => vec![B, B],
        _ => unreachable!("S_k is defined for k = 1..=19"),
    }
}

/// `T_1, ..., T_20`.
pub fn basis() -> Vec<BasisElement> {
    let mut out = vec![BasisElement {
        index: 1,
        factors: vec![],
        p_star: false,
    }];
    out.extend((1..=19).map(|k| BasisElement {
        index: k + 1,
        factors: s_factors(k),
        p_star: true,
    }));
    out
}
