use rayon::prelude::*;
use serde::Serialize;

use super::basis::{basis, Atom, BasisElement};
use super::{builtin_rep_sb, EntryDiff, LinRep};
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::series::{build_a, solve_rational, TruncatedSeries};
use crate::word::Colour;

/// Truncation bound used by [`derive_rep`] for the exact check.
pub const DEFAULT_WORKING_LEN: usize = 8;

/// Output of [`derive_rep`]: the 20-dimensional matrices over `T_1..T_20`
/// and the 19-dimensional reduction.
#[derive(Debug, Clone, Serialize)]
pub struct Derivation {
    pub working_len: usize,
    pub basis: Vec<BasisElement>,
    pub full_b: Vec<Vec<Poly>>,
    pub full_r: Vec<Vec<Poly>>,
    pub full_lambda: Vec<Poly>,
    pub full_gamma: Vec<Poly>,
    pub reduced: LinRep,
}

impl Derivation {
    /// Differences against the built-in representation of `S_b`.
    pub fn diff_builtin(&self) -> Vec<EntryDiff> {
        builtin_rep_sb().diff(&self.reduced)
    }
}

/// A product of atoms, optionally followed by `P*`, with a coefficient.
type Term = (Poly, Vec<Atom>, bool);

fn atom_letter(a: Atom) -> Colour {
    match a {
        Atom::B | Atom::StarYb => Colour::Blue,
        Atom::R | Atom::StarYr => Colour::Red,
    }
}

fn is_star(a: Atom) -> bool {
    matches!(a, Atom::StarYb | Atom::StarYr)
}

/// `c^{-1} P = 1 + c3 c + c3 y ¬c (y¬c)* c`.
fn quotient_p(c: Colour) -> Vec<(Poly, Vec<Atom>)> {
    let (own, alt, star_alt, w3) = match c {
        Colour::Blue => (Atom::B, Atom::R, Atom::StarYr, Poly::b3()),
        Colour::Red => (Atom::R, Atom::B, Atom::StarYb, Poly::r3()),
    };
    vec![
        (Poly::one(), vec![]),
        (w3.clone(), vec![own]),
        (&w3 * &Poly::y(), vec![alt, star_alt, own]),
    ]
}

/// `c^{-1}(X_1 ... X_m [P*])` by the product rule
/// `c^{-1}(XT) = (c^{-1}X) T + (X, 1) c^{-1}T`, with `c^{-1}c = 1`,
/// `c^{-1}(yc)* = y (yc)*` and `c^{-1}P* = (c^{-1}P) P*`.
fn quotient(seq: &[Atom], p_star: bool, c: Colour) -> Vec<Term> {
    let Some((&x, rest)) = seq.split_first() else {
        return if p_star {
            quotient_p(c)
                .into_iter()
                .map(|(k, t)| (k, t, true))
                .collect()
        } else {
            vec![]
        };
    };
    let mut out = Vec::new();
    if atom_letter(x) == c {
        if is_star(x) {
            out.push((Poly::y(), seq.to_vec(), p_star));
        } else {
            out.push((Poly::one(), rest.to_vec(), p_star));
        }
    }
    if is_star(x) {
        out.extend(quotient(rest, p_star, c));
    }
    out
}

/// Position of the basis element written as `seq [P*]`.
fn locate(seq: &[Atom], p_star: bool, table: &[BasisElement]) -> Option<usize> {
    table
        .iter()
        .position(|t| t.p_star == p_star && t.factors == seq)
}

fn expand(terms: Vec<Term>, table: &[BasisElement]) -> std::result::Result<Vec<Poly>, String> {
    let mut row = vec![Poly::zero(); table.len()];
    for (k, seq, p_star) in terms {
        let j = locate(&seq, p_star, table).ok_or_else(|| {
            let names: Vec<String> = seq.iter().map(|a| a.to_string()).collect();
            format!(
                "term {} {}{} is not a basis element",
                k,
                names.join(" "),
                if p_star { " P*" } else { "" }
            )
        })?;
        row[j] += &k;
    }
    Ok(row)
}

/// Recomputes the linear representation of `S_b` from its definition.
///
/// Every left quotient `a^{-1} T_i` is expanded symbolically over
/// `T_1..T_20`, as is `S_b = P* - r P* - r3 r r P* - r3 y r b (yb)* r P* - 1`.
/// Each expansion is then checked as an identity of series truncated at
/// `working_len`. The basis is not free over `K` (for instance
/// `T_3 = T_2 + y T_7`), so the expansion is a choice; the symbolic rule
/// determines it.
pub fn derive_rep(working_len: usize) -> Result<Derivation> {
    if working_len < 2 {
        return Err(Error::InvalidArgument(format!(
            "working length {working_len} is too short"
        )));
    }
    let table = basis();
    let n = table.len();

    let mut full_b = Vec::with_capacity(n);
    let mut full_r = Vec::with_capacity(n);
    for t in &table {
        for (c, m) in [(Colour::Blue, &mut full_b), (Colour::Red, &mut full_r)] {
            let row = expand(quotient(&t.factors, t.p_star, c), &table).map_err(|reason| {
                Error::Derivation {
                    index: t.index,
                    letter: c.as_char(),
                    reason,
                }
            })?;
            m.push(row);
        }
    }

    let r3 = Poly::r3();
    let lambda_terms: Vec<Term> = vec![
        (Poly::one(), vec![], true),
        (Poly::constant(-1), vec![Atom::R], true),
        (-&r3, vec![Atom::R, Atom::R], true),
        (
            -(&r3 * &Poly::y()),
            vec![Atom::R, Atom::B, Atom::StarYb, Atom::R],
            true,
        ),
        (Poly::constant(-1), vec![], false),
    ];
    let full_lambda = expand(lambda_terms, &table).map_err(|reason| Error::Derivation {
        index: 0,
        letter: '-',
        reason,
    })?;
    let full_gamma: Vec<Poly> = table
        .iter()
        .map(|t| {
            if t.factors.iter().all(|&a| is_star(a)) {
                Poly::one()
            } else {
                Poly::zero()
            }
        })
        .collect();

    check_series(
        working_len,
        &table,
        &full_b,
        &full_r,
        &full_lambda,
        &full_gamma,
    )?;

    for (letter, m) in [('b', &full_b), ('r', &full_r)] {
        if let Some(i) = (0..n).find(|&i| !m[i][0].is_zero() || !m[0][i].is_zero()) {
            return Err(Error::Derivation {
                index: i + 1,
                letter,
                reason: "T1 does not decouple".into(),
            });
        }
    }
    let reduce_m = |m: &[Vec<Poly>]| {
        m[1..]
            .iter()
            .map(|row| row[1..].to_vec())
            .collect::<Vec<_>>()
    };
    let reduced = LinRep::new(
        full_lambda[1..].to_vec(),
        reduce_m(&full_b),
        reduce_m(&full_r),
        full_gamma[1..].to_vec(),
    )?;
    Ok(Derivation {
        working_len,
        basis: table,
        full_b,
        full_r,
        full_lambda,
        full_gamma,
        reduced,
    })
}

/// Checks every expansion on the truncations at `l` (quotients are exact up
/// to `l - 1`).
fn check_series(
    l: usize,
    table: &[BasisElement],
    full_b: &[Vec<Poly>],
    full_r: &[Vec<Poly>],
    full_lambda: &[Poly],
    full_gamma: &[Poly],
) -> Result<()> {
    let p_star = build_a(Colour::Blue, l)
        .add(&build_a(Colour::Red, l))
        .and_then(|p| p.star())
        .expect("P is proper");
    let t_full: Vec<TruncatedSeries> = table.iter().map(|e| e.series(&p_star)).collect();
    let t_low: Vec<TruncatedSeries> = t_full.iter().map(|t| t.truncate(l - 1)).collect();
    let combine = |row: &[Poly], ts: &[TruncatedSeries], bound: usize| {
        let mut sum = TruncatedSeries::zero(bound);
        for (k, t) in row.iter().zip(ts) {
            if !k.is_zero() {
                sum = sum.add(&t.scale(k)).expect("same bound");
            }
        }
        sum
    };

    (0..table.len()).into_par_iter().try_for_each(|i| {
        for (c, m) in [(Colour::Blue, full_b), (Colour::Red, full_r)] {
            if combine(&m[i], &t_low, l - 1) != t_full[i].left_quotient(&[c]) {
                return Err(Error::Derivation {
                    index: i + 1,
                    letter: c.as_char(),
                    reason: format!("expansion fails on words of length <= {}", l - 1),
                });
            }
        }
        if t_full[i].constant_term() != full_gamma[i] {
            return Err(Error::Derivation {
                index: i + 1,
                letter: '-',
                reason: "constant term mismatch".into(),
            });
        }
        Ok(())
    })?;
    if combine(full_lambda, &t_full, l) != solve_rational(l).s_b {
        return Err(Error::Derivation {
            index: 0,
            letter: '-',
            reason: format!("S_b expansion fails on words of length <= {l}"),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::recog::builtin_rep_sb;

    #[test]
    fn quotient_rules() {
        let q = quotient(&[Atom::StarYb], true, Colour::Blue);
        assert_eq!(q.len(), 4);
        assert_eq!(q[0], (Poly::y(), vec![Atom::StarYb], true));
        assert!(quotient(&[Atom::B], false, Colour::Red).is_empty());
        assert!(quotient(&[], false, Colour::Blue).is_empty());
    }

    #[test]
    fn reproduces_builtin() {
        let d = derive_rep(DEFAULT_WORKING_LEN).unwrap();
        let diffs = d.diff_builtin();
        assert!(diffs.is_empty(), "{diffs:?}");
        assert_eq!(d.reduced, builtin_rep_sb());
        assert_eq!(d.full_lambda[0], Poly::constant(-1));
    }

    #[test]
    fn basis_is_not_free() {
        let l = 6;
        let p = build_a(Colour::Blue, l)
            .add(&build_a(Colour::Red, l))
            .unwrap()
            .star()
            .unwrap();
        let t: Vec<_> = basis().iter().map(|e| e.series(&p)).collect();
        assert_eq!(t[2], t[1].add(&t[6].scale(&Poly::y())).unwrap());
    }

    #[test]
    fn too_short() {
        assert!(matches!(derive_rep(1), Err(Error::InvalidArgument(_))));
    }
}
