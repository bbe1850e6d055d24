//! Cross-checks between the independent engines, as used by the `verify`
//! command.

use rayon::prelude::*;
use serde::Serialize;

use crate::asymptotics::count_chdc;
use crate::chdc::{census, config_type, enumerate_configs, from_tree, to_tree};
use crate::error::Result;
use crate::recog::{builtin_rep_sum, derive_rep, DEFAULT_WORKING_LEN};
use crate::series::{solve_rational, solve_recursive};
use crate::word::Word;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub cases: usize,
    pub detail: String,
}

impl Check {
    fn from_failures(name: &'static str, cases: usize, failures: Vec<String>) -> Check {
        let passed = failures.is_empty();
        let detail = if passed {
            "ok".to_string()
        } else {
            let shown: Vec<&str> = failures.iter().take(5).map(String::as_str).collect();
            format!("{} failure(s): {}", failures.len(), shown.join("; "))
        };
        Check {
            name,
            passed,
            cases,
            detail,
        }
    }
}

/// Enumeration, both series solutions and the representation agree on every
/// word of length `1..=max_len`.
pub fn engines_agree(max_len: usize) -> Result<Check> {
    let rec = solve_recursive(max_len).total();
    let rat = solve_rational(max_len).total();
    let rep = builtin_rep_sum();
    let words: Vec<Word> = Word::all_up_to(max_len).collect();
    let failures: Vec<String> = words
        .par_iter()
        .map(|x| -> Result<Option<String>> {
            let c = census(x)?;
            let others = [
                ("recursive", rec.coeff(x)),
                ("rational", rat.coeff(x)),
                ("representation", rep.coefficient(x)?),
            ];
            Ok(others
                .into_iter()
                .find(|(_, p)| *p != c)
                .map(|(engine, p)| format!("{x}: census {c}, {engine} {p}")))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    Ok(Check::from_failures(
        "three-way census equality",
        words.len(),
        failures,
    ))
}

/// The re-derived representation equals the built-in one entry by entry.
pub fn derivation_matches() -> Check {
    match derive_rep(DEFAULT_WORKING_LEN) {
        Ok(d) => {
            let diffs: Vec<String> = d.diff_builtin().iter().map(|e| e.to_string()).collect();
            Check::from_failures("derived representation = built-in", 1, diffs)
        }
        Err(e) => Check::from_failures("derived representation = built-in", 1, vec![e.to_string()]),
    }
}

/// Tree bijection round trip with charge and weight checks on every
/// configuration of every word of length `1..=max_len`.
pub fn trees_round_trip(max_len: usize) -> Result<Check> {
    let words: Vec<Word> = Word::all_up_to(max_len).collect();
    let per_word: Vec<(usize, Vec<String>)> = words
        .par_iter()
        .map(|x| -> Result<(usize, Vec<String>)> {
            let configs = enumerate_configs(x)?;
            let mut bad = Vec::new();
            for c in &configs {
                let ok = (|| -> Result<bool> {
                    let t = to_tree(c)?;
                    t.check_charges()?;
                    let ty = config_type(c)?;
                    Ok(from_tree(&t)? == *c
                        && t.charge() == 0
                        && t.buds() == c.dimers.len()
                        && t.chain_vertices() == ty.k as usize)
                })();
                if !matches!(ok, Ok(true)) {
                    bad.push(format!("{x} {:?}", c.dimers));
                }
            }
            Ok((configs.len(), bad))
        })
        .collect::<Result<_>>()?;
    let cases = per_word.iter().map(|p| p.0).sum();
    let failures = per_word.into_iter().flat_map(|p| p.1).collect();
    Ok(Check::from_failures(
        "tree round trip and charges",
        cases,
        failures,
    ))
}

/// Exact counts from the integer representation equal enumeration counts.
pub fn counts_agree(max_len: usize) -> Result<Check> {
    let words: Vec<Word> = Word::all_up_to(max_len).collect();
    let failures: Vec<String> = words
        .par_iter()
        .map(|x| -> Result<Option<String>> {
            let brute = enumerate_configs(x)?.len();
            let rep = count_chdc(x)?;
            Ok((rep != brute.into()).then(|| format!("{x}: {brute} vs {rep}")))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    Ok(Check::from_failures(
        "integer counts",
        words.len(),
        failures,
    ))
}

/// Runs every check; tree checks are capped at length 8.
pub fn run_suite(max_len: usize) -> Result<Vec<Check>> {
    Ok(vec![
        engines_agree(max_len)?,
        derivation_matches(),
        trees_round_trip(max_len.min(8))?,
        counts_agree(max_len)?,
    ])
}
