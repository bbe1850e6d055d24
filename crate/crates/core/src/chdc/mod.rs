//! Coloured hard-dimer configurations: the model, its validity rules and the
//! brute-force enumeration every other engine is checked against.

mod tree;

pub use tree::{from_tree, to_tree, HcdTree, NodeKind, TreeNode};

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{Monomial, Poly};
use crate::word::{Colour, Word};

/// Longest word [`enumerate_configs`] and [`census`] accept.
pub const MAX_ENUM_LEN: usize = 24;

/// An edge joining two nearest vertices of the same colour. Positions are
/// 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Dimer {
    pub colour: Colour,
    pub left: usize,
    pub right: usize,
}

impl Dimer {
    pub fn new(colour: Colour, left: usize, right: usize) -> Self {
        Dimer {
            colour,
            left,
            right,
        }
    }

    pub fn blue(left: usize, right: usize) -> Self {
        Dimer::new(Colour::Blue, left, right)
    }

    pub fn red(left: usize, right: usize) -> Self {
        Dimer::new(Colour::Red, left, right)
    }

    /// Number of vertices strictly inside the span.
    pub fn inner(&self) -> usize {
        self.right - self.left - 1
    }

    fn overlaps(&self, other: &Dimer) -> bool {
        !(self.right < other.left || other.right < self.left)
    }
}

/// A word together with a set of dimers on it. Dimers are kept sorted by left
/// endpoint.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Configuration {
    pub word: Word,
    pub dimers: Vec<Dimer>,
}

impl Configuration {
    pub fn new(word: Word, mut dimers: Vec<Dimer>) -> Self {
        dimers.sort_by_key(|d| (d.left, d.right, d.colour));
        dimers.dedup();
        Configuration { word, dimers }
    }

    pub fn empty(word: Word) -> Self {
        Configuration {
            word,
            dimers: Vec::new(),
        }
    }
}

/// `(blue dimers, red dimers, inner vertices)`.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize,
)]
pub struct TypeTriple {
    pub i: u32,
    pub j: u32,
    pub k: u32,
}

impl TypeTriple {
    pub fn new(i: u32, j: u32, k: u32) -> Self {
        TypeTriple { i, j, k }
    }

    pub fn monomial(&self) -> Monomial {
        Monomial::new(self.i, self.j, self.k)
    }
}

/// One row of the census JSON: `m` configurations of type `(i, j, k)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusEntry {
    pub i: u32,
    pub j: u32,
    pub k: u32,
    pub m: String,
}

/// Every pair of consecutive same-colour vertices, ordered by left endpoint.
pub fn candidate_dimers(word: &Word) -> Vec<Dimer> {
    let mut last: [Option<usize>; 2] = [None, None];
    let mut out = Vec::new();
    for (idx, &c) in word.letters().iter().enumerate() {
        let pos = idx + 1;
        let slot = &mut last[c as usize];
        if let Some(prev) = *slot {
            out.push(Dimer::new(c, prev, pos));
        }
        *slot = Some(pos);
    }
    out.sort_by_key(|d| (d.left, d.right));
    out
}

fn check_dimer(word: &Word, d: &Dimer) -> Result<bool> {
    for pos in [d.left, d.right] {
        if pos == 0 || pos > word.len() {
            return Err(Error::PositionOutOfRange {
                pos,
                len: word.len(),
            });
        }
    }
    if d.left >= d.right {
        return Ok(false);
    }
    let letters = word.letters();
    if letters[d.left - 1] != d.colour || letters[d.right - 1] != d.colour {
        return Ok(false);
    }
    Ok(letters[d.left..d.right - 1].iter().all(|&c| c != d.colour))
}

/// Whether every dimer joins nearest same-colour vertices and no two spans
/// share a vertex (so crossings, nestings and shared endpoints are all
/// rejected).
pub fn is_valid(config: &Configuration) -> Result<bool> {
    for d in &config.dimers {
        if !check_dimer(&config.word, d)? {
            return Ok(false);
        }
    }
    for (a, d) in config.dimers.iter().enumerate() {
        if config.dimers[a + 1..].iter().any(|e| d.overlaps(e)) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn check_len(word: &Word) -> Result<()> {
    if word.len() > MAX_ENUM_LEN {
        return Err(Error::TooLong {
            len: word.len(),
            max: MAX_ENUM_LEN,
        });
    }
    Ok(())
}

/// Depth-first walk over all admissible dimer subsets. Candidates are sorted
/// by left endpoint, so a candidate can extend the current subset iff it
/// starts after the last chosen right endpoint.
fn for_each_subset(cands: &[Dimer], mut visit: impl FnMut(&[Dimer])) {
    fn go(
        cands: &[Dimer],
        from: usize,
        min_left: usize,
        chosen: &mut Vec<Dimer>,
        visit: &mut impl FnMut(&[Dimer]),
    ) {
        visit(chosen);
        for idx in from..cands.len() {
            let d = cands[idx];
            if d.left >= min_left {
                chosen.push(d);
                go(cands, idx + 1, d.right + 1, chosen, visit);
                chosen.pop();
            }
        }
    }
    go(cands, 0, 1, &mut Vec::new(), &mut visit);
}

/// All valid configurations on `word`, the empty one first.
pub fn enumerate_configs(word: &Word) -> Result<Vec<Configuration>> {
    check_len(word)?;
    let cands = candidate_dimers(word);
    let mut out = Vec::new();
    for_each_subset(&cands, |ds| {
        out.push(Configuration::new(word.clone(), ds.to_vec()))
    });
    Ok(out)
}

fn triple_of(dimers: &[Dimer]) -> TypeTriple {
    let mut t = TypeTriple::default();
    for d in dimers {
        match d.colour {
            Colour::Blue => t.i += 1,
            Colour::Red => t.j += 1,
        }
        t.k += d.inner() as u32;
    }
    t
}

pub fn config_type(config: &Configuration) -> Result<TypeTriple> {
    if !is_valid(config)? {
        return Err(Error::InvalidConfig(format!(
            "dimers {:?} are not a valid configuration on {}",
            config.dimers, config.word
        )));
    }
    Ok(triple_of(&config.dimers))
}

/// `Σ_D b3^|D|_b r3^|D|_r y^|∩D|` over all configurations on `word`.
pub fn census(word: &Word) -> Result<Poly> {
    check_len(word)?;
    let cands = candidate_dimers(word);
    let mut counts: HashMap<TypeTriple, u64> = HashMap::new();
    for_each_subset(&cands, |ds| *counts.entry(triple_of(ds)).or_default() += 1);
    Ok(Poly::from_counts(
        counts.into_iter().map(|(t, m)| (t.monomial(), m)),
    ))
}

/// Number of configurations on `word`; the census at `b3 = r3 = y = 1`.
pub fn count_configs(word: &Word) -> Result<u64> {
    check_len(word)?;
    let mut n = 0u64;
    for_each_subset(&candidate_dimers(word), |_| n += 1);
    Ok(n)
}

pub fn census_entries(p: &Poly) -> Vec<CensusEntry> {
    p.terms()
        .map(|(m, c)| CensusEntry {
            i: m.i,
            j: m.j,
            k: m.k,
            m: c.to_string(),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::w;
    use proptest::prelude::*;

    fn fig1() -> Configuration {
        Configuration::new(
            w("rbrrbrbbrbrb"),
            vec![Dimer::blue(2, 5), Dimer::blue(7, 8), Dimer::red(9, 11)],
        )
    }

    /// Independent oracle: every subset of candidates, filtered by
    /// `is_valid`.
    fn subsets_oracle(word: &Word) -> Vec<Configuration> {
        let cands = candidate_dimers(word);
        let mut out = Vec::new();
        for mask in 0u32..1 << cands.len() {
            let ds = (0..cands.len())
                .filter(|b| mask >> b & 1 == 1)
                .map(|b| cands[b])
                .collect();
            let c = Configuration::new(word.clone(), ds);
            if is_valid(&c).unwrap() {
                out.push(c);
            }
        }
        out.sort_by(|a, b| a.dimers.cmp(&b.dimers));
        out
    }

    #[test]
    fn candidates() {
        assert_eq!(candidate_dimers(&w("bb")), [Dimer::blue(1, 2)]);
        assert_eq!(
            candidate_dimers(&w("brrb")),
            [Dimer::blue(1, 4), Dimer::red(2, 3)]
        );
        assert!(candidate_dimers(&w("br")).is_empty());
        assert!(candidate_dimers(&w("b")).is_empty());
        assert!(candidate_dimers(&w("")).is_empty());
    }

    #[test]
    fn validity() {
        let ok = Configuration::new(w("bbrr"), vec![Dimer::blue(1, 2), Dimer::red(3, 4)]);
        assert!(is_valid(&ok).unwrap());
        let crossing = Configuration::new(w("brbr"), vec![Dimer::blue(1, 3), Dimer::red(2, 4)]);
        assert!(!is_valid(&crossing).unwrap());
        assert!(is_valid(&Configuration::empty(w("brbrrb"))).unwrap());
        let shared = Configuration::new(w("bbb"), vec![Dimer::blue(1, 2), Dimer::blue(2, 3)]);
        assert!(!is_valid(&shared).unwrap());
        let nested = Configuration::new(w("brrb"), vec![Dimer::blue(1, 4), Dimer::red(2, 3)]);
        assert!(!is_valid(&nested).unwrap());
        let not_nearest = Configuration::new(w("bbb"), vec![Dimer::blue(1, 3)]);
        assert!(!is_valid(&not_nearest).unwrap());
        let wrong_colour = Configuration::new(w("bb"), vec![Dimer::red(1, 2)]);
        assert!(!is_valid(&wrong_colour).unwrap());
        let out_of_range = Configuration::new(w("bb"), vec![Dimer::blue(1, 3)]);
        assert_eq!(
            is_valid(&out_of_range),
            Err(Error::PositionOutOfRange { pos: 3, len: 2 })
        );
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(
            enumerate_configs(&w("br")).unwrap(),
            [Configuration::empty(w("br"))]
        );
        let brrb = enumerate_configs(&w("brrb")).unwrap();
        assert_eq!(brrb.len(), 3);
        assert!(brrb.contains(&Configuration::new(w("brrb"), vec![Dimer::red(2, 3)])));
        assert!(brrb.contains(&Configuration::new(w("brrb"), vec![Dimer::blue(1, 4)])));
        let bbb = enumerate_configs(&w("bbb")).unwrap();
        assert_eq!(
            bbb,
            [
                Configuration::empty(w("bbb")),
                Configuration::new(w("bbb"), vec![Dimer::blue(1, 2)]),
                Configuration::new(w("bbb"), vec![Dimer::blue(2, 3)]),
            ]
        );
        assert!(matches!(
            enumerate_configs(&Word::from_bits(0, MAX_ENUM_LEN + 1)),
            Err(Error::TooLong { .. })
        ));
    }

    #[test]
    fn enumeration_matches_subset_oracle() {
        for word in Word::all_up_to(9) {
            let mut got = enumerate_configs(&word).unwrap();
            got.sort_by(|a, b| a.dimers.cmp(&b.dimers));
            assert_eq!(got, subsets_oracle(&word), "{word}");
        }
    }

    #[test]
    fn types() {
        assert_eq!(config_type(&fig1()).unwrap(), TypeTriple::new(2, 1, 3));
        assert_eq!(
            config_type(&Configuration::empty(w("brb"))).unwrap(),
            TypeTriple::default()
        );
        let brb = Configuration::new(w("brb"), vec![Dimer::blue(1, 3)]);
        assert_eq!(config_type(&brb).unwrap(), TypeTriple::new(1, 0, 1));
        let bad = Configuration::new(w("brbr"), vec![Dimer::blue(1, 3), Dimer::red(2, 4)]);
        assert!(matches!(config_type(&bad), Err(Error::InvalidConfig(_))));
    }

    #[test]
    fn census_examples() {
        assert_eq!(census(&w("bb")).unwrap(), Poly::one() + Poly::b3());
        let brrb = Poly::from_counts([
            (Monomial::ONE, 1),
            (Monomial::R3, 1),
            (Monomial::new(1, 0, 2), 1),
        ]);
        assert_eq!(census(&w("brrb")).unwrap(), brrb);
        let fig = census(&w("rbrrbrbbrbrb")).unwrap();
        assert!(fig.coeff(&Monomial::new(2, 1, 3)) >= num_traits::One::one());
        assert_eq!(census(&Word::empty()).unwrap(), Poly::one());
    }

    #[test]
    fn census_json() {
        let e = census_entries(&census(&w("bb")).unwrap());
        assert_eq!(
            serde_json::to_string(&e).unwrap(),
            r#"[{"i":0,"j":0,"k":0,"m":"1"},{"i":1,"j":0,"k":0,"m":"1"}]"#
        );
    }

    #[test]
    fn configuration_json() {
        let c = Configuration::new(w("brrb"), vec![Dimer::blue(1, 4)]);
        let s = serde_json::to_string(&c).unwrap();
        assert_eq!(
            s,
            r#"{"word":"brrb","dimers":[{"colour":"b","left":1,"right":4}]}"#
        );
        assert_eq!(serde_json::from_str::<Configuration>(&s).unwrap(), c);
    }

    fn arb_word(max: usize) -> impl Strategy<Value = Word> {
        prop::collection::vec(prop::bool::ANY, 0..=max).prop_map(|v| {
            v.into_iter()
                .map(|r| if r { Colour::Red } else { Colour::Blue })
                .collect()
        })
    }

    proptest! {
        #[test]
        fn count_is_census_at_ones(word in arb_word(16)) {
            let n = enumerate_configs(&word).unwrap().len() as u64;
            let p = census(&word).unwrap();
            prop_assert_eq!(p.eval_ones_integer().unwrap(), n.into());
            prop_assert_eq!(count_configs(&word).unwrap(), n);
            if !word.is_empty() {
                prop_assert!(p.constant_term() == num_traits::One::one());
            }
        }

        #[test]
        fn colour_swap_symmetry(word in arb_word(16)) {
            prop_assert_eq!(census(&word.swap()).unwrap(), census(&word).unwrap().swap_colours());
        }

        #[test]
        fn appending_never_decreases_count(word in arb_word(15), red in prop::bool::ANY) {
            let mut longer = word.clone();
            longer.push(if red { Colour::Red } else { Colour::Blue });
            prop_assert!(count_configs(&longer).unwrap() >= count_configs(&word).unwrap());
        }
    }
}
