//! Truncated noncommutative formal power series over `K = Q[b3, r3, y]`.
//!
//! A [`TruncatedSeries`] with bound `L` stores the exact coefficient of every
//! word of length `<= L`. Sums, scalar products, Cauchy products, stars and
//! quotients of truncations are again exact up to their stated bound, which is
//! how the ultrametric topology on series is made computable.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::word::{Colour, Word};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    max_len: usize,
    coeffs: HashMap<Word, Poly>,
}

impl TruncatedSeries {
    pub fn zero(max_len: usize) -> Self {
        TruncatedSeries {
            max_len,
            coeffs: HashMap::new(),
        }
    }

    pub fn one(max_len: usize) -> Self {
        TruncatedSeries::monomial(max_len, Word::empty(), Poly::one())
    }

    /// `k · x` for a single word `x`.
    pub fn monomial(max_len: usize, word: Word, k: Poly) -> Self {
        let mut s = TruncatedSeries::zero(max_len);
        s.add_term(word, &k);
        s
    }

    pub fn letter(max_len: usize, c: Colour) -> Self {
        TruncatedSeries::monomial(max_len, Word::letter(c), Poly::one())
    }

    pub fn from_terms<I: IntoIterator<Item = (Word, Poly)>>(max_len: usize, terms: I) -> Self {
        let mut s = TruncatedSeries::zero(max_len);
        for (x, k) in terms {
            s.add_term(x, &k);
        }
        s
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    /// Number of words with a nonzero coefficient.
    pub fn support_size(&self) -> usize {
        self.coeffs.len()
    }

    /// Adds `k` to the coefficient of `word`; words beyond the bound are
    /// dropped.
    pub fn add_term(&mut self, word: Word, k: &Poly) {
        if word.len() > self.max_len || k.is_zero() {
            return;
        }
        use std::collections::hash_map::Entry;
        match self.coeffs.entry(word) {
            Entry::Vacant(e) => {
                e.insert(k.clone());
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += k;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn get(&self, word: &[Colour]) -> Option<&Poly> {
        self.coeffs.get(word)
    }

    /// `(S, x)`; zero for words outside the support.
    pub fn coeff(&self, word: &Word) -> Poly {
        self.coeffs.get(word.letters()).cloned().unwrap_or_default()
    }

    pub fn constant_term(&self) -> Poly {
        self.coeff(&Word::empty())
    }

    pub fn is_proper(&self) -> bool {
        self.get(&[]).is_none()
    }

    /// Terms in canonical (length, then lexicographic) word order.
    pub fn terms(&self) -> Vec<(&Word, &Poly)> {
        let mut v: Vec<_> = self.coeffs.iter().collect();
        v.sort_by(|a, b| a.0.cmp(b.0));
        v
    }

    fn same_len(&self, other: &Self) -> Result<()> {
        if self.max_len != other.max_len {
            return Err(Error::TruncationMismatch {
                left: self.max_len,
                right: other.max_len,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_len(other)?;
        let mut out = self.clone();
        for (x, k) in &other.coeffs {
            out.add_term(x.clone(), k);
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        TruncatedSeries {
            max_len: self.max_len,
            coeffs: self.coeffs.iter().map(|(x, k)| (x.clone(), -k)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    /// Left external product `k S`. `K` is commutative, so this is also `S k`.
    pub fn scale(&self, k: &Poly) -> Self {
        let mut out = TruncatedSeries::zero(self.max_len);
        for (x, c) in &self.coeffs {
            out.add_term(x.clone(), &(k * c));
        }
        out
    }

    fn by_length(&self) -> Vec<Vec<(&Word, &Poly)>> {
        let mut buckets = vec![Vec::new(); self.max_len + 1];
        for (x, k) in &self.coeffs {
            buckets[x.len()].push((x, k));
        }
        buckets
    }

    /// Cauchy product `(ST, x) = Σ_{yz = x} (S, y)(T, z)`, exact up to the
    /// common bound.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_len(other)?;
        let right = other.by_length();
        let mut out = TruncatedSeries::zero(self.max_len);
        for (y, s) in &self.coeffs {
            for bucket in &right[..=self.max_len - y.len()] {
                for (z, t) in bucket {
                    out.add_term(y.concat(z), &(s * *t));
                }
            }
        }
        Ok(out)
    }

    /// `S* = Σ_{n>=0} S^n` for proper `S`.
    ///
    /// Solves `T = 1 + S T` length by length: the coefficients of length `n`
    /// only depend on those of length `< n`, so one sweep reaches the fixpoint
    /// of `T <- 1 + S T` on the whole truncation.
    pub fn star(&self) -> Result<Self> {
        if !self.is_proper() {
            return Err(Error::NotProper);
        }
        let left = self.by_length();
        let mut levels: Vec<HashMap<Word, Poly>> = vec![HashMap::new(); self.max_len + 1];
        levels[0].insert(Word::empty(), Poly::one());
        for n in 1..=self.max_len {
            let mut level: HashMap<Word, Poly> = HashMap::new();
            for (ylen, bucket) in left.iter().enumerate().take(n + 1).skip(1) {
                for (y, s) in bucket {
                    for (z, t) in &levels[n - ylen] {
                        let e = level.entry(y.concat(z)).or_default();
                        e.add_scaled(t, s);
                    }
                }
            }
            level.retain(|_, k| !k.is_zero());
            levels[n] = level;
        }
        Ok(TruncatedSeries {
            max_len: self.max_len,
            coeffs: levels.into_iter().flatten().collect(),
        })
    }

    /// `u^{-1} S = Σ_x (S, u x) x`. Exact for words of length
    /// `<= L - |u|`, which becomes the bound of the result.
    pub fn left_quotient(&self, prefix: &[Colour]) -> Self {
        let max_len = self.max_len.saturating_sub(prefix.len());
        let mut out = TruncatedSeries::zero(max_len);
        for (x, k) in &self.coeffs {
            if x.starts_with(prefix) {
                out.add_term(Word::new(x.letters()[prefix.len()..].to_vec()), k);
            }
        }
        out
    }

    /// Restriction to words of length `<= max_len`.
    pub fn truncate(&self, max_len: usize) -> Self {
        let max_len = max_len.min(self.max_len);
        TruncatedSeries {
            max_len,
            coeffs: self
                .coeffs
                .iter()
                .filter(|(x, _)| x.len() <= max_len)
                .map(|(x, k)| (x.clone(), k.clone()))
                .collect(),
        }
    }

    /// Applies `f` to every coefficient.
    pub fn map_coeffs(&self, f: impl Fn(&Poly) -> Poly) -> Self {
        let mut out = TruncatedSeries::zero(self.max_len);
        for (x, k) in &self.coeffs {
            out.add_term(x.clone(), &f(k));
        }
        out
    }

    /// Exchanges the letters `b <-> r` in every word (coefficients untouched).
    pub fn swap_letters(&self) -> Self {
        TruncatedSeries {
            max_len: self.max_len,
            coeffs: self
                .coeffs
                .iter()
                .map(|(x, k)| (x.swap(), k.clone()))
                .collect(),
        }
    }

    /// Length of the shortest word on which the series differ; `None` when
    /// they agree on the whole truncation.
    pub fn kappa(&self, other: &Self) -> Result<Option<usize>> {
        self.same_len(other)?;
        let diff = self.sub(other)?;
        Ok(diff.coeffs.keys().map(Word::len).min())
    }

    /// `d(S, T) = 2^{-κ(S, T)}`. Disagreements beyond the truncation bound are
    /// invisible, so truncations that agree have distance 0.
    pub fn distance(&self, other: &Self) -> Result<BigRational> {
        Ok(match self.kappa(other)? {
            None => BigRational::zero(),
            Some(k) => BigRational::new(BigInt::one(), BigInt::from(2u8).pow(k as u32)),
        })
    }
}

#[derive(Serialize)]
struct SeriesTerm<'a> {
    word: &'a Word,
    poly: &'a Poly,
}

impl Serialize for TruncatedSeries {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let terms: Vec<SeriesTerm> = self
            .terms()
            .into_iter()
            .map(|(word, poly)| SeriesTerm { word, poly })
            .collect();
        let mut st = s.serialize_struct("TruncatedSeries", 2)?;
        st.serialize_field("max_len", &self.max_len)?;
        st.serialize_field("terms", &terms)?;
        st.end()
    }
}

/// The four tree series. `r_b`/`r_r` are only produced by the recursive
/// construction.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesPair {
    pub s_b: TruncatedSeries,
    pub s_r: TruncatedSeries,
    pub r_b: Option<TruncatedSeries>,
    pub r_r: Option<TruncatedSeries>,
}

impl SeriesPair {
    pub fn s(&self, c: Colour) -> &TruncatedSeries {
        match c {
            Colour::Blue => &self.s_b,
            Colour::Red => &self.s_r,
        }
    }

    /// `S_b + S_r`, whose coefficient on any nonempty word is its census.
    pub fn total(&self) -> TruncatedSeries {
        self.s_b.add(&self.s_r).expect("pair shares one bound")
    }
}

fn dimer_weight(c: Colour) -> Poly {
    match c {
        Colour::Blue => Poly::b3(),
        Colour::Red => Poly::r3(),
    }
}

/// `A_b = b + b3 b² + b3 y b r (1 - y r)^{-1} b` and its colour swap `A_r`.
pub fn build_a(colour: Colour, max_len: usize) -> TruncatedSeries {
    let other = colour.swap();
    let l = max_len;
    let own = TruncatedSeries::letter(l, colour);
    let alt = TruncatedSeries::letter(l, other);
    let w3 = dimer_weight(colour);
    let geometric = alt.scale(&Poly::y()).star().expect("y·letter is proper");
    let own2 = own.mul(&own).expect("same bound");
    let chain = own
        .mul(&alt)
        .and_then(|s| s.mul(&geometric))
        .and_then(|s| s.mul(&own))
        .expect("same bound");
    own.add(&own2.scale(&w3))
        .and_then(|s| s.add(&chain.scale(&(&w3 * &Poly::y()))))
        .expect("same bound")
}

type Level = HashMap<Word, Poly>;

/// Adds `weight · prefix · level` into `into`.
fn add_prefixed(into: &mut Level, prefix: &[Colour], weight: &Poly, level: &Level) {
    for (x, k) in level {
        let mut word = Word::new(prefix.to_vec());
        for &c in x.letters() {
            word.push(c);
        }
        into.entry(word).or_default().add_scaled(k, weight);
    }
}

fn level_sum(a: &Level, b: &Level) -> Level {
    let mut out = a.clone();
    for (x, k) in b {
        *out.entry(x.clone()).or_default() += k;
    }
    out
}

/// Builds the homogeneous parts `S_#^n`, `R_#^n` (all words of length exactly
/// `n`) of the tree series for `n = 1..=L`:
///
/// ```text
/// S_#^1 = R_#^1 = #
/// S_#^n = # (S_b^{n-1} + S_r^{n-1}) + #3 # R_#^{n-1}
/// R_#^n = # (S^{n-1}) + Σ_{k=1}^{n-2} y^k ¬#^k # S^{n-1-k} + y^{n-1} ¬#^{n-1} #
/// ```
///
/// where `¬#` is the other colour and `S^m = S_b^m + S_r^m`.
pub fn solve_recursive(max_len: usize) -> SeriesPair {
    let l = max_len;
    // index 0 is the (empty) level of length 0
    let mut s: [Vec<Level>; 2] = [vec![Level::new()], vec![Level::new()]];
    let mut r: [Vec<Level>; 2] = [vec![Level::new()], vec![Level::new()]];
    let mut s_sum: Vec<Level> = vec![Level::new()];
    for n in 1..=l {
        for c in Colour::ALL {
            let ci = c as usize;
            let alt = c.swap();
            let mut sn = Level::new();
            let mut rn = Level::new();
            if n == 1 {
                sn.insert(Word::letter(c), Poly::one());
                rn.insert(Word::letter(c), Poly::one());
            } else {
                add_prefixed(&mut sn, &[c], &Poly::one(), &s_sum[n - 1]);
                add_prefixed(&mut sn, &[c], &dimer_weight(c), &r[ci][n - 1]);

                add_prefixed(&mut rn, &[c], &Poly::one(), &s_sum[n - 1]);
                for k in 1..=n - 2 {
                    let mut prefix = vec![alt; k];
                    prefix.push(c);
                    add_prefixed(&mut rn, &prefix, &Poly::y_pow(k as u32), &s_sum[n - 1 - k]);
                }
                let mut tail = vec![alt; n - 1];
                tail.push(c);
                rn.insert(Word::new(tail), Poly::y_pow(n as u32 - 1));
            }
            sn.retain(|_, k| !k.is_zero());
            rn.retain(|_, k| !k.is_zero());
            s[ci].push(sn);
            r[ci].push(rn);
        }
        s_sum.push(level_sum(&s[0][n], &s[1][n]));
    }
    let collect = |levels: &Vec<Level>| {
        TruncatedSeries::from_terms(
            l,
            levels.iter().flatten().map(|(x, k)| (x.clone(), k.clone())),
        )
    };
    SeriesPair {
        s_b: collect(&s[0]),
        s_r: collect(&s[1]),
        r_b: Some(collect(&r[0])),
        r_r: Some(collect(&r[1])),
    }
}

/// `S_b = (1 - A_r)(1 - A_r - A_b)^{-1} - 1` and
/// `S_r = (1 - A_b)(1 - A_r - A_b)^{-1} - 1`, with the inverse taken as the
/// star of the proper series `A_r + A_b`.
pub fn solve_rational(max_len: usize) -> SeriesPair {
    let l = max_len;
    let a_b = build_a(Colour::Blue, l);
    let a_r = build_a(Colour::Red, l);
    let one = TruncatedSeries::one(l);
    let p_star = a_b
        .add(&a_r)
        .and_then(|p| p.star())
        .expect("A_b + A_r is proper");
    let side = |a: &TruncatedSeries| {
        one.sub(a)
            .and_then(|f| f.mul(&p_star))
            .and_then(|s| s.sub(&one))
            .expect("same bound")
    };
    SeriesPair {
        s_b: side(&a_r),
        s_r: side(&a_b),
        r_b: None,
        r_r: None,
    }
}
