//! Generating functions built from the census: `Z^hcd_σ(u, v, w)`, the level
//! sums `Z_n(u, v, w) = Σ_{|σ| = n} 1 / Z^hcd_σ(-u, -v, w)` and the damped sum
//! `Z = Σ_n e^{-γ n} Z_n`.

use std::ops::Div;

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use rayon::prelude::*;
use serde::Serialize;

use crate::chdc::census;
use crate::error::{Error, Result};
use crate::poly::{EvalPoint, Scalar};
use crate::recog::{builtin_rep_sb, builtin_rep_sum, NumericRep};
use crate::word::{Colour, Word};

/// Default largest level accepted by [`z_n`].
pub const DEFAULT_MAX_LEVEL: usize = 20;
/// Hard cap on the level, whatever the options say.
pub const LEVEL_CAP: usize = 32;

/// Prefix length at which the word tree is split into independent jobs. The
/// split is fixed, so floating sums do not depend on the thread count.
const SPLIT_DEPTH: usize = 6;

/// Scalars in which the level sums can be formed.
pub trait Field: Scalar + Div<Output = Self> + Send + Sync {
    type Sum: Default + Send;
    fn accumulate(sum: &mut Self::Sum, x: Self);
    fn merge(into: &mut Self::Sum, other: Self::Sum);
    fn total(sum: &Self::Sum) -> Self;
    fn approx(&self) -> f64;
    /// Exact rendering, if the type is exact.
    fn exact_repr(&self) -> Option<String>;
}

/// Neumaier's compensated summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl Field for f64 {
    type Sum = Neumaier;
    fn accumulate(sum: &mut Neumaier, x: f64) {
        sum.add(x);
    }
    fn merge(into: &mut Neumaier, other: Neumaier) {
        into.add(other.sum);
        into.add(other.comp);
    }
    fn total(sum: &Neumaier) -> f64 {
        sum.value()
    }
    fn approx(&self) -> f64 {
        *self
    }
    fn exact_repr(&self) -> Option<String> {
        None
    }
}

impl Field for BigRational {
    type Sum = BigRational;
    fn accumulate(sum: &mut BigRational, x: BigRational) {
        *sum += x;
    }
    fn merge(into: &mut BigRational, other: BigRational) {
        *into += other;
    }
    fn total(sum: &BigRational) -> BigRational {
        sum.clone()
    }
    fn approx(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
    fn exact_repr(&self) -> Option<String> {
        Some(self.to_string())
    }
}

/// `Z^hcd_σ(u, v, w) = Σ_D u^{|D|_b} v^{|D|_r} w^{|∩D|}`, from the
/// 38-dimensional representation.
pub fn z_hcd<T: Scalar>(word: &Word, at: &EvalPoint<T>) -> Result<T> {
    builtin_rep_sum().specialize(at).coefficient(word)
}

/// Outcome of [`corollary_check`]. `canonical` is the member of
/// `{σ, swap σ}` starting with `b`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorollaryReport {
    pub canonical: Word,
    #[serde(serialize_with = "ser_display")]
    pub lhs: BigRational,
    #[serde(serialize_with = "ser_display")]
    pub rhs: BigRational,
    pub holds: bool,
}

fn ser_display<S: serde::Serializer, D: std::fmt::Display>(
    x: &D,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(x)
}

/// Checks `a_x(u, v, w) + a_x(v, u, w) = Z^hcd_σ + Z^hcd_{swap σ}` where
/// `x` is the `b`-initial member of `{σ, swap σ}` and `a_x = (S_b, x)`.
pub fn corollary_check(word: &Word, at: &EvalPoint<BigRational>) -> Result<CorollaryReport> {
    let canonical = match word.first() {
        None => return Err(Error::EmptyWord),
        Some(Colour::Blue) => word.clone(),
        Some(Colour::Red) => word.swap(),
    };
    let a = builtin_rep_sb().coefficient(&canonical)?;
    let lhs = a.eval(at) + a.eval(&at.swapped());
    let rhs = z_hcd(word, at)? + z_hcd(&word.swap(), at)?;
    Ok(CorollaryReport {
        holds: lhs == rhs,
        canonical,
        lhs,
        rhs,
    })
}

/// How the per-word denominators are obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Numeric specialization of the 38-dimensional representation, with
    /// row vectors shared along common prefixes.
    Representation,
    /// Census of each word by enumeration.
    BruteForce,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ZnOptions {
    pub method: Method,
    pub skip_singular: bool,
    pub max_level: usize,
}

impl Default for ZnOptions {
    fn default() -> Self {
        ZnOptions {
            method: Method::Representation,
            skip_singular: false,
            max_level: DEFAULT_MAX_LEVEL,
        }
    }
}

/// `Z_n` with the words whose denominator vanished (only non-empty when
/// skipping is enabled) and the largest `|1 / Z^hcd|` seen.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelSum<T> {
    pub n: usize,
    pub value: T,
    pub singular: Vec<Word>,
    pub max_reciprocal: f64,
}

struct Partial<T: Field> {
    sum: T::Sum,
    singular: Vec<Word>,
    max_reciprocal: f64,
}

impl<T: Field> Partial<T> {
    fn new() -> Self {
        Partial {
            sum: T::Sum::default(),
            singular: Vec::new(),
            max_reciprocal: 0.0,
        }
    }

    fn push(&mut self, word: impl FnOnce() -> Word, denom: T) {
        if denom.is_zero() {
            self.singular.push(word());
        } else {
            let x = T::one() / denom;
            self.max_reciprocal = self.max_reciprocal.max(x.approx().abs());
            T::accumulate(&mut self.sum, x);
        }
    }
}

fn walk<T: Field>(
    rep: &NumericRep<T>,
    v: &[T],
    left: usize,
    word: &mut Vec<Colour>,
    out: &mut Partial<T>,
) {
    if left == 0 {
        out.push(|| Word::new(word.clone()), rep.finish(v));
        return;
    }
    let mut next = vec![T::zero(); rep.dim];
    for c in Colour::ALL {
        rep.step_row(v, c, &mut next);
        word.push(c);
        walk(rep, &next, left - 1, word, out);
        word.pop();
    }
}

/// `Z_n(u, v, w) = Σ_{|σ| = n} 1 / Z^hcd_σ(-u, -v, w)`.
///
/// The sign flip is applied here; `at` holds the user-facing `(u, v, w)`.
/// A vanishing denominator fails with [`Error::Singular`] (the
/// lexicographically first such word) unless `skip_singular` is set, in which
/// case the word is skipped and listed.
pub fn z_n<T: Field>(n: usize, at: &EvalPoint<T>, opts: &ZnOptions) -> Result<LevelSum<T>> {
    let max = opts.max_level.min(LEVEL_CAP);
    if n == 0 {
        return Err(Error::InvalidArgument("level must be at least 1".into()));
    }
    if n > max {
        return Err(Error::TooLong { len: n, max });
    }
    if opts.method == Method::BruteForce && n > crate::chdc::MAX_ENUM_LEN {
        return Err(Error::TooLong {
            len: n,
            max: crate::chdc::MAX_ENUM_LEN,
        });
    }
    let neg = EvalPoint::new(-at.u.clone(), -at.v.clone(), at.w.clone());
    let split = n.min(SPLIT_DEPTH);
    let rest = n - split;
    let parts: Vec<Result<Partial<T>>> = match opts.method {
        Method::Representation => {
            let rep = builtin_rep_sum().specialize(&neg);
            (0..1u64 << split)
                .into_par_iter()
                .map(|hi| {
                    let prefix = Word::from_bits(hi, split);
                    let mut v = rep.lambda.clone();
                    let mut next = vec![T::zero(); rep.dim];
                    for &c in prefix.letters() {
                        rep.step_row(&v, c, &mut next);
                        std::mem::swap(&mut v, &mut next);
                    }
                    let mut part = Partial::new();
                    let mut letters = prefix.letters().to_vec();
                    walk(&rep, &v, rest, &mut letters, &mut part);
                    Ok(part)
                })
                .collect()
        }
        Method::BruteForce => (0..1u64 << split)
            .into_par_iter()
            .map(|hi| {
                let mut part = Partial::new();
                for lo in 0..1u64 << rest {
                    let word = Word::from_bits(hi << rest | lo, n);
                    let denom = census(&word)?.eval(&neg);
                    part.push(|| word, denom);
                }
                Ok(part)
            })
            .collect(),
    };
    let mut total = Partial::<T>::new();
    for part in parts {
        let part = part?;
        T::merge(&mut total.sum, part.sum);
        total.singular.extend(part.singular);
        total.max_reciprocal = total.max_reciprocal.max(part.max_reciprocal);
    }
    if let Some(first) = total.singular.first() {
        if !opts.skip_singular {
            return Err(Error::Singular {
                word: first.to_string(),
            });
        }
    }
    Ok(LevelSum {
        n,
        value: T::total(&total.sum),
        singular: total.singular,
        max_reciprocal: total.max_reciprocal,
    })
}

/// Inputs of [`z_partial`]: the point `(u, v, w)`, the damping exponent `γ`
/// and the last level `n_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransferParams<T> {
    pub at: EvalPoint<T>,
    pub gamma_damp: f64,
    pub n_max: usize,
}

impl<T> TransferParams<T> {
    pub fn validate(&self) -> Result<()> {
        if self.n_max == 0 {
            return Err(Error::InvalidArgument("n_max must be at least 1".into()));
        }
        if !self.gamma_damp.is_finite() {
            return Err(Error::InvalidArgument(
                "damping exponent must be finite".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZnLevel {
    pub n: usize,
    pub z_n: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z_n_exact: Option<String>,
    pub weighted: f64,
    pub partial_sum: f64,
    pub max_reciprocal: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZnReport {
    pub u: f64,
    pub v: f64,
    pub w: f64,
    pub gamma_damp: f64,
    pub n_max: usize,
    pub levels: Vec<ZnLevel>,
    pub singular: Vec<Word>,
    /// `max_n ln(max(1, R_n)) / n`, with `R_n` the largest `|1 / Z^hcd|` at
    /// level `n`.
    pub growth_estimate: f64,
    /// Tail bound `q^{N+1} / (1 - q)` with `q = 2 e^{g - γ}`, assuming
    /// `|Z_n| <= 2^n e^{g n}` persists beyond the computed levels; `None` if
    /// `q >= 1`.
    pub remainder_bound: Option<f64>,
    pub converges: bool,
}

/// Partial sums `Σ_{n <= N} e^{-γ n} Z_n` for `N = 1..=n_max`.
pub fn z_partial<T: Field>(params: &TransferParams<T>, opts: &ZnOptions) -> Result<ZnReport> {
    params.validate()?;
    let mut levels = Vec::with_capacity(params.n_max);
    let mut singular = Vec::new();
    let mut partial = Neumaier::default();
    let mut growth = 0.0f64;
    for n in 1..=params.n_max {
        let level = z_n(n, &params.at, opts)?;
        let z = level.value.approx();
        let weighted = (-params.gamma_damp * n as f64).exp() * z;
        partial.add(weighted);
        growth = growth.max(level.max_reciprocal.max(1.0).ln() / n as f64);
        singular.extend(level.singular);
        levels.push(ZnLevel {
            n,
            z_n: z,
            z_n_exact: level.value.exact_repr(),
            weighted,
            partial_sum: partial.value(),
            max_reciprocal: level.max_reciprocal,
        });
    }
    let ln_q = std::f64::consts::LN_2 + growth - params.gamma_damp;
    let converges = ln_q < 0.0;
    let remainder_bound = converges.then(|| {
        let q = ln_q.exp();
        (ln_q * (params.n_max as f64 + 1.0)).exp() / (1.0 - q)
    });
    Ok(ZnReport {
        u: params.at.u.approx(),
        v: params.at.v.approx(),
        w: params.at.w.approx(),
        gamma_damp: params.gamma_damp,
        n_max: params.n_max,
        levels,
        singular,
        growth_estimate: growth,
        remainder_bound,
        converges,
    })
}

/// Relative difference `|a - b| / max(|a|, |b|, tiny)`.
pub fn relative_diff(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs()).max(f64::MIN_POSITIVE);
    (a - b).abs() / scale
}

/// `|x|` as `f64`, for reporting.
pub fn abs_f64(x: &BigRational) -> f64 {
    x.abs().to_f64().unwrap_or(f64::INFINITY)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chdc::count_configs;
    use crate::word::w;
    use num_bigint::BigInt;
    use num_traits::{One, Zero};
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn pt(u: (i64, i64), v: (i64, i64), ww: (i64, i64)) -> EvalPoint<BigRational> {
        EvalPoint::new(q(u.0, u.1), q(v.0, v.1), q(ww.0, ww.1))
    }

    #[test]
    fn z_hcd_examples() {
        let at = pt((2, 3), (-5, 7), (3, 2));
        let (u, v, ww) = (at.u.clone(), at.v.clone(), at.w.clone());
        assert_eq!(
            z_hcd(&w("brrb"), &at).unwrap(),
            BigRational::one() + &v + &u * &ww * &ww
        );
        let zero = pt((0, 1), (0, 1), (9, 4));
        for x in ["b", "rbrrb", "bbbbbb", "rrbbrbrb"] {
            assert_eq!(z_hcd(&w(x), &zero).unwrap(), BigRational::one());
        }
        let fig = w("rbrrbrbbrbrb");
        assert_eq!(
            z_hcd(&fig, &EvalPoint::<BigRational>::ones()).unwrap(),
            BigRational::from_integer(BigInt::from(count_configs(&fig).unwrap()))
        );
        assert_eq!(z_hcd(&Word::empty(), &zero), Err(Error::EmptyWord));
    }

    #[test]
    fn z_hcd_counts_up_to_ten() {
        let rep = builtin_rep_sum().specialize(&EvalPoint::<BigRational>::ones());
        for x in Word::all_up_to(10) {
            let z = rep.coefficient(&x).unwrap();
            assert_eq!(
                z,
                BigRational::from_integer(BigInt::from(count_configs(&x).unwrap()))
            );
        }
    }

    #[test]
    fn corollary_examples() {
        let at = pt((2, 1), (3, 1), (5, 1));
        let r = corollary_check(&w("bb"), &at).unwrap();
        assert!(r.holds);
        assert_eq!(r.lhs, q(3, 1) + q(4, 1));
        let br = corollary_check(&w("br"), &at).unwrap();
        let rb = corollary_check(&w("rb"), &at).unwrap();
        assert_eq!(br.lhs, q(2, 1));
        assert_eq!(rb.rhs, q(2, 1));
        assert_eq!(rb.canonical, w("br"));
    }

    #[test]
    fn level_one_and_two() {
        let at = pt((1, 3), (2, 5), (7, 1));
        let opts = ZnOptions::default();
        assert_eq!(z_n(1, &at, &opts).unwrap().value, q(2, 1));
        let expected = BigRational::one() / (BigRational::one() - &at.u)
            + q(2, 1)
            + BigRational::one() / (BigRational::one() - &at.v);
        assert_eq!(z_n(2, &at, &opts).unwrap().value, expected);
    }

    #[test]
    fn singular_words() {
        let at = pt((1, 1), (0, 1), (0, 1));
        let err = z_n(2, &at, &ZnOptions::default()).unwrap_err();
        assert_eq!(err, Error::Singular { word: "bb".into() });
        let opts = ZnOptions {
            skip_singular: true,
            ..ZnOptions::default()
        };
        let level = z_n(2, &at, &opts).unwrap();
        assert_eq!(level.singular, vec![w("bb")]);
        assert_eq!(level.value, q(3, 1));
        let fat = at.to_f64();
        assert!(matches!(
            z_n(2, &fat, &ZnOptions::default()),
            Err(Error::Singular { .. })
        ));
    }

    #[test]
    fn bounds() {
        let at = EvalPoint::<f64>::ones();
        assert!(z_n(0, &at, &ZnOptions::default()).is_err());
        assert_eq!(
            z_n(21, &at, &ZnOptions::default()).unwrap_err(),
            Error::TooLong { len: 21, max: 20 }
        );
    }

    #[test]
    fn methods_agree() {
        let skip = ZnOptions {
            skip_singular: true,
            ..ZnOptions::default()
        };
        let brute_opts = ZnOptions {
            method: Method::BruteForce,
            ..skip
        };
        for at in [pt((-1, 4), (-2, 3), (5, 2)), pt((1, 4), (-2, 3), (5, 2))] {
            for n in 1..=8 {
                let rep = z_n(n, &at, &skip).unwrap();
                let brute = z_n(n, &at, &brute_opts).unwrap();
                assert_eq!(rep.value, brute.value);
                assert_eq!(rep.singular, brute.singular);
                if rep.singular.is_empty() {
                    let f = z_n(n, &at.to_f64(), &skip).unwrap();
                    assert!(relative_diff(f.value, brute.value.approx()) <= 1e-12);
                }
            }
        }
    }

    #[test]
    fn order_independence() {
        // Exact sums over arbitrary partitions of the level-7 words agree.
        let at = pt((3, 5), (1, 7), (2, 1));
        let neg = EvalPoint::new(-at.u.clone(), -at.v.clone(), at.w.clone());
        let recip: Vec<BigRational> = Word::all_of_len(7)
            .map(|x| BigRational::one() / census(&x).unwrap().eval(&neg))
            .collect();
        let whole = z_n(7, &at, &ZnOptions::default()).unwrap().value;
        for stride in [1usize, 3, 17] {
            let mut parts = vec![BigRational::zero(); stride];
            for (i, r) in recip.iter().enumerate().rev() {
                parts[i % stride] += r;
            }
            assert_eq!(
                parts.into_iter().fold(BigRational::zero(), |a, b| a + b),
                whole
            );
        }
    }

    #[test]
    fn thread_count_does_not_change_floats() {
        let at = EvalPoint::new(0.3, 0.2, 0.5);
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| z_n(12, &at, &ZnOptions::default()).unwrap().value)
        };
        assert_eq!(run(1).to_bits(), run(4).to_bits());
    }

    #[test]
    fn partial_sums_at_origin() {
        let params = TransferParams {
            at: EvalPoint::new(0.0, 0.0, 0.0),
            gamma_damp: 1.0,
            n_max: 10,
        };
        let rep = z_partial(&params, &ZnOptions::default()).unwrap();
        let mut s = 0.0;
        for (lvl, n) in rep.levels.iter().zip(1..) {
            assert_eq!(lvl.z_n, 2f64.powi(n));
            s += (2.0 * (-1.0f64).exp()).powi(n);
            assert!(relative_diff(lvl.partial_sum, s) < 1e-14);
        }
        assert!(rep.converges);
        let q = 2.0 * (-1.0f64).exp();
        let tail = q.powi(11) / (1.0 - q);
        assert!(relative_diff(rep.remainder_bound.unwrap(), tail) < 1e-12);

        let one = TransferParams {
            n_max: 1,
            gamma_damp: 0.7,
            ..params.clone()
        };
        let r1 = z_partial(&one, &ZnOptions::default()).unwrap();
        assert!(relative_diff(r1.levels[0].partial_sum, 2.0 * (-0.7f64).exp()) < 1e-15);

        let slow = TransferParams {
            gamma_damp: 0.5,
            ..params.clone()
        };
        let rs = z_partial(&slow, &ZnOptions::default()).unwrap();
        assert!(!rs.converges && rs.remainder_bound.is_none());

        let heavy = TransferParams {
            gamma_damp: 200.0,
            ..params
        };
        assert!(z_partial(&heavy, &ZnOptions::default()).unwrap().levels[9].partial_sum < 1e-80);
        let bad = TransferParams {
            at: EvalPoint::new(0.0, 0.0, 0.0),
            gamma_damp: f64::NAN,
            n_max: 3,
        };
        assert!(z_partial(&bad, &ZnOptions::default()).is_err());
    }

    #[test]
    fn report_json() {
        let params = TransferParams {
            at: EvalPoint::integer(0, 0, 1),
            gamma_damp: 1.0,
            n_max: 2,
        };
        let rep = z_partial(&params, &ZnOptions::default()).unwrap();
        let json = serde_json::to_value(&rep).unwrap();
        assert_eq!(json["levels"][1]["z_n_exact"], "4");
        assert_eq!(json["singular"], serde_json::json!([]));
    }

    fn arb_q() -> impl Strategy<Value = BigRational> {
        (-9i64..=9, 1i64..=6).prop_map(|(n, d)| q(n, d))
    }

    fn arb_word() -> impl Strategy<Value = Word> {
        prop::collection::vec(prop::bool::ANY, 1..=10).prop_map(|v| {
            v.into_iter()
                .map(|r| if r { Colour::Red } else { Colour::Blue })
                .collect()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn corollary_holds(x in arb_word(), u in arb_q(), v in arb_q(), ww in arb_q()) {
            let r = corollary_check(&x, &EvalPoint::new(u, v, ww)).unwrap();
            prop_assert!(r.holds, "{:?}", r);
        }
    }
}
