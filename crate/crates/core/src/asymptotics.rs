//! Growth of CHDC counts: exact counts `D(x) = (M, x)`, the spectrum of
//! `Ξ = (B₁ + R₁)/2` at `b3 = r3 = y = 1`, the annealed rate
//! `(1/n) ln(2 λ'ᵀ Ξⁿ γ')` and Monte Carlo estimates of the almost-sure rate
//! `α = lim (1/n) ln D_n`.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::{EvalPoint, Poly};
use crate::recog::{builtin_rep_sb, builtin_rep_sum, IntegerRep, NumericRep};
use crate::word::{Colour, Word};

/// Default seed of the randomized routines.
pub const DEFAULT_SEED: u64 = 42;
/// Iteration cap of [`xi_spectrum`].
pub const MAX_POWER_ITERATIONS: usize = 100_000;

fn integer_rep() -> &'static IntegerRep {
    static REP: OnceLock<IntegerRep> = OnceLock::new();
    REP.get_or_init(|| {
        builtin_rep_sum()
            .specialize(&EvalPoint::<BigRational>::ones())
            .to_integer()
            .expect("integer entries at the all-ones point")
    })
}

/// The all-ones specialization of the 38-dimensional representation.
pub fn count_rep() -> &'static NumericRep<f64> {
    static REP: OnceLock<NumericRep<f64>> = OnceLock::new();
    REP.get_or_init(|| builtin_rep_sum().specialize(&EvalPoint::<f64>::ones()))
}

/// Number of CHDCs on `word`, exactly.
pub fn count_chdc(word: &Word) -> Result<BigInt> {
    integer_rep().coefficient(word)
}

/// Natural logarithm of a positive big integer.
pub fn ln_big(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap_or(f64::NAN).ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().unwrap_or(f64::NAN);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// `μ(x) γ` at the all-ones point, built by prepending letters. The vector
/// is nonnegative; after every letter it is divided by its max-norm and the
/// logarithm of the divisor is added to `log_scale`.
#[derive(Debug, Clone)]
pub struct CountState<'a> {
    rep: &'a NumericRep<f64>,
    t: Vec<f64>,
    scratch: Vec<f64>,
    log_scale: f64,
    len: usize,
}

impl<'a> CountState<'a> {
    pub fn new(rep: &'a NumericRep<f64>) -> Self {
        CountState {
            rep,
            t: rep.gamma.clone(),
            scratch: vec![0.0; rep.dim],
            log_scale: 0.0,
            len: 0,
        }
    }

    /// Replaces the word `x` by `c x`.
    pub fn push_front(&mut self, c: Colour) {
        self.rep.step_col(c, &self.t, &mut self.scratch);
        std::mem::swap(&mut self.t, &mut self.scratch);
        let norm = self.t.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if norm > 0.0 {
            self.t.iter_mut().for_each(|x| *x /= norm);
            self.log_scale += norm.ln();
        }
        self.len += 1;
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn vector(&self) -> &[f64] {
        &self.t
    }

    pub fn log_scale(&self) -> f64 {
        self.log_scale
    }

    /// `ln D(x)` for the current word.
    pub fn ln_count(&self) -> Result<f64> {
        if self.len == 0 {
            return Err(Error::EmptyWord);
        }
        let d: f64 = self
            .rep
            .lambda
            .iter()
            .zip(&self.t)
            .map(|(a, b)| a * b)
            .sum();
        Ok(d.ln() + self.log_scale)
    }
}

/// `ln D(x)` via [`CountState`], processing `word` from the right.
pub fn ln_count(word: &Word) -> Result<f64> {
    let mut s = CountState::new(count_rep());
    for &c in word.letters().iter().rev() {
        s.push_front(c);
    }
    s.ln_count()
}

/// `Ξ = (B₁(b3 = 1, y = 1) + R₁(r3 = 1, y = 1)) / 2`, exactly.
pub fn xi_exact() -> Vec<Vec<BigRational>> {
    let rep = builtin_rep_sb().specialize(&EvalPoint::<BigRational>::ones());
    let half = BigRational::new(1.into(), 2.into());
    let mut m = vec![vec![BigRational::zero(); rep.dim]; rep.dim];
    for letter in &rep.entries {
        for (i, j, x) in letter {
            m[*i][*j] += x * &half;
        }
    }
    m
}

/// `Ξ` in floating point.
pub fn xi_matrix() -> Vec<Vec<f64>> {
    xi_exact()
        .iter()
        .map(|row| row.iter().map(|x| x.to_f64().unwrap()).collect())
        .collect()
}

fn ones_vectors() -> (Vec<f64>, Vec<f64>) {
    let at = EvalPoint::<f64>::ones();
    let ev = |v: &[Poly]| v.iter().map(|p| p.eval(&at)).collect::<Vec<f64>>();
    let sb = builtin_rep_sb();
    (ev(sb.lambda()), ev(sb.gamma()))
}

fn mat_vec(m: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

fn vec_mat(v: &[f64], m: &[Vec<f64>]) -> Vec<f64> {
    let mut out = vec![0.0; v.len()];
    for (vi, row) in v.iter().zip(m) {
        for (o, a) in out.iter_mut().zip(row) {
            *o += vi * a;
        }
    }
    out
}

fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralReport {
    pub eigenvalue: f64,
    /// Estimated `|λ₂|`.
    pub second_modulus: f64,
    /// `|λ₂| / λ₁`; below one means a strict modulus gap.
    pub gap_ratio: f64,
    pub iterations: usize,
    /// `‖Ξv − λv‖ / ‖v‖` for the returned eigenvector.
    pub residual: f64,
    pub eigenvector: Vec<f64>,
    pub left_eigenvector: Vec<f64>,
}

/// One power iteration run: returns `(λ, v, iterations, residual)`.
fn power(
    apply: impl Fn(&[f64]) -> Vec<f64>,
    dim: usize,
    tol: f64,
) -> Result<(f64, Vec<f64>, usize, f64)> {
    let mut v = vec![1.0 / (dim as f64).sqrt(); dim];
    let mut residual = f64::INFINITY;
    for it in 1..=MAX_POWER_ITERATIONS {
        let w = apply(&v);
        let lambda = dot(&v, &w);
        residual = norm2(
            &w.iter()
                .zip(&v)
                .map(|(a, b)| a - lambda * b)
                .collect::<Vec<_>>(),
        );
        if residual < tol {
            return Ok((lambda, v, it, residual));
        }
        let n = norm2(&w);
        if n == 0.0 {
            break;
        }
        v = w.iter().map(|x| x / n).collect();
    }
    Err(Error::NoConvergence {
        iterations: MAX_POWER_ITERATIONS,
        residual,
    })
}

/// Dominant eigenvalue of `Ξ` by power iteration, with a left eigenvector,
/// and the modulus of the rest of the spectrum estimated from the growth rate
/// of the deflated iteration.
pub fn xi_spectrum(tolerance: f64) -> Result<SpectralReport> {
    if tolerance.is_nan() || tolerance <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be positive, got {tolerance}"
        )));
    }
    let xi = xi_matrix();
    let d = xi.len();
    let (lambda, v, iterations, residual) = power(|x| mat_vec(&xi, x), d, tolerance)?;
    let (_, u, _, _) = power(|x| vec_mat(x, &xi), d, tolerance)?;
    let uv = dot(&u, &v);

    // Iterate Ξ on the complement of v, projecting out v each step so that
    // rounding cannot reintroduce the dominant direction.
    let project = |x: &mut Vec<f64>| {
        let c = dot(&u, x) / uv;
        x.iter_mut().zip(&v).for_each(|(a, b)| *a -= c * b);
    };
    let mut x: Vec<f64> = (0..d)
        .map(|i| 1.0 + 0.37 * i as f64 - 0.011 * (i * i) as f64)
        .collect();
    project(&mut x);
    let (warmup, window) = (200, 200);
    let mut log_growth = 0.0;
    for k in 0..warmup + window {
        let mut y = mat_vec(&xi, &x);
        project(&mut y);
        let n = norm2(&y);
        let prev = norm2(&x);
        if n == 0.0 || prev == 0.0 {
            log_growth = f64::NEG_INFINITY;
            break;
        }
        if k >= warmup {
            log_growth += (n / prev).ln();
        }
        x = y.iter().map(|a| a / n).collect();
    }
    let second_modulus = (log_growth / window as f64).exp();
    Ok(SpectralReport {
        eigenvalue: lambda,
        second_modulus,
        gap_ratio: second_modulus / lambda.abs(),
        iterations,
        residual,
        eigenvector: v,
        left_eigenvector: u,
    })
}

/// Tracks `ln(2 λ'ᵀ Ξⁿ γ')` for increasing `n`.
struct AnnealedState {
    xi: Vec<Vec<f64>>,
    lambda: Vec<f64>,
    t: Vec<f64>,
    log_scale: f64,
    n: usize,
}

impl AnnealedState {
    fn new() -> Self {
        let (lambda, gamma) = ones_vectors();
        AnnealedState {
            xi: xi_matrix(),
            lambda,
            t: gamma,
            log_scale: 0.0,
            n: 0,
        }
    }

    fn step(&mut self) {
        self.t = mat_vec(&self.xi, &self.t);
        let norm = self.t.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        self.t.iter_mut().for_each(|x| *x /= norm);
        self.log_scale += norm.ln();
        self.n += 1;
    }

    fn ln_f(&self) -> Result<f64> {
        let d = dot(&self.lambda, &self.t);
        if d.is_nan() || d <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "λ'ᵀ Ξ^{} γ' is not positive",
                self.n
            )));
        }
        Ok(std::f64::consts::LN_2 + d.ln() + self.log_scale)
    }
}

/// `(1/n) ln f(n)` with `f(n) = 2 λ'ᵀ Ξⁿ γ' = E[D_n]` under fair letters.
pub fn mean_growth(n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let mut s = AnnealedState::new();
    for _ in 0..n {
        s.step();
    }
    Ok(s.ln_f()? / n as f64)
}

/// `(n, mean_growth(n))` for `n = step, 2 step, ..., <= n_max`, in one pass.
pub fn growth_curve(n_max: usize, step: usize) -> Result<Vec<(usize, f64)>> {
    if step == 0 {
        return Err(Error::InvalidArgument("step must be at least 1".into()));
    }
    let mut s = AnnealedState::new();
    let mut out = Vec::new();
    while s.n + step <= n_max {
        for _ in 0..step {
            s.step();
        }
        out.push((s.n, s.ln_f()? / s.n as f64));
    }
    Ok(out)
}

/// `f(n) = 2 λ'ᵀ Ξⁿ γ'`, exactly.
pub fn annealed_f_exact(n: usize) -> BigRational {
    let xi = xi_exact();
    let at = EvalPoint::<BigRational>::ones();
    let sb = builtin_rep_sb();
    let mut t: Vec<BigRational> = sb.gamma().iter().map(|p| p.eval(&at)).collect();
    for _ in 0..n {
        t = xi
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&t)
                    .filter(|(a, _)| !a.is_zero())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect();
    }
    let lam: Vec<BigRational> = sb.lambda().iter().map(|p| p.eval(&at)).collect();
    let d: BigRational = lam.iter().zip(&t).map(|(a, b)| a * b).sum();
    d * BigRational::from_integer(2.into())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LyapunovEstimate {
    pub alpha_hat: f64,
    pub stderr: f64,
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    /// Segments per trial when batch means were used for `stderr`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub batches: Option<usize>,
}

/// Letter source of trial `trial`: ChaCha8 keyed by `seed`, on stream
/// `trial`, so every trial is reproducible on its own.
pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

fn sample_letter(rng: &mut ChaCha8Rng) -> Colour {
    if rng.gen::<bool>() {
        Colour::Red
    } else {
        Colour::Blue
    }
}

/// `ln D_n` at `k` evenly spaced checkpoints of one trial (the last is `n`).
fn trial_path(n: usize, seed: u64, trial: usize, checkpoints: usize) -> Result<Vec<f64>> {
    let mut rng = trial_rng(seed, trial);
    let mut s = CountState::new(count_rep());
    let mut out = Vec::with_capacity(checkpoints);
    for b in 1..=checkpoints {
        let end = n * b / checkpoints;
        while s.len() < end {
            // Letters are i.i.d., so growing the word on the left has the
            // same law as growing it on the right.
            s.push_front(sample_letter(&mut rng));
        }
        out.push(s.ln_count()?);
    }
    Ok(out)
}

fn mean_and_stderr(xs: &[f64]) -> (f64, f64) {
    let m = xs.iter().sum::<f64>() / xs.len() as f64;
    if xs.len() < 2 {
        return (m, 0.0);
    }
    let var = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64;
    (m, (var / xs.len() as f64).sqrt())
}

/// Monte Carlo estimate of `α` from `trials` independent words of length `n`
/// with fair letters. `alpha_hat` is the mean of `(1/n) ln D_n`; `stderr` is
/// the plain standard error over trials, or with `batches = Some(k)` the
/// standard error of the per-segment rates of `k` equal segments per trial.
pub fn lyapunov_estimate(
    n: usize,
    trials: usize,
    seed: u64,
    batches: Option<usize>,
) -> Result<LyapunovEstimate> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    if trials < 2 {
        return Err(Error::InvalidArgument(
            "at least two trials are needed".into(),
        ));
    }
    let k = batches.unwrap_or(1);
    if k == 0 || k > n {
        return Err(Error::InvalidArgument(format!(
            "batch count must lie in 1..={n}"
        )));
    }
    let paths: Vec<Vec<f64>> = (0..trials)
        .into_par_iter()
        .map(|t| trial_path(n, seed, t, k))
        .collect::<Result<_>>()?;
    let rates: Vec<f64> = paths.iter().map(|p| p[k - 1] / n as f64).collect();
    let (alpha_hat, plain) = mean_and_stderr(&rates);
    let stderr = match batches {
        None => plain,
        Some(_) => {
            let mut seg = Vec::with_capacity(trials * k);
            for p in &paths {
                let mut prev_len = 0;
                let mut prev = 0.0;
                for (b, &l) in p.iter().enumerate() {
                    let len = n * (b + 1) / k;
                    seg.push((l - prev) / (len - prev_len) as f64);
                    prev = l;
                    prev_len = len;
                }
            }
            mean_and_stderr(&seg).1
        }
    };
    Ok(LyapunovEstimate {
        alpha_hat,
        stderr,
        n,
        trials,
        seed,
        batches,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub word: Word,
    pub split: usize,
    pub whole: String,
    pub prefix: String,
    pub suffix: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubadditivityReport {
    pub samples: usize,
    pub max_len: usize,
    pub seed: u64,
    pub violations: Vec<Violation>,
}

/// Samples `samples` words of uniform length in `2..=max_len` with fair
/// letters and a uniform split point, and checks
/// `D(x) >= D(prefix) · D(suffix)`.
pub fn subadditivity_check(
    samples: usize,
    max_len: usize,
    seed: u64,
) -> Result<SubadditivityReport> {
    if max_len < 2 {
        return Err(Error::InvalidArgument("max_len must be at least 2".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = Vec::new();
    for _ in 0..samples {
        let len = rng.gen_range(2..=max_len);
        let word: Word = (0..len).map(|_| sample_letter(&mut rng)).collect();
        let split = rng.gen_range(1..len);
        let (p, s) = word.split_at(split);
        let (whole, prefix, suffix) = (count_chdc(&word)?, count_chdc(&p)?, count_chdc(&s)?);
        if whole < &prefix * &suffix {
            violations.push(Violation {
                word,
                split,
                whole: whole.to_string(),
                prefix: prefix.to_string(),
                suffix: suffix.to_string(),
            });
        }
    }
    Ok(SubadditivityReport {
        samples,
        max_len,
        seed,
        violations,
    })
}

/// `true` if `x` is nonnegative.
pub fn is_nonnegative(x: &BigRational) -> bool {
    !x.is_negative()
}
