//! Linear representations `(λ, μ(b), μ(r), γ)` with `(S, x) = λᵀ μ(x) γ`.
//!
//! [`builtin_rep_sb`] carries the 19-dimensional representation of `S_b` as
//! data; [`derive_rep`] recomputes it from scratch by expressing left
//! quotients of the stable basis `T_1..T_20` in that basis.

mod basis;
mod derive;

pub use basis::{basis, Atom, BasisElement};
pub use derive::{derive_rep, Derivation, DEFAULT_WORKING_LEN};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::{EvalPoint, Poly, Scalar};
use crate::word::{Colour, Word};

/// A linear representation over `K`. Matrices are dense row-major; nonzero
/// positions are cached for evaluation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LinRep {
    dim: usize,
    lambda: Vec<Poly>,
    mat_b: Vec<Vec<Poly>>,
    mat_r: Vec<Vec<Poly>>,
    gamma: Vec<Poly>,
    #[serde(skip)]
    nonzero: [Vec<(usize, usize)>; 2],
}

/// One disagreeing entry between two representations. Indices are 1-based;
/// `col` is `None` for vector entries.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntryDiff {
    pub part: &'static str,
    pub row: usize,
    pub col: Option<usize>,
    pub expected: Poly,
    pub found: Poly,
}

impl std::fmt::Display for EntryDiff {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.col {
            Some(c) => write!(f, "{}[{}][{}]", self.part, self.row, c)?,
            None => write!(f, "{}[{}]", self.part, self.row)?,
        }
        write!(f, ": expected {}, found {}", self.expected, self.found)
    }
}

impl LinRep {
    pub fn new(
        lambda: Vec<Poly>,
        mat_b: Vec<Vec<Poly>>,
        mat_r: Vec<Vec<Poly>>,
        gamma: Vec<Poly>,
    ) -> Result<Self> {
        let d = lambda.len();
        let square = |m: &Vec<Vec<Poly>>| m.len() == d && m.iter().all(|row| row.len() == d);
        if d == 0 || gamma.len() != d || !square(&mat_b) || !square(&mat_r) {
            return Err(Error::InvalidArgument(format!(
                "inconsistent representation dimensions (λ has {d} entries)"
            )));
        }
        let nz = |m: &Vec<Vec<Poly>>| {
            let mut v = Vec::new();
            for (i, row) in m.iter().enumerate() {
                for (j, e) in row.iter().enumerate() {
                    if !e.is_zero() {
                        v.push((i, j));
                    }
                }
            }
            v
        };
        let nonzero = [nz(&mat_b), nz(&mat_r)];
        Ok(LinRep {
            dim: d,
            lambda,
            mat_b,
            mat_r,
            gamma,
            nonzero,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn lambda(&self) -> &[Poly] {
        &self.lambda
    }

    pub fn gamma(&self) -> &[Poly] {
        &self.gamma
    }

    pub fn mat(&self, c: Colour) -> &[Vec<Poly>] {
        match c {
            Colour::Blue => &self.mat_b,
            Colour::Red => &self.mat_r,
        }
    }

    /// Applies `f` to every entry of every matrix and vector.
    pub fn map_entries(&self, f: impl Fn(&Poly) -> Poly) -> LinRep {
        let mv = |v: &[Poly]| v.iter().map(&f).collect::<Vec<_>>();
        let mm = |m: &[Vec<Poly>]| m.iter().map(|row| mv(row)).collect::<Vec<_>>();
        LinRep::new(
            mv(&self.lambda),
            mm(&self.mat_b),
            mm(&self.mat_r),
            mv(&self.gamma),
        )
        .expect("dimensions preserved")
    }

    /// Block-diagonal sum; represents the sum of the two series.
    pub fn direct_sum(&self, other: &LinRep) -> LinRep {
        let d = self.dim + other.dim;
        let block = |a: &[Vec<Poly>], b: &[Vec<Poly>]| {
            let mut m = vec![vec![Poly::zero(); d]; d];
            for (i, row) in a.iter().enumerate() {
                m[i][..self.dim].clone_from_slice(row);
            }
            for (i, row) in b.iter().enumerate() {
                m[self.dim + i][self.dim..].clone_from_slice(row);
            }
            m
        };
        let cat = |a: &[Poly], b: &[Poly]| a.iter().chain(b).cloned().collect::<Vec<_>>();
        LinRep::new(
            cat(&self.lambda, &other.lambda),
            block(&self.mat_b, &other.mat_b),
            block(&self.mat_r, &other.mat_r),
            cat(&self.gamma, &other.gamma),
        )
        .expect("block dimensions")
    }

    /// `v ↦ v μ(c)`.
    fn step_row(&self, v: &[Poly], c: Colour) -> Vec<Poly> {
        let m = self.mat(c);
        let mut out = vec![Poly::zero(); self.dim];
        for &(i, j) in &self.nonzero[c as usize] {
            if !v[i].is_zero() {
                out[j].add_scaled(&v[i], &m[i][j]);
            }
        }
        out
    }

    /// `λᵀ μ(x)`, one letter at a time from the left.
    pub fn row_vector(&self, word: &Word) -> Vec<Poly> {
        word.letters()
            .iter()
            .fold(self.lambda.clone(), |v, &c| self.step_row(&v, c))
    }

    /// `μ(x) γ`, one letter at a time from the right.
    pub fn column_vector(&self, word: &Word) -> Vec<Poly> {
        let mut t = self.gamma.clone();
        for &c in word.letters().iter().rev() {
            let m = self.mat(c);
            let mut out = vec![Poly::zero(); self.dim];
            for &(i, j) in &self.nonzero[c as usize] {
                if !t[j].is_zero() {
                    out[i].add_scaled(&t[j], &m[i][j]);
                }
            }
            t = out;
        }
        t
    }

    /// `(S, x) = λᵀ μ(x) γ` for a nonempty word. The reduced representations
    /// drop the basis element `1`, so the empty word is outside their domain.
    pub fn coefficient(&self, word: &Word) -> Result<Poly> {
        if word.is_empty() {
            return Err(Error::EmptyWord);
        }
        Ok(dot(&self.row_vector(word), &self.gamma))
    }

    pub fn specialize<T: Scalar>(&self, at: &EvalPoint<T>) -> NumericRep<T> {
        let ev = |p: &Poly| p.eval(at);
        let entries = |c: Colour| {
            self.nonzero[c as usize]
                .iter()
                .map(|&(i, j)| (i, j, ev(&self.mat(c)[i][j])))
                .collect()
        };
        NumericRep {
            dim: self.dim,
            lambda: self.lambda.iter().map(ev).collect(),
            gamma: self.gamma.iter().map(ev).collect(),
            entries: [entries(Colour::Blue), entries(Colour::Red)],
        }
    }

    /// Entry-by-entry comparison; `self` plays the expected side.
    pub fn diff(&self, found: &LinRep) -> Vec<EntryDiff> {
        let mut out = Vec::new();
        let mut vec_diff = |part, a: &[Poly], b: &[Poly]| {
            for i in 0..a.len().max(b.len()) {
                let (x, y) = (
                    a.get(i).cloned().unwrap_or_default(),
                    b.get(i).cloned().unwrap_or_default(),
                );
                if x != y {
                    out.push(EntryDiff {
                        part,
                        row: i + 1,
                        col: None,
                        expected: x,
                        found: y,
                    });
                }
            }
        };
        vec_diff("lambda", &self.lambda, &found.lambda);
        vec_diff("gamma", &self.gamma, &found.gamma);
        for (part, a, b) in [
            ("mat_b", &self.mat_b, &found.mat_b),
            ("mat_r", &self.mat_r, &found.mat_r),
        ] {
            let d = a.len().max(b.len());
            for i in 0..d {
                for j in 0..d {
                    let get = |m: &Vec<Vec<Poly>>| {
                        m.get(i).and_then(|r| r.get(j)).cloned().unwrap_or_default()
                    };
                    let (x, y) = (get(a), get(b));
                    if x != y {
                        out.push(EntryDiff {
                            part,
                            row: i + 1,
                            col: Some(j + 1),
                            expected: x,
                            found: y,
                        });
                    }
                }
            }
        }
        out
    }
}

fn dot(a: &[Poly], b: &[Poly]) -> Poly {
    let mut acc = Poly::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc.add_scaled(x, y);
        }
    }
    acc
}

/// A representation specialized at a numeric point, stored as sparse
/// triplets per letter.
#[derive(Debug, Clone, PartialEq)]
pub struct NumericRep<T> {
    pub dim: usize,
    pub lambda: Vec<T>,
    pub gamma: Vec<T>,
    pub entries: [Vec<(usize, usize, T)>; 2],
}

impl<T: Scalar> NumericRep<T> {
    /// `out = v μ(c)`.
    pub fn step_row(&self, v: &[T], c: Colour, out: &mut [T]) {
        out.iter_mut().for_each(|o| *o = T::zero());
        for (i, j, m) in &self.entries[c as usize] {
            out[*j] = out[*j].clone() + v[*i].clone() * m.clone();
        }
    }

    /// `out = μ(c) t`.
    pub fn step_col(&self, c: Colour, t: &[T], out: &mut [T]) {
        out.iter_mut().for_each(|o| *o = T::zero());
        for (i, j, m) in &self.entries[c as usize] {
            out[*i] = out[*i].clone() + m.clone() * t[*j].clone();
        }
    }

    pub fn coefficient(&self, word: &Word) -> Result<T> {
        if word.is_empty() {
            return Err(Error::EmptyWord);
        }
        let mut v = self.lambda.clone();
        let mut next = vec![T::zero(); self.dim];
        for &c in word.letters() {
            self.step_row(&v, c, &mut next);
            std::mem::swap(&mut v, &mut next);
        }
        Ok(self.finish(&v))
    }

    /// `v γ` for a row vector `v`.
    pub fn finish(&self, v: &[T]) -> T {
        v.iter()
            .zip(&self.gamma)
            .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
    }
}

impl NumericRep<BigRational> {
    /// Integer version; fails if any entry is not an integer.
    pub fn to_integer(&self) -> Result<IntegerRep> {
        let conv = |x: &BigRational| {
            if x.is_integer() {
                Ok(x.to_integer())
            } else {
                Err(Error::InvalidArgument(format!(
                    "entry {x} is not an integer"
                )))
            }
        };
        let vec = |v: &[BigRational]| v.iter().map(conv).collect::<Result<Vec<_>>>();
        let ent = |e: &[(usize, usize, BigRational)]| {
            e.iter()
                .map(|(i, j, x)| conv(x).map(|x| (*i, *j, x)))
                .collect::<Result<Vec<_>>>()
        };
        Ok(IntegerRep {
            dim: self.dim,
            lambda: vec(&self.lambda)?,
            gamma: vec(&self.gamma)?,
            entries: [ent(&self.entries[0])?, ent(&self.entries[1])?],
        })
    }
}

/// Integer-valued specialization, e.g. at `b3 = r3 = y = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegerRep {
    pub dim: usize,
    pub lambda: Vec<BigInt>,
    pub gamma: Vec<BigInt>,
    pub entries: [Vec<(usize, usize, BigInt)>; 2],
}

impl IntegerRep {
    pub fn coefficient(&self, word: &Word) -> Result<BigInt> {
        if word.is_empty() {
            return Err(Error::EmptyWord);
        }
        let mut v = self.lambda.clone();
        for &c in word.letters() {
            let mut next = vec![BigInt::zero(); self.dim];
            for (i, j, m) in &self.entries[c as usize] {
                if !v[*i].is_zero() {
                    next[*j] += &v[*i] * m;
                }
            }
            v = next;
        }
        Ok(v.iter().zip(&self.gamma).map(|(a, b)| a * b).sum())
    }
}

const D1: usize = 19;

fn table(entries: &[(usize, usize, Poly)]) -> Vec<Vec<Poly>> {
    let mut m = vec![vec![Poly::zero(); D1]; D1];
    for (i, j, p) in entries {
        m[i - 1][j - 1] = p.clone();
    }
    m
}

fn b3y() -> Poly {
    Poly::b3() * Poly::y()
}

fn r3y() -> Poly {
    Poly::r3() * Poly::y()
}

/// `μ₁(b) = B₁`. Row `k` holds the expansion of `b^{-1}(S_k P*)` over the
/// reduced basis `S_1 P*, ..., S_19 P*`.
pub fn matrix_b1() -> Vec<Vec<Poly>> {
    let one = Poly::one;
    let mut e = Vec::new();
    for row in [1, 2, 12] {
        e.extend([(row, 1, one()), (row, 5, Poly::b3()), (row, 15, b3y())]);
    }
    e.extend([
        (2, 2, Poly::y()),
        (4, 4, Poly::y()),
        (5, 1, one()),
        (6, 2, one()),
        (7, 4, one()),
        (13, 1, one()),
        (16, 3, one()),
        (17, 14, one()),
        (18, 15, one()),
        (19, 5, one()),
    ]);
    table(&e)
}

/// `μ₁(r) = R₁`.
pub fn matrix_r1() -> Vec<Vec<Poly>> {
    let one = Poly::one;
    let mut e = Vec::new();
    for row in [1, 2, 12] {
        e.extend([(row, 1, one()), (row, 3, Poly::r3()), (row, 7, r3y())]);
    }
    e.extend([
        (3, 1, one()),
        (4, 1, one()),
        (8, 5, one()),
        (9, 6, one()),
        (10, 7, one()),
        (11, 3, one()),
        (12, 12, Poly::y()),
        (13, 13, Poly::y()),
        (14, 12, one()),
        (15, 13, one()),
    ]);
    table(&e)
}

/// `λ₁ = (1, 0, -1, 0, 0, 0, 0, 0, 0, -r3 y, -r3, 0, ..., 0)`.
pub fn lambda1() -> Vec<Poly> {
    let mut v = vec![Poly::zero(); D1];
    v[0] = Poly::one();
    v[2] = Poly::constant(-1);
    v[9] = -r3y();
    v[10] = -Poly::r3();
    v
}

/// `γ₁` has ones at positions 1, 2 and 12: the basis elements with constant
/// term `1`.
pub fn gamma1() -> Vec<Poly> {
    let mut v = vec![Poly::zero(); D1];
    for k in [1, 2, 12] {
        v[k - 1] = Poly::one();
    }
    v
}

/// The 19-dimensional representation of `S_b`.
pub fn builtin_rep_sb() -> LinRep {
    LinRep::new(lambda1(), matrix_b1(), matrix_r1(), gamma1()).expect("19x19 data")
}

/// The representation of `S_r`: `μ₂(b) = R₁(r3 ↦ b3)`, `μ₂(r) = B₁(b3 ↦ r3)`,
/// `λ₂ = λ₁(r3 ↦ b3)`, `γ₂ = γ₁`.
pub fn builtin_rep_sr() -> LinRep {
    let subst = |m: Vec<Vec<Poly>>, f: fn(&Poly) -> Poly| {
        m.into_iter()
            .map(|row| row.iter().map(f).collect())
            .collect::<Vec<_>>()
    };
    LinRep::new(
        lambda1().iter().map(Poly::r3_to_b3).collect(),
        subst(matrix_r1(), Poly::r3_to_b3),
        subst(matrix_b1(), Poly::b3_to_r3),
        gamma1(),
    )
    .expect("19x19 data")
}

/// The 38-dimensional representation of `S_b + S_r`; its coefficient on a
/// nonempty word is the census of that word.
pub fn builtin_rep_sum() -> LinRep {
    builtin_rep_sb().direct_sum(&builtin_rep_sr())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chdc::census;
    use crate::poly::Monomial;
    use crate::word::w;
    use proptest::prelude::*;

    #[test]
    fn appendix_entries() {
        let rep = builtin_rep_sb();
        assert_eq!(rep.dim(), 19);
        let b1 = rep.mat(Colour::Blue);
        assert_eq!(b1[0][4], Poly::b3());
        assert_eq!(b1[0][14], b3y());
        let r1 = rep.mat(Colour::Red);
        assert_eq!(r1[0][2], Poly::r3());
        assert_eq!(r1[0][6], r3y());
        let l = rep.lambda();
        assert_eq!(l[0], Poly::one());
        assert_eq!(l[2], Poly::constant(-1));
        assert_eq!(l[9], -r3y());
        assert_eq!(l[10], -Poly::r3());
        assert_eq!(l.iter().filter(|p| !p.is_zero()).count(), 4);
    }

    #[test]
    fn sr_substitution() {
        let sr = builtin_rep_sr();
        assert_eq!(sr.mat(Colour::Red)[0][4], Poly::r3());
        assert_eq!(sr.mat(Colour::Blue)[0][2], Poly::b3());
        assert_eq!(sr.gamma(), gamma1().as_slice());
        let sb = builtin_rep_sb();
        assert_eq!(
            sr.coefficient(&w("rb")).unwrap(),
            sb.coefficient(&w("br")).unwrap().swap_colours()
        );
    }

    #[test]
    fn sum_examples() {
        let rep = builtin_rep_sum();
        assert_eq!(rep.dim(), 38);
        assert_eq!(rep.coefficient(&w("b")).unwrap(), Poly::one());
        assert_eq!(rep.coefficient(&w("r")).unwrap(), Poly::one());
        assert_eq!(rep.coefficient(&w("bb")).unwrap(), Poly::one() + Poly::b3());
        for c in Colour::ALL {
            let m = rep.mat(c);
            for (i, row) in m.iter().enumerate() {
                for (j, e) in row.iter().enumerate() {
                    if (i < 19) != (j < 19) {
                        assert!(e.is_zero());
                    }
                }
            }
        }
        let fig = rep.coefficient(&w("rbrrbrbbrbrb")).unwrap();
        assert_eq!(fig, census(&w("rbrrbrbbrbrb")).unwrap());
        assert!(!fig.coeff(&Monomial::new(2, 1, 3)).is_zero());
    }

    #[test]
    fn sb_support_and_empty_word() {
        let sb = builtin_rep_sb();
        assert_eq!(sb.coefficient(&w("b")).unwrap(), Poly::one());
        assert!(sb.coefficient(&w("rb")).unwrap().is_zero());
        assert_eq!(sb.coefficient(&Word::empty()), Err(Error::EmptyWord));
    }

    #[test]
    fn matches_census_up_to_ten() {
        let rep = builtin_rep_sum();
        let sb = builtin_rep_sb();
        let sr = builtin_rep_sr();
        for x in Word::all_up_to(10) {
            let c = census(&x).unwrap();
            assert_eq!(rep.coefficient(&x).unwrap(), c, "{x}");
            let (own, other) = match x.first().unwrap() {
                Colour::Blue => (&sb, &sr),
                Colour::Red => (&sr, &sb),
            };
            assert_eq!(own.coefficient(&x).unwrap(), c);
            assert!(other.coefficient(&x).unwrap().is_zero());
        }
    }

    #[test]
    fn numeric_and_integer_specializations() {
        let rep = builtin_rep_sum();
        let x = w("brbbrrbrbbrb");
        let c = census(&x).unwrap();
        let pt = EvalPoint::integer(2, -3, 5);
        assert_eq!(rep.specialize(&pt).coefficient(&x).unwrap(), c.eval(&pt));
        let f = rep.specialize(&pt.to_f64()).coefficient(&x).unwrap();
        assert!(
            (f - num_traits::ToPrimitive::to_f64(&c.eval(&pt)).unwrap()).abs() < 1e-6 * f.abs()
        );
        let int = rep
            .specialize(&EvalPoint::<BigRational>::ones())
            .to_integer()
            .unwrap();
        assert_eq!(int.coefficient(&x).unwrap(), c.eval_ones_integer().unwrap());
    }

    #[test]
    fn diff_reports_positions() {
        let a = builtin_rep_sb();
        let mut b_mat = matrix_b1();
        b_mat[3][3] = Poly::b3();
        let b = LinRep::new(lambda1(), b_mat, matrix_r1(), gamma1()).unwrap();
        let d = a.diff(&b);
        assert_eq!(d.len(), 1);
        assert_eq!((d[0].part, d[0].row, d[0].col), ("mat_b", 4, Some(4)));
        assert!(a.diff(&a).is_empty());
    }

    fn arb_word(lo: usize, hi: usize) -> impl Strategy<Value = Word> {
        prop::collection::vec(prop::bool::ANY, lo..=hi).prop_map(|v| {
            v.into_iter()
                .map(|r| if r { Colour::Red } else { Colour::Blue })
                .collect()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn chunked_products_agree(x in arb_word(1, 10), y in arb_word(0, 10)) {
            let rep = builtin_rep_sum();
            let left = rep.row_vector(&x);
            let right = rep.column_vector(&y);
            prop_assert_eq!(dot(&left, &right), rep.coefficient(&x.concat(&y)).unwrap());
        }
    }
}
