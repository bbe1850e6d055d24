//! Sparse polynomials in `K = Q[b3, r3, y]`.
//!
//! `b3` marks a blue dimer, `r3` a red dimer and `y` an inner vertex, so the
//! monomial `b3^i r3^j y^k` carries the type triple `(i, j, k)`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Exponents of `(b3, r3, y)`. Ordered lexicographically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial {
    pub i: u32,
    pub j: u32,
    pub k: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { i: 0, j: 0, k: 0 };
    pub const B3: Monomial = Monomial { i: 1, j: 0, k: 0 };
    pub const R3: Monomial = Monomial { i: 0, j: 1, k: 0 };
    pub const Y: Monomial = Monomial { i: 0, j: 0, k: 1 };

    pub fn new(i: u32, j: u32, k: u32) -> Self {
        Monomial { i, j, k }
    }

    pub fn degree(&self) -> u32 {
        self.i + self.j + self.k
    }

    /// Divides `self` by `other` if `other` divides it.
    pub fn checked_div(&self, other: &Monomial) -> Option<Monomial> {
        Some(Monomial {
            i: self.i.checked_sub(other.i)?,
            j: self.j.checked_sub(other.j)?,
            k: self.k.checked_sub(other.k)?,
        })
    }
}

impl Mul for Monomial {
    type Output = Monomial;
    fn mul(self, o: Monomial) -> Monomial {
        Monomial::new(self.i + o.i, self.j + o.j, self.k + o.k)
    }
}

/// Numeric types a [`Poly`] can be evaluated in.
pub trait Scalar:
    Clone
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn from_rational(r: &BigRational) -> Self;
}

impl Scalar for f64 {
    fn from_rational(r: &BigRational) -> Self {
        r.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for BigRational {
    fn from_rational(r: &BigRational) -> Self {
        r.clone()
    }
}

/// Values substituted for `b3 -> u`, `r3 -> v`, `y -> w`.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalPoint<T> {
    pub u: T,
    pub v: T,
    pub w: T,
}

impl<T> EvalPoint<T> {
    pub fn new(u: T, v: T, w: T) -> Self {
        EvalPoint { u, v, w }
    }
}

impl<T: Scalar> EvalPoint<T> {
    pub fn ones() -> Self {
        EvalPoint::new(T::one(), T::one(), T::one())
    }

    /// The point with `u` and `v` exchanged.
    pub fn swapped(&self) -> Self {
        EvalPoint::new(self.v.clone(), self.u.clone(), self.w.clone())
    }
}

impl EvalPoint<BigRational> {
    pub fn integer(u: i64, v: i64, w: i64) -> Self {
        let q = |x: i64| BigRational::from_integer(BigInt::from(x));
        EvalPoint::new(q(u), q(v), q(w))
    }

    pub fn to_f64(&self) -> EvalPoint<f64> {
        EvalPoint::new(
            f64::from_rational(&self.u),
            f64::from_rational(&self.v),
            f64::from_rational(&self.w),
        )
    }
}

/// Sparse polynomial with exact rational coefficients. Never stores a zero
/// coefficient, so structural equality is polynomial equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, BigRational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(1)
    }

    pub fn constant(c: i64) -> Self {
        Poly::term(c, Monomial::ONE)
    }

    pub fn b3() -> Self {
        Poly::term(1, Monomial::B3)
    }

    pub fn r3() -> Self {
        Poly::term(1, Monomial::R3)
    }

    pub fn y() -> Self {
        Poly::term(1, Monomial::Y)
    }

    pub fn y_pow(k: u32) -> Self {
        Poly::term(1, Monomial::new(0, 0, k))
    }

    pub fn term(c: i64, m: Monomial) -> Self {
        Poly::from_rational_term(BigRational::from_integer(c.into()), m)
    }

    pub fn from_rational_term(c: BigRational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    /// Builds a polynomial from (monomial, integer multiplicity) pairs,
    /// merging repeated monomials.
    pub fn from_counts<I: IntoIterator<Item = (Monomial, u64)>>(it: I) -> Self {
        let mut p = Poly::zero();
        for (m, c) in it {
            p.add_term(m, BigRational::from_integer(c.into()));
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&Monomial::ONE).is_some_and(|c| c.is_one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn constant_term(&self) -> BigRational {
        self.coeff(&Monomial::ONE)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// `self += factor * other` without materializing the product.
    pub fn add_scaled(&mut self, other: &Poly, factor: &Poly) {
        for (mf, cf) in &factor.terms {
            for (mo, co) in &other.terms {
                self.add_term(*mf * *mo, cf * co);
            }
        }
    }

    pub fn mul_monomial(&self, m: Monomial) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (*k * m, c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    /// Applies a monomial substitution; colliding images are merged.
    pub fn map_monomials(&self, f: impl Fn(Monomial) -> Monomial) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            out.add_term(f(*m), c.clone());
        }
        out
    }

    /// `b3 <-> r3`.
    pub fn swap_colours(&self) -> Poly {
        self.map_monomials(|m| Monomial::new(m.j, m.i, m.k))
    }

    /// `b3 -> r3`.
    pub fn b3_to_r3(&self) -> Poly {
        self.map_monomials(|m| Monomial::new(0, m.i + m.j, m.k))
    }

    /// `r3 -> b3`.
    pub fn r3_to_b3(&self) -> Poly {
        self.map_monomials(|m| Monomial::new(m.i + m.j, 0, m.k))
    }

    pub fn eval<T: Scalar>(&self, at: &EvalPoint<T>) -> T {
        let mut acc = T::zero();
        for (m, c) in &self.terms {
            let mut t = T::from_rational(c);
            t = t * pow(&at.u, m.i) * pow(&at.v, m.j) * pow(&at.w, m.k);
            acc = acc + t;
        }
        acc
    }

    /// Sum of coefficients when every coefficient is an integer.
    pub fn eval_ones_integer(&self) -> Option<BigInt> {
        let mut acc = BigInt::zero();
        for c in self.terms.values() {
            if !c.is_integer() {
                return None;
            }
            acc += c.to_integer();
        }
        Some(acc)
    }

    /// Canonical JSON entries, in monomial order.
    pub fn to_entries(&self) -> Vec<PolyEntry> {
        self.terms
            .iter()
            .map(|(m, c)| PolyEntry {
                i: m.i,
                j: m.j,
                k: m.k,
                c: c.to_string(),
            })
            .collect()
    }
}

fn pow<T: Scalar>(x: &T, e: u32) -> T {
    let mut acc = T::one();
    for _ in 0..e {
        acc = acc * x.clone();
    }
    acc
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let mut out = self.clone();
        out += o;
        out
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(mut self, o: Poly) -> Poly {
        self += &o;
        self
    }
}

impl AddAssign<&Poly> for Poly {
    fn add_assign(&mut self, o: &Poly) {
        for (m, c) in &o.terms {
            self.add_term(*m, c.clone());
        }
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        self + &(-o)
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, o: Poly) -> Poly {
        &self - &o
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        let mut out = Poly::zero();
        out.add_scaled(o, self);
        out
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, o: Poly) -> Poly {
        &self * &o
    }
}

impl From<i64> for Poly {
    fn from(c: i64) -> Poly {
        Poly::constant(c)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            match (n, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mut factors = Vec::new();
            for (name, e) in [("b3", m.i), ("r3", m.j), ("y", m.k)] {
                match e {
                    0 => {}
                    1 => factors.push(name.to_string()),
                    _ => factors.push(format!("{name}^{e}")),
                }
            }
            if factors.is_empty() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{a}*{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

/// One term of the canonical JSON form: `{"i":..,"j":..,"k":..,"c":"p/q"}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyEntry {
    pub i: u32,
    pub j: u32,
    pub k: u32,
    pub c: String,
}

impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_entries().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let entries = Vec::<PolyEntry>::deserialize(d)?;
        let mut p = Poly::zero();
        for e in entries {
            let c: BigRational =
                e.c.parse()
                    .map_err(|_| serde::de::Error::custom(format!("bad rational {:?}", e.c)))?;
            p.add_term(Monomial::new(e.i, e.j, e.k), c);
        }
        Ok(p)
    }
}
