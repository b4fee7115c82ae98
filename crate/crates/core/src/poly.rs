//! Sparse Laurent polynomials in `s` and `t` with integer coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Var {
    S,
    T,
}

/// Exponent pair `(e_s, e_t)`.
pub type Exponent = (i32, i32);

/// Substitutions available through [`LaurentPoly::transform`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Action {
    /// `var -> var^-1`.
    Invert(Var),
    /// `var^k -> 0` for `k != 0`, `var^0 -> 1`.
    Kill(Var),
    /// `var -> 1`.
    EvalOne(Var),
    /// `s <-> t`.
    Swap,
}

/// Invariant: no stored coefficient is zero.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    terms: BTreeMap<Exponent, i64>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: i64) -> Self {
        Self::monomial(0, 0, c)
    }

    pub fn monomial(e_s: i32, e_t: i32, coeff: i64) -> Self {
        let mut p = Self::zero();
        p.add_term((e_s, e_t), coeff);
        p
    }

    pub fn s() -> Self {
        Self::monomial(1, 0, 1)
    }

    pub fn t() -> Self {
        Self::monomial(0, 1, 1)
    }

    /// `t^e`
    pub fn t_pow(e: i32) -> Self {
        Self::monomial(0, e, 1)
    }

    /// `s^e`
    pub fn s_pow(e: i32) -> Self {
        Self::monomial(e, 0, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e_s: i32, e_t: i32) -> i64 {
        self.terms.get(&(e_s, e_t)).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (Exponent, i64)> + '_ {
        self.terms.iter().map(|(&e, &c)| (e, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn add_term(&mut self, e: Exponent, c: i64) {
        if c == 0 {
            return;
        }
        let entry = self.terms.entry(e).or_insert(0);
        *entry += c;
        if *entry == 0 {
            self.terms.remove(&e);
        }
    }

    /// Sum of all coefficients (the value at `s = t = 1`).
    pub fn coeff_sum(&self) -> i64 {
        self.terms.values().sum()
    }

    /// Rewrites every exponent pair through `f`, collecting like terms.
    pub fn map_exponents(&self, f: impl Fn(Exponent) -> Exponent) -> Self {
        let mut out = Self::zero();
        for (&e, &c) in &self.terms {
            out.add_term(f(e), c);
        }
        out
    }

    pub fn transform(&self, action: Action) -> Self {
        match action {
            Action::Invert(Var::S) => self.map_exponents(|(a, b)| (-a, b)),
            Action::Invert(Var::T) => self.map_exponents(|(a, b)| (a, -b)),
            Action::EvalOne(Var::S) => self.map_exponents(|(_, b)| (0, b)),
            Action::EvalOne(Var::T) => self.map_exponents(|(a, _)| (a, 0)),
            Action::Swap => self.map_exponents(|(a, b)| (b, a)),
            Action::Kill(var) => {
                let mut out = Self::zero();
                for (&(a, b), &c) in &self.terms {
                    let killed = match var {
                        Var::S => a != 0,
                        Var::T => b != 0,
                    };
                    if !killed {
                        out.add_term((a, b), c);
                    }
                }
                out
            }
        }
    }

    pub fn scale(&self, k: i64) -> Self {
        let mut out = Self::zero();
        if k != 0 {
            for (&e, &c) in &self.terms {
                out.add_term(e, c * k);
            }
        }
        out
    }

    /// Multiplies by `s^a t^b`.
    pub fn shift(&self, a: i32, b: i32) -> Self {
        self.map_exponents(|(x, y)| (x + a, y + b))
    }
}

/// Applies `op` to a pair of polynomials.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    Add,
    Sub,
    Mul,
}

pub fn combine(op: Op, p: &LaurentPoly, q: &LaurentPoly) -> LaurentPoly {
    match op {
        Op::Add => p + q,
        Op::Sub => p - q,
        Op::Mul => p * q,
    }
}

impl<'a> Add<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<'a> Sub<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<'a> Mul<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (&(a1, b1), &c1) in &self.terms {
            for (&(a2, b2), &c2) in &rhs.terms {
                out.add_term((a1 + a2, b1 + b2), c1 * c2);
            }
        }
        out
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(mut self, rhs: LaurentPoly) -> LaurentPoly {
        self += &rhs;
        self
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;
    fn sub(mut self, rhs: LaurentPoly) -> LaurentPoly {
        self -= &rhs;
        self
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: LaurentPoly) -> LaurentPoly {
        &self * &rhs
    }
}

impl AddAssign<&LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, rhs: &LaurentPoly) {
        for (&e, &c) in &rhs.terms {
            self.add_term(e, c);
        }
    }
}

impl SubAssign<&LaurentPoly> for LaurentPoly {
    fn sub_assign(&mut self, rhs: &LaurentPoly) {
        for (&e, &c) in &rhs.terms {
            self.add_term(e, -c);
        }
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.scale(-1)
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.scale(-1)
    }
}

impl std::iter::Sum for LaurentPoly {
    fn sum<I: Iterator<Item = LaurentPoly>>(iter: I) -> Self {
        iter.fold(LaurentPoly::zero(), |acc, p| acc + p)
    }
}

fn print_order(e: &Exponent) -> (i64, i32, i32) {
    (e.0.unsigned_abs() as i64 + e.1.unsigned_abs() as i64, e.0, e.1)
}

fn var_power(name: char, e: i32) -> Option<String> {
    match e {
        0 => None,
        1 => Some(name.to_string()),
        _ => Some(format!("{name}^{e}")),
    }
}

/// Canonical text: terms ordered by total absolute degree, then by `(e_s, e_t)`,
/// e.g. `-2 + t^-1 + t`. The zero polynomial prints as `0`.
impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut terms: Vec<(Exponent, i64)> = self.terms().collect();
        terms.sort_by_key(|(e, _)| print_order(e));
        for (i, ((a, b), c)) in terms.into_iter().enumerate() {
            let vars: Vec<String> = [var_power('s', a), var_power('t', b)].into_iter().flatten().collect();
            let mag = c.unsigned_abs();
            let body = match (vars.is_empty(), mag) {
                (true, _) => mag.to_string(),
                (false, 1) => vars.join("*"),
                (false, _) => format!("{mag}*{}", vars.join("*")),
            };
            match (i, c < 0) {
                (0, false) => write!(f, "{body}")?,
                (0, true) => write!(f, "-{body}")?,
                (_, false) => write!(f, " + {body}")?,
                (_, true) => write!(f, " - {body}")?,
            }
        }
        Ok(())
    }
}
