//! Sparse bivariate polynomials in `u`, `v` with exact rational coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num::{BigInt, BigRational, One, Signed, Zero};

use crate::error::{Error, Result};

/// `(deg_u, deg_v) ↦ coefficient`, never storing zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct BivarPoly {
    terms: BTreeMap<(u32, u32), BigRational>,
}

pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

impl BivarPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn from_int(c: i64) -> Self {
        Self::constant(rational(c, 1))
    }

    pub fn monomial(c: BigRational, du: u32, dv: u32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((du, dv), c);
        }
        BivarPoly { terms }
    }

    pub fn u() -> Self {
        Self::monomial(BigRational::one(), 1, 0)
    }

    pub fn v() -> Self {
        Self::monomial(BigRational::one(), 0, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &BigRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, du: u32, dv: u32) -> BigRational {
        self.terms.get(&(du, dv)).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|(a, b)| a + b).max()
    }

    pub fn is_univariate_in_u(&self) -> bool {
        self.terms.keys().all(|&(_, dv)| dv == 0)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        BivarPoly {
            terms: self.terms.iter().map(|(&k, x)| (k, x * c)).collect(),
        }
    }

    fn add_term(&mut self, key: (u32, u32), c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(key).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Replaces `u` by `p` and `v` by `q`.
    pub fn substitute(&self, p: &BivarPoly, q: &BivarPoly) -> Self {
        let mut out = Self::zero();
        for (&(du, dv), c) in &self.terms {
            out += &(&p.pow(du) * &q.pow(dv)).scale(c);
        }
        out
    }

    /// `p(u, v) ↦ p(v, u)`.
    pub fn swap_uv(&self) -> Self {
        BivarPoly {
            terms: self.terms.iter().map(|(&(a, b), c)| ((b, a), c.clone())).collect(),
        }
    }

    pub fn eval(&self, u: &BigRational, v: &BigRational) -> BigRational {
        self.terms.iter().fold(BigRational::zero(), |acc, (&(du, dv), c)| {
            acc + c * num::pow(u.clone(), du as usize) * num::pow(v.clone(), dv as usize)
        })
    }

    /// Parses sums of terms such as `u`, `2u^2`, `-1/3*u*v`, `3`.
    pub fn parse(text: &str) -> Result<Self> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::input("empty polynomial"));
        }
        let mut out = Self::zero();
        let mut rest = compact.as_str();
        while !rest.is_empty() {
            let (sign, body) = match rest.as_bytes()[0] {
                b'+' => (1, &rest[1..]),
                b'-' => (-1, &rest[1..]),
                _ => (1, rest),
            };
            let end = body.find(['+', '-']).unwrap_or(body.len());
            let (term, tail) = body.split_at(end);
            out += &Self::parse_term(term, sign, text)?;
            rest = tail;
        }
        Ok(out)
    }

    fn parse_term(term: &str, sign: i64, whole: &str) -> Result<Self> {
        let bad = || Error::input(format!("cannot parse polynomial '{whole}'"));
        if term.is_empty() {
            return Err(bad());
        }
        let mut coef = rational(sign, 1);
        let (mut du, mut dv) = (0u32, 0u32);
        for factor in term.split('*') {
            let digits_end = factor
                .find(|c: char| !(c.is_ascii_digit() || c == '/'))
                .unwrap_or(factor.len());
            let (number, vars) = factor.split_at(digits_end);
            if !number.is_empty() {
                let value = match number.split_once('/') {
                    Some((n, d)) => {
                        let d: i64 = d.parse().map_err(|_| bad())?;
                        if d == 0 {
                            return Err(bad());
                        }
                        rational(n.parse().map_err(|_| bad())?, d)
                    }
                    None => rational(number.parse().map_err(|_| bad())?, 1),
                };
                coef *= value;
            }
            let mut chars = vars.chars().peekable();
            while let Some(var) = chars.next() {
                let mut exp = 1u32;
                if chars.peek() == Some(&'^') {
                    chars.next();
                    let digits: String = std::iter::from_fn(|| chars.next_if(|c| c.is_ascii_digit())).collect();
                    exp = digits.parse().map_err(|_| bad())?;
                }
                match var {
                    'u' => du += exp,
                    'v' => dv += exp,
                    _ => return Err(bad()),
                }
            }
            if number.is_empty() && vars.is_empty() {
                return Err(bad());
            }
        }
        Ok(Self::monomial(coef, du, dv))
    }
}

impl AddAssign<&BivarPoly> for BivarPoly {
    fn add_assign(&mut self, rhs: &BivarPoly) {
        for (&k, c) in &rhs.terms {
            self.add_term(k, c.clone());
        }
    }
}

impl Add for &BivarPoly {
    type Output = BivarPoly;
    fn add(self, rhs: &BivarPoly) -> BivarPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for BivarPoly {
    type Output = BivarPoly;
    fn add(mut self, rhs: BivarPoly) -> BivarPoly {
        self += &rhs;
        self
    }
}

impl Neg for &BivarPoly {
    type Output = BivarPoly;
    fn neg(self) -> BivarPoly {
        BivarPoly {
            terms: self.terms.iter().map(|(&k, c)| (k, -c)).collect(),
        }
    }
}

impl Neg for BivarPoly {
    type Output = BivarPoly;
    fn neg(self) -> BivarPoly {
        -&self
    }
}

impl Sub for &BivarPoly {
    type Output = BivarPoly;
    fn sub(self, rhs: &BivarPoly) -> BivarPoly {
        self + &(-rhs)
    }
}

impl Sub for BivarPoly {
    type Output = BivarPoly;
    fn sub(self, rhs: BivarPoly) -> BivarPoly {
        &self - &rhs
    }
}

impl Mul for &BivarPoly {
    type Output = BivarPoly;
    fn mul(self, rhs: &BivarPoly) -> BivarPoly {
        let mut out = BivarPoly::zero();
        for (&(a1, b1), c1) in &self.terms {
            for (&(a2, b2), c2) in &rhs.terms {
                out.add_term((a1 + a2, b1 + b2), c1 * c2);
            }
        }
        out
    }
}

impl Mul for BivarPoly {
    type Output = BivarPoly;
    fn mul(self, rhs: BivarPoly) -> BivarPoly {
        &self * &rhs
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, du: u32, dv: u32) -> fmt::Result {
    let mut first = true;
    for (name, d) in [("u", du), ("v", dv)] {
        if d == 0 {
            continue;
        }
        if !first {
            f.write_str("*")?;
        }
        first = false;
        f.write_str(name)?;
        if d > 1 {
            write!(f, "^{d}")?;
        }
    }
    Ok(())
}

/// Highest total degree first, then by `u`-degree.
impl fmt::Display for BivarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut keys: Vec<&(u32, u32)> = self.terms.keys().collect();
        keys.sort_by_key(|&(i, j)| std::cmp::Reverse((i + j, i)));
        for (i, &&(du, dv)) in keys.iter().enumerate() {
            let c = &self.terms[&(du, dv)];
            if i == 0 {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            let mag = c.abs();
            let constant = du == 0 && dv == 0;
            if constant {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}*")?;
                }
                write_monomial(f, du, dv)?;
            }
        }
        Ok(())
    }
}
