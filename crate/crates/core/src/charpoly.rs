use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::exactlin::{format_rational, q, Rational};
use crate::poset::Lattice;

/// Dense polynomial with rational coefficients; `coeffs[k]` multiplies `t^k`.
/// Trailing zeros are trimmed, so equality is structural.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct CharPoly {
    coeffs: Vec<Rational>,
}

impl CharPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        CharPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| q(c)).collect())
    }

    pub fn zero() -> Self {
        CharPoly { coeffs: Vec::new() }
    }

    /// `t^k`.
    pub fn monomial(k: usize) -> Self {
        let mut c = vec![Rational::zero(); k + 1];
        c[k] = Rational::one();
        CharPoly { coeffs: c }
    }

    /// `prod (t - r)` over the given integer roots.
    pub fn from_roots(roots: &[i64]) -> Self {
        roots.iter().fold(CharPoly::from_i64(&[1]), |acc, &r| acc.mul(&CharPoly::from_i64(&[-r, 1])))
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Adds `c * t^k`.
    pub fn add_term(&mut self, k: usize, c: &Rational) {
        if self.coeffs.len() <= k {
            self.coeffs.resize(k + 1, Rational::zero());
        }
        self.coeffs[k] += c;
        *self = CharPoly::new(std::mem::take(&mut self.coeffs));
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        self.coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * t + c)
    }

    /// Formal `k`-th derivative.
    pub fn derivative(&self, k: usize) -> CharPoly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(k)
            .map(|(n, c)| {
                let falling: BigInt = ((n - k + 1)..=n).map(BigInt::from).product();
                c * Rational::from_integer(falling)
            })
            .collect();
        CharPoly::new(coeffs)
    }

    /// `p^{(k)}(1)`.
    pub fn derivative_at_one(&self, k: usize) -> Rational {
        self.derivative(k).eval(&Rational::one())
    }

    pub fn mul(&self, other: &CharPoly) -> CharPoly {
        if self.is_zero() || other.is_zero() {
            return CharPoly::zero();
        }
        let mut c = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        CharPoly::new(c)
    }

    pub fn add(&self, other: &CharPoly) -> CharPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        CharPoly::new((0..n).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn neg(&self) -> CharPoly {
        CharPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, other: &CharPoly) -> CharPoly {
        self.add(&other.neg())
    }

    /// `p(t + a)`.
    pub fn shift(&self, a: i64) -> CharPoly {
        let lin = CharPoly::from_i64(&[a, 1]);
        self.coeffs.iter().rev().fold(CharPoly::zero(), |acc, c| acc.mul(&lin).add(&CharPoly::new(vec![c.clone()])))
    }

    /// `(1 + q)^n`.
    pub fn one_plus_q_pow(n: usize) -> CharPoly {
        (0..n).fold(CharPoly::from_i64(&[1]), |acc, _| acc.mul(&CharPoly::from_i64(&[1, 1])))
    }

    /// Renders with the given variable name, highest degree first.
    pub fn render(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = match k {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{k}"),
            };
            if mono.is_empty() || !mag.is_one() {
                out.push_str(&format_rational(&mag));
            }
            out.push_str(&mono);
        }
        out
    }
}

impl fmt::Display for CharPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("t"))
    }
}

impl fmt::Debug for CharPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CharPoly({})", self.render("t"))
    }
}

impl Serialize for CharPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<String> = self.coeffs.iter().map(format_rational).collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CharPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v: Vec<String> = Vec::deserialize(d)?;
        let coeffs = v
            .iter()
            .map(|s| crate::exactlin::parse_rational(s).map_err(serde::de::Error::custom))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(CharPoly::new(coeffs))
    }
}

/// `Σ_x μ(0,x) t^{dim(x)}` for an arbitrary dimension function.
pub fn char_poly_of_dims(l: &Lattice, dim: impl Fn(usize) -> usize) -> CharPoly {
    let mu = l.mobius_from_bottom();
    let mut p = CharPoly::zero();
    for (x, &m) in mu.iter().enumerate() {
        if m != 0 {
            p.add_term(dim(x), &q(m));
        }
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivatives_at_one() {
        for n in 0..6usize {
            let p = CharPoly::from_roots(&vec![1; n]);
            let fact: i64 = (1..=n as i64).product();
            assert_eq!(p.derivative_at_one(n), q(fact));
        }
        let p = CharPoly::from_roots(&[1, 2]);
        assert_eq!(p.derivative_at_one(0), q(0));
        assert_eq!(p.derivative_at_one(1), q(-1));
        assert_eq!(p.derivative_at_one(2), q(2));
        assert_eq!(p.derivative_at_one(3), q(0));
    }

    #[test]
    fn shift_and_render() {
        let p = CharPoly::from_roots(&[1, 2]);
        assert_eq!(p.render("t"), "t^2 - 3t + 2");
        assert_eq!(p.shift(1), CharPoly::from_i64(&[0, -1, 1]));
        assert_eq!(CharPoly::one_plus_q_pow(2), CharPoly::from_i64(&[1, 2, 1]));
        assert_eq!(CharPoly::zero().render("q"), "0");
        assert_eq!(CharPoly::from_i64(&[-1]).render("q"), "-1");
    }

    #[test]
    fn json_round_trip() {
        let p = CharPoly::new(vec![q(2), Rational::new(1.into(), 3.into()), q(-1)]);
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"["2","1/3","-1"]"#);
        assert_eq!(serde_json::from_str::<CharPoly>(&s).unwrap(), p);
    }
}
