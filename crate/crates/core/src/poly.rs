//! Laurent polynomials with integer coefficients in one variable.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// Sparse Laurent polynomial `Σ c_e x^e`; zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Laurent {
    terms: BTreeMap<i64, i64>,
}

impl Laurent {
    pub fn zero() -> Self {
        Laurent::default()
    }

    pub fn one() -> Self {
        Laurent::monomial(1, 0)
    }

    pub fn monomial(coeff: i64, exp: i64) -> Self {
        let mut p = Laurent::zero();
        p.add_term(coeff, exp);
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i64, i64)>) -> Self {
        let mut p = Laurent::zero();
        for (e, c) in terms {
            p.add_term(c, e);
        }
        p
    }

    pub fn add_term(&mut self, coeff: i64, exp: i64) {
        if coeff == 0 {
            return;
        }
        let c = self.terms.entry(exp).or_insert(0);
        *c += coeff;
        if *c == 0 {
            self.terms.remove(&exp);
        }
    }

    pub fn coeff(&self, exp: i64) -> i64 {
        self.terms.get(&exp).copied().unwrap_or(0)
    }

    /// `(exponent, coefficient)` pairs in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.terms.iter().map(|(&e, &c)| (e, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// Substitutes `x -> x^k` (`k` may be negative).
    pub fn substitute_power(&self, k: i64) -> Self {
        Laurent::from_terms(self.terms().map(|(e, c)| (e * k, c)))
    }

    pub fn shift(&self, by: i64) -> Self {
        Laurent::from_terms(self.terms().map(|(e, c)| (e + by, c)))
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Laurent::one(), |acc, _| &acc * self)
    }

    /// Value at a primitive fourth root of unity `i`, as `(re, im)`.
    pub fn eval_i(&self) -> (i64, i64) {
        let (mut re, mut im) = (0, 0);
        for (e, c) in self.terms() {
            match e.rem_euclid(4) {
                0 => re += c,
                1 => im += c,
                2 => re -= c,
                _ => im -= c,
            }
        }
        (re, im)
    }

    pub fn eval_at_one(&self) -> i64 {
        self.terms.values().sum()
    }

    /// Exact division over the integers. Returns `None` when the division
    /// leaves a remainder or `d` is zero.
    pub fn div_exact(&self, d: &Laurent) -> Option<Laurent> {
        let (dl, dc) = d.terms().next()?;
        let dmax = d.max_exp()?;
        let mut rem = self.clone();
        let mut q = Laurent::zero();
        while let Some((&e, &c)) = rem.terms.first_key_value() {
            if rem.max_exp()? - e < dmax - dl {
                return None;
            }
            if c % dc != 0 {
                return None;
            }
            let m = Laurent::monomial(c / dc, e - dl);
            rem = &rem - &(&m * d);
            q = &q + &m;
        }
        Some(q)
    }

    pub fn display_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (k, (e, c)) in self.terms().enumerate() {
            let sign = if c < 0 {
                "-"
            } else if k > 0 {
                "+"
            } else {
                ""
            };
            if k > 0 {
                s.push(' ');
            }
            s.push_str(sign);
            if k > 0 {
                s.push(' ');
            }
            let a = c.abs();
            match e {
                0 => s.push_str(&a.to_string()),
                _ => {
                    if a != 1 {
                        s.push_str(&a.to_string());
                    }
                    s.push_str(var);
                    if e != 1 {
                        s.push_str(&format!("^{e}"));
                    }
                }
            }
        }
        s
    }
}

impl fmt::Display for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in("x"))
    }
}

impl Add for &Laurent {
    type Output = Laurent;
    fn add(self, rhs: &Laurent) -> Laurent {
        let mut p = self.clone();
        for (e, c) in rhs.terms() {
            p.add_term(c, e);
        }
        p
    }
}

impl Sub for &Laurent {
    type Output = Laurent;
    fn sub(self, rhs: &Laurent) -> Laurent {
        self + &(-rhs)
    }
}

impl Neg for &Laurent {
    type Output = Laurent;
    fn neg(self) -> Laurent {
        Laurent::from_terms(self.terms().map(|(e, c)| (e, -c)))
    }
}

impl Mul for &Laurent {
    type Output = Laurent;
    fn mul(self, rhs: &Laurent) -> Laurent {
        let mut p = Laurent::zero();
        for (e1, c1) in self.terms() {
            for (e2, c2) in rhs.terms() {
                p.add_term(c1 * c2, e1 + e2);
            }
        }
        p
    }
}

#[cfg(test)]
mod tests {
    use super::Laurent;

    #[test]
    fn arithmetic() {
        let a = Laurent::from_terms([(-1, 1), (1, 1)]);
        let sq = a.pow(2);
        assert_eq!(sq, Laurent::from_terms([(-2, 1), (0, 2), (2, 1)]));
        assert_eq!((&sq - &sq), Laurent::zero());
        assert_eq!(sq.div_exact(&a), Some(a.clone()));
        assert_eq!(Laurent::monomial(1, 1).div_exact(&a), None);
        assert_eq!(
            a.substitute_power(-2),
            Laurent::from_terms([(2, 1), (-2, 1)])
        );
        assert_eq!(
            Laurent::from_terms([(0, 1), (1, 2), (2, 3)]).eval_i(),
            (-2, 2)
        );
    }

    #[test]
    fn division_with_non_unit_coefficients() {
        let a = Laurent::from_terms([(0, 2), (1, -3), (2, 2)]);
        let b = Laurent::from_terms([(-1, 3), (0, 1)]);
        assert_eq!((&a * &b).div_exact(&a), Some(b.clone()));
        assert_eq!((&a * &b).div_exact(&b), Some(a.clone()));
        assert_eq!(a.div_exact(&Laurent::monomial(2, 0)), None);
        assert_eq!(a.div_exact(&Laurent::zero()), None);
    }

    #[test]
    fn display() {
        let p = Laurent::from_terms([(-2, -1), (0, 1), (3, 2)]);
        assert_eq!(p.display_in("q"), "-q^-2 + 1 + 2q^3");
        assert_eq!(Laurent::zero().to_string(), "0");
    }
}
