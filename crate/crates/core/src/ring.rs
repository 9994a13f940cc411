//! Exact Laurent-polynomial arithmetic over the integers.
//!
//! `Laurent` is an element of Z[w^(+/-1)] stored as a sparse map from
//! exponent to arbitrary-precision coefficient. The representation is
//! canonical: no stored coefficient is zero. The two derived constants of
//! the theory are A = w^-2 and q = w^-4; they are never independent symbols.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RingError {
    #[error("evaluation point w = 0 is outside the Laurent ring domain")]
    EvalAtZero,
}

/// Coefficient abstraction shared by the rewriting engine.
///
/// Implemented by `Laurent` (the universal ring) and `BigRational`
/// (specializations at a numeric w).
pub trait Coeff: Clone + PartialEq + fmt::Debug + Zero + One + Send + Sync + 'static {
    fn add_assign_ref(&mut self, other: &Self);
    fn mul_ref(&self, other: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    fn render(&self) -> String;
}

/// An element of Z[w^(+/-1)].
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Laurent {
    terms: BTreeMap<i64, BigInt>,
}

impl Laurent {
    pub fn zero() -> Self {
        Laurent {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Laurent::int(1)
    }

    pub fn int(n: i64) -> Self {
        Laurent::monomial(BigInt::from(n), 0)
    }

    /// c * w^k
    pub fn monomial(c: BigInt, k: i64) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(k, c);
        }
        Laurent { terms }
    }

    /// w^k
    pub fn omega(k: i64) -> Self {
        Laurent::monomial(BigInt::one(), k)
    }

    /// A = w^-2
    pub fn a_pow(k: i64) -> Self {
        Laurent::omega(-2 * k)
    }

    /// q = w^-4
    pub fn q_pow(k: i64) -> Self {
        Laurent::omega(-4 * k)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).map_or(false, |c| c.is_one())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&i64, &BigInt)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    fn insert_term(&mut self, k: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(k) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// The bar involution sending w to w^-1 (exponent negation).
    pub fn bar(&self) -> Self {
        Laurent {
            terms: self.terms.iter().map(|(k, c)| (-k, c.clone())).collect(),
        }
    }

    /// Substitution homomorphism at a nonzero rational point.
    pub fn evaluate(&self, omega0: &BigRational) -> Result<BigRational, RingError> {
        if Zero::is_zero(omega0) {
            return Err(RingError::EvalAtZero);
        }
        let mut acc = <BigRational as Zero>::zero();
        for (k, c) in &self.terms {
            let p = if *k >= 0 {
                pow_rational(omega0, *k as u64)
            } else {
                pow_rational(&omega0.recip(), (-k) as u64)
            };
            acc += BigRational::from(c.clone()) * p;
        }
        Ok(acc)
    }

    /// gcd of the integer coefficients (positive), zero polynomial gives 0.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            g = num_integer::gcd(g, c.abs());
        }
        g
    }

    /// Exact division in Z[w^(+/-1)]; `None` when `self` is not a multiple
    /// of `d`. Division by zero is `None`.
    pub fn div_exact(&self, d: &Laurent) -> Option<Laurent> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Laurent::zero());
        }
        // Shift both to lowest exponent 0 and run plain Z[x] long division.
        let shift_n = self.min_exp().unwrap();
        let shift_d = d.min_exp().unwrap();
        let mut rem: BTreeMap<i64, BigInt> = self
            .terms
            .iter()
            .map(|(k, c)| (k - shift_n, c.clone()))
            .collect();
        let den: BTreeMap<i64, BigInt> = d
            .terms
            .iter()
            .map(|(k, c)| (k - shift_d, c.clone()))
            .collect();
        let (&dlead, dlc) = den.iter().next_back().unwrap();
        let mut quo: BTreeMap<i64, BigInt> = BTreeMap::new();
        while let Some((&rlead, rlc)) = rem.iter().next_back() {
            if rlead < dlead {
                return None;
            }
            let (qc, r) = num_integer::div_rem(rlc.clone(), dlc.clone());
            if !r.is_zero() {
                return None;
            }
            let qk = rlead - dlead;
            for (k, c) in &den {
                let key = k + qk;
                let sub = c * &qc;
                let entry = rem.entry(key).or_insert_with(BigInt::zero);
                *entry -= sub;
                if entry.is_zero() {
                    rem.remove(&key);
                }
            }
            quo.insert(qk, qc);
        }
        let offset = shift_n - shift_d;
        Some(Laurent {
            terms: quo.into_iter().map(|(k, c)| (k + offset, c)).collect(),
        })
    }

    /// Greatest common divisor in Z[w^(+/-1)], normalized to lowest
    /// exponent zero with a positive lowest coefficient. Zero inputs act as
    /// gcd identities.
    pub fn gcd(a: &Laurent, b: &Laurent) -> Laurent {
        fn normalize(p: &Laurent) -> Laurent {
            if p.is_zero() {
                return Laurent::zero();
            }
            let shift = p.min_exp().unwrap();
            let mut out = Laurent {
                terms: p.terms.iter().map(|(k, c)| (k - shift, c.clone())).collect(),
            };
            if out.terms.values().next().unwrap().is_negative() {
                out = -&out;
            }
            out
        }
        fn content_free(p: &Laurent) -> Laurent {
            let c = p.content();
            if c.is_zero() || c.is_one() {
                return normalize(p);
            }
            normalize(&p.div_exact(&Laurent::monomial(c, 0)).unwrap())
        }
        if a.is_zero() {
            return content_free(b);
        }
        if b.is_zero() {
            return content_free(a);
        }
        let int_gcd = num_integer::gcd(a.content(), b.content());
        let mut x = content_free(a);
        let mut y = content_free(b);
        // primitive pseudo-remainder sequence
        while !y.is_zero() {
            if x.max_exp().unwrap() < y.max_exp().unwrap() {
                std::mem::swap(&mut x, &mut y);
                continue;
            }
            let d = x.max_exp().unwrap() - y.max_exp().unwrap();
            let lcx = x.terms.get(&x.max_exp().unwrap()).unwrap().clone();
            let lcy = y.terms.get(&y.max_exp().unwrap()).unwrap().clone();
            // x := lc(y) * x - lc(x) * w^d * y strictly lowers deg(x)
            let nx = &(&x * &Laurent::monomial(lcy, 0))
                - &(&y * &Laurent::monomial(lcx, d));
            x = content_free(&nx);
            if x.is_zero() || x.max_exp() < y.max_exp() {
                std::mem::swap(&mut x, &mut y);
            }
        }
        &content_free(&x) * &Laurent::monomial(int_gcd, 0)
    }

    /// Canonical text form: terms by ascending exponent, e.g. `w^-2 - 2 + w^2`.
    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (k, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else if neg {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let pow = match *k {
                0 => None,
                1 => Some("w".to_string()),
                k => Some(format!("w^{}", k)),
            };
            match (mag.is_one(), pow) {
                (_, None) => out.push_str(&mag.to_string()),
                (true, Some(p)) => out.push_str(&p),
                (false, Some(p)) => {
                    out.push_str(&mag.to_string());
                    out.push('*');
                    out.push_str(&p);
                }
            }
        }
        out
    }
}

fn pow_rational(base: &BigRational, mut e: u64) -> BigRational {
    let mut acc = <BigRational as One>::one();
    let mut b = base.clone();
    while e > 0 {
        if e & 1 == 1 {
            acc *= &b;
        }
        b = &b * &b;
        e >>= 1;
    }
    acc
}

impl Add for &Laurent {
    type Output = Laurent;
    fn add(self, rhs: &Laurent) -> Laurent {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.insert_term(*k, c.clone());
        }
        out
    }
}

impl Sub for &Laurent {
    type Output = Laurent;
    fn sub(self, rhs: &Laurent) -> Laurent {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.insert_term(*k, -c.clone());
        }
        out
    }
}

impl Mul for &Laurent {
    type Output = Laurent;
    fn mul(self, rhs: &Laurent) -> Laurent {
        let mut out = Laurent::zero();
        for (k1, c1) in &self.terms {
            for (k2, c2) in &rhs.terms {
                out.insert_term(k1 + k2, c1 * c2);
            }
        }
        out
    }
}

impl Neg for &Laurent {
    type Output = Laurent;
    fn neg(self) -> Laurent {
        Laurent {
            terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }
}

impl fmt::Display for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl Add for Laurent {
    type Output = Laurent;
    fn add(self, rhs: Laurent) -> Laurent {
        &self + &rhs
    }
}

impl Mul for Laurent {
    type Output = Laurent;
    fn mul(self, rhs: Laurent) -> Laurent {
        &self * &rhs
    }
}

impl Zero for Laurent {
    fn zero() -> Self {
        Laurent::zero()
    }
    fn is_zero(&self) -> bool {
        Laurent::is_zero(self)
    }
}

impl One for Laurent {
    fn one() -> Self {
        Laurent::one()
    }
}

impl Coeff for Laurent {
    fn add_assign_ref(&mut self, other: &Self) {
        for (k, c) in &other.terms {
            self.insert_term(*k, c.clone());
        }
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn render(&self) -> String {
        Laurent::render(self)
    }
}

impl Coeff for BigRational {
    fn add_assign_ref(&mut self, other: &Self) {
        *self += other;
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn render(&self) -> String {
        self.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::str::FromStr;

    #[test]
    fn unit_inverse() {
        let p = &Laurent::omega(1) * &Laurent::omega(-1);
        assert!(p.is_one());
    }

    #[test]
    fn square_expansion() {
        // (w - w^-1)^2 = w^2 - 2 + w^-2
        let d = &Laurent::omega(1) - &Laurent::omega(-1);
        let sq = &d * &d;
        let expected = &(&Laurent::omega(2) - &Laurent::int(2)) + &Laurent::omega(-2);
        assert_eq!(sq, expected);
        assert_eq!(sq.render(), "w^-2 - 2 + w^2");
    }

    #[test]
    fn a_times_q() {
        let p = &Laurent::a_pow(1) * &Laurent::q_pow(1);
        assert_eq!(p, Laurent::omega(-6));
    }

    #[test]
    fn bar_examples() {
        assert_eq!(Laurent::omega(1).bar(), Laurent::omega(-1));
        assert_eq!(Laurent::one().bar(), Laurent::one());
        // bar(A - A^-3) = A^-1 - A^3
        let p = &Laurent::a_pow(1) - &Laurent::a_pow(-3);
        let expected = &Laurent::a_pow(-1) - &Laurent::a_pow(3);
        assert_eq!(p.bar(), expected);
        // involution
        assert_eq!(p.bar().bar(), p);
    }

    #[test]
    fn evaluate_examples() {
        let one = BigRational::one();
        assert_eq!(Laurent::a_pow(1).evaluate(&one).unwrap(), one);
        let two = BigRational::from_str("2").unwrap();
        assert_eq!(
            Laurent::q_pow(1).evaluate(&two).unwrap(),
            BigRational::from_str("1/16").unwrap()
        );
        assert_eq!(
            Laurent::omega(1).evaluate(&BigRational::zero()),
            Err(RingError::EvalAtZero)
        );
    }

    #[test]
    fn evaluate_is_ring_morphism() {
        let pts = ["3/2", "-5/7", "2"];
        let polys = [
            &Laurent::a_pow(1) - &Laurent::a_pow(-3),
            &Laurent::omega(5) + &Laurent::int(-4),
            Laurent::q_pow(2),
        ];
        for pt in pts {
            let w0 = BigRational::from_str(pt).unwrap();
            for p in &polys {
                for q in &polys {
                    let lhs = (p * q).evaluate(&w0).unwrap();
                    let rhs = p.evaluate(&w0).unwrap() * q.evaluate(&w0).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn exact_division() {
        let a = &Laurent::omega(2) - &Laurent::omega(-2);
        let b = &Laurent::omega(1) - &Laurent::omega(-1);
        let q = a.div_exact(&b).unwrap();
        assert_eq!(q, &Laurent::omega(1) + &Laurent::omega(-1));
        // not divisible
        let c = &Laurent::omega(1) + &Laurent::int(3);
        assert!(a.div_exact(&c).is_none());
        // unit division
        assert_eq!(
            Laurent::omega(7).div_exact(&Laurent::omega(3)).unwrap(),
            Laurent::omega(4)
        );
    }

    #[test]
    fn polynomial_gcd() {
        // gcd((w - w^-1)(w + 2), (w - w^-1) w^3) = (w - w^-1) up to units
        let f = &Laurent::omega(1) - &Laurent::omega(-1);
        let a = &f * &(&Laurent::omega(1) + &Laurent::int(2));
        let b = &f * &Laurent::omega(3);
        let g = Laurent::gcd(&a, &b);
        assert!(a.div_exact(&g).is_some());
        assert!(b.div_exact(&g).is_some());
        // g equals f up to a unit
        assert!(g.div_exact(&f).map_or(false, |q| q.num_terms() == 1));
        assert_eq!(Laurent::gcd(&Laurent::zero(), &Laurent::zero()), Laurent::zero());
        let c = Laurent::monomial(6.into(), 2);
        let d = Laurent::monomial(4.into(), -1);
        let g2 = Laurent::gcd(&c, &d);
        assert_eq!(g2, Laurent::int(2));
    }

    #[test]
    fn render_forms() {
        assert_eq!(Laurent::zero().render(), "0");
        assert_eq!(Laurent::one().render(), "1");
        assert_eq!((-&Laurent::omega(5)).render(), "-w^5");
        assert_eq!(Laurent::monomial(BigInt::from(3), 2).render(), "3*w^2");
        assert_eq!(Laurent::omega(1).render(), "w");
    }
}
