//! Truncated free associative algebra over the rationals.
//!
//! Polynomials are maps from words (letter sequences) to coefficients. Every
//! product drops words longer than the truncation length.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::linalg::{q, Q};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AssocPoly {
    terms: BTreeMap<Vec<u8>, Q>,
}

impl AssocPoly {
    pub fn zero() -> Self {
        AssocPoly::default()
    }

    pub fn one() -> Self {
        AssocPoly::monomial(Vec::new(), Q::one())
    }

    pub fn monomial(word: Vec<u8>, c: Q) -> Self {
        let mut p = AssocPoly::zero();
        p.add_term(word, c);
        p
    }

    pub fn letter(l: u8) -> Self {
        AssocPoly::monomial(vec![l], Q::one())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u8>, &Q)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, word: &[u8]) -> Q {
        self.terms.get(word).cloned().unwrap_or_else(Q::zero)
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

    pub fn add_term(&mut self, word: Vec<u8>, c: Q) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(word) {
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

    pub fn add_scaled(&mut self, other: &AssocPoly, c: &Q) {
        if c.is_zero() {
            return;
        }
        for (w, x) in &other.terms {
            self.add_term(w.clone(), x * c);
        }
    }

    pub fn scaled(&self, c: &Q) -> AssocPoly {
        let mut out = AssocPoly::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn mul_truncated(&self, other: &AssocPoly, max_len: usize) -> AssocPoly {
        let mut out = AssocPoly::zero();
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                if u.len() + v.len() > max_len {
                    continue;
                }
                let mut w = Vec::with_capacity(u.len() + v.len());
                w.extend_from_slice(u);
                w.extend_from_slice(v);
                out.add_term(w, a * b);
            }
        }
        out
    }

    /// `self * other - other * self`, untruncated.
    pub fn commutator(&self, other: &AssocPoly) -> AssocPoly {
        let n = usize::MAX;
        let mut out = self.mul_truncated(other, n);
        out.add_scaled(&other.mul_truncated(self, n), &q(-1));
        out
    }

    pub fn truncated(&self, max_len: usize) -> AssocPoly {
        AssocPoly {
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| w.len() <= max_len)
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }

    /// Components of one word length.
    pub fn component(&self, len: usize) -> AssocPoly {
        AssocPoly {
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| w.len() == len)
                .map(|(w, c)| (w.clone(), c.clone()))
                .collect(),
        }
    }

    /// Truncated exponential. The constant term of `self` must vanish.
    pub fn exp_truncated(&self, max_len: usize) -> AssocPoly {
        assert!(self.coefficient(&[]).is_zero(), "exp needs a nilpotent argument");
        let mut out = AssocPoly::one();
        let mut power = AssocPoly::one();
        for k in 1..=max_len {
            power = power.mul_truncated(self, max_len).scaled(&Q::new(1.into(), (k as i64).into()));
            if power.is_zero() {
                break;
            }
            out.add_scaled(&power, &Q::one());
        }
        out
    }

    /// Truncated `log(1 + self)`. The constant term of `self` must vanish.
    pub fn log1p_truncated(&self, max_len: usize) -> AssocPoly {
        assert!(self.coefficient(&[]).is_zero(), "log needs a nilpotent argument");
        let mut out = AssocPoly::zero();
        let mut power = AssocPoly::one();
        for k in 1..=max_len {
            power = power.mul_truncated(self, max_len);
            if power.is_zero() {
                break;
            }
            let sign = if k % 2 == 1 { 1 } else { -1 };
            out.add_scaled(&power, &Q::new(sign.into(), (k as i64).into()));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::frac;

    #[test]
    fn exp_log_inverse() {
        let x = AssocPoly::letter(0);
        let y = AssocPoly::letter(1);
        let mut a = x.clone();
        a.add_scaled(&y.mul_truncated(&x, 5), &frac(1, 3));
        let mut e = a.exp_truncated(5);
        e.add_term(Vec::new(), q(-1));
        assert_eq!(e.log1p_truncated(5), a);
    }

    #[test]
    fn commutator_of_letters() {
        let c = AssocPoly::letter(0).commutator(&AssocPoly::letter(1));
        assert_eq!(c.coefficient(&[0, 1]), q(1));
        assert_eq!(c.coefficient(&[1, 0]), q(-1));
        assert_eq!(c.len(), 2);
    }
}
