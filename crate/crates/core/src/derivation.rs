//! Graded derivations of ΛW given by their values on generators.
//!
//! A derivation `D` of degree `k` is extended by the graded Leibniz rule
//! `D(pq) = D(p)q + (-1)^(k·deg p) p D(q)`. The differential of a model is
//! the case `k = 1`; Wang derivations have even degree `1 − deg w`.

use num_bigint::BigInt;

use crate::algebra::{FreeAlgebra, Monomial, Polynomial, Q};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    degree: i32,
    values: Vec<Polynomial>,
}

impl Derivation {
    pub fn new(degree: i32, values: Vec<Polynomial>) -> Self {
        Derivation { degree, values }
    }

    pub fn zero(alg: &FreeAlgebra, degree: i32) -> Self {
        Derivation::new(degree, vec![Polynomial::zero(); alg.len()])
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }

    pub fn value(&self, id: usize) -> &Polynomial {
        &self.values[id]
    }

    pub fn values(&self) -> &[Polynomial] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Polynomial::is_zero)
    }

    /// Generators whose value is not homogeneous of degree `deg + k`.
    pub fn degree_violations(&self, alg: &FreeAlgebra) -> Vec<usize> {
        (0..self.values.len())
            .filter(|&g| match alg.degree_of(&self.values[g]) {
                Ok(None) => false,
                Ok(Some(d)) => d as i64 != alg.degree(g) as i64 + self.degree as i64,
                Err(_) => true,
            })
            .collect()
    }

    pub fn apply_monomial(&self, alg: &FreeAlgebra, m: &Monomial) -> Polynomial {
        let mut out = Polynomial::zero();
        let odd_shift = self.degree.rem_euclid(2) == 1;
        for &(g, e) in m.factors() {
            let value = &self.values[g];
            if value.is_zero() {
                continue;
            }
            let (prefix, suffix) = m.split_at(g);
            let negate = odd_shift && alg.is_odd_monomial(&prefix);
            let mut left = prefix.factors().to_vec();
            if e > 1 {
                left.push((g, e - 1));
            }
            let left = Monomial::from_sorted(left);
            let mult = Q::from_integer(BigInt::from(e));
            for (vm, c) in value.terms() {
                let Some((n1, lm)) = alg.mul_monomials(&left, vm) else {
                    continue;
                };
                let Some((n2, full)) = alg.mul_monomials(&lm, &suffix) else {
                    continue;
                };
                let coeff = c * &mult;
                out.add_term(full, if negate ^ n1 ^ n2 { -coeff } else { coeff });
            }
        }
        out
    }

    pub fn apply(&self, alg: &FreeAlgebra, p: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in p.terms() {
            out += &self.apply_monomial(alg, m).scale(c);
        }
        out
    }

    /// The graded commutator `[self, other] = self∘other − (-1)^(|self||other|) other∘self`
    /// evaluated on `p`.
    pub fn commutator_apply(
        &self,
        other: &Derivation,
        alg: &FreeAlgebra,
        p: &Polynomial,
    ) -> Polynomial {
        let ab = self.apply(alg, &other.apply(alg, p));
        let ba = other.apply(alg, &self.apply(alg, p));
        if (self.degree * other.degree).rem_euclid(2) == 1 {
            &ab + &ba
        } else {
            &ab - &ba
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::q;

    #[test]
    fn leibniz_sign_on_odd_prefix() {
        // d(x1 x3) with d x3 = x1 x2: the odd prefix x1 contributes a minus.
        let alg = FreeAlgebra::new([("x1", 3), ("x2", 3), ("x3", 5)]).unwrap();
        let mut vals = vec![Polynomial::zero(); 3];
        vals[2] = Polynomial::term(Monomial::from_sorted(vec![(0, 1), (1, 1)]), q(1));
        let d = Derivation::new(1, vals);
        let x2x3 = Monomial::from_sorted(vec![(1, 1), (2, 1)]);
        // d(x2 x3) = -x2 x1 x2 = 0
        assert!(d.apply_monomial(&alg, &x2x3).is_zero());
        let x3 = Monomial::generator(2);
        assert_eq!(
            d.apply_monomial(&alg, &x3),
            Polynomial::term(Monomial::from_sorted(vec![(0, 1), (1, 1)]), q(1))
        );
    }

    #[test]
    fn power_rule_for_even_generators() {
        let alg = FreeAlgebra::new([("x", 2), ("y", 3)]).unwrap();
        // derivation of degree +1 with x ↦ y (not a differential, just a test)
        let d = Derivation::new(1, vec![Polynomial::generator(1), Polynomial::zero()]);
        let out = d.apply_monomial(&alg, &Monomial::power(0, 3));
        assert_eq!(
            out,
            Polynomial::term(Monomial::from_sorted(vec![(0, 2), (1, 1)]), q(3))
        );
    }
}
