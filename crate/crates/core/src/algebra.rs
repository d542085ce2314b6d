//! The free graded-commutative algebra ΛW over ℚ.
//!
//! Elements are stored in a canonical form: a [`Monomial`] lists its
//! generators by increasing id (the declaration order of the owning
//! [`FreeAlgebra`]) and a [`Polynomial`] is an ordered map from monomials to
//! nonzero exact rationals. Equality is structural on that form.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, AddAssign, Neg, RangeInclusive, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::AlgebraError;

/// Exact rational coefficient.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Generator {
    pub id: usize,
    pub name: String,
    pub degree: u32,
}

impl Generator {
    pub fn is_odd(&self) -> bool {
        self.degree % 2 == 1
    }
}

/// A product of generators in canonical order. Odd generators occur with
/// exponent one; the empty product is the unit.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<(usize, u32)>);

impl Monomial {
    pub fn unit() -> Self {
        Monomial(Vec::new())
    }

    pub fn generator(id: usize) -> Self {
        Monomial(vec![(id, 1)])
    }

    pub fn power(id: usize, exp: u32) -> Self {
        if exp == 0 {
            Monomial::unit()
        } else {
            Monomial(vec![(id, exp)])
        }
    }

    /// Builds a monomial from `(id, exponent)` pairs already sorted by id
    /// with positive exponents.
    pub(crate) fn from_sorted(factors: Vec<(usize, u32)>) -> Self {
        debug_assert!(factors.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(factors.iter().all(|&(_, e)| e > 0));
        Monomial(factors)
    }

    pub fn factors(&self) -> &[(usize, u32)] {
        &self.0
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponent(&self, id: usize) -> u32 {
        self.0
            .iter()
            .find(|&&(g, _)| g == id)
            .map_or(0, |&(_, e)| e)
    }

    pub fn contains(&self, id: usize) -> bool {
        self.exponent(id) > 0
    }

    /// Word length: the total exponent.
    pub fn word_length(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn generators(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().map(|&(g, _)| g)
    }

    /// Splits the monomial around generator `id` into the factors with
    /// smaller ids and those with larger ids.
    pub(crate) fn split_at(&self, id: usize) -> (Monomial, Monomial) {
        let prefix = self.0.iter().copied().filter(|&(g, _)| g < id).collect();
        let suffix = self.0.iter().copied().filter(|&(g, _)| g > id).collect();
        (Monomial(prefix), Monomial(suffix))
    }

    /// Renames generator ids through `map`; `None` entries are dropped from
    /// the result (the caller guarantees they do not occur).
    pub(crate) fn reindex(&self, map: &[Option<usize>]) -> Option<Monomial> {
        let mut factors = Vec::with_capacity(self.0.len());
        for &(g, e) in &self.0 {
            factors.push((map[g]?, e));
        }
        factors.sort_unstable();
        Some(Monomial(factors))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.word_length()
            .cmp(&other.word_length())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A finite ℚ-linear combination of monomials with no zero coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, Q>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial::default()
    }

    pub fn one() -> Self {
        Polynomial::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        Polynomial::term(Monomial::unit(), c)
    }

    pub fn term(m: Monomial, c: Q) -> Self {
        let mut p = Polynomial::zero();
        p.add_term(m, c);
        p
    }

    pub fn generator(id: usize) -> Self {
        Polynomial::term(Monomial::generator(id), Q::one())
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

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.keys()
    }

    pub fn coefficient(&self, m: &Monomial) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Q) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    /// Keeps only the terms accepted by `keep`.
    pub fn filter_terms(&self, mut keep: impl FnMut(&Monomial) -> bool) -> Polynomial {
        Polynomial {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn mentions(&self, id: usize) -> bool {
        self.terms.keys().any(|m| m.contains(id))
    }

    /// Smallest word length among the terms; `None` for zero.
    pub fn min_word_length(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::word_length).min()
    }

    /// Sets every generator rejected by `keep` to zero.
    pub fn evaluate_zero(&self, mut keep: impl FnMut(usize) -> bool) -> Polynomial {
        self.filter_terms(|m| m.generators().all(&mut keep))
    }

    pub(crate) fn reindex(&self, map: &[Option<usize>]) -> Option<Polynomial> {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            out.add_term(m.reindex(map)?, c.clone());
        }
        Some(out)
    }
}

impl AddAssign<&Polynomial> for Polynomial {
    fn add_assign(&mut self, rhs: &Polynomial) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out += &(-rhs);
        out
    }
}

/// Sign of a product: `Zero` when an odd generator repeats.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Sign {
    Minus,
    Zero,
    Plus,
}

impl Sign {
    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Minus => -1,
            Sign::Zero => 0,
            Sign::Plus => 1,
        }
    }

    fn from_parity(odd: bool) -> Sign {
        if odd {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }
}

/// The free graded-commutative algebra on an ordered list of generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeAlgebra {
    gens: Vec<Generator>,
    by_name: HashMap<String, usize>,
}

impl FreeAlgebra {
    pub fn new<S: Into<String>>(
        gens: impl IntoIterator<Item = (S, u32)>,
    ) -> Result<Self, AlgebraError> {
        let mut out = FreeAlgebra {
            gens: Vec::new(),
            by_name: HashMap::new(),
        };
        for (name, degree) in gens {
            let name = name.into();
            if degree == 0 {
                return Err(AlgebraError::ZeroDegree(name));
            }
            if out.by_name.contains_key(&name) {
                return Err(AlgebraError::DuplicateGenerator(name));
            }
            let id = out.gens.len();
            out.by_name.insert(name.clone(), id);
            out.gens.push(Generator { id, name, degree });
        }
        Ok(out)
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn generator(&self, id: usize) -> &Generator {
        &self.gens[id]
    }

    pub fn id_of(&self, name: &str) -> Option<usize> {
        self.by_name.get(name).copied()
    }

    pub fn degree(&self, id: usize) -> u32 {
        self.gens[id].degree
    }

    pub fn is_odd(&self, id: usize) -> bool {
        self.gens[id].is_odd()
    }

    pub fn monomial_degree(&self, m: &Monomial) -> u32 {
        m.factors().iter().map(|&(g, e)| e * self.degree(g)).sum()
    }

    /// The common degree of all terms, `Ok(None)` for the zero polynomial.
    pub fn degree_of(&self, p: &Polynomial) -> Result<Option<u32>, AlgebraError> {
        let mut degrees = p.monomials().map(|m| self.monomial_degree(m));
        let Some(first) = degrees.next() else {
            return Ok(None);
        };
        if degrees.all(|d| d == first) {
            Ok(Some(first))
        } else {
            Err(AlgebraError::MixedDegree)
        }
    }

    /// Total degree of the odd part; the sign of moving an odd element past
    /// `m` is `(-1)^odd_degree(m)`.
    fn odd_count(&self, m: &Monomial) -> u32 {
        m.factors()
            .iter()
            .filter(|&&(g, _)| self.is_odd(g))
            .map(|&(_, e)| e)
            .sum()
    }

    /// Parity of the degree of `m`.
    pub fn is_odd_monomial(&self, m: &Monomial) -> bool {
        self.odd_count(m) % 2 == 1
    }

    /// Sorts an arbitrary ordered product of generator powers into canonical
    /// form, tracking the Koszul sign of the odd transpositions.
    pub fn normalize_product(
        &self,
        factors: &[(usize, u32)],
    ) -> Result<(Sign, Monomial), AlgebraError> {
        let mut acc = Monomial::unit();
        let mut negative = false;
        let mut vanished = false;
        for &(g, e) in factors {
            if g >= self.len() {
                return Err(AlgebraError::UnknownGenerator(g));
            }
            if e == 0 || vanished {
                continue;
            }
            if self.is_odd(g) && e > 1 {
                vanished = true;
                continue;
            }
            match self.mul_monomials(&acc, &Monomial::power(g, e)) {
                Some((neg, m)) => {
                    negative ^= neg;
                    acc = m;
                }
                None => vanished = true,
            }
        }
        if vanished {
            Ok((Sign::Zero, Monomial::unit()))
        } else {
            Ok((Sign::from_parity(negative), acc))
        }
    }

    /// Product of two canonical monomials: `None` when it vanishes, else the
    /// canonical result and whether the sign is negative.
    pub fn mul_monomials(&self, a: &Monomial, b: &Monomial) -> Option<(bool, Monomial)> {
        let (fa, fb) = (a.factors(), b.factors());
        let mut out = Vec::with_capacity(fa.len() + fb.len());
        let mut swaps = 0u32;
        // odd factors of `a` not yet emitted, i.e. with ids above the cursor
        let mut odd_in_a_remaining = fa.iter().filter(|&&(g, _)| self.is_odd(g)).count() as u32;
        let (mut i, mut j) = (0, 0);
        while i < fa.len() || j < fb.len() {
            let take_a = j == fb.len() || (i < fa.len() && fa[i].0 < fb[j].0);
            if take_a {
                if self.is_odd(fa[i].0) {
                    odd_in_a_remaining -= 1;
                }
                out.push(fa[i]);
                i += 1;
            } else if i < fa.len() && fa[i].0 == fb[j].0 {
                let g = fa[i].0;
                if self.is_odd(g) {
                    return None;
                }
                out.push((g, fa[i].1 + fb[j].1));
                i += 1;
                j += 1;
            } else {
                if self.is_odd(fb[j].0) {
                    swaps += odd_in_a_remaining;
                }
                out.push(fb[j]);
                j += 1;
            }
        }
        Some((swaps % 2 == 1, Monomial::from_sorted(out)))
    }

    pub fn mul(&self, p: &Polynomial, r: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (ma, ca) in p.terms() {
            for (mb, cb) in r.terms() {
                if let Some((neg, m)) = self.mul_monomials(ma, mb) {
                    let c = ca * cb;
                    out.add_term(m, if neg { -c } else { c });
                }
            }
        }
        out
    }

    pub fn mul_monomial_poly(&self, m: &Monomial, p: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (mb, c) in p.terms() {
            if let Some((neg, prod)) = self.mul_monomials(m, mb) {
                out.add_term(prod, if neg { -c.clone() } else { c.clone() });
            }
        }
        out
    }

    pub fn pow(&self, p: &Polynomial, exp: u32) -> Polynomial {
        (0..exp).fold(Polynomial::one(), |acc, _| self.mul(&acc, p))
    }

    /// All canonical monomials of total degree `n`, optionally restricted by
    /// word length, in increasing monomial order.
    pub fn basis(&self, n: u32, word_length: Option<RangeInclusive<u32>>) -> Vec<Monomial> {
        let all: Vec<usize> = (0..self.len()).collect();
        self.basis_in(n, &all, word_length)
    }

    /// Like [`basis`](Self::basis) but only over the generators in `ids`.
    pub fn basis_in(
        &self,
        n: u32,
        ids: &[usize],
        word_length: Option<RangeInclusive<u32>>,
    ) -> Vec<Monomial> {
        let mut ids = ids.to_vec();
        ids.sort_unstable();
        ids.dedup();
        let mut out = Vec::new();
        let mut current = Vec::new();
        self.enumerate(&ids, 0, n, &mut current, &mut out);
        if let Some(range) = word_length {
            out.retain(|m| range.contains(&m.word_length()));
        }
        out.sort();
        out
    }

    fn enumerate(
        &self,
        ids: &[usize],
        pos: usize,
        remaining: u32,
        current: &mut Vec<(usize, u32)>,
        out: &mut Vec<Monomial>,
    ) {
        if remaining == 0 {
            out.push(Monomial::from_sorted(current.clone()));
            return;
        }
        if pos == ids.len() {
            return;
        }
        let g = ids[pos];
        let deg = self.degree(g);
        let max_exp = if self.is_odd(g) { 1 } else { remaining / deg };
        for e in (0..=max_exp.min(remaining / deg)).rev() {
            if e > 0 {
                current.push((g, e));
            }
            self.enumerate(ids, pos + 1, remaining - e * deg, current, out);
            if e > 0 {
                current.pop();
            }
        }
    }

    pub fn fmt_monomial(&self, m: &Monomial) -> String {
        if m.is_unit() {
            return "1".to_string();
        }
        m.factors()
            .iter()
            .map(|&(g, e)| {
                if e == 1 {
                    self.gens[g].name.clone()
                } else {
                    format!("{}^{}", self.gens[g].name, e)
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }

    /// Renders `p` in the model text syntax, e.g. `x1*x2 - 1/2*x3`.
    pub fn fmt_polynomial(&self, p: &Polynomial) -> String {
        if p.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in p.terms().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let unit = m.is_unit();
            if !abs.is_one() || unit {
                out.push_str(&abs.to_string());
                if !unit {
                    out.push('*');
                }
            }
            if !unit {
                out.push_str(&self.fmt_monomial(m));
            }
        }
        out
    }

    /// The subalgebra on `ids` (kept in their relative order) together with
    /// the map from old ids to new ids.
    pub fn restrict(&self, ids: &[usize]) -> (FreeAlgebra, Vec<Option<usize>>) {
        let mut ids = ids.to_vec();
        ids.sort_unstable();
        ids.dedup();
        let mut map = vec![None; self.len()];
        for (new, &old) in ids.iter().enumerate() {
            map[old] = Some(new);
        }
        let sub = FreeAlgebra::new(
            ids.iter()
                .map(|&g| (self.gens[g].name.clone(), self.gens[g].degree)),
        )
        .expect("restriction of a valid generator list is valid");
        (sub, map)
    }
}

/// Helper for rendering a polynomial against its algebra.
pub struct Display<'a>(pub &'a FreeAlgebra, pub &'a Polynomial);

impl fmt::Display for Display<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.fmt_polynomial(self.1))
    }
}
