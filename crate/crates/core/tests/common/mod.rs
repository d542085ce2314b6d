//! A deliberately naive second implementation used as a test oracle:
//! dense exponent vectors, its own Koszul sign rule, its own Leibniz
//! expansion and plain Gaussian elimination over the rationals. Only the
//! generator degrees and differentials are read from the library model.

#![allow(dead_code)]

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use sullivan::SullivanModel;

pub mod checks;

pub type Rat = BigRational;
pub type Mono = Vec<u32>;
pub type Poly = BTreeMap<Mono, Rat>;

pub fn rat(n: i64) -> Rat {
    BigRational::from_integer(BigInt::from(n))
}

pub struct Oracle {
    pub degrees: Vec<u32>,
    pub diffs: Vec<Poly>,
}

fn add_into(p: &mut Poly, m: Mono, c: Rat) {
    if c.is_zero() {
        return;
    }
    let entry = p.entry(m.clone()).or_insert_with(Rat::zero);
    *entry += c;
    if entry.is_zero() {
        p.remove(&m);
    }
}

impl Oracle {
    pub fn from_model(model: &SullivanModel) -> Self {
        let n = model.dim_w();
        let degrees = model.generators().iter().map(|g| g.degree).collect();
        let diffs = (0..n)
            .map(|g| {
                let mut p = Poly::new();
                for (m, c) in model.d_of(g).terms() {
                    let mut dense = vec![0; n];
                    for &(id, e) in m.factors() {
                        dense[id] = e;
                    }
                    add_into(&mut p, dense, c.clone());
                }
                p
            })
            .collect();
        Oracle { degrees, diffs }
    }

    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    fn odd(&self, i: usize) -> bool {
        self.degrees[i] % 2 == 1
    }

    pub fn degree(&self, m: &Mono) -> u32 {
        m.iter().zip(&self.degrees).map(|(e, d)| e * d).sum()
    }

    /// `a·b` rewritten in increasing generator order, with the sign from
    /// moving each odd factor of `b` left past the larger odd factors of `a`.
    pub fn mono_mul(&self, a: &Mono, b: &Mono) -> Option<(bool, Mono)> {
        let mut out = vec![0; self.len()];
        let mut swaps = 0u32;
        for j in 0..self.len() {
            out[j] = a[j] + b[j];
            if self.odd(j) && out[j] > 1 {
                return None;
            }
            if self.odd(j) && b[j] == 1 {
                swaps += (j + 1..self.len())
                    .filter(|&i| self.odd(i) && a[i] == 1)
                    .count() as u32;
            }
        }
        Some((swaps % 2 == 1, out))
    }

    pub fn mul(&self, p: &Poly, q: &Poly) -> Poly {
        let mut out = Poly::new();
        for (a, ca) in p {
            for (b, cb) in q {
                if let Some((neg, m)) = self.mono_mul(a, b) {
                    let c = ca * cb;
                    add_into(&mut out, m, if neg { -c } else { c });
                }
            }
        }
        out
    }

    pub fn d_mono(&self, m: &Mono) -> Poly {
        let mut out = Poly::new();
        for i in 0..self.len() {
            if m[i] == 0 {
                continue;
            }
            let mut left = vec![0; self.len()];
            left[..i].copy_from_slice(&m[..i]);
            let prefix_deg: u32 = (0..i).map(|k| m[k] * self.degrees[k]).sum();
            left[i] = m[i] - 1;
            let mut suffix = vec![0; self.len()];
            suffix[i + 1..].copy_from_slice(&m[i + 1..]);
            let coeff = rat(m[i] as i64) * if prefix_deg % 2 == 1 { rat(-1) } else { rat(1) };
            let l: Poly = [(left, coeff)].into_iter().collect();
            let s: Poly = [(suffix, rat(1))].into_iter().collect();
            let term = self.mul(&self.mul(&l, &self.diffs[i]), &s);
            for (k, v) in term {
                add_into(&mut out, k, v);
            }
        }
        out
    }

    pub fn d(&self, p: &Poly) -> Poly {
        let mut out = Poly::new();
        for (m, c) in p {
            for (k, v) in self.d_mono(m) {
                add_into(&mut out, k, v * c);
            }
        }
        out
    }

    /// All monomials of degree `n`.
    pub fn basis(&self, n: u32) -> Vec<Mono> {
        let mut out = Vec::new();
        let mut cur = vec![0; self.len()];
        self.fill(0, n, &mut cur, &mut out);
        out
    }

    fn fill(&self, i: usize, remaining: u32, cur: &mut Mono, out: &mut Vec<Mono>) {
        if i == self.len() {
            if remaining == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let d = self.degrees[i];
        let max = if self.odd(i) { 1 } else { remaining / d };
        for e in 0..=max.min(remaining / d) {
            cur[i] = e;
            self.fill(i + 1, remaining - e * d, cur, out);
        }
        cur[i] = 0;
    }

    /// Dense matrix of `d` from degree `n` to `n + 1`, one row per target
    /// monomial.
    pub fn d_matrix(&self, n: u32) -> Vec<Vec<Rat>> {
        let src = self.basis(n);
        let tgt = self.basis(n + 1);
        let mut rows = vec![vec![Rat::zero(); src.len()]; tgt.len()];
        for (j, m) in src.iter().enumerate() {
            for (k, v) in self.d_mono(m) {
                let i = tgt.iter().position(|t| *t == k).expect("degree +1");
                rows[i][j] = v;
            }
        }
        rows
    }

    pub fn betti(&self, top: u32) -> Vec<usize> {
        let ranks: Vec<usize> = (0..=top).map(|n| rank(self.d_matrix(n))).collect();
        (0..=top as usize)
            .map(|n| {
                let before = if n == 0 { 0 } else { ranks[n - 1] };
                self.basis(n as u32).len() - ranks[n] - before
            })
            .collect()
    }

    pub fn formal_dimension(&self) -> i64 {
        self.degrees
            .iter()
            .map(|&d| if d % 2 == 1 { d as i64 } else { 1 - d as i64 })
            .sum()
    }

    /// Whether the homogeneous element `p` of degree `n` lies in `d(ΛW^(n−1))`.
    pub fn is_exact(&self, p: &Poly, n: u32) -> bool {
        if n == 0 {
            return p.is_empty();
        }
        let mut rows = self.d_matrix(n - 1);
        let tgt = self.basis(n);
        let r = rank(rows.clone());
        for (i, t) in tgt.iter().enumerate() {
            rows[i].push(p.get(t).cloned().unwrap_or_else(Rat::zero));
        }
        rank(rows) == r
    }
}

/// Rank by textbook row reduction with largest-magnitude pivots.
pub fn rank(mut rows: Vec<Vec<Rat>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len())
            .filter(|&i| !rows[i][c].is_zero())
            .max_by(|&a, &b| rows[a][c].abs().cmp(&rows[b][c].abs()))
        else {
            continue;
        };
        rows.swap(r, p);
        let pivot = rows[r][c].clone();
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = &rows[i][c] / &pivot;
                let pivot_row = rows[r].clone();
                for (x, p) in rows[i][c..].iter_mut().zip(&pivot_row[c..]) {
                    *x -= p * &f;
                }
            }
        }
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    r
}

pub fn one() -> Rat {
    Rat::one()
}
