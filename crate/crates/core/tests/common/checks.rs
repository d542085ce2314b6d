//! Model-level invariant checks shared by the property tests and the
//! acceptance harness. Each returns the number of cases examined or a
//! description of the first counterexample.

#![allow(dead_code)]

use num_traits::Zero;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use sullivan::algebra::{q, FreeAlgebra, Monomial, Polynomial};
use sullivan::cohomology::{self, formal_dimension, EllipticStatus};
use sullivan::linalg;
use sullivan::sequences::wang_split;
use sullivan::SullivanModel;

use super::{Oracle, Poly};

pub type Check = Result<usize, String>;

/// Highest degree sampled: the whole exterior part for purely odd models,
/// otherwise a modest cap so products stay small.
fn degree_cap(alg: &FreeAlgebra) -> u32 {
    let odd_sum: u32 = alg
        .generators()
        .iter()
        .filter(|g| g.is_odd())
        .map(|g| g.degree)
        .sum();
    if alg.generators().iter().all(|g| g.is_odd()) {
        odd_sum
    } else {
        odd_sum.clamp(8, 14)
    }
}

/// The nonempty degree slices of an algebra up to a cap, for sampling.
pub struct Sampler {
    slices: Vec<(u32, Vec<Monomial>)>,
}

impl Sampler {
    pub fn new(alg: &FreeAlgebra, max_degree: u32) -> Self {
        let slices = (0..=max_degree)
            .map(|n| (n, alg.basis(n, None)))
            .filter(|(_, b)| !b.is_empty())
            .collect();
        Sampler { slices }
    }

    pub fn monomial(&self, rng: &mut ChaCha8Rng) -> Monomial {
        let (_, basis) = &self.slices[rng.gen_range(0..self.slices.len())];
        basis[rng.gen_range(0..basis.len())].clone()
    }

    /// A random nonzero homogeneous polynomial of positive degree with up to
    /// four terms and small integer coefficients.
    pub fn poly(&self, rng: &mut ChaCha8Rng) -> Option<(Polynomial, u32)> {
        let positive: Vec<_> = self.slices.iter().filter(|(n, _)| *n > 0).collect();
        if positive.is_empty() {
            return None;
        }
        loop {
            let (n, basis) = positive[rng.gen_range(0..positive.len())];
            let mut p = Polynomial::zero();
            for _ in 0..rng.gen_range(1..=4) {
                let m = basis[rng.gen_range(0..basis.len())].clone();
                let c = loop {
                    let c: i64 = rng.gen_range(-3..=3);
                    if c != 0 {
                        break c;
                    }
                };
                p.add_term(m, q(c));
            }
            if !p.is_zero() {
                return Some((p, *n));
            }
        }
    }
}

pub fn to_dense(p: &Polynomial, n: usize) -> Poly {
    p.terms()
        .map(|(m, c)| {
            let mut dense = vec![0; n];
            for &(id, e) in m.factors() {
                dense[id] = e;
            }
            (dense, c.clone())
        })
        .collect()
}

fn sign(odd: bool) -> Polynomial {
    Polynomial::constant(q(if odd { -1 } else { 1 }))
}

/// `a·b = (−1)^{|a||b|} b·a` on monomials, applying the swap twice restores
/// the original sign, and the oracle's sign rule agrees.
pub fn koszul(model: &SullivanModel, rng: &mut ChaCha8Rng, samples: usize) -> Check {
    let alg = model.algebra();
    let oracle = Oracle::from_model(model);
    let sampler = Sampler::new(alg, degree_cap(alg));
    for _ in 0..samples {
        let (a, b) = (sampler.monomial(rng), sampler.monomial(rng));
        let ab = alg.mul_monomials(&a, &b);
        let ba = alg.mul_monomials(&b, &a);
        let both_odd = alg.is_odd_monomial(&a) && alg.is_odd_monomial(&b);
        match (&ab, &ba) {
            (None, None) => {}
            (Some((s1, m1)), Some((s2, m2))) => {
                if m1 != m2 || (s1 != s2) != both_odd {
                    return Err(format!(
                        "sign rule broken for {} and {}",
                        alg.fmt_monomial(&a),
                        alg.fmt_monomial(&b)
                    ));
                }
                let flipped = s2 ^ both_odd;
                if flipped != *s1 {
                    return Err("swap is not an involution".into());
                }
            }
            _ => return Err("product vanishes in only one order".into()),
        }
        let da = to_dense(&Polynomial::term(a.clone(), q(1)), oracle.len());
        let db = to_dense(&Polynomial::term(b.clone(), q(1)), oracle.len());
        let expect = oracle.mul(&da, &db);
        let got = to_dense(
            &alg.mul(&Polynomial::term(a, q(1)), &Polynomial::term(b, q(1))),
            oracle.len(),
        );
        if expect != got {
            return Err("product disagrees with the oracle".into());
        }
    }
    Ok(samples)
}

/// `d(ab) = d(a)b + (−1)^{|a|} a d(b)`, with every `oracle_every`-th pair
/// also recomputed by the oracle.
pub fn leibniz_d(
    model: &SullivanModel,
    rng: &mut ChaCha8Rng,
    pairs: usize,
    oracle_every: usize,
) -> Check {
    let alg = model.algebra();
    let oracle = Oracle::from_model(model);
    let sampler = Sampler::new(alg, degree_cap(alg));
    for k in 0..pairs {
        let (Some((a, na)), Some((b, _))) = (sampler.poly(rng), sampler.poly(rng)) else {
            return Err("could not sample polynomials".into());
        };
        let lhs = model.d(&alg.mul(&a, &b));
        let mut rhs = alg.mul(&model.d(&a), &b);
        let second = alg.mul(&alg.mul(&sign(na % 2 == 1), &a), &model.d(&b));
        for (m, c) in second.terms() {
            rhs.add_term(m.clone(), c.clone());
        }
        if lhs != rhs {
            return Err(format!(
                "d(ab) mismatch for a = {}, b = {}",
                alg.fmt_polynomial(&a),
                alg.fmt_polynomial(&b)
            ));
        }
        if oracle_every > 0 && k % oracle_every == 0 {
            let ab = oracle.mul(&to_dense(&a, oracle.len()), &to_dense(&b, oracle.len()));
            if oracle.d(&ab) != to_dense(&lhs, oracle.len()) {
                return Err("d(ab) disagrees with the oracle".into());
            }
        }
    }
    Ok(pairs)
}

/// Leibniz for the Wang derivation of every closed odd generator; `θ` has
/// even degree so no sign appears.
pub fn leibniz_theta(model: &SullivanModel, rng: &mut ChaCha8Rng, pairs: usize) -> Check {
    let alg = model.algebra();
    let sampler = Sampler::new(alg, degree_cap(alg));
    let mut checked = 0;
    for w in model.odd_ids().into_iter().filter(|&w| model.is_closed(w)) {
        let split = wang_split(model, w).map_err(|e| e.to_string())?;
        let theta = &split.theta;
        for _ in 0..pairs {
            let (Some((a, _)), Some((b, _))) = (sampler.poly(rng), sampler.poly(rng)) else {
                return Err("could not sample polynomials".into());
            };
            let lhs = theta.apply(alg, &alg.mul(&a, &b));
            let mut rhs = alg.mul(&theta.apply(alg, &a), &b);
            for (m, c) in alg.mul(&a, &theta.apply(alg, &b)).terms() {
                rhs.add_term(m.clone(), c.clone());
            }
            if lhs != rhs {
                return Err(format!("θ Leibniz fails for w = {}", model.name(w)));
            }
            checked += 1;
        }
    }
    Ok(checked)
}

/// `d² = 0`, checked by the library and by the oracle.
pub fn d_squared(model: &SullivanModel, rng: &mut ChaCha8Rng, samples: usize) -> Check {
    let alg = model.algebra();
    let oracle = Oracle::from_model(model);
    let sampler = Sampler::new(alg, degree_cap(alg));
    for _ in 0..samples {
        let Some((p, _)) = sampler.poly(rng) else {
            return Err("could not sample polynomials".into());
        };
        if !model.d(&model.d(&p)).is_zero() {
            return Err(format!("d² ≠ 0 on {}", alg.fmt_polynomial(&p)));
        }
        if !oracle.d(&oracle.d(&to_dense(&p, oracle.len()))).is_empty() {
            return Err("oracle d² ≠ 0".into());
        }
    }
    Ok(samples)
}

/// `d = w·θ + d̄` on random polynomials for every closed odd `w`.
pub fn wang_identity(model: &SullivanModel, rng: &mut ChaCha8Rng, samples: usize) -> Check {
    let alg = model.algebra();
    let sampler = Sampler::new(alg, degree_cap(alg));
    let mut checked = 0;
    for w in model.odd_ids().into_iter().filter(|&w| model.is_closed(w)) {
        let split = wang_split(model, w).map_err(|e| e.to_string())?;
        let gen_w = Polynomial::generator(w);
        for _ in 0..samples {
            let Some((p, _)) = sampler.poly(rng) else {
                return Err("could not sample polynomials".into());
            };
            let mut rhs = alg.mul(&gen_w, &split.theta.apply(alg, &p));
            for (m, c) in split.dbar.apply(alg, &p).terms() {
                rhs.add_term(m.clone(), c.clone());
            }
            if model.d(&p) != rhs {
                return Err(format!("d ≠ wθ + d̄ for w = {}", model.name(w)));
            }
            checked += 1;
        }
    }
    Ok(checked)
}

/// Rank plus nullity equals the column count for every coboundary matrix
/// up to `top`, kernel vectors are genuine, and the rank matches the
/// oracle's elimination.
pub fn rank_nullity(model: &SullivanModel, top: u32) -> Check {
    let oracle = Oracle::from_model(model);
    let mut checked = 0;
    for n in 0..=top {
        let m = cohomology::coboundary_matrix(model, n);
        if m.cols() == 0 || m.cols() > 400 || m.rows() > 400 {
            continue;
        }
        let r = linalg::rank(&m);
        let kernel = linalg::kernel_basis(&m);
        if r + kernel.len() != m.cols() {
            return Err(format!(
                "rank {r} + nullity {} ≠ {} in degree {n}",
                kernel.len(),
                m.cols()
            ));
        }
        if kernel
            .iter()
            .any(|v| m.mul_vec(v).iter().any(|x| !x.is_zero()))
        {
            return Err(format!("kernel vector not annihilated in degree {n}"));
        }
        if r != super::rank(oracle.d_matrix(n)) {
            return Err(format!("rank disagrees with the oracle in degree {n}"));
        }
        checked += 1;
    }
    Ok(checked)
}

/// Poincaré duality about the formal dimension, plus `χ = 0` when there are
/// more odd than even generators. Only certified models are examined.
pub fn poincare(model: &SullivanModel) -> Check {
    let table = cohomology::betti(model, &Default::default());
    let cert = cohomology::elliptic_certificate(model, &Default::default());
    if cert.status != EllipticStatus::Certified {
        return Ok(0);
    }
    if !table.complete {
        return Err("certified model with incomplete Betti table".into());
    }
    let fd = formal_dimension(model);
    let bad = table.poincare_violations(fd);
    if !bad.is_empty() {
        return Err(format!("Poincaré duality fails in degrees {bad:?}"));
    }
    if table.get(fd as usize) != 1 {
        return Err("top class missing".into());
    }
    let chi_pi = model.even_ids().len() as i64 - model.odd_ids().len() as i64;
    if chi_pi < 0 && table.euler != 0 {
        return Err(format!("χ_π < 0 but χ = {}", table.euler));
    }
    if chi_pi == 0 && table.euler <= 0 {
        return Err(format!("χ_π = 0 but χ = {}", table.euler));
    }
    Ok(1)
}
