//! Wang derivations, Euler-class conditions and the split Wang and Gysin
//! sequences relating the cohomology of a model to that of a fibre or base
//! obtained by removing one odd generator.

use serde::Serialize;

use crate::algebra::{FreeAlgebra, Monomial, Polynomial};
use crate::cohomology::{self, BettiOptions, CohomologyCache};
use crate::derivation::Derivation;
use crate::error::SequenceError;
use crate::model::SullivanModel;

/// `d = w·θ + d̄` for a closed odd generator `w`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WangSplit {
    pub generator: usize,
    /// The Wang derivation, of degree `1 − deg w`.
    pub theta: Derivation,
    /// `d` followed by `w ↦ 0`.
    pub dbar: Derivation,
}

impl WangSplit {
    /// The fibre `(Λ(W ∖ w), d̄)` together with `θ` restricted to it.
    pub fn fibre(&self, model: &SullivanModel) -> (SullivanModel, Derivation) {
        let (fibre, map) = model.quotient(&[self.generator]);
        let values = (0..model.dim_w())
            .filter(|&g| map[g].is_some())
            .map(|g| {
                self.theta
                    .value(g)
                    .reindex(&map)
                    .expect("θ is free of the split generator")
            })
            .collect();
        (fibre, Derivation::new(self.theta.degree(), values))
    }
}

pub fn wang_split(model: &SullivanModel, w: usize) -> Result<WangSplit, SequenceError> {
    let alg = model.algebra();
    if !alg.is_odd(w) {
        return Err(SequenceError::NotOdd(model.name(w).to_string()));
    }
    if !model.is_closed(w) {
        return Err(SequenceError::NotClosed(model.name(w).to_string()));
    }
    let mut theta = Vec::with_capacity(model.dim_w());
    let mut dbar = Vec::with_capacity(model.dim_w());
    for u in 0..model.dim_w() {
        let mut a = Polynomial::zero();
        let mut b = Polynomial::zero();
        for (m, c) in model.d_of(u).terms() {
            if m.contains(w) {
                // m = prefix·w·suffix = (-1)^|prefix| w·prefix·suffix
                let (prefix, suffix) = m.split_at(w);
                let mut rest = prefix.factors().to_vec();
                rest.extend_from_slice(suffix.factors());
                let rest = Monomial::from_sorted(rest);
                let c = if alg.is_odd_monomial(&prefix) {
                    -c.clone()
                } else {
                    c.clone()
                };
                a.add_term(rest, c);
            } else {
                b.add_term(m.clone(), c.clone());
            }
        }
        theta.push(a);
        dbar.push(b);
    }
    Ok(WangSplit {
        generator: w,
        theta: Derivation::new(1 - alg.degree(w) as i32, theta),
        dbar: Derivation::new(1, dbar),
    })
}

/// `θ(θ(u))`.
pub fn theta_square(alg: &FreeAlgebra, theta: &Derivation, u: usize) -> Polynomial {
    theta.apply(alg, &theta.apply(alg, &Polynomial::generator(u)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ThetaSquare {
    /// `θ²(u) = 0` for every generator `u`.
    pub generatorwise: bool,
    /// `θ² = 0` on the whole algebra.
    pub derivationwise: bool,
}

/// For an even-degree derivation `θ² (uv) = θ²u·v + 2 θu·θv + u·θ²v`, so `θ²`
/// vanishes identically iff it vanishes on generators, `θu·θv = 0` for all
/// pairs and `θ(u)² = 0` for even `u`.
pub fn theta_square_check(alg: &FreeAlgebra, theta: &Derivation) -> ThetaSquare {
    let n = alg.len();
    let generatorwise = (0..n).all(|u| theta_square(alg, theta, u).is_zero());
    let derivationwise = generatorwise && {
        let images: Vec<Polynomial> = (0..n)
            .map(|u| theta.apply(alg, &Polynomial::generator(u)))
            .collect();
        let pairs_vanish =
            (0..n).all(|u| (u + 1..n).all(|v| alg.mul(&images[u], &images[v]).is_zero()));
        let squares_vanish = (0..n)
            .filter(|&u| !alg.is_odd(u))
            .all(|u| alg.mul(&images[u], &images[u]).is_zero());
        let odd_degree = theta.degree().rem_euclid(2) == 1;
        odd_degree || (pairs_vanish && squares_vanish)
    };
    ThetaSquare {
        generatorwise,
        derivationwise,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EulerSquare {
    /// `(d w)² = 0` as a polynomial.
    pub strict: bool,
    /// `(d w)²` is exact in the base.
    pub cohomological: bool,
}

/// The base `Λ(W ∖ w)` over which `w` is attached; it must be a sub-DGA.
pub fn gysin_base(
    model: &SullivanModel,
    w: usize,
) -> Result<(SullivanModel, Polynomial), SequenceError> {
    if !model.is_free_of(w) {
        return Err(SequenceError::NotInBase(model.name(w).to_string()));
    }
    let keep: Vec<usize> = (0..model.dim_w()).filter(|&g| g != w).collect();
    let (base, map) = model.sub_dga(&keep)?;
    let euler = model
        .d_of(w)
        .reindex(&map)
        .ok_or_else(|| SequenceError::NotInBase(model.name(w).to_string()))?;
    Ok((base, euler))
}

pub fn euler_class_square_check(
    model: &SullivanModel,
    w: usize,
) -> Result<EulerSquare, SequenceError> {
    let (base, euler) = gysin_base(model, w)?;
    let square = base.algebra().mul(&euler, &euler);
    let strict = square.is_zero();
    let cohomological = strict || cohomology::is_exact(&base, &square)?;
    Ok(EulerSquare {
        strict,
        cohomological,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SequenceRow {
    pub degree: u32,
    pub coker: usize,
    pub total: usize,
    pub ker: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SequenceCheckResult {
    pub generator: String,
    pub rows: Vec<SequenceRow>,
    /// `total = coker + ker` in every listed degree.
    pub identity_holds: bool,
    /// Degrees where the cokernel is nonzero.
    pub coker_degrees: Vec<u32>,
    pub strictness_witness: Option<u32>,
    /// Whether the connecting map squares to zero on cohomology.
    pub square_zero: bool,
    /// Total rank of the connecting map on the computed degrees.
    pub connecting_rank: usize,
    /// `dim H` of the total space and of the fibre (Wang) or base (Gysin),
    /// when both are certified finite.
    pub total_dim: Option<usize>,
    pub smaller_dim: Option<usize>,
    pub complete: bool,
}

impl SequenceCheckResult {
    /// `dim H(total) ≥ dim H(smaller) + 1`.
    pub fn strict_increase(&self) -> Option<bool> {
        Some(self.total_dim? > self.smaller_dim?)
    }
}

/// Highest degree in which `model` can carry cohomology, if known.
fn degree_bound(
    model: &SullivanModel,
    options: &BettiOptions,
) -> (u32, bool, Option<usize>, Vec<usize>) {
    let table = cohomology::betti(model, options);
    let total = table.complete.then_some(table.total);
    (
        table.max_degree_computed,
        table.complete,
        total,
        table.betti,
    )
}

/// The split Wang sequence of the fibration over `S^(deg w)` with fibre
/// model `(Λ(W∖w), d̄)`:
/// `dim H^i(ΛW) = dim coker(θ*)^(i−deg w) + dim ker(θ*)^i`.
pub fn wang_sequence_check(
    model: &SullivanModel,
    w: usize,
    options: &BettiOptions,
) -> Result<SequenceCheckResult, SequenceError> {
    let split = wang_split(model, w)?;
    let (fibre, theta) = split.fibre(model);
    cohomology::check_descends(&fibre, &theta)?;
    let deg_w = model.algebra().degree(w) as i64;
    let shift = theta.degree() as i64;
    let (top, complete, total_dim, total_betti) = degree_bound(model, options);
    let fibre_table = cohomology::betti(&fibre, options);
    let falg = fibre.algebra().clone();
    let op = |p: &Polynomial| theta.apply(&falg, p);

    let mut cache = CohomologyCache::new(&fibre);
    let mut rows = Vec::new();
    for i in 0..=top as i64 {
        // coker of θ*: H^(i−1) → H^(i−deg w)
        let coker_deg = i - deg_w;
        let coker = cache.dim(coker_deg) - cache.induced_rank(i - 1, shift, op);
        let ker = cache.dim(i) - cache.induced_rank(i, shift, op);
        rows.push(SequenceRow {
            degree: i as u32,
            coker,
            total: total_betti[i as usize],
            ker,
        });
    }
    let identity_holds = rows.iter().all(|r| r.total == r.coker + r.ker);

    let fibre_top = if fibre_table.complete {
        fibre_table.max_degree_computed
    } else {
        top
    };
    let coker_degrees: Vec<u32> = (0..=fibre_top as i64)
        .filter(|&j| cache.dim(j) > cache.induced_rank(j + deg_w - 1, shift, op))
        .map(|j| j as u32)
        .collect();
    let square_zero = (0..=fibre_top).all(|j| cache.induced_vanishes(j, 2 * shift, |p| op(&op(p))));
    let connecting_rank = (0..=fibre_top as i64)
        .map(|j| cache.induced_rank(j, shift, op))
        .sum();
    Ok(SequenceCheckResult {
        generator: model.name(w).to_string(),
        identity_holds,
        strictness_witness: coker_degrees.last().copied(),
        coker_degrees,
        rows,
        square_zero,
        connecting_rank,
        total_dim,
        smaller_dim: fibre_table.complete.then_some(fibre_table.total),
        complete: complete && fibre_table.complete,
    })
}

/// The split Gysin sequence for attaching `w` over the base `Λ(W∖w)`:
/// `dim H^i(ΛW) = dim coker(e·)^i + dim ker(e·)^(i−deg w)` with `e = [d w]`.
pub fn gysin_sequence_check(
    model: &SullivanModel,
    w: usize,
    options: &BettiOptions,
) -> Result<(SequenceCheckResult, EulerSquare), SequenceError> {
    if !model.algebra().is_odd(w) {
        return Err(SequenceError::NotOdd(model.name(w).to_string()));
    }
    let (base, euler) = gysin_base(model, w)?;
    let euler_square = euler_class_square_check(model, w)?;
    let deg_w = model.algebra().degree(w) as i64;
    let shift = deg_w + 1;
    let (top, complete, total_dim, total_betti) = degree_bound(model, options);
    let base_table = cohomology::betti(&base, options);
    let balg = base.algebra().clone();
    let op = |p: &Polynomial| balg.mul(&euler, p);

    let mut cache = CohomologyCache::new(&base);
    let mut rows = Vec::new();
    for i in 0..=top as i64 {
        let coker = cache.dim(i) - cache.induced_rank(i - shift, shift, op);
        let ker_deg = i - deg_w;
        let ker = cache.dim(ker_deg) - cache.induced_rank(ker_deg, shift, op);
        rows.push(SequenceRow {
            degree: i as u32,
            coker,
            total: total_betti[i as usize],
            ker,
        });
    }
    let identity_holds = rows.iter().all(|r| r.total == r.coker + r.ker);
    let base_top = if base_table.complete {
        base_table.max_degree_computed
    } else {
        top
    };
    let coker_degrees: Vec<u32> = (0..=base_top as i64)
        .filter(|&j| cache.dim(j) > cache.induced_rank(j - shift, shift, op))
        .map(|j| j as u32)
        .collect();
    let square_zero = (0..=base_top).all(|j| cache.induced_vanishes(j, 2 * shift, |p| op(&op(p))));
    let connecting_rank = (0..=base_top as i64)
        .map(|j| cache.induced_rank(j, shift, op))
        .sum();
    Ok((
        SequenceCheckResult {
            generator: model.name(w).to_string(),
            identity_holds,
            strictness_witness: coker_degrees.first().copied(),
            coker_degrees,
            rows,
            square_zero,
            connecting_rank,
            total_dim,
            smaller_dim: base_table.complete.then_some(base_table.total),
            complete: complete && base_table.complete,
        },
        euler_square,
    ))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GysinStep {
    pub sequence: SequenceCheckResult,
    pub euler_square: EulerSquare,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GysinChain {
    pub steps: Vec<GysinStep>,
    /// `dim H` of the model, then of each successive base.
    pub dims: Vec<usize>,
    /// The first step whose Euler class does not square to zero in
    /// cohomology, if any.
    pub failed_at: Option<String>,
    /// `dims[0] ≥ dims[j] + j` for every `j`.
    pub chain_holds: bool,
}

/// Peels `order` one generator at a time (each must be odd and absent from
/// the remaining differentials) and checks every Gysin step.
pub fn gysin_chain_check(
    model: &SullivanModel,
    order: &[usize],
    options: &BettiOptions,
) -> Result<GysinChain, SequenceError> {
    let mut current = model.clone();
    let mut ids: Vec<usize> = (0..model.dim_w()).collect();
    let mut steps = Vec::new();
    let mut dims = Vec::new();
    let mut failed_at = None;
    let top_dim = cohomology::betti(model, options);
    if !top_dim.complete {
        return Err(SequenceError::NotFinite(model.name(0).to_string()));
    }
    dims.push(top_dim.total);
    for &w in order {
        let local = ids
            .iter()
            .position(|&g| g == w)
            .ok_or_else(|| SequenceError::NotInBase(model.name(w).to_string()))?;
        let (seq, euler_square) = gysin_sequence_check(&current, local, options)?;
        if !euler_square.cohomological && failed_at.is_none() {
            failed_at = Some(model.name(w).to_string());
        }
        let (base, _) = gysin_base(&current, local)?;
        let base_dim = seq
            .smaller_dim
            .ok_or_else(|| SequenceError::NotFinite(model.name(w).to_string()))?;
        dims.push(base_dim);
        steps.push(GysinStep {
            sequence: seq,
            euler_square,
        });
        ids.remove(local);
        current = base;
    }
    let chain_holds = dims.iter().enumerate().all(|(j, &d)| dims[0] >= d + j);
    Ok(GysinChain {
        steps,
        dims,
        failed_at,
        chain_holds,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DoublingRoute {
    /// `w` closed: compare with the fibre `(Λ(W∖w), d̄)`.
    Wang,
    /// `w` attached on top: compare with the base `Λ(W∖w)`.
    Gysin,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DoublingCheck {
    pub route: DoublingRoute,
    pub total_dim: Option<usize>,
    pub smaller_dim: Option<usize>,
    /// `dim H^i(ΛW) ≤ dim H^i + dim H^(i−deg w)` of the smaller algebra in
    /// every computed degree.
    pub degreewise: bool,
    /// `dim H(ΛW) ≤ 2·dim H(smaller)` when both totals are known.
    pub holds: Option<bool>,
    pub equality: Option<bool>,
    /// The connecting map vanishes on cohomology.
    pub kunneth: bool,
}

pub fn doubling_bound_check(
    model: &SullivanModel,
    w: usize,
    options: &BettiOptions,
) -> Result<DoublingCheck, SequenceError> {
    let alg = model.algebra();
    if !alg.is_odd(w) {
        return Err(SequenceError::NotOdd(model.name(w).to_string()));
    }
    let deg_w = alg.degree(w) as usize;
    let (route, smaller, kunneth) = if model.is_closed(w) {
        let seq = wang_sequence_check(model, w, options)?;
        let (fibre, _) = wang_split(model, w)?.fibre(model);
        (DoublingRoute::Wang, fibre, seq.connecting_rank == 0)
    } else {
        let (base, euler) = gysin_base(model, w)?;
        let kunneth = cohomology::is_exact(&base, &euler)?;
        (DoublingRoute::Gysin, base, kunneth)
    };
    let total = cohomology::betti(model, options);
    let small = cohomology::betti(&smaller, options);
    let degreewise = (0..total.betti.len()).all(|i| {
        let below = if i >= deg_w { small.get(i - deg_w) } else { 0 };
        total.betti[i] <= small.get(i) + below
    });
    let totals = (total.complete && small.complete).then_some((total.total, small.total));
    Ok(DoublingCheck {
        route,
        total_dim: totals.map(|t| t.0),
        smaller_dim: totals.map(|t| t.1),
        degreewise,
        holds: totals.map(|(t, s)| t <= 2 * s),
        equality: totals.map(|(t, s)| t == 2 * s),
        kunneth,
    })
}
