//! The Hilali inequality `dim H(ΛW) ≥ dim W` and the counting bounds for
//! two-stage models `Λ(U ⊕ V)` with `dU = 0`, `dV ⊆ ΛU`.
//!
//! A two-stage model is summarised by the triple `(n1, n2, r)`: `n1` even
//! and `n2` odd generators in `U`, and `dim V = n1 + r`.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::classify::is_hyperelliptic;
use crate::cohomology::Slice;
use crate::cohomology::{self, BettiOptions, BettiTable, EllipticStatus};
use crate::linalg::{self, QMatrix};
use crate::model::SullivanModel;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Triple {
    pub n1: u32,
    pub n2: u32,
    pub r: u32,
}

impl Triple {
    pub const fn new(n1: u32, n2: u32, r: u32) -> Self {
        Triple { n1, n2, r }
    }

    pub fn n(&self) -> u32 {
        self.n1 + self.n2
    }
}

impl std::fmt::Display for Triple {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{},{})", self.n1, self.n2, self.r)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TwoStageCounts {
    /// `dim Λ²U = n(n−1)/2 + n1`.
    pub lambda2_dim: i64,
    /// `1 − r + (n² + n)/2`.
    pub wordlength2_lower: i64,
    /// `n + n1 + r`.
    pub target: i64,
    pub remark_bound: i64,
}

pub fn two_stage_counts(n: u32, n1: u32, r: u32) -> TwoStageCounts {
    let (n, n1, r) = (n as i64, n1 as i64, r as i64);
    TwoStageCounts {
        lambda2_dim: n * (n - 1) / 2 + n1,
        wordlength2_lower: 1 - r + (n * n + n) / 2,
        target: n + n1 + r,
        remark_bound: if n > n1 {
            2 * n1 * (n - n1)
        } else {
            n1 * (n - n1)
        },
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Disjunction {
    /// `n1 + 2r ≤ 1 + (n² − n)/2`.
    First,
    /// `n + n1 + r ≤ 2^r`.
    Second,
    Neither,
}

pub fn disjunction(t: Triple) -> Disjunction {
    let (n, n1, r) = (t.n() as u128, t.n1 as u128, t.r as u128);
    if 2 * (n1 + 2 * r) <= 2 + n * n - n {
        Disjunction::First
    } else if r < 127 && n + n1 + r <= 1u128 << r {
        Disjunction::Second
    } else {
        Disjunction::Neither
    }
}

/// Triples with `n1 ≤ n ≤ n_max`, `r ≤ r_max` failing both conditions.
pub fn scan_triples(n_max: u32, r_max: u32) -> Vec<Triple> {
    let mut out = Vec::new();
    for n in 0..=n_max {
        for n1 in 0..=n {
            for r in 0..=r_max {
                let t = Triple::new(n1, n - n1, r);
                if disjunction(t) == Disjunction::Neither {
                    out.push(t);
                }
            }
        }
    }
    out.sort();
    out
}

/// The scan over `n ≤ 5`, `r ≤ 3`.
pub fn exceptional_triples() -> Vec<Triple> {
    scan_triples(5, 3)
}

/// `2 · (n2 + n1·n2)`: twice the odd classes of word length one and two,
/// valid when the Euler characteristic vanishes.
pub fn special_case_value(t: Triple) -> u64 {
    2 * (t.n2 as u64 + t.n1 as u64 * t.n2 as u64)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpecialCase {
    pub triple: Triple,
    pub bound: u64,
    pub euler: i64,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SpecialCaseError {
    #[error("model is not two-stage")]
    NotTwoStage,
    #[error("n2 = 0: the pure case")]
    Pure,
    #[error("ellipticity is not certified")]
    NotCertified,
    #[error("needs more odd than even generators")]
    NotOddDominated,
    #[error("Euler characteristic is {0}, not 0")]
    NonzeroEuler(i64),
}

/// The doubling estimate used for the exceptional triples.
pub fn special_case_bound(model: &SullivanModel) -> Result<SpecialCase, SpecialCaseError> {
    let t = two_stage_triple(model).ok_or(SpecialCaseError::NotTwoStage)?;
    if t.n2 == 0 {
        return Err(SpecialCaseError::Pure);
    }
    if model.odd_ids().len() <= model.even_ids().len() {
        return Err(SpecialCaseError::NotOddDominated);
    }
    let table = cohomology::betti(model, &BettiOptions::default());
    if !table.complete {
        return Err(SpecialCaseError::NotCertified);
    }
    if table.euler != 0 {
        return Err(SpecialCaseError::NonzeroEuler(table.euler));
    }
    let bound = special_case_value(t);
    Ok(SpecialCase {
        triple: t,
        bound,
        euler: table.euler,
        holds: table.total as u64 >= bound,
    })
}

/// `U` = stage 0, `V` = stage 1 of a model with at most two stages.
pub fn two_stage_split(model: &SullivanModel) -> Option<(Vec<usize>, Vec<usize>)> {
    let stages = model.stage_decomposition().ok()?;
    if stages.num_stages() > 2 {
        return None;
    }
    let u = stages.block(0..1);
    let v = stages.block(1..stages.num_stages());
    Some((u, v))
}

/// The triple of a two-stage model, when `dim V ≥ n1`.
pub fn two_stage_triple(model: &SullivanModel) -> Option<Triple> {
    let (u, v) = two_stage_split(model)?;
    let alg = model.algebra();
    let n1 = u.iter().filter(|&&g| !alg.is_odd(g)).count() as u32;
    let n2 = u.len() as u32 - n1;
    let r = (v.len() as u32).checked_sub(n1)?;
    Some(Triple::new(n1, n2, r))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct WordLengthCensus {
    /// Classes represented by `Λ^{≤2}U`, counted directly.
    pub classes: usize,
    /// `d` maps `V` injectively into `Λ²U`.
    pub relations_independent: bool,
}

/// Counts the cohomology classes represented by elements of `Λ^{≤2}U`:
/// in each degree, `dim S − dim(S ∩ im d)` for the span `S` of those
/// monomials.
pub fn wordlength2_census(model: &SullivanModel) -> Option<WordLengthCensus> {
    let (u, v) = two_stage_split(model)?;
    let alg = model.algebra();
    let wl2: Vec<_> = {
        let top = u.iter().map(|&g| 2 * alg.degree(g)).max().unwrap_or(0);
        (0..=top)
            .flat_map(|n| {
                alg.basis_in(n, &u, Some(0..=2))
                    .into_iter()
                    .map(move |m| (n, m))
            })
            .collect()
    };
    let mut degrees: Vec<u32> = wl2.iter().map(|(n, _)| *n).collect();
    degrees.dedup();
    let classes = degrees
        .par_iter()
        .map(|&n| {
            let s: Vec<_> = wl2
                .iter()
                .filter(|(k, _)| *k == n)
                .map(|(_, m)| m.clone())
                .collect();
            if n == 0 {
                return s.len();
            }
            let slice = Slice::new(model, n);
            let boundaries = cohomology::coboundary_matrix(model, n - 1);
            let b_rank = linalg::rank(&boundaries);
            let mut columns: Vec<_> = (0..boundaries.cols())
                .map(|j| boundaries.column(j).clone())
                .collect();
            for m in &s {
                let pos = slice.position(m).expect("monomial of degree n");
                columns.push([(pos, crate::algebra::q(1))].into_iter().collect());
            }
            let joint = linalg::rank(&QMatrix::from_columns(slice.dim(), columns));
            // dim(S ∩ B) = dim S + dim B − dim(S + B)
            let meet = s.len() + b_rank - joint;
            s.len() - meet
        })
        .sum();

    let images: Vec<_> = v.iter().map(|&y| model.d_of(y)).collect();
    let in_lambda2 = images.iter().all(|p| {
        p.monomials()
            .all(|m| m.word_length() == 2 && m.generators().all(|g| u.contains(&g)))
    });
    let relations_independent = in_lambda2 && {
        let mut by_degree: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
        for (i, &y) in v.iter().enumerate() {
            by_degree.entry(alg.degree(y) + 1).or_default().push(i);
        }
        by_degree.iter().all(|(&n, idx)| {
            let slice = Slice::new(model, n);
            let cols = idx
                .iter()
                .map(|&i| slice.sparse_coords(images[i]).into_iter().collect())
                .collect();
            linalg::rank(&QMatrix::from_columns(slice.dim(), cols)) == idx.len()
        })
    };
    Some(WordLengthCensus {
        classes,
        relations_independent,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Fails,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    /// No even generators: `ΛW` is finite-dimensional and every degree was
    /// computed.
    Direct,
    /// Degrees above the formal dimension were discarded on the strength of
    /// the ellipticity certificate.
    Certificate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Bound {
    pub value: u64,
    /// `dim H ≥ value`, when `dim H` is known.
    pub holds: Option<bool>,
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HilaliReport {
    pub dim_w: usize,
    pub dim_h: usize,
    /// `dim_h` counts every degree.
    pub complete: bool,
    pub betti: BettiTable,
    pub verdict: Verdict,
    pub route: Route,
    pub elliptic: EllipticStatus,
    pub triple: Option<Triple>,
    pub bounds: BTreeMap<String, Bound>,
    pub warnings: Vec<String>,
}

fn pow2(e: u32) -> u64 {
    1u64.checked_shl(e).unwrap_or(u64::MAX)
}

pub fn verify_hilali(model: &SullivanModel) -> HilaliReport {
    verify_hilali_with(model, &BettiOptions::default())
}

pub fn verify_hilali_with(model: &SullivanModel, options: &BettiOptions) -> HilaliReport {
    let cert = cohomology::elliptic_certificate(model, &Default::default());
    let betti = cohomology::betti(model, options);
    let dim_w = model.dim_w();
    let dim_h = betti.total;
    let complete = betti.complete;
    let verdict = match (complete, dim_h >= dim_w) {
        (true, true) => Verdict::Holds,
        (true, false) => Verdict::Fails,
        (false, _) => Verdict::Inconclusive,
    };
    let route = if model.even_ids().is_empty() {
        Route::Direct
    } else {
        Route::Certificate
    };
    let check = |value: u64| complete.then_some(dim_h as u64 >= value);
    let mut bounds = BTreeMap::new();
    let mut warnings = Vec::new();
    if !complete {
        warnings.push(format!(
            "cohomology computed through degree {} only; ellipticity {:?}",
            betti.max_degree_computed, cert.status
        ));
    }

    let triple = two_stage_triple(model);
    if let Some(t) = triple {
        let counts = two_stage_counts(t.n(), t.n1, t.r);
        let jl = pow2(t.r);
        bounds.insert(
            "jl".to_string(),
            Bound {
                value: jl,
                holds: check(jl),
                note: Some("2^(dim V - dim U^even)".into()),
            },
        );
        let naive_exp = model.dim_w() as u32 - model.even_ids().len() as u32;
        let naive = pow2(naive_exp);
        let naive_holds = check(naive);
        if naive_holds == Some(false) {
            warnings.push(format!(
                "2^(dim W - dim W^even) = {naive} exceeds dim H = {dim_h}; the jl bound only applies with V the second stage"
            ));
        }
        bounds.insert(
            "jl_all_generators".to_string(),
            Bound {
                value: naive,
                holds: naive_holds,
                note: Some("2^(dim W - dim W^even), reported only".into()),
            },
        );
        for (name, value) in [
            ("wordlength2", counts.wordlength2_lower),
            ("target", counts.target),
            ("remark", counts.remark_bound),
        ] {
            let value = value.max(0) as u64;
            bounds.insert(
                name.to_string(),
                Bound {
                    value,
                    holds: check(value),
                    note: None,
                },
            );
        }
        if let Ok(special) = special_case_bound(model) {
            bounds.insert(
                "special_case".to_string(),
                Bound {
                    value: special.bound,
                    holds: Some(special.holds),
                    note: Some(format!("triple {}", special.triple)),
                },
            );
        }
    }
    if is_hyperelliptic(model) {
        let odd = model.odd_ids().len() as i64;
        let even = model.even_ids().len() as i64;
        if odd >= even {
            let value = pow2((odd - even) as u32);
            bounds.insert(
                "toral".to_string(),
                Bound {
                    value,
                    holds: check(value),
                    note: Some("2^(dim W^odd - dim W^even)".into()),
                },
            );
        }
    }

    HilaliReport {
        dim_w,
        dim_h,
        complete,
        betti,
        verdict,
        route,
        elliptic: cert.status,
        triple,
        bounds,
        warnings,
    }
}
