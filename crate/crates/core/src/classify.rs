//! Structural classes: pure, two-stage, hyperelliptic, and the fibration
//! class built from Wang and Gysin steps around an inner block.
//!
//! A class-(ℐ) split is given by two stage boundaries. With `S` stages,
//! `0 ≤ a_end ≤ b_end ≤ S` cut the generators into
//! `A = {lowdeg < a_end}`, `B = {a_end ≤ lowdeg < b_end}` and
//! `C = {lowdeg ≥ b_end}`. The outer blocks `A` and `C` must be odd, the
//! inner block `B` must be a sub-algebra with `dim H(ΛB) ≥ dim B`.
//!
//! Two variants are evaluated:
//!
//! * variant 1: `(d w)² = 0` for `w ∈ C` and `θ_a²(u) = 0` for `a ∈ A`,
//!   `u ∈ A ∪ B`, each `θ_a` taken on `Λ(A ∪ B)` after the earlier
//!   members of `A` are set to zero;
//! * variant 2: `(d w)²` vanishes once `A ↦ 0` for `w ∈ C`, and `θ_a² = 0`
//!   as a derivation of the whole model after the earlier members of `A`
//!   are set to zero.
//!
//! Every condition is reported both literally and in its cohomological
//! form: the square of the Euler class is exact in the Gysin base, and
//! `(θ*)² = 0` on the cohomology of the Wang fibre.

use serde::Serialize;

use crate::cohomology::{
    self, BettiOptions, CertificateOptions, EllipticStatus, EllipticityCertificate,
};
use crate::error::ClassifyError;
use crate::model::{StageDecomposition, SullivanModel};
use crate::sequences;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    One,
    Two,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct ClassISplit {
    pub a_end: usize,
    pub b_end: usize,
    pub variant: Variant,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Blocks {
    pub a: Vec<String>,
    pub b: Vec<String>,
    pub c: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionCheck {
    pub generator: String,
    pub strict: bool,
    pub cohomological: bool,
}

/// `dim H(ΛW) ≥ dim H(Λ(A∪B)) + |C|`, `dim H(Λ(A∪B)) ≥ dim H(ΛB) + |A|`
/// and `dim H(ΛB) ≥ |B|`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundChain {
    pub total: usize,
    pub outer_base: usize,
    pub inner: usize,
    pub holds: bool,
    pub implies_hilali: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassICheck {
    pub split: ClassISplit,
    pub blocks: Blocks,
    /// Each member of `A` is closed in its peel algebra.
    pub peel_closed: bool,
    pub euler_conditions: Vec<ConditionCheck>,
    pub theta_conditions: Vec<ConditionCheck>,
    /// `dim H(ΛB) ≥ dim B`, when `H(ΛB)` is certified finite.
    pub inner_hilali: Option<bool>,
    /// All conditions hold literally.
    pub strict: bool,
    /// All conditions hold in their cohomological form.
    pub cohomological: bool,
    pub bound_chain: Option<BoundChain>,
}

impl ClassICheck {
    pub fn nontrivial(&self) -> bool {
        !(self.blocks.a.is_empty() && self.blocks.c.is_empty())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassificationReport {
    pub pure: bool,
    pub two_stage: bool,
    pub hyperelliptic: bool,
    pub stages: usize,
    pub lowdeg: Vec<usize>,
    /// Every nontrivial split, both variants, in search order.
    pub class_i: Vec<ClassICheck>,
    /// Some split passes one of the variants literally.
    pub class_i_member: bool,
    pub elliptic: EllipticityCertificate,
    pub warnings: Vec<String>,
}

fn names(model: &SullivanModel, ids: &[usize]) -> Vec<String> {
    ids.iter().map(|&g| model.name(g).to_string()).collect()
}

/// `d(W^even) = 0` and every term of every `d(W^odd)` contains an even
/// generator.
pub fn is_hyperelliptic(model: &SullivanModel) -> bool {
    let alg = model.algebra();
    (0..model.dim_w()).all(|g| {
        if alg.is_odd(g) {
            model
                .d_of(g)
                .monomials()
                .all(|m| m.generators().any(|h| !alg.is_odd(h)))
        } else {
            model.is_closed(g)
        }
    })
}

fn order_by_stage(stages: &StageDecomposition, ids: &mut [usize]) {
    ids.sort_by_key(|&g| (stages.lowdeg[g], g));
}

fn hilali_of(model: &SullivanModel, options: &BettiOptions) -> (Option<usize>, Option<bool>) {
    let table = cohomology::betti(model, options);
    if table.complete {
        (Some(table.total), Some(table.total >= model.dim_w()))
    } else {
        (None, None)
    }
}

fn local(map: &[Option<usize>], g: usize) -> usize {
    map[g].expect("generator kept in the restriction")
}

/// Evaluates one split. Fails when an outer block contains an even
/// generator or `d(B) ⊄ ΛB`.
pub fn class_i_check(
    model: &SullivanModel,
    split: ClassISplit,
    inner_hilali: Option<bool>,
    options: &BettiOptions,
) -> Result<ClassICheck, ClassifyError> {
    let stages = model.stage_decomposition()?;
    let s = stages.num_stages();
    if split.a_end > split.b_end || split.b_end > s {
        return Err(ClassifyError::InvalidSplit(format!(
            "boundaries {}..{} outside 0..={s}",
            split.a_end, split.b_end
        )));
    }
    let mut a = stages.block(0..split.a_end);
    let mut b = stages.block(split.a_end..split.b_end);
    let mut c = stages.block(split.b_end..s);
    order_by_stage(&stages, &mut a);
    order_by_stage(&stages, &mut b);
    order_by_stage(&stages, &mut c);
    let alg = model.algebra();
    if let Some(&g) = a.iter().chain(&c).find(|&&g| !alg.is_odd(g)) {
        return Err(ClassifyError::InvalidSplit(format!(
            "outer block contains even generator `{}`",
            model.name(g)
        )));
    }
    let (inner, _) = model
        .sub_dga(&b)
        .map_err(|_| ClassifyError::InvalidSplit("the inner block is not closed under d".into()))?;
    let inner_hilali = inner_hilali.or_else(|| hilali_of(&inner, options).1);

    let mut ab = a.clone();
    ab.extend_from_slice(&b);
    let (outer_base, ab_map) = model.sub_dga(&ab)?;

    let mut euler_conditions = Vec::new();
    for (j, &w) in c.iter().enumerate() {
        let mut ids = ab.clone();
        ids.extend_from_slice(&c[..=j]);
        let (step, map) = model.sub_dga(&ids)?;
        let lw = local(&map, w);
        let (base, euler) = sequences::gysin_base(&step, lw)?;
        let square = base.algebra().mul(&euler, &euler);
        let check = match split.variant {
            Variant::One => {
                let strict = square.is_zero();
                ConditionCheck {
                    generator: model.name(w).to_string(),
                    strict,
                    cohomological: strict || cohomology::is_exact(&base, &square).unwrap_or(false),
                }
            }
            Variant::Two => {
                let killed: Vec<usize> = a
                    .iter()
                    .map(|&g| base.id_of(model.name(g)).expect("A lies in every base"))
                    .collect();
                let projected = square.evaluate_zero(|g| !killed.contains(&g));
                let strict = projected.is_zero();
                let cohomological = strict || {
                    let (pbase, pmap) = base.quotient(&killed);
                    let p = projected.reindex(&pmap).expect("A was evaluated away");
                    cohomology::is_exact(&pbase, &p).unwrap_or(false)
                };
                ConditionCheck {
                    generator: model.name(w).to_string(),
                    strict,
                    cohomological,
                }
            }
        };
        euler_conditions.push(check);
    }

    let mut peel_closed = true;
    let mut theta_conditions = Vec::new();
    for (i, &w) in a.iter().enumerate() {
        let (ambient, map) = match split.variant {
            Variant::One => {
                let killed: Vec<usize> = a[..i].iter().map(|&g| local(&ab_map, g)).collect();
                let (q, qmap) = outer_base.quotient(&killed);
                let composed: Vec<Option<usize>> =
                    ab_map.iter().map(|m| m.and_then(|l| qmap[l])).collect();
                (q, composed)
            }
            Variant::Two => model.quotient(&a[..i]),
        };
        let lw = local(&map, w);
        let Ok(split_w) = sequences::wang_split(&ambient, lw) else {
            peel_closed = false;
            theta_conditions.push(ConditionCheck {
                generator: model.name(w).to_string(),
                strict: false,
                cohomological: false,
            });
            continue;
        };
        let square = sequences::theta_square_check(ambient.algebra(), &split_w.theta);
        let strict = match split.variant {
            Variant::One => square.generatorwise,
            Variant::Two => square.derivationwise,
        };
        let cohomological = strict
            || sequences::wang_sequence_check(&ambient, lw, options)
                .map(|r| r.complete && r.square_zero)
                .unwrap_or(false);
        theta_conditions.push(ConditionCheck {
            generator: model.name(w).to_string(),
            strict,
            cohomological,
        });
    }

    let hilali_ok = inner_hilali == Some(true);
    let strict = peel_closed
        && hilali_ok
        && euler_conditions.iter().all(|c| c.strict)
        && theta_conditions.iter().all(|c| c.strict);
    let cohomological = peel_closed
        && hilali_ok
        && euler_conditions.iter().all(|c| c.cohomological)
        && theta_conditions.iter().all(|c| c.cohomological);

    let bound_chain = if cohomological {
        bound_chain(model, &outer_base, &inner, a.len(), c.len(), options)
    } else {
        None
    };

    Ok(ClassICheck {
        split,
        blocks: Blocks {
            a: names(model, &a),
            b: names(model, &b),
            c: names(model, &c),
        },
        peel_closed,
        euler_conditions,
        theta_conditions,
        inner_hilali,
        strict,
        cohomological,
        bound_chain,
    })
}

fn bound_chain(
    model: &SullivanModel,
    outer_base: &SullivanModel,
    inner: &SullivanModel,
    a_len: usize,
    c_len: usize,
    options: &BettiOptions,
) -> Option<BoundChain> {
    let total = hilali_of(model, options).0?;
    let outer = hilali_of(outer_base, options).0?;
    let inner_dim = hilali_of(inner, options).0?;
    let holds = total >= outer + c_len && outer >= inner_dim + a_len && inner_dim >= inner.dim_w();
    Some(BoundChain {
        total,
        outer_base: outer,
        inner: inner_dim,
        holds,
        implies_hilali: holds && total >= model.dim_w(),
    })
}

/// Every nontrivial split with odd outer blocks and a closed inner block,
/// for both variants.
pub fn class_i_candidates(
    model: &SullivanModel,
    options: &BettiOptions,
) -> Result<Vec<ClassICheck>, ClassifyError> {
    let s = model.stage_decomposition()?.num_stages();
    let mut out = Vec::new();
    for a_end in 0..=s {
        for b_end in a_end..=s {
            if a_end == 0 && b_end == s {
                continue;
            }
            for variant in [Variant::One, Variant::Two] {
                let split = ClassISplit {
                    a_end,
                    b_end,
                    variant,
                };
                match class_i_check(model, split, None, options) {
                    Ok(check) => out.push(check),
                    Err(ClassifyError::InvalidSplit(_)) => {}
                    Err(e) => return Err(e),
                }
            }
        }
    }
    Ok(out)
}

/// Splits passing one variant literally.
pub fn class_i_search(
    model: &SullivanModel,
    options: &BettiOptions,
) -> Result<Vec<ClassICheck>, ClassifyError> {
    Ok(class_i_candidates(model, options)?
        .into_iter()
        .filter(|c| c.strict && c.nontrivial())
        .collect())
}

pub fn classify(model: &SullivanModel) -> Result<ClassificationReport, ClassifyError> {
    classify_with(model, &BettiOptions::default())
}

pub fn classify_with(
    model: &SullivanModel,
    options: &BettiOptions,
) -> Result<ClassificationReport, ClassifyError> {
    let stages = model.stage_decomposition()?;
    let elliptic = cohomology::elliptic_certificate(model, &CertificateOptions::default());
    let class_i = class_i_candidates(model, options)?;
    let class_i_member = class_i.iter().any(|c| c.strict);

    let mut warnings = Vec::new();
    if elliptic.status != EllipticStatus::Certified {
        warnings.push(format!(
            "ellipticity {}: {}",
            match elliptic.status {
                EllipticStatus::NotElliptic => "refuted",
                _ => "inconclusive",
            },
            elliptic
                .reason
                .clone()
                .unwrap_or_else(|| "no vanishing window found".into())
        ));
    }
    for check in class_i
        .iter()
        .filter(|c| c.split.variant == Variant::Two && c.strict)
    {
        let one = class_i.iter().find(|o| {
            o.split.variant == Variant::One
                && (o.split.a_end, o.split.b_end) == (check.split.a_end, check.split.b_end)
        });
        if one.is_some_and(|o| !o.strict) {
            warnings.push(format!(
                "class (I) readings disagree: variant 2 accepts A={{{}}} B={{{}}} C={{{}}} but variant 1 rejects it",
                check.blocks.a.join(","),
                check.blocks.b.join(","),
                check.blocks.c.join(",")
            ));
        }
    }
    if let Some(w) = class_i
        .iter()
        .find(|c| c.strict && c.blocks.b.is_empty() && c.blocks.c.is_empty())
    {
        warnings.push(format!(
            "class (I) witness peels every generator through Wang steps (variant {}); the Gysin conditions are vacuous",
            if w.split.variant == Variant::One { 1 } else { 2 }
        ));
    }

    Ok(ClassificationReport {
        pure: model.is_pure(),
        two_stage: stages.num_stages() <= 2,
        hyperelliptic: is_hyperelliptic(model),
        stages: stages.num_stages(),
        lowdeg: stages.lowdeg,
        class_i,
        class_i_member,
        elliptic,
        warnings,
    })
}
