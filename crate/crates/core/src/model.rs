//! Sullivan algebras `(ΛW, d)`: construction, validation, the lowdeg stage
//! filtration and the associated pure model.

use std::fmt;

use serde::Serialize;

use crate::algebra::{FreeAlgebra, Generator, Polynomial};
use crate::derivation::Derivation;
use crate::error::{ModelError, SequenceError};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ValidationOptions {
    /// Accept degree-1 generators (reported as a warning instead).
    pub allow_degree_one: bool,
    pub check_minimality: bool,
}

impl Default for ValidationOptions {
    fn default() -> Self {
        ValidationOptions {
            allow_degree_one: false,
            check_minimality: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    DegreeFloor {
        generator: String,
        degree: u32,
    },
    /// `found` is `None` when `d w` mixes degrees.
    DegreeMismatch {
        generator: String,
        expected: u32,
        found: Option<u32>,
    },
    NotMinimal {
        generator: String,
    },
    DSquaredNonzero {
        generator: String,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DegreeFloor { generator, degree } => {
                write!(
                    f,
                    "generator `{generator}` has degree {degree} below the floor"
                )
            }
            Violation::DegreeMismatch {
                generator,
                expected,
                found: Some(found),
            } => write!(f, "d {generator} has degree {found}, expected {expected}"),
            Violation::DegreeMismatch {
                generator,
                expected,
                found: None,
            } => write!(
                f,
                "d {generator} is not homogeneous (expected degree {expected})"
            ),
            Violation::NotMinimal { generator } => {
                write!(f, "d {generator} has a term of word length < 2")
            }
            Violation::DSquaredNonzero { generator } => write!(f, "d(d {generator}) != 0"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub warnings: Vec<String>,
}

impl ValidationReport {
    pub fn accepted(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.violations.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join("; "))
    }
}

/// A free graded-commutative algebra with a degree +1 derivation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SullivanModel {
    alg: FreeAlgebra,
    d: Derivation,
}

impl SullivanModel {
    /// Assembles a model without checking any of the Sullivan conditions.
    pub fn from_parts(alg: FreeAlgebra, differentials: Vec<Polynomial>) -> Self {
        assert_eq!(alg.len(), differentials.len());
        SullivanModel {
            d: Derivation::new(1, differentials),
            alg,
        }
    }

    /// Assembles and validates a model.
    pub fn new(
        alg: FreeAlgebra,
        differentials: Vec<Polynomial>,
        options: &ValidationOptions,
    ) -> Result<Self, ModelError> {
        let model = SullivanModel::from_parts(alg, differentials);
        let report = model.validate(options);
        if report.accepted() {
            Ok(model)
        } else {
            Err(ModelError::Invalid(report))
        }
    }

    pub fn algebra(&self) -> &FreeAlgebra {
        &self.alg
    }

    pub fn generators(&self) -> &[Generator] {
        self.alg.generators()
    }

    pub fn dim_w(&self) -> usize {
        self.alg.len()
    }

    pub fn differential(&self) -> &Derivation {
        &self.d
    }

    pub fn d_of(&self, id: usize) -> &Polynomial {
        self.d.value(id)
    }

    pub fn d(&self, p: &Polynomial) -> Polynomial {
        self.d.apply(&self.alg, p)
    }

    pub fn id_of(&self, name: &str) -> Option<usize> {
        self.alg.id_of(name)
    }

    pub fn name(&self, id: usize) -> &str {
        &self.alg.generator(id).name
    }

    pub fn odd_ids(&self) -> Vec<usize> {
        (0..self.dim_w()).filter(|&g| self.alg.is_odd(g)).collect()
    }

    pub fn even_ids(&self) -> Vec<usize> {
        (0..self.dim_w()).filter(|&g| !self.alg.is_odd(g)).collect()
    }

    pub fn is_closed(&self, id: usize) -> bool {
        self.d_of(id).is_zero()
    }

    /// Generators not mentioned in any differential.
    pub fn is_free_of(&self, id: usize) -> bool {
        (0..self.dim_w()).all(|g| !self.d_of(g).mentions(id))
    }

    pub fn validate(&self, options: &ValidationOptions) -> ValidationReport {
        let mut report = ValidationReport::default();
        for g in self.generators() {
            if g.degree == 1 {
                if options.allow_degree_one {
                    report
                        .warnings
                        .push(format!("generator `{}` has degree 1", g.name));
                } else {
                    report.violations.push(Violation::DegreeFloor {
                        generator: g.name.clone(),
                        degree: g.degree,
                    });
                }
            }
        }
        for g in self.generators() {
            let dw = self.d_of(g.id);
            let expected = g.degree + 1;
            match self.alg.degree_of(dw) {
                Ok(Some(found)) if found != expected => {
                    report.violations.push(Violation::DegreeMismatch {
                        generator: g.name.clone(),
                        expected,
                        found: Some(found),
                    });
                }
                Err(_) => report.violations.push(Violation::DegreeMismatch {
                    generator: g.name.clone(),
                    expected,
                    found: None,
                }),
                _ => {}
            }
            if options.check_minimality && dw.min_word_length().is_some_and(|wl| wl < 2) {
                report.violations.push(Violation::NotMinimal {
                    generator: g.name.clone(),
                });
            }
            if !self.d(dw).is_zero() {
                report.violations.push(Violation::DSquaredNonzero {
                    generator: g.name.clone(),
                });
            }
        }
        report
    }

    /// The subalgebra `Λ(ids)`, which must be closed under `d`.
    pub fn sub_dga(
        &self,
        ids: &[usize],
    ) -> Result<(SullivanModel, Vec<Option<usize>>), SequenceError> {
        let (alg, map) = self.alg.restrict(ids);
        let mut diffs = vec![Polynomial::zero(); alg.len()];
        for (old, new) in map.iter().enumerate() {
            if let Some(new) = *new {
                diffs[new] = self
                    .d_of(old)
                    .reindex(&map)
                    .ok_or_else(|| SequenceError::NotInBase(self.name(old).to_string()))?;
            }
        }
        Ok((SullivanModel::from_parts(alg, diffs), map))
    }

    /// `Λ(W ∖ killed)` with the differential followed by `killed ↦ 0`.
    pub fn quotient(&self, killed: &[usize]) -> (SullivanModel, Vec<Option<usize>>) {
        let keep: Vec<usize> = (0..self.dim_w()).filter(|g| !killed.contains(g)).collect();
        let (alg, map) = self.alg.restrict(&keep);
        let mut diffs = vec![Polynomial::zero(); alg.len()];
        for (old, new) in map.iter().enumerate() {
            if let Some(new) = *new {
                diffs[new] = self
                    .d_of(old)
                    .evaluate_zero(|g| map[g].is_some())
                    .reindex(&map)
                    .expect("killed generators were evaluated away");
            }
        }
        (SullivanModel::from_parts(alg, diffs), map)
    }

    pub fn stage_decomposition(&self) -> Result<StageDecomposition, ModelError> {
        let n = self.dim_w();
        let mut lowdeg = vec![0usize; n];
        for _ in 0..=n {
            let mut changed = None;
            for w in 0..n {
                let dw = self.d_of(w);
                if dw.is_zero() {
                    continue;
                }
                let level = 1 + dw
                    .monomials()
                    .flat_map(|m| m.generators())
                    .map(|g| lowdeg[g])
                    .max()
                    .unwrap_or(0);
                if level > lowdeg[w] {
                    lowdeg[w] = level;
                    changed = Some(w);
                }
            }
            match changed {
                None => return Ok(StageDecomposition::from_lowdeg(lowdeg)),
                Some(w) if lowdeg[w] > n => {
                    return Err(ModelError::StageCycle(self.name(w).to_string()))
                }
                Some(_) => {}
            }
        }
        let w = (0..n).max_by_key(|&g| lowdeg[g]).unwrap_or(0);
        Err(ModelError::StageCycle(self.name(w).to_string()))
    }

    /// Pure structure: `d(W^even) = 0` and `d(W^odd) ⊆ Λ(W^even)`.
    pub fn is_pure(&self) -> bool {
        (0..self.dim_w()).all(|g| {
            if self.alg.is_odd(g) {
                self.d_of(g)
                    .monomials()
                    .all(|m| m.generators().all(|h| !self.alg.is_odd(h)))
            } else {
                self.is_closed(g)
            }
        })
    }

    pub fn associated_pure(&self) -> PureModel {
        let diffs = (0..self.dim_w())
            .map(|g| {
                if self.alg.is_odd(g) {
                    self.d_of(g)
                        .filter_terms(|m| m.generators().all(|h| !self.alg.is_odd(h)))
                } else {
                    Polynomial::zero()
                }
            })
            .collect();
        PureModel(SullivanModel::from_parts(self.alg.clone(), diffs))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StageDecomposition {
    pub lowdeg: Vec<usize>,
    pub stages: Vec<Vec<usize>>,
}

impl StageDecomposition {
    fn from_lowdeg(lowdeg: Vec<usize>) -> Self {
        let count = lowdeg.iter().max().map_or(0, |&m| m + 1);
        let mut stages = vec![Vec::new(); count];
        for (g, &l) in lowdeg.iter().enumerate() {
            stages[l].push(g);
        }
        StageDecomposition { lowdeg, stages }
    }

    pub fn num_stages(&self) -> usize {
        self.stages.len()
    }

    /// Generators with lowdeg in `range`.
    pub fn block(&self, range: std::ops::Range<usize>) -> Vec<usize> {
        (0..self.lowdeg.len())
            .filter(|&g| range.contains(&self.lowdeg[g]))
            .collect()
    }
}

/// A model with `d(W^even) = 0` and `d(W^odd) ⊆ Λ(W^even)`; not
/// necessarily minimal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PureModel(SullivanModel);

impl PureModel {
    pub fn model(&self) -> &SullivanModel {
        &self.0
    }

    pub fn into_inner(self) -> SullivanModel {
        self.0
    }

    /// The nonzero images `d_σ(v)` of odd generators, by generator id.
    pub fn relations(&self) -> Vec<(usize, &Polynomial)> {
        self.0
            .odd_ids()
            .into_iter()
            .map(|g| (g, self.0.d_of(g)))
            .filter(|(_, p)| !p.is_zero())
            .collect()
    }
}
