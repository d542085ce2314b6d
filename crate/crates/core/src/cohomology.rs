//! Degree-by-degree cohomology of Sullivan models.

use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{Monomial, Polynomial, Q};
use crate::derivation::Derivation;
use crate::error::CohomologyError;
use crate::linalg::{self, IncrementalSpan, QMatrix};
use crate::model::SullivanModel;

/// Canonical basis of one degree of ΛW with a reverse index.
#[derive(Clone, Debug)]
pub struct Slice {
    pub degree: u32,
    pub basis: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl Slice {
    pub fn new(model: &SullivanModel, degree: u32) -> Self {
        Slice::from_basis(degree, model.algebra().basis(degree, None))
    }

    pub fn from_basis(degree: u32, basis: Vec<Monomial>) -> Self {
        let index = basis
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        Slice {
            degree,
            basis,
            index,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn position(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Coordinates of a homogeneous element of this degree.
    pub fn sparse_coords(&self, p: &Polynomial) -> Vec<(usize, Q)> {
        let mut out: Vec<(usize, Q)> = p
            .terms()
            .map(|(m, c)| {
                let i = self
                    .position(m)
                    .expect("polynomial term lies in this degree");
                (i, c.clone())
            })
            .collect();
        out.sort_by_key(|(i, _)| *i);
        out
    }

    pub fn dense_coords(&self, p: &Polynomial) -> Vec<Q> {
        let mut v = vec![Q::zero(); self.dim()];
        for (i, c) in self.sparse_coords(p) {
            v[i] = c;
        }
        v
    }

    pub fn element(&self, coords: &[Q]) -> Polynomial {
        let mut p = Polynomial::zero();
        for (m, c) in self.basis.iter().zip(coords) {
            p.add_term(m.clone(), c.clone());
        }
        p
    }
}

fn coboundary_between(model: &SullivanModel, dom: &Slice, cod: &Slice) -> QMatrix {
    let alg = model.algebra();
    let columns = dom
        .basis
        .iter()
        .map(|m| {
            let image = model.differential().apply_monomial(alg, m);
            image
                .terms()
                .map(|(t, c)| {
                    let i = cod.position(t).expect("d raises degree by one");
                    (i, c.clone())
                })
                .collect::<BTreeMap<usize, Q>>()
        })
        .collect();
    QMatrix::from_columns(cod.dim(), columns)
}

/// Matrix of `d: (ΛW)^n → (ΛW)^(n+1)` in the canonical bases.
pub fn coboundary_matrix(model: &SullivanModel, n: u32) -> QMatrix {
    coboundary_between(model, &Slice::new(model, n), &Slice::new(model, n + 1))
}

/// `Σ_odd deg w − Σ_even (deg w − 1)`.
pub fn formal_dimension(model: &SullivanModel) -> i64 {
    model
        .generators()
        .iter()
        .map(|g| {
            if g.is_odd() {
                g.degree as i64
            } else {
                -(g.degree as i64 - 1)
            }
        })
        .sum()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BettiTable {
    pub betti: Vec<usize>,
    pub total: usize,
    pub euler: i64,
    pub max_degree_computed: u32,
    /// Every Betti number above `max_degree_computed` is known to vanish.
    pub complete: bool,
}

impl BettiTable {
    fn from_betti(betti: Vec<usize>, complete: bool) -> Self {
        let total = betti.iter().sum();
        let euler = betti
            .iter()
            .enumerate()
            .map(|(i, &b)| if i % 2 == 0 { b as i64 } else { -(b as i64) })
            .sum();
        BettiTable {
            max_degree_computed: betti.len().saturating_sub(1) as u32,
            betti,
            total,
            euler,
            complete,
        }
    }

    pub fn get(&self, n: usize) -> usize {
        self.betti.get(n).copied().unwrap_or(0)
    }

    /// Degrees `i` with `b_i ≠ b_(fd−i)`.
    pub fn poincare_violations(&self, fd: i64) -> Vec<usize> {
        (0..self.betti.len())
            .filter(|&i| {
                let mirror = fd - i as i64;
                let other = if mirror < 0 {
                    0
                } else {
                    self.get(mirror as usize)
                };
                self.betti[i] != other
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BettiOptions {
    /// Explicit degree bound; otherwise the formal dimension for certified
    /// elliptic models and `fallback_cap` for everything else.
    pub max_degree: Option<u32>,
    pub fallback_cap: u32,
    /// Largest degree slice (number of monomials) attempted.
    pub slice_budget: usize,
}

impl Default for BettiOptions {
    fn default() -> Self {
        BettiOptions {
            max_degree: None,
            fallback_cap: 20,
            slice_budget: 6000,
        }
    }
}

fn rank_of_d(model: &SullivanModel, n: u32, budget: usize) -> Option<usize> {
    let dom = Slice::new(model, n);
    if dom.dim() == 0 {
        return Some(0);
    }
    let cod = Slice::new(model, n + 1);
    if dom.dim() > budget || cod.dim() > budget {
        return None;
    }
    Some(linalg::rank(&coboundary_between(model, &dom, &cod)))
}

/// Betti numbers `b_0..b_top` computed exactly, with per-degree work in
/// parallel.
pub fn betti_up_to(model: &SullivanModel, top: u32, budget: usize) -> (Vec<usize>, bool) {
    let results: Vec<(usize, Option<usize>)> = (0..=top)
        .into_par_iter()
        .map(|n| {
            let dim = model.algebra().basis(n, None).len();
            (dim, rank_of_d(model, n, budget))
        })
        .collect();
    let mut betti = Vec::new();
    let mut prev_rank = 0usize;
    for (dim, rank) in results {
        let Some(rank) = rank else {
            return (betti, false);
        };
        betti.push(dim - rank - prev_rank);
        prev_rank = rank;
    }
    (betti, true)
}

pub fn betti(model: &SullivanModel, options: &BettiOptions) -> BettiTable {
    let cert = elliptic_certificate(model, &CertificateOptions::default());
    let fd = formal_dimension(model);
    let certified = cert.status == EllipticStatus::Certified && fd >= 0;
    let (top, complete_if_done) = match (options.max_degree, certified) {
        (Some(n), true) => (n.min(fd as u32), n as i64 >= fd),
        (Some(n), false) => (n, false),
        (None, true) => (fd as u32, true),
        (None, false) => (options.fallback_cap, false),
    };
    let (betti, finished) = betti_up_to(model, top, options.slice_budget);
    BettiTable::from_betti(betti, finished && complete_if_done)
}

/// Whether a homogeneous cocycle is a coboundary.
pub fn is_exact(model: &SullivanModel, p: &Polynomial) -> Result<bool, CohomologyError> {
    let Some(n) = model.algebra().degree_of(p)? else {
        return Ok(true);
    };
    if !model.d(p).is_zero() {
        return Err(CohomologyError::NotClosed);
    }
    if n == 0 {
        return Ok(false);
    }
    let target = Slice::new(model, n);
    let source = Slice::new(model, n - 1);
    let m = coboundary_between(model, &source, &target);
    Ok(linalg::in_span(&target.dense_coords(p), &m).expect("coordinates match rows"))
}

/// Cocycle representatives of `H^n` modulo coboundaries.
#[derive(Clone, Debug)]
pub struct CohomologyDegree {
    pub slice: Slice,
    boundaries: QMatrix,
    boundary_span: IncrementalSpan,
    pub representatives: Vec<Polynomial>,
}

impl CohomologyDegree {
    pub fn new(model: &SullivanModel, n: u32) -> Self {
        let slice = Slice::new(model, n);
        let next = Slice::new(model, n + 1);
        let cocycles = linalg::kernel_basis(&coboundary_between(model, &slice, &next));
        let boundaries = if n == 0 {
            QMatrix::zeros(slice.dim(), 0)
        } else {
            coboundary_between(model, &Slice::new(model, n - 1), &slice)
        };
        let mut boundary_span = IncrementalSpan::new();
        for j in 0..boundaries.cols() {
            let col: Vec<(usize, Q)> = boundaries
                .column(j)
                .iter()
                .map(|(&i, v)| (i, v.clone()))
                .collect();
            boundary_span.insert(&col);
        }
        let mut span = boundary_span.clone();
        let representatives = cocycles
            .iter()
            .filter(|z| span.insert(&linalg::dense_to_sparse(z)))
            .map(|z| slice.element(z))
            .collect();
        CohomologyDegree {
            slice,
            boundaries,
            boundary_span,
            representatives,
        }
    }

    pub fn dim(&self) -> usize {
        self.representatives.len()
    }

    pub fn is_coboundary(&self, p: &Polynomial) -> bool {
        self.boundary_span.contains(&self.slice.sparse_coords(p))
    }

    /// Dimension of the span of the classes of `cocycles`.
    pub fn rank_of_classes(&self, cocycles: &[Polynomial]) -> usize {
        let mut span = self.boundary_span.clone();
        cocycles
            .iter()
            .filter(|p| span.insert(&self.slice.sparse_coords(p)))
            .count()
    }

    /// Coordinates of the class of a cocycle in the representative basis.
    pub fn class_coordinates(&self, p: &Polynomial) -> Vec<Q> {
        let mut m = self.boundaries.clone();
        for r in &self.representatives {
            m.push_column(self.slice.sparse_coords(r).into_iter().collect());
        }
        let x = linalg::solve(&m, &self.slice.dense_coords(p))
            .expect("coordinates match rows")
            .expect("a cocycle is a combination of representatives and coboundaries");
        x[self.boundaries.cols()..].to_vec()
    }
}

/// Lazily computed [`CohomologyDegree`]s of one model.
pub struct CohomologyCache<'a> {
    model: &'a SullivanModel,
    degrees: BTreeMap<u32, CohomologyDegree>,
}

impl<'a> CohomologyCache<'a> {
    pub fn new(model: &'a SullivanModel) -> Self {
        CohomologyCache {
            model,
            degrees: BTreeMap::new(),
        }
    }

    pub fn model(&self) -> &'a SullivanModel {
        self.model
    }

    pub fn degree(&mut self, n: u32) -> &CohomologyDegree {
        let model = self.model;
        self.degrees
            .entry(n)
            .or_insert_with(|| CohomologyDegree::new(model, n))
    }

    pub fn dim(&mut self, n: i64) -> usize {
        match u32::try_from(n) {
            Ok(n) => self.degree(n).dim(),
            Err(_) => 0,
        }
    }

    /// Rank of the map `H^n → H^(n+shift)` induced by a cochain map `op`.
    pub fn induced_rank(
        &mut self,
        n: i64,
        shift: i64,
        op: impl Fn(&Polynomial) -> Polynomial,
    ) -> usize {
        let (Ok(src), Ok(tgt)) = (u32::try_from(n), u32::try_from(n + shift)) else {
            return 0;
        };
        let images: Vec<Polynomial> = self.degree(src).representatives.iter().map(&op).collect();
        self.degree(tgt).rank_of_classes(&images)
    }

    /// Whether `op` kills every class of degree `n` in cohomology.
    pub fn induced_vanishes(
        &mut self,
        n: u32,
        shift: i64,
        op: impl Fn(&Polynomial) -> Polynomial,
    ) -> bool {
        let images: Vec<Polynomial> = self.degree(n).representatives.iter().map(&op).collect();
        let Ok(tgt) = u32::try_from(n as i64 + shift) else {
            return true;
        };
        let target = self.degree(tgt);
        images
            .iter()
            .all(|p| p.is_zero() || target.is_coboundary(p))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InducedMapDegree {
    pub source_degree: u32,
    pub target_degree: Option<u32>,
    pub source_dim: usize,
    pub target_dim: usize,
    /// Column `j` holds the class coordinates of the image of representative `j`.
    #[serde(skip)]
    pub matrix: Vec<Vec<Q>>,
    pub rank: usize,
    pub kernel_dim: usize,
    pub cokernel_dim: usize,
}

/// Checks that `theta` (a derivation of `model`'s algebra) commutes with `d`
/// in the graded sense on every generator.
pub fn check_descends(model: &SullivanModel, theta: &Derivation) -> Result<(), CohomologyError> {
    let alg = model.algebra();
    for g in 0..model.dim_w() {
        let c = theta.commutator_apply(model.differential(), alg, &Polynomial::generator(g));
        if !c.is_zero() {
            return Err(CohomologyError::DoesNotDescend(model.name(g).to_string()));
        }
    }
    Ok(())
}

/// The map induced on cohomology by a derivation commuting with `d`, one
/// entry per source degree in `degrees`.
pub fn induced_cohomology_map(
    model: &SullivanModel,
    theta: &Derivation,
    degrees: std::ops::RangeInclusive<u32>,
) -> Result<Vec<InducedMapDegree>, CohomologyError> {
    check_descends(model, theta)?;
    let alg = model.algebra();
    let mut cache: BTreeMap<u32, CohomologyDegree> = BTreeMap::new();
    let mut out = Vec::new();
    for n in degrees {
        cache
            .entry(n)
            .or_insert_with(|| CohomologyDegree::new(model, n));
        let target = n as i64 + theta.degree() as i64;
        let target_degree = u32::try_from(target).ok();
        if let Some(t) = target_degree {
            cache
                .entry(t)
                .or_insert_with(|| CohomologyDegree::new(model, t));
        }
        let src = &cache[&n];
        let (matrix, rank, target_dim) = match target_degree {
            Some(t) => {
                let tgt = &cache[&t];
                let images: Vec<Polynomial> = src
                    .representatives
                    .iter()
                    .map(|r| theta.apply(alg, r))
                    .collect();
                let matrix = images.iter().map(|p| tgt.class_coordinates(p)).collect();
                (matrix, tgt.rank_of_classes(&images), tgt.dim())
            }
            None => (vec![Vec::new(); src.dim()], 0, 0),
        };
        out.push(InducedMapDegree {
            source_degree: n,
            target_degree,
            source_dim: src.dim(),
            target_dim,
            matrix,
            rank,
            kernel_dim: src.dim() - rank,
            cokernel_dim: target_dim - rank,
        });
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EllipticStatus {
    Certified,
    NotElliptic,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EllipticityCertificate {
    pub status: EllipticStatus,
    /// Degrees `[a, b]` on which `ΛU/(d_σ V)` vanishes, with `b − a + 1`
    /// at least the largest even generator degree.
    pub window: Option<(u32, u32)>,
    /// `dim (ΛU/(d_σ V))^n` for `n = 0, 1, …`.
    pub evidence: Vec<usize>,
    pub reason: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CertificateOptions {
    pub max_degree: u32,
}

impl Default for CertificateOptions {
    fn default() -> Self {
        CertificateOptions { max_degree: 160 }
    }
}

/// Decides finite-dimensionality of `ΛU/(d_σ V)` for the associated pure
/// model, where `U` are the even generators.
pub fn elliptic_certificate(
    model: &SullivanModel,
    options: &CertificateOptions,
) -> EllipticityCertificate {
    let pure = model.associated_pure();
    let alg = model.algebra();
    let even = model.even_ids();
    let relations: Vec<(u32, &Polynomial)> = pure
        .relations()
        .into_iter()
        .map(|(v, f)| (alg.degree(v) + 1, f))
        .collect();
    let window_len = even.iter().map(|&g| alg.degree(g)).max().unwrap_or(0);

    let reason = if relations.len() < even.len() {
        Some(format!(
            "{} relations for {} even generators: the quotient has positive Krull dimension",
            relations.len(),
            even.len()
        ))
    } else {
        even.iter()
            .find(|&&x| {
                relations
                    .iter()
                    .all(|(_, f)| f.evaluate_zero(|g| g == x).is_zero())
            })
            .map(|&x| {
                format!(
                    "every relation vanishes modulo the other even generators, so all powers of `{}` survive",
                    model.name(x)
                )
            })
    };

    let bound = if reason.is_some() {
        options.max_degree.min(12)
    } else {
        let natural: u32 = relations.iter().map(|(d, _)| *d).sum::<u32>() + 2 * window_len + 1;
        natural.min(options.max_degree)
    };
    let mut evidence = Vec::new();
    let mut run_start: Option<u32> = None;
    let mut window = None;
    for n in 0..=bound {
        let dim = quotient_dim(model, &even, &relations, n);
        evidence.push(dim);
        if n == 0 {
            continue;
        }
        if dim == 0 {
            let start = *run_start.get_or_insert(n);
            if n + 1 - start >= window_len.max(1) {
                window = Some((start, n));
                break;
            }
        } else {
            run_start = None;
        }
    }
    let status = match (window, &reason) {
        (Some(_), None) => EllipticStatus::Certified,
        (_, Some(_)) => EllipticStatus::NotElliptic,
        (None, None) => EllipticStatus::Inconclusive,
    };
    EllipticityCertificate {
        status,
        window: if status == EllipticStatus::Certified {
            window
        } else {
            None
        },
        evidence,
        reason,
    }
}

fn quotient_dim(
    model: &SullivanModel,
    even: &[usize],
    relations: &[(u32, &Polynomial)],
    n: u32,
) -> usize {
    let alg = model.algebra();
    let slice = Slice::from_basis(n, alg.basis_in(n, even, None));
    if slice.dim() == 0 {
        return 0;
    }
    let mut columns = Vec::new();
    for (deg, f) in relations {
        if *deg > n {
            continue;
        }
        for m in alg.basis_in(n - deg, even, None) {
            let prod = alg.mul_monomial_poly(&m, f);
            columns.push(slice.sparse_coords(&prod).into_iter().collect());
        }
    }
    let ideal = QMatrix::from_columns(slice.dim(), columns);
    slice.dim() - linalg::rank(&ideal)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{q, FreeAlgebra};
    use crate::model::ValidationOptions;

    fn odd_sphere(deg: u32) -> SullivanModel {
        let alg = FreeAlgebra::new([("x", deg)]).unwrap();
        SullivanModel::from_parts(alg, vec![Polynomial::zero()])
    }

    fn truncated(exp: u32, x_deg: u32) -> SullivanModel {
        let alg = FreeAlgebra::new([("x", x_deg), ("y", exp * x_deg - 1)]).unwrap();
        SullivanModel::new(
            alg,
            vec![
                Polynomial::zero(),
                Polynomial::term(Monomial::power(0, exp), q(1)),
            ],
            &ValidationOptions::default(),
        )
        .unwrap()
    }

    #[test]
    fn odd_sphere_betti() {
        let t = betti(&odd_sphere(3), &BettiOptions::default());
        assert_eq!(t.betti, vec![1, 0, 0, 1]);
        assert_eq!(t.total, 2);
        assert!(t.complete);
        assert_eq!(formal_dimension(&odd_sphere(3)), 3);
    }

    #[test]
    fn degree_zero_column_is_zero() {
        let m = coboundary_matrix(&truncated(2, 2), 0);
        assert_eq!((m.rows(), m.cols(), m.nnz()), (0, 1, 0));
    }

    #[test]
    fn truncated_polynomial_is_certified() {
        let c = elliptic_certificate(&truncated(2, 2), &CertificateOptions::default());
        assert_eq!(c.status, EllipticStatus::Certified);
        assert_eq!(&c.evidence[..3], &[1, 0, 1]);
        let t = betti(&truncated(2, 2), &BettiOptions::default());
        assert_eq!(t.betti, vec![1, 0, 1]);
        assert_eq!((t.total, t.euler), (2, 2));
        assert!(t.complete);
    }

    #[test]
    fn unit_is_not_exact() {
        assert!(!is_exact(&odd_sphere(3), &Polynomial::one()).unwrap());
    }

    #[test]
    fn exactness_requires_a_cocycle() {
        let m = truncated(2, 2);
        assert_eq!(
            is_exact(&m, &Polynomial::generator(1)),
            Err(CohomologyError::NotClosed)
        );
    }

    #[test]
    fn polynomial_generator_alone_is_not_elliptic() {
        let alg = FreeAlgebra::new([("x", 2)]).unwrap();
        let m = SullivanModel::from_parts(alg, vec![Polynomial::zero()]);
        let c = elliptic_certificate(&m, &CertificateOptions::default());
        assert_eq!(c.status, EllipticStatus::NotElliptic);
        let t = betti(&m, &BettiOptions::default());
        assert!(!t.complete);
    }

    #[test]
    fn zero_derivation_induces_zero_map() {
        let m = truncated(3, 2);
        let zero = Derivation::zero(m.algebra(), -2);
        let maps = induced_cohomology_map(&m, &zero, 0..=4).unwrap();
        for d in maps {
            assert_eq!(d.rank, 0);
            assert_eq!(d.kernel_dim, d.source_dim);
        }
    }
}
