mod common;

use std::collections::BTreeSet;
use std::path::PathBuf;

use common::Oracle;
use sullivan::cohomology::{self, formal_dimension, EllipticStatus};
use sullivan::corpus::{self, CorpusEntry};
use sullivan::hilali::{self, Disjunction, Triple, Verdict};
use sullivan::{classify, parse_model, print_model, verify_hilali};

const DISPLAYED_TRIPLES: [(u32, u32, u32); 14] = [
    (1, 0, 1),
    (1, 1, 1),
    (1, 1, 2),
    (1, 2, 2),
    (2, 0, 1),
    (2, 0, 2),
    (2, 1, 2),
    (2, 2, 3),
    (3, 0, 1),
    (3, 0, 2),
    (3, 0, 3),
    (3, 1, 3),
    (4, 0, 2),
    (4, 0, 3),
];

fn listed_triples() -> BTreeSet<Triple> {
    DISPLAYED_TRIPLES
        .iter()
        .map(|&(a, b, c)| Triple::new(a, b, c))
        .collect()
}

fn certified(e: &CorpusEntry) -> bool {
    cohomology::elliptic_certificate(&e.model, &Default::default()).status
        == EllipticStatus::Certified
}

#[test]
fn expected_values_match() {
    for e in corpus::all() {
        let report = classify(&e.model).unwrap();
        let x = &e.expected;
        let table = cohomology::betti(&e.model, &Default::default());
        if let Some(dim) = x.dim_h {
            assert!(table.complete, "{}: incomplete", e.name);
            assert_eq!(table.total, dim, "{}: dim H", e.name);
        }
        let pairs = [
            ("pure", x.pure, report.pure),
            ("two_stage", x.two_stage, report.two_stage),
            ("hyperelliptic", x.hyperelliptic, report.hyperelliptic),
            ("class_i", x.class_i, report.class_i_member),
        ];
        for (what, want, got) in pairs {
            if let Some(want) = want {
                assert_eq!(got, want, "{}: {what}", e.name);
            }
        }
        if let Some(s) = x.stages {
            assert_eq!(report.stages, s, "{}: stages", e.name);
        }
        if let Some(status) = x.elliptic {
            assert_eq!(report.elliptic.status, status, "{}: ellipticity", e.name);
        }
    }
}

#[test]
fn betti_numbers_agree_with_oracle() {
    for e in corpus::all().iter().filter(|e| certified(e)) {
        let oracle = Oracle::from_model(&e.model);
        let fd = formal_dimension(&e.model);
        assert_eq!(fd, oracle.formal_dimension());
        let table = cohomology::betti(&e.model, &Default::default());
        assert_eq!(table.betti, oracle.betti(fd as u32), "{}", e.name);
    }
}

#[test]
fn appendix_dimensions_by_exhaustive_elimination() {
    // purely odd: every degree of the exterior algebra is eliminated
    for (name, top, dim) in [("appendix_X", 18, 8), ("appendix_Y", 17, 20)] {
        let e = corpus::builtin(name).unwrap();
        let oracle = Oracle::from_model(&e.model);
        assert!(oracle.basis(top + 1).is_empty());
        assert_eq!(oracle.betti(top).iter().sum::<usize>(), dim, "{name}");
    }
}

#[test]
fn cp2_dimension_from_low_degrees() {
    let e = corpus::builtin("cp_2").unwrap();
    assert_eq!(e.model.dim_w(), 2);
    let b = Oracle::from_model(&e.model).betti(4);
    assert_eq!(b, vec![1, 0, 1, 0, 1]);
}

#[test]
fn exceptional_triples_are_the_displayed_list() {
    let found: BTreeSet<Triple> = hilali::exceptional_triples().into_iter().collect();
    assert_eq!(found, listed_triples());
    let wide: BTreeSet<Triple> = hilali::scan_triples(12, 8).into_iter().collect();
    assert_eq!(wide, listed_triples());
}

#[test]
fn disjunction_outside_the_list() {
    let listed = listed_triples();
    for n in 0..=5 {
        for n1 in 0..=n {
            for r in 0..=3 {
                let t = Triple::new(n1, n - n1, r);
                assert_eq!(
                    hilali::disjunction(t) == Disjunction::Neither,
                    listed.contains(&t),
                    "{t}"
                );
            }
        }
    }
    assert_eq!(
        hilali::disjunction(Triple::new(5, 0, 0)),
        Disjunction::First
    );
    assert_eq!(
        hilali::disjunction(Triple::new(0, 0, 4)),
        Disjunction::Second
    );
}

#[test]
fn hilali_holds_on_certified_corpus() {
    for e in corpus::all().iter().filter(|e| certified(e)) {
        let r = verify_hilali(&e.model);
        assert!(r.complete, "{}", e.name);
        assert_eq!(
            r.verdict,
            Verdict::Holds,
            "{}: {} < {}",
            e.name,
            r.dim_h,
            r.dim_w
        );
        if let Some(t) = r.bounds.get("target") {
            assert_eq!(t.holds, Some(true), "{}: target", e.name);
        }
        if let Some(t) = r.bounds.get("toral") {
            assert_eq!(t.holds, Some(true), "{}: toral", e.name);
        }
    }
}

#[test]
fn appendix_y_bounds() {
    let r = verify_hilali(&corpus::builtin("appendix_Y").unwrap().model);
    assert_eq!((r.dim_w, r.dim_h), (5, 20));
    assert_eq!(r.triple, Some(Triple::new(0, 4, 1)));
    assert_eq!(r.bounds["jl"].value, 2);
    assert_eq!(r.bounds["jl_all_generators"].value, 32);
    assert_eq!(r.bounds["jl_all_generators"].holds, Some(false));
    assert!(!r.warnings.is_empty());
}

#[test]
fn wordlength_census_matches_formula() {
    let mut independent = 0;
    for e in corpus::all() {
        let Some(t) = hilali::two_stage_triple(&e.model) else {
            continue;
        };
        let census = hilali::wordlength2_census(&e.model).unwrap();
        let formula = hilali::two_stage_counts(t.n(), t.n1, t.r).wordlength2_lower;
        if census.relations_independent {
            independent += 1;
            assert_eq!(census.classes as i64, formula, "{}", e.name);
        } else {
            assert!(census.classes as i64 >= formula, "{}", e.name);
        }
    }
    assert!(independent >= 3);
}

#[test]
fn special_case_bounds_are_met() {
    for (name, triple, bound) in [
        ("two_stage_122", (1, 2, 2), 8),
        ("two_stage_223", (2, 2, 3), 12),
    ] {
        let model = corpus::builtin(name).unwrap().model;
        let s = hilali::special_case_bound(&model).unwrap();
        assert_eq!(s.triple, Triple::new(triple.0, triple.1, triple.2));
        assert_eq!(s.bound, bound);
        assert_eq!(s.euler, 0);
        assert!(s.holds, "{name}");
    }
}

fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/corpus")
}

#[test]
fn data_directory_round_trips() {
    let entries = corpus::all();
    let mut seen = 0;
    for e in &entries {
        let path = data_dir().join(format!("{}.sullivan", e.name));
        let text =
            std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing {}", path.display()));
        assert_eq!(text, corpus::to_text(e), "{} is stale", e.name);
        let parsed = parse_model(&text).unwrap();
        assert_eq!(parsed, e.model, "{}", e.name);
        assert_eq!(parse_model(&print_model(&parsed)).unwrap(), parsed);
        seen += 1;
    }
    assert_eq!(seen, entries.len());
}

#[test]
fn families_are_deterministic() {
    for i in 0..corpus::FAMILY_SIZE {
        assert_eq!(
            corpus::family_member(corpus::FAMILY_SEED, i),
            corpus::family_member(corpus::FAMILY_SEED, i)
        );
    }
    assert_ne!(
        corpus::family_member(corpus::FAMILY_SEED, 0),
        corpus::family_member(corpus::FAMILY_SEED + 1, 0)
    );
}

#[test]
fn exterior_total_from_whole_rank() {
    for (name, dim) in [("appendix_X", 8), ("appendix_Y", 20)] {
        let m = corpus::builtin(name).unwrap().model;
        let top: u32 = m.generators().iter().map(|g| g.degree).sum();
        let rank: usize = (0..=top)
            .map(|n| sullivan::linalg::rank(&cohomology::coboundary_matrix(&m, n)))
            .sum();
        assert_eq!((1usize << m.dim_w()) - 2 * rank, dim, "{name}");
    }
}
