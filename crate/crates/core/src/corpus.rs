//! Named models with their expected invariants.

use std::fs;
use std::io;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{q, FreeAlgebra, Monomial, Polynomial};
use crate::cohomology::EllipticStatus;
use crate::model::SullivanModel;
use crate::text::{parse_model, print_model};

/// Values a corpus entry is expected to reproduce; `None` means not
/// asserted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Expected {
    pub dim_h: Option<usize>,
    pub pure: Option<bool>,
    pub two_stage: Option<bool>,
    pub hyperelliptic: Option<bool>,
    pub class_i: Option<bool>,
    pub stages: Option<usize>,
    pub elliptic: Option<EllipticStatus>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusEntry {
    pub name: String,
    pub model: SullivanModel,
    pub expected: Expected,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum CorpusError {
    #[error("unknown corpus entry `{0}`")]
    Unknown(String),
}

fn parse(text: &str) -> SullivanModel {
    parse_model(text).expect("corpus models are valid")
}

/// Seed shared by the generated two-stage family.
pub const FAMILY_SEED: u64 = 0x5eed_2057;
pub const FAMILY_SIZE: usize = 24;

pub const APPENDIX_Z_PRINTED: &str = "dif z_4=(z_3z_4-z_2z_5)z_6";

fn appendix_x() -> CorpusEntry {
    CorpusEntry {
        name: "appendix_X".into(),
        model: parse("gen x1 3\ngen x2 3\ngen x3 5\ngen x4 7\nd x3 = x1*x2\nd x4 = x1*x3"),
        expected: Expected {
            dim_h: Some(8),
            pure: Some(false),
            two_stage: Some(false),
            hyperelliptic: Some(false),
            class_i: Some(true),
            stages: Some(3),
            elliptic: Some(EllipticStatus::Certified),
        },
        note: "three-stage, odd generators only".into(),
    }
}

fn appendix_y() -> CorpusEntry {
    CorpusEntry {
        name: "appendix_Y".into(),
        model: parse(
            "gen y1 3\ngen y2 3\ngen y3 3\ngen y4 3\ngen y5 5\n\
             d y5 = y1*y2 + y1*y3 + y1*y4 + y2*y3 + y2*y4 + y3*y4",
        ),
        expected: Expected {
            dim_h: Some(20),
            pure: Some(false),
            two_stage: Some(true),
            hyperelliptic: Some(false),
            class_i: None,
            stages: Some(2),
            elliptic: Some(EllipticStatus::Certified),
        },
        note: "two-stage; (d y5)^2 = 2*y1*y2*y3*y4".into(),
    }
}

fn appendix_z() -> CorpusEntry {
    CorpusEntry {
        name: "appendix_Z".into(),
        model: parse(
            "gen z1 2\ngen z2 2\ngen z3 2\ngen z4 3\ngen z5 3\ngen z6 3\ngen z7 7\n\
             d z4 = z1*z2\nd z5 = z1*z3\nd z7 = z3*z4*z6 - z2*z5*z6",
        ),
        expected: Expected {
            dim_h: None,
            pure: Some(false),
            two_stage: Some(false),
            hyperelliptic: Some(true),
            class_i: None,
            stages: Some(3),
            elliptic: Some(EllipticStatus::NotElliptic),
        },
        note: format!(
            "the source prints the last differential as `{APPENDIX_Z_PRINTED}`; degrees force it to be d z7"
        ),
    }
}

fn sphere_odd(k: u32) -> CorpusEntry {
    CorpusEntry {
        name: format!("sphere_odd_{k}"),
        model: parse(&format!("gen x {k}")),
        expected: Expected {
            dim_h: Some(2),
            pure: Some(true),
            two_stage: Some(true),
            hyperelliptic: Some(true),
            class_i: Some(true),
            stages: Some(1),
            elliptic: Some(EllipticStatus::Certified),
        },
        note: format!("S^{k}"),
    }
}

fn sphere_even(k: u32) -> CorpusEntry {
    CorpusEntry {
        name: format!("sphere_even_{k}"),
        model: parse(&format!("gen x {k}\ngen y {}\nd y = x^2", 2 * k - 1)),
        expected: Expected {
            dim_h: Some(2),
            pure: Some(true),
            two_stage: Some(true),
            hyperelliptic: Some(true),
            class_i: None,
            stages: Some(2),
            elliptic: Some(EllipticStatus::Certified),
        },
        note: format!("S^{k}"),
    }
}

fn cp(n: u32) -> CorpusEntry {
    CorpusEntry {
        name: format!("cp_{n}"),
        model: parse(&format!("gen x 2\ngen y {}\nd y = x^{}", 2 * n + 1, n + 1)),
        expected: Expected {
            dim_h: Some(n as usize + 1),
            pure: Some(true),
            two_stage: Some(true),
            hyperelliptic: Some(true),
            class_i: None,
            stages: Some(2),
            elliptic: Some(EllipticStatus::Certified),
        },
        note: format!("CP^{n}"),
    }
}

/// The tensor product, with generators renamed `a_*` and `b_*`.
pub fn product(a: &SullivanModel, b: &SullivanModel) -> SullivanModel {
    let mut text = String::new();
    for (prefix, m) in [("a_", a), ("b_", b)] {
        for g in m.generators() {
            text.push_str(&format!("gen {prefix}{} {}\n", g.name, g.degree));
        }
    }
    for (prefix, m) in [("a_", a), ("b_", b)] {
        let renamed = FreeAlgebra::new(
            m.generators()
                .iter()
                .map(|g| (format!("{prefix}{}", g.name), g.degree)),
        )
        .expect("renaming keeps names distinct");
        for g in m.generators() {
            let dg = m.d_of(g.id);
            if !dg.is_zero() {
                text.push_str(&format!(
                    "d {prefix}{} = {}\n",
                    g.name,
                    renamed.fmt_polynomial(dg)
                ));
            }
        }
    }
    parse(&text)
}

fn product_entry(a: CorpusEntry, b: CorpusEntry) -> CorpusEntry {
    let both = |x: Option<bool>, y: Option<bool>| Some(x? && y?);
    let model = product(&a.model, &b.model);
    CorpusEntry {
        name: format!("product_{}_{}", a.name, b.name),
        expected: Expected {
            dim_h: a.expected.dim_h.zip(b.expected.dim_h).map(|(x, y)| x * y),
            pure: both(a.expected.pure, b.expected.pure),
            two_stage: both(a.expected.two_stage, b.expected.two_stage),
            hyperelliptic: both(a.expected.hyperelliptic, b.expected.hyperelliptic),
            class_i: None,
            stages: a
                .expected
                .stages
                .zip(b.expected.stages)
                .map(|(x, y)| x.max(y)),
            elliptic: Some(EllipticStatus::Certified),
        },
        note: format!("{} x {}", a.note, b.note),
        model,
    }
}

fn two_stage_122() -> CorpusEntry {
    CorpusEntry {
        name: "two_stage_122".into(),
        model: parse(
            "gen x 2\ngen a 3\ngen b 3\ngen y1 3\ngen y2 5\ngen y3 7\n\
             d y1 = x^2\nd y2 = a*b\nd y3 = x*a*b",
        ),
        expected: Expected {
            dim_h: Some(24),
            pure: Some(false),
            two_stage: Some(true),
            hyperelliptic: Some(false),
            class_i: None,
            stages: Some(2),
            elliptic: Some(EllipticStatus::Certified),
        },
        note: "two-stage with triple (1,2,2)".into(),
    }
}

fn two_stage_223() -> CorpusEntry {
    CorpusEntry {
        name: "two_stage_223".into(),
        model: parse(
            "gen x1 2\ngen x2 2\ngen a 3\ngen b 3\n\
             gen y1 3\ngen y2 3\ngen y3 3\ngen y4 5\ngen y5 7\n\
             d y1 = x1^2\nd y2 = x2^2\nd y3 = x1*x2\nd y4 = a*b\nd y5 = x1*a*b",
        ),
        expected: Expected {
            dim_h: Some(72),
            pure: Some(false),
            two_stage: Some(true),
            hyperelliptic: Some(false),
            class_i: None,
            stages: Some(2),
            elliptic: Some(EllipticStatus::Certified),
        },
        note: "two-stage with triple (2,2,3)".into(),
    }
}

/// One member of the seeded two-stage family. Even generators `x_i` of
/// degree 2 carry relations `x_i^k + g(x_{i+1}, …)`, a triangular and hence
/// regular sequence; extra odd generators are attached over `ΛU`.
pub fn family_member(seed: u64, index: usize) -> SullivanModel {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(index as u64));
    let n1 = rng.gen_range(1..=2usize);
    let mixed = index % 2 == 1;
    let n2 = if mixed { 2 } else { 0 };
    let extra = rng.gen_range(usize::from(mixed)..=2);

    let mut gens: Vec<(String, u32)> = (0..n1).map(|i| (format!("x{}", i + 1), 2)).collect();
    for j in 0..n2 {
        gens.push((format!("a{}", j + 1), 3));
    }
    let u_len = gens.len();
    let u_alg = FreeAlgebra::new(gens.clone()).expect("distinct names");
    let even: Vec<usize> = (0..n1).collect();
    let all_u: Vec<usize> = (0..u_len).collect();

    let mut diffs: Vec<Polynomial> = Vec::new();
    for i in 0..n1 {
        let k: u32 = rng.gen_range(2..=3);
        let mut f = Polynomial::term(Monomial::power(i, k), q(1));
        let later: Vec<usize> = (i + 1..n1).collect();
        for m in u_alg.basis_in(2 * k, &later, None) {
            if rng.gen_bool(0.5) {
                f.add_term(m, q(rng.gen_range(-2..=2)));
            }
        }
        diffs.push(f);
    }
    for e in 0..extra {
        // The first extra relation of a mixed member must involve odd generators.
        let needs_odd = mixed && e == 0;
        let pool = if mixed { &all_u } else { &even };
        let f = loop {
            let n = 2 * rng.gen_range(2..=4u32);
            let mut f = Polynomial::zero();
            for m in u_alg.basis_in(n, pool, Some(2..=u32::MAX)) {
                if rng.gen_bool(0.6) {
                    f.add_term(m, q(rng.gen_range(-3..=3)));
                }
            }
            let has_odd = f.monomials().any(|m| m.generators().any(|g| g >= n1));
            if !f.is_zero() && (has_odd || !needs_odd) {
                break f;
            }
        };
        diffs.push(f);
    }

    let mut text = String::new();
    for (name, deg) in &gens {
        text.push_str(&format!("gen {name} {deg}\n"));
    }
    for (j, f) in diffs.iter().enumerate() {
        let deg = u_alg.degree_of(f).expect("homogeneous").expect("nonzero") - 1;
        text.push_str(&format!("gen y{} {deg}\n", j + 1));
    }
    for (j, f) in diffs.iter().enumerate() {
        text.push_str(&format!("d y{} = {}\n", j + 1, u_alg.fmt_polynomial(f)));
    }
    parse(&text)
}

fn family_entry(index: usize) -> CorpusEntry {
    let model = family_member(FAMILY_SEED, index);
    let pure = index.is_multiple_of(2);
    CorpusEntry {
        name: format!("family_{index:02}"),
        expected: Expected {
            dim_h: None,
            pure: Some(pure),
            two_stage: Some(true),
            hyperelliptic: pure.then_some(true),
            class_i: None,
            stages: Some(2),
            elliptic: Some(EllipticStatus::Certified),
        },
        note: format!("seeded two-stage family, seed {FAMILY_SEED:#x}, member {index}"),
        model,
    }
}

/// Names accepted by [`builtin`], in registry order.
pub fn names() -> Vec<String> {
    let mut out: Vec<String> = ["appendix_X", "appendix_Y", "appendix_Z"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    out.extend([3, 5, 7].map(|k| format!("sphere_odd_{k}")));
    out.extend([2, 4, 6].map(|k| format!("sphere_even_{k}")));
    out.extend((1..=4).map(|n| format!("cp_{n}")));
    out.extend(PRODUCTS.iter().map(|(a, b)| format!("product_{a}_{b}")));
    out.push("two_stage_122".into());
    out.push("two_stage_223".into());
    out.extend((0..FAMILY_SIZE).map(|i| format!("family_{i:02}")));
    out
}

const PRODUCTS: [(&str, &str); 4] = [
    ("sphere_odd_3", "sphere_odd_5"),
    ("sphere_odd_3", "sphere_even_2"),
    ("cp_2", "cp_3"),
    ("appendix_X", "sphere_odd_3"),
];

fn base_entry(name: &str) -> Option<CorpusEntry> {
    let num = |prefix: &str| {
        name.strip_prefix(prefix)
            .and_then(|s| s.parse::<u32>().ok())
    };
    match name {
        "appendix_X" => Some(appendix_x()),
        "appendix_Y" => Some(appendix_y()),
        "appendix_Z" => Some(appendix_z()),
        "two_stage_122" => Some(two_stage_122()),
        "two_stage_223" => Some(two_stage_223()),
        _ => {
            if let Some(k) = num("sphere_odd_").filter(|k| k % 2 == 1 && *k >= 3) {
                Some(sphere_odd(k))
            } else if let Some(k) = num("sphere_even_").filter(|k| k % 2 == 0 && *k >= 2) {
                Some(sphere_even(k))
            } else if let Some(n) = num("cp_").filter(|n| *n >= 1) {
                Some(cp(n))
            } else {
                num("family_")
                    .filter(|&i| (i as usize) < FAMILY_SIZE)
                    .map(|i| family_entry(i as usize))
            }
        }
    }
}

pub fn builtin(name: &str) -> Result<CorpusEntry, CorpusError> {
    if let Some(e) = base_entry(name) {
        return Ok(e);
    }
    PRODUCTS
        .iter()
        .find(|(a, b)| name == format!("product_{a}_{b}"))
        .and_then(|(a, b)| Some(product_entry(base_entry(a)?, base_entry(b)?)))
        .ok_or_else(|| CorpusError::Unknown(name.to_string()))
}

pub fn all() -> Vec<CorpusEntry> {
    names()
        .iter()
        .map(|n| builtin(n).expect("registered name"))
        .collect()
}

/// Text form with the entry's note as a leading comment.
pub fn to_text(entry: &CorpusEntry) -> String {
    format!(
        "# {}: {}\n{}",
        entry.name,
        entry.note,
        print_model(&entry.model)
    )
}

/// Writes every entry to `<dir>/<name>.sullivan`.
pub fn export(dir: &Path) -> io::Result<usize> {
    fs::create_dir_all(dir)?;
    let entries = all();
    for e in &entries {
        fs::write(dir.join(format!("{}.sullivan", e.name)), to_text(e))?;
    }
    Ok(entries.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_is_complete_and_valid() {
        let entries = all();
        assert_eq!(entries.len(), names().len());
        const { assert!(FAMILY_SIZE >= 20) };
        for e in &entries {
            assert!(
                e.model.validate(&Default::default()).accepted(),
                "{}",
                e.name
            );
        }
    }

    #[test]
    fn unknown_name() {
        assert_eq!(
            builtin("sphere_odd_4").unwrap_err(),
            CorpusError::Unknown("sphere_odd_4".into())
        );
    }

    #[test]
    fn family_is_deterministic() {
        assert_eq!(family_member(FAMILY_SEED, 3), family_member(FAMILY_SEED, 3));
    }

    #[test]
    fn text_round_trip() {
        for e in all() {
            assert_eq!(parse_model(&to_text(&e)).unwrap(), e.model, "{}", e.name);
        }
    }
}
