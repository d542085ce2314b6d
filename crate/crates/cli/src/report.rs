//! Report envelopes and their JSON and text renderings.

use std::fmt::Write;

use serde::Serialize;
use serde_json::json;
use sullivan::cohomology::{BettiTable, EllipticStatus};
use sullivan::hilali::{Triple, Verdict};
use sullivan::sequences::{GysinChain, SequenceCheckResult, SequenceRow};
use sullivan::{ClassificationReport, HilaliReport, SullivanModel, ValidationReport};

#[derive(Debug, Serialize)]
pub struct GeneratorJson {
    pub name: String,
    pub degree: u32,
}

#[derive(Debug, Serialize)]
pub struct DifferentialJson {
    pub name: String,
    pub d: String,
}

#[derive(Debug, Serialize)]
pub struct ModelJson {
    pub generators: Vec<GeneratorJson>,
    pub differentials: Vec<DifferentialJson>,
}

impl ModelJson {
    fn new(model: &SullivanModel) -> Self {
        ModelJson {
            generators: model
                .generators()
                .iter()
                .map(|g| GeneratorJson {
                    name: g.name.clone(),
                    degree: g.degree,
                })
                .collect(),
            differentials: model
                .generators()
                .iter()
                .map(|g| DifferentialJson {
                    name: g.name.clone(),
                    d: model.algebra().fmt_polynomial(model.d_of(g.id)),
                })
                .collect(),
        }
    }
}

/// The per-model report. Sections not produced by a command are omitted.
#[derive(Debug, Serialize)]
pub struct Envelope {
    pub model: ModelJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub betti: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub total: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub euler: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub complete: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub validation: Option<ValidationReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classes: Option<ClassificationReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hilali: Option<HilaliReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wang: Option<SequenceCheckResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gysin: Option<GysinChain>,
    pub warnings: Vec<String>,
}

impl Envelope {
    pub fn new(model: &SullivanModel, table: Option<BettiTable>) -> Self {
        let mut warnings = Vec::new();
        if let Some(t) = &table {
            if !t.complete {
                warnings.push(format!(
                    "Betti numbers computed through degree {} only; higher degrees are not known to vanish",
                    t.max_degree_computed
                ));
            }
        }
        Envelope {
            model: ModelJson::new(model),
            betti: table.as_ref().map(|t| t.betti.clone()),
            total: table.as_ref().map(|t| t.total),
            euler: table.as_ref().map(|t| t.euler),
            complete: table.as_ref().map(|t| t.complete),
            validation: None,
            classes: None,
            hilali: None,
            wang: None,
            gysin: None,
            warnings,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct CorpusRow {
    pub name: String,
    pub dim_w: usize,
    pub dim_h: usize,
    pub complete: bool,
    pub verdict: Verdict,
    pub elliptic: EllipticStatus,
    pub mismatches: Vec<String>,
}

pub enum Output {
    Model {
        env: Box<Envelope>,
        ok: bool,
    },
    Triples {
        nmax: u32,
        rmax: u32,
        triples: Vec<Triple>,
    },
    CorpusList(Vec<(String, usize, String)>),
    CorpusRun {
        rows: Vec<CorpusRow>,
        ok: bool,
    },
    Exported {
        dir: String,
        count: usize,
    },
}

impl Output {
    pub fn model(env: Envelope, ok: bool) -> Self {
        Output::Model {
            env: Box::new(env),
            ok,
        }
    }

    pub fn ok(&self) -> bool {
        match self {
            Output::Model { ok, .. } | Output::CorpusRun { ok, .. } => *ok,
            _ => true,
        }
    }

    pub fn json(&self) -> String {
        let value = match self {
            Output::Model { env, .. } => serde_json::to_value(env).expect("serializable"),
            Output::Triples {
                nmax,
                rmax,
                triples,
            } => json!({
                "nmax": nmax,
                "rmax": rmax,
                "count": triples.len(),
                "triples": triples.iter().map(|t| [t.n1, t.n2, t.r]).collect::<Vec<_>>(),
            }),
            Output::CorpusList(entries) => json!({
                "entries": entries
                    .iter()
                    .map(|(name, dim_w, note)| json!({"name": name, "dim_w": dim_w, "note": note}))
                    .collect::<Vec<_>>(),
            }),
            Output::CorpusRun { rows, ok } => json!({"entries": rows, "ok": ok}),
            Output::Exported { dir, count } => json!({"dir": dir, "count": count}),
        };
        serde_json::to_string_pretty(&value).expect("serializable")
    }

    pub fn text(&self) -> String {
        let mut out = String::new();
        match self {
            Output::Model { env, .. } => model_text(&mut out, env),
            Output::Triples {
                nmax,
                rmax,
                triples,
            } => {
                for t in triples {
                    writeln!(out, "{t}").unwrap();
                }
                writeln!(
                    out,
                    "{} triples with n <= {nmax}, r <= {rmax}",
                    triples.len()
                )
                .unwrap();
            }
            Output::CorpusList(entries) => {
                for (name, dim_w, note) in entries {
                    writeln!(out, "{name:<32} dim W {dim_w:<3} {note}").unwrap();
                }
            }
            Output::CorpusRun { rows, ok } => {
                for r in rows {
                    let status = if r.mismatches.is_empty() {
                        "ok"
                    } else {
                        "MISMATCH"
                    };
                    writeln!(
                        out,
                        "{:<32} dim W {:<3} dim H {:<5}{} {:<12} {:<12} {status} {}",
                        r.name,
                        r.dim_w,
                        r.dim_h,
                        if r.complete { " " } else { "+" },
                        format!("{:?}", r.verdict).to_lowercase(),
                        format!("{:?}", r.elliptic).to_lowercase(),
                        r.mismatches.join("; ")
                    )
                    .unwrap();
                }
                writeln!(
                    out,
                    "{}",
                    if *ok {
                        "all entries match"
                    } else {
                        "mismatches found"
                    }
                )
                .unwrap();
            }
            Output::Exported { dir, count } => {
                writeln!(out, "wrote {count} models to {dir}").unwrap();
            }
        }
        out
    }
}

fn degrees_line(betti: &[usize]) -> String {
    let parts: Vec<String> = betti
        .iter()
        .enumerate()
        .filter(|(_, &b)| b > 0)
        .map(|(i, b)| format!("b{i}={b}"))
        .collect();
    parts.join(" ")
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn rows_text(out: &mut String, rows: &[SequenceRow]) {
    writeln!(out, "  degree  total  coker  ker").unwrap();
    for r in rows.iter().filter(|r| r.total + r.coker + r.ker > 0) {
        writeln!(
            out,
            "  {:>6}  {:>5}  {:>5}  {:>3}",
            r.degree, r.total, r.coker, r.ker
        )
        .unwrap();
    }
}

fn model_text(out: &mut String, env: &Envelope) {
    let gens: Vec<String> = env
        .model
        .generators
        .iter()
        .map(|g| format!("{}:{}", g.name, g.degree))
        .collect();
    writeln!(out, "generators: {}", gens.join(" ")).unwrap();
    for d in env.model.differentials.iter().filter(|d| d.d != "0") {
        writeln!(out, "d {} = {}", d.name, d.d).unwrap();
    }
    if let Some(v) = &env.validation {
        if v.accepted() {
            writeln!(out, "valid").unwrap();
        } else {
            for violation in &v.violations {
                writeln!(out, "invalid: {violation}").unwrap();
            }
        }
    }
    if let (Some(b), Some(total), Some(euler)) = (&env.betti, env.total, env.euler) {
        writeln!(out, "betti: {}", degrees_line(b)).unwrap();
        writeln!(
            out,
            "dim H = {total}{}, euler = {euler}",
            if env.complete == Some(true) {
                ""
            } else {
                " (lower bound)"
            }
        )
        .unwrap();
    }
    if let Some(c) = &env.classes {
        writeln!(out, "pure: {}", yes(c.pure)).unwrap();
        writeln!(out, "two-stage: {} ({} stages)", yes(c.two_stage), c.stages).unwrap();
        writeln!(out, "hyperelliptic: {}", yes(c.hyperelliptic)).unwrap();
        writeln!(out, "class (I): {}", yes(c.class_i_member)).unwrap();
        for w in c.class_i.iter().filter(|w| w.strict) {
            writeln!(
                out,
                "  witness ({:?}): A={{{}}} B={{{}}} C={{{}}}",
                w.split.variant,
                w.blocks.a.join(","),
                w.blocks.b.join(","),
                w.blocks.c.join(",")
            )
            .unwrap();
        }
        writeln!(out, "ellipticity: {:?}", c.elliptic.status).unwrap();
    }
    if let Some(h) = &env.hilali {
        writeln!(out, "dim W = {}, dim H = {}", h.dim_w, h.dim_h).unwrap();
        writeln!(out, "verdict: {:?} (route {:?})", h.verdict, h.route).unwrap();
        if let Some(t) = h.triple {
            writeln!(out, "triple (n1,n2,r) = {t}").unwrap();
        }
        for (name, b) in &h.bounds {
            let status = match b.holds {
                Some(true) => "met",
                Some(false) => "NOT met",
                None => "unknown",
            };
            writeln!(out, "  {name:<18} {:>6}  {status}", b.value).unwrap();
        }
    }
    if let Some(s) = &env.wang {
        writeln!(out, "Wang sequence for {}:", s.generator).unwrap();
        rows_text(out, &s.rows);
        writeln!(
            out,
            "identity holds: {}; connecting rank {}; (θ*)² = 0: {}",
            yes(s.identity_holds),
            s.connecting_rank,
            yes(s.square_zero)
        )
        .unwrap();
    }
    if let Some(g) = &env.gysin {
        for step in &g.steps {
            let s = &step.sequence;
            writeln!(out, "Gysin step peeling {}:", s.generator).unwrap();
            rows_text(out, &s.rows);
            writeln!(
                out,
                "identity holds: {}; strictness witness: {}",
                yes(s.identity_holds),
                s.strictness_witness
                    .map_or("none".into(), |d| format!("degree {d}"))
            )
            .unwrap();
        }
        let dims: Vec<String> = g.dims.iter().map(ToString::to_string).collect();
        writeln!(
            out,
            "dims: {}; chain holds: {}",
            dims.join(" > "),
            yes(g.chain_holds)
        )
        .unwrap();
    }
    for w in &env.warnings {
        writeln!(out, "warning: {w}").unwrap();
    }
}
