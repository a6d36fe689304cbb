//! `pipeline --job <file>`: build, verify, decompose and embed in one run.

use std::path::Path;

use heffter::binmat::BinMatrix;
use heffter::gha_cyclic::{
    build_nonzero_simple_ngha, build_relative_zero_gha, build_zero_simple_gha, row_shift_naturally_simple,
    GhaCandidate, PairedSymbolSet,
};
use heffter::gmatrix::SumVerdict;
use heffter::nasm::{build_doubled_nasm, build_uniform_nasm, SignMatrix};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::commands::{decompose, embedding, fill, gha_summary};
use crate::report::{CliResult, Ctx, Outcome};
use crate::Expect;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Job {
    build: Build,
    /// Orderings tried in the compatible ordering search.
    #[serde(default = "default_budget")]
    embed_budget: usize,
}

fn default_budget() -> usize {
    10_000
}

#[derive(Deserialize)]
#[serde(tag = "construction", rename_all = "snake_case")]
enum Build {
    Nonzero {
        v: usize,
        symbols: Vec<usize>,
        nasm: NasmSpec,
    },
    Zero {
        v: usize,
        x: usize,
        symbols: Vec<usize>,
        nasm: NasmSpec,
        #[serde(default)]
        row_shift: bool,
    },
    Relative {
        d: usize,
        u: usize,
        h: Vec<usize>,
        k: Vec<usize>,
        #[serde(default)]
        doubled: bool,
    },
    Fill {
        pattern: Vec<Vec<u8>>,
        group: String,
        symbols: Vec<usize>,
        #[serde(default = "one")]
        lambda: usize,
    },
}

fn one() -> usize {
    1
}

#[derive(Deserialize)]
#[serde(rename_all = "snake_case")]
enum NasmSpec {
    Uniform { m: usize, n: usize, h: usize, k: usize },
    Doubled { h: Vec<usize>, k: Vec<usize> },
    Rows(Vec<Vec<i8>>),
}

impl NasmSpec {
    fn build(&self) -> CliResult<SignMatrix> {
        Ok(match self {
            NasmSpec::Uniform { m, n, h, k } => build_uniform_nasm(*m, *n, *h, *k)?,
            NasmSpec::Doubled { h, k } => build_doubled_nasm(h, k)?,
            NasmSpec::Rows(rows) => SignMatrix::from_rows(rows.clone())?,
        })
    }
}

impl Build {
    fn run(&self) -> CliResult<(GhaCandidate, Expect, bool)> {
        Ok(match self {
            Build::Nonzero { v, symbols, nasm } => {
                (build_nonzero_simple_ngha(*v, symbols, &nasm.build()?)?, Expect::Nonzero, true)
            }
            Build::Zero { v, x, symbols, nasm, row_shift } => {
                let p = PairedSymbolSet::new(symbols.clone(), *x, *v)?;
                let mut c = build_zero_simple_gha(&p, &nasm.build()?)?;
                if *row_shift {
                    c = row_shift_naturally_simple(&c)?;
                }
                (c, Expect::Zero, true)
            }
            Build::Relative { d, u, h, k, doubled } => {
                (build_relative_zero_gha(*d, *u, h, k, !doubled)?, Expect::Zero, true)
            }
            Build::Fill { pattern, group, symbols, lambda } => {
                let b = BinMatrix::from_rows(pattern)?;
                (fill(&b, group, symbols.clone(), *lambda)?, Expect::Nonzero, false)
            }
        })
    }
}

pub fn run(ctx: &mut Ctx, path: &Path) -> CliResult<Outcome> {
    let job: Job = serde_json::from_str(&ctx.read(path)?)?;
    let (c, expect, require_simple) = job.build.run()?;

    let (gha, mut checks) = gha_summary(&c, expect, require_simple);
    let is_gha = c.verify().is_gha();
    let (decomp, decomp_checks) = decompose(&c)?;
    checks.extend(decomp_checks);

    // Biembeddings need λ = 1 and no involutions; a failed ordering search
    // is reported, not counted as a failure.
    let attempted = is_gha && c.symbols.lambda() == 1 && c.symbols.involutions().is_empty();
    let (embed, found, valid) = if attempted {
        let (out, embed_checks) = embedding(&c, None, job.embed_budget)?;
        let found = embed_checks.iter().any(|x| x.name == "compatibility" && x.passed);
        let valid = found && embed_checks.iter().all(|x| x.passed);
        if found {
            checks.extend(embed_checks);
        }
        (out, found, valid)
    } else {
        (Value::Null, false, false)
    };

    let verdict = gha["verdict"].clone();
    let flags = json!({
        "gha": is_gha,
        "zero_sum": verdict == json!(SumVerdict::ZeroSum),
        "nonzero_sum": verdict == json!(SumVerdict::NonzeroSum),
        "simple": gha["simple"],
        "decomposes": decomp["decomposes"],
        "orthogonal": decomp["orthogonal"],
        "biembedding_attempted": attempted,
        "biembedding_found": found,
        "biembedding_valid": valid,
    });
    let out = json!({ "flags": flags, "gha": gha, "decomposition": decomp, "embedding": embed });
    Ok(Outcome::new(out.clone(), checks).with_artifact(out))
}
