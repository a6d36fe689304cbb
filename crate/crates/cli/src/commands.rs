use heffter::binmat::{gale_ryser_check, gale_ryser_construct};
use heffter::decomp::{
    circuits_from_line, decomposition_from_matrix, ortho_path_decomposition, period_sequence, check_decomposes,
    check_orthogonal, CayleySpec, Side, Sign,
};
use heffter::embed::{check_compatible, find_compatible_ordering, rotation_system, trace_embedding, OrderingSearch};
use heffter::gha_cyclic::{
    build_nonzero_simple_ngha, build_relative_zero_gha, build_zero_simple_gha, row_shift_naturally_simple,
    GhaCandidate, PairedSymbolSet,
};
use heffter::gha_fill::fill_gha;
use heffter::gmatrix::{Ordering, SumVerdict};
use heffter::group::{Group, SymbolSet};
use heffter::nasm::{build_doubled_nasm, build_uniform_nasm, SignMatrix};
use heffter::report::Check;
use serde_json::{json, Value};

use crate::io::{self, load_decomp, load_gha, DecompFile, GhaFile, GhaOverrides};
use crate::pipeline;
use crate::report::{CliResult, Ctx, InvalidInput, Outcome};
use crate::{
    BinmatCmd, Command, DecompCmd, EmbedCmd, Expect, GhaCmd, GhaInput, GroupCmd, NasmCmd, NasmSource, SideArg,
};

pub fn dispatch(ctx: &mut Ctx, cmd: Command) -> CliResult<Outcome> {
    match cmd {
        Command::Group(c) => group(c),
        Command::Binmat(c) => binmat(c),
        Command::Nasm(c) => nasm(ctx, c),
        Command::Gha(c) => gha(ctx, c),
        Command::Decomp(c) => decomp(ctx, c),
        Command::Embed(c) => embed(ctx, c),
        Command::Pipeline { job } => pipeline::run(ctx, &job),
    }
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("outputs serialize")
}

fn group(cmd: GroupCmd) -> CliResult<Outcome> {
    match cmd {
        GroupCmd::Info { group } => {
            let g = Group::parse(&group)?;
            let positive: Vec<usize> = g.elements().filter(|&a| a != 0 && g.abs(a) == a).collect();
            let out = json!({
                "group": g.descriptor(),
                "order": g.order(),
                "abelian": g.is_abelian(),
                "positive": positive,
                "involutions": g.involutions(&positive),
                "labels": g.elements().map(|a| g.label(a)).collect::<Vec<_>>(),
            });
            Ok(Outcome::new(out, vec![]))
        }
        GroupCmd::Elem { group, elem } => {
            let g = Group::parse(&group)?;
            g.check(elem)?;
            let out = json!({
                "group": g.descriptor(),
                "elem": elem,
                "label": g.label(elem),
                "neg": g.neg(elem),
                "abs": g.abs(elem),
                "order": g.element_order(elem),
                "involution": g.is_involution(elem),
            });
            Ok(Outcome::new(out, vec![]))
        }
    }
}

fn binmat(cmd: BinmatCmd) -> CliResult<Outcome> {
    let (h, k, build) = match cmd {
        BinmatCmd::Check { h, k } => (h.0, k.0, false),
        BinmatCmd::Build { h, k } => (h.0, k.0, true),
    };
    let feasible = gale_ryser_check(&h, &k);
    let check = Check::from_result("GR:feasibility", feasible.map_err(|v| v.to_string()));
    if !build || !check.passed {
        return Ok(Outcome::new(json!({ "h": h, "k": k, "feasible": check.passed }), vec![check]));
    }
    let b = gale_ryser_construct(&h, &k)?;
    let weights = Check::expect(
        "GR:weights",
        b.row_weights() == h && b.col_weights() == k,
        "constructed matrix has other line weights",
    );
    Ok(Outcome::new(json!({ "matrix": b }), vec![check, weights]).with_artifact(to_value(&b)))
}

fn nasm_checks(a: &SignMatrix, h: Option<&[usize]>, k: Option<&[usize]>) -> Vec<Check> {
    let c = a.verify();
    let mut checks = vec![Check::expect(
        "NASM:alternation",
        c.is_nasm,
        format!("signs do not alternate along {:?}", c.first_violation),
    )];
    if let Some(h) = h {
        checks.push(Check::expect("NASM:row_weights", c.weights.rows == h, format!("rows have weights {:?}", c.weights.rows)));
    }
    if let Some(k) = k {
        checks.push(Check::expect("NASM:col_weights", c.weights.cols == k, format!("columns have weights {:?}", c.weights.cols)));
    }
    checks
}

fn nasm(ctx: &mut Ctx, cmd: NasmCmd) -> CliResult<Outcome> {
    let (a, h, k) = match cmd {
        NasmCmd::Build { m, n, h, k } => (build_uniform_nasm(m, n, h, k)?, Some(vec![h; m]), Some(vec![k; n])),
        NasmCmd::Doubled { h, k } => {
            let a = build_doubled_nasm(&h.0, &k.0)?;
            let (h2, k2) = heffter::nasm::doubled_weights(&h.0, &k.0);
            (a, Some(h2), Some(k2))
        }
        NasmCmd::Verify { matrix, h, k } => {
            let a = io::load_sign_matrix(ctx, &matrix)?;
            let c = a.verify();
            let checks = nasm_checks(&a, h.as_ref().map(|x| x.0.as_slice()), k.as_ref().map(|x| x.0.as_slice()));
            return Ok(Outcome::new(to_value(&c), checks));
        }
    };
    let checks = nasm_checks(&a, h.as_deref(), k.as_deref());
    Ok(Outcome::new(json!({ "matrix": a, "text": a.to_text() }), checks).with_artifact(to_value(&a)))
}

pub fn nasm_from(ctx: &mut Ctx, src: &NasmSource) -> CliResult<SignMatrix> {
    if let Some(path) = &src.nasm {
        return io::load_sign_matrix(ctx, path);
    }
    if let Some(u) = &src.uniform {
        let [m, n, h, k] = u.0[..] else {
            return Err(InvalidInput("--uniform takes m,n,h,k".into()));
        };
        return Ok(build_uniform_nasm(m, n, h, k)?);
    }
    match (&src.doubled_h, &src.doubled_k) {
        (Some(h), Some(k)) => Ok(build_doubled_nasm(&h.0, &k.0)?),
        _ => Err(InvalidInput("give --nasm, --uniform or --doubled-h/--doubled-k".into())),
    }
}

/// Checks and outputs of a verified GHA.
pub fn gha_summary(c: &GhaCandidate, expect: Expect, require_simple: bool) -> (Value, Vec<Check>) {
    let r = c.verify();
    let mut checks = r.checks.clone();
    let verdict = r.verdict();
    match expect {
        Expect::Zero => checks.push(Check::expect(
            "sum:zero",
            verdict == Some(SumVerdict::ZeroSum),
            format!("line sums {:?}", r.sums.as_ref().map(|s| (&s.rows, &s.cols))),
        )),
        Expect::Nonzero => checks.push(Check::expect(
            "sum:nonzero",
            verdict == Some(SumVerdict::NonzeroSum),
            format!("line sums {:?}", r.sums.as_ref().map(|s| (&s.rows, &s.cols))),
        )),
        Expect::Any => {}
    }
    if require_simple {
        checks.push(Check::expect("simple", r.is_simple(), "some line has a vanishing partial run"));
    }
    let out = json!({
        "gha": GhaFile::from_candidate(c),
        "verdict": verdict,
        "simple": r.is_simple(),
        "sums": r.sums,
        "simple_rows": r.simple_rows,
        "simple_cols": r.simple_cols,
    });
    (out, checks)
}

fn built(c: GhaCandidate, expect: Expect, require_simple: bool) -> Outcome {
    let (out, checks) = gha_summary(&c, expect, require_simple);
    Outcome::new(out, checks).with_artifact(to_value(&GhaFile::from_candidate(&c)))
}

pub fn fill(pattern: &heffter::binmat::BinMatrix, group: &str, symbols: Vec<usize>, lambda: usize) -> CliResult<GhaCandidate> {
    let g = Group::parse(group)?;
    let s = SymbolSet::new(g, symbols, lambda)?;
    Ok(fill_gha(pattern, &s)?)
}

fn gha(ctx: &mut Ctx, cmd: GhaCmd) -> CliResult<Outcome> {
    match cmd {
        GhaCmd::BuildNonzero { v, symbols, nasm } => {
            let a = nasm_from(ctx, &nasm)?;
            Ok(built(build_nonzero_simple_ngha(v, &symbols.0, &a)?, Expect::Nonzero, true))
        }
        GhaCmd::BuildZero { v, x, symbols, nasm, row_shift } => {
            let a = nasm_from(ctx, &nasm)?;
            let p = PairedSymbolSet::new(symbols.0, x, v)?;
            let mut c = build_zero_simple_gha(&p, &a)?;
            if row_shift {
                c = row_shift_naturally_simple(&c)?;
            }
            Ok(built(c, Expect::Zero, true))
        }
        GhaCmd::BuildRelative { d, u, h, k, doubled } => {
            Ok(built(build_relative_zero_gha(d, u, &h.0, &k.0, !doubled)?, Expect::Zero, true))
        }
        GhaCmd::Verify { gha, symbols, lambda, ordering, expect, require_simple } => {
            let over = GhaOverrides { symbols: symbols.map(|s| s.0), lambda, ordering: ordering.as_deref() };
            let c = load_gha(ctx, &gha, over)?;
            let (out, checks) = gha_summary(&c, expect, require_simple);
            Ok(Outcome::new(out, checks))
        }
        GhaCmd::Fill { pattern, group, symbols, lambda } => {
            let b = io::load_binmatrix(ctx, &pattern)?;
            Ok(built(fill(&b, &group, symbols.0, lambda)?, Expect::Nonzero, false))
        }
    }
}

fn load_input(ctx: &mut Ctx, input: &GhaInput) -> CliResult<GhaCandidate> {
    let over = GhaOverrides { ordering: input.ordering.as_deref(), ..Default::default() };
    load_gha(ctx, &input.gha, over)
}

/// Undirected `W₊` developments of both sides, checked against `λ Cay[G : S]`
/// and for orthogonality.
pub fn decompose(c: &GhaCandidate) -> CliResult<(Value, Vec<Check>)> {
    let omega = c.effective_ordering();
    let g = c.matrix.group().clone();
    let rows = decomposition_from_matrix(&c.matrix, &omega, Sign::Plus, Side::Rows, true)?;
    let cols = decomposition_from_matrix(&c.matrix, &omega, Sign::Plus, Side::Cols, true)?;
    let cay = CayleySpec::lambda_fold(g.clone(), c.symbols.elements(), c.symbols.lambda(), false)?;
    let mut checks = vec![
        Check::expect("decomposition:rows", check_decomposes(&rows, &cay), "row walks do not partition λCay[G : S]"),
        Check::expect("decomposition:cols", check_decomposes(&cols, &cay), "column walks do not partition λCay[G : S]"),
    ];
    let orthogonal = check_orthogonal(&rows, &cols);
    if c.symbols.lambda() == 1 {
        checks.push(Check::expect("orthogonality", orthogonal, "a row walk and a column walk share two edges"));
    }
    let out = json!({
        "rows": DecompFile::new(g.clone(), Some(Side::Rows), Sign::Plus, &rows),
        "cols": DecompFile::new(g, Some(Side::Cols), Sign::Plus, &cols),
        "decomposes": checks[0].passed && checks[1].passed,
        "orthogonal": orthogonal,
    });
    Ok((out, checks))
}

fn decomp(ctx: &mut Ctx, cmd: DecompCmd) -> CliResult<Outcome> {
    match cmd {
        DecompCmd::Build { input, sign, side, undirected } => {
            let c = load_input(ctx, &input)?;
            let side = match side {
                SideArg::Rows => Side::Rows,
                SideArg::Cols => Side::Cols,
            };
            let devs = decomposition_from_matrix(&c.matrix, &c.effective_ordering(), sign, side, undirected)?;
            let file = DecompFile::new(c.matrix.group().clone(), Some(side), sign, &devs);
            let kinds: Vec<_> = devs.iter().map(|d| d.base.kind()).collect();
            let out = json!({ "decomposition": file, "kinds": kinds });
            Ok(Outcome::new(out, vec![]).with_artifact(to_value(&file)))
        }
        DecompCmd::Verify { decomp, connection, lambda } => {
            let d = load_decomp(ctx, &decomp)?;
            let devs = d.developments()?;
            let spec = CayleySpec::lambda_fold(d.group.clone(), &connection.0, lambda, d.directed)?;
            let ok = check_decomposes(&devs, &spec);
            let check = Check::expect("decomposition", ok, "translates do not partition the Cayley (di)graph");
            Ok(Outcome::new(json!({ "cayley": spec, "decomposes": ok }), vec![check]))
        }
        DecompCmd::Orthogonal { a, b } => {
            let (a, b) = (load_decomp(ctx, &a)?, load_decomp(ctx, &b)?);
            if a.group != b.group {
                return Err(InvalidInput("decompositions live over different groups".into()));
            }
            let ok = check_orthogonal(&a.developments()?, &b.developments()?);
            let check = Check::expect("orthogonality", ok, "two translates share more than one edge");
            Ok(Outcome::new(json!({ "orthogonal": ok }), vec![check]))
        }
        DecompCmd::Circuits { input, line, sign } => {
            let c = load_input(ctx, &input)?;
            let circuits = circuits_from_line(&c.matrix, &c.effective_ordering(), line, sign)?;
            Ok(Outcome::new(json!({ "line": line, "circuits": circuits }), vec![]))
        }
        DecompCmd::Period { input } => {
            let c = load_input(ctx, &input)?;
            let p = period_sequence(&c.matrix, &c.effective_ordering())?;
            let m = c.matrix.rows();
            Ok(Outcome::new(json!({ "rows": p[..m].to_vec(), "cols": p[m..].to_vec() }), vec![]))
        }
        DecompCmd::Paths { v, symbols, h, k } => {
            let p = ortho_path_decomposition(v, &symbols.0, &h.0, &k.0)?;
            let g = p.rows_matrix.group().clone();
            let cay = CayleySpec::lambda_fold(g.clone(), &symbols.0, 1, false)?;
            let checks = vec![
                Check::expect("decomposition:rows", check_decomposes(&p.rows, &cay), "row paths do not partition Cay[Z_v : S]"),
                Check::expect("decomposition:cols", check_decomposes(&p.cols, &cay), "column paths do not partition Cay[Z_v : S]"),
                Check::expect("orthogonality", check_orthogonal(&p.rows, &p.cols), "a row path and a column path share two edges"),
            ];
            let out = json!({
                "rows_matrix": p.rows_matrix,
                "cols_matrix": p.cols_matrix,
                "rows": DecompFile::new(g.clone(), Some(Side::Rows), Sign::Plus, &p.rows),
                "cols": DecompFile::new(g, Some(Side::Cols), Sign::Plus, &p.cols),
            });
            Ok(Outcome::new(out, checks))
        }
    }
}

/// Traces the embedding of `c` under `omega`, searching for a compatible
/// ordering first when none is given.
pub fn embedding(c: &GhaCandidate, omega: Option<Ordering>, budget: usize) -> CliResult<(Value, Vec<Check>)> {
    let (omega, search) = match omega {
        Some(o) => (Some(o), None),
        None => {
            let s = find_compatible_ordering(&c.matrix, budget)?;
            (s.ordering().cloned(), Some(s))
        }
    };
    let Some(omega) = omega else {
        let detail = match &search {
            Some(OrderingSearch::Exhausted { tried }) => format!("no compatible ordering among {tried} candidates"),
            Some(OrderingSearch::BudgetHit { tried }) => format!("budget of {tried} orderings exhausted"),
            Some(OrderingSearch::ParityObstructed) => "line lengths force the wrong parity for a single cycle".into(),
            _ => String::new(),
        };
        return Ok((json!({ "search": search }), vec![Check::fail("compatibility", detail)]));
    };
    if !check_compatible(&c.matrix, &omega)? {
        let check = Check::fail("compatibility", "ω_c ∘ ω_r is not a single cycle");
        return Ok((json!({ "ordering": omega }), vec![check]));
    }
    let rs = rotation_system(c, &omega)?;
    let e = trace_embedding(&rs)?;
    let mut checks = vec![Check::pass("compatibility")];
    checks.extend(e.checks.iter().cloned());
    let out = json!({
        "search": search,
        "ordering": omega,
        "rho0": rs.rho0,
        "face_count": e.face_count(),
        "faces": e.faces,
        "components": e.components,
    });
    Ok((out, checks))
}

fn embed(ctx: &mut Ctx, cmd: EmbedCmd) -> CliResult<Outcome> {
    let (c, omega, budget) = match cmd {
        EmbedCmd::Build { input, budget } => {
            let c = load_input(ctx, &GhaInput { gha: input.gha.clone(), ordering: None })?;
            let omega = match &input.ordering {
                Some(p) => Some(io::load_ordering(ctx, p)?),
                None => None,
            };
            (c, omega, budget)
        }
        EmbedCmd::Verify { gha, ordering } => {
            let c = load_gha(ctx, &gha, GhaOverrides::default())?;
            (c, Some(io::load_ordering(ctx, &ordering)?), 0)
        }
    };
    let (out, checks) = embedding(&c, omega, budget)?;
    let artifact = out.clone();
    Ok(Outcome::new(out, checks).with_artifact(artifact))
}
