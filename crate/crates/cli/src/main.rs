//! `heffter`: build, verify, decompose and embed Heffter-type arrays.
//!
//! Every command prints a JSON run report on stdout. Timing goes to stderr.
//! Exit status is 0 on success, 1 when a named check fails and 2 on
//! invalid input.

mod commands;
mod io;
mod pipeline;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use heffter::decomp::Sign;
use heffter::gmatrix::Line;

use crate::report::{Ctx, RunReport, EXIT_INVALID};

#[derive(Parser)]
#[command(name = "heffter", version, about = "Heffter arrays, NASMs, Cayley decompositions and biembeddings")]
struct Cli {
    /// Also write the command's main artifact (matrix, GHA, decomposition) to this file as JSON.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

/// A comma separated list; `a-b` stands for the inclusive range.
#[derive(Clone, Debug)]
pub struct List(pub Vec<usize>);

fn list(s: &str) -> Result<List, String> {
    io::parse_list(s).map(List)
}

#[derive(Subcommand)]
enum Command {
    /// Group descriptors and elements.
    #[command(subcommand)]
    Group(GroupCmd),
    /// 0/1 matrices with prescribed line weights.
    #[command(subcommand)]
    Binmat(BinmatCmd),
    /// Near alternating sign matrices.
    #[command(subcommand)]
    Nasm(NasmCmd),
    /// Generalized Heffter arrays.
    #[command(subcommand)]
    Gha(GhaCmd),
    /// Cayley (di)graph decompositions from arrays.
    #[command(subcommand)]
    Decomp(DecompCmd),
    /// Biembeddings from compatible orderings.
    #[command(subcommand)]
    Embed(EmbedCmd),
    /// Build, verify, decompose and embed from one JSON job file.
    Pipeline {
        #[arg(long, value_name = "FILE")]
        job: PathBuf,
    },
}

#[derive(Subcommand)]
enum GroupCmd {
    /// Order, abelianness, positive part and involutions.
    Info {
        #[arg(long)]
        group: String,
    },
    /// Negative, absolute value and order of one element.
    Elem {
        #[arg(long)]
        group: String,
        #[arg(long)]
        elem: usize,
    },
}

#[derive(Subcommand)]
enum BinmatCmd {
    /// Gale–Ryser feasibility of row weights H and column weights K.
    Check {
        #[arg(short = 'H', value_parser = list)]
        h: List,
        #[arg(short = 'K', value_parser = list)]
        k: List,
    },
    /// Greedy construction of a 0/1 matrix with the given weights.
    Build {
        #[arg(short = 'H', value_parser = list)]
        h: List,
        #[arg(short = 'K', value_parser = list)]
        k: List,
    },
}

#[derive(Subcommand)]
enum NasmCmd {
    /// NASM(m, n; h, k) with every row of weight h and every column of weight k.
    Build {
        #[arg(short = 'm')]
        m: usize,
        #[arg(short = 'n')]
        n: usize,
        #[arg(short = 'H')]
        h: usize,
        #[arg(short = 'K')]
        k: usize,
    },
    /// NASM(2m, 2n; 2h, 2k) from the 0/1 realization of H and K.
    Doubled {
        #[arg(short = 'H', value_parser = list)]
        h: List,
        #[arg(short = 'K', value_parser = list)]
        k: List,
    },
    /// Alternation, and optionally the line weights.
    Verify {
        #[arg(long, value_name = "FILE")]
        matrix: PathBuf,
        #[arg(short = 'H', value_parser = list)]
        h: Option<List>,
        #[arg(short = 'K', value_parser = list)]
        k: Option<List>,
    },
}

/// Where a construction takes its NASM from.
#[derive(Args)]
struct NasmSource {
    /// NASM file (text or JSON).
    #[arg(long, value_name = "FILE", conflicts_with_all = ["uniform", "doubled_h"])]
    nasm: Option<PathBuf>,
    /// Uniform NASM parameters m,n,h,k.
    #[arg(long, value_name = "M,N,H,K", value_parser = list, conflicts_with = "doubled_h")]
    uniform: Option<List>,
    /// Row weights of the doubled NASM's 0/1 seed.
    #[arg(long, value_parser = list, requires = "doubled_k")]
    doubled_h: Option<List>,
    /// Column weights of the doubled NASM's 0/1 seed.
    #[arg(long, value_parser = list, requires = "doubled_h")]
    doubled_k: Option<List>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Expect {
    Zero,
    Nonzero,
    Any,
}

#[derive(Subcommand)]
enum GhaCmd {
    /// Nonzero sum simple NGHA over Z_v from a NASM of weight |S|.
    BuildNonzero {
        #[arg(long)]
        v: usize,
        #[arg(long, value_parser = list)]
        symbols: List,
        #[command(flatten)]
        nasm: NasmSource,
    },
    /// Zero sum simple GHA over Z_v from a paired symbol set with shift x.
    BuildZero {
        #[arg(long)]
        v: usize,
        #[arg(long)]
        x: usize,
        #[arg(long, value_parser = list)]
        symbols: List,
        #[command(flatten)]
        nasm: NasmSource,
        /// Move row m+1 to the end so the natural ordering is simple.
        #[arg(long)]
        row_shift: bool,
    },
    /// Zero sum simple GHA over (Z_v ∖ U)⁺ with v = (2d+1)u.
    BuildRelative {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        u: usize,
        #[arg(short = 'H', value_parser = list)]
        h: List,
        #[arg(short = 'K', value_parser = list)]
        k: List,
        /// Use the doubled NASM instead of the uniform one.
        #[arg(long)]
        doubled: bool,
    },
    /// Definitional checks, line sums and simplicity.
    Verify {
        /// GHA file, or a bare matrix in text or JSON form.
        #[arg(long, value_name = "FILE")]
        gha: PathBuf,
        #[arg(long, value_parser = list)]
        symbols: Option<List>,
        #[arg(long)]
        lambda: Option<usize>,
        #[arg(long, value_name = "FILE")]
        ordering: Option<PathBuf>,
        /// Required line sum verdict.
        #[arg(long, value_enum, default_value = "any")]
        expect: Expect,
        /// Also require every line to be simple.
        #[arg(long)]
        require_simple: bool,
    },
    /// Nonzero sum GHA over any group on a given 0/1 pattern.
    Fill {
        #[arg(long, value_name = "FILE")]
        pattern: PathBuf,
        #[arg(long)]
        group: String,
        #[arg(long, value_parser = list)]
        symbols: List,
        #[arg(long, default_value_t = 1)]
        lambda: usize,
    },
}

/// A GHA input with its optional ordering.
#[derive(Args)]
struct GhaInput {
    #[arg(long, value_name = "FILE")]
    gha: PathBuf,
    #[arg(long, value_name = "FILE")]
    ordering: Option<PathBuf>,
}

#[derive(Subcommand)]
enum DecompCmd {
    /// Developments of the W± walks of one side of an array.
    Build {
        #[command(flatten)]
        input: GhaInput,
        #[arg(long, value_parser = io::parse_sign, default_value = "+", allow_hyphen_values = true)]
        sign: Sign,
        #[arg(long, value_enum, default_value = "rows")]
        side: SideArg,
        /// Forget arc directions.
        #[arg(long)]
        undirected: bool,
    },
    /// Whether a decomposition partitions a Cayley (di)graph.
    Verify {
        #[arg(long, value_name = "FILE")]
        decomp: PathBuf,
        /// Connection multiset; repeats allowed.
        #[arg(long, value_parser = list)]
        connection: List,
        /// Multiplies the connection multiset.
        #[arg(long, default_value_t = 1)]
        lambda: usize,
    },
    /// Whether two decompositions share at most one edge per pair of walks.
    Orthogonal {
        #[arg(long, value_name = "FILE")]
        a: PathBuf,
        #[arg(long, value_name = "FILE")]
        b: PathBuf,
    },
    /// Circuits joining the translates of one line's walk.
    Circuits {
        #[command(flatten)]
        input: GhaInput,
        /// `row:<i>` or `col:<j>`, 0-based.
        #[arg(long, value_parser = io::parse_line)]
        line: Line,
        #[arg(long, value_parser = io::parse_sign, default_value = "+", allow_hyphen_values = true)]
        sign: Sign,
    },
    /// Order of every line sum, rows then columns.
    Period {
        #[command(flatten)]
        input: GhaInput,
    },
    /// Orthogonal path decompositions of Cay[Z_v : S] with row lengths H and column lengths K.
    Paths {
        #[arg(long)]
        v: usize,
        #[arg(long, value_parser = list)]
        symbols: List,
        #[arg(short = 'H', value_parser = list)]
        h: List,
        #[arg(short = 'K', value_parser = list)]
        k: List,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Rows,
    Cols,
}

#[derive(Subcommand)]
enum EmbedCmd {
    /// Search for a compatible ordering (unless one is given) and trace the faces.
    Build {
        #[command(flatten)]
        input: GhaInput,
        /// Orderings tried before giving up.
        #[arg(long, default_value_t = 10_000)]
        budget: usize,
    },
    /// Check compatibility of the given ordering and trace the faces.
    Verify {
        #[arg(long, value_name = "FILE")]
        gha: PathBuf,
        #[arg(long, value_name = "FILE")]
        ordering: PathBuf,
    },
}

fn main() {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let start = Instant::now();
    let mut ctx = Ctx::new(&argv);
    let outcome = match commands::dispatch(&mut ctx, cli.command) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {}", e.0);
            std::process::exit(EXIT_INVALID);
        }
    };
    if let (Some(path), Some(artifact)) = (&cli.out, &outcome.artifact) {
        let text = serde_json::to_string_pretty(artifact).expect("artifacts serialize") + "\n";
        if let Err(e) = std::fs::write(path, text) {
            eprintln!("error: {}: {e}", path.display());
            std::process::exit(EXIT_INVALID);
        }
    }
    let report = RunReport::new(argv, ctx.finish(), outcome);
    let mut stdout = std::io::stdout().lock();
    let _ = writeln!(stdout, "{}", serde_json::to_string_pretty(&report).expect("reports serialize"));
    let _ = stdout.flush();
    eprintln!("elapsed: {:.3}s", start.elapsed().as_secs_f64());
    std::process::exit(report.exit_code());
}
