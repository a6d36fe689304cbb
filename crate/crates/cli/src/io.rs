//! Input parsing and the on-disk formats the commands exchange.

use std::path::Path;

use heffter::binmat::BinMatrix;
use heffter::decomp::{Development, Side, Sign, Walk};
use heffter::gha_cyclic::GhaCandidate;
use heffter::gmatrix::{GMatrix, Line, Ordering};
use heffter::group::{Elem, Group, SymbolSet};
use heffter::nasm::SignMatrix;
use serde::{Deserialize, Serialize};

use crate::report::{CliResult, Ctx, InvalidInput};

/// Parses `1,2,5-8` into `[1, 2, 5, 6, 7, 8]`.
pub fn parse_list(s: &str) -> Result<Vec<usize>, String> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let num = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("bad number `{t}`"));
        match part.split_once('-') {
            Some((a, b)) => {
                let (a, b) = (num(a)?, num(b)?);
                if a > b {
                    return Err(format!("empty range `{part}`"));
                }
                out.extend(a..=b);
            }
            None => out.push(num(part)?),
        }
    }
    Ok(out)
}

/// `row:3` or `col:0`, 0-based.
pub fn parse_line(s: &str) -> Result<Line, String> {
    let (kind, idx) = s.split_once(':').ok_or_else(|| format!("expected row:<i> or col:<j>, got `{s}`"))?;
    let idx = idx.parse().map_err(|_| format!("bad index in `{s}`"))?;
    match kind {
        "row" => Ok(Line::Row(idx)),
        "col" => Ok(Line::Col(idx)),
        _ => Err(format!("expected row:<i> or col:<j>, got `{s}`")),
    }
}

pub fn parse_sign(s: &str) -> Result<Sign, String> {
    Sign::parse(s).map_err(|e| e.to_string())
}

fn is_json(text: &str) -> bool {
    text.trim_start().starts_with('{')
}

pub fn load_sign_matrix(ctx: &mut Ctx, path: &Path) -> CliResult<SignMatrix> {
    let text = ctx.read(path)?;
    Ok(if is_json(&text) { serde_json::from_str(&text)? } else { SignMatrix::from_text(&text)? })
}

pub fn load_binmatrix(ctx: &mut Ctx, path: &Path) -> CliResult<BinMatrix> {
    let text = ctx.read(path)?;
    Ok(if is_json(&text) { serde_json::from_str(&text)? } else { BinMatrix::from_text(&text)? })
}

pub fn load_ordering(ctx: &mut Ctx, path: &Path) -> CliResult<Ordering> {
    Ok(serde_json::from_str(&ctx.read(path)?)?)
}

/// A GHA as exchanged between commands.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GhaFile {
    pub matrix: GMatrix,
    pub symbols: Vec<Elem>,
    pub lambda: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ordering: Option<Ordering>,
}

impl GhaFile {
    pub fn from_candidate(c: &GhaCandidate) -> Self {
        GhaFile {
            matrix: c.matrix.clone(),
            symbols: c.symbols.elements().to_vec(),
            lambda: c.symbols.lambda(),
            ordering: c.ordering.clone(),
        }
    }

    pub fn into_candidate(self) -> CliResult<GhaCandidate> {
        let s = SymbolSet::new(self.matrix.group().clone(), self.symbols, self.lambda)?;
        if let Some(o) = &self.ordering {
            o.validate(&self.matrix)?;
        }
        Ok(GhaCandidate::new(self.matrix, s, self.ordering))
    }
}

/// Overrides applied while loading a GHA.
#[derive(Default)]
pub struct GhaOverrides<'a> {
    pub symbols: Option<Vec<Elem>>,
    pub lambda: Option<usize>,
    pub ordering: Option<&'a Path>,
}

/// Reads either a GHA file or a bare matrix. A bare matrix without
/// `--symbols` takes the distinct absolute values of its entries.
pub fn load_gha(ctx: &mut Ctx, path: &Path, over: GhaOverrides) -> CliResult<GhaCandidate> {
    let text = ctx.read(path)?;
    let value: Option<serde_json::Value> = if is_json(&text) { Some(serde_json::from_str(&text)?) } else { None };
    let mut file = match value {
        Some(v) if v.get("matrix").is_some() => serde_json::from_value::<GhaFile>(v)?,
        other => {
            let matrix = match other {
                Some(v) => serde_json::from_value::<GMatrix>(v)?,
                None => GMatrix::from_text(&text)?,
            };
            let g = matrix.group().clone();
            let mut symbols: Vec<Elem> = matrix.nonzero_entries().into_iter().map(|a| g.abs(a)).collect();
            symbols.sort_unstable();
            symbols.dedup();
            GhaFile { matrix, symbols, lambda: 1, ordering: None }
        }
    };
    if let Some(s) = over.symbols {
        file.symbols = s;
    }
    if let Some(l) = over.lambda {
        file.lambda = l;
    }
    if let Some(p) = over.ordering {
        file.ordering = Some(load_ordering(ctx, p)?);
    }
    file.into_candidate()
}

/// A family of developments over one group.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DecompFile {
    pub group: Group,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub side: Option<Side>,
    pub sign: Sign,
    pub directed: bool,
    pub walks: Vec<Walk>,
}

impl DecompFile {
    pub fn new(group: Group, side: Option<Side>, sign: Sign, devs: &[Development]) -> Self {
        let directed = devs.iter().all(|d| d.base.directed);
        DecompFile { group, side, sign, directed, walks: devs.iter().map(|d| d.base.clone()).collect() }
    }

    pub fn developments(&self) -> CliResult<Vec<Development>> {
        self.walks
            .iter()
            .map(|w| Ok(Development::new(w.clone().with_group(self.group.clone())?)))
            .collect()
    }
}

pub fn load_decomp(ctx: &mut Ctx, path: &Path) -> CliResult<DecompFile> {
    let d: DecompFile = serde_json::from_str(&ctx.read(path)?)?;
    if d.walks.iter().any(|w| w.vertices.is_empty()) {
        return Err(InvalidInput("walk without vertices".into()));
    }
    Ok(d)
}
