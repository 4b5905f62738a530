//! The text format for algebra definitions.
//!
//! ```text
//! # comments run to the end of the line
//! [meta]
//! degree_cutoff = 6
//! conventions = 1
//!
//! [hopf]
//! dim = 2
//! [e1, e2] = 1 e2
//!
//! [group]                      # optional; acts on h by matrices
//! elements = 1 g
//! mul g g = 1
//! act g = -1 0 ; 0 1
//!
//! [module]
//! rank = 1
//! names = v
//! sectors = minus              # optional: minus | s0 | plus per generator
//!
//! [product]
//! v v = 2 (1,0|0,0|v) + -1 (0,0|1,0|v)
//! ```
//!
//! A product term `c (a|b|k)` stands for `c (e^(a) ⊗ 1) ⊗_H (e^(b) ⊗ v_k)`.
//! Every pair of generators needs a row; `0` is the empty sum. Ordinary
//! algebras are written with `dim = 0` and terms `c (||k)`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::hopf::{FiniteGroup, HopfAlgebra, LieData, MultiIndex, SmashAlgebra};
use crate::linalg::Matrix;
use crate::ordinary::OrdinaryAlgebra;
use crate::pseudo::{CanonKey, CanonicalTensor, PseudoAlgebra, Sector};
use crate::scalar::{format_scalar, parse_scalar, LinComb, Scalar};

pub const CONVENTIONS_VERSION: u32 = 1;
pub const DEFAULT_CUTOFF: u32 = 6;

/// A finite group acting on `h`.
#[derive(Clone, Debug)]
pub struct GroupBlock {
    pub group: FiniteGroup,
    pub action: Vec<Matrix>,
}

/// A parsed definition file.
#[derive(Clone, Debug)]
pub struct DefinitionFile {
    pub hopf: Arc<HopfAlgebra>,
    pub group: Option<GroupBlock>,
    pub algebra: PseudoAlgebra,
    pub conventions: u32,
}

impl DefinitionFile {
    /// `U(h) # k[Γ]` when a group block is present.
    pub fn smash(&self) -> Result<Option<SmashAlgebra>> {
        self.group
            .as_ref()
            .map(|g| {
                let base = HopfAlgebra::new(self.hopf.lie().clone(), self.hopf.cutoff())?;
                SmashAlgebra::new(base, g.group.clone(), g.action.clone())
            })
            .transpose()
    }

    /// The ordinary algebra of a file whose products have trivial H-parts.
    pub fn ordinary(&self) -> Result<OrdinaryAlgebra> {
        crate::constructions::current_part(&self.algebra).ok_or_else(|| Error::DimensionMismatch {
            line: 0,
            message: "products have nontrivial H-parts; not an ordinary algebra".into(),
        })
    }
}

fn syntax(line: usize, message: impl Into<String>) -> Error {
    Error::Syntax { line, message: message.into() }
}

fn dimension(line: usize, message: impl Into<String>) -> Error {
    Error::DimensionMismatch { line, message: message.into() }
}

#[derive(Default)]
struct Sections {
    meta: Vec<(usize, String)>,
    hopf: Vec<(usize, String)>,
    group: Vec<(usize, String)>,
    module: Vec<(usize, String)>,
    product: Vec<(usize, String)>,
}

fn split_sections(text: &str) -> Result<Sections> {
    let mut out = Sections::default();
    let mut current: Option<&str> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with('[') && line.ends_with(']') && !line.contains(',') {
            let name = &line[1..line.len() - 1];
            match name {
                "meta" | "hopf" | "group" | "module" | "product" => current = Some(name),
                other => return Err(syntax(line_no, format!("unknown section `[{other}]`"))),
            }
            continue;
        }
        let bucket = match current {
            Some("meta") => &mut out.meta,
            Some("hopf") => &mut out.hopf,
            Some("group") => &mut out.group,
            Some("module") => &mut out.module,
            Some("product") => &mut out.product,
            _ => return Err(syntax(line_no, "content before the first section header")),
        };
        bucket.push((line_no, line.to_string()));
    }
    Ok(out)
}

fn key_value(line_no: usize, line: &str) -> Result<(String, String)> {
    let (k, v) = line.split_once('=').ok_or_else(|| syntax(line_no, "expected `key = value`"))?;
    Ok((k.trim().to_string(), v.trim().to_string()))
}

fn parse_u32(line_no: usize, v: &str, what: &str) -> Result<u32> {
    v.parse().map_err(|_| syntax(line_no, format!("`{v}` is not a valid {what}")))
}

fn parse_coeff(line_no: usize, text: &str) -> Result<Scalar> {
    parse_scalar(text).ok_or_else(|| syntax(line_no, format!("`{text}` is not a rational number")))
}

/// Splits `a + b + -c` at top-level `+` signs.
fn split_terms(text: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0;
    let mut start = 0;
    for (i, ch) in text.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            '+' if depth == 0 => {
                out.push(text[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(text[start..].trim());
    out
}

fn parse_multi(line_no: usize, text: &str, dim: usize) -> Result<MultiIndex> {
    let text = text.trim();
    let entries: Vec<&str> = if text.is_empty() { Vec::new() } else { text.split(',').map(str::trim).collect() };
    if entries.len() != dim {
        return Err(dimension(line_no, format!("multi-index `{text}` has length {}, expected {dim}", entries.len())));
    }
    let values = entries
        .iter()
        .map(|e| e.parse::<u32>().map_err(|_| syntax(line_no, format!("`{e}` is not a non-negative integer"))))
        .collect::<Result<Vec<_>>>()?;
    Ok(MultiIndex(values))
}

fn generator_index(line_no: usize, name: &str, dim: usize) -> Result<usize> {
    let idx = name
        .strip_prefix('e')
        .and_then(|d| d.parse::<usize>().ok())
        .filter(|&i| i >= 1)
        .ok_or_else(|| syntax(line_no, format!("`{name}` is not a generator name e1..e{dim}")))?;
    if idx > dim {
        return Err(dimension(line_no, format!("generator `{name}` exceeds dim = {dim}")));
    }
    Ok(idx - 1)
}

type BracketLine = (usize, usize, usize, Vec<(usize, Scalar)>);

fn parse_hopf(lines: &[(usize, String)], cutoff: u32) -> Result<HopfAlgebra> {
    let mut dim: Option<usize> = None;
    // (line, i, j, terms of [e_i, e_j])
    let mut brackets: Vec<BracketLine> = Vec::new();
    for (line_no, line) in lines {
        let line_no = *line_no;
        if let Some(rest) = line.strip_prefix('[') {
            let (pair, value) = rest.split_once(']').ok_or_else(|| syntax(line_no, "unclosed bracket"))?;
            let (a, b) = pair.split_once(',').ok_or_else(|| syntax(line_no, "expected `[ei, ej]`"))?;
            let value = value.trim().strip_prefix('=').ok_or_else(|| syntax(line_no, "expected `=` after bracket"))?;
            let d = dim.ok_or_else(|| syntax(line_no, "`dim` must precede bracket lines"))?;
            let i = generator_index(line_no, a.trim(), d)?;
            let j = generator_index(line_no, b.trim(), d)?;
            let mut terms = Vec::new();
            if value.trim() != "0" {
                for term in split_terms(value) {
                    let (c, name) = term.rsplit_once(' ').ok_or_else(|| syntax(line_no, format!("bad term `{term}`")))?;
                    terms.push((generator_index(line_no, name.trim(), d)?, parse_coeff(line_no, c.trim())?));
                }
            }
            brackets.push((line_no, i, j, terms));
        } else {
            let (k, v) = key_value(line_no, line)?;
            match k.as_str() {
                "dim" => dim = Some(parse_u32(line_no, &v, "dimension")? as usize),
                other => return Err(syntax(line_no, format!("unknown key `{other}` in [hopf]"))),
            }
        }
    }
    let dim = dim.ok_or_else(|| syntax(0, "[hopf] needs `dim`"))?;
    let mut lie = LieData::abelian(dim);
    for (_, i, j, terms) in &brackets {
        for (k, c) in terms {
            lie.set_constant(*i, *j, *k, c.clone());
        }
    }
    // Brackets are given once per pair and extended antisymmetrically.
    for (line_no, i, j, _) in &brackets {
        if i == j {
            return Err(syntax(*line_no, "a bracket [ei, ei] is always zero"));
        }
        for k in 0..dim {
            let c = lie.constant(*i, *j, k).clone();
            lie.set_constant(*j, *i, k, -c);
        }
    }
    HopfAlgebra::new(lie, cutoff)
}

fn parse_group(lines: &[(usize, String)], dim: usize) -> Result<Option<GroupBlock>> {
    if lines.is_empty() {
        return Ok(None);
    }
    let mut names: Vec<String> = Vec::new();
    let mut products: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut actions: BTreeMap<usize, Matrix> = BTreeMap::new();
    let index = |names: &[String], line_no: usize, n: &str| -> Result<usize> {
        names.iter().position(|x| x == n).ok_or_else(|| syntax(line_no, format!("unknown group element `{n}`")))
    };
    for (line_no, line) in lines {
        let line_no = *line_no;
        let (k, v) = key_value(line_no, line)?;
        let words: Vec<&str> = k.split_whitespace().collect();
        match words.as_slice() {
            ["elements"] => names = v.split_whitespace().map(String::from).collect(),
            ["mul", a, b] => {
                let (a, b) = (index(&names, line_no, a)?, index(&names, line_no, b)?);
                products.insert((a, b), index(&names, line_no, &v)?);
            }
            ["act", g] => {
                let g = index(&names, line_no, g)?;
                let rows = v
                    .split(';')
                    .map(|row| row.split_whitespace().map(|c| parse_coeff(line_no, c)).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()?;
                if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
                    return Err(dimension(line_no, format!("action matrix must be {dim}x{dim}")));
                }
                actions.insert(g, Matrix::from_rows(rows));
            }
            _ => return Err(syntax(line_no, format!("unknown key `{k}` in [group]"))),
        }
    }
    if names.is_empty() {
        return Err(syntax(lines[0].0, "[group] needs `elements`, identity first"));
    }
    let n = names.len();
    let mut table = vec![vec![0; n]; n];
    for a in 0..n {
        for b in 0..n {
            table[a][b] = if a == 0 {
                b
            } else if b == 0 {
                a
            } else {
                *products.get(&(a, b)).ok_or_else(|| Error::TableNotTotal(names[a].clone(), names[b].clone()))?
            };
        }
    }
    let group = FiniteGroup::new(names.clone(), table)?;
    let action = (0..n)
        .map(|g| {
            if g == 0 {
                Ok(Matrix::identity(dim))
            } else {
                actions.get(&g).cloned().ok_or_else(|| Error::InvalidAction(format!("no action given for `{}`", names[g])))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Some(GroupBlock { group, action }))
}

fn parse_product_term(
    line_no: usize,
    term: &str,
    dim: usize,
    names: &[String],
) -> Result<(CanonKey, Scalar)> {
    let open = term.find('(').ok_or_else(|| syntax(line_no, format!("bad product term `{term}`")))?;
    let coeff = term[..open].trim();
    let coeff = if coeff.is_empty() { Scalar::from_integer(1.into()) } else { parse_coeff(line_no, coeff)? };
    let inner = term[open + 1..]
        .strip_suffix(')')
        .ok_or_else(|| syntax(line_no, format!("bad product term `{term}`")))?;
    let parts: Vec<&str> = inner.split('|').collect();
    if parts.len() != 3 {
        return Err(syntax(line_no, format!("expected `(a|b|name)`, found `({inner})`")));
    }
    let h = parse_multi(line_no, parts[0], dim)?;
    let g = parse_multi(line_no, parts[1], dim)?;
    let k = names
        .iter()
        .position(|n| n == parts[2].trim())
        .ok_or_else(|| syntax(line_no, format!("unknown generator `{}`", parts[2].trim())))?;
    Ok(((vec![h], g, k), coeff))
}

/// Parses a definition file; `cutoff` overrides `degree_cutoff` from `[meta]`.
pub fn parse_file(text: &str, cutoff: Option<u32>) -> Result<DefinitionFile> {
    let sections = split_sections(text)?;
    let mut file_cutoff = DEFAULT_CUTOFF;
    let mut conventions = CONVENTIONS_VERSION;
    for (line_no, line) in &sections.meta {
        let (k, v) = key_value(*line_no, line)?;
        match k.as_str() {
            "degree_cutoff" => file_cutoff = parse_u32(*line_no, &v, "cutoff")?,
            "conventions" => conventions = parse_u32(*line_no, &v, "conventions version")?,
            other => return Err(syntax(*line_no, format!("unknown key `{other}` in [meta]"))),
        }
    }
    if conventions != CONVENTIONS_VERSION {
        return Err(syntax(0, format!("unsupported conventions version {conventions}")));
    }
    let hopf = Arc::new(parse_hopf(&sections.hopf, cutoff.unwrap_or(file_cutoff))?);
    let dim = hopf.dim();
    let group = parse_group(&sections.group, dim)?;

    let mut rank: Option<usize> = None;
    let mut names: Option<Vec<String>> = None;
    let mut sectors: Option<Vec<Sector>> = None;
    for (line_no, line) in &sections.module {
        let (k, v) = key_value(*line_no, line)?;
        match k.as_str() {
            "rank" => rank = Some(parse_u32(*line_no, &v, "rank")? as usize),
            "names" => names = Some(v.split_whitespace().map(String::from).collect()),
            "sectors" => {
                sectors = Some(
                    v.split_whitespace()
                        .map(|s| match s {
                            "minus" => Ok(Sector::Minus),
                            "s0" => Ok(Sector::Zero),
                            "plus" => Ok(Sector::Plus),
                            other => Err(syntax(*line_no, format!("unknown sector `{other}`"))),
                        })
                        .collect::<Result<Vec<_>>>()?,
                )
            }
            other => return Err(syntax(*line_no, format!("unknown key `{other}` in [module]"))),
        }
    }
    let rank = rank.ok_or_else(|| syntax(0, "[module] needs `rank`"))?;
    let names = names.unwrap_or_else(|| (1..=rank).map(|i| format!("v{i}")).collect());
    if names.len() != rank {
        return Err(dimension(0, format!("{} names for rank {rank}", names.len())));
    }
    if let Some(s) = &sectors {
        if s.len() != rank {
            return Err(dimension(0, format!("{} sector labels for rank {rank}", s.len())));
        }
    }

    let mut rows: BTreeMap<(usize, usize), LinComb<CanonKey>> = BTreeMap::new();
    for (line_no, line) in &sections.product {
        let line_no = *line_no;
        let (lhs, rhs) = line.split_once('=').ok_or_else(|| syntax(line_no, "expected `a b = ...`"))?;
        let pair: Vec<&str> = lhs.split_whitespace().collect();
        let [a, b] = pair.as_slice() else {
            return Err(syntax(line_no, "expected two generator names before `=`"));
        };
        let find = |n: &str| {
            names.iter().position(|x| x == n).ok_or_else(|| syntax(line_no, format!("unknown generator `{n}`")))
        };
        let key = (find(a)?, find(b)?);
        if rows.contains_key(&key) {
            return Err(syntax(line_no, format!("duplicate row `{a} {b}`")));
        }
        let mut terms = LinComb::zero();
        if rhs.trim() != "0" {
            for term in split_terms(rhs) {
                let (k, c) = parse_product_term(line_no, term, dim, &names)?;
                terms.add_term(k, c);
            }
        }
        rows.insert(key, terms);
    }
    let mut table = Vec::with_capacity(rank);
    for i in 0..rank {
        let mut row = Vec::with_capacity(rank);
        for j in 0..rank {
            let terms = rows.remove(&(i, j)).ok_or_else(|| Error::TableNotTotal(names[i].clone(), names[j].clone()))?;
            row.push(CanonicalTensor::from_terms(2, terms));
        }
        table.push(row);
    }
    let mut algebra = PseudoAlgebra::new(hopf.clone(), names, table)?;
    if let Some(s) = sectors {
        algebra = algebra.with_sectors(s)?;
    }
    Ok(DefinitionFile { hopf, group, algebra, conventions })
}

fn multi_text(m: &MultiIndex) -> String {
    m.0.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}

/// Writes a pseudoalgebra in the definition format. Output is normalized:
/// brackets for `i < j`, rows in index order, terms in canonical order.
pub fn emit(algebra: &PseudoAlgebra, group: Option<&GroupBlock>) -> String {
    let hopf = algebra.hopf();
    let dim = hopf.dim();
    let mut out = String::new();
    let _ = writeln!(out, "[meta]\ndegree_cutoff = {}\nconventions = {CONVENTIONS_VERSION}\n", hopf.cutoff());
    let _ = writeln!(out, "[hopf]\ndim = {dim}");
    for i in 0..dim {
        for j in i + 1..dim {
            let terms = hopf.lie().bracket(i, j);
            if terms.is_empty() {
                continue;
            }
            let body: Vec<String> = terms.iter().map(|(k, c)| format!("{} e{}", format_scalar(c), k + 1)).collect();
            let _ = writeln!(out, "[e{}, e{}] = {}", i + 1, j + 1, body.join(" + "));
        }
    }
    if let Some(g) = group {
        let names = &g.group.names;
        let _ = writeln!(out, "\n[group]\nelements = {}", names.join(" "));
        for a in 1..names.len() {
            for b in 1..names.len() {
                let _ = writeln!(out, "mul {} {} = {}", names[a], names[b], names[g.group.mul(a, b)]);
            }
        }
        for (idx, m) in g.action.iter().enumerate().skip(1) {
            let rows: Vec<String> =
                (0..m.rows).map(|r| m.row(r).iter().map(format_scalar).collect::<Vec<_>>().join(" ")).collect();
            let _ = writeln!(out, "act {} = {}", names[idx], rows.join(" ; "));
        }
    }
    let names = algebra.names();
    let _ = writeln!(out, "\n[module]\nrank = {}\nnames = {}", algebra.rank(), names.join(" "));
    if let Some(s) = algebra.sectors() {
        let labels: Vec<&str> = s.iter().map(|x| x.label()).collect();
        let _ = writeln!(out, "sectors = {}", labels.join(" "));
    }
    let _ = writeln!(out, "\n[product]");
    for i in 0..algebra.rank() {
        for j in 0..algebra.rank() {
            let entry = algebra.entry(i, j);
            let body = if entry.is_zero() {
                "0".to_string()
            } else {
                entry
                    .terms()
                    .iter()
                    .map(|((h, g, k), c)| {
                        format!("{} ({}|{}|{})", format_scalar(c), multi_text(&h[0]), multi_text(g), names[*k])
                    })
                    .collect::<Vec<_>>()
                    .join(" + ")
            };
            let _ = writeln!(out, "{} {} = {}", names[i], names[j], body);
        }
    }
    out
}

/// Writes an ordinary algebra as a definition file over `dim h = 0`.
pub fn emit_ordinary(a: &OrdinaryAlgebra) -> Result<String> {
    let hopf = Arc::new(HopfAlgebra::new(LieData::abelian(0), 0)?);
    Ok(emit(&crate::constructions::curr_build(hopf, a)?, None))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    const CURR_K: &str = "[meta]\ndegree_cutoff = 4\n[hopf]\ndim = 1\n[module]\nrank = 1\nnames = v\n[product]\nv v = 1 (0|0|v)\n";

    #[test]
    fn minimal_current_file() {
        let f = parse_file(CURR_K, None).unwrap();
        assert_eq!(f.algebra.rank(), 1);
        assert_eq!(f.hopf.cutoff(), 4);
        assert_eq!(f.ordinary().unwrap(), OrdinaryAlgebra::field());
    }

    #[test]
    fn wrong_multi_index_length_reports_the_line() {
        let text = CURR_K.replace("(0|0|v)", "(0,1|0|v)");
        assert_eq!(
            parse_file(&text, None).unwrap_err(),
            Error::DimensionMismatch { line: 9, message: "multi-index `0,1` has length 2, expected 1".into() }
        );
    }

    #[test]
    fn missing_rows_and_bad_tokens() {
        let text = "[hopf]\ndim = 1\n[module]\nrank = 2\nnames = a b\n[product]\na a = 0\na b = 0\nb a = 0\n";
        assert_eq!(parse_file(text, None).unwrap_err(), Error::TableNotTotal("b".into(), "b".into()));
        let bad = CURR_K.replace("1 (0|0|v)", "x (0|0|v)");
        assert!(matches!(parse_file(&bad, None), Err(Error::Syntax { line: 9, .. })));
        let stray = "dim = 1\n";
        assert!(matches!(parse_file(stray, None), Err(Error::Syntax { line: 1, .. })));
    }

    #[test]
    fn jacobi_violations_are_rejected() {
        let text = "[hopf]\ndim = 3\n[e1, e2] = 1 e1\n[e2, e3] = 1 e1\n[e1, e3] = 1 e2\n[module]\nrank = 0\n[product]\n";
        assert!(matches!(parse_file(text, None), Err(Error::JacobiViolation(..))));
    }

    #[test]
    fn round_trip_is_stable() {
        let text = "[hopf]\ndim = 2\n[e1, e2] = 1 e2\n[module]\nrank = 1\nnames = v\n[product]\nv v = 2 (1,0|0,0|v) + -1/2 (0,0|0,1|v)\n";
        let f = parse_file(text, Some(5)).unwrap();
        let once = emit(&f.algebra, None);
        let again = parse_file(&once, None).unwrap();
        assert_eq!(emit(&again.algebra, None), once);
        assert_eq!(again.algebra.entry(0, 0), f.algebra.entry(0, 0));
        assert_eq!(again.hopf.lie(), f.hopf.lie());
    }

    #[test]
    fn group_blocks() {
        let text = "[hopf]\ndim = 1\n[group]\nelements = 1 g\nmul g g = 1\nact g = -1\n[module]\nrank = 0\n[product]\n";
        let f = parse_file(text, Some(4)).unwrap();
        let smash = f.smash().unwrap().unwrap();
        assert_eq!(smash.group().order(), 2);
        let emitted = emit(&f.algebra, f.group.as_ref());
        let again = parse_file(&emitted, None).unwrap();
        assert_eq!(again.group.unwrap().action[1], Matrix::from_rows(vec![vec![int(-1)]]));
    }

    #[test]
    fn ordinary_files() {
        let text = emit_ordinary(&OrdinaryAlgebra::sl2()).unwrap();
        let f = parse_file(&text, None).unwrap();
        assert_eq!(f.ordinary().unwrap(), OrdinaryAlgebra::sl2());
    }
}
