//! Template expansion: configuration files with directive tags in value
//! positions, expanded exhaustively or by seeded sampling.
//!
//! Directives:
//! - `!Choice [a, b, ...]` picks one alternative.
//! - `!RandomColor` becomes an `!RGB` with uniform channels (sampling only).
//! - `!RandomRange [lo, hi]` becomes a uniform number; integer when both
//!   bounds are integers (sampling only).
//! - `!Label {name: n, value: v}` resolves `v` and remembers it as `n`.
//! - `!If {label: n, equals: x, then: a, else: b}` becomes `a` when label
//!   `n` resolved to `x`, else `b`.

use crate::config::yaml::{emit, parse, Key, Node, Scalar, Span, Value, YamlError};
use crate::config::{load_config, ConfigError};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

/// Refuse exhaustive expansions larger than this.
pub const MAX_EXPANSION: usize = 100_000;
pub const MANIFEST_HEADER: [&str; 4] = ["file", "directive", "value", "seed"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Mode {
    Exhaustive,
    Sample { count: usize, seed: u64 },
}

#[derive(Debug, thiserror::Error)]
pub enum ProcgenError {
    #[error("template: {0}")]
    Yaml(#[from] YamlError),
    #[error("{span}: {message}")]
    Directive { span: Span, message: String },
    #[error("{span}: `!{tag}` has no finite domain; use sampling mode")]
    InfiniteDomain { span: Span, tag: String },
    #[error("{span}: `!If` refers to undeclared label `{label}`")]
    UnknownLabel { span: Span, label: String },
    #[error("exhaustive expansion would produce {0} files (limit {MAX_EXPANSION})")]
    TooLarge(u128),
    #[error("the template expands to no files")]
    Empty,
    #[error("expansion {index} is not a valid configuration:\n{source}")]
    Invalid { index: usize, source: ConfigError },
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

/// One generated file.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Expansion {
    pub text: String,
    /// `(directive, value)` in document order; labels are named, other
    /// directives are identified by their `line:column`.
    pub choices: Vec<(String, String)>,
    /// Seed the file was drawn with (sampling mode only).
    pub seed: Option<u64>,
}

fn derr(span: Span, message: impl Into<String>) -> ProcgenError {
    ProcgenError::Directive { span, message: message.into() }
}

const DIRECTIVES: [&str; 5] = ["Choice", "RandomColor", "RandomRange", "Label", "If"];

fn directive(node: &Node) -> Option<&str> {
    node.tag.as_deref().filter(|t| DIRECTIVES.contains(t))
}

fn children(node: &Node) -> Vec<&Node> {
    match &node.value {
        Value::Seq(items) => items.iter().collect(),
        Value::Map(entries) => entries.iter().map(|(_, v)| v).collect(),
        _ => Vec::new(),
    }
}

/// Checks directive shapes and collects the Choice cardinalities in document order.
fn survey(
    node: &Node,
    choices: &mut Vec<usize>,
    labels: &mut Vec<String>,
    ifs: &mut Vec<(Span, String)>,
    finite: &mut Option<(Span, String)>,
) -> Result<(), ProcgenError> {
    match directive(node) {
        Some("Choice") => {
            let alts = node.as_seq().ok_or_else(|| derr(node.span, "`!Choice` takes a sequence of alternatives"))?;
            if alts.is_empty() {
                return Err(derr(node.span, "`!Choice` needs at least one alternative"));
            }
            choices.push(alts.len());
        }
        Some(tag @ ("RandomColor" | "RandomRange")) => {
            if tag == "RandomRange" {
                let b = node.as_seq().filter(|s| s.len() == 2).ok_or_else(|| derr(node.span, "`!RandomRange` takes [lo, hi]"))?;
                let lo = number(&b[0])?;
                let hi = number(&b[1])?;
                if !(lo <= hi) {
                    return Err(derr(node.span, "`!RandomRange` needs lo <= hi"));
                }
            }
            finite.get_or_insert((node.span, tag.to_string()));
        }
        Some("Label") => {
            let name = node.get("name").and_then(Node::as_scalar).ok_or_else(|| derr(node.span, "`!Label` needs a `name`"))?;
            node.get("value").ok_or_else(|| derr(node.span, "`!Label` needs a `value`"))?;
            if labels.contains(&name.text) {
                return Err(derr(node.span, format!("label `{}` declared twice", name.text)));
            }
            labels.push(name.text.clone());
        }
        Some("If") => {
            let label = node.get("label").and_then(Node::as_scalar).ok_or_else(|| derr(node.span, "`!If` needs a `label`"))?;
            for key in ["equals", "then", "else"] {
                node.get(key).ok_or_else(|| derr(node.span, format!("`!If` needs `{key}`")))?;
            }
            ifs.push((node.span, label.text.clone()));
        }
        _ => {}
    }
    for c in children(node) {
        survey(c, choices, labels, ifs, finite)?;
    }
    Ok(())
}

fn number(node: &Node) -> Result<f64, ProcgenError> {
    node.as_scalar().and_then(|s| s.text.parse::<f64>().ok()).filter(|x| x.is_finite()).ok_or_else(|| derr(node.span, "expected a number"))
}

fn format_number(x: f64) -> String {
    format!("{x}")
}

struct Resolver<'a> {
    /// Alternative index per Choice, in document order (exhaustive mode).
    picks: Option<&'a [usize]>,
    rng: Option<ChaCha8Rng>,
    next_choice: usize,
    labels: BTreeMap<String, Node>,
    log: Vec<(String, String)>,
}

impl Resolver<'_> {
    fn record(&mut self, node: &Node, chosen: &Node) {
        self.log.push((format!("{}@{}", node.tag.as_deref().unwrap_or(""), node.span), emit(chosen).trim_end().to_string()));
    }

    /// First pass: everything except `!If`, which needs all labels.
    fn resolve(&mut self, node: &Node) -> Node {
        match directive(node) {
            Some("Choice") => {
                let alts = node.as_seq().unwrap_or_default();
                let i = match (self.picks, self.rng.as_mut()) {
                    (Some(p), _) => p[self.next_choice],
                    (None, Some(rng)) => rng.random_range(0..alts.len()),
                    (None, None) => 0,
                };
                self.next_choice += 1;
                let chosen = self.resolve(&alts[i]);
                self.record(node, &chosen);
                chosen
            }
            Some("RandomColor") => {
                let rng = self.rng.as_mut().expect("sampling mode");
                let (r, g, b) = (rng.random_range(0..=255u8), rng.random_range(0..=255u8), rng.random_range(0..=255u8));
                let entries = [("r", r), ("g", g), ("b", b)].map(|(k, v)| (Key { text: k.into(), span: Span::default() }, Node::scalar(v.to_string())));
                let out = Node::new(Value::Map(entries.to_vec())).tagged("RGB");
                self.record(node, &out);
                out
            }
            Some("RandomRange") => {
                let b = node.as_seq().unwrap_or_default();
                let (lo, hi) = (number(&b[0]).unwrap_or(0.0), number(&b[1]).unwrap_or(0.0));
                let rng = self.rng.as_mut().expect("sampling mode");
                let x = if lo.fract() == 0.0 && hi.fract() == 0.0 { rng.random_range(lo as i64..=hi as i64) as f64 } else { rng.random_range(lo..=hi) };
                let out = Node::scalar(format_number(x));
                self.record(node, &out);
                out
            }
            Some("Label") => {
                let name = node.get("name").and_then(Node::as_scalar).map(|s| s.text.clone()).unwrap_or_default();
                let value = self.resolve(node.get("value").expect("surveyed"));
                self.log.push((name.clone(), emit(&value).trim_end().to_string()));
                self.labels.insert(name, value.clone());
                value
            }
            _ => {
                let value = match &node.value {
                    Value::Seq(items) => Value::Seq(items.iter().map(|n| self.resolve(n)).collect()),
                    Value::Map(entries) => Value::Map(entries.iter().map(|(k, v)| (k.clone(), self.resolve(v))).collect()),
                    other => other.clone(),
                };
                Node { tag: node.tag.clone(), value, span: node.span }
            }
        }
    }

    /// Second pass: substitute `!If` branches.
    fn conditionals(&self, node: &Node) -> Node {
        if directive(node) == Some("If") {
            let label = node.get("label").and_then(Node::as_scalar).map(|s| s.text.as_str()).unwrap_or("");
            let equals = node.get("equals").expect("surveyed");
            let hit = self.labels.get(label).is_some_and(|v| same(v, equals));
            let branch = node.get(if hit { "then" } else { "else" }).expect("surveyed");
            return self.conditionals(branch);
        }
        let value = match &node.value {
            Value::Seq(items) => Value::Seq(items.iter().map(|n| self.conditionals(n)).collect()),
            Value::Map(entries) => Value::Map(entries.iter().map(|(k, v)| (k.clone(), self.conditionals(v))).collect()),
            other => other.clone(),
        };
        Node { tag: node.tag.clone(), value, span: node.span }
    }
}

/// Structural equality that ignores scalar quoting.
fn same(a: &Node, b: &Node) -> bool {
    if a.tag != b.tag {
        return false;
    }
    match (&a.value, &b.value) {
        (Value::Scalar(Scalar { text: x, .. }), Value::Scalar(Scalar { text: y, .. })) => x == y,
        (Value::Seq(x), Value::Seq(y)) => x.len() == y.len() && x.iter().zip(y).all(|(p, q)| same(p, q)),
        (Value::Map(x), Value::Map(y)) => x.len() == y.len() && x.iter().zip(y).all(|((kp, p), (kq, q))| kp.text == kq.text && same(p, q)),
        (Value::Null, Value::Null) => true,
        _ => false,
    }
}

fn expand_one(root: &Node, picks: Option<&[usize]>, seed: Option<u64>, index: usize) -> Result<Expansion, ProcgenError> {
    let mut r = Resolver { picks, rng: seed.map(ChaCha8Rng::seed_from_u64), next_choice: 0, labels: BTreeMap::new(), log: Vec::new() };
    let first = r.resolve(root);
    let resolved = r.conditionals(&first);
    let text = emit(&resolved);
    load_config(&text).map_err(|source| ProcgenError::Invalid { index, source })?;
    Ok(Expansion { text, choices: r.log, seed })
}

/// Number of files an exhaustive expansion of `template` produces.
pub fn exhaustive_count(template: &str) -> Result<u128, ProcgenError> {
    let root = parse(template)?;
    let mut choices = Vec::new();
    survey(&root, &mut choices, &mut Vec::new(), &mut Vec::new(), &mut None)?;
    Ok(choices.iter().map(|c| *c as u128).product())
}

pub fn expand_template(template: &str, mode: Mode) -> Result<Vec<Expansion>, ProcgenError> {
    let root = parse(template)?;
    let (mut choices, mut labels, mut ifs, mut infinite) = (Vec::new(), Vec::new(), Vec::new(), None);
    survey(&root, &mut choices, &mut labels, &mut ifs, &mut infinite)?;
    if let Some((span, label)) = ifs.into_iter().find(|(_, l)| !labels.contains(l)) {
        return Err(ProcgenError::UnknownLabel { span, label });
    }
    let out = match mode {
        Mode::Exhaustive => {
            if let Some((span, tag)) = infinite {
                return Err(ProcgenError::InfiniteDomain { span, tag });
            }
            let total: u128 = choices.iter().map(|c| *c as u128).product();
            if total > MAX_EXPANSION as u128 {
                return Err(ProcgenError::TooLarge(total));
            }
            let mut out = Vec::with_capacity(total as usize);
            let mut picks = vec![0usize; choices.len()];
            for index in 0..total as usize {
                out.push(expand_one(&root, Some(&picks), None, index)?);
                // odometer: the last choice varies fastest
                for d in (0..picks.len()).rev() {
                    picks[d] += 1;
                    if picks[d] < choices[d] {
                        break;
                    }
                    picks[d] = 0;
                }
            }
            out
        }
        Mode::Sample { count, seed } => (0..count).map(|i| expand_one(&root, None, Some(seed.wrapping_add(i as u64)), i)).collect::<Result<_, _>>()?,
    };
    if out.is_empty() {
        return Err(ProcgenError::Empty);
    }
    Ok(out)
}

/// File names `stem_000.yml`, padded to the width of the last index.
pub fn battery_names(stem: &str, count: usize) -> Vec<String> {
    let width = count.saturating_sub(1).to_string().len().max(3);
    (0..count).map(|i| format!("{stem}_{i:0width$}.yml")).collect()
}

/// Writes every expansion plus `manifest.csv` into `out_dir`; returns the
/// manifest path.
pub fn write_battery(stem: &str, expansions: &[Expansion], out_dir: &Path) -> Result<PathBuf, ProcgenError> {
    if expansions.is_empty() {
        return Err(ProcgenError::Empty);
    }
    let io = |path: &Path| {
        let path = path.to_path_buf();
        move |source| ProcgenError::Io { path, source }
    };
    fs::create_dir_all(out_dir).map_err(io(out_dir))?;
    let names = battery_names(stem, expansions.len());
    let mut manifest = csv::Writer::from_writer(Vec::new());
    let _ = manifest.write_record(MANIFEST_HEADER);
    for (name, e) in names.iter().zip(expansions) {
        let path = out_dir.join(name);
        let header = format!("# generated by arena-lab {} from template `{stem}`{}\n", crate::VERSION, e.seed.map_or(String::new(), |s| format!(", seed {s}")));
        fs::write(&path, header + &e.text).map_err(io(&path))?;
        let seed = e.seed.map_or(String::new(), |s| s.to_string());
        if e.choices.is_empty() {
            let _ = manifest.write_record([name.as_str(), "", "", &seed]);
        }
        for (directive, value) in &e.choices {
            let _ = manifest.write_record([name.as_str(), directive, value, &seed]);
        }
    }
    let bytes = manifest.into_inner().map_err(|e| ProcgenError::Io { path: out_dir.join("manifest.csv"), source: e.into_error() })?;
    let path = out_dir.join("manifest.csv");
    fs::write(&path, bytes).map_err(io(&path))?;
    Ok(path)
}
