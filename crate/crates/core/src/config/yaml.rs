//! A small YAML subset: block mappings and sequences, flow collections,
//! plain and quoted scalars, comments and local `!Tag`s on any node.
//! Anchors, aliases, block scalars and multi-document streams are rejected.

use std::fmt;

/// 1-based source position.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Span {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scalar {
    pub text: String,
    pub quoted: bool,
}

#[derive(Clone, Debug)]
pub struct Key {
    pub text: String,
    pub span: Span,
}

impl PartialEq for Key {
    fn eq(&self, other: &Self) -> bool {
        self.text == other.text
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Null,
    Scalar(Scalar),
    Seq(Vec<Node>),
    Map(Vec<(Key, Node)>),
}

/// A parsed node. Equality ignores source positions.
#[derive(Clone, Debug)]
pub struct Node {
    pub tag: Option<String>,
    pub value: Value,
    pub span: Span,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.tag == other.tag && self.value == other.value
    }
}

impl Node {
    pub fn new(value: Value) -> Self {
        Self { tag: None, value, span: Span::default() }
    }

    pub fn scalar(text: impl Into<String>) -> Self {
        Self::new(Value::Scalar(Scalar { text: text.into(), quoted: false }))
    }

    pub fn string(text: impl Into<String>) -> Self {
        Self::new(Value::Scalar(Scalar { text: text.into(), quoted: true }))
    }

    pub fn tagged(mut self, tag: &str) -> Self {
        self.tag = Some(tag.to_string());
        self
    }

    pub fn as_map(&self) -> Option<&[(Key, Node)]> {
        match &self.value {
            Value::Map(m) => Some(m),
            _ => None,
        }
    }

    pub fn as_seq(&self) -> Option<&[Node]> {
        match &self.value {
            Value::Seq(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_scalar(&self) -> Option<&Scalar> {
        match &self.value {
            Value::Scalar(s) => Some(s),
            _ => None,
        }
    }

    pub fn get(&self, key: &str) -> Option<&Node> {
        self.as_map()?.iter().find(|(k, _)| k.text == key).map(|(_, v)| v)
    }

    pub fn kind_name(&self) -> &'static str {
        match self.value {
            Value::Null => "null",
            Value::Scalar(_) => "scalar",
            Value::Seq(_) => "sequence",
            Value::Map(_) => "mapping",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{span}: {message}")]
pub struct YamlError {
    pub span: Span,
    pub message: String,
}

pub fn parse(text: &str) -> Result<Node, YamlError> {
    let mut p = Parser { src: text.chars().collect(), pos: 0, line: 1, col: 1 };
    p.document()
}

struct Parser {
    src: Vec<char>,
    pos: usize,
    line: usize,
    col: usize,
}

type PResult<T> = Result<T, YamlError>;

impl Parser {
    fn peek(&self) -> Option<char> {
        self.src.get(self.pos).copied()
    }

    fn peek_at(&self, k: usize) -> Option<char> {
        self.src.get(self.pos + k).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn span(&self) -> Span {
        Span { line: self.line, column: self.col }
    }

    fn err<T>(&self, message: impl Into<String>) -> PResult<T> {
        Err(YamlError { span: self.span(), message: message.into() })
    }

    fn skip_spaces(&mut self) {
        while matches!(self.peek(), Some(' ' | '\t')) {
            self.bump();
        }
    }

    fn at_eol(&self) -> bool {
        matches!(self.peek(), None | Some('\n' | '\r'))
    }

    /// After a value: allow trailing spaces and a comment, then consume the newline.
    fn finish_line(&mut self) -> PResult<()> {
        self.skip_spaces();
        if self.peek() == Some('#') {
            while !self.at_eol() {
                self.bump();
            }
        }
        if self.peek() == Some('\r') {
            self.bump();
        }
        match self.peek() {
            None => Ok(()),
            Some('\n') => {
                self.bump();
                Ok(())
            }
            Some(c) => self.err(format!("unexpected `{c}` after value")),
        }
    }

    fn rest_is_empty(&self) -> bool {
        let mut i = self.pos;
        while let Some(c) = self.src.get(i) {
            match c {
                ' ' | '\t' => i += 1,
                '#' | '\n' | '\r' => return true,
                _ => return false,
            }
        }
        true
    }

    /// From the start of a line, skips blank and comment-only lines and
    /// returns the indentation of the next content line without consuming it.
    fn next_indent(&mut self) -> PResult<Option<usize>> {
        debug_assert!(self.col == 1 || self.peek().is_none());
        loop {
            let mut i = self.pos;
            let mut indent = 0;
            while let Some(c) = self.src.get(i) {
                match c {
                    ' ' => indent += 1,
                    '\t' => return Err(YamlError { span: Span { line: self.line, column: indent + 1 }, message: "tab character in indentation".into() }),
                    _ => break,
                }
                i += 1;
            }
            match self.src.get(i) {
                None => return Ok(None),
                Some('\n' | '\r' | '#') => {
                    while !self.at_eol() {
                        self.bump();
                    }
                    if self.peek() == Some('\r') {
                        self.bump();
                    }
                    if self.bump().is_none() {
                        return Ok(None);
                    }
                }
                Some(_) => return Ok(Some(indent)),
            }
        }
    }

    fn consume_indent(&mut self, n: usize) {
        for _ in 0..n {
            self.bump();
        }
    }

    fn at_seq_marker(&self) -> bool {
        self.peek() == Some('-') && matches!(self.peek_at(1), None | Some(' ' | '\n' | '\r' | '\t'))
    }

    fn document(&mut self) -> PResult<Node> {
        let Some(indent) = self.next_indent()? else {
            return Ok(Node { tag: None, value: Value::Null, span: self.span() });
        };
        self.consume_indent(indent);
        if self.peek() == Some('-') && self.peek_at(1) == Some('-') && self.peek_at(2) == Some('-') {
            self.consume_indent(3);
            self.finish_line()?;
            return self.document_body();
        }
        self.node_at_line_start(indent)
    }

    fn document_body(&mut self) -> PResult<Node> {
        let Some(indent) = self.next_indent()? else {
            return Ok(Node { tag: None, value: Value::Null, span: self.span() });
        };
        self.consume_indent(indent);
        self.node_at_line_start(indent)
    }

    /// A node whose first character sits at `indent` on a fresh line.
    fn node_at_line_start(&mut self, indent: usize) -> PResult<Node> {
        if self.peek() == Some('!') {
            // a lone root tag applies to the block that follows at any indentation
            let save = (self.pos, self.line, self.col);
            let span = self.span();
            let tag = self.tag()?;
            self.skip_spaces();
            if self.rest_is_empty() {
                self.finish_line()?;
                let body = self.document_body()?;
                return with_tag(body, Some(tag), span);
            }
            (self.pos, self.line, self.col) = save;
        }
        let node = if self.at_seq_marker() {
            self.block_seq(indent)?
        } else if self.looks_like_key() {
            self.block_map(indent)?
        } else {
            self.inline_node(indent, false, true)?
        };
        if let Some(n) = self.next_indent()? {
            self.consume_indent(n);
            return self.err("content after the end of the document");
        }
        Ok(node)
    }

    /// Whether the rest of the line is a `key: ...` pair.
    fn looks_like_key(&self) -> bool {
        let mut i = self.pos;
        match self.src.get(i) {
            Some('"' | '\'') => {
                let q = self.src[i];
                i += 1;
                while let Some(&c) = self.src.get(i) {
                    if c == '\n' {
                        return false;
                    }
                    if c == '\\' && q == '"' {
                        i += 2;
                        continue;
                    }
                    if c == q {
                        if q == '\'' && self.src.get(i + 1) == Some(&'\'') {
                            i += 2;
                            continue;
                        }
                        break;
                    }
                    i += 1;
                }
                i += 1;
                while matches!(self.src.get(i), Some(' ' | '\t')) {
                    i += 1;
                }
                self.src.get(i) == Some(&':') && matches!(self.src.get(i + 1), None | Some(' ' | '\t' | '\n' | '\r'))
            }
            Some('[' | '{' | '!' | '&' | '*' | '|' | '>' | '#') | None => false,
            _ => {
                while let Some(&c) = self.src.get(i) {
                    match c {
                        '\n' | '\r' => return false,
                        '#' if i > 0 && matches!(self.src[i - 1], ' ' | '\t') => return false,
                        ':' if matches!(self.src.get(i + 1), None | Some(' ' | '\t' | '\n' | '\r')) => return true,
                        _ => i += 1,
                    }
                }
                false
            }
        }
    }

    fn block_map(&mut self, indent: usize) -> PResult<Node> {
        let span = self.span();
        let mut entries: Vec<(Key, Node)> = Vec::new();
        loop {
            if self.at_seq_marker() {
                return self.err("sequence entry where a mapping key was expected");
            }
            if !self.looks_like_key() {
                return self.err("expected `key: value`");
            }
            let key_span = self.span();
            let key = self.key()?;
            if entries.iter().any(|(k, _)| k.text == key) {
                return Err(YamlError { span: key_span, message: format!("duplicate key `{key}`") });
            }
            self.skip_spaces();
            if self.bump() != Some(':') {
                return Err(YamlError { span: key_span, message: "expected `:` after key".into() });
            }
            let value = self.value_after_key(indent)?;
            entries.push((Key { text: key, span: key_span }, value));
            match self.next_indent()? {
                Some(n) if n == indent => self.consume_indent(n),
                Some(n) if n > indent => {
                    self.consume_indent(n);
                    return self.err("unexpected indentation");
                }
                _ => break,
            }
        }
        Ok(Node { tag: None, value: Value::Map(entries), span })
    }

    fn key(&mut self) -> PResult<String> {
        match self.peek() {
            Some('"') => self.double_quoted(),
            Some('\'') => self.single_quoted(),
            _ => {
                let mut s = String::new();
                while let Some(c) = self.peek() {
                    if c == ':' && matches!(self.peek_at(1), None | Some(' ' | '\t' | '\n' | '\r')) {
                        break;
                    }
                    s.push(c);
                    self.bump();
                }
                Ok(s.trim_end().to_string())
            }
        }
    }

    fn value_after_key(&mut self, map_indent: usize) -> PResult<Node> {
        self.skip_spaces();
        let span = self.span();
        if self.rest_is_empty() {
            self.finish_line()?;
            return self.nested_block(map_indent, true, None, span);
        }
        self.inline_node(map_indent, false, true)
    }

    /// The block that follows a line ending in `key:`, `-` or a lone tag.
    /// Mapping values may hold a sequence at the key's own indentation.
    fn nested_block(&mut self, parent: usize, allow_same_indent_seq: bool, tag: Option<String>, span: Span) -> PResult<Node> {
        let node = match self.next_indent()? {
            Some(n) if n > parent => {
                self.consume_indent(n);
                if self.at_seq_marker() {
                    self.block_seq(n)?
                } else if self.looks_like_key() {
                    self.block_map(n)?
                } else {
                    self.inline_node(n, false, false)?
                }
            }
            Some(n) if n == parent && allow_same_indent_seq => {
                let save = (self.pos, self.line, self.col);
                self.consume_indent(n);
                if self.at_seq_marker() {
                    self.block_seq(n)?
                } else {
                    (self.pos, self.line, self.col) = save;
                    Node { tag: None, value: Value::Null, span }
                }
            }
            _ => Node { tag: None, value: Value::Null, span },
        };
        if let Some(t) = tag {
            if node.tag.is_some() {
                return Err(YamlError { span, message: "node has two tags".into() });
            }
            return Ok(Node { tag: Some(t), ..node });
        }
        Ok(node)
    }

    fn block_seq(&mut self, indent: usize) -> PResult<Node> {
        let span = self.span();
        let mut items = Vec::new();
        loop {
            let item_span = self.span();
            self.bump();
            self.skip_spaces();
            let item = if self.rest_is_empty() {
                self.finish_line()?;
                self.nested_block(indent, false, None, item_span)?
            } else {
                self.inline_node(indent, true, true)?
            };
            items.push(item);
            match self.next_indent()? {
                Some(n) if n == indent => {
                    let save = (self.pos, self.line, self.col);
                    self.consume_indent(n);
                    if !self.at_seq_marker() {
                        (self.pos, self.line, self.col) = save;
                        break;
                    }
                }
                Some(n) if n > indent => {
                    self.consume_indent(n);
                    return self.err("unexpected indentation");
                }
                _ => break,
            }
        }
        Ok(Node { tag: None, value: Value::Seq(items), span })
    }

    /// A node starting mid-line. Consumes through the end of its last line.
    fn inline_node(&mut self, parent: usize, allow_compact_map: bool, allow_nested: bool) -> PResult<Node> {
        let span = self.span();
        let tag = if self.peek() == Some('!') { Some(self.tag()?) } else { None };
        if tag.is_some() {
            self.skip_spaces();
            if self.rest_is_empty() {
                self.finish_line()?;
                if !allow_nested {
                    return Ok(Node { tag, value: Value::Null, span });
                }
                return self.nested_block(parent, !allow_compact_map, tag, span);
            }
        }
        let node = match self.peek() {
            Some('[' | '{') => {
                let n = self.flow_node()?;
                self.finish_line()?;
                n
            }
            Some('&') => return self.err("anchors are not supported"),
            Some('*') => return self.err("aliases are not supported"),
            Some('|' | '>') => return self.err("block scalars are not supported"),
            Some('-') if self.at_seq_marker() && allow_compact_map => {
                return self.err("nested sequence on the same line is not supported");
            }
            _ if allow_compact_map && tag.is_none() && self.looks_like_key() => {
                let indent = self.col - 1;
                return self.block_map(indent).map(|n| Node { span, ..n });
            }
            Some('"' | '\'') => {
                let text = if self.peek() == Some('"') { self.double_quoted()? } else { self.single_quoted()? };
                self.finish_line()?;
                Node { tag: None, value: Value::Scalar(Scalar { text, quoted: true }), span }
            }
            _ => {
                let mut s = String::new();
                while !self.at_eol() {
                    let c = self.peek().unwrap();
                    if c == '#' && s.ends_with([' ', '\t']) {
                        break;
                    }
                    if c == ':' && matches!(self.peek_at(1), None | Some(' ' | '\t' | '\n' | '\r')) {
                        return self.err("mapping values are not allowed here");
                    }
                    s.push(c);
                    self.bump();
                }
                self.finish_line()?;
                plain(s.trim_end(), span)
            }
        };
        Ok(with_tag(node, tag, span)?)
    }

    fn tag(&mut self) -> PResult<String> {
        self.bump();
        let mut name = String::new();
        while let Some(c) = self.peek() {
            if c.is_alphanumeric() || c == '_' || c == '-' || c == '.' {
                name.push(c);
                self.bump();
            } else {
                break;
            }
        }
        if name.is_empty() {
            return self.err("empty tag");
        }
        if !matches!(self.peek(), None | Some(' ' | '\t' | '\n' | '\r' | ',' | ']' | '}')) {
            return self.err("tag must be followed by whitespace");
        }
        Ok(name)
    }

    fn skip_flow_space(&mut self) {
        loop {
            match self.peek() {
                Some(' ' | '\t' | '\n' | '\r') => {
                    self.bump();
                }
                Some('#') => {
                    while !self.at_eol() {
                        self.bump();
                    }
                }
                _ => return,
            }
        }
    }

    fn flow_node(&mut self) -> PResult<Node> {
        let span = self.span();
        let tag = if self.peek() == Some('!') {
            let t = self.tag()?;
            self.skip_flow_space();
            if matches!(self.peek(), Some(',' | ']' | '}')) {
                return Ok(Node { tag: Some(t), value: Value::Null, span });
            }
            Some(t)
        } else {
            None
        };
        let node = match self.peek() {
            Some('[') => {
                self.bump();
                let mut items = Vec::new();
                loop {
                    self.skip_flow_space();
                    if self.peek() == Some(']') {
                        self.bump();
                        break;
                    }
                    items.push(self.flow_node()?);
                    self.skip_flow_space();
                    match self.peek() {
                        Some(',') => {
                            self.bump();
                        }
                        Some(']') => {
                            self.bump();
                            break;
                        }
                        None => return self.err("unterminated flow sequence"),
                        Some(c) => return self.err(format!("expected `,` or `]`, found `{c}`")),
                    }
                }
                Node { tag: None, value: Value::Seq(items), span }
            }
            Some('{') => {
                self.bump();
                let mut entries: Vec<(Key, Node)> = Vec::new();
                loop {
                    self.skip_flow_space();
                    if self.peek() == Some('}') {
                        self.bump();
                        break;
                    }
                    let key_span = self.span();
                    let key = match self.peek() {
                        Some('"') => self.double_quoted()?,
                        Some('\'') => self.single_quoted()?,
                        _ => self.flow_plain()?,
                    };
                    if key.is_empty() {
                        return self.err("expected a key");
                    }
                    if entries.iter().any(|(k, _)| k.text == key) {
                        return Err(YamlError { span: key_span, message: format!("duplicate key `{key}`") });
                    }
                    self.skip_flow_space();
                    if self.peek() != Some(':') {
                        return self.err("expected `:` in flow mapping");
                    }
                    self.bump();
                    self.skip_flow_space();
                    let value = self.flow_node()?;
                    entries.push((Key { text: key, span: key_span }, value));
                    self.skip_flow_space();
                    match self.peek() {
                        Some(',') => {
                            self.bump();
                        }
                        Some('}') => {
                            self.bump();
                            break;
                        }
                        None => return self.err("unterminated flow mapping"),
                        Some(c) => return self.err(format!("expected `,` or `}}`, found `{c}`")),
                    }
                }
                Node { tag: None, value: Value::Map(entries), span }
            }
            Some('"' | '\'') => {
                let text = if self.peek() == Some('"') { self.double_quoted()? } else { self.single_quoted()? };
                Node { tag: None, value: Value::Scalar(Scalar { text, quoted: true }), span }
            }
            Some('&') => return self.err("anchors are not supported"),
            Some('*') => return self.err("aliases are not supported"),
            _ => {
                let s = self.flow_plain()?;
                if s.is_empty() {
                    return self.err("expected a value");
                }
                plain(&s, span)
            }
        };
        with_tag(node, tag, span)
    }

    fn flow_plain(&mut self) -> PResult<String> {
        let mut s = String::new();
        while let Some(c) = self.peek() {
            match c {
                ',' | '[' | ']' | '{' | '}' | '\n' | '\r' => break,
                ':' if matches!(self.peek_at(1), None | Some(' ' | '\t' | '\n' | '\r' | ',' | ']' | '}')) => break,
                '#' if s.ends_with([' ', '\t']) => break,
                _ => {
                    s.push(c);
                    self.bump();
                }
            }
        }
        Ok(s.trim().to_string())
    }

    fn double_quoted(&mut self) -> PResult<String> {
        self.bump();
        let mut s = String::new();
        loop {
            match self.bump() {
                None | Some('\n') => return self.err("unterminated string"),
                Some('"') => return Ok(s),
                Some('\\') => {
                    let c = match self.bump() {
                        Some('n') => '\n',
                        Some('t') => '\t',
                        Some('r') => '\r',
                        Some('0') => '\0',
                        Some('"') => '"',
                        Some('\\') => '\\',
                        Some('/') => '/',
                        Some('u') => {
                            let hex: String = (0..4).filter_map(|_| self.bump()).collect();
                            match u32::from_str_radix(&hex, 16).ok().and_then(char::from_u32) {
                                Some(c) => c,
                                None => return self.err(format!("invalid unicode escape `\\u{hex}`")),
                            }
                        }
                        Some(c) => return self.err(format!("unknown escape `\\{c}`")),
                        None => return self.err("unterminated string"),
                    };
                    s.push(c);
                }
                Some(c) => s.push(c),
            }
        }
    }

    fn single_quoted(&mut self) -> PResult<String> {
        self.bump();
        let mut s = String::new();
        loop {
            match self.bump() {
                None | Some('\n') => return self.err("unterminated string"),
                Some('\'') if self.peek() == Some('\'') => {
                    self.bump();
                    s.push('\'');
                }
                Some('\'') => return Ok(s),
                Some(c) => s.push(c),
            }
        }
    }
}

fn plain(text: &str, span: Span) -> Node {
    let value = match text {
        "~" | "null" | "Null" | "NULL" => Value::Null,
        _ => Value::Scalar(Scalar { text: text.to_string(), quoted: false }),
    };
    Node { tag: None, value, span }
}

fn with_tag(node: Node, tag: Option<String>, span: Span) -> PResult<Node> {
    match (tag, &node.tag) {
        (None, _) => Ok(node),
        (Some(_), Some(_)) => Err(YamlError { span, message: "node has two tags".into() }),
        (Some(t), None) => Ok(Node { tag: Some(t), span, ..node }),
    }
}

// ---------------------------------------------------------------- emitter

/// Renders a node tree as block-style text that [`parse`] reads back to an
/// equal tree.
pub fn emit(node: &Node) -> String {
    let mut out = String::new();
    match (&node.tag, &node.value) {
        (Some(tag), Value::Map(_) | Value::Seq(_)) if !is_flow(node) => {
            out.push('!');
            out.push_str(tag);
            out.push('\n');
            emit_block(&node.value, 0, &mut out);
        }
        (None, Value::Map(_) | Value::Seq(_)) if !is_flow(node) => emit_block(&node.value, 0, &mut out),
        _ => {
            out.push_str(&inline(node));
            out.push('\n');
        }
    }
    out
}

fn is_flow(node: &Node) -> bool {
    match &node.value {
        Value::Null | Value::Scalar(_) => true,
        Value::Seq(items) => items.iter().all(|n| matches!(n.value, Value::Null | Value::Scalar(_))),
        Value::Map(entries) => {
            !entries.is_empty() && entries.len() <= 4 && node.tag.is_some() && entries.iter().all(|(_, v)| matches!(v.value, Value::Null | Value::Scalar(_)))
        }
    }
}

fn emit_block(value: &Value, indent: usize, out: &mut String) {
    let pad = " ".repeat(indent);
    match value {
        Value::Map(entries) => {
            for (k, v) in entries {
                out.push_str(&pad);
                out.push_str(&scalar_text(&k.text, false, true));
                out.push(':');
                emit_child(v, indent, out);
            }
        }
        Value::Seq(items) => {
            for v in items {
                out.push_str(&pad);
                out.push('-');
                emit_child(v, indent, out);
            }
        }
        _ => unreachable!("emit_block on a scalar"),
    }
}

fn emit_child(v: &Node, indent: usize, out: &mut String) {
    if is_flow(v) {
        out.push(' ');
        out.push_str(&inline(v));
        out.push('\n');
        return;
    }
    if let Some(tag) = &v.tag {
        out.push_str(" !");
        out.push_str(tag);
    }
    out.push('\n');
    emit_block(&v.value, indent + 2, out);
}

fn inline(node: &Node) -> String {
    let body = match &node.value {
        Value::Null => {
            if node.tag.is_some() {
                String::new()
            } else {
                "null".to_string()
            }
        }
        Value::Scalar(s) => scalar_text(&s.text, s.quoted, false),
        Value::Seq(items) => format!("[{}]", items.iter().map(inline).collect::<Vec<_>>().join(", ")),
        Value::Map(entries) => {
            format!("{{{}}}", entries.iter().map(|(k, v)| format!("{}: {}", scalar_text(&k.text, false, true), inline(v))).collect::<Vec<_>>().join(", "))
        }
    };
    match &node.tag {
        Some(tag) if body.is_empty() => format!("!{tag}"),
        Some(tag) => format!("!{tag} {body}"),
        None => body,
    }
}

fn scalar_text(text: &str, quoted: bool, key: bool) -> String {
    let needs_quotes = quoted
        || text.is_empty()
        || text != text.trim()
        || text.starts_with(['!', '&', '*', '[', ']', '{', '}', '#', '|', '>', '\'', '"', '%', '@', '`', ','])
        || (text.starts_with('-') && (text.len() == 1 || text[1..].starts_with(' ')))
        || text.contains(": ")
        || text.ends_with(':')
        || text.contains(" #")
        || text.contains([',', '[', ']', '{', '}', '\n', '\t', '"'])
        || (!key && matches!(text, "~" | "null" | "Null" | "NULL"));
    if !needs_quotes {
        return text.to_string();
    }
    let mut s = String::with_capacity(text.len() + 2);
    s.push('"');
    for c in text.chars() {
        match c {
            '"' => s.push_str("\\\""),
            '\\' => s.push_str("\\\\"),
            '\n' => s.push_str("\\n"),
            '\t' => s.push_str("\\t"),
            '\r' => s.push_str("\\r"),
            c => s.push(c),
        }
    }
    s.push('"');
    s
}
