//! The line-oriented fiber text format.
//!
//! ```text
//! fiber "<name>"
//! blowups <r>                      # optional, default 0
//! resolution <m1> <m2> ...         # optional, one entry per blow-up
//! genus-check <g>                  # optional assertion
//! component <id> mult=<int> [self=<int>] [genus=<int>]
//! node <id1> <id2> [x<count>]
//! ```

use serde::Serialize;

use super::{fiber_genus, FiberBuilder, FiberGraph};
use crate::canon::canonical_labeling;
use crate::error::{FiberError, Result};

struct Token<'a> {
    text: &'a str,
    column: usize,
    quoted: bool,
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> FiberError {
    FiberError::Syntax {
        line,
        column,
        message: message.into(),
    }
}

/// Splits a line into tokens, honouring double quotes and `#` comments.
fn tokenize(line_no: usize, line: &str) -> Result<Vec<Token<'_>>> {
    let mut tokens = Vec::new();
    let mut chars = line.char_indices().peekable();
    while let Some(&(start, ch)) = chars.peek() {
        let column = line[..start].chars().count() + 1;
        if ch.is_whitespace() {
            chars.next();
        } else if ch == '#' {
            break;
        } else if ch == '"' {
            chars.next();
            let body_start = start + 1;
            let mut end = None;
            let mut escaped = false;
            for (i, c) in chars.by_ref() {
                if escaped {
                    escaped = false;
                } else if c == '\\' {
                    escaped = true;
                } else if c == '"' {
                    end = Some(i);
                    break;
                }
            }
            let end = end.ok_or_else(|| syntax(line_no, column, "unterminated string"))?;
            tokens.push(Token {
                text: &line[body_start..end],
                column,
                quoted: true,
            });
        } else {
            let mut end = line.len();
            while let Some(&(i, c)) = chars.peek() {
                if c.is_whitespace() || c == '#' {
                    end = i;
                    break;
                }
                chars.next();
            }
            tokens.push(Token {
                text: &line[start..end],
                column,
                quoted: false,
            });
        }
    }
    Ok(tokens)
}

fn unescape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    let mut escaped = false;
    for c in s.chars() {
        if escaped {
            out.push(c);
            escaped = false;
        } else if c == '\\' {
            escaped = true;
        } else {
            out.push(c);
        }
    }
    out
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn int_at(line: usize, tok: &Token<'_>, text: &str) -> Result<i64> {
    text.parse()
        .map_err(|_| syntax(line, tok.column, format!("expected an integer, found `{text}`")))
}

fn valid_id(s: &str) -> bool {
    !s.is_empty()
        && !s.contains('=')
        && s.chars().all(|c| c.is_alphanumeric() || "_-.:'*+".contains(c))
}

/// Parses a document into a builder, leaving numerical checks to the caller.
pub fn parse_fiber_builder(text: &str) -> Result<FiberBuilder> {
    let mut b = FiberBuilder::new("");
    let mut seen_name = false;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let toks = tokenize(line, raw)?;
        let Some(head) = toks.first() else { continue };
        let args = &toks[1..];
        let arity = |n: usize| -> Result<()> {
            if args.len() != n {
                Err(syntax(line, head.column, format!("`{}` takes {n} argument(s)", head.text)))
            } else {
                Ok(())
            }
        };
        match head.text {
            "fiber" => {
                arity(1)?;
                if !args[0].quoted {
                    return Err(syntax(line, args[0].column, "fiber name must be quoted"));
                }
                if seen_name {
                    return Err(syntax(line, head.column, "duplicate `fiber` line"));
                }
                seen_name = true;
                b = b.name(unescape(args[0].text));
            }
            "blowups" => {
                arity(1)?;
                let r = int_at(line, &args[0], args[0].text)?;
                let r = u32::try_from(r).map_err(|_| syntax(line, args[0].column, "blowups must be non-negative"))?;
                b = b.blowups(r);
            }
            "genus-check" => {
                arity(1)?;
                b = b.genus_check(int_at(line, &args[0], args[0].text)?);
            }
            "resolution" => {
                let ms = args
                    .iter()
                    .map(|t| int_at(line, t, t.text))
                    .collect::<Result<Vec<_>>>()?;
                b = b.resolution(ms);
            }
            "component" => {
                let Some(id) = args.first() else {
                    return Err(syntax(line, head.column, "component needs an id"));
                };
                if id.quoted || !valid_id(id.text) {
                    return Err(syntax(line, id.column, format!("invalid component id `{}`", id.text)));
                }
                let (mut mult, mut self_int, mut genus) = (None, None, 0);
                for tok in &args[1..] {
                    let Some((key, value)) = tok.text.split_once('=') else {
                        return Err(syntax(line, tok.column, format!("expected key=value, found `{}`", tok.text)));
                    };
                    let v = int_at(line, tok, value)?;
                    match key {
                        "mult" if mult.is_none() => mult = Some(v),
                        "self" if self_int.is_none() => self_int = Some(v),
                        "genus" => genus = v,
                        "mult" | "self" => {
                            return Err(syntax(line, tok.column, format!("duplicate `{key}`")));
                        }
                        _ => return Err(syntax(line, tok.column, format!("unknown attribute `{key}`"))),
                    }
                }
                let mult = mult.ok_or_else(|| syntax(line, head.column, "component needs mult=<int>"))?;
                b = b.component(id.text, mult, self_int, genus);
            }
            "node" => {
                if args.len() < 2 || args.len() > 3 {
                    return Err(syntax(line, head.column, "node takes two ids and an optional x<count>"));
                }
                let count = match args.get(2) {
                    Some(tok) => {
                        let digits = tok
                            .text
                            .strip_prefix('x')
                            .ok_or_else(|| syntax(line, tok.column, format!("expected x<count>, found `{}`", tok.text)))?;
                        int_at(line, tok, digits)?
                    }
                    None => 1,
                };
                b = b.node(args[0].text, args[1].text, count);
            }
            other => return Err(syntax(line, head.column, format!("unknown directive `{other}`"))),
        }
    }
    Ok(b)
}

/// Parses and fully checks a fiber document.
pub fn parse_fiber(text: &str) -> Result<FiberGraph> {
    parse_fiber_builder(text)?.build()
}

/// Canonical text: components in canonical-label order, nodes sorted,
/// defaults omitted.
pub fn emit_fiber(f: &FiberGraph) -> String {
    let order = canonical_labeling(f).order;
    let mut pos = vec![0; f.len()];
    for (p, &v) in order.iter().enumerate() {
        pos[v] = p;
    }
    let comps = f.components();
    let mut out = format!("fiber \"{}\"\n", escape(f.name()));
    if f.blowups() > 0 {
        out.push_str(&format!("blowups {}\n", f.blowups()));
    }
    if let Some(rec) = f.resolution() {
        if !rec.is_empty() {
            let ms: Vec<String> = rec.mults().iter().map(|m| m.to_string()).collect();
            out.push_str(&format!("resolution {}\n", ms.join(" ")));
        }
    }
    if let Ok(g) = fiber_genus(f) {
        out.push_str(&format!("genus-check {g}\n"));
    }
    for &v in &order {
        let c = &comps[v];
        out.push_str(&format!("component {} mult={} self={}", c.id, c.mult, c.self_int));
        if c.genus != 0 {
            out.push_str(&format!(" genus={}", c.genus));
        }
        out.push('\n');
    }
    let mut edges: Vec<(usize, usize, i64)> = f
        .nodes()
        .iter()
        .map(|e| {
            let (x, y) = (pos[e.a], pos[e.b]);
            (x.min(y), x.max(y), e.count)
        })
        .collect();
    edges.sort_unstable();
    for (x, y, count) in edges {
        out.push_str(&format!("node {} {}", comps[order[x]].id, comps[order[y]].id));
        if count != 1 {
            out.push_str(&format!(" x{count}"));
        }
        out.push('\n');
    }
    out
}

#[derive(Serialize)]
struct JsonComponent<'a> {
    id: &'a str,
    mult: i64,
    #[serde(rename = "self")]
    self_int: i64,
    genus: i64,
}

#[derive(Serialize)]
struct JsonNode<'a> {
    a: &'a str,
    b: &'a str,
    count: i64,
}

#[derive(Serialize)]
struct JsonFiber<'a> {
    name: &'a str,
    genus: Option<i64>,
    blowups: u32,
    resolution: Option<&'a [i64]>,
    canonical: String,
    components: Vec<JsonComponent<'a>>,
    nodes: Vec<JsonNode<'a>>,
}

/// Structured form of [`emit_fiber`] with the same ordering.
pub fn fiber_to_json(f: &FiberGraph) -> serde_json::Value {
    let labeling = canonical_labeling(f);
    let order = labeling.order;
    let mut pos = vec![0; f.len()];
    for (p, &v) in order.iter().enumerate() {
        pos[v] = p;
    }
    let comps = f.components();
    let mut edges: Vec<(usize, usize, i64)> = f
        .nodes()
        .iter()
        .map(|e| (pos[e.a].min(pos[e.b]), pos[e.a].max(pos[e.b]), e.count))
        .collect();
    edges.sort_unstable();
    let doc = JsonFiber {
        name: f.name(),
        genus: fiber_genus(f).ok(),
        blowups: f.blowups(),
        resolution: f.resolution().map(|r| r.mults()),
        canonical: labeling.label,
        components: order
            .iter()
            .map(|&v| JsonComponent {
                id: &comps[v].id,
                mult: comps[v].mult,
                self_int: comps[v].self_int,
                genus: comps[v].genus,
            })
            .collect(),
        nodes: edges
            .into_iter()
            .map(|(x, y, count)| JsonNode {
                a: &comps[order[x]].id,
                b: &comps[order[y]].id,
                count,
            })
            .collect(),
    };
    serde_json::to_value(doc).expect("fiber serializes")
}

pub fn emit_fiber_json(f: &FiberGraph) -> String {
    serde_json::to_string_pretty(&fiber_to_json(f)).expect("fiber serializes")
}
