//! GMAP v1 text format.
//!
//! ```text
//! gmap 1
//! codomain
//! vertex a
//! vertex b
//! edge ab a b
//! domain
//! vertex a1
//! vertex b1
//! edge e1 a1 b1
//! map
//! v a1 a
//! v b1 b
//! e e1 ab
//! end
//! ```
//!
//! `#` starts a comment. Identifiers match `[A-Za-z0-9_.+-]{1,64}`.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::{GraphMap, MultiGraph};

/// A whitespace-separated token with its 1-based position.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Token<'a> {
    pub text: &'a str,
    pub line: usize,
    pub column: usize,
}

/// Splits text into non-empty lines of tokens, dropping comments.
pub(crate) fn tokenize(text: &str) -> Vec<Vec<Token<'_>>> {
    let mut lines = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let content = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let mut tokens = Vec::new();
        let mut start = None;
        for (offset, ch) in content.char_indices().chain([(content.len(), ' ')]) {
            if ch.is_ascii_whitespace() {
                if let Some(s) = start.take() {
                    tokens.push(Token {
                        text: &content[s..offset],
                        line: i + 1,
                        column: content[..s].chars().count() + 1,
                    });
                }
            } else if start.is_none() {
                start = Some(offset);
            }
        }
        if !tokens.is_empty() {
            lines.push(tokens);
        }
    }
    lines
}

pub(crate) fn syntax(tok: &Token<'_>, message: impl Into<String>) -> Error {
    Error::Syntax {
        line: tok.line,
        column: tok.column,
        message: message.into(),
    }
}

pub fn is_identifier(s: &str) -> bool {
    (1..=64).contains(&s.len())
        && s.bytes()
            .all(|b| b.is_ascii_alphanumeric() || matches!(b, b'_' | b'.' | b'+' | b'-'))
}

fn identifier<'a>(tok: &Token<'a>) -> Result<&'a str> {
    if is_identifier(tok.text) {
        Ok(tok.text)
    } else {
        Err(syntax(tok, format!("invalid identifier `{}`", tok.text)))
    }
}

fn expect_arity(line: &[Token<'_>], n: usize) -> Result<()> {
    if line.len() == n {
        return Ok(());
    }
    let tok = line.get(n).unwrap_or(&line[0]);
    Err(syntax(
        tok,
        format!("`{}` takes {} argument(s)", line[0].text, n - 1),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Section {
    Start,
    Header,
    Codomain,
    Domain,
    Map,
    End,
}

impl Section {
    fn keyword(self) -> &'static str {
        match self {
            Section::Start | Section::Header => "gmap",
            Section::Codomain => "codomain",
            Section::Domain => "domain",
            Section::Map => "map",
            Section::End => "end",
        }
    }

    fn from_keyword(s: &str) -> Option<Self> {
        Some(match s {
            "codomain" => Section::Codomain,
            "domain" => Section::Domain,
            "map" => Section::Map,
            "end" => Section::End,
            _ => return None,
        })
    }
}

fn graph_line(g: &mut MultiGraph, line: &[Token<'_>]) -> Result<()> {
    match line[0].text {
        "vertex" => {
            expect_arity(line, 2)?;
            let name = identifier(&line[1])?;
            g.add_vertex(name).map_err(|_| Error::DuplicateIdentifier {
                name: name.into(),
                line: line[1].line,
                column: line[1].column,
            })?;
        }
        "edge" => {
            expect_arity(line, 4)?;
            let name = identifier(&line[1])?;
            let mut ends = [0; 2];
            for (k, tok) in line[2..4].iter().enumerate() {
                let v = identifier(tok)?;
                ends[k] = g.vertex_id(v).ok_or_else(|| Error::UnknownIdentifier {
                    name: v.into(),
                    line: tok.line,
                    column: tok.column,
                })?;
            }
            g.add_edge(name, ends[0], ends[1])
                .map_err(|_| Error::DuplicateIdentifier {
                    name: name.into(),
                    line: line[1].line,
                    column: line[1].column,
                })?;
        }
        other => return Err(syntax(&line[0], format!("unexpected `{other}`"))),
    }
    Ok(())
}

/// Parses and validates a GMAP v1 document.
pub fn parse_gmap(text: &str) -> Result<GraphMap> {
    let lines = tokenize(text);
    let mut section = Section::Start;
    let mut codomain = MultiGraph::new();
    let mut domain = MultiGraph::new();
    let mut vmap: Vec<Option<usize>> = Vec::new();
    let mut emap: Vec<Option<usize>> = Vec::new();
    let mut last_line = 0;

    for line in &lines {
        let head = &line[0];
        last_line = head.line;
        if section == Section::Start {
            if head.text != "gmap" {
                return Err(syntax(head, "expected `gmap 1` header"));
            }
            expect_arity(line, 2)?;
            if line[1].text != "1" {
                return Err(syntax(&line[1], "unsupported GMAP version"));
            }
            section = Section::Header;
            continue;
        }
        if let Some(next) = Section::from_keyword(head.text) {
            expect_arity(line, 1)?;
            let expected = expected_after(section);
            if next != expected {
                return Err(Error::SectionOrder {
                    found: head.text.into(),
                    expected: expected.keyword().into(),
                    line: head.line,
                });
            }
            section = next;
            if section == Section::Map {
                vmap = vec![None; domain.vertex_count()];
                emap = vec![None; domain.edge_count()];
            }
            continue;
        }
        match section {
            Section::Codomain => graph_line(&mut codomain, line)?,
            Section::Domain => graph_line(&mut domain, line)?,
            Section::Map => map_line(&domain, &codomain, &mut vmap, &mut emap, line)?,
            Section::End => return Err(syntax(head, "content after `end`")),
            Section::Start | Section::Header => {
                return Err(Error::SectionOrder {
                    found: head.text.into(),
                    expected: "codomain".into(),
                    line: head.line,
                })
            }
        }
    }

    if section != Section::End {
        let expected = if section == Section::Start {
            "gmap".to_string()
        } else {
            expected_after(section).keyword().to_string()
        };
        return Err(Error::Syntax {
            line: last_line + 1,
            column: 1,
            message: format!("unexpected end of input, expected `{expected}`"),
        });
    }

    let vmap = vmap
        .into_iter()
        .enumerate()
        .map(|(v, w)| {
            w.ok_or_else(|| Error::Unmapped {
                kind: "vertex",
                name: domain.vertex_name(v).into(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let emap = emap
        .into_iter()
        .enumerate()
        .map(|(e, c)| {
            c.ok_or_else(|| Error::Unmapped {
                kind: "edge",
                name: domain.edge(e).name.clone(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    GraphMap::new(domain, codomain, vmap, emap)
}

fn expected_after(section: Section) -> Section {
    match section {
        Section::Start => Section::Header,
        Section::Header => Section::Codomain,
        Section::Codomain => Section::Domain,
        Section::Domain => Section::Map,
        Section::Map | Section::End => Section::End,
    }
}

fn map_line(
    domain: &MultiGraph,
    codomain: &MultiGraph,
    vmap: &mut [Option<usize>],
    emap: &mut [Option<usize>],
    line: &[Token<'_>],
) -> Result<()> {
    expect_arity(line, 3)?;
    let (src, dst) = (identifier(&line[1])?, identifier(&line[2])?);
    let unknown = |tok: &Token<'_>| Error::UnknownIdentifier {
        name: tok.text.into(),
        line: tok.line,
        column: tok.column,
    };
    let (slot, target) = match line[0].text {
        "v" => {
            let v = domain.vertex_id(src).ok_or_else(|| unknown(&line[1]))?;
            let w = codomain.vertex_id(dst).ok_or_else(|| unknown(&line[2]))?;
            (&mut vmap[v], w)
        }
        "e" => {
            let e = domain.edge_id(src).ok_or_else(|| unknown(&line[1]))?;
            let c = codomain.edge_id(dst).ok_or_else(|| unknown(&line[2]))?;
            (&mut emap[e], c)
        }
        other => return Err(syntax(&line[0], format!("unexpected `{other}` in map"))),
    };
    if slot.is_some() {
        return Err(Error::DuplicateIdentifier {
            name: src.into(),
            line: line[1].line,
            column: line[1].column,
        });
    }
    *slot = Some(target);
    Ok(())
}

fn write_graph(out: &mut String, g: &MultiGraph) {
    for name in g.vertex_names() {
        let _ = writeln!(out, "vertex {name}");
    }
    for edge in g.edges() {
        let _ = writeln!(
            out,
            "edge {} {} {}",
            edge.name,
            g.vertex_name(edge.ends.0),
            g.vertex_name(edge.ends.1)
        );
    }
}

/// Canonical GMAP v1 serialization.
pub fn write_gmap(m: &GraphMap) -> String {
    let (g, h) = (m.domain(), m.codomain());
    let mut out = String::from("gmap 1\ncodomain\n");
    write_graph(&mut out, h);
    out.push_str("domain\n");
    write_graph(&mut out, g);
    out.push_str("map\n");
    for v in 0..g.vertex_count() {
        let _ = writeln!(
            out,
            "v {} {}",
            g.vertex_name(v),
            h.vertex_name(m.image_vertex(v))
        );
    }
    for e in 0..g.edge_count() {
        let _ = writeln!(out, "e {} {}", g.edge(e).name, h.edge(m.image_edge(e)).name);
    }
    out.push_str("end\n");
    out
}
