//! Line-oriented net definition documents.
//!
//! ```text
//! # P_3
//! places: p1 p2
//! event t1 pre - post p1
//! event t2 pre p1 post p2
//! event t3 pre p2 post -
//! initial:
//! ```
//!
//! `#` starts a comment. `places:` comes first, then any number of `event`
//! lines, and `initial:` last. Place lists on event lines are comma separated
//! without spaces; `-` is the empty set.

use std::collections::HashSet;
use std::fmt::Write as _;

use crate::error::{Error, ParseError, Result};
use crate::net::{is_identifier, ElementaryNet, EventDef};

struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokens(line: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        match (c.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push(Token {
                    text: &line[s..i],
                    column: line[..s].chars().count() + 1,
                });
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push(Token {
            text: &line[s..],
            column: line[..s].chars().count() + 1,
        });
    }
    out
}

fn err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse(ParseError {
        line,
        column,
        message: message.into(),
    })
}

#[derive(PartialEq, Eq, PartialOrd, Ord, Clone, Copy)]
enum Section {
    Start,
    Places,
    Initial,
}

/// Parses a net document, preserving declaration order.
pub fn parse_net(document: &str) -> Result<ElementaryNet> {
    let mut section = Section::Start;
    let mut places: Vec<String> = Vec::new();
    let mut declared: HashSet<String> = HashSet::new();
    let mut place_set: HashSet<String> = HashSet::new();
    let mut events: Vec<EventDef> = Vec::new();
    let mut initial: Option<Vec<String>> = None;
    let mut last_line = 0;

    for (k, raw) in document.lines().enumerate() {
        let line_no = k + 1;
        last_line = line_no;
        let line = raw.split('#').next().unwrap_or("");
        let toks = tokens(line);
        let Some(head) = toks.first() else {
            continue;
        };
        if section == Section::Initial {
            return Err(err(line_no, head.column, "nothing may follow `initial:`"));
        }
        let declare = |t: &Token<'_>, declared: &mut HashSet<String>| -> Result<()> {
            if !is_identifier(t.text) {
                return Err(err(line_no, t.column, format!("invalid identifier `{}`", t.text)));
            }
            if !declared.insert(t.text.to_string()) {
                return Err(err(
                    line_no,
                    t.column,
                    format!("duplicate identifier `{}`", t.text),
                ));
            }
            Ok(())
        };
        match head.text {
            "places:" => {
                if section != Section::Start {
                    return Err(err(line_no, head.column, "`places:` must appear once, first"));
                }
                for t in &toks[1..] {
                    declare(t, &mut declared)?;
                    places.push(t.text.to_string());
                    place_set.insert(t.text.to_string());
                }
                section = Section::Places;
            }
            "event" => {
                if section != Section::Places {
                    return Err(err(line_no, head.column, "`event` before `places:`"));
                }
                let end = raw.chars().count() + 1;
                let at = |i: usize| toks.get(i).map_or(end, |t| t.column);
                let name = toks
                    .get(1)
                    .ok_or_else(|| err(line_no, end, "expected event name"))?;
                declare(name, &mut declared)?;
                let keyword = |i: usize, kw: &str| -> Result<()> {
                    match toks.get(i) {
                        Some(t) if t.text == kw => Ok(()),
                        _ => Err(err(line_no, at(i), format!("expected `{kw}`"))),
                    }
                };
                keyword(2, "pre")?;
                let pre = place_list(&toks, 3, line_no, end, &place_set)?;
                keyword(4, "post")?;
                let post = place_list(&toks, 5, line_no, end, &place_set)?;
                if let Some(t) = toks.get(6) {
                    return Err(err(line_no, t.column, "unexpected token after post set"));
                }
                events.push(EventDef {
                    name: name.text.to_string(),
                    pre,
                    post,
                });
            }
            "initial:" => {
                if section != Section::Places {
                    return Err(err(line_no, head.column, "`initial:` before `places:`"));
                }
                let mut marked = Vec::new();
                let mut seen = HashSet::new();
                for t in &toks[1..] {
                    if !place_set.contains(t.text) {
                        return Err(err(line_no, t.column, format!("undeclared place `{}`", t.text)));
                    }
                    if !seen.insert(t.text) {
                        return Err(err(
                            line_no,
                            t.column,
                            format!("duplicate identifier `{}`", t.text),
                        ));
                    }
                    marked.push(t.text.to_string());
                }
                initial = Some(marked);
                section = Section::Initial;
            }
            other => {
                return Err(err(line_no, head.column, format!("unexpected `{other}`")));
            }
        }
    }
    let initial = initial.ok_or_else(|| err(last_line + 1, 1, "missing `initial:`"))?;
    ElementaryNet::new(places, events, &initial)
}

fn place_list(
    toks: &[Token<'_>],
    i: usize,
    line: usize,
    end: usize,
    places: &HashSet<String>,
) -> Result<Vec<String>> {
    let t = toks
        .get(i)
        .ok_or_else(|| err(line, end, "expected a place list or `-`"))?;
    if t.text == "-" {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut column = t.column;
    for name in t.text.split(',') {
        if !is_identifier(name) {
            return Err(err(line, column, format!("invalid place name `{name}`")));
        }
        if !places.contains(name) {
            return Err(err(line, column, format!("undeclared place `{name}`")));
        }
        if out.iter().any(|p| p == name) {
            return Err(err(line, column, format!("place `{name}` listed twice")));
        }
        out.push(name.to_string());
        column += name.chars().count() + 1;
    }
    Ok(out)
}

/// Writes a net in the document format; [`parse_net`] reads it back.
pub fn emit_net(net: &ElementaryNet) -> String {
    let list = |v: &[String]| {
        if v.is_empty() {
            "-".to_string()
        } else {
            v.join(",")
        }
    };
    let mut out = String::new();
    let mut line = String::from("places:");
    for p in net.places() {
        line.push(' ');
        line.push_str(p);
    }
    out.push_str(&line);
    out.push('\n');
    for e in net.events() {
        let _ = writeln!(
            out,
            "event {} pre {} post {}",
            e.name,
            list(&e.pre),
            list(&e.post)
        );
    }
    let mut line = String::from("initial:");
    for p in net.initial().occupied() {
        line.push(' ');
        line.push_str(&net.places()[p]);
    }
    out.push_str(&line);
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pipelines::{make_pipeline, PipelineSpec, Variant};

    fn parse_err(doc: &str) -> ParseError {
        match parse_net(doc) {
            Err(Error::Parse(e)) => e,
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn p3_document() {
        let doc = "# P_3\nplaces: p1 p2\nevent t1 pre - post p1\nevent t2 pre p1 post p2\nevent t3 pre p2 post -\ninitial:\n";
        let net = parse_net(doc).unwrap();
        assert_eq!(net, make_pipeline(PipelineSpec::new(3, Variant::P)).unwrap());
        assert_eq!(emit_net(&net), doc.trim_start_matches("# P_3\n"));
    }

    #[test]
    fn comments_blank_lines_and_initial_marking() {
        let doc = "\n  places: a b c   # three\n\nevent e pre a,b post c\ninitial: b a\n# done\n";
        let net = parse_net(doc).unwrap();
        assert_eq!(net.initial().to_string(), "110");
        assert_eq!(net.events()[0].pre, ["a", "b"]);
        assert_eq!(
            emit_net(&net),
            "places: a b c\nevent e pre a,b post c\ninitial: a b\n"
        );
    }

    #[test]
    fn empty_event_list_is_valid() {
        let net = parse_net("places: p\ninitial: p\n").unwrap();
        assert_eq!(net.event_count(), 0);
        let net = parse_net("places:\ninitial:").unwrap();
        assert_eq!(net.place_count(), 0);
    }

    #[test]
    fn undeclared_place_is_named() {
        let e = parse_err("places: p1\nevent t pre p1 post p9\ninitial:\n");
        assert_eq!((e.line, e.column), (2, 21));
        assert!(e.message.contains("p9"), "{}", e.message);
        let e = parse_err("places: p1 p2\nevent t pre p1,zz post -\ninitial:\n");
        assert_eq!((e.line, e.column), (2, 16));
        let e = parse_err("places: p1\ninitial: q\n");
        assert!(e.message.contains("undeclared place `q`"));
    }

    #[test]
    fn structural_errors() {
        let e = parse_err("places: p\nevent t pre - post -\n");
        assert_eq!(e.line, 3);
        assert!(e.message.contains("missing `initial:`"));
        let e = parse_err("places: p p\ninitial:\n");
        assert_eq!((e.line, e.column), (1, 11));
        assert!(e.message.contains("duplicate"));
        let e = parse_err("places: p\nevent p pre - post -\ninitial:\n");
        assert!(e.message.contains("duplicate identifier `p`"));
        let e = parse_err("places: p\nevent t pre - post\ninitial:\n");
        assert_eq!((e.line, e.column), (2, 19));
        let e = parse_err("places: p\nevent t post - pre -\ninitial:\n");
        assert_eq!((e.line, e.column), (2, 9));
        let e = parse_err("event t pre - post -\nplaces: p\ninitial:\n");
        assert_eq!(e.line, 1);
        let e = parse_err("places: p\ninitial:\nevent t pre - post -\n");
        assert_eq!(e.line, 3);
        let e = parse_err("places: 9p\ninitial:\n");
        assert!(e.message.contains("invalid identifier"));
        let e = parse_err("places: p\ntransition t\ninitial:\n");
        assert!(e.message.contains("unexpected `transition`"));
        let e = parse_err("places: p\nevent t pre - post - extra\ninitial:\n");
        assert_eq!(e.column, 22);
    }
}
