//! Text formats for lattices and systems, and DOT export.
//!
//! Lattice file:
//!
//! ```text
//! lattice 3
//! cover 0 1
//! cover 1 2
//! ```
//!
//! System file: a `skeleton` line and a lattice body, `gamma x y` lines for
//! related pairs `x < y` (reflexive pairs implied), `block x` plus a lattice
//! body per skeleton element, and `connect x y filter_min ideal_max` followed
//! by `map a b` lines per connection. Blank lines and `#` comments are
//! ignored. Serialization is canonical: parse then serialize reproduces a
//! serialized file byte for byte.

use std::fmt::Write;

use crate::dissection::Dissection;
use crate::error::{Error, Result};
use crate::lattice::FiniteLattice;
use crate::mcs::{Connection, McSystem, McsReport};
use crate::tolerance::{Relation, Tolerance};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FileKind {
    Lattice,
    System,
}

/// Significant lines as `(line number, tokens)`.
fn lines(text: &str) -> Vec<(usize, Vec<&str>)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("")))
        .map(|(i, l)| (i, l.split_whitespace().collect::<Vec<_>>()))
        .filter(|(_, t)| !t.is_empty())
        .collect()
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn nums(line: usize, toks: &[&str], count: usize) -> Result<Vec<usize>> {
    if toks.len() != count + 1 {
        return Err(parse_err(
            line,
            format!("`{}` takes {count} argument(s)", toks[0]),
        ));
    }
    toks[1..]
        .iter()
        .map(|t| {
            t.parse()
                .map_err(|_| parse_err(line, format!("`{t}` is not a non-negative integer")))
        })
        .collect()
}

pub fn detect_kind(text: &str) -> Result<FileKind> {
    match lines(text).first() {
        Some((_, t)) if t[0] == "lattice" => Ok(FileKind::Lattice),
        Some((_, t)) if t[0] == "skeleton" => Ok(FileKind::System),
        Some((l, t)) => Err(parse_err(*l, format!("unexpected `{}`", t[0]))),
        None => Err(parse_err(0, "empty file")),
    }
}

type Lines<'t> = std::iter::Peekable<std::vec::IntoIter<(usize, Vec<&'t str>)>>;

fn parse_body(it: &mut Lines<'_>, after: usize) -> Result<FiniteLattice> {
    let (line, toks) = it
        .next()
        .ok_or_else(|| parse_err(after, "expected `lattice <n>`"))?;
    if toks[0] != "lattice" {
        return Err(parse_err(line, "expected `lattice <n>`"));
    }
    let n = nums(line, &toks, 1)?[0];
    let mut covers = Vec::new();
    while let Some((line, toks)) = it.next_if(|(_, t)| t[0] == "cover") {
        let v = nums(line, &toks, 2)?;
        covers.push((v[0], v[1]));
    }
    FiniteLattice::from_covers(n, &covers)
}

pub fn parse_lattice(text: &str) -> Result<FiniteLattice> {
    let mut it = lines(text).into_iter().peekable();
    let l = parse_body(&mut it, 0)?;
    if let Some((line, toks)) = it.next() {
        return Err(parse_err(line, format!("unexpected `{}`", toks[0])));
    }
    Ok(l)
}

fn write_body(out: &mut String, l: &FiniteLattice) {
    writeln!(out, "lattice {}", l.size()).unwrap();
    for &(a, b) in l.covers() {
        writeln!(out, "cover {a} {b}").unwrap();
    }
}

pub fn serialize_lattice(l: &FiniteLattice) -> String {
    let mut s = String::new();
    write_body(&mut s, l);
    s
}

/// Parses a system and attaches its validation report; axiom failures do
/// not prevent loading.
pub fn parse_mcs(text: &str) -> Result<(McSystem, McsReport)> {
    let mut it = lines(text).into_iter().peekable();
    match it.next() {
        Some((_, t)) if t == ["skeleton"] => {}
        Some((line, _)) => return Err(parse_err(line, "expected `skeleton`")),
        None => return Err(parse_err(0, "empty file")),
    }
    let skeleton = parse_body(&mut it, 1)?;
    let n = skeleton.size();
    let mut gamma = Vec::new();
    let mut blocks: Vec<Option<FiniteLattice>> = vec![None; n];
    let mut connections = Vec::new();
    while let Some((line, toks)) = it.next() {
        match toks[0] {
            "gamma" => {
                let v = nums(line, &toks, 2)?;
                gamma.push((v[0], v[1]));
            }
            "block" => {
                let x = nums(line, &toks, 1)?[0];
                if x >= n {
                    return Err(parse_err(
                        line,
                        format!("block {x} is not a skeleton element"),
                    ));
                }
                if blocks[x].is_some() {
                    return Err(parse_err(line, format!("block {x} given twice")));
                }
                blocks[x] = Some(parse_body(&mut it, line)?);
            }
            "connect" => {
                let v = nums(line, &toks, 4)?;
                let mut pairs = Vec::new();
                while let Some((line, toks)) = it.next_if(|(_, t)| t[0] == "map") {
                    let m = nums(line, &toks, 2)?;
                    pairs.push((m[0], m[1]));
                }
                connections.push(Connection::new(v[0], v[1], v[2], v[3], pairs));
            }
            other => return Err(parse_err(line, format!("unexpected `{other}`"))),
        }
    }
    let blocks: Vec<FiniteLattice> = blocks
        .into_iter()
        .enumerate()
        .map(|(x, b)| b.ok_or_else(|| Error::MalformedSystem(format!("block {x} missing"))))
        .collect::<Result<_>>()?;
    let rel = Relation::symmetric_from_pairs(n, &gamma)?;
    let gamma = Tolerance::new(&skeleton, rel)?;
    let c = McSystem::new(skeleton, gamma, blocks, connections)?;
    let report = c.validate();
    Ok((c, report))
}

pub fn serialize_mcs(c: &McSystem) -> String {
    let mut s = String::from("skeleton\n");
    write_body(&mut s, c.skeleton());
    let n = c.skeleton().size();
    for x in 0..n {
        for y in x + 1..n {
            if c.related(x, y) {
                writeln!(s, "gamma {x} {y}").unwrap();
            }
        }
    }
    for x in 0..n {
        writeln!(s, "block {x}").unwrap();
        write_body(&mut s, c.block(x));
    }
    for k in c.connections() {
        writeln!(
            s,
            "connect {} {} {} {}",
            k.lower, k.upper, k.filter_min, k.ideal_max
        )
        .unwrap();
        for &(a, b) in k.pairs() {
            writeln!(s, "map {a} {b}").unwrap();
        }
    }
    s
}

/// Hasse diagram drawn bottom to top. With a dissection, each block becomes
/// a cluster and an element gets one border per block containing it.
pub fn export_dot(l: &FiniteLattice, blocks: Option<&Dissection>) -> String {
    let mut s = String::from("digraph lattice {\n  rankdir=BT;\n  node [shape=circle];\n");
    let count = |e: usize| blocks.map_or(1, |d| d.element_blocks(e).2.len());
    for e in 0..l.size() {
        match count(e) {
            1 => writeln!(s, "  {e};").unwrap(),
            k => writeln!(s, "  {e} [peripheries={k}];").unwrap(),
        }
    }
    if let Some(d) = blocks {
        for (x, b) in d.blocks().iter().enumerate() {
            writeln!(s, "  subgraph cluster_{x} {{").unwrap();
            writeln!(s, "    label=\"block {x}\";").unwrap();
            let members: Vec<String> = b.members(l).iter().map(|e| e.to_string()).collect();
            writeln!(s, "    {};", members.join("; ")).unwrap();
            writeln!(s, "  }}").unwrap();
        }
    }
    for &(a, b) in l.covers() {
        writeln!(s, "  {a} -> {b};").unwrap();
    }
    s.push_str("}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dissection::dissect;
    use crate::generators::{chain, nonmonotone_example, stacked};

    #[test]
    fn chain_three_text() {
        assert_eq!(
            serialize_lattice(&chain(3)),
            "lattice 3\ncover 0 1\ncover 1 2\n"
        );
        assert_eq!(parse_lattice("lattice 1").unwrap().size(), 1);
        assert_eq!(
            parse_lattice("# c\n\nlattice 2 # two\ncover 0 1\n").unwrap(),
            chain(2)
        );
    }

    #[test]
    fn lattice_parse_errors() {
        assert!(matches!(
            parse_lattice("lattice 3\ncover 0 2\ncover 0 1\ncover 1 2"),
            Err(Error::NotCovers {
                lower: 0,
                upper: 2,
                ..
            })
        ));
        assert!(matches!(
            parse_lattice("lattice x"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_lattice("lattice 2\ncover 0 1\nedge 0 1"),
            Err(Error::Parse { line: 3, .. })
        ));
        assert!(matches!(parse_lattice(""), Err(Error::Parse { .. })));
    }

    #[test]
    fn system_round_trip() {
        let l = chain(3);
        let c = dissect(&l).unwrap().into_mcs();
        let text = serialize_mcs(&c);
        let (back, rep) = parse_mcs(&text).unwrap();
        assert_eq!(back, c);
        assert!(rep.is_valid());
        assert_eq!(serialize_mcs(&back), text);
    }

    #[test]
    fn missing_self_connection() {
        let text = "skeleton\nlattice 1\nblock 0\nlattice 2\ncover 0 1\n";
        assert!(matches!(parse_mcs(text), Err(Error::MalformedSystem(_))));
    }

    #[test]
    fn nonmonotone_file_loads() {
        let text = serialize_mcs(&nonmonotone_example());
        let (_, rep) = parse_mcs(&text).unwrap();
        assert!(rep.is_valid() && !rep.is_monotone());
    }

    #[test]
    fn dot_output() {
        let one = export_dot(&chain(1), None);
        assert!(one.contains("  0;") && !one.contains("->"));
        let c3 = export_dot(&chain(3), None);
        assert_eq!(c3.matches("->").count(), 2);
        let l = stacked(&[3, 3]);
        let d = dissect(&l).unwrap();
        let dot = export_dot(&l, Some(&d));
        assert_eq!(dot.matches("subgraph cluster_").count(), 2);
        assert_eq!(dot.matches("peripheries=2").count(), 1);
        assert_eq!(dot, export_dot(&l, Some(&d)));
    }
}
