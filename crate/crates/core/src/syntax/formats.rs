//! Line and token formats for data words, data graphs and valuations.

use std::collections::BTreeSet;

use crate::ast::{DataValue, Letter, Valuation, Var};
use crate::error::SourceError;
use crate::eval::{DataGraph, DataWord, Edge, NodeId};

/// Splits `line` into whitespace-separated tokens with their 1-based column.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        match (c.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push((s, &line[s..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s, &line[s..]));
    }
    out.into_iter().map(|(s, t)| (line[..s].chars().count() + 1, t)).collect()
}

/// Parses whitespace-separated `letter:value` tokens. Empty input is the
/// empty word.
pub fn parse_word(text: &str) -> Result<DataWord, SourceError> {
    let mut word = DataWord::new();
    for (lineno, line) in text.lines().enumerate() {
        for (col, tok) in tokens(line) {
            let err = |m: String| SourceError::new(m, lineno + 1, col);
            let (a, d) = tok.split_once(':').ok_or_else(|| err(format!("expected `letter:value`, found `{tok}`")))?;
            let a = Letter::new(a).map_err(|e| err(e.to_string()))?;
            let d = DataValue::new(d).map_err(|e| err(e.to_string()))?;
            word.push(a, d);
        }
    }
    Ok(word)
}

pub fn print_word(w: &DataWord) -> String {
    w.iter().map(|(a, d)| format!("{a}:{d}")).collect::<Vec<_>>().join(" ")
}

/// Parses the line-based graph format:
///
/// ```text
/// # comment
/// node <id>
/// edge <src> <letter> <value> <dst>
/// source <id>
/// sink <id>
/// ```
///
/// Edge lines declare their endpoints; repeated edges collapse.
pub fn parse_graph(text: &str) -> Result<DataGraph, SourceError> {
    let mut g = DataGraph::new();
    let mut ends: [Option<(NodeId, usize, usize)>; 2] = [None, None];
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        let toks = tokens(line);
        let Some(&(col, head)) = toks.first() else { continue };
        let at = |c: usize, m: String| SourceError::new(m, lineno + 1, c);
        let arity = |n: usize| {
            if toks.len() == n {
                Ok(())
            } else {
                Err(at(col, format!("`{head}` takes {} argument(s), found {}", n - 1, toks.len() - 1)))
            }
        };
        let node = |i: usize| NodeId::new(toks[i].1).map_err(|e| at(toks[i].0, e.to_string()));
        match head {
            "node" => {
                arity(2)?;
                g.add_node(node(1)?);
            }
            "edge" => {
                arity(5)?;
                let letter = Letter::new(toks[2].1).map_err(|e| at(toks[2].0, e.to_string()))?;
                let value = DataValue::new(toks[3].1).map_err(|e| at(toks[3].0, e.to_string()))?;
                g.add_edge(Edge { src: node(1)?, letter, value, dst: node(4)? });
            }
            "source" | "sink" => {
                arity(2)?;
                let slot = &mut ends[usize::from(head == "sink")];
                if slot.is_some() {
                    return Err(at(col, format!("more than one `{head}` line")));
                }
                *slot = Some((node(1)?, lineno + 1, toks[1].0));
            }
            other => return Err(at(col, format!("unknown directive `{other}`"))),
        }
    }
    for (n, line, col) in ends.iter().flatten() {
        if !g.contains(n) {
            return Err(SourceError::new(format!("node `{n}` is not declared"), *line, *col));
        }
    }
    let [source, sink] = ends;
    g.source = source.map(|(n, _, _)| n);
    g.sink = sink.map(|(n, _, _)| n);
    Ok(g)
}

/// Deterministic output: nodes sorted by id, then edges sorted by tuple,
/// then source and sink.
pub fn print_graph(g: &DataGraph) -> String {
    let mut out = String::new();
    for n in g.nodes() {
        out.push_str(&format!("node {n}\n"));
    }
    for e in g.edges() {
        out.push_str(&format!("edge {e}\n"));
    }
    if let Some(s) = &g.source {
        out.push_str(&format!("source {s}\n"));
    }
    if let Some(t) = &g.sink {
        out.push_str(&format!("sink {t}\n"));
    }
    out
}

/// Parses comma-separated `var=value` bindings.
pub fn parse_valuation(text: &str) -> Result<Valuation, SourceError> {
    let mut nu = Valuation::new();
    if text.trim().is_empty() {
        return Ok(nu);
    }
    let mut seen = BTreeSet::new();
    let mut offset = 0;
    for part in text.split(',') {
        let col = offset + part.len() - part.trim_start().len() + 1;
        offset += part.len() + 1;
        let err = |m: String| SourceError::new(m, 1, col);
        let (x, d) = part.trim().split_once('=').ok_or_else(|| err(format!("expected `var=value`, found `{}`", part.trim())))?;
        let x = Var::new(x.trim()).map_err(|e| err(e.to_string()))?;
        let d = DataValue::new(d.trim()).map_err(|e| err(e.to_string()))?;
        if !seen.insert(x.clone()) {
            return Err(err(format!("variable `{x}` is bound twice")));
        }
        nu.insert(x, d);
    }
    Ok(nu)
}

pub fn print_valuation(nu: &Valuation) -> String {
    nu.iter().map(|(x, d)| format!("{x}={d}")).collect::<Vec<_>>().join(",")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn words() {
        let w = parse_word("a:5 b:5 b:5").unwrap();
        assert_eq!(w.len(), 3);
        assert_eq!(print_word(&w), "a:5 b:5 b:5");
        assert!(parse_word("").unwrap().is_empty());
        let err = parse_word("a:1 a5").unwrap_err();
        assert_eq!((err.line, err.column), (1, 5));
    }

    #[test]
    fn single_edge_graph() {
        let g = parse_graph("edge u a 5 v").unwrap();
        assert_eq!(g.node_count(), 2);
        assert!(g.edges().contains(&Edge::new("u", "a", "5", "v")));
    }

    #[test]
    fn duplicate_edges_collapse() {
        let g = parse_graph("edge u a 5 v\nedge u a 5 v\n").unwrap();
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn undeclared_source() {
        let err = parse_graph("source w").unwrap_err();
        assert_eq!((err.line, err.column), (1, 8));
        assert!(parse_graph("node w\nsource w").is_ok());
    }

    #[test]
    fn graph_errors() {
        assert!(parse_graph("edge u a 5").is_err());
        assert!(parse_graph("node u\nsource u\nsource u").is_err());
        assert!(parse_graph("vertex u").is_err());
    }

    #[test]
    fn comments_and_output_order() {
        let g = parse_graph("# demo\nedge v b 1 w # trailing\nnode a\nedge u a 5 v\nsource u\nsink w\n").unwrap();
        assert_eq!(
            print_graph(&g),
            "node a\nnode u\nnode v\nnode w\nedge u a 5 v\nedge v b 1 w\nsource u\nsink w\n"
        );
    }

    #[test]
    fn valuations() {
        let nu = parse_valuation("x=5,y=po").unwrap();
        assert_eq!(nu.get(&Var::lit("y")), Some(&DataValue::lit("po")));
        assert!(parse_valuation("").unwrap().is_empty());
        assert!(parse_valuation("x=1,x=2").is_err());
        assert!(parse_valuation("x").is_err());
        assert_eq!(print_valuation(&parse_valuation(" y = 2 , x=1").unwrap()), "x=1,y=2");
    }
}
