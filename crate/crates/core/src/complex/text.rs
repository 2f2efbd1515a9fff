//! Line-oriented text format for complexes.
//!
//! ```text
//! pe2complex 1
//! vertex v
//! edge a_1 v v 1 a_1
//! face alpha_{1,1} equilateral-triangle : +n_{1,1} +a_1 -p_{1,1} : 1/3 pi, 1/3 pi, 1/3 pi
//! ```
//!
//! Blank lines and lines starting with `#` are ignored. `emit` is canonical,
//! so `emit(load(emit(c))) == emit(c)` byte for byte.

use super::{format_angle, parse_angle, ComplexBuilder, ComplexError, Length, PE2Complex, ShapeTag, Step};

const HEADER: &str = "pe2complex 1";

#[derive(Debug, thiserror::Error)]
pub enum TextError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: {source}")]
    Cell {
        line: usize,
        #[source]
        source: ComplexError,
    },
}

pub fn emit(c: &PE2Complex) -> String {
    let mut out = String::new();
    out.push_str(HEADER);
    out.push('\n');
    for v in c.vertices() {
        out.push_str(&format!("vertex {v}\n"));
    }
    for e in c.edges() {
        out.push_str(&format!(
            "edge {} {} {} {} {}\n",
            e.id,
            c.vertices()[e.tail],
            c.vertices()[e.head],
            e.length,
            e.label
        ));
    }
    for f in c.faces() {
        let steps: Vec<String> = f
            .boundary
            .iter()
            .map(|s| format!("{}{}", if s.forward { '+' } else { '-' }, c.edges()[s.edge].id))
            .collect();
        let angles: Vec<String> = f.angles.iter().map(format_angle).collect();
        out.push_str(&format!(
            "face {} {} : {} : {}\n",
            f.id,
            f.shape,
            steps.join(" "),
            angles.join(", ")
        ));
    }
    out
}

pub fn load(text: &str) -> Result<PE2Complex, TextError> {
    let mut b = ComplexBuilder::new();
    let mut saw_header = false;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let syntax = |msg: &str| TextError::Syntax {
            line,
            msg: msg.to_string(),
        };
        let cell = |source| TextError::Cell { line, source };
        let l = raw.trim();
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        if !saw_header {
            if l != HEADER {
                return Err(syntax("missing `pe2complex 1` header"));
            }
            saw_header = true;
            continue;
        }
        let (kind, rest) = l.split_once(' ').ok_or_else(|| syntax("truncated record"))?;
        match kind {
            "vertex" => {
                b.vertex(rest.trim()).map_err(cell)?;
            }
            "edge" => {
                let t: Vec<&str> = rest.split_whitespace().collect();
                if t.len() != 5 {
                    return Err(syntax("edge needs: id tail head length label"));
                }
                let len: Length = t[3].parse().map_err(|e| syntax(&format!("{e}")))?;
                b.edge(t[0], t[1], t[2], len, t[4]).map_err(cell)?;
            }
            "face" => {
                let parts: Vec<&str> = rest.splitn(3, " : ").collect();
                if parts.len() != 3 {
                    return Err(syntax("face needs: id shape : steps : angles"));
                }
                let head: Vec<&str> = parts[0].split_whitespace().collect();
                if head.len() != 2 {
                    return Err(syntax("face needs an id and a shape"));
                }
                let shape = ShapeTag::parse(head[1]).ok_or_else(|| syntax("unknown shape tag"))?;
                let mut steps = Vec::new();
                for tok in parts[1].split_whitespace() {
                    let (fwd, id) = match tok.split_at(1) {
                        ("+", id) => (true, id),
                        ("-", id) => (false, id),
                        _ => return Err(syntax("steps must start with + or -")),
                    };
                    steps.push(Step {
                        edge: b_edge(&b, id).map_err(cell)?,
                        forward: fwd,
                    });
                }
                let angles = parts[2]
                    .split(',')
                    .map(parse_angle)
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|e| syntax(&format!("{e}")))?;
                b.face_by_steps(head[0], steps, angles, shape).map_err(cell)?;
            }
            _ => return Err(syntax("unknown record kind")),
        }
    }
    Ok(b.finish())
}

fn b_edge(b: &ComplexBuilder, id: &str) -> Result<usize, ComplexError> {
    b.inner.edge_id(id)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_required() {
        assert!(load("vertex v\n").is_err());
        assert_eq!(load("pe2complex 1\n").unwrap(), PE2Complex::empty());
    }

    #[test]
    fn small_round_trip() {
        let text = "pe2complex 1\nvertex v\nedge x v v 1 x\nedge y v v sqrt2 y\nedge z v v 1 z\n\
face f general-convex-polygon : +x +y -z : 1/4 pi, 1/2 pi, 1/4 pi\n";
        let c = load(text).unwrap();
        assert_eq!(emit(&c), text);
    }

    #[test]
    fn syntax_errors_carry_line() {
        let err = load("pe2complex 1\nvertex v\nedge x v w 1 x\n").unwrap_err();
        assert!(err.to_string().starts_with("line 3"));
    }
}
