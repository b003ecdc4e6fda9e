use std::fmt;
use std::str::FromStr;

use serde::ser::{Serialize, SerializeStruct, Serializer};

use super::{Dag, GraphError, Node};

/// Text form: a header `n <count>` followed by one `a -> b` per line.
/// `#` starts a comment; blank lines are ignored. [`Dag::to_text`] emits the
/// canonical form (sorted edges, no comments), which parses back unchanged.
impl FromStr for Dag {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut n: Option<usize> = None;
        let mut edges = Vec::new();
        for (idx, raw) in s.lines().enumerate() {
            let line_no = idx + 1;
            let err = |message: String| GraphError::Parse {
                line: line_no,
                message,
            };
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            match n {
                None => {
                    let mut toks = line.split_whitespace();
                    match (toks.next(), toks.next(), toks.next()) {
                        (Some("n"), Some(count), None) => {
                            let count: usize = count
                                .parse()
                                .map_err(|_| err(format!("bad node count '{count}'")))?;
                            n = Some(count);
                        }
                        _ => return Err(err(format!("expected header 'n <count>', found '{line}'"))),
                    }
                }
                Some(count) => {
                    let (a, b) = line
                        .split_once("->")
                        .ok_or_else(|| err(format!("expected 'a -> b', found '{line}'")))?;
                    let parse_node = |tok: &str| -> Result<Node, GraphError> {
                        let tok = tok.trim();
                        let v: Node = tok.parse().map_err(|_| err(format!("bad node '{tok}'")))?;
                        if v == 0 || v > count {
                            return Err(err(format!("node {v} is outside 1..={count}")));
                        }
                        Ok(v)
                    };
                    edges.push((parse_node(a)?, parse_node(b)?));
                }
            }
        }
        let n = n.ok_or(GraphError::Parse {
            line: 1,
            message: "missing header 'n <count>'".into(),
        })?;
        Dag::new(n, edges)
    }
}

impl Dag {
    pub fn to_text(&self) -> String {
        let mut out = format!("n {}\n", self.n());
        for (a, b) in self.edges() {
            out.push_str(&format!("{a} -> {b}\n"));
        }
        out
    }
}

/// Serialized as `{"n": .., "edges": [[a, b], ..]}` with sorted edges.
impl Serialize for Dag {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("Dag", 2)?;
        st.serialize_field("n", &self.n())?;
        st.serialize_field("edges", self.edges())?;
        st.end()
    }
}

impl fmt::Display for Dag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}
