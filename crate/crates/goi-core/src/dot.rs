//! A small structural graph of a compiled network, exportable as
//! Graphviz dot. Nodes are the primitive machines, edges the
//! composition/tensor wiring between them.

/// Accumulated nodes and edges of a network diagram.
#[derive(Debug, Clone, Default)]
pub struct NetGraph {
    nodes: Vec<(String, String)>,
    edges: Vec<(String, String, String)>,
}

impl NetGraph {
    pub fn new() -> NetGraph {
        NetGraph::default()
    }

    /// Adds a node with a stable identifier and a display label.
    /// Duplicate identifiers are merged (the first label wins).
    pub fn add_node(&mut self, id: impl Into<String>, label: impl Into<String>) {
        let id = id.into();
        if self.nodes.iter().all(|(i, _)| *i != id) {
            self.nodes.push((id, label.into()));
        }
    }

    pub fn add_edge(
        &mut self,
        from: impl Into<String>,
        to: impl Into<String>,
        label: impl Into<String>,
    ) {
        self.edges.push((from.into(), to.into(), label.into()));
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Renders the graph in Graphviz dot syntax, deterministically in
    /// insertion order.
    pub fn to_dot(&self, name: &str) -> String {
        let mut s = String::new();
        s.push_str(&format!("digraph {} {{\n", quote(name)));
        s.push_str("  rankdir=LR;\n  node [shape=box, fontname=\"monospace\"];\n");
        for (id, label) in &self.nodes {
            s.push_str(&format!("  {} [label={}];\n", quote(id), quote(label)));
        }
        for (from, to, label) in &self.edges {
            if label.is_empty() {
                s.push_str(&format!("  {} -> {};\n", quote(from), quote(to)));
            } else {
                s.push_str(&format!(
                    "  {} -> {} [label={}];\n",
                    quote(from),
                    quote(to),
                    quote(label)
                ));
            }
        }
        s.push_str("}\n");
        s
    }
}

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_nodes_and_edges() {
        let mut g = NetGraph::new();
        g.add_node("a", "sc");
        g.add_node("b", "fn:add");
        g.add_node("a", "ignored duplicate");
        g.add_edge("a", "b", "S");
        let dot = g.to_dot("net");
        assert!(dot.contains("\"a\" [label=\"sc\"];"));
        assert!(dot.contains("\"b\" [label=\"fn:add\"];"));
        assert!(dot.contains("\"a\" -> \"b\" [label=\"S\"];"));
        assert!(!dot.contains("ignored"));
    }

    #[test]
    fn escapes_quotes() {
        let mut g = NetGraph::new();
        g.add_node("n", "say \"hi\"");
        let dot = g.to_dot("g");
        assert!(dot.contains("label=\"say \\\"hi\\\"\""));
    }
}
