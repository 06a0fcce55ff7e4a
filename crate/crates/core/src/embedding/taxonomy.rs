use std::collections::{BTreeSet, HashMap};
use std::io::Read;

use crate::{Error, Result};

/// An is-a hierarchy: named nodes and `(child, parent)` edges forming a DAG.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Taxonomy {
    nodes: Vec<String>,
    edges: Vec<(usize, usize)>,
    parents: Vec<Vec<usize>>,
    children: Vec<Vec<usize>>,
}

impl Taxonomy {
    pub fn new(nodes: Vec<String>, edges: Vec<(usize, usize)>) -> Result<Self> {
        let n = nodes.len();
        let mut seen = BTreeSet::new();
        for name in &nodes {
            if !seen.insert(name) {
                return Err(Error::invalid(format!("duplicate node {name:?}")));
            }
        }
        let mut parents = vec![Vec::new(); n];
        let mut children = vec![Vec::new(); n];
        for &(c, p) in &edges {
            for i in [c, p] {
                if i >= n {
                    return Err(Error::IndexOutOfRange { what: "node", index: i, len: n });
                }
            }
            if c == p {
                return Err(Error::invalid(format!("self loop on {:?}", nodes[c])));
            }
            parents[c].push(p);
            children[p].push(c);
        }
        let tax = Taxonomy { nodes, edges, parents, children };
        tax.check_acyclic()?;
        Ok(tax)
    }

    /// Builds from named `(child, parent)` pairs; nodes are numbered in
    /// order of first appearance.
    pub fn from_pairs<S: AsRef<str>>(pairs: &[(S, S)]) -> Result<Self> {
        let mut index: HashMap<String, usize> = HashMap::new();
        let mut nodes = Vec::new();
        let mut id = |name: &str, nodes: &mut Vec<String>| {
            *index.entry(name.to_owned()).or_insert_with(|| {
                nodes.push(name.to_owned());
                nodes.len() - 1
            })
        };
        let mut edges = Vec::with_capacity(pairs.len());
        for (c, p) in pairs {
            let c = id(c.as_ref(), &mut nodes);
            let p = id(p.as_ref(), &mut nodes);
            edges.push((c, p));
        }
        Taxonomy::new(nodes, edges)
    }

    /// Two-column `child,parent` CSV. A first row reading `child,parent` is
    /// treated as a header.
    pub fn from_csv_reader<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .flexible(true)
            .from_reader(reader);
        let mut pairs = Vec::new();
        for (i, rec) in rdr.records().enumerate() {
            let line = i + 1;
            let rec = rec.map_err(|e| Error::Parse { line, msg: e.to_string() })?;
            if rec.iter().all(str::is_empty) {
                continue;
            }
            if rec.len() != 2 {
                return Err(Error::Parse { line, msg: format!("expected 2 columns, found {}", rec.len()) });
            }
            if line == 1 && &rec[0] == "child" && &rec[1] == "parent" {
                continue;
            }
            pairs.push((rec[0].to_owned(), rec[1].to_owned()));
        }
        if pairs.is_empty() {
            return Err(Error::Parse { line: 1, msg: "taxonomy has no edges".into() });
        }
        Taxonomy::from_pairs(&pairs)
    }

    pub fn to_csv_string(&self) -> String {
        let mut out = String::from("child,parent\n");
        for &(c, p) in &self.edges {
            out.push_str(&format!("{},{}\n", self.nodes[c], self.nodes[p]));
        }
        out
    }

    fn check_acyclic(&self) -> Result<()> {
        // Kahn's algorithm over child -> parent edges
        let n = self.nodes.len();
        let mut indeg: Vec<usize> = self.children.iter().map(Vec::len).collect();
        let mut stack: Vec<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
        let mut visited = 0;
        while let Some(v) = stack.pop() {
            visited += 1;
            for &p in &self.parents[v] {
                indeg[p] -= 1;
                if indeg[p] == 0 {
                    stack.push(p);
                }
            }
        }
        if visited != n {
            return Err(Error::invalid("taxonomy contains a cycle"));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn node_index(&self, name: &str) -> Option<usize> {
        self.nodes.iter().position(|n| n == name)
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn parents(&self, node: usize) -> &[usize] {
        &self.parents[node]
    }

    pub fn children(&self, node: usize) -> &[usize] {
        &self.children[node]
    }

    pub fn leaves(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.children[i].is_empty()).collect()
    }

    /// Strict ancestors of `node`.
    pub fn ancestors(&self, node: usize) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        let mut stack = self.parents[node].clone();
        while let Some(p) = stack.pop() {
            if out.insert(p) {
                stack.extend_from_slice(&self.parents[p]);
            }
        }
        out
    }

    /// All `(descendant, ancestor)` pairs of the transitive closure.
    pub fn ancestor_pairs(&self) -> Vec<(usize, usize)> {
        (0..self.len())
            .flat_map(|d| self.ancestors(d).into_iter().map(move |a| (d, a)))
            .collect()
    }

    /// `a ⪯ b`: `a` equals `b` or lies below it.
    pub fn is_below(&self, a: usize, b: usize) -> bool {
        a == b || self.ancestors(a).contains(&b)
    }
}
