//! Directed-graph structure of nonnegative matrices: strongly connected
//! components, root sets and periodicity.
//!
//! A matrix `M` induces the digraph with edge `(i, j)` whenever
//! `M[i][j] > threshold`. For agent weight matrices this reads "agent `i`
//! imports from agent `j`".

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Digraph {
    vertex_count: usize,
    edges: BTreeSet<(usize, usize)>,
    succ: Vec<Vec<usize>>,
}

impl Digraph {
    pub fn new(
        vertex_count: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let edges: BTreeSet<_> = edges.into_iter().collect();
        if let Some(&(u, v)) = edges
            .iter()
            .find(|&&(u, v)| u >= vertex_count || v >= vertex_count)
        {
            return Err(Error::dims("edge endpoint", vertex_count, u.max(v)));
        }
        let mut succ = vec![Vec::new(); vertex_count];
        for &(u, v) in &edges {
            succ[u].push(v);
        }
        Ok(Digraph {
            vertex_count,
            edges,
            succ,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.edges
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u, v))
    }

    pub fn successors(&self, v: usize) -> &[usize] {
        &self.succ[v]
    }

    /// Same vertices, every edge flipped.
    pub fn reversed(&self) -> Digraph {
        Digraph::new(self.vertex_count, self.edges.iter().map(|&(u, v)| (v, u)))
            .expect("reversal keeps endpoints in range")
    }

    /// Vertices reachable from `start` by directed paths, `start` included.
    pub fn reachable_from(&self, start: usize) -> Vec<bool> {
        let mut seen = vec![false; self.vertex_count];
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        while let Some(u) = queue.pop_front() {
            for &v in &self.succ[u] {
                if !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        seen
    }

    /// Subgraph induced on `vertices`, relabelled to `0..vertices.len()` in
    /// ascending order.
    pub fn induced(&self, vertices: &BTreeSet<usize>) -> Digraph {
        let label: Vec<Option<usize>> = {
            let mut l = vec![None; self.vertex_count];
            for (k, &v) in vertices.iter().enumerate() {
                l[v] = Some(k);
            }
            l
        };
        let edges = self
            .edges
            .iter()
            .filter_map(|&(u, v)| Some((label[u]?, label[v]?)));
        Digraph::new(vertices.len(), edges).expect("induced labels are in range")
    }
}

/// Edge `(i, j)` iff `M[i][j] > threshold`.
pub fn graph_from_matrix(m: &Matrix, threshold: f64) -> Result<Digraph> {
    m.require_square()?;
    m.require_nonnegative(0.0)?;
    let n = m.rows();
    let edges = (0..n).flat_map(|i| (0..n).map(move |j| (i, j)));
    Digraph::new(n, edges.filter(|&(i, j)| m[(i, j)] > threshold))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SccDecomposition {
    pub component_of: Vec<usize>,
    pub component_count: usize,
    pub condensation_edges: BTreeSet<(usize, usize)>,
}

impl SccDecomposition {
    pub fn members(&self, component: usize) -> BTreeSet<usize> {
        self.component_of
            .iter()
            .enumerate()
            .filter(|&(_, &c)| c == component)
            .map(|(v, _)| v)
            .collect()
    }

    fn in_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.component_count];
        for &(_, b) in &self.condensation_edges {
            deg[b] += 1;
        }
        deg
    }

    fn out_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.component_count];
        for &(a, _) in &self.condensation_edges {
            deg[a] += 1;
        }
        deg
    }
}

/// Tarjan's algorithm, iterative. Components are numbered in reverse
/// topological order of the condensation: sinks get the smallest ids.
pub fn scc(g: &Digraph) -> SccDecomposition {
    const UNSEEN: usize = usize::MAX;
    let n = g.vertex_count();
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut component_of = vec![UNSEEN; n];
    let mut next_index = 0;
    let mut component_count = 0;

    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        // (vertex, position in its successor list)
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            if let Some(&w) = g.successors(v).get(*pos) {
                *pos += 1;
                if index[w] == UNSEEN {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                loop {
                    let w = stack.pop().expect("tarjan stack holds the component");
                    on_stack[w] = false;
                    component_of[w] = component_count;
                    if w == v {
                        break;
                    }
                }
                component_count += 1;
            }
        }
    }

    let condensation_edges = g
        .edges()
        .iter()
        .map(|&(u, v)| (component_of[u], component_of[v]))
        .filter(|(a, b)| a != b)
        .collect();
    SccDecomposition {
        component_of,
        component_count,
        condensation_edges,
    }
}

/// Out-roots reach every vertex; in-roots are reached from every vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootReport {
    pub out_roots: BTreeSet<usize>,
    pub in_roots: BTreeSet<usize>,
    /// Induced subgraph on the out-roots is strongly connected.
    pub root_component_strongly_connected: bool,
    /// Induced subgraph on the out-roots is aperiodic.
    pub root_component_aperiodic: bool,
    pub in_root_component_strongly_connected: bool,
    pub in_root_component_aperiodic: bool,
}

pub fn root_report(g: &Digraph) -> RootReport {
    let dec = scc(g);
    let unique = |degrees: Vec<usize>| -> BTreeSet<usize> {
        let mut zero = degrees.iter().enumerate().filter(|&(_, &d)| d == 0);
        match (zero.next(), zero.next()) {
            // a lone source of a finite DAG reaches everything
            (Some((c, _)), None) => dec.members(c),
            _ => BTreeSet::new(),
        }
    };
    let out_roots = unique(dec.in_degrees());
    let in_roots = unique(dec.out_degrees());
    let (sc_out, ap_out) = root_flags(g, &out_roots);
    let (sc_in, ap_in) = root_flags(g, &in_roots);
    RootReport {
        out_roots,
        in_roots,
        root_component_strongly_connected: sc_out,
        root_component_aperiodic: ap_out,
        in_root_component_strongly_connected: sc_in,
        in_root_component_aperiodic: ap_in,
    }
}

fn root_flags(g: &Digraph, roots: &BTreeSet<usize>) -> (bool, bool) {
    if roots.is_empty() {
        return (false, false);
    }
    let sub = g.induced(roots);
    let strongly_connected = scc(&sub).component_count == 1;
    let all: BTreeSet<usize> = (0..sub.vertex_count()).collect();
    let aperiodic = strongly_connected && is_aperiodic(&sub, &all).unwrap_or(false);
    (strongly_connected, aperiodic)
}

/// Whether the cycle lengths inside `component` have gcd one.
///
/// Uses BFS levels from one vertex: the period equals the gcd over the
/// component's internal edges `(u, v)` of `|level(u) + 1 − level(v)|`.
/// A component with no internal edge has no cycles and is reported periodic.
pub fn is_aperiodic(g: &Digraph, component: &BTreeSet<usize>) -> Result<bool> {
    let Some(&start) = component.first() else {
        return Err(Error::NotStronglyConnected);
    };
    if component.iter().any(|&v| v >= g.vertex_count()) {
        return Err(Error::NotStronglyConnected);
    }
    let inside = |v: usize| component.contains(&v);

    let mut level = vec![usize::MAX; g.vertex_count()];
    level[start] = 0;
    let mut queue = VecDeque::from([start]);
    while let Some(u) = queue.pop_front() {
        for &v in g.successors(u) {
            if inside(v) && level[v] == usize::MAX {
                level[v] = level[u] + 1;
                queue.push_back(v);
            }
        }
    }
    if component.iter().any(|&v| level[v] == usize::MAX) {
        return Err(Error::NotStronglyConnected);
    }
    // every member must also reach back to start
    let sub = g.induced(component);
    if sub.reversed().reachable_from(0).iter().any(|&r| !r) {
        return Err(Error::NotStronglyConnected);
    }

    let period = g
        .edges()
        .iter()
        .filter(|&&(u, v)| inside(u) && inside(v))
        .map(|&(u, v)| (level[u] + 1).abs_diff(level[v]))
        .fold(0, gcd);
    Ok(period == 1)
}

/// Strongly connected and aperiodic zero pattern.
pub fn is_primitive_graph(m: &Matrix) -> Result<bool> {
    let g = graph_from_matrix(m, 0.0)?;
    if scc(&g).component_count != 1 {
        return Ok(false);
    }
    let all: BTreeSet<usize> = (0..g.vertex_count()).collect();
    is_aperiodic(&g, &all)
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
