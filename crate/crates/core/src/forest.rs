//! Facet graphs, rooted spanning forests, the watershed forest of a Morse
//! stack and an exact minimum spanning forest oracle.

use crate::complex::FaceId;
use crate::dsu::DisjointSets;
use crate::error::{Error, Result};
use crate::manifold::require_normal;
use crate::morse::morse_witness;
use crate::stack::{Altitude, Stack};
use crate::watershed::{morse_watershed, Label};

/// Largest vertex count for which [`msf_oracle`] lists every minimum
/// spanning forest.
pub const ENUMERATION_VERTEX_LIMIT: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GraphEdge {
    pub a: usize,
    pub b: usize,
    pub weight: Altitude,
    /// The shared `(d−1)`-face, for facet graphs.
    pub ridge: Option<FaceId>,
}

/// Undirected weighted graph on vertices `0..n`. For a facet graph vertex
/// `i` stands for the `d`-face `faces[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedFacetGraph {
    n: usize,
    faces: Vec<FaceId>,
    edges: Vec<GraphEdge>,
}

impl WeightedFacetGraph {
    /// A plain weighted graph with no faces attached.
    pub fn from_edges(n: usize, edges: &[(usize, usize, Altitude)]) -> Result<Self> {
        let edges = edges
            .iter()
            .map(|&(a, b, weight)| {
                if a >= n || b >= n || a == b {
                    return Err(Error::InvalidArgument(format!("bad edge {a}-{b} on {n} vertices")));
                }
                Ok(GraphEdge {
                    a: a.min(b),
                    b: a.max(b),
                    weight,
                    ridge: None,
                })
            })
            .collect::<Result<_>>()?;
        Ok(WeightedFacetGraph {
            n,
            faces: Vec::new(),
            edges,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[GraphEdge] {
        &self.edges
    }

    /// The `d`-faces behind the vertices; empty for plain graphs.
    pub fn faces(&self) -> &[FaceId] {
        &self.faces
    }

    pub fn vertex_of(&self, f: FaceId) -> Option<usize> {
        let first = *self.faces.first()?;
        let i = f.index().checked_sub(first.index())?;
        (i < self.faces.len()).then_some(i)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.a == v || e.b == v).count()
    }

    fn weight_of(&self, edges: &[usize]) -> Altitude {
        edges.iter().map(|&e| self.edges[e].weight).sum()
    }
}

/// Dual graph of the host: `d`-faces joined through shared `(d−1)`-faces,
/// weighted by the altitude of the shared face.
pub fn build_facet_graph(stack: &Stack) -> Result<WeightedFacetGraph> {
    let d = require_normal(stack.host())?;
    let host = stack.host();
    let faces: Vec<FaceId> = host.faces_of_dim(d).collect();
    let first = faces[0].index();
    let edges = host
        .faces_of_dim(d - 1)
        .map(|r| {
            let c = host.cofaces(r);
            GraphEdge {
                a: c[0].index() - first,
                b: c[1].index() - first,
                weight: stack.altitude(r),
                ridge: Some(r),
            }
        })
        .collect();
    Ok(WeightedFacetGraph {
        n: faces.len(),
        faces,
        edges,
    })
}

/// A subgraph given by edge indices into a [`WeightedFacetGraph`], with a
/// root set. Spans every vertex of the graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Forest {
    /// Sorted edge indices.
    pub edges: Vec<usize>,
    /// Sorted root vertices.
    pub roots: Vec<usize>,
}

impl Forest {
    pub fn weight(&self, graph: &WeightedFacetGraph) -> Altitude {
        graph.weight_of(&self.edges)
    }

    /// Root of the tree holding each vertex, `None` for vertices in a tree
    /// without root.
    pub fn tree_roots(&self, graph: &WeightedFacetGraph) -> Vec<Option<usize>> {
        let mut dsu = DisjointSets::new(graph.n);
        for &e in &self.edges {
            let ge = graph.edges[e];
            dsu.union(ge.a, ge.b);
        }
        let mut root_of = vec![None; graph.n];
        for &r in &self.roots {
            let c = dsu.find(r);
            root_of[c] = Some(r);
        }
        (0..graph.n).map(|v| root_of[dsu.find(v)]).collect()
    }

    pub fn is_rooted(&self, graph: &WeightedFacetGraph) -> bool {
        let pairs: Vec<(usize, usize)> = self
            .edges
            .iter()
            .map(|&e| (graph.edges[e].a, graph.edges[e].b))
            .collect();
        is_rooted_forest(graph.n, &pairs, &self.roots)
    }
}

/// Leaf peeling: repeatedly drop a non-root vertex of degree one with its
/// edge. Accepts iff exactly the roots remain, with no edges.
pub fn is_rooted_forest(n: usize, edges: &[(usize, usize)], roots: &[usize]) -> bool {
    let mut is_root = vec![false; n];
    for &r in roots {
        if r >= n {
            return false;
        }
        is_root[r] = true;
    }
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, &(a, b)) in edges.iter().enumerate() {
        incident[a].push(i);
        incident[b].push(i);
    }
    let mut degree: Vec<usize> = incident.iter().map(Vec::len).collect();
    let mut edge_alive = vec![true; edges.len()];
    let mut vertex_alive = vec![true; n];
    let mut leaves: Vec<usize> = (0..n).filter(|&v| !is_root[v] && degree[v] == 1).collect();
    while let Some(v) = leaves.pop() {
        if !vertex_alive[v] || degree[v] != 1 {
            continue;
        }
        let e = *incident[v].iter().find(|&&e| edge_alive[e]).expect("degree one");
        edge_alive[e] = false;
        vertex_alive[v] = false;
        let (a, b) = edges[e];
        let u = if a == v { b } else { a };
        degree[v] = 0;
        degree[u] -= 1;
        if !is_root[u] && degree[u] == 1 {
            leaves.push(u);
        }
    }
    !edge_alive.iter().any(|&a| a) && (0..n).all(|v| vertex_alive[v] == is_root[v])
}

fn require_morse(stack: &Stack) -> Result<()> {
    match morse_witness(stack) {
        Some(f) => Err(Error::NotMorse(stack.host().face(f).clone())),
        None => Ok(()),
    }
}

/// Dual edges `{x, y}` such that `(x, x∩y)` is differential and
/// `(x∩y, y)` is flat, in one direction or the other; rooted at the minima.
pub fn watershed_forest(stack: &Stack) -> Result<(WeightedFacetGraph, Forest)> {
    require_morse(stack)?;
    let graph = build_facet_graph(stack)?;
    let alt = |v: usize| stack.altitude(graph.faces[v]);
    let couple = |x: usize, w: Altitude, y: usize| alt(x) < w && w == alt(y);
    let edges = graph
        .edges
        .iter()
        .enumerate()
        .filter(|(_, e)| couple(e.a, e.weight, e.b) || couple(e.b, e.weight, e.a))
        .map(|(i, _)| i)
        .collect();
    let host = stack.host();
    let roots = (0..graph.n)
        .filter(|&v| {
            let x = graph.faces[v];
            host.boundary(x).iter().all(|&z| stack.altitude(z) != stack.altitude(x))
        })
        .collect();
    Ok((graph, Forest { edges, roots }))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MsfOracle {
    pub weight: Altitude,
    /// One minimum spanning forest found by the greedy run.
    pub greedy: Forest,
    /// No other forest reaches the minimum weight.
    pub unique: bool,
    /// Every minimum spanning forest, when the graph is small enough.
    pub all: Option<Vec<Forest>>,
}

/// Minimum spanning forests rooted at `roots`.
///
/// Roots are merged into one vertex, which turns the problem into a minimum
/// spanning tree. The greedy pass also decides uniqueness exactly: the
/// tree is unique iff, inside every weight class, the edges still joining
/// distinct components form a forest over those components.
pub fn msf_oracle(graph: &WeightedFacetGraph, roots: &[usize]) -> Result<MsfOracle> {
    if roots.is_empty() {
        return Err(Error::NoRoots);
    }
    let mut roots = roots.to_vec();
    roots.sort_unstable();
    roots.dedup();
    let n = graph.n;
    let fresh = || {
        let mut dsu = DisjointSets::new(n);
        for w in roots.windows(2) {
            dsu.union(w[0], w[1]);
        }
        dsu
    };
    let mut order: Vec<usize> = (0..graph.edges.len()).collect();
    order.sort_by_key(|&e| (graph.edges[e].weight, e));

    let mut dsu = fresh();
    let mut chosen = Vec::new();
    let mut unique = true;
    let mut i = 0;
    while i < order.len() {
        let w = graph.edges[order[i]].weight;
        let mut j = i;
        while j < order.len() && graph.edges[order[j]].weight == w {
            j += 1;
        }
        let candidates: Vec<usize> = order[i..j]
            .iter()
            .copied()
            .filter(|&e| dsu.find(graph.edges[e].a) != dsu.find(graph.edges[e].b))
            .collect();
        for e in candidates {
            let ge = graph.edges[e];
            if dsu.union(ge.a, ge.b) {
                chosen.push(e);
            } else {
                unique = false;
            }
        }
        i = j;
    }
    let components = {
        let r = dsu.find(roots[0]);
        (0..n).all(|v| dsu.find(v) == r)
    };
    if !components {
        return Err(Error::Disconnected);
    }
    chosen.sort_unstable();
    let greedy = Forest {
        edges: chosen,
        roots: roots.clone(),
    };
    let weight = greedy.weight(graph);

    let all = (n <= ENUMERATION_VERTEX_LIMIT).then(|| {
        let need = greedy.edges.len();
        let usable: Vec<usize> = (0..graph.edges.len())
            .filter(|&e| {
                let ge = graph.edges[e];
                !(roots.binary_search(&ge.a).is_ok() && roots.binary_search(&ge.b).is_ok())
            })
            .collect();
        let mut found = Vec::new();
        let mut pick = Vec::new();
        enumerate(graph, &usable, 0, need, weight, &mut pick, &fresh, &mut found);
        found
            .into_iter()
            .map(|edges| Forest {
                edges,
                roots: roots.clone(),
            })
            .collect()
    });

    Ok(MsfOracle {
        weight,
        greedy,
        unique,
        all,
    })
}

#[allow(clippy::too_many_arguments)]
fn enumerate(
    graph: &WeightedFacetGraph,
    usable: &[usize],
    from: usize,
    need: usize,
    target: Altitude,
    pick: &mut Vec<usize>,
    fresh: &dyn Fn() -> DisjointSets,
    found: &mut Vec<Vec<usize>>,
) {
    if pick.len() == need {
        if graph.weight_of(pick) != target {
            return;
        }
        let mut dsu = fresh();
        if pick.iter().all(|&e| dsu.union(graph.edges[e].a, graph.edges[e].b)) {
            found.push(pick.clone());
        }
        return;
    }
    if usable.len() - from < need - pick.len() {
        return;
    }
    for k in from..usable.len() {
        pick.push(usable[k]);
        enumerate(graph, usable, k + 1, need, target, pick, fresh, found);
        pick.pop();
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MsfVerdict {
    pub forest_weight: Altitude,
    pub oracle_weight: Altitude,
    /// The watershed forest passes the leaf-peeling test at the minima.
    pub rooted: bool,
    /// The greedy oracle found no competing forest.
    pub unique: bool,
    /// The enumerated set of minimum forests is exactly the watershed
    /// forest; `None` above the enumeration bound.
    pub enumerated_singleton: Option<bool>,
    /// Each tree spans exactly the `d`-faces of one basin.
    pub basins_match: bool,
    /// Each forest edge is the unique lightest dual edge at one of its ends.
    pub lightest_edges: bool,
}

impl MsfVerdict {
    pub fn passed(&self) -> bool {
        self.forest_weight == self.oracle_weight
            && self.rooted
            && self.unique
            && self.enumerated_singleton != Some(false)
            && self.basins_match
            && self.lightest_edges
    }
}

/// Checks that the watershed forest is the unique minimum spanning forest
/// rooted at the minima, and that its trees are the basins.
pub fn verify_msf_theorem(stack: &Stack) -> Result<MsfVerdict> {
    let (graph, forest) = watershed_forest(stack)?;
    let oracle = msf_oracle(&graph, &forest.roots)?;
    let enumerated_singleton = oracle.all.as_ref().map(|all| all.len() == 1 && all[0] == forest);

    let ws = morse_watershed(stack)?;
    let tree_roots = forest.tree_roots(&graph);
    let basins_match = (0..graph.n).all(|v| match (tree_roots[v], ws.label(graph.faces[v])) {
        (Some(r), Label::Basin(b)) => ws.label(graph.faces[r]) == Label::Basin(b),
        _ => false,
    });

    let lightest = |v: usize, e: usize| {
        let w = graph.edges[e].weight;
        graph
            .edges
            .iter()
            .enumerate()
            .filter(|(_, g)| g.a == v || g.b == v)
            .all(|(i, g)| i == e || g.weight > w)
    };
    let lightest_edges = forest.edges.iter().all(|&e| {
        let ge = graph.edges[e];
        lightest(ge.a, e) || lightest(ge.b, e)
    });

    Ok(MsfVerdict {
        forest_weight: forest.weight(&graph),
        oracle_weight: oracle.weight,
        rooted: forest.is_rooted(&graph),
        unique: oracle.unique,
        enumerated_singleton,
        basins_match,
        lightest_edges,
    })
}
