use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gates::Core;

/// Which endpoint of an edge may be driven into `|2>` by the native gate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Host2 {
    A,
    B,
    Either,
}

/// Undirected coupling edge with `a < b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    pub host2: Host2,
}

/// Connected undirected coupling graph over qutrits `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CouplingMap {
    n: usize,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct MapFile {
    n: usize,
    edges: Vec<Edge>,
}

const ASPEN_LIKE: &str = include_str!("../../data/aspen-like.json");

impl CouplingMap {
    /// Validates and canonicalizes an edge list. Edges given as `a > b` are
    /// flipped (with `host2` following its endpoint).
    pub fn new(n: usize, edges: Vec<Edge>) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("n", "coupling map needs at least one qutrit"));
        }
        let mut canon = Vec::with_capacity(edges.len());
        for (i, e) in edges.into_iter().enumerate() {
            let field = |f: &str| format!("edges[{i}].{f}");
            if e.a >= n {
                return Err(Error::invalid(field("a"), format!("{} out of range 0..{n}", e.a)));
            }
            if e.b >= n {
                return Err(Error::invalid(field("b"), format!("{} out of range 0..{n}", e.b)));
            }
            if e.a == e.b {
                return Err(Error::invalid(field("b"), format!("self edge on {}", e.a)));
            }
            canon.push(if e.a < e.b {
                e
            } else {
                Edge {
                    a: e.b,
                    b: e.a,
                    host2: match e.host2 {
                        Host2::A => Host2::B,
                        Host2::B => Host2::A,
                        Host2::Either => Host2::Either,
                    },
                }
            });
        }
        canon.sort_by_key(|e| (e.a, e.b));
        if let Some(w) = canon.windows(2).find(|w| (w[0].a, w[0].b) == (w[1].a, w[1].b)) {
            return Err(Error::invalid(
                "edges",
                format!("duplicate edge ({}, {})", w[0].a, w[0].b),
            ));
        }
        let mut adjacency = vec![Vec::new(); n];
        for e in &canon {
            adjacency[e.a].push(e.b);
            adjacency[e.b].push(e.a);
        }
        for adj in &mut adjacency {
            adj.sort_unstable();
        }
        let map = CouplingMap {
            n,
            edges: canon,
            adjacency,
        };
        let all: Vec<usize> = (0..n).collect();
        if map.component_size(&all, 0) != n {
            return Err(Error::Disconnected(all));
        }
        Ok(map)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: MapFile = serde_json::from_str(text)?;
        CouplingMap::new(file.n, file.edges)
    }

    /// Canonical serialization: edges sorted, `a < b`.
    pub fn to_json(&self) -> String {
        let file = MapFile {
            n: self.n,
            edges: self.edges.clone(),
        };
        let mut s = serde_json::to_string_pretty(&file).expect("map serializes");
        s.push('\n');
        s
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn neighbors(&self, q: usize) -> &[usize] {
        &self.adjacency[q]
    }

    pub fn edge(&self, p: usize, q: usize) -> Option<&Edge> {
        let (a, b) = if p < q { (p, q) } else { (q, p) };
        self.edges
            .binary_search_by_key(&(a, b), |e| (e.a, e.b))
            .ok()
            .map(|i| &self.edges[i])
    }

    pub fn has_edge(&self, p: usize, q: usize) -> bool {
        self.edge(p, q).is_some()
    }

    /// Native core for `U_{parent -> child}` on this edge: the `20` core when
    /// the parent is the endpoint that may occupy `|2>`, the `02` core
    /// otherwise.
    pub fn edge_variant(&self, parent: usize, child: usize) -> Result<Core> {
        let e = self
            .edge(parent, child)
            .ok_or(Error::MissingEdge { a: parent, b: child })?;
        let host = match e.host2 {
            Host2::A => Some(e.a),
            Host2::B => Some(e.b),
            Host2::Either => None,
        };
        Ok(if host == Some(parent) {
            Core::Iswap20
        } else {
            Core::Iswap02
        })
    }

    /// Size of the component of `start` in the subgraph induced by `nodes`.
    pub(crate) fn component_size(&self, nodes: &[usize], start: usize) -> usize {
        let mut member = vec![false; self.n];
        for &q in nodes {
            member[q] = true;
        }
        let mut seen = vec![false; self.n];
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        let mut count = 0;
        while let Some(q) = queue.pop_front() {
            count += 1;
            for &r in &self.adjacency[q] {
                if member[r] && !seen[r] {
                    seen[r] = true;
                    queue.push_back(r);
                }
            }
        }
        count
    }

    pub fn path(n: usize) -> Self {
        let edges = (1..n)
            .map(|i| Edge {
                a: i - 1,
                b: i,
                host2: Host2::Either,
            })
            .collect();
        CouplingMap::new(n, edges).expect("path is connected")
    }

    /// Star with center `0`.
    pub fn star(n: usize) -> Self {
        let edges = (1..n)
            .map(|i| Edge {
                a: 0,
                b: i,
                host2: Host2::Either,
            })
            .collect();
        CouplingMap::new(n, edges).expect("star is connected")
    }

    /// Complete `k`-ary tree of the given height, nodes numbered in
    /// breadth-first order (node `i` has children `k*i + 1 ..= k*i + k`).
    pub fn complete_tree(k: usize, height: usize) -> Self {
        let n = (0..=height).map(|d| k.pow(d as u32)).sum();
        let edges = (1..n)
            .map(|i| Edge {
                a: (i - 1) / k,
                b: i,
                host2: Host2::Either,
            })
            .collect();
        CouplingMap::new(n, edges).expect("tree is connected")
    }

    /// Random connected map: a random spanning tree plus each remaining pair
    /// with probability `extra`, every edge with a random `host2`.
    pub fn random<R: Rng + ?Sized>(n: usize, extra: f64, rng: &mut R) -> Self {
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);
        let host = |rng: &mut R| match rng.gen_range(0..3) {
            0 => Host2::A,
            1 => Host2::B,
            _ => Host2::Either,
        };
        let mut edges = Vec::new();
        for i in 1..n {
            let j = rng.gen_range(0..i);
            let (a, b) = (order[i].min(order[j]), order[i].max(order[j]));
            edges.push(Edge { a, b, host2: host(rng) });
        }
        for a in 0..n {
            for b in a + 1..n {
                if !edges.iter().any(|e| e.a == a && e.b == b) && rng.gen_bool(extra) {
                    edges.push(Edge { a, b, host2: host(rng) });
                }
            }
        }
        CouplingMap::new(n, edges).expect("spanning tree keeps the map connected")
    }

    /// 32-qutrit octagonal lattice (four 8-rings in a row, neighbouring rings
    /// joined by two rungs) with fixed `host2` annotations.
    pub fn aspen_like() -> Self {
        CouplingMap::from_json(ASPEN_LIKE).expect("shipped preset is valid")
    }
}
