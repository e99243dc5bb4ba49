//! Whitehead graphs over the standard basis: construction with per-edge
//! occurrence provenance, connectivity and cut-vertex diagnostics, circle
//! recognition, free-factor extraction, and the scan-length bound.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use num_bigint::BigUint;

use crate::words::{Letter, Multiword};

/// Which occurrence produced an edge: class index in the multiword and
/// position in its cyclic representative.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Provenance {
    pub class: usize,
    pub pos: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WhEdge {
    pub u: Letter,
    pub v: Letter,
    pub prov: Provenance,
}

/// Undirected multigraph on the 2n letters. One edge joins x⁻¹ to y for
/// each occurrence of a consecutive pair x·y in a cyclic word.
#[derive(Clone, Debug)]
pub struct WhGraph {
    rank: usize,
    edges: Vec<WhEdge>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectivityReport {
    pub connected: bool,
    pub components: Vec<Vec<Letter>>,
    pub cut_vertices: Vec<Letter>,
}

impl WhGraph {
    pub fn new(m: &Multiword) -> Self {
        let mut edges = Vec::with_capacity(m.total_len());
        for (ci, class) in m.classes().iter().enumerate() {
            let w = class.rep();
            let len = w.len();
            for p in 0..len {
                let prev = w[(p + len - 1) % len];
                let u = prev.inverse();
                let v = w[p];
                // cyclic reducedness rules out loops
                debug_assert!(u != v);
                edges.push(WhEdge { u, v, prov: Provenance { class: ci, pos: p } });
            }
        }
        WhGraph { rank: m.rank, edges }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn edges(&self) -> &[WhEdge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> Vec<Letter> {
        Letter::alphabet(self.rank)
    }

    pub fn valences(&self) -> BTreeMap<Letter, usize> {
        let mut val: BTreeMap<Letter, usize> = self.vertices().into_iter().map(|l| (l, 0)).collect();
        for e in &self.edges {
            *val.get_mut(&e.u).unwrap() += 1;
            *val.get_mut(&e.v).unwrap() += 1;
        }
        val
    }

    pub fn max_valence(&self) -> usize {
        self.valences().into_values().max().unwrap_or(0)
    }

    fn adjacency(&self) -> BTreeMap<Letter, Vec<(Letter, usize)>> {
        let mut adj: BTreeMap<Letter, Vec<(Letter, usize)>> =
            self.vertices().into_iter().map(|l| (l, Vec::new())).collect();
        for (ei, e) in self.edges.iter().enumerate() {
            adj.get_mut(&e.u).unwrap().push((e.v, ei));
            adj.get_mut(&e.v).unwrap().push((e.u, ei));
        }
        adj
    }

    pub fn connectivity(&self) -> ConnectivityReport {
        let adj = self.adjacency();
        let verts = self.vertices();
        let mut seen: BTreeSet<Letter> = BTreeSet::new();
        let mut components = Vec::new();
        for &start in &verts {
            if seen.contains(&start) {
                continue;
            }
            let mut comp = vec![start];
            seen.insert(start);
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                for &(w, _) in &adj[&v] {
                    if seen.insert(w) {
                        comp.push(w);
                        stack.push(w);
                    }
                }
            }
            comp.sort();
            components.push(comp);
        }
        ConnectivityReport {
            connected: components.len() == 1,
            cut_vertices: self.cut_vertices(&adj),
            components,
        }
    }

    /// Articulation vertices, parallel-edge aware: a doubled edge is a
    /// biconnected block on its own.
    fn cut_vertices(&self, adj: &BTreeMap<Letter, Vec<(Letter, usize)>>) -> Vec<Letter> {
        let verts = self.vertices();
        let idx: BTreeMap<Letter, usize> = verts.iter().enumerate().map(|(i, &l)| (l, i)).collect();
        let n = verts.len();
        let mut num = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut cut = vec![false; n];
        let mut counter = 0usize;
        for root in 0..n {
            if num[root] != usize::MAX {
                continue;
            }
            // iterative dfs: (vertex, entry edge id, child iterator position)
            let mut stack: Vec<(usize, usize, usize)> = vec![(root, usize::MAX, 0)];
            let mut root_children = 0usize;
            num[root] = counter;
            low[root] = counter;
            counter += 1;
            while let Some(&(v, entry, pos)) = stack.last() {
                let nbrs = &adj[&verts[v]];
                if pos < nbrs.len() {
                    stack.last_mut().unwrap().2 += 1;
                    let (wl, ei) = nbrs[pos];
                    if ei == entry {
                        continue; // don't reuse the tree edge; parallels still count
                    }
                    let w = idx[&wl];
                    if num[w] == usize::MAX {
                        num[w] = counter;
                        low[w] = counter;
                        counter += 1;
                        if v == root {
                            root_children += 1;
                        }
                        stack.push((w, ei, 0));
                    } else if num[w] < low[v] {
                        low[v] = num[w];
                    }
                } else {
                    stack.pop();
                    if let Some(&(p, _, _)) = stack.last() {
                        if low[v] < low[p] {
                            low[p] = low[v];
                        }
                        if p != root && low[v] >= num[p] {
                            cut[p] = true;
                        }
                    }
                }
            }
            if root_children >= 2 {
                cut[root] = true;
            }
        }
        verts.into_iter().filter(|l| cut[idx[l]]).collect()
    }

    /// Single cycle through all 2n vertices.
    pub fn is_circle(&self) -> bool {
        let conn = self.connectivity();
        conn.connected && self.valences().values().all(|&v| v == 2)
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph wh {\n");
        for e in &self.edges {
            let _ = writeln!(out, "  {} -- {} [prov=\"w{}:{}\"];", e.u, e.v, e.prov.class, e.prov.pos);
        }
        out.push_str("}\n");
        out
    }
}

/// A free factor read off a disconnected minimal graph: the generator
/// indices it uses and the classes conjugate into it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeFactor {
    pub gens: Vec<usize>,
    pub classes: Vec<crate::words::ConjClass>,
}

/// Partition a multiword with disconnected (minimal) Whitehead graph into
/// free factors. Letters x, x⁻¹ landing in different components would
/// contradict minimality; that is surfaced as VertexSplits.
pub fn free_factors(m: &Multiword) -> crate::error::Result<Vec<FreeFactor>> {
    let g = WhGraph::new(m);
    let conn = g.connectivity();
    // merge each component with its inverse image (unused letters sit in
    // singleton components and pair up here)
    let mut comp_of: BTreeMap<Letter, usize> = BTreeMap::new();
    for (i, comp) in conn.components.iter().enumerate() {
        for &l in comp {
            comp_of.insert(l, i);
        }
    }
    let mut parent: Vec<usize> = (0..conn.components.len()).collect();
    fn find(parent: &mut Vec<usize>, x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        let mut c = x;
        while parent[c] != r {
            let next = parent[c];
            parent[c] = r;
            c = next;
        }
        r
    }
    let used: BTreeSet<Letter> = g.edges().iter().flat_map(|e| [e.u, e.v]).collect();
    for l in g.vertices() {
        let (a, b) = (comp_of[&l], comp_of[&l.inverse()]);
        if used.contains(&l) && a != b && find(&mut parent, a) != find(&mut parent, b) {
            // used letter split from its inverse: not a minimal graph
            return Err(crate::error::Error::VertexSplits);
        }
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra.max(rb)] = ra.min(rb);
        }
    }
    let mut gens_by_root: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    for l in g.vertices() {
        let r = find(&mut parent, comp_of[&l]);
        gens_by_root.entry(r).or_default().insert(l.index());
    }
    let mut factors: Vec<FreeFactor> = gens_by_root
        .into_values()
        .map(|gens| FreeFactor { gens: gens.into_iter().collect(), classes: Vec::new() })
        .collect();
    for class in m.classes() {
        let i0 = class.rep()[0].index();
        let fi = factors
            .iter()
            .position(|f| f.gens.contains(&i0))
            .expect("class letter belongs to some factor");
        // a class may not straddle factors
        if !class.rep().iter().all(|l| factors[fi].gens.contains(&l.index())) {
            return Err(crate::error::Error::VertexSplits);
        }
        factors[fi].classes.push(class.clone());
    }
    Ok(factors)
}

/// Scan length beyond which absence of cut sets certifies rigidity:
/// 1 + (2n)^(Bell(x)+2) with x the maximal valence of the minimal graph.
pub fn candidate_bound(m: &Multiword) -> BigUint {
    let x = WhGraph::new(m).max_valence();
    // Bell triangle
    let mut row = vec![BigUint::from(1u32)];
    for _ in 0..x {
        let mut next = vec![row.last().unwrap().clone()];
        for v in &row {
            let last = next.last().unwrap().clone();
            next.push(last + v);
        }
        row = next;
    }
    let bell = row[0].clone();
    let exp = u32::try_from(bell + 2u32).expect("bell number exponent out of range");
    BigUint::from(2 * m.rank).pow(exp) + 1u32
}
