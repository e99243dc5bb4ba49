//! Stallings graphs: folding, canonical numbering, basis extraction,
//! membership, rewriting in a basis, finite-index lifts, and the reading
//! cycles that drive induced multiwords.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::words::{concat_reduce, format_word, free_reduce, inverse_word, ConjClass, Letter, Multiword, Word};

/// How a traced transition contributes to an expression over the basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum EdgeCode {
    Tree,
    Basis(usize, bool), // index, forward?
}

/// Folded labeled graph with basepoint 0, canonically numbered by BFS in
/// letter order. Loops at the basepoint read exactly the subgroup.
#[derive(Clone, Debug)]
pub struct SubgroupGraph {
    rank: usize,
    trans: Vec<BTreeMap<Letter, usize>>,
    paths: Vec<Word>,
    basis: Vec<Word>,
    codes: Vec<BTreeMap<Letter, EdgeCode>>,
}

impl SubgroupGraph {
    pub fn new(rank: usize, gens: &[Word]) -> SubgroupGraph {
        // raw graph with union-find folding
        let mut parent: Vec<usize> = vec![0];
        let mut trans: Vec<BTreeMap<Letter, usize>> = vec![BTreeMap::new()];
        fn find(parent: &mut Vec<usize>, x: usize) -> usize {
            let mut r = x;
            while parent[r] != r {
                r = parent[r];
            }
            let mut c = x;
            while parent[c] != r {
                let n = parent[c];
                parent[c] = r;
                c = n;
            }
            r
        }
        let mut pending: Vec<(usize, usize)> = Vec::new();
        let add = |trans: &mut Vec<BTreeMap<Letter, usize>>,
                   pending: &mut Vec<(usize, usize)>,
                   u: usize,
                   x: Letter,
                   v: usize| {
            for (s, l, t) in [(u, x, v), (v, x.inverse(), u)] {
                match trans[s].get(&l) {
                    Some(&t0) if t0 != t => pending.push((t0, t)),
                    Some(_) => {}
                    None => {
                        trans[s].insert(l, t);
                    }
                }
            }
        };
        for g in gens {
            let w = free_reduce(g);
            let mut cur = 0usize;
            for (i, &x) in w.iter().enumerate() {
                let next = if i + 1 == w.len() {
                    0
                } else {
                    parent.push(parent.len());
                    trans.push(BTreeMap::new());
                    parent.len() - 1
                };
                add(&mut trans, &mut pending, cur, x, next);
                cur = next;
            }
        }
        // fold: merge queued vertex pairs, small map into large
        while let Some((a, b)) = pending.pop() {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra == rb {
                continue;
            }
            let (keep, drop) = if trans[ra].len() >= trans[rb].len() { (ra, rb) } else { (rb, ra) };
            parent[drop] = keep;
            let moved = std::mem::take(&mut trans[drop]);
            for (l, t) in moved {
                match trans[keep].get(&l) {
                    Some(&t0) if find(&mut parent, t0) != find(&mut parent, t) => pending.push((t0, t)),
                    Some(_) => {}
                    None => {
                        trans[keep].insert(l, t);
                    }
                }
            }
        }
        // canonical BFS renumber from the basepoint
        let root = find(&mut parent, 0);
        let mut number: BTreeMap<usize, usize> = BTreeMap::new();
        number.insert(root, 0);
        let mut order = vec![root];
        let mut paths: Vec<Word> = vec![Vec::new()];
        let mut tree: Vec<Option<(usize, Letter)>> = vec![None]; // child -> (parent, letter)
        let alphabet = Letter::alphabet(rank);
        let mut qi = 0;
        while qi < order.len() {
            let v = order[qi];
            qi += 1;
            for &l in &alphabet {
                let t = match trans[v].get(&l) {
                    Some(&t) => find(&mut parent, t),
                    None => continue,
                };
                if !number.contains_key(&t) {
                    let id = order.len();
                    number.insert(t, id);
                    order.push(t);
                    let mut p = paths[number[&v]].clone();
                    p.push(l);
                    paths.push(p);
                    tree.push(Some((number[&v], l)));
                }
            }
        }
        let n = order.len();
        let mut ctrans: Vec<BTreeMap<Letter, usize>> = vec![BTreeMap::new(); n];
        for (id, &raw) in order.iter().enumerate() {
            for (&l, &t) in &trans[raw] {
                ctrans[id].insert(l, number[&find(&mut parent, t)]);
            }
        }
        // basis from non-tree edges, one per positive-letter orientation
        let mut codes: Vec<BTreeMap<Letter, EdgeCode>> = vec![BTreeMap::new(); n];
        for (child, te) in tree.iter().enumerate() {
            if let Some((par, l)) = *te {
                codes[par].insert(l, EdgeCode::Tree);
                codes[child].insert(l.inverse(), EdgeCode::Tree);
            }
        }
        let mut basis = Vec::new();
        for u in 0..n {
            for (&l, &v) in &ctrans[u] {
                if !l.is_positive() || codes[u].contains_key(&l) {
                    continue;
                }
                // avoid double-listing a non-tree edge from its far end
                if codes[v].get(&l.inverse()).is_some() {
                    continue;
                }
                let i = basis.len();
                codes[u].insert(l, EdgeCode::Basis(i, true));
                codes[v].insert(l.inverse(), EdgeCode::Basis(i, false));
                let mut w = paths[u].clone();
                w.push(l);
                basis.push(concat_reduce(&w, &inverse_word(&paths[v])));
            }
        }
        SubgroupGraph { rank, trans: ctrans, paths, basis, codes }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn vertex_count(&self) -> usize {
        self.trans.len()
    }

    pub fn basis(&self) -> &[Word] {
        &self.basis
    }

    /// Tree path from the basepoint; these are the coset representatives.
    pub fn path(&self, v: usize) -> &Word {
        &self.paths[v]
    }

    pub fn step(&self, v: usize, x: Letter) -> Option<usize> {
        self.trans[v].get(&x).copied()
    }

    pub fn trace(&self, from: usize, w: &[Letter]) -> Option<usize> {
        let mut v = from;
        for &x in w {
            v = self.step(v, x)?;
        }
        Some(v)
    }

    /// Finite index = vertex count when every vertex is complete.
    pub fn index(&self) -> Option<usize> {
        if self.trans.iter().all(|t| t.len() == 2 * self.rank) {
            Some(self.trans.len())
        } else {
            None
        }
    }

    pub fn contains(&self, w: &[Letter]) -> bool {
        self.trace(0, &free_reduce(w)) == Some(0)
    }

    /// Some conjugate of the class lies in the subgroup.
    pub fn contains_conjugate(&self, class: &ConjClass) -> bool {
        (0..self.vertex_count()).any(|v| self.trace(v, class.rep()) == Some(v))
    }

    /// Rewrite a member over the basis alphabet (letter i+1 = basis[i]).
    pub fn express(&self, w: &[Letter]) -> Result<Word> {
        let w = free_reduce(w);
        let mut v = 0usize;
        let mut out: Word = Vec::new();
        for &x in &w {
            let t = self
                .step(v, x)
                .ok_or_else(|| Error::NotInSubgroup(format_word(&w, self.rank)))?;
            match self.codes[v].get(&x) {
                Some(EdgeCode::Tree) => {}
                Some(EdgeCode::Basis(i, fwd)) => {
                    out.push(Letter::from_index(i + 1, *fwd));
                }
                None => unreachable!("every edge is coded"),
            }
            v = t;
        }
        if v != 0 {
            return Err(Error::NotInSubgroup(format_word(&w, self.rank)));
        }
        Ok(free_reduce(&out))
    }

    /// Substitute basis words back for basis letters.
    pub fn unexpress(&self, w: &[Letter]) -> Word {
        let mut out: Word = Vec::new();
        for &x in w {
            let b = &self.basis[x.index() - 1];
            let piece = if x.is_positive() { b.clone() } else { inverse_word(b) };
            out = concat_reduce(&out, &piece);
        }
        out
    }

    /// Cycles of the partial map v ↦ endpoint of w read from v. Each cycle
    /// (start vertex, period a) carries the subgroup class of
    /// path(v)·w^a·path(v)⁻¹; distinct cycles give non-conjugate classes,
    /// and together they exhaust the conjugates of powers of w in the
    /// subgroup.
    pub fn reading_cycles(&self, w: &[Letter]) -> Vec<(usize, usize)> {
        let n = self.vertex_count();
        let sigma: Vec<Option<usize>> = (0..n).map(|v| self.trace(v, w)).collect();
        let mut state = vec![0u8; n]; // 0 unseen, 1 on stack, 2 done
        let mut cycles = Vec::new();
        for s in 0..n {
            if state[s] != 0 {
                continue;
            }
            let mut chain = Vec::new();
            let mut v = s;
            loop {
                if state[v] == 1 {
                    // found a new cycle; v is its entry point
                    let pos = chain.iter().position(|&u| u == v).unwrap();
                    let cycle = &chain[pos..];
                    cycles.push((*cycle.iter().min().unwrap(), cycle.len()));
                    break;
                }
                if state[v] == 2 {
                    break;
                }
                state[v] = 1;
                chain.push(v);
                match sigma[v] {
                    Some(next) => v = next,
                    None => break,
                }
            }
            for &u in &chain {
                state[u] = 2;
            }
        }
        cycles.sort();
        cycles
    }

    /// The subgroup classes of conjugate powers of a word, over the basis
    /// alphabet, one per reading cycle (not yet canonicalized). The word is
    /// traced literally, so the expression of w^a starts at the cycle's
    /// smallest vertex with w's own phase.
    pub fn induced_words(&self, w: &[Letter]) -> Vec<Word> {
        self.reading_cycles(w)
            .into_iter()
            .map(|(v, a)| {
                let mut expr: Word = Vec::new();
                let mut cur = v;
                for _ in 0..a {
                    for &x in w {
                        match self.codes[cur].get(&x) {
                            Some(EdgeCode::Tree) => {}
                            Some(EdgeCode::Basis(i, fwd)) => expr.push(Letter::from_index(i + 1, *fwd)),
                            None => unreachable!("cycle stays inside the graph"),
                        }
                        cur = self.step(cur, x).expect("cycle stays inside the graph");
                    }
                }
                debug_assert_eq!(cur, v);
                free_reduce(&expr)
            })
            .collect()
    }

    /// Finite-index lift: coset-by-coset minimal powers, one class per
    /// reading cycle, assembled into a multiword over the basis.
    pub fn lift_multiword(&self, m: &Multiword) -> Result<Multiword> {
        if self.index().is_none() {
            return Err(Error::InfiniteIndex);
        }
        let mut words = Vec::new();
        for class in m.classes() {
            words.extend(self.induced_words(class.rep()));
        }
        Multiword::new(self.basis.len(), &words)
    }
}

/// Nielsen reduction with tracked expressions: rewrite canonical basis
/// letters as words over a user-supplied generating tuple, provided that
/// tuple is itself a free basis of the subgroup. Returns the substitution
/// table: canonical letter i+1 ↦ table[i] over the user alphabet.
pub fn rebase_table(h: &SubgroupGraph, user: &[Word]) -> Result<Vec<Word>> {
    let r = h.basis().len();
    if user.len() != r {
        return Err(Error::NotAGeneratingTuple);
    }
    // pairs (word over canonical letters, word over user letters)
    let mut tuple: Vec<(Word, Word)> = Vec::with_capacity(r);
    for (i, u) in user.iter().enumerate() {
        tuple.push((h.express(u)?, vec![Letter::from_index(i + 1, true)]));
    }

    fn total(t: &[(Word, Word)]) -> usize {
        t.iter().map(|(c, _)| c.len()).sum()
    }
    fn moves(t: &[(Word, Word)]) -> Vec<(usize, usize, bool, bool)> {
        // (i, j, invert j, left?) — replace t_i by t_i·t_j^± or t_j^±·t_i
        let mut out = Vec::new();
        for i in 0..t.len() {
            for j in 0..t.len() {
                if i != j {
                    for inv in [false, true] {
                        for left in [false, true] {
                            out.push((i, j, inv, left));
                        }
                    }
                }
            }
        }
        out
    }
    fn apply(t: &[(Word, Word)], mv: (usize, usize, bool, bool)) -> Vec<(Word, Word)> {
        let (i, j, inv, left) = mv;
        let mut next = t.to_vec();
        let (cj, uj) = if inv {
            (inverse_word(&t[j].0), inverse_word(&t[j].1))
        } else {
            (t[j].0.clone(), t[j].1.clone())
        };
        next[i] = if left {
            (concat_reduce(&cj, &t[i].0), concat_reduce(&uj, &t[i].1))
        } else {
            (concat_reduce(&t[i].0, &cj), concat_reduce(&t[i].1, &uj))
        };
        next
    }
    fn is_signed_perm(t: &[(Word, Word)]) -> bool {
        let mut seen = vec![false; t.len()];
        for (c, _) in t {
            if c.len() != 1 {
                return false;
            }
            let k = c[0].index() - 1;
            if k >= seen.len() || seen[k] {
                return false;
            }
            seen[k] = true;
        }
        true
    }

    let mut visited: std::collections::BTreeSet<Vec<Word>> = std::collections::BTreeSet::new();
    'outer: while !is_signed_perm(&tuple) {
        let cur = total(&tuple);
        for mv in moves(&tuple) {
            let next = apply(&tuple, mv);
            if total(&next) < cur {
                tuple = next;
                continue 'outer;
            }
        }
        // plateau: breadth-first over length-preserving moves
        let key = |t: &[(Word, Word)]| t.iter().map(|(c, _)| c.clone()).collect::<Vec<_>>();
        visited.clear();
        visited.insert(key(&tuple));
        let mut frontier = vec![tuple.clone()];
        let mut found = None;
        'search: while let Some(state) = frontier.pop() {
            for mv in moves(&state) {
                let next = apply(&state, mv);
                let tn = total(&next);
                if tn < cur {
                    found = Some(next);
                    break 'search;
                }
                if tn == cur && visited.len() < 10_000 && visited.insert(key(&next)) {
                    frontier.push(next);
                }
            }
        }
        match found {
            Some(next) => tuple = next,
            None => {
                if is_signed_perm(&tuple) {
                    break;
                }
                return Err(Error::NotAGeneratingTuple);
            }
        }
    }

    let mut table: Vec<Word> = vec![Vec::new(); r];
    for (c, u) in &tuple {
        let x = c[0];
        table[x.index() - 1] = if x.is_positive() { u.clone() } else { inverse_word(u) };
    }
    Ok(table)
}

/// Apply a rebase table to a word over the canonical basis alphabet.
pub fn rewrite_with_table(table: &[Word], w: &[Letter]) -> Word {
    let mut out: Word = Vec::new();
    for &x in w {
        let t = &table[x.index() - 1];
        let piece = if x.is_positive() { t.clone() } else { inverse_word(t) };
        out = concat_reduce(&out, &piece);
    }
    out
}
