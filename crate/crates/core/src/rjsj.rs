//! The relative cyclic decomposition: select a non-crossing collection of
//! cut sets, compute piece stabilizers germ by germ, assemble the graph of
//! groups, classify pieces, and verify the result against the input.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

use crate::axes::{
    classify_cutset, crosses, crossing_candidates, scan_candidates, CutContext, CutKind, CutSet,
    EndpointLabel, Located,
};
use crate::error::{Error, Result};
use crate::subgroups::SubgroupGraph;
use crate::whgraph::{free_factors, WhGraph};
use crate::words::{
    concat_reduce, conjugate, cyclic_reduce, format_word, free_reduce, inverse_word, minimize,
    ConjClass, Letter, Multiword, Word,
};

/// Knobs for the decomposition search.
#[derive(Clone, Debug)]
pub struct RjsjConfig {
    /// Scan length for the cut-set search.
    pub max_len: usize,
    /// Cap on the stabilizer search radius. `None` derives one from the
    /// scan length and the collection, overridable through the
    /// `JSJ_MAX_STABILIZER_LEN` environment variable.
    pub stab_cap: Option<usize>,
}

impl Default for RjsjConfig {
    fn default() -> Self {
        RjsjConfig { max_len: 12, stab_cap: None }
    }
}

/// How a piece sits in the decomposition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Classification {
    /// No essential cut set survives inside the piece.
    Rigid { certified: bool },
    /// The induced multiword traces a circle: the piece carries a surface
    /// with the induced classes as boundary.
    QHSurface,
    /// A cut set survives inside the piece; `witness` is its class in
    /// ambient coordinates, ready to refine the collection.
    Undetermined { witness: ConjClass },
}

/// Vertex carrying one cyclic subgroup, i.e. one collection member.
#[derive(Clone, Debug)]
pub struct CyclicVertex {
    pub id: usize,
    pub root: ConjClass,
    pub in_multiword: bool,
}

/// Vertex carrying a piece stabilizer.
#[derive(Clone, Debug)]
pub struct NoncyclicVertex {
    pub id: usize,
    /// Conjugacy-canonical free basis of the stabilizer, in ambient letters.
    pub basis: Vec<Word>,
    /// Induced multiword over the basis alphabet: traces of the input
    /// classes plus the incident edge images.
    pub induced: Multiword,
    pub classification: Option<Classification>,
}

/// Edge between a cyclic vertex and a piece.
#[derive(Clone, Debug)]
pub struct GoGEdge {
    pub cyclic: usize,
    pub noncyclic: usize,
    /// Index of the edge group inside the cyclic vertex group.
    pub degree: u64,
    /// Ambient element generating the edge group inside the piece; it lies
    /// in the subgroup spanned by the piece basis.
    pub elem: Word,
    /// The same element expressed over the piece basis, as a class.
    pub image: ConjClass,
}

/// Bipartite graph of groups: cyclic vertices 0..k, pieces k..k+j.
#[derive(Clone, Debug)]
pub struct GraphOfGroups {
    pub rank: usize,
    pub cyclic_vertices: Vec<CyclicVertex>,
    pub noncyclic_vertices: Vec<NoncyclicVertex>,
    pub edges: Vec<GoGEdge>,
    /// True when nothing splits: a single piece and no cyclic vertices.
    pub trivial: bool,
}

/// What the decomposition reduces to.
#[derive(Clone, Debug)]
pub enum RjsjOutcome {
    Rigid,
    QHSurface,
    Decomposition(GraphOfGroups),
}

#[derive(Clone, Debug)]
pub struct RjsjResult {
    pub outcome: RjsjOutcome,
    /// Whether the scan length met the bound that makes the answer final.
    pub certified: bool,
    pub scan_length: usize,
}

/// Outcome of the structural audit of a decomposition.
#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub pass: bool,
    pub violations: Vec<String>,
}

// ---------------------------------------------------------------------------
// collection selection

/// Keep the cut sets that can all coexist: every cut point, every pair with
/// at least three complementary components, and the two-component pairs
/// crossed by no translate of any two-component pair (itself included).
pub fn select_uncrossed(m: &Multiword, cutsets: &[CutSet]) -> Result<Vec<CutSet>> {
    let pairs2: Vec<&CutSet> = cutsets
        .iter()
        .filter(|c| c.kind == CutKind::CutPair && c.total_components == 2)
        .collect();
    let mut keep = Vec::new();
    for c in cutsets {
        match c.kind {
            CutKind::NotCut => {}
            CutKind::CutPoint => keep.push(c.clone()),
            CutKind::CutPair => {
                if c.total_components >= 3 {
                    keep.push(c.clone());
                    continue;
                }
                let mut crossed = false;
                'scan: for t in &pairs2 {
                    for h in crossing_candidates(m, &c.root, &t.root) {
                        if crosses(m, &c.root, &h)? {
                            crossed = true;
                            break 'scan;
                        }
                    }
                }
                if !crossed {
                    keep.push(c.clone());
                }
            }
        }
    }
    Ok(keep)
}

// ---------------------------------------------------------------------------
// word helpers

fn enumerate_words(rank: usize, len: usize) -> Vec<Word> {
    fn rec(alphabet: &[Letter], len: usize, cur: &mut Word, out: &mut Vec<Word>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for &l in alphabet {
            if cur.last().is_some_and(|&last| last == l.inverse()) {
                continue;
            }
            cur.push(l);
            rec(alphabet, len, cur, out);
            cur.pop();
        }
    }
    let alphabet = Letter::alphabet(rank);
    let mut out = Vec::new();
    rec(&alphabet, len, &mut Vec::new(), &mut out);
    out
}

fn pow_word(rep: &[Letter], k: i64) -> Word {
    let piece: Word = if k >= 0 { rep.to_vec() } else { inverse_word(rep) };
    let mut out = Vec::with_capacity(rep.len() * k.unsigned_abs() as usize);
    for _ in 0..k.unsigned_abs() {
        out.extend_from_slice(&piece);
    }
    out
}

/// `Some(k)` iff the reduced word is literally rep^k (k may be negative or
/// zero). Sound because powers of a cyclically reduced root concatenate
/// without cancellation.
fn power_exponent(w: &[Letter], rep: &[Letter]) -> Option<i64> {
    if w.is_empty() {
        return Some(0);
    }
    if w.len() % rep.len() != 0 {
        return None;
    }
    let k = (w.len() / rep.len()) as i64;
    if w.chunks(rep.len()).all(|c| c == rep) {
        return Some(k);
    }
    let inv = inverse_word(rep);
    if w.chunks(rep.len()).all(|c| c == inv) {
        return Some(-k);
    }
    None
}

fn in_cyclic(w: &[Letter], rep: &[Letter]) -> bool {
    power_exponent(&free_reduce(w), rep).is_some()
}

/// Vertex of the axis of `rep` at signed position `t`, as a word from the
/// basepoint.
fn axis_vertex(rep: &[Letter], t: i64) -> Word {
    let m = rep.len() as i64;
    let q = t.div_euclid(m);
    let r = t.rem_euclid(m) as usize;
    let mut w = pow_word(rep, q);
    w.extend_from_slice(&rep[..r]);
    free_reduce(&w)
}

// ---------------------------------------------------------------------------
// germ machinery

struct MemberData {
    root: ConjClass,
    ctx: CutContext,
}

impl MemberData {
    fn rep(&self) -> &Word {
        self.root.rep()
    }
}

#[derive(Clone, Copy, Debug)]
struct Germ {
    member: usize,
    component: usize,
    monodromy: u64,
    residue: u64,
}

struct BuildState {
    rank: usize,
    members: Vec<MemberData>,
}

fn label_pair(ctx: &CutContext, h: &[Letter], rank: usize) -> Result<(EndpointLabel, EndpointLabel)> {
    let on_cut = || {
        Error::EndpointOnCut(format_word(h, rank), format_word(ctx.cutset.root.rep(), rank))
    };
    let fwd = match ctx.locate(h, true)? {
        Located::Label(l) => l,
        Located::OnCutSet => return Err(on_cut()),
    };
    let bwd = match ctx.locate(h, false)? {
        Located::Label(l) => l,
        Located::OnCutSet => return Err(on_cut()),
    };
    Ok((fwd, bwd))
}

fn both_label(ctx: &CutContext, h: &[Letter], expect: EndpointLabel, rank: usize) -> Result<bool> {
    let (fwd, bwd) = label_pair(ctx, h, rank)?;
    Ok(fwd == expect && bwd == expect)
}

/// All vertices on some shortest geodesic between the translated axes
/// c1·axis(rep1) and c2·axis(rep2), endpoints included. The window bound
/// covers every position a closest-point pair can occupy.
fn bridge_vertices(rep1: &[Letter], c1: &[Letter], rep2: &[Letter], c2: &[Letter]) -> Vec<Word> {
    let w = (c1.len() + c2.len() + rep1.len() + rep2.len() + 2) as i64;
    let us: Vec<Word> = (-w..=w).map(|k| concat_reduce(c1, &axis_vertex(rep1, k))).collect();
    let vs: Vec<Word> = (-w..=w).map(|k| concat_reduce(c2, &axis_vertex(rep2, k))).collect();
    let mut best = usize::MAX;
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for (a, u) in us.iter().enumerate() {
        let ui = inverse_word(u);
        for (b, v) in vs.iter().enumerate() {
            let d = concat_reduce(&ui, v).len();
            if d < best {
                best = d;
                pairs.clear();
            }
            if d == best {
                pairs.push((a, b));
            }
        }
    }
    let mut verts: BTreeSet<Word> = BTreeSet::new();
    for (a, b) in pairs {
        let u = &us[a];
        let geo = concat_reduce(&inverse_word(u), &vs[b]);
        for t in 0..=geo.len() {
            verts.insert(concat_reduce(u, &geo[..t]));
        }
    }
    verts.into_iter().collect()
}

/// No collection translate strictly separates the translate c1·S(i) from
/// c2·S(j). A separating translate must meet the bridge between the two
/// axes, so it suffices to test the translates through bridge vertices.
fn nothing_between(st: &BuildState, i: usize, c1: &[Letter], j: usize, c2: &[Letter]) -> Result<bool> {
    let rep_i = st.members[i].rep().clone();
    let rep_j = st.members[j].rep().clone();
    let core1 = conjugate(&rep_i, c1);
    let core2 = conjugate(&rep_j, c2);
    let bridge = bridge_vertices(&rep_i, c1, &rep_j, c2);
    let mut seen: BTreeSet<(usize, Word)> = BTreeSet::new();
    for v in &bridge {
        for (l, ml) in st.members.iter().enumerate() {
            let repl = ml.rep().clone();
            for s in 0..repl.len() {
                let w = concat_reduce(v, &inverse_word(&repl[..s]));
                let translate_core = conjugate(&repl, &w);
                if !seen.insert((l, translate_core)) {
                    continue;
                }
                // skip the two end cut sets themselves
                if l == i && in_cyclic(&concat_reduce(&inverse_word(c1), &w), &rep_i) {
                    continue;
                }
                if l == j && in_cyclic(&concat_reduce(&inverse_word(c2), &w), &rep_j) {
                    continue;
                }
                let wi = inverse_word(&w);
                let h1 = conjugate(&core1, &wi);
                let h2 = conjugate(&core2, &wi);
                let (f1, b1) = label_pair(&ml.ctx, &h1, st.rank)?;
                let (f2, b2) = label_pair(&ml.ctx, &h2, st.rank)?;
                if f1 != b1 || f2 != b2 || f1 != f2 {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Exact membership of `f` in the stabilizer of the piece bordering the
/// germ's cut set on the germ's side. Powers of the root are decided by the
/// monodromy; any other element must carry the cut set to the germ's side,
/// in both directions, with no collection translate strictly between.
fn fixes_piece(st: &BuildState, germ: &Germ, f: &[Letter]) -> Result<bool> {
    let md = &st.members[germ.member];
    let rep = md.rep().clone();
    if let Some(k) = power_exponent(f, &rep) {
        return Ok(k.rem_euclid(germ.monodromy as i64) == 0);
    }
    let expect = EndpointLabel { component: germ.component, residue: germ.residue };
    if !both_label(&md.ctx, &conjugate(&rep, f), expect, st.rank)? {
        return Ok(false);
    }
    if !both_label(&md.ctx, &conjugate(&rep, &inverse_word(f)), expect, st.rank)? {
        return Ok(false);
    }
    nothing_between(st, germ.member, &[], germ.member, f)
}

/// Does t carry the piece of germ `gb` onto the piece of germ `ga`?
fn merge_test(st: &BuildState, ga: &Germ, gb: &Germ, t: &[Letter]) -> Result<bool> {
    let (i, j) = (ga.member, gb.member);
    let rep_i = st.members[i].rep().clone();
    let rep_j = st.members[j].rep().clone();
    // same positioned cut set: distinct germs of it never share a piece
    if i == j && in_cyclic(t, &rep_i) {
        return Ok(false);
    }
    let ea = EndpointLabel { component: ga.component, residue: ga.residue };
    let eb = EndpointLabel { component: gb.component, residue: gb.residue };
    if !both_label(&st.members[i].ctx, &conjugate(&rep_j, t), ea, st.rank)? {
        return Ok(false);
    }
    if !both_label(&st.members[j].ctx, &conjugate(&rep_i, &inverse_word(t)), eb, st.rank)? {
        return Ok(false);
    }
    nothing_between(st, i, &[], j, t)
}

/// Union-find over germs carrying the conjugator that moves each germ's
/// piece onto its root's piece.
struct GermForest {
    parent: Vec<usize>,
    conj: Vec<Word>, // piece(g) = conj[g] · piece(parent[g]) · conj[g]⁻¹
}

impl GermForest {
    fn new(n: usize) -> GermForest {
        GermForest { parent: (0..n).collect(), conj: vec![Vec::new(); n] }
    }

    fn find(&mut self, g: usize) -> (usize, Word) {
        if self.parent[g] == g {
            return (g, Vec::new());
        }
        let (root, up) = self.find(self.parent[g]);
        let total = concat_reduce(&self.conj[g], &up);
        self.parent[g] = root;
        self.conj[g] = total.clone();
        (root, total)
    }

    fn roots(&mut self) -> Vec<usize> {
        (0..self.parent.len()).filter(|&g| self.find(g).0 == g).collect()
    }

    /// Both must currently be roots; records piece(a) = t · piece(b) · t⁻¹.
    /// Returns (winner, loser).
    fn union(&mut self, a: usize, b: usize, t: &[Letter]) -> (usize, usize) {
        if a < b {
            self.parent[b] = a;
            self.conj[b] = inverse_word(t);
            (a, b)
        } else {
            self.parent[a] = b;
            self.conj[a] = free_reduce(t);
            (b, a)
        }
    }
}

fn stabilizer_cap(cfg: &RjsjConfig, collection: &[CutSet]) -> usize {
    if let Some(c) = cfg.stab_cap {
        return c;
    }
    if let Ok(s) = std::env::var("JSJ_MAX_STABILIZER_LEN") {
        if let Ok(v) = s.parse::<usize>() {
            return v;
        }
    }
    let period = collection.iter().map(|c| c.root.len()).max().unwrap_or(1);
    2 * cfg.max_len + period
}

fn internal_rewrite<T>(r: std::result::Result<T, Error>, what: &str) -> Result<T> {
    r.map_err(|e| Error::RewriteFailure(format!("{what}: {e}")))
}

// ---------------------------------------------------------------------------
// graph-of-groups construction

/// Compute the decomposition of `m` along a pairwise non-crossing
/// collection of cut sets. Piece stabilizers are grown generator by
/// generator with exact membership tests and accepted once the Euler count,
/// the ellipticity of every class, and the edge inclusions all certify.
pub fn build_graph_of_groups(
    m: &Multiword,
    collection: &[CutSet],
    cfg: &RjsjConfig,
) -> Result<GraphOfGroups> {
    // the collection must be honest: nothing may cross anything
    let pairs2: Vec<&CutSet> = collection
        .iter()
        .filter(|c| c.kind == CutKind::CutPair && c.total_components == 2)
        .collect();
    for a in &pairs2 {
        for b in &pairs2 {
            for h in crossing_candidates(m, &a.root, &b.root) {
                if crosses(m, &a.root, &h)? {
                    return Err(Error::CrossingInCollection(format_word(
                        a.root.rep(),
                        m.rank,
                    )));
                }
            }
        }
    }

    let rank = m.rank;
    let members: Vec<MemberData> = collection
        .iter()
        .map(|cs| Ok(MemberData { root: cs.root.clone(), ctx: CutContext::new(m, &cs.root)? }))
        .collect::<Result<_>>()?;
    let st = BuildState { rank, members };

    // one germ per (member, complement component); the residue is read off
    // a probe line through the smallest direction of the component
    let mut germs: Vec<Germ> = Vec::new();
    for (i, md) in st.members.iter().enumerate() {
        let rep = md.rep().clone();
        let mut found: BTreeMap<usize, u64> = BTreeMap::new();
        for &(s, dd) in md.ctx.graph().qvertices() {
            let mut probe: Word = rep[..s].to_vec();
            probe.push(dd);
            probe.extend(inverse_word(&rep[..s]));
            let (fwd, _) = label_pair(&md.ctx, &probe, rank)?;
            found.entry(fwd.component).or_insert(fwd.residue);
        }
        let comps = &md.ctx.cutset.qcomponents;
        debug_assert_eq!(found.len(), comps.len());
        for &(cid, d) in comps {
            let residue = *found
                .get(&cid)
                .ok_or_else(|| Error::RewriteFailure("component without directions".into()))?;
            germs.push(Germ { member: i, component: cid, monodromy: d, residue });
        }
    }

    let mut forest = GermForest::new(germs.len());
    let mut gens: Vec<Vec<Word>> = germs
        .iter()
        .map(|g| vec![pow_word(st.members[g.member].rep(), g.monodromy as i64)])
        .collect();

    let cap = stabilizer_cap(cfg, collection);
    for tier in 0..=cap {
        let words = enumerate_words(rank, tier);

        if tier > 0 {
            for rho in forest.roots() {
                let germ = germs[rho];
                let sg = SubgroupGraph::new(rank, &gens[rho]);
                let flags: Vec<bool> = words
                    .par_iter()
                    .map(|f| {
                        if sg.contains(f) {
                            Ok(false)
                        } else {
                            fixes_piece(&st, &germ, f)
                        }
                    })
                    .collect::<Result<_>>()?;
                let mut grown = sg;
                for (f, ok) in words.iter().zip(flags) {
                    if ok && !grown.contains(f) {
                        gens[rho].push(f.clone());
                        grown = SubgroupGraph::new(rank, &gens[rho]);
                    }
                }
            }
        }

        // merge germs that now visibly share a piece
        loop {
            let roots = forest.roots();
            let mut merged = false;
            'pairs: for (ai, &a) in roots.iter().enumerate() {
                for &b in &roots[ai + 1..] {
                    for t in &words {
                        if merge_test(&st, &germs[a], &germs[b], t)? {
                            let (winner, loser) = forest.union(a, b, t);
                            let c = forest.conj[loser].clone();
                            let ci = inverse_word(&c);
                            let moved: Vec<Word> =
                                gens[loser].iter().map(|f| conjugate(f, &ci)).collect();
                            gens[winner].extend(moved);
                            merged = true;
                            break 'pairs;
                        }
                    }
                }
            }
            if !merged {
                break;
            }
        }

        if certificates(&st, m, &germs, &mut forest, &gens)? {
            return assemble(&st, m, collection, &germs, &mut forest, &gens);
        }
    }
    Err(Error::StabilizerSearchExhausted(cap))
}

/// The three acceptance checks: Euler count, ellipticity of every input
/// class, and containment of every germ's edge generator.
fn certificates(
    st: &BuildState,
    m: &Multiword,
    germs: &[Germ],
    forest: &mut GermForest,
    gens: &[Vec<Word>],
) -> Result<bool> {
    let roots = forest.roots();
    let folds: BTreeMap<usize, SubgroupGraph> = roots
        .iter()
        .map(|&r| (r, SubgroupGraph::new(st.rank, &gens[r])))
        .collect();

    let total: i64 = folds.values().map(|f| f.basis().len() as i64 - 1).sum();
    if total != st.rank as i64 - 1 {
        return Ok(false);
    }

    for class in m.classes() {
        let is_root = st.members.iter().any(|md| md.root == *class);
        if !is_root && !folds.values().any(|f| f.contains_conjugate(class)) {
            return Ok(false);
        }
    }

    for (gi, germ) in germs.iter().enumerate() {
        let (rho, c) = forest.find(gi);
        let e = pow_word(st.members[germ.member].rep(), germ.monodromy as i64);
        let in_root = conjugate(&e, &inverse_word(&c));
        if !folds[&rho].contains(&in_root) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Conjugacy-canonical presentation of a subgroup: rebase at each vertex of
/// its Stallings graph and keep the basis minimizing (total length, sorted
/// formatted words). Returns the rebased graph and the conjugator u with
/// H_canonical = u⁻¹·H·u.
fn conjugacy_canonical(rank: usize, gens: &[Word]) -> (SubgroupGraph, Word) {
    let sg0 = SubgroupGraph::new(rank, gens);
    let mut best: Option<(usize, Vec<String>, SubgroupGraph, Word)> = None;
    for v in 0..sg0.vertex_count() {
        let u = sg0.path(v).clone();
        let ui = inverse_word(&u);
        let moved: Vec<Word> = gens.iter().map(|g| conjugate(g, &ui)).collect();
        let sg = SubgroupGraph::new(rank, &moved);
        let total: usize = sg.basis().iter().map(|b| b.len()).sum();
        let mut strs: Vec<String> = sg.basis().iter().map(|b| format_word(b, rank)).collect();
        strs.sort();
        let better = match &best {
            None => true,
            Some((t0, s0, _, _)) => (total, &strs) < (*t0, s0),
        };
        if better {
            best = Some((total, strs, sg, u));
        }
    }
    let (_, _, sg, u) = best.expect("folded graph has a vertex");
    (sg, u)
}

fn assemble(
    st: &BuildState,
    m: &Multiword,
    collection: &[CutSet],
    germs: &[Germ],
    forest: &mut GermForest,
    gens: &[Vec<Word>],
) -> Result<GraphOfGroups> {
    let k = collection.len();
    let roots = forest.roots();
    let vid_of: BTreeMap<usize, usize> =
        roots.iter().enumerate().map(|(idx, &r)| (r, k + idx)).collect();

    let mut canon: BTreeMap<usize, (SubgroupGraph, Word)> = BTreeMap::new();
    for &r in &roots {
        canon.insert(r, conjugacy_canonical(st.rank, &gens[r]));
    }

    let cyclic_vertices: Vec<CyclicVertex> = collection
        .iter()
        .enumerate()
        .map(|(i, cs)| CyclicVertex {
            id: i,
            root: cs.root.clone(),
            in_multiword: m.contains(&cs.root),
        })
        .collect();

    let mut noncyclic_vertices: Vec<NoncyclicVertex> = roots
        .iter()
        .map(|r| {
            let (sg, _) = &canon[r];
            NoncyclicVertex {
                id: vid_of[r],
                basis: sg.basis().to_vec(),
                induced: Multiword::from_classes(sg.basis().len(), Vec::new()),
                classification: None,
            }
        })
        .collect();

    let mut edges: Vec<GoGEdge> = Vec::new();
    for (gi, germ) in germs.iter().enumerate() {
        let (rho, c) = forest.find(gi);
        let (sg, u) = &canon[&rho];
        let e = pow_word(st.members[germ.member].rep(), germ.monodromy as i64);
        let in_root = conjugate(&e, &inverse_word(&c));
        let elem = conjugate(&in_root, &inverse_word(u));
        let local = internal_rewrite(sg.express(&elem), "edge image")?;
        edges.push(GoGEdge {
            cyclic: germ.member,
            noncyclic: vid_of[&rho],
            degree: germ.monodromy,
            elem,
            image: ConjClass::new(&local)?,
        });
    }

    let mut g = GraphOfGroups {
        rank: st.rank,
        cyclic_vertices,
        noncyclic_vertices: Vec::new(),
        edges,
        trivial: false,
    };
    for v in &mut noncyclic_vertices {
        g.noncyclic_vertices.push(v.clone());
    }
    for idx in 0..g.noncyclic_vertices.len() {
        let vid = g.noncyclic_vertices[idx].id;
        g.noncyclic_vertices[idx].induced = induced_multiword(m, &g, vid)?;
    }
    g.trivial = g.cyclic_vertices.is_empty();
    Ok(g)
}

// ---------------------------------------------------------------------------
// derived data

/// Induced multiword of a piece: one class per reading cycle of each input
/// class that meets the piece, plus the incident edge images.
pub fn induced_multiword(m: &Multiword, g: &GraphOfGroups, vid: usize) -> Result<Multiword> {
    let v = g
        .noncyclic_vertices
        .iter()
        .find(|v| v.id == vid)
        .ok_or_else(|| Error::RewriteFailure(format!("no piece with id {vid}")))?;
    let sg = SubgroupGraph::new(g.rank, &v.basis);
    let mut classes: Vec<ConjClass> = Vec::new();
    for class in m.classes() {
        if g.cyclic_vertices.iter().any(|c| c.root == *class) {
            continue;
        }
        if !sg.contains_conjugate(class) {
            continue;
        }
        for w in sg.induced_words(class.rep()) {
            classes.push(ConjClass::new(&w)?);
        }
    }
    for e in &g.edges {
        if e.noncyclic == vid {
            classes.push(e.image.clone());
        }
    }
    Ok(Multiword::from_classes(v.basis.len(), classes))
}

/// The input together with the roots of the collection the decomposition
/// found; decomposing the augmentation reproduces the same graph.
pub fn augmented_multiword(m: &Multiword, g: &GraphOfGroups) -> Multiword {
    let mut classes: Vec<ConjClass> = m.classes().to_vec();
    for cv in &g.cyclic_vertices {
        classes.push(cv.root.clone());
    }
    Multiword::from_classes(m.rank, classes)
}

/// Classify one piece by its induced multiword: a circle is a surface, an
/// empty survivor scan is rigid, and a surviving cut set is a witness that
/// the collection must be refined.
pub fn classify_vertex(g: &GraphOfGroups, vid: usize, cfg: &RjsjConfig) -> Result<Classification> {
    let v = g
        .noncyclic_vertices
        .iter()
        .find(|v| v.id == vid)
        .ok_or_else(|| Error::RewriteFailure(format!("no piece with id {vid}")))?;
    let (mind, moves) = minimize(&v.induced);
    let wh = WhGraph::new(&mind);
    if !wh.connectivity().connected {
        return Err(Error::DisconnectedPiece);
    }
    if wh.is_circle() {
        return Ok(Classification::QHSurface);
    }
    let (cutsets, certified) = scan_candidates(&mind, cfg.max_len)?;
    let selected = select_uncrossed(&mind, &cutsets)?;
    match selected.first() {
        None => Ok(Classification::Rigid { certified }),
        Some(found) => {
            let mut w = found.root.rep().clone();
            for mv in moves.iter().rev() {
                w = mv.inverse().apply(&w);
            }
            let sg = SubgroupGraph::new(g.rank, &v.basis);
            let ambient = sg.unexpress(&w);
            Ok(Classification::Undetermined { witness: ConjClass::new(&ambient)? })
        }
    }
}

// ---------------------------------------------------------------------------
// normalization

/// Collapse degenerate structure: cyclic vertices carried by fewer than two
/// germ attachments dissolve, cyclic vertices with a conjugate image at a
/// common piece merge, and byte-identical parallel edges fold together.
/// Idempotent; an honest construction already satisfies all three.
pub fn normalize_graph_of_groups(g: &mut GraphOfGroups) {
    loop {
        let mut changed = false;

        // (a) a cyclic vertex needs total attachment degree at least two
        let mut weight: BTreeMap<usize, u64> = BTreeMap::new();
        for e in &g.edges {
            *weight.entry(e.cyclic).or_insert(0) += e.degree;
        }
        if let Some(cv) = g
            .cyclic_vertices
            .iter()
            .find(|cv| weight.get(&cv.id).copied().unwrap_or(0) < 2)
        {
            let dead = cv.id;
            g.edges.retain(|e| e.cyclic != dead);
            g.cyclic_vertices.retain(|c| c.id != dead);
            changed = true;
        }

        // (b) two cyclic vertices with the same image class at a common
        // piece carry the same maximal cyclic subgroup there
        'fold: for a in 0..g.cyclic_vertices.len() {
            for b in a + 1..g.cyclic_vertices.len() {
                let (ida, idb) = (g.cyclic_vertices[a].id, g.cyclic_vertices[b].id);
                let shared = g.edges.iter().any(|ea| {
                    ea.cyclic == ida
                        && g.edges.iter().any(|eb| {
                            eb.cyclic == idb
                                && eb.noncyclic == ea.noncyclic
                                && eb.image == ea.image
                        })
                });
                if shared {
                    for e in &mut g.edges {
                        if e.cyclic == idb {
                            e.cyclic = ida;
                        }
                    }
                    g.cyclic_vertices.retain(|c| c.id != idb);
                    changed = true;
                    break 'fold;
                }
            }
        }

        // (c) identical parallel edges fold
        let mut kept: Vec<GoGEdge> = Vec::new();
        for e in g.edges.drain(..) {
            let dup = kept.iter().any(|k| {
                k.cyclic == e.cyclic
                    && k.noncyclic == e.noncyclic
                    && k.degree == e.degree
                    && k.image == e.image
                    && k.elem == e.elem
            });
            if dup {
                changed = true;
            } else {
                kept.push(e);
            }
        }
        g.edges = kept;

        if !changed {
            break;
        }
    }

    // compact ids, preserving order
    let cyclic_ids: Vec<usize> = g.cyclic_vertices.iter().map(|c| c.id).collect();
    let noncyclic_ids: Vec<usize> = g.noncyclic_vertices.iter().map(|v| v.id).collect();
    let cmap: BTreeMap<usize, usize> =
        cyclic_ids.iter().enumerate().map(|(n, &o)| (o, n)).collect();
    let k = cmap.len();
    let vmap: BTreeMap<usize, usize> =
        noncyclic_ids.iter().enumerate().map(|(n, &o)| (o, k + n)).collect();
    for (n, c) in g.cyclic_vertices.iter_mut().enumerate() {
        c.id = n;
    }
    for (n, v) in g.noncyclic_vertices.iter_mut().enumerate() {
        v.id = k + n;
    }
    for e in &mut g.edges {
        e.cyclic = cmap[&e.cyclic];
        e.noncyclic = vmap[&e.noncyclic];
    }
    g.trivial = g.cyclic_vertices.is_empty();
}

// ---------------------------------------------------------------------------
// the full pipeline

fn pull_word(w: &[Letter], moves: &[crate::words::WhMove]) -> Word {
    let mut w = w.to_vec();
    for mv in moves.iter().rev() {
        w = mv.inverse().apply(&w);
    }
    w
}

/// An unmarked cyclic vertex of total attachment degree two whose pieces
/// are all surfaces is a tube inside one larger surface: the curve is
/// crossed by curves of that surface, so it never belonged in the
/// collection.
fn find_tube(m: &Multiword, g: &GraphOfGroups) -> Option<ConjClass> {
    for cv in &g.cyclic_vertices {
        if m.contains(&cv.root) {
            continue;
        }
        let incident: Vec<&GoGEdge> = g.edges.iter().filter(|e| e.cyclic == cv.id).collect();
        let total: u64 = incident.iter().map(|e| e.degree).sum();
        let all_surface = !incident.is_empty()
            && incident.iter().all(|e| {
                g.noncyclic_vertices
                    .iter()
                    .find(|v| v.id == e.noncyclic)
                    .is_some_and(|v| {
                        matches!(v.classification, Some(Classification::QHSurface))
                    })
            });
        if total == 2 && all_surface {
            return Some(cv.root.clone());
        }
    }
    None
}

/// Compute the relative cyclic decomposition of `m`.
///
/// The multiword is minimized first; a free splitting is reported as an
/// error carrying the factors. A circle multiword is a surface outright.
/// Otherwise the scan collects cut sets, the non-crossing survivors seed a
/// collection, and pieces are built and classified, refining the collection
/// with any witness a piece scan turns up, until every piece is rigid or a
/// surface. Results are pulled back to the input coordinates and verified.
pub fn compute_rjsj(m: &Multiword, cfg: &RjsjConfig) -> Result<RjsjResult> {
    let (mm, moves) = minimize(m);

    let factors = free_factors(&mm)?;
    if factors.len() > 1 {
        let mut descs = Vec::new();
        for f in &factors {
            let gens: Vec<String> = f
                .gens
                .iter()
                .map(|&i| format_word(&pull_word(&[Letter::from_index(i, true)], &moves), m.rank))
                .collect();
            let classes: Vec<String> = f
                .classes
                .iter()
                .map(|c| {
                    let w = pull_word(c.rep(), &moves);
                    Ok(format_word(ConjClass::new(&w)?.rep(), m.rank))
                })
                .collect::<Result<_>>()?;
            if classes.is_empty() {
                descs.push(format!("<{}>", gens.join(", ")));
            } else {
                descs.push(format!("<{}> rel {}", gens.join(", "), classes.join(", ")));
            }
        }
        return Err(Error::FreeSplitting(descs));
    }

    if WhGraph::new(&mm).is_circle() {
        return Ok(RjsjResult { outcome: RjsjOutcome::QHSurface, certified: true, scan_length: 0 });
    }

    let (cutsets, scan_certified) = scan_candidates(&mm, cfg.max_len)?;
    let mut collection = select_uncrossed(&mm, &cutsets)?;
    if collection.is_empty() {
        return Ok(RjsjResult {
            outcome: RjsjOutcome::Rigid,
            certified: scan_certified,
            scan_length: cfg.max_len,
        });
    }

    // refine until every piece classifies: a surviving cut set inside a
    // piece joins the collection, and a collection member that turns out to
    // bound a tube between two surface pieces was never essential (its
    // crossers were just longer than the scan) and is dropped again
    let mut finished: Option<GraphOfGroups> = None;
    for _round in 0..=2 * mm.rank + 2 {
        let mut graph = build_graph_of_groups(&mm, &collection, cfg)?;
        normalize_graph_of_groups(&mut graph);
        for idx in 0..graph.noncyclic_vertices.len() {
            let vid = graph.noncyclic_vertices[idx].id;
            graph.noncyclic_vertices[idx].induced = induced_multiword(&mm, &graph, vid)?;
        }
        let mut witness: Option<ConjClass> = None;
        for idx in 0..graph.noncyclic_vertices.len() {
            let vid = graph.noncyclic_vertices[idx].id;
            let cls = classify_vertex(&graph, vid, cfg)?;
            if witness.is_none() {
                if let Classification::Undetermined { witness: w } = &cls {
                    witness = Some(w.clone());
                }
            }
            graph.noncyclic_vertices[idx].classification = Some(cls);
        }
        if let Some(root) = find_tube(&mm, &graph) {
            collection.retain(|c| c.root != root);
            continue;
        }
        match witness {
            None => {
                finished = Some(graph);
                break;
            }
            Some(w) => {
                let cs = classify_cutset(&mm, w.rep())?;
                if cs.kind == CutKind::NotCut || collection.iter().any(|c| c.root == cs.root) {
                    return Err(Error::RecognitionFailed(cfg.max_len));
                }
                collection.push(cs);
            }
        }
    }
    let mut graph = finished.ok_or(Error::RecognitionFailed(cfg.max_len))?;

    // pull everything back to the input coordinates
    for cv in &mut graph.cyclic_vertices {
        cv.root = ConjClass::new(&pull_word(cv.root.rep(), &moves))?;
        cv.in_multiword = m.contains(&cv.root);
    }
    for idx in 0..graph.noncyclic_vertices.len() {
        let vid = graph.noncyclic_vertices[idx].id;
        let pulled: Vec<Word> = graph.noncyclic_vertices[idx]
            .basis
            .iter()
            .map(|b| pull_word(b, &moves))
            .collect();
        let (sg, u) = conjugacy_canonical(m.rank, &pulled);
        graph.noncyclic_vertices[idx].basis = sg.basis().to_vec();
        let ui = inverse_word(&u);
        for e in &mut graph.edges {
            if e.noncyclic != vid {
                continue;
            }
            e.elem = conjugate(&pull_word(&e.elem, &moves), &ui);
            let local = internal_rewrite(sg.express(&e.elem), "pulled edge image")?;
            e.image = ConjClass::new(&local)?;
        }
    }
    for idx in 0..graph.noncyclic_vertices.len() {
        let vid = graph.noncyclic_vertices[idx].id;
        graph.noncyclic_vertices[idx].induced = induced_multiword(m, &graph, vid)?;
    }

    let report = verify_rjsj(m, &graph);
    if !report.pass {
        return Err(Error::RecognitionFailed(cfg.max_len));
    }

    let certified = scan_certified
        && graph.noncyclic_vertices.iter().all(|v| match &v.classification {
            Some(Classification::Rigid { certified }) => *certified,
            Some(Classification::QHSurface) => true,
            _ => false,
        });
    Ok(RjsjResult {
        outcome: RjsjOutcome::Decomposition(graph),
        certified,
        scan_length: cfg.max_len,
    })
}

// ---------------------------------------------------------------------------
// verification

/// Structural audit of a decomposition against a multiword. Every check is
/// recomputed from scratch; the report lists each violated invariant.
pub fn verify_rjsj(m: &Multiword, g: &GraphOfGroups) -> VerifyReport {
    let mut violations: Vec<String> = Vec::new();
    let k = g.cyclic_vertices.len();

    // ids and incidences
    for (i, cv) in g.cyclic_vertices.iter().enumerate() {
        if cv.id != i {
            violations.push(format!("cyclic vertex at position {i} has id {}", cv.id));
        }
    }
    for (i, v) in g.noncyclic_vertices.iter().enumerate() {
        if v.id != k + i {
            violations.push(format!("piece at position {i} has id {}", v.id));
        }
    }
    for e in &g.edges {
        if e.cyclic >= k || e.noncyclic < k || e.noncyclic >= k + g.noncyclic_vertices.len() {
            violations.push(format!("edge {} -- {} out of range", e.cyclic, e.noncyclic));
        }
    }
    if !violations.is_empty() {
        return VerifyReport { pass: false, violations };
    }

    // every cyclic vertex is attached with total degree at least two
    for cv in &g.cyclic_vertices {
        let total: u64 = g.edges.iter().filter(|e| e.cyclic == cv.id).map(|e| e.degree).sum();
        if total < 2 {
            violations.push(format!(
                "cyclic vertex {} has attachment degree {total}",
                format_word(cv.root.rep(), g.rank)
            ));
        }
    }

    // Euler count
    let euler: i64 = g.noncyclic_vertices.iter().map(|v| v.basis.len() as i64 - 1).sum();
    if euler != g.rank as i64 - 1 {
        violations.push(format!("Euler count {euler} does not match rank {}", g.rank));
    }

    // distinct roots
    for (a, ca) in g.cyclic_vertices.iter().enumerate() {
        for cb in &g.cyclic_vertices[a + 1..] {
            if ca.root == cb.root {
                violations.push(format!(
                    "duplicate cyclic root {}",
                    format_word(ca.root.rep(), g.rank)
                ));
            }
        }
    }

    // edge images: distinct per piece, consistent with elem, and the elem
    // cyclically reduces to the declared power of the declared root
    for v in &g.noncyclic_vertices {
        let sg = SubgroupGraph::new(g.rank, &v.basis);
        let incident: Vec<&GoGEdge> = g.edges.iter().filter(|e| e.noncyclic == v.id).collect();
        for (a, ea) in incident.iter().enumerate() {
            for eb in &incident[a + 1..] {
                if ea.image == eb.image {
                    violations.push(format!(
                        "piece {} carries two edges with image {}",
                        v.id,
                        format_word(ea.image.rep(), v.basis.len())
                    ));
                }
            }
        }
        for e in incident {
            let root = &g.cyclic_vertices[e.cyclic].root;
            let (core, _) = cyclic_reduce(&e.elem);
            match ConjClass::new(&core) {
                Ok(c) if c == *root && core.len() as u64 == e.degree * root.len() as u64 => {}
                _ => violations.push(format!(
                    "edge {} -- {} element is not the declared power of its root",
                    e.cyclic, e.noncyclic
                )),
            }
            match sg.express(&e.elem) {
                Ok(local) => match ConjClass::new(&local) {
                    Ok(c) if c == e.image => {}
                    _ => violations.push(format!(
                        "edge {} -- {} image does not match its element",
                        e.cyclic, e.noncyclic
                    )),
                },
                Err(_) => violations.push(format!(
                    "edge {} -- {} element lies outside the piece",
                    e.cyclic, e.noncyclic
                )),
            }
        }
    }

    // marking flags
    for cv in &g.cyclic_vertices {
        if cv.in_multiword != m.contains(&cv.root) {
            violations.push(format!(
                "cyclic vertex {} marking disagrees with the multiword",
                format_word(cv.root.rep(), g.rank)
            ));
        }
    }

    // every class is a root or elliptic in exactly one piece
    for class in m.classes() {
        if g.cyclic_vertices.iter().any(|c| c.root == *class) {
            continue;
        }
        let count = g
            .noncyclic_vertices
            .iter()
            .filter(|v| SubgroupGraph::new(g.rank, &v.basis).contains_conjugate(class))
            .count();
        if count != 1 {
            violations.push(format!(
                "class {} is elliptic in {count} pieces",
                format_word(class.rep(), g.rank)
            ));
        }
    }

    // stored induced multiwords match a recomputation
    for v in &g.noncyclic_vertices {
        match induced_multiword(m, g, v.id) {
            Ok(ind) if ind.classes() == v.induced.classes() => {}
            _ => violations.push(format!("piece {} stores a stale induced multiword", v.id)),
        }
    }

    // classifications are definite, and surfaces really are circles
    for v in &g.noncyclic_vertices {
        match &v.classification {
            None | Some(Classification::Undetermined { .. }) => {
                violations.push(format!("piece {} is unclassified", v.id));
            }
            Some(Classification::QHSurface) => {
                let (mind, _) = minimize(&v.induced);
                if !WhGraph::new(&mind).is_circle() {
                    violations.push(format!("piece {} is marked surface but is no circle", v.id));
                }
            }
            Some(Classification::Rigid { .. }) => {}
        }
    }

    // an unmarked cyclic vertex of total degree two between surfaces is a
    // tube that should have dissolved into its neighbors
    for cv in &g.cyclic_vertices {
        if m.contains(&cv.root) {
            continue;
        }
        let incident: Vec<&GoGEdge> = g.edges.iter().filter(|e| e.cyclic == cv.id).collect();
        let total: u64 = incident.iter().map(|e| e.degree).sum();
        let all_surface = incident.iter().all(|e| {
            g.noncyclic_vertices
                .iter()
                .find(|v| v.id == e.noncyclic)
                .is_some_and(|v| matches!(v.classification, Some(Classification::QHSurface)))
        });
        if total == 2 && all_surface {
            violations.push(format!(
                "unmarked cyclic vertex {} is a dissolvable tube between surfaces",
                format_word(cv.root.rep(), g.rank)
            ));
        }
    }

    VerifyReport { pass: violations.is_empty(), violations }
}

// ---------------------------------------------------------------------------
// summaries

/// Deterministic, labeling-independent description of a decomposition,
/// suitable for comparing results across equivalent runs.
pub fn canonical_summary(g: &GraphOfGroups, include_marks: bool) -> String {
    let piece_key = |v: &NoncyclicVertex| -> (String, Vec<u64>, Vec<String>, usize) {
        let tag = match &v.classification {
            Some(Classification::Rigid { .. }) => "rigid",
            Some(Classification::QHSurface) => "surface",
            Some(Classification::Undetermined { .. }) => "open",
            None => "?",
        };
        let mut degrees: Vec<u64> = g
            .edges
            .iter()
            .filter(|e| e.noncyclic == v.id)
            .map(|e| e.degree)
            .collect();
        degrees.sort_unstable();
        let induced: Vec<String> = v
            .induced
            .classes()
            .iter()
            .map(|c| format_word(c.rep(), v.basis.len()))
            .collect();
        (tag.to_string(), degrees, induced, v.basis.len())
    };
    let cyclic_key = |c: &CyclicVertex| -> (String, String) {
        let mark = if include_marks {
            if c.in_multiword { "+" } else { "-" }
        } else {
            ""
        };
        (format_word(c.root.rep(), g.rank), mark.to_string())
    };

    let mut pieces: Vec<(usize, (String, Vec<u64>, Vec<String>, usize))> =
        g.noncyclic_vertices.iter().map(|v| (v.id, piece_key(v))).collect();
    pieces.sort_by(|a, b| a.1.cmp(&b.1));
    let mut cyclics: Vec<(usize, (String, String))> =
        g.cyclic_vertices.iter().map(|c| (c.id, cyclic_key(c))).collect();
    cyclics.sort_by(|a, b| a.1.cmp(&b.1));

    let piece_pos: BTreeMap<usize, usize> =
        pieces.iter().enumerate().map(|(n, (id, _))| (*id, n)).collect();
    let cyclic_pos: BTreeMap<usize, usize> =
        cyclics.iter().enumerate().map(|(n, (id, _))| (*id, n)).collect();

    let mut out = String::new();
    for (_, (root, mark)) in &cyclics {
        out.push_str(&format!("cyclic {root}{mark}\n"));
    }
    for (_, (tag, degrees, induced, brank)) in &pieces {
        out.push_str(&format!(
            "piece {tag} rank={brank} degrees={degrees:?} induced={induced:?}\n"
        ));
    }
    let mut lines: Vec<String> = g
        .edges
        .iter()
        .map(|e| {
            let v = g.noncyclic_vertices.iter().find(|v| v.id == e.noncyclic).unwrap();
            format!(
                "edge c{} p{} deg={} img={}",
                cyclic_pos[&e.cyclic],
                piece_pos[&e.noncyclic],
                e.degree,
                format_word(e.image.rep(), v.basis.len())
            )
        })
        .collect();
    lines.sort();
    for l in lines {
        out.push_str(&l);
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::parse_word;

    fn mw(rank: usize, words: &[&str]) -> Multiword {
        let ws: Vec<Word> = words.iter().map(|s| parse_word(s).unwrap()).collect();
        Multiword::new(rank, &ws).unwrap()
    }

    fn cfg(max_len: usize) -> RjsjConfig {
        RjsjConfig { max_len, stab_cap: None }
    }

    fn decomposition(res: &RjsjResult) -> &GraphOfGroups {
        match &res.outcome {
            RjsjOutcome::Decomposition(g) => g,
            other => panic!("expected a decomposition, got {other:?}"),
        }
    }

    fn sorted_basis(g: &GraphOfGroups, vid: usize) -> Vec<String> {
        let v = g.noncyclic_vertices.iter().find(|v| v.id == vid).unwrap();
        let mut s: Vec<String> =
            v.basis.iter().map(|b| format_word(b, g.rank)).collect();
        s.sort();
        s
    }

    fn induced_strings(g: &GraphOfGroups, vid: usize) -> Vec<String> {
        let v = g.noncyclic_vertices.iter().find(|v| v.id == vid).unwrap();
        v.induced
            .classes()
            .iter()
            .map(|c| format_word(c.rep(), v.basis.len()))
            .collect()
    }

    #[test]
    fn enumerate_words_is_reduced_and_complete() {
        let w2 = enumerate_words(2, 2);
        assert_eq!(w2.len(), 12); // 4 * 3
        assert!(w2.iter().all(|w| free_reduce(w) == *w));
        assert_eq!(enumerate_words(2, 0), vec![Vec::new()]);
    }

    #[test]
    fn power_exponent_detects_powers() {
        let rep = parse_word("ab").unwrap();
        assert_eq!(power_exponent(&parse_word("abab").unwrap(), &rep), Some(2));
        assert_eq!(power_exponent(&parse_word("BABA").unwrap(), &rep), Some(-2));
        assert_eq!(power_exponent(&parse_word("aba").unwrap(), &rep), None);
        assert_eq!(power_exponent(&[], &rep), Some(0));
    }

    #[test]
    fn select_excludes_crossing_pairs() {
        // a two-component pair whose own translates cross it is dropped
        let m = mw(2, &["b", "baa"]);
        let (cutsets, _) = scan_candidates(&m, 3).unwrap();
        assert!(cutsets.iter().any(|c| c.root == ConjClass::new(&parse_word("a").unwrap()).unwrap()));
        let selected = select_uncrossed(&m, &cutsets).unwrap();
        assert!(selected.is_empty());

        // marking the generator turns the pair into an uncrossable cut point
        let m2 = mw(2, &["b", "baa", "a"]);
        let (cutsets2, _) = scan_candidates(&m2, 3).unwrap();
        let selected2 = select_uncrossed(&m2, &cutsets2).unwrap();
        assert_eq!(selected2.len(), 1);
        assert_eq!(selected2[0].kind, CutKind::CutPoint);
        assert_eq!(selected2[0].root, ConjClass::new(&parse_word("a").unwrap()).unwrap());
    }

    #[test]
    fn marked_amalgam() {
        let m = mw(2, &["b", "baa", "a"]);
        let res = compute_rjsj(&m, &cfg(3)).unwrap();
        let g = decomposition(&res);
        assert_eq!(g.cyclic_vertices.len(), 1);
        assert_eq!(format_word(g.cyclic_vertices[0].root.rep(), 2), "a");
        assert!(g.cyclic_vertices[0].in_multiword);
        assert_eq!(g.noncyclic_vertices.len(), 1);
        let vid = g.noncyclic_vertices[0].id;
        assert_eq!(sorted_basis(g, vid), vec!["aa", "b"]);
        assert_eq!(g.edges.len(), 1);
        assert_eq!(g.edges[0].degree, 2);
        assert_eq!(format_word(g.edges[0].image.rep(), 2), "b");
        assert_eq!(induced_strings(g, vid), vec!["a", "ab", "b"]);
        assert_eq!(
            g.noncyclic_vertices[0].classification,
            Some(Classification::QHSurface)
        );
        assert!(verify_rjsj(&m, g).pass);
        assert!(!res.certified);
    }

    #[test]
    fn rejection_rule_fires_without_marking() {
        let m = mw(2, &["b", "baa", "a"]);
        let res = compute_rjsj(&m, &cfg(3)).unwrap();
        let g = decomposition(&res).clone();
        assert!(verify_rjsj(&m, &g).pass);

        // the same amalgam presented against the unmarked multiword is the
        // dissolvable-tube configuration
        let m2 = mw(2, &["b", "baa"]);
        let mut g2 = g.clone();
        g2.cyclic_vertices[0].in_multiword = false;
        let report = verify_rjsj(&m2, &g2);
        assert!(!report.pass);
        assert!(report.violations.iter().any(|v| v.contains("dissolvable tube")));
    }

    #[test]
    fn one_vertex_two_edges() {
        let m = mw(2, &["AABaaab"]);
        let res = compute_rjsj(&m, &cfg(3)).unwrap();
        let g = decomposition(&res);
        assert_eq!(g.cyclic_vertices.len(), 1);
        assert_eq!(format_word(g.cyclic_vertices[0].root.rep(), 2), "a");
        assert!(!g.cyclic_vertices[0].in_multiword);
        assert_eq!(g.noncyclic_vertices.len(), 1);
        let vid = g.noncyclic_vertices[0].id;
        assert_eq!(sorted_basis(g, vid), vec!["Baaab", "aa"]);
        let mut edges: Vec<(u64, String)> = g
            .edges
            .iter()
            .map(|e| (e.degree, format_word(e.image.rep(), 2)))
            .collect();
        edges.sort();
        assert_eq!(edges, vec![(2, "a".to_string()), (3, "b".to_string())]);
        assert_eq!(induced_strings(g, vid), vec!["a", "aB", "b"]);
        assert_eq!(
            g.noncyclic_vertices[0].classification,
            Some(Classification::QHSurface)
        );
        assert!(verify_rjsj(&m, g).pass);
    }

    #[test]
    fn rigid_piece_with_two_attachments() {
        let m = mw(2, &["AABAbaBab"]);
        let res = compute_rjsj(&m, &cfg(4)).unwrap();
        let g = decomposition(&res);
        assert_eq!(g.cyclic_vertices.len(), 1);
        assert_eq!(format_word(g.cyclic_vertices[0].root.rep(), 2), "a");
        assert!(!g.cyclic_vertices[0].in_multiword);
        assert_eq!(g.noncyclic_vertices.len(), 1);
        let vid = g.noncyclic_vertices[0].id;
        assert_eq!(sorted_basis(g, vid), vec!["Bab", "a"]);
        assert_eq!(g.edges.len(), 2);
        assert!(g.edges.iter().all(|e| e.degree == 1));
        let mut imgs: Vec<String> =
            g.edges.iter().map(|e| format_word(e.image.rep(), 2)).collect();
        imgs.sort();
        assert_eq!(imgs, vec!["a", "b"]);
        assert_eq!(induced_strings(g, vid), vec!["a", "aaBAb", "b"]);
        assert_eq!(
            g.noncyclic_vertices[0].classification,
            Some(Classification::Rigid { certified: false })
        );
        assert!(verify_rjsj(&m, g).pass);
    }

    #[test]
    fn four_cycle_rank_five() {
        let m = mw(5, &["a", "c", "d", "e", "Ac", "dcDC", "dcDCabABE"]);
        let res = compute_rjsj(&m, &cfg(5)).unwrap();
        let g = decomposition(&res);

        let mut roots: Vec<(String, bool)> = g
            .cyclic_vertices
            .iter()
            .map(|c| (format_word(c.root.rep(), 5), c.in_multiword))
            .collect();
        roots.sort();
        assert_eq!(roots, vec![("a".to_string(), true), ("adcDC".to_string(), false)]);

        assert_eq!(g.noncyclic_vertices.len(), 2);
        assert_eq!(g.edges.len(), 4);
        assert!(g.edges.iter().all(|e| e.degree == 1));

        let rigid: Vec<&NoncyclicVertex> = g
            .noncyclic_vertices
            .iter()
            .filter(|v| matches!(v.classification, Some(Classification::Rigid { .. })))
            .collect();
        let surface: Vec<&NoncyclicVertex> = g
            .noncyclic_vertices
            .iter()
            .filter(|v| v.classification == Some(Classification::QHSurface))
            .collect();
        assert_eq!(rigid.len(), 1);
        assert_eq!(surface.len(), 1);
        assert_eq!(sorted_basis(g, rigid[0].id), vec!["a", "c", "d"]);
        assert_eq!(sorted_basis(g, surface[0].id), vec!["AcdCD", "baB", "e"]);
        assert_eq!(induced_strings(g, surface[0].id), vec!["a", "abc", "b", "c"]);

        // each cyclic vertex attaches once to each piece
        for cv in &g.cyclic_vertices {
            let mut ends: Vec<usize> = g
                .edges
                .iter()
                .filter(|e| e.cyclic == cv.id)
                .map(|e| e.noncyclic)
                .collect();
            ends.sort_unstable();
            ends.dedup();
            assert_eq!(ends.len(), 2);
        }

        assert!(verify_rjsj(&m, g).pass);

        // the refinement loop finds the length-5 root from inside a piece
        // at a scan length where the ambient scan cannot see it directly
        let res_short = compute_rjsj(&m, &cfg(4)).unwrap();
        let g_short = decomposition(&res_short);
        assert_eq!(canonical_summary(g_short, true), canonical_summary(g, true));
    }

    #[test]
    fn circle_multiwords_are_surfaces() {
        for (rank, words) in [(2usize, vec!["b", "baa"]), (2, vec!["abAB"])] {
            let m = mw(rank, &words);
            let res = compute_rjsj(&m, &cfg(3)).unwrap();
            assert!(matches!(res.outcome, RjsjOutcome::QHSurface));
            assert!(res.certified);
            assert_eq!(res.scan_length, 0);
        }
    }

    #[test]
    fn rigid_multiword_stays_whole() {
        let m = mw(3, &["bbaaccabc"]);
        let res = compute_rjsj(&m, &cfg(4)).unwrap();
        assert!(matches!(res.outcome, RjsjOutcome::Rigid));
        assert!(!res.certified);
        assert_eq!(res.scan_length, 4);
    }

    #[test]
    fn free_splittings_are_reported() {
        let m = mw(2, &["a", "b"]);
        match compute_rjsj(&m, &cfg(3)) {
            Err(Error::FreeSplitting(descs)) => assert_eq!(descs.len(), 2),
            other => panic!("expected a free splitting, got {other:?}"),
        }
        let m2 = mw(2, &["ab"]);
        match compute_rjsj(&m2, &cfg(3)) {
            Err(e) => assert!(e.is_free_splitting()),
            Ok(_) => panic!("a single class on two letters splits freely"),
        }
    }

    #[test]
    fn augmentation_is_idempotent() {
        for words in [vec!["AABaaab"], vec!["AABAbaBab"]] {
            let m = mw(2, &words);
            let res = compute_rjsj(&m, &cfg(4)).unwrap();
            let g = decomposition(&res);
            let aug = augmented_multiword(&m, g);
            assert!(aug.contains(&g.cyclic_vertices[0].root));
            let res2 = compute_rjsj(&aug, &cfg(4)).unwrap();
            let g2 = decomposition(&res2);
            assert_eq!(canonical_summary(g, false), canonical_summary(g2, false));
            assert!(verify_rjsj(&aug, g2).pass);
        }
    }

    #[test]
    fn normalize_is_idempotent_and_prunes() {
        let m = mw(2, &["b", "baa", "a"]);
        let res = compute_rjsj(&m, &cfg(3)).unwrap();
        let g = decomposition(&res);

        let mut pruned = g.clone();
        // graft a floating cyclic vertex attached by a single degree-one
        // edge; normalization must dissolve it
        let spare_root = ConjClass::new(&parse_word("b").unwrap()).unwrap();
        pruned.cyclic_vertices.push(CyclicVertex {
            id: 1,
            root: spare_root,
            in_multiword: true,
        });
        let target = pruned.noncyclic_vertices[0].id + 1;
        for v in &mut pruned.noncyclic_vertices {
            v.id += 1;
        }
        for e in &mut pruned.edges {
            e.noncyclic += 1;
        }
        pruned.edges.push(GoGEdge {
            cyclic: 1,
            noncyclic: target,
            degree: 1,
            elem: parse_word("b").unwrap(),
            image: ConjClass::new(&parse_word("a").unwrap()).unwrap(),
        });
        normalize_graph_of_groups(&mut pruned);
        assert_eq!(pruned.cyclic_vertices.len(), 1);
        assert_eq!(pruned.edges.len(), 1);
        let once = canonical_summary(&pruned, true);
        normalize_graph_of_groups(&mut pruned);
        assert_eq!(canonical_summary(&pruned, true), once);
    }

    #[test]
    fn stabilizer_cap_is_honored() {
        let m = mw(2, &["b", "baa", "a"]);
        let tight = RjsjConfig { max_len: 3, stab_cap: Some(0) };
        match compute_rjsj(&m, &tight) {
            Err(Error::StabilizerSearchExhausted(0)) => {}
            other => panic!("expected exhaustion at the cap, got {other:?}"),
        }
    }
}
