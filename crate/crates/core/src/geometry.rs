//! Planar rotation-system certificates.
//!
//! A multiword is geometric when its curves can be drawn disjointly on the
//! boundary of a handlebody. Cutting the handlebody along its defining discs
//! flattens the boundary pattern into a disc-with-bands diagram: each letter
//! pair (x, x⁻¹) contributes one band, and the diagram is readable off the
//! Whitehead graph once every vertex carries a cyclic order of its edge ends.
//! The pattern closes up over the bands exactly when, for each pair, the
//! occurrence pairing carries the order at x to the order at x⁻¹ reversed
//! (orientable band) or preserved (reversing band), and the diagram is planar
//! exactly when the rotation system has Euler characteristic 2.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::rjsj::{Classification, GraphOfGroups, RjsjOutcome, RjsjResult};
use crate::whgraph::{free_factors, WhGraph};
use crate::words::{format_word, minimize, ConjClass, Letter, Multiword, WhMove, Word};

/// How a band identifies the two discs of its letter pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum HandleBit {
    Orientable,
    Reversing,
}

impl std::fmt::Display for HandleBit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            HandleBit::Orientable => write!(f, "orientable"),
            HandleBit::Reversing => write!(f, "reversing"),
        }
    }
}

/// One end of a Whitehead edge: (edge index, true = the head side).
///
/// Edge p of a class w runs from inv(w[p-1]) (tail) to w[p] (head); the head
/// end sits at vertex w[p].
pub type End = (usize, bool);

/// A consistent planar rotation system: a cyclic order of edge ends at every
/// non-isolated vertex, plus the identification bit of every generator pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RotationCertificate {
    pub rotations: BTreeMap<Letter, Vec<End>>,
    /// generator index (1-based) → bit
    pub bits: BTreeMap<usize, HandleBit>,
}

impl RotationCertificate {
    pub fn bit(&self, gen: usize) -> Option<HandleBit> {
        self.bits.get(&gen).copied()
    }
}

/// Edge ends grouped by vertex, each list sorted by (edge index, side).
fn ends_by_vertex(g: &WhGraph) -> BTreeMap<Letter, Vec<End>> {
    let mut out: BTreeMap<Letter, Vec<End>> = BTreeMap::new();
    for (i, e) in g.edges().iter().enumerate() {
        out.entry(e.u).or_default().push((i, false));
        out.entry(e.v).or_default().push((i, true));
    }
    for ends in out.values_mut() {
        ends.sort();
    }
    out
}

/// The occurrence pairing: the letter occurrence behind edge p contributes
/// the head end of edge p (at w[p]) and the tail end of edge p+1 (at
/// inv(w[p])); those two ends are the two footprints of one strand running
/// over the band. Involution exchanging the ends at x with the ends at x⁻¹.
fn occurrence_pairing(g: &WhGraph, m: &Multiword) -> BTreeMap<End, End> {
    let mut by_prov: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (i, e) in g.edges().iter().enumerate() {
        by_prov.insert((e.prov.class, e.prov.pos), i);
    }
    let mut mu = BTreeMap::new();
    for (i, e) in g.edges().iter().enumerate() {
        let len = m.classes()[e.prov.class].rep().len();
        let succ = by_prov[&(e.prov.class, (e.prov.pos + 1) % len)];
        mu.insert((i, true), (succ, false));
        mu.insert((succ, false), (i, true));
    }
    mu
}

/// Count the faces of a rotation system by tracing dart orbits of σ∘α.
/// Dart 2e runs tail→head along edge e, dart 2e+1 head→tail; the reverse of
/// a dart is its out-going end at the dart's head, and the face continues
/// along the next end in that vertex's cyclic order.
pub fn face_count(g: &WhGraph, rotations: &BTreeMap<Letter, Vec<End>>) -> usize {
    let ne = g.edge_count();
    if ne == 0 {
        return 0;
    }
    let mut pos: BTreeMap<End, (Letter, usize)> = BTreeMap::new();
    for (&v, rot) in rotations {
        for (i, &end) in rot.iter().enumerate() {
            pos.insert(end, (v, i));
        }
    }
    let mut seen = vec![false; 2 * ne];
    let mut faces = 0;
    for start in 0..2 * ne {
        if seen[start] {
            continue;
        }
        faces += 1;
        let mut d = start;
        loop {
            seen[d] = true;
            let r = d ^ 1;
            let (v, i) = pos[&(r / 2, r % 2 == 1)];
            let rot = &rotations[&v];
            let (e, head) = rot[(i + 1) % rot.len()];
            d = 2 * e + head as usize;
            if d == start {
                break;
            }
        }
    }
    faces
}

/// V − E + F = 2 for the traced system (V counts non-isolated vertices).
fn is_planar_system(g: &WhGraph, rotations: &BTreeMap<Letter, Vec<End>>) -> bool {
    let v = rotations.len() as i64;
    let e = g.edge_count() as i64;
    let f = face_count(g, rotations) as i64;
    v - e + f == 2
}

/// All permutations of `items` in lexicographic order.
fn lex_permutations<T: Clone + Ord>(items: &[T]) -> Vec<Vec<T>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for (i, x) in items.iter().enumerate() {
        let mut rest: Vec<T> = items.to_vec();
        rest.remove(i);
        for mut tail in lex_permutations(&rest) {
            let mut p = vec![x.clone()];
            p.append(&mut tail);
            out.push(p);
        }
    }
    out
}

/// Order at x⁻¹ forced by the order at x: push every end over the band with
/// the pairing, reversing the cyclic order for an orientable band and
/// preserving it for a reversing one.
fn derive_partner(sigma: &[End], mu: &BTreeMap<End, End>, bit: HandleBit) -> Vec<End> {
    let mut out = vec![mu[&sigma[0]]];
    match bit {
        HandleBit::Orientable => {
            for &e in sigma[1..].iter().rev() {
                out.push(mu[&e]);
            }
        }
        HandleBit::Reversing => {
            for &e in &sigma[1..] {
                out.push(mu[&e]);
            }
        }
    }
    out
}

fn search(
    g: &WhGraph,
    ends: &BTreeMap<Letter, Vec<End>>,
    mu: &BTreeMap<End, End>,
    pairs: &[usize],
    depth: usize,
    rotations: &mut BTreeMap<Letter, Vec<End>>,
    bits: &mut BTreeMap<usize, HandleBit>,
) -> bool {
    if depth == pairs.len() {
        return is_planar_system(g, rotations);
    }
    let k = pairs[depth];
    let pos_l = Letter::from_index(k, true);
    let neg_l = pos_l.inverse();
    let base = &ends[&pos_l];
    for tail in lex_permutations(&base[1..]) {
        let mut sigma = vec![base[0]];
        sigma.extend(tail);
        for bit in [HandleBit::Orientable, HandleBit::Reversing] {
            let partner = derive_partner(&sigma, mu, bit);
            rotations.insert(pos_l, sigma.clone());
            rotations.insert(neg_l, partner);
            bits.insert(k, bit);
            if search(g, ends, mu, pairs, depth + 1, rotations, bits) {
                return true;
            }
        }
    }
    rotations.remove(&pos_l);
    rotations.remove(&neg_l);
    bits.remove(&k);
    false
}

/// Search for a consistent planar rotation system on the Whitehead graph of
/// `m`. The free choices are one cyclic order per generator pair — pinned at
/// the positive letter, first end fixed to quotient out rotation — and one
/// bit per pair; the order at the negative letter is derived. Choices are
/// enumerated in canonical order (generators ascending, orders
/// lexicographic, orientable before reversing) and the first system with
/// Euler characteristic 2 is returned, so the result is deterministic.
///
/// Expects a connected Whitehead graph; split off free factors first.
pub fn find_consistent_embedding(m: &Multiword) -> Option<RotationCertificate> {
    let g = WhGraph::new(m);
    if g.edge_count() == 0 {
        return None;
    }
    let ends = ends_by_vertex(&g);
    let mu = occurrence_pairing(&g, m);
    let pairs: Vec<usize> = ends
        .keys()
        .filter(|l| l.is_positive())
        .map(|l| l.index())
        .collect();
    let mut rotations = BTreeMap::new();
    let mut bits = BTreeMap::new();
    if search(&g, &ends, &mu, &pairs, 0, &mut rotations, &mut bits) {
        Some(RotationCertificate { rotations, bits })
    } else {
        None
    }
}

/// One free factor of the minimized multiword, relabeled to its own rank.
#[derive(Debug, Clone)]
pub struct FactorReport {
    pub multiword: Multiword,
    pub certificate: Option<RotationCertificate>,
}

#[derive(Debug, Clone)]
pub struct GeomReport {
    pub geometric: bool,
    /// minimized multiword the certificates refer to
    pub minimized: Multiword,
    pub factors: Vec<FactorReport>,
}

fn relabel_to_local(gens: &[usize], classes: &[ConjClass]) -> Multiword {
    let map: BTreeMap<usize, usize> = gens.iter().enumerate().map(|(j, &g)| (g, j + 1)).collect();
    let classes = classes
        .iter()
        .map(|c| {
            let w: Word = c
                .rep()
                .iter()
                .map(|l| Letter::from_index(map[&l.index()], l.is_positive()))
                .collect();
            ConjClass::new(&w).expect("relabeling preserves nontriviality")
        })
        .collect();
    Multiword::from_classes(gens.len(), classes)
}

/// Decide geometricity: minimize, split into free factors, and search each
/// factor for a consistent planar rotation system. The multiword is
/// geometric iff every factor carries a certificate.
pub fn is_geometric(m: &Multiword) -> Result<GeomReport> {
    let (mm, _) = minimize(m);
    let factors = free_factors(&mm)?;
    let mut reports = Vec::new();
    let mut all = true;
    for f in &factors {
        if f.classes.is_empty() {
            // bare handle, nothing to draw
            continue;
        }
        let local = relabel_to_local(&f.gens, &f.classes);
        let certificate = find_consistent_embedding(&local);
        all &= certificate.is_some();
        reports.push(FactorReport {
            multiword: local,
            certificate,
        });
    }
    Ok(GeomReport {
        geometric: all,
        minimized: mm,
        factors: reports,
    })
}

/// Per-piece geometricity verdicts behind a virtual-geometricity answer.
#[derive(Debug, Clone)]
pub struct VgReport {
    pub verdict: bool,
    /// (piece id, whether its induced multiword is geometric); empty when
    /// the multiword did not decompose.
    pub pieces: Vec<(usize, bool)>,
}

/// Virtual geometricity through the decomposition: a rigid multiword is
/// virtually geometric exactly when it is geometric, a surface always is,
/// and a proper decomposition is virtually geometric exactly when the
/// induced multiword of every non-surface piece is geometric.
pub fn is_virtually_geometric(m: &Multiword, rjsj: &RjsjResult) -> Result<VgReport> {
    match &rjsj.outcome {
        RjsjOutcome::Rigid => {
            let verdict = is_geometric(m)?.geometric;
            Ok(VgReport { verdict, pieces: Vec::new() })
        }
        RjsjOutcome::QHSurface => Ok(VgReport { verdict: true, pieces: Vec::new() }),
        RjsjOutcome::Decomposition(g) => {
            let mut pieces = Vec::new();
            let mut verdict = true;
            for v in &g.noncyclic_vertices {
                let ok = match &v.classification {
                    Some(Classification::QHSurface) => true,
                    _ => is_geometric(&v.induced)?.geometric,
                };
                verdict &= ok;
                pieces.push((v.id, ok));
            }
            Ok(VgReport { verdict, pieces })
        }
    }
}

/// Whether traversing `w` reverses orientation under the certificate's
/// band bits. None when some letter has no band in the certificate.
fn orientation_reverses(cert: &RotationCertificate, w: &[Letter]) -> Option<bool> {
    let mut rev = false;
    for l in w {
        if cert.bit(l.index())? == HandleBit::Reversing {
            rev = !rev;
        }
    }
    Some(rev)
}

/// Check whether the pieces of a decomposition assemble into one handlebody
/// realization of the whole multiword. Each cyclic vertex must fit a solid
/// torus (all attachment degrees equal, a marked root adding one more
/// degree-1 curve, and all attachments of one neighborhood type) or a solid
/// Klein bottle (degrees all two, at most one extra one). An empty report
/// means the multiword itself is geometric by the assembly.
pub fn assembly_obstructions(m: &Multiword, g: &GraphOfGroups) -> Result<Vec<String>> {
    // one certificate per piece, in its minimized coordinates
    let mut certs: BTreeMap<usize, (Vec<WhMove>, RotationCertificate)> = BTreeMap::new();
    for v in &g.noncyclic_vertices {
        let (mind, moves) = minimize(&v.induced);
        let cert =
            find_consistent_embedding(&mind).ok_or(Error::MissingCertificate(v.id))?;
        certs.insert(v.id, (moves, cert));
    }

    let mut obstructions = Vec::new();
    for cv in &g.cyclic_vertices {
        let incident: Vec<_> = g.edges.iter().filter(|e| e.cyclic == cv.id).collect();
        let mut degrees: Vec<u64> = incident.iter().map(|e| e.degree).collect();
        if m.contains(&cv.root) {
            degrees.push(1);
        }
        degrees.sort_unstable();
        let torus_ok = degrees.windows(2).all(|w| w[0] == w[1]);
        let ones = degrees.iter().filter(|&&d| d == 1).count();
        let klein_ok = ones <= 1 && degrees.iter().all(|&d| d == 1 || d == 2);

        let mut flags: Vec<bool> = Vec::new();
        for e in &incident {
            let (moves, cert) = &certs[&e.noncyclic];
            let mut w = e.image.rep().clone();
            for mv in moves {
                w = mv.apply(&w);
            }
            let rev = orientation_reverses(cert, &w)
                .ok_or(Error::MissingCertificate(e.noncyclic))?;
            flags.push(rev);
        }
        let agree = flags.windows(2).all(|w| w[0] == w[1]);

        if (torus_ok && agree) || klein_ok {
            continue;
        }
        let root = format_word(cv.root.rep(), g.rank);
        if torus_ok {
            obstructions.push(format!(
                "cyclic vertex {root}: attachments mix annulus and Möbius neighborhoods"
            ));
        } else {
            obstructions.push(format!(
                "cyclic vertex {root}: attachment degrees {degrees:?} fit no solid torus or Klein bottle"
            ));
        }
    }
    Ok(obstructions)
}

/// All ends of `rotations`, for sanity checks.
#[cfg(test)]
fn all_ends(rotations: &BTreeMap<Letter, Vec<End>>) -> std::collections::BTreeSet<End> {
    rotations.values().flatten().copied().collect()
}
