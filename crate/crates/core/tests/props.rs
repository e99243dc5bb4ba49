//! Cross-cutting invariants on randomized inputs and the named example
//! multiwords: voltage covers, crossing symmetry, Euler identity,
//! augmentation stability, and minimization.

use proptest::prelude::*;

use rjsj_core::axes::{crosses, scan_candidates, AxisGraph, CutKind};
use rjsj_core::rjsj::{augmented_multiword, canonical_summary};
use rjsj_core::whgraph::WhGraph;
use rjsj_core::words::{minimize, parse_multiword_text, ConjClass, Letter, Word};
use rjsj_core::{compute_rjsj, verify_rjsj, Multiword, RjsjConfig, RjsjOutcome};

/// (rank, words, scan length) for the named examples.
const CORPUS: &[(usize, &str, usize)] = &[
    (2, "ab, ABab", 4),
    (2, "b, baa", 3),
    (2, "b, baa, a", 3),
    (2, "AAABaab", 4),
    (2, "AABAbaBab", 8),
    (2, "AAABab", 6),
    (2, "AAABaaab", 6),
    (2, "abAB", 3),
    (3, "bbaaccabc", 4),
    (5, "a, c, d, e, Ac, dcDC, dcDCabABE", 4),
];

fn mw(rank: usize, text: &str) -> Multiword {
    Multiword::new(rank, &parse_multiword_text(text).unwrap()).unwrap()
}

fn cfg(max_len: usize) -> RjsjConfig {
    RjsjConfig { max_len, ..RjsjConfig::default() }
}

fn arb_word(rank: usize, max_len: usize) -> BoxedStrategy<Word> {
    prop::collection::vec(
        (1..=rank, any::<bool>()).prop_map(|(i, p)| Letter::from_index(i, p)),
        1..=max_len,
    )
    .boxed()
}

fn arb_multiword(rank: usize, max_words: usize, max_len: usize) -> BoxedStrategy<Multiword> {
    prop::collection::vec(arb_word(rank, max_len), 1..=max_words)
        .prop_filter_map("word reduces to identity", move |ws| Multiword::new(rank, &ws).ok())
        .boxed()
}

/// Minimized multiwords whose Whitehead graph is connected without cut
/// vertices: the precondition for the cut-set machinery.
fn arb_prepared(rank: usize, max_words: usize, max_len: usize) -> BoxedStrategy<Multiword> {
    arb_multiword(rank, max_words, max_len)
        .prop_filter_map("not prepared after minimization", |m| {
            let (mm, _) = minimize(&m);
            let rep = WhGraph::new(&mm).connectivity();
            (rep.connected && rep.cut_vertices.is_empty()).then_some(mm)
        })
        .boxed()
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 { a } else { gcd(b, a % b) }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu((0..n).collect())
    }
    fn find(&mut self, x: usize) -> usize {
        if self.0[x] != x {
            let r = self.find(self.0[x]);
            self.0[x] = r;
        }
        self.0[x]
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        self.0[ra] = rb;
    }
}

/// Components of the K-fold cyclic cover of the axis graph, found by
/// explicitly gluing K copies of the fundamental domain along the voltages.
fn windowed_components(ax: &AxisGraph, k: u64) -> u64 {
    let k = k as usize;
    let n = ax.qvertices().len();
    let mut dsu = Dsu::new(n * k);
    for e in ax.qedges() {
        for s in 0..k {
            let t = (s as i64 + e.voltage).rem_euclid(k as i64) as usize;
            dsu.union(e.u * k + s, e.v * k + t);
        }
    }
    let mut roots: Vec<usize> = (0..n * k).map(|x| dsu.find(x)).collect();
    roots.sort_unstable();
    roots.dedup();
    roots.len() as u64
}

// (i) the per-component monodromy degrees predict every finite cyclic
// cover's component count, checked against brute-force gluing
proptest! {
    #![proptest_config(ProptestConfig {
        cases: 200,
        max_global_rejects: 65536,
        failure_persistence: None,
        .. ProptestConfig::default()
    })]
    #[test]
    fn voltage_counts_match_windowed_brute_force(
        (ax, comps) in (2usize..=3)
            .prop_flat_map(|rank| (arb_prepared(rank, 3, 6), arb_word(rank, 4)))
            .prop_filter_map("axis graph unavailable", |(m, g)| {
                let class = ConjClass::new(&g).ok()?;
                let ax = AxisGraph::new(&m, &class).ok()?;
                let comps = ax.cut_components().ok()?;
                Some((ax, comps))
            })
    ) {
        let ds: Vec<u64> = comps.iter().map(|&(_, d)| d).collect();
        prop_assert!(!ds.is_empty());
        prop_assert!(ds.iter().all(|&d| d >= 1));
        let l = ds.iter().copied().fold(1u64, lcm).min(720);
        for k in [2 * l, 2 * l + 1, 7] {
            let expected: u64 = ds.iter().map(|&d| gcd(k, d)).sum();
            prop_assert_eq!(windowed_components(&ax, k), expected, "window {}", k);
        }
    }
}

// (ii) crossing is symmetric on every scanned pair of cut pairs
proptest! {
    #![proptest_config(ProptestConfig {
        cases: 50,
        max_global_rejects: 65536,
        failure_persistence: None,
        .. ProptestConfig::default()
    })]
    #[test]
    fn crosses_is_symmetric(m in (2usize..=3).prop_flat_map(|r| arb_prepared(r, 3, 6))) {
        let (cutsets, _) = scan_candidates(&m, 4).unwrap();
        let pairs: Vec<_> = cutsets.iter().filter(|c| c.kind == CutKind::CutPair).collect();
        for i in 0..pairs.len() {
            for j in i + 1..pairs.len() {
                let xy = crosses(&m, &pairs[i].root, pairs[j].root.rep()).unwrap();
                let yx = crosses(&m, &pairs[j].root, pairs[i].root.rep()).unwrap();
                prop_assert_eq!(xy, yx, "{:?} vs {:?}", pairs[i].root, pairs[j].root);
            }
        }
    }
}

// (iii) Euler identity: piece ranks account for the ambient rank on every
// emitted decomposition
#[test]
fn euler_identity_on_corpus_decompositions() {
    for &(rank, text, len) in CORPUS {
        let m = mw(rank, text);
        let res = compute_rjsj(&m, &cfg(len)).unwrap();
        if let RjsjOutcome::Decomposition(g) = &res.outcome {
            let sum: usize = g.noncyclic_vertices.iter().map(|v| v.basis.len() - 1).sum();
            assert_eq!(sum, rank - 1, "euler identity fails on {text}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 40,
        max_global_rejects: 65536,
        failure_persistence: None,
        .. ProptestConfig::default()
    })]
    #[test]
    fn euler_identity_on_random_decompositions(
        m in (2usize..=2).prop_flat_map(|r| arb_multiword(r, 3, 5))
    ) {
        // only emitted decompositions are in scope: skip splittings and
        // exhausted searches
        if let Ok(res) = compute_rjsj(&m, &cfg(3)) {
            if let RjsjOutcome::Decomposition(g) = &res.outcome {
                let sum: usize = g.noncyclic_vertices.iter().map(|v| v.basis.len() - 1).sum();
                prop_assert_eq!(sum, m.rank - 1);
            }
        }
    }
}

// (iv) augmenting by the decomposition's own edge roots does not change the
// decomposition
#[test]
fn rjsj_stable_under_augmentation_on_corpus() {
    for &(rank, text, len) in CORPUS {
        let m = mw(rank, text);
        let res = compute_rjsj(&m, &cfg(len)).unwrap();
        let g = match &res.outcome {
            RjsjOutcome::Decomposition(g) => g,
            _ => continue,
        };
        let aug = augmented_multiword(&m, g);
        let aug_len = len.max(
            g.cyclic_vertices.iter().map(|c| c.root.len()).max().unwrap_or(0),
        );
        let res2 = compute_rjsj(&aug, &cfg(aug_len)).unwrap();
        let g2 = match &res2.outcome {
            RjsjOutcome::Decomposition(g2) => g2,
            other => panic!("augmented {text} no longer decomposes: {other:?}"),
        };
        assert!(verify_rjsj(&aug, g2).pass, "augmented {text} fails verification");
        assert_eq!(
            canonical_summary(g, false),
            canonical_summary(g2, false),
            "augmentation changed the decomposition of {text}"
        );
    }
}

// (v) minimization is monotone and idempotent
proptest! {
    #![proptest_config(ProptestConfig {
        cases: 500,
        max_global_rejects: 65536,
        failure_persistence: None,
        .. ProptestConfig::default()
    })]
    #[test]
    fn minimize_is_monotone_and_idempotent(
        m in (2usize..=3).prop_flat_map(|r| arb_multiword(r, 4, 8))
    ) {
        let (m1, _) = minimize(&m);
        prop_assert!(m1.total_len() <= m.total_len());
        let (m2, _) = minimize(&m1);
        prop_assert_eq!(m1.classes(), m2.classes());
    }
}
