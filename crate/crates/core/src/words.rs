//! Words in a free group, conjugacy classes, multiwords, Whitehead moves.
//!
//! A letter is a nonzero i32: +k is the k-th generator, -k its inverse.
//! The letter order is index-first, positive before negative, so for rank 2:
//! a < A < b < B. Everything downstream (canonical forms, graph labels,
//! output) leans on this order being total and cheap.

use crate::error::{Error, Result};
use std::collections::BTreeSet;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Letter(i32);

impl Letter {
    pub fn new(v: i32) -> Result<Letter> {
        if v == 0 {
            return Err(Error::Parse("letter index 0".into()));
        }
        Ok(Letter(v))
    }

    /// 1-based generator index.
    pub fn index(self) -> usize {
        self.0.unsigned_abs() as usize
    }

    pub fn is_positive(self) -> bool {
        self.0 > 0
    }

    pub fn inverse(self) -> Letter {
        Letter(-self.0)
    }

    pub fn raw(self) -> i32 {
        self.0
    }

    pub fn from_index(index: usize, positive: bool) -> Letter {
        debug_assert!(index >= 1);
        let v = index as i32;
        Letter(if positive { v } else { -v })
    }

    /// All 2n letters of a given rank in order a < A < b < B < ...
    pub fn alphabet(rank: usize) -> Vec<Letter> {
        let mut out = Vec::with_capacity(2 * rank);
        for i in 1..=rank {
            out.push(Letter(i as i32));
            out.push(Letter(-(i as i32)));
        }
        out
    }
}

impl PartialOrd for Letter {
    fn partial_cmp(&self, other: &Letter) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Letter {
    fn cmp(&self, other: &Letter) -> std::cmp::Ordering {
        (self.index(), !self.is_positive()).cmp(&(other.index(), !other.is_positive()))
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let i = self.index();
        if i <= 26 {
            let c = (b'a' + (i - 1) as u8) as char;
            if self.is_positive() {
                write!(f, "{c}")
            } else {
                write!(f, "{}", c.to_ascii_uppercase())
            }
        } else if self.is_positive() {
            write!(f, "g{i}")
        } else {
            write!(f, "G{i}")
        }
    }
}

pub type Word = Vec<Letter>;

/// Free reduction, in place semantics via a stack.
pub fn free_reduce(w: &[Letter]) -> Word {
    let mut out: Word = Vec::with_capacity(w.len());
    for &x in w {
        if out.last() == Some(&x.inverse()) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    out
}

pub fn inverse_word(w: &[Letter]) -> Word {
    w.iter().rev().map(|x| x.inverse()).collect()
}

pub fn concat_reduce(a: &[Letter], b: &[Letter]) -> Word {
    let mut out = a.to_vec();
    for &x in b {
        if out.last() == Some(&x.inverse()) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    out
}

/// w = conj · core · conj⁻¹ with core cyclically reduced. Input need not be
/// reduced.
pub fn cyclic_reduce(w: &[Letter]) -> (Word, Word) {
    let mut core = free_reduce(w);
    let mut conj = Vec::new();
    while core.len() >= 2 && core[0] == core[core.len() - 1].inverse() {
        conj.push(core[0]);
        core.pop();
        core.remove(0);
    }
    (core, conj)
}

pub fn is_cyclically_reduced(w: &[Letter]) -> bool {
    if w.is_empty() {
        return true;
    }
    for i in 0..w.len() {
        let j = (i + 1) % w.len();
        if w[j] == w[i].inverse() {
            return false;
        }
    }
    true
}

/// Indivisible root of a cyclically reduced word: (root, exponent) with
/// root^exponent == w.
pub fn extract_root(w: &[Letter]) -> (Word, usize) {
    let n = w.len();
    if n == 0 {
        return (Vec::new(), 1);
    }
    'outer: for p in 1..=n {
        if n % p != 0 {
            continue;
        }
        for i in p..n {
            if w[i] != w[i % p] {
                continue 'outer;
            }
        }
        return (w[..p].to_vec(), n / p);
    }
    unreachable!()
}

pub fn rotate(w: &[Letter], k: usize) -> Word {
    if w.is_empty() {
        return Vec::new();
    }
    let k = k % w.len();
    let mut out = w[k..].to_vec();
    out.extend_from_slice(&w[..k]);
    out
}

/// Least rotation of a cyclically reduced word under the letter order.
pub fn min_rotation(w: &[Letter]) -> Word {
    if w.is_empty() {
        return Vec::new();
    }
    let mut best = w.to_vec();
    for k in 1..w.len() {
        let cand = rotate(w, k);
        if cand < best {
            best = cand;
        }
    }
    best
}

/// Canonical representative of the oriented conjugacy class of w: least
/// rotation of its cyclic reduction. Trivial words map to the empty word.
pub fn oriented_class(w: &[Letter]) -> Word {
    let (core, _) = cyclic_reduce(w);
    min_rotation(&core)
}

pub fn conjugate(w: &[Letter], by: &[Letter]) -> Word {
    // by · w · by⁻¹
    let mut out = by.to_vec();
    out = concat_reduce(&out, w);
    concat_reduce(&out, &inverse_word(by))
}

/// Unoriented conjugacy class of a maximal cyclic subgroup: cyclically
/// reduced, indivisible root, least among all rotations of the root and of
/// its inverse.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ConjClass {
    rep: Word,
}

impl ConjClass {
    pub fn new(w: &[Letter]) -> Result<ConjClass> {
        let (core, _) = cyclic_reduce(w);
        if core.is_empty() {
            return Err(Error::TrivialWord);
        }
        let (root, _) = extract_root(&core);
        let fwd = min_rotation(&root);
        let bwd = min_rotation(&inverse_word(&root));
        Ok(ConjClass {
            rep: if fwd <= bwd { fwd } else { bwd },
        })
    }

    pub fn rep(&self) -> &Word {
        &self.rep
    }

    pub fn len(&self) -> usize {
        self.rep.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn max_index(&self) -> usize {
        self.rep.iter().map(|x| x.index()).max().unwrap_or(0)
    }
}

/// A finite set of nontrivial unoriented conjugacy classes, with ambient
/// rank. Sorted and deduplicated.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Multiword {
    pub rank: usize,
    classes: Vec<ConjClass>,
}

impl Multiword {
    pub fn new(rank: usize, words: &[Word]) -> Result<Multiword> {
        if rank == 0 {
            return Err(Error::ZeroRank);
        }
        let mut classes = Vec::new();
        for w in words {
            for &x in w {
                if x.index() > rank {
                    return Err(Error::LetterOutOfRange(x.to_string(), rank));
                }
            }
            classes.push(ConjClass::new(w)?);
        }
        classes.sort();
        classes.dedup();
        Ok(Multiword { rank, classes })
    }

    pub fn from_classes(rank: usize, mut classes: Vec<ConjClass>) -> Multiword {
        classes.sort();
        classes.dedup();
        Multiword { rank, classes }
    }

    pub fn classes(&self) -> &[ConjClass] {
        &self.classes
    }

    pub fn total_len(&self) -> usize {
        self.classes.iter().map(|c| c.len()).sum()
    }

    pub fn contains(&self, c: &ConjClass) -> bool {
        self.classes.binary_search(c).is_ok()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }
}

// ---------------------------------------------------------------------------
// parsing and printing

/// Parse a single word. Lexical letters a-z / A-Z; `g<k>` / `G<k>` for any
/// index (required beyond 26). "1" denotes the empty word.
pub fn parse_word(s: &str) -> Result<Word> {
    let s = s.trim();
    if s == "1" {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut chars = s.chars().peekable();
    while let Some(c) = chars.next() {
        if (c == 'g' || c == 'G') && chars.peek().is_some_and(|d| d.is_ascii_digit()) {
            let mut num = String::new();
            while let Some(&d) = chars.peek() {
                if d.is_ascii_digit() {
                    num.push(d);
                    chars.next();
                } else {
                    break;
                }
            }
            let idx: usize = num
                .parse()
                .map_err(|_| Error::Parse(format!("bad index in {s:?}")))?;
            if idx == 0 {
                return Err(Error::Parse(format!("index 0 in {s:?}")));
            }
            out.push(Letter::from_index(idx, c == 'g'));
        } else if c.is_ascii_lowercase() {
            out.push(Letter::from_index((c as u8 - b'a') as usize + 1, true));
        } else if c.is_ascii_uppercase() {
            out.push(Letter::from_index((c as u8 - b'A') as usize + 1, false));
        } else {
            return Err(Error::Parse(format!("unexpected {c:?} in {s:?}")));
        }
    }
    Ok(out)
}

/// Rank ≤ 26 prints lexically, larger ranks print every letter in indexed
/// form so output stays unambiguous.
pub fn format_word(w: &[Letter], rank: usize) -> String {
    if w.is_empty() {
        return "1".into();
    }
    let mut s = String::new();
    for &x in w {
        let i = x.index();
        if rank <= 26 {
            debug_assert!(i <= 26);
            let c = (b'a' + (i - 1) as u8) as char;
            s.push(if x.is_positive() {
                c
            } else {
                c.to_ascii_uppercase()
            });
        } else {
            s.push(if x.is_positive() { 'g' } else { 'G' });
            s.push_str(&i.to_string());
        }
    }
    s
}

/// Multiword file: one word per line or comma separated, `#` starts a
/// comment, blank segments ignored.
pub fn parse_multiword_text(text: &str) -> Result<Vec<Word>> {
    let mut out = Vec::new();
    for line in text.lines() {
        let line = match line.find('#') {
            Some(p) => &line[..p],
            None => line,
        };
        for piece in line.split(',') {
            let piece = piece.trim();
            if piece.is_empty() {
                continue;
            }
            out.push(parse_word(piece)?);
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Whitehead automorphisms

/// Type-1 moves permute and invert generators; type-2 moves (A, a) multiply
/// into the multiplier a. A contains a and not a⁻¹.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum WhMove {
    /// table[k-1] = image of generator k
    Perm(Vec<Letter>),
    Cut { a: Letter, set: BTreeSet<Letter> },
}

impl WhMove {
    pub fn inverse(&self) -> WhMove {
        match self {
            WhMove::Perm(table) => {
                let mut inv = vec![Letter(1); table.len()];
                for (k, &img) in table.iter().enumerate() {
                    let src = Letter::from_index(k + 1, true);
                    inv[img.index() - 1] = if img.is_positive() {
                        src
                    } else {
                        src.inverse()
                    };
                }
                WhMove::Perm(inv)
            }
            WhMove::Cut { a, set } => {
                let mut s: BTreeSet<Letter> = set.clone();
                s.remove(a);
                s.insert(a.inverse());
                WhMove::Cut {
                    a: a.inverse(),
                    set: s,
                }
            }
        }
    }

    pub fn apply_letter(&self, x: Letter, out: &mut Word) {
        match self {
            WhMove::Perm(table) => {
                let img = table[x.index() - 1];
                out.push(if x.is_positive() { img } else { img.inverse() });
            }
            WhMove::Cut { a, set } => {
                if x == *a || x == a.inverse() {
                    out.push(x);
                    return;
                }
                let in_set = set.contains(&x);
                let inv_in_set = set.contains(&x.inverse());
                match (in_set, inv_in_set) {
                    (true, false) => {
                        out.push(x);
                        out.push(*a);
                    }
                    (false, true) => {
                        out.push(a.inverse());
                        out.push(x);
                    }
                    (true, true) => {
                        out.push(a.inverse());
                        out.push(x);
                        out.push(*a);
                    }
                    (false, false) => out.push(x),
                }
            }
        }
    }

    pub fn apply(&self, w: &[Letter]) -> Word {
        let mut out = Vec::with_capacity(w.len() * 2);
        for &x in w {
            self.apply_letter(x, &mut out);
        }
        free_reduce(&out)
    }

    pub fn apply_multiword(&self, m: &Multiword) -> Multiword {
        let classes = m
            .classes()
            .iter()
            .map(|c| ConjClass::new(&self.apply(c.rep())).expect("automorphisms preserve nontriviality"))
            .collect();
        Multiword::from_classes(m.rank, classes)
    }
}

/// All nontrivial type-2 moves for a rank, in a fixed order: multiplier in
/// letter order, then the remainder set by subset mask over the alphabet
/// minus {a, a⁻¹}.
pub fn enumerate_type2(rank: usize) -> Vec<WhMove> {
    let alphabet = Letter::alphabet(rank);
    let mut out = Vec::new();
    for &a in &alphabet {
        let rest: Vec<Letter> = alphabet
            .iter()
            .copied()
            .filter(|&x| x != a && x != a.inverse())
            .collect();
        for mask in 1u64..(1 << rest.len()) {
            let mut set: BTreeSet<Letter> = BTreeSet::new();
            set.insert(a);
            for (i, &x) in rest.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    set.insert(x);
                }
            }
            out.push(WhMove::Cut { a, set });
        }
    }
    out
}

/// Greedy Whitehead minimization: apply the first steepest strictly reducing
/// type-2 move until none reduces. Returns the minimal multiword and the
/// moves applied, in application order.
pub fn minimize(m: &Multiword) -> (Multiword, Vec<WhMove>) {
    let moves = enumerate_type2(m.rank);
    let mut cur = m.clone();
    let mut applied = Vec::new();
    loop {
        let cur_len = cur.total_len();
        let mut best: Option<(usize, &WhMove)> = None;
        for mv in &moves {
            let cand = mv.apply_multiword(&cur);
            let l = cand.total_len();
            if l < cur_len && best.map_or(true, |(bl, _)| l < bl) {
                best = Some((l, mv));
            }
        }
        match best {
            Some((_, mv)) => {
                cur = mv.apply_multiword(&cur);
                applied.push(mv.clone());
            }
            None => return (cur, applied),
        }
    }
}
