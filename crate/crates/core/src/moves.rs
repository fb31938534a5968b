//! Reidemeister moves on pair codes, and grouping of codes into classes of
//! diagrams connected by moves.
//!
//! Moves are applied to a realized diagram. Insertions use its faces to find
//! pairs of segments that can be pushed across each other, and every emitted
//! code is checked for a planar embedding that extends the signs of the
//! untouched crossings.

use std::collections::{BTreeSet, BinaryHeap, HashMap, HashSet};
use std::cmp::Reverse;
use std::fmt;

use rayon::prelude::*;

use crate::code::{Label, PairCode};
use crate::realize::{realize, realize_extending, Diagram};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MoveError {
    #[error("input code {code} has more than {bound} crossings")]
    BoundTooSmall { code: PairCode, bound: usize },
    #[error("input code {0} is not drawable")]
    NotRealizable(PairCode),
    #[error("class store line {line}: {reason}")]
    Store { line: usize, reason: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MoveKind {
    R1Add,
    R1Remove,
    R2Add,
    R2Remove,
    R3,
}

impl MoveKind {
    /// The move that undoes this one.
    pub fn inverse(self) -> MoveKind {
        match self {
            MoveKind::R1Add => MoveKind::R1Remove,
            MoveKind::R1Remove => MoveKind::R1Add,
            MoveKind::R2Add => MoveKind::R2Remove,
            MoveKind::R2Remove => MoveKind::R2Add,
            MoveKind::R3 => MoveKind::R3,
        }
    }
}

/// One pass of the knot through a crossing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Visit {
    crossing: usize,
    over: bool,
}

/// Traversal order of crossing visits; position `p` carries label `p + 1`.
fn visits(code: &PairCode) -> Vec<Visit> {
    let t = code.tables();
    (1..=code.label_count()).map(|l| Visit { crossing: t.crossing[l], over: t.over[l] }).collect()
}

/// Builds a code from a visit sequence, carrying per-crossing signs along as
/// a hint indexed like the new code's pairs.
fn assemble(seq: &[Visit], signs: &[i8]) -> (PairCode, Vec<i8>) {
    let mut over = vec![0 as Label; signs.len()];
    let mut under = vec![0 as Label; signs.len()];
    for (p, v) in seq.iter().enumerate() {
        let l = (p + 1) as Label;
        if v.over {
            over[v.crossing] = l;
        } else {
            under[v.crossing] = l;
        }
    }
    let mut pairs: Vec<(Label, Label, i8)> = (0..signs.len())
        .filter(|&c| over[c] != 0)
        .map(|c| (over[c], under[c], signs[c]))
        .collect();
    pairs.sort_unstable();
    let hint = pairs.iter().map(|p| p.2).collect();
    (PairCode::from_raw(pairs.into_iter().map(|(o, u, _)| (o, u)).collect()), hint)
}

/// Segment `s` (1-based) runs from position `s - 1` to position `s mod 2n`.
fn ends(s: Label, m: usize) -> (usize, usize) {
    (s as usize - 1, s as usize % m)
}

struct Candidate {
    kind: MoveKind,
    code: PairCode,
    hint: Vec<i8>,
}

/// Raw move results of a realized diagram, before the embedding check.
///
/// Pokes are tried between segments on a common face, or between every
/// pair of segments when `all_pairs` is set. Removals and triangle slides
/// are found on the code itself: two segments joining the same two
/// crossings always bound a bigon in some embedding of the code, and three
/// segments closing a cycle through three crossings bound a triangle.
fn candidates(d: &Diagram, max_n: usize, kinds: &[MoveKind], all_pairs: bool) -> Vec<Candidate> {
    let code = d.code();
    let n = code.crossing_count();
    let m = code.label_count();
    let seq = visits(code);
    let signs = d.signs();
    let mut out = Vec::new();
    let mut push = |kind, seq: &[Visit], signs: &[i8]| {
        let (code, hint) = assemble(seq, signs);
        out.push(Candidate { kind, code, hint });
    };

    // insertion points: before index s for segment s; the 0-crossing circle
    // has the single point 0
    let gaps: Vec<usize> = if n == 0 { vec![0] } else { (1..=m).collect() };
    let mut grown = signs.to_vec();

    if n < max_n && kinds.contains(&MoveKind::R1Add) {
        grown.push(0);
        let c = n;
        for &g in &gaps {
            for first_over in [true, false] {
                let mut s = seq.clone();
                s.splice(g..g, [Visit { crossing: c, over: first_over }, Visit { crossing: c, over: !first_over }]);
                push(MoveKind::R1Add, &s, &grown);
            }
        }
        grown.pop();
    }

    if kinds.contains(&MoveKind::R1Remove) {
        let kinks: BTreeSet<usize> =
            (0..m).filter(|&p| seq[p].crossing == seq[(p + 1) % m].crossing).map(|p| seq[p].crossing).collect();
        for c in kinks {
            let s: Vec<Visit> = seq.iter().copied().filter(|v| v.crossing != c).collect();
            push(MoveKind::R1Remove, &s, signs);
        }
    }

    if n + 2 <= max_n && kinds.contains(&MoveKind::R2Add) {
        grown.extend([0, 0]);
        let (a, b) = (n, n + 1);
        let mut pairs: BTreeSet<(usize, usize)> = BTreeSet::new();
        if all_pairs {
            for (i, &g) in gaps.iter().enumerate() {
                for &h in &gaps[i..] {
                    pairs.insert((g, h));
                }
            }
        } else {
            pairs.extend(gaps.iter().map(|&g| (g, g)));
            for face in d.faces() {
                for (i, x) in face.iter().enumerate() {
                    for y in &face[i + 1..] {
                        let (s, t) = (x.segment as usize, y.segment as usize);
                        pairs.insert((s.min(t), s.max(t)));
                    }
                }
            }
        }
        for (g, h) in pairs {
            for parallel in [true, false] {
                for first_over in [true, false] {
                    let v = |c, over| Visit { crossing: c, over };
                    let one = [v(a, first_over), v(b, first_over)];
                    let two = if parallel {
                        [v(a, !first_over), v(b, !first_over)]
                    } else {
                        [v(b, !first_over), v(a, !first_over)]
                    };
                    let mut s = seq.clone();
                    if g == h {
                        s.splice(g..g, one.into_iter().chain(two));
                    } else {
                        s.splice(h..h, two);
                        s.splice(g..g, one);
                    }
                    push(MoveKind::R2Add, &s, &grown);
                }
            }
        }
        grown.truncate(n);
    }

    // segments joining two different crossings, as (start, end) positions
    let links: Vec<(usize, usize)> = (1..=m as Label)
        .map(|s| ends(s, m))
        .filter(|&(p, q)| seq[p].crossing != seq[q].crossing)
        .collect();

    if kinds.contains(&MoveKind::R2Remove) {
        let mut removed = BTreeSet::new();
        for (i, &(p0, p1)) in links.iter().enumerate() {
            for &(q0, q1) in &links[i + 1..] {
                let (c1, c2) = (seq[p0].crossing, seq[p1].crossing);
                let joins = [seq[q0].crossing, seq[q1].crossing];
                // a bigon needs both passes at each crossing, and one strand
                // over at both crossings
                if !(joins.contains(&c1) && joins.contains(&c2))
                    || [q0, q1].iter().any(|q| [p0, p1].contains(q))
                    || seq[p0].over != seq[p1].over
                    || !removed.insert((c1.min(c2), c1.max(c2)))
                {
                    continue;
                }
                let s: Vec<Visit> = seq.iter().copied().filter(|v| v.crossing != c1 && v.crossing != c2).collect();
                push(MoveKind::R2Remove, &s, signs);
            }
        }
    }

    if kinds.contains(&MoveKind::R3) {
        for (i, &x) in links.iter().enumerate() {
            for (j, &y) in links.iter().enumerate().skip(i + 1) {
                for &z in &links[j + 1..] {
                    let segs = [x, y, z];
                    let mut positions: Vec<usize> = segs.iter().flat_map(|&(p, q)| [p, q]).collect();
                    positions.sort_unstable();
                    positions.dedup();
                    if positions.len() != 6 {
                        continue;
                    }
                    let mut count = BTreeSet::new();
                    let mut hits: HashMap<usize, u8> = HashMap::new();
                    for &p in &positions {
                        count.insert(seq[p].crossing);
                        *hits.entry(seq[p].crossing).or_default() += 1;
                    }
                    if count.len() != 3 || hits.values().any(|&h| h != 2) {
                        continue;
                    }
                    let mut pattern: Vec<u8> = segs.iter().map(|&(p, q)| seq[p].over as u8 + seq[q].over as u8).collect();
                    pattern.sort_unstable();
                    if pattern != [0, 1, 2] {
                        continue;
                    }
                    let mut s = seq.clone();
                    for &(p, q) in &segs {
                        s.swap(p, q);
                    }
                    push(MoveKind::R3, &s, signs);
                }
            }
        }
    }
    out
}

/// Realizes a candidate, keeping the signs of untouched crossings when some
/// embedding allows it.
fn check(c: &Candidate, fallback: bool) -> Option<Diagram> {
    realize_extending(&c.code, &c.hint).or_else(|| if fallback { realize(&c.code).ok() } else { None })
}

const ALL_MOVES: [MoveKind; 5] = [MoveKind::R1Add, MoveKind::R1Remove, MoveKind::R2Add, MoveKind::R2Remove, MoveKind::R3];

/// All single-move neighbours of a realized diagram as realized diagrams.
/// Insertions stop at `max_n` crossings.
pub fn expand(d: &Diagram, max_n: usize) -> Vec<(MoveKind, Diagram)> {
    candidates(d, max_n, &ALL_MOVES, false)
        .into_iter()
        .filter_map(|c| check(&c, c.kind != MoveKind::R2Add).map(|d| (c.kind, d)))
        .collect()
}

fn neighbors_of_kind(code: &PairCode, max_n: usize, kinds: &[MoveKind]) -> BTreeSet<PairCode> {
    let Ok(d) = realize(code) else {
        return BTreeSet::new();
    };
    candidates(&d, max_n, kinds, true).into_iter().filter(|c| check(c, true).is_some()).map(|c| c.code).collect()
}

/// Kink insertions (up to `max_n` crossings) and kink removals. Codes that
/// are not drawable have no neighbours.
pub fn r1_neighbors(code: &PairCode, max_n: usize) -> BTreeSet<PairCode> {
    neighbors_of_kind(code, max_n, &[MoveKind::R1Add, MoveKind::R1Remove])
}

/// Two-crossing pokes (up to `max_n` crossings) and their removals.
pub fn r2_neighbors(code: &PairCode, max_n: usize) -> BTreeSet<PairCode> {
    neighbors_of_kind(code, max_n, &[MoveKind::R2Add, MoveKind::R2Remove])
}

/// Triangle slides: three crossings joined by a cycle of segments, with one
/// strand over at both of its crossings and one under at both.
pub fn r3_neighbors(code: &PairCode) -> BTreeSet<PairCode> {
    neighbors_of_kind(code, code.crossing_count(), &[MoveKind::R3])
}

/// Rewrites a realized diagram in canonical labels, keeping its signs.
pub fn canonical_diagram(d: &Diagram) -> Diagram {
    let (canon, k, eps) = d.code().canonical_relabeling();
    if &canon == d.code() {
        return d.clone();
    }
    let m = d.code().label_count() as i64;
    let map = |a: Label| ((k + eps as i64 * a as i64 - 1).rem_euclid(m) + 1) as Label;
    let by_over: HashMap<Label, i8> =
        d.code().pairs().iter().zip(d.signs()).map(|(&(o, _), &s)| (map(o), s)).collect();
    let hint: Vec<i8> = canon.pairs().iter().map(|(o, _)| by_over[o]).collect();
    realize_extending(&canon, &hint).expect("relabeling keeps the embedding")
}


/// Search limits for [`classify_with`] and [`refine`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    /// No diagram on the way may exceed this many crossings.
    pub max_crossings: usize,
    /// Also step from a code to its mirror image.
    pub identify_mirrors: bool,
    /// Diagrams expanded per exploration.
    pub budget: usize,
}

impl SearchOptions {
    pub fn new(max_crossings: usize) -> Self {
        SearchOptions { max_crossings, identify_mirrors: true, budget: 2_000 }
    }
}

/// Best-first exploration of the move graph from `start`, fewest crossings
/// first. Stops at the first code for which `lookup` answers, or when the
/// budget runs out. Returns the answer and the canonical codes visited.
fn explore(
    start: &Diagram,
    opts: &SearchOptions,
    lookup: impl Fn(&PairCode) -> Option<u32>,
) -> (Option<u32>, Vec<PairCode>) {
    let mut visited: HashSet<PairCode> = HashSet::new();
    let mut order = vec![start.code().canonical_form()];
    visited.insert(order[0].clone());
    let mut nodes = vec![start.clone()];
    let mut heap = BinaryHeap::new();
    heap.push(Reverse((start.crossing_count(), 0usize)));
    let mut expanded = 0;
    while let Some(Reverse((_, idx))) = heap.pop() {
        if expanded >= opts.budget {
            break;
        }
        expanded += 1;
        let d = nodes[idx].clone();
        let mut next: Vec<Diagram> = Vec::new();
        for c in candidates(&d, opts.max_crossings, &ALL_MOVES, false) {
            let canon = c.code.canonical_form();
            if visited.contains(&canon) {
                continue;
            }
            let Some(nd) = check(&c, c.kind != MoveKind::R2Add) else {
                continue;
            };
            if let Some(id) = lookup(&canon) {
                order.push(canon);
                return (Some(id), order);
            }
            visited.insert(canon.clone());
            order.push(canon);
            next.push(nd);
        }
        if opts.identify_mirrors {
            let md = mirror_of(&d);
            let canon = md.code().canonical_form();
            if !visited.contains(&canon) {
                if let Some(id) = lookup(&canon) {
                    order.push(canon);
                    return (Some(id), order);
                }
                visited.insert(canon.clone());
                order.push(canon);
                next.push(md);
            }
        }
        for nd in next {
            heap.push(Reverse((nd.crossing_count(), nodes.len())));
            nodes.push(nd);
        }
    }
    (None, order)
}

/// Explores the move graph from `code` until `accept` holds for a visited
/// canonical code, and returns that code.
pub fn search_for(code: &PairCode, opts: &SearchOptions, accept: impl Fn(&PairCode) -> bool) -> Option<PairCode> {
    let canon = code.canonical_form();
    if accept(&canon) {
        return Some(canon);
    }
    let d = realize(code).ok()?;
    let (hit, mut visited) = explore(&d, opts, |c| accept(c).then_some(0));
    hit.and_then(|_| visited.pop())
}

/// The diagram of `mirror(code)`: same projection, every sign negated.
fn mirror_of(d: &Diagram) -> Diagram {
    let code = d.code().mirror();
    let by_over: HashMap<Label, i8> = d.code().pairs().iter().zip(d.signs()).map(|(&(_, u), &s)| (u, -s)).collect();
    let hint: Vec<i8> = code.pairs().iter().map(|(o, _)| by_over[o]).collect();
    realize_extending(&code, &hint).expect("mirroring keeps the embedding")
}

/// Groups canonical drawable codes into classes connected by moves that
/// never exceed `max_n` crossings, with the default search budget.
pub fn classify(codes: &[PairCode], max_n: usize, identify_mirrors: bool) -> Result<ClassStore, MoveError> {
    classify_with(codes, &SearchOptions { identify_mirrors, ..SearchOptions::new(max_n) })
}

/// Every input gets a record, in input order. Each input is explored (in
/// parallel) until it reaches a code stored before it; explorations that
/// reach none are merged when their visited sets meet.
pub fn classify_with(codes: &[PairCode], opts: &SearchOptions) -> Result<ClassStore, MoveError> {
    for c in codes {
        if c.crossing_count() > opts.max_crossings {
            return Err(MoveError::BoundTooSmall { code: c.clone(), bound: opts.max_crossings });
        }
    }
    let diagrams: Vec<Diagram> = codes
        .par_iter()
        .map(|c| realize(c).map_err(|_| MoveError::NotRealizable(c.clone())))
        .collect::<Result<_, _>>()?;
    let mut store = ClassStore::new();
    let ids: Vec<u32> = codes.iter().map(|c| store.insert(c.canonical_form())).collect();
    let results: Vec<(Option<u32>, Vec<PairCode>)> = diagrams
        .par_iter()
        .zip(&ids)
        .map(|(d, &own)| explore(d, opts, |c| store.id_of(c).filter(|&id| id < own)))
        .collect();
    let mut seen: HashMap<PairCode, u32> = HashMap::new();
    for (&own, (hit, visited)) in ids.iter().zip(results) {
        if let Some(other) = hit {
            store.merge(own, other);
            continue;
        }
        for c in visited {
            match seen.get(&c) {
                Some(&other) => {
                    store.merge(own, other);
                }
                None => {
                    seen.insert(c, own);
                }
            }
        }
    }
    store.flatten();
    Ok(store)
}

/// Tries to join representatives that share a key (typically an invariant
/// vector). Each representative of such a group is explored without an early
/// stop; two classes are merged when their explorations meet.
pub fn refine<K: Eq + std::hash::Hash>(store: &mut ClassStore, keys: &HashMap<u32, K>, opts: &SearchOptions) {
    let mut groups: HashMap<&K, Vec<u32>> = HashMap::new();
    for r in store.representatives() {
        if let Some(k) = keys.get(&r.permanent_id) {
            groups.entry(k).or_default().push(r.permanent_id);
        }
    }
    let mut groups: Vec<Vec<u32>> = groups.into_values().filter(|g| g.len() > 1).collect();
    groups.sort();
    let reps: Vec<u32> = groups.iter().flatten().copied().collect();
    let visits: Vec<Vec<PairCode>> = reps
        .par_iter()
        .map(|&id| {
            let d = realize(&store.record(id).canonical_code).expect("stored codes are drawable");
            explore(&d, opts, |_| None).1
        })
        .collect();
    let mut owner: HashMap<&PairCode, u32> = HashMap::new();
    for (&id, visited) in reps.iter().zip(&visits) {
        for c in visited {
            match owner.get(c) {
                Some(&other) => {
                    store.merge(id, other);
                }
                None => {
                    owner.insert(c, id);
                }
            }
        }
    }
    store.flatten();
}

/// One stored canonical code. `temporary_id` points at the smallest
/// permanent id known to be equivalent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassRecord {
    pub canonical_code: PairCode,
    pub permanent_id: u32,
    pub temporary_id: u32,
}

/// Records in insertion order; a record is a class representative iff its
/// two ids are equal.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ClassStore {
    records: Vec<ClassRecord>,
    index: HashMap<PairCode, u32>,
}

impl ClassStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn records(&self) -> &[ClassRecord] {
        &self.records
    }

    pub fn record(&self, id: u32) -> &ClassRecord {
        &self.records[id as usize - 1]
    }

    pub fn id_of(&self, code: &PairCode) -> Option<u32> {
        self.index.get(code).copied()
    }

    /// Stores `code` (canonical) as its own class unless already present.
    pub fn insert(&mut self, code: PairCode) -> u32 {
        if let Some(&id) = self.index.get(&code) {
            return id;
        }
        let id = self.records.len() as u32 + 1;
        self.index.insert(code.clone(), id);
        self.records.push(ClassRecord { canonical_code: code, permanent_id: id, temporary_id: id });
        id
    }

    /// Representative id of the class containing `id`.
    pub fn root(&self, mut id: u32) -> u32 {
        loop {
            let t = self.record(id).temporary_id;
            if t == id {
                return id;
            }
            id = t;
        }
    }

    fn compress(&mut self, id: u32) -> u32 {
        let r = self.root(id);
        let mut x = id;
        while x != r {
            let rec = &mut self.records[x as usize - 1];
            x = rec.temporary_id;
            rec.temporary_id = r;
        }
        r
    }

    /// Joins the classes of `a` and `b`; the smaller root wins.
    pub fn merge(&mut self, a: u32, b: u32) -> u32 {
        let (ra, rb) = (self.compress(a), self.compress(b));
        let r = ra.min(rb);
        self.records[ra.max(rb) as usize - 1].temporary_id = r;
        r
    }

    /// Points every temporary id directly at its representative.
    pub fn flatten(&mut self) {
        for i in 0..self.records.len() {
            let r = self.root(i as u32 + 1);
            self.records[i].temporary_id = r;
        }
    }

    pub fn representatives(&self) -> impl Iterator<Item = &ClassRecord> {
        self.records.iter().filter(|r| r.permanent_id == r.temporary_id)
    }

    /// Tab-separated `code, permanent id, temporary id`, one record per line.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&format!("{}\t{}\t{}\n", r.canonical_code, r.permanent_id, r.temporary_id));
        }
        out
    }

    pub fn from_tsv(text: &str) -> Result<Self, MoveError> {
        let mut store = ClassStore::new();
        for (i, line) in text.lines().enumerate() {
            let bad = |reason: &str| MoveError::Store { line: i + 1, reason: reason.to_string() };
            let f: Vec<&str> = line.split('\t').collect();
            if f.len() != 3 {
                return Err(bad("expected three tab-separated fields"));
            }
            let code: PairCode = f[0].parse().map_err(|_| bad("bad code"))?;
            let perm: u32 = f[1].parse().map_err(|_| bad("bad permanent id"))?;
            let temp: u32 = f[2].parse().map_err(|_| bad("bad temporary id"))?;
            if perm as usize != i + 1 {
                return Err(bad("permanent ids must be consecutive from 1"));
            }
            if temp == 0 || temp > perm {
                return Err(bad("temporary id must lie in 1..=permanent id"));
            }
            if store.index.contains_key(&code) {
                return Err(bad("duplicate code"));
            }
            store.index.insert(code.clone(), perm);
            store.records.push(ClassRecord { canonical_code: code, permanent_id: perm, temporary_id: temp });
        }
        Ok(store)
    }
}

impl fmt::Display for ClassRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} #{} -> #{}", self.canonical_code, self.permanent_id, self.temporary_id)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn code(p: &[(usize, usize)]) -> PairCode {
        PairCode::new(p).unwrap()
    }

    fn set(codes: &[&[(usize, usize)]]) -> BTreeSet<PairCode> {
        codes.iter().map(|p| code(p)).collect()
    }

    #[test]
    fn kinks() {
        assert_eq!(r1_neighbors(&PairCode::empty(), 1), set(&[&[(1, 2)], &[(2, 1)]]));
        assert!(r1_neighbors(&PairCode::empty(), 0).is_empty());
        assert_eq!(r1_neighbors(&code(&[(1, 2)]), 1), set(&[&[]]));
        let grown = r1_neighbors(&code(&[(1, 2)]), 2);
        assert!(grown.contains(&code(&[(1, 2), (3, 4)])));
        assert!(grown.contains(&PairCode::empty()));
    }

    #[test]
    fn pokes() {
        let from_circle = r2_neighbors(&PairCode::empty(), 2);
        assert!(from_circle.contains(&code(&[(1, 4), (2, 3)])));
        assert!(from_circle.iter().all(|c| c.crossing_count() == 2));
        for c in &from_circle {
            assert!(r2_neighbors(c, 2).contains(&PairCode::empty()), "{c}");
        }
        let trefoil = code(&[(1, 4), (5, 2), (3, 6)]);
        assert!(r2_neighbors(&trefoil, 3).is_empty());
        assert!(r3_neighbors(&trefoil).is_empty());
    }

    #[test]
    fn triangle_slides() {
        // the standard R3 picture closed up: a 3-crossing unknot diagram
        let mut found = 0;
        for c in crate::code::enumerate_codes(3, true) {
            for r in r3_neighbors(&c) {
                found += 1;
                assert_eq!(r.crossing_count(), 3);
                assert!(r3_neighbors(&r).contains(&c), "{c} -> {r}");
            }
        }
        assert!(found > 0);
    }

    #[test]
    fn store_round_trip() {
        let mut st = ClassStore::new();
        for p in [&[][..], &[(1, 2)], &[(2, 1)], &[(1, 4), (3, 6), (5, 2)]] {
            st.insert(code(p));
        }
        assert_eq!(st.insert(code(&[(1, 2)])), 2);
        st.merge(3, 2);
        st.merge(2, 1);
        st.flatten();
        let reps: Vec<u32> = st.representatives().map(|r| r.permanent_id).collect();
        assert_eq!(reps, [1, 4]);
        let text = st.to_tsv();
        assert_eq!(text.lines().next(), Some("0;\t1\t1"));
        assert_eq!(ClassStore::from_tsv(&text).unwrap().to_tsv(), text);
        assert!(ClassStore::from_tsv("0;\t1\t2\n").is_err());
        assert!(ClassStore::from_tsv("0;\t2\t1\n").is_err());
        assert!(ClassStore::from_tsv("0;\t1\n").is_err());
    }
}
