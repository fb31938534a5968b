//! Drawability of pair codes and construction of realized diagrams.
//!
//! Two independent routes decide drawability. [`jordan_test`] checks the
//! loop-intersection condition on the code alone. [`realize`] searches for a
//! rotation system at the crossings whose face count satisfies Euler's
//! formula on the sphere, and reads crossing signs and faces off the
//! resulting embedding.

use thiserror::Error;

use crate::code::{Label, LabelTables, PairCode};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RealizeError {
    #[error("code {0} is not drawable")]
    NotRealizable(PairCode),
    #[error("no crossing with id {0}")]
    UnknownCrossing(usize),
}

/// True iff every pair couples an odd and an even label.
pub fn parity_check(code: &PairCode) -> bool {
    code.has_parity()
}

/// A closed walk along the projection that meets every crossing at most once,
/// so it does not cut itself. Segment `s` runs from label `s` to label `s + 1`
/// (label `2n` wraps to `1`). At a visited crossing the walk either keeps to
/// its strand or turns onto the other strand in one of its two directions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Loop {
    /// The walk, starting from its smallest segment.
    pub darts: Vec<Dart>,
    /// Labels at which the walk passes straight through the crossing.
    straight: u128,
    /// Segment membership bits.
    mask: u128,
    /// Partner labels of `straight`.
    partner: u128,
}

impl Loop {
    /// Number of crossings where both loops pass straight on different strands.
    pub fn transversal_crossings(&self, other: &Loop) -> u32 {
        (self.straight & other.partner).count_ones()
    }

    pub fn shares_segment(&self, other: &Loop) -> bool {
        self.mask & other.mask != 0
    }

    /// Labels whose strand the loop follows straight through a crossing.
    pub fn straight_labels(&self) -> Vec<Label> {
        (1..128u32).filter(|&l| self.straight >> l & 1 == 1).map(|l| l as Label).collect()
    }
}

/// Every loop of the code, each listed once regardless of direction.
/// Requires a parity-valid code with at most 63 crossings.
pub fn enumerate_loops(code: &PairCode) -> Vec<Loop> {
    let m = code.label_count();
    assert!(m < 128, "loop enumeration supports at most 63 crossings");
    if m == 0 {
        return vec![Loop { darts: Vec::new(), straight: 0, mask: 0, partner: 0 }];
    }
    let t = code.tables();
    let emb = Embedding::new(code);
    // half-edge -> (segment, leaving along it means forward?)
    let seg_of = |h: usize| -> (usize, bool) {
        let l = h / 2 + 1;
        if h % 2 == 0 {
            (l, true)
        } else {
            (if l == 1 { m } else { l - 1 }, false)
        }
    };
    // label of the strand a half-edge belongs to
    let label_of = |h: usize| h / 2 + 1;
    let exits = |a: usize| -> [usize; 3] {
        let x = label_of(a);
        let y = t.mate[x] as usize;
        let straight = if a % 2 == 1 { h_out(x) } else { h_in(x) };
        [straight, h_out(y), h_in(y)]
    };

    let mut seen = std::collections::HashSet::new();
    let mut loops = Vec::new();
    let mut path: Vec<(usize, usize)> = Vec::new(); // (leaving half-edge, arriving half-edge)
    for start_seg in 1..=m {
        for start in [h_out(start_seg), h_in(if start_seg == m { 1 } else { start_seg + 1 })] {
            let origin = emb.vertex[start];
            let used: u128 = 1 << start_seg;
            path.clear();
            path.push((start, emb.twin[start]));
            let mut stack: Vec<(usize, u128, u128)> = vec![(0, used, 1 << origin)];
            while let Some(&mut (ref mut idx, used, visited)) = stack.last_mut() {
                if *idx == 3 {
                    stack.pop();
                    path.pop();
                    continue;
                }
                let arrive = path.last().unwrap().1;
                let at = emb.vertex[arrive];
                let leave = exits(arrive)[*idx];
                *idx += 1;
                if at == origin {
                    if leave == start {
                        if let Some(l) = make_loop(&path, &t, &seg_of, &mut seen) {
                            loops.push(l);
                        }
                    }
                    continue;
                }
                if visited >> at & 1 == 1 {
                    *idx = 3;
                    continue;
                }
                let (seg, _) = seg_of(leave);
                if seg <= start_seg || used >> seg & 1 == 1 {
                    continue;
                }
                path.push((leave, emb.twin[leave]));
                stack.push((0, used | 1 << seg, visited | 1 << at));
            }
        }
    }
    loops
}

fn make_loop(
    path: &[(usize, usize)],
    t: &LabelTables,
    seg_of: &dyn Fn(usize) -> (usize, bool),
    seen: &mut std::collections::HashSet<Vec<(usize, usize)>>,
) -> Option<Loop> {
    let mut key: Vec<(usize, usize)> = (0..path.len())
        .map(|i| {
            let a = path[i].1;
            let b = path[(i + 1) % path.len()].0;
            (a.min(b), a.max(b))
        })
        .collect();
    key.sort_unstable();
    if !seen.insert(key) {
        return None;
    }
    let mut straight = 0u128;
    let mut partner = 0u128;
    let mut mask = 0u128;
    let mut darts = Vec::with_capacity(path.len());
    for i in 0..path.len() {
        let (leave, arrive) = path[i];
        let (seg, forward) = seg_of(leave);
        mask |= 1 << seg;
        darts.push(Dart { segment: seg as Label, forward });
        let next = path[(i + 1) % path.len()].0;
        if arrive / 2 == next / 2 {
            let x = arrive / 2 + 1;
            straight |= 1 << x;
            partner |= 1 << t.mate[x];
        }
    }
    Some(Loop { darts, straight, mask, partner })
}

/// Loop-intersection drawability test: every two loops that share no segment
/// must cross transversally an even number of times. Turning points are not
/// counted as crossings.
pub fn jordan_test(code: &PairCode) -> bool {
    if !code.has_parity() {
        return false;
    }
    let loops = enumerate_loops(code);
    for (i, a) in loops.iter().enumerate() {
        for b in &loops[i + 1..] {
            if !a.shares_segment(b) && a.transversal_crossings(b) % 2 == 1 {
                return false;
            }
        }
    }
    true
}

/// The run of segments between two consecutive under-labels. The arc starts
/// just after under-label `start` and ends at under-label `end`. The single
/// arc of the 0-crossing diagram has `start == end == 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Arc {
    pub start: Label,
    pub end: Label,
}

/// Arcs meeting at a crossing: incoming under-arc, outgoing under-arc, over-arc.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Incidence {
    pub incoming: usize,
    pub outgoing: usize,
    pub over: usize,
}

/// One side of a segment as seen while walking around a face.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Dart {
    pub segment: Label,
    /// True when the face walk follows the segment's own direction.
    pub forward: bool,
}

#[derive(Debug, Clone)]
pub struct Diagram {
    code: PairCode,
    signs: Vec<i8>,
    arcs: Vec<Arc>,
    incidence: Vec<Incidence>,
    faces: Vec<Vec<Dart>>,
}

impl Diagram {
    pub fn code(&self) -> &PairCode {
        &self.code
    }

    pub fn crossing_count(&self) -> usize {
        self.code.crossing_count()
    }

    /// Crossing signs, indexed like `code().pairs()`.
    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn incidence(&self) -> &[Incidence] {
        &self.incidence
    }

    /// Faces of the embedding as cyclic dart sequences.
    pub fn faces(&self) -> &[Vec<Dart>] {
        &self.faces
    }

    pub fn writhe(&self) -> i32 {
        self.signs.iter().map(|&s| s as i32).sum()
    }

    /// The same projection with every crossing sign negated: the planar
    /// reflection of this diagram.
    pub fn reflected(&self) -> Diagram {
        let mut d = self.clone();
        for s in &mut d.signs {
            *s = -*s;
        }
        for f in &mut d.faces {
            f.reverse();
            for dart in f.iter_mut() {
                dart.forward = !dart.forward;
            }
        }
        d
    }
}

/// Incoming under-arc, outgoing under-arc and over-arc at `crossing`.
pub fn arcs_at(diagram: &Diagram, crossing: usize) -> Result<(usize, usize, usize), RealizeError> {
    diagram
        .incidence
        .get(crossing)
        .map(|i| (i.incoming, i.outgoing, i.over))
        .ok_or(RealizeError::UnknownCrossing(crossing))
}

/// Cheap drawability check; agrees with [`realize`].
pub fn is_realizable(code: &PairCode) -> bool {
    code.has_parity() && find_rotation(code).is_some()
}

/// Builds the planar realization of a drawable code. The embedding is fixed
/// up to reflection by the code; the reflection is chosen so that the
/// crossing carrying label 1 is positive.
pub fn realize(code: &PairCode) -> Result<Diagram, RealizeError> {
    if !code.has_parity() {
        return Err(RealizeError::NotRealizable(code.clone()));
    }
    let rot = find_rotation(code).ok_or_else(|| RealizeError::NotRealizable(code.clone()))?;
    Ok(build(code, rot))
}

fn arc_structure(code: &PairCode, t: &LabelTables) -> (Vec<Arc>, Vec<Incidence>) {
    let n = code.crossing_count();
    if n == 0 {
        return (vec![Arc { start: 0, end: 0 }], Vec::new());
    }
    let m = code.label_count();
    let unders: Vec<Label> = (1..=m as Label).filter(|&l| !t.over[l as usize]).collect();
    let arcs: Vec<Arc> =
        (0..n).map(|k| Arc { start: unders[k], end: unders[(k + 1) % n] }).collect();
    // arc index carrying each label as an interior point (or starting there)
    let mut arc_of = vec![0usize; m + 1];
    let mut current = n - 1;
    for l in 1..=m {
        if !t.over[l] {
            current = unders.iter().position(|&u| u as usize == l).unwrap();
        }
        arc_of[l] = current;
    }
    let incidence = code
        .pairs()
        .iter()
        .map(|&(o, u)| {
            let outgoing = arc_of[u as usize];
            let incoming = (outgoing + n - 1) % n;
            Incidence { incoming, outgoing, over: arc_of[o as usize] }
        })
        .collect();
    (arcs, incidence)
}

// Half-edge numbering: label l owns out(l) = 2(l-1) (start of segment l) and
// in(l) = 2(l-1)+1 (end of segment l-1).
#[inline]
fn h_out(l: usize) -> usize {
    2 * (l - 1)
}
#[inline]
fn h_in(l: usize) -> usize {
    2 * (l - 1) + 1
}

struct Embedding {
    twin: Vec<usize>,
    /// Counter-clockwise successor of each half-edge, for rot = +1 and -1.
    succ: [Vec<usize>; 2],
    /// Crossing owning each half-edge.
    vertex: Vec<usize>,
}

impl Embedding {
    fn new(code: &PairCode) -> Self {
        let m = code.label_count();
        let mut twin = vec![0; 2 * m];
        for l in 1..=m {
            let nl = if l == m { 1 } else { l + 1 };
            twin[h_out(l)] = h_in(nl);
            twin[h_in(nl)] = h_out(l);
        }
        let mut plus = vec![0; 2 * m];
        let mut minus = vec![0; 2 * m];
        let mut vertex = vec![0; 2 * m];
        for (c, &(o, u)) in code.pairs().iter().enumerate() {
            let (o, u) = (o as usize, u as usize);
            let p = [h_out(o), h_out(u), h_in(o), h_in(u)];
            let q = [h_out(o), h_in(u), h_in(o), h_out(u)];
            for i in 0..4 {
                plus[p[i]] = p[(i + 1) % 4];
                minus[q[i]] = q[(i + 1) % 4];
                vertex[p[i]] = c;
            }
        }
        Embedding { twin, succ: [plus, minus], vertex }
    }

    #[inline]
    fn next(&self, h: usize, rot: &[i8]) -> usize {
        let t = self.twin[h];
        let r = rot[self.vertex[t]];
        self.succ[if r > 0 { 0 } else { 1 }][t]
    }

    fn face_count(&self, rot: &[i8], seen: &mut [bool]) -> usize {
        seen.iter_mut().for_each(|s| *s = false);
        let mut faces = 0;
        for h in 0..seen.len() {
            if seen[h] {
                continue;
            }
            faces += 1;
            let mut x = h;
            while !seen[x] {
                seen[x] = true;
                x = self.next(x, rot);
            }
        }
        faces
    }
}

/// Finds crossing rotations (equal to crossing signs) giving a spherical
/// embedding, with the crossing of label 1 fixed positive.
fn find_rotation(code: &PairCode) -> Option<Vec<i8>> {
    find_rotation_hinted(code, &vec![0; code.crossing_count()])
}

/// Like [`find_rotation`], but first tries the partial assignment `hint`
/// (entries `0` are free). Moves change a diagram locally, so the rotations
/// of a neighbouring diagram almost always complete to an embedding.
fn find_rotation_hinted(code: &PairCode, hint: &[i8]) -> Option<Vec<i8>> {
    let n = code.crossing_count();
    if n == 0 {
        return Some(Vec::new());
    }
    debug_assert_eq!(hint.len(), n);
    let emb = Embedding::new(code);
    let target = n + 2;
    let mut seen = vec![false; 4 * n];
    let first = code.tables().crossing[1];
    let normalize = |mut rot: Vec<i8>| {
        if rot[first] < 0 {
            rot.iter_mut().for_each(|r| *r = -*r);
        }
        rot
    };

    let free: Vec<usize> = (0..n).filter(|&c| hint[c] == 0).collect();
    if free.len() < n && free.len() <= 4 {
        let mut rot: Vec<i8> = hint.to_vec();
        for bits in 0u32..(1 << free.len()) {
            for (i, &c) in free.iter().enumerate() {
                rot[c] = if bits >> i & 1 == 0 { 1 } else { -1 };
            }
            if emb.face_count(&rot, &mut seen) == target {
                return Some(normalize(rot));
            }
        }
    }

    let others: Vec<usize> = (0..n).filter(|&c| c != first).collect();
    let mut rot = vec![1i8; n];
    for bits in 0u64..(1u64 << others.len()) {
        for (i, &c) in others.iter().enumerate() {
            rot[c] = if bits >> i & 1 == 0 { 1 } else { -1 };
        }
        if emb.face_count(&rot, &mut seen) == target {
            return Some(rot);
        }
    }
    None
}

/// Realizes `code` starting the embedding search from `hint`, a per-crossing
/// sign guess (0 = unknown) indexed like `code.pairs()`.
pub fn realize_hinted(code: &PairCode, hint: &[i8]) -> Result<Diagram, RealizeError> {
    if !code.has_parity() || hint.len() != code.crossing_count() {
        return realize(code);
    }
    let rot = find_rotation_hinted(code, hint)
        .ok_or_else(|| RealizeError::NotRealizable(code.clone()))?;
    Ok(build(code, rot))
}

/// Realizes `code` only with rotations that agree with the nonzero entries
/// of `hint`. With more than four free crossings this is [`realize`].
pub fn realize_extending(code: &PairCode, hint: &[i8]) -> Option<Diagram> {
    let n = code.crossing_count();
    if !code.has_parity() || hint.len() != n {
        return None;
    }
    if n == 0 {
        return Some(build(code, Vec::new()));
    }
    let free: Vec<usize> = (0..n).filter(|&c| hint[c] == 0).collect();
    if free.len() > 4 {
        return realize(code).ok();
    }
    let emb = Embedding::new(code);
    let mut seen = vec![false; 4 * n];
    let mut rot = hint.to_vec();
    for bits in 0u32..(1 << free.len()) {
        for (i, &c) in free.iter().enumerate() {
            rot[c] = if bits >> i & 1 == 0 { 1 } else { -1 };
        }
        if emb.face_count(&rot, &mut seen) == n + 2 {
            let first = code.tables().crossing[1];
            if rot[first] < 0 {
                rot.iter_mut().for_each(|r| *r = -*r);
            }
            return Some(build(code, rot));
        }
    }
    None
}

fn build(code: &PairCode, rot: Vec<i8>) -> Diagram {
    let t = code.tables();
    let faces = trace_faces(code, &rot);
    let (arcs, incidence) = arc_structure(code, &t);
    Diagram { code: code.clone(), signs: rot, arcs, incidence, faces }
}

fn trace_faces(code: &PairCode, rot: &[i8]) -> Vec<Vec<Dart>> {
    let n = code.crossing_count();
    let m = code.label_count();
    if n == 0 {
        return Vec::new();
    }
    let emb = Embedding::new(code);
    let mut seen = vec![false; 2 * m];
    let mut faces = Vec::new();
    for h in 0..2 * m {
        if seen[h] {
            continue;
        }
        let mut face = Vec::new();
        let mut x = h;
        while !seen[x] {
            seen[x] = true;
            let l = x / 2 + 1;
            face.push(if x % 2 == 0 {
                Dart { segment: l as Label, forward: true }
            } else {
                let prev = if l == 1 { m } else { l - 1 };
                Dart { segment: prev as Label, forward: false }
            });
            x = emb.next(x, rot);
        }
        faces.push(face);
    }
    faces
}

#[cfg(test)]
mod tests {
    use super::*;

    fn code(p: &[(usize, usize)]) -> PairCode {
        PairCode::new(p).unwrap()
    }

    fn trefoil() -> PairCode {
        code(&[(1, 4), (5, 2), (3, 6)])
    }

    #[test]
    fn parity_examples() {
        assert!(parity_check(&code(&[(1, 2)])));
        assert!(!parity_check(&code(&[(1, 3), (2, 4)])));
        assert!(parity_check(&code(&[(1, 4), (3, 6), (5, 8), (7, 10), (9, 2)])));
    }

    #[test]
    fn loop_counts() {
        assert_eq!(enumerate_loops(&PairCode::empty()).len(), 1);
        // one loop per kink lobe; the full traversal cuts itself
        assert_eq!(enumerate_loops(&code(&[(1, 2)])).len(), 2);
        let tl = enumerate_loops(&trefoil()).len();
        assert!(tl <= 27, "{tl}");
    }

    #[test]
    fn jordan_examples() {
        assert!(jordan_test(&code(&[(1, 2)])));
        assert!(jordan_test(&trefoil()));
        assert!(!jordan_test(&code(&[(1, 4), (3, 6), (5, 8), (7, 10), (9, 2)])));
        assert!(!jordan_test(&code(&[(1, 3), (2, 4)])));
    }

    #[test]
    fn realize_examples() {
        let kink = realize(&code(&[(1, 2)])).unwrap();
        assert_eq!(kink.signs(), &[1]);
        let t = realize(&trefoil()).unwrap();
        assert!(t.signs().iter().all(|&s| s == t.signs()[0]));
        assert_eq!(t.writhe().abs(), 3);
        assert!(matches!(
            realize(&code(&[(1, 3), (2, 4)])),
            Err(RealizeError::NotRealizable(_))
        ));
        assert!(realize(&code(&[(1, 4), (3, 6), (5, 8), (7, 10), (9, 2)])).is_err());
    }

    #[test]
    fn face_structure() {
        let t = realize(&trefoil()).unwrap();
        assert_eq!(t.faces().len(), 5);
        let mut sizes: Vec<usize> = t.faces().iter().map(Vec::len).collect();
        sizes.sort();
        assert_eq!(sizes, vec![2, 2, 2, 3, 3]);
        let k = realize(&code(&[(1, 2)])).unwrap();
        assert_eq!(k.faces().len(), 3);
    }

    #[test]
    fn arc_examples() {
        let t = realize(&trefoil()).unwrap();
        assert_eq!(t.arcs().len(), 3);
        for c in 0..3 {
            let (a, b, o) = arcs_at(&t, c).unwrap();
            assert!(a != b && b != o && a != o);
        }
        let k = realize(&code(&[(1, 2)])).unwrap();
        assert_eq!(k.arcs().len(), 1);
        assert_eq!(arcs_at(&k, 0).unwrap(), (0, 0, 0));
        let u = realize(&PairCode::empty()).unwrap();
        assert_eq!(u.arcs().len(), 1);
        assert_eq!(arcs_at(&u, 0), Err(RealizeError::UnknownCrossing(0)));
    }
}
