//! Pair codes: a knot projection written as `n` ordered (over, under) label
//! pairs on the traversal labels `1..=2n`.
//!
//! A code is stored with its pairs sorted by over-label, so the derived
//! ordering on [`PairCode`] is the lexicographic order of the flat label
//! sequence `o1,u1,o2,u2,...`. That order is also the one used to pick the
//! canonical member of a relabeling orbit.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use thiserror::Error;

/// A traversal label. Labels are 1-based; `0` never appears in a valid code.
pub type Label = u8;

/// Largest crossing count a [`PairCode`] can hold (labels must fit in a `u8`).
pub const MAX_CROSSINGS: usize = 127;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodeError {
    #[error("label {label} is outside 1..={max}")]
    LabelOutOfRange { label: usize, max: usize },
    #[error("label {0} appears more than once")]
    DuplicateLabel(usize),
    #[error("too many crossings: {0}")]
    TooLarge(usize),
    #[error("malformed code text: {0}")]
    Parse(String),
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PairCode {
    pairs: Vec<(Label, Label)>,
}

impl PairCode {
    /// The 0-crossing code.
    pub fn empty() -> Self {
        PairCode { pairs: Vec::new() }
    }

    /// Builds a code from (over, under) pairs in any order.
    pub fn new(pairs: &[(usize, usize)]) -> Result<Self, CodeError> {
        let n = pairs.len();
        if n > MAX_CROSSINGS {
            return Err(CodeError::TooLarge(n));
        }
        let max = 2 * n;
        let mut seen = vec![false; max + 1];
        for &(o, u) in pairs {
            for l in [o, u] {
                if l == 0 || l > max {
                    return Err(CodeError::LabelOutOfRange { label: l, max });
                }
                if seen[l] {
                    return Err(CodeError::DuplicateLabel(l));
                }
                seen[l] = true;
            }
        }
        let mut pairs: Vec<(Label, Label)> =
            pairs.iter().map(|&(o, u)| (o as Label, u as Label)).collect();
        pairs.sort_unstable();
        Ok(PairCode { pairs })
    }

    /// Caller guarantees validity; pairs need not be sorted.
    pub(crate) fn from_raw(mut pairs: Vec<(Label, Label)>) -> Self {
        pairs.sort_unstable();
        debug_assert!(Self::check_raw(&pairs));
        PairCode { pairs }
    }

    fn check_raw(pairs: &[(Label, Label)]) -> bool {
        let max = 2 * pairs.len();
        let mut seen = vec![false; max + 1];
        for &(o, u) in pairs {
            for l in [o as usize, u as usize] {
                if l == 0 || l > max || seen[l] {
                    return false;
                }
                seen[l] = true;
            }
        }
        true
    }

    pub fn crossing_count(&self) -> usize {
        self.pairs.len()
    }

    /// Number of labels, `2n`.
    pub fn label_count(&self) -> usize {
        2 * self.pairs.len()
    }

    pub fn pairs(&self) -> &[(Label, Label)] {
        &self.pairs
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Flat sequence `o1,u1,o2,u2,...` in stored (canonical) pair order.
    pub fn flat(&self) -> Vec<Label> {
        self.pairs.iter().flat_map(|&(o, u)| [o, u]).collect()
    }

    /// Per-label lookup tables indexed by label.
    pub fn tables(&self) -> LabelTables {
        LabelTables::new(self)
    }

    /// True iff every pair couples one odd and one even label.
    pub fn has_parity(&self) -> bool {
        self.pairs.iter().all(|&(o, u)| (o ^ u) & 1 == 1)
    }

    /// Replaces every label `a` by `((k + eps*a - 1) mod 2n) + 1`.
    pub fn relabel(&self, k: i64, eps: i8) -> PairCode {
        let m = self.label_count() as i64;
        if m == 0 {
            return self.clone();
        }
        let e = if eps < 0 { -1 } else { 1 };
        let map = |a: Label| -> Label { ((k + e * a as i64 - 1).rem_euclid(m) + 1) as Label };
        PairCode::from_raw(self.pairs.iter().map(|&(o, u)| (map(o), map(u))).collect())
    }

    /// Swaps over and under at every crossing.
    pub fn mirror(&self) -> PairCode {
        PairCode::from_raw(self.pairs.iter().map(|&(o, u)| (u, o)).collect())
    }

    /// Minimum of the relabeling orbit under the flat lexicographic order.
    pub fn canonical_form(&self) -> PairCode {
        self.canonical_relabeling().0
    }

    /// The canonical form together with a relabeling `(k, eps)` for
    /// [`PairCode::relabel`] that produces it.
    pub fn canonical_relabeling(&self) -> (PairCode, i64, i8) {
        let n = self.crossing_count();
        if n == 0 {
            return (self.clone(), 0, 1);
        }
        let t = self.tables();
        let mut best = self.flat();
        let (mut bk, mut beps) = (0i64, 1i8);
        let mut cand = Vec::with_capacity(2 * n);
        for eps in [1i8, -1] {
            for k in 0..2 * n {
                if relabeled_flat_if_smaller(&t, k, eps, &best, &mut cand) {
                    std::mem::swap(&mut best, &mut cand);
                    (bk, beps) = (k as i64, eps);
                }
            }
        }
        (PairCode::from_raw(best.chunks(2).map(|p| (p[0], p[1])).collect()), bk, beps)
    }

    pub fn is_canonical(&self) -> bool {
        let n = self.crossing_count();
        if n == 0 {
            return true;
        }
        let t = self.tables();
        let own = self.flat();
        let mut cand = Vec::with_capacity(2 * n);
        for eps in [1i8, -1] {
            for k in 0..2 * n {
                if relabeled_flat_if_smaller(&t, k, eps, &own, &mut cand) {
                    return false;
                }
            }
        }
        true
    }

    /// True iff some proper cyclic interval of labels (2 to 2n-2 labels long)
    /// is closed under pairing, i.e. the projection splits as a connected sum
    /// or carries a nugatory crossing.
    pub fn is_composite(&self) -> bool {
        let m = self.label_count();
        if m < 4 {
            return false;
        }
        let t = self.tables();
        // position of each label's partner relative to a window start
        for start in 1..=m {
            let mut outside = 0usize;
            for len in 1..=m - 2 {
                let l = (start - 1 + len - 1) % m + 1;
                let mate = t.mate[l] as usize;
                let off = (mate + m - start) % m;
                if off >= len {
                    outside += 1;
                } else {
                    outside -= 1;
                }
                if len >= 2 && outside == 0 {
                    return true;
                }
            }
        }
        false
    }

    /// Every way to cut the code along a closed cyclic interval, as the two
    /// canonical factor codes (interval first).
    pub fn splits(&self) -> Vec<(PairCode, PairCode)> {
        let m = self.label_count();
        let mut out = Vec::new();
        if m < 4 {
            return out;
        }
        let t = self.tables();
        for start in 1..=m {
            let mut outside = 0usize;
            for len in 1..=m - 2 {
                let l = (start - 1 + len - 1) % m + 1;
                let off = (t.mate[l] as usize + m - start) % m;
                if off >= len {
                    outside += 1;
                } else {
                    outside -= 1;
                }
                if len >= 2 && outside == 0 {
                    let labels = |from: usize, count: usize| -> Vec<usize> {
                        (0..count).map(|i| (from - 1 + i) % m + 1).collect()
                    };
                    let inner = labels(start, len);
                    let outer = labels((start - 1 + len) % m + 1, m - len);
                    let part = self.restrict(&inner, &t).canonical_form();
                    let rest = self.restrict(&outer, &t).canonical_form();
                    if !out.contains(&(part.clone(), rest.clone())) {
                        out.push((part, rest));
                    }
                }
            }
        }
        out
    }

    /// The code formed by the crossings whose labels all lie in `labels`
    /// (given in traversal order), renumbered from 1.
    fn restrict(&self, labels: &[usize], t: &LabelTables) -> PairCode {
        let mut new = vec![0 as Label; self.label_count() + 1];
        for (i, &l) in labels.iter().enumerate() {
            new[l] = (i + 1) as Label;
        }
        PairCode::from_raw(
            labels.iter().filter(|&&l| t.over[l]).map(|&l| (new[l], new[t.mate[l] as usize])).collect(),
        )
    }
}

/// Builds the flat sequence of `relabel(k, eps)` into `out`, bailing out as
/// soon as it is known not to be strictly smaller than `best`.
fn relabeled_flat_if_smaller(
    t: &LabelTables,
    k: usize,
    eps: i8,
    best: &[Label],
    out: &mut Vec<Label>,
) -> bool {
    let m = t.label_count() as i64;
    let new = |a: Label| -> Label {
        let v = if eps > 0 { k as i64 + a as i64 - 1 } else { k as i64 - a as i64 - 1 };
        (v.rem_euclid(m) + 1) as Label
    };
    out.clear();
    let mut decided_smaller = false;
    for lnew in 1..=m {
        // original label mapped to lnew: a = eps * (lnew - k) mod m
        let a = if eps > 0 { lnew - k as i64 } else { k as i64 - lnew };
        let a = a.rem_euclid(m);
        let a = if a == 0 { m } else { a } as usize;
        if !t.over[a] {
            continue;
        }
        let pos = out.len();
        out.push(lnew as Label);
        out.push(new(t.mate[a]));
        if !decided_smaller {
            for i in pos..pos + 2 {
                match out[i].cmp(&best[i]) {
                    std::cmp::Ordering::Less => {
                        decided_smaller = true;
                        break;
                    }
                    std::cmp::Ordering::Greater => return false,
                    std::cmp::Ordering::Equal => {}
                }
            }
        }
    }
    decided_smaller
}

/// Partner and role of each label, indexed `1..=2n` (slot 0 unused).
#[derive(Debug, Clone)]
pub struct LabelTables {
    pub mate: Vec<Label>,
    pub over: Vec<bool>,
    /// Index (in stored pair order) of the crossing carrying each label.
    pub crossing: Vec<usize>,
}

impl LabelTables {
    fn new(code: &PairCode) -> Self {
        let m = code.label_count();
        let mut mate = vec![0; m + 1];
        let mut over = vec![false; m + 1];
        let mut crossing = vec![usize::MAX; m + 1];
        for (c, &(o, u)) in code.pairs.iter().enumerate() {
            mate[o as usize] = u;
            mate[u as usize] = o;
            over[o as usize] = true;
            crossing[o as usize] = c;
            crossing[u as usize] = c;
        }
        LabelTables { mate, over, crossing }
    }

    pub fn label_count(&self) -> usize {
        self.mate.len() - 1
    }
}

impl fmt::Display for PairCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{};", self.pairs.len())?;
        for &(o, u) in &self.pairs {
            write!(f, "({o},{u})")?;
        }
        Ok(())
    }
}

impl fmt::Debug for PairCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for PairCode {
    type Err = CodeError;

    /// Parses `<n>;(o1,u1)(o2,u2)...`. Pairs must appear in over-label
    /// order so that the text form is unique.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || CodeError::Parse(s.to_string());
        let (count, rest) = s.split_once(';').ok_or_else(bad)?;
        let n: usize = count.parse().map_err(|_| bad())?;
        let mut pairs = Vec::with_capacity(n);
        let mut rest = rest;
        while !rest.is_empty() {
            let body = rest.strip_prefix('(').ok_or_else(bad)?;
            let close = body.find(')').ok_or_else(bad)?;
            let (o, u) = body[..close].split_once(',').ok_or_else(bad)?;
            let o: usize = o.parse().map_err(|_| bad())?;
            let u: usize = u.parse().map_err(|_| bad())?;
            pairs.push((o, u));
            rest = &body[close + 1..];
        }
        if pairs.len() != n {
            return Err(bad());
        }
        let code = PairCode::new(&pairs)?;
        if code.to_string() != s {
            return Err(bad());
        }
        Ok(code)
    }
}

/// Visits every parity-valid code on `1..=2n` in flat lexicographic order.
/// With `canonical_only`, only orbit minima are visited.
pub fn for_each_code<F: FnMut(&PairCode)>(n: usize, canonical_only: bool, mut f: F) {
    assert!(n <= MAX_CROSSINGS);
    let mut gen = Generator::new(n);
    gen.run(None, canonical_only, &mut f);
}

/// All parity-valid codes with `n` crossings, in flat lexicographic order.
pub fn enumerate_codes(n: usize, canonical_only: bool) -> Vec<PairCode> {
    let mut out = Vec::new();
    for_each_code(n, canonical_only, |c| out.push(c.clone()));
    out
}

/// Parallel version of [`enumerate_codes`]; the work is split on the first
/// pair, and the output order is identical.
pub fn par_enumerate_codes(n: usize, canonical_only: bool) -> Vec<PairCode> {
    if n == 0 {
        return vec![PairCode::empty()];
    }
    let m = 2 * n;
    let firsts: Vec<(Label, Label)> = (1..=m as Label)
        .flat_map(|o| (1..=m as Label).filter(move |&u| (o ^ u) & 1 == 1).map(move |u| (o, u)))
        .collect();
    let chunks: Vec<Vec<PairCode>> = firsts
        .par_iter()
        .map(|&first| {
            let mut out = Vec::new();
            let mut gen = Generator::new(n);
            gen.run(Some(first), canonical_only, &mut |c: &PairCode| out.push(c.clone()));
            out
        })
        .collect();
    chunks.into_iter().flatten().collect()
}

struct Generator {
    n: usize,
    used: Vec<bool>,
    pairs: Vec<(Label, Label)>,
}

impl Generator {
    fn new(n: usize) -> Self {
        Generator { n, used: vec![false; 2 * n + 1], pairs: Vec::with_capacity(n) }
    }

    fn run<F: FnMut(&PairCode)>(
        &mut self,
        first: Option<(Label, Label)>,
        canonical_only: bool,
        f: &mut F,
    ) {
        if self.n == 0 {
            f(&PairCode::empty());
            return;
        }
        if let Some((o, u)) = first {
            self.used[o as usize] = true;
            self.used[u as usize] = true;
            self.pairs.push((o, u));
        }
        self.extend(canonical_only, f);
    }

    fn extend<F: FnMut(&PairCode)>(&mut self, canonical_only: bool, f: &mut F) {
        let m = 2 * self.n;
        if self.pairs.len() == self.n {
            let code = PairCode { pairs: self.pairs.clone() };
            if !canonical_only || code.is_canonical() {
                f(&code);
            }
            return;
        }
        let lo = self.pairs.last().map_or(1, |&(o, _)| o as usize + 1);
        // every unused label below the next over-label has to become an under
        // label of a later pair, so there must be enough pairs left for them
        let remaining = self.n - self.pairs.len();
        let mut unused_below = (1..lo).filter(|&l| !self.used[l]).count();
        for o in lo..=m {
            if unused_below > remaining {
                break;
            }
            if self.used[o] {
                continue;
            }
            self.used[o] = true;
            for u in 1..=m {
                if self.used[u] || (o ^ u) & 1 == 0 {
                    continue;
                }
                self.used[u] = true;
                self.pairs.push((o as Label, u as Label));
                self.extend(canonical_only, f);
                self.pairs.pop();
                self.used[u] = false;
            }
            self.used[o] = false;
            unused_below += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn code(p: &[(usize, usize)]) -> PairCode {
        PairCode::new(p).unwrap()
    }

    #[test]
    fn granny_splits() {
        let granny: PairCode = "6;(1,4)(3,6)(5,2)(7,10)(9,12)(11,8)".parse().unwrap();
        let trefoil = PairCode::new(&[(1, 4), (3, 6), (5, 2)]).unwrap().canonical_form();
        assert!(granny.splits().contains(&(trefoil.clone(), trefoil.clone())));
        assert!(trefoil.splits().is_empty());
        for (a, b) in granny.splits() {
            assert_eq!(a.crossing_count() + b.crossing_count(), 6);
        }
    }

    #[test]
    fn parity_valid_counts() {
        let mut fact = 1usize;
        for n in 0..=5 {
            if n > 0 {
                fact *= n;
            }
            assert_eq!(enumerate_codes(n, false).len(), fact << n, "n={n}");
        }
    }

    #[test]
    fn small_enumerations() {
        assert_eq!(enumerate_codes(0, false), vec![PairCode::empty()]);
        let one = enumerate_codes(1, false);
        assert_eq!(one, vec![code(&[(1, 2)]), code(&[(2, 1)])]);
        assert_eq!(enumerate_codes(2, false).len(), 8);
    }

    #[test]
    fn enumeration_is_sorted_and_unique() {
        let all = enumerate_codes(4, false);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        let canon = enumerate_codes(4, true);
        assert!(canon.windows(2).all(|w| w[0] < w[1]));
        assert!(canon.iter().all(|c| c.canonical_form() == *c));
        let mut from_all: Vec<_> = all.iter().map(|c| c.canonical_form()).collect();
        from_all.sort();
        from_all.dedup();
        assert_eq!(from_all, canon);
    }

    #[test]
    fn parallel_matches_serial() {
        for n in 0..=4 {
            assert_eq!(par_enumerate_codes(n, true), enumerate_codes(n, true));
            assert_eq!(par_enumerate_codes(n, false), enumerate_codes(n, false));
        }
    }

    #[test]
    fn relabel_examples() {
        let t = code(&[(1, 4), (5, 2), (3, 6)]);
        assert_eq!(t.relabel(0, 1), t);
        assert_eq!(t.relabel(2, 1), t);
        assert_eq!(t.relabel(3, -1).relabel(3, -1), t);
    }

    #[test]
    fn trefoil_canonical_form() {
        let t = code(&[(1, 4), (5, 2), (3, 6)]);
        // brute force over the 12 relabelings
        let mut best: Option<PairCode> = None;
        for k in 0..6 {
            for e in [1, -1] {
                let r = t.relabel(k, e);
                if best.as_ref().is_none_or(|b| r < *b) {
                    best = Some(r);
                }
            }
        }
        assert_eq!(t.canonical_form(), best.unwrap());
        assert_eq!(t.canonical_form().to_string(), "3;(1,4)(3,6)(5,2)");
        // swapping over and under on the alternating trefoil is the same as
        // starting one label earlier
        assert_eq!(t.mirror().relabel(-1, 1), t);
        assert_eq!(t.mirror().canonical_form(), t.canonical_form());
    }

    #[test]
    fn mirror_examples() {
        assert_eq!(code(&[(1, 2)]).mirror(), code(&[(2, 1)]));
    }

    #[test]
    fn text_format() {
        assert_eq!(PairCode::empty().to_string(), "0;");
        assert_eq!("0;".parse::<PairCode>().unwrap(), PairCode::empty());
        let t: PairCode = "3;(1,4)(3,6)(5,2)".parse().unwrap();
        assert_eq!(t, code(&[(5, 2), (1, 4), (3, 6)]));
        assert!("3;(3,6)(1,4)(5,2)".parse::<PairCode>().is_err());
        assert!("2;(1,2)".parse::<PairCode>().is_err());
        assert!("1;(1,3)".parse::<PairCode>().is_err());
        assert!("1; (1,2)".parse::<PairCode>().is_err());
    }

    #[test]
    fn invalid_codes_rejected() {
        assert_eq!(PairCode::new(&[(1, 1)]), Err(CodeError::DuplicateLabel(1)));
        assert!(matches!(PairCode::new(&[(1, 3)]), Err(CodeError::LabelOutOfRange { .. })));
        assert!(matches!(PairCode::new(&[(0, 1)]), Err(CodeError::LabelOutOfRange { .. })));
    }

    #[test]
    fn composite_detection() {
        assert!(!code(&[(1, 4), (5, 2), (3, 6)]).is_composite());
        assert!(!code(&[(1, 2)]).is_composite());
        assert!(code(&[(1, 2), (3, 4)]).is_composite());
        // trefoil followed by a kink
        assert!(code(&[(1, 4), (5, 2), (3, 6), (7, 8)]).is_composite());
        // figure-eight
        assert!(!code(&[(1, 4), (3, 6), (5, 8), (7, 2)]).is_composite());
    }
}
