//! Color tests: `n x n` matrices `M` that define an arc-coloring rule at each
//! crossing, and the coloring counts they give as knot invariants.
//!
//! Colors are `0..n` internally; the text form and [`ColorMatrix::new`] use
//! `1..=n`.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use crate::realize::Diagram;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ColorError {
    #[error("test sizes differ ({0} vs {1})")]
    SizeMismatch(usize, usize),
    #[error("gcd(k, n) and gcd(k+1, n) must be 1 (n = {n}, k = {k})")]
    GcdViolation { n: usize, k: i64 },
    #[error("matrix entry {value} outside 1..={n}")]
    EntryOutOfRange { value: usize, n: usize },
    #[error("matrix must be square and nonempty")]
    Shape,
    #[error("malformed test text: {0}")]
    Parse(String),
}

/// Square matrix with entries in `0..n`. Only the shape is enforced here;
/// the axioms are checked by [`validate`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ColorMatrix {
    n: usize,
    entries: Vec<u8>,
}

impl ColorMatrix {
    /// Builds a matrix from 1-based rows.
    pub fn new(rows: &[Vec<usize>]) -> Result<Self, ColorError> {
        let n = rows.len();
        if n == 0 || n > u8::MAX as usize || rows.iter().any(|r| r.len() != n) {
            return Err(ColorError::Shape);
        }
        let mut entries = Vec::with_capacity(n * n);
        for &v in rows.iter().flatten() {
            if v == 0 || v > n {
                return Err(ColorError::EntryOutOfRange { value: v, n });
            }
            entries.push((v - 1) as u8);
        }
        Ok(ColorMatrix { n, entries })
    }

    /// Builds a matrix from a 0-based entry function.
    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> usize) -> Self {
        assert!(n >= 1 && n <= u8::MAX as usize);
        let entries = (0..n * n)
            .map(|x| {
                let v = f(x / n, x % n);
                assert!(v < n, "entry out of range");
                v as u8
            })
            .collect();
        ColorMatrix { n, entries }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    /// 0-based entry `M[i][j]`.
    #[inline]
    pub fn at(&self, i: usize, j: usize) -> usize {
        self.entries[i * self.n + j] as usize
    }

    /// The mirror test: `M[i][j] = k  =>  M'[k][j] = i`.
    /// Requires the column bijection axiom.
    pub fn mirror(&self) -> ColorMatrix {
        let n = self.n;
        let mut entries = vec![0u8; n * n];
        for i in 0..n {
            for j in 0..n {
                entries[self.at(i, j) * n + j] = i as u8;
            }
        }
        ColorMatrix { n, entries }
    }

    /// Renames colors: color `c` becomes `perm[c]`.
    pub fn permuted(&self, perm: &[usize]) -> ColorMatrix {
        let n = self.n;
        let mut entries = vec![0u8; n * n];
        for i in 0..n {
            for j in 0..n {
                entries[perm[i] * n + perm[j]] = perm[self.at(i, j)] as u8;
            }
        }
        ColorMatrix { n, entries }
    }

    /// Lexicographically smallest matrix among all color renamings of this
    /// test and of its mirror.
    pub fn canonical(&self) -> ColorMatrix {
        let mirror = self.mirror();
        let mut best = self.clone();
        for_each_permutation(self.n, |perm| {
            for m in [self, &mirror] {
                if permuted_less(m, perm, &best) {
                    best = m.permuted(perm);
                }
            }
        });
        best
    }

    /// True iff the mirror is a color renaming of this test.
    pub fn is_self_mirror(&self) -> bool {
        isomorphic(self, &self.mirror())
    }
}

/// Searches for a renaming taking `a` to `b`. A partial map is closed under
/// the operation before branching, so a few choices fix everything.
fn isomorphic(a: &ColorMatrix, b: &ColorMatrix) -> bool {
    fn close(a: &ColorMatrix, b: &ColorMatrix, phi: &mut [Option<usize>], used: &mut [bool]) -> bool {
        let n = a.n;
        loop {
            let mut changed = false;
            for p in 0..n {
                let Some(fp) = phi[p] else { continue };
                for q in 0..n {
                    let Some(fq) = phi[q] else { continue };
                    let (r, s) = (a.at(p, q), b.at(fp, fq));
                    match phi[r] {
                        Some(fr) if fr != s => return false,
                        Some(_) => {}
                        None if used[s] => return false,
                        None => {
                            phi[r] = Some(s);
                            used[s] = true;
                            changed = true;
                        }
                    }
                }
            }
            if !changed {
                return true;
            }
        }
    }
    fn go(a: &ColorMatrix, b: &ColorMatrix, phi: &[Option<usize>], used: &[bool]) -> bool {
        let Some(x) = phi.iter().position(Option::is_none) else {
            return true;
        };
        (0..a.n).filter(|&y| !used[y]).any(|y| {
            let (mut phi, mut used) = (phi.to_vec(), used.to_vec());
            phi[x] = Some(y);
            used[y] = true;
            close(a, b, &mut phi, &mut used) && go(a, b, &phi, &used)
        })
    }
    a.n == b.n && go(a, b, &vec![None; a.n], &vec![false; a.n])
}

/// Compares `m.permuted(perm)` with `best` without building it.
fn permuted_less(m: &ColorMatrix, perm: &[usize], best: &ColorMatrix) -> bool {
    let n = m.n;
    let mut inv = vec![0; n];
    for (c, &p) in perm.iter().enumerate() {
        inv[p] = c;
    }
    for a in 0..n {
        for b in 0..n {
            let v = perm[m.at(inv[a], inv[b])];
            let w = best.at(a, b);
            if v != w {
                return v < w;
            }
        }
    }
    false
}

/// Heap's algorithm over `0..n`.
fn for_each_permutation(n: usize, mut f: impl FnMut(&[usize])) {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    f(&perm);
    let mut i = 1;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            f(&perm);
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

impl fmt::Display for ColorMatrix {
    /// `n=3;1,3,2|3,2,1|2,1,3`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={};", self.n)?;
        for i in 0..self.n {
            if i > 0 {
                write!(f, "|")?;
            }
            for j in 0..self.n {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", self.at(i, j) + 1)?;
            }
        }
        Ok(())
    }
}

impl FromStr for ColorMatrix {
    type Err = ColorError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ColorError::Parse(s.to_string());
        let (head, body) = s.split_once(';').ok_or_else(bad)?;
        let n: usize = head.strip_prefix("n=").ok_or_else(bad)?.parse().map_err(|_| bad())?;
        let rows: Vec<Vec<usize>> = body
            .split('|')
            .map(|r| r.split(',').map(|v| v.parse::<usize>()).collect::<Result<Vec<_>, _>>())
            .collect::<Result<_, _>>()
            .map_err(|_| bad())?;
        if rows.len() != n {
            return Err(bad());
        }
        let m = ColorMatrix::new(&rows)?;
        if m.to_string() != s {
            return Err(bad());
        }
        Ok(m)
    }
}

/// Reads a suite file: one test per line, blank lines ignored.
pub fn parse_suite(text: &str) -> Result<Vec<ColorMatrix>, ColorError> {
    text.lines().map(str::trim).filter(|l| !l.is_empty()).map(str::parse).collect()
}

pub fn write_suite(suite: &[ColorMatrix]) -> String {
    suite.iter().map(|m| format!("{m}\n")).collect()
}

/// Checks the three move-derived axioms.
pub fn validate(m: &ColorMatrix) -> bool {
    let n = m.n;
    if (0..n).any(|i| m.at(i, i) != i) {
        return false;
    }
    for j in 0..n {
        let mut seen = vec![false; n];
        for i in 0..n {
            if std::mem::replace(&mut seen[m.at(i, j)], true) {
                return false;
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            let k = m.at(i, j);
            for l in 0..n {
                let (mm, q) = (m.at(l, i), m.at(l, j));
                if m.at(q, k) != m.at(mm, j) {
                    return false;
                }
            }
        }
    }
    true
}

/// True iff no proper nonempty color set is closed under `i -> M[i][j]`.
pub fn irreducible(m: &ColorMatrix) -> bool {
    let n = m.n;
    // the closure of {0} is a closed set; any closed set is a union of such orbits
    // and the orbits partition the colors, so one orbit covering everything suffices
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(i) = stack.pop() {
        for j in 0..n {
            let k = m.at(i, j);
            if !seen[k] {
                seen[k] = true;
                stack.push(k);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// Equality up to color renaming, possibly combined with the mirror.
pub fn same_test(a: &ColorMatrix, b: &ColorMatrix) -> Result<bool, ColorError> {
    if a.n != b.n {
        return Err(ColorError::SizeMismatch(a.n, b.n));
    }
    Ok(isomorphic(a, b) || isomorphic(a, &b.mirror()))
}

/// `M[i][j] = (k+1) j - k i mod n`.
pub fn affine(n: usize, k: i64) -> Result<ColorMatrix, ColorError> {
    fn gcd(a: i64, b: i64) -> i64 {
        if b == 0 {
            a.abs()
        } else {
            gcd(b, a % b)
        }
    }
    let ni = n as i64;
    if n < 2 || gcd(k, ni) != 1 || gcd(k + 1, ni) != 1 {
        return Err(ColorError::GcdViolation { n, k });
    }
    Ok(ColorMatrix::from_fn(n, |i, j| ((k + 1) * j as i64 - k * i as i64).rem_euclid(ni) as usize))
}

/// Conjugation table of one conjugacy class of `S_m`:
/// `M(g_i, g_j) = g_j g_i g_j^-1`, elements in lexicographic one-line order.
pub fn conjugation(m: usize, partition: &[usize]) -> ColorMatrix {
    assert!(
        partition.iter().sum::<usize>() == m && partition.iter().all(|&p| p > 0),
        "partition must consist of positive parts summing to m"
    );
    let mut want = partition.to_vec();
    want.sort_unstable_by(|a, b| b.cmp(a));
    let mut class: Vec<Vec<usize>> = Vec::new();
    for_each_permutation(m, |p| {
        if cycle_type(p) == want {
            class.push(p.to_vec());
        }
    });
    class.sort();
    let compose = |g: &[usize], h: &[usize]| -> Vec<usize> { h.iter().map(|&x| g[x]).collect() };
    let inverse = |g: &[usize]| -> Vec<usize> {
        let mut inv = vec![0; g.len()];
        for (x, &y) in g.iter().enumerate() {
            inv[y] = x;
        }
        inv
    };
    ColorMatrix::from_fn(class.len(), |i, j| {
        let g = compose(&compose(&class[j], &class[i]), &inverse(&class[j]));
        class.binary_search(&g).expect("class is closed under conjugation")
    })
}

/// Cycle lengths of a permutation in non-increasing order.
fn cycle_type(p: &[usize]) -> Vec<usize> {
    let mut seen = vec![false; p.len()];
    let mut out = Vec::new();
    for s in 0..p.len() {
        let mut len = 0;
        let mut x = s;
        while !seen[x] {
            seen[x] = true;
            x = p[x];
            len += 1;
        }
        if len > 0 {
            out.push(len);
        }
    }
    out.sort_unstable_by(|a, b| b.cmp(a));
    out
}

/// All valid irreducible tests with `n` colors, one per renaming/mirror class,
/// each given by its canonical matrix, sorted.
pub fn enumerate_tests(n: usize) -> Vec<ColorMatrix> {
    assert!(n >= 1);
    if n == 1 {
        return vec![ColorMatrix::from_fn(1, |_, _| 0)];
    }
    let mut found = HashSet::new();
    // In an irreducible test every column permutation is conjugate to column 0,
    // and renaming colors that fix color 0 brings column 0 to a standard form
    // for its cycle type, so each cycle type of column 0 is searched once.
    for parts in partitions(n - 1) {
        if parts.iter().all(|&p| p == 1) {
            // every column would be the identity: a reducible test
            continue;
        }
        let mut col0 = vec![0u8];
        let mut next = 1;
        for &len in &parts {
            // cycle next -> next+1 -> ... -> next+len-1 -> next
            for x in 0..len {
                col0.push((next + (x + 1) % len) as u8);
            }
            next += len;
        }
        let mut ty = cycle_type(&col0.iter().map(|&c| c as usize).collect::<Vec<_>>());
        ty.sort_unstable();
        let mut s = Search::new(n, ty);
        for (i, &v) in col0.iter().enumerate() {
            if !s.set(i, 0, v) {
                unreachable!("fresh column");
            }
        }
        if s.propagate() {
            s.run(&mut |m| {
                if irreducible(m) {
                    found.insert(m.canonical());
                }
            });
        }
    }
    let mut out: Vec<ColorMatrix> = found.into_iter().collect();
    out.sort();
    out
}

/// Partitions of `k` as non-increasing part lists.
pub fn partitions(k: usize) -> Vec<Vec<usize>> {
    fn go(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for p in (1..=rest.min(max)).rev() {
            cur.push(p);
            go(rest - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(k, k, &mut Vec::new(), &mut out);
    out
}

const UNSET: u8 = u8::MAX;

/// Backtracking over partial matrices. Propagation uses the fact that every
/// column is a homomorphism: `R_j(l*i) = R_j(l) * R_j(i)`.
#[derive(Clone)]
struct Search {
    n: usize,
    m: Vec<u8>,
    // used[j * n + v]: value v already appears in column j
    used: Vec<bool>,
    cycle_type: Vec<usize>,
}

impl Search {
    fn new(n: usize, cycle_type: Vec<usize>) -> Self {
        let mut s = Search { n, m: vec![UNSET; n * n], used: vec![false; n * n], cycle_type };
        for i in 0..n {
            s.m[i * n + i] = i as u8;
            s.used[i * n + i] = true;
        }
        s
    }

    fn get(&self, i: usize, j: usize) -> u8 {
        self.m[i * self.n + j]
    }

    /// Assigns or checks an entry; false on contradiction.
    fn set(&mut self, i: usize, j: usize, v: u8) -> bool {
        let n = self.n;
        let cur = self.m[i * n + j];
        if cur != UNSET {
            return cur == v;
        }
        if self.used[j * n + v as usize] {
            return false;
        }
        self.m[i * n + j] = v;
        self.used[j * n + v as usize] = true;
        true
    }

    /// Runs all homomorphism constraints to a fixpoint.
    fn propagate(&mut self) -> bool {
        let n = self.n;
        loop {
            let mut changed = false;
            for j in 0..n {
                for l in 0..n {
                    let rl = self.get(l, j);
                    if rl == UNSET {
                        continue;
                    }
                    for i in 0..n {
                        let (x, ri) = (self.get(l, i), self.get(i, j));
                        if x == UNSET || ri == UNSET {
                            continue;
                        }
                        let rx = self.get(x as usize, j);
                        let lhs = self.get(rl as usize, ri as usize);
                        match (rx == UNSET, lhs == UNSET) {
                            (true, true) => {}
                            (false, false) => {
                                if rx != lhs {
                                    return false;
                                }
                            }
                            (false, true) => {
                                if !self.set(rl as usize, ri as usize, rx) {
                                    return false;
                                }
                                changed = true;
                            }
                            (true, false) => {
                                if !self.set(x as usize, j, lhs) {
                                    return false;
                                }
                                changed = true;
                            }
                        }
                    }
                }
            }
            if !changed {
                break;
            }
        }
        (0..n).all(|j| self.cycles_fit(j)) && (0..n).all(|i| self.row_fixed_fits(i))
    }

    /// Transitivity of the automorphism group gives every row as many
    /// entries `M[i][j] = i` as a column has fixed points.
    fn row_fixed_fits(&self, i: usize) -> bool {
        let f = self.cycle_type.iter().filter(|&&c| c == 1).count();
        let row = &self.m[i * self.n..(i + 1) * self.n];
        let fixed = row.iter().filter(|&&v| v as usize == i).count();
        let open = row.iter().filter(|&&v| v == UNSET).count();
        fixed <= f && fixed + open >= f
    }

    /// The closed cycles of column `j` so far must fit in the target cycle type.
    fn cycles_fit(&self, j: usize) -> bool {
        let n = self.n;
        let mut left = self.cycle_type.clone();
        let mut seen = vec![false; n];
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut x = s;
            let mut len = 0;
            while !seen[x] {
                seen[x] = true;
                len += 1;
                let y = self.get(x, j);
                if y == UNSET {
                    len = 0;
                    break;
                }
                x = y as usize;
            }
            // only a walk that returned to its start is a complete cycle
            if len > 0 && x == s {
                match left.iter().position(|&c| c == len) {
                    Some(p) => {
                        left.swap_remove(p);
                    }
                    None => return false,
                }
            }
        }
        true
    }

    fn run(&self, emit: &mut dyn FnMut(&ColorMatrix)) {
        let n = self.n;
        let Some(pos) = self.m.iter().position(|&v| v == UNSET) else {
            let m = ColorMatrix { n, entries: self.m.clone() };
            debug_assert!(validate(&m));
            emit(&m);
            return;
        };
        let j = pos % n;
        for v in 0..n as u8 {
            if self.used[j * n + v as usize] {
                continue;
            }
            let mut next = self.clone();
            if next.set(pos / n, j, v) && next.propagate() {
                next.run(emit);
            }
        }
    }
}

/// Number of arc colorings of `diagram` obeying `m` at every crossing.
///
/// Positive crossing: `out = M[in][over]`; negative: `in = M[out][over]`.
pub fn count_colorings(diagram: &Diagram, m: &ColorMatrix) -> u64 {
    let arcs = diagram.arcs().len().max(1);
    // (a, b, over, c): color(c) = M[color(a)][color(over)] and by the
    // column bijection color(a) is recovered from color(c)
    let rules: Vec<(usize, usize, usize)> = diagram
        .incidence()
        .iter()
        .zip(diagram.signs())
        .map(|(inc, &s)| if s > 0 { (inc.incoming, inc.over, inc.outgoing) } else { (inc.outgoing, inc.over, inc.incoming) })
        .collect();
    let mut per_arc: Vec<Vec<usize>> = vec![Vec::new(); arcs];
    for (r, &(a, o, c)) in rules.iter().enumerate() {
        per_arc[a].push(r);
        per_arc[o].push(r);
        per_arc[c].push(r);
    }
    let mirror = m.mirror();
    let mut colors = vec![UNSET; arcs];
    let mut count = 0u64;
    count_rec(&rules, &per_arc, m, &mirror, &mut colors, &mut count);
    count
}

fn count_rec(
    rules: &[(usize, usize, usize)],
    per_arc: &[Vec<usize>],
    m: &ColorMatrix,
    mirror: &ColorMatrix,
    colors: &mut Vec<u8>,
    count: &mut u64,
) {
    let Some(arc) = colors.iter().position(|&c| c == UNSET) else {
        *count += 1;
        return;
    };
    for v in 0..m.size() as u8 {
        let saved = colors.clone();
        colors[arc] = v;
        if propagate_colors(rules, per_arc, m, mirror, colors, arc) {
            count_rec(rules, per_arc, m, mirror, colors, count);
        }
        *colors = saved;
    }
}

fn propagate_colors(
    rules: &[(usize, usize, usize)],
    per_arc: &[Vec<usize>],
    m: &ColorMatrix,
    mirror: &ColorMatrix,
    colors: &mut [u8],
    start: usize,
) -> bool {
    let mut stack = vec![start];
    while let Some(arc) = stack.pop() {
        for &r in &per_arc[arc] {
            let (a, o, c) = rules[r];
            let (ca, co, cc) = (colors[a], colors[o], colors[c]);
            if co == UNSET {
                continue;
            }
            match (ca == UNSET, cc == UNSET) {
                (true, true) => {}
                (false, false) => {
                    if m.at(ca as usize, co as usize) != cc as usize {
                        return false;
                    }
                }
                (false, true) => {
                    colors[c] = m.at(ca as usize, co as usize) as u8;
                    stack.push(c);
                }
                (true, false) => {
                    colors[a] = mirror.at(cc as usize, co as usize) as u8;
                    stack.push(a);
                }
            }
        }
    }
    true
}

/// Value recorded for one test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TestValue {
    /// Self-mirror test.
    Single(u64),
    /// Counts for the test and its mirror, smaller first.
    Pair(u64, u64),
}

impl fmt::Display for TestValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TestValue::Single(c) => write!(f, "{c}"),
            TestValue::Pair(a, b) => write!(f, "{a}/{b}"),
        }
    }
}

impl FromStr for TestValue {
    type Err = ColorError;

    fn from_str(s: &str) -> Result<Self, ColorError> {
        let num = |t: &str| t.parse::<u64>().map_err(|_| ColorError::Parse(s.to_string()));
        match s.split_once('/') {
            None => Ok(TestValue::Single(num(s)?)),
            Some((a, b)) => {
                let (a, b) = (num(a)?, num(b)?);
                if a > b {
                    return Err(ColorError::Parse(s.to_string()));
                }
                Ok(TestValue::Pair(a, b))
            }
        }
    }
}

/// Coloring counts of one diagram under a suite, in suite order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InvariantVector {
    pub values: Vec<(String, TestValue)>,
    pub polynomial: Option<crate::alexander::LaurentPolynomial>,
}

impl InvariantVector {
    pub fn counts(&self) -> Vec<TestValue> {
        self.values.iter().map(|(_, v)| *v).collect()
    }
}

pub fn invariant_vector(diagram: &Diagram, suite: &[ColorMatrix]) -> InvariantVector {
    let values = suite
        .iter()
        .map(|m| {
            let a = count_colorings(diagram, m);
            let v = if m.is_self_mirror() {
                TestValue::Single(a)
            } else {
                let b = count_colorings(diagram, &m.mirror());
                TestValue::Pair(a.min(b), a.max(b))
            };
            (m.to_string(), v)
        })
        .collect();
    InvariantVector { values, polynomial: None }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::PairCode;
    use crate::realize::realize;

    fn tricolor() -> ColorMatrix {
        ColorMatrix::from_fn(3, |i, j| if i == j { i } else { 3 - i - j })
    }

    fn diagram(p: &[(usize, usize)]) -> Diagram {
        realize(&PairCode::new(p).unwrap()).unwrap()
    }

    #[test]
    fn axioms() {
        assert!(validate(&ColorMatrix::from_fn(1, |_, _| 0)));
        assert!(validate(&tricolor()));
        assert!(irreducible(&tricolor()));
        assert!(irreducible(&ColorMatrix::from_fn(1, |_, _| 0)));
        let projection = ColorMatrix::from_fn(4, |i, _| i);
        assert!(validate(&projection));
        assert!(!irreducible(&projection));
        // the two 2-color candidates with a diagonal and column bijections
        let swap = ColorMatrix::new(&[vec![1, 1], vec![2, 2]]).unwrap();
        assert!(validate(&swap) && !irreducible(&swap));
        assert!(enumerate_tests(2).is_empty());
    }

    #[test]
    fn text_format() {
        let t = tricolor();
        assert_eq!(t.to_string(), "n=3;1,3,2|3,2,1|2,1,3");
        assert_eq!("n=3;1,3,2|3,2,1|2,1,3".parse::<ColorMatrix>().unwrap(), t);
        assert!("n=3;1,3,2|3,2,1".parse::<ColorMatrix>().is_err());
        assert!("n=2;1,3|2,2".parse::<ColorMatrix>().is_err());
        assert!("n=1; 1".parse::<ColorMatrix>().is_err());
        let suite = vec![t.clone(), affine(5, 1).unwrap()];
        assert_eq!(parse_suite(&write_suite(&suite)).unwrap(), suite);
    }

    #[test]
    fn equivalence() {
        let t = tricolor();
        assert!(same_test(&t, &t).unwrap());
        assert_eq!(t.mirror(), t);
        assert!(t.is_self_mirror());
        let a = affine(5, 1).unwrap();
        assert_eq!(same_test(&t, &a), Err(ColorError::SizeMismatch(3, 5)));
        // t = -k: t=3 and t=2 are inverse mod 5, so k=2 and k=3 give mirror tests
        let b = affine(5, 2).unwrap();
        assert!(!same_test(&a, &b).unwrap());
        assert!(!b.is_self_mirror());
        assert!(same_test(&b, &affine(5, 3).unwrap()).unwrap());
    }

    #[test]
    fn renaming_search_matches_canonical_form() {
        let mut tests: Vec<ColorMatrix> = (2..8).flat_map(|n| (1..n as i64).filter_map(move |k| affine(n, k).ok())).collect();
        tests.extend((4..=6).flat_map(enumerate_tests));
        tests.push(conjugation(4, &[2, 1, 1]));
        tests.push(conjugation(4, &[3, 1]));
        let brute = |a: &ColorMatrix, b: &ColorMatrix| {
            let mut found = false;
            for_each_permutation(a.size(), |p| found |= a.permuted(p) == *b);
            found
        };
        for a in &tests {
            assert_eq!(a.is_self_mirror(), brute(a, &a.mirror()), "{a}");
            for b in tests.iter().filter(|b| b.size() == a.size()) {
                assert_eq!(same_test(a, b).unwrap(), a.canonical() == b.canonical(), "{a} {b}");
            }
        }
    }

    #[test]
    fn affine_family() {
        assert_eq!(affine(3, 1).unwrap(), tricolor());
        assert_eq!(affine(4, 1), Err(ColorError::GcdViolation { n: 4, k: 1 }));
        let five = affine(5, 1).unwrap();
        assert!(validate(&five) && irreducible(&five));
        for n in 2..12 {
            for k in -12..12 {
                if let Ok(m) = affine(n, k) {
                    assert!(validate(&m), "affine({n},{k})");
                }
            }
        }
    }

    #[test]
    fn conjugation_classes() {
        let transpositions = conjugation(3, &[2, 1]);
        assert!(validate(&transpositions));
        assert!(same_test(&transpositions, &tricolor()).unwrap());
        assert_eq!(conjugation(2, &[2]), ColorMatrix::from_fn(1, |_, _| 0));
        let three_cycles = conjugation(3, &[3]);
        assert_eq!(three_cycles, ColorMatrix::from_fn(2, |i, _| i));
        assert!(validate(&three_cycles) && !irreducible(&three_cycles));
    }

    #[test]
    fn test_counts_small() {
        let counts: Vec<usize> = (1..=6).map(|n| enumerate_tests(n).len()).collect();
        assert_eq!(counts, [1, 0, 1, 1, 2, 2]);
        for n in 1..=6 {
            for m in enumerate_tests(n) {
                assert!(validate(&m) && irreducible(&m));
                assert_eq!(m.canonical(), m);
            }
        }
    }

    #[test]
    fn colorings() {
        let t = tricolor();
        assert_eq!(count_colorings(&diagram(&[]), &t), 3);
        assert_eq!(count_colorings(&diagram(&[(1, 2)]), &t), 3);
        assert_eq!(count_colorings(&diagram(&[(1, 4), (5, 2), (3, 6)]), &t), 9);
        assert_eq!(count_colorings(&diagram(&[(1, 4), (3, 6), (5, 8), (7, 2)]), &t), 3);
        let five = affine(5, 1).unwrap();
        assert_eq!(count_colorings(&diagram(&[(1, 4), (3, 6), (5, 8), (7, 2)]), &five), 25);
        assert_eq!(count_colorings(&diagram(&[(1, 4), (5, 2), (3, 6)]), &five), 5);
    }

    #[test]
    fn vectors() {
        let suite: Vec<ColorMatrix> = (1..=3).flat_map(enumerate_tests).collect();
        let unknot = invariant_vector(&diagram(&[]), &suite);
        let trefoil = invariant_vector(&diagram(&[(1, 4), (5, 2), (3, 6)]), &suite);
        let eight = invariant_vector(&diagram(&[(1, 4), (3, 6), (5, 8), (7, 2)]), &suite);
        assert_eq!(unknot.counts(), [TestValue::Single(1), TestValue::Single(3)]);
        assert_eq!(trefoil.counts(), [TestValue::Single(1), TestValue::Single(9)]);
        let five: Vec<ColorMatrix> = enumerate_tests(5);
        assert_ne!(invariant_vector(&diagram(&[(1, 4), (5, 2), (3, 6)]), &five), invariant_vector(&diagram(&[(1, 4), (3, 6), (5, 8), (7, 2)]), &five));
        assert_ne!(trefoil, eight);
    }
}
