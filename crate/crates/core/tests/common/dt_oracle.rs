//! Test-only drawability oracle working on Dowker–Thistlethwaite sequences.
//!
//! The sequence pairs every odd label with an even one. Drawability is
//! decided on the interlacement graph of the chord diagram: a sequence is
//! drawable iff every chord is interlaced with an even number of chords,
//! every non-interlaced pair shares an even number of interlaced chords, and
//! the interlaced pairs sharing an even number of chords form a cut of the
//! interlacement graph. None of this shares code with the library.

use knottab::code::PairCode;

/// `dt[i]` is the even partner of odd label `2i + 1`.
pub fn dt_sequence(code: &PairCode) -> Option<Vec<usize>> {
    let m = code.label_count();
    let mut dt = vec![0; m / 2];
    for &(o, u) in code.pairs() {
        let (o, u) = (o as usize, u as usize);
        let (odd, even) = if o % 2 == 1 { (o, u) } else { (u, o) };
        if odd % 2 != 1 || even % 2 != 0 {
            return None;
        }
        dt[(odd - 1) / 2] = even;
    }
    Some(dt)
}

pub fn dt_drawable(code: &PairCode) -> bool {
    let Some(dt) = dt_sequence(code) else { return false };
    let n = dt.len();
    let chords: Vec<(usize, usize)> =
        dt.iter().enumerate().map(|(i, &e)| (2 * i + 1, e)).map(|(a, b)| (a.min(b), a.max(b))).collect();
    let inside = |c: (usize, usize), x: usize| c.0 < x && x < c.1;
    let interlaced =
        |a: usize, b: usize| inside(chords[a], chords[b].0) != inside(chords[a], chords[b].1);
    let adj: Vec<Vec<bool>> =
        (0..n).map(|a| (0..n).map(|b| a != b && interlaced(a, b)).collect()).collect();
    let common = |a: usize, b: usize| (0..n).filter(|&c| adj[a][c] && adj[b][c]).count();

    for a in 0..n {
        if adj[a].iter().filter(|&&x| x).count() % 2 == 1 {
            return false;
        }
    }
    // parity union-find: colour[a] xor colour[b] = want
    let mut parent: Vec<usize> = (0..n).collect();
    let mut parity = vec![0u8; n];
    fn find(p: &mut Vec<usize>, par: &mut Vec<u8>, x: usize) -> (usize, u8) {
        if p[x] == x {
            return (x, 0);
        }
        let (r, q) = find(p, par, p[x]);
        par[x] ^= q;
        p[x] = r;
        (r, par[x])
    }
    for a in 0..n {
        for b in a + 1..n {
            let even = common(a, b) % 2 == 0;
            if !adj[a][b] {
                if !even {
                    return false;
                }
                continue;
            }
            let want = u8::from(even);
            let (ra, pa) = find(&mut parent, &mut parity, a);
            let (rb, pb) = find(&mut parent, &mut parity, b);
            if ra == rb {
                if pa ^ pb != want {
                    return false;
                }
            } else {
                parent[ra] = rb;
                parity[ra] = pa ^ pb ^ want;
            }
        }
    }
    true
}
