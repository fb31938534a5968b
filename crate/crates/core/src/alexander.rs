//! Alexander–Conway polynomial of a realized diagram.
//!
//! Each crossing contributes one linear relation between its three arcs.
//! After deleting the last row and column the determinant is computed exactly
//! over `Z[t]` with fraction-free (Bareiss) elimination.

use std::fmt;
use std::str::FromStr;

use crate::realize::Diagram;

/// Integer polynomial in `t`, coefficients from degree 0 upward, no trailing
/// zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
struct Poly(Vec<i128>);

impl Poly {
    fn constant(c: i128) -> Poly {
        Poly(vec![c]).trimmed()
    }

    fn trimmed(mut self) -> Poly {
        while self.0.last() == Some(&0) {
            self.0.pop();
        }
        self
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn add(&self, o: &Poly) -> Poly {
        let mut v = vec![0; self.0.len().max(o.0.len())];
        for (i, &c) in self.0.iter().enumerate() {
            v[i] += c;
        }
        for (i, &c) in o.0.iter().enumerate() {
            v[i] += c;
        }
        Poly(v).trimmed()
    }

    fn neg(&self) -> Poly {
        Poly(self.0.iter().map(|c| -c).collect())
    }

    fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.neg())
    }

    fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::default();
        }
        let mut v = vec![0i128; self.0.len() + o.0.len() - 1];
        for (i, &a) in self.0.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.0.iter().enumerate() {
                v[i + j] = v[i + j].checked_add(a.checked_mul(b).expect("overflow")).expect("overflow");
            }
        }
        Poly(v).trimmed()
    }

    /// Exact division; panics if `d` does not divide `self`.
    fn div_exact(&self, d: &Poly) -> Poly {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Poly::default();
        }
        let mut rem = self.0.clone();
        let dl = d.0.len();
        let lead = *d.0.last().unwrap();
        if rem.len() < dl {
            panic!("inexact polynomial division");
        }
        let mut q = vec![0i128; rem.len() - dl + 1];
        for k in (0..q.len()).rev() {
            let c = rem[k + dl - 1];
            if c % lead != 0 {
                panic!("inexact polynomial division");
            }
            let f = c / lead;
            q[k] = f;
            for (j, &b) in d.0.iter().enumerate() {
                rem[k + j] -= f * b;
            }
        }
        assert!(rem.iter().all(|&c| c == 0), "inexact polynomial division");
        Poly(q).trimmed()
    }
}

/// Determinant of a square matrix over `Z[t]` by Bareiss elimination.
fn determinant(mut a: Vec<Vec<Poly>>) -> Poly {
    let n = a.len();
    if n == 0 {
        return Poly::constant(1);
    }
    let mut sign = 1i128;
    let mut prev = Poly::constant(1);
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                return Poly::default();
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = a[i][j].mul(&a[k][k]).sub(&a[i][k].mul(&a[k][j]));
                a[i][j] = v.div_exact(&prev);
            }
            a[i][k] = Poly::default();
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign < 0 {
        d.neg()
    } else {
        d
    }
}

/// Laurent polynomial with exact integer coefficients.
///
/// Values returned by [`alexander_poly`] are in normal form: lowest exponent
/// 0 and positive lowest coefficient.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LaurentPolynomial {
    low: i32,
    coeffs: Vec<i128>,
}

impl LaurentPolynomial {
    pub fn zero() -> Self {
        LaurentPolynomial { low: 0, coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        LaurentPolynomial { low: 0, coeffs: vec![1] }
    }

    /// `sum coeffs[i] * t^(low + i)`.
    pub fn new(low: i32, coeffs: Vec<i128>) -> Self {
        let mut p = LaurentPolynomial { low, coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|&&c| c == 0).count();
        self.coeffs.drain(..lead);
        self.low += lead as i32;
        if self.coeffs.is_empty() {
            self.low = 0;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `t^e`.
    pub fn coeff(&self, e: i32) -> i128 {
        let i = e - self.low;
        if i < 0 {
            0
        } else {
            self.coeffs.get(i as usize).copied().unwrap_or(0)
        }
    }

    pub fn lowest_exponent(&self) -> i32 {
        self.low
    }

    pub fn highest_exponent(&self) -> i32 {
        self.low + self.coeffs.len() as i32 - 1
    }

    /// Multiplies by `±t^k` so that the lowest exponent is 0 and its
    /// coefficient is positive.
    pub fn normalized(&self) -> Self {
        let mut p = self.clone();
        p.low = 0;
        if p.coeffs.first().is_some_and(|&c| c < 0) {
            p.coeffs.iter_mut().for_each(|c| *c = -*c);
        }
        p
    }

    pub fn is_normalized(&self) -> bool {
        self.is_zero() || (self.low == 0 && self.coeffs[0] > 0)
    }

    /// Coefficients from the lowest exponent upward.
    pub fn coefficients(&self) -> &[i128] {
        &self.coeffs
    }

    pub fn eval(&self, t: i128) -> Option<i128> {
        if self.low < 0 && t == 0 {
            return None;
        }
        let mut acc: i128 = 0;
        for &c in self.coeffs.iter().rev() {
            acc = acc * t + c;
        }
        if self.low >= 0 {
            Some(acc * t.pow(self.low as u32))
        } else {
            let d = t.pow((-self.low) as u32);
            (acc % d == 0).then(|| acc / d)
        }
    }

    /// True iff the coefficient sequence reads the same both ways.
    pub fn is_palindromic(&self) -> bool {
        self.coeffs.iter().eq(self.coeffs.iter().rev())
    }
}

impl std::ops::Mul for &LaurentPolynomial {
    type Output = LaurentPolynomial;

    fn mul(self, o: &LaurentPolynomial) -> LaurentPolynomial {
        if self.is_zero() || o.is_zero() {
            return LaurentPolynomial::zero();
        }
        let mut coeffs = vec![0i128; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        LaurentPolynomial::new(self.low + o.low, coeffs)
    }
}

impl fmt::Display for LaurentPolynomial {
    /// Comma-separated coefficients from the lowest exponent upward; the
    /// zero polynomial prints as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.coeffs.iter().map(i128::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed polynomial text: {0}")]
pub struct PolyParseError(String);

impl FromStr for LaurentPolynomial {
    type Err = PolyParseError;

    /// Parses the normal-form text written by `Display`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let coeffs: Vec<i128> = s
            .split(',')
            .map(|c| c.parse::<i128>())
            .collect::<Result<_, _>>()
            .map_err(|_| PolyParseError(s.to_string()))?;
        let p = LaurentPolynomial::new(0, coeffs);
        if p.to_string() != s {
            return Err(PolyParseError(s.to_string()));
        }
        Ok(p)
    }
}

/// Crossing relation matrix (rows = crossings, columns = arcs).
/// Positive crossing: `t*x_in - x_out + (1-t)*x_over = 0`; negative:
/// `-x_in + t*x_out + (1-t)*x_over = 0`.
fn relation_matrix(d: &Diagram) -> Vec<Vec<Poly>> {
    let n = d.crossing_count();
    let t = Poly(vec![0, 1]);
    let minus_one = Poly::constant(-1);
    let one_minus_t = Poly(vec![1, -1]);
    let mut m = vec![vec![Poly::default(); n]; n];
    for (c, inc) in d.incidence().iter().enumerate() {
        let (a_in, a_out) = if d.signs()[c] > 0 { (&t, &minus_one) } else { (&minus_one, &t) };
        m[c][inc.incoming] = m[c][inc.incoming].add(a_in);
        m[c][inc.outgoing] = m[c][inc.outgoing].add(a_out);
        m[c][inc.over] = m[c][inc.over].add(&one_minus_t);
    }
    m
}

/// Normalized Alexander polynomial; the last row and column of the relation
/// matrix are deleted.
pub fn alexander_poly(diagram: &Diagram) -> LaurentPolynomial {
    alexander_poly_minor(diagram, diagram.crossing_count().saturating_sub(1), diagram.crossing_count().saturating_sub(1))
}

/// Same as [`alexander_poly`] but deleting an arbitrary row and column.
pub fn alexander_poly_minor(diagram: &Diagram, row: usize, col: usize) -> LaurentPolynomial {
    let n = diagram.crossing_count();
    if n <= 1 {
        return LaurentPolynomial::one();
    }
    let m = relation_matrix(diagram);
    let minor: Vec<Vec<Poly>> = m
        .into_iter()
        .enumerate()
        .filter(|&(r, _)| r != row)
        .map(|(_, r)| r.into_iter().enumerate().filter(|&(c, _)| c != col).map(|(_, p)| p).collect())
        .collect();
    let det = determinant(minor);
    LaurentPolynomial::new(0, det.0).normalized()
}

/// Knot determinant `|p(-1)|`.
pub fn eval_at_minus_one(p: &LaurentPolynomial) -> u128 {
    p.eval(-1).expect("evaluation at -1 is always defined").unsigned_abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::PairCode;
    use crate::realize::realize;

    fn poly(s: &str) -> LaurentPolynomial {
        s.parse().unwrap()
    }

    fn diagram(p: &[(usize, usize)]) -> Diagram {
        realize(&PairCode::new(p).unwrap()).unwrap()
    }

    #[test]
    fn small_knots() {
        assert_eq!(alexander_poly(&diagram(&[])), LaurentPolynomial::one());
        assert_eq!(alexander_poly(&diagram(&[(1, 2)])), LaurentPolynomial::one());
        assert_eq!(alexander_poly(&diagram(&[(1, 4), (5, 2), (3, 6)])), poly("1,-1,1"));
        assert_eq!(alexander_poly(&diagram(&[(1, 4), (3, 6), (5, 8), (7, 2)])), poly("1,-3,1"));
    }

    #[test]
    fn five_crossing_knots() {
        // 5_1 and 5_2 from their Dowker–Thistlethwaite codes, alternating
        assert_eq!(
            alexander_poly(&diagram(&[(1, 6), (3, 8), (5, 10), (7, 2), (9, 4)])),
            poly("1,-1,1,-1,1")
        );
        assert_eq!(
            alexander_poly(&diagram(&[(1, 4), (3, 8), (5, 10), (7, 2), (9, 6)])),
            poly("2,-3,2")
        );
    }

    #[test]
    fn determinants() {
        assert_eq!(eval_at_minus_one(&LaurentPolynomial::one()), 1);
        assert_eq!(eval_at_minus_one(&poly("1,-1,1")), 3);
        assert_eq!(eval_at_minus_one(&poly("1,-3,1")), 5);
        assert_eq!(eval_at_minus_one(&LaurentPolynomial::new(-2, vec![1, -3, 1])), 5);
    }

    #[test]
    fn normal_form() {
        let p = LaurentPolynomial::new(-3, vec![0, -1, 1, -1]);
        let q = p.normalized();
        assert_eq!(q.to_string(), "1,-1,1");
        assert!(q.is_normalized());
        assert!(LaurentPolynomial::zero().is_normalized());
        assert_eq!(LaurentPolynomial::zero().to_string(), "0");
        assert!("1,,2".parse::<LaurentPolynomial>().is_err());
        assert!("-1,2".parse::<LaurentPolynomial>().is_ok());
        assert!("1,2,0".parse::<LaurentPolynomial>().is_err());
    }

    #[test]
    fn bareiss_matches_cofactor() {
        // small matrix with polynomial entries, checked by Leibniz expansion
        let e = |v: &[i128]| Poly(v.to_vec()).trimmed();
        let m = vec![
            vec![e(&[0, 1]), e(&[1, -1]), e(&[2])],
            vec![e(&[-1]), e(&[0]), e(&[0, 0, 1])],
            vec![e(&[3, 1]), e(&[1]), e(&[0])],
        ];
        let mut leibniz = Poly::default();
        for (p, s) in [([0, 1, 2], 1), ([0, 2, 1], -1), ([1, 0, 2], -1), ([1, 2, 0], 1), ([2, 0, 1], 1), ([2, 1, 0], -1)] {
            let term = m[0][p[0]].mul(&m[1][p[1]]).mul(&m[2][p[2]]);
            leibniz = if s > 0 { leibniz.add(&term) } else { leibniz.sub(&term) };
        }
        assert_eq!(determinant(m), leibniz);
    }
}
