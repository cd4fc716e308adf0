//! Exact rational scalars and small dense linear algebra over the rationals.
//!
//! Everything in this crate that touches eigenspaces, uniform projections or
//! lattice cosets runs on these types; there is no floating point anywhere.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Exact rational number with i128 backing.
///
/// Denominators stay tiny in this crate (lcm 4 in the decomposition solver,
/// small minors in rank-8 kernels), so i128 gives a wide safety margin; all
/// constructors normalize and panic on a zero denominator.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rat {
    num: i128,
    den: i128, // > 0
}

impl Rat {
    pub const ZERO: Rat = Rat { num: 0, den: 1 };
    pub const ONE: Rat = Rat { num: 1, den: 1 };

    pub fn new(num: i128, den: i128) -> Rat {
        assert!(den != 0, "zero denominator");
        let s = if den < 0 { -1 } else { 1 };
        let g = gcd(num, den).max(1);
        Rat {
            num: s * num / g,
            den: s * den / g,
        }
    }

    pub fn int(n: i128) -> Rat {
        Rat { num: n, den: 1 }
    }

    pub fn num(&self) -> i128 {
        self.num
    }

    pub fn den(&self) -> i128 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn is_integer(&self) -> bool {
        self.den == 1
    }

    pub fn abs(&self) -> Rat {
        Rat {
            num: self.num.abs(),
            den: self.den,
        }
    }

    /// Integer value, if integral.
    pub fn as_integer(&self) -> Option<i128> {
        (self.den == 1).then_some(self.num)
    }

    /// Smallest integer >= self.
    pub fn ceil(&self) -> i128 {
        self.num.div_euclid(self.den) + i128::from(self.num.rem_euclid(self.den) != 0)
    }

    pub fn floor(&self) -> i128 {
        self.num.div_euclid(self.den)
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl Add for Rat {
    type Output = Rat;
    fn add(self, rhs: Rat) -> Rat {
        Rat::new(self.num * rhs.den + rhs.num * self.den, self.den * rhs.den)
    }
}

impl AddAssign for Rat {
    fn add_assign(&mut self, rhs: Rat) {
        *self = *self + rhs;
    }
}

impl Sub for Rat {
    type Output = Rat;
    fn sub(self, rhs: Rat) -> Rat {
        Rat::new(self.num * rhs.den - rhs.num * self.den, self.den * rhs.den)
    }
}

impl Mul for Rat {
    type Output = Rat;
    fn mul(self, rhs: Rat) -> Rat {
        Rat::new(self.num * rhs.num, self.den * rhs.den)
    }
}

impl Div for Rat {
    type Output = Rat;
    fn div(self, rhs: Rat) -> Rat {
        assert!(rhs.num != 0, "division by zero");
        Rat::new(self.num * rhs.den, self.den * rhs.num)
    }
}

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat {
            num: -self.num,
            den: self.den,
        }
    }
}

impl PartialOrd for Rat {
    fn partial_cmp(&self, other: &Rat) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rat {
    fn cmp(&self, other: &Rat) -> Ordering {
        (self.num * other.den).cmp(&(other.num * self.den))
    }
}

/// Dense matrix over the rationals, row major.
#[derive(Clone, Debug, PartialEq)]
pub struct QMat {
    pub rows: usize,
    pub cols: usize,
    pub a: Vec<Rat>,
}

impl QMat {
    pub fn zero(rows: usize, cols: usize) -> QMat {
        QMat {
            rows,
            cols,
            a: vec![Rat::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> QMat {
        let mut m = QMat::zero(n, n);
        for i in 0..n {
            m[(i, i)] = Rat::ONE;
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> QMat {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c));
        QMat {
            rows: r,
            cols: c,
            a: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_int_rows(rows: &[Vec<i128>]) -> QMat {
        QMat::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Rat::int(x)).collect())
                .collect(),
        )
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.a[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul(&self, rhs: &QMat) -> QMat {
        assert_eq!(self.cols, rhs.rows);
        let mut out = QMat::zero(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let v = self[(i, k)];
                if v.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += v * rhs[(k, j)];
                }
            }
        }
        out
    }

    pub fn add_scaled(&self, rhs: &QMat, s: Rat) -> QMat {
        assert!(self.rows == rhs.rows && self.cols == rhs.cols);
        let mut out = self.clone();
        for (o, r) in out.a.iter_mut().zip(rhs.a.iter()) {
            *o += *r * s;
        }
        out
    }

    /// Row echelon reduction in place; returns pivot columns.
    pub fn row_reduce(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self[(i, c)].is_zero()) else {
                continue;
            };
            for j in 0..self.cols {
                let t = self[(r, j)];
                self[(r, j)] = self[(p, j)];
                self[(p, j)] = t;
            }
            let inv = Rat::ONE / self[(r, c)];
            for j in c..self.cols {
                self[(r, j)] = self[(r, j)] * inv;
            }
            for i in 0..self.rows {
                if i != r && !self[(i, c)].is_zero() {
                    let f = self[(i, c)];
                    for j in c..self.cols {
                        let v = self[(r, j)] * f;
                        self[(i, j)] = self[(i, j)] - v;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.row_reduce().len()
    }

    /// Basis of the right kernel, one vector per row of the result.
    pub fn kernel_basis(&self) -> Vec<Vec<Rat>> {
        let mut m = self.clone();
        let pivots = m.row_reduce();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if is_pivot[free] {
                continue;
            }
            let mut v = vec![Rat::ZERO; self.cols];
            v[free] = Rat::ONE;
            for (ri, &p) in pivots.iter().enumerate() {
                v[p] = -m[(ri, free)];
            }
            basis.push(v);
        }
        basis
    }

    /// Solve self * x = b; returns one solution if consistent.
    pub fn solve(&self, b: &[Rat]) -> Option<Vec<Rat>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = QMat::zero(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)];
            }
            aug[(i, self.cols)] = b[i];
        }
        let pivots = aug.row_reduce();
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![Rat::ZERO; self.cols];
        for (ri, &p) in pivots.iter().enumerate() {
            x[p] = aug[(ri, self.cols)];
        }
        Some(x)
    }

    /// Inverse of a square matrix, if nonsingular.
    pub fn inverse(&self) -> Option<QMat> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = QMat::zero(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)];
            }
            aug[(i, n + i)] = Rat::ONE;
        }
        let pivots = aug.row_reduce();
        if pivots.len() != n || pivots.iter().enumerate().any(|(i, &p)| i != p) {
            return None;
        }
        let mut out = QMat::zero(n, n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = aug[(i, n + j)];
            }
        }
        Some(out)
    }
}

impl std::ops::Index<(usize, usize)> for QMat {
    type Output = Rat;
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        &self.a[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for QMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        &mut self.a[i * self.cols + j]
    }
}

/// Characteristic polynomial of an integer matrix, ascending coefficients.
///
/// Faddeev–LeVerrier with exact integer divisions; fine up to rank 8.
pub fn char_poly_int(m: &[Vec<i128>]) -> Vec<i128> {
    let n = m.len();
    assert!(m.iter().all(|r| r.len() == n));
    // traces of powers
    let mut pw = vec![vec![0i128; n]; n];
    for (i, row) in pw.iter_mut().enumerate() {
        row[i] = 1;
    }
    let mut p = vec![0i128; n + 1]; // p[k] = trace(M^k)
    for k in 1..=n {
        let mut nx = vec![vec![0i128; n]; n];
        for i in 0..n {
            for l in 0..n {
                let v = pw[i][l];
                if v == 0 {
                    continue;
                }
                for j in 0..n {
                    nx[i][j] += v * m[l][j];
                }
            }
        }
        pw = nx;
        p[k] = (0..n).map(|i| pw[i][i]).sum();
    }
    // Newton's identities: e[0]=1, k*e[k] = sum_{i=1..k} (-1)^{i-1} e[k-i] p[i]
    let mut e = vec![0i128; n + 1];
    e[0] = 1;
    for k in 1..=n {
        let mut s = 0i128;
        for i in 1..=k {
            let t = e[k - i] * p[i];
            if i % 2 == 1 {
                s += t;
            } else {
                s -= t;
            }
        }
        debug_assert_eq!(s % (k as i128), 0);
        e[k] = s / (k as i128);
    }
    // char poly = X^n - e1 X^{n-1} + e2 X^{n-2} - ...
    let mut coeffs = vec![0i128; n + 1];
    for (k, ek) in e.iter().enumerate() {
        let c = if k % 2 == 0 { *ek } else { -*ek };
        coeffs[n - k] = c;
    }
    coeffs
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rat_arithmetic() {
        let a = Rat::new(1, 4);
        let b = Rat::new(3, 4);
        assert_eq!(a + b, Rat::ONE);
        assert_eq!(a - b, Rat::new(-1, 2));
        assert_eq!((a * b).to_string(), "3/16");
        assert_eq!(Rat::new(6, -4), Rat::new(-3, 2));
        assert_eq!(Rat::new(7, 2).ceil(), 4);
        assert_eq!(Rat::new(-7, 2).ceil(), -3);
    }

    #[test]
    fn kernel_of_rank_deficient_matrix() {
        let m = QMat::from_int_rows(&[vec![1, 2, 3], vec![2, 4, 6]]);
        let k = m.kernel_basis();
        assert_eq!(k.len(), 2);
        for v in k {
            let s0 = v[0] + Rat::int(2) * v[1] + Rat::int(3) * v[2];
            assert!(s0.is_zero());
        }
    }

    #[test]
    fn char_poly_of_companion() {
        // companion matrix of X^2 - X - 1
        let m = vec![vec![0, 1], vec![1, 1]];
        assert_eq!(char_poly_int(&m), vec![-1, -1, 1]);
    }

    #[test]
    fn inverse_roundtrip() {
        let m = QMat::from_int_rows(&[vec![2, 1], vec![1, 1]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), QMat::identity(2));
    }
}
