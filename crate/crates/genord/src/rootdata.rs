//! Root systems, Weyl groups as permutation groups on roots, diagram
//! twists, and the classification of parabolic subsystems.
//!
//! Roots are stored as integer coordinate vectors over the simple basis, so
//! every Weyl element is a permutation of the root index set and at the same
//! time an integer matrix on the root lattice. All eigenspace computations
//! happen downstream in exact rational arithmetic.

use crate::cyclo::{factor_generic_order, CycProduct, IntPoly};
use crate::error::{Error, Result};
use crate::frac::char_poly_int;
use crate::perm::{enumerate_group, set_orbit_transversal, Perm, StabChain};
use std::collections::HashMap;
use std::fmt;

/// The seven Cartan–Killing series.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Series {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Series {
    pub fn letter(self) -> char {
        match self {
            Series::A => 'A',
            Series::B => 'B',
            Series::C => 'C',
            Series::D => 'D',
            Series::E => 'E',
            Series::F => 'F',
            Series::G => 'G',
        }
    }
}

/// A finite-type label with a Frobenius twist order, e.g. `E7`, `2E6`, `3D4`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupLabel {
    pub series: Series,
    pub rank: usize,
    pub twist: u8,
}

impl GroupLabel {
    pub fn new(series: Series, rank: usize, twist: u8) -> Result<GroupLabel> {
        let label = GroupLabel {
            series,
            rank,
            twist,
        };
        let rank_ok = match series {
            Series::A => (1..=8).contains(&rank),
            Series::B | Series::C => (2..=8).contains(&rank),
            Series::D => (3..=8).contains(&rank),
            Series::E => (6..=8).contains(&rank),
            Series::F => rank == 4,
            Series::G => rank == 2,
        };
        let twist_ok = match twist {
            1 => true,
            2 => matches!(
                (series, rank),
                (Series::A, r) if r >= 2
            ) || series == Series::D
                || (series, rank) == (Series::E, 6),
            3 => (series, rank) == (Series::D, 4),
            _ => false,
        };
        if rank_ok && twist_ok {
            Ok(label)
        } else {
            Err(Error::InvalidLabel(label.to_string()))
        }
    }

    pub fn untwisted(series: Series, rank: usize) -> Result<GroupLabel> {
        GroupLabel::new(series, rank, 1)
    }

    /// Parse labels like `F4`, `2E6`, `3D4`, `A1`.
    pub fn parse(s: &str) -> Result<GroupLabel> {
        let bad = || Error::InvalidLabel(s.to_string());
        let mut chars = s.chars().peekable();
        let twist = match chars.peek() {
            Some('2') => {
                chars.next();
                2
            }
            Some('3') => {
                chars.next();
                3
            }
            _ => 1,
        };
        let series = match chars.next() {
            Some('A') => Series::A,
            Some('B') => Series::B,
            Some('C') => Series::C,
            Some('D') => Series::D,
            Some('E') => Series::E,
            Some('F') => Series::F,
            Some('G') => Series::G,
            _ => return Err(bad()),
        };
        let rank: usize = chars.collect::<String>().parse().map_err(|_| bad())?;
        GroupLabel::new(series, rank, twist)
    }

    /// Reflection degrees of the (untwisted) Weyl group.
    pub fn degrees(&self) -> Vec<u32> {
        let n = self.rank as u32;
        match self.series {
            Series::A => (2..=n + 1).collect(),
            Series::B | Series::C => (1..=n).map(|i| 2 * i).collect(),
            Series::D => {
                let mut d: Vec<u32> = (1..n).map(|i| 2 * i).collect();
                d.push(n);
                d.sort_unstable();
                d
            }
            Series::E => match self.rank {
                6 => vec![2, 5, 6, 8, 9, 12],
                7 => vec![2, 6, 8, 10, 12, 14, 18],
                _ => vec![2, 8, 12, 14, 18, 20, 24, 30],
            },
            Series::F => vec![2, 6, 8, 12],
            Series::G => vec![2, 6],
        }
    }

    /// |W| by the product-of-degrees formula.
    pub fn weyl_order(&self) -> u128 {
        self.degrees().iter().map(|&d| d as u128).product()
    }

    /// Number of roots of the underlying system.
    pub fn root_count(&self) -> usize {
        let n = self.rank;
        match self.series {
            Series::A => n * (n + 1),
            Series::B | Series::C => 2 * n * n,
            Series::D => 2 * n * (n - 1),
            Series::E => match n {
                6 => 72,
                7 => 126,
                _ => 240,
            },
            Series::F => 48,
            Series::G => 12,
        }
    }

    /// Generic order of the corresponding semisimple group over F_q,
    /// including the Frobenius twist.
    pub fn generic_order(&self) -> CycProduct {
        let n_pos = (self.root_count() / 2) as u32;
        let mut t = CycProduct::new(1, n_pos, []);
        match (self.series, self.twist) {
            (Series::A, 2) => {
                // prod_{i=2}^{n+1} (X^i - (-1)^i)
                for i in 2..=(self.rank as u32 + 1) {
                    let p = if i % 2 == 0 {
                        IntPoly::x_pow_minus_one(i as usize)
                    } else {
                        // X^i + 1
                        let mut c = vec![0i128; i as usize + 1];
                        c[0] = 1;
                        c[i as usize] = 1;
                        IntPoly::from_coeffs(c)
                    };
                    t = t.mul(&factor_generic_order(&p).expect("cyclotomic"));
                }
                t
            }
            (Series::D, 2) => {
                // (X^n + 1) * prod_{i<n} (X^{2i} - 1)
                let n = self.rank;
                let mut c = vec![0i128; n + 1];
                c[0] = 1;
                c[n] = 1;
                t = t.mul(&factor_generic_order(&IntPoly::from_coeffs(c)).expect("cyclotomic"));
                for i in 1..n {
                    t = t.mul(
                        &factor_generic_order(&IntPoly::x_pow_minus_one(2 * i))
                            .expect("cyclotomic"),
                    );
                }
                t
            }
            (Series::D, 3) => {
                // 3D4: q^12 (q^8 + q^4 + 1)(q^6 - 1)(q^2 - 1)
                t = t.mul(&CycProduct::new(1, 0, [(3, 1), (6, 1), (12, 1)]));
                t = t.mul(
                    &factor_generic_order(&IntPoly::x_pow_minus_one(6)).expect("cyclotomic"),
                );
                t.mul(&factor_generic_order(&IntPoly::x_pow_minus_one(2)).expect("cyclotomic"))
            }
            (Series::E, 2) => {
                // 2E6: degrees 2,5,6,8,9,12 with signs -1 on 5, 9 (odd degrees)
                for &d in &[2u32, 6, 8, 12] {
                    t = t.mul(
                        &factor_generic_order(&IntPoly::x_pow_minus_one(d as usize))
                            .expect("cyclotomic"),
                    );
                }
                for &d in &[5u32, 9] {
                    let mut c = vec![0i128; d as usize + 1];
                    c[0] = 1;
                    c[d as usize] = 1;
                    t = t.mul(&factor_generic_order(&IntPoly::from_coeffs(c)).expect("cyclotomic"));
                }
                t
            }
            _ => {
                for d in self.degrees() {
                    t = t.mul(
                        &factor_generic_order(&IntPoly::x_pow_minus_one(d as usize))
                            .expect("cyclotomic"),
                    );
                }
                t
            }
        }
    }
}

impl fmt::Display for GroupLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.twist > 1 {
            write!(f, "{}", self.twist)?;
        }
        write!(f, "{}{}", self.series.letter(), self.rank)
    }
}

impl fmt::Debug for GroupLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Cartan matrix in Bourbaki numbering; entry `[i][j]` is `<alpha_j, alpha_i^vee>`.
pub fn cartan_matrix(series: Series, rank: usize) -> Vec<Vec<i64>> {
    let n = rank;
    let mut c = vec![vec![0i64; n]; n];
    for (i, row) in c.iter_mut().enumerate() {
        row[i] = 2;
    }
    let link = |c: &mut Vec<Vec<i64>>, i: usize, j: usize| {
        c[i][j] = -1;
        c[j][i] = -1;
    };
    match series {
        Series::A => {
            for i in 0..n.saturating_sub(1) {
                link(&mut c, i, i + 1);
            }
        }
        Series::B => {
            for i in 0..n - 1 {
                link(&mut c, i, i + 1);
            }
            // alpha_n short: <alpha_{n-1}, alpha_n^vee> = -2
            c[n - 1][n - 2] = -2;
        }
        Series::C => {
            for i in 0..n - 1 {
                link(&mut c, i, i + 1);
            }
            c[n - 2][n - 1] = -2;
        }
        Series::D => {
            for i in 0..n - 2 {
                link(&mut c, i, i + 1);
            }
            link(&mut c, n - 3, n - 1);
        }
        Series::E => {
            // Bourbaki: chain 1-3-4-5-...-n, node 2 attached to 4.
            link(&mut c, 0, 2);
            for i in 2..n - 1 {
                link(&mut c, i, i + 1);
            }
            link(&mut c, 1, 3);
        }
        Series::F => {
            link(&mut c, 0, 1);
            link(&mut c, 1, 2);
            link(&mut c, 2, 3);
            c[2][1] = -2; // alpha_3, alpha_4 short
        }
        Series::G => {
            c[0][1] = -3; // alpha_1 short
            c[1][0] = -1;
        }
    }
    c
}

/// Minimal positive symmetrizer: `d[i] * c[i][j] == d[j] * c[j][i]`.
fn symmetrizer(c: &[Vec<i64>]) -> Vec<i64> {
    use crate::frac::Rat;
    let n = c.len();
    let mut d = vec![Rat::ZERO; n];
    for start in 0..n {
        if !d[start].is_zero() {
            continue;
        }
        d[start] = Rat::ONE;
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            for j in 0..n {
                if i != j && c[i][j] != 0 && d[j].is_zero() {
                    d[j] = d[i] * Rat::new(c[i][j] as i128, c[j][i] as i128);
                    stack.push(j);
                }
            }
        }
    }
    // clear denominators, then reduce by the gcd
    let lcm = d.iter().fold(1i128, |a, r| {
        let b = r.den();
        a / {
            let (mut x, mut y) = (a, b);
            while y != 0 {
                let t = x % y;
                x = y;
                y = t;
            }
            x
        } * b
    });
    let mut out: Vec<i64> = d.iter().map(|r| (r.num() * lcm / r.den()) as i64).collect();
    let g = out.iter().fold(0i64, |a, &b| {
        let (mut a, mut b) = (a.abs(), b.abs());
        while b != 0 {
            let t = a % b;
            a = b;
            b = t;
        }
        a
    });
    out.iter_mut().for_each(|x| *x /= g);
    out
}

/// A full root system with its simple reflections as root permutations.
pub struct RootSystem {
    pub series: Series,
    pub rank: usize,
    pub cartan: Vec<Vec<i64>>,
    /// symmetrizer: (alpha_i, alpha_i) = 2 d_i
    pub sym: Vec<i64>,
    /// all roots, coordinates over the simple basis, sorted by (height, coords)
    pub roots: Vec<Vec<i64>>,
    index: HashMap<Vec<i64>, u32>,
    /// negation as a root permutation
    pub neg: Perm,
    /// simple reflections as root permutations
    pub srefs: Vec<Perm>,
}

impl RootSystem {
    pub fn build(series: Series, rank: usize) -> RootSystem {
        let cartan = cartan_matrix(series, rank);
        let sym = symmetrizer(&cartan);
        // closure of the simple roots under simple reflections
        let mut seen: HashMap<Vec<i64>, ()> = HashMap::new();
        let mut queue: Vec<Vec<i64>> = Vec::new();
        for i in 0..rank {
            let mut v = vec![0i64; rank];
            v[i] = 1;
            seen.insert(v.clone(), ());
            queue.push(v);
        }
        while let Some(v) = queue.pop() {
            for i in 0..rank {
                let img = reflect(&cartan, &v, i);
                if !seen.contains_key(&img) {
                    seen.insert(img.clone(), ());
                    queue.push(img);
                }
            }
        }
        let mut roots: Vec<Vec<i64>> = seen.into_keys().collect();
        roots.sort_by_key(|r| (r.iter().sum::<i64>(), r.clone()));
        let index: HashMap<Vec<i64>, u32> = roots
            .iter()
            .enumerate()
            .map(|(i, r)| (r.clone(), i as u32))
            .collect();
        let neg = Perm(
            roots
                .iter()
                .map(|r| index[&r.iter().map(|&x| -x).collect::<Vec<_>>()])
                .collect(),
        );
        let srefs = (0..rank)
            .map(|i| {
                Perm(
                    roots
                        .iter()
                        .map(|r| index[&reflect(&cartan, r, i)])
                        .collect(),
                )
            })
            .collect();
        RootSystem {
            series,
            rank,
            cartan,
            sym,
            roots,
            index,
            neg,
            srefs,
        }
    }

    pub fn for_label(label: GroupLabel) -> RootSystem {
        RootSystem::build(label.series, label.rank)
    }

    pub fn n_roots(&self) -> usize {
        self.roots.len()
    }

    pub fn root_index(&self, coords: &[i64]) -> Option<u32> {
        self.index.get(coords).copied()
    }

    pub fn simple_index(&self, i: usize) -> u32 {
        let mut v = vec![0i64; self.rank];
        v[i] = 1;
        self.index[&v]
    }

    pub fn is_positive(&self, root: u32) -> bool {
        self.roots[root as usize].iter().sum::<i64>() > 0
    }

    /// Inner product of two coordinate vectors under the W-invariant form
    /// with `(alpha_i, alpha_i) = 2 d_i`.
    pub fn form(&self, a: &[i64], b: &[i64]) -> i64 {
        let mut s = 0i64;
        for i in 0..self.rank {
            if a[i] == 0 {
                continue;
            }
            for j in 0..self.rank {
                if b[j] == 0 {
                    continue;
                }
                // (alpha_i, alpha_j) = d_i * cartan[i][j]
                s += a[i] * b[j] * self.sym[i] * self.cartan[i][j];
            }
        }
        s
    }

    /// Integer matrix of a root permutation on the simple basis
    /// (columns are images of the simple roots).
    pub fn matrix_of(&self, w: &Perm) -> Vec<Vec<i128>> {
        let n = self.rank;
        let mut m = vec![vec![0i128; n]; n];
        for j in 0..n {
            let img = &self.roots[w.apply(self.simple_index(j)) as usize];
            for i in 0..n {
                m[i][j] = img[i] as i128;
            }
        }
        m
    }

    /// The root permutation induced by an integer matrix on the simple basis,
    /// if the matrix permutes the roots.
    pub fn perm_of_matrix(&self, m: &[Vec<i128>]) -> Option<Perm> {
        let n = self.rank;
        let mut out = Vec::with_capacity(self.roots.len());
        for r in &self.roots {
            let mut img = vec![0i64; n];
            for i in 0..n {
                let mut s = 0i128;
                for j in 0..n {
                    s += m[i][j] * r[j] as i128;
                }
                img[i] = i64::try_from(s).ok()?;
            }
            out.push(self.root_index(&img)?);
        }
        Some(Perm(out))
    }

    /// Diagram automorphism of the given order as a root permutation.
    /// Order 1 is the identity; order 2/3 follow the standard symmetries.
    pub fn diagram_twist(&self, order: u8) -> Result<Perm> {
        let n = self.rank;
        let simple_perm: Vec<usize> = match (self.series, order, n) {
            (_, 1, _) => (0..n).collect(),
            (Series::A, 2, _) if n >= 2 => (0..n).rev().collect(),
            (Series::D, 2, _) => {
                let mut p: Vec<usize> = (0..n).collect();
                p.swap(n - 2, n - 1);
                p
            }
            (Series::D, 3, 4) => vec![2, 1, 3, 0], // 1 -> 3 -> 4 -> 1 around node 2
            (Series::E, 2, 6) => vec![5, 1, 4, 3, 2, 0],
            _ => {
                return Err(Error::InvalidLabel(format!(
                    "{}{} has no diagram automorphism of order {}",
                    self.series.letter(),
                    n,
                    order
                )))
            }
        };
        // check it preserves the Cartan matrix
        for i in 0..n {
            for j in 0..n {
                if self.cartan[simple_perm[i]][simple_perm[j]] != self.cartan[i][j] {
                    return Err(Error::InvalidLabel(format!(
                        "automorphism candidate does not fix the Cartan matrix of {}{}",
                        self.series.letter(),
                        n
                    )));
                }
            }
        }
        let perm = Perm(
            self.roots
                .iter()
                .map(|r| {
                    let mut img = vec![0i64; n];
                    for (i, &c) in r.iter().enumerate() {
                        img[simple_perm[i]] += c;
                    }
                    self.index[&img]
                })
                .collect(),
        );
        Ok(perm)
    }

    /// Root indices of the standard parabolic subsystem spanned by the
    /// simple roots in `subset`.
    pub fn standard_subsystem(&self, subset: &[usize]) -> Vec<u32> {
        let mut mask = vec![false; self.rank];
        for &i in subset {
            mask[i] = true;
        }
        self.roots
            .iter()
            .enumerate()
            .filter(|(_, r)| r.iter().enumerate().all(|(i, &c)| c == 0 || mask[i]))
            .map(|(i, _)| i as u32)
            .collect()
    }

    /// Weyl group order computed from the permutation action (orbit/stabilizer
    /// chain), independent of the degree product formula.
    pub fn weyl_order_by_orbits(&self) -> u128 {
        StabChain::new(&self.srefs).order()
    }

    /// Every element of W, breadth first; refuses above `limit`.
    pub fn enumerate_weyl(&self, limit: usize) -> Result<Vec<Perm>> {
        enumerate_group(&self.srefs, limit).ok_or_else(|| {
            Error::ScaleLimit(format!(
                "Weyl group of {}{} exceeds enumeration limit {}",
                self.series.letter(),
                self.rank,
                limit
            ))
        })
    }
}

fn reflect(cartan: &[Vec<i64>], v: &[i64], i: usize) -> Vec<i64> {
    // s_i(v) = v - <v, alpha_i^vee> alpha_i, <alpha_j, alpha_i^vee> = cartan[i][j]
    let pairing: i64 = (0..v.len()).map(|j| cartan[i][j] * v[j]).sum();
    let mut out = v.to_vec();
    out[i] -= pairing;
    out
}

/// Characteristic polynomial of `w . phi` on the rational span of the root
/// lattice, as a cyclotomic product. Finite-order lattice maps always factor
/// this way; anything else is a hard error.
pub fn char_poly_twisted(rs: &RootSystem, w: &Perm, phi: &Perm) -> CycProduct {
    let m = rs.matrix_of(&w.compose(phi));
    let coeffs = char_poly_int(&m);
    factor_generic_order(&IntPoly::from_coeffs(coeffs))
        .expect("characteristic polynomial of a finite-order lattice map is a cyclotomic product")
}

/// One conjugacy class of parabolic subsystems.
#[derive(Clone, Debug)]
pub struct ParabolicClass {
    /// representative subset of simple-root positions
    pub rep: Vec<usize>,
    /// root indices of the representative subsystem
    pub roots: Vec<u32>,
    /// number of distinct subsystems in the W-orbit
    pub orbit_size: u64,
}

/// Conjugacy classes of parabolic subsystems `Phi_I`, `I` a subset of the
/// simple roots; dedup is by the W-orbit of the subsystem as a root set.
pub fn parabolic_classes(rs: &RootSystem) -> Vec<ParabolicClass> {
    let mut classes: Vec<ParabolicClass> = Vec::new();
    let mut seen: HashMap<Vec<u32>, ()> = HashMap::new();
    let subsets = 1usize << rs.rank;
    for bits in 0..subsets {
        let subset: Vec<usize> = (0..rs.rank).filter(|i| bits >> i & 1 == 1).collect();
        let roots = rs.standard_subsystem(&subset);
        if seen.contains_key(&roots) {
            continue;
        }
        let orbit = set_orbit_transversal(&rs.srefs, &roots);
        for s in orbit.keys() {
            seen.insert(s.clone(), ());
        }
        classes.push(ParabolicClass {
            rep: subset,
            roots,
            orbit_size: orbit.len() as u64,
        });
    }
    classes.sort_by_key(|c| (c.rep.len(), c.rep.clone()));
    classes
}

/// Order of `Stab_{W phi}(Phi_I) / W_I`.
///
/// With a nontrivial twist the stabilizer of the coset has the same size as
/// the plain stabilizer when `phi(Phi_I)` is W-conjugate to `Phi_I`, and is
/// empty otherwise (reported as zero).
pub fn normalizer_quotient_order(rs: &RootSystem, subset: &[usize], phi: &Perm) -> u128 {
    let roots = rs.standard_subsystem(subset);
    let orbit = set_orbit_transversal(&rs.srefs, &roots);
    if !phi.is_identity() {
        let img = phi.image_set(&roots);
        if !orbit.contains_key(&img) {
            return 0;
        }
    }
    let w_order = GroupLabel {
        series: rs.series,
        rank: rs.rank,
        twist: 1,
    }
    .weyl_order();
    let stab = w_order / orbit.len() as u128;
    let sub_order = subsystem_weyl_order(rs, &roots);
    stab / sub_order
}

/// Weyl group order of a closed subsystem, via its component types.
pub fn subsystem_weyl_order(rs: &RootSystem, roots: &[u32]) -> u128 {
    components_of(rs, roots)
        .iter()
        .map(|c| {
            GroupLabel::untwisted(c.series, c.rank)
                .expect("classified component")
                .weyl_order()
        })
        .product()
}

/// An indecomposable component of a closed subsystem.
#[derive(Clone, Debug)]
pub struct SubComponent {
    pub series: Series,
    pub rank: usize,
    /// simple roots of the component, as ambient root indices
    pub simples: Vec<u32>,
    /// true when every root of the component is short in the ambient system
    pub short: bool,
}

/// Simple system of a closed subsystem: the positive roots (ambient
/// positivity) that are not sums of two positive subsystem roots.
pub fn subsystem_simples(rs: &RootSystem, roots: &[u32]) -> Vec<u32> {
    let pos: Vec<u32> = roots
        .iter()
        .copied()
        .filter(|&r| rs.is_positive(r))
        .collect();
    let set: std::collections::HashSet<&[i64]> = pos
        .iter()
        .map(|&r| rs.roots[r as usize].as_slice())
        .collect();
    pos.iter()
        .copied()
        .filter(|&b| {
            let bc = &rs.roots[b as usize];
            !pos.iter().any(|&g| {
                let gc = &rs.roots[g as usize];
                let diff: Vec<i64> = bc.iter().zip(gc).map(|(x, y)| x - y).collect();
                g != b && set.contains(diff.as_slice())
            })
        })
        .collect()
}

/// Split a closed subsystem into typed components.
pub fn components_of(rs: &RootSystem, roots: &[u32]) -> Vec<SubComponent> {
    let simples = subsystem_simples(rs, roots);
    let k = simples.len();
    // adjacency via the invariant form
    let mut adj = vec![vec![false; k]; k];
    for i in 0..k {
        for j in 0..i {
            let f = rs.form(
                &rs.roots[simples[i] as usize],
                &rs.roots[simples[j] as usize],
            );
            adj[i][j] = f != 0;
            adj[j][i] = f != 0;
        }
    }
    let mut comp_id = vec![usize::MAX; k];
    let mut n_comp = 0;
    for i in 0..k {
        if comp_id[i] != usize::MAX {
            continue;
        }
        let mut stack = vec![i];
        comp_id[i] = n_comp;
        while let Some(x) = stack.pop() {
            for y in 0..k {
                if adj[x][y] && comp_id[y] == usize::MAX {
                    comp_id[y] = n_comp;
                    stack.push(y);
                }
            }
        }
        n_comp += 1;
    }
    let min_norm = (0..rs.rank).map(|i| 2 * rs.sym[i]).min().unwrap_or(2);
    let max_norm = (0..rs.rank).map(|i| 2 * rs.sym[i]).max().unwrap_or(2);
    let mut out = Vec::new();
    for c in 0..n_comp {
        let mine: Vec<u32> = (0..k)
            .filter(|&i| comp_id[i] == c)
            .map(|i| simples[i])
            .collect();
        let (series, rank, ordered) = classify_component(rs, &mine);
        // the tilde marker only means something when the ambient system has
        // two root lengths
        let short = max_norm > min_norm
            && mine
                .iter()
                .all(|&r| rs.form(&rs.roots[r as usize], &rs.roots[r as usize]) == min_norm);
        out.push(SubComponent {
            series,
            rank,
            simples: ordered,
            short,
        });
    }
    out.sort_by_key(|c| (std::cmp::Reverse(c.rank), c.series, c.short));
    out
}

/// Identify the type of an indecomposable simple system inside the ambient
/// root system, returning the simples reordered to Bourbaki shape.
fn classify_component(rs: &RootSystem, simples: &[u32]) -> (Series, usize, Vec<u32>) {
    let n = simples.len();
    if n == 1 {
        return (Series::A, 1, simples.to_vec());
    }
    let norm = |r: u32| rs.form(&rs.roots[r as usize], &rs.roots[r as usize]);
    let pair = |a: u32, b: u32| rs.form(&rs.roots[a as usize], &rs.roots[b as usize]);
    // bond weight between two simples: 4 (a,b)^2 / ((a,a)(b,b)) in {0,1,2,3}
    let bond = |a: u32, b: u32| {
        let p = pair(a, b);
        (4 * p * p) / (norm(a) * norm(b))
    };
    let deg = |i: usize| {
        (0..n)
            .filter(|&j| j != i && bond(simples[i], simples[j]) > 0)
            .count()
    };
    let max_bond = (0..n)
        .flat_map(|i| (0..i).map(move |j| (i, j)))
        .map(|(i, j)| bond(simples[i], simples[j]))
        .max()
        .unwrap();
    let branch = (0..n).find(|&i| deg(i) == 3);
    if let Some(b) = branch {
        // D or E; order as a chain with the branch node in place
        let mut legs: Vec<Vec<usize>> = Vec::new();
        for s in (0..n).filter(|&i| i != b && bond(simples[i], simples[b]) > 0) {
            let mut leg = vec![s];
            let mut prev = b;
            let mut cur = s;
            while let Some(nx) = (0..n)
                .find(|&j| j != prev && j != cur && bond(simples[j], simples[cur]) > 0)
            {
                leg.push(nx);
                prev = cur;
                cur = nx;
            }
            legs.push(leg);
        }
        legs.sort_by_key(Vec::len);
        let (l1, l2, l3) = (legs[0].len(), legs[1].len(), legs[2].len());
        assert_eq!(l1, 1, "unclassifiable branch system");
        if l2 == 1 {
            // D_n: chain ... -> branch -> two single legs
            let mut ordered: Vec<usize> = legs[2].iter().rev().copied().collect();
            ordered.push(b);
            ordered.push(legs[1][0]);
            ordered.push(legs[0][0]);
            let ordered = ordered.into_iter().map(|i| simples[i]).collect();
            return (Series::D, n, ordered);
        }
        // E_n in Bourbaki numbering: 1 - 3 - 4 - 5 - ... chain with 2 off
        // node 4; node 4 is the branch, the 2-leg walks out 3 then 1.
        assert!(l2 == 2 && l3 >= 2, "unclassifiable branch system");
        let _ = l3;
        let mut bourbaki = Vec::with_capacity(n);
        bourbaki.push(legs[1][1]);
        bourbaki.push(legs[0][0]);
        bourbaki.push(legs[1][0]);
        bourbaki.push(b);
        bourbaki.extend(legs[2].iter());
        let ordered: Vec<u32> = bourbaki.into_iter().map(|i| simples[i]).collect();
        return (Series::E, n, ordered);
    }
    // chain types: A, B, C, F4, G2
    let ends: Vec<usize> = (0..n).filter(|&i| deg(i) == 1).collect();
    assert_eq!(ends.len(), 2, "chain expected");
    let order_from = |start: usize| {
        let mut chain = vec![start];
        let mut prev = usize::MAX;
        let mut cur = start;
        while chain.len() < n {
            let nx = (0..n)
                .find(|&j| j != prev && j != cur && bond(simples[j], simples[cur]) > 0)
                .expect("chain step");
            chain.push(nx);
            prev = cur;
            cur = nx;
        }
        chain
    };
    if max_bond == 1 {
        let chain = order_from(ends[0].min(ends[1]));
        return (Series::A, n, chain.into_iter().map(|i| simples[i]).collect());
    }
    if max_bond == 3 {
        assert_eq!(n, 2);
        // G2 Bourbaki: alpha_1 short
        let mut pairr = simples.to_vec();
        if norm(pairr[0]) > norm(pairr[1]) {
            pairr.swap(0, 1);
        }
        return (Series::G, 2, pairr);
    }
    // one double bond: B (short chain end at the bond), C (long end), F4
    let chain = order_from(ends[0]);
    let c: Vec<u32> = chain.iter().map(|&i| simples[i]).collect();
    let dbl = (0..n - 1)
        .find(|&i| bond(c[i], c[i + 1]) == 2)
        .expect("double bond");
    if n == 2 {
        // B2 = C2; report B with the long root first
        let mut pairr = c;
        if norm(pairr[0]) < norm(pairr[1]) {
            pairr.swap(0, 1);
        }
        return (Series::B, 2, pairr);
    }
    if n == 4 && dbl == 1 {
        // F4 in Bourbaki order: long, long, short, short
        if norm(c[0]) > norm(c[3]) {
            return (Series::F, 4, c);
        }
        return (Series::F, 4, c.into_iter().rev().collect());
    }
    // put the double bond at the far end of the chain
    let c: Vec<u32> = if dbl == 0 {
        c.into_iter().rev().collect()
    } else {
        assert_eq!(dbl, n - 2, "double bond must sit at a chain end");
        c
    };
    if norm(c[n - 1]) < norm(c[n - 2]) {
        (Series::B, n, c)
    } else {
        (Series::C, n, c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn label_parsing() {
        assert_eq!(GroupLabel::parse("F4").unwrap().to_string(), "F4");
        assert_eq!(GroupLabel::parse("2E6").unwrap().twist, 2);
        assert_eq!(GroupLabel::parse("3D4").unwrap().twist, 3);
        assert!(GroupLabel::parse("3D5").is_err());
        assert!(GroupLabel::parse("2F4").is_err());
        assert!(GroupLabel::parse("E9").is_err());
    }

    #[test]
    fn root_counts() {
        for (s, txt, n) in [
            ("G2", "G2", 12),
            ("F4", "F4", 48),
            ("E6", "E6", 72),
            ("E7", "E7", 126),
            ("E8", "E8", 240),
            ("A2", "A2", 6),
            ("B4", "B4", 32),
            ("D4", "D4", 24),
        ] {
            let l = GroupLabel::parse(s).unwrap();
            let rs = RootSystem::for_label(l);
            assert_eq!(rs.n_roots(), n, "{txt}");
            assert_eq!(rs.n_roots(), l.root_count());
        }
    }

    #[test]
    fn weyl_orders_agree_up_to_rank_6() {
        for s in ["A2", "A5", "B2", "B4", "C3", "D4", "D5", "G2", "F4", "E6"] {
            let l = GroupLabel::parse(s).unwrap();
            let rs = RootSystem::for_label(l);
            assert_eq!(rs.weyl_order_by_orbits(), l.weyl_order(), "{s}");
        }
        assert_eq!(GroupLabel::parse("F4").unwrap().weyl_order(), 1152);
        assert_eq!(GroupLabel::parse("A2").unwrap().weyl_order(), 6);
        // derived: product of degrees 2,6,8,10,12,14,18
        assert_eq!(GroupLabel::parse("E7").unwrap().weyl_order(), 2_903_040);
    }

    #[test]
    fn weyl_generators_preserve_the_form() {
        let rs = RootSystem::for_label(GroupLabel::parse("F4").unwrap());
        let mut w = Perm::identity(rs.n_roots());
        // a pseudo-random word in the generators
        for k in 0..100u64 {
            let i = (k * 2654435761 % rs.rank as u64) as usize;
            w = rs.srefs[i].compose(&w);
            let m = rs.matrix_of(&w);
            // check the form is preserved on a sample of root pairs
            for a in (0..rs.n_roots()).step_by(7) {
                for b in (0..rs.n_roots()).step_by(11) {
                    let wa = &rs.roots[w.apply(a as u32) as usize];
                    let wb = &rs.roots[w.apply(b as u32) as usize];
                    assert_eq!(
                        rs.form(wa, wb),
                        rs.form(&rs.roots[a], &rs.roots[b]),
                        "form not preserved"
                    );
                }
            }
            let _ = m;
        }
    }

    #[test]
    fn char_polys() {
        let rs = RootSystem::for_label(GroupLabel::parse("F4").unwrap());
        let id = Perm::identity(rs.n_roots());
        assert_eq!(
            char_poly_twisted(&rs, &id, &id),
            CycProduct::new(1, 0, [(1, 4)])
        );
        // longest element of F4 is -1
        assert_eq!(
            char_poly_twisted(&rs, &rs.neg, &id),
            CycProduct::new(1, 0, [(2, 4)])
        );
        // Coxeter element of E8 has characteristic polynomial Phi_30
        let rs8 = RootSystem::for_label(GroupLabel::parse("E8").unwrap());
        let id8 = Perm::identity(rs8.n_roots());
        let mut cox = id8.clone();
        for s in &rs8.srefs {
            cox = s.compose(&cox);
        }
        assert_eq!(char_poly_twisted(&rs8, &cox, &id8), CycProduct::phi(30));
    }

    #[test]
    fn char_poly_invariant_under_conjugacy() {
        let rs = RootSystem::for_label(GroupLabel::parse("B4").unwrap());
        let id = Perm::identity(rs.n_roots());
        let mut cox = id.clone();
        for s in &rs.srefs {
            cox = s.compose(&cox);
        }
        let cp = char_poly_twisted(&rs, &cox, &id);
        assert_eq!(cp, CycProduct::phi(8)); // B4 Coxeter element
        let mut g = rs.srefs[1].compose(&rs.srefs[3]);
        for _ in 0..5 {
            g = rs.srefs[2].compose(&g);
            let conj = g.compose(&cox.compose(&g.inverse()));
            assert_eq!(char_poly_twisted(&rs, &conj, &id), cp);
        }
    }

    #[test]
    fn twisted_char_polys() {
        // 3D4: the triality twist alone has characteristic polynomial
        // Phi_1 Phi_3 on the D4 lattice (eigenvalues 1, 1, zeta_3, zeta_3^2
        // on the quadruple... the twist fixes node 2 and rotates 1,3,4)
        let rs = RootSystem::for_label(GroupLabel::parse("D4").unwrap());
        let tri = rs.diagram_twist(3).unwrap();
        let id = Perm::identity(rs.n_roots());
        assert_eq!(
            char_poly_twisted(&rs, &id, &tri),
            CycProduct::new(1, 0, [(1, 2), (3, 1)])
        );
        assert_eq!(tri.order(), 3);
        let rs6 = RootSystem::for_label(GroupLabel::parse("E6").unwrap());
        let g = rs6.diagram_twist(2).unwrap();
        assert_eq!(g.order(), 2);
        assert_eq!(
            char_poly_twisted(&rs6, &Perm::identity(rs6.n_roots()), &g),
            CycProduct::new(1, 0, [(1, 4), (2, 2)])
        );
    }

    #[test]
    fn parabolic_class_counts_small() {
        let a2 = RootSystem::for_label(GroupLabel::parse("A2").unwrap());
        // the two A1 subsets fuse: empty, A1, A2
        assert_eq!(parabolic_classes(&a2).len(), 3);
        let g2 = RootSystem::for_label(GroupLabel::parse("G2").unwrap());
        // long A1 and short A1 are not conjugate
        assert_eq!(parabolic_classes(&g2).len(), 4);
    }

    /// Independent brute force: enumerate all of W, test subsystem conjugacy
    /// directly, and compare class counts and orbit sizes.
    #[test]
    fn parabolic_classes_cross_checked_exhaustively() {
        for name in ["A2", "A3", "B2", "B3", "C3", "G2", "D4", "B4", "F4"] {
            let rs = RootSystem::for_label(GroupLabel::parse(name).unwrap());
            let w_all = rs.enumerate_weyl(1_200).unwrap();
            let mut reps: Vec<Vec<u32>> = Vec::new();
            let mut orbit_counts: Vec<u64> = Vec::new();
            for bits in 0..(1usize << rs.rank) {
                let subset: Vec<usize> =
                    (0..rs.rank).filter(|i| bits >> i & 1 == 1).collect();
                let sys = rs.standard_subsystem(&subset);
                let canon: std::collections::BTreeSet<Vec<u32>> = w_all
                    .iter()
                    .map(|w| w.image_set(&sys))
                    .collect();
                let min = canon.iter().next().unwrap().clone();
                if let Some(pos) = reps.iter().position(|r| *r == min) {
                    let _ = pos;
                } else {
                    reps.push(min);
                    orbit_counts.push(canon.len() as u64);
                }
            }
            let classes = parabolic_classes(&rs);
            assert_eq!(classes.len(), reps.len(), "{name}");
            let mut a: Vec<u64> = classes.iter().map(|c| c.orbit_size).collect();
            a.sort_unstable();
            orbit_counts.sort_unstable();
            assert_eq!(a, orbit_counts, "{name}");
        }
    }

    #[test]
    fn normalizer_quotients() {
        let a2 = RootSystem::for_label(GroupLabel::parse("A2").unwrap());
        let id = Perm::identity(a2.n_roots());
        // I = Delta: quotient is trivial
        assert_eq!(normalizer_quotient_order(&a2, &[0, 1], &id), 1);
        // I = empty in A2: N_W(T)/T = W of order 6
        assert_eq!(normalizer_quotient_order(&a2, &[], &id), 6);
    }

    #[test]
    fn subsystem_typing_in_f4() {
        let rs = RootSystem::for_label(GroupLabel::parse("F4").unwrap());
        // the full system types as F4
        let all: Vec<u32> = (0..rs.n_roots() as u32).collect();
        let comps = components_of(&rs, &all);
        assert_eq!(comps.len(), 1);
        assert_eq!((comps[0].series, comps[0].rank), (Series::F, 4));
        // long simple pair {0,1} spans an A2 of long roots
        let sys = rs.standard_subsystem(&[0, 1]);
        let comps = components_of(&rs, &sys);
        assert_eq!((comps[0].series, comps[0].rank), (Series::A, 2));
        assert!(!comps[0].short);
        // short pair {2,3} spans a short A2
        let sys = rs.standard_subsystem(&[2, 3]);
        let comps = components_of(&rs, &sys);
        assert_eq!((comps[0].series, comps[0].rank), (Series::A, 2));
        assert!(comps[0].short);
        // {1,2} has the double bond: B2
        let sys = rs.standard_subsystem(&[1, 2]);
        let comps = components_of(&rs, &sys);
        assert_eq!((comps[0].series, comps[0].rank), (Series::B, 2));
    }

    #[test]
    fn generic_orders_match_known_factorizations() {
        // F4: q^24 P1^4 P2^4 P3^2 P4^2 P6^2 P8 P12
        let f4 = GroupLabel::parse("F4").unwrap().generic_order();
        assert_eq!(
            f4,
            CycProduct::new(
                1,
                24,
                [(1, 4), (2, 4), (3, 2), (4, 2), (6, 2), (8, 1), (12, 1)]
            )
        );
        let d4t = GroupLabel::parse("3D4").unwrap().generic_order();
        assert_eq!(
            d4t,
            CycProduct::new(1, 12, [(1, 2), (2, 2), (3, 2), (6, 2), (12, 1)])
        );
        let e6t = GroupLabel::parse("2E6").unwrap().generic_order();
        assert_eq!(
            e6t,
            CycProduct::new(
                1,
                36,
                [(1, 4), (2, 6), (3, 2), (4, 2), (6, 3), (8, 1), (10, 1), (12, 1), (18, 1)]
            )
        );
    }
}
