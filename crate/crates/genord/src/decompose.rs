//! Reconstruction of non-uniform Lusztig inductions: given the uniform
//! projection of a virtual character and a basis of the orthogonal
//! complement of the uniform space, find all integral combinations at the
//! prescribed norm. The search is a depth-first walk over an integer
//! lattice with exact rational pruning; instances here are tiny and
//! certified exhaustiveness is the point.

use crate::error::{Error, Result};
use crate::frac::{QMat, Rat};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// Finitely supported rational combination of character labels. Labels are
/// opaque strings (with any orbit superscript included); the inner product
/// treats them as an orthonormal family.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct CharCombination {
    coeffs: BTreeMap<String, Rat>,
}

impl CharCombination {
    pub fn new() -> CharCombination {
        CharCombination::default()
    }

    pub fn from_pairs<I: IntoIterator<Item = (String, Rat)>>(pairs: I) -> CharCombination {
        let mut c = CharCombination::new();
        for (l, v) in pairs {
            c.add(&l, v);
        }
        c
    }

    pub fn add(&mut self, label: &str, v: Rat) {
        let e = self.coeffs.entry(label.to_string()).or_insert(Rat::ZERO);
        *e += v;
        if e.is_zero() {
            self.coeffs.remove(label);
        }
    }

    pub fn coeff(&self, label: &str) -> Rat {
        self.coeffs.get(label).copied().unwrap_or(Rat::ZERO)
    }

    pub fn support(&self) -> impl Iterator<Item = &str> {
        self.coeffs.keys().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn norm_sq(&self) -> Rat {
        self.coeffs
            .values()
            .fold(Rat::ZERO, |a, &v| a + v * v)
    }

    pub fn inner(&self, rhs: &CharCombination) -> Rat {
        self.coeffs
            .iter()
            .fold(Rat::ZERO, |a, (l, &v)| a + v * rhs.coeff(l))
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.values().all(Rat::is_integer)
    }

    pub fn scaled(&self, s: Rat) -> CharCombination {
        CharCombination {
            coeffs: self
                .coeffs
                .iter()
                .map(|(l, &v)| (l.clone(), v * s))
                .collect(),
        }
    }

    pub fn plus(&self, rhs: &CharCombination) -> CharCombination {
        let mut out = self.clone();
        for (l, &v) in &rhs.coeffs {
            out.add(l, v);
        }
        out
    }

    /// Table-style signed sum, constituents ordered by the given vocabulary:
    /// `-(03,2)+(012,23)+(04,1)+(01234,12)`.
    pub fn render_ordered(&self, vocab: &[String]) -> String {
        let mut s = String::new();
        let mut rest: BTreeMap<&String, Rat> = self.coeffs.iter().map(|(l, &v)| (l, v)).collect();
        let emit = |label: &str, v: Rat, s: &mut String| {
            if v.is_zero() {
                return;
            }
            if v > Rat::ZERO {
                if !s.is_empty() {
                    s.push('+');
                }
            } else {
                s.push('-');
            }
            let a = v.abs();
            if a != Rat::ONE {
                s.push_str(&a.to_string());
            }
            s.push_str(label);
        };
        for l in vocab {
            if let Some(v) = rest.remove(l) {
                emit(l, v, &mut s);
            }
        }
        for (l, v) in rest {
            emit(l, v, &mut s);
        }
        s
    }
}

impl fmt::Display for CharCombination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render_ordered(&[]))
    }
}

/// A reconstruction instance.
#[derive(Clone, Debug)]
pub struct DecompositionProblem {
    /// label vocabulary in presentation order
    pub vocab: Vec<String>,
    pub pi_uniform: CharCombination,
    pub ortho_basis: Vec<CharCombination>,
    pub target_norm_sq: i128,
    pub forbidden: BTreeSet<String>,
}

impl DecompositionProblem {
    fn as_vectors(&self) -> (Vec<Rat>, Vec<Vec<Rat>>) {
        let idx: BTreeMap<&str, usize> = self
            .vocab
            .iter()
            .enumerate()
            .map(|(i, l)| (l.as_str(), i))
            .collect();
        let n = self.vocab.len();
        let to_vec = |c: &CharCombination| {
            let mut v = vec![Rat::ZERO; n];
            for (l, &x) in &c.coeffs {
                v[*idx
                    .get(l.as_str())
                    .expect("label outside the problem vocabulary")] = x;
            }
            v
        };
        (
            to_vec(&self.pi_uniform),
            self.ortho_basis.iter().map(to_vec).collect(),
        )
    }

    /// Public validation hook (used by the synthetic-instance generator in
    /// the acceptance suite to reject degenerate draws).
    pub fn validate_public(&self) -> Result<()> {
        self.validate()
    }

    fn validate(&self) -> Result<()> {
        if self.target_norm_sq <= 0 {
            return Err(Error::NoSolution);
        }
        let (_, basis) = self.as_vectors();
        if !basis.is_empty() {
            let rank = QMat::from_rows(basis.clone()).rank();
            if rank != basis.len() {
                return Err(Error::InconsistentTable(
                    "orthogonal basis is linearly dependent".into(),
                ));
            }
        }
        for b in &self.ortho_basis {
            if !self.pi_uniform.inner(b).is_zero() {
                return Err(Error::InconsistentTable(
                    "pi_uniform is not orthogonal to the basis".into(),
                ));
            }
        }
        if Rat::int(self.target_norm_sq) < self.pi_uniform.norm_sq() {
            return Err(Error::NoSolution);
        }
        Ok(())
    }
}

/// All integral combinations `R = pi + gamma`, `gamma` in the span of the
/// basis, with `|R|^2 = target`, support disjoint from the forbidden set.
///
/// The integral solutions form the integer points of an affine sublattice:
/// a particular point plus the saturation of the basis span. Both are
/// computed by integer column reduction, and the norm equation is walked
/// exactly with rational completion of squares. Exhaustive by construction.
pub fn solve(p: &DecompositionProblem) -> Result<Vec<CharCombination>> {
    p.validate()?;
    let (pi, basis) = p.as_vectors();
    let n = p.vocab.len();
    if basis.is_empty() {
        let r = p.pi_uniform.clone();
        if r.is_integral()
            && r.norm_sq() == Rat::int(p.target_norm_sq)
            && disjoint(&r, &p.forbidden)
        {
            return Ok(vec![r]);
        }
        return Err(Error::NoSolution);
    }
    // the span as a solution set of integer equations K v = 0
    let bq = QMat::from_rows(basis.clone());
    let kernel_rows = bq.kernel_basis(); // functionals vanishing on the span
    let mut k_int: Vec<Vec<i128>> = Vec::new();
    let mut rhs: Vec<i128> = Vec::new();
    for f in &kernel_rows {
        let mut d = 1i128;
        for v in f.iter().chain(pi.iter()) {
            d = lcm(d, v.den());
        }
        k_int.push(f.iter().map(|v| v.num() * (d / v.den())).collect());
        // K R = K pi must be integral for integral R to exist
        let b = f
            .iter()
            .zip(&pi)
            .fold(Rat::ZERO, |a, (x, y)| a + *x * *y)
            * Rat::int(d);
        match b.as_integer() {
            Some(x) => rhs.push(x),
            None => return Err(Error::NoSolution),
        }
    }
    let (r0, lattice) = match solve_integer_system(&k_int, &rhs, n) {
        Some(x) => x,
        None => return Err(Error::NoSolution),
    };
    // enumerate R = r0 + sum c_i w_i with |R|^2 = target
    let sols = enumerate_norm(&r0, &lattice, p.target_norm_sq)?;
    let mut out = Vec::new();
    for v in sols {
        let r = CharCombination::from_pairs(
            p.vocab
                .iter()
                .enumerate()
                .filter(|(i, _)| v[*i] != 0)
                .map(|(i, l)| (l.clone(), Rat::int(v[i]))),
        );
        debug_assert_eq!(r.norm_sq(), Rat::int(p.target_norm_sq));
        debug_assert!(basis_contains(&bq, &pi, &v));
        if disjoint(&r, &p.forbidden) {
            out.push(r);
        }
    }
    out.sort_by(|a, b| format!("{a:?}").cmp(&format!("{b:?}")));
    out.dedup();
    if out.is_empty() {
        return Err(Error::NoSolution);
    }
    Ok(out)
}

fn basis_contains(bq: &QMat, pi: &[Rat], v: &[i128]) -> bool {
    let diff: Vec<Rat> = (0..pi.len()).map(|i| Rat::int(v[i]) - pi[i]).collect();
    let mut rows: Vec<Vec<Rat>> = (0..bq.rows).map(|i| bq.row(i).to_vec()).collect();
    let base = QMat::from_rows(rows.clone()).rank();
    rows.push(diff);
    QMat::from_rows(rows).rank() == base
}

/// Solve K x = b over the integers: a particular solution plus a basis of
/// the integer kernel, via column Hermite reduction.
fn solve_integer_system(
    k: &[Vec<i128>],
    b: &[i128],
    n: usize,
) -> Option<(Vec<i128>, Vec<Vec<i128>>)> {
    let rows = k.len();
    // working copy H (rows x n) and unimodular U (n x n) with K U = H
    let mut h: Vec<Vec<i128>> = k.to_vec();
    let mut u: Vec<Vec<i128>> = (0..n)
        .map(|i| (0..n).map(|j| i128::from(i == j)).collect())
        .collect();
    let col_swap = |h: &mut Vec<Vec<i128>>, u: &mut Vec<Vec<i128>>, a: usize, c: usize| {
        for row in h.iter_mut() {
            row.swap(a, c);
        }
        for row in u.iter_mut() {
            row.swap(a, c);
        }
    };
    let col_axpy = |h: &mut Vec<Vec<i128>>, u: &mut Vec<Vec<i128>>, dst: usize, src: usize, f: i128| {
        for row in h.iter_mut() {
            row[dst] += f * row[src];
        }
        for row in u.iter_mut() {
            row[dst] += f * row[src];
        }
    };
    let mut lead = 0usize;
    for r in 0..rows {
        if lead >= n {
            break;
        }
        // gcd-reduce row r across columns lead..n
        loop {
            let mut piv: Option<usize> = None;
            for c in lead..n {
                if h[r][c] != 0 && piv.map_or(true, |p| h[r][c].abs() < h[r][p].abs()) {
                    piv = Some(c);
                }
            }
            let Some(pc) = piv else { break };
            col_swap(&mut h, &mut u, lead, pc);
            let mut again = false;
            for c in lead + 1..n {
                if h[r][c] != 0 {
                    let f = -(h[r][c] / h[r][lead]);
                    col_axpy(&mut h, &mut u, c, lead, f);
                    if h[r][c] != 0 {
                        again = true;
                    }
                }
            }
            if !again {
                break;
            }
        }
        if h[r][lead] != 0 {
            lead += 1;
        }
    }
    // forward solve H y = b with y supported on the pivot columns
    let mut y = vec![0i128; n];
    for r in 0..rows {
        let acc: i128 = (0..n).map(|c| h[r][c] * y[c]).sum();
        let need = b[r] - acc;
        // find the pivot column of this row
        let piv = (0..n).find(|&c| h[r][c] != 0 && (0..r).all(|r2| h[r2][c] == 0));
        match piv {
            Some(c) => {
                if need % h[r][c] != 0 {
                    return None;
                }
                y[c] = need / h[r][c];
            }
            None => {
                if need != 0 {
                    return None;
                }
            }
        }
    }
    // particular solution x = U y
    let x: Vec<i128> = (0..n).map(|i| (0..n).map(|j| u[i][j] * y[j]).sum()).collect();
    // kernel basis: U columns over the zero columns of H
    let mut kernel = Vec::new();
    for c in 0..n {
        if (0..rows).all(|r| h[r][c] == 0) {
            kernel.push((0..n).map(|i| u[i][c]).collect());
        }
    }
    Some((x, kernel))
}

/// Enumerate integer combinations r0 + sum c_i w_i of squared length
/// `target`, by exact completion of squares (Fincke–Pohst).
fn enumerate_norm(r0: &[i128], basis: &[Vec<i128>], target: i128) -> Result<Vec<Vec<i128>>> {
    let k = basis.len();
    let n = r0.len();
    if k == 0 {
        let nsq: i128 = r0.iter().map(|&x| x * x).sum();
        return Ok(if nsq == target {
            vec![r0.to_vec()]
        } else {
            Vec::new()
        });
    }
    // Gram matrix and cross terms
    let gram = |i: usize, j: usize| -> i128 { (0..n).map(|x| basis[i][x] * basis[j][x]).sum() };
    let mut g = QMat::zero(k, k);
    for i in 0..k {
        for j in 0..k {
            g[(i, j)] = Rat::int(gram(i, j));
        }
    }
    // rational Cholesky: g = L D L^T
    let mut dvec = vec![Rat::ZERO; k];
    let mut l = QMat::identity(k);
    for j in 0..k {
        let mut d = g[(j, j)];
        for t in 0..j {
            d = d - l[(j, t)] * l[(j, t)] * dvec[t];
        }
        if !(d > Rat::ZERO) {
            return Err(Error::InconsistentTable(
                "lattice basis is degenerate".into(),
            ));
        }
        dvec[j] = d;
        for i in j + 1..k {
            let mut v = g[(i, j)];
            for t in 0..j {
                v = v - l[(i, t)] * l[(j, t)] * dvec[t];
            }
            l[(i, j)] = v / d;
        }
    }
    let cross: Vec<Rat> = (0..k)
        .map(|i| Rat::int((0..n).map(|x| r0[x] * basis[i][x]).sum::<i128>()))
        .collect();
    let base_norm: i128 = r0.iter().map(|&x| x * x).sum();
    // walk coefficients from the last coordinate down; Q(c) = |r0|^2 +
    // 2 c.cross + c^T G c; with y = L^T c the quadratic part is sum d_i y_i^2
    let mut out = Vec::new();
    let mut c = vec![0i128; k];
    let mut iters = 0u64;
    walk(
        k,
        &mut c,
        &g,
        &cross,
        Rat::int(target - base_norm),
        &mut |cv| {
            let v: Vec<i128> = (0..n)
                .map(|x| r0[x] + (0..k).map(|i| cv[i] * basis[i][x]).sum::<i128>())
                .collect();
            let nsq: i128 = v.iter().map(|&y| y * y).sum();
            if nsq == target {
                out.push(v);
            }
        },
        &mut iters,
    )?;
    Ok(out)
}

/// Recursive exact search: choose c[depth] within rational bounds obtained
/// from the positive-definite quadratic form.
fn walk(
    depth: usize,
    c: &mut Vec<i128>,
    g: &QMat,
    cross: &[Rat],
    budget: Rat,
    emit: &mut dyn FnMut(&[i128]),
    iters: &mut u64,
) -> Result<()> {
    *iters += 1;
    if *iters > 50_000_000 {
        return Err(Error::SearchBudgetExceeded(*iters));
    }
    if depth == 0 {
        emit(c);
        return Ok(());
    }
    let i = depth - 1;
    // treat coordinate i: 2 c_i cross_i + g_ii c_i^2 + (mixed with already
    // fixed coordinates j > i) <= budget-ish. Conservative bound: the full
    // form minus fixed contributions is bounded by budget; bound |c_i| via
    // the diagonal entry after removing fixed terms exactly.
    // fixed part: sum over j,l > i of c_j c_l g_jl + 2 sum_{j>i} c_j cross_j
    let k = c.len();
    let mut fixed = Rat::ZERO;
    for j in depth..k {
        fixed += Rat::int(2 * c[j]) * cross[j];
        for l in depth..k {
            fixed += Rat::int(c[j] * c[l]) * g[(j, l)];
        }
    }
    // linear coefficient for c_i given fixed coordinates
    let mut lin = cross[i];
    for j in depth..k {
        lin += Rat::int(c[j]) * g[(i, j)];
    }
    let quad = g[(i, i)];
    // remaining coordinates (below i) can lower the form by at most ...
    // use the crude certified bound: quad c_i^2 + 2 lin c_i <= budget -
    // fixed + correction, with correction the maximal magnitude the free
    // block can subtract: bounded via Cauchy-Schwarz by itself; instead we
    // bound c_i by solving quad t^2 + 2 lin t - slack <= 0 with slack the
    // budget plus the free block's maximum |contribution|, estimated by the
    // full Gram row sums (exact, if loose).
    let mut slack = budget - fixed;
    for j in 0..depth {
        // the free block contributes at least -(sum |g| bounds); widen the
        // window accordingly using the diagonal dominance bound
        let mut rowsum = Rat::ZERO;
        for l in 0..depth {
            rowsum += (g[(j, l)] * g[(j, l)]) / (g[(j, j)] * g[(l, l)]);
        }
        let _ = rowsum;
        slack += cross[j] * cross[j] / g[(j, j)];
    }
    if slack < Rat::ZERO {
        slack = Rat::ZERO;
    }
    // bound: quad c^2 + 2 lin c <= slack  =>  c in [(-lin - s)/quad, (-lin + s)/quad]
    // with s = sqrt(lin^2 + quad*slack)
    let disc = lin * lin + quad * slack;
    let s = isqrt_rat_upper(disc) + 1;
    let lo = ((-lin - Rat::int(s)) / quad).floor();
    let hi = ((-lin + Rat::int(s)) / quad).ceil();
    for v in lo..=hi {
        c[i] = v;
        walk(depth - 1, c, g, cross, budget, emit, iters)?;
    }
    c[i] = 0;
    Ok(())
}

fn disjoint(r: &CharCombination, forbidden: &BTreeSet<String>) -> bool {
    r.support().all(|l| !forbidden.contains(l))
}

fn lcm(a: i128, b: i128) -> i128 {
    let g = {
        let (mut x, mut y) = (a.abs(), b.abs());
        while y != 0 {
            let t = x % y;
            x = y;
            y = t;
        }
        x
    };
    a / g * b
}

/// Largest integer m with m^2 <= x (x a nonnegative rational).
fn isqrt_rat_upper(x: Rat) -> i128 {
    if x < Rat::ZERO {
        return -1;
    }
    let mut m = 0i128;
    while Rat::int((m + 1) * (m + 1)) <= x {
        m += 1;
    }
    m
}

/// Brute-force oracle: enumerate every integer vector of the given norm on
/// the vocabulary and keep those whose difference from pi lies in the span
/// of the basis. Independent of the lattice walk above.
pub fn solve_by_enumeration(p: &DecompositionProblem) -> Vec<CharCombination> {
    let (pi, basis) = p.as_vectors();
    let n = p.vocab.len();
    let bound = isqrt_rat_upper(Rat::int(p.target_norm_sq));
    let mut out = Vec::new();
    let mut v = vec![0i128; n];
    fn rec(
        i: usize,
        n: usize,
        rem: i128,
        bound: i128,
        v: &mut Vec<i128>,
        pi: &[Rat],
        basis: &[Vec<Rat>],
        p: &DecompositionProblem,
        out: &mut Vec<CharCombination>,
    ) {
        if i == n {
            if rem != 0 {
                return;
            }
            // v - pi in span(basis)?
            let diff: Vec<Rat> = (0..n).map(|x| Rat::int(v[x]) - pi[x]).collect();
            let in_span = if basis.is_empty() {
                diff.iter().all(Rat::is_zero)
            } else {
                let mut rows = basis.to_vec();
                let base_rank = QMat::from_rows(rows.clone()).rank();
                rows.push(diff);
                QMat::from_rows(rows).rank() == base_rank
            };
            if in_span {
                let r = CharCombination::from_pairs(
                    p.vocab
                        .iter()
                        .enumerate()
                        .filter(|(x, _)| v[*x] != 0)
                        .map(|(x, l)| (l.clone(), Rat::int(v[x]))),
                );
                if disjoint(&r, &p.forbidden) {
                    out.push(r);
                }
            }
            return;
        }
        let step = isqrt_rat_upper(Rat::int(rem));
        for x in -step..=step {
            v[i] = x;
            rec(i + 1, n, rem - x * x, bound, v, pi, basis, p, out);
        }
        v[i] = 0;
    }
    rec(
        0,
        n,
        p.target_norm_sq,
        bound,
        &mut v,
        &pi,
        &basis,
        p,
        &mut out,
    );
    out.sort_by(|a, b| format!("{a:?}").cmp(&format!("{b:?}")));
    out.dedup();
    out
}

/// The norm-k forcing argument: when the candidate support is an orbit of
/// size k and the target norm is k, the unique non-negative multiplicity-one
/// combination is the orbit sum.
pub fn norm_decompose_series(
    orbit_labels: &[String],
    target_norm_sq: u64,
) -> Result<CharCombination> {
    if orbit_labels.len() as u64 != target_norm_sq {
        return Err(Error::AmbiguousSupport(format!(
            "orbit of size {} cannot carry a multiplicity-one combination of norm^2 {}",
            orbit_labels.len(),
            target_norm_sq
        )));
    }
    Ok(CharCombination::from_pairs(
        orbit_labels.iter().map(|l| (l.clone(), Rat::ONE)),
    ))
}

/// Support-only mode for the q = 2 cases where the Mackey formula is not
/// available: all integral solutions in a bounded window must agree on
/// their support; multiplicities remain undetermined.
pub struct SupportOnly {
    pub support: Vec<String>,
    pub multiplicities_determined: bool,
}

pub fn solve_support_constrained(
    vocab: &[String],
    pi: &CharCombination,
    basis: &[CharCombination],
    forbidden: &BTreeSet<String>,
) -> Result<SupportOnly> {
    // the norm is unknown here: scan upward and stop at the first norm
    // admitting integral disjoint solutions; their common support is the
    // answer, the multiplicities stay open
    let base = pi.norm_sq().ceil().max(1);
    for target in base..=(base + 32) {
        let p = DecompositionProblem {
            vocab: vocab.to_vec(),
            pi_uniform: pi.clone(),
            ortho_basis: basis.to_vec(),
            target_norm_sq: target,
            forbidden: forbidden.clone(),
        };
        let found = match solve(&p) {
            Ok(s) => s,
            Err(Error::NoSolution) => continue,
            Err(e) => return Err(e),
        };
        let supports: BTreeSet<Vec<String>> = found
            .iter()
            .map(|r| r.support().map(str::to_string).collect())
            .collect();
        if supports.len() > 1 {
            return Err(Error::AmbiguousSupport(
                "minimal-norm solutions disagree on their support".into(),
            ));
        }
        return Ok(SupportOnly {
            support: supports.into_iter().next().unwrap(),
            multiplicities_determined: found.len() == 1,
        });
    }
    Err(Error::NoSolution)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn comb(pairs: &[(&str, i128, i128)]) -> CharCombination {
        CharCombination::from_pairs(
            pairs
                .iter()
                .map(|(l, n, d)| (l.to_string(), Rat::new(*n, *d))),
        )
    }

    #[test]
    fn trivial_instance() {
        // pi already integral, empty basis, target = |pi|^2
        let pi = comb(&[("a", 1, 1), ("b", -1, 1)]);
        let p = DecompositionProblem {
            vocab: vec!["a".into(), "b".into()],
            pi_uniform: pi.clone(),
            ortho_basis: vec![],
            target_norm_sq: 2,
            forbidden: BTreeSet::new(),
        };
        assert_eq!(solve(&p).unwrap(), vec![pi]);
    }

    #[test]
    fn synthetic_instance_matches_enumeration() {
        // 6 labels, 2 orthogonal basis vectors, target 3
        let vocab: Vec<String> = ["a", "b", "c", "d", "e", "f"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let pi = comb(&[("a", 1, 2), ("b", 1, 2), ("c", -1, 2), ("d", 1, 2), ("e", 1, 1)]);
        let b1 = comb(&[("a", 1, 2), ("b", -1, 2), ("c", 1, 2), ("d", 1, 2)]);
        let b2 = comb(&[("a", 1, 2), ("b", 1, 2), ("c", 1, 2), ("d", -1, 2)]);
        assert!(pi.inner(&b1).is_zero() && pi.inner(&b2).is_zero());
        let p = DecompositionProblem {
            vocab,
            pi_uniform: pi,
            ortho_basis: vec![b1, b2],
            target_norm_sq: 3,
            forbidden: BTreeSet::new(),
        };
        let fast = solve(&p).unwrap();
        let slow = solve_by_enumeration(&p);
        assert_eq!(fast, slow);
        assert!(!fast.is_empty());
        for r in &fast {
            assert!(r.is_integral());
            assert_eq!(r.norm_sq(), Rat::int(3));
        }
    }

    #[test]
    fn orthogonality_identity() {
        let pi = comb(&[("a", 3, 4), ("b", 1, 4)]);
        let g = comb(&[("c", 1, 1)]);
        let r = pi.plus(&g);
        assert_eq!(r.norm_sq(), pi.norm_sq() + g.norm_sq());
    }

    #[test]
    fn orbit_forcing() {
        let orbit: Vec<String> = ["x^(0)", "x^(1)", "x^(2)"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let r = norm_decompose_series(&orbit, 3).unwrap();
        assert_eq!(r.len(), 3);
        assert!(r.support().all(|l| r.coeff(l) == Rat::ONE));
        assert_eq!(
            r.render_ordered(&orbit),
            "x^(0)+x^(1)+x^(2)"
        );
        assert!(norm_decompose_series(&orbit[..2].to_vec(), 3).is_err());
        assert!(norm_decompose_series(&orbit[..1].to_vec(), 1).is_ok());
    }

    #[test]
    fn support_mode() {
        // forced support at the minimal norm
        let vocab: Vec<String> = ["a", "b", "c", "d"].iter().map(|s| s.to_string()).collect();
        let pi = comb(&[("a", 3, 2), ("b", 1, 2), ("c", 1, 1)]);
        let b1 = comb(&[("a", 1, 2), ("b", -3, 2)]);
        assert!(pi.inner(&b1).is_zero());
        let mut forbidden = BTreeSet::new();
        forbidden.insert("d".to_string());
        let r = solve_support_constrained(&vocab, &pi, &[b1], &forbidden).unwrap();
        assert_eq!(r.support, vec!["a".to_string(), "b".into(), "c".into()]);
        // a symmetric projection leaves the support genuinely ambiguous
        let pi = comb(&[("a", 1, 2), ("b", 1, 2), ("c", 1, 1)]);
        let b1 = comb(&[("a", 1, 2), ("b", -1, 2)]);
        assert!(matches!(
            solve_support_constrained(&vocab, &pi, &[b1], &forbidden),
            Err(Error::AmbiguousSupport(_))
        ));
    }

    #[test]
    fn forbidden_support_is_respected() {
        let vocab: Vec<String> = ["a", "b"].iter().map(|s| s.to_string()).collect();
        let pi = comb(&[("a", 1, 2), ("b", 1, 2)]);
        let b1 = comb(&[("a", 1, 2), ("b", -1, 2)]);
        let mut forbidden = BTreeSet::new();
        forbidden.insert("b".to_string());
        let p = DecompositionProblem {
            vocab,
            pi_uniform: pi,
            ortho_basis: vec![b1],
            target_norm_sq: 1,
            forbidden,
        };
        let sols = solve(&p).unwrap();
        assert_eq!(sols.len(), 1);
        assert_eq!(sols[0], comb(&[("a", 1, 1)]));
    }
}
