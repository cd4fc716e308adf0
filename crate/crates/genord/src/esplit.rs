//! e-split Levi subgroups: the splitness test, enumeration up to conjugacy,
//! generic orders of centers and Levis, relative normalizer orders, and the
//! centralizer-side machinery that rebuilds block-table lines.
//!
//! Everything is phrased inside one ambient root system. A twisted
//! subsystem datum is a closed subsystem R together with a finite-order
//! permutation `t` of the ambient roots stabilizing R (the Frobenius twist
//! w phi). Levis of the pair are in turn pairs (J, u) with J a parabolic
//! subset of R and u a coset representative; all eigenspace computations run
//! over exact rationals.

use crate::cyclo::{cyclotomic, CycProduct, IntPoly};
use crate::error::{Error, Result};
use crate::frac::{QMat, Rat};
use crate::perm::{enumerate_group, set_orbit_transversal, set_stabilizer_gens, Perm};
use crate::rootdata::{
    components_of, GroupLabel, RootSystem, SubComponent,
};
use crate::unipotent::ComponentForm;
use std::collections::{BTreeSet, HashMap, HashSet};

/// Hard cap for full Weyl-subgroup enumeration: the centralizer-side groups
/// in this crate stay below it; ambient E7/E8 do not and must go through
/// check-mode instead.
pub const ENUM_LIMIT: usize = 260_000;

/// Reflection in an arbitrary root, as a root permutation.
pub fn reflection(rs: &RootSystem, root: u32) -> Perm {
    let beta = rs.roots[root as usize].clone();
    let nb = rs.form(&beta, &beta);
    Perm(
        rs.roots
            .iter()
            .map(|gamma| {
                let p = 2 * rs.form(gamma, &beta) / nb;
                let img: Vec<i64> = gamma
                    .iter()
                    .zip(&beta)
                    .map(|(&g, &b)| g - p * b)
                    .collect();
                rs.root_index(&img).expect("reflection image is a root")
            })
            .collect(),
    )
}

/// A closed subsystem with a compatible Frobenius twist, the substrate for
/// both ambient groups and centralizers of semisimple elements.
pub struct TwistedSubsystem {
    /// simple roots of the subsystem (ambient root indices)
    pub simples: Vec<u32>,
    /// all roots of the subsystem
    pub roots: Vec<u32>,
    /// the twist t = w phi as an ambient root permutation; must stabilize
    /// the subsystem
    pub twist: Perm,
    /// order of the F-stable component group acting on unipotent characters
    /// (1 when connected); how it acts is recorded separately in the dataset
    pub a_order: u64,
}

impl TwistedSubsystem {
    pub fn new(rs: &RootSystem, simples: Vec<u32>, twist: Perm) -> TwistedSubsystem {
        let roots = close_subsystem(rs, &simples);
        debug_assert!(
            roots.iter().all(|&r| roots.binary_search(&twist.apply(r)).is_ok()),
            "twist must stabilize the subsystem"
        );
        TwistedSubsystem {
            simples,
            roots,
            twist,
            a_order: 1,
        }
    }

    /// Simple reflections of the subsystem Weyl group.
    pub fn gens(&self, rs: &RootSystem) -> Vec<Perm> {
        self.simples.iter().map(|&s| reflection(rs, s)).collect()
    }

    pub fn rank(&self) -> usize {
        self.simples.len()
    }
}

/// The root subsystem generated by the given roots: the closure under the
/// reflections of its own members. (The rational span is too big for
/// maximal-rank subsystems like the four orthogonal A1s inside D4.)
pub fn close_subsystem(rs: &RootSystem, seed: &[u32]) -> Vec<u32> {
    let mut set: BTreeSet<u32> = seed.iter().copied().collect();
    for &r in seed {
        set.insert(rs.neg.apply(r));
    }
    loop {
        let cur: Vec<u32> = set.iter().copied().collect();
        let before = set.len();
        for &b in &cur {
            let sb = reflection(rs, b);
            for &g in &cur {
                set.insert(sb.apply(g));
            }
        }
        if set.len() == before {
            return set.into_iter().collect();
        }
    }
}

/// Rational basis of the fixed space of the parabolic W_J, J given by
/// subsystem roots; this is the orthogonal complement of their span.
pub fn fixed_space(rs: &RootSystem, j_roots: &[u32]) -> Vec<Vec<Rat>> {
    let n = rs.rank;
    if j_roots.is_empty() {
        return (0..n)
            .map(|i| {
                let mut v = vec![Rat::ZERO; n];
                v[i] = Rat::ONE;
                v
            })
            .collect();
    }
    let rows: Vec<Vec<Rat>> = j_roots
        .iter()
        .map(|&r| {
            let beta = &rs.roots[r as usize];
            (0..n)
                .map(|j| {
                    // (beta, alpha_j) as a linear functional
                    let mut e = vec![0i64; n];
                    e[j] = 1;
                    Rat::int(rs.form(beta, &e) as i128)
                })
                .collect()
        })
        .collect();
    QMat::from_rows(rows).kernel_basis()
}

/// Matrix of a root permutation on the ambient rational space.
fn qmatrix_of(rs: &RootSystem, w: &Perm) -> QMat {
    let m = rs.matrix_of(w);
    QMat::from_int_rows(&m)
}

/// Restrict the action of `m` to the span of `basis`; the basis must be
/// invariant. Returns the small matrix in basis coordinates.
fn restrict(m: &QMat, basis: &[Vec<Rat>]) -> QMat {
    let k = basis.len();
    if k == 0 {
        return QMat::zero(0, 0);
    }
    let n = basis[0].len();
    // solve basis^T * x = m * b for each b
    let bt = {
        let mut t = QMat::zero(n, k);
        for (j, b) in basis.iter().enumerate() {
            for i in 0..n {
                t[(i, j)] = b[i];
            }
        }
        t
    };
    let mut out = QMat::zero(k, k);
    for (j, b) in basis.iter().enumerate() {
        let mb: Vec<Rat> = (0..n)
            .map(|i| (0..n).fold(Rat::ZERO, |acc, l| acc + m[(i, l)] * b[l]))
            .collect();
        let x = bt.solve(&mb).expect("invariant subspace");
        for i in 0..k {
            out[(i, j)] = x[i];
        }
    }
    out
}

/// Evaluate an integer polynomial at a rational matrix.
fn poly_at(m: &QMat, p: &IntPoly) -> QMat {
    let k = m.rows;
    let mut acc = QMat::zero(k, k);
    let mut pw = QMat::identity(k);
    for (i, &c) in p.coeffs().iter().enumerate() {
        if c != 0 {
            acc = acc.add_scaled(&pw, Rat::int(c));
        }
        if i + 1 < p.coeffs().len() {
            pw = m.mul(&pw);
        }
    }
    acc
}

/// Characteristic polynomial of `t` on the fixed space of the parabolic
/// generated by `j_roots`: the generic order of the center of the Levi.
pub fn center_char_poly(rs: &RootSystem, j_roots: &[u32], t: &Perm) -> CycProduct {
    let fix = fixed_space(rs, j_roots);
    if fix.is_empty() {
        return CycProduct::one();
    }
    let m = restrict(&qmatrix_of(rs, t), &fix);
    char_poly_of_qmat(&m)
}

fn char_poly_of_qmat(m: &QMat) -> CycProduct {
    // Newton's identities over the rationals; the result is integral
    // because these are lattice maps restricted to invariant subspaces.
    let k = m.rows;
    let mut pw = QMat::identity(k);
    let mut p = vec![Rat::ZERO; k + 1];
    for i in 1..=k {
        pw = m.mul(&pw);
        p[i] = (0..k).fold(Rat::ZERO, |a, j| a + pw[(j, j)]);
    }
    let mut e = vec![Rat::ZERO; k + 1];
    e[0] = Rat::ONE;
    for i in 1..=k {
        let mut s = Rat::ZERO;
        for j in 1..=i {
            let t = e[i - j] * p[j];
            if j % 2 == 1 {
                s += t;
            } else {
                s = s - t;
            }
        }
        e[i] = s / Rat::int(i as i128);
    }
    let mut int_coeffs = vec![0i128; k + 1];
    for (i, ev) in e.iter().enumerate() {
        let v = if i % 2 == 0 { *ev } else { -*ev };
        int_coeffs[k - i] = v.as_integer().expect("integral characteristic polynomial");
    }
    crate::cyclo::factor_generic_order(&IntPoly::from_coeffs(int_coeffs))
        .expect("finite-order lattice maps have cyclotomic characteristic polynomials")
}

/// Basis of `ker Phi_e(t)` restricted to the fixed space of J, lifted back
/// to ambient coordinates.
pub fn phi_e_eigenspace(
    rs: &RootSystem,
    j_roots: &[u32],
    t: &Perm,
    e: u32,
) -> Vec<Vec<Rat>> {
    let fix = fixed_space(rs, j_roots);
    if fix.is_empty() {
        return Vec::new();
    }
    let m = restrict(&qmatrix_of(rs, t), &fix);
    let pe = poly_at(&m, &cyclotomic(e));
    let ker = pe.kernel_basis();
    // lift: ambient vector = sum coeff * basis
    ker.iter()
        .map(|kv| {
            let n = rs.rank;
            let mut v = vec![Rat::ZERO; n];
            for (c, b) in kv.iter().zip(&fix) {
                for i in 0..n {
                    v[i] += *c * b[i];
                }
            }
            v
        })
        .collect()
}

/// Ambient roots vanishing on the span of the given rational vectors.
pub fn vanishing_roots(rs: &RootSystem, vectors: &[Vec<Rat>]) -> Vec<u32> {
    let n = rs.rank;
    (0..rs.roots.len() as u32)
        .filter(|&r| {
            let alpha = &rs.roots[r as usize];
            vectors.iter().all(|v| {
                (0..n).fold(Rat::ZERO, |acc, j| {
                    // (alpha, e_j) coefficient of the functional
                    let mut e = vec![0i64; n];
                    e[j] = 1;
                    acc + v[j] * Rat::int(rs.form(alpha, &e) as i128)
                }) == Rat::ZERO
            })
        })
        .collect()
}

/// The e-split test: the Levi (J, t) of the ambient pair is e-split exactly
/// when the roots vanishing on the Phi_e-eigenspace of its center are the
/// roots of J itself.
pub fn is_e_split(rs: &RootSystem, j_roots: &[u32], t: &Perm, e: u32) -> bool {
    let ve = phi_e_eigenspace(rs, j_roots, t, e);
    let vanish = vanishing_roots(rs, &ve);
    vanish == j_roots.to_vec()
}

/// One component of a Levi form together with the ambient machinery output.
#[derive(Clone, Debug)]
pub struct LeviForm {
    pub components: Vec<ComponentForm>,
    /// generic order of the center (char poly of the twist on the fixed
    /// space)
    pub center: CycProduct,
    /// full generic order: center times component orders
    pub order: CycProduct,
}

impl LeviForm {
    /// Textual form in table style: center "." components, equal components
    /// grouped with an exponent, e.g. `P1.P4^2.A1(q)^2`.
    pub fn display(&self) -> String {
        render_display(&self.center, &self.components)
    }
}

/// Canonical display of a center order and component list; repeated
/// component names group as `name^k`.
pub fn render_display(center: &CycProduct, components: &[ComponentForm]) -> String {
    let mut parts: Vec<String> = Vec::new();
    if !center.is_one() {
        parts.push(center.render());
    }
    let names: Vec<String> = components.iter().map(|c| c.name()).collect();
    let mut i = 0;
    while i < names.len() {
        let mut j = i;
        while j < names.len() && names[j] == names[i] {
            j += 1;
        }
        if j - i > 1 {
            parts.push(format!("{}^{}", names[i], j - i));
        } else {
            parts.push(names[i].clone());
        }
        i = j;
    }
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join(".")
    }
}

/// Substitute X -> X^k in a cyclotomic product:
/// `Phi_d(X^k) = prod of Phi_m(X)` over m with `m / gcd(m, k) = d`.
pub fn inflate_power(t: &CycProduct, k: u32) -> CycProduct {
    if k == 1 {
        return t.clone();
    }
    let mut out = CycProduct::new(t.sign, t.x_power * k, []);
    for (&d, &mult) in t.factors() {
        for m in 1..=d * k {
            if m / gcd_u32(m, k) == d {
                out = out.mul(&CycProduct::new(1, 0, [(m, mult)]));
            }
        }
    }
    out
}

fn gcd_u32(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd_u32(b, a % b)
    }
}

/// Generic order of a component form over F_q.
pub fn component_order(c: &ComponentForm) -> CycProduct {
    let label = GroupLabel::new(c.series, c.rank, c.twist).expect("valid component");
    inflate_power(&label.generic_order(), c.field_power)
}

/// Identify the typed component forms of a twisted subsystem: the twist
/// permutes the components; an orbit of length k contributes one component
/// over q^k twisted by the diagram part of t^k.
pub fn component_forms(rs: &RootSystem, roots: &[u32], t: &Perm) -> Vec<ComponentForm> {
    let comps = components_of(rs, roots);
    let n = comps.len();
    let root_sets: Vec<BTreeSet<u32>> = comps
        .iter()
        .map(|c| close_subsystem(rs, &c.simples).into_iter().collect())
        .collect();
    // where does t send each component?
    let image_of = |i: usize, g: &Perm| -> usize {
        let probe = *root_sets[i].iter().next().unwrap();
        let img = g.apply(probe);
        (0..n)
            .position(|j| root_sets[j].contains(&img))
            .expect("twist permutes components")
    };
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for i in 0..n {
        if seen[i] {
            continue;
        }
        // orbit of the component under t
        let mut orbit = vec![i];
        seen[i] = true;
        let mut cur = image_of(i, t);
        while cur != i {
            seen[cur] = true;
            orbit.push(cur);
            cur = image_of(cur, t);
        }
        let k = orbit.len() as u32;
        // induced automorphism: t^k on the representative component
        let mut tk = t.clone();
        for _ in 1..k {
            tk = t.compose(&tk);
        }
        let twist = diagram_twist_order(rs, &comps[i], &tk);
        let mut form = ComponentForm::new(comps[i].series, comps[i].rank, twist, k);
        form.short = comps[i].short;
        out.push(form);
    }
    // table convention: larger rank first, then smaller field, untwisted
    // before twisted, long before short
    out.sort_by_key(|c| (std::cmp::Reverse(c.rank), c.field_power, c.twist, c.short, c.series));
    out
}

/// Order of the diagram automorphism induced on a component by a stabilizing
/// permutation: reduce modulo the component Weyl group by making all simple
/// images positive, then read off the simple-root permutation order.
fn diagram_twist_order(rs: &RootSystem, comp: &SubComponent, g: &Perm) -> u8 {
    let mut w = g.clone();
    // make positive within the component
    loop {
        let neg = comp
            .simples
            .iter()
            .position(|&s| !rs.is_positive(w.apply(s)));
        match neg {
            Some(i) => {
                w = w.compose(&reflection(rs, comp.simples[i]));
            }
            None => break,
        }
    }
    // the simple set must now map to itself
    let perm: Vec<usize> = comp
        .simples
        .iter()
        .map(|&s| {
            comp.simples
                .iter()
                .position(|&x| x == w.apply(s))
                .expect("diagram automorphism permutes the component simples")
        })
        .collect();
    let mut order = 1u8;
    let mut cur = perm.clone();
    while cur.iter().enumerate().any(|(i, &x)| i != x) {
        cur = (0..perm.len()).map(|i| perm[cur[i]]).collect();
        order += 1;
    }
    order
}

/// Build the Levi form (components, center order, full order) of a twisted
/// subsystem datum.
pub fn levi_form(rs: &RootSystem, roots: &[u32], j_simple_hint: &[u32], t: &Perm) -> LeviForm {
    let center = center_char_poly(rs, roots, t);
    let components = if roots.is_empty() {
        Vec::new()
    } else {
        component_forms(rs, roots, t)
    };
    let mut order = center.clone();
    for c in &components {
        order = order.mul(&component_order(c));
    }
    let _ = j_simple_hint;
    LeviForm {
        components,
        center,
        order,
    }
}

/// An enumerated e-split Levi class of a twisted pair.
#[derive(Clone)]
pub struct LeviClass {
    /// parabolic subset (root indices of the subsystem of C it generates)
    pub j_roots: Vec<u32>,
    /// simple roots of J
    pub j_simples: Vec<u32>,
    /// twist of the Levi: u * t
    pub twist: Perm,
    pub form: LeviForm,
}

/// Enumerate the (J, u)-classes of a twisted subsystem: J runs over
/// parabolic classes of the subsystem, u over minimal coset representatives
/// of W_J in the twisted stabilizer of J, up to twisted conjugacy. The
/// subsystem Weyl group is enumerated in full, so this requires |W_C| <=
/// ENUM_LIMIT.
pub fn twisted_levi_classes(
    rs: &RootSystem,
    sub: &TwistedSubsystem,
    filter_e_split: Option<u32>,
) -> Result<Vec<LeviClass>> {
    let gens = sub.gens(rs);
    let full = if gens.is_empty() {
        vec![Perm::identity(rs.n_roots())]
    } else {
        enumerate_group(&gens, ENUM_LIMIT).ok_or_else(|| {
            Error::ScaleLimit(format!(
                "subsystem Weyl group exceeds {} elements",
                ENUM_LIMIT
            ))
        })?
    };
    // coordinates of subsystem roots over the subsystem simples
    let coords = subsystem_coords(rs, sub);
    // parabolic classes of the subsystem
    let rank = sub.rank();
    let mut j_reps: Vec<(Vec<u32>, Vec<u32>)> = Vec::new(); // (j_roots, j_simples)
    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    for bits in 0..(1usize << rank) {
        let j_simples: Vec<u32> = (0..rank)
            .filter(|i| bits >> i & 1 == 1)
            .map(|i| sub.simples[i])
            .collect();
        let j_roots: Vec<u32> = sub
            .roots
            .iter()
            .copied()
            .filter(|&r| {
                coords[&r]
                    .iter()
                    .enumerate()
                    .all(|(i, &c)| c == Rat::ZERO || bits >> i & 1 == 1)
            })
            .collect();
        if seen.contains(&j_roots) {
            continue;
        }
        if gens.is_empty() {
            seen.insert(j_roots.clone());
        } else {
            for s in set_orbit_transversal(&gens, &j_roots).keys() {
                seen.insert(s.clone());
            }
        }
        j_reps.push((j_roots, j_simples));
    }
    j_reps.sort_by_key(|(r, s)| (s.len(), r.clone()));

    let mut out = Vec::new();
    for (j_roots, j_simples) in &j_reps {
        // twisted stabilizer cosets: x with (x t)(J) = J
        let j_set: Vec<u32> = j_roots.clone();
        let mut coset_reps: BTreeSet<Perm> = BTreeSet::new();
        for x in &full {
            let xt = x.compose(&sub.twist);
            if xt.image_set(&j_set) == j_set {
                coset_reps.insert(min_coset_rep(rs, x.clone(), j_simples));
            }
        }
        // twisted conjugacy orbits among coset reps: x . u = canon(x u t(x)^-1)
        let n_gens = if gens.is_empty() {
            Vec::new()
        } else {
            set_stabilizer_gens(&gens, &j_set)
        };
        let mut remaining: BTreeSet<Perm> = coset_reps.clone();
        while let Some(u0) = remaining.iter().next().cloned() {
            // orbit BFS
            let mut orbit = BTreeSet::new();
            let mut queue = vec![u0.clone()];
            orbit.insert(u0.clone());
            while let Some(u) = queue.pop() {
                for x in &n_gens {
                    let tx = sub.twist.compose(&x.compose(&sub.twist.inverse()));
                    let conj = x.compose(&u.compose(&tx.inverse()));
                    let c = min_coset_rep(rs, conj, j_simples);
                    if orbit.insert(c.clone()) {
                        queue.push(c);
                    }
                }
            }
            for u in &orbit {
                remaining.remove(u);
            }
            let u = orbit.iter().next().unwrap().clone();
            let t_levi = u.compose(&sub.twist);
            if let Some(e) = filter_e_split {
                // e-split within the subsystem: roots of C vanishing on the
                // Phi_e part of the center must be exactly J
                let ve = phi_e_eigenspace(rs, &j_set, &t_levi, e);
                let vanish = vanishing_roots(rs, &ve);
                let vanish_in_c: Vec<u32> = vanish
                    .into_iter()
                    .filter(|r| sub.roots.binary_search(r).is_ok())
                    .collect();
                if vanish_in_c != j_set {
                    continue;
                }
            }
            let form = levi_form(rs, &j_set, j_simples, &t_levi);
            out.push(LeviClass {
                j_roots: j_set.clone(),
                j_simples: j_simples.clone(),
                twist: t_levi,
                form,
            });
        }
    }
    Ok(out)
}

/// Coordinates of each subsystem root over the subsystem simple basis.
fn subsystem_coords(rs: &RootSystem, sub: &TwistedSubsystem) -> HashMap<u32, Vec<Rat>> {
    let n = rs.rank;
    let k = sub.simples.len();
    let mut mat = QMat::zero(n, k);
    for (j, &s) in sub.simples.iter().enumerate() {
        for i in 0..n {
            mat[(i, j)] = Rat::int(rs.roots[s as usize][i] as i128);
        }
    }
    sub.roots
        .iter()
        .map(|&r| {
            let b: Vec<Rat> = rs.roots[r as usize]
                .iter()
                .map(|&x| Rat::int(x as i128))
                .collect();
            let x = mat.solve(&b).expect("subsystem root lies in the span");
            (r, x)
        })
        .collect()
}

/// Minimal representative of the left coset W_J u: make every preimage of a
/// J-simple positive by left multiplication with J-generators. Every
/// representative of the left coset induces the same twisted Levi datum:
/// (w u t)(Phi_J) = w(Phi_J) = Phi_J for w in W_J.
pub fn min_coset_rep(rs: &RootSystem, mut u: Perm, j_simples: &[u32]) -> Perm {
    loop {
        let ui = u.inverse();
        match j_simples.iter().find(|&&s| !rs.is_positive(ui.apply(s))) {
            Some(&s) => u = reflection(rs, s).compose(&u),
            None => return u,
        }
    }
}

/// Relative normalizer: elements of the subsystem Weyl group normalizing
/// both J and the twisted class of the Levi, modulo W_J. Returns the
/// quotient order and coset representatives (used downstream for the action
/// on cuspidal labels).
pub struct RelativeWeyl {
    pub order: u128,
    pub reps: Vec<Perm>,
}

pub fn relative_weyl(
    rs: &RootSystem,
    sub: &TwistedSubsystem,
    levi: &LeviClass,
) -> Result<RelativeWeyl> {
    let gens = sub.gens(rs);
    let stab_gens = if gens.is_empty() {
        Vec::new()
    } else {
        set_stabilizer_gens(&gens, &levi.j_roots)
    };
    let stab = if stab_gens.is_empty() {
        vec![Perm::identity(rs.n_roots())]
    } else {
        enumerate_group(&stab_gens, ENUM_LIMIT).ok_or_else(|| {
            Error::ScaleLimit("relative normalizer too large to enumerate".into())
        })?
    };
    // fixed space test for membership in W_J
    let fix = fixed_space(rs, &levi.j_roots);
    let in_wj = |w: &Perm| -> bool {
        let m = qmatrix_of(rs, w);
        fix.iter().all(|v| {
            (0..rs.rank).all(|i| {
                (0..rs.rank).fold(Rat::ZERO, |a, l| a + m[(i, l)] * v[l]) == v[i]
            })
        })
    };
    let t = &levi.twist; // u * tau, and conjugation must stay in the coset
    let mut reps: Vec<Perm> = Vec::new();
    for x in &stab {
        // x normalizes the twisted Levi class: x t x^-1 t^-1 in W_J
        let c = x.compose(&t.compose(&x.inverse().compose(&t.inverse())));
        if in_wj(&c) {
            // reduce x to a minimal coset representative, dedup
            let r = min_coset_rep(rs, x.clone(), &levi.j_simples);
            if !reps.contains(&r) {
                reps.push(r);
            }
        }
    }
    Ok(RelativeWeyl {
        order: reps.len() as u128,
        reps,
    })
}

/// Convenience: the G-side operations of the module on an ambient label.

/// Enumerate e-split Levi classes of the ambient group (exhaustive mode).
pub fn enumerate_e_split(label: GroupLabel, e: u32) -> Result<Vec<LeviClass>> {
    let rs = RootSystem::build(label.series, label.rank);
    if GroupLabel::untwisted(label.series, label.rank)
        .map(|l| l.weyl_order())
        .unwrap_or(u128::MAX)
        > ENUM_LIMIT as u128
    {
        return Err(Error::ScaleLimit(format!(
            "exhaustive e-split enumeration is not available for {label}; use check mode"
        )));
    }
    let twist = rs.diagram_twist(label.twist)?;
    let sub = TwistedSubsystem::new(&rs, (0..label.rank).map(|i| rs.simple_index(i)).collect(), twist);
    twisted_levi_classes(&rs, &sub, Some(e))
}

/// Generic order of the center of a Levi class works off the stored data.
pub fn center_generic_order(levi: &LeviClass) -> CycProduct {
    levi.form.center.clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ambient(name: &str) -> (RootSystem, TwistedSubsystem) {
        let label = GroupLabel::parse(name).unwrap();
        let rs = RootSystem::build(label.series, label.rank);
        let twist = rs.diagram_twist(label.twist).unwrap();
        let simples = (0..label.rank).map(|i| rs.simple_index(i)).collect();
        let sub = TwistedSubsystem::new(&rs, simples, twist);
        (rs, sub)
    }

    #[test]
    fn full_group_is_always_e_split() {
        let (rs, sub) = ambient("F4");
        for e in [1u32, 2, 3, 4, 6, 8, 12] {
            assert!(is_e_split(&rs, &sub.roots, &sub.twist, e));
        }
    }

    #[test]
    fn g2_at_3_contains_the_phi3_torus() {
        let classes = enumerate_e_split(GroupLabel::parse("G2").unwrap(), 3).unwrap();
        let orders: Vec<String> = classes.iter().map(|c| c.form.order.render()).collect();
        assert!(orders.contains(&"P3".to_string()), "{orders:?}");
        // self-consistency: everything returned passes the test
        let (rs, _) = ambient("G2");
        for c in &classes {
            assert!(is_e_split(&rs, &c.j_roots, &c.twist, 3));
        }
    }

    #[test]
    fn f4_at_3_matches_the_table_levis() {
        let classes = enumerate_e_split(GroupLabel::parse("F4").unwrap(), 3).unwrap();
        let displays: Vec<String> = classes.iter().map(|c| c.form.display()).collect();
        // table: torus P3^2, and A2-type Levis with center of order P3
        assert!(displays.contains(&"P3^2".to_string()), "{displays:?}");
        // long A2 and short A2~, both with center of generic order P3
        assert!(displays.contains(&"P3.A2(q)".to_string()), "{displays:?}");
        assert!(displays.contains(&"P3.A2~(q)".to_string()), "{displays:?}");
        // for e beyond every divisor only G survives
        let classes = enumerate_e_split(GroupLabel::parse("F4").unwrap(), 13).unwrap();
        assert_eq!(classes.len(), 1);
        assert_eq!(classes[0].j_roots.len(), 48);
    }

    #[test]
    fn f4_at_4_matches_the_table_levis() {
        let classes = enumerate_e_split(GroupLabel::parse("F4").unwrap(), 4).unwrap();
        let displays: Vec<String> = classes.iter().map(|c| c.form.display()).collect();
        assert!(displays.contains(&"P4^2".to_string()), "{displays:?}");
        assert!(
            displays.iter().any(|d| d == "P4.B2(q)"),
            "{displays:?}"
        );
    }

    #[test]
    fn enumerated_levis_are_fixed_points_of_the_closure() {
        // applying "centralizer of the Phi_e-part of the center" to an
        // enumerated Levi returns the Levi itself
        let (rs, _) = ambient("F4");
        for e in [3u32, 4] {
            for c in enumerate_e_split(GroupLabel::parse("F4").unwrap(), e).unwrap() {
                let ve = phi_e_eigenspace(&rs, &c.j_roots, &c.twist, e);
                let vanish = vanishing_roots(&rs, &ve);
                assert_eq!(vanish, c.j_roots, "e={e}");
            }
        }
    }

    #[test]
    fn torus_center_orders() {
        // the maximal torus class of w = identity in F4 has center order P1^4
        let (rs, sub) = ambient("F4");
        let id = Perm::identity(rs.n_roots());
        assert_eq!(
            center_char_poly(&rs, &[], &id),
            CycProduct::new(1, 0, [(1, 4)])
        );
        // L = G: trivial center for F4
        assert_eq!(center_char_poly(&rs, &sub.roots, &id), CycProduct::one());
    }

    #[test]
    fn levi_forms_in_3d4() {
        let classes = enumerate_e_split(GroupLabel::parse("3D4").unwrap(), 3).unwrap();
        let displays: Vec<String> = classes.iter().map(|c| c.form.display()).collect();
        // the e-split closure of the table's Levi: the printed column
        // P1.P3.A1(q) is not 3-split (its Phi_3 center part centralizes to
        // the A2 Levi); enumeration must produce the closure
        assert!(displays.iter().any(|d| d == "P3.A2(q)"), "{displays:?}");
        assert!(displays.iter().any(|d| d == "P3^2"), "{displays:?}");
    }

    #[test]
    fn relative_weyl_of_f4_phi3_torus() {
        let label = GroupLabel::parse("F4").unwrap();
        let classes = enumerate_e_split(label, 3).unwrap();
        let torus = classes
            .iter()
            .find(|c| c.form.order.render() == "P3^2")
            .expect("Phi_3^2 torus");
        let (rs, sub) = ambient("F4");
        let rw = relative_weyl(&rs, &sub, torus).unwrap();
        // the relative Weyl group of the Phi_3 Sylow torus of F4 has order 72
        assert_eq!(rw.order, 72);
    }

    #[test]
    fn component_forms_under_triality() {
        // inside 3D4, the A1^4 subsystem splits as A1(q) x A1(q^3)
        let label = GroupLabel::parse("3D4").unwrap();
        let rs = RootSystem::build(label.series, label.rank);
        let twist = rs.diagram_twist(3).unwrap();
        // the four orthogonal A1s of D4: alpha_1, alpha_3, alpha_4 and the
        // lowest root (roots are sorted by height, so the highest is last)
        let highest = rs.n_roots() as u32 - 1;
        let simples = vec![
            rs.simple_index(0),
            rs.simple_index(2),
            rs.simple_index(3),
            rs.neg.apply(highest),
        ];
        let forms = component_forms(&rs, &close_subsystem(&rs, &simples), &twist);
        let names: Vec<String> = forms.iter().map(|f| f.name()).collect();
        assert!(
            names == vec!["A1(q^3)".to_string(), "A1(q)".to_string()]
                || names == vec!["A1(q)".to_string(), "A1(q^3)".to_string()],
            "{names:?}"
        );
    }
}
