//! Permutations on small point sets and the orbit/stabilizer toolkit used
//! for Weyl groups acting on roots.

use std::collections::{BTreeMap, HashSet, VecDeque};

/// Permutation of `0..n`, stored as the image vector.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Perm(pub Vec<u32>);

impl Perm {
    pub fn identity(n: usize) -> Perm {
        Perm((0..n as u32).collect())
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn apply(&self, p: u32) -> u32 {
        self.0[p as usize]
    }

    /// Function composition: `(self * rhs)(x) = self(rhs(x))`.
    pub fn compose(&self, rhs: &Perm) -> Perm {
        debug_assert_eq!(self.degree(), rhs.degree());
        Perm(rhs.0.iter().map(|&x| self.0[x as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u32; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Perm(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    pub fn order(&self) -> u64 {
        let mut k = 1u64;
        let mut cur = self.clone();
        while !cur.is_identity() {
            cur = cur.compose(self);
            k += 1;
        }
        k
    }

    /// Image of a sorted point set, sorted.
    pub fn image_set(&self, set: &[u32]) -> Vec<u32> {
        let mut img: Vec<u32> = set.iter().map(|&p| self.apply(p)).collect();
        img.sort_unstable();
        img
    }
}

/// Breadth-first closure of a generating set. Fails (returns `None`) when
/// the group exceeds `limit` elements.
pub fn enumerate_group(gens: &[Perm], limit: usize) -> Option<Vec<Perm>> {
    let n = gens.first().map_or(0, Perm::degree);
    let id = Perm::identity(n);
    let mut seen: HashSet<Perm> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(id.clone());
    queue.push_back(id);
    let mut out = Vec::new();
    while let Some(g) = queue.pop_front() {
        out.push(g.clone());
        if out.len() > limit {
            return None;
        }
        for s in gens {
            let h = s.compose(&g);
            if seen.insert(h.clone()) {
                queue.push_back(h);
            }
        }
    }
    Some(out)
}

/// Orbit of a sorted point set under the group generated by `gens`,
/// with a transversal: for each set in the orbit, an element mapping the
/// seed to it.
pub fn set_orbit_transversal(gens: &[Perm], seed: &[u32]) -> BTreeMap<Vec<u32>, Perm> {
    let n = gens.first().map_or(0, Perm::degree);
    let mut seed = seed.to_vec();
    seed.sort_unstable();
    let mut orbit: BTreeMap<Vec<u32>, Perm> = BTreeMap::new();
    let mut queue = VecDeque::new();
    orbit.insert(seed.clone(), Perm::identity(n));
    queue.push_back(seed);
    while let Some(cur) = queue.pop_front() {
        let g = orbit[&cur].clone();
        for s in gens {
            let img = s.image_set(&cur);
            if !orbit.contains_key(&img) {
                orbit.insert(img.clone(), s.compose(&g));
                queue.push_back(img);
            }
        }
    }
    orbit
}

/// Generators of the stabilizer of the point set `seed` (as a set), via
/// Schreier's lemma on the set orbit.
pub fn set_stabilizer_gens(gens: &[Perm], seed: &[u32]) -> Vec<Perm> {
    let orbit = set_orbit_transversal(gens, seed);
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for (set, rep) in &orbit {
        for s in gens {
            let img = s.image_set(set);
            let rep_img = &orbit[&img];
            // rep_img^{-1} * s * rep stabilizes the seed set
            let sg = rep_img.inverse().compose(&s.compose(rep));
            if !sg.is_identity() && seen.insert(sg.clone()) {
                out.push(sg);
            }
        }
    }
    out
}

/// Deterministic Schreier–Sims stabilizer chain; used for group orders and
/// membership tests on root permutations (degree <= 240).
pub struct StabChain {
    degree: usize,
    levels: Vec<Level>,
}

struct Level {
    base: u32,
    /// generators first discovered at this level
    owned: Vec<Perm>,
    /// current acting set: everything owned at this level or deeper
    acting: Vec<Perm>,
    /// point -> transversal element mapping base to point; entries are
    /// immutable once inserted, so sift certificates stay valid
    transversal: BTreeMap<u32, Perm>,
}

impl Level {
    fn new(degree: usize, base: u32) -> Level {
        let mut transversal = BTreeMap::new();
        transversal.insert(base, Perm::identity(degree));
        Level {
            base,
            owned: Vec::new(),
            acting: Vec::new(),
            transversal,
        }
    }

    /// Grow the orbit in place under the acting set.
    fn extend_orbit(&mut self) {
        let mut queue: VecDeque<u32> = self.transversal.keys().copied().collect();
        while let Some(p) = queue.pop_front() {
            let rep = self.transversal[&p].clone();
            for g in &self.acting {
                let q = g.apply(p);
                if !self.transversal.contains_key(&q) {
                    self.transversal.insert(q, g.compose(&rep));
                    queue.push_back(q);
                }
            }
        }
    }
}

impl StabChain {
    pub fn new(gens: &[Perm]) -> StabChain {
        let degree = gens.first().map_or(1, Perm::degree);
        let mut chain = StabChain {
            degree,
            levels: Vec::new(),
        };
        for g in gens {
            if !g.is_identity() {
                chain.place_generator(g.clone(), 0);
            }
        }
        chain.close();
        chain
    }

    pub fn order(&self) -> u128 {
        self.levels
            .iter()
            .map(|l| l.transversal.len() as u128)
            .product()
    }

    pub fn contains(&self, g: &Perm) -> bool {
        self.sift(g.clone(), 0).is_none()
    }

    /// Sift g through levels starting at `from`; `None` means it reduced to
    /// the identity.
    fn sift(&self, mut g: Perm, from: usize) -> Option<(Perm, usize)> {
        for (i, level) in self.levels.iter().enumerate().skip(from) {
            let img = g.apply(level.base);
            match level.transversal.get(&img) {
                Some(rep) => g = rep.inverse().compose(&g),
                None => return Some((g, i)),
            }
        }
        if g.is_identity() {
            None
        } else {
            Some((g, self.levels.len()))
        }
    }

    /// Store a generator known to fix the first `lvl` base points.
    fn place_generator(&mut self, g: Perm, lvl: usize) {
        if lvl == self.levels.len() {
            let base = (0..self.degree as u32)
                .find(|&p| g.apply(p) != p)
                .expect("non-identity permutation moves a point");
            self.levels.push(Level::new(self.degree, base));
        }
        self.levels[lvl].owned.push(g);
    }

    /// Fixpoint closure. A level's orbit runs over the cumulative generator
    /// set (everything owned at that level or deeper fixes all earlier base
    /// points), and every Schreier generator must sift to the identity
    /// through the deeper chain. Residues found during a sweep are placed
    /// immediately; sweeps repeat until one runs clean.
    fn close(&mut self) {
        loop {
            let mut placed = false;
            let mut lvl = 0;
            while lvl < self.levels.len() {
                let mut acting: Vec<Perm> = Vec::new();
                let mut seen: HashSet<&Perm> = HashSet::new();
                for l in &self.levels[lvl..] {
                    for g in &l.owned {
                        if seen.insert(g) {
                            acting.push(g.clone());
                        }
                    }
                }
                self.levels[lvl].acting = acting;
                self.levels[lvl].extend_orbit();
                let points: Vec<u32> = self.levels[lvl].transversal.keys().copied().collect();
                let gens = self.levels[lvl].acting.clone();
                for p in &points {
                    let rep = self.levels[lvl].transversal[p].clone();
                    for g in &gens {
                        let q = g.apply(*p);
                        let rep_q = self.levels[lvl].transversal[&q].clone();
                        let schreier = rep_q.inverse().compose(&g.compose(&rep));
                        if let Some((h, m)) = self.sift(schreier, lvl + 1) {
                            self.place_generator(h, m);
                            placed = true;
                        }
                    }
                }
                lvl += 1;
            }
            if !placed {
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize, pts: &[u32]) -> Perm {
        let mut v: Vec<u32> = (0..n as u32).collect();
        for w in 0..pts.len() {
            v[pts[w] as usize] = pts[(w + 1) % pts.len()];
        }
        Perm(v)
    }

    #[test]
    fn s5_order() {
        let gens = vec![cycle(5, &[0, 1]), cycle(5, &[0, 1, 2, 3, 4])];
        assert_eq!(StabChain::new(&gens).order(), 120);
        assert_eq!(enumerate_group(&gens, 1000).unwrap().len(), 120);
    }

    #[test]
    fn membership() {
        // A4 = even permutations of 4 points
        let gens = vec![cycle(4, &[0, 1, 2]), cycle(4, &[1, 2, 3])];
        let chain = StabChain::new(&gens);
        assert_eq!(chain.order(), 12);
        assert!(chain.contains(&cycle(4, &[0, 1, 2])));
        assert!(!chain.contains(&cycle(4, &[0, 1])));
    }

    #[test]
    fn set_stabilizer_in_s4() {
        let gens = vec![cycle(4, &[0, 1]), cycle(4, &[0, 1, 2, 3])];
        // stabilizer of {0,1} in S4 is S2 x S2 of order 4
        let stab = set_stabilizer_gens(&gens, &[0, 1]);
        assert_eq!(StabChain::new(&stab).order(), 4);
        assert_eq!(set_orbit_transversal(&gens, &[0, 1]).len(), 6);
    }
}

impl StabChain {
    /// Development aid: dump bases, orbit sizes, and check level invariants.
    pub fn debug_dump(&self) {
        for (i, l) in self.levels.iter().enumerate() {
            println!(
                "level {i}: base {} orbit {} gens {}",
                l.base,
                l.transversal.len(),
                l.owned.len()
            );
            for g in &l.owned {
                for e in self.levels.iter().take(i) {
                    if g.apply(e.base) != e.base {
                        println!("  INVARIANT BROKEN: gen moves earlier base {}", e.base);
                    }
                }
            }
            for (p, rep) in &l.transversal {
                if rep.apply(l.base) != *p {
                    println!("  BAD TRANSVERSAL at {p}");
                }
            }
        }
    }
}

impl StabChain {
    /// Development aid: verify the Schreier closure at every level.
    pub fn debug_verify_closure(&self) -> usize {
        let mut bad = 0;
        for lvl in 0..self.levels.len() {
            let l = &self.levels[lvl];
            for (p, rep) in &l.transversal {
                for g in &l.acting {
                    let q = g.apply(*p);
                    let rep_q = &l.transversal[&q];
                    let schreier = rep_q.inverse().compose(&g.compose(rep));
                    if self.sift(schreier, lvl + 1).is_some() {
                        bad += 1;
                    }
                }
            }
        }
        bad
    }
}
