//! Exact arithmetic for cyclotomic polynomials and generic orders.
//!
//! A *generic order* is a sign times a power of q times a product of
//! cyclotomic polynomials `Phi_d(q)`; evaluated at a prime power q it gives
//! the order of a finite reductive group or torus. [`CycProduct`] stores that
//! shape exactly, [`IntPoly`] is its expanded form.

use crate::error::{Error, Result};
use std::collections::BTreeMap;
use std::fmt;

/// Dense integer polynomial, coefficients ascending by degree.
///
/// Invariant: the leading coefficient is nonzero unless the polynomial is
/// zero (empty coefficient vector).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntPoly {
    coeffs: Vec<i128>,
}

impl IntPoly {
    pub fn zero() -> IntPoly {
        IntPoly { coeffs: vec![] }
    }

    pub fn one() -> IntPoly {
        IntPoly { coeffs: vec![1] }
    }

    pub fn x() -> IntPoly {
        IntPoly { coeffs: vec![0, 1] }
    }

    pub fn from_coeffs(mut coeffs: Vec<i128>) -> IntPoly {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    /// `X^n - 1`.
    pub fn x_pow_minus_one(n: usize) -> IntPoly {
        let mut c = vec![0i128; n + 1];
        c[0] = -1;
        c[n] = 1;
        IntPoly { coeffs: c }
    }

    pub fn coeffs(&self) -> &[i128] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> i128 {
        *self.coeffs.last().unwrap_or(&0)
    }

    pub fn constant(&self) -> i128 {
        *self.coeffs.first().unwrap_or(&0)
    }

    pub fn mul(&self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![0i128; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j]
                    .checked_add(a.checked_mul(b).expect("poly mul overflow"))
                    .expect("poly mul overflow");
            }
        }
        IntPoly::from_coeffs(out)
    }

    /// Exact division; `None` when `rhs` does not divide `self` over Z.
    pub fn div_exact(&self, rhs: &IntPoly) -> Option<IntPoly> {
        assert!(!rhs.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(IntPoly::zero());
        }
        if self.degree() < rhs.degree() {
            return None;
        }
        let mut rem = self.coeffs.clone();
        let mut quo = vec![0i128; self.degree() - rhs.degree() + 1];
        let lead = rhs.leading();
        for k in (0..quo.len()).rev() {
            let top = rem[k + rhs.degree()];
            if top == 0 {
                continue;
            }
            if top % lead != 0 {
                return None;
            }
            let f = top / lead;
            quo[k] = f;
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                rem[k + j] -= f * b;
            }
        }
        if rem.iter().any(|&c| c != 0) {
            return None;
        }
        Some(IntPoly::from_coeffs(quo))
    }

    /// Evaluate at an integer point.
    pub fn eval(&self, x: i128) -> i128 {
        let mut acc = 0i128;
        for &c in self.coeffs.iter().rev() {
            acc = acc
                .checked_mul(x)
                .and_then(|v| v.checked_add(c))
                .expect("poly eval overflow");
        }
        acc
    }

    /// Evaluate modulo m (m > 0).
    pub fn eval_mod(&self, x: i64, m: i64) -> i64 {
        let m = m as i128;
        let x = (x as i128).rem_euclid(m);
        let mut acc = 0i128;
        for &c in self.coeffs.iter().rev() {
            acc = (acc * x + c.rem_euclid(m)).rem_euclid(m);
        }
        acc as i64
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
                first = false;
            } else if c < 0 {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let a = c.abs();
            match i {
                0 => write!(f, "{a}")?,
                1 => {
                    if a != 1 {
                        write!(f, "{a}")?;
                    }
                    write!(f, "X")?;
                }
                _ => {
                    if a != 1 {
                        write!(f, "{a}")?;
                    }
                    write!(f, "X^{i}")?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Euler's totient.
pub fn euler_phi(mut n: u64) -> u64 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// The d-th cyclotomic polynomial, by dividing `X^d - 1` by all proper
/// cyclotomic divisors. Memoized per thread; the verification scans evaluate
/// the same small handful of polynomials millions of times.
pub fn cyclotomic(d: u32) -> IntPoly {
    thread_local! {
        static CACHE: std::cell::RefCell<std::collections::HashMap<u32, IntPoly>> =
            std::cell::RefCell::new(std::collections::HashMap::new());
    }
    assert!(d >= 1);
    if let Some(hit) = CACHE.with(|c| c.borrow().get(&d).cloned()) {
        return hit;
    }
    let mut num = IntPoly::x_pow_minus_one(d as usize);
    for e in 1..d {
        if d % e == 0 {
            num = num
                .div_exact(&cyclotomic(e))
                .expect("cyclotomic division is exact");
        }
    }
    CACHE.with(|c| c.borrow_mut().insert(d, num.clone()));
    num
}

/// A generic order: `sign * X^x_power * prod_d Phi_d(X)^m_d`.
///
/// Factors are kept in a BTreeMap so the canonical form orders indices
/// ascending and equality is structural.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycProduct {
    pub sign: i8,
    pub x_power: u32,
    factors: BTreeMap<u32, u32>,
}

impl CycProduct {
    pub fn one() -> CycProduct {
        CycProduct {
            sign: 1,
            x_power: 0,
            factors: BTreeMap::new(),
        }
    }

    pub fn new(sign: i8, x_power: u32, factors: impl IntoIterator<Item = (u32, u32)>) -> CycProduct {
        assert!(sign == 1 || sign == -1);
        let mut map = BTreeMap::new();
        for (d, m) in factors {
            if m > 0 {
                *map.entry(d).or_insert(0) += m;
            }
        }
        CycProduct {
            sign,
            x_power,
            factors: map,
        }
    }

    /// Single factor `Phi_d`.
    pub fn phi(d: u32) -> CycProduct {
        CycProduct::new(1, 0, [(d, 1)])
    }

    pub fn factors(&self) -> &BTreeMap<u32, u32> {
        &self.factors
    }

    pub fn multiplicity(&self, d: u32) -> u32 {
        self.factors.get(&d).copied().unwrap_or(0)
    }

    pub fn is_one(&self) -> bool {
        self.sign == 1 && self.x_power == 0 && self.factors.is_empty()
    }

    /// Degree of the expansion.
    pub fn degree(&self) -> usize {
        self.x_power as usize
            + self
                .factors
                .iter()
                .map(|(&d, &m)| euler_phi(d as u64) as usize * m as usize)
                .sum::<usize>()
    }

    pub fn mul(&self, rhs: &CycProduct) -> CycProduct {
        let mut factors = self.factors.clone();
        for (&d, &m) in &rhs.factors {
            *factors.entry(d).or_insert(0) += m;
        }
        CycProduct {
            sign: self.sign * rhs.sign,
            x_power: self.x_power + rhs.x_power,
            factors,
        }
    }

    /// Exact division; `None` when some multiplicity would go negative.
    pub fn div(&self, rhs: &CycProduct) -> Option<CycProduct> {
        if rhs.x_power > self.x_power {
            return None;
        }
        let mut factors = self.factors.clone();
        for (&d, &m) in &rhs.factors {
            let cur = factors.get_mut(&d)?;
            if *cur < m {
                return None;
            }
            *cur -= m;
            if *cur == 0 {
                factors.remove(&d);
            }
        }
        Some(CycProduct {
            sign: self.sign * rhs.sign,
            x_power: self.x_power - rhs.x_power,
            factors,
        })
    }

    pub fn expand(&self) -> IntPoly {
        let mut p = IntPoly::from_coeffs(vec![self.sign as i128]);
        let mut xs = vec![0i128; self.x_power as usize + 1];
        *xs.last_mut().unwrap() = 1;
        p = p.mul(&IntPoly::from_coeffs(xs));
        for (&d, &m) in &self.factors {
            let phi = cyclotomic(d);
            for _ in 0..m {
                p = p.mul(&phi);
            }
        }
        p
    }

    /// Evaluate at an integer q.
    pub fn eval(&self, q: i128) -> i128 {
        let mut acc = self.sign as i128;
        for _ in 0..self.x_power {
            acc = acc.checked_mul(q).expect("eval overflow");
        }
        for (&d, &m) in &self.factors {
            let v = cyclotomic(d).eval(q);
            for _ in 0..m {
                acc = acc.checked_mul(v).expect("eval overflow");
            }
        }
        acc
    }

    /// Projection onto the factor `Phi_e`; sign and q-power are dropped.
    pub fn phi_e_part(&self, e: u32) -> CycProduct {
        match self.factors.get(&e) {
            Some(&m) => CycProduct::new(1, 0, [(e, m)]),
            None => CycProduct::one(),
        }
    }

    /// Render in the stable textual form, e.g. `q^4.P1^2.P3`.
    pub fn render(&self) -> String {
        let mut parts = Vec::new();
        if self.x_power > 0 {
            parts.push(if self.x_power == 1 {
                "q".to_string()
            } else {
                format!("q^{}", self.x_power)
            });
        }
        for (&d, &m) in &self.factors {
            parts.push(if m == 1 {
                format!("P{d}")
            } else {
                format!("P{d}^{m}")
            });
        }
        let body = if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join(".")
        };
        if self.sign < 0 {
            format!("-{body}")
        } else {
            body
        }
    }

    /// Parse the output of [`CycProduct::render`].
    pub fn parse(s: &str) -> Result<CycProduct> {
        let bad = || Error::Schema {
            file: "<inline>".into(),
            line: 0,
            msg: format!("bad generic order string {s:?}"),
        };
        let (sign, body) = match s.strip_prefix('-') {
            Some(rest) => (-1i8, rest),
            None => (1i8, s),
        };
        if body == "1" {
            return Ok(CycProduct {
                sign,
                x_power: 0,
                factors: BTreeMap::new(),
            });
        }
        let mut x_power = 0u32;
        let mut factors = BTreeMap::new();
        for part in body.split('.') {
            let (base, exp) = match part.split_once('^') {
                Some((b, e)) => (b, e.parse::<u32>().map_err(|_| bad())?),
                None => (part, 1),
            };
            if base == "q" {
                x_power += exp;
            } else if let Some(d) = base.strip_prefix('P') {
                let d: u32 = d.parse().map_err(|_| bad())?;
                if d == 0 {
                    return Err(bad());
                }
                *factors.entry(d).or_insert(0) += exp;
            } else {
                return Err(bad());
            }
        }
        factors.retain(|_, m| *m > 0);
        Ok(CycProduct {
            sign,
            x_power,
            factors,
        })
    }
}

impl fmt::Debug for CycProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

impl fmt::Display for CycProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

/// Factor an integer polynomial as a generic order.
///
/// Trial division by `Phi_d` for every d whose totient fits the remaining
/// degree; degrees in this crate stay below 250, so the quadratic bound on d
/// is irrelevant in practice.
pub fn factor_generic_order(p: &IntPoly) -> Result<CycProduct> {
    if p.is_zero() {
        return Err(Error::NotCyclotomicProduct("zero polynomial".into()));
    }
    let sign = if p.leading() < 0 { -1i8 } else { 1 };
    let mut rem = if sign < 0 {
        p.mul(&IntPoly::from_coeffs(vec![-1]))
    } else {
        p.clone()
    };
    // strip the power of X
    let x_power = rem.coeffs().iter().take_while(|&&c| c == 0).count() as u32;
    if x_power > 0 {
        rem = IntPoly::from_coeffs(rem.coeffs()[x_power as usize..].to_vec());
    }
    let mut factors = BTreeMap::new();
    let mut d = 1u32;
    while rem.degree() > 0 {
        let deg = rem.degree() as u64;
        // phi(d) >= sqrt(d/2), so beyond 2*deg^2 + 2 no factor can fit
        if u64::from(d) > 2 * deg * deg + 2 {
            return Err(Error::NotCyclotomicProduct(rem.to_string()));
        }
        if euler_phi(d as u64) <= deg {
            let phi = cyclotomic(d);
            while let Some(q) = rem.div_exact(&phi) {
                *factors.entry(d).or_insert(0) += 1;
                rem = q;
                if rem.degree() == 0 {
                    break;
                }
            }
        }
        d += 1;
    }
    if rem.coeffs() != [1] {
        return Err(Error::NotCyclotomicProduct(rem.to_string()));
    }
    Ok(CycProduct {
        sign,
        x_power,
        factors,
    })
}

fn mod_pow(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

/// Multiplicative order of q modulo the prime `ell`.
pub fn multiplicative_order(q: i64, ell: i64) -> Result<u32> {
    assert!(q >= 2 && ell >= 2);
    if q % ell == 0 {
        return Err(Error::BadModulus { q, ell });
    }
    let l = ell as u64;
    let qm = (q as u64) % l;
    // order divides ell - 1; walk its divisors
    let mut best = l - 1;
    let mut d = 1u64;
    while d * d <= l - 1 {
        if (l - 1) % d == 0 {
            for cand in [d, (l - 1) / d] {
                if cand < best && mod_pow(qm, cand, l) == 1 {
                    best = cand;
                }
            }
        }
        d += 1;
    }
    debug_assert_eq!(mod_pow(qm, best, l), 1);
    Ok(best as u32)
}

/// Sectional rank of the Sylow ell-subgroup of a torus with generic order `t`
/// evaluated at q: the number of factors `Phi_d(q)` (with multiplicity)
/// divisible by ell.
pub fn ell_adic_rank(t: &CycProduct, ell: i64, q: i64) -> Result<u32> {
    if q % ell == 0 {
        return Err(Error::BadModulus { q, ell });
    }
    let mut rank = 0;
    for (&d, &m) in t.factors() {
        if cyclotomic(d).eval_mod(q, ell) == 0 {
            rank += m;
        }
    }
    Ok(rank)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cyclotomics() {
        assert_eq!(cyclotomic(1).coeffs(), &[-1, 1]);
        assert_eq!(cyclotomic(2).coeffs(), &[1, 1]);
        assert_eq!(cyclotomic(3).coeffs(), &[1, 1, 1]);
        assert_eq!(cyclotomic(6).coeffs(), &[1, -1, 1]);
        // derived: divide X^12 - 1 by the proper cyclotomic divisors
        let mut q = IntPoly::x_pow_minus_one(12);
        for d in [1u32, 2, 3, 4, 6] {
            q = q.div_exact(&cyclotomic(d)).unwrap();
        }
        assert_eq!(q, cyclotomic(12));
        assert_eq!(cyclotomic(12).coeffs(), &[1, 0, -1, 0, 1]);
    }

    #[test]
    fn product_identity_to_60() {
        for n in 1..=60u32 {
            let mut prod = IntPoly::one();
            for d in 1..=n {
                if n % d == 0 {
                    prod = prod.mul(&cyclotomic(d));
                }
            }
            assert_eq!(prod, IntPoly::x_pow_minus_one(n as usize), "n = {n}");
        }
    }

    #[test]
    fn factor_simple_products() {
        // X^3 - X = X(X-1)(X+1)
        let p = IntPoly::from_coeffs(vec![0, -1, 0, 1]);
        let f = factor_generic_order(&p).unwrap();
        assert_eq!(f, CycProduct::new(1, 1, [(1, 1), (2, 1)]));
        // (X^2+X+1)^2
        let f = factor_generic_order(&cyclotomic(3).mul(&cyclotomic(3))).unwrap();
        assert_eq!(f, CycProduct::new(1, 0, [(3, 2)]));
        // derived: Phi_5 * Phi_1 multiplied out and refactored
        let p = cyclotomic(5).mul(&cyclotomic(1));
        assert_eq!(
            factor_generic_order(&p).unwrap(),
            CycProduct::new(1, 0, [(1, 1), (5, 1)])
        );
    }

    #[test]
    fn factor_round_trip() {
        let t = CycProduct::new(-1, 3, [(1, 2), (4, 1), (12, 2)]);
        assert_eq!(factor_generic_order(&t.expand()).unwrap(), t);
    }

    #[test]
    fn factor_rejects_non_cyclotomic() {
        let p = IntPoly::from_coeffs(vec![-2, 1]); // X - 2
        assert!(matches!(
            factor_generic_order(&p),
            Err(Error::NotCyclotomicProduct(_))
        ));
    }

    #[test]
    fn orders() {
        assert_eq!(multiplicative_order(2, 7).unwrap(), 3);
        assert_eq!(multiplicative_order(8, 7).unwrap(), 1); // q = 1 mod ell
        assert_eq!(multiplicative_order(3, 13).unwrap(), 3);
        assert!(multiplicative_order(14, 7).is_err());
    }

    #[test]
    fn order_divides_ell_minus_one() {
        for ell in [3i64, 5, 7, 11, 13, 17, 19, 23] {
            for q in 2..=50i64 {
                if q % ell == 0 {
                    continue;
                }
                let e = multiplicative_order(q, ell).unwrap() as i64;
                assert_eq!((ell - 1) % e, 0, "q={q} ell={ell}");
            }
        }
    }

    /// ell | Phi_d(q) exactly when d = e * ell^k, e the order of q mod ell.
    #[test]
    fn phi_value_divisibility_pattern() {
        let primes: Vec<i64> = (2..=100).filter(|&n| (2..n).all(|d| n % d != 0)).collect();
        for &ell in &primes {
            for q in (2..=50i64).step_by(7) {
                if q % ell == 0 {
                    continue;
                }
                let e = multiplicative_order(q, ell).unwrap();
                for d in 1..=60u32 {
                    let divides = cyclotomic(d).eval_mod(q, ell) == 0;
                    let mut expect = false;
                    let mut t = d;
                    if t % e == 0 {
                        t /= e;
                        while t % (ell as u32) == 0 {
                            t /= ell as u32;
                        }
                        expect = t == 1;
                    }
                    assert_eq!(divides, expect, "ell={ell} q={q} d={d}");
                }
            }
        }
    }

    #[test]
    fn phi_part_projection() {
        let t = CycProduct::new(1, 0, [(1, 2), (3, 1)]);
        assert_eq!(t.phi_e_part(3), CycProduct::phi(3));
        assert_eq!(t.phi_e_part(4), CycProduct::one());
        // idempotent and multiplicative
        let a = CycProduct::new(1, 2, [(1, 1), (3, 2)]);
        let b = CycProduct::new(1, 0, [(3, 1), (6, 1)]);
        assert_eq!(a.phi_e_part(3).phi_e_part(3), a.phi_e_part(3));
        assert_eq!(
            a.mul(&b).phi_e_part(3),
            a.phi_e_part(3).mul(&b.phi_e_part(3))
        );
    }

    #[test]
    fn ell_adic_ranks() {
        let t = CycProduct::new(1, 0, [(3, 2)]);
        assert_eq!(ell_adic_rank(&t, 7, 2).unwrap(), 2); // Phi_3(2) = 7
        let t = CycProduct::new(1, 0, [(1, 4), (2, 2)]);
        assert_eq!(ell_adic_rank(&t, 7, 2).unwrap(), 0);
        // derived: 7 | Phi_3(4) = 21, 7 does not divide Phi_6(4) = 13
        let t = CycProduct::new(1, 0, [(3, 1), (6, 1)]);
        assert_eq!(ell_adic_rank(&t, 7, 4).unwrap(), 1);
        assert!(ell_adic_rank(&t, 7, 14).is_err());
    }

    #[test]
    fn render_parse_round_trip() {
        for t in [
            CycProduct::one(),
            CycProduct::phi(3),
            CycProduct::new(1, 4, [(1, 2), (3, 1)]),
            CycProduct::new(-1, 1, [(2, 3), (8, 1), (12, 2)]),
        ] {
            assert_eq!(CycProduct::parse(&t.render()).unwrap(), t);
        }
        assert_eq!(
            CycProduct::new(1, 4, [(1, 2), (3, 1)]).render(),
            "q^4.P1^2.P3"
        );
    }
}
