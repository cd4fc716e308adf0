//! Combinatorics of unipotent characters for classical components:
//! partitions, symbols, hook and cohook cores, counts, e-cuspidality, and
//! orbit counting for disconnected centralizers.
//!
//! Conventions. Unipotent characters of a type-A component are partitions of
//! `rank + 1`. For types B/C they are symbols of odd defect; for type D,
//! defect 0 mod 4 with degenerate symbols split into a primed pair; for
//! twisted D, defect 2 mod 4. Cuspidality at level e reduces to hook or
//! cohook removal at a translated parameter (see [`hook_param`]).

use crate::error::{Error, Result};
use crate::rootdata::Series;
use std::collections::BTreeMap;
use std::fmt;

/// Partition with weakly decreasing positive parts.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn new(mut parts: Vec<u32>) -> Partition {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    /// First-column hook lengths (the beta-set of minimal length).
    fn beta_set(&self) -> Vec<u32> {
        let n = self.0.len() as u32;
        self.0
            .iter()
            .enumerate()
            .map(|(i, &p)| p + n - 1 - i as u32)
            .collect()
    }

    fn from_beta(mut beta: Vec<u32>) -> Partition {
        beta.sort_unstable();
        let parts = beta
            .iter()
            .enumerate()
            .map(|(i, &b)| b - i as u32)
            .filter(|&p| p > 0)
            .rev()
            .collect();
        Partition(parts)
    }

    /// Does the partition have a hook of length `d`?
    pub fn has_hook(&self, d: u32) -> bool {
        let beta = self.beta_set();
        beta.iter()
            .any(|&b| b >= d && !beta.contains(&(b - d)))
    }

    /// Remove rim hooks of length `d` until none remain. Removal is
    /// confluent, so any strategy yields the same core.
    pub fn core(&self, d: u32) -> Partition {
        let mut beta = self.beta_set();
        loop {
            let mut changed = false;
            for i in 0..beta.len() {
                let b = beta[i];
                if b >= d && !beta.contains(&(b - d)) {
                    beta[i] = b - d;
                    changed = true;
                    break;
                }
            }
            if !changed {
                return Partition::from_beta(beta);
            }
        }
    }

    /// All partitions of n, lexicographically descending.
    pub fn all(n: u32) -> Vec<Partition> {
        fn rec(n: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
            if n == 0 {
                out.push(Partition(cur.clone()));
                return;
            }
            let top = max.min(n);
            for p in (1..=top).rev() {
                cur.push(p);
                rec(n - p, p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(n, n, &mut Vec::new(), &mut out);
        out
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // run-length form matching the tables: runs of three or more parts
        // print as d^k
        let mut i = 0;
        while i < self.0.len() {
            let mut j = i;
            while j < self.0.len() && self.0[j] == self.0[i] {
                j += 1;
            }
            let run = j - i;
            if run >= 3 {
                write!(f, "{}^{}", self.0[i], run)?;
            } else {
                for _ in 0..run {
                    write!(f, "{}", self.0[i])?;
                }
            }
            i = j;
        }
        Ok(())
    }
}

/// Two-row symbol in reduced form. `top` is the longer row (defect >= 0);
/// for defect 0 rows are ordered lexicographically, and a degenerate symbol
/// (equal rows) carries a prime tag 1 or 2.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Symbol {
    pub top: Vec<u32>,
    pub bot: Vec<u32>,
    /// 0 for ordinary symbols; 1 or 2 for the two halves of a degenerate one
    pub prime: u8,
}

impl Symbol {
    pub fn new(top: Vec<u32>, bot: Vec<u32>) -> Symbol {
        let mut s = Symbol {
            top,
            bot,
            prime: 0,
        };
        s.normalize();
        s
    }

    fn normalize(&mut self) {
        self.top.sort_unstable();
        self.bot.sort_unstable();
        // shift down while both rows start at 0
        while self.top.first() == Some(&0) && self.bot.first() == Some(&0) {
            self.top.remove(0);
            self.bot.remove(0);
            for x in self.top.iter_mut().chain(self.bot.iter_mut()) {
                *x -= 1;
            }
        }
        if self.top.len() < self.bot.len()
            || (self.top.len() == self.bot.len() && self.top > self.bot)
        {
            std::mem::swap(&mut self.top, &mut self.bot);
        }
    }

    pub fn defect(&self) -> u32 {
        (self.top.len() - self.bot.len()) as u32
    }

    pub fn rank(&self) -> u32 {
        let s: u32 = self.top.iter().chain(self.bot.iter()).sum();
        let k = (self.top.len() + self.bot.len()) as u32;
        let corr = if k == 0 { 0 } else { (k - 1) * (k - 1) / 4 };
        s - corr
    }

    pub fn is_degenerate(&self) -> bool {
        self.top == self.bot
    }

    /// Hook of length d: an entry x with x >= d and x - d missing from the
    /// same row.
    pub fn has_hook(&self, d: u32) -> bool {
        let row_hook = |row: &[u32]| row.iter().any(|&x| x >= d && !row.contains(&(x - d)));
        row_hook(&self.top) || row_hook(&self.bot)
    }

    /// Cohook of length d: an entry x with x >= d in one row and x - d
    /// missing from the other row.
    pub fn has_cohook(&self, d: u32) -> bool {
        self.top
            .iter()
            .any(|&x| x >= d && !self.bot.contains(&(x - d)))
            || self
                .bot
                .iter()
                .any(|&x| x >= d && !self.top.contains(&(x - d)))
    }

    /// Strip d-hooks to the core (prime tags are dropped).
    pub fn hook_core(&self, d: u32) -> Symbol {
        let mut top = self.top.clone();
        let mut bot = self.bot.clone();
        loop {
            let mut changed = false;
            for row in [&mut top, &mut bot] {
                if let Some(i) = (0..row.len())
                    .find(|&i| row[i] >= d && !row.contains(&(row[i] - d)))
                {
                    row[i] -= d;
                    changed = true;
                    break;
                }
            }
            if !changed {
                break;
            }
        }
        Symbol::new(top, bot)
    }

    /// Strip d-cohooks to the cocore (prime tags are dropped).
    pub fn cohook_core(&self, d: u32) -> Symbol {
        let mut top = self.top.clone();
        let mut bot = self.bot.clone();
        loop {
            let mut hit = None;
            for (a, b, from_top) in [(&top, &bot, true), (&bot, &top, false)] {
                if let Some(&x) = a.iter().find(|&&x| x >= d && !b.contains(&(x - d))) {
                    hit = Some((x, from_top));
                    break;
                }
            }
            match hit {
                Some((x, true)) => {
                    top.retain(|&y| y != x);
                    bot.push(x - d);
                }
                Some((x, false)) => {
                    bot.retain(|&y| y != x);
                    top.push(x - d);
                }
                None => break,
            }
        }
        Symbol::new(top, bot)
    }

    fn row_to_string(row: &[u32]) -> String {
        row.iter().map(|x| x.to_string()).collect()
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({},{})",
            Symbol::row_to_string(&self.top),
            Symbol::row_to_string(&self.bot)
        )?;
        match self.prime {
            1 => write!(f, "'"),
            2 => write!(f, "''"),
            _ => Ok(()),
        }
    }
}

/// Enumerate reduced symbols of the given rank with defect in `defects`,
/// without degenerate splitting.
fn symbols_raw(rank: u32, defects: &[u32]) -> Vec<Symbol> {
    let mut out = Vec::new();
    for &defect in defects {
        for blen in 0..=(rank as usize + 2) {
            let tlen = blen + defect as usize;
            let k = (tlen + blen) as u32;
            if k == 0 {
                if rank == 0 {
                    out.push(Symbol {
                        top: vec![],
                        bot: vec![],
                        prime: 0,
                    });
                }
                continue;
            }
            let corr = (k - 1) * (k - 1) / 4;
            let total = rank + corr;
            let min_sum = (tlen * (tlen - 1) / 2 + blen * blen.saturating_sub(1) / 2) as u32;
            if min_sum > total {
                break;
            }
            let mut tops = Vec::new();
            distinct_rows(tlen, total, &mut tops);
            for (t, tsum) in &tops {
                let bsum = total - tsum;
                let mut bots = Vec::new();
                distinct_rows(blen, bsum, &mut bots);
                for (b, s) in &bots {
                    if *s != bsum {
                        continue;
                    }
                    // reduced: not both rows contain 0
                    if t.first() == Some(&0) && b.first() == Some(&0) {
                        continue;
                    }
                    let sym = Symbol {
                        top: t.clone(),
                        bot: b.clone(),
                        prime: 0,
                    };
                    // defect-0 canonical order: top <= bot
                    if defect == 0 && sym.top > sym.bot {
                        continue;
                    }
                    debug_assert_eq!(sym.rank(), rank);
                    out.push(sym);
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Strictly increasing rows of the given length with sum <= total, paired
/// with their sums.
fn distinct_rows(len: usize, total: u32, out: &mut Vec<(Vec<u32>, u32)>) {
    fn rec(
        len: usize,
        total: u32,
        next_min: u32,
        cur: &mut Vec<u32>,
        sum: u32,
        out: &mut Vec<(Vec<u32>, u32)>,
    ) {
        if cur.len() == len {
            out.push((cur.clone(), sum));
            return;
        }
        let remaining = (len - cur.len()) as u32;
        let mut x = next_min;
        // minimal completion: x, x+1, ..., x+remaining-1
        while sum + remaining * x + remaining * (remaining - 1) / 2 <= total {
            cur.push(x);
            rec(len, total, x + 1, cur, sum + x, out);
            cur.pop();
            x += 1;
        }
    }
    rec(len, total, 0, &mut Vec::new(), 0, out);
}

/// A unipotent character label: a partition, a symbol, or a named
/// exceptional character.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum UniLabel {
    Part(Partition),
    Sym(Symbol),
    Named(String),
}

impl fmt::Display for UniLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UniLabel::Part(p) => write!(f, "phi{p}"),
            UniLabel::Sym(s) => write!(f, "{s}"),
            UniLabel::Named(n) => write!(f, "{n}"),
        }
    }
}

impl UniLabel {
    /// Parse `phi311`, `phi2^311`, `(013,13)`, `(014,)'`, or a bare name.
    /// The Unicode forms `φ_{311}` and `φ311` are accepted as well.
    pub fn parse(s: &str) -> Result<UniLabel> {
        let s = s.trim();
        let bad = || Error::Schema {
            file: "<label>".into(),
            line: 0,
            msg: format!("bad unipotent label {s:?}"),
        };
        let stripped = s
            .strip_prefix("phi")
            .or_else(|| s.strip_prefix("φ"))
            .map(|r| {
                r.strip_prefix("_{")
                    .and_then(|x| x.strip_suffix('}'))
                    .unwrap_or(r)
            });
        if let Some(body) = stripped {
            // partitions only contain digits and ^; anything else is a named
            // character like phi{1,12}'
            if !body.is_empty() && body.chars().all(|c| c.is_ascii_digit() || c == '^') {
                let mut parts = Vec::new();
                let chars: Vec<char> = body.chars().collect();
                let mut i = 0;
                while i < chars.len() {
                    let d = chars[i].to_digit(10).ok_or_else(bad)? as u32;
                    if d == 0 {
                        return Err(bad());
                    }
                    i += 1;
                    if i < chars.len() && chars[i] == '^' {
                        // single-digit exponent: partitions here have at
                        // most nine equal parts
                        i += 1;
                        let k = chars
                            .get(i)
                            .and_then(|c| c.to_digit(10))
                            .ok_or_else(bad)?;
                        if k == 0 {
                            return Err(bad());
                        }
                        i += 1;
                        for _ in 0..k {
                            parts.push(d);
                        }
                    } else {
                        parts.push(d);
                    }
                }
                return Ok(UniLabel::Part(Partition::new(parts)));
            }
            return Ok(UniLabel::Named(s.to_string()));
        }
        if let Some(rest) = s.strip_prefix('(') {
            let prime = if s.ends_with("''") {
                2
            } else if s.ends_with('\'') {
                1
            } else {
                0
            };
            let rest = rest.trim_end_matches('\'');
            let body = rest.strip_suffix(')').ok_or_else(bad)?;
            let (t, b) = body.split_once(',').ok_or_else(bad)?;
            let digits = |r: &str| -> Result<Vec<u32>> {
                r.chars()
                    .map(|c| c.to_digit(10).ok_or_else(bad))
                    .collect()
            };
            let mut sym = Symbol::new(digits(t)?, digits(b)?);
            sym.prime = prime;
            return Ok(UniLabel::Sym(sym));
        }
        if s == "1" {
            // the trivial character of a torus
            return Ok(UniLabel::Named("1".into()));
        }
        Ok(UniLabel::Named(s.to_string()))
    }
}

/// One classical or exceptional component of a possibly disconnected
/// centralizer, with its field twist: `kind(q^field_power)` twisted by
/// `twisted` (unitary / twisted-D flavor) where applicable.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct ComponentForm {
    pub series: Series,
    pub rank: usize,
    /// 1 for untwisted, 2 for 2A/2D/2E6, 3 for 3D4
    pub twist: u8,
    /// k in X(q^k)
    pub field_power: u32,
    /// display marker for short-root subsystems (printed with a tilde)
    pub short: bool,
}

impl ComponentForm {
    pub fn new(series: Series, rank: usize, twist: u8, field_power: u32) -> ComponentForm {
        ComponentForm {
            series,
            rank,
            twist,
            field_power,
            short: false,
        }
    }

    pub fn name(&self) -> String {
        let tw = match self.twist {
            2 => "2",
            3 => "3",
            _ => "",
        };
        let tilde = if self.short { "~" } else { "" };
        let field = match self.field_power {
            1 => "(q)".to_string(),
            k => format!("(q^{k})"),
        };
        format!("{tw}{}{}{tilde}{field}", self.series.letter(), self.rank)
    }
}

/// Effective hook parameter for a component at level e, and whether hooks or
/// cohooks govern cuspidality.
///
/// A component defined over `q^k` sees level `d = e / gcd(e, k)` over its own
/// field. Untwisted type A uses d-hooks. Twisted A uses d'-hooks with the
/// Ennola-translated parameter d' (2d for odd d, d/2 for d = 2 mod 4, d
/// otherwise). Types B/C/D use d-hooks for odd d and (d/2)-cohooks for even
/// d; twisted D follows the same rule on its own symbol family.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum HookRule {
    Hooks(u32),
    Cohooks(u32),
}

pub fn hook_param(c: &ComponentForm, e: u32) -> Result<HookRule> {
    let k = c.field_power;
    let d = e / gcd(e, k);
    match (c.series, c.twist) {
        (Series::A, 1) => Ok(HookRule::Hooks(d)),
        (Series::A, 2) => {
            let d2 = if d % 2 == 1 {
                2 * d
            } else if d % 4 == 2 {
                d / 2
            } else {
                d
            };
            Ok(HookRule::Hooks(d2))
        }
        (Series::B | Series::C | Series::D, 1) | (Series::D, 2) => {
            if d % 2 == 1 {
                Ok(HookRule::Hooks(d))
            } else {
                Ok(HookRule::Cohooks(d / 2))
            }
        }
        _ => Err(Error::UnsupportedComponent {
            component: c.name(),
            e,
        }),
    }
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Labels of the unipotent characters of a classical component.
/// Exceptional components are resolved through embedded data upstream.
pub fn unipotent_labels(c: &ComponentForm) -> Result<Vec<UniLabel>> {
    match (c.series, c.twist) {
        (Series::A, _) => Ok(Partition::all(c.rank as u32 + 1)
            .into_iter()
            .map(UniLabel::Part)
            .collect()),
        (Series::B | Series::C, 1) => {
            let defects: Vec<u32> = (0..=c.rank as u32 + 1).filter(|d| d % 2 == 1).collect();
            Ok(symbols_raw(c.rank as u32, &defects)
                .into_iter()
                .map(UniLabel::Sym)
                .collect())
        }
        (Series::D, 1) => {
            let defects: Vec<u32> = (0..=c.rank as u32 + 2).filter(|d| d % 4 == 0).collect();
            let mut out = Vec::new();
            for s in symbols_raw(c.rank as u32, &defects) {
                if s.is_degenerate() {
                    for prime in [1u8, 2] {
                        let mut t = s.clone();
                        t.prime = prime;
                        out.push(UniLabel::Sym(t));
                    }
                } else {
                    out.push(UniLabel::Sym(s));
                }
            }
            Ok(out)
        }
        (Series::D, 2) => {
            let defects: Vec<u32> = (0..=c.rank as u32 + 2).filter(|d| d % 4 == 2).collect();
            Ok(symbols_raw(c.rank as u32, &defects)
                .into_iter()
                .map(UniLabel::Sym)
                .collect())
        }
        _ => Err(Error::UnsupportedComponent {
            component: c.name(),
            e: 0,
        }),
    }
}

/// Number of unipotent characters of a component. Classical types count
/// partitions or symbols; exceptional types are embedded constants.
pub fn unipotent_count(c: &ComponentForm) -> Result<u64> {
    match (c.series, c.rank, c.twist) {
        (Series::D, 4, 3) => Ok(8),
        (Series::E, 6, _) => Ok(30),
        (Series::E, 7, 1) => Ok(76),
        (Series::E, 8, 1) => Ok(166),
        (Series::F, 4, 1) => Ok(37),
        (Series::G, 2, 1) => Ok(10),
        _ => Ok(unipotent_labels(c)?.len() as u64),
    }
}

/// Is the labelled unipotent character of the component e-cuspidal?
pub fn is_e_cuspidal(c: &ComponentForm, label: &UniLabel, e: u32) -> Result<bool> {
    if let UniLabel::Named(name) = label {
        if let Some(set) = exceptional_cuspidal(c, e) {
            return Ok(set.iter().any(|s| s == name));
        }
        return Err(Error::UnsupportedComponent {
            component: c.name(),
            e,
        });
    }
    let rule = hook_param(c, e)?;
    Ok(match (label, rule) {
        (UniLabel::Part(p), HookRule::Hooks(d)) => !p.has_hook(d),
        (UniLabel::Sym(s), HookRule::Hooks(d)) => !s.has_hook(d),
        (UniLabel::Sym(s), HookRule::Cohooks(d)) => !s.has_cohook(d),
        (UniLabel::Part(_), HookRule::Cohooks(_)) => unreachable!("type A has no cohooks"),
        (UniLabel::Named(_), _) => unreachable!(),
    })
}

/// All e-cuspidal labels of a component.
pub fn cuspidal_labels(c: &ComponentForm, e: u32) -> Result<Vec<UniLabel>> {
    if let Some(set) = exceptional_cuspidal(c, e) {
        return Ok(set
            .iter()
            .map(|s| UniLabel::Named(s.to_string()))
            .collect());
    }
    let labels = unipotent_labels(c)?;
    labels
        .into_iter()
        .filter_map(|l| match is_e_cuspidal(c, &l, e) {
            Ok(true) => Some(Ok(l)),
            Ok(false) => None,
            Err(e) => Some(Err(e)),
        })
        .collect()
}

/// Number of e-cuspidal unipotent characters of a component; exceptional
/// components fall back to embedded counts when the cuspidal set itself is
/// not certified.
pub fn cuspidal_count(c: &ComponentForm, e: u32) -> Result<u64> {
    if let Some(n) = exceptional_cuspidal_count(c, e) {
        return Ok(n);
    }
    Ok(cuspidal_labels(c, e)?.len() as u64)
}

/// Embedded e-cuspidal unipotent character names for exceptional
/// components, keyed by (type, twist, e-over-own-field). Only keys the
/// block tables certify are present; everything else refuses.
fn exceptional_cuspidal(c: &ComponentForm, e: u32) -> Option<Vec<&'static str>> {
    let d = e / gcd(e, c.field_power);
    match (c.series, c.rank, c.twist, d) {
        (Series::D, 4, 3, 3) => Some(vec!["3D4[-1]"]),
        (Series::D, 4, 3, 6) => Some(vec!["phi{2,1}"]),
        _ => None,
    }
}

/// Embedded cuspidal counts for exceptional components, keyed the same way;
/// provenance is the corresponding G = L line of the block tables.
fn exceptional_cuspidal_count(c: &ComponentForm, e: u32) -> Option<u64> {
    let d = e / gcd(e, c.field_power);
    match (c.series, c.rank, c.twist, d) {
        (Series::D, 4, 3, 3) => Some(1),
        (Series::D, 4, 3, 6) => Some(1),
        (Series::E, 6, 1, 3) => Some(3),
        (Series::E, 6, 1, 4) => Some(10),
        (Series::E, 6, 1, 5) => Some(20),
        (Series::E, 6, 1, 9) => Some(21),
        (Series::E, 6, 1, 12) => Some(18),
        (Series::E, 6, 2, 3) => Some(9),
        (Series::E, 6, 2, 4) => Some(10),
        (Series::E, 6, 2, 6) => Some(9),
        (Series::E, 6, 2, 12) => Some(18),
        _ => None,
    }
}

/// Orbit data of the component-group action on unipotent labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitDatum {
    /// order of the acting component group
    pub a: u64,
    /// orbit sizes, each dividing `a`, summing to the label count
    pub orbit_sizes: Vec<u64>,
}

impl OrbitDatum {
    pub fn trivial(a: u64, count: u64) -> OrbitDatum {
        OrbitDatum {
            a,
            orbit_sizes: vec![1; count as usize],
        }
    }
}

/// Size of a Lusztig series by Jordan decomposition: each orbit of size k
/// contributes a/k characters.
pub fn jordan_series_size(count: u64, od: &OrbitDatum) -> Result<u64> {
    if od.orbit_sizes.iter().sum::<u64>() != count {
        return Err(Error::InconsistentOrbits);
    }
    if od.orbit_sizes.iter().any(|&k| k == 0 || od.a % k != 0) {
        return Err(Error::InconsistentOrbits);
    }
    Ok(od.orbit_sizes.iter().map(|&k| od.a / k).sum())
}

/// Count labels of the component whose hook-rule core at level e matches
/// the given core; this is the size of the corresponding unipotent
/// e-Harish-Chandra series.
pub fn series_label_count(c: &ComponentForm, e: u32, core: &UniLabel) -> Result<u64> {
    let rule = hook_param(c, e)?;
    let labels = unipotent_labels(c)?;
    let core_of = |l: &UniLabel| -> UniLabel {
        match (l, rule) {
            (UniLabel::Part(p), HookRule::Hooks(d)) => UniLabel::Part(p.core(d)),
            (UniLabel::Sym(s), HookRule::Hooks(d)) => UniLabel::Sym(s.hook_core(d)),
            (UniLabel::Sym(s), HookRule::Cohooks(d)) => UniLabel::Sym(s.cohook_core(d)),
            _ => l.clone(),
        }
    };
    let target = core_of(core);
    Ok(labels.iter().filter(|l| core_of(l) == target).count() as u64)
}

/// Labels of a component whose core at level e matches the given core.
pub fn series_labels(c: &ComponentForm, e: u32, core: &UniLabel) -> Result<Vec<UniLabel>> {
    let rule = hook_param(c, e)?;
    let labels = unipotent_labels(c)?;
    let core_of = |l: &UniLabel| -> UniLabel {
        match (l, rule) {
            (UniLabel::Part(p), HookRule::Hooks(d)) => UniLabel::Part(p.core(d)),
            (UniLabel::Sym(s), HookRule::Hooks(d)) => UniLabel::Sym(s.hook_core(d)),
            (UniLabel::Sym(s), HookRule::Cohooks(d)) => UniLabel::Sym(s.cohook_core(d)),
            _ => l.clone(),
        }
    };
    let target = core_of(core);
    Ok(labels.into_iter().filter(|l| core_of(l) == target).collect())
}

/// The series through the Sylow e-torus of the component: the labels whose
/// core class has maximal weight (smallest core). Returns one label list
/// per minimal core class.
pub fn sylow_series_labels(c: &ComponentForm, e: u32) -> Result<Vec<Vec<UniLabel>>> {
    let rule = hook_param(c, e)?;
    let labels = unipotent_labels(c)?;
    let core_of = |l: &UniLabel| -> UniLabel {
        match (l, rule) {
            (UniLabel::Part(p), HookRule::Hooks(d)) => UniLabel::Part(p.core(d)),
            (UniLabel::Sym(s), HookRule::Hooks(d)) => UniLabel::Sym(s.hook_core(d)),
            (UniLabel::Sym(s), HookRule::Cohooks(d)) => UniLabel::Sym(s.cohook_core(d)),
            _ => l.clone(),
        }
    };
    let size_of = |l: &UniLabel| -> u32 {
        match l {
            UniLabel::Part(p) => p.size(),
            UniLabel::Sym(s) => s.rank(),
            UniLabel::Named(_) => 0,
        }
    };
    let mut by_core: BTreeMap<UniLabel, Vec<UniLabel>> = BTreeMap::new();
    for l in labels {
        by_core.entry(core_of(&l)).or_default().push(l);
    }
    let min_size = by_core.keys().map(size_of).min().unwrap_or(0);
    Ok(by_core
        .into_iter()
        .filter(|(k, _)| size_of(k) == min_size)
        .map(|(_, v)| v)
        .collect())
}

/// Partition the labels of a component into e-series by shared core;
/// returns (core, member count) pairs sorted by core.
pub fn series_partition(c: &ComponentForm, e: u32) -> Result<Vec<(UniLabel, u64)>> {
    let rule = hook_param(c, e)?;
    let labels = unipotent_labels(c)?;
    let mut map: BTreeMap<UniLabel, u64> = BTreeMap::new();
    for l in &labels {
        let core = match (l, rule) {
            (UniLabel::Part(p), HookRule::Hooks(d)) => UniLabel::Part(p.core(d)),
            (UniLabel::Sym(s), HookRule::Hooks(d)) => UniLabel::Sym(s.hook_core(d)),
            (UniLabel::Sym(s), HookRule::Cohooks(d)) => UniLabel::Sym(s.cohook_core(d)),
            _ => l.clone(),
        };
        *map.entry(core).or_insert(0) += 1;
    }
    Ok(map.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(n: usize) -> ComponentForm {
        ComponentForm::new(Series::A, n, 1, 1)
    }

    fn b(n: usize) -> ComponentForm {
        ComponentForm::new(Series::B, n, 1, 1)
    }

    #[test]
    fn partition_counts() {
        assert_eq!(Partition::all(3).len(), 3);
        assert_eq!(Partition::all(8).len(), 22);
        assert_eq!(unipotent_count(&a(2)).unwrap(), 3);
    }

    #[test]
    fn partition_parse_print() {
        for (s, parts) in [
            ("phi311", vec![3, 1, 1]),
            ("phi2^311", vec![2, 2, 2, 1, 1]),
            ("phi1^8", vec![1; 8]),
            ("phi21^6", vec![2, 1, 1, 1, 1, 1, 1]),
            ("phi22", vec![2, 2]),
        ] {
            let l = UniLabel::parse(s).unwrap();
            assert_eq!(l, UniLabel::Part(Partition::new(parts)));
            assert_eq!(UniLabel::parse(&l.to_string()).unwrap(), l);
        }
        assert_eq!(
            UniLabel::parse("φ_{21}").unwrap(),
            UniLabel::Part(Partition::new(vec![2, 1]))
        );
        assert_eq!(
            UniLabel::parse("(013,13)").unwrap().to_string(),
            "(013,13)"
        );
        assert_eq!(UniLabel::parse("(12,12)''").unwrap().to_string(), "(12,12)''");
        assert_eq!(UniLabel::parse("3D4[-1]").unwrap().to_string(), "3D4[-1]");
    }

    #[test]
    fn symbol_counts_match_classical_values() {
        // B2: 6 unipotent characters, B4: 25, C3: 12, D4: 14, 2D4: 10
        assert_eq!(unipotent_count(&b(2)).unwrap(), 6);
        assert_eq!(unipotent_count(&b(4)).unwrap(), 25);
        assert_eq!(
            unipotent_count(&ComponentForm::new(Series::C, 3, 1, 1)).unwrap(),
            12
        );
        assert_eq!(
            unipotent_count(&ComponentForm::new(Series::D, 4, 1, 1)).unwrap(),
            14
        );
        assert_eq!(
            unipotent_count(&ComponentForm::new(Series::D, 4, 2, 1)).unwrap(),
            10
        );
    }

    #[test]
    fn symbol_count_independent_of_shift() {
        // enumerate B4 symbols, shift every one up once, re-normalize, and
        // check the set bijects
        let syms = symbols_raw(4, &[1, 3, 5]);
        let shifted: std::collections::BTreeSet<Symbol> = syms
            .iter()
            .map(|s| {
                let top: Vec<u32> = std::iter::once(0)
                    .chain(s.top.iter().map(|x| x + 1))
                    .collect();
                let bot: Vec<u32> = std::iter::once(0)
                    .chain(s.bot.iter().map(|x| x + 1))
                    .collect();
                Symbol::new(top, bot)
            })
            .collect();
        assert_eq!(shifted.len(), syms.len());
        for s in &syms {
            assert!(shifted.contains(s));
        }
    }

    #[test]
    fn hook_cores_confluent() {
        // remove hooks in every order for all partitions of n <= 12 and
        // check the core is unique
        for n in 1..=12u32 {
            for p in Partition::all(n) {
                for d in 2..=5u32 {
                    let core = p.core(d);
                    // alternative order: strip from the largest beta entry
                    let mut beta = p.beta_set();
                    loop {
                        beta.sort_unstable_by(|x, y| y.cmp(x));
                        let mut changed = false;
                        for i in (0..beta.len()).rev() {
                            let bv = beta[i];
                            if bv >= d && !beta.contains(&(bv - d)) {
                                beta[i] = bv - d;
                                changed = true;
                                break;
                            }
                        }
                        if !changed {
                            break;
                        }
                    }
                    assert_eq!(Partition::from_beta(beta), core, "p={p} d={d}");
                }
            }
        }
    }

    #[test]
    fn a_type_cuspidality() {
        // partitions of 3: none are 3-cores
        let c = a(2);
        for l in unipotent_labels(&c).unwrap() {
            assert!(!is_e_cuspidal(&c, &l, 3).unwrap());
        }
        // A1: both characters are 3-cuspidal
        let c = a(1);
        for l in unipotent_labels(&c).unwrap() {
            assert!(is_e_cuspidal(&c, &l, 3).unwrap());
        }
        // 4-cores of 4: exactly (22)
        let c = a(3);
        let cusp = cuspidal_labels(&c, 4).unwrap();
        assert_eq!(cusp, vec![UniLabel::Part(Partition::new(vec![2, 2]))]);
    }

    #[test]
    fn twisted_a_cuspidality() {
        // 2A2 at e = 3: all three characters cuspidal (6-hooks on size 3)
        let c = ComponentForm::new(Series::A, 2, 2, 1);
        assert_eq!(cuspidal_count(&c, 3).unwrap(), 3);
        // 2A2 at e = 6: parameter 3; no partition of 3 is a 3-core
        assert_eq!(cuspidal_count(&c, 6).unwrap(), 0);
        // 2A2 at e = 1: parameter 2; only (21) is a 2-core
        assert_eq!(
            cuspidal_labels(&c, 1).unwrap(),
            vec![UniLabel::Part(Partition::new(vec![2, 1]))]
        );
        // 2A3 at e = 4: parameter 4; only (22)
        let c = ComponentForm::new(Series::A, 3, 2, 1);
        assert_eq!(
            cuspidal_labels(&c, 4).unwrap(),
            vec![UniLabel::Part(Partition::new(vec![2, 2]))]
        );
    }

    #[test]
    fn b2_cuspidality_at_4() {
        // (12,0) and (01,2) have no 2-cohooks
        let c = b(2);
        let cusp = cuspidal_labels(&c, 4).unwrap();
        let expect: Vec<UniLabel> = ["(12,0)", "(01,2)"]
            .iter()
            .map(|s| UniLabel::parse(s).unwrap())
            .collect();
        assert_eq!(
            cusp.iter().collect::<std::collections::BTreeSet<_>>(),
            expect.iter().collect()
        );
    }

    #[test]
    fn b4_counts_from_the_tables() {
        // 13 of the 25 symbols are 3-cuspidal; exactly 3 are 4-cuspidal
        let c = b(4);
        assert_eq!(cuspidal_count(&c, 3).unwrap(), 13);
        let cusp4 = cuspidal_labels(&c, 4).unwrap();
        let expect: std::collections::BTreeSet<UniLabel> = ["(13,1)", "(013,13)", "(014,12)"]
            .iter()
            .map(|s| UniLabel::parse(s).unwrap())
            .collect();
        assert_eq!(cusp4.into_iter().collect::<std::collections::BTreeSet<_>>(), expect);
    }

    #[test]
    fn twisted_d4_cuspidal_at_3() {
        let c = ComponentForm::new(Series::D, 4, 2, 1);
        assert_eq!(cuspidal_count(&c, 3).unwrap(), 4);
    }

    #[test]
    fn d4_cuspidal_at_3() {
        // 8 three-cuspidal labels, matching the D4-centralizer line count
        let c = ComponentForm::new(Series::D, 4, 1, 1);
        assert_eq!(cuspidal_count(&c, 3).unwrap(), 8);
    }

    #[test]
    fn jordan_counts() {
        // D4 with a = 3: two orbits of order 3 and 8 trivial orbits -> 26
        let od = OrbitDatum {
            a: 3,
            orbit_sizes: vec![3, 3, 1, 1, 1, 1, 1, 1, 1, 1],
        };
        assert_eq!(jordan_series_size(14, &od).unwrap(), 26);
        // connected centralizer: series size equals the count
        let od = OrbitDatum::trivial(1, 25);
        assert_eq!(jordan_series_size(25, &od).unwrap(), 25);
        // mismatched orbit sizes are rejected
        let od = OrbitDatum {
            a: 3,
            orbit_sizes: vec![3, 3],
        };
        assert!(jordan_series_size(14, &od).is_err());
    }

    #[test]
    fn cyclic_orbit_count_on_a2_cubed() {
        // brute force: the cyclic rotation on triples of A2-labels has 3
        // fixed points and 8 orbits of size 3, giving 8 + 9 = 17
        let labels = Partition::all(3);
        let mut orbits: std::collections::BTreeSet<Vec<&Partition>> = Default::default();
        let mut sizes = Vec::new();
        for x in &labels {
            for y in &labels {
                for z in &labels {
                    let mut reps = [vec![x, y, z], vec![y, z, x], vec![z, x, y]];
                    reps.sort();
                    if orbits.insert(reps[0].clone()) {
                        let k = if x == y && y == z { 1 } else { 3 };
                        sizes.push(k);
                    }
                }
            }
        }
        let od = OrbitDatum {
            a: 3,
            orbit_sizes: sizes,
        };
        assert_eq!(jordan_series_size(27, &od).unwrap(), 17);
    }

    #[test]
    fn series_counts_for_a7() {
        // partitions of 8 by 3-core: the (2)- and (11)-core series have 9
        // labels each, the (311)-core series 3, and (4211) is cuspidal
        let c = a(7);
        assert_eq!(
            series_label_count(&c, 3, &UniLabel::Part(Partition::new(vec![2]))).unwrap(),
            9
        );
        assert_eq!(
            series_label_count(&c, 3, &UniLabel::Part(Partition::new(vec![3, 1, 1]))).unwrap(),
            3
        );
        let parts = series_partition(&c, 3).unwrap();
        let total: u64 = parts.iter().map(|(_, n)| n).sum();
        assert_eq!(total, 22);
        // 6-core structure at e = 3 for the twisted form: 10 cuspidal
        let c2 = ComponentForm::new(Series::A, 7, 2, 1);
        assert_eq!(cuspidal_count(&c2, 3).unwrap(), 10);
    }
}
