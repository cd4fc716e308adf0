//! Acceptance suite: one test per criterion, each printing a pass/fail line.
//!
//! The heavy exceptional-group reproductions (E6, E7 line sets) run through
//! the same machinery via `genord verify --suite e6|e7`; the timed criteria
//! here stay within the stated budgets in an unoptimized build.

use genord::cyclo::{cyclotomic, CycProduct, IntPoly};
use genord::dataset::{series_size_solve, Dataset};
use genord::decompose::{norm_decompose_series, solve, solve_by_enumeration, DecompositionProblem};
use genord::frac::Rat;
use genord::perm::Perm;
use genord::rootdata::{parabolic_classes, GroupLabel, RootSystem};
use genord::unipotent::Partition;
use genord::verify::{verify_e_cuspidal_lines, verify_partition, Status, VerifyContext};
use std::collections::BTreeSet;
use std::time::Instant;

fn announce(criterion: &str, ok: bool) {
    println!("acceptance {}: {}", criterion, if ok { "pass" } else { "FAIL" });
    assert!(ok, "criterion failed: {criterion}");
}

/// Criterion 1: `cuspidal F4 --e 3` and `--e 4` reproduce every line of the
/// F4 block table, under 60 seconds.
#[test]
fn criterion_1_f4_table_reproduction() {
    let start = Instant::now();
    let ds = Dataset::load().unwrap();
    let mut ctx = VerifyContext::new("F4").unwrap();
    let mut all_pass = true;
    let mut n_lines = 0;
    for e in [3u32, 4] {
        for r in verify_e_cuspidal_lines(&ds, &mut ctx, "F4", e) {
            if r.status != Status::Pass {
                eprintln!("{}", r.render());
                all_pass = false;
            }
        }
        n_lines += ds.lines_for("F4", e).len();
    }
    let elapsed = start.elapsed();
    assert_eq!(n_lines, 16);
    announce(
        "1 (F4 table reproduction)",
        all_pass && elapsed.as_secs() < 60,
    );
}

/// Criterion 2: the two flagship (B2, -) reconstructions are unique and
/// match the printed decompositions exactly, under a second.
#[test]
fn criterion_2_flagship_decompositions() {
    let ds = Dataset::load().unwrap();
    let start = Instant::now();
    let expected = [
        ("F4-e4-B2-12_0", "-(03,2)+(012,23)+(04,1)+(01234,12)"),
        ("F4-e4-B2-01_2", "-(023,12)+(0124,123)+(23,0)+(014,0)"),
    ];
    let mut ok = true;
    for (case, want) in expected {
        let p = ds.problems.iter().find(|p| p.id == case).unwrap();
        let sols = solve(&p.problem).unwrap();
        if sols.len() != 1 || sols[0].render_ordered(&p.problem.vocab) != want {
            eprintln!("{case}: got {:?}", sols.iter().map(|s| s.render_ordered(&p.problem.vocab)).collect::<Vec<_>>());
            ok = false;
        }
        if p.expect != want {
            ok = false;
        }
    }
    let fast = start.elapsed().as_millis() < 1000;
    announce("2 (flagship decomposition)", ok && fast);
}

/// Criterion 3: the E6 D4-centralizer series has exactly 26 characters.
#[test]
fn criterion_3_jordan_counting() {
    let ds = Dataset::load().unwrap();
    let form = ds.form("E6", "d4").unwrap();
    announce("3 (Jordan counting)", form.series_size().unwrap() == 26);
}

/// Criterion 4: the series-size solve returns positive integers on every
/// embedded case of G2, 3D4, F4, E6, E7, and the three F4 e = 3 cases solve
/// to the table values 6, 6, 3.
#[test]
fn criterion_4_partition_solve() {
    let ds = Dataset::load().unwrap();
    let mut ok = true;
    let cases: BTreeSet<(String, u32, String)> = ds
        .lines
        .iter()
        .filter(|l| l.group != "E8")
        .map(|l| (l.group.clone(), l.e, l.form.clone()))
        .collect();
    let mut solved = 0;
    for (g, e, f) in &cases {
        match series_size_solve(&ds, g, *e, f) {
            Ok(out) => {
                solved += 1;
                if out.sizes.iter().any(|(_, _, s)| *s == 0) {
                    eprintln!("{g}-e{e}-{f}: zero size");
                    ok = false;
                }
            }
            Err(err) => {
                eprintln!("{g}-e{e}-{f}: {err}");
                ok = false;
            }
        }
    }
    assert!(solved >= 60, "expected at least 60 cases, saw {solved}");
    for (f, want) in [("b4", 6u64), ("c3a1", 6), ("a3a1", 3)] {
        let out = series_size_solve(&ds, "F4", 3, f).unwrap();
        if out.sizes[0].2 != want {
            eprintln!("F4-e3-{f}: solved {} want {want}", out.sizes[0].2);
            ok = false;
        }
    }
    announce("4 (partition solve)", ok);
}

/// Criterion 5: norm-3 forcing on the E6 3D4[-1] orbit.
#[test]
fn criterion_5_norm_forcing() {
    let orbit: Vec<String> = (0..3).map(|i| format!("3D4[-1]^({i})")).collect();
    let r = norm_decompose_series(&orbit, 3).unwrap();
    let rendered = r.render_ordered(&orbit);
    announce(
        "5 (norm-3 forcing)",
        rendered == "3D4[-1]^(0)+3D4[-1]^(1)+3D4[-1]^(2)",
    );
}

/// Criterion 6: relevant-integer unions match the stated sets, E8 in check
/// mode.
#[test]
fn criterion_6_relevant_integers() {
    let ds = Dataset::load().unwrap();
    let want: &[(&str, &[u32])] = &[
        ("F4", &[1, 2, 3, 4, 6]),
        ("E6", &[1, 2, 3, 4, 5, 6, 10]),
        ("E7", &[1, 2, 3, 4, 5, 6, 7, 9, 12, 14, 18]),
        ("E8", &[1, 2, 3, 4, 5, 6, 7, 9, 10, 12, 14, 18, 20]),
        ("G2", &[1, 2, 3, 6]),
        ("3D4", &[1, 2, 3, 6]),
    ];
    let mut ok = true;
    for (g, set) in want {
        let got = ds.relevant_union(g);
        let want: BTreeSet<u32> = set.iter().copied().collect();
        if got != want {
            eprintln!("{g}: {got:?} want {want:?}");
            ok = false;
        }
    }
    announce("6 (relevant integers)", ok);
}

/// Criterion 7: the Malle-Robinson scan has zero failures over all embedded
/// lines for all admissible (ell <= 100, q <= 50), margins included, plus
/// the symbolic bound at the smallest admissible prime.
#[test]
fn criterion_7_malle_robinson_scan() {
    let ds = Dataset::load().unwrap();
    let reports = genord::verify::mr_scan(&ds, 100, 50);
    let mut ok = !reports.is_empty();
    let mut with_margin = 0;
    for r in &reports {
        if r.status == Status::Fail {
            eprintln!("{}", r.render());
            ok = false;
        }
        if r.witness.iter().any(|w| w.contains("min margin")) {
            with_margin += 1;
        }
    }
    assert!(with_margin > 100, "margins reported per line");
    announce("7 (Malle-Robinson scan)", ok);
}

/// Criterion 8: the lattice solver agrees with brute-force enumeration on
/// 200 random synthetic instances.
#[test]
fn criterion_8_oracle_equivalence() {
    // deterministic xorshift so the instances are reproducible
    let mut state = 0x9e3779b97f4a7c15u64;
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state
    };
    let mut mismatches = 0;
    let mut checked = 0;
    let mut draws = 0;
    'outer: while checked < 200 && draws < 400 {
        draws += 1;
        let n = 4 + (next() % 5) as usize; // vocabulary size 4..8
        let k = ((next() % 4) as usize).min(3); // basis size 0..3
        let vocab: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
        let denom = 2i128;
        // random pi with half-integer entries
        let mut pi = genord::decompose::CharCombination::new();
        for l in &vocab {
            let c = (next() % 5) as i128 - 2;
            if c != 0 {
                pi.add(l, Rat::new(c, denom));
            }
        }
        // random basis vectors, made orthogonal to pi by construction:
        // use signed pairs (l1 +, l2 -) scaled so the pairing may vanish;
        // reject instances where orthogonality or independence fails
        let mut basis = Vec::new();
        for _ in 0..k {
            let mut b = genord::decompose::CharCombination::new();
            let i = (next() % n as u64) as usize;
            let j = (next() % n as u64) as usize;
            if i == j {
                continue;
            }
            let ci = pi.coeff(&vocab[j]);
            let cj = -pi.coeff(&vocab[i]);
            if ci.is_zero() && cj.is_zero() {
                continue;
            }
            b.add(&vocab[i], if ci.is_zero() { Rat::ONE } else { ci });
            b.add(&vocab[j], cj);
            if !pi.inner(&b).is_zero() || b.is_empty() {
                continue;
            }
            basis.push(b);
        }
        let target = 1 + (next() % 6) as i128;
        let p = DecompositionProblem {
            vocab,
            pi_uniform: pi,
            ortho_basis: basis.clone(),
            target_norm_sq: target,
            forbidden: BTreeSet::new(),
        };
        // only structurally degenerate draws are rejected; instances whose
        // target is below |pi|^2 legitimately have no solutions and both
        // routes must agree on that
        if matches!(
            p.validate_public(),
            Err(genord::Error::InconsistentTable(_))
        ) {
            continue 'outer;
        }
        checked += 1;
        let fast = match solve(&p) {
            Ok(s) => s,
            Err(genord::Error::NoSolution) => Vec::new(),
            Err(e) => panic!("solver error: {e}"),
        };
        let slow = solve_by_enumeration(&p);
        if fast != slow {
            eprintln!("mismatch on target {target}: {} vs {}", fast.len(), slow.len());
            mismatches += 1;
        }
    }
    assert_eq!(checked, 200, "draw budget exhausted at {checked} instances");
    announce("8 (oracle equivalence)", mismatches == 0);
}

/// Criterion 9: structural invariants.
#[test]
fn criterion_9_structural_invariants() {
    // cyclotomic product identity up to 60
    let mut ok = (1..=60u32).all(|n| {
        let mut prod = IntPoly::one();
        for d in 1..=n {
            if n % d == 0 {
                prod = prod.mul(&cyclotomic(d));
            }
        }
        prod == IntPoly::x_pow_minus_one(n as usize)
    });
    // Coxeter element of E8 has characteristic polynomial Phi_30
    let rs = RootSystem::for_label(GroupLabel::parse("E8").unwrap());
    let mut cox = Perm::identity(rs.n_roots());
    for s in &rs.srefs {
        cox = s.compose(&cox);
    }
    ok &= genord::rootdata::char_poly_twisted(&rs, &cox, &Perm::identity(rs.n_roots()))
        == CycProduct::phi(30);
    // e-core confluence over all partitions of n <= 12: removal order
    // does not matter because the beta-set moves commute
    for n in 1..=12u32 {
        for p in Partition::all(n) {
            for d in 2..=6u32 {
                let c1 = p.core(d);
                let c2 = p.core(d).core(d);
                ok &= c1 == c2 && !c1.has_hook(d);
            }
        }
    }
    // parabolic class cross-check for every rank <= 4 label, against the
    // exhaustive conjugacy oracle
    for name in ["A2", "A3", "A4", "B2", "B3", "B4", "C3", "C4", "D4", "G2", "F4"] {
        let rs = RootSystem::for_label(GroupLabel::parse(name).unwrap());
        let all = rs.enumerate_weyl(1200).unwrap();
        let mut canonical: BTreeSet<Vec<u32>> = BTreeSet::new();
        for bits in 0..(1usize << rs.rank) {
            let subset: Vec<usize> = (0..rs.rank).filter(|i| bits >> i & 1 == 1).collect();
            let sys = rs.standard_subsystem(&subset);
            let min = all.iter().map(|w| w.image_set(&sys)).min().unwrap();
            canonical.insert(min);
        }
        ok &= parabolic_classes(&rs).len() == canonical.len();
    }
    announce("9 (structural invariants)", ok);
}

/// Criterion 10: each verification check fails on its mutation-catalog
/// counterpart.
#[test]
fn criterion_10_fault_injection() {
    let quasi = include_str!("../data/quasi_isolated.txt");
    let forms = include_str!("../data/forms.txt");
    let block = include_str!("../data/block_lines.txt");
    let decomp = include_str!("../data/decomp.txt");
    let problems = include_str!("../data/problems.txt");
    let mut ok = true;

    // deleted lambda -> partition check fails
    let mutated = Dataset::from_strings(
        quasi,
        forms,
        &block.replace(
            "F4|3|2|||b4|P3.A2~(q)|P1.P3.A1~(q)|1|phi11,phi2|6|",
            "F4|3|2|||b4|P3.A2~(q)|P1.P3.A1~(q)|1|phi11|6|",
        ),
        decomp,
        problems,
        false,
    )
    .unwrap();
    ok &= verify_partition(&mutated, "F4", 3, "b4").status == Status::Fail;

    // perturbed |W| -> line reproduction fails
    let mutated = Dataset::from_strings(
        quasi,
        forms,
        &block.replace(
            "F4|3|2|||b4|P3.A2~(q)|P1.P3.A1~(q)|1|phi11,phi2|6|",
            "F4|3|2|||b4|P3.A2~(q)|P1.P3.A1~(q)|1|phi11,phi2|7|",
        ),
        decomp,
        problems,
        false,
    )
    .unwrap();
    let mut ctx = VerifyContext::new("F4").unwrap();
    let reports = verify_e_cuspidal_lines(&mutated, &mut ctx, "F4", 3);
    ok &= reports.iter().any(|r| r.status == Status::Fail);

    // swapped centralizer column -> line reproduction fails
    let mutated = Dataset::from_strings(
        quasi,
        forms,
        &block
            .replace(
                "F4|3|2|||b4|P3.A2~(q)|P1.P3.A1~(q)|1|phi11,phi2|6|",
                "F4|3|2|||b4|P3.A2~(q)|P1.P3.A1(q)|1|phi11,phi2|6|",
            )
            .replace(
                "F4|3|4|||c3a1|P3.A2(q)|P1.P3.A1(q)|1|phi11,phi2|6|",
                "F4|3|4|||c3a1|P3.A2(q)|P1.P3.A1~(q)|1|phi11,phi2|6|",
            ),
        decomp,
        problems,
        false,
    )
    .unwrap();
    let mut ctx = VerifyContext::new("F4").unwrap();
    let reports = verify_e_cuspidal_lines(&mutated, &mut ctx, "F4", 3);
    ok &= reports.iter().any(|r| r.status == Status::Fail);

    // deleted L = G line -> the series sizes no longer solve, failing the
    // Malle-Robinson size stage
    let mutated = Dataset::from_strings(
        quasi,
        forms,
        &block
            .lines()
            .filter(|l| !l.starts_with("F4|3|3|"))
            .collect::<Vec<_>>()
            .join("\n"),
        decomp,
        problems,
        false,
    )
    .unwrap();
    ok &= series_size_solve(&mutated, "F4", 3, "b4").is_err();

    // dropped Ennola partner -> stability check fails (covered in unit
    // tests as well; assert here for the catalog)
    let mutated = Dataset::from_strings(
        quasi,
        forms,
        &block
            .lines()
            .filter(|l| !l.starts_with("F4|4|8|"))
            .collect::<Vec<_>>()
            .join("\n"),
        decomp,
        problems,
        false,
    )
    .unwrap();
    ok &= genord::verify::verify_ennola(&mutated, "F4")
        .iter()
        .any(|r| r.status == Status::Fail);

    announce("10 (fault injection)", ok);
}
