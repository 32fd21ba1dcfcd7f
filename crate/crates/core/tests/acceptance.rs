//! Acceptance suite: one line per criterion, `PASS`, `FAIL` or
//! `UNVERIFIED`. Exits non-zero if any criterion fails.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pierce::betti::{
    betti_recursive, binom, graded_betti_closed, invert_graded, invert_multigraded,
    multigraded_betti_closed, pdim_from_profile,
};
use pierce::code::{Codeword, NeuralCode};
use pierce::graphs::{all_elimination_orderings, chordality, Graph};
use pierce::oracle::{
    betti_table_oracle, betti_table_oracle_with, pdim, regularity, regularity_characterization,
    OracleOptions,
};
use pierce::piercing::{
    all_pierced_codes, all_piercing_orders, is_inductively_pierced, piercing_profile,
    random_pierced_code, PiercingOrder,
};
use pierce::polarize::polarized_ideal;
use pierce::pseudomonomial::canonical_form;
use pierce::samples::{ideal_j1, ideal_j2, ideal_j3, key_code, key_steps, key_steps_alt, nested_chain_code};
use pierce::Error;

enum Verdict {
    Pass(String),
    Fail(String),
    Unverified(String),
}

type Corpus = Vec<(PiercingOrder, NeuralCode)>;

/// Every code from piercing sequences with n <= 5 and rank <= 3, then 200
/// seeded random codes with n = 6.
fn corpus() -> Corpus {
    let mut out = Vec::new();
    for n in 1..=5 {
        out.extend(all_pierced_codes(n, 3).expect("enumeration"));
    }
    for seed in 0..200 {
        out.push(random_pierced_code(6, 3, seed).expect("generator"));
    }
    out
}

fn within(elapsed: Duration, limit: Duration, detail: String) -> Verdict {
    if elapsed < limit {
        Verdict::Pass(detail)
    } else {
        Verdict::Fail(format!("{detail}; took {elapsed:.2?}, limit {limit:?}"))
    }
}

fn criterion_1() -> Verdict {
    let start = Instant::now();
    let key: BTreeSet<String> = canonical_form(&key_code()).render().into_iter().collect();
    let expected: BTreeSet<String> = ["x1*x3", "x1*x5", "x3*x4", "x4*x5", "x5*(1-x3)"]
        .map(String::from)
        .into();
    let chain: BTreeSet<String> = canonical_form(&nested_chain_code()).render().into_iter().collect();
    let expected_chain: BTreeSet<String> = ["x3*(1-x2)", "x2*(1-x1)", "x3*(1-x1)"].map(String::from).into();
    let elapsed = start.elapsed();
    if key != expected {
        return Verdict::Fail(format!("key example gave {key:?}"));
    }
    if chain != expected_chain {
        return Verdict::Fail(format!("nested chain gave {chain:?}"));
    }
    within(elapsed, Duration::from_secs(1), "5 and 3 generators as expected".into())
}

fn criterion_2() -> Verdict {
    let start = Instant::now();
    let code = key_code();
    let found = match is_inductively_pierced(&code) {
        Ok(Some(order)) => order,
        other => return Verdict::Fail(format!("search returned {other:?}")),
    };
    let orders = all_piercing_orders(&code).expect("enumeration");
    let labels: Vec<Vec<usize>> = orders.iter().map(PiercingOrder::neurons).collect();
    for wanted in [vec![1, 2, 3, 4, 5], vec![1, 4, 2, 3, 5]] {
        if !labels.contains(&wanted) {
            return Verdict::Fail(format!("order {wanted:?} not accepted"));
        }
    }
    let a = piercing_profile(&PiercingOrder::new(key_steps())).unwrap();
    let b = piercing_profile(&PiercingOrder::new(key_steps_alt())).unwrap();
    let c = piercing_profile(&found).unwrap();
    let elapsed = start.elapsed();
    if a != b || a != c {
        return Verdict::Fail(format!("profiles differ: {a:?} {b:?} {c:?}"));
    }
    if a.jk() != vec![1, 3, 1, 0, 0] {
        return Verdict::Fail(format!("marginals {:?}", a.jk()));
    }
    if a.entries() != vec![((0, 0), 1), ((1, 0), 2), ((1, 1), 1), ((2, 0), 1)] {
        return Verdict::Fail(format!("j_kl {:?}", a.entries()));
    }
    within(
        elapsed,
        Duration::from_secs(1),
        format!("{}; {}; {} orders", a.render_marginals(), a.render_table(), orders.len()),
    )
}

fn criterion_3(corpus: &Corpus) -> Verdict {
    let start = Instant::now();
    let key_profile = piercing_profile(&PiercingOrder::new(key_steps())).unwrap();
    let key_table = betti_table_oracle(&polarized_ideal(&canonical_form(&key_code()))).unwrap();
    if key_table.total() != vec![1, 5, 6, 2] {
        return Verdict::Fail(format!("key example total {:?}", key_table.total()));
    }
    if multigraded_betti_closed(&key_profile).unwrap() != key_table
        || betti_recursive(&PiercingOrder::new(key_steps())).unwrap() != key_table
    {
        return Verdict::Fail("key example methods disagree".into());
    }
    for (order, code) in corpus {
        let profile = piercing_profile(order).unwrap();
        let closed = multigraded_betti_closed(&profile);
        let recursive = betti_recursive(order);
        let oracle = betti_table_oracle(&polarized_ideal(&canonical_form(code)));
        match (closed, recursive, oracle) {
            (Ok(c), Ok(r), Ok(o)) if c == r && r == o => {}
            (c, r, o) => {
                return Verdict::Fail(format!(
                    "code {:?}: closed {c:?}, recursion {r:?}, oracle {o:?}",
                    code.words()
                ))
            }
        }
    }
    within(
        start.elapsed(),
        Duration::from_secs(300),
        format!("{} codes plus the key example, all tables identical", corpus.len()),
    )
}

/// Every code on `n` neurons: every set of nonempty codewords, plus ∅.
fn raw_codes(n: usize) -> impl Iterator<Item = NeuralCode> {
    let nonempty = (1u32 << n) - 1;
    (0u64..(1u64 << nonempty)).map(move |mask| {
        let words = (0..nonempty)
            .filter(|b| mask >> b & 1 == 1)
            .map(|b| Codeword(b + 1));
        NeuralCode::new(n, words).expect("in range")
    })
}

fn criterion_4() -> Verdict {
    let start = Instant::now();
    let (mut checked, mut pierced, mut skipped) = (0usize, 0usize, 0usize);
    for n in 1..=4 {
        for code in raw_codes(n) {
            match regularity_characterization(&code) {
                Ok(v) => {
                    checked += 1;
                    pierced += usize::from(v.is_ip);
                    if !v.consistent {
                        return Verdict::Fail(format!("counterexample {:?}: {v:?}", code.words()));
                    }
                }
                Err(Error::NotQuadratic(_) | Error::Diagnostics { .. }) => skipped += 1,
                Err(e) => return Verdict::Fail(format!("{:?}: {e}", code.words())),
            }
        }
    }
    within(
        start.elapsed(),
        Duration::from_secs(600),
        format!("{checked} codes meet the hypotheses ({pierced} pierced), {skipped} excluded, 0 counterexamples"),
    )
}

fn criterion_5(corpus: &Corpus) -> Verdict {
    for (order, _) in corpus {
        let profile = piercing_profile(order).unwrap();
        let n = profile.n();
        let graded = graded_betti_closed(&profile).unwrap();
        match invert_graded(&graded, n) {
            Ok(jk) if jk == profile.jk() => {}
            other => return Verdict::Fail(format!("graded round trip of {profile:?} gave {other:?}")),
        }
        // Direct evaluation of j_k = 1 + Σ C(w, n-1-k) (-1)^(w-n+1+k) β_{w,w+1}.
        for (k, &jk) in profile.jk().iter().enumerate() {
            let mut sum = 1i64;
            for w in (n - 1 - k)..n {
                let sign = if (w + 1 + k - n) % 2 == 0 { 1 } else { -1 };
                sum += sign * binom(w as i64, (n - 1 - k) as i64) as i64 * graded.get(w, w + 1) as i64;
            }
            if sum != jk as i64 {
                return Verdict::Fail(format!("j{k} evaluates to {sum}, expected {jk}"));
            }
        }
        let table = multigraded_betti_closed(&profile).unwrap();
        match invert_multigraded(&table) {
            Ok(p) if p == profile => {}
            other => return Verdict::Fail(format!("multigraded round trip of {profile:?} gave {other:?}")),
        }
    }
    Verdict::Pass(format!("{} profiles round-trip exactly", corpus.len()))
}

fn criterion_6(corpus: &Corpus) -> Verdict {
    let key = betti_table_oracle(&polarized_ideal(&canonical_form(&key_code()))).unwrap();
    let total = key.total();
    let key_profile = piercing_profile(&PiercingOrder::new(key_steps())).unwrap();
    if pdim_from_profile(&key_profile) != 3 || pdim(&key) != 3 || total.get(3) != Some(&2) || total.get(4).is_some() {
        return Verdict::Fail(format!("key example: total {total:?}"));
    }
    for (order, code) in corpus {
        let profile = piercing_profile(order).unwrap();
        let table = betti_table_oracle(&polarized_ideal(&canonical_form(code))).unwrap();
        if pdim_from_profile(&profile) != pdim(&table) {
            return Verdict::Fail(format!(
                "{:?}: profile gives {}, oracle {}",
                code.words(),
                pdim_from_profile(&profile),
                pdim(&table)
            ));
        }
    }
    Verdict::Pass(format!("key example pdim 3 with b3=2, b4=0; {} codes agree", corpus.len()))
}

fn criterion_7() -> Verdict {
    let t1 = betti_table_oracle(&ideal_j1()).unwrap();
    let t2 = betti_table_oracle(&ideal_j2()).unwrap();
    let t3 = betti_table_oracle(&ideal_j3()).unwrap();
    let g2 = t2.graded();
    if g2 != t3.graded() || g2.get(1, 2) != 2 || g2.get(2, 3) != 1 {
        return Verdict::Fail("graded views of J2 and J3 differ".into());
    }
    if t2 == t3 {
        return Verdict::Fail("multigraded views of J2 and J3 coincide".into());
    }
    let (r1, r2) = (regularity(&t1, true).unwrap(), regularity(&t2, true).unwrap());
    if (r1, r2) != (3, 2) {
        return Verdict::Fail(format!("reg(J1)={r1}, reg(J2)={r2}"));
    }
    Verdict::Pass("J2, J3 share b12=2, b23=1 and differ multigraded; reg(J1)=3, reg(J2)=2".into())
}

/// Multisets of simplicial degrees over all elimination orderings, or
/// `None` for non-chordal graphs.
fn profiles(g: &Graph) -> Option<BTreeSet<Vec<usize>>> {
    chordality(g)?;
    Some(
        all_elimination_orderings(g)
            .expect("small graph")
            .map(|o| o.degree_multiset())
            .collect(),
    )
}

/// `Ok(true)` for a chordal graph with a single profile.
fn check_graph(g: &Graph) -> Result<bool, String> {
    match profiles(g) {
        None => Ok(false),
        Some(p) if p.len() == 1 => Ok(true),
        Some(p) => Err(format!("{g:?} has profiles {p:?}")),
    }
}

fn criterion_8() -> Verdict {
    let pairs = |n: usize| -> Vec<(usize, usize)> {
        (1..=n).flat_map(|i| (i + 1..=n).map(move |j| (i, j))).collect()
    };
    let mut exhaustive = 0usize;
    for n in 1..=6 {
        let all = pairs(n);
        for mask in 0u32..(1 << all.len()) {
            let edges: Vec<(usize, usize)> = all
                .iter()
                .enumerate()
                .filter(|(b, _)| mask >> b & 1 == 1)
                .map(|(_, &e)| e)
                .collect();
            match check_graph(&Graph::from_edges(n, &edges).unwrap()) {
                Ok(c) => exhaustive += usize::from(c),
                Err(e) => return Verdict::Fail(e),
            }
        }
    }
    let mut sampled = 0usize;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let all7 = pairs(7);
    for _ in 0..3000 {
        let p: f64 = rng.gen_range(0.1..0.95);
        let edges: Vec<(usize, usize)> = all7.iter().copied().filter(|_| rng.gen_bool(p)).collect();
        match check_graph(&Graph::from_edges(7, &edges).unwrap()) {
            Ok(c) => sampled += usize::from(c),
            Err(e) => return Verdict::Fail(e),
        }
    }
    Verdict::Pass(format!(
        "{exhaustive} chordal graphs on <= 6 vertices and {sampled} sampled on 7, one profile each"
    ))
}

fn criterion_9(corpus: &Corpus) -> Verdict {
    let mut orders_seen = 0usize;
    for (order, code) in corpus {
        let expected = piercing_profile(order).unwrap();
        let orders = match all_piercing_orders(code) {
            Ok(o) if !o.is_empty() => o,
            other => return Verdict::Fail(format!("{:?}: orders {other:?}", code.words())),
        };
        for o in &orders {
            orders_seen += 1;
            let p = piercing_profile(o).unwrap();
            if p != expected {
                return Verdict::Fail(format!("{:?}: {} vs {}", code.words(), p.render_table(), expected.render_table()));
            }
        }
    }
    Verdict::Pass(format!("{} codes, {orders_seen} orders, one profile per code", corpus.len()))
}

fn criterion_10() -> Verdict {
    for a in 0..=12i64 {
        for b in 0..=12i64 {
            if binom(a, b) + binom(a, b + 1) != binom(a + 1, b + 1) {
                return Verdict::Fail(format!("Pascal at ({a},{b})"));
            }
            if (b..=a).map(|m| binom(m, b)).sum::<u64>() != binom(a + 1, b + 1) {
                return Verdict::Fail(format!("hockey stick at ({a},{b})"));
            }
            for c in 0..=12i64 {
                if (0..=c).map(|m| binom(a, m) * binom(b, c - m)).sum::<u64>() != binom(a + b, c) {
                    return Verdict::Fail(format!("Chu-Vandermonde at ({a},{b},{c})"));
                }
                if binom(a, b) * binom(b, c) != binom(a, c) * binom(a - c, b - c) {
                    return Verdict::Fail(format!("product identity at ({a},{b},{c})"));
                }
            }
        }
        let alt: i64 = (0..=a)
            .map(|m| if m % 2 == 0 { 1 } else { -1 } * binom(a, m) as i64)
            .sum();
        if alt != i64::from(a == 0) {
            return Verdict::Fail(format!("alternating sum at {a}"));
        }
    }
    Verdict::Pass("Pascal, hockey stick, alternating sum, Chu-Vandermonde, product for 0 <= a <= 12".into())
}

fn time_oracle(code: &NeuralCode, opts: &OracleOptions) -> (Duration, pierce::betti::BettiTable) {
    let ideal = polarized_ideal(&canonical_form(code));
    let start = Instant::now();
    let t = betti_table_oracle_with(&ideal, opts).unwrap();
    (start.elapsed(), t)
}

fn criterion_11() -> Verdict {
    // The n = 6 seed whose ideal uses the most variables.
    let (_, code) = (0..2000)
        .map(|s| random_pierced_code(6, 3, s).unwrap())
        .max_by_key(|(_, c)| polarized_ideal(&canonical_form(c)).packed_support().count_ones())
        .unwrap();
    let vars = polarized_ideal(&canonical_form(&code)).packed_support().count_ones();
    // The full sweep over every subset of the variables, without the lcm
    // shortcut, is the demanding case.
    let single = OracleOptions {
        threads: Some(1),
        lcm_filter: false,
        ..OracleOptions::default()
    };
    let quad = OracleOptions {
        threads: Some(4),
        ..single
    };
    let (t1, table1) = time_oracle(&code, &single);
    let (t4, table4) = time_oracle(&code, &quad);
    if table1 != table4 {
        return Verdict::Fail("1- and 4-thread tables differ".into());
    }
    if t1 >= Duration::from_secs(2) {
        return Verdict::Fail(format!("{vars} variables: single-threaded {t1:.2?}"));
    }
    let cores = std::thread::available_parallelism().map_or(1, |n| n.get());
    let speedup = t1.as_secs_f64() / t4.as_secs_f64().max(1e-9);
    let detail = format!(
        "{vars} variables, 2^{vars} restrictions: 1 thread {t1:.2?}, 4 threads {t4:.2?} ({speedup:.2}x), tables identical"
    );
    if cores < 4 {
        return Verdict::Unverified(format!("{detail}; speedup not measurable on {cores} hardware thread(s)"));
    }
    if speedup >= 2.5 {
        Verdict::Pass(detail)
    } else {
        Verdict::Fail(format!("{detail}; speedup below 2.5x"))
    }
}

fn main() {
    let corpus = corpus();
    let criteria: Vec<(&str, Box<dyn Fn() -> Verdict + '_>)> = vec![
        ("canonical forms of the worked examples", Box::new(criterion_1)),
        ("piercing profile of the worked example", Box::new(criterion_2)),
        ("closed form, recursion and oracle agree", Box::new(|| criterion_3(&corpus))),
        ("regularity 2 iff inductively pierced, n <= 4", Box::new(criterion_4)),
        ("inversion round trips", Box::new(|| criterion_5(&corpus))),
        ("projective dimension", Box::new(|| criterion_6(&corpus))),
        ("multigraded discrimination and regularity", Box::new(criterion_7)),
        ("simplicial degree profiles of chordal graphs", Box::new(criterion_8)),
        ("order independence of piercing counts", Box::new(|| criterion_9(&corpus))),
        ("binomial identities", Box::new(criterion_10)),
        ("oracle performance and thread determinism", Box::new(criterion_11)),
    ];
    let mut failed = 0;
    for (i, (title, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let verdict = check();
        let secs = start.elapsed().as_secs_f64();
        let (tag, detail) = match verdict {
            Verdict::Pass(d) => ("PASS", d),
            Verdict::Fail(d) => {
                failed += 1;
                ("FAIL", d)
            }
            Verdict::Unverified(d) => ("UNVERIFIED", d),
        };
        println!("criterion {:>2}: {tag:<10} {title} [{secs:.2}s] {detail}", i + 1);
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
