//! k-piercings, inductively pierced codes, piercing orders and profiles.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::rc::Rc;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::code::{enumerate_interval, Codeword, NeuralCode, MAX_NEURONS};
use crate::error::{Error, Result};
use crate::graphs::{chordality, chordless_cycle, relationship_graph, EliminationOrdering};
use crate::polarize::{polarized_ideal, PiercingStep};
use crate::pseudomonomial::{canonical_form, PseudoMonomial};

/// Largest code size accepted by [`all_piercing_orders`].
pub const MAX_ORDER_ENUMERATION: usize = 8;

/// Steps in construction order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PiercingOrder {
    pub steps: Vec<PiercingStep>,
}

impl PiercingOrder {
    pub fn new(steps: Vec<PiercingStep>) -> PiercingOrder {
        PiercingOrder { steps }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Neuron labels in construction order.
    pub fn neurons(&self) -> Vec<usize> {
        self.steps.iter().map(|s| s.neuron).collect()
    }

    /// Renames neurons to their position in the order, so the `m`-th step
    /// adds neuron `m`.
    pub fn relabeled(&self) -> PiercingOrder {
        let mut position = [0usize; MAX_NEURONS + 1];
        for (m, s) in self.steps.iter().enumerate() {
            position[s.neuron] = m + 1;
        }
        let map = |c: Codeword| Codeword::from_neurons(c.neurons().map(|i| position[i]));
        PiercingOrder {
            steps: self
                .steps
                .iter()
                .enumerate()
                .map(|(m, s)| PiercingStep {
                    neuron: m + 1,
                    sigma: map(s.sigma),
                    tau: map(s.tau),
                })
                .collect(),
        }
    }

    pub fn render(&self) -> String {
        self.steps.iter().map(|s| format!("{s}\n")).collect()
    }
}

/// Counts `j_{k,ℓ}` of k-piercings contained in ℓ other fields, and their
/// marginals `j_k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PiercingProfile {
    n: usize,
    // jkl[k][l], n x n.
    jkl: Vec<Vec<u64>>,
}

impl PiercingProfile {
    /// Validates `jkl` (an `n x n` table indexed `[k][ℓ]`): entries vanish
    /// for `ℓ > n - 1 - k` and sum to `n`.
    pub fn new(n: usize, jkl: Vec<Vec<u64>>) -> Result<PiercingProfile> {
        if jkl.len() != n || jkl.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidProfile(format!("table must be {n}x{n}")));
        }
        let mut total = 0u64;
        for (k, row) in jkl.iter().enumerate() {
            for (l, &count) in row.iter().enumerate() {
                if count > 0 && k + l > n - 1 {
                    return Err(Error::InvalidProfile(format!(
                        "j[{k},{l}] = {count} but a {k}-piercing lies in at most {} fields",
                        n - 1 - k
                    )));
                }
                total += count;
            }
        }
        if total != n as u64 {
            return Err(Error::InvalidProfile(format!(
                "piercing counts sum to {total}, expected {n}"
            )));
        }
        Ok(PiercingProfile { n, jkl })
    }

    /// Builds a profile from `(k, ℓ) -> count` entries.
    pub fn from_entries(n: usize, entries: &[((usize, usize), u64)]) -> Result<PiercingProfile> {
        let mut jkl = vec![vec![0u64; n]; n];
        for &((k, l), c) in entries {
            if k >= n || l >= n {
                return Err(Error::InvalidProfile(format!("index ({k},{l}) outside {n}x{n}")));
            }
            jkl[k][l] += c;
        }
        PiercingProfile::new(n, jkl)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn jkl(&self, k: usize, l: usize) -> u64 {
        self.jkl.get(k).and_then(|row| row.get(l)).copied().unwrap_or(0)
    }

    pub fn table(&self) -> &[Vec<u64>] {
        &self.jkl
    }

    /// `j_k = Σ_ℓ j_{k,ℓ}` for `k = 0..n`.
    pub fn jk(&self) -> Vec<u64> {
        self.jkl.iter().map(|row| row.iter().sum()).collect()
    }

    /// Nonzero `((k, ℓ), j_{k,ℓ})` entries in lexicographic order.
    pub fn entries(&self) -> Vec<((usize, usize), u64)> {
        let mut out = Vec::new();
        for (k, row) in self.jkl.iter().enumerate() {
            for (l, &c) in row.iter().enumerate() {
                if c > 0 {
                    out.push(((k, l), c));
                }
            }
        }
        out
    }

    /// `"j0=1 j1=3 j2=1"`, nonzero marginals only.
    pub fn render_marginals(&self) -> String {
        let parts: Vec<String> = self
            .jk()
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(k, c)| format!("j{k}={c}"))
            .collect();
        parts.join(" ")
    }

    pub fn render_table(&self) -> String {
        let parts: Vec<String> = self
            .entries()
            .iter()
            .map(|((k, l), c)| format!("j{k},{l}={c}"))
            .collect();
        parts.join(" ")
    }
}

impl fmt::Display for PiercingProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render_marginals())
    }
}

/// Tabulates `k = |τ| - |σ|` and `ℓ = |σ|` over the steps of an order.
pub fn piercing_profile(order: &PiercingOrder) -> Result<PiercingProfile> {
    let n = order.len();
    let mut jkl = vec![vec![0u64; n]; n];
    for (m, step) in order.steps.iter().enumerate() {
        step.check()?;
        let (k, l) = (step.k(), step.ell());
        // The m-th step pierces a code on m earlier neurons.
        if k + l > m {
            return Err(Error::InvalidStep {
                neuron: step.neuron,
                msg: format!("step {} cannot involve {} earlier neurons", m + 1, k + l),
            });
        }
        jkl[k][l] += 1;
    }
    PiercingProfile::new(n, jkl)
}

/// The piercing of `code` by neuron `i`, if `i` is a k-piercing of the rest.
///
/// `σ` and `τ` are forced: they are the intersection and union of the
/// codewords containing `i` with `i` removed. The neuron is a piercing iff
/// those words fill the whole interval `[σ, τ]` and every element of that
/// interval is itself a codeword.
pub fn detect_piercing(code: &NeuralCode, i: usize) -> Result<Option<PiercingStep>> {
    if i == 0 || i > code.n() {
        return Err(Error::IndexOutOfRange { index: i, n: code.n() });
    }
    let mut count = 0usize;
    let mut sigma = Codeword::full(code.n());
    let mut tau = Codeword::EMPTY;
    for w in code.words().iter().filter(|w| w.contains(i)) {
        let rest = w.without(i);
        sigma = sigma.intersection(rest);
        tau = tau.union(rest);
        count += 1;
    }
    if count == 0 {
        return Err(Error::SilentNeuron(i));
    }
    let rank = tau.len() - sigma.len();
    // Distinct words containing i give distinct restrictions inside [σ, τ].
    if count != 1usize << rank {
        return Ok(None);
    }
    let interval = enumerate_interval(sigma, tau)?;
    if interval.iter().all(|&g| code.contains(g)) {
        Ok(Some(PiercingStep { neuron: i, sigma, tau }))
    } else {
        Ok(None)
    }
}

fn code_key(code: &NeuralCode) -> Vec<Codeword> {
    code.words().to_vec()
}

fn search_order(code: &NeuralCode, failed: &mut HashSet<Vec<Codeword>>) -> Option<Vec<PiercingStep>> {
    if code.len() == 1 {
        return Some(Vec::new());
    }
    let key = code_key(code);
    if failed.contains(&key) {
        return None;
    }
    // Peel off the highest neuron first, so codes built in label order
    // come back in label order.
    let neurons: Vec<usize> = code.support().neurons().collect();
    for &i in neurons.iter().rev() {
        let Ok(Some(step)) = detect_piercing(code, i) else {
            continue;
        };
        let rest = code.restrict_away(Codeword::from_neurons([i]));
        if let Some(mut steps) = search_order(&rest, failed) {
            steps.push(step);
            return Some(steps);
        }
    }
    failed.insert(key);
    None
}

/// A piercing order of `code` if it is inductively pierced.
///
/// Tries every piercing neuron at every stage, memoizing codes already
/// shown not to be inductively pierced.
pub fn is_inductively_pierced(code: &NeuralCode) -> Result<Option<PiercingOrder>> {
    code.validate().into_result()?;
    let mut failed = HashSet::new();
    Ok(search_order(code, &mut failed).map(PiercingOrder::new))
}

type OrderList = Rc<Vec<Vec<PiercingStep>>>;

fn search_all(code: &NeuralCode, memo: &mut HashMap<Vec<Codeword>, OrderList>) -> OrderList {
    if code.len() == 1 {
        return Rc::new(vec![Vec::new()]);
    }
    let key = code_key(code);
    if let Some(hit) = memo.get(&key) {
        return Rc::clone(hit);
    }
    let mut out = Vec::new();
    for i in code.support().neurons() {
        let Ok(Some(step)) = detect_piercing(code, i) else {
            continue;
        };
        let rest = code.restrict_away(Codeword::from_neurons([i]));
        for prefix in search_all(&rest, memo).iter() {
            let mut steps = prefix.clone();
            steps.push(step);
            out.push(steps);
        }
    }
    let out = Rc::new(out);
    memo.insert(key, Rc::clone(&out));
    out
}

/// Every piercing order of `code`. Limited to
/// [`MAX_ORDER_ENUMERATION`] neurons.
///
/// Unlike [`is_inductively_pierced`], duplicate neurons are allowed, so
/// codes replayed from arbitrary step sequences can be enumerated. Silent
/// neurons are still rejected.
pub fn all_piercing_orders(code: &NeuralCode) -> Result<Vec<PiercingOrder>> {
    if let Some(&i) = code.validate().silent_neurons.first() {
        return Err(Error::SilentNeuron(i));
    }
    let active = code.support().len();
    if active > MAX_ORDER_ENUMERATION {
        return Err(Error::Guard {
            what: "neurons for order enumeration",
            max: MAX_ORDER_ENUMERATION,
            got: active,
        });
    }
    let mut memo = HashMap::new();
    let all = search_all(code, &mut memo);
    Ok(all.iter().cloned().map(PiercingOrder::new).collect())
}

/// Why the canonical-form/graph test accepted or rejected a code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    /// Canonical-form elements of degree other than two.
    NotQuadratic(Vec<PseudoMonomial>),
    /// Simplicial elimination ordering of the relationship graph.
    Chordal(EliminationOrdering),
    /// Chordless cycle in the relationship graph.
    ChordlessCycle(Vec<usize>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FastVerdict {
    pub pierced: bool,
    /// Degrees of the canonical-form elements, in canonical order.
    pub cf_degrees: Vec<usize>,
    pub certificate: Certificate,
}

/// Inductive piercedness via the canonical form (all quadratic) and the
/// chordality of the general relationship graph.
pub fn is_inductively_pierced_fast(code: &NeuralCode) -> Result<FastVerdict> {
    code.validate().into_result()?;
    let cf = canonical_form(code);
    let cf_degrees: Vec<usize> = cf.elements().iter().map(|f| f.degree()).collect();
    if !cf.is_quadratic() {
        let bad = cf.elements().iter().copied().filter(|f| f.degree() != 2).collect();
        return Ok(FastVerdict {
            pierced: false,
            cf_degrees,
            certificate: Certificate::NotQuadratic(bad),
        });
    }
    let graph = relationship_graph(&polarized_ideal(&cf))?;
    let (pierced, certificate) = match chordality(&graph) {
        Some(ord) => (true, Certificate::Chordal(ord)),
        None => (
            false,
            Certificate::ChordlessCycle(chordless_cycle(&graph).unwrap_or_default()),
        ),
    };
    Ok(FastVerdict {
        pierced,
        cf_degrees,
        certificate,
    })
}

/// Replays piercing steps from `{∅}`: each step adds
/// `[σ ∪ {i}, τ ∪ {i}]`. The result has `n` equal to the largest label.
pub fn build_code(steps: &[PiercingStep]) -> Result<NeuralCode> {
    let n = steps.iter().map(|s| s.neuron).max().unwrap_or(0);
    let mut words: HashSet<Codeword> = HashSet::from([Codeword::EMPTY]);
    let mut used = Codeword::EMPTY;
    for step in steps {
        step.check()?;
        if used.contains(step.neuron) {
            return Err(Error::InvalidStep {
                neuron: step.neuron,
                msg: "neuron already added".into(),
            });
        }
        let interval = enumerate_interval(step.sigma, step.tau)?;
        if let Some(missing) = interval.iter().find(|g| !words.contains(g)) {
            return Err(Error::InvalidStep {
                neuron: step.neuron,
                msg: format!("interval element {missing} is not in the code"),
            });
        }
        for g in interval {
            words.insert(g.with(step.neuron));
        }
        used = used.with(step.neuron);
    }
    NeuralCode::new(n, words)
}

/// Every interval `[σ, τ]` contained in `code` with rank at most `kmax`.
pub fn intervals_in_code(code: &NeuralCode, kmax: usize) -> Vec<(Codeword, Codeword)> {
    let support = code.support();
    let mut out = Vec::new();
    for &sigma in code.words() {
        grow_interval(code, sigma, Codeword::EMPTY, support.difference(sigma).bits(), kmax, &mut out);
    }
    out
}

fn grow_interval(
    code: &NeuralCode,
    sigma: Codeword,
    free: Codeword,
    candidates: u32,
    kmax: usize,
    out: &mut Vec<(Codeword, Codeword)>,
) {
    out.push((sigma, sigma.union(free)));
    if free.len() == kmax {
        return;
    }
    // Only add neurons above the current largest free neuron.
    let floor = 32 - free.bits().leading_zeros();
    let mut rest = candidates & !((1u64 << floor) - 1) as u32;
    while rest != 0 {
        let bit = rest & rest.wrapping_neg();
        rest &= rest - 1;
        let extended = crate::code::submasks(free.bits())
            .all(|d| code.contains(Codeword(sigma.bits() | d | bit)));
        if extended {
            grow_interval(code, sigma, Codeword(free.bits() | bit), candidates, kmax, out);
        }
    }
}

/// A random inductively pierced code on `n` neurons: neuron `m` pierces an
/// interval of rank at most `kmax` chosen uniformly among those contained
/// in the code built so far. Deterministic for a fixed seed.
pub fn random_pierced_code(n: usize, kmax: usize, seed: u64) -> Result<(PiercingOrder, NeuralCode)> {
    if n > MAX_NEURONS {
        return Err(Error::TooManyNeurons { n, max: MAX_NEURONS });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut steps = Vec::with_capacity(n);
    let mut code = NeuralCode::trivial(n);
    for m in 1..=n {
        let choices = intervals_in_code(&code, kmax);
        let &(sigma, tau) = choices.choose(&mut rng).expect("the empty interval is always present");
        let step = PiercingStep { neuron: m, sigma, tau };
        steps.push(step);
        let mut words: Vec<Codeword> = code.words().to_vec();
        words.extend(enumerate_interval(sigma, tau)?.into_iter().map(|g| g.with(m)));
        code = NeuralCode::new(n, words)?;
    }
    Ok((PiercingOrder::new(steps), code))
}

/// Every code reachable by piercing sequences on `n` neurons with ranks at
/// most `kmax`, neuron `m` added at step `m`, deduplicated by codeword set.
/// Each code is paired with the first order that produced it.
pub fn all_pierced_codes(n: usize, kmax: usize) -> Result<Vec<(PiercingOrder, NeuralCode)>> {
    if n > MAX_ORDER_ENUMERATION {
        return Err(Error::Guard {
            what: "neurons for exhaustive code generation",
            max: MAX_ORDER_ENUMERATION,
            got: n,
        });
    }
    let mut layer: Vec<(Vec<PiercingStep>, NeuralCode)> = vec![(Vec::new(), NeuralCode::trivial(n))];
    for m in 1..=n {
        let mut seen: HashSet<Vec<Codeword>> = HashSet::new();
        let mut next = Vec::new();
        for (steps, code) in &layer {
            for (sigma, tau) in intervals_in_code(code, kmax) {
                let mut words: Vec<Codeword> = code.words().to_vec();
                words.extend(enumerate_interval(sigma, tau)?.into_iter().map(|g| g.with(m)));
                let grown = NeuralCode::new(n, words)?;
                if seen.insert(code_key(&grown)) {
                    let mut s = steps.clone();
                    s.push(PiercingStep { neuron: m, sigma, tau });
                    next.push((s, grown));
                }
            }
        }
        layer = next;
    }
    Ok(layer
        .into_iter()
        .map(|(steps, code)| (PiercingOrder::new(steps), code))
        .collect())
}

fn parse_set(text: &str, line: usize) -> Result<Codeword> {
    let bad = |msg: String| Error::Parse { line, msg };
    let inner = text
        .strip_prefix('{')
        .and_then(|t| t.strip_suffix('}'))
        .ok_or_else(|| bad(format!("expected {{...}}, got {text:?}")))?;
    let mut set = Codeword::EMPTY;
    for tok in inner.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let i: usize = tok.parse().map_err(|_| bad(format!("bad neuron {tok:?}")))?;
        if i == 0 || i > MAX_NEURONS {
            return Err(bad(format!("neuron {i} out of range")));
        }
        set = set.with(i);
    }
    Ok(set)
}

/// Parses a piercing order: either JSON (a list of steps, or an object with
/// a `steps` list) or the rendered form, one `step i: sigma={..} tau={..}`
/// per line. Trailing `k=`/`l=` fields are ignored; `#` starts a comment.
pub fn parse_order(text: &str) -> Result<PiercingOrder> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('[') || trimmed.starts_with('{') {
        let json = |e: serde_json::Error| Error::Parse {
            line: e.line(),
            msg: e.to_string(),
        };
        let order = if trimmed.starts_with('[') {
            PiercingOrder::new(serde_json::from_str(trimmed).map_err(json)?)
        } else {
            serde_json::from_str(trimmed).map_err(json)?
        };
        for s in &order.steps {
            s.check()?;
        }
        return Ok(order);
    }
    let mut steps = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = |msg: String| Error::Parse { line: line_no, msg };
        let (head, rest) = line
            .split_once(':')
            .ok_or_else(|| bad(format!("expected 'step i: ...', got {line:?}")))?;
        let neuron: usize = head
            .trim()
            .strip_prefix("step")
            .map(str::trim)
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| bad(format!("bad step header {head:?}")))?;
        let mut sigma = None;
        let mut tau = None;
        for field in rest.split_whitespace() {
            if let Some(v) = field.strip_prefix("sigma=") {
                sigma = Some(parse_set(v, line_no)?);
            } else if let Some(v) = field.strip_prefix("tau=") {
                tau = Some(parse_set(v, line_no)?);
            }
        }
        let (Some(sigma), Some(tau)) = (sigma, tau) else {
            return Err(bad("step needs sigma= and tau=".into()));
        };
        steps.push(PiercingStep::new(neuron, sigma, tau)?);
    }
    Ok(PiercingOrder::new(steps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples::{key_code, key_steps, key_steps_alt};

    fn cw(list: &[usize]) -> Codeword {
        Codeword::from_neurons(list.iter().copied())
    }

    fn step(i: usize, s: &[usize], t: &[usize]) -> PiercingStep {
        PiercingStep::from_lists(i, s, t).unwrap()
    }

    #[test]
    fn detect_examples() {
        let code = key_code();
        let s5 = detect_piercing(&code, 5).unwrap().unwrap();
        assert_eq!(s5, step(5, &[3], &[2, 3]));
        assert_eq!((s5.k(), s5.ell()), (1, 1));

        let c4 = code.restrict_away(cw(&[5]));
        let s4 = detect_piercing(&c4, 4).unwrap().unwrap();
        assert_eq!(s4, step(4, &[], &[1, 2]));
        assert_eq!((s4.k(), s4.ell()), (2, 0));

        let one = NeuralCode::from_lists(1, &[&[1]]).unwrap();
        assert_eq!(detect_piercing(&one, 1).unwrap(), Some(step(1, &[], &[])));

        let silent = NeuralCode::from_lists(2, &[&[1]]).unwrap();
        assert_eq!(detect_piercing(&silent, 2), Err(Error::SilentNeuron(2)));
    }

    #[test]
    fn detect_rejects_non_piercings() {
        // Neuron 3 in the key code fires in 3, 23, 35, 235: restrictions
        // {∅, 2, 5, 25} fill [∅, 25] but 5 and 25 are not codewords.
        assert_eq!(detect_piercing(&key_code(), 3).unwrap(), None);
    }

    #[test]
    fn search_examples() {
        let code = key_code();
        let order = is_inductively_pierced(&code).unwrap().unwrap();
        assert_eq!(build_code(&order.steps).unwrap(), code);

        assert_eq!(
            is_inductively_pierced(&NeuralCode::trivial(0)).unwrap(),
            Some(PiercingOrder::default())
        );

        let no_triple =
            NeuralCode::from_lists(3, &[&[1], &[2], &[3], &[1, 2], &[1, 3], &[2, 3]]).unwrap();
        assert_eq!(is_inductively_pierced(&no_triple).unwrap(), None);

        let dup = NeuralCode::from_lists(2, &[&[1, 2]]).unwrap();
        assert!(matches!(is_inductively_pierced(&dup), Err(Error::Diagnostics { .. })));
    }

    #[test]
    fn key_orders_are_found() {
        let orders = all_piercing_orders(&key_code()).unwrap();
        let labels: Vec<Vec<usize>> = orders.iter().map(|o| o.neurons()).collect();
        assert!(labels.contains(&vec![1, 2, 3, 4, 5]));
        assert!(labels.contains(&vec![1, 4, 2, 3, 5]));
        assert!(!labels.contains(&vec![5, 3, 1, 2, 4]));
        let by_label: HashMap<Vec<usize>, &PiercingOrder> =
            orders.iter().map(|o| (o.neurons(), o)).collect();
        assert_eq!(by_label[&vec![1, 2, 3, 4, 5]].steps, key_steps());
        assert_eq!(by_label[&vec![1, 4, 2, 3, 5]].steps, key_steps_alt());
        let first = is_inductively_pierced(&key_code()).unwrap().unwrap();
        assert_eq!(first.steps, key_steps());
    }

    #[test]
    fn fast_examples() {
        let v = is_inductively_pierced_fast(&key_code()).unwrap();
        assert!(v.pierced);
        assert!(matches!(v.certificate, Certificate::Chordal(_)));

        let j1 = crate::polarize::code_of_ideal(&crate::samples::ideal_j1()).unwrap();
        let v = is_inductively_pierced_fast(&j1).unwrap();
        assert!(!v.pierced);
        match v.certificate {
            Certificate::ChordlessCycle(c) => assert_eq!(c.len(), 4),
            other => panic!("unexpected certificate {other:?}"),
        }

        assert!(is_inductively_pierced_fast(&NeuralCode::trivial(0)).unwrap().pierced);

        let no_triple =
            NeuralCode::from_lists(3, &[&[1], &[2], &[3], &[1, 2], &[1, 3], &[2, 3]]).unwrap();
        let v = is_inductively_pierced_fast(&no_triple).unwrap();
        assert!(!v.pierced);
        assert_eq!(v.cf_degrees, vec![3]);
    }

    #[test]
    fn key_profile() {
        let expected = PiercingProfile::from_entries(
            5,
            &[((0, 0), 1), ((1, 0), 2), ((1, 1), 1), ((2, 0), 1)],
        )
        .unwrap();
        let p = piercing_profile(&PiercingOrder::new(key_steps())).unwrap();
        assert_eq!(p, expected);
        assert_eq!(p.jk(), vec![1, 3, 1, 0, 0]);
        assert_eq!(p.render_marginals(), "j0=1 j1=3 j2=1");
        let alt = piercing_profile(&PiercingOrder::new(key_steps_alt())).unwrap();
        assert_eq!(alt, expected);

        let single = piercing_profile(&PiercingOrder::new(vec![step(1, &[], &[])])).unwrap();
        assert_eq!(single.entries(), vec![((0, 0), 1)]);
    }

    #[test]
    fn profile_validation() {
        assert!(PiercingProfile::from_entries(2, &[((1, 1), 1), ((0, 0), 1)]).is_err());
        assert!(PiercingProfile::from_entries(2, &[((0, 0), 1)]).is_err());
        assert!(PiercingProfile::from_entries(2, &[((0, 0), 2)]).is_ok());
    }

    #[test]
    fn build_examples() {
        assert_eq!(build_code(&key_steps()).unwrap(), key_code());
        assert_eq!(build_code(&key_steps_alt()).unwrap(), key_code());
        assert_eq!(
            build_code(&[step(1, &[], &[])]).unwrap(),
            NeuralCode::from_lists(1, &[&[1]]).unwrap()
        );
        assert_eq!(
            build_code(&[step(1, &[], &[]), step(2, &[], &[1])]).unwrap(),
            NeuralCode::full(2)
        );
        assert!(build_code(&[step(1, &[], &[]), step(1, &[], &[])]).is_err());
        assert!(build_code(&[step(1, &[], &[]), step(2, &[], &[3])]).is_err());
    }

    #[test]
    fn random_examples() {
        let (order, code) = random_pierced_code(1, 3, 99).unwrap();
        assert_eq!(order.steps, vec![step(1, &[], &[])]);
        assert_eq!(code, NeuralCode::from_lists(1, &[&[1]]).unwrap());

        let (order, code) = random_pierced_code(5, 5, 7).unwrap();
        assert_eq!(random_pierced_code(5, 5, 7).unwrap(), (order.clone(), code.clone()));
        assert_eq!(build_code(&order.steps).unwrap(), code);
        assert!(is_inductively_pierced(&code).unwrap().is_some());

        let (order, _) = random_pierced_code(3, 0, 1).unwrap();
        assert!(order.steps.iter().all(|s| s.k() == 0));
    }

    #[test]
    fn intervals_of_full_code() {
        // Intervals of the boolean lattice on 3 atoms: 3^3 = 27.
        assert_eq!(intervals_in_code(&NeuralCode::full(3), 3).len(), 27);
        assert_eq!(intervals_in_code(&NeuralCode::full(3), 0).len(), 8);
        let iv = intervals_in_code(&key_code(), 5);
        assert!(iv.contains(&(cw(&[3]), cw(&[2, 3]))));
        assert!(!iv.contains(&(cw(&[]), cw(&[3, 4]))));
    }

    #[test]
    fn relabel_moves_labels_to_positions() {
        let r = PiercingOrder::new(key_steps_alt()).relabeled();
        assert_eq!(r.neurons(), vec![1, 2, 3, 4, 5]);
        assert_eq!(r.steps[2], step(3, &[], &[1, 2]));
        assert_eq!(r.steps[4], step(5, &[4], &[3, 4]));
    }

    #[test]
    fn agreement_exhaustive_up_to_three() {
        for n in 0..=3usize {
            let all = 1u32 << n;
            for subset in 0u64..(1u64 << all) {
                let words = (0..all).filter(|w| subset >> w & 1 == 1).map(Codeword);
                let code = NeuralCode::new(n, words).unwrap();
                if !code.validate().is_clean() {
                    continue;
                }
                let slow = is_inductively_pierced(&code).unwrap();
                let fast = is_inductively_pierced_fast(&code).unwrap();
                assert_eq!(slow.is_some(), fast.pierced, "{code:?}");
            }
        }
    }

    #[test]
    fn order_parsing() {
        let order = PiercingOrder::new(key_steps());
        assert_eq!(parse_order(&order.render()).unwrap(), order);
        let json = serde_json::to_string(&order).unwrap();
        assert_eq!(parse_order(&json).unwrap(), order);
        let list = serde_json::to_string(&order.steps).unwrap();
        assert_eq!(parse_order(&list).unwrap(), order);
        let terse = "# replay\nstep 1: sigma={} tau={}\nstep 2: sigma={} tau={1}\n";
        assert_eq!(parse_order(terse).unwrap().len(), 2);
        assert!(parse_order("step 2: sigma={1} tau={}").is_err());
        assert!(parse_order("step x: sigma={} tau={}").is_err());
        assert!(parse_order("step 1: sigma={0} tau={}").is_err());
    }
}
