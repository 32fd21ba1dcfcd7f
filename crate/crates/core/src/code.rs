//! Neural codes and codewords.
//!
//! Neurons are numbered from 1 in every external form (files, rendering,
//! error messages) and stored as bit positions starting at 0.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// Largest supported neuron count. Codewords are bit masks and the
/// polarized ring carries two variables per neuron.
pub const MAX_NEURONS: usize = 16;

/// A set of neurons, stored as a bit mask (bit `i` is neuron `i + 1`).
#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Codeword(pub u32);

impl Codeword {
    pub const EMPTY: Codeword = Codeword(0);

    /// Builds a codeword from 1-based neuron indices.
    pub fn from_neurons<I: IntoIterator<Item = usize>>(neurons: I) -> Codeword {
        let mut bits = 0u32;
        for i in neurons {
            assert!((1..=MAX_NEURONS).contains(&i), "neuron {i} out of range");
            bits |= 1 << (i - 1);
        }
        Codeword(bits)
    }

    /// All neurons `1..=n`.
    pub fn full(n: usize) -> Codeword {
        Codeword(if n >= 32 { u32::MAX } else { (1u32 << n) - 1 })
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// Membership of the 1-based neuron `i`.
    pub fn contains(self, i: usize) -> bool {
        i >= 1 && i <= 32 && self.0 & (1 << (i - 1)) != 0
    }

    pub fn is_subset(self, other: Codeword) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: Codeword) -> bool {
        self.0 & other.0 == 0
    }

    pub fn union(self, other: Codeword) -> Codeword {
        Codeword(self.0 | other.0)
    }

    pub fn intersection(self, other: Codeword) -> Codeword {
        Codeword(self.0 & other.0)
    }

    pub fn difference(self, other: Codeword) -> Codeword {
        Codeword(self.0 & !other.0)
    }

    pub fn with(self, i: usize) -> Codeword {
        Codeword(self.0 | (1 << (i - 1)))
    }

    pub fn without(self, i: usize) -> Codeword {
        Codeword(self.0 & !(1 << (i - 1)))
    }

    /// 1-based neuron indices in increasing order.
    pub fn neurons(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let low = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(low + 1)
        })
    }

    /// Neurons above `max` are present.
    pub(crate) fn exceeds(self, max: usize) -> bool {
        self.0 & !Codeword::full(max).0 != 0
    }

    /// Shorthand used for printing: "12" style is ambiguous past 9, so
    /// neurons are brace-listed.
    pub fn to_set_string(self) -> String {
        let items: Vec<String> = self.neurons().map(|i| i.to_string()).collect();
        format!("{{{}}}", items.join(","))
    }
}

impl fmt::Debug for Codeword {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_set_string())
    }
}

impl fmt::Display for Codeword {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_set_string())
    }
}

/// Iterates all submasks of `mask`, including `0` and `mask` itself.
pub(crate) fn submasks(mask: u32) -> impl Iterator<Item = u32> {
    let mut next = Some(mask);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 { None } else { Some((cur - 1) & mask) };
        Some(cur)
    })
}

/// A neural code on `n` neurons. Always contains the empty codeword.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct NeuralCode {
    n: usize,
    // Sorted by mask value, no duplicates.
    words: Vec<Codeword>,
}

impl fmt::Debug for NeuralCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NeuralCode(n={}, {:?})", self.n, self.display_order())
    }
}

impl NeuralCode {
    /// Builds a code, inserting the empty codeword if absent.
    pub fn new<I: IntoIterator<Item = Codeword>>(n: usize, words: I) -> Result<NeuralCode> {
        if n > MAX_NEURONS {
            return Err(Error::TooManyNeurons { n, max: MAX_NEURONS });
        }
        let mut set: BTreeSet<Codeword> = BTreeSet::new();
        set.insert(Codeword::EMPTY);
        for w in words {
            if w.exceeds(n) {
                let index = (32 - (w.0 & !Codeword::full(n).0).leading_zeros()) as usize;
                return Err(Error::IndexOutOfRange { index, n });
            }
            set.insert(w);
        }
        Ok(NeuralCode {
            n,
            words: set.into_iter().collect(),
        })
    }

    /// Convenience constructor from lists of 1-based neurons.
    pub fn from_lists(n: usize, lists: &[&[usize]]) -> Result<NeuralCode> {
        let mut words = Vec::with_capacity(lists.len());
        for list in lists {
            for &i in *list {
                if i == 0 || i > n {
                    return Err(Error::IndexOutOfRange { index: i, n });
                }
            }
            words.push(Codeword::from_neurons(list.iter().copied()));
        }
        NeuralCode::new(n, words)
    }

    /// The code `{∅}` on `n` neurons.
    pub fn trivial(n: usize) -> NeuralCode {
        NeuralCode {
            n,
            words: vec![Codeword::EMPTY],
        }
    }

    /// Every subset of `[n]`.
    pub fn full(n: usize) -> NeuralCode {
        NeuralCode {
            n,
            words: (0..1u32 << n).map(Codeword).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Codewords sorted by mask value.
    pub fn words(&self) -> &[Codeword] {
        &self.words
    }

    pub fn contains(&self, c: Codeword) -> bool {
        self.words.binary_search(&c).is_ok()
    }

    /// Neurons that fire in at least one codeword.
    pub fn support(&self) -> Codeword {
        self.words
            .iter()
            .fold(Codeword::EMPTY, |acc, &w| acc.union(w))
    }

    /// Codewords ordered by size, then lexicographically by neuron list.
    pub fn display_order(&self) -> Vec<Codeword> {
        let mut out = self.words.clone();
        out.sort_by_key(|w| (w.len(), w.neurons().collect::<Vec<_>>()));
        out
    }

    /// Removes neuron `i` from every codeword. With `reindex`, neurons
    /// above `i` shift down by one and the result has `n - 1` neurons;
    /// otherwise `i` stays as a silent neuron.
    pub fn delete_neuron(&self, i: usize, reindex: bool) -> Result<NeuralCode> {
        if i == 0 || i > self.n {
            return Err(Error::IndexOutOfRange { index: i, n: self.n });
        }
        let low = (1u32 << (i - 1)) - 1;
        let words = self.words.iter().map(|w| {
            if reindex {
                Codeword((w.0 & low) | ((w.0 >> i) << (i - 1)))
            } else {
                w.without(i)
            }
        });
        let n = if reindex { self.n - 1 } else { self.n };
        NeuralCode::new(n, words)
    }

    /// Removes every neuron in `set` without reindexing.
    pub fn restrict_away(&self, set: Codeword) -> NeuralCode {
        let mut words: Vec<Codeword> = self.words.iter().map(|w| w.difference(set)).collect();
        words.sort();
        words.dedup();
        NeuralCode { n: self.n, words }
    }

    /// Silent neurons and identical neuron pairs.
    pub fn validate(&self) -> CodeDiagnostics {
        let support = self.support();
        let silent: Vec<usize> = (1..=self.n).filter(|&i| !support.contains(i)).collect();
        let mut duplicate_pairs = Vec::new();
        for i in 1..=self.n {
            for j in i + 1..=self.n {
                if silent.contains(&i) || silent.contains(&j) {
                    continue;
                }
                if self.words.iter().all(|w| w.contains(i) == w.contains(j)) {
                    duplicate_pairs.push((i, j));
                }
            }
        }
        CodeDiagnostics {
            silent_neurons: silent,
            duplicate_pairs,
        }
    }

    /// Serializes to the code-file format: an `n=` header, then one
    /// codeword per line.
    pub fn to_code_file(&self) -> String {
        let mut out = format!("n={}\n", self.n);
        for w in self.display_order() {
            if w.is_empty() {
                out.push_str("0\n");
            } else {
                let items: Vec<String> = w.neurons().map(|i| i.to_string()).collect();
                out.push_str(&items.join(" "));
                out.push('\n');
            }
        }
        out
    }
}

/// Report from [`NeuralCode::validate`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CodeDiagnostics {
    pub silent_neurons: Vec<usize>,
    pub duplicate_pairs: Vec<(usize, usize)>,
}

impl CodeDiagnostics {
    pub fn is_clean(&self) -> bool {
        self.silent_neurons.is_empty() && self.duplicate_pairs.is_empty()
    }

    pub fn into_result(self) -> Result<()> {
        if self.is_clean() {
            Ok(())
        } else {
            Err(Error::Diagnostics {
                silent: self.silent_neurons,
                duplicates: self.duplicate_pairs,
            })
        }
    }
}

/// Result of [`parse_code`].
#[derive(Debug, Clone)]
pub struct ParsedCode {
    pub code: NeuralCode,
    /// Set when the file lacked the empty codeword and it was inserted.
    pub inserted_empty: bool,
}

/// Parses the code-file format.
///
/// One codeword per line as whitespace-separated positive integers; `0`
/// alone is the empty codeword; `#` starts a comment line; an optional
/// `n=<int>` header fixes the neuron count, which is otherwise the largest
/// index seen.
pub fn parse_code(text: &str) -> Result<ParsedCode> {
    let mut declared: Option<usize> = None;
    let mut lists: Vec<(usize, Vec<usize>)> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("n=") {
            if declared.is_some() || !lists.is_empty() {
                return Err(Error::Parse {
                    line: line_no,
                    msg: "n= header must come first".into(),
                });
            }
            let n: usize = rest.trim().parse().map_err(|_| Error::Parse {
                line: line_no,
                msg: format!("bad neuron count {rest:?}"),
            })?;
            if n > MAX_NEURONS {
                return Err(Error::TooManyNeurons { n, max: MAX_NEURONS });
            }
            declared = Some(n);
            continue;
        }
        if line == "0" {
            lists.push((line_no, Vec::new()));
            continue;
        }
        let mut items = Vec::new();
        for tok in line.split_whitespace() {
            let value: i64 = tok.parse().map_err(|_| Error::Parse {
                line: line_no,
                msg: format!("not an integer: {tok:?}"),
            })?;
            if value <= 0 {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("neuron index must be positive, got {value}"),
                });
            }
            items.push(value as usize);
        }
        lists.push((line_no, items));
    }

    let max_seen = lists
        .iter()
        .flat_map(|(_, l)| l.iter().copied())
        .max()
        .unwrap_or(0);
    let n = match declared {
        Some(n) => n,
        None if max_seen > MAX_NEURONS => {
            return Err(Error::TooManyNeurons {
                n: max_seen,
                max: MAX_NEURONS,
            })
        }
        None => max_seen,
    };

    let mut words = Vec::with_capacity(lists.len());
    let mut saw_empty = false;
    for (line, items) in &lists {
        if let Some(&bad) = items.iter().find(|&&i| i > n) {
            return Err(Error::Parse {
                line: *line,
                msg: format!("neuron index {bad} exceeds n={n}"),
            });
        }
        let w = Codeword::from_neurons(items.iter().copied());
        saw_empty |= w.is_empty();
        words.push(w);
    }
    Ok(ParsedCode {
        code: NeuralCode::new(n, words)?,
        inserted_empty: !saw_empty,
    })
}

/// All `γ` with `sigma ⊆ γ ⊆ tau`.
pub fn enumerate_interval(sigma: Codeword, tau: Codeword) -> Result<Vec<Codeword>> {
    if !sigma.is_subset(tau) {
        return Err(Error::NotAnInterval {
            sigma: sigma.to_set_string(),
            tau: tau.to_set_string(),
        });
    }
    let free = tau.difference(sigma).0;
    let mut out: Vec<Codeword> = submasks(free).map(|m| Codeword(sigma.0 | m)).collect();
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples::key_code;

    fn cw(list: &[usize]) -> Codeword {
        Codeword::from_neurons(list.iter().copied())
    }

    #[test]
    fn parse_small_code() {
        let parsed = parse_code("0\n1\n2\n1 2\n").unwrap();
        assert!(!parsed.inserted_empty);
        assert_eq!(parsed.code.n(), 2);
        assert_eq!(parsed.code, NeuralCode::full(2));
    }

    #[test]
    fn parse_key_example() {
        let text = "# key example\n0\n1\n2\n3\n4\n1 2\n1 4\n2 3\n2 4\n3 5\n1 2 4\n2 3 5\n";
        let parsed = parse_code(text).unwrap();
        assert_eq!(parsed.code, key_code());
        assert_eq!(parsed.code.len(), 12);
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(matches!(parse_code("x"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_code("1\n0 2"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_code("-1"), Err(Error::Parse { .. })));
        assert!(matches!(parse_code("n=2\n3"), Err(Error::Parse { .. })));
        assert!(matches!(parse_code("17"), Err(Error::TooManyNeurons { .. })));
        assert!(matches!(parse_code("n=20"), Err(Error::TooManyNeurons { .. })));
    }

    #[test]
    fn parse_inserts_empty_with_flag() {
        let parsed = parse_code("n=3\n1\n").unwrap();
        assert!(parsed.inserted_empty);
        assert_eq!(parsed.code.n(), 3);
        assert_eq!(parsed.code.words(), &[Codeword::EMPTY, cw(&[1])]);
    }

    #[test]
    fn delete_examples() {
        let c4 = key_code().delete_neuron(5, true).unwrap();
        let expected = NeuralCode::from_lists(
            4,
            &[&[], &[1], &[2], &[3], &[4], &[1, 2], &[1, 4], &[2, 3], &[2, 4], &[1, 2, 4]],
        )
        .unwrap();
        assert_eq!(c4, expected);

        let one = NeuralCode::from_lists(1, &[&[1]]).unwrap();
        assert_eq!(one.delete_neuron(1, true).unwrap(), NeuralCode::trivial(0));

        let two = NeuralCode::full(2).delete_neuron(2, true).unwrap();
        assert_eq!(two, NeuralCode::full(1));
    }

    #[test]
    fn delete_without_reindex_keeps_silent_neuron() {
        let code = key_code().delete_neuron(3, false).unwrap();
        assert_eq!(code.n(), 5);
        assert_eq!(code.validate().silent_neurons, vec![3]);
        let again = code.delete_neuron(3, false).unwrap();
        assert_eq!(again, code);
    }

    #[test]
    fn delete_reindexes_higher_neurons() {
        let code = NeuralCode::from_lists(3, &[&[1, 3], &[2]]).unwrap();
        let out = code.delete_neuron(2, true).unwrap();
        assert_eq!(out, NeuralCode::from_lists(2, &[&[1, 2]]).unwrap());
        assert!(code.delete_neuron(4, true).is_err());
        assert!(code.delete_neuron(0, true).is_err());
    }

    #[test]
    fn intervals() {
        assert_eq!(
            enumerate_interval(Codeword::EMPTY, cw(&[1, 2])).unwrap(),
            vec![cw(&[]), cw(&[1]), cw(&[2]), cw(&[1, 2])]
        );
        assert_eq!(
            enumerate_interval(cw(&[3]), cw(&[2, 3])).unwrap(),
            vec![cw(&[3]), cw(&[2, 3])]
        );
        assert_eq!(enumerate_interval(cw(&[1]), cw(&[1])).unwrap(), vec![cw(&[1])]);
        assert!(enumerate_interval(cw(&[1]), cw(&[2])).is_err());
    }

    #[test]
    fn diagnostics() {
        assert!(key_code().validate().is_clean());
        let silent = NeuralCode::from_lists(2, &[&[1]]).unwrap().validate();
        assert_eq!(silent.silent_neurons, vec![2]);
        assert!(silent.duplicate_pairs.is_empty());
        let dup = NeuralCode::from_lists(2, &[&[1, 2]]).unwrap().validate();
        assert_eq!(dup.duplicate_pairs, vec![(1, 2)]);
        assert!(dup.silent_neurons.is_empty());
    }

    #[test]
    fn serialize_format() {
        assert_eq!(NeuralCode::full(2).to_code_file(), "n=2\n0\n1\n2\n1 2\n");
    }

    mod props {
        use super::super::*;
        use proptest::prelude::*;

        fn arb_code() -> impl Strategy<Value = NeuralCode> {
            (0usize..=6).prop_flat_map(|n| {
                proptest::collection::vec(0u32..(1u32 << n), 0..20)
                    .prop_map(move |ws| NeuralCode::new(n, ws.into_iter().map(Codeword)).unwrap())
            })
        }

        proptest! {
            #[test]
            fn serialize_round_trips(code in arb_code()) {
                let parsed = parse_code(&code.to_code_file()).unwrap();
                prop_assert!(!parsed.inserted_empty);
                prop_assert_eq!(parsed.code, code);
            }

            #[test]
            fn interval_size(a in 0u32..256, b in 0u32..256) {
                let sigma = Codeword(a & b);
                let tau = Codeword(b);
                let iv = enumerate_interval(sigma, tau).unwrap();
                prop_assert_eq!(iv.len(), 1usize << (tau.len() - sigma.len()));
                prop_assert!(iv.iter().all(|g| sigma.is_subset(*g) && g.is_subset(tau)));
            }

            #[test]
            fn delete_is_idempotent(code in arb_code(), pick in 0usize..6) {
                prop_assume!(code.n() > 0);
                let i = pick % code.n() + 1;
                let once = code.delete_neuron(i, false).unwrap();
                prop_assert_eq!(once.delete_neuron(i, false).unwrap(), once);
            }
        }
    }
}

