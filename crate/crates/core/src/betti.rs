//! Betti tables of polarized neural ideals of inductively pierced codes:
//! closed forms from piercing counts, the step-by-step recursion, and the
//! inverse maps back to piercing counts.
//!
//! Everything is exact integer arithmetic. Intermediate sums in the closed
//! forms can go negative (the `-δ_{ℓ,0}` correction applies to every `k`),
//! so they are accumulated as `i64` and checked before being stored.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::piercing::{PiercingOrder, PiercingProfile};

/// `C(a, b)` with the convention that it is zero unless `0 <= b <= a`.
pub fn checked_binom(a: i64, b: i64) -> Option<u64> {
    if b < 0 || a < 0 || b > a {
        return Some(0);
    }
    let b = b.min(a - b) as u128;
    let a = a as u128;
    let mut acc: u128 = 1;
    for i in 0..b {
        acc = acc.checked_mul(a - i)? / (i + 1);
    }
    u64::try_from(acc).ok()
}

/// `C(a, b)`, zero outside `0 <= b <= a`. Panics on `u64` overflow, which
/// needs `a` above 60 or so.
pub fn binom(a: i64, b: i64) -> u64 {
    checked_binom(a, b).unwrap_or_else(|| panic!("C({a}, {b}) overflows u64"))
}

fn binom_i(a: i64, b: i64) -> i64 {
    i64::try_from(binom(a, b)).expect("binomial fits in i64")
}

fn sign(e: i64) -> i64 {
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Multigraded Betti numbers `β_{w,u,v}` of `S/J` with `S` on `n` pairs of
/// variables, `x` in degree `(1,0)` and `y` in degree `(0,1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BettiTable {
    n: usize,
    entries: BTreeMap<(usize, usize, usize), u64>,
}

impl BettiTable {
    pub fn new(n: usize) -> BettiTable {
        BettiTable {
            n,
            entries: BTreeMap::new(),
        }
    }

    /// The table of `S/0`: a single `1` at `(0, 0, 0)`.
    pub fn base(n: usize) -> BettiTable {
        let mut t = BettiTable::new(n);
        t.entries.insert((0, 0, 0), 1);
        t
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, w: usize, u: usize, v: usize) -> u64 {
        self.entries.get(&(w, u, v)).copied().unwrap_or(0)
    }

    /// Adds `count` at `(w, u, v)`; zero counts are not stored.
    pub fn add(&mut self, w: usize, u: usize, v: usize, count: u64) {
        if count > 0 {
            *self.entries.entry((w, u, v)).or_insert(0) += count;
        }
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Nonzero entries in lexicographic `(w, u, v)` order.
    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize, usize), u64)> + '_ {
        self.entries.iter().map(|(&k, &c)| (k, c))
    }

    pub fn graded(&self) -> GradedBetti {
        let mut entries = BTreeMap::new();
        for (&(w, u, v), &c) in &self.entries {
            *entries.entry((w, u + v)).or_insert(0) += c;
        }
        GradedBetti { n: self.n, entries }
    }

    pub fn total(&self) -> Vec<u64> {
        self.graded().total()
    }

    /// Largest `w` with a nonzero entry.
    pub fn pdim(&self) -> usize {
        self.entries.keys().map(|&(w, _, _)| w).max().unwrap_or(0)
    }

    /// Entries are only at `(0,0,0)` or on `u + v = w + 1`.
    pub fn is_linear(&self) -> bool {
        self.entries
            .keys()
            .all(|&(w, u, v)| (w, u, v) == (0, 0, 0) || (w > 0 && u + v == w + 1))
    }

    pub fn to_json(&self) -> BettiJson {
        BettiJson {
            n: self.n,
            total: self.total(),
            graded: self
                .graded()
                .entries()
                .map(|((w, j), c)| [w as u64, j as u64, c])
                .collect(),
            multigraded: self
                .entries()
                .map(|((w, u, v), c)| [w as u64, u as u64, v as u64, c])
                .collect(),
        }
    }
}

/// Graded Betti numbers `β_{w,j}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GradedBetti {
    n: usize,
    entries: BTreeMap<(usize, usize), u64>,
}

impl GradedBetti {
    pub fn from_entries(n: usize, entries: &[((usize, usize), u64)]) -> GradedBetti {
        let mut map = BTreeMap::new();
        for &(k, c) in entries {
            if c > 0 {
                *map.entry(k).or_insert(0) += c;
            }
        }
        GradedBetti { n, entries: map }
    }

    /// Graded table of a linear resolution given `β_{w,w+1}` for
    /// `w = 1, 2, ...`, plus `β_{0,0} = 1`.
    pub fn from_linear_strand(n: usize, strand: &[u64]) -> GradedBetti {
        let mut entries = vec![((0, 0), 1)];
        entries.extend(strand.iter().enumerate().map(|(i, &c)| ((i + 1, i + 2), c)));
        GradedBetti::from_entries(n, &entries)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, w: usize, j: usize) -> u64 {
        self.entries.get(&(w, j)).copied().unwrap_or(0)
    }

    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), u64)> + '_ {
        self.entries.iter().map(|(&k, &c)| (k, c))
    }

    /// `β_w = Σ_j β_{w,j}` for `w = 0..=pdim`.
    pub fn total(&self) -> Vec<u64> {
        let top = self.entries.keys().map(|&(w, _)| w).max();
        let Some(top) = top else {
            return Vec::new();
        };
        let mut out = vec![0u64; top + 1];
        for (&(w, _), &c) in &self.entries {
            out[w] += c;
        }
        out
    }

    /// `β_{w,w+1}` for `w = 1..n`.
    pub fn linear_strand(&self) -> Vec<u64> {
        (1..self.n.max(1)).map(|w| self.get(w, w + 1)).collect()
    }

    /// Macaulay-style table: columns are homological degrees, rows are
    /// `j - w`.
    pub fn render_triangle(&self) -> String {
        let total = self.total();
        let cols = total.len();
        let rows = self
            .entries
            .keys()
            .map(|&(w, j)| j.saturating_sub(w))
            .max()
            .unwrap_or(0);
        let width = total
            .iter()
            .map(|c| c.to_string().len())
            .max()
            .unwrap_or(1)
            .max(cols.saturating_sub(1).to_string().len());
        let mut out = String::new();
        let _ = write!(out, "{:>7}", "");
        for w in 0..cols {
            let _ = write!(out, " {:>width$}", w);
        }
        out.push('\n');
        let _ = write!(out, "{:>7}", "total:");
        for c in &total {
            let _ = write!(out, " {:>width$}", c);
        }
        out.push('\n');
        for r in 0..=rows {
            let _ = write!(out, "{:>7}", format!("{r}:"));
            for w in 0..cols {
                let c = self.get(w, w + r);
                if c == 0 {
                    let _ = write!(out, " {:>width$}", ".");
                } else {
                    let _ = write!(out, " {:>width$}", c);
                }
            }
            out.push('\n');
        }
        out
    }
}

/// Wire form of a Betti table, entries sorted lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiJson {
    pub n: usize,
    #[serde(default)]
    pub total: Vec<u64>,
    #[serde(default)]
    pub graded: Vec<[u64; 3]>,
    #[serde(default)]
    pub multigraded: Vec<[u64; 4]>,
}

impl BettiJson {
    pub fn multigraded_table(&self) -> BettiTable {
        let mut t = BettiTable::new(self.n);
        for &[w, u, v, c] in &self.multigraded {
            t.add(w as usize, u as usize, v as usize, c);
        }
        t
    }

    pub fn graded_table(&self) -> GradedBetti {
        let entries: Vec<((usize, usize), u64)> = self
            .graded
            .iter()
            .map(|&[w, j, c]| ((w as usize, j as usize), c))
            .collect();
        GradedBetti::from_entries(self.n, &entries)
    }
}

fn to_count(value: i64, what: &str) -> Result<u64> {
    u64::try_from(value).map_err(|_| Error::InvalidProfile(format!("{what} evaluates to {value}")))
}

/// `β_{w, w+1-v, v} = Σ_{k,ℓ} (j_{k,ℓ} - δ_{ℓ,0}) C(n-1-k-ℓ, w-v) C(ℓ, v)` for
/// `w > 0`, and `β_{0,0,0} = 1`.
///
/// The `-δ_{ℓ,0}` term is subtracted for every `k` in `0..n`, including
/// those with no `k`-piercings. Dropping it for absent `k` overcounts; on
/// the five-neuron example it would give six linear generators instead of
/// five.
pub fn multigraded_betti_closed(profile: &PiercingProfile) -> Result<BettiTable> {
    let n = profile.n();
    let ni = n as i64;
    let mut table = BettiTable::base(n);
    for w in 1..n {
        for v in 0..=w {
            let mut sum = 0i64;
            for k in 0..n {
                for l in 0..n {
                    let alpha = profile.jkl(k, l) as i64 - i64::from(l == 0);
                    if alpha == 0 {
                        continue;
                    }
                    let (ki, li) = (k as i64, l as i64);
                    sum += alpha * binom_i(ni - 1 - ki - li, (w - v) as i64) * binom_i(li, v as i64);
                }
            }
            let count = to_count(sum, &format!("β[{w},{},{v}]", w + 1 - v))?;
            table.add(w, w + 1 - v, v, count);
        }
    }
    Ok(table)
}

/// `β_{w,w+1} = Σ_k (j_k - 1) C(n-1-k, w)` for `w >= 1`, and `β_{0,0} = 1`.
pub fn graded_betti_closed(profile: &PiercingProfile) -> Result<GradedBetti> {
    let n = profile.n();
    let ni = n as i64;
    let jk = profile.jk();
    let mut entries = vec![((0, 0), 1)];
    for w in 1..n {
        let sum: i64 = (0..n)
            .map(|k| (jk[k] as i64 - 1) * binom_i(ni - 1 - k as i64, w as i64))
            .sum();
        entries.push(((w, w + 1), to_count(sum, &format!("β[{w},{}]", w + 1))?));
    }
    Ok(GradedBetti::from_entries(n, &entries))
}

/// Folds the one-step Betti recursion over a piercing order, starting from
/// the table of the zero ideal.
///
/// When the `m`-th neuron is a `k`-piercing contained in `ℓ` fields, each
/// `β_{w,u,v}` on `u + v = w + 1`, `u > 0` gains
/// `C(m-1-k-ℓ, u-1) C(ℓ, v)` plus the previous `β_{w-1,u-1,v}` (for
/// `w > 1`) on top of its previous value.
pub fn betti_recursive(order: &PiercingOrder) -> Result<BettiTable> {
    let total = order.len();
    let mut table = BettiTable::base(total);
    for (idx, step) in order.steps.iter().enumerate() {
        step.check()?;
        let m = idx + 1;
        let (k, l) = (step.k(), step.ell());
        if k + l > m - 1 {
            return Err(Error::InvalidStep {
                neuron: step.neuron,
                msg: format!("step {m} cannot involve {} earlier neurons", k + l),
            });
        }
        let free = (m - 1 - k - l) as i64;
        let mut next = BettiTable::base(total);
        for w in 1..m {
            for v in 0..=w {
                let u = w + 1 - v;
                let fresh = binom(free, u as i64 - 1) * binom(l as i64, v as i64);
                let shifted = if w > 1 { table.get(w - 1, u - 1, v) } else { 0 };
                next.add(w, u, v, fresh + shifted + table.get(w, u, v));
            }
        }
        table = next;
    }
    Ok(table)
}

/// Recovers `j_k` from the linear strand:
/// `j_k = 1 + Σ_{w=n-1-k}^{n-1} C(w, n-1-k) (-1)^{w-n+1+k} β_{w,w+1}`.
pub fn invert_graded(graded: &GradedBetti, n: usize) -> Result<Vec<u64>> {
    if let Some(((w, j), c)) = graded
        .entries()
        .find(|&((w, j), _)| !((w, j) == (0, 0) || (w > 0 && j == w + 1)))
    {
        return Err(Error::InvalidInversion(format!(
            "β[{w},{j}] = {c} lies off the linear strand"
        )));
    }
    let ni = n as i64;
    let mut jk = Vec::with_capacity(n);
    for k in 0..n {
        let ki = k as i64;
        let mut sum = 1i64;
        for w in (n - 1 - k)..n {
            let wi = w as i64;
            sum += binom_i(wi, ni - 1 - ki) * sign(wi - ni + 1 + ki) * graded.get(w, w + 1) as i64;
        }
        if sum < 0 {
            return Err(Error::InvalidInversion(format!("j{k} = {sum}")));
        }
        jk.push(sum as u64);
    }
    let total: u64 = jk.iter().sum();
    if total != n as u64 {
        return Err(Error::InvalidInversion(format!(
            "piercing counts {jk:?} sum to {total}, expected {n}"
        )));
    }
    Ok(jk)
}

/// Recovers `j_{a,b}`:
/// `j_{a,b} = δ_{b,0} + Σ_{v,w} β_{w,w+1-v,v} C(w-v, n-1-a-b) C(v, b) (-1)^{w-n+1+a}`.
pub fn invert_multigraded(table: &BettiTable) -> Result<PiercingProfile> {
    if !table.is_linear() {
        return Err(Error::InvalidInversion(
            "table has entries off the linear strand".into(),
        ));
    }
    let n = table.n();
    let ni = n as i64;
    let mut jkl = vec![vec![0u64; n]; n];
    for a in 0..n {
        for b in 0..n {
            let (ai, bi) = (a as i64, b as i64);
            let mut sum = i64::from(b == 0);
            for v in 0..n {
                for w in 0..n {
                    if v > w + 1 {
                        continue;
                    }
                    let beta = table.get(w, w + 1 - v, v) as i64;
                    if beta == 0 {
                        continue;
                    }
                    let (vi, wi) = (v as i64, w as i64);
                    sum += beta
                        * binom_i(wi - vi, ni - 1 - ai - bi)
                        * binom_i(vi, bi)
                        * sign(wi - ni + 1 + ai);
                }
            }
            if sum < 0 {
                return Err(Error::InvalidInversion(format!("j[{a},{b}] = {sum}")));
            }
            jkl[a][b] = sum as u64;
        }
    }
    PiercingProfile::new(n, jkl).map_err(|e| Error::InvalidInversion(e.to_string()))
}

/// `n - 1 - t` for the least `t` with `j_t > 1`; `0` when every `j_k <= 1`.
pub fn pdim_from_profile(profile: &PiercingProfile) -> usize {
    let jk = profile.jk();
    match jk.iter().position(|&c| c > 1) {
        Some(t) => profile.n() - 1 - t,
        None => 0,
    }
}
