//! Brute-force multigraded Betti numbers of squarefree monomial ideals over
//! F2, read off reduced homology of restrictions of the Stanley-Reisner
//! complex:
//!
//! `β_{w,σ}(S/J) = dim H̃_{|σ|-w-1}(Δ|σ)`.
//!
//! Variables use the packed layout of [`SquarefreeMonomial::packed`]: the
//! `x` block in the low half of a `u32`, the `y` block in the high half.

pub mod f2;

use std::collections::HashMap;

use rayon::prelude::*;

use crate::betti::BettiTable;
use crate::code::{submasks, NeuralCode};
use crate::error::{Error, Result};
use crate::piercing::is_inductively_pierced;
use crate::polarize::{polarized_ideal, SquarefreeIdeal, SquarefreeMonomial, Y_SHIFT};
use crate::pseudomonomial::canonical_form;

use self::f2::F2Matrix;

/// Largest restriction handed to [`restricted_homology`].
pub const MAX_RESTRICTION: usize = 24;
/// Largest number of distinct variables in a generator set.
pub const MAX_VARIABLES: usize = 20;
/// Default cap on homology computations per table.
pub const DEFAULT_MAX_RESTRICTIONS: usize = 1 << 20;

/// `dims[d + 1] = dim H̃_d` for `d = -1, 0, 1, ...`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyResult {
    dims: Vec<usize>,
}

impl HomologyResult {
    pub fn dim(&self, d: i64) -> usize {
        usize::try_from(d + 1)
            .ok()
            .and_then(|i| self.dims.get(i))
            .copied()
            .unwrap_or(0)
    }

    /// `(d, dim H̃_d)` for every nonzero group.
    pub fn nonzero(&self) -> impl Iterator<Item = (i64, usize)> + '_ {
        self.dims
            .iter()
            .enumerate()
            .filter(|(_, &h)| h > 0)
            .map(|(i, &h)| (i as i64 - 1, h))
    }

    pub fn is_acyclic(&self) -> bool {
        self.dims.iter().all(|&h| h == 0)
    }
}

/// Generator supports as packed masks.
fn supports(ideal: &SquarefreeIdeal) -> Vec<u32> {
    ideal.gens().iter().map(SquarefreeMonomial::packed).collect()
}

/// Faces of `Δ|σ` grouped by size: subsets of `σ` containing no generator
/// support. Each group is sorted.
fn faces_by_size(gens: &[u32], sigma: u32) -> Vec<Vec<u32>> {
    let inside: Vec<u32> = gens.iter().copied().filter(|&g| g & !sigma == 0).collect();
    let mut by_size = vec![Vec::new(); sigma.count_ones() as usize + 1];
    for f in submasks(sigma) {
        if inside.iter().all(|&g| g & !f != 0) {
            by_size[f.count_ones() as usize].push(f);
        }
    }
    for group in &mut by_size {
        group.sort_unstable();
    }
    while by_size.last().is_some_and(Vec::is_empty) {
        by_size.pop();
    }
    by_size
}

/// Rank of the boundary map from faces of size `s` to faces of size `s-1`.
fn boundary_rank(upper: &[u32], lower: &[u32]) -> usize {
    if upper.is_empty() || lower.is_empty() {
        return 0;
    }
    let index: HashMap<u32, usize> = lower.iter().enumerate().map(|(i, &f)| (f, i)).collect();
    let mut m = F2Matrix::with_capacity(lower.len(), upper.len());
    for &f in upper {
        let mut rest = f;
        let mut cols = Vec::with_capacity(f.count_ones() as usize);
        while rest != 0 {
            let bit = rest & rest.wrapping_neg();
            rest ^= bit;
            cols.push(index[&(f ^ bit)]);
        }
        m.push_row(cols);
    }
    m.rank()
}

fn homology_from_gens(gens: &[u32], sigma: u32) -> HomologyResult {
    let faces = faces_by_size(gens, sigma);
    // ranks[s] = rank of ∂ on faces of size s; ∂ of the empty face is zero.
    let mut ranks = vec![0usize; faces.len() + 1];
    for s in 1..faces.len() {
        ranks[s] = boundary_rank(&faces[s], &faces[s - 1]);
    }
    let dims = (0..faces.len())
        .map(|s| faces[s].len() - ranks[s] - ranks[s + 1])
        .collect();
    HomologyResult { dims }
}

/// Reduced F2 homology of the Stanley-Reisner complex of `ideal` restricted
/// to the packed variable set `sigma`, with the empty face in degree `-1`.
pub fn restricted_homology(ideal: &SquarefreeIdeal, sigma: u32) -> Result<HomologyResult> {
    let size = sigma.count_ones() as usize;
    if size > MAX_RESTRICTION {
        return Err(Error::Guard {
            what: "restriction size",
            max: MAX_RESTRICTION,
            got: size,
        });
    }
    Ok(homology_from_gens(&supports(ideal), sigma))
}

/// `(w, β_{w,σ})` for every nonzero Betti number in squarefree multidegree
/// `σ`.
pub fn betti_at(ideal: &SquarefreeIdeal, sigma: u32) -> Result<Vec<(usize, u64)>> {
    let h = restricted_homology(ideal, sigma)?;
    Ok(betti_from_homology(sigma, &h))
}

fn betti_from_homology(sigma: u32, h: &HomologyResult) -> Vec<(usize, u64)> {
    let size = sigma.count_ones() as i64;
    h.nonzero()
        .map(|(d, dim)| ((size - d - 1) as usize, dim as u64))
        .collect()
}

/// `(u, v)`: sizes of the `x` and `y` parts of a packed mask.
pub fn split_degree(sigma: u32) -> (usize, usize) {
    let x = sigma & ((1u32 << Y_SHIFT) - 1);
    (x.count_ones() as usize, (sigma >> Y_SHIFT).count_ones() as usize)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleOptions {
    /// Worker threads for the sweep; `None` uses the global rayon pool.
    pub threads: Option<usize>,
    pub max_restrictions: usize,
    /// Skip `σ` that are not a union of generator supports. Such `σ` are
    /// not in the lcm lattice and carry no Betti numbers (the Taylor
    /// complex has no cell in that degree).
    pub lcm_filter: bool,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions {
            threads: None,
            max_restrictions: DEFAULT_MAX_RESTRICTIONS,
            lcm_filter: true,
        }
    }
}

impl OracleOptions {
    pub fn with_threads(threads: usize) -> OracleOptions {
        OracleOptions {
            threads: Some(threads),
            ..OracleOptions::default()
        }
    }
}

/// Betti table of `S/J` with default options.
pub fn betti_table_oracle(ideal: &SquarefreeIdeal) -> Result<BettiTable> {
    betti_table_oracle_with(ideal, &OracleOptions::default())
}

pub fn betti_table_oracle_with(ideal: &SquarefreeIdeal, opts: &OracleOptions) -> Result<BettiTable> {
    let gens = supports(ideal);
    let support = ideal.packed_support();
    let vars = support.count_ones() as usize;
    if vars > MAX_VARIABLES {
        return Err(Error::Guard {
            what: "variables in the generators",
            max: MAX_VARIABLES,
            got: vars,
        });
    }
    let candidates: Vec<u32> = if opts.lcm_filter {
        submasks(support)
            .filter(|&s| gens.iter().filter(|&&g| g & !s == 0).fold(0, |a, &g| a | g) == s)
            .collect()
    } else {
        submasks(support).collect()
    };
    if candidates.len() > opts.max_restrictions {
        return Err(Error::Guard {
            what: "restricted homology computations",
            max: opts.max_restrictions,
            got: candidates.len(),
        });
    }

    let sweep = || -> Vec<(u32, Vec<(usize, u64)>)> {
        candidates
            .par_iter()
            .map(|&sigma| (sigma, betti_from_homology(sigma, &homology_from_gens(&gens, sigma))))
            .filter(|(_, b)| !b.is_empty())
            .collect()
    };
    let found = match opts.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t.max(1))
            .build()
            .map_err(|e| Error::ThreadPool(e.to_string()))?
            .install(sweep),
        None => sweep(),
    };

    let mut table = BettiTable::new(ideal.n());
    for (sigma, entries) in found {
        let (u, v) = split_degree(sigma);
        for (w, c) in entries {
            table.add(w, u, v, c);
        }
    }
    Ok(table)
}

/// `reg(S/J) = max{u + v - w}` over nonzero entries. With `of_ideal`,
/// `reg(J)`: the resolution of `J` is that of `S/J` with the `w = 0` term
/// dropped and homological degrees lowered by one.
pub fn regularity(table: &BettiTable, of_ideal: bool) -> Result<i64> {
    if table.is_empty() {
        return Err(Error::EmptyTable);
    }
    let shift = i64::from(of_ideal);
    table
        .entries()
        .filter(|&((w, _, _), _)| !of_ideal || w >= 1)
        .map(|((w, u, v), _)| (u + v) as i64 - (w as i64 - shift))
        .max()
        .ok_or(Error::ZeroIdeal)
}

/// Projective dimension of `S/J`: the largest `w` with a nonzero entry.
pub fn pdim(table: &BettiTable) -> usize {
    table.pdim()
}

/// Result of comparing the homological and combinatorial descriptions of
/// inductive piercedness on one code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularityVerdict {
    pub quadratic: bool,
    /// `None` for the zero ideal, whose resolution is trivially linear.
    pub reg_of_ideal: Option<i64>,
    pub is_ip: bool,
    /// `(quadratic and linear resolution) == is_ip`.
    pub consistent: bool,
}

impl RegularityVerdict {
    pub fn linear(&self) -> bool {
        matches!(self.reg_of_ideal, None | Some(2))
    }
}

/// Checks that a code with quadratic canonical form and no silent or
/// duplicate neurons is inductively pierced exactly when its polarized
/// ideal has regularity 2.
///
/// Codes violating the hypotheses are rejected: a canonical form with a
/// term of degree other than 2 gives [`Error::NotQuadratic`], and silent or
/// duplicate neurons give [`Error::Diagnostics`].
pub fn regularity_characterization(code: &NeuralCode) -> Result<RegularityVerdict> {
    let cf = canonical_form(code);
    if let Some(bad) = cf.elements().iter().find(|f| f.degree() != 2) {
        return Err(Error::NotQuadratic(bad.to_string()));
    }
    code.validate().into_result()?;
    let ideal = polarized_ideal(&cf);
    let reg_of_ideal = if ideal.is_zero() {
        None
    } else {
        Some(regularity(&betti_table_oracle(&ideal)?, true)?)
    };
    let is_ip = is_inductively_pierced(code)?.is_some();
    let mut verdict = RegularityVerdict {
        quadratic: true,
        reg_of_ideal,
        is_ip,
        consistent: false,
    };
    verdict.consistent = (verdict.quadratic && verdict.linear()) == is_ip;
    Ok(verdict)
}
