//! Pseudo-monomials `∏_{i∈σ} x_i ∏_{j∈τ} (1 - x_j)` and the canonical form
//! of a neural ideal.

use std::fmt;

use rayon::prelude::*;

use crate::code::{submasks, Codeword, NeuralCode};
use crate::error::{Error, Result};

/// A pseudo-monomial with plain support `sigma` and complemented support
/// `tau`. The supports are disjoint.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PseudoMonomial {
    sigma: Codeword,
    tau: Codeword,
}

impl PseudoMonomial {
    pub fn new(sigma: Codeword, tau: Codeword) -> Result<PseudoMonomial> {
        let overlap = sigma.intersection(tau);
        if let Some(i) = overlap.neurons().next() {
            return Err(Error::OverlappingSupports(i));
        }
        Ok(PseudoMonomial { sigma, tau })
    }

    pub fn from_lists(sigma: &[usize], tau: &[usize]) -> Result<PseudoMonomial> {
        PseudoMonomial::new(
            Codeword::from_neurons(sigma.iter().copied()),
            Codeword::from_neurons(tau.iter().copied()),
        )
    }

    pub fn sigma(&self) -> Codeword {
        self.sigma
    }

    pub fn tau(&self) -> Codeword {
        self.tau
    }

    pub fn degree(&self) -> usize {
        self.sigma.len() + self.tau.len()
    }

    /// True when the pseudo-monomial evaluates to zero on the indicator
    /// vector of `c`.
    pub fn vanishes_on(&self, c: Codeword) -> bool {
        !(self.sigma.is_subset(c) && self.tau.is_disjoint(c))
    }

    /// `self` divides `other`.
    pub fn divides(&self, other: &PseudoMonomial) -> bool {
        self.sigma.is_subset(other.sigma) && self.tau.is_subset(other.tau)
    }

    fn sort_key(&self) -> (usize, u32, u32) {
        (self.degree(), self.sigma.bits(), self.tau.bits())
    }
}

impl fmt::Display for PseudoMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.degree() == 0 {
            return f.write_str("1");
        }
        let mut factors: Vec<String> = self.sigma.neurons().map(|i| format!("x{i}")).collect();
        factors.extend(self.tau.neurons().map(|j| format!("(1-x{j})")));
        f.write_str(&factors.join("*"))
    }
}

impl fmt::Debug for PseudoMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `vanishes_on` as a free function.
pub fn vanishes_on(f: &PseudoMonomial, c: Codeword) -> bool {
    f.vanishes_on(c)
}

/// `divides` as a free function.
pub fn divides(f: &PseudoMonomial, g: &PseudoMonomial) -> bool {
    f.divides(g)
}

/// Minimal pseudo-monomials of a neural ideal, sorted by degree, then by
/// plain support as a bit pattern, then by complemented support.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CanonicalForm {
    n: usize,
    elements: Vec<PseudoMonomial>,
}

impl CanonicalForm {
    /// Wraps a list after sorting; no minimality check.
    pub fn from_elements(n: usize, mut elements: Vec<PseudoMonomial>) -> CanonicalForm {
        elements.sort_by_key(|f| f.sort_key());
        elements.dedup();
        CanonicalForm { n, elements }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn elements(&self) -> &[PseudoMonomial] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn max_degree(&self) -> usize {
        self.elements.iter().map(|f| f.degree()).max().unwrap_or(0)
    }

    /// Every element has degree exactly two (vacuously true when empty).
    pub fn is_quadratic(&self) -> bool {
        self.elements.iter().all(|f| f.degree() == 2)
    }

    /// Elements of degree one. These are `x_i` for silent neurons.
    pub fn linear_terms(&self) -> Vec<PseudoMonomial> {
        self.elements
            .iter()
            .copied()
            .filter(|f| f.degree() == 1)
            .collect()
    }

    pub fn render(&self) -> Vec<String> {
        self.elements.iter().map(|f| f.to_string()).collect()
    }
}

/// Patterns `c ∩ mask` realized by the code, as a bitset indexed by the
/// pattern's mask value.
struct Projection {
    bits: Vec<u64>,
}

impl Projection {
    fn new(code: &NeuralCode, mask: u32) -> Projection {
        let size = (mask as usize) + 1;
        let mut bits = vec![0u64; size.div_ceil(64)];
        for w in code.words() {
            let p = (w.bits() & mask) as usize;
            bits[p >> 6] |= 1 << (p & 63);
        }
        Projection { bits }
    }

    fn present(&self, pattern: u32) -> bool {
        let p = pattern as usize;
        self.bits[p >> 6] & (1 << (p & 63)) != 0
    }
}

/// Minimal elements among vanishing pseudo-monomials with support `mask`.
///
/// `(σ, τ)` with `σ ∪ τ = mask` vanishes on the code iff the pattern `σ`
/// never occurs as `c ∩ mask`. Vanishing is closed under taking multiples,
/// so minimality only needs the one-variable-smaller divisors, and
/// `(σ∖i, τ)` (resp. `(σ, τ∖i)`) fails to vanish exactly when the pattern
/// `σ∖i` (resp. `σ∪i`) occurs.
fn minimal_with_support(code: &NeuralCode, mask: u32, out: &mut Vec<PseudoMonomial>) {
    let proj = Projection::new(code, mask);
    for sigma in submasks(mask) {
        if proj.present(sigma) {
            continue;
        }
        let mut rest = mask;
        let mut minimal = true;
        while rest != 0 {
            let bit = rest & rest.wrapping_neg();
            rest &= rest - 1;
            if !proj.present(sigma ^ bit) {
                minimal = false;
                break;
            }
        }
        if minimal {
            out.push(PseudoMonomial {
                sigma: Codeword(sigma),
                tau: Codeword(mask & !sigma),
            });
        }
    }
}

/// Canonical form of the neural ideal of `code`: the divisibility-minimal
/// pseudo-monomials vanishing on every codeword.
pub fn canonical_form(code: &NeuralCode) -> CanonicalForm {
    let n = code.n();
    let elements: Vec<PseudoMonomial> = (1u32..(1u32 << n))
        .into_par_iter()
        .fold(Vec::new, |mut acc, mask| {
            minimal_with_support(code, mask, &mut acc);
            acc
        })
        .reduce(Vec::new, |mut a, mut b| {
            a.append(&mut b);
            a
        });
    CanonicalForm::from_elements(n, elements)
}
