//! Polarization `(1 - x_i) ↦ y_i`, squarefree monomial ideals in
//! `F2[x_1..x_n, y_1..y_n]`, and the piercing-step ideal recursion.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::code::{Codeword, NeuralCode, MAX_NEURONS};
use crate::error::{Error, Result};
use crate::pseudomonomial::{CanonicalForm, PseudoMonomial};

/// A variable of the polarized ring. Indices are 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variable {
    X(usize),
    Y(usize),
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Variable::X(i) => write!(f, "x{i}"),
            Variable::Y(i) => write!(f, "y{i}"),
        }
    }
}

/// Bit offset of the y-block in [`SquarefreeMonomial::packed`].
pub const Y_SHIFT: u32 = MAX_NEURONS as u32;

/// `∏_{i∈xsupp} x_i ∏_{j∈ysupp} y_j`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct SquarefreeMonomial {
    x: Codeword,
    y: Codeword,
}

impl SquarefreeMonomial {
    pub fn new(x: Codeword, y: Codeword) -> SquarefreeMonomial {
        SquarefreeMonomial { x, y }
    }

    pub fn from_lists(x: &[usize], y: &[usize]) -> SquarefreeMonomial {
        SquarefreeMonomial {
            x: Codeword::from_neurons(x.iter().copied()),
            y: Codeword::from_neurons(y.iter().copied()),
        }
    }

    pub fn xsupp(&self) -> Codeword {
        self.x
    }

    pub fn ysupp(&self) -> Codeword {
        self.y
    }

    /// `(x-degree, y-degree)`.
    pub fn multidegree(&self) -> (usize, usize) {
        (self.x.len(), self.y.len())
    }

    pub fn degree(&self) -> usize {
        self.x.len() + self.y.len()
    }

    /// Support as one mask: x-block in the low bits, y-block from
    /// [`Y_SHIFT`].
    pub fn packed(&self) -> u32 {
        self.x.bits() | (self.y.bits() << Y_SHIFT)
    }

    pub fn from_packed(bits: u32) -> SquarefreeMonomial {
        let low = (1u32 << Y_SHIFT) - 1;
        SquarefreeMonomial {
            x: Codeword(bits & low),
            y: Codeword(bits >> Y_SHIFT),
        }
    }

    pub fn divides(&self, other: &SquarefreeMonomial) -> bool {
        self.x.is_subset(other.x) && self.y.is_subset(other.y)
    }

    pub fn times(&self, v: Variable) -> SquarefreeMonomial {
        match v {
            Variable::X(i) => SquarefreeMonomial { x: self.x.with(i), y: self.y },
            Variable::Y(i) => SquarefreeMonomial { x: self.x, y: self.y.with(i) },
        }
    }

    pub fn variables(&self) -> Vec<Variable> {
        let mut out: Vec<Variable> = self.x.neurons().map(Variable::X).collect();
        out.extend(self.y.neurons().map(Variable::Y));
        out
    }

    /// Neurons touched by either block.
    pub fn neurons(&self) -> Codeword {
        self.x.union(self.y)
    }
}

impl Ord for SquarefreeMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.variables().cmp(&other.variables()))
    }
}

impl PartialOrd for SquarefreeMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for SquarefreeMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.degree() == 0 {
            return f.write_str("1");
        }
        let names: Vec<String> = self.variables().iter().map(|v| v.to_string()).collect();
        f.write_str(&names.join("*"))
    }
}

impl fmt::Debug for SquarefreeMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for SquarefreeMonomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for SquarefreeMonomial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        parse_monomial(&text).map_err(serde::de::Error::custom)
    }
}

/// Parses `"x1*x3"`, `"x5*y3"`, or `"1"`.
pub fn parse_monomial(text: &str) -> std::result::Result<SquarefreeMonomial, String> {
    let text = text.trim();
    let mut m = SquarefreeMonomial::default();
    if text == "1" {
        return Ok(m);
    }
    for factor in text.split('*') {
        let factor = factor.trim();
        let mut chars = factor.chars();
        let block = chars.next().unwrap_or(' ');
        let i: usize = chars
            .as_str()
            .parse()
            .map_err(|_| format!("bad factor {factor:?}"))?;
        if i == 0 || i > MAX_NEURONS {
            return Err(format!("index out of range in {factor:?}"));
        }
        let v = match block {
            'x' => Variable::X(i),
            'y' => Variable::Y(i),
            _ => return Err(format!("bad factor {factor:?}")),
        };
        let next = m.times(v);
        if next == m {
            return Err(format!("repeated factor {factor:?}"));
        }
        m = next;
    }
    Ok(m)
}

/// A squarefree monomial ideal on `n` variable pairs, stored by its minimal
/// generators in rendering order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct SquarefreeIdeal {
    n: usize,
    gens: Vec<SquarefreeMonomial>,
}

fn reduce_to_antichain(mut gens: Vec<SquarefreeMonomial>) -> (Vec<SquarefreeMonomial>, bool) {
    let before = gens.len();
    gens.sort();
    gens.dedup();
    let keep: Vec<SquarefreeMonomial> = gens
        .iter()
        .copied()
        .filter(|g| !gens.iter().any(|h| h != g && h.divides(g)))
        .collect();
    let reduced = keep.len() != before;
    (keep, reduced)
}

impl SquarefreeIdeal {
    /// Builds the ideal generated by `gens`, keeping only minimal ones.
    pub fn new(n: usize, gens: Vec<SquarefreeMonomial>) -> Result<SquarefreeIdeal> {
        if n > MAX_NEURONS {
            return Err(Error::TooManyNeurons { n, max: MAX_NEURONS });
        }
        for g in &gens {
            if let Some(i) = g.x.intersection(g.y).neurons().next() {
                return Err(Error::OverlappingSupports(i));
            }
            if g.neurons().exceeds(n) {
                let index = g.neurons().neurons().last().unwrap_or(0);
                return Err(Error::IndexOutOfRange { index, n });
            }
        }
        let (gens, _) = reduce_to_antichain(gens);
        Ok(SquarefreeIdeal { n, gens })
    }

    pub fn zero(n: usize) -> SquarefreeIdeal {
        SquarefreeIdeal { n, gens: Vec::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gens(&self) -> &[SquarefreeMonomial] {
        &self.gens
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn contains_generator(&self, m: &SquarefreeMonomial) -> bool {
        self.gens.contains(m)
    }

    /// Union of all generator supports, packed as in
    /// [`SquarefreeMonomial::packed`].
    pub fn packed_support(&self) -> u32 {
        self.gens.iter().fold(0, |acc, g| acc | g.packed())
    }

    /// Replace every `y_i` by `x_i`. Returns `None` when the substituted
    /// generators are no longer distinct and minimal.
    pub fn substitute_y_to_x(&self) -> Option<SquarefreeIdeal> {
        let gens = self
            .gens
            .iter()
            .map(|g| SquarefreeMonomial::new(g.x.union(g.y), Codeword::EMPTY))
            .collect();
        let (gens, reduced) = reduce_to_antichain(gens);
        (!reduced).then_some(SquarefreeIdeal { n: self.n, gens })
    }

    /// `"x1*x3, x4*x5, x5*y3"`.
    pub fn render(&self) -> String {
        self.render_list().join(", ")
    }

    pub fn render_list(&self) -> Vec<String> {
        self.gens.iter().map(|g| g.to_string()).collect()
    }
}

/// Parses the monomial-list format: one monomial per line, `#` comments,
/// optional `n=<int>` header (otherwise the largest index seen).
pub fn parse_ideal(text: &str) -> Result<SquarefreeIdeal> {
    let mut declared = None;
    let mut gens = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("n=") {
            let n: usize = rest.trim().parse().map_err(|_| Error::Parse {
                line: lineno + 1,
                msg: format!("bad variable count {rest:?}"),
            })?;
            declared = Some(n);
            continue;
        }
        let m = parse_monomial(line).map_err(|msg| Error::Parse {
            line: lineno + 1,
            msg,
        })?;
        gens.push(m);
    }
    let seen = gens
        .iter()
        .map(|g| g.neurons().neurons().last().unwrap_or(0))
        .max()
        .unwrap_or(0);
    SquarefreeIdeal::new(declared.unwrap_or(seen), gens)
}

/// The code cut out by an ideal: every `c ⊆ [n]` on which all depolarized
/// generators vanish.
pub fn code_of_ideal(ideal: &SquarefreeIdeal) -> Result<NeuralCode> {
    let fs = ideal
        .gens()
        .iter()
        .map(depolarize)
        .collect::<Result<Vec<_>>>()?;
    let words = (0u32..1 << ideal.n())
        .map(Codeword)
        .filter(|&c| fs.iter().all(|f| f.vanishes_on(c)));
    NeuralCode::new(ideal.n(), words)
}

/// `x_i ↦ x_i`, `(1 - x_j) ↦ y_j`.
pub fn polarize(f: &PseudoMonomial) -> SquarefreeMonomial {
    SquarefreeMonomial::new(f.sigma(), f.tau())
}

/// `x_i ↦ x_i`, `y_j ↦ 1 - x_j`. Fails if some `x_i y_i` divides `m`.
pub fn depolarize(m: &SquarefreeMonomial) -> Result<PseudoMonomial> {
    PseudoMonomial::new(m.xsupp(), m.ysupp())
}

/// The polarized neural ideal generated by the image of a canonical form.
pub fn polarized_ideal(cf: &CanonicalForm) -> SquarefreeIdeal {
    let gens = cf.elements().iter().map(polarize).collect();
    SquarefreeIdeal::new(cf.n(), gens).expect("canonical form elements have disjoint supports")
}

/// One step of a piercing construction: `neuron` enters as a piercing of
/// the interval `[sigma, tau]` of the code built so far.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PiercingStep {
    pub neuron: usize,
    #[serde(with = "neuron_list")]
    pub sigma: Codeword,
    #[serde(with = "neuron_list")]
    pub tau: Codeword,
}

mod neuron_list {
    use super::Codeword;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(c: &Codeword, s: S) -> Result<S::Ok, S::Error> {
        c.neurons().collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Codeword, D::Error> {
        let list = Vec::<usize>::deserialize(d)?;
        if let Some(bad) = list.iter().find(|&&i| i == 0 || i > super::MAX_NEURONS) {
            return Err(serde::de::Error::custom(format!("neuron {bad} out of range")));
        }
        Ok(Codeword::from_neurons(list))
    }
}

impl PiercingStep {
    pub fn new(neuron: usize, sigma: Codeword, tau: Codeword) -> Result<PiercingStep> {
        let step = PiercingStep { neuron, sigma, tau };
        step.check()?;
        Ok(step)
    }

    pub fn from_lists(neuron: usize, sigma: &[usize], tau: &[usize]) -> Result<PiercingStep> {
        PiercingStep::new(
            neuron,
            Codeword::from_neurons(sigma.iter().copied()),
            Codeword::from_neurons(tau.iter().copied()),
        )
    }

    pub fn check(&self) -> Result<()> {
        let invalid = |msg: &str| Error::InvalidStep {
            neuron: self.neuron,
            msg: msg.to_string(),
        };
        if self.neuron == 0 || self.neuron > MAX_NEURONS {
            return Err(invalid("neuron index out of range"));
        }
        if !self.sigma.is_subset(self.tau) {
            return Err(invalid("sigma is not contained in tau"));
        }
        if self.tau.contains(self.neuron) {
            return Err(invalid("tau contains the pierced neuron"));
        }
        Ok(())
    }

    /// Rank of the pierced interval, `|tau| - |sigma|`.
    pub fn k(&self) -> usize {
        self.tau.len() - self.sigma.len()
    }

    /// Number of fields containing the new neuron, `|sigma|`.
    pub fn ell(&self) -> usize {
        self.sigma.len()
    }

    /// Variables `x_i` for earlier neurons outside `tau` and `y_j` for
    /// `j ∈ sigma`, with `prior` the set of earlier neurons.
    pub fn piercing_variables(&self, prior: Codeword) -> Vec<Variable> {
        let mut out: Vec<Variable> = prior.difference(self.tau).neurons().map(Variable::X).collect();
        out.extend(self.sigma.neurons().map(Variable::Y));
        out
    }
}

impl fmt::Display for PiercingStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "step {}: sigma={} tau={} k={} l={}",
            self.neuron,
            self.sigma,
            self.tau,
            self.k(),
            self.ell()
        )
    }
}

/// Piercing ideal for the newest neuron `n`, whose predecessors are
/// `1..n-1`.
pub fn piercing_ideal(step: &PiercingStep, n: usize) -> Result<Vec<Variable>> {
    step.check()?;
    let prior = Codeword::full(n.saturating_sub(1));
    if step.neuron != n || !step.tau.is_subset(prior) {
        return Err(Error::InvalidStep {
            neuron: step.neuron,
            msg: format!("expected the newest neuron {n} over neurons 1..{}", n.saturating_sub(1)),
        });
    }
    Ok(step.piercing_variables(prior))
}

/// `J_n = J_{n-1} + x_n · p_n` for the step adding neuron `n = J_{n-1}.n + 1`.
pub fn extend_ideal(prev: &SquarefreeIdeal, step: &PiercingStep) -> Result<SquarefreeIdeal> {
    let n = prev.n + 1;
    let vars = piercing_ideal(step, n)?;
    let base = SquarefreeMonomial::from_lists(&[n], &[]);
    let mut gens = prev.gens.clone();
    gens.extend(vars.into_iter().map(|v| base.times(v)));
    let (gens, reduced) = reduce_to_antichain(gens);
    if reduced {
        return Err(Error::InvalidStep {
            neuron: step.neuron,
            msg: "new generators are not minimal".into(),
        });
    }
    Ok(SquarefreeIdeal { n, gens })
}
