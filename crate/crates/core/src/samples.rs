//! Small worked examples used throughout the tests and by the CLI.

use crate::code::NeuralCode;
use crate::polarize::{PiercingStep, SquarefreeIdeal, SquarefreeMonomial};

/// The five-neuron running example
/// `{∅, 1, 2, 3, 4, 12, 14, 23, 24, 35, 124, 235}`.
pub fn key_code() -> NeuralCode {
    NeuralCode::from_lists(
        5,
        &[
            &[],
            &[1],
            &[2],
            &[3],
            &[4],
            &[1, 2],
            &[1, 4],
            &[2, 3],
            &[2, 4],
            &[3, 5],
            &[1, 2, 4],
            &[2, 3, 5],
        ],
    )
    .expect("valid code")
}

fn step(neuron: usize, sigma: &[usize], tau: &[usize]) -> PiercingStep {
    PiercingStep::from_lists(neuron, sigma, tau).expect("valid step")
}

/// Piercing order `1, 2, 3, 4, 5` of [`key_code`].
pub fn key_steps() -> Vec<PiercingStep> {
    vec![
        step(1, &[], &[]),
        step(2, &[], &[1]),
        step(3, &[], &[2]),
        step(4, &[], &[1, 2]),
        step(5, &[3], &[2, 3]),
    ]
}

/// Piercing order `1, 4, 2, 3, 5` of [`key_code`].
pub fn key_steps_alt() -> Vec<PiercingStep> {
    vec![
        step(1, &[], &[]),
        step(4, &[], &[1]),
        step(2, &[], &[1, 4]),
        step(3, &[], &[2]),
        step(5, &[3], &[2, 3]),
    ]
}

/// `{∅, 1, 12, 123}`, whose canonical form is not a shortest generating set.
pub fn nested_chain_code() -> NeuralCode {
    NeuralCode::from_lists(3, &[&[], &[1], &[1, 2], &[1, 2, 3]]).expect("valid code")
}

fn ideal(n: usize, gens: &[(&[usize], &[usize])]) -> SquarefreeIdeal {
    SquarefreeIdeal::new(
        n,
        gens.iter()
            .map(|(x, y)| SquarefreeMonomial::from_lists(x, y))
            .collect(),
    )
    .expect("valid ideal")
}

/// `(x1x3, x2x4)`: same total Betti numbers as [`ideal_j2`], not pierced.
pub fn ideal_j1() -> SquarefreeIdeal {
    ideal(4, &[(&[1, 3], &[]), (&[2, 4], &[])])
}

/// `(x1x4, x3x4)`.
pub fn ideal_j2() -> SquarefreeIdeal {
    ideal(4, &[(&[1, 4], &[]), (&[3, 4], &[])])
}

/// `(x1x4, x4y3)`: same graded Betti numbers as [`ideal_j2`].
pub fn ideal_j3() -> SquarefreeIdeal {
    ideal(4, &[(&[1, 4], &[]), (&[4], &[3])])
}
