//! Deterministic finite automata over vertex colors.

use std::collections::{BTreeSet, HashMap};

use crate::arena::Color;
use crate::error::{Error, Result, ValidationReport, ViolationKind};

/// A DFA `(Q, C, q_I, δ, F)`. The transition table may be partial until the
/// automaton has passed [`validate_dfa`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dfa {
    states: Vec<String>,
    alphabet: Vec<Color>,
    initial: usize,
    accepting: BTreeSet<usize>,
    /// Row-major `|Q| x |C|` table.
    transitions: Vec<Option<usize>>,
    color_index: HashMap<Color, usize>,
}

impl Dfa {
    /// Creates a DFA with no transitions. `states` must contain `initial` and
    /// every accepting index.
    pub fn new(
        states: Vec<String>,
        alphabet: Vec<Color>,
        initial: usize,
        accepting: impl IntoIterator<Item = usize>,
    ) -> Self {
        let color_index = alphabet
            .iter()
            .enumerate()
            .map(|(i, c)| (c.clone(), i))
            .collect();
        let transitions = vec![None; states.len() * alphabet.len()];
        Dfa {
            states,
            alphabet,
            initial,
            accepting: accepting.into_iter().collect(),
            transitions,
            color_index,
        }
    }

    /// Sets `δ(src, color) = dst`, returning the previous target.
    pub fn set_transition(&mut self, src: usize, color: usize, dst: usize) -> Option<usize> {
        let k = src * self.alphabet.len() + color;
        self.transitions[k].replace(dst)
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn state_name(&self, q: usize) -> &str {
        &self.states[q]
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| s == name)
    }

    pub fn alphabet(&self) -> &[Color] {
        &self.alphabet
    }

    pub fn color_index(&self, c: &Color) -> Option<usize> {
        self.color_index.get(c).copied()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn accepting(&self) -> &BTreeSet<usize> {
        &self.accepting
    }

    pub fn is_accepting(&self, q: usize) -> bool {
        self.accepting.contains(&q)
    }

    pub fn transition(&self, q: usize, color: usize) -> Option<usize> {
        self.transitions[q * self.alphabet.len() + color]
    }

    /// `δ(q, c)` on a validated automaton.
    pub fn step(&self, q: usize, color: usize) -> usize {
        self.transition(q, color)
            .expect("transition table is total after validation")
    }

    /// `δ*(word)`: the state reached from the initial state.
    pub fn run(&self, word: &[Color]) -> Result<usize> {
        self.run_from(self.initial, word)
    }

    /// Like [`Dfa::run`], starting from `q`.
    pub fn run_from(&self, mut q: usize, word: &[Color]) -> Result<usize> {
        for (position, c) in word.iter().enumerate() {
            let ci = self.color_index(c).ok_or_else(|| Error::UnknownColor {
                position,
                color: c.0.clone(),
            })?;
            q = self.transition(q, ci).ok_or_else(|| {
                let mut report = ValidationReport::default();
                report.push(
                    format!("transition ({}, {c})", self.states[q]),
                    ViolationKind::TransitionTableNotTotal,
                );
                Error::Invalid(report)
            })?;
        }
        Ok(q)
    }

    pub fn accepts(&self, word: &[Color]) -> Result<bool> {
        Ok(self.is_accepting(self.run(word)?))
    }
}

/// `δ*` as a free function.
pub fn dfa_run(d: &Dfa, word: &[Color]) -> Result<usize> {
    d.run(word)
}

/// Checks the DFA invariants and that every arena color is in the alphabet.
pub fn validate_dfa<'a>(
    d: &Dfa,
    arena_colors: impl IntoIterator<Item = &'a Color>,
) -> ValidationReport {
    let mut report = ValidationReport::default();
    let n = d.num_states();
    if d.initial >= n {
        report.push("initial", ViolationKind::UnknownState);
    } else if d.accepting.contains(&d.initial) {
        report.push(
            format!("state {}", d.states[d.initial]),
            ViolationKind::EpsilonAccepted,
        );
    }
    for &q in &d.accepting {
        if q >= n {
            report.push(format!("accepting #{q}"), ViolationKind::UnknownState);
        }
    }
    for q in 0..n {
        for (ci, c) in d.alphabet.iter().enumerate() {
            match d.transition(q, ci) {
                None => report.push(
                    format!("transition ({}, {c})", d.states[q]),
                    ViolationKind::TransitionTableNotTotal,
                ),
                Some(t) if t >= n => report.push(
                    format!("transition ({}, {c})", d.states[q]),
                    ViolationKind::UnknownState,
                ),
                Some(_) => {}
            }
        }
    }
    for c in arena_colors {
        if d.color_index(c).is_none() {
            report.push("arena", ViolationKind::UnknownColor(c.0.clone()));
        }
    }
    report
}
