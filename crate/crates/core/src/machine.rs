//! The stack-sorting operator and the greedy machine of `t` stacks in series.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::words::{Letter, StackWord};

/// Largest `t` whose move alphabet fits in `A..=Y`.
pub const MAX_STACKS: usize = 24;

/// One pass through a single stack kept increasing from top to bottom.
pub fn stack_sort(p: &Permutation) -> Permutation {
    let mut stack: Vec<u32> = Vec::with_capacity(p.len());
    let mut out = Vec::with_capacity(p.len());
    for &x in p.entries() {
        while let Some(&top) = stack.last() {
            if x < top {
                break;
            }
            out.push(top);
            stack.pop();
        }
        stack.push(x);
    }
    out.extend(stack.into_iter().rev());
    Permutation::from_vec_unchecked(out)
}

/// `s^t(p)`.
pub fn iterate_sort(p: &Permutation, t: usize) -> Permutation {
    let mut cur = p.clone();
    for _ in 0..t {
        if cur.is_identity() {
            break;
        }
        cur = stack_sort(&cur);
    }
    cur
}

pub fn is_t_stack_sortable(p: &Permutation, t: usize) -> bool {
    iterate_sort(p, t).is_identity()
}

/// Smallest `t` with `s^t(p)` the identity. Always at most `max(n - 1, 0)`.
pub fn min_sorting_passes(p: &Permutation) -> usize {
    let mut cur = p.clone();
    let mut passes = 0;
    while !cur.is_identity() {
        cur = stack_sort(&cur);
        passes += 1;
    }
    passes
}

/// A single move of the series machine, with the configuration after it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub step: usize,
    pub letter: char,
    pub value: u32,
    /// Stack contents listed bottom to top.
    pub stacks: Vec<Vec<u32>>,
    pub output: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesRun {
    pub word: StackWord,
    pub output: Permutation,
}

/// Configuration of `t` stacks in series: input queue, stacks, output.
#[derive(Clone, Debug)]
pub struct SeriesMachine {
    input: Vec<u32>,
    next_input: usize,
    // Each stack is stored bottom first, so it must be strictly decreasing.
    stacks: Vec<Vec<u32>>,
    output: Vec<u32>,
    trace: Vec<Letter>,
}

impl SeriesMachine {
    pub fn new(p: &Permutation, t: usize) -> Result<Self> {
        if t == 0 || t > MAX_STACKS {
            return Err(Error::StackCount { t, max: MAX_STACKS });
        }
        Ok(Self {
            input: p.entries().to_vec(),
            next_input: 0,
            stacks: vec![Vec::new(); t],
            output: Vec::with_capacity(p.len()),
            trace: Vec::with_capacity((t + 1) * p.len()),
        })
    }

    pub fn is_done(&self) -> bool {
        self.output.len() == self.input.len()
    }

    fn top(&self, i: usize) -> Option<u32> {
        self.stacks[i].last().copied()
    }

    /// Performs the next greedy move and returns `(letter, value moved)`.
    pub fn step(&mut self) -> Option<(Letter, u32)> {
        if self.is_done() {
            return None;
        }
        let t = self.stacks.len();

        if let Some(&x) = self.input.get(self.next_input) {
            if self.top(0).is_none_or(|a| x < a) {
                self.next_input += 1;
                self.push(0, x);
                return Some(self.record(0, x));
            }
        }

        for i in 0..t - 1 {
            let Some(a) = self.top(i) else { continue };
            if self.top(i + 1).is_none_or(|b| a < b) {
                self.stacks[i].pop();
                self.push(i + 1, a);
                return Some(self.record(i as Letter + 1, a));
            }
        }

        let x = self.stacks[t - 1]
            .pop()
            .expect("series machine stalled: no legal move with entries remaining");
        self.output.push(x);
        Some(self.record(t as Letter, x))
    }

    fn push(&mut self, i: usize, x: u32) {
        let stack = &mut self.stacks[i];
        assert!(
            stack.last().is_none_or(|&top| x < top),
            "internal error: stack {} would stop increasing top-to-bottom ({} onto {:?})",
            i + 1,
            x,
            stack
        );
        stack.push(x);
    }

    fn record(&mut self, letter: Letter, value: u32) -> (Letter, u32) {
        self.trace.push(letter);
        (letter, value)
    }

    pub fn stacks(&self) -> &[Vec<u32>] {
        &self.stacks
    }

    pub fn output(&self) -> &[u32] {
        &self.output
    }

    pub fn finish(mut self) -> SeriesRun {
        while self.step().is_some() {}
        let t = self.stacks.len();
        debug_assert_eq!(self.trace.len(), (t + 1) * self.input.len());
        SeriesRun {
            word: StackWord::from_letters_unchecked(self.trace, t, 0),
            output: Permutation::from_vec_unchecked(self.output),
        }
    }
}

/// Runs the greedy series machine to completion.
pub fn run_series_machine(p: &Permutation, t: usize) -> Result<SeriesRun> {
    Ok(SeriesMachine::new(p, t)?.finish())
}

/// Like [`run_series_machine`], also returning every intermediate configuration.
pub fn trace_series_machine(p: &Permutation, t: usize) -> Result<(SeriesRun, Vec<TraceStep>)> {
    let mut machine = SeriesMachine::new(p, t)?;
    let mut steps = Vec::with_capacity((t + 1) * p.len());
    while let Some((letter, value)) = machine.step() {
        steps.push(TraceStep {
            step: steps.len() + 1,
            letter: crate::words::render_letter(letter, 0),
            value,
            stacks: machine.stacks().to_vec(),
            output: machine.output().to_vec(),
        });
    }
    Ok((machine.finish(), steps))
}
