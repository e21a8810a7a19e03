//! Randomness for protocol runs.
//!
//! Every random decision in a run goes through a [`ChoiceSource`], tagged with
//! the [`Stream`] it belongs to. The seeded source gives each stream its own
//! ChaCha sub-stream so, e.g., adding an eavesdropper never perturbs the
//! parties' own choices. The same protocol code can be driven by
//! [`enumerate`], which walks every branch with its exact probability.

use std::collections::{HashMap, VecDeque};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::qcore::Chooser;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Stream {
    /// Which Bell/GHZ/decoy state a party prepares.
    StateChoice,
    /// Measuring bases chosen by a party.
    BasisChoice,
    /// Permutation of sequence C.
    Shuffle,
    /// Check and decoy positions.
    Position,
    /// Born-rule outcomes of the parties' measurements.
    Measurement,
    /// Everything the eavesdropper does.
    Adversary,
    /// Default secret messages drawn by the CLI.
    Message,
}

impl Stream {
    const COUNT: usize = 7;

    fn id(self) -> usize {
        self as usize
    }
}

pub trait ChoiceSource {
    /// Picks an index with probability proportional to `weights`. Zero-weight
    /// indices are never returned.
    fn choose(&mut self, stream: Stream, weights: &[f64]) -> usize;

    fn uniform(&mut self, stream: Stream, n: usize) -> usize {
        assert!(n > 0, "uniform choice over an empty range");
        self.choose(stream, &vec![1.0; n])
    }
}

/// Independent deterministic sub-stream per [`Stream`], all derived from one seed.
#[derive(Debug, Clone)]
pub struct SeededChoices {
    seed: u64,
    streams: [Option<ChaCha8Rng>; Stream::COUNT],
}

impl SeededChoices {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            streams: Default::default(),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    fn rng(&mut self, stream: Stream) -> &mut ChaCha8Rng {
        let seed = self.seed;
        self.streams[stream.id()].get_or_insert_with(|| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(stream.id() as u64 + 1);
            rng
        })
    }
}

impl ChoiceSource for SeededChoices {
    fn choose(&mut self, stream: Stream, weights: &[f64]) -> usize {
        self.rng(stream).choose(weights)
    }
}

/// Seeded source with some streams pinned to a fixed script of choices.
/// Once a script runs dry the stream falls back to its seeded sub-stream.
#[derive(Debug, Clone)]
pub struct ScriptedChoices {
    fallback: SeededChoices,
    scripts: HashMap<Stream, VecDeque<usize>>,
}

impl ScriptedChoices {
    pub fn new(seed: u64) -> Self {
        Self {
            fallback: SeededChoices::new(seed),
            scripts: HashMap::new(),
        }
    }

    pub fn with(mut self, stream: Stream, picks: impl IntoIterator<Item = usize>) -> Self {
        self.scripts.entry(stream).or_default().extend(picks);
        self
    }
}

impl ChoiceSource for ScriptedChoices {
    fn choose(&mut self, stream: Stream, weights: &[f64]) -> usize {
        if let Some(pick) = self.scripts.get_mut(&stream).and_then(|q| q.pop_front()) {
            assert!(
                weights.get(pick).is_some_and(|w| *w > 0.0),
                "scripted choice {pick} on {stream:?} is impossible (weights {weights:?})"
            );
            return pick;
        }
        self.fallback.choose(stream, weights)
    }
}

/// Adapts one stream of a [`ChoiceSource`] to the engine's [`Chooser`].
pub struct StreamChooser<'a> {
    source: &'a mut dyn ChoiceSource,
    stream: Stream,
}

impl<'a> StreamChooser<'a> {
    pub fn new(source: &'a mut dyn ChoiceSource, stream: Stream) -> Self {
        Self { source, stream }
    }
}

impl Chooser for StreamChooser<'_> {
    fn choose(&mut self, weights: &[f64]) -> usize {
        self.source.choose(self.stream, weights)
    }
}

/// Fisher–Yates shuffle driven by the `Shuffle` stream.
pub fn shuffle<T>(source: &mut dyn ChoiceSource, items: &mut [T]) {
    for i in (1..items.len()).rev() {
        let j = source.uniform(Stream::Shuffle, i + 1);
        items.swap(i, j);
    }
}

/// `k` distinct indices from `pool`, uniformly without replacement, sorted.
pub fn sample_without_replacement(
    source: &mut dyn ChoiceSource,
    stream: Stream,
    mut pool: Vec<usize>,
    k: usize,
) -> Vec<usize> {
    assert!(k <= pool.len(), "cannot draw {k} of {}", pool.len());
    let mut picked: Vec<usize> = (0..k)
        .map(|_| {
            let j = source.uniform(stream, pool.len());
            pool.remove(j)
        })
        .collect();
    picked.sort_unstable();
    picked
}

/// Replays a prefix of choices, then takes the first possible branch at
/// every later choice point, recording what it saw.
struct Replay {
    script: Vec<usize>,
    trail: Vec<(usize, Vec<f64>)>,
    probability: f64,
}

impl ChoiceSource for Replay {
    fn choose(&mut self, _stream: Stream, weights: &[f64]) -> usize {
        let pos = self.trail.len();
        let pick = match self.script.get(pos) {
            Some(&p) => p,
            None => weights
                .iter()
                .position(|w| *w > 0.0)
                .expect("at least one possible branch"),
        };
        let total: f64 = weights.iter().sum();
        self.probability *= weights[pick] / total;
        self.trail.push((pick, weights.to_vec()));
        pick
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("enumeration exceeded {0} branches")]
pub struct EnumerationLimit(pub usize);

/// Runs `run` once per leaf of its choice tree, returning each result with
/// its exact branch probability. `run` must be a deterministic function of
/// the choices it is fed.
pub fn enumerate<T>(
    mut run: impl FnMut(&mut dyn ChoiceSource) -> T,
    limit: usize,
) -> Result<Vec<(f64, T)>, EnumerationLimit> {
    let mut out = Vec::new();
    let mut script = Vec::new();
    loop {
        if out.len() == limit {
            return Err(EnumerationLimit(limit));
        }
        let mut replay = Replay {
            script,
            trail: Vec::new(),
            probability: 1.0,
        };
        let value = run(&mut replay);
        out.push((replay.probability, value));

        // advance to the next unexplored sibling, deepest first
        let mut trail = replay.trail;
        script = loop {
            let Some((taken, weights)) = trail.pop() else {
                return Ok(out);
            };
            if let Some(next) = (taken + 1..weights.len()).find(|&i| weights[i] > 0.0) {
                let mut s: Vec<usize> = trail.iter().map(|(t, _)| *t).collect();
                s.push(next);
                break s;
            }
        };
    }
}

/// Per-trial seed, so Monte-Carlo trials are independent of scheduling.
pub fn trial_seed(seed: u64, trial: u64) -> u64 {
    // splitmix64 finalizer
    let mut z = seed ^ trial.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_streams_are_reproducible_and_independent() {
        let mut a = SeededChoices::new(42);
        let mut b = SeededChoices::new(42);
        let xs: Vec<usize> = (0..32).map(|_| a.uniform(Stream::Shuffle, 10)).collect();
        // draw from another stream first; Shuffle must be unaffected
        for _ in 0..5 {
            b.uniform(Stream::Adversary, 2);
        }
        let ys: Vec<usize> = (0..32).map(|_| b.uniform(Stream::Shuffle, 10)).collect();
        assert_eq!(xs, ys);
    }

    #[test]
    fn enumerate_visits_every_branch_with_its_weight() {
        let leaves = enumerate(
            |src| {
                let x = src.choose(Stream::Measurement, &[0.25, 0.0, 0.75]);
                let y = if x == 0 { src.uniform(Stream::Shuffle, 2) } else { 9 };
                (x, y)
            },
            100,
        )
        .unwrap();
        let got: Vec<(f64, (usize, usize))> = leaves;
        assert_eq!(got, vec![(0.125, (0, 0)), (0.125, (0, 1)), (0.75, (2, 9))]);
    }

    #[test]
    fn enumerate_respects_limit() {
        let r = enumerate(|src| src.uniform(Stream::Shuffle, 10), 3);
        assert_eq!(r, Err(EnumerationLimit(3)));
    }

    #[test]
    fn shuffle_enumerates_all_permutations_uniformly() {
        let leaves = enumerate(
            |src| {
                let mut v = [0, 1, 2];
                shuffle(src, &mut v);
                v
            },
            100,
        )
        .unwrap();
        assert_eq!(leaves.len(), 6);
        let mut perms: Vec<[i32; 3]> = leaves.iter().map(|(_, v)| *v).collect();
        perms.sort();
        perms.dedup();
        assert_eq!(perms.len(), 6);
        for (p, _) in leaves {
            assert!((p - 1.0 / 6.0).abs() < 1e-15);
        }
    }

    #[test]
    fn scripted_choices_override_then_fall_back() {
        let mut s = ScriptedChoices::new(1).with(Stream::StateChoice, [3, 2]);
        assert_eq!(s.uniform(Stream::StateChoice, 4), 3);
        assert_eq!(s.uniform(Stream::StateChoice, 4), 2);
        assert!(s.uniform(Stream::StateChoice, 4) < 4);
    }

    #[test]
    fn sampling_without_replacement_is_sorted_and_distinct() {
        let mut s = SeededChoices::new(9);
        let picks = sample_without_replacement(&mut s, Stream::Position, (0..10).collect(), 4);
        assert_eq!(picks.len(), 4);
        assert!(picks.windows(2).all(|w| w[0] < w[1]));
    }
}
