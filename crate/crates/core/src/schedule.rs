//! Time-slot assignment for factor (or generator) occurrences in a word
//! list.
//!
//! A schedule gives every letter of every word a positive time slot, strictly
//! increasing along each word, such that no letter uses the same slot twice.
//! Viewed as a job shop: letters are machines, words are jobs and each
//! letter occurrence is a unit-time step.

use std::cmp::Reverse;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::CosetGraph;
use crate::layers::{ceil_div, LayerProfile};
use crate::words::{all_shortest_words, WordList, WordSet};

/// Default node budget for [`exact_min_schedule`].
pub const DEFAULT_SCHEDULE_BUDGET: u64 = 5_000_000;

/// `times[w][p]` is the 1-based slot of letter `p` of word `w`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Schedule {
    pub times: Vec<Vec<usize>>,
}

impl Schedule {
    /// Largest slot used, 0 for an empty schedule.
    pub fn makespan(&self) -> usize {
        self.times.iter().flatten().copied().max().unwrap_or(0)
    }

    /// Checks shape, increasing times along words and distinct slots per
    /// letter.
    pub fn validate(&self, words: &WordList) -> Result<()> {
        if self.times.len() != words.len() {
            return Err(Error::Contract(format!(
                "schedule covers {} words, word list has {}",
                self.times.len(),
                words.len()
            )));
        }
        let mut used: Vec<Vec<usize>> = vec![Vec::new(); words.degree];
        for (w, (word, times)) in words.words.iter().zip(&self.times).enumerate() {
            if word.len() != times.len() {
                return Err(Error::Contract(format!(
                    "word {w} has {} letters but {} times",
                    word.len(),
                    times.len()
                )));
            }
            let mut last = 0;
            for (&letter, &t) in word.iter().zip(times) {
                if t <= last {
                    return Err(Error::Contract(format!(
                        "times along word {w} are not strictly increasing: {times:?}"
                    )));
                }
                last = t;
                let slots = used.get_mut(letter).ok_or_else(|| {
                    Error::Contract(format!("word {w} uses letter {letter} >= {}", words.degree))
                })?;
                slots.push(t);
            }
        }
        for (letter, slots) in used.iter_mut().enumerate() {
            slots.sort_unstable();
            if let Some(pair) = slots.windows(2).find(|p| p[0] == p[1]) {
                return Err(Error::Contract(format!(
                    "letter {letter} is scheduled twice at time {}",
                    pair[0]
                )));
            }
        }
        Ok(())
    }
}

/// Longest words first (ties by target vertex); each letter takes the
/// earliest slot after the previous letter of its word that its factor has
/// not used yet.
pub fn greedy_schedule(words: &WordList) -> Schedule {
    let mut order: Vec<usize> = (0..words.len()).collect();
    order.sort_by_key(|&w| {
        (
            Reverse(words.words[w].len()),
            words.targets.get(w).copied(),
            w,
        )
    });
    let mut used: Vec<Vec<bool>> = vec![Vec::new(); words.degree];
    let mut times = vec![Vec::new(); words.len()];
    for w in order {
        let mut last = 0;
        for &letter in &words.words[w] {
            let slots = &mut used[letter];
            let mut t = last + 1;
            while slots.get(t).copied().unwrap_or(false) {
                t += 1;
            }
            if slots.len() <= t {
                slots.resize(t + 1, false);
            }
            slots[t] = true;
            times[w].push(t);
            last = t;
        }
    }
    Schedule { times }
}

/// Result of the exact minimum-makespan search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExactOutcome {
    /// Minimum makespan, proven.
    Optimal { schedule: Schedule, nodes: u64 },
    /// No schedule finishes by `bound`.
    Infeasible { bound: usize, nodes: u64 },
    /// Budget ran out; every makespan below `lower_bound` is ruled out.
    Inexact {
        best: Option<Schedule>,
        lower_bound: usize,
        nodes: u64,
    },
}

impl ExactOutcome {
    pub fn schedule(&self) -> Option<&Schedule> {
        match self {
            ExactOutcome::Optimal { schedule, .. } => Some(schedule),
            ExactOutcome::Inexact { best, .. } => best.as_ref(),
            ExactOutcome::Infeasible { .. } => None,
        }
    }

    pub fn nodes(&self) -> u64 {
        match self {
            ExactOutcome::Optimal { nodes, .. }
            | ExactOutcome::Infeasible { nodes, .. }
            | ExactOutcome::Inexact { nodes, .. } => *nodes,
        }
    }
}

enum Decision {
    Feasible(Schedule),
    Infeasible,
    OutOfBudget,
}

struct Feasibility<'a> {
    words: &'a WordList,
    horizon: usize,
    next: Vec<usize>,
    last: Vec<usize>,
    used: Vec<Vec<bool>>,
    times: Vec<Vec<usize>>,
    solution: Option<Vec<Vec<usize>>>,
    nodes: u64,
    budget: u64,
}

impl Feasibility<'_> {
    fn options(&self, w: usize) -> impl Iterator<Item = usize> + '_ {
        let word = &self.words.words[w];
        let p = self.next[w];
        let letter = word[p];
        let latest = self.horizon - (word.len() - p - 1);
        (self.last[w] + 1..=latest).filter(move |&t| !self.used[letter][t])
    }

    /// Each letter's pending occurrences must fit into its free slots given
    /// their earliest/latest windows (earliest-deadline-first check).
    fn letters_fit(&self) -> bool {
        let mut windows: Vec<Vec<(usize, usize)>> = vec![Vec::new(); self.words.degree];
        for (w, word) in self.words.words.iter().enumerate() {
            let p = self.next[w];
            for q in p..word.len() {
                let earliest = self.last[w] + (q - p) + 1;
                let latest = self.horizon - (word.len() - q - 1);
                if earliest > latest {
                    return false;
                }
                windows[word[q]].push((latest, earliest));
            }
        }
        for (letter, list) in windows.iter_mut().enumerate() {
            list.sort_unstable();
            let mut taken = self.used[letter].clone();
            for &(latest, earliest) in list.iter() {
                match (earliest..=latest).find(|&t| !taken[t]) {
                    Some(t) => taken[t] = true,
                    None => return false,
                }
            }
        }
        true
    }

    fn search(&mut self) -> Option<bool> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return None;
        }
        if !self.letters_fit() {
            return Some(false);
        }
        // most constrained pending word
        let mut pick: Option<(usize, usize)> = None;
        for w in 0..self.words.len() {
            if self.next[w] == self.words.words[w].len() {
                continue;
            }
            let count = self.options(w).count();
            if count == 0 {
                return Some(false);
            }
            if pick.is_none_or(|(_, c)| count < c) {
                pick = Some((w, count));
            }
        }
        let Some((w, _)) = pick else {
            self.solution = Some(self.times.clone());
            return Some(true);
        };
        let letter = self.words.words[w][self.next[w]];
        let choices: Vec<usize> = self.options(w).collect();
        let saved_last = self.last[w];
        for t in choices {
            self.used[letter][t] = true;
            self.times[w].push(t);
            self.last[w] = t;
            self.next[w] += 1;
            let outcome = self.search();
            self.next[w] -= 1;
            self.last[w] = saved_last;
            self.times[w].pop();
            self.used[letter][t] = false;
            match outcome {
                Some(false) => {}
                other => return other,
            }
        }
        Some(false)
    }
}

fn decide(words: &WordList, horizon: usize, budget: u64, nodes: &mut u64) -> Decision {
    let mut state = Feasibility {
        words,
        horizon,
        next: vec![0; words.len()],
        last: vec![0; words.len()],
        used: vec![vec![false; horizon + 1]; words.degree],
        times: vec![Vec::new(); words.len()],
        solution: None,
        nodes: 0,
        budget: budget.saturating_sub(*nodes),
    };
    let outcome = state.search();
    *nodes += state.nodes;
    match outcome {
        Some(true) => Decision::Feasible(Schedule {
            times: state.solution.expect("success records a solution"),
        }),
        Some(false) => Decision::Infeasible,
        None => Decision::OutOfBudget,
    }
}

/// Minimum-makespan schedule with makespan at most `max_time`.
///
/// The lower bound is the larger of the busiest letter's load and the
/// longest word; each horizon from there up to the greedy makespan is
/// decided by branch and bound, branching on the pending word with the
/// fewest feasible slots.
pub fn exact_min_schedule(words: &WordList, max_time: usize, budget: u64) -> Result<ExactOutcome> {
    let loads = words.loads()?;
    let lower = loads
        .iter()
        .copied()
        .chain(words.words.iter().map(Vec::len))
        .max()
        .unwrap_or(0);
    if lower > max_time {
        return Ok(ExactOutcome::Infeasible {
            bound: max_time,
            nodes: 0,
        });
    }
    let greedy = greedy_schedule(words);
    let upper = greedy.makespan();
    if upper <= lower {
        return Ok(ExactOutcome::Optimal {
            schedule: greedy,
            nodes: 0,
        });
    }
    let mut nodes = 0;
    for horizon in lower..upper.min(max_time + 1) {
        match decide(words, horizon, budget, &mut nodes) {
            Decision::Feasible(schedule) => {
                schedule.validate(words).map_err(|e| {
                    Error::Internal(format!("search produced an invalid schedule: {e}"))
                })?;
                return Ok(ExactOutcome::Optimal { schedule, nodes });
            }
            Decision::Infeasible => {}
            Decision::OutOfBudget => {
                return Ok(ExactOutcome::Inexact {
                    best: (upper <= max_time).then_some(greedy),
                    lower_bound: horizon,
                    nodes,
                })
            }
        }
    }
    if upper <= max_time {
        Ok(ExactOutcome::Optimal {
            schedule: greedy,
            nodes,
        })
    } else {
        Ok(ExactOutcome::Infeasible {
            bound: max_time,
            nodes,
        })
    }
}

/// Unit-time job shop with one- and two-step jobs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JobShopInstance {
    pub machines: usize,
    pub one_step: Vec<usize>,
    pub two_step: Vec<(usize, usize)>,
}

impl JobShopInstance {
    pub fn new(
        machines: usize,
        one_step: Vec<usize>,
        two_step: Vec<(usize, usize)>,
    ) -> Result<Self> {
        let out_of_range = one_step
            .iter()
            .chain(two_step.iter().flat_map(|(a, b)| [a, b]))
            .any(|&m| m >= machines);
        if machines == 0 || out_of_range {
            return Err(Error::Structural(format!(
                "machine ids must lie in 0..{machines}"
            )));
        }
        Ok(JobShopInstance {
            machines,
            one_step,
            two_step,
        })
    }

    pub fn to_word_list(&self) -> WordList {
        let words: Vec<Vec<usize>> = self
            .one_step
            .iter()
            .map(|&m| vec![m])
            .chain(self.two_step.iter().map(|&(a, b)| vec![a, b]))
            .collect();
        WordList {
            degree: self.machines,
            targets: (0..words.len()).collect(),
            words,
        }
    }

    /// `⌈(s₁ + 2·s₂) / d⌉`.
    pub fn ideal_makespan(&self) -> usize {
        ceil_div(self.one_step.len() + 2 * self.two_step.len(), self.machines)
    }
}

/// Verdict of the job-shop feasibility predicate at the ideal horizon.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Corollary4 {
    pub horizon: usize,
    pub feasible: bool,
}

/// Feasibility at `T = ⌈(s₁ + 2s₂)/d⌉`: every machine carries at most `T`
/// steps, and no machine that is filled to exactly `T` and runs no one-step
/// job has two-step steps of a single type (all first steps or all second
/// steps).
pub fn corollary4_feasible(instance: &JobShopInstance) -> Corollary4 {
    let horizon = instance.ideal_makespan();
    let d = instance.machines;
    let mut singles = vec![0usize; d];
    let mut firsts = vec![0usize; d];
    let mut seconds = vec![0usize; d];
    for &m in &instance.one_step {
        singles[m] += 1;
    }
    for &(a, b) in &instance.two_step {
        firsts[a] += 1;
        seconds[b] += 1;
    }
    let feasible = (0..d).all(|m| {
        let load = singles[m] + firsts[m] + seconds[m];
        let exclusive = singles[m] == 0 && (firsts[m] == 0) != (seconds[m] == 0);
        load <= horizon && !(load == horizon && exclusive)
    });
    Corollary4 { horizon, feasible }
}

/// First-letter and second-letter counts over the length-two words.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LayerTwoProfile {
    #[serde(rename = "M")]
    pub first: Vec<usize>,
    #[serde(rename = "N")]
    pub second: Vec<usize>,
}

impl LayerTwoProfile {
    pub fn from_words(words: &WordList) -> Self {
        let mut first = vec![0; words.degree];
        let mut second = vec![0; words.degree];
        for w in words.words.iter().filter(|w| w.len() == 2) {
            first[w[0]] += 1;
            second[w[1]] += 1;
        }
        LayerTwoProfile { first, second }
    }

    pub fn combined(&self) -> Vec<usize> {
        self.first
            .iter()
            .zip(&self.second)
            .map(|(m, n)| m + n)
            .collect()
    }

    pub fn max_combined(&self) -> usize {
        self.combined().into_iter().max().unwrap_or(0)
    }
}

/// `1 + max_δ (M(δ) + N(δ))`.
pub fn corollary6_bound(profile: &LayerTwoProfile) -> usize {
    1 + profile.max_combined()
}

/// Word set for a diameter-2 Cayley graph: each generator for its own
/// layer-1 vertex, and for layer 2 the two-letter words minimizing
/// `max_δ (M(δ) + N(δ))`, first such choice in lexicographic order.
pub fn best_layer_two_words(graph: &CosetGraph) -> Result<WordSet> {
    let options = all_shortest_words(graph, 1_000_000)?;
    let d = graph.degree();
    let mut layer_one = std::collections::BTreeMap::new();
    for j in 0..d {
        let v = graph.target(0, j);
        if v == 0 || layer_one.insert(v, vec![j]).is_some() {
            return Err(Error::Unsupported(format!(
                "generator {j} does not reach its own layer-1 vertex; repeated or trivial generators are not supported here"
            )));
        }
    }
    let mut layer_two = Vec::new();
    for (v, list) in options.iter().enumerate().skip(1) {
        match list.first().map(Vec::len) {
            Some(1) => {}
            Some(2) => layer_two.push(v),
            _ => {
                return Err(Error::Scope(format!(
                    "vertex {v} is farther than distance 2; diameter-2 construction does not apply"
                )))
            }
        }
    }

    fn descend(
        i: usize,
        layer_two: &[usize],
        options: &[Vec<Vec<usize>>],
        load: &mut [usize],
        choice: &mut Vec<usize>,
        best: &mut (usize, Vec<usize>),
    ) {
        let current = load.iter().copied().max().unwrap_or(0);
        if current >= best.0 {
            return;
        }
        if i == layer_two.len() {
            *best = (current, choice.clone());
            return;
        }
        for (k, word) in options[layer_two[i]].iter().enumerate() {
            load[word[0]] += 1;
            load[word[1]] += 1;
            choice.push(k);
            descend(i + 1, layer_two, options, load, choice, best);
            choice.pop();
            load[word[0]] -= 1;
            load[word[1]] -= 1;
        }
    }

    let mut best = (usize::MAX, Vec::new());
    descend(
        0,
        &layer_two,
        &options,
        &mut vec![0; d],
        &mut Vec::new(),
        &mut best,
    );
    let mut words = layer_one;
    for (&v, &k) in layer_two.iter().zip(&best.1) {
        words.insert(v, options[v][k].clone());
    }
    WordSet::new(graph, words, true)
}

/// Everything [`diameter2_schedule`] learned about a diameter-2 instance.
#[derive(Clone, Debug, Serialize)]
pub struct Diameter2Report {
    pub schedule: Schedule,
    pub makespan: usize,
    pub theta: usize,
    pub layer_two: LayerTwoProfile,
    /// `M(δ) + N(δ) ≤ θ − 1` for every δ.
    pub balanced_hypothesis: bool,
    pub corollary4: Corollary4,
    pub corollary6_bound: usize,
    pub note: Option<String>,
}

/// Schedules the words of a diameter-2 spanning factorization (or Cayley
/// word set): one one-letter word per factor and two-letter words for
/// layer 2. The makespan is proven minimal by exact search; when every
/// `M(δ) + N(δ) ≤ θ − 1` it must equal `θ`, and it never exceeds the
/// `1 + max (M + N)` bound. Diameter-1 inputs are scheduled in one slot.
pub fn diameter2_schedule(
    words: &WordList,
    profile: &LayerProfile,
    budget: u64,
) -> Result<Diameter2Report> {
    let d = words.degree;
    let theta = profile.theta;
    if profile.diameter == 1 {
        let schedule = greedy_schedule(words);
        let makespan = schedule.makespan();
        if makespan != 1 {
            return Err(Error::Internal(format!(
                "complete graph scheduled in {makespan} slots"
            )));
        }
        return Ok(Diameter2Report {
            schedule,
            makespan,
            theta,
            layer_two: LayerTwoProfile::from_words(words),
            balanced_hypothesis: true,
            corollary4: Corollary4 {
                horizon: 1,
                feasible: true,
            },
            corollary6_bound: 1,
            note: Some("diameter 1: every word is a single letter".into()),
        });
    }
    if profile.diameter != 2 {
        return Err(Error::Scope(format!(
            "diameter is {}, the construction needs diameter 2",
            profile.diameter
        )));
    }
    let mut singles: Vec<usize> = words
        .words
        .iter()
        .filter(|w| w.len() == 1)
        .map(|w| w[0])
        .collect();
    singles.sort_unstable();
    if singles != (0..d).collect::<Vec<_>>() {
        return Err(Error::Unsupported(
            "every factor must appear exactly once as a one-letter word".into(),
        ));
    }
    let pairs: Vec<(usize, usize)> = words
        .words
        .iter()
        .filter(|w| w.len() == 2)
        .map(|w| (w[0], w[1]))
        .collect();
    if singles.len() + pairs.len() != words.len() || pairs.len() != profile.counts[2] {
        return Err(Error::Unsupported(format!(
            "expected {} one-letter and {} two-letter words",
            d, profile.counts[2]
        )));
    }

    let layer_two = LayerTwoProfile::from_words(words);
    let balanced_hypothesis = layer_two.combined().iter().all(|&x| x < theta);
    let instance = JobShopInstance::new(d, singles, pairs)?;
    let corollary4 = corollary4_feasible(&instance);
    let bound6 = corollary6_bound(&layer_two);

    let schedule = match exact_min_schedule(words, bound6.max(theta), budget)? {
        ExactOutcome::Optimal { schedule, .. } => schedule,
        ExactOutcome::Infeasible { bound, .. } => {
            return Err(Error::Internal(format!(
                "no schedule within the layer-two bound {bound}"
            )))
        }
        ExactOutcome::Inexact { lower_bound, .. } => {
            return Err(Error::Scope(format!(
                "schedule search ran out of budget at horizon {lower_bound}"
            )))
        }
    };
    let makespan = schedule.makespan();
    if balanced_hypothesis && makespan != theta {
        return Err(Error::Internal(format!(
            "balanced diameter-2 instance scheduled in {makespan} slots, expected {theta}"
        )));
    }
    if makespan > bound6 {
        return Err(Error::Internal(format!(
            "makespan {makespan} exceeds 1 + max(M + N) = {bound6}"
        )));
    }
    let note = (!corollary4.feasible && makespan == corollary4.horizon + 1)
        .then(|| "ideal horizon infeasible; one extra slot needed".to_string());
    Ok(Diameter2Report {
        schedule,
        makespan,
        theta,
        layer_two,
        balanced_hypothesis,
        corollary4,
        corollary6_bound: bound6,
        note,
    })
}

/// The four schedule-quality flags and the quantities behind them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub balanced: bool,
    pub short: bool,
    pub optimal: bool,
    pub minimum: bool,
    /// `⌈Σ k·N_k / (n·d)⌉`.
    pub distance_bound: usize,
    /// `⌈Σ_i |F_i| / d⌉`.
    pub average_load: usize,
    /// `max_i |F_i|`.
    pub max_load: usize,
    pub makespan: usize,
}

/// Evaluates balanced / short / optimal / minimum and checks the ordering
/// `distance bound ≤ average load ≤ max load ≤ makespan`.
pub fn classify(
    words: &WordList,
    schedule: &Schedule,
    profile: &LayerProfile,
) -> Result<Classification> {
    let loads = words.loads()?;
    let max_load = loads.iter().copied().max().unwrap_or(0);
    let average_load = ceil_div(loads.iter().sum(), words.degree);
    let distance_bound = profile.pair_bound();
    let makespan = schedule.makespan();
    if !(distance_bound <= average_load && average_load <= max_load && max_load <= makespan) {
        return Err(Error::Internal(format!(
            "ordering violated: {distance_bound} <= {average_load} <= {max_load} <= {makespan}"
        )));
    }
    Ok(Classification {
        balanced: max_load == average_load,
        short: average_load == distance_bound,
        optimal: max_load == distance_bound,
        minimum: makespan == max_load,
        distance_bound,
        average_load,
        max_load,
        makespan,
    })
}
