//! Randomized replays of both routes from words to conflict-free exchanges.

mod common;

use cayley_transpose::factor::{
    one_factorize, search_spanning_factorization, spanning_factorization_from_cayley, SearchOutcome,
};
use cayley_transpose::fixtures;
use cayley_transpose::layers::layer_profile;
use cayley_transpose::schedule::{exact_min_schedule, greedy_schedule};
use cayley_transpose::sim::{expand_cayley_paths, expand_factor_paths, run_transpose};
use common::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn translated_words_never_collide(seed in any::<u64>(), pick in 0usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (_, graph) = cayley_corpus().swap_remove(pick);
        let words = random_word_set(&graph, &mut rng);
        let list = words.to_word_list();
        let schedule = random_schedule(&list, &mut rng);
        prop_assert!(schedule_is_valid(&list, &schedule));
        let paths = expand_cayley_paths(&graph, &words, &schedule).unwrap();
        let trace = run_transpose(&graph, &paths);
        prop_assert!(trace.is_valid(), "{:?}", trace.conflicts);
        prop_assert_eq!(trace.delivered, graph.order() * (graph.order() - 1));
        prop_assert!(trace.horizon >= layer_profile(&graph, 0).unwrap().theta);
    }

    #[test]
    fn factor_words_never_collide(seed in any::<u64>(), pick in 0usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (_, graph) = cayley_corpus().swap_remove(pick);
        let words = random_word_set(&graph, &mut rng);
        let (_, sf) = spanning_factorization_from_cayley(&graph, &words).unwrap();
        let list = sf.word_list();
        let schedule = random_schedule(&list, &mut rng);
        let trace = run_transpose(&sf.factorization, &expand_factor_paths(&sf, &schedule).unwrap());
        prop_assert!(trace.is_valid());
    }

    #[test]
    fn regular_digraphs_split_into_factors(seed in any::<u64>(), n in 1usize..40, d in 1usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_regular_digraph(n, d, &mut rng);
        let f = one_factorize(&g).unwrap();
        prop_assert_eq!(f.factor_count(), d);
        prop_assert_eq!(factorization_is_valid(&g, &f), Ok(()));
    }

    #[test]
    fn exact_never_loses_to_greedy(seed in any::<u64>(), pick in 0usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (_, graph) = cayley_corpus().swap_remove(pick);
        let list = random_word_set(&graph, &mut rng).to_word_list();
        let greedy = greedy_schedule(&list);
        prop_assert!(schedule_is_valid(&list, &greedy));
        let exact = exact_min_schedule(&list, greedy.makespan(), 1_000_000).unwrap();
        let best = exact.schedule().unwrap();
        prop_assert!(schedule_is_valid(&list, best));
        prop_assert!(best.makespan() <= greedy.makespan());
    }
}

#[test]
fn searched_petersen_factorization_replays_under_random_schedules() {
    let outcome = search_spanning_factorization(&fixtures::petersen_digraph(), 1_000_000).unwrap();
    let SearchOutcome::Found {
        factorization,
        short,
        ..
    } = outcome
    else {
        panic!("no spanning factorization found");
    };
    assert!(short);
    let list = factorization.word_list();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..50 {
        let schedule = random_schedule(&list, &mut rng);
        let trace = run_transpose(
            &factorization.factorization,
            &expand_factor_paths(&factorization, &schedule).unwrap(),
        );
        assert!(trace.is_valid());
        assert_eq!(trace.delivered, 90);
        assert!(trace.horizon >= 5);
    }
}

#[test]
fn tampered_schedule_collides() {
    // Two words sharing a factor at one slot must collide from some base.
    let graph = cayley_corpus().swap_remove(1).1;
    let words = random_word_set(&graph, &mut ChaCha8Rng::seed_from_u64(1));
    let list = words.to_word_list();
    let mut schedule = greedy_schedule(&list);
    let (a, b) = (0..list.words.len())
        .flat_map(|a| (a + 1..list.words.len()).map(move |b| (a, b)))
        .find(|&(a, b)| {
            list.words[a][0] == list.words[b][0]
                && schedule.times[b]
                    .get(1)
                    .is_none_or(|&next| schedule.times[a][0] < next)
        })
        .unwrap();
    schedule.times[b][0] = schedule.times[a][0];
    assert!(schedule.validate(&list).is_err());
    let paths: Vec<_> = (0..graph.order())
        .flat_map(|h| {
            list.words
                .iter()
                .zip(&schedule.times)
                .map(move |(w, t)| (h, w.clone(), t.clone()))
        })
        .map(|(h, w, t)| {
            let mut at = h;
            let steps = w
                .iter()
                .zip(&t)
                .map(|(&j, &time)| {
                    let e = cayley_transpose::sim::Edge { tail: at, label: j };
                    at = graph.target(at, j);
                    (e, time)
                })
                .collect();
            cayley_transpose::sim::TimedPath {
                source: h,
                destination: at,
                steps,
            }
        })
        .collect();
    let trace = run_transpose(&graph, &paths);
    assert!(!trace.conflicts.is_empty());
}
