//! Greedy against exact scheduling on the directed 4-cycle and the 3-cube,
//! then the quality flags of the exact schedule.

use cayley_transpose::fixtures;
use cayley_transpose::graph::build_cayley_coset_graph;
use cayley_transpose::layers::layer_profile;
use cayley_transpose::schedule::{classify, exact_min_schedule, greedy_schedule, ExactOutcome};
use cayley_transpose::words::{bfs_word_set, WordMode};

fn main() -> cayley_transpose::Result<()> {
    for (name, spec) in [("c4", fixtures::c4_spec()), ("q3", fixtures::q3_spec())] {
        let graph = build_cayley_coset_graph(&spec)?;
        let words = bfs_word_set(&graph, WordMode::LoadBalanced)?.to_word_list();
        let greedy = greedy_schedule(&words);
        let exact = exact_min_schedule(&words, greedy.makespan(), 1_000_000)?;
        let ExactOutcome::Optimal { schedule, nodes } = exact else {
            println!("{name}: search inconclusive");
            continue;
        };
        println!(
            "{name}: greedy {}, exact {} ({nodes} nodes)",
            greedy.makespan(),
            schedule.makespan()
        );
        for (w, t) in words.words.iter().zip(&schedule.times) {
            println!("  {w:?} at {t:?}");
        }
        println!(
            "  {:?}",
            classify(&words, &schedule, &layer_profile(&graph, 0)?)?
        );
    }
    Ok(())
}
