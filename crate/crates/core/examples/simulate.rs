//! Replays a translated schedule on `Cay(Z_7, {1, 2, 4})`, then shifts one
//! letter onto an occupied slot to show the simulator catching the clash.

use cayley_transpose::fixtures;
use cayley_transpose::graph::build_cayley_coset_graph;
use cayley_transpose::schedule::greedy_schedule;
use cayley_transpose::sim::{expand_cayley_paths, run_transpose, TimedPath};
use cayley_transpose::words::{bfs_word_set, WordMode};

fn main() -> cayley_transpose::Result<()> {
    let graph = build_cayley_coset_graph(&fixtures::z7_spec())?;
    let words = bfs_word_set(&graph, WordMode::LoadBalanced)?;
    let schedule = greedy_schedule(&words.to_word_list());
    let mut paths = expand_cayley_paths(&graph, &words, &schedule)?;
    let trace = run_transpose(&graph, &paths);
    println!(
        "horizon {}, delivered {}, conflicts {}",
        trace.horizon,
        trace.delivered,
        trace.conflicts.len()
    );
    print!("{}", trace.to_csv());

    // Move the first step of some path onto the slot another path already
    // holds on the same edge.
    let clash = find_clash(&paths);
    if let Some((victim, time)) = clash {
        paths[victim].steps[0].1 = time;
        let broken = run_transpose(&graph, &paths);
        println!("after tampering: {:?}", broken.conflicts.first());
    }
    Ok(())
}

fn find_clash(paths: &[TimedPath]) -> Option<(usize, usize)> {
    for (i, a) in paths.iter().enumerate() {
        for (j, b) in paths.iter().enumerate() {
            let (ea, ta) = a.steps[0];
            let (eb, tb) = b.steps[0];
            if i != j && ea == eb && ta != tb && b.steps.get(1).is_none_or(|&(_, next)| ta < next) {
                return Some((j, ta));
            }
        }
    }
    None
}
