//! The full pipeline through the command-line entry point, writing every
//! artifact into a scratch directory.

use cayley_transpose::cli;

fn main() {
    let dir = std::env::temp_dir().join("cayley-transpose-pipeline");
    let dir = dir.to_str().expect("utf-8 temp dir");
    for builtin in ["z7-124", "q3", "petersen"] {
        let out = cli::run([
            "cayley-transpose",
            "pipeline",
            "--builtin",
            builtin,
            "--out-dir",
            dir,
        ]);
        print!("{builtin}: {}", out.stdout);
        eprint!("{}", out.stderr);
    }
    println!("artifacts for the last run are in {dir}");
}
