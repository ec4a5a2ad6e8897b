//! Regenerates `fixtures/base_sequences.json` by breadth-first search.
//!
//! Run with `cargo run --release --example derive_base_sequences`.

use polyweb::web::{bfs_links, FrozenSequence, SEARCHED_CASES};

const BOUND: i64 = 3;
const MAX_STATES: usize = 200_000;

fn main() {
    let mut out = Vec::new();
    for (form, gen) in SEARCHED_CASES {
        let start = form.fibered();
        let target = start.transform(&gen.map());
        let class = form.class();
        let steps = bfs_links(&start, |f| *f == target, class, BOUND, MAX_STATES)
            .unwrap_or_else(|| panic!("no route from {form} to {gen:?}·{form} in box {BOUND}"));
        eprintln!("{form} under {gen:?}: {} links", steps.len());
        out.push(FrozenSequence { form, gen, class, steps });
    }
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/base_sequences.json");
    std::fs::write(path, serde_json::to_string_pretty(&out).unwrap() + "\n").unwrap();
}
