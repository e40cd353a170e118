//! Counts rank-two automorphisms by least token count, then tallies the
//! composites of token-free pairs.
//!
//!     cargo run --release --example census -- 3

use std::collections::BTreeMap;
use std::time::Instant;

use whitehead_core::search::{DegreeCatalogue, SearchOptions};

fn main() {
    let budget: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(2);
    let t = Instant::now();
    let cat = DegreeCatalogue::build(2, budget, SearchOptions::default()).expect("catalogue");
    eprintln!("built in {:.2?}", t.elapsed());
    for k in 0..=budget {
        println!("{k} tokens: {}", cat.with_degree(k).len());
    }
    let zero = cat.with_degree(0);
    let mut hist: BTreeMap<Option<usize>, usize> = BTreeMap::new();
    for f in &zero {
        for g in &zero {
            let h = f.compose(g).expect("same rank");
            *hist.entry(cat.degree(&h).certified()).or_default() += 1;
        }
    }
    for (d, count) in hist {
        match d {
            Some(d) => println!("composites of degree {d}: {count}"),
            None => println!("composites beyond {budget} tokens: {count}"),
        }
    }
}
