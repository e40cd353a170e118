use std::collections::BTreeSet;

use whitehead_core::diagram::Side;
use whitehead_core::search::{degree_zero_set, enumerate_diagrams, DegreeCatalogue, SearchOptions};
use whitehead_core::textio::{format_diagram, parse_diagram};
use whitehead_core::{ComponentKind, NestedDiagram};

fn small() -> Vec<NestedDiagram> {
    let mut all = enumerate_diagrams(1, 3, SearchOptions::default()).unwrap();
    all.extend(enumerate_diagrams(2, 2, SearchOptions::default()).unwrap());
    all
}

#[test]
fn enumerated_diagrams_are_valid_and_canonical() {
    for d in small() {
        assert!(d.validate().is_empty(), "{d:?}");
        let (c, key) = d.canonical();
        assert_eq!(c, d);
        assert_eq!(key, d.canonical_key());
    }
}

#[test]
fn components_follow_the_tree_rule() {
    for d in small() {
        for s in 0..d.rank {
            let deg = d.degree_of_sphere(s).unwrap();
            let comps = d.components_of(s).unwrap();
            assert_eq!(comps.len(), deg + 1);
            let chi: i64 = comps.iter().map(|&(c, _)| d.euler_characteristic(c)).sum();
            assert_eq!(chi, 2);
            let kinds: Vec<ComponentKind> = comps.iter().map(|&(_, k)| k).collect();
            use ComponentKind::*;
            match deg {
                0 => assert_eq!(kinds, [Closed]),
                1 => assert_eq!(kinds, [EndCap, EndCap]),
                2 => assert_eq!(kinds, [EndCap, Tunnel, EndCap]),
                _ => assert!(kinds.iter().filter(|&&k| k == EndCap).count() >= 2),
            }
        }
        assert_eq!(d.components.len(), d.tokens.len() + d.rank);
    }
}

/// Every way of choosing, per portal, which zone the loop passes through.
fn zone_choices(d: &NestedDiagram) -> Vec<Vec<Option<usize>>> {
    let mut out = vec![vec![]];
    for p in 0..d.rank {
        let options: Vec<Option<usize>> = std::iter::once(None)
            .chain((0..d.tokens.len()).filter(|&t| d.tokens[t].portal == p).map(Some))
            .collect();
        out = out
            .into_iter()
            .flat_map(|prefix| {
                options.iter().map(move |&o| {
                    let mut v = prefix.clone();
                    v.push(o);
                    v
                })
            })
            .collect();
    }
    out
}

#[test]
fn trace_does_not_depend_on_the_zone() {
    let mut checked = 0;
    for d in enumerate_diagrams(2, 2, SearchOptions::default()).unwrap() {
        let f = d.trace().unwrap();
        for choice in zone_choices(&d) {
            assert_eq!(d.trace_via(&choice).unwrap(), f, "{d:?} via {choice:?}");
            checked += 1;
        }
    }
    assert!(checked > 1000);
}

#[test]
fn relabeling_and_flipping_preserve_structure() {
    for d in small() {
        let f = d.trace().unwrap();
        // reversing the token order leaves the canonical form alone
        let k = d.tokens.len();
        let mut r = d.clone();
        r.tokens.reverse();
        r.inner_zones.reverse();
        r.nesting = d.nesting.iter().rev().map(|p| p.map(|t| k - 1 - t)).collect();
        assert_eq!(r.trace().unwrap(), f);
        assert_eq!(r.canonical_key(), d.canonical_key());
        // flipping one sphere's orientation inverts its letter in every image
        let mut flipped = d.clone();
        flipped.spheres[0].orientation *= -1;
        let g = flipped.trace().unwrap();
        for (x, y) in f.images().iter().zip(g.images()) {
            let expect: Vec<_> = x
                .letters()
                .iter()
                .map(|l| if l.index() == 0 { l.inverse() } else { *l })
                .collect();
            assert_eq!(y.letters(), expect.as_slice());
        }
    }
}

#[test]
fn zone_names_are_distinct() {
    for d in small().into_iter().take(200) {
        let names: BTreeSet<String> = d.zones().into_iter().map(|z| d.zone_name(z)).collect();
        assert_eq!(names.len(), 2 * (d.rank + d.tokens.len()));
        assert!(names
            .iter()
            .all(|n| n.contains(Side::Plus.symbol()) || n.contains(Side::Minus.symbol())));
    }
}

#[test]
fn diagram_files_round_trip() {
    for d in small() {
        assert_eq!(parse_diagram(&format_diagram(&d)).unwrap(), d);
    }
}

#[test]
fn degree_zero_set_is_closed_under_inversion() {
    let set: BTreeSet<_> = degree_zero_set(2, SearchOptions::default())
        .unwrap()
        .into_iter()
        .map(|(f, _)| f)
        .collect();
    assert_eq!(set.len(), 168);
    for f in &set {
        assert!(set.contains(&f.invert().unwrap()), "{f}");
    }
}

#[test]
fn output_does_not_depend_on_worker_count() {
    let one = enumerate_diagrams(2, 2, SearchOptions::with_jobs(1)).unwrap();
    let three = enumerate_diagrams(2, 2, SearchOptions::with_jobs(3)).unwrap();
    assert_eq!(one, three);
    let a = DegreeCatalogue::build(2, 2, SearchOptions::with_jobs(1)).unwrap();
    let b = DegreeCatalogue::build(2, 2, SearchOptions::with_jobs(4)).unwrap();
    assert!(a.entries().eq(b.entries()));
}
