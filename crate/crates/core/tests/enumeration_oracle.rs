//! Independent brute-force oracles for the diagram enumerator.

use std::collections::{BTreeSet, HashSet};

use whitehead_core::diagram::{Component, NestedDiagram, Region, SphereModel, Token};
use whitehead_core::search::{degree_zero_set, enumerate_diagrams, SearchOptions};
use whitehead_core::{Endomorphism, Letter, Word};

/// Token-free diagrams are laminar families of enclosed portal sides. Read
/// the trace straight off the enclosure sets: the loop through portal j
/// crosses, outermost first, every sphere whose inside holds j+, then leaves
/// every sphere holding j-, innermost first.
fn token_free_traces(rank: usize) -> BTreeSet<Endomorphism> {
    let sides = 2 * rank;
    let mut out = BTreeSet::new();
    let subsets: Vec<u32> = (1..(1u32 << sides)).collect();
    let mut choice = vec![0usize; rank];
    loop {
        let sets: Vec<u32> = choice.iter().map(|&c| subsets[c]).collect();
        let laminar = (0..rank).all(|i| {
            (0..rank).all(|j| {
                i == j || sets[i] & sets[j] == 0 || sets[i] & sets[j] == sets[i] || sets[i] & sets[j] == sets[j]
            })
        });
        let distinct = sets.iter().collect::<HashSet<_>>().len() == rank;
        if laminar && distinct {
            for mask in 0u32..(1 << rank) {
                let images = (0..rank)
                    .map(|j| {
                        let plus = 1u32 << (2 * j);
                        let minus = 1u32 << (2 * j + 1);
                        // larger enclosure sets are further out
                        let mut down: Vec<usize> = (0..rank).filter(|&s| sets[s] & plus != 0).collect();
                        down.sort_by_key(|&s| std::cmp::Reverse(sets[s].count_ones()));
                        let mut up: Vec<usize> = (0..rank).filter(|&s| sets[s] & minus != 0).collect();
                        up.sort_by_key(|&s| sets[s].count_ones());
                        let pos = |s: usize| mask & (1 << s) == 0;
                        Word::reduced_from(
                            down.iter()
                                .map(|&s| Letter::new(s, pos(s)))
                                .chain(up.iter().map(|&s| Letter::new(s, !pos(s)))),
                        )
                    })
                    .collect();
                let e = Endomorphism::new(rank, images).unwrap();
                if e.is_automorphism() {
                    out.insert(e);
                }
            }
        }
        let mut i = 0;
        loop {
            if i == rank {
                return out;
            }
            choice[i] += 1;
            if choice[i] < subsets.len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

#[test]
fn degree_zero_set_matches_enclosure_oracle() {
    for rank in 1..=2 {
        let oracle = token_free_traces(rank);
        let found: BTreeSet<Endomorphism> = degree_zero_set(rank, SearchOptions::default())
            .unwrap()
            .into_iter()
            .map(|(f, _)| f)
            .collect();
        assert_eq!(found, oracle, "rank {rank}");
    }
    assert_eq!(token_free_traces(2).len(), 168);
}

fn regions(m: usize) -> Vec<Region> {
    std::iter::once(Region::Ambient)
        .chain((0..m).map(Region::Inside))
        .collect()
}

/// Every assignment of containment, zones and signs over a fixed token
/// structure, filtered by `validate` alone.
fn brute_force(skel: &NestedDiagram, out: &mut HashSet<Vec<u16>>) {
    let m = skel.components.len();
    let k = skel.tokens.len();
    let n = skel.rank;
    let regs = regions(m);
    let r = regs.len();
    let zones = 2 * n + 2 * k;
    let total_zone = r.pow(zones as u32);
    let total_cont = r.pow(m as u32);
    for zc in 0..total_zone {
        let mut code = zc;
        let mut pick = || {
            let v = regs[code % r];
            code /= r;
            Some(v)
        };
        let outer: Vec<[Option<Region>; 2]> = (0..n).map(|_| [pick(), pick()]).collect();
        let inner: Vec<[Option<Region>; 2]> = (0..k).map(|_| [pick(), pick()]).collect();
        for cc in 0..total_cont {
            let mut code = cc;
            let containment: Vec<Region> = (0..m)
                .map(|_| {
                    let v = regs[code % r];
                    code /= r;
                    v
                })
                .collect();
            for signs in 0u32..(1 << (m + n)) {
                let mut d = skel.clone();
                d.containment = containment.clone();
                d.outer_zones = outer.clone();
                d.inner_zones = inner.clone();
                for c in 0..m {
                    d.components[c].side = if signs & (1 << c) != 0 { -1 } else { 1 };
                }
                for s in 0..n {
                    d.spheres[s].orientation = if signs & (1 << (m + s)) != 0 { -1 } else { 1 };
                }
                if d.validate().is_empty() {
                    out.insert(d.canonical_key());
                }
            }
        }
    }
}

fn skeleton(
    rank: usize,
    components: &[usize],
    tokens: &[(usize, usize, usize)],
    nesting: &[Option<usize>],
) -> NestedDiagram {
    NestedDiagram {
        rank,
        spheres: (0..rank).map(|label| SphereModel { label, orientation: 1 }).collect(),
        components: components.iter().map(|&sphere| Component { sphere, side: 1 }).collect(),
        tokens: tokens
            .iter()
            .map(|&(portal, plus, minus)| Token { portal, plus, minus })
            .collect(),
        nesting: nesting.to_vec(),
        containment: vec![Region::Ambient; components.len()],
        outer_zones: vec![[None; 2]; rank],
        inner_zones: vec![[None; 2]; tokens.len()],
    }
}

#[test]
fn one_token_diagrams_match_brute_force() {
    let mut oracle = HashSet::new();
    // rank 1: a single sphere with one token
    brute_force(&skeleton(1, &[0, 0], &[(0, 0, 1)], &[None]), &mut oracle);
    let found: HashSet<Vec<u16>> = enumerate_diagrams(1, 1, SearchOptions::default())
        .unwrap()
        .into_iter()
        .filter(|d| d.total_tokens() == 1)
        .map(|d| d.canonical_key())
        .collect();
    assert_eq!(found, oracle);
}

#[test]
fn rank_two_one_token_diagrams_match_brute_force() {
    let mut oracle = HashSet::new();
    // the token sits on sphere a or b and on portal a or b; the plus and
    // minus caps are interchangeable by relabeling
    for sphere in 0..2 {
        for portal in 0..2 {
            let comps = if sphere == 0 { vec![0, 0, 1] } else { vec![0, 1, 1] };
            let (p, q) = if sphere == 0 { (0, 1) } else { (1, 2) };
            brute_force(&skeleton(2, &comps, &[(portal, p, q)], &[None]), &mut oracle);
        }
    }
    let found: HashSet<Vec<u16>> = enumerate_diagrams(2, 1, SearchOptions::default())
        .unwrap()
        .into_iter()
        .filter(|d| d.total_tokens() == 1)
        .map(|d| d.canonical_key())
        .collect();
    assert_eq!(found.len(), oracle.len());
    assert_eq!(found, oracle);
}
