use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use whitehead_core::textio::{format_word, parse_word};
use whitehead_core::{Letter, Word};

/// Unreduced words over a small alphabet so that cancellations are common.
fn word(rank: usize, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((0..rank, any::<bool>()), 0..max_len)
        .prop_map(|v| Word::from_letters(v.into_iter().map(|(i, p)| Letter::new(i, p)).collect()))
}

fn reduced(rank: usize, max_len: usize) -> impl Strategy<Value = Word> {
    word(rank, max_len).prop_map(|w| w.reduce())
}

/// Deletes cancelling pairs one at a time, picking among all available
/// pairs at random, until none remain.
fn reduce_randomly(w: &Word, seed: u64) -> Word {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut letters = w.letters().to_vec();
    loop {
        let spots: Vec<usize> = (0..letters.len().saturating_sub(1))
            .filter(|&i| letters[i].inverse() == letters[i + 1])
            .collect();
        if spots.is_empty() {
            return Word::from_letters(letters);
        }
        let i = spots[rng.gen_range(0..spots.len())];
        letters.drain(i..i + 2);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn reduction_is_confluent(w in word(3, 24), seed in any::<u64>()) {
        prop_assert_eq!(reduce_randomly(&w, seed), w.reduce());
    }

    #[test]
    fn reduction_preserves_length_parity(w in word(3, 24)) {
        let r = w.reduce();
        prop_assert!(r.is_reduced());
        prop_assert_eq!(r.len() % 2, w.len() % 2);
        prop_assert!(r.len() <= w.len());
        prop_assert_eq!(r.reduce(), r.clone());
    }

    #[test]
    fn group_axioms(x in reduced(3, 12), y in reduced(3, 12), z in reduced(3, 12)) {
        let e = Word::empty();
        prop_assert_eq!(x.concat(&y).concat(&z), x.concat(&y.concat(&z)));
        prop_assert_eq!(x.concat(&e), x.clone());
        prop_assert_eq!(e.concat(&x), x.clone());
        prop_assert_eq!(x.concat(&x.invert()), Word::empty());
        prop_assert_eq!(x.invert().concat(&x), Word::empty());
        prop_assert_eq!(x.concat(&y).invert(), y.invert().concat(&x.invert()));
    }

    #[test]
    fn equivalence_is_a_right_congruence(x in word(3, 12), z in word(3, 12)) {
        // x and its reduced form are equivalent, so products with z agree
        let r = x.reduce();
        prop_assert!(x.equivalent(&r));
        prop_assert_eq!(x.concat(&z), r.concat(&z));
        prop_assert_eq!(z.concat(&x), z.concat(&r));
    }

    #[test]
    fn text_round_trip(w in word(26, 20)) {
        prop_assert_eq!(parse_word(&format_word(&w)).unwrap(), w);
    }
}
