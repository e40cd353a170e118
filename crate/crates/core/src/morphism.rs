//! Endomorphisms of `F_n` given by generator images.
//!
//! Composition follows function notation: `f.compose(&g)` is `f ∘ g`, so `g`
//! acts first. Basis testing is Nielsen reduction; a successful reduction
//! yields a [`NielsenCertificate`] that also gives the inverse automorphism.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{check_rank, Error, Result};
use crate::word::{Letter, Word};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Endomorphism {
    rank: usize,
    images: Vec<Word>,
}

impl Endomorphism {
    /// Builds an endomorphism from one image per generator. Images are
    /// reduced on construction.
    pub fn new(rank: usize, images: Vec<Word>) -> Result<Self> {
        check_rank(rank)?;
        if images.len() != rank {
            return Err(Error::WrongArity {
                expected: rank,
                got: images.len(),
            });
        }
        for w in &images {
            check_word(w, rank)?;
        }
        Ok(Endomorphism {
            rank,
            images: images.iter().map(Word::reduce).collect(),
        })
    }

    pub fn identity(rank: usize) -> Self {
        Endomorphism {
            rank,
            images: standard_tuple(rank),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn image(&self, generator: usize) -> &Word {
        &self.images[generator]
    }

    pub fn is_identity(&self) -> bool {
        self.images == standard_tuple(self.rank)
    }

    /// Image of `w` under the homomorphic extension.
    pub fn apply(&self, w: &Word) -> Result<Word> {
        check_word(w, self.rank)?;
        Ok(self.apply_unchecked(w))
    }

    pub(crate) fn apply_unchecked(&self, w: &Word) -> Word {
        w.substitute(|i| self.images[i].clone())
    }

    /// `self ∘ other`: the image of generator `i` is `self(other(x_i))`.
    pub fn compose(&self, other: &Endomorphism) -> Result<Endomorphism> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch(self.rank, other.rank));
        }
        Ok(Endomorphism {
            rank: self.rank,
            images: other.images.iter().map(|w| self.apply_unchecked(w)).collect(),
        })
    }

    pub fn is_automorphism(&self) -> bool {
        nielsen_reduce(&self.images).is_some()
    }

    /// The inverse automorphism, obtained by replaying the basis certificate
    /// backwards.
    pub fn invert(&self) -> Result<Endomorphism> {
        let cert = is_basis(self.rank, &self.images)?.ok_or_else(|| Error::NotAnAutomorphism(self.to_string()))?;
        Ok(Endomorphism {
            rank: self.rank,
            images: cert.inverse().replay(self.rank),
        })
    }

    /// Renames generator `i` to `perm[i]` on both sides.
    pub fn relabel_outputs(&self, perm: &[usize]) -> Endomorphism {
        let images = self
            .images
            .iter()
            .map(|w| {
                w.letters()
                    .iter()
                    .map(|l| Letter::new(perm[l.index()], l.is_positive()))
                    .collect::<Word>()
            })
            .collect();
        Endomorphism {
            rank: self.rank,
            images,
        }
    }
}

impl fmt::Display for Endomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, w) in self.images.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{}->{}", Letter::generator(i), w)?;
        }
        Ok(())
    }
}

pub(crate) fn check_word(w: &Word, rank: usize) -> Result<()> {
    match w.letters().iter().find(|l| l.index() >= rank) {
        Some(l) => Err(Error::GeneratorOutOfRange {
            letter: l.to_char(),
            rank,
        }),
        None => Ok(()),
    }
}

pub fn standard_tuple(rank: usize) -> Vec<Word> {
    (0..rank).map(|i| Word::letter(Letter::generator(i))).collect()
}

/// Elementary Nielsen transformation on a tuple of words.
///
/// Applying a move to the image tuple of `φ` gives the image tuple of
/// `φ ∘ τ` for the corresponding elementary automorphism `τ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "move", rename_all = "snake_case")]
pub enum NielsenMove {
    Swap {
        i: usize,
        j: usize,
    },
    Invert {
        i: usize,
    },
    /// `t[target] <- t[target] * t[by]^sign`
    RightMul {
        target: usize,
        by: usize,
        sign: i8,
    },
    /// `t[target] <- t[by]^sign * t[target]`
    LeftMul {
        target: usize,
        by: usize,
        sign: i8,
    },
}

impl NielsenMove {
    pub fn apply(&self, tuple: &mut [Word]) {
        match *self {
            NielsenMove::Swap { i, j } => tuple.swap(i, j),
            NielsenMove::Invert { i } => tuple[i] = tuple[i].invert(),
            NielsenMove::RightMul { target, by, sign } => {
                let f = signed(&tuple[by], sign);
                tuple[target] = tuple[target].concat(&f);
            }
            NielsenMove::LeftMul { target, by, sign } => {
                let f = signed(&tuple[by], sign);
                tuple[target] = f.concat(&tuple[target]);
            }
        }
    }

    pub fn inverse(&self) -> NielsenMove {
        match *self {
            NielsenMove::RightMul { target, by, sign } => NielsenMove::RightMul {
                target,
                by,
                sign: -sign,
            },
            NielsenMove::LeftMul { target, by, sign } => NielsenMove::LeftMul {
                target,
                by,
                sign: -sign,
            },
            m => m,
        }
    }
}

fn signed(w: &Word, sign: i8) -> Word {
    if sign > 0 {
        w.clone()
    } else {
        w.invert()
    }
}

/// Moves that carry the standard tuple to a certified basis.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct NielsenCertificate {
    pub moves: Vec<NielsenMove>,
}

impl NielsenCertificate {
    /// Applies the moves in order to the standard tuple of the given rank.
    pub fn replay(&self, rank: usize) -> Vec<Word> {
        let mut t = standard_tuple(rank);
        for m in &self.moves {
            m.apply(&mut t);
        }
        t
    }

    /// Certificate of the inverse automorphism: inverse moves, reversed.
    pub fn inverse(&self) -> NielsenCertificate {
        NielsenCertificate {
            moves: self.moves.iter().rev().map(NielsenMove::inverse).collect(),
        }
    }
}

/// Tests whether `words` is a basis of `F_rank`; on success returns a
/// certificate whose replay reproduces the reduced tuple.
pub fn is_basis(rank: usize, words: &[Word]) -> Result<Option<NielsenCertificate>> {
    check_rank(rank)?;
    if words.len() != rank {
        return Err(Error::WrongArity {
            expected: rank,
            got: words.len(),
        });
    }
    for w in words {
        check_word(w, rank)?;
    }
    Ok(nielsen_reduce(words))
}

fn total_len(t: &[Word]) -> usize {
    t.iter().map(Word::len).sum()
}

fn multiplication_moves(n: usize) -> Vec<NielsenMove> {
    let mut out = Vec::new();
    for target in 0..n {
        for by in 0..n {
            if by == target {
                continue;
            }
            for sign in [1i8, -1] {
                out.push(NielsenMove::RightMul { target, by, sign });
                out.push(NielsenMove::LeftMul { target, by, sign });
            }
        }
    }
    out
}

/// The strictly length-decreasing move with the shortest result, ties broken
/// by the lexicographically least resulting tuple.
fn best_decrease(t: &[Word], moves: &[NielsenMove]) -> Option<(NielsenMove, Vec<Word>)> {
    let len = total_len(t);
    let mut best: Option<(usize, NielsenMove, Vec<Word>)> = None;
    for m in moves {
        let mut next = t.to_vec();
        m.apply(&mut next);
        let l = total_len(&next);
        if l >= len {
            continue;
        }
        let better = match &best {
            None => true,
            Some((bl, _, bt)) => l < *bl || (l == *bl && next < *bt),
        };
        if better {
            best = Some((l, *m, next));
        }
    }
    best.map(|(_, m, t)| (m, t))
}

/// Cap on the number of equal-length tuples explored when no single move
/// shortens the tuple.
const PLATEAU_LIMIT: usize = 200_000;

/// Breadth-first search over tuples of the same total length for one that
/// admits a shortening move. Returns the path of length-preserving moves.
fn escape_plateau(t: &[Word], moves: &[NielsenMove]) -> Option<Vec<NielsenMove>> {
    let len = total_len(t);
    let mut seen: HashSet<Vec<Word>> = HashSet::new();
    let mut queue: VecDeque<(Vec<Word>, Vec<NielsenMove>)> = VecDeque::new();
    seen.insert(t.to_vec());
    queue.push_back((t.to_vec(), Vec::new()));
    while let Some((cur, path)) = queue.pop_front() {
        for m in moves {
            let mut next = cur.clone();
            m.apply(&mut next);
            let l = total_len(&next);
            if l < len {
                return Some(path);
            }
            if l == len && !seen.contains(&next) {
                if seen.len() >= PLATEAU_LIMIT {
                    return None;
                }
                seen.insert(next.clone());
                let mut p = path.clone();
                p.push(*m);
                queue.push_back((next, p));
            }
        }
    }
    None
}

fn nielsen_reduce(words: &[Word]) -> Option<NielsenCertificate> {
    let n = words.len();
    let moves = multiplication_moves(n);
    let mut t: Vec<Word> = words.iter().map(Word::reduce).collect();
    let mut forward: Vec<NielsenMove> = Vec::new();
    loop {
        if t.iter().any(Word::is_empty) {
            return None;
        }
        if t.iter().all(|w| w.len() == 1) {
            break;
        }
        if let Some((m, next)) = best_decrease(&t, &moves) {
            forward.push(m);
            t = next;
            continue;
        }
        let path = escape_plateau(&t, &moves)?;
        for m in path {
            m.apply(&mut t);
            forward.push(m);
        }
        let (m, next) = best_decrease(&t, &moves)?;
        forward.push(m);
        t = next;
    }
    let signed_perm = signed_permutation_moves(&t)?;
    // standard -> signed permutation -> (undo the reduction) -> words
    let mut cert = signed_perm;
    cert.extend(forward.iter().rev().map(NielsenMove::inverse));
    Some(NielsenCertificate { moves: cert })
}

/// Swaps and inversions carrying the standard tuple to `t`, which must
/// consist of single letters forming a signed permutation.
fn signed_permutation_moves(t: &[Word]) -> Option<Vec<NielsenMove>> {
    let n = t.len();
    let letters: Vec<Letter> = t.iter().map(|w| w.letters()[0]).collect();
    let mut used = vec![false; n];
    for l in &letters {
        if used[l.index()] {
            return None;
        }
        used[l.index()] = true;
    }
    let mut cur: Vec<usize> = (0..n).collect();
    let mut moves = Vec::new();
    for (i, l) in letters.iter().enumerate() {
        let want = l.index();
        let j = cur.iter().position(|&g| g == want).unwrap();
        if j != i {
            cur.swap(i, j);
            moves.push(NielsenMove::Swap { i, j });
        }
    }
    for (i, l) in letters.iter().enumerate() {
        if !l.is_positive() {
            moves.push(NielsenMove::Invert { i });
        }
    }
    Some(moves)
}

/// Elementary automorphisms: adjacent transpositions, single inversions and
/// transvections `x_i -> x_i x_j`.
pub fn nielsen_generators(rank: usize) -> Result<Vec<Endomorphism>> {
    check_rank(rank)?;
    let mut out = Vec::new();
    for i in 0..rank.saturating_sub(1) {
        let mut t = standard_tuple(rank);
        t.swap(i, i + 1);
        out.push(Endomorphism { rank, images: t });
    }
    for i in 0..rank {
        let mut t = standard_tuple(rank);
        NielsenMove::Invert { i }.apply(&mut t);
        out.push(Endomorphism { rank, images: t });
    }
    for target in 0..rank {
        for by in 0..rank {
            if target != by {
                let mut t = standard_tuple(rank);
                NielsenMove::RightMul { target, by, sign: 1 }.apply(&mut t);
                out.push(Endomorphism { rank, images: t });
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::tests::w;

    fn endo(images: &[&str]) -> Endomorphism {
        Endomorphism::new(images.len(), images.iter().map(|s| w(s)).collect()).unwrap()
    }

    #[test]
    fn apply_examples() {
        let f = endo(&["a", "ab"]);
        assert_eq!(f.apply(&w("b")).unwrap(), w("ab"));
        assert_eq!(Endomorphism::identity(2).apply(&w("abBa")).unwrap(), w("aa"));
        let g = endo(&["b", "bAB"]);
        assert_eq!(g.apply(&w("Ab")).unwrap(), w("AB"));
        assert!(matches!(
            f.apply(&w("c")),
            Err(Error::GeneratorOutOfRange { letter: 'c', rank: 2 })
        ));
    }

    #[test]
    fn compose_examples() {
        let f = endo(&["a", "ab"]);
        assert_eq!(f.compose(&Endomorphism::identity(2)).unwrap(), f);
        assert_eq!(f.compose(&f).unwrap(), endo(&["a", "aab"]));
        let g = endo(&["b", "bAB"]);
        let gi = endo(&["ABa", "a"]);
        assert!(g.compose(&gi).unwrap().is_identity());
        assert!(gi.compose(&g).unwrap().is_identity());
        assert_eq!(f.compose(&Endomorphism::identity(3)), Err(Error::RankMismatch(2, 3)));
    }

    #[test]
    fn basis_examples() {
        assert!(is_basis(3, &[w("a"), w("Abc"), w("CA")]).unwrap().is_some());
        assert!(is_basis(3, &standard_tuple(3)).unwrap().is_some());
        assert!(is_basis(2, &[w("aa"), w("b")]).unwrap().is_none());
        assert!(matches!(
            is_basis(2, &[w("a")]),
            Err(Error::WrongArity { expected: 2, got: 1 })
        ));
        assert!(is_basis(2, &[w("a"), w("c")]).is_err());
    }

    #[test]
    fn certificate_replays_to_tuple() {
        let t = vec![w("a"), w("Abc"), w("CA")];
        let cert = is_basis(3, &t).unwrap().unwrap();
        assert_eq!(cert.replay(3), t);
    }

    #[test]
    fn automorphism_examples() {
        assert!(endo(&["a", "ab"]).is_automorphism());
        assert!(Endomorphism::identity(2).is_automorphism());
        assert!(!endo(&["a", "aa"]).is_automorphism());
    }

    #[test]
    fn inversion_examples() {
        assert_eq!(endo(&["b", "bAB"]).invert().unwrap(), endo(&["ABa", "a"]));
        assert!(Endomorphism::identity(3).invert().unwrap().is_identity());
        assert_eq!(endo(&["a", "ab"]).invert().unwrap(), endo(&["a", "Ab"]));
        assert!(matches!(endo(&["a", "aa"]).invert(), Err(Error::NotAnAutomorphism(_))));
    }

    #[test]
    fn rank_one() {
        assert!(endo(&["a"]).is_automorphism());
        assert!(endo(&["A"]).is_automorphism());
        assert!(!endo(&["aa"]).is_automorphism());
        assert!(!endo(&["1"]).is_automorphism());
        let gens = nielsen_generators(1).unwrap();
        assert_eq!(gens, vec![endo(&["A"])]);
    }

    #[test]
    fn nielsen_generators_are_automorphisms() {
        let gens = nielsen_generators(2).unwrap();
        assert!(gens.contains(&endo(&["ab", "b"])));
        for n in 1..=5 {
            let gens = nielsen_generators(n).unwrap();
            assert_eq!(gens.len(), (n - 1) + n + n * (n - 1));
            assert!(gens.iter().all(Endomorphism::is_automorphism));
        }
        assert_eq!(nielsen_generators(0), Err(Error::RankOutOfRange(0)));
        assert_eq!(nielsen_generators(27), Err(Error::RankOutOfRange(27)));
    }

    #[test]
    fn display_format() {
        assert_eq!(endo(&["a", "ab"]).to_string(), "a->a; b->ab");
        assert_eq!(endo(&["1", "b"]).to_string(), "a->1; b->b");
    }
}
