//! Words over the balanced alphabet `{a, A, b, B, ...}` and free reduction.
//!
//! Generators are numbered from zero internally; lowercase `a` is generator 0
//! and uppercase `A` its inverse. A [`Word`] is an immutable value; every
//! operation returns a fresh word.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Largest supported rank (one generator per ASCII letter).
pub const MAX_RANK: usize = 26;

/// A generator or its formal inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Letter {
    generator: u8,
    inverse: bool,
}

impl Letter {
    /// Positive letter for the zero-based generator `index`.
    ///
    /// Panics if `index >= MAX_RANK`.
    pub fn generator(index: usize) -> Self {
        assert!(index < MAX_RANK, "generator index {index} out of range");
        Letter {
            generator: index as u8,
            inverse: false,
        }
    }

    pub fn new(index: usize, positive: bool) -> Self {
        let l = Letter::generator(index);
        if positive {
            l
        } else {
            l.inverse()
        }
    }

    pub fn index(self) -> usize {
        self.generator as usize
    }

    pub fn is_positive(self) -> bool {
        !self.inverse
    }

    /// `+1` or `-1`.
    pub fn sign(self) -> i8 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    pub fn inverse(self) -> Self {
        Letter {
            generator: self.generator,
            inverse: !self.inverse,
        }
    }

    /// Position in the order `a < A < b < B < ...`.
    pub fn order_key(self) -> u8 {
        self.generator * 2 + self.inverse as u8
    }

    pub fn to_char(self) -> char {
        let base = if self.inverse { b'A' } else { b'a' };
        (base + self.generator) as char
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'a'..='z' => Some(Letter::new(c as usize - 'a' as usize, true)),
            'A'..='Z' => Some(Letter::new(c as usize - 'A' as usize, false)),
            _ => None,
        }
    }

    fn cancels(self, other: Letter) -> bool {
        self.generator == other.generator && self.inverse != other.inverse
    }
}

impl PartialOrd for Letter {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Letter {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.order_key().cmp(&other.order_key())
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_char())
    }
}

/// A finite sequence of letters, not necessarily reduced.
///
/// Ordered lexicographically on letters (`a < A < b < ...`), a proper prefix
/// first. Nielsen reduction breaks ties with this order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    /// The empty word `1`.
    pub fn empty() -> Self {
        Word { letters: Vec::new() }
    }

    /// Stores `letters` as given, without reducing.
    pub fn from_letters(letters: Vec<Letter>) -> Self {
        Word { letters }
    }

    /// Builds the reduced form of `letters`.
    pub fn reduced_from(letters: impl IntoIterator<Item = Letter>) -> Self {
        let mut stack: Vec<Letter> = Vec::new();
        for l in letters {
            match stack.last() {
                Some(&top) if top.cancels(l) => {
                    stack.pop();
                }
                _ => stack.push(l),
            }
        }
        Word { letters: stack }
    }

    pub fn letter(l: Letter) -> Self {
        Word { letters: vec![l] }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// True when no adjacent pair is a trivial relator.
    pub fn is_reduced(&self) -> bool {
        self.letters.windows(2).all(|w| !w[0].cancels(w[1]))
    }

    /// Free reduction by single-pass stack cancellation.
    pub fn reduce(&self) -> Word {
        Word::reduced_from(self.letters.iter().copied())
    }

    /// Product `self * other`, reduced.
    pub fn concat(&self, other: &Word) -> Word {
        Word::reduced_from(self.letters.iter().chain(other.letters.iter()).copied())
    }

    /// Reverse the letters and invert each of them.
    pub fn invert(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    /// Free equivalence: equal reduced forms.
    pub fn equivalent(&self, other: &Word) -> bool {
        self.reduce() == other.reduce()
    }

    /// Largest generator index used, plus one (0 for the empty word).
    pub fn rank_needed(&self) -> usize {
        self.letters.iter().map(|l| l.index() + 1).max().unwrap_or(0)
    }

    /// Replaces every letter with index `i` by `map(i)` raised to its sign.
    pub fn substitute<F>(&self, mut image: F) -> Word
    where
        F: FnMut(usize) -> Word,
    {
        let mut out = Vec::new();
        for &l in &self.letters {
            let w = image(l.index());
            if l.is_positive() {
                out.extend_from_slice(&w.letters);
            } else {
                out.extend(w.letters.iter().rev().map(|x| x.inverse()));
            }
        }
        Word::reduced_from(out)
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<T: IntoIterator<Item = Letter>>(iter: T) -> Self {
        Word {
            letters: iter.into_iter().collect(),
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        for l in &self.letters {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub(crate) fn w(s: &str) -> Word {
        if s == "1" {
            return Word::empty();
        }
        s.chars().map(|c| Letter::from_char(c).unwrap()).collect()
    }

    #[test]
    fn letter_roundtrip_and_order() {
        for c in ('a'..='z').chain('A'..='Z') {
            assert_eq!(Letter::from_char(c).unwrap().to_char(), c);
        }
        assert!(Letter::from_char('a').unwrap() < Letter::from_char('A').unwrap());
        assert!(Letter::from_char('A').unwrap() < Letter::from_char('b').unwrap());
        assert_eq!(Letter::from_char('1'), None);
    }

    #[test]
    fn reduce_examples() {
        assert_eq!(w("bAcCaB").reduce(), Word::empty());
        assert_eq!(Word::empty().reduce(), Word::empty());
        assert_eq!(w("abBAab").reduce(), w("ab"));
        assert!(w("abBAab").reduce().is_reduced());
        assert!(!w("aA").is_reduced());
    }

    #[test]
    fn concat_examples() {
        assert_eq!(w("aCd").concat(&w("Be")), w("aCdBe"));
        assert_eq!(w("abB").concat(&Word::empty()), w("a"));
        assert_eq!(w("ab").concat(&w("BA")), Word::empty());
    }

    #[test]
    fn invert_examples() {
        assert_eq!(w("bAc").invert(), w("CaB"));
        assert_eq!(Word::empty().invert(), Word::empty());
        assert_eq!(w("aB").invert(), w("bA"));
    }

    #[test]
    fn equivalence_examples() {
        assert!(w("aBbc").equivalent(&w("ac")));
        assert!(w("abc").equivalent(&w("abc")));
        assert!(!w("a").equivalent(&w("b")));
    }

    #[test]
    fn display_empty_is_one() {
        assert_eq!(Word::empty().to_string(), "1");
        assert_eq!(w("aBc").to_string(), "aBc");
    }

    #[test]
    fn substitute_inverts_negative_letters() {
        let img = |i: usize| if i == 0 { w("a") } else { w("ab") };
        assert_eq!(w("B").substitute(img), w("BA"));
        assert_eq!(w("bB").substitute(img), Word::empty());
    }
}
