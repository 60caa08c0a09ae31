//! Words over the Fourier alphabet: enumeration, shuffles, deconcatenations.

use std::fmt;
use std::str::FromStr;

use smallvec::SmallVec;

use crate::algebra::Scalar;
use crate::error::Error;
use crate::model::FourierModel;

/// A letter is the integer index `k` of a term `e^{ikωt} f_k(x)`.
pub type Letter = i32;

/// Default maximal word length.
pub const N_MAX: usize = 7;

/// A (possibly empty) string of letters.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(SmallVec<[Letter; 8]>);

impl Word {
    pub fn empty() -> Self {
        Word(SmallVec::new())
    }

    pub fn from_letters(letters: &[Letter]) -> Self {
        Word(SmallVec::from_slice(letters))
    }

    pub fn letter(k: Letter) -> Self {
        Word::from_letters(&[k])
    }

    /// The word `0^r`.
    pub fn zeros(r: usize) -> Self {
        Word(SmallVec::from_elem(0, r))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `k · self`
    pub fn prepend(&self, k: Letter) -> Word {
        let mut out = SmallVec::with_capacity(self.len() + 1);
        out.push(k);
        out.extend_from_slice(&self.0);
        Word(out)
    }

    /// `self · k`
    pub fn append(&self, k: Letter) -> Word {
        let mut out = self.0.clone();
        out.push(k);
        Word(out)
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut out = self.0.clone();
        out.extend_from_slice(&other.0);
        Word(out)
    }

    pub fn slice(&self, from: usize, to: usize) -> Word {
        Word::from_letters(&self.0[from..to])
    }

    /// Word with every letter negated.
    pub fn negated(&self) -> Word {
        Word(self.0.iter().map(|k| -k).collect())
    }

    pub fn letter_sum(&self) -> Letter {
        self.0.iter().sum()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("∅");
        }
        for (i, k) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            write!(f, "{k}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl FromStr for Word {
    type Err = Error;

    /// Parses dot-separated signed integers, e.g. `0.1.-3`; `""` and `∅`
    /// denote the empty word.
    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        if s.is_empty() || s == "∅" {
            return Ok(Word::empty());
        }
        s.split('.')
            .map(|part| {
                part.trim().parse::<Letter>().map_err(|_| Error::Validation(format!("invalid letter {part:?} in word {s:?}")))
            })
            .collect::<Result<SmallVec<_>, _>>()
            .map(Word)
    }
}

impl From<&[Letter]> for Word {
    fn from(letters: &[Letter]) -> Self {
        Word::from_letters(letters)
    }
}

/// Letters `k` whose field `f_k` is not identically zero, sorted.
pub fn support_letters<S: Scalar>(model: &FourierModel<S>) -> Vec<Letter> {
    model.support_letters()
}

/// Streaming enumeration of all words of length `n` over `letters`, in
/// lexicographic order of letter positions.
#[derive(Clone, Debug)]
pub struct WordsOfLength {
    letters: Vec<Letter>,
    n: usize,
    next: u64,
    end: u64,
}

impl WordsOfLength {
    pub fn new(letters: &[Letter], n: usize) -> Self {
        let total = (letters.len() as u64).pow(n as u32);
        Self::range(letters, n, 0, total)
    }

    /// The words with lexicographic rank in `start..end`; disjoint ranges can
    /// be consumed by independent workers.
    pub fn range(letters: &[Letter], n: usize, start: u64, end: u64) -> Self {
        let total = (letters.len() as u64).pow(n as u32);
        WordsOfLength { letters: letters.to_vec(), n, next: start.min(total), end: end.min(total) }
    }

    /// Total number of words of this length.
    pub fn total(&self) -> u64 {
        (self.letters.len() as u64).pow(self.n as u32)
    }

    fn word_at(&self, mut rank: u64) -> Word {
        let base = self.letters.len() as u64;
        let mut out: SmallVec<[Letter; 8]> = SmallVec::from_elem(0, self.n);
        for slot in out.iter_mut().rev() {
            *slot = self.letters[(rank % base) as usize];
            rank /= base;
        }
        Word(out)
    }
}

impl Iterator for WordsOfLength {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        if self.next >= self.end {
            return None;
        }
        let w = self.word_at(self.next);
        self.next += 1;
        Some(w)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.end - self.next) as usize;
        (left, Some(left))
    }
}

impl ExactSizeIterator for WordsOfLength {}

pub fn words_of_length(letters: &[Letter], n: usize) -> WordsOfLength {
    WordsOfLength::new(letters, n)
}

/// All words of length `0..=n` over `letters`, shortest first.
pub fn words_up_to(letters: &[Letter], n: usize) -> impl Iterator<Item = Word> + '_ {
    (0..=n).flat_map(move |len| WordsOfLength::new(letters, len))
}

/// All order-preserving interleavings of `u` and `v`, as a multiset.
pub fn shuffle(u: &Word, v: &Word) -> Vec<Word> {
    fn rec(u: &[Letter], v: &[Letter], prefix: &mut Vec<Letter>, out: &mut Vec<Word>) {
        match (u.split_first(), v.split_first()) {
            (None, _) | (_, None) => {
                let mut w = prefix.clone();
                w.extend_from_slice(u);
                w.extend_from_slice(v);
                out.push(Word::from_letters(&w));
            }
            (Some((&a, u_rest)), Some((&b, v_rest))) => {
                prefix.push(a);
                rec(u_rest, v, prefix, out);
                prefix.pop();
                prefix.push(b);
                rec(u, v_rest, prefix, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(u.letters(), v.letters(), &mut Vec::with_capacity(u.len() + v.len()), &mut out);
    out
}

/// All prefix/suffix splittings `(u, v)` with `uv = w`, by prefix length.
pub fn deconcatenations(w: &Word) -> Vec<(Word, Word)> {
    (0..=w.len()).map(|i| (w.slice(0, i), w.slice(i, w.len()))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn text_format_round_trip() {
        let word = Word::from_letters(&[0, 1, -3]);
        assert_eq!(word.to_string(), "0.1.-3");
        assert_eq!(w("0.1.-3"), word);
        assert_eq!(w(""), Word::empty());
        assert_eq!(w("∅"), Word::empty());
        assert!("1..2".parse::<Word>().is_err());
        assert!("a".parse::<Word>().is_err());
    }

    #[test]
    fn enumeration() {
        let two: Vec<String> = words_of_length(&[0, 1], 2).map(|w| w.to_string()).collect();
        assert_eq!(two, ["0.0", "0.1", "1.0", "1.1"]);
        let letters: Vec<Letter> = (-3..=3).collect();
        let it = words_of_length(&letters, 7);
        assert_eq!(it.total(), 823_543);
        assert_eq!(it.len(), 823_543);
        let zero: Vec<Word> = words_of_length(&letters, 0).collect();
        assert_eq!(zero, vec![Word::empty()]);
    }

    #[test]
    fn chunked_enumeration_covers_everything_once() {
        let letters: Vec<Letter> = (-3..=3).collect();
        let all: Vec<Word> = words_of_length(&letters, 3).collect();
        let chunked: Vec<Word> =
            (0..7u64).flat_map(|c| WordsOfLength::range(&letters, 3, c * 49, (c + 1) * 49)).collect();
        assert_eq!(all, chunked);
    }

    #[test]
    fn shuffle_examples() {
        let mut kl = shuffle(&w("1"), &w("2"));
        kl.sort();
        assert_eq!(kl, vec![w("1.2"), w("2.1")]);
        assert_eq!(shuffle(&Word::empty(), &w("4.5")), vec![w("4.5")]);
        let mut s = shuffle(&w("1.2"), &w("3"));
        s.sort();
        assert_eq!(s, vec![w("1.2.3"), w("1.3.2"), w("3.1.2")]);
    }

    #[test]
    fn deconcatenation_examples() {
        assert_eq!(deconcatenations(&w("4.5")), vec![(w(""), w("4.5")), (w("4"), w("5")), (w("4.5"), w(""))]);
        assert_eq!(deconcatenations(&Word::empty()), vec![(Word::empty(), Word::empty())]);
        assert_eq!(deconcatenations(&w("1.2.3")).len(), 4);
    }

    fn binomial(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    fn arb_word() -> impl Strategy<Value = Word> {
        prop::collection::vec(-3i32..=3, 0..=4).prop_map(|v| Word::from_letters(&v))
    }

    proptest! {
        #[test]
        fn shuffle_size_and_content(u in arb_word(), v in arb_word()) {
            let s = shuffle(&u, &v);
            prop_assert_eq!(s.len(), binomial(u.len() + v.len(), u.len()));
            let mut union: Vec<Letter> = u.letters().iter().chain(v.letters()).copied().collect();
            union.sort();
            for word in &s {
                prop_assert_eq!(word.len(), u.len() + v.len());
                let mut letters = word.letters().to_vec();
                letters.sort();
                prop_assert_eq!(&letters, &union);
            }
            let mut a = s;
            let mut b = shuffle(&v, &u);
            a.sort();
            b.sort();
            prop_assert_eq!(a, b);
        }
    }
}
