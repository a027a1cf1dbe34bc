//! Words over an indexed tuple of group elements, with a deterministic
//! length-lexicographic enumeration of freely reduced words.

use crate::error::{Error, Result};
use std::fmt;

/// A formal word: a sequence of (letter, exponent) pairs. Letters index into
/// whatever tuple the word is evaluated against.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word(pub Vec<(u32, i64)>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn letter(i: u32) -> Self {
        Word(vec![(i, 1)])
    }

    pub fn power(i: u32, e: i64) -> Self {
        if e == 0 {
            Word::identity()
        } else {
            Word(vec![(i, e)])
        }
    }

    pub fn concat(mut self, other: &Word) -> Self {
        self.0.extend(other.0.iter().cloned());
        self
    }

    pub fn inverse(&self) -> Self {
        Word(self.0.iter().rev().map(|&(l, e)| (l, -e)).collect())
    }

    /// Merge adjacent runs of the same letter and drop zero exponents.
    /// Does not perform any group-specific rewriting.
    pub fn reduce(&self) -> Self {
        let mut out: Vec<(u32, i64)> = Vec::with_capacity(self.0.len());
        for &(l, e) in &self.0 {
            if e == 0 {
                continue;
            }
            match out.last_mut() {
                Some((pl, pe)) if *pl == l => {
                    *pe += e;
                    if *pe == 0 {
                        out.pop();
                    }
                }
                _ => out.push((l, e)),
            }
        }
        Word(out)
    }

    pub fn is_identity(&self) -> bool {
        self.reduce().0.is_empty()
    }

    /// Total letter count, counting multiplicity.
    pub fn length(&self) -> u64 {
        self.0.iter().map(|&(_, e)| e.unsigned_abs()).sum()
    }

    pub fn max_letter(&self) -> Option<u32> {
        self.0.iter().map(|&(l, _)| l).max()
    }

    /// Signed exponent sum per letter, for letters < k.
    pub fn exponent_sums(&self, k: usize) -> Vec<i64> {
        let mut sums = vec![0i64; k];
        for &(l, e) in &self.0 {
            if (l as usize) < k {
                sums[l as usize] += e;
            }
        }
        sums
    }

    pub fn parse(s: &str) -> Result<Word> {
        let s = s.trim();
        if s == "1" || s.is_empty() {
            return Ok(Word::identity());
        }
        let mut parts = Vec::new();
        for term in s.split('*') {
            let term = term.trim();
            let (name, exp) = match term.split_once('^') {
                Some((n, e)) => (
                    n,
                    e.parse::<i64>()
                        .map_err(|_| Error::Parse(format!("bad exponent in '{term}'")))?,
                ),
                None => (term, 1),
            };
            let idx: u32 = name
                .strip_prefix('g')
                .or_else(|| name.strip_prefix('x'))
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| Error::Parse(format!("bad letter '{name}'")))?;
            parts.push((idx, exp));
        }
        Ok(Word(parts))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, (l, e)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            write!(f, "x{l}^{e}")?;
        }
        Ok(())
    }
}

/// Iterator over freely reduced words over `k` letters, in length-lex order.
///
/// The alphabet order is g0, g0^-1, g1, g1^-1, ...; the empty word comes
/// first. A word is skipped when a letter is immediately followed by its
/// inverse.
pub struct ReducedWords {
    k: usize,
    // current frontier of letter sequences (alphabet indices)
    frontier: Vec<Vec<u8>>,
    pos: usize,
    emitted_empty: bool,
}

pub fn reduced_words(k: usize) -> ReducedWords {
    ReducedWords {
        k,
        frontier: vec![Vec::new()],
        pos: 1, // past the seed entry; the empty word is emitted separately
        emitted_empty: false,
    }
}

impl ReducedWords {
    fn alphabet(&self) -> usize {
        2 * self.k
    }
}

impl Iterator for ReducedWords {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        if !self.emitted_empty {
            self.emitted_empty = true;
            return Some(Word::identity());
        }
        if self.k == 0 {
            return None;
        }
        loop {
            if self.pos >= self.frontier.len() {
                // extend every frontier word by one letter
                let mut next = Vec::with_capacity(self.frontier.len() * self.alphabet());
                for w in &self.frontier {
                    for a in 0..self.alphabet() as u8 {
                        if let Some(&last) = w.last() {
                            // skip immediate cancellation: letters 2i and 2i+1 invert
                            if last ^ 1 == a {
                                continue;
                            }
                        }
                        let mut v = w.clone();
                        v.push(a);
                        next.push(v);
                    }
                }
                self.frontier = next;
                self.pos = 0;
            }
            let seq = &self.frontier[self.pos];
            self.pos += 1;
            let word = Word(
                seq.iter()
                    .map(|&a| ((a / 2) as u32, if a % 2 == 0 { 1i64 } else { -1 }))
                    .collect(),
            )
            .reduce();
            return Some(word);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduce_merges_and_cancels() {
        let w = Word(vec![(0, 1), (0, 1), (1, 2), (1, -2), (0, -1)]);
        assert_eq!(w.reduce(), Word(vec![(0, 1)]));
    }

    #[test]
    fn word_display_parse_roundtrip() {
        let w = Word(vec![(0, 2), (1, -1)]);
        let s = w.to_string();
        assert_eq!(s, "x0^2*x1^-1");
        assert_eq!(Word::parse(&s).unwrap(), w);
        assert_eq!(Word::parse("1").unwrap(), Word::identity());
    }

    #[test]
    fn enumeration_starts_with_identity_and_is_reduced() {
        let ws: Vec<Word> = reduced_words(2).take(10).collect();
        assert_eq!(ws[0], Word::identity());
        assert_eq!(ws[1], Word(vec![(0, 1)]));
        assert_eq!(ws[2], Word(vec![(0, -1)]));
        assert_eq!(ws[3], Word(vec![(1, 1)]));
        assert_eq!(ws[4], Word(vec![(1, -1)]));
        // length-2 words follow, none of which cancel
        assert_eq!(ws[5], Word(vec![(0, 2)]));
        for w in &ws {
            assert_eq!(&w.reduce(), w);
        }
    }

    #[test]
    fn enumeration_is_duplicate_free_prefix_of_itself() {
        let a: Vec<Word> = reduced_words(2).take(50).collect();
        let b: Vec<Word> = reduced_words(2).take(80).collect();
        assert_eq!(&b[..50], &a[..]);
        let mut seen = std::collections::BTreeSet::new();
        for w in &a {
            assert!(seen.insert(w.clone()), "duplicate word {w}");
        }
    }
}
