//! Shared fixtures for unit tests.

use std::collections::BTreeMap;

use rand::prelude::*;

use crate::group::XGroup;
use crate::term::{MTerm, RawTerm};
use crate::word::{Generator, InvLetter, InvWord, Sign};

pub fn gn(name: &str) -> Generator {
    Generator::new(name).unwrap()
}

/// Parse a compact word: space-separated letters, trailing `'` for inverses.
/// The empty string is the empty word.
pub fn wd(spec: &str) -> InvWord {
    let mut w = InvWord::empty();
    for tok in spec.split_whitespace() {
        let (name, sign) = match tok.strip_suffix('\'') {
            Some(base) => (base, Sign::Neg),
            None => (tok, Sign::Pos),
        };
        w.push(InvLetter {
            gen: gn(name),
            sign,
        });
    }
    w
}

/// The cyclic group of order n, generated by `a` ↦ 1.
pub fn z(n: usize) -> XGroup {
    let table: Vec<Vec<usize>> = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
    let inverse: Vec<usize> = (0..n).map(|i| (n - i) % n).collect();
    let assignment: BTreeMap<String, usize> = [("a".to_string(), 1 % n)].into();
    XGroup::finite(n, 0, table, inverse, assignment).unwrap()
}

/// The trivial group with a single generator `a` ↦ identity.
pub fn trivial() -> XGroup {
    let assignment: BTreeMap<String, usize> = [("a".to_string(), 0)].into();
    XGroup::finite(1, 0, vec![vec![0]], vec![0], assignment).unwrap()
}

/// The Klein four-group Z2 × Z2 with `a` ↦ (1,0) and `b` ↦ (0,1),
/// elements indexed as two-bit vectors, multiplication by xor.
pub fn klein() -> XGroup {
    let table: Vec<Vec<usize>> = (0..4).map(|i| (0..4).map(|j| i ^ j).collect()).collect();
    let assignment: BTreeMap<String, usize> = [("a".to_string(), 1), ("b".to_string(), 2)].into();
    XGroup::finite(4, 0, table, vec![0, 1, 2, 3], assignment).unwrap()
}

pub fn free_a() -> XGroup {
    XGroup::free(&["a"]).unwrap()
}

pub fn free_ab() -> XGroup {
    XGroup::free(&["a", "b"]).unwrap()
}

/// A uniformly random word of length < max_len over the given names.
pub fn random_word(rng: &mut StdRng, names: &[&str], max_len: usize) -> InvWord {
    let n = rng.random_range(0..max_len);
    InvWord::from_letters(
        (0..n)
            .map(|_| InvLetter {
                gen: gn(names[rng.random_range(0..names.len())]),
                sign: if rng.random() { Sign::Pos } else { Sign::Neg },
            })
            .collect(),
    )
}

/// A random syntax tree of bounded depth over {a, b, c}.
pub fn random_raw_term(rng: &mut StdRng, depth: usize) -> RawTerm {
    let names = ["a", "b", "c"];
    if depth == 0 || rng.random_range(0..10) < 3 {
        return match rng.random_range(0..3) {
            0 => RawTerm::One,
            1 => RawTerm::Letter(InvLetter::pos(gn(names[rng.random_range(0..names.len())]))),
            _ => RawTerm::Letter(InvLetter::neg(gn(names[rng.random_range(0..names.len())]))),
        };
    }
    match rng.random_range(0..10) {
        0..=4 => RawTerm::mul(
            random_raw_term(rng, depth - 1),
            random_raw_term(rng, depth - 1),
        ),
        5..=6 => RawTerm::inv(random_raw_term(rng, depth - 1)),
        _ => RawTerm::max(random_raw_term(rng, depth - 1)),
    }
}

/// A random normal form over {a, b} with up to `size` max-blocks.
pub fn random_mterm(rng: &mut StdRng, size: usize) -> MTerm {
    let names = ["a", "b"];
    let mut t = MTerm::from_word(random_word(rng, &names, size + 1));
    for _ in 0..rng.random_range(0..=size) {
        let arg = random_word(rng, &names, size + 1);
        let tail = MTerm::from_word(random_word(rng, &names, size + 1));
        t = t.mul(&MTerm::from_word(arg).max()).mul(&tail);
    }
    t
}
