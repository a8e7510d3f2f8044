//! The free monoid with involution I_X over a generator alphabet X.
//!
//! Elements are words over X ∪ X⁻¹ with no relations; the involution reverses
//! a word and flips signs. Free reduction (cancelling xx⁻¹ and x⁻¹x) is a
//! separate, explicit step: words inside max-blocks of terms stay unreduced.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// A generator name: `[a-z][a-z0-9_]*`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Generator(Arc<str>);

impl Generator {
    pub fn new(name: &str) -> Result<Generator> {
        let mut chars = name.chars();
        let head_ok = chars.next().is_some_and(|c| c.is_ascii_lowercase());
        let tail_ok = chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_');
        if head_ok && tail_ok {
            Ok(Generator(Arc::from(name)))
        } else {
            Err(Error::InvalidGeneratorName(name.to_string()))
        }
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Pos,
    Neg,
}

/// A letter of X ∪ X⁻¹.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct InvLetter {
    pub gen: Generator,
    pub sign: Sign,
}

impl InvLetter {
    pub fn pos(gen: Generator) -> InvLetter {
        InvLetter {
            gen,
            sign: Sign::Pos,
        }
    }

    pub fn neg(gen: Generator) -> InvLetter {
        InvLetter {
            gen,
            sign: Sign::Neg,
        }
    }

    pub fn inverse(&self) -> InvLetter {
        InvLetter {
            gen: self.gen.clone(),
            sign: match self.sign {
                Sign::Pos => Sign::Neg,
                Sign::Neg => Sign::Pos,
            },
        }
    }

    /// True when the two letters cancel: same generator, opposite signs.
    pub fn cancels(&self, other: &InvLetter) -> bool {
        self.gen == other.gen && self.sign != other.sign
    }
}

impl fmt::Display for InvLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            Sign::Pos => write!(f, "{}", self.gen),
            Sign::Neg => write!(f, "{}'", self.gen),
        }
    }
}

/// A word over X ∪ X⁻¹, possibly unreduced.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct InvWord(Vec<InvLetter>);

impl InvWord {
    pub fn empty() -> InvWord {
        InvWord(Vec::new())
    }

    pub fn letter(l: InvLetter) -> InvWord {
        InvWord(vec![l])
    }

    pub fn from_letters(letters: Vec<InvLetter>) -> InvWord {
        InvWord(letters)
    }

    pub fn letters(&self) -> &[InvLetter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, l: InvLetter) {
        self.0.push(l);
    }

    /// Concatenation in I_X (no reduction).
    pub fn concat(&self, other: &InvWord) -> InvWord {
        let mut v = self.0.clone();
        v.extend(other.0.iter().cloned());
        InvWord(v)
    }

    /// The involution: reverse the word and flip every sign.
    pub fn inverse(&self) -> InvWord {
        InvWord(self.0.iter().rev().map(InvLetter::inverse).collect())
    }

    /// Free reduction: repeatedly cancel adjacent xx⁻¹ / x⁻¹x pairs.
    /// Single stack pass; the result is the unique reduced form.
    pub fn reduce(&self) -> InvWord {
        let mut stack: Vec<InvLetter> = Vec::with_capacity(self.0.len());
        for l in &self.0 {
            if stack.last().is_some_and(|top| top.cancels(l)) {
                stack.pop();
            } else {
                stack.push(l.clone());
            }
        }
        InvWord(stack)
    }

    pub fn is_reduced(&self) -> bool {
        self.0.windows(2).all(|w| !w[0].cancels(&w[1]))
    }
}

impl fmt::Display for InvWord {
    /// Space-separated letters; the empty word prints as `1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}
