//! Terms over the enriched signature (2,1,1,0) and their normal form.
//!
//! The signature has a binary product, the group-style inverse, the unary
//! operation m, and the constant 1. Modulo the laws of monoids with
//! involution together with
//!
//! ```text
//! (m(x))⁻¹ = m(x⁻¹)        m(x·m(y)·z) = m(x·y·z)
//! ```
//!
//! every term is equal to exactly one word
//!
//! ```text
//! u₀ m(v₁) u₁ ⋯ m(vₙ) uₙ        (n ≥ 0, uᵢ, vᵢ ∈ I_X)
//! ```
//!
//! where the uᵢ and vᵢ are plain (possibly unreduced) words of the free
//! monoid with involution. [`MTerm`] stores that normal form; [`normalize`]
//! computes it by a single structural pass. No free reduction happens here:
//! m(a a') and m(1) are distinct normal forms.
//!
//! Surface syntax, parsed by [`parse`]:
//!
//! ```text
//! term   := factor+                 (juxtaposition is the product)
//! factor := atom | atom "'"        (postfix ' is the inverse)
//! atom   := letter | "1" | "m" "(" term ")" | "(" term ")"
//! ```
//!
//! `m` counts as the max operator only when immediately followed by `(`;
//! elsewhere it is an ordinary generator letter.

use std::fmt;

use crate::error::{Error, Result};
use crate::word::{Generator, InvLetter, InvWord};

/// A raw syntax tree over the enriched signature.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RawTerm {
    One,
    Letter(InvLetter),
    Mul(Box<RawTerm>, Box<RawTerm>),
    Inv(Box<RawTerm>),
    Max(Box<RawTerm>),
}

impl RawTerm {
    pub fn mul(a: RawTerm, b: RawTerm) -> RawTerm {
        RawTerm::Mul(Box::new(a), Box::new(b))
    }

    pub fn inv(a: RawTerm) -> RawTerm {
        RawTerm::Inv(Box::new(a))
    }

    pub fn max(a: RawTerm) -> RawTerm {
        RawTerm::Max(Box::new(a))
    }

    pub fn letter(l: InvLetter) -> RawTerm {
        RawTerm::Letter(l)
    }
}

/// One max-block of a normal form: the factor m(maxArg) followed by the
/// plain word tail.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MBlock {
    pub max_arg: InvWord,
    pub tail: InvWord,
}

/// The normal form u₀ m(v₁) u₁ ⋯ m(vₙ) uₙ: `head` is u₀ and each block
/// carries one (vᵢ, uᵢ). Two terms are equal in the free algebra iff their
/// `MTerm`s are structurally equal.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct MTerm {
    head: InvWord,
    blocks: Vec<MBlock>,
}

impl MTerm {
    pub fn one() -> MTerm {
        MTerm::default()
    }

    pub fn from_word(head: InvWord) -> MTerm {
        MTerm {
            head,
            blocks: Vec::new(),
        }
    }

    pub fn head(&self) -> &InvWord {
        &self.head
    }

    pub fn blocks(&self) -> &[MBlock] {
        &self.blocks
    }

    /// True for the empty product.
    pub fn is_one(&self) -> bool {
        self.head.is_empty() && self.blocks.is_empty()
    }

    /// True when the term is a plain word of I_X (no max-blocks).
    pub fn is_plain(&self) -> bool {
        self.blocks.is_empty()
    }

    /// The product in the free algebra: the last plain segment of `self`
    /// absorbs the head of `rhs`, then the block lists concatenate. Max
    /// blocks are never merged.
    pub fn mul(&self, rhs: &MTerm) -> MTerm {
        let mut out = self.clone();
        match out.blocks.last_mut() {
            None => out.head = out.head.concat(&rhs.head),
            Some(last) => last.tail = last.tail.concat(&rhs.head),
        }
        out.blocks.extend(rhs.blocks.iter().cloned());
        out
    }

    /// The involution: segments reverse and each word inverts, sending
    /// u₀ m(v₁) u₁ ⋯ m(vₙ) uₙ to uₙ⁻¹ m(vₙ⁻¹) uₙ₋₁⁻¹ ⋯ m(v₁⁻¹) u₀⁻¹.
    pub fn inverse(&self) -> MTerm {
        if self.blocks.is_empty() {
            return MTerm::from_word(self.head.inverse());
        }
        let mut tails: Vec<&InvWord> = Vec::with_capacity(self.blocks.len() + 1);
        tails.push(&self.head);
        for b in &self.blocks {
            tails.push(&b.tail);
        }
        let head = tails.pop().expect("nonempty").inverse();
        let blocks = self
            .blocks
            .iter()
            .rev()
            .zip(tails.iter().rev())
            .map(|(b, tail)| MBlock {
                max_arg: b.max_arg.inverse(),
                tail: tail.inverse(),
            })
            .collect();
        MTerm { head, blocks }
    }

    /// The operation m: a single block whose argument is [`MTerm::strip`].
    /// Inner max-blocks flatten away, which is exactly the law
    /// m(x·m(y)·z) = m(x·y·z).
    pub fn max(&self) -> MTerm {
        MTerm {
            head: InvWord::empty(),
            blocks: vec![MBlock {
                max_arg: self.strip(),
                tail: InvWord::empty(),
            }],
        }
    }

    /// The word u₀ v₁ u₁ ⋯ vₙ uₙ obtained by erasing the m-applications.
    pub fn strip(&self) -> InvWord {
        let mut w = self.head.clone();
        for b in &self.blocks {
            w = w.concat(&b.max_arg).concat(&b.tail);
        }
        w
    }

    /// Rebuild a syntax tree that normalizes back to this normal form.
    pub fn to_raw_term(&self) -> RawTerm {
        let mut factors: Vec<RawTerm> = Vec::new();
        let push_word = |factors: &mut Vec<RawTerm>, w: &InvWord| {
            for l in w.letters() {
                factors.push(RawTerm::Letter(l.clone()));
            }
        };
        push_word(&mut factors, &self.head);
        for b in &self.blocks {
            let mut inner: Vec<RawTerm> = Vec::new();
            push_word(&mut inner, &b.max_arg);
            let arg = inner
                .into_iter()
                .reduce(RawTerm::mul)
                .unwrap_or(RawTerm::One);
            factors.push(RawTerm::max(arg));
            push_word(&mut factors, &b.tail);
        }
        factors.into_iter().reduce(RawTerm::mul).unwrap_or(RawTerm::One)
    }

    /// All generator names appearing in the term.
    pub fn generators(&self) -> std::collections::BTreeSet<Generator> {
        let mut out = std::collections::BTreeSet::new();
        let mut add = |w: &InvWord| {
            for l in w.letters() {
                out.insert(l.gen.clone());
            }
        };
        add(&self.head);
        for b in &self.blocks {
            add(&b.max_arg);
            add(&b.tail);
        }
        out
    }
}

impl fmt::Display for MTerm {
    /// Renders in the surface syntax; parsing the output and normalizing
    /// recovers the term.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        let mut sep = "";
        let word = |f: &mut fmt::Formatter<'_>, sep: &mut &str, w: &InvWord| -> fmt::Result {
            for l in w.letters() {
                write!(f, "{sep}{l}")?;
                *sep = " ";
            }
            Ok(())
        };
        word(f, &mut sep, &self.head)?;
        for b in &self.blocks {
            write!(f, "{sep}m(")?;
            sep = "";
            if b.max_arg.is_empty() {
                f.write_str("1")?;
            } else {
                word(f, &mut sep, &b.max_arg)?;
            }
            f.write_str(")")?;
            sep = " ";
            word(f, &mut sep, &b.tail)?;
        }
        Ok(())
    }
}

/// Compute the normal form by structural recursion. Each constructor maps to
/// the corresponding [`MTerm`] operation, so the pass is single and linear in
/// the tree.
pub fn normalize(t: &RawTerm) -> MTerm {
    match t {
        RawTerm::One => MTerm::one(),
        RawTerm::Letter(l) => MTerm::from_word(InvWord::letter(l.clone())),
        RawTerm::Mul(a, b) => normalize(a).mul(&normalize(b)),
        RawTerm::Inv(a) => normalize(a).inverse(),
        RawTerm::Max(a) => normalize(a).max(),
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    One,
    Prime,
    LParen,
    RParen,
    /// The two characters `m(` with no space between them.
    MaxOpen,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::One => f.write_str("`1`"),
            Tok::Prime => f.write_str("`'`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::MaxOpen => f.write_str("`m(`"),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            'a'..='z' => {
                let start = i;
                i += 1;
                while i < bytes.len()
                    && matches!(bytes[i] as char, 'a'..='z' | '0'..='9' | '_')
                {
                    i += 1;
                }
                let name = &text[start..i];
                if name == "m" && bytes.get(i) == Some(&b'(') {
                    i += 1;
                    toks.push((Tok::MaxOpen, start));
                } else {
                    toks.push((Tok::Ident(name.to_string()), start));
                }
            }
            '1' => {
                toks.push((Tok::One, i));
                i += 1;
            }
            '\'' => {
                toks.push((Tok::Prime, i));
                i += 1;
            }
            '(' => {
                toks.push((Tok::LParen, i));
                i += 1;
            }
            ')' => {
                toks.push((Tok::RParen, i));
                i += 1;
            }
            _ => {
                return Err(Error::Syntax {
                    pos: i,
                    expected: "a generator, `1`, `m(`, `(`, `)`, or `'`".into(),
                    found: format!("`{c}`"),
                })
            }
        }
    }
    Ok(toks)
}

struct Parser<'a> {
    toks: &'a [(Tok, usize)],
    pos: usize,
    end: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn here(&self) -> usize {
        self.toks
            .get(self.pos)
            .map_or(self.end, |&(_, byte)| byte)
    }

    fn found(&self) -> String {
        self.peek()
            .map_or_else(|| "end of input".to_string(), |t| t.to_string())
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        self.pos += 1;
        t
    }

    fn error(&self, expected: &str) -> Error {
        Error::Syntax {
            pos: self.here(),
            expected: expected.into(),
            found: self.found(),
        }
    }

    fn at_atom(&self) -> bool {
        matches!(
            self.peek(),
            Some(Tok::Ident(_) | Tok::One | Tok::MaxOpen | Tok::LParen)
        )
    }

    fn term(&mut self) -> Result<RawTerm> {
        if !self.at_atom() {
            return Err(self.error("a factor (generator, `1`, `m(`, or `(`)"));
        }
        let mut acc = self.factor()?;
        while self.at_atom() {
            let f = self.factor()?;
            acc = RawTerm::mul(acc, f);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<RawTerm> {
        let atom = self.atom()?;
        if self.peek() == Some(&Tok::Prime) {
            self.bump();
            Ok(RawTerm::inv(atom))
        } else {
            Ok(atom)
        }
    }

    fn atom(&mut self) -> Result<RawTerm> {
        match self.bump() {
            Tok::Ident(name) => Ok(RawTerm::Letter(InvLetter::pos(Generator::new(&name)?))),
            Tok::One => Ok(RawTerm::One),
            Tok::MaxOpen => {
                let inner = self.term()?;
                if self.peek() == Some(&Tok::RParen) {
                    self.bump();
                    Ok(RawTerm::max(inner))
                } else {
                    Err(self.error("`)` or a factor"))
                }
            }
            Tok::LParen => {
                let inner = self.term()?;
                if self.peek() == Some(&Tok::RParen) {
                    self.bump();
                    Ok(inner)
                } else {
                    Err(self.error("`)` or a factor"))
                }
            }
            Tok::Prime | Tok::RParen => unreachable!("guarded by at_atom"),
        }
    }
}

/// Parse the surface syntax into a raw term.
pub fn parse(text: &str) -> Result<RawTerm> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks: &toks,
        pos: 0,
        end: text.len(),
    };
    let t = p.term()?;
    if p.pos < toks.len() {
        return Err(p.error("a factor or end of input"));
    }
    Ok(t)
}

/// Parse and normalize in one step.
pub fn parse_normal(text: &str) -> Result<MTerm> {
    Ok(normalize(&parse(text)?))
}
