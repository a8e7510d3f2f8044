//! X-generated groups and the canonical morphisms between them.
//!
//! An X-generated group is a group G together with a distinguished assignment
//! of the generator alphabet X into G whose image generates G. Two backends
//! are provided: the free group on X (elements are reduced words) and finite
//! groups given by a multiplication table. Between X-generated groups over
//! the same alphabet there is at most one morphism commuting with the
//! generator assignments; [`CanonicalMorphism::build`] constructs it or
//! reports that none exists.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::word::{Generator, InvWord, Sign};

/// An element of an X-generated group.
///
/// Free-backend elements carry their unique reduced word; finite-backend
/// elements carry an index into the multiplication table. Values are only
/// constructed by [`XGroup`] operations, which preserve these invariants.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupElement(Repr);

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum Repr {
    Free(InvWord),
    Finite(usize),
}

impl GroupElement {
    pub(crate) fn free(word: InvWord) -> GroupElement {
        debug_assert!(word.is_reduced());
        GroupElement(Repr::Free(word))
    }

    pub(crate) fn finite(index: usize) -> GroupElement {
        GroupElement(Repr::Finite(index))
    }

    /// The reduced word of a free-backend element.
    pub fn as_free_word(&self) -> Option<&InvWord> {
        match &self.0 {
            Repr::Free(w) => Some(w),
            Repr::Finite(_) => None,
        }
    }

    /// The table index of a finite-backend element.
    pub fn finite_index(&self) -> Option<usize> {
        match &self.0 {
            Repr::Free(_) => None,
            Repr::Finite(i) => Some(*i),
        }
    }
}

impl fmt::Display for GroupElement {
    /// Canonical element string: the reduced word (`1` when empty) for free
    /// backends, `#i` for finite backends.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Free(w) => write!(f, "{w}"),
            Repr::Finite(i) => write!(f, "#{i}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct FiniteTable {
    order: usize,
    identity: usize,
    /// Row-major `order × order` multiplication table.
    table: Vec<usize>,
    inverse: Vec<usize>,
    assignment: BTreeMap<Generator, usize>,
}

impl FiniteTable {
    pub(crate) fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Backend {
    Free,
    Finite(FiniteTable),
}

/// An X-generated group: a generator alphabet plus a free or finite backend.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XGroup {
    generators: Vec<Generator>,
    backend: Backend,
}

/// On-disk finite group description.
#[derive(Deserialize)]
struct FiniteGroupFile {
    order: usize,
    identity: usize,
    table: Vec<Vec<usize>>,
    inverse: Vec<usize>,
    generators: BTreeMap<String, usize>,
}

impl XGroup {
    /// The free group on the given alphabet. Names are sorted and must be
    /// distinct and well-formed.
    pub fn free(names: &[&str]) -> Result<XGroup> {
        let mut generators = Vec::with_capacity(names.len());
        for n in names {
            generators.push(Generator::new(n)?);
        }
        generators.sort();
        if generators.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidGroup("duplicate generator name".into()));
        }
        Ok(XGroup {
            generators,
            backend: Backend::Free,
        })
    }

    /// A finite group from a full multiplication table. Every group axiom is
    /// checked; diagnostics name the first failing instance.
    pub fn finite(
        order: usize,
        identity: usize,
        table: Vec<Vec<usize>>,
        inverse: Vec<usize>,
        assignment: BTreeMap<String, usize>,
    ) -> Result<XGroup> {
        let bad = |msg: String| Err(Error::InvalidGroup(msg));

        if order == 0 {
            return bad("order must be at least 1".into());
        }
        if table.len() != order {
            return bad(format!("table has {} rows, expected {order}", table.len()));
        }
        let mut flat = Vec::with_capacity(order * order);
        for (i, row) in table.iter().enumerate() {
            if row.len() != order {
                return bad(format!(
                    "table row {i} has {} entries, expected {order}",
                    row.len()
                ));
            }
            for (j, &v) in row.iter().enumerate() {
                if v >= order {
                    return bad(format!("table entry ({i}, {j}) is {v}, out of range"));
                }
                flat.push(v);
            }
        }
        if identity >= order {
            return bad(format!("identity index {identity} is out of range"));
        }
        let mul = |a: usize, b: usize| flat[a * order + b];
        for a in 0..order {
            if mul(identity, a) != a || mul(a, identity) != a {
                return bad(format!("identity law fails at #{a}"));
            }
        }
        for a in 0..order {
            for b in 0..order {
                for c in 0..order {
                    let lhs = mul(mul(a, b), c);
                    let rhs = mul(a, mul(b, c));
                    if lhs != rhs {
                        return bad(format!(
                            "associativity fails at the triple (#{a}, #{b}, #{c}): \
                             (#{a}·#{b})·#{c} = #{lhs} but #{a}·(#{b}·#{c}) = #{rhs}"
                        ));
                    }
                }
            }
        }
        if inverse.len() != order {
            return bad(format!(
                "inverse table has {} entries, expected {order}",
                inverse.len()
            ));
        }
        for (a, &b) in inverse.iter().enumerate() {
            if b >= order {
                return bad(format!("inverse of #{a} is {b}, out of range"));
            }
            if mul(a, b) != identity || mul(b, a) != identity {
                return bad(format!("inverse law fails at #{a}"));
            }
        }

        let mut gens = BTreeMap::new();
        for (name, &img) in &assignment {
            let g = Generator::new(name)?;
            if img >= order {
                return bad(format!("generator `{name}` maps to #{img}, out of range"));
            }
            gens.insert(g, img);
        }

        // Generation check. In a finite group the submonoid generated by a
        // set is already a subgroup, so right multiplication by generator
        // images from the identity must reach every element.
        let mut seen = vec![false; order];
        seen[identity] = true;
        let mut queue = VecDeque::from([identity]);
        let mut reached = 1usize;
        while let Some(g) = queue.pop_front() {
            for &img in gens.values() {
                let h = mul(g, img);
                if !seen[h] {
                    seen[h] = true;
                    reached += 1;
                    queue.push_back(h);
                }
            }
        }
        if reached < order {
            return bad(format!(
                "generators do not generate the group: {reached} of {order} elements reachable"
            ));
        }

        let generators = gens.keys().cloned().collect();
        Ok(XGroup {
            generators,
            backend: Backend::Finite(FiniteTable {
                order,
                identity,
                table: flat,
                inverse,
                assignment: gens,
            }),
        })
    }

    /// Load a finite group from its JSON description.
    pub fn from_json(text: &str) -> Result<XGroup> {
        let file: FiniteGroupFile = serde_json::from_str(text)?;
        XGroup::finite(
            file.order,
            file.identity,
            file.table,
            file.inverse,
            file.generators,
        )
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn generator(&self, name: &str) -> Option<&Generator> {
        self.generators.iter().find(|g| g.name() == name)
    }

    pub fn is_finite(&self) -> bool {
        matches!(self.backend, Backend::Finite(_))
    }

    pub fn order(&self) -> Option<usize> {
        match &self.backend {
            Backend::Free => None,
            Backend::Finite(t) => Some(t.order),
        }
    }


    pub fn identity(&self) -> GroupElement {
        match &self.backend {
            Backend::Free => GroupElement::free(InvWord::empty()),
            Backend::Finite(t) => GroupElement::finite(t.identity),
        }
    }

    /// The distinguished image of a generator.
    pub fn generator_value(&self, g: &Generator) -> Result<GroupElement> {
        if !self.generators.contains(g) {
            return Err(Error::UnknownGenerator(g.name().to_string()));
        }
        Ok(match &self.backend {
            Backend::Free => {
                GroupElement::free(InvWord::letter(crate::word::InvLetter::pos(g.clone())))
            }
            Backend::Finite(t) => GroupElement::finite(t.assignment[g]),
        })
    }

    /// Whether an element belongs to this group's backend.
    pub fn contains(&self, e: &GroupElement) -> bool {
        match (&self.backend, &e.0) {
            (Backend::Free, Repr::Free(w)) => {
                w.is_reduced() && w.letters().iter().all(|l| self.generators.contains(&l.gen))
            }
            (Backend::Finite(t), Repr::Finite(i)) => *i < t.order,
            _ => false,
        }
    }

    pub(crate) fn check(&self, e: &GroupElement) -> Result<()> {
        if self.contains(e) {
            Ok(())
        } else {
            Err(Error::BackendMismatch {
                element: e.to_string(),
            })
        }
    }

    /// Evaluate a word of I_X in the group: the image of the word under the
    /// unique morphism extending the generator assignment.
    pub fn eval(&self, w: &InvWord) -> Result<GroupElement> {
        match &self.backend {
            Backend::Free => {
                for l in w.letters() {
                    if !self.generators.contains(&l.gen) {
                        return Err(Error::UnknownGenerator(l.gen.name().to_string()));
                    }
                }
                Ok(GroupElement::free(w.reduce()))
            }
            Backend::Finite(t) => {
                let mut acc = t.identity;
                for l in w.letters() {
                    let img = *t
                        .assignment
                        .get(&l.gen)
                        .ok_or_else(|| Error::UnknownGenerator(l.gen.name().to_string()))?;
                    let img = match l.sign {
                        Sign::Pos => img,
                        Sign::Neg => t.inverse[img],
                    };
                    acc = t.mul(acc, img);
                }
                Ok(GroupElement::finite(acc))
            }
        }
    }

    pub fn mul(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(match (&self.backend, &a.0, &b.0) {
            (Backend::Free, Repr::Free(u), Repr::Free(v)) => {
                GroupElement::free(u.concat(v).reduce())
            }
            (Backend::Finite(t), Repr::Finite(i), Repr::Finite(j)) => {
                GroupElement::finite(t.mul(*i, *j))
            }
            _ => unreachable!("check() filters mismatched elements"),
        })
    }

    pub fn inv(&self, a: &GroupElement) -> Result<GroupElement> {
        self.check(a)?;
        Ok(match (&self.backend, &a.0) {
            // The inverse of a reduced word is reduced.
            (Backend::Free, Repr::Free(u)) => GroupElement::free(u.inverse()),
            (Backend::Finite(t), Repr::Finite(i)) => GroupElement::finite(t.inverse[*i]),
            _ => unreachable!("check() filters mismatched elements"),
        })
    }

    pub fn is_identity(&self, a: &GroupElement) -> bool {
        *a == self.identity()
    }

    /// All elements, in index order. Finite backends only.
    pub fn elements(&self) -> Result<Vec<GroupElement>> {
        match &self.backend {
            Backend::Free => Err(Error::NotFinite("element enumeration")),
            Backend::Finite(t) => Ok((0..t.order).map(GroupElement::finite).collect()),
        }
    }
}

/// The unique morphism between two X-generated groups over the same alphabet
/// that commutes with the generator assignments, when it exists.
#[derive(Debug, Clone)]
pub struct CanonicalMorphism {
    source: XGroup,
    target: XGroup,
    map: MorphMap,
}

#[derive(Debug, Clone)]
enum MorphMap {
    /// Source is free: apply by evaluating the element's word in the target.
    EvalInTarget,
    /// Source is finite: images indexed by source element index.
    Table(Vec<GroupElement>),
}

impl CanonicalMorphism {
    /// Construct the canonical morphism, or report why none exists.
    ///
    /// For a free source the morphism always exists (freeness). For a finite
    /// source, images are assigned by breadth-first closure from the identity
    /// along generator edges; each edge (g, x) is inspected exactly once, so
    /// closure without conflict verifies ψ(g·x) = ψ(g)·x for every g and x,
    /// which forces multiplicativity on all of G.
    pub fn build(source: &XGroup, target: &XGroup) -> Result<CanonicalMorphism> {
        let src_names: BTreeSet<&str> = source.generators.iter().map(|g| g.name()).collect();
        let tgt_names: BTreeSet<&str> = target.generators.iter().map(|g| g.name()).collect();
        if src_names != tgt_names {
            return Err(Error::NoSuchMorphism(format!(
                "generator alphabets differ: source has {{{}}}, target has {{{}}}",
                source
                    .generators
                    .iter()
                    .map(|g| g.name())
                    .collect::<Vec<_>>()
                    .join(", "),
                target
                    .generators
                    .iter()
                    .map(|g| g.name())
                    .collect::<Vec<_>>()
                    .join(", "),
            )));
        }

        let map = match &source.backend {
            Backend::Free => MorphMap::EvalInTarget,
            Backend::Finite(t) => {
                let mut images: Vec<Option<GroupElement>> = vec![None; t.order];
                images[t.identity] = Some(target.identity());
                let mut queue = VecDeque::from([t.identity]);
                while let Some(g) = queue.pop_front() {
                    let img_g = images[g].clone().expect("queued elements have images");
                    for x in &source.generators {
                        let h = t.mul(g, t.assignment[x]);
                        let img_h = target.mul(&img_g, &target.generator_value(x)?)?;
                        match &images[h] {
                            None => {
                                images[h] = Some(img_h);
                                queue.push_back(h);
                            }
                            Some(prev) if *prev != img_h => {
                                return Err(Error::NoSuchMorphism(format!(
                                    "inconsistent images: #{h} would map to both {prev} and {img_h}"
                                )));
                            }
                            Some(_) => {}
                        }
                    }
                }
                let table = images
                    .into_iter()
                    .map(|img| img.expect("X generates the source group"))
                    .collect();
                MorphMap::Table(table)
            }
        };

        Ok(CanonicalMorphism {
            source: source.clone(),
            target: target.clone(),
            map,
        })
    }

    pub fn source(&self) -> &XGroup {
        &self.source
    }

    pub fn target(&self) -> &XGroup {
        &self.target
    }

    pub fn apply(&self, g: &GroupElement) -> Result<GroupElement> {
        self.source.check(g)?;
        match &self.map {
            MorphMap::EvalInTarget => {
                let w = g.as_free_word().expect("free source");
                self.target.eval(w)
            }
            MorphMap::Table(t) => Ok(t[g.finite_index().expect("finite source")].clone()),
        }
    }
}
