//! Journeys: sequences of paths on a Cayley graph, separated by jumps.
//!
//! A journey interprets a term of the enriched signature as a walk that
//! traverses edges for plain letters and jumps (without traversing anything)
//! for each max-block. The journey of a term w = u₀ m(v₁) u₁ ⋯ m(vₙ) uₙ
//! started at g walks u₀, jumps by [v₁], walks u₁, and so on. Its span,
//! together with the endpoint, evaluates the term in the expansion F(G).

use crate::cayley::{Path, Subgraph};
use crate::error::{Error, Result};
use crate::group::{GroupElement, XGroup};
use crate::term::MTerm;

/// A nonempty sequence of paths. Consecutive paths need not be adjacent:
/// the gap between ω(pᵢ) and α(pᵢ₊₁) is a jump.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Journey {
    paths: Vec<Path>,
}

impl Journey {
    pub fn single(path: Path) -> Journey {
        Journey { paths: vec![path] }
    }

    pub fn from_paths(paths: Vec<Path>) -> Result<Journey> {
        if paths.is_empty() {
            return Err(Error::OutsideDomain {
                domain: "journeys",
                reason: "a journey needs at least one path".into(),
            });
        }
        Ok(Journey { paths })
    }

    pub fn paths(&self) -> &[Path] {
        &self.paths
    }

    /// The start α: where the first path begins.
    pub fn start(&self) -> &GroupElement {
        &self.paths[0].start
    }

    /// The end ω: where the last path stops.
    pub fn end(&self, group: &XGroup) -> Result<GroupElement> {
        self.paths.last().expect("nonempty").end(group)
    }

    /// Sequential composition: defined when this journey ends where `next`
    /// starts. The boundary paths fuse into one path; jump counts add.
    pub fn compose(&self, group: &XGroup, next: &Journey) -> Result<Journey> {
        let end = self.end(group)?;
        if end != *next.start() {
            return Err(Error::NotComposable {
                end: end.to_string(),
                start: next.start().to_string(),
            });
        }
        let mut paths = self.paths.clone();
        let last = paths.last_mut().expect("nonempty");
        last.labels = last.labels.concat(&next.paths[0].labels);
        paths.extend(next.paths[1..].iter().cloned());
        Ok(Journey { paths })
    }

    /// The union of the spans of all paths. Jumps contribute nothing.
    pub fn span(&self, group: &XGroup) -> Result<Subgraph> {
        let mut s = Subgraph::empty();
        for p in &self.paths {
            s = s.union(&p.span(group)?);
        }
        Ok(s)
    }

    /// The left translate h·j: every path start moves by h.
    pub fn translate(&self, group: &XGroup, h: &GroupElement) -> Result<Journey> {
        let paths = self
            .paths
            .iter()
            .map(|p| {
                Ok(Path {
                    start: group.mul(h, &p.start)?,
                    labels: p.labels.clone(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Journey { paths })
    }
}

/// The journey j_g(w): walk each plain segment, jump over each max-block.
///
/// Plain words give a single path; m(v) started at h gives the path pair
/// (ε_h, ε_{h·[v]}); products compose journeys sequentially. The loop below
/// is that recursion unrolled along the normal form.
pub fn journey_of_term(group: &XGroup, start: &GroupElement, w: &MTerm) -> Result<Journey> {
    group.check(start)?;
    let mut cur = start.clone();
    let mut paths = vec![Path::new(cur.clone(), w.head().clone())];
    cur = group.mul(&cur, &group.eval(w.head())?)?;
    for b in w.blocks() {
        cur = group.mul(&cur, &group.eval(&b.max_arg)?)?;
        paths.push(Path::new(cur.clone(), b.tail.clone()));
        cur = group.mul(&cur, &group.eval(&b.tail)?)?;
    }
    Ok(Journey { paths })
}
