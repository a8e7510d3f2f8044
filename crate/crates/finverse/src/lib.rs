//! Cayley-graph models of F-inverse monoid expansions over X-generated groups.
//!
//! An F-inverse monoid is an inverse monoid in which every class of the least
//! group congruence σ has a maximum element; it is treated here as an algebra
//! in the enriched signature (2,1,1,0) with a unary operation m sending each
//! element to its class maximum. For an X-generated group G the universal
//! X-generated F-inverse monoid F(G) is realized on pairs (Γ, g) where Γ is a
//! finite subgraph of the Cayley graph of G containing the vertices 1 and g.
//!
//! Module map:
//!
//! * [`word`]: the free monoid with involution over a generator alphabet.
//! * [`group`]: X-generated groups (free and finite-table backends) and the
//!   canonical morphisms between them.
//! * [`cayley`]: subgraphs of Cayley graphs, paths, spans, translations.
//! * [`term`]: terms in the enriched signature, parsing, and the normal form
//!   u₀ m(v₁) u₁ ⋯ m(vₙ) uₙ.
//! * [`journey`]: journey semantics, sequences of paths with jumps that
//!   interpret terms on the Cayley graph.
//! * [`expansion`]: the expansions F(G), M(G), BR(G) and the perfect
//!   expansion P(G), with arithmetic, Green's relations, enumeration and
//!   the functor map.
//! * [`fim`]: a verification toolkit for finite inverse monoids covering
//!   the inverse check, σ-classes, E-unitarity, F-inverse certification,
//!   identity checking, premorphisms, and universal morphisms from F(G).

pub mod cayley;
pub mod error;
pub mod expansion;
pub mod fim;
pub mod group;
pub mod journey;
pub mod term;
pub mod word;

#[cfg(test)]
mod testutil;

pub use error::{Error, Result};
