//! The expansions F(G), M(G), BR(G) and the perfect expansion P(G).
//!
//! F(G) consists of the pairs (Γ, g) where Γ is a finite subgraph of Cay(G)
//! containing 1 and g as vertices. With
//!
//! ```text
//! (Γ, g)·(Γ', g') = (Γ ∪ gΓ', gg')    (Γ, g)⁻¹ = (g⁻¹Γ, g⁻¹)    m(Γ, g) = (Δ_g, g)
//! ```
//!
//! it is the universal X-generated F-inverse monoid over G. Inside it sit
//! M(G) (connected graphs) and BR(G) (edgeless graphs). P(G) is the
//! semidirect product of the semilattice of finite edge-spanned subgraphs
//! with G; it is the universal perfect quotient of F(G), reached by
//! [`FElement::to_perfect`], which forgets isolated vertices.
//!
//! Terms evaluate into F(G) through their journeys: [w] = (⟨j₁(w)⟩, [w]_G).

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::hash::Hash;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::cayley::{PosEdge, Subgraph};
use crate::error::{Error, Result};
use crate::fim::FiniteMonoid;
use crate::group::{CanonicalMorphism, GroupElement, XGroup};
use crate::journey::journey_of_term;
use crate::term::MTerm;
use crate::word::{Generator, InvWord};

/// An element (Γ, g) of F(G): the graph contains 1 and g as vertices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FElement {
    graph: Subgraph,
    point: GroupElement,
}

impl FElement {
    /// Build from parts, checking the invariant.
    pub fn new(group: &XGroup, graph: Subgraph, point: GroupElement) -> Result<FElement> {
        group.check(&point)?;
        for v in graph.vertices() {
            group.check(v)?;
        }
        for e in graph.pos_edges() {
            let dst = e.dst(group)?;
            if !graph.contains_vertex(&e.src) || !graph.contains_vertex(&dst) {
                return Err(Error::NotClosed {
                    src: e.src.to_string(),
                    label: e.label.to_string(),
                });
            }
        }
        if !graph.contains_vertex(&group.identity()) {
            return Err(Error::MissingVertex(group.identity().to_string()));
        }
        if !graph.contains_vertex(&point) {
            return Err(Error::MissingVertex(point.to_string()));
        }
        Ok(FElement { graph, point })
    }

    fn raw(graph: Subgraph, point: GroupElement) -> FElement {
        FElement { graph, point }
    }

    /// The identity (Γ₁, 1) = ({1}, 1).
    pub fn identity(group: &XGroup) -> FElement {
        let one = group.identity();
        FElement {
            graph: Subgraph::vertex(one.clone()),
            point: one,
        }
    }

    pub fn graph(&self) -> &Subgraph {
        &self.graph
    }

    pub fn point(&self) -> &GroupElement {
        &self.point
    }

    /// (Γ, g)·(Γ', g') = (Γ ∪ gΓ', gg').
    pub fn mul(&self, group: &XGroup, rhs: &FElement) -> Result<FElement> {
        let graph = self.graph.union(&rhs.graph.translate(group, &self.point)?);
        let point = group.mul(&self.point, &rhs.point)?;
        Ok(FElement { graph, point })
    }

    /// (Γ, g)⁻¹ = (g⁻¹Γ, g⁻¹).
    pub fn inverse(&self, group: &XGroup) -> Result<FElement> {
        let ginv = group.inv(&self.point)?;
        Ok(FElement {
            graph: self.graph.translate(group, &ginv)?,
            point: ginv,
        })
    }

    /// m(Γ, g) = (Δ_g, g): the maximum of the σ-class {(Ξ, g)}.
    pub fn max(&self, group: &XGroup) -> Result<FElement> {
        Ok(FElement {
            graph: Subgraph::delta(group, &self.point)?,
            point: self.point.clone(),
        })
    }

    /// Idempotents are exactly the elements with point 1.
    pub fn is_idempotent(&self, group: &XGroup) -> bool {
        group.is_identity(&self.point)
    }

    /// Natural partial order: (Γ, g) ≤ (Ξ, h) iff g = h and Ξ ⊆ Γ.
    /// Bigger graphs sit lower; every element lies below its max.
    pub fn leq(&self, group: &XGroup, rhs: &FElement) -> Result<bool> {
        group.check(&self.point)?;
        group.check(&rhs.point)?;
        Ok(self.point == rhs.point && rhs.graph.is_subgraph_of(&self.graph))
    }

    /// Membership in the Margolis–Meakin expansion: Γ connected.
    pub fn in_m(&self, group: &XGroup) -> Result<bool> {
        self.graph.is_connected(group)
    }

    /// Membership in the Birget–Rhodes expansion: Γ edgeless.
    pub fn in_br(&self) -> bool {
        self.graph.is_edgeless()
    }

    /// The perfect quotient map (Γ, g) ↦ (Ed(Γ), g): isolated vertices are
    /// forgotten. A morphism of F-inverse monoids onto P(G)'s image.
    pub fn to_perfect(&self, group: &XGroup) -> Result<PElement> {
        Ok(PElement {
            graph: self.graph.edges_only(group)?,
            point: self.point.clone(),
        })
    }

    /// Serialize as `{"point", "vertices", "edges"}` in canonical order.
    pub fn to_json(&self) -> Value {
        element_json(&self.graph, &self.point)
    }

    /// A DOT digraph of Γ; the identity vertex is double-circled and the
    /// point is filled. Output is sorted, hence byte-deterministic.
    pub fn dot(&self, group: &XGroup) -> Result<String> {
        element_dot(group, &self.graph, &self.point)
    }
}

/// An element (Γ, g) of P(G) = Sub_Ed(Cay(G)) ⋊ G: the graph has no
/// isolated vertices, and need not contain 1 or g. The empty graph is
/// allowed; (∅, 1) is the identity.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PElement {
    graph: Subgraph,
    point: GroupElement,
}

impl PElement {
    pub fn new(group: &XGroup, graph: Subgraph, point: GroupElement) -> Result<PElement> {
        group.check(&point)?;
        for v in graph.vertices() {
            group.check(v)?;
        }
        let spanned = graph.edges_only(group)?;
        if spanned != graph {
            let isolated = graph
                .vertices()
                .iter()
                .find(|v| !spanned.contains_vertex(v))
                .map(|v| v.to_string())
                .unwrap_or_else(|| "?".into());
            return Err(Error::IsolatedVertex(isolated));
        }
        Ok(PElement { graph, point })
    }

    /// The identity (∅, 1).
    pub fn identity(group: &XGroup) -> PElement {
        PElement {
            graph: Subgraph::empty(),
            point: group.identity(),
        }
    }

    pub fn graph(&self) -> &Subgraph {
        &self.graph
    }

    pub fn point(&self) -> &GroupElement {
        &self.point
    }

    /// (Γ, g)·(Γ', g') = (Γ ∪ gΓ', gg').
    pub fn mul(&self, group: &XGroup, rhs: &PElement) -> Result<PElement> {
        let graph = self.graph.union(&rhs.graph.translate(group, &self.point)?);
        let point = group.mul(&self.point, &rhs.point)?;
        Ok(PElement { graph, point })
    }

    /// (Γ, g)⁻¹ = (g⁻¹Γ, g⁻¹).
    pub fn inverse(&self, group: &XGroup) -> Result<PElement> {
        let ginv = group.inv(&self.point)?;
        Ok(PElement {
            graph: self.graph.translate(group, &ginv)?,
            point: ginv,
        })
    }

    /// m(Γ, g) = (∅, g): the max-elements form a copy of G.
    pub fn max(&self, group: &XGroup) -> Result<PElement> {
        group.check(&self.point)?;
        Ok(PElement {
            graph: Subgraph::empty(),
            point: self.point.clone(),
        })
    }

    pub fn is_idempotent(&self, group: &XGroup) -> bool {
        group.is_identity(&self.point)
    }

    /// Natural partial order, same shape as in F(G).
    pub fn leq(&self, group: &XGroup, rhs: &PElement) -> Result<bool> {
        group.check(&self.point)?;
        group.check(&rhs.point)?;
        Ok(self.point == rhs.point && rhs.graph.is_subgraph_of(&self.graph))
    }

    /// Membership in Q(G): 1 and the point are vertices of the graph.
    pub fn in_q(&self, group: &XGroup) -> bool {
        self.graph.contains_vertex(&group.identity()) && self.graph.contains_vertex(&self.point)
    }

    pub fn to_json(&self) -> Value {
        element_json(&self.graph, &self.point)
    }

    pub fn dot(&self, group: &XGroup) -> Result<String> {
        element_dot(group, &self.graph, &self.point)
    }
}

fn element_json(graph: &Subgraph, point: &GroupElement) -> Value {
    let vertices: Vec<String> = graph.vertices().iter().map(|v| v.to_string()).collect();
    let edges: Vec<Value> = graph
        .pos_edges()
        .iter()
        .map(|e| json!([e.src.to_string(), e.label.to_string()]))
        .collect();
    json!({
        "point": point.to_string(),
        "vertices": vertices,
        "edges": edges,
    })
}

fn element_dot(group: &XGroup, graph: &Subgraph, point: &GroupElement) -> Result<String> {
    use std::fmt::Write;
    let mut out = String::from("digraph element {\n  rankdir=LR;\n  node [shape=circle];\n");
    let one = group.identity();
    for v in graph.vertices() {
        let mut attrs: Vec<&str> = Vec::new();
        if *v == one {
            attrs.push("shape=doublecircle");
        }
        if v == point {
            attrs.push("style=filled");
        }
        if attrs.is_empty() {
            writeln!(out, "  \"{v}\";").unwrap();
        } else {
            writeln!(out, "  \"{v}\" [{}];", attrs.join(", ")).unwrap();
        }
    }
    for e in graph.pos_edges() {
        let dst = e.dst(group)?;
        writeln!(out, "  \"{}\" -> \"{dst}\" [label=\"{}\"];", e.src, e.label).unwrap();
    }
    out.push_str("}\n");
    Ok(out)
}

/// Evaluate a term in F(G): the span of its journey from 1, pointed at the
/// group value of the underlying word. This is the canonical morphism from
/// the free enriched term algebra, sending x to (Γ_x, x).
pub fn eval_term_f(group: &XGroup, w: &MTerm) -> Result<FElement> {
    let j = journey_of_term(group, &group.identity(), w)?;
    Ok(FElement {
        graph: j.span(group)?,
        point: j.end(group)?,
    })
}

/// Evaluate a plain word in M(G): (Γ_w, [w]_G). Agrees with [`eval_term_f`]
/// on max-free terms, and the result is connected.
pub fn eval_word_m(group: &XGroup, w: &InvWord) -> Result<FElement> {
    let path = crate::cayley::Path::new(group.identity(), w.clone());
    Ok(FElement {
        graph: path.span(group)?,
        point: path.end(group)?,
    })
}

/// Multiplication in BR(G): both arguments must be edgeless. The formula is
/// that of F(G), and edgeless graphs stay edgeless.
pub fn br_mul(group: &XGroup, a: &FElement, b: &FElement) -> Result<FElement> {
    if !a.in_br() || !b.in_br() {
        return Err(Error::NotInBr);
    }
    a.mul(group, b)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GreenRel {
    R,
    L,
    D,
    J,
}

/// Green's relations on F(G), decided by the graph formulas:
/// R ⟺ Γ = Ξ; L ⟺ g⁻¹Γ = h⁻¹Ξ; D = J ⟺ Γ = kΞ for some k ∈ G.
///
/// Any witness k must map some vertex of Ξ onto some vertex of Γ, so the
/// candidates γ·ξ⁻¹ over vertex pairs are exhaustive; FElement graphs are
/// nonempty, so the search space is never empty.
pub fn green(group: &XGroup, s: &FElement, t: &FElement, rel: GreenRel) -> Result<bool> {
    group.check(s.point())?;
    group.check(t.point())?;
    match rel {
        GreenRel::R => Ok(s.graph == t.graph),
        GreenRel::L => {
            let sg = s.graph.translate(group, &group.inv(&s.point)?)?;
            let tg = t.graph.translate(group, &group.inv(&t.point)?)?;
            Ok(sg == tg)
        }
        GreenRel::D | GreenRel::J => {
            if s.graph.vertices().len() != t.graph.vertices().len()
                || s.graph.pos_edges().len() != t.graph.pos_edges().len()
            {
                return Ok(false);
            }
            for gamma in s.graph.vertices() {
                for xi in t.graph.vertices() {
                    let k = group.mul(gamma, &group.inv(xi)?)?;
                    if t.graph.translate(group, &k)? == s.graph {
                        return Ok(true);
                    }
                }
            }
            Ok(false)
        }
    }
}

/// The functor F(ν): for ν: G → H, map (Γ, g) to (Γν̂, gν) where ν̂ renames
/// each vertex by ν and keeps edge labels.
pub fn functor_map(nu: &CanonicalMorphism, s: &FElement) -> Result<FElement> {
    let mut vertices = BTreeSet::new();
    for v in s.graph.vertices() {
        vertices.insert(nu.apply(v)?);
    }
    let mut pos_edges = BTreeSet::new();
    for e in s.graph.pos_edges() {
        pos_edges.insert(PosEdge::new(nu.apply(&e.src)?, e.label.clone()));
    }
    let graph = Subgraph::new(nu.target(), vertices, pos_edges)?;
    FElement::new(nu.target(), graph, nu.apply(&s.point)?)
}

fn require_finite(group: &XGroup, what: &'static str) -> Result<usize> {
    group.order().ok_or(Error::NotFinite(what))
}

/// All elements of F(G) for finite G, canonically ordered: for every vertex
/// subset containing 1, every endpoint-closed set of positive edges, every
/// point in the subset.
pub fn enumerate_f(group: &XGroup, cap: usize) -> Result<Vec<FElement>> {
    let n = require_finite(group, "enumerate_f")?;
    if n - 1 >= usize::BITS as usize {
        return Err(Error::TooLarge { cap });
    }
    let elements = group.elements()?;
    let identity = group.identity();
    let others: Vec<&GroupElement> = elements.iter().filter(|e| **e != identity).collect();
    let gens: Vec<(Generator, GroupElement)> = group
        .generators()
        .iter()
        .map(|x| Ok((x.clone(), group.generator_value(x)?)))
        .collect::<Result<_>>()?;

    let mut out: Vec<FElement> = Vec::new();
    let mut total: u128 = 0;
    for mask in 0u64..(1u64 << others.len()) {
        let mut verts: BTreeSet<GroupElement> = BTreeSet::from([identity.clone()]);
        for (i, v) in others.iter().enumerate() {
            if mask & (1 << i) != 0 {
                verts.insert((*v).clone());
            }
        }
        // Candidate edges: both endpoints inside the vertex set.
        let mut cands: Vec<PosEdge> = Vec::new();
        for v in &verts {
            for (x, img) in &gens {
                if verts.contains(&group.mul(v, img)?) {
                    cands.push(PosEdge::new(v.clone(), x.clone()));
                }
            }
        }
        if cands.len() >= 64 {
            return Err(Error::TooLarge { cap });
        }
        total += (1u128 << cands.len()) * verts.len() as u128;
        if total > cap as u128 {
            return Err(Error::TooLarge { cap });
        }
        for emask in 0u64..(1u64 << cands.len()) {
            let edges: BTreeSet<PosEdge> = cands
                .iter()
                .enumerate()
                .filter(|(i, _)| emask & (1 << i) != 0)
                .map(|(_, e)| e.clone())
                .collect();
            let graph = Subgraph::from_parts_unchecked(verts.clone(), edges);
            for p in &verts {
                out.push(FElement::raw(graph.clone(), p.clone()));
            }
        }
    }
    out.sort_by(|a, b| (&a.graph, &a.point).cmp(&(&b.graph, &b.point)));
    Ok(out)
}

/// The connected elements of F(G).
pub fn enumerate_m(group: &XGroup, cap: usize) -> Result<Vec<FElement>> {
    let all = enumerate_f(group, cap)?;
    let mut out = Vec::new();
    for s in all {
        if s.in_m(group)? {
            out.push(s);
        }
    }
    Ok(out)
}

/// The edgeless elements of F(G).
pub fn enumerate_br(group: &XGroup, cap: usize) -> Result<Vec<FElement>> {
    Ok(enumerate_f(group, cap)?
        .into_iter()
        .filter(FElement::in_br)
        .collect())
}

/// All elements of P(G) for finite G: every subset of the positive edges of
/// Cay(G) (spanning its endpoints) with every point of G.
pub fn enumerate_p(group: &XGroup, cap: usize) -> Result<Vec<PElement>> {
    let n = require_finite(group, "enumerate_p")?;
    let elements = group.elements()?;
    let gens: Vec<(Generator, GroupElement)> = group
        .generators()
        .iter()
        .map(|x| Ok((x.clone(), group.generator_value(x)?)))
        .collect::<Result<_>>()?;
    let mut all_edges: Vec<PosEdge> = Vec::new();
    for v in &elements {
        for (x, _) in &gens {
            all_edges.push(PosEdge::new(v.clone(), x.clone()));
        }
    }
    if all_edges.len() >= 64 {
        return Err(Error::TooLarge { cap });
    }
    let total = (1u128 << all_edges.len()) * n as u128;
    if total > cap as u128 {
        return Err(Error::TooLarge { cap });
    }

    let mut out = Vec::new();
    for mask in 0u64..(1u64 << all_edges.len()) {
        let edges: BTreeSet<PosEdge> = all_edges
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, e)| e.clone())
            .collect();
        let graph = Subgraph::spanned_by_edges(group, edges)?;
        for p in &elements {
            out.push(PElement {
                graph: graph.clone(),
                point: p.clone(),
            });
        }
    }
    out.sort_by(|a, b| (&a.graph, &a.point).cmp(&(&b.graph, &b.point)));
    Ok(out)
}

/// An enumerated expansion packaged as an abstract monoid: the element list
/// in canonical order, its multiplication table, and the generator
/// assignment into it.
pub struct ExpansionMonoid<T> {
    pub group: XGroup,
    pub elements: Vec<T>,
    pub index: HashMap<T, usize>,
    pub monoid: FiniteMonoid,
    pub assignment: BTreeMap<Generator, usize>,
}

impl<T: Clone + Eq + Hash> ExpansionMonoid<T> {
    pub fn index_of(&self, e: &T) -> Option<usize> {
        self.index.get(e).copied()
    }
}

fn tabulate<T>(
    group: &XGroup,
    elements: Vec<T>,
    identity: &T,
    mul: impl Fn(&T, &T) -> Result<T> + Sync,
    generator_image: impl Fn(&Generator) -> Result<T>,
) -> Result<ExpansionMonoid<T>>
where
    T: Clone + Eq + Hash + Send + Sync,
{
    let index: HashMap<T, usize> = elements
        .iter()
        .enumerate()
        .map(|(i, e)| (e.clone(), i))
        .collect();
    let n = elements.len();
    let rows: Vec<Vec<usize>> = (0..n)
        .into_par_iter()
        .map(|i| {
            (0..n)
                .map(|j| {
                    let p = mul(&elements[i], &elements[j])
                        .expect("expansion multiplication is total");
                    *index.get(&p).expect("expansions are closed under product")
                })
                .collect()
        })
        .collect();
    let id = *index.get(identity).expect("identity is enumerated");
    let monoid = FiniteMonoid::new(n, id, rows)?;
    let mut assignment = BTreeMap::new();
    for x in group.generators() {
        let img = generator_image(x)?;
        let i = *index.get(&img).expect("generator images are enumerated");
        assignment.insert(x.clone(), i);
    }
    Ok(ExpansionMonoid {
        group: group.clone(),
        elements,
        index,
        monoid,
        assignment,
    })
}

/// Enumerate F(G) and tabulate it as an abstract monoid, with x ↦ (Γ_x, x).
pub fn monoid_of_f(group: &XGroup, cap: usize) -> Result<ExpansionMonoid<FElement>> {
    let elements = enumerate_f(group, cap)?;
    tabulate(
        group,
        elements,
        &FElement::identity(group),
        |a, b| a.mul(group, b),
        |x| eval_word_m(group, &InvWord::letter(crate::word::InvLetter::pos(x.clone()))),
    )
}

/// Tabulate M(G), with x ↦ (Γ_x, x). Products of connected elements stay
/// connected (the translate shares the point vertex), so the table closes.
pub fn monoid_of_m(group: &XGroup, cap: usize) -> Result<ExpansionMonoid<FElement>> {
    let elements = enumerate_m(group, cap)?;
    tabulate(
        group,
        elements,
        &FElement::identity(group),
        |a, b| a.mul(group, b),
        |x| eval_word_m(group, &InvWord::letter(crate::word::InvLetter::pos(x.clone()))),
    )
}

/// Tabulate BR(G), with the max-image assignment x ↦ (Δ_x, x).
pub fn monoid_of_br(group: &XGroup, cap: usize) -> Result<ExpansionMonoid<FElement>> {
    let elements = enumerate_br(group, cap)?;
    tabulate(
        group,
        elements,
        &FElement::identity(group),
        |a, b| br_mul(group, a, b),
        |x| {
            let g = group.generator_value(x)?;
            FElement::new(group, Subgraph::delta(group, &g)?, g)
        },
    )
}

/// Tabulate P(G), with x ↦ (Γ_x, x) (no isolated vertices, so it is its own
/// perfect image).
pub fn monoid_of_p(group: &XGroup, cap: usize) -> Result<ExpansionMonoid<PElement>> {
    let elements = enumerate_p(group, cap)?;
    tabulate(
        group,
        elements,
        &PElement::identity(group),
        |a, b| a.mul(group, b),
        |x| {
            eval_word_m(group, &InvWord::letter(crate::word::InvLetter::pos(x.clone())))?
                .to_perfect(group)
        },
    )
}
