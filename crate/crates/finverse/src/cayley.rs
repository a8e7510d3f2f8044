//! Finite subgraphs of Cayley graphs of X-generated groups.
//!
//! The Cayley graph Cay(G) has vertex set G and a positive edge (g, x) from g
//! to g·x for every vertex g and generator x. Only positive edges are stored;
//! an edge traversed against its orientation is the same edge. Subgraphs are
//! finite, endpoint-closed (every stored edge has both endpoints in the
//! vertex set) and ordered canonically, so equal subgraphs compare equal.
//!
//! G acts on subgraphs on the left: translation by g maps vertices v to g·v
//! and edges (v, x) to (g·v, x). Spans of paths, unions, and translations are
//! the building blocks of the expansion arithmetic.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::group::{GroupElement, XGroup};
use crate::word::{Generator, InvWord, Sign};

/// A positive edge of Cay(G): from `src` to `src·label`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PosEdge {
    pub src: GroupElement,
    pub label: Generator,
}

impl PosEdge {
    pub fn new(src: GroupElement, label: Generator) -> PosEdge {
        PosEdge { src, label }
    }

    /// The ω-endpoint `src·label`.
    pub fn dst(&self, group: &XGroup) -> Result<GroupElement> {
        group.mul(&self.src, &group.generator_value(&self.label)?)
    }
}

/// A finite endpoint-closed subgraph of Cay(G).
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Subgraph {
    vertices: BTreeSet<GroupElement>,
    pos_edges: BTreeSet<PosEdge>,
}

impl Subgraph {
    pub fn empty() -> Subgraph {
        Subgraph::default()
    }

    /// The single-vertex subgraph {g}.
    pub fn vertex(g: GroupElement) -> Subgraph {
        Subgraph {
            vertices: BTreeSet::from([g]),
            pos_edges: BTreeSet::new(),
        }
    }

    /// The edgeless subgraph Δ_g with vertices {1, g}.
    pub fn delta(group: &XGroup, g: &GroupElement) -> Result<Subgraph> {
        group.check(g)?;
        Ok(Subgraph {
            vertices: BTreeSet::from([group.identity(), g.clone()]),
            pos_edges: BTreeSet::new(),
        })
    }

    /// Build from explicit parts, checking endpoint closure and membership.
    pub fn new(
        group: &XGroup,
        vertices: BTreeSet<GroupElement>,
        pos_edges: BTreeSet<PosEdge>,
    ) -> Result<Subgraph> {
        for v in &vertices {
            group.check(v)?;
        }
        for e in &pos_edges {
            let dst = e.dst(group)?;
            if !vertices.contains(&e.src) || !vertices.contains(&dst) {
                return Err(Error::NotClosed {
                    src: e.src.to_string(),
                    label: e.label.to_string(),
                });
            }
        }
        Ok(Subgraph {
            vertices,
            pos_edges,
        })
    }

    /// The least subgraph containing the given edges: endpoints are added.
    pub fn spanned_by_edges(group: &XGroup, pos_edges: BTreeSet<PosEdge>) -> Result<Subgraph> {
        let mut vertices = BTreeSet::new();
        for e in &pos_edges {
            group.check(&e.src)?;
            let dst = e.dst(group)?;
            vertices.insert(e.src.clone());
            vertices.insert(dst);
        }
        Ok(Subgraph {
            vertices,
            pos_edges,
        })
    }

    pub(crate) fn from_parts_unchecked(
        vertices: BTreeSet<GroupElement>,
        pos_edges: BTreeSet<PosEdge>,
    ) -> Subgraph {
        Subgraph {
            vertices,
            pos_edges,
        }
    }

    pub fn vertices(&self) -> &BTreeSet<GroupElement> {
        &self.vertices
    }

    pub fn pos_edges(&self) -> &BTreeSet<PosEdge> {
        &self.pos_edges
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn is_edgeless(&self) -> bool {
        self.pos_edges.is_empty()
    }

    pub fn contains_vertex(&self, g: &GroupElement) -> bool {
        self.vertices.contains(g)
    }

    pub fn is_subgraph_of(&self, other: &Subgraph) -> bool {
        self.vertices.is_subset(&other.vertices) && self.pos_edges.is_subset(&other.pos_edges)
    }

    /// Whether every stored edge has both endpoints in the vertex set.
    pub fn is_closed(&self, group: &XGroup) -> bool {
        self.pos_edges.iter().all(|e| {
            self.vertices.contains(&e.src)
                && e.dst(group).is_ok_and(|d| self.vertices.contains(&d))
        })
    }

    /// Set union. Subgraphs of one Cayley graph form a semilattice under
    /// union; both arguments must live over the same group.
    pub fn union(&self, other: &Subgraph) -> Subgraph {
        let mut vertices = self.vertices.clone();
        vertices.extend(other.vertices.iter().cloned());
        let mut pos_edges = self.pos_edges.clone();
        pos_edges.extend(other.pos_edges.iter().cloned());
        Subgraph {
            vertices,
            pos_edges,
        }
    }

    /// The left translate g·Γ.
    pub fn translate(&self, group: &XGroup, g: &GroupElement) -> Result<Subgraph> {
        group.check(g)?;
        let mut vertices = BTreeSet::new();
        for v in &self.vertices {
            vertices.insert(group.mul(g, v)?);
        }
        let mut pos_edges = BTreeSet::new();
        for e in &self.pos_edges {
            pos_edges.insert(PosEdge::new(group.mul(g, &e.src)?, e.label.clone()));
        }
        Ok(Subgraph {
            vertices,
            pos_edges,
        })
    }

    /// Connectivity as an undirected graph, by union-find over the vertices.
    /// The empty graph and single vertices count as connected.
    pub fn is_connected(&self, group: &XGroup) -> Result<bool> {
        let verts: Vec<&GroupElement> = self.vertices.iter().collect();
        if verts.len() <= 1 {
            return Ok(true);
        }
        let index = |g: &GroupElement| verts.binary_search(&g).expect("endpoint closure");
        let mut parent: Vec<usize> = (0..verts.len()).collect();
        fn find(parent: &mut Vec<usize>, mut i: usize) -> usize {
            while parent[i] != i {
                parent[i] = parent[parent[i]];
                i = parent[i];
            }
            i
        }
        let mut components = verts.len();
        for e in &self.pos_edges {
            let a = find(&mut parent, index(&e.src));
            let b = find(&mut parent, index(&e.dst(group)?));
            if a != b {
                parent[a] = b;
                components -= 1;
            }
        }
        Ok(components == 1)
    }

    /// Ed(Γ): the subgraph spanned by the edges, dropping isolated vertices.
    pub fn edges_only(&self, group: &XGroup) -> Result<Subgraph> {
        let mut vertices = BTreeSet::new();
        for e in &self.pos_edges {
            vertices.insert(e.src.clone());
            vertices.insert(e.dst(group)?);
        }
        Ok(Subgraph {
            vertices,
            pos_edges: self.pos_edges.clone(),
        })
    }
}

/// A path in Cay(G): a start vertex and a word of edge labels. Letters with
/// negative sign traverse positive edges against their orientation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Path {
    pub start: GroupElement,
    pub labels: InvWord,
}

impl Path {
    pub fn new(start: GroupElement, labels: InvWord) -> Path {
        Path { start, labels }
    }

    /// The empty path at g.
    pub fn empty_at(g: GroupElement) -> Path {
        Path {
            start: g,
            labels: InvWord::empty(),
        }
    }

    /// The endpoint `start·[labels]`.
    pub fn end(&self, group: &XGroup) -> Result<GroupElement> {
        group.mul(&self.start, &group.eval(&self.labels)?)
    }

    /// The reverse path, from end to start.
    pub fn inverse(&self, group: &XGroup) -> Result<Path> {
        Ok(Path {
            start: self.end(group)?,
            labels: self.labels.inverse(),
        })
    }

    /// The subgraph of all vertices visited and all edges traversed. A step
    /// with label x⁻¹ contributes the positive edge based at its ω-end.
    pub fn span(&self, group: &XGroup) -> Result<Subgraph> {
        group.check(&self.start)?;
        let mut cur = self.start.clone();
        let mut vertices = BTreeSet::from([cur.clone()]);
        let mut pos_edges = BTreeSet::new();
        for l in self.labels.letters() {
            let step = group.generator_value(&l.gen)?;
            let next = match l.sign {
                Sign::Pos => {
                    pos_edges.insert(PosEdge::new(cur.clone(), l.gen.clone()));
                    group.mul(&cur, &step)?
                }
                Sign::Neg => {
                    let next = group.mul(&cur, &group.inv(&step)?)?;
                    pos_edges.insert(PosEdge::new(next.clone(), l.gen.clone()));
                    next
                }
            };
            vertices.insert(next.clone());
            cur = next;
        }
        Ok(Subgraph {
            vertices,
            pos_edges,
        })
    }
}
