//! Shared support for the acceptance suite: finite group builders, random
//! term generation, identity-preserving term mutation, and independent
//! brute-force oracles that deliberately avoid the library's own
//! enumeration, evaluation and Green's code paths.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rand::prelude::*;
use rand::rngs::StdRng;

use finverse::expansion::FElement;
use finverse::fim::{FInverseCert, FiniteMonoid};
use finverse::group::XGroup;
use finverse::term::RawTerm;
use finverse::word::{Generator, InvLetter};

pub fn gn(name: &str) -> Generator {
    Generator::new(name).unwrap()
}

pub fn z(n: usize) -> XGroup {
    let table: Vec<Vec<usize>> = (0..n)
        .map(|i| (0..n).map(|j| (i + j) % n).collect())
        .collect();
    let inverse: Vec<usize> = (0..n).map(|i| (n - i) % n).collect();
    let assignment: BTreeMap<String, usize> = [("a".to_string(), 1 % n)].into();
    XGroup::finite(n, 0, table, inverse, assignment).unwrap()
}

pub fn trivial_group() -> XGroup {
    let assignment: BTreeMap<String, usize> = [("a".to_string(), 0)].into();
    XGroup::finite(1, 0, vec![vec![0]], vec![0], assignment).unwrap()
}

pub fn klein() -> XGroup {
    let table: Vec<Vec<usize>> = (0..4).map(|i| (0..4).map(|j| i ^ j).collect()).collect();
    let assignment: BTreeMap<String, usize> = [("a".to_string(), 1), ("b".to_string(), 2)].into();
    XGroup::finite(4, 0, table, vec![0, 1, 2, 3], assignment).unwrap()
}

pub fn random_raw_term(rng: &mut StdRng, depth: usize, names: &[&str]) -> RawTerm {
    let letter = |rng: &mut StdRng| {
        let g = gn(names[rng.random_range(0..names.len())]);
        if rng.random_bool(0.5) {
            RawTerm::letter(InvLetter::pos(g))
        } else {
            RawTerm::letter(InvLetter::neg(g))
        }
    };
    if depth == 0 || rng.random_bool(0.3) {
        return if rng.random_bool(0.15) {
            RawTerm::One
        } else {
            letter(rng)
        };
    }
    match rng.random_range(0..10) {
        0..5 => RawTerm::mul(
            random_raw_term(rng, depth - 1, names),
            random_raw_term(rng, depth - 1, names),
        ),
        5..7 => RawTerm::inv(random_raw_term(rng, depth - 1, names)),
        _ => RawTerm::max(random_raw_term(rng, depth - 1, names)),
    }
}

fn node_count(t: &RawTerm) -> usize {
    match t {
        RawTerm::One | RawTerm::Letter(_) => 1,
        RawTerm::Mul(a, b) => 1 + node_count(a) + node_count(b),
        RawTerm::Inv(a) | RawTerm::Max(a) => 1 + node_count(a),
    }
}

/// Apply `f` to the subterm at preorder index `idx`; None if `f` declines.
fn transform_at(
    t: &RawTerm,
    idx: usize,
    f: &mut dyn FnMut(&RawTerm) -> Option<RawTerm>,
) -> Option<RawTerm> {
    if idx == 0 {
        return f(t);
    }
    let idx = idx - 1;
    match t {
        RawTerm::One | RawTerm::Letter(_) => None,
        RawTerm::Mul(a, b) => {
            let ca = node_count(a);
            if idx < ca {
                transform_at(a, idx, f).map(|na| RawTerm::mul(na, (**b).clone()))
            } else {
                transform_at(b, idx - ca, f).map(|nb| RawTerm::mul((**a).clone(), nb))
            }
        }
        RawTerm::Inv(a) => transform_at(a, idx, f).map(RawTerm::inv),
        RawTerm::Max(a) => transform_at(a, idx, f).map(RawTerm::max),
    }
}

/// Replace one max-factor on the multiplicative spine by its argument,
/// i.e. one backward application of m(x m(y) z) = m(x y z) inside a block.
fn unwrap_spine_max(t: &RawTerm) -> Option<RawTerm> {
    match t {
        RawTerm::Max(inner) => Some((**inner).clone()),
        RawTerm::Mul(a, b) => unwrap_spine_max(a)
            .map(|na| RawTerm::mul(na, (**b).clone()))
            .or_else(|| unwrap_spine_max(b).map(|nb| RawTerm::mul((**a).clone(), nb))),
        _ => None,
    }
}

/// Wrap one random spine factor f as m(f): the forward direction of the
/// same law.
fn wrap_spine_factor(rng: &mut StdRng, t: &RawTerm) -> RawTerm {
    match t {
        RawTerm::Mul(a, b) => {
            if rng.random_bool(0.5) {
                RawTerm::mul(wrap_spine_factor(rng, a), (**b).clone())
            } else {
                RawTerm::mul((**a).clone(), wrap_spine_factor(rng, b))
            }
        }
        other => RawTerm::max(other.clone()),
    }
}

/// One random application of an F-inverse identity at a random position.
/// Every rewrite is sound in the variety, so the result always evaluates
/// equal to the input in every F-inverse monoid.
pub fn mutate(rng: &mut StdRng, t: &RawTerm, names: &[&str]) -> RawTerm {
    for _ in 0..64 {
        let idx = rng.random_range(0..node_count(t));
        let rule = rng.random_range(0..14);
        let mut apply = |s: &RawTerm| -> Option<RawTerm> {
            match rule {
                // (xy)z = x(yz), both directions.
                0 => match s {
                    RawTerm::Mul(ab, c) => match &**ab {
                        RawTerm::Mul(a, b) => Some(RawTerm::mul(
                            (**a).clone(),
                            RawTerm::mul((**b).clone(), (**c).clone()),
                        )),
                        _ => None,
                    },
                    _ => None,
                },
                1 => match s {
                    RawTerm::Mul(a, bc) => match &**bc {
                        RawTerm::Mul(b, c) => Some(RawTerm::mul(
                            RawTerm::mul((**a).clone(), (**b).clone()),
                            (**c).clone(),
                        )),
                        _ => None,
                    },
                    _ => None,
                },
                // Unit laws, both directions.
                2 => Some(RawTerm::mul(RawTerm::One, s.clone())),
                3 => Some(RawTerm::mul(s.clone(), RawTerm::One)),
                4 => match s {
                    RawTerm::Mul(a, b) if **a == RawTerm::One => Some((**b).clone()),
                    RawTerm::Mul(a, b) if **b == RawTerm::One => Some((**a).clone()),
                    _ => None,
                },
                // (xy)' = y'x', both directions; x'' = x, both directions.
                5 => match s {
                    RawTerm::Inv(m) => match &**m {
                        RawTerm::Mul(a, b) => Some(RawTerm::mul(
                            RawTerm::inv((**b).clone()),
                            RawTerm::inv((**a).clone()),
                        )),
                        _ => None,
                    },
                    _ => None,
                },
                6 => match s {
                    RawTerm::Mul(a, b) => match (&**a, &**b) {
                        (RawTerm::Inv(x), RawTerm::Inv(y)) => Some(RawTerm::inv(RawTerm::mul(
                            (**y).clone(),
                            (**x).clone(),
                        ))),
                        _ => None,
                    },
                    _ => None,
                },
                7 => match s {
                    RawTerm::Inv(i) => match &**i {
                        RawTerm::Inv(x) => Some((**x).clone()),
                        _ => None,
                    },
                    _ => None,
                },
                8 => Some(RawTerm::inv(RawTerm::inv(s.clone()))),
                // m(x)' = m(x'), both directions.
                9 => match s {
                    RawTerm::Inv(m) => match &**m {
                        RawTerm::Max(x) => Some(RawTerm::max(RawTerm::inv((**x).clone()))),
                        _ => None,
                    },
                    RawTerm::Max(i) => match &**i {
                        RawTerm::Inv(x) => Some(RawTerm::inv(RawTerm::max((**x).clone()))),
                        _ => None,
                    },
                    _ => None,
                },
                // m(x m(y) z) = m(x y z), both directions.
                10 => match s {
                    RawTerm::Max(inner) => unwrap_spine_max(inner).map(RawTerm::max),
                    _ => None,
                },
                11 => match s {
                    RawTerm::Max(inner) => {
                        Some(RawTerm::max(wrap_spine_factor(rng, inner)))
                    }
                    _ => None,
                },
                // x = m(x) x' x and x = x x' x, expansion direction.
                12 => Some(RawTerm::mul(
                    RawTerm::mul(RawTerm::max(s.clone()), RawTerm::inv(s.clone())),
                    s.clone(),
                )),
                _ => Some(RawTerm::mul(
                    RawTerm::mul(s.clone(), RawTerm::inv(s.clone())),
                    s.clone(),
                )),
            }
        };
        if let Some(next) = transform_at(t, idx, &mut apply) {
            return next;
        }
    }
    // Dense expansion rules make 64 misses all but impossible; fall back to
    // a global identity application so the caller always gets a rewrite.
    let _ = names;
    RawTerm::mul(RawTerm::One, t.clone())
}

/// Evaluate a raw term in a certified monoid by structural recursion,
/// without normalizing first. The independent oracle for identity checks.
pub fn eval_raw_in(
    cert: &FInverseCert,
    t: &RawTerm,
    env: &HashMap<Generator, usize>,
) -> usize {
    let m = cert.monoid();
    match t {
        RawTerm::One => m.identity(),
        RawTerm::Letter(l) => {
            let v = env[&l.gen];
            match l.sign {
                finverse::word::Sign::Pos => v,
                finverse::word::Sign::Neg => cert.inverse_of(v),
            }
        }
        RawTerm::Mul(a, b) => m.mul(eval_raw_in(cert, a, env), eval_raw_in(cert, b, env)),
        RawTerm::Inv(a) => cert.inverse_of(eval_raw_in(cert, a, env)),
        RawTerm::Max(a) => cert.max_of(eval_raw_in(cert, a, env)),
    }
}

/// Canonical fingerprint of an element for cross-checking enumerations:
/// sorted vertex names, sorted (src, label) edges, point name.
pub type Fingerprint = (Vec<String>, Vec<(String, String)>, String);

pub fn fingerprint(e: &FElement) -> Fingerprint {
    let vertices = e.graph().vertices().iter().map(|v| v.to_string()).collect();
    let edges = e
        .graph()
        .pos_edges()
        .iter()
        .map(|pe| (pe.src.to_string(), pe.label.to_string()))
        .collect();
    (vertices, edges, e.point().to_string())
}

#[derive(Clone, Copy, PartialEq, Eq)]
pub enum Flavor {
    Full,
    Connected,
    Edgeless,
    Perfect,
}

/// Brute-force enumeration straight from the definitions: every subset of
/// vertices, every subset of the Cayley graph's positive edges, every
/// point, filtered by the defining conditions of each expansion. Shares no
/// code with the library's enumerators.
pub fn brute_enumerate(group: &XGroup, flavor: Flavor) -> BTreeSet<Fingerprint> {
    let elements = group.elements().unwrap();
    let n = elements.len();
    let gens = group.generators().to_vec();
    let mut all_edges: Vec<(usize, usize, String)> = Vec::new();
    for (i, v) in elements.iter().enumerate() {
        for x in &gens {
            let dst = group.mul(v, &group.generator_value(x).unwrap()).unwrap();
            let j = elements.iter().position(|e| *e == dst).unwrap();
            all_edges.push((i, j, x.to_string()));
        }
    }
    let identity_idx = elements
        .iter()
        .position(|e| group.is_identity(e))
        .unwrap();

    let mut out = BTreeSet::new();
    for vmask in 0u32..(1 << n) {
        for emask in 0u32..(1 << all_edges.len()) {
            let has_v = |i: usize| vmask & (1 << i) != 0;
            let edges: Vec<&(usize, usize, String)> = all_edges
                .iter()
                .enumerate()
                .filter(|(k, _)| emask & (1 << *k) != 0)
                .map(|(_, e)| e)
                .collect();
            if !edges.iter().all(|(s, d, _)| has_v(*s) && has_v(*d)) {
                continue;
            }
            let incident =
                |i: usize| edges.iter().any(|(s, d, _)| *s == i || *d == i);
            let connected = {
                // Union-find over the selected vertices.
                let mut parent: Vec<usize> = (0..n).collect();
                fn find(parent: &mut Vec<usize>, i: usize) -> usize {
                    let mut i = i;
                    while parent[i] != i {
                        parent[i] = parent[parent[i]];
                        i = parent[i];
                    }
                    i
                }
                for (s, d, _) in &edges {
                    let (rs, rd) = (find(&mut parent, *s), find(&mut parent, *d));
                    parent[rs] = rd;
                }
                let mut roots: Vec<usize> = (0..n)
                    .filter(|&i| has_v(i))
                    .map(|i| find(&mut parent, i))
                    .collect();
                roots.dedup();
                roots.sort();
                roots.dedup();
                roots.len() <= 1
            };
            for p in 0..n {
                let ok = match flavor {
                    Flavor::Full => has_v(identity_idx) && has_v(p),
                    Flavor::Connected => has_v(identity_idx) && has_v(p) && connected,
                    Flavor::Edgeless => has_v(identity_idx) && has_v(p) && edges.is_empty(),
                    Flavor::Perfect => (0..n).filter(|&i| has_v(i)).all(incident),
                };
                if !ok {
                    continue;
                }
                let vertices: Vec<String> = (0..n)
                    .filter(|&i| has_v(i))
                    .map(|i| elements[i].to_string())
                    .collect();
                let mut es: Vec<(String, String)> = edges
                    .iter()
                    .map(|(s, _, x)| (elements[*s].to_string(), x.clone()))
                    .collect();
                es.sort();
                out.insert((vertices, es, elements[p].to_string()));
            }
        }
    }
    out
}

/// Principal-ideal Green's relations straight from a multiplication table.
pub struct BruteGreen {
    right_ideal: Vec<BTreeSet<usize>>,
    left_ideal: Vec<BTreeSet<usize>>,
    two_sided: Vec<BTreeSet<usize>>,
}

impl BruteGreen {
    pub fn new(m: &FiniteMonoid) -> BruteGreen {
        let n = m.order();
        let right_ideal: Vec<BTreeSet<usize>> = (0..n)
            .map(|a| (0..n).map(|x| m.mul(a, x)).collect())
            .collect();
        let left_ideal: Vec<BTreeSet<usize>> = (0..n)
            .map(|a| (0..n).map(|x| m.mul(x, a)).collect())
            .collect();
        let two_sided: Vec<BTreeSet<usize>> = (0..n)
            .map(|a| {
                (0..n)
                    .flat_map(|x| (0..n).map(move |y| (x, y)))
                    .map(|(x, y)| m.mul(m.mul(x, a), y))
                    .collect()
            })
            .collect();
        BruteGreen {
            right_ideal,
            left_ideal,
            two_sided,
        }
    }

    pub fn r(&self, a: usize, b: usize) -> bool {
        self.right_ideal[a] == self.right_ideal[b]
    }

    pub fn l(&self, a: usize, b: usize) -> bool {
        self.left_ideal[a] == self.left_ideal[b]
    }

    pub fn j(&self, a: usize, b: usize) -> bool {
        self.two_sided[a] == self.two_sided[b]
    }

    pub fn d(&self, a: usize, b: usize) -> bool {
        let n = self.right_ideal.len();
        (0..n).any(|c| self.r(a, c) && self.l(c, b))
    }
}
