//! Finite inverse monoid toolkit.
//!
//! Everything here works on bare multiplication tables. From a table we
//! derive, never accept as input: the inverse map (unique in an inverse
//! monoid), the idempotents, the natural partial order, the minimum group
//! congruence σ, and, when every σ-class has a maximum, the max-operation
//! m(a) that certifies the monoid as F-inverse. On top of the certificate
//! sit an exhaustive identity checker, premorphism verification for
//! ψ: M/σ → M, and construction of the canonical morphism F(G) → M.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

use rayon::prelude::*;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::expansion::{enumerate_f, eval_word_m, FElement};
use crate::group::{CanonicalMorphism, XGroup};
use crate::term::MTerm;
use crate::word::{Generator, Sign};

/// A finite monoid given by its full multiplication table. Construction
/// verifies the identity law and associativity, so a value of this type is
/// always an actual monoid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteMonoid {
    order: usize,
    identity: usize,
    table: Vec<usize>,
}

#[derive(Deserialize)]
struct MonoidFile {
    order: usize,
    identity: usize,
    table: Vec<Vec<usize>>,
    #[serde(default)]
    generators: BTreeMap<String, usize>,
}

impl FiniteMonoid {
    pub fn new(order: usize, identity: usize, table: Vec<Vec<usize>>) -> Result<FiniteMonoid> {
        let bad = |msg: String| Err(Error::InvalidMonoid(msg));
        if order == 0 {
            return bad("order must be at least 1".into());
        }
        if identity >= order {
            return bad(format!("identity index {identity} out of range"));
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
                    return bad(format!("entry at ({i}, {j}) is {v}, out of range"));
                }
                flat.push(v);
            }
        }
        let m = FiniteMonoid {
            order,
            identity,
            table: flat,
        };
        for a in 0..order {
            if m.mul(identity, a) != a || m.mul(a, identity) != a {
                return bad(format!("identity law fails at {a}"));
            }
        }
        let witness = (0..order).into_par_iter().find_map_first(|a| {
            for b in 0..order {
                let ab = m.mul(a, b);
                for c in 0..order {
                    if m.mul(ab, c) != m.mul(a, m.mul(b, c)) {
                        return Some((a, b, c));
                    }
                }
            }
            None
        });
        if let Some((a, b, c)) = witness {
            return bad(format!("associativity fails at ({a}, {b}, {c})"));
        }
        Ok(m)
    }

    /// Load `{"order", "identity", "table", "generators"?}`. The generator
    /// assignment maps names into the monoid; inverse and max tables are
    /// always derived, never read.
    pub fn from_json(text: &str) -> Result<(FiniteMonoid, BTreeMap<Generator, usize>)> {
        let file: MonoidFile = serde_json::from_str(text)?;
        let m = FiniteMonoid::new(file.order, file.identity, file.table)?;
        let mut assignment = BTreeMap::new();
        for (name, v) in file.generators {
            if v >= m.order {
                return Err(Error::InvalidMonoid(format!(
                    "generator `{name}` maps to {v}, out of range"
                )));
            }
            assignment.insert(Generator::new(&name)?, v);
        }
        Ok((m, assignment))
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    pub fn is_idempotent(&self, a: usize) -> bool {
        self.mul(a, a) == a
    }

    pub fn idempotents(&self) -> Vec<usize> {
        (0..self.order).filter(|&a| self.is_idempotent(a)).collect()
    }

    pub(crate) fn rows(&self) -> Vec<Vec<usize>> {
        (0..self.order)
            .map(|a| self.table[a * self.order..(a + 1) * self.order].to_vec())
            .collect()
    }

    /// The unique inverse table if this is an inverse monoid, otherwise a
    /// witness: an element with zero or two inverses, or a pair of
    /// idempotents that do not commute.
    pub fn check_inverse_monoid(&self) -> std::result::Result<Vec<usize>, InverseFailure> {
        let mut inverse = Vec::with_capacity(self.order);
        for a in 0..self.order {
            let mut found: Option<usize> = None;
            for b in 0..self.order {
                if self.mul(self.mul(a, b), a) == a && self.mul(self.mul(b, a), b) == b {
                    match found {
                        None => found = Some(b),
                        Some(first) => {
                            return Err(InverseFailure::TwoInverses {
                                element: a,
                                first,
                                second: b,
                            })
                        }
                    }
                }
            }
            match found {
                Some(b) => inverse.push(b),
                None => return Err(InverseFailure::NotRegular { element: a }),
            }
        }
        let es = self.idempotents();
        for (i, &e) in es.iter().enumerate() {
            for &f in &es[i + 1..] {
                if self.mul(e, f) != self.mul(f, e) {
                    return Err(InverseFailure::NonCommutingIdempotents { e, f });
                }
            }
        }
        Ok(inverse)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InverseFailure {
    NotRegular { element: usize },
    TwoInverses { element: usize, first: usize, second: usize },
    NonCommutingIdempotents { e: usize, f: usize },
}

impl fmt::Display for InverseFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InverseFailure::NotRegular { element } => {
                write!(f, "element {element} has no inverse")
            }
            InverseFailure::TwoInverses {
                element,
                first,
                second,
            } => write!(f, "element {element} has two inverses, {first} and {second}"),
            InverseFailure::NonCommutingIdempotents { e, f: g } => {
                write!(f, "idempotents {e} and {g} do not commute")
            }
        }
    }
}

/// Natural partial order: a ≤ b iff a = a·a⁻¹·b.
pub fn natural_order(m: &FiniteMonoid, inverse: &[usize], a: usize, b: usize) -> bool {
    m.mul(m.mul(a, inverse[a]), b) == a
}

/// The minimum group congruence, as a partition plus its quotient group.
#[derive(Debug, Clone)]
pub struct SigmaPartition {
    class_of: Vec<usize>,
    classes: Vec<Vec<usize>>,
    quotient: FiniteMonoid,
    quotient_inverse: Vec<usize>,
}

/// Compute σ: a σ b iff ae = be for some idempotent e. Multiplying by the
/// minimum idempotent (the product of all of them) realizes the worst such
/// e at once, so the classes are the fibers of a ↦ a·e_min.
pub fn sigma_classes(m: &FiniteMonoid, inverse: &[usize]) -> SigmaPartition {
    let e_min = m
        .idempotents()
        .into_iter()
        .fold(m.identity(), |acc, e| m.mul(acc, e));
    let mut class_of = vec![usize::MAX; m.order()];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut by_key: HashMap<usize, usize> = HashMap::new();
    for a in 0..m.order() {
        let key = m.mul(a, e_min);
        let id = *by_key.entry(key).or_insert_with(|| {
            classes.push(Vec::new());
            classes.len() - 1
        });
        class_of[a] = id;
        classes[id].push(a);
    }
    // Quotient table via representatives; well-defined since σ is a
    // congruence.
    let k = classes.len();
    let table: Vec<Vec<usize>> = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| class_of[m.mul(classes[i][0], classes[j][0])])
                .collect()
        })
        .collect();
    let quotient = FiniteMonoid::new(k, class_of[m.identity()], table)
        .expect("sigma quotient inherits the monoid laws");
    let quotient_inverse: Vec<usize> = (0..k).map(|i| class_of[inverse[classes[i][0]]]).collect();
    for i in 0..k {
        assert!(
            quotient.mul(i, quotient_inverse[i]) == quotient.identity()
                && quotient.mul(quotient_inverse[i], i) == quotient.identity(),
            "sigma quotient is a group"
        );
    }
    SigmaPartition {
        class_of,
        classes,
        quotient,
        quotient_inverse,
    }
}

impl SigmaPartition {
    pub fn class_of(&self, a: usize) -> usize {
        self.class_of[a]
    }

    /// Classes in order of first appearance; each sorted ascending.
    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn quotient(&self) -> &FiniteMonoid {
        &self.quotient
    }

    pub fn quotient_inverse(&self) -> &[usize] {
        &self.quotient_inverse
    }

    /// The quotient as an X-generated group, generators mapped through the
    /// projection. The classes become finite elements by their ids.
    pub fn quotient_xgroup(&self, assignment: &BTreeMap<Generator, usize>) -> Result<XGroup> {
        let named: BTreeMap<String, usize> = assignment
            .iter()
            .map(|(g, &v)| (g.to_string(), self.class_of[v]))
            .collect();
        XGroup::finite(
            self.quotient.order(),
            self.quotient.identity(),
            self.quotient.rows(),
            self.quotient_inverse.clone(),
            named,
        )
    }
}

/// E-unitarity: the σ-class of the identity is exactly the idempotents.
pub fn is_e_unitary(m: &FiniteMonoid, sigma: &SigmaPartition) -> bool {
    let id_class = sigma.class_of(m.identity());
    (0..m.order()).all(|a| (sigma.class_of(a) == id_class) == m.is_idempotent(a))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FInverseFailure {
    NotInverse(InverseFailure),
    /// A σ-class (sorted) with no maximum under the natural order.
    NoClassMaximum { class: Vec<usize> },
    /// Defensive: a law that provably follows from per-class maxima failed,
    /// which would mean a bug, not bad input.
    LawViolation {
        law: &'static str,
        witness: Vec<usize>,
        lhs: usize,
        rhs: usize,
    },
    /// Defensive in the same way: F-inverse forces E-unitary.
    NotEUnitary { witness: usize },
}

impl fmt::Display for FInverseFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FInverseFailure::NotInverse(w) => write!(f, "{w}"),
            FInverseFailure::NoClassMaximum { class } => {
                write!(f, "sigma-class {class:?} has no maximum element")
            }
            FInverseFailure::LawViolation {
                law,
                witness,
                lhs,
                rhs,
            } => write!(f, "law {law} fails at {witness:?}: {lhs} != {rhs}"),
            FInverseFailure::NotEUnitary { witness } => write!(
                f,
                "non-idempotent {witness} is sigma-equivalent to the identity"
            ),
        }
    }
}

/// A verified F-inverse structure: the monoid with its derived inverse map,
/// per-element σ-class maximum m(a), and the σ-partition itself.
#[derive(Debug, Clone)]
pub struct FInverseCert {
    monoid: FiniteMonoid,
    inverse: Vec<usize>,
    max_of: Vec<usize>,
    sigma: SigmaPartition,
}

/// Certify a table as F-inverse: check the inverse monoid axioms, compute
/// σ, find each class's maximum, then verify every consequence we rely on
/// exhaustively (the max-laws, the m-identities, E-unitarity). The law pass
/// cannot fail when the maxima exist; it guards the implementation, not the
/// input.
pub fn certify_f_inverse(m: &FiniteMonoid) -> std::result::Result<FInverseCert, FInverseFailure> {
    let inverse = m.check_inverse_monoid().map_err(FInverseFailure::NotInverse)?;
    let sigma = sigma_classes(m, &inverse);

    let mut max_of = vec![usize::MAX; m.order()];
    for class in sigma.classes() {
        let top = class
            .iter()
            .copied()
            .find(|&cand| class.iter().all(|&a| natural_order(m, &inverse, a, cand)));
        match top {
            Some(t) => {
                for &a in class {
                    max_of[a] = t;
                }
            }
            None => {
                return Err(FInverseFailure::NoClassMaximum {
                    class: class.clone(),
                })
            }
        }
    }

    let cert = FInverseCert {
        monoid: m.clone(),
        inverse,
        max_of,
        sigma,
    };
    cert.verify_laws()?;
    Ok(cert)
}

impl FInverseCert {
    pub fn monoid(&self) -> &FiniteMonoid {
        &self.monoid
    }

    pub fn inverse(&self) -> &[usize] {
        &self.inverse
    }

    pub fn inverse_of(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn max_table(&self) -> &[usize] {
        &self.max_of
    }

    pub fn max_of(&self, a: usize) -> usize {
        self.max_of[a]
    }

    pub fn sigma(&self) -> &SigmaPartition {
        &self.sigma
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        natural_order(&self.monoid, &self.inverse, a, b)
    }

    fn verify_laws(&self) -> std::result::Result<(), FInverseFailure> {
        let m = &self.monoid;
        let inv = &self.inverse;
        let mx = &self.max_of;
        let n = m.order();
        let fail = |law, witness: Vec<usize>, lhs, rhs| {
            Err(FInverseFailure::LawViolation {
                law,
                witness,
                lhs,
                rhs,
            })
        };

        for a in 0..n {
            let lhs = m.mul(m.mul(mx[a], inv[a]), a);
            if lhs != a {
                return fail("m(x) x' x = x", vec![a], lhs, a);
            }
            let lhs = inv[mx[a]];
            let rhs = mx[inv[a]];
            if lhs != rhs {
                return fail("m(x)' = m(x')", vec![a], lhs, rhs);
            }
        }
        for a in 0..n {
            for b in 0..n {
                // m(ae) = m(a) for idempotent e, in its two working forms.
                if m.is_idempotent(b) {
                    let lhs = mx[m.mul(a, b)];
                    if lhs != mx[a] {
                        return fail("m(x e) = m(x)", vec![a, b], lhs, mx[a]);
                    }
                }
                let lhs = mx[m.mul(m.mul(a, inv[b]), b)];
                if lhs != mx[a] {
                    return fail("m(x y' y) = m(x)", vec![a, b], lhs, mx[a]);
                }
                // m(x)m(y) = m(xy) m(y)' m(y) = m(x) m(x)' m(xy).
                let prod = m.mul(mx[a], mx[b]);
                let mab = mx[m.mul(a, b)];
                let r1 = m.mul(m.mul(mab, inv[mx[b]]), mx[b]);
                if prod != r1 {
                    return fail("m(x)m(y) = m(xy) m(y)' m(y)", vec![a, b], prod, r1);
                }
                let r2 = m.mul(m.mul(mx[a], inv[mx[a]]), mab);
                if prod != r2 {
                    return fail("m(x)m(y) = m(x) m(x)' m(xy)", vec![a, b], prod, r2);
                }
            }
        }
        // The substitution law m(x m(y) z) = m(xyz), cubic, sharded.
        let witness = (0..n).into_par_iter().find_map_first(|a| {
            for b in 0..n {
                let amb = m.mul(a, mx[b]);
                let ab = m.mul(a, b);
                for c in 0..n {
                    if mx[m.mul(amb, c)] != mx[m.mul(ab, c)] {
                        return Some((a, b, c));
                    }
                }
            }
            None
        });
        if let Some((a, b, c)) = witness {
            let lhs = mx[m.mul(m.mul(a, mx[b]), c)];
            let rhs = mx[m.mul(m.mul(a, b), c)];
            return fail("m(x m(y) z) = m(xyz)", vec![a, b, c], lhs, rhs);
        }
        // Same law with two max-blocks; quintic, so only on small tables.
        if n <= 40 {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        let l3 = m.mul(m.mul(a, mx[b]), c);
                        let r3 = m.mul(m.mul(a, b), c);
                        for d in 0..n {
                            for e in 0..n {
                                let lhs = mx[m.mul(m.mul(l3, mx[d]), e)];
                                let rhs = mx[m.mul(m.mul(r3, d), e)];
                                if lhs != rhs {
                                    return fail(
                                        "m(x m(y) z m(u) v) = m(xyzuv)",
                                        vec![a, b, c, d, e],
                                        lhs,
                                        rhs,
                                    );
                                }
                            }
                        }
                    }
                }
            }
        }
        if !is_e_unitary(m, &self.sigma) {
            let id_class = self.sigma.class_of(m.identity());
            let witness = (0..n)
                .find(|&a| self.sigma.class_of(a) == id_class && !m.is_idempotent(a))
                .expect("failure of E-unitarity has a witness");
            return Err(FInverseFailure::NotEUnitary { witness });
        }
        Ok(())
    }
}

/// A falsifying substitution for an identity between terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub assignment: Vec<(Generator, usize)>,
    pub lhs: usize,
    pub rhs: usize,
}

fn eval_mterm_at(cert: &FInverseCert, t: &MTerm, vars: &[Generator], vals: &[usize]) -> usize {
    let m = &cert.monoid;
    let letter = |l: &crate::word::InvLetter| {
        let i = vars.iter().position(|v| *v == l.gen).expect("known variable");
        match l.sign {
            Sign::Pos => vals[i],
            Sign::Neg => cert.inverse[vals[i]],
        }
    };
    let word = |acc: usize, w: &crate::word::InvWord| {
        w.letters().iter().fold(acc, |a, l| m.mul(a, letter(l)))
    };
    let mut acc = word(m.identity(), t.head());
    for b in t.blocks() {
        let arg = word(m.identity(), &b.max_arg);
        acc = m.mul(acc, cert.max_of[arg]);
        acc = word(acc, &b.tail);
    }
    acc
}

/// Check lhs = rhs under every substitution of monoid elements for the
/// variables (the generators occurring on either side). Returns the first
/// counterexample in lexicographic substitution order, or None if the
/// identity holds.
pub fn check_identity(cert: &FInverseCert, lhs: &MTerm, rhs: &MTerm) -> Option<Counterexample> {
    let vars: Vec<Generator> = {
        let mut s = lhs.generators();
        s.extend(rhs.generators());
        s.into_iter().collect()
    };
    let n = cert.monoid.order();
    let report = |vals: &[usize]| Counterexample {
        assignment: vars.iter().cloned().zip(vals.iter().copied()).collect(),
        lhs: eval_mterm_at(cert, lhs, &vars, vals),
        rhs: eval_mterm_at(cert, rhs, &vars, vals),
    };
    if vars.is_empty() {
        let vals = [];
        if eval_mterm_at(cert, lhs, &vars, &vals) != eval_mterm_at(cert, rhs, &vars, &vals) {
            return Some(report(&vals));
        }
        return None;
    }
    // Shard on the first variable; find_map_first keeps the lexicographic
    // contract deterministic under parallelism.
    (0..n).into_par_iter().find_map_first(|v0| {
        let mut vals = vec![0usize; vars.len()];
        vals[0] = v0;
        loop {
            if eval_mterm_at(cert, lhs, &vars, &vals) != eval_mterm_at(cert, rhs, &vars, &vals) {
                return Some(report(&vals));
            }
            // Odometer over vals[1..].
            let mut i = vars.len();
            loop {
                if i == 1 {
                    return None;
                }
                i -= 1;
                vals[i] += 1;
                if vals[i] < n {
                    break;
                }
                vals[i] = 0;
            }
        }
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PremorphismFailure {
    pub law: &'static str,
    /// Witness pair of quotient elements (the second is meaningful only for
    /// binary laws).
    pub g: usize,
    pub h: usize,
}

impl fmt::Display for PremorphismFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "premorphism law {} fails at ({}, {})", self.law, self.g, self.h)
    }
}

/// Verify that ψ: M/σ → M, gσ ↦ m(g), is a strong premorphism: unit and
/// inverses are preserved, ψ(g)ψ(h) ≤ ψ(gh), and both product identities
///   ψ(g)ψ(h) = ψ(gh)·ψ(h)⁻¹·ψ(h) = ψ(g)·ψ(g)⁻¹·ψ(gh).
pub fn check_premorphism(cert: &FInverseCert) -> Option<PremorphismFailure> {
    let m = cert.monoid();
    let q = cert.sigma().quotient();
    let psi: Vec<usize> = cert
        .sigma()
        .classes()
        .iter()
        .map(|c| cert.max_of(c[0]))
        .collect();
    let k = q.order();
    if psi[q.identity()] != m.identity() {
        return Some(PremorphismFailure {
            law: "1 psi = 1",
            g: q.identity(),
            h: q.identity(),
        });
    }
    for g in 0..k {
        if cert.inverse_of(psi[g]) != psi[cert.sigma().quotient_inverse()[g]] {
            return Some(PremorphismFailure {
                law: "(g') psi = (g psi)'",
                g,
                h: g,
            });
        }
        for h in 0..k {
            let prod = m.mul(psi[g], psi[h]);
            let top = psi[q.mul(g, h)];
            if !natural_order(m, cert.inverse(), prod, top) {
                return Some(PremorphismFailure {
                    law: "g psi . h psi <= (gh) psi",
                    g,
                    h,
                });
            }
            let r1 = m.mul(m.mul(top, cert.inverse_of(psi[h])), psi[h]);
            if prod != r1 {
                return Some(PremorphismFailure {
                    law: "g psi . h psi = (gh) psi . (h psi)' . h psi",
                    g,
                    h,
                });
            }
            let r2 = m.mul(m.mul(psi[g], cert.inverse_of(psi[g])), top);
            if prod != r2 {
                return Some(PremorphismFailure {
                    law: "g psi . h psi = g psi . (g psi)' . (gh) psi",
                    g,
                    h,
                });
            }
        }
    }
    None
}

/// The canonical morphism φ: F(G) → M for a certified X-generated target,
/// as the image list aligned with `enumerate_f(G)`.
#[derive(Debug, Clone)]
pub struct UniversalMorphism {
    pub elements: Vec<FElement>,
    pub images: Vec<usize>,
}

/// Construct and verify φ: F(G) → M where M is certified F-inverse and
/// X-generated via `assignment`. Requires the canonical group morphism
/// ν: G → M/σ to exist; given that, φ is built generator-first by closing
/// under the operations and then checked as a morphism of F-inverse
/// monoids, including commutation with ν at the group level.
pub fn universal_morphism(
    group: &XGroup,
    cert: &FInverseCert,
    assignment: &BTreeMap<Generator, usize>,
    cap: usize,
) -> Result<UniversalMorphism> {
    let m = cert.monoid();
    for (g, &v) in assignment {
        if v >= m.order() {
            return Err(Error::InvalidMonoid(format!(
                "generator `{g}` maps to {v}, out of range"
            )));
        }
    }
    let expected: Vec<&Generator> = assignment.keys().collect();
    if expected.len() != group.generators().len()
        || group.generators().iter().any(|g| !assignment.contains_key(g))
    {
        return Err(Error::InvalidMonoid(
            "assignment alphabet differs from the group's generators".into(),
        ));
    }
    // M must actually be generated by the assigned images.
    {
        let mut seen = vec![false; m.order()];
        seen[m.identity()] = true;
        let mut stack: Vec<usize> = vec![m.identity()];
        for &v in assignment.values() {
            if !seen[v] {
                seen[v] = true;
                stack.push(v);
            }
        }
        let mut reached: Vec<usize> = stack.clone();
        while let Some(a) = stack.pop() {
            for &b in [cert.inverse_of(a), cert.max_of(a)].iter() {
                if !seen[b] {
                    seen[b] = true;
                    stack.push(b);
                    reached.push(b);
                }
            }
            for i in 0..reached.len() {
                let c = reached[i];
                for p in [m.mul(a, c), m.mul(c, a)] {
                    if !seen[p] {
                        seen[p] = true;
                        stack.push(p);
                        reached.push(p);
                    }
                }
            }
        }
        if !seen.iter().all(|&s| s) {
            return Err(Error::InvalidMonoid(
                "assignment does not generate the monoid".into(),
            ));
        }
    }

    let quotient = cert.sigma().quotient_xgroup(assignment)?;
    let nu = CanonicalMorphism::build(group, &quotient)?;

    let elements = enumerate_f(group, cap)?;
    let index: HashMap<&FElement, usize> = elements.iter().zip(0..).collect();
    let at = |e: &FElement| -> usize { *index.get(e).expect("enumeration is closed") };

    let mut images: Vec<Option<usize>> = vec![None; elements.len()];
    let mut queue: VecDeque<usize> = VecDeque::new();
    let assign = |k: usize, v: usize, images: &mut Vec<Option<usize>>, queue: &mut VecDeque<usize>| -> Result<()> {
        match images[k] {
            None => {
                images[k] = Some(v);
                queue.push_back(k);
                Ok(())
            }
            Some(w) if w == v => Ok(()),
            Some(_) => Err(Error::ConsistencyFailure { element: k }),
        }
    };

    let id_idx = at(&FElement::identity(group));
    assign(id_idx, m.identity(), &mut images, &mut queue)?;
    for x in group.generators() {
        let gx = eval_word_m(
            group,
            &crate::word::InvWord::letter(crate::word::InvLetter::pos(x.clone())),
        )?;
        assign(at(&gx), assignment[x], &mut images, &mut queue)?;
    }

    // Pair closure: when an element pops, combine it with everything popped
    // before it, so every pair is covered exactly once.
    let mut processed: Vec<usize> = Vec::new();
    while let Some(i) = queue.pop_front() {
        let vi = images[i].expect("queued elements are assigned");
        let e = &elements[i];
        assign(at(&e.inverse(group)?), cert.inverse_of(vi), &mut images, &mut queue)?;
        assign(at(&e.max(group)?), cert.max_of(vi), &mut images, &mut queue)?;
        assign(at(&e.mul(group, e)?), m.mul(vi, vi), &mut images, &mut queue)?;
        for &j in &processed {
            let vj = images[j].expect("processed elements are assigned");
            let f = &elements[j];
            assign(at(&e.mul(group, f)?), m.mul(vi, vj), &mut images, &mut queue)?;
            assign(at(&f.mul(group, e)?), m.mul(vj, vi), &mut images, &mut queue)?;
        }
        processed.push(i);
    }

    let images: Vec<usize> = images
        .into_iter()
        .enumerate()
        .map(|(k, v)| v.ok_or(Error::ConsistencyFailure { element: k }))
        .collect::<Result<_>>()?;

    // Full verification: morphism of F-inverse monoids, and the square
    // with ν commutes (σ-class of the image is ν of the point).
    for (k, e) in elements.iter().enumerate() {
        if images[at(&e.inverse(group)?)] != cert.inverse_of(images[k])
            || images[at(&e.max(group)?)] != cert.max_of(images[k])
        {
            return Err(Error::ConsistencyFailure { element: k });
        }
        let down = cert.sigma().class_of(images[k]);
        let along = nu
            .apply(e.point())?
            .finite_index()
            .expect("quotient elements are finite");
        if down != along {
            return Err(Error::ConsistencyFailure { element: k });
        }
    }
    let pairs_ok = (0..elements.len()).into_par_iter().all(|i| {
        (0..elements.len()).all(|j| {
            let p = elements[i].mul(group, &elements[j]).expect("total product");
            images[at(&p)] == m.mul(images[i], images[j])
        })
    });
    if !pairs_ok {
        let (i, j) = (0..elements.len())
            .flat_map(|i| (0..elements.len()).map(move |j| (i, j)))
            .find(|&(i, j)| {
                let p = elements[i].mul(group, &elements[j]).expect("total product");
                images[at(&p)] != m.mul(images[i], images[j])
            })
            .expect("witness exists");
        let p = elements[i].mul(group, &elements[j])?;
        return Err(Error::ConsistencyFailure { element: at(&p) });
    }

    Ok(UniversalMorphism { elements, images })
}
