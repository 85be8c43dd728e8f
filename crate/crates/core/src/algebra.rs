//! Abstract (⨟, ∧, A)-algebras given by operation tables.
//!
//! Elements are indices into an ordered list of names. The names are only
//! used for display and file formats; every operation works on indices.
//!
//! The order is the one induced by the meet semilattice: `a ≤ b` iff
//! `a ∧ b = a`. The least element is read off the tables as `A(a) ⨟ a`,
//! which must not depend on `a`.

use std::collections::HashSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

/// Index of an element in a [`FiniteAlgebra`].
pub type Elem = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("an algebra needs at least one element")]
    Empty,
    #[error("duplicate element name {0:?}")]
    DuplicateName(String),
    #[error("{table} table has {found} entries, expected {expected}")]
    TableShape {
        table: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("{table} table entry {position} is {value}, but there are only {size} elements")]
    OutOfRange {
        table: &'static str,
        position: usize,
        value: usize,
        size: usize,
    },
    #[error("A(a)⨟a is not constant: it is element {za} for a = {a} but element {zb} for a = {b}")]
    InconsistentZero {
        a: Elem,
        b: Elem,
        za: Elem,
        zb: Elem,
    },
    #[error("the meet of the empty set is not defined")]
    EmptyMeet,
    #[error("the down-set of element {top} is not a Boolean algebra: {law} fails at {witness:?}")]
    NotBoolean {
        top: Elem,
        law: BooleanLaw,
        witness: Vec<Elem>,
    },
}

/// A finite algebra of the signature (⨟, ∧, A), stored as flat tables.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FiniteAlgebra {
    names: Vec<String>,
    compose: Vec<Elem>,
    meet: Vec<Elem>,
    antidomain: Vec<Elem>,
}

impl fmt::Debug for FiniteAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.len();
        let rows = |t: &[Elem]| -> Vec<Vec<Elem>> { t.chunks(n).map(|r| r.to_vec()).collect() };
        f.debug_struct("FiniteAlgebra")
            .field("names", &self.names)
            .field("compose", &rows(&self.compose))
            .field("meet", &rows(&self.meet))
            .field("antidomain", &self.antidomain)
            .finish()
    }
}

impl FiniteAlgebra {
    /// Builds an algebra from row-major tables. Row `i`, column `j` of
    /// `compose` is `i ⨟ j`.
    pub fn from_tables(
        names: Vec<String>,
        compose: Vec<Vec<Elem>>,
        meet: Vec<Vec<Elem>>,
        antidomain: Vec<Elem>,
    ) -> Result<Self, AlgebraError> {
        let n = names.len();
        let flatten = |table: &'static str, rows: Vec<Vec<Elem>>| {
            if rows.len() != n {
                return Err(AlgebraError::TableShape {
                    table,
                    expected: n,
                    found: rows.len(),
                });
            }
            let mut flat = Vec::with_capacity(n * n);
            for row in rows {
                if row.len() != n {
                    return Err(AlgebraError::TableShape {
                        table,
                        expected: n,
                        found: row.len(),
                    });
                }
                flat.extend(row);
            }
            Ok(flat)
        };
        let compose = flatten("compose", compose)?;
        let meet = flatten("meet", meet)?;
        Self::from_flat(names, compose, meet, antidomain)
    }

    /// Builds an algebra from flat row-major tables (`n * n` entries for the
    /// binary operations).
    pub fn from_flat(
        names: Vec<String>,
        compose: Vec<Elem>,
        meet: Vec<Elem>,
        antidomain: Vec<Elem>,
    ) -> Result<Self, AlgebraError> {
        let n = names.len();
        if n == 0 {
            return Err(AlgebraError::Empty);
        }
        let mut seen = HashSet::with_capacity(n);
        for name in &names {
            if !seen.insert(name.as_str()) {
                return Err(AlgebraError::DuplicateName(name.clone()));
            }
        }
        for (table, values, expected) in [
            ("compose", &compose, n * n),
            ("meet", &meet, n * n),
            ("antidomain", &antidomain, n),
        ] {
            if values.len() != expected {
                return Err(AlgebraError::TableShape {
                    table,
                    expected,
                    found: values.len(),
                });
            }
            if let Some((position, &value)) = values.iter().enumerate().find(|(_, &v)| v >= n) {
                return Err(AlgebraError::OutOfRange {
                    table,
                    position,
                    value,
                    size: n,
                });
            }
        }
        Ok(FiniteAlgebra {
            names,
            compose,
            meet,
            antidomain,
        })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    /// Always false: algebras are nonempty.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, a: Elem) -> &str {
        &self.names[a]
    }

    pub fn index_of(&self, name: &str) -> Option<Elem> {
        self.names.iter().position(|n| n == name)
    }

    #[inline]
    pub fn compose(&self, a: Elem, b: Elem) -> Elem {
        self.compose[a * self.len() + b]
    }

    #[inline]
    pub fn meet(&self, a: Elem, b: Elem) -> Elem {
        self.meet[a * self.len() + b]
    }

    #[inline]
    pub fn antidomain(&self, a: Elem) -> Elem {
        self.antidomain[a]
    }

    pub fn compose_table(&self) -> &[Elem] {
        &self.compose
    }

    pub fn meet_table(&self) -> &[Elem] {
        &self.meet
    }

    pub fn antidomain_table(&self) -> &[Elem] {
        &self.antidomain
    }

    /// `D(a) = A(A(a))`.
    pub fn domain_of(&self, a: Elem) -> Elem {
        self.antidomain(self.antidomain(a))
    }

    /// `a ≤ b` in the meet order.
    #[inline]
    pub fn leq(&self, a: Elem, b: Elem) -> bool {
        self.meet(a, b) == a
    }

    /// The least element `A(a) ⨟ a`, checked to be independent of `a`.
    pub fn zero(&self) -> Result<Elem, AlgebraError> {
        let z = self.bottom();
        for a in self.elements() {
            let za = self.compose(self.antidomain(a), a);
            if za != z {
                return Err(AlgebraError::InconsistentZero {
                    a: 0,
                    b: a,
                    za: z,
                    zb: za,
                });
            }
        }
        Ok(z)
    }

    /// `A(e₀) ⨟ e₀` for the first element, without checking consistency.
    /// Equal to [`zero`](Self::zero) on every valid algebra.
    #[inline]
    pub fn bottom(&self) -> Elem {
        self.compose(self.antidomain(0), 0)
    }

    pub fn validate(&self) -> ValidationReport {
        let mut failures = Vec::new();
        for law in Law::ALL {
            if let Some(witness) = law.first_violation(self) {
                failures.push(LawFailure { law, witness });
            }
        }
        ValidationReport {
            passed: failures.is_empty(),
            failures,
        }
    }

    /// Minimal nonzero elements.
    pub fn atoms(&self) -> Vec<Elem> {
        let z = self.bottom();
        self.elements()
            .filter(|&a| a != z)
            .filter(|&a| !self.elements().any(|b| b != z && b != a && self.leq(b, a)))
            .collect()
    }

    /// Every nonzero element lies above some atom.
    pub fn is_atomic(&self) -> bool {
        let z = self.bottom();
        let atoms = self.atoms();
        self.elements()
            .filter(|&a| a != z)
            .all(|a| atoms.iter().any(|&x| self.leq(x, a)))
    }

    /// Every element is the join of the atoms below it.
    pub fn is_atomistic(&self) -> bool {
        let atoms = self.atoms();
        self.elements().all(|a| {
            let below: Vec<Elem> = atoms.iter().copied().filter(|&x| self.leq(x, a)).collect();
            self.join(&below) == Some(a)
        })
    }

    /// Least upper bound of `set`, if one exists. The join of the empty set
    /// is the least element.
    pub fn join(&self, set: &[Elem]) -> Option<Elem> {
        let upper: Vec<Elem> = self
            .elements()
            .filter(|&u| set.iter().all(|&s| self.leq(s, u)))
            .collect();
        upper
            .iter()
            .copied()
            .find(|&u| upper.iter().all(|&v| self.leq(u, v)))
    }

    /// Greatest lower bound of a nonempty `set`, if one exists.
    pub fn meet_set(&self, set: &[Elem]) -> Result<Option<Elem>, AlgebraError> {
        if set.is_empty() {
            return Err(AlgebraError::EmptyMeet);
        }
        let lower: Vec<Elem> = self
            .elements()
            .filter(|&l| set.iter().all(|&s| self.leq(l, s)))
            .collect();
        Ok(lower
            .iter()
            .copied()
            .find(|&l| lower.iter().all(|&v| self.leq(v, l))))
    }

    /// The down-set `↓top` with complement `b ↦ A(b) ⨟ top`, checked to be a
    /// Boolean algebra.
    pub fn downset_boolean(&self, top: Elem) -> Result<BooleanView, AlgebraError> {
        let bottom = self.bottom();
        let carrier: Vec<Elem> = self.elements().filter(|&b| self.leq(b, top)).collect();
        let complement: Vec<Elem> = carrier
            .iter()
            .map(|&b| self.compose(self.antidomain(b), top))
            .collect();
        let view = BooleanView {
            top,
            bottom,
            carrier,
            complement,
        };
        view.check(self)?;
        Ok(view)
    }

    /// Checks the sentence φ: for all `a, b, c`, if `c ≥ a ⨟ x` for every
    /// atom `x ≤ b`, then `c ≥ a ⨟ b`.
    pub fn check_phi(&self) -> Result<(), PhiViolation> {
        let atoms = self.atoms();
        let below: Vec<Vec<Elem>> = self
            .elements()
            .map(|b| atoms.iter().copied().filter(|&x| self.leq(x, b)).collect())
            .collect();
        for a in self.elements() {
            for b in self.elements() {
                let ab = self.compose(a, b);
                for c in self.elements() {
                    let premise = below[b].iter().all(|&x| self.leq(self.compose(a, x), c));
                    if premise && !self.leq(ab, c) {
                        return Err(PhiViolation { a, b, c });
                    }
                }
            }
        }
        Ok(())
    }

    /// Componentwise product on the Cartesian product of the element lists.
    /// The pair `(i, j)` has index `i * other.len() + j`.
    pub fn direct_product(&self, other: &FiniteAlgebra) -> FiniteAlgebra {
        let (n1, n2) = (self.len(), other.len());
        let n = n1 * n2;
        let pair = |i: Elem, j: Elem| i * n2 + j;
        let split = |p: Elem| (p / n2, p % n2);
        let mut names = Vec::with_capacity(n);
        let mut antidomain = Vec::with_capacity(n);
        for i in 0..n1 {
            for j in 0..n2 {
                names.push(format!("({},{})", self.name(i), other.name(j)));
                antidomain.push(pair(self.antidomain(i), other.antidomain(j)));
            }
        }
        let mut compose = Vec::with_capacity(n * n);
        let mut meet = Vec::with_capacity(n * n);
        for p in 0..n {
            let (i, j) = split(p);
            for q in 0..n {
                let (k, l) = split(q);
                compose.push(pair(self.compose(i, k), other.compose(j, l)));
                meet.push(pair(self.meet(i, k), other.meet(j, l)));
            }
        }
        FiniteAlgebra::from_flat(names, compose, meet, antidomain)
            .expect("product of well-formed tables is well-formed")
    }

    /// The powerset Boolean algebra on `atom_count` atoms, with ⨟ and ∧ both
    /// intersection and A the complement. Element `i` is the subset with
    /// bitmask `i`.
    pub fn boolean_as_algebra(atom_count: u32) -> FiniteAlgebra {
        assert!(
            atom_count <= 12,
            "powerset of {atom_count} atoms is too large"
        );
        let n = 1usize << atom_count;
        let full = n - 1;
        let names = (0..n)
            .map(|mask| {
                let members: Vec<String> = (0..atom_count)
                    .filter(|bit| mask & (1 << bit) != 0)
                    .map(|bit| bit.to_string())
                    .collect();
                format!("{{{}}}", members.join(","))
            })
            .collect();
        let mut meet = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                meet.push(a & b);
            }
        }
        let antidomain = (0..n).map(|a| full & !a).collect();
        FiniteAlgebra::from_flat(names, meet.clone(), meet, antidomain)
            .expect("powerset tables are well-formed")
    }

    /// Returns a copy with the element names replaced.
    pub fn with_names(&self, names: Vec<String>) -> Result<FiniteAlgebra, AlgebraError> {
        FiniteAlgebra::from_flat(
            names,
            self.compose.clone(),
            self.meet.clone(),
            self.antidomain.clone(),
        )
    }

    /// Searches for an isomorphism `self → other`, returned as the image of
    /// each element.
    ///
    /// When both algebras are atomistic the search matches atoms (an
    /// isomorphism of atomistic algebras is fixed by its action on atoms);
    /// otherwise it falls back to matching all elements.
    pub fn isomorphism(&self, other: &FiniteAlgebra) -> Option<Vec<Elem>> {
        if self.len() != other.len() {
            return None;
        }
        if self.is_atomistic() && other.is_atomistic() {
            iso::by_atoms(self, other)
        } else {
            iso::by_elements(self, other)
        }
    }

    /// True when `map` is a bijective homomorphism `self → other`.
    pub fn is_isomorphism(&self, other: &FiniteAlgebra, map: &[Elem]) -> bool {
        if map.len() != self.len() || self.len() != other.len() {
            return false;
        }
        let mut hit = vec![false; other.len()];
        for &m in map {
            if m >= other.len() || std::mem::replace(&mut hit[m], true) {
                return false;
            }
        }
        self.elements().all(|a| {
            map[self.antidomain(a)] == other.antidomain(map[a])
                && self.elements().all(|b| {
                    map[self.compose(a, b)] == other.compose(map[a], map[b])
                        && map[self.meet(a, b)] == other.meet(map[a], map[b])
                })
        })
    }
}

/// Outcome of [`FiniteAlgebra::validate`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub passed: bool,
    pub failures: Vec<LawFailure>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LawFailure {
    pub law: Law,
    pub witness: Vec<Elem>,
}

/// The laws [`FiniteAlgebra::validate`] checks.
///
/// This is a working selection, not an independent axiom system: the
/// semilattice laws for ∧ and the behaviour of the derived zero. Anything
/// stronger is left to the representation module.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Law {
    /// `a ∧ a = a`, witness `[a]`.
    MeetIdempotent,
    /// `a ∧ b = b ∧ a`, witness `[a, b]`.
    MeetCommutative,
    /// `(a ∧ b) ∧ c = a ∧ (b ∧ c)`, witness `[a, b, c]`.
    MeetAssociative,
    /// `A(a) ⨟ a = A(e₀) ⨟ e₀`, witness `[a]`.
    ZeroConsistent,
    /// `z ∧ a = z` for `z = A(e₀) ⨟ e₀`, witness `[a]`.
    ZeroMeetAbsorbing,
    /// `z ⨟ a = z`, witness `[a]`.
    ZeroLeftAbsorbing,
    /// `a ⨟ z = z`, witness `[a]`.
    ZeroRightAbsorbing,
}

impl Law {
    pub const ALL: [Law; 7] = [
        Law::MeetIdempotent,
        Law::MeetCommutative,
        Law::MeetAssociative,
        Law::ZeroConsistent,
        Law::ZeroMeetAbsorbing,
        Law::ZeroLeftAbsorbing,
        Law::ZeroRightAbsorbing,
    ];

    pub fn arity(self) -> usize {
        match self {
            Law::MeetCommutative => 2,
            Law::MeetAssociative => 3,
            _ => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Law::MeetIdempotent => "meet-idempotent",
            Law::MeetCommutative => "meet-commutative",
            Law::MeetAssociative => "meet-associative",
            Law::ZeroConsistent => "zero-consistent",
            Law::ZeroMeetAbsorbing => "zero-meet-absorbing",
            Law::ZeroLeftAbsorbing => "zero-left-absorbing",
            Law::ZeroRightAbsorbing => "zero-right-absorbing",
        }
    }

    /// Evaluates the law at one witness tuple.
    pub fn holds_at(self, alg: &FiniteAlgebra, w: &[Elem]) -> bool {
        let z = alg.bottom();
        match self {
            Law::MeetIdempotent => alg.meet(w[0], w[0]) == w[0],
            Law::MeetCommutative => alg.meet(w[0], w[1]) == alg.meet(w[1], w[0]),
            Law::MeetAssociative => {
                alg.meet(alg.meet(w[0], w[1]), w[2]) == alg.meet(w[0], alg.meet(w[1], w[2]))
            }
            Law::ZeroConsistent => alg.compose(alg.antidomain(w[0]), w[0]) == z,
            Law::ZeroMeetAbsorbing => alg.meet(z, w[0]) == z,
            Law::ZeroLeftAbsorbing => alg.compose(z, w[0]) == z,
            Law::ZeroRightAbsorbing => alg.compose(w[0], z) == z,
        }
    }

    /// Lexicographically least violating tuple.
    pub fn first_violation(self, alg: &FiniteAlgebra) -> Option<Vec<Elem>> {
        let n = alg.len();
        match self.arity() {
            1 => (0..n).find(|&a| !self.holds_at(alg, &[a])).map(|a| vec![a]),
            2 => (0..n)
                .flat_map(|a| (0..n).map(move |b| [a, b]))
                .find(|w| !self.holds_at(alg, w))
                .map(|w| w.to_vec()),
            _ => (0..n)
                .flat_map(|a| (0..n).flat_map(move |b| (0..n).map(move |c| [a, b, c])))
                .find(|w| !self.holds_at(alg, w))
                .map(|w| w.to_vec()),
        }
    }
}

impl fmt::Display for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A failure of the sentence φ at `(a, b, c)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PhiViolation {
    pub a: Elem,
    pub b: Elem,
    pub c: Elem,
}

/// The Boolean algebra `(↓top, ∧, ', 0, top)` with `b' = A(b) ⨟ top`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BooleanView {
    pub top: Elem,
    pub bottom: Elem,
    /// Elements of `↓top` in increasing index order.
    pub carrier: Vec<Elem>,
    /// `complement[i]` is the complement of `carrier[i]`.
    pub complement: Vec<Elem>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BooleanLaw {
    ComplementClosed,
    MeetClosed,
    BottomIncluded,
    ComplementMeet,
    ComplementJoin,
    Involution,
    Antitone,
    Distributive,
}

impl fmt::Display for BooleanLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            BooleanLaw::ComplementClosed => "complement-closed",
            BooleanLaw::MeetClosed => "meet-closed",
            BooleanLaw::BottomIncluded => "bottom-included",
            BooleanLaw::ComplementMeet => "b ∧ b' = 0",
            BooleanLaw::ComplementJoin => "b ∨ b' = top",
            BooleanLaw::Involution => "b'' = b",
            BooleanLaw::Antitone => "b ≤ c ⇒ c' ≤ b'",
            BooleanLaw::Distributive => "b ∧ (c ∨ d) = (b ∧ c) ∨ (b ∧ d)",
        };
        f.write_str(s)
    }
}

impl BooleanView {
    pub fn len(&self) -> usize {
        self.carrier.len()
    }

    pub fn is_empty(&self) -> bool {
        self.carrier.is_empty()
    }

    pub fn contains(&self, b: Elem) -> bool {
        self.carrier.binary_search(&b).is_ok()
    }

    /// Complement of a carrier element; `None` outside the carrier.
    pub fn complement_of(&self, b: Elem) -> Option<Elem> {
        self.carrier
            .binary_search(&b)
            .ok()
            .map(|i| self.complement[i])
    }

    /// `b ∨ c = (b' ∧ c')'`.
    pub fn join(&self, alg: &FiniteAlgebra, b: Elem, c: Elem) -> Option<Elem> {
        let m = alg.meet(self.complement_of(b)?, self.complement_of(c)?);
        self.complement_of(m)
    }

    fn check(&self, alg: &FiniteAlgebra) -> Result<(), AlgebraError> {
        let fail = |law, witness: Vec<Elem>| AlgebraError::NotBoolean {
            top: self.top,
            law,
            witness,
        };
        if !self.contains(self.bottom) {
            return Err(fail(BooleanLaw::BottomIncluded, vec![self.bottom]));
        }
        for (&b, &nb) in self.carrier.iter().zip(&self.complement) {
            if !self.contains(nb) {
                return Err(fail(BooleanLaw::ComplementClosed, vec![b]));
            }
        }
        for &b in &self.carrier {
            for &c in &self.carrier {
                if !self.contains(alg.meet(b, c)) {
                    return Err(fail(BooleanLaw::MeetClosed, vec![b, c]));
                }
            }
        }
        for &b in &self.carrier {
            let nb = self.complement_of(b).expect("closed");
            if alg.meet(b, nb) != self.bottom {
                return Err(fail(BooleanLaw::ComplementMeet, vec![b]));
            }
            if self.complement_of(nb) != Some(b) {
                return Err(fail(BooleanLaw::Involution, vec![b]));
            }
            if self.join(alg, b, nb) != Some(self.top) {
                return Err(fail(BooleanLaw::ComplementJoin, vec![b]));
            }
        }
        for &b in &self.carrier {
            for &c in &self.carrier {
                if alg.leq(b, c) {
                    let (nb, nc) = (
                        self.complement_of(b).unwrap(),
                        self.complement_of(c).unwrap(),
                    );
                    if !alg.leq(nc, nb) {
                        return Err(fail(BooleanLaw::Antitone, vec![b, c]));
                    }
                }
            }
        }
        for &b in &self.carrier {
            for &c in &self.carrier {
                for &d in &self.carrier {
                    let lhs = alg.meet(b, self.join(alg, c, d).unwrap());
                    let rhs = self.join(alg, alg.meet(b, c), alg.meet(b, d));
                    if rhs != Some(lhs) {
                        return Err(fail(BooleanLaw::Distributive, vec![b, c, d]));
                    }
                }
            }
        }
        Ok(())
    }
}

mod iso {
    use super::{Elem, FiniteAlgebra};

    const NONE: Elem = usize::MAX;

    /// Cheap invariants an isomorphism must preserve.
    fn signature(alg: &FiniteAlgebra, a: Elem) -> (usize, usize, bool, bool, bool) {
        let above = alg.elements().filter(|&b| alg.leq(a, b)).count();
        let below = alg.elements().filter(|&b| alg.leq(b, a)).count();
        let z = alg.bottom();
        (
            above,
            below,
            alg.domain_of(a) == a,
            alg.compose(a, a) == z,
            alg.compose(a, a) == a,
        )
    }

    pub(super) fn by_atoms(left: &FiniteAlgebra, right: &FiniteAlgebra) -> Option<Vec<Elem>> {
        let la = left.atoms();
        let ra = right.atoms();
        if la.len() != ra.len() {
            return None;
        }
        let lsig: Vec<_> = la.iter().map(|&x| signature(left, x)).collect();
        let rsig: Vec<_> = ra.iter().map(|&x| signature(right, x)).collect();
        let mut image = vec![NONE; la.len()];
        let mut used = vec![false; ra.len()];
        let mut found = None;
        assign_atom(
            left, right, &la, &ra, &lsig, &rsig, 0, &mut image, &mut used, &mut found,
        );
        found
    }

    #[allow(clippy::too_many_arguments)]
    fn assign_atom(
        left: &FiniteAlgebra,
        right: &FiniteAlgebra,
        la: &[Elem],
        ra: &[Elem],
        lsig: &[(usize, usize, bool, bool, bool)],
        rsig: &[(usize, usize, bool, bool, bool)],
        i: usize,
        image: &mut [usize],
        used: &mut [bool],
        found: &mut Option<Vec<Elem>>,
    ) {
        if found.is_some() {
            return;
        }
        if i == la.len() {
            *found = extend(left, right, la, ra, image);
            return;
        }
        let (lz, rz) = (left.bottom(), right.bottom());
        for j in 0..ra.len() {
            if used[j] || lsig[i] != rsig[j] {
                continue;
            }
            // Products of assigned atoms must agree on being zero.
            let consistent = (0..i).all(|k| {
                let jk = image[k];
                (left.compose(la[i], la[k]) == lz) == (right.compose(ra[j], ra[jk]) == rz)
                    && (left.compose(la[k], la[i]) == lz) == (right.compose(ra[jk], ra[j]) == rz)
            });
            if !consistent {
                continue;
            }
            image[i] = j;
            used[j] = true;
            assign_atom(left, right, la, ra, lsig, rsig, i + 1, image, used, found);
            used[j] = false;
            image[i] = NONE;
            if found.is_some() {
                return;
            }
        }
    }

    fn extend(
        left: &FiniteAlgebra,
        right: &FiniteAlgebra,
        la: &[Elem],
        ra: &[Elem],
        image: &[usize],
    ) -> Option<Vec<Elem>> {
        let mut map = Vec::with_capacity(left.len());
        for a in left.elements() {
            let targets: Vec<Elem> = la
                .iter()
                .zip(image)
                .filter(|(&x, _)| left.leq(x, a))
                .map(|(_, &j)| ra[j])
                .collect();
            map.push(right.join(&targets)?);
        }
        left.is_isomorphism(right, &map).then_some(map)
    }

    pub(super) fn by_elements(left: &FiniteAlgebra, right: &FiniteAlgebra) -> Option<Vec<Elem>> {
        let lsig: Vec<_> = left.elements().map(|a| signature(left, a)).collect();
        let rsig: Vec<_> = right.elements().map(|a| signature(right, a)).collect();
        let mut map = vec![NONE; left.len()];
        let mut used = vec![false; right.len()];
        if assign_elem(left, right, &lsig, &rsig, 0, &mut map, &mut used) {
            Some(map)
        } else {
            None
        }
    }

    fn assign_elem(
        left: &FiniteAlgebra,
        right: &FiniteAlgebra,
        lsig: &[(usize, usize, bool, bool, bool)],
        rsig: &[(usize, usize, bool, bool, bool)],
        a: Elem,
        map: &mut [Elem],
        used: &mut [bool],
    ) -> bool {
        if a == left.len() {
            return left.is_isomorphism(right, map);
        }
        for b in right.elements() {
            if used[b] || lsig[a] != rsig[b] {
                continue;
            }
            map[a] = b;
            // Check every operation whose inputs and output are already mapped.
            let ok = (0..=a).all(|x| {
                let ad = left.antidomain(x);
                (ad > a || map[ad] == right.antidomain(map[x]))
                    && (0..=a).all(|y| {
                        let c = left.compose(x, y);
                        let m = left.meet(x, y);
                        (c > a || map[c] == right.compose(map[x], map[y]))
                            && (m > a || map[m] == right.meet(map[x], map[y]))
                    })
            });
            if ok {
                used[b] = true;
                if assign_elem(left, right, lsig, rsig, a + 1, map, used) {
                    return true;
                }
                used[b] = false;
            }
            map[a] = NONE;
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trivial() -> FiniteAlgebra {
        FiniteAlgebra::from_flat(vec!["0".into()], vec![0], vec![0], vec![0]).unwrap()
    }

    #[test]
    fn one_element_algebra_is_valid() {
        let alg = trivial();
        assert!(alg.validate().passed);
        assert_eq!(alg.zero(), Ok(0));
        assert!(alg.atoms().is_empty());
        assert!(alg.is_atomic());
        assert!(alg.is_atomistic());
        assert!(alg.check_phi().is_ok());
        assert_eq!(alg.downset_boolean(0).unwrap().len(), 1);
    }

    #[test]
    fn non_commutative_meet_is_reported() {
        // meet(0,1) = 0 but meet(1,0) = 1.
        let alg = FiniteAlgebra::from_tables(
            vec!["0".into(), "1".into()],
            vec![vec![0, 0], vec![0, 0]],
            vec![vec![0, 0], vec![1, 1]],
            vec![1, 0],
        )
        .unwrap();
        let report = alg.validate();
        assert!(!report.passed);
        let failure = report
            .failures
            .iter()
            .find(|f| f.law == Law::MeetCommutative)
            .unwrap();
        assert_eq!(failure.witness, vec![0, 1]);
        for f in &report.failures {
            assert!(!f.law.holds_at(&alg, &f.witness), "{f:?} does not replay");
        }
    }

    #[test]
    fn malformed_tables_are_rejected() {
        let err = FiniteAlgebra::from_tables(
            vec!["0".into(), "1".into()],
            vec![vec![0, 0], vec![0]],
            vec![vec![0, 0], vec![0, 1]],
            vec![1, 0],
        )
        .unwrap_err();
        assert!(matches!(
            err,
            AlgebraError::TableShape {
                table: "compose",
                ..
            }
        ));
        let err =
            FiniteAlgebra::from_flat(vec!["0".into()], vec![3], vec![0], vec![0]).unwrap_err();
        assert!(matches!(err, AlgebraError::OutOfRange { .. }));
        assert_eq!(
            FiniteAlgebra::from_flat(vec![], vec![], vec![], vec![]).unwrap_err(),
            AlgebraError::Empty
        );
    }

    #[test]
    fn inconsistent_zero_is_an_error() {
        // A(1) ⨟ 1 = 1 while A(0) ⨟ 0 = 0.
        let alg = FiniteAlgebra::from_tables(
            vec!["0".into(), "1".into()],
            vec![vec![0, 1], vec![0, 1]],
            vec![vec![0, 0], vec![0, 1]],
            vec![1, 1],
        )
        .unwrap();
        assert!(matches!(
            alg.zero(),
            Err(AlgebraError::InconsistentZero { .. })
        ));
        assert!(alg
            .validate()
            .failures
            .iter()
            .any(|f| f.law == Law::ZeroConsistent));
    }

    #[test]
    fn boolean_algebras() {
        let b0 = FiniteAlgebra::boolean_as_algebra(0);
        assert_eq!(b0.len(), 1);
        let b1 = FiniteAlgebra::boolean_as_algebra(1);
        assert_eq!(b1.len(), 2);
        assert_eq!(b1.antidomain(1), 0);
        assert_eq!(b1.atoms(), vec![1]);
        let b3 = FiniteAlgebra::boolean_as_algebra(3);
        assert_eq!(b3.len(), 8);
        assert_eq!(b3.atoms(), vec![1, 2, 4]);
        assert!(b3.validate().passed);
        assert!(b3.check_phi().is_ok());
        assert!(b3.is_atomistic());
        let top = b3.downset_boolean(7).unwrap();
        assert_eq!(top.len(), 8);
        for (&b, &nb) in top.carrier.iter().zip(&top.complement) {
            assert_eq!(nb, 7 & !b);
        }
        assert_eq!(b3.downset_boolean(0).unwrap().len(), 1);
    }

    #[test]
    fn order_basics() {
        let b2 = FiniteAlgebra::boolean_as_algebra(2);
        for a in b2.elements() {
            assert!(b2.leq(0, a));
            assert!(b2.leq(a, a));
            assert_eq!(b2.domain_of(a), a);
        }
        assert_eq!(b2.domain_of(0), 0);
        assert_eq!(b2.join(&[]), Some(0));
        assert_eq!(b2.join(&[1, 2]), Some(3));
        assert_eq!(b2.meet_set(&[2]), Ok(Some(2)));
        assert_eq!(b2.meet_set(&[]), Err(AlgebraError::EmptyMeet));
    }

    #[test]
    fn join_may_not_exist() {
        // 0 < 1, 0 < 2, with 1 and 2 both below 3 and 4: no least upper bound.
        let leq = |a: usize, b: usize| a == b || a == 0 || (b >= 3 && (a == 1 || a == 2));
        let n = 5;
        let mut meet = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                let lower: Vec<usize> = (0..n).filter(|&l| leq(l, a) && leq(l, b)).collect();
                meet[a * n + b] = *lower
                    .iter()
                    .find(|&&l| lower.iter().all(|&m| leq(m, l)))
                    .unwrap_or(&0);
            }
        }
        let names = (0..n).map(|i| i.to_string()).collect();
        let alg = FiniteAlgebra::from_flat(names, vec![0; n * n], meet, vec![0; n]).unwrap();
        assert_eq!(alg.join(&[1, 2]), None);
        assert_eq!(alg.meet_set(&[3, 4]), Ok(None));
    }

    #[test]
    fn products() {
        let b1 = FiniteAlgebra::boolean_as_algebra(1);
        let p = b1.direct_product(&b1);
        assert_eq!(p.len(), 4);
        let b2 = FiniteAlgebra::boolean_as_algebra(2);
        assert!(p.isomorphism(&b2).is_some());
        let b3 = FiniteAlgebra::boolean_as_algebra(3);
        let q = b3.direct_product(&trivial());
        let map = q.isomorphism(&b3).unwrap();
        assert!(q.is_isomorphism(&b3, &map));
        assert!(b2.isomorphism(&b3).is_none());
    }

    #[test]
    fn corrupted_compose_breaks_phi() {
        // In B2, make {0} ⨟ {0,1} = {0,1} although the atoms below {0,1}
        // only give {0}.
        let b2 = FiniteAlgebra::boolean_as_algebra(2);
        let mut compose = b2.compose_table().to_vec();
        compose[4 + 3] = 3;
        let bad = FiniteAlgebra::from_flat(
            b2.names().to_vec(),
            compose,
            b2.meet_table().to_vec(),
            b2.antidomain_table().to_vec(),
        )
        .unwrap();
        let v = bad.check_phi().unwrap_err();
        // Replay: premise holds but conclusion fails.
        let atoms = bad.atoms();
        assert!(atoms
            .iter()
            .filter(|&&x| bad.leq(x, v.b))
            .all(|&x| bad.leq(bad.compose(v.a, x), v.c)));
        assert!(!bad.leq(bad.compose(v.a, v.b), v.c));
    }
}
