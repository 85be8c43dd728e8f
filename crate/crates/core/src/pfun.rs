//! Partial functions on a finite base and the algebras they form.
//!
//! A base is a list of point names; functions refer to points by index, so
//! two functions with the same graph are structurally equal. Composition is
//! left to right: `(f ⨟ g)(x) = g(f(x))`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{Elem, FiniteAlgebra};

pub const DEFAULT_CLOSURE_CAP: usize = 10_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PfunError {
    #[error("functions live on bases of different sizes ({0} and {1})")]
    BaseMismatch(usize, usize),
    #[error("point {point} is outside a base of {base} points")]
    PointOutOfRange { point: usize, base: usize },
    #[error("relation is not functional at point {0}")]
    NotFunctional(usize),
    #[error("closure exceeded {0} functions")]
    SizeLimitExceeded(usize),
    #[error("signature lacks {0}, which this operation needs")]
    MissingOperation(Op),
    #[error("function set is not closed: {op} of {args:?} is missing")]
    NotClosed { op: Op, args: Vec<usize> },
    #[error("function set contains a duplicate at positions {0} and {1}")]
    DuplicateFunction(usize, usize),
    #[error("{0} names for {1} functions")]
    NameCount(usize, usize),
    #[error("representation has not been verified")]
    Unverified,
}

/// A partial function on the base `{0, …, n-1}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartialFunction {
    map: Vec<Option<u32>>,
}

impl fmt::Debug for PartialFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set()
            .entries(self.pairs().map(|(x, y)| format!("{x}→{y}")))
            .finish()
    }
}

impl PartialFunction {
    /// Builds a function from its graph, rejecting non-functional relations
    /// and points outside the base.
    pub fn from_pairs(
        base_len: usize,
        pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, PfunError> {
        let mut map = vec![None; base_len];
        for (x, y) in pairs {
            for p in [x, y] {
                if p >= base_len {
                    return Err(PfunError::PointOutOfRange {
                        point: p,
                        base: base_len,
                    });
                }
            }
            match map[x] {
                Some(old) if old as usize != y => return Err(PfunError::NotFunctional(x)),
                _ => map[x] = Some(y as u32),
            }
        }
        Ok(PartialFunction { map })
    }

    /// Builds a function from `map[x] = f(x)`.
    pub fn from_map(map: Vec<Option<usize>>) -> Result<Self, PfunError> {
        let n = map.len();
        let map = map
            .into_iter()
            .map(|y| match y {
                Some(y) if y >= n => Err(PfunError::PointOutOfRange { point: y, base: n }),
                y => Ok(y.map(|y| y as u32)),
            })
            .collect::<Result<_, _>>()?;
        Ok(PartialFunction { map })
    }

    pub fn empty(base_len: usize) -> Self {
        PartialFunction {
            map: vec![None; base_len],
        }
    }

    pub fn identity(base_len: usize) -> Self {
        PartialFunction {
            map: (0..base_len as u32).map(Some).collect(),
        }
    }

    /// The identity restricted to `points`.
    pub fn diagonal(base_len: usize, points: impl IntoIterator<Item = usize>) -> Self {
        let mut f = Self::empty(base_len);
        for p in points {
            f.map[p] = Some(p as u32);
        }
        f
    }

    pub fn base_len(&self) -> usize {
        self.map.len()
    }

    pub fn apply(&self, x: usize) -> Option<usize> {
        self.map[x].map(|y| y as usize)
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.map
            .iter()
            .enumerate()
            .filter_map(|(x, y)| y.map(|y| (x, y as usize)))
    }

    /// Number of pairs in the graph.
    pub fn len(&self) -> usize {
        self.map.iter().filter(|y| y.is_some()).count()
    }

    pub fn is_empty(&self) -> bool {
        self.map.iter().all(Option::is_none)
    }

    pub fn contains(&self, (x, y): (usize, usize)) -> bool {
        x < self.map.len() && self.map[x] == Some(y as u32)
    }

    /// Graph inclusion.
    pub fn is_subset_of(&self, other: &PartialFunction) -> bool {
        self.map.len() == other.map.len()
            && self
                .map
                .iter()
                .zip(&other.map)
                .all(|(a, b)| a.is_none() || a == b)
    }

    fn same_base(&self, other: &PartialFunction) -> Result<(), PfunError> {
        if self.map.len() == other.map.len() {
            Ok(())
        } else {
            Err(PfunError::BaseMismatch(self.map.len(), other.map.len()))
        }
    }

    /// `{(x, z) | ∃y. (x, y) ∈ self, (y, z) ∈ other}`.
    pub fn compose(&self, other: &PartialFunction) -> Result<Self, PfunError> {
        self.same_base(other)?;
        Ok(PartialFunction {
            map: self
                .map
                .iter()
                .map(|y| y.and_then(|y| other.map[y as usize]))
                .collect(),
        })
    }

    pub fn intersect(&self, other: &PartialFunction) -> Result<Self, PfunError> {
        self.same_base(other)?;
        Ok(PartialFunction {
            map: self
                .map
                .iter()
                .zip(&other.map)
                .map(|(a, b)| if a == b { *a } else { None })
                .collect(),
        })
    }

    /// Identity on the points where `self` is undefined.
    pub fn antidomain(&self) -> Self {
        PartialFunction {
            map: self
                .map
                .iter()
                .enumerate()
                .map(|(x, y)| if y.is_none() { Some(x as u32) } else { None })
                .collect(),
        }
    }

    /// Identity on the points where `self` is defined.
    pub fn domain_diag(&self) -> Self {
        PartialFunction {
            map: self
                .map
                .iter()
                .enumerate()
                .map(|(x, y)| y.map(|_| x as u32))
                .collect(),
        }
    }

    /// Identity on the image of `self`.
    pub fn range_diag(&self) -> Self {
        Self::diagonal(self.base_len(), self.pairs().map(|(_, y)| y))
    }

    /// Union of two graphs, if it is still a function.
    pub fn union(&self, other: &PartialFunction) -> Result<Self, PfunError> {
        self.same_base(other)?;
        let mut map = self.map.clone();
        for (x, y) in other.map.iter().enumerate() {
            match (map[x], y) {
                (Some(a), Some(b)) if a != *b => return Err(PfunError::NotFunctional(x)),
                (None, Some(_)) => map[x] = *y,
                _ => {}
            }
        }
        Ok(PartialFunction { map })
    }

    /// Moves the function onto a base of `new_len` points, shifting every
    /// point by `offset`.
    pub fn shifted(&self, offset: usize, new_len: usize) -> Self {
        assert!(offset + self.base_len() <= new_len);
        let mut map = vec![None; new_len];
        for (x, y) in self.pairs() {
            map[x + offset] = Some((y + offset) as u32);
        }
        PartialFunction { map }
    }
}

/// The operation symbols a concrete algebra can be closed under.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Op {
    Compose,
    Meet,
    Zero,
    Id,
    Domain,
    Range,
    Antidomain,
}

impl Op {
    pub const ALL: [Op; 7] = [
        Op::Compose,
        Op::Meet,
        Op::Zero,
        Op::Id,
        Op::Domain,
        Op::Range,
        Op::Antidomain,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Op::Compose => "compose",
            Op::Meet => "meet",
            Op::Zero => "zero",
            Op::Id => "id",
            Op::Domain => "domain",
            Op::Range => "range",
            Op::Antidomain => "antidomain",
        }
    }

    pub fn parse(s: &str) -> Option<Op> {
        match s {
            "compose" | ";" | "⨟" => Some(Op::Compose),
            "meet" | "∧" | "^" => Some(Op::Meet),
            "zero" | "0" => Some(Op::Zero),
            "id" => Some(Op::Id),
            "domain" | "D" => Some(Op::Domain),
            "range" | "R" => Some(Op::Range),
            "antidomain" | "A" => Some(Op::Antidomain),
            _ => None,
        }
    }
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A subset of the operation symbols.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Signature(BTreeSet<Op>);

impl Signature {
    pub fn new(ops: impl IntoIterator<Item = Op>) -> Self {
        Signature(ops.into_iter().collect())
    }

    /// (⨟, ∧, A).
    pub fn standard() -> Self {
        Self::new([Op::Compose, Op::Meet, Op::Antidomain])
    }

    pub fn contains(&self, op: Op) -> bool {
        self.0.contains(&op)
    }

    pub fn ops(&self) -> impl Iterator<Item = Op> + '_ {
        self.0.iter().copied()
    }

    fn apply_unary(&self, f: &PartialFunction, mut emit: impl FnMut(Op, PartialFunction)) {
        for op in self.ops() {
            match op {
                Op::Domain => emit(op, f.domain_diag()),
                Op::Range => emit(op, f.range_diag()),
                Op::Antidomain => emit(op, f.antidomain()),
                _ => {}
            }
        }
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.ops().map(Op::name).collect();
        write!(f, "({})", names.join(", "))
    }
}

/// A finite set of partial functions closed under a signature.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConcreteAlgebra {
    base: Vec<String>,
    functions: Vec<PartialFunction>,
    names: Vec<String>,
    signature: Signature,
    index: HashMap<PartialFunction, usize>,
}

impl ConcreteAlgebra {
    /// Wraps an explicit function set, checking that it is closed under
    /// `signature` and free of duplicates.
    pub fn from_functions(
        base: Vec<String>,
        names: Vec<String>,
        functions: Vec<PartialFunction>,
        signature: Signature,
    ) -> Result<Self, PfunError> {
        if names.len() != functions.len() {
            return Err(PfunError::NameCount(names.len(), functions.len()));
        }
        let mut index = HashMap::with_capacity(functions.len());
        for (i, f) in functions.iter().enumerate() {
            if f.base_len() != base.len() {
                return Err(PfunError::BaseMismatch(f.base_len(), base.len()));
            }
            if let Some(j) = index.insert(f.clone(), i) {
                return Err(PfunError::DuplicateFunction(j, i));
            }
        }
        let alg = ConcreteAlgebra {
            base,
            functions,
            names,
            signature,
            index,
        };
        alg.check_closed()?;
        Ok(alg)
    }

    fn check_closed(&self) -> Result<(), PfunError> {
        let n = self.base.len();
        let missing = |op: Op, args: Vec<usize>| PfunError::NotClosed { op, args };
        for op in self.signature.ops() {
            let constant = match op {
                Op::Zero => Some(PartialFunction::empty(n)),
                Op::Id => Some(PartialFunction::identity(n)),
                _ => None,
            };
            if let Some(c) = constant {
                if !self.index.contains_key(&c) {
                    return Err(missing(op, vec![]));
                }
            }
        }
        for (i, f) in self.functions.iter().enumerate() {
            let mut bad = None;
            self.signature.apply_unary(f, |op, g| {
                if bad.is_none() && !self.index.contains_key(&g) {
                    bad = Some(op);
                }
            });
            if let Some(op) = bad {
                return Err(missing(op, vec![i]));
            }
            for (j, g) in self.functions.iter().enumerate() {
                if self.signature.contains(Op::Compose) && !self.index.contains_key(&f.compose(g)?)
                {
                    return Err(missing(Op::Compose, vec![i, j]));
                }
                if self.signature.contains(Op::Meet) && !self.index.contains_key(&f.intersect(g)?) {
                    return Err(missing(Op::Meet, vec![i, j]));
                }
            }
        }
        Ok(())
    }

    pub fn base(&self) -> &[String] {
        &self.base
    }

    pub fn functions(&self) -> &[PartialFunction] {
        &self.functions
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn len(&self) -> usize {
        self.functions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functions.is_empty()
    }

    pub fn index_of(&self, f: &PartialFunction) -> Option<usize> {
        self.index.get(f).copied()
    }

    /// Reads the (⨟, ∧, A) tables off the functions. Element `i` of the
    /// result is `functions()[i]`, so the identity labeling is a
    /// representation.
    pub fn to_abstract(&self) -> Result<FiniteAlgebra, PfunError> {
        for op in [Op::Compose, Op::Meet, Op::Antidomain] {
            if !self.signature.contains(op) {
                return Err(PfunError::MissingOperation(op));
            }
        }
        let n = self.len();
        let lookup = |f: PartialFunction| self.index[&f];
        let mut compose = Vec::with_capacity(n * n);
        let mut meet = Vec::with_capacity(n * n);
        for f in &self.functions {
            for g in &self.functions {
                compose.push(lookup(f.compose(g)?));
                meet.push(lookup(f.intersect(g)?));
            }
        }
        let antidomain = self
            .functions
            .iter()
            .map(|f| lookup(f.antidomain()))
            .collect();
        Ok(
            FiniteAlgebra::from_flat(self.names.clone(), compose, meet, antidomain)
                .expect("closed function set yields well-formed tables"),
        )
    }

    /// The identity labeling of [`to_abstract`](Self::to_abstract), verified.
    pub fn identity_representation(&self) -> Result<Representation, PfunError> {
        let source = self.to_abstract()?;
        Ok(Representation::new(source, self.base.clone(), self.functions.clone()).verify())
    }
}

/// Least superset of `generators` closed under `signature`.
///
/// Functions are kept in discovery order: the generators (duplicates
/// dropped), then the constants the signature forces, then everything the
/// fixpoint adds. They are named `g0`, `g1`, … in that order. The empty
/// function is always present when `0` or `A` is in the signature.
pub fn close_generators(
    base: Vec<String>,
    generators: &[PartialFunction],
    signature: &Signature,
    max_functions: usize,
) -> Result<ConcreteAlgebra, PfunError> {
    let n = base.len();
    let mut functions: Vec<PartialFunction> = Vec::new();
    let mut index: HashMap<PartialFunction, usize> = HashMap::new();
    let add = |f: PartialFunction,
               functions: &mut Vec<PartialFunction>,
               index: &mut HashMap<PartialFunction, usize>|
     -> Result<(), PfunError> {
        if f.base_len() != n {
            return Err(PfunError::BaseMismatch(f.base_len(), n));
        }
        if !index.contains_key(&f) {
            if functions.len() == max_functions {
                return Err(PfunError::SizeLimitExceeded(max_functions));
            }
            index.insert(f.clone(), functions.len());
            functions.push(f);
        }
        Ok(())
    };
    for g in generators {
        add(g.clone(), &mut functions, &mut index)?;
    }
    if signature.contains(Op::Zero) || signature.contains(Op::Antidomain) {
        add(PartialFunction::empty(n), &mut functions, &mut index)?;
    }
    if signature.contains(Op::Id) {
        add(PartialFunction::identity(n), &mut functions, &mut index)?;
    }
    // Element i is combined with every j ≤ i when it is processed, so each
    // ordered pair is visited exactly once.
    let mut next = 0;
    while next < functions.len() {
        let f = functions[next].clone();
        let mut fresh = Vec::new();
        signature.apply_unary(&f, |_, g| fresh.push(g));
        for j in 0..=next {
            let g = &functions[j];
            if signature.contains(Op::Compose) {
                fresh.push(f.compose(g)?);
                fresh.push(g.compose(&f)?);
            }
            if signature.contains(Op::Meet) {
                fresh.push(f.intersect(g)?);
            }
        }
        for g in fresh {
            add(g, &mut functions, &mut index)?;
        }
        next += 1;
    }
    let names = (0..functions.len()).map(|i| format!("g{i}")).collect();
    Ok(ConcreteAlgebra {
        base,
        functions,
        names,
        signature: signature.clone(),
        index,
    })
}

/// Where a candidate representation first disagrees with its source.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RepFailure {
    /// The assignment does not cover every element.
    Arity { expected: usize, found: usize },
    /// An image lives on the wrong base.
    BaseMismatch { element: Elem },
    /// Two elements share an image.
    Injectivity { a: Elem, b: Elem },
    /// An operation is not preserved at `args`.
    Operation { op: Op, args: Vec<Elem> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", content = "failure", rename_all = "kebab-case")]
pub enum RepStatus {
    Unverified,
    Verified,
    Failed(RepFailure),
}

/// A map from the elements of an abstract algebra to partial functions on
/// a named base.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Representation {
    pub source: FiniteAlgebra,
    pub base: Vec<String>,
    pub assignment: Vec<PartialFunction>,
    pub status: RepStatus,
}

impl Representation {
    pub fn new(source: FiniteAlgebra, base: Vec<String>, assignment: Vec<PartialFunction>) -> Self {
        Representation {
            source,
            base,
            assignment,
            status: RepStatus::Unverified,
        }
    }

    pub fn is_verified(&self) -> bool {
        self.status == RepStatus::Verified
    }

    pub fn image(&self, a: Elem) -> &PartialFunction {
        &self.assignment[a]
    }

    /// Re-checks the assignment from scratch: arity, base, injectivity, then
    /// ⨟, ∧ and A in index order. The first failure wins.
    pub fn verify(mut self) -> Self {
        self.status = match self.first_failure() {
            None => RepStatus::Verified,
            Some(f) => RepStatus::Failed(f),
        };
        self
    }

    fn first_failure(&self) -> Option<RepFailure> {
        let alg = &self.source;
        let theta = &self.assignment;
        if theta.len() != alg.len() {
            return Some(RepFailure::Arity {
                expected: alg.len(),
                found: theta.len(),
            });
        }
        if let Some(element) = theta.iter().position(|f| f.base_len() != self.base.len()) {
            return Some(RepFailure::BaseMismatch { element });
        }
        let mut owner: HashMap<&PartialFunction, Elem> = HashMap::with_capacity(theta.len());
        for (b, f) in theta.iter().enumerate() {
            if let Some(a) = owner.insert(f, b) {
                return Some(RepFailure::Injectivity { a, b });
            }
        }
        for a in alg.elements() {
            for b in alg.elements() {
                let lhs = &theta[alg.compose(a, b)];
                if *lhs != theta[a].compose(&theta[b]).expect("same base") {
                    return Some(RepFailure::Operation {
                        op: Op::Compose,
                        args: vec![a, b],
                    });
                }
            }
        }
        for a in alg.elements() {
            for b in alg.elements() {
                let lhs = &theta[alg.meet(a, b)];
                if *lhs != theta[a].intersect(&theta[b]).expect("same base") {
                    return Some(RepFailure::Operation {
                        op: Op::Meet,
                        args: vec![a, b],
                    });
                }
            }
        }
        for a in alg.elements() {
            if theta[alg.antidomain(a)] != theta[a].antidomain() {
                return Some(RepFailure::Operation {
                    op: Op::Antidomain,
                    args: vec![a],
                });
            }
        }
        None
    }

    fn require_verified(&self) -> Result<(), PfunError> {
        if self.is_verified() {
            Ok(())
        } else {
            Err(PfunError::Unverified)
        }
    }

    /// All pairs occurring in some image.
    fn all_pairs(&self) -> BTreeSet<(usize, usize)> {
        self.assignment.iter().flat_map(|f| f.pairs()).collect()
    }

    /// Existing meets of nonempty sets become intersections.
    ///
    /// Meets only shrink as sets grow, so for a pair `p` it is enough to look
    /// at the largest set whose images all contain `p`: every other such set
    /// has a meet above it.
    pub fn is_meet_complete(&self) -> Result<bool, PfunError> {
        self.require_verified()?;
        let alg = &self.source;
        for p in self.all_pairs() {
            let holders: Vec<Elem> = alg
                .elements()
                .filter(|&s| self.assignment[s].contains(p))
                .collect();
            let m = alg
                .meet_set(&holders)
                .expect("nonempty")
                .expect("verified sources are meet semilattices");
            if !self.assignment[m].contains(p) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Existing joins become unions.
    ///
    /// A pair `p ∈ θ(m)` is missed by some `S` with `⋁S = m` exactly when
    /// the elements below `m` whose images avoid `p` already have join `m`.
    pub fn is_join_complete(&self) -> Result<bool, PfunError> {
        self.require_verified()?;
        let alg = &self.source;
        for m in alg.elements() {
            for p in self.assignment[m].pairs() {
                let avoiding: Vec<Elem> = alg
                    .elements()
                    .filter(|&s| alg.leq(s, m) && !self.assignment[s].contains(p))
                    .collect();
                if alg.join(&avoiding) == Some(m) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Every pair in an image lies in the image of an atom.
    pub fn is_atomic_rep(&self) -> Result<bool, PfunError> {
        self.require_verified()?;
        let atoms = self.source.atoms();
        Ok(self
            .all_pairs()
            .into_iter()
            .all(|p| atoms.iter().any(|&x| self.assignment[x].contains(p))))
    }

    /// The image as a concrete (⨟, ∧, A)-algebra, with the source's element
    /// names.
    pub fn image_algebra(&self) -> Result<ConcreteAlgebra, PfunError> {
        self.require_verified()?;
        ConcreteAlgebra::from_functions(
            self.base.clone(),
            self.source.names().to_vec(),
            self.assignment.clone(),
            Signature::standard(),
        )
    }
}

/// Representation of the direct product over the disjoint union of the two
/// bases. Base points are prefixed `1:` and `2:`.
pub fn product_representation(
    left: &Representation,
    right: &Representation,
) -> Result<Representation, PfunError> {
    left.require_verified()?;
    right.require_verified()?;
    let source = left.source.direct_product(&right.source);
    let (n1, n2) = (left.base.len(), right.base.len());
    let base = left
        .base
        .iter()
        .map(|p| format!("1:{p}"))
        .chain(right.base.iter().map(|p| format!("2:{p}")))
        .collect();
    let mut assignment = Vec::with_capacity(source.len());
    for f in &left.assignment {
        let f = f.shifted(0, n1 + n2);
        for g in &right.assignment {
            let g = g.shifted(n1, n1 + n2);
            assignment.push(f.union(&g).expect("disjoint bases"));
        }
    }
    Ok(Representation::new(source, base, assignment).verify())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pf(n: usize, pairs: &[(usize, usize)]) -> PartialFunction {
        PartialFunction::from_pairs(n, pairs.iter().copied()).unwrap()
    }

    fn names(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("x{i}")).collect()
    }

    fn arb_function(n: usize) -> impl Strategy<Value = PartialFunction> {
        proptest::collection::vec(proptest::option::of(0..n), n)
            .prop_map(|m| PartialFunction::from_map(m).unwrap())
    }

    #[test]
    fn extreme_cases() {
        let f = pf(3, &[(0, 1), (2, 2)]);
        let e = PartialFunction::empty(3);
        let id = PartialFunction::identity(3);
        assert_eq!(f.compose(&e).unwrap(), e);
        assert_eq!(e.compose(&f).unwrap(), e);
        assert_eq!(id.antidomain(), e);
        assert_eq!(e.antidomain(), id);
        assert_eq!(PartialFunction::identity(0), PartialFunction::empty(0));
    }

    #[test]
    fn non_functional_and_mismatched_inputs() {
        assert_eq!(
            PartialFunction::from_pairs(2, [(0, 0), (0, 1)]),
            Err(PfunError::NotFunctional(0))
        );
        assert!(matches!(
            PartialFunction::from_pairs(2, [(0, 2)]),
            Err(PfunError::PointOutOfRange { .. })
        ));
        let f = PartialFunction::identity(2);
        let g = PartialFunction::identity(3);
        assert_eq!(f.compose(&g), Err(PfunError::BaseMismatch(2, 3)));
        assert_eq!(f.intersect(&g), Err(PfunError::BaseMismatch(2, 3)));
    }

    #[test]
    fn range_of_figure_two_g() {
        // a → c, b → c.
        let g = pf(3, &[(1, 2)]);
        assert_eq!(g.range_diag(), PartialFunction::diagonal(3, [2]));
        assert_eq!(g.domain_diag(), PartialFunction::diagonal(3, [1]));
    }

    #[test]
    fn forced_elements_of_a_closure() {
        let f = pf(3, &[(0, 1), (1, 1)]);
        let sig = Signature::new([Op::Antidomain, Op::Compose]);
        let alg = close_generators(names(3), &[f.clone()], &sig, DEFAULT_CLOSURE_CAP).unwrap();
        for g in [
            f.antidomain(),
            f.antidomain().antidomain(),
            PartialFunction::empty(3),
        ] {
            assert!(alg.index_of(&g).is_some(), "{g:?} missing");
        }
        assert_eq!(alg.names()[0], "g0");
        assert_eq!(alg.functions()[0], f);
    }

    #[test]
    fn closure_cap() {
        let gens = [pf(3, &[(0, 1), (1, 2), (2, 0)]), pf(3, &[(0, 0), (1, 0)])];
        let err = close_generators(names(3), &gens, &Signature::standard(), 5).unwrap_err();
        assert_eq!(err, PfunError::SizeLimitExceeded(5));
    }

    #[test]
    fn one_function_algebra() {
        let alg = close_generators(vec![], &[], &Signature::standard(), 10).unwrap();
        assert_eq!(alg.len(), 1);
        let abs = alg.to_abstract().unwrap();
        assert_eq!(abs.len(), 1);
        let rep = alg.identity_representation().unwrap();
        assert!(rep.is_verified());
        assert!(rep.base.is_empty());
    }

    #[test]
    fn to_abstract_needs_the_standard_signature() {
        let alg = close_generators(names(1), &[], &Signature::new([Op::Zero]), 10).unwrap();
        assert_eq!(
            alg.to_abstract(),
            Err(PfunError::MissingOperation(Op::Compose))
        );
    }

    #[test]
    fn explicit_sets_must_be_closed() {
        let f = pf(2, &[(0, 1)]);
        let err = ConcreteAlgebra::from_functions(
            names(2),
            vec!["f".into(), "0".into()],
            vec![f, PartialFunction::empty(2)],
            Signature::standard(),
        )
        .unwrap_err();
        assert!(matches!(
            err,
            PfunError::NotClosed {
                op: Op::Antidomain,
                ..
            }
        ));
    }

    #[test]
    fn injectivity_failure() {
        let alg =
            close_generators(names(2), &[pf(2, &[(0, 1)])], &Signature::standard(), 100).unwrap();
        let mut rep = alg.identity_representation().unwrap();
        assert!(rep.is_verified());
        let dup = rep.assignment[0].clone();
        rep.assignment[1] = dup;
        let rep = rep.verify();
        assert_eq!(
            rep.status,
            RepStatus::Failed(RepFailure::Injectivity { a: 0, b: 1 })
        );
        assert_eq!(rep.is_meet_complete(), Err(PfunError::Unverified));
    }

    #[test]
    fn product_with_trivial_algebra() {
        let alg =
            close_generators(names(2), &[pf(2, &[(0, 1)])], &Signature::standard(), 100).unwrap();
        let rep = alg.identity_representation().unwrap();
        let one = close_generators(vec![], &[], &Signature::standard(), 10)
            .unwrap()
            .identity_representation()
            .unwrap();
        let prod = product_representation(&rep, &one).unwrap();
        assert!(prod.is_verified());
        assert_eq!(prod.base.len(), rep.base.len());
        assert!(prod.source.isomorphism(&rep.source).is_some());
        let sq = product_representation(&rep, &rep).unwrap();
        assert!(sq.is_verified());
        assert_eq!(sq.base.len(), 4);
        assert!(sq.is_meet_complete().unwrap());
        assert!(sq.is_join_complete().unwrap());
        assert!(sq.is_atomic_rep().unwrap());
    }

    proptest! {
        #[test]
        fn set_operation_laws(f in arb_function(4), g in arb_function(4), h in arb_function(4)) {
            let fg_h = f.compose(&g).unwrap().compose(&h).unwrap();
            let f_gh = f.compose(&g.compose(&h).unwrap()).unwrap();
            prop_assert_eq!(fg_h, f_gh);
            prop_assert_eq!(f.intersect(&g).unwrap(), g.intersect(&f).unwrap());
            prop_assert_eq!(f.intersect(&f).unwrap(), f.clone());
            prop_assert_eq!(
                f.intersect(&g).unwrap().intersect(&h).unwrap(),
                f.intersect(&g.intersect(&h).unwrap()).unwrap()
            );
            prop_assert!(f.antidomain().compose(&f).unwrap().is_empty());
            prop_assert_eq!(f.domain_diag(), f.antidomain().antidomain());
            let d = f.domain_diag();
            let a = f.antidomain();
            prop_assert!(d.intersect(&a).unwrap().is_empty());
            prop_assert_eq!(d.union(&a).unwrap(), PartialFunction::identity(4));
            prop_assert!(f.range_diag().is_subset_of(&PartialFunction::identity(4)));
            prop_assert_eq!(f.compose(&f.range_diag()).unwrap(), f.clone());
        }

        #[test]
        fn closures_are_closed(f in arb_function(3), g in arb_function(3)) {
            let alg = close_generators(names(3), &[f, g], &Signature::standard(), 1000).unwrap();
            let again = ConcreteAlgebra::from_functions(
                alg.base().to_vec(),
                alg.names().to_vec(),
                alg.functions().to_vec(),
                Signature::standard(),
            );
            prop_assert!(again.is_ok());
            let abs = alg.to_abstract().unwrap();
            prop_assert!(abs.validate().passed);
            prop_assert!(abs.check_phi().is_ok());
            prop_assert!(abs.is_atomic());
            let rep = alg.identity_representation().unwrap();
            prop_assert!(rep.is_verified());
        }
    }
}
