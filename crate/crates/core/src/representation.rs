//! The atom representation θ, the complete-representability decision it
//! yields for finite algebras, and an independent exhaustive search.
//!
//! For an atom `x` and any element `a`, `θ(a)(x) = x ⨟ a` when that is
//! nonzero and undefined otherwise; the base is the set of atoms. On a
//! finite algebra θ is a (necessarily complete) representation exactly
//! when the algebra is representable at all, so checking θ decides both
//! questions. [`brute_force_search`] does not rely on that and is used to
//! cross-check it.

use std::collections::HashMap;

use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::algebra::{Elem, FiniteAlgebra, Law};
use crate::pfun::{Op, PartialFunction, PfunError, RepFailure, Representation};

/// Why θ failed, which certifies that the algebra has no representation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Refutation {
    /// `x` is an atom but `x ⨟ a` is neither zero nor an atom.
    NonAtomImage { x: Elem, a: Elem },
    /// θ(a) = θ(b) for distinct `a`, `b`.
    InjectivityCollision { a: Elem, b: Elem },
    /// θ does not preserve `op` at `args`.
    OperationMismatch { op: Op, args: Vec<Elem> },
    /// The tables break a law every algebra of partial functions satisfies.
    InvalidTable { law: Law, witness: Vec<Elem> },
}

impl Refutation {
    pub fn kind(&self) -> &'static str {
        match self {
            Refutation::NonAtomImage { .. } => "non-atom-image",
            Refutation::InjectivityCollision { .. } => "injectivity-collision",
            Refutation::OperationMismatch { .. } => "operation-mismatch",
            Refutation::InvalidTable { .. } => "invalid-table",
        }
    }

    /// `{"kind": …, "witness": [element names…]}` plus `op`/`law` where
    /// relevant.
    pub fn to_json(&self, alg: &FiniteAlgebra) -> Value {
        let names = |es: &[Elem]| -> Vec<&str> { es.iter().map(|&e| alg.name(e)).collect() };
        match self {
            Refutation::NonAtomImage { x, a } => {
                json!({"kind": self.kind(), "witness": names(&[*x, *a])})
            }
            Refutation::InjectivityCollision { a, b } => {
                json!({"kind": self.kind(), "witness": names(&[*a, *b])})
            }
            Refutation::OperationMismatch { op, args } => {
                json!({"kind": self.kind(), "op": op.name(), "witness": names(args)})
            }
            Refutation::InvalidTable { law, witness } => {
                json!({"kind": self.kind(), "law": law.name(), "witness": names(witness)})
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ThetaOutcome {
    Represented(Representation),
    Refuted(Refutation),
}

impl ThetaOutcome {
    pub fn representation(&self) -> Option<&Representation> {
        match self {
            ThetaOutcome::Represented(r) => Some(r),
            ThetaOutcome::Refuted(_) => None,
        }
    }

    pub fn refutation(&self) -> Option<&Refutation> {
        match self {
            ThetaOutcome::Represented(_) => None,
            ThetaOutcome::Refuted(r) => Some(r),
        }
    }
}

/// Builds θ over the atoms and verifies it.
///
/// Checks run in a fixed order: every `x ⨟ a` must be zero or an atom,
/// then the verification order of [`Representation::verify`].
pub fn build_theta(alg: &FiniteAlgebra) -> ThetaOutcome {
    let zero = alg.bottom();
    let atoms = alg.atoms();
    let mut position = vec![usize::MAX; alg.len()];
    for (i, &x) in atoms.iter().enumerate() {
        position[x] = i;
    }
    let mut assignment = Vec::with_capacity(alg.len());
    for a in alg.elements() {
        let mut map = Vec::with_capacity(atoms.len());
        for &x in &atoms {
            let y = alg.compose(x, a);
            if y == zero {
                map.push(None);
            } else if position[y] != usize::MAX {
                map.push(Some(position[y]));
            } else {
                return ThetaOutcome::Refuted(Refutation::NonAtomImage { x, a });
            }
        }
        assignment.push(PartialFunction::from_map(map).expect("atom indices are in range"));
    }
    let base = atoms.iter().map(|&x| alg.name(x).to_string()).collect();
    let rep = Representation::new(alg.clone(), base, assignment).verify();
    match &rep.status {
        crate::pfun::RepStatus::Verified => ThetaOutcome::Represented(rep),
        crate::pfun::RepStatus::Failed(failure) => ThetaOutcome::Refuted(match failure.clone() {
            RepFailure::Injectivity { a, b } => Refutation::InjectivityCollision { a, b },
            RepFailure::Operation { op, args } => Refutation::OperationMismatch { op, args },
            other => unreachable!("θ is built with the right shape: {other:?}"),
        }),
        crate::pfun::RepStatus::Unverified => unreachable!(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Theta,
    BruteForce,
    BothAgree,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    Representation(Representation),
    Refutation(Refutation),
    /// The exhaustive search found nothing up to this base size.
    SearchExhausted {
        max_base: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub completely_representable: bool,
    pub witness: Witness,
    pub method: Method,
}

impl Verdict {
    pub fn representation(&self) -> Option<&Representation> {
        match &self.witness {
            Witness::Representation(r) => Some(r),
            _ => None,
        }
    }
}

/// Decides complete representability of a finite algebra via θ.
///
/// Tables that fail [`FiniteAlgebra::validate`] are refuted with the first
/// broken law; all of those laws hold in every algebra of partial
/// functions.
pub fn decide_complete_representability(alg: &FiniteAlgebra) -> Verdict {
    let report = alg.validate();
    if let Some(failure) = report.failures.into_iter().next() {
        return Verdict {
            completely_representable: false,
            witness: Witness::Refutation(Refutation::InvalidTable {
                law: failure.law,
                witness: failure.witness,
            }),
            method: Method::Theta,
        };
    }
    match build_theta(alg) {
        ThetaOutcome::Represented(rep) => Verdict {
            completely_representable: true,
            witness: Witness::Representation(rep),
            method: Method::Theta,
        },
        ThetaOutcome::Refuted(r) => Verdict {
            completely_representable: false,
            witness: Witness::Refutation(r),
            method: Method::Theta,
        },
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecideError {
    #[error("θ says {theta} but the exhaustive search says {search}")]
    Disagreement { theta: bool, search: bool },
    #[error(transparent)]
    Search(#[from] SearchError),
}

/// Runs θ and the exhaustive search and insists they agree.
pub fn decide_cross_checked(
    alg: &FiniteAlgebra,
    options: &SearchOptions,
) -> Result<Verdict, DecideError> {
    let mut verdict = decide_complete_representability(alg);
    let found = brute_force_search(alg, options)?;
    if found.is_some() != verdict.completely_representable {
        return Err(DecideError::Disagreement {
            theta: verdict.completely_representable,
            search: found.is_some(),
        });
    }
    verdict.method = Method::BothAgree;
    Ok(verdict)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("search budget of {0} nodes exceeded")]
    SearchBudgetExceeded(u64),
    #[error("bases above {0} points are not supported")]
    BaseTooLarge(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOptions {
    /// Largest base size tried; `None` means the number of atoms.
    pub max_base: Option<usize>,
    /// Candidate images tried before giving up.
    pub node_cap: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            max_base: None,
            node_cap: 5_000_000,
        }
    }
}

/// Exhaustively searches for a representation on bases of `0..=max_base`
/// points and returns the first one found, verified.
///
/// The search assigns images element by element, propagating ⨟, ∧ and A
/// through everything already assigned. Zero goes first; after that the
/// element with the fewest candidate images, ties broken by height in the
/// order and then by index. Candidates are built point by point from the
/// images already assigned below and above and from the domain fixed by the
/// antidomain, and pruned by base-point symmetry.
pub fn brute_force_search(
    alg: &FiniteAlgebra,
    options: &SearchOptions,
) -> Result<Option<Representation>, SearchError> {
    let max_base = options.max_base.unwrap_or_else(|| alg.atoms().len());
    if max_base > packed::MAX_POINTS {
        return Err(SearchError::BaseTooLarge(packed::MAX_POINTS));
    }
    let order = search_order(alg);
    let mut nodes = 0;
    for k in 0..=max_base {
        // Too few functions on k points to be injective.
        if (k as u32 + 1)
            .checked_pow(k as u32)
            .map_or(false, |c| (c as usize) < alg.len())
        {
            continue;
        }
        let mut search = Search::new(alg, k, &order, options.node_cap, nodes);
        let found = search.run()?;
        nodes = search.nodes;
        if let Some(images) = found {
            let base = (0..k).map(|i| format!("x{i}")).collect();
            let assignment = images.iter().map(|&f| packed::unpack(f, k)).collect();
            let rep = Representation::new(alg.clone(), base, assignment).verify();
            assert!(
                rep.is_verified(),
                "search produced an unverifiable assignment"
            );
            return Ok(Some(rep));
        }
    }
    Ok(None)
}

/// Zero first, then by the number of elements strictly below, ties by
/// index.
fn search_order(alg: &FiniteAlgebra) -> Vec<Elem> {
    let zero = alg.bottom();
    let height: Vec<usize> = alg
        .elements()
        .map(|a| alg.elements().filter(|&b| b != a && alg.leq(b, a)).count())
        .collect();
    let mut order: Vec<Elem> = alg.elements().collect();
    order.sort_by_key(|&a| (a != zero, height[a], a));
    order
}

mod packed {
    //! Partial functions on at most 15 points packed into a `u64`, four
    //! bits per point, `0xF` for undefined. Nibbles past the base are zero.

    use crate::pfun::PartialFunction;

    pub const MAX_POINTS: usize = 15;
    pub const UNDEF: u64 = 0xF;

    #[inline]
    pub fn get(f: u64, x: usize) -> u64 {
        (f >> (4 * x)) & 0xF
    }

    #[inline]
    fn set(f: u64, x: usize, y: u64) -> u64 {
        (f & !(0xF << (4 * x))) | (y << (4 * x))
    }

    #[inline]
    pub fn with(f: u64, x: usize, y: u64) -> u64 {
        set(f, x, y)
    }

    /// The transposition of `x` and `y` as a relabeling of `0..k`.
    pub fn swap(k: usize, x: usize, y: usize) -> Vec<u8> {
        let mut perm: Vec<u8> = (0..k as u8).collect();
        perm.swap(x, y);
        perm
    }

    pub fn empty(k: usize) -> u64 {
        (0..k).fold(0, |f, x| set(f, x, UNDEF))
    }

    pub fn compose(f: u64, g: u64, k: usize) -> u64 {
        (0..k).fold(0, |out, x| {
            let y = get(f, x);
            let z = if y == UNDEF {
                UNDEF
            } else {
                get(g, y as usize)
            };
            set(out, x, z)
        })
    }

    pub fn meet(f: u64, g: u64, k: usize) -> u64 {
        (0..k).fold(0, |out, x| {
            let (a, b) = (get(f, x), get(g, x));
            set(out, x, if a == b { a } else { UNDEF })
        })
    }

    pub fn antidomain(f: u64, k: usize) -> u64 {
        (0..k).fold(0, |out, x| {
            set(out, x, if get(f, x) == UNDEF { x as u64 } else { UNDEF })
        })
    }

    #[cfg(test)]
    pub fn subset(f: u64, g: u64, k: usize) -> bool {
        (0..k).all(|x| {
            let a = get(f, x);
            a == UNDEF || a == get(g, x)
        })
    }

    /// The `code`-th function on `k` points, reading `code` in base `k + 1`
    /// with digit `k` meaning undefined.
    #[cfg(test)]
    pub fn decode(mut code: u64, k: usize) -> u64 {
        let radix = k as u64 + 1;
        (0..k).fold(0, |out, x| {
            let d = code % radix;
            code /= radix;
            set(out, x, if d == k as u64 { UNDEF } else { d })
        })
    }

    pub fn relabel(f: u64, perm: &[u8], k: usize) -> u64 {
        (0..k).fold(empty(k), |out, x| {
            let y = get(f, x);
            if y == UNDEF {
                out
            } else {
                set(out, perm[x] as usize, perm[y as usize] as u64)
            }
        })
    }

    pub fn unpack(f: u64, k: usize) -> PartialFunction {
        let map = (0..k)
            .map(|x| {
                let y = get(f, x);
                (y != UNDEF).then_some(y as usize)
            })
            .collect();
        PartialFunction::from_map(map).expect("packed points are in range")
    }
}

struct Search<'a> {
    alg: &'a FiniteAlgebra,
    k: usize,
    order: &'a [Elem],
    images: Vec<Option<u64>>,
    owner: HashMap<u64, Elem>,
    trail: Vec<Elem>,
    queue: Vec<Elem>,
    nodes: u64,
    cap: u64,
}

impl<'a> Search<'a> {
    fn new(alg: &'a FiniteAlgebra, k: usize, order: &'a [Elem], cap: u64, nodes: u64) -> Self {
        Search {
            alg,
            k,
            order,
            images: vec![None; alg.len()],
            owner: HashMap::with_capacity(alg.len()),
            trail: Vec::with_capacity(alg.len()),
            queue: Vec::new(),
            nodes,
            cap,
        }
    }

    fn run(&mut self) -> Result<Option<Vec<u64>>, SearchError> {
        // Every representation sends A(a) ⨟ a to the empty function.
        let zero = self.alg.bottom();
        if !self.assign(zero, packed::empty(self.k)) {
            return Ok(None);
        }
        if self.dfs()? {
            Ok(Some(
                self.images.iter().map(|f| f.expect("complete")).collect(),
            ))
        } else {
            Ok(None)
        }
    }

    fn dfs(&mut self) -> Result<bool, SearchError> {
        // Most constrained unassigned element first, ties in search order.
        let mut best: Option<(Elem, Vec<Vec<u64>>, u64)> = None;
        for &e in self.order {
            if self.images[e].is_some() {
                continue;
            }
            let options = self.point_options(e);
            let count = options
                .iter()
                .fold(1u64, |c, o| c.saturating_mul(o.len() as u64));
            if best.as_ref().map_or(true, |(_, _, c)| count < *c) {
                best = Some((e, options, count));
            }
            if count <= 1 {
                break;
            }
        }
        let Some((e, options, count)) = best else {
            return Ok(true);
        };
        if count == 0 {
            return Ok(false);
        }
        let swaps = self.swappable_points();
        let k = self.k;
        let mut digits = vec![0usize; k];
        loop {
            let f = (0..k).fold(0u64, |f, x| packed::with(f, x, options[x][digits[x]]));
            let canonical = swaps
                .iter()
                .all(|&(x, y)| packed::relabel(f, &packed::swap(k, x, y), k) >= f);
            if canonical && !self.owner.contains_key(&f) {
                self.nodes += 1;
                if self.nodes > self.cap {
                    return Err(SearchError::SearchBudgetExceeded(self.cap));
                }
                let mark = self.trail.len();
                if self.assign(e, f) && self.dfs()? {
                    return Ok(true);
                }
                self.undo(mark);
            }
            // Odometer over the per-point options.
            let mut x = 0;
            loop {
                if x == k {
                    return Ok(false);
                }
                digits[x] += 1;
                if digits[x] < options[x].len() {
                    break;
                }
                digits[x] = 0;
                x += 1;
            }
        }
    }

    /// Values `f(x)` may take for each point `x`, given the images already
    /// assigned below and above `e` and the domain fixed by `A(e)`.
    fn point_options(&self, e: Elem) -> Vec<Vec<u64>> {
        let k = self.k;
        let alg = self.alg;
        let ad = self.images[alg.antidomain(e)];
        let mut options = Vec::with_capacity(k);
        for x in 0..k {
            let mut forced: Option<u64> = None;
            let mut cap: Option<u64> = None;
            let mut clash = false;
            for &b in &self.trail {
                let g = packed::get(self.images[b].expect("on trail"), x);
                if alg.leq(b, e) && g != packed::UNDEF {
                    clash |= forced.is_some_and(|v| v != g);
                    forced = Some(g);
                }
                if alg.leq(e, b) {
                    cap = match cap {
                        None => Some(g),
                        Some(v) if v == g => Some(v),
                        Some(_) => Some(packed::UNDEF),
                    };
                }
            }
            let must = ad.map(|a| packed::get(a, x) == packed::UNDEF);
            let allowed = |v: u64| {
                let defined = v != packed::UNDEF;
                must.map_or(true, |m| m == defined) && cap.map_or(true, |c| !defined || v == c)
            };
            let opts: Vec<u64> = if clash {
                Vec::new()
            } else if let Some(v) = forced {
                if allowed(v) {
                    vec![v]
                } else {
                    Vec::new()
                }
            } else {
                (0..k as u64)
                    .chain(std::iter::once(packed::UNDEF))
                    .filter(|&v| allowed(v))
                    .collect()
            };
            options.push(opts);
        }
        options
    }

    /// Pairs of points whose transposition fixes every assigned image. Such
    /// transpositions generate a group preserving the partial assignment,
    /// so it suffices to try images that no such swap makes smaller.
    fn swappable_points(&self) -> Vec<(usize, usize)> {
        let k = self.k;
        let mut out = Vec::new();
        for x in 0..k {
            for y in x + 1..k {
                let perm = packed::swap(k, x, y);
                if self.trail.iter().all(|&b| {
                    let f = self.images[b].expect("on trail");
                    packed::relabel(f, &perm, k) == f
                }) {
                    out.push((x, y));
                }
            }
        }
        out
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let e = self.trail.pop().expect("nonempty");
            let f = self.images[e].take().expect("assigned");
            self.owner.remove(&f);
        }
    }

    /// Assigns `e ↦ f` and propagates; on conflict the partial work stays
    /// on the trail for the caller to undo.
    fn assign(&mut self, e: Elem, f: u64) -> bool {
        self.queue.clear();
        if !self.set(e, f) {
            return false;
        }
        while let Some(a) = self.queue.pop() {
            let fa = self.images[a].expect("queued elements are assigned");
            if !self.set(self.alg.antidomain(a), packed::antidomain(fa, self.k)) {
                return false;
            }
            let mut i = 0;
            while i < self.trail.len() {
                let b = self.trail[i];
                let fb = self.images[b].expect("on trail");
                let k = self.k;
                let ok = self.set(self.alg.compose(a, b), packed::compose(fa, fb, k))
                    && self.set(self.alg.compose(b, a), packed::compose(fb, fa, k))
                    && self.set(self.alg.meet(a, b), packed::meet(fa, fb, k));
                if !ok {
                    return false;
                }
                i += 1;
            }
        }
        true
    }

    fn set(&mut self, e: Elem, f: u64) -> bool {
        match self.images[e] {
            Some(g) => g == f,
            None => {
                if self.owner.contains_key(&f) {
                    return false;
                }
                self.images[e] = Some(f);
                self.owner.insert(f, e);
                self.trail.push(e);
                self.queue.push(e);
                true
            }
        }
    }
}

/// The three completeness notions on one representation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CompletenessReport {
    pub meet_complete: bool,
    pub join_complete: bool,
    pub atomic: bool,
}

impl CompletenessReport {
    pub fn all_agree(&self) -> bool {
        self.meet_complete == self.join_complete && self.join_complete == self.atomic
    }

    pub fn all_true(&self) -> bool {
        self.meet_complete && self.join_complete && self.atomic
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CompletenessError {
    #[error(transparent)]
    Unverified(#[from] PfunError),
    #[error("meet completeness, join completeness and atomicity disagree: {0:?}")]
    Disagreement(CompletenessReport),
}

/// Evaluates meet completeness, join completeness and atomicity and fails
/// if they do not all agree.
pub fn check_completeness(rep: &Representation) -> Result<CompletenessReport, CompletenessError> {
    let report = CompletenessReport {
        meet_complete: rep.is_meet_complete()?,
        join_complete: rep.is_join_complete()?,
        atomic: rep.is_atomic_rep()?,
    };
    if report.all_agree() {
        Ok(report)
    } else {
        Err(CompletenessError::Disagreement(report))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pfun::{close_generators, Signature};

    fn trivial() -> FiniteAlgebra {
        FiniteAlgebra::from_flat(vec!["0".into()], vec![0], vec![0], vec![0]).unwrap()
    }

    #[test]
    fn packed_operations_match_partial_functions() {
        let k = 3;
        let total = 4u64.pow(3);
        for a in 0..total {
            let f = packed::decode(a, k);
            let pf = packed::unpack(f, k);
            assert_eq!(packed::unpack(packed::antidomain(f, k), k), pf.antidomain());
            for b in 0..total {
                let g = packed::decode(b, k);
                let pg = packed::unpack(g, k);
                assert_eq!(
                    packed::unpack(packed::compose(f, g, k), k),
                    pf.compose(&pg).unwrap()
                );
                assert_eq!(
                    packed::unpack(packed::meet(f, g, k), k),
                    pf.intersect(&pg).unwrap()
                );
                assert_eq!(packed::subset(f, g, k), pf.is_subset_of(&pg));
            }
        }
    }

    #[test]
    fn theta_on_two_atom_boolean_algebra() {
        // θ(s) is the identity on the atoms below s.
        let b2 = FiniteAlgebra::boolean_as_algebra(2);
        let rep = build_theta(&b2).representation().cloned().unwrap();
        assert_eq!(rep.base, vec!["{0}", "{1}"]);
        assert_eq!(rep.assignment[0], PartialFunction::empty(2));
        assert_eq!(rep.assignment[1], PartialFunction::diagonal(2, [0]));
        assert_eq!(rep.assignment[2], PartialFunction::diagonal(2, [1]));
        assert_eq!(rep.assignment[3], PartialFunction::identity(2));
    }

    #[test]
    fn trivial_algebra() {
        let alg = trivial();
        let rep = build_theta(&alg).representation().cloned().unwrap();
        assert!(rep.base.is_empty());
        assert!(rep.is_verified());
        let found = brute_force_search(&alg, &SearchOptions::default())
            .unwrap()
            .unwrap();
        assert!(found.base.is_empty());
        let report = check_completeness(&rep).unwrap();
        assert!(report.all_true());
    }

    #[test]
    fn boolean_algebras_are_accepted() {
        for n in 0..=4 {
            let alg = FiniteAlgebra::boolean_as_algebra(n);
            let verdict = decide_complete_representability(&alg);
            assert!(verdict.completely_representable, "B{n}");
            let rep = verdict.representation().unwrap();
            assert!(check_completeness(rep).unwrap().all_true());
        }
    }

    #[test]
    fn broken_zero_absorption_is_refuted() {
        let b2 = FiniteAlgebra::boolean_as_algebra(2);
        let mut compose = b2.compose_table().to_vec();
        compose[3] = 1; // 0 ⨟ {0,1} = {0}
        let bad = FiniteAlgebra::from_flat(
            b2.names().to_vec(),
            compose,
            b2.meet_table().to_vec(),
            b2.antidomain_table().to_vec(),
        )
        .unwrap();
        let verdict = decide_complete_representability(&bad);
        assert!(!verdict.completely_representable);
        assert!(matches!(
            verdict.witness,
            Witness::Refutation(Refutation::InvalidTable { .. })
        ));
        assert!(bad
            .validate()
            .failures
            .iter()
            .any(|f| f.law == Law::ZeroLeftAbsorbing));
        assert_eq!(
            brute_force_search(&bad, &SearchOptions::default()).unwrap(),
            None
        );
    }

    #[test]
    fn corrupted_composition_is_refuted_by_theta() {
        // Valid tables, but {0} ⨟ {0} = ∅ breaks preservation of ⨟.
        let b2 = FiniteAlgebra::boolean_as_algebra(2);
        let mut compose = b2.compose_table().to_vec();
        compose[4 + 1] = 0;
        let bad = FiniteAlgebra::from_flat(
            b2.names().to_vec(),
            compose,
            b2.meet_table().to_vec(),
            b2.antidomain_table().to_vec(),
        )
        .unwrap();
        assert!(bad.validate().passed);
        let outcome = build_theta(&bad);
        let refutation = outcome.refutation().unwrap();
        let json = refutation.to_json(&bad);
        assert!(json["kind"].is_string());
        assert_eq!(
            brute_force_search(&bad, &SearchOptions::default()).unwrap(),
            None
        );
        let cross = decide_cross_checked(&bad, &SearchOptions::default()).unwrap();
        assert_eq!(cross.method, Method::BothAgree);
        assert!(!cross.completely_representable);
    }

    #[test]
    fn search_budget() {
        let alg = close_generators(
            (0..3).map(|i| i.to_string()).collect(),
            &[PartialFunction::from_pairs(3, [(0, 1), (1, 2)]).unwrap()],
            &Signature::standard(),
            1000,
        )
        .unwrap()
        .to_abstract()
        .unwrap();
        let opts = SearchOptions {
            max_base: None,
            node_cap: 1,
        };
        assert_eq!(
            brute_force_search(&alg, &opts),
            Err(SearchError::SearchBudgetExceeded(1))
        );
        let found = brute_force_search(&alg, &SearchOptions::default())
            .unwrap()
            .unwrap();
        assert!(found.is_verified());
    }
}
