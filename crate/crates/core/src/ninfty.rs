//! The infinite algebra F on the base `{p} ⊔ ℕ∞`, where `ℕ = {1, 2, …}`.
//!
//! Its elements are the identity restricted to `A ∪ B` with `A ⊆ {p}` and
//! `B` either a finite subset of `ℕ` or a cofinite subset of `ℕ∞`
//! containing `∞`, together with the single function `f : p ↦ ∞`. Both kinds
//! of `B` are stored by a finite set, so every operation is exact.
//!
//! The module also checks, by finite case analysis, the two infinite
//! families whose join and meet make composition fail to be completely
//! left-distributive.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;
use serde_json::{json, Value};

use crate::pfun::{ConcreteAlgebra, PartialFunction, PfunError, Signature};

/// A subset of `ℕ∞` that is finite without `∞` or cofinite with `∞`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(tag = "kind", content = "support", rename_all = "kebab-case")]
pub enum FinCofSet {
    /// The members, all in `ℕ`.
    Finite(BTreeSet<u32>),
    /// The naturals left out; `∞` is always a member.
    Cofinite(BTreeSet<u32>),
}

impl FinCofSet {
    pub fn empty() -> Self {
        FinCofSet::Finite(BTreeSet::new())
    }

    /// All of `ℕ∞`.
    pub fn full() -> Self {
        FinCofSet::Cofinite(BTreeSet::new())
    }

    pub fn finite(members: impl IntoIterator<Item = u32>) -> Self {
        let s: BTreeSet<u32> = members.into_iter().collect();
        assert!(!s.contains(&0), "ℕ starts at 1");
        FinCofSet::Finite(s)
    }

    pub fn cofinite(excluded: impl IntoIterator<Item = u32>) -> Self {
        let s: BTreeSet<u32> = excluded.into_iter().collect();
        assert!(!s.contains(&0), "ℕ starts at 1");
        FinCofSet::Cofinite(s)
    }

    pub fn contains_infinity(&self) -> bool {
        matches!(self, FinCofSet::Cofinite(_))
    }

    pub fn contains(&self, n: u32) -> bool {
        match self {
            FinCofSet::Finite(s) => s.contains(&n),
            FinCofSet::Cofinite(s) => n != 0 && !s.contains(&n),
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, FinCofSet::Finite(s) if s.is_empty())
    }

    /// The finite set that determines `self`.
    pub fn support(&self) -> &BTreeSet<u32> {
        match self {
            FinCofSet::Finite(s) | FinCofSet::Cofinite(s) => s,
        }
    }

    pub fn intersect(&self, other: &FinCofSet) -> FinCofSet {
        use FinCofSet::*;
        match (self, other) {
            (Finite(a), Finite(b)) => Finite(a & b),
            (Finite(a), Cofinite(e)) | (Cofinite(e), Finite(a)) => Finite(a - e),
            (Cofinite(e1), Cofinite(e2)) => Cofinite(e1 | e2),
        }
    }

    /// Complement within `ℕ∞`.
    pub fn complement(&self) -> FinCofSet {
        match self {
            FinCofSet::Finite(s) => FinCofSet::Cofinite(s.clone()),
            FinCofSet::Cofinite(s) => FinCofSet::Finite(s.clone()),
        }
    }

    pub fn is_subset_of(&self, other: &FinCofSet) -> bool {
        &self.intersect(other) == self
    }
}

impl fmt::Display for FinCofSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |s: &BTreeSet<u32>| s.iter().map(u32::to_string).collect::<Vec<_>>().join(",");
        match self {
            FinCofSet::Finite(s) => write!(f, "{{{}}}", list(s)),
            FinCofSet::Cofinite(s) if s.is_empty() => f.write_str("N∞"),
            FinCofSet::Cofinite(s) => write!(f, "N∞\\{{{}}}", list(s)),
        }
    }
}

/// An element of F.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum FElement {
    /// The identity on `B`, plus on `p` when `p` is set.
    IdRestriction { p: bool, set: FinCofSet },
    /// The function defined only at `p`, with value `∞`.
    F,
}

impl fmt::Display for FElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FElement::F => f.write_str("f"),
            FElement::IdRestriction { p: false, set } if set.is_empty() => f.write_str("0"),
            FElement::IdRestriction { p, set } => {
                let p = if *p { "p," } else { "" };
                write!(f, "id[{p}{set}]")
            }
        }
    }
}

impl FElement {
    pub fn id(p: bool, set: FinCofSet) -> Self {
        FElement::IdRestriction { p, set }
    }

    pub fn zero() -> Self {
        FElement::id(false, FinCofSet::empty())
    }

    pub fn is_zero(&self) -> bool {
        *self == FElement::zero()
    }

    /// Largest natural mentioned by the element, 0 if none.
    pub fn max_support(&self) -> u32 {
        match self {
            FElement::F => 0,
            FElement::IdRestriction { set, .. } => set.support().last().copied().unwrap_or(0),
        }
    }

    /// Checks the encoding invariant: supports avoid 0, which stands for no
    /// natural number.
    pub fn is_well_formed(&self) -> bool {
        match self {
            FElement::F => true,
            FElement::IdRestriction { set, .. } => !set.support().contains(&0),
        }
    }

    /// The element as a partial function on `p, 1, …, n, inf`, or `None`
    /// if its support reaches past `n`.
    fn embed(&self, n: u32) -> Option<PartialFunction> {
        if self.max_support() > n {
            return None;
        }
        let len = n as usize + 2;
        let inf = n as usize + 1;
        Some(match self {
            FElement::F => PartialFunction::from_pairs(len, [(0, inf)]).expect("in range"),
            FElement::IdRestriction { p, set } => {
                let mut points: Vec<usize> = Vec::new();
                if *p {
                    points.push(0);
                }
                points.extend((1..=n).filter(|&i| set.contains(i)).map(|i| i as usize));
                if set.contains_infinity() {
                    points.push(inf);
                }
                PartialFunction::diagonal(len, points)
            }
        })
    }
}

pub fn f_compose(x: &FElement, y: &FElement) -> FElement {
    use FElement::*;
    match (x, y) {
        (IdRestriction { p: p1, set: b1 }, IdRestriction { p: p2, set: b2 }) => {
            FElement::id(*p1 && *p2, b1.intersect(b2))
        }
        (IdRestriction { p, .. }, F) => {
            if *p {
                F
            } else {
                FElement::zero()
            }
        }
        (F, IdRestriction { set, .. }) => {
            if set.contains_infinity() {
                F
            } else {
                FElement::zero()
            }
        }
        // f(p) = ∞ and f is undefined at ∞.
        (F, F) => FElement::zero(),
    }
}

pub fn f_meet(x: &FElement, y: &FElement) -> FElement {
    use FElement::*;
    match (x, y) {
        (IdRestriction { p: p1, set: b1 }, IdRestriction { p: p2, set: b2 }) => {
            FElement::id(*p1 && *p2, b1.intersect(b2))
        }
        (F, F) => F,
        _ => FElement::zero(),
    }
}

pub fn f_antidomain(x: &FElement) -> FElement {
    match x {
        FElement::IdRestriction { p, set } => FElement::id(!p, set.complement()),
        FElement::F => FElement::id(false, FinCofSet::full()),
    }
}

pub fn f_leq(x: &FElement, y: &FElement) -> bool {
    f_meet(x, y) == *x
}

/// `g_i`: the identity on `{1, …, i}`.
pub fn g(i: u32) -> FElement {
    FElement::id(false, FinCofSet::finite(1..=i))
}

/// `h_i`: the identity on `{i, i+1, …} ∪ {∞}`.
pub fn h(i: u32) -> FElement {
    FElement::id(false, FinCofSet::cofinite(1..i))
}

/// One structural case of a bound argument and whether the claimed
/// constraint held.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CaseCheck {
    pub shape: String,
    pub constraint: String,
    pub holds: bool,
}

/// The claimed extremum of a family together with the case analysis that
/// establishes it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainReport {
    pub value: FElement,
    pub display: String,
    pub cases: Vec<CaseCheck>,
}

impl ChainReport {
    pub fn all_hold(&self) -> bool {
        self.cases.iter().all(|c| c.holds)
    }
}

/// Index `i` at which `candidate` fails to bound every `g_i` from above, or
/// `None` if it is an upper bound of the whole family.
pub fn g_upper_bound_failure(candidate: &FElement) -> Option<u32> {
    match candidate {
        // f ∧ g_1 = 0 ≠ g_1.
        FElement::F => Some(1),
        FElement::IdRestriction { set, .. } => match set {
            FinCofSet::Finite(a) => Some(a.last().map_or(1, |m| m + 1)),
            FinCofSet::Cofinite(e) => e.first().copied(),
        },
    }
}

/// Index `i` at which `candidate` fails to lie below every `h_i`, or
/// `None` if it is a lower bound of the whole family.
pub fn h_lower_bound_failure(candidate: &FElement) -> Option<u32> {
    match candidate {
        // f ∧ h_1 = 0 ≠ f.
        FElement::F => Some(1),
        // No h_i is defined at p.
        FElement::IdRestriction { p: true, .. } => Some(1),
        FElement::IdRestriction { p: false, set } => match set {
            FinCofSet::Finite(a) => a.last().map(|m| m + 1),
            // The least natural not excluded lies in the candidate but not
            // in h of its successor.
            FinCofSet::Cofinite(e) => {
                let n = (1..).find(|k| !e.contains(k)).expect("e is finite");
                Some(n + 1)
            }
        },
    }
}

/// Representative candidates of every structural shape, with supports in
/// `{1, …, k}`.
fn shapes_up_to(k: u32) -> Vec<FElement> {
    let mut out = vec![FElement::F];
    for mask in 0u32..(1 << k) {
        let s: BTreeSet<u32> = (1..=k).filter(|i| mask & (1 << (i - 1)) != 0).collect();
        for p in [false, true] {
            out.push(FElement::id(p, FinCofSet::Finite(s.clone())));
            out.push(FElement::id(p, FinCofSet::Cofinite(s.clone())));
        }
    }
    out
}

fn shape_name(x: &FElement) -> &'static str {
    match x {
        FElement::F => "f",
        FElement::IdRestriction {
            p: false,
            set: FinCofSet::Finite(_),
        } => "id[B finite]",
        FElement::IdRestriction {
            p: true,
            set: FinCofSet::Finite(_),
        } => "id[p, B finite]",
        FElement::IdRestriction {
            p: false,
            set: FinCofSet::Cofinite(_),
        } => "id[B cofinite]",
        FElement::IdRestriction {
            p: true,
            set: FinCofSet::Cofinite(_),
        } => "id[p, B cofinite]",
    }
}

/// `⋁ g_i` with its proof.
///
/// Cases: the bound property for every `i` (it reduces to `{1..i} ⊆ ℕ∞`);
/// for each of the five shapes, the rule [`g_upper_bound_failure`] is
/// replayed against the family on sample candidates, and every candidate
/// it accepts is checked to lie above the claimed join.
pub fn chain_join_g() -> (FElement, ChainReport) {
    let join = FElement::id(false, FinCofSet::full());
    let mut cases = vec![CaseCheck {
        shape: "g_i".into(),
        constraint: "Finite{1..i} ∩ Cofinite{} = Finite{1..i}, so g_i ≤ id[N∞] for every i".into(),
        holds: (1..=16).all(|i| f_leq(&g(i), &join)) && g_upper_bound_failure(&join).is_none(),
    }];
    cases.extend(extremality_cases(
        &join,
        g_upper_bound_failure,
        |i, c| f_leq(&g(i), c),
        |c| f_leq(&join, c),
        "upper bound",
        "join ≤ candidate",
    ));
    let display = join.to_string();
    (
        join.clone(),
        ChainReport {
            value: join,
            display,
            cases,
        },
    )
}

/// `⋀ h_i` with its proof, structured like [`chain_join_g`].
pub fn chain_meet_h() -> (FElement, ChainReport) {
    let meet = FElement::zero();
    let mut cases = vec![CaseCheck {
        shape: "h_i".into(),
        constraint: "0 ≤ h_i for every i".into(),
        holds: (1..=16).all(|i| f_leq(&meet, &h(i))) && h_lower_bound_failure(&meet).is_none(),
    }];
    cases.extend(extremality_cases(
        &meet,
        h_lower_bound_failure,
        |i, c| f_leq(c, &h(i)),
        |c| f_leq(c, &meet),
        "lower bound",
        "candidate ≤ meet",
    ));
    let display = meet.to_string();
    (
        meet.clone(),
        ChainReport {
            value: meet,
            display,
            cases,
        },
    )
}

/// For each shape: the failure index the rule reports really is a failure,
/// candidates the rule accepts really bound the first indices past their
/// support, and accepted candidates compare correctly with the extremum.
fn extremality_cases(
    extremum: &FElement,
    failure: fn(&FElement) -> Option<u32>,
    bounds_at: impl Fn(u32, &FElement) -> bool,
    beyond: impl Fn(&FElement) -> bool,
    what: &str,
    order: &str,
) -> Vec<CaseCheck> {
    let mut by_shape: Vec<(&'static str, bool, usize)> = Vec::new();
    for c in shapes_up_to(4) {
        let ok = match failure(&c) {
            Some(i) => !bounds_at(i, &c),
            None => {
                c.max_support() == 0
                    && (1..=c.max_support() + 2).all(|i| bounds_at(i, &c))
                    && beyond(&c)
            }
        };
        let accepted = usize::from(failure(&c).is_none());
        match by_shape.iter_mut().find(|(s, _, _)| *s == shape_name(&c)) {
            Some(entry) => {
                entry.1 &= ok;
                entry.2 += accepted;
            }
            None => by_shape.push((shape_name(&c), ok, accepted)),
        }
    }
    by_shape
        .into_iter()
        .map(|(shape, holds, accepted)| CaseCheck {
            shape: shape.into(),
            constraint: if accepted == 0 {
                format!("never a {what}: a failing index is exhibited")
            } else {
                format!("{what} only with empty support, and then {order} (extremum {extremum})")
            },
            holds,
        })
        .collect()
}

/// Result of checking both failures of complete left-distributivity.
#[derive(Debug, Clone, Serialize)]
pub struct Example43Report {
    pub join_g: ChainReport,
    pub meet_h: ChainReport,
    pub left_dist_join_fails: bool,
    pub left_dist_meet_fails: bool,
    pub f_is_atom: bool,
    pub intermediates: Value,
}

impl Example43Report {
    /// Everything the example claims, including both chain proofs.
    pub fn passed(&self) -> bool {
        self.join_g.all_hold()
            && self.meet_h.all_hold()
            && self.left_dist_join_fails
            && self.left_dist_meet_fails
            && self.f_is_atom
    }

    pub fn to_json(&self) -> Value {
        json!({
            "join_g": self.join_g.display,
            "meet_h": self.meet_h.display,
            "left_dist_join_fails": self.left_dist_join_fails,
            "left_dist_meet_fails": self.left_dist_meet_fails,
            "intermediates": self.intermediates,
            "f_is_atom": self.f_is_atom,
            "proofs": {"join_g": self.join_g.cases, "meet_h": self.meet_h.cases},
        })
    }
}

pub fn verify_example_43() -> Example43Report {
    let f = FElement::F;
    let (join_g, join_report) = chain_join_g();
    let (meet_h, meet_report) = chain_meet_h();

    // f ⨟ g_i = 0 for every i because no finite set contains ∞; the join of
    // a family of zeros is 0.
    let f_g: Vec<FElement> = (1..=8).map(|i| f_compose(&f, &g(i))).collect();
    let f_g_uniform = f_g.iter().all(FElement::is_zero);
    let join_f_g = FElement::zero();
    let f_join_g = f_compose(&f, &join_g);

    // f ⨟ h_i = f for every i because every h_i contains ∞.
    let f_h: Vec<FElement> = (1..=8).map(|i| f_compose(&f, &h(i))).collect();
    let f_h_uniform = f_h.iter().all(|x| *x == f);
    let meet_f_h = f.clone();
    let f_meet_h = f_compose(&f, &meet_h);

    let left_dist_join_fails = f_g_uniform && f_join_g == f && f_join_g != join_f_g;
    let left_dist_meet_fails = f_h_uniform && f_meet_h.is_zero() && f_meet_h != meet_f_h;

    // x ∧ f is 0 for identity restrictions and f for f, so only 0 lies
    // strictly below f.
    let f_is_atom = !f.is_zero()
        && shapes_up_to(3)
            .iter()
            .filter(|x| f_leq(x, &f) && **x != f)
            .all(FElement::is_zero);

    let show = |xs: &[FElement]| xs.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    let intermediates = json!({
        "g_1..8": show(&(1..=8).map(g).collect::<Vec<_>>()),
        "f;g_1..8": show(&f_g),
        "f;join_g": f_join_g.to_string(),
        "join(f;g_i)": join_f_g.to_string(),
        "h_1..8": show(&(1..=8).map(h).collect::<Vec<_>>()),
        "f;h_1..8": show(&f_h),
        "f;meet_h": f_meet_h.to_string(),
        "meet(f;h_i)": meet_f_h.to_string(),
        "A(f)": f_antidomain(&f).to_string(),
    });

    Example43Report {
        join_g: join_report,
        meet_h: meet_report,
        left_dist_join_fails,
        left_dist_meet_fails,
        f_is_atom,
        intermediates,
    }
}

/// Every element of F whose support lies in `{1, …, n}`: `2^(n+2) + 1` of
/// them, zero first.
pub fn truncation_elements(n: u32) -> Vec<FElement> {
    let mut out = Vec::new();
    for p in [false, true] {
        for kind in 0..2 {
            for mask in 0u32..(1 << n) {
                let s: BTreeSet<u32> = (1..=n).filter(|i| mask & (1 << (i - 1)) != 0).collect();
                let set = if kind == 0 {
                    FinCofSet::Finite(s)
                } else {
                    FinCofSet::Cofinite(s)
                };
                out.push(FElement::id(p, set));
            }
        }
    }
    out.push(FElement::F);
    out
}

/// The subalgebra of elements with support in `{1, …, n}`, realised on the
/// base `p, 1, …, n, inf`. Element names are the symbolic displays.
pub fn truncate(n: u32) -> Result<ConcreteAlgebra, PfunError> {
    assert!(n >= 1, "truncations start at 1");
    let elements = truncation_elements(n);
    let base = std::iter::once("p".to_string())
        .chain((1..=n).map(|i| i.to_string()))
        .chain(std::iter::once("inf".to_string()))
        .collect();
    let functions = elements
        .iter()
        .map(|x| x.embed(n).expect("support within n"))
        .collect();
    let names = elements.iter().map(|x| x.to_string()).collect();
    ConcreteAlgebra::from_functions(base, names, functions, Signature::standard())
}

/// A disagreement between a symbolic operation and its concrete image.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TruncationMismatch {
    pub n: u32,
    pub op: &'static str,
    pub args: Vec<String>,
}

/// Compares the symbolic operations with the concrete ones on the
/// truncation at `n`, over every pair of elements.
pub fn check_truncation(n: u32) -> Result<(), TruncationMismatch> {
    let elements = truncation_elements(n);
    let emb = |x: &FElement| x.embed(n).expect("support within n");
    let images: Vec<PartialFunction> = elements.iter().map(emb).collect();
    let mismatch = |op, args: &[&FElement]| TruncationMismatch {
        n,
        op,
        args: args.iter().map(|x| x.to_string()).collect(),
    };
    for (x, fx) in elements.iter().zip(&images) {
        if emb(&f_antidomain(x)) != fx.antidomain() {
            return Err(mismatch("antidomain", &[x]));
        }
        for (y, fy) in elements.iter().zip(&images) {
            if emb(&f_compose(x, y)) != fx.compose(fy).expect("same base") {
                return Err(mismatch("compose", &[x, y]));
            }
            if emb(&f_meet(x, y)) != fx.intersect(fy).expect("same base") {
                return Err(mismatch("meet", &[x, y]));
            }
        }
    }
    Ok(())
}
