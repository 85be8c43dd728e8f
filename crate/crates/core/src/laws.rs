//! Distributivity of composition over joins and meets, checked on finite
//! tables.
//!
//! Right-distributivity over joins holds completely in every algebra of
//! partial functions. Left-distributivity holds for finite families only,
//! and right-distributivity over meets can fail outright.

use serde::Serialize;

use crate::algebra::{Elem, FiniteAlgebra};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DistLaw {
    /// `(⋁S) ⨟ a = ⋁(S ⨟ a)`.
    RightOverJoins,
    /// `a ⨟ ⋁S = ⋁(a ⨟ S)`.
    LeftOverJoins,
    /// `a ⨟ ⋀S = ⋀(a ⨟ S)`.
    LeftOverMeets,
    /// `(⋀S) ⨟ a = ⋀(S ⨟ a)`.
    RightOverMeets,
}

impl DistLaw {
    pub const ALL: [DistLaw; 4] = [
        DistLaw::RightOverJoins,
        DistLaw::LeftOverJoins,
        DistLaw::LeftOverMeets,
        DistLaw::RightOverMeets,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DistLaw::RightOverJoins => "right-over-joins",
            DistLaw::LeftOverJoins => "left-over-joins",
            DistLaw::LeftOverMeets => "left-over-meets",
            DistLaw::RightOverMeets => "right-over-meets",
        }
    }

    fn over_joins(self) -> bool {
        matches!(self, DistLaw::RightOverJoins | DistLaw::LeftOverJoins)
    }

    fn composes_left(self) -> bool {
        matches!(self, DistLaw::LeftOverJoins | DistLaw::LeftOverMeets)
    }
}

/// Which families a check ranges over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scope {
    /// Two-element families `{b, c}`.
    Pairs,
    /// Every subset of the carrier (the empty set only for joins).
    AllSubsets,
}

/// A family `set` and element `a` where the law fails. `lhs` is the side
/// where the extremum is taken first; `None` means an extremum does not
/// exist.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DistViolation {
    pub law: DistLaw,
    pub a: Elem,
    pub set: Vec<Elem>,
    pub lhs: Option<Elem>,
    pub rhs: Option<Elem>,
}

/// Largest carrier [`Scope::AllSubsets`] accepts.
pub const MAX_SUBSET_CARRIER: usize = 20;

/// Up- and down-sets as bitmasks, for fast extrema of many families.
struct Bounds {
    up: Vec<u64>,
    down: Vec<u64>,
    all: u64,
}

impl Bounds {
    fn new(alg: &FiniteAlgebra) -> Option<Self> {
        let n = alg.len();
        if n > 64 {
            return None;
        }
        let mut up = vec![0u64; n];
        let mut down = vec![0u64; n];
        for a in 0..n {
            for b in 0..n {
                if alg.leq(a, b) {
                    up[a] |= 1 << b;
                    down[b] |= 1 << a;
                }
            }
        }
        let all = if n == 64 { u64::MAX } else { (1 << n) - 1 };
        Some(Bounds { up, down, all })
    }

    fn join(&self, set: u64) -> Option<Elem> {
        let ub = ones(set).fold(self.all, |m, s| m & self.up[s]);
        ones(ub).find(|&u| ub & !self.up[u] == 0)
    }

    fn meet(&self, set: u64) -> Option<Elem> {
        let lb = ones(set).fold(self.all, |m, s| m & self.down[s]);
        ones(lb).find(|&l| lb & !self.down[l] == 0)
    }
}

fn ones(mut m: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        (m != 0).then(|| {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            i
        })
    })
}

/// First violation of `law`, scanning families in increasing bitmask order
/// and `a` in index order. Families whose own extremum does not exist are
/// skipped, as are empty families for meets.
///
/// Panics if the carrier exceeds 64 elements, or [`MAX_SUBSET_CARRIER`]
/// with [`Scope::AllSubsets`].
pub fn first_violation(alg: &FiniteAlgebra, law: DistLaw, scope: Scope) -> Option<DistViolation> {
    let n = alg.len();
    let bounds = Bounds::new(alg).expect("at most 64 elements");
    let families: Box<dyn Iterator<Item = u64>> = match scope {
        Scope::Pairs => Box::new(
            (0..n).flat_map(move |b| (b + 1..n).map(move |c| (1u64 << b) | (1u64 << c))),
        ),
        Scope::AllSubsets => {
            assert!(n <= MAX_SUBSET_CARRIER, "too many subsets");
            Box::new(0u64..(1u64 << n))
        }
    };
    for set in families {
        if set == 0 && !law.over_joins() {
            continue;
        }
        let extremum = if law.over_joins() {
            bounds.join(set)
        } else {
            bounds.meet(set)
        };
        let Some(x) = extremum else { continue };
        for a in 0..n {
            let comp = |s: Elem| {
                if law.composes_left() {
                    alg.compose(a, s)
                } else {
                    alg.compose(s, a)
                }
            };
            let image = ones(set).fold(0u64, |m, s| m | 1 << comp(s));
            let lhs = Some(comp(x));
            let rhs = if law.over_joins() {
                bounds.join(image)
            } else {
                bounds.meet(image)
            };
            if lhs != rhs {
                return Some(DistViolation {
                    law,
                    a,
                    set: ones(set).collect(),
                    lhs,
                    rhs,
                });
            }
        }
    }
    None
}

/// Checks the laws that hold in every algebra of partial functions:
/// complete right-distributivity over joins, and left-distributivity over
/// finite joins and meets.
pub fn check_representable_laws(alg: &FiniteAlgebra, scope: Scope) -> Vec<DistViolation> {
    [DistLaw::RightOverJoins, DistLaw::LeftOverJoins, DistLaw::LeftOverMeets]
        .into_iter()
        .filter_map(|law| first_violation(alg, law, scope))
        .collect()
}

/// `(b ∧ c) ⨟ a` against `(b ⨟ a) ∧ (c ⨟ a)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RightMeetInstance {
    pub b: Elem,
    pub c: Elem,
    pub a: Elem,
    pub meet_then_compose: Elem,
    pub compose_then_meet: Elem,
}

impl RightMeetInstance {
    pub fn new(alg: &FiniteAlgebra, b: Elem, c: Elem, a: Elem) -> Self {
        RightMeetInstance {
            b,
            c,
            a,
            meet_then_compose: alg.compose(alg.meet(b, c), a),
            compose_then_meet: alg.meet(alg.compose(b, a), alg.compose(c, a)),
        }
    }

    pub fn fails(&self) -> bool {
        self.meet_then_compose != self.compose_then_meet
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boolean_algebras_satisfy_everything() {
        for n in 0..=3 {
            let b = FiniteAlgebra::boolean_as_algebra(n);
            for law in DistLaw::ALL {
                assert_eq!(first_violation(&b, law, Scope::AllSubsets), None);
            }
        }
    }

    #[test]
    fn empty_join_is_zero() {
        // ⋁∅ ⨟ a = 0 = ⋁∅, so the empty family never fails.
        let b = FiniteAlgebra::boolean_as_algebra(2);
        let bounds = Bounds::new(&b).unwrap();
        assert_eq!(bounds.join(0), Some(0));
        assert_eq!(bounds.meet(0), Some(3));
    }

    #[test]
    fn detects_a_broken_table() {
        // In B2 with {0} ⨟ {0} = 0 the family {{0}} breaks left joins.
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
        let v = first_violation(&bad, DistLaw::LeftOverJoins, Scope::Pairs).unwrap();
        assert_ne!(v.lhs, v.rhs);
    }
}
