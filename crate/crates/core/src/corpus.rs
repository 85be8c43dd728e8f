//! Test corpora: seeded random closures of partial functions, and every
//! valid table algebra of a given size up to isomorphism.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{Elem, FiniteAlgebra};
use crate::pfun::{close_generators, ConcreteAlgebra, PartialFunction, PfunError, Signature};

/// One random sample: its generators and their (⨟, ∧, A)-closure.
#[derive(Debug, Clone)]
pub struct CorpusSample {
    pub index: usize,
    pub generators: Vec<PartialFunction>,
    pub closure: ConcreteAlgebra,
}

/// Shape of the random corpus.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CorpusParams {
    pub samples: usize,
    pub max_base: usize,
    pub max_generators: usize,
}

impl Default for CorpusParams {
    fn default() -> Self {
        CorpusParams {
            samples: 500,
            max_base: 3,
            max_generators: 2,
        }
    }
}

pub fn random_function(rng: &mut impl Rng, base_len: usize) -> PartialFunction {
    let map = (0..base_len)
        .map(|_| {
            let y = rng.gen_range(0..=base_len);
            (y < base_len).then_some(y)
        })
        .collect();
    PartialFunction::from_map(map).expect("points drawn from the base")
}

/// Closures of 1 to `max_generators` uniformly random partial functions on
/// bases of 1 to `max_base` points. Deterministic in `seed`.
pub fn random_corpus(seed: u64, params: CorpusParams) -> Result<Vec<CorpusSample>, PfunError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let signature = Signature::standard();
    (0..params.samples)
        .map(|index| {
            let base_len = rng.gen_range(1..=params.max_base);
            let count = rng.gen_range(1..=params.max_generators);
            let generators: Vec<PartialFunction> = (0..count)
                .map(|_| random_function(&mut rng, base_len))
                .collect();
            let base = (0..base_len).map(|i| format!("p{i}")).collect();
            let closure = close_generators(base, &generators, &signature, usize::MAX)?;
            Ok(CorpusSample {
                index,
                generators,
                closure,
            })
        })
        .collect()
}

/// Meet tables of every meet-semilattice on `0..n` with least element 0,
/// one per labeled partial order.
pub fn semilattices_with_bottom(n: usize) -> Vec<Vec<Elem>> {
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    // Candidate strict relations among 1..n, as bit (i, j) meaning i < j.
    let pairs: Vec<(usize, usize)> = (1..n)
        .flat_map(|i| (1..n).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect();
    'rel: for mask in 0u64..(1 << pairs.len()) {
        let mut le = vec![vec![false; n]; n];
        for i in 0..n {
            le[i][i] = true;
            le[0][i] = true;
        }
        for (bit, &(i, j)) in pairs.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                le[i][j] = true;
            }
        }
        // Antisymmetric and transitive as given, so each order is seen once.
        for i in 0..n {
            for j in 0..n {
                if i != j && le[i][j] && le[j][i] {
                    continue 'rel;
                }
                for k in 0..n {
                    if le[i][j] && le[j][k] && !le[i][k] {
                        continue 'rel;
                    }
                }
            }
        }
        let mut meet = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                let lower: Vec<usize> = (0..n).filter(|&c| le[c][a] && le[c][b]).collect();
                match lower.iter().find(|&&c| lower.iter().all(|&d| le[d][c])) {
                    Some(&m) => meet[a * n + b] = m,
                    None => continue 'rel,
                }
            }
        }
        out.push(meet);
    }
    out
}

fn permutations_fixing_zero(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for v in 1..used.len() {
            if !used[v] {
                used[v] = true;
                prefix.push(v);
                go(prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    if n == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut used = vec![false; n];
    used[0] = true;
    go(&mut vec![0], &mut used, &mut out);
    out
}

/// The table `t` (row-major, `n` columns; unary when `t.len() == n`)
/// relabeled by `perm`, i.e. the table of the isomorphic copy in which
/// element `a` is called `perm[a]`.
fn relabel_table(t: &[Elem], perm: &[usize], n: usize) -> Vec<Elem> {
    let mut out = vec![0; t.len()];
    if t.len() == n {
        for a in 0..n {
            out[perm[a]] = perm[t[a]];
        }
    } else {
        for a in 0..n {
            for b in 0..n {
                out[perm[a] * n + perm[b]] = perm[t[a * n + b]];
            }
        }
    }
    out
}

/// Counters from a sweep.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SweepStats {
    pub semilattices: usize,
    pub meet_antidomain_classes: usize,
    pub algebras: u64,
}

/// Calls `visit` once for every valid algebra on `n` elements up to
/// isomorphism, in a fixed order.
///
/// Every valid algebra has a least element, so each class has members with
/// zero at index 0; among those the one with the lexicographically least
/// `(meet, antidomain, compose)` is emitted. Elements are named `0`, `1`, ….
pub fn for_each_small_algebra(n: usize, mut visit: impl FnMut(&FiniteAlgebra)) -> SweepStats {
    let mut stats = SweepStats::default();
    if n == 0 {
        return stats;
    }
    let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    let perms = permutations_fixing_zero(n);
    let meets = semilattices_with_bottom(n);
    stats.semilattices = meets.len();
    for meet in &meets {
        if perms.iter().any(|p| relabel_table(meet, p, n) < *meet) {
            continue;
        }
        let meet_stab: Vec<&Vec<usize>> = perms
            .iter()
            .filter(|p| relabel_table(meet, p, n) == *meet)
            .collect();
        for ad_code in 0..n.pow(n as u32) {
            let ad: Vec<Elem> = (0..n).map(|i| ad_code / n.pow(i as u32) % n).collect();
            if meet_stab.iter().any(|p| relabel_table(&ad, p, n) < ad) {
                continue;
            }
            let stab: Vec<&Vec<usize>> = meet_stab
                .iter()
                .copied()
                .filter(|p| relabel_table(&ad, p, n) == ad)
                .collect();
            stats.meet_antidomain_classes += 1;
            // Row and column 0 are zero; A(a) ⨟ a is zero; the rest is free.
            let mut fixed = vec![false; n * n];
            for a in 0..n {
                fixed[a] = true;
                fixed[a * n] = true;
                fixed[ad[a] * n + a] = true;
            }
            let free: Vec<usize> = (0..n * n).filter(|&i| !fixed[i]).collect();
            let mut compose = vec![0; n * n];
            let total = n.pow(free.len() as u32);
            for code in 0..total {
                let mut c = code;
                for &i in &free {
                    compose[i] = c % n;
                    c /= n;
                }
                if stab.iter().any(|p| relabel_table(&compose, p, n) < compose) {
                    continue;
                }
                let alg = FiniteAlgebra::from_flat(
                    names.clone(),
                    compose.clone(),
                    meet.clone(),
                    ad.clone(),
                )
                .expect("tables in range");
                stats.algebras += 1;
                visit(&alg);
            }
        }
    }
    stats
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Law;
    use std::collections::HashSet;

    #[test]
    fn semilattice_counts() {
        // Labeled posets on 0, 1, 2 elements with a bottom adjoined.
        assert_eq!(semilattices_with_bottom(1).len(), 1);
        assert_eq!(semilattices_with_bottom(2).len(), 1);
        assert_eq!(semilattices_with_bottom(3).len(), 3);
        assert_eq!(semilattices_with_bottom(4).len(), 19);
    }

    #[test]
    fn corpus_is_deterministic() {
        let params = CorpusParams {
            samples: 20,
            ..CorpusParams::default()
        };
        let a = random_corpus(7, params).unwrap();
        let b = random_corpus(7, params).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.closure.functions(), y.closure.functions());
        }
    }

    /// Canonical key of an algebra under every permutation of its elements,
    /// zero included.
    fn iso_key(alg: &FiniteAlgebra) -> Vec<Elem> {
        let n = alg.len();
        let mut all = Vec::new();
        let mut perm: Vec<usize> = (0..n).collect();
        fn heap(k: usize, perm: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if k <= 1 {
                out.push(perm.clone());
                return;
            }
            for i in 0..k {
                heap(k - 1, perm, out);
                let j = if k % 2 == 0 { i } else { 0 };
                perm.swap(j, k - 1);
            }
        }
        heap(n, &mut perm, &mut all);
        all.iter()
            .map(|p| {
                let mut key = relabel_table(alg.meet_table(), p, n);
                key.extend(relabel_table(alg.antidomain_table(), p, n));
                key.extend(relabel_table(alg.compose_table(), p, n));
                key
            })
            .min()
            .expect("at least one permutation")
    }

    /// Every table on `n` elements passing `validate`, reduced to
    /// isomorphism classes by brute force.
    fn classes_by_filtering(n: usize) -> HashSet<Vec<Elem>> {
        let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let nn = n * n;
        let mut classes = HashSet::new();
        let table = |mut code: usize, len: usize| {
            (0..len)
                .map(|_| {
                    let v = code % n;
                    code /= n;
                    v
                })
                .collect::<Vec<_>>()
        };
        for m in 0..n.pow(nn as u32) {
            let meet = table(m, nn);
            // Skip meet tables that already fail the semilattice laws.
            let probe =
                FiniteAlgebra::from_flat(names.clone(), vec![0; nn], meet.clone(), vec![0; n])
                    .unwrap();
            let semilattice = [
                Law::MeetIdempotent,
                Law::MeetCommutative,
                Law::MeetAssociative,
            ];
            if semilattice
                .iter()
                .any(|l| l.first_violation(&probe).is_some())
            {
                continue;
            }
            for a in 0..n.pow(n as u32) {
                let ad = table(a, n);
                for c in 0..n.pow(nn as u32) {
                    let alg = FiniteAlgebra::from_flat(
                        names.clone(),
                        table(c, nn),
                        meet.clone(),
                        ad.clone(),
                    )
                    .unwrap();
                    if alg.validate().passed {
                        classes.insert(iso_key(&alg));
                    }
                }
            }
        }
        classes
    }

    #[test]
    fn sweep_matches_filtered_enumeration() {
        for n in 1..=3 {
            let mut seen = HashSet::new();
            let stats = for_each_small_algebra(n, |alg| {
                assert!(alg.validate().passed);
                assert!(seen.insert(iso_key(alg)), "duplicate class");
            });
            assert_eq!(stats.algebras as usize, seen.len());
            assert_eq!(seen, classes_by_filtering(n), "n = {n}");
        }
    }
}
