//! Series-parallel / extension-parallel network terms: path enumeration,
//! structural recognition and the bad-configuration cross-check.

use crate::model::Action;
use crate::{Error, Result};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

/// Composition term denoting a single-commodity network. Every resource name
/// appears exactly once (arcs are distinct).
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum SPTerm {
    Single(String),
    Series(Box<SPTerm>, Box<SPTerm>),
    Parallel(Box<SPTerm>, Box<SPTerm>),
}

impl SPTerm {
    pub fn single(name: &str) -> SPTerm {
        SPTerm::Single(name.to_string())
    }

    pub fn series(a: SPTerm, b: SPTerm) -> SPTerm {
        SPTerm::Series(Box::new(a), Box::new(b))
    }

    pub fn parallel(a: SPTerm, b: SPTerm) -> SPTerm {
        SPTerm::Parallel(Box::new(a), Box::new(b))
    }

    /// Resource names in depth-first order.
    pub fn resources(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_resources(&mut out);
        out
    }

    fn collect_resources(&self, out: &mut Vec<String>) {
        match self {
            SPTerm::Single(r) => out.push(r.clone()),
            SPTerm::Series(a, b) | SPTerm::Parallel(a, b) => {
                a.collect_resources(out);
                b.collect_resources(out);
            }
        }
    }

    pub fn n_arcs(&self) -> usize {
        match self {
            SPTerm::Single(_) => 1,
            SPTerm::Series(a, b) | SPTerm::Parallel(a, b) => a.n_arcs() + b.n_arcs(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let names = self.resources();
        let mut seen = BTreeSet::new();
        for n in &names {
            if !seen.insert(n) {
                return Err(Error::Invalid(format!("resource {n} appears twice in term")));
            }
        }
        Ok(())
    }

    /// All origin-destination paths as sorted name lists, canonically ordered.
    pub fn enumerate_paths(&self, budget: usize) -> Result<Vec<Vec<String>>> {
        self.validate()?;
        let mut paths = self.paths_inner(budget)?;
        for p in &mut paths {
            p.sort();
        }
        paths.sort();
        Ok(paths)
    }

    fn paths_inner(&self, budget: usize) -> Result<Vec<Vec<String>>> {
        let paths = match self {
            SPTerm::Single(r) => vec![vec![r.clone()]],
            SPTerm::Parallel(a, b) => {
                let mut left = a.paths_inner(budget)?;
                left.extend(b.paths_inner(budget)?);
                left
            }
            SPTerm::Series(a, b) => {
                let left = a.paths_inner(budget)?;
                let right = b.paths_inner(budget)?;
                let count = left.len().checked_mul(right.len()).unwrap_or(usize::MAX);
                if count > budget {
                    return Err(Error::BudgetExceeded(format!(
                        "path count {count} exceeds budget {budget}"
                    )));
                }
                let mut out = Vec::with_capacity(count);
                for l in &left {
                    for r in &right {
                        let mut p = l.clone();
                        p.extend(r.iter().cloned());
                        out.push(p);
                    }
                }
                out
            }
        };
        if paths.len() > budget {
            return Err(Error::BudgetExceeded(format!(
                "path count {} exceeds budget {budget}",
                paths.len()
            )));
        }
        Ok(paths)
    }

    /// Structural EP recognition: a single arc, two EP terms in parallel, or
    /// single arcs in series (on either side) with an EP term. Series
    /// composition is associative on the underlying network, so nested series
    /// are flattened before checking: a series chain is EP iff at most one of
    /// its factors is not a single arc and that factor is EP.
    pub fn is_extension_parallel(&self) -> bool {
        match self {
            SPTerm::Single(_) => true,
            SPTerm::Parallel(a, b) => a.is_extension_parallel() && b.is_extension_parallel(),
            SPTerm::Series(_, _) => {
                let mut chain = Vec::new();
                self.series_chain(&mut chain);
                let non_single: Vec<&SPTerm> = chain
                    .iter()
                    .copied()
                    .filter(|t| !matches!(t, SPTerm::Single(_)))
                    .collect();
                match non_single.as_slice() {
                    [] => true,
                    [t] => t.is_extension_parallel(),
                    _ => false,
                }
            }
        }
    }

    fn series_chain<'a>(&'a self, out: &mut Vec<&'a SPTerm>) {
        match self {
            SPTerm::Series(a, b) => {
                a.series_chain(out);
                b.series_chain(out);
            }
            other => out.push(other),
        }
    }
}

/// Result of the bad-configuration scan over an action set.
#[derive(Clone, Debug)]
pub struct EPCertificate {
    pub is_ep: bool,
    /// First triple (A, B, C) with A meeting both C\B and B\C, if any.
    pub bad_configuration: Option<(Action, Action, Action)>,
}

/// Scans all ordered triples of distinct actions for a bad configuration:
/// A intersecting both C\B and B\C.
pub fn has_bad_configuration(actions: &[Action]) -> EPCertificate {
    for a in actions {
        for b in actions {
            if b == a {
                continue;
            }
            for c in actions {
                if c == a || c == b {
                    continue;
                }
                let c_minus_b = c
                    .resources()
                    .iter()
                    .any(|r| !b.contains(*r) && a.contains(*r));
                let b_minus_c = b
                    .resources()
                    .iter()
                    .any(|r| !c.contains(*r) && a.contains(*r));
                if c_minus_b && b_minus_c {
                    return EPCertificate {
                        is_ep: false,
                        bad_configuration: Some((a.clone(), b.clone(), c.clone())),
                    };
                }
            }
        }
    }
    EPCertificate { is_ep: true, bad_configuration: None }
}

fn intersect(a: &Action, b: &Action) -> BTreeSet<usize> {
    a.intersection(b).into_iter().collect()
}

fn property1(actions: &[Action]) -> bool {
    triples(actions, |a, b, c| {
        let ab = intersect(a, b);
        let ac = intersect(a, c);
        ab.is_subset(&ac) || ac.is_subset(&ab)
    })
}

fn property2(actions: &[Action]) -> bool {
    triples(actions, |a, b, c| {
        let ab = intersect(a, b);
        let cset: BTreeSet<usize> = c.resources().iter().copied().collect();
        if ab.is_subset(&cset) {
            return true;
        }
        let ac = intersect(a, c);
        let bc = intersect(b, c);
        let abc: BTreeSet<usize> = ab.intersection(&cset).copied().collect();
        ac == bc && bc == abc
    })
}

fn property3(actions: &[Action]) -> bool {
    has_bad_configuration(actions).is_ep
}

fn triples(actions: &[Action], pred: impl Fn(&Action, &Action, &Action) -> bool) -> bool {
    for a in actions {
        for b in actions {
            if b == a {
                continue;
            }
            for c in actions {
                if c == a || c == b {
                    continue;
                }
                if !pred(a, b, c) {
                    return false;
                }
            }
        }
    }
    true
}

/// Evaluates the three nested-intersection properties independently and
/// reports whether they agree. Lemma-level self-test, not a decision
/// procedure.
pub fn nested_intersections_agree(actions: &[Action]) -> bool {
    let p1 = property1(actions);
    let p2 = property2(actions);
    let p3 = property3(actions);
    p1 == p2 && p2 == p3
}

/// Seeded random composition term with `size` arcs. With `ep_only` only EP
/// productions are used.
pub fn random_term(seed: u64, size: usize, ep_only: bool) -> SPTerm {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counter = 0usize;
    random_term_with(&mut rng, size, ep_only, &mut counter)
}

/// Same as [`random_term`] but drawing from a caller-supplied generator.
pub fn random_term_with(
    rng: &mut impl Rng,
    size: usize,
    ep_only: bool,
    counter: &mut usize,
) -> SPTerm {
    assert!(size >= 1);
    if size == 1 {
        let name = format!("e{counter}");
        *counter += 1;
        return SPTerm::Single(name);
    }
    if ep_only {
        // parallel of two EP terms, or a single arc in series with an EP term
        if rng.gen_bool(0.5) {
            let left = rng.gen_range(1..size);
            let a = random_term_with(rng, left, true, counter);
            let b = random_term_with(rng, size - left, true, counter);
            SPTerm::parallel(a, b)
        } else {
            let arc = random_term_with(rng, 1, true, counter);
            let rest = random_term_with(rng, size - 1, true, counter);
            if rng.gen_bool(0.5) {
                SPTerm::series(arc, rest)
            } else {
                SPTerm::series(rest, arc)
            }
        }
    } else {
        let left = rng.gen_range(1..size);
        let a = random_term_with(rng, left, false, counter);
        let b = random_term_with(rng, size - left, false, counter);
        if rng.gen_bool(0.5) {
            SPTerm::series(a, b)
        } else {
            SPTerm::parallel(a, b)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn intro_term() -> SPTerm {
        SPTerm::parallel(
            SPTerm::single("m"),
            SPTerm::series(
                SPTerm::single("b"),
                SPTerm::parallel(SPTerm::single("l"), SPTerm::single("s")),
            ),
        )
    }

    fn wheatstone_like() -> SPTerm {
        SPTerm::series(
            SPTerm::parallel(SPTerm::single("r"), SPTerm::single("s")),
            SPTerm::parallel(SPTerm::single("t"), SPTerm::single("u")),
        )
    }

    fn to_actions(paths: &[Vec<String>]) -> Vec<Action> {
        // index resources by first appearance across paths
        let mut names: Vec<String> = Vec::new();
        for p in paths {
            for r in p {
                if !names.contains(r) {
                    names.push(r.clone());
                }
            }
        }
        paths
            .iter()
            .map(|p| {
                Action::new(
                    p.iter()
                        .map(|r| names.iter().position(|n| n == r).unwrap())
                        .collect(),
                )
            })
            .collect()
    }

    #[test]
    fn paths_of_known_networks() {
        let single = SPTerm::single("r");
        assert_eq!(single.enumerate_paths(10).unwrap(), vec![vec!["r".to_string()]]);

        let mut intro = intro_term().enumerate_paths(10).unwrap();
        intro.sort();
        assert_eq!(
            intro,
            vec![
                vec!["b".to_string(), "l".to_string()],
                vec!["b".to_string(), "s".to_string()],
                vec!["m".to_string()],
            ]
        );

        let four = wheatstone_like().enumerate_paths(10).unwrap();
        assert_eq!(four.len(), 4);
        assert!(four.contains(&vec!["r".to_string(), "t".to_string()]));
        assert!(four.contains(&vec!["s".to_string(), "u".to_string()]));
    }

    #[test]
    fn ep_recognition() {
        assert!(SPTerm::single("r").is_extension_parallel());
        assert!(intro_term().is_extension_parallel());
        assert!(!wheatstone_like().is_extension_parallel());
    }

    #[test]
    fn bad_configuration_scan() {
        let ep = to_actions(&intro_term().enumerate_paths(10).unwrap());
        assert!(has_bad_configuration(&ep).is_ep);

        let bad = to_actions(&wheatstone_like().enumerate_paths(10).unwrap());
        let cert = has_bad_configuration(&bad);
        assert!(!cert.is_ep);
        let (a, b, c) = cert.bad_configuration.unwrap();
        assert!(a.resources().iter().any(|r| !b.contains(*r) && c.contains(*r)));
        assert!(a.resources().iter().any(|r| b.contains(*r) && !c.contains(*r)));

        // fewer than three actions: vacuously EP
        assert!(has_bad_configuration(&bad[..2]).is_ep);
    }

    #[test]
    fn lemma_properties_agree() {
        let ep = to_actions(&intro_term().enumerate_paths(10).unwrap());
        assert!(nested_intersections_agree(&ep));
        let bad = to_actions(&wheatstone_like().enumerate_paths(10).unwrap());
        assert!(nested_intersections_agree(&bad));
        assert!(nested_intersections_agree(&ep[..1]));
    }

    #[test]
    fn random_terms_are_reproducible_and_wellformed() {
        let a = random_term(42, 5, true);
        let b = random_term(42, 5, true);
        assert_eq!(a, b);
        assert_eq!(a.n_arcs(), 5);
        assert!(a.is_extension_parallel());

        let sp = random_term(42, 5, false);
        assert_eq!(sp.n_arcs(), 5);
        assert!(sp.enumerate_paths(1000).is_ok());
    }

    #[test]
    fn ep_iff_no_bad_configuration_on_random_terms() {
        for seed in 0..120 {
            let size = 2 + (seed as usize % 7);
            let term = random_term(seed, size, seed % 2 == 0);
            let paths = term.enumerate_paths(10_000).unwrap();
            // skip terms whose parallel branches duplicate a path set
            let unique: BTreeSet<_> = paths.iter().collect();
            if unique.len() != paths.len() {
                continue;
            }
            let actions = to_actions(&paths);
            assert_eq!(
                has_bad_configuration(&actions).is_ep,
                term.is_extension_parallel(),
                "seed {seed}"
            );
            assert!(nested_intersections_agree(&actions));
        }
    }
}
