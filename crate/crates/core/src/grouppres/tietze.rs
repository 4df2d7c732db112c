use serde::Serialize;

use super::presentation::Presentation;
use super::word::{Letter, Word};

pub const DEFAULT_BUDGET: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Simplified {
    pub presentation: Presentation,
    /// Eliminations plus shortenings performed.
    pub steps: usize,
    /// Budget ran out before a fixed point was reached.
    pub partial: bool,
}

/// Greedy deterministic Tietze simplification.
///
/// Each step is a generator elimination (the one minimizing the resulting
/// total relator length, ties to the lowest generator then lowest relator
/// index) or, when none is possible, one relator shortening `r ← r·s^±1`.
/// Eliminated generators are removed and the rest renumbered in order.
pub fn tietze_simplify(p: &Presentation, budget: usize) -> Simplified {
    let mut cur = p.normalized();
    let mut steps = 0;
    loop {
        if steps >= budget {
            let partial = best_elimination(&cur).is_some() || shorten_once(&cur).is_some();
            return Simplified { presentation: cur, steps, partial };
        }
        let elim = best_elimination(&cur);
        let total = cur.total_length();
        cur = match elim {
            // Length-increasing eliminations wait until no shortening applies.
            Some(c) if c.cost <= total => eliminate(&cur, &c),
            _ => match (shorten_once(&cur), elim) {
                (Some(next), _) => next,
                (None, Some(c)) => eliminate(&cur, &c),
                (None, None) => return Simplified { presentation: cur, steps, partial: false },
            },
        };
        steps += 1;
    }
}

struct Candidate {
    cost: usize,
    gen: usize,
    relator: usize,
}

/// Image of `gen` solved from a relator containing it exactly once.
fn solve_for(r: &Word, gen: usize) -> Word {
    let i = r.letters().iter().position(|l| l.gen == gen).expect("generator occurs");
    // r = x g^e y  ⇒  g^e = x^-1 y^-1 ⇒ g = (y x)^-e
    let rot = r.rotated(i + 1); // y x g^e
    let yx = Word(rot.letters()[..rot.len() - 1].to_vec());
    if r.letters()[i].inv {
        yx.reduced()
    } else {
        yx.inverse().reduced()
    }
}

fn best_elimination(p: &Presentation) -> Option<Candidate> {
    let mut best: Option<Candidate> = None;
    for gen in 0..p.generator_count {
        for (ri, r) in p.relators.iter().enumerate() {
            if r.occurrences(gen) != 1 {
                continue;
            }
            let img = solve_for(r, gen);
            let cost: usize = p
                .relators
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != ri)
                .map(|(_, s)| if s.occurrences(gen) == 0 { s.len() } else { s.substitute(gen, &img).cyclically_reduced().len() })
                .sum();
            if best.as_ref().is_none_or(|b| cost < b.cost) {
                best = Some(Candidate { cost, gen, relator: ri });
            }
        }
    }
    best
}

fn eliminate(p: &Presentation, c: &Candidate) -> Presentation {
    let img = solve_for(&p.relators[c.relator], c.gen);
    let map: Vec<usize> = (0..p.generator_count).map(|g| if g > c.gen { g - 1 } else { g }).collect();
    let relators = p
        .relators
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != c.relator)
        .map(|(_, s)| s.substitute(c.gen, &img).renumbered(&map))
        .collect();
    let mut names = p.names.clone();
    names.remove(c.gen);
    Presentation { generator_count: p.generator_count - 1, relators, names }.normalized()
}

/// Free cancellation at the junction of `rot(a, i)·rot(b, j)`.
fn junction_cancel(a: &[Letter], i: usize, b: &[Letter], j: usize) -> usize {
    let (n, m) = (a.len(), b.len());
    let mut k = 0;
    while k < n && k < m && a[(i + n - 1 - k) % n] == b[(j + k) % m].inverse() {
        k += 1;
    }
    k
}

/// First strictly shortening replacement `r ← rot(r)·rot(s^±1)`, scanning
/// `(r, s)` pairs in index order and taking the largest cancellation.
fn shorten_once(p: &Presentation) -> Option<Presentation> {
    for (ri, r) in p.relators.iter().enumerate() {
        for (si, s) in p.relators.iter().enumerate() {
            if si == ri || s.len() > 2 * r.len() {
                continue;
            }
            let inv = s.inverse();
            let mut best: Option<(usize, &Word, usize, usize)> = None;
            for t in [s, &inv] {
                for a in 0..r.len() {
                    for b in 0..t.len() {
                        let k = junction_cancel(r.letters(), a, t.letters(), b);
                        if 2 * k > s.len() && best.is_none_or(|(bk, ..)| k > bk) {
                            best = Some((k, t, a, b));
                        }
                    }
                }
            }
            if let Some((_, t, a, b)) = best {
                let w = r.rotated(a).concat(&t.rotated(b));
                let mut relators = p.relators.clone();
                relators[ri] = w;
                return Some(Presentation { relators, ..p.clone() }.normalized());
            }
        }
    }
    None
}

/// Rank if the presentation has no relators.
pub fn is_free(p: &Presentation) -> Option<usize> {
    p.relators.is_empty().then_some(p.generator_count)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn simp(s: &str) -> Presentation {
        tietze_simplify(&s.parse().unwrap(), DEFAULT_BUDGET).presentation
    }

    #[test]
    fn drops_generator_killed_by_relator() {
        assert_eq!(simp("< a, b | b >").to_string(), "< a | >");
    }

    #[test]
    fn solves_and_substitutes() {
        // both eliminations cost 5; the tie goes to the lower generator `a`
        assert_eq!(simp("< a, b | b^-1 a^2, b^3 a^-1 >").to_string(), "< b | b^5 >");
        assert_eq!(simp("< a, b | b^-1 a^2, b a^-1 >").to_string(), "< | >");
    }

    #[test]
    fn trefoil_two_generators() {
        // Wirtinger group of the trefoil with three arcs
        let p = simp("< x, y, z | z^-1 x y x^-1, x^-1 y z y^-1, y^-1 z x z^-1 >");
        assert_eq!(p.generator_count, 2);
        assert_eq!(p.relators.len(), 1);
        assert_eq!(p.relators[0].len(), 6);
    }

    #[test]
    fn shortening() {
        // the second relator cancels everything in the first except b^2
        let p: Presentation = "< a, b, c | a b a^-1 b^-1 c^2 a^2 b^2, a b a^-1 b^-1 c^2 a^2 >".parse().unwrap();
        let out = shorten_once(&p).unwrap();
        assert_eq!(out.relators[0], Word::from_powers(&[(1, 2)]));
    }

    #[test]
    fn free_detection() {
        assert_eq!(is_free(&"< a, b | >".parse().unwrap()), Some(2));
        assert_eq!(is_free(&"< a | a^3 >".parse().unwrap()), None);
    }

    #[test]
    fn never_grows() {
        for s in ["< a, b, c | a b c, a^2 b^-1 c a, c a b^2 >", "< a, b | a b a b^-1 a^-1 b^-1 >"] {
            let p: Presentation = s.parse().unwrap();
            let q = tietze_simplify(&p, DEFAULT_BUDGET);
            assert!(!q.partial);
            assert!(q.presentation.generator_count <= p.generator_count);
            assert!(q.presentation.total_length() <= p.normalized().total_length());
        }
    }

    #[test]
    fn budget_marks_partial() {
        let p: Presentation = "< x, y, z | z^-1 x y x^-1, x^-1 y z y^-1, y^-1 z x z^-1 >".parse().unwrap();
        let q = tietze_simplify(&p, 0);
        assert!(q.partial);
        assert_eq!(q.presentation.generator_count, 3);
    }
}
