use std::collections::VecDeque;

use crate::error::{Error, GroupViolation, Result};

/// Above this order associativity is checked with Light's test on the
/// generators instead of over all triples.
pub const EXHAUSTIVE_ASSOCIATIVITY_MAX_ORDER: usize = 256;

/// A finite group given by its Cayley table.
///
/// Elements are the indices `0..order`; `cayley[g][h]` is the index of `g·h`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    cayley: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
    generators: Vec<usize>,
}

impl FiniteGroup {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn cayley(&self) -> &[Vec<usize>] {
        &self.cayley
    }

    #[inline]
    pub fn mul(&self, g: usize, h: usize) -> usize {
        self.cayley[g][h]
    }

    #[inline]
    pub fn inverse(&self, g: usize) -> usize {
        self.inverse[g]
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|g| (0..g).all(|h| self.cayley[g][h] == self.cayley[h][g]))
    }

    /// Direct product `G^{×n}`. Element `(g_1, …, g_n)` has index
    /// `g_1·|G|^{n-1} + … + g_n` and the generators are the embedded
    /// generators of each factor.
    pub fn direct_power(&self, n: usize) -> Result<FiniteGroup> {
        assert!(n >= 1, "direct power needs n >= 1");
        if n == 1 {
            return Ok(self.clone());
        }
        let order = self
            .order
            .checked_pow(n as u32)
            .ok_or(Error::DimensionCapExceeded { what: "group order", value: usize::MAX, cap: usize::MAX })?;
        let radices = vec![self.order; n];
        let digits: Vec<Vec<usize>> = (0..order)
            .map(|i| crate::linalg::mixed_radix_digits(i, &radices))
            .collect();
        let cayley = (0..order)
            .map(|a| {
                (0..order)
                    .map(|b| {
                        digits[a]
                            .iter()
                            .zip(&digits[b])
                            .fold(0, |acc, (&x, &y)| acc * self.order + self.cayley[x][y])
                    })
                    .collect()
            })
            .collect();
        let mut generators = Vec::new();
        for slot in 0..n {
            for &s in &self.generators {
                let mut d = vec![self.identity; n];
                d[slot] = s;
                generators.push(crate::linalg::mixed_radix_index(&d, &radices));
            }
        }
        validate_group(cayley, generators)
    }
}

/// Validates a Cayley table together with a generating set and computes the
/// identity and inverse tables.
pub fn validate_group(cayley: Vec<Vec<usize>>, generators: Vec<usize>) -> Result<FiniteGroup> {
    let bad = |v| Err(Error::NotAGroup(v));
    let order = cayley.len();
    if order == 0 {
        return bad(GroupViolation::EmptyTable);
    }
    for (row, entries) in cayley.iter().enumerate() {
        if entries.len() != order {
            return bad(GroupViolation::NotSquare { row, len: entries.len() });
        }
        if let Some((col, &value)) = entries.iter().enumerate().find(|(_, &v)| v >= order) {
            return bad(GroupViolation::EntryOutOfRange { row, col, value });
        }
    }

    let identity = match (0..order)
        .find(|&e| (0..order).all(|g| cayley[e][g] == g && cayley[g][e] == g))
    {
        Some(e) => e,
        None => return bad(GroupViolation::NoIdentity),
    };

    let mut inverse = Vec::with_capacity(order);
    for (g, row) in cayley.iter().enumerate() {
        match (0..order).find(|&h| row[h] == identity && cayley[h][g] == identity) {
            Some(h) => inverse.push(h),
            None => return bad(GroupViolation::MissingInverse { element: g }),
        }
    }

    if generators.is_empty() {
        return bad(GroupViolation::NoGenerators);
    }
    if let Some(&generator) = generators.iter().find(|&&s| s >= order) {
        return bad(GroupViolation::GeneratorOutOfRange { generator });
    }

    if order <= EXHAUSTIVE_ASSOCIATIVITY_MAX_ORDER {
        for a in 0..order {
            for b in 0..order {
                let ab = cayley[a][b];
                for c in 0..order {
                    if cayley[ab][c] != cayley[a][cayley[b][c]] {
                        return bad(GroupViolation::NotAssociative { a, b, c });
                    }
                }
            }
        }
    } else {
        // Light's test: x·(s·y) = (x·s)·y for all x, y and every generator s.
        for &s in &generators {
            for x in 0..order {
                let xs = cayley[x][s];
                for y in 0..order {
                    if cayley[x][cayley[s][y]] != cayley[xs][y] {
                        return bad(GroupViolation::NotAssociative { a: x, b: s, c: y });
                    }
                }
            }
        }
    }

    let reached = closure(&cayley, identity, &generators).len();
    if reached != order {
        return bad(GroupViolation::GeneratorsDoNotGenerate { reached, order });
    }

    Ok(FiniteGroup { order, cayley, identity, inverse, generators })
}

/// Elements reachable from the identity by right-multiplying generators.
fn closure(cayley: &[Vec<usize>], identity: usize, generators: &[usize]) -> Vec<usize> {
    let mut seen = vec![false; cayley.len()];
    let mut out = vec![identity];
    seen[identity] = true;
    let mut queue = VecDeque::from([identity]);
    while let Some(g) = queue.pop_front() {
        for &s in generators {
            let gs = cayley[g][s];
            if !seen[gs] {
                seen[gs] = true;
                out.push(gs);
                queue.push_back(gs);
            }
        }
    }
    out
}

/// Writes every element as a word in the generators, in BFS order. Returns
/// `(element, word)` pairs; the identity has the empty word.
pub fn generator_words(group: &FiniteGroup) -> Vec<(usize, Vec<usize>)> {
    let mut words: Vec<Option<Vec<usize>>> = vec![None; group.order];
    words[group.identity] = Some(Vec::new());
    let mut queue = VecDeque::from([group.identity]);
    let mut out = Vec::with_capacity(group.order);
    while let Some(g) = queue.pop_front() {
        let word = words[g].clone().unwrap();
        for &s in &group.generators {
            let gs = group.mul(g, s);
            if words[gs].is_none() {
                let mut w = word.clone();
                w.push(s);
                words[gs] = Some(w);
                queue.push_back(gs);
            }
        }
        out.push((g, word));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyclic(n: usize) -> Vec<Vec<usize>> {
        (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect()
    }

    #[test]
    fn trivial_group() {
        let g = validate_group(vec![vec![0]], vec![0]).unwrap();
        assert_eq!(g.order(), 1);
        assert_eq!(g.identity(), 0);
    }

    #[test]
    fn z2_inverse() {
        let g = validate_group(vec![vec![0, 1], vec![1, 0]], vec![1]).unwrap();
        assert_eq!(g.order(), 2);
        assert_eq!(g.inverse(1), 1);
        assert!(g.is_abelian());
    }

    #[test]
    fn identity_not_at_zero() {
        // Z_2 with the identity stored as element 1.
        let g = validate_group(vec![vec![1, 0], vec![0, 1]], vec![0]).unwrap();
        assert_eq!(g.identity(), 1);
        assert_eq!(g.inverse(0), 0);
    }

    #[test]
    fn rejects_missing_identity() {
        let err = validate_group(vec![vec![1, 1], vec![1, 1]], vec![0]).unwrap_err();
        assert_eq!(err, Error::NotAGroup(GroupViolation::NoIdentity));
    }

    #[test]
    fn rejects_missing_inverse() {
        // Monoid {e, z} with z·z = z.
        let err = validate_group(vec![vec![0, 1], vec![1, 1]], vec![1]).unwrap_err();
        assert_eq!(err, Error::NotAGroup(GroupViolation::MissingInverse { element: 1 }));
    }

    #[test]
    fn rejects_non_associative_loop() {
        // The smallest non-associative loop (order 5, a Latin square with identity 0).
        let table = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        match validate_group(table.clone(), vec![1, 2]).unwrap_err() {
            Error::NotAGroup(GroupViolation::NotAssociative { a, b, c }) => {
                assert_ne!(table[table[a][b]][c], table[a][table[b][c]]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_out_of_range_and_ragged() {
        assert!(matches!(
            validate_group(vec![vec![0, 2], vec![1, 0]], vec![1]),
            Err(Error::NotAGroup(GroupViolation::EntryOutOfRange { row: 0, col: 1, value: 2 }))
        ));
        assert!(matches!(
            validate_group(vec![vec![0, 1], vec![1]], vec![1]),
            Err(Error::NotAGroup(GroupViolation::NotSquare { row: 1, len: 1 }))
        ));
    }

    #[test]
    fn rejects_non_generating_set() {
        let err = validate_group(cyclic(4), vec![2]).unwrap_err();
        assert_eq!(
            err,
            Error::NotAGroup(GroupViolation::GeneratorsDoNotGenerate { reached: 2, order: 4 })
        );
        assert_eq!(
            validate_group(cyclic(4), vec![]).unwrap_err(),
            Error::NotAGroup(GroupViolation::NoGenerators)
        );
    }

    #[test]
    fn light_test_path_for_large_orders() {
        let g = validate_group(cyclic(300), vec![1]).unwrap();
        assert_eq!(g.order(), 300);
        assert_eq!(g.inverse(7), 293);
    }

    #[test]
    fn direct_power_of_z2() {
        let z2 = validate_group(cyclic(2), vec![1]).unwrap();
        let g = z2.direct_power(2).unwrap();
        assert_eq!(g.order(), 4);
        assert!(g.is_abelian());
        // (1,0)·(1,1) = (0,1)
        assert_eq!(g.mul(2, 3), 1);
        assert_eq!(g.generators(), &[2, 1]);
    }

    #[test]
    fn generator_words_reproduce_every_element() {
        let g = validate_group(cyclic(6), vec![1]).unwrap();
        let words = generator_words(&g);
        assert_eq!(words.len(), 6);
        for (element, word) in words {
            let product = word.iter().fold(g.identity(), |acc, &s| g.mul(acc, s));
            assert_eq!(product, element);
        }
    }
}
