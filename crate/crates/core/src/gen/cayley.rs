//! Cayley tables of finite loops.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};

/// Multiplication table of a finite loop: `table[x][y] = x·y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CayleyTable {
    table: Vec<Vec<usize>>,
    identity: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IpReport {
    pub holds: bool,
    /// Two-sided inverse of each element, when one exists.
    pub inverses: Vec<Option<usize>>,
    /// First pair `(x, y)` breaking `x⁻¹(xy) = y = (yx)x⁻¹`.
    pub witness: Option<(usize, usize)>,
}

impl CayleyTable {
    /// Validates the quasigroup property and finds the identity.
    pub fn new(table: Vec<Vec<usize>>) -> Result<CayleyTable> {
        let n = table.len();
        if n == 0 {
            return Err(Error::NotALoop("empty table".into()));
        }
        for (x, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::NotALoop(format!("row {x} has length {}", row.len())));
            }
            if !is_permutation(row) {
                return Err(Error::NotALoop(format!("row {x} is not a permutation")));
            }
        }
        for y in 0..n {
            let col: Vec<usize> = table.iter().map(|r| r[y]).collect();
            if !is_permutation(&col) {
                return Err(Error::NotALoop(format!("column {y} is not a permutation")));
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or_else(|| Error::NotALoop("no two-sided identity".into()))?;
        Ok(CayleyTable { table, identity })
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.table[x][y]
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.table
    }

    /// Right inverse `y` with `x·y = e`.
    pub fn right_inverse(&self, x: usize) -> usize {
        (0..self.order()).find(|&y| self.mul(x, y) == self.identity).unwrap()
    }

    pub fn associator_witness(&self) -> Option<(usize, usize, usize)> {
        let n = self.order();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    pub fn is_associative(&self) -> bool {
        self.associator_witness().is_none()
    }

    pub fn ip_check(&self) -> IpReport {
        let n = self.order();
        let inverses: Vec<Option<usize>> = (0..n)
            .map(|x| {
                let y = self.right_inverse(x);
                (self.mul(y, x) == self.identity).then_some(y)
            })
            .collect();
        let mut witness = None;
        'outer: for x in 0..n {
            let Some(xi) = inverses[x] else {
                witness = Some((x, x));
                break;
            };
            for y in 0..n {
                if self.mul(xi, self.mul(x, y)) != y || self.mul(self.mul(y, x), xi) != y {
                    witness = Some((x, y));
                    break 'outer;
                }
            }
        }
        IpReport {
            holds: witness.is_none(),
            inverses,
            witness,
        }
    }

    /// Inverse map of an I.P. loop.
    pub fn inverses(&self) -> Result<Vec<usize>> {
        let rep = self.ip_check();
        match rep.witness {
            None => Ok(rep.inverses.into_iter().map(Option::unwrap).collect()),
            Some((x, y)) => Err(Error::IPVerificationFailed { x, y }),
        }
    }
}

fn is_permutation(v: &[usize]) -> bool {
    let mut seen = vec![false; v.len()];
    for &x in v {
        if x >= v.len() || seen[x] {
            return false;
        }
        seen[x] = true;
    }
    true
}

pub fn cyclic(n: usize) -> CayleyTable {
    let t = (0..n).map(|x| (0..n).map(|y| (x + y) % n).collect()).collect();
    CayleyTable::new(t).unwrap()
}

/// Permutations of `{0,1,2}` in lexicographic order, composed as functions
/// (`(g·h)(i) = g(h(i))`). Index 0 is the identity.
pub fn symmetric3() -> CayleyTable {
    let perms: Vec<[usize; 3]> = vec![
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let idx = |p: [usize; 3]| perms.iter().position(|q| *q == p).unwrap();
    let t = perms
        .iter()
        .map(|g| {
            perms
                .iter()
                .map(|h| idx([g[h[0]], g[h[1]], g[h[2]]]))
                .collect()
        })
        .collect();
    CayleyTable::new(t).unwrap()
}

/// The Chein double `M(G,2)`: element `i < n` is `g_i`, element `n+i` is `g_i u`.
pub fn chein_double(g: &CayleyTable) -> Result<CayleyTable> {
    if let Some((a, b, c)) = g.associator_witness() {
        return Err(Error::NotALoop(format!(
            "Chein double needs a group; ({a},{b},{c}) is not associative"
        )));
    }
    let n = g.order();
    let inv = g.inverses()?;
    let mut t = vec![vec![0; 2 * n]; 2 * n];
    for x in 0..n {
        for y in 0..n {
            t[x][y] = g.mul(x, y);
            t[x][n + y] = n + g.mul(y, x);
            t[n + x][y] = n + g.mul(x, inv[y]);
            t[n + x][n + y] = g.mul(inv[y], x);
        }
    }
    let m = CayleyTable::new(t)?;
    if let Some((x, y)) = m.ip_check().witness {
        return Err(Error::IPVerificationFailed { x, y });
    }
    Ok(m)
}

/// A loop of the given order, normalized to identity 0, that fails the inverse
/// property. Latin squares are drawn by randomized backtracking until one fails.
pub fn non_ip_loop(order: usize, seed: u64) -> Result<CayleyTable> {
    if order < 5 {
        return Err(Error::NotALoop(format!(
            "every loop of order {order} is a group"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..1000 {
        let mut t = vec![vec![usize::MAX; order]; order];
        for x in 0..order {
            t[0][x] = x;
            t[x][0] = x;
        }
        if fill(&mut t, 1, 1, &mut rng) {
            let c = CayleyTable::new(t)?;
            if !c.ip_check().holds {
                return Ok(c);
            }
        }
    }
    Err(Error::NotALoop("no non-I.P. loop found".into()))
}

fn fill(t: &mut Vec<Vec<usize>>, r: usize, c: usize, rng: &mut ChaCha8Rng) -> bool {
    let n = t.len();
    if r == n {
        return true;
    }
    let (nr, nc) = if c + 1 == n { (r + 1, 1) } else { (r, c + 1) };
    let mut cand: Vec<usize> = (0..n)
        .filter(|&v| (0..n).all(|k| t[r][k] != v && t[k][c] != v))
        .collect();
    cand.shuffle(rng);
    for v in cand {
        t[r][c] = v;
        if fill(t, nr, nc, rng) {
            return true;
        }
    }
    t[r][c] = usize::MAX;
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_groups_are_ip() {
        assert!(cyclic(2).ip_check().holds);
        assert!(symmetric3().ip_check().holds);
        assert!(symmetric3().associator_witness().is_none());
    }

    #[test]
    fn chein_doubles() {
        let c2 = chein_double(&cyclic(2)).unwrap();
        assert_eq!(c2.order(), 4);
        assert!(c2.is_associative());
        assert!(chein_double(&cyclic(3)).unwrap().is_associative());
        let m = chein_double(&symmetric3()).unwrap();
        assert_eq!(m.order(), 12);
        assert!(m.ip_check().holds);
        assert!(m.associator_witness().is_some());
    }

    #[test]
    fn non_ip_is_detected() {
        let t = non_ip_loop(5, 7).unwrap();
        let rep = t.ip_check();
        assert!(!rep.holds);
        let (x, y) = rep.witness.unwrap();
        let ok = match rep.inverses[x] {
            None => false,
            Some(xi) => t.mul(xi, t.mul(x, y)) == y && t.mul(t.mul(y, x), xi) == y,
        };
        assert!(!ok);
    }

    #[test]
    fn latin_violations_are_rejected() {
        assert!(matches!(
            CayleyTable::new(vec![vec![0, 1], vec![1, 1]]),
            Err(Error::NotALoop(_))
        ));
        assert!(matches!(
            CayleyTable::new(vec![vec![0, 2, 1], vec![2, 1, 0], vec![1, 0, 2]]),
            Err(Error::NotALoop(_))
        ));
    }
}
