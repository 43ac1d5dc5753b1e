//! Finite groupoids given by explicit composition tables.

use crate::error::{Error, Result};
use crate::gen::cayley::CayleyTable;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupoidPresentation {
    pub objects: usize,
    /// `(source, target)` of each morphism.
    pub ends: Vec<(usize, usize)>,
    /// `compose[g][f] = Some(g∘f)` exactly when `source(g) = target(f)`.
    pub compose: Vec<Vec<Option<usize>>>,
    pub identities: Vec<usize>,
    pub inverses: Vec<usize>,
}

impl GroupoidPresentation {
    pub fn morphism_count(&self) -> usize {
        self.ends.len()
    }

    pub fn validate(&self) -> Result<()> {
        let m = self.morphism_count();
        let bad = |s: String| Err(Error::InvalidGroupoid(s));
        if self.compose.len() != m || self.compose.iter().any(|r| r.len() != m) {
            return bad("composition table has wrong shape".into());
        }
        if self.identities.len() != self.objects || self.inverses.len() != m {
            return bad("identity or inverse list has wrong length".into());
        }
        for (g, &(s, t)) in self.ends.iter().enumerate() {
            if s >= self.objects || t >= self.objects {
                return bad(format!("morphism {g} has an unknown end"));
            }
        }
        for g in 0..m {
            for f in 0..m {
                let (sg, tg) = self.ends[g];
                let (sf, tf) = self.ends[f];
                match (sg == tf, self.compose[g][f]) {
                    (true, Some(h)) => {
                        if h >= m || self.ends[h] != (sf, tg) {
                            return bad(format!("{g}∘{f} has the wrong ends"));
                        }
                    }
                    (false, None) => {}
                    _ => return bad(format!("{g}∘{f} defined on non-composable pair")),
                }
            }
        }
        for (x, &e) in self.identities.iter().enumerate() {
            if self.ends.get(e) != Some(&(x, x)) {
                return bad(format!("identity of {x} is not a loop at {x}"));
            }
            for f in 0..m {
                if self.ends[f].1 == x && self.compose[e][f] != Some(f) {
                    return bad(format!("identity of {x} fails on {f}"));
                }
                if self.ends[f].0 == x && self.compose[f][e] != Some(f) {
                    return bad(format!("identity of {x} fails on {f}"));
                }
            }
        }
        for h in 0..m {
            for g in 0..m {
                for f in 0..m {
                    let l = self.compose[h][g].and_then(|hg| self.compose[hg][f]);
                    let r = self.compose[g][f].and_then(|gf| self.compose[h][gf]);
                    if l != r {
                        return bad(format!("composition not associative at ({h}, {g}, {f})"));
                    }
                }
            }
        }
        for (g, &gi) in self.inverses.iter().enumerate() {
            let (s, t) = self.ends[g];
            if gi >= m
                || self.compose[gi][g] != Some(self.identities[s])
                || self.compose[g][gi] != Some(self.identities[t])
            {
                return bad(format!("morphism {g} has no inverse"));
            }
        }
        Ok(())
    }

    /// One morphism `y → x` for every ordered pair, numbered `x*n + y`.
    pub fn pair(n: usize) -> GroupoidPresentation {
        let mut ends = Vec::new();
        for x in 0..n {
            for y in 0..n {
                ends.push((y, x));
            }
        }
        let compose = (0..n * n)
            .map(|g| {
                (0..n * n)
                    .map(|f| {
                        let (gx, gy) = (g / n, g % n);
                        let (fx, fy) = (f / n, f % n);
                        (gy == fx).then_some(gx * n + fy)
                    })
                    .collect()
            })
            .collect();
        GroupoidPresentation {
            objects: n,
            ends,
            compose,
            identities: (0..n).map(|x| x * n + x).collect(),
            inverses: (0..n * n).map(|g| (g % n) * n + g / n).collect(),
        }
    }

    /// A group seen as a groupoid with one object.
    pub fn one_object(g: &CayleyTable) -> Result<GroupoidPresentation> {
        if let Some((a, b, c)) = g.associator_witness() {
            return Err(Error::InvalidGroupoid(format!(
                "table is not associative at ({a}, {b}, {c})"
            )));
        }
        let n = g.order();
        let inverses = g
            .inverses()
            .map_err(|e| Error::InvalidGroupoid(e.to_string()))?;
        Ok(GroupoidPresentation {
            objects: 1,
            ends: vec![(0, 0); n],
            compose: (0..n)
                .map(|a| (0..n).map(|b| Some(g.mul(a, b))).collect())
                .collect(),
            identities: vec![g.identity()],
            inverses,
        })
    }

    pub fn disjoint_union(&self, other: &GroupoidPresentation) -> GroupoidPresentation {
        let (m, o) = (self.morphism_count(), self.objects);
        let mut ends = self.ends.clone();
        ends.extend(other.ends.iter().map(|&(s, t)| (s + o, t + o)));
        let total = m + other.morphism_count();
        let compose = (0..total)
            .map(|g| {
                (0..total)
                    .map(|f| match (g < m, f < m) {
                        (true, true) => self.compose[g][f],
                        (false, false) => other.compose[g - m][f - m].map(|h| h + m),
                        _ => None,
                    })
                    .collect()
            })
            .collect();
        let mut identities = self.identities.clone();
        identities.extend(other.identities.iter().map(|e| e + m));
        let mut inverses = self.inverses.clone();
        inverses.extend(other.inverses.iter().map(|e| e + m));
        GroupoidPresentation {
            objects: o + other.objects,
            ends,
            compose,
            identities,
            inverses,
        }
    }
}
