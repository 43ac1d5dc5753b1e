//! Named pass/fail checks with basis-level counterexamples.

use serde::Serialize;

use crate::error::Result;
use crate::morphism::Morphism;

/// Where the two sides of an identity disagree, as multi-indices over the
/// domain and codomain factors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub input: Vec<usize>,
    pub output: Vec<usize>,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    pub fn pass(name: &str) -> Check {
        Check {
            name: name.to_string(),
            passed: true,
            counterexample: None,
            detail: None,
        }
    }

    pub fn fail(name: &str, detail: impl Into<String>) -> Check {
        Check {
            name: name.to_string(),
            passed: false,
            counterexample: None,
            detail: Some(detail.into()),
        }
    }

    pub fn flag(name: &str, ok: bool, detail: impl Into<String>) -> Check {
        if ok {
            Check::pass(name)
        } else {
            Check::fail(name, detail)
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Check {
        self.detail = Some(detail.into());
        self
    }
}

/// Compares two morphisms exactly on every basis vector of the domain.
pub fn check_eq(name: &str, lhs: &Morphism, rhs: &Morphism) -> Result<Check> {
    Ok(match lhs.first_difference(rhs)? {
        None => Check::pass(name),
        Some(d) => Check {
            name: name.to_string(),
            passed: false,
            counterexample: Some(Counterexample {
                input: lhs.dom().unflatten(d.column),
                output: lhs.cod().unflatten(d.row),
                lhs: d.lhs.to_string(),
                rhs: d.rhs.to_string(),
            }),
            detail: None,
        },
    })
}

/// Checks a chain `a = b = c = …`, each neighbour pair under its own suffix.
pub fn check_chain(name: &str, sides: &[&Morphism]) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for (k, w) in sides.windows(2).enumerate() {
        let label = if sides.len() == 2 {
            name.to_string()
        } else {
            format!("{name}/{}", k + 1)
        };
        out.push(check_eq(&label, w[0], w[1])?);
    }
    Ok(out)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Report {
    pub title: String,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(title: &str) -> Report {
        Report {
            title: title.to_string(),
            checks: Vec::new(),
        }
    }

    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn extend(&mut self, cs: impl IntoIterator<Item = Check>) {
        self.checks.extend(cs);
    }

    /// Appends another report's checks, prefixing their names.
    pub fn absorb(&mut self, prefix: &str, other: Report) {
        for mut c in other.checks {
            c.name = format!("{prefix}.{}", c.name);
            self.checks.push(c);
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }
}
