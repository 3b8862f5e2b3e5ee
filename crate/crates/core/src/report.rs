//! Outcome of a single identity check.

use std::fmt;

use crate::laurent::Ring;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub identity: String,
    pub params: String,
    pub ok: bool,
    /// Rendered residual when the check failed.
    pub residual: Option<String>,
}

impl Check {
    pub fn pass(identity: impl Into<String>, params: impl Into<String>) -> Self {
        Check { identity: identity.into(), params: params.into(), ok: true, residual: None }
    }

    pub fn fail(identity: impl Into<String>, params: impl Into<String>, residual: impl Into<String>) -> Self {
        Check { identity: identity.into(), params: params.into(), ok: false, residual: Some(residual.into()) }
    }

    /// Passes iff `residual` is zero.
    pub fn residual<V: Ring>(identity: impl Into<String>, params: impl Into<String>, residual: &V) -> Self {
        if residual.is_zero() {
            Check::pass(identity, params)
        } else {
            Check::fail(identity, params, clip(&residual.to_string()))
        }
    }

    /// Passes iff both sides agree.
    pub fn equal<V: Ring>(identity: impl Into<String>, params: impl Into<String>, lhs: &V, rhs: &V) -> Self {
        Check::residual(identity, params, &lhs.sub(rhs))
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.ok { "ok" } else { "FAIL" };
        write!(f, "{verdict} {} [{}]", self.identity, self.params)?;
        if let Some(r) = &self.residual {
            write!(f, " residual: {r}")?;
        }
        Ok(())
    }
}

pub fn all_ok(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.ok)
}

fn clip(s: &str) -> String {
    const MAX: usize = 400;
    if s.len() <= MAX {
        s.to_string()
    } else {
        let mut end = MAX;
        while !s.is_char_boundary(end) {
            end -= 1;
        }
        format!("{}... ({} bytes)", &s[..end], s.len())
    }
}
