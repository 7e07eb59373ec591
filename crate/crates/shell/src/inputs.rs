//! Parsing of user-facing values: beta specifications and class selectors.

use num_bigint::BigInt;
use staircase_core::perfclass::{family_n, inner_family, outer_family, step_class, QuasiPerfectClass, RawTuple};
use staircase_core::staircase::main_beta;
use staircase_core::{Error, QuadNum, Result};

/// `main`, `n=<k>` or an explicit value such as `1/2+5/12*sqrt(30)`.
pub fn parse_beta(beta: Option<&str>, preset: Option<&str>) -> Result<QuadNum> {
    match (beta, preset) {
        (Some(_), Some(_)) => Err(Error::Parse("give either --beta or --preset, not both".into())),
        (Some(b), None) => b.parse(),
        (None, Some(p)) => parse_preset(p),
        (None, None) => Ok(main_beta()),
    }
}

pub fn parse_preset(p: &str) -> Result<QuadNum> {
    let p = p.trim();
    if p == "main" {
        return Ok(main_beta());
    }
    let n = p
        .strip_prefix("n=")
        .and_then(|s| s.parse::<u64>().ok())
        .ok_or_else(|| Error::Parse(format!("unknown preset '{p}'; use main or n=<k>")))?;
    Ok(family_n(n)?.beta_n)
}

/// `d,e,p,q,t` with arbitrary-size integers.
pub fn parse_tuple(s: &str) -> Result<RawTuple> {
    let parts: Vec<&str> = s.trim_matches(|c| c == '(' || c == ')').split(',').map(str::trim).collect();
    if parts.len() != 5 {
        return Err(Error::Parse(format!("expected five integers d,e,p,q,t, got '{s}'")));
    }
    let mut out: RawTuple = Default::default();
    for (slot, p) in out.iter_mut().zip(&parts) {
        *slot = p.parse::<BigInt>().map_err(|_| Error::Parse(format!("bad integer '{p}'")))?;
    }
    Ok(out)
}

/// A class named on the command line.
#[derive(Clone, Debug, Default)]
pub struct ClassSelector {
    pub class: Option<String>,
    pub outer: Option<usize>,
    pub inner: Option<usize>,
    pub step: bool,
    pub blocker: Option<u64>,
}

impl ClassSelector {
    pub fn resolve(&self) -> Result<QuasiPerfectClass> {
        let chosen = [self.class.is_some(), self.outer.is_some(), self.inner.is_some(), self.step, self.blocker.is_some()]
            .iter()
            .filter(|b| **b)
            .count();
        if chosen != 1 {
            return Err(Error::Parse("choose exactly one of --class, --outer, --inner, --step, --blocker".into()));
        }
        if let Some(s) = &self.class {
            return QuasiPerfectClass::new(parse_tuple(s)?);
        }
        if let Some(k) = self.outer {
            return Ok(outer_family(k));
        }
        if let Some(k) = self.inner {
            return inner_family(k);
        }
        if let Some(n) = self.blocker {
            return Ok(family_n(n)?.blocker);
        }
        Ok(step_class())
    }
}
