//! Text form of a generic-characteristic module:
//! `q=<p^s>; r=<r>; phiT=<a_0>,<a_1>,...,<a_r>`.
//!
//! Each entry is an element of A, written either as an expression in `T`
//! (`T^2+1`, `2`) or as a bracketed coefficient list, lowest degree first
//! (`[1,0,1]`).

use std::fmt;

use crate::algebra::field::Fq;
use crate::algebra::poly::APoly;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleSpec {
    pub q: u64,
    pub r: usize,
    /// `[T, g_1, ..., g_r]`
    pub phi_t: Vec<APoly>,
}

fn split_entries(s: &str) -> Result<Vec<String>> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut depth = 0;
    for ch in s.chars() {
        match ch {
            '[' => depth += 1,
            ']' => {
                if depth == 0 {
                    return Err(Error::Parse("unbalanced ']'".into()));
                }
                depth -= 1;
            }
            ',' if depth == 0 => {
                out.push(std::mem::take(&mut cur));
                continue;
            }
            _ => {}
        }
        cur.push(ch);
    }
    if depth != 0 {
        return Err(Error::Parse("unbalanced '['".into()));
    }
    out.push(cur);
    Ok(out)
}

impl ModuleSpec {
    pub fn parse(s: &str) -> Result<ModuleSpec> {
        let (mut q, mut r, mut phi) = (None, None, None);
        for field in s.split(';').map(str::trim).filter(|f| !f.is_empty()) {
            let (k, v) = field.split_once('=').ok_or_else(|| Error::Parse(format!("expected key=value, got '{field}'")))?;
            match k.trim() {
                "q" => q = Some(v.trim().parse::<u64>().map_err(|e| Error::Parse(format!("q: {e}")))?),
                "r" => r = Some(v.trim().parse::<usize>().map_err(|e| Error::Parse(format!("r: {e}")))?),
                "phiT" => phi = Some(v.trim().to_string()),
                other => return Err(Error::Parse(format!("unknown key '{other}'"))),
            }
        }
        let q = q.ok_or_else(|| Error::Parse("missing q".into()))?;
        let r = r.ok_or_else(|| Error::Parse("missing r".into()))?;
        let phi = phi.ok_or_else(|| Error::Parse("missing phiT".into()))?;
        let fq = Fq::new(q)?;
        let phi_t = split_entries(&phi)?
            .iter()
            .map(|e| {
                let e = e.trim();
                match e.strip_prefix('[').and_then(|x| x.strip_suffix(']')) {
                    Some(list) if list.trim().is_empty() => Ok(APoly::zero()),
                    Some(list) => APoly::parse(list, &fq),
                    None if e.contains(['T', 't']) => APoly::parse(e, &fq),
                    None => APoly::parse(e, &fq),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        if phi_t.len() != r + 1 {
            return Err(Error::Parse(format!("r = {r} needs {} phiT entries, got {}", r + 1, phi_t.len())));
        }
        Ok(ModuleSpec { q, r, phi_t })
    }
}

impl fmt::Display for ModuleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let entries: Vec<String> = self.phi_t.iter().map(|a| a.to_expr()).collect();
        write!(f, "q={}; r={}; phiT={}", self.q, self.r, entries.join(","))
    }
}
