//! Plain-text set files: a `field: <p> <m>` header, then one encoding per line.
//! Blank lines and `#` comments are ignored.

use super::FSet;
use crate::error::{Error, Result};
use crate::field::Field;
use std::path::Path;

/// Parses a set file. When `field` is given its `(p, m)` must match the
/// header; otherwise the field is built with the default modulus.
pub fn parse_set_file(text: &str, field: Option<&Field>) -> Result<FSet> {
    let mut lines = text.lines().map(|l| l.split('#').next().unwrap().trim()).filter(|l| !l.is_empty());
    let header = lines.next().ok_or_else(|| Error::Parse("empty set file".into()))?;
    let rest = header
        .strip_prefix("field:")
        .ok_or_else(|| Error::Parse(format!("expected `field: <p> <m>`, got `{header}`")))?;
    let nums: Vec<u32> = rest
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad field header `{header}`"))))
        .collect::<Result<_>>()?;
    let (p, m) = match nums[..] {
        [p, m] => (p, m),
        [p] => (p, 1),
        _ => return Err(Error::Parse(format!("bad field header `{header}`"))),
    };
    let field = match field {
        Some(f) if f.p() == p && f.m() == m => f.clone(),
        Some(f) => {
            return Err(Error::Parse(format!("set file is over F_{p}^{m}, expected F_{}^{}", f.p(), f.m())));
        }
        None => Field::with_degree(p, m)?,
    };
    let mut elems = Vec::new();
    for l in lines {
        let x: u64 = l.parse().map_err(|_| Error::Parse(format!("bad element `{l}`")))?;
        elems.push(field.check(x)?);
    }
    Ok(FSet::from_vec(&field, elems))
}

pub fn format_set_file(set: &FSet) -> String {
    let mut s = format!("field: {} {}\n", set.field().p(), set.field().m());
    for x in set.iter() {
        s.push_str(&x.to_string());
        s.push('\n');
    }
    s
}

pub fn read_set_file(path: &Path, field: Option<&Field>) -> Result<FSet> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_set_file(&text, field)
}

pub fn write_set_file(path: &Path, set: &FSet) -> Result<()> {
    std::fs::write(path, format_set_file(set)).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}
