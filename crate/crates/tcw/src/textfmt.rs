//! Line-oriented text formats for functions and families.
//!
//! ```text
//! # comment
//! sminus1 n=4 e=1 d=3
//! symm n=3 ones=0,2
//! table n=1 vals=011
//! family fixed_e=1 start=4 step=2
//! family list=(2,2);(3,12)
//! ```

use std::collections::BTreeMap;

use tcw_core::analysis::FamilySpec;
use tcw_core::{ExcludedLayerFunction, Layer, Semantics, SymmetricRFunction, TernaryFunction};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError { line, message: message.into() }
}

/// Non-empty, non-comment lines with their 1-based numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(k, raw)| {
        let line = raw.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((k + 1, line))
    })
}

fn fields<'a>(line: usize, tokens: impl Iterator<Item = &'a str>) -> Result<BTreeMap<&'a str, &'a str>, ParseError> {
    let mut out = BTreeMap::new();
    for tok in tokens {
        let (k, v) = tok.split_once('=').ok_or_else(|| err(line, format!("expected key=value, got `{tok}`")))?;
        if out.insert(k, v).is_some() {
            return Err(err(line, format!("duplicate key `{k}`")));
        }
    }
    Ok(out)
}

fn take<'a>(line: usize, map: &mut BTreeMap<&str, &'a str>, key: &str) -> Result<&'a str, ParseError> {
    map.remove(key).ok_or_else(|| err(line, format!("missing `{key}=`")))
}

fn number(line: usize, key: &str, v: &str) -> Result<usize, ParseError> {
    v.parse().map_err(|_| err(line, format!("`{key}` must be a non-negative integer, got `{v}`")))
}

fn no_leftovers(line: usize, map: BTreeMap<&str, &str>) -> Result<(), ParseError> {
    match map.keys().next() {
        Some(k) => Err(err(line, format!("unexpected key `{k}`"))),
        None => Ok(()),
    }
}

/// Parses one function line. Tables above `table_cap` variables are rejected.
pub fn parse_function_line(line_no: usize, line: &str, table_cap: usize) -> Result<Semantics, ParseError> {
    let mut tokens = line.split_whitespace();
    let kind = tokens.next().ok_or_else(|| err(line_no, "empty line"))?;
    let mut map = fields(line_no, tokens)?;
    let n = number(line_no, "n", take(line_no, &mut map, "n")?)?;
    let core = |e: tcw_core::CoreError| err(line_no, e.to_string());
    let out = match kind {
        "sminus1" => {
            let e = number(line_no, "e", take(line_no, &mut map, "e")?)?;
            let d = number(line_no, "d", take(line_no, &mut map, "d")?)?;
            Semantics::Excluded(ExcludedLayerFunction::new(n, e, d).map_err(core)?)
        }
        "symm" => {
            let ones = take(line_no, &mut map, "ones")?;
            let layers = if ones.is_empty() {
                Vec::new()
            } else {
                ones.split(',').map(|v| number(line_no, "ones", v.trim())).collect::<Result<Vec<_>, _>>()?
            };
            Semantics::Symmetric(SymmetricRFunction::new(n, layers).map_err(core)?)
        }
        "table" => {
            if n > table_cap {
                return Err(err(line_no, format!("table arity {n} exceeds the cap {table_cap}")));
            }
            let vals = take(line_no, &mut map, "vals")?;
            let table = vals
                .chars()
                .map(|c| match c {
                    '0'..='2' => Ok(c as u8 - b'0'),
                    _ => Err(err(line_no, format!("`{c}` is not a base-3 digit"))),
                })
                .collect::<Result<Vec<_>, _>>()?;
            Semantics::Table(TernaryFunction::new(n, table).map_err(core)?)
        }
        other => return Err(err(line_no, format!("unknown function kind `{other}`"))),
    };
    no_leftovers(line_no, map)?;
    Ok(out)
}

pub fn parse_functions(text: &str, table_cap: usize) -> Result<Vec<Semantics>, ParseError> {
    content_lines(text).map(|(k, line)| parse_function_line(k, line, table_cap)).collect()
}

pub fn format_function(f: &Semantics) -> String {
    match f {
        Semantics::Excluded(f) => format!("sminus1 n={} e={} d={}", f.arity(), f.e(), f.d()),
        Semantics::Symmetric(f) => {
            let ones: Vec<String> = f.one_layers().iter().map(|e| e.to_string()).collect();
            format!("symm n={} ones={}", f.arity(), ones.join(","))
        }
        Semantics::Table(f) => {
            let vals: String = f.table().iter().map(|&v| char::from(b'0' + v)).collect();
            format!("table n={} vals={vals}", f.arity())
        }
    }
}

fn parse_layer(line: usize, item: &str) -> Result<Layer, ParseError> {
    let inner = item
        .trim()
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(|| err(line, format!("expected (e,d), got `{item}`")))?;
    let (e, d) = inner.split_once(',').ok_or_else(|| err(line, format!("expected (e,d), got `{item}`")))?;
    Ok(Layer::new(number(line, "e", e.trim())?, number(line, "d", d.trim())?))
}

pub fn parse_family_line(line_no: usize, line: &str) -> Result<FamilySpec, ParseError> {
    let mut tokens = line.split_whitespace();
    match tokens.next() {
        Some("family") => {}
        Some(other) => return Err(err(line_no, format!("expected `family`, got `{other}`"))),
        None => return Err(err(line_no, "empty line")),
    }
    let mut map = fields(line_no, tokens)?;
    let mut family = match (map.remove("fixed_e"), map.remove("fixed_d"), map.remove("list")) {
        (Some(e), None, None) => FamilySpec::fixed_e(number(line_no, "fixed_e", e)?),
        (None, Some(d), None) => FamilySpec::fixed_d(number(line_no, "fixed_d", d)?),
        (None, None, Some(list)) => {
            FamilySpec::unbounded(list.split(';').map(|item| parse_layer(line_no, item)).collect::<Result<_, _>>()?)
        }
        _ => return Err(err(line_no, "exactly one of fixed_e=, fixed_d=, list= is required")),
    };
    if let Some(start) = map.remove("start") {
        family = family.with_start(number(line_no, "start", start)?);
    }
    if let Some(step) = map.remove("step") {
        family = family.with_step(number(line_no, "step", step)?);
    }
    no_leftovers(line_no, map)?;
    family.validate().map_err(|e| err(line_no, e.to_string()))?;
    Ok(family)
}

pub fn parse_families(text: &str) -> Result<Vec<FamilySpec>, ParseError> {
    content_lines(text).map(|(k, line)| parse_family_line(k, line)).collect()
}

pub fn format_family(f: &FamilySpec) -> String {
    format!("family {f}")
}

/// Parses `1,2,0`, `(1,2,0)` or `120`.
pub fn parse_tuple(text: &str) -> Result<Vec<u8>, ParseError> {
    let inner = text.trim().trim_start_matches('(').trim_end_matches(')');
    let parts: Vec<&str> =
        if inner.contains(',') { inner.split(',').map(str::trim).collect() } else { inner.split("").filter(|s| !s.is_empty()).collect() };
    if parts.is_empty() || parts.iter().any(|p| p.is_empty()) {
        return Err(err(1, format!("malformed tuple `{text}`")));
    }
    parts
        .iter()
        .map(|p| match *p {
            "0" => Ok(0),
            "1" => Ok(1),
            "2" => Ok(2),
            other => Err(err(1, format!("tuple component `{other}` is not 0, 1 or 2"))),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use tcw_core::analysis::FamilyKind;

    #[test]
    fn function_lines() {
        let text = "# targets\nsminus1 n=4 e=1 d=3\n\nsymm n=3 ones=0,2  # two layers\ntable n=1 vals=012\n";
        let fs = parse_functions(text, 7).unwrap();
        assert_eq!(fs.len(), 3);
        assert_eq!(fs[0], Semantics::Excluded(ExcludedLayerFunction::new(4, 1, 3).unwrap()));
        assert_eq!(fs[1], Semantics::Symmetric(SymmetricRFunction::new(3, [0, 2]).unwrap()));
        assert_eq!(fs[2].arity(), 1);
        for f in &fs {
            assert_eq!(&parse_function_line(1, &format_function(f), 7).unwrap(), f);
        }
    }

    #[test]
    fn function_line_errors() {
        for bad in [
            "sminus1 n=4 e=1 d=2",
            "sminus1 n=4 e=1",
            "sminus1 n=4 e=1 d=3 x=1",
            "sminus1 n=4 e=1 e=1 d=3",
            "symm n=3 ones=4",
            "table n=1 vals=01",
            "table n=1 vals=013",
            "table n=8 vals=0",
            "bogus n=1",
            "sminus1 n=-1 e=0 d=0",
        ] {
            assert!(parse_function_line(3, bad, 7).is_err(), "{bad}");
        }
        let e = parse_functions("sminus1 n=4 e=1 d=3\nsminus1 n=2", 7).unwrap_err();
        assert_eq!(e.line, 2);
    }

    #[test]
    fn empty_ones_is_the_zero_function() {
        let f = parse_function_line(1, "symm n=2 ones=", 7).unwrap();
        assert!(f.to_truth_table(7).unwrap().table().iter().all(|&v| v == 0));
    }

    #[test]
    fn family_lines() {
        let fs = parse_families("family fixed_e=1\nfamily fixed_d=2 start=6 step=2\nfamily list=(2,2);(3,12);(4,60)").unwrap();
        assert_eq!(fs[0], FamilySpec::fixed_e(1));
        assert_eq!(fs[1], FamilySpec::fixed_d(2).with_start(6).with_step(2));
        assert_eq!(fs[2].kind, FamilyKind::Unbounded(vec![Layer::new(2, 2), Layer::new(3, 12), Layer::new(4, 60)]));
        for f in &fs {
            assert_eq!(&parse_family_line(1, &format_family(f)).unwrap(), f);
        }
        for bad in ["family", "family fixed_e=1 fixed_d=1", "family list=(2,2", "fam fixed_e=1", "family fixed_e=1 depth=3"] {
            assert!(parse_family_line(1, bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn tuples() {
        assert_eq!(parse_tuple("1,2").unwrap(), vec![1, 2]);
        assert_eq!(parse_tuple("(0, 2)").unwrap(), vec![0, 2]);
        assert_eq!(parse_tuple("120").unwrap(), vec![1, 2, 0]);
        assert!(parse_tuple("1,3").is_err());
        assert!(parse_tuple("").is_err());
        assert!(parse_tuple("1,,2").is_err());
    }
}
