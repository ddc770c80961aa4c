//! Line-oriented group-description files.

use std::collections::HashMap;

use num_traits::Zero;

use super::{ConjClass, FiniteGroupData, Irrep};
use crate::arith::{parse_rational, Cyclotomic};
use crate::error::{Error, Result};

struct RawClass {
    line: usize,
    name: String,
    size: u64,
    order: u32,
    inverse: String,
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

/// `key=value` pairs after the leading word(s) of a line.
fn fields<'a>(line: usize, words: &[&'a str]) -> Result<HashMap<&'a str, &'a str>> {
    let mut out = HashMap::new();
    for w in words {
        let (k, v) = w.split_once('=').ok_or_else(|| parse_err(line, format!("expected key=value, found `{w}`")))?;
        if out.insert(k, v).is_some() {
            return Err(parse_err(line, format!("duplicate field `{k}`")));
        }
    }
    Ok(out)
}

fn field<T: std::str::FromStr>(line: usize, f: &HashMap<&str, &str>, key: &str) -> Result<T> {
    let raw = f.get(key).ok_or_else(|| parse_err(line, format!("missing field `{key}`")))?;
    raw.parse().map_err(|_| parse_err(line, format!("field `{key}`: cannot parse `{raw}`")))
}

/// One character value: `term (('+'|'-') term)*`, `term := q | q*zN^k | zN^k`.
pub(crate) fn parse_character_value(s: &str) -> std::result::Result<Cyclotomic, String> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err("empty character value".into());
    }
    let mut terms = Vec::new();
    let mut start = 0;
    let bytes = s.as_bytes();
    for i in 1..bytes.len() {
        // a sign splits terms unless it follows `^` or `/`
        if (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'^' | b'/' | b'*') {
            terms.push(&s[start..i]);
            start = i;
        }
    }
    terms.push(&s[start..]);
    let mut total = Cyclotomic::zero();
    for t in terms {
        total = total + parse_term(t)?;
    }
    Ok(total)
}

fn parse_term(t: &str) -> std::result::Result<Cyclotomic, String> {
    let (sign, body) = match t.strip_prefix('-') {
        Some(b) => (-1, b),
        None => (1, t.strip_prefix('+').unwrap_or(t)),
    };
    let (coef, root) = match body.split_once('*') {
        Some((q, z)) => (q, Some(z)),
        None if body.starts_with('z') => ("1", Some(body)),
        None => (body, None),
    };
    let q = parse_rational(coef).map_err(|_| format!("bad coefficient `{coef}`"))?;
    let q = if sign < 0 { -q } else { q };
    let Some(z) = root else {
        return Ok(Cyclotomic::rational(q));
    };
    let rest = z.strip_prefix('z').ok_or_else(|| format!("expected zN^k, found `{z}`"))?;
    let (n, k) = rest.split_once('^').ok_or_else(|| format!("expected zN^k, found `{z}`"))?;
    let n: u32 = n.parse().map_err(|_| format!("bad conductor in `{z}`"))?;
    let k: i64 = k.parse().map_err(|_| format!("bad exponent in `{z}`"))?;
    if n == 0 {
        return Err("conductor must be positive".into());
    }
    Ok(Cyclotomic::zeta(n, k).scale(&q))
}

/// Parse and validate a group file.
pub fn load_group(text: &str) -> Result<FiniteGroupData> {
    let mut name: Option<String> = None;
    let mut order: Option<u64> = None;
    let mut raw: Vec<RawClass> = Vec::new();
    let mut powers: HashMap<String, (usize, Vec<String>)> = HashMap::new();
    let mut irreps: Vec<(usize, String, u64, Vec<Cyclotomic>)> = Vec::new();

    for (i, full) in text.lines().enumerate() {
        let ln = i + 1;
        let line = full.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (head, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        match head {
            "group" => {
                if rest.is_empty() || rest.contains(char::is_whitespace) {
                    return Err(parse_err(ln, "expected `group <name>`"));
                }
                name = Some(rest.to_string());
            }
            "order" => {
                let n: u64 = rest.parse().map_err(|_| parse_err(ln, format!("bad order `{rest}`")))?;
                if n == 0 {
                    return Err(parse_err(ln, "group order must be positive"));
                }
                order = Some(n);
            }
            "class" => {
                let words: Vec<&str> = rest.split_whitespace().collect();
                let (cname, kv) = words.split_first().ok_or_else(|| parse_err(ln, "class needs a name"))?;
                let f = fields(ln, kv)?;
                if raw.iter().any(|c| c.name == *cname) {
                    return Err(parse_err(ln, format!("duplicate class `{cname}`")));
                }
                raw.push(RawClass {
                    line: ln,
                    name: cname.to_string(),
                    size: field(ln, &f, "size")?,
                    order: field(ln, &f, "elemorder")?,
                    inverse: field(ln, &f, "inverse")?,
                });
            }
            "powers" => {
                let (cname, list) =
                    rest.split_once(':').ok_or_else(|| parse_err(ln, "expected `powers <class>: a,b,...`"))?;
                let list: Vec<String> = list.split(',').map(|s| s.trim().to_string()).collect();
                if powers.insert(cname.trim().to_string(), (ln, list)).is_some() {
                    return Err(parse_err(ln, format!("duplicate powers line for `{}`", cname.trim())));
                }
            }
            "irrep" => {
                let (before, values) =
                    rest.split_once("values=").ok_or_else(|| parse_err(ln, "irrep needs `values=`"))?;
                let words: Vec<&str> = before.split_whitespace().collect();
                let (iname, kv) = words.split_first().ok_or_else(|| parse_err(ln, "irrep needs a name"))?;
                let f = fields(ln, kv)?;
                let dim: u64 = field(ln, &f, "dim")?;
                let vals = values
                    .split(';')
                    .map(|v| parse_character_value(v).map_err(|m| parse_err(ln, m)))
                    .collect::<Result<Vec<_>>>()?;
                irreps.push((ln, iname.to_string(), dim, vals));
            }
            other => return Err(parse_err(ln, format!("unknown directive `{other}`"))),
        }
    }

    let name = name.ok_or_else(|| parse_err(0, "missing `group` line"))?;
    let order = order.ok_or_else(|| parse_err(0, "missing `order` line"))?;
    let index: HashMap<&str, usize> = raw.iter().enumerate().map(|(i, c)| (c.name.as_str(), i)).collect();
    let lookup =
        |ln: usize, n: &str| index.get(n).copied().ok_or_else(|| parse_err(ln, format!("unknown class `{n}`")));

    let mut classes = Vec::with_capacity(raw.len());
    for c in &raw {
        let (pl, plist) =
            powers.get(&c.name).ok_or_else(|| parse_err(c.line, format!("class `{}` has no powers line", c.name)))?;
        if plist.len() != c.order as usize {
            return Err(parse_err(
                *pl,
                format!("class `{}`: {} power entries for element order {}", c.name, plist.len(), c.order),
            ));
        }
        classes.push(ConjClass {
            name: c.name.clone(),
            size: c.size,
            order: c.order,
            inverse: lookup(c.line, &c.inverse)?,
            powers: plist.iter().map(|p| lookup(*pl, p)).collect::<Result<_>>()?,
        });
    }
    for (cname, (pl, _)) in &powers {
        lookup(*pl, cname)?;
    }
    for (ln, iname, _, vals) in &irreps {
        if vals.len() != classes.len() {
            return Err(parse_err(
                *ln,
                format!("irrep `{iname}`: {} values for {} classes", vals.len(), classes.len()),
            ));
        }
    }
    let irreps = irreps.into_iter().map(|(_, name, dim, values)| Irrep { name, dim, values }).collect();
    FiniteGroupData::new(&name, order, classes, irreps)
}
