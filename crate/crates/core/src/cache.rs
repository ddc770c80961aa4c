//! Persistent correlator cache.
//!
//! ```text
//! hhodge-cache v1 <fingerprint>
//! <canonical-key>\t<p>/<q>
//! ```
//!
//! The fingerprint is the SHA-256 of the group's canonical document, so a
//! cache can only be loaded into an engine for the same group.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use sha2::{Digest, Sha256};

use crate::arith::{format_rational, parse_rational};
use crate::engine::{Engine, TwistedCorrelator};
use crate::error::{Error, Result};
use crate::group::FiniteGroupData;
use crate::Rational;

const MAGIC: &str = "hhodge-cache v1";

pub fn fingerprint(group: &FiniteGroupData) -> String {
    let digest = Sha256::digest(group.to_document().as_bytes());
    let mut s = String::with_capacity(64);
    for b in digest {
        write!(s, "{b:02x}").unwrap();
    }
    s
}

#[derive(Clone, Debug, PartialEq)]
pub struct CacheFile {
    pub fingerprint: String,
    pub entries: BTreeMap<String, Rational>,
}

impl CacheFile {
    pub fn empty(group: &FiniteGroupData) -> Self {
        CacheFile { fingerprint: fingerprint(group), entries: BTreeMap::new() }
    }

    pub fn from_engine(engine: &Engine) -> Self {
        let mut c = Self::empty(engine.group());
        c.entries.extend(engine.export_memo());
        c
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| Error::Parse { line: 1, msg: "empty cache file".into() })?;
        let fp = header
            .strip_prefix(MAGIC)
            .map(str::trim)
            .filter(|f| !f.is_empty() && !f.contains(char::is_whitespace))
            .ok_or_else(|| Error::Parse { line: 1, msg: format!("bad cache header `{header}`") })?;
        let mut entries = BTreeMap::new();
        for (i, line) in lines.enumerate() {
            if line.is_empty() {
                continue;
            }
            let ln = i + 2;
            let (key, val) = line
                .split_once('\t')
                .ok_or_else(|| Error::Parse { line: ln, msg: "expected `<key>\\t<p>/<q>`".into() })?;
            let v = parse_rational(val).map_err(|_| Error::Parse { line: ln, msg: format!("bad value `{val}`") })?;
            if entries.insert(key.to_string(), v).is_some() {
                return Err(Error::Parse { line: ln, msg: format!("duplicate key `{key}`") });
            }
        }
        Ok(CacheFile { fingerprint: fp.to_string(), entries })
    }

    pub fn render(&self) -> String {
        let mut s = format!("{MAGIC} {}\n", self.fingerprint);
        for (k, v) in &self.entries {
            writeln!(s, "{k}\t{}", format_rational(v)).unwrap();
        }
        s
    }

    /// Recomputes every `stride`-th entry from scratch and compares.
    pub fn verify(&self, group: Arc<FiniteGroupData>, stride: usize) -> Result<()> {
        if self.fingerprint != fingerprint(&group) {
            return Err(Error::Validation("cache belongs to a different group".into()));
        }
        let fresh = Engine::new(Arc::clone(&group));
        for (k, v) in self.entries.iter().step_by(stride.max(1)) {
            let tc = TwistedCorrelator::parse_key(&group, k)?;
            let recomputed = fresh.twisted_correlator(&tc)?;
            if &recomputed != v {
                return Err(Error::Inconsistency(format!(
                    "cache entry `{k}` holds {}, recomputation gives {}",
                    format_rational(v),
                    format_rational(&recomputed)
                )));
            }
        }
        Ok(())
    }

    /// Read-verify, then seed the engine's memo.
    pub fn load_into(&self, engine: &Engine, stride: usize) -> Result<()> {
        self.verify(engine.group_arc(), stride)?;
        for (k, v) in &self.entries {
            engine.import(k, v.clone())?;
        }
        Ok(())
    }

    pub fn merge(&mut self, other: &CacheFile) {
        for (k, v) in &other.entries {
            self.entries.insert(k.clone(), v.clone());
        }
    }
}

/// Write to a sibling temp file, then rename over `path`.
pub fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_else(|| "cache".into());
    let tmp = path.with_file_name(format!(".{name}.tmp{}", std::process::id()));
    std::fs::write(&tmp, contents)?;
    std::fs::rename(&tmp, path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational;
    use crate::engine::{ChInsertion, Insertion};
    use crate::group::cyclic_group;

    fn warm() -> Engine {
        let e = Engine::new(Arc::new(cyclic_group(5)));
        let tc = TwistedCorrelator::new(0, vec![Insertion::new(1, 0); 5], vec![ChInsertion::new(2, 3)]);
        e.twisted_correlator(&tc).unwrap();
        e
    }

    #[test]
    fn render_parse_round_trip() {
        let c = CacheFile::from_engine(&warm());
        assert!(!c.entries.is_empty());
        let text = c.render();
        assert!(text.starts_with("hhodge-cache v1 "));
        assert_eq!(CacheFile::parse(&text).unwrap(), c);
        c.verify(Arc::new(cyclic_group(5)), 1).unwrap();
    }

    #[test]
    fn corruption_detected() {
        let mut c = CacheFile::from_engine(&warm());
        let first = c.entries.keys().next().unwrap().clone();
        c.entries.insert(first, rational(12345, 7).unwrap());
        assert!(matches!(c.verify(Arc::new(cyclic_group(5)), 1), Err(Error::Inconsistency(_))));
    }

    #[test]
    fn foreign_group_rejected() {
        let c = CacheFile::from_engine(&warm());
        assert!(c.verify(Arc::new(cyclic_group(3)), 1).is_err());
        assert_ne!(fingerprint(&cyclic_group(3)), fingerprint(&cyclic_group(5)));
    }

    #[test]
    fn malformed_lines() {
        assert!(CacheFile::parse("").is_err());
        assert!(CacheFile::parse("hhodge-cache v2 abc\n").is_err());
        assert!(matches!(CacheFile::parse("hhodge-cache v1 abc\nkey 1/2\n"), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn atomic_write() {
        let dir = std::env::temp_dir().join(format!("hhodge-cache-test-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let p = dir.join("c.txt");
        write_atomic(&p, "x\n").unwrap();
        write_atomic(&p, "y\n").unwrap();
        assert_eq!(std::fs::read_to_string(&p).unwrap(), "y\n");
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
