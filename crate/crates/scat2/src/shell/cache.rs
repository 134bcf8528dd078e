//! Line-based text caches for numeric tables and fitted polynomials,
//! plus the one-line record form of check reports.
//!
//! Grammar (UTF-8, `\n`-terminated lines, no tabs):
//!
//! ```text
//! header:          scat2 v1 <numeric|symbolic> b=<int|sym> c=<int|sym> D=<int>
//! numeric record:  tau <i> <j> <rational>
//! symbolic record: tau <i> <j> poly: <canonical polynomial>
//! report record:   conj <id> <verified|falsified|inconclusive> <range> [witness: <text>]
//! ```
//!
//! Lines starting with `#` are comments; the encoder emits one carrying
//! the creation time, and the decoder skips them, so equality of decoded
//! values ignores timestamps.  Records are emitted sorted by `(i+j, i)`;
//! two equal tables encode to identical bytes apart from the timestamp.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::str::FromStr;
use std::time::{SystemTime, UNIX_EPOCH};

use crate::conjectures::ConjectureReport;
use crate::engine::TauTable;
use crate::ring::{Poly3, Scalar};
use crate::{Error, Result};

/// Fitted polynomials indexed by `(i, j)`, with the total-degree bound
/// they were reconstructed under.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolicTable {
    cutoff: u32,
    entries: BTreeMap<(u32, u32), Poly3>,
}

impl SymbolicTable {
    pub fn new(cutoff: u32) -> Self {
        Self {
            cutoff,
            entries: BTreeMap::new(),
        }
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    pub fn insert(&mut self, i: u32, j: u32, poly: Poly3) {
        assert!(i >= 1 && j >= 1, "only interior entries are stored");
        assert!(i + j <= self.cutoff, "entry beyond the declared cutoff");
        self.entries.insert((i, j), poly);
    }

    pub fn get(&self, i: u32, j: u32) -> Option<&Poly3> {
        self.entries.get(&(i, j))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries in `(i + j, i)` order, the order they are encoded in.
    pub fn entries(&self) -> impl Iterator<Item = (&(u32, u32), &Poly3)> {
        let mut keys: Vec<_> = self.entries.iter().collect();
        keys.sort_by_key(|(&(i, j), _)| (i + j, i));
        keys.into_iter()
    }
}

/// Either kind of cache file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Cache {
    Numeric(TauTable),
    Symbolic(SymbolicTable),
}

fn timestamp() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

/// Canonical text form of a cache.  Equal values produce identical bytes
/// apart from the `# created:` comment.
pub fn encode(cache: &Cache) -> String {
    let mut out = String::new();
    match cache {
        Cache::Numeric(table) => {
            writeln!(
                out,
                "scat2 v1 numeric b={} c={} D={}",
                table.b(),
                table.c(),
                table.cutoff()
            )
            .unwrap();
            writeln!(out, "# created: {}", timestamp()).unwrap();
            for (&(i, j), value) in table.entries() {
                writeln!(out, "tau {i} {j} {value}").unwrap();
            }
        }
        Cache::Symbolic(table) => {
            writeln!(out, "scat2 v1 symbolic b=sym c=sym D={}", table.cutoff()).unwrap();
            writeln!(out, "# created: {}", timestamp()).unwrap();
            for (&(i, j), poly) in table.entries() {
                writeln!(out, "tau {i} {j} poly: {poly}").unwrap();
            }
        }
    }
    out
}

fn parse_err(line: usize, reason: impl Into<String>) -> Error {
    Error::Parse {
        line,
        reason: reason.into(),
    }
}

fn header_field<'a>(token: Option<&'a str>, key: &str, line: usize) -> Result<&'a str> {
    let token = token.ok_or_else(|| parse_err(line, format!("missing header field {key}=")))?;
    token
        .strip_prefix(key)
        .and_then(|rest| rest.strip_prefix('='))
        .ok_or_else(|| parse_err(line, format!("expected {key}=<value>, got `{token}`")))
}

fn parse_int(text: &str, what: &str, line: usize) -> Result<u32> {
    text.parse::<u32>()
        .map_err(|_| parse_err(line, format!("{what} is not a decimal integer: `{text}`")))
}

/// Exact inverse of [`encode`] on canonical input; also accepts records
/// in any order.  Errors name the offending 1-based line.
pub fn decode(text: &str) -> Result<Cache> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(n, l)| (n + 1, l.trim_end()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (hline, header) = lines
        .next()
        .ok_or_else(|| parse_err(1, "empty input; expected a scat2 header"))?;
    let mut toks = header.split_whitespace();
    match (toks.next(), toks.next()) {
        (Some("scat2"), Some("v1")) => {}
        _ => {
            return Err(parse_err(
                hline,
                format!("unrecognized header or version: `{header}`"),
            ))
        }
    }
    let kind = toks
        .next()
        .ok_or_else(|| parse_err(hline, "missing cache kind"))?;
    let b_field = header_field(toks.next(), "b", hline)?;
    let c_field = header_field(toks.next(), "c", hline)?;
    let d_field = header_field(toks.next(), "D", hline)?;
    let cutoff = parse_int(d_field, "degree cutoff", hline)?;
    if toks.next().is_some() {
        return Err(parse_err(hline, "trailing tokens after the header"));
    }

    match kind {
        "numeric" => {
            let b = parse_int(b_field, "parameter b", hline)?;
            let c = parse_int(c_field, "parameter c", hline)?;
            if b == 0 || c == 0 {
                return Err(parse_err(hline, "parameters must be positive"));
            }
            let mut table = TauTable::new(b, c, cutoff);
            let mut seen = BTreeMap::new();
            for (n, line) in lines {
                let (i, j, rest) = record_prefix(line, n)?;
                check_indices(i, j, cutoff, &mut seen, n)?;
                let value = Scalar::from_str(rest).map_err(|_| {
                    parse_err(n, format!("not a rational number: `{rest}`"))
                })?;
                table.set(i, j, value);
            }
            Ok(Cache::Numeric(table))
        }
        "symbolic" => {
            if b_field != "sym" || c_field != "sym" {
                return Err(parse_err(
                    hline,
                    "symbolic caches require b=sym and c=sym",
                ));
            }
            let mut table = SymbolicTable::new(cutoff);
            let mut seen = BTreeMap::new();
            for (n, line) in lines {
                let (i, j, rest) = record_prefix(line, n)?;
                check_indices(i, j, cutoff, &mut seen, n)?;
                let body = rest.strip_prefix("poly:").ok_or_else(|| {
                    parse_err(n, "symbolic record must read `tau <i> <j> poly: ...`")
                })?;
                let poly = Poly3::from_str(body.trim())
                    .map_err(|e| parse_err(n, format!("bad polynomial: {e}")))?;
                table.insert(i, j, poly);
            }
            Ok(Cache::Symbolic(table))
        }
        other => Err(parse_err(hline, format!("unknown cache kind `{other}`"))),
    }
}

/// Splits `tau <i> <j> <rest>` and parses the indices.
fn record_prefix(line: &str, n: usize) -> Result<(u32, u32, &str)> {
    let rest = line
        .strip_prefix("tau ")
        .ok_or_else(|| parse_err(n, format!("expected a tau record, got `{line}`")))?;
    let mut parts = rest.splitn(3, ' ');
    let i = parse_int(parts.next().unwrap_or(""), "index i", n)?;
    let j = parse_int(parts.next().unwrap_or(""), "index j", n)?;
    let tail = parts
        .next()
        .ok_or_else(|| parse_err(n, "record is missing its value"))?;
    Ok((i, j, tail.trim()))
}

fn check_indices(
    i: u32,
    j: u32,
    cutoff: u32,
    seen: &mut BTreeMap<(u32, u32), ()>,
    n: usize,
) -> Result<()> {
    if i == 0 || j == 0 {
        return Err(parse_err(
            n,
            "axis entries are implicit and may not appear as records",
        ));
    }
    if i + j > cutoff {
        return Err(parse_err(
            n,
            format!("record ({i},{j}) lies beyond the declared cutoff {cutoff}"),
        ));
    }
    if seen.insert((i, j), ()).is_some() {
        return Err(parse_err(n, format!("duplicate record for ({i},{j})")));
    }
    Ok(())
}

/// One-line record form of a report.  Witnesses are folded into a single
/// trailing segment; notes are for human output only and are not encoded.
pub fn report_record(report: &ConjectureReport) -> String {
    let mut line = format!("conj {} {} {}", report.id, report.status, report.range);
    if !report.witnesses.is_empty() {
        line.push_str(" witness: ");
        line.push_str(&report.witnesses.join("; "));
    }
    line
}

pub fn encode_reports(reports: &[ConjectureReport]) -> String {
    let mut out = String::new();
    for r in reports {
        out.push_str(&report_record(r));
        out.push('\n');
    }
    out
}

/// Writes through a temporary name in the same directory and renames, so
/// a crash never leaves a partial file under the final name.
pub fn write_atomic(path: &Path, text: &str) -> Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = std::path::PathBuf::from(tmp);
    fs::write(&tmp, text)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::compute_csd;
    use crate::ring::ratio;

    fn strip_comments(text: &str) -> String {
        text.lines()
            .filter(|l| !l.starts_with('#'))
            .collect::<Vec<_>>()
            .join("\n")
    }

    #[test]
    fn numeric_roundtrip_is_exact() {
        let table = compute_csd(3, 2, 10).unwrap();
        let text = encode(&Cache::Numeric(table.clone()));
        assert!(text.starts_with("scat2 v1 numeric b=3 c=2 D=10\n"));
        assert!(text.contains("tau 2 3 14\n"));
        let back = decode(&text).unwrap();
        assert_eq!(back, Cache::Numeric(table));
    }

    #[test]
    fn encoding_is_canonical_apart_from_the_timestamp() {
        let table = compute_csd(2, 2, 8).unwrap();
        let a = encode(&Cache::Numeric(table.clone()));
        let b = encode(&Cache::Numeric(table));
        assert_eq!(strip_comments(&a), strip_comments(&b));
    }

    #[test]
    fn symbolic_roundtrip_is_exact() {
        let mut table = SymbolicTable::new(4);
        table.insert(1, 1, "g".parse().unwrap());
        table.insert(2, 2, "1/2*g^2 + g*b*c - g*b - g*c + 1/2*g".parse().unwrap());
        let text = encode(&Cache::Symbolic(table.clone()));
        assert!(text.starts_with("scat2 v1 symbolic b=sym c=sym D=4\n"));
        assert!(text.contains("tau 1 1 poly: g\n"));
        assert_eq!(decode(&text).unwrap(), Cache::Symbolic(table));
    }

    #[test]
    fn records_encode_in_total_degree_order() {
        let mut table = TauTable::new(5, 7, 9);
        table.set(1, 4, ratio(1, 3));
        table.set(4, 1, ratio(2, 1));
        table.set(1, 1, ratio(5, 1));
        let text = encode(&Cache::Numeric(table));
        let records: Vec<&str> = text.lines().filter(|l| l.starts_with("tau")).collect();
        assert_eq!(records, vec!["tau 1 1 5", "tau 1 4 1/3", "tau 4 1 2"]);
    }

    #[test]
    fn malformed_lines_are_named() {
        let text = "scat2 v1 numeric b=3 c=2 D=14\ntau 2 3 fourteen\n";
        let err = decode(text).unwrap_err();
        match err {
            Error::Parse { line, reason } => {
                assert_eq!(line, 2);
                assert!(reason.contains("fourteen"));
            }
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn header_and_record_validation() {
        assert!(decode("").is_err());
        assert!(decode("scat2 v2 numeric b=3 c=2 D=14\n").is_err());
        assert!(decode("scat2 v1 cubic b=3 c=2 D=14\n").is_err());
        assert!(decode("scat2 v1 numeric b=sym c=2 D=14\n").is_err());
        assert!(decode("scat2 v1 symbolic b=3 c=2 D=14\n").is_err());
        let beyond = "scat2 v1 numeric b=3 c=2 D=4\ntau 3 3 5\n";
        assert!(decode(beyond).is_err());
        let axis = "scat2 v1 numeric b=3 c=2 D=4\ntau 0 1 1\n";
        assert!(decode(axis).is_err());
        let dup = "scat2 v1 numeric b=3 c=2 D=4\ntau 1 1 1\ntau 1 1 1\n";
        assert!(decode(dup).is_err());
    }

    #[test]
    fn comments_and_blank_lines_are_skipped() {
        let text = "# preamble\n\nscat2 v1 numeric b=3 c=2 D=4\n# mid\ntau 1 1 1\n\n";
        let Cache::Numeric(table) = decode(text).unwrap() else {
            panic!("expected numeric");
        };
        assert_eq!(table.get(1, 1).unwrap(), ratio(1, 1));
    }

    #[test]
    fn atomic_write_replaces_only_on_success() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.tau");
        write_atomic(&path, "first\n").unwrap();
        write_atomic(&path, "second\n").unwrap();
        assert_eq!(fs::read_to_string(&path).unwrap(), "second\n");
        assert!(!path.with_extension("tau.tmp").exists());
    }

    #[test]
    fn report_records_fold_witnesses() {
        use crate::conjectures::Status;
        let plain = ConjectureReport::new(
            3,
            Status::Verified,
            "1 <= i,j <= 8".into(),
            Vec::new(),
            vec!["ignored note".into()],
        );
        assert_eq!(report_record(&plain), "conj 3 verified 1 <= i,j <= 8");
        let with = ConjectureReport::new(
            7,
            Status::Falsified,
            "i <= 2".into(),
            vec!["first".into(), "second".into()],
            Vec::new(),
        );
        assert_eq!(
            report_record(&with),
            "conj 7 falsified i <= 2 witness: first; second"
        );
        let both = encode_reports(&[plain, with]);
        assert_eq!(both.lines().count(), 2);
    }
}
