//! Text formats for instances and matchings.
//!
//! ```text
//! dsm 1
//! agents 3
//! deviators 1 3
//! prefs 1: 2 3
//! prefs 2: 3 1
//! prefs 3: 1 2
//! ```
//!
//! An optional `sides` line with one `0`/`1` per agent may follow
//! `deviators`. `#` starts a comment. A matching file holds one `i j` pair
//! per line.

use thiserror::Error;

use crate::blocking::DeviatorSet;
use crate::instance::{agent, Instance, InstanceError};
use crate::matching::{Matching, MatchingError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: {source}")]
    Invalid { line: usize, source: InstanceError },
    #[error("line {line}: {source}")]
    BadMatching { line: usize, source: MatchingError },
}

impl FormatError {
    pub fn line(&self) -> usize {
        match self {
            FormatError::Syntax { line, .. } | FormatError::Invalid { line, .. } | FormatError::BadMatching { line, .. } => {
                *line
            }
        }
    }
}

fn syntax(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Syntax { line, msg: msg.into() }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstanceFile {
    pub instance: Instance,
    pub deviators: DeviatorSet,
}

/// Non-empty lines with comments stripped, paired with 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let body = raw.split('#').next().unwrap_or("");
        let toks: Vec<&str> = body.split_whitespace().collect();
        (!toks.is_empty()).then_some((i + 1, toks))
    })
}

fn parse_id(tok: &str, n: usize, line: usize) -> Result<u32, FormatError> {
    match tok.parse::<u32>() {
        Ok(v) if v >= 1 && v as usize <= n => Ok(v),
        Ok(v) => Err(syntax(line, format!("agent id {v} outside 1..={n}"))),
        Err(_) => Err(syntax(line, format!("expected an agent id, found `{tok}`"))),
    }
}

pub fn parse_instance(text: &str) -> Result<InstanceFile, FormatError> {
    let mut lines = content_lines(text).peekable();
    let eof = text.lines().count() + 1;

    match lines.next() {
        Some((_, t)) if t == ["dsm", "1"] => {}
        Some((l, _)) => return Err(syntax(l, "expected header `dsm 1`")),
        None => return Err(syntax(eof, "empty input")),
    }
    let n = match lines.next() {
        Some((l, t)) if t.len() == 2 && t[0] == "agents" => {
            t[1].parse::<usize>().map_err(|_| syntax(l, format!("bad agent count `{}`", t[1])))?
        }
        Some((l, _)) => return Err(syntax(l, "expected `agents <n>`")),
        None => return Err(syntax(eof, "missing `agents` line")),
    };
    if u32::try_from(n).is_err() {
        return Err(syntax(2, "agent count too large"));
    }

    let mut deviators = Vec::new();
    if let Some((l, t)) = lines.peek() {
        if t[0] == "deviators" {
            let l = *l;
            for tok in &t[1..] {
                let id = parse_id(tok, n, l)?;
                if deviators.contains(&id) {
                    return Err(syntax(l, format!("deviator {id} listed twice")));
                }
                deviators.push(id);
            }
            lines.next();
        }
    }
    let mut sides = None;
    let mut sides_line = 0;
    if let Some((l, t)) = lines.peek() {
        if t[0] == "sides" {
            let l = *l;
            if t.len() - 1 != n {
                return Err(syntax(l, format!("`sides` needs {n} labels, found {}", t.len() - 1)));
            }
            let labels = t[1..]
                .iter()
                .map(|tok| match *tok {
                    "0" => Ok(0u8),
                    "1" => Ok(1u8),
                    other => Err(syntax(l, format!("side label `{other}` is not 0 or 1"))),
                })
                .collect::<Result<Vec<_>, _>>()?;
            sides = Some(labels);
            sides_line = l;
            lines.next();
        }
    }

    let mut lists = Vec::with_capacity(n);
    let mut list_lines = Vec::with_capacity(n);
    for want in 1..=n {
        let Some((l, t)) = lines.next() else {
            return Err(syntax(eof, format!("missing `prefs {want}:` line")));
        };
        if t[0] != "prefs" || t.len() < 2 {
            return Err(syntax(l, format!("expected `prefs {want}:`")));
        }
        let (head, rest) = match t[1].strip_suffix(':') {
            Some(h) => (h, &t[2..]),
            None if t.get(2) == Some(&":") => (t[1], &t[3..]),
            None => return Err(syntax(l, "missing `:` after agent id")),
        };
        if head.parse::<usize>().ok() != Some(want) {
            return Err(syntax(l, format!("expected `prefs {want}:`, found `prefs {head}:`")));
        }
        let list = rest.iter().map(|tok| parse_id(tok, n, l)).collect::<Result<Vec<_>, _>>()?;
        lists.push(list);
        list_lines.push(l);
    }
    if let Some((l, _)) = lines.next() {
        return Err(syntax(l, "unexpected content after the last `prefs` line"));
    }

    let instance = Instance::new(lists, sides).map_err(|e| {
        let at = |a: u32| list_lines[a as usize - 1];
        let line = match e {
            InstanceError::UnknownAgent { agent, .. }
            | InstanceError::SelfRank { agent }
            | InstanceError::DuplicateEntry { agent, .. } => at(agent),
            InstanceError::AsymmetricAcceptability { ranker, .. } => at(ranker),
            InstanceError::SidedPairViolation { .. }
            | InstanceError::BadSideLabel { .. }
            | InstanceError::SideCountMismatch { .. } => sides_line,
        };
        FormatError::Invalid { line, source: e }
    })?;
    let deviators = DeviatorSet::new(n, deviators.into_iter().map(agent));
    Ok(InstanceFile { instance, deviators })
}

pub fn serialize_instance(inst: &Instance, deviators: &DeviatorSet) -> String {
    let mut s = format!("dsm 1\nagents {}\n", inst.num_agents());
    if !deviators.is_empty() {
        s.push_str("deviators");
        for a in deviators.members() {
            s.push_str(&format!(" {a}"));
        }
        s.push('\n');
    }
    if let Some(sides) = inst.sides() {
        s.push_str("sides");
        for x in sides {
            s.push_str(&format!(" {x}"));
        }
        s.push('\n');
    }
    for a in inst.agents() {
        s.push_str(&format!("prefs {a}:"));
        for b in inst.prefs(a) {
            s.push_str(&format!(" {b}"));
        }
        s.push('\n');
    }
    s
}

pub fn parse_matching(text: &str, inst: &Instance) -> Result<Matching, FormatError> {
    let n = inst.num_agents();
    let mut m = Matching::empty(n);
    let mut pairs = Vec::new();
    for (l, t) in content_lines(text) {
        if t.len() != 2 {
            return Err(syntax(l, "expected `<i> <j>`"));
        }
        let bad = |source| FormatError::BadMatching { line: l, source };
        let id = |tok: &str| tok.parse::<u32>().map_err(|_| syntax(l, format!("bad agent id `{tok}`")));
        let (a, b) = (id(t[0])?, id(t[1])?);
        for x in [a, b] {
            if x == 0 || x as usize > n {
                return Err(bad(MatchingError::UnknownAgent(x)));
            }
        }
        if a == b {
            return Err(bad(MatchingError::SelfPair(a)));
        }
        let (a, b) = (agent(a), agent(b));
        if !inst.is_acceptable(a, b) {
            return Err(bad(MatchingError::NotAcceptable(a.get().min(b.get()), a.get().max(b.get()))));
        }
        for x in [a, b] {
            if m.is_matched(x) {
                return Err(bad(MatchingError::AlreadyMatched(x.get())));
            }
        }
        m.insert(a, b);
        pairs.push((a, b));
    }
    Ok(Matching::from_pairs(inst, pairs).expect("pairs checked line by line"))
}

/// One `i j` line per pair with `i < j`, sorted.
pub fn serialize_matching(m: &Matching) -> String {
    m.pairs().map(|(a, b)| format!("{a} {b}\n")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_round_trip() {
        let text = "dsm 1\nagents 2\nprefs 1: 2\nprefs 2: 1\n";
        let f = parse_instance(text).unwrap();
        assert!(f.deviators.is_empty());
        assert_eq!(serialize_instance(&f.instance, &f.deviators), text);
    }

    #[test]
    fn deviators_sides_and_comments() {
        let text = "# ordered triangle\ndsm 1\nagents 3   # three agents\n\ndeviators 1 3\nprefs 1: 2 3\nprefs 2 : 3 1\nprefs 3: 1 2\n";
        let f = parse_instance(text).unwrap();
        assert_eq!(f.deviators.members(), &[agent(1), agent(3)]);
        let canon = serialize_instance(&f.instance, &f.deviators);
        assert_eq!(parse_instance(&canon).unwrap(), f);

        let sided = "dsm 1\nagents 2\nsides 0 1\nprefs 1: 2\nprefs 2: 1\n";
        let f = parse_instance(sided).unwrap();
        assert_eq!(f.instance.sides(), Some(&[0u8, 1][..]));
        assert_eq!(serialize_instance(&f.instance, &f.deviators), sided);
    }

    #[test]
    fn errors_carry_lines() {
        let cases = [
            ("dsm 2\n", 1),
            ("dsm 1\nagents x\n", 2),
            ("dsm 1\nagents 2\ndeviators 3\n", 3),
            ("dsm 1\nagents 2\nprefs 1: 2\n", 4),
            ("dsm 1\nagents 2\nprefs 1: 2\nprefs 2:\n", 3),
            ("dsm 1\nagents 2\nsides 0 0\nprefs 1: 2\nprefs 2: 1\n", 3),
            ("dsm 1\nagents 2\nprefs 2: 1\nprefs 1: 2\n", 3),
            ("dsm 1\nagents 1\nprefs 1: 1\n", 3),
        ];
        for (text, line) in cases {
            let e = parse_instance(text).unwrap_err();
            assert_eq!(e.line(), line, "{text:?}: {e}");
        }
    }

    #[test]
    fn matchings() {
        let f = parse_instance("dsm 1\nagents 4\nprefs 1: 2\nprefs 2: 1\nprefs 3: 4\nprefs 4: 3\n").unwrap();
        let m = parse_matching("# pairs\n4 3\n1 2\n", &f.instance).unwrap();
        assert_eq!(serialize_matching(&m), "1 2\n3 4\n");
        assert_eq!(parse_matching("1 3\n", &f.instance).unwrap_err().line(), 1);
        assert_eq!(parse_matching("1 2\n2 1\n", &f.instance).unwrap_err().line(), 2);
        assert_eq!(parse_matching("1 2 3\n", &f.instance).unwrap_err().line(), 1);
    }
}
