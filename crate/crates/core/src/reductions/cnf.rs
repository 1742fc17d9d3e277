//! (2,2)-E3-SAT formulas: three distinct literals per clause, every variable
//! exactly twice unnegated and twice negated.

use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Polarity {
    Unnegated,
    Negated,
}

impl fmt::Display for Polarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Polarity::Unnegated => "unnegated",
            Polarity::Negated => "negated",
        })
    }
}

/// Clause indices in errors are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CnfError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("missing `p cnf` header")]
    MissingHeader,
    #[error("header declares {declared} clauses but {found} were given")]
    ClauseCount { declared: usize, found: usize },
    #[error("clause {clause} has {len} literals, expected 3")]
    BadArity { clause: usize, len: usize },
    #[error("clause {clause} repeats a literal")]
    DuplicateLiteral { clause: usize },
    #[error("clause {clause} uses literal {literal} outside 1..={num_vars}")]
    VariableOutOfRange { clause: usize, literal: i32, num_vars: usize },
    #[error("variable {var} occurs {count} times {polarity}, expected 2")]
    BadOccurrence { var: usize, polarity: Polarity, count: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CnfFormula {
    num_vars: usize,
    clauses: Vec<[i32; 3]>,
}

impl CnfFormula {
    /// Validates arity, distinctness and the occurrence counts.
    pub fn new(num_vars: usize, clauses: Vec<Vec<i32>>) -> Result<Self, CnfError> {
        let mut fixed = Vec::with_capacity(clauses.len());
        for (j, c) in clauses.iter().enumerate() {
            let clause = j + 1;
            if c.len() != 3 {
                return Err(CnfError::BadArity { clause, len: c.len() });
            }
            for &l in c {
                if l == 0 || l.unsigned_abs() as usize > num_vars {
                    return Err(CnfError::VariableOutOfRange { clause, literal: l, num_vars });
                }
            }
            if c[0] == c[1] || c[0] == c[2] || c[1] == c[2] {
                return Err(CnfError::DuplicateLiteral { clause });
            }
            fixed.push([c[0], c[1], c[2]]);
        }
        let mut pos = vec![0usize; num_vars + 1];
        let mut neg = vec![0usize; num_vars + 1];
        for c in &fixed {
            for &l in c {
                if l > 0 {
                    pos[l as usize] += 1;
                } else {
                    neg[l.unsigned_abs() as usize] += 1;
                }
            }
        }
        for var in 1..=num_vars {
            for (count, polarity) in [(pos[var], Polarity::Unnegated), (neg[var], Polarity::Negated)] {
                if count != 2 {
                    return Err(CnfError::BadOccurrence { var, polarity, count });
                }
            }
        }
        Ok(CnfFormula { num_vars, clauses: fixed })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn clauses(&self) -> &[[i32; 3]] {
        &self.clauses
    }

    /// `assignment[v - 1]` is the value of variable `v`.
    pub fn is_satisfied_by(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|c| c.iter().any(|&l| literal_true(l, assignment)))
    }

    /// First satisfying assignment in binary counting order (variable 1 is
    /// the lowest bit), by exhaustive search.
    pub fn find_satisfying_assignment(&self) -> Option<Vec<bool>> {
        assert!(self.num_vars < 32, "exhaustive search needs fewer than 32 variables");
        (0u64..1 << self.num_vars).find_map(|bits| {
            let a: Vec<bool> = (0..self.num_vars).map(|v| bits >> v & 1 == 1).collect();
            self.is_satisfied_by(&a).then_some(a)
        })
    }

    pub fn to_dimacs(&self) -> String {
        let mut s = format!("p cnf {} {}\n", self.num_vars, self.clauses.len());
        for c in &self.clauses {
            s.push_str(&format!("{} {} {} 0\n", c[0], c[1], c[2]));
        }
        s
    }
}

pub(crate) fn literal_true(l: i32, assignment: &[bool]) -> bool {
    let v = assignment[l.unsigned_abs() as usize - 1];
    if l > 0 {
        v
    } else {
        !v
    }
}

/// DIMACS input: `c` comment lines, one `p cnf <n> <m>` header, clauses as
/// literals terminated by `0`.
pub fn parse_cnf_22e3(text: &str) -> Result<CnfFormula, CnfError> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut current = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let t = raw.trim();
        if t.is_empty() || t.starts_with('c') {
            continue;
        }
        if t.starts_with('%') {
            break;
        }
        if t.starts_with('p') {
            if header.is_some() {
                return Err(CnfError::Syntax { line, msg: "second header".into() });
            }
            let parts: Vec<&str> = t.split_whitespace().collect();
            let parsed = match parts.as_slice() {
                ["p", "cnf", n, m] => n.parse().ok().zip(m.parse().ok()),
                _ => None,
            };
            header = Some(parsed.ok_or_else(|| CnfError::Syntax {
                line,
                msg: format!("bad header `{t}`"),
            })?);
            continue;
        }
        if header.is_none() {
            return Err(CnfError::MissingHeader);
        }
        for tok in t.split_whitespace() {
            let l: i32 = tok.parse().map_err(|_| CnfError::Syntax {
                line,
                msg: format!("bad literal `{tok}`"),
            })?;
            if l == 0 {
                clauses.push(std::mem::take(&mut current));
            } else {
                current.push(l);
            }
        }
    }
    let (n, m) = header.ok_or(CnfError::MissingHeader)?;
    if !current.is_empty() {
        clauses.push(current);
    }
    if clauses.len() != m {
        return Err(CnfError::ClauseCount { declared: m, found: clauses.len() });
    }
    CnfFormula::new(n, clauses)
}

/// `(V1 ∨ V2 ∨ V3) ∧ (¬V1 ∨ ¬V2 ∨ ¬V3) ∧ (V1 ∨ ¬V2 ∨ V3) ∧ (¬V1 ∨ V2 ∨ ¬V3)`
pub fn formula_b() -> CnfFormula {
    CnfFormula::new(3, vec![vec![1, 2, 3], vec![-1, -2, -3], vec![1, -2, 3], vec![-1, 2, -3]])
        .expect("well formed")
}

/// A seeded random (2,2)-E3-SAT formula: the `4n` literal occurrences are
/// shuffled and cut into clauses, retrying until no clause repeats a literal.
pub fn random_22e3(num_vars: usize, seed: u64) -> CnfFormula {
    assert!(num_vars.is_multiple_of(3) && num_vars > 0, "variable count must be a positive multiple of 3");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut occ: Vec<i32> = (1..=num_vars as i32).flat_map(|v| [v, v, -v, -v]).collect();
    loop {
        occ.shuffle(&mut rng);
        let clauses: Vec<Vec<i32>> = occ.chunks(3).map(|c| c.to_vec()).collect();
        if let Ok(f) = CnfFormula::new(num_vars, clauses) {
            return f;
        }
    }
}
