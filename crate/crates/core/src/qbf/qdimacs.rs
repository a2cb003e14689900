//! QDIMACS subset: `c` comments, one `p cnf <vars> <clauses>` header,
//! `e`/`a` quantifier lines, then one clause per line. Every quantifier and
//! clause line ends with `0`. Clauses shorter than three literals are padded
//! by repeating their last literal.

use std::fmt::{self, Write as _};

use super::{Clause, Lit, QbfFormula, Quantifier};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QdimacsError {
    /// 1-based line number, 0 for whole-file problems.
    pub line: usize,
    pub message: String,
}

impl fmt::Display for QdimacsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line > 0 {
            write!(f, "line {}: {}", self.line, self.message)
        } else {
            f.write_str(&self.message)
        }
    }
}

impl std::error::Error for QdimacsError {}

fn fail<T>(line: usize, message: impl Into<String>) -> Result<T, QdimacsError> {
    Err(QdimacsError { line, message: message.into() })
}

/// Parses the QDIMACS subset. Variables that occur in the matrix but in no
/// quantifier line are free and, as usual for QDIMACS, bound existentially in
/// an outermost block.
pub fn parse_qdimacs(text: &str) -> Result<QbfFormula, QdimacsError> {
    let mut header: Option<(u32, usize)> = None;
    let mut prefix: Vec<(Quantifier, u32)> = Vec::new();
    let mut clauses: Vec<Clause> = Vec::new();
    let mut quantified: Vec<bool> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if let Some(rest) = line.strip_prefix('p') {
            if header.is_some() {
                return fail(line_no, "duplicate problem line");
            }
            let f: Vec<&str> = rest.split_whitespace().collect();
            let (vars, count) = match f.as_slice() {
                ["cnf", v, c] => match (v.parse::<u32>(), c.parse::<usize>()) {
                    (Ok(v), Ok(c)) if v < i32::MAX as u32 => (v, c),
                    _ => return fail(line_no, "malformed problem line"),
                },
                _ => return fail(line_no, "expected `p cnf <vars> <clauses>`"),
            };
            header = Some((vars, count));
            quantified = vec![false; vars as usize + 1];
            continue;
        }
        let Some((num_vars, _)) = header else {
            return fail(line_no, "expected `p cnf` header before any other line");
        };
        let (quant, body) = match line.as_bytes()[0] {
            b'e' => (Some(Quantifier::Exists), &line[1..]),
            b'a' => (Some(Quantifier::Forall), &line[1..]),
            _ => (None, line),
        };
        let mut nums = Vec::new();
        for tok in body.split_whitespace() {
            match tok.parse::<i32>() {
                Ok(x) => nums.push(x),
                Err(_) => return fail(line_no, format!("expected integer, got {tok:?}")),
            }
        }
        if nums.last() != Some(&0) {
            return fail(line_no, "missing terminating 0");
        }
        nums.pop();
        if nums.contains(&0) {
            return fail(line_no, "0 before end of line");
        }
        for &x in &nums {
            if x.unsigned_abs() > num_vars {
                return fail(line_no, format!("variable {} out of range 1..={num_vars}", x.unsigned_abs()));
            }
        }
        match quant {
            Some(q) => {
                if !clauses.is_empty() {
                    return fail(line_no, "quantifier line after clauses");
                }
                for &x in &nums {
                    if x < 0 {
                        return fail(line_no, "negative variable in quantifier line");
                    }
                    if std::mem::replace(&mut quantified[x as usize], true) {
                        return fail(line_no, format!("variable {x} quantified twice"));
                    }
                    prefix.push((q, x as u32));
                }
            }
            None => {
                if nums.is_empty() {
                    return fail(line_no, "empty clause");
                }
                if nums.len() > 3 {
                    return fail(line_no, format!("clause has {} literals, at most 3 supported", nums.len()));
                }
                let last = *nums.last().unwrap();
                nums.resize(3, last);
                clauses.push([Lit(nums[0]), Lit(nums[1]), Lit(nums[2])]);
            }
        }
    }

    let Some((num_vars, count)) = header else {
        return fail(0, "missing `p cnf` header");
    };
    if clauses.len() != count {
        return fail(0, format!("header declares {count} clauses, found {}", clauses.len()));
    }
    let mut free: Vec<u32> = clauses.iter().flatten().map(|l| l.var()).filter(|&v| !quantified[v as usize]).collect();
    free.sort_unstable();
    free.dedup();
    let mut full = Vec::with_capacity(prefix.len() + free.len());
    full.extend(free.into_iter().map(|v| (Quantifier::Exists, v)));
    full.extend(prefix);
    Ok(QbfFormula { num_vars, prefix: full, clauses })
}

/// Emits the formula with one quantifier line per maximal block.
pub fn write_qdimacs(f: &QbfFormula) -> String {
    let mut out = format!("p cnf {} {}\n", f.num_vars, f.clauses.len());
    let mut k = 0;
    while k < f.prefix.len() {
        let q = f.prefix[k].0;
        out.push(q.symbol());
        while k < f.prefix.len() && f.prefix[k].0 == q {
            write!(out, " {}", f.prefix[k].1).unwrap();
            k += 1;
        }
        out.push_str(" 0\n");
    }
    for c in &f.clauses {
        writeln!(out, "{} {} {} 0", c[0].0, c[1].0, c[2].0).unwrap();
    }
    out
}
