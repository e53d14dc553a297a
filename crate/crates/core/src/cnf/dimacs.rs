//! DIMACS CNF reading and writing.
//!
//! Reading is liberal: duplicate literals and tautological clauses pass
//! through, comments are kept as formula metadata, clauses may span lines.
//! Writing is conservative and byte-stable: `p cnf <vars> <clauses>` followed
//! by one `0`-terminated clause per line, no comments.

use std::io::{self, BufRead, Write};

use thiserror::Error;

use super::{Formula, Lit};

#[derive(Debug, Error)]
pub enum DimacsParseError {
    #[error("line {line}: missing 'p cnf' header")]
    MissingHeader { line: usize },
    #[error("line {line}: malformed header {header:?}")]
    MalformedHeader { line: usize, header: String },
    #[error("line {line}: token {token:?} is not an integer")]
    BadToken { line: usize, token: String },
    #[error("line {line}: literal {lit} out of range 1..={num_vars}")]
    LiteralOutOfRange { line: usize, lit: i32, num_vars: usize },
    #[error("line {line}: empty clause")]
    EmptyClause { line: usize },
    #[error("clause count mismatch: header declares {declared}, found {found}")]
    ClauseCountMismatch { declared: usize, found: usize },
    #[error("unterminated clause at end of input")]
    UnterminatedClause,
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Parse DIMACS CNF from a reader.
pub fn parse_dimacs(reader: impl BufRead) -> Result<Formula, DimacsParseError> {
    let mut comments = Vec::new();
    let mut header: Option<(usize, usize)> = None;
    let mut clauses: Vec<Vec<Lit>> = Vec::new();
    let mut current: Vec<Lit> = Vec::new();
    let mut current_start_line = 0usize;

    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix('c') {
            comments.push(rest.trim_start().to_string());
            continue;
        }
        if trimmed.starts_with('p') {
            let fields: Vec<&str> = trimmed.split_whitespace().collect();
            if fields.len() != 4 || fields[1] != "cnf" {
                return Err(DimacsParseError::MalformedHeader {
                    line: line_no,
                    header: trimmed.to_string(),
                });
            }
            let vars = fields[2].parse::<usize>().map_err(|_| DimacsParseError::BadToken {
                line: line_no,
                token: fields[2].to_string(),
            })?;
            let n_clauses = fields[3].parse::<usize>().map_err(|_| DimacsParseError::BadToken {
                line: line_no,
                token: fields[3].to_string(),
            })?;
            header = Some((vars, n_clauses));
            continue;
        }
        let (num_vars, _) = header.ok_or(DimacsParseError::MissingHeader { line: line_no })?;
        if current.is_empty() {
            current_start_line = line_no;
        }
        for token in trimmed.split_whitespace() {
            let code = token.parse::<i32>().map_err(|_| DimacsParseError::BadToken {
                line: line_no,
                token: token.to_string(),
            })?;
            if code == 0 {
                if current.is_empty() {
                    return Err(DimacsParseError::EmptyClause { line: line_no });
                }
                clauses.push(std::mem::take(&mut current));
            } else {
                if code.unsigned_abs() as usize > num_vars {
                    return Err(DimacsParseError::LiteralOutOfRange {
                        line: line_no,
                        lit: code,
                        num_vars,
                    });
                }
                current.push(Lit(code));
            }
        }
    }

    let (num_vars, declared) = header.ok_or(DimacsParseError::MissingHeader { line: 0 })?;
    if !current.is_empty() {
        let _ = current_start_line;
        return Err(DimacsParseError::UnterminatedClause);
    }
    if clauses.len() != declared {
        return Err(DimacsParseError::ClauseCountMismatch { declared, found: clauses.len() });
    }
    let mut formula = Formula { num_vars, clauses, comments: Vec::new() };
    formula.set_comments(comments);
    Ok(formula)
}

/// Parse DIMACS CNF from an in-memory string.
pub fn parse_dimacs_str(text: &str) -> Result<Formula, DimacsParseError> {
    parse_dimacs(text.as_bytes())
}

/// Write a formula in DIMACS CNF. Comments are not written.
pub fn write_dimacs(formula: &Formula, mut out: impl Write) -> io::Result<()> {
    writeln!(out, "p cnf {} {}", formula.num_vars(), formula.num_clauses())?;
    for clause in formula.clauses() {
        for lit in clause {
            write!(out, "{} ", lit.code())?;
        }
        writeln!(out, "0")?;
    }
    Ok(())
}

/// Render a formula to a DIMACS string.
pub fn to_dimacs_string(formula: &Formula) -> String {
    let mut buf = Vec::new();
    write_dimacs(formula, &mut buf).expect("write to Vec cannot fail");
    String::from_utf8(buf).expect("DIMACS output is ASCII")
}

#[cfg(test)]
mod tests {
    use super::super::tests::random_formula;
    use super::*;
    use crate::seed::make_rng;

    #[test]
    fn smallest_wellformed_input() {
        let f = parse_dimacs_str("p cnf 1 1\n1 0").unwrap();
        assert_eq!(f, Formula::from_codes(1, &[&[1]]));
    }

    #[test]
    fn two_clause_transcription() {
        let f = parse_dimacs_str("p cnf 2 2\n1 -2 0\n-1 2 0").unwrap();
        assert_eq!(f.num_vars(), 2);
        assert_eq!(f.num_clauses(), 2);
        assert_eq!(f, Formula::from_codes(2, &[&[1, -2], &[-1, 2]]));
    }

    #[test]
    fn literal_out_of_range_names_line() {
        let err = parse_dimacs_str("p cnf 1 1\n3 0").unwrap_err();
        match err {
            DimacsParseError::LiteralOutOfRange { line, lit, num_vars } => {
                assert_eq!((line, lit, num_vars), (2, 3, 1));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn clause_count_mismatch_detected() {
        let err = parse_dimacs_str("p cnf 2 3\n1 0\n2 0").unwrap_err();
        assert!(matches!(err, DimacsParseError::ClauseCountMismatch { declared: 3, found: 2 }));
    }

    #[test]
    fn malformed_header_reported() {
        let err = parse_dimacs_str("p dnf 2 1\n1 0").unwrap_err();
        assert!(matches!(err, DimacsParseError::MalformedHeader { line: 1, .. }));
    }

    #[test]
    fn comments_kept_on_read_not_written() {
        let f = parse_dimacs_str("c generated by hand\np cnf 1 1\nc mid comment\n1 0").unwrap();
        assert_eq!(f.comments(), ["generated by hand", "mid comment"]);
        let text = to_dimacs_string(&f);
        assert!(
            text.lines().all(|l| !l.starts_with('c')),
            "comments must not be written: {text}"
        );
    }

    #[test]
    fn duplicate_and_tautological_literals_accepted() {
        let f = parse_dimacs_str("p cnf 2 2\n1 1 -1 0\n2 2 0").unwrap();
        assert_eq!(f.num_clauses(), 2);
        assert_eq!(f.clauses()[0].len(), 3);
    }

    #[test]
    fn clause_spanning_lines() {
        let f = parse_dimacs_str("p cnf 3 1\n1 2\n3 0").unwrap();
        assert_eq!(f, Formula::from_codes(3, &[&[1, 2, 3]]));
    }

    #[test]
    fn header_is_byte_exact() {
        let f = Formula::from_codes(3, &[&[1, -2], &[3]]);
        let text = to_dimacs_string(&f);
        assert!(text.starts_with("p cnf 3 2\n"));
        assert_eq!(text, "p cnf 3 2\n1 -2 0\n3 0\n");
    }

    #[test]
    fn roundtrip_random_formulas() {
        let mut rng = make_rng(99);
        for _ in 0..40 {
            let f = random_formula(&mut rng, 12, 30);
            let back = parse_dimacs_str(&to_dimacs_string(&f)).unwrap();
            assert_eq!(f, back);
        }
    }
}
