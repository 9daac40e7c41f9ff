//! Loop-nest parser.
//!
//! Builds just enough structure for the classification passes: the outer DO
//! header, nested DO headers, assignments, CALL statements and IF guards.
//! Anything else becomes an `Other` statement so legacy code never fails to
//! parse. Statements record the IF conditions guarding them, which the
//! reduction pass needs to spot max-style conditional updates.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::ident::{canonicalize, Identifier};
use crate::lexer::{Token, TokenKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EndKind {
    Do,
    If,
    Unknown,
}

#[derive(Debug, Clone, PartialEq)]
pub enum StatementKind {
    Assignment {
        target: Identifier,
        /// One token list per subscript expression; empty for scalar targets.
        subscripts: Vec<Vec<Token>>,
        rhs: Vec<Token>,
    },
    DoHeader {
        index: Identifier,
        /// lower, upper, optional stride.
        bounds: Vec<Vec<Token>>,
    },
    CallStmt {
        callee: Identifier,
        args: Vec<Vec<Token>>,
    },
    IfHeader {
        condition: Vec<Token>,
        /// true for `if (...) then`; false for a one-line logical IF whose
        /// guarded statement follows immediately.
        block: bool,
    },
    ElseMarker {
        condition: Vec<Token>,
    },
    EndMarker(EndKind),
    Other {
        tokens: Vec<Token>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Statement {
    pub kind: StatementKind,
    pub line: u32,
}

/// A body statement with its DO-nesting depth (0 = directly inside the
/// parallel loop) and the identifiers of every enclosing IF condition.
#[derive(Debug, Clone, PartialEq)]
pub struct BodyStatement {
    pub statement: Statement,
    pub depth: u32,
    pub guard_idents: BTreeSet<Identifier>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LoopNest {
    pub parallel_index: Identifier,
    pub inner_indices: Vec<Identifier>,
    pub body: Vec<BodyStatement>,
    pub start_line: u32,
    pub end_line: u32,
    /// Lines of further top-level DO statements after this loop closed.
    pub trailing_loop_lines: Vec<u32>,
}

/// Collect canonical identifiers occurring anywhere in a token list.
pub fn identifiers_in(tokens: &[Token]) -> BTreeSet<Identifier> {
    tokens
        .iter()
        .filter(|t| t.kind == TokenKind::Identifier)
        .filter_map(|t| canonicalize(&t.text).ok())
        .collect()
}

/// Split a token list at top-level commas (paren depth 0).
pub fn split_top_level_commas(tokens: &[Token]) -> Vec<Vec<Token>> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    let mut depth = 0i32;
    for t in tokens {
        if t.is_punct("(") {
            depth += 1;
        } else if t.is_punct(")") {
            depth -= 1;
        }
        if depth == 0 && t.is_punct(",") {
            out.push(std::mem::take(&mut current));
        } else {
            current.push(t.clone());
        }
    }
    if !current.is_empty() || !out.is_empty() {
        out.push(current);
    }
    out
}

/// Group the token stream into logical statements: comments are dropped,
/// a `&` joins the next line, end-of-line (or `;`) terminates a statement.
fn logical_statements(tokens: &[Token]) -> Vec<Vec<Token>> {
    let mut statements = Vec::new();
    let mut current: Vec<Token> = Vec::new();
    let mut joining = false;
    for t in tokens {
        match t.kind {
            TokenKind::Comment => {}
            TokenKind::Continuation => joining = true,
            TokenKind::EndOfLine => {
                if joining {
                    joining = false;
                } else if !current.is_empty() {
                    statements.push(std::mem::take(&mut current));
                }
            }
            _ => {
                joining = false;
                current.push(t.clone());
            }
        }
    }
    if !current.is_empty() {
        statements.push(current);
    }
    statements
}

fn find_top_level_assign(tokens: &[Token]) -> Option<usize> {
    let mut depth = 0i32;
    for (i, t) in tokens.iter().enumerate() {
        if t.is_punct("(") {
            depth += 1;
        } else if t.is_punct(")") {
            depth -= 1;
        } else if depth == 0 && t.is_operator("=") {
            return Some(i);
        }
    }
    None
}

/// Find the index of the `)` matching the `(` at `open`.
fn matching_paren(tokens: &[Token], open: usize) -> Option<usize> {
    let mut depth = 0i32;
    for (i, t) in tokens.iter().enumerate().skip(open) {
        if t.is_punct("(") {
            depth += 1;
        } else if t.is_punct(")") {
            depth -= 1;
            if depth == 0 {
                return Some(i);
            }
        }
    }
    None
}

/// Classify one logical statement. Logical IFs (`if (c) x = y`) yield two
/// statements: the header and the embedded statement.
fn classify(tokens: &[Token]) -> Vec<Statement> {
    let line = tokens.first().map_or(0, |t| t.line);
    let other = |tokens: &[Token]| Statement {
        kind: StatementKind::Other {
            tokens: tokens.to_vec(),
        },
        line,
    };
    let first = match tokens.first() {
        Some(t) => t,
        None => return vec![],
    };

    if first.is_keyword("ENDDO") {
        return vec![Statement {
            kind: StatementKind::EndMarker(EndKind::Do),
            line,
        }];
    }
    if first.is_keyword("ENDIF") {
        return vec![Statement {
            kind: StatementKind::EndMarker(EndKind::If),
            line,
        }];
    }
    if first.is_keyword("END") {
        let kind = match tokens.get(1) {
            Some(t) if t.is_keyword("DO") => EndKind::Do,
            Some(t) if t.is_keyword("IF") => EndKind::If,
            _ => EndKind::Unknown,
        };
        return vec![Statement {
            kind: StatementKind::EndMarker(kind),
            line,
        }];
    }
    if first.is_keyword("DO") {
        // do <index> = lower, upper [, stride]
        if let (Some(idx_tok), Some(eq)) = (tokens.get(1), tokens.get(2)) {
            if idx_tok.kind == TokenKind::Identifier && eq.is_operator("=") {
                if let Ok(index) = canonicalize(&idx_tok.text) {
                    let bounds = split_top_level_commas(&tokens[3..]);
                    return vec![Statement {
                        kind: StatementKind::DoHeader { index, bounds },
                        line,
                    }];
                }
            }
        }
        return vec![other(tokens)];
    }
    if first.is_keyword("CALL") {
        if let Some(callee_tok) = tokens.get(1) {
            if callee_tok.kind == TokenKind::Identifier {
                if let Ok(callee) = canonicalize(&callee_tok.text) {
                    let args = match tokens.get(2) {
                        Some(t) if t.is_punct("(") => match matching_paren(tokens, 2) {
                            Some(close) => split_top_level_commas(&tokens[3..close]),
                            None => split_top_level_commas(&tokens[3..]),
                        },
                        _ => vec![],
                    };
                    return vec![Statement {
                        kind: StatementKind::CallStmt { callee, args },
                        line,
                    }];
                }
            }
        }
        return vec![other(tokens)];
    }
    if first.is_keyword("IF") {
        if tokens.get(1).is_some_and(|t| t.is_punct("(")) {
            if let Some(close) = matching_paren(tokens, 1) {
                let condition = tokens[2..close].to_vec();
                let tail = &tokens[close + 1..];
                let block = tail.is_empty() || tail[0].is_keyword("THEN");
                let header = Statement {
                    kind: StatementKind::IfHeader { condition, block },
                    line,
                };
                if block {
                    return vec![header];
                }
                // logical IF: the guarded statement follows on the same line
                let mut out = vec![header];
                out.extend(classify(tail));
                return out;
            }
        }
        return vec![other(tokens)];
    }
    if first.is_keyword("ELSE") {
        // 'else if (c) then' carries a condition of its own
        let condition = match (tokens.get(1), tokens.get(2)) {
            (Some(kw), Some(open)) if kw.is_keyword("IF") && open.is_punct("(") => {
                match matching_paren(tokens, 2) {
                    Some(close) => tokens[3..close].to_vec(),
                    None => vec![],
                }
            }
            _ => vec![],
        };
        return vec![Statement {
            kind: StatementKind::ElseMarker { condition },
            line,
        }];
    }
    if first.kind == TokenKind::Identifier {
        if let Some(eq) = find_top_level_assign(tokens) {
            let lhs = &tokens[..eq];
            let rhs = tokens[eq + 1..].to_vec();
            let target = canonicalize(&first.text).ok();
            let shape_ok = match (target.as_ref(), lhs.len()) {
                (Some(_), 1) => Some(vec![]),
                (Some(_), n) if n >= 3 && lhs[1].is_punct("(") && lhs[n - 1].is_punct(")") => {
                    Some(split_top_level_commas(&lhs[2..n - 1]))
                }
                _ => None,
            };
            if let (Some(target), Some(subscripts)) = (target, shape_ok) {
                return vec![Statement {
                    kind: StatementKind::Assignment {
                        target,
                        subscripts,
                        rhs,
                    },
                    line,
                }];
            }
        }
    }
    vec![other(tokens)]
}

/// Parse a token stream starting at the outermost DO into a [`LoopNest`].
pub fn parse_loop(tokens: &[Token]) -> Result<LoopNest> {
    let statements: Vec<Statement> = logical_statements(tokens)
        .iter()
        .flat_map(|toks| classify(toks))
        .collect();

    let mut iter = statements.into_iter();
    let header = iter.next().ok_or(Error::NotALoop { line: 1 })?;
    let (parallel_index, start_line) = match header {
        Statement {
            kind: StatementKind::DoHeader { ref index, .. },
            line,
        } => (index.clone(), line),
        Statement { line, .. } => return Err(Error::NotALoop { line }),
    };

    let mut body = Vec::new();
    let mut inner_indices: Vec<Identifier> = Vec::new();
    let mut depth = 1u32;
    let mut end_line = start_line;
    let mut guard_stack: Vec<BTreeSet<Identifier>> = Vec::new();
    // guard applied to exactly the next statement (logical IF tail)
    let mut pending_guard: Option<BTreeSet<Identifier>> = None;
    let mut trailing_loop_lines = Vec::new();
    let mut closed = false;

    for stmt in iter {
        if closed {
            if let StatementKind::DoHeader { .. } = stmt.kind {
                trailing_loop_lines.push(stmt.line);
            }
            continue;
        }
        let one_shot = pending_guard.take();
        match &stmt.kind {
            StatementKind::EndMarker(EndKind::Do) => {
                depth -= 1;
                if depth == 0 {
                    end_line = stmt.line;
                    closed = true;
                    continue;
                }
                push_body(&mut body, stmt, depth - 1, &guard_stack, None);
            }
            StatementKind::EndMarker(EndKind::If) => {
                guard_stack.pop();
                push_body(&mut body, stmt, depth - 1, &guard_stack, None);
            }
            StatementKind::DoHeader { index, .. } => {
                if *index != parallel_index && !inner_indices.contains(index) {
                    inner_indices.push(index.clone());
                }
                push_body(&mut body, stmt, depth - 1, &guard_stack, one_shot);
                depth += 1;
            }
            StatementKind::IfHeader { condition, block } => {
                let idents = identifiers_in(condition);
                let block = *block;
                push_body(&mut body, stmt, depth - 1, &guard_stack, one_shot);
                if block {
                    guard_stack.push(idents);
                } else {
                    pending_guard = Some(idents);
                }
            }
            StatementKind::ElseMarker { condition } => {
                if let Some(top) = guard_stack.last_mut() {
                    top.extend(identifiers_in(condition));
                }
                push_body(&mut body, stmt, depth - 1, &guard_stack, None);
            }
            _ => push_body(&mut body, stmt, depth - 1, &guard_stack, one_shot),
        }
    }

    if !closed {
        return Err(Error::UnbalancedLoop { open: depth });
    }

    Ok(LoopNest {
        parallel_index,
        inner_indices,
        body,
        start_line,
        end_line,
        trailing_loop_lines,
    })
}

fn push_body(
    body: &mut Vec<BodyStatement>,
    stmt: Statement,
    depth: u32,
    guards: &[BTreeSet<Identifier>],
    one_shot: Option<BTreeSet<Identifier>>,
) {
    let mut guard_idents = BTreeSet::new();
    for g in guards {
        guard_idents.extend(g.iter().cloned());
    }
    if let Some(extra) = one_shot {
        guard_idents.extend(extra);
    }
    body.push(BodyStatement {
        statement: stmt,
        depth,
        guard_idents,
    });
}
