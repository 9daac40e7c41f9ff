//! Shared test support: an independent brute-force oracle, a random loop
//! generator and a corpus walker.
//!
//! The oracle re-derives the classification from scratch with string
//! scanning and regexes, deliberately sharing no code with the library's
//! lexer/parser path, so agreement between the two is meaningful.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use rand::rngs::StdRng;
use rand::Rng;
use regex::Regex;

// ---------------------------------------------------------------------------
// oracle
// ---------------------------------------------------------------------------

#[derive(Debug, Default, PartialEq, Eq)]
pub struct OracleResult {
    pub scope: BTreeSet<String>,
    pub loop_indices: BTreeSet<String>,
    pub shared: BTreeSet<String>,
    pub candidates: BTreeSet<String>,
    /// candidates ∩ declarations
    pub intersection: BTreeSet<String>,
    pub reductions: BTreeSet<(String, char)>,
    pub manual_sync: BTreeSet<String>,
}

struct Write {
    target: String,
    subscripts: BTreeSet<String>,
    scalar: bool,
    /// direct assignment RHS (None for DO-index / CALL-argument writes)
    rhs: Option<String>,
    /// identifiers of every enclosing IF condition
    guard: BTreeSet<String>,
}

fn ident_re() -> &'static Regex {
    use std::sync::OnceLock;
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"\b[A-Z][A-Z0-9_]*\b").unwrap())
}

/// Identifiers in an upper-cased expression, dot-operators removed first.
fn idents(expr: &str) -> BTreeSet<String> {
    let cleaned = Regex::new(r"\.[A-Z]+\.").unwrap().replace_all(expr, " ");
    ident_re()
        .find_iter(&cleaned)
        .map(|m| m.as_str().to_string())
        .collect()
}

fn word_contains(expr: &str, name: &str) -> bool {
    idents(expr).contains(name)
}

/// Upper-case, blank out string literals, strip comments.
fn sanitize_line(line: &str) -> String {
    let mut out = String::new();
    let mut quote: Option<char> = None;
    for c in line.chars() {
        match quote {
            Some(q) => {
                if c == q {
                    quote = None;
                }
                out.push(' ');
            }
            None => match c {
                '\'' | '"' => {
                    quote = Some(c);
                    out.push(' ');
                }
                '!' => break,
                _ => out.push(c.to_ascii_uppercase()),
            },
        }
    }
    out
}

fn logical_lines(text: &str) -> Vec<String> {
    let mut lines: Vec<String> = Vec::new();
    let mut joining = false;
    for raw in text.lines() {
        let mut line = sanitize_line(raw).trim().to_string();
        if let Some(rest) = line.strip_prefix('&') {
            line = rest.trim_start().to_string();
        }
        let continues = line.ends_with('&');
        if continues {
            line.truncate(line.len() - 1);
            line = line.trim_end().to_string();
        }
        if joining {
            if let Some(last) = lines.last_mut() {
                last.push(' ');
                last.push_str(&line);
            }
        } else if !line.is_empty() {
            lines.push(line);
        }
        joining = continues;
    }
    lines
}

fn split_top_commas(s: &str) -> Vec<String> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for c in s.chars() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(std::mem::take(&mut cur));
                continue;
            }
            _ => {}
        }
        cur.push(c);
    }
    parts.push(cur);
    parts
}

fn find_matching_paren(s: &str, open: usize) -> Option<usize> {
    let mut depth = 0i32;
    for (i, c) in s.char_indices().skip(open) {
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth == 0 {
                    return Some(i);
                }
            }
            _ => {}
        }
    }
    None
}

/// First `=` at paren depth 0 that is an assignment, not a comparison.
fn top_level_assign(s: &str) -> Option<usize> {
    let bytes = s.as_bytes();
    let mut depth = 0i32;
    for (i, &b) in bytes.iter().enumerate() {
        match b {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b'=' if depth == 0 => {
                let prev = if i > 0 { bytes[i - 1] } else { b' ' };
                let next = bytes.get(i + 1).copied().unwrap_or(b' ');
                if !matches!(prev, b'=' | b'<' | b'>' | b'/') && next != b'=' {
                    return Some(i);
                }
            }
            _ => {}
        }
    }
    None
}

fn arg_write(arg: &str) -> Option<(String, BTreeSet<String>)> {
    let arg = arg.trim();
    let bare = Regex::new(r"^[A-Z][A-Z0-9_]*$").unwrap();
    if bare.is_match(arg) {
        return Some((arg.to_string(), BTreeSet::new()));
    }
    let open = arg.find('(')?;
    let name = arg[..open].trim();
    if !bare.is_match(name) {
        return None;
    }
    let close = find_matching_paren(arg, open)?;
    if close != arg.len() - 1 {
        return None;
    }
    Some((name.to_string(), idents(&arg[open + 1..close])))
}

struct OracleScan {
    writes: Vec<Write>,
    parallel_index: Option<String>,
    loop_indices: BTreeSet<String>,
}

fn scan(loop_text: &str) -> OracleScan {
    let re_do = Regex::new(r"^DO\s+([A-Z][A-Z0-9_]*)\s*=").unwrap();
    let re_end_do = Regex::new(r"^(END\s*DO|ENDDO)\b").unwrap();
    let re_end_if = Regex::new(r"^(END\s*IF|ENDIF)\b").unwrap();
    let re_else_if = Regex::new(r"^ELSE\s*IF\s*\(").unwrap();
    let re_else = Regex::new(r"^ELSE\b").unwrap();
    let re_call = Regex::new(r"^CALL\s+[A-Z][A-Z0-9_]*").unwrap();
    let re_if = Regex::new(r"^IF\s*\(").unwrap();
    let re_lhs = Regex::new(r"^([A-Z][A-Z0-9_]*)\s*(\(.*\))?\s*$").unwrap();

    let mut result = OracleScan {
        writes: Vec::new(),
        parallel_index: None,
        loop_indices: BTreeSet::new(),
    };
    let mut guard_stack: Vec<BTreeSet<String>> = Vec::new();
    let mut depth = 0i32;
    let mut closed = false;

    // a tiny recursive statement processor, as a queue of (stmt, one-shot guard)
    let mut queue: Vec<(String, BTreeSet<String>)> = logical_lines(loop_text)
        .into_iter()
        .map(|l| (l, BTreeSet::new()))
        .collect();
    queue.reverse();

    while let Some((stmt, one_shot)) = queue.pop() {
        if closed {
            break;
        }
        let guard: BTreeSet<String> = guard_stack
            .iter()
            .flatten()
            .chain(one_shot.iter())
            .cloned()
            .collect();
        if let Some(caps) = re_do.captures(&stmt) {
            let index = caps[1].to_string();
            if result.parallel_index.is_none() {
                result.parallel_index = Some(index.clone());
            } else {
                result.writes.push(Write {
                    target: index.clone(),
                    subscripts: BTreeSet::new(),
                    scalar: true,
                    rhs: None,
                    guard,
                });
            }
            result.loop_indices.insert(index);
            depth += 1;
            continue;
        }
        if re_end_do.is_match(&stmt) {
            depth -= 1;
            if depth == 0 {
                closed = true;
            }
            continue;
        }
        if re_end_if.is_match(&stmt) {
            guard_stack.pop();
            continue;
        }
        if re_else_if.is_match(&stmt) {
            let open = stmt.find('(').unwrap();
            if let Some(close) = find_matching_paren(&stmt, open) {
                if let Some(top) = guard_stack.last_mut() {
                    top.extend(idents(&stmt[open + 1..close]));
                }
            }
            continue;
        }
        if re_else.is_match(&stmt) {
            continue;
        }
        if re_call.is_match(&stmt) {
            if let Some(open) = stmt.find('(') {
                if let Some(close) = find_matching_paren(&stmt, open) {
                    for arg in split_top_commas(&stmt[open + 1..close]) {
                        if let Some((target, subscripts)) = arg_write(&arg) {
                            let scalar = subscripts.is_empty();
                            result.writes.push(Write {
                                target,
                                subscripts,
                                scalar,
                                rhs: None,
                                guard: guard.clone(),
                            });
                        }
                    }
                }
            }
            continue;
        }
        if re_if.is_match(&stmt) {
            let open = stmt.find('(').unwrap();
            if let Some(close) = find_matching_paren(&stmt, open) {
                let cond = idents(&stmt[open + 1..close]);
                let tail = stmt[close + 1..].trim().to_string();
                if tail.is_empty() || tail == "THEN" {
                    guard_stack.push(cond);
                } else {
                    let mut merged = one_shot;
                    merged.extend(cond);
                    queue.push((tail, merged));
                }
            }
            continue;
        }
        if let Some(eq) = top_level_assign(&stmt) {
            let lhs = stmt[..eq].trim();
            if let Some(caps) = re_lhs.captures(lhs) {
                let target = caps[1].to_string();
                let subscripts = caps
                    .get(2)
                    .map(|m| idents(m.as_str()))
                    .unwrap_or_default();
                let scalar = caps.get(2).is_none();
                result.writes.push(Write {
                    target,
                    subscripts,
                    scalar,
                    rhs: Some(stmt[eq + 1..].trim().to_string()),
                    guard,
                });
            }
        }
    }
    result
}

/// Reduction pattern table applied to an RHS string: `V op expr` for
/// + - *, `expr op V` for + * only, expr free of V, op at paren depth 0.
fn match_pattern(rhs: &str, v: &str) -> Option<char> {
    let rhs = rhs.trim();
    // V op expr
    if let Some(rest) = rhs.strip_prefix(v) {
        if !rest.starts_with(|c: char| c.is_ascii_alphanumeric() || c == '_') {
            let rest = rest.trim_start();
            let mut chars = rest.chars();
            if let Some(op @ ('+' | '-' | '*')) = chars.next() {
                // reject '**'
                let tail = chars.as_str();
                let tail_trim = tail.trim();
                if (op != '*' || !tail.starts_with('*'))
                    && !tail_trim.is_empty() && !word_contains(tail_trim, v) {
                        return Some(op);
                    }
            }
        }
    }
    // expr op V (commutative)
    if let Some(head) = rhs.strip_suffix(v) {
        if !head.ends_with(|c: char| c.is_ascii_alphanumeric() || c == '_') {
            let head = head.trim_end();
            if let Some(op @ ('+' | '*')) = head.chars().last() {
                let before = head[..head.len() - 1].trim_end();
                let balanced = {
                    let mut d = 0i32;
                    for c in before.chars() {
                        match c {
                            '(' => d += 1,
                            ')' => d -= 1,
                            _ => {}
                        }
                    }
                    d == 0
                };
                // reject '**'
                if balanced
                    && !before.is_empty()
                    && !before.ends_with('*')
                    && !word_contains(before, v)
                {
                    return Some(op);
                }
            }
        }
    }
    None
}

pub fn oracle_analyze(loop_text: &str, decls: &BTreeSet<String>) -> OracleResult {
    let scan = scan(loop_text);
    let parallel = scan.parallel_index.clone().unwrap_or_default();

    let mut by_target: BTreeMap<String, Vec<&Write>> = BTreeMap::new();
    for w in &scan.writes {
        by_target.entry(w.target.clone()).or_default().push(w);
    }

    let mut result = OracleResult {
        loop_indices: scan.loop_indices.clone(),
        ..Default::default()
    };
    result.scope = by_target.keys().cloned().collect();

    for (target, writes) in &by_target {
        if scan.loop_indices.contains(target) {
            continue;
        }
        if writes.iter().all(|w| !w.subscripts.is_empty())
            && writes.iter().all(|w| w.subscripts.contains(&parallel))
        {
            result.shared.insert(target.clone());
        } else {
            result.candidates.insert(target.clone());
        }
    }
    result.intersection = result.candidates.intersection(decls).cloned().collect();

    for v in &result.intersection {
        let direct: Vec<&&Write> = by_target[v].iter().filter(|w| w.rhs.is_some()).collect();
        let mut ops: Vec<char> = Vec::new();
        let mut bad = false;
        let mut plain = false;
        for w in &direct {
            let rhs = w.rhs.as_ref().unwrap();
            if w.guard.contains(v) {
                bad = true;
            } else if word_contains(rhs, v) {
                match if w.scalar { match_pattern(rhs, v) } else { None } {
                    Some(op) => ops.push(op),
                    None => bad = true,
                }
            } else {
                plain = true;
            }
        }
        if bad {
            result.manual_sync.insert(v.clone());
        } else if !ops.is_empty() && !plain {
            if ops.iter().all(|o| *o == ops[0]) {
                result.reductions.insert((v.clone(), ops[0]));
            } else {
                result.manual_sync.insert(v.clone());
            }
        }
    }
    result
}

// ---------------------------------------------------------------------------
// random loop generator
// ---------------------------------------------------------------------------

const SCALARS: &[&str] = &["S", "T", "V", "W", "ACC", "YP4"];
const ARRAYS: &[&str] = &["A", "B", "C", "H"];

pub fn generator_decls() -> BTreeSet<String> {
    SCALARS
        .iter()
        .chain(ARRAYS.iter())
        .chain(["I", "II", "J"].iter())
        .map(|s| s.to_string())
        .collect()
}

pub fn generator_decl_text() -> String {
    let names: Vec<String> = generator_decls().into_iter().collect();
    format!("REAL(8) :: {}\n", names.join(", "))
}

fn pick<'a>(rng: &mut StdRng, pool: &[&'a str]) -> &'a str {
    pool[rng.gen_range(0..pool.len())]
}

fn gen_expr(rng: &mut StdRng, depth_names: &[&str]) -> String {
    let mut parts: Vec<String> = Vec::new();
    for _ in 0..rng.gen_range(1..=2) {
        parts.push(match rng.gen_range(0..4) {
            0 => pick(rng, SCALARS).to_string(),
            1 => format!("{}({})", pick(rng, ARRAYS), pick(rng, depth_names)),
            2 => rng.gen_range(1..99).to_string(),
            _ => format!("f({})", pick(rng, depth_names)),
        });
    }
    parts.join(match rng.gen_range(0..3) {
        0 => " + ",
        1 => " - ",
        _ => " * ",
    })
}

fn gen_statement(rng: &mut StdRng, indices: &[&str], out: &mut Vec<String>, indent: usize) {
    let pad = "  ".repeat(indent);
    match rng.gen_range(0..9) {
        // plain scalar assignment
        0 => {
            let t = pick(rng, SCALARS);
            out.push(format!("{pad}{t} = {}", gen_expr(rng, indices)));
        }
        // self-update, all three operators and both sides
        1 => {
            let v = pick(rng, SCALARS);
            let e = gen_expr(rng, indices);
            let s = match rng.gen_range(0..5) {
                0 => format!("{pad}{v} = {v} + {e}"),
                1 => format!("{pad}{v} = {e} + {v}"),
                2 => format!("{pad}{v} = {v} - {e}"),
                3 => format!("{pad}{v} = {v} * {e}"),
                _ => format!("{pad}{v} = {e} * {v}"),
            };
            out.push(s);
        }
        // non-reducible self reference
        2 => {
            let v = pick(rng, SCALARS);
            let e = gen_expr(rng, indices);
            out.push(format!("{pad}{v} = {e} - {v}"));
        }
        // array element write, subscripts may or may not use the parallel index
        3 | 4 => {
            let a = pick(rng, ARRAYS);
            let subs: Vec<&str> = (0..rng.gen_range(1..=2))
                .map(|_| pick(rng, indices))
                .collect();
            out.push(format!(
                "{pad}{a}({}) = {}",
                subs.join(","),
                gen_expr(rng, indices)
            ));
        }
        // array element self-update
        5 => {
            let a = pick(rng, ARRAYS);
            let i = pick(rng, indices);
            out.push(format!("{pad}{a}({i}) = {a}({i}) + 1"));
        }
        // call with a mix of argument shapes
        6 => {
            let t = pick(rng, SCALARS);
            let a = pick(rng, ARRAYS);
            let i = pick(rng, indices);
            out.push(format!("{pad}call sub({t}, {a}({i}), {t} + 2, 7)"));
        }
        // guarded update; condition sometimes tests the target (max pattern)
        7 => {
            let v = pick(rng, SCALARS);
            let cond_var = if rng.gen_bool(0.5) { v } else { pick(rng, SCALARS) };
            let a = pick(rng, ARRAYS);
            let i = pick(rng, indices);
            if rng.gen_bool(0.5) {
                out.push(format!("{pad}if ({cond_var} .lt. {a}({i})) {v} = {a}({i})"));
            } else {
                out.push(format!("{pad}if ({cond_var} .lt. {a}({i})) then"));
                out.push(format!("{pad}  {v} = {a}({i})"));
                out.push(format!("{pad}end if"));
            }
        }
        // statement the analysis ignores
        _ => out.push(format!("{pad}write(*,*) {}", pick(rng, SCALARS))),
    }
}

/// A random loop of at most 10 statements drawn from the grammar's
/// statement kinds.
pub fn generate_loop(rng: &mut StdRng) -> String {
    let mut out = vec!["do j = 1, NY".to_string()];
    let n = rng.gen_range(0..=6);
    for _ in 0..n {
        if rng.gen_bool(0.3) {
            let inner = if rng.gen_bool(0.5) { "i" } else { "ii" };
            out.push(format!("  do {inner} = 1, NX"));
            let idx = if inner == "i" { ["I", "J"] } else { ["II", "J"] };
            for _ in 0..rng.gen_range(1..=2) {
                gen_statement(rng, &idx, &mut out, 2);
            }
            out.push("  end do".to_string());
        } else {
            gen_statement(rng, &["J"], &mut out, 1);
        }
    }
    out.push("end do".to_string());
    out.push(String::new());
    out.join("\n")
}

// ---------------------------------------------------------------------------
// corpus walker
// ---------------------------------------------------------------------------

pub struct CorpusEntry {
    pub name: String,
    pub loop_text: String,
    pub decl_text: String,
    pub expected_report: String,
    pub expected_exit: i32,
}

pub fn corpus_entries() -> Vec<CorpusEntry> {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/corpus");
    let mut entries: Vec<CorpusEntry> = std::fs::read_dir(&root)
        .expect("corpus directory")
        .filter_map(|e| e.ok())
        .filter(|e| e.path().is_dir())
        .map(|e| {
            let dir = e.path();
            let read = |f: &str| std::fs::read_to_string(dir.join(f)).expect(f);
            CorpusEntry {
                name: e.file_name().to_string_lossy().into_owned(),
                loop_text: read("loop.f90"),
                decl_text: read("decls.f90"),
                expected_report: read("expected.txt"),
                expected_exit: read("expected_exit.txt").trim().parse().unwrap(),
            }
        })
        .collect();
    entries.sort_by(|a, b| a.name.cmp(&b.name));
    entries
}
