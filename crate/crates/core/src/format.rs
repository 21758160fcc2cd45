//! Text formats: instances, graphs and formulas.
//!
//! Instance files look like
//!
//! ```text
//! pid 1
//! 3 7
//! 1 3 2 4 6 5 7
//! 3 1 5 2 7 4 6
//! 2 4 5 3 6 7 1
//! k 1
//! ```
//!
//! Line 1 is the magic `pid 1`, line 2 holds the agent and item counts, then
//! one preference list per agent (best first) and an optional budget line.
//! `#` starts a comment anywhere; blank lines are ignored.

use std::fmt::Write as _;

use crate::error::{PidError, Result};
use crate::generators::{AntimonotoneFormula, Graph};
use crate::profile::{default_agent_labels, Item, Profile};

/// A parsed instance file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub profile: Profile,
    pub k: Option<usize>,
}

/// Non-blank lines with comments stripped, paired with 1-based line numbers.
fn content_lines<'a>(text: &'a str, comment: &'a [char]) -> impl Iterator<Item = (usize, &'a str)> {
    text.lines().enumerate().filter_map(move |(n, line)| {
        let line = match line.find(comment) {
            Some(pos) => &line[..pos],
            None => line,
        };
        let line = line.trim();
        (!line.is_empty()).then_some((n + 1, line))
    })
}

fn parse_error(line: usize, message: impl Into<String>) -> PidError {
    PidError::Parse {
        line,
        message: message.into(),
    }
}

fn numbers(line: usize, text: &str) -> Result<Vec<usize>> {
    text.split_whitespace()
        .map(|tok| {
            tok.parse::<usize>().map_err(|_| {
                parse_error(
                    line,
                    format!("expected a nonnegative integer, found `{tok}`"),
                )
            })
        })
        .collect()
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    let mut lines = content_lines(text, &['#']);
    let last_line = text.lines().count().max(1);
    match lines.next() {
        Some((_, "pid 1")) => {}
        Some((n, other)) => {
            return Err(parse_error(n, format!("expected `pid 1`, found `{other}`")))
        }
        None => return Err(parse_error(last_line, "empty instance file")),
    }
    let (header_line, header) = lines
        .next()
        .ok_or_else(|| parse_error(last_line, "missing `<agents> <items>` header"))?;
    let counts = numbers(header_line, header)?;
    let [n_agents, n_items] = counts[..] else {
        return Err(parse_error(
            header_line,
            "header must be `<agents> <items>`",
        ));
    };
    if n_agents == 0 {
        return Err(PidError::NoAgents);
    }

    let mut lists = Vec::with_capacity(n_agents);
    if n_items > 0 {
        for agent in 0..n_agents {
            let (n, text) = lines.next().ok_or_else(|| {
                parse_error(
                    last_line,
                    format!("expected {n_agents} preference lists, found {agent}"),
                )
            })?;
            let ids = numbers(n, text)?;
            if ids.len() != n_items {
                return Err(parse_error(
                    n,
                    format!(
                        "preference list has {} entries, header says {n_items}",
                        ids.len()
                    ),
                ));
            }
            if ids.contains(&0) {
                return Err(parse_error(n, "item ids are 1-based"));
            }
            lists.push(
                ids.into_iter()
                    .map(|id| Item(id as u32))
                    .collect::<Vec<_>>(),
            );
        }
    } else {
        lists.resize(n_agents, Vec::new());
    }

    let mut k = None;
    if let Some((n, text)) = lines.next() {
        let mut parts = text.split_whitespace();
        match (parts.next(), parts.next(), parts.next()) {
            (Some("k"), Some(value), None) => {
                k = Some(
                    value
                        .parse()
                        .map_err(|_| parse_error(n, "budget line must be `k <int>`"))?,
                )
            }
            _ => return Err(parse_error(n, format!("unexpected line `{text}`"))),
        }
    }
    if let Some((n, text)) = lines.next() {
        return Err(parse_error(n, format!("unexpected line `{text}`")));
    }

    let items = lists
        .first()
        .map(|l| l.iter().copied().collect())
        .unwrap_or_default();
    let profile = Profile::new(default_agent_labels(n_agents), items, lists)?;
    Ok(Instance { profile, k })
}

/// Canonical text for a profile, LF line endings, no comments.
pub fn render_instance(profile: &Profile, k: Option<usize>) -> String {
    let mut out = format!("pid 1\n{} {}\n", profile.n_agents(), profile.n_items());
    for list in profile.lists() {
        let line = list
            .iter()
            .map(|i| i.0.to_string())
            .collect::<Vec<_>>()
            .join(" ");
        out.push_str(&line);
        out.push('\n');
    }
    if let Some(k) = k {
        let _ = writeln!(out, "k {k}");
    }
    out
}

/// Graphs: `p <n> <m>` followed by `m` lines `e <u> <v>` over vertices
/// `1..=n`. Lines starting with `c` or `#` are comments.
pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut lines = text.lines().enumerate().filter_map(|(n, line)| {
        let line = line.split('#').next().unwrap_or("").trim();
        (!line.is_empty() && !line.starts_with('c')).then_some((n + 1, line))
    });
    let (header_line, header) = lines
        .next()
        .ok_or_else(|| parse_error(1, "missing `p <n> <m>` header"))?;
    let counts = header
        .strip_prefix("p ")
        .map(|rest| numbers(header_line, rest))
        .transpose()?
        .filter(|c| c.len() == 2)
        .ok_or_else(|| parse_error(header_line, "header must be `p <n> <m>`"))?;
    let (n, m) = (counts[0], counts[1]);
    let mut edges = Vec::with_capacity(m);
    for (line, text) in lines {
        let ends = text
            .strip_prefix("e ")
            .map(|rest| numbers(line, rest))
            .transpose()?
            .filter(|e| e.len() == 2)
            .ok_or_else(|| parse_error(line, "edge lines must be `e <u> <v>`"))?;
        if ends.contains(&0) || ends.iter().any(|v| *v > n) {
            return Err(parse_error(line, format!("vertices are numbered 1..={n}")));
        }
        edges.push((ends[0] - 1, ends[1] - 1));
    }
    if edges.len() != m {
        return Err(PidError::InvalidGraph(format!(
            "header announces {m} edges, found {}",
            edges.len()
        )));
    }
    Graph::new(n, &edges)
}

pub fn render_graph(g: &Graph) -> String {
    let mut out = format!("p {} {}\n", g.n_vertices(), g.n_edges());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "e {} {}", u + 1, v + 1);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Expr {
    Neg(usize),
    And(Vec<Expr>),
    Or(Vec<Expr>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Token {
    Not,
    And,
    Or,
    Open,
    Close,
    Var(usize),
}

fn formula_error(message: impl Into<String>) -> PidError {
    PidError::InvalidFormula(message.into())
}

fn tokenize(text: &str) -> Result<Vec<Token>> {
    let mut tokens = Vec::new();
    let mut chars = text.chars().peekable();
    while let Some(c) = chars.next() {
        match c {
            c if c.is_whitespace() => {}
            '!' => tokens.push(Token::Not),
            '&' => tokens.push(Token::And),
            '|' => tokens.push(Token::Or),
            '(' => tokens.push(Token::Open),
            ')' => tokens.push(Token::Close),
            'x' => {
                let mut digits = String::new();
                while let Some(d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                    digits.push(*d);
                    chars.next();
                }
                let v = digits
                    .parse::<usize>()
                    .ok()
                    .filter(|v| *v > 0)
                    .ok_or_else(|| formula_error("variables are written x1, x2, ..."))?;
                tokens.push(Token::Var(v));
            }
            other => return Err(formula_error(format!("unexpected character `{other}`"))),
        }
    }
    Ok(tokens)
}

/// Recursive descent: `|` binds looser than `&`, `!` applies to a variable.
struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<Token> {
        self.tokens.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.peek();
        self.pos += 1;
        t
    }

    fn disjunction(&mut self) -> Result<Expr> {
        let mut parts = vec![self.conjunction()?];
        while self.peek() == Some(Token::Or) {
            self.bump();
            parts.push(self.conjunction()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            Expr::Or(parts)
        })
    }

    fn conjunction(&mut self) -> Result<Expr> {
        let mut parts = vec![self.atom()?];
        while self.peek() == Some(Token::And) {
            self.bump();
            parts.push(self.atom()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            Expr::And(parts)
        })
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.bump() {
            Some(Token::Not) => match self.bump() {
                Some(Token::Var(v)) => Ok(Expr::Neg(v)),
                _ => Err(formula_error("`!` must be followed by a variable")),
            },
            Some(Token::Var(v)) => Err(formula_error(format!(
                "positive literal x{v}: only negated variables are allowed"
            ))),
            Some(Token::Open) => {
                let inner = self.disjunction()?;
                match self.bump() {
                    // A parenthesised conjunction of literals stays one clause
                    // rather than splitting into unit clauses at the top level.
                    Some(Token::Close)
                        if matches!(inner, Expr::And(_)) && pure_conjunction(&inner) =>
                    {
                        Ok(Expr::Or(vec![inner]))
                    }
                    Some(Token::Close) => Ok(inner),
                    _ => Err(formula_error("unbalanced parentheses")),
                }
            }
            _ => Err(formula_error("expected `!x<i>` or `(`")),
        }
    }
}

fn pure_conjunction(e: &Expr) -> bool {
    match e {
        Expr::Neg(_) => true,
        Expr::And(parts) => parts.iter().all(pure_conjunction),
        Expr::Or(parts) => parts.len() == 1 && pure_conjunction(&parts[0]),
    }
}

fn flatten_and(e: Expr, out: &mut Vec<Expr>) {
    match e {
        Expr::And(parts) => parts.into_iter().for_each(|p| flatten_and(p, out)),
        other => out.push(other),
    }
}

fn flatten_or(e: Expr, out: &mut Vec<Expr>) {
    match e {
        Expr::Or(parts) => parts.into_iter().for_each(|p| flatten_or(p, out)),
        other => out.push(other),
    }
}

fn literals(e: Expr, out: &mut Vec<usize>) -> Result<()> {
    match e {
        Expr::Neg(v) => out.push(v),
        Expr::And(parts) => {
            for p in parts {
                literals(p, out)?;
            }
        }
        Expr::Or(mut parts) if parts.len() == 1 => literals(parts.pop().unwrap(), out)?,
        Expr::Or(_) => return Err(formula_error("formula nests deeper than and-or-and")),
    }
    Ok(())
}

/// Formulas: an optional `vars <n>` line followed by an expression over
/// `!x<i>`, `&`, `|` and parentheses, `&` binding tighter than `|`. The
/// expression must normalise to a conjunction of disjunctions of conjunctions
/// of negated variables. `#` starts a comment. At the top level `&` separates
/// clauses, except that a parenthesised conjunction of literals such as
/// `(!x1 & !x2)` is a single clause.
pub fn parse_formula(text: &str) -> Result<AntimonotoneFormula> {
    let mut declared = None;
    let mut body = String::new();
    for (line, content) in content_lines(text, &['#']) {
        if let Some(rest) = content.strip_prefix("vars") {
            if declared.is_some() || !body.is_empty() {
                return Err(parse_error(line, "`vars` must come first and only once"));
            }
            declared = Some(
                rest.trim()
                    .parse::<usize>()
                    .map_err(|_| parse_error(line, "expected `vars <n>`"))?,
            );
        } else {
            body.push_str(content);
            body.push(' ');
        }
    }
    let mut parser = Parser {
        tokens: tokenize(&body)?,
        pos: 0,
    };
    if parser.tokens.is_empty() {
        return Err(formula_error("empty formula"));
    }
    let expr = parser.disjunction()?;
    if parser.pos != parser.tokens.len() {
        return Err(formula_error("trailing tokens after the formula"));
    }

    let mut top = Vec::new();
    flatten_and(expr, &mut top);
    let mut clauses = Vec::with_capacity(top.len());
    for clause in top {
        let mut terms = Vec::new();
        flatten_or(clause, &mut terms);
        let mut conjuncts = Vec::with_capacity(terms.len());
        for term in terms {
            let mut vars = Vec::new();
            literals(term, &mut vars)?;
            vars.sort_unstable();
            vars.dedup();
            conjuncts.push(vars);
        }
        clauses.push(conjuncts);
    }
    let max_var = clauses
        .iter()
        .flatten()
        .flatten()
        .copied()
        .max()
        .unwrap_or(0);
    AntimonotoneFormula::new(declared.unwrap_or(max_var), clauses)
}

pub fn render_formula(phi: &AntimonotoneFormula) -> String {
    let clauses: Vec<String> = phi
        .clauses()
        .iter()
        .map(|clause| {
            let terms: Vec<String> = clause
                .iter()
                .map(|conj| {
                    let lits: Vec<String> = conj.iter().map(|v| format!("!x{v}")).collect();
                    format!("({})", lits.join(" & "))
                })
                .collect();
            format!("({})", terms.join(" | "))
        })
        .collect();
    format!("vars {}\n{}\n", phi.n_vars(), clauses.join(" & "))
}
