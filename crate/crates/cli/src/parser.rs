//! Recursive-descent parser for scenario files.
//!
//! Grammar (`#` comments to end of line, whitespace insignificant):
//!
//! ```text
//! file       = "scenario" STRING , { statement } ;
//! statement  = var | order | spacetime | dist ;
//! var        = "var" IDENT "{" "alphabet:" INT "}" ;
//! order      = "order" "{" edge { ";" edge } [";"] "}" ;
//! edge       = IDENT "->" IDENT ;
//! spacetime  = "spacetime" "{" point { ";" point } [";"] "}" ;
//! point      = IDENT ":" "(" NUM { "," NUM } ")" ;
//! dist       = "dist" "{" entry { entry } "}" ;
//! entry      = "(" assign { "," assign } ")" ":" prob ;
//! assign     = IDENT "=" INT ;
//! prob       = INT "/" INT | FLOAT ;
//! ```
//!
//! A scenario carries exactly one of `order` / `spacetime`. Rational
//! probabilities make the distribution exact; one float anywhere flips
//! the whole table to float mode. Omitted tuples are zero and every
//! entry must assign every declared variable. After a syntax error the
//! parser skips to the end of the enclosing block and continues; at most
//! five diagnostics are reported per file.

use freechoice::prob::{Joint, Probability, VariableSpec};
use freechoice::order::CausalOrder;
use freechoice::scenario::Scenario;
use freechoice::spacetime::derive_order;
use freechoice::Event;

use crate::diag::Diagnostic;
use crate::lexer::{lex, Token, TokenKind};

/// Cap on reported diagnostics.
pub const MAX_DIAGNOSTICS: usize = 5;

/// A parsed scenario file. The distribution is optional so that
/// order-only files still work for the order commands; probability
/// commands go through [`ScenarioFile::into_scenario`].
#[derive(Debug, Clone)]
pub struct ScenarioFile {
    pub name: String,
    pub vars: Vec<VariableSpec>,
    pub order: CausalOrder,
    pub embedding: Option<Vec<Event>>,
    pub dist: Option<Joint>,
}

impl ScenarioFile {
    pub fn into_scenario(self) -> Result<Scenario, String> {
        let dist = self
            .dist
            .ok_or("scenario file has no dist block; probability commands need one")?;
        Scenario::new(self.name, dist, self.order, self.embedding).map_err(|e| e.to_string())
    }
}

pub fn parse_scenario(text: &str) -> Result<ScenarioFile, Vec<Diagnostic>> {
    let tokens = lex(text).map_err(|d| vec![d])?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        diags: Vec::new(),
    };
    let (name, statements) = parser.parse_file();
    if !parser.diags.is_empty() {
        parser.diags.truncate(MAX_DIAGNOSTICS);
        return Err(parser.diags);
    }
    analyze(name, statements).map_err(|mut diags| {
        diags.truncate(MAX_DIAGNOSTICS);
        diags
    })
}

type Span = (usize, usize);

#[derive(Debug)]
enum RawStatement {
    Var {
        name: String,
        card: i64,
        span: Span,
    },
    Order {
        edges: Vec<(String, String, Span)>,
        span: Span,
    },
    Spacetime {
        points: Vec<RawPoint>,
        span: Span,
    },
    Dist {
        entries: Vec<RawEntry>,
        span: Span,
    },
}

#[derive(Debug)]
struct RawPoint {
    label: String,
    nums: Vec<f64>,
    span: Span,
}

#[derive(Debug)]
struct RawEntry {
    assigns: Vec<(String, i64, Span)>,
    prob: RawProb,
    prob_span: Span,
    span: Span,
}

#[derive(Debug, Clone, Copy)]
enum RawProb {
    Ratio(i64, i64),
    Float(f64),
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    diags: Vec<Diagnostic>,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos.min(self.tokens.len() - 1)]
    }

    fn bump(&mut self) -> Token {
        let t = self.peek().clone();
        if self.pos < self.tokens.len() - 1 {
            self.pos += 1;
        }
        t
    }

    fn at_eof(&self) -> bool {
        matches!(self.peek().kind, TokenKind::Eof)
    }

    fn error_at(&mut self, token: &Token, message: impl Into<String>, hint: impl Into<String>) {
        if self.diags.len() < MAX_DIAGNOSTICS {
            self.diags
                .push(Diagnostic::new(token.line, token.col, message).with_hint(hint));
        }
    }

    fn expect(&mut self, kind: &TokenKind, what: &str) -> Option<Token> {
        if &self.peek().kind == kind {
            Some(self.bump())
        } else {
            let found = self.peek().clone();
            self.error_at(
                &found,
                format!("expected {what}, found {}", found.kind.describe()),
                format!("insert {what} here"),
            );
            None
        }
    }

    fn expect_ident(&mut self, what: &str) -> Option<(String, Span)> {
        let t = self.peek().clone();
        if let TokenKind::Ident(name) = &t.kind {
            let name = name.clone();
            self.bump();
            Some((name, (t.line, t.col)))
        } else {
            self.error_at(
                &t,
                format!("expected {what}, found {}", t.kind.describe()),
                "variable and scenario identifiers are plain names",
            );
            None
        }
    }

    fn expect_int(&mut self, what: &str) -> Option<(i64, Span)> {
        let t = self.peek().clone();
        if let TokenKind::Int(v) = t.kind {
            self.bump();
            Some((v, (t.line, t.col)))
        } else {
            self.error_at(
                &t,
                format!("expected {what}, found {}", t.kind.describe()),
                format!("{what} must be an integer literal"),
            );
            None
        }
    }

    /// Skip ahead to the end of the enclosing block or the next statement
    /// keyword, so one mistake does not cascade.
    fn recover(&mut self) {
        let mut depth = 0usize;
        loop {
            match &self.peek().kind {
                TokenKind::Eof => return,
                TokenKind::LBrace => {
                    depth += 1;
                    self.bump();
                }
                TokenKind::RBrace => {
                    self.bump();
                    if depth <= 1 {
                        return;
                    }
                    depth -= 1;
                }
                TokenKind::Ident(k)
                    if depth == 0
                        && matches!(k.as_str(), "var" | "order" | "spacetime" | "dist") =>
                {
                    return;
                }
                _ => {
                    self.bump();
                }
            }
        }
    }

    fn parse_file(&mut self) -> (String, Vec<RawStatement>) {
        let name = self.parse_header().unwrap_or_default();
        let mut statements = Vec::new();
        while !self.at_eof() {
            if self.diags.len() >= MAX_DIAGNOSTICS {
                break;
            }
            let t = self.peek().clone();
            let keyword = match &t.kind {
                TokenKind::Ident(k) => k.clone(),
                _ => {
                    self.error_at(
                        &t,
                        format!("expected a statement, found {}", t.kind.describe()),
                        "statements start with var, order, spacetime, or dist",
                    );
                    self.bump();
                    self.recover();
                    continue;
                }
            };
            let parsed = match keyword.as_str() {
                "var" => self.parse_var(),
                "order" => self.parse_order(),
                "spacetime" => self.parse_spacetime(),
                "dist" => self.parse_dist(),
                other => {
                    self.error_at(
                        &t,
                        format!("unknown statement `{other}`"),
                        "statements start with var, order, spacetime, or dist",
                    );
                    self.bump();
                    self.recover();
                    continue;
                }
            };
            match parsed {
                Some(stmt) => statements.push(stmt),
                None => self.recover(),
            }
        }
        (name, statements)
    }

    fn parse_header(&mut self) -> Option<String> {
        let t = self.peek().clone();
        match &t.kind {
            TokenKind::Ident(k) if k == "scenario" => {
                self.bump();
            }
            _ => {
                self.error_at(
                    &t,
                    "file must start with `scenario \"name\"`",
                    "add a scenario header first",
                );
                return None;
            }
        }
        let t = self.peek().clone();
        if let TokenKind::Str(name) = &t.kind {
            let name = name.clone();
            self.bump();
            Some(name)
        } else {
            self.error_at(
                &t,
                format!("expected a quoted scenario name, found {}", t.kind.describe()),
                "write scenario \"name\"",
            );
            None
        }
    }

    fn parse_var(&mut self) -> Option<RawStatement> {
        let kw = self.bump(); // `var`
        let (name, _) = self.expect_ident("a variable name")?;
        self.expect(&TokenKind::LBrace, "`{`")?;
        let field = self.expect_ident("`alphabet`")?;
        if field.0 != "alphabet" {
            let t = self.peek().clone();
            self.error_at(
                &t,
                format!("unknown var field `{}`", field.0),
                "the only field is `alphabet: <size>`",
            );
            return None;
        }
        self.expect(&TokenKind::Colon, "`:`")?;
        let (card, _) = self.expect_int("the alphabet size")?;
        self.expect(&TokenKind::RBrace, "`}`")?;
        Some(RawStatement::Var {
            name,
            card,
            span: (kw.line, kw.col),
        })
    }

    fn parse_order(&mut self) -> Option<RawStatement> {
        let kw = self.bump(); // `order`
        self.expect(&TokenKind::LBrace, "`{`")?;
        let mut edges = Vec::new();
        loop {
            let (from, span) = self.expect_ident("an edge source")?;
            self.expect(&TokenKind::Arrow, "`->`")?;
            let (to, _) = self.expect_ident("an edge target")?;
            edges.push((from, to, span));
            match &self.peek().kind {
                TokenKind::Semi => {
                    self.bump();
                    if matches!(self.peek().kind, TokenKind::RBrace) {
                        self.bump();
                        break;
                    }
                }
                TokenKind::RBrace => {
                    self.bump();
                    break;
                }
                _ => {
                    let t = self.peek().clone();
                    self.error_at(
                        &t,
                        format!("expected `;` or `}}`, found {}", t.kind.describe()),
                        "separate edges with `;`",
                    );
                    return None;
                }
            }
        }
        Some(RawStatement::Order {
            edges,
            span: (kw.line, kw.col),
        })
    }

    fn parse_spacetime(&mut self) -> Option<RawStatement> {
        let kw = self.bump(); // `spacetime`
        self.expect(&TokenKind::LBrace, "`{`")?;
        let mut points = Vec::new();
        loop {
            let (label, span) = self.expect_ident("an event label")?;
            self.expect(&TokenKind::Colon, "`:`")?;
            self.expect(&TokenKind::LParen, "`(`")?;
            let mut nums = vec![self.expect_num("a coordinate")?];
            while matches!(self.peek().kind, TokenKind::Comma) {
                self.bump();
                nums.push(self.expect_num("a coordinate")?);
            }
            self.expect(&TokenKind::RParen, "`)`")?;
            points.push(RawPoint { label, nums, span });
            match &self.peek().kind {
                TokenKind::Semi => {
                    self.bump();
                    if matches!(self.peek().kind, TokenKind::RBrace) {
                        self.bump();
                        break;
                    }
                }
                TokenKind::RBrace => {
                    self.bump();
                    break;
                }
                _ => {
                    let t = self.peek().clone();
                    self.error_at(
                        &t,
                        format!("expected `;` or `}}`, found {}", t.kind.describe()),
                        "separate points with `;`",
                    );
                    return None;
                }
            }
        }
        Some(RawStatement::Spacetime {
            points,
            span: (kw.line, kw.col),
        })
    }

    fn expect_num(&mut self, what: &str) -> Option<f64> {
        let t = self.peek().clone();
        match t.kind {
            TokenKind::Int(v) => {
                self.bump();
                Some(v as f64)
            }
            TokenKind::Float(v) => {
                self.bump();
                Some(v)
            }
            _ => {
                self.error_at(
                    &t,
                    format!("expected {what}, found {}", t.kind.describe()),
                    "coordinates are numbers like -2 or 0.5",
                );
                None
            }
        }
    }

    fn parse_dist(&mut self) -> Option<RawStatement> {
        let kw = self.bump(); // `dist`
        self.expect(&TokenKind::LBrace, "`{`")?;
        let mut entries = Vec::new();
        loop {
            if matches!(self.peek().kind, TokenKind::RBrace) {
                if entries.is_empty() {
                    let t = self.peek().clone();
                    self.error_at(
                        &t,
                        "dist block needs at least one entry",
                        "write lines like (A=0, B=1): 1/4",
                    );
                    return None;
                }
                self.bump();
                break;
            }
            let entry_tok = self.peek().clone();
            self.expect(&TokenKind::LParen, "`(`")?;
            let mut assigns = Vec::new();
            loop {
                let (name, span) = self.expect_ident("a variable name")?;
                self.expect(&TokenKind::Eq, "`=`")?;
                let (value, _) = self.expect_int("an outcome value")?;
                assigns.push((name, value, span));
                match &self.peek().kind {
                    TokenKind::Comma => {
                        self.bump();
                    }
                    TokenKind::RParen => {
                        self.bump();
                        break;
                    }
                    _ => {
                        let t = self.peek().clone();
                        self.error_at(
                            &t,
                            format!("expected `,` or `)`, found {}", t.kind.describe()),
                            "assignments look like (A=0, B=1)",
                        );
                        return None;
                    }
                }
            }
            self.expect(&TokenKind::Colon, "`:`")?;
            let prob_tok = self.peek().clone();
            let prob = match prob_tok.kind {
                TokenKind::Int(n) => {
                    self.bump();
                    self.expect(&TokenKind::Slash, "`/` after the numerator")?;
                    let (d, _) = self.expect_int("a denominator")?;
                    RawProb::Ratio(n, d)
                }
                TokenKind::Float(v) => {
                    self.bump();
                    RawProb::Float(v)
                }
                _ => {
                    self.error_at(
                        &prob_tok,
                        format!(
                            "expected a probability, found {}",
                            prob_tok.kind.describe()
                        ),
                        "write a rational like 1/4 or a float like 0.25",
                    );
                    return None;
                }
            };
            entries.push(RawEntry {
                assigns,
                prob,
                prob_span: (prob_tok.line, prob_tok.col),
                span: (entry_tok.line, entry_tok.col),
            });
        }
        Some(RawStatement::Dist {
            entries,
            span: (kw.line, kw.col),
        })
    }
}

type RawEdges = Vec<(String, String, Span)>;

fn analyze(name: String, statements: Vec<RawStatement>) -> Result<ScenarioFile, Vec<Diagnostic>> {
    let mut diags = Vec::new();
    let mut vars: Vec<VariableSpec> = Vec::new();
    let mut order_block: Option<(RawEdges, Span)> = None;
    let mut spacetime_block: Option<(Vec<RawPoint>, Span)> = None;
    let mut dist_block: Option<(Vec<RawEntry>, Span)> = None;

    for stmt in statements {
        match stmt {
            RawStatement::Var { name, card, span } => {
                if vars.iter().any(|v| v.name() == name) {
                    diags.push(
                        Diagnostic::new(span.0, span.1, format!("duplicate variable `{name}`"))
                            .with_hint("each variable may be declared once"),
                    );
                    continue;
                }
                if card < 1 {
                    diags.push(
                        Diagnostic::new(
                            span.0,
                            span.1,
                            format!("variable `{name}` has alphabet size {card}"),
                        )
                        .with_hint("alphabet size must be at least 1"),
                    );
                    continue;
                }
                match VariableSpec::new(&name, card as usize) {
                    Ok(v) => vars.push(v),
                    Err(e) => diags.push(Diagnostic::new(span.0, span.1, e.to_string())),
                }
            }
            RawStatement::Order { edges, span } => {
                if order_block.is_some() {
                    diags.push(
                        Diagnostic::new(span.0, span.1, "duplicate order block")
                            .with_hint("a scenario has exactly one order"),
                    );
                } else {
                    order_block = Some((edges, span));
                }
            }
            RawStatement::Spacetime { points, span } => {
                if spacetime_block.is_some() {
                    diags.push(
                        Diagnostic::new(span.0, span.1, "duplicate spacetime block")
                            .with_hint("a scenario has exactly one spacetime block"),
                    );
                } else {
                    spacetime_block = Some((points, span));
                }
            }
            RawStatement::Dist { entries, span } => {
                if dist_block.is_some() {
                    diags.push(
                        Diagnostic::new(span.0, span.1, "duplicate dist block")
                            .with_hint("a scenario has exactly one dist block"),
                    );
                } else {
                    dist_block = Some((entries, span));
                }
            }
        }
    }

    if vars.is_empty() {
        diags.push(
            Diagnostic::new(1, 1, "scenario declares no variables")
                .with_hint("add lines like var A { alphabet: 2 }"),
        );
    }
    let known = |n: &str| vars.iter().any(|v| v.name() == n);

    let (order, embedding) = match (&order_block, &spacetime_block) {
        (Some(_), Some((_, span))) => {
            diags.push(
                Diagnostic::new(span.0, span.1, "scenario has both order and spacetime blocks")
                    .with_hint("declare the causal order either explicitly or by coordinates, not both"),
            );
            (None, None)
        }
        (None, None) => {
            diags.push(
                Diagnostic::new(1, 1, "scenario has neither an order nor a spacetime block")
                    .with_hint("declare exactly one of them"),
            );
            (None, None)
        }
        (Some((edges, span)), None) => {
            for (from, to, espan) in edges {
                for endpoint in [from, to] {
                    if !known(endpoint) {
                        diags.push(
                            Diagnostic::new(
                                espan.0,
                                espan.1,
                                format!("edge uses undeclared variable `{endpoint}`"),
                            )
                            .with_hint("declare it with a var statement"),
                        );
                    }
                }
            }
            if diags.is_empty() {
                let names: Vec<&str> = vars.iter().map(|v| v.name()).collect();
                let pairs: Vec<(&str, &str)> = edges
                    .iter()
                    .map(|(a, b, _)| (a.as_str(), b.as_str()))
                    .collect();
                match CausalOrder::from_edges(&names, &pairs) {
                    Ok(o) => (Some(o), None),
                    Err(e) => {
                        diags.push(Diagnostic::new(span.0, span.1, e.to_string()));
                        (None, None)
                    }
                }
            } else {
                (None, None)
            }
        }
        (None, Some((points, span))) => {
            let mut events = Vec::new();
            for p in points {
                if !known(&p.label) {
                    diags.push(
                        Diagnostic::new(
                            p.span.0,
                            p.span.1,
                            format!("point uses undeclared variable `{}`", p.label),
                        )
                        .with_hint("declare it with a var statement"),
                    );
                    continue;
                }
                if p.nums.len() < 2 || p.nums.len() > 4 {
                    diags.push(
                        Diagnostic::new(
                            p.span.0,
                            p.span.1,
                            format!(
                                "point has {} coordinates, expected 2 to 4",
                                p.nums.len()
                            ),
                        )
                        .with_hint("write (t, x), (t, x, y) or (t, x, y, z)"),
                    );
                    continue;
                }
                match Event::new(&p.label, p.nums[0], &p.nums[1..]) {
                    Ok(e) => events.push(e),
                    Err(e) => diags.push(Diagnostic::new(p.span.0, p.span.1, e.to_string())),
                }
            }
            for v in &vars {
                if !points.iter().any(|p| p.label == v.name()) {
                    diags.push(
                        Diagnostic::new(
                            span.0,
                            span.1,
                            format!("variable `{}` has no spacetime point", v.name()),
                        )
                        .with_hint("every declared variable needs one point"),
                    );
                }
            }
            if diags.is_empty() {
                match derive_order(&events) {
                    Ok(o) => (Some(o), Some(events)),
                    Err(e) => {
                        diags.push(Diagnostic::new(span.0, span.1, e.to_string()));
                        (None, None)
                    }
                }
            } else {
                (None, None)
            }
        }
    };

    let dist = if let Some((entries, span)) = dist_block {
        let any_float = entries
            .iter()
            .any(|e| matches!(e.prob, RawProb::Float(_)));
        let mut rows: Vec<(Vec<u32>, Probability)> = Vec::new();
        for entry in &entries {
            let mut tuple: Vec<Option<u32>> = vec![None; vars.len()];
            for (name, value, aspan) in &entry.assigns {
                let Some(axis) = vars.iter().position(|v| v.name() == name) else {
                    diags.push(
                        Diagnostic::new(
                            aspan.0,
                            aspan.1,
                            format!("entry assigns undeclared variable `{name}`"),
                        )
                        .with_hint("declare it with a var statement"),
                    );
                    continue;
                };
                if tuple[axis].is_some() {
                    diags.push(
                        Diagnostic::new(
                            aspan.0,
                            aspan.1,
                            format!("entry assigns `{name}` twice"),
                        )
                        .with_hint("each variable appears once per entry"),
                    );
                    continue;
                }
                if *value < 0 || (*value as usize) >= vars[axis].cardinality() {
                    diags.push(
                        Diagnostic::new(
                            aspan.0,
                            aspan.1,
                            format!(
                                "outcome {value} is outside the alphabet of `{name}` (cardinality {})",
                                vars[axis].cardinality()
                            ),
                        )
                        .with_hint("outcomes run from 0 to cardinality - 1"),
                    );
                    continue;
                }
                tuple[axis] = Some(*value as u32);
            }
            let missing: Vec<&str> = vars
                .iter()
                .zip(&tuple)
                .filter(|(_, t)| t.is_none())
                .map(|(v, _)| v.name())
                .collect();
            if !missing.is_empty() {
                diags.push(
                    Diagnostic::new(
                        entry.span.0,
                        entry.span.1,
                        format!("entry is missing variables: {}", missing.join(", ")),
                    )
                    .with_hint("every entry must assign every variable"),
                );
                continue;
            }
            let prob = match entry.prob {
                RawProb::Ratio(n, d) => {
                    if d <= 0 {
                        diags.push(
                            Diagnostic::new(
                                entry.prob_span.0,
                                entry.prob_span.1,
                                format!("bad denominator {d}"),
                            )
                            .with_hint("denominators are positive integers"),
                        );
                        continue;
                    }
                    if n < 0 {
                        diags.push(
                            Diagnostic::new(
                                entry.prob_span.0,
                                entry.prob_span.1,
                                format!("negative probability {n}/{d}"),
                            )
                            .with_hint("probabilities are nonnegative"),
                        );
                        continue;
                    }
                    if any_float {
                        Probability::approx(n as f64 / d as f64)
                    } else {
                        Probability::exact(n, d)
                    }
                }
                RawProb::Float(v) => Probability::approx(v),
            };
            rows.push((tuple.into_iter().map(Option::unwrap).collect(), prob));
        }
        if diags.is_empty() {
            match Joint::from_entries(vars.clone(), rows) {
                Ok(d) => Some(d),
                Err(e) => {
                    diags.push(
                        Diagnostic::new(span.0, span.1, e.to_string())
                            .with_hint("dist entries must be valid and sum to 1"),
                    );
                    None
                }
            }
        } else {
            None
        }
    } else {
        None
    };

    if !diags.is_empty() {
        return Err(diags);
    }
    Ok(ScenarioFile {
        name,
        vars,
        order: order.expect("order checked above"),
        embedding,
        dist,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
scenario "pair"
var A { alphabet: 2 }
var B { alphabet: 2 }
order { A -> B }
dist {
  (A=0, B=0): 1/2
  (A=1, B=1): 1/2
}
"#;

    #[test]
    fn parses_a_minimal_scenario() {
        let f = parse_scenario(MINIMAL).unwrap();
        assert_eq!(f.name, "pair");
        assert_eq!(f.vars.len(), 2);
        assert!(f.dist.is_some());
        assert!(f.order.precedes("A", "B").unwrap());
        let s = f.into_scenario().unwrap();
        assert_eq!(s.name(), "pair");
        assert!(s.dist().is_exact());
    }

    #[test]
    fn float_anywhere_flips_the_whole_table_to_approx() {
        let text = r#"
scenario "mixed"
var A { alphabet: 2 }
order { A -> A }
dist {
  (A=0): 1/4
  (A=1): 0.75
}
"#;
        let f = parse_scenario(text).unwrap();
        let d = f.dist.unwrap();
        assert!(!d.is_exact());
        assert_eq!(d.prob(&[0]).unwrap(), Probability::approx(0.25));
    }

    #[test]
    fn undeclared_variable_in_order_is_a_semantic_error() {
        let text = r#"
scenario "bad"
var A { alphabet: 2 }
order { A -> X; Z -> X }
dist { (A=0): 1/1 }
"#;
        let errs = parse_scenario(text).unwrap_err();
        assert!(errs.iter().any(|d| d.message.contains("undeclared variable `X`")));
        assert!(errs.iter().any(|d| d.message.contains("undeclared variable `Z`")));
        // the offending token's position is carried
        assert!(errs[0].line > 0 && errs[0].col > 0);
    }

    #[test]
    fn unnormalized_dist_is_a_semantic_error() {
        let text = r#"
scenario "bad"
var A { alphabet: 2 }
order { A -> A }
dist { (A=0): 1/3 }
"#;
        let errs = parse_scenario(text).unwrap_err();
        assert_eq!(errs.len(), 1);
        assert!(errs[0].message.contains("sum to 1/3"));
    }

    #[test]
    fn syntax_error_recovers_to_next_block_and_caps_at_five() {
        let text = r#"
scenario "bad"
var A { alphabet: }
var B { alphabet: 2 }
order { A -> }
dist { (A=0): }
"#;
        let errs = parse_scenario(text).unwrap_err();
        assert!(errs.len() >= 2, "recovery should surface several errors");
        assert!(errs.len() <= 5);

        let many = r#"
scenario "bad"
var A { alphabet: }
var B { alphabet: }
var C { alphabet: }
var D { alphabet: }
var E { alphabet: }
var F { alphabet: }
var G { alphabet: }
"#;
        let errs = parse_scenario(many).unwrap_err();
        assert_eq!(errs.len(), 5);
    }

    #[test]
    fn missing_assignment_and_bad_outcome_are_reported() {
        let text = r#"
scenario "bad"
var A { alphabet: 2 }
var B { alphabet: 2 }
order { A -> B }
dist {
  (A=0): 1/2
  (A=1, B=5): 1/2
}
"#;
        let errs = parse_scenario(text).unwrap_err();
        assert!(errs.iter().any(|d| d.message.contains("missing variables: B")));
        assert!(errs.iter().any(|d| d.message.contains("outside the alphabet")));
    }

    #[test]
    fn order_and_spacetime_conflict() {
        let text = r#"
scenario "bad"
var A { alphabet: 2 }
order { A -> A }
spacetime { A: (0, 0) }
dist { (A=0): 1/1 }
"#;
        let errs = parse_scenario(text).unwrap_err();
        assert!(errs
            .iter()
            .any(|d| d.message.contains("both order and spacetime")));
    }

    #[test]
    fn spacetime_block_derives_the_order() {
        let text = r#"
scenario "cone"
var A { alphabet: 2 }
var X { alphabet: 2 }
spacetime {
  A: (0, 0);
  X: (1, 0.5);
}
dist {
  (A=0, X=0): 1/2
  (A=1, X=1): 1/2
}
"#;
        let f = parse_scenario(text).unwrap();
        assert!(f.order.precedes("A", "X").unwrap());
        assert!(!f.order.precedes("X", "A").unwrap());
        assert!(f.embedding.is_some());
        let s = f.into_scenario().unwrap();
        assert_eq!(s.embedding().unwrap().len(), 2);
    }

    #[test]
    fn dist_is_optional_for_order_only_files() {
        let text = r#"
scenario "geometry"
var A { alphabet: 2 }
var B { alphabet: 2 }
spacetime { A: (0, -1); B: (0, 1) }
"#;
        let f = parse_scenario(text).unwrap();
        assert!(f.dist.is_none());
        assert!(f.order.mutually_unordered("A", "B").unwrap());
        let err = f.into_scenario().unwrap_err();
        assert!(err.contains("no dist block"));
    }

    #[test]
    fn duplicate_point_label_is_an_error() {
        let text = r#"
scenario "dup"
var A { alphabet: 2 }
spacetime { A: (0, 0); A: (1, 0) }
"#;
        let errs = parse_scenario(text).unwrap_err();
        assert!(errs.iter().any(|d| d.message.contains("duplicate")));
    }

    #[test]
    fn bare_integer_probability_is_a_syntax_error() {
        let text = r#"
scenario "bad"
var A { alphabet: 2 }
order { A -> A }
dist { (A=0): 1 }
"#;
        let errs = parse_scenario(text).unwrap_err();
        assert!(errs[0].message.contains("expected `/`"));
    }
}
