//! Text format for Diophantine equations.
//!
//! One equation per file, `=` with a polynomial on each side, variables
//! `x1, x2, ...`, explicit `*` and `^`, integer or ratio coefficients:
//!
//! ```text
//! # a comment
//! name: shifted-parabola
//! 4*x1^2 + 9*x2^2 + 12*x1*x2 + 8*x1 + 2*x2 + 24 = 0
//! ```
//!
//! Implicit multiplication is rejected on purpose; it keeps the grammar
//! LL(1) and the error positions exact.

use crate::error::Error;
use crate::poly::{Monomial, Polynomial};
use crate::rat::Rat;
use crate::Result;
use num::{BigInt, One, Signed, Zero};
use std::path::Path;

/// A parsed equation, kept as written: the left side minus the right side,
/// with no normalization applied.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Equation {
    pub lhs: Polynomial,
    pub name: Option<String>,
    pub source_text: String,
}

impl Equation {
    pub fn from_poly(lhs: Polynomial) -> Self {
        let source_text = format_polynomial(&lhs) + " = 0";
        Equation {
            lhs,
            name: None,
            source_text,
        }
    }

    pub fn k(&self) -> usize {
        self.lhs.k()
    }

    pub fn degree(&self) -> u32 {
        self.lhs.degree()
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Var(usize),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    Equals,
}

#[derive(Debug, Clone)]
struct Lexeme {
    tok: Tok,
    line: usize,
    col: usize,
}

fn err(line: usize, col: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column: col,
        message: message.into(),
    }
}

struct Scanner {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    col: usize,
}

impl Scanner {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> char {
        let c = self.chars[self.pos];
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        c
    }

    fn digits(&mut self) -> String {
        let mut out = String::new();
        while matches!(self.peek(), Some(d) if d.is_ascii_digit()) {
            out.push(self.bump());
        }
        out
    }
}

fn lex(text: &str) -> Result<Vec<Lexeme>> {
    let mut out = Vec::new();
    let mut s = Scanner {
        chars: text.chars().collect(),
        pos: 0,
        line: 1,
        col: 1,
    };
    while let Some(ch) = s.peek() {
        let (tline, tcol) = (s.line, s.col);
        let push = |tok: Tok, out: &mut Vec<Lexeme>| {
            out.push(Lexeme {
                tok,
                line: tline,
                col: tcol,
            })
        };
        match ch {
            c if c.is_whitespace() => {
                s.bump();
            }
            '+' => {
                s.bump();
                push(Tok::Plus, &mut out);
            }
            '-' => {
                s.bump();
                push(Tok::Minus, &mut out);
            }
            '*' => {
                s.bump();
                push(Tok::Star, &mut out);
            }
            '^' => {
                s.bump();
                push(Tok::Caret, &mut out);
            }
            '/' => {
                s.bump();
                push(Tok::Slash, &mut out);
            }
            '=' => {
                s.bump();
                push(Tok::Equals, &mut out);
            }
            c if c.is_ascii_digit() => {
                let digits = s.digits();
                let value: BigInt = digits.parse().expect("digit run parses as integer");
                push(Tok::Int(value), &mut out);
            }
            'x' => {
                s.bump();
                let digits = s.digits();
                if digits.is_empty() {
                    return Err(err(tline, tcol, "variable needs an index, like x1"));
                }
                let index: usize = digits
                    .parse()
                    .map_err(|_| err(tline, tcol, "variable index too large"))?;
                if index == 0 {
                    return Err(err(tline, tcol, "variable index must start at 1"));
                }
                push(Tok::Var(index), &mut out);
            }
            other => {
                return Err(err(tline, tcol, format!("unexpected character '{other}'")));
            }
        }
    }
    Ok(out)
}

/// Cap on a single exponent; substitution tables are polynomial in the
/// degree, so absurd powers are rejected at parse time.
const MAX_EXPONENT: u32 = 4096;

#[derive(Debug, Clone)]
enum Factor {
    Coeff(Rat),
    VarPow { index: usize, power: u32 },
}

/// One side of the equation as signed products, before arity is known.
type RawTerm = (bool, Vec<Factor>);

struct Parser {
    lexemes: Vec<Lexeme>,
    pos: usize,
    end_line: usize,
    end_col: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Lexeme> {
        self.lexemes.get(self.pos)
    }

    fn next(&mut self) -> Option<Lexeme> {
        let l = self.lexemes.get(self.pos).cloned();
        if l.is_some() {
            self.pos += 1;
        }
        l
    }

    fn here(&self) -> (usize, usize) {
        self.peek()
            .map(|l| (l.line, l.col))
            .unwrap_or((self.end_line, self.end_col))
    }

    fn expect_int(&mut self, what: &str) -> Result<(BigInt, usize, usize)> {
        let (line, col) = self.here();
        match self.next() {
            Some(Lexeme { tok: Tok::Int(v), line, col }) => Ok((v, line, col)),
            Some(Lexeme { tok: Tok::Minus, line, col }) if what == "exponent" => {
                Err(err(line, col, "exponent must be non-negative"))
            }
            _ => Err(err(line, col, format!("expected {what}"))),
        }
    }

    /// number := INT ['/' INT]
    fn parse_number(&mut self) -> Result<Rat> {
        let (numer, line, col) = self.expect_int("a number")?;
        if matches!(self.peek().map(|l| &l.tok), Some(Tok::Slash)) {
            self.next();
            let (denom, dline, dcol) = self.expect_int("a denominator")?;
            if denom.is_zero() {
                return Err(err(dline, dcol, "denominator cannot be zero"));
            }
            Ok(Rat::new(numer, denom))
        } else {
            let _ = (line, col);
            Ok(Rat::from_integer(numer))
        }
    }

    /// factor := number | VAR ['^' INT]
    fn parse_factor(&mut self) -> Result<Factor> {
        let (line, col) = self.here();
        match self.peek().map(|l| l.tok.clone()) {
            Some(Tok::Int(_)) => Ok(Factor::Coeff(self.parse_number()?)),
            Some(Tok::Var(index)) => {
                self.next();
                let mut power = 1u32;
                if matches!(self.peek().map(|l| &l.tok), Some(Tok::Caret)) {
                    self.next();
                    let (v, eline, ecol) = self.expect_int("exponent")?;
                    if matches!(self.peek().map(|l| &l.tok), Some(Tok::Slash)) {
                        return Err(err(eline, ecol, "exponent must be an integer"));
                    }
                    power = u32::try_from(&v)
                        .ok()
                        .filter(|&p| p <= MAX_EXPONENT)
                        .ok_or_else(|| err(eline, ecol, "exponent too large"))?;
                }
                Ok(Factor::VarPow { index, power })
            }
            _ => Err(err(line, col, "expected a coefficient or a variable")),
        }
    }

    /// term := factor ('*' factor)*
    fn parse_term(&mut self) -> Result<Vec<Factor>> {
        let mut factors = vec![self.parse_factor()?];
        while matches!(self.peek().map(|l| &l.tok), Some(Tok::Star)) {
            self.next();
            factors.push(self.parse_factor()?);
        }
        Ok(factors)
    }

    /// expr := ['+'|'-'] term (('+'|'-') term)*
    fn parse_expr(&mut self) -> Result<Vec<RawTerm>> {
        let mut terms = Vec::new();
        let mut negative = false;
        match self.peek().map(|l| &l.tok) {
            Some(Tok::Plus) => {
                self.next();
            }
            Some(Tok::Minus) => {
                self.next();
                negative = true;
            }
            _ => {}
        }
        terms.push((negative, self.parse_term()?));
        loop {
            match self.peek().map(|l| &l.tok) {
                Some(Tok::Plus) => {
                    self.next();
                    terms.push((false, self.parse_term()?));
                }
                Some(Tok::Minus) => {
                    self.next();
                    terms.push((true, self.parse_term()?));
                }
                _ => break,
            }
        }
        Ok(terms)
    }
}

fn build_polynomial(k: usize, terms: &[RawTerm]) -> Result<Polynomial> {
    let mut built = Vec::with_capacity(terms.len());
    for (negative, factors) in terms {
        let mut coeff = Rat::one();
        let mut exponents = vec![0u32; k];
        for f in factors {
            match f {
                Factor::Coeff(c) => coeff *= c,
                Factor::VarPow { index, power } => {
                    let slot = &mut exponents[index - 1];
                    *slot = slot
                        .checked_add(*power)
                        .filter(|&e| e <= MAX_EXPONENT)
                        .ok_or_else(|| err(1, 1, format!("total power of x{index} too large")))?;
                }
            }
        }
        if *negative {
            coeff = -coeff;
        }
        built.push((Monomial::new(exponents), coeff));
    }
    Ok(Polynomial::from_terms(k, built))
}

fn parse_equation_text(text: &str, min_vars: Option<usize>) -> Result<Equation> {
    let lexemes = lex(text)?;
    let (end_line, end_col) = lexemes
        .last()
        .map(|l| (l.line, l.col + 1))
        .unwrap_or((1, 1));
    let mut parser = Parser {
        lexemes,
        pos: 0,
        end_line,
        end_col,
    };
    let lhs_terms = parser.parse_expr()?;
    let (line, col) = parser.here();
    match parser.next() {
        Some(Lexeme { tok: Tok::Equals, .. }) => {}
        _ => return Err(err(line, col, "expected '='")),
    }
    let rhs_terms = parser.parse_expr()?;
    if let Some(l) = parser.peek() {
        return Err(err(l.line, l.col, "unexpected trailing input"));
    }

    let max_index = lhs_terms
        .iter()
        .chain(&rhs_terms)
        .flat_map(|(_, fs)| fs.iter())
        .filter_map(|f| match f {
            Factor::VarPow { index, .. } => Some(*index),
            Factor::Coeff(_) => None,
        })
        .max()
        .unwrap_or(0);
    let k = match min_vars {
        Some(v) if v < max_index => {
            return Err(err(
                1,
                1,
                format!("vars directive says {v} but x{max_index} is used"),
            ));
        }
        Some(v) => v,
        None => max_index,
    };

    let lhs = build_polynomial(k, &lhs_terms)?;
    let rhs = build_polynomial(k, &rhs_terms)?;
    Ok(Equation {
        lhs: &lhs - &rhs,
        name: None,
        source_text: text.to_string(),
    })
}

/// Parses a bare equation string such as `"x1^2 - 5*x2 = 0"`.
pub fn parse_equation(text: &str) -> Result<Equation> {
    parse_equation_text(text, None)
}

/// Parses the full file format: `#` comments, optional `name:` and `vars`
/// directives, then one equation (which may span lines).
pub fn load_equation_file(text: &str) -> Result<Equation> {
    let mut name = None;
    let mut vars = None;
    let mut equation_lines: Vec<&str> = Vec::new();
    let mut saw_equation = false;
    for (idx, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if !saw_equation {
            if let Some(label) = trimmed.strip_prefix("name:") {
                name = Some(label.trim().to_string());
                continue;
            }
            if let Some(count) = trimmed.strip_prefix("vars") {
                let count = count.trim();
                let parsed: usize = count.parse().map_err(|_| {
                    err(idx + 1, 1, format!("invalid vars directive '{count}'"))
                })?;
                vars = Some(parsed);
                continue;
            }
        }
        saw_equation = true;
        equation_lines.push(line);
    }
    if equation_lines.is_empty() {
        return Err(err(1, 1, "file contains no equation"));
    }
    let body = equation_lines.join("\n");
    let mut eq = parse_equation_text(&body, vars)?;
    eq.name = name;
    Ok(eq)
}

/// Loads every `.dioph` file in a directory, sorted by file name.
pub fn load_corpus(dir: &Path) -> Result<Vec<Equation>> {
    let mut paths: Vec<_> = std::fs::read_dir(dir)
        .map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|ext| ext == "dioph"))
        .collect();
    paths.sort();
    let mut out = Vec::new();
    for path in paths {
        let text = std::fs::read_to_string(&path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        let mut eq = load_equation_file(&text).map_err(|e| match e {
            Error::Parse { line, column, message } => Error::Parse {
                line,
                column,
                message: format!("{}: {message}", path.display()),
            },
            other => other,
        })?;
        if eq.name.is_none() {
            eq.name = path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned());
        }
        out.push(eq);
    }
    Ok(out)
}

fn format_rat(value: &Rat) -> String {
    value.to_string()
}

fn format_monomial(m: &Monomial) -> String {
    m.exponents()
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| {
            if e == 1 {
                format!("x{}", i + 1)
            } else {
                format!("x{}^{}", i + 1, e)
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}

/// Canonical text of a polynomial, terms in descending lexicographic order.
pub fn format_polynomial(p: &Polynomial) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (m, c)) in p.terms().rev().enumerate() {
        let mag = c.abs();
        if i == 0 {
            if c.is_negative() {
                out.push('-');
            }
        } else if c.is_negative() {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        if m.is_constant() {
            out.push_str(&format_rat(&mag));
        } else if mag.is_one() {
            out.push_str(&format_monomial(m));
        } else {
            out.push_str(&format_rat(&mag));
            out.push('*');
            out.push_str(&format_monomial(m));
        }
    }
    out
}

/// Canonical `<polynomial> = 0` text whose parse reproduces the equation.
pub fn format_equation(e: &Equation) -> String {
    format!("{} = 0", format_polynomial(&e.lhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, ratio};

    #[test]
    fn parse_shifted_parabola() {
        let eq = parse_equation("4*x1^2 + 9*x2^2 + 12*x1*x2 + 8*x1 + 2*x2 + 24 = 0").unwrap();
        let expected = Polynomial::from_i64(
            2,
            &[
                (4, &[2, 0]),
                (9, &[0, 2]),
                (12, &[1, 1]),
                (8, &[1, 0]),
                (2, &[0, 1]),
                (24, &[0, 0]),
            ],
        );
        assert_eq!(eq.lhs, expected);
        assert_eq!(eq.k(), 2);
    }

    #[test]
    fn parse_single_variable() {
        let eq = parse_equation("x1 = 0").unwrap();
        assert_eq!(eq.lhs, Polynomial::from_i64(1, &[(1, &[1])]));
        assert_eq!(eq.k(), 1);
    }

    #[test]
    fn rhs_moves_left_negated() {
        let eq = parse_equation("x1^3 + x2^3 + x3^3 = 1").unwrap();
        let expected = Polynomial::from_i64(
            3,
            &[(1, &[3, 0, 0]), (1, &[0, 3, 0]), (1, &[0, 0, 3]), (-1, &[0, 0, 0])],
        );
        assert_eq!(eq.lhs, expected);

        let both = parse_equation("2*x1 + 3 = x1 - x2").unwrap();
        assert_eq!(
            both.lhs,
            Polynomial::from_i64(2, &[(1, &[1, 0]), (1, &[0, 1]), (3, &[0, 0])])
        );
    }

    #[test]
    fn rational_coefficients_and_signs() {
        let eq = parse_equation("-3/2*x1 + 1/2 = 0").unwrap();
        assert_eq!(eq.lhs.coeff(&Monomial::new(vec![1])), ratio(-3, 2));
        assert_eq!(eq.lhs.coeff(&Monomial::new(vec![0])), ratio(1, 2));
    }

    #[test]
    fn whitespace_insensitive() {
        let a = parse_equation("x1^2-5*x2=0").unwrap();
        let b = parse_equation("  x1 ^ 2 -   5 * x2 = 0 ").unwrap();
        let c = parse_equation("x1^2 -\n 5*x2 = 0").unwrap();
        assert_eq!(a.lhs, b.lhs);
        assert_eq!(a.lhs, c.lhs);
    }

    #[test]
    fn error_positions() {
        let e = parse_equation("x1 + & = 0").unwrap_err();
        assert_eq!(
            e,
            Error::Parse {
                line: 1,
                column: 6,
                message: "unexpected character '&'".into()
            }
        );

        match parse_equation("x0 + 1 = 0").unwrap_err() {
            Error::Parse { column, message, .. } => {
                assert_eq!(column, 1);
                assert!(message.contains("index must start at 1"));
            }
            other => panic!("unexpected error {other:?}"),
        }

        match parse_equation("x1^-2 = 0").unwrap_err() {
            Error::Parse { message, .. } => {
                assert!(message.contains("non-negative"));
            }
            other => panic!("unexpected error {other:?}"),
        }

        match parse_equation("x1^1/2 = 0").unwrap_err() {
            Error::Parse { message, .. } => {
                assert!(message.contains("must be an integer"));
            }
            other => panic!("unexpected error {other:?}"),
        }

        match parse_equation("12x1 = 0").unwrap_err() {
            Error::Parse { message, .. } => {
                // implicit multiplication is a syntax error, not a silent parse
                assert!(message.contains("unexpected trailing input") || message.contains("expected"));
            }
            other => panic!("unexpected error {other:?}"),
        }

        match parse_equation("x1 + x2").unwrap_err() {
            Error::Parse { message, .. } => assert!(message.contains("expected '='")),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn format_examples() {
        let eq = Equation::from_poly(Polynomial::from_i64(2, &[(1, &[2, 0]), (-5, &[0, 1])]));
        assert_eq!(format_equation(&eq), "x1^2 - 5*x2 = 0");

        let zero = Equation::from_poly(Polynomial::zero(2));
        assert_eq!(format_equation(&zero), "0 = 0");

        let mixed = Equation::from_poly(Polynomial::from_terms(
            2,
            [
                (Monomial::new(vec![1, 1]), rat(-12)),
                (Monomial::new(vec![0, 0]), ratio(3, 2)),
                (Monomial::new(vec![2, 0]), rat(-1)),
            ],
        ));
        assert_eq!(format_equation(&mixed), "-x1^2 - 12*x1*x2 + 3/2 = 0");
        let back = parse_equation(&format_equation(&mixed)).unwrap();
        assert_eq!(back.lhs, mixed.lhs);
    }

    #[test]
    fn file_format_directives() {
        let text = "# sample corpus entry\nname: cross-term\nvars 3\nx1^2 + 2*x1*x2 - 3*x2^2 = 0 # trailing comment\n";
        let eq = load_equation_file(text).unwrap();
        assert_eq!(eq.name.as_deref(), Some("cross-term"));
        assert_eq!(eq.k(), 3);
        assert_eq!(eq.lhs.coeff(&Monomial::new(vec![1, 1, 0])), rat(2));

        let bad = "vars 1\nx1 + x2 = 0\n";
        assert!(load_equation_file(bad).is_err());

        let empty = "# nothing here\n";
        assert!(load_equation_file(empty).is_err());
    }

    #[test]
    fn round_trip_on_fixture_like_forms() {
        let sources = [
            "4*x1^2 + 9*x2^2 + 12*x1*x2 + 8*x1 + 2*x2 + 24 = 0",
            "x1^2 + 2*x1*x2 - 3*x2^2 = 0",
            "x1^3 + x2^3 + x3^3 - 1 = 0",
            "8*x1^3 + 12*x1^2*x2 + 6*x1*x2^2 + 28*x2^3 = 0",
            "x1^2 + x2^2 - x3^2 = 0",
            "-x1^4 + 7/3*x2 - 1 = 0",
        ];
        for src in sources {
            let eq = parse_equation(src).unwrap();
            let printed = format_equation(&eq);
            let again = parse_equation(&printed).unwrap();
            assert_eq!(again.lhs, eq.lhs, "round trip failed for {src}");
        }
    }
}
