//! A small expression language for custom distance functions in `x` and `y`.
//!
//! Grammar, loosest to tightest binding:
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' unary)?          // right-associative
//! atom   := number | 'x' | 'y' | 'pi' | func '(' expr (',' expr)* ')' | '(' expr ')'
//! ```
//!
//! Unary minus binds looser than `^`, so `-2^2` is `-(2^2) = -4`. Numbers are
//! decimal with optional fraction and exponent. Functions are `abs`, `sqrt`,
//! `sin`, `cos`, `exp`, `log` (natural) of one argument and `min`, `max` of
//! two.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    X,
    Y,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Pow => "^",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Abs,
    Sqrt,
    Sin,
    Cos,
    Exp,
    Log,
    Min,
    Max,
}

impl Func {
    fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "abs" => Func::Abs,
            "sqrt" => Func::Sqrt,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "exp" => Func::Exp,
            "log" => Func::Log,
            "min" => Func::Min,
            "max" => Func::Max,
            _ => return None,
        })
    }

    fn name(self) -> &'static str {
        match self {
            Func::Abs => "abs",
            Func::Sqrt => "sqrt",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Min => "min",
            Func::Max => "max",
        }
    }

    fn arity(self) -> usize {
        match self {
            Func::Min | Func::Max => 2,
            _ => 1,
        }
    }
}

/// Parsed expression tree.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Number(f64),
    Var(Var),
    Pi,
    Neg(Box<Expr>),
    Binary {
        op: BinOp,
        lhs: Box<Expr>,
        rhs: Box<Expr>,
    },
    Call { func: Func, args: Vec<Expr> },
}

/// Parse failure at a character offset in the source string.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("parse error at offset {position}: {message} (expected {expected})")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
    pub expected: &'static str,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvalError {
    #[error("log of non-positive value {0}")]
    LogDomain(f64),
    #[error("division {numerator} / {denominator} is not finite")]
    NonFiniteDivision { numerator: f64, denominator: f64 },
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Number(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
}

impl Token {
    fn describe(&self) -> String {
        match self {
            Token::Number(v) => format!("number {v}"),
            Token::Ident(s) => format!("identifier `{s}`"),
            Token::Plus => "`+`".into(),
            Token::Minus => "`-`".into(),
            Token::Star => "`*`".into(),
            Token::Slash => "`/`".into(),
            Token::Caret => "`^`".into(),
            Token::LParen => "`(`".into(),
            Token::RParen => "`)`".into(),
            Token::Comma => "`,`".into(),
        }
    }
}

/// Token plus the char offset where it starts.
struct Spanned {
    token: Token,
    position: usize,
}

fn lex(source: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = source.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        match c {
            ' ' | '\t' | '\n' | '\r' => {
                i += 1;
            }
            '+' | '-' | '*' | '/' | '^' | '(' | ')' | ',' => {
                let token = match c {
                    '+' => Token::Plus,
                    '-' => Token::Minus,
                    '*' => Token::Star,
                    '/' => Token::Slash,
                    '^' => Token::Caret,
                    '(' => Token::LParen,
                    ')' => Token::RParen,
                    _ => Token::Comma,
                };
                tokens.push(Spanned {
                    token,
                    position: start,
                });
                i += 1;
            }
            '0'..='9' | '.' => {
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                    i += 1;
                }
                // Exponent part: e / E, optional sign, at least one digit.
                if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                    let mut j = i + 1;
                    if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                        j += 1;
                    }
                    if j < chars.len() && chars[j].is_ascii_digit() {
                        i = j;
                        while i < chars.len() && chars[i].is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let text: String = chars[start..i].iter().collect();
                let value: f64 = text.parse().map_err(|_| ParseError {
                    position: start,
                    message: format!("`{text}` is not a valid number"),
                    expected: "number",
                })?;
                if !value.is_finite() {
                    return Err(ParseError {
                        position: start,
                        message: format!("number literal `{text}` overflows"),
                        expected: "finite number",
                    });
                }
                tokens.push(Spanned {
                    token: Token::Number(value),
                    position: start,
                });
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                while i < chars.len()
                    && (chars[i].is_ascii_alphanumeric() || chars[i] == '_')
                {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                tokens.push(Spanned {
                    token: Token::Ident(text),
                    position: start,
                });
            }
            _ => {
                return Err(ParseError {
                    position: start,
                    message: format!("unexpected character `{c}`"),
                    expected: "token",
                });
            }
        }
    }
    Ok(tokens)
}

struct Parser {
    tokens: Vec<Spanned>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|s| &s.token)
    }

    fn here(&self) -> usize {
        self.tokens
            .get(self.pos)
            .map(|s| s.position)
            .unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).map(|s| s.token.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn fail(&self, expected: &'static str) -> ParseError {
        let message = match self.peek() {
            Some(t) => format!("found {}", t.describe()),
            None => "input ended".into(),
        };
        ParseError {
            position: self.here(),
            message,
            expected,
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Some(Token::Plus) => BinOp::Add,
                Some(Token::Minus) => BinOp::Sub,
                _ => break,
            };
            self.bump();
            let rhs = self.term()?;
            lhs = Expr::Binary {
                op,
                lhs: Box::new(lhs),
                rhs: Box::new(rhs),
            };
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Some(Token::Star) => BinOp::Mul,
                Some(Token::Slash) => BinOp::Div,
                _ => break,
            };
            self.bump();
            let rhs = self.unary()?;
            lhs = Expr::Binary {
                op,
                lhs: Box::new(lhs),
                rhs: Box::new(rhs),
            };
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if matches!(self.peek(), Some(Token::Minus)) {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if matches!(self.peek(), Some(Token::Caret)) {
            self.bump();
            // Right-associative, and `2^-3` is allowed.
            let exponent = self.unary()?;
            return Ok(Expr::Binary {
                op: BinOp::Pow,
                lhs: Box::new(base),
                rhs: Box::new(exponent),
            });
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let position = self.here();
        match self.bump() {
            Some(Token::Number(v)) => Ok(Expr::Number(v)),
            Some(Token::Ident(name)) => match name.as_str() {
                "x" => Ok(Expr::Var(Var::X)),
                "y" => Ok(Expr::Var(Var::Y)),
                "pi" => Ok(Expr::Pi),
                _ => {
                    if let Some(func) = Func::from_name(&name) {
                        self.call(func, position)
                    } else {
                        Err(ParseError {
                            position,
                            message: format!("unknown identifier `{name}`"),
                            expected: "x, y, pi, or a function name",
                        })
                    }
                }
            },
            Some(Token::LParen) => {
                let inner = self.expr()?;
                self.close_paren()?;
                Ok(inner)
            }
            Some(other) => Err(ParseError {
                position,
                message: format!("found {}", other.describe()),
                expected: "atom",
            }),
            None => Err(ParseError {
                position,
                message: "input ended".into(),
                expected: "atom",
            }),
        }
    }

    fn call(&mut self, func: Func, position: usize) -> Result<Expr, ParseError> {
        if !matches!(self.peek(), Some(Token::LParen)) {
            return Err(self.fail("`(` after function name"));
        }
        self.bump();
        let mut args = vec![self.expr()?];
        while matches!(self.peek(), Some(Token::Comma)) {
            self.bump();
            args.push(self.expr()?);
        }
        self.close_paren()?;
        if args.len() != func.arity() {
            return Err(ParseError {
                position,
                message: format!(
                    "{} takes {} argument{}, got {}",
                    func.name(),
                    func.arity(),
                    if func.arity() == 1 { "" } else { "s" },
                    args.len()
                ),
                expected: "matching argument count",
            });
        }
        Ok(Expr::Call { func, args })
    }

    fn close_paren(&mut self) -> Result<(), ParseError> {
        if matches!(self.peek(), Some(Token::RParen)) {
            self.bump();
            Ok(())
        } else {
            Err(self.fail("`)`"))
        }
    }
}

/// Parses a distance expression over the variables `x` and `y`.
pub fn parse(source: &str) -> Result<Expr, ParseError> {
    let tokens = lex(source)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        end: source.chars().count(),
    };
    let expr = parser.expr()?;
    if parser.peek().is_some() {
        return Err(parser.fail("operator or end of input"));
    }
    Ok(expr)
}

/// Evaluates an expression at concrete scores.
///
/// `log` of a non-positive value and any division with a non-finite result
/// are reported as errors; other IEEE edge cases (for example `sqrt` of a
/// negative number) propagate as NaN.
pub fn evaluate(expr: &Expr, x: f64, y: f64) -> Result<f64, EvalError> {
    Ok(match expr {
        Expr::Number(v) => *v,
        Expr::Var(Var::X) => x,
        Expr::Var(Var::Y) => y,
        Expr::Pi => std::f64::consts::PI,
        Expr::Neg(inner) => -evaluate(inner, x, y)?,
        Expr::Binary { op, lhs, rhs } => {
            let a = evaluate(lhs, x, y)?;
            let b = evaluate(rhs, x, y)?;
            match op {
                BinOp::Add => a + b,
                BinOp::Sub => a - b,
                BinOp::Mul => a * b,
                BinOp::Div => {
                    let q = a / b;
                    if !q.is_finite() {
                        return Err(EvalError::NonFiniteDivision {
                            numerator: a,
                            denominator: b,
                        });
                    }
                    q
                }
                BinOp::Pow => pow(a, b),
            }
        }
        Expr::Call { func, args } => {
            let a = evaluate(&args[0], x, y)?;
            match func {
                Func::Abs => a.abs(),
                Func::Sqrt => a.sqrt(),
                Func::Sin => a.sin(),
                Func::Cos => a.cos(),
                Func::Exp => a.exp(),
                Func::Log => {
                    if a <= 0.0 {
                        return Err(EvalError::LogDomain(a));
                    }
                    a.ln()
                }
                Func::Min => a.min(evaluate(&args[1], x, y)?),
                Func::Max => a.max(evaluate(&args[1], x, y)?),
            }
        }
    })
}

/// `powi` when the exponent is a small integer, so `(x-y)^2` costs one
/// multiply and matches `diff * diff` bit for bit; `powf` otherwise.
fn pow(base: f64, exponent: f64) -> f64 {
    if exponent.fract() == 0.0 && exponent.abs() <= i32::MAX as f64 {
        base.powi(exponent as i32)
    } else {
        base.powf(exponent)
    }
}

/// One report from probing an expression as a distance function.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetryViolation {
    pub x: f64,
    pub y: f64,
    pub forward: f64,
    pub reverse: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalViolation {
    pub x: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeFailure {
    pub x: f64,
    pub y: f64,
    pub error: EvalError,
}

/// Everything suspicious found while probing; empty means the expression
/// behaved like a distance on the grid.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct DistanceDiagnostics {
    pub symmetry_violations: Vec<SymmetryViolation>,
    pub diagonal_violations: Vec<DiagonalViolation>,
    pub failures: Vec<ProbeFailure>,
}

impl DistanceDiagnostics {
    pub fn is_clean(&self) -> bool {
        self.symmetry_violations.is_empty()
            && self.diagonal_violations.is_empty()
            && self.failures.is_empty()
    }
}

/// Probes an expression on the Cartesian square of a grid, checking that it
/// is symmetric, zero on the diagonal, and evaluates without error. A custom
/// expression is applied as written, even on the diagonal, so `x*y` on the
/// grid `{2}` reports a nonzero value at `(2, 2)`.
pub fn validate_distance(expr: &Expr, grid: &[f64]) -> DistanceDiagnostics {
    let mut diag = DistanceDiagnostics::default();
    let tol = 1e-12;
    for (i, &x) in grid.iter().enumerate() {
        match evaluate(expr, x, x) {
            Ok(v) => {
                if v.abs() > tol || v.is_nan() {
                    diag.diagonal_violations.push(DiagonalViolation { x, value: v });
                }
            }
            Err(error) => diag.failures.push(ProbeFailure { x, y: x, error }),
        }
        for &y in &grid[i + 1..] {
            let forward = match evaluate(expr, x, y) {
                Ok(v) => Some(v),
                Err(error) => {
                    diag.failures.push(ProbeFailure { x, y, error });
                    None
                }
            };
            let reverse = match evaluate(expr, y, x) {
                Ok(v) => Some(v),
                Err(error) => {
                    diag.failures.push(ProbeFailure { x: y, y: x, error });
                    None
                }
            };
            if let (Some(f), Some(r)) = (forward, reverse) {
                let scale = f.abs().max(r.abs()).max(1.0);
                if (f - r).abs() > tol * scale || f.is_nan() != r.is_nan() {
                    diag.symmetry_violations.push(SymmetryViolation {
                        x,
                        y,
                        forward: f,
                        reverse: r,
                    });
                }
            }
        }
    }
    diag
}

impl fmt::Display for Expr {
    /// Fully parenthesized form; `parse(format!("{e}"))` returns `e` again.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Number(v) => write!(f, "{v}"),
            Expr::Var(Var::X) => write!(f, "x"),
            Expr::Var(Var::Y) => write!(f, "y"),
            Expr::Pi => write!(f, "pi"),
            Expr::Neg(inner) => write!(f, "(-{inner})"),
            Expr::Binary { op, lhs, rhs } => write!(f, "({lhs} {} {rhs})", op.symbol()),
            Expr::Call { func, args } => {
                write!(f, "{}(", func.name())?;
                for (i, arg) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{arg}")?;
                }
                write!(f, ")")
            }
        }
    }
}
