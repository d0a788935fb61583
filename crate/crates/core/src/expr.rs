//! Scalar analytic expressions in `x`, `y`, `z`.
//!
//! Potentials, sources, boundary data and manufactured solutions are all
//! given as small closed-grammar expressions:
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' unary)?
//! primary := number | 'x' | 'y' | 'z' | 'pi' | func '(' expr ')' | '(' expr ')'
//! func    := exp | sqrt | sin | cos | log | abs
//! ```
//!
//! `^` binds tighter than unary minus, so `-x^2` is `-(x^2)`, and it is right
//! associative. Evaluation never produces a silent NaN for the guarded
//! operations: division by zero, `log` of a non-positive value and `sqrt` of a
//! negative value are reported as [`EvalError::Domain`].

use std::f64::consts::PI;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at column {column}: {message}")]
    Syntax { column: usize, message: String },
    #[error("unknown identifier `{name}` at column {column}")]
    UnknownIdentifier { name: String, column: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("{kind} in `{expr}`")]
    Domain { kind: &'static str, expr: String },
    #[error("variable `{0}` is not defined for a point of this dimension")]
    MissingVariable(char),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Exp,
    Sqrt,
    Sin,
    Cos,
    Log,
    Abs,
}

impl Func {
    fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "exp" => Func::Exp,
            "sqrt" => Func::Sqrt,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "log" => Func::Log,
            "abs" => Func::Abs,
            _ => return None,
        })
    }

    fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Sqrt => "sqrt",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Log => "log",
            Func::Abs => "abs",
        }
    }
}

/// Expression tree node.
#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Num(f64),
    Pi,
    /// Coordinate index: 0 = x, 1 = y, 2 = z.
    Var(usize),
    Neg(Box<Node>),
    Bin(BinOp, Box<Node>, Box<Node>),
    Call(Func, Box<Node>),
}

/// A parsed, immutable expression.
#[derive(Debug, Clone, PartialEq)]
pub struct Expression {
    root: Node,
}

impl Expression {
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let tokens = lex(text)?;
        let mut parser = Parser { tokens, pos: 0 };
        let root = parser.expr()?;
        match parser.peek() {
            Tok { kind: Kind::End, .. } => Ok(Expression { root }),
            t => Err(ParseError::Syntax {
                column: t.column,
                message: format!("unexpected {}", t.kind.describe()),
            }),
        }
    }

    pub fn constant(value: f64) -> Self {
        Expression {
            root: Node::Num(value),
        }
    }

    pub fn from_node(root: Node) -> Self {
        Expression { root }
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    /// Evaluates at a point given as a 2- or 3-vector.
    pub fn eval(&self, point: &[f64]) -> Result<f64, EvalError> {
        eval_node(&self.root, point)
    }

    /// Highest coordinate index referenced plus one (0 for constants).
    pub fn dimension(&self) -> usize {
        fn walk(n: &Node) -> usize {
            match n {
                Node::Num(_) | Node::Pi => 0,
                Node::Var(i) => i + 1,
                Node::Neg(a) | Node::Call(_, a) => walk(a),
                Node::Bin(_, a, b) => walk(a).max(walk(b)),
            }
        }
        walk(&self.root)
    }

    /// True when the expression contains no variables and evaluates to zero.
    pub fn is_zero(&self) -> bool {
        self.dimension() == 0 && self.eval(&[]).map(|v| v == 0.0).unwrap_or(false)
    }
}

impl std::str::FromStr for Expression {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Expression::parse(s)
    }
}

fn domain(kind: &'static str, node: &Node) -> EvalError {
    EvalError::Domain {
        kind,
        expr: node.to_string(),
    }
}

fn eval_node(node: &Node, p: &[f64]) -> Result<f64, EvalError> {
    Ok(match node {
        Node::Num(v) => *v,
        Node::Pi => PI,
        Node::Var(i) => *p
            .get(*i)
            .ok_or(EvalError::MissingVariable(VAR_NAMES[*i]))?,
        Node::Neg(a) => -eval_node(a, p)?,
        Node::Bin(op, a, b) => {
            let l = eval_node(a, p)?;
            let r = eval_node(b, p)?;
            match op {
                BinOp::Add => l + r,
                BinOp::Sub => l - r,
                BinOp::Mul => l * r,
                BinOp::Div => {
                    if r == 0.0 {
                        return Err(domain("division by zero", node));
                    }
                    l / r
                }
                BinOp::Pow => l.powf(r),
            }
        }
        Node::Call(f, a) => {
            let v = eval_node(a, p)?;
            match f {
                Func::Exp => v.exp(),
                Func::Sqrt => {
                    if v < 0.0 {
                        return Err(domain("square root of a negative value", node));
                    }
                    v.sqrt()
                }
                Func::Sin => v.sin(),
                Func::Cos => v.cos(),
                Func::Log => {
                    if v <= 0.0 {
                        return Err(domain("logarithm of a non-positive value", node));
                    }
                    v.ln()
                }
                Func::Abs => v.abs(),
            }
        }
    })
}

const VAR_NAMES: [char; 3] = ['x', 'y', 'z'];

impl fmt::Display for Node {
    // Fully parenthesised so that re-parsing never depends on precedence.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Node::Num(v) => write!(f, "{v:?}"),
            Node::Pi => f.write_str("pi"),
            Node::Var(i) => write!(f, "{}", VAR_NAMES[*i]),
            Node::Neg(a) => write!(f, "(-{a})"),
            Node::Bin(op, a, b) => {
                let sym = match op {
                    BinOp::Add => "+",
                    BinOp::Sub => "-",
                    BinOp::Mul => "*",
                    BinOp::Div => "/",
                    BinOp::Pow => "^",
                };
                write!(f, "({a} {sym} {b})")
            }
            Node::Call(func, a) => write!(f, "{}({a})", func.name()),
        }
    }
}

impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.root.fmt(f)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Kind {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

impl Kind {
    fn describe(&self) -> String {
        match self {
            Kind::Num(v) => format!("number {v}"),
            Kind::Ident(s) => format!("identifier `{s}`"),
            Kind::Plus => "`+`".into(),
            Kind::Minus => "`-`".into(),
            Kind::Star => "`*`".into(),
            Kind::Slash => "`/`".into(),
            Kind::Caret => "`^`".into(),
            Kind::LParen => "`(`".into(),
            Kind::RParen => "`)`".into(),
            Kind::End => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Tok {
    kind: Kind,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Tok>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let column = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let single = match c {
            '+' => Some(Kind::Plus),
            '-' => Some(Kind::Minus),
            '*' => Some(Kind::Star),
            '/' => Some(Kind::Slash),
            '^' => Some(Kind::Caret),
            '(' => Some(Kind::LParen),
            ')' => Some(Kind::RParen),
            _ => None,
        };
        if let Some(kind) = single {
            out.push(Tok { kind, column });
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            // Exponent part, only when followed by digits.
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    while j < chars.len() && chars[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                }
            }
            let lit: String = chars[start..i].iter().collect();
            let value = lit.parse::<f64>().map_err(|_| ParseError::Syntax {
                column,
                message: format!("malformed number `{lit}`"),
            })?;
            out.push(Tok {
                kind: Kind::Num(value),
                column,
            });
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok {
                kind: Kind::Ident(chars[start..i].iter().collect()),
                column,
            });
        } else {
            return Err(ParseError::Syntax {
                column,
                message: format!("unexpected character `{c}`"),
            });
        }
    }
    out.push(Tok {
        kind: Kind::End,
        column: chars.len() + 1,
    });
    Ok(out)
}

struct Parser {
    tokens: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos]
    }

    fn bump(&mut self) -> Tok {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, kind: Kind) -> Result<(), ParseError> {
        let t = self.bump();
        if t.kind == kind {
            Ok(())
        } else {
            Err(ParseError::Syntax {
                column: t.column,
                message: format!("expected {}, found {}", kind.describe(), t.kind.describe()),
            })
        }
    }

    fn expr(&mut self) -> Result<Node, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek().kind {
                Kind::Plus => BinOp::Add,
                Kind::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            lhs = Node::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> Result<Node, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek().kind {
                Kind::Star => BinOp::Mul,
                Kind::Slash => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.unary()?;
            lhs = Node::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self) -> Result<Node, ParseError> {
        if self.peek().kind == Kind::Minus {
            self.bump();
            return Ok(Node::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Node, ParseError> {
        let base = self.primary()?;
        if self.peek().kind == Kind::Caret {
            self.bump();
            let exponent = self.unary()?;
            return Ok(Node::Bin(BinOp::Pow, Box::new(base), Box::new(exponent)));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Node, ParseError> {
        let t = self.bump();
        match t.kind {
            Kind::Num(v) => Ok(Node::Num(v)),
            Kind::LParen => {
                let inner = self.expr()?;
                self.expect(Kind::RParen)?;
                Ok(inner)
            }
            Kind::Ident(name) => match name.as_str() {
                "x" => Ok(Node::Var(0)),
                "y" => Ok(Node::Var(1)),
                "z" => Ok(Node::Var(2)),
                "pi" => Ok(Node::Pi),
                _ => match Func::from_name(&name) {
                    Some(func) => {
                        self.expect(Kind::LParen)?;
                        let arg = self.expr()?;
                        self.expect(Kind::RParen)?;
                        Ok(Node::Call(func, Box::new(arg)))
                    }
                    None => Err(ParseError::UnknownIdentifier {
                        name,
                        column: t.column,
                    }),
                },
            },
            other => Err(ParseError::Syntax {
                column: t.column,
                message: format!("expected an operand, found {}", other.describe()),
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(text: &str, p: &[f64]) -> f64 {
        Expression::parse(text).unwrap().eval(p).unwrap()
    }

    #[test]
    fn literal_examples() {
        assert_eq!(ev("x+y", &[1.0, 2.0]), 3.0);
        assert_eq!(ev("exp(-2*sqrt(x^2+y^2))", &[0.0, 0.0]), 1.0);
        let v = ev("4*exp(-2*sqrt(x^2+y^2))", &[1.0, 0.0]);
        assert!((v - 4.0 * (-2.0f64).exp()).abs() < 1e-15);
        assert!((v - 0.5413411329).abs() < 1e-10);
        assert_eq!(ev("0", &[0.3, 0.7]), 0.0);
        assert_eq!(ev("x*y - y", &[3.0, 2.0]), 4.0);
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(ev("2+3*4^2", &[]), 50.0);
        assert_eq!(ev("-2^2", &[]), -4.0);
        assert_eq!(ev("2^3^2", &[]), 512.0);
        assert_eq!(ev("2^-1", &[]), 0.5);
        assert_eq!(ev("8/4/2", &[]), 1.0);
        assert_eq!(ev("8-4-2", &[]), 2.0);
        assert_eq!(ev("--3", &[]), 3.0);
        assert_eq!(ev(" ( 1 + 2 ) * 3 ", &[]), 9.0);
        assert!((ev("2*pi", &[]) - 2.0 * PI).abs() < 1e-15);
        assert_eq!(ev("1.5e2 + 2E-1", &[]), 150.2);
    }

    #[test]
    fn division_by_zero_is_a_domain_error() {
        let e = Expression::parse("1/x").unwrap();
        match e.eval(&[0.0, 0.0]) {
            Err(EvalError::Domain { kind, expr }) => {
                assert_eq!(kind, "division by zero");
                assert_eq!(expr, "(1.0 / x)");
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            Expression::parse("log(x)").unwrap().eval(&[0.0]),
            Err(EvalError::Domain { .. })
        ));
        assert!(matches!(
            Expression::parse("sqrt(x - 1)").unwrap().eval(&[0.0]),
            Err(EvalError::Domain { .. })
        ));
    }

    #[test]
    fn missing_variable() {
        let e = Expression::parse("x + z").unwrap();
        assert_eq!(e.eval(&[1.0, 2.0]), Err(EvalError::MissingVariable('z')));
        assert_eq!(e.eval(&[1.0, 2.0, 3.0]), Ok(4.0));
        assert_eq!(e.dimension(), 3);
    }

    #[test]
    fn syntax_errors_report_columns() {
        assert_eq!(
            Expression::parse("1 + * 2"),
            Err(ParseError::Syntax {
                column: 5,
                message: "expected an operand, found `*`".into()
            })
        );
        assert!(matches!(
            Expression::parse("(x + 1"),
            Err(ParseError::Syntax { column: 7, .. })
        ));
        assert!(matches!(
            Expression::parse("x $ y"),
            Err(ParseError::Syntax { column: 3, .. })
        ));
        assert!(matches!(
            Expression::parse("x y"),
            Err(ParseError::Syntax { column: 3, .. })
        ));
        assert!(matches!(
            Expression::parse("exp 2"),
            Err(ParseError::Syntax { column: 5, .. })
        ));
    }

    #[test]
    fn unknown_identifier_is_named() {
        assert_eq!(
            Expression::parse("2*tanh(x)"),
            Err(ParseError::UnknownIdentifier {
                name: "tanh".into(),
                column: 3
            })
        );
    }

    #[test]
    fn display_round_trip() {
        for text in [
            "exp(-2*sqrt(x^2+y^2))",
            "-x^2 + 3/(y-0.25)",
            "2^3^2 - abs(cos(pi*x))*sin(y)",
            "1e-7*x + log(2 + y)",
        ] {
            let a = Expression::parse(text).unwrap();
            let b = Expression::parse(&a.to_string()).unwrap();
            for p in [[0.1, 0.9], [0.7, -0.3], [1.3, 2.0]] {
                assert_eq!(a.eval(&p).unwrap().to_bits(), b.eval(&p).unwrap().to_bits());
            }
        }
    }

    #[test]
    fn zero_detection() {
        assert!(Expression::parse("0").unwrap().is_zero());
        assert!(Expression::parse("0*1").unwrap().is_zero());
        assert!(!Expression::parse("0*x").unwrap().is_zero());
        assert!(!Expression::parse("1").unwrap().is_zero());
    }
}
