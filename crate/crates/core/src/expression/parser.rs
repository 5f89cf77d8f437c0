//! Hand-written lexer and recursive-descent parser for the DSL.

use super::{Expr, ParseError, MAX_DEPTH, MAX_SPEC_BYTES};
use crate::numerics::MAX_POWER;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64, String),
    Ident(String),
    LParen,
    RParen,
    Comma,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(_, text) => format!("number {text}"),
            Tok::Ident(name) => format!("identifier `{name}`"),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Comma => "','".into(),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Slash => "'/'".into(),
            Tok::Caret => "'^'".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut column) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            column = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            column += 1;
            continue;
        }
        let start = (line, column);
        let simple = match c {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            _ => None,
        };
        let (tok, len) = if let Some(tok) = simple {
            (tok, 1)
        } else if c.is_ascii_digit() {
            let len = number_len(&chars[i..]);
            let s: String = chars[i..i + len].iter().collect();
            match s.parse::<f64>() {
                Ok(v) if v.is_finite() => (Tok::Num(v, s), len),
                _ => {
                    return Err(syntax(
                        start,
                        format!("number {s} is out of range"),
                        Vec::new(),
                    ));
                }
            }
        } else if c.is_ascii_alphabetic() || c == '_' {
            let len = chars[i..]
                .iter()
                .take_while(|c| c.is_ascii_alphanumeric() || **c == '_')
                .count();
            (Tok::Ident(chars[i..i + len].iter().collect()), len)
        } else {
            return Err(syntax(
                start,
                format!("unexpected character {c:?}"),
                Vec::new(),
            ));
        };
        out.push(Token {
            tok,
            line: start.0,
            column: start.1,
        });
        i += len;
        column += len;
    }
    out.push(Token {
        tok: Tok::Eof,
        line,
        column,
    });
    Ok(out)
}

/// Length of `digits ('.' digits)? ([eE] [+-]? digits)?` at the start of `s`.
fn number_len(s: &[char]) -> usize {
    let digits = |from: usize| s[from..].iter().take_while(|c| c.is_ascii_digit()).count();
    let mut len = digits(0);
    if s.get(len) == Some(&'.') && digits(len + 1) > 0 {
        len += 1 + digits(len + 1);
    }
    if matches!(s.get(len), Some('e' | 'E')) {
        let sign = usize::from(matches!(s.get(len + 1), Some('+' | '-')));
        let exp = digits(len + 1 + sign);
        if exp > 0 {
            len += 1 + sign + exp;
        }
    }
    len
}

fn syntax((line, column): (usize, usize), message: String, expected: Vec<String>) -> ParseError {
    ParseError::Syntax {
        line,
        column,
        message,
        expected,
    }
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    /// Alternatives tried at the current token since the last advance.
    expected: Vec<&'static str>,
    sum_depth: usize,
    depth: usize,
}

type PResult<T> = Result<T, ParseError>;

pub(super) fn parse(text: &str) -> PResult<Expr> {
    if text.len() > MAX_SPEC_BYTES {
        return Err(ParseError::TooLong(text.len()));
    }
    if text.trim().is_empty() {
        return Err(ParseError::Empty);
    }
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        expected: Vec::new(),
        sum_depth: 0,
        depth: 0,
    };
    let ast = p.expr()?;
    if !p.eat(&Tok::Eof, "end of input") {
        if p.peek() == &Tok::Caret {
            return Err(p.error("'^' is non-associative; parenthesize the base".into()));
        }
        return Err(p.unexpected());
    }
    Ok(ast)
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn here(&self) -> (usize, usize) {
        let t = &self.toks[self.pos];
        (t.line, t.column)
    }

    fn advance(&mut self) -> Tok {
        let tok = self.toks[self.pos].tok.clone();
        if tok != Tok::Eof {
            self.pos += 1;
        }
        self.expected.clear();
        tok
    }

    fn eat(&mut self, tok: &Tok, name: &'static str) -> bool {
        if self.peek() == tok {
            self.advance();
            true
        } else {
            self.expected.push(name);
            false
        }
    }

    fn expect(&mut self, tok: &Tok, name: &'static str) -> PResult<()> {
        if self.eat(tok, name) {
            Ok(())
        } else {
            Err(self.unexpected())
        }
    }

    fn error(&self, message: String) -> ParseError {
        let mut expected: Vec<String> = Vec::new();
        for e in &self.expected {
            if !expected.iter().any(|x| x == e) {
                expected.push((*e).to_string());
            }
        }
        syntax(self.here(), message, expected)
    }

    fn unexpected(&self) -> ParseError {
        self.error(format!("unexpected {}", self.peek().describe()))
    }

    fn enter(&mut self) -> PResult<()> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            let (line, column) = self.here();
            return Err(ParseError::TooDeep { line, column });
        }
        Ok(())
    }

    fn expr(&mut self) -> PResult<Expr> {
        self.enter()?;
        let mut lhs = self.term()?;
        loop {
            if self.eat(&Tok::Plus, "'+'") {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(&Tok::Minus, "'-'") {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                break;
            }
        }
        self.depth -= 1;
        Ok(lhs)
    }

    fn term(&mut self) -> PResult<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat(&Tok::Star, "'*'") {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat(&Tok::Slash, "'/'") {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                break;
            }
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> PResult<Expr> {
        if self.eat(&Tok::Minus, "'-'") {
            self.enter()?;
            let inner = self.unary()?;
            self.depth -= 1;
            return Ok(Expr::Neg(Box::new(inner)));
        }
        self.factor()
    }

    fn factor(&mut self) -> PResult<Expr> {
        let base = self.atom()?;
        if !self.eat(&Tok::Caret, "'^'") {
            return Ok(base);
        }
        let (line, column) = self.here();
        let k = match self.peek().clone() {
            Tok::Num(_, text) => {
                let k = text
                    .parse::<u64>()
                    .map_err(|_| ParseError::NonIntegerExponent {
                        line,
                        column,
                        found: text.clone(),
                    })?;
                if k > MAX_POWER {
                    return Err(ParseError::ExponentTooLarge {
                        line,
                        column,
                        found: k,
                    });
                }
                self.advance();
                k
            }
            _ => {
                self.expected.push("integer");
                return Err(self.unexpected());
            }
        };
        if self.peek() == &Tok::Caret {
            return Err(self.error("'^' is non-associative; parenthesize the base".into()));
        }
        Ok(Expr::Pow(Box::new(base), k))
    }

    fn call_arg(&mut self) -> PResult<Expr> {
        self.expect(&Tok::LParen, "'('")?;
        let arg = self.expr()?;
        self.expect(&Tok::RParen, "')'")?;
        Ok(arg)
    }

    fn integer(&mut self) -> PResult<u64> {
        if let Tok::Num(_, text) = self.peek() {
            if let Ok(v) = text.parse::<u64>() {
                self.advance();
                return Ok(v);
            }
        }
        self.expected.push("integer");
        Err(self.unexpected())
    }

    fn atom(&mut self) -> PResult<Expr> {
        let (line, column) = self.here();
        match self.peek().clone() {
            Tok::Num(v, _) => {
                self.advance();
                Ok(Expr::Num(v))
            }
            Tok::LParen => {
                self.advance();
                let inner = self.expr()?;
                self.expect(&Tok::RParen, "')'")?;
                Ok(inner)
            }
            Tok::Ident(name) => {
                self.advance();
                match name.as_str() {
                    "e" => Ok(Expr::E),
                    "gamma" => Ok(Expr::Gamma),
                    "x" => Ok(Expr::X),
                    "n" => Ok(Expr::N),
                    "k" if self.sum_depth > 0 => Ok(Expr::K),
                    "k" => Err(ParseError::UnboundK { line, column }),
                    "pi" => Ok(Expr::Pi(Box::new(self.call_arg()?))),
                    "log" => Ok(Expr::Log(Box::new(self.call_arg()?))),
                    "sum" => self.sum(),
                    other => Err(syntax(
                        (line, column),
                        format!("unknown identifier `{other}`"),
                        ["e", "gamma", "x", "n", "k", "pi", "log", "sum"]
                            .map(String::from)
                            .to_vec(),
                    )),
                }
            }
            _ => {
                self.expected.extend(["number", "identifier", "'('"]);
                Err(self.unexpected())
            }
        }
    }

    fn sum(&mut self) -> PResult<Expr> {
        self.expect(&Tok::LParen, "'('")?;
        match self.peek() {
            Tok::Ident(v) if v == "k" => {
                self.advance();
            }
            Tok::Ident(v) => {
                let msg = format!("summation variable must be `k`, found `{v}`");
                self.expected.push("`k`");
                return Err(self.error(msg));
            }
            _ => {
                self.expected.push("`k`");
                return Err(self.unexpected());
            }
        }
        self.expect(&Tok::Comma, "','")?;
        let lower = self.integer()?;
        self.expect(&Tok::Comma, "','")?;
        let upper = match self.peek() {
            Tok::Ident(v) if v == "n" => {
                self.advance();
                None
            }
            _ => {
                self.expected.push("`n`");
                Some(self.integer()?)
            }
        };
        self.expect(&Tok::Comma, "','")?;
        self.sum_depth += 1;
        let body = self.expr();
        self.sum_depth -= 1;
        let body = body?;
        self.expect(&Tok::RParen, "')'")?;
        Ok(Expr::Sum {
            lower,
            upper,
            body: Box::new(body),
        })
    }
}
