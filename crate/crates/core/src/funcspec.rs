//! Text syntax for map expressions.
//!
//! ```text
//! expr    := term { ('*' | '/') term }
//! term    := atom { '.' atom }            f . g is f∘g, left-associative
//! atom    := call | '(' expr ')'
//! call    := NAME '(' [args] ')'
//! args    := value { ',' value }
//! value   := complex | list | expr
//! complex := REAL [('+' | '-') REAL 'i'] | REAL 'i'    (optional leading sign)
//! list    := '[' [value { ',' value }] ']'
//! ```
//!
//! Names: `z`, `const`, `scale`, `shift`, `mobius`, `koebe`, `exp`, `log`,
//! `powerseries`, `blaschke_disc`, `blaschke_hp`, `cayley`, `inv_cayley`.
//!
//! ```
//! use imagearc::funcspec::{parse, unparse};
//! let f = parse("scale(0.5+0i) . koebe()").unwrap();
//! assert_eq!(unparse(&f), "scale(0.5+0i) . koebe()");
//! ```

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::maps::{MapExpr, MapKind};
use crate::metrics::MobiusTransform;

/// Longest accepted source, in bytes.
pub const MAX_SOURCE_BYTES: usize = 64 * 1024;

/// The grammar and name list above, as plain text for help output.
pub const GRAMMAR: &str = "\
expr    := term { ('*' | '/') term }
term    := atom { '.' atom }            f . g is f∘g, left-associative
atom    := call | '(' expr ')'
call    := NAME '(' [args] ')'
args    := value { ',' value }
value   := complex | list | expr
complex := REAL [('+' | '-') REAL 'i'] | REAL 'i'    (optional leading sign)
list    := '[' [value { ',' value }] ']'

Names: z, const, scale, shift, mobius, koebe, exp, log, powerseries,
blaschke_disc, blaschke_hp, cayley, inv_cayley.
";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// Byte offset of the first offending byte.
    pub position: usize,
    pub expected: String,
    pub found: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at byte {}: expected {}, found {}", self.position, self.expected, self.found)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Name(String),
    Sym(u8),
    End,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    pos: usize,
    text: String,
}

impl Token {
    fn describe(&self) -> String {
        match &self.tok {
            Tok::Num(_) => format!("number `{}`", self.text),
            Tok::Name(n) => format!("name `{n}`"),
            Tok::Sym(c) => format!("`{}`", *c as char),
            Tok::End => "end of input".into(),
        }
    }
}

fn err(position: usize, expected: impl Into<String>, found: impl Into<String>) -> Error {
    Error::Parse(ParseError { position, expected: expected.into(), found: found.into() })
}

fn lex(src: &str) -> Result<Vec<Token>> {
    let b = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let digits = |mut j: usize| {
        while j < b.len() && b[j].is_ascii_digit() {
            j += 1;
        }
        j
    };
    while i < b.len() {
        let c = b[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        if c.is_ascii_digit() {
            i = digits(i);
            if i + 1 < b.len() && b[i] == b'.' && b[i + 1].is_ascii_digit() {
                i = digits(i + 1);
            }
            if i < b.len() && (b[i] == b'e' || b[i] == b'E') {
                let mut j = i + 1;
                if j < b.len() && (b[j] == b'+' || b[j] == b'-') {
                    j += 1;
                }
                if j >= b.len() || !b[j].is_ascii_digit() {
                    let found = b.get(j).map_or("end of input".to_string(), |c| format!("`{}`", *c as char));
                    return Err(err(j, "exponent digits", found));
                }
                i = digits(j);
            }
            let text = &src[start..i];
            let value: f64 = text.parse().map_err(|_| err(start, "number", format!("`{text}`")))?;
            if !value.is_finite() {
                return Err(err(start, "finite number", format!("`{text}`")));
            }
            out.push(Token { tok: Tok::Num(value), pos: start, text: text.into() });
        } else if c.is_ascii_alphabetic() || c == b'_' {
            while i < b.len() && (b[i].is_ascii_alphanumeric() || b[i] == b'_') {
                i += 1;
            }
            let text = &src[start..i];
            out.push(Token { tok: Tok::Name(text.into()), pos: start, text: text.into() });
        } else if b"()[],.*/+-".contains(&c) {
            i += 1;
            out.push(Token { tok: Tok::Sym(c), pos: start, text: (c as char).to_string() });
        } else {
            return Err(err(start, "token", format!("`{}`", c as char)));
        }
    }
    out.push(Token { tok: Tok::End, pos: b.len(), text: String::new() });
    Ok(out)
}

fn check_source(src: &str) -> Result<()> {
    if src.len() > MAX_SOURCE_BYTES {
        return Err(err(MAX_SOURCE_BYTES, format!("at most {MAX_SOURCE_BYTES} bytes"), format!("{} bytes", src.len())));
    }
    if let Some(p) = src.bytes().position(|c| !c.is_ascii()) {
        return Err(err(p, "ASCII text", format!("byte 0x{:02x}", src.as_bytes()[p])));
    }
    Ok(())
}

struct Parser {
    toks: Vec<Token>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.at]
    }

    fn peek2(&self) -> &Token {
        &self.toks[(self.at + 1).min(self.toks.len() - 1)]
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn is_sym(&self, c: u8) -> bool {
        self.peek().tok == Tok::Sym(c)
    }

    fn expect_sym(&mut self, c: u8) -> Result<()> {
        if self.is_sym(c) {
            self.bump();
            Ok(())
        } else {
            let t = self.peek();
            Err(err(t.pos, format!("`{}`", c as char), t.describe()))
        }
    }

    fn expr(&mut self) -> Result<MapExpr> {
        let mut acc = self.term()?;
        while self.is_sym(b'*') || self.is_sym(b'/') {
            let op = self.bump();
            let rhs = self.term()?;
            acc = if op.tok == Tok::Sym(b'*') { acc.times(rhs)? } else { acc.over(rhs)? };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<MapExpr> {
        let mut acc = self.atom()?;
        while self.is_sym(b'.') {
            self.bump();
            let inner = self.atom()?;
            acc = acc.compose(inner)?;
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<MapExpr> {
        if self.is_sym(b'(') {
            self.bump();
            let e = self.expr()?;
            self.expect_sym(b')')?;
            return Ok(e);
        }
        let t = self.peek().clone();
        match &t.tok {
            Tok::Name(name) => {
                self.bump();
                self.call(name, t.pos)
            }
            _ => Err(err(t.pos, "function name or `(`", t.describe())),
        }
    }

    /// Optional sign, then a number.
    fn real(&mut self) -> Result<f64> {
        let mut sign = 1.0;
        if (self.is_sym(b'+') || self.is_sym(b'-')) && self.bump().tok == Tok::Sym(b'-') {
            sign = -1.0;
        }
        let t = self.peek().clone();
        match t.tok {
            Tok::Num(v) => {
                self.bump();
                Ok(sign * v)
            }
            _ => Err(err(t.pos, "number", t.describe())),
        }
    }

    fn expect_i(&mut self) -> Result<()> {
        let t = self.peek();
        if t.tok == Tok::Name("i".into()) {
            self.bump();
            Ok(())
        } else {
            Err(err(t.pos, "`i`", t.describe()))
        }
    }

    fn complex(&mut self) -> Result<Complex64> {
        let first = self.real()?;
        if self.peek().tok == Tok::Name("i".into()) {
            self.bump();
            return Ok(Complex64::new(0.0, first));
        }
        if (self.is_sym(b'+') || self.is_sym(b'-')) && matches!(self.peek2().tok, Tok::Num(_)) {
            let im = self.real()?;
            self.expect_i()?;
            return Ok(Complex64::new(first, im));
        }
        Ok(Complex64::new(first, 0.0))
    }

    fn list<T>(&mut self, mut item: impl FnMut(&mut Self) -> Result<T>) -> Result<Vec<T>> {
        self.expect_sym(b'[')?;
        let mut out = Vec::new();
        if self.is_sym(b']') {
            self.bump();
            return Ok(out);
        }
        loop {
            out.push(item(self)?);
            if self.is_sym(b',') {
                self.bump();
                continue;
            }
            self.expect_sym(b']')?;
            return Ok(out);
        }
    }

    fn real_item(&mut self) -> Result<f64> {
        let pos = self.peek().pos;
        let c = self.complex()?;
        if c.im != 0.0 {
            return Err(err(pos, "real number", format!("complex number {c}")));
        }
        Ok(c.re)
    }

    fn sign_item(&mut self) -> Result<i8> {
        let pos = self.peek().pos;
        match self.real_item()? {
            1.0 => Ok(1),
            -1.0 => Ok(-1),
            s => Err(err(pos, "sign 1 or -1", format!("{s}"))),
        }
    }

    fn comma(&mut self) -> Result<()> {
        self.expect_sym(b',')
    }

    fn call(&mut self, name: &str, pos: usize) -> Result<MapExpr> {
        self.expect_sym(b'(')?;
        let args_pos = self.peek().pos;
        let built = match name {
            "z" => Ok(MapExpr::identity()),
            "koebe" => Ok(MapExpr::koebe()),
            "exp" => Ok(MapExpr::exp()),
            "log" => Ok(MapExpr::log()),
            "cayley" => Ok(MapExpr::cayley()),
            "inv_cayley" => Ok(MapExpr::inverse_cayley()),
            "const" => {
                let c = self.complex()?;
                MapExpr::constant(c)
            }
            "scale" => {
                let c = self.complex()?;
                MapExpr::scale(c)
            }
            "shift" => {
                let c = self.complex()?;
                MapExpr::shift(c)
            }
            "mobius" => {
                let a = self.complex()?;
                self.comma()?;
                let b = self.complex()?;
                self.comma()?;
                let c = self.complex()?;
                self.comma()?;
                let d = self.complex()?;
                MobiusTransform::new(a, b, c, d).map(MapExpr::mobius)
            }
            "powerseries" => {
                let coeffs = self.list(Self::complex)?;
                MapExpr::power_series(coeffs)
            }
            "blaschke_disc" => {
                let zeros = self.list(Self::complex)?;
                MapExpr::blaschke_disc(zeros)
            }
            "blaschke_hp" => {
                let heights = self.list(Self::real_item)?;
                let signs = if self.is_sym(b',') {
                    self.bump();
                    self.list(Self::sign_item)?
                } else {
                    vec![1; heights.len()]
                };
                MapExpr::blaschke_half_plane(heights, signs)
            }
            other => return Err(err(pos, "function name", format!("unknown name `{other}`"))),
        };
        self.expect_sym(b')')?;
        built.map_err(|e| match e {
            Error::Construction(msg) => err(args_pos, format!("valid arguments for `{name}`"), msg),
            e => e,
        })
    }

    fn finish(&mut self) -> Result<()> {
        let t = self.peek();
        if t.tok == Tok::End {
            Ok(())
        } else {
            Err(err(t.pos, "end of input", t.describe()))
        }
    }
}

/// Parse a map expression.
pub fn parse(src: &str) -> Result<MapExpr> {
    check_source(src)?;
    let mut p = Parser { toks: lex(src)?, at: 0 };
    let e = p.expr()?;
    p.finish()?;
    Ok(e)
}

/// Parse a lone complex literal such as `0.3-0.2i`, `2i` or `-1`.
pub fn parse_complex(src: &str) -> Result<Complex64> {
    check_source(src)?;
    let mut p = Parser { toks: lex(src)?, at: 0 };
    let c = p.complex()?;
    p.finish()?;
    Ok(c)
}

fn real(x: f64) -> String {
    let a = x.abs();
    if a != 0.0 && !(1e-5..1e16).contains(&a) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

fn complex(c: Complex64) -> String {
    let sign = if c.im.is_sign_negative() { '-' } else { '+' };
    format!("{}{}{}i", real(c.re), sign, real(c.im.abs()))
}

fn list<T>(items: &[T], f: impl Fn(&T) -> String) -> String {
    format!("[{}]", items.iter().map(f).collect::<Vec<_>>().join(","))
}

fn is_product(e: &MapExpr) -> bool {
    matches!(e.kind(), MapKind::Product(..) | MapKind::Quotient(..))
}

fn paren(s: String, wrap: bool) -> String {
    if wrap {
        format!("({s})")
    } else {
        s
    }
}

/// Render `f` in the syntax accepted by [`parse`].
pub fn unparse(f: &MapExpr) -> String {
    match f.kind() {
        MapKind::Identity => "z()".into(),
        MapKind::Const(c) => format!("const({})", complex(*c)),
        MapKind::Scale(c) => format!("scale({})", complex(*c)),
        MapKind::Shift(c) => format!("shift({})", complex(*c)),
        MapKind::PowerSeries(a) => format!("powerseries({})", list(a, |c| complex(*c))),
        MapKind::Mobius(t) => {
            format!("mobius({},{},{},{})", complex(t.a), complex(t.b), complex(t.c), complex(t.d))
        }
        MapKind::Koebe => "koebe()".into(),
        MapKind::Exp => "exp()".into(),
        MapKind::Log => "log()".into(),
        MapKind::BlaschkeDisc(z) => format!("blaschke_disc({})", list(z, |c| complex(*c))),
        MapKind::BlaschkeHalfPlane { heights, signs } => {
            let h = list(heights, |y| real(*y));
            if signs.iter().all(|s| *s == 1) {
                format!("blaschke_hp({h})")
            } else {
                format!("blaschke_hp({h},{})", list(signs, |s| s.to_string()))
            }
        }
        MapKind::Cayley => "cayley()".into(),
        MapKind::InverseCayley => "inv_cayley()".into(),
        MapKind::Product(l, r) => format!("{} * {}", unparse(l), paren(unparse(r), is_product(r))),
        MapKind::Quotient(l, r) => format!("{} / {}", unparse(l), paren(unparse(r), is_product(r))),
        MapKind::Compose { outer, inner } => {
            let inner_wrap = is_product(inner) || matches!(inner.kind(), MapKind::Compose { .. });
            format!("{} . {}", paren(unparse(outer), is_product(outer)), paren(unparse(inner), inner_wrap))
        }
    }
}
