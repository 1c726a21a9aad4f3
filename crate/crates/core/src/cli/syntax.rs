//! The `.qpi` text format: lexer, parser and printer.

use std::fmt;

use thiserror::Error;

use crate::pi::{self, PiTerm, TypeExpr};

/// 1-based position in the source.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{pos}: {msg}")]
pub struct ParseError {
    pub pos: Pos,
    pub msg: String,
}

fn fail<T>(pos: Pos, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { pos, msg: msg.into() })
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Digit(char),
    Comment(String),
    Sym(&'static str),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Digit(c) => write!(f, "`{c}`"),
            Tok::Comment(_) => f.write_str("a comment"),
            Tok::Sym(s) => write!(f, "`{s}`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

// longest symbols first
const SYMBOLS: [&str; 14] = [">>>", "***", "~>", "(", ")", "[", "]", ",", ":", "=", ";", "+", "*", "-"];

fn lex(text: &str) -> Result<Vec<(Tok, Pos)>, ParseError> {
    let mut out = Vec::new();
    for (row, line) in text.lines().enumerate() {
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let pos = Pos { line: row + 1, col: i + 1 };
            let c = chars[i];
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            if c == '-' && chars.get(i + 1) == Some(&'-') {
                let body: String = chars[i + 2..].iter().collect();
                out.push((Tok::Comment(body.trim().to_string()), pos));
                break;
            }
            if c.is_ascii_alphabetic() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                    i += 1;
                }
                out.push((Tok::Ident(chars[start..i].iter().collect()), pos));
                continue;
            }
            if c == '0' || c == '1' {
                out.push((Tok::Digit(c), pos));
                i += 1;
                continue;
            }
            let rest: String = chars[i..].iter().take(3).collect();
            match SYMBOLS.iter().find(|s| rest.starts_with(**s)) {
                Some(&"-") | None => return fail(pos, format!("unexpected character `{c}`")),
                Some(s) => {
                    out.push((Tok::Sym(s), pos));
                    i += s.chars().count();
                }
            }
        }
    }
    let end = Pos { line: text.lines().count().max(1), col: text.lines().last().map_or(1, |l| l.chars().count() + 1) };
    out.push((Tok::Eof, end));
    Ok(out)
}

/// Term-level constants.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Prim {
    Zero,
    AssertZero,
    Id,
    SwapT,
    AssoclT,
    AssocrT,
    UnitelT,
    UnitilT,
    MeasureZ,
    MeasureP,
    Discard,
    Fst,
    Snd,
}

impl Prim {
    const ALL: [(&'static str, Prim); 13] = [
        ("zero", Prim::Zero),
        ("assertZero", Prim::AssertZero),
        ("id", Prim::Id),
        ("swapT", Prim::SwapT),
        ("assoclT", Prim::AssoclT),
        ("assocrT", Prim::AssocrT),
        ("unitelT", Prim::UnitelT),
        ("unitilT", Prim::UnitilT),
        ("measureZ", Prim::MeasureZ),
        ("measureP", Prim::MeasureP),
        ("discard", Prim::Discard),
        ("fst", Prim::Fst),
        ("snd", Prim::Snd),
    ];

    fn from_keyword(s: &str) -> Option<Prim> {
        Self::ALL.iter().find(|(k, _)| *k == s).map(|(_, p)| *p)
    }

    pub fn keyword(self) -> &'static str {
        Self::ALL.iter().find(|(_, p)| *p == self).map(|(k, _)| *k).expect("every primitive has a keyword")
    }
}

/// Which copy of the core language an `arr` draws from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Copy {
    Z,
    P,
}

/// A core term with the source span of every subterm, for error reporting.
#[derive(Debug, Clone, PartialEq)]
pub struct PiNode {
    pub term: PiTerm,
    pub pos: Pos,
    pub children: Vec<PiNode>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExprKind {
    Arr(Copy, PiNode),
    Lift(TypeExpr, TypeExpr, Box<Expr>),
    Seq(Box<Expr>, Box<Expr>),
    Prod(Box<Expr>, Box<Expr>),
    First(TypeExpr, Box<Expr>),
    Second(TypeExpr, Box<Expr>),
    Inv(Box<Expr>),
    Prim(Prim),
    Name(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Expr {
    pub kind: ExprKind,
    pub pos: Pos,
}

/// `b1 ~> b2`
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Signature {
    pub domain: TypeExpr,
    pub codomain: TypeExpr,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Definition {
    pub name: String,
    pub doc: Vec<String>,
    pub signature: Option<Signature>,
    pub body: Expr,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SourceFile {
    pub definitions: Vec<Definition>,
    pub main: Option<Definition>,
}

impl SourceFile {
    pub fn get(&self, name: &str) -> Option<&Definition> {
        self.definitions.iter().chain(self.main.as_ref()).find(|d| d.name == name)
    }
}

const PI_ATOMS: [(&str, fn() -> PiTerm); 14] = [
    ("id", || PiTerm::Id),
    ("swapP", || PiTerm::SwapPlus),
    ("assoclP", || PiTerm::AssoclPlus),
    ("assocrP", || PiTerm::AssocrPlus),
    ("unitelP", || PiTerm::UnitePlus),
    ("unitilP", || PiTerm::UnitiPlus),
    ("swapT", || PiTerm::SwapTimes),
    ("assoclT", || PiTerm::AssoclTimes),
    ("assocrT", || PiTerm::AssocrTimes),
    ("unitelT", || PiTerm::UniteTimes),
    ("unitilT", || PiTerm::UnitiTimes),
    ("dist", || PiTerm::Dist),
    ("factor", || PiTerm::Factor),
    ("absorbl", || PiTerm::Absorbl),
];

const RESERVED: [&str; 12] = ["def", "main", "arrZ", "arrP", "lift", "first", "second", "inv", "ctrl", "factorzr", "qubit", "pi"];

fn is_reserved(s: &str) -> bool {
    RESERVED.contains(&s) || Prim::from_keyword(s).is_some() || PI_ATOMS.iter().any(|(k, _)| *k == s)
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

impl Parser {
    // index of the next token that is not a comment
    fn look(&self) -> usize {
        let mut i = self.at;
        while matches!(self.toks[i].0, Tok::Comment(_)) {
            i += 1;
        }
        i
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.look()].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.look()].1
    }

    fn bump(&mut self) -> (Tok, Pos) {
        let i = self.look();
        self.at = (i + 1).min(self.toks.len() - 1);
        self.toks[i].clone()
    }

    fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Sym(t) if *t == s)
    }

    fn expect_sym(&mut self, s: &str) -> Result<Pos, ParseError> {
        if self.is_sym(s) {
            Ok(self.bump().1)
        } else {
            fail(self.pos(), format!("expected `{s}`, found {}", self.peek()))
        }
    }

    fn file(&mut self) -> Result<SourceFile, ParseError> {
        let mut file = SourceFile::default();
        let mut doc = Vec::new();
        loop {
            match self.toks[self.at].0.clone() {
                Tok::Eof => return Ok(file),
                Tok::Comment(c) => {
                    doc.push(c);
                    self.at += 1;
                }
                Tok::Ident(k) if k == "def" || k == "main" => {
                    let def = self.definition(std::mem::take(&mut doc))?;
                    if file.get(&def.name).is_some() {
                        return fail(def.pos, format!("`{}` is defined twice", def.name));
                    }
                    if def.name == "main" {
                        file.main = Some(def);
                    } else {
                        file.definitions.push(def);
                    }
                }
                t => return fail(self.pos(), format!("expected `def` or `main`, found {t}")),
            }
        }
    }

    fn definition(&mut self, doc: Vec<String>) -> Result<Definition, ParseError> {
        let (head, pos) = self.bump();
        let name = match head {
            Tok::Ident(k) if k == "main" => "main".to_string(),
            _ => {
                let npos = self.pos();
                match self.bump().0 {
                    Tok::Ident(n) if !is_reserved(&n) => n,
                    Tok::Ident(n) => return fail(npos, format!("`{n}` is a keyword and cannot be defined")),
                    t => return fail(npos, format!("expected a name after `def`, found {t}")),
                }
            }
        };
        let signature = if self.is_sym(":") {
            self.bump();
            let domain = self.ty()?;
            self.expect_sym("~>")?;
            let codomain = self.ty()?;
            Some(Signature { domain, codomain })
        } else {
            None
        };
        self.expect_sym("=")?;
        let body = self.term()?;
        match self.peek() {
            Tok::Eof => {}
            Tok::Ident(k) if k == "def" || k == "main" => {}
            t => return fail(self.pos(), format!("unexpected {t} after the definition of `{name}`")),
        }
        Ok(Definition { name, doc, signature, body, pos })
    }

    fn ty(&mut self) -> Result<TypeExpr, ParseError> {
        let mut t = self.ty_prod()?;
        while self.is_sym("+") {
            self.bump();
            t = TypeExpr::sum(t, self.ty_prod()?);
        }
        Ok(t)
    }

    fn ty_prod(&mut self) -> Result<TypeExpr, ParseError> {
        let mut t = self.ty_atom()?;
        while self.is_sym("*") {
            self.bump();
            t = TypeExpr::prod(t, self.ty_atom()?);
        }
        Ok(t)
    }

    fn ty_atom(&mut self) -> Result<TypeExpr, ParseError> {
        let pos = self.pos();
        match self.bump().0 {
            Tok::Digit('0') => Ok(TypeExpr::Zero),
            Tok::Digit(_) => Ok(TypeExpr::One),
            Tok::Ident(k) if k == "qubit" => Ok(TypeExpr::qubit()),
            Tok::Sym("(") => {
                let t = self.ty()?;
                self.expect_sym(")")?;
                Ok(t)
            }
            t => fail(pos, format!("expected a type, found {t}")),
        }
    }

    fn bracket_type(&mut self) -> Result<TypeExpr, ParseError> {
        self.expect_sym("[")?;
        let t = self.ty()?;
        self.expect_sym("]")?;
        Ok(t)
    }

    fn pi_binary(&mut self, op: &str, next: fn(&mut Self) -> Result<PiNode, ParseError>, build: fn(PiTerm, PiTerm) -> PiTerm) -> Result<PiNode, ParseError> {
        let mut left = next(self)?;
        while self.is_sym(op) {
            self.bump();
            let right = next(self)?;
            let pos = left.pos;
            left = PiNode { term: build(left.term.clone(), right.term.clone()), pos, children: vec![left, right] };
        }
        Ok(left)
    }

    fn pi(&mut self) -> Result<PiNode, ParseError> {
        self.pi_binary(";", Self::pi_sum, PiTerm::seq)
    }

    fn pi_sum(&mut self) -> Result<PiNode, ParseError> {
        self.pi_binary("+", Self::pi_prod, PiTerm::sum)
    }

    fn pi_prod(&mut self) -> Result<PiNode, ParseError> {
        self.pi_binary("*", Self::pi_prefix, PiTerm::product)
    }

    fn pi_prefix(&mut self) -> Result<PiNode, ParseError> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Ident(k) if k == "ctrl" || k == "inv" => {
                self.bump();
                let inner = self.pi_prefix()?;
                let term = if k == "ctrl" { pi::ctrl(inner.term.clone()) } else { PiTerm::inv(inner.term.clone()) };
                Ok(PiNode { term, pos, children: vec![inner] })
            }
            Tok::Ident(k) if k == "factorzr" => {
                self.bump();
                let b = self.bracket_type()?;
                Ok(PiNode { term: PiTerm::Factorzr(b), pos, children: vec![] })
            }
            Tok::Ident(k) => match PI_ATOMS.iter().find(|(name, _)| *name == k) {
                Some((_, make)) => {
                    self.bump();
                    Ok(PiNode { term: make(), pos, children: vec![] })
                }
                None => fail(pos, format!("`{k}` is not a combinator of the reversible core")),
            },
            Tok::Sym("(") => {
                self.bump();
                let inner = self.pi()?;
                self.expect_sym(")")?;
                Ok(inner)
            }
            t => fail(pos, format!("expected a core combinator, found {t}")),
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut left = self.term_prod()?;
        while self.is_sym(">>>") {
            self.bump();
            let right = self.term_prod()?;
            let pos = left.pos;
            left = Expr { kind: ExprKind::Seq(Box::new(left), Box::new(right)), pos };
        }
        Ok(left)
    }

    fn term_prod(&mut self) -> Result<Expr, ParseError> {
        let mut left = self.term_prefix()?;
        while self.is_sym("***") {
            self.bump();
            let right = self.term_prefix()?;
            let pos = left.pos;
            left = Expr { kind: ExprKind::Prod(Box::new(left), Box::new(right)), pos };
        }
        Ok(left)
    }

    fn term_prefix(&mut self) -> Result<Expr, ParseError> {
        let pos = self.pos();
        let kind = match self.peek().clone() {
            Tok::Ident(k) => match k.as_str() {
                "arrZ" | "arrP" => {
                    self.bump();
                    let copy = if k == "arrZ" { Copy::Z } else { Copy::P };
                    ExprKind::Arr(copy, self.pi_prefix()?)
                }
                "first" | "second" => {
                    self.bump();
                    let s = self.bracket_type()?;
                    let body = Box::new(self.term_prefix()?);
                    if k == "first" {
                        ExprKind::First(s, body)
                    } else {
                        ExprKind::Second(s, body)
                    }
                }
                "inv" => {
                    self.bump();
                    ExprKind::Inv(Box::new(self.term_prefix()?))
                }
                "lift" => {
                    self.bump();
                    self.expect_sym("[")?;
                    let n1 = self.ty()?;
                    self.expect_sym(",")?;
                    let n2 = self.ty()?;
                    self.expect_sym("]")?;
                    ExprKind::Lift(n1, n2, Box::new(self.term_prefix()?))
                }
                "def" | "main" => return fail(pos, format!("expected a term, found `{k}`")),
                _ => {
                    self.bump();
                    if let Some(p) = Prim::from_keyword(&k) {
                        ExprKind::Prim(p)
                    } else if PI_ATOMS.iter().any(|(n, _)| *n == k) || k == "ctrl" || k == "factorzr" {
                        return fail(pos, format!("`{k}` is a core combinator; lift it with `arrZ` or `arrP`"));
                    } else if is_reserved(&k) {
                        return fail(pos, format!("unexpected keyword `{k}`"));
                    } else {
                        ExprKind::Name(k)
                    }
                }
            },
            Tok::Sym("(") => {
                self.bump();
                let inner = self.term()?;
                self.expect_sym(")")?;
                return Ok(inner);
            }
            t => return fail(pos, format!("expected a term, found {t}")),
        };
        Ok(Expr { kind, pos })
    }
}

pub fn parse(text: &str) -> Result<SourceFile, ParseError> {
    let toks = lex(text)?;
    Parser { toks, at: 0 }.file()
}

/// Parses a single term, as given on a command line.
pub fn parse_term(text: &str) -> Result<Expr, ParseError> {
    let mut p = Parser { toks: lex(text)?, at: 0 };
    let e = p.term()?;
    match p.peek() {
        Tok::Eof => Ok(e),
        t => fail(p.pos(), format!("unexpected {t} after the term")),
    }
}

pub fn parse_type(text: &str) -> Result<TypeExpr, ParseError> {
    let mut p = Parser { toks: lex(text)?, at: 0 };
    let t = p.ty()?;
    match p.peek() {
        Tok::Eof => Ok(t),
        t => fail(p.pos(), format!("unexpected {t} after the type")),
    }
}

impl Expr {
    // `>>>` = 1, `***` = 2, prefix forms = 3
    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, prec: u8) -> fmt::Result {
        let binary = |f: &mut fmt::Formatter<'_>, a: &Expr, op: &str, b: &Expr, level: u8| {
            let paren = prec > level;
            if paren {
                f.write_str("(")?;
            }
            a.fmt_prec(f, level)?;
            write!(f, " {op} ")?;
            b.fmt_prec(f, level + 1)?;
            if paren {
                f.write_str(")")?;
            }
            Ok(())
        };
        match &self.kind {
            ExprKind::Arr(copy, c) => {
                let head = match copy {
                    Copy::Z => "arrZ",
                    Copy::P => "arrP",
                };
                if c.term.is_primitive() {
                    write!(f, "{head} {}", c.term)
                } else {
                    write!(f, "{head} ({})", c.term)
                }
            }
            ExprKind::Lift(n1, n2, body) => {
                write!(f, "lift [{n1}, {n2}] ")?;
                body.fmt_prec(f, 3)
            }
            ExprKind::Seq(a, b) => binary(f, a, ">>>", b, 1),
            ExprKind::Prod(a, b) => binary(f, a, "***", b, 2),
            ExprKind::First(s, d) => {
                write!(f, "first [{s}] ")?;
                d.fmt_prec(f, 3)
            }
            ExprKind::Second(s, d) => {
                write!(f, "second [{s}] ")?;
                d.fmt_prec(f, 3)
            }
            ExprKind::Inv(d) => {
                f.write_str("inv ")?;
                d.fmt_prec(f, 3)
            }
            ExprKind::Prim(p) => f.write_str(p.keyword()),
            ExprKind::Name(n) => f.write_str(n),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

impl fmt::Display for Definition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for line in &self.doc {
            writeln!(f, "-- {line}")?;
        }
        if self.name == "main" {
            f.write_str("main")?;
        } else {
            write!(f, "def {}", self.name)?;
        }
        if let Some(sig) = &self.signature {
            write!(f, " : {} ~> {}", sig.domain, sig.codomain)?;
        }
        write!(f, " = {}", self.body)
    }
}

impl fmt::Display for SourceFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let all: Vec<&Definition> = self.definitions.iter().chain(self.main.as_ref()).collect();
        for (i, d) in all.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            writeln!(f, "{d}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn body(src: &str) -> Expr {
        parse(src).unwrap().definitions.remove(0).body
    }

    #[test]
    fn hadamard_definition() {
        let e = body("def h = arrP swapP");
        assert!(matches!(e.kind, ExprKind::Arr(Copy::P, PiNode { term: PiTerm::SwapPlus, .. })));
    }

    #[test]
    fn ctrl_parses_to_the_derived_form() {
        let e = body("def cx = arrZ (ctrl swapP)");
        match e.kind {
            ExprKind::Arr(Copy::Z, c) => assert_eq!(c.term, pi::cx()),
            k => panic!("{k:?}"),
        }
    }

    #[test]
    fn precedence_and_associativity() {
        let e = body("def t = id >>> swapT *** id >>> inv first [qubit] id");
        assert_eq!(e.to_string(), "id >>> swapT *** id >>> inv first [qubit] id");
        match e.kind {
            ExprKind::Seq(a, _) => assert!(matches!(a.kind, ExprKind::Seq(..))),
            k => panic!("{k:?}"),
        }
        let t = parse_type("qubit * qubit + 1 * (qubit * qubit)").unwrap();
        assert_eq!(t.to_string(), "qubit * qubit + 1 * (qubit * qubit)");
    }

    #[test]
    fn docs_and_signature() {
        let f = parse("-- the hadamard gate\n-- second line\ndef h : qubit ~> qubit = arrP swapP\n\nmain = h >>> h\n").unwrap();
        assert_eq!(f.definitions[0].doc, vec!["the hadamard gate", "second line"]);
        assert_eq!(f.definitions[0].signature.as_ref().unwrap().domain, TypeExpr::qubit());
        assert!(f.main.is_some());
        let printed = f.to_string();
        assert_eq!(parse(&printed).unwrap().to_string(), printed);
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse("def h = arrP swapP\ndef x = arrZ (swapP ;)").unwrap_err();
        assert_eq!(e.pos, Pos { line: 2, col: 22 });
        let e = parse("def h = dist").unwrap_err();
        assert_eq!(e.pos, Pos { line: 1, col: 9 });
        assert!(e.msg.contains("arrZ"));
        let e = parse("def h = arrP swapP\ndef h = id").unwrap_err();
        assert!(e.msg.contains("twice"));
        assert!(parse("def x = arrZ swapP $").is_err());
    }

    #[test]
    fn lift_and_factorzr() {
        let e = body("def l = lift [qubit, 1] (swapT >>> arrZ (factorzr [qubit] ; id))");
        assert_eq!(e.to_string(), "lift [qubit, 1] (swapT >>> arrZ (factorzr [qubit] ; id))");
    }
}
