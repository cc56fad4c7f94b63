use super::{CmpOp, DependencyAtom, Formula, Literal, TeamFormula, Vocabulary};
use crate::error::{Error, Result};

const KEYWORDS: &[&str] = &["forall", "exists", "bot", "top", "dep", "indep", "inc"];

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Semi,
    Dot,
    Amp,
    Pipe,
    Bang,
    Eq,
    Neq,
    Le,
    Nle,
    Arrow,
    DArrow,
    End,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let rest = &text[i..];
        let (tok, len) = if c.is_ascii_alphabetic() || c == b'_' {
            let len = rest
                .find(|ch: char| !(ch.is_ascii_alphanumeric() || ch == '_'))
                .unwrap_or(rest.len());
            (Tok::Ident(rest[..len].to_string()), len)
        } else if rest.starts_with("!<=") {
            (Tok::Nle, 3)
        } else if rest.starts_with("!=") {
            (Tok::Neq, 2)
        } else if rest.starts_with("<->") {
            (Tok::DArrow, 3)
        } else if rest.starts_with("<=") {
            (Tok::Le, 2)
        } else if rest.starts_with("->") {
            (Tok::Arrow, 2)
        } else {
            let t = match c {
                b'(' => Tok::LParen,
                b')' => Tok::RParen,
                b',' => Tok::Comma,
                b';' => Tok::Semi,
                b'.' => Tok::Dot,
                b'&' => Tok::Amp,
                b'|' => Tok::Pipe,
                b'!' => Tok::Bang,
                b'=' => Tok::Eq,
                _ => {
                    return Err(Error::Syntax {
                        position: start,
                        expected: "a token".into(),
                    })
                }
            };
            (t, 1)
        };
        out.push((tok, start));
        i += len;
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

#[derive(Debug, Clone)]
enum Ast {
    Lit(Literal),
    Atom(DependencyAtom),
    Bot,
    Top,
    And(Box<Ast>, Box<Ast>),
    Or(Box<Ast>, Box<Ast>),
    Not(Box<Ast>),
    Exists(String, Box<Ast>),
    Forall(String, Box<Ast>),
    Cmp(Box<Ast>, CmpOp, Box<Ast>),
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    team: bool,
    vocab: Option<&'a Vocabulary>,
}

impl<'a> Parser<'a> {
    fn new(text: &str, team: bool, vocab: Option<&'a Vocabulary>) -> Result<Self> {
        Ok(Parser {
            toks: lex(text)?,
            pos: 0,
            team,
            vocab,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[i].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn fail<T>(&self, expected: &str) -> Result<T> {
        Err(Error::Syntax {
            position: self.offset(),
            expected: expected.to_string(),
        })
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.fail(what)
        }
    }

    fn variable(&mut self) -> Result<String> {
        match self.peek().clone() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                self.bump();
                Ok(s)
            }
            _ => self.fail("variable"),
        }
    }

    fn finish(&mut self) -> Result<()> {
        if *self.peek() == Tok::End {
            Ok(())
        } else {
            self.fail("end of input")
        }
    }

    fn formula(&mut self) -> Result<Ast> {
        let lhs = self.implication()?;
        if self.team {
            return Ok(lhs);
        }
        let op = match self.peek() {
            Tok::Eq => CmpOp::Eq,
            Tok::Neq => CmpOp::Neq,
            Tok::Le => CmpOp::Le,
            Tok::Nle => CmpOp::Nle,
            _ => return Ok(lhs),
        };
        self.bump();
        let rhs = self.implication()?;
        Ok(Ast::Cmp(Box::new(lhs), op, Box::new(rhs)))
    }

    fn implication(&mut self) -> Result<Ast> {
        let lhs = self.disjunction()?;
        if self.team {
            return Ok(lhs);
        }
        match self.peek() {
            Tok::Arrow => {
                self.bump();
                let rhs = self.implication()?;
                Ok(Ast::Or(Box::new(Ast::Not(Box::new(lhs))), Box::new(rhs)))
            }
            Tok::DArrow => {
                self.bump();
                let rhs = self.disjunction()?;
                let forward = Ast::Or(Box::new(Ast::Not(Box::new(lhs.clone()))), Box::new(rhs.clone()));
                let backward = Ast::Or(Box::new(Ast::Not(Box::new(rhs))), Box::new(lhs));
                Ok(Ast::And(Box::new(forward), Box::new(backward)))
            }
            _ => Ok(lhs),
        }
    }

    fn disjunction(&mut self) -> Result<Ast> {
        let mut acc = self.conjunction()?;
        while *self.peek() == Tok::Pipe {
            self.bump();
            let rhs = self.conjunction()?;
            acc = Ast::Or(Box::new(acc), Box::new(rhs));
        }
        Ok(acc)
    }

    fn conjunction(&mut self) -> Result<Ast> {
        let mut acc = self.unary()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            let rhs = self.unary()?;
            acc = Ast::And(Box::new(acc), Box::new(rhs));
        }
        Ok(acc)
    }

    fn starts_literal(&self) -> bool {
        match self.peek() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                matches!(self.peek_at(1), Tok::LParen | Tok::Eq | Tok::Neq)
            }
            _ => false,
        }
    }

    fn unary(&mut self) -> Result<Ast> {
        match self.peek().clone() {
            Tok::Bang => {
                self.bump();
                if self.starts_literal() {
                    return Ok(Ast::Lit(self.literal()?.negated()));
                }
                if self.team {
                    return self.fail("literal after '!'");
                }
                Ok(Ast::Not(Box::new(self.unary()?)))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.formula()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(inner)
            }
            Tok::Ident(s) => match s.as_str() {
                "forall" | "exists" => self.quantifier(),
                "bot" | "top" if !self.team => {
                    self.bump();
                    Ok(if s == "bot" { Ast::Bot } else { Ast::Top })
                }
                "dep" | "indep" | "inc" if self.team => Ok(Ast::Atom(self.dependency_atom()?)),
                _ if self.starts_literal() => Ok(Ast::Lit(self.literal()?)),
                _ if KEYWORDS.contains(&s.as_str()) => self.fail("formula"),
                _ => {
                    self.bump();
                    self.fail("'(' or '='")
                }
            },
            _ => self.fail("formula"),
        }
    }

    fn quantifier(&mut self) -> Result<Ast> {
        let universal = matches!(self.bump(), Tok::Ident(ref s) if s == "forall");
        let mut vars = vec![self.variable()?];
        while *self.peek() == Tok::Comma {
            self.bump();
            vars.push(self.variable()?);
        }
        self.expect(Tok::Dot, "'.'")?;
        let body = self.formula()?;
        Ok(vars.into_iter().rev().fold(body, |acc, v| {
            if universal {
                Ast::Forall(v, Box::new(acc))
            } else {
                Ast::Exists(v, Box::new(acc))
            }
        }))
    }

    fn literal(&mut self) -> Result<Literal> {
        let name = self.variable()?;
        match self.bump() {
            Tok::LParen => {
                let args = self.var_list(&[Tok::RParen])?;
                self.expect(Tok::RParen, "')'")?;
                if let Some(v) = self.vocab {
                    v.check(&name, args.len())?;
                }
                Ok(Literal::Rel {
                    name,
                    args,
                    negated: false,
                })
            }
            t @ (Tok::Eq | Tok::Neq) => {
                let right = self.variable()?;
                Ok(Literal::Eq {
                    left: name,
                    right,
                    negated: t == Tok::Neq,
                })
            }
            _ => unreachable!("checked by starts_literal"),
        }
    }

    /// A possibly empty comma-separated variable list ending before one of
    /// `stops`.
    fn var_list(&mut self, stops: &[Tok]) -> Result<Vec<String>> {
        let mut vars = Vec::new();
        if stops.contains(self.peek()) {
            return Ok(vars);
        }
        vars.push(self.variable()?);
        while *self.peek() == Tok::Comma {
            self.bump();
            vars.push(self.variable()?);
        }
        Ok(vars)
    }

    fn dependency_atom(&mut self) -> Result<DependencyAtom> {
        let Tok::Ident(kind) = self.bump() else {
            unreachable!()
        };
        self.expect(Tok::LParen, "'('")?;
        let mut blocks = vec![self.var_list(&[Tok::Semi, Tok::RParen])?];
        while *self.peek() == Tok::Semi {
            self.bump();
            blocks.push(self.var_list(&[Tok::Semi, Tok::RParen])?);
        }
        let close = self.offset();
        self.expect(Tok::RParen, "';' or ')'")?;
        let arity_error = |want: &str| Error::Syntax {
            position: close,
            expected: want.to_string(),
        };
        match (kind.as_str(), blocks.len()) {
            ("dep", 2) => {
                let to = blocks.pop().unwrap();
                let from = blocks.pop().unwrap();
                Ok(DependencyAtom::Dep { from, to })
            }
            ("indep", 2 | 3) => {
                let right = blocks.pop().unwrap();
                let left = blocks.pop().unwrap();
                let given = blocks.pop().unwrap_or_default();
                Ok(DependencyAtom::Indep { given, left, right })
            }
            ("inc", 2) => {
                let sup = blocks.pop().unwrap();
                let sub = blocks.pop().unwrap();
                if sub.len() != sup.len() {
                    return Err(Error::LengthMismatch(format!(
                        "inclusion atom needs equal tuple lengths, got {} and {}",
                        sub.len(),
                        sup.len()
                    )));
                }
                Ok(DependencyAtom::Inc { sub, sup })
            }
            ("dep", _) | ("inc", _) => Err(arity_error("two ';'-separated blocks")),
            _ => Err(arity_error("two or three ';'-separated blocks")),
        }
    }
}

impl Ast {
    fn into_fo(self) -> Formula {
        match self {
            Ast::Lit(l) => l.into_formula(),
            Ast::Atom(_) => unreachable!("atoms are rejected outside team formulae"),
            Ast::Bot => Formula::Bot,
            Ast::Top => Formula::Top,
            Ast::And(a, b) => Formula::and(a.into_fo(), b.into_fo()),
            Ast::Or(a, b) => Formula::or(a.into_fo(), b.into_fo()),
            Ast::Not(a) => Formula::not(a.into_fo()),
            Ast::Exists(x, a) => Formula::Exists(x, Box::new(a.into_fo())),
            Ast::Forall(x, a) => Formula::Forall(x, Box::new(a.into_fo())),
            Ast::Cmp(a, op, b) => Formula::cmp(a.into_fo(), op, b.into_fo()),
        }
    }

    fn into_team(self) -> TeamFormula {
        match self {
            Ast::Lit(l) => TeamFormula::Lit(l),
            Ast::Atom(a) => TeamFormula::Atom(a),
            Ast::And(a, b) => TeamFormula::and(a.into_team(), b.into_team()),
            Ast::Or(a, b) => TeamFormula::or(a.into_team(), b.into_team()),
            Ast::Exists(x, a) => TeamFormula::Exists(x, Box::new(a.into_team())),
            Ast::Forall(x, a) => TeamFormula::Forall(x, Box::new(a.into_team())),
            Ast::Bot | Ast::Top | Ast::Not(_) | Ast::Cmp(..) => {
                unreachable!("rejected while parsing team formulae")
            }
        }
    }
}

/// Parses a first-order formula, possibly with formula comparisons.
///
/// Comparisons bind weaker than every connective, so `A & B = C & D`
/// compares the two conjunctions. Quantifiers extend as far right as
/// possible. `->` and `<->` are expanded into `!`, `|` and `&`.
pub fn parse_fo(text: &str, vocab: &Vocabulary) -> Result<Formula> {
    let mut p = Parser::new(text, false, Some(vocab))?;
    let ast = p.formula()?;
    p.finish()?;
    Ok(ast.into_fo())
}

/// Parses a team-logic formula in negation normal form with dependency
/// atoms. Negation is only allowed directly on literals.
pub fn parse_team(text: &str, vocab: &Vocabulary) -> Result<TeamFormula> {
    let mut p = Parser::new(text, true, Some(vocab))?;
    let ast = p.formula()?;
    p.finish()?;
    Ok(ast.into_team())
}

/// Parses a single atom: `dep(x;y)`, `indep(x;y;z)`, `inc(x;y)`, `T(x,y)`
/// or `!T(x,y)`. Relation symbols are not checked against a vocabulary.
pub fn parse_atom(text: &str) -> Result<DependencyAtom> {
    let mut p = Parser::new(text, true, None)?;
    let atom = p.single_atom()?;
    p.finish()?;
    Ok(atom)
}

/// Parses a comma-separated list of atoms.
pub fn parse_atoms(text: &str) -> Result<Vec<DependencyAtom>> {
    let mut p = Parser::new(text, true, None)?;
    let mut atoms = vec![p.single_atom()?];
    while *p.peek() == Tok::Comma {
        p.bump();
        atoms.push(p.single_atom()?);
    }
    p.finish()?;
    Ok(atoms)
}

impl Parser<'_> {
    fn single_atom(&mut self) -> Result<DependencyAtom> {
        match self.peek() {
            Tok::Ident(s) if matches!(s.as_str(), "dep" | "indep" | "inc") => self.dependency_atom(),
            Tok::Bang => {
                self.bump();
                if !self.starts_literal() {
                    return self.fail("literal after '!'");
                }
                Ok(DependencyAtom::Lit(self.literal()?.negated()))
            }
            _ if self.starts_literal() => Ok(DependencyAtom::Lit(self.literal()?)),
            _ => self.fail("atom"),
        }
    }
}
