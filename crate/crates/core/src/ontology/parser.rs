//! Recursive-descent parser for the functional-syntax subset.
//!
//! Constructs outside the subset fail with [`ParseError::Unsupported`]. The
//! lenient entry point instead skips unsupported axioms and reports them, which
//! is what the lax syntax test and the report generator build on.

use std::collections::HashMap;

use thiserror::Error;

use super::model::{Axiom, ClassExpression, EntityKind, Ontology};
use crate::iri::{Iri, OWL_NS, RDFS_NS, RDF_NS, XSD_NS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at {line}:{column} near `{token}`: {message}")]
    Syntax {
        line: usize,
        column: usize,
        token: String,
        message: String,
    },
    #[error("unsupported construct `{construct}` at {line}:{column}")]
    Unsupported {
        construct: String,
        line: usize,
        column: usize,
    },
}

/// An axiom dropped by lenient parsing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkippedConstruct {
    /// Position of the axiom among all axiom-level items of the document.
    pub axiom_index: usize,
    pub construct: String,
    pub line: usize,
    pub column: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LenientParse {
    pub ontology: Ontology,
    pub skipped: Vec<SkippedConstruct>,
}

pub fn parse_ontology(text: &str) -> Result<Ontology, ParseError> {
    let tokens = lex(text)?;
    Parser::new(tokens, false).document().map(|p| p.ontology)
}

pub fn parse_ontology_lenient(text: &str) -> Result<LenientParse, ParseError> {
    let tokens = lex(text)?;
    Parser::new(tokens, true).document()
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Open,
    Close,
    Eq,
    FullIri(String),
    /// `prefix:local`, with an empty prefix for `:local`.
    Prefixed(String, String),
    Word(String),
    Literal(String),
    Eof,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

impl Token {
    fn text(&self) -> String {
        match &self.tok {
            Tok::Open => "(".into(),
            Tok::Close => ")".into(),
            Tok::Eq => "=".into(),
            Tok::FullIri(s) => format!("<{s}>"),
            Tok::Prefixed(p, l) => format!("{p}:{l}"),
            Tok::Word(w) => w.clone(),
            Tok::Literal(s) => format!("{s:?}"),
            Tok::Eof => "end of input".into(),
        }
    }
}

fn is_delim(c: char) -> bool {
    c.is_whitespace() || matches!(c, '(' | ')' | '<' | '>' | '"' | '=')
}

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut tokens = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);

    let err = |line, column, token: String, message: &str| ParseError::Syntax {
        line,
        column,
        token,
        message: message.to_string(),
    };

    while i < chars.len() {
        let c = chars[i];
        let (start_line, start_col) = (line, col);
        let advance = |i: &mut usize, line: &mut usize, col: &mut usize| {
            if chars[*i] == '\n' {
                *line += 1;
                *col = 1;
            } else {
                *col += 1;
            }
            *i += 1;
        };
        if c.is_whitespace() {
            advance(&mut i, &mut line, &mut col);
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                advance(&mut i, &mut line, &mut col);
            }
            continue;
        }
        let tok = match c {
            '(' => {
                advance(&mut i, &mut line, &mut col);
                Tok::Open
            }
            ')' => {
                advance(&mut i, &mut line, &mut col);
                Tok::Close
            }
            '=' => {
                advance(&mut i, &mut line, &mut col);
                Tok::Eq
            }
            '<' => {
                advance(&mut i, &mut line, &mut col);
                let mut s = String::new();
                loop {
                    match chars.get(i) {
                        None => return Err(err(start_line, start_col, format!("<{s}"), "unterminated IRI")),
                        Some('>') => {
                            advance(&mut i, &mut line, &mut col);
                            break;
                        }
                        Some(&ch) => {
                            s.push(ch);
                            advance(&mut i, &mut line, &mut col);
                        }
                    }
                }
                Tok::FullIri(s)
            }
            '"' => {
                advance(&mut i, &mut line, &mut col);
                let mut s = String::new();
                loop {
                    match chars.get(i) {
                        None => return Err(err(start_line, start_col, format!("\"{s}"), "unterminated literal")),
                        Some('"') => {
                            advance(&mut i, &mut line, &mut col);
                            break;
                        }
                        Some('\\') => {
                            advance(&mut i, &mut line, &mut col);
                            match chars.get(i) {
                                Some(&ch @ ('"' | '\\')) => s.push(ch),
                                Some('n') => s.push('\n'),
                                Some(&ch) => {
                                    return Err(err(line, col, format!("\\{ch}"), "invalid escape in literal"))
                                }
                                None => continue,
                            }
                            advance(&mut i, &mut line, &mut col);
                        }
                        Some(&ch) => {
                            s.push(ch);
                            advance(&mut i, &mut line, &mut col);
                        }
                    }
                }
                // language tag or datatype suffix carries no meaning here
                if chars.get(i) == Some(&'@') {
                    while i < chars.len() && !is_delim(chars[i]) {
                        advance(&mut i, &mut line, &mut col);
                    }
                } else if chars.get(i) == Some(&'^') && chars.get(i + 1) == Some(&'^') {
                    advance(&mut i, &mut line, &mut col);
                    advance(&mut i, &mut line, &mut col);
                    if chars.get(i) == Some(&'<') {
                        while i < chars.len() && chars[i] != '>' {
                            advance(&mut i, &mut line, &mut col);
                        }
                        if i < chars.len() {
                            advance(&mut i, &mut line, &mut col);
                        }
                    } else {
                        while i < chars.len() && !is_delim(chars[i]) {
                            advance(&mut i, &mut line, &mut col);
                        }
                    }
                }
                Tok::Literal(s)
            }
            '>' => return Err(err(line, col, ">".into(), "unexpected `>`")),
            _ => {
                let mut s = String::new();
                while i < chars.len() && !is_delim(chars[i]) {
                    s.push(chars[i]);
                    advance(&mut i, &mut line, &mut col);
                }
                match s.find(':') {
                    Some(idx) => Tok::Prefixed(s[..idx].to_string(), s[idx + 1..].to_string()),
                    None => Tok::Word(s),
                }
            }
        };
        tokens.push(Token {
            tok,
            line: start_line,
            column: start_col,
        });
    }
    tokens.push(Token {
        tok: Tok::Eof,
        line,
        column: col,
    });
    Ok(tokens)
}

/// Constructs recognized as annotation-only axioms; parsed and discarded.
const ANNOTATION_AXIOMS: &[&str] = &[
    "AnnotationAssertion",
    "SubAnnotationPropertyOf",
    "AnnotationPropertyDomain",
    "AnnotationPropertyRange",
];

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    prefixes: HashMap<String, String>,
    lenient: bool,
}

enum Item {
    Axiom(Axiom),
    Discarded,
}

impl Parser {
    fn new(tokens: Vec<Token>, lenient: bool) -> Self {
        let prefixes = [("owl", OWL_NS), ("rdf", RDF_NS), ("rdfs", RDFS_NS), ("xsd", XSD_NS)]
            .into_iter()
            .map(|(p, ns)| (p.to_string(), ns.to_string()))
            .collect();
        Parser {
            tokens,
            pos: 0,
            prefixes,
            lenient,
        }
    }

    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn peek_at(&self, offset: usize) -> &Token {
        let idx = (self.pos + offset).min(self.tokens.len() - 1);
        &self.tokens[idx]
    }

    fn next(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn syntax(&self, tok: &Token, message: impl Into<String>) -> ParseError {
        ParseError::Syntax {
            line: tok.line,
            column: tok.column,
            token: tok.text(),
            message: message.into(),
        }
    }

    fn unsupported(tok: &Token, construct: impl Into<String>) -> ParseError {
        ParseError::Unsupported {
            construct: construct.into(),
            line: tok.line,
            column: tok.column,
        }
    }

    fn expect_open(&mut self) -> Result<(), ParseError> {
        let t = self.next();
        if t.tok == Tok::Open {
            Ok(())
        } else {
            Err(self.syntax(&t, "expected `(`"))
        }
    }

    fn expect_close(&mut self) -> Result<(), ParseError> {
        let t = self.next();
        if t.tok == Tok::Close {
            Ok(())
        } else {
            Err(self.syntax(&t, "expected `)`"))
        }
    }

    fn word(&mut self) -> Result<(String, Token), ParseError> {
        let t = self.next();
        match &t.tok {
            Tok::Word(w) => Ok((w.clone(), t.clone())),
            _ => Err(self.syntax(&t, "expected a keyword")),
        }
    }

    /// Skips one balanced group starting at an opening keyword or parenthesis.
    fn skip_balanced(&mut self) -> Result<(), ParseError> {
        if matches!(self.peek().tok, Tok::Word(_)) && self.peek_at(1).tok == Tok::Open {
            self.next();
        }
        let t = self.next();
        if t.tok != Tok::Open {
            return Ok(());
        }
        let mut depth = 1;
        while depth > 0 {
            let t = self.next();
            match t.tok {
                Tok::Open => depth += 1,
                Tok::Close => depth -= 1,
                Tok::Eof => return Err(self.syntax(&t, "unbalanced parentheses")),
                _ => {}
            }
        }
        Ok(())
    }

    fn skip_annotations(&mut self) -> Result<(), ParseError> {
        while matches!(&self.peek().tok, Tok::Word(w) if w == "Annotation") {
            self.skip_balanced()?;
        }
        Ok(())
    }

    fn iri(&mut self) -> Result<Iri, ParseError> {
        let t = self.next();
        let value = match &t.tok {
            Tok::FullIri(s) => s.clone(),
            Tok::Prefixed(p, l) => match self.prefixes.get(p) {
                Some(ns) => format!("{ns}{l}"),
                None => return Err(self.syntax(&t, format!("undeclared prefix `{p}:`"))),
            },
            Tok::Word(w) if w.starts_with("_:") => return Err(Self::unsupported(&t, "anonymous individual")),
            _ => return Err(self.syntax(&t, "expected an IRI")),
        };
        Iri::new(value).map_err(|e| self.syntax(&t, e.to_string()))
    }

    fn document(mut self) -> Result<LenientParse, ParseError> {
        while matches!(&self.peek().tok, Tok::Word(w) if w == "Prefix") {
            self.prefix_decl()?;
        }
        let (kw, t) = self.word()?;
        if kw != "Ontology" {
            return Err(self.syntax(&t, "expected `Ontology`"));
        }
        self.expect_open()?;
        let mut onto = Ontology::default();
        if matches!(self.peek().tok, Tok::FullIri(_) | Tok::Prefixed(..)) {
            onto.iri = Some(self.iri()?);
            // version IRI is accepted and dropped
            if matches!(self.peek().tok, Tok::FullIri(_) | Tok::Prefixed(..)) {
                self.iri()?;
            }
        }
        let mut skipped = Vec::new();
        let mut axiom_index = 0usize;
        loop {
            let t = self.peek().clone();
            match &t.tok {
                Tok::Close => {
                    self.next();
                    break;
                }
                Tok::Eof => return Err(self.syntax(&t, "unterminated Ontology")),
                Tok::Word(w) if w == "Import" => {
                    self.next();
                    self.expect_open()?;
                    let iri = self.iri()?;
                    self.expect_close()?;
                    onto.add_import(iri);
                }
                Tok::Word(w) if w == "Annotation" => {
                    if let Some(comment) = self.header_annotation()? {
                        onto.description.get_or_insert(comment);
                    }
                }
                Tok::Word(_) => {
                    let start = self.pos;
                    match self.axiom() {
                        Ok(Item::Axiom(ax)) => onto.axioms.push(ax),
                        Ok(Item::Discarded) => {}
                        Err(ParseError::Unsupported {
                            construct,
                            line,
                            column,
                        }) if self.lenient => {
                            self.pos = start;
                            self.skip_balanced()?;
                            skipped.push(SkippedConstruct {
                                axiom_index,
                                construct,
                                line,
                                column,
                            });
                        }
                        Err(e) => return Err(e),
                    }
                    axiom_index += 1;
                }
                _ => return Err(self.syntax(&t, "expected an axiom, import, annotation or `)`")),
            }
        }
        let t = self.peek().clone();
        if t.tok != Tok::Eof {
            return Err(self.syntax(&t, "trailing content after Ontology"));
        }
        Ok(LenientParse {
            ontology: onto,
            skipped,
        })
    }

    fn prefix_decl(&mut self) -> Result<(), ParseError> {
        self.next();
        self.expect_open()?;
        let t = self.next();
        let name = match &t.tok {
            Tok::Prefixed(p, l) if l.is_empty() => p.clone(),
            _ => return Err(self.syntax(&t, "expected a prefix name such as `ex:`")),
        };
        let t = self.next();
        if t.tok != Tok::Eq {
            return Err(self.syntax(&t, "expected `=`"));
        }
        let t = self.next();
        let ns = match &t.tok {
            Tok::FullIri(s) => s.clone(),
            _ => return Err(self.syntax(&t, "expected a full IRI")),
        };
        self.expect_close()?;
        self.prefixes.insert(name, ns);
        Ok(())
    }

    /// Parses `Annotation(prop value)`; returns the value for `rdfs:comment`
    /// literals.
    fn header_annotation(&mut self) -> Result<Option<String>, ParseError> {
        self.next();
        self.expect_open()?;
        self.skip_annotations()?;
        let prop = self.iri()?;
        let t = self.next();
        let value = match t.tok {
            Tok::Literal(s) => Some(s),
            Tok::FullIri(_) | Tok::Prefixed(..) => None,
            _ => return Err(self.syntax(&t, "expected an annotation value")),
        };
        self.expect_close()?;
        Ok(value.filter(|_| prop.as_str() == format!("{RDFS_NS}comment")))
    }

    fn axiom(&mut self) -> Result<Item, ParseError> {
        let (kw, t) = self.word()?;
        if ANNOTATION_AXIOMS.contains(&kw.as_str()) {
            self.pos -= 1;
            self.skip_balanced()?;
            return Ok(Item::Discarded);
        }
        self.expect_open()?;
        self.skip_annotations()?;
        let item = match kw.as_str() {
            "Declaration" => {
                let (kind_kw, kt) = self.word()?;
                self.expect_open()?;
                let iri = self.iri()?;
                self.expect_close()?;
                let kind = match kind_kw.as_str() {
                    "Class" => Some(EntityKind::Class),
                    "ObjectProperty" => Some(EntityKind::ObjectProperty),
                    "DataProperty" => Some(EntityKind::DataProperty),
                    "NamedIndividual" => Some(EntityKind::NamedIndividual),
                    "AnnotationProperty" => None,
                    "Datatype" => return Err(Self::unsupported(&kt, "Declaration(Datatype)")),
                    _ => return Err(self.syntax(&kt, "unknown entity kind")),
                };
                match kind {
                    Some(kind) => Item::Axiom(Axiom::Declaration(kind, iri)),
                    None => Item::Discarded,
                }
            }
            "SubClassOf" => {
                let sub = self.class_expression()?;
                let sup = self.class_expression()?;
                Item::Axiom(Axiom::SubClassOf { sub, sup })
            }
            "EquivalentClasses" => {
                let a = self.class_expression()?;
                let b = self.class_expression()?;
                if self.peek().tok != Tok::Close {
                    return Err(Self::unsupported(&t, "EquivalentClasses with more than two operands"));
                }
                Item::Axiom(Axiom::EquivalentClasses(a, b))
            }
            "SubObjectPropertyOf" => {
                let sub = self.object_property()?;
                let sup = self.object_property()?;
                Item::Axiom(Axiom::SubObjectPropertyOf { sub, sup })
            }
            "ObjectPropertyDomain" => {
                let property = self.object_property()?;
                let domain = self.class_expression()?;
                Item::Axiom(Axiom::ObjectPropertyDomain { property, domain })
            }
            "ObjectPropertyRange" => {
                let property = self.object_property()?;
                let range = self.class_expression()?;
                Item::Axiom(Axiom::ObjectPropertyRange { property, range })
            }
            "DataPropertyDomain" => {
                let property = self.iri()?;
                let domain = self.class_expression()?;
                Item::Axiom(Axiom::DataPropertyDomain { property, domain })
            }
            "ClassAssertion" => {
                let class = self.class_expression()?;
                let individual = self.iri()?;
                Item::Axiom(Axiom::ClassAssertion { class, individual })
            }
            _ => return Err(Self::unsupported(&t, kw)),
        };
        self.expect_close()?;
        Ok(item)
    }

    fn object_property(&mut self) -> Result<Iri, ParseError> {
        if let Tok::Word(w) = &self.peek().tok {
            let t = self.peek().clone();
            return Err(Self::unsupported(&t, w.clone()));
        }
        self.iri()
    }

    fn class_expression(&mut self) -> Result<ClassExpression, ParseError> {
        let t = self.peek().clone();
        match &t.tok {
            Tok::FullIri(_) | Tok::Prefixed(..) => {
                let iri = self.iri()?;
                Ok(match iri.as_str().strip_prefix(OWL_NS) {
                    Some("Thing") => ClassExpression::Thing,
                    Some("Nothing") => ClassExpression::Nothing,
                    _ => ClassExpression::Named(iri),
                })
            }
            Tok::Word(w) => {
                let w = w.clone();
                self.next();
                match w.as_str() {
                    "ObjectIntersectionOf" => {
                        self.expect_open()?;
                        let mut ops = Vec::new();
                        while self.peek().tok != Tok::Close {
                            ops.push(self.class_expression()?);
                        }
                        self.expect_close()?;
                        if ops.len() < 2 {
                            return Err(self.syntax(&t, "ObjectIntersectionOf needs at least two operands"));
                        }
                        Ok(ClassExpression::intersection(ops))
                    }
                    "ObjectSomeValuesFrom" => {
                        self.expect_open()?;
                        let property = self.object_property()?;
                        let filler = self.class_expression()?;
                        self.expect_close()?;
                        Ok(ClassExpression::SomeValuesFrom {
                            property,
                            filler: Box::new(filler),
                        })
                    }
                    _ => Err(Self::unsupported(&t, w)),
                }
            }
            _ => Err(self.syntax(&t, "expected a class expression")),
        }
    }
}
