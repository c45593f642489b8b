use super::{KetExpr, Node, ParseError, ParseErrorKind};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Number(f64),
    Imag,
    Sqrt,
    /// Normalized label plus the byte offset of each label character.
    Ket(String, Vec<usize>),
    Plus,
    Minus,
    Star,
    Slash,
    LParen,
    RParen,
    End,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    start: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut tokens = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(start, ch)) = chars.peek() {
        let simple = match ch {
            c if c.is_whitespace() => {
                chars.next();
                continue;
            }
            '+' => Some(Tok::Plus),
            '-' | '\u{2212}' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(tok) = simple {
            chars.next();
            tokens.push(Token { tok, start });
            continue;
        }
        match ch {
            '|' => {
                chars.next();
                let mut label = String::new();
                let mut offsets = Vec::new();
                loop {
                    match chars.next() {
                        Some((_, '>' | '\u{27e9}')) => break,
                        Some((at, c @ ('0'..='9' | '+'))) => {
                            label.push(c);
                            offsets.push(at);
                        }
                        Some((at, '-' | '\u{2212}')) => {
                            label.push('-');
                            offsets.push(at);
                        }
                        Some((at, c)) => {
                            return Err(ParseError::syntax(at, format!("`{c}` is not a ket label character")))
                        }
                        None => return Err(ParseError::syntax(start, "unterminated ket")),
                    }
                }
                if label.is_empty() {
                    return Err(ParseError::syntax(start, "empty ket label"));
                }
                tokens.push(Token {
                    tok: Tok::Ket(label, offsets),
                    start,
                });
            }
            '0'..='9' | '.' => {
                let mut end = start;
                let mut seen_exp = false;
                let mut prev = ' ';
                while let Some(&(at, c)) = chars.peek() {
                    let take = c.is_ascii_digit()
                        || c == '.'
                        || (!seen_exp && (c == 'e' || c == 'E'))
                        || ((c == '+' || c == '-') && (prev == 'e' || prev == 'E'));
                    if !take {
                        break;
                    }
                    seen_exp |= c == 'e' || c == 'E';
                    prev = c;
                    end = at + c.len_utf8();
                    chars.next();
                }
                let literal = &text[start..end];
                let value: f64 = literal
                    .parse()
                    .map_err(|_| ParseError::syntax(start, format!("malformed number `{literal}`")))?;
                tokens.push(Token {
                    tok: Tok::Number(value),
                    start,
                });
            }
            'a'..='z' | 'A'..='Z' => {
                let mut end = start;
                while let Some(&(at, c)) = chars.peek() {
                    if !c.is_ascii_alphabetic() {
                        break;
                    }
                    end = at + 1;
                    chars.next();
                }
                let tok = match &text[start..end] {
                    "i" => Tok::Imag,
                    "sqrt" => Tok::Sqrt,
                    word => return Err(ParseError::syntax(start, format!("unknown word `{word}`"))),
                };
                tokens.push(Token { tok, start });
            }
            c => return Err(ParseError::syntax(start, format!("unexpected character `{c}`"))),
        }
    }
    // point end-of-input errors at the last visible character
    tokens.push(Token {
        tok: Tok::End,
        start: text.trim_end().len().saturating_sub(1),
    });
    Ok(tokens)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Scalar,
    Ket,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Alphabet {
    Digits(u32),
    Signs,
}

struct Parser<'t> {
    tokens: &'t [Token],
    pos: usize,
    width: Option<usize>,
    alphabet: Vec<Alphabet>,
}

impl<'t> Parser<'t> {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn bump(&mut self) -> &Token {
        let t = &self.tokens[self.pos];
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), ParseError> {
        let t = self.peek();
        if t.tok == want {
            self.bump();
            Ok(())
        } else {
            Err(ParseError::syntax(t.start, format!("expected {what}")))
        }
    }

    fn expr(&mut self) -> Result<(Node, Kind), ParseError> {
        let (mut node, kind) = self.term()?;
        loop {
            let t = self.peek().clone();
            let diff = match t.tok {
                Tok::Plus => false,
                Tok::Minus => true,
                _ => break,
            };
            self.bump();
            let (rhs, rk) = self.term()?;
            if rk != kind {
                return Err(ParseError::syntax(t.start, "cannot add a scalar and a ket"));
            }
            node = if diff {
                Node::Diff(Box::new(node), Box::new(rhs))
            } else {
                Node::Sum(Box::new(node), Box::new(rhs))
            };
        }
        Ok((node, kind))
    }

    fn term(&mut self) -> Result<(Node, Kind), ParseError> {
        let (mut node, mut kind) = self.factor()?;
        loop {
            let t = self.peek().clone();
            match t.tok {
                Tok::Slash => {
                    self.bump();
                    let at = self.peek().start;
                    let (rhs, rk) = self.factor()?;
                    if rk == Kind::Ket {
                        return Err(ParseError::syntax(at, "divisor must be a scalar"));
                    }
                    node = Node::Quotient(Box::new(node), Box::new(rhs));
                }
                Tok::Star | Tok::Number(_) | Tok::Imag | Tok::Sqrt | Tok::Ket(..) | Tok::LParen => {
                    if t.tok == Tok::Star {
                        self.bump();
                    }
                    let at = self.peek().start;
                    let (rhs, rk) = self.factor()?;
                    if kind == Kind::Ket && rk == Kind::Ket {
                        return Err(ParseError::syntax(
                            at,
                            "kets cannot be multiplied; write the joint label instead",
                        ));
                    }
                    if rk == Kind::Ket {
                        kind = Kind::Ket;
                    }
                    node = Node::Product(Box::new(node), Box::new(rhs));
                }
                _ => break,
            }
        }
        Ok((node, kind))
    }

    fn factor(&mut self) -> Result<(Node, Kind), ParseError> {
        let t = self.bump().clone();
        match t.tok {
            Tok::Number(v) => Ok((Node::Real(v), Kind::Scalar)),
            Tok::Imag => Ok((Node::Imag, Kind::Scalar)),
            Tok::Sqrt => {
                self.expect(Tok::LParen, "`(` after sqrt")?;
                let arg = self.peek().clone();
                let Tok::Number(v) = arg.tok else {
                    return Err(ParseError::syntax(
                        arg.start,
                        "sqrt takes a non-negative decimal literal",
                    ));
                };
                self.bump();
                self.expect(Tok::RParen, "`)` closing sqrt")?;
                Ok((Node::Sqrt(v), Kind::Scalar))
            }
            Tok::Ket(label, offsets) => {
                self.check_label(t.start, &label, &offsets)?;
                Ok((Node::Ket(label), Kind::Ket))
            }
            Tok::LParen => {
                let (inner, kind) = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok((Node::Group(Box::new(inner)), kind))
            }
            Tok::Minus => {
                let (inner, kind) = self.factor()?;
                Ok((Node::Neg(Box::new(inner)), kind))
            }
            Tok::End => Err(ParseError::syntax(t.start, "unexpected end of input")),
            _ => Err(ParseError::syntax(
                t.start,
                "expected a number, `i`, `sqrt`, a ket or `(`",
            )),
        }
    }

    fn check_label(&mut self, start: usize, label: &str, offsets: &[usize]) -> Result<(), ParseError> {
        let len = label.chars().count();
        match self.width {
            None => {
                self.width = Some(len);
                self.alphabet = label.chars().map(alphabet_of).collect();
                return Ok(());
            }
            Some(w) if w != len => {
                return Err(ParseError {
                    kind: ParseErrorKind::MixedLabelLength {
                        expected: w,
                        found: len,
                    },
                    offset: start,
                })
            }
            Some(_) => {}
        }
        for (position, (c, &at)) in label.chars().zip(offsets).enumerate() {
            match (self.alphabet[position], alphabet_of(c)) {
                (Alphabet::Digits(a), Alphabet::Digits(b)) => self.alphabet[position] = Alphabet::Digits(a.max(b)),
                (Alphabet::Signs, Alphabet::Signs) => {}
                _ => {
                    return Err(ParseError {
                        kind: ParseErrorKind::MixedAlphabet { position },
                        offset: at,
                    })
                }
            }
        }
        Ok(())
    }
}

fn alphabet_of(c: char) -> Alphabet {
    match c.to_digit(10) {
        Some(d) => Alphabet::Digits(d),
        None => Alphabet::Signs,
    }
}

/// Parses a ket expression; errors carry the byte offset of the offending token.
pub fn parse(text: &str) -> Result<KetExpr, ParseError> {
    let tokens = lex(text)?;
    let mut parser = Parser {
        tokens: &tokens,
        pos: 0,
        width: None,
        alphabet: Vec::new(),
    };
    let (root, kind) = parser.expr()?;
    let trailing = parser.peek();
    if trailing.tok != Tok::End {
        return Err(ParseError::syntax(trailing.start, "unexpected token"));
    }
    if kind != Kind::Ket {
        return Err(ParseError::syntax(tokens[0].start, "expression contains no ket"));
    }
    let dims = parser
        .alphabet
        .iter()
        .map(|a| match *a {
            Alphabet::Digits(max) => (max as usize + 1).max(2),
            Alphabet::Signs => 2,
        })
        .collect();
    Ok(KetExpr { root, dims })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ket(l: &str) -> Box<Node> {
        Box::new(Node::Ket(l.into()))
    }

    #[test]
    fn singlet_text() {
        let e = parse("(|+-> - |-+>)/sqrt(2)").unwrap();
        assert_eq!(
            e.root,
            Node::Quotient(
                Box::new(Node::Group(Box::new(Node::Diff(ket("+-"), ket("-+"))))),
                Box::new(Node::Sqrt(2.0))
            )
        );
        assert_eq!(e.dims, vec![2, 2]);
    }

    #[test]
    fn unicode_singlet_text() {
        let ascii = parse("(|+-> - |-+>)/sqrt(2)").unwrap();
        let fancy = parse("(|+−⟩ − |−+⟩)/sqrt(2)").unwrap();
        assert_eq!(ascii, fancy);
    }

    #[test]
    fn single_ket() {
        let e = parse("|00>").unwrap();
        assert_eq!(e.root, Node::Ket("00".into()));
    }

    #[test]
    fn scaled_sum() {
        let e = parse("0.6|01> + 0.8i|10>").unwrap();
        assert_eq!(
            e.root,
            Node::Sum(
                Box::new(Node::Product(Box::new(Node::Real(0.6)), ket("01"))),
                Box::new(Node::Product(
                    Box::new(Node::Product(Box::new(Node::Real(0.8)), Box::new(Node::Imag))),
                    ket("10")
                ))
            )
        );
    }

    #[test]
    fn digit_dims() {
        assert_eq!(parse("|02> + |10>").unwrap().dims, vec![2, 3]);
        assert_eq!(parse("|0>").unwrap().dims, vec![2]);
    }

    #[test]
    fn errors_carry_offsets() {
        let cases: &[(&str, usize)] = &[
            ("|00> + |1>", 7),
            ("|0+> + |-0>", 8),
            ("|0> |1>", 4),
            ("|0> + 2", 4),
            ("|0> / |1>", 6),
            ("(|0>", 3),
            ("|0> + x", 6),
            ("|0a>", 2),
            ("|01", 0),
            ("||0>", 1),
            ("sqrt(-2)|0>", 5),
            ("2 * 3", 0),
            ("|0> )", 4),
            ("1..2|0>", 0),
        ];
        for &(text, offset) in cases {
            let err = parse(text).unwrap_err();
            assert_eq!(err.offset, offset, "{text}: {err}");
            assert!(offset < text.len(), "{text}");
        }
        assert!(matches!(
            parse("|00> + |1>").unwrap_err().kind,
            ParseErrorKind::MixedLabelLength { expected: 2, found: 1 }
        ));
        assert!(matches!(
            parse("|0+> + |-0>").unwrap_err().kind,
            ParseErrorKind::MixedAlphabet { position: 0 }
        ));
    }

    #[test]
    fn exponent_literals() {
        assert_eq!(
            parse("1e-3|0>").unwrap().root,
            Node::Product(Box::new(Node::Real(1e-3)), ket("0"))
        );
    }
}
