use super::{ParseDiagnostic, Pos, SourceSpan};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    LBrace,
    RBrace,
    LParen,
    RParen,
    Comma,
    Semi,
    Colon,
    Dot,
    Tilde,
    Amp,
    Bar,
    Arrow,
    DoubleArrow,
    Equals,
    NotEquals,
    Plus,
    Star,
    Less,
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Eof => "end of input".to_string(),
            other => format!("`{}`", other.text()),
        }
    }

    fn text(&self) -> &'static str {
        match self {
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::Comma => ",",
            Tok::Semi => ";",
            Tok::Colon => ":",
            Tok::Dot => ".",
            Tok::Tilde => "~",
            Tok::Amp => "&",
            Tok::Bar => "|",
            Tok::Arrow => "->",
            Tok::DoubleArrow => "<->",
            Tok::Equals => "=",
            Tok::NotEquals => "!=",
            Tok::Plus => "+",
            Tok::Star => "*",
            Tok::Less => "<",
            Tok::Ident(_) | Tok::Eof => "",
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Token {
    pub tok: Tok,
    pub start: Pos,
    pub end: Pos,
}

pub(crate) fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

pub(crate) fn is_ident_continue(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

pub(crate) fn tokenize(text: &str, file: &str) -> Result<Vec<Token>, ParseDiagnostic> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    macro_rules! advance {
        ($n:expr) => {
            for _ in 0..$n {
                if chars[i] == '\n' {
                    line += 1;
                    col = 1;
                } else {
                    col += 1;
                }
                i += 1;
            }
        };
    }
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            advance!(1);
            continue;
        }
        if c == '/' && chars.get(i + 1) == Some(&'/') {
            while i < chars.len() && chars[i] != '\n' {
                advance!(1);
            }
            continue;
        }
        let start = Pos { line, column: col };
        let next = chars.get(i + 1).copied();
        let (tok, len) = if is_ident_start(c) {
            let mut j = i;
            while j < chars.len() && is_ident_continue(chars[j]) {
                j += 1;
            }
            (Tok::Ident(chars[i..j].iter().collect()), j - i)
        } else {
            match (c, next) {
                ('<', Some('-')) if chars.get(i + 2) == Some(&'>') => (Tok::DoubleArrow, 3),
                ('-', Some('>')) => (Tok::Arrow, 2),
                ('!', Some('=')) => (Tok::NotEquals, 2),
                ('{', _) => (Tok::LBrace, 1),
                ('}', _) => (Tok::RBrace, 1),
                ('(', _) => (Tok::LParen, 1),
                (')', _) => (Tok::RParen, 1),
                (',', _) => (Tok::Comma, 1),
                (';', _) => (Tok::Semi, 1),
                (':', _) => (Tok::Colon, 1),
                ('.', _) => (Tok::Dot, 1),
                ('~', _) => (Tok::Tilde, 1),
                ('&', _) => (Tok::Amp, 1),
                ('|', _) => (Tok::Bar, 1),
                ('=', _) => (Tok::Equals, 1),
                ('+', _) => (Tok::Plus, 1),
                ('*', _) => (Tok::Star, 1),
                ('<', _) => (Tok::Less, 1),
                ('¬', _) => (Tok::Tilde, 1),
                ('∧', _) => (Tok::Amp, 1),
                ('∨', _) => (Tok::Bar, 1),
                ('→', _) => (Tok::Arrow, 1),
                ('↔', _) => (Tok::DoubleArrow, 1),
                ('≠', _) => (Tok::NotEquals, 1),
                ('∀', _) => (Tok::Ident("forall".into()), 1),
                ('∃', _) => (Tok::Ident("exists".into()), 1),
                _ => {
                    return Err(ParseDiagnostic::error(
                        SourceSpan::new(file, start, Pos { line, column: col + 1 }),
                        format!("unexpected character `{c}`"),
                    ))
                }
            }
        };
        advance!(len);
        out.push(Token { tok, start, end: Pos { line, column: col } });
    }
    let end = Pos { line, column: col };
    out.push(Token { tok: Tok::Eof, start: end, end });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<Tok> {
        tokenize(s, "<t>").unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn longest_match_operators() {
        assert_eq!(
            toks("a <-> b -> c < d != e"),
            vec![
                Tok::Ident("a".into()),
                Tok::DoubleArrow,
                Tok::Ident("b".into()),
                Tok::Arrow,
                Tok::Ident("c".into()),
                Tok::Less,
                Tok::Ident("d".into()),
                Tok::NotEquals,
                Tok::Ident("e".into()),
                Tok::Eof
            ]
        );
    }

    #[test]
    fn primes_and_comments() {
        assert_eq!(toks("o' // comment\n x''"), vec![
            Tok::Ident("o'".into()),
            Tok::Ident("x''".into()),
            Tok::Eof
        ]);
    }

    #[test]
    fn positions_are_one_based() {
        let t = tokenize("ab\n  c", "<t>").unwrap();
        assert_eq!((t[1].start.line, t[1].start.column), (2, 3));
        assert_eq!((t[2].start.line, t[2].start.column), (2, 4));
    }

    #[test]
    fn unicode_connectives_are_aliases() {
        assert_eq!(toks("∀x. ¬P(x) ∧ Q ∨ R → S ↔ T"), toks("forall x. ~P(x) & Q | R -> S <-> T"));
        assert_eq!(toks("a ≠ b"), toks("a != b"));
    }

    #[test]
    fn rejects_stray_characters() {
        let err = tokenize("P(x) # q", "<t>").unwrap_err();
        assert_eq!(err.span.start.column, 6);
    }
}
