use super::{ParseError, SourceSpan};

#[derive(Clone, Debug, PartialEq)]
pub enum Tok {
    Ident(String),
    /// Numeric literal kept as written; `-` is folded in when it directly
    /// precedes a digit.
    Number(String),
    Sym(&'static str),
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Number(s) => format!("number `{s}`"),
            Tok::Sym(s) => format!("`{s}`"),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Token {
    pub tok: Tok,
    pub span: SourceSpan,
}

// Longest first.
const SYMBOLS: [&str; 20] = [
    "==", ":=", "->", "<-", "{", "}", "(", ")", "[", "]", ";", ",", ":", ".", "!", "&", "|", "@",
    "=", "-",
];

pub fn tokenize(text: &str, file: &str, first_line: usize) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, first_line, 1usize);
    let span = |line, column, length| SourceSpan {
        file: file.to_string(),
        line,
        column,
        length,
    };

    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' || (c == '/' && chars.get(i + 1) == Some(&'/')) {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let start = i;
        let tok = if c.is_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            Tok::Ident(chars[start..i].iter().collect())
        } else if c.is_ascii_digit()
            || (c == '-' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit()))
        {
            i += 1;
            let digits = |i: &mut usize| {
                while *i < chars.len() && chars[*i].is_ascii_digit() {
                    *i += 1;
                }
            };
            digits(&mut i);
            if chars.get(i) == Some(&'.') && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit()) {
                i += 1;
                digits(&mut i);
            }
            if matches!(chars.get(i), Some('e' | 'E')) {
                let sign = usize::from(matches!(chars.get(i + 1), Some('+' | '-')));
                if chars.get(i + 1 + sign).is_some_and(|d| d.is_ascii_digit()) {
                    i += 1 + sign;
                    digits(&mut i);
                }
            }
            Tok::Number(chars[start..i].iter().collect())
        } else if let Some(sym) = SYMBOLS.iter().find(|s| {
            s.chars()
                .enumerate()
                .all(|(k, sc)| chars.get(i + k) == Some(&sc))
        }) {
            i += sym.chars().count();
            Tok::Sym(sym)
        } else {
            return Err(ParseError::new(
                span(line, col, 1),
                format!("unexpected character {c:?}"),
                vec![],
            ));
        };
        let len = i - start;
        out.push(Token {
            tok,
            span: span(line, col, len),
        });
        col += len;
    }
    out.push(Token {
        tok: Tok::Eof,
        span: span(line, col, 0),
    });
    Ok(out)
}

/// Cursor over a token stream with the usual one-token lookahead helpers.
pub struct Cursor {
    toks: Vec<Token>,
    pos: usize,
}

impl Cursor {
    pub fn new(toks: Vec<Token>) -> Self {
        Self { toks, pos: 0 }
    }

    pub fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    /// Last consumed token.
    pub fn previous(&self) -> &Token {
        &self.toks[self.pos.saturating_sub(1)]
    }

    pub fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    pub fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    pub fn at_sym(&self, s: &str) -> bool {
        matches!(&self.peek().tok, Tok::Sym(x) if *x == s)
    }

    pub fn at_ident(&self, s: &str) -> bool {
        matches!(&self.peek().tok, Tok::Ident(x) if x == s)
    }

    pub fn at_eof(&self) -> bool {
        self.peek().tok == Tok::Eof
    }

    pub fn error(&self, context: &str, expected: &[&str]) -> ParseError {
        let t = self.peek();
        let message = if expected.is_empty() {
            format!("{context}: unexpected {}", t.tok.describe())
        } else {
            format!(
                "{context}: expected {}, found {}",
                expected.join(" or "),
                t.tok.describe()
            )
        };
        ParseError::new(
            t.span.clone(),
            message,
            expected.iter().map(|s| s.to_string()).collect(),
        )
    }

    pub fn eat_sym(&mut self, s: &str) -> bool {
        if self.at_sym(s) {
            self.bump();
            true
        } else {
            false
        }
    }

    pub fn expect_sym(&mut self, s: &'static str, context: &str) -> Result<SourceSpan, ParseError> {
        if self.at_sym(s) {
            Ok(self.bump().span)
        } else {
            Err(self.error(context, &[&format!("`{s}`")]))
        }
    }

    pub fn expect_keyword(&mut self, kw: &str, context: &str) -> Result<SourceSpan, ParseError> {
        if self.at_ident(kw) {
            Ok(self.bump().span)
        } else {
            Err(self.error(context, &[&format!("`{kw}`")]))
        }
    }

    pub fn ident(&mut self, context: &str, what: &str) -> Result<(String, SourceSpan), ParseError> {
        match &self.peek().tok {
            Tok::Ident(s) => {
                let s = s.clone();
                Ok((s, self.bump().span))
            }
            _ => Err(self.error(context, &[what])),
        }
    }

    pub fn number(
        &mut self,
        context: &str,
        what: &str,
    ) -> Result<(String, SourceSpan), ParseError> {
        match &self.peek().tok {
            Tok::Number(s) => {
                let s = s.clone();
                Ok((s, self.bump().span))
            }
            _ => Err(self.error(context, &[what])),
        }
    }

    /// Non-negative integer literal.
    pub fn unsigned(&mut self, context: &str, what: &str) -> Result<(u32, SourceSpan), ParseError> {
        let (s, span) = self.number(context, what)?;
        match s.parse::<u32>() {
            Ok(v) => Ok((v, span)),
            Err(_) => Err(ParseError::new(
                span,
                format!("{context}: {what} must be a non-negative integer, found `{s}`"),
                vec![what.to_string()],
            )),
        }
    }

    pub fn expect_eof(&self, context: &str) -> Result<(), ParseError> {
        if self.at_eof() {
            Ok(())
        } else {
            Err(self.error(context, &["end of input"]))
        }
    }
}
