use super::SyntaxError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Int(i64),
    Str(String),
    Char(char),
    Ident(String),
    /// Operator or keyword, normalised to its canonical spelling.
    Sym(&'static str),
    Eof,
}

#[derive(Debug, Clone)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

/// (spelling, canonical symbol), longest spellings first within each prefix family.
const SYMBOLS: &[(&str, &str)] = &[
    ("<=>", "⇔"),
    ("<+>", "⊕"),
    ("<<:", "⊂"),
    ("<:", "⊆"),
    ("<=", "≤"),
    ("<>", "◇"),
    ("<", "<"),
    ("==>", "⟹"),
    ("=>", "⇒"),
    ("=", "="),
    (">>", "⟩⟩"),
    (">=", "≥"),
    (">", ">"),
    ("|->", "↦"),
    ("|>>", "⫢"),
    ("|", "|"),
    ("->>", "↣"),
    ("-", "-"),
    (":=", ":="),
    ("::", "•"),
    (":", ":"),
    ("[]", "⊓"),
    ("[=", "⊑"),
    ("/\\", "∩"),
    ("/=", "≠"),
    ("/", "/"),
    ("\\/", "∪"),
    ("\\", "∖"),
    ("!!", "⊥"),
    ("&", "∧"),
    ("$", "¢"),
    ("%", "∮"),
    ("~", "~"),
    ("*", "*"),
    ("+", "+"),
    (",", ","),
    ("'", "'"),
    (";", ";"),
    (".", "."),
    ("(", "("),
    (")", ")"),
    ("{", "{"),
    ("}", "}"),
    // unicode spellings
    ("⇔", "⇔"),
    ("⊕", "⊕"),
    ("⊂", "⊂"),
    ("⊆", "⊆"),
    ("≤", "≤"),
    ("◇", "◇"),
    ("⟹", "⟹"),
    ("⇒", "⇒"),
    ("⟩⟩", "⟩⟩"),
    ("≥", "≥"),
    ("↦", "↦"),
    ("⫢", "⫢"),
    ("↣", "↣"),
    ("•", "•"),
    ("⊓", "⊓"),
    ("⊑", "⊑"),
    ("∩", "∩"),
    ("≠", "≠"),
    ("∪", "∪"),
    ("∖", "∖"),
    ("⊥", "⊥"),
    ("∧", "∧"),
    ("∨", "∨"),
    ("¢", "¢"),
    ("∮", "∮"),
    ("¬", "¬"),
    ("∀", "∀"),
    ("∃", "∃"),
    ("∈", "∈"),
    ("∉", "∉"),
    ("λ", "λ"),
    ("Λ", "Λ"),
    ("ℙ", "ℙ"),
    ("×", "×"),
    ("÷", "/"),
    ("⊔", "⊔"),
    ("⊞", "⊞"),
    ("∇", "∇"),
    ("≜", "≜"),
    ("≡>", "≡>"),
    ("≡", "≡"),
    ("⟚", "⟚"),
];

const KEYWORDS: &[(&str, &str)] = &[
    ("and", "∧"),
    ("or", "∨"),
    ("not", "¬"),
    ("forall", "∀"),
    ("exists", "∃"),
    ("in", "∈"),
    ("notin", "∉"),
    ("lambda", "λ"),
    ("Lambda", "Λ"),
    ("pow", "ℙ"),
    ("mod", "mod"),
    ("improper", "⊥"),
    ("null", "null"),
    ("true", "true"),
    ("false", "false"),
    ("skip", "skip"),
    ("abort", "abort"),
    ("magic", "magic"),
    ("if", "if"),
    ("then", "then"),
    ("else", "else"),
    ("end", "end"),
    ("T", "T"),
    ("F", "F"),
];

pub fn is_keyword(s: &str) -> bool {
    KEYWORDS.iter().any(|(k, _)| *k == s)
}

pub fn lex(src: &str) -> Result<Vec<Token>, SyntaxError> {
    let mut out = Vec::new();
    let mut line = 1;
    let mut col = 1;
    let mut rest = src;
    while let Some(c) = rest.chars().next() {
        let (l0, c0) = (line, col);
        let err = |msg: String| SyntaxError::new(l0, c0, msg);
        let consumed: usize;
        if c == '\n' {
            line += 1;
            col = 1;
            rest = &rest[1..];
            continue;
        } else if c.is_whitespace() {
            consumed = c.len_utf8();
        } else if c.is_ascii_digit() {
            let n = rest.find(|ch: char| !ch.is_ascii_digit()).unwrap_or(rest.len());
            let v = rest[..n]
                .parse::<i64>()
                .map_err(|_| err(format!("integer literal {} out of range", &rest[..n])))?;
            out.push(Token { tok: Tok::Int(v), line, col });
            consumed = n;
        } else if c.is_ascii_alphabetic() || c == '_' {
            let n = rest
                .find(|ch: char| !(ch.is_ascii_alphanumeric() || ch == '_'))
                .unwrap_or(rest.len());
            let word = &rest[..n];
            let tok = match KEYWORDS.iter().find(|(k, _)| *k == word) {
                Some((_, sym)) => Tok::Sym(sym),
                None => Tok::Ident(word.to_string()),
            };
            out.push(Token { tok, line, col });
            consumed = n;
        } else if c == '"' {
            let mut s = String::new();
            let mut chars = rest[1..].char_indices();
            let mut end = None;
            while let Some((i, ch)) = chars.next() {
                match ch {
                    '"' => {
                        end = Some(i + 2);
                        break;
                    }
                    '\\' => match chars.next() {
                        Some((_, 'n')) => s.push('\n'),
                        Some((_, 't')) => s.push('\t'),
                        Some((_, e)) => s.push(e),
                        None => break,
                    },
                    '\n' => break,
                    ch => s.push(ch),
                }
            }
            let end = end.ok_or_else(|| err("unterminated string literal".into()))?;
            out.push(Token { tok: Tok::Str(s), line, col });
            consumed = end;
        } else if c == '`' {
            let mut it = rest[1..].chars();
            match (it.next(), it.next()) {
                (Some(ch), Some('`')) => {
                    out.push(Token { tok: Tok::Char(ch), line, col });
                    consumed = 2 + ch.len_utf8();
                }
                _ => return Err(err("malformed character literal".into())),
            }
        } else if let Some((spelling, sym)) = SYMBOLS.iter().find(|(s, _)| rest.starts_with(s)) {
            out.push(Token { tok: Tok::Sym(sym), line, col });
            consumed = spelling.len();
        } else {
            return Err(err(format!("unexpected character {c:?}")));
        }
        col += rest[..consumed].chars().count();
        rest = &rest[consumed..];
    }
    out.push(Token { tok: Tok::Eof, line, col });
    Ok(out)
}
