//! Text format for decorated Gauss codes.
//!
//! ```text
//! code      := component (';' component)*
//! component := token*                      (whitespace separated, may be empty)
//! token     := ('O' | 'U') natural ('+' | '-')   crossing passage
//!            | '|'                                bar
//!            | '>'                                coherent cut point
//!            | '<'                                incoherent cut point
//! ```
//!
//! In files, lines whose first non-blank character is `#` are comments.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::gauss::{validate, CrossingId, CutDir, LinkCode, Role, Sign, Token, ValidationReport, Violation};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("lexical error at token {token} (byte {offset}): unexpected `{text}`")]
    Lex { token: usize, offset: usize, text: String },
    #[error("{0}")]
    Invalid(ValidationReport),
}

fn lex_token(word: &str) -> Option<(Token, Option<Sign>)> {
    match word {
        "|" => return Some((Token::Bar, None)),
        ">" => return Some((Token::Cut(CutDir::Along), None)),
        "<" => return Some((Token::Cut(CutDir::Against), None)),
        _ => {}
    }
    let role = match word.as_bytes().first()? {
        b'O' => Role::Over,
        b'U' => Role::Under,
        _ => return None,
    };
    let sign = match word.as_bytes().last()? {
        b'+' => Sign::Pos,
        b'-' => Sign::Neg,
        _ => return None,
    };
    let digits = word.get(1..word.len() - 1)?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let crossing: CrossingId = digits.parse().ok()?;
    let token = match role {
        Role::Over => Token::over(crossing),
        Role::Under => Token::under(crossing),
    };
    Some((token, Some(sign)))
}

/// Parses one code; the result is validated.
pub fn parse(text: &str) -> Result<LinkCode, ParseError> {
    let mut components = Vec::new();
    let mut signs: BTreeMap<CrossingId, Sign> = BTreeMap::new();
    let mut mismatches = Vec::new();
    let mut token_no = 0;
    let mut offset = 0;
    for chunk in text.split(';') {
        let mut comp = Vec::new();
        let mut rest = chunk;
        let mut local = 0;
        while let Some(start) = rest.find(|c: char| !c.is_whitespace()) {
            let end = rest[start..].find(char::is_whitespace).map_or(rest.len(), |e| start + e);
            let word = &rest[start..end];
            token_no += 1;
            let (token, sign) = lex_token(word).ok_or_else(|| ParseError::Lex {
                token: token_no,
                offset: offset + local + start,
                text: word.to_string(),
            })?;
            if let (Some(p), Some(s)) = (token.passage(), sign) {
                match signs.get(&p.crossing) {
                    Some(&prev) if prev != s => {
                        let v = Violation::SignMismatch { crossing: p.crossing };
                        if !mismatches.contains(&v) {
                            mismatches.push(v);
                        }
                    }
                    _ => {
                        signs.insert(p.crossing, s);
                    }
                }
            }
            comp.push(token);
            local += end;
            rest = &rest[end..];
        }
        components.push(comp);
        offset += chunk.len() + 1;
    }
    let mut report = validate(&components, &signs);
    report.violations.splice(0..0, mismatches);
    if !report.is_ok() {
        return Err(ParseError::Invalid(report));
    }
    Ok(LinkCode::new(components, signs).expect("validated above"))
}

/// Parses file contents: `#` comment lines are skipped, remaining lines are
/// joined as whitespace.
pub fn parse_file_contents(text: &str) -> Result<LinkCode, ParseError> {
    let body: Vec<&str> = text.lines().filter(|l| !l.trim_start().starts_with('#')).collect();
    parse(&body.join("\n"))
}

pub fn token_text(token: &Token, code: &LinkCode) -> String {
    match token {
        Token::Passage(p) => {
            let r = match p.role {
                Role::Over => 'O',
                Role::Under => 'U',
            };
            let s = match code.sign(p.crossing) {
                Sign::Pos => '+',
                Sign::Neg => '-',
            };
            format!("{r}{}{s}", p.crossing)
        }
        Token::Bar => "|".to_string(),
        Token::Cut(CutDir::Along) => ">".to_string(),
        Token::Cut(CutDir::Against) => "<".to_string(),
    }
}

pub fn serialize(code: &LinkCode) -> String {
    let mut out = String::new();
    for (i, comp) in code.components().iter().enumerate() {
        if i > 0 {
            out.push_str(" ; ");
        }
        for (k, t) in comp.iter().enumerate() {
            if k > 0 {
                out.push(' ');
            }
            let _ = write!(out, "{}", token_text(t, code));
        }
    }
    out
}

impl std::str::FromStr for LinkCode {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

impl std::fmt::Display for LinkCode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&serialize(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_virtual_trefoil() {
        let vt = parse("O1+ O2+ U1+ U2+").unwrap();
        assert_eq!(vt.num_components(), 1);
        assert_eq!(vt.component(0).len(), 4);
        assert_eq!(serialize(&vt), "O1+ O2+ U1+ U2+");
    }

    #[test]
    fn empty_second_component_and_bar() {
        let c = parse("O1+ U1+ | ; ").unwrap();
        assert_eq!(c.num_components(), 2);
        assert!(c.component(1).is_empty());
        assert_eq!(c.bar_count(), 1);
        assert_eq!(serialize(&c), "O1+ U1+ | ; ");
    }

    #[test]
    fn bad_sign_character_is_lexical_error_at_token_one() {
        match parse("O1* U1+") {
            Err(ParseError::Lex { token, offset, text }) => {
                assert_eq!((token, offset, text.as_str()), (1, 0, "O1*"));
            }
            other => panic!("expected lexical error, got {other:?}"),
        }
    }

    #[test]
    fn lexical_position_counts_across_components() {
        match parse("O1+ ; U1+ X") {
            Err(ParseError::Lex { token, offset, .. }) => assert_eq!((token, offset), (3, 10)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rejects_malformed_passages() {
        for bad in ["O+", "O1", "Q1+", "O-1+", "O1+x", "o1+"] {
            assert!(matches!(parse(bad), Err(ParseError::Lex { .. })), "{bad}");
        }
    }

    #[test]
    fn sign_mismatch_is_reported() {
        let err = parse("O1+ ; U1-").unwrap_err();
        assert_eq!(err.to_string(), "sign mismatch at crossing 1");
    }

    #[test]
    fn duplicate_over_is_reported() {
        let err = parse("O1+ O1+ U1+").unwrap_err();
        assert!(err.to_string().contains("crossing 1 has two Over passages"));
    }

    #[test]
    fn cut_tokens_round_trip() {
        let s = "O1+ > O2+ > < U1+ < U2+";
        assert_eq!(serialize(&parse(s).unwrap()), s);
    }

    #[test]
    fn empty_text_is_unknot() {
        let u = parse("").unwrap();
        assert_eq!(u, LinkCode::unknot());
        assert_eq!(serialize(&u), "");
    }

    #[test]
    fn file_comments_are_skipped() {
        let c = parse_file_contents("# virtual trefoil\nO1+ O2+\n  # more\nU1+ U2+\n").unwrap();
        assert_eq!(serialize(&c), "O1+ O2+ U1+ U2+");
    }
}
