//! The space-expression language.
//!
//! ```text
//! expr  := "lp(" num ")" | "sup" | "l1" | "day" | "lorentz" | "tsirelson"
//!        | "dayAug(" expr ")" | "scBase(" expr ")"
//!        | "davis(" expr "," expr "," num ")"
//!        | "Y(" expr "," expr "," expr "," mrule ")"
//!        | "sym2R(" expr ")"
//! mrule := "pow2"
//! ```
//!
//! Whitespace is allowed between tokens. `NormDescriptor`'s `Display`
//! prints the canonical form, which parses back to the same tree.

use std::fmt;
use std::str::FromStr;

use crate::norm::NormDescriptor;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{message} at byte {offset}")]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

/// Source text together with its parsed tree.
#[derive(Clone, Debug, PartialEq)]
pub struct SpaceExpression {
    pub source: String,
    pub descriptor: NormDescriptor,
}

impl FromStr for SpaceExpression {
    type Err = ParseError;

    fn from_str(text: &str) -> Result<Self, ParseError> {
        Ok(Self {
            source: text.to_string(),
            descriptor: parse_space(text)?,
        })
    }
}

impl fmt::Display for SpaceExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.descriptor)
    }
}

pub fn parse_space(text: &str) -> Result<NormDescriptor, ParseError> {
    let mut parser = Parser { text, pos: 0 };
    let expr = parser.expr()?;
    parser.skip_space();
    if parser.pos < text.len() {
        return Err(parser.error_at(parser.pos, "unexpected trailing input"));
    }
    Ok(expr)
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn error_at(&self, offset: usize, message: impl Into<String>) -> ParseError {
        ParseError {
            offset,
            message: message.into(),
        }
    }

    fn skip_space(&mut self) {
        while self.text[self.pos..].starts_with(|c: char| c.is_whitespace()) {
            self.pos += self.text[self.pos..]
                .chars()
                .next()
                .map_or(1, char::len_utf8);
        }
    }

    fn expect(&mut self, token: char) -> Result<(), ParseError> {
        self.skip_space();
        if self.text[self.pos..].starts_with(token) {
            self.pos += token.len_utf8();
            Ok(())
        } else {
            let found = self.text[self.pos..]
                .chars()
                .next()
                .map_or("end of input".to_string(), |c| format!("'{c}'"));
            Err(self.error_at(self.pos, format!("expected '{token}', found {found}")))
        }
    }

    fn ident(&mut self) -> Result<(usize, &'a str), ParseError> {
        self.skip_space();
        let start = self.pos;
        let len = self.text[start..]
            .find(|c: char| !c.is_ascii_alphanumeric())
            .unwrap_or(self.text.len() - start);
        if len == 0 {
            return Err(self.error_at(start, "expected a space name"));
        }
        self.pos += len;
        Ok((start, &self.text[start..start + len]))
    }

    fn number(&mut self) -> Result<(usize, f64), ParseError> {
        self.skip_space();
        let start = self.pos;
        let len = self.text[start..]
            .find(|c: char| !(c.is_ascii_digit() || matches!(c, '.' | 'e' | 'E' | '+' | '-')))
            .unwrap_or(self.text.len() - start);
        let token = &self.text[start..start + len];
        match token.parse::<f64>() {
            Ok(value) if value.is_finite() => {
                self.pos += len;
                Ok((start, value))
            }
            _ => Err(self.error_at(start, format!("expected a number, found '{token}'"))),
        }
    }

    fn unary(
        &mut self,
        wrap: fn(NormDescriptor) -> NormDescriptor,
    ) -> Result<NormDescriptor, ParseError> {
        self.expect('(')?;
        let inner = self.expr()?;
        self.expect(')')?;
        Ok(wrap(inner))
    }

    fn expr(&mut self) -> Result<NormDescriptor, ParseError> {
        let (start, name) = self.ident()?;
        match name {
            "sup" => Ok(NormDescriptor::Sup),
            "l1" => Ok(NormDescriptor::L1),
            "day" => Ok(NormDescriptor::Day),
            "lorentz" => Ok(NormDescriptor::Lorentz),
            "tsirelson" => Ok(NormDescriptor::Tsirelson),
            "lp" => {
                self.expect('(')?;
                let (at, p) = self.number()?;
                let lp = NormDescriptor::lp(p).map_err(|e| self.error_at(at, e.to_string()))?;
                self.expect(')')?;
                Ok(lp)
            }
            "dayAug" => self.unary(NormDescriptor::day_aug),
            "scBase" => self.unary(NormDescriptor::sc_base),
            "sym2R" => self.unary(NormDescriptor::sym2r),
            "davis" => {
                self.expect('(')?;
                let e = self.expr()?;
                self.expect(',')?;
                let f = self.expr()?;
                self.expect(',')?;
                let (at, m) = self.number()?;
                self.expect(')')?;
                NormDescriptor::davis(e, f, m).map_err(|err| self.error_at(at, err.to_string()))
            }
            "Y" => {
                self.expect('(')?;
                let e = self.expr()?;
                self.expect(',')?;
                let f = self.expr()?;
                self.expect(',')?;
                let x = self.expr()?;
                self.expect(',')?;
                let (at, rule) = self.ident()?;
                if rule != "pow2" {
                    return Err(
                        self.error_at(at, format!("unknown weight rule '{rule}' (expected pow2)"))
                    );
                }
                self.expect(')')?;
                Ok(NormDescriptor::y(e, f, x))
            }
            other => Err(self.error_at(start, format!("unknown space '{other}'"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(parse_space("lp(2)").unwrap(), NormDescriptor::Lp { p: 2.0 });
        let y = parse_space("Y(sup, l1, tsirelson, pow2)").unwrap();
        assert_eq!(
            y,
            NormDescriptor::y(
                NormDescriptor::Sup,
                NormDescriptor::L1,
                NormDescriptor::Tsirelson
            )
        );
        let d = parse_space("davis(sup, l1, 2)").unwrap();
        assert_eq!(d.to_string(), "davis(sup, l1, 2)");
        assert_eq!(
            parse_space(" sym2R ( dayAug(lp(1.5)) ) ")
                .unwrap()
                .to_string(),
            "sym2R(dayAug(lp(1.5)))"
        );
    }

    #[test]
    fn errors_carry_offsets() {
        assert_eq!(parse_space("lp(0.5)").unwrap_err().offset, 3);
        assert_eq!(parse_space("dayAug(foo)").unwrap_err().offset, 7);
        assert_eq!(parse_space("sup x").unwrap_err().offset, 4);
        assert_eq!(parse_space("davis(sup, l1)").unwrap_err().offset, 13);
        assert_eq!(parse_space("Y(sup, l1, day, pow3)").unwrap_err().offset, 16);
        assert_eq!(parse_space("").unwrap_err().offset, 0);
        assert!(parse_space("davis(sup, l1, -1)").is_err());
    }
}
