use num_bigint::BigInt;
use num_traits::{One, Zero};

use ncsaito_core::ncseries::{Series, Word};
use ncsaito_core::Rat;

use crate::error::CliError;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(String),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Int(s) => format!("integer {s}"),
            Tok::Ident(s) => format!("identifier {s}"),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Slash => "'/'".into(),
            Tok::Caret => "'^'".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn lex(src: &str, base: usize) -> Result<Vec<(usize, Tok)>, CliError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        let start = i;
        let tok = match b {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((base + start, Tok::Int(src[start..i].to_string())));
                continue;
            }
            b if b.is_ascii_alphabetic() || b == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((base + start, Tok::Ident(src[start..i].to_string())));
                continue;
            }
            _ => {
                return Err(CliError::Parse {
                    offset: base + start,
                    expected: vec!["integer".into(), "variable".into(), "operator".into()],
                    found: src[start..].chars().next().map(String::from).unwrap_or_default(),
                })
            }
        };
        i += 1;
        out.push((base + start, tok));
    }
    out.push((base + src.len(), Tok::End));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    vars: &'a [String],
    trunc: usize,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].1.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn fail<T>(&self, expected: &[&str]) -> Result<T, CliError> {
        Err(CliError::Parse {
            offset: self.offset(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: self.peek().describe(),
        })
    }

    fn expr(&mut self) -> Result<Series, CliError> {
        let mut out = Series::zero(self.vars.len(), self.trunc);
        let mut sign = match self.peek() {
            Tok::Minus => {
                self.bump();
                -Rat::one()
            }
            Tok::Plus => {
                self.bump();
                Rat::one()
            }
            _ => Rat::one(),
        };
        loop {
            let (w, c) = self.term()?;
            if let Some(w) = w {
                out.add_term(w, c * &sign);
            }
            sign = match self.peek() {
                Tok::Plus => Rat::one(),
                Tok::Minus => -Rat::one(),
                Tok::End => return Ok(out),
                _ => return self.fail(&["'+'", "'-'", "'*'", "end of input"]),
            };
            self.bump();
        }
    }

    fn uint(&mut self) -> Result<String, CliError> {
        match self.peek().clone() {
            Tok::Int(s) => {
                self.bump();
                Ok(s)
            }
            _ => self.fail(&["unsigned integer"]),
        }
    }

    /// One term; the word is `None` when it lies beyond the truncation.
    fn term(&mut self) -> Result<(Option<Word>, Rat), CliError> {
        let mut coeff = Rat::one();
        let mut letters: Vec<usize> = Vec::new();
        let mut length = 0usize;
        let mut need_factor = true;
        if let Tok::Int(s) = self.peek().clone() {
            self.bump();
            let num: BigInt = s.parse().expect("lexer yields digits");
            let mut den = BigInt::one();
            if *self.peek() == Tok::Slash {
                self.bump();
                let at = self.offset();
                den = self.uint()?.parse().expect("lexer yields digits");
                if den.is_zero() {
                    return Err(CliError::Parse {
                        offset: at,
                        expected: vec!["nonzero denominator".into()],
                        found: "0".into(),
                    });
                }
            }
            coeff = Rat::new(num, den);
            match self.peek() {
                Tok::Star => {
                    self.bump();
                }
                Tok::Ident(_) => {}
                _ => need_factor = false,
            }
        }
        if need_factor {
            loop {
                self.factor(&mut letters, &mut length)?;
                if *self.peek() != Tok::Star {
                    break;
                }
                self.bump();
            }
        }
        let word = (length <= self.trunc).then(|| Word::from_letters(&letters));
        Ok((word, coeff))
    }

    fn factor(&mut self, letters: &mut Vec<usize>, length: &mut usize) -> Result<(), CliError> {
        let at = self.offset();
        let name = match self.peek().clone() {
            Tok::Ident(name) => name,
            _ => return self.fail(&["variable"]),
        };
        self.bump();
        let index = self
            .vars
            .iter()
            .position(|v| *v == name)
            .ok_or(CliError::UnknownVariable { name, offset: at })?;
        let mut power = 1usize;
        if *self.peek() == Tok::Caret {
            self.bump();
            let at = self.offset();
            let digits = self.uint()?;
            // anything this large is beyond every supported truncation
            power = digits.parse().unwrap_or(usize::MAX);
            if power == 0 {
                return Err(CliError::Parse {
                    offset: at,
                    expected: vec!["positive exponent".into()],
                    found: "0".into(),
                });
            }
        }
        *length = length.saturating_add(power);
        if *length <= self.trunc {
            letters.extend(std::iter::repeat_n(index, power));
        }
        Ok(())
    }
}

/// Parses `src` into a series over `vars` truncated at `trunc`.
///
/// Byte offsets in errors are shifted by `base`, so that pieces of a larger
/// argument report positions in the original string.
pub fn parse_at(src: &str, vars: &[String], trunc: usize, base: usize) -> Result<Series, CliError> {
    let toks = lex(src, base)?;
    let mut p = Parser {
        toks,
        pos: 0,
        vars,
        trunc,
    };
    if *p.peek() == Tok::End {
        return p.fail(&["integer", "variable", "'-'"]);
    }
    p.expr()
}

pub fn parse(src: &str, vars: &[String], trunc: usize) -> Result<Series, CliError> {
    parse_at(src, vars, trunc, 0)
}

/// Parses `"x=EXPR;y=EXPR"`: one image per declared variable.
pub fn parse_images(src: &str, vars: &[String], trunc: usize) -> Result<Vec<Series>, CliError> {
    let mut images: Vec<Option<Series>> = vec![None; vars.len()];
    let mut base = 0;
    for piece in src.split(';') {
        let here = base;
        base += piece.len() + 1;
        if piece.trim().is_empty() {
            continue;
        }
        let Some(eq) = piece.find('=') else {
            return Err(CliError::Parse {
                offset: here + piece.len(),
                expected: vec!["'='".into()],
                found: "end of assignment".into(),
            });
        };
        let name = piece[..eq].trim();
        let name_at = here + piece.find(name).unwrap_or(0);
        let index = vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| CliError::UnknownVariable {
                name: name.to_string(),
                offset: name_at,
            })?;
        if images[index].is_some() {
            return Err(CliError::Config(format!("variable {name} assigned twice")));
        }
        images[index] = Some(parse_at(&piece[eq + 1..], vars, trunc, here + eq + 1)?);
    }
    images
        .into_iter()
        .zip(vars)
        .map(|(img, v)| img.ok_or_else(|| CliError::Config(format!("no image given for {v}"))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use ncsaito_core::rat;

    fn xy() -> Vec<String> {
        vec!["x".into(), "y".into()]
    }

    fn w(l: &[usize]) -> Word {
        Word::from_letters(l)
    }

    #[test]
    fn cube_plus_mixed_term() {
        let s = parse("x^3 + 2*x*y", &xy(), 6).unwrap();
        let want = Series::from_terms(2, 6, [(w(&[0, 0, 0]), rat(1, 1)), (w(&[0, 1]), rat(2, 1))]);
        assert_eq!(s, want);
    }

    #[test]
    fn commutator_is_a_nonzero_series() {
        let s = parse("x*y - y*x", &xy(), 4).unwrap();
        assert_eq!(s.coeff(&w(&[0, 1])), rat(1, 1));
        assert_eq!(s.coeff(&w(&[1, 0])), rat(-1, 1));
        assert!(ncsaito_core::cyclic::canonicalize(&s).is_zero());
    }

    #[test]
    fn fractional_coefficient() {
        let s = parse("1/3*x^3", &xy(), 4).unwrap();
        assert_eq!(s, Series::monomial(2, 4, w(&[0, 0, 0]), rat(1, 3)));
        assert_eq!(parse(" 1/3 x^3", &xy(), 4).unwrap(), s);
    }

    #[test]
    fn leading_sign_and_constants() {
        let s = parse("-x + 5 - 2/4", &xy(), 3).unwrap();
        assert_eq!(s.coeff(&w(&[0])), rat(-1, 1));
        assert_eq!(s.constant_term(), rat(9, 2));
    }

    #[test]
    fn high_powers_are_truncated() {
        let s = parse("x^2 + y^99999999999999999999999", &xy(), 4).unwrap();
        assert_eq!(s.len(), 1);
        assert!(parse("x^3*y^3", &xy(), 5).unwrap().is_zero());
    }

    #[test]
    fn juxtaposition_is_rejected() {
        match parse("x y", &xy(), 4) {
            Err(CliError::Parse { offset, .. }) => assert_eq!(offset, 2),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse("xy", &xy(), 4), Err(CliError::UnknownVariable { offset: 0, .. })));
    }

    #[test]
    fn malformed_inputs() {
        for (src, at) in [("", 0), ("x +", 3), ("x^", 2), ("x^0", 2), ("1/0*x", 2), ("x ** y", 3), ("x $ y", 2)] {
            match parse(src, &xy(), 4) {
                Err(CliError::Parse { offset, .. }) => assert_eq!(offset, at, "{src}"),
                other => panic!("{src}: unexpected {other:?}"),
            }
        }
        assert!(matches!(
            parse("x + z", &xy(), 4),
            Err(CliError::UnknownVariable { offset: 4, .. })
        ));
    }

    #[test]
    fn derivation_images() {
        let imgs = parse_images("y = 2*y + x^2; x=x", &xy(), 4).unwrap();
        assert_eq!(imgs[0], Series::var(2, 4, 0));
        assert_eq!(imgs[1].coeff(&w(&[0, 0])), rat(1, 1));
        assert!(matches!(parse_images("x=x", &xy(), 4), Err(CliError::Config(_))));
        match parse_images("x=x;y=$", &xy(), 4) {
            Err(CliError::Parse { offset, .. }) => assert_eq!(offset, 6),
            other => panic!("unexpected {other:?}"),
        }
    }
}
