//! The `.dgl` text format.
//!
//! ```text
//! # comment
//! prime 3
//! nmax 20
//! gen e 1
//! gen f 2
//! d f = 3 e
//! bracket e f = 1/2 g, -1 h
//! ```
//!
//! `prime` and `nmax` come first, in that order. A term list is either `0`
//! or comma-separated `COEFF NAME` pairs with distinct names; a coefficient
//! is `a` or `a/b` in decimal with `b` prime to `p`. A bracket listed in one
//! order only is extended by graded antisymmetry; when both orders are
//! listed each is taken as written.

use std::fmt;

use dgl_core::lie::{DgLie, LieError};
use dgl_core::scalar::{is_odd_prime, PLocal, Scalar};
use num_bigint::BigInt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub field: String,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.field.is_empty() {
            write!(f, "line {}: {}", self.line, self.message)
        } else {
            write!(f, "line {}, {}: {}", self.line, self.field, self.message)
        }
    }
}

impl std::error::Error for ParseError {}

fn err(line: usize, field: impl Into<String>, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        field: field.into(),
        message: message.into(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub degree: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub coeff: PLocal,
    pub gen: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DifferentialLine {
    pub source: String,
    pub targets: Vec<Term>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BracketLine {
    pub left: String,
    pub right: String,
    pub targets: Vec<Term>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DglFile {
    pub prime: u64,
    pub max_degree: usize,
    pub generators: Vec<Generator>,
    pub differential: Vec<DifferentialLine>,
    pub brackets: Vec<BracketLine>,
}

pub fn is_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

/// Parses `a` or `a/b` as an element of `Z_(p)`.
pub fn parse_coefficient(text: &str, p: u64, line: usize) -> Result<PLocal, ParseError> {
    let field = format!("coefficient {text:?}");
    let (num, den) = match text.split_once('/') {
        Some((a, b)) => (a, b),
        None => (text, "1"),
    };
    let parse = |s: &str| -> Result<BigInt, ParseError> {
        s.parse::<BigInt>()
            .map_err(|_| err(line, field.clone(), "not an integer or fraction a/b"))
    };
    let (num, den) = (parse(num)?, parse(den)?);
    if den.sign() == num_bigint::Sign::Minus || den == BigInt::from(0) {
        return Err(err(line, field, "denominator must be positive"));
    }
    PLocal::from_fraction(num, den, p)
        .map_err(|_| err(line, field, format!("denominator divisible by p = {p}")))
}

pub fn format_coefficient(c: &PLocal) -> String {
    c.to_string()
}

/// `0` or `c name, c name, ...`.
pub fn parse_terms(text: &str, p: u64, line: usize) -> Result<Vec<Term>, ParseError> {
    let text = text.trim();
    if text == "0" {
        return Ok(Vec::new());
    }
    let mut out: Vec<Term> = Vec::new();
    for part in text.split(',') {
        let words: Vec<&str> = part.split_whitespace().collect();
        let [coeff, gen] = words[..] else {
            return Err(err(
                line,
                format!("term {:?}", part.trim()),
                "expected COEFF NAME",
            ));
        };
        if !is_name(gen) {
            return Err(err(
                line,
                format!("term {:?}", part.trim()),
                "bad generator name",
            ));
        }
        if out.iter().any(|t| t.gen == gen) {
            return Err(err(
                line,
                format!("term {:?}", part.trim()),
                "generator listed twice",
            ));
        }
        out.push(Term {
            coeff: parse_coefficient(coeff, p, line)?,
            gen: gen.to_string(),
        });
    }
    Ok(out)
}

pub fn format_terms(terms: &[Term]) -> String {
    if terms.is_empty() {
        return "0".to_string();
    }
    terms
        .iter()
        .map(|t| format!("{} {}", format_coefficient(&t.coeff), t.gen))
        .collect::<Vec<_>>()
        .join(", ")
}

fn parse_number<T: std::str::FromStr>(
    word: Option<&str>,
    line: usize,
    field: &str,
) -> Result<T, ParseError> {
    let w = word.ok_or_else(|| err(line, field, "missing value"))?;
    w.parse()
        .map_err(|_| err(line, field, format!("{w:?} is not a non-negative integer")))
}

impl DglFile {
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut prime = None;
        let mut max_degree = None;
        let mut generators: Vec<Generator> = Vec::new();
        let mut differential: Vec<DifferentialLine> = Vec::new();
        let mut brackets: Vec<BracketLine> = Vec::new();
        let mut last = 0;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            last = line;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (head, rhs) = match content.split_once('=') {
                Some((h, r)) => (h, Some(r)),
                None => (content, None),
            };
            let words: Vec<&str> = head.split_whitespace().collect();
            let Some(&keyword) = words.first() else {
                return Err(err(line, "", "missing keyword"));
            };
            match (keyword, prime, max_degree) {
                ("prime", None, _) => {
                    let p: u64 = parse_number(words.get(1).copied(), line, "prime")?;
                    if !is_odd_prime(p) {
                        return Err(err(line, "prime", format!("{p} is not an odd prime")));
                    }
                    if words.len() > 2 || rhs.is_some() {
                        return Err(err(line, "prime", "trailing input"));
                    }
                    prime = Some(p);
                }
                ("prime", Some(_), _) => return Err(err(line, "prime", "given twice")),
                (_, None, _) => return Err(err(line, "", "the first line must be `prime P`")),
                ("nmax", _, None) => {
                    let n: usize = parse_number(words.get(1).copied(), line, "nmax")?;
                    if n == 0 || words.len() > 2 || rhs.is_some() {
                        return Err(err(line, "nmax", "expected `nmax N` with N >= 1"));
                    }
                    max_degree = Some(n);
                }
                ("nmax", _, Some(_)) => return Err(err(line, "nmax", "given twice")),
                (_, _, None) => return Err(err(line, "", "`nmax N` must follow `prime`")),
                ("gen", Some(_), Some(nmax)) => {
                    if words.len() != 3 || rhs.is_some() {
                        return Err(err(line, "gen", "expected `gen NAME DEGREE`"));
                    }
                    let name = words[1];
                    if !is_name(name) {
                        return Err(err(line, "gen", format!("bad generator name {name:?}")));
                    }
                    if generators.iter().any(|g| g.name == name) {
                        return Err(err(line, "gen", format!("duplicate generator {name:?}")));
                    }
                    let degree: usize = parse_number(Some(words[2]), line, "degree")?;
                    if degree > nmax {
                        return Err(err(
                            line,
                            "degree",
                            format!("{degree} exceeds nmax = {nmax}"),
                        ));
                    }
                    generators.push(Generator {
                        name: name.to_string(),
                        degree,
                    });
                }
                ("d", Some(p), Some(_)) => {
                    let (Some(rhs), [_, source]) = (rhs, &words[..]) else {
                        return Err(err(line, "d", "expected `d NAME = TERMS`"));
                    };
                    check_known(&generators, source, line)?;
                    if differential.iter().any(|d| d.source == *source) {
                        return Err(err(
                            line,
                            "d",
                            format!("differential of {source:?} given twice"),
                        ));
                    }
                    let targets = parse_terms(rhs, p, line)?;
                    for t in &targets {
                        check_known(&generators, &t.gen, line)?;
                    }
                    differential.push(DifferentialLine {
                        source: source.to_string(),
                        targets,
                    });
                }
                ("bracket", Some(p), Some(_)) => {
                    let (Some(rhs), [_, left, right]) = (rhs, &words[..]) else {
                        return Err(err(line, "bracket", "expected `bracket NAME NAME = TERMS`"));
                    };
                    check_known(&generators, left, line)?;
                    check_known(&generators, right, line)?;
                    if brackets
                        .iter()
                        .any(|b| b.left == *left && b.right == *right)
                    {
                        return Err(err(
                            line,
                            "bracket",
                            format!("[{left},{right}] given twice"),
                        ));
                    }
                    let targets = parse_terms(rhs, p, line)?;
                    for t in &targets {
                        check_known(&generators, &t.gen, line)?;
                    }
                    brackets.push(BracketLine {
                        left: left.to_string(),
                        right: right.to_string(),
                        targets,
                    });
                }
                (other, _, _) => return Err(err(line, "", format!("unknown keyword {other:?}"))),
            }
        }
        let (Some(prime), Some(max_degree)) = (prime, max_degree) else {
            return Err(err(last.max(1), "", "missing `prime` or `nmax`"));
        };
        Ok(DglFile {
            prime,
            max_degree,
            generators,
            differential,
            brackets,
        })
    }

    pub fn emit(&self) -> String {
        let mut out = format!("prime {}\nnmax {}\n", self.prime, self.max_degree);
        for g in &self.generators {
            out.push_str(&format!("gen {} {}\n", g.name, g.degree));
        }
        for d in &self.differential {
            out.push_str(&format!("d {} = {}\n", d.source, format_terms(&d.targets)));
        }
        for b in &self.brackets {
            out.push_str(&format!(
                "bracket {} {} = {}\n",
                b.left,
                b.right,
                format_terms(&b.targets)
            ));
        }
        out
    }

    fn vector(&self, l: &DgLie<PLocal>, terms: &[Term]) -> Result<Vec<PLocal>, LieError> {
        let mut v = vec![PLocal::zero(self.prime); l.len()];
        for t in terms {
            v[l.index_of(&t.gen)?] = t.coeff.clone();
        }
        Ok(v)
    }

    /// The DGL described by the file; not validated.
    pub fn to_dgl(&self) -> Result<DgLie<PLocal>, LieError> {
        let gens: Vec<(&str, usize)> = self
            .generators
            .iter()
            .map(|g| (g.name.as_str(), g.degree))
            .collect();
        let mut l = DgLie::new(self.prime, self.max_degree, &gens)?;
        for d in &self.differential {
            let v = self.vector(&l, &d.targets)?;
            l.set_differential(l.index_of(&d.source)?, v)?;
        }
        for b in &self.brackets {
            let (i, j) = (l.index_of(&b.left)?, l.index_of(&b.right)?);
            let v = self.vector(&l, &b.targets)?;
            let mirrored = self
                .brackets
                .iter()
                .any(|o| o.left == b.right && o.right == b.left);
            if mirrored {
                l.set_bracket(i, j, v)?;
            } else {
                l.set_bracket_antisymmetric(i, j, v)?;
            }
        }
        Ok(l)
    }

    /// Canonical file for `l`: nonzero differentials in generator order,
    /// then `[x_i, x_j]` for `i <= j`, plus `[x_j, x_i]` wherever it is not
    /// the antisymmetric mirror.
    pub fn from_dgl(l: &DgLie<PLocal>) -> Self {
        let names = l.names();
        let terms = |v: &[PLocal]| -> Vec<Term> {
            v.iter()
                .zip(names)
                .filter(|(c, _)| !c.is_zero())
                .map(|(c, n)| Term {
                    coeff: c.clone(),
                    gen: n.clone(),
                })
                .collect()
        };
        let differential = (0..l.len())
            .filter(|&i| l.differential_of(i).iter().any(|c| !c.is_zero()))
            .map(|i| DifferentialLine {
                source: names[i].clone(),
                targets: terms(l.differential_of(i)),
            })
            .collect();
        let mut brackets = Vec::new();
        for i in 0..l.len() {
            for j in i..l.len() {
                let ij = l.bracket_basis(i, j);
                let ji = l.bracket_basis(j, i);
                let sign = if l.degree(i) * l.degree(j) % 2 == 1 {
                    1
                } else {
                    -1
                };
                let mirror: Vec<PLocal> = ij
                    .iter()
                    .map(|c| c.mul_ref(&PLocal::from_i64(sign, l.prime())))
                    .collect();
                if ij.iter().any(|c| !c.is_zero()) || (i != j && mirror != ji) {
                    brackets.push(BracketLine {
                        left: names[i].clone(),
                        right: names[j].clone(),
                        targets: terms(ij),
                    });
                }
                if i != j && mirror != ji {
                    brackets.push(BracketLine {
                        left: names[j].clone(),
                        right: names[i].clone(),
                        targets: terms(ji),
                    });
                }
            }
        }
        DglFile {
            prime: l.prime(),
            max_degree: l.max_degree(),
            generators: names
                .iter()
                .zip(l.degrees())
                .map(|(n, &d)| Generator {
                    name: n.clone(),
                    degree: d,
                })
                .collect(),
            differential,
            brackets,
        }
    }
}

fn check_known(generators: &[Generator], name: &str, line: usize) -> Result<(), ParseError> {
    if generators.iter().any(|g| g.name == name) {
        Ok(())
    } else {
        Err(err(line, format!("name {name:?}"), "unknown generator"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE: &str = "# L_ab(e, f)\nprime 3\nnmax 6\ngen e 1\ngen f 2\nd f = 3 e\n";

    #[test]
    fn parses_and_emits() {
        let f = DglFile::parse(EXAMPLE).unwrap();
        assert_eq!(f.generators.len(), 2);
        assert_eq!(f.emit(), EXAMPLE.trim_start_matches("# L_ab(e, f)\n"));
        let l = f.to_dgl().unwrap();
        assert!(l.validate().is_valid());
        assert_eq!(DglFile::from_dgl(&l), f);
    }

    #[test]
    fn rejects_denominator_divisible_by_p() {
        let e = DglFile::parse("prime 3\nnmax 4\ngen x 1\ngen y 2\nd y = 1/3 x\n").unwrap_err();
        assert_eq!(e.line, 5);
        assert!(
            e.to_string().contains("denominator divisible by p = 3"),
            "{e}"
        );
    }

    #[test]
    fn rejects_unknown_names_and_even_primes() {
        let e = DglFile::parse("prime 3\nnmax 4\ngen x 1\nd x = 1 z\n").unwrap_err();
        assert!(e.to_string().contains("unknown generator"), "{e}");
        let e = DglFile::parse("prime 4\nnmax 4\n").unwrap_err();
        assert!(e.to_string().contains("not an odd prime"), "{e}");
        let e = DglFile::parse("nmax 4\n").unwrap_err();
        assert_eq!(e.line, 1);
    }

    #[test]
    fn single_bracket_is_antisymmetrized() {
        let f = DglFile::parse("prime 5\nnmax 6\ngen x 2\ngen y 2\ngen z 4\nbracket x y = 2/3 z\n")
            .unwrap();
        let l = f.to_dgl().unwrap();
        assert!(l.validate().is_valid());
        let yx = l.bracket_basis(1, 0);
        assert_eq!(
            yx[2],
            PLocal::from_fraction((-2).into(), 3.into(), 5).unwrap()
        );
        assert_eq!(DglFile::from_dgl(&l), f);
    }
}
