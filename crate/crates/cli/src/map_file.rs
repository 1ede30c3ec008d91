//! Generator images for `check-morphism`.
//!
//! ```text
//! map a = 1 a
//! map b = 1 b, 1 c^3
//! map c = 1 c
//! ```
//!
//! Each source generator gets one line. An image is `0` or a
//! comma-separated list of `COEFF MONOMIAL` with `MONOMIAL` a product
//! `x^i*y^j*...` of target generators, multiplied left to right in the
//! enveloping algebra of the target.

use dgl_core::lie::PbwAlgebra;
use dgl_core::scalar::{Fp, PLocal, Scalar};

use crate::dgl_file::{format_coefficient, is_name, parse_coefficient, ParseError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialTerm {
    pub coeff: PLocal,
    /// Factors `(generator, power)` in multiplication order.
    pub factors: Vec<(String, u32)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapLine {
    pub line: usize,
    pub source: String,
    pub image: Vec<MonomialTerm>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapFile {
    pub lines: Vec<MapLine>,
}

fn err(line: usize, field: impl Into<String>, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        field: field.into(),
        message: message.into(),
    }
}

fn parse_monomial(text: &str, line: usize) -> Result<Vec<(String, u32)>, ParseError> {
    let field = format!("monomial {text:?}");
    text.split('*')
        .map(|factor| {
            let (name, power) = match factor.split_once('^') {
                Some((n, k)) => (
                    n,
                    k.parse::<u32>()
                        .ok()
                        .filter(|&k| k > 0)
                        .ok_or_else(|| err(line, field.clone(), "bad exponent"))?,
                ),
                None => (factor, 1),
            };
            if !is_name(name) {
                return Err(err(line, field.clone(), "bad generator name"));
            }
            Ok((name.to_string(), power))
        })
        .collect()
}

fn format_monomial(factors: &[(String, u32)]) -> String {
    factors
        .iter()
        .map(|(n, k)| {
            if *k == 1 {
                n.clone()
            } else {
                format!("{n}^{k}")
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}

impl MapFile {
    /// Coefficients are read in `Z_(p)`.
    pub fn parse(text: &str, p: u64) -> Result<Self, ParseError> {
        let mut lines: Vec<MapLine> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let Some((head, rhs)) = content.split_once('=') else {
                return Err(err(line, "", "expected `map NAME = IMAGE`"));
            };
            let words: Vec<&str> = head.split_whitespace().collect();
            let ["map", source] = words[..] else {
                return Err(err(line, "", "expected `map NAME = IMAGE`"));
            };
            if lines.iter().any(|l| l.source == source) {
                return Err(err(line, "map", format!("image of {source:?} given twice")));
            }
            let rhs = rhs.trim();
            let mut image = Vec::new();
            if rhs != "0" {
                for part in rhs.split(',') {
                    let words: Vec<&str> = part.split_whitespace().collect();
                    let [coeff, monomial] = words[..] else {
                        return Err(err(
                            line,
                            format!("term {:?}", part.trim()),
                            "expected COEFF MONOMIAL",
                        ));
                    };
                    image.push(MonomialTerm {
                        coeff: parse_coefficient(coeff, p, line)?,
                        factors: parse_monomial(monomial, line)?,
                    });
                }
            }
            lines.push(MapLine {
                line,
                source: source.to_string(),
                image,
            });
        }
        Ok(MapFile { lines })
    }

    pub fn emit(&self) -> String {
        let mut out = String::new();
        for l in &self.lines {
            let image = if l.image.is_empty() {
                "0".to_string()
            } else {
                l.image
                    .iter()
                    .map(|t| {
                        format!(
                            "{} {}",
                            format_coefficient(&t.coeff),
                            format_monomial(&t.factors)
                        )
                    })
                    .collect::<Vec<_>>()
                    .join(", ")
            };
            out.push_str(&format!("map {} = {}\n", l.source, image));
        }
        out
    }

    /// Images of the source generators in the target algebra, reduced mod p.
    pub fn images(
        &self,
        source: &PbwAlgebra<Fp>,
        target: &PbwAlgebra<Fp>,
    ) -> Result<Vec<Vec<Fp>>, ParseError> {
        let src = source.lie();
        let tgt = target.lie();
        let p = target.prime();
        let last = self.lines.last().map_or(1, |l| l.line);
        if let Some(l) = self.lines.iter().find(|l| src.index_of(&l.source).is_err()) {
            return Err(err(
                l.line,
                format!("name {:?}", l.source),
                "not a source generator",
            ));
        }
        let mut out = Vec::new();
        for (g, name) in src.names().iter().enumerate() {
            let line = self
                .lines
                .iter()
                .find(|l| &l.source == name)
                .ok_or_else(|| err(last, "", format!("no image given for {name:?}")))?;
            let n = src.degree(g);
            if n > target.max_degree() {
                return Err(err(
                    line.line,
                    "",
                    format!("degree {n} exceeds the target's nmax"),
                ));
            }
            let mut acc = vec![Fp::zero(p); target.dim(n)];
            for term in &line.image {
                let mut v = target.unit();
                let mut deg = 0;
                for (f, k) in &term.factors {
                    let h = tgt.index_of(f).map_err(|_| {
                        err(line.line, format!("name {f:?}"), "not a target generator")
                    })?;
                    for _ in 0..*k {
                        let (dh, x) = target.generator(h);
                        v = target.mul(deg, &v, dh, &x).ok_or_else(|| {
                            err(
                                line.line,
                                format_monomial(&term.factors),
                                "exceeds the target's nmax",
                            )
                        })?;
                        deg += dh;
                    }
                }
                if deg != n {
                    return Err(err(
                        line.line,
                        format!("monomial {:?}", format_monomial(&term.factors)),
                        format!("has degree {deg}, but {name} has degree {n}"),
                    ));
                }
                let c = term.coeff.to_fp();
                for (a, b) in acc.iter_mut().zip(&v) {
                    *a = *a + c * *b;
                }
            }
            out.push(acc);
        }
        Ok(out)
    }
}
