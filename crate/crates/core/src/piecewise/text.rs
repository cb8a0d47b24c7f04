//! Line format:
//!
//! ```text
//! pwmap domain=R tag=HZ
//! piece -inf 1-1*sqrt(2) [[1,0],[0,1]]
//! piece 1-1*sqrt(2) (1+1*sqrt(3))/2 [[5,2],[2,1]]
//! piece (1+1*sqrt(3))/2 inf [[1,1],[0,1]]
//! ```
//!
//! `domain` is `R`, `unit` or `seg <s> <e>`; `tag` is optional. Blank lines
//! and `#` comments are skipped.

use std::fmt::Write as _;

use super::{Affine, Domain, GroupTag, Piece, PwMap};
use crate::error::{Error, Result};
use crate::exactnum::{parse_ext, parse_quad, ExtReal};
use crate::moebius::Mob;

/// A parsed map of either piece type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnyMap {
    Mob(PwMap<Mob>),
    Affine(PwMap<Affine>),
}

impl AnyMap {
    pub fn serialize_tagged(&self, tag: Option<GroupTag>) -> String {
        match self {
            AnyMap::Mob(m) => m.serialize_tagged(tag),
            AnyMap::Affine(m) => m.serialize_tagged(tag),
        }
    }
}

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

impl<P: Piece> PwMap<P> {
    pub fn serialize(&self) -> String {
        self.serialize_tagged(None)
    }

    pub fn serialize_tagged(&self, tag: Option<GroupTag>) -> String {
        let mut out = String::from("pwmap domain=");
        match self.domain() {
            Domain::RealLine => out.push('R'),
            Domain::UnitInterval => out.push_str("unit"),
            Domain::Segment(s, e) => {
                let _ = write!(out, "seg {s} {e}");
            }
        }
        if let Some(t) = tag {
            let _ = write!(out, " tag={t}");
        }
        out.push('\n');
        for (iv, p) in self.iter_pieces() {
            let _ = writeln!(out, "piece {} {} {p}", iv.lo, iv.hi);
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        parse_tagged(text).map(|(m, _)| m)
    }
}

/// Parses a map and its optional tag.
pub fn parse_tagged<P: Piece>(text: &str) -> Result<(PwMap<P>, Option<GroupTag>)> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (hline, header) = lines.next().ok_or_else(|| perr(1, "empty input"))?;
    let mut tokens = header.split_whitespace();
    if tokens.next() != Some("pwmap") {
        return Err(perr(hline, "header must start with 'pwmap'"));
    }
    let mut domain = None;
    let mut tag = None;
    while let Some(tok) = tokens.next() {
        if let Some(d) = tok.strip_prefix("domain=") {
            domain = Some(match d {
                "R" => Domain::RealLine,
                "unit" => Domain::UnitInterval,
                "seg" => {
                    let mut end = || -> Result<_> {
                        let t = tokens.next().ok_or_else(|| perr(hline, "seg needs two endpoints"))?;
                        Ok(parse_quad(t)?)
                    };
                    let s = end()?;
                    let e = end()?;
                    Domain::Segment(s, e)
                }
                other => return Err(perr(hline, format!("unknown domain {other:?}"))),
            });
        } else if let Some(t) = tok.strip_prefix("tag=") {
            if !t.is_empty() {
                tag = Some(t.parse::<GroupTag>()?);
            }
        } else {
            return Err(perr(hline, format!("unexpected token {tok:?}")));
        }
    }
    let domain = domain.ok_or_else(|| perr(hline, "missing domain="))?;

    let mut breaks = Vec::new();
    let mut pieces = Vec::new();
    let mut expect_lo = domain.lo();
    for (n, line) in lines {
        let mut parts = line.splitn(4, char::is_whitespace);
        if parts.next() != Some("piece") {
            return Err(perr(n, "expected 'piece <lo> <hi> <matrix>'"));
        }
        let mut field = |what: &str| parts.next().map(str::trim).ok_or_else(|| perr(n, format!("missing {what}")));
        let lo = parse_ext(field("lower end")?).map_err(|e| perr(n, e.to_string()))?;
        let hi = parse_ext(field("upper end")?).map_err(|e| perr(n, e.to_string()))?;
        let lit = field("matrix")?;
        let piece = P::parse_literal(lit).map_err(|e| perr(n, e.to_string()))?;
        if lo != expect_lo {
            return Err(Error::InvariantViolation {
                kind: "ordering",
                detail: format!("line {n}: piece starts at {lo}, expected {expect_lo}"),
            });
        }
        if pieces.is_empty() {
            // first piece starts at the domain end
        } else if let ExtReal::Finite(b) = &lo {
            breaks.push(b.clone());
        }
        pieces.push(piece);
        expect_lo = hi;
    }
    if pieces.is_empty() {
        return Err(perr(hline, "no pieces"));
    }
    if expect_lo != domain.hi() {
        return Err(Error::InvariantViolation {
            kind: "ordering",
            detail: format!("last piece ends at {expect_lo}, domain ends at {}", domain.hi()),
        });
    }
    Ok((PwMap::new(domain, breaks, pieces)?, tag))
}

/// Tries integer matrices first, then quadratic affine pieces.
pub fn parse_any(text: &str) -> Result<(AnyMap, Option<GroupTag>)> {
    match parse_tagged::<Mob>(text) {
        Ok((m, t)) => Ok((AnyMap::Mob(m), t)),
        Err(first @ Error::Parse { .. }) => match parse_tagged::<Affine>(text) {
            Ok((m, t)) => Ok((AnyMap::Affine(m), t)),
            Err(_) => Err(first),
        },
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const END_OFFSET: &str = "pwmap domain=R\n\
        piece -inf 1-1*sqrt(2) [[1,0],[0,1]]\n\
        piece 1-1*sqrt(2) (1+1*sqrt(3))/2 [[5,2],[2,1]]\n\
        piece (1+1*sqrt(3))/2 inf [[1,1],[0,1]]\n";

    #[test]
    fn identity_text_is_fixed() {
        let id: PwMap = PwMap::identity(Domain::RealLine);
        assert_eq!(id.serialize(), "pwmap domain=R\npiece -inf inf [[1,0],[0,1]]\n");
    }

    #[test]
    fn round_trip_is_byte_identical() {
        let m: PwMap = PwMap::parse(END_OFFSET).unwrap();
        assert_eq!(m.serialize(), END_OFFSET);
        let tagged = m.serialize_tagged(Some(GroupTag::HZ));
        let (m2, tag) = parse_tagged::<Mob>(&tagged).unwrap();
        assert_eq!((m2, tag), (m, Some(GroupTag::HZ)));
    }

    #[test]
    fn swapped_breakpoints_are_rejected() {
        let text = "pwmap domain=unit\n\
            piece 0 1/2 [[2,0],[0,1]]\n\
            piece 1/2 1/4 [[4,1],[0,4]]\n\
            piece 1/4 1 [[1,1],[0,2]]\n";
        let err = PwMap::<Mob>::parse(text).unwrap_err();
        assert!(matches!(err, Error::InvariantViolation { kind: "ordering", .. }), "{err}");
    }

    #[test]
    fn parse_errors_name_the_line() {
        let text = "pwmap domain=R\npiece -inf inf [[1,0],[0,x]]\n";
        assert!(matches!(PwMap::<Mob>::parse(text), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(PwMap::<Mob>::parse("map domain=R"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn any_map_falls_back_to_affine() {
        let text = "pwmap domain=unit tag=Ftau\n\
            piece 0 (3-1*sqrt(5))/2 [[(1+1*sqrt(5))/2,0],[0,1]]\n\
            piece (3-1*sqrt(5))/2 1 [[(-1+1*sqrt(5))/2,(3-1*sqrt(5))/2],[0,1]]\n";
        let (m, tag) = parse_any(text).unwrap();
        assert_eq!(tag, Some(GroupTag::Ftau));
        let AnyMap::Affine(m) = m else { panic!("expected affine pieces") };
        assert!(m.is_in(GroupTag::Ftau));
        assert_eq!(m.serialize_tagged(tag), text);
    }
}
