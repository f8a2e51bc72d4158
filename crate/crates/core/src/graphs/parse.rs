//! Parsers for the textual encodings. Inputs need not be canonical; the
//! result always is.

use super::aroma::Aroma;
use super::multiset::AromaMultiset;
use super::tree::{Forest, RootedTree};
use crate::error::{Error, Result};

struct Cursor<'a> {
    s: &'a [u8],
    pos: usize,
    text: &'a str,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Cursor { s: text.as_bytes(), pos: 0, text }
    }

    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at byte {} of `{}`", self.pos, self.text))
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected `{}`", c as char)))
        }
    }

    fn done(&self) -> Result<()> {
        if self.pos == self.s.len() {
            Ok(())
        } else {
            Err(self.err("trailing input"))
        }
    }

    fn tree(&mut self) -> Result<RootedTree> {
        self.expect(b'[')?;
        let mut children = Vec::new();
        while self.peek() == Some(b'[') {
            children.push(self.tree()?);
        }
        self.expect(b']')?;
        Ok(RootedTree::new(children))
    }

    fn forest(&mut self) -> Result<Forest> {
        let mut trees = Vec::new();
        while self.peek() == Some(b'[') {
            trees.push(self.tree()?);
        }
        Ok(Forest::new(trees))
    }

    fn aroma(&mut self) -> Result<Aroma> {
        self.expect(b'C')?;
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        let k: usize = self.text[start..self.pos].parse().map_err(|_| self.err("expected a cycle length"))?;
        if k == 0 {
            return Err(self.err("cycle length must be positive"));
        }
        self.expect(b'(')?;
        let mut decorations = vec![self.forest()?];
        while self.peek() == Some(b';') {
            self.pos += 1;
            decorations.push(self.forest()?);
        }
        self.expect(b')')?;
        if decorations.len() != k {
            return Err(self.err(&format!("cycle length {k} but {} decorations", decorations.len())));
        }
        Ok(Aroma::new(decorations))
    }
}

pub fn parse_tree(s: &str) -> Result<RootedTree> {
    let mut c = Cursor::new(s.trim());
    let t = c.tree()?;
    c.done()?;
    Ok(t)
}

/// A forest: concatenated trees, or "1" for the empty forest.
pub fn parse_forest(s: &str) -> Result<Forest> {
    let s = s.trim();
    if s == "1" || s.is_empty() {
        return Ok(Forest::empty());
    }
    let mut c = Cursor::new(s);
    let f = c.forest()?;
    c.done()?;
    Ok(f)
}

pub fn parse_aroma(s: &str) -> Result<Aroma> {
    let mut c = Cursor::new(s.trim());
    let a = c.aroma()?;
    c.done()?;
    Ok(a)
}

pub fn parse_multiset(s: &str) -> Result<AromaMultiset> {
    let s = s.trim();
    if s == "1" {
        return Ok(AromaMultiset::unit());
    }
    let mut c = Cursor::new(s);
    let mut aromas = vec![c.aroma()?];
    while c.peek() == Some(b'*') {
        c.pos += 1;
        aromas.push(c.aroma()?);
    }
    c.done()?;
    Ok(AromaMultiset::new(aromas))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonicalizes_on_parse() {
        assert_eq!(parse_aroma("C2([];)").unwrap().encode(), "C2(;[])");
        assert_eq!(parse_tree("[[][[]]]").unwrap().encode(), "[[[]][]]");
        assert_eq!(parse_multiset("C2(;)*C1()").unwrap().encode(), "C1()*C2(;)");
        assert_eq!(parse_forest("1").unwrap(), Forest::empty());
    }

    #[test]
    fn rejects_malformed_input() {
        for bad in ["C2(;", "C0()", "C2()", "[", "C1()*", "x", "C1()]"] {
            assert!(parse_multiset(bad).is_err(), "{bad}");
        }
        assert!(parse_tree("[]]").is_err());
    }
}
