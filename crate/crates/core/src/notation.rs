//! Text syntax for game forms.
//!
//! ```text
//! Game := "0" | Int | "*" | "{" List "|" List "}"
//! List := ε | Item ("," Item)*
//! Item := Game | "SL" | "SR" | "M(" nat ")" | "+-" Game | "+-(" Game ("," Game)* ")"
//! Int  := "-"? digits
//! ```
//!
//! Whitespace is insignificant. `SL`/`SR` are the tombstone flags and are
//! valid only in the Left/Right list respectively. `M(n)` is the perfect
//! murder of birthday `n`, and `+-G` abbreviates `{G|conjugate of G}`.
//!
//! The printer emits the minimal form: integers and `*` by shorthand,
//! otherwise braces with ordinary options in id order and the tombstone
//! flag last.

use crate::store::{GameId, Store};
use crate::{Error, Result};

pub fn parse(store: &mut Store, text: &str) -> Result<GameId> {
    let mut p = Parser {
        bytes: text.as_bytes(),
        pos: 0,
    };
    p.skip_ws();
    let g = p.game(store)?;
    p.skip_ws();
    if p.pos != p.bytes.len() {
        return Err(p.error("trailing input"));
    }
    Ok(g)
}

/// Renders a form in the grammar above. `parse(render(g))` returns `g`.
pub fn render(store: &Store, g: GameId) -> String {
    let mut out = String::new();
    write_game(store, g, &mut out);
    out
}

fn write_game(store: &Store, g: GameId, out: &mut String) {
    if let Some(n) = store.integer_value(g) {
        out.push_str(&n.to_string());
        return;
    }
    if g == store.star() {
        out.push('*');
        return;
    }
    out.push('{');
    let mut first = true;
    for &l in store.left_options(g) {
        if !first {
            out.push(',');
        }
        write_game(store, l, out);
        first = false;
    }
    if store.node(g).has_sigma_left() {
        if !first {
            out.push(',');
        }
        out.push_str("SL");
    }
    out.push('|');
    first = true;
    for &r in store.right_options(g) {
        if !first {
            out.push(',');
        }
        write_game(store, r, out);
        first = false;
    }
    if store.node(g).has_sigma_right() {
        if !first {
            out.push(',');
        }
        out.push_str("SR");
    }
    out.push('}');
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn error(&self, message: &str) -> Error {
        Error::Parse {
            pos: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, b: u8) -> Result<()> {
        if self.eat(b) {
            Ok(())
        } else {
            Err(self.error(&format!("expected '{}'", b as char)))
        }
    }

    fn game(&mut self, store: &mut Store) -> Result<GameId> {
        self.skip_ws();
        match self.peek() {
            Some(b'{') => self.braces(store),
            Some(b'*') => {
                self.pos += 1;
                Ok(store.star())
            }
            Some(b'-') | Some(b'0'..=b'9') => self.integer(store),
            Some(b'M') => self.murder(store),
            _ => Err(self.error("expected a game")),
        }
    }

    fn integer(&mut self, store: &mut Store) -> Result<GameId> {
        let start = self.pos;
        let neg = self.eat(b'-');
        let digits_start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        if self.pos == digits_start {
            self.pos = start;
            return Err(self.error("expected digits"));
        }
        let text = std::str::from_utf8(&self.bytes[digits_start..self.pos]).unwrap();
        let n: i32 = text
            .parse()
            .map_err(|_| self.error("integer out of range"))?;
        Ok(store.integer(if neg { -n } else { n }))
    }

    fn murder(&mut self, store: &mut Store) -> Result<GameId> {
        self.pos += 1; // 'M'
        self.expect(b'(')?;
        self.skip_ws();
        let digits_start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        if self.pos == digits_start {
            return Err(self.error("expected a birthday"));
        }
        let text = std::str::from_utf8(&self.bytes[digits_start..self.pos]).unwrap();
        let n: u32 = text
            .parse()
            .map_err(|_| self.error("birthday out of range"))?;
        self.skip_ws();
        self.expect(b')')?;
        Ok(store.perfect_murder(n))
    }

    fn braces(&mut self, store: &mut Store) -> Result<GameId> {
        self.expect(b'{')?;
        let (left, sigma_left) = self.list(store, b'|', true)?;
        self.expect(b'|')?;
        let (right, sigma_right) = self.list(store, b'}', false)?;
        self.expect(b'}')?;
        Ok(store.intern(&left, &right, sigma_left, sigma_right))
    }

    fn list(&mut self, store: &mut Store, end: u8, left_side: bool) -> Result<(Vec<GameId>, bool)> {
        let mut items = Vec::new();
        let mut sigma = false;
        self.skip_ws();
        if self.peek() == Some(end) {
            return Ok((items, sigma));
        }
        loop {
            self.skip_ws();
            self.item(store, left_side, &mut items, &mut sigma)?;
            self.skip_ws();
            if !self.eat(b',') {
                break;
            }
        }
        Ok((items, sigma))
    }

    fn item(
        &mut self,
        store: &mut Store,
        left_side: bool,
        items: &mut Vec<GameId>,
        sigma: &mut bool,
    ) -> Result<()> {
        if self.lookahead_keyword(b"SL") {
            self.pos += 2;
            if !left_side {
                return Err(self.error("SL is a Left option"));
            }
            *sigma = true;
            return Ok(());
        }
        if self.lookahead_keyword(b"SR") {
            self.pos += 2;
            if left_side {
                return Err(self.error("SR is a Right option"));
            }
            *sigma = true;
            return Ok(());
        }
        if self.bytes[self.pos..].starts_with(b"+-") {
            self.pos += 2;
            self.skip_ws();
            let mut games = Vec::new();
            if self.eat(b'(') {
                loop {
                    games.push(self.game(store)?);
                    self.skip_ws();
                    if !self.eat(b',') {
                        break;
                    }
                }
                self.skip_ws();
                self.expect(b')')?;
            } else {
                games.push(self.game(store)?);
            }
            let conjugates: Vec<GameId> = games.iter().map(|&g| store.conjugate(g)).collect();
            items.push(store.intern(&games, &conjugates, false, false));
            return Ok(());
        }
        items.push(self.game(store)?);
        Ok(())
    }

    fn lookahead_keyword(&self, kw: &[u8]) -> bool {
        let rest = &self.bytes[self.pos..];
        if !rest.starts_with(kw) {
            return false;
        }
        // Not a prefix of a longer symbol run.
        !matches!(rest.get(kw.len()), Some(c) if c.is_ascii_alphanumeric())
    }
}
