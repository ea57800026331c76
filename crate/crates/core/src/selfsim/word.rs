use std::fmt;

use super::SelfSimError;

/// A generator or its formal inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub gen: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(gen: usize) -> Letter {
        Letter { gen, inverse: false }
    }

    pub fn inv(self) -> Letter {
        Letter {
            gen: self.gen,
            inverse: !self.inverse,
        }
    }
}

/// A word over generators and their inverses, read left to right in the
/// order of application.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn letter(l: Letter) -> Word {
        Word(vec![l])
    }

    pub fn gen(g: usize) -> Word {
        Word(vec![Letter::new(g)])
    }

    /// Builds a word and freely reduces it.
    pub fn from_letters(letters: Vec<Letter>) -> Word {
        let mut w = Word(Vec::with_capacity(letters.len()));
        for l in letters {
            w.push(l);
        }
        w
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Appends `l`, cancelling against a trailing inverse.
    pub fn push(&mut self, l: Letter) {
        if self.0.last() == Some(&l.inv()) {
            self.0.pop();
        } else {
            self.0.push(l);
        }
    }

    pub fn then(&self, other: &Word) -> Word {
        let mut w = self.clone();
        for &l in &other.0 {
            w.push(l);
        }
        w
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inv()).collect())
    }

    pub fn pow(&self, e: i64) -> Word {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        (0..e.unsigned_abs()).fold(Word::empty(), |acc, _| acc.then(&base))
    }

    /// Parses words such as `"bcd"`, `"a^-1 t"`, `"(ad)^4"` or `"1"`.
    ///
    /// Generator names are matched greedily (longest name first), so
    /// multi-character names work as long as the name set is prefix-free
    /// enough to be unambiguous.
    pub fn parse(text: &str, names: &[String]) -> Result<Word, SelfSimError> {
        let mut order: Vec<usize> = (0..names.len()).collect();
        order.sort_by_key(|&i| std::cmp::Reverse(names[i].len()));
        let chars: Vec<char> = text.chars().collect();
        let mut pos = 0;
        let w = parse_seq(&chars, &mut pos, names, &order, text)?;
        if pos != chars.len() {
            return Err(SelfSimError::Parse(format!("unexpected {:?} in {text:?}", chars[pos])));
        }
        Ok(w)
    }

    pub fn display<'a>(&'a self, names: &'a [String]) -> WordDisplay<'a> {
        WordDisplay { word: self, names }
    }
}

fn parse_seq(
    chars: &[char],
    pos: &mut usize,
    names: &[String],
    order: &[usize],
    text: &str,
) -> Result<Word, SelfSimError> {
    let mut out = Word::empty();
    loop {
        while *pos < chars.len() && (chars[*pos].is_whitespace() || chars[*pos] == '*' || chars[*pos] == '·') {
            *pos += 1;
        }
        if *pos >= chars.len() || chars[*pos] == ')' {
            return Ok(out);
        }
        let atom = if chars[*pos] == '(' {
            *pos += 1;
            let inner = parse_seq(chars, pos, names, order, text)?;
            if *pos >= chars.len() || chars[*pos] != ')' {
                return Err(SelfSimError::Parse(format!("unbalanced parenthesis in {text:?}")));
            }
            *pos += 1;
            inner
        } else if chars[*pos] == '1' || chars[*pos] == 'ε' && !names.iter().any(|n| n == "ε") {
            *pos += 1;
            Word::empty()
        } else {
            let rest: String = chars[*pos..].iter().collect();
            let g = order
                .iter()
                .copied()
                .find(|&i| !names[i].is_empty() && rest.starts_with(names[i].as_str()))
                .ok_or_else(|| SelfSimError::UnknownSymbol(rest.chars().take(8).collect()))?;
            *pos += names[g].chars().count();
            Word::gen(g)
        };
        let exp = parse_exponent(chars, pos, text)?;
        out = out.then(&atom.pow(exp));
    }
}

fn parse_exponent(chars: &[char], pos: &mut usize, text: &str) -> Result<i64, SelfSimError> {
    if *pos < chars.len() && chars[*pos] == '\'' {
        *pos += 1;
        return Ok(-1);
    }
    if *pos >= chars.len() || chars[*pos] != '^' {
        return Ok(1);
    }
    *pos += 1;
    let start = *pos;
    if *pos < chars.len() && (chars[*pos] == '-' || chars[*pos] == '+') {
        *pos += 1;
    }
    while *pos < chars.len() && chars[*pos].is_ascii_digit() {
        *pos += 1;
    }
    let raw: String = chars[start..*pos].iter().collect();
    raw.parse()
        .map_err(|_| SelfSimError::Parse(format!("bad exponent {raw:?} in {text:?}")))
}

pub struct WordDisplay<'a> {
    word: &'a Word,
    names: &'a [String],
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let letters = self.word.letters();
        if letters.is_empty() {
            return write!(f, "1");
        }
        let spaced = self.names.iter().any(|n| n.chars().count() > 1);
        let mut i = 0;
        while i < letters.len() {
            let l = letters[i];
            let mut run = 1;
            while i + run < letters.len() && letters[i + run] == l {
                run += 1;
            }
            if i > 0 && spaced {
                write!(f, " ")?;
            }
            write!(f, "{}", self.names[l.gen])?;
            match (l.inverse, run) {
                (false, 1) => {}
                (false, r) => write!(f, "^{r}")?,
                (true, r) => write!(f, "^-{r}")?,
            }
            i += run;
        }
        Ok(())
    }
}
