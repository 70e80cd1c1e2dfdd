//! Full-match regular expressions for `valuePattern` checks.
//!
//! Supported syntax: literals, `.`, character classes (`[A-D]`, `[^0-9_]`),
//! the escapes `\d \w \s` (and negations) plus escaped metacharacters,
//! groups `( )` / `(?: )`, alternation `|`, the quantifiers `* + ?` and
//! `{m}`, `{m,}`, `{m,n}`, and the anchors `^ $`.
//!
//! Matching is always against the whole value, whether or not the pattern
//! carries `^...$`. Programs run on a Pike VM, so matching is linear in the
//! input length.

use std::fmt;

const MAX_REPEAT: u32 = 1000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid pattern at offset {position}: {message}")]
pub struct PatternError {
    /// Character offset into the pattern.
    pub position: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct ClassSet {
    negated: bool,
    ranges: Vec<(char, char)>,
}

impl ClassSet {
    fn contains(&self, c: char) -> bool {
        self.ranges.iter().any(|&(lo, hi)| lo <= c && c <= hi) != self.negated
    }

    fn digit(negated: bool) -> Self {
        ClassSet {
            negated,
            ranges: vec![('0', '9')],
        }
    }

    fn word(negated: bool) -> Self {
        ClassSet {
            negated,
            ranges: vec![('0', '9'), ('A', 'Z'), ('_', '_'), ('a', 'z')],
        }
    }

    fn space(negated: bool) -> Self {
        ClassSet {
            negated,
            ranges: vec![('\t', '\r'), (' ', ' ')],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Ast {
    Empty,
    Char(char),
    Any,
    Class(ClassSet),
    Start,
    End,
    Concat(Vec<Ast>),
    Alt(Vec<Ast>),
    Repeat { inner: Box<Ast>, min: u32, max: Option<u32> },
}

struct Parser<'a> {
    chars: &'a [char],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, position: usize, message: impl Into<String>) -> PatternError {
        PatternError {
            position,
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn alt(&mut self, depth: usize) -> Result<Ast, PatternError> {
        let mut branches = vec![self.concat(depth)?];
        while self.peek() == Some('|') {
            self.pos += 1;
            branches.push(self.concat(depth)?);
        }
        Ok(if branches.len() == 1 {
            branches.pop().unwrap()
        } else {
            Ast::Alt(branches)
        })
    }

    fn concat(&mut self, depth: usize) -> Result<Ast, PatternError> {
        let mut items = Vec::new();
        while let Some(c) = self.peek() {
            match c {
                '|' => break,
                ')' => {
                    if depth == 0 {
                        return Err(self.err(self.pos, "unmatched `)`"));
                    }
                    break;
                }
                _ => {
                    let atom_pos = self.pos;
                    let atom = self.atom(depth)?;
                    let atom = self.quantified(atom, atom_pos)?;
                    items.push(atom);
                }
            }
        }
        Ok(match items.len() {
            0 => Ast::Empty,
            1 => items.pop().unwrap(),
            _ => Ast::Concat(items),
        })
    }

    fn number(&mut self) -> Option<u32> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return None;
        }
        self.chars[start..self.pos].iter().collect::<String>().parse().ok()
    }

    fn quantified(&mut self, atom: Ast, atom_pos: usize) -> Result<Ast, PatternError> {
        let qpos = self.pos;
        let (min, max) = match self.peek() {
            Some('*') => {
                self.pos += 1;
                (0, None)
            }
            Some('+') => {
                self.pos += 1;
                (1, None)
            }
            Some('?') => {
                self.pos += 1;
                (0, Some(1))
            }
            Some('{') => {
                self.pos += 1;
                let min = self.number().ok_or_else(|| self.err(qpos, "expected a number after `{`"))?;
                let max = match self.peek() {
                    Some('}') => Some(min),
                    Some(',') => {
                        self.pos += 1;
                        if self.peek() == Some('}') {
                            None
                        } else {
                            Some(self.number().ok_or_else(|| self.err(self.pos, "expected a number or `}`"))?)
                        }
                    }
                    _ => return Err(self.err(self.pos, "malformed counted repetition")),
                };
                if self.peek() != Some('}') {
                    return Err(self.err(self.pos, "expected `}`"));
                }
                self.pos += 1;
                if let Some(max) = max {
                    if max < min {
                        return Err(self.err(qpos, "repetition maximum below minimum"));
                    }
                }
                if min > MAX_REPEAT || max.is_some_and(|m| m > MAX_REPEAT) {
                    return Err(self.err(qpos, format!("repetition bound above {MAX_REPEAT}")));
                }
                (min, max)
            }
            _ => return Ok(atom),
        };
        if matches!(atom, Ast::Start | Ast::End) {
            return Err(self.err(atom_pos, "anchors cannot be repeated"));
        }
        // lazy modifier: irrelevant for whole-value matching
        if self.peek() == Some('?') {
            self.pos += 1;
        }
        if matches!(self.peek(), Some('*' | '+' | '?' | '{')) {
            return Err(self.err(self.pos, "stacked quantifiers"));
        }
        Ok(Ast::Repeat {
            inner: Box::new(atom),
            min,
            max,
        })
    }

    fn atom(&mut self, depth: usize) -> Result<Ast, PatternError> {
        let start = self.pos;
        let c = self.peek().expect("caller checked");
        self.pos += 1;
        Ok(match c {
            '.' => Ast::Any,
            '^' => Ast::Start,
            '$' => Ast::End,
            '(' => {
                if self.peek() == Some('?') {
                    if self.chars.get(self.pos + 1) == Some(&':') {
                        self.pos += 2;
                    } else {
                        return Err(self.err(start, "unsupported group syntax"));
                    }
                }
                let inner = self.alt(depth + 1)?;
                if self.peek() != Some(')') {
                    return Err(self.err(start, "unclosed group"));
                }
                self.pos += 1;
                inner
            }
            '[' => Ast::Class(self.class(start)?),
            '\\' => self.escape(start)?,
            '*' | '+' | '?' | '{' => return Err(self.err(start, format!("nothing to repeat before `{c}`"))),
            c => Ast::Char(c),
        })
    }

    fn escape(&mut self, start: usize) -> Result<Ast, PatternError> {
        let c = self.peek().ok_or_else(|| self.err(start, "trailing backslash"))?;
        self.pos += 1;
        Ok(match c {
            'd' => Ast::Class(ClassSet::digit(false)),
            'D' => Ast::Class(ClassSet::digit(true)),
            'w' => Ast::Class(ClassSet::word(false)),
            'W' => Ast::Class(ClassSet::word(true)),
            's' => Ast::Class(ClassSet::space(false)),
            'S' => Ast::Class(ClassSet::space(true)),
            _ => Ast::Char(self.escaped_literal(c, start)?),
        })
    }

    fn escaped_literal(&self, c: char, start: usize) -> Result<char, PatternError> {
        match c {
            'n' => Ok('\n'),
            't' => Ok('\t'),
            'r' => Ok('\r'),
            c if c.is_ascii_alphanumeric() => Err(self.err(start, format!("unsupported escape `\\{c}`"))),
            c => Ok(c),
        }
    }

    fn class(&mut self, start: usize) -> Result<ClassSet, PatternError> {
        let mut set = ClassSet {
            negated: false,
            ranges: Vec::new(),
        };
        if self.peek() == Some('^') {
            set.negated = true;
            self.pos += 1;
        }
        let mut first = true;
        loop {
            let item_pos = self.pos;
            let c = self.peek().ok_or_else(|| self.err(start, "unclosed character class"))?;
            self.pos += 1;
            if c == ']' && !first {
                break;
            }
            first = false;
            let lo = if c == '\\' {
                let e = self.peek().ok_or_else(|| self.err(item_pos, "trailing backslash"))?;
                self.pos += 1;
                let shorthand = match e {
                    'd' => Some(ClassSet::digit(false)),
                    'w' => Some(ClassSet::word(false)),
                    's' => Some(ClassSet::space(false)),
                    'D' | 'W' | 'S' => {
                        return Err(self.err(item_pos, "negated shorthand inside a class is not supported"));
                    }
                    _ => None,
                };
                if let Some(s) = shorthand {
                    set.ranges.extend(s.ranges);
                    continue;
                }
                self.escaped_literal(e, item_pos)?
            } else {
                c
            };
            if self.peek() == Some('-') && self.chars.get(self.pos + 1).is_some_and(|&n| n != ']') {
                self.pos += 1;
                let hi_pos = self.pos;
                let mut hi = self.peek().expect("checked");
                self.pos += 1;
                if hi == '\\' {
                    let e = self.peek().ok_or_else(|| self.err(hi_pos, "trailing backslash"))?;
                    self.pos += 1;
                    hi = self.escaped_literal(e, hi_pos)?;
                }
                if hi < lo {
                    return Err(self.err(item_pos, format!("invalid range `{lo}-{hi}`")));
                }
                set.ranges.push((lo, hi));
            } else {
                set.ranges.push((lo, lo));
            }
        }
        Ok(set)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Inst {
    Char(char),
    Any,
    Class(ClassSet),
    Start,
    End,
    Split(usize, usize),
    Jmp(usize),
    Match,
}

/// A compiled pattern.
#[derive(Clone, PartialEq, Eq)]
pub struct Pattern {
    source: String,
    prog: Vec<Inst>,
}

impl fmt::Debug for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("Pattern").field(&self.source).finish()
    }
}

fn emit(ast: &Ast, prog: &mut Vec<Inst>) {
    match ast {
        Ast::Empty => {}
        Ast::Char(c) => prog.push(Inst::Char(*c)),
        Ast::Any => prog.push(Inst::Any),
        Ast::Class(s) => prog.push(Inst::Class(s.clone())),
        Ast::Start => prog.push(Inst::Start),
        Ast::End => prog.push(Inst::End),
        Ast::Concat(items) => items.iter().for_each(|i| emit(i, prog)),
        Ast::Alt(branches) => {
            // split L1, next; L1: b0; jmp end; next: split ... ; last branch
            let mut jumps = Vec::new();
            for (i, b) in branches.iter().enumerate() {
                if i + 1 < branches.len() {
                    let split = prog.len();
                    prog.push(Inst::Split(split + 1, 0));
                    emit(b, prog);
                    jumps.push(prog.len());
                    prog.push(Inst::Jmp(0));
                    let next = prog.len();
                    prog[split] = Inst::Split(split + 1, next);
                } else {
                    emit(b, prog);
                }
            }
            let end = prog.len();
            for j in jumps {
                prog[j] = Inst::Jmp(end);
            }
        }
        Ast::Repeat { inner, min, max } => {
            for _ in 0..*min {
                emit(inner, prog);
            }
            match max {
                None => {
                    let split = prog.len();
                    prog.push(Inst::Split(split + 1, 0));
                    emit(inner, prog);
                    prog.push(Inst::Jmp(split));
                    let end = prog.len();
                    prog[split] = Inst::Split(split + 1, end);
                }
                Some(max) => {
                    let mut splits = Vec::new();
                    for _ in *min..*max {
                        splits.push(prog.len());
                        prog.push(Inst::Split(0, 0));
                        emit(inner, prog);
                    }
                    let end = prog.len();
                    for s in splits {
                        prog[s] = Inst::Split(s + 1, end);
                    }
                }
            }
        }
    }
}

impl Pattern {
    pub fn compile(source: &str) -> Result<Pattern, PatternError> {
        let chars: Vec<char> = source.chars().collect();
        let mut p = Parser { chars: &chars, pos: 0 };
        let ast = p.alt(0)?;
        if p.pos != chars.len() {
            return Err(p.err(p.pos, "unexpected character"));
        }
        let mut prog = Vec::new();
        emit(&ast, &mut prog);
        prog.push(Inst::Match);
        Ok(Pattern {
            source: source.to_string(),
            prog,
        })
    }

    pub fn as_str(&self) -> &str {
        &self.source
    }

    /// True iff the whole of `value` matches.
    pub fn full_match(&self, value: &str) -> bool {
        let chars: Vec<char> = value.chars().collect();
        let n = self.prog.len();
        let mut current = ThreadList::new(n);
        let mut next = ThreadList::new(n);
        self.add(&mut current, 0, 0, chars.len());
        for (i, &c) in chars.iter().enumerate() {
            if current.is_empty() {
                return false;
            }
            next.clear();
            for k in 0..current.len() {
                let pc = current.dense[k];
                let advance = match &self.prog[pc] {
                    Inst::Char(x) => *x == c,
                    Inst::Any => c != '\n',
                    Inst::Class(s) => s.contains(c),
                    _ => false,
                };
                if advance {
                    self.add(&mut next, pc + 1, i + 1, chars.len());
                }
            }
            std::mem::swap(&mut current, &mut next);
        }
        (0..current.len()).any(|k| self.prog[current.dense[k]] == Inst::Match)
    }

    fn add(&self, list: &mut ThreadList, pc: usize, pos: usize, len: usize) {
        let mut stack = vec![pc];
        while let Some(pc) = stack.pop() {
            if !list.insert(pc) {
                continue;
            }
            match self.prog[pc] {
                Inst::Jmp(t) => stack.push(t),
                Inst::Split(a, b) => {
                    stack.push(b);
                    stack.push(a);
                }
                Inst::Start if pos == 0 => stack.push(pc + 1),
                Inst::End if pos == len => stack.push(pc + 1),
                _ => {}
            }
        }
    }
}

/// Sparse set of program counters.
struct ThreadList {
    dense: Vec<usize>,
    sparse: Vec<usize>,
}

impl ThreadList {
    fn new(n: usize) -> Self {
        ThreadList {
            dense: Vec::with_capacity(n),
            sparse: vec![0; n],
        }
    }

    fn insert(&mut self, pc: usize) -> bool {
        let i = self.sparse[pc];
        if i < self.dense.len() && self.dense[i] == pc {
            return false;
        }
        self.sparse[pc] = self.dense.len();
        self.dense.push(pc);
        true
    }

    fn len(&self) -> usize {
        self.dense.len()
    }

    fn is_empty(&self) -> bool {
        self.dense.is_empty()
    }

    fn clear(&mut self) {
        self.dense.clear();
    }
}

/// Whole-value match of `value` against `pattern`.
pub fn check_value_pattern(value: &str, pattern: &str) -> Result<bool, PatternError> {
    Ok(Pattern::compile(pattern)?.full_match(value))
}
