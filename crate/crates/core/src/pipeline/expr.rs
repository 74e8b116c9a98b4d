//! Arithmetic expressions for source terms, e.g. `1 + 0.5*cos(3*x) * r^2`.
//!
//! Variables: `x`, `y`, `z` (embedding coordinates), `r` (intrinsic distance
//! from the domain center). Constants: `pi`, `e`. Functions: `sin`, `cos`,
//! `tan`, `exp`, `ln`, `sqrt`, `abs`, `min`, `max`.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Node {
    Num(f64),
    Var(usize),
    Neg(Box<Node>),
    Bin(char, Box<Node>, Box<Node>),
    Call(String, Vec<Node>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Expr {
    root: Node,
    source: String,
}

const VARS: [&str; 4] = ["x", "y", "z", "r"];
const FUNCS: [(&str, usize); 9] = [
    ("sin", 1),
    ("cos", 1),
    ("tan", 1),
    ("exp", 1),
    ("ln", 1),
    ("sqrt", 1),
    ("abs", 1),
    ("min", 2),
    ("max", 2),
];

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<(usize, Tok)>> {
    let b = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let c = b[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < b.len() && ((b[i] as char).is_ascii_digit() || b[i] == b'.') {
                i += 1;
            }
            if i < b.len() && (b[i] == b'e' || b[i] == b'E') {
                let mut j = i + 1;
                if j < b.len() && (b[j] == b'+' || b[j] == b'-') {
                    j += 1;
                }
                if j < b.len() && (b[j] as char).is_ascii_digit() {
                    i = j;
                    while i < b.len() && (b[i] as char).is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let text = &s[start..i];
            let v = text
                .parse::<f64>()
                .map_err(|_| Error::InvalidInput(format!("bad number `{text}` at column {}", start + 1)))?;
            out.push((start, Tok::Num(v)));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < b.len() && ((b[i] as char).is_ascii_alphanumeric() || b[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Ident(s[start..i].to_string())));
        } else if "+-*/^(),".contains(c) {
            out.push((i, Tok::Op(c)));
            i += 1;
        } else {
            return Err(Error::InvalidInput(format!("unexpected character `{c}` at column {}", i + 1)));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: &'a [(usize, Tok)],
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn column(&self) -> usize {
        self.toks.get(self.pos).map_or(0, |t| t.0) + 1
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, op: char) -> Result<()> {
        if self.eat(op) {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!("expected `{op}` at column {}", self.column())))
        }
    }

    // sum := product (('+' | '-') product)*
    fn sum(&mut self) -> Result<Node> {
        let mut lhs = self.product()?;
        loop {
            let op = match self.peek() {
                Some(Tok::Op(c)) if *c == '+' || *c == '-' => *c,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            lhs = Node::Bin(op, Box::new(lhs), Box::new(self.product()?));
        }
    }

    fn product(&mut self) -> Result<Node> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Some(Tok::Op(c)) if *c == '*' || *c == '/' => *c,
                _ => return Ok(lhs),
            };
            self.pos += 1;
            lhs = Node::Bin(op, Box::new(lhs), Box::new(self.unary()?));
        }
    }

    fn unary(&mut self) -> Result<Node> {
        if self.eat('-') {
            return Ok(Node::Neg(Box::new(self.unary()?)));
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    // right associative; binds tighter than unary minus on its left
    fn power(&mut self) -> Result<Node> {
        let base = self.atom()?;
        if self.eat('^') {
            let exp = self.unary()?;
            return Ok(Node::Bin('^', Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Node> {
        let col = self.column();
        match self.toks.get(self.pos).map(|t| t.1.clone()) {
            Some(Tok::Num(v)) => {
                self.pos += 1;
                Ok(Node::Num(v))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if self.eat('(') {
                    let arity = FUNCS
                        .iter()
                        .find(|f| f.0 == name)
                        .map(|f| f.1)
                        .ok_or_else(|| Error::InvalidInput(format!("unknown function `{name}` at column {col}")))?;
                    let mut args = vec![self.sum()?];
                    while self.eat(',') {
                        args.push(self.sum()?);
                    }
                    self.expect(')')?;
                    if args.len() != arity {
                        return Err(Error::InvalidInput(format!(
                            "`{name}` takes {arity} argument(s), got {}",
                            args.len()
                        )));
                    }
                    return Ok(Node::Call(name, args));
                }
                match name.as_str() {
                    "pi" => Ok(Node::Num(std::f64::consts::PI)),
                    "e" => Ok(Node::Num(std::f64::consts::E)),
                    _ => VARS
                        .iter()
                        .position(|v| *v == name)
                        .map(Node::Var)
                        .ok_or_else(|| Error::InvalidInput(format!("unknown variable `{name}` at column {col}"))),
                }
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let inner = self.sum()?;
                self.expect(')')?;
                Ok(inner)
            }
            Some(Tok::Op(c)) => Err(Error::InvalidInput(format!("unexpected `{c}` at column {col}"))),
            None => Err(Error::InvalidInput("unexpected end of expression".into())),
        }
    }
}

impl Expr {
    pub fn parse(source: &str) -> Result<Self> {
        let toks = tokenize(source)?;
        let mut p = Parser { toks: &toks, pos: 0 };
        let root = p.sum()?;
        if p.pos != toks.len() {
            return Err(Error::InvalidInput(format!("trailing input at column {}", p.column())));
        }
        Ok(Expr {
            root,
            source: source.to_string(),
        })
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    /// Evaluates at `[x, y, z, r]`.
    pub fn eval(&self, vars: [f64; 4]) -> f64 {
        eval(&self.root, &vars)
    }
}

fn eval(n: &Node, vars: &[f64; 4]) -> f64 {
    match n {
        Node::Num(v) => *v,
        Node::Var(i) => vars[*i],
        Node::Neg(a) => -eval(a, vars),
        Node::Bin(op, a, b) => {
            let (a, b) = (eval(a, vars), eval(b, vars));
            match op {
                '+' => a + b,
                '-' => a - b,
                '*' => a * b,
                '/' => a / b,
                _ => a.powf(b),
            }
        }
        Node::Call(name, args) => {
            let a = eval(&args[0], vars);
            match name.as_str() {
                "sin" => a.sin(),
                "cos" => a.cos(),
                "tan" => a.tan(),
                "exp" => a.exp(),
                "ln" => a.ln(),
                "sqrt" => a.sqrt(),
                "abs" => a.abs(),
                "min" => a.min(eval(&args[1], vars)),
                _ => a.max(eval(&args[1], vars)),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(s: &str, v: [f64; 4]) -> f64 {
        Expr::parse(s).unwrap().eval(v)
    }

    #[test]
    fn precedence() {
        assert_eq!(ev("1 + 2*3", [0.0; 4]), 7.0);
        assert_eq!(ev("-2^2", [0.0; 4]), -4.0);
        assert_eq!(ev("2^3^2", [0.0; 4]), 512.0);
        assert_eq!(ev("(1+2)*3", [0.0; 4]), 9.0);
        assert_eq!(ev("2^-1", [0.0; 4]), 0.5);
        assert_eq!(ev("1e-2 + 2.5E1", [0.0; 4]), 25.01);
    }

    #[test]
    fn variables_and_functions() {
        let v = [1.0, 2.0, 3.0, 0.5];
        assert_eq!(ev("x + y*z - r", v), 6.5);
        assert_eq!(ev("max(x, y) + min(x, y)", v), 3.0);
        assert!((ev("cos(pi*x)", v) + 1.0).abs() < 1e-15);
        assert!((ev("sqrt(r) * sqrt(r)", v) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn errors() {
        for bad in ["", "1 +", "foo", "sin(1, 2)", "2 $ 3", "(1", "1 2", "bar(1)"] {
            assert!(Expr::parse(bad).is_err(), "{bad}");
        }
    }
}
