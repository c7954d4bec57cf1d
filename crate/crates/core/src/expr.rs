//! Scalar expression trees over chart coordinates: parsing, exact symbolic
//! differentiation and IEEE-754 evaluation.
//!
//! Expressions are hash-consed into immutable DAGs, so structurally equal
//! subtrees are pointer-equal. Evaluation memoizes per pointer, which keeps
//! the cost proportional to the DAG size even after repeated differentiation
//! (the product rule shares children instead of copying them).

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnaryOp {
    Neg,
    Exp,
    Log,
    Sqrt,
    Abs,
    Sin,
    Cos,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Debug)]
pub enum Node {
    Const(f64),
    /// Coordinate variable: index into the chart's coordinate list.
    Var { index: usize, name: Arc<str> },
    Unary(UnaryOp, Expr),
    Binary(BinaryOp, Expr, Expr),
}

/// Immutable scalar expression. Cheap to clone; safe to share across threads.
#[derive(Clone)]
pub struct Expr(Arc<Node>);

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(PartialEq, Eq, Hash)]
enum Key {
    Const(u64),
    Var(usize),
    Unary(UnaryOp, usize),
    Binary(BinaryOp, usize, usize),
}

thread_local! {
    static INTERN: RefCell<HashMap<Key, Expr>> = RefCell::new(HashMap::new());
    static DERIV: RefCell<HashMap<(usize, usize), Expr>> = RefCell::new(HashMap::new());
}

fn intern(key: Key, build: impl FnOnce() -> Node) -> Expr {
    INTERN.with(|m| {
        let mut m = m.borrow_mut();
        if let Some(e) = m.get(&key) {
            return e.clone();
        }
        let e = Expr(Arc::new(build()));
        m.insert(key, e.clone());
        e
    })
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvalError {
    #[error("division by zero in `{expr}` at point {point:?}")]
    DivisionByZero { expr: String, point: Vec<f64> },
    #[error("log of non-positive argument {arg} in `{expr}` at point {point:?}")]
    LogDomain { expr: String, arg: f64, point: Vec<f64> },
    #[error("sqrt of negative argument {arg} in `{expr}` at point {point:?}")]
    SqrtDomain { expr: String, arg: f64, point: Vec<f64> },
    #[error("pow of negative base {base} with non-integer exponent {exp} in `{expr}` at point {point:?}")]
    PowDomain { expr: String, base: f64, exp: f64, point: Vec<f64> },
    #[error("non-finite result in `{expr}` at point {point:?}")]
    NonFinite { expr: String, point: Vec<f64> },
    #[error("point has {got} coordinates, expression expects index {index}")]
    BadPoint { index: usize, got: usize },
}

impl Expr {
    pub fn constant(v: f64) -> Expr {
        intern(Key::Const(v.to_bits()), || Node::Const(v))
    }

    pub fn zero() -> Expr {
        Expr::constant(0.0)
    }

    pub fn one() -> Expr {
        Expr::constant(1.0)
    }

    pub fn var(index: usize, name: &str) -> Expr {
        intern(Key::Var(index), || Node::Var {
            index,
            name: Arc::from(name),
        })
    }

    fn ptr(&self) -> usize {
        Arc::as_ptr(&self.0) as usize
    }

    pub fn node(&self) -> &Node {
        &self.0
    }

    pub fn as_const(&self) -> Option<f64> {
        match *self.0 {
            Node::Const(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.as_const() == Some(0.0)
    }

    fn is_one(&self) -> bool {
        self.as_const() == Some(1.0)
    }

    fn unary(op: UnaryOp, a: Expr) -> Expr {
        if let Some(v) = a.as_const() {
            let folded = match op {
                UnaryOp::Neg => Some(-v),
                UnaryOp::Exp => Some(v.exp()),
                UnaryOp::Log => (v > 0.0).then(|| v.ln()),
                UnaryOp::Sqrt => (v >= 0.0).then(|| v.sqrt()),
                UnaryOp::Abs => Some(v.abs()),
                UnaryOp::Sin => Some(v.sin()),
                UnaryOp::Cos => Some(v.cos()),
            };
            if let Some(f) = folded {
                if f.is_finite() {
                    return Expr::constant(f);
                }
            }
        }
        if op == UnaryOp::Neg {
            if let Node::Unary(UnaryOp::Neg, inner) = a.node() {
                return inner.clone();
            }
        }
        intern(Key::Unary(op, a.ptr()), || Node::Unary(op, a))
    }

    fn binary(op: BinaryOp, a: Expr, b: Expr) -> Expr {
        if let (Some(x), Some(y)) = (a.as_const(), b.as_const()) {
            let folded = match op {
                BinaryOp::Add => Some(x + y),
                BinaryOp::Sub => Some(x - y),
                BinaryOp::Mul => Some(x * y),
                BinaryOp::Div => (y != 0.0).then(|| x / y),
                BinaryOp::Pow => {
                    let v = x.powf(y);
                    v.is_finite().then_some(v)
                }
            };
            if let Some(f) = folded {
                if f.is_finite() {
                    return Expr::constant(f);
                }
            }
        }
        match op {
            BinaryOp::Add => {
                if a.is_zero() {
                    return b;
                }
                if b.is_zero() {
                    return a;
                }
            }
            BinaryOp::Sub => {
                if b.is_zero() {
                    return a;
                }
                if a.is_zero() {
                    return b.neg();
                }
            }
            BinaryOp::Mul => {
                if a.is_zero() || b.is_zero() {
                    return Expr::zero();
                }
                if a.is_one() {
                    return b;
                }
                if b.is_one() {
                    return a;
                }
                if a.as_const() == Some(-1.0) {
                    return b.neg();
                }
                if b.as_const() == Some(-1.0) {
                    return a.neg();
                }
            }
            BinaryOp::Div => {
                if a.is_zero() {
                    return Expr::zero();
                }
                if b.is_one() {
                    return a;
                }
            }
            BinaryOp::Pow => {
                if b.is_zero() {
                    return Expr::one();
                }
                if b.is_one() {
                    return a;
                }
            }
        }
        intern(Key::Binary(op, a.ptr(), b.ptr()), || Node::Binary(op, a, b))
    }

    pub fn add(&self, rhs: &Expr) -> Expr {
        Expr::binary(BinaryOp::Add, self.clone(), rhs.clone())
    }
    pub fn sub(&self, rhs: &Expr) -> Expr {
        Expr::binary(BinaryOp::Sub, self.clone(), rhs.clone())
    }
    pub fn mul(&self, rhs: &Expr) -> Expr {
        Expr::binary(BinaryOp::Mul, self.clone(), rhs.clone())
    }
    pub fn div(&self, rhs: &Expr) -> Expr {
        Expr::binary(BinaryOp::Div, self.clone(), rhs.clone())
    }
    pub fn pow(&self, rhs: &Expr) -> Expr {
        Expr::binary(BinaryOp::Pow, self.clone(), rhs.clone())
    }
    pub fn neg(&self) -> Expr {
        Expr::unary(UnaryOp::Neg, self.clone())
    }
    pub fn exp(&self) -> Expr {
        Expr::unary(UnaryOp::Exp, self.clone())
    }
    pub fn log(&self) -> Expr {
        Expr::unary(UnaryOp::Log, self.clone())
    }
    pub fn sqrt(&self) -> Expr {
        Expr::unary(UnaryOp::Sqrt, self.clone())
    }
    pub fn abs(&self) -> Expr {
        Expr::unary(UnaryOp::Abs, self.clone())
    }
    pub fn sin(&self) -> Expr {
        Expr::unary(UnaryOp::Sin, self.clone())
    }
    pub fn cos(&self) -> Expr {
        Expr::unary(UnaryOp::Cos, self.clone())
    }

    pub fn scale(&self, k: f64) -> Expr {
        self.mul(&Expr::constant(k))
    }

    /// Exact partial derivative with respect to the coordinate of the given
    /// index. Constant folding only, no other simplification.
    pub fn differentiate(&self, var: usize) -> Expr {
        if let Some(hit) = DERIV.with(|m| m.borrow().get(&(self.ptr(), var)).cloned()) {
            return hit;
        }
        let d = match self.node() {
            Node::Const(_) => Expr::zero(),
            Node::Var { index, .. } => {
                if *index == var {
                    Expr::one()
                } else {
                    Expr::zero()
                }
            }
            Node::Unary(op, a) => {
                let da = a.differentiate(var);
                match op {
                    UnaryOp::Neg => da.neg(),
                    UnaryOp::Exp => self.mul(&da),
                    UnaryOp::Log => da.div(a),
                    UnaryOp::Sqrt => da.div(&self.scale(2.0)),
                    // d|u| = sign(u) du, written u/|u| du
                    UnaryOp::Abs => a.div(self).mul(&da),
                    UnaryOp::Sin => a.cos().mul(&da),
                    UnaryOp::Cos => a.sin().neg().mul(&da),
                }
            }
            Node::Binary(op, a, b) => {
                let da = a.differentiate(var);
                let db = b.differentiate(var);
                match op {
                    BinaryOp::Add => da.add(&db),
                    BinaryOp::Sub => da.sub(&db),
                    BinaryOp::Mul => da.mul(b).add(&a.mul(&db)),
                    BinaryOp::Div => da.mul(b).sub(&a.mul(&db)).div(&b.mul(b)),
                    BinaryOp::Pow => {
                        if let Some(k) = b.as_const() {
                            // d(a^k) = k a^(k-1) a'
                            b.mul(&a.pow(&Expr::constant(k - 1.0))).mul(&da)
                        } else if db.is_zero() {
                            b.mul(&a.pow(&b.sub(&Expr::one()))).mul(&da)
                        } else {
                            // general a^b = exp(b log a)
                            let term = db.mul(&a.log()).add(&b.mul(&da).div(a));
                            self.mul(&term)
                        }
                    }
                }
            }
        };
        DERIV.with(|m| m.borrow_mut().insert((self.ptr(), var), d.clone()));
        d
    }

    /// IEEE-754 double evaluation at a point (values indexed by coordinate).
    pub fn evaluate(&self, point: &[f64]) -> Result<f64, EvalError> {
        let mut memo: HashMap<usize, f64> = HashMap::new();
        self.eval_memo(point, &mut memo)
    }

    fn eval_memo(&self, point: &[f64], memo: &mut HashMap<usize, f64>) -> Result<f64, EvalError> {
        if let Some(v) = memo.get(&self.ptr()) {
            return Ok(*v);
        }
        let fail = |e: &Expr| -> String {
            let s = e.to_string();
            if s.len() > 80 {
                format!("{}…", &s[..80])
            } else {
                s
            }
        };
        let v = match self.node() {
            Node::Const(v) => *v,
            Node::Var { index, .. } => *point.get(*index).ok_or(EvalError::BadPoint {
                index: *index,
                got: point.len(),
            })?,
            Node::Unary(op, a) => {
                let x = a.eval_memo(point, memo)?;
                match op {
                    UnaryOp::Neg => -x,
                    UnaryOp::Exp => x.exp(),
                    UnaryOp::Log => {
                        if x <= 0.0 {
                            return Err(EvalError::LogDomain {
                                expr: fail(self),
                                arg: x,
                                point: point.to_vec(),
                            });
                        }
                        x.ln()
                    }
                    UnaryOp::Sqrt => {
                        if x < 0.0 {
                            return Err(EvalError::SqrtDomain {
                                expr: fail(self),
                                arg: x,
                                point: point.to_vec(),
                            });
                        }
                        x.sqrt()
                    }
                    UnaryOp::Abs => x.abs(),
                    UnaryOp::Sin => x.sin(),
                    UnaryOp::Cos => x.cos(),
                }
            }
            Node::Binary(op, a, b) => {
                let x = a.eval_memo(point, memo)?;
                let y = b.eval_memo(point, memo)?;
                match op {
                    BinaryOp::Add => x + y,
                    BinaryOp::Sub => x - y,
                    BinaryOp::Mul => x * y,
                    BinaryOp::Div => {
                        if y == 0.0 {
                            return Err(EvalError::DivisionByZero {
                                expr: fail(self),
                                point: point.to_vec(),
                            });
                        }
                        x / y
                    }
                    BinaryOp::Pow => {
                        if x < 0.0 && y.fract() != 0.0 {
                            return Err(EvalError::PowDomain {
                                expr: fail(self),
                                base: x,
                                exp: y,
                                point: point.to_vec(),
                            });
                        }
                        x.powf(y)
                    }
                }
            }
        };
        if !v.is_finite() {
            return Err(EvalError::NonFinite {
                expr: fail(self),
                point: point.to_vec(),
            });
        }
        memo.insert(self.ptr(), v);
        Ok(v)
    }

    /// Directional derivative along a coefficient vector of coordinate fields.
    pub fn directional(&self, coeffs: &[Expr]) -> Expr {
        let mut acc = Expr::zero();
        for (i, c) in coeffs.iter().enumerate() {
            acc = acc.add(&c.mul(&self.differentiate(i)));
        }
        acc
    }
}

fn prec(node: &Node) -> u8 {
    match node {
        Node::Binary(BinaryOp::Add | BinaryOp::Sub, ..) => 1,
        Node::Binary(BinaryOp::Mul | BinaryOp::Div, ..) => 2,
        Node::Unary(UnaryOp::Neg, ..) => 3,
        Node::Binary(BinaryOp::Pow, ..) => 4,
        _ => 5,
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn child(f: &mut fmt::Formatter<'_>, e: &Expr, min: u8) -> fmt::Result {
            if prec(e.node()) < min {
                write!(f, "(")?;
                write!(f, "{e}")?;
                write!(f, ")")
            } else {
                write!(f, "{e}")
            }
        }
        match self.node() {
            Node::Const(v) => {
                if *v < 0.0 {
                    write!(f, "({v})")
                } else {
                    write!(f, "{v}")
                }
            }
            Node::Var { name, .. } => write!(f, "{name}"),
            Node::Unary(UnaryOp::Neg, a) => {
                write!(f, "-")?;
                child(f, a, 3)
            }
            Node::Unary(op, a) => {
                let name = match op {
                    UnaryOp::Exp => "exp",
                    UnaryOp::Log => "log",
                    UnaryOp::Sqrt => "sqrt",
                    UnaryOp::Abs => "abs",
                    UnaryOp::Sin => "sin",
                    UnaryOp::Cos => "cos",
                    UnaryOp::Neg => unreachable!(),
                };
                write!(f, "{name}({a})")
            }
            Node::Binary(op, a, b) => match op {
                BinaryOp::Add => {
                    child(f, a, 1)?;
                    write!(f, "+")?;
                    child(f, b, 2)
                }
                BinaryOp::Sub => {
                    child(f, a, 1)?;
                    write!(f, "-")?;
                    child(f, b, 2)
                }
                BinaryOp::Mul => {
                    child(f, a, 2)?;
                    write!(f, "*")?;
                    child(f, b, 3)
                }
                BinaryOp::Div => {
                    child(f, a, 2)?;
                    write!(f, "/")?;
                    child(f, b, 3)
                }
                BinaryOp::Pow => {
                    child(f, a, 5)?;
                    write!(f, "^")?;
                    child(f, b, 4)
                }
            },
        }
    }
}

/// Parse failures carry 1-based byte offsets into the input.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParseError {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown identifier `{name}` at offset {offset}")]
    UnknownIdentifier { offset: usize, name: String },
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    coords: &'a [String],
}

const FUNCTIONS: &[(&str, UnaryOp)] = &[
    ("exp", UnaryOp::Exp),
    ("log", UnaryOp::Log),
    ("sqrt", UnaryOp::Sqrt),
    ("abs", UnaryOp::Abs),
    ("sin", UnaryOp::Sin),
    ("cos", UnaryOp::Cos),
];

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn syntax<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            offset: self.pos + 1,
            message: message.into(),
        })
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        while let Some(c) = self.peek() {
            match c {
                b'+' => {
                    self.pos += 1;
                    lhs = lhs.add(&self.term()?);
                }
                b'-' => {
                    self.pos += 1;
                    lhs = lhs.sub(&self.term()?);
                }
                _ => break,
            }
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        while let Some(c) = self.peek() {
            match c {
                b'*' => {
                    self.pos += 1;
                    lhs = lhs.mul(&self.unary()?);
                }
                b'/' => {
                    self.pos += 1;
                    lhs = lhs.div(&self.unary()?);
                }
                _ => break,
            }
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            // right-associative; unary minus allowed on the exponent
            let exponent = self.unary()?;
            return Ok(base.pow(&exponent));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            None => self.syntax("unexpected end of input"),
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() == Some(b')') {
                    self.pos += 1;
                    Ok(inner)
                } else {
                    self.syntax("expected `)`")
                }
            }
            Some(c) if c.is_ascii_digit() => self.number(),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => self.identifier(),
            Some(c) => self.syntax(format!("unexpected character `{}`", c as char)),
        }
    }

    fn number(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.bytes.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
        }
        if matches!(self.bytes.get(self.pos), Some(b'e') | Some(b'E')) {
            let mark = self.pos;
            self.pos += 1;
            if matches!(self.bytes.get(self.pos), Some(b'+') | Some(b'-')) {
                self.pos += 1;
            }
            if self.bytes.get(self.pos).is_some_and(|b| b.is_ascii_digit()) {
                while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
            } else {
                // `e` belonged to an identifier-like token, not this literal
                self.pos = mark;
            }
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        match text.parse::<f64>() {
            Ok(v) => Ok(Expr::constant(v)),
            Err(_) => Err(ParseError::Syntax {
                offset: start + 1,
                message: format!("invalid number literal `{text}`"),
            }),
        }
    }

    fn identifier(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        while self
            .bytes
            .get(self.pos)
            .is_some_and(|b| b.is_ascii_alphanumeric() || *b == b'_')
        {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.bytes[start..self.pos])
            .unwrap()
            .to_string();
        if let Some((_, op)) = FUNCTIONS.iter().find(|(f, _)| *f == name) {
            self.skip_ws();
            if self.bytes.get(self.pos) != Some(&b'(') {
                return self.syntax(format!("expected `(` after function `{name}`"));
            }
            self.pos += 1;
            let arg = self.expr()?;
            if self.peek() != Some(b')') {
                return self.syntax("expected `)`");
            }
            self.pos += 1;
            return Ok(Expr::unary(*op, arg));
        }
        if let Some(index) = self.coords.iter().position(|c| *c == name) {
            return Ok(Expr::var(index, &name));
        }
        Err(ParseError::UnknownIdentifier {
            offset: start + 1,
            name,
        })
    }
}

/// Parse an expression string against an ordered coordinate list.
pub fn parse(text: &str, coords: &[String]) -> Result<Expr, ParseError> {
    let mut p = Parser {
        bytes: text.as_bytes(),
        pos: 0,
        coords,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.bytes.len() {
        return p.syntax("trailing input");
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn xyz() -> Vec<String> {
        vec!["x".into(), "y".into(), "z".into()]
    }

    #[test]
    fn parses_linear() {
        let e = parse("2*y+z", &xyz()).unwrap();
        assert_eq!(e.evaluate(&[0.0, 1.0, 3.0]).unwrap(), 5.0);
    }

    #[test]
    fn parses_function_call() {
        let e = parse("exp(y+z)", &xyz()).unwrap();
        assert_eq!(e.evaluate(&[7.0, 0.0, 0.0]).unwrap(), 1.0);
    }

    #[test]
    fn unbalanced_paren_offset() {
        let err = parse("2*(y+", &xyz()).unwrap_err();
        assert_eq!(
            err,
            ParseError::Syntax {
                offset: 6,
                message: "unexpected end of input".into()
            }
        );
    }

    #[test]
    fn unknown_identifier() {
        let err = parse("2*w", &xyz()).unwrap_err();
        assert!(matches!(err, ParseError::UnknownIdentifier { ref name, .. } if name == "w"));
    }

    #[test]
    fn precedence_and_associativity() {
        let e = parse("2^3^2", &xyz()).unwrap();
        assert_eq!(e.as_const(), Some(512.0)); // right-assoc
        let e = parse("-2^2", &xyz()).unwrap();
        assert_eq!(e.as_const(), Some(-4.0)); // ^ binds tighter than unary -
        let e = parse("1-2-3", &xyz()).unwrap();
        assert_eq!(e.as_const(), Some(-4.0)); // left-assoc
        let e = parse("2^-1", &xyz()).unwrap();
        assert_eq!(e.as_const(), Some(0.5));
    }

    #[test]
    fn derivative_examples() {
        let coords = xyz();
        let e = parse("2*y+z", &coords).unwrap();
        assert_eq!(e.differentiate(2).as_const(), Some(1.0));
        let e = parse("exp(y+z)", &coords).unwrap();
        assert_eq!(e.differentiate(0).as_const(), Some(0.0));
        let e = parse("z^2", &coords).unwrap();
        let d = e.differentiate(2);
        assert_eq!(d.evaluate(&[0.0, 0.0, 5.0]).unwrap(), 10.0);
    }

    #[test]
    fn division_by_zero_is_domain_error() {
        let e = parse("1/(2*y-z)", &xyz()).unwrap();
        let err = e.evaluate(&[0.0, 1.0, 2.0]).unwrap_err();
        assert!(matches!(err, EvalError::DivisionByZero { .. }));
    }

    #[test]
    fn pow_negative_base_non_integer_exponent() {
        let e = parse("(2*y-z)^(1/2)", &xyz()).unwrap();
        assert!(e.evaluate(&[0.0, 5.0, 0.0]).is_ok());
        let err = e.evaluate(&[0.0, -5.0, 0.0]).unwrap_err();
        assert!(matches!(err, EvalError::PowDomain { .. }));
    }

    #[test]
    fn interning_dedups() {
        let a = parse("x+y", &xyz()).unwrap();
        let b = parse("x + y", &xyz()).unwrap();
        assert_eq!(a.ptr(), b.ptr());
    }

    /// Central finite difference of the evaluated function.
    pub fn central_diff(e: &Expr, p: &[f64], var: usize) -> f64 {
        let h = 1e-5 * p[var].abs().max(1.0);
        let mut hi = p.to_vec();
        let mut lo = p.to_vec();
        hi[var] += h;
        lo[var] -= h;
        (e.evaluate(&hi).unwrap() - e.evaluate(&lo).unwrap()) / (2.0 * h)
    }

    #[test]
    fn derivative_matches_central_difference() {
        let coords = xyz();
        let exprs = [
            "2*y+z",
            "exp(y+z)",
            "(2*x+exp(y+z))^(1/2)",
            "sin(x)*cos(y)+sqrt(z+4)",
            "x^2*y/(z+3)",
            "log(x+5)*abs(y+2)",
        ];
        for text in exprs {
            let e = parse(text, &coords).unwrap();
            for k in 0..50 {
                // deterministic scatter of interior points
                let t = k as f64 / 50.0;
                let p = [0.3 + t, 0.9 - 0.5 * t, 0.4 + 0.8 * t];
                for var in 0..3 {
                    let sym = e.differentiate(var).evaluate(&p).unwrap();
                    let fd = central_diff(&e, &p, var);
                    let scale = sym.abs().max(fd.abs()).max(1.0);
                    assert!(
                        (sym - fd).abs() / scale < 1e-5,
                        "{text} d/d{var} at {p:?}: sym={sym} fd={fd}"
                    );
                }
            }
        }
    }

    fn arb_expr() -> impl Strategy<Value = Expr> {
        let leaf = prop_oneof![
            (-3.0f64..3.0).prop_map(Expr::constant),
            (0usize..3).prop_map(|i| Expr::var(i, ["x", "y", "z"][i])),
        ];
        leaf.prop_recursive(4, 32, 3, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| a.add(&b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| a.sub(&b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| a.mul(&b)),
                inner.clone().prop_map(|a| a.neg()),
                inner.clone().prop_map(|a| a.sin()),
                inner.clone().prop_map(|a| a.cos()),
                inner.prop_map(|a| a.exp()),
            ]
        })
    }

    proptest! {
        #[test]
        fn print_parse_roundtrip_evaluates_identically(e in arb_expr()) {
            let text = e.to_string();
            let coords = xyz();
            let reparsed = parse(&text, &coords).unwrap();
            for k in 0..100 {
                let t = k as f64 / 100.0;
                let p = [2.0*t - 1.0, 1.0 - t, 0.5*t];
                let a = e.evaluate(&p);
                let b = reparsed.evaluate(&p);
                match (a, b) {
                    (Ok(x), Ok(y)) => {
                        let scale = x.abs().max(y.abs()).max(1.0);
                        prop_assert!((x - y).abs() / scale < 1e-12, "{text}: {x} vs {y}");
                    }
                    (Err(_), Err(_)) => {}
                    (a, b) => prop_assert!(false, "{text}: one side failed: {a:?} vs {b:?}"),
                }
            }
        }
    }
}
