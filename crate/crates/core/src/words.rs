//! Multilinear elements of the free non-associative algebra.
//!
//! A [`Monomial`] is a binary bracketing of distinct variables `x1..xt`; a
//! [`MultilinearElement`] is a GF(p)-combination of monomials over the same
//! variable set. Words are written as s-expressions:
//!
//! ```text
//! (* a b)   product       (+ a b)   sum
//! (- a b)   difference    (s c a)   scalar multiple, c an integer
//! x1 .. xN  variables
//! ```

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;

use crate::algebra::StructureAlgebra;
use crate::error::{Error, Result};
use crate::field::FieldPrime;
use crate::subspace::{Row, Subspace};

/// Degree cap applied by [`enumerate_monomials`].
pub const DEFAULT_DEGREE_CAP: usize = 5;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Monomial {
    /// Variable `x_{i+1}` (0-based index).
    Var(usize),
    Mul(Box<Monomial>, Box<Monomial>),
}

impl Monomial {
    pub fn var(i: usize) -> Self {
        Monomial::Var(i)
    }

    pub fn product(a: Monomial, b: Monomial) -> Self {
        Monomial::Mul(Box::new(a), Box::new(b))
    }

    pub fn degree(&self) -> usize {
        match self {
            Monomial::Var(_) => 1,
            Monomial::Mul(a, b) => a.degree() + b.degree(),
        }
    }

    /// Variable indices in leaf order.
    pub fn leaves(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<usize>) {
        match self {
            Monomial::Var(i) => out.push(*i),
            Monomial::Mul(a, b) => {
                a.collect_leaves(out);
                b.collect_leaves(out);
            }
        }
    }

    /// Evaluates on vectors, `args[i]` substituted for `x_{i+1}`.
    pub fn eval(&self, alg: &StructureAlgebra, args: &[Row]) -> Row {
        match self {
            Monomial::Var(i) => args[*i].clone(),
            Monomial::Mul(a, b) => alg.mul(&a.eval(alg, args), &b.eval(alg, args)),
        }
    }

    /// Span of all values with `x_{i+1}` ranging over `args[i]`.
    pub fn span(&self, alg: &StructureAlgebra, args: &[Subspace]) -> Result<Subspace> {
        match self {
            Monomial::Var(i) => Ok(args[*i].clone()),
            Monomial::Mul(a, b) => {
                let left = a.span(alg, args)?;
                if left.is_zero() {
                    return Ok(left);
                }
                alg.product_span(&left, &b.span(alg, args)?)
            }
        }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Monomial::Var(i) => write!(f, "x{}", i + 1),
            Monomial::Mul(a, b) => write!(f, "(* {a} {b})"),
        }
    }
}

/// Bracketing shapes of `n` leaves: left subtree size from `n - 1` down to 1.
fn shapes(n: usize) -> Vec<Monomial> {
    if n == 1 {
        return vec![Monomial::Var(0)];
    }
    let mut out = Vec::new();
    for left in (1..n).rev() {
        let ls = shapes(left);
        let rs = shapes(n - left);
        for l in &ls {
            for r in &rs {
                out.push(Monomial::product(l.clone(), r.clone()));
            }
        }
    }
    out
}

fn relabel(shape: &Monomial, perm: &[usize], next: &mut usize) -> Monomial {
    match shape {
        Monomial::Var(_) => {
            let m = Monomial::Var(perm[*next]);
            *next += 1;
            m
        }
        Monomial::Mul(a, b) => {
            let a = relabel(a, perm, next);
            let b = relabel(b, perm, next);
            Monomial::product(a, b)
        }
    }
}

/// All monomials of degree `t`: shapes in left-deep-first order, then leaf permutations lexicographically.
///
/// The count is `Catalan(t - 1) · t!`.
pub fn enumerate_monomials(t: usize) -> Result<Vec<Monomial>> {
    enumerate_monomials_capped(t, DEFAULT_DEGREE_CAP)
}

pub fn enumerate_monomials_capped(t: usize, cap: usize) -> Result<Vec<Monomial>> {
    if t == 0 || t > cap {
        return Err(Error::DegreeCap { degree: t, cap });
    }
    let mut out = Vec::new();
    for shape in shapes(t) {
        for perm in (0..t).permutations(t) {
            out.push(relabel(&shape, &perm, &mut 0));
        }
    }
    Ok(out)
}

/// A normalized GF(p)-combination of monomials of a common degree.
///
/// Terms are sorted by monomial with nonzero coefficients; the zero element has no terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultilinearElement {
    field: FieldPrime,
    degree: usize,
    terms: Vec<(u64, Monomial)>,
}

impl MultilinearElement {
    pub fn from_monomial(field: FieldPrime, m: Monomial) -> Result<Self> {
        Self::from_terms(field, vec![(1, m)])
    }

    /// Normalizes `terms`, checking every monomial uses each of `x1..xt` exactly once.
    pub fn from_terms(field: FieldPrime, terms: Vec<(u64, Monomial)>) -> Result<Self> {
        let Some(degree) = terms.iter().map(|(_, m)| m.degree()).max() else {
            return Err(Error::NotMultilinear("empty word".into()));
        };
        let mut combined: BTreeMap<Monomial, u64> = BTreeMap::new();
        for (c, m) in terms {
            let mut leaves = m.leaves();
            leaves.sort_unstable();
            if let Some(w) = leaves.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::NotMultilinear(format!("variable x{} repeated in {m}", w[0] + 1)));
            }
            if leaves != (0..degree).collect::<Vec<_>>() {
                return Err(Error::NotMultilinear(format!(
                    "monomial {m} does not use exactly x1..x{degree}"
                )));
            }
            let slot = combined.entry(m).or_insert(0);
            *slot = field.add(*slot, field.reduce(c));
        }
        let terms = combined
            .into_iter()
            .filter(|(_, c)| *c != 0)
            .map(|(m, c)| (c, m))
            .collect();
        Ok(MultilinearElement { field, degree, terms })
    }

    /// `x1`.
    pub fn identity_word(field: FieldPrime) -> Self {
        Self::from_monomial(field, Monomial::Var(0)).expect("x1 is multilinear")
    }

    /// `x1 x2`.
    pub fn product(field: FieldPrime) -> Self {
        Self::from_monomial(field, Monomial::product(Monomial::Var(0), Monomial::Var(1))).expect("x1 x2 is multilinear")
    }

    /// `x1 x2 - x2 x1`.
    pub fn commutator(field: FieldPrime) -> Self {
        let a = Monomial::product(Monomial::Var(0), Monomial::Var(1));
        let b = Monomial::product(Monomial::Var(1), Monomial::Var(0));
        Self::from_terms(field, vec![(1, a), (field.neg(1), b)]).expect("commutator is multilinear")
    }

    pub fn field(&self) -> FieldPrime {
        self.field
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> &[(u64, Monomial)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, alg: &StructureAlgebra, args: &[Row]) -> Row {
        let mut out = vec![0; alg.dim()];
        for (c, m) in &self.terms {
            self.field.add_scaled(&mut out, &m.eval(alg, args), *c);
        }
        out
    }
}

impl fmt::Display for MultilinearElement {
    /// Renders as an s-expression accepted by [`parse_word`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            let zero_mono = (1..self.degree).fold(Monomial::Var(0), |acc, i| Monomial::product(acc, Monomial::Var(i)));
            return write!(f, "(s 0 {zero_mono})");
        }
        let rendered: Vec<String> = self
            .terms
            .iter()
            .map(|(c, m)| if *c == 1 { m.to_string() } else { format!("(s {c} {m})") })
            .collect();
        let mut acc = rendered[0].clone();
        for r in &rendered[1..] {
            acc = format!("(+ {acc} {r})");
        }
        f.write_str(&acc)
    }
}

/// Span of `w(v_1, …, v_t)` over all `v_i ∈ args[i]`.
///
/// Multilinearity reduces this to basis tuples; a single-monomial word is
/// evaluated through iterated product spans instead.
pub fn eval_span(w: &MultilinearElement, alg: &StructureAlgebra, args: &[Subspace]) -> Result<Subspace> {
    if args.len() != w.degree() {
        return Err(Error::Arity {
            expected: w.degree(),
            found: args.len(),
        });
    }
    for a in args {
        a.check_compatible(&alg.full())?;
    }
    if w.is_zero() || args.iter().any(Subspace::is_zero) {
        return Ok(alg.zero_subspace());
    }
    if let [(_, m)] = w.terms() {
        return m.span(alg, args);
    }
    let rows: Vec<Row> = args
        .iter()
        .map(|a| a.basis().iter())
        .multi_cartesian_product()
        .map(|tuple| {
            let tuple: Vec<Row> = tuple.into_iter().cloned().collect();
            w.eval(alg, &tuple)
        })
        .collect();
    Subspace::span(alg.field(), alg.dim(), &rows)
}

#[derive(Debug)]
enum Expr {
    Var(usize),
    Mul(Box<Expr>, Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Scale(i64, Box<Expr>),
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::WordSyntax {
            position: self.pos,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(char::is_whitespace) {
            self.pos += self.src[self.pos..].chars().next().map_or(1, char::len_utf8);
        }
    }

    fn token(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        if rest.is_empty() {
            return None;
        }
        let len = if rest.starts_with(['(', ')']) {
            1
        } else {
            rest.find(|c: char| c.is_whitespace() || c == '(' || c == ')')
                .unwrap_or(rest.len())
        };
        Some(&rest[..len])
    }

    fn bump(&mut self, tok: &str) {
        self.pos += tok.len();
    }

    fn expect_close(&mut self) -> Result<()> {
        match self.token() {
            Some(")") => {
                self.bump(")");
                Ok(())
            }
            Some(t) => self.err(format!("expected ')', found '{t}'")),
            None => self.err("expected ')', found end of input"),
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let Some(tok) = self.token() else {
            return self.err("unexpected end of input");
        };
        if tok == "(" {
            self.bump(tok);
            let Some(op) = self.token() else {
                return self.err("expected operator");
            };
            let op_pos = self.pos;
            self.bump(op);
            let e = match op {
                "*" | "+" | "-" => {
                    let a = Box::new(self.expr()?);
                    let b = Box::new(self.expr()?);
                    match op {
                        "*" => Expr::Mul(a, b),
                        "+" => Expr::Add(a, b),
                        _ => Expr::Sub(a, b),
                    }
                }
                "s" => {
                    let Some(c_tok) = self.token() else {
                        return self.err("expected scalar");
                    };
                    let Ok(c) = c_tok.parse::<i64>() else {
                        return self.err(format!("invalid scalar '{c_tok}'"));
                    };
                    self.bump(c_tok);
                    Expr::Scale(c, Box::new(self.expr()?))
                }
                _ => {
                    self.pos = op_pos;
                    return self.err(format!("unknown operator '{op}'"));
                }
            };
            self.expect_close()?;
            return Ok(e);
        }
        if let Some(n) = tok.strip_prefix('x') {
            if let Ok(i) = n.parse::<usize>() {
                if i >= 1 {
                    self.bump(tok);
                    return Ok(Expr::Var(i - 1));
                }
            }
        }
        self.err(format!("unexpected token '{tok}'"))
    }
}

fn expand(e: &Expr, field: FieldPrime) -> Vec<(u64, Monomial)> {
    match e {
        Expr::Var(i) => vec![(1, Monomial::Var(*i))],
        Expr::Mul(a, b) => {
            let (ea, eb) = (expand(a, field), expand(b, field));
            ea.iter()
                .flat_map(|(ca, ma)| {
                    eb.iter()
                        .map(move |(cb, mb)| (field.mul(*ca, *cb), Monomial::product(ma.clone(), mb.clone())))
                })
                .collect()
        }
        Expr::Add(a, b) => {
            let mut out = expand(a, field);
            out.extend(expand(b, field));
            out
        }
        Expr::Sub(a, b) => {
            let mut out = expand(a, field);
            out.extend(expand(b, field).into_iter().map(|(c, m)| (field.neg(c), m)));
            out
        }
        Expr::Scale(c, a) => {
            let c = field.from_i64(*c);
            expand(a, field)
                .into_iter()
                .map(|(x, m)| (field.mul(c, x), m))
                .collect()
        }
    }
}

/// Parses and normalizes a word; every expanded monomial must use each of `x1..xt` exactly once.
pub fn parse_word(text: &str, field: FieldPrime) -> Result<MultilinearElement> {
    let mut parser = Parser { src: text, pos: 0 };
    let expr = parser.expr()?;
    if let Some(tok) = parser.token() {
        return parser.err(format!("trailing input '{tok}'"));
    }
    MultilinearElement::from_terms(field, expand(&expr, field))
}
