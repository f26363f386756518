//! Linear forms and inequality systems over rate variables and opaque
//! entropic symbols, with exact rational coefficients.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{Map, Value};

use super::rational::{self, Rational};
use crate::error::{Error, Result};
use crate::info::JointPmf;

/// JSON key holding the constant term of a form.
pub const CONST_KEY: &str = "const";

/// `sum_s c_s * s + constant`. Zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LinearForm {
    coeffs: BTreeMap<String, Rational>,
    constant: Rational,
}

impl LinearForm {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rational) -> Self {
        Self {
            coeffs: BTreeMap::new(),
            constant: c,
        }
    }

    pub fn from_terms<S: AsRef<str>>(terms: &[(S, Rational)], constant: Rational) -> Self {
        let mut f = Self::constant(constant);
        for (s, c) in terms {
            f.add_term(s.as_ref(), c.clone());
        }
        f
    }

    pub fn add_term(&mut self, symbol: &str, c: Rational) {
        let entry = self.coeffs.entry(symbol.to_string()).or_default();
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(symbol);
        }
    }

    pub fn add_constant(&mut self, c: &Rational) {
        self.constant += c;
    }

    pub fn coeff(&self, symbol: &str) -> Rational {
        self.coeffs.get(symbol).cloned().unwrap_or_default()
    }

    pub fn coeffs(&self) -> &BTreeMap<String, Rational> {
        &self.coeffs
    }

    pub fn constant_term(&self) -> &Rational {
        &self.constant
    }

    pub fn symbols(&self) -> impl Iterator<Item = &str> {
        self.coeffs.keys().map(String::as_str)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn scaled(&self, k: &Rational) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        Self {
            coeffs: self.coeffs.iter().map(|(s, c)| (s.clone(), c * k)).collect(),
            constant: &self.constant * k,
        }
    }

    pub fn plus(&self, other: &LinearForm) -> Self {
        let mut out = self.clone();
        for (s, c) in &other.coeffs {
            out.add_term(s, c.clone());
        }
        out.constant += &other.constant;
        out
    }

    pub fn minus(&self, other: &LinearForm) -> Self {
        self.plus(&other.scaled(&rational::q(-1, 1)))
    }

    /// Floating-point value under a full binding of the symbols.
    pub fn evaluate(&self, values: &HashMap<String, f64>) -> Result<f64> {
        let mut out = rational::to_f64(&self.constant);
        for (s, c) in &self.coeffs {
            let v = values
                .get(s)
                .ok_or_else(|| Error::Argument(format!("no value bound for symbol {s}")))?;
            out += rational::to_f64(c) * v;
        }
        Ok(out)
    }

    /// Exact value under a full rational binding.
    pub fn evaluate_exact(&self, values: &HashMap<String, Rational>) -> Result<Rational> {
        let mut out = self.constant.clone();
        for (s, c) in &self.coeffs {
            let v = values
                .get(s)
                .ok_or_else(|| Error::Argument(format!("no value bound for symbol {s}")))?;
            out += c * v;
        }
        Ok(out)
    }

    fn to_json(&self) -> Value {
        let mut m = Map::new();
        for (s, c) in &self.coeffs {
            m.insert(s.clone(), rational::to_json(c));
        }
        if !self.constant.is_zero() {
            m.insert(CONST_KEY.into(), rational::to_json(&self.constant));
        }
        Value::Object(m)
    }

    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::Object(m) => {
                let mut f = Self::zero();
                for (k, c) in m {
                    let c = rational::from_json(c)?;
                    if k == CONST_KEY {
                        f.constant += c;
                    } else {
                        f.add_term(k, c);
                    }
                }
                Ok(f)
            }
            Value::Number(_) | Value::String(_) => Ok(Self::constant(rational::from_json(v)?)),
            other => Err(Error::Validation(format!("expected a linear form, got {other}"))),
        }
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (s, c) in &self.coeffs {
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let a = c.abs();
            if a == rational::q(1, 1) {
                write!(f, "{s}")?;
            } else {
                write!(f, "{a} {s}")?;
            }
            first = false;
        }
        if first {
            write!(f, "{}", self.constant)
        } else if !self.constant.is_zero() {
            let sign = if self.constant.is_negative() { "-" } else { "+" };
            write!(f, " {sign} {}", self.constant.abs())
        } else {
            Ok(())
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Relation {
    Ge,
    Gt,
}

impl Relation {
    pub fn as_str(&self) -> &'static str {
        match self {
            Relation::Ge => ">=",
            Relation::Gt => ">",
        }
    }
}

/// `lhs rel rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Inequality {
    pub lhs: LinearForm,
    pub rel: Relation,
    pub rhs: LinearForm,
}

impl Inequality {
    pub fn new(lhs: LinearForm, rel: Relation, rhs: LinearForm) -> Self {
        Self { lhs, rel, rhs }
    }

    /// `lhs - rhs`, which the inequality asserts is non-negative (or positive).
    pub fn expr(&self) -> LinearForm {
        self.lhs.minus(&self.rhs)
    }

    pub fn is_strict(&self) -> bool {
        self.rel == Relation::Gt
    }

    /// Splits `expr >= 0` into rate-variable terms on the left and the rest on the right.
    pub fn from_expr(expr: &LinearForm, rel: Relation, vars: &[String]) -> Self {
        let mut lhs = LinearForm::zero();
        let mut rhs = LinearForm::constant(-expr.constant_term().clone());
        for (s, c) in expr.coeffs() {
            if vars.contains(s) {
                lhs.add_term(s, c.clone());
            } else {
                rhs.add_term(s, -c.clone());
            }
        }
        Self { lhs, rel, rhs }
    }

    /// Numeric check of the closure `lhs >= rhs - slack`.
    pub fn holds(&self, values: &HashMap<String, f64>, slack: f64) -> Result<bool> {
        Ok(self.expr().evaluate(values)? >= -slack)
    }

    fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("lhs".into(), self.lhs.to_json());
        m.insert("rel".into(), Value::from(self.rel.as_str()));
        m.insert("rhs".into(), self.rhs.to_json());
        Value::Object(m)
    }

    fn from_json(v: &Value) -> Result<Self> {
        let get = |k: &str| {
            v.get(k)
                .ok_or_else(|| Error::Validation(format!("inequality is missing {k:?}")))
        };
        let lhs = LinearForm::from_json(get("lhs")?)?;
        let rhs = LinearForm::from_json(get("rhs")?)?;
        let rel = get("rel")?
            .as_str()
            .ok_or_else(|| Error::Validation("relation must be a string".into()))?;
        Ok(match rel {
            ">=" => Self::new(lhs, Relation::Ge, rhs),
            ">" => Self::new(lhs, Relation::Gt, rhs),
            "<=" => Self::new(rhs, Relation::Ge, lhs),
            "<" => Self::new(rhs, Relation::Gt, lhs),
            other => return Err(Error::Validation(format!("unknown relation {other:?}"))),
        })
    }
}

impl fmt::Display for Inequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.lhs, self.rel.as_str(), self.rhs)
    }
}

/// Inequalities over rate variables `vars`; every other symbol is an entropic
/// constant. `assumptions` constrain the constants (and may mention rates) and
/// are used only to detect redundancy.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LinearSystem {
    pub vars: Vec<String>,
    pub ineqs: Vec<Inequality>,
    pub assumptions: Vec<Inequality>,
}

impl LinearSystem {
    pub fn new(vars: Vec<String>, ineqs: Vec<Inequality>, assumptions: Vec<Inequality>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for v in &vars {
            if v == CONST_KEY || !seen.insert(v.as_str()) {
                return Err(Error::Validation(format!("bad or duplicate variable name {v:?}")));
            }
        }
        Ok(Self {
            vars,
            ineqs,
            assumptions,
        })
    }

    pub fn is_var(&self, s: &str) -> bool {
        self.vars.iter().any(|v| v == s)
    }

    /// Every symbol that is not a rate variable.
    pub fn constants(&self) -> BTreeSet<String> {
        self.ineqs
            .iter()
            .chain(&self.assumptions)
            .flat_map(|i| i.expr().coeffs().keys().cloned().collect::<Vec<_>>())
            .filter(|s| !self.is_var(s))
            .collect()
    }

    /// Symbol order used for canonical scaling: rate variables first, then the rest sorted.
    pub fn symbol_order(&self) -> Vec<String> {
        let mut out = self.vars.clone();
        out.extend(self.constants());
        out
    }

    /// `expr >= 0` scaled so the first nonzero coefficient (in symbol order) has
    /// magnitude one; strictness is dropped.
    pub fn canonical_expr(&self, ineq: &Inequality) -> LinearForm {
        canonicalize(&ineq.expr(), &self.symbol_order())
    }

    /// The system as a set of canonical forms, for set comparison.
    pub fn canonical_set(&self) -> BTreeSet<LinearForm> {
        let order = self.symbol_order();
        self.ineqs
            .iter()
            .map(|i| canonicalize(&i.expr(), &order))
            .filter(|e| !is_trivially_true(e))
            .collect()
    }

    /// Closure membership of a full numeric binding.
    pub fn satisfied_by(&self, values: &HashMap<String, f64>, slack: f64) -> Result<bool> {
        for i in &self.ineqs {
            if !i.holds(values, slack)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("vars".into(), Value::from(self.vars.clone()));
        m.insert(
            "ineqs".into(),
            Value::Array(self.ineqs.iter().map(Inequality::to_json).collect()),
        );
        if !self.assumptions.is_empty() {
            m.insert(
                "assumptions".into(),
                Value::Array(self.assumptions.iter().map(Inequality::to_json).collect()),
            );
        }
        Value::Object(m)
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let vars = v
            .get("vars")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Validation("system needs a \"vars\" array".into()))?
            .iter()
            .map(|s| {
                s.as_str()
                    .map(str::to_string)
                    .ok_or_else(|| Error::Validation("variable names must be strings".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        let list = |k: &str| -> Result<Vec<Inequality>> {
            match v.get(k) {
                None => Ok(Vec::new()),
                Some(Value::Array(a)) => a.iter().map(Inequality::from_json).collect(),
                Some(_) => Err(Error::Validation(format!("{k:?} must be an array"))),
            }
        };
        Self::new(vars, list("ineqs")?, list("assumptions")?)
    }
}

impl Serialize for LinearSystem {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for LinearSystem {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        Self::from_json(&v).map_err(serde::de::Error::custom)
    }
}

pub(crate) fn canonicalize(expr: &LinearForm, order: &[String]) -> LinearForm {
    let lead = order
        .iter()
        .map(|s| expr.coeff(s))
        .find(|c| !c.is_zero())
        .or_else(|| expr.coeffs().values().next().cloned())
        .unwrap_or_else(|| expr.constant_term().clone());
    if lead.is_zero() {
        return expr.clone();
    }
    expr.scaled(&(Rational::from_integer(1.into()) / lead.abs()))
}

pub(crate) fn is_trivially_true(expr: &LinearForm) -> bool {
    expr.is_constant() && !expr.constant_term().is_negative()
}

/// Parses a joint-entropy symbol such as `H_X_Y_U` into its axis names.
pub fn entropy_symbol_axes(symbol: &str) -> Option<Vec<&str>> {
    let rest = symbol.strip_prefix("H_")?;
    let names: Vec<&str> = rest.split('_').collect();
    if names.iter().any(|n| n.is_empty()) {
        return None;
    }
    Some(names)
}

/// Binds every `H_...` symbol among `symbols` to its entropy under `pmf`.
pub fn bind_entropies<'a>(
    pmf: &JointPmf,
    symbols: impl IntoIterator<Item = &'a str>,
) -> Result<HashMap<String, f64>> {
    let mut out = HashMap::new();
    for s in symbols {
        let axes = entropy_symbol_axes(s)
            .ok_or_else(|| Error::Argument(format!("{s} is not a joint-entropy symbol")))?;
        out.insert(s.to_string(), pmf.entropy_of(&axes)?);
    }
    Ok(out)
}
