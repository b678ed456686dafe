//! A small expression language for user-defined effect and resistance
//! functions, so homogeneity analysis is not limited to the built-in models.
//!
//! Supported: real literals, named variables, `+ - * / ^`, unary minus, and
//! the functions `sin cos tan sinh cosh tanh sqrt exp ln abs` (one argument)
//! and `min max` (two arguments). `^` is right-associative and binds tighter
//! than unary minus: `-x^2` parses as `-(x^2)`. Identifiers are
//! case-sensitive: letters, digits and underscores, not starting with a
//! digit.
//!
//! Evaluation is plain IEEE-754 double arithmetic and deterministic. A
//! non-finite intermediate result (division by zero, `ln` of a non-positive
//! value, a fractional power of a negative base) is reported as an error
//! carrying the offending sub-expression; NaN never propagates silently.
//! Symbolic differentiation is out of scope — derivatives are the
//! homogenization engine's job.

mod lex;
mod parse;

use std::collections::BTreeSet;

use crate::{EffectModel, ModelError, VarMap};

/// Parse failure with 1-based source position.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("syntax error at line {line}, column {col}: {message}")]
pub struct ParseError {
    pub line: u32,
    pub col: u32,
    pub message: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Sinh,
    Cosh,
    Tanh,
    Sqrt,
    Exp,
    Ln,
    Abs,
    Min,
    Max,
}

impl Func {
    fn by_name(name: &str) -> Option<Self> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "tan" => Func::Tan,
            "sinh" => Func::Sinh,
            "cosh" => Func::Cosh,
            "tanh" => Func::Tanh,
            "sqrt" => Func::Sqrt,
            "exp" => Func::Exp,
            "ln" => Func::Ln,
            "abs" => Func::Abs,
            "min" => Func::Min,
            "max" => Func::Max,
            _ => return None,
        })
    }

    fn name(&self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Tanh => "tanh",
            Func::Sqrt => "sqrt",
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Abs => "abs",
            Func::Min => "min",
            Func::Max => "max",
        }
    }

    fn arity(&self) -> usize {
        match self {
            Func::Min | Func::Max => 2,
            _ => 1,
        }
    }
}

/// Immutable abstract syntax tree of an expression.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Number(f64),
    Variable(String),
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Vec<Expr>),
}

/// Parse source text into an expression tree.
pub fn parse(source: &str) -> Result<Expr, ParseError> {
    let toks = lex::tokenize(source)?;
    parse::Parser::new(toks, source).parse_expr_complete()
}

impl Expr {
    /// Evaluate with the given bindings. Every free variable must be bound.
    pub fn evaluate(&self, bindings: &VarMap) -> Result<f64, ModelError> {
        let v = match self {
            Expr::Number(x) => *x,
            Expr::Variable(name) => *bindings
                .get(name)
                .ok_or_else(|| ModelError::UnboundVariable(name.clone()))?,
            Expr::Neg(inner) => -inner.evaluate(bindings)?,
            Expr::Binary(op, lhs, rhs) => {
                let a = lhs.evaluate(bindings)?;
                let b = rhs.evaluate(bindings)?;
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => a / b,
                    BinOp::Pow => a.powf(b),
                }
            }
            Expr::Call(func, args) => {
                let mut vals = [0.0f64; 2];
                for (slot, arg) in vals.iter_mut().zip(args) {
                    *slot = arg.evaluate(bindings)?;
                }
                let x = vals[0];
                match func {
                    Func::Sin => x.sin(),
                    Func::Cos => x.cos(),
                    Func::Tan => x.tan(),
                    Func::Sinh => x.sinh(),
                    Func::Cosh => x.cosh(),
                    Func::Tanh => x.tanh(),
                    Func::Sqrt => x.sqrt(),
                    Func::Exp => x.exp(),
                    Func::Ln => x.ln(),
                    Func::Abs => x.abs(),
                    Func::Min => x.min(vals[1]),
                    Func::Max => x.max(vals[1]),
                }
            }
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(ModelError::NonFinite { expr: self.to_string() })
        }
    }

    /// Exact set of referenced variable names.
    pub fn free_variables(&self) -> BTreeSet<String> {
        let mut set = BTreeSet::new();
        self.collect_vars(&mut set);
        set
    }

    fn collect_vars(&self, set: &mut BTreeSet<String>) {
        match self {
            Expr::Number(_) => {}
            Expr::Variable(name) => {
                set.insert(name.clone());
            }
            Expr::Neg(inner) => inner.collect_vars(set),
            Expr::Binary(_, lhs, rhs) => {
                lhs.collect_vars(set);
                rhs.collect_vars(set);
            }
            Expr::Call(_, args) => {
                for a in args {
                    a.collect_vars(set);
                }
            }
        }
    }

    /// Precedence used by the printer; mirrors the grammar.
    fn prec(&self) -> u8 {
        match self {
            Expr::Binary(BinOp::Add | BinOp::Sub, ..) => 1,
            Expr::Binary(BinOp::Mul | BinOp::Div, ..) => 2,
            Expr::Neg(_) => 3,
            Expr::Binary(BinOp::Pow, ..) => 4,
            Expr::Number(_) | Expr::Variable(_) | Expr::Call(..) => 5,
        }
    }
}

impl EffectModel for Expr {
    fn variables(&self) -> Vec<String> {
        self.free_variables().into_iter().collect()
    }

    fn eval(&self, values: &VarMap) -> Result<f64, ModelError> {
        self.evaluate(values)
    }
}

impl std::fmt::Display for Expr {
    /// Minimal-parenthesis printing; reparsing the output yields a
    /// structurally identical tree.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        fn paren(f: &mut std::fmt::Formatter<'_>, e: &Expr, needs: bool) -> std::fmt::Result {
            if needs {
                write!(f, "(")?;
                write!(f, "{e}")?;
                write!(f, ")")
            } else {
                write!(f, "{e}")
            }
        }
        match self {
            Expr::Number(x) => write!(f, "{x}"),
            Expr::Variable(name) => write!(f, "{name}"),
            Expr::Neg(inner) => {
                write!(f, "-")?;
                paren(f, inner, inner.prec() < 3)
            }
            Expr::Binary(op, lhs, rhs) => {
                let (sym, prec) = match op {
                    BinOp::Add => ("+", 1),
                    BinOp::Sub => ("-", 1),
                    BinOp::Mul => ("*", 2),
                    BinOp::Div => ("/", 2),
                    BinOp::Pow => ("^", 4),
                };
                if *op == BinOp::Pow {
                    // Left operand is an atom in the grammar; exponent is a unary.
                    paren(f, lhs, lhs.prec() < 5)?;
                    write!(f, " {sym} ")?;
                    paren(f, rhs, rhs.prec() < 3)
                } else {
                    paren(f, lhs, lhs.prec() < prec)?;
                    write!(f, " {sym} ")?;
                    paren(f, rhs, rhs.prec() <= prec)
                }
            }
            Expr::Call(func, args) => {
                write!(f, "{}(", func.name())?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::var_map;

    fn num(x: f64) -> Box<Expr> {
        Box::new(Expr::Number(x))
    }
    fn var(n: &str) -> Box<Expr> {
        Box::new(Expr::Variable(n.to_string()))
    }

    #[test]
    fn parses_single_variable() {
        assert_eq!(parse("x").unwrap(), Expr::Variable("x".to_string()));
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(
            parse("1 + 2*3").unwrap(),
            Expr::Binary(BinOp::Add, num(1.0), Box::new(Expr::Binary(BinOp::Mul, num(2.0), num(3.0))))
        );
        // Left-associative subtraction and division.
        assert_eq!(
            parse("a - b - c").unwrap(),
            Expr::Binary(
                BinOp::Sub,
                Box::new(Expr::Binary(BinOp::Sub, var("a"), var("b"))),
                var("c")
            )
        );
        // Right-associative power.
        assert_eq!(
            parse("2 ^ 3 ^ 2").unwrap(),
            Expr::Binary(BinOp::Pow, num(2.0), Box::new(Expr::Binary(BinOp::Pow, num(3.0), num(2.0))))
        );
        // Unary minus binds looser than ^.
        assert_eq!(
            parse("-x^2").unwrap(),
            Expr::Neg(Box::new(Expr::Binary(BinOp::Pow, var("x"), num(2.0))))
        );
        // Signed exponent.
        assert_eq!(
            parse("x^-2").unwrap(),
            Expr::Binary(BinOp::Pow, var("x"), Box::new(Expr::Neg(num(2.0))))
        );
    }

    #[test]
    fn shear_wall_expression_evaluates() {
        let e = parse("F1^2/(F1 - 2*a*F2)").unwrap();
        let bindings = var_map([("F1", 10.0), ("F2", 2.0), ("a", 0.5)]);
        assert_eq!(e.evaluate(&bindings).unwrap(), 12.5);
        assert_eq!(
            e.free_variables().into_iter().collect::<Vec<_>>(),
            vec!["F1".to_string(), "F2".to_string(), "a".to_string()]
        );
    }

    #[test]
    fn syntax_error_reports_position() {
        let err = parse("1 + * 2").unwrap_err();
        assert_eq!((err.line, err.col), (1, 5));
        let err = parse("1 +\n* 2").unwrap_err();
        assert_eq!((err.line, err.col), (2, 1));
        let err = parse("(1 + 2").unwrap_err();
        assert_eq!(err.line, 1);
    }

    #[test]
    fn unknown_function_is_rejected() {
        let err = parse("foo(x)").unwrap_err();
        assert!(err.message.contains("unknown function `foo`"), "{}", err.message);
    }

    #[test]
    fn arity_is_checked() {
        assert!(parse("min(x)").is_err());
        assert!(parse("sin(x, y)").is_err());
        assert!(parse("max(x, y)").is_ok());
    }

    #[test]
    fn evaluation_errors() {
        let e = parse("ln(x)").unwrap();
        let err = e.evaluate(&var_map([("x", 0.0)])).unwrap_err();
        assert!(matches!(err, ModelError::NonFinite { .. }));

        let e = parse("1/x").unwrap();
        assert!(matches!(
            e.evaluate(&var_map([("x", 0.0)])),
            Err(ModelError::NonFinite { .. })
        ));

        let e = parse("x + y").unwrap();
        match e.evaluate(&var_map([("x", 1.0)])) {
            Err(ModelError::UnboundVariable(name)) => assert_eq!(name, "y"),
            other => panic!("expected unbound-variable error, got {other:?}"),
        }

        // Fractional power of a negative base is NaN, reported as an error.
        let e = parse("(0 - 2)^0.5").unwrap();
        assert!(matches!(e.evaluate(&VarMap::new()), Err(ModelError::NonFinite { .. })));
    }

    #[test]
    fn identity_evaluation() {
        let e = parse("x").unwrap();
        assert_eq!(e.evaluate(&var_map([("x", 7.0)])).unwrap(), 7.0);
    }

    #[test]
    fn free_variables_edge_cases() {
        assert!(parse("3.0").unwrap().free_variables().is_empty());
        let e = parse("min(x, y) + x").unwrap();
        assert_eq!(
            e.free_variables().into_iter().collect::<Vec<_>>(),
            vec!["x".to_string(), "y".to_string()]
        );
    }

    #[test]
    fn print_reparse_fixpoint_samples() {
        for src in [
            "F1 ^ 2 / (F1 - 2 * a * F2)",
            "-x ^ 2",
            "(-x) ^ 2",
            "a - (b - c)",
            "a / (b / c)",
            "a * -b",
            "2 ^ -3",
            "(a ^ b) ^ c",
            "min(x, max(y, 2)) + sinh(z)",
            "-(a + b)",
        ] {
            let ast = parse(src).unwrap();
            let printed = ast.to_string();
            let reparsed = parse(&printed).unwrap();
            assert_eq!(ast, reparsed, "fixpoint failed for `{src}` -> `{printed}`");
        }
    }

    #[test]
    fn scientific_notation_and_e_variable() {
        assert_eq!(parse("1e-3").unwrap(), Expr::Number(1e-3));
        let e = parse("2*e").unwrap();
        assert_eq!(e.free_variables().into_iter().collect::<Vec<_>>(), vec!["e".to_string()]);
    }
}
