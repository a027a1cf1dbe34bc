//! S-expression text format for formulas. Round-trips the AST; junction
//! enumerators are represented by their registered builder names plus
//! parameters.

use super::junction::{Junction, JunctionBuilder};
use super::{ComplexityClass, Formula, VarId};
use crate::error::{Error, Result};
use crate::groups::GroupSpec;
use crate::words::Word;
use std::fmt::Write as _;

pub fn serialize(f: &Formula) -> String {
    let mut out = String::new();
    write_formula(&mut out, f);
    out
}

fn write_formula(out: &mut String, f: &Formula) {
    match f {
        Formula::AtomEq(w) => {
            let _ = write!(out, "(eq {})", word_text(w));
        }
        Formula::AtomNeq(w) => {
            let _ = write!(out, "(neq {})", word_text(w));
        }
        Formula::And(fs) => {
            out.push_str("(and");
            for f in fs {
                out.push(' ');
                write_formula(out, f);
            }
            out.push(')');
        }
        Formula::Or(fs) => {
            out.push_str("(or");
            for f in fs {
                out.push(' ');
                write_formula(out, f);
            }
            out.push(')');
        }
        Formula::BigAnd(j) => {
            out.push_str("(bigand ");
            write_junction(out, j);
            out.push(')');
        }
        Formula::BigOr(j) => {
            out.push_str("(bigor ");
            write_junction(out, j);
            out.push(')');
        }
        Formula::Exists(vs, b) => {
            out.push_str("(exists ");
            write_vars(out, vs);
            out.push(' ');
            write_formula(out, b);
            out.push(')');
        }
        Formula::Forall(vs, b) => {
            out.push_str("(forall ");
            write_vars(out, vs);
            out.push(' ');
            write_formula(out, b);
            out.push(')');
        }
        Formula::Relativized { guard, body } => {
            out.push_str("(rel ");
            write_formula(out, guard);
            out.push(' ');
            write_formula(out, body);
            out.push(')');
        }
    }
}

fn word_text(w: &Word) -> String {
    w.to_string()
}

fn write_vars(out: &mut String, vs: &[VarId]) {
    out.push('(');
    for (i, v) in vs.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        let _ = write!(out, "x{v}");
    }
    out.push(')');
}

fn write_junction(out: &mut String, j: &Junction) {
    out.push_str("(jn ");
    write_builder(out, j.builder());
    match j.exhaustion() {
        Some(b) => {
            let _ = write!(out, " exh {b}");
        }
        None => out.push_str(" exh -"),
    }
    let _ = write!(out, " class {})", j.declared());
}

fn write_set(out: &mut String, xs: &[u64]) {
    out.push_str("(set");
    for x in xs {
        let _ = write!(out, " {x}");
    }
    out.push(')');
}

fn write_builder(out: &mut String, b: &JunctionBuilder) {
    match b {
        JunctionBuilder::Negated(inner) => {
            out.push_str("(negated ");
            write_builder(out, inner);
            out.push(')');
        }
        JunctionBuilder::Guarded {
            inner,
            guard,
            quotient,
        } => {
            out.push_str("(guarded ");
            write_builder(out, inner);
            let _ = write!(out, " {} ", if *quotient { 1 } else { 0 });
            write_formula(out, guard);
            out.push(')');
        }
        JunctionBuilder::WordsReach { tuple, target } => {
            out.push_str("(words-reach ");
            write_vars(out, tuple);
            let _ = write!(out, " x{target})");
        }
        JunctionBuilder::Relators { spec, vars } => {
            let _ = write!(out, "(relators (spec {spec}) ");
            write_vars(out, vars);
            out.push(')');
        }
        JunctionBuilder::TorsionFree { var, guard } => match guard {
            Some(a) => {
                let _ = write!(out, "(torsion-free x{var} {a})");
            }
            None => {
                let _ = write!(out, "(torsion-free x{var} -)");
            }
        },
        JunctionBuilder::MatricesDetNotUnit { xs, ys, guard } => {
            out.push_str("(matrices ");
            write_vars(out, xs);
            out.push(' ');
            write_vars(out, ys);
            match guard {
                Some(a) => {
                    let _ = write!(out, " {a})");
                }
                None => out.push_str(" -)"),
            }
        }
        JunctionBuilder::ConjPowers { a, t, s } => {
            let _ = write!(out, "(conj-powers x{a} x{t} x{s})");
        }
        JunctionBuilder::WreathPatterns {
            torsion,
            allow_single,
            a,
            t,
            b,
        } => {
            let tor = match torsion {
                Some(d) => d.to_string(),
                None => "z".into(),
            };
            let single = if *allow_single { "single" } else { "multi" };
            let _ = write!(out, "(wreath-patterns {tor} {single} x{a} x{t} x{b})");
        }
        JunctionBuilder::CoprimePowers { n, a, b } => {
            let _ = write!(out, "(coprime-powers {n} x{a} x{b})");
        }
        JunctionBuilder::DerivedWords { target, tuple } => {
            let _ = write!(out, "(derived-words x{target} ");
            write_vars(out, tuple);
            out.push(')');
        }
        JunctionBuilder::GammaExtend { class } => {
            let _ = write!(out, "(gamma-extend {class})");
        }
        JunctionBuilder::GammaTarget { class, k } => {
            let _ = write!(out, "(gamma-target {class} {k})");
        }
        JunctionBuilder::SkFamily { families } => {
            out.push_str("(sk-family");
            for fam in families {
                out.push(' ');
                write_set(out, fam);
            }
            out.push(')');
        }
        JunctionBuilder::PrimesNotDividing { primes, g } => {
            out.push_str("(primes-not-dividing ");
            write_set(out, primes);
            let _ = write!(out, " x{g})");
        }
        JunctionBuilder::DivisibleByAll { primes } => {
            out.push_str("(divisible-by-all ");
            write_set(out, primes);
            out.push(')');
        }
        JunctionBuilder::RankOnePairs { x, y } => {
            let _ = write!(out, "(rank-one-pairs x{x} x{y})");
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum SExpr {
    Atom(String),
    List(Vec<SExpr>),
}

impl SExpr {
    fn atom(&self) -> Result<&str> {
        match self {
            SExpr::Atom(s) => Ok(s),
            SExpr::List(_) => Err(Error::Parse("expected atom, found list".into())),
        }
    }

    fn list(&self) -> Result<&[SExpr]> {
        match self {
            SExpr::List(xs) => Ok(xs),
            SExpr::Atom(a) => Err(Error::Parse(format!("expected list, found atom '{a}'"))),
        }
    }

    /// Reconstruct plain text from the token stream (for embedded formats
    /// like group specs).
    fn plain(&self) -> String {
        match self {
            SExpr::Atom(s) => s.clone(),
            SExpr::List(xs) => {
                let inner: Vec<String> = xs.iter().map(|x| x.plain()).collect();
                format!("({})", inner.join(" "))
            }
        }
    }
}

fn tokenize(s: &str) -> Result<Vec<String>> {
    let mut tokens = Vec::new();
    let mut cur = String::new();
    for c in s.chars() {
        match c {
            '(' | ')' => {
                if !cur.is_empty() {
                    tokens.push(std::mem::take(&mut cur));
                }
                tokens.push(c.to_string());
            }
            c if c.is_whitespace() => {
                if !cur.is_empty() {
                    tokens.push(std::mem::take(&mut cur));
                }
            }
            c => cur.push(c),
        }
    }
    if !cur.is_empty() {
        tokens.push(cur);
    }
    Ok(tokens)
}

fn parse_sexpr(tokens: &[String], pos: &mut usize) -> Result<SExpr> {
    if *pos >= tokens.len() {
        return Err(Error::Parse("unexpected end of input".into()));
    }
    let t = &tokens[*pos];
    *pos += 1;
    if t == "(" {
        let mut items = Vec::new();
        loop {
            if *pos >= tokens.len() {
                return Err(Error::Parse("unbalanced parentheses".into()));
            }
            if tokens[*pos] == ")" {
                *pos += 1;
                return Ok(SExpr::List(items));
            }
            items.push(parse_sexpr(tokens, pos)?);
        }
    } else if t == ")" {
        Err(Error::Parse("unexpected ')'".into()))
    } else {
        Ok(SExpr::Atom(t.clone()))
    }
}

pub fn parse(s: &str) -> Result<Formula> {
    let tokens = tokenize(s)?;
    let mut pos = 0;
    let sexpr = parse_sexpr(&tokens, &mut pos)?;
    if pos != tokens.len() {
        return Err(Error::Parse("trailing tokens after formula".into()));
    }
    formula_from(&sexpr)
}

fn parse_var(s: &str) -> Result<VarId> {
    s.strip_prefix('x')
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| Error::Parse(format!("bad variable '{s}'")))
}

fn vars_from(sx: &SExpr) -> Result<Vec<VarId>> {
    sx.list()?.iter().map(|x| parse_var(x.atom()?)).collect()
}

fn set_from(sx: &SExpr) -> Result<Vec<u64>> {
    let xs = sx.list()?;
    if xs.first().and_then(|h| h.atom().ok()) != Some("set") {
        return Err(Error::Parse("expected (set ...)".into()));
    }
    xs[1..]
        .iter()
        .map(|x| {
            x.atom()?
                .parse()
                .map_err(|_| Error::Parse("bad set entry".into()))
        })
        .collect()
}

fn formula_from(sx: &SExpr) -> Result<Formula> {
    let items = sx.list()?;
    let head = items
        .first()
        .ok_or_else(|| Error::Parse("empty form".into()))?
        .atom()?;
    match head {
        "eq" | "neq" => {
            if items.len() != 2 {
                return Err(Error::Parse(format!("'{head}' needs one word")));
            }
            let w = Word::parse(items[1].atom()?)?;
            Ok(if head == "eq" {
                Formula::AtomEq(w)
            } else {
                Formula::AtomNeq(w)
            })
        }
        "and" | "or" => {
            let fs = items[1..]
                .iter()
                .map(formula_from)
                .collect::<Result<Vec<_>>>()?;
            Ok(if head == "and" {
                Formula::And(fs)
            } else {
                Formula::Or(fs)
            })
        }
        "exists" | "forall" => {
            if items.len() != 3 {
                return Err(Error::Parse(format!("'{head}' needs vars and a body")));
            }
            let vs = vars_from(&items[1])?;
            let body = Box::new(formula_from(&items[2])?);
            Ok(if head == "exists" {
                Formula::Exists(vs, body)
            } else {
                Formula::Forall(vs, body)
            })
        }
        "bigand" | "bigor" => {
            if items.len() != 2 {
                return Err(Error::Parse(format!("'{head}' needs a junction")));
            }
            let j = junction_from(&items[1])?;
            Ok(if head == "bigand" {
                Formula::BigAnd(j)
            } else {
                Formula::BigOr(j)
            })
        }
        "rel" => {
            if items.len() != 3 {
                return Err(Error::Parse("'rel' needs a guard and a body".into()));
            }
            Ok(Formula::Relativized {
                guard: Box::new(formula_from(&items[1])?),
                body: Box::new(formula_from(&items[2])?),
            })
        }
        other => Err(Error::Parse(format!("unknown formula form '{other}'"))),
    }
}

fn junction_from(sx: &SExpr) -> Result<Junction> {
    let items = sx.list()?;
    if items.first().and_then(|h| h.atom().ok()) != Some("jn") || items.len() != 6 {
        return Err(Error::Parse(
            "expected (jn <builder> exh <bound> class <class>)".into(),
        ));
    }
    let builder = builder_from(&items[1])?;
    if items[2].atom()? != "exh" {
        return Err(Error::Parse("expected 'exh'".into()));
    }
    let exhaustion = match items[3].atom()? {
        "-" => None,
        s => Some(
            s.parse()
                .map_err(|_| Error::Parse("bad exhaustion bound".into()))?,
        ),
    };
    if items[4].atom()? != "class" {
        return Err(Error::Parse("expected 'class'".into()));
    }
    let declared = ComplexityClass::parse(items[5].atom()?)?;
    Ok(Junction::new(builder, exhaustion, declared))
}

fn opt_arity_from(sx: &SExpr) -> Result<Option<u32>> {
    match sx.atom()? {
        "-" => Ok(None),
        s => Ok(Some(
            s.parse()
                .map_err(|_| Error::Parse("bad guard arity".into()))?,
        )),
    }
}

fn builder_from(sx: &SExpr) -> Result<JunctionBuilder> {
    let items = sx.list()?;
    let head = items
        .first()
        .ok_or_else(|| Error::Parse("empty builder".into()))?
        .atom()?;
    let need = |n: usize| -> Result<()> {
        if items.len() != n {
            Err(Error::Parse(format!("builder '{head}' expects {} arguments", n - 1)))
        } else {
            Ok(())
        }
    };
    match head {
        "negated" => {
            need(2)?;
            Ok(JunctionBuilder::Negated(Box::new(builder_from(&items[1])?)))
        }
        "guarded" => {
            need(4)?;
            let inner = Box::new(builder_from(&items[1])?);
            let quotient = items[2].atom()? == "1";
            let guard = Box::new(formula_from(&items[3])?);
            Ok(JunctionBuilder::Guarded {
                inner,
                guard,
                quotient,
            })
        }
        "words-reach" => {
            need(3)?;
            Ok(JunctionBuilder::WordsReach {
                tuple: vars_from(&items[1])?,
                target: parse_var(items[2].atom()?)?,
            })
        }
        "relators" => {
            need(3)?;
            let spec_items = items[1].list()?;
            if spec_items.first().and_then(|h| h.atom().ok()) != Some("spec") {
                return Err(Error::Parse("expected (spec ...)".into()));
            }
            let spec_text: Vec<String> = spec_items[1..].iter().map(|x| x.plain()).collect();
            let spec = GroupSpec::parse(&spec_text.join(" "))?;
            Ok(JunctionBuilder::Relators {
                spec,
                vars: vars_from(&items[2])?,
            })
        }
        "torsion-free" => {
            need(3)?;
            Ok(JunctionBuilder::TorsionFree {
                var: parse_var(items[1].atom()?)?,
                guard: opt_arity_from(&items[2])?,
            })
        }
        "matrices" => {
            need(4)?;
            Ok(JunctionBuilder::MatricesDetNotUnit {
                xs: vars_from(&items[1])?,
                ys: vars_from(&items[2])?,
                guard: opt_arity_from(&items[3])?,
            })
        }
        "conj-powers" => {
            need(4)?;
            Ok(JunctionBuilder::ConjPowers {
                a: parse_var(items[1].atom()?)?,
                t: parse_var(items[2].atom()?)?,
                s: parse_var(items[3].atom()?)?,
            })
        }
        "wreath-patterns" => {
            need(6)?;
            let torsion = match items[1].atom()? {
                "z" => None,
                s => Some(
                    s.parse()
                        .map_err(|_| Error::Parse("bad torsion".into()))?,
                ),
            };
            let allow_single = match items[2].atom()? {
                "single" => true,
                "multi" => false,
                other => return Err(Error::Parse(format!("bad mode '{other}'"))),
            };
            Ok(JunctionBuilder::WreathPatterns {
                torsion,
                allow_single,
                a: parse_var(items[3].atom()?)?,
                t: parse_var(items[4].atom()?)?,
                b: parse_var(items[5].atom()?)?,
            })
        }
        "coprime-powers" => {
            need(4)?;
            Ok(JunctionBuilder::CoprimePowers {
                n: items[1]
                    .atom()?
                    .parse()
                    .map_err(|_| Error::Parse("bad n".into()))?,
                a: parse_var(items[2].atom()?)?,
                b: parse_var(items[3].atom()?)?,
            })
        }
        "derived-words" => {
            need(3)?;
            Ok(JunctionBuilder::DerivedWords {
                target: parse_var(items[1].atom()?)?,
                tuple: vars_from(&items[2])?,
            })
        }
        "gamma-extend" => {
            need(2)?;
            Ok(JunctionBuilder::GammaExtend {
                class: items[1]
                    .atom()?
                    .parse()
                    .map_err(|_| Error::Parse("bad class".into()))?,
            })
        }
        "gamma-target" => {
            need(3)?;
            Ok(JunctionBuilder::GammaTarget {
                class: items[1]
                    .atom()?
                    .parse()
                    .map_err(|_| Error::Parse("bad class".into()))?,
                k: items[2]
                    .atom()?
                    .parse()
                    .map_err(|_| Error::Parse("bad k".into()))?,
            })
        }
        "sk-family" => {
            let families = items[1..]
                .iter()
                .map(set_from)
                .collect::<Result<Vec<_>>>()?;
            Ok(JunctionBuilder::SkFamily { families })
        }
        "primes-not-dividing" => {
            need(3)?;
            Ok(JunctionBuilder::PrimesNotDividing {
                primes: set_from(&items[1])?,
                g: parse_var(items[2].atom()?)?,
            })
        }
        "divisible-by-all" => {
            need(2)?;
            Ok(JunctionBuilder::DivisibleByAll {
                primes: set_from(&items[1])?,
            })
        }
        "rank-one-pairs" => {
            need(3)?;
            Ok(JunctionBuilder::RankOnePairs {
                x: parse_var(items[1].atom()?)?,
                y: parse_var(items[2].atom()?)?,
            })
        }
        other => Err(Error::UnknownBuilder(other.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_atoms_and_connectives() {
        let texts = [
            "(eq x0^1*x1^1*x0^-1*x1^-1)",
            "(neq x0^2)",
            "(and (eq 1) (neq x0^1))",
            "(or)",
            "(exists (x0 x1) (eq x0^1*x1^-1))",
            "(forall (x2) (neq x2^3))",
            "(bigand (jn (torsion-free x0 -) exh - class fin))",
            "(bigor (jn (words-reach (x0 x1) x5) exh - class fin))",
            "(bigand (jn (relators (spec lamplighter 2) (x0 x1)) exh - class fin))",
            "(bigand (jn (relators (spec timesz (freenilpotent 2 2)) (x0 x1 x2)) exh - class fin))",
            "(bigand (jn (sk-family (set 2 3) (set 5)) exh - class sigma2))",
            "(rel (exists (x900) (eq x900^2*x800^-1)) (forall (x0) (neq x0^2)))",
        ];
        for t in texts {
            let f = parse(t).unwrap();
            assert_eq!(serialize(&f), t, "roundtrip failed");
            assert_eq!(parse(&serialize(&f)).unwrap(), f);
        }
    }

    #[test]
    fn unknown_builder_is_an_error() {
        let r = parse("(bigand (jn (unknown-builder) exh - class fin))");
        assert!(matches!(r, Err(Error::UnknownBuilder(_))), "{r:?}");
    }

    #[test]
    fn malformed_text_is_a_parse_error() {
        for t in ["(eq", "(zap 1)", "(exists x0 (eq 1))", "(bigand (jn (torsion-free x0 -)))"] {
            assert!(parse(t).is_err(), "{t}");
        }
    }

    #[test]
    fn commutator_word_golden() {
        // the commutator word has a fixed canonical token
        let f = Formula::AtomEq(Word(vec![(0, 1), (1, 1), (0, -1), (1, -1)]));
        assert_eq!(serialize(&f), "(eq x0^1*x1^1*x0^-1*x1^-1)");
    }
}
