use std::fmt::{self, Write as _};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::gf::{AffinePoly, Field, Residue};
use crate::instances::{format_row, parse_row};

/// Which calculus a derivation is written in. Literals in `ResLin` are
/// equations `q = 0`, literals in `ResLinNeq` are inequalities `q != 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Calculus {
    ResLin,
    ResLinNeq,
}

impl Calculus {
    fn relation(self) -> &'static str {
        match self {
            Calculus::ResLin => "=",
            Calculus::ResLinNeq => "!=",
        }
    }
}

impl fmt::Display for Calculus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Calculus::ResLin => "reslin",
            Calculus::ResLinNeq => "reslin-neq",
        })
    }
}

impl FromStr for Calculus {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "reslin" => Ok(Calculus::ResLin),
            "reslin-neq" | "reslin-ne" => Ok(Calculus::ResLinNeq),
            _ => Err(format!("unknown calculus `{s}`")),
        }
    }
}

/// A disjunction of literals, each the polynomial `f - a` of `f = a` (or `f != a`).
/// Duplicates are kept and order is insertion order.
pub type Clause = Vec<AffinePoly>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Justification {
    Axiom,
    Input(usize),
    /// From `C or f = 0` (line `i`, literal `li`) and `D or g = 0` (line `j`,
    /// literal `lj`) derive `C or D or alpha f + beta g = 0`.
    Res {
        i: usize,
        li: usize,
        j: usize,
        lj: usize,
        alpha: Residue,
        beta: Residue,
    },
    /// From `C_a or f != a` for every `a` in F_p derive the disjunction of the `C_a`;
    /// one `(line, literal)` pair per premise.
    ResNeq(Vec<(usize, usize)>),
    Simp(usize),
    Weak(usize),
    /// From `C or f != a` (line `k`, literal `l`) derive `C or f + g != a + b or g != b`.
    LinComb {
        k: usize,
        l: usize,
        g: Vec<Residue>,
        b: Residue,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Line {
    pub clause: Clause,
    pub by: Justification,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub calculus: Calculus,
    pub field: Field,
    pub n: usize,
    pub lines: Vec<Line>,
}

impl Derivation {
    pub fn new(calculus: Calculus, field: Field, n: usize) -> Self {
        Derivation {
            calculus,
            field,
            n,
            lines: Vec::new(),
        }
    }

    /// Append a line and return its index.
    pub fn push(&mut self, clause: Clause, by: Justification) -> usize {
        self.lines.push(Line { clause, by });
        self.lines.len() - 1
    }

    pub fn to_text(&self) -> String {
        let rel = self.calculus.relation();
        let mut out = String::new();
        for (i, line) in self.lines.iter().enumerate() {
            let lits: Vec<String> = line
                .clause
                .iter()
                .map(|q| format!("{} {rel}", format_row(q.coeffs(), q.rhs())))
                .collect();
            let by = match &line.by {
                Justification::Axiom => "axiom".to_string(),
                Justification::Input(j) => format!("input {j}"),
                Justification::Res {
                    i,
                    li,
                    j,
                    lj,
                    alpha,
                    beta,
                } => {
                    format!("res {i} {li} {j} {lj} {alpha} {beta}")
                }
                Justification::ResNeq(pairs) => {
                    let ps: Vec<String> = pairs.iter().map(|(i, l)| format!("{i} {l}")).collect();
                    format!("res {}", ps.join(" "))
                }
                Justification::Simp(k) => format!("simp {k}"),
                Justification::Weak(k) => format!("weak {k}"),
                Justification::LinComb { k, l, g, b } => {
                    format!("lincomb {k} {l} {}", format_row(g, *b))
                }
            };
            if lits.is_empty() {
                writeln!(out, "line {i} clause by {by}").unwrap();
            } else {
                writeln!(out, "line {i} clause {} by {by}", lits.join(";")).unwrap();
            }
        }
        out
    }

    /// Grammar, one line per derivation step (blank lines and `#` comments ignored):
    ///
    /// ```text
    /// line <i> clause <lit>;<lit>;... by <justification>
    /// lit  := <n coeffs> | <rhs> =      (reslin)
    ///       | <n coeffs> | <rhs> !=     (reslin-neq)
    /// justification := axiom | input <j> | simp <k> | weak <k>
    ///       | res <i> <li> <j> <lj> <alpha> <beta>       (reslin)
    ///       | res <i_0> <l_0> ... <i_{p-1}> <l_{p-1}>    (reslin-neq)
    ///       | lincomb <k> <l> <n coeffs of g> | <b>
    /// ```
    ///
    /// Line numbers are 0-based and must be consecutive.
    pub fn parse(text: &str, calculus: Calculus, field: Field, n: usize) -> Result<Self> {
        let mut d = Derivation::new(calculus, field, n);
        for (idx, raw) in text.lines().enumerate() {
            let ln = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let rest = line
                .strip_prefix("line ")
                .ok_or_else(|| Error::parse(ln, "expected `line`"))?;
            let (num, rest) = rest
                .trim_start()
                .split_once(char::is_whitespace)
                .ok_or_else(|| Error::parse(ln, "truncated line"))?;
            let num: usize = num
                .parse()
                .map_err(|_| Error::parse(ln, format!("bad line number `{num}`")))?;
            if num != d.lines.len() {
                return Err(Error::parse(
                    ln,
                    format!("expected line {}, found {num}", d.lines.len()),
                ));
            }
            let rest = rest
                .trim_start()
                .strip_prefix("clause")
                .ok_or_else(|| Error::parse(ln, "expected `clause`"))?;
            let (lits, just) = match rest.rsplit_once(" by ") {
                Some(x) => x,
                None => rest
                    .trim_start()
                    .strip_prefix("by ")
                    .map(|j| ("", j))
                    .ok_or_else(|| Error::parse(ln, "expected `by`"))?,
            };
            let clause = parse_clause(lits, calculus, field, n, ln)?;
            let by = parse_justification(just.trim(), calculus, field, n, ln)?;
            d.lines.push(Line { clause, by });
        }
        if d.lines.is_empty() {
            return Err(Error::parse(1, "empty derivation"));
        }
        Ok(d)
    }
}

fn parse_clause(s: &str, calculus: Calculus, field: Field, n: usize, ln: usize) -> Result<Clause> {
    let rel = calculus.relation();
    s.split(';')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|lit| {
            let body = lit
                .strip_suffix(rel)
                .filter(|b| calculus == Calculus::ResLinNeq || !b.ends_with('!'))
                .ok_or_else(|| {
                    Error::parse(ln, format!("literal `{lit}` must end with `{rel}`"))
                })?;
            let (c, v) = parse_row(body.trim(), n, field, ln)?;
            Ok(AffinePoly::equation(field, &c, v))
        })
        .collect()
}

fn parse_justification(
    s: &str,
    calculus: Calculus,
    field: Field,
    n: usize,
    ln: usize,
) -> Result<Justification> {
    let (head, args) = s.split_once(char::is_whitespace).unwrap_or((s, ""));
    let nums = |args: &str| -> Result<Vec<usize>> {
        args.split_whitespace()
            .map(|t| {
                t.parse()
                    .map_err(|_| Error::parse(ln, format!("bad index `{t}`")))
            })
            .collect()
    };
    let one = |args: &str| -> Result<usize> {
        match nums(args)?.as_slice() {
            [k] => Ok(*k),
            _ => Err(Error::parse(ln, "expected one line index")),
        }
    };
    Ok(match head {
        "axiom" if args.trim().is_empty() => Justification::Axiom,
        "input" => Justification::Input(one(args)?),
        "simp" => Justification::Simp(one(args)?),
        "weak" => Justification::Weak(one(args)?),
        "res" => match calculus {
            Calculus::ResLin => match nums(args)?.as_slice() {
                &[i, li, j, lj, alpha, beta] => {
                    let [alpha, beta] = [alpha, beta].map(|x| x as u64);
                    if alpha >= field.p() as u64 || beta >= field.p() as u64 {
                        return Err(Error::parse(ln, "coefficients must lie in [0, p)"));
                    }
                    Justification::Res {
                        i,
                        li,
                        j,
                        lj,
                        alpha: alpha as Residue,
                        beta: beta as Residue,
                    }
                }
                _ => return Err(Error::parse(ln, "expected `res i li j lj alpha beta`")),
            },
            Calculus::ResLinNeq => {
                let v = nums(args)?;
                if v.is_empty() || v.len() % 2 != 0 {
                    return Err(Error::parse(ln, "expected (line, literal) pairs"));
                }
                Justification::ResNeq(v.chunks(2).map(|c| (c[0], c[1])).collect())
            }
        },
        "lincomb" => {
            let mut parts = args.trim().splitn(3, char::is_whitespace);
            let k = one(parts.next().unwrap_or(""))?;
            let l = one(parts.next().unwrap_or(""))?;
            let (g, b) = parse_row(parts.next().unwrap_or(""), n, field, ln)?;
            Justification::LinComb { k, l, g, b }
        }
        _ => return Err(Error::parse(ln, format!("unknown justification `{s}`"))),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let f = Field::new(5).unwrap();
        let text = "line 0 clause 1 | 0 =;1 | 1 = by axiom\nline 1 clause 1 | 3 = by input 0\nline 2 clause 1 | 1 =;0 | 2 = by res 0 0 1 0 1 4\nline 3 clause  by simp 2\n";
        let d = Derivation::parse(text, Calculus::ResLin, f, 1).unwrap();
        assert_eq!(d.lines.len(), 4);
        assert!(d.lines[3].clause.is_empty());
        let again = Derivation::parse(&d.to_text(), Calculus::ResLin, f, 1).unwrap();
        assert_eq!(again, d);
    }

    #[test]
    fn polarity_is_enforced() {
        let f = Field::new(5).unwrap();
        assert!(
            Derivation::parse("line 0 clause 1 | 2 != by axiom\n", Calculus::ResLin, f, 1).is_err()
        );
        assert!(Derivation::parse(
            "line 0 clause 1 | 2 = by axiom\n",
            Calculus::ResLinNeq,
            f,
            1
        )
        .is_err());
        assert!(Derivation::parse(
            "line 0 clause 1 | 2 != by axiom\n",
            Calculus::ResLinNeq,
            f,
            1
        )
        .is_ok());
    }

    #[test]
    fn line_numbers_are_sequential() {
        let f = Field::new(5).unwrap();
        let e = Derivation::parse(
            "line 1 clause 1 | 2 != by axiom\n",
            Calculus::ResLinNeq,
            f,
            1,
        );
        assert!(matches!(e, Err(Error::Parse { line: 1, .. })));
    }
}
