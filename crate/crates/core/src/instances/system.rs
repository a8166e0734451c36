use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::gf::{AffinePoly, AffineSpan, FMatrix, Field, PartialAssignment, Residue, Restrict};

/// The equations `A x = b` over F_p.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearSystem {
    a: FMatrix,
    b: Vec<Residue>,
}

impl LinearSystem {
    pub fn new(a: FMatrix, b: Vec<Residue>) -> Result<Self> {
        if b.len() != a.rows() {
            return Err(Error::Dimension(format!(
                "right-hand side of length {} for {} rows",
                b.len(),
                a.rows()
            )));
        }
        if b.iter().any(|&x| x >= a.field().p()) {
            return Err(Error::Dimension("unreduced right-hand side".into()));
        }
        Ok(LinearSystem { a, b })
    }

    /// One row per equation, in order.
    pub fn from_equations(field: Field, n: usize, eqs: &[AffinePoly]) -> Result<Self> {
        let rows: Vec<Vec<Residue>> = eqs.iter().map(|q| q.coeffs().to_vec()).collect();
        let a = FMatrix::from_rows(field, n, &rows)?;
        LinearSystem::new(a, eqs.iter().map(AffinePoly::rhs).collect())
    }

    pub fn field(&self) -> Field {
        self.a.field()
    }

    pub fn a(&self) -> &FMatrix {
        &self.a
    }

    pub fn b(&self) -> &[Residue] {
        &self.b
    }

    /// Number of equations.
    pub fn k(&self) -> usize {
        self.a.rows()
    }

    /// Number of variables.
    pub fn n(&self) -> usize {
        self.a.cols()
    }

    pub fn equation(&self, i: usize) -> AffinePoly {
        AffinePoly::equation(self.field(), self.a.row(i), self.b[i])
    }

    pub fn equations(&self) -> Vec<AffinePoly> {
        (0..self.k()).map(|i| self.equation(i)).collect()
    }

    pub fn span(&self) -> AffineSpan {
        AffineSpan::new(self.field(), self.n(), &self.equations())
    }

    /// Unsolvable over all of F_p^n.
    pub fn is_inconsistent(&self) -> bool {
        self.span().is_inconsistent()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "p {}", self.field().p()).unwrap();
        writeln!(out, "dims {} {}", self.k(), self.n()).unwrap();
        for i in 0..self.k() {
            writeln!(out, "{}", format_row(self.a.row(i), self.b[i])).unwrap();
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());

        let (ln, header) = lines
            .next()
            .ok_or_else(|| Error::parse(1, "empty instance file"))?;
        let p = match header.split_whitespace().collect::<Vec<_>>().as_slice() {
            ["p", v] => v
                .parse::<u64>()
                .map_err(|_| Error::parse(ln, "bad modulus"))?,
            _ => return Err(Error::parse(ln, "expected `p <prime>`")),
        };
        let field = Field::new(p).map_err(|e| Error::parse(ln, e.to_string()))?;

        let (ln, dims) = lines
            .next()
            .ok_or_else(|| Error::parse(ln, "missing `dims` line"))?;
        let (k, n) = match dims.split_whitespace().collect::<Vec<_>>().as_slice() {
            ["dims", k, n] => (
                k.parse::<usize>()
                    .map_err(|_| Error::parse(ln, "bad row count"))?,
                n.parse::<usize>()
                    .map_err(|_| Error::parse(ln, "bad column count"))?,
            ),
            _ => return Err(Error::parse(ln, "expected `dims <k> <n>`")),
        };

        let mut rows = Vec::with_capacity(k);
        let mut b = Vec::with_capacity(k);
        let mut last = ln;
        for (ln, line) in lines {
            last = ln;
            if rows.len() == k {
                return Err(Error::parse(ln, format!("more than {k} rows")));
            }
            let (coeffs, rhs) = parse_row(line, n, field, ln)?;
            rows.push(coeffs);
            b.push(rhs);
        }
        if rows.len() != k {
            return Err(Error::parse(
                last,
                format!("expected {k} rows, found {}", rows.len()),
            ));
        }
        let a =
            FMatrix::from_rows(field, n, &rows).map_err(|e| Error::parse(last, e.to_string()))?;
        LinearSystem::new(a, b)
    }
}

/// Parse `c_1 ... c_n | v` with all integers in `[0, p)`.
pub(crate) fn parse_row(
    line: &str,
    n: usize,
    field: Field,
    ln: usize,
) -> Result<(Vec<Residue>, Residue)> {
    let (lhs, rhs) = line
        .split_once('|')
        .ok_or_else(|| Error::parse(ln, "missing `|`"))?;
    let coeffs = parse_residues(lhs, field, ln)?;
    if coeffs.len() != n {
        return Err(Error::parse(
            ln,
            format!("expected {n} coefficients, found {}", coeffs.len()),
        ));
    }
    let rhs = parse_residues(rhs, field, ln)?;
    if rhs.len() != 1 {
        return Err(Error::parse(ln, "expected one value after `|`"));
    }
    Ok((coeffs, rhs[0]))
}

pub(crate) fn parse_residues(s: &str, field: Field, ln: usize) -> Result<Vec<Residue>> {
    s.split_whitespace()
        .map(|t| {
            let v: Residue = t
                .parse()
                .map_err(|_| Error::parse(ln, format!("bad integer `{t}`")))?;
            if v >= field.p() {
                return Err(Error::parse(ln, format!("{v} not in [0, {})", field.p())));
            }
            Ok(v)
        })
        .collect()
}

/// `c_1 ... c_n | v` as written in instance and proof files.
pub(crate) fn format_row(coeffs: &[Residue], v: Residue) -> String {
    let mut tokens: Vec<String> = coeffs.iter().map(u32::to_string).collect();
    tokens.push("|".into());
    tokens.push(v.to_string());
    tokens.join(" ")
}

impl Restrict for LinearSystem {
    fn restrict(&self, rho: &PartialAssignment) -> Self {
        let eqs = self.equations().restrict(rho);
        LinearSystem::from_equations(self.field(), self.n(), &eqs).expect("same shape")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f5() -> Field {
        Field::new(5).unwrap()
    }

    #[test]
    fn text_round_trip() {
        let a = FMatrix::from_signed(f5(), &[vec![1, 2, 0], vec![4, 4, 1]]).unwrap();
        let s = LinearSystem::new(a, vec![3, 0]).unwrap();
        let text = s.to_text();
        assert_eq!(text, "p 5\ndims 2 3\n1 2 0 | 3\n4 4 1 | 0\n");
        let back = LinearSystem::parse(&text).unwrap();
        assert_eq!(back, s);
        assert_eq!(back.to_text(), text);
    }

    #[test]
    fn comments_and_blank_lines() {
        let s = LinearSystem::parse("# hello\np 7\n\ndims 1 2 # shape\n1 1 | 3\n").unwrap();
        assert_eq!(s.k(), 1);
        assert_eq!(
            s.equation(0),
            AffinePoly::equation(Field::new(7).unwrap(), &[1, 1], 3)
        );
    }

    #[test]
    fn parse_errors_carry_line() {
        let err = LinearSystem::parse("p 5\ndims 1 2\n1 7 | 0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
        assert!(matches!(LinearSystem::parse(""), Err(Error::Parse { .. })));
        assert!(matches!(
            LinearSystem::parse("p 4\ndims 0 0\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(LinearSystem::parse("p 5\ndims 2 1\n1 | 0\n").is_err());
    }

    #[test]
    fn restrict_system() {
        let s = LinearSystem::from_equations(f5(), 3, &[AffinePoly::equation(f5(), &[1, 2, 1], 4)])
            .unwrap();
        let rho = PartialAssignment::from_pairs(3, [(1, true)]).unwrap();
        let r = s.restrict(&rho);
        assert_eq!(r.a().row(0), &[1, 0, 1]);
        assert_eq!(r.b(), &[2]);
    }
}
