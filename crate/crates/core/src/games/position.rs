use crate::gf::{AffinePoly, AffineSpan, Field};
use crate::instances::LinearSystem;

/// 64-bit FNV-1a, used for position fingerprints in transcripts.
pub(crate) fn fnv1a(bytes: impl IntoIterator<Item = u8>) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

fn poly_bytes(q: &AffinePoly) -> impl Iterator<Item = u8> + '_ {
    q.terms().iter().flat_map(|t| t.to_le_bytes()).chain([0xff])
}

/// A position of the LinTrees game: the instance `F` plus the equations added so far.
#[derive(Clone, Debug)]
pub struct LinPosition {
    pub field: Field,
    pub n: usize,
    pub instance: Vec<AffinePoly>,
    /// Added equations `h - c`, flagged when added at a branching point.
    pub added: Vec<(AffinePoly, bool)>,
}

impl LinPosition {
    pub fn start(inst: &LinearSystem) -> Self {
        LinPosition {
            field: inst.field(),
            n: inst.n(),
            instance: inst.equations(),
            added: Vec::new(),
        }
    }

    /// `G`: equations added at branching points.
    pub fn branching(&self) -> Vec<AffinePoly> {
        self.added
            .iter()
            .filter(|(_, b)| *b)
            .map(|(q, _)| q.clone())
            .collect()
    }

    /// `H \ G`: equations added without branching.
    pub fn forced(&self) -> Vec<AffinePoly> {
        self.added
            .iter()
            .filter(|(_, b)| !*b)
            .map(|(q, _)| q.clone())
            .collect()
    }

    /// `F` together with every added equation.
    pub fn all(&self) -> Vec<AffinePoly> {
        let mut v = self.instance.clone();
        v.extend(self.added.iter().map(|(q, _)| q.clone()));
        v
    }

    pub fn span(&self) -> AffineSpan {
        AffineSpan::new(self.field, self.n, &self.all())
    }

    /// `<F + G>`.
    pub fn instance_plus_branching(&self) -> AffineSpan {
        let mut v = self.instance.clone();
        v.extend(self.branching());
        AffineSpan::new(self.field, self.n, &v)
    }

    /// The game ends once `F` with the added equations has no solution in F_p^n.
    pub fn is_endgame(&self) -> bool {
        self.span().is_inconsistent()
    }

    pub fn branchings(&self) -> usize {
        self.added.iter().filter(|(_, b)| *b).count()
    }

    pub fn fingerprint(&self) -> u64 {
        fnv1a(
            self.added
                .iter()
                .flat_map(|(q, b)| poly_bytes(q).chain([*b as u8]).collect::<Vec<_>>()),
        )
    }
}

/// A position of the tree-like Res(lin) game: a list of inequalities `q != 0`.
#[derive(Clone, Debug)]
pub struct ResPosition {
    pub field: Field,
    pub n: usize,
    pub instance: Vec<AffinePoly>,
    pub inequalities: Vec<AffinePoly>,
}

impl ResPosition {
    /// `{0 != a : a != 0}`.
    pub fn start(inst: &LinearSystem) -> Self {
        let field = inst.field();
        let n = inst.n();
        ResPosition {
            field,
            n,
            instance: inst.equations(),
            inequalities: (1..field.p())
                .map(|a| AffinePoly::constant_poly(field, n, field.neg(a)))
                .collect(),
        }
    }

    fn has(&self, q: &AffinePoly) -> bool {
        let q = q.normalized();
        self.inequalities.iter().any(|h| h.normalized() == q)
    }

    /// Which endgame condition holds, if any. Inequalities are compared up
    /// to a nonzero scalar, since `q != 0` and `c q != 0` say the same thing.
    pub fn endgame(&self) -> Option<String> {
        if self.inequalities.iter().any(AffinePoly::is_zero) {
            return Some("0 != 0".into());
        }
        for j in 0..self.n {
            let x = AffinePoly::variable(self.field, self.n, j);
            if self.has(&x) && self.has(&x.shift_constant(self.field.neg(1))) {
                return Some(format!("x{0} != 0 and x{0} != 1", j + 1));
            }
        }
        self.instance
            .iter()
            .find(|q| self.has(q))
            .map(|q| format!("instance inequality {}", q).replace(" = ", " != "))
    }

    pub fn fingerprint(&self) -> u64 {
        fnv1a(
            self.inequalities
                .iter()
                .flat_map(|q| poly_bytes(q).collect::<Vec<_>>()),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fnv_reference_values() {
        assert_eq!(fnv1a([]), 0xcbf2_9ce4_8422_2325);
        assert_eq!(fnv1a(*b"a"), 0xaf63_dc4c_8601_ec8c);
    }

    #[test]
    fn reslin_endgames() {
        let f = Field::new(5).unwrap();
        let inst =
            LinearSystem::from_equations(f, 2, &[AffinePoly::equation(f, &[1, 1], 3)]).unwrap();
        let mut pos = ResPosition::start(&inst);
        assert_eq!(pos.inequalities.len(), 4);
        assert_eq!(pos.endgame(), None);
        pos.inequalities.push(AffinePoly::equation(f, &[2, 2], 1));
        assert!(pos.endgame().is_some());
        let mut pos = ResPosition::start(&inst);
        pos.inequalities.push(AffinePoly::variable(f, 2, 1));
        assert_eq!(pos.endgame(), None);
        pos.inequalities.push(AffinePoly::equation(f, &[0, 3], 3));
        assert!(pos.endgame().unwrap().contains("x2"));
    }
}
