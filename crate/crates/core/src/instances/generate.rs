use std::fmt;
use std::ops::ControlFlow;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::analysis::{code_distance, zero_one_image, zero_one_sat};
use super::system::LinearSystem;
use crate::error::{Error, Result};
use crate::gf::{for_each_combination, Budget, FMatrix, Field, Residue};

pub const MAX_RETRIES: u32 = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GeneratorKind {
    ReedSolomon,
    RandomDistance,
    /// Matrix supplied by the caller or read from a file.
    Given,
}

impl fmt::Display for GeneratorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GeneratorKind::ReedSolomon => "reed-solomon",
            GeneratorKind::RandomDistance => "random-distance",
            GeneratorKind::Given => "given",
        })
    }
}

impl FromStr for GeneratorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "reed-solomon" | "rs" => Ok(GeneratorKind::ReedSolomon),
            "random-distance" | "random" => Ok(GeneratorKind::RandomDistance),
            "given" => Ok(GeneratorKind::Given),
            _ => Err(Error::InfeasibleParams(format!("unknown generator `{s}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Provenance {
    pub kind: GeneratorKind,
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GenParams {
    pub kind: GeneratorKind,
    pub p: u64,
    pub n: usize,
    pub k: usize,
    pub min_d: usize,
    pub seed: u64,
}

/// A 0-1 unsatisfiable system `A x = b` whose matrix generates a code of distance `d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EccInstance {
    pub system: LinearSystem,
    pub d: usize,
    pub provenance: Provenance,
}

impl EccInstance {
    /// Recomputes the distance and re-verifies 0-1 unsatisfiability.
    pub fn from_system(
        system: LinearSystem,
        provenance: Provenance,
        budget: Budget,
    ) -> Result<Self> {
        let d = code_distance(system.a(), budget)?;
        if zero_one_sat(&system, budget)?.is_some() {
            return Err(Error::NotUnsat);
        }
        Ok(EccInstance {
            system,
            d,
            provenance,
        })
    }

    pub fn k(&self) -> usize {
        self.system.k()
    }

    pub fn n(&self) -> usize {
        self.system.n()
    }
}

/// Rows `(alpha_j^i)` for `i < k` at the points `alpha_j = j`, with `0^0 = 1`.
pub fn reed_solomon_matrix(field: Field, n: usize, k: usize) -> Result<FMatrix> {
    if n > field.p() as usize {
        return Err(Error::InfeasibleParams(format!(
            "Reed-Solomon needs n <= p, got n = {n}, p = {}",
            field.p()
        )));
    }
    let mut m = FMatrix::zeros(field, k, n);
    for i in 0..k {
        for j in 0..n {
            m.set(i, j, field.pow(j as Residue, i as u64));
        }
    }
    Ok(m)
}

/// Uniform entries in `[0, p)`.
pub fn random_matrix<R: Rng>(field: Field, k: usize, n: usize, rng: &mut R) -> FMatrix {
    let data = (0..k * n).map(|_| rng.gen_range(0..field.p())).collect();
    FMatrix::new(field, k, n, data).expect("reduced entries")
}

fn check_pigeonhole(field: Field, n: usize, k: usize) -> Result<()> {
    let cube = 1u128.checked_shl(n as u32).unwrap_or(u128::MAX);
    if cube >= field.count(k) {
        return Err(Error::InfeasibleParams(format!(
            "2^{n} >= {}^{k}: the boolean image may cover F_p^k",
            field.p()
        )));
    }
    Ok(())
}

/// The lexicographically smallest `b` outside `A({0,1}^n)`.
pub fn smallest_non_image(a: &FMatrix, budget: Budget) -> Result<Option<Vec<Residue>>> {
    let image = zero_one_image(a, budget)?;
    let field = a.field();
    let k = a.rows();
    let units: Vec<Vec<Residue>> = (0..k)
        .map(|i| (0..k).map(|j| (i == j) as Residue).collect())
        .collect();
    let rows: Vec<&[Residue]> = units.iter().map(Vec::as_slice).collect();
    let mut found = None;
    for_each_combination(field, &rows, k, budget, |b, _| {
        if image.contains(b) {
            ControlFlow::Continue(())
        } else {
            found = Some(b.to_vec());
            ControlFlow::Break(())
        }
    })?;
    Ok(found)
}

/// Pair a fixed matrix with its smallest non-image right-hand side.
pub fn instance_from_matrix(a: FMatrix, budget: Budget) -> Result<EccInstance> {
    let b = smallest_non_image(&a, budget)?.ok_or_else(|| {
        Error::InfeasibleParams("every vector of F_p^k is a boolean image".into())
    })?;
    let system = LinearSystem::new(a, b)?;
    EccInstance::from_system(
        system,
        Provenance {
            kind: GeneratorKind::Given,
            seed: 0,
        },
        budget,
    )
}

pub fn gen_instance(params: GenParams, budget: Budget) -> Result<EccInstance> {
    let field = Field::new(params.p)?;
    let GenParams {
        kind,
        n,
        k,
        min_d,
        seed,
        ..
    } = params;
    check_pigeonhole(field, n, k)?;
    let a = match kind {
        GeneratorKind::ReedSolomon => {
            let a = reed_solomon_matrix(field, n, k)?;
            let d = code_distance(&a, budget)?;
            if d < min_d {
                return Err(Error::InfeasibleParams(format!(
                    "Reed-Solomon distance {d} below requested {min_d}"
                )));
            }
            a
        }
        GeneratorKind::RandomDistance => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut accepted = None;
            for _ in 0..MAX_RETRIES {
                let a = random_matrix(field, k, n, &mut rng);
                if code_distance(&a, budget)? >= min_d.max(1) {
                    accepted = Some(a);
                    break;
                }
            }
            accepted.ok_or(Error::RetriesExhausted(MAX_RETRIES))?
        }
        GeneratorKind::Given => {
            return Err(Error::InfeasibleParams("`given` is not a generator".into()));
        }
    };
    let mut inst = instance_from_matrix(a, budget)?;
    inst.provenance = Provenance { kind, seed };
    Ok(inst)
}
