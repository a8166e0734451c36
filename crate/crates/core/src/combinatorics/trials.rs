//! Seeded desk-scale trials of the combinatorial claims. Every trial draws
//! its inputs from a ChaCha8 stream, enforces the claim's preconditions by
//! redrawing, runs the constructive procedure, and re-checks the outcome by
//! a separate brute-force scan.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::claims::{
    image_size_bound_check, implied_equation_check, kill_narrow, trunc_dim_bound_check, Implication,
};
use super::eccsat::ecc_sat_solve;
use super::sumset::{cover_check_addcomb, find_line, zero_one_sumset, BasisFamily};
use crate::error::{Error, Result};
use crate::games::{c_e, c_i};
use crate::gf::{cube, AffinePoly, AffineSpan, Budget, FMatrix, Field, Residue, Restrict};
use crate::instances::code_distance;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Lemma {
    AddComb,
    BlockClaim,
    EccSat,
    ImplClaim,
    AssignClaim,
    ShortDim,
    ImgLb,
}

impl Lemma {
    pub const ALL: [Lemma; 7] = [
        Lemma::AddComb,
        Lemma::BlockClaim,
        Lemma::EccSat,
        Lemma::ImplClaim,
        Lemma::AssignClaim,
        Lemma::ShortDim,
        Lemma::ImgLb,
    ];
}

impl fmt::Display for Lemma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Lemma::AddComb => "addcomb",
            Lemma::BlockClaim => "blockclaim",
            Lemma::EccSat => "eccsat",
            Lemma::ImplClaim => "implclaim",
            Lemma::AssignClaim => "assignclaim",
            Lemma::ShortDim => "shortdim",
            Lemma::ImgLb => "imglb",
        })
    }
}

impl FromStr for Lemma {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Lemma::ALL
            .into_iter()
            .find(|l| l.to_string() == s)
            .ok_or_else(|| format!("unknown lemma `{s}`"))
    }
}

/// Trial parameters; `m` is used by the sumset lemmas, `n` by the others.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TrialParams {
    pub p: u64,
    pub m: usize,
    pub n: usize,
}

impl TrialParams {
    /// Defaults per lemma: `m = 1`; `n` is the desk-scale size of the trial.
    pub fn defaults(lemma: Lemma, p: u64) -> Self {
        let n = match lemma {
            Lemma::AddComb | Lemma::BlockClaim => 0,
            Lemma::EccSat => 24,
            Lemma::ImplClaim | Lemma::AssignClaim => 12,
            Lemma::ShortDim => 8,
            Lemma::ImgLb => 12,
        };
        TrialParams { p, m: 1, n }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrialRow {
    pub seed: u64,
    /// `key=value` pairs separated by `;`.
    pub params: String,
    /// The claim's conclusion held.
    pub ok: bool,
    /// The brute-force recount agreed with the procedure's own answer.
    pub verified: bool,
    pub detail: String,
}

const MAX_DRAWS: u32 = 500;

pub fn run_trial(lemma: Lemma, params: TrialParams, seed: u64, budget: Budget) -> Result<TrialRow> {
    let field = Field::new(params.p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let Outcome {
        params,
        ok,
        verified,
        detail,
    } = match lemma {
        Lemma::AddComb => addcomb(field, params.m, &mut rng, budget)?,
        Lemma::BlockClaim => blockclaim(field, params.m, &mut rng, budget)?,
        Lemma::EccSat => eccsat(field, params.m, params.n, &mut rng, budget)?,
        Lemma::ImplClaim => implclaim(field, params.n, &mut rng, budget)?,
        Lemma::AssignClaim => assignclaim(field, params.n, &mut rng, budget)?,
        Lemma::ShortDim => shortdim(field, params.n, &mut rng, budget)?,
        Lemma::ImgLb => imglb(field, params.n, &mut rng, budget)?,
    };
    Ok(TrialRow {
        seed,
        params,
        ok,
        verified,
        detail,
    })
}

struct Outcome {
    params: String,
    ok: bool,
    verified: bool,
    detail: String,
}

fn add_vec(f: Field, a: &[Residue], b: &[Residue]) -> Vec<Residue> {
    a.iter().zip(b).map(|(&x, &y)| f.add(x, y)).collect()
}

fn addcomb(f: Field, m: usize, rng: &mut ChaCha8Rng, budget: Budget) -> Result<Outcome> {
    let t = (c_e(f.p()) * (m * m) as f64).ceil() as usize;
    let fam = BasisFamily::random(f, m, t, rng);
    let ok = cover_check_addcomb(&fam, budget)?;
    // recount: every element of F_p^m has a witness that re-evaluates to it
    let s = zero_one_sumset(f, m, &fam.vectors(), budget)?;
    let vs = fam.vectors();
    let recount = s
        .elements()
        .iter()
        .filter(|e| {
            let w = s.witness(e).expect("member");
            let mut acc = vec![0; m];
            for (v, _) in vs.iter().zip(&w).filter(|(_, &b)| b) {
                acc = add_vec(f, &acc, v);
            }
            acc == **e
        })
        .count();
    let size = f.count(m) as usize;
    Ok(Outcome {
        params: format!("p={};m={m};t={t}", f.p()),
        ok,
        verified: ok == (recount == size),
        detail: format!("covered={recount}/{size}"),
    })
}

fn blockclaim(f: Field, m: usize, rng: &mut ChaCha8Rng, budget: Budget) -> Result<Outcome> {
    let t = (c_e(f.p()) * m as f64).ceil() as usize;
    let fam = BasisFamily::random(f, m, t, rng);
    let s_len = rng.gen_range(0..m);
    let s: Vec<Vec<Residue>> = (0..s_len)
        .map(|_| (0..m).map(|_| rng.gen_range(0..f.p())).collect())
        .collect();
    let params = format!("p={};m={m};t={t};s={s_len}", f.p());
    match find_line(&s, &fam, budget) {
        Ok((v, a)) => {
            let sumset = zero_one_sumset(f, m, &fam.vectors(), budget)?;
            let mut x = a.clone();
            let mut on_line = 0;
            for _ in 0..f.p() {
                on_line += sumset.contains(&x) as usize;
                x = add_vec(f, &x, &v);
            }
            let rank = |rows: &[Vec<Residue>]| {
                if rows.is_empty() {
                    0
                } else {
                    FMatrix::from_rows(f, m, rows).expect("shape").rank()
                }
            };
            let mut with_v = s.clone();
            with_v.push(v.clone());
            let independent = rank(&with_v) > rank(&s);
            Ok(Outcome {
                params,
                ok: true,
                verified: on_line == f.p() as usize && independent,
                detail: format!("v={v:?};a={a:?};points={on_line}"),
            })
        }
        Err(Error::NotFound) => Ok(Outcome {
            params,
            ok: false,
            verified: true,
            detail: "no line".into(),
        }),
        Err(e) => Err(e),
    }
}

fn random_matrix(f: Field, rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> FMatrix {
    let data: Vec<Vec<Residue>> = (0..rows)
        .map(|_| (0..cols).map(|_| rng.gen_range(0..f.p())).collect())
        .collect();
    FMatrix::from_rows(f, cols, &data).expect("shape")
}

fn eccsat(f: Field, m: usize, n: usize, rng: &mut ChaCha8Rng, budget: Budget) -> Result<Outcome> {
    let need = (c_e(f.p()) * (m as f64).powi(3)).ceil() as usize;
    let mut draw = 0;
    let (mat, d) = loop {
        let mat = random_matrix(f, m, n, rng);
        let d = code_distance(&mat, budget)?;
        if d >= need {
            break (mat, d);
        }
        draw += 1;
        if draw >= MAX_DRAWS {
            return Err(Error::RetriesExhausted(MAX_DRAWS));
        }
    };
    let a: Vec<Residue> = (0..m).map(|_| rng.gen_range(0..f.p())).collect();
    let x = ecc_sat_solve(&mat, &a, budget)?;
    // substitution, computed column by column
    let mut lhs = vec![0; m];
    for (j, &b) in x.iter().enumerate() {
        if b {
            lhs = add_vec(f, &lhs, &mat.column(j));
        }
    }
    Ok(Outcome {
        params: format!("p={};m={m};n={n};d={d}", f.p()),
        ok: true,
        verified: lhs == a,
        detail: format!("ones={}", x.iter().filter(|&&b| b).count()),
    })
}

/// A random equation over `n` variables with a random support size.
fn random_equation(f: Field, n: usize, rng: &mut ChaCha8Rng) -> AffinePoly {
    let w = rng.gen_range(0..=n);
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(rng);
    let mut c = vec![0; n];
    for &j in &idx[..w] {
        c[j] = rng.gen_range(1..f.p());
    }
    AffinePoly::equation(f, &c, rng.gen_range(0..f.p()))
}

/// Every combination of `gens` (not of an echelon basis), as term vectors.
fn all_combinations(
    f: Field,
    n: usize,
    gens: &[AffinePoly],
    budget: Budget,
) -> Result<Vec<Vec<Residue>>> {
    let width = n + 1;
    budget.check(f.count(gens.len()))?;
    let mut out = vec![vec![0; width]];
    for g in gens {
        let mut next = Vec::with_capacity(out.len() * f.p() as usize);
        for v in &out {
            for c in 0..f.p() {
                next.push(
                    v.iter()
                        .zip(g.terms())
                        .map(|(&a, &b)| f.add(a, f.mul(c, b)))
                        .collect(),
                );
            }
        }
        out = next;
    }
    Ok(out)
}

/// Least weight of a combination with a nonzero linear part, by brute force.
fn brute_weight(f: Field, n: usize, gens: &[AffinePoly], budget: Budget) -> Result<Option<usize>> {
    Ok(all_combinations(f, n, gens, budget)?
        .iter()
        .map(|t| t[..n].iter().filter(|&&c| c != 0).count())
        .filter(|&w| w > 0)
        .min())
}

fn brute_rank(f: Field, width: usize, rows: &[Vec<Residue>]) -> usize {
    if rows.is_empty() {
        0
    } else {
        FMatrix::from_rows(f, width, rows).expect("shape").rank()
    }
}

fn implclaim(f: Field, n: usize, rng: &mut ChaCha8Rng, budget: Budget) -> Result<Outcome> {
    let ci = c_i(f.p());
    // the largest dimension the weight precondition can admit on n variables
    let kmax = (0..=n)
        .take_while(|&k| ci * (k as f64).powi(3) <= n as f64)
        .last()
        .unwrap_or(0);
    let k = rng.gen_range(0..=kmax);
    let mut draw = 0;
    let gens = loop {
        let gens: Vec<AffinePoly> = (0..k).map(|_| random_equation(f, n, rng)).collect();
        let span = AffineSpan::new(f, n, &gens);
        let w = brute_weight(f, n, &gens, budget)?;
        if span.dim() == k && w.is_none_or(|w| w as f64 >= ci * (k as f64).powi(3)) {
            break gens;
        }
        draw += 1;
        if draw >= MAX_DRAWS {
            return Err(Error::RetriesExhausted(MAX_DRAWS));
        }
    };
    let p = AffineSpan::new(f, n, &gens);
    // half of the queries are combinations of P, the rest random
    let h = if rng.gen_bool(0.5) {
        let mut h = AffinePoly::zero(f, n);
        for g in &gens {
            h = h.add_scaled(g, rng.gen_range(0..f.p()));
        }
        h
    } else {
        random_equation(f, n, rng)
    };
    let verdict = implied_equation_check(&p, &h, budget)?;
    // independent scan of the cube
    let violated: Vec<Vec<bool>> = cube::cube_points(n)
        .filter(|x| gens.iter().all(|g| g.eval_bool(x) == 0) && h.eval_bool(x) != 0)
        .take(1)
        .collect();
    let mut rows: Vec<Vec<Residue>> = gens.iter().map(|g| g.terms().to_vec()).collect();
    let r0 = brute_rank(f, n + 1, &rows);
    rows.push(h.terms().to_vec());
    let in_span = brute_rank(f, n + 1, &rows) == r0;
    let consistent = match &verdict {
        Implication::NotImplied(x) => {
            gens.iter().all(|g| g.eval_bool(x) == 0) && h.eval_bool(x) != 0 && !violated.is_empty()
        }
        Implication::InSpan => violated.is_empty() && in_span,
        Implication::ImpliedNotInSpan => violated.is_empty() && !in_span,
    };
    let label = match verdict {
        Implication::InSpan => "implied_in_span",
        Implication::ImpliedNotInSpan => "implied_not_in_span",
        Implication::NotImplied(_) => "not_implied",
    };
    Ok(Outcome {
        params: format!("p={};n={n};dim={k}", f.p()),
        ok: label != "implied_not_in_span",
        verified: consistent,
        detail: label.into(),
    })
}

fn random_span(f: Field, n: usize, dim: usize, rng: &mut ChaCha8Rng) -> Vec<AffinePoly> {
    loop {
        let gens: Vec<AffinePoly> = (0..dim).map(|_| random_equation(f, n, rng)).collect();
        if AffineSpan::new(f, n, &gens).dim() == dim {
            return gens;
        }
    }
}

fn assignclaim(f: Field, n: usize, rng: &mut ChaCha8Rng, budget: Budget) -> Result<Outcome> {
    let mut draw = 0;
    loop {
        draw += 1;
        if draw > MAX_DRAWS {
            return Err(Error::RetriesExhausted(MAX_DRAWS));
        }
        let tau0 = rng.gen_range(1..=2usize);
        let dr = rng.gen_range(0..=2usize);
        let need = 2 * tau0 * (dr + 1);
        if need > n {
            continue;
        }
        let kp = rng.gen_range(1..=2usize);
        let pg = random_span(f, n, kp, rng);
        if brute_weight(f, n, &pg, budget)?.is_some_and(|w| w < need) {
            continue;
        }
        let rg = random_span(f, n, dr, rng);
        let p = AffineSpan::new(f, n, &pg);
        let r = AffineSpan::new(f, n, &rg);
        let narrow = p.sum(&r).truncated(2 * dr * tau0, budget)?;
        let models = narrow.zero_one_models(budget)?;
        let Some(rho0) = models.choose(rng).cloned() else {
            continue;
        };
        let k = kill_narrow(&p, &r, &rho0, tau0, budget)?;
        // re-check against the generators directly
        let mut all = pg.clone();
        all.extend(rg.iter().cloned());
        let restricted: Vec<AffinePoly> = all.restrict(&k.rho);
        let w = brute_weight(f, n, &restricted, budget)?;
        let agrees = k.rho.iter().all(|(j, b)| rho0[j] == b);
        let ok = agrees && k.rho.len() <= dr * tau0 && k.steps <= dr && w.is_none_or(|w| w >= tau0);
        return Ok(Outcome {
            params: format!("p={};n={n};tau0={tau0};dimR={dr};dimP={kp}", f.p()),
            ok,
            verified: true,
            detail: format!("bound={};steps={}", k.rho.len(), k.steps),
        });
    }
}

fn shortdim(f: Field, n: usize, rng: &mut ChaCha8Rng, budget: Budget) -> Result<Outcome> {
    let mut draw = 0;
    loop {
        draw += 1;
        if draw > MAX_DRAWS {
            return Err(Error::RetriesExhausted(MAX_DRAWS));
        }
        let kp = rng.gen_range(1..=3usize);
        let dr = rng.gen_range(0..=2usize);
        let tau0 = rng.gen_range(1..=3usize);
        let pg = random_span(f, n, kp, rng);
        if brute_weight(f, n, &pg, budget)?.is_some_and(|w| w <= dr * tau0) {
            continue;
        }
        let rg = random_span(f, n, dr, rng);
        let p = AffineSpan::new(f, n, &pg);
        let r = AffineSpan::new(f, n, &rg);
        // an inconsistent sum puts the constant 1 in every truncation
        if p.sum(&r).is_inconsistent() {
            continue;
        }
        let b = trunc_dim_bound_check(&p, &r, tau0, budget)?;
        let mut all = pg.clone();
        all.extend(rg.iter().cloned());
        let narrow: Vec<Vec<Residue>> = all_combinations(f, n, &all, budget)?
            .into_iter()
            .filter(|t| t[..n].iter().filter(|&&c| c != 0).count() <= tau0)
            .collect();
        let dim = brute_rank(f, n + 1, &narrow);
        return Ok(Outcome {
            params: format!("p={};n={n};tau0={tau0};dimR={dr};dimP={kp}", f.p()),
            ok: b.holds(),
            verified: dim == b.truncated_dim && b.holds() == (dim <= dr),
            detail: format!("truncated_dim={dim};strict={}", b.strict_hypothesis),
        });
    }
}

fn imglb(f: Field, n: usize, rng: &mut ChaCha8Rng, budget: Budget) -> Result<Outcome> {
    let rows = 4.min(n.max(1));
    let eps = 0.25;
    let mat = random_matrix(f, rows, n, rng);
    let size = 2f64.powf((1.0 - eps) * n as f64).ceil() as usize;
    let mut idx: Vec<u64> = (0..1u64 << n).collect();
    idx.shuffle(rng);
    let x: Vec<Vec<bool>> = idx[..size]
        .iter()
        .map(|&c| (0..n).map(|j| c >> j & 1 == 1).collect())
        .collect();
    let b = image_size_bound_check(&mat, &x, eps, budget)?;
    // recount the image and the fiber of the witness suffix
    let mut image = HashSet::new();
    let mut fiber_image = HashSet::new();
    for v in &x {
        let mut y = vec![0; rows];
        for (j, &bit) in v.iter().enumerate() {
            if bit {
                y = add_vec(f, &y, &mat.column(j));
            }
        }
        if b.suffix_columns
            .iter()
            .zip(&b.suffix)
            .all(|(&j, &s)| v[j] == s)
        {
            fiber_image.insert(y.clone());
        }
        image.insert(y);
    }
    Ok(Outcome {
        params: format!("p={};k={rows};n={n};eps={eps}", f.p()),
        ok: b.holds(),
        verified: image.len() == b.image_size && fiber_image.len() == b.fiber,
        detail: format!(
            "image={};fiber={};bound={:.3}",
            image.len(),
            b.fiber,
            b.bound
        ),
    })
}
