//! Structural self-tests of the algebraic building blocks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{g1_basis, jacobi_residual, Gen, SuperElement};
use crate::error::Error;
use crate::linalg::Echelon;
use crate::omega::SuiteResult;
use crate::rational::Rational;
use crate::sl5::{gelfand_tsetlin_count, weyl_dim, IrrepModule};
use crate::uminus::{monomials_of_degree, Monomial, UElem};
use crate::weight::Weight;

/// Default bound on dim F(λ) for the modules actually constructed by [`weyl_suite`].
pub const DEFAULT_WEYL_BUILD_CAP: u64 = 10_000;

/// ∂_i, d_ij, the Chevalley generators and h_i of g₀, and the basis of g₁.
pub fn spanning_set() -> Vec<SuperElement> {
    let mut v: Vec<SuperElement> = (0..5).map(SuperElement::partial).collect();
    v.extend((0..10).map(|p| SuperElement::gen(Gen::D(p))));
    for i in 0..4 {
        v.push(SuperElement::e(i, i + 1));
        v.push(SuperElement::e(i + 1, i));
        v.push(SuperElement::h(i));
    }
    v.extend(g1_basis());
    v
}

/// Jacobi residuals: every triple with at least two entries from g₋ (in all
/// three positions), plus `random` seeded triples from the whole spanning set.
/// Triples whose brackets leave the supported degrees are skipped, not counted.
pub fn jacobi_suite(random: usize, seed: u64) -> SuiteResult {
    let all = spanning_set();
    let neg = &all[..15];
    let mut triples: Vec<(usize, usize, usize)> = Vec::new();
    for a in 0..neg.len() {
        for b in 0..neg.len() {
            for c in 0..all.len() {
                triples.extend([(a, b, c), (a, c, b), (c, a, b)]);
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..random {
        let n = all.len();
        triples.push((rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n)));
    }
    let results: Vec<Option<bool>> = triples
        .par_iter()
        .map(|&(a, b, c)| match jacobi_residual(&all[a], &all[b], &all[c]) {
            Ok(r) => Some(r.is_zero()),
            Err(Error::UnsupportedDegree(_)) => None,
            Err(_) => Some(false),
        })
        .collect();
    let mut r = SuiteResult::new("jacobi");
    for (&(a, b, c), ok) in triples.iter().zip(results) {
        if let Some(ok) = ok {
            r.check(ok, || format!("{} | {} | {}", all[a], all[b], all[c]));
        }
    }
    r
}

fn random_monomial(rng: &mut impl Rng, max_degree: u32) -> Monomial {
    loop {
        let forms: Vec<usize> = (0..10).filter(|_| rng.gen_bool(0.2)).collect();
        let mut partials = [0u8; 5];
        for p in partials.iter_mut() {
            *p = rng.gen_range(0..2);
        }
        let m = Monomial::new(partials, &forms);
        if m.degree() <= max_degree {
            return m;
        }
    }
}

/// (ab)c = a(bc) for all triples of generators ∂_i, d_ij and for `random`
/// seeded triples of PBW monomials of degree ≤ 5.
pub fn associativity_suite(random: usize, seed: u64) -> SuiteResult {
    let gens: Vec<UElem> = (0..5)
        .map(|i| UElem::monomial(Monomial::partial(i), Rational::one()))
        .chain((0..10).map(|p| UElem::monomial(Monomial::form(p), Rational::one())))
        .collect();
    let mut triples: Vec<(UElem, UElem, UElem)> = Vec::new();
    for a in &gens {
        for b in &gens {
            for c in &gens {
                triples.push((a.clone(), b.clone(), c.clone()));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..random {
        let mut pick = || UElem::monomial(random_monomial(&mut rng, 5), Rational::one());
        triples.push((pick(), pick(), pick()));
    }
    let oks: Vec<bool> = triples.par_iter().map(|(a, b, c)| a.mul(b).mul(c) == a.mul(&b.mul(c))).collect();
    let mut r = SuiteResult::new("associativity");
    for ((a, b, c), ok) in triples.iter().zip(oks) {
        r.check(ok, || format!("({a}) ({b}) ({c})"));
    }
    r
}

#[derive(Clone, Debug, Serialize)]
pub struct WeylReport {
    pub max_coord: i32,
    pub build_cap: u64,
    pub weights: usize,
    /// Weights whose Gelfand–Tsetlin count equals the Weyl dimension.
    pub counted: usize,
    /// Weights whose module was constructed (Weyl dimension ≤ build_cap).
    pub built: usize,
    pub failures: Vec<String>,
}

impl WeylReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.counted == self.weights
    }

    pub fn complete(&self) -> bool {
        self.passed() && self.built == self.weights
    }
}

/// For every λ with coordinates ≤ max_coord: Gelfand–Tsetlin count = Weyl
/// dimension, and, when the Weyl dimension is at most `build_cap`, the
/// dimension of the module built by lowering operators equals it too.
pub fn weyl_suite(max_coord: i32, build_cap: u64) -> WeylReport {
    let r = max_coord + 1;
    let weights: Vec<Weight> = (0..r.pow(4))
        .map(|k| Weight::new(k % r, k / r % r, k / (r * r) % r, k / (r * r * r)))
        .collect();
    let rows: Vec<_> = weights
        .par_iter()
        .map(|l| {
            let w = weyl_dim(l);
            let built = (w <= build_cap).then(|| IrrepModule::closure_dimension(l).map_err(|e| e.to_string()));
            (*l, w, gelfand_tsetlin_count(l), built)
        })
        .collect();
    let mut rep = WeylReport {
        max_coord,
        build_cap,
        weights: weights.len(),
        counted: 0,
        built: 0,
        failures: Vec::new(),
    };
    for (l, w, gt, built) in rows {
        if gt == w {
            rep.counted += 1;
        } else {
            rep.failures.push(format!("{l}: Gelfand–Tsetlin {gt} vs Weyl {w}"));
        }
        match built {
            Some(Ok(d)) if d as u64 == w => rep.built += 1,
            Some(Ok(d)) => rep.failures.push(format!("{l}: constructed {d} vs Weyl {w}")),
            Some(Err(e)) => rep.failures.push(format!("{l}: {e}")),
            None => {}
        }
    }
    rep
}

/// The 40 closed linear two-forms: count, closedness and linear independence.
pub fn g1_suite() -> SuiteResult {
    let basis = g1_basis();
    let mut r = SuiteResult::new("g1");
    r.check(basis.len() == 40, || format!("{} basis elements", basis.len()));
    for b in &basis {
        r.check(b.is_closed(), || format!("{b} is not closed"));
    }
    let mut span = Echelon::new(50);
    for b in &basis {
        span.insert(b.g1_coords().into_iter().enumerate().filter(|(_, c)| !c.is_zero()).collect());
    }
    r.check(span.rank() == 40, || format!("rank {}", span.rank()));
    r
}

/// dim (U₋)_d from the generating function (1+t)¹⁰ / (1−t²)⁵.
pub fn uminus_dimension_formula(d: u32) -> u64 {
    let n = d as usize + 1;
    let mut poly = vec![0u64; n];
    poly[0] = 1;
    for _ in 0..10 {
        for k in (1..n).rev() {
            poly[k] += poly[k - 1];
        }
    }
    for _ in 0..5 {
        for k in 2..n {
            poly[k] += poly[k - 2];
        }
    }
    poly[d as usize]
}

/// Enumerated PBW monomials of each degree ≤ max_d against the generating function.
pub fn uminus_dimension_suite(max_d: u32) -> SuiteResult {
    let mut r = SuiteResult::new("uminus-dimensions");
    for d in 0..=max_d {
        let (a, b) = (monomials_of_degree(d).len() as u64, uminus_dimension_formula(d));
        r.check(a == b, || format!("degree {d}: enumerated {a}, generating function {b}"));
    }
    r
}
