//! Singular vector search: kernels of (E₁,…,E₄, x₅d₄₅) on weight spaces of M(μ).

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::SuperElement;
use crate::error::{domain, Error, Result};
use crate::linalg::{check_cap, Echelon};
use crate::rational::Rational;
use crate::uminus::{Monomial, MonomialRecord};
use crate::verma::{monomials_by_weight, VermaElement, VermaModule};
use crate::weight::Weight;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
pub const DEFAULT_DIM_CAP: usize = 200_000;
pub const DEFAULT_CEILING: u32 = 14;

#[derive(Clone, Debug)]
pub struct SearchOptions {
    /// Maximum number of nonzero matrix entries per weight space.
    pub dim_cap: usize,
    /// Re-verify every kernel vector against all 40 basis elements of g₁.
    pub full_g1: bool,
    /// Skip weights whose weight space has no element of height equal to the degree.
    pub prune_height: bool,
    pub checkpoint: Option<PathBuf>,
    pub threads: Option<usize>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { dim_cap: DEFAULT_DIM_CAP, full_g1: true, prune_height: false, checkpoint: None, threads: None }
    }
}

/// One term of a serialized Verma element.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct TermRecord {
    pub partials: [u8; 5],
    pub forms: Vec<[u8; 2]>,
    pub irrep: usize,
    pub coeff: Rational,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct SingularCertificate {
    pub algebra: String,
    pub mu: Weight,
    pub degree: u32,
    pub weight: Weight,
    pub kernel_dim: usize,
    pub vectors: Vec<Vec<TermRecord>>,
    pub full_g1: bool,
    pub tool_version: String,
}

pub fn element_to_records(w: &VermaElement) -> Vec<TermRecord> {
    w.iter()
        .map(|((m, k), c)| TermRecord {
            partials: m.partials,
            forms: m
                .form_list()
                .into_iter()
                .map(|p| [crate::uminus::PAIRS[p].0 + 1, crate::uminus::PAIRS[p].1 + 1])
                .collect(),
            irrep: *k,
            coeff: c.clone(),
        })
        .collect()
}

pub fn records_to_element(mu: Weight, recs: &[TermRecord]) -> Result<VermaElement> {
    let mut w = VermaElement::zero(mu);
    for r in recs {
        let rec = MonomialRecord { partials: r.partials, forms: r.forms.clone(), coeff: r.coeff.clone() };
        let (m, c) = rec.to_term()?;
        w.add_term(m, r.irrep, c);
    }
    Ok(w)
}

impl SingularCertificate {
    pub fn elements(&self) -> Result<Vec<VermaElement>> {
        self.vectors.iter().map(|v| records_to_element(self.mu, v)).collect()
    }
}

/// Dominant weights ν for which the degree-d weight space of M(μ) is nonzero.
pub fn candidate_weights(module: &VermaModule, d: u32) -> Vec<Weight> {
    let by_w = monomials_by_weight(d);
    let mut out = BTreeSet::new();
    for mw in by_w.keys() {
        for iw in module.irrep.by_weight.keys() {
            let nu = mw.add(iw);
            if nu.is_dominant() {
                out.insert(nu);
            }
        }
    }
    out.into_iter().collect()
}

/// Kernel of w ↦ (E₁w, …, E₄w, x₅d₄₅w) on the weight space, as Verma elements.
pub fn singular_kernel(module: &VermaModule, d: u32, nu: &Weight, cap: usize) -> Result<Vec<VermaElement>> {
    let cols = module.weight_space(d, nu);
    if cols.is_empty() {
        return Ok(Vec::new());
    }
    let x = SuperElement::x5d45();
    let mut row_ids: HashMap<(u8, Monomial, usize), usize> = HashMap::new();
    let mut rows: Vec<Vec<(usize, Rational)>> = Vec::new();
    let mut nnz = 0usize;
    for (c, (m, k)) in cols.iter().enumerate() {
        let w = module.basis_element(*m, *k);
        let mut images = Vec::with_capacity(5);
        for i in 0..4 {
            images.push((i as u8, module.act_e(i, i + 1, &w)));
        }
        images.push((4u8, module.act_g1(&x, &w)));
        for (g, img) in images {
            for ((n, j), v) in img.iter() {
                let next = row_ids.len();
                let r = *row_ids.entry((g, *n, *j)).or_insert(next);
                if r == rows.len() {
                    rows.push(Vec::new());
                }
                rows[r].push((c, v.clone()));
                nnz += 1;
            }
        }
        check_cap(nnz, cap, &format!("M({}) degree {d} weight {nu}", module.mu))?;
    }
    let mut ech = Echelon::new(cols.len());
    // columns were pushed in increasing order, so each row is already sorted
    for row in rows {
        if ech.is_full() {
            break;
        }
        ech.insert(row);
    }
    Ok(ech
        .kernel()
        .into_iter()
        .map(|v| {
            let mut w = module.zero();
            for (c, x) in v.into_iter().enumerate() {
                if !x.is_zero() {
                    let (m, k) = cols[c];
                    w.add_term(m, k, x);
                }
            }
            w
        })
        .collect())
}

fn has_full_height(module: &VermaModule, d: u32, nu: &Weight) -> bool {
    let by_w = monomials_by_weight(d);
    module.irrep.by_weight.keys().any(|iw| {
        by_w.get(&nu.sub(iw)).is_some_and(|ms| ms.iter().any(|m| m.height() == d))
    })
}

fn search_one(module: &VermaModule, d: u32, nu: &Weight, opts: &SearchOptions) -> Result<Option<SingularCertificate>> {
    if opts.prune_height && d <= 10 && !has_full_height(module, d, nu) {
        return Ok(None);
    }
    let vecs = singular_kernel(module, d, nu, opts.dim_cap)?;
    if vecs.is_empty() {
        return Ok(None);
    }
    for v in &vecs {
        let rep = module.is_singular(v, opts.full_g1)?;
        if !rep.singular {
            let witness = rep.residuals.first().map(|r| r.generator.clone()).unwrap_or_default();
            return Err(Error::Domain(format!(
                "kernel vector in M({}) degree {d} weight {nu} fails the singularity check at {witness}",
                module.mu
            )));
        }
    }
    Ok(Some(SingularCertificate {
        algebra: "E510".into(),
        mu: module.mu,
        degree: d,
        weight: *nu,
        kernel_dim: vecs.len(),
        vectors: vecs.iter().map(element_to_records).collect(),
        full_g1: opts.full_g1,
        tool_version: TOOL_VERSION.into(),
    }))
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
struct Checkpoint {
    mu: Weight,
    degree: u32,
    done: BTreeMap<String, Option<SingularCertificate>>,
}

fn load_checkpoint(path: &Path, mu: Weight, d: u32) -> Result<Checkpoint> {
    if !path.exists() {
        return Ok(Checkpoint { mu, degree: d, done: BTreeMap::new() });
    }
    let cp: Checkpoint = serde_json::from_str(&std::fs::read_to_string(path)?)?;
    if cp.mu != mu || cp.degree != d {
        return domain(format!("checkpoint {} belongs to M({}) degree {}", path.display(), cp.mu, cp.degree));
    }
    Ok(cp)
}

fn save_checkpoint(path: &Path, cp: &Checkpoint) -> Result<()> {
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, serde_json::to_string(cp)?)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

/// Thread count from the options or the `E510_THREADS` environment variable.
pub fn thread_count(opts: &SearchOptions) -> usize {
    opts.threads
        .or_else(|| std::env::var("E510_THREADS").ok().and_then(|s| s.parse().ok()))
        .unwrap_or(1)
        .max(1)
}

/// Singular vectors of degree d in M(μ), per candidate weight, in canonical weight order.
pub fn find_singular_vectors(
    module: &VermaModule,
    d: u32,
    nu: Option<Weight>,
    opts: &SearchOptions,
) -> Result<Vec<SingularCertificate>> {
    if !module.mu.is_dominant() {
        return domain(format!("weight {} is not dominant", module.mu));
    }
    if d == 0 {
        return domain("singular vectors have positive degree");
    }
    let weights = match nu {
        Some(n) => vec![n],
        None => candidate_weights(module, d),
    };
    if let Some(path) = &opts.checkpoint {
        let cp = Mutex::new(load_checkpoint(path, module.mu, d)?);
        let mut out = Vec::new();
        for w in &weights {
            let key = w.to_string();
            let cached = cp.lock().unwrap().done.get(&key).cloned();
            let res = match cached {
                Some(r) => r,
                None => {
                    let r = search_one(module, d, w, opts)?;
                    let mut g = cp.lock().unwrap();
                    g.done.insert(key, r.clone());
                    save_checkpoint(path, &g)?;
                    r
                }
            };
            out.extend(res);
        }
        return Ok(out);
    }
    let threads = thread_count(opts);
    let results: Vec<Result<Option<SingularCertificate>>> = if threads > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::Resource(e.to_string()))?;
        pool.install(|| weights.par_iter().map(|w| search_one(module, d, w, opts)).collect())
    } else {
        weights.iter().map(|w| search_one(module, d, w, opts)).collect()
    };
    let mut out = Vec::new();
    for r in results {
        out.extend(r?);
    }
    Ok(out)
}

/// Duality check: a certificate M(λ)→M(μ) of degree d should have a
/// partner M(μ*)→M(λ*), i.e. a singular vector of weight μ* in M(λ*).
pub fn dual_pair_check(cert: &SingularCertificate, opts: &SearchOptions) -> Result<bool> {
    let module = VermaModule::new(cert.weight.dual())?;
    let found = find_singular_vectors(&module, cert.degree, Some(cert.mu.dual()), opts)?;
    Ok(!found.is_empty())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(a: i32, b: i32, c: i32, d: i32) -> Weight {
        Weight::new(a, b, c, d)
    }

    #[test]
    fn candidates() {
        let m = VermaModule::new(Weight::ZERO).unwrap();
        assert!(candidate_weights(&m, 1).contains(&w(0, 1, 0, 0)));
        assert_eq!(candidate_weights(&m, 0), vec![Weight::ZERO]);
        assert!(find_singular_vectors(&m, 0, None, &SearchOptions::default()).is_err());
    }

    #[test]
    fn degree_one_in_trivial_module() {
        let m = VermaModule::new(Weight::ZERO).unwrap();
        let c = find_singular_vectors(&m, 1, None, &SearchOptions::default()).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].weight, w(0, 1, 0, 0));
        assert_eq!(c[0].kernel_dim, 1);
        let v = &c[0].elements().unwrap()[0];
        assert_eq!(m.format(v), "d12 ⊗ 1");
    }

    #[test]
    fn nondegenerate_module_has_no_low_degree_vectors() {
        let m = VermaModule::new(w(0, 1, 1, 0)).unwrap();
        for d in 1..=3 {
            assert!(find_singular_vectors(&m, d, None, &SearchOptions::default()).unwrap().is_empty());
        }
    }

    #[test]
    fn cap_errors_loudly() {
        let m = VermaModule::new(w(1, 0, 0, 0)).unwrap();
        let opts = SearchOptions { dim_cap: 3, ..Default::default() };
        assert!(matches!(find_singular_vectors(&m, 2, None, &opts), Err(Error::Resource(_))));
    }

    #[test]
    fn kernel_normalization_and_determinism() {
        let m = VermaModule::new(w(1, 0, 0, 0)).unwrap();
        let a = serde_json::to_string(&find_singular_vectors(&m, 1, None, &SearchOptions::default()).unwrap()).unwrap();
        let opts = SearchOptions { threads: Some(2), ..Default::default() };
        let b = serde_json::to_string(&find_singular_vectors(&m, 1, None, &opts).unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn checkpoint_resume() {
        let dir = std::env::temp_dir().join(format!("e510-cp-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("cp.json");
        let _ = std::fs::remove_file(&path);
        let m = VermaModule::new(w(0, 0, 1, 0)).unwrap();
        let opts = SearchOptions { checkpoint: Some(path.clone()), ..Default::default() };
        let a = find_singular_vectors(&m, 1, None, &opts).unwrap();
        assert!(path.exists());
        let b = find_singular_vectors(&m, 1, None, &opts).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, find_singular_vectors(&m, 1, None, &SearchOptions::default()).unwrap());
        let other = VermaModule::new(Weight::ZERO).unwrap();
        assert!(find_singular_vectors(&other, 1, None, &opts).is_err());
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn height_pruning_agrees_with_unpruned_search() {
        let pruned = SearchOptions { prune_height: true, ..Default::default() };
        for mu in Weight::dominant_up_to(2) {
            let m = VermaModule::new(mu).unwrap();
            for d in 1..=6 {
                let a = find_singular_vectors(&m, d, None, &SearchOptions::default()).unwrap();
                let b = find_singular_vectors(&m, d, None, &pruned).unwrap();
                assert_eq!(a, b, "M({mu}) degree {d}");
            }
        }
    }

    #[test]
    fn dual_of_degree_one() {
        let m = VermaModule::new(Weight::ZERO).unwrap();
        let c = find_singular_vectors(&m, 1, None, &SearchOptions::default()).unwrap();
        assert!(dual_pair_check(&c[0], &SearchOptions::default()).unwrap());
    }
}
