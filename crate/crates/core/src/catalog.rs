//! The catalog of singular vectors in finite Verma modules, the morphisms
//! they define, and composition checks between them.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::error::{domain, Error, Result};
use crate::parse::{parse_uword, parse_vector, Params};
use crate::rational::Rational;
use crate::search::{find_singular_vectors, SearchOptions, SingularCertificate};
use crate::sl5::IrrepModule;
use crate::uminus::UElem;
use crate::verma::{VermaElement, VermaModule};
use crate::weight::Weight;

const W7: &str = include_str!("../data/w7.txt");
const W11: &str = include_str!("../data/w11.txt");
const W4E: &str = include_str!("../data/w4e.txt");

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Tag {
    #[serde(rename = "1A")]
    A1,
    #[serde(rename = "1B")]
    B1,
    #[serde(rename = "1C")]
    C1,
    #[serde(rename = "2BA")]
    BA2,
    #[serde(rename = "2CB")]
    CB2,
    #[serde(rename = "2CA")]
    CA2,
    #[serde(rename = "3CBA")]
    CBA3,
    #[serde(rename = "4D")]
    D4,
    #[serde(rename = "4E")]
    E4,
    #[serde(rename = "5CD")]
    CD5,
    #[serde(rename = "5EA")]
    EA5,
    #[serde(rename = "7")]
    W7,
    #[serde(rename = "11")]
    W11,
}

impl Tag {
    pub const ALL: [Tag; 13] = [
        Tag::A1,
        Tag::B1,
        Tag::C1,
        Tag::BA2,
        Tag::CB2,
        Tag::CA2,
        Tag::CBA3,
        Tag::D4,
        Tag::E4,
        Tag::CD5,
        Tag::EA5,
        Tag::W7,
        Tag::W11,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Tag::A1 => "1A",
            Tag::B1 => "1B",
            Tag::C1 => "1C",
            Tag::BA2 => "2BA",
            Tag::CB2 => "2CB",
            Tag::CA2 => "2CA",
            Tag::CBA3 => "3CBA",
            Tag::D4 => "4D",
            Tag::E4 => "4E",
            Tag::CD5 => "5CD",
            Tag::EA5 => "5EA",
            Tag::W7 => "7",
            Tag::W11 => "11",
        }
    }

    pub fn uses_m(self) -> bool {
        matches!(self, Tag::A1 | Tag::B1 | Tag::C1 | Tag::BA2 | Tag::D4)
    }

    pub fn uses_n(self) -> bool {
        matches!(self, Tag::A1 | Tag::B1 | Tag::C1 | Tag::CB2 | Tag::E4)
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Tag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Tag> {
        let s = s.trim().trim_start_matches("w[").trim_end_matches(']').to_ascii_uppercase().replace('_', "");
        Tag::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| Error::Parse(format!("unknown family {s:?}")))
    }
}

/// One member of a family: a singular vector of weight λ and degree d in M(μ),
/// giving a morphism M(λ) → M(μ).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct CatalogFamily {
    pub tag: Tag,
    pub m: u32,
    pub n: u32,
    pub mu: Weight,
    pub weight: Weight,
    pub degree: u32,
}

impl CatalogFamily {
    pub fn new(tag: Tag, m: u32, n: u32) -> Result<CatalogFamily> {
        if (m > 0 && !tag.uses_m()) || (n > 0 && !tag.uses_n()) {
            return domain(format!("family {tag} takes no such parameter (m={m}, n={n})"));
        }
        let (a, b) = (m as i32, n as i32);
        let w = Weight::new;
        let (mu, weight, degree) = match tag {
            Tag::A1 => (w(a, b, 0, 0), w(a, b + 1, 0, 0), 1),
            Tag::B1 => (w(a, 0, 0, b + 1), w(a + 1, 0, 0, b), 1),
            Tag::C1 => (w(0, 0, a + 1, b), w(0, 0, a, b), 1),
            Tag::BA2 => (w(a, 0, 0, 1), w(a + 1, 1, 0, 0), 2),
            Tag::CB2 => (w(0, 0, 1, b + 1), w(1, 0, 0, b), 2),
            Tag::CA2 => (w(0, 0, 1, 0), w(0, 1, 0, 0), 2),
            Tag::CBA3 => (w(0, 0, 1, 1), w(1, 1, 0, 0), 3),
            Tag::D4 => (w(a, 0, 0, 0), w(a + 3, 0, 0, 0), 4),
            Tag::E4 => (w(0, 0, 0, b + 3), w(0, 0, 0, b), 4),
            Tag::CD5 => (w(0, 0, 1, 0), w(3, 0, 0, 0), 5),
            Tag::EA5 => (w(0, 0, 0, 3), w(0, 1, 0, 0), 5),
            Tag::W7 => (w(0, 0, 0, 2), w(2, 0, 0, 0), 7),
            Tag::W11 => (w(0, 0, 0, 1), w(1, 0, 0, 0), 11),
        };
        Ok(CatalogFamily { tag, m, n, mu, weight, degree })
    }

    /// All members with parameters in the given ranges (unused parameters fixed at 0).
    pub fn grid(tag: Tag, ms: &[u32], ns: &[u32]) -> Vec<CatalogFamily> {
        let ms: &[u32] = if tag.uses_m() { ms } else { &[0] };
        let ns: &[u32] = if tag.uses_n() { ns } else { &[0] };
        let mut out = Vec::new();
        for &m in ms {
            for &n in ns {
                if let Ok(f) = CatalogFamily::new(tag, m, n) {
                    out.push(f);
                }
            }
        }
        out
    }

    /// Every member of every family with μ in the given set of weights.
    pub fn all_with_mu(pred: impl Fn(&Weight) -> bool, max_param: u32) -> Vec<CatalogFamily> {
        let r: Vec<u32> = (0..=max_param).collect();
        Tag::ALL.into_iter().flat_map(|t| CatalogFamily::grid(t, &r, &r)).filter(|f| pred(&f.mu)).collect()
    }

    pub fn label(&self) -> String {
        match (self.tag.uses_m(), self.tag.uses_n()) {
            (true, true) => format!("{}(m={},n={})", self.tag, self.m, self.n),
            (true, false) => format!("{}(m={})", self.tag, self.m),
            (false, true) => format!("{}(n={})", self.tag, self.n),
            (false, false) => self.tag.to_string(),
        }
    }

    /// Vector text in the line format of [`crate::parse`].
    fn source_text(&self) -> String {
        let pairs = || (1..=5).flat_map(|i| (i + 1..=5).map(move |j| (i, j)));
        let mut t = String::new();
        match self.tag {
            Tag::A1 => t.push_str("d12 | x1^m x12^n\n"),
            Tag::B1 => {
                t.push_str("d15 | x1^m f5^n+1\n");
                for j in 2..=4 {
                    t.push_str(&format!("d1{j} | x1^m f{j} f5^n\n"));
                }
            }
            Tag::C1 => {
                for (i, j) in pairs() {
                    t.push_str(&format!("d{i}{j} | f{i}{j} f45^m f5^n\n"));
                }
            }
            Tag::BA2 => {
                for j in 2..=5 {
                    t.push_str(&format!("d12 d1{j} | x1^m f{j}\n"));
                }
            }
            Tag::CB2 => {
                for j in 2..=5 {
                    for (h, k) in pairs() {
                        t.push_str(&format!("d1{j} d{h}{k} | f{h}{k} f{j} f5^n\n"));
                    }
                }
            }
            Tag::CA2 => {
                for (i, j) in pairs() {
                    t.push_str(&format!("d12 d{i}{j} | f{i}{j}\n"));
                }
            }
            Tag::CBA3 => {
                for j in 2..=5 {
                    for (k, l) in pairs() {
                        t.push_str(&format!("d12 d1{j} d{k}{l} | f{j} f{k}{l}\n"));
                    }
                }
            }
            Tag::D4 => t.push_str("d12 d13 d14 d15 | x1^m\n"),
            Tag::CD5 => {
                // The terms with i = 1 vanish against the prefix.
                t.push_str("prefix: d12 d13 d14 d15\n");
                for (i, j) in pairs() {
                    t.push_str(&format!("d{i}{j} | f{i}{j}\n"));
                }
            }
            Tag::E4 => t.push_str(W4E),
            Tag::EA5 => {
                t.push_str("prefix: d12\n");
                t.push_str(W4E);
            }
            Tag::W7 => t.push_str(W7),
            Tag::W11 => t.push_str(W11),
        }
        t
    }
}

impl fmt::Display for CatalogFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

type ModuleCache = Mutex<BTreeMap<Weight, Arc<VermaModule>>>;
static MODULES: OnceLock<ModuleCache> = OnceLock::new();

/// Shared Verma module of highest weight μ; bases are built once per weight.
pub fn module(mu: &Weight) -> Result<Arc<VermaModule>> {
    let cache = MODULES.get_or_init(Default::default);
    if let Some(m) = cache.lock().unwrap().get(mu) {
        return Ok(m.clone());
    }
    let m = Arc::new(VermaModule::new(*mu)?);
    Ok(cache.lock().unwrap().entry(*mu).or_insert(m).clone())
}

/// The transcribed vector of a family member, in M(μ).
pub fn known_vector(family: &CatalogFamily) -> Result<VermaElement> {
    let check = CatalogFamily::new(family.tag, family.m, family.n)?;
    if check != *family {
        return domain(format!("family record {family:?} does not match its parameters"));
    }
    let params = Params { m: family.m, n: family.n };
    let parsed = parse_vector(&family.source_text(), params)?;
    if let Some(mu) = parsed.module(params)? {
        if mu != family.mu {
            return domain(format!("data for {family} is declared in M({mu})"));
        }
    }
    parsed.to_verma(&*module(&family.mu)?)
}

/// The 5CD sum restricted to 2 < i < j, which is not singular.
pub fn restricted_5cd_vector() -> Result<VermaElement> {
    let text = "prefix: d12 d13 d14 d15\nd34 | f34\nd35 | f35\nd45 | f45\n";
    parse_vector(text, Params::default())?.to_verma(&*module(&Weight::new(0, 0, 1, 0))?)
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilyReport {
    pub family: CatalogFamily,
    pub label: String,
    pub singular: bool,
    pub failing_generators: Vec<String>,
    pub weight_ok: bool,
    pub degree_ok: bool,
    pub height: Option<u32>,
    pub leading_term_nonzero: bool,
    pub terms: usize,
}

impl FamilyReport {
    pub fn passed(&self) -> bool {
        self.singular && self.weight_ok && self.degree_ok && self.leading_term_nonzero
    }
}

/// Full-g₁ singularity test of one member, with (μ, λ, d) agreement.
pub fn verify_family(family: &CatalogFamily) -> Result<FamilyReport> {
    let module = module(&family.mu)?;
    let w = known_vector(family)?;
    let rep = module.is_singular(&w, true)?;
    let leading = module.leading_term(&w).map(|l| !l.is_zero()).unwrap_or(false);
    Ok(FamilyReport {
        family: *family,
        label: family.label(),
        singular: rep.singular,
        failing_generators: rep.residuals.iter().map(|r| r.generator.clone()).collect(),
        weight_ok: module.weight_of(&w) == Some(family.weight),
        degree_ok: w.degrees() == vec![family.degree],
        height: w.height().ok(),
        leading_term_nonzero: leading,
        terms: w.len(),
    })
}

/// [`verify_family`] over a parameter grid, in parallel.
pub fn verify_grid(tags: &[Tag], ms: &[u32], ns: &[u32]) -> Result<Vec<FamilyReport>> {
    let fams: Vec<CatalogFamily> = tags.iter().flat_map(|t| CatalogFamily::grid(*t, ms, ns)).collect();
    fams.par_iter().map(verify_family).collect()
}

/// A morphism M(λ) → M(μ), stored as the images of the basis of F(λ).
#[derive(Clone, Debug)]
pub struct MorphismEvaluator {
    pub lambda: Weight,
    pub mu: Weight,
    pub degree: u32,
    pub source: Arc<IrrepModule>,
    pub target: Arc<VermaModule>,
    pub images: Vec<VermaElement>,
}

impl MorphismEvaluator {
    pub fn hw_image(&self) -> &VermaElement {
        &self.images[0]
    }

    pub fn is_zero(&self) -> bool {
        self.images.iter().all(|v| v.is_zero())
    }

    /// Image of an element of M(λ): u ⊗ v_k ↦ u · φ(v_k).
    pub fn apply(&self, v: &VermaElement) -> Result<VermaElement> {
        if v.mu != self.lambda {
            return domain(format!("cannot apply a morphism from M({}) to an element of M({})", self.lambda, v.mu));
        }
        let mut parts: BTreeMap<usize, UElem> = BTreeMap::new();
        for ((m, k), c) in v.iter() {
            parts.entry(*k).or_default().add_term(*m, c.clone());
        }
        let mut out = self.target.zero();
        for (k, u) in parts {
            out.add_scaled(&self.target.left_mul(&u, &self.images[k]), &Rational::one());
        }
        Ok(out)
    }

    /// Number of images that are not annihilated by every basis element of g₁.
    pub fn g1_defects(&self) -> usize {
        let gens = crate::algebra::g1_basis();
        self.images
            .par_iter()
            .map(|img| gens.iter().filter(|x| !self.target.act_g1(x, img).is_zero()).count())
            .sum()
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "source": self.lambda,
            "target": self.mu,
            "degree": self.degree,
            "source_dim": self.source.dim(),
            "hw_image": self.hw_image().to_json(),
        })
    }
}

/// The morphism defined by a singular vector of weight λ. Every image is
/// checked for g₀-equivariance and g₁-annihilation.
pub fn morphism_from_singular(module: Arc<VermaModule>, w: &VermaElement, lambda: &Weight) -> Result<MorphismEvaluator> {
    let rep = module.is_singular(w, true)?;
    if !rep.singular {
        return domain(format!("vector in M({}) is not singular", module.mu));
    }
    if module.weight_of(w) != Some(*lambda) {
        return domain(format!("singular vector does not have weight {lambda}"));
    }
    let degrees = w.degrees();
    if degrees.len() != 1 {
        return domain("singular vector is not homogeneous");
    }
    let source = Arc::new(IrrepModule::build(lambda)?);
    let images = module.lowering_images(w, &source);
    let phi = MorphismEvaluator { lambda: *lambda, mu: module.mu, degree: degrees[0], source, target: module, images };
    let eq = phi.target.equivariance_defects(&phi.source, &phi.images);
    if eq > 0 {
        return domain(format!("{eq} equivariance defects in the images"));
    }
    let g1 = phi.g1_defects();
    if g1 > 0 {
        return domain(format!("{g1} images are not annihilated by g1"));
    }
    Ok(phi)
}

/// The morphism of a catalog member.
pub fn family_morphism(family: &CatalogFamily) -> Result<MorphismEvaluator> {
    morphism_from_singular(module(&family.mu)?, &known_vector(family)?, &family.weight)
}

/// φ₂ ∘ φ₁.
pub fn compose(phi2: &MorphismEvaluator, phi1: &MorphismEvaluator) -> Result<MorphismEvaluator> {
    if phi1.mu != phi2.lambda {
        return domain(format!("cannot compose: target M({}) is not the source M({})", phi1.mu, phi2.lambda));
    }
    let images = phi1.images.par_iter().map(|v| phi2.apply(v)).collect::<Result<Vec<_>>>()?;
    Ok(MorphismEvaluator {
        lambda: phi1.lambda,
        mu: phi2.mu,
        degree: phi1.degree + phi2.degree,
        source: phi1.source.clone(),
        target: phi2.target.clone(),
        images,
    })
}

/// The catalog member equal to φ[second] ∘ φ[first], when the classification names one.
pub fn named_composition(second: &CatalogFamily, first: &CatalogFamily) -> Option<CatalogFamily> {
    if first.mu != second.weight {
        return None;
    }
    let f = |t, m, n| CatalogFamily::new(t, m, n).ok();
    match (second.tag, first.tag) {
        (Tag::B1, Tag::A1) => f(Tag::BA2, second.m, 0),
        (Tag::C1, Tag::B1) => f(Tag::CB2, 0, first.n),
        (Tag::C1, Tag::A1) => f(Tag::CA2, 0, 0),
        (Tag::C1, Tag::BA2) | (Tag::CB2, Tag::A1) => f(Tag::CBA3, 0, 0),
        (Tag::C1, Tag::D4) => f(Tag::CD5, 0, 0),
        (Tag::E4, Tag::A1) => f(Tag::EA5, 0, 0),
        _ => None,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CompositionStatus {
    /// Equals the named catalog morphism up to a nonzero scalar.
    Named,
    /// Expected to be named, but is zero or not proportional.
    NamedMismatch,
    Zero,
    /// Not named and nonzero.
    UnexpectedNonzero,
}

#[derive(Clone, Debug, Serialize)]
pub struct CompositionRecord {
    pub first: String,
    pub second: String,
    pub source: Weight,
    pub middle: Weight,
    pub target: Weight,
    pub degree: u32,
    pub named: Option<String>,
    pub status: CompositionStatus,
}

impl CompositionRecord {
    pub fn ok(&self) -> bool {
        matches!(self.status, CompositionStatus::Named | CompositionStatus::Zero)
    }
}

/// Evaluates φ[second] ∘ φ[first] on the hwv and classifies the result.
pub fn check_composition(second: &CatalogFamily, first: &CatalogFamily) -> Result<CompositionRecord> {
    if first.mu != second.weight {
        return domain(format!("{second} ∘ {first} is not composable"));
    }
    let phi2 = family_morphism(second)?;
    let hw = known_vector(first)?;
    let image = phi2.apply(&hw)?;
    let named = named_composition(second, first);
    let status = match &named {
        Some(target) => {
            let expected = known_vector(target)?;
            if !image.is_zero() && image.proportional_to(&expected) {
                CompositionStatus::Named
            } else {
                CompositionStatus::NamedMismatch
            }
        }
        None if image.is_zero() => CompositionStatus::Zero,
        None => CompositionStatus::UnexpectedNonzero,
    };
    Ok(CompositionRecord {
        first: first.label(),
        second: second.label(),
        source: first.weight,
        middle: first.mu,
        target: second.mu,
        degree: first.degree + second.degree,
        named: named.map(|f| f.label()),
        status,
    })
}

/// All pairs (first, second) of members with parameters ≤ max_param and
/// target(first) = source(second), in a fixed order.
pub fn composable_pairs(max_param: u32) -> Vec<(CatalogFamily, CatalogFamily)> {
    let all = CatalogFamily::all_with_mu(|_| true, max_param);
    let mut out = Vec::new();
    for first in &all {
        for second in &all {
            if first.mu == second.weight {
                out.push((*first, *second));
            }
        }
    }
    out
}

/// The degree-1 sequence through M(0,0,0,0) singled out in the classification:
/// M(0,1,0,0) → M(0,0,0,0) → M(1,0,0,0). The second arrow is not the
/// (λ, μ) of any catalog member, so the sequence is reported, not evaluated.
pub fn origin_sequence_report() -> serde_json::Value {
    let (a, b, c) = (Weight::new(0, 1, 0, 0), Weight::ZERO, Weight::new(1, 0, 0, 0));
    let into_c: Vec<String> = CatalogFamily::all_with_mu(|mu| *mu == c, 3)
        .into_iter()
        .filter(|f| f.weight == b)
        .map(|f| f.label())
        .collect();
    let from_a: Vec<String> = CatalogFamily::all_with_mu(|mu| *mu == b, 3)
        .into_iter()
        .filter(|f| f.weight == a)
        .map(|f| f.label())
        .collect();
    json!({
        "sequence": [a, b, c],
        "first_arrow_members": from_a,
        "second_arrow_members": into_c,
        "status": if into_c.is_empty() { "unresolved" } else { "resolved" },
    })
}

/// Edge list of all composable pairs with their composition status.
pub fn complexes_report(max_param: u32) -> Result<(Vec<CompositionRecord>, serde_json::Value)> {
    let pairs = composable_pairs(max_param);
    let records = pairs.par_iter().map(|(a, b)| check_composition(b, a)).collect::<Result<Vec<_>>>()?;
    let edges: Vec<serde_json::Value> = CatalogFamily::all_with_mu(|_| true, max_param)
        .into_iter()
        .map(|f| json!({"family": f.label(), "source": f.weight, "target": f.mu, "degree": f.degree}))
        .collect();
    let report = json!({
        "max_param": max_param,
        "edges": edges,
        "compositions": records,
        "origin_sequence": origin_sequence_report(),
        "nonzero_through_origin": records
            .iter()
            .filter(|r| r.middle == Weight::ZERO && r.status != CompositionStatus::Zero)
            .map(|r| json!({"first": r.first, "second": r.second, "named": r.named}))
            .collect::<Vec<_>>(),
        "all_ok": records.iter().all(|r| r.ok()),
    });
    Ok((records, report))
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepCell {
    pub mu: Weight,
    pub degree: u32,
    pub certificates: Vec<SingularCertificate>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    pub weight_budget: i32,
    pub degree_max: u32,
    /// Certificates matched to a catalog member (μ, λ, d, member).
    pub matched: Vec<(Weight, Weight, u32, String)>,
    /// Certificates with no catalog member, or not proportional to it.
    pub unexplained: Vec<(Weight, Weight, u32, usize)>,
    /// Catalog members in range that the search did not find.
    pub missing: Vec<String>,
    pub errors: Vec<(Weight, u32, String)>,
}

impl SweepReport {
    pub fn clean(&self) -> bool {
        self.unexplained.is_empty() && self.missing.is_empty() && self.errors.is_empty()
    }
}

/// Searches every dominant μ with coordinate sum ≤ budget and 1 ≤ d ≤ degree_max
/// and compares the certificates with the catalog.
pub fn classification_sweep(weight_budget: i32, degree_max: u32, opts: &SearchOptions) -> Result<(SweepReport, Vec<SweepCell>)> {
    let mut cells: Vec<(Weight, u32)> = Vec::new();
    for mu in Weight::dominant_up_to(weight_budget) {
        for d in 1..=degree_max {
            cells.push((mu, d));
        }
    }
    let inner = SearchOptions { threads: Some(1), checkpoint: None, ..opts.clone() };
    let run = |&(mu, d): &(Weight, u32)| -> SweepCell {
        let res = module(&mu).and_then(|m| find_singular_vectors(&m, d, None, &inner));
        match res {
            Ok(certificates) => SweepCell { mu, degree: d, certificates, error: None },
            Err(e) => SweepCell { mu, degree: d, certificates: Vec::new(), error: Some(e.to_string()) },
        }
    };
    let threads = crate::search::thread_count(opts);
    let cells: Vec<SweepCell> = if threads > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::Resource(e.to_string()))?;
        pool.install(|| cells.par_iter().map(run).collect())
    } else {
        cells.iter().map(run).collect()
    };

    let in_range = |f: &CatalogFamily| f.mu.coord_sum() <= weight_budget && f.degree <= degree_max;
    let expected: Vec<CatalogFamily> = CatalogFamily::all_with_mu(|_| true, weight_budget.max(0) as u32 + 1)
        .into_iter()
        .filter(in_range)
        .collect();
    let mut report = SweepReport {
        weight_budget,
        degree_max,
        matched: Vec::new(),
        unexplained: Vec::new(),
        missing: Vec::new(),
        errors: Vec::new(),
    };
    let mut found = vec![false; expected.len()];
    for cell in &cells {
        if let Some(e) = &cell.error {
            report.errors.push((cell.mu, cell.degree, e.clone()));
        }
        for cert in &cell.certificates {
            let hit = expected
                .iter()
                .position(|f| f.mu == cert.mu && f.weight == cert.weight && f.degree == cert.degree);
            let ok = match hit {
                Some(i) if cert.kernel_dim == 1 => {
                    let w = known_vector(&expected[i])?;
                    cert.elements()?[0].proportional_to(&w)
                }
                _ => false,
            };
            match (hit, ok) {
                (Some(i), true) => {
                    found[i] = true;
                    report.matched.push((cert.mu, cert.weight, cert.degree, expected[i].label()));
                }
                _ => report.unexplained.push((cert.mu, cert.weight, cert.degree, cert.kernel_dim)),
            }
        }
    }
    for (f, ok) in expected.iter().zip(found) {
        if !ok {
            report.missing.push(f.label());
        }
    }
    Ok((report, cells))
}

/// The U₋ element of a word such as "d12 d13", for tests and the CLI.
pub fn uword(s: &str) -> Result<UElem> {
    parse_uword(s, Params::default())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(t: Tag, m: u32, n: u32) -> CatalogFamily {
        CatalogFamily::new(t, m, n).unwrap()
    }

    #[test]
    fn tags_round_trip_and_params_are_checked() {
        for t in Tag::ALL {
            assert_eq!(t.as_str().parse::<Tag>().unwrap(), t);
        }
        assert_eq!("w[4_E]".parse::<Tag>().unwrap(), Tag::E4);
        assert!("4F".parse::<Tag>().is_err());
        assert!(CatalogFamily::new(Tag::W7, 1, 0).is_err());
        assert!(CatalogFamily::new(Tag::D4, 0, 2).is_err());
        let f = fam(Tag::E4, 0, 2);
        assert_eq!((f.mu, f.weight, f.degree), (Weight::new(0, 0, 0, 5), Weight::new(0, 0, 0, 2), 4));
        let mut bad = f;
        bad.degree = 5;
        assert!(known_vector(&bad).is_err());
    }

    #[test]
    fn first_members_parse() {
        let a = known_vector(&fam(Tag::A1, 0, 0)).unwrap();
        assert_eq!(module(&Weight::ZERO).unwrap().format(&a), "d12 ⊗ 1");
        assert_eq!(known_vector(&fam(Tag::W11, 0, 0)).unwrap().degrees(), vec![11]);
        let e = known_vector(&fam(Tag::E4, 0, 0)).unwrap();
        assert_eq!(e.degrees(), vec![4]);
    }

    #[test]
    fn low_degree_members_are_singular() {
        let r: Vec<u32> = (0..=1).collect();
        let reps = verify_grid(&[Tag::A1, Tag::B1, Tag::C1, Tag::BA2, Tag::CA2, Tag::D4], &r, &r).unwrap();
        for rep in reps {
            assert!(rep.passed(), "{rep:?}");
            assert_eq!(rep.height, Some(rep.family.degree));
        }
    }

    #[test]
    fn restricted_5cd_sum_is_not_singular() {
        let w = restricted_5cd_vector().unwrap();
        let m = module(&Weight::new(0, 0, 1, 0)).unwrap();
        assert!(!m.is_singular(&w, true).unwrap().singular);
        assert!(verify_family(&fam(Tag::CD5, 0, 0)).unwrap().passed());
    }

    #[test]
    fn morphism_of_degree_one() {
        let phi = family_morphism(&fam(Tag::A1, 0, 0)).unwrap();
        assert_eq!((phi.lambda, phi.mu, phi.degree), (Weight::new(0, 1, 0, 0), Weight::ZERO, 1));
        assert_eq!(phi.source.dim(), 10);
        for (k, img) in phi.images.iter().enumerate() {
            assert_eq!(phi.target.weight_of(img), Some(phi.source.weights[k]));
        }
        let m = module(&Weight::ZERO).unwrap();
        assert!(morphism_from_singular(m.clone(), &m.vacuum(), &Weight::ZERO).is_err());
        let not_singular = m.left_mul(&uword("p1").unwrap(), &m.vacuum());
        assert!(morphism_from_singular(m, &not_singular, &Weight::ZERO).is_err());
    }

    #[test]
    fn square_of_degree_one_morphism_vanishes() {
        let first = fam(Tag::A1, 0, 1);
        let second = fam(Tag::A1, 0, 0);
        let phi = compose(&family_morphism(&second).unwrap(), &family_morphism(&first).unwrap()).unwrap();
        assert!(phi.is_zero());
        assert_eq!(check_composition(&second, &first).unwrap().status, CompositionStatus::Zero);
        assert!(compose(&family_morphism(&first).unwrap(), &family_morphism(&second).unwrap()).is_err());
    }

    #[test]
    fn composition_matches_named_member() {
        let rec = check_composition(&fam(Tag::B1, 0, 0), &fam(Tag::A1, 1, 0)).unwrap();
        assert_eq!(rec.status, CompositionStatus::Named);
        assert_eq!(rec.named.as_deref(), Some("2BA(m=0)"));
        let full = compose(
            &family_morphism(&fam(Tag::B1, 0, 0)).unwrap(),
            &family_morphism(&fam(Tag::A1, 1, 0)).unwrap(),
        )
        .unwrap();
        assert!(full.hw_image().proportional_to(&known_vector(&fam(Tag::BA2, 0, 0)).unwrap()));
    }

    #[test]
    fn origin_sequence_is_unresolved() {
        let r = origin_sequence_report();
        assert_eq!(r["status"], "unresolved");
        assert_eq!(r["first_arrow_members"], json!(["1A(m=0,n=0)"]));
    }

    #[test]
    fn sweep_of_the_trivial_module() {
        let (rep, _) = classification_sweep(0, 4, &SearchOptions::default()).unwrap();
        assert!(rep.clean(), "{rep:?}");
        let names: Vec<&str> = rep.matched.iter().map(|m| m.3.as_str()).collect();
        assert_eq!(names, vec!["1A(m=0,n=0)", "4D(m=0)"]);
    }
}
