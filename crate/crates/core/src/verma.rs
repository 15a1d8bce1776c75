//! Finite Verma modules M(μ) = U₋ ⊗ F(μ) with the actions of g₋, g₀ and g₁.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::algebra::{Gen, SuperElement};
use crate::error::{domain, Error, Result};
use crate::rational::Rational;
use crate::sl5::{format_ambient, AmbVec, IrrepModule, IrrepVec};
use crate::uminus::{eps_pairs, left_mul_form, monomials_of_degree, Monomial, UElem};
use crate::weight::Weight;

/// Operator left on the irrep factor after commuting a g₁ element through a monomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Op {
    Id,
    /// x_a ∂_b acting on F(μ)
    E(u8, u8),
}

type OpTerms = Vec<(Monomial, Op, i64)>;

type AdCache = Mutex<HashMap<(u8, u8, Monomial), Arc<Vec<(Monomial, i64)>>>>;
type G1Cache = Mutex<HashMap<(u8, u8, Monomial), Arc<OpTerms>>>;

static AD_CACHE: OnceLock<AdCache> = OnceLock::new();
static G1_CACHE: OnceLock<G1Cache> = OnceLock::new();
static MONOS_BY_WEIGHT: OnceLock<Mutex<HashMap<u32, Arc<BTreeMap<Weight, Vec<Monomial>>>>>> = OnceLock::new();

fn merge_terms<K: Ord>(v: impl IntoIterator<Item = (K, i64)>) -> Vec<(K, i64)> {
    let mut m: BTreeMap<K, i64> = BTreeMap::new();
    for (k, c) in v {
        *m.entry(k).or_default() += c;
    }
    m.into_iter().filter(|(_, c)| *c != 0).collect()
}

/// ad(x_a ∂_b) applied to a PBW monomial.
pub fn ad_e(a: usize, b: usize, m: &Monomial) -> Arc<Vec<(Monomial, i64)>> {
    let cache = AD_CACHE.get_or_init(Default::default);
    let key = (a as u8, b as u8, *m);
    if let Some(r) = cache.lock().unwrap().get(&key) {
        return r.clone();
    }
    let mut out: Vec<(Monomial, i64)> = Vec::new();
    // [x_a∂_b, ∂_c] = −δ_ac ∂_b
    if m.partials[a] > 0 {
        let mut n = *m;
        n.partials[a] -= 1;
        n.partials[b] += 1;
        out.push((n, -(m.partials[a] as i64)));
    }
    let forms = m.form_list();
    for (j, &p) in forms.iter().enumerate() {
        for (g, s) in crate::algebra::bracket_gen(Gen::E(a, b), Gen::D(p)).unwrap() {
            let Gen::D(q) = g else { unreachable!() };
            let tail = Monomial::new([0; 5], &forms[j + 1..]);
            let mut u = UElem::monomial(tail, Rational::from_int(s as i64));
            u = u.left_mul_form(q);
            for &r in forms[..j].iter().rev() {
                u = u.left_mul_form(r);
            }
            for (n, c) in u.iter() {
                out.push((n.times_partials(&m.partials), c.to_i64().unwrap()));
            }
        }
    }
    let r = Arc::new(merge_terms(out));
    cache.lock().unwrap().insert(key, r.clone());
    r
}

/// x_k d_p (1 ⊗ ·) commuted through a monomial: X·(m ⊗ v) = Σ c n ⊗ op(v), using X·v = 0.
pub fn g1_through(k: usize, p: usize, m: &Monomial) -> Arc<OpTerms> {
    let cache = G1_CACHE.get_or_init(Default::default);
    let key = (k as u8, p as u8, *m);
    if let Some(r) = cache.lock().unwrap().get(&key) {
        return r.clone();
    }
    let mut out: Vec<((Monomial, Op), i64)> = Vec::new();
    if let Some(c) = (0..5).find(|&c| m.partials[c] > 0) {
        let mut rest = *m;
        rest.partials[c] -= 1;
        // [x_k d_p, ∂_c] = −δ_kc d_p
        if k == c {
            for (n, s) in left_mul_form(p, &rest) {
                out.push(((n, Op::Id), -(s as i64)));
            }
        }
        for (n, op, x) in g1_through(k, p, &rest).iter() {
            out.push(((n.times_partial(c), *op), *x));
        }
    } else if m.forms != 0 {
        let q = m.forms.trailing_zeros() as usize;
        let mut rest = *m;
        rest.forms &= !(1 << q);
        // [x_k d_p, d_q] = ε_{pq} x_k ∂_t
        if let Some((s, t)) = eps_pairs(p, q) {
            for (n, x) in ad_e(k, t, &rest).iter() {
                out.push(((*n, Op::Id), s as i64 * x));
            }
            out.push(((rest, Op::E(k as u8, t as u8)), s as i64));
        }
        for (n, op, x) in g1_through(k, p, &rest).iter() {
            for (n2, s2) in left_mul_form(q, n) {
                out.push(((n2, *op), -x * s2 as i64));
            }
        }
    }
    let r: Arc<OpTerms> = Arc::new(merge_terms(out).into_iter().map(|((n, op), c)| (n, op, c)).collect());
    cache.lock().unwrap().insert(key, r.clone());
    r
}

/// Monomials of degree d grouped by weight.
pub fn monomials_by_weight(d: u32) -> Arc<BTreeMap<Weight, Vec<Monomial>>> {
    let cache = MONOS_BY_WEIGHT.get_or_init(Default::default);
    if let Some(r) = cache.lock().unwrap().get(&d) {
        return r.clone();
    }
    let mut m: BTreeMap<Weight, Vec<Monomial>> = BTreeMap::new();
    for mono in monomials_of_degree(d) {
        m.entry(mono.weight()).or_default().push(mono);
    }
    let r = Arc::new(m);
    cache.lock().unwrap().insert(d, r.clone());
    r
}

/// An element of M(μ): sparse combination of (PBW monomial, irrep basis index).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VermaElement {
    pub mu: Weight,
    terms: BTreeMap<(Monomial, usize), Rational>,
}

impl VermaElement {
    pub fn zero(mu: Weight) -> Self {
        VermaElement { mu, terms: BTreeMap::new() }
    }

    /// u ⊗ v.
    pub fn tensor(mu: Weight, u: &UElem, v: &IrrepVec) -> Self {
        let mut w = Self::zero(mu);
        for (m, c) in u.iter() {
            for (k, x) in v {
                w.add_term(*m, *k, c * x);
            }
        }
        w
    }

    pub fn add_term(&mut self, m: Monomial, k: usize, c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry((m, k)).or_default();
        *e += &c;
        if e.is_zero() {
            self.terms.remove(&(m, k));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(Monomial, usize), &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial, k: usize) -> Rational {
        self.terms.get(&(*m, k)).cloned().unwrap_or_default()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut w = Self::zero(self.mu);
        for ((m, k), x) in &self.terms {
            w.add_term(*m, *k, x * c);
        }
        w
    }

    pub fn add_scaled(&mut self, o: &Self, c: &Rational) {
        for ((m, k), x) in &o.terms {
            self.add_term(*m, *k, x * c);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut w = self.clone();
        w.add_scaled(o, &Rational::one());
        w
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut w = self.clone();
        w.add_scaled(o, &Rational::from_int(-1));
        w
    }

    pub fn filter(&self, f: impl Fn(&Monomial, usize) -> bool) -> Self {
        VermaElement {
            mu: self.mu,
            terms: self.terms.iter().filter(|((m, k), _)| f(m, *k)).map(|(a, b)| (*a, b.clone())).collect(),
        }
    }

    pub fn degrees(&self) -> Vec<u32> {
        let mut d: Vec<u32> = self.terms.keys().map(|(m, _)| m.degree()).collect();
        d.sort();
        d.dedup();
        d
    }

    pub fn degree_component(&self, d: u32) -> Self {
        self.filter(|m, _| m.degree() == d)
    }

    /// Maximum number of odd factors among the terms.
    pub fn height(&self) -> Result<u32> {
        self.terms
            .keys()
            .map(|(m, _)| m.height())
            .max()
            .ok_or_else(|| Error::Domain("height of the zero vector".into()))
    }

    /// The component of maximal height.
    pub fn highest_term(&self) -> Result<Self> {
        let h = self.height()?;
        Ok(self.filter(|m, _| m.height() == h))
    }

    /// Divides by the first nonzero coefficient.
    pub fn normalized(&self) -> Self {
        match self.terms.values().next() {
            Some(c) => self.scale(&c.recip()),
            None => self.clone(),
        }
    }

    /// Whether `self = c · o` for some nonzero c.
    pub fn proportional_to(&self, o: &Self) -> bool {
        !self.is_zero() && !o.is_zero() && self.normalized() == o.normalized()
    }

    /// The U₋-part paired with a fixed irrep basis vector.
    pub fn u_part(&self, k: usize) -> UElem {
        let mut u = UElem::zero();
        for ((m, j), c) in &self.terms {
            if *j == k {
                u.add_term(*m, c.clone());
            }
        }
        u
    }

    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<serde_json::Value> = self
            .terms
            .iter()
            .map(|((m, k), c)| {
                let mut j = m.to_json(c);
                j["irrep"] = serde_json::json!(k);
                j
            })
            .collect();
        serde_json::json!({ "mu": self.mu, "terms": terms })
    }
}

/// Residual of one generator in a singularity check.
#[derive(Clone, Debug)]
pub struct Residual {
    pub generator: String,
    pub value: VermaElement,
}

#[derive(Clone, Debug)]
pub struct SingularityReport {
    pub singular: bool,
    pub positive_degree: bool,
    pub residuals: Vec<Residual>,
}

/// M(μ) together with its inducing irrep.
#[derive(Clone, Debug)]
pub struct VermaModule {
    pub mu: Weight,
    pub irrep: Arc<IrrepModule>,
}

impl VermaModule {
    pub fn new(mu: Weight) -> Result<Self> {
        Ok(VermaModule { mu, irrep: Arc::new(IrrepModule::build(&mu)?) })
    }

    pub fn from_irrep(irrep: Arc<IrrepModule>) -> Self {
        VermaModule { mu: irrep.highest_weight, irrep }
    }

    pub fn zero(&self) -> VermaElement {
        VermaElement::zero(self.mu)
    }

    /// 1 ⊗ (highest weight vector).
    pub fn vacuum(&self) -> VermaElement {
        let mut w = self.zero();
        w.add_term(Monomial::ONE, 0, Rational::one());
        w
    }

    pub fn basis_element(&self, m: Monomial, k: usize) -> VermaElement {
        let mut w = self.zero();
        w.add_term(m, k, Rational::one());
        w
    }

    pub fn term_weight(&self, m: &Monomial, k: usize) -> Weight {
        m.weight().add(&self.irrep.weights[k])
    }

    /// Weight if weight-homogeneous.
    pub fn weight_of(&self, w: &VermaElement) -> Option<Weight> {
        let mut it = w.terms.keys().map(|(m, k)| self.term_weight(m, *k));
        let first = it.next()?;
        if it.all(|x| x == first) {
            Some(first)
        } else {
            None
        }
    }

    /// Left multiplication by an element of U₋.
    pub fn left_mul(&self, u: &UElem, w: &VermaElement) -> VermaElement {
        let mut out = self.zero();
        for ((m, k), c) in &w.terms {
            let um = UElem::monomial(*m, c.clone());
            for (n, x) in u.mul(&um).iter() {
                out.add_term(*n, *k, x.clone());
            }
        }
        out
    }

    /// x_a ∂_b acting on a Verma element.
    pub fn act_e(&self, a: usize, b: usize, w: &VermaElement) -> VermaElement {
        let mut out = self.zero();
        for ((m, k), c) in &w.terms {
            for (n, x) in ad_e(a, b, m).iter() {
                out.add_term(*n, *k, c * &Rational::from_int(*x));
            }
            for (j, x) in self.irrep.action_col(a, b, *k) {
                out.add_term(*m, *j, c * x);
            }
        }
        out
    }

    /// A g₀ element (its g₀ component) acting on a Verma element.
    pub fn act_g0(&self, e: &SuperElement, w: &VermaElement) -> VermaElement {
        let mut out = self.zero();
        for (a, b, c) in e.g0_terms() {
            out.add_scaled(&self.act_e(a, b, w), &c);
        }
        out
    }

    /// A g₁ element (its g₁ component) acting on a Verma element.
    pub fn act_g1(&self, x: &SuperElement, w: &VermaElement) -> VermaElement {
        let mut out = self.zero();
        for (k, p, c) in x.g1_terms() {
            for ((m, j), y) in &w.terms {
                let cy = &c * y;
                for (n, op, z) in g1_through(k, p, m).iter() {
                    let f = &cy * &Rational::from_int(*z);
                    match op {
                        Op::Id => out.add_term(*n, *j, f),
                        Op::E(a, b) => {
                            for (i, t) in self.irrep.action_col(*a as usize, *b as usize, *j) {
                                out.add_term(*n, *i, &f * t);
                            }
                        }
                    }
                }
            }
        }
        out
    }

    /// Any element of g₋₂ ⊕ … ⊕ g₁ acting on a Verma element.
    pub fn act(&self, x: &SuperElement, w: &VermaElement) -> VermaElement {
        let mut out = self.act_g0(x, w);
        out = out.add(&self.act_g1(x, w));
        let mut u = UElem::zero();
        for (g, c) in x.iter() {
            match g {
                Gen::P(i) => u.add_term(Monomial::partial(*i), c.clone()),
                Gen::D(p) => u.add_term(Monomial::form(*p), c.clone()),
                _ => {}
            }
        }
        if !u.is_zero() {
            out = out.add(&self.left_mul(&u, w));
        }
        out
    }

    /// Singularity: E_i w = 0 (i = 1..4), x₅d₄₅ w = 0 (or every g₁ basis element if `full_g1`),
    /// and a component of positive degree.
    pub fn is_singular(&self, w: &VermaElement, full_g1: bool) -> Result<SingularityReport> {
        if w.is_zero() {
            return domain("singularity test on the zero vector");
        }
        let mut residuals = Vec::new();
        for i in 0..4 {
            let r = self.act_e(i, i + 1, w);
            if !r.is_zero() {
                residuals.push(Residual { generator: format!("E{}", i + 1), value: r });
            }
        }
        let gens = if full_g1 { crate::algebra::g1_basis() } else { vec![SuperElement::x5d45()] };
        for x in gens {
            let r = self.act_g1(&x, w);
            if !r.is_zero() {
                residuals.push(Residual { generator: x.to_string(), value: r });
            }
        }
        let positive_degree = w.terms.keys().any(|(m, _)| m.degree() > 0);
        Ok(SingularityReport { singular: residuals.is_empty() && positive_degree, positive_degree, residuals })
    }

    /// Basis (monomial, irrep index) of the degree-d weight-ν space, in canonical order.
    pub fn weight_space(&self, d: u32, nu: &Weight) -> Vec<(Monomial, usize)> {
        let by_w = monomials_by_weight(d);
        let mut out = Vec::new();
        for (wv, idx) in &self.irrep.by_weight {
            if let Some(ms) = by_w.get(&nu.sub(wv)) {
                for m in ms {
                    for &k in idx {
                        out.push((*m, k));
                    }
                }
            }
        }
        out.sort();
        out
    }

    /// Projection onto U₋ ⊗ (μ-weight line of F(μ)).
    pub fn leading_term(&self, w: &VermaElement) -> Result<VermaElement> {
        if w.is_zero() {
            return domain("leading term of the zero vector");
        }
        let mu = self.mu;
        Ok(w.filter(|_, k| self.irrep.weights[k] == mu))
    }

    /// Text in the style `d12 d13 ⊗ x1^2 f5`, one ambient monomial per term.
    pub fn format(&self, w: &VermaElement) -> String {
        struct W<'a>(&'a VermaModule, &'a VermaElement);
        impl fmt::Display for W<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                let mut by_mono: BTreeMap<Monomial, IrrepVec> = BTreeMap::new();
                for ((m, k), c) in &self.1.terms {
                    by_mono.entry(*m).or_default().insert(*k, c.clone());
                }
                let mut first = true;
                for (m, v) in by_mono {
                    let amb: AmbVec = self.0.irrep.to_ambient(&v);
                    for (a, c) in amb {
                        crate::uminus::write_term(f, first, &c, &format!("{m} ⊗ {a}"))?;
                        first = false;
                    }
                }
                if first {
                    write!(f, "0")?;
                }
                Ok(())
            }
        }
        W(self, w).to_string()
    }

    /// Ambient form of the irrep factor for each monomial.
    pub fn ambient_terms(&self, w: &VermaElement) -> BTreeMap<Monomial, AmbVec> {
        let mut by_mono: BTreeMap<Monomial, IrrepVec> = BTreeMap::new();
        for ((m, k), c) in &w.terms {
            by_mono.entry(*m).or_default().insert(*k, c.clone());
        }
        by_mono.into_iter().map(|(m, v)| (m, self.irrep.to_ambient(&v))).collect()
    }

    pub fn describe_irrep_vec(&self, v: &IrrepVec) -> String {
        format_ambient(&self.irrep.to_ambient(v))
    }

    /// Images of the basis of F(λ) under the map sending its hwv to `w`,
    /// obtained by applying to `w` the lowering words that build the basis.
    pub fn lowering_images(&self, w: &VermaElement, source: &IrrepModule) -> Vec<VermaElement> {
        let mut images: Vec<VermaElement> = Vec::with_capacity(source.dim());
        for k in 0..source.dim() {
            let img = match source.words[k] {
                None => w.clone(),
                Some((parent, i)) => self.act_e(i + 1, i, &images[parent]),
            };
            images.push(img);
        }
        images
    }

    /// Number of (basis vector, e_i or f_i) pairs on which the images fail to be equivariant.
    pub fn equivariance_defects(&self, source: &IrrepModule, images: &[VermaElement]) -> usize {
        let mut defects = 0;
        for k in 0..source.dim() {
            for i in 0..4 {
                for (a, b) in [(i, i + 1), (i + 1, i)] {
                    let lhs = self.act_e(a, b, &images[k]);
                    let mut rhs = self.zero();
                    for (j, x) in source.action_col(a, b, k) {
                        rhs.add_scaled(&images[*j], x);
                    }
                    if lhs != rhs {
                        defects += 1;
                    }
                }
            }
        }
        defects
    }
}
