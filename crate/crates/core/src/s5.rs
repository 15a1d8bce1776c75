//! Verma modules ℂ[∂₁,…,∂₅] ⊗ F(λ) over the Lie algebra S₅ of divergence-free
//! vector fields, graded by deg x_i = 2, and their singular vectors.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use serde_json::json;

use crate::error::{domain, Result};
use crate::linalg::{rref_vectors, Echelon};
use crate::rational::Rational;
use crate::search::{SingularCertificate, TermRecord, TOOL_VERSION};
use crate::sl5::{format_ambient, AmbVec, IrrepModule, IrrepVec};
use crate::uminus::compositions;
use crate::weight::Weight;

/// Sparse combination of (∂-exponents, irrep basis index).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct S5VermaElement {
    pub lambda: Weight,
    terms: BTreeMap<([u8; 5], usize), Rational>,
}

impl S5VermaElement {
    pub fn zero(lambda: Weight) -> Self {
        S5VermaElement { lambda, terms: BTreeMap::new() }
    }

    pub fn add_term(&mut self, m: [u8; 5], k: usize, c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry((m, k)).or_default();
        *e += &c;
        if e.is_zero() {
            self.terms.remove(&(m, k));
        }
    }

    pub fn add_scaled(&mut self, o: &Self, c: &Rational) {
        for ((m, k), x) in &o.terms {
            self.add_term(*m, *k, x * c);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&([u8; 5], usize), &Rational)> {
        self.terms.iter()
    }

    /// Degrees 2|M| occurring in the element.
    pub fn degrees(&self) -> Vec<u32> {
        let mut d: Vec<u32> = self.terms.keys().map(|(m, _)| 2 * m.iter().map(|&e| e as u32).sum::<u32>()).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    /// ∂_j · w.
    pub fn times_partial(&self, j: usize) -> Self {
        let mut out = Self::zero(self.lambda);
        for ((m, k), c) in &self.terms {
            let mut n = *m;
            n[j] += 1;
            out.add_term(n, *k, c.clone());
        }
        out
    }

    pub fn proportional_to(&self, o: &Self) -> bool {
        let (Some(((m, k), a)), false) = (self.terms.iter().next(), o.is_zero()) else {
            return false;
        };
        let b = o.terms.get(&(*m, *k)).cloned().unwrap_or_default();
        if b.is_zero() {
            return false;
        }
        let r = a / &b;
        self.terms.len() == o.terms.len() && o.terms.iter().all(|(key, x)| self.terms.get(key) == Some(&(x * &r)))
    }
}

/// Quadratic vector field Σ c · x^α ∂_c with |α| = 2.
pub type QuadField = Vec<([u8; 5], usize, Rational)>;

fn sq(a: usize, b: usize) -> [u8; 5] {
    let mut e = [0u8; 5];
    e[a] += 1;
    e[b] += 1;
    e
}

/// A basis of the 70-dimensional space of divergence-free quadratic fields:
/// x_a x_b ∂_c with c ∉ {a, b}, and 2 x_a x_c ∂_c − x_a² ∂_a for c ≠ a.
pub fn quadratic_fields() -> Vec<QuadField> {
    let mut out = Vec::new();
    for a in 0..5 {
        for b in a..5 {
            for c in 0..5 {
                if c != a && c != b {
                    out.push(vec![(sq(a, b), c, Rational::one())]);
                }
            }
        }
    }
    for a in 0..5 {
        for c in 0..5 {
            if c != a {
                out.push(vec![(sq(a, c), c, Rational::from_int(2)), (sq(a, a), a, -Rational::one())]);
            }
        }
    }
    out
}

pub fn divergence(x: &QuadField) -> BTreeMap<usize, Rational> {
    let mut out: BTreeMap<usize, Rational> = BTreeMap::new();
    for (alpha, c, coeff) in x {
        if alpha[*c] > 0 {
            let mut lin = *alpha;
            lin[*c] -= 1;
            let a = lin.iter().position(|&e| e > 0).unwrap_or(0);
            *out.entry(a).or_default() += &(coeff * &Rational::from_int(alpha[*c] as i64));
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// The S₅ Verma module of highest weight λ.
#[derive(Clone, Debug)]
pub struct S5Module {
    pub lambda: Weight,
    pub irrep: Arc<IrrepModule>,
}

impl S5Module {
    pub fn new(lambda: Weight) -> Result<Self> {
        Ok(S5Module { lambda, irrep: Arc::new(IrrepModule::build(&lambda)?) })
    }

    pub fn zero(&self) -> S5VermaElement {
        S5VermaElement::zero(self.lambda)
    }

    /// ∂^M ⊗ v with v given in ambient coordinates.
    pub fn tensor(&self, m: [u8; 5], v: &AmbVec) -> Result<S5VermaElement> {
        let mut out = self.zero();
        for (k, c) in self.irrep.coords_of(v)? {
            out.add_term(m, k, c);
        }
        Ok(out)
    }

    pub fn weight_of(&self, w: &S5VermaElement) -> Option<Weight> {
        let mut ws = w.terms.keys().map(|(m, k)| {
            let mut gl = self.irrep.gl_weights[*k];
            for c in 0..5 {
                gl[c] -= m[c] as i32;
            }
            Weight::from_gl(&gl)
        });
        let first = ws.next()?;
        ws.all(|x| x == first).then_some(first)
    }

    /// x_a ∂_b on w; for a = b the result is only meaningful inside traceless combinations.
    pub fn act_e(&self, a: usize, b: usize, w: &S5VermaElement) -> S5VermaElement {
        let mut out = self.zero();
        for ((m, k), c) in &w.terms {
            // [x_a∂_b, ∂_a] = −∂_b
            if m[a] > 0 {
                let mut n = *m;
                n[a] -= 1;
                n[b] += 1;
                out.add_term(n, *k, -(c * &Rational::from_int(m[a] as i64)));
            }
            for (j, x) in self.irrep.action_col(a, b, *k) {
                out.add_term(*m, *j, c * x);
            }
        }
        out
    }

    /// X · (∂^M ⊗ v), from X·(∂_j u ⊗ v) = ∂_j X·(u ⊗ v) + [X, ∂_j]·(u ⊗ v)
    /// and X·(1 ⊗ v) = 0.
    pub fn act_field(&self, x: &QuadField, w: &S5VermaElement) -> S5VermaElement {
        let mut memo: HashMap<([u8; 5], usize), S5VermaElement> = HashMap::new();
        let mut out = self.zero();
        for ((m, k), c) in &w.terms {
            out.add_scaled(&self.field_on_basis(x, *m, *k, &mut memo), c);
        }
        out
    }

    fn field_on_basis(
        &self,
        x: &QuadField,
        m: [u8; 5],
        k: usize,
        memo: &mut HashMap<([u8; 5], usize), S5VermaElement>,
    ) -> S5VermaElement {
        if let Some(r) = memo.get(&(m, k)) {
            return r.clone();
        }
        let Some(j) = m.iter().position(|&e| e > 0) else {
            return self.zero();
        };
        let mut rest = m;
        rest[j] -= 1;
        let mut out = self.field_on_basis(x, rest, k, memo).times_partial(j);
        let mut base = self.zero();
        base.add_term(rest, k, Rational::one());
        // [X, ∂_j] = −Σ (∂_j P_c) ∂_c, a traceless linear field
        for (alpha, c, coeff) in x {
            if alpha[j] > 0 {
                let mut lin = *alpha;
                lin[j] -= 1;
                let a = lin.iter().position(|&e| e > 0).unwrap_or(0);
                let s = -(coeff * &Rational::from_int(alpha[j] as i64));
                out.add_scaled(&self.act_e(a, *c, &base), &s);
            }
        }
        memo.insert((m, k), out.clone());
        out
    }

    /// e_i w = 0 for i = 1..4 and X w = 0 for every divergence-free quadratic field X.
    pub fn is_singular(&self, w: &S5VermaElement) -> Result<bool> {
        if w.is_zero() {
            return domain("singularity test on the zero vector");
        }
        if w.degrees().iter().all(|&d| d == 0) {
            return Ok(false);
        }
        let raising = (0..4).all(|i| self.act_e(i, i + 1, w).is_zero());
        Ok(raising && quadratic_fields().iter().all(|x| self.act_field(x, w).is_zero()))
    }

    /// Basis of the weight-ν part of degree 2k.
    pub fn weight_space(&self, k: u8, nu: &Weight) -> Vec<([u8; 5], usize)> {
        let mut out = Vec::new();
        for m in compositions(k) {
            for (idx, gl) in self.irrep.gl_weights.iter().enumerate() {
                let mut g = *gl;
                for c in 0..5 {
                    g[c] -= m[c] as i32;
                }
                if Weight::from_gl(&g) == *nu {
                    out.push((m, idx));
                }
            }
        }
        out.sort();
        out
    }

    /// Singular vectors of degree 2k and weight ν, as a row-reduced kernel basis.
    pub fn singular_kernel(&self, k: u8, nu: &Weight) -> Vec<S5VermaElement> {
        let cols = self.weight_space(k, nu);
        if cols.is_empty() {
            return Vec::new();
        }
        let fields = quadratic_fields();
        let mut rows: BTreeMap<(usize, [u8; 5], usize), Vec<(usize, Rational)>> = BTreeMap::new();
        for (c, (m, idx)) in cols.iter().enumerate() {
            let mut w = self.zero();
            w.add_term(*m, *idx, Rational::one());
            let mut images: Vec<S5VermaElement> = (0..4).map(|i| self.act_e(i, i + 1, &w)).collect();
            images.extend(fields.iter().map(|x| self.act_field(x, &w)));
            for (g, img) in images.iter().enumerate() {
                for ((n, j), v) in img.iter() {
                    rows.entry((g, *n, *j)).or_default().push((c, v.clone()));
                }
            }
        }
        let mut ech = Echelon::new(cols.len());
        for (_, row) in rows {
            ech.insert(row);
        }
        rref_vectors(ech.kernel())
            .into_iter()
            .map(|v| {
                let mut w = self.zero();
                for (c, x) in v.into_iter().enumerate() {
                    w.add_term(cols[c].0, cols[c].1, x);
                }
                w
            })
            .collect()
    }

    /// Dominant weights of degree-2k terms.
    pub fn candidate_weights(&self, k: u8) -> Vec<Weight> {
        let mut out: Vec<Weight> = compositions(k)
            .into_iter()
            .flat_map(|m| {
                self.irrep.gl_weights.iter().map(move |gl| {
                    let mut g = *gl;
                    for c in 0..5 {
                        g[c] -= m[c] as i32;
                    }
                    Weight::from_gl(&g)
                })
            })
            .filter(|w| w.is_dominant())
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// Certificates for every weight with a nonzero kernel in degree 2k.
    pub fn search(&self, k: u8) -> Vec<SingularCertificate> {
        self.candidate_weights(k)
            .into_iter()
            .filter_map(|nu| {
                let ker = self.singular_kernel(k, &nu);
                (!ker.is_empty()).then(|| SingularCertificate {
                    algebra: "S5".into(),
                    mu: self.lambda,
                    degree: 2 * k as u32,
                    weight: nu,
                    kernel_dim: ker.len(),
                    vectors: ker.iter().map(records).collect(),
                    full_g1: true,
                    tool_version: TOOL_VERSION.into(),
                })
            })
            .collect()
    }

    pub fn from_records(&self, recs: &[TermRecord]) -> Result<S5VermaElement> {
        let mut w = self.zero();
        for r in recs {
            if !r.forms.is_empty() || r.irrep >= self.irrep.dim() {
                return domain("record is not an S5 Verma term");
            }
            w.add_term(r.partials, r.irrep, r.coeff.clone());
        }
        Ok(w)
    }

    pub fn format(&self, w: &S5VermaElement) -> String {
        struct W<'a>(&'a S5Module, &'a S5VermaElement);
        impl fmt::Display for W<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                let mut by_m: BTreeMap<[u8; 5], IrrepVec> = BTreeMap::new();
                for ((m, k), c) in &self.1.terms {
                    by_m.entry(*m).or_default().insert(*k, c.clone());
                }
                if by_m.is_empty() {
                    return write!(f, "0");
                }
                let parts: Vec<String> = by_m
                    .iter()
                    .map(|(m, v)| {
                        let d: Vec<String> = (0..5)
                            .filter(|&c| m[c] > 0)
                            .map(|c| if m[c] == 1 { format!("p{}", c + 1) } else { format!("p{}^{}", c + 1, m[c]) })
                            .collect();
                        let u = if d.is_empty() { "1".to_string() } else { d.join(" ") };
                        format!("{u} ⊗ ({})", format_ambient(&self.0.irrep.to_ambient(v)))
                    })
                    .collect();
                write!(f, "{}", parts.join(" + "))
            }
        }
        W(self, w).to_string()
    }
}

fn records(w: &S5VermaElement) -> Vec<TermRecord> {
    w.iter()
        .map(|((m, k), c)| TermRecord { partials: *m, forms: Vec::new(), irrep: *k, coeff: c.clone() })
        .collect()
}

/// R1–R6: (name, λ, degree, vector in M(λ)).
pub fn reference_vectors() -> Result<Vec<(&'static str, S5Module, S5VermaElement)>> {
    use crate::parse::{parse_ambient, Params};
    let amb = |s: &str| -> Result<AmbVec> {
        let (m, sign) = parse_ambient(s, Params::default())?;
        Ok(AmbVec::from([(m, Rational::from_int(sign as i64))]))
    };
    let p = |j: usize| {
        let mut e = [0u8; 5];
        e[j] = 1;
        e
    };
    let build = |lambda: Weight, terms: &[(usize, &str, i64)]| -> Result<(S5Module, S5VermaElement)> {
        let module = S5Module::new(lambda)?;
        let mut w = module.zero();
        for (j, v, c) in terms {
            w.add_scaled(&module.tensor(p(*j), &amb(v)?)?, &Rational::from_int(*c));
        }
        Ok((module, w))
    };
    let r1: Vec<(usize, &str, i64)> = vec![(0, "x1", 1), (1, "x2", 1), (2, "x3", 1), (3, "x4", 1), (4, "x5", 1)];
    let (m1, w1) = build(Weight::new(1, 0, 0, 0), &r1)?;
    let (m2, w2) = build(Weight::new(0, 1, 0, 0), &[(1, "x12", 1), (2, "x13", 1), (3, "x14", 1), (4, "x15", 1)])?;
    let (m3, w3) = build(Weight::new(0, 0, 1, 0), &[(2, "f45", 1), (3, "f53", 1), (4, "f34", 1)])?;
    let (m4, w4) = build(Weight::new(0, 0, 0, 1), &[(3, "f5", 1), (4, "f4", -1)])?;
    let (m5, w5) = build(Weight::ZERO, &[(4, "", 1)])?;
    let w6 = w1.times_partial(4);
    let m6 = m1.clone();
    Ok(vec![("R1", m1, w1), ("R2", m2, w2), ("R3", m3, w3), ("R4", m4, w4), ("R5", m5, w5), ("R6", m6, w6)])
}

/// The λ values of the classification.
pub fn baseline_weights() -> Vec<Weight> {
    vec![Weight::ZERO, Weight::new(1, 0, 0, 0), Weight::new(0, 1, 0, 0), Weight::new(0, 0, 1, 0), Weight::new(0, 0, 0, 1)]
}

/// Exhaustive search over the five λ and degrees 2 and 4, matched against R1–R6.
pub fn baseline_report() -> Result<serde_json::Value> {
    let known = reference_vectors()?;
    let mut found = Vec::new();
    let mut unexplained = Vec::new();
    let mut hit = vec![false; known.len()];
    for lambda in baseline_weights() {
        let module = S5Module::new(lambda)?;
        for k in [1u8, 2] {
            for cert in module.search(k) {
                let vs: Vec<S5VermaElement> =
                    cert.vectors.iter().map(|v| module.from_records(v)).collect::<Result<_>>()?;
                let name = known
                    .iter()
                    .position(|(_, m, w)| m.lambda == lambda && vs.len() == 1 && vs[0].proportional_to(w));
                match name {
                    Some(i) => {
                        hit[i] = true;
                        found.push(json!({"name": known[i].0, "lambda": lambda, "degree": cert.degree, "weight": cert.weight}));
                    }
                    None => unexplained.push(json!({"lambda": lambda, "degree": cert.degree, "weight": cert.weight, "kernel_dim": cert.kernel_dim})),
                }
            }
        }
    }
    let missing: Vec<&str> = known.iter().zip(&hit).filter(|(_, h)| !**h).map(|(k, _)| k.0).collect();
    Ok(json!({
        "algebra": "S5",
        "found": found,
        "unexplained": unexplained,
        "missing": missing,
        "pass": unexplained.is_empty() && missing.is_empty(),
    }))
}
