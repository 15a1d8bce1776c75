//! Irreducible sl₅-modules F(a,b,c,d) realized inside
//! Symᵃ(ℂ⁵) ⊗ Symᵇ(Λ²ℂ⁵) ⊗ Symᶜ(Λ²ℂ⁵*) ⊗ Symᵈ(ℂ⁵*).
//!
//! The ambient space is a polynomial ring in 30 variables on which
//! e_{ab} = x_a∂_b acts by derivations. F(λ) is the span of the lowering
//! closure of x₁ᵃ x₁₂ᵇ (x₄₅*)ᶜ (x₅*)ᵈ.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::linalg::{solve_dense, Echelon, SparseRow};
use crate::rational::Rational;
use crate::uminus::{pair_index, PAIRS};
use crate::weight::Weight;

pub const NVARS: usize = 30;

/// Variable layout: x_i (0..5), x_{ij} (5..15), x*_{ij} (15..25), x*_i (25..30).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Var {
    X(usize),
    X2(usize),
    F2(usize),
    F(usize),
}

impl Var {
    pub fn index(self) -> usize {
        match self {
            Var::X(i) => i,
            Var::X2(p) => 5 + p,
            Var::F2(p) => 15 + p,
            Var::F(i) => 25 + i,
        }
    }

    pub fn from_index(k: usize) -> Var {
        match k {
            0..=4 => Var::X(k),
            5..=14 => Var::X2(k - 5),
            15..=24 => Var::F2(k - 15),
            _ => Var::F(k - 25),
        }
    }

    pub fn gl_weight(self) -> [i32; 5] {
        let mut w = [0; 5];
        match self {
            Var::X(i) => w[i] = 1,
            Var::F(i) => w[i] = -1,
            Var::X2(p) => {
                w[PAIRS[p].0 as usize] = 1;
                w[PAIRS[p].1 as usize] = 1;
            }
            Var::F2(p) => {
                w[PAIRS[p].0 as usize] = -1;
                w[PAIRS[p].1 as usize] = -1;
            }
        }
        w
    }

    /// Which tensor factor (0..4) the variable belongs to.
    pub fn factor(self) -> usize {
        match self {
            Var::X(_) => 0,
            Var::X2(_) => 1,
            Var::F2(_) => 2,
            Var::F(_) => 3,
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Var::X(i) => write!(f, "x{}", i + 1),
            Var::F(i) => write!(f, "f{}", i + 1),
            Var::X2(p) => write!(f, "x{}{}", PAIRS[p].0 + 1, PAIRS[p].1 + 1),
            Var::F2(p) => write!(f, "f{}{}", PAIRS[p].0 + 1, PAIRS[p].1 + 1),
        }
    }
}

/// e_{ab} applied to a single variable: list of (variable, sign).
fn act_on_var(a: usize, b: usize, v: Var) -> Vec<(Var, i32)> {
    let mut out = Vec::new();
    match v {
        Var::X(c) => {
            if b == c {
                out.push((Var::X(a), 1));
            }
        }
        Var::F(c) => {
            if a == c {
                out.push((Var::F(b), -1));
            }
        }
        Var::X2(p) => {
            let (l, m) = (PAIRS[p].0 as usize, PAIRS[p].1 as usize);
            // δ_bl x_{am} + δ_bm x_{la}
            if b == l {
                if let Some((q, s)) = pair_index(a, m) {
                    out.push((Var::X2(q), s));
                }
            }
            if b == m {
                if let Some((q, s)) = pair_index(l, a) {
                    out.push((Var::X2(q), s));
                }
            }
        }
        Var::F2(p) => {
            let (l, m) = (PAIRS[p].0 as usize, PAIRS[p].1 as usize);
            // −(δ_al x*_{bm} + δ_am x*_{lb})
            if a == l {
                if let Some((q, s)) = pair_index(b, m) {
                    out.push((Var::F2(q), -s));
                }
            }
            if a == m {
                if let Some((q, s)) = pair_index(l, b) {
                    out.push((Var::F2(q), -s));
                }
            }
        }
    }
    out
}

fn build_var_action() -> Vec<Vec<Vec<(u8, i8)>>> {
    let mut t = vec![vec![Vec::new(); NVARS]; 25];
    for a in 0..5 {
        for b in 0..5 {
            for k in 0..NVARS {
                t[a * 5 + b][k] = act_on_var(a, b, Var::from_index(k))
                    .into_iter()
                    .map(|(v, s)| (v.index() as u8, s as i8))
                    .collect();
            }
        }
    }
    t
}

static VAR_ACTION: std::sync::OnceLock<Vec<Vec<Vec<(u8, i8)>>>> = std::sync::OnceLock::new();

fn var_action(a: usize, b: usize, k: usize) -> &'static [(u8, i8)] {
    &VAR_ACTION.get_or_init(build_var_action)[a * 5 + b][k]
}

/// Monomial in the ambient polynomial ring: exponent vector over the 30 variables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AmbMono(pub [u8; NVARS]);

impl AmbMono {
    pub const ONE: AmbMono = AmbMono([0; NVARS]);

    pub fn var(v: Var) -> AmbMono {
        let mut m = AmbMono::ONE;
        m.0[v.index()] = 1;
        m
    }

    pub fn mul(&self, o: &AmbMono) -> AmbMono {
        let mut m = *self;
        for k in 0..NVARS {
            m.0[k] += o.0[k];
        }
        m
    }

    pub fn gl_weight(&self) -> [i32; 5] {
        let mut w = [0; 5];
        for k in 0..NVARS {
            if self.0[k] > 0 {
                let vw = Var::from_index(k).gl_weight();
                for c in 0..5 {
                    w[c] += vw[c] * self.0[k] as i32;
                }
            }
        }
        w
    }

    /// Degrees in the four tensor factors.
    pub fn multidegree(&self) -> [u32; 4] {
        let mut d = [0; 4];
        for k in 0..NVARS {
            d[Var::from_index(k).factor()] += self.0[k] as u32;
        }
        d
    }

    /// Fischer norm ∏ αᵢ!.
    fn fischer(&self) -> Rational {
        let mut r: i64 = 1;
        for &e in &self.0 {
            for t in 2..=e as i64 {
                r *= t;
            }
        }
        Rational::from_int(r)
    }
}

impl fmt::Display for AmbMono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        // print x_i, x_ij, then duals in the order f_ij, f_i
        for k in 0..NVARS {
            match self.0[k] {
                0 => {}
                1 => parts.push(format!("{}", Var::from_index(k))),
                e => parts.push(format!("{}^{}", Var::from_index(k), e)),
            }
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join(" "))
        }
    }
}

/// Vector in the ambient space.
pub type AmbVec = BTreeMap<AmbMono, Rational>;

fn add_term(v: &mut AmbVec, m: AmbMono, c: Rational) {
    if c.is_zero() {
        return;
    }
    let e = v.entry(m).or_default();
    *e += &c;
    if e.is_zero() {
        v.remove(&m);
    }
}

/// e_{ab} = x_a∂_b acting on an ambient vector by derivations.
pub fn ambient_act(a: usize, b: usize, v: &AmbVec) -> AmbVec {
    let mut out = AmbVec::new();
    for (m, c) in v {
        for k in 0..NVARS {
            let e = m.0[k];
            if e == 0 {
                continue;
            }
            for &(t, s) in var_action(a, b, k) {
                let mut n = *m;
                n.0[k] -= 1;
                n.0[t as usize] += 1;
                add_term(&mut out, n, c * &Rational::from_int(e as i64 * s as i64));
            }
        }
    }
    out
}

/// Fischer inner product; e_{ab} and e_{ba} are adjoint for it.
pub fn fischer(u: &AmbVec, v: &AmbVec) -> Rational {
    let (small, large) = if u.len() <= v.len() { (u, v) } else { (v, u) };
    let mut s = Rational::zero();
    for (m, c) in small {
        if let Some(d) = large.get(m) {
            s += &(&(c * d) * &m.fischer());
        }
    }
    s
}

/// Element of an irrep in basis coordinates.
pub type IrrepVec = BTreeMap<usize, Rational>;

pub fn irrep_add(v: &mut IrrepVec, k: usize, c: Rational) {
    if c.is_zero() {
        return;
    }
    let e = v.entry(k).or_default();
    *e += &c;
    if e.is_zero() {
        v.remove(&k);
    }
}

/// Echelon form over ambient monomials tracking each row as a combination of basis vectors.
#[derive(Clone, Debug, Default)]
struct SpanSolver {
    rows: Vec<(AmbMono, AmbVec, IrrepVec)>,
}

impl SpanSolver {
    /// Reduces `v`; returns (residual, combination c) with v = Σ c_k basis_k + residual.
    fn reduce(&self, v: &AmbVec) -> (AmbVec, IrrepVec) {
        let mut r = v.clone();
        let mut comb = IrrepVec::new();
        for (piv, row, rc) in &self.rows {
            if let Some(f) = r.get(piv).cloned() {
                for (m, c) in row {
                    add_term(&mut r, *m, -(c * &f));
                }
                for (k, c) in rc {
                    irrep_add(&mut comb, *k, c * &f);
                }
            }
        }
        (r, comb)
    }

    /// Adds basis vector `idx` (ambient `v`) if independent; returns whether it was added.
    fn try_add(&mut self, idx: usize, v: &AmbVec) -> bool {
        let (r, comb) = self.reduce(v);
        let Some((&piv, pc)) = r.iter().next() else {
            return false;
        };
        let inv = pc.recip();
        let row: AmbVec = r.iter().map(|(m, c)| (*m, c * &inv)).collect();
        // row = (v − Σ comb_k basis_k) / pc
        let mut rc: IrrepVec = comb.into_iter().map(|(k, c)| (k, -(c * &inv))).collect();
        irrep_add(&mut rc, idx, inv);
        self.rows.push((piv, row, rc));
        true
    }
}

/// Sparse column: (row, value).
pub type SparseCol = Vec<(usize, Rational)>;

#[derive(Clone, Debug)]
pub struct IrrepModule {
    pub highest_weight: Weight,
    pub basis: Vec<AmbVec>,
    pub gl_weights: Vec<[i32; 5]>,
    pub weights: Vec<Weight>,
    /// `basis[k] = f_i · basis[parent]` as (parent, i) with i 0-based; `None` for the hwv.
    pub words: Vec<Option<(usize, usize)>>,
    pub by_weight: BTreeMap<Weight, Vec<usize>>,
    /// action[a*5+b][k]: column of e_{ab} on basis vector k.
    action: Vec<Vec<SparseCol>>,
    solvers: BTreeMap<Weight, SpanSolver>,
}

/// The highest weight vector x₁ᵃ x₁₂ᵇ (x₄₅*)ᶜ (x₅*)ᵈ.
pub fn hw_monomial(l: &Weight) -> AmbMono {
    let mut m = AmbMono::ONE;
    m.0[Var::X(0).index()] = l.0[0] as u8;
    m.0[Var::X2(0).index()] = l.0[1] as u8;
    m.0[Var::F2(9).index()] = l.0[2] as u8;
    m.0[Var::F(4).index()] = l.0[3] as u8;
    m
}

impl IrrepModule {
    /// Lowering closure of the highest weight vector.
    pub fn build(lambda: &Weight) -> Result<IrrepModule> {
        let (basis, gl_weights, words, solvers) = Self::closure(lambda, true)?;
        let weights: Vec<Weight> = gl_weights.iter().map(Weight::from_gl).collect();
        let mut by_weight: BTreeMap<Weight, Vec<usize>> = BTreeMap::new();
        for (k, w) in weights.iter().enumerate() {
            by_weight.entry(*w).or_default().push(k);
        }
        let mut m = IrrepModule {
            highest_weight: *lambda,
            basis,
            gl_weights,
            weights,
            words,
            by_weight,
            action: Vec::new(),
            solvers,
        };
        m.build_action()?;
        Ok(m)
    }

    /// Dimension of the lowering closure, without building action matrices.
    pub fn closure_dimension(lambda: &Weight) -> Result<usize> {
        Ok(Self::closure(lambda, false)?.0.len())
    }

    #[allow(clippy::type_complexity)]
    fn closure(
        lambda: &Weight,
        _keep: bool,
    ) -> Result<(Vec<AmbVec>, Vec<[i32; 5]>, Vec<Option<(usize, usize)>>, BTreeMap<Weight, SpanSolver>)> {
        if !lambda.is_dominant() {
            return domain(format!("weight {lambda} is not dominant"));
        }
        if lambda.0.iter().any(|&x| x > 60) {
            return Err(Error::Resource(format!("weight {lambda} too large")));
        }
        let hw = hw_monomial(lambda);
        let mut hv = AmbVec::new();
        hv.insert(hw, Rational::one());
        let mut basis = vec![hv.clone()];
        let mut glw = vec![hw.gl_weight()];
        let mut words = vec![None];
        let mut solvers: BTreeMap<Weight, SpanSolver> = BTreeMap::new();
        solvers.entry(*lambda).or_default().try_add(0, &hv);
        let mut queue = VecDeque::from([0usize]);
        while let Some(k) = queue.pop_front() {
            for i in 0..4 {
                // f_i = x_{i+1} ∂_i
                let v = ambient_act(i + 1, i, &basis[k]);
                if v.is_empty() {
                    continue;
                }
                let mut w = glw[k];
                w[i] -= 1;
                w[i + 1] += 1;
                let idx = basis.len();
                let solver = solvers.entry(Weight::from_gl(&w)).or_default();
                if solver.try_add(idx, &v) {
                    basis.push(v);
                    glw.push(w);
                    words.push(Some((k, i)));
                    queue.push_back(idx);
                }
            }
        }
        Ok((basis, glw, words, solvers))
    }

    fn build_action(&mut self) -> Result<()> {
        let n = self.basis.len();
        let mut action = vec![vec![Vec::new(); n]; 25];
        for a in 0..5 {
            for b in 0..5 {
                for k in 0..n {
                    if a == b {
                        let c = self.gl_weights[k][a];
                        if c != 0 {
                            action[a * 5 + b][k] = vec![(k, Rational::from_int(c as i64))];
                        }
                        continue;
                    }
                    let v = ambient_act(a, b, &self.basis[k]);
                    let col = self.coords_of(&v)?;
                    action[a * 5 + b][k] = col.into_iter().collect();
                }
            }
        }
        self.action = action;
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of an ambient vector lying in the module; error if it does not.
    pub fn coords_of(&self, v: &AmbVec) -> Result<IrrepVec> {
        let mut parts: BTreeMap<Weight, AmbVec> = BTreeMap::new();
        for (m, c) in v {
            parts.entry(Weight::from_gl(&m.gl_weight())).or_default().insert(*m, c.clone());
        }
        let mut out = IrrepVec::new();
        for (w, part) in parts {
            let Some(s) = self.solvers.get(&w) else {
                return domain(format!("vector has a component of weight {w} outside the module"));
            };
            let (r, comb) = s.reduce(&part);
            if !r.is_empty() {
                return domain("vector outside the module span");
            }
            for (k, c) in comb {
                irrep_add(&mut out, k, c);
            }
        }
        Ok(out)
    }

    /// Orthogonal projection (Fischer product) of an ambient vector onto the module.
    ///
    /// This is the equivariant projection onto the Cartan component, so it
    /// agrees with reading the vector in the quotient realization.
    pub fn project(&self, v: &AmbVec) -> Result<IrrepVec> {
        let deg = hw_monomial(&self.highest_weight).multidegree();
        let mut parts: BTreeMap<Weight, AmbVec> = BTreeMap::new();
        for (m, c) in v {
            if m.multidegree() != deg {
                return domain(format!("monomial {m} has the wrong multidegree"));
            }
            parts.entry(Weight::from_gl(&m.gl_weight())).or_default().insert(*m, c.clone());
        }
        let mut out = IrrepVec::new();
        for (w, part) in parts {
            let Some(idx) = self.by_weight.get(&w) else {
                continue;
            };
            let g: Vec<Vec<Rational>> = idx
                .iter()
                .map(|&i| idx.iter().map(|&j| fischer(&self.basis[i], &self.basis[j])).collect())
                .collect();
            let rhs: Vec<Rational> = idx.iter().map(|&i| fischer(&self.basis[i], &part)).collect();
            let x = solve_dense(&g, &rhs).ok_or_else(|| Error::Domain("singular Gram matrix".into()))?;
            for (&i, c) in idx.iter().zip(x) {
                irrep_add(&mut out, i, c);
            }
        }
        Ok(out)
    }

    /// Ambient vector of a coordinate vector.
    pub fn to_ambient(&self, v: &IrrepVec) -> AmbVec {
        let mut out = AmbVec::new();
        for (k, c) in v {
            for (m, d) in &self.basis[*k] {
                add_term(&mut out, *m, c * d);
            }
        }
        out
    }

    /// Column of e_{ab} on basis vector k.
    pub fn action_col(&self, a: usize, b: usize, k: usize) -> &[(usize, Rational)] {
        &self.action[a * 5 + b][k]
    }

    /// e_{ab} acting on a coordinate vector (a = b gives the diagonal gl₅ element).
    pub fn act(&self, a: usize, b: usize, v: &IrrepVec) -> IrrepVec {
        let mut out = IrrepVec::new();
        for (k, c) in v {
            for (j, x) in self.action_col(a, b, *k) {
                irrep_add(&mut out, *j, c * x);
            }
        }
        out
    }

    /// h_i = e_{ii} − e_{i+1,i+1}.
    pub fn act_h(&self, i: usize, v: &IrrepVec) -> IrrepVec {
        let mut out = IrrepVec::new();
        for (k, c) in v {
            let h = self.gl_weights[*k][i] - self.gl_weights[*k][i + 1];
            irrep_add(&mut out, *k, c * &Rational::from_int(h as i64));
        }
        out
    }

    /// Highest weight vectors of weight μ: common kernel of e_1..e_4 on F_μ.
    pub fn highest_weight_vectors(&self, mu: &Weight) -> Vec<IrrepVec> {
        let Some(idx) = self.by_weight.get(mu) else {
            return Vec::new();
        };
        let mut rows: BTreeMap<(usize, usize), SparseRow> = BTreeMap::new();
        for (p, &k) in idx.iter().enumerate() {
            for i in 0..4 {
                for (j, x) in self.action_col(i, i + 1, k) {
                    rows.entry((i, *j)).or_default().push((p, x.clone()));
                }
            }
        }
        let mut e = Echelon::new(idx.len());
        for (_, r) in rows {
            e.insert(r);
        }
        e.kernel()
            .into_iter()
            .map(|v| {
                v.into_iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(p, c)| (idx[p], c))
                    .collect()
            })
            .collect()
    }

    pub fn format_vec(&self, v: &IrrepVec) -> String {
        let amb = self.to_ambient(v);
        format_ambient(&amb)
    }

    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Term {
            monomial: String,
            coeff: Rational,
        }
        let basis: Vec<Vec<Term>> = self
            .basis
            .iter()
            .map(|b| b.iter().map(|(m, c)| Term { monomial: m.to_string(), coeff: c.clone() }).collect())
            .collect();
        let mut action = serde_json::Map::new();
        for a in 0..5 {
            for b in 0..5 {
                if a == b {
                    continue;
                }
                let mut trip = Vec::new();
                for k in 0..self.dim() {
                    for (j, x) in self.action_col(a, b, k) {
                        trip.push(serde_json::json!([j, k, x.to_string()]));
                    }
                }
                action.insert(format!("e{}{}", a + 1, b + 1), serde_json::Value::Array(trip));
            }
        }
        serde_json::json!({
            "highest_weight": self.highest_weight,
            "dim": self.dim(),
            "weights": self.weights,
            "basis": basis,
            "action": action,
        })
    }
}

pub fn format_ambient(v: &AmbVec) -> String {
    struct W<'a>(&'a AmbVec);
    impl fmt::Display for W<'_> {
        fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            if self.0.is_empty() {
                return write!(f, "0");
            }
            for (n, (m, c)) in self.0.iter().enumerate() {
                crate::uminus::write_term(f, n == 0, c, &m.to_string())?;
            }
            Ok(())
        }
    }
    W(v).to_string()
}

/// Weyl dimension formula for sl₅.
pub fn weyl_dim(l: &Weight) -> u64 {
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..4 {
        for j in i + 1..5 {
            num *= (l.lambda_ij(i, j) + (j - i) as i32) as u128;
            den *= (j - i) as u128;
        }
    }
    (num / den) as u64
}

/// Number of Gelfand–Tsetlin patterns with top row given by λ (an independent count of dim F(λ)).
pub fn gelfand_tsetlin_count(l: &Weight) -> u64 {
    let top: Vec<i64> = {
        let mut r = vec![0i64; 5];
        for k in (0..4).rev() {
            r[k] = r[k + 1] + l.0[k] as i64;
        }
        r
    };
    // number of interlacing rows below `row`, memoized on row contents
    fn count(row: &[i64], memo: &mut BTreeMap<Vec<i64>, u64>) -> u64 {
        if row.len() == 1 {
            return 1;
        }
        if let Some(&c) = memo.get(row) {
            return c;
        }
        let mut total = 0;
        let mut cur = vec![0i64; row.len() - 1];
        fn rec(k: usize, row: &[i64], cur: &mut Vec<i64>, memo: &mut BTreeMap<Vec<i64>, u64>, total: &mut u64) {
            if k == cur.len() {
                let next = cur.clone();
                *total += count(&next, memo);
                return;
            }
            for v in row[k + 1]..=row[k] {
                cur[k] = v;
                rec(k + 1, row, cur, memo, total);
            }
        }
        rec(0, row, &mut cur, memo, &mut total);
        memo.insert(row.to_vec(), total);
        total
    }
    count(&top, &mut BTreeMap::new())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(a: i32, b: i32, c: i32, d: i32) -> Weight {
        Weight::new(a, b, c, d)
    }

    fn single(m: AmbMono) -> AmbVec {
        let mut v = AmbVec::new();
        v.insert(m, Rational::one());
        v
    }

    #[test]
    fn weyl_examples() {
        assert_eq!(weyl_dim(&w(0, 0, 0, 1)), 5);
        assert_eq!(weyl_dim(&w(0, 0, 0, 3)), 35);
        assert_eq!(weyl_dim(&w(2, 0, 0, 0)), 15);
        assert_eq!(weyl_dim(&w(1, 1, 0, 0)), 40);
    }

    #[test]
    fn gelfand_tsetlin_matches_weyl() {
        for l in Weight::dominant_up_to(4) {
            assert_eq!(gelfand_tsetlin_count(&l), weyl_dim(&l), "{l}");
        }
    }

    #[test]
    fn small_irreps() {
        assert_eq!(IrrepModule::build(&Weight::ZERO).unwrap().dim(), 1);
        let f = IrrepModule::build(&w(1, 0, 0, 0)).unwrap();
        assert_eq!(f.dim(), 5);
        assert_eq!(IrrepModule::build(&w(1, 1, 0, 0)).unwrap().dim(), 40);
        assert!(IrrepModule::build(&w(-1, 0, 0, 0)).is_err());
    }

    #[test]
    fn dual_action_sign() {
        // x1∂2 on x1* gives −x2*
        let v = ambient_act(0, 1, &single(AmbMono::var(Var::F(0))));
        assert_eq!(v, {
            let mut e = AmbVec::new();
            e.insert(AmbMono::var(Var::F(1)), Rational::from_int(-1));
            e
        });
        // x1∂2 on x5* is zero
        assert!(ambient_act(0, 1, &single(AmbMono::var(Var::F(4)))).is_empty());
        // x1∂2 on x2 is x1
        let v = ambient_act(0, 1, &single(AmbMono::var(Var::X(1))));
        assert_eq!(v, single(AmbMono::var(Var::X(0))));
    }

    #[test]
    fn hw_vectors() {
        let f = IrrepModule::build(&w(1, 0, 0, 0)).unwrap();
        let h = f.highest_weight_vectors(&w(1, 0, 0, 0));
        assert_eq!(h.len(), 1);
        assert_eq!(f.format_vec(&h[0]), "x1");
        assert!(f.highest_weight_vectors(&w(0, 1, 0, 0)).is_empty());
        let g = IrrepModule::build(&w(0, 1, 0, 0)).unwrap();
        let h = g.highest_weight_vectors(&w(0, 1, 0, 0));
        assert_eq!(h.len(), 1);
        assert_eq!(g.format_vec(&h[0]), "x12");
    }

    #[test]
    fn serre_relations_on_basis() {
        for l in [w(1, 1, 0, 0), w(0, 1, 1, 0), w(2, 0, 0, 1), w(0, 0, 1, 1)] {
            let f = IrrepModule::build(&l).unwrap();
            assert_eq!(f.dim() as u64, weyl_dim(&l));
            for k in 0..f.dim() {
                let v: IrrepVec = [(k, Rational::one())].into_iter().collect();
                for i in 0..4 {
                    for j in 0..4 {
                        // [e_i, f_j] v = δ_ij h_i v
                        let ef = f.act(i, i + 1, &f.act(j + 1, j, &v));
                        let fe = f.act(j + 1, j, &f.act(i, i + 1, &v));
                        let mut lhs = ef;
                        for (x, c) in fe {
                            irrep_add(&mut lhs, x, -c);
                        }
                        let rhs = if i == j { f.act_h(i, &v) } else { IrrepVec::new() };
                        assert_eq!(lhs, rhs, "{l} basis {k} i={i} j={j}");
                    }
                }
            }
        }
    }

    #[test]
    fn dual_dimensions_agree() {
        for l in [w(2, 1, 0, 0), w(1, 0, 1, 0), w(0, 2, 0, 1)] {
            let a = IrrepModule::closure_dimension(&l).unwrap();
            let b = IrrepModule::closure_dimension(&l.dual()).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn projection_of_plucker_product() {
        // x45*·x45* is the hwv of F(0,0,2,0); x12*·x45* is not in the submodule
        let f = IrrepModule::build(&w(0, 0, 2, 0)).unwrap();
        let m = AmbMono::var(Var::F2(0)).mul(&AmbMono::var(Var::F2(9)));
        let v = single(m);
        assert!(f.coords_of(&v).is_err());
        let p = f.project(&v).unwrap();
        // the projection differs from v by a Plücker-type element orthogonal to F
        let back = f.to_ambient(&p);
        let mut diff = v.clone();
        for (m, c) in &back {
            add_term(&mut diff, *m, -c.clone());
        }
        for k in 0..f.dim() {
            assert!(fischer(&f.basis[k], &diff).is_zero());
        }
        // projection is idempotent on module vectors
        let hv = single(hw_monomial(&w(0, 0, 2, 0)));
        assert_eq!(f.project(&hv).unwrap(), f.coords_of(&hv).unwrap());
    }
}
