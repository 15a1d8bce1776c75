//! The enveloping algebra U₋ of g₋ = g₋₂ ⊕ g₋₁ in PBW normal form.
//!
//! Indices are 0-based internally (`0..5` stands for `1..5`) and are printed
//! 1-based. The ten form pairs are numbered in the lexicographic order
//! 12, 13, 14, 15, 23, 24, 25, 34, 35, 45.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::rational::Rational;
use crate::weight::Weight;

pub const PAIRS: [(u8, u8); 10] = [
    (0, 1),
    (0, 2),
    (0, 3),
    (0, 4),
    (1, 2),
    (1, 3),
    (1, 4),
    (2, 3),
    (2, 4),
    (3, 4),
];

const fn build_pair_index() -> [[u8; 5]; 5] {
    let mut t = [[255u8; 5]; 5];
    let mut k = 0;
    while k < 10 {
        let (i, j) = PAIRS[k];
        t[i as usize][j as usize] = k as u8;
        t[j as usize][i as usize] = k as u8;
        k += 1;
    }
    t
}

const PAIR_INDEX: [[u8; 5]; 5] = build_pair_index();

/// Index of the pair {i, j} and the sign of d_{ij} relative to the canonical d_{min,max}.
pub fn pair_index(i: usize, j: usize) -> Option<(usize, i32)> {
    if i >= 5 || j >= 5 || i == j {
        return None;
    }
    Some((PAIR_INDEX[i][j] as usize, if i < j { 1 } else { -1 }))
}

/// A canonical form pair d_{ij} with i < j.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FormPair {
    pub i: u8,
    pub j: u8,
}

impl FormPair {
    /// Normalizes (i, j) to canonical order, returning the sign of the swap.
    pub fn new(i: usize, j: usize) -> Result<(FormPair, i32)> {
        if i >= 5 || j >= 5 {
            return domain(format!("form index out of range: ({i},{j})"));
        }
        if i == j {
            return domain(format!("degenerate form pair ({i},{i})"));
        }
        if i < j {
            Ok((FormPair { i: i as u8, j: j as u8 }, 1))
        } else {
            Ok((FormPair { i: j as u8, j: i as u8 }, -1))
        }
    }

    pub fn from_index(k: usize) -> FormPair {
        let (i, j) = PAIRS[k];
        FormPair { i, j }
    }

    pub fn index(self) -> usize {
        PAIR_INDEX[self.i as usize][self.j as usize] as usize
    }
}

impl fmt::Display for FormPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.i + 1, self.j + 1)
    }
}

pub fn perm_sign(p: &[usize]) -> i32 {
    let mut s = 1;
    for a in 0..p.len() {
        for b in a + 1..p.len() {
            if p[a] > p[b] {
                s = -s;
            }
        }
    }
    s
}

/// ε_{ijkl}: `None` if the indices are not distinct, otherwise the sign of the
/// permutation (i, j, k, l, t) together with the missing index t.
pub fn epsilon_t(i: usize, j: usize, k: usize, l: usize) -> Result<Option<(i32, usize)>> {
    if [i, j, k, l].iter().any(|&x| x >= 5) {
        return domain(format!("index out of range in epsilon({i},{j},{k},{l})"));
    }
    let mut seen = [false; 5];
    for &x in &[i, j, k, l] {
        if seen[x] {
            return Ok(None);
        }
        seen[x] = true;
    }
    let t = (0..5).find(|&x| !seen[x]).unwrap();
    Ok(Some((perm_sign(&[i, j, k, l, t]), t)))
}

fn build_eps() -> [[Option<(i8, u8)>; 10]; 10] {
    let mut t = [[None; 10]; 10];
    for p in 0..10 {
        for q in 0..10 {
            let (a, b) = PAIRS[p];
            let (c, d) = PAIRS[q];
            t[p][q] = epsilon_t(a as usize, b as usize, c as usize, d as usize)
                .unwrap()
                .map(|(s, t)| (s as i8, t as u8));
        }
    }
    t
}

static EPS: std::sync::OnceLock<[[Option<(i8, u8)>; 10]; 10]> = std::sync::OnceLock::new();

/// ε_{p,q} for canonical pair indices p, q: (sign, t) or `None`.
#[inline]
pub fn eps_pairs(p: usize, q: usize) -> Option<(i32, usize)> {
    EPS.get_or_init(build_eps)[p][q].map(|(s, t)| (s as i32, t as usize))
}

/// A PBW monomial ∂^M d_{p1}···d_{pk}; `forms` is a bitmask over pair indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub partials: [u8; 5],
    pub forms: u16,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { partials: [0; 5], forms: 0 };

    pub fn new(partials: [u8; 5], forms: &[usize]) -> Monomial {
        let mut mask = 0u16;
        for &p in forms {
            mask |= 1 << p;
        }
        Monomial { partials, forms: mask }
    }

    pub fn partial(c: usize) -> Monomial {
        let mut m = Monomial::ONE;
        m.partials[c] = 1;
        m
    }

    pub fn form(p: usize) -> Monomial {
        Monomial { partials: [0; 5], forms: 1 << p }
    }

    pub fn num_partials(&self) -> u32 {
        self.partials.iter().map(|&x| x as u32).sum()
    }

    pub fn height(&self) -> u32 {
        self.forms.count_ones()
    }

    pub fn degree(&self) -> u32 {
        2 * self.num_partials() + self.height()
    }

    pub fn parity(&self) -> u32 {
        self.height() % 2
    }

    /// Pair indices of the forms in increasing order.
    pub fn form_list(&self) -> Vec<usize> {
        (0..10).filter(|&p| self.forms & (1 << p) != 0).collect()
    }

    /// Weight as a gl₅ vector: ∂_i contributes −ε_i and d_{ij} contributes ε_i + ε_j.
    pub fn gl_weight(&self) -> [i32; 5] {
        let mut w = [0i32; 5];
        for c in 0..5 {
            w[c] -= self.partials[c] as i32;
        }
        for p in 0..10 {
            if self.forms & (1 << p) != 0 {
                let (i, j) = PAIRS[p];
                w[i as usize] += 1;
                w[j as usize] += 1;
            }
        }
        w
    }

    pub fn weight(&self) -> Weight {
        Weight::from_gl(&self.gl_weight())
    }

    pub fn times_partial(mut self, c: usize) -> Monomial {
        self.partials[c] += 1;
        self
    }

    pub fn times_partials(mut self, other: &[u8; 5]) -> Monomial {
        for c in 0..5 {
            self.partials[c] += other[c];
        }
        self
    }

    pub fn to_json(&self, coeff: &Rational) -> serde_json::Value {
        let forms: Vec<[u8; 2]> = self
            .form_list()
            .into_iter()
            .map(|p| [PAIRS[p].0 + 1, PAIRS[p].1 + 1])
            .collect();
        serde_json::json!({
            "partials": self.partials,
            "forms": forms,
            "coeff": coeff.to_string(),
        })
    }
}

fn cmp_forms(a: u16, b: u16) -> Ordering {
    let (mut x, mut y) = (a, b);
    loop {
        match (x, y) {
            (0, 0) => return Ordering::Equal,
            (0, _) => return Ordering::Less,
            (_, 0) => return Ordering::Greater,
            _ => {
                let (i, j) = (x.trailing_zeros(), y.trailing_zeros());
                if i != j {
                    return i.cmp(&j);
                }
                x &= x - 1;
                y &= y - 1;
            }
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.partials.cmp(&other.partials))
            .then_with(|| cmp_forms(self.forms, other.forms))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for c in 0..5 {
            match self.partials[c] {
                0 => {}
                1 => parts.push(format!("p{}", c + 1)),
                e => parts.push(format!("p{}^{}", c + 1, e)),
            }
        }
        for p in self.form_list() {
            parts.push(format!("d{}", FormPair::from_index(p)));
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join(" "))
        }
    }
}

/// d_p · m in normal form, as (monomial, ±1) terms.
///
/// Moving d_p into place past each smaller d_q picks up the bracket term
/// ε_{p,q} ∂_t with the alternating sign of the number of swaps so far.
pub fn left_mul_form(p: usize, m: &Monomial) -> Vec<(Monomial, i32)> {
    let mut out = Vec::new();
    let mut sign = 1;
    let mut bits = m.forms;
    while bits != 0 {
        let q = bits.trailing_zeros() as usize;
        if q > p {
            break;
        }
        if q == p {
            return out;
        }
        if let Some((e, t)) = eps_pairs(p, q) {
            let mut n = *m;
            n.forms &= !(1 << q);
            n.partials[t] += 1;
            out.push((n, sign * e));
        }
        sign = -sign;
        bits &= bits - 1;
    }
    let mut n = *m;
    n.forms |= 1 << p;
    out.push((n, sign));
    out
}

/// Sparse rational combination of PBW monomials.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct UElem {
    terms: BTreeMap<Monomial, Rational>,
}

impl UElem {
    pub fn zero() -> Self {
        UElem { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::monomial(Monomial::ONE, Rational::one())
    }

    pub fn monomial(m: Monomial, c: Rational) -> Self {
        let mut u = Self::zero();
        u.add_term(m, c);
        u
    }

    pub fn partial(c: usize) -> Self {
        Self::monomial(Monomial::partial(c), Rational::one())
    }

    /// d_{ij} with sign normalization for i > j.
    pub fn form(i: usize, j: usize) -> Result<Self> {
        let (fp, s) = FormPair::new(i, j)?;
        Ok(Self::monomial(Monomial::form(fp.index()), Rational::from_int(s as i64)))
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let s = e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
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

    pub fn iter(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        UElem { terms: self.terms.iter().map(|(m, x)| (*m, x * c)).collect() }
    }

    pub fn add_scaled(&mut self, other: &UElem, c: &Rational) {
        for (m, x) in other.iter() {
            self.add_term(*m, x * c);
        }
    }

    pub fn add(&self, other: &UElem) -> Self {
        let mut r = self.clone();
        r.add_scaled(other, &Rational::one());
        r
    }

    pub fn sub(&self, other: &UElem) -> Self {
        let mut r = self.clone();
        r.add_scaled(other, &-Rational::one());
        r
    }

    pub fn left_mul_form(&self, p: usize) -> Self {
        let mut r = Self::zero();
        for (m, c) in self.iter() {
            for (n, s) in left_mul_form(p, m) {
                r.add_term(n, c * &Rational::from_int(s as i64));
            }
        }
        r
    }

    /// d_{ij} · self, with sign normalization.
    pub fn left_mul_form_ij(&self, i: usize, j: usize) -> Result<Self> {
        let (fp, s) = FormPair::new(i, j)?;
        let r = self.left_mul_form(fp.index());
        Ok(if s < 0 { r.scale(&-Rational::one()) } else { r })
    }

    pub fn left_mul_partial(&self, c: usize) -> Self {
        UElem { terms: self.terms.iter().map(|(m, x)| (m.times_partial(c), x.clone())).collect() }
    }

    /// Monomial m times self: apply the forms of m from the right, then its partials.
    pub fn left_mul_monomial(&self, m: &Monomial) -> Self {
        let mut r = self.clone();
        for p in m.form_list().into_iter().rev() {
            r = r.left_mul_form(p);
        }
        UElem {
            terms: r.terms.into_iter().map(|(n, x)| (n.times_partials(&m.partials), x)).collect(),
        }
    }

    /// The product `self · other` in normal form.
    pub fn mul(&self, other: &UElem) -> Self {
        let mut r = Self::zero();
        for (m, c) in self.iter() {
            r.add_scaled(&other.left_mul_monomial(m), c);
        }
        r
    }

    pub fn height(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.height()).max()
    }

    /// The degree if all terms share one degree.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(|m| m.degree());
        let d = it.next()?;
        if it.all(|e| e == d) {
            Some(d)
        } else {
            None
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(self.iter().map(|(m, c)| m.to_json(c)).collect())
    }
}

impl fmt::Display for UElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.iter() {
            write_term(f, first, c, &m.to_string())?;
            first = false;
        }
        Ok(())
    }
}

/// Writes ` + c·body` style terms with unit coefficients suppressed.
pub(crate) fn write_term(
    f: &mut fmt::Formatter<'_>,
    first: bool,
    c: &Rational,
    body: &str,
) -> fmt::Result {
    let neg = c.signum() < 0;
    let a = c.abs();
    if first {
        if neg {
            write!(f, "-")?;
        }
    } else {
        write!(f, "{}", if neg { " - " } else { " + " })?;
    }
    if a.is_one() {
        write!(f, "{body}")
    } else if body == "1" {
        write!(f, "{a}")
    } else {
        write!(f, "{a} {body}")
    }
}

/// All PBW monomials of degree `d`, in the canonical order.
pub fn monomials_of_degree(d: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    for mask in 0u16..1024 {
        let h = mask.count_ones();
        if h > d || (d - h) % 2 != 0 {
            continue;
        }
        let k = ((d - h) / 2) as u8;
        for partials in compositions(k) {
            out.push(Monomial { partials, forms: mask });
        }
    }
    out.sort();
    out
}

/// All exponent vectors in ℕ⁵ summing to k.
pub fn compositions(k: u8) -> Vec<[u8; 5]> {
    let mut out = Vec::new();
    let mut cur = [0u8; 5];
    fn rec(pos: usize, left: u8, cur: &mut [u8; 5], out: &mut Vec<[u8; 5]>) {
        if pos == 4 {
            cur[4] = left;
            out.push(*cur);
            return;
        }
        for e in 0..=left {
            cur[pos] = e;
            rec(pos + 1, left - e, cur, out);
        }
    }
    rec(0, k, &mut cur, &mut out);
    out
}

/// JSON-friendly monomial record.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct MonomialRecord {
    pub partials: [u8; 5],
    pub forms: Vec<[u8; 2]>,
    pub coeff: Rational,
}

impl MonomialRecord {
    pub fn to_term(&self) -> Result<(Monomial, Rational)> {
        let mut m = Monomial { partials: self.partials, forms: 0 };
        let mut sign = 1;
        let mut list = Vec::new();
        for f in &self.forms {
            if f[0] == 0 || f[1] == 0 {
                return Err(Error::Parse("form indices are 1-based".into()));
            }
            let (fp, s) = FormPair::new(f[0] as usize - 1, f[1] as usize - 1)?;
            sign *= s;
            list.push(fp.index());
        }
        for w in list.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::Parse("forms must be strictly increasing".into()));
            }
        }
        for p in list {
            m.forms |= 1 << p;
        }
        Ok((m, &self.coeff * &Rational::from_int(sign as i64)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(i: usize, j: usize) -> UElem {
        UElem::form(i - 1, j - 1).unwrap()
    }

    fn p(c: usize) -> UElem {
        UElem::partial(c - 1)
    }

    #[test]
    fn epsilon_examples() {
        assert_eq!(epsilon_t(0, 1, 2, 3).unwrap(), Some((1, 4)));
        assert_eq!(epsilon_t(1, 0, 2, 3).unwrap(), Some((-1, 4)));
        assert_eq!(epsilon_t(0, 1, 0, 2).unwrap(), None);
        assert!(epsilon_t(0, 1, 2, 5).is_err());
    }

    #[test]
    fn product_examples() {
        // d34 d12 = -d12 d34 + p5
        let lhs = d(3, 4).mul(&d(1, 2));
        let rhs = d(1, 2).mul(&d(3, 4)).scale(&Rational::from_int(-1)).add(&p(5));
        assert_eq!(lhs, rhs);
        assert_eq!(lhs.to_string(), "-d12 d34 + p5");
        assert!(d(1, 2).mul(&d(1, 2)).is_zero());
        let x = d(1, 2).mul(&d(3, 4)).mul(&d(1, 2));
        assert_eq!(x, p(5).mul(&d(1, 2)));
    }

    #[test]
    fn degree_and_height() {
        let m = Monomial::new([1, 1, 0, 0, 0], &[]);
        assert_eq!((m.degree(), m.height()), (4, 0));
        let m = Monomial::new([0; 5], &[0, 1]);
        assert_eq!((m.degree(), m.height()), (2, 2));
        let m = Monomial::new([0, 0, 0, 0, 1], &[4, 5, 6]);
        assert_eq!((m.degree(), m.height()), (5, 3));
        assert_eq!(m.to_string(), "p5 d23 d24 d25");
    }

    #[test]
    fn reversed_pair_sign() {
        assert_eq!(d(2, 1), d(1, 2).scale(&Rational::from_int(-1)));
        assert!(UElem::form(2, 2).is_err());
    }

    #[test]
    fn anticommutator_all_pairs() {
        for a in 0..10 {
            let da = UElem::monomial(Monomial::form(a), Rational::one());
            assert!(da.mul(&da).is_zero());
            for b in 0..10 {
                if a == b {
                    continue;
                }
                let db = UElem::monomial(Monomial::form(b), Rational::one());
                let s = da.mul(&db).add(&db.mul(&da));
                let (i, j) = PAIRS[a];
                let (k, l) = PAIRS[b];
                let expect = match epsilon_t(i as usize, j as usize, k as usize, l as usize).unwrap() {
                    Some((e, t)) => UElem::partial(t).scale(&Rational::from_int(e as i64)),
                    None => UElem::zero(),
                };
                assert_eq!(s, expect, "pair {a} {b}");
            }
        }
    }

    #[test]
    fn monomial_order_is_degree_first() {
        let a = Monomial::new([1, 0, 0, 0, 0], &[]);
        let b = Monomial::new([0; 5], &[0, 1, 2]);
        assert!(a < b);
        let c = Monomial::new([0; 5], &[0, 9]);
        let e = Monomial::new([0; 5], &[1, 2]);
        assert!(c < e);
    }

    #[test]
    fn dimensions_of_graded_pieces() {
        assert_eq!(monomials_of_degree(0).len(), 1);
        assert_eq!(monomials_of_degree(1).len(), 10);
        assert_eq!(monomials_of_degree(2).len(), 50);
    }

    #[test]
    fn json_record_roundtrip_sign() {
        let rec = MonomialRecord { partials: [0, 0, 0, 0, 1], forms: vec![[2, 1]], coeff: Rational::new(1, 2) };
        let (m, c) = rec.to_term().unwrap();
        assert_eq!(m, Monomial::new([0, 0, 0, 0, 1], &[0]));
        assert_eq!(c, Rational::new(-1, 2));
        let j = m.to_json(&c);
        assert_eq!(j["forms"], serde_json::json!([[1, 2]]));
        assert_eq!(j["coeff"], "-1/2");
    }
}
