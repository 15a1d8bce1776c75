//! The graded pieces g₋₂ ⊕ g₋₁ ⊕ g₀ ⊕ g₁ of E(5,10) and their brackets.
//!
//! g₋₂ is spanned by ∂_i, g₋₁ by the constant forms d_{ij}, g₀ by x_a∂_b
//! (traceless combinations) and g₁ by closed linear forms x_k d_{ij}.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{domain, Error, Result};
use crate::linalg::{kernel, SparseRationalMatrix};
use crate::rational::Rational;
use crate::uminus::{eps_pairs, pair_index, PAIRS};

/// A basis symbol of one graded piece.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Gen {
    /// ∂_i
    P(usize),
    /// d_p, p a pair index
    D(usize),
    /// x_a ∂_b
    E(usize, usize),
    /// x_k d_p
    X(usize, usize),
}

impl Gen {
    pub fn degree(self) -> i32 {
        match self {
            Gen::P(_) => -2,
            Gen::D(_) => -1,
            Gen::E(..) => 0,
            Gen::X(..) => 1,
        }
    }

    pub fn is_odd(self) -> bool {
        self.degree() % 2 != 0
    }

    pub fn gl_weight(self) -> [i32; 5] {
        let mut w = [0; 5];
        match self {
            Gen::P(i) => w[i] -= 1,
            Gen::D(p) => {
                w[PAIRS[p].0 as usize] += 1;
                w[PAIRS[p].1 as usize] += 1;
            }
            Gen::E(a, b) => {
                w[a] += 1;
                w[b] -= 1;
            }
            Gen::X(k, p) => {
                w[k] += 1;
                w[PAIRS[p].0 as usize] += 1;
                w[PAIRS[p].1 as usize] += 1;
            }
        }
        w
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pr = |p: usize| format!("{}{}", PAIRS[p].0 + 1, PAIRS[p].1 + 1);
        match *self {
            Gen::P(i) => write!(f, "p{}", i + 1),
            Gen::D(p) => write!(f, "d{}", pr(p)),
            Gen::E(a, b) => write!(f, "x{}p{}", a + 1, b + 1),
            Gen::X(k, p) => write!(f, "x{}d{}", k + 1, pr(p)),
        }
    }
}

/// Bracket of two basis symbols as a list of (symbol, coefficient).
pub fn bracket_gen(a: Gen, b: Gen) -> Result<Vec<(Gen, i32)>> {
    use Gen::*;
    if a.degree() + b.degree() > 1 {
        return Err(Error::UnsupportedDegree(format!("[{a}, {b}] lies in degree 2")));
    }
    let swap = |v: Vec<(Gen, i32)>, s: i32| v.into_iter().map(|(g, c)| (g, s * c)).collect::<Vec<_>>();
    // super-antisymmetry: [b, a] = -(-1)^{|a||b|} [a, b]
    let anti = if a.is_odd() && b.is_odd() { 1 } else { -1 };
    let out = match (a, b) {
        (P(_), P(_)) | (P(_), D(_)) | (D(_), P(_)) => vec![],
        (D(p), D(q)) => match eps_pairs(p, q) {
            Some((s, t)) => vec![(P(t), s)],
            None => vec![],
        },
        (E(x, y), P(c)) => {
            if x == c {
                vec![(P(y), -1)]
            } else {
                vec![]
            }
        }
        (E(x, y), D(p)) => {
            let (l, m) = (PAIRS[p].0 as usize, PAIRS[p].1 as usize);
            let mut v = Vec::new();
            if y == l {
                if let Some((q, s)) = pair_index(x, m) {
                    v.push((D(q), s));
                }
            }
            if y == m {
                if let Some((q, s)) = pair_index(l, x) {
                    v.push((D(q), s));
                }
            }
            v
        }
        (E(a1, b1), E(a2, b2)) => {
            let mut v = Vec::new();
            if b1 == a2 {
                v.push((E(a1, b2), 1));
            }
            if b2 == a1 {
                v.push((E(a2, b1), -1));
            }
            v
        }
        (E(x, y), X(k, p)) => {
            let mut v = Vec::new();
            if y == k {
                v.push((X(x, p), 1));
            }
            for (g, s) in bracket_gen(E(x, y), D(p))? {
                if let D(q) = g {
                    v.push((X(k, q), s));
                }
            }
            v
        }
        (X(k, p), P(c)) => {
            if k == c {
                vec![(D(p), -1)]
            } else {
                vec![]
            }
        }
        (X(k, p), D(q)) => match eps_pairs(p, q) {
            Some((s, t)) => vec![(E(k, t), s)],
            None => vec![],
        },
        (P(_), _) | (D(_), _) => swap(bracket_gen(b, a)?, anti),
        (X(..), _) => swap(bracket_gen(b, a)?, anti),
    };
    Ok(merge(out))
}

fn merge(v: Vec<(Gen, i32)>) -> Vec<(Gen, i32)> {
    let mut m: BTreeMap<Gen, i32> = BTreeMap::new();
    for (g, c) in v {
        *m.entry(g).or_default() += c;
    }
    m.into_iter().filter(|(_, c)| *c != 0).collect()
}

/// A sparse combination of basis symbols across degrees −2..1.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SuperElement {
    terms: BTreeMap<Gen, Rational>,
}

impl SuperElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn gen(g: Gen) -> Self {
        let mut s = Self::zero();
        s.add_term(g, Rational::one());
        s
    }

    pub fn partial(i: usize) -> Self {
        Self::gen(Gen::P(i))
    }

    /// d_{ij} with sign normalization.
    pub fn form(i: usize, j: usize) -> Result<Self> {
        let Some((p, s)) = pair_index(i, j) else {
            return domain(format!("bad form indices ({i},{j})"));
        };
        Ok(Self::gen(Gen::D(p)).scale(&Rational::from_int(s as i64)))
    }

    pub fn e(a: usize, b: usize) -> Self {
        Self::gen(Gen::E(a, b))
    }

    /// h_i = e_{ii} − e_{i+1,i+1}.
    pub fn h(i: usize) -> Self {
        let mut s = Self::e(i, i);
        s.add_term(Gen::E(i + 1, i + 1), Rational::from_int(-1));
        s
    }

    /// x_k d_{ij} with sign normalization (not necessarily closed).
    pub fn xform(k: usize, i: usize, j: usize) -> Result<Self> {
        let Some((p, s)) = pair_index(i, j) else {
            return domain(format!("bad form indices ({i},{j})"));
        };
        Ok(Self::gen(Gen::X(k, p)).scale(&Rational::from_int(s as i64)))
    }

    /// The lowest weight vector x₅d₄₅ of g₁.
    pub fn x5d45() -> Self {
        Self::gen(Gen::X(4, 9))
    }

    pub fn add_term(&mut self, g: Gen, c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(g).or_default();
        *e += &c;
        if e.is_zero() {
            self.terms.remove(&g);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Gen, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, g: Gen) -> Rational {
        self.terms.get(&g).cloned().unwrap_or_default()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut s = Self::zero();
        for (g, x) in &self.terms {
            s.add_term(*g, x * c);
        }
        s
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut s = self.clone();
        for (g, x) in &o.terms {
            s.add_term(*g, x.clone());
        }
        s
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&Rational::from_int(-1)))
    }

    /// Component of a given degree.
    pub fn component(&self, deg: i32) -> Self {
        SuperElement {
            terms: self.terms.iter().filter(|(g, _)| g.degree() == deg).map(|(g, c)| (*g, c.clone())).collect(),
        }
    }

    pub fn degrees(&self) -> Vec<i32> {
        let mut d: Vec<i32> = self.terms.keys().map(|g| g.degree()).collect();
        d.sort();
        d.dedup();
        d
    }

    /// Parity if homogeneous.
    pub fn parity(&self) -> Option<bool> {
        let mut it = self.terms.keys().map(|g| g.is_odd());
        let p = it.next()?;
        if it.all(|q| q == p) {
            Some(p)
        } else {
            None
        }
    }

    /// Trace of the g₀ component.
    pub fn g0_trace(&self) -> Rational {
        let mut t = Rational::zero();
        for (g, c) in &self.terms {
            if let Gen::E(a, b) = g {
                if a == b {
                    t += c;
                }
            }
        }
        t
    }

    /// Whether the g₁ component is a closed form.
    pub fn is_closed(&self) -> bool {
        let v = self.g1_coords();
        closedness_rows().iter().all(|row| {
            let mut s = Rational::zero();
            for (c, x) in row {
                s += &(x * &v[*c]);
            }
            s.is_zero()
        })
    }

    /// Coordinates of the g₁ component over the 50 symbols x_k d_p (index 10k + p).
    pub fn g1_coords(&self) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); 50];
        for (g, c) in &self.terms {
            if let Gen::X(k, p) = g {
                v[10 * k + p] = c.clone();
            }
        }
        v
    }

    /// Terms of the g₁ component as (k, p, c).
    pub fn g1_terms(&self) -> Vec<(usize, usize, Rational)> {
        self.terms
            .iter()
            .filter_map(|(g, c)| match g {
                Gen::X(k, p) => Some((*k, *p, c.clone())),
                _ => None,
            })
            .collect()
    }

    /// Terms of the g₀ component as (a, b, c).
    pub fn g0_terms(&self) -> Vec<(usize, usize, Rational)> {
        self.terms
            .iter()
            .filter_map(|(g, c)| match g {
                Gen::E(a, b) => Some((*a, *b, c.clone())),
                _ => None,
            })
            .collect()
    }

    /// Weight in gl₅ coordinates if weight-homogeneous.
    pub fn gl_weight(&self) -> Option<[i32; 5]> {
        let mut it = self.terms.keys().map(|g| g.gl_weight());
        let w = it.next()?;
        if it.all(|v| v == w) {
            Some(w)
        } else {
            None
        }
    }
}

impl fmt::Display for SuperElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (n, (g, c)) in self.terms.iter().enumerate() {
            crate::uminus::write_term(f, n == 0, c, &g.to_string())?;
        }
        Ok(())
    }
}

/// Bilinear super-bracket. Errors if any pair of components lands in degree 2.
pub fn bracket(a: &SuperElement, b: &SuperElement) -> Result<SuperElement> {
    let mut out = SuperElement::zero();
    for (x, c) in &a.terms {
        for (y, d) in &b.terms {
            let cd = c * d;
            for (g, s) in bracket_gen(*x, *y)? {
                out.add_term(g, &cd * &Rational::from_int(s as i64));
            }
        }
    }
    Ok(out)
}

/// [a,[b,c]] − [[a,b],c] − (−1)^{|a||b|}[b,[a,c]], summed over homogeneous components of a and b.
pub fn jacobi_residual(a: &SuperElement, b: &SuperElement, c: &SuperElement) -> Result<SuperElement> {
    let mut out = SuperElement::zero();
    for pa in [false, true] {
        let ac = parity_part(a, pa);
        if ac.is_zero() {
            continue;
        }
        for pb in [false, true] {
            let bc = parity_part(b, pb);
            if bc.is_zero() {
                continue;
            }
            let s = if pa && pb { -1 } else { 1 };
            let t1 = bracket(&ac, &bracket(&bc, c)?)?;
            let t2 = bracket(&bracket(&ac, &bc)?, c)?;
            let t3 = bracket(&bc, &bracket(&ac, c)?)?.scale(&Rational::from_int(s));
            out = out.add(&t1.sub(&t2).sub(&t3));
        }
    }
    Ok(out)
}

fn parity_part(a: &SuperElement, odd: bool) -> SuperElement {
    SuperElement {
        terms: a.terms.iter().filter(|(g, _)| g.is_odd() == odd).map(|(g, c)| (*g, c.clone())).collect(),
    }
}

/// Rows of the closedness conditions on the 50 coordinates: one per triple a<b<c.
fn closedness_rows() -> Vec<Vec<(usize, Rational)>> {
    let mut rows = Vec::new();
    for a in 0..5 {
        for b in a + 1..5 {
            for c in b + 1..5 {
                // d(x_k dx_l∧dx_m) = dx_k∧dx_l∧dx_m
                let mut row = Vec::new();
                for (k, (l, m), s) in [(a, (b, c), 1i64), (b, (a, c), -1), (c, (a, b), 1)] {
                    let (p, _) = pair_index(l, m).unwrap();
                    row.push((10 * k + p, Rational::from_int(s)));
                }
                row.sort_by_key(|e| e.0);
                rows.push(row);
            }
        }
    }
    rows
}

/// A basis of g₁: the 40 closed linear two-forms, in reduced echelon form over the
/// coordinates x_k d_p (so each x_k d_p with k ∈ p appears as a basis element).
pub fn g1_basis() -> Vec<SuperElement> {
    let mut m = SparseRationalMatrix::new(10, 50);
    for (r, row) in closedness_rows().into_iter().enumerate() {
        for (c, x) in row {
            m.push(r, c, x);
        }
    }
    kernel(&m)
        .into_iter()
        .map(|v| {
            let mut s = SuperElement::zero();
            for (i, x) in v.into_iter().enumerate() {
                s.add_term(Gen::X(i / 10, i % 10), x);
            }
            s
        })
        .collect()
}

/// Parses generator names: `p3` (∂₃), `d12`, `x1p2` (x₁∂₂), `x5d45` or `x5*d45`,
/// `E2` (x₂∂₃), `F2` (x₃∂₂), `H2` (h₂).
pub fn parse_generator(s: &str) -> Result<SuperElement> {
    let t = s.trim().replace('*', "");
    let err = || Error::Parse(format!("unknown generator {s:?}"));
    let digits: Vec<usize> = t
        .chars()
        .filter(|c| c.is_ascii_digit())
        .map(|c| c.to_digit(10).unwrap() as usize)
        .collect();
    if digits.iter().any(|&d| d == 0 || d > 5) {
        return Err(err());
    }
    let idx: Vec<usize> = digits.iter().map(|d| d - 1).collect();
    let letters: String = t.chars().filter(|c| !c.is_ascii_digit()).collect();
    match (letters.as_str(), idx.as_slice()) {
        ("p", [i]) => Ok(SuperElement::partial(*i)),
        ("d", [i, j]) => SuperElement::form(*i, *j),
        ("xp", [a, b]) => Ok(SuperElement::e(*a, *b)),
        ("xd", [k, i, j]) => {
            let x = SuperElement::xform(*k, *i, *j)?;
            if !x.is_closed() {
                return domain(format!("{s} is not a closed form"));
            }
            Ok(x)
        }
        ("E", [i]) if *i < 4 => Ok(SuperElement::e(*i, i + 1)),
        ("F", [i]) if *i < 4 => Ok(SuperElement::e(i + 1, *i)),
        ("H", [i]) if *i < 4 => Ok(SuperElement::h(*i)),
        _ => Err(err()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn g(s: &str) -> SuperElement {
        parse_generator(s).unwrap()
    }

    #[test]
    fn bracket_table_examples() {
        assert_eq!(bracket(&g("d12"), &g("d34")).unwrap(), g("p5"));
        assert_eq!(bracket(&g("x1p2"), &g("d23")).unwrap(), g("d13"));
        assert_eq!(bracket(&g("x5d45"), &g("p5")).unwrap(), g("d45").scale(&Rational::from_int(-1)));
        assert_eq!(bracket(&g("x5d45"), &g("d12")).unwrap(), g("x5p3"));
        assert!(matches!(bracket(&g("x5d45"), &g("x4d45")), Err(Error::UnsupportedDegree(_))));
    }

    #[test]
    fn g1_dimension_and_closedness() {
        let b = g1_basis();
        assert_eq!(b.len(), 40);
        assert!(b.contains(&SuperElement::x5d45()));
        assert!(b.iter().all(|x| x.is_closed()));
        assert!(SuperElement::x5d45().is_closed());
        assert!(!SuperElement::xform(0, 1, 2).unwrap().is_closed());
        assert!(parse_generator("x1d23").is_err());
    }

    #[test]
    fn jacobi_examples() {
        for (a, b, c) in [("p1", "d12", "d34"), ("x1p2", "d23", "d45"), ("x5d45", "p4", "d12")] {
            assert!(jacobi_residual(&g(a), &g(b), &g(c)).unwrap().is_zero());
        }
    }

    fn spanning_set() -> Vec<SuperElement> {
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

    #[test]
    fn jacobi_with_two_negative_entries() {
        let all = spanning_set();
        let neg = &all[..15];
        for a in neg {
            for b in neg {
                for c in &all {
                    for (x, y, z) in [(a, b, c), (a, c, b), (c, a, b)] {
                        let r = jacobi_residual(x, y, z).unwrap();
                        assert!(r.is_zero(), "{x} | {y} | {z}: {r}");
                    }
                }
            }
        }
    }

    #[test]
    fn jacobi_random_triples() {
        let all = spanning_set();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut checked = 0;
        while checked < 10_000 {
            let pick = |r: &mut ChaCha8Rng| &all[r.gen_range(0..all.len())];
            let (a, b, c) = (pick(&mut rng), pick(&mut rng), pick(&mut rng));
            match jacobi_residual(a, b, c) {
                Ok(r) => assert!(r.is_zero(), "{a} | {b} | {c}"),
                Err(Error::UnsupportedDegree(_)) => {}
                Err(e) => panic!("{e}"),
            }
            checked += 1;
        }
    }

    #[test]
    fn g0_outputs_are_traceless() {
        for x in g1_basis() {
            for q in 0..10 {
                let y = bracket(&x, &SuperElement::gen(Gen::D(q))).unwrap();
                assert!(y.g0_trace().is_zero(), "[{x}, d{q}]");
            }
        }
    }

    #[test]
    fn g1_is_a_g0_module_generated_by_lowest_vector() {
        use crate::linalg::Echelon;
        let basis = g1_basis();
        let mut span = Echelon::new(50);
        for b in &basis {
            span.insert(coords(b));
        }
        for b in &basis {
            for i in 0..4 {
                for e in [SuperElement::e(i, i + 1), SuperElement::e(i + 1, i)] {
                    let y = bracket(&e, b).unwrap();
                    assert!(span.reduce(coords(&y)).is_empty());
                }
            }
        }
        // raising operators applied to x5d45 span all of g₁
        let mut gen = Echelon::new(50);
        let mut frontier = vec![SuperElement::x5d45()];
        gen.insert(coords(&frontier[0]));
        while let Some(v) = frontier.pop() {
            for i in 0..4 {
                let y = bracket(&SuperElement::e(i, i + 1), &v).unwrap();
                if !y.is_zero() && gen.insert(coords(&y)) {
                    frontier.push(y);
                }
            }
        }
        assert_eq!(gen.rank(), 40);
    }

    fn coords(x: &SuperElement) -> Vec<(usize, Rational)> {
        x.g1_coords().into_iter().enumerate().filter(|(_, c)| !c.is_zero()).collect()
    }
}
