//! Sparse multivariate polynomials over a [`Field`], with named variables.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use super::scalar::Field;

/// Exponent vector. Ordered graded-lexicographically: lower total degree
/// first, then lexicographic on the exponents, so `x1^2 > x1*x2 > x2^2`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn var(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All monomials of total degree `degree` in `n` variables, in descending
/// graded-lex order (`x1^d` first).
pub fn monomials_of_degree(n: usize, degree: u32) -> Vec<Monomial> {
    fn rec(n: usize, left: u32, prefix: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if prefix.len() + 1 == n {
            prefix.push(left);
            out.push(Monomial(prefix.clone()));
            prefix.pop();
            return;
        }
        for e in (0..=left).rev() {
            prefix.push(e);
            rec(n, left - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        if degree == 0 {
            out.push(Monomial(Vec::new()));
        }
        return out;
    }
    rec(n, degree, &mut Vec::with_capacity(n), &mut out);
    out
}

/// Ordered list of variable names shared between polynomials.
#[derive(Clone, Debug)]
pub struct Vars(Arc<[String]>);

impl Vars {
    pub fn new<I, S>(names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Vars(names.into_iter().map(Into::into).collect::<Vec<_>>().into())
    }

    /// `prefix{start}, …, prefix{start+len-1}`.
    pub fn indexed(prefix: &str, start: usize, len: usize) -> Self {
        Vars::new((start..start + len).map(|i| format!("{prefix}{i}")))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }
}

impl PartialEq for Vars {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for Vars {}

#[derive(Clone, Debug)]
pub struct Poly<S> {
    vars: Vars,
    terms: BTreeMap<Monomial, S>,
}

impl<S: Field> PartialEq for Poly<S> {
    fn eq(&self, other: &Self) -> bool {
        self.vars == other.vars && self.terms == other.terms
    }
}

impl<S: Field> Poly<S> {
    pub fn zero(vars: &Vars) -> Self {
        Poly { vars: vars.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(vars: &Vars, c: S) -> Self {
        Self::monomial(vars, Monomial::one(vars.len()), c)
    }

    pub fn var(vars: &Vars, i: usize) -> Self {
        Self::monomial(vars, Monomial::var(vars.len(), i), S::one())
    }

    pub fn monomial(vars: &Vars, m: Monomial, c: S) -> Self {
        assert_eq!(m.0.len(), vars.len(), "monomial arity");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { vars: vars.clone(), terms }
    }

    /// Sums the given terms; repeated monomials are combined.
    pub fn from_terms<I>(vars: &Vars, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, S)>,
    {
        let mut p = Poly::zero(vars);
        for (m, c) in terms {
            assert_eq!(m.0.len(), vars.len(), "monomial arity");
            p.add_term(m, c);
        }
        p
    }

    /// `Σ coeffs[i] * x_i`.
    pub fn linear_form(vars: &Vars, coeffs: &[S]) -> Self {
        assert_eq!(coeffs.len(), vars.len());
        Poly::from_terms(vars, coeffs.iter().enumerate().map(|(i, c)| (Monomial::var(vars.len(), i), c.clone())))
    }

    pub fn add_term(&mut self, m: Monomial, c: S) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
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

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &S)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> S {
        self.terms.get(m).cloned().unwrap_or_else(S::zero)
    }

    /// Leading term in graded-lex order.
    pub fn leading_term(&self) -> Option<(&Monomial, &S)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    /// The common degree of all terms, if the polynomial is nonzero and
    /// homogeneous.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(Monomial::degree);
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.homogeneous_degree().is_some()
    }

    pub fn homogeneous_component(&self, degree: u32) -> Self {
        Poly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == degree)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        if c.is_zero() {
            return Poly::zero(&self.vars);
        }
        Poly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, a)| {
                    let mut a = a.clone();
                    a *= c;
                    (m.clone(), a)
                })
                .collect(),
        }
    }

    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Poly::zero(&self.vars);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.0[i] -= 1;
            let mut c2 = c.clone();
            c2 *= &S::from_i64(e as i64);
            out.terms.insert(m2, c2);
        }
        out
    }

    /// `Σ dir[i] ∂_i self`.
    pub fn directional_derivative(&self, dir: &[S]) -> Self {
        assert_eq!(dir.len(), self.nvars());
        let mut out = Poly::zero(&self.vars);
        for (i, d) in dir.iter().enumerate() {
            if d.is_zero() {
                continue;
            }
            for (m, c) in self.derivative(i).terms {
                let mut c = c;
                c *= d;
                out.add_term(m, c);
            }
        }
        out
    }

    pub fn gradient(&self) -> Vec<Self> {
        (0..self.nvars()).map(|i| self.derivative(i)).collect()
    }

    pub fn eval(&self, point: &[S]) -> S {
        assert_eq!(point.len(), self.nvars());
        let maxdeg = self.terms.keys().flat_map(|m| m.0.iter().copied()).max().unwrap_or(0);
        let powers: Vec<Vec<S>> = point
            .iter()
            .map(|x| {
                let mut v = Vec::with_capacity(maxdeg as usize + 1);
                v.push(S::one());
                for k in 1..=maxdeg as usize {
                    let mut next = v[k - 1].clone();
                    next *= x;
                    v.push(next);
                }
                v
            })
            .collect();
        let mut acc = S::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t *= &powers[i][e as usize];
                }
            }
            acc += &t;
        }
        acc
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Poly::constant(&self.vars, S::one());
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Substitutes `images[i]` for the i-th variable. All images must share
    /// one variable set, which becomes the variable set of the result.
    pub fn substitute(&self, images: &[Poly<S>]) -> Poly<S> {
        assert_eq!(images.len(), self.nvars(), "one image per variable");
        let target = images.first().map(|p| p.vars.clone()).unwrap_or_else(|| self.vars.clone());
        let maxdeg = self.terms.keys().flat_map(|m| m.0.iter().copied()).max().unwrap_or(0);
        let powers: Vec<Vec<Poly<S>>> = images
            .iter()
            .map(|img| {
                let mut v = vec![Poly::constant(&target, S::one())];
                for k in 1..=maxdeg as usize {
                    let next = &v[k - 1] * img;
                    v.push(next);
                }
                v
            })
            .collect();
        let mut out = Poly::zero(&target);
        for (m, c) in &self.terms {
            let mut t = Poly::constant(&target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = &t * &powers[i][e as usize];
                }
            }
            out = &out + &t;
        }
        out
    }

    /// Same coefficients, relabelled variables.
    pub fn with_vars(&self, vars: &Vars) -> Self {
        assert_eq!(vars.len(), self.nvars());
        Poly { vars: vars.clone(), terms: self.terms.clone() }
    }

    pub fn map_coeffs<T: Field>(&self, mut f: impl FnMut(&S) -> T) -> Poly<T> {
        let mut out = Poly::zero(&self.vars);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    /// Division with remainder by the linear form `Σ form[i] x_i`.
    ///
    /// The pivot variable is the first one with a nonzero coefficient; the
    /// remainder does not involve it. Returns `(quotient, remainder)`.
    pub fn div_rem_linear(&self, form: &[S]) -> (Self, Self) {
        assert_eq!(form.len(), self.nvars());
        let p = form.iter().position(|c| !c.is_zero()).expect("division by the zero linear form");
        let lead_inv = form[p].inv();
        let mut rem = self.clone();
        let mut quot = Poly::zero(&self.vars);
        loop {
            let top = rem.terms.keys().map(|m| m.0[p]).max().unwrap_or(0);
            if top == 0 {
                break;
            }
            let level: Vec<(Monomial, S)> =
                rem.terms.iter().filter(|(m, _)| m.0[p] == top).map(|(m, c)| (m.clone(), c.clone())).collect();
            for (m, c) in level {
                rem.terms.remove(&m);
                let mut base = m;
                base.0[p] -= 1;
                let mut q = c;
                q *= &lead_inv;
                // rem -= q * base * (form - form[p] x_p)
                for (i, a) in form.iter().enumerate() {
                    if i == p || a.is_zero() {
                        continue;
                    }
                    let mut mm = base.clone();
                    mm.0[i] += 1;
                    let mut t = q.clone();
                    t *= a;
                    rem.add_term(mm, -t);
                }
                quot.add_term(base, q);
            }
        }
        (quot, rem)
    }

    /// `self += c·other`.
    pub fn add_scaled(&mut self, other: &Poly<S>, c: &S) {
        assert_eq!(self.vars, other.vars, "variable sets differ");
        if c.is_zero() {
            return;
        }
        for (m, a) in &other.terms {
            let mut t = a.clone();
            t *= c;
            self.add_term(m.clone(), t);
        }
    }

    /// Whether `Σ form[i] x_i` divides `self` exactly.
    pub fn divisible_by_linear(&self, form: &[S]) -> bool {
        self.div_rem_linear(form).1.is_zero()
    }
}

/// Determinant of a square matrix of polynomials by Laplace expansion along
/// the last row, memoized over column subsets. Intended for n ≤ 8.
pub fn poly_determinant<S: Field>(rows: &[Vec<Poly<S>>]) -> Poly<S> {
    let n = rows.len();
    assert!(n > 0 && rows.iter().all(|r| r.len() == n), "square, nonempty matrix");
    assert!(n <= 16, "expansion is exponential in n");
    let vars = rows[0][0].vars.clone();
    // minors[mask] = det(rows 0..|mask|, columns in mask)
    let mut minors: Vec<Option<Poly<S>>> = vec![None; 1 << n];
    minors[0] = Some(Poly::constant(&vars, S::one()));
    for mask in 1usize..1 << n {
        let k = mask.count_ones() as usize;
        let row = &rows[k - 1];
        let mut acc = Poly::zero(&vars);
        for (pos, j) in (0..n).filter(|j| mask >> j & 1 == 1).enumerate() {
            if row[j].is_zero() {
                continue;
            }
            let Some(minor) = &minors[mask & !(1 << j)] else { continue };
            if minor.is_zero() {
                continue;
            }
            let term = &row[j] * minor;
            let sign = if (k - 1 + pos).is_multiple_of(2) { S::one() } else { -S::one() };
            acc.add_scaled(&term, &sign);
        }
        minors[mask] = Some(acc);
    }
    minors.pop().flatten().expect("full mask computed")
}

impl<'a, S: Field> Add<&'a Poly<S>> for &'a Poly<S> {
    type Output = Poly<S>;
    fn add(self, other: &'a Poly<S>) -> Poly<S> {
        assert_eq!(self.vars, other.vars, "variable sets differ");
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<'a, S: Field> Sub<&'a Poly<S>> for &'a Poly<S> {
    type Output = Poly<S>;
    fn sub(self, other: &'a Poly<S>) -> Poly<S> {
        assert_eq!(self.vars, other.vars, "variable sets differ");
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl<'a, S: Field> Mul<&'a Poly<S>> for &'a Poly<S> {
    type Output = Poly<S>;
    fn mul(self, other: &'a Poly<S>) -> Poly<S> {
        assert_eq!(self.vars, other.vars, "variable sets differ");
        let mut out = Poly::zero(&self.vars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let mut c = c1.clone();
                c *= c2;
                out.add_term(m1.mul(m2), c);
            }
        }
        out
    }
}

impl<S: Field> Neg for &Poly<S> {
    type Output = Poly<S>;
    fn neg(self) -> Poly<S> {
        Poly { vars: self.vars.clone(), terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect() }
    }
}

impl<S: Field + fmt::Display> fmt::Display for Poly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            let factors: Vec<String> =
                m.0.iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(i, &e)| {
                        let name = &self.vars.names()[i];
                        if e == 1 {
                            name.clone()
                        } else {
                            format!("{name}^{e}")
                        }
                    })
                    .collect();
            if factors.is_empty() {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "({c})*{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}
