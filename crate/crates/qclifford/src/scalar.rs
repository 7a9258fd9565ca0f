//! Exact arithmetic in Q and in the rational function field Q(s, u).
//!
//! The variable `s` represents q^{1/N} for the session-wide rank parameter
//! N (so q = s^N), which keeps every coefficient Laurent in `s` instead of
//! carrying fractional powers of q. The variable `u` is a second independent
//! transcendental: it plays the role of the twist parameter λ during
//! classification runs, and of the Clifford constant c when λ is pinned to
//! its critical value.
//!
//! `Scalar` is a reduced fraction num/den of polynomials in Q[s, u]. The
//! canonical form has gcd(num, den) = 1 and den monic in the lexicographic
//! term order (s before u), so equality is plain structural equality.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

/// Arbitrary-precision rational number.
pub type Rat = BigRational;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ScalarError {
    #[error("zero divisor")]
    ZeroDivisor,
    #[error("bad specialization point")]
    BadSpecialization,
    #[error("parse error: {0}")]
    Parse(String),
}

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Exponent pair of a monomial s^es · u^eu. Ordered lexicographically with
/// `es` major; the maximal term of a polynomial is its leading term.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub struct Exp {
    pub es: u32,
    pub eu: u32,
}

impl Exp {
    pub const ZERO: Exp = Exp { es: 0, eu: 0 };

    fn plus(self, other: Exp) -> Exp {
        Exp {
            es: self.es + other.es,
            eu: self.eu + other.eu,
        }
    }

    fn minus(self, other: Exp) -> Option<Exp> {
        if self.es >= other.es && self.eu >= other.eu {
            Some(Exp {
                es: self.es - other.es,
                eu: self.eu - other.eu,
            })
        } else {
            None
        }
    }
}

/// Polynomial in Q[s, u]. Invariant: no stored coefficient is zero.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct MPoly {
    terms: BTreeMap<Exp, Rat>,
}

impl MPoly {
    pub fn zero() -> Self {
        MPoly::default()
    }

    pub fn one() -> Self {
        MPoly::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Exp::ZERO, c);
        }
        MPoly { terms }
    }

    pub fn monomial(exp: Exp, c: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        MPoly { terms }
    }

    pub fn var_s() -> Self {
        Self::monomial(Exp { es: 1, eu: 0 }, Rat::one())
    }

    pub fn var_u() -> Self {
        Self::monomial(Exp { es: 0, eu: 1 }, Rat::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&Exp::ZERO)
                .map_or(false, |c| c.is_one())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.contains_key(&Exp::ZERO))
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exp, &Rat)> {
        self.terms.iter()
    }

    pub fn leading(&self) -> Option<(&Exp, &Rat)> {
        self.terms.iter().next_back()
    }

    pub fn deg_s(&self) -> u32 {
        self.terms.keys().map(|e| e.es).max().unwrap_or(0)
    }

    pub fn deg_u(&self) -> u32 {
        self.terms.keys().map(|e| e.eu).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.es + e.eu).max().unwrap_or(0)
    }

    fn min_exp(&self) -> Exp {
        let es = self.terms.keys().map(|e| e.es).min().unwrap_or(0);
        let eu = self.terms.keys().map(|e| e.eu).min().unwrap_or(0);
        Exp { es, eu }
    }

    fn insert_add(&mut self, exp: Exp, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert_add(*e, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert_add(*e, -c.clone());
        }
        out
    }

    pub fn neg(&self) -> MPoly {
        MPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect(),
        }
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        if self.is_zero() || other.is_zero() {
            return MPoly::zero();
        }
        if self.is_one() {
            return other.clone();
        }
        if other.is_one() {
            return self.clone();
        }
        let mut out = MPoly::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                out.insert_add(ea.plus(*eb), ca * cb);
            }
        }
        out
    }

    pub fn mul_rat(&self, c: &Rat) -> MPoly {
        if c.is_zero() {
            return MPoly::zero();
        }
        MPoly {
            terms: self.terms.iter().map(|(e, k)| (*e, k * c)).collect(),
        }
    }

    fn mul_monomial(&self, exp: Exp, c: &Rat) -> MPoly {
        if c.is_zero() {
            return MPoly::zero();
        }
        MPoly {
            terms: self
                .terms
                .iter()
                .map(|(e, k)| (e.plus(exp), k * c))
                .collect(),
        }
    }

    /// Shift all exponents down by `exp`; every term must be divisible.
    fn shift_down(&self, exp: Exp) -> MPoly {
        MPoly {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.minus(exp).expect("monomial does not divide"), c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> MPoly {
        let mut out = MPoly::one();
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Exact division; `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &MPoly) -> Option<MPoly> {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(MPoly::zero());
        }
        if d.is_one() {
            return Some(self.clone());
        }
        if d.is_monomial() {
            let (ed, cd) = d.leading().unwrap();
            let mut terms = BTreeMap::new();
            for (e, c) in &self.terms {
                terms.insert(e.minus(*ed)?, c / cd);
            }
            return Some(MPoly { terms });
        }
        let mut rem = self.clone();
        let mut quot = MPoly::zero();
        let (ed, cd) = {
            let (e, c) = d.leading().unwrap();
            (*e, c.clone())
        };
        while !rem.is_zero() {
            let (er, cr) = {
                let (e, c) = rem.leading().unwrap();
                (*e, c.clone())
            };
            let e = er.minus(ed)?;
            let c = &cr / &cd;
            quot.insert_add(e, c.clone());
            rem = rem.sub(&d.mul_monomial(e, &c));
        }
        Some(quot)
    }

    /// Exact evaluation at (s, u) = (s_val, u_val).
    pub fn eval(&self, s_val: &Rat, u_val: &Rat) -> Rat {
        let mut pow_s: BTreeMap<u32, Rat> = BTreeMap::new();
        let mut pow_u: BTreeMap<u32, Rat> = BTreeMap::new();
        let mut out = Rat::zero();
        for (e, c) in &self.terms {
            let ps = pow_s
                .entry(e.es)
                .or_insert_with(|| rat_pow(s_val, e.es))
                .clone();
            let pu = pow_u
                .entry(e.eu)
                .or_insert_with(|| rat_pow(u_val, e.eu))
                .clone();
            out += c * ps * pu;
        }
        out
    }

    pub fn derivative_u(&self) -> MPoly {
        let mut out = MPoly::zero();
        for (e, c) in &self.terms {
            if e.eu > 0 {
                out.insert_add(
                    Exp {
                        es: e.es,
                        eu: e.eu - 1,
                    },
                    c * Rat::from_integer(BigInt::from(e.eu)),
                );
            }
        }
        out
    }

    /// Coefficients of `self` as a polynomial in u (index = power of u).
    fn u_coeffs(&self) -> Vec<MPoly> {
        let mut out = vec![MPoly::zero(); self.deg_u() as usize + 1];
        for (e, c) in &self.terms {
            out[e.eu as usize].insert_add(Exp { es: e.es, eu: 0 }, c.clone());
        }
        out
    }

    fn from_u_coeffs(coeffs: Vec<MPoly>) -> MPoly {
        let mut out = MPoly::zero();
        for (k, c) in coeffs.into_iter().enumerate() {
            for (e, r) in c.terms {
                out.insert_add(
                    Exp {
                        es: e.es,
                        eu: e.eu + k as u32,
                    },
                    r,
                );
            }
        }
        out
    }

    /// Unit normalization for gcd results: integer-primitive with positive
    /// leading coefficient.
    fn unit_normal(&self) -> MPoly {
        if self.is_zero() {
            return MPoly::zero();
        }
        let content = self.rat_content();
        let scaled = self.mul_rat(&content.recip());
        if scaled.leading().unwrap().1.is_negative() {
            scaled.neg()
        } else {
            scaled
        }
    }

    /// Positive rational c such that self/c has coprime integer coefficients.
    fn rat_content(&self) -> Rat {
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            num_gcd = num_gcd.gcd(c.numer());
            den_lcm = den_lcm.lcm(c.denom());
        }
        Rat::new(num_gcd, den_lcm)
    }
}

fn rat_pow(base: &Rat, k: u32) -> Rat {
    let mut out = Rat::one();
    for _ in 0..k {
        out *= base;
    }
    out
}

// ---- polynomial gcd ----

/// Gcd in Q[s, u], unit-normalized (integer-primitive, positive leading
/// coefficient). Content/primitive-part recursion: polynomials are viewed in
/// (Q[s])[u] and reduced by a primitive pseudo-remainder sequence, with
/// univariate integer PRS at the bottom.
pub fn mpoly_gcd(a: &MPoly, b: &MPoly) -> MPoly {
    if a.is_zero() {
        return b.unit_normal();
    }
    if b.is_zero() {
        return a.unit_normal();
    }
    // Common monomial factor first; it also covers the frequent case where
    // one side is a pure monomial (denominators are usually powers of s).
    let ma = a.min_exp();
    let mb = b.min_exp();
    let shift = Exp {
        es: ma.es.min(mb.es),
        eu: ma.eu.min(mb.eu),
    };
    if a.is_monomial() || b.is_monomial() {
        return MPoly::monomial(shift, Rat::one());
    }
    let a = a.shift_down(shift);
    let b = b.shift_down(shift);
    let core = if a.deg_u() == 0 && b.deg_u() == 0 {
        gcd_univar_s(&a, &b)
    } else {
        gcd_bivar(&a, &b)
    };
    core.mul_monomial(shift, &Rat::one()).unit_normal()
}

/// Gcd of two univariate polynomials in s via integer primitive PRS.
fn gcd_univar_s(a: &MPoly, b: &MPoly) -> MPoly {
    let to_int = |p: &MPoly| -> Vec<BigInt> {
        let content = p.rat_content();
        let prim = p.mul_rat(&content.recip());
        let mut coeffs = vec![BigInt::zero(); prim.deg_s() as usize + 1];
        for (e, c) in prim.terms() {
            debug_assert!(c.denom().is_one());
            coeffs[e.es as usize] = c.numer().clone();
        }
        coeffs
    };
    let g = int_poly_gcd(to_int(a), to_int(b));
    let mut out = MPoly::zero();
    for (k, c) in g.into_iter().enumerate() {
        out.insert_add(
            Exp {
                es: k as u32,
                eu: 0,
            },
            Rat::from_integer(c),
        );
    }
    out
}

fn int_trim(p: &mut Vec<BigInt>) {
    while p.last().map_or(false, |c| c.is_zero()) {
        p.pop();
    }
}

fn int_content(p: &[BigInt]) -> BigInt {
    p.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c))
}

fn int_primitive(mut p: Vec<BigInt>) -> Vec<BigInt> {
    let c = int_content(&p);
    if !c.is_zero() && !c.is_one() {
        for k in &mut p {
            *k = &*k / &c;
        }
    }
    p
}

/// Primitive PRS gcd over Z.
fn int_poly_gcd(a: Vec<BigInt>, b: Vec<BigInt>) -> Vec<BigInt> {
    let mut f = int_primitive(a);
    let mut g = int_primitive(b);
    int_trim(&mut f);
    int_trim(&mut g);
    if f.len() < g.len() {
        std::mem::swap(&mut f, &mut g);
    }
    while !g.is_empty() {
        // pseudo-remainder of f by g
        let mut r = f.clone();
        let lg = g.last().unwrap().clone();
        while r.len() >= g.len() && !r.is_empty() {
            let lr = r.last().unwrap().clone();
            let shift = r.len() - g.len();
            for c in r.iter_mut() {
                *c = &*c * &lg;
            }
            for (k, gc) in g.iter().enumerate() {
                r[k + shift] -= gc * &lr;
            }
            int_trim(&mut r);
        }
        f = g;
        g = int_primitive(r);
    }
    let mut f = int_primitive(f);
    if f.last().map_or(false, |c| c.is_negative()) {
        for c in &mut f {
            *c = -c.clone();
        }
    }
    f
}

/// Gcd of bivariate polynomials viewed in (Q[s])[u].
fn gcd_bivar(a: &MPoly, b: &MPoly) -> MPoly {
    let content_u = |p: &MPoly| -> MPoly {
        p.u_coeffs()
            .into_iter()
            .filter(|c| !c.is_zero())
            .fold(MPoly::zero(), |acc, c| {
                if acc.is_one() {
                    acc
                } else {
                    mpoly_gcd(&acc, &c)
                }
            })
    };
    let ca = content_u(a);
    let cb = content_u(b);
    let pa = a.div_exact(&ca).expect("content divides");
    let pb = b.div_exact(&cb).expect("content divides");
    let cg = mpoly_gcd(&ca, &cb);

    // primitive PRS in u
    let mut f = pa;
    let mut g = pb;
    if f.deg_u() < g.deg_u() {
        std::mem::swap(&mut f, &mut g);
    }
    while !g.is_zero() {
        if g.deg_u() == 0 {
            // coprime up to content, which is already accounted for
            f = MPoly::one();
            break;
        }
        let r = pseudo_rem_u(&f, &g);
        f = g;
        g = if r.is_zero() {
            MPoly::zero()
        } else {
            let c = content_u(&r);
            r.div_exact(&c).expect("content divides")
        };
    }
    let fc = content_u(&f);
    let fp = f.div_exact(&fc).expect("content divides");
    cg.mul(&fp)
}

/// Pseudo-remainder of f by g with respect to u (g nonzero, deg_u g ≥ 1).
fn pseudo_rem_u(f: &MPoly, g: &MPoly) -> MPoly {
    let dg = g.deg_u();
    let gc = g.u_coeffs();
    let lg = gc.last().unwrap().clone();
    let mut r = f.u_coeffs();
    loop {
        while r.last().map_or(false, |c| c.is_zero()) {
            r.pop();
        }
        if (r.len() as u32) < dg + 1 {
            break;
        }
        let lr = r.last().unwrap().clone();
        let shift = r.len() - 1 - dg as usize;
        for c in r.iter_mut() {
            *c = c.mul(&lg);
        }
        for (k, g_k) in gc.iter().enumerate() {
            r[k + shift] = r[k + shift].sub(&g_k.mul(&lr));
        }
    }
    MPoly::from_u_coeffs(r)
}

// ---- Scalar ----

/// Element of Q(s, u) in canonical reduced form.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Scalar {
    num: MPoly,
    den: MPoly,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar {
            num: MPoly::zero(),
            den: MPoly::one(),
        }
    }

    pub fn one() -> Self {
        Scalar {
            num: MPoly::one(),
            den: MPoly::one(),
        }
    }

    pub fn from_int(k: i64) -> Self {
        Scalar::from_rat(rat(k))
    }

    pub fn from_rat(c: Rat) -> Self {
        Scalar {
            num: MPoly::constant(c),
            den: MPoly::one(),
        }
    }

    pub fn from_poly(p: MPoly) -> Self {
        Scalar {
            num: p,
            den: MPoly::one(),
        }
    }

    pub fn new(num: MPoly, den: MPoly) -> Result<Self, ScalarError> {
        if den.is_zero() {
            return Err(ScalarError::ZeroDivisor);
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: MPoly, den: MPoly) -> Self {
        debug_assert!(!den.is_zero());
        if num.is_zero() {
            return Scalar::zero();
        }
        let (mut num, mut den) = (num, den);
        // strip the common monomial factor cheaply
        let mn = num.min_exp();
        let md = den.min_exp();
        let shift = Exp {
            es: mn.es.min(md.es),
            eu: mn.eu.min(md.eu),
        };
        if shift != Exp::ZERO {
            num = num.shift_down(shift);
            den = den.shift_down(shift);
        }
        if !den.is_monomial() || !num.is_monomial() {
            let g = mpoly_gcd(&num, &den);
            if !g.is_one() {
                num = num.div_exact(&g).expect("gcd divides");
                den = den.div_exact(&g).expect("gcd divides");
            }
        }
        let lc = den.leading().unwrap().1.clone();
        if !lc.is_one() {
            let inv = lc.recip();
            num = num.mul_rat(&inv);
            den = den.mul_rat(&inv);
        }
        Scalar { num, den }
    }

    /// s^k, with negative k giving 1/s^{|k|}.
    pub fn s_pow(k: i64) -> Self {
        let e = Exp {
            es: k.unsigned_abs() as u32,
            eu: 0,
        };
        if k >= 0 {
            Scalar {
                num: MPoly::monomial(e, Rat::one()),
                den: MPoly::one(),
            }
        } else {
            Scalar {
                num: MPoly::one(),
                den: MPoly::monomial(e, Rat::one()),
            }
        }
    }

    /// u^k, with negative k giving 1/u^{|k|}.
    pub fn u_pow(k: i64) -> Self {
        let e = Exp {
            es: 0,
            eu: k.unsigned_abs() as u32,
        };
        if k >= 0 {
            Scalar {
                num: MPoly::monomial(e, Rat::one()),
                den: MPoly::one(),
            }
        } else {
            Scalar {
                num: MPoly::one(),
                den: MPoly::monomial(e, Rat::one()),
            }
        }
    }

    /// q^{k/n} = s^k for the session rank n (q = s^n).
    pub fn from_q_power(k: i64, n_th: usize) -> Self {
        assert!(n_th >= 2, "session rank must be at least 2");
        Scalar::s_pow(k)
    }

    /// q^k = s^{kn}.
    pub fn q_pow(k: i64, n: usize) -> Self {
        Scalar::s_pow(k * n as i64)
    }

    /// q - q^{-1} = (s^{2n} - 1)/s^n.
    pub fn q_minus_qinv(n: usize) -> Self {
        &Scalar::q_pow(1, n) - &Scalar::q_pow(-1, n)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn num(&self) -> &MPoly {
        &self.num
    }

    pub fn den(&self) -> &MPoly {
        &self.den
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            return Scalar::normalized(self.num.add(&other.num), self.den.clone());
        }
        let num = self
            .num
            .mul(&other.den)
            .add(&other.num.mul(&self.den));
        let den = self.den.mul(&other.den);
        Scalar::normalized(num, den)
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Scalar {
        Scalar {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        if self.is_zero() || other.is_zero() {
            return Scalar::zero();
        }
        if self.is_one() {
            return other.clone();
        }
        if other.is_one() {
            return self.clone();
        }
        Scalar::normalized(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn inv(&self) -> Result<Scalar, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::ZeroDivisor);
        }
        Ok(Scalar::normalized(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        Ok(self.mul(&other.inv()?))
    }

    /// Exact evaluation at (s, u) = (s_val, u_val).
    pub fn specialize(&self, s_val: &Rat, u_val: &Rat) -> Result<Rat, ScalarError> {
        let d = self.den.eval(s_val, u_val);
        if d.is_zero() {
            return Err(ScalarError::BadSpecialization);
        }
        Ok(self.num.eval(s_val, u_val) / d)
    }

    /// Substitute a Scalar value for u (used to pin the twist λ).
    pub fn substitute_u(&self, u_val: &Scalar) -> Result<Scalar, ScalarError> {
        let eval_poly = |p: &MPoly| -> Scalar {
            let coeffs = p.u_coeffs();
            // Horner in u with coefficients in Q[s]
            let mut acc = Scalar::zero();
            for c in coeffs.into_iter().rev() {
                acc = acc.mul(u_val).add(&Scalar::from_poly(c));
            }
            acc
        };
        let d = eval_poly(&self.den);
        if d.is_zero() {
            return Err(ScalarError::BadSpecialization);
        }
        eval_poly(&self.num).div(&d)
    }

    /// Pivot-choice complexity: total degree then term count.
    pub fn complexity(&self) -> (u32, usize) {
        (
            self.num.total_degree() + self.den.total_degree(),
            self.num.num_terms() + self.den.num_terms(),
        )
    }

    /// Parse an expression in the report grammar: integers, `s`, `u`, `q`
    /// (sugar for s^n), `^` powers, `*`, `/`, `+`, `-`, parentheses.
    pub fn parse(src: &str, n: usize) -> Result<Scalar, ScalarError> {
        Parser::new(src, n).parse_all()
    }
}

impl std::ops::Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        Scalar::add(self, rhs)
    }
}

impl std::ops::Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        Scalar::sub(self, rhs)
    }
}

impl std::ops::Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        Scalar::mul(self, rhs)
    }
}

impl std::ops::Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::neg(self)
    }
}

// ---- display ----

fn fmt_poly_int(p: &MPoly, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    // descending term order reads naturally: s^4 - 1
    for (k, (e, c)) in p.terms().rev().enumerate() {
        debug_assert!(c.denom().is_one());
        let c = c.numer();
        if k == 0 {
            if c.is_negative() {
                write!(f, "-")?;
            }
        } else if c.is_negative() {
            write!(f, " - ")?;
        } else {
            write!(f, " + ")?;
        }
        let abs = c.abs();
        let has_vars = e.es > 0 || e.eu > 0;
        if !abs.is_one() || !has_vars {
            write!(f, "{}", abs)?;
            if has_vars {
                write!(f, "*")?;
            }
        }
        if e.es > 0 {
            write!(f, "s")?;
            if e.es > 1 {
                write!(f, "^{}", e.es)?;
            }
            if e.eu > 0 {
                write!(f, "*")?;
            }
        }
        if e.eu > 0 {
            write!(f, "u")?;
            if e.eu > 1 {
                write!(f, "^{}", e.eu)?;
            }
        }
    }
    Ok(())
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        // rescale so both sides have integer coefficients with overall gcd 1
        let mut den_lcm = BigInt::one();
        for c in self.num.terms().map(|(_, c)| c).chain(self.den.terms().map(|(_, c)| c)) {
            den_lcm = den_lcm.lcm(c.denom());
        }
        let mut num_gcd = BigInt::zero();
        for c in self.num.terms().map(|(_, c)| c).chain(self.den.terms().map(|(_, c)| c)) {
            num_gcd = num_gcd.gcd(&(c.numer() * &den_lcm / c.denom()));
        }
        let scale = Rat::new(den_lcm, num_gcd);
        let num = self.num.mul_rat(&scale);
        let den = self.den.mul_rat(&scale);
        if den.is_one() {
            fmt_poly_int(&num, f)
        } else {
            let num_simple = num.num_terms() == 1 && !num.leading().unwrap().1.is_negative();
            if num_simple {
                fmt_poly_int(&num, f)?;
            } else {
                write!(f, "(")?;
                fmt_poly_int(&num, f)?;
                write!(f, ")")?;
            }
            write!(f, "/")?;
            if den.num_terms() == 1 {
                fmt_poly_int(&den, f)
            } else {
                write!(f, "(")?;
                fmt_poly_int(&den, f)?;
                write!(f, ")")
            }
        }
    }
}

impl serde::Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

// ---- parser ----

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    n: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str, n: usize) -> Self {
        Parser {
            src: src.as_bytes(),
            pos: 0,
            n,
        }
    }

    fn parse_all(mut self) -> Result<Scalar, ScalarError> {
        let v = self.expr()?;
        self.skip_ws();
        if self.pos != self.src.len() {
            return Err(ScalarError::Parse(format!(
                "trailing input at byte {}",
                self.pos
            )));
        }
        Ok(v)
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Scalar, ScalarError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Scalar, ScalarError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = acc.mul(&self.factor()?);
                }
                Some(b'/') => {
                    self.pos += 1;
                    acc = acc.div(&self.factor()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Scalar, ScalarError> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(self.factor()?.neg());
        }
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let k = self.int()?;
            if k >= 0 {
                let mut out = Scalar::one();
                for _ in 0..k {
                    out = out.mul(&base);
                }
                Ok(out)
            } else {
                let mut out = Scalar::one();
                for _ in 0..-k {
                    out = out.mul(&base);
                }
                out.inv()
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Scalar, ScalarError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(ScalarError::Parse("expected ')'".into()));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(b's') => {
                self.pos += 1;
                Ok(Scalar::s_pow(1))
            }
            Some(b'u') => {
                self.pos += 1;
                Ok(Scalar::u_pow(1))
            }
            Some(b'q') => {
                self.pos += 1;
                Ok(Scalar::q_pow(1, self.n))
            }
            Some(c) if c.is_ascii_digit() => {
                let k = self.int()?;
                Ok(Scalar::from_int(k))
            }
            other => Err(ScalarError::Parse(format!("unexpected input: {:?}", other))),
        }
    }

    fn int(&mut self) -> Result<i64, ScalarError> {
        self.skip_ws();
        let neg = if self.src.get(self.pos) == Some(&b'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(ScalarError::Parse("expected integer".into()));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        let v: i64 = digits
            .parse()
            .map_err(|_| ScalarError::Parse("integer overflow".into()))?;
        Ok(if neg { -v } else { v })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: usize) -> Scalar {
        Scalar::q_pow(1, n)
    }

    #[test]
    fn q_power_basics() {
        let n = 3;
        // q = s^N
        assert_eq!(Scalar::from_q_power(n as i64, n), Scalar::q_pow(1, n));
        assert!(Scalar::from_q_power(0, n).is_one());
        assert_eq!(
            Scalar::from_q_power(-1, n),
            Scalar::one().div(&Scalar::s_pow(1)).unwrap()
        );
    }

    #[test]
    fn additive_and_multiplicative_inverses() {
        let n = 2;
        let a = &q(n) - &Scalar::q_pow(-1, n);
        let b = &Scalar::q_pow(-1, n) - &q(n);
        assert!(a.add(&b).is_zero());
        assert!(Scalar::s_pow(2).mul(&Scalar::s_pow(-2)).is_one());
    }

    #[test]
    fn classical_limit_of_one_plus_q_squared() {
        let n = 2;
        let v = Scalar::one().add(&Scalar::q_pow(2, n));
        assert_eq!(v.specialize(&rat(1), &rat(1)).unwrap(), rat(2));
    }

    #[test]
    fn specialize_is_identity_on_s() {
        let v = Scalar::s_pow(1);
        assert_eq!(v.specialize(&rat_frac(2, 3), &rat(1)).unwrap(), rat_frac(2, 3));
    }

    #[test]
    fn specialize_kills_q_minus_lambda_prime() {
        // λ' = λ q^{1/N} specialized at s = t, u = t^{N-1} equals t^N = q.
        // Oracle: independent term-by-term evaluation of the numerator.
        for n in 2..=4usize {
            let lambda_prime = Scalar::u_pow(1).mul(&Scalar::s_pow(1));
            let diff = &Scalar::q_pow(1, n) - &lambda_prime;
            let t = rat_frac(5, 7);
            let u_val = rat_pow(&t, (n - 1) as u32);
            assert_eq!(diff.specialize(&t, &u_val).unwrap(), rat(0));

            let mut by_hand = Rat::zero();
            for (e, c) in diff.num().terms() {
                by_hand += c * rat_pow(&t, e.es) * rat_pow(&u_val, e.eu);
            }
            assert!(by_hand.is_zero());
        }
    }

    #[test]
    fn specialize_rejects_vanishing_denominator() {
        let v = Scalar::one().div(&(&Scalar::s_pow(1) - &Scalar::one())).unwrap();
        assert_eq!(
            v.specialize(&rat(1), &rat(1)),
            Err(ScalarError::BadSpecialization)
        );
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(Scalar::one().div(&Scalar::zero()), Err(ScalarError::ZeroDivisor));
        assert_eq!(Scalar::zero().inv(), Err(ScalarError::ZeroDivisor));
    }

    #[test]
    fn canonical_form_reduces_fractions() {
        // (s^2 - 1)/(s - 1) = s + 1
        let num = Scalar::s_pow(2).sub(&Scalar::one());
        let den = Scalar::s_pow(1).sub(&Scalar::one());
        let v = num.div(&den).unwrap();
        assert_eq!(v, Scalar::s_pow(1).add(&Scalar::one()));
    }

    #[test]
    fn denominator_is_monic() {
        // 1/(2s - 2) must store den = s - 1 with the 1/2 pushed to num
        let v = Scalar::one()
            .div(&Scalar::s_pow(1).mul(&Scalar::from_int(2)).sub(&Scalar::from_int(2)))
            .unwrap();
        assert!(v.den().leading().unwrap().1.is_one());
        assert_eq!(v.mul(&Scalar::s_pow(1).sub(&Scalar::one())), Scalar::from_rat(rat_frac(1, 2)));
    }

    #[test]
    fn display_matches_grammar() {
        let n = 2;
        let v = (&Scalar::q_pow(2, n) - &Scalar::one()).div(&Scalar::s_pow(2)).unwrap();
        assert_eq!(v.to_string(), "(s^4 - 1)/s^2");
        assert_eq!(Scalar::zero().to_string(), "0");
        assert_eq!(Scalar::from_rat(rat_frac(1, 2)).mul(&Scalar::s_pow(1)).to_string(), "s/2");
        assert_eq!(Scalar::u_pow(1).mul(&Scalar::s_pow(1)).to_string(), "s*u");
    }

    #[test]
    fn parse_round_trip() {
        let n = 3;
        for src in ["(s^4 - 1)/s^2", "s*u", "q^2 - 1", "1/2", "-u + 3*s^2*u^2", "q - u*s"] {
            let v = Scalar::parse(src, n).unwrap();
            let back = Scalar::parse(&v.to_string(), n).unwrap();
            assert_eq!(v, back, "round trip failed for {src}");
        }
        assert_eq!(Scalar::parse("q", 3).unwrap(), Scalar::s_pow(3));
    }

    #[test]
    fn substitute_u_pins_lambda() {
        let n = 3;
        // u ↦ s^{N-1} sends q - u*s to zero
        let diff = &Scalar::q_pow(1, n) - &Scalar::u_pow(1).mul(&Scalar::s_pow(1));
        let pinned = diff.substitute_u(&Scalar::s_pow(n as i64 - 1)).unwrap();
        assert!(pinned.is_zero());
    }

    #[test]
    fn gcd_strips_content_and_sign() {
        let s = MPoly::var_s();
        let a = s.pow(2).sub(&MPoly::one()).mul_rat(&rat(-6));
        let b = s.clone().sub(&MPoly::one()).mul_rat(&rat(4));
        let g = mpoly_gcd(&a, &b);
        assert_eq!(g, s.sub(&MPoly::one()));
    }

    #[test]
    fn gcd_bivariate() {
        let s = MPoly::var_s();
        let u = MPoly::var_u();
        let f = u.clone().sub(&s.pow(2)); // u - s^2
        let a = f.mul(&u.clone().add(&s)).mul_rat(&rat(3));
        let b = f.mul(&s.pow(3)).mul(&f);
        let g = mpoly_gcd(&a, &b);
        assert_eq!(g, f.neg().unit_normal());
        assert_eq!(g, f.unit_normal());
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn arb_scalar() -> impl Strategy<Value = Scalar> {
            // small random Laurent elements: sums of c·s^a·u^b over products
            let term = (-3i64..4, 0u32..3, 0u32..2).prop_map(|(c, es, eu)| {
                Scalar::from_int(c).mul(&Scalar::s_pow(es as i64)).mul(&Scalar::u_pow(eu as i64))
            });
            (prop::collection::vec(term, 1..4), -2i64..3).prop_map(|(ts, shift)| {
                let sum = ts.iter().fold(Scalar::zero(), |acc, t| acc.add(t));
                sum.mul(&Scalar::s_pow(shift))
            })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn normalization_is_idempotent(a in arb_scalar()) {
                let renorm = Scalar::new(a.num().clone(), a.den().clone()).unwrap();
                prop_assert_eq!(a, renorm);
            }

            #[test]
            fn field_axioms(a in arb_scalar(), b in arb_scalar(), c in arb_scalar()) {
                prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
                prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
                prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
                prop_assert_eq!(a.add(&b), b.add(&a));
                prop_assert_eq!(a.mul(&b), b.mul(&a));
            }

            #[test]
            fn specialize_is_a_ring_homomorphism(a in arb_scalar(), b in arb_scalar()) {
                let s_val = rat_frac(3, 2);
                let u_val = rat_frac(-2, 5);
                let lhs = a.mul(&b).specialize(&s_val, &u_val).unwrap();
                let rhs = a.specialize(&s_val, &u_val).unwrap() * b.specialize(&s_val, &u_val).unwrap();
                prop_assert_eq!(lhs, rhs);
                let lhs = a.add(&b).specialize(&s_val, &u_val).unwrap();
                let rhs = a.specialize(&s_val, &u_val).unwrap() + b.specialize(&s_val, &u_val).unwrap();
                prop_assert_eq!(lhs, rhs);
            }

            #[test]
            fn inverse_cancels(a in arb_scalar()) {
                prop_assume!(!a.is_zero());
                prop_assert!(a.mul(&a.inv().unwrap()).is_one());
            }
        }
    }
}
