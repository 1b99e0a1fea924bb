//! Exact coefficient rings.
//!
//! Two backends share one element type, [`Coeff`]:
//!
//! - the rationals `Q`;
//! - the quotient ring `Q(ζ_N)[x]/(x^m - a)` for a primitive `N`-th root of
//!   unity `ζ_N` and a nonzero rational `a`.
//!
//! An extension element is stored as its coordinate vector in the basis
//! `x^i ζ^j` (`0 <= i < m`, `0 <= j < φ(N)`). Any element whose non-constant
//! coordinates vanish is stored as a plain rational, so equality is a plain
//! comparison of canonical data and rationals mix freely with extension
//! elements. The quotient ring is not a field in general; dividing by a zero
//! divisor reports [`CoeffError::NotUnit`].

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoeffError {
    #[error("element {0} is not a unit of its ring")]
    NotUnit(String),
    #[error("invalid extension ring: {0}")]
    InvalidRing(String),
    #[error("cannot parse coefficient `{input}`: {reason}")]
    Parse { input: String, reason: String },
}

/// Presentation of `Q(ζ_N)[x]/(x^m - a)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtRing {
    root_order: u32,
    radical_degree: u32,
    radical: BigRational,
    /// Φ_N without its leading 1, lowest degree first.
    cyclotomic: Vec<BigRational>,
}

impl ExtRing {
    pub fn new(root_order: u32, radical_degree: u32, radical: BigRational) -> Result<Arc<Self>, CoeffError> {
        if root_order == 0 || radical_degree == 0 {
            return Err(CoeffError::InvalidRing("root order and radical degree must be positive".into()));
        }
        if radical.is_zero() {
            return Err(CoeffError::InvalidRing("radical must be nonzero".into()));
        }
        let phi = cyclotomic_polynomial(root_order);
        let degree = phi.len() - 1;
        let cyclotomic = phi[..degree].iter().map(|&c| BigRational::from_integer(BigInt::from(c))).collect();
        Ok(Arc::new(ExtRing { root_order, radical_degree, radical, cyclotomic }))
    }

    pub fn root_order(&self) -> u32 {
        self.root_order
    }

    pub fn radical_degree(&self) -> u32 {
        self.radical_degree
    }

    pub fn radical(&self) -> &BigRational {
        &self.radical
    }

    fn phi(&self) -> usize {
        self.cyclotomic.len()
    }

    fn dim(&self) -> usize {
        self.phi() * self.radical_degree as usize
    }

    fn mul(&self, lhs: &[BigRational], rhs: &[BigRational]) -> Vec<BigRational> {
        let phi = self.phi();
        let m = self.radical_degree as usize;
        let wz = 2 * phi - 1;
        let mut tmp = vec![BigRational::zero(); (2 * m - 1) * wz];
        for (p, a) in lhs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let (i1, j1) = (p / phi, p % phi);
            for (q, b) in rhs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let (i2, j2) = (q / phi, q % phi);
                tmp[(i1 + i2) * wz + j1 + j2] += a * b;
            }
        }
        // x^m = a
        for i in (m..2 * m - 1).rev() {
            for j in 0..wz {
                let c = std::mem::take(&mut tmp[i * wz + j]);
                if !c.is_zero() {
                    tmp[(i - m) * wz + j] += c * &self.radical;
                }
            }
        }
        // ζ^φ = -(c_0 + c_1 ζ + ... + c_{φ-1} ζ^{φ-1})
        for i in 0..m {
            for j in (phi..wz).rev() {
                let c = std::mem::take(&mut tmp[i * wz + j]);
                if c.is_zero() {
                    continue;
                }
                for (k, ck) in self.cyclotomic.iter().enumerate() {
                    if !ck.is_zero() {
                        tmp[i * wz + j - phi + k] -= &c * ck;
                    }
                }
            }
        }
        let mut out = Vec::with_capacity(m * phi);
        for i in 0..m {
            for j in 0..phi {
                out.push(std::mem::take(&mut tmp[i * wz + j]));
            }
        }
        out
    }

    fn basis(self: &Arc<Self>, x_pow: usize, z_pow: usize) -> Coeff {
        let mut v = vec![BigRational::zero(); self.dim()];
        v[0] = BigRational::one();
        let mut acc = Coeff::from_parts(self.clone(), v);
        for _ in 0..x_pow {
            acc = &acc * &Coeff::generator(self, Generator::Radical);
        }
        for _ in 0..z_pow {
            acc = &acc * &Coeff::generator(self, Generator::Zeta);
        }
        acc
    }
}

enum Generator {
    Zeta,
    Radical,
}

/// Integer coefficients of the N-th cyclotomic polynomial, lowest degree first.
pub fn cyclotomic_polynomial(n: u32) -> Vec<i128> {
    // y^n - 1 divided by Φ_d for every proper divisor d of n.
    let mut num = vec![0i128; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n % d == 0 {
            num = div_monic(&num, &cyclotomic_polynomial(d));
        }
    }
    num
}

fn div_monic(num: &[i128], den: &[i128]) -> Vec<i128> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qd = num.len() - 1 - dd;
    let mut quot = vec![0i128; qd + 1];
    for k in (0..=qd).rev() {
        let c = rem[k + dd];
        quot[k] = c;
        for (i, &di) in den.iter().enumerate() {
            rem[k + i] -= c * di;
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0));
    quot
}

/// Backend descriptor: which ring coefficients of a computation live in.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum CoeffRing {
    #[default]
    Rational,
    Extension(Arc<ExtRing>),
}

impl CoeffRing {
    pub fn extension(root_order: u32, radical_degree: u32, radical: BigRational) -> Result<Self, CoeffError> {
        Ok(CoeffRing::Extension(ExtRing::new(root_order, radical_degree, radical)?))
    }

    /// Extension with only a root of unity adjoined (`x = 1`).
    pub fn cyclotomic(root_order: u32) -> Self {
        CoeffRing::Extension(ExtRing::new(root_order, 1, BigRational::one()).expect("valid cyclotomic ring"))
    }

    pub fn ext(&self) -> Option<&Arc<ExtRing>> {
        match self {
            CoeffRing::Rational => None,
            CoeffRing::Extension(e) => Some(e),
        }
    }

    /// The ring an element lives in (rational elements report `Rational`).
    pub fn of(c: &Coeff) -> Self {
        match c.ring() {
            Some(e) => CoeffRing::Extension(e.clone()),
            None => CoeffRing::Rational,
        }
    }

    /// Larger of two rings; `None` when both are distinct extensions.
    pub fn join(&self, other: &CoeffRing) -> Option<CoeffRing> {
        match (self, other) {
            (CoeffRing::Rational, o) | (o, CoeffRing::Rational) => Some(o.clone()),
            (CoeffRing::Extension(a), CoeffRing::Extension(b)) if a == b => Some(self.clone()),
            _ => None,
        }
    }

    pub fn zeta(&self) -> Option<Coeff> {
        self.ext().map(|e| Coeff::generator(e, Generator::Zeta))
    }

    pub fn radical_generator(&self) -> Option<Coeff> {
        self.ext().map(|e| Coeff::generator(e, Generator::Radical))
    }

    /// A primitive root of unity of the given order, when the ring has one.
    pub fn root_of_unity(&self, order: u32) -> Option<Coeff> {
        match order {
            0 => None,
            1 => Some(Coeff::one()),
            2 => Some(-Coeff::one()),
            _ => {
                let e = self.ext()?;
                let n = e.root_order;
                if n % order == 0 {
                    Some(Coeff::generator(e, Generator::Zeta).pow(n / order))
                } else if order % 2 == 0 && n % 2 == 1 && n % (order / 2) == 0 {
                    // -ζ_{order/2} has order `order` when order/2 is odd
                    let half = Coeff::generator(e, Generator::Zeta).pow(n / (order / 2));
                    if (order / 2) % 2 == 1 {
                        Some(-half)
                    } else {
                        None
                    }
                } else {
                    None
                }
            }
        }
    }

    /// Every element ε of the form ±ζ^k with ε^order = 1.
    pub fn roots_of_unity(&self, order: u32) -> Vec<Coeff> {
        let mut out: Vec<Coeff> = Vec::new();
        let mut push = |c: Coeff| {
            if c.pow(order) == Coeff::one() && !out.contains(&c) {
                out.push(c);
            }
        };
        push(Coeff::one());
        push(-Coeff::one());
        if let Some(e) = self.ext() {
            let z = Coeff::generator(e, Generator::Zeta);
            let mut p = Coeff::one();
            for _ in 0..e.root_order {
                push(p.clone());
                push(-p.clone());
                p = &p * &z;
            }
        }
        out
    }

    /// A distinguished `n`-th root of `value` inside the ring.
    ///
    /// Rational values with a rational root get that root (positive when
    /// there is a choice). Otherwise roots of the form `ρ·ζ^k·x^j` with
    /// rational `ρ` are searched in increasing `(j, k)` order.
    pub fn nth_root(&self, value: &Coeff, n: u32) -> Option<Coeff> {
        if n == 0 {
            return None;
        }
        if value.is_zero() {
            return Some(Coeff::zero());
        }
        if let Some(q) = value.as_rational() {
            if let Some(root) = rational_nth_root(q, n) {
                return Some(Coeff::from(root));
            }
        }
        let e = self.ext()?;
        for j in 0..e.radical_degree as usize {
            for k in 0..e.root_order as usize {
                let cand = e.basis(j, k);
                let Ok(inv) = cand.pow(n).inv() else { continue };
                let rest = value * &inv;
                if let Some(q) = rest.as_rational() {
                    if let Some(rho) = rational_nth_root(q, n) {
                        let root = &Coeff::from(rho) * &cand;
                        debug_assert_eq!(&root.pow(n), value);
                        return Some(root);
                    }
                }
            }
        }
        None
    }

    /// All `n`-th roots of `value` obtained from the distinguished root by
    /// the roots of unity the ring contains.
    pub fn nth_roots(&self, value: &Coeff, n: u32) -> Vec<Coeff> {
        let Some(root) = self.nth_root(value, n) else { return Vec::new() };
        let mut out: Vec<Coeff> = Vec::new();
        for eps in self.roots_of_unity(n) {
            let c = &root * &eps;
            if !out.contains(&c) {
                out.push(c);
            }
        }
        out
    }

    pub fn parse(&self, text: &str) -> Result<Coeff, CoeffError> {
        Coeff::parse(text, self.ext())
    }
}

/// Exact rational `n`-th root, if one exists.
pub fn rational_nth_root(q: &BigRational, n: u32) -> Option<BigRational> {
    if q.is_zero() {
        return Some(BigRational::zero());
    }
    let neg = q.is_negative();
    if neg && n % 2 == 0 {
        return None;
    }
    let num = q.numer().abs();
    let den = q.denom().abs();
    let rn = num.nth_root(n);
    let rd = den.nth_root(n);
    if num_traits::pow(rn.clone(), n as usize) != num || num_traits::pow(rd.clone(), n as usize) != den {
        return None;
    }
    let r = BigRational::new(rn, rd);
    Some(if neg { -r } else { r })
}

#[derive(Clone, Debug)]
enum Repr {
    Rat(BigRational),
    Ext(Arc<ExtRing>, Box<[BigRational]>),
}

/// An exact coefficient: a rational, or an element of an extension ring.
#[derive(Clone, Debug)]
pub struct Coeff(Repr);

impl Coeff {
    pub fn zero() -> Self {
        Coeff(Repr::Rat(BigRational::zero()))
    }

    pub fn one() -> Self {
        Coeff(Repr::Rat(BigRational::one()))
    }

    pub fn from_int(n: i64) -> Self {
        Coeff(Repr::Rat(BigRational::from_integer(BigInt::from(n))))
    }

    /// `num / den`; panics on a zero denominator.
    pub fn ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Coeff(Repr::Rat(BigRational::new(BigInt::from(num), BigInt::from(den))))
    }

    fn from_parts(ring: Arc<ExtRing>, comps: Vec<BigRational>) -> Self {
        if comps[1..].iter().all(Zero::is_zero) {
            let mut comps = comps;
            return Coeff(Repr::Rat(std::mem::take(&mut comps[0])));
        }
        Coeff(Repr::Ext(ring, comps.into_boxed_slice()))
    }

    fn generator(ring: &Arc<ExtRing>, which: Generator) -> Self {
        let phi = ring.phi();
        let mut v = vec![BigRational::zero(); ring.dim()];
        match which {
            Generator::Zeta => {
                if phi == 1 {
                    // ζ_1 = 1, ζ_2 = -1
                    v[0] = -ring.cyclotomic[0].clone();
                } else {
                    v[1] = BigRational::one();
                }
            }
            Generator::Radical => {
                if ring.radical_degree == 1 {
                    v[0] = ring.radical.clone();
                } else {
                    v[phi] = BigRational::one();
                }
            }
        }
        Coeff::from_parts(ring.clone(), v)
    }

    pub fn ring(&self) -> Option<&Arc<ExtRing>> {
        match &self.0 {
            Repr::Rat(_) => None,
            Repr::Ext(r, _) => Some(r),
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match &self.0 {
            Repr::Rat(q) => Some(q),
            Repr::Ext(..) => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(&self.0, Repr::Rat(q) if q.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(&self.0, Repr::Rat(q) if q.is_one())
    }

    /// The constant coordinate (coefficient of `x^0 ζ^0`).
    pub fn rational_part(&self) -> BigRational {
        match &self.0 {
            Repr::Rat(q) => q.clone(),
            Repr::Ext(_, c) => c[0].clone(),
        }
    }

    /// Coordinates in the ring basis; length 1 for rationals.
    pub fn components(&self) -> Vec<BigRational> {
        match &self.0 {
            Repr::Rat(q) => vec![q.clone()],
            Repr::Ext(_, c) => c.to_vec(),
        }
    }

    fn components_in(&self, ring: &ExtRing) -> Vec<BigRational> {
        match &self.0 {
            Repr::Rat(q) => {
                let mut v = vec![BigRational::zero(); ring.dim()];
                v[0] = q.clone();
                v
            }
            Repr::Ext(_, c) => c.to_vec(),
        }
    }

    fn common_ring<'a>(&'a self, other: &'a Coeff) -> Option<&'a Arc<ExtRing>> {
        match (self.ring(), other.ring()) {
            (None, None) => None,
            (Some(r), None) | (None, Some(r)) => Some(r),
            (Some(a), Some(b)) => {
                assert!(a == b, "coefficients from different extension rings");
                Some(a)
            }
        }
    }

    fn zip_with(&self, other: &Coeff, f: impl Fn(&BigRational, &BigRational) -> BigRational) -> Coeff {
        match self.common_ring(other) {
            None => Coeff(Repr::Rat(f(self.as_rational().unwrap(), other.as_rational().unwrap()))),
            Some(r) => {
                let a = self.components_in(r);
                let b = other.components_in(r);
                let v = a.iter().zip(b.iter()).map(|(x, y)| f(x, y)).collect();
                Coeff::from_parts(r.clone(), v)
            }
        }
    }

    pub fn pow(&self, e: u32) -> Coeff {
        let mut base = self.clone();
        let mut acc = Coeff::one();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Integer power; negative exponents need a unit.
    pub fn powi(&self, e: i64) -> Result<Coeff, CoeffError> {
        let p = self.pow(e.unsigned_abs() as u32);
        if e < 0 {
            p.inv()
        } else {
            Ok(p)
        }
    }

    pub fn inv(&self) -> Result<Coeff, CoeffError> {
        match &self.0 {
            Repr::Rat(q) => {
                if q.is_zero() {
                    Err(CoeffError::NotUnit(self.to_string()))
                } else {
                    Ok(Coeff(Repr::Rat(q.recip())))
                }
            }
            Repr::Ext(ring, comps) => {
                // Solve (multiplication by self) · y = 1 over Q.
                let d = ring.dim();
                let mut rows: Vec<Vec<BigRational>> = vec![vec![BigRational::zero(); d + 1]; d];
                for k in 0..d {
                    let mut basis = vec![BigRational::zero(); d];
                    basis[k] = BigRational::one();
                    let col = ring.mul(comps, &basis);
                    for (i, v) in col.into_iter().enumerate() {
                        rows[i][k] = v;
                    }
                }
                rows[0][d] = BigRational::one();
                let sol = solve_rational(rows, d).ok_or_else(|| CoeffError::NotUnit(self.to_string()))?;
                Ok(Coeff::from_parts(ring.clone(), sol))
            }
        }
    }

    pub fn checked_div(&self, other: &Coeff) -> Result<Coeff, CoeffError> {
        Ok(self * &other.inv()?)
    }

    /// Multiply by a rational.
    pub fn scale(&self, q: &BigRational) -> Coeff {
        match &self.0 {
            Repr::Rat(a) => Coeff(Repr::Rat(a * q)),
            Repr::Ext(r, c) => Coeff::from_parts(r.clone(), c.iter().map(|x| x * q).collect()),
        }
    }

    /// Parse the textual form produced by `Display`.
    ///
    /// Terms are separated by `+`/`-`; each term is a product of an optional
    /// rational literal and the generators `z` (root of unity) and `x`
    /// (radical), optionally raised to a power: `3/2*z^2*x - 1`.
    pub fn parse(text: &str, ring: Option<&Arc<ExtRing>>) -> Result<Coeff, CoeffError> {
        let err = |reason: &str| CoeffError::Parse { input: text.to_string(), reason: reason.to_string() };
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(err("empty"));
        }
        let mut terms: Vec<(bool, String)> = Vec::new();
        let mut cur = String::new();
        let mut neg = false;
        for (i, ch) in s.chars().enumerate() {
            if (ch == '+' || ch == '-') && !(cur.is_empty() && i == 0) {
                if cur.is_empty() {
                    return Err(err("dangling sign"));
                }
                terms.push((neg, std::mem::take(&mut cur)));
                neg = ch == '-';
            } else if ch == '-' && i == 0 {
                neg = true;
            } else if ch != '+' {
                cur.push(ch);
            }
        }
        if cur.is_empty() {
            return Err(err("dangling sign"));
        }
        terms.push((neg, cur));

        let mut total = Coeff::zero();
        for (neg, term) in terms {
            let mut value = Coeff::one();
            for factor in term.split('*') {
                if factor.is_empty() {
                    return Err(err("empty factor"));
                }
                let (base, exp) = match factor.split_once('^') {
                    Some((b, e)) => (b, e.parse::<u32>().map_err(|_| err("bad exponent"))?),
                    None => (factor, 1),
                };
                let f = match base {
                    "z" | "x" => {
                        let r = ring.ok_or_else(|| err("generator used without an extension ring"))?;
                        let g = if base == "z" { Generator::Zeta } else { Generator::Radical };
                        Coeff::generator(r, g).pow(exp)
                    }
                    lit => {
                        if factor.contains('^') {
                            return Err(err("exponent on a literal"));
                        }
                        let q = BigRational::from_str(lit).map_err(|_| err("bad rational literal"))?;
                        Coeff::from(q)
                    }
                };
                value = &value * &f;
            }
            total = if neg { &total - &value } else { &total + &value };
        }
        Ok(total)
    }

    fn sort_key(&self, len: usize) -> Vec<BigRational> {
        let mut v = self.components();
        v.resize(len.max(v.len()), BigRational::zero());
        v
    }
}

/// Gaussian elimination on an augmented `d × (d+1)` system; `None` if singular.
fn solve_rational(mut rows: Vec<Vec<BigRational>>, d: usize) -> Option<Vec<BigRational>> {
    for col in 0..d {
        let piv = (col..d).find(|&r| !rows[r][col].is_zero())?;
        rows.swap(col, piv);
        let inv = rows[col][col].recip();
        for v in rows[col].iter_mut() {
            *v *= &inv;
        }
        for r in 0..d {
            if r != col && !rows[r][col].is_zero() {
                let f = rows[r][col].clone();
                let pivot_row = rows[col].clone();
                for (dst, src) in rows[r].iter_mut().zip(pivot_row.iter()) {
                    *dst -= &f * src;
                }
            }
        }
    }
    Some(rows.into_iter().map(|mut r| r.pop().unwrap()).collect())
}

impl PartialEq for Coeff {
    fn eq(&self, other: &Self) -> bool {
        match (&self.0, &other.0) {
            (Repr::Rat(a), Repr::Rat(b)) => a == b,
            (Repr::Ext(ra, a), Repr::Ext(rb, b)) => ra == rb && a == b,
            _ => false,
        }
    }
}

impl Eq for Coeff {}

/// Lexicographic order on coordinate vectors; used only for deterministic
/// tie-breaking, it is not compatible with the ring operations.
impl Ord for Coeff {
    fn cmp(&self, other: &Self) -> Ordering {
        let len = self.components().len().max(other.components().len());
        self.sort_key(len).cmp(&other.sort_key(len))
    }
}

impl PartialOrd for Coeff {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<BigRational> for Coeff {
    fn from(q: BigRational) -> Self {
        Coeff(Repr::Rat(q))
    }
}

impl From<i64> for Coeff {
    fn from(n: i64) -> Self {
        Coeff::from_int(n)
    }
}

impl Default for Coeff {
    fn default() -> Self {
        Coeff::zero()
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Rat(q) => write!(f, "{q}"),
            Repr::Ext(ring, comps) => {
                let phi = ring.phi();
                let mut first = true;
                for (idx, c) in comps.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let (i, j) = (idx / phi, idx % phi);
                    let mut gens = Vec::new();
                    if j > 0 {
                        gens.push(if j == 1 { "z".to_string() } else { format!("z^{j}") });
                    }
                    if i > 0 {
                        gens.push(if i == 1 { "x".to_string() } else { format!("x^{i}") });
                    }
                    let neg = c.is_negative();
                    let mag = c.abs();
                    if first {
                        if neg {
                            write!(f, "-")?;
                        }
                    } else {
                        write!(f, " {} ", if neg { '-' } else { '+' })?;
                    }
                    first = false;
                    if gens.is_empty() {
                        write!(f, "{mag}")?;
                    } else if mag.is_one() {
                        write!(f, "{}", gens.join("*"))?;
                    } else {
                        write!(f, "{mag}*{}", gens.join("*"))?;
                    }
                }
                Ok(())
            }
        }
    }
}

impl Add for &Coeff {
    type Output = Coeff;
    fn add(self, rhs: &Coeff) -> Coeff {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &Coeff {
    type Output = Coeff;
    fn sub(self, rhs: &Coeff) -> Coeff {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Mul for &Coeff {
    type Output = Coeff;
    fn mul(self, rhs: &Coeff) -> Coeff {
        match (&self.0, &rhs.0) {
            (Repr::Rat(a), Repr::Rat(b)) => Coeff(Repr::Rat(a * b)),
            (Repr::Rat(q), Repr::Ext(..)) => rhs.scale(q),
            (Repr::Ext(..), Repr::Rat(q)) => self.scale(q),
            (Repr::Ext(ra, a), Repr::Ext(rb, b)) => {
                assert!(ra == rb, "coefficients from different extension rings");
                Coeff::from_parts(ra.clone(), ra.mul(a, b))
            }
        }
    }
}

impl Neg for &Coeff {
    type Output = Coeff;
    fn neg(self) -> Coeff {
        match &self.0 {
            Repr::Rat(q) => Coeff(Repr::Rat(-q)),
            Repr::Ext(r, c) => Coeff(Repr::Ext(r.clone(), c.iter().map(|x| -x).collect())),
        }
    }
}

impl Neg for Coeff {
    type Output = Coeff;
    fn neg(self) -> Coeff {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Coeff {
            type Output = Coeff;
            fn $m(self, rhs: Coeff) -> Coeff {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Coeff> for Coeff {
            type Output = Coeff;
            fn $m(self, rhs: &Coeff) -> Coeff {
                (&self).$m(rhs)
            }
        }
        impl $tr<Coeff> for &Coeff {
            type Output = Coeff;
            fn $m(self, rhs: Coeff) -> Coeff {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl AddAssign<&Coeff> for Coeff {
    fn add_assign(&mut self, rhs: &Coeff) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Coeff> for Coeff {
    fn sub_assign(&mut self, rhs: &Coeff) {
        *self = &*self - rhs;
    }
}

/// Greatest integer not exceeding `q`.
pub fn floor_rational(q: &BigRational) -> BigInt {
    q.numer().div_floor(q.denom())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn cyclotomic_small() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(2), vec![1, 1]);
        assert_eq!(cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn zeta_has_exact_order() {
        for n in [3u32, 4, 5, 6, 8, 9, 12] {
            let ring = CoeffRing::cyclotomic(n);
            let z = ring.zeta().unwrap();
            assert_eq!(z.pow(n), Coeff::one(), "order {n}");
            for k in 1..n {
                assert_ne!(z.pow(k), Coeff::one(), "ζ_{n}^{k}");
            }
        }
    }

    #[test]
    fn radical_is_unit_with_expected_inverse() {
        let ring = CoeffRing::extension(3, 4, q(5, 2)).unwrap();
        let x = ring.radical_generator().unwrap();
        assert_eq!(x.pow(4), Coeff::ratio(5, 2));
        let expected = x.pow(3).scale(&q(2, 5));
        assert_eq!(x.inv().unwrap(), expected);
    }

    #[test]
    fn zero_divisor_is_not_unit() {
        // x^2 = 1 splits: (x - 1)(x + 1) = 0
        let ring = CoeffRing::extension(1, 2, q(1, 1)).unwrap();
        let x = ring.radical_generator().unwrap();
        let d = &x - &Coeff::one();
        assert!(matches!(d.inv(), Err(CoeffError::NotUnit(_))));
        assert!((&x + &Coeff::one()).inv().is_err());
    }

    #[test]
    fn inverse_in_cyclotomic_field() {
        let ring = CoeffRing::cyclotomic(5);
        let z = ring.zeta().unwrap();
        let e = &(&z * &z) + &Coeff::from_int(3);
        let inv = e.inv().unwrap();
        assert_eq!(&e * &inv, Coeff::one());
    }

    #[test]
    fn display_parse_roundtrip() {
        let ring = CoeffRing::extension(6, 3, q(-2, 1)).unwrap();
        let e = ring.ext().unwrap();
        for text in ["1/2", "-3", "z", "-z", "3/2*z*x^2 - 1 + x", "z^1*x - 2/3*x^2"] {
            let c = Coeff::parse(text, Some(e)).unwrap();
            let back = Coeff::parse(&c.to_string(), Some(e)).unwrap();
            assert_eq!(c, back, "{text} -> {c}");
        }
        assert!(Coeff::parse("z", None).is_err());
        assert!(Coeff::parse("1/0", None).is_err());
        assert!(Coeff::parse("2+", None).is_err());
    }

    #[test]
    fn rational_roots() {
        assert_eq!(rational_nth_root(&q(8, 27), 3), Some(q(2, 3)));
        assert_eq!(rational_nth_root(&q(-8, 27), 3), Some(q(-2, 3)));
        assert_eq!(rational_nth_root(&q(-4, 1), 2), None);
        assert_eq!(rational_nth_root(&q(2, 1), 2), None);
    }

    #[test]
    fn distinguished_roots_in_extension() {
        let ring = CoeffRing::cyclotomic(4);
        let i = ring.zeta().unwrap();
        let r = ring.nth_root(&Coeff::from_int(-4), 2).unwrap();
        assert_eq!(r.pow(2), Coeff::from_int(-4));
        assert_eq!(r, &Coeff::from_int(2) * &i);

        let rad = CoeffRing::extension(1, 3, q(5, 1)).unwrap();
        let root = rad.nth_root(&Coeff::from_int(40), 3).unwrap();
        assert_eq!(root.pow(3), Coeff::from_int(40));
        assert!(CoeffRing::Rational.nth_root(&Coeff::from_int(2), 2).is_none());
        assert_eq!(ring.nth_roots(&Coeff::from_int(16), 4).len(), 4);
    }

    #[test]
    fn primitive_roots_of_unity() {
        assert_eq!(CoeffRing::Rational.root_of_unity(2), Some(Coeff::from_int(-1)));
        assert!(CoeffRing::Rational.root_of_unity(3).is_none());
        let r = CoeffRing::cyclotomic(3);
        let w = r.root_of_unity(6).unwrap();
        assert_eq!(w.pow(6), Coeff::one());
        assert_ne!(w.pow(2), Coeff::one());
        assert_ne!(w.pow(3), Coeff::one());
    }

    #[test]
    fn ring_axioms_on_samples() {
        let ring = CoeffRing::extension(5, 2, q(3, 1)).unwrap();
        let e = ring.ext().unwrap();
        let a = Coeff::parse("1/2 + z - 3*z^3*x", Some(e)).unwrap();
        let b = Coeff::parse("-2*z^2 + x", Some(e)).unwrap();
        let c = Coeff::parse("7/3*z*x + 1", Some(e)).unwrap();
        assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        assert_eq!(&a - &a, Coeff::zero());
    }
}
