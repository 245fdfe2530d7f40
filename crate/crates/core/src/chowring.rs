//! Chow rings of projectivized split bundles over the projective line.
//!
//! For `E = O(a_0) + ... + O(a_n)` with `0 = a_0 <= a_1 <= ... <= a_n`, the ring
//! of `X = P(E)` is generated by the tautological class `H` and a fiber `F`
//! subject to `F^2 = 0` and `H^{n+1} = c_1 H^n F`, where `c_1 = sum a_i`.
//! The point class is `H^n F`. Classes are stored in the basis `H^p F^q` with
//! `0 <= p <= n` and `q` in `{0, 1}`; every stored class is already reduced.
//!
//! The weighted bundle `P[0,a;b;c]` with fiber `P(1,1,2,3)` uses the same
//! presentation over the rationals with `n = 3`, an effective first Chern
//! number `a + b/2 + c/3` and point class of degree `1/6`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact rational scalar used throughout the engine.
pub type Q = BigRational;

/// Integer to rational.
pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// The fraction `num/den` in lowest terms.
pub fn frac(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

/// Render a rational as `p/q`, or as a bare integer when the denominator is 1.
pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parse the output of [`fmt_q`].
pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(Q::new(n, d))
            }
        }
        None => s.parse::<BigInt>().ok().map(Q::from_integer),
    }
}

/// Convert an integral rational to `i64`, if it is one and fits.
pub fn q_to_i64(x: &Q) -> Option<i64> {
    if !x.is_integer() {
        return None;
    }
    i64::try_from(x.numer().clone()).ok()
}

/// A split bundle `O(a_0) + ... + O(a_n)` on the projective line, normalized so
/// that `a_0 = 0` and the weights ascend.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BundleSpec {
    weights: Vec<i64>,
}

impl BundleSpec {
    /// Build from the full weight list `a_0..a_n`.
    pub fn new(weights: Vec<i64>) -> Result<Self> {
        if weights.len() < 2 {
            return Err(Error::InvalidBundle(format!(
                "need at least two summands, got {}",
                weights.len()
            )));
        }
        if weights[0] != 0 {
            return Err(Error::InvalidBundle(format!(
                "a_0 must be 0, got {}",
                weights[0]
            )));
        }
        if weights.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidBundle(format!(
                "weights {weights:?} are not ascending"
            )));
        }
        Ok(Self { weights })
    }

    /// Build from `a_1..a_n`; `a_0 = 0` is prepended.
    pub fn from_tail(tail: &[i64]) -> Result<Self> {
        let mut w = Vec::with_capacity(tail.len() + 1);
        w.push(0);
        w.extend_from_slice(tail);
        Self::new(w)
    }

    /// Fiber dimension `n`.
    pub fn n(&self) -> usize {
        self.weights.len() - 1
    }

    /// Rank `n + 1`.
    pub fn rank(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    /// First Chern number `sum a_i`.
    pub fn c1(&self) -> i64 {
        self.weights.iter().sum()
    }

    /// The Chow ring of `P(E)`.
    pub fn ring(&self) -> ChowRing {
        ChowRing {
            n: self.n(),
            c1: q(self.c1()),
            point: Q::one(),
        }
    }
}

impl fmt::Display for BundleSpec {
    /// Compact notation such as `P[0^3,1]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P[{}]", compact_list(&self.weights))
    }
}

/// `[0,0,0,1]` becomes `0^3,1`.
pub fn compact_list(xs: &[i64]) -> String {
    let mut parts = Vec::new();
    let mut i = 0;
    while i < xs.len() {
        let mut j = i;
        while j + 1 < xs.len() && xs[j + 1] == xs[i] {
            j += 1;
        }
        let run = j - i + 1;
        if run == 1 {
            parts.push(xs[i].to_string());
        } else {
            parts.push(format!("{}^{}", xs[i], run));
        }
        i = j + 1;
    }
    parts.join(",")
}

/// The weighted projective bundle `P[0,a;b;c]` whose fiber is `P(1,1,2,3)`:
/// weight-1 generators `O + O(a)`, a weight-2 generator `O(b)` and a weight-3
/// generator `O(c)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeightedBundleSpec {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl WeightedBundleSpec {
    pub fn new(a: i64, b: i64, c: i64) -> Self {
        Self { a, b, c }
    }

    /// Rational Chow ring with `deg(H^3 F) = 1/6` and `deg(H^4) = (a + b/2 + c/3)/6`.
    pub fn ring(&self) -> ChowRing {
        let c1 = q(self.a) + frac(self.b, 2) + frac(self.c, 3);
        ChowRing {
            n: 3,
            c1,
            point: frac(1, 6),
        }
    }
}

impl fmt::Display for WeightedBundleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P[0,{};{};{}]", self.a, self.b, self.c)
    }
}

/// Presentation data of a Chow ring: fiber dimension, the number `c_1` in
/// `H^{n+1} = c_1 H^n F`, and the degree of the class `H^n F`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChowRing {
    n: usize,
    c1: Q,
    point: Q,
}

impl ChowRing {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn c1(&self) -> &Q {
        &self.c1
    }

    /// Dimension of `X`.
    pub fn dim(&self) -> usize {
        self.n + 1
    }

    pub fn one(&self) -> ChowClass {
        ChowClass::monomial(self.n, 0, 0)
    }

    pub fn h(&self) -> ChowClass {
        ChowClass::monomial(self.n, 1, 0)
    }

    pub fn f(&self) -> ChowClass {
        ChowClass::monomial(self.n, 0, 1)
    }

    /// The divisor `alpha H + beta F`.
    pub fn divisor(&self, d: &DivisorClass) -> ChowClass {
        let mut c = ChowClass::zero(self.n);
        c.coeffs[ChowClass::index(1, 0)] = d.alpha.clone();
        c.coeffs[ChowClass::index(0, 1)] = d.beta.clone();
        c
    }

    /// Reduce an arbitrary list of monomials `coeff * H^p F^q` to normal form.
    pub fn reduce_terms(&self, terms: &[(usize, usize, Q)]) -> ChowClass {
        let n = self.n;
        let mut out = ChowClass::zero(n);
        for (p, qd, c) in terms {
            let (p, qd) = (*p, *qd);
            if qd >= 2 || p + qd > n + 1 {
                continue;
            }
            if p <= n {
                out.coeffs[ChowClass::index(p, qd)] += c.clone();
            } else {
                // p == n + 1 and qd == 0: H^{n+1} = c_1 H^n F.
                out.coeffs[ChowClass::index(n, 1)] += c.clone() * self.c1.clone();
            }
        }
        out
    }

    /// Product in the ring.
    pub fn mul(&self, x: &ChowClass, y: &ChowClass) -> Result<ChowClass> {
        self.check(x)?;
        self.check(y)?;
        let mut terms = Vec::new();
        for (i, a) in x.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let (p1, q1) = ChowClass::unindex(i);
            for (j, b) in y.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let (p2, q2) = ChowClass::unindex(j);
                terms.push((p1 + p2, q1 + q2, a.clone() * b.clone()));
            }
        }
        Ok(self.reduce_terms(&terms))
    }

    /// Product of a list of classes; the empty product is `1`.
    pub fn product(&self, xs: &[ChowClass]) -> Result<ChowClass> {
        let mut acc = self.one();
        for x in xs {
            acc = self.mul(&acc, x)?;
        }
        Ok(acc)
    }

    /// `x^k`.
    pub fn pow(&self, x: &ChowClass, k: usize) -> Result<ChowClass> {
        let mut acc = self.one();
        for _ in 0..k {
            acc = self.mul(&acc, x)?;
        }
        Ok(acc)
    }

    /// Degree of the zero-cycle part; classes of lower dimension contribute 0.
    pub fn degree(&self, x: &ChowClass) -> Result<Q> {
        self.check(x)?;
        Ok(x.coeff(self.n, 1).clone() * self.point.clone())
    }

    fn check(&self, x: &ChowClass) -> Result<()> {
        if x.n != self.n {
            return Err(Error::DimensionMismatch {
                left: x.n,
                right: self.n,
            });
        }
        Ok(())
    }
}

/// An element of the Chow ring in the reduced basis `H^p F^q`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ChowClass {
    n: usize,
    coeffs: Vec<Q>,
}

impl ChowClass {
    fn index(p: usize, q: usize) -> usize {
        2 * p + q
    }

    fn unindex(i: usize) -> (usize, usize) {
        (i / 2, i % 2)
    }

    pub fn zero(n: usize) -> Self {
        Self {
            n,
            coeffs: vec![Q::zero(); 2 * (n + 1)],
        }
    }

    /// `H^p F^q`; monomials outside the basis (`p > n` or `q > 1`) must be
    /// built through [`ChowRing::reduce_terms`].
    pub fn monomial(n: usize, p: usize, q: usize) -> Self {
        assert!(
            p <= n && q <= 1,
            "monomial H^{p} F^{q} is outside the reduced basis"
        );
        let mut c = Self::zero(n);
        c.coeffs[Self::index(p, q)] = Q::one();
        c
    }

    /// Build from explicit `(p, q, coeff)` triples inside the basis.
    pub fn from_terms(n: usize, terms: &[(usize, usize, Q)]) -> Self {
        let mut c = Self::zero(n);
        for (p, qd, v) in terms {
            c.coeffs[Self::index(*p, *qd)] += v.clone();
        }
        c
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeff(&self, p: usize, q: usize) -> &Q {
        &self.coeffs[Self::index(p, q)]
    }

    /// Nonzero terms as `(p, q, coeff)`.
    pub fn terms(&self) -> Vec<(usize, usize, Q)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| {
                let (p, q) = Self::unindex(i);
                (p, q, c.clone())
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, s: &Q) -> Self {
        Self {
            n: self.n,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    fn zip(&self, other: &Self, f: impl Fn(&Q, &Q) -> Q) -> Self {
        assert_eq!(self.n, other.n, "adding classes of different bundles");
        Self {
            n: self.n,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }
}

impl Add for &ChowClass {
    type Output = ChowClass;
    fn add(self, rhs: &ChowClass) -> ChowClass {
        self.zip(rhs, |a, b| a + b)
    }
}

impl Sub for &ChowClass {
    type Output = ChowClass;
    fn sub(self, rhs: &ChowClass) -> ChowClass {
        self.zip(rhs, |a, b| a - b)
    }
}

impl Neg for &ChowClass {
    type Output = ChowClass;
    fn neg(self) -> ChowClass {
        self.scale(&-Q::one())
    }
}

impl fmt::Display for ChowClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms();
        if terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (p, qd, c) in terms.iter().rev() {
            let mono = match (p, qd) {
                (0, 0) => String::new(),
                (0, 1) => "F".to_string(),
                (1, 0) => "H".to_string(),
                (1, 1) => "HF".to_string(),
                (p, 0) => format!("H^{p}"),
                (p, _) => format!("H^{p}F"),
            };
            let neg = c.is_negative();
            let mag = c.abs();
            let coeff = if mono.is_empty() || !mag.is_one() {
                fmt_q(&mag)
            } else {
                String::new()
            };
            if first {
                write!(f, "{}{}{}", if neg { "-" } else { "" }, coeff, mono)?;
            } else {
                write!(f, " {} {}{}", if neg { "-" } else { "+" }, coeff, mono)?;
            }
            first = false;
        }
        Ok(())
    }
}

/// A divisor class `alpha H + beta F`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DivisorClass {
    #[serde(with = "q_serde")]
    pub alpha: Q,
    #[serde(with = "q_serde")]
    pub beta: Q,
}

impl DivisorClass {
    pub fn new(alpha: Q, beta: Q) -> Self {
        Self { alpha, beta }
    }

    pub fn int(alpha: i64, beta: i64) -> Self {
        Self {
            alpha: q(alpha),
            beta: q(beta),
        }
    }

    /// Intersection with a curve class: `alpha * lambda + beta * sigma`.
    pub fn pair(&self, c: &CurveClass) -> Q {
        &self.alpha * &c.lambda + &self.beta * &c.sigma
    }
}

impl Mul<&DivisorClass> for &Q {
    type Output = DivisorClass;
    fn mul(self, d: &DivisorClass) -> DivisorClass {
        DivisorClass {
            alpha: self * &d.alpha,
            beta: self * &d.beta,
        }
    }
}

impl fmt::Display for DivisorClass {
    /// Rendered like `2H_V + F_V`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", linear_form(&self.alpha, "H", &self.beta, "F"))
    }
}

/// A 1-cycle `lambda l + sigma s_0`, where `l` is a line in a fiber and `s_0`
/// the minimal section.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CurveClass {
    #[serde(with = "q_serde")]
    pub lambda: Q,
    #[serde(with = "q_serde")]
    pub sigma: Q,
}

impl CurveClass {
    pub fn new(lambda: Q, sigma: Q) -> Self {
        Self { lambda, sigma }
    }

    pub fn int(lambda: i64, sigma: i64) -> Self {
        Self {
            lambda: q(lambda),
            sigma: q(sigma),
        }
    }
}

impl fmt::Display for CurveClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", linear_form(&self.lambda, "l", &self.sigma, "s0"))
    }
}

fn linear_form(a: &Q, x: &str, b: &Q, y: &str) -> String {
    let term = |c: &Q, sym: &str| -> String {
        if c.is_one() {
            sym.to_string()
        } else {
            format!("{}{}", fmt_q(c), sym)
        }
    };
    match (a.is_zero(), b.is_zero()) {
        (true, true) => "0".into(),
        (false, true) => term(a, x),
        (true, false) => {
            if b.is_negative() {
                format!("-{}", term(&b.abs(), y))
            } else {
                term(b, y)
            }
        }
        (false, false) => {
            let sign = if b.is_negative() { "-" } else { "+" };
            format!("{} {} {}", term(a, x), sign, term(&b.abs(), y))
        }
    }
}

/// Serde adapter that writes rationals as `"p/q"` strings.
pub mod q_serde {
    use super::{fmt_q, parse_q, Q};
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_q(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        let s = String::deserialize(d)?;
        parse_q(&s).ok_or_else(|| D::Error::custom(format!("not a rational: {s}")))
    }
}

/// Product of two classes on `P(E)`.
pub fn mul(x: &ChowClass, y: &ChowClass, bundle: &BundleSpec) -> Result<ChowClass> {
    bundle.ring().mul(x, y)
}

/// Degree of the zero-cycle part of `x` on `P(E)`.
pub fn degree(x: &ChowClass, bundle: &BundleSpec) -> Result<Q> {
    bundle.ring().degree(x)
}

/// Degree of the zero-cycle part of `x` on the weighted bundle.
pub fn weighted_degree(x: &ChowClass, wb: &WeightedBundleSpec) -> Result<Q> {
    wb.ring().degree(x)
}

/// The curve `l = H^{n-1} F` (a line in a fiber).
pub fn line_class(bundle: &BundleSpec) -> ChowClass {
    ChowClass::monomial(bundle.n(), bundle.n() - 1, 1)
}

/// The minimal section `s_0 = prod_{i >= 1} (H - a_i F)`.
pub fn minimal_section_class(bundle: &BundleSpec) -> ChowClass {
    let ring = bundle.ring();
    let factors: Vec<ChowClass> = bundle.weights()[1..]
        .iter()
        .map(|&a| ring.divisor(&DivisorClass::int(1, -a)))
        .collect();
    ring.product(&factors).expect("factors share the ring")
}

/// All exponent vectors of total degree `deg` in `vars` variables, in
/// lexicographically descending order of the first exponent.
pub fn exponent_vectors(vars: usize, deg: u32) -> Vec<Vec<u32>> {
    fn rec(vars: usize, deg: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if vars == 1 {
            prefix.push(deg);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=deg).rev() {
            prefix.push(e);
            rec(vars - 1, deg - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if vars == 0 {
        if deg == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(vars, deg, &mut Vec::with_capacity(vars), &mut out);
    out
}

/// Weighted degree `<I, weights>` of an exponent vector.
pub fn weight_of(exps: &[u32], weights: &[i64]) -> i64 {
    exps.iter().zip(weights).map(|(&e, &w)| e as i64 * w).sum()
}

/// `h^0(X, O(aH + bF)) = sum over |I| = a of h^0(P^1, O(<I, weights> + b))`.
pub fn h0(bundle: &BundleSpec, a: u32, b: i64) -> u64 {
    exponent_vectors(bundle.rank(), a)
        .iter()
        .map(|e| (weight_of(e, bundle.weights()) + b + 1).max(0) as u64)
        .sum()
}

/// Exponent vectors `I` with `|I| = a` whose coefficient space
/// `H^0(P^1, O(<I, weights> + b))` is nonzero.
pub fn admissible_monomials(bundle: &BundleSpec, a: u32, b: i64) -> Vec<Vec<u32>> {
    exponent_vectors(bundle.rank(), a)
        .into_iter()
        .filter(|e| weight_of(e, bundle.weights()) + b >= 0)
        .collect()
}
