//! Candidate del Pezzo fibrations and their numerical invariants.
//!
//! A model fixes the degree `d` of the fibration, the ambient bundle and the
//! twist data of the defining equations:
//!
//! | `d` | ambient                 | `V`                                   |
//! |-----|-------------------------|---------------------------------------|
//! | 9   | `P[0,a1,a2]`            | `X` itself                            |
//! | 8   | `P[0,a1,a2,a3]`         | `|2H + kF|`                           |
//! | 3   | `P[0,a1,a2,a3]`         | `|3H + kF|`                           |
//! | 2   | `P[0,a1,a2]`            | double cover branched in `|4H + 2kF|` |
//! | 4   | `P[0,a1,..,a4]`         | `(2H + k1 F) . (2H + k2 F)`           |
//! | 5   | `P[0,a1,..,a5]`         | Pfaffian locus, class `5H^3 + 3tH^2F` |
//! | 1   | weighted `P[0,a;b;c]`   | `|6H + 6kF|` with `b = -2k, c = -3k`  |

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::chowring::{
    compact_list, q, BundleSpec, ChowClass, ChowRing, CurveClass, DivisorClass, WeightedBundleSpec,
    Q,
};
use crate::error::{Error, Result};

/// Degree of a del Pezzo fibration covered by the engine.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum Degree {
    D1,
    D2,
    D3,
    D4,
    D5,
    D8,
    D9,
}

impl Degree {
    /// Every supported degree, in the order the classification theorems appear.
    pub const ALL: [Degree; 7] = [
        Degree::D9,
        Degree::D8,
        Degree::D1,
        Degree::D2,
        Degree::D3,
        Degree::D4,
        Degree::D5,
    ];

    pub fn new(d: u8) -> Result<Self> {
        Ok(match d {
            1 => Self::D1,
            2 => Self::D2,
            3 => Self::D3,
            4 => Self::D4,
            5 => Self::D5,
            8 => Self::D8,
            9 => Self::D9,
            other => return Err(Error::UnsupportedDegree(other)),
        })
    }

    pub fn value(self) -> u8 {
        match self {
            Self::D1 => 1,
            Self::D2 => 2,
            Self::D3 => 3,
            Self::D4 => 4,
            Self::D5 => 5,
            Self::D8 => 8,
            Self::D9 => 9,
        }
    }

    /// Rank of the split ambient bundle; `None` for the weighted bundle.
    pub fn bundle_rank(self) -> Option<usize> {
        match self {
            Self::D9 | Self::D2 => Some(3),
            Self::D3 | Self::D8 => Some(4),
            Self::D4 => Some(5),
            Self::D5 => Some(6),
            Self::D1 => None,
        }
    }

    /// Number of twist integers carried by a model of this degree.
    pub fn twist_arity(self) -> usize {
        match self {
            Self::D9 => 0,
            Self::D1 | Self::D2 | Self::D3 | Self::D8 => 1,
            Self::D4 => 2,
            Self::D5 => 5,
        }
    }
}

impl TryFrom<u8> for Degree {
    type Error = Error;
    fn try_from(d: u8) -> Result<Self> {
        Self::new(d)
    }
}

impl From<Degree> for u8 {
    fn from(d: Degree) -> u8 {
        d.value()
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

/// The skew matrix of twists `w_ij = t - k_i - k_j` of a degree-5 model.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TwistMatrix {
    pub t: i64,
    w: [[i64; 5]; 5],
}

impl TwistMatrix {
    /// `w_ij` with 1-based indices `1 <= i, j <= 5`, `i != j`.
    pub fn w(&self, i: usize, j: usize) -> i64 {
        assert!(i != j && (1..=5).contains(&i) && (1..=5).contains(&j));
        self.w[i - 1][j - 1]
    }

    /// The upper triangle row by row: `w12 w13 w14 w15 / w23 w24 w25 / w34 w35 / w45`.
    pub fn upper(&self) -> Vec<Vec<i64>> {
        (1..5)
            .map(|i| (i + 1..=5).map(|j| self.w(i, j)).collect())
            .collect()
    }
}

/// Build the twist matrix of a sorted, even-sum 5-tuple.
pub fn twist_matrix(k: &[i64; 5]) -> Result<TwistMatrix> {
    let sum: i64 = k.iter().sum();
    if sum % 2 != 0 {
        return Err(Error::OddTwistSum(sum));
    }
    let t = sum / 2;
    let mut w = [[0; 5]; 5];
    for i in 0..5 {
        for j in 0..5 {
            if i != j {
                w[i][j] = t - k[i] - k[j];
            }
        }
    }
    Ok(TwistMatrix { t, w })
}

/// Twist data of the defining equations.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Twists {
    /// Degree 9: `V = X`.
    None,
    /// Degrees 1, 2, 3, 8: a single twist `k`.
    K(i64),
    /// Degree 4: `(k1, k2)` with `k1 <= k2`.
    Pair(i64, i64),
    /// Degree 5: `k1 <= ... <= k5` with even sum.
    Five([i64; 5]),
}

impl Twists {
    /// Build from a flat list, canonicalizing the order.
    pub fn from_slice(degree: Degree, ks: &[i64]) -> Result<Self> {
        if ks.len() != degree.twist_arity() {
            return Err(Error::WrongTwists {
                degree: degree.value(),
                got: format!("{ks:?}"),
            });
        }
        let mut ks = ks.to_vec();
        ks.sort_unstable();
        Ok(match degree.twist_arity() {
            0 => Self::None,
            1 => Self::K(ks[0]),
            2 => Self::Pair(ks[0], ks[1]),
            _ => Self::Five([ks[0], ks[1], ks[2], ks[3], ks[4]]),
        })
    }

    pub fn to_vec(&self) -> Vec<i64> {
        match self {
            Self::None => vec![],
            Self::K(k) => vec![*k],
            Self::Pair(a, b) => vec![*a, *b],
            Self::Five(k) => k.to_vec(),
        }
    }

    pub fn sum(&self) -> i64 {
        self.to_vec().iter().sum()
    }
}

/// The ambient space of a model.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Ambient {
    Split(BundleSpec),
    Weighted(WeightedBundleSpec),
}

impl Ambient {
    pub fn ring(&self) -> ChowRing {
        match self {
            Self::Split(b) => b.ring(),
            Self::Weighted(w) => w.ring(),
        }
    }

    /// Coefficients of `-K_X = s H + (2 - c) F`: `s` is the sum of the fiber
    /// weights and `c` the sum of the generator twists.
    fn anticanonical_coefficients(&self) -> (i64, i64) {
        match self {
            Self::Split(b) => (b.rank() as i64, b.c1()),
            Self::Weighted(w) => (1 + 1 + 2 + 3, w.a + w.b + w.c),
        }
    }
}

/// Relation a constraint value must satisfy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    /// `value >= 0`
    NonNegative,
    /// `value > 0`
    Positive,
    /// `value = 0`, an identity forced by smoothness.
    Forced,
}

impl Relation {
    pub fn holds(self, v: &Q) -> bool {
        match self {
            Self::NonNegative => !v.is_negative(),
            Self::Positive => v.is_positive(),
            Self::Forced => v.is_zero(),
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Self::NonNegative => ">= 0",
            Self::Positive => "> 0",
            Self::Forced => "= 0",
        }
    }
}

/// One named constraint and its exact value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Constraint {
    pub id: &'static str,
    #[serde(with = "crate::chowring::q_serde")]
    pub value: Q,
    pub relation: Relation,
}

impl Constraint {
    pub fn holds(&self) -> bool {
        self.relation.holds(&self.value)
    }
}

/// All constraint values of a model.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConstraintReport {
    pub entries: Vec<Constraint>,
}

impl ConstraintReport {
    pub fn admissible(&self) -> bool {
        self.entries.iter().all(Constraint::holds)
    }

    pub fn get(&self, id: &str) -> Option<&Q> {
        self.entries.iter().find(|c| c.id == id).map(|c| &c.value)
    }

    /// Ids of violated constraints.
    pub fn violations(&self) -> Vec<&'static str> {
        self.entries
            .iter()
            .filter(|c| !c.holds())
            .map(|c| c.id)
            .collect()
    }
}

/// One candidate case.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FibrationModel {
    degree: Degree,
    ambient: Ambient,
    twists: Twists,
    /// Class of `V` in the Chow ring of the ambient space.
    v_cycle: ChowClass,
    /// Factor relating degrees on `V` to degrees in the ambient ring
    /// (2 for the double cover, 1 otherwise).
    multiplicity: i64,
    /// The divisor `A` with `K_V = (K_X + A)|_V`.
    adjunction: DivisorClass,
}

/// Build a model from table parameters: `tail` is `a_1..a_n`
/// (degree 1: `[a]`), `twists` the twist data.
pub fn build_model(degree: Degree, tail: &[i64], twists: &[i64]) -> Result<FibrationModel> {
    let twists = Twists::from_slice(degree, twists)?;
    if degree == Degree::D1 {
        if tail.len() != 1 {
            return Err(Error::InvalidBundle(format!(
                "the weighted bundle takes one weight a, got {tail:?}"
            )));
        }
        let Twists::K(k) = twists else {
            unreachable!("arity checked")
        };
        return FibrationModel::degree_one(tail[0], -2 * k, -3 * k, k);
    }
    let bundle = BundleSpec::from_tail(tail)?;
    FibrationModel::new(degree, bundle, twists)
}

impl FibrationModel {
    /// Build a model on a split bundle.
    pub fn new(degree: Degree, bundle: BundleSpec, twists: Twists) -> Result<Self> {
        let rank = degree.bundle_rank().ok_or_else(|| {
            Error::InvalidBundle("degree 1 lives on a weighted bundle".to_string())
        })?;
        if bundle.rank() != rank {
            return Err(Error::WrongRank {
                degree: degree.value(),
                expected: rank,
                got: bundle.rank(),
            });
        }
        let ring = bundle.ring();
        let div = |a: i64, b: i64| ring.divisor(&DivisorClass::int(a, b));
        let bad = || Error::WrongTwists {
            degree: degree.value(),
            got: format!("{twists:?}"),
        };
        let (v_cycle, multiplicity, adjunction) = match (degree, &twists) {
            (Degree::D9, Twists::None) => (ring.one(), 1, DivisorClass::int(0, 0)),
            (Degree::D8, Twists::K(k)) => (div(2, *k), 1, DivisorClass::int(2, *k)),
            (Degree::D3, Twists::K(k)) => (div(3, *k), 1, DivisorClass::int(3, *k)),
            (Degree::D2, Twists::K(k)) => (ring.one(), 2, DivisorClass::int(2, *k)),
            (Degree::D4, Twists::Pair(k1, k2)) => {
                if k1 > k2 {
                    return Err(bad());
                }
                (
                    ring.mul(&div(2, *k1), &div(2, *k2))?,
                    1,
                    DivisorClass::int(4, k1 + k2),
                )
            }
            (Degree::D5, Twists::Five(k)) => {
                if k.windows(2).any(|w| w[0] > w[1]) {
                    return Err(bad());
                }
                let tm = twist_matrix(k)?;
                let n = bundle.n();
                let cycle = ChowClass::from_terms(n, &[(3, 0, q(5)), (2, 1, q(3 * tm.t))]);
                (cycle, 1, DivisorClass::int(5, tm.t))
            }
            _ => return Err(bad()),
        };
        Ok(Self {
            degree,
            ambient: Ambient::Split(bundle),
            twists,
            v_cycle,
            multiplicity,
            adjunction,
        })
    }

    /// Build the degree-1 model `V in |6H + 6kF|` on `P[0,a;b;c]`.
    pub fn degree_one(a: i64, b: i64, c: i64, k: i64) -> Result<Self> {
        if b != -2 * k || c != -3 * k {
            return Err(Error::WeightedTwistMismatch { b, c, k });
        }
        if a < 0 {
            return Err(Error::InvalidBundle(format!("weight a = {a} is negative")));
        }
        let wb = WeightedBundleSpec::new(a, b, c);
        let ring = wb.ring();
        let v_cycle = ring.divisor(&DivisorClass::int(6, 6 * k));
        Ok(Self {
            degree: Degree::D1,
            ambient: Ambient::Weighted(wb),
            twists: Twists::K(k),
            v_cycle,
            multiplicity: 1,
            adjunction: DivisorClass::int(6, 6 * k),
        })
    }

    pub fn degree(&self) -> Degree {
        self.degree
    }

    pub fn ambient(&self) -> &Ambient {
        &self.ambient
    }

    pub fn twists(&self) -> &Twists {
        &self.twists
    }

    pub fn v_cycle(&self) -> &ChowClass {
        &self.v_cycle
    }

    pub fn multiplicity(&self) -> i64 {
        self.multiplicity
    }

    /// The split bundle, if the ambient space is one.
    pub fn bundle(&self) -> Option<&BundleSpec> {
        match &self.ambient {
            Ambient::Split(b) => Some(b),
            Ambient::Weighted(_) => None,
        }
    }

    /// The weighted bundle of a degree-1 model.
    pub fn weighted(&self) -> Option<&WeightedBundleSpec> {
        match &self.ambient {
            Ambient::Weighted(w) => Some(w),
            Ambient::Split(_) => None,
        }
    }

    /// Full weight list: `a_0..a_n` for split bundles, `[0, a]` in degree 1.
    pub fn weights(&self) -> Vec<i64> {
        match &self.ambient {
            Ambient::Split(b) => b.weights().to_vec(),
            Ambient::Weighted(w) => vec![0, w.a],
        }
    }

    /// Weights without the leading `a_0 = 0`.
    pub fn tail(&self) -> Vec<i64> {
        self.weights()[1..].to_vec()
    }

    /// Sum of the split weights, or `a` in degree 1.
    pub fn weight_sum(&self) -> i64 {
        self.weights().iter().sum()
    }

    /// The integer `t = (k_1 + ... + k_5)/2` of a degree-5 model.
    pub fn t(&self) -> Option<i64> {
        match &self.twists {
            Twists::Five(k) => Some(k.iter().sum::<i64>() / 2),
            _ => None,
        }
    }

    /// Twist matrix of a degree-5 model.
    pub fn w_matrix(&self) -> Option<TwistMatrix> {
        match &self.twists {
            Twists::Five(k) => twist_matrix(k).ok(),
            _ => None,
        }
    }

    /// Degree on `V` of the product of the given divisors restricted to `V`.
    pub fn deg_on_v(&self, divisors: &[DivisorClass]) -> Q {
        let ring = self.ambient.ring();
        let mut classes: Vec<ChowClass> = divisors.iter().map(|d| ring.divisor(d)).collect();
        classes.push(self.v_cycle.clone());
        let prod = ring
            .product(&classes)
            .expect("classes share the ambient ring");
        ring.degree(&prod).expect("same ring") * q(self.multiplicity)
    }

    /// `deg(x . [V])` for an arbitrary class `x` of the ambient ring.
    pub fn deg_class_on_v(&self, x: &ChowClass) -> Result<Q> {
        let ring = self.ambient.ring();
        let prod = ring.mul(x, &self.v_cycle)?;
        Ok(ring.degree(&prod)? * q(self.multiplicity))
    }

    /// Canonical sort key: descending `(-K_V)^3`, then ascending weights and twists.
    pub fn order_key(&self) -> (Q, Vec<i64>, Vec<i64>) {
        (-anticanonical_cube(self), self.tail(), self.twists.to_vec())
    }

    /// Ambient bundle and linear system, e.g. `P[0^3,1] (2,0)`.
    pub fn label(&self) -> String {
        format!("{} {}", self.ambient_label(), self.twist_label())
    }

    /// `P[0^3,1]` or `P[0,1;0;0]`.
    pub fn ambient_label(&self) -> String {
        match &self.ambient {
            Ambient::Split(b) => b.to_string(),
            Ambient::Weighted(w) => w.to_string(),
        }
    }

    /// The linear systems cutting out `V`, e.g. `(2,-1)` or `(2,0)(2,1)`.
    pub fn twist_label(&self) -> String {
        match (&self.degree, &self.twists) {
            (Degree::D9, _) => "V=X".to_string(),
            (Degree::D8, Twists::K(k)) => format!("({},{})", 2, k),
            (Degree::D3, Twists::K(k)) => format!("({},{})", 3, k),
            (Degree::D2, Twists::K(k)) => format!("branch ({},{})", 4, 2 * k),
            (Degree::D1, Twists::K(k)) => format!("({},{})", 6, 6 * k),
            (Degree::D4, Twists::Pair(a, b)) => format!("(2,{a})(2,{b})"),
            (Degree::D5, Twists::Five(k)) => format!("k=({})", compact_list(k)),
            _ => unreachable!("twist arity is validated at construction"),
        }
    }
}

impl fmt::Display for FibrationModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "d={} {}", self.degree, self.label())
    }
}

/// `-K_V` by adjunction: `-K_X - A` restricted to `V`.
pub fn anticanonical(model: &FibrationModel) -> DivisorClass {
    let (s, c) = model.ambient.anticanonical_coefficients();
    let a = &model.adjunction;
    DivisorClass::new(q(s) - &a.alpha, q(2 - c) - &a.beta)
}

/// `(-K_V)^3`.
pub fn anticanonical_cube(model: &FibrationModel) -> Q {
    let k = anticanonical(model);
    model.deg_on_v(&[k.clone(), k.clone(), k])
}

/// The class `T = prod (H - a_i F)` over the two largest weights.
fn d_subbundle(model: &FibrationModel) -> Result<ChowClass> {
    let bundle = match (&model.ambient, model.degree) {
        (_, Degree::D1 | Degree::D9) => return Err(Error::NoDClass(model.degree.value())),
        (Ambient::Split(b), _) => b,
        (Ambient::Weighted(_), d) => return Err(Error::NoDClass(d.value())),
    };
    let ring = bundle.ring();
    let w = bundle.weights();
    let n = bundle.n();
    let top: Vec<ChowClass> = [w[n - 1], w[n]]
        .iter()
        .map(|&a| ring.divisor(&DivisorClass::int(1, -a)))
        .collect();
    ring.product(&top)
}

/// The curve `D = T . V` as `lambda l + sigma s_0`.
pub fn d_class(model: &FibrationModel) -> Result<CurveClass> {
    let t = d_subbundle(model)?;
    let ring = model.ambient.ring();
    let lambda = model.deg_class_on_v(&ring.mul(&t, &ring.h())?)?;
    let sigma = model.deg_class_on_v(&ring.mul(&t, &ring.f())?)?;
    Ok(CurveClass::new(lambda, sigma))
}

fn constraint(id: &'static str, value: Q, relation: Relation) -> Constraint {
    Constraint {
        id,
        value,
        relation,
    }
}

/// Evaluate the inequality system of a model.
///
/// The nef and effectivity values are the intersection numbers `-K_V . D` and
/// `H . D`; bigness is `(-K_V)^3 > 0`. Degrees 1 and 9 pair `-K` with a section
/// instead of `D`.
pub fn inequality_values(model: &FibrationModel) -> ConstraintReport {
    use Relation::*;
    let cube = anticanonical_cube(model);
    let mut out = Vec::new();
    match model.degree {
        Degree::D9 => {
            let b = model.bundle().expect("split");
            let ring = b.ring();
            let s0 = crate::chowring::minimal_section_class(b);
            let k = ring.divisor(&anticanonical(model));
            let nef = ring
                .degree(&ring.mul(&k, &s0).expect("same ring"))
                .expect("same ring");
            out.push(constraint("nef", nef, NonNegative));
            out.push(constraint("big", cube, Positive));
        }
        Degree::D1 => {
            let w = model.weighted().expect("weighted");
            let Twists::K(k) = model.twists else {
                unreachable!()
            };
            out.push(constraint("nef", q(2 * (1 - k) - w.a), NonNegative));
            out.push(constraint("eff", q(w.a + k), NonNegative));
            out.push(constraint("big", cube, Positive));
            out.push(constraint("b", q(w.b + 2 * k), Forced));
            out.push(constraint("c", q(w.c + 3 * k), Forced));
            out.push(constraint("neg", q((w.a + 6 * k).max(k)), NonNegative));
        }
        _ => {
            let d = d_class(model).expect("D is defined for degrees 2, 3, 4, 5, 8");
            let k = anticanonical(model);
            out.push(constraint("nef", k.pair(&d), NonNegative));
            out.push(constraint("eff", d.lambda.clone(), NonNegative));
            out.push(constraint("big", cube, Positive));
            let a = model.weights();
            match (&model.degree, &model.twists) {
                (Degree::D2, Twists::K(k)) => {
                    out.push(constraint("branch", q(a[2] + 2 * k), NonNegative));
                }
                (Degree::D4, Twists::Pair(k1, k2)) => {
                    out.push(constraint("a4k1", q(a[4] + k1), NonNegative));
                    out.push(constraint("a4k2", q(a[4] + k2), NonNegative));
                }
                (Degree::D5, Twists::Five(_)) => {
                    let m = model.w_matrix().expect("degree 5");
                    let w = |i, j| m.w(i, j);
                    out.push(constraint("w12", q(a[0] + w(1, 2)), NonNegative));
                    out.push(constraint("a5w35", q(a[5] + w(3, 5)), NonNegative));
                    out.push(constraint("a2w14", q(a[2] + w(1, 4)), NonNegative));
                    out.push(constraint("a4w25", q(a[4] + w(2, 5)), NonNegative));
                    out.push(constraint("a4w34", q(a[4] + w(3, 4)), NonNegative));
                    out.push(constraint(
                        "or",
                        q((a[0] + w(1, 4)).max(a[5] + w(4, 5))),
                        NonNegative,
                    ));
                    out.push(constraint("a1w14", q(a[1] + w(1, 4)), NonNegative));
                    out.push(constraint("a1w23", q(a[1] + w(2, 3)), NonNegative));
                }
                _ => {}
            }
        }
    }
    ConstraintReport { entries: out }
}

/// The closed-form nef, effectivity and bigness expressions as printed in the
/// classification tables, evaluated on a model. Degree 4 bigness uses the
/// printed expression `2(12 - sum a_i - 5(k1 + k2))`, which does not agree with
/// the intrinsic cube; see [`big4_intrinsic`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrintedForms {
    pub nef: Option<i64>,
    pub eff: Option<i64>,
    pub big: Option<i64>,
}

/// Printed closed forms for a model.
pub fn printed_forms(model: &FibrationModel) -> PrintedForms {
    let a = model.weights();
    let c1 = model.weight_sum();
    match (&model.degree, &model.twists) {
        (Degree::D8, Twists::K(k)) => PrintedForms {
            nef: Some(2 * (a[1] + 2 - a[2] - a[3])),
            eff: Some(2 * a[1] + k),
            big: Some(8 * (6 - c1 - 2 * k)),
        },
        (Degree::D2, Twists::K(k)) => PrintedForms {
            nef: Some(-(a[1] + a[2] + k - 2)),
            eff: None,
            big: Some(2 * (6 - 2 * a[1] - 2 * a[2] - 3 * k)),
        },
        (Degree::D3, Twists::K(k)) => PrintedForms {
            nef: Some(6 - 3 * a[2] - 3 * a[3] - 2 * k),
            eff: Some(3 * a[1] + k),
            big: Some(9 - 3 * c1 - 4 * k),
        },
        (Degree::D4, Twists::Pair(k1, k2)) => PrintedForms {
            nef: Some(2 * (4 - k1 - k2 - 2 * (a[3] + a[4]))),
            eff: Some(2 * (2 * (a[1] + a[2]) + k1 + k2)),
            big: Some(2 * (12 - c1 - 5 * (k1 + k2))),
        },
        (Degree::D5, Twists::Five(_)) => {
            let t = model.t().expect("degree 5");
            PrintedForms {
                nef: Some(10 - 5 * (a[4] + a[5]) - 2 * t),
                eff: Some(5 * (a[1] + a[2] + a[3]) + 3 * t),
                big: Some(30 - 12 * t - 10 * c1),
            }
        }
        (Degree::D1, Twists::K(k)) => PrintedForms {
            nef: Some(2 * (1 - k) - a[1]),
            eff: Some(a[1] + k),
            big: Some(6 - 2 * a[1] - 4 * k),
        },
        (Degree::D9, _) => PrintedForms {
            nef: Some(2 - a[1] - a[2]),
            eff: None,
            big: Some(54),
        },
        _ => PrintedForms {
            nef: None,
            eff: None,
            big: None,
        },
    }
}

/// Fixed positive factors `intrinsic / printed` for (nef, eff, big) per degree.
/// `None` marks a value without a faithful printed form.
pub fn printed_factors(degree: Degree) -> [Option<Q>; 3] {
    let one = || Some(Q::one());
    match degree {
        Degree::D8 | Degree::D5 | Degree::D1 => [one(), one(), one()],
        Degree::D2 => [Some(q(2)), None, one()],
        Degree::D3 => [one(), one(), Some(q(2))],
        Degree::D4 => [one(), one(), None],
        Degree::D9 => [one(), None, one()],
    }
}

/// The intrinsic degree-4 cube `24 - 8 sum a_i - 10(k1 + k2)`.
pub fn big4_intrinsic(tail: &[i64], k1: i64, k2: i64) -> i64 {
    24 - 8 * tail.iter().sum::<i64>() - 10 * (k1 + k2)
}

/// Whether the 2-cycle `p H^4 + q H^3 F` on a degree-5 ambient lies in the
/// span `5a H^4 + (3ta + 5b) H^3 F` of restrictions of `H` and `F`.
pub fn picard_expressible(model: &FibrationModel, p: &Q, qq: &Q) -> bool {
    let Some(t) = model.t() else { return false };
    if !p.is_integer() || !qq.is_integer() {
        return false;
    }
    let five = q(5);
    let a = p / &five;
    if !a.is_integer() {
        return false;
    }
    let b = (qq - q(3 * t) * a) / five;
    b.is_integer()
}

/// `(aH_V + bF_V)^3`.
pub fn cube_form(model: &FibrationModel, a: i64, b: i64) -> Q {
    let d = DivisorClass::int(a, b);
    model.deg_on_v(&[d.clone(), d.clone(), d])
}

/// `deg(H^4)` and `deg(H^3 F)` in the weighted ring of degree-1 models.
pub fn weighted_point_degrees(wb: &WeightedBundleSpec) -> (Q, Q) {
    let ring = wb.ring();
    let h4 = ring.pow(&ring.h(), 4).expect("same ring");
    let h3f = ring
        .mul(&ring.pow(&ring.h(), 3).expect("same ring"), &ring.f())
        .expect("same ring");
    (
        ring.degree(&h4).expect("same ring"),
        ring.degree(&h3f).expect("same ring"),
    )
}

/// The closed form `6 - 2a - 4k` for the degree-1 anticanonical cube.
pub fn degree_one_cube_closed_form(a: i64, k: i64) -> Q {
    q(6 - 2 * a - 4 * k)
}
