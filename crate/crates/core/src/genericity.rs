//! Randomized genericity checks over a prime field.
//!
//! A general section of `O(d)` on the projective line is modelled by a binary
//! form of degree `d` with uniformly random coefficients in `F_p`. Questions
//! such as "do general sections share a zero" or "does a general matrix of
//! sections drop rank somewhere" are then decided exactly over `F_p`. Each
//! check fails to reflect the generic answer only with probability `O(deg/p)`.
//! All randomness flows from a caller-supplied seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// The prime `2^31 - 1`.
pub const PRIME: u64 = 2_147_483_647;

/// Seed used when the caller does not supply one.
pub const DEFAULT_SEED: u64 = 20_031_107;

/// Source of general sections.
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    fn coeff(&mut self) -> u64 {
        self.rng.gen_range(0..PRIME)
    }

    /// A general section of `O(d)`, dehomogenized at the second coordinate.
    /// Negative degrees give the zero section.
    pub fn section(&mut self, d: i64) -> Poly {
        if d < 0 {
            return Poly::zero();
        }
        Poly::new((0..=d).map(|_| self.coeff()).collect())
    }

    /// A uniformly random field element, used as an evaluation point.
    pub fn point(&mut self) -> u64 {
        self.coeff()
    }
}

/// Univariate polynomial over `F_p`, coefficients in ascending order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly(Vec<u64>);

fn add_mod(a: u64, b: u64) -> u64 {
    (a + b) % PRIME
}

fn sub_mod(a: u64, b: u64) -> u64 {
    (a + PRIME - b) % PRIME
}

fn mul_mod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % PRIME as u128) as u64
}

fn inv_mod(a: u64) -> u64 {
    let mut result = 1u64;
    let mut base = a % PRIME;
    let mut e = PRIME - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = mul_mod(result, base);
        }
        base = mul_mod(base, base);
        e >>= 1;
    }
    result
}

impl Poly {
    pub fn new(mut c: Vec<u64>) -> Self {
        while c.last() == Some(&0) {
            c.pop();
        }
        Self(c)
    }

    pub fn zero() -> Self {
        Self(Vec::new())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.0.len().max(o.0.len());
        let get = |v: &Vec<u64>, i: usize| v.get(i).copied().unwrap_or(0);
        Self::new(
            (0..n)
                .map(|i| add_mod(get(&self.0, i), get(&o.0, i)))
                .collect(),
        )
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.0.len().max(o.0.len());
        let get = |v: &Vec<u64>, i: usize| v.get(i).copied().unwrap_or(0);
        Self::new(
            (0..n)
                .map(|i| sub_mod(get(&self.0, i), get(&o.0, i)))
                .collect(),
        )
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut r = vec![0u64; self.0.len() + o.0.len() - 1];
        for (i, &a) in self.0.iter().enumerate() {
            for (j, &b) in o.0.iter().enumerate() {
                r[i + j] = add_mod(r[i + j], mul_mod(a, b));
            }
        }
        Self::new(r)
    }

    pub fn eval(&self, x: u64) -> u64 {
        self.0
            .iter()
            .rev()
            .fold(0, |acc, &c| add_mod(mul_mod(acc, x), c))
    }

    fn rem(&self, m: &Self) -> Self {
        let mut a = self.0.clone();
        let lead_inv = inv_mod(*m.0.last().expect("nonzero modulus"));
        while a.len() >= m.0.len() && !a.is_empty() {
            let c = mul_mod(*a.last().unwrap(), lead_inv);
            let shift = a.len() - m.0.len();
            for (i, &b) in m.0.iter().enumerate() {
                a[shift + i] = sub_mod(a[shift + i], mul_mod(c, b));
            }
            while a.last() == Some(&0) {
                a.pop();
            }
        }
        Self(a)
    }

    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a
    }
}

/// A binary form: a dehomogenized polynomial together with its homogeneous
/// degree, so that a drop in actual degree records a zero at infinity.
#[derive(Clone, Debug)]
pub struct Form {
    pub poly: Poly,
    pub degree: i64,
}

/// Whether the given binary forms have a common zero on the projective line.
/// An empty family, or one made of zero forms, vanishes everywhere.
pub fn common_zero(forms: &[Form]) -> bool {
    let nonzero: Vec<&Form> = forms.iter().filter(|f| !f.poly.is_zero()).collect();
    if nonzero.is_empty() {
        return true;
    }
    let at_infinity = nonzero
        .iter()
        .all(|f| (f.poly.degree().unwrap_or(0) as i64) < f.degree);
    if at_infinity {
        return true;
    }
    let g = nonzero
        .iter()
        .skip(1)
        .fold(nonzero[0].poly.clone(), |g, f| g.gcd(&f.poly));
    g.degree().unwrap_or(0) >= 1
}

/// A matrix of general sections whose `(i, j)` entry lies in
/// `O(row_offsets[i] + col_offsets[j])`.
pub struct SectionMatrix {
    pub row_offsets: Vec<i64>,
    pub col_offsets: Vec<i64>,
    pub entries: Vec<Vec<Poly>>,
}

impl SectionMatrix {
    pub fn general(row_offsets: &[i64], col_offsets: &[i64], sampler: &mut Sampler) -> Self {
        let entries = row_offsets
            .iter()
            .map(|&r| {
                col_offsets
                    .iter()
                    .map(|&c| sampler.section(r + c))
                    .collect()
            })
            .collect();
        Self {
            row_offsets: row_offsets.to_vec(),
            col_offsets: col_offsets.to_vec(),
            entries,
        }
    }

    pub fn rows(&self) -> usize {
        self.row_offsets.len()
    }

    pub fn cols(&self) -> usize {
        self.col_offsets.len()
    }

    /// Rank over the function field, computed at a random point.
    pub fn generic_rank(&self, sampler: &mut Sampler) -> usize {
        let x = sampler.point();
        let m: Vec<Vec<u64>> = self
            .entries
            .iter()
            .map(|row| row.iter().map(|p| p.eval(x)).collect())
            .collect();
        rank_mod_p(m)
    }

    /// Whether the matrix has full rank `min(rows, cols)` at every point of
    /// the projective line, including infinity.
    pub fn everywhere_full_rank(&self) -> bool {
        let r = self.rows().min(self.cols());
        if r == 0 {
            return true;
        }
        let mut forms = Vec::new();
        for rows in subsets(self.rows(), r) {
            for cols in subsets(self.cols(), r) {
                let sub: Vec<Vec<Poly>> = rows
                    .iter()
                    .map(|&i| cols.iter().map(|&j| self.entries[i][j].clone()).collect())
                    .collect();
                let degree = rows.iter().map(|&i| self.row_offsets[i]).sum::<i64>()
                    + cols.iter().map(|&j| self.col_offsets[j]).sum::<i64>();
                forms.push(Form {
                    poly: det(&sub),
                    degree,
                });
            }
        }
        !common_zero(&forms)
    }
}

/// All `k`-element subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Determinant by cofactor expansion; used only for small minors.
pub fn det(m: &[Vec<Poly>]) -> Poly {
    match m.len() {
        0 => Poly::new(vec![1]),
        1 => m[0][0].clone(),
        n => {
            let mut acc = Poly::zero();
            for j in 0..n {
                let minor: Vec<Vec<Poly>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|(c, _)| *c != j)
                            .map(|(_, p)| p.clone())
                            .collect()
                    })
                    .collect();
                let term = m[0][j].mul(&det(&minor));
                acc = if j % 2 == 0 {
                    acc.add(&term)
                } else {
                    acc.sub(&term)
                };
            }
            acc
        }
    }
}

/// Rank of a matrix over `F_p` by Gaussian elimination.
pub fn rank_mod_p(mut m: Vec<Vec<u64>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(rank, piv);
        let inv = inv_mod(m[rank][c]);
        let pivot = m[rank].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != rank && row[c] != 0 {
                let f = mul_mod(row[c], inv);
                for (x, &p) in row.iter_mut().zip(&pivot) {
                    *x = sub_mod(*x, mul_mod(f, p));
                }
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gcd_detects_shared_root() {
        // (x - 1)(x - 2) and (x - 1)(x - 3)
        let a = Poly::new(vec![2, PRIME - 3, 1]);
        let b = Poly::new(vec![3, PRIME - 4, 1]);
        assert_eq!(a.gcd(&b).degree(), Some(1));
        assert!(common_zero(&[
            Form { poly: a, degree: 2 },
            Form { poly: b, degree: 2 }
        ]));
    }

    #[test]
    fn constants_have_no_common_zero() {
        let f = Form {
            poly: Poly::new(vec![5]),
            degree: 0,
        };
        assert!(!common_zero(&[f]));
    }

    #[test]
    fn degree_drop_is_a_zero_at_infinity() {
        let f = Form {
            poly: Poly::new(vec![1, 1]),
            degree: 2,
        };
        let g = Form {
            poly: Poly::new(vec![7]),
            degree: 1,
        };
        assert!(common_zero(&[f, g]));
    }

    #[test]
    fn two_general_linear_forms_are_independent() {
        let mut s = Sampler::new(1);
        let forms: Vec<Form> = (0..2)
            .map(|_| Form {
                poly: s.section(1),
                degree: 1,
            })
            .collect();
        assert!(!common_zero(&forms));
    }

    #[test]
    fn rank_of_identity() {
        let m = vec![vec![1, 0, 0], vec![0, 1, 0]];
        assert_eq!(rank_mod_p(m), 2);
        assert_eq!(rank_mod_p(vec![vec![2, 4], vec![1, 2]]), 1);
    }

    #[test]
    fn subsets_count() {
        assert_eq!(subsets(6, 3).len(), 20);
        assert_eq!(subsets(4, 0), vec![Vec::<usize>::new()]);
    }
}
