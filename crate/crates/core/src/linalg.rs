//! Small dense linear algebra: generic Gaussian solves, modular rank tracking
//! and certified exact kernels over the rationals.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::scalar::{Rational, Scalar};

pub type Matrix<T> = Vec<Vec<T>>;

pub fn identity<T: Scalar>(n: usize) -> Matrix<T> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { T::one() } else { T::zero() }).collect())
        .collect()
}

pub fn mat_mul<T: Scalar>(a: &Matrix<T>, b: &Matrix<T>) -> Matrix<T> {
    let n = a.len();
    let k = b.len();
    let m = b.first().map_or(0, Vec::len);
    let mut out = vec![vec![T::zero(); m]; n];
    for i in 0..n {
        for l in 0..k {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..m {
                if !b[l][j].is_zero() {
                    out[i][j] = out[i][j].clone() + a[i][l].clone() * b[l][j].clone();
                }
            }
        }
    }
    out
}

pub fn transpose<T: Clone>(a: &Matrix<T>) -> Matrix<T> {
    let m = a.first().map_or(0, Vec::len);
    (0..m).map(|j| a.iter().map(|row| row[j].clone()).collect()).collect()
}

/// Solves `a * x = b` for square `a`. Returns `None` when `a` is singular
/// (exactly, or below `1e-12` relative pivot size for floats).
pub fn solve<T: Scalar>(mut a: Matrix<T>, mut b: Matrix<T>) -> Option<Matrix<T>> {
    let n = a.len();
    let scale = a
        .iter()
        .flatten()
        .map(|v| v.to_f64().abs())
        .fold(0.0, f64::max)
        .max(1.0);
    for col in 0..n {
        let pivot = if T::EXACT {
            (col..n).find(|&r| !a[r][col].is_zero())?
        } else {
            let r = (col..n).max_by(|&x, &y| {
                a[x][col]
                    .to_f64()
                    .abs()
                    .total_cmp(&a[y][col].to_f64().abs())
            })?;
            if a[r][col].to_f64().abs() <= 1e-12 * scale {
                return None;
            }
            r
        };
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = T::one() / a[col][col].clone();
        for j in col..n {
            a[col][j] = a[col][j].clone() * inv.clone();
        }
        for v in b[col].iter_mut() {
            *v = v.clone() * inv.clone();
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for j in col..n {
                let d = f.clone() * a[col][j].clone();
                a[r][j] = a[r][j].clone() - d;
            }
            for j in 0..b[r].len() {
                let d = f.clone() * b[col][j].clone();
                b[r][j] = b[r][j].clone() - d;
            }
        }
    }
    Some(b)
}

/// 61-bit and nearby primes used for modular elimination.
pub const PRIMES: [u64; 6] = [
    (1 << 61) - 1,
    (1 << 62) - 57,
    (1 << 60) - 93,
    (1 << 59) - 55,
    (1 << 58) - 27,
    (1 << 63) - 25,
];

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    acc
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn bigint_mod(v: &BigInt, p: u64) -> u64 {
    let r = v.mod_floor(&BigInt::from(p));
    r.to_u64().unwrap_or(0)
}

/// Image of a rational in `Z/pZ`, or `None` if its denominator vanishes mod `p`.
pub fn rational_mod(r: &Rational, p: u64) -> Option<u64> {
    let d = bigint_mod(r.denom(), p);
    if d == 0 {
        return None;
    }
    Some(mul_mod(bigint_mod(r.numer(), p), inv_mod(d, p), p))
}

/// Incrementally maintained row echelon form over `Z/pZ`.
#[derive(Debug, Clone)]
pub struct ModEchelon {
    p: u64,
    width: usize,
    rows: Vec<Vec<u64>>,
    pivots: Vec<usize>,
}

impl ModEchelon {
    pub fn new(width: usize, p: u64) -> Self {
        Self {
            p,
            width,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Inserts a row; returns `true` when the rank grew.
    pub fn insert(&mut self, mut row: Vec<u64>) -> bool {
        debug_assert_eq!(row.len(), self.width);
        let p = self.p;
        for (stored, &pc) in self.rows.iter().zip(&self.pivots) {
            let f = row[pc];
            if f == 0 {
                continue;
            }
            for (x, &y) in row.iter_mut().zip(stored) {
                if y != 0 {
                    *x = (*x + p - mul_mod(f, y, p)) % p;
                }
            }
        }
        let Some(pc) = row.iter().position(|&v| v != 0) else {
            return false;
        };
        let inv = inv_mod(row[pc], p);
        for x in row.iter_mut() {
            *x = mul_mod(*x, inv, p);
        }
        self.rows.push(row);
        self.pivots.push(pc);
        true
    }
}

/// Reduced row echelon form mod `p`: returns pivot columns and the reduced rows.
fn rref_mod(rows: &[Vec<u64>], width: usize, p: u64) -> (Vec<usize>, Vec<Vec<u64>>) {
    let mut a: Vec<Vec<u64>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..width {
        let Some(pr) = (r..a.len()).find(|&i| a[i][col] != 0) else {
            continue;
        };
        a.swap(r, pr);
        let inv = inv_mod(a[r][col], p);
        for x in a[r].iter_mut() {
            *x = mul_mod(*x, inv, p);
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r || row[col] == 0 {
                continue;
            }
            let f = row[col];
            for (x, &y) in row.iter_mut().zip(&pivot_row) {
                if y != 0 {
                    *x = (*x + p - mul_mod(f, y, p)) % p;
                }
            }
        }
        pivots.push(col);
        r += 1;
        if r == a.len() {
            break;
        }
    }
    a.truncate(r);
    (pivots, a)
}

/// Rational reconstruction of `a mod n` with numerator and denominator
/// bounded by `sqrt(n / 2)`.
fn reconstruct(a: &BigInt, n: &BigInt) -> Option<Rational> {
    let bound = (n / BigInt::from(2)).sqrt();
    let (mut r0, mut r1) = (n.clone(), a.mod_floor(n));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound {
        return None;
    }
    if r1.gcd(&t1) != BigInt::one() {
        return None;
    }
    Some(Rational::new(r1, t1))
}

/// Scales a rational row to a primitive-ish integer row (clears denominators).
pub fn integer_row(row: &[Rational]) -> Vec<BigInt> {
    let lcm = row
        .iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    row.iter()
        .map(|v| v.numer() * (&lcm / v.denom()))
        .collect()
}

fn dot_is_zero(row: &[BigInt], v: &[BigInt]) -> bool {
    let mut acc = BigInt::zero();
    for (a, b) in row.iter().zip(v) {
        if a.sign() != Sign::NoSign && b.sign() != Sign::NoSign {
            acc += a * b;
        }
    }
    acc.is_zero()
}

/// Kernel of the rational matrix whose rows are `rows` (all of width `width`).
///
/// The kernel is computed modulo word-size primes, lifted by Chinese
/// remaindering and rational reconstruction, and then verified against every
/// row in exact integer arithmetic. Since the rank over `Q` is at least the
/// rank modulo any prime, a verified lift of the full modular kernel is the
/// exact kernel. Falls back to direct rational elimination if lifting fails.
pub fn rational_kernel(rows: &[Vec<Rational>], width: usize) -> Vec<Vec<Rational>> {
    let int_rows: Vec<Vec<BigInt>> = rows.iter().map(|r| integer_row(r)).collect();
    let mut modulus = BigInt::one();
    let mut pivots_ref: Option<Vec<usize>> = None;
    // CRT-accumulated RREF entries, indexed [row][col].
    let mut acc: Vec<Vec<BigInt>> = Vec::new();

    for &p in PRIMES.iter() {
        let reduced: Vec<Vec<u64>> = int_rows
            .iter()
            .map(|r| r.iter().map(|v| bigint_mod(v, p)).collect())
            .collect();
        let (pivots, rref) = rref_mod(&reduced, width, p);
        let restart = match &pivots_ref {
            None => true,
            // A lower modular rank, or a later pivot pattern at equal rank,
            // marks the earlier prime as unlucky.
            Some(prev) => {
                if pivots.len() != prev.len() {
                    pivots.len() > prev.len()
                } else if pivots != *prev {
                    pivots < *prev
                } else {
                    false
                }
            }
        };
        if restart {
            acc = rref
                .iter()
                .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
                .collect();
            modulus = BigInt::from(p);
            pivots_ref = Some(pivots);
        } else if pivots_ref.as_ref() == Some(&pivots) {
            let pb = BigInt::from(p);
            let inv = BigInt::from(inv_mod(bigint_mod(&modulus, p), p));
            for (arow, rrow) in acc.iter_mut().zip(&rref) {
                for (a, &r) in arow.iter_mut().zip(rrow) {
                    // x = a + M * ((r - a) * M^{-1} mod p)
                    let k = ((BigInt::from(r) - &*a) * &inv).mod_floor(&pb);
                    *a = &*a + &modulus * k;
                }
            }
            modulus *= &pb;
        } else {
            continue;
        }

        let pivots = pivots_ref.as_ref().expect("set above");
        if let Some(kernel) = lift_kernel(&acc, pivots, width, &modulus) {
            let ints: Vec<Vec<BigInt>> = kernel.iter().map(|v| integer_row(v)).collect();
            if ints
                .iter()
                .all(|v| int_rows.iter().all(|row| dot_is_zero(row, v)))
            {
                return kernel;
            }
        }
    }
    direct_kernel(rows, width)
}

fn lift_kernel(
    rref: &[Vec<BigInt>],
    pivots: &[usize],
    width: usize,
    modulus: &BigInt,
) -> Option<Vec<Vec<Rational>>> {
    let mut lifted: Vec<Vec<Rational>> = Vec::with_capacity(rref.len());
    for row in rref {
        let mut out = Vec::with_capacity(width);
        for v in row {
            out.push(reconstruct(v, modulus)?);
        }
        lifted.push(out);
    }
    Some(kernel_from_rref(&lifted, pivots, width))
}

fn kernel_from_rref(rref: &[Vec<Rational>], pivots: &[usize], width: usize) -> Vec<Vec<Rational>> {
    let free: Vec<usize> = (0..width).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); width];
            v[f] = Rational::one();
            for (row, &pc) in rref.iter().zip(pivots) {
                v[pc] = -row[f].clone();
            }
            v
        })
        .collect()
}

/// Kernel by exact rational Gauss-Jordan elimination.
pub fn direct_kernel(rows: &[Vec<Rational>], width: usize) -> Vec<Vec<Rational>> {
    let mut a: Vec<Vec<Rational>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..width {
        let Some(pr) = (r..a.len()).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(r, pr);
        let inv = Rational::one() / a[r][col].clone();
        for x in a[r].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x = &*x - &f * y;
                }
            }
        }
        pivots.push(col);
        r += 1;
        if r == a.len() {
            break;
        }
    }
    a.truncate(r);
    kernel_from_rref(&a, &pivots, width)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn is_prime(n: u64) -> bool {
        // Deterministic Miller-Rabin for 64-bit integers.
        if n < 2 {
            return false;
        }
        let mut d = n - 1;
        let mut s = 0;
        while d.is_multiple_of(2) {
            d /= 2;
            s += 1;
        }
        'outer: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
            if a % n == 0 {
                continue;
            }
            let mut x = pow_mod(a, d, n);
            if x == 1 || x == n - 1 {
                continue;
            }
            for _ in 1..s {
                x = mul_mod(x, x, n);
                if x == n - 1 {
                    continue 'outer;
                }
            }
            return false;
        }
        true
    }

    #[test]
    fn moduli_are_prime() {
        for p in PRIMES {
            assert!(is_prime(p), "{p}");
        }
    }

    #[test]
    fn solve_recovers_inverse() {
        let a: Matrix<Rational> = vec![
            vec![Rational::from_i64(2), Rational::from_i64(1)],
            vec![Rational::from_i64(1), Rational::from_i64(3)],
        ];
        let inv = solve(a.clone(), identity(2)).unwrap();
        assert_eq!(mat_mul(&a, &inv), identity::<Rational>(2));
        let singular = vec![
            vec![Rational::from_i64(1), Rational::from_i64(2)],
            vec![Rational::from_i64(2), Rational::from_i64(4)],
        ];
        assert!(solve(singular, identity(2)).is_none());
    }

    #[test]
    fn modular_kernel_matches_direct_elimination() {
        let mut rng = crate::random::stream_rng(11, 0);
        for trial in 0..10 {
            let width = 9;
            let rank = 3 + trial % 5;
            let basis: Vec<Vec<Rational>> = (0..rank)
                .map(|_| {
                    (0..width)
                        .map(|_| Rational::from_ratio(rng.random_range(-50..=50), rng.random_range(1..=7)))
                        .collect()
                })
                .collect();
            // Rows are random combinations of the basis, so the rank is `rank`.
            let rows: Vec<Vec<Rational>> = (0..rank + 4)
                .map(|_| {
                    let coeffs: Vec<i64> = (0..rank).map(|_| rng.random_range(-5..=5)).collect();
                    (0..width)
                        .map(|j| {
                            basis
                                .iter()
                                .zip(&coeffs)
                                .fold(Rational::zero(), |acc, (b, &c)| acc + &b[j] * Rational::from_i64(c))
                        })
                        .collect()
                })
                .collect();
            let fast = rational_kernel(&rows, width);
            let slow = direct_kernel(&rows, width);
            assert_eq!(fast, slow);
        }
    }

    #[test]
    fn reconstruction_inverts_reduction() {
        let r = Rational::from_ratio(-355, 113);
        let p = PRIMES[0];
        let m = rational_mod(&r, p).unwrap();
        assert_eq!(reconstruct(&BigInt::from(m), &BigInt::from(p)), Some(r));
    }

    #[test]
    fn echelon_tracks_rank() {
        let p = PRIMES[0];
        let mut e = ModEchelon::new(3, p);
        assert!(e.insert(vec![1, 2, 3]));
        assert!(!e.insert(vec![2, 4, 6]));
        assert!(e.insert(vec![0, 1, 0]));
        assert!(!e.insert(vec![1, 3, 3]));
        assert_eq!(e.rank(), 2);
    }
}
