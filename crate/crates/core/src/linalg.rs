//! Exact integer linear algebra: fraction-free rank, integer kernel bases and
//! modular rank cross-checks.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

/// Two primes above 2^30 used to cross-check every exact rank.
pub const CHECK_PRIMES: [u64; 2] = [2_147_483_647, 2_147_483_629];

/// Dense row-major matrix of arbitrary-precision integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged matrix");
            for (j, x) in row.iter().enumerate() {
                m.data[i * cols + j] = x.clone().into();
            }
        }
        m
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: BigInt) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn mul_vec(&self, x: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }
}

/// Rank over the rationals by Bareiss fraction-free elimination. Every
/// intermediate entry is a minor of the input, so each division is exact.
pub fn exact_rank(m: &IntMatrix) -> usize {
    let mut a = m.to_rows();
    let (rows, cols) = (m.rows, m.cols);
    let mut prev = BigInt::one();
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        let pivot = a[rank][col].clone();
        for i in rank + 1..rows {
            let factor = a[i][col].clone();
            for j in col + 1..cols {
                let v = &pivot * &a[i][j] - &factor * &a[rank][j];
                a[i][j] = v / &prev;
            }
            a[i][col] = BigInt::zero();
        }
        prev = pivot;
        rank += 1;
    }
    rank
}

/// Rank over GF(p). Never exceeds [`exact_rank`]; equal unless `p` divides
/// every maximal nonzero minor.
pub fn rank_mod_prime(m: &IntMatrix, p: u64) -> usize {
    let pb = BigInt::from(p);
    let mut a: Vec<Vec<u64>> = (0..m.rows)
        .map(|i| {
            m.row(i)
                .iter()
                .map(|x| x.mod_floor(&pb).to_u64().unwrap())
                .collect()
        })
        .collect();
    let mut rank = 0;
    for col in 0..m.cols {
        if rank == m.rows {
            break;
        }
        let Some(piv) = (rank..m.rows).find(|&i| a[i][col] != 0) else {
            continue;
        };
        a.swap(rank, piv);
        let inv = pow_mod(a[rank][col], p - 2, p);
        for i in rank + 1..m.rows {
            if a[i][col] == 0 {
                continue;
            }
            let f = mul_mod(a[i][col], inv, p);
            for j in col..m.cols {
                let sub = mul_mod(f, a[rank][j], p);
                a[i][j] = (a[i][j] + p - sub) % p;
            }
        }
        rank += 1;
    }
    rank
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// An exact rank together with its residues modulo [`CHECK_PRIMES`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RankCheck {
    pub exact: usize,
    pub modular: [usize; 2],
}

impl RankCheck {
    pub fn agrees(&self) -> bool {
        self.modular.iter().all(|&r| r == self.exact)
    }
}

pub fn checked_rank(m: &IntMatrix) -> RankCheck {
    let exact = exact_rank(m);
    let modular = CHECK_PRIMES.map(|p| rank_mod_prime(m, p));
    debug_assert!(modular.iter().all(|&r| r <= exact));
    RankCheck { exact, modular }
}

fn content(row: &[BigInt]) -> BigInt {
    row.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

/// Integer basis of the right kernel `{x : m x = 0}` over the rationals.
/// Each basis vector is primitive (entries have gcd 1).
pub fn integer_kernel_basis(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    let (rows, cols) = (m.rows, m.cols);
    let mut a = m.to_rows();
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for col in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        // Integer Gauss–Jordan: clear the column everywhere else, then
        // divide each touched row by its content to keep entries small.
        for i in 0..rows {
            if i == r || a[i][col].is_zero() {
                continue;
            }
            let (piv, f) = (a[r][col].clone(), a[i][col].clone());
            let g = piv.gcd(&f);
            let (sp, sf) = (&piv / &g, &f / &g);
            for j in 0..cols {
                let v = &sp * &a[i][j] - &sf * &a[r][j];
                a[i][j] = v;
            }
            let c = content(&a[i]);
            if !c.is_zero() && !c.is_one() {
                for x in a[i].iter_mut() {
                    *x /= &c;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }

    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let lcm = pivots
        .iter()
        .enumerate()
        .fold(BigInt::one(), |l, (i, &pc)| l.lcm(&a[i][pc].abs()));
    free.iter()
        .map(|&fc| {
            let mut x = vec![BigInt::zero(); cols];
            x[fc] = lcm.clone();
            for (i, &pc) in pivots.iter().enumerate() {
                // a[i][pc] * x[pc] + a[i][fc] * lcm = 0
                x[pc] = -(&a[i][fc] * &lcm) / &a[i][pc];
            }
            let c = content(&x);
            x.iter_mut().for_each(|v| *v /= &c);
            x
        })
        .collect()
}
