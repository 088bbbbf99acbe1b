//! Integer lattice computations: exact kernels of integer matrices via
//! unimodular row reduction, and prime-exponent decompositions of
//! rationals.

use num::{BigInt, Integer, One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rat::Rat;

/// Basis of the full integer kernel `{k in Z^m : E k = 0}` of an integer
/// matrix given by rows of length m. Row-reduces `[E^T | I]` with
/// unimodular operations; the identity parts of the rows whose `E^T`
/// part vanishes form a lattice basis of the kernel.
pub fn integer_kernel(rows: &[Vec<BigInt>], m: usize) -> Vec<Vec<BigInt>> {
    for r in rows {
        assert_eq!(r.len(), m);
    }
    let nrows = rows.len();
    // working matrix: m rows (transposed system) of length nrows + m
    let mut work: Vec<Vec<BigInt>> = (0..m)
        .map(|i| {
            let mut row: Vec<BigInt> = (0..nrows).map(|j| rows[j][i].clone()).collect();
            for k in 0..m {
                row.push(if k == i {
                    BigInt::one()
                } else {
                    BigInt::zero()
                });
            }
            row
        })
        .collect();

    let mut pivot_row = 0usize;
    for col in 0..nrows {
        loop {
            // find the row at or below pivot_row with smallest nonzero |entry|
            let mut best: Option<usize> = None;
            for r in pivot_row..m {
                if work[r][col].is_zero() {
                    continue;
                }
                match best {
                    None => best = Some(r),
                    Some(b) => {
                        if work[r][col].abs() < work[b][col].abs() {
                            best = Some(r);
                        }
                    }
                }
            }
            let Some(b) = best else { break };
            work.swap(pivot_row, b);
            let mut finished = true;
            for r in (pivot_row + 1)..m {
                if work[r][col].is_zero() {
                    continue;
                }
                let q = div_nearest(&work[r][col], &work[pivot_row][col]);
                if !q.is_zero() {
                    for c in 0..work[r].len() {
                        let delta = q.clone() * work[pivot_row][c].clone();
                        work[r][c] -= delta;
                    }
                }
                if !work[r][col].is_zero() {
                    finished = false;
                }
            }
            if finished {
                pivot_row += 1;
                break;
            }
        }
        if pivot_row == m {
            break;
        }
    }

    work[pivot_row..]
        .iter()
        .map(|row| normalize_sign(row[nrows..].to_vec()))
        .collect()
}

fn div_nearest(a: &BigInt, b: &BigInt) -> BigInt {
    // round a/b to nearest, ties toward zero; keeps remainders small
    let (q, r) = a.div_rem(b);
    let two_r = r.abs() * BigInt::from(2);
    if two_r > b.abs() {
        if (a.sign() == b.sign()) || r.is_zero() {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}

fn normalize_sign(mut v: Vec<BigInt>) -> Vec<BigInt> {
    if let Some(first) = v.iter().find(|x| !x.is_zero()) {
        if first.is_negative() {
            for x in &mut v {
                *x = -x.clone();
            }
        }
    }
    v
}

/// Prime factorization of a positive integer by trial division, capped;
/// inputs beyond the cap are out of the supported fragment.
pub fn factorize(n: &BigInt) -> Result<Vec<(BigInt, i64)>> {
    if n.is_zero() || n.is_negative() {
        return Err(Error::invalid("factorize: positive integer required"));
    }
    let mut n = n.clone();
    let mut out: Vec<(BigInt, i64)> = Vec::new();
    let mut d = BigInt::from(2);
    let cap = BigInt::from(10_000_000u64);
    while &d * &d <= n {
        if d > cap {
            return Err(Error::UnsupportedEigenvalues(format!(
                "prime factor search exceeded the trial-division cap on {n}"
            )));
        }
        if (&n % &d).is_zero() {
            let mut e = 0i64;
            while (&n % &d).is_zero() {
                n /= &d;
                e += 1;
            }
            out.push((d.clone(), e));
        }
        d += 1;
    }
    if n > BigInt::one() {
        out.push((n, 1));
    }
    Ok(out)
}

/// Signed prime-exponent vector of a nonzero rational over the given
/// prime list (which it extends as needed); returns (exponents, sign bit).
pub fn prime_exponents(value: &Rat, primes: &mut Vec<BigInt>) -> Result<(Vec<i64>, bool)> {
    if value.is_zero() {
        return Err(Error::invalid("prime_exponents: nonzero value required"));
    }
    let negative = value.is_negative();
    let num = value.numer().abs();
    let den = value.denom().clone();
    let mut exps = vec![0i64; primes.len()];
    for (p, e) in factorize(&num)? {
        let idx = position_or_insert(primes, &mut exps, p);
        exps[idx] += e;
    }
    for (p, e) in factorize(&den)? {
        let idx = position_or_insert(primes, &mut exps, p);
        exps[idx] -= e;
    }
    Ok((exps, negative))
}

fn position_or_insert(primes: &mut Vec<BigInt>, exps: &mut Vec<i64>, p: BigInt) -> usize {
    if let Some(i) = primes.iter().position(|q| *q == p) {
        i
    } else {
        primes.push(p);
        exps.push(0);
        primes.len() - 1
    }
}
