//! Reduced echelon form over Q by elimination modulo word-sized primes,
//! Chinese remaindering and rational reconstruction. The result is checked
//! exactly before it is returned.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::matrix::{rref_in_place, ModP};

/// Primes below 2^31, largest first.
fn primes() -> impl Iterator<Item = u64> {
    (1u64 << 20..1u64 << 31).rev().filter(|&n| {
        n % 2 == 1 && (3..).step_by(2).take_while(|d| d * d <= n).all(|d| n % d != 0)
    })
}

/// Rows scaled by the lcm of their denominators.
fn integer_rows(data: &[&BigRational], rows: usize, cols: usize) -> Vec<Vec<BigInt>> {
    (0..rows)
        .map(|i| {
            let row = &data[i * cols..(i + 1) * cols];
            let l = row.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
            row.iter().map(|q| q.numer() * (&l / q.denom())).collect()
        })
        .collect()
}

/// `n/d ≡ a (mod m)` with `|n|, d <= sqrt(m/2)`, if one exists.
fn reconstruct(a: &BigInt, m: &BigInt, bound: &BigInt) -> Option<BigRational> {
    let (mut r0, mut r1) = (m.clone(), a.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while &r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > *bound || !r1.gcd(&t1).is_one() {
        return None;
    }
    Some(BigRational::new(r1, t1))
}

/// Every row of the matrix is orthogonal to the null space of the candidate.
///
/// The null space vector of free column `f` has `1` at `f` and `-cand[r][f]`
/// at pivot `r`; scaled by the lcm `l_f` of its denominators it is integral.
/// Rows are walked through their nonzero entries only.
fn verify(ints: &[Vec<BigInt>], pivots: &[usize], cand: &[Vec<BigRational>], cols: usize) -> bool {
    let mut pivot_row = vec![usize::MAX; cols];
    for (r, &p) in pivots.iter().enumerate() {
        pivot_row[p] = r;
    }
    let free: Vec<usize> = (0..cols).filter(|&j| pivot_row[j] == usize::MAX).collect();
    let mut slot = vec![usize::MAX; cols];
    for (t, &f) in free.iter().enumerate() {
        slot[f] = t;
    }
    let scale: Vec<BigInt> = free
        .iter()
        .map(|&f| cand.iter().fold(BigInt::one(), |acc, row| acc.lcm(row[f].denom())))
        .collect();
    // scaled[r]: the nonzero entries of row r at free columns, as (slot, l_f * cand[r][f])
    let scaled: Vec<Vec<(usize, BigInt)>> = cand
        .iter()
        .map(|row| {
            free.iter()
                .enumerate()
                .filter(|(_, &f)| !row[f].is_zero())
                .map(|(t, &f)| (t, row[f].numer() * (&scale[t] / row[f].denom())))
                .collect()
        })
        .collect();
    let mut acc = vec![BigInt::zero(); free.len()];
    for row in ints {
        for a in acc.iter_mut() {
            a.set_zero();
        }
        for (j, a) in row.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            if pivot_row[j] == usize::MAX {
                acc[slot[j]] += a * &scale[slot[j]];
            } else {
                for (t, v) in &scaled[pivot_row[j]] {
                    acc[*t] -= a * v;
                }
            }
        }
        if acc.iter().any(|a| !a.is_zero()) {
            return false;
        }
    }
    true
}

/// Rank modulo one large prime: a lower bound for the rank over Q, since a
/// minor that survives reduction is nonzero.
pub(super) fn rank_lower_bound(data: &[&BigRational], rows: usize, cols: usize) -> usize {
    let ints = integer_rows(data, rows, cols);
    let p = primes().next().expect("a prime");
    let pb = BigInt::from(p);
    let mut buf: Vec<u64> = ints
        .iter()
        .flatten()
        .map(|a| a.mod_floor(&pb).to_u64().expect("reduced below p"))
        .collect();
    rref_in_place(&ModP(p), &mut buf, rows, cols).len()
}

pub(super) fn rref(data: &[&BigRational], rows: usize, cols: usize) -> (Vec<usize>, Vec<Vec<BigRational>>) {
    let ints = integer_rows(data, rows, cols);
    let mut best: Option<Vec<usize>> = None;
    let mut residues: Vec<BigInt> = Vec::new();
    let mut modulus = BigInt::one();
    let mut used = 0usize;
    let mut next_attempt = 1usize;
    for p in primes() {
        let pb = BigInt::from(p);
        let mut buf: Vec<u64> = ints
            .iter()
            .flat_map(|row| row.iter().map(|x| x.mod_floor(&pb).to_u64().expect("reduced")))
            .collect();
        let piv = rref_in_place(&ModP(p), &mut buf, rows, cols);
        let r = piv.len();
        // a prime of bad reduction loses rank or moves a pivot right
        let better = match &best {
            None => true,
            Some(b) => r > b.len() || (r == b.len() && piv < *b),
        };
        if better {
            best = Some(piv.clone());
            residues = buf[..r * cols].iter().map(|&v| BigInt::from(v)).collect();
            modulus = pb;
            used = 1;
            next_attempt = 1;
        } else if best.as_ref() == Some(&piv) {
            // combine by Chinese remaindering
            let inv = modular_inverse(&(&modulus % &pb), &pb);
            for (x, &v) in residues.iter_mut().zip(&buf[..r * cols]) {
                let diff = (BigInt::from(v) - &*x).mod_floor(&pb);
                let k = (diff * &inv).mod_floor(&pb);
                *x += &modulus * k;
            }
            modulus *= &pb;
            used += 1;
        } else {
            continue;
        }
        if used < next_attempt {
            continue;
        }
        next_attempt = used + used.div_ceil(2);
        let pivots = best.clone().expect("set above");
        if pivots.is_empty() {
            return (pivots, Vec::new());
        }
        let bound = (&modulus / 2u32).sqrt();
        let cand: Option<Vec<BigRational>> =
            residues.iter().map(|x| reconstruct(x, &modulus, &bound)).collect();
        let Some(cand) = cand else { continue };
        let cand: Vec<Vec<BigRational>> = cand.chunks(cols).map(<[BigRational]>::to_vec).collect();
        if verify(&ints, &pivots, &cand, cols) {
            return (pivots, cand);
        }
    }
    unreachable!("ran out of primes below 2^31")
}

fn modular_inverse(a: &BigInt, p: &BigInt) -> BigInt {
    let e = a.extended_gcd(p);
    e.x.mod_floor(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::matrix::Rat;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn agrees_with_direct_elimination() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..40 {
            let rows = rng.gen_range(1..24);
            let cols = rng.gen_range(1..24);
            let rank_cap = rng.gen_range(0..=rows.min(cols));
            // low rank products so that the kernel is nontrivial
            let left: Vec<BigRational> = (0..rows * rank_cap)
                .map(|_| BigRational::new(rng.gen_range(-9..=9).into(), rng.gen_range(1..=7).into()))
                .collect();
            let right: Vec<BigRational> = (0..rank_cap * cols)
                .map(|_| BigRational::new(rng.gen_range(-9..=9).into(), rng.gen_range(1..=7).into()))
                .collect();
            let mut m = vec![BigRational::zero(); rows * cols];
            for i in 0..rows {
                for j in 0..cols {
                    for k in 0..rank_cap {
                        m[i * cols + j] += &left[i * rank_cap + k] * &right[k * cols + j];
                    }
                }
            }
            let refs: Vec<&BigRational> = m.iter().collect();
            let (pivots, reduced) = rref(&refs, rows, cols);
            let mut direct = m.clone();
            let expected = rref_in_place(&Rat, &mut direct, rows, cols);
            assert_eq!(pivots, expected);
            for (i, row) in reduced.iter().enumerate() {
                assert_eq!(row[..], direct[i * cols..(i + 1) * cols]);
            }
        }
    }
}
