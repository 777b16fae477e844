//! Number-theoretic kernel: pair-χ, Dedekind sums and Hirzebruch–Jung
//! continued fractions.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{FiberError, Result};
use crate::rational::{int, ratio, Rational};

/// `χ(p,q) = (q/p + p/q + gcd(p,q)²/(pq))/12 − 1/4`.
pub fn chi_pair(p: i64, q: i64) -> Result<Rational> {
    if p <= 0 || q <= 0 {
        return Err(FiberError::InvalidArgument(format!(
            "chi_pair needs positive arguments, got ({p}, {q})"
        )));
    }
    Ok(chi_pair_unchecked(p, q))
}

pub(crate) fn chi_pair_unchecked(p: i64, q: i64) -> Rational {
    let g = p.gcd(&q);
    let (p, q) = (p / g, q / g);
    // Scale-free after reduction: (q² + p² + 1)/(12pq) − 1/4.
    let num = BigInt::from(q) * q + BigInt::from(p) * p + 1;
    let den = BigInt::from(12) * p * q;
    Rational::new(num, den) - ratio(1, 4)
}

/// Dedekind sum `s(p,q)` via reciprocity: `s(p,q) = χ(p,q) − s(q mod p, p)`.
pub fn dedekind_sum(p: i64, q: i64) -> Result<Rational> {
    let (mut p, mut q) = reduce_dedekind(p, q)?;
    let mut acc = Rational::zero();
    let mut positive = true;
    while p != 0 {
        let term = chi_pair_unchecked(p, q);
        if positive {
            acc += term;
        } else {
            acc -= term;
        }
        positive = !positive;
        (p, q) = (q % p, p);
    }
    Ok(acc)
}

/// Dedekind sum by the defining O(q) sum `Σ ((pi/q))((i/q))`.
pub fn dedekind_sum_direct(p: i64, q: i64) -> Result<Rational> {
    let (p, q) = reduce_dedekind(p, q)?;
    let (p, q) = (p as i128, q as i128);
    let mut acc: i128 = 0;
    for i in 1..q {
        let r = (p * i) % q;
        if r != 0 {
            acc += (2 * r - q) * (2 * i - q);
        }
    }
    Ok(Rational::new(BigInt::from(acc), BigInt::from(4 * q * q)))
}

/// Removes the common factor and reduces `p` into `[0, q)`.
fn reduce_dedekind(p: i64, q: i64) -> Result<(i64, i64)> {
    if q <= 0 {
        return Err(FiberError::InvalidArgument(format!(
            "dedekind_sum needs q >= 1, got {q}"
        )));
    }
    let g = p.gcd(&q);
    let (p, q) = (p / g, q / g);
    Ok((p.rem_euclid(q), q))
}

/// A Hirzebruch–Jung chain of type `(n, q)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HjChain {
    pub n: i64,
    pub q: i64,
    /// Self-intersection magnitudes `e₁..e_r`, all at least 2.
    pub es: Vec<i64>,
    /// Normalized multiplicities `μ₁..μ_{r+1}`, with `μ₁ = 1` and `μ_{r+1} = n`.
    pub mus: Vec<i64>,
}

impl HjChain {
    /// Rebuilds a chain from its self-intersection magnitudes.
    pub fn from_es(es: &[i64]) -> Result<HjChain> {
        if es.is_empty() || es.iter().any(|&e| e < 2) {
            return Err(FiberError::InvalidArgument(format!(
                "chain entries must be >= 2: {es:?}"
            )));
        }
        let n = tridiagonal_det(es);
        let q = tridiagonal_det(&es[1..]);
        Ok(HjChain {
            n,
            q,
            es: es.to_vec(),
            mus: forward_mus(es),
        })
    }

    pub fn len(&self) -> usize {
        self.es.len()
    }

    pub fn is_empty(&self) -> bool {
        self.es.is_empty()
    }

    /// The `q'` with `q·q' ≡ 1 (mod n)`, read off as `μ_r`.
    pub fn q_prime(&self) -> i64 {
        self.mus[self.es.len() - 1]
    }
}

/// Determinant of the tridiagonal matrix with diagonal `es` and off-diagonal −1.
pub fn tridiagonal_det(es: &[i64]) -> i64 {
    let (mut cur, mut prev) = (1i64, 0i64);
    for &e in es.iter().rev() {
        (cur, prev) = (e * cur - prev, cur);
    }
    cur
}

fn forward_mus(es: &[i64]) -> Vec<i64> {
    let mut mus = Vec::with_capacity(es.len() + 1);
    let (mut prev, mut cur) = (0i64, 1i64);
    mus.push(cur);
    for &e in es {
        (prev, cur) = (cur, e * cur - prev);
        mus.push(cur);
    }
    mus
}

/// Minus-sign continued fraction `n/q = e₁ − 1/(e₂ − …)`.
pub fn hj_expand(n: i64, q: i64) -> Result<HjChain> {
    if q < 1 || q >= n {
        return Err(FiberError::InvalidArgument(format!(
            "hj_expand needs 1 <= q < n, got n={n}, q={q}"
        )));
    }
    if n.gcd(&q) != 1 {
        return Err(FiberError::InvalidArgument(format!(
            "hj_expand needs gcd(n, q) = 1, got n={n}, q={q}"
        )));
    }
    let mut es = Vec::new();
    let (mut a, mut b) = (n, q);
    while b > 0 {
        let e = (a + b - 1) / b;
        es.push(e);
        (a, b) = (b, e * b - a);
    }
    let mus = forward_mus(&es);
    Ok(HjChain { n, q, es, mus })
}

/// The branch contribution `q/n`, cross-checked against `Σ 1/(μᵢμᵢ₊₁)`.
pub fn branch_beta(chain: &HjChain) -> Rational {
    let closed = ratio(chain.q, chain.n);
    let telescoped: Rational = chain
        .mus
        .windows(2)
        .map(|w| ratio(1, w[0] * w[1]))
        .sum();
    assert_eq!(
        closed, telescoped,
        "branch_beta paths disagree for chain {chain:?}"
    );
    closed
}

/// Inverse of `a` modulo `n`, if it exists.
pub fn inverse_mod(a: i64, n: i64) -> Option<i64> {
    let e = a.rem_euclid(n).extended_gcd(&n);
    (e.gcd == 1).then(|| e.x.rem_euclid(n))
}

/// `gcd(a,b)²/(ab)`, the bracket `[a, b]` of the ADE table.
pub fn bracket(a: i64, b: i64) -> Rational {
    let g = a.gcd(&b);
    ratio(g * g, a * b)
}

pub(crate) fn rational_sum<I: IntoIterator<Item = Rational>>(it: I) -> Rational {
    it.into_iter().fold(int(0), |acc, x| acc + x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Textbook χ with no reduction and no shortcuts.
    fn chi_oracle(p: i64, q: i64) -> Rational {
        let g = p.gcd(&q);
        (ratio(q, p) + ratio(p, q) + ratio(g * g, p * q)) / int(12) - ratio(1, 4)
    }

    #[test]
    fn chi_pair_examples() {
        assert_eq!(chi_pair(5, 5).unwrap(), int(0));
        assert_eq!(chi_pair(1, 6).unwrap(), ratio(5, 18));
        assert_eq!(chi_pair(2, 6).unwrap(), ratio(1, 18));
        assert_eq!(chi_pair(3, 6).unwrap(), int(0));
        assert!(chi_pair(0, 3).is_err());
    }

    #[test]
    fn chi_pair_matches_oracle() {
        for p in 1..60 {
            for q in 1..60 {
                assert_eq!(chi_pair(p, q).unwrap(), chi_oracle(p, q));
            }
        }
    }

    #[test]
    fn dedekind_examples() {
        assert_eq!(dedekind_sum(1, 1).unwrap(), int(0));
        assert_eq!(dedekind_sum(1, 3).unwrap(), ratio(1, 18));
        assert_eq!(dedekind_sum_direct(1, 3).unwrap(), ratio(1, 18));
        assert_eq!(
            dedekind_sum(1, 3).unwrap() + dedekind_sum(3, 1).unwrap(),
            chi_pair(1, 3).unwrap()
        );
        assert!(dedekind_sum(1, 0).is_err());
    }

    #[test]
    fn reciprocity_exhaustive() {
        for p in 1..=200i64 {
            for q in 1..=200i64 {
                if p.gcd(&q) == 1 {
                    let lhs = dedekind_sum_direct(p, q).unwrap() + dedekind_sum_direct(q, p).unwrap();
                    assert_eq!(lhs, chi_oracle(p, q), "p={p} q={q}");
                }
            }
        }
    }

    #[test]
    fn chi_splitting_identity() {
        for p in 1..=100 {
            for q in 1..=100 {
                let split = chi_pair(p, p + q).unwrap() + chi_pair(p + q, q).unwrap();
                assert_eq!(chi_pair(p, q).unwrap(), split);
            }
        }
    }

    #[test]
    fn complementary_sums_cancel() {
        for q in 1..80i64 {
            for p in -40..80i64 {
                let pp = q - p.rem_euclid(q) + 3 * q;
                assert_eq!(
                    dedekind_sum(p, q).unwrap() + dedekind_sum(pp, q).unwrap(),
                    int(0)
                );
            }
        }
    }

    #[test]
    fn hj_examples() {
        assert_eq!(hj_expand(2, 1).unwrap().es, vec![2]);
        let c = hj_expand(5, 4).unwrap();
        assert_eq!((c.es.clone(), c.mus.clone()), (vec![2, 2, 2, 2], vec![1, 2, 3, 4, 5]));
        let c = hj_expand(5, 2).unwrap();
        assert_eq!((c.es.clone(), c.mus.clone()), (vec![3, 2], vec![1, 3, 5]));
        assert_eq!(tridiagonal_det(&[3, 2]), 5);
        assert_eq!(tridiagonal_det(&[2]), 2);
        assert!(hj_expand(6, 4).is_err());
        assert!(hj_expand(5, 5).is_err());
    }

    #[test]
    fn branch_beta_examples() {
        assert_eq!(branch_beta(&hj_expand(2, 1).unwrap()), ratio(1, 2));
        let c = hj_expand(10, 7).unwrap();
        assert_eq!(c.es, vec![2, 2, 4]);
        assert_eq!(c.mus, vec![1, 2, 3, 10]);
        assert_eq!(branch_beta(&c), ratio(7, 10));
        for r in 1..8 {
            for e in 2..8 {
                let n = r * (e - 1) + 1;
                let q = (r - 1) * (e - 1) + 1;
                if q < n {
                    let c = hj_expand(n, q).unwrap();
                    assert_eq!(branch_beta(&c), int(1) - ratio(e - 1, n));
                }
            }
        }
    }

    proptest! {
        #[test]
        fn dedekind_paths_agree(p in -500i64..500, q in 1i64..400) {
            prop_assert_eq!(dedekind_sum(p, q).unwrap(), dedekind_sum_direct(p, q).unwrap());
        }

        #[test]
        fn dedekind_symmetries(p in -500i64..500, q in 1i64..400, k in -5i64..5) {
            let s = dedekind_sum(p, q).unwrap();
            prop_assert_eq!(dedekind_sum(-p, q).unwrap(), -s.clone());
            prop_assert_eq!(dedekind_sum(p + k * q, q).unwrap(), s);
        }

        #[test]
        fn chi_is_symmetric_and_scale_free(p in 1i64..300, q in 1i64..300, k in 1i64..=20) {
            let c = chi_pair(p, q).unwrap();
            prop_assert_eq!(chi_pair(q, p).unwrap(), c.clone());
            prop_assert_eq!(chi_pair(k * p, k * q).unwrap(), c);
        }

        #[test]
        fn hj_invariants(n in 2i64..400, seed in 1i64..400) {
            let q = 1 + seed % (n - 1);
            prop_assume!(n.gcd(&q) == 1);
            let c = hj_expand(n, q).unwrap();
            prop_assert!(c.es.iter().all(|&e| e >= 2));
            prop_assert_eq!(tridiagonal_det(&c.es), n);
            prop_assert_eq!(tridiagonal_det(&c.es[1..]), q);
            prop_assert_eq!(c.mus[0], 1);
            prop_assert_eq!(*c.mus.last().unwrap(), n);
            for w in c.mus.windows(2) {
                prop_assert_eq!(w[0].gcd(&w[1]), 1);
            }
            prop_assert_eq!((q * c.q_prime()).rem_euclid(n), 1 % n);
            prop_assert_eq!(HjChain::from_es(&c.es).unwrap(), c.clone());
            let _ = branch_beta(&c);
        }
    }
}
