//! Exact truncated power-series multiplication over ℤ by number-theoretic
//! transforms modulo several primes, recombined with the Chinese remainder
//! theorem.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

/// NTT-friendly primes p = c·2^k + 1 below 2^31 (k ≥ 23) with a primitive root.
const PRIMES: [(u64, u64); 15] = [
    (2130706433, 3),
    (2113929217, 5),
    (2088763393, 5),
    (2013265921, 31),
    (1811939329, 13),
    (1711276033, 29),
    (1484783617, 5),
    (1300234241, 3),
    (1224736769, 3),
    (1107296257, 10),
    (998244353, 3),
    (897581057, 3),
    (880803841, 26),
    (754974721, 11),
    (645922817, 3),
];

/// Largest transform length every prime in the table supports.
pub const MAX_TRANSFORM: usize = 1 << 23;

#[derive(Clone, Copy, Debug)]
pub struct Modulus {
    pub p: u64,
    root: u64,
    /// −p^{-1} mod 2^32
    neg_inv: u32,
    /// 2^64 mod p
    r2: u64,
}

impl Modulus {
    fn new(p: u64, root: u64) -> Self {
        // Newton iteration for p^{-1} mod 2^32
        let mut inv: u32 = 1;
        for _ in 0..5 {
            inv = inv.wrapping_mul(2u32.wrapping_sub((p as u32).wrapping_mul(inv)));
        }
        let r = (1u128 << 32) % p as u128;
        Modulus {
            p,
            root,
            neg_inv: inv.wrapping_neg(),
            r2: (r * r % p as u128) as u64,
        }
    }

    /// Montgomery reduction: t·2^{-32} mod p for t < p·2^32.
    #[inline]
    fn redc(self, t: u64) -> u64 {
        let m = (t as u32).wrapping_mul(self.neg_inv) as u64;
        let u = (t + m * self.p) >> 32;
        u.min(u.wrapping_sub(self.p))
    }

    #[inline]
    fn to_mont(self, x: u64) -> u64 {
        self.redc(x * self.r2)
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        // branch-free: the wrapped difference is huge whenever s < p
        let s = a + b;
        s.min(s.wrapping_sub(self.p))
    }

    #[inline]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        let d = a.wrapping_sub(b);
        d.min(d.wrapping_add(self.p))
    }

    pub fn pow(self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    pub fn inv(self, a: u64) -> u64 {
        self.pow(a, self.p - 2)
    }

    /// Reduces a signed integer into [0, p).
    pub fn reduce(self, x: i64) -> u64 {
        x.rem_euclid(self.p as i64) as u64
    }

    /// Montgomery-form twiddles w^0..w^{half−1} for w a primitive `len`-th
    /// root of unity (inverted for the backward transform).
    fn twiddles(self, len: usize, invert: bool, out: &mut Vec<u64>) {
        let mut w = self.pow(self.root, (self.p - 1) / len as u64);
        if invert {
            w = self.inv(w);
        }
        out.clear();
        let mut t = 1;
        for _ in 0..len / 2 {
            out.push(self.to_mont(t));
            t = self.mul(t, w);
        }
    }

    /// Decimation-in-frequency transform: natural order in, bit-reversed out.
    fn forward(self, a: &mut [u64]) {
        let n = a.len();
        debug_assert!(n.is_power_of_two() && n <= MAX_TRANSFORM);
        let mut tw = Vec::with_capacity(n / 2);
        let mut len = n;
        while len >= 2 {
            self.twiddles(len, false, &mut tw);
            for chunk in a.chunks_exact_mut(len) {
                let (lo, hi) = chunk.split_at_mut(len / 2);
                for ((u, v), &w) in lo.iter_mut().zip(hi.iter_mut()).zip(&tw) {
                    let (x, y) = (*u, *v);
                    *u = self.add(x, y);
                    *v = self.redc(self.sub(x, y) * w);
                }
            }
            len >>= 1;
        }
    }

    /// Decimation-in-time inverse: bit-reversed in, natural order out. The
    /// result is scaled by `2^{-32}/n` relative to the textbook inverse
    /// transform to absorb one Montgomery factor from pointwise products.
    fn backward(self, a: &mut [u64]) {
        let n = a.len();
        let mut tw = Vec::with_capacity(n / 2);
        let mut len = 2;
        while len <= n {
            self.twiddles(len, true, &mut tw);
            for chunk in a.chunks_exact_mut(len) {
                let (lo, hi) = chunk.split_at_mut(len / 2);
                for ((u, v), &w) in lo.iter_mut().zip(hi.iter_mut()).zip(&tw) {
                    let x = *u;
                    let y = self.redc(*v * w);
                    *u = self.add(x, y);
                    *v = self.sub(x, y);
                }
            }
            len <<= 1;
        }
        // pointwise products left a factor 2^{-32}; undo it with the 1/n scaling
        let scale = self.to_mont(self.to_mont(self.inv(n as u64)));
        for x in a.iter_mut() {
            *x = self.redc(*x * scale);
        }
    }

    fn transform_len(len: usize) -> usize {
        let n = (2 * len - 1).next_power_of_two();
        assert!(
            n <= MAX_TRANSFORM,
            "series length {len} exceeds the transform table"
        );
        n
    }

    /// First `len` coefficients of a·b.
    pub fn mul_trunc(self, a: &[u64], b: &[u64], len: usize) -> Vec<u64> {
        let n = Self::transform_len(len);
        let mut fa = vec![0; n];
        let mut fb = vec![0; n];
        fa[..a.len().min(len)].copy_from_slice(&a[..a.len().min(len)]);
        fb[..b.len().min(len)].copy_from_slice(&b[..b.len().min(len)]);
        self.forward(&mut fa);
        self.forward(&mut fb);
        for (x, y) in fa.iter_mut().zip(&fb) {
            *x = self.redc(*x * *y);
        }
        self.backward(&mut fa);
        fa.truncate(len);
        fa
    }

    /// First `len` coefficients of a².
    pub fn sqr_trunc(self, a: &[u64], len: usize) -> Vec<u64> {
        let n = Self::transform_len(len);
        let mut fa = vec![0; n];
        fa[..a.len().min(len)].copy_from_slice(&a[..a.len().min(len)]);
        self.forward(&mut fa);
        for x in fa.iter_mut() {
            *x = self.redc(*x * *x);
        }
        self.backward(&mut fa);
        fa.truncate(len);
        fa
    }

    /// First `len` coefficients of a^e by left-to-right binary powering.
    pub fn pow_trunc(self, a: &[u64], e: u32, len: usize) -> Vec<u64> {
        assert!(e >= 1);
        let mut acc: Vec<u64> = a.iter().take(len).copied().collect();
        for bit in (0..31 - e.leading_zeros()).rev() {
            acc = self.sqr_trunc(&acc, len);
            if e >> bit & 1 == 1 {
                acc = self.mul_trunc(&acc, a, len);
            }
        }
        acc
    }
}

/// The smallest prefix of the prime table whose product exceeds 2^bits.
pub fn moduli_for_bits(bits: f64) -> Vec<Modulus> {
    let mut out = Vec::new();
    let mut have = 0.0;
    for &(p, root) in &PRIMES {
        if have > bits {
            break;
        }
        out.push(Modulus::new(p, root));
        have += (p as f64).log2();
    }
    assert!(
        have > bits,
        "need {bits} bits of modulus, table provides {have}"
    );
    out
}

/// Recombines residues (one vector per modulus) into integers in the
/// symmetric range (−M/2, M/2] via Garner's mixed-radix algorithm.
pub fn crt_symmetric(moduli: &[Modulus], residues: &[Vec<u64>]) -> Vec<BigInt> {
    let k = moduli.len();
    // inv[i][j] = p_j^{-1} mod p_i for j < i
    let inv: Vec<Vec<u64>> = (0..k)
        .map(|i| {
            (0..i)
                .map(|j| moduli[i].inv(moduli[j].p % moduli[i].p))
                .collect()
        })
        .collect();
    let product: BigUint = moduli.iter().fold(BigUint::one(), |acc, m| acc * m.p);
    let half = &product >> 1u32;
    let product = BigInt::from(product);
    let len = residues[0].len();
    let mut digits = vec![0u64; k];
    (0..len)
        .map(|n| {
            for i in 0..k {
                let m = moduli[i];
                let mut x = residues[i][n];
                for j in 0..i {
                    x = m.mul(m.sub(x, digits[j] % m.p), inv[i][j]);
                }
                digits[i] = x;
            }
            let mut value = BigUint::zero();
            for i in (0..k).rev() {
                value = value * moduli[i].p + digits[i];
            }
            if value > half {
                BigInt::from(value) - &product
            } else {
                BigInt::from(value)
            }
        })
        .collect()
}
