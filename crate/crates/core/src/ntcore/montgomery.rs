//! Montgomery arithmetic for odd 64-bit moduli below 2^63.

#[derive(Debug, Clone, Copy)]
pub(crate) struct Montgomery {
    n: u64,
    /// -n^{-1} mod 2^64
    neg_inv: u64,
    /// 2^128 mod n
    r2: u64,
}

impl Montgomery {
    pub(crate) fn new(n: u64) -> Self {
        debug_assert!(n & 1 == 1 && n < 1 << 63);
        // Newton iteration doubles the number of correct low bits each step.
        let mut inv: u64 = n;
        for _ in 0..5 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(n.wrapping_mul(inv)));
        }
        let r1 = ((1u128 << 64) % n as u128) as u64;
        let r2 = ((r1 as u128 * r1 as u128) % n as u128) as u64;
        Montgomery {
            n,
            neg_inv: inv.wrapping_neg(),
            r2,
        }
    }

    #[inline]
    fn reduce(&self, t: u128) -> u64 {
        let m = (t as u64).wrapping_mul(self.neg_inv);
        // t < n^2 < 2^126 and m*n < 2^127, so the sum cannot overflow.
        let u = ((t + m as u128 * self.n as u128) >> 64) as u64;
        if u >= self.n {
            u - self.n
        } else {
            u
        }
    }

    #[inline]
    pub(crate) fn enter(self, a: u64) -> u64 {
        self.reduce(a as u128 * self.r2 as u128)
    }

    #[inline]
    pub(crate) fn leave(self, a: u64) -> u64 {
        self.reduce(a as u128)
    }

    #[inline]
    pub(crate) fn mul(&self, a: u64, b: u64) -> u64 {
        self.reduce(a as u128 * b as u128)
    }

    #[inline]
    pub(crate) fn add(&self, a: u64, b: u64) -> u64 {
        // a, b < n < 2^63
        let s = a + b;
        if s >= self.n {
            s - self.n
        } else {
            s
        }
    }

    #[inline]
    pub(crate) fn one(&self) -> u64 {
        self.enter(1)
    }

    pub(crate) fn pow(&self, base: u64, mut exp: u64) -> u64 {
        let mut acc = self.one();
        let mut b = base;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            exp >>= 1;
        }
        acc
    }
}
