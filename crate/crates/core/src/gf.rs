//! Small finite fields GF(q) for prime powers q <= 16 and their cubic
//! extensions GF(q^3), enough to build Singer difference sets.

use crate::error::{Error, Result};

const IRREDUCIBLE: &[(u32, u32, &[u32])] = &[
    // (q, p, coefficients of the irreducible polynomial, low degree first,
    //  excluding the leading 1)
    (4, 2, &[1, 1]),        // x^2 + x + 1
    (8, 2, &[1, 1, 0]),     // x^3 + x + 1
    (9, 3, &[1, 0]),        // x^2 + 1
    (16, 2, &[1, 1, 0, 0]), // x^4 + x + 1
];

/// GF(q) with full add/mul tables, elements encoded as 0..q.
#[derive(Debug, Clone)]
pub struct Gf {
    pub q: u32,
    add: Vec<u32>,
    mul: Vec<u32>,
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Gf {
    pub fn new(q: u32) -> Result<Self> {
        if q >= 2 && q <= 16 && is_prime(q) {
            let mut add = vec![0u32; (q * q) as usize];
            let mut mul = vec![0u32; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    add[(a * q + b) as usize] = (a + b) % q;
                    mul[(a * q + b) as usize] = (a * b) % q;
                }
            }
            return Ok(Self { q, add, mul });
        }
        if let Some(&(_, p, poly)) = IRREDUCIBLE.iter().find(|&&(qq, _, _)| qq == q) {
            return Ok(Self::extension(p, poly));
        }
        Err(Error::UnsupportedPrimePower(q))
    }

    /// Builds GF(p^k) from polynomial arithmetic over GF(p) modulo the given
    /// irreducible (degree k, leading coefficient 1 implied).
    fn extension(p: u32, poly: &[u32]) -> Self {
        let k = poly.len();
        let q = p.pow(k as u32);
        let decode = |x: u32| -> Vec<u32> {
            let mut digits = vec![0u32; k];
            let mut v = x;
            for d in digits.iter_mut() {
                *d = v % p;
                v /= p;
            }
            digits
        };
        let encode = |digits: &[u32]| -> u32 {
            digits.iter().rev().fold(0u32, |acc, &d| acc * p + d)
        };
        let mut add = vec![0u32; (q * q) as usize];
        let mut mul = vec![0u32; (q * q) as usize];
        for a in 0..q {
            let da = decode(a);
            for b in 0..q {
                let db = decode(b);
                let sum: Vec<u32> = da.iter().zip(&db).map(|(&x, &y)| (x + y) % p).collect();
                add[(a * q + b) as usize] = encode(&sum);
                // polynomial product then reduction by x^k = -poly
                let mut prod = vec![0u32; 2 * k - 1];
                for (i, &x) in da.iter().enumerate() {
                    for (j, &y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                for deg in (k..prod.len()).rev() {
                    let c = prod[deg];
                    if c != 0 {
                        prod[deg] = 0;
                        for (i, &pc) in poly.iter().enumerate() {
                            let idx = deg - k + i;
                            // x^deg = -sum poly[i] x^{deg-k+i}
                            prod[idx] = (prod[idx] + c * (p - pc % p) % p) % p;
                        }
                    }
                }
                mul[(a * q + b) as usize] = encode(&prod[..k]);
            }
        }
        Self { q, add, mul }
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        self.add[(a * self.q + b) as usize]
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul[(a * self.q + b) as usize]
    }
}

/// GF(q^3) elements as coefficient triples encoded c0 + q c1 + q^2 c2.
pub struct CubicExt {
    base: Gf,
    /// modulus y^3 + m2 y^2 + m1 y + m0, irreducible over GF(q)
    modulus: [u32; 3],
}

impl CubicExt {
    pub fn new(base: Gf) -> Result<Self> {
        let q = base.q;
        // A cubic is irreducible over a field iff it has no roots.
        for m2 in 0..q {
            for m1 in 0..q {
                for m0 in 1..q {
                    let has_root = (0..q).any(|y| {
                        let y2 = base.mul(y, y);
                        let y3 = base.mul(y2, y);
                        let mut v = y3;
                        v = base.add(v, base.mul(m2, y2));
                        v = base.add(v, base.mul(m1, y));
                        v = base.add(v, m0);
                        v == 0
                    });
                    if !has_root {
                        return Ok(Self { base, modulus: [m0, m1, m2] });
                    }
                }
            }
        }
        Err(Error::UnsupportedPrimePower(base.q))
    }

    pub fn q(&self) -> u32 {
        self.base.q
    }

    fn decode(&self, x: u64) -> [u32; 3] {
        let q = self.base.q as u64;
        [(x % q) as u32, ((x / q) % q) as u32, ((x / (q * q)) % q) as u32]
    }

    fn encode(&self, c: [u32; 3]) -> u64 {
        let q = self.base.q as u64;
        c[0] as u64 + q * c[1] as u64 + q * q * c[2] as u64
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        let (ca, cb) = (self.decode(a), self.decode(b));
        self.encode([
            self.base.add(ca[0], cb[0]),
            self.base.add(ca[1], cb[1]),
            self.base.add(ca[2], cb[2]),
        ])
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        let f = &self.base;
        let (ca, cb) = (self.decode(a), self.decode(b));
        // product coefficients degree 0..4
        let mut prod = [0u32; 5];
        for i in 0..3 {
            for j in 0..3 {
                prod[i + j] = f.add(prod[i + j], f.mul(ca[i], cb[j]));
            }
        }
        // reduce y^3 = -(m2 y^2 + m1 y + m0), y^4 = y * y^3
        let q = f.q;
        let neg = |x: u32| (q - x) % q;
        for deg in (3..=4).rev() {
            let c = prod[deg];
            if c != 0 {
                prod[deg] = 0;
                prod[deg - 3] = f.add(prod[deg - 3], f.mul(c, neg(self.modulus[0])));
                prod[deg - 2] = f.add(prod[deg - 2], f.mul(c, neg(self.modulus[1])));
                prod[deg - 1] = f.add(prod[deg - 1], f.mul(c, neg(self.modulus[2])));
            }
        }
        self.encode([prod[0], prod[1], prod[2]])
    }

    pub fn pow(&self, mut base: u64, mut e: u64) -> u64 {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Trace to GF(q): x + x^q + x^{q^2}. Scalars are encoded as values < q.
    pub fn trace(&self, x: u64) -> u32 {
        let q = self.base.q as u64;
        let t = self.add(self.add(x, self.pow(x, q)), self.pow(x, q * q));
        debug_assert!(t < q, "trace must land in the prime field");
        t as u32
    }

    /// Finds a generator of the multiplicative group (order q^3 - 1).
    pub fn primitive_element(&self) -> u64 {
        let order = (self.base.q as u64).pow(3) - 1;
        let primes = prime_factors(order);
        for g in 2..(order + 1) {
            if primes.iter().all(|&r| self.pow(g, order / r) != 1) {
                return g;
            }
        }
        unreachable!("cyclic group has a generator");
    }
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gf_field_axioms_spot_checks() {
        for q in [2u32, 3, 4, 5, 7, 8, 9, 11, 13, 16] {
            let f = Gf::new(q).unwrap();
            // every nonzero element has an inverse
            for a in 1..q {
                assert!((1..q).any(|b| f.mul(a, b) == 1), "no inverse for {a} in GF({q})");
            }
            // distributivity sample
            for a in 0..q.min(6) {
                for b in 0..q.min(6) {
                    for c in 0..q.min(6) {
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn cubic_extension_multiplicative_order() {
        for q in [2u32, 3, 4, 5] {
            let ext = CubicExt::new(Gf::new(q).unwrap()).unwrap();
            let g = ext.primitive_element();
            let order = (q as u64).pow(3) - 1;
            assert_eq!(ext.pow(g, order), 1);
            for r in prime_factors(order) {
                assert_ne!(ext.pow(g, order / r), 1);
            }
        }
    }

    #[test]
    fn unsupported_q_rejected() {
        assert!(Gf::new(6).is_err());
        assert!(Gf::new(1).is_err());
        assert!(Gf::new(12).is_err());
    }
}
