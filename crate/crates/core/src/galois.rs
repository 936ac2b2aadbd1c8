//! Arithmetic in small finite fields GF(p^m).
//!
//! Elements are encoded as integers in `[0, q)`. The base-p digits of an
//! element are the coefficients of its polynomial representative, least
//! significant digit first (the constant term). Every field uses a fixed
//! monic modulus from [`MODULUS_TABLE`], so element encodings are stable
//! across runs and file formats.
//!
//! Multiplication goes through exp/log tables built from a primitive
//! element; addition uses a full `q × q` table. Tables are built once per
//! `(p, m)` and shared through a process-wide cache.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use thiserror::Error;

/// Largest supported field order.
pub const MAX_ORDER: u32 = 512;

/// Fixed moduli for the non-prime fields of order at most 512: the
/// lexicographically smallest monic irreducible polynomial of degree `m`,
/// coefficients listed from the constant term upwards.
pub const MODULUS_TABLE: &[(u32, u32, &[u16])] = &[
    (2, 2, &[1, 1, 1]),
    (2, 3, &[1, 1, 0, 1]),
    (2, 4, &[1, 1, 0, 0, 1]),
    (2, 5, &[1, 0, 1, 0, 0, 1]),
    (2, 6, &[1, 1, 0, 0, 0, 0, 1]),
    (2, 7, &[1, 1, 0, 0, 0, 0, 0, 1]),
    (2, 8, &[1, 1, 0, 1, 1, 0, 0, 0, 1]),
    (2, 9, &[1, 1, 0, 0, 0, 0, 0, 0, 0, 1]),
    (3, 2, &[1, 0, 1]),
    (3, 3, &[1, 2, 0, 1]),
    (3, 4, &[2, 1, 0, 0, 1]),
    (3, 5, &[1, 2, 0, 0, 0, 1]),
    (5, 2, &[2, 0, 1]),
    (5, 3, &[1, 1, 0, 1]),
    (7, 2, &[1, 0, 1]),
    (7, 3, &[2, 0, 0, 1]),
    (11, 2, &[1, 0, 1]),
    (13, 2, &[2, 0, 1]),
    (17, 2, &[3, 0, 1]),
    (19, 2, &[1, 0, 1]),
];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GaloisError {
    #[error("characteristic {0} is not prime")]
    NotPrime(u32),
    #[error("field order {p}^{m} is unsupported (must be at most {MAX_ORDER} with m >= 1)")]
    UnsupportedOrder { p: u32, m: u32 },
    #[error("modulus for GF({p}^{m}) is not irreducible")]
    Reducible { p: u32, m: u32 },
    #[error("element {value} out of range for a field of order {q}")]
    OutOfRange { value: u32, q: u32 },
    #[error("division by zero")]
    DivisionByZero,
}

/// An element of some GF(q), stored as its integer encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FieldElement(pub u16);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    #[inline]
    pub fn value(self) -> u16 {
        self.0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

struct Tables {
    p: u32,
    m: u32,
    q: u32,
    modulus: Vec<u16>,
    add: Vec<u16>,
    neg: Vec<u16>,
    /// `exp[i] = g^i` for `i in 0..2(q-1)`, doubled so products need no reduction.
    exp: Vec<u16>,
    log: Vec<u16>,
    inv: Vec<u16>,
}

/// A finite field GF(p^m) with q ≤ 512. Cheap to clone; equality is by `(p, m)`.
#[derive(Clone)]
pub struct FieldSpec(Arc<Tables>);

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.0.p == other.0.p && self.0.m == other.0.m
    }
}

impl Eq for FieldSpec {}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.0.p, self.0.m)
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.m == 1 {
            write!(f, "GF({})", self.0.p)
        } else {
            write!(f, "GF({}^{})", self.0.p, self.0.m)
        }
    }
}

fn cache() -> &'static Mutex<HashMap<(u32, u32), FieldSpec>> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, u32), FieldSpec>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn is_prime(p: u32) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

impl FieldSpec {
    /// The field GF(p^m). Fails unless `p` is prime, `m >= 1` and `p^m <= 512`.
    pub fn new(p: u32, m: u32) -> Result<FieldSpec, GaloisError> {
        if !is_prime(p) {
            return Err(GaloisError::NotPrime(p));
        }
        let q = (m >= 1)
            .then(|| p.checked_pow(m))
            .flatten()
            .filter(|&q| q <= MAX_ORDER)
            .ok_or(GaloisError::UnsupportedOrder { p, m })?;
        let mut guard = cache().lock().expect("field cache poisoned");
        if let Some(spec) = guard.get(&(p, m)) {
            return Ok(spec.clone());
        }
        let modulus = if m == 1 {
            vec![0, 1]
        } else {
            MODULUS_TABLE
                .iter()
                .find(|(tp, tm, _)| *tp == p && *tm == m)
                .map(|(_, _, poly)| poly.to_vec())
                .ok_or(GaloisError::UnsupportedOrder { p, m })?
        };
        if !poly_is_irreducible(&modulus, p) {
            return Err(GaloisError::Reducible { p, m });
        }
        let spec = FieldSpec(Arc::new(Tables::build(p, m, q, modulus)));
        guard.insert((p, m), spec.clone());
        Ok(spec)
    }

    /// The field of order `q`, which must be a prime power.
    pub fn with_order(q: u32) -> Result<FieldSpec, GaloisError> {
        let p = (2..=q.max(2))
            .find(|d| q.is_multiple_of(*d))
            .ok_or(GaloisError::UnsupportedOrder { p: q, m: 1 })?;
        let mut m = 0;
        let mut rest = q;
        while rest > 1 && rest.is_multiple_of(p) {
            rest /= p;
            m += 1;
        }
        if rest != 1 {
            return Err(GaloisError::UnsupportedOrder { p: q, m: 1 });
        }
        FieldSpec::new(p, m)
    }

    pub fn p(&self) -> u32 {
        self.0.p
    }

    pub fn m(&self) -> u32 {
        self.0.m
    }

    pub fn q(&self) -> u32 {
        self.0.q
    }

    /// Modulus coefficients, constant term first.
    pub fn modulus(&self) -> &[u16] {
        &self.0.modulus
    }

    pub fn elem(&self, value: u32) -> Result<FieldElement, GaloisError> {
        if value < self.0.q {
            Ok(FieldElement(value as u16))
        } else {
            Err(GaloisError::OutOfRange { value, q: self.0.q })
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.0.q as u16).map(FieldElement)
    }

    fn check(&self, a: FieldElement) -> Result<(), GaloisError> {
        self.elem(a.0 as u32).map(|_| ())
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, GaloisError> {
        self.check(a)?;
        self.check(b)?;
        Ok(FieldElement(self.add_raw(a.0, b.0)))
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, GaloisError> {
        self.check(a)?;
        self.check(b)?;
        Ok(FieldElement(self.sub_raw(a.0, b.0)))
    }

    pub fn neg(&self, a: FieldElement) -> Result<FieldElement, GaloisError> {
        self.check(a)?;
        Ok(FieldElement(self.neg_raw(a.0)))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, GaloisError> {
        self.check(a)?;
        self.check(b)?;
        Ok(FieldElement(self.mul_raw(a.0, b.0)))
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement, GaloisError> {
        self.check(a)?;
        if a.0 == 0 {
            return Err(GaloisError::DivisionByZero);
        }
        Ok(FieldElement(self.inv_raw(a.0)))
    }

    // Unchecked kernels on raw encodings. Callers guarantee operands are in range.

    #[inline]
    pub fn add_raw(&self, a: u16, b: u16) -> u16 {
        if self.0.p == 2 {
            a ^ b
        } else {
            self.0.add[a as usize * self.0.q as usize + b as usize]
        }
    }

    #[inline]
    pub fn neg_raw(&self, a: u16) -> u16 {
        self.0.neg[a as usize]
    }

    #[inline]
    pub fn sub_raw(&self, a: u16, b: u16) -> u16 {
        self.add_raw(a, self.neg_raw(b))
    }

    #[inline]
    pub fn mul_raw(&self, a: u16, b: u16) -> u16 {
        if a == 0 || b == 0 {
            return 0;
        }
        let t = &self.0;
        t.exp[t.log[a as usize] as usize + t.log[b as usize] as usize]
    }

    /// Multiplicative inverse; `a` must be nonzero.
    #[inline]
    pub fn inv_raw(&self, a: u16) -> u16 {
        debug_assert!(a != 0, "inverse of zero");
        self.0.inv[a as usize]
    }
}

impl Tables {
    fn build(p: u32, m: u32, q: u32, modulus: Vec<u16>) -> Tables {
        let qs = q as usize;
        let digits = |v: u32| -> Vec<u32> {
            let mut v = v;
            (0..m)
                .map(|_| {
                    let d = v % p;
                    v /= p;
                    d
                })
                .collect()
        };
        let encode = |ds: &[u32]| -> u32 { ds.iter().rev().fold(0, |acc, &d| acc * p + d) };
        let all_digits: Vec<Vec<u32>> = (0..q).map(digits).collect();

        let mut add = vec![0u16; qs * qs];
        for a in 0..qs {
            for b in 0..qs {
                let s: Vec<u32> = all_digits[a]
                    .iter()
                    .zip(&all_digits[b])
                    .map(|(x, y)| (x + y) % p)
                    .collect();
                add[a * qs + b] = encode(&s) as u16;
            }
        }
        let neg: Vec<u16> = all_digits
            .iter()
            .map(|ds| encode(&ds.iter().map(|d| (p - d) % p).collect::<Vec<_>>()) as u16)
            .collect();

        let slow_mul = |a: u32, b: u32| -> u32 {
            let da = &all_digits[a as usize];
            let db = &all_digits[b as usize];
            let mut prod = vec![0u32; 2 * m as usize];
            for (i, x) in da.iter().enumerate() {
                for (j, y) in db.iter().enumerate() {
                    prod[i + j] = (prod[i + j] + x * y) % p;
                }
            }
            // Reduce by the monic modulus from the top degree down.
            for deg in (m as usize..prod.len()).rev() {
                let c = prod[deg];
                if c != 0 {
                    let shift = deg - m as usize;
                    for (i, &mc) in modulus.iter().enumerate() {
                        let t = (c * mc as u32) % p;
                        prod[shift + i] = (prod[shift + i] + p - t) % p;
                    }
                }
            }
            encode(&prod[..m as usize])
        };

        // Find a primitive element by brute force; q-1 is tiny.
        let order = q - 1;
        let mut exp = vec![0u16; 2 * order as usize];
        let mut log = vec![0u16; qs];
        let generator = (1..q)
            .find(|&g| {
                let mut x = 1u32;
                for i in 1..=order {
                    x = slow_mul(x, g);
                    if x == 1 {
                        return i == order;
                    }
                }
                false
            })
            .expect("a finite field has a primitive element");
        let mut x = 1u32;
        for i in 0..order {
            exp[i as usize] = x as u16;
            exp[(i + order) as usize] = x as u16;
            log[x as usize] = i as u16;
            x = slow_mul(x, generator);
        }
        let mut inv = vec![0u16; qs];
        for a in 1..q {
            let l = log[a as usize] as u32;
            inv[a as usize] = exp[((order - l) % order) as usize];
        }
        Tables {
            p,
            m,
            q,
            modulus,
            add,
            neg,
            exp,
            log,
            inv,
        }
    }
}

/// Trial division by every monic polynomial of degree `1..=deg/2` over GF(p).
fn poly_is_irreducible(f: &[u16], p: u32) -> bool {
    let deg = f.len() - 1;
    if deg == 0 || f[deg] != 1 {
        return false;
    }
    if deg == 1 {
        return true;
    }
    for d in 1..=deg / 2 {
        let count = (p as usize).pow(d as u32);
        for v in 0..count {
            let mut g = Vec::with_capacity(d + 1);
            let mut rest = v;
            for _ in 0..d {
                g.push((rest % p as usize) as u32);
                rest /= p as usize;
            }
            g.push(1);
            if poly_divides(&g, f, p) {
                return false;
            }
        }
    }
    true
}

fn poly_divides(g: &[u32], f: &[u16], p: u32) -> bool {
    let mut r: Vec<u32> = f.iter().map(|&c| c as u32 % p).collect();
    let dg = g.len() - 1;
    while r.len() > dg {
        let c = *r.last().unwrap();
        if c != 0 {
            let shift = r.len() - 1 - dg;
            for (i, &gc) in g.iter().enumerate() {
                r[shift + i] = (r[shift + i] + p * p - c * gc) % p;
            }
        }
        r.pop();
    }
    r.iter().all(|&c| c == 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u32, m: u32) -> FieldSpec {
        FieldSpec::new(p, m).unwrap()
    }

    fn e(v: u16) -> FieldElement {
        FieldElement(v)
    }

    #[test]
    fn small_examples() {
        let f2 = gf(2, 1);
        assert_eq!(f2.add(e(1), e(1)).unwrap(), e(0));
        assert_eq!(f2.inv(e(1)).unwrap(), e(1));

        let f3 = gf(3, 1);
        assert_eq!(f3.add(e(2), e(2)).unwrap(), e(1));
        assert_eq!(f3.mul(e(2), e(2)).unwrap(), e(1));
        assert_eq!(f3.inv(e(2)).unwrap(), e(2));

        // GF(4) with x^2 + x + 1: 2 = x, 3 = x + 1.
        let f4 = gf(2, 2);
        assert_eq!(f4.modulus(), &[1, 1, 1]);
        assert_eq!(f4.add(e(2), e(3)).unwrap(), e(1));
        assert_eq!(f4.mul(e(2), e(3)).unwrap(), e(1));
        assert_eq!(f4.inv(e(2)).unwrap(), e(3));
    }

    #[test]
    fn gf4_inverse_by_exhaustion() {
        let f4 = gf(2, 2);
        let sols: Vec<_> = f4
            .elements()
            .filter(|&x| f4.mul(e(2), x).unwrap() == FieldElement::ONE)
            .collect();
        assert_eq!(sols, vec![e(3)]);
    }

    #[test]
    fn errors() {
        let f3 = gf(3, 1);
        assert_eq!(f3.inv(e(0)), Err(GaloisError::DivisionByZero));
        assert_eq!(
            f3.add(e(3), e(0)),
            Err(GaloisError::OutOfRange { value: 3, q: 3 })
        );
        assert_eq!(FieldSpec::new(4, 1).unwrap_err(), GaloisError::NotPrime(4));
        assert!(matches!(
            FieldSpec::new(2, 10),
            Err(GaloisError::UnsupportedOrder { .. })
        ));
        assert!(matches!(
            FieldSpec::new(3, 0),
            Err(GaloisError::UnsupportedOrder { .. })
        ));
        assert_eq!(FieldSpec::with_order(9).unwrap(), gf(3, 2));
        assert!(FieldSpec::with_order(6).is_err());
        assert!(FieldSpec::with_order(1).is_err());
    }

    #[test]
    fn modulus_table_entries_are_irreducible() {
        for (p, m, poly) in MODULUS_TABLE {
            assert_eq!(poly.len() as u32, m + 1);
            assert!(poly_is_irreducible(poly, *p), "GF({p}^{m})");
            assert!(p.pow(*m) <= MAX_ORDER);
        }
        // x^2 + 1 = (x + 1)^2 over GF(2).
        assert!(!poly_is_irreducible(&[1, 0, 1], 2));
    }

    #[test]
    fn every_supported_order_builds() {
        for q in 2..=MAX_ORDER {
            if let Ok(f) = FieldSpec::with_order(q) {
                assert_eq!(f.q(), q);
                for a in 1..q as u16 {
                    assert_eq!(f.mul_raw(a, f.inv_raw(a)), 1, "{f:?} a={a}");
                }
            }
        }
    }

    fn check_axioms(f: &FieldSpec) {
        let q = f.q() as u16;
        for a in 0..q {
            assert_eq!(f.add_raw(a, 0), a);
            assert_eq!(f.mul_raw(a, 1), a);
            assert_eq!(f.add_raw(a, f.neg_raw(a)), 0);
            if a != 0 {
                assert_eq!(f.mul_raw(a, f.inv_raw(a)), 1);
            }
            for b in 0..q {
                assert_eq!(f.add_raw(a, b), f.add_raw(b, a));
                assert_eq!(f.mul_raw(a, b), f.mul_raw(b, a));
                if a != 0 && b != 0 {
                    assert_ne!(f.mul_raw(a, b), 0);
                }
                for c in 0..q {
                    assert_eq!(
                        f.add_raw(f.add_raw(a, b), c),
                        f.add_raw(a, f.add_raw(b, c))
                    );
                    assert_eq!(
                        f.mul_raw(f.mul_raw(a, b), c),
                        f.mul_raw(a, f.mul_raw(b, c))
                    );
                    assert_eq!(
                        f.mul_raw(a, f.add_raw(b, c)),
                        f.add_raw(f.mul_raw(a, b), f.mul_raw(a, c))
                    );
                }
            }
        }
    }

    #[test]
    fn field_axioms_exhaustive_up_to_16() {
        for q in 2..=16 {
            if let Ok(f) = FieldSpec::with_order(q) {
                check_axioms(&f);
            }
        }
    }
}
