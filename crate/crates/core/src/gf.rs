//! Arithmetic in the finite fields GF(p^r).
//!
//! A field is fixed by its order: the modulus is always the lexicographically
//! least monic irreducible polynomial of degree `r` (coefficient tuples compared
//! constant term first), so two fields of the same order are the same field.
//! Constructed fields live in a process-wide registry and elements only carry
//! the order `q` plus their canonical index `Σ c_i p^i`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::OnceLock;

use thiserror::Error;

/// Largest field order supported.
pub const MAX_ORDER: u32 = 121;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GfError {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("extension degree must be at least 1, got {0}")]
    BadDegree(u32),
    #[error("{0} is not a prime power")]
    NotPrimePower(u32),
    #[error("field order {0} exceeds the supported maximum {MAX_ORDER}")]
    OrderTooLarge(u64),
    #[error("element index {index} out of range for GF({q})")]
    IndexOutOfRange { index: u32, q: u32 },
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("mixed-field operands: GF({0}) and GF({1})")]
    MixedFields(u32, u32),
}

static REGISTRY: [OnceLock<Field>; MAX_ORDER as usize + 1] =
    [const { OnceLock::new() }; MAX_ORDER as usize + 1];

/// The field GF(q) with precomputed operation tables.
#[derive(Debug)]
pub struct Field {
    p: u32,
    r: u32,
    q: u32,
    modulus: Vec<u32>,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
    primitive: u8,
}

pub fn is_prime(n: u32) -> bool {
    n >= 2
        && (2..)
            .take_while(|d| d * d <= n)
            .all(|d| !n.is_multiple_of(d))
}

/// Splits `q` as `p^r` with `p` prime.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut rest = q;
    let mut r = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        r += 1;
    }
    (rest == 1).then_some((p, r))
}

// Polynomials over GF(p) are coefficient vectors, constant term first.

fn poly_rem(mut num: Vec<u32>, den: &[u32], p: u32) -> Vec<u32> {
    let dd = den.len() - 1;
    let lead_inv = mod_inv(den[dd], p);
    while num.len() > dd {
        let top = *num.last().unwrap();
        if top != 0 {
            let factor = top * lead_inv % p;
            let shift = num.len() - 1 - dd;
            for (i, &c) in den.iter().enumerate() {
                num[shift + i] = (num[shift + i] + p - factor * c % p) % p;
            }
        }
        num.pop();
    }
    num
}

fn mod_inv(x: u32, p: u32) -> u32 {
    (1..p)
        .find(|y| x * y % p == 1)
        .expect("nonzero residue mod a prime")
}

/// Monic polynomials of degree `deg`, in lexicographic order of their
/// coefficient tuples with the constant term most significant.
fn monic_polys(p: u32, deg: u32) -> impl Iterator<Item = Vec<u32>> {
    let count = p.pow(deg);
    (0..count).map(move |n| {
        let mut coeffs = vec![0; deg as usize + 1];
        let mut rest = n;
        for i in (0..deg as usize).rev() {
            coeffs[i] = rest % p;
            rest /= p;
        }
        coeffs[deg as usize] = 1;
        coeffs
    })
}

fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let deg = poly.len() as u32 - 1;
    (1..=deg / 2)
        .all(|d| monic_polys(p, d).all(|f| poly_rem(poly.to_vec(), &f, p).iter().any(|&c| c != 0)))
}

impl Field {
    /// The field GF(p^r).
    pub fn new(p: u32, r: u32) -> Result<&'static Field, GfError> {
        if !is_prime(p) {
            return Err(GfError::NotPrime(p));
        }
        if r < 1 {
            return Err(GfError::BadDegree(r));
        }
        let q = (p as u64).checked_pow(r).unwrap_or(u64::MAX);
        if q > MAX_ORDER as u64 {
            return Err(GfError::OrderTooLarge(q));
        }
        Ok(REGISTRY[q as usize].get_or_init(|| Field::build(p, r)))
    }

    /// The field with `q` elements.
    pub fn with_order(q: u32) -> Result<&'static Field, GfError> {
        if q > MAX_ORDER {
            return Err(GfError::OrderTooLarge(q as u64));
        }
        let (p, r) = prime_power(q).ok_or(GfError::NotPrimePower(q))?;
        Field::new(p, r)
    }

    fn build(p: u32, r: u32) -> Field {
        let q = p.pow(r);
        let modulus = if r == 1 {
            vec![0, 1]
        } else {
            monic_polys(p, r)
                .find(|f| is_irreducible(f, p))
                .expect("an irreducible polynomial exists in every degree")
        };
        let digits = |x: u32| -> Vec<u32> { (0..r).map(|i| x / p.pow(i) % p).collect() };
        let undigits = |c: &[u32]| -> u32 { c.iter().rev().fold(0, |acc, &d| acc * p + d) };

        let n = q as usize;
        let mut add = vec![0u8; n * n];
        let mut mul = vec![0u8; n * n];
        for x in 0..q {
            let dx = digits(x);
            for y in 0..q {
                let dy = digits(y);
                let sum: Vec<u32> = dx.iter().zip(&dy).map(|(a, b)| (a + b) % p).collect();
                let mut prod = vec![0u32; 2 * r as usize - 1];
                for (i, a) in dx.iter().enumerate() {
                    for (j, b) in dy.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + a * b) % p;
                    }
                }
                let prod = poly_rem(prod, &modulus, p);
                let mut padded = vec![0; r as usize];
                padded[..prod.len()].copy_from_slice(&prod);
                let idx = x as usize * n + y as usize;
                add[idx] = undigits(&sum) as u8;
                mul[idx] = undigits(&padded) as u8;
            }
        }
        let neg: Vec<u8> = (0..n)
            .map(|x| (0..n).find(|&y| add[x * n + y] == 0).unwrap() as u8)
            .collect();
        let inv: Vec<u8> = (0..n)
            .map(|x| (0..n).find(|&y| mul[x * n + y] == 1).unwrap_or(0) as u8)
            .collect();

        let mut field = Field {
            p,
            r,
            q,
            modulus,
            add,
            mul,
            neg,
            inv,
            primitive: 1,
        };
        field.primitive = (1..q)
            .find(|&x| field.order_of(x as u8) == q - 1)
            .expect("the multiplicative group is cyclic") as u8;
        field
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.r
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    /// Modulus coefficients `c0, c1, ..., cr` (constant term first).
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn element(&self, index: u32) -> Result<FieldElement, GfError> {
        if index >= self.q {
            return Err(GfError::IndexOutOfRange { index, q: self.q });
        }
        Ok(self.elem(index as u8))
    }

    /// Element with coefficient `coeffs[i]` on `t^i`.
    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<FieldElement, GfError> {
        let index = coeffs
            .iter()
            .rev()
            .fold(0u32, |acc, &c| acc * self.p + c % self.p);
        self.element(index)
    }

    /// Reduces an integer into the prime subfield.
    pub fn from_int(&self, n: i64) -> FieldElement {
        self.elem(n.rem_euclid(self.p as i64) as u8)
    }

    pub fn zero(&self) -> FieldElement {
        self.elem(0)
    }

    pub fn one(&self) -> FieldElement {
        self.elem(1)
    }

    /// The primitive element of least canonical index.
    pub fn primitive_element(&self) -> FieldElement {
        self.elem(self.primitive)
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.q).map(|i| self.elem(i as u8))
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (1..self.q).map(|i| self.elem(i as u8))
    }

    #[inline]
    fn elem(&self, index: u8) -> FieldElement {
        FieldElement {
            q: self.q as u8,
            index,
        }
    }

    // Unchecked table arithmetic; callers guarantee both operands belong here.

    #[inline]
    pub(crate) fn add_raw(&self, x: u8, y: u8) -> u8 {
        self.add[x as usize * self.q as usize + y as usize]
    }

    #[inline]
    pub(crate) fn mul_raw(&self, x: u8, y: u8) -> u8 {
        self.mul[x as usize * self.q as usize + y as usize]
    }

    #[inline]
    pub(crate) fn neg_raw(&self, x: u8) -> u8 {
        self.neg[x as usize]
    }

    #[inline]
    pub(crate) fn sub_raw(&self, x: u8, y: u8) -> u8 {
        self.add_raw(x, self.neg_raw(y))
    }

    #[inline]
    pub(crate) fn inv_raw(&self, x: u8) -> u8 {
        self.inv[x as usize]
    }

    fn order_of(&self, x: u8) -> u32 {
        let mut acc = x;
        let mut n = 1;
        while acc != 1 {
            acc = self.mul_raw(acc, x);
            n += 1;
        }
        n
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.q)
    }
}

/// An element of a registered field: the field order plus the canonical index.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    q: u8,
    index: u8,
}

impl FieldElement {
    #[inline]
    pub fn field(self) -> &'static Field {
        REGISTRY[self.q as usize]
            .get()
            .expect("elements are only created by registered fields")
    }

    #[inline]
    pub fn index(self) -> u32 {
        self.index as u32
    }

    #[inline]
    pub(crate) fn raw(self) -> u8 {
        self.index
    }

    #[inline]
    pub(crate) fn from_raw(q: u32, index: u8) -> FieldElement {
        FieldElement { q: q as u8, index }
    }

    #[inline]
    pub fn field_order(self) -> u32 {
        self.q as u32
    }

    pub fn coeffs(self) -> Vec<u32> {
        let f = self.field();
        (0..f.r).map(|i| self.index() / f.p.pow(i) % f.p).collect()
    }

    pub fn is_zero(self) -> bool {
        self.index == 0
    }

    pub fn is_one(self) -> bool {
        self.index == 1
    }

    fn same_field(self, other: FieldElement) -> Result<&'static Field, GfError> {
        if self.q != other.q {
            return Err(GfError::MixedFields(self.q as u32, other.q as u32));
        }
        Ok(self.field())
    }

    pub fn checked_add(self, rhs: FieldElement) -> Result<FieldElement, GfError> {
        let f = self.same_field(rhs)?;
        Ok(f.elem(f.add_raw(self.index, rhs.index)))
    }

    pub fn checked_sub(self, rhs: FieldElement) -> Result<FieldElement, GfError> {
        let f = self.same_field(rhs)?;
        Ok(f.elem(f.sub_raw(self.index, rhs.index)))
    }

    pub fn checked_mul(self, rhs: FieldElement) -> Result<FieldElement, GfError> {
        let f = self.same_field(rhs)?;
        Ok(f.elem(f.mul_raw(self.index, rhs.index)))
    }

    pub fn inv(self) -> Result<FieldElement, GfError> {
        if self.is_zero() {
            return Err(GfError::ZeroInverse);
        }
        let f = self.field();
        Ok(f.elem(f.inv_raw(self.index)))
    }

    pub fn pow(self, mut n: u64) -> FieldElement {
        let f = self.field();
        let mut base = self.index;
        let mut acc = 1u8;
        while n > 0 {
            if n & 1 == 1 {
                acc = f.mul_raw(acc, base);
            }
            base = f.mul_raw(base, base);
            n >>= 1;
        }
        f.elem(acc)
    }

    /// Multiplicative order.
    pub fn order(self) -> Result<u32, GfError> {
        if self.is_zero() {
            return Err(GfError::ZeroInverse);
        }
        Ok(self.field().order_of(self.index))
    }

    pub fn is_primitive(self) -> bool {
        self.order().is_ok_and(|n| n == self.field_order() - 1)
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@GF({})", self.index, self.q)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait for FieldElement {
            type Output = FieldElement;

            #[inline]
            fn $method(self, rhs: FieldElement) -> FieldElement {
                self.$checked(rhs).expect("mixed-field operands")
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Neg for FieldElement {
    type Output = FieldElement;

    #[inline]
    fn neg(self) -> FieldElement {
        let f = self.field();
        f.elem(f.neg_raw(self.index))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(q: u32) -> &'static Field {
        Field::with_order(q).unwrap()
    }

    #[test]
    fn prime_field_modulus_is_t() {
        let f = Field::new(5, 1).unwrap();
        assert_eq!(f.order(), 5);
        assert_eq!(f.modulus(), &[0, 1]);
    }

    #[test]
    fn gf4_modulus() {
        assert_eq!(Field::new(2, 2).unwrap().modulus(), &[1, 1, 1]);
    }

    #[test]
    fn gf9_modulus_matches_root_search() {
        // Monic quadratics over GF(3) have no factor iff they have no root.
        let rootless = (0..9u32)
            .map(|n| (n / 3, n % 3))
            .find(|&(c0, c1)| (0..3).all(|x| (c0 + c1 * x + x * x) % 3 != 0))
            .unwrap();
        assert_eq!(rootless, (1, 0));
        assert_eq!(gf(9).modulus(), &[1, 0, 1]);
    }

    #[test]
    fn construction_errors() {
        assert_eq!(Field::new(4, 1).unwrap_err(), GfError::NotPrime(4));
        assert_eq!(Field::new(3, 0).unwrap_err(), GfError::BadDegree(0));
        assert_eq!(Field::new(2, 7).unwrap_err(), GfError::OrderTooLarge(128));
        assert_eq!(Field::with_order(6).unwrap_err(), GfError::NotPrimePower(6));
        assert!(Field::with_order(121).is_ok());
        assert!(Field::with_order(1).is_err());
    }

    #[test]
    fn small_arithmetic() {
        let f5 = gf(5);
        assert_eq!(f5.from_int(2) + f5.from_int(4), f5.from_int(1));
        let f7 = gf(7);
        assert_eq!(f7.from_int(3).inv().unwrap(), f7.from_int(5));
        let f4 = gf(4);
        let t = f4.from_coeffs(&[0, 1]).unwrap();
        assert_eq!(t * t, f4.from_coeffs(&[1, 1]).unwrap());
    }

    #[test]
    fn errors_on_zero_inverse_and_mixed_fields() {
        assert_eq!(gf(7).zero().inv().unwrap_err(), GfError::ZeroInverse);
        assert_eq!(gf(7).zero().order().unwrap_err(), GfError::ZeroInverse);
        let err = gf(5).one().checked_mul(gf(7).one()).unwrap_err();
        assert_eq!(err, GfError::MixedFields(5, 7));
        assert!(gf(5).element(5).is_err());
    }

    #[test]
    #[should_panic(expected = "mixed-field")]
    fn operator_panics_on_mixed_fields() {
        let _ = gf(3).one() + gf(2).one();
    }

    #[test]
    fn primitive_elements() {
        assert_eq!(gf(2).primitive_element().index(), 1);
        assert_eq!(gf(5).primitive_element().index(), 2);
        // t = index 2 in GF(4)
        assert_eq!(gf(4).primitive_element().index(), 2);
        assert_eq!(gf(7).primitive_element().index(), 3);
    }

    #[test]
    fn element_orders() {
        assert_eq!(gf(5).from_int(4).order().unwrap(), 2);
        assert_eq!(gf(7).from_int(3).order().unwrap(), 6);
        for q in [2, 3, 4, 5, 7, 8, 9, 11] {
            assert_eq!(gf(q).one().order().unwrap(), 1);
        }
    }

    fn small_fields() -> impl Iterator<Item = &'static Field> {
        [2, 3, 4, 5, 7, 8, 9].into_iter().map(gf)
    }

    #[test]
    fn field_laws_exhaustive() {
        for f in small_fields() {
            for x in f.elements() {
                if !x.is_zero() {
                    assert!((x * x.inv().unwrap()).is_one());
                }
                assert!((x + -x).is_zero());
                for y in f.elements() {
                    assert_eq!(x * y, y * x);
                    assert_eq!(x + y, y + x);
                    for z in f.elements() {
                        assert_eq!(x * (y + z), x * y + x * z);
                        assert_eq!((x * y) * z, x * (y * z));
                    }
                }
            }
        }
    }

    #[test]
    fn frobenius_is_additive() {
        for f in small_fields() {
            let p = f.characteristic() as u64;
            for x in f.elements() {
                for y in f.elements() {
                    assert_eq!((x + y).pow(p), x.pow(p) + y.pow(p));
                }
            }
        }
    }

    #[test]
    fn primitive_generates_everything() {
        for f in small_fields() {
            let g = f.primitive_element();
            assert_eq!(g.order().unwrap(), f.order() - 1);
            let mut powers: Vec<u32> = (0..f.order() - 1)
                .map(|k| g.pow(k as u64).index())
                .collect();
            powers.sort_unstable();
            assert_eq!(powers, (1..f.order()).collect::<Vec<_>>());
            // least index among primitives
            assert!(f
                .nonzero_elements()
                .take_while(|&x| x != g)
                .all(|x| !x.is_primitive()));
        }
    }

    #[test]
    fn index_round_trips() {
        for q in (2..=MAX_ORDER).filter(|&q| prime_power(q).is_some()) {
            let f = gf(q);
            for x in f.elements() {
                assert_eq!(f.from_coeffs(&x.coeffs()).unwrap(), x);
            }
        }
    }
}
