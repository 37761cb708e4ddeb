//! The Paige loop M*(q): unit Zorn matrices over GF(q) modulo ±1.
//!
//! Each ± class is represented by its lexicographically least member under
//! the entry order `(a, α1, α2, α3, β1, β2, β3, b)`. The key packs those eight
//! indices as base-q digits with `a` most significant, so key order is the
//! lexicographic order and the canonical member is the one with smaller key.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::Mul;

use thiserror::Error;

use crate::gf::{Field, FieldElement, GfError};
use crate::psl2::{enumerate_sl2, Mat2};
use crate::zorn::{zorn_mul_raw, Vec3, ZornError, ZornMatrix};

/// Largest q for which [`enumerate_loop`] materializes the element table.
pub const TABLE_MAX_ORDER: u32 = 9;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LoopError {
    #[error(transparent)]
    Field(#[from] GfError),
    #[error(transparent)]
    Zorn(#[from] ZornError),
    #[error("determinant is {0}, expected 1")]
    NotUnit(FieldElement),
    #[error("embedding index must be 1, 2 or 3, got {0}")]
    BadEmbedding(usize),
    #[error("q = {q} exceeds the limit {limit} for {what}")]
    CapExceeded {
        q: u32,
        limit: u32,
        what: &'static str,
    },
    #[error("key {key} does not encode an element of M*({q})")]
    BadKey { key: u64, q: u32 },
}

#[inline]
pub(crate) fn pack(q: u32, e: &[u8; 8]) -> u64 {
    e.iter().fold(0u64, |acc, &d| acc * q as u64 + d as u64)
}

#[inline]
pub(crate) fn unpack(q: u32, mut key: u64) -> [u8; 8] {
    let mut e = [0u8; 8];
    for slot in e.iter_mut().rev() {
        *slot = (key % q as u64) as u8;
        key /= q as u64;
    }
    e
}

/// Canonical entries and key of the class of `e`.
#[inline]
pub(crate) fn canonical_raw(f: &Field, e: [u8; 8]) -> ([u8; 8], u64) {
    let neg = e.map(|x| f.neg_raw(x));
    let rep = if neg < e { neg } else { e };
    (rep, pack(f.order(), &rep))
}

/// Loop product of two canonical keys.
#[inline]
pub(crate) fn mul_keys(f: &Field, x: u64, y: u64) -> u64 {
    let q = f.order();
    canonical_raw(f, zorn_mul_raw(f, unpack(q, x), unpack(q, y))).1
}

/// An element of M*(q).
#[derive(Clone, Copy)]
pub struct PaigeElement {
    rep: ZornMatrix,
    key: u64,
}

impl PaigeElement {
    /// The class of a determinant-1 matrix.
    pub fn canonical(m: &ZornMatrix) -> Result<PaigeElement, LoopError> {
        let det = m.det();
        if !det.is_one() {
            return Err(LoopError::NotUnit(det));
        }
        Ok(PaigeElement::canonical_unchecked(m))
    }

    pub(crate) fn canonical_unchecked(m: &ZornMatrix) -> PaigeElement {
        let f = m.field();
        let (rep, key) = canonical_raw(f, m.raw_entries());
        PaigeElement {
            rep: ZornMatrix::from_raw_entries(f.order(), rep),
            key,
        }
    }

    pub(crate) fn from_canonical_key(q: u32, key: u64) -> PaigeElement {
        PaigeElement {
            rep: ZornMatrix::from_raw_entries(q, unpack(q, key)),
            key,
        }
    }

    /// Decodes a key, checking it names a canonical unit matrix.
    pub fn from_key(field: &Field, key: u64) -> Result<PaigeElement, LoopError> {
        let q = field.order();
        if key >= (q as u64).pow(8) {
            return Err(LoopError::BadKey { key, q });
        }
        let x = PaigeElement::from_canonical_key(q, key);
        match PaigeElement::canonical(&x.rep) {
            Ok(c) if c.key == key => Ok(x),
            _ => Err(LoopError::BadKey { key, q }),
        }
    }

    pub fn identity(field: &Field) -> PaigeElement {
        PaigeElement::canonical_unchecked(&ZornMatrix::identity(field))
    }

    pub fn parse(s: &str, field: &Field) -> Result<PaigeElement, LoopError> {
        PaigeElement::canonical(&ZornMatrix::parse(s, field)?)
    }

    pub fn rep(&self) -> &ZornMatrix {
        &self.rep
    }

    pub fn key(&self) -> u64 {
        self.key
    }

    pub fn field(&self) -> &'static Field {
        self.rep.field()
    }

    pub fn field_order(&self) -> u32 {
        self.rep.a.field_order()
    }

    pub fn is_identity(&self) -> bool {
        *self == PaigeElement::identity(self.field())
    }

    pub fn checked_mul(&self, rhs: &PaigeElement) -> Result<PaigeElement, LoopError> {
        if self.field_order() != rhs.field_order() {
            return Err(GfError::MixedFields(self.field_order(), rhs.field_order()).into());
        }
        let f = self.field();
        let (rep, key) = canonical_raw(
            f,
            zorn_mul_raw(f, self.rep.raw_entries(), rhs.rep.raw_entries()),
        );
        Ok(PaigeElement {
            rep: ZornMatrix::from_raw_entries(f.order(), rep),
            key,
        })
    }

    pub fn inverse(&self) -> PaigeElement {
        let inv = self
            .rep
            .inverse()
            .expect("loop elements have determinant 1");
        PaigeElement::canonical_unchecked(&inv)
    }
}

impl Mul for PaigeElement {
    type Output = PaigeElement;

    fn mul(self, rhs: PaigeElement) -> PaigeElement {
        self.checked_mul(&rhs).expect("mixed-field operands")
    }
}

impl PartialEq for PaigeElement {
    fn eq(&self, other: &Self) -> bool {
        self.key == other.key && self.field_order() == other.field_order()
    }
}

impl Eq for PaigeElement {}

impl Hash for PaigeElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.field_order().hash(state);
        self.key.hash(state);
    }
}

impl PartialOrd for PaigeElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PaigeElement {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.field_order(), self.key).cmp(&(other.field_order(), other.key))
    }
}

impl fmt::Display for PaigeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.rep.fmt(f)
    }
}

impl fmt::Debug for PaigeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.rep)
    }
}

/// M*(q) with its order and, for small q, the sorted element table.
#[derive(Clone, Debug)]
pub struct LoopContext {
    field: &'static Field,
    order: u64,
    elements: Option<Vec<PaigeElement>>,
}

impl LoopContext {
    /// Order only, computed by [`count_loop`].
    pub fn counted(field: &'static Field) -> LoopContext {
        LoopContext {
            field,
            order: count_loop(field),
            elements: None,
        }
    }

    pub fn field(&self) -> &'static Field {
        self.field
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn elements(&self) -> Option<&[PaigeElement]> {
        self.elements.as_deref()
    }

    /// Position of `x` in the element table.
    pub fn index_of(&self, x: &PaigeElement) -> Option<usize> {
        if x.field_order() != self.field.order() {
            return None;
        }
        self.elements
            .as_ref()?
            .binary_search_by_key(&x.key, |e| e.key)
            .ok()
    }

    /// Row-major `n × n` table of product indices, `n` = order.
    pub fn cayley_table(&self) -> Option<Vec<u32>> {
        let elements = self.elements.as_ref()?;
        let mut table = Vec::with_capacity(elements.len() * elements.len());
        for x in elements {
            for y in elements {
                let z = *x * *y;
                table.push(self.index_of(&z).expect("loop is closed") as u32);
            }
        }
        Some(table)
    }
}

/// Number of `(a, b)` with `ab = t`.
fn solutions(q: u64, t: FieldElement) -> u64 {
    if t.is_zero() {
        2 * q - 1
    } else {
        q - 1
    }
}

/// |M*(q)|, counted from the distribution of α·β over (α, β) ∈ F³ × F³.
pub fn count_loop(field: &Field) -> u64 {
    let q = field.order() as usize;
    // single[s] = #{(x, y) ∈ F² : xy = s}
    let mut single = vec![0u64; q];
    for x in field.elements() {
        for y in field.elements() {
            single[(x * y).index() as usize] += 1;
        }
    }
    let mut dist = vec![0u64; q];
    dist[0] = 1;
    for _ in 0..3 {
        let mut next = vec![0u64; q];
        for s in field.elements() {
            for t in field.elements() {
                next[(s + t).index() as usize] +=
                    dist[s.index() as usize] * single[t.index() as usize];
            }
        }
        dist = next;
    }
    let matrices: u64 = field
        .elements()
        .map(|s| dist[s.index() as usize] * solutions(q as u64, field.one() + s))
        .sum();
    if field.characteristic() == 2 {
        matrices
    } else {
        matrices / 2
    }
}

/// Every element of M*(q), sorted by key.
///
/// For each (α, β) the condition `ab = 1 + α·β` is solved for `b` (or, when
/// `a = 0`, requires `1 + α·β = 0` and leaves `b` free).
pub fn enumerate_loop(field: &'static Field) -> Result<LoopContext, LoopError> {
    let q = field.order();
    if q > TABLE_MAX_ORDER {
        return Err(LoopError::CapExceeded {
            q,
            limit: TABLE_MAX_ORDER,
            what: "loop enumeration",
        });
    }
    let vectors: Vec<[u8; 3]> = (0..q.pow(3))
        .map(|n| [(n / (q * q)) as u8, (n / q % q) as u8, (n % q) as u8])
        .collect();
    let mut keys = Vec::new();
    for alpha in &vectors {
        for beta in &vectors {
            let dot = (0..3).fold(0u8, |acc, i| {
                field.add_raw(acc, field.mul_raw(alpha[i], beta[i]))
            });
            let target = field.add_raw(1, dot);
            let mut push = |a: u8, b: u8| {
                let e = [
                    a, alpha[0], alpha[1], alpha[2], beta[0], beta[1], beta[2], b,
                ];
                let (rep, key) = canonical_raw(field, e);
                if rep == e {
                    keys.push(key);
                }
            };
            for a in 1..q as u8 {
                push(a, field.mul_raw(target, field.inv_raw(a)));
            }
            if target == 0 {
                for b in 0..q as u8 {
                    push(0, b);
                }
            }
        }
    }
    keys.sort_unstable();
    keys.dedup();
    let elements: Vec<PaigeElement> = keys
        .into_iter()
        .map(|k| PaigeElement::from_canonical_key(q, k))
        .collect();
    Ok(LoopContext {
        field,
        order: elements.len() as u64,
        elements: Some(elements),
    })
}

/// `φ_i([a b; c d]) = [a | b·e_i | c·e_i | d]`.
pub fn embed_phi(i: usize, m: &Mat2) -> Result<PaigeElement, LoopError> {
    if !(1..=3).contains(&i) {
        return Err(LoopError::BadEmbedding(i));
    }
    let f = m.field();
    let e = Vec3::basis(f, i);
    let z = ZornMatrix::new(m.a, e.scale(m.b), e.scale(m.c), m.d)?;
    PaigeElement::canonical(&z)
}

/// `G_i`, the image of PSL(2,q) under `φ_i`, in first-seen order.
pub fn subgroup_gi(i: usize, field: &Field) -> Result<Vec<PaigeElement>, LoopError> {
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for m in enumerate_sl2(field) {
        let x = embed_phi(i, &m)?;
        if seen.insert(x.key) {
            out.push(x);
        }
    }
    Ok(out)
}
