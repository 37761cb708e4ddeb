//! Zorn vector matrices: the split octonions as `[a | α | β | b]` with
//! `a, b` scalars and `α, β` 3-vectors.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

use crate::gf::{Field, FieldElement, GfError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ZornError {
    #[error(transparent)]
    Field(#[from] GfError),
    #[error("determinant is {0}, expected 1")]
    NotUnit(FieldElement),
    #[error("malformed matrix notation {0:?}: {1}")]
    Parse(String, &'static str),
}

/// A vector in F³.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Vec3(pub(crate) [FieldElement; 3]);

impl Vec3 {
    pub fn new(x1: FieldElement, x2: FieldElement, x3: FieldElement) -> Result<Vec3, GfError> {
        let q = x1.field_order();
        for other in [x2, x3] {
            if other.field_order() != q {
                return Err(GfError::MixedFields(q, other.field_order()));
            }
        }
        Ok(Vec3([x1, x2, x3]))
    }

    pub fn zero(field: &Field) -> Vec3 {
        Vec3([field.zero(); 3])
    }

    /// The basis vector `e_i`, `i` in 1..=3.
    pub fn basis(field: &Field, i: usize) -> Vec3 {
        assert!((1..=3).contains(&i), "basis index {i} out of range");
        let mut v = Vec3::zero(field);
        v.0[i - 1] = field.one();
        v
    }

    pub fn components(&self) -> [FieldElement; 3] {
        self.0
    }

    pub fn field(&self) -> &'static Field {
        self.0[0].field()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|x| x.is_zero())
    }

    pub fn scale(&self, s: FieldElement) -> Vec3 {
        Vec3(self.0.map(|x| s * x))
    }

    pub fn checked_dot(&self, other: &Vec3) -> Result<FieldElement, GfError> {
        check_same(self.field_order(), other.field_order())?;
        Ok(self.dot(other))
    }

    /// Dot product; panics on mixed fields.
    pub fn dot(&self, other: &Vec3) -> FieldElement {
        let [u1, u2, u3] = self.0;
        let [v1, v2, v3] = other.0;
        u1 * v1 + u2 * v2 + u3 * v3
    }

    pub fn checked_cross(&self, other: &Vec3) -> Result<Vec3, GfError> {
        check_same(self.field_order(), other.field_order())?;
        Ok(self.cross(other))
    }

    /// Cross product; panics on mixed fields.
    pub fn cross(&self, other: &Vec3) -> Vec3 {
        let [u1, u2, u3] = self.0;
        let [v1, v2, v3] = other.0;
        Vec3([u2 * v3 - u3 * v2, u3 * v1 - u1 * v3, u1 * v2 - u2 * v1])
    }

    fn field_order(&self) -> u32 {
        self.0[0].field_order()
    }
}

fn check_same(q1: u32, q2: u32) -> Result<(), GfError> {
    if q1 != q2 {
        return Err(GfError::MixedFields(q1, q2));
    }
    Ok(())
}

impl Add for Vec3 {
    type Output = Vec3;

    fn add(self, rhs: Vec3) -> Vec3 {
        Vec3([
            self.0[0] + rhs.0[0],
            self.0[1] + rhs.0[1],
            self.0[2] + rhs.0[2],
        ])
    }
}

impl Sub for Vec3 {
    type Output = Vec3;

    fn sub(self, rhs: Vec3) -> Vec3 {
        self + -rhs
    }
}

impl Neg for Vec3 {
    type Output = Vec3;

    fn neg(self) -> Vec3 {
        Vec3(self.0.map(|x| -x))
    }
}

impl fmt::Debug for Vec3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.0[0], self.0[1], self.0[2])
    }
}

/// A Zorn vector matrix `[a | α | β | b]`. The determinant is unconstrained.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct ZornMatrix {
    pub a: FieldElement,
    pub alpha: Vec3,
    pub beta: Vec3,
    pub b: FieldElement,
}

impl ZornMatrix {
    pub fn new(
        a: FieldElement,
        alpha: Vec3,
        beta: Vec3,
        b: FieldElement,
    ) -> Result<ZornMatrix, GfError> {
        let q = a.field_order();
        for other in [alpha.field_order(), beta.field_order(), b.field_order()] {
            check_same(q, other)?;
        }
        Ok(ZornMatrix { a, alpha, beta, b })
    }

    pub fn identity(field: &Field) -> ZornMatrix {
        ZornMatrix {
            a: field.one(),
            alpha: Vec3::zero(field),
            beta: Vec3::zero(field),
            b: field.one(),
        }
    }

    pub fn field(&self) -> &'static Field {
        self.a.field()
    }

    /// Entries in storage order `(a, α1, α2, α3, β1, β2, β3, b)`.
    pub fn entries(&self) -> [FieldElement; 8] {
        let [x1, x2, x3] = self.alpha.0;
        let [y1, y2, y3] = self.beta.0;
        [self.a, x1, x2, x3, y1, y2, y3, self.b]
    }

    pub(crate) fn raw_entries(&self) -> [u8; 8] {
        self.entries().map(FieldElement::raw)
    }

    pub(crate) fn from_raw_entries(q: u32, e: [u8; 8]) -> ZornMatrix {
        let x = |i: usize| FieldElement::from_raw(q, e[i]);
        ZornMatrix {
            a: x(0),
            alpha: Vec3([x(1), x(2), x(3)]),
            beta: Vec3([x(4), x(5), x(6)]),
            b: x(7),
        }
    }

    pub fn from_entries(entries: [FieldElement; 8]) -> Result<ZornMatrix, GfError> {
        let [a, x1, x2, x3, y1, y2, y3, b] = entries;
        ZornMatrix::new(a, Vec3::new(x1, x2, x3)?, Vec3::new(y1, y2, y3)?, b)
    }

    /// `ab − α·β`.
    pub fn det(&self) -> FieldElement {
        self.a * self.b - self.alpha.dot(&self.beta)
    }

    pub fn is_unit(&self) -> bool {
        self.det().is_one()
    }

    /// `[b | −α | −β | a]`, valid only when the determinant is 1.
    pub fn inverse(&self) -> Result<ZornMatrix, ZornError> {
        let det = self.det();
        if !det.is_one() {
            return Err(ZornError::NotUnit(det));
        }
        Ok(ZornMatrix {
            a: self.b,
            alpha: -self.alpha,
            beta: -self.beta,
            b: self.a,
        })
    }

    pub fn checked_mul(&self, rhs: &ZornMatrix) -> Result<ZornMatrix, GfError> {
        check_same(self.a.field_order(), rhs.a.field_order())?;
        Ok(ZornMatrix::from_raw_entries(
            self.a.field_order(),
            zorn_mul_raw(self.field(), self.raw_entries(), rhs.raw_entries()),
        ))
    }

    /// Parses `[a|x1,x2,x3|y1,y2,y3|b]` with canonical indices.
    pub fn parse(s: &str, field: &Field) -> Result<ZornMatrix, ZornError> {
        let err = |why| ZornError::Parse(s.to_string(), why);
        let inner = s
            .trim()
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(|| err("expected surrounding brackets"))?;
        let blocks: Vec<&str> = inner.split('|').collect();
        if blocks.len() != 4 {
            return Err(err("expected four '|'-separated blocks"));
        }
        let scalar = |t: &str| -> Result<FieldElement, ZornError> {
            let n: u32 = t.parse().map_err(|_| err("entry is not a decimal index"))?;
            Ok(field.element(n)?)
        };
        let vector = |t: &str| -> Result<Vec3, ZornError> {
            let parts: Vec<&str> = t.split(',').collect();
            if parts.len() != 3 {
                return Err(err("vector blocks need three entries"));
            }
            Ok(Vec3([
                scalar(parts[0])?,
                scalar(parts[1])?,
                scalar(parts[2])?,
            ]))
        };
        Ok(ZornMatrix {
            a: scalar(blocks[0])?,
            alpha: vector(blocks[1])?,
            beta: vector(blocks[2])?,
            b: scalar(blocks[3])?,
        })
    }
}

/// Zorn product on raw entry indices over `f`:
///
/// ```text
/// [a α β b][c γ δ d] = [ac + α·δ | aγ + αd − β×δ | βc + bδ + α×γ | β·γ + bd]
/// ```
#[inline]
pub(crate) fn zorn_mul_raw(f: &Field, m: [u8; 8], n: [u8; 8]) -> [u8; 8] {
    let add = |x, y| f.add_raw(x, y);
    let sub = |x, y| f.sub_raw(x, y);
    let mul = |x, y| f.mul_raw(x, y);
    let dot = |u: [u8; 3], v: [u8; 3]| add(add(mul(u[0], v[0]), mul(u[1], v[1])), mul(u[2], v[2]));
    let cross = |u: [u8; 3], v: [u8; 3]| {
        [
            sub(mul(u[1], v[2]), mul(u[2], v[1])),
            sub(mul(u[2], v[0]), mul(u[0], v[2])),
            sub(mul(u[0], v[1]), mul(u[1], v[0])),
        ]
    };

    let (a, alpha, beta, b) = (m[0], [m[1], m[2], m[3]], [m[4], m[5], m[6]], m[7]);
    let (c, gamma, delta, d) = (n[0], [n[1], n[2], n[3]], [n[4], n[5], n[6]], n[7]);

    let bd = cross(beta, delta);
    let ag = cross(alpha, gamma);
    let mut out = [0u8; 8];
    out[0] = add(mul(a, c), dot(alpha, delta));
    for i in 0..3 {
        out[1 + i] = sub(add(mul(a, gamma[i]), mul(alpha[i], d)), bd[i]);
        out[4 + i] = add(add(mul(beta[i], c), mul(b, delta[i])), ag[i]);
    }
    out[7] = add(dot(beta, gamma), mul(b, d));
    out
}

impl Mul for ZornMatrix {
    type Output = ZornMatrix;

    fn mul(self, rhs: ZornMatrix) -> ZornMatrix {
        self.checked_mul(&rhs).expect("mixed-field operands")
    }
}

impl Neg for ZornMatrix {
    type Output = ZornMatrix;

    fn neg(self) -> ZornMatrix {
        ZornMatrix {
            a: -self.a,
            alpha: -self.alpha,
            beta: -self.beta,
            b: -self.b,
        }
    }
}

impl fmt::Display for ZornMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [x1, x2, x3] = self.alpha.0;
        let [y1, y2, y3] = self.beta.0;
        write!(
            f,
            "[{}|{},{},{}|{},{},{}|{}]",
            self.a, x1, x2, x3, y1, y2, y3, self.b
        )
    }
}

impl fmt::Debug for ZornMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@GF({})", self, self.a.field_order())
    }
}
