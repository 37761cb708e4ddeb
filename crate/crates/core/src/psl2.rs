//! SL(2,q) and PSL(2,q): 2×2 matrices over GF(q), the classical generator
//! families, and closure under multiplication.

use std::collections::HashSet;
use std::fmt;
use std::ops::{Mul, Neg};
use std::str::FromStr;

use thiserror::Error;

use crate::gf::{is_prime, Field, FieldElement, GfError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PslError {
    #[error(transparent)]
    Field(#[from] GfError),
    #[error("singular matrix")]
    Singular,
    #[error("determinant is {0}, expected 1")]
    NotUnimodular(FieldElement),
    #[error("{family} generators need {hypothesis}; got q = {q}")]
    Hypothesis {
        family: Family,
        hypothesis: &'static str,
        q: u32,
    },
    #[error("lambda = {0:?} is not a primitive element")]
    NotPrimitive(FieldElement),
    #[error("empty generator list")]
    NoGenerators,
}

/// Row-major `[a b; c d]`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Mat2 {
    pub a: FieldElement,
    pub b: FieldElement,
    pub c: FieldElement,
    pub d: FieldElement,
}

impl Mat2 {
    pub fn new(
        a: FieldElement,
        b: FieldElement,
        c: FieldElement,
        d: FieldElement,
    ) -> Result<Mat2, GfError> {
        for x in [b, c, d] {
            if x.field_order() != a.field_order() {
                return Err(GfError::MixedFields(a.field_order(), x.field_order()));
            }
        }
        Ok(Mat2 { a, b, c, d })
    }

    /// Matrix with prime-subfield entries given as integers.
    pub fn from_ints(field: &Field, [a, b, c, d]: [i64; 4]) -> Mat2 {
        Mat2 {
            a: field.from_int(a),
            b: field.from_int(b),
            c: field.from_int(c),
            d: field.from_int(d),
        }
    }

    pub fn identity(field: &Field) -> Mat2 {
        Mat2::from_ints(field, [1, 0, 0, 1])
    }

    pub fn field(&self) -> &'static Field {
        self.a.field()
    }

    pub fn det(&self) -> FieldElement {
        self.a * self.d - self.b * self.c
    }

    /// Adjugate divided by the determinant.
    pub fn inverse(&self) -> Result<Mat2, PslError> {
        let det_inv = self.det().inv().map_err(|_| PslError::Singular)?;
        Ok(Mat2 {
            a: self.d * det_inv,
            b: -self.b * det_inv,
            c: -self.c * det_inv,
            d: self.a * det_inv,
        })
    }

    pub fn checked_mul(&self, rhs: &Mat2) -> Result<Mat2, GfError> {
        Ok(Mat2 {
            a: self
                .a
                .checked_mul(rhs.a)?
                .checked_add(self.b.checked_mul(rhs.c)?)?,
            b: self
                .a
                .checked_mul(rhs.b)?
                .checked_add(self.b.checked_mul(rhs.d)?)?,
            c: self
                .c
                .checked_mul(rhs.a)?
                .checked_add(self.d.checked_mul(rhs.c)?)?,
            d: self
                .c
                .checked_mul(rhs.b)?
                .checked_add(self.d.checked_mul(rhs.d)?)?,
        })
    }

    pub fn entries(&self) -> [FieldElement; 4] {
        [self.a, self.b, self.c, self.d]
    }

    /// Base-q packing of the four entry indices, `a` most significant.
    pub fn key(&self) -> u32 {
        let q = self.a.field_order();
        self.entries().iter().fold(0, |acc, x| acc * q + x.index())
    }

    /// Lex-min of `{m, −m}`.
    pub fn canonical(&self) -> Mat2 {
        let neg = -*self;
        if neg.key() < self.key() {
            neg
        } else {
            *self
        }
    }
}

impl Mul for Mat2 {
    type Output = Mat2;

    fn mul(self, rhs: Mat2) -> Mat2 {
        self.checked_mul(&rhs).expect("mixed-field operands")
    }
}

impl Neg for Mat2 {
    type Output = Mat2;

    fn neg(self) -> Mat2 {
        Mat2 {
            a: -self.a,
            b: -self.b,
            c: -self.c,
            d: -self.d,
        }
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} {}; {} {}]", self.a, self.b, self.c, self.d)
    }
}

impl fmt::Debug for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@GF({})", self, self.a.field_order())
    }
}

/// An element of PSL(2,q): a determinant-1 matrix in ±-canonical form.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct PslElement(Mat2);

impl PslElement {
    pub fn new(m: &Mat2) -> Result<PslElement, PslError> {
        let det = m.det();
        if !det.is_one() {
            return Err(PslError::NotUnimodular(det));
        }
        Ok(PslElement(m.canonical()))
    }

    pub fn rep(&self) -> &Mat2 {
        &self.0
    }
}

impl Mul for PslElement {
    type Output = PslElement;

    fn mul(self, rhs: PslElement) -> PslElement {
        PslElement((self.0 * rhs.0).canonical())
    }
}

/// The generator families for SL(2,q) / PSL(2,q).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Family {
    /// `[1 1; 0 1]`, `[1 0; λ 1]`: SL(2,q) for odd q ≠ 9 and q = 2.
    Dickson,
    /// `B = [λ 0; 0 λ⁻¹]`, `C = [0 1; −1 λ]`: PSL(2,q) for q > 2.
    AlbertThompson,
    /// `[1 0; 1 1]`, `[0 1; −1 0]`: PSL(2,p) for p prime.
    CoxeterMoser,
    /// `D1 = [1 1; 1 0]`, `D2 = [λ 0; 0 λ⁻¹]`: SL(2,2^r) for r > 1.
    Even,
}

impl Family {
    pub const ALL: [Family; 4] = [
        Family::Dickson,
        Family::AlbertThompson,
        Family::CoxeterMoser,
        Family::Even,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Dickson => "dickson",
            Family::AlbertThompson => "albert-thompson",
            Family::CoxeterMoser => "coxeter-moser",
            Family::Even => "even",
        }
    }

    /// Whether the family targets PSL (true) or SL (false).
    pub fn projective(self) -> bool {
        matches!(self, Family::AlbertThompson | Family::CoxeterMoser)
    }

    pub fn generators(self, field: &Field) -> Result<(Mat2, Mat2), PslError> {
        self.generators_with(field, field.primitive_element())
    }

    pub fn generators_with(
        self,
        field: &Field,
        lambda: FieldElement,
    ) -> Result<(Mat2, Mat2), PslError> {
        match self {
            Family::Dickson => dickson_gens_with(field, lambda),
            Family::AlbertThompson => albert_thompson_gens_with(field, lambda),
            Family::CoxeterMoser => coxeter_moser_gens(field),
            Family::Even => sl2_even_gens_with(field, lambda),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Family, String> {
        Family::ALL
            .into_iter()
            .find(|fam| fam.name() == s)
            .ok_or_else(|| format!("unknown family {s:?}"))
    }
}

fn check_lambda(field: &Field, lambda: FieldElement) -> Result<FieldElement, PslError> {
    if lambda.field_order() != field.order() {
        return Err(GfError::MixedFields(field.order(), lambda.field_order()).into());
    }
    if !lambda.is_primitive() {
        return Err(PslError::NotPrimitive(lambda));
    }
    Ok(lambda)
}

fn diagonal(field: &Field, lambda: FieldElement) -> Mat2 {
    Mat2 {
        a: lambda,
        b: field.zero(),
        c: field.zero(),
        d: lambda.inv().expect("primitive is nonzero"),
    }
}

pub fn dickson_gens(field: &Field) -> Result<(Mat2, Mat2), PslError> {
    dickson_gens_with(field, field.primitive_element())
}

pub fn dickson_gens_with(field: &Field, lambda: FieldElement) -> Result<(Mat2, Mat2), PslError> {
    let q = field.order();
    if q == 9 || (q.is_multiple_of(2) && q != 2) {
        return Err(PslError::Hypothesis {
            family: Family::Dickson,
            hypothesis: "q != 9 an odd prime power, or q = 2",
            q,
        });
    }
    let lambda = check_lambda(field, lambda)?;
    let lower = Mat2 {
        a: field.one(),
        b: field.zero(),
        c: lambda,
        d: field.one(),
    };
    Ok((Mat2::from_ints(field, [1, 1, 0, 1]), lower))
}

pub fn albert_thompson_gens(field: &Field) -> Result<(Mat2, Mat2), PslError> {
    albert_thompson_gens_with(field, field.primitive_element())
}

pub fn albert_thompson_gens_with(
    field: &Field,
    lambda: FieldElement,
) -> Result<(Mat2, Mat2), PslError> {
    if field.order() <= 2 {
        return Err(PslError::Hypothesis {
            family: Family::AlbertThompson,
            hypothesis: "q > 2",
            q: field.order(),
        });
    }
    let lambda = check_lambda(field, lambda)?;
    let c = Mat2 {
        a: field.zero(),
        b: field.one(),
        c: -field.one(),
        d: lambda,
    };
    Ok((diagonal(field, lambda), c))
}

pub fn coxeter_moser_gens(field: &Field) -> Result<(Mat2, Mat2), PslError> {
    if !is_prime(field.order()) {
        return Err(PslError::Hypothesis {
            family: Family::CoxeterMoser,
            hypothesis: "q prime",
            q: field.order(),
        });
    }
    Ok((
        Mat2::from_ints(field, [1, 0, 1, 1]),
        Mat2::from_ints(field, [0, 1, -1, 0]),
    ))
}

pub fn sl2_even_gens(field: &Field) -> Result<(Mat2, Mat2), PslError> {
    sl2_even_gens_with(field, field.primitive_element())
}

pub fn sl2_even_gens_with(field: &Field, lambda: FieldElement) -> Result<(Mat2, Mat2), PslError> {
    if field.characteristic() != 2 || field.degree() < 2 {
        return Err(PslError::Hypothesis {
            family: Family::Even,
            hypothesis: "q = 2^r with r > 1",
            q: field.order(),
        });
    }
    let lambda = check_lambda(field, lambda)?;
    Ok((
        Mat2::from_ints(field, [1, 1, 1, 0]),
        diagonal(field, lambda),
    ))
}

/// Closure of `gens` under multiplication, starting from the identity.
///
/// In a finite group the monoid generated is already the group. With
/// `projective` set the closure runs over ±-canonical classes.
pub fn group_closure(gens: &[Mat2], projective: bool) -> Result<Vec<Mat2>, PslError> {
    let first = gens.first().ok_or(PslError::NoGenerators)?;
    let field = first.field();
    for g in gens {
        let det = g.det();
        if det.field_order() != field.order() {
            return Err(GfError::MixedFields(field.order(), det.field_order()).into());
        }
        if !det.is_one() {
            return Err(PslError::NotUnimodular(det));
        }
    }
    let norm = |m: Mat2| if projective { m.canonical() } else { m };
    let gens: Vec<Mat2> = gens.iter().map(|&g| norm(g)).collect();

    let start = norm(Mat2::identity(field));
    let mut seen = HashSet::from([start.key()]);
    let mut found = vec![start];
    let mut next = 0;
    while next < found.len() {
        let x = found[next];
        next += 1;
        for g in &gens {
            let y = norm(*g * x);
            if seen.insert(y.key()) {
                found.push(y);
            }
        }
    }
    Ok(found)
}

/// All of SL(2,q), by choosing `(a, b, c)` and solving for `d`.
pub fn enumerate_sl2(field: &Field) -> Vec<Mat2> {
    let mut out = Vec::new();
    for a in field.elements() {
        for b in field.elements() {
            for c in field.elements() {
                if let Ok(a_inv) = a.inv() {
                    let d = (field.one() + b * c) * a_inv;
                    out.push(Mat2 { a, b, c, d });
                } else if (b * c + field.one()).is_zero() {
                    out.extend(field.elements().map(|d| Mat2 { a, b, c, d }));
                }
            }
        }
    }
    out
}

/// PSL(2,q) as canonical representatives, in first-seen enumeration order.
pub fn enumerate_psl2(field: &Field) -> Vec<PslElement> {
    let mut seen = HashSet::new();
    enumerate_sl2(field)
        .into_iter()
        .map(|m| PslElement(m.canonical()))
        .filter(|p| seen.insert(p.0.key()))
        .collect()
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PslVerdict {
    Generates,
    ProperSubgroup,
}

impl fmt::Display for PslVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PslVerdict::Generates => "GENERATES",
            PslVerdict::ProperSubgroup => "PROPER-SUBGROUP",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PslReport {
    pub family: Family,
    pub q: u32,
    pub closure: usize,
    pub expected: usize,
    pub verdict: PslVerdict,
}

impl fmt::Display for PslReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "family={} q={} closure={} expected={} verdict={}",
            self.family, self.q, self.closure, self.expected, self.verdict
        )
    }
}

/// Closes a family's generators and compares against the enumerated group.
pub fn verify_family(family: Family, field: &Field) -> Result<PslReport, PslError> {
    let (g, h) = family.generators(field)?;
    let projective = family.projective();
    let closure = group_closure(&[g, h], projective)?.len();
    let expected = if projective {
        enumerate_psl2(field).len()
    } else {
        enumerate_sl2(field).len()
    };
    let verdict = if closure == expected {
        PslVerdict::Generates
    } else {
        PslVerdict::ProperSubgroup
    };
    Ok(PslReport {
        family,
        q: field.order(),
        closure,
        expected,
        verdict,
    })
}
