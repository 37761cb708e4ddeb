//! The displayed equations behind the generating-set arguments, evaluated
//! both on Zorn matrices (signs kept) and in the loop (signs absorbed).
//!
//! Products are nonassociative, so every expression fixes its bracketing:
//! `·` is the outermost split and the remaining adjacencies associate to the
//! left. The two λ-identities are also checked under every bracketing.

use std::fmt;

use crate::gf::{Field, FieldElement};
use crate::paige::PaigeElement;
use crate::psl2::Mat2;
use crate::zorn::{Vec3, ZornMatrix};

use super::{check_lambda, lower, twisted_x, upper, GenSetError};

/// Arithmetic at one level of the comparison.
trait Level: Copy + PartialEq {
    fn lift(m: ZornMatrix) -> Self;
    fn times(self, rhs: Self) -> Self;
    fn negate(self) -> Self;
    fn invert(self) -> Self;
}

impl Level for ZornMatrix {
    fn lift(m: ZornMatrix) -> Self {
        m
    }

    fn times(self, rhs: Self) -> Self {
        self * rhs
    }

    fn negate(self) -> Self {
        -self
    }

    fn invert(self) -> Self {
        self.inverse()
            .expect("identity operands have determinant 1")
    }
}

impl Level for PaigeElement {
    fn lift(m: ZornMatrix) -> Self {
        PaigeElement::canonical(&m).expect("identity operands have determinant 1")
    }

    fn times(self, rhs: Self) -> Self {
        self * rhs
    }

    fn negate(self) -> Self {
        self
    }

    fn invert(self) -> Self {
        self.inverse()
    }
}

/// Outcome of one displayed equation over all its parameter values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityCheck {
    pub id: char,
    pub description: &'static str,
    pub cases: usize,
    /// Equality of the matrices themselves, signs included.
    pub matrix_level: bool,
    /// Equality after identifying M with −M (or ±I classes for 2×2 checks).
    pub loop_level: bool,
}

impl IdentityCheck {
    pub fn passed(&self) -> bool {
        self.loop_level
    }
}

impl fmt::Display for IdentityCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let word = |ok: bool| if ok { "PASS" } else { "FAIL" };
        write!(
            f,
            "identity={} cases={} matrix={} loop={} verdict={}",
            self.id,
            self.cases,
            word(self.matrix_level),
            word(self.loop_level),
            word(self.passed())
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityReport {
    pub q: u32,
    pub lambda: u32,
    pub checks: Vec<IdentityCheck>,
}

impl IdentityReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(IdentityCheck::passed)
    }
}

impl fmt::Display for IdentityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "q={} lambda={}", self.q, self.lambda)?;
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        write!(
            f,
            "verdict={}",
            if self.all_passed() { "PASS" } else { "FAIL" }
        )
    }
}

/// `(U(a e1) U(b e2)) · L(−ab e3) = U((a,b,0))`.
fn k2<L: Level>(f: &Field, a: FieldElement, b: FieldElement) -> bool {
    let ua = L::lift(upper(Vec3::basis(f, 1).scale(a)));
    let ub = L::lift(upper(Vec3::basis(f, 2).scale(b)));
    let l = L::lift(lower(Vec3::basis(f, 3).scale(-(a * b))));
    let rhs = L::lift(upper(Vec3([a, b, f.zero()])));
    ua.times(ub).times(l) == rhs
}

/// `(U((a,b,0)) U(c e3)) · L((−bc, ac, 0)) = U((a,b,c))`.
fn k3<L: Level>(f: &Field, a: FieldElement, b: FieldElement, c: FieldElement) -> bool {
    let u_ab = L::lift(upper(Vec3([a, b, f.zero()])));
    let u_c = L::lift(upper(Vec3::basis(f, 3).scale(c)));
    let l = L::lift(lower(Vec3([-(b * c), a * c, f.zero()])));
    let rhs = L::lift(upper(Vec3([a, b, c])));
    u_ab.times(u_c).times(l) == rhs
}

fn zm(a: FieldElement, alpha: Vec3, beta: Vec3, b: FieldElement) -> ZornMatrix {
    ZornMatrix { a, alpha, beta, b }
}

/// The two equations placing G3 inside the subloop generated by G1 ∪ G2.
fn g3_from_g1g2<L: Level>(f: &Field, lambda: FieldElement) -> bool {
    let (zero, one) = (f.zero(), f.one());
    let (e1, e2, e3) = (Vec3::basis(f, 1), Vec3::basis(f, 2), Vec3::basis(f, 3));
    let inv = lambda.inv().expect("primitive is nonzero");

    let p = L::lift(zm(zero, e2, -e2, zero));
    let r = L::lift(zm(one, e1.scale(lambda), -e1.scale(inv), zero));
    let s = L::lift(zm(one, e2, -e2, zero));
    let first = L::lift(lower(e3.scale(lambda))) == p.times(r).times(s.times(r)).negate();

    let v1 = L::lift(zm(zero, e1, -e1, zero));
    let w = L::lift(zm(zero, -e2, e2, zero));
    let second = L::lift(zm(zero, e3, -e3, zero)) == v1.times(w);
    first && second
}

/// `V2 = −(XU1 · XU2) · X⁻¹U1` and `V1 = −U1U2 · (V2 · U1X)`.
fn prime_case<L: Level>(f: &Field) -> bool {
    let (zero, one) = (f.zero(), f.one());
    let (e1, e2) = (Vec3::basis(f, 1), Vec3::basis(f, 2));
    let u1 = L::lift(upper(e1));
    let u2 = L::lift(upper(e2));
    let x = L::lift(twisted_x(f, one));
    let v1 = L::lift(zm(zero, e1, -e1, zero));
    let v2 = L::lift(zm(zero, e2, -e2, zero));

    let v2_rhs = x
        .times(u1)
        .times(x.times(u2))
        .times(x.invert().times(u1))
        .negate();
    let v1_rhs = u1.times(u2).times(v2.times(u1.times(x))).negate();
    v2 == v2_rhs && v1 == v1_rhs
}

/// Values of every full bracketing of `factors`, in a fixed order.
fn all_bracketings<L: Level>(factors: &[L]) -> Vec<L> {
    if factors.len() == 1 {
        return vec![factors[0]];
    }
    let mut out = Vec::new();
    for split in 1..factors.len() {
        let left = all_bracketings(&factors[..split]);
        let right = all_bracketings(&factors[split..]);
        for l in &left {
            for r in &right {
                out.push(l.times(*r));
            }
        }
    }
    out
}

/// `L(λe1) = −Y² U2 Y` and `L(λe2)⁻¹ = −Y² U1 Y`, `Y = [0|λe3|−λ⁻¹e3|1]`,
/// with the word `Y Y U Y` evaluated under all five bracketings.
fn lambda_identities<L: Level>(f: &Field, lambda: FieldElement) -> bool {
    let y = L::lift(twisted_x(f, lambda));
    let u1 = L::lift(upper(Vec3::basis(f, 1)));
    let u2 = L::lift(upper(Vec3::basis(f, 2)));
    let l1 = L::lift(lower(Vec3::basis(f, 1).scale(lambda)));
    let l2_inv = L::lift(lower(Vec3::basis(f, 2).scale(lambda))).invert();
    let holds = |lhs: L, u: L| {
        all_bracketings(&[y, y, u, y])
            .into_iter()
            .all(|v| v.negate() == lhs)
    };
    holds(l1, u2) && holds(l2_inv, u1)
}

fn embedded_equal(x: &Mat2, y: &Mat2) -> bool {
    (1..=3).all(|i| {
        let phi = |m: &Mat2| crate::paige::embed_phi(i, m).expect("unimodular");
        phi(x) == phi(y)
    })
}

/// Runs every identity over GF(q); `lambda` defaults to the canonical
/// primitive element.
pub fn verify_proof_identities(
    field: &Field,
    lambda: Option<FieldElement>,
) -> Result<IdentityReport, GenSetError> {
    let lambda = match lambda {
        Some(l) => check_lambda(field, l)?,
        None => field.primitive_element(),
    };
    let units: Vec<FieldElement> = field.nonzero_elements().collect();
    let mut checks = Vec::new();

    let pairs: Vec<(FieldElement, FieldElement)> = units
        .iter()
        .flat_map(|&a| units.iter().map(move |&b| (a, b)))
        .collect();
    checks.push(IdentityCheck {
        id: 'a',
        description: "two nonzero entries from U(a e1), U(b e2), L(-ab e3)",
        cases: pairs.len(),
        matrix_level: pairs.iter().all(|&(a, b)| k2::<ZornMatrix>(field, a, b)),
        loop_level: pairs.iter().all(|&(a, b)| k2::<PaigeElement>(field, a, b)),
    });

    let triples: Vec<(FieldElement, FieldElement, FieldElement)> = pairs
        .iter()
        .flat_map(|&(a, b)| units.iter().map(move |&c| (a, b, c)))
        .collect();
    checks.push(IdentityCheck {
        id: 'b',
        description: "three nonzero entries from U((a,b,0)), U(c e3), L((-bc,ac,0))",
        cases: triples.len(),
        matrix_level: triples
            .iter()
            .all(|&(a, b, c)| k3::<ZornMatrix>(field, a, b, c)),
        loop_level: triples
            .iter()
            .all(|&(a, b, c)| k3::<PaigeElement>(field, a, b, c)),
    });

    checks.push(IdentityCheck {
        id: 'c',
        description: "G3 elements as products of G1 and G2 elements",
        cases: 2,
        matrix_level: g3_from_g1g2::<ZornMatrix>(field, lambda),
        loop_level: g3_from_g1g2::<PaigeElement>(field, lambda),
    });

    let lower_lambda = Mat2 {
        a: field.one(),
        b: field.zero(),
        c: lambda,
        d: field.one(),
    };
    let v = Mat2::from_ints(field, [0, 1, -1, 0]);
    let c = Mat2 {
        a: field.zero(),
        b: field.one(),
        c: -field.one(),
        d: lambda,
    };
    let d_lhs = lower_lambda * v;
    checks.push(IdentityCheck {
        id: 'd',
        description: "[1 0; lambda 1][0 1; -1 0] = C",
        cases: 1,
        matrix_level: d_lhs == c,
        loop_level: d_lhs.canonical() == c.canonical() && embedded_equal(&d_lhs, &c),
    });

    let u = Mat2::from_ints(field, [1, 1, 0, 1]);
    let conj = v * u.inverse().expect("unimodular") * v.inverse().expect("unimodular");
    let target = Mat2::from_ints(field, [1, 0, 1, 1]);
    checks.push(IdentityCheck {
        id: 'e',
        description: "[1 0; 1 1] = V U^-1 V^-1",
        cases: 1,
        matrix_level: conj == target,
        loop_level: conj.canonical() == target.canonical() && embedded_equal(&conj, &target),
    });

    checks.push(IdentityCheck {
        id: 'f',
        description: "V2 and V1 from U1, U2, X",
        cases: 2,
        matrix_level: prime_case::<ZornMatrix>(field),
        loop_level: prime_case::<PaigeElement>(field),
    });

    checks.push(IdentityCheck {
        id: 'g',
        description: "L(lambda e1) and L(lambda e2)^-1 from Y^2 U Y, all bracketings",
        cases: 10,
        matrix_level: lambda_identities::<ZornMatrix>(field, lambda),
        loop_level: lambda_identities::<PaigeElement>(field, lambda),
    });

    Ok(IdentityReport {
        q: field.order(),
        lambda: lambda.index(),
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(q: u32) -> &'static Field {
        Field::with_order(q).unwrap()
    }

    #[test]
    fn k2_over_gf2_is_the_zorn_example() {
        let f = gf(2);
        assert!(k2::<ZornMatrix>(f, f.one(), f.one()));
    }

    #[test]
    fn bracketings_count_is_catalan() {
        let f = gf(3);
        let x = ZornMatrix::identity(f);
        assert_eq!(all_bracketings(&[x]).len(), 1);
        assert_eq!(all_bracketings(&[x, x, x]).len(), 2);
        assert_eq!(all_bracketings(&[x, x, x, x]).len(), 5);
    }

    #[test]
    fn suite_passes_small_fields() {
        for q in [2, 5] {
            let report = verify_proof_identities(gf(q), None).unwrap();
            assert!(report.all_passed(), "{report}");
        }
    }

    #[test]
    fn loop_level_follows_matrix_level() {
        for q in [2, 3, 4, 5, 7] {
            for c in verify_proof_identities(gf(q), None).unwrap().checks {
                assert!(!c.matrix_level || c.loop_level, "q={q} {c}");
            }
        }
    }

    #[test]
    fn sign_matters_before_identification() {
        // Dropping the leading minus of the first G3 equation breaks it on
        // matrices over odd q but not in the loop.
        let f = gf(5);
        let lambda = f.primitive_element();
        let (zero, one) = (f.zero(), f.one());
        let (e1, e2, e3) = (Vec3::basis(f, 1), Vec3::basis(f, 2), Vec3::basis(f, 3));
        let inv = lambda.inv().unwrap();
        let p = zm(zero, e2, -e2, zero);
        let r = zm(one, e1.scale(lambda), -e1.scale(inv), zero);
        let s = zm(one, e2, -e2, zero);
        let unsigned = (p * r) * (s * r);
        assert_ne!(unsigned, lower(e3.scale(lambda)));
        assert_eq!(
            PaigeElement::canonical(&unsigned).unwrap(),
            PaigeElement::canonical(&lower(e3.scale(lambda))).unwrap()
        );
    }
}
