//! Catalog of generating sets for M*(q) and the generator-set file format.
//!
//! File format: a header line `q=<q> name=<name>`, then one element per line
//! in `[a|x1,x2,x3|y1,y2,y3|b]` notation. `#` starts a comment anywhere.

mod identities;

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::gf::{is_prime, Field, FieldElement, GfError};
use crate::paige::{embed_phi, subgroup_gi, LoopError, PaigeElement};
use crate::psl2::{albert_thompson_gens_with, sl2_even_gens_with, Family, PslError};
use crate::zorn::{Vec3, ZornMatrix};

pub use identities::{verify_proof_identities, IdentityCheck, IdentityReport};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenSetError {
    #[error(transparent)]
    Field(#[from] GfError),
    #[error(transparent)]
    Loop(#[from] LoopError),
    #[error(transparent)]
    Psl(#[from] PslError),
    #[error("set {set} needs {hypothesis}; got q = {q}")]
    Hypothesis {
        set: SetName,
        hypothesis: &'static str,
        q: u32,
    },
    #[error("generator file: {0}")]
    Format(String),
}

/// Names of the catalogued generating sets.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum SetName {
    TheoremMain,
    Prime,
    DicksonVariant,
    Even,
    Paige,
    G1G2,
    G1G2G3,
}

impl SetName {
    pub const ALL: [SetName; 7] = [
        SetName::TheoremMain,
        SetName::Prime,
        SetName::DicksonVariant,
        SetName::Even,
        SetName::Paige,
        SetName::G1G2,
        SetName::G1G2G3,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SetName::TheoremMain => "theorem-main",
            SetName::Prime => "prime",
            SetName::DicksonVariant => "dickson-variant",
            SetName::Even => "even",
            SetName::Paige => "paige",
            SetName::G1G2 => "g1g2",
            SetName::G1G2G3 => "g1g2g3",
        }
    }

    fn description(self) -> &'static str {
        match self {
            SetName::TheoremMain => {
                "phi1(C), phi2(C), B with B = diag(lambda, 1/lambda), C = [0 1; -1 lambda]"
            }
            SetName::Prime => "U1 = [1|e1|0|1], U2 = [1|e2|0|1], X = [0|e3|-e3|1]",
            SetName::DicksonVariant => "[1|e1|0|1], [1|e2|0|1], [0|lambda e3|-1/lambda e3|1]",
            SetName::Even => {
                "phi1(D1), phi2(D1), D2 with D1 = [1 1; 1 0], D2 = diag(lambda, 1/lambda)"
            }
            SetName::Paige => "[1|0|v|1] and [1|v|0|1] for every nonzero v",
            SetName::G1G2 => "union of the PSL(2,q) images G1 and G2",
            SetName::G1G2G3 => "union of the PSL(2,q) images G1, G2 and G3",
        }
    }

    /// Whether the set takes a primitive element.
    pub fn uses_lambda(self) -> bool {
        matches!(
            self,
            SetName::TheoremMain | SetName::DicksonVariant | SetName::Even
        )
    }
}

impl fmt::Display for SetName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SetName {
    type Err = String;

    fn from_str(s: &str) -> Result<SetName, String> {
        SetName::ALL
            .into_iter()
            .find(|n| n.as_str() == s)
            .ok_or_else(|| format!("unknown generator set {s:?}"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenSet {
    pub name: String,
    pub q: u32,
    pub elements: Vec<PaigeElement>,
    pub description: String,
}

impl GenSet {
    fn new(name: SetName, field: &Field, elements: Vec<PaigeElement>) -> GenSet {
        let mut seen = HashSet::new();
        let elements = elements.into_iter().filter(|x| seen.insert(*x)).collect();
        GenSet {
            name: name.as_str().to_string(),
            q: field.order(),
            elements,
            description: name.description().to_string(),
        }
    }

    /// Builds a catalogued set, with the canonical primitive element unless
    /// `lambda` overrides it.
    pub fn build(
        name: SetName,
        field: &Field,
        lambda: Option<FieldElement>,
    ) -> Result<GenSet, GenSetError> {
        let lambda = match lambda {
            Some(l) => check_lambda(field, l)?,
            None => field.primitive_element(),
        };
        match name {
            SetName::TheoremMain => theorem_main_with(field, lambda),
            SetName::Prime => prime(field),
            SetName::DicksonVariant => dickson_variant_with(field, lambda),
            SetName::Even => even_with(field, lambda),
            SetName::Paige => paige(field),
            SetName::G1G2 => g1g2(field),
            SetName::G1G2G3 => g1g2g3(field),
        }
    }

    pub fn field(&self) -> &'static Field {
        Field::with_order(self.q).expect("sets are only built over valid fields")
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Generator-set file text.
    pub fn to_file_string(&self) -> String {
        let mut out = format!("q={} name={}\n# {}\n", self.q, self.name, self.description);
        for x in &self.elements {
            out.push_str(&x.to_string());
            out.push('\n');
        }
        out
    }

    pub fn parse_file(text: &str) -> Result<GenSet, GenSetError> {
        let mut lines = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty());
        let header = lines
            .next()
            .ok_or_else(|| GenSetError::Format("missing header".into()))?;
        let mut q = None;
        let mut name = None;
        for field in header.split_whitespace() {
            match field.split_once('=') {
                Some(("q", v)) => q = v.parse::<u32>().ok(),
                Some(("name", v)) => name = Some(v.to_string()),
                _ => {
                    return Err(GenSetError::Format(format!(
                        "unexpected header field {field:?}"
                    )))
                }
            }
        }
        let q = q.ok_or_else(|| GenSetError::Format("header lacks q=<q>".into()))?;
        let name = name.ok_or_else(|| GenSetError::Format("header lacks name=<name>".into()))?;
        let field = Field::with_order(q)?;
        let elements = lines
            .map(|l| PaigeElement::parse(l, field))
            .collect::<Result<Vec<_>, _>>()?;
        if elements.is_empty() {
            return Err(GenSetError::Format("no elements".into()));
        }
        let distinct: HashSet<_> = elements.iter().collect();
        if distinct.len() != elements.len() {
            return Err(GenSetError::Format("duplicate elements".into()));
        }
        Ok(GenSet {
            name,
            q,
            elements,
            description: "file".into(),
        })
    }
}

fn check_lambda(field: &Field, lambda: FieldElement) -> Result<FieldElement, GenSetError> {
    if lambda.field_order() != field.order() {
        return Err(GfError::MixedFields(field.order(), lambda.field_order()).into());
    }
    if !lambda.is_primitive() {
        return Err(PslError::NotPrimitive(lambda).into());
    }
    Ok(lambda)
}

fn e(field: &Field, i: usize) -> Vec3 {
    Vec3::basis(field, i)
}

/// `[1 | v | 0 | 1]`.
pub(crate) fn upper(v: Vec3) -> ZornMatrix {
    let f = v.field();
    ZornMatrix {
        a: f.one(),
        alpha: v,
        beta: Vec3::zero(f),
        b: f.one(),
    }
}

/// `[1 | 0 | v | 1]`.
pub(crate) fn lower(v: Vec3) -> ZornMatrix {
    let f = v.field();
    ZornMatrix {
        a: f.one(),
        alpha: Vec3::zero(f),
        beta: v,
        b: f.one(),
    }
}

/// `[0 | λe3 | −λ⁻¹e3 | 1]`.
pub(crate) fn twisted_x(field: &Field, lambda: FieldElement) -> ZornMatrix {
    let inv = lambda.inv().expect("primitive is nonzero");
    ZornMatrix {
        a: field.zero(),
        alpha: e(field, 3).scale(lambda),
        beta: -e(field, 3).scale(inv),
        b: field.one(),
    }
}

fn unit(m: &ZornMatrix) -> PaigeElement {
    PaigeElement::canonical(m).expect("catalog matrices have determinant 1")
}

pub fn theorem_main(field: &Field) -> Result<GenSet, GenSetError> {
    theorem_main_with(field, field.primitive_element())
}

/// `{φ1(C), φ2(C), B}` for q > 2.
pub fn theorem_main_with(field: &Field, lambda: FieldElement) -> Result<GenSet, GenSetError> {
    if field.order() <= 2 {
        return Err(GenSetError::Hypothesis {
            set: SetName::TheoremMain,
            hypothesis: "q > 2",
            q: field.order(),
        });
    }
    let (b, c) = albert_thompson_gens_with(field, lambda)?;
    let elements = vec![embed_phi(1, &c)?, embed_phi(2, &c)?, embed_phi(1, &b)?];
    Ok(GenSet::new(SetName::TheoremMain, field, elements))
}

/// `{U1, U2, X}` for prime q.
pub fn prime(field: &Field) -> Result<GenSet, GenSetError> {
    if !is_prime(field.order()) {
        return Err(GenSetError::Hypothesis {
            set: SetName::Prime,
            hypothesis: "q prime",
            q: field.order(),
        });
    }
    let x = twisted_x(field, field.one());
    let elements = vec![
        unit(&upper(e(field, 1))),
        unit(&upper(e(field, 2))),
        unit(&x),
    ];
    Ok(GenSet::new(SetName::Prime, field, elements))
}

pub fn dickson_variant(field: &Field) -> Result<GenSet, GenSetError> {
    dickson_variant_with(field, field.primitive_element())
}

pub fn dickson_variant_with(field: &Field, lambda: FieldElement) -> Result<GenSet, GenSetError> {
    let q = field.order();
    if q == 9 || (q.is_multiple_of(2) && q != 2) {
        return Err(GenSetError::Hypothesis {
            set: SetName::DicksonVariant,
            hypothesis: "q != 9 an odd prime power, or q = 2",
            q,
        });
    }
    let lambda = check_lambda(field, lambda)?;
    let elements = vec![
        unit(&upper(e(field, 1))),
        unit(&upper(e(field, 2))),
        unit(&twisted_x(field, lambda)),
    ];
    Ok(GenSet::new(SetName::DicksonVariant, field, elements))
}

pub fn even(field: &Field) -> Result<GenSet, GenSetError> {
    even_with(field, field.primitive_element())
}

/// `{φ1(D1), φ2(D1), D2}` for q = 2^r, r > 1.
pub fn even_with(field: &Field, lambda: FieldElement) -> Result<GenSet, GenSetError> {
    let (d1, d2) = sl2_even_gens_with(field, lambda).map_err(|err| match err {
        PslError::Hypothesis {
            hypothesis,
            q,
            family: Family::Even,
        } => GenSetError::Hypothesis {
            set: SetName::Even,
            hypothesis,
            q,
        },
        other => other.into(),
    })?;
    let elements = vec![embed_phi(1, &d1)?, embed_phi(2, &d1)?, embed_phi(1, &d2)?];
    Ok(GenSet::new(SetName::Even, field, elements))
}

/// All `[1|0|v|1]` then all `[1|v|0|1]`, v ≠ 0 in index order.
pub fn paige(field: &Field) -> Result<GenSet, GenSetError> {
    let vectors: Vec<Vec3> = field
        .elements()
        .flat_map(|x| {
            field
                .elements()
                .flat_map(move |y| field.elements().map(move |z| Vec3([x, y, z])))
        })
        .filter(|v| !v.is_zero())
        .collect();
    let elements = vectors
        .iter()
        .map(|&v| unit(&lower(v)))
        .chain(vectors.iter().map(|&v| unit(&upper(v))))
        .collect();
    Ok(GenSet::new(SetName::Paige, field, elements))
}

pub fn g1g2(field: &Field) -> Result<GenSet, GenSetError> {
    let elements = [1, 2]
        .into_iter()
        .map(|i| subgroup_gi(i, field))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(GenSet::new(SetName::G1G2, field, elements.concat()))
}

pub fn g1g2g3(field: &Field) -> Result<GenSet, GenSetError> {
    let elements = [1, 2, 3]
        .into_iter()
        .map(|i| subgroup_gi(i, field))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(GenSet::new(SetName::G1G2G3, field, elements.concat()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(q: u32) -> &'static Field {
        Field::with_order(q).unwrap()
    }

    fn el(s: &str, q: u32) -> PaigeElement {
        PaigeElement::parse(s, gf(q)).unwrap()
    }

    #[test]
    fn theorem_main_examples() {
        let s = theorem_main(gf(3)).unwrap();
        assert_eq!(s.len(), 3);
        // λ = 2 in GF(3): φ1(C) = [0|e1|−e1|λ]
        assert_eq!(s.elements[0], el("[0|1,0,0|2,0,0|2]", 3));
        assert_eq!(s.elements[2], el("[2|0,0,0|0,0,0|2]", 3));
        assert_eq!(theorem_main(gf(4)).unwrap().len(), 3);
        assert!(matches!(
            theorem_main(gf(2)),
            Err(GenSetError::Hypothesis { .. })
        ));
    }

    #[test]
    fn prime_examples() {
        let s = prime(gf(2)).unwrap();
        let expected = [
            "[1|1,0,0|0,0,0|1]",
            "[1|0,1,0|0,0,0|1]",
            "[0|0,0,1|0,0,1|1]",
        ];
        assert_eq!(s.elements, expected.map(|t| el(t, 2)).to_vec());
        let s5 = prime(gf(5)).unwrap();
        assert_eq!(s5.elements[2], el("[0|0,0,1|0,0,4|1]", 5));
        assert!(prime(gf(4)).is_err());
    }

    #[test]
    fn dickson_variant_examples() {
        assert_eq!(
            dickson_variant(gf(2)).unwrap().elements[2],
            el("[0|0,0,1|0,0,1|1]", 2)
        );
        // λ = 3 in GF(7), λ⁻¹ = 5, −λ⁻¹ = 2
        assert_eq!(
            dickson_variant(gf(7)).unwrap().elements[2],
            el("[0|0,0,3|0,0,2|1]", 7)
        );
        assert!(dickson_variant(gf(9)).is_err());
        assert!(dickson_variant(gf(4)).is_err());
    }

    #[test]
    fn even_examples() {
        let f = gf(4);
        let s = even(f).unwrap();
        assert_eq!(s.len(), 3);
        let lambda = f.primitive_element();
        let d2 = ZornMatrix {
            a: lambda,
            alpha: Vec3::zero(f),
            beta: Vec3::zero(f),
            b: lambda.inv().unwrap(),
        };
        assert_eq!(s.elements[2], PaigeElement::canonical(&d2).unwrap());
        assert_eq!(even(gf(8)).unwrap().len(), 3);
        assert!(matches!(
            even(gf(2)),
            Err(GenSetError::Hypothesis {
                set: SetName::Even,
                ..
            })
        ));
    }

    #[test]
    fn paige_sizes() {
        assert_eq!(paige(gf(2)).unwrap().len(), 14);
        assert_eq!(paige(gf(3)).unwrap().len(), 52);
        assert!(paige(gf(3))
            .unwrap()
            .elements
            .iter()
            .all(|x| x.rep().is_unit()));
    }

    #[test]
    fn subgroup_unions() {
        let e = PaigeElement::identity(gf(2));
        let s12 = g1g2(gf(2)).unwrap();
        assert_eq!(s12.len(), 11);
        assert!(s12.elements.contains(&e));
        let s123 = g1g2g3(gf(2)).unwrap();
        assert_eq!(s123.len(), 16);
        assert!(s123.elements.contains(&e));
    }

    #[test]
    fn lambda_override() {
        let f = gf(7);
        // 5 is the other primitive element of GF(7)
        let s = GenSet::build(SetName::DicksonVariant, f, Some(f.from_int(5))).unwrap();
        assert_eq!(s.elements[2], el("[0|0,0,5|0,0,4|1]", 7));
        assert!(GenSet::build(SetName::DicksonVariant, f, Some(f.from_int(2))).is_err());
    }

    #[test]
    fn catalog_is_deterministic_and_valid() {
        for q in [2, 3, 4, 5] {
            let f = gf(q);
            for name in SetName::ALL {
                let Ok(a) = GenSet::build(name, f, None) else {
                    continue;
                };
                let b = GenSet::build(name, f, None).unwrap();
                assert_eq!(a, b);
                assert!(!a.is_empty());
                let distinct: HashSet<_> = a.elements.iter().collect();
                assert_eq!(distinct.len(), a.len());
                for x in &a.elements {
                    assert!(x.rep().is_unit());
                    assert_eq!(PaigeElement::canonical(x.rep()).unwrap().rep(), x.rep());
                }
            }
        }
    }

    #[test]
    fn file_round_trip() {
        let s = theorem_main(gf(5)).unwrap();
        let text = s.to_file_string();
        assert!(text.starts_with("q=5 name=theorem-main\n"));
        let back = GenSet::parse_file(&text).unwrap();
        assert_eq!(back.elements, s.elements);
        assert_eq!(back.name, "theorem-main");
    }

    #[test]
    fn file_errors() {
        assert!(GenSet::parse_file("").is_err());
        assert!(GenSet::parse_file("q=5\n[1|0,0,0|0,0,0|1]").is_err());
        assert!(GenSet::parse_file("q=5 name=x\n").is_err());
        assert!(GenSet::parse_file("q=5 name=x\n[1|1,0,0|1,0,0|1]").is_err());
        assert!(GenSet::parse_file("q=5 name=x\n[1|0,0,0|0,0,0|1]\n[4|0,0,0|0,0,0|4]").is_err());
        let ok =
            GenSet::parse_file("# leading comment\nq=2 name=x  # trailing\n[1|0,0,0|0,0,0|1]\n")
                .unwrap();
        assert_eq!(ok.len(), 1);
    }
}
