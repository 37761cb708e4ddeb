//! Algebraic invariants checked against independent oracles: plain integer
//! polynomial arithmetic for the fields, a hand-expanded product over Z/p for
//! Zorn matrices, and exhaustive or seeded sweeps for the loop laws.

use paige_loops::engine::{
    associativity_witness, moufang_check, orbit_identity, subloop_closure, Side, SplitMix64,
    SweepMode,
};
use paige_loops::gensets::{self, SetName};
use paige_loops::paige::{count_loop, enumerate_loop, subgroup_gi};
use paige_loops::{Field, FieldElement, PaigeElement, ZornMatrix};
use proptest::prelude::*;

const ORDERS: [u32; 11] = [2, 3, 4, 5, 7, 8, 9, 11, 16, 25, 27];

fn gf(q: u32) -> &'static Field {
    Field::with_order(q).unwrap()
}

/// Polynomial product modulo the field modulus, coefficients constant term first.
fn poly_mul_oracle(f: &Field, x: &[u32], y: &[u32]) -> Vec<u32> {
    let p = f.characteristic() as u64;
    let r = f.degree() as usize;
    let m = f.modulus();
    let mut prod = vec![0u64; 2 * r];
    for (i, &a) in x.iter().enumerate() {
        for (j, &b) in y.iter().enumerate() {
            prod[i + j] = (prod[i + j] + a as u64 * b as u64) % p;
        }
    }
    for k in (r..2 * r).rev() {
        let c = prod[k];
        if c != 0 {
            for (i, &mi) in m.iter().enumerate().take(r) {
                prod[k - r + i] = (prod[k - r + i] + (p - c) * mi as u64 % p) % p;
            }
            prod[k] = 0;
        }
    }
    let mut out: Vec<u32> = prod[..r].iter().map(|&c| c as u32).collect();
    if r == 1 {
        out.truncate(1);
    }
    out
}

fn pad(mut c: Vec<u32>, r: usize) -> Vec<u32> {
    c.resize(r, 0);
    c
}

#[test]
fn field_multiplication_matches_polynomial_oracle() {
    for q in ORDERS {
        let f = gf(q);
        let r = f.degree() as usize;
        for x in f.elements() {
            for y in f.elements() {
                let want = poly_mul_oracle(f, &pad(x.coeffs(), r), &pad(y.coeffs(), r));
                assert_eq!(pad((x * y).coeffs(), r), want, "q={q}");
                let sum: Vec<u32> = pad(x.coeffs(), r)
                    .iter()
                    .zip(pad(y.coeffs(), r))
                    .map(|(a, b)| (a + b) % f.characteristic())
                    .collect();
                assert_eq!(pad((x + y).coeffs(), r), sum, "q={q}");
            }
        }
    }
}

#[test]
fn moduli_are_irreducible() {
    // If some element has q - 1 distinct powers, every nonzero residue is a unit,
    // so the quotient ring is a field and the modulus is irreducible.
    for q in ORDERS {
        let f = gf(q);
        let lambda = f.primitive_element();
        assert_eq!(lambda.order().unwrap(), q - 1, "q={q}");
        let distinct: std::collections::HashSet<u32> =
            (0..q - 1).map(|k| lambda.pow(k as u64).index()).collect();
        assert_eq!(distinct.len() as u32, q - 1, "q={q}");
    }
}

fn element_strategy(q: u32) -> impl Strategy<Value = FieldElement> {
    (0..q).prop_map(move |i| gf(q).element(i).unwrap())
}

fn zorn_strategy(q: u32) -> impl Strategy<Value = ZornMatrix> {
    proptest::array::uniform8(element_strategy(q))
        .prop_map(|e| ZornMatrix::from_entries(e).unwrap())
}

/// Determinant-1 matrices: `a` forced nonzero, `b` solved from `ab = 1 + α·β`.
fn unit_strategy(q: u32) -> impl Strategy<Value = ZornMatrix> {
    zorn_strategy(q).prop_map(|m| {
        let [a, x1, x2, x3, y1, y2, y3, _] = m.entries();
        let a = if a.is_zero() { a.field().one() } else { a };
        let dot = x1 * y1 + x2 * y2 + x3 * y3;
        let b = (a.field().one() + dot) * a.inv().unwrap();
        ZornMatrix::from_entries([a, x1, x2, x3, y1, y2, y3, b]).unwrap()
    })
}

fn any_q() -> impl Strategy<Value = u32> {
    proptest::sample::select(ORDERS.to_vec())
}

proptest! {
    #[test]
    fn field_laws(q in any_q(), seed in any::<u64>()) {
        let f = gf(q);
        let mut rng = SplitMix64::new(seed);
        let mut pick = || f.element(rng.below(q as u64) as u32).unwrap();
        let (a, b, c) = (pick(), pick(), pick());
        prop_assert_eq!(a * (b + c), a * b + a * c);
        prop_assert_eq!((a * b) * c, a * (b * c));
        prop_assert_eq!(a + (-a), f.zero());
        prop_assert_eq!(a - b, a + (-b));
        if !a.is_zero() {
            prop_assert_eq!(a * a.inv().unwrap(), f.one());
        }
        // Frobenius is additive.
        let p = f.characteristic() as u64;
        prop_assert_eq!((a + b).pow(p), a.pow(p) + b.pow(p));
    }

    #[test]
    fn determinant_is_multiplicative(x in zorn_strategy(5), y in zorn_strategy(5)) {
        prop_assert_eq!((x * y).det(), x.det() * y.det());
    }

    #[test]
    fn negation_commutes_with_product(x in zorn_strategy(4), y in zorn_strategy(4)) {
        prop_assert_eq!((-x) * y, -(x * y));
        prop_assert_eq!(x * (-y), -(x * y));
    }

    #[test]
    fn inverse_is_an_anti_automorphism(x in unit_strategy(7), y in unit_strategy(7)) {
        prop_assert!(x.is_unit() && y.is_unit());
        let xi = x.inverse().unwrap();
        let yi = y.inverse().unwrap();
        prop_assert_eq!((x * y).inverse().unwrap(), yi * xi);
        prop_assert_eq!(x * xi, ZornMatrix::identity(gf(7)));
        prop_assert_eq!(xi * x, ZornMatrix::identity(gf(7)));
    }

    #[test]
    fn loop_inverse_property(x in unit_strategy(9), y in unit_strategy(9)) {
        let (x, y) = (PaigeElement::canonical(&x).unwrap(), PaigeElement::canonical(&y).unwrap());
        let xi = x.inverse();
        prop_assert_eq!(xi * (x * y), y);
        prop_assert_eq!((y * x) * xi, y);
    }

    #[test]
    fn sampled_moufang(x in zorn_strategy(8), y in zorn_strategy(8), z in zorn_strategy(8)) {
        prop_assert_eq!(x * (y * (x * z)), ((x * y) * x) * z);
    }
}

/// The product written out over Z/p from the defining formula, with no shared code.
fn zorn_oracle(p: i64, x: [i64; 8], y: [i64; 8]) -> [i64; 8] {
    let (a, al, be, b) = (x[0], [x[1], x[2], x[3]], [x[4], x[5], x[6]], x[7]);
    let (c, ga, de, d) = (y[0], [y[1], y[2], y[3]], [y[4], y[5], y[6]], y[7]);
    let dot = |u: [i64; 3], v: [i64; 3]| u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
    let cross = |u: [i64; 3], v: [i64; 3]| {
        [
            u[1] * v[2] - u[2] * v[1],
            u[2] * v[0] - u[0] * v[2],
            u[0] * v[1] - u[1] * v[0],
        ]
    };
    let bd = cross(be, de);
    let ag = cross(al, ga);
    let out = [
        a * c + dot(al, de),
        a * ga[0] + al[0] * d - bd[0],
        a * ga[1] + al[1] * d - bd[1],
        a * ga[2] + al[2] * d - bd[2],
        be[0] * c + b * de[0] + ag[0],
        be[1] * c + b * de[1] + ag[1],
        be[2] * c + b * de[2] + ag[2],
        dot(be, ga) + b * d,
    ];
    out.map(|v| v.rem_euclid(p))
}

#[test]
fn zorn_product_matches_integer_oracle() {
    for p in [2u32, 3, 5, 7, 11] {
        let f = gf(p);
        let mut rng = SplitMix64::new(0x5eed + p as u64);
        for _ in 0..20_000 {
            let mut draw = || std::array::from_fn::<i64, 8, _>(|_| rng.below(p as u64) as i64);
            let (x, y) = (draw(), draw());
            let to_m = |v: [i64; 8]| ZornMatrix::from_entries(v.map(|c| f.from_int(c))).unwrap();
            let got = (to_m(x) * to_m(y)).entries().map(|e| e.index() as i64);
            assert_eq!(got, zorn_oracle(p as i64, x, y), "p={p} x={x:?} y={y:?}");
        }
    }
}

#[test]
fn determinant_multiplicative_exhaustive_q2() {
    let f = gf(2);
    let all: Vec<ZornMatrix> = (0u32..256)
        .map(|bits| {
            ZornMatrix::from_entries(std::array::from_fn(|i| f.element((bits >> i) & 1).unwrap()))
                .unwrap()
        })
        .collect();
    for x in &all {
        for y in &all {
            assert_eq!((*x * *y).det(), x.det() * y.det());
        }
    }
}

#[test]
fn determinant_multiplicative_sampled() {
    for q in [3u32, 4, 5] {
        let f = gf(q);
        let mut rng = SplitMix64::new(q as u64);
        let mut draw = || {
            ZornMatrix::from_entries(std::array::from_fn(|_| {
                f.element(rng.below(q as u64) as u32).unwrap()
            }))
            .unwrap()
        };
        for _ in 0..100_000 {
            let (x, y) = (draw(), draw());
            assert_eq!((x * y).det(), x.det() * y.det(), "q={q}");
        }
    }
}

#[test]
fn zorn_matrices_are_not_associative() {
    let f = gf(3);
    let e = |i| paige_loops::Vec3::basis(f, i);
    let zero = f.zero();
    let v0 = paige_loops::Vec3::zero(f);
    let x = ZornMatrix::new(zero, e(1), v0, zero).unwrap();
    let y = ZornMatrix::new(zero, e(2), v0, zero).unwrap();
    let z = ZornMatrix::new(zero, e(3), v0, zero).unwrap();
    // α-only matrices multiply through the cross product into β.
    assert_ne!((x * y) * z, x * (y * z));
}

#[test]
fn loop_order_formula_and_enumeration_agree() {
    for q in [2u32, 3, 4, 5, 7, 8, 9] {
        let f = gf(q);
        let q64 = q as u64;
        let formula = q64.pow(3) * (q64.pow(4) - 1) / if q % 2 == 0 { 1 } else { 2 };
        assert_eq!(count_loop(f), formula, "q={q}");
        if q <= 5 {
            assert_eq!(enumerate_loop(f).unwrap().order(), formula, "q={q}");
        }
    }
}

#[test]
fn moufang_exhaustive_q2() {
    let ctx = enumerate_loop(gf(2)).unwrap();
    let result = moufang_check(&ctx, SweepMode::Exhaustive, 1).unwrap();
    assert_eq!(result.checked, 1_728_000);
    assert!(result.passed());
}

#[test]
fn nonassociative_but_groups_inside() {
    for q in [2u32, 3] {
        let ctx = enumerate_loop(gf(q)).unwrap();
        let (x, y, z) = associativity_witness(ctx.elements().unwrap()).expect("witness");
        assert_ne!((x * y) * z, x * (y * z));
        for i in 1..=3 {
            let gi = subgroup_gi(i, gf(q)).unwrap();
            assert!(associativity_witness(&gi).is_none(), "q={q} G{i}");
        }
    }
}

#[test]
fn orbit_within_closure_and_closure_closed() {
    let f = gf(2);
    for name in [
        SetName::Prime,
        SetName::DicksonVariant,
        SetName::Paige,
        SetName::G1G2,
        SetName::G1G2G3,
    ] {
        let set = gensets::GenSet::build(name, f, None).unwrap();
        let closure = subloop_closure(&set.elements, f, 3).unwrap();
        for side in [Side::Left, Side::Right, Side::Both] {
            assert!(
                orbit_identity(&set.elements, f, side)
                    .unwrap()
                    .is_subset_of(&closure),
                "{name:?}"
            );
        }
        let members = closure.to_vec();
        for s in &members {
            for t in &members {
                assert!(closure.contains(&(*s * *t)));
            }
        }
    }
    // Sampled closedness at q = 3 on a proper subloop and on the whole loop.
    let f3 = gf(3);
    let g2 = subgroup_gi(2, f3).unwrap();
    for closure in [
        subloop_closure(&g2[..2], f3, 3).unwrap(),
        subloop_closure(&gensets::prime(f3).unwrap().elements, f3, 3).unwrap(),
    ] {
        let members = closure.to_vec();
        let mut rng = SplitMix64::new(3);
        for _ in 0..50_000 {
            let s = members[rng.below(members.len() as u64) as usize];
            let t = members[rng.below(members.len() as u64) as usize];
            assert!(closure.contains(&(s * t)));
        }
    }
}

#[test]
fn cyclic_closure_has_element_order() {
    let f = gf(5);
    let x = PaigeElement::parse("[1|1,0,0|0,0,0|1]", f).unwrap();
    let closure = subloop_closure(&[x], f, 5).unwrap();
    let mut power = x;
    let mut order = 1;
    while !power.is_identity() {
        power = power * x;
        order += 1;
    }
    assert_eq!(closure.len(), order);
    assert!(associativity_witness(&closure.to_vec()).is_none());
}

#[test]
fn splitmix_reference_values() {
    // Published SplitMix64 outputs, computed independently.
    let mut rng = SplitMix64::new(1234567);
    assert_eq!(rng.next_u64(), 6457827717110365317);
    assert_eq!(rng.next_u64(), 3203168211198807973);
    let mut skip = SplitMix64::new(1234567);
    skip.advance(1);
    assert_eq!(skip.next_u64(), 3203168211198807973);
}
