//! Generation checks and identity sweeps over M*(q).
//!
//! Two ways to decide whether a set generates the loop:
//!
//! * the orbit of the identity under translation by the generators. Every
//!   orbit element is a product of generators, so the orbit lies inside the
//!   generated subloop and reaching the whole loop proves generation. A
//!   smaller orbit proves nothing. One-sided orbits are often strictly smaller
//!   than the subloop (96 of 120 for `{U1, U2, X}` over GF(2)), so
//!   [`verify_set`] translates on both sides.
//! * the exact subloop closure, a fixpoint of products in both orders. Its
//!   cost grows with the square of the subloop size, so it is capped.
//!
//! Sampled sweeps draw from [`SplitMix64`], so a seed reproduces the same
//! triples on any platform and for any thread count.

use std::collections::HashSet;
use std::fmt;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::gensets::{GenSet, GenSetError, SetName};
use crate::gf::{Field, GfError};
use crate::paige::{
    canonical_raw, enumerate_loop, mul_keys, unpack, LoopContext, LoopError, PaigeElement,
};
use crate::zorn::zorn_mul_raw;

/// Default largest q for exact subloop closure.
pub const DEFAULT_CLOSURE_MAX_ORDER: u32 = 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error(transparent)]
    Field(#[from] GfError),
    #[error(transparent)]
    Loop(#[from] LoopError),
    #[error(transparent)]
    GenSet(#[from] GenSetError),
    #[error("closure needs q <= {limit}, got q = {q}; use the orbit method")]
    ClosureCap { q: u32, limit: u32 },
    #[error("generators over GF({got}) used with M*({expected})")]
    FieldMismatch { expected: u32, got: u32 },
    #[error("empty generator set")]
    NoGenerators,
    #[error("operation needs the enumerated element table of M*({0})")]
    NeedsTable(u32),
}

/// SplitMix64 (Steele, Lea, Flood 2014): state advances by
/// `0x9E3779B97F4A7C15`, output is the state mixed by
/// `z ^= z >> 30; z *= 0xBF58476D1CE4E5B9; z ^= z >> 27; z *= 0x94D049BB133111EB; z ^= z >> 31`.
/// Indices below `n` are `(next() as u128 * n as u128) >> 64`.
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

    pub fn new(seed: u64) -> SplitMix64 {
        SplitMix64 { state: seed }
    }

    /// Skips ahead `n` outputs.
    pub fn advance(&mut self, n: u64) {
        self.state = self.state.wrapping_add(Self::GAMMA.wrapping_mul(n));
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(Self::GAMMA);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    pub fn below(&mut self, n: u64) -> u64 {
        ((self.next_u64() as u128 * n as u128) >> 64) as u64
    }
}

/// Membership over canonical keys: a bitmap over the whole key space when it
/// fits in 2^28 bits (q <= 11), a hash set otherwise.
enum KeySet {
    Bits(Vec<u64>),
    Hashed(HashSet<u64>),
}

impl KeySet {
    const MAX_BITS: u64 = 1 << 28;

    fn new(q: u32) -> KeySet {
        let space = (q as u64).pow(8);
        if space <= Self::MAX_BITS {
            KeySet::Bits(vec![0; space.div_ceil(64) as usize])
        } else {
            KeySet::Hashed(HashSet::new())
        }
    }

    /// Returns true if `key` was not yet present.
    #[inline]
    fn insert(&mut self, key: u64) -> bool {
        match self {
            KeySet::Bits(words) => {
                let (w, b) = ((key / 64) as usize, key % 64);
                let fresh = words[w] & (1 << b) == 0;
                words[w] |= 1 << b;
                fresh
            }
            KeySet::Hashed(set) => set.insert(key),
        }
    }
}

/// A set of loop elements kept as canonical keys in insertion order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElementSet {
    q: u32,
    keys: Vec<u64>,
}

impl ElementSet {
    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn keys(&self) -> &[u64] {
        &self.keys
    }

    pub fn iter(&self) -> impl Iterator<Item = PaigeElement> + '_ {
        self.keys
            .iter()
            .map(|&k| PaigeElement::from_canonical_key(self.q, k))
    }

    pub fn to_vec(&self) -> Vec<PaigeElement> {
        self.iter().collect()
    }

    pub fn contains(&self, x: &PaigeElement) -> bool {
        x.field_order() == self.q && self.keys.contains(&x.key())
    }

    pub fn is_subset_of(&self, other: &ElementSet) -> bool {
        let theirs: HashSet<u64> = other.keys.iter().copied().collect();
        self.q == other.q && self.keys.iter().all(|k| theirs.contains(k))
    }
}

/// Which translations an orbit follows.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
    Both,
}

fn check_gens(field: &Field, gens: &[PaigeElement]) -> Result<(), EngineError> {
    if gens.is_empty() {
        return Err(EngineError::NoGenerators);
    }
    for g in gens {
        if g.field_order() != field.order() {
            return Err(EngineError::FieldMismatch {
                expected: field.order(),
                got: g.field_order(),
            });
        }
    }
    Ok(())
}

/// Least set containing the identity and closed under `x ↦ g·x`, `x ↦ x·g`
/// or both, for every generator `g`, built by a FIFO worklist.
pub fn orbit_identity(
    gens: &[PaigeElement],
    field: &Field,
    side: Side,
) -> Result<ElementSet, EngineError> {
    check_gens(field, gens)?;
    let q = field.order();
    let gen_entries: Vec<[u8; 8]> = gens.iter().map(|g| unpack(q, g.key())).collect();
    let start = PaigeElement::identity(field).key();
    let mut seen = KeySet::new(q);
    seen.insert(start);
    let mut keys = vec![start];
    let mut next = 0;
    while next < keys.len() {
        let x = unpack(q, keys[next]);
        next += 1;
        for g in &gen_entries {
            let left = matches!(side, Side::Left | Side::Both).then(|| zorn_mul_raw(field, *g, x));
            let right =
                matches!(side, Side::Right | Side::Both).then(|| zorn_mul_raw(field, x, *g));
            for product in left.into_iter().chain(right) {
                let (_, key) = canonical_raw(field, product);
                if seen.insert(key) {
                    keys.push(key);
                }
            }
        }
    }
    Ok(ElementSet { q, keys })
}

/// The subloop generated by `gens`, for q up to `max_order`.
///
/// Members are processed in insertion order; each is multiplied on both
/// sides by itself and every earlier member, and new products are appended.
pub fn subloop_closure(
    gens: &[PaigeElement],
    field: &Field,
    max_order: u32,
) -> Result<ElementSet, EngineError> {
    check_gens(field, gens)?;
    let q = field.order();
    if q > max_order {
        return Err(EngineError::ClosureCap {
            q,
            limit: max_order,
        });
    }
    Ok(close_keys(field, gens.iter().map(PaigeElement::key)))
}

fn close_keys(field: &Field, start: impl Iterator<Item = u64>) -> ElementSet {
    let q = field.order();
    let mut seen = KeySet::new(q);
    let mut keys: Vec<u64> = start.filter(|&k| seen.insert(k)).collect();
    let mut next = 0;
    while next < keys.len() {
        let x = keys[next];
        for j in 0..=next {
            let y = keys[j];
            for key in [mul_keys(field, x, y), mul_keys(field, y, x)] {
                if seen.insert(key) {
                    keys.push(key);
                }
            }
        }
        next += 1;
    }
    ElementSet { q, keys }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Auto,
    Orbit,
    Closure,
}

impl std::str::FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Method, String> {
        match s {
            "auto" => Ok(Method::Auto),
            "orbit" => Ok(Method::Orbit),
            "closure" => Ok(Method::Closure),
            _ => Err(format!("unknown method {s:?}")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Generates,
    ProperSubloop,
    InconclusiveOrbit,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Generates => 0,
            Verdict::ProperSubloop => 1,
            Verdict::InconclusiveOrbit => 2,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Generates => "GENERATES",
            Verdict::ProperSubloop => "PROPER-SUBLOOP",
            Verdict::InconclusiveOrbit => "INCONCLUSIVE-ORBIT",
        })
    }
}

#[derive(Clone, Debug)]
pub struct GenerationReport {
    pub set: String,
    pub q: u32,
    /// Method that produced the verdict (never `Auto`).
    pub method: Method,
    pub size: u64,
    pub order: u64,
    pub verdict: Verdict,
    pub elapsed: Duration,
}

impl fmt::Display for GenerationReport {
    /// One line; elapsed time is left out so reports are reproducible.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let method = match self.method {
            Method::Closure => "closure",
            _ => "orbit",
        };
        write!(
            f,
            "set={} q={} method={} size={} order={} verdict={}",
            self.set, self.q, method, self.size, self.order, self.verdict
        )
    }
}

/// Decides whether `set` generates M*(q).
///
/// `Auto` tries the orbit certificate and falls back to exact closure when
/// q is within `closure_max_order`.
pub fn verify_set(
    set: &GenSet,
    method: Method,
    closure_max_order: u32,
) -> Result<GenerationReport, EngineError> {
    let start = Instant::now();
    let field = set.field();
    let order = LoopContext::counted(field).order();
    let report = |method, size: usize, verdict| GenerationReport {
        set: set.name.clone(),
        q: set.q,
        method,
        size: size as u64,
        order,
        verdict,
        elapsed: start.elapsed(),
    };
    let closure_verdict = |size: usize| {
        if size as u64 == order {
            Verdict::Generates
        } else {
            Verdict::ProperSubloop
        }
    };
    match method {
        Method::Closure => {
            let closure = subloop_closure(&set.elements, field, closure_max_order)?;
            Ok(report(
                Method::Closure,
                closure.len(),
                closure_verdict(closure.len()),
            ))
        }
        Method::Orbit | Method::Auto => {
            let orbit = orbit_identity(&set.elements, field, Side::Both)?;
            if orbit.len() as u64 == order {
                return Ok(report(Method::Orbit, orbit.len(), Verdict::Generates));
            }
            if method == Method::Auto && set.q <= closure_max_order {
                let closure = subloop_closure(&set.elements, field, closure_max_order)?;
                return Ok(report(
                    Method::Closure,
                    closure.len(),
                    closure_verdict(closure.len()),
                ));
            }
            Ok(report(
                Method::Orbit,
                orbit.len(),
                Verdict::InconclusiveOrbit,
            ))
        }
    }
}

/// Builds the catalogued set and runs [`verify_set`] with the default cap.
pub fn verify_generates(
    name: SetName,
    field: &Field,
    method: Method,
) -> Result<GenerationReport, EngineError> {
    let set = GenSet::build(name, field, None)?;
    verify_set(&set, method, DEFAULT_CLOSURE_MAX_ORDER)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepMode {
    Exhaustive,
    Sample { n: u64, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepResult {
    pub checked: u64,
    /// First violating triple in scan (or sample) order.
    pub witness: Option<(PaigeElement, PaigeElement, PaigeElement)>,
}

impl SweepResult {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

/// Checks `x(y(xz)) = ((xy)x)z` over all or `n` sampled triples of `ctx`.
///
/// Triples are split into contiguous ranges, one per thread; the witness with
/// the smallest triple number wins, so the result does not depend on
/// `threads`.
pub fn moufang_check(
    ctx: &LoopContext,
    mode: SweepMode,
    threads: usize,
) -> Result<SweepResult, EngineError> {
    let elements = ctx
        .elements()
        .ok_or(EngineError::NeedsTable(ctx.field().order()))?;
    let n = elements.len() as u64;
    let field = ctx.field();
    let total = match mode {
        SweepMode::Exhaustive => n.pow(3),
        SweepMode::Sample { n: samples, .. } => samples,
    };
    // Exhaustive sweeps go through a product table when one is small enough.
    let table = match mode {
        SweepMode::Exhaustive if n <= 2048 => ctx.cayley_table(),
        _ => None,
    };
    let triple_at = |t: u64| -> (usize, usize, usize) {
        match mode {
            SweepMode::Exhaustive => (
                (t / (n * n)) as usize,
                (t / n % n) as usize,
                (t % n) as usize,
            ),
            SweepMode::Sample { seed, .. } => {
                let mut rng = SplitMix64::new(seed);
                rng.advance(3 * t);
                (
                    rng.below(n) as usize,
                    rng.below(n) as usize,
                    rng.below(n) as usize,
                )
            }
        }
    };
    let violates = |(i, j, k): (usize, usize, usize)| -> bool {
        if let Some(t) = &table {
            let m = |a: usize, b: usize| t[a * n as usize + b] as usize;
            m(i, m(j, m(i, k))) != m(m(m(i, j), i), k)
        } else {
            let (x, y, z) = (elements[i].key(), elements[j].key(), elements[k].key());
            let m = |a, b| mul_keys(field, a, b);
            m(x, m(y, m(x, z))) != m(m(m(x, y), x), z)
        }
    };
    let first_violation =
        |range: std::ops::Range<u64>| range.into_iter().find(|&t| violates(triple_at(t)));

    let threads = threads.max(1) as u64;
    let chunk = total.div_ceil(threads).max(1);
    let found = std::thread::scope(|s| {
        let handles: Vec<_> = (0..threads)
            .map(|w| {
                let range = (w * chunk).min(total)..((w + 1) * chunk).min(total);
                s.spawn(move || first_violation(range))
            })
            .collect();
        handles
            .into_iter()
            .filter_map(|h| h.join().expect("sweep worker panicked"))
            .min()
    });
    let witness = found.map(|t| {
        let (i, j, k) = triple_at(t);
        (elements[i], elements[j], elements[k])
    });
    Ok(SweepResult {
        checked: total,
        witness,
    })
}

/// First `(x, y, z)` in scan order with `(xy)z ≠ x(yz)`.
pub fn associativity_witness(
    elements: &[PaigeElement],
) -> Option<(PaigeElement, PaigeElement, PaigeElement)> {
    for &x in elements {
        for &y in elements {
            let xy = x * y;
            for &z in elements {
                if xy * z != x * (y * z) {
                    return Some((x, y, z));
                }
            }
        }
    }
    None
}

/// Associativity of a subloop through its product table.
fn is_associative(field: &Field, set: &ElementSet) -> bool {
    let mut sorted: Vec<u64> = set.keys().to_vec();
    sorted.sort_unstable();
    let n = sorted.len();
    let index = |k: u64| sorted.binary_search(&k).expect("closed subloop");
    let table: Vec<usize> = sorted
        .iter()
        .flat_map(|&x| sorted.iter().map(move |&y| (x, y)))
        .map(|(x, y)| index(mul_keys(field, x, y)))
        .collect();
    let m = |a: usize, b: usize| table[a * n + b];
    (0..n).all(|i| (0..n).all(|j| (0..n).all(|k| m(m(i, j), k) == m(i, m(j, k)))))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiassocResult {
    pub size: usize,
    pub associative: bool,
}

/// Closes `{x, y}` and tests every triple inside it for associativity.
pub fn diassociativity_check(
    x: &PaigeElement,
    y: &PaigeElement,
    max_order: u32,
) -> Result<DiassocResult, EngineError> {
    let field = x.field();
    let closure = subloop_closure(&[*x, *y], field, max_order)?;
    Ok(DiassocResult {
        size: closure.len(),
        associative: is_associative(field, &closure),
    })
}

/// Runs [`diassociativity_check`] on `pairs` seeded random pairs.
pub fn diassociativity_sweep(
    field: &'static Field,
    pairs: u64,
    seed: u64,
    max_order: u32,
) -> Result<Vec<(PaigeElement, PaigeElement, DiassocResult)>, EngineError> {
    if field.order() > max_order {
        return Err(EngineError::ClosureCap {
            q: field.order(),
            limit: max_order,
        });
    }
    let ctx = enumerate_loop(field)?;
    let elements = ctx.elements().expect("enumerated");
    let n = elements.len() as u64;
    let mut rng = SplitMix64::new(seed);
    (0..pairs)
        .map(|_| {
            let x = elements[rng.below(n) as usize];
            let y = elements[rng.below(n) as usize];
            diassociativity_check(&x, &y, max_order).map(|r| (x, y, r))
        })
        .collect()
}
