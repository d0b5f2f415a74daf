//! A concrete size-measured coding of terms, formulas, sets and evaluations,
//! together with the iterated-exponential arithmetic used to state growth
//! bounds against it.
//!
//! The coding is self-delimiting binary: every constituent is written as an
//! Elias-gamma-framed item (`gamma(len+1)` then the payload), objects are the
//! concatenation of their items, sets code the item sequence sorted by code
//! value, and the final code value prepends a sentinel `1` bit. This keeps
//!
//! * `code(<a>)    <= 9 * (code(a) + 1)^2`       (singleton)
//! * `code(A ++ B) <= 64 * code(A) * code(B)`    (concatenation, union)
//! * `|A|          <= log code(A)`               (cardinality)
//!
//! with room to spare, and distinct objects get distinct codes.
//!
//! `exp` is `x -> 2^x` and `log` its ceiling inverse. Quantities too large to
//! materialize are carried as `(level, mantissa)` surrogates meaning
//! `exp^level(mantissa)`; comparisons are exact in the level and approximate
//! in the mantissa within a relative `1e-9`.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::eval::Evaluation;
use crate::instance::TermSet;
use crate::skolem::SkolemRegistry;
use crate::syntax::{Formula, Signature, Term, EQ};

/// Default ceiling on the bit length of any materialized code.
pub const DEFAULT_BIT_CEILING: u64 = 1 << 26;

/// Largest exponent the tower arithmetic materializes exactly.
const MAX_EXACT_BITS: u64 = 1 << 22;

/// Canonical surrogate mantissa range: `(63, 2^63]`.
const MAX_MANTISSA: f64 = 9.223_372_036_854_776e18;

/// Relative tolerance of surrogate comparisons.
pub const SURROGATE_TOLERANCE: f64 = 1e-9;

/// A natural-number code with its cached bit length.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Code {
    pub value: BigUint,
    pub bitlen: u64,
}

impl Code {
    fn from_bits(bits: &BitString) -> Code {
        let mut value = BigUint::from_bytes_be(&bits.bytes);
        if bits.used > 0 {
            value = (value << bits.used) | BigUint::from(bits.acc);
        }
        value |= BigUint::one() << bits.len;
        Code { bitlen: bits.len + 1, value }
    }

    pub fn to_tower(&self) -> Tower {
        Tower::Exact(self.value.clone())
    }
}

/// MSB-first bit accumulator.
#[derive(Debug, Clone, Default)]
struct BitString {
    bytes: Vec<u8>,
    acc: u8,
    used: u8,
    len: u64,
}

impl BitString {
    fn push(&mut self, bit: bool) {
        self.acc = (self.acc << 1) | u8::from(bit);
        self.used += 1;
        self.len += 1;
        if self.used == 8 {
            self.bytes.push(self.acc);
            self.acc = 0;
            self.used = 0;
        }
    }

    fn bit(&self, idx: u64) -> bool {
        let byte = (idx / 8) as usize;
        if byte < self.bytes.len() {
            let off = (idx % 8) as u8;
            self.bytes[byte] & (0x80 >> off) != 0
        } else {
            let local = (idx - self.bytes.len() as u64 * 8) as u8;
            self.acc & (1 << (self.used - 1 - local)) != 0
        }
    }

    fn extend(&mut self, other: &BitString) {
        for i in 0..other.len {
            self.push(other.bit(i));
        }
    }

    /// Minimal binary representation, empty for zero.
    fn push_number(&mut self, n: u64) {
        if n == 0 {
            return;
        }
        let width = 64 - n.leading_zeros() as u64;
        for i in (0..width).rev() {
            self.push(n & (1 << i) != 0);
        }
    }

    /// Elias gamma code of `n >= 1`: `floor(log2 n)` zeros, then `n` in binary.
    fn push_gamma(&mut self, n: u64) {
        debug_assert!(n >= 1);
        let width = 64 - n.leading_zeros() as u64;
        for _ in 0..width - 1 {
            self.push(false);
        }
        self.push_number(n);
    }

    /// Frames a payload as one self-delimiting item.
    fn push_item(&mut self, payload: &BitString) {
        self.push_gamma(payload.len + 1);
        self.extend(payload);
    }

    fn push_name(&mut self, name: &str) {
        let mut bytes = BitString::default();
        for b in name.bytes() {
            for i in (0..8).rev() {
                bytes.push(b & (1 << i) != 0);
            }
        }
        self.push_item(&bytes);
    }
}

const TAG_VAR: u64 = 0;
const TAG_AND: u64 = 1;
const TAG_OR: u64 = 2;
const TAG_NOT: u64 = 3;
const TAG_IMPLIES: u64 = 4;
const TAG_FORALL: u64 = 5;
const TAG_EXISTS: u64 = 6;
const TAG_EQ: u64 = 7;
const FIRST_SYMBOL_ID: u64 = 8;

/// Fixed symbol-to-id table plus the encoders; frozen at construction from a
/// signature and a registry snapshot.
#[derive(Debug, Clone)]
pub struct CodingScheme {
    ids: BTreeMap<String, u64>,
    bit_ceiling: u64,
}

impl CodingScheme {
    pub fn new(sig: &Signature, reg: &SkolemRegistry) -> CodingScheme {
        Self::with_ceiling(sig, reg, DEFAULT_BIT_CEILING)
    }

    pub fn with_ceiling(sig: &Signature, reg: &SkolemRegistry, bit_ceiling: u64) -> CodingScheme {
        let mut ids = BTreeMap::new();
        let mut next = FIRST_SYMBOL_ID;
        for (name, _) in sig.functions() {
            ids.insert(name.clone(), next);
            next += 1;
        }
        for (name, _) in sig.predicates() {
            ids.insert(name.clone(), next);
            next += 1;
        }
        for entry in reg.entries() {
            ids.insert(entry.name.clone(), next);
            next += 1;
        }
        CodingScheme { ids, bit_ceiling }
    }

    pub fn bit_ceiling(&self) -> u64 {
        self.bit_ceiling
    }

    fn id(&self, name: &str) -> Result<u64> {
        if name == EQ {
            return Ok(TAG_EQ);
        }
        self.ids.get(name).copied().ok_or_else(|| Error::UnknownSymbol(name.to_string()))
    }

    fn check(&self, bits: &BitString) -> Result<()> {
        if bits.len + 1 > self.bit_ceiling {
            Err(Error::CeilingExceeded { need: bits.len + 1, ceiling: self.bit_ceiling })
        } else {
            Ok(())
        }
    }

    fn term_bits(&self, t: &Term) -> Result<BitString> {
        let mut out = BitString::default();
        match t {
            Term::Var(name) => {
                let mut tag = BitString::default();
                tag.push_number(TAG_VAR);
                out.push_item(&tag);
                out.push_name(name);
            }
            Term::App(f, args) => {
                let mut tag = BitString::default();
                tag.push_number(self.id(f)?);
                out.push_item(&tag);
                for a in args {
                    let bits = self.term_bits(a)?;
                    out.push_item(&bits);
                }
            }
        }
        Ok(out)
    }

    fn formula_bits(&self, f: &Formula) -> Result<BitString> {
        let mut out = BitString::default();
        let mut tag = BitString::default();
        match f {
            Formula::Atom(p, args) => {
                tag.push_number(self.id(p)?);
                out.push_item(&tag);
                for a in args {
                    let bits = self.term_bits(a)?;
                    out.push_item(&bits);
                }
            }
            Formula::Not(inner) => {
                tag.push_number(TAG_NOT);
                out.push_item(&tag);
                let bits = self.formula_bits(inner)?;
                out.push_item(&bits);
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                tag.push_number(match f {
                    Formula::And(..) => TAG_AND,
                    Formula::Or(..) => TAG_OR,
                    _ => TAG_IMPLIES,
                });
                out.push_item(&tag);
                let la = self.formula_bits(a)?;
                out.push_item(&la);
                let lb = self.formula_bits(b)?;
                out.push_item(&lb);
            }
            Formula::Forall(v, body) | Formula::Exists(v, body) => {
                tag.push_number(if matches!(f, Formula::Forall(..)) { TAG_FORALL } else { TAG_EXISTS });
                out.push_item(&tag);
                out.push_name(v);
                let bits = self.formula_bits(body)?;
                out.push_item(&bits);
            }
        }
        Ok(out)
    }

    pub fn code_term(&self, t: &Term) -> Result<Code> {
        let bits = self.term_bits(t)?;
        self.check(&bits)?;
        Ok(Code::from_bits(&bits))
    }

    pub fn code_formula(&self, f: &Formula) -> Result<Code> {
        let bits = self.formula_bits(f)?;
        self.check(&bits)?;
        Ok(Code::from_bits(&bits))
    }

    /// Codes a set as the concatenation of its members' items, sorted by
    /// member code value.
    pub fn code_set(&self, lambda: &TermSet) -> Result<Code> {
        let mut items: Vec<(BigUint, BitString)> = lambda
            .iter()
            .map(|t| {
                let bits = self.term_bits(t)?;
                Ok((Code::from_bits(&bits).value, bits))
            })
            .collect::<Result<_>>()?;
        items.sort_by(|(a, _), (b, _)| a.cmp(b));
        let mut out = BitString::default();
        for (_, bits) in &items {
            out.push_item(bits);
            self.check(&out)?;
        }
        Ok(Code::from_bits(&out))
    }

    /// Codes an evaluation as the set of pairs `(atom, bit)`.
    pub fn code_evaluation(&self, p: &Evaluation) -> Result<Code> {
        let mut items: Vec<(BigUint, BitString)> = Vec::with_capacity(p.bits.len());
        for idx in 0..p.bits.len() {
            let atom = p.table.atom_as_formula(idx);
            let abits = self.formula_bits(&atom)?;
            let mut pair = BitString::default();
            pair.push_item(&abits);
            let mut bit = BitString::default();
            bit.push_number(u64::from(p.bits[idx]));
            pair.push_item(&bit);
            let value = Code::from_bits(&pair).value;
            items.push((value, pair));
        }
        items.sort_by(|(a, _), (b, _)| a.cmp(b));
        let mut out = BitString::default();
        for (_, bits) in &items {
            out.push_item(bits);
            self.check(&out)?;
        }
        Ok(Code::from_bits(&out))
    }
}

/// A natural number, exact when materializable, otherwise a level/mantissa
/// surrogate for `exp^level(mantissa)`.
#[derive(Debug, Clone)]
pub enum Tower {
    Exact(BigUint),
    Surrogate { level: u32, mantissa: f64 },
}

fn biguint_log2(v: &BigUint) -> f64 {
    if v.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = v.bits();
    if bits <= 53 {
        let as64: u64 = v.try_into().unwrap_or(u64::MAX);
        return (as64 as f64).log2();
    }
    let shift = bits - 53;
    let top: BigUint = v >> shift;
    let top64: u64 = (&top).try_into().unwrap_or(u64::MAX);
    shift as f64 + (top64 as f64).log2()
}

/// The ceiling base-2 logarithm: `min { y | x <= 2^y }`.
pub fn ceil_log2(v: &BigUint) -> BigUint {
    if v.is_zero() || v.is_one() {
        return BigUint::zero();
    }
    let bits = v.bits();
    if v.count_ones() == 1 {
        BigUint::from(bits - 1)
    } else {
        BigUint::from(bits)
    }
}

fn normalize(mut level: u32, mut m: f64) -> Tower {
    while m > MAX_MANTISSA {
        m = m.log2();
        level += 1;
    }
    while level > 1 && m <= 63.0 {
        m = m.exp2();
        level -= 1;
    }
    Tower::Surrogate { level, mantissa: m }
}

impl Tower {
    pub fn from_u64(v: u64) -> Tower {
        Tower::Exact(BigUint::from(v))
    }

    pub fn exact(&self) -> Option<&BigUint> {
        match self {
            Tower::Exact(v) => Some(v),
            Tower::Surrogate { .. } => None,
        }
    }

    /// `2^self`, materialized while the result stays under the exact cap.
    pub fn exp(&self) -> Tower {
        match self {
            Tower::Exact(v) => {
                if let Ok(small) = u64::try_from(v) {
                    if small < MAX_EXACT_BITS {
                        return Tower::Exact(BigUint::one() << small);
                    }
                }
                normalize(1, biguint_log2(v).exp2())
            }
            Tower::Surrogate { level, mantissa } => normalize(level + 1, *mantissa),
        }
    }

    /// Ceiling log; exact on exact values, level-lowering on surrogates.
    pub fn log(&self) -> Tower {
        match self {
            Tower::Exact(v) => Tower::Exact(ceil_log2(v)),
            Tower::Surrogate { level: 1, mantissa } => {
                Tower::Exact(BigUint::from(mantissa.ceil().max(0.0) as u64))
            }
            Tower::Surrogate { level, mantissa } => normalize(level - 1, *mantissa),
        }
    }

    pub fn pow(&self, n: u64) -> Tower {
        if n == 0 {
            return Tower::Exact(BigUint::one());
        }
        match self {
            Tower::Exact(v) => {
                if v.is_zero() || v.is_one() {
                    return Tower::Exact(v.clone());
                }
                if v.bits().saturating_mul(n) <= MAX_EXACT_BITS && n <= u32::MAX as u64 {
                    Tower::Exact(v.pow(n as u32))
                } else {
                    normalize(1, biguint_log2(v) * n as f64)
                }
            }
            Tower::Surrogate { level: 1, mantissa } => normalize(1, mantissa * n as f64),
            Tower::Surrogate { level: 2, mantissa } => normalize(2, mantissa + (n as f64).log2()),
            // Deeper levels absorb scalar powers below the tolerance.
            t => t.clone(),
        }
    }

    pub fn mul(&self, other: &Tower) -> Tower {
        match (self, other) {
            (Tower::Exact(a), Tower::Exact(b)) => {
                if a.is_zero() || b.is_zero() {
                    return Tower::Exact(BigUint::zero());
                }
                if a.bits() + b.bits() <= MAX_EXACT_BITS {
                    Tower::Exact(a * b)
                } else {
                    normalize(1, biguint_log2(a) + biguint_log2(b))
                }
            }
            (a, b) => match (a.log2_at(1), b.log2_at(1)) {
                (Some(la), Some(lb)) if la.is_finite() && lb.is_finite() => normalize(1, la + lb),
                // Otherwise the larger operand dominates within tolerance.
                _ => {
                    if cmp_tower(a, b) == Ordering::Less {
                        b.clone()
                    } else {
                        a.clone()
                    }
                }
            },
        }
    }

    pub fn add(&self, other: &Tower) -> Tower {
        match (self, other) {
            (Tower::Exact(a), Tower::Exact(b)) => Tower::Exact(a + b),
            (a, b) => {
                let (big, small) = if cmp_tower(a, b) == Ordering::Less { (b, a) } else { (a, b) };
                match (big.log2_at(1), small.log2_at(1)) {
                    (Some(lb), Some(ls)) if lb.is_finite() && ls.is_finite() => {
                        let diff = ls - lb;
                        if diff < -60.0 {
                            big.clone()
                        } else {
                            normalize(1, lb + (1.0 + diff.exp2()).log2())
                        }
                    }
                    _ => big.clone(),
                }
            }
        }
    }

    /// `log2^k` of the value as an `f64`; `None` when that does not fit.
    fn log2_at(&self, k: u32) -> Option<f64> {
        fn iter_logs(mut x: f64, n: u32) -> f64 {
            for _ in 0..n {
                x = if x > 0.0 { x.log2() } else { f64::NEG_INFINITY };
            }
            x
        }
        match self {
            Tower::Exact(v) => {
                if k == 0 {
                    if v.bits() <= 1000 {
                        Some(biguint_log2(v).exp2())
                    } else {
                        None
                    }
                } else {
                    Some(iter_logs(biguint_log2(v), k - 1))
                }
            }
            Tower::Surrogate { level, mantissa } => {
                if k >= *level {
                    Some(iter_logs(*mantissa, k - level))
                } else if level - k == 1 && *mantissa <= 1000.0 {
                    Some(mantissa.exp2())
                } else {
                    None
                }
            }
        }
    }
}

/// Total order with the documented mantissa tolerance.
pub fn cmp_tower(a: &Tower, b: &Tower) -> Ordering {
    if let (Tower::Exact(x), Tower::Exact(y)) = (a, b) {
        return x.cmp(y);
    }
    let max_level = 2 + match (a, b) {
        (Tower::Surrogate { level, .. }, Tower::Surrogate { level: l2, .. }) => *level.max(l2),
        (Tower::Surrogate { level, .. }, _) | (_, Tower::Surrogate { level, .. }) => *level,
        _ => 0,
    };
    for k in 0..=max_level {
        if let (Some(x), Some(y)) = (a.log2_at(k), b.log2_at(k)) {
            if x == f64::NEG_INFINITY && y == f64::NEG_INFINITY {
                return Ordering::Equal;
            }
            let scale = x.abs().max(y.abs()).max(1.0);
            if (x - y).abs() <= SURROGATE_TOLERANCE * scale {
                return Ordering::Equal;
            }
            return x.partial_cmp(&y).unwrap_or(Ordering::Equal);
        }
    }
    Ordering::Equal
}

pub fn tower_le(a: &Tower, b: &Tower) -> bool {
    cmp_tower(a, b) != Ordering::Greater
}

/// `exp^n(x)`.
pub fn exp_iter(n: u32, x: &Tower) -> Tower {
    let mut t = x.clone();
    for _ in 0..n {
        t = t.exp();
    }
    t
}

/// `log^n(x)` with the ceiling log.
pub fn log_iter(n: u32, x: &Tower) -> Tower {
    let mut t = x.clone();
    for _ in 0..n {
        t = t.log();
    }
    t
}

/// `omega_m(x) = exp^m((log^m x)^2)`, computed both directly and by the
/// inductive route `omega_0(x) = x^2`, `omega_{m+1}(x) = exp(omega_m(log x))`;
/// the two must agree.
pub fn omega(m: u32, x: &Tower) -> Result<Tower> {
    let direct = exp_iter(m, &log_iter(m, x).pow(2));
    let inductive = omega_inductive(m, x);
    let agree = match (&direct, &inductive) {
        (Tower::Exact(a), Tower::Exact(b)) => a == b,
        (a, b) => cmp_tower(a, b) == Ordering::Equal,
    };
    if !agree {
        return Err(Error::TowerOverflow(format!(
            "omega_{m} definitions disagree: {direct:?} vs {inductive:?}"
        )));
    }
    Ok(direct)
}

fn omega_inductive(m: u32, x: &Tower) -> Tower {
    if m == 0 {
        x.pow(2)
    } else {
        omega_inductive(m - 1, &x.log()).exp()
    }
}

/// Is `exp^n(x)` representable under a bit ceiling? This is the desk-scale
/// reading of "exists" for cut membership.
pub fn in_log_cut(n: u32, x: &BigUint, ceiling_bits: u64) -> bool {
    let mut v = x.clone();
    for _ in 0..n {
        // exp(v) has v + 1 bits.
        match u64::try_from(&v) {
            Ok(small) if small < ceiling_bits => v = BigUint::one() << small,
            _ => return false,
        }
    }
    true
}

/// Least `n <= max_n` with `x <= y^n + n` across all samples; `None` is the
/// empirical FAIL. Requires at least 8 samples whose `y` values span the
/// given multiplicative spread.
pub fn p_bound_check(samples: &[(Tower, Tower)], max_n: u64, min_spread: f64) -> Result<Option<u64>> {
    if samples.len() < 8 {
        return Err(Error::InsufficientSpread(format!("{} samples, need at least 8", samples.len())));
    }
    let mut ymin = &samples[0].1;
    let mut ymax = &samples[0].1;
    for (_, y) in samples {
        if cmp_tower(y, ymin) == Ordering::Less {
            ymin = y;
        }
        if cmp_tower(y, ymax) == Ordering::Greater {
            ymax = y;
        }
    }
    let spread_ok = tower_le(&ymin.mul(&Tower::from_u64(min_spread.ceil() as u64)), ymax);
    if !spread_ok {
        return Err(Error::InsufficientSpread(format!(
            "y values do not span a factor of {min_spread}"
        )));
    }
    for n in 1..=max_n {
        let fits = samples.iter().all(|(x, y)| {
            let bound = y.pow(n).add(&Tower::from_u64(n));
            tower_le(x, &bound)
        });
        if fits {
            return Ok(Some(n));
        }
    }
    Ok(None)
}
