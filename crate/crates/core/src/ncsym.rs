//! Exact linear combinations in the power-sum and elementary bases of NCSym,
//! their semi-symmetrized quotients, and the commutative image.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partitions::{ClassKey, IntegerPartition, Permutation, SetPartition};

pub type Coeff = BigRational;

pub fn int(v: i64) -> Coeff {
    BigRational::from_integer(BigInt::from(v))
}

fn parse_coeff(s: &str) -> Result<Coeff> {
    BigRational::from_str(s).map_err(|e| Error::parse(0, format!("bad coefficient {s:?}: {e}")))
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    P,
    E,
}

impl Basis {
    fn name(self) -> &'static str {
        match self {
            Basis::P => "p",
            Basis::E => "e",
        }
    }
}

fn add_into<K: Ord>(terms: &mut BTreeMap<K, Coeff>, key: K, c: Coeff) {
    if c.is_zero() {
        return;
    }
    // zeros are left behind and swept by `prune`
    *terms.entry(key).or_insert_with(Coeff::zero) += c;
}

fn prune<K: Ord + Clone>(terms: &mut BTreeMap<K, Coeff>) {
    terms.retain(|_, c| !c.is_zero());
}

/// An element of NCSym of homogeneous degree `n`, in one basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NCExpr {
    basis: Basis,
    n: usize,
    terms: BTreeMap<SetPartition, Coeff>,
}

impl NCExpr {
    pub fn zero(basis: Basis, n: usize) -> Self {
        NCExpr { basis, n, terms: BTreeMap::new() }
    }

    /// The single basis element `p_π` or `e_π`.
    pub fn basis_element(basis: Basis, pi: SetPartition) -> Self {
        let mut x = NCExpr::zero(basis, pi.n());
        x.terms.insert(pi, Coeff::one());
        x
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, pi: &SetPartition) -> Coeff {
        self.terms.get(pi).cloned().unwrap_or_else(Coeff::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&SetPartition, &Coeff)> {
        self.terms.iter()
    }

    /// Adds `c · b_π`. Panics if `π` lives on a different ground set.
    pub fn add_term(&mut self, pi: SetPartition, c: Coeff) {
        assert_eq!(pi.n(), self.n, "term {pi} has wrong degree");
        add_into(&mut self.terms, pi, c);
        prune(&mut self.terms);
    }

    pub fn add_expr(&mut self, other: &NCExpr) {
        assert_eq!(self.basis, other.basis, "basis mismatch");
        assert_eq!(self.n, other.n, "degree mismatch");
        for (pi, c) in &other.terms {
            add_into(&mut self.terms, pi.clone(), c.clone());
        }
        prune(&mut self.terms);
    }

    pub fn scaled(&self, c: &Coeff) -> NCExpr {
        let mut out = NCExpr::zero(self.basis, self.n);
        if !c.is_zero() {
            out.terms = self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect();
        }
        out
    }

    fn require(&self, basis: Basis) -> Result<()> {
        if self.basis == basis {
            Ok(())
        } else {
            Err(Error::WrongBasis { expected: basis.name() })
        }
    }

    /// `e_π = Σ_{σ ≤ π} μ(0̂, σ) p_σ`, extended linearly.
    pub fn e_to_p(&self) -> Result<NCExpr> {
        self.require(Basis::E)?;
        let mut out = NCExpr::zero(Basis::P, self.n);
        for (pi, c) in &self.terms {
            for sigma in pi.refinements() {
                let mu = int(sigma.mobius_hat0());
                add_into(&mut out.terms, sigma, c * mu);
            }
        }
        prune(&mut out.terms);
        Ok(out)
    }

    /// Inverse of [`NCExpr::e_to_p`] by triangular elimination: repeatedly take a
    /// support element with the fewest blocks, which can only come from `e_σ` itself.
    pub fn p_to_e(&self) -> Result<NCExpr> {
        self.require(Basis::P)?;
        let mut rest = self.terms.clone();
        let mut out = NCExpr::zero(Basis::E, self.n);
        while let Some(sigma) = rest.keys().min_by_key(|s| (s.num_blocks(), (*s).clone())).cloned() {
            let c = rest[&sigma].clone();
            let lead = c / int(sigma.mobius_hat0());
            for tau in sigma.refinements() {
                let delta = &lead * int(tau.mobius_hat0());
                add_into(&mut rest, tau, -delta);
            }
            prune(&mut rest);
            debug_assert!(!rest.contains_key(&sigma));
            add_into(&mut out.terms, sigma, lead);
        }
        prune(&mut out.terms);
        Ok(out)
    }

    /// `p_π ↑_j^n = p_{π ⊕_j n}`, where `self` has degree `n − 1`.
    pub fn induce_p(&self, j: usize) -> Result<NCExpr> {
        self.require(Basis::P)?;
        let n = self.n + 1;
        if j == 0 || j > n {
            return Err(Error::OutOfRange { index: j, max: n });
        }
        let mut out = NCExpr::zero(Basis::P, n);
        for (pi, c) in &self.terms {
            add_into(&mut out.terms, pi.oplus(j)?, c.clone());
        }
        Ok(out)
    }

    /// Sums e-coefficients over `∼` classes.
    pub fn semisymmetrize(&self) -> Result<SemiSymE> {
        self.require(Basis::E)?;
        let mut out = SemiSymE::zero(self.n);
        for (pi, c) in &self.terms {
            add_into(&mut out.terms, pi.class_key(), c.clone());
        }
        prune(&mut out.terms);
        Ok(out)
    }

    /// Lets the variables commute: `p_π ↦ p_{λ(π)}`, `e_π ↦ π! e_{λ(π)}`.
    pub fn rho(&self) -> CommExpr {
        let mut out = CommExpr::zero(self.basis, self.n);
        for (pi, c) in &self.terms {
            let c = match self.basis {
                Basis::P => c.clone(),
                Basis::E => c * Coeff::from_integer(BigInt::from(pi.factorial())),
            };
            add_into(&mut out.terms, pi.lambda(), c);
        }
        prune(&mut out.terms);
        out
    }

    /// `δ ∘ x`: the variable in position `i` moves to position `δ(i)`, which on
    /// either basis sends `b_π` to `b_{δ(π)}`.
    pub fn act_perm(&self, delta: &Permutation) -> Result<NCExpr> {
        let mut out = NCExpr::zero(self.basis, self.n);
        for (pi, c) in &self.terms {
            add_into(&mut out.terms, pi.act(delta)?, c.clone());
        }
        Ok(out)
    }

    /// Product in NCSym for a multiplicative basis: `b_π b_σ = b_{π|σ}`.
    pub fn concat_product(&self, other: &NCExpr) -> Result<NCExpr> {
        if self.basis != other.basis {
            return Err(Error::WrongBasis { expected: self.basis.name() });
        }
        let mut out = NCExpr::zero(self.basis, self.n + other.n);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                add_into(&mut out.terms, a.shift_concat(b), ca * cb);
            }
        }
        prune(&mut out.terms);
        Ok(out)
    }
}

impl fmt::Display for NCExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (pi, c)) in self.terms.iter().enumerate() {
            let sign = if c.is_negative() {
                "-"
            } else if i > 0 {
                "+"
            } else {
                ""
            };
            if i > 0 {
                f.write_str(" ")?;
            }
            let mag = c.abs();
            if mag.is_one() {
                write!(f, "{sign}{}[{pi}]", self.basis.name())?;
            } else {
                write!(f, "{sign}{mag}*{}[{pi}]", self.basis.name())?;
            }
        }
        Ok(())
    }
}

/// `e_π ↑_j^n ≡_n (1/b)(e_{π/n} − e_{π ⊕_j n})` for `j < n`, where `b` is the size of
/// the block of `π` holding `j`. (For `j = n − 1` that is the block of `n − 1`; for
/// other `j` the exact p-basis route disagrees with using `n − 1`, e.g. `π = 12/3`, `j = 1`.)
pub fn induce_e_class(pi: &SetPartition, j: usize) -> Result<SemiSymE> {
    let n = pi.n() + 1;
    if j == 0 || j >= n {
        return Err(Error::OutOfRange { index: j, max: n - 1 });
    }
    let b = pi.block_size_of(j) as i64;
    let weight = Coeff::new(BigInt::one(), BigInt::from(b));
    let mut out = SemiSymE::zero(n);
    add_into(&mut out.terms, pi.oplus(n)?.class_key(), weight.clone());
    add_into(&mut out.terms, pi.oplus(j)?.class_key(), -weight);
    prune(&mut out.terms);
    Ok(out)
}

/// A combination of `∼` classes of e-basis elements of degree `n`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SemiSymE {
    n: usize,
    terms: BTreeMap<ClassKey, Coeff>,
}

impl SemiSymE {
    pub fn zero(n: usize) -> Self {
        SemiSymE { n, terms: BTreeMap::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeff(&self, key: &ClassKey) -> Coeff {
        self.terms.get(key).cloned().unwrap_or_else(Coeff::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ClassKey, &Coeff)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, key: ClassKey, c: Coeff) {
        assert_eq!(key.n(), self.n, "class {key} has wrong degree");
        add_into(&mut self.terms, key, c);
        prune(&mut self.terms);
    }

    pub fn add_expr(&mut self, other: &SemiSymE) {
        assert_eq!(self.n, other.n, "degree mismatch");
        for (k, c) in &other.terms {
            add_into(&mut self.terms, k.clone(), c.clone());
        }
        prune(&mut self.terms);
    }

    pub fn scaled(&self, c: &Coeff) -> SemiSymE {
        let mut out = SemiSymE::zero(self.n);
        if !c.is_zero() {
            out.terms = self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect();
        }
        out
    }

    /// Every class coefficient is `≥ 0`.
    pub fn is_nonnegative(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }

    /// `ρ` factors through classes: each class contributes `c · λ! · e_λ`.
    pub fn rho(&self) -> CommExpr {
        let mut out = CommExpr::zero(Basis::E, self.n);
        for (key, c) in &self.terms {
            let weight = Coeff::from_integer(BigInt::from(key.lambda.factorial()));
            add_into(&mut out.terms, key.lambda.clone(), c * weight);
        }
        prune(&mut out.terms);
        out
    }
}

/// Free-function spelling of [`SemiSymE::rho`].
pub fn rho_semisym(x: &SemiSymE) -> CommExpr {
    x.rho()
}

impl fmt::Display for SemiSymE {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (key, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{c}*e{key}")?;
        }
        Ok(())
    }
}

/// An element of `Λ` (commuting variables) of degree `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommExpr {
    basis: Basis,
    n: usize,
    terms: BTreeMap<IntegerPartition, Coeff>,
}

impl CommExpr {
    pub fn zero(basis: Basis, n: usize) -> Self {
        CommExpr { basis, n, terms: BTreeMap::new() }
    }

    pub fn basis_element(basis: Basis, lambda: IntegerPartition) -> Self {
        let mut x = CommExpr::zero(basis, lambda.size());
        x.terms.insert(lambda, Coeff::one());
        x
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coeff(&self, lambda: &IntegerPartition) -> Coeff {
        self.terms.get(lambda).cloned().unwrap_or_else(Coeff::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&IntegerPartition, &Coeff)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, lambda: IntegerPartition, c: Coeff) {
        assert_eq!(lambda.size(), self.n, "term {lambda} has wrong degree");
        add_into(&mut self.terms, lambda, c);
        prune(&mut self.terms);
    }

    pub fn is_nonnegative(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }

    /// Product in a multiplicative basis: `b_λ b_μ = b_{λ ∪ μ}`.
    pub fn product(&self, other: &CommExpr) -> CommExpr {
        assert_eq!(self.basis, other.basis, "basis mismatch");
        let mut out = CommExpr::zero(self.basis, self.n + other.n);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                add_into(&mut out.terms, a.union(b), ca * cb);
            }
        }
        prune(&mut out.terms);
        out
    }

    /// Power sums to elementary functions via Newton's identities
    /// `p_k = Σ_{i<k} (−1)^{i−1} e_i p_{k−i} + (−1)^{k−1} k e_k`, multiplied out per part.
    pub fn p_to_e(&self) -> Result<CommExpr> {
        if self.basis != Basis::P {
            return Err(Error::WrongBasis { expected: "p" });
        }
        let max_part = self.terms.keys().flat_map(|l| l.parts().iter().copied()).max().unwrap_or(0);
        let mut power: Vec<CommExpr> = vec![CommExpr::basis_element(Basis::E, IntegerPartition::from_parts(vec![]))];
        for k in 1..=max_part {
            let mut pk = CommExpr::zero(Basis::E, k);
            for i in 1..k {
                let ei = CommExpr::basis_element(Basis::E, IntegerPartition::from_parts(vec![i]));
                let term = ei.product(&power[k - i]);
                let sign = if i % 2 == 1 { 1 } else { -1 };
                for (l, c) in term.terms {
                    add_into(&mut pk.terms, l, c * int(sign));
                }
            }
            let sign = if k % 2 == 1 { 1 } else { -1 };
            add_into(&mut pk.terms, IntegerPartition::from_parts(vec![k]), int(sign * k as i64));
            prune(&mut pk.terms);
            power.push(pk);
        }
        let mut out = CommExpr::zero(Basis::E, self.n);
        for (lambda, c) in &self.terms {
            let mut prod = power[0].clone();
            for &part in lambda.parts() {
                prod = prod.product(&power[part]);
            }
            for (l, v) in prod.terms {
                add_into(&mut out.terms, l, v * c);
            }
        }
        prune(&mut out.terms);
        Ok(out)
    }

    /// Evaluates at `x_1 = … = x_k = 1`, all other variables 0:
    /// `e_λ ↦ ∏ C(k, λᵢ)`, `p_λ ↦ k^{ℓ(λ)}`.
    pub fn specialize_ones(&self, k: u64) -> Coeff {
        let mut total = Coeff::zero();
        for (lambda, c) in &self.terms {
            let value: BigInt = match self.basis {
                Basis::E => lambda.parts().iter().map(|&p| binomial(k, p as u64)).product(),
                Basis::P => BigInt::from(k).pow(lambda.len() as u32),
            };
            total += c * Coeff::from_integer(value);
        }
        total
    }
}

/// Free-function spelling of [`CommExpr::p_to_e`].
pub fn comm_p_to_e(x: &CommExpr) -> Result<CommExpr> {
    x.p_to_e()
}

fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

impl fmt::Display for CommExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (lambda, c)) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{c}*{}[{lambda}]", self.basis.name())?;
        }
        Ok(())
    }
}

// Wire formats. Coefficients travel as exact "num/den" strings.

#[derive(Serialize, Deserialize)]
struct NCTermWire {
    pi: String,
    coeff: String,
}

#[derive(Serialize, Deserialize)]
struct NCExprWire {
    basis: Basis,
    n: usize,
    terms: Vec<NCTermWire>,
}

impl Serialize for NCExpr {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        NCExprWire {
            basis: self.basis,
            n: self.n,
            terms: self.terms.iter().map(|(pi, c)| NCTermWire { pi: pi.to_string(), coeff: c.to_string() }).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for NCExpr {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let wire = NCExprWire::deserialize(d)?;
        NCExpr::try_from(wire).map_err(serde::de::Error::custom)
    }
}

impl TryFrom<NCExprWire> for NCExpr {
    type Error = Error;

    fn try_from(wire: NCExprWire) -> Result<Self> {
        let mut out = NCExpr::zero(wire.basis, wire.n);
        for t in wire.terms {
            let pi: SetPartition = t.pi.parse()?;
            if pi.n() != wire.n {
                return Err(Error::GroundMismatch(pi.n(), wire.n));
            }
            add_into(&mut out.terms, pi, parse_coeff(&t.coeff)?);
        }
        prune(&mut out.terms);
        Ok(out)
    }
}

impl NCExpr {
    pub fn from_json(s: &str) -> Result<NCExpr> {
        let wire: NCExprWire = serde_json::from_str(s).map_err(|e| Error::parse(e.column(), e.to_string()))?;
        NCExpr::try_from(wire)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }
}

#[derive(Serialize, Deserialize)]
struct ClassTermWire {
    lambda: Vec<usize>,
    last: usize,
    coeff: String,
}

#[derive(Serialize, Deserialize)]
struct SemiSymWire {
    n: usize,
    terms: Vec<ClassTermWire>,
}

impl Serialize for SemiSymE {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SemiSymWire {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(k, c)| ClassTermWire { lambda: k.lambda.parts().to_vec(), last: k.last, coeff: c.to_string() })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SemiSymE {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let wire = SemiSymWire::deserialize(d)?;
        SemiSymE::try_from(wire).map_err(serde::de::Error::custom)
    }
}

impl TryFrom<SemiSymWire> for SemiSymE {
    type Error = Error;

    fn try_from(wire: SemiSymWire) -> Result<Self> {
        let mut out = SemiSymE::zero(wire.n);
        for t in wire.terms {
            if t.lambda.contains(&0) {
                return Err(Error::parse(0, "zero part"));
            }
            let lambda = IntegerPartition::from_parts(t.lambda);
            if lambda.size() != wire.n {
                return Err(Error::GroundMismatch(lambda.size(), wire.n));
            }
            let key = ClassKey::new(lambda, t.last)?;
            add_into(&mut out.terms, key, parse_coeff(&t.coeff)?);
        }
        prune(&mut out.terms);
        Ok(out)
    }
}

#[derive(Serialize)]
struct CommTermWire {
    lambda: Vec<usize>,
    coeff: String,
}

#[derive(Serialize)]
struct CommWire {
    basis: Basis,
    n: usize,
    terms: Vec<CommTermWire>,
}

impl Serialize for CommExpr {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CommWire {
            basis: self.basis,
            n: self.n,
            terms: self
                .terms
                .iter()
                .rev()
                .map(|(l, c)| CommTermWire { lambda: l.parts().to_vec(), coeff: c.to_string() })
                .collect(),
        }
        .serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::enumerate_partitions;
    use std::collections::HashMap;

    fn sp(s: &str) -> SetPartition {
        s.parse().unwrap()
    }

    fn q(num: i64, den: i64) -> Coeff {
        Coeff::new(BigInt::from(num), BigInt::from(den))
    }

    fn expr(basis: Basis, n: usize, terms: &[(&str, Coeff)]) -> NCExpr {
        let mut x = NCExpr::zero(basis, n);
        for (p, c) in terms {
            x.add_term(sp(p), c.clone());
        }
        x
    }

    fn ikey(lam: Vec<usize>, last: usize) -> ClassKey {
        ClassKey::new(IntegerPartition::from_parts(lam), last).unwrap()
    }

    // Word-level oracle: a degree-n element restricted to `k` variables, as a map
    // from words to integer coefficients.
    type Words = HashMap<Vec<u8>, i64>;

    fn words(n: usize, k: u8) -> Vec<Vec<u8>> {
        let mut out = vec![vec![]];
        for _ in 0..n {
            out = out
                .into_iter()
                .flat_map(|w| {
                    (0..k).map(move |v| {
                        let mut w = w.clone();
                        w.push(v);
                        w
                    })
                })
                .collect();
        }
        out
    }

    fn expand_word(basis: Basis, pi: &SetPartition, k: u8) -> Words {
        let mut out = Words::new();
        for w in words(pi.n(), k) {
            let ok = (0..pi.n()).all(|a| {
                (a + 1..pi.n()).all(|b| {
                    let same = pi.block_index(a + 1) == pi.block_index(b + 1);
                    match basis {
                        Basis::P => !same || w[a] == w[b],
                        Basis::E => !same || w[a] != w[b],
                    }
                })
            });
            if ok {
                out.insert(w, 1);
            }
        }
        out
    }

    fn expand_expr(x: &NCExpr, k: u8) -> Words {
        let mut out = Words::new();
        for (pi, c) in x.terms() {
            assert!(c.is_integer());
            let c: i64 = c.to_integer().try_into().unwrap();
            for (w, v) in expand_word(x.basis(), pi, k) {
                *out.entry(w).or_default() += c * v;
            }
        }
        out.retain(|_, v| *v != 0);
        out
    }

    #[test]
    fn e_to_p_examples() {
        let e12 = NCExpr::basis_element(Basis::E, sp("1/2"));
        assert_eq!(e12.e_to_p().unwrap(), NCExpr::basis_element(Basis::P, sp("1/2")));
        let e = NCExpr::basis_element(Basis::E, sp("12"));
        assert_eq!(e.e_to_p().unwrap(), expr(Basis::P, 2, &[("1/2", int(1)), ("12", int(-1))]));
        let e = NCExpr::basis_element(Basis::E, sp("123"));
        let want = expr(
            Basis::P,
            3,
            &[("1/2/3", int(1)), ("12/3", int(-1)), ("13/2", int(-1)), ("1/23", int(-1)), ("123", int(2))],
        );
        assert_eq!(e.e_to_p().unwrap(), want);
        assert!(e.e_to_p().unwrap().e_to_p().is_err());
    }

    #[test]
    fn e_to_p_matches_word_expansion() {
        for n in 1..=4 {
            for pi in enumerate_partitions(n) {
                let e = NCExpr::basis_element(Basis::E, pi.clone());
                let k = n as u8;
                assert_eq!(expand_expr(&e, k), expand_expr(&e.e_to_p().unwrap(), k), "e_{pi}");
            }
        }
    }

    #[test]
    fn p_to_e_examples() {
        let p = NCExpr::basis_element(Basis::P, sp("1/2"));
        assert_eq!(p.p_to_e().unwrap(), NCExpr::basis_element(Basis::E, sp("1/2")));
        let p = NCExpr::basis_element(Basis::P, sp("12"));
        assert_eq!(p.p_to_e().unwrap(), expr(Basis::E, 2, &[("1/2", int(1)), ("12", int(-1))]));
    }

    #[test]
    fn basis_change_round_trip_all_basis_elements() {
        for n in 1..=5 {
            for pi in enumerate_partitions(n) {
                let p = NCExpr::basis_element(Basis::P, pi.clone());
                assert_eq!(p.p_to_e().unwrap().e_to_p().unwrap(), p);
                let e = NCExpr::basis_element(Basis::E, pi);
                assert_eq!(e.e_to_p().unwrap().p_to_e().unwrap(), e);
            }
        }
    }

    #[test]
    fn induce_p_examples() {
        let p12 = NCExpr::basis_element(Basis::P, sp("12"));
        assert_eq!(p12.induce_p(1).unwrap(), NCExpr::basis_element(Basis::P, sp("123")));
        assert_eq!(p12.induce_p(3).unwrap(), NCExpr::basis_element(Basis::P, sp("12/3")));
        let p = NCExpr::basis_element(Basis::P, sp("1/2"));
        assert_eq!(p.induce_p(2).unwrap(), NCExpr::basis_element(Basis::P, sp("1/23")));
        assert!(p.induce_p(4).is_err());
    }

    #[test]
    fn induce_e_class_examples() {
        let got = induce_e_class(&sp("12"), 1).unwrap();
        let mut want = SemiSymE::zero(3);
        want.add_term(sp("12/3").class_key(), q(1, 2));
        want.add_term(sp("123").class_key(), q(-1, 2));
        assert_eq!(got, want);

        let got = induce_e_class(&sp("1/2"), 2).unwrap();
        let mut want = SemiSymE::zero(3);
        want.add_term(sp("1/2/3").class_key(), int(1));
        want.add_term(sp("1/23").class_key(), int(-1));
        assert_eq!(got, want);
        assert!(induce_e_class(&sp("1/2"), 3).is_err());
    }

    #[test]
    fn induce_e_class_matches_exact_p_route() {
        for n in 2..=5 {
            for pi in enumerate_partitions(n - 1) {
                let e = NCExpr::basis_element(Basis::E, pi.clone());
                for j in 1..n {
                    let exact = e.e_to_p().unwrap().induce_p(j).unwrap().p_to_e().unwrap();
                    assert_eq!(exact.semisymmetrize().unwrap(), induce_e_class(&pi, j).unwrap(), "{pi} j={j}");
                }
            }
        }
    }

    #[test]
    fn semisymmetrize_examples() {
        let y = expr(Basis::E, 3, &[("12/3", q(1, 2)), ("13/2", q(-1, 2)), ("1/23", q(1, 2)), ("123", q(1, 2))]);
        let got = y.semisymmetrize().unwrap();
        let mut want = SemiSymE::zero(3);
        want.add_term(sp("12/3").class_key(), q(1, 2));
        want.add_term(sp("123").class_key(), q(1, 2));
        assert_eq!(got, want);

        let e = NCExpr::basis_element(Basis::E, sp("1/2/3"));
        let mut want = SemiSymE::zero(3);
        want.add_term(ikey(vec![1, 1, 1], 1), int(1));
        assert_eq!(e.semisymmetrize().unwrap(), want);
        assert!(NCExpr::zero(Basis::E, 3).semisymmetrize().unwrap().is_zero());
    }

    #[test]
    fn rho_examples() {
        let ip = |v: Vec<usize>| IntegerPartition::from_parts(v);
        let p = NCExpr::basis_element(Basis::P, sp("13/2"));
        assert_eq!(p.rho(), CommExpr::basis_element(Basis::P, ip(vec![2, 1])));
        let e = NCExpr::basis_element(Basis::E, sp("123"));
        let mut want = CommExpr::zero(Basis::E, 3);
        want.add_term(ip(vec![3]), int(6));
        assert_eq!(e.rho(), want);

        let y = expr(Basis::E, 3, &[("12/3", q(1, 2)), ("13/2", q(-1, 2)), ("1/23", q(1, 2)), ("123", q(1, 2))]);
        let mut want = CommExpr::zero(Basis::E, 3);
        want.add_term(ip(vec![2, 1]), int(1));
        want.add_term(ip(vec![3]), int(3));
        assert_eq!(y.rho(), want);
        assert_eq!(rho_semisym(&y.semisymmetrize().unwrap()), want);

        let mut cls = SemiSymE::zero(2);
        cls.add_term(ikey(vec![1, 1], 1), int(1));
        assert_eq!(cls.rho(), CommExpr::basis_element(Basis::E, ip(vec![1, 1])));
    }

    #[test]
    fn rho_factors_through_classes() {
        for n in 1..=5 {
            let mut x = NCExpr::zero(Basis::E, n);
            for (i, pi) in enumerate_partitions(n).enumerate() {
                x.add_term(pi, q((i as i64 * 7) % 11 - 5, 1 + (i as i64 % 3)));
            }
            assert_eq!(x.semisymmetrize().unwrap().rho(), x.rho());
        }
    }

    #[test]
    fn newton_examples() {
        let ip = |v: Vec<usize>| IntegerPartition::from_parts(v);
        let p1 = CommExpr::basis_element(Basis::P, ip(vec![1]));
        assert_eq!(p1.p_to_e().unwrap(), CommExpr::basis_element(Basis::E, ip(vec![1])));
        let p2 = CommExpr::basis_element(Basis::P, ip(vec![2]));
        let mut want = CommExpr::zero(Basis::E, 2);
        want.add_term(ip(vec![1, 1]), int(1));
        want.add_term(ip(vec![2]), int(-2));
        assert_eq!(p2.p_to_e().unwrap(), want);
        let p21 = CommExpr::basis_element(Basis::P, ip(vec![2, 1]));
        let mut want = CommExpr::zero(Basis::E, 3);
        want.add_term(ip(vec![1, 1, 1]), int(1));
        want.add_term(ip(vec![2, 1]), int(-2));
        assert_eq!(comm_p_to_e(&p21).unwrap(), want);
    }

    #[test]
    fn newton_preserves_specialization() {
        for n in 1..=6 {
            for pi in enumerate_partitions(n) {
                let x = CommExpr::basis_element(Basis::P, pi.lambda());
                let y = x.p_to_e().unwrap();
                for k in 0..=6 {
                    assert_eq!(x.specialize_ones(k), y.specialize_ones(k), "p_{} at k={k}", pi.lambda());
                }
            }
        }
    }

    #[test]
    fn multiplicativity_of_e() {
        for n1 in 1..=3 {
            for n2 in 1..=(6 - n1).min(3) {
                for a in enumerate_partitions(n1) {
                    for b in enumerate_partitions(n2) {
                        let lhs = NCExpr::basis_element(Basis::E, a.shift_concat(&b)).e_to_p().unwrap();
                        let pa = NCExpr::basis_element(Basis::E, a.clone()).e_to_p().unwrap();
                        let pb = NCExpr::basis_element(Basis::E, b.clone()).e_to_p().unwrap();
                        assert_eq!(lhs, pa.concat_product(&pb).unwrap());
                    }
                }
            }
        }
    }

    /// Position `i` of a word moves to position `δ(i)`.
    fn act_word(delta: &Permutation, w: &[u8]) -> Vec<u8> {
        let mut out = vec![0; w.len()];
        for (i, &v) in w.iter().enumerate() {
            out[delta.apply(i + 1) - 1] = v;
        }
        out
    }

    #[test]
    fn act_orientation_pinned_by_monomials() {
        let delta: Permutation = "213".parse().unwrap();
        assert_eq!(act_word(&delta, &[1, 2, 1]), vec![2, 1, 1]);
        for n in 1..=4 {
            for delta in Permutation::all(n) {
                for pi in enumerate_partitions(n) {
                    for basis in [Basis::P, Basis::E] {
                        let x = NCExpr::basis_element(basis, pi.clone());
                        let moved: Words =
                            expand_expr(&x, n as u8).into_iter().map(|(w, c)| (act_word(&delta, &w), c)).collect();
                        assert_eq!(moved, expand_expr(&x.act_perm(&delta).unwrap(), n as u8));
                    }
                }
            }
        }
        let id = Permutation::identity(3);
        let x = expr(Basis::P, 3, &[("12/3", int(2)), ("123", int(-1))]);
        assert_eq!(x.act_perm(&id).unwrap(), x);
    }

    #[test]
    fn json_round_trip_and_rejects() {
        let y = expr(Basis::E, 3, &[("12/3", q(1, 2)), ("13/2", q(-1, 2))]);
        let s = y.to_json();
        assert_eq!(s, r#"{"basis":"e","n":3,"terms":[{"pi":"12/3","coeff":"1/2"},{"pi":"13/2","coeff":"-1/2"}]}"#);
        assert_eq!(NCExpr::from_json(&s).unwrap(), y);
        assert!(NCExpr::from_json(r#"{"basis":"e","n":2,"terms":[{"pi":"12/3","coeff":"1"}]}"#).is_err());
        assert!(NCExpr::from_json(r#"{"basis":"e","n":2,"terms":[{"pi":"12","coeff":"1/0"}]}"#).is_err());
        assert!(NCExpr::from_json(r#"{"basis":"x","n":2,"terms":[]}"#).is_err());

        let s = y.semisymmetrize().unwrap();
        let js = serde_json::to_string(&s).unwrap();
        assert_eq!(
            js,
            r#"{"n":3,"terms":[{"lambda":[2,1],"last":1,"coeff":"1/2"},{"lambda":[2,1],"last":2,"coeff":"-1/2"}]}"#
        );
        assert_eq!(serde_json::from_str::<SemiSymE>(&js).unwrap(), s);
        assert!(serde_json::from_str::<SemiSymE>(r#"{"n":3,"terms":[{"lambda":[2,1],"last":3,"coeff":"1"}]}"#).is_err());
    }
}
