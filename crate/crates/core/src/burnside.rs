//! The Burnside ring of a finite group in the orbit basis `{[G/H]}`.
//!
//! Elements are integer vectors indexed by subgroup classes. The character
//! map sends an element to its fixed-point counts per class; it is an
//! injective ring map, so products and inverses go through characters.

use std::ops::{Add, Neg, Sub};

use thiserror::Error;

use crate::group::{FiniteGroup, MarksTable, Subgroup};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BurnsideError {
    #[error("element or character vector does not match the marks table")]
    IndexMismatch,
    #[error("character vector is not in the image of the Burnside ring (class {class}: {numerator}/{denominator})")]
    NotInBurnsideLattice {
        class: usize,
        numerator: i128,
        denominator: i64,
    },
    #[error("subgroup is not contained in the group")]
    SubgroupNotContained,
    #[error("integer overflow in Burnside arithmetic")]
    Overflow,
}

/// `Σ coeff[K]·[G/K]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BurnsideElement {
    coefficients: Vec<i64>,
    table_id: u64,
}

/// `ch_H` values indexed by class.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CharacterVector {
    pub values: Vec<i64>,
}

impl BurnsideElement {
    pub fn new(table: &MarksTable, coefficients: Vec<i64>) -> Result<Self, BurnsideError> {
        if coefficients.len() != table.len() {
            return Err(BurnsideError::IndexMismatch);
        }
        Ok(BurnsideElement {
            coefficients,
            table_id: table.id(),
        })
    }

    pub fn zero(table: &MarksTable) -> Self {
        BurnsideElement {
            coefficients: vec![0; table.len()],
            table_id: table.id(),
        }
    }

    /// `[G/K]` for class index `class`.
    pub fn orbit(table: &MarksTable, class: usize) -> Self {
        let mut e = Self::zero(table);
        e.coefficients[class] = 1;
        e
    }

    /// The multiplicative identity `[G/G]`.
    pub fn one(table: &MarksTable) -> Self {
        Self::orbit(table, table.whole_class())
    }

    pub fn coefficients(&self) -> &[i64] {
        &self.coefficients
    }

    pub fn table_id(&self) -> u64 {
        self.table_id
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.iter().all(|&c| c == 0)
    }

    pub fn scaled(&self, k: i64) -> Self {
        BurnsideElement {
            coefficients: self.coefficients.iter().map(|c| c * k).collect(),
            table_id: self.table_id,
        }
    }

    fn check(&self, table: &MarksTable) -> Result<(), BurnsideError> {
        if self.table_id != table.id() || self.coefficients.len() != table.len() {
            return Err(BurnsideError::IndexMismatch);
        }
        Ok(())
    }

    /// Renders as e.g. `[G/H6_3] - [G/H1_0]`.
    pub fn display(&self, table: &MarksTable) -> String {
        let mut out = String::new();
        for (i, &c) in self.coefficients.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let label = table.label(i);
            let mag = c.unsigned_abs();
            let body = if mag == 1 {
                format!("[G/{label}]")
            } else {
                format!("{mag}·[G/{label}]")
            };
            if out.is_empty() {
                if c < 0 {
                    out.push('-');
                }
            } else {
                out.push_str(if c < 0 { " - " } else { " + " });
            }
            out.push_str(&body);
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

fn zip_with(a: &BurnsideElement, b: &BurnsideElement, f: impl Fn(i64, i64) -> i64) -> BurnsideElement {
    assert_eq!(a.table_id, b.table_id, "Burnside elements over different groups");
    BurnsideElement {
        coefficients: a
            .coefficients
            .iter()
            .zip(&b.coefficients)
            .map(|(&x, &y)| f(x, y))
            .collect(),
        table_id: a.table_id,
    }
}

impl Add for &BurnsideElement {
    type Output = BurnsideElement;
    fn add(self, rhs: Self) -> BurnsideElement {
        zip_with(self, rhs, |x, y| x + y)
    }
}

impl Sub for &BurnsideElement {
    type Output = BurnsideElement;
    fn sub(self, rhs: Self) -> BurnsideElement {
        zip_with(self, rhs, |x, y| x - y)
    }
}

impl Neg for &BurnsideElement {
    type Output = BurnsideElement;
    fn neg(self) -> BurnsideElement {
        self.scaled(-1)
    }
}

/// `ch_H(e) = Σ_K e_K · marks[K][H]`.
pub fn ch_map(e: &BurnsideElement, table: &MarksTable) -> Result<CharacterVector, BurnsideError> {
    e.check(table)?;
    let n = table.len();
    let mut values = vec![0i64; n];
    for (k, &c) in e.coefficients.iter().enumerate() {
        if c == 0 {
            continue;
        }
        for (h, v) in values.iter_mut().enumerate() {
            let term = c
                .checked_mul(table.marks[k][h])
                .ok_or(BurnsideError::Overflow)?;
            *v = v.checked_add(term).ok_or(BurnsideError::Overflow)?;
        }
    }
    Ok(CharacterVector { values })
}

/// Solves `marksᵀ·x = c` by back-substitution from the largest class down.
pub fn from_characters(c: &CharacterVector, table: &MarksTable) -> Result<BurnsideElement, BurnsideError> {
    let n = table.len();
    if c.values.len() != n {
        return Err(BurnsideError::IndexMismatch);
    }
    let mut x = vec![0i64; n];
    for h in (0..n).rev() {
        let mut rest = c.values[h] as i128;
        for (k, &xk) in x.iter().enumerate().skip(h + 1) {
            rest -= xk as i128 * table.marks[k][h] as i128;
        }
        let d = table.marks[h][h];
        if rest % d as i128 != 0 {
            return Err(BurnsideError::NotInBurnsideLattice {
                class: h,
                numerator: rest,
                denominator: d,
            });
        }
        x[h] = i64::try_from(rest / d as i128).map_err(|_| BurnsideError::Overflow)?;
    }
    BurnsideElement::new(table, x)
}

/// Product via pointwise multiplication of characters.
pub fn ring_multiply(
    a: &BurnsideElement,
    b: &BurnsideElement,
    table: &MarksTable,
) -> Result<BurnsideElement, BurnsideError> {
    let ca = ch_map(a, table)?;
    let cb = ch_map(b, table)?;
    let values = ca
        .values
        .iter()
        .zip(&cb.values)
        .map(|(&x, &y)| x.checked_mul(y).ok_or(BurnsideError::Overflow))
        .collect::<Result<Vec<_>, _>>()?;
    let product = from_characters(&CharacterVector { values }, table);
    debug_assert!(
        !matches!(product, Err(BurnsideError::NotInBurnsideLattice { .. })),
        "product of Burnside elements left the lattice"
    );
    product
}

/// Induction `A(H) → A(G)`: `[H/K] ↦ [G/K]`.
///
/// `embedding[i]` is the index in `g` of element `i` of the subgroup's own
/// group; `sub_table` is the marks table of that group.
pub fn induce(
    g: &FiniteGroup,
    g_table: &MarksTable,
    embedding: &[usize],
    sub_table: &MarksTable,
    e: &BurnsideElement,
) -> Result<BurnsideElement, BurnsideError> {
    e.check(sub_table)?;
    let image = Subgroup::from_members(embedding.to_vec());
    if image.order() != embedding.len()
        || embedding.iter().any(|&i| i >= g.order())
        || !g.is_subgroup(image.members())
    {
        return Err(BurnsideError::SubgroupNotContained);
    }
    let mut out = BurnsideElement::zero(g_table);
    for (k, &c) in e.coefficients.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let members = sub_table.classes[k]
            .representative
            .members()
            .iter()
            .map(|&i| embedding[i])
            .collect();
        let class = g_table
            .class_of(&Subgroup::from_members(members))
            .ok_or(BurnsideError::SubgroupNotContained)?;
        out.coefficients[class] += c;
    }
    Ok(out)
}

/// A group together with its marks table.
#[derive(Debug, Clone)]
pub struct BurnsideRing {
    pub group: FiniteGroup,
    pub table: MarksTable,
}

impl BurnsideRing {
    pub fn new(group: FiniteGroup) -> Self {
        let table = MarksTable::of(&group);
        BurnsideRing { group, table }
    }

    /// The ring of a subgroup, with its embedding into `self.group`.
    pub fn of_subgroup(&self, h: &Subgroup) -> (BurnsideRing, Vec<usize>) {
        let (sub, embedding) = self.group.subgroup_as_group(h);
        (BurnsideRing::new(sub), embedding)
    }

    pub fn ch(&self, e: &BurnsideElement) -> Result<CharacterVector, BurnsideError> {
        ch_map(e, &self.table)
    }

    pub fn from_characters(&self, values: Vec<i64>) -> Result<BurnsideElement, BurnsideError> {
        from_characters(&CharacterVector { values }, &self.table)
    }

    pub fn multiply(&self, a: &BurnsideElement, b: &BurnsideElement) -> Result<BurnsideElement, BurnsideError> {
        ring_multiply(a, b, &self.table)
    }

    /// Induces an element of a subgroup's ring built by [`Self::of_subgroup`].
    pub fn induce_from(
        &self,
        sub: &BurnsideRing,
        embedding: &[usize],
        e: &BurnsideElement,
    ) -> Result<BurnsideElement, BurnsideError> {
        induce(&self.group, &self.table, embedding, &sub.table, e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{group_closure, Permutation};

    fn ring(gens: &[&str], n: usize) -> BurnsideRing {
        let gens: Vec<_> = gens
            .iter()
            .map(|s| Permutation::from_cycles(s, n).unwrap())
            .collect();
        BurnsideRing::new(group_closure(&gens).unwrap())
    }

    #[test]
    fn z2_characters() {
        let r = ring(&["(0 1)"], 2);
        let point = BurnsideElement::one(&r.table);
        let free = BurnsideElement::orbit(&r.table, 0);
        assert_eq!(r.ch(&point).unwrap().values, vec![1, 1]);
        assert_eq!(r.ch(&free).unwrap().values, vec![2, 0]);
        assert_eq!(r.ch(&(&point - &free)).unwrap().values, vec![-1, 1]);
    }

    #[test]
    fn z2_inverse_characters() {
        let r = ring(&["(0 1)"], 2);
        assert_eq!(r.from_characters(vec![1, 1]).unwrap(), BurnsideElement::one(&r.table));
        assert_eq!(r.from_characters(vec![-1, 1]).unwrap().coefficients(), &[-1, 1]);
        assert!(matches!(
            r.from_characters(vec![0, 1]),
            Err(BurnsideError::NotInBurnsideLattice { class: 0, numerator: -1, denominator: 2 })
        ));
    }

    #[test]
    fn products() {
        let r = ring(&["(0 1)"], 2);
        let free = BurnsideElement::orbit(&r.table, 0);
        assert_eq!(r.multiply(&free, &free).unwrap(), free.scaled(2));

        let s3 = ring(&["(0 1 2)", "(0 1)"], 3);
        let z2 = BurnsideElement::orbit(&s3.table, 1);
        let z3 = BurnsideElement::orbit(&s3.table, 2);
        assert_eq!(s3.multiply(&z2, &z3).unwrap(), BurnsideElement::orbit(&s3.table, 0));
        let x = BurnsideElement::new(&s3.table, vec![3, -2, 5, 7]).unwrap();
        assert_eq!(s3.multiply(&BurnsideElement::one(&s3.table), &x).unwrap(), x);
    }

    #[test]
    fn induction() {
        let z2 = ring(&["(0 1)"], 2);
        let (triv, emb) = z2.of_subgroup(&z2.group.trivial_subgroup());
        let point = BurnsideElement::one(&triv.table);
        assert_eq!(
            z2.induce_from(&triv, &emb, &point).unwrap(),
            BurnsideElement::orbit(&z2.table, 0)
        );

        let (same, emb) = z2.of_subgroup(&z2.group.whole());
        let x = BurnsideElement::new(&same.table, vec![4, -1]).unwrap();
        assert_eq!(z2.induce_from(&same, &emb, &x).unwrap().coefficients(), &[4, -1]);

        let s3 = ring(&["(0 1 2)", "(0 1)"], 3);
        let h = s3.table.classes[1].representative.clone();
        let (sub, emb) = s3.of_subgroup(&h);
        let free = BurnsideElement::orbit(&sub.table, 0);
        let top = BurnsideElement::one(&sub.table);
        assert_eq!(s3.induce_from(&sub, &emb, &free).unwrap(), BurnsideElement::orbit(&s3.table, 0));
        assert_eq!(s3.induce_from(&sub, &emb, &top).unwrap(), BurnsideElement::orbit(&s3.table, 1));
    }

    #[test]
    fn induction_rejects_bad_embedding() {
        let s3 = ring(&["(0 1 2)", "(0 1)"], 3);
        let z2 = ring(&["(0 1)"], 2);
        let e = BurnsideElement::one(&z2.table);
        assert_eq!(
            s3.induce_from(&z2, &[0, 2], &e),
            Err(BurnsideError::SubgroupNotContained)
        );
    }

    #[test]
    fn mismatched_tables() {
        let a = ring(&["(0 1)"], 2);
        let b = ring(&["(0 1 2)"], 3);
        let e = BurnsideElement::one(&a.table);
        assert_eq!(ch_map(&e, &b.table), Err(BurnsideError::IndexMismatch));
    }

    #[test]
    fn display() {
        let r = ring(&["(0 1)"], 2);
        let e = BurnsideElement::new(&r.table, vec![-1, 1]).unwrap();
        assert_eq!(e.display(&r.table), "[G/H2_1] - [G/H1_0]");
        assert_eq!(BurnsideElement::zero(&r.table).display(&r.table), "0");
        let e = BurnsideElement::new(&r.table, vec![3, 0]).unwrap();
        assert_eq!(e.display(&r.table), "3·[G/H1_0]");
    }
}
