//! Exact arithmetic in finite permutation groups: closure from generators,
//! the subgroup lattice up to conjugacy, normalizers and the table of marks.
//!
//! Elements are indexed canonically: breadth-first from the identity over the
//! generators, each level sorted lexicographically by image array. Subgroups
//! are sorted member-index lists, ordered by `(order, members)`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::hash::{Hash, Hasher};

use thiserror::Error;

/// Default cap on the closure size.
pub const DEFAULT_CAP: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("closure exceeds the cap of {cap} elements")]
    ClosureExceedsCap { cap: usize },
    #[error("not a permutation: {0}")]
    NotAPermutation(String),
    #[error("cycle notation parse error at position {pos}: {msg}")]
    CycleParse { pos: usize, msg: String },
}

/// A permutation of `{0, .., n-1}` stored as its image array.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation((0..degree).collect())
    }

    /// Validates an image array.
    pub fn from_images(images: Vec<usize>) -> Result<Self, GroupError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(GroupError::NotAPermutation(format!("{images:?}")));
            }
            seen[i] = true;
        }
        Ok(Permutation(images))
    }

    /// Parses cycle notation such as `"(0 1 2)(3 4)"`; `"()"` or `""` is the
    /// identity. Points missing from the cycles are fixed; the degree is
    /// `max(degree, largest point + 1)`.
    pub fn from_cycles(text: &str, degree: usize) -> Result<Self, GroupError> {
        let mut cycles: Vec<Vec<usize>> = Vec::new();
        let mut current: Option<Vec<usize>> = None;
        let mut number: Option<(usize, usize)> = None;
        let bytes = text.as_bytes();
        let err = |pos: usize, msg: &str| GroupError::CycleParse {
            pos,
            msg: msg.to_string(),
        };
        for (pos, &b) in bytes.iter().enumerate() {
            let c = b as char;
            if c.is_ascii_digit() {
                if current.is_none() {
                    return Err(err(pos, "digit outside of a cycle"));
                }
                let d = (b - b'0') as usize;
                number = Some(match number {
                    Some((start, v)) => (start, v * 10 + d),
                    None => (pos, d),
                });
                continue;
            }
            if let Some((_, v)) = number.take() {
                current.as_mut().expect("inside cycle").push(v);
            }
            match c {
                '(' => {
                    if current.is_some() {
                        return Err(err(pos, "nested '('"));
                    }
                    current = Some(Vec::new());
                }
                ')' => match current.take() {
                    Some(cy) => cycles.push(cy),
                    None => return Err(err(pos, "unmatched ')'")),
                },
                ' ' | ',' | '\t' => {}
                _ => return Err(err(pos, &format!("unexpected character '{c}'"))),
            }
        }
        if current.is_some() || number.is_some() {
            return Err(err(bytes.len(), "unterminated cycle"));
        }
        let largest = cycles.iter().flatten().copied().max().map_or(0, |m| m + 1);
        let n = degree.max(largest);
        let mut images: Vec<usize> = (0..n).collect();
        let mut touched = vec![false; n];
        for cy in &cycles {
            for (k, &p) in cy.iter().enumerate() {
                if touched[p] {
                    return Err(GroupError::NotAPermutation(format!(
                        "point {p} repeated in {text:?}"
                    )));
                }
                touched[p] = true;
                images[p] = cy[(k + 1) % cy.len()];
            }
        }
        Permutation::from_images(images)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    /// Extends with fixed points up to `degree`.
    pub fn padded(&self, degree: usize) -> Self {
        let mut v = self.0.clone();
        v.extend(v.len()..degree);
        Permutation(v)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation(other.0.iter().map(|&i| self.0[i]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j] = i;
        }
        Permutation(inv)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut seen = vec![false; self.0.len()];
        let mut any = false;
        for start in 0..self.0.len() {
            if seen[start] || self.0[start] == start {
                continue;
            }
            any = true;
            write!(f, "(")?;
            let mut p = start;
            let mut first = true;
            while !seen[p] {
                seen[p] = true;
                if !first {
                    write!(f, " ")?;
                }
                write!(f, "{p}")?;
                first = false;
                p = self.0[p];
            }
            write!(f, ")")?;
        }
        if !any {
            write!(f, "()")?;
        }
        Ok(())
    }
}

/// A finite group given by its permutation elements and Cayley table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    elements: Vec<Permutation>,
    mul_table: Vec<Vec<usize>>,
    inverse_table: Vec<usize>,
    generators: Vec<Permutation>,
    /// Breadth-first word: element = parent ∘ generator. `None` for the identity.
    words: Vec<Option<(usize, usize)>>,
}

/// Index of the identity under the canonical ordering.
pub const IDENTITY: usize = 0;

/// Closes `generators` into a group with the default cap.
pub fn group_closure(generators: &[Permutation]) -> Result<FiniteGroup, GroupError> {
    FiniteGroup::closure(generators, DEFAULT_CAP)
}

impl FiniteGroup {
    pub fn closure(generators: &[Permutation], cap: usize) -> Result<Self, GroupError> {
        let degree = generators.first().map_or(0, Permutation::degree);
        for g in generators {
            if g.degree() != degree {
                return Err(GroupError::NotAPermutation(format!(
                    "generator {g} acts on {} points, expected {degree}",
                    g.degree()
                )));
            }
            // Re-validate in case the caller built the image array by hand.
            Permutation::from_images(g.0.clone())?;
        }
        let identity = Permutation::identity(degree);
        let mut elements = vec![identity.clone()];
        let mut words = vec![None];
        let mut index: HashMap<Permutation, usize> = HashMap::from([(identity, 0)]);
        let mut frontier = vec![0usize];
        while !frontier.is_empty() {
            let mut level: HashMap<Permutation, (usize, usize)> = HashMap::new();
            for &e in &frontier {
                for (j, gen) in generators.iter().enumerate() {
                    let p = elements[e].compose(gen);
                    if !index.contains_key(&p) {
                        level.entry(p).or_insert((e, j));
                    }
                }
            }
            let mut level: Vec<_> = level.into_iter().collect();
            level.sort_by(|a, b| a.0.cmp(&b.0));
            if elements.len() + level.len() > cap {
                return Err(GroupError::ClosureExceedsCap { cap });
            }
            frontier.clear();
            for (p, word) in level {
                let i = elements.len();
                index.insert(p.clone(), i);
                elements.push(p);
                words.push(Some(word));
                frontier.push(i);
            }
        }
        let order = elements.len();
        let mul_table: Vec<Vec<usize>> = elements
            .iter()
            .map(|a| elements.iter().map(|b| index[&a.compose(b)]).collect())
            .collect();
        let inverse_table = elements.iter().map(|a| index[&a.inverse()]).collect();
        debug_assert!(mul_table.iter().flatten().all(|&k| k < order));
        Ok(FiniteGroup {
            elements,
            mul_table,
            inverse_table,
            generators: generators.to_vec(),
            words,
        })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    /// Breadth-first word of element `i`: `(parent, generator)` with
    /// `element(i) = element(parent) ∘ generator`.
    pub fn word(&self, i: usize) -> Option<(usize, usize)> {
        self.words[i]
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul_table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse_table[a]
    }

    pub fn mul_table(&self) -> &[Vec<usize>] {
        &self.mul_table
    }

    pub fn index_of(&self, p: &Permutation) -> Option<usize> {
        self.elements.iter().position(|e| e == p)
    }

    /// `g h g⁻¹`.
    pub fn conjugate(&self, g: usize, h: usize) -> usize {
        self.mul(self.mul(g, h), self.inv(g))
    }

    /// The subgroup generated by the given element indices.
    pub fn generate(&self, gens: &[usize]) -> Subgroup {
        let mut inside = vec![false; self.order()];
        inside[IDENTITY] = true;
        let mut members = vec![IDENTITY];
        let mut k = 0;
        while k < members.len() {
            let e = members[k];
            for &g in gens {
                let p = self.mul(e, g);
                if !inside[p] {
                    inside[p] = true;
                    members.push(p);
                }
            }
            k += 1;
        }
        members.sort_unstable();
        Subgroup { members }
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup {
            members: vec![IDENTITY],
        }
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup {
            members: (0..self.order()).collect(),
        }
    }

    /// Validates a member list as a subgroup: identity, closure, inverses,
    /// and Lagrange.
    pub fn is_subgroup(&self, members: &[usize]) -> bool {
        let mut inside = vec![false; self.order()];
        for &m in members {
            if m >= self.order() {
                return false;
            }
            inside[m] = true;
        }
        inside[IDENTITY]
            && members.iter().all(|&a| inside[self.inv(a)])
            && members
                .iter()
                .all(|&a| members.iter().all(|&b| inside[self.mul(a, b)]))
            && self.order().is_multiple_of(members.len())
    }

    pub fn conjugate_subgroup(&self, g: usize, h: &Subgroup) -> Subgroup {
        let mut members: Vec<usize> = h.members.iter().map(|&x| self.conjugate(g, x)).collect();
        members.sort_unstable();
        Subgroup { members }
    }

    pub fn normalizer(&self, h: &Subgroup) -> Subgroup {
        let members = (0..self.order())
            .filter(|&g| self.conjugate_subgroup(g, h) == *h)
            .collect();
        Subgroup { members }
    }

    /// Builds `h` as a group in its own right. Returns the group and the
    /// embedding from its element indices to indices of `self`.
    pub fn subgroup_as_group(&self, h: &Subgroup) -> (FiniteGroup, Vec<usize>) {
        let gens: Vec<Permutation> = h
            .members
            .iter()
            .filter(|&&m| m != IDENTITY)
            .map(|&m| self.elements[m].clone())
            .collect();
        let degree = self.elements[IDENTITY].degree();
        let sub = if gens.is_empty() {
            FiniteGroup::closure(&[Permutation::identity(degree)], h.order())
        } else {
            FiniteGroup::closure(&gens, h.order())
        }
        .expect("closure of a subgroup stays inside the subgroup");
        let embedding = sub
            .elements
            .iter()
            .map(|p| self.index_of(p).expect("subgroup element belongs to the group"))
            .collect();
        (sub, embedding)
    }
}

/// A subgroup as a sorted list of element indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subgroup {
    members: Vec<usize>,
}

impl Subgroup {
    /// Sorts and deduplicates; does not check the group axioms.
    pub fn from_members(mut members: Vec<usize>) -> Self {
        members.sort_unstable();
        members.dedup();
        Subgroup { members }
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, e: usize) -> bool {
        self.members.binary_search(&e).is_ok()
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.members.iter().all(|&e| other.contains(e))
    }

    fn canonical_key(&self) -> (usize, &[usize]) {
        (self.members.len(), &self.members)
    }
}

/// A conjugacy class of subgroups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgroupClass {
    pub representative: Subgroup,
    pub conjugates: Vec<Subgroup>,
    pub normalizer: Subgroup,
    pub weyl_order: usize,
}

impl SubgroupClass {
    pub fn order(&self) -> usize {
        self.representative.order()
    }

    pub fn contains(&self, h: &Subgroup) -> bool {
        self.conjugates.binary_search(h).is_ok()
    }
}

/// All subgroups of `g` grouped into conjugacy classes, in canonical order.
pub fn subgroup_lattice(g: &FiniteGroup) -> Vec<SubgroupClass> {
    let mut found: BTreeSet<Subgroup> = BTreeSet::new();
    let mut gens_of: Vec<(Subgroup, Vec<usize>)> = Vec::new();
    for e in 0..g.order() {
        let h = g.generate(&[e]);
        if found.insert(h.clone()) {
            gens_of.push((h, vec![e]));
        }
    }
    // Saturate under pairwise joins; each round only pairs involving a
    // subgroup discovered in the previous round.
    let mut fresh_from = 0;
    while fresh_from < gens_of.len() {
        let end = gens_of.len();
        let mut discovered = Vec::new();
        for j in fresh_from..end {
            for i in 0..j {
                let mut gens = gens_of[i].1.clone();
                gens.extend_from_slice(&gens_of[j].1);
                let join = g.generate(&gens);
                if found.insert(join.clone()) {
                    gens.sort_unstable();
                    gens.dedup();
                    discovered.push((join, gens));
                }
            }
        }
        fresh_from = end;
        gens_of.extend(discovered);
    }

    let mut ordered: Vec<Subgroup> = found.into_iter().collect();
    ordered.sort_by(|a, b| a.canonical_key().cmp(&b.canonical_key()));
    let mut assigned: BTreeSet<Subgroup> = BTreeSet::new();
    let mut classes = Vec::new();
    for h in ordered {
        if assigned.contains(&h) {
            continue;
        }
        let conjugates: BTreeSet<Subgroup> =
            (0..g.order()).map(|x| g.conjugate_subgroup(x, &h)).collect();
        let normalizer = g.normalizer(&h);
        let weyl_order = normalizer.order() / h.order();
        assigned.extend(conjugates.iter().cloned());
        classes.push(SubgroupClass {
            representative: h,
            conjugates: conjugates.into_iter().collect(),
            normalizer,
            weyl_order,
        });
    }
    classes
}

/// The table of marks: `marks[k][h] = |(G/K)^H|` for class representatives.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarksTable {
    pub classes: Vec<SubgroupClass>,
    pub marks: Vec<Vec<i64>>,
    group_order: usize,
    id: u64,
}

/// Counts cosets `gK` with `g⁻¹ H g ⊆ K` by direct enumeration.
pub fn coset_fixed_points(g: &FiniteGroup, k: &Subgroup, h: &Subgroup) -> usize {
    let mut covered = vec![false; g.order()];
    let mut count = 0;
    for x in 0..g.order() {
        if covered[x] {
            continue;
        }
        for &m in k.members() {
            covered[g.mul(x, m)] = true;
        }
        let xinv = g.inv(x);
        if h
            .members()
            .iter()
            .all(|&y| k.contains(g.mul(g.mul(xinv, y), x)))
        {
            count += 1;
        }
    }
    count
}

pub fn marks_table(g: &FiniteGroup, classes: Vec<SubgroupClass>) -> MarksTable {
    let marks: Vec<Vec<i64>> = classes
        .iter()
        .map(|k| {
            classes
                .iter()
                .map(|h| coset_fixed_points(g, &k.representative, &h.representative) as i64)
                .collect()
        })
        .collect();
    let mut hasher = std::collections::hash_map::DefaultHasher::new();
    g.elements.hash(&mut hasher);
    for c in &classes {
        c.representative.hash(&mut hasher);
    }
    marks.hash(&mut hasher);
    MarksTable {
        classes,
        marks,
        group_order: g.order(),
        id: hasher.finish(),
    }
}

impl MarksTable {
    /// Lattice plus marks in one call.
    pub fn of(g: &FiniteGroup) -> Self {
        marks_table(g, subgroup_lattice(g))
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Identifier of the underlying group and lattice.
    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn group_order(&self) -> usize {
        self.group_order
    }

    /// Class index of an arbitrary subgroup.
    pub fn class_of(&self, h: &Subgroup) -> Option<usize> {
        self.classes.iter().position(|c| c.contains(h))
    }

    /// Report label `H<order>_<class index>`.
    pub fn label(&self, class: usize) -> String {
        format!("H{}_{}", self.classes[class].order(), class)
    }

    pub fn labels(&self) -> Vec<String> {
        (0..self.len()).map(|i| self.label(i)).collect()
    }

    pub fn trivial_class(&self) -> usize {
        0
    }

    pub fn whole_class(&self) -> usize {
        self.len() - 1
    }
}
