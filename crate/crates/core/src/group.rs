//! Finite groups on dense element indices `0..order` (0 is the identity),
//! with precomputed multiplication and inverse tables.

use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;
use thiserror::Error;

/// Largest order for which multiplication tables are built.
pub const MAX_GROUP_ORDER: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("invalid action: t={t} must be coprime to m={m} with t^k = 1 mod m (k={k})")]
    InvalidAction { m: usize, k: usize, t: usize },
    #[error("not a group: {0}")]
    NotAGroup(String),
    #[error("invalid cyclic factors {0:?}")]
    InvalidFactors(Vec<usize>),
    #[error("group order {0} exceeds the supported maximum {MAX_GROUP_ORDER}")]
    TooLarge(usize),
    #[error("elements do not form a subgroup")]
    NotASubgroup,
    #[error("group is not abelian")]
    NotAbelian,
    #[error("element index {0} out of range")]
    BadElement(usize),
}

/// How a group was presented. Determines the element encoding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupLaw {
    /// `Z_{n_1} × … × Z_{n_k}`, element `(c_1, …, c_k)` at the row-major
    /// index `(…(c_1·n_2 + c_2)·n_3 + …)`.
    Abelian(Vec<usize>),
    /// `Z_m ⋊ Z_k` with `(i,j)·(i',j') = (i + t^j·i' mod m, j + j' mod k)`,
    /// element `(i, j)` at index `j·m + i`.
    Semidirect { m: usize, k: usize, t: usize },
    /// Explicit Cayley table, optionally remembering the file it came from.
    Table { source: Option<String> },
}

#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    law: GroupLaw,
    mul: Vec<u32>,
    inv: Vec<u32>,
    abelian: bool,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup").field("order", &self.order).field("law", &self.law).finish()
    }
}

impl FiniteGroup {
    fn from_mul(order: usize, law: GroupLaw, mul: Vec<u32>) -> Self {
        let mut inv = vec![0u32; order];
        for a in 0..order {
            for b in 0..order {
                if mul[a * order + b] == 0 {
                    inv[a] = b as u32;
                    break;
                }
            }
        }
        let abelian = (0..order).all(|a| (0..a).all(|b| mul[a * order + b] == mul[b * order + a]));
        FiniteGroup { order, law, mul, inv, abelian }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn law(&self) -> &GroupLaw {
        &self.law
    }

    pub fn identity(&self) -> usize {
        0
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    pub fn is_abelian(&self) -> bool {
        self.abelian
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn pow(&self, a: usize, e: usize) -> usize {
        let mut acc = 0;
        for _ in 0..e {
            acc = self.mul(acc, a);
        }
        acc
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// The elements `a^0, a^1, …` of `⟨a⟩` in power order.
    pub fn cyclic_subgroup(&self, a: usize) -> Vec<usize> {
        let mut out = vec![0];
        let mut x = a;
        while x != 0 {
            out.push(x);
            x = self.mul(x, a);
        }
        out
    }

    /// Least common multiple of element orders.
    pub fn exponent(&self) -> usize {
        self.elements().fold(1, |e, a| e.lcm(&self.element_order(a)))
    }

    /// Exhaustive check of associativity, identity and inverses.
    pub fn verify_axioms(&self) -> bool {
        let n = self.order;
        let assoc = (0..n).all(|a| {
            (0..n).all(|b| {
                let ab = self.mul(a, b);
                (0..n).all(|c| self.mul(ab, c) == self.mul(a, self.mul(b, c)))
            })
        });
        let ident = (0..n).all(|a| self.mul(0, a) == a && self.mul(a, 0) == a);
        let inverses = (0..n).all(|a| self.mul(a, self.inv(a)) == 0 && self.mul(self.inv(a), a) == 0);
        assoc && ident && inverses
    }

    /// The Cayley table as rows of indices.
    pub fn table(&self) -> Vec<Vec<usize>> {
        (0..self.order).map(|a| (0..self.order).map(|b| self.mul(a, b)).collect()).collect()
    }

    /// Coordinates of an element of an [`GroupLaw::Abelian`] group.
    pub fn abelian_coords(&self, a: usize) -> Option<Vec<usize>> {
        match &self.law {
            GroupLaw::Abelian(factors) => Some(mixed_radix_digits(a, factors)),
            _ => None,
        }
    }

    pub fn abelian_index(&self, coords: &[usize]) -> Option<usize> {
        match &self.law {
            GroupLaw::Abelian(factors) if factors.len() == coords.len() => {
                Some(mixed_radix_index(coords, factors))
            }
            _ => None,
        }
    }
}

pub(crate) fn mixed_radix_digits(mut a: usize, radices: &[usize]) -> Vec<usize> {
    let mut out = vec![0; radices.len()];
    for (slot, &r) in out.iter_mut().zip(radices).rev() {
        *slot = a % r;
        a /= r;
    }
    out
}

pub(crate) fn mixed_radix_index(digits: &[usize], radices: &[usize]) -> usize {
    digits.iter().zip(radices).fold(0, |acc, (&d, &r)| acc * r + d % r)
}

fn check_order(order: usize) -> Result<(), GroupError> {
    if order > MAX_GROUP_ORDER {
        Err(GroupError::TooLarge(order))
    } else {
        Ok(())
    }
}

/// `Z_{n_1} × … × Z_{n_k}` under componentwise addition.
pub fn make_abelian(factors: &[usize]) -> Result<FiniteGroup, GroupError> {
    if factors.is_empty() || factors.contains(&0) {
        return Err(GroupError::InvalidFactors(factors.to_vec()));
    }
    let order = factors.iter().try_fold(1usize, |acc, &f| acc.checked_mul(f));
    let order = order.ok_or(GroupError::TooLarge(usize::MAX))?;
    check_order(order)?;
    let digits: Vec<Vec<usize>> = (0..order).map(|a| mixed_radix_digits(a, factors)).collect();
    let mut mul = vec![0u32; order * order];
    for a in 0..order {
        for b in 0..order {
            let sum: Vec<usize> =
                digits[a].iter().zip(&digits[b]).zip(factors).map(|((x, y), f)| (x + y) % f).collect();
            mul[a * order + b] = mixed_radix_index(&sum, factors) as u32;
        }
    }
    Ok(FiniteGroup::from_mul(order, GroupLaw::Abelian(factors.to_vec()), mul))
}

pub fn make_cyclic(n: usize) -> Result<FiniteGroup, GroupError> {
    make_abelian(&[n])
}

/// `Z_m ⋊_t Z_k`. Requires `gcd(t, m) = 1` and `t^k ≡ 1 (mod m)`.
pub fn make_semidirect(m: usize, k: usize, t: usize) -> Result<FiniteGroup, GroupError> {
    let bad = GroupError::InvalidAction { m, k, t };
    if m == 0 || k == 0 || t.gcd(&m) != 1 {
        return Err(bad);
    }
    let mut tp = vec![1 % m; k + 1];
    for j in 1..=k {
        tp[j] = tp[j - 1] * (t % m) % m;
    }
    if tp[k] != 1 % m {
        return Err(bad);
    }
    let order = m.checked_mul(k).ok_or(GroupError::TooLarge(usize::MAX))?;
    check_order(order)?;
    let mut mul = vec![0u32; order * order];
    for a in 0..order {
        let (i, j) = (a % m, a / m);
        for b in 0..order {
            let (i2, j2) = (b % m, b / m);
            let ii = (i + tp[j] * i2) % m;
            let jj = (j + j2) % k;
            mul[a * order + b] = (jj * m + ii) as u32;
        }
    }
    Ok(FiniteGroup::from_mul(order, GroupLaw::Semidirect { m, k, t }, mul))
}

/// Validate an explicit Cayley table (row `a`, column `b` holds `a·b`).
///
/// Associativity is checked with Light's test against a generating set,
/// which is complete: the set of elements that associate with everything
/// is closed under products, so it is the whole group once it contains
/// the generators.
pub fn make_from_table(table: &[Vec<usize>], source: Option<String>) -> Result<FiniteGroup, GroupError> {
    let n = table.len();
    if n == 0 {
        return Err(GroupError::NotAGroup("empty table".into()));
    }
    check_order(n)?;
    let mut mul = vec![0u32; n * n];
    for (a, row) in table.iter().enumerate() {
        if row.len() != n {
            return Err(GroupError::NotAGroup(format!("row {a} has {} entries, expected {n}", row.len())));
        }
        for (b, &c) in row.iter().enumerate() {
            if c >= n {
                return Err(GroupError::NotAGroup(format!("entry {c} at ({a},{b}) out of range")));
            }
            mul[a * n + b] = c as u32;
        }
    }
    let at = |a: usize, b: usize| mul[a * n + b] as usize;
    for a in 0..n {
        if at(0, a) != a || at(a, 0) != a {
            return Err(GroupError::NotAGroup("element 0 is not a two-sided identity".into()));
        }
    }
    for a in 0..n {
        let mut row_seen = vec![false; n];
        let mut col_seen = vec![false; n];
        for b in 0..n {
            row_seen[at(a, b)] = true;
            col_seen[at(b, a)] = true;
        }
        if row_seen.contains(&false) || col_seen.contains(&false) {
            return Err(GroupError::NotAGroup(format!("row or column {a} is not a permutation")));
        }
    }
    // greedy generating set
    let mut span: BTreeSet<usize> = BTreeSet::from([0]);
    let mut gens = Vec::new();
    for g in 0..n {
        if span.contains(&g) {
            continue;
        }
        gens.push(g);
        // closure of span ∪ {g}
        let mut frontier: Vec<usize> = span.iter().copied().collect();
        while let Some(x) = frontier.pop() {
            for &y in &gens {
                for z in [at(x, y), at(y, x)] {
                    if span.insert(z) {
                        frontier.push(z);
                    }
                }
            }
        }
    }
    for &g in &gens {
        for x in 0..n {
            let xg = at(x, g);
            for y in 0..n {
                if at(xg, y) != at(x, at(g, y)) {
                    return Err(GroupError::NotAGroup(format!("({x}·{g})·{y} != {x}·({g}·{y})")));
                }
            }
        }
    }
    Ok(FiniteGroup::from_mul(n, GroupLaw::Table { source }, mul))
}

/// Parse the Cayley-table text format: a header line `order n` followed by
/// `n` rows of `n` whitespace-separated indices.
pub fn parse_table(text: &str) -> Result<Vec<Vec<usize>>, GroupError> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines.next().ok_or_else(|| GroupError::NotAGroup("empty table file".into()))?;
    let n: usize = header
        .strip_prefix("order")
        .and_then(|s| s.trim().parse().ok())
        .ok_or_else(|| GroupError::NotAGroup(format!("bad header {header:?}, expected `order n`")))?;
    let rows: Vec<Vec<usize>> = lines
        .map(|l| {
            l.split_whitespace()
                .map(|t| t.parse().map_err(|_| GroupError::NotAGroup(format!("bad entry {t:?}"))))
                .collect()
        })
        .collect::<Result<_, _>>()?;
    if rows.len() != n {
        return Err(GroupError::NotAGroup(format!("expected {n} rows, found {}", rows.len())));
    }
    Ok(rows)
}

pub fn format_table(g: &FiniteGroup) -> String {
    let mut out = format!("order {}\n", g.order());
    for row in g.table() {
        let row: Vec<String> = row.iter().map(usize::to_string).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// A cyclic subgroup `⟨generator⟩` with its elements in power order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicSubgroup {
    pub generator: usize,
    pub elements: Vec<usize>,
}

impl CyclicSubgroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }
}

pub fn is_normal(g: &FiniteGroup, subgroup: &[usize]) -> bool {
    let set: BTreeSet<usize> = subgroup.iter().copied().collect();
    g.elements().all(|x| subgroup.iter().all(|&s| set.contains(&g.mul(g.mul(x, s), g.inv(x)))))
}

/// Every normal cyclic subgroup, once each, as `(least generator, elements)`,
/// sorted by order then generator.
pub fn normal_cyclic_subgroups(g: &FiniteGroup) -> Vec<CyclicSubgroup> {
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut out = Vec::new();
    for a in g.elements() {
        let elements = g.cyclic_subgroup(a);
        let mut key = elements.clone();
        key.sort_unstable();
        if !seen.insert(key) {
            continue;
        }
        // conjugation preserves ⟨a⟩ iff it maps a into ⟨a⟩
        let set: BTreeSet<usize> = elements.iter().copied().collect();
        if g.elements().all(|x| set.contains(&g.mul(g.mul(x, a), g.inv(x)))) {
            out.push(CyclicSubgroup { generator: a, elements });
        }
    }
    out.sort_by_key(|s| (s.order(), s.generator));
    out
}

pub fn is_subgroup(g: &FiniteGroup, elements: &[usize]) -> bool {
    if elements.iter().any(|&a| a >= g.order()) {
        return false;
    }
    let set: BTreeSet<usize> = elements.iter().copied().collect();
    set.contains(&0) && set.iter().all(|&a| set.iter().all(|&b| set.contains(&g.mul(a, b))))
}

/// One representative per right coset `H·x`, the identity first and the
/// rest the least element of each remaining coset.
pub fn coset_reps(g: &FiniteGroup, subgroup: &[usize]) -> Result<Vec<usize>, GroupError> {
    if !is_subgroup(g, subgroup) {
        return Err(GroupError::NotASubgroup);
    }
    let mut covered = vec![false; g.order()];
    let mut reps = Vec::new();
    for x in g.elements() {
        if covered[x] {
            continue;
        }
        reps.push(x);
        for &s in subgroup {
            covered[g.mul(s, x)] = true;
        }
    }
    Ok(reps)
}

/// Characters of an abelian group as exponent rows over `ζ_E`, `E = exp(G)`:
/// `χ_t(g) = ζ_E^{rows[t][g]}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharacterTable {
    exponent: usize,
    rows: Vec<Vec<usize>>,
}

impl CharacterTable {
    pub fn exponent(&self) -> usize {
        self.exponent
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn row(&self, t: usize) -> &[usize] {
        &self.rows[t]
    }
}

/// The full character group of an abelian group.
///
/// For [`GroupLaw::Abelian`] the characters are built factor-wise and row
/// `t` is the character dual to the element with index `t`. Other abelian
/// presentations are handled by extending homomorphisms one generator at a
/// time.
pub fn characters(g: &FiniteGroup) -> Result<CharacterTable, GroupError> {
    if !g.is_abelian() {
        return Err(GroupError::NotAbelian);
    }
    let exponent = g.exponent();
    if let GroupLaw::Abelian(factors) = g.law() {
        let digits: Vec<Vec<usize>> = g.elements().map(|a| mixed_radix_digits(a, factors)).collect();
        let rows = digits
            .iter()
            .map(|t| {
                digits
                    .iter()
                    .map(|c| {
                        t.iter().zip(c).zip(factors).map(|((ti, ci), &n)| ti * ci * (exponent / n)).sum::<usize>()
                            % exponent
                    })
                    .collect()
            })
            .collect();
        return Ok(CharacterTable { exponent, rows });
    }
    let mut partial: Vec<Vec<Option<usize>>> = vec![{
        let mut v = vec![None; g.order()];
        v[0] = Some(0);
        v
    }];
    let mut span: Vec<bool> = vec![false; g.order()];
    span[0] = true;
    for gen in g.elements() {
        if span[gen] {
            continue;
        }
        let ord = g.element_order(gen);
        let mut next = Vec::new();
        for hom in &partial {
            for e in (0..exponent).filter(|e| (e * ord) % exponent == 0) {
                if let Some(ext) = extend_hom(g, hom, gen, ord, e, exponent) {
                    next.push(ext);
                }
            }
        }
        partial = next;
        let first = &partial[0];
        for a in g.elements() {
            span[a] = first[a].is_some();
        }
    }
    let rows: Vec<Vec<usize>> =
        partial.into_iter().map(|h| h.into_iter().map(|e| e.expect("total")).collect()).collect();
    debug_assert_eq!(rows.len(), g.order());
    Ok(CharacterTable { exponent, rows })
}

fn extend_hom(
    g: &FiniteGroup,
    hom: &[Option<usize>],
    gen: usize,
    ord: usize,
    image: usize,
    exponent: usize,
) -> Option<Vec<Option<usize>>> {
    let mut out = hom.to_vec();
    let base: Vec<usize> = g.elements().filter(|&a| hom[a].is_some()).collect();
    let mut power = 0usize;
    for c in 0..ord {
        for &x in &base {
            let y = g.mul(x, power);
            let val = (hom[x].expect("base") + c * image) % exponent;
            match out[y] {
                Some(v) if v != val => return None,
                _ => out[y] = Some(val),
            }
        }
        power = g.mul(power, gen);
    }
    Some(out)
}
