use std::f64::consts::TAU;
use std::fmt;

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::rng::{stream, Stream};
use crate::{Error, Result};

/// Finite groups up to this order are verified over every triple.
pub const EXHAUSTIVE_LIMIT: usize = 256;

/// A group given by kind: cyclic `ℤ/n`, a direct product, the rotation
/// group SO(2) represented by a list of sample angles, or an explicit
/// Cayley table (`table[a][b] = a·b`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum GroupSpec {
    Cyclic { n: usize },
    Product { factors: Vec<GroupSpec> },
    Rotation { angles: Vec<f64> },
    Table { table: Vec<Vec<usize>> },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Element {
    Finite(usize),
    Angle(f64),
    Tuple(Vec<Element>),
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Finite(k) => write!(f, "{k}"),
            Element::Angle(a) => write!(f, "{a}"),
            Element::Tuple(parts) => {
                write!(f, "(")?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, ")")
            }
        }
    }
}

fn wrap(a: f64) -> f64 {
    let w = a.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU
    if w >= TAU {
        0.0
    } else {
        w
    }
}

/// Distance on the circle, in `[0, π]`.
pub(crate) fn angle_gap(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

impl GroupSpec {
    /// Rejects empty groups and malformed tables.
    pub fn validate(&self) -> Result<()> {
        match self {
            GroupSpec::Cyclic { n } if *n == 0 => Err(Error::invalid("cyclic group needs n >= 1")),
            GroupSpec::Cyclic { .. } => Ok(()),
            GroupSpec::Product { factors } => {
                if factors.is_empty() {
                    return Err(Error::invalid("product needs at least one factor"));
                }
                factors.iter().try_for_each(GroupSpec::validate)
            }
            GroupSpec::Rotation { angles } => {
                if angles.iter().any(|a| !a.is_finite()) {
                    return Err(Error::invalid("rotation angles must be finite"));
                }
                Ok(())
            }
            GroupSpec::Table { table } => {
                let n = table.len();
                if n == 0 {
                    return Err(Error::invalid("empty composition table"));
                }
                for (r, row) in table.iter().enumerate() {
                    if row.len() != n {
                        return Err(Error::invalid(format!("table row {r} has {} entries, expected {n}", row.len())));
                    }
                    if let Some(&bad) = row.iter().find(|&&e| e >= n) {
                        return Err(Error::invalid(format!("table row {r} names element {bad}, only {n} exist")));
                    }
                }
                Ok(())
            }
        }
    }

    pub fn order(&self) -> Option<usize> {
        match self {
            GroupSpec::Cyclic { n } => Some(*n),
            GroupSpec::Table { table } => Some(table.len()),
            GroupSpec::Rotation { .. } => None,
            GroupSpec::Product { factors } => {
                factors.iter().try_fold(1usize, |acc, f| f.order().and_then(|o| acc.checked_mul(o)))
            }
        }
    }

    pub fn factors(&self) -> &[GroupSpec] {
        match self {
            GroupSpec::Product { factors } => factors,
            other => std::slice::from_ref(other),
        }
    }

    fn table_identity(table: &[Vec<usize>]) -> Option<usize> {
        (0..table.len()).find(|&e| (0..table.len()).all(|x| table[e][x] == x && table[x][e] == x))
    }

    pub fn identity(&self) -> Result<Element> {
        Ok(match self {
            GroupSpec::Cyclic { .. } => Element::Finite(0),
            GroupSpec::Rotation { .. } => Element::Angle(0.0),
            GroupSpec::Table { table } => {
                Element::Finite(Self::table_identity(table).ok_or_else(|| Error::domain("table has no identity"))?)
            }
            GroupSpec::Product { factors } => Element::Tuple(factors.iter().map(|f| f.identity()).collect::<Result<_>>()?),
        })
    }

    fn mismatch(&self, e: &Element) -> Error {
        Error::invalid(format!("element {e} does not belong to group {self:?}"))
    }

    /// Checks that `e` is a well-formed element of this group.
    pub fn contains(&self, e: &Element) -> bool {
        match (self, e) {
            (GroupSpec::Cyclic { n }, Element::Finite(k)) => k < n,
            (GroupSpec::Table { table }, Element::Finite(k)) => *k < table.len(),
            (GroupSpec::Rotation { .. }, Element::Angle(a)) => a.is_finite(),
            (GroupSpec::Product { factors }, Element::Tuple(parts)) => {
                factors.len() == parts.len() && factors.iter().zip(parts).all(|(f, p)| f.contains(p))
            }
            _ => false,
        }
    }

    pub fn compose(&self, a: &Element, b: &Element) -> Result<Element> {
        Ok(match (self, a, b) {
            (GroupSpec::Cyclic { n }, Element::Finite(x), Element::Finite(y)) if x < n && y < n => Element::Finite((x + y) % n),
            (GroupSpec::Table { table }, Element::Finite(x), Element::Finite(y)) if *x < table.len() && *y < table.len() => {
                Element::Finite(table[*x][*y])
            }
            (GroupSpec::Rotation { .. }, Element::Angle(x), Element::Angle(y)) => Element::Angle(wrap(x + y)),
            (GroupSpec::Product { factors }, Element::Tuple(xs), Element::Tuple(ys))
                if xs.len() == factors.len() && ys.len() == factors.len() =>
            {
                Element::Tuple(
                    factors.iter().zip(xs.iter().zip(ys)).map(|(f, (x, y))| f.compose(x, y)).collect::<Result<_>>()?,
                )
            }
            _ => return Err(self.mismatch(if self.contains(a) { b } else { a })),
        })
    }

    pub fn inverse(&self, a: &Element) -> Result<Element> {
        Ok(match (self, a) {
            (GroupSpec::Cyclic { n }, Element::Finite(x)) if x < n => Element::Finite((n - x) % n),
            (GroupSpec::Rotation { .. }, Element::Angle(x)) => Element::Angle(wrap(-x)),
            (GroupSpec::Table { table }, Element::Finite(x)) if *x < table.len() => {
                let e = Self::table_identity(table).ok_or_else(|| Error::domain("table has no identity"))?;
                let inv = (0..table.len()).find(|&y| table[*x][y] == e && table[y][*x] == e);
                Element::Finite(inv.ok_or_else(|| Error::domain(format!("element {x} has no inverse")))?)
            }
            (GroupSpec::Product { factors }, Element::Tuple(xs)) if xs.len() == factors.len() => {
                Element::Tuple(factors.iter().zip(xs).map(|(f, x)| f.inverse(x)).collect::<Result<_>>()?)
            }
            _ => return Err(self.mismatch(a)),
        })
    }

    /// Equality, with angles compared on the circle to within `1e-9`.
    pub fn same(&self, a: &Element, b: &Element) -> bool {
        match (a, b) {
            (Element::Finite(x), Element::Finite(y)) => x == y,
            (Element::Angle(x), Element::Angle(y)) => angle_gap(*x, *y) <= 1e-9,
            (Element::Tuple(xs), Element::Tuple(ys)) => {
                let f = self.factors();
                xs.len() == ys.len() && xs.len() == f.len() && f.iter().zip(xs.iter().zip(ys)).all(|(g, (x, y))| g.same(x, y))
            }
            _ => false,
        }
    }

    /// All elements of a finite group, or the listed sample angles (plus
    /// the identity) for rotations. Products enumerate with the first
    /// factor varying slowest.
    pub fn elements(&self) -> Vec<Element> {
        match self {
            GroupSpec::Cyclic { n } => (0..*n).map(Element::Finite).collect(),
            GroupSpec::Table { table } => (0..table.len()).map(Element::Finite).collect(),
            GroupSpec::Rotation { angles } => {
                let mut out = vec![Element::Angle(0.0)];
                out.extend(angles.iter().map(|&a| Element::Angle(wrap(a))).filter(|a| *a != Element::Angle(0.0)));
                out
            }
            GroupSpec::Product { factors } => {
                let mut out = vec![Vec::new()];
                for f in factors {
                    let elems = f.elements();
                    out = out
                        .into_iter()
                        .flat_map(|prefix: Vec<Element>| {
                            elems.iter().map(move |e| {
                                let mut p = prefix.clone();
                                p.push(e.clone());
                                p
                            })
                        })
                        .collect();
                }
                out.into_iter().map(Element::Tuple).collect()
            }
        }
    }

    /// Uniform draw; rotations draw a uniform angle.
    pub fn sample(&self, rng: &mut crate::rng::Rng) -> Element {
        match self {
            GroupSpec::Cyclic { n } => Element::Finite(rng.random_range(0..*n)),
            GroupSpec::Table { table } => Element::Finite(rng.random_range(0..table.len())),
            GroupSpec::Rotation { .. } => Element::Angle(rng.random_range(0.0..TAU)),
            GroupSpec::Product { factors } => Element::Tuple(factors.iter().map(|f| f.sample(rng)).collect()),
        }
    }

    /// Elements to test against: every element when the group is finite
    /// and small, otherwise `budget` seeded draws (rotations: the listed
    /// angles plus the identity, or draws when none are listed).
    pub fn test_elements(&self, budget: usize, seed: u64) -> Vec<Element> {
        match self.order() {
            Some(n) if n <= EXHAUSTIVE_LIMIT => self.elements(),
            _ => {
                if let GroupSpec::Rotation { angles } = self {
                    if !angles.is_empty() {
                        return self.elements();
                    }
                }
                let mut rng = stream(seed, Stream::Samples);
                let mut out = vec![self.identity().expect("only tables lack identities and tables are finite")];
                out.extend((1..budget).map(|_| self.sample(&mut rng)));
                out
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupViolation {
    pub law: &'static str,
    pub elements: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupReport {
    pub passed: bool,
    pub order: Option<usize>,
    pub exhaustive: bool,
    /// Number of associativity triples examined.
    pub triples: usize,
    pub violations: Vec<GroupViolation>,
}

/// Checks identity, inverses, closure and associativity. Finite groups of
/// order at most [`EXHAUSTIVE_LIMIT`] are checked over all triples; larger
/// or continuous groups over `budget` seeded triples.
pub fn verify_group(g: &GroupSpec, budget: usize, seed: u64) -> Result<GroupReport> {
    g.validate()?;
    let order = g.order();
    let mut violations = Vec::new();
    let show = |es: &[&Element]| es.iter().map(|e| e.to_string()).collect::<Vec<_>>();

    let e = match g.identity() {
        Ok(e) => e,
        Err(_) => {
            violations.push(GroupViolation { law: "identity", elements: vec![] });
            return Ok(GroupReport { passed: false, order, exhaustive: true, triples: 0, violations });
        }
    };

    let exhaustive = matches!(order, Some(n) if n <= EXHAUSTIVE_LIMIT);
    let pool = if exhaustive { g.elements() } else { g.test_elements(budget.max(2), seed) };

    for a in &pool {
        if !g.same(&g.compose(&e, a)?, a) || !g.same(&g.compose(a, &e)?, a) {
            violations.push(GroupViolation { law: "identity", elements: show(&[&e, a]) });
        }
        match g.inverse(a) {
            Ok(inv) => {
                if !g.same(&g.compose(a, &inv)?, &e) || !g.same(&g.compose(&inv, a)?, &e) {
                    violations.push(GroupViolation { law: "inverse", elements: show(&[a, &inv]) });
                }
            }
            Err(_) => violations.push(GroupViolation { law: "inverse", elements: show(&[a]) }),
        }
    }

    let mut triples = 0;
    let mut check = |a: &Element, b: &Element, c: &Element| -> Result<()> {
        triples += 1;
        let left = g.compose(&g.compose(a, b)?, c)?;
        let right = g.compose(a, &g.compose(b, c)?)?;
        if !g.contains(&left) || !g.contains(&right) {
            violations.push(GroupViolation { law: "closure", elements: show(&[a, b, c]) });
        } else if !g.same(&left, &right) {
            violations.push(GroupViolation { law: "associativity", elements: show(&[a, b, c]) });
        }
        Ok(())
    };
    if exhaustive || pool.len().pow(3) <= budget {
        for a in &pool {
            for b in &pool {
                for c in &pool {
                    check(a, b, c)?;
                }
            }
        }
    } else {
        let mut rng = stream(seed, Stream::Samples);
        for _ in 0..budget {
            let pick = |rng: &mut crate::rng::Rng| pool[rng.random_range(0..pool.len())].clone();
            let (a, b, c) = (pick(&mut rng), pick(&mut rng), pick(&mut rng));
            check(&a, &b, &c)?;
        }
    }
    Ok(GroupReport { passed: violations.is_empty(), order, exhaustive, triples, violations })
}
