//! Abelian point groups (D2h and its subgroups).
//!
//! Irreps are encoded as 3-bit codes so that the direct product is a
//! bitwise XOR. Label order within each group follows the FCIDUMP / Cotton
//! convention, so an `ORBSYM` entry `k` maps to code `k - 1`.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// Character-table data for one abelian point group.
#[derive(Debug, PartialEq, Eq)]
pub struct PointGroupTable {
    pub name: &'static str,
    /// Irrep labels indexed by code; `labels[0]` is totally symmetric.
    pub labels: &'static [&'static str],
}

pub static C1: PointGroupTable = PointGroupTable {
    name: "C1",
    labels: &["A"],
};
pub static CI: PointGroupTable = PointGroupTable {
    name: "Ci",
    labels: &["Ag", "Au"],
};
pub static C2: PointGroupTable = PointGroupTable {
    name: "C2",
    labels: &["A", "B"],
};
pub static CS: PointGroupTable = PointGroupTable {
    name: "Cs",
    labels: &["A'", "A\""],
};
pub static D2: PointGroupTable = PointGroupTable {
    name: "D2",
    labels: &["A", "B1", "B2", "B3"],
};
pub static C2V: PointGroupTable = PointGroupTable {
    name: "C2v",
    labels: &["A1", "A2", "B1", "B2"],
};
pub static C2H: PointGroupTable = PointGroupTable {
    name: "C2h",
    labels: &["Ag", "Bg", "Au", "Bu"],
};
pub static D2H: PointGroupTable = PointGroupTable {
    name: "D2h",
    labels: &["Ag", "B1g", "B2g", "B3g", "Au", "B1u", "B2u", "B3u"],
};

static ALL: [&PointGroupTable; 8] = [&C1, &CI, &C2, &CS, &D2, &C2V, &C2H, &D2H];

impl PointGroupTable {
    /// Looks a group up by name, case-insensitively.
    pub fn by_name(name: &str) -> Result<&'static PointGroupTable> {
        ALL.iter()
            .copied()
            .find(|g| g.name.eq_ignore_ascii_case(name.trim()))
            .ok_or_else(|| Error::UnknownGroup(name.to_string()))
    }

    pub fn order(&'static self) -> usize {
        self.labels.len()
    }

    pub fn identity(&'static self) -> Irrep {
        Irrep {
            group: self,
            code: 0,
        }
    }

    pub fn irreps(&'static self) -> impl Iterator<Item = Irrep> {
        (0..self.labels.len() as u8).map(move |code| Irrep { group: self, code })
    }

    pub fn from_code(&'static self, code: u8) -> Result<Irrep> {
        if (code as usize) < self.labels.len() {
            Ok(Irrep { group: self, code })
        } else {
            Err(Error::Domain("irrep code out of range for point group"))
        }
    }

    /// Converts a 1-based FCIDUMP `ORBSYM` entry.
    pub fn from_orbsym(&'static self, orbsym: u32) -> Result<Irrep> {
        match orbsym.checked_sub(1) {
            Some(c) if (c as usize) < self.labels.len() => Ok(Irrep {
                group: self,
                code: c as u8,
            }),
            _ => Err(Error::Domain("ORBSYM entry out of range for point group")),
        }
    }

    /// Smallest group among the supported tables with at least `order` irreps.
    pub fn smallest_with_order(order: usize) -> &'static PointGroupTable {
        match order {
            0 | 1 => &C1,
            2 => &C2,
            3 | 4 => &C2V,
            _ => &D2H,
        }
    }
}

/// Irreducible representation of an abelian point group.
#[derive(Clone, Copy)]
pub struct Irrep {
    group: &'static PointGroupTable,
    code: u8,
}

impl Irrep {
    #[inline]
    pub fn code(self) -> u8 {
        self.code
    }

    #[inline]
    pub fn group(self) -> &'static PointGroupTable {
        self.group
    }

    pub fn name(self) -> &'static str {
        self.group.labels[self.code as usize]
    }

    /// 1-based FCIDUMP `ORBSYM` value.
    pub fn orbsym(self) -> u32 {
        self.code as u32 + 1
    }

    pub fn is_identity(self) -> bool {
        self.code == 0
    }

    /// Direct product `self ⊗ other`.
    pub fn product(self, other: Irrep) -> Result<Irrep> {
        if !core::ptr::eq(self.group, other.group) {
            return Err(Error::MismatchedGroups(self.group.name, other.group.name));
        }
        Ok(Irrep {
            group: self.group,
            code: self.code ^ other.code,
        })
    }

    /// Parses `name` against `table`, ignoring ASCII case.
    pub fn from_label(name: &str, table: &'static PointGroupTable) -> Result<Irrep> {
        let wanted = name.trim();
        table
            .labels
            .iter()
            .position(|l| l.eq_ignore_ascii_case(wanted))
            .map(|code| Irrep {
                group: table,
                code: code as u8,
            })
            .ok_or_else(|| Error::UnknownIrrep {
                label: wanted.to_string(),
                group: table.name,
                valid: table.labels.join(", "),
            })
    }
}

impl PartialEq for Irrep {
    fn eq(&self, other: &Self) -> bool {
        core::ptr::eq(self.group, other.group) && self.code == other.code
    }
}

impl Eq for Irrep {}

impl core::hash::Hash for Irrep {
    fn hash<H: core::hash::Hasher>(&self, state: &mut H) {
        self.group.name.hash(state);
        self.code.hash(state);
    }
}

impl fmt::Debug for Irrep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.name(), self.group.name)
    }
}

impl fmt::Display for Irrep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Product of a sequence of irreps; identity for an empty sequence.
pub fn product_all(
    table: &'static PointGroupTable,
    irreps: impl IntoIterator<Item = Irrep>,
) -> Result<Irrep> {
    irreps
        .into_iter()
        .try_fold(table.identity(), |acc, g| acc.product(g))
}

/// Names of all irreps in `table`, in code order.
pub fn labels(table: &'static PointGroupTable) -> Vec<String> {
    table.labels.iter().map(|s| s.to_string()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d2h(name: &str) -> Irrep {
        Irrep::from_label(name, &D2H).unwrap()
    }

    /// D2h characters under (E, C2z, C2y, C2x, i, σxy, σxz, σyz).
    fn characters(label: &str) -> [i8; 8] {
        match label {
            "Ag" => [1, 1, 1, 1, 1, 1, 1, 1],
            "B1g" => [1, 1, -1, -1, 1, 1, -1, -1],
            "B2g" => [1, -1, 1, -1, 1, -1, 1, -1],
            "B3g" => [1, -1, -1, 1, 1, -1, -1, 1],
            "Au" => [1, 1, 1, 1, -1, -1, -1, -1],
            "B1u" => [1, 1, -1, -1, -1, -1, 1, 1],
            "B2u" => [1, -1, 1, -1, -1, 1, -1, 1],
            "B3u" => [1, -1, -1, 1, -1, 1, 1, -1],
            _ => unreachable!(),
        }
    }

    #[test]
    fn product_examples() {
        assert_eq!(d2h("Ag").product(d2h("Ag")).unwrap(), d2h("Ag"));
        assert_eq!(d2h("B1u").product(d2h("B1u")).unwrap(), d2h("Ag"));
        assert_eq!(d2h("B2u").product(d2h("B3u")).unwrap(), d2h("B1g"));
    }

    #[test]
    fn xor_product_matches_character_table() {
        // Brute force: multiply characters elementwise and find the irrep.
        for a in D2H.irreps() {
            for b in D2H.irreps() {
                let ca = characters(a.name());
                let cb = characters(b.name());
                let prod: [i8; 8] = core::array::from_fn(|k| ca[k] * cb[k]);
                let expected = D2H.labels.iter().find(|l| characters(l) == prod).unwrap();
                assert_eq!(a.product(b).unwrap().name(), *expected);
            }
        }
    }

    #[test]
    fn group_axioms_exhaustive() {
        for a in D2H.irreps() {
            assert!(a.product(a).unwrap().is_identity());
            for b in D2H.irreps() {
                let ab = a.product(b).unwrap();
                assert!(D2H.irreps().any(|g| g == ab));
                assert_eq!(ab, b.product(a).unwrap());
                for c in D2H.irreps() {
                    assert_eq!(
                        ab.product(c).unwrap(),
                        a.product(b.product(c).unwrap()).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn labels_and_codes() {
        assert_eq!(d2h("Ag").code(), 0);
        assert_eq!(d2h("ag").code(), 0);
        let b1u = d2h("B1u");
        assert_eq!(b1u.orbsym(), 6);
        assert!(b1u.product(b1u).unwrap().is_identity());
        assert_eq!(D2H.from_orbsym(6).unwrap(), b1u);
        match Irrep::from_label("Xx", &D2H) {
            Err(Error::UnknownIrrep { valid, .. }) => assert!(valid.contains("B3u")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn mismatched_groups() {
        let a = C2V.identity();
        assert!(matches!(
            a.product(D2H.identity()),
            Err(Error::MismatchedGroups("C2v", "D2h"))
        ));
    }

    #[test]
    fn subgroup_tables_close_under_xor() {
        for g in ALL {
            for a in g.irreps() {
                for b in g.irreps() {
                    assert!((a.product(b).unwrap().code() as usize) < g.order());
                }
            }
        }
    }
}
