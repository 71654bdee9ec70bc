//! Finite ground sets and their subsets.
//!
//! A [`Carrier`] is a named finite set of atoms. Subsets are machine-word bit
//! patterns ([`Mask`]) indexed by atom order, so the exhaustive suites can
//! compare millions of limit tables with plain integer operations.

use std::fmt;
use std::sync::Arc;

use crate::error::Error;

/// Subset of a carrier, one bit per atom in carrier order.
pub type Mask = u32;

/// Largest carrier representable in a `Mask` with room to spare for
/// powerset-indexed tables.
pub const MAX_ATOMS: usize = 24;

/// A finite ground set with named, ordered atoms.
///
/// Atom order is fixed at construction and defines the bit layout of every
/// [`Mask`] over this carrier, as well as the canonical serialization order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Carrier {
    atoms: Vec<String>,
}

impl Carrier {
    pub fn new<S: Into<String>>(atoms: impl IntoIterator<Item = S>) -> Result<Arc<Self>, Error> {
        let atoms: Vec<String> = atoms.into_iter().map(Into::into).collect();
        if atoms.is_empty() {
            return Err(Error::EmptyCarrier);
        }
        if atoms.len() > MAX_ATOMS {
            return Err(Error::BoundExceeded {
                what: "carrier atoms",
                limit: MAX_ATOMS,
                actual: atoms.len(),
            });
        }
        for (i, a) in atoms.iter().enumerate() {
            if atoms[..i].contains(a) {
                return Err(Error::DuplicateAtom { name: a.clone() });
            }
        }
        Ok(Arc::new(Carrier { atoms }))
    }

    /// Carrier with atoms `"0"`, `"1"`, ..., `"n-1"`.
    pub fn numbered(n: usize) -> Result<Arc<Self>, Error> {
        Self::new((0..n).map(|i| i.to_string()))
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn atom_name(&self, index: usize) -> &str {
        &self.atoms[index]
    }

    pub fn index_of(&self, name: &str) -> Result<usize, Error> {
        self.atoms
            .iter()
            .position(|a| a == name)
            .ok_or_else(|| Error::UnknownAtom { name: name.to_string() })
    }

    /// Full subset: all atoms.
    pub fn full(&self) -> Mask {
        if self.atoms.len() == Mask::BITS as usize {
            Mask::MAX
        } else {
            (1 << self.atoms.len()) - 1
        }
    }

    pub fn singleton(&self, index: usize) -> Mask {
        debug_assert!(index < self.atoms.len());
        1 << index
    }

    pub fn mask_of(&self, names: &[&str]) -> Result<Mask, Error> {
        let mut m = 0;
        for name in names {
            m |= self.singleton(self.index_of(name)?);
        }
        Ok(m)
    }

    /// Number of subsets, including the empty one.
    pub fn subset_count(&self) -> usize {
        1 << self.atoms.len()
    }

    /// All subsets in numeric mask order (`0..2^n`).
    pub fn subsets(&self) -> impl Iterator<Item = Mask> {
        0..self.subset_count() as Mask
    }

    /// All nonempty subsets, i.e. the kernels of the proper filters.
    pub fn kernels(&self) -> impl Iterator<Item = Mask> {
        1..self.subset_count() as Mask
    }

    pub fn atoms_of(&self, mask: Mask) -> impl Iterator<Item = usize> + '_ {
        (0..self.atoms.len()).filter(move |i| mask & (1 << i) != 0)
    }

    /// Atom names of `mask` in carrier order.
    pub fn names_of(&self, mask: Mask) -> Vec<String> {
        self.atoms_of(mask).map(|i| self.atoms[i].clone()).collect()
    }

    /// Renders a mask as `{a,b}` for diagnostics and witnesses.
    pub fn show(&self, mask: Mask) -> String {
        format!("{{{}}}", self.names_of(mask).join(","))
    }
}

impl fmt::Display for Carrier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.atoms.join(","))
    }
}

/// Checks that two structures live on the same carrier.
pub fn same_carrier(left: &Carrier, right: &Carrier) -> Result<(), Error> {
    if left == right {
        Ok(())
    } else {
        Err(Error::CarrierMismatch {
            left: left.to_string(),
            right: right.to_string(),
        })
    }
}
