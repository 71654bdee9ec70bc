//! Function spaces, the continuous (dual) convergence, biduals, the natural
//! injection into the bidual carrier, and exponential-hull computations.
//!
//! The dual `[ξ,σ]` lives on the set of continuous maps `C(ξ,σ)`. Its limit
//! table is defined by the pointwise evaluation condition: a function `f`
//! converges along a kernel `L` of functions when for every domain kernel `K`
//! and every `x ∈ lim_ξ K↑`, the value `f(x)` converges in `σ` along the
//! evaluation image `ev(K×L) = {g(y) : y ∈ K, g ∈ L}`. That this is the
//! coarsest convergence making evaluation jointly continuous is verified by
//! enumeration in tests, not assumed.
//!
//! The exponential hull through a dualizer never materializes the bidual
//! carrier: only the images of the natural injection `j(x) = (g ↦ g(x))` are
//! ever tested for membership in bidual limits, which needs one pass over the
//! function kernels.

use std::sync::Arc;

use crate::carrier::{Carrier, Mask};
use crate::convergence::Convergence;
use crate::error::Error;
use crate::family::AtomMap;
use crate::reflectors::{reflect, Functor};

/// Cap on `|C(ξ,σ)|` for the exponential-hull functors; the evaluation tables
/// scale as `2^|C|`.
pub const EPI_FUNCTION_BOUND: usize = 22;

/// Default cap on `|C(ξ,σ)|` for interactively requested duals.
pub const DEFAULT_FUNCTION_BOUND: usize = 12;

/// An enumerated space of continuous maps, one carrier atom per function.
///
/// Function atoms are named by their value rows, `[v(x1),...,v(xn)]` in
/// domain order, and listed in lexicographic value order; the enumeration
/// tests all `|σ|^|ξ|` candidates.
#[derive(Debug, Clone)]
pub struct FunctionSpace {
    pub domain: Convergence,
    pub dualizer: Convergence,
    pub functions: Vec<AtomMap>,
    pub carrier: Arc<Carrier>,
}

impl FunctionSpace {
    pub fn len(&self) -> usize {
        self.functions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functions.is_empty()
    }
}

/// Enumerates `C(ξ,σ)` completely.
pub fn function_space(
    domain: &Convergence,
    dualizer: &Convergence,
    max_functions: usize,
) -> Result<FunctionSpace, Error> {
    let functions: Vec<AtomMap> = AtomMap::all(domain.carrier(), dualizer.carrier())
        .into_iter()
        .filter(|f| crate::convergence::is_continuous(f, domain, dualizer))
        .collect();
    if functions.len() > max_functions {
        return Err(Error::BoundExceeded {
            what: "function space",
            limit: max_functions,
            actual: functions.len(),
        });
    }
    let names: Vec<String> = functions
        .iter()
        .map(|f| {
            let vals: Vec<&str> = f
                .values
                .iter()
                .map(|&v| dualizer.carrier().atom_name(v))
                .collect();
            format!("[{}]", vals.join(","))
        })
        .collect();
    let carrier = Carrier::new(names)?;
    Ok(FunctionSpace {
        domain: domain.clone(),
        dualizer: dualizer.clone(),
        functions,
        carrier,
    })
}

/// The dual convergence together with the function space it lives on.
#[derive(Debug, Clone)]
pub struct DualConvergence {
    pub space: FunctionSpace,
    pub table: Convergence,
}

/// Shared precomputation for dual and bidual passes over one function space.
struct DualEngine {
    /// Number of function atoms.
    count: usize,
    /// Kernels of the domain carrier, in mask order.
    domain_kernels: Vec<Mask>,
    /// `img[g][k]`: image of domain kernel index `k` under function `g`.
    img: Vec<Vec<u8>>,
    /// `lim_sigma[s]` for every dualizer subset `s`.
    lim_sigma: Vec<u8>,
    /// `allowed[k][t]`: functions `f` with `f(x) ∈ t` for all `x ∈ lim_ξ k`.
    allowed: Vec<Vec<Mask>>,
}

impl DualEngine {
    fn new(space: &FunctionSpace) -> Result<Self, Error> {
        let domain = &space.domain;
        let sigma = &space.dualizer;
        if sigma.carrier().len() > 8 {
            return Err(Error::BoundExceeded {
                what: "dualizer atoms",
                limit: 8,
                actual: sigma.carrier().len(),
            });
        }
        let count = space.functions.len();
        let domain_kernels: Vec<Mask> = domain.carrier().kernels().collect();
        let img: Vec<Vec<u8>> = space
            .functions
            .iter()
            .map(|f| domain_kernels.iter().map(|&k| f.image(k) as u8).collect())
            .collect();
        let mut lim_sigma = vec![0u8; sigma.carrier().subset_count()];
        for k in sigma.carrier().kernels() {
            lim_sigma[k as usize] = sigma.lim(k) as u8;
        }
        // per-atom membership masks, then intersected over each row's limit set
        let sigma_subsets = sigma.carrier().subset_count();
        let per_atom: Vec<Vec<Mask>> = (0..domain.carrier().len())
            .map(|x| {
                (0..sigma_subsets)
                    .map(|t| {
                        let mut m = 0;
                        for (gi, f) in space.functions.iter().enumerate() {
                            if t & (1 << f.apply(x)) != 0 {
                                m |= 1 << gi;
                            }
                        }
                        m
                    })
                    .collect()
            })
            .collect();
        let everyone: Mask = if count == 32 { Mask::MAX } else { (1 << count) - 1 };
        let allowed = domain_kernels
            .iter()
            .map(|&k| {
                (0..sigma_subsets)
                    .map(|t| {
                        domain
                            .carrier()
                            .atoms_of(domain.lim(k))
                            .fold(everyone, |acc, x| acc & per_atom[x][t])
                    })
                    .collect()
            })
            .collect();
        Ok(DualEngine {
            count,
            domain_kernels,
            img,
            lim_sigma,
            allowed,
        })
    }

    fn everyone(&self) -> Mask {
        if self.count == 32 {
            Mask::MAX
        } else {
            (1 << self.count) - 1
        }
    }

    /// Evaluation images per domain kernel, tabulated over all function
    /// kernels by lowest-bit dynamic programming.
    fn ev_tables(&self) -> Vec<Vec<u8>> {
        let total = 1usize << self.count;
        self.domain_kernels
            .iter()
            .enumerate()
            .map(|(ki, _)| {
                let mut ev = vec![0u8; total];
                for l in 1..total {
                    let g = l.trailing_zeros() as usize;
                    let rest = l & (l - 1);
                    ev[l] = ev[rest] | self.img[g][ki];
                }
                ev
            })
            .collect()
    }

    /// The dual limit table over all function kernels, using precomputed
    /// evaluation tables.
    fn dual_rows(&self, ev: &[Vec<u8>]) -> Vec<Mask> {
        let total = 1usize << self.count;
        let mut rows = Vec::with_capacity(total - 1);
        for l in 1..total {
            let mut lim = self.everyone();
            for ki in 0..self.domain_kernels.len() {
                let t = self.lim_sigma[ev[ki][l] as usize];
                lim &= self.allowed[ki][t as usize];
                if lim == 0 {
                    break;
                }
            }
            rows.push(lim);
        }
        rows
    }
}

/// Computes the dual convergence `[ξ,σ]`.
pub fn dual(
    domain: &Convergence,
    dualizer: &Convergence,
    max_functions: usize,
) -> Result<DualConvergence, Error> {
    let space = function_space(domain, dualizer, max_functions)?;
    let engine = DualEngine::new(&space)?;
    let rows = engine.dual_rows(&engine.ev_tables());
    let table = Convergence::from_rows_unchecked(space.carrier.clone(), rows);
    Ok(DualConvergence { space, table })
}

/// The evaluation map `ev(x,g) = g(x)` from the product carrier
/// `|ξ| × |[ξ,σ]|` to the dualizer carrier, in the row-major atom order of
/// [`crate::convergence::product_carrier`].
pub fn evaluation_map(dual: &DualConvergence) -> Result<AtomMap, Error> {
    let prod = crate::convergence::product_carrier(
        dual.space.domain.carrier(),
        dual.space.carrier.as_ref(),
    )?;
    let m = dual.space.carrier.len();
    let values = (0..prod.len())
        .map(|idx| dual.space.functions[idx % m].apply(idx / m))
        .collect();
    AtomMap::new(prod, dual.space.dualizer.carrier().clone(), values)
}

/// Result of an exponential-hull computation.
#[derive(Debug, Clone)]
pub struct EpiHull {
    /// The initial convergence of the bidual along the natural injection.
    pub epi: Convergence,
    /// Whether the natural injection separates points; when it does not (the
    /// chaotic fixture collapses everything) the hull is still defined.
    pub j_injective: bool,
    /// Size of the intermediate function space.
    pub function_count: usize,
}

/// Computes `j⁻[[ξ,σ],σ]`: the initial convergence, along the natural
/// injection `j(x) = (g ↦ g(x))`, of the dual of the dual.
///
/// Membership of `j(x)` in a bidual limit unfolds to: for every function
/// kernel `L` and every `g ∈ lim_{[ξ,σ]} L↑`, the value `g(x)` converges in
/// `σ` along `ev(K×L)`. Only these memberships are computed; the bidual
/// carrier `C([ξ,σ],σ)` itself is never enumerated. The injection is
/// continuous into the bidual by construction of the table; that each `j(x)`
/// actually lands in `C([ξ,σ],σ)` is equivalent to the point axiom of the
/// computed table and is checked, returning a defect error on failure.
pub fn bidual_and_epi(
    domain: &Convergence,
    dualizer: &Convergence,
    max_functions: usize,
) -> Result<EpiHull, Error> {
    let space = function_space(domain, dualizer, max_functions)?;
    let engine = DualEngine::new(&space)?;
    let ev = engine.ev_tables();
    let dual_rows = engine.dual_rows(&ev);

    let n = domain.carrier().len();
    let kernel_count = engine.domain_kernels.len();
    let mut epi_rows: Vec<Mask> = vec![domain.carrier().full(); kernel_count];
    let total = 1usize << engine.count;
    for l in 1..total {
        let lim_dual = dual_rows[l - 1];
        if lim_dual == 0 {
            continue;
        }
        for ki in 0..kernel_count {
            if epi_rows[ki] == 0 {
                continue;
            }
            let t = engine.lim_sigma[ev[ki][l] as usize] as usize;
            for x in 0..n {
                if epi_rows[ki] & (1 << x) != 0 {
                    // every g converging along L must evaluate into t at x
                    let ok = lim_dual & !engine.allowed_at(x, t) == 0;
                    if !ok {
                        epi_rows[ki] &= !(1 << x);
                    }
                }
            }
        }
    }

    for x in 0..n {
        let k = domain.carrier().singleton(x);
        if epi_rows[k as usize - 1] & k == 0 {
            return Err(Error::BidualDefect {
                atom: domain.carrier().atom_name(x).to_string(),
            });
        }
    }

    let mut j_injective = true;
    for x in 0..n {
        for y in x + 1..n {
            if space.functions.iter().all(|g| g.apply(x) == g.apply(y)) {
                j_injective = false;
            }
        }
    }

    let epi = Convergence::from_rows_unchecked(domain.carrier().clone(), epi_rows);
    debug_assert!(domain.is_finer(&epi).unwrap_or(false));
    Ok(EpiHull {
        epi,
        j_injective,
        function_count: engine.count,
    })
}

impl DualEngine {
    /// Functions whose value at `x` lies in the dualizer subset `t`.
    fn allowed_at(&self, x: usize, t: usize) -> Mask {
        // singleton-row limits are total, so reuse the per-kernel table of
        // the singleton {x} only when lim_ξ{x} = {x}; in general recompute
        // from the per-atom data embedded in `allowed` is not possible, so
        // this helper is backed by its own table.
        self.point_allowed[x][t]
    }
}

/// One pair's outcome in an exponentiality check.
#[derive(Debug, Clone)]
pub struct CommutationFinding {
    pub left: Convergence,
    pub right: Convergence,
    pub commutes: bool,
}

/// Tests `J(ξ×τ) = Jξ × Jτ` on a corpus of pairs. Callers decide whether a
/// failure refutes a law (the pseudotopologizer must commute) or is a
/// discovery (the topologizer runs in search mode).
pub fn exponentiality_check(
    functor: Functor,
    pairs: &[(Convergence, Convergence)],
    product_bound: usize,
) -> Result<Vec<CommutationFinding>, Error> {
    let mut findings = Vec::with_capacity(pairs.len());
    for (a, b) in pairs {
        let lhs = reflect(&crate::convergence::product(a, b, product_bound)?, functor)?;
        let rhs = crate::convergence::product(&reflect(a, functor)?, &reflect(b, functor)?, product_bound)?;
        findings.push(CommutationFinding {
            left: a.clone(),
            right: b.clone(),
            commutes: lhs == rhs,
        });
    }
    Ok(findings)
}

/// Fibers of the continuous maps into the Sierpiński topology.
///
/// Each member of `C(τ,$)` is recorded by the set of points it sends to `1`
/// and the complementary set it sends to `0`. For finite topologies the
/// value-1 fibers come out exactly as the open sets (so the value-0 fibers
/// are the closed sets); which fiber the characteristic-function reading
/// should take is logged by the suites, not asserted.
#[derive(Debug, Clone)]
pub struct SierpinskiFibers {
    pub value_one: Vec<Mask>,
    pub value_zero: Vec<Mask>,
}

pub fn sierpinski_fibers(domain: &Convergence) -> Result<SierpinskiFibers, Error> {
    let sier = crate::fixtures::sier();
    let space = function_space(domain, &sier, 1 << domain.carrier().len())?;
    let full = domain.carrier().full();
    let value_one: Vec<Mask> = space
        .functions
        .iter()
        .map(|f| f.preimage(0b10))
        .collect();
    let value_zero = value_one.iter().map(|&m| full & !m).collect();
    Ok(SierpinskiFibers {
        value_one,
        value_zero,
    })
}
