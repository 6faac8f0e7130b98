//! Finite multiclass hypothesis classes, their exact Littlestone dimension,
//! and the version-space prediction algorithm whose realizable mistake count
//! is bounded by that dimension.

use std::collections::HashMap;

use crate::error::{Error, Result};

/// Exhaustive-computation guards. The dimension recursion is exponential;
/// larger classes must not be fed to it.
pub const MAX_CLASS_SIZE: usize = 20;
pub const MAX_DOMAIN_SIZE: usize = 12;

/// A finite list of hypotheses over a finite covariate domain
/// `X = {0, ..., |X| - 1}`, each a total map from domain points to context
/// indices.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteHypothesisClass {
    domain_size: usize,
    num_contexts: usize,
    /// `hypotheses[g][x]` is the label of point `x` under hypothesis `g`.
    hypotheses: Vec<Vec<usize>>,
}

impl FiniteHypothesisClass {
    pub fn new(domain_size: usize, num_contexts: usize, hypotheses: Vec<Vec<usize>>) -> Result<Self> {
        if domain_size == 0 || num_contexts == 0 {
            return Err(Error::invalid("domain and context set must be nonempty"));
        }
        if hypotheses.is_empty() {
            return Err(Error::invalid("hypothesis class must be nonempty"));
        }
        for (g, h) in hypotheses.iter().enumerate() {
            if h.len() != domain_size {
                return Err(Error::DimensionMismatch {
                    what: format!("hypothesis {g}"),
                    expected: domain_size,
                    actual: h.len(),
                });
            }
            if h.iter().any(|z| *z >= num_contexts) {
                return Err(Error::invalid(format!("hypothesis {g} labels outside 0..{num_contexts}")));
            }
        }
        Ok(Self { domain_size, num_contexts, hypotheses })
    }

    pub fn len(&self) -> usize {
        self.hypotheses.len()
    }

    pub fn is_empty(&self) -> bool {
        false // nonempty by construction
    }

    pub fn domain_size(&self) -> usize {
        self.domain_size
    }

    pub fn num_contexts(&self) -> usize {
        self.num_contexts
    }

    pub fn label(&self, hypothesis: usize, x: usize) -> usize {
        self.hypotheses[hypothesis][x]
    }

    fn check_guards(&self) -> Result<()> {
        if self.hypotheses.len() > MAX_CLASS_SIZE || self.domain_size > MAX_DOMAIN_SIZE {
            return Err(Error::SizeGuard(format!(
                "littlestone dimension limited to {MAX_CLASS_SIZE} hypotheses over {MAX_DOMAIN_SIZE} points \
                 (got {} over {})",
                self.hypotheses.len(),
                self.domain_size
            )));
        }
        Ok(())
    }
}

/// Version spaces as bitmasks over hypothesis indices (guards keep the class
/// within 32 bits).
type VersionMask = u32;

fn full_mask(n: usize) -> VersionMask {
    if n == 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

/// Littlestone dimension of a version space, by the multiclass recursion:
/// the dimension is at least `k + 1` iff some point and two distinct labels
/// both leave restricted subclasses of dimension at least `k`. The empty
/// space has dimension -1, singletons 0.
fn ldim_mask(
    class: &FiniteHypothesisClass,
    version: VersionMask,
    memo: &mut HashMap<VersionMask, i32>,
) -> i32 {
    if version == 0 {
        return -1;
    }
    if let Some(&v) = memo.get(&version) {
        return v;
    }
    let mut best = 0i32;
    for x in 0..class.domain_size {
        // Split the version space by label at x.
        let mut by_label: HashMap<usize, VersionMask> = HashMap::new();
        let mut bits = version;
        while bits != 0 {
            let g = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            *by_label.entry(class.hypotheses[g][x]).or_insert(0) |= 1 << g;
        }
        if by_label.len() < 2 {
            continue;
        }
        let dims: Vec<i32> = by_label
            .values()
            .map(|&mask| ldim_mask(class, mask, memo))
            .collect();
        // The two largest branch dimensions give the best disagreeing pair.
        let mut top = [-1i32; 2];
        for d in dims {
            if d > top[0] {
                top[1] = top[0];
                top[0] = d;
            } else if d > top[1] {
                top[1] = d;
            }
        }
        best = best.max(1 + top[1]);
    }
    memo.insert(version, best);
    best
}

/// Exact multiclass Littlestone dimension of the class, by memoized
/// recursion over version spaces. Exponential time; guarded by
/// [`MAX_CLASS_SIZE`] and [`MAX_DOMAIN_SIZE`].
pub fn littlestone_dim(class: &FiniteHypothesisClass) -> Result<usize> {
    class.check_guards()?;
    let mut memo = HashMap::new();
    let dim = ldim_mask(class, full_mask(class.len()), &mut memo);
    Ok(dim.max(0) as usize)
}

/// The version-space multiclass predictor: predicts the label whose
/// restricted version space has the largest Littlestone dimension, then
/// discards the hypotheses inconsistent with the revealed label.
#[derive(Debug, Clone)]
pub struct Soa {
    class: FiniteHypothesisClass,
    version: VersionMask,
    memo: HashMap<VersionMask, i32>,
    last_x: Option<usize>,
}

impl Soa {
    pub fn new(class: FiniteHypothesisClass) -> Result<Self> {
        class.check_guards()?;
        let version = full_mask(class.len());
        Ok(Self { class, version, memo: HashMap::new(), last_x: None })
    }

    /// Hypotheses still consistent with the stream so far.
    pub fn version_space_size(&self) -> usize {
        self.version.count_ones() as usize
    }

    fn restriction(&self, x: usize, label: usize) -> VersionMask {
        let mut mask = 0;
        let mut bits = self.version;
        while bits != 0 {
            let g = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            if self.class.hypotheses[g][x] == label {
                mask |= 1 << g;
            }
        }
        mask
    }

    /// Predicts the label for a domain point; ties are broken by the lowest
    /// context index.
    pub fn predict(&mut self, x: usize) -> Result<usize> {
        if x >= self.class.domain_size {
            return Err(Error::invalid(format!("domain point {x} out of range")));
        }
        if self.version == 0 {
            return Err(Error::NonRealizable);
        }
        let mut best_label = 0usize;
        let mut best_dim = i32::MIN;
        for label in 0..self.class.num_contexts {
            let mask = self.restriction(x, label);
            let dim = ldim_mask(&self.class, mask, &mut self.memo);
            if dim > best_dim {
                best_dim = dim;
                best_label = label;
            }
        }
        self.last_x = Some(x);
        Ok(best_label)
    }

    /// Restricts the version space to hypotheses consistent with the
    /// revealed label of the point last predicted on.
    pub fn update(&mut self, realized: usize) -> Result<()> {
        let x = self
            .last_x
            .take()
            .ok_or_else(|| Error::Protocol("update called before predict in this round".into()))?;
        if realized >= self.class.num_contexts {
            return Err(Error::ContextIndex { index: realized, m: self.class.num_contexts });
        }
        self.version = self.restriction(x, realized);
        if self.version == 0 {
            return Err(Error::NonRealizable);
        }
        Ok(())
    }
}
