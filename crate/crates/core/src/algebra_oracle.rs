//! Brute-force ground truth: the group algebra `F_p[G]` as explicit
//! matrices, its upper and lower Lie power chains as subspaces, and the Lie
//! nilpotency indices read off directly.
//!
//! Every basis element of `F_p[G]` is a group element, so multiplication by
//! a group element permutes coordinates. The ideal generated by a subspace
//! is its closure under left and right multiplication by the pc
//! generators.

use serde::Serialize;

use crate::error::{is_prime, Error, Result};
use crate::fp_linalg::{close_echelon, CoordinatePermutation, EchelonBasis, FpSubspace, LinearMap};
use crate::group_engine::PcPresentation;
use crate::structure::{derived_subgroup, Subgroup};

/// Default limit on `|G|` for chain computations.
pub const ORACLE_CAP: usize = 256;

/// `F_p[G]` with a full multiplication table over the basis `G`.
#[derive(Debug, Clone)]
pub struct GroupAlgebra {
    p: u32,
    group: PcPresentation,
    dim: usize,
    /// `table[a * dim + b]` is the index of `a·b`.
    table: Vec<u32>,
}

impl GroupAlgebra {
    /// Basis vectors are indexed by element key.
    pub fn build(group: &PcPresentation, p: u32, cap: usize) -> Result<Self> {
        if !is_prime(p as u64) || p > 255 {
            return Err(Error::NotPrime(p as u64));
        }
        let order = group.order();
        if order > cap as u128 {
            return Err(Error::CapExceeded {
                what: format!("group algebra of dimension {order}"),
                cap,
            });
        }
        let dim = order as usize;
        // a·g_i for every a; then a·b by walking the normal word of b.
        let right_gen: Vec<Vec<u32>> = (0..group.ngens())
            .map(|i| {
                (0..dim as u64)
                    .map(|a| {
                        let mut x = group.element_of_key(a);
                        group.mul_gen_in_place(&mut x, i);
                        group.key(&x) as u32
                    })
                    .collect()
            })
            .collect();
        let mut table = vec![0u32; dim * dim];
        for b in 0..dim {
            let word = group.element_of_key(b as u64);
            for a in 0..dim {
                let mut x = a as u32;
                for (i, &e) in word.exponents().iter().enumerate() {
                    for _ in 0..e {
                        x = right_gen[i][x as usize];
                    }
                }
                table[a * dim + b] = x;
            }
        }
        Ok(GroupAlgebra {
            p,
            group: group.clone(),
            dim,
            table,
        })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn group(&self) -> &PcPresentation {
        &self.group
    }

    /// Index of the product of basis elements `a` and `b`.
    pub fn product_index(&self, a: usize, b: usize) -> usize {
        self.table[a * self.dim + b] as usize
    }

    /// Product of two algebra elements, by bilinear extension.
    pub fn multiply(&self, x: &[u8], y: &[u8]) -> Vec<u8> {
        let p = self.p;
        let mut out = vec![0u32; self.dim];
        for (a, &xa) in x.iter().enumerate().filter(|(_, &c)| c != 0) {
            for (b, &yb) in y.iter().enumerate().filter(|(_, &c)| c != 0) {
                let k = self.product_index(a, b);
                out[k] = (out[k] + xa as u32 * yb as u32) % p;
            }
        }
        out.into_iter().map(|c| c as u8).collect()
    }

    /// `[v, b] = v·b − b·v` for the basis element `b`.
    pub fn bracket_with_basis(&self, v: &[u8], b: usize, out: &mut [u8]) {
        let p = self.p as u8;
        out.fill(0);
        for (a, &c) in v.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let ab = self.product_index(a, b);
            let ba = self.product_index(b, a);
            if ab != ba {
                out[ab] = add(out[ab], c, p);
                out[ba] = add(out[ba], p - c, p);
            }
        }
    }

    /// Left multiplication by basis element `g`.
    pub fn left_mult(&self, g: usize) -> CoordinatePermutation {
        CoordinatePermutation {
            perm: (0..self.dim).map(|a| self.product_index(g, a)).collect(),
        }
    }

    /// Right multiplication by basis element `g`.
    pub fn right_mult(&self, g: usize) -> CoordinatePermutation {
        CoordinatePermutation {
            perm: (0..self.dim).map(|a| self.product_index(a, g)).collect(),
        }
    }

    fn generator_indices(&self) -> Vec<usize> {
        (0..self.group.ngens())
            .map(|i| self.group.key(&self.group.generator(i)) as usize)
            .collect()
    }

    /// Left and right multiplications by the pc generators; closing under
    /// these is closing under the two-sided ideal.
    fn ideal_operators(&self) -> Vec<CoordinatePermutation> {
        self.generator_indices()
            .into_iter()
            .flat_map(|g| [self.left_mult(g), self.right_mult(g)])
            .collect()
    }

    fn ideal_closure(&self, e: &mut EchelonBasis, ops: &[CoordinatePermutation]) {
        let dyn_ops: Vec<&dyn LinearMap> = ops.iter().map(|o| o as &dyn LinearMap).collect();
        close_echelon(e, 0, &dyn_ops);
    }

    fn stop_bound(&self, cap: usize) -> Result<usize> {
        let d = derived_subgroup(&Subgroup::whole(&self.group), cap)?;
        Ok(d.order() as usize + 2)
    }
}

fn add(a: u8, b: u8, p: u8) -> u8 {
    let s = a as u16 + b as u16;
    if s >= p as u16 {
        (s - p as u16) as u8
    } else {
        s as u8
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ChainKind {
    Upper,
    Lower,
}

/// `chain[n-1]` is the n-th Lie power; `chain[0]` is the whole algebra.
#[derive(Debug, Clone)]
pub struct LiePowerChain {
    pub kind: ChainKind,
    pub chain: Vec<FpSubspace>,
}

impl LiePowerChain {
    /// The index of the first zero term, if the chain reached zero.
    pub fn nilpotency_index(&self) -> Option<u64> {
        self.chain
            .iter()
            .position(|s| s.is_zero())
            .map(|i| i as u64 + 1)
    }

    pub fn dims(&self) -> Vec<usize> {
        self.chain.iter().map(|s| s.dim()).collect()
    }
}

fn check_descending(next: &FpSubspace, prev: &FpSubspace) -> Result<()> {
    if !next.is_subspace_of(prev)? {
        return Err(Error::Inconsistent(
            "Lie power chain is not descending".into(),
        ));
    }
    Ok(())
}

/// `KG^{(1)} = KG`, `KG^{(n+1)}` = ideal generated by `[KG^{(n)}, KG]`.
///
/// Brackets are taken with the pc generators only: since
/// `[x, gh] = [x, g]h + g[x, h]`, the ideal they generate already contains
/// every `[x, b]`. Stops at zero, at a stationary nonzero term, or at index
/// `|G′| + 2`.
pub fn upper_lie_chain(a: &GroupAlgebra, cap: usize) -> Result<LiePowerChain> {
    let bound = a.stop_bound(cap)?;
    let ops = a.ideal_operators();
    let gens = a.generator_indices();
    let mut chain = vec![FpSubspace::full(a.p, a.dim)?];
    let mut img = vec![0u8; a.dim];
    while chain.len() < bound {
        let prev = chain.last().unwrap();
        if prev.is_zero() {
            break;
        }
        let mut e = EchelonBasis::new(a.p, a.dim)?;
        for v in prev.basis() {
            for &g in &gens {
                a.bracket_with_basis(v, g, &mut img);
                e.insert(img.clone());
            }
        }
        a.ideal_closure(&mut e, &ops);
        let next = e.into_subspace();
        check_descending(&next, prev)?;
        let stationary = &next == prev;
        chain.push(next);
        if stationary {
            break;
        }
    }
    Ok(LiePowerChain {
        kind: ChainKind::Upper,
        chain,
    })
}

/// Literal upper chain: brackets with every basis element, not just the
/// generators. Quadratically slower; kept as a check on the reduction.
pub fn upper_lie_chain_literal(a: &GroupAlgebra, cap: usize) -> Result<LiePowerChain> {
    let bound = a.stop_bound(cap)?;
    let ops: Vec<CoordinatePermutation> = (0..a.dim)
        .flat_map(|g| [a.left_mult(g), a.right_mult(g)])
        .collect();
    let mut chain = vec![FpSubspace::full(a.p, a.dim)?];
    let mut img = vec![0u8; a.dim];
    while chain.len() < bound {
        let prev = chain.last().unwrap();
        if prev.is_zero() {
            break;
        }
        let mut e = EchelonBasis::new(a.p, a.dim)?;
        for v in prev.basis() {
            for b in 0..a.dim {
                a.bracket_with_basis(v, b, &mut img);
                e.insert(img.clone());
            }
        }
        a.ideal_closure(&mut e, &ops);
        let next = e.into_subspace();
        check_descending(&next, prev)?;
        let stationary = &next == prev;
        chain.push(next);
        if stationary {
            break;
        }
    }
    Ok(LiePowerChain {
        kind: ChainKind::Upper,
        chain,
    })
}

/// `KG^{[n]}` = ideal generated by the left-normed brackets of length `n`.
///
/// `V_1 = KG` and `V_{n+1} = span{[v, b]}` over a basis of `V_n` and all
/// group elements `b`; the n-th term is the ideal closure of `V_n`. The
/// layer `V_n` is tracked separately because `[ideal(V_n), KG]` is in
/// general larger than `span[V_n, KG]`.
pub fn lower_lie_chain(a: &GroupAlgebra, cap: usize) -> Result<LiePowerChain> {
    let bound = a.stop_bound(cap)?;
    let ops = a.ideal_operators();
    let full = FpSubspace::full(a.p, a.dim)?;
    let mut layer = full.clone();
    let mut chain = vec![full];
    let mut img = vec![0u8; a.dim];
    while chain.len() < bound {
        if chain.last().unwrap().is_zero() {
            break;
        }
        let mut e = EchelonBasis::new(a.p, a.dim)?;
        for v in layer.basis() {
            for b in 0..a.dim {
                a.bracket_with_basis(v, b, &mut img);
                e.insert(img.clone());
            }
        }
        layer = e.clone().into_subspace();
        a.ideal_closure(&mut e, &ops);
        let next = e.into_subspace();
        check_descending(&next, chain.last().unwrap())?;
        chain.push(next);
    }
    Ok(LiePowerChain {
        kind: ChainKind::Lower,
        chain,
    })
}

fn index_of(c: &LiePowerChain) -> Result<u64> {
    c.nilpotency_index().ok_or_else(|| {
        Error::NotLieNilpotent(format!(
            "{:?} Lie power chain did not vanish (dimensions {:?})",
            c.kind,
            c.dims()
        ))
    })
}

/// `t^L(F_p[G])` by direct computation.
pub fn t_upper_direct(group: &PcPresentation, p: u32, cap: usize) -> Result<u64> {
    let a = GroupAlgebra::build(group, p, cap)?;
    index_of(&upper_lie_chain(&a, cap)?)
}

/// `t_L(F_p[G])` by direct computation.
pub fn t_lower_direct(group: &PcPresentation, p: u32, cap: usize) -> Result<u64> {
    let a = GroupAlgebra::build(group, p, cap)?;
    index_of(&lower_lie_chain(&a, cap)?)
}
