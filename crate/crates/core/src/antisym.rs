//! Permutations with signs and the completely antisymmetric state.
//!
//! States here are sparse maps from slot-label tuples to amplitudes. Labels
//! are 0-based, so the reference ordering `|1,…,N>` is the tuple `(0,…,N-1)`.
//! Applying a matrix to every slot of the antisymmetric state multiplies it
//! by the determinant; [`verify_det_identity`] checks that by brute force.

use std::collections::BTreeMap;
use std::ops::Deref;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::linalg::{det_levi_civita, ComplexMatrix, C64};

/// Largest particle count for which the antisymmetric state is built.
pub const MAX_PARTICLES: usize = 8;

/// Largest dimension [`verify_det_identity`] will attempt (N^N support).
pub const MAX_VERIFY_DIM: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedPermutation {
    mapping: Vec<usize>,
    sign: i8,
}

impl SignedPermutation {
    /// Wraps a bijection on `{0,…,n-1}` and computes its sign.
    pub fn new(mapping: Vec<usize>) -> Result<Self> {
        let n = mapping.len();
        let mut seen = vec![false; n];
        for &m in &mapping {
            if m >= n || std::mem::replace(&mut seen[m], true) {
                return Err(Error::InvalidArgument(format!(
                    "{mapping:?} is not a permutation of 0..{n}"
                )));
            }
        }
        let inversions = (0..n)
            .tuple_combinations()
            .filter(|&(i, j)| mapping[i] > mapping[j])
            .count();
        let sign = if inversions % 2 == 0 { 1 } else { -1 };
        Ok(Self { mapping, sign })
    }

    pub fn mapping(&self) -> &[usize] {
        &self.mapping
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }
}

/// All `n!` permutations of `{0,…,n-1}` in lexicographic order.
pub fn enumerate_permutations(n: usize) -> Result<Vec<SignedPermutation>> {
    if n == 0 {
        return Err(Error::InvalidArgument("permutations of an empty set".into()));
    }
    if n > MAX_PARTICLES {
        return Err(Error::TooLarge {
            operation: "enumerate_permutations",
            dim: n,
            bound: MAX_PARTICLES,
        });
    }
    (0..n)
        .permutations(n)
        .map(SignedPermutation::new)
        .collect()
}

/// Sparse state over `N` slots, each holding a label in `0..N`.
#[derive(Debug, Clone, PartialEq)]
pub struct SlotState {
    n_particles: usize,
    amplitudes: BTreeMap<Vec<usize>, C64>,
}

impl SlotState {
    pub fn n_particles(&self) -> usize {
        self.n_particles
    }

    pub fn amplitude(&self, labels: &[usize]) -> C64 {
        self.amplitudes.get(labels).copied().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[usize], C64)> {
        self.amplitudes.iter().map(|(k, &v)| (k.as_slice(), v))
    }

    /// Number of stored (structurally nonzero) amplitudes.
    pub fn support_len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.values().map(|z| z.norm_sqr()).sum()
    }

    pub fn scaled(&self, factor: C64) -> SlotState {
        SlotState {
            n_particles: self.n_particles,
            amplitudes: self.amplitudes.iter().map(|(k, &v)| (k.clone(), v * factor)).collect(),
        }
    }

    /// Largest amplitude difference over the union of both supports.
    pub fn max_abs_diff(&self, other: &SlotState) -> f64 {
        self.amplitudes
            .keys()
            .chain(other.amplitudes.keys())
            .map(|k| (self.amplitude(k) - other.amplitude(k)).norm())
            .fold(0.0, f64::max)
    }

    /// Dense amplitude vector of length `N^N`; slot `j` is base-`N` digit `j`
    /// (slot 0 least significant).
    pub fn to_dense(&self) -> Vec<C64> {
        let n = self.n_particles;
        let mut dense = vec![C64::default(); n.pow(n as u32)];
        for (labels, &amp) in &self.amplitudes {
            dense[dense_index(labels, n)] = amp;
        }
        dense
    }
}

pub(crate) fn dense_index(labels: &[usize], base: usize) -> usize {
    labels.iter().rev().fold(0, |acc, &l| acc * base + l)
}

/// The normalized completely antisymmetric state on `N` slots.
#[derive(Debug, Clone, PartialEq)]
pub struct AsymState {
    state: SlotState,
}

impl AsymState {
    pub fn new(n_particles: usize) -> Result<Self> {
        let perms = enumerate_permutations(n_particles)?;
        let weight = 1.0 / (perms.len() as f64).sqrt();
        let amplitudes = perms
            .into_iter()
            .map(|p| {
                let amp = C64::new(f64::from(p.sign()) * weight, 0.0);
                (p.mapping, amp)
            })
            .collect();
        Ok(Self {
            state: SlotState {
                n_particles,
                amplitudes,
            },
        })
    }

    pub fn as_slot_state(&self) -> &SlotState {
        &self.state
    }
}

impl Deref for AsymState {
    type Target = SlotState;

    fn deref(&self) -> &SlotState {
        &self.state
    }
}

pub fn asym_state(n_particles: usize) -> Result<AsymState> {
    AsymState::new(n_particles)
}

/// Applies `a` to every slot of `s`, i.e. the action of `a ⊗ a ⊗ … ⊗ a`.
pub fn apply_slotwise(a: &ComplexMatrix, s: &SlotState) -> Result<SlotState> {
    let n = a.dim()?;
    if n != s.n_particles {
        return Err(Error::DimensionMismatch {
            expected: s.n_particles,
            found: n,
        });
    }
    let mut current = s.to_dense();
    let mut next = vec![C64::default(); current.len()];
    let mut stride = 1;
    for _ in 0..n {
        next.iter_mut().for_each(|z| *z = C64::default());
        for (index, &amp) in current.iter().enumerate() {
            if amp == C64::default() {
                continue;
            }
            let from = (index / stride) % n;
            let base = index - from * stride;
            for to in 0..n {
                next[base + to * stride] += a.get(to, from) * amp;
            }
        }
        std::mem::swap(&mut current, &mut next);
        stride *= n;
    }
    let amplitudes = current
        .iter()
        .enumerate()
        .filter(|(_, z)| **z != C64::default())
        .map(|(index, &z)| {
            let labels = (0..n).map(|j| (index / n.pow(j as u32)) % n).collect();
            (labels, z)
        })
        .collect();
    Ok(SlotState {
        n_particles: n,
        amplitudes,
    })
}

/// Max-norm residual of `a^{⊗N}|ASYM> - det(a)|ASYM>`, with the determinant
/// taken from the permutation-sum oracle.
pub fn verify_det_identity(a: &ComplexMatrix) -> Result<f64> {
    let n = a.dim()?;
    if n > MAX_VERIFY_DIM {
        return Err(Error::TooLarge {
            operation: "verify_det_identity",
            dim: n,
            bound: MAX_VERIFY_DIM,
        });
    }
    let asym = AsymState::new(n)?;
    let transformed = apply_slotwise(a, &asym)?;
    let det = det_levi_civita(a)?;
    Ok(transformed.max_abs_diff(&asym.scaled(det.value)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{det_lu, random_complex};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn small_permutation_sets() {
        let one = enumerate_permutations(1).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!((one[0].mapping(), one[0].sign()), (&[0][..], 1));

        let two = enumerate_permutations(2).unwrap();
        let pairs: Vec<_> = two.iter().map(|p| (p.mapping().to_vec(), p.sign())).collect();
        assert_eq!(pairs, vec![(vec![0, 1], 1), (vec![1, 0], -1)]);

        let four = enumerate_permutations(4).unwrap();
        assert_eq!(four.len(), 24);
        assert_eq!(four.iter().filter(|p| p.sign() == 1).count(), 12);
    }

    #[test]
    fn permutation_size_limits() {
        assert!(matches!(enumerate_permutations(9), Err(Error::TooLarge { dim: 9, .. })));
        assert!(enumerate_permutations(0).is_err());
        assert!(SignedPermutation::new(vec![0, 0]).is_err());
        assert!(SignedPermutation::new(vec![0, 2]).is_err());
    }

    #[test]
    fn singlet() {
        let s = asym_state(2).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert_eq!(s.support_len(), 2);
        assert!((s.amplitude(&[0, 1]) - c(h, 0.0)).norm() < 1e-15);
        assert!((s.amplitude(&[1, 0]) - c(-h, 0.0)).norm() < 1e-15);
        assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn four_particle_support() {
        let s = asym_state(4).unwrap();
        assert_eq!(s.support_len(), 24);
        for (_, amp) in s.iter() {
            assert!((amp.norm() - 1.0 / 24f64.sqrt()).abs() < 1e-15);
        }
        assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn identity_and_diagonal_actions() {
        let s = asym_state(2).unwrap();
        let same = apply_slotwise(&ComplexMatrix::identity(2), &s).unwrap();
        assert_eq!(same.max_abs_diff(&s), 0.0);

        let z = ComplexMatrix::from_diagonal(&[c(1.0, 0.0), c(-1.0, 0.0)]);
        let flipped = apply_slotwise(&z, &s).unwrap();
        assert!(flipped.max_abs_diff(&s.scaled(c(-1.0, 0.0))) < 1e-15);
    }

    #[test]
    fn three_particle_identity_against_lu() {
        let a = random_complex(3, 3, 5);
        let s = asym_state(3).unwrap();
        let out = apply_slotwise(&a, &s).unwrap();
        let det = det_lu(&a).unwrap().value;
        assert!(out.max_abs_diff(&s.scaled(det)) <= 1e-10);
    }

    #[test]
    fn slotwise_dimension_mismatch() {
        let s = asym_state(2).unwrap();
        let err = apply_slotwise(&ComplexMatrix::identity(3), &s).unwrap_err();
        assert_eq!(err, Error::DimensionMismatch { expected: 2, found: 3 });
    }

    #[test]
    fn identity_residuals() {
        assert_eq!(verify_det_identity(&ComplexMatrix::identity(4)).unwrap(), 0.0);
        let repeated = ComplexMatrix::from_rows(vec![
            vec![c(0.3, 1.0), c(0.3, 1.0)],
            vec![c(-2.0, 0.5), c(-2.0, 0.5)],
        ])
        .unwrap();
        assert!(verify_det_identity(&repeated).unwrap() <= 1e-10);
        let out = apply_slotwise(&repeated, &asym_state(2).unwrap()).unwrap();
        assert!(out.norm_sqr() <= 1e-20);
        for seed in 0..50 {
            assert!(verify_det_identity(&random_complex(3, 3, seed)).unwrap() <= 1e-10);
        }
        assert!(matches!(
            verify_det_identity(&ComplexMatrix::identity(7)),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn dense_layout_puts_slot_zero_lowest() {
        let s = asym_state(2).unwrap();
        let dense = s.to_dense();
        // (ℓ0, ℓ1) = (0, 1) -> index 0 + 1*2 = 2
        assert!(dense[2].re > 0.0);
        assert!(dense[1].re < 0.0);
        assert_eq!(dense[0], C64::default());
    }
}
