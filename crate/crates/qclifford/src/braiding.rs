//! Braidings of the fundamental module, its dual, and their direct sum.
//!
//! With θ the step function (θ(n) = 0 for n ≤ 0, θ(n) = 1 for n > 0):
//!
//!   R̂_{V,V}  (v_i⊗v_j) = q^{δ_ij−1/N} v_j⊗v_i + θ(j−i) q^{−1/N}(q−q^{−1}) v_i⊗v_j
//!   R̂_{V*,V*}(w_i⊗w_j) = q^{δ_ij−1/N} w_j⊗w_i + θ(i−j) q^{−1/N}(q−q^{−1}) w_i⊗w_j
//!   R̂_{V*,V} (w_i⊗v_j) = q^{1/N−δ_ij} v_j⊗w_i − δ_ij q^{1/N}(q−q^{−1}) Σ_{k<i} v_k⊗w_k
//!
//! The rescaled braiding σ_λ on H⊗H acts blockwise as q^{1+1/N} R̂ on V⊗V
//! and V*⊗V*, as λ R̂_{V*,V} on V*⊗V, and as λ^{−1} R̂_{V*,V}^{−1} on V⊗V*.
//! It satisfies the braid equation for every λ ≠ 0 and reduces to the flip
//! at s → 1, u → 1.

use crate::linalg::{kernel, rref, SparseMat, SparseVec, Subspace};
use crate::scalar::Scalar;
use crate::uqact::{
    act_on_tensor_with, all_generators, v, w, Alphabet, BasisSymbol, Generator, Kind, Tensor, Word,
};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BraidingError {
    #[error("the twist parameter must be nonzero")]
    ZeroLambda,
}

fn theta(k: i64) -> bool {
    k > 0
}

/// q^{−1/N}(q − q^{−1}) = (s^{2N} − 1)/s^{N+1}.
fn off_diag_coeff(n: usize) -> Scalar {
    Scalar::s_pow(-1).mul(&Scalar::q_minus_qinv(n))
}

/// R̂_{V,V}(v_i ⊗ v_j).
pub fn rhat_vv(n: usize, i: usize, j: usize) -> Tensor {
    let delta = (i == j) as i64;
    let mut t = Tensor::from_term(n, vec![v(j), v(i)], Scalar::s_pow(n as i64 * delta - 1));
    if theta(j as i64 - i as i64) {
        t.add_term(vec![v(i), v(j)], off_diag_coeff(n));
    }
    t
}

/// R̂_{V*,V*}(w_i ⊗ w_j).
pub fn rhat_ww(n: usize, i: usize, j: usize) -> Tensor {
    let delta = (i == j) as i64;
    let mut t = Tensor::from_term(n, vec![w(j), w(i)], Scalar::s_pow(n as i64 * delta - 1));
    if theta(i as i64 - j as i64) {
        t.add_term(vec![w(i), w(j)], off_diag_coeff(n));
    }
    t
}

/// R̂_{V*,V}(w_i ⊗ v_j), landing in V ⊗ V*.
pub fn rhat_wv(n: usize, i: usize, j: usize) -> Tensor {
    let delta = (i == j) as i64;
    let mut t = Tensor::from_term(n, vec![v(j), w(i)], Scalar::s_pow(1 - n as i64 * delta));
    if i == j {
        let c = Scalar::s_pow(1).mul(&Scalar::q_minus_qinv(n)).neg();
        for k in 1..i {
            t.add_term(vec![v(k), w(k)], c.clone());
        }
    }
    t
}

/// Exact inverse of R̂_{V*,V}: images of the basis words v_i ⊗ w_j.
pub fn rhat_wv_inverse(n: usize) -> BTreeMap<(usize, usize), Tensor> {
    let dim = n * n;
    // columns: domain words w_i⊗v_j; rows: codomain words v_a⊗w_b
    let col = |i: usize, j: usize| (i - 1) * n + (j - 1);
    let row = |a: usize, b: usize| (a - 1) * n + (b - 1);
    let mut cols_of_m: Vec<SparseVec> = vec![SparseVec::zero(dim); dim];
    for i in 1..=n {
        for j in 1..=n {
            let image = rhat_wv(n, i, j);
            for (word, c) in image.terms() {
                let (a, b) = (word[0].index, word[1].index);
                cols_of_m[col(i, j)].set(row(a, b), c.clone());
            }
        }
    }
    // row-reduce [M | I] to [I | M^{-1}]
    let mut augmented = Vec::with_capacity(dim);
    for r in 0..dim {
        let mut aug = SparseVec::zero(2 * dim);
        for (c, m_col) in cols_of_m.iter().enumerate() {
            if let Some(val) = m_col.get(r) {
                aug.set(c, val.clone());
            }
        }
        aug.set(dim + r, Scalar::one());
        augmented.push(aug);
    }
    let (reduced, rank) = rref(&SparseMat::from_rows(2 * dim, augmented));
    assert_eq!(rank, dim, "braiding block must be invertible");
    let mut out: BTreeMap<(usize, usize), Tensor> = BTreeMap::new();
    for i in 1..=n {
        for j in 1..=n {
            out.insert((i, j), Tensor::zero(n, 2));
        }
    }
    for rrow in reduced.rows() {
        let (pivot, _) = rrow.first().unwrap();
        assert!(pivot < dim, "braiding block must be invertible");
        // row `pivot` of M^{-1}: its entry in codomain column k is the
        // coefficient of the domain word `pivot` in M^{-1}(e_k)
        let (i, j) = (pivot / n + 1, pivot % n + 1);
        for (c, val) in rrow.iter().filter(|(c, _)| *c >= dim) {
            let k = c - dim;
            let (a, b) = (k / n + 1, k % n + 1);
            out.get_mut(&(a, b))
                .unwrap()
                .add_term(vec![w(i), v(j)], val.clone());
        }
    }
    out
}

/// The block braiding σ_λ on H ⊗ H, stored as the image of every basis pair.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BraidingMap {
    n: usize,
    lambda: Scalar,
    images: BTreeMap<(BasisSymbol, BasisSymbol), Tensor>,
}

impl BraidingMap {
    /// Assemble σ_λ. Fails for λ = 0, which is not a twist.
    pub fn sigma_lambda(n: usize, lambda: Scalar) -> Result<Self, BraidingError> {
        if lambda.is_zero() {
            return Err(BraidingError::ZeroLambda);
        }
        let ext_scale = Scalar::s_pow(n as i64 + 1); // q^{1+1/N}
        let lambda_inv = lambda.inv().expect("nonzero");
        let wv_inv = rhat_wv_inverse(n);
        let mut images = BTreeMap::new();
        for i in 1..=n {
            for j in 1..=n {
                images.insert((v(i), v(j)), rhat_vv(n, i, j).scale(&ext_scale));
                images.insert((w(i), w(j)), rhat_ww(n, i, j).scale(&ext_scale));
                images.insert((w(i), v(j)), rhat_wv(n, i, j).scale(&lambda));
                images.insert((v(i), w(j)), wv_inv[&(i, j)].scale(&lambda_inv));
            }
        }
        Ok(BraidingMap { n, lambda, images })
    }

    /// σ_λ at the critical twist λ = q^{1−1/N} = s^{N−1}.
    pub fn sigma_critical(n: usize) -> Self {
        Self::sigma_lambda(n, Scalar::s_pow(n as i64 - 1)).expect("nonzero")
    }

    /// The plain flip x⊗y ↦ y⊗x (the classical limit).
    pub fn flip(n: usize) -> Self {
        let mut images = BTreeMap::new();
        let alphabet = Alphabet::full(n);
        for a in alphabet.letters() {
            for b in alphabet.letters() {
                images.insert((*a, *b), Tensor::from_word(n, vec![*b, *a]));
            }
        }
        BraidingMap {
            n,
            lambda: Scalar::one(),
            images,
        }
    }

    /// Arbitrary images; the door for deliberately corrupted fixtures.
    pub fn from_images(
        n: usize,
        lambda: Scalar,
        images: BTreeMap<(BasisSymbol, BasisSymbol), Tensor>,
    ) -> Self {
        BraidingMap { n, lambda, images }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn lambda(&self) -> &Scalar {
        &self.lambda
    }

    pub fn image(&self, a: &BasisSymbol, b: &BasisSymbol) -> &Tensor {
        &self.images[&(*a, *b)]
    }

    pub fn images(&self) -> &BTreeMap<(BasisSymbol, BasisSymbol), Tensor> {
        &self.images
    }

    /// σ on a degree-2 tensor.
    pub fn apply2(&self, t: &Tensor) -> Tensor {
        t.map_words(2, |word| self.image(&word[0], &word[1]).clone())
    }

    /// σ acting on slots (pos, pos+1) of a higher-degree tensor.
    pub fn apply_at(&self, t: &Tensor, pos: usize) -> Tensor {
        let degree = t.degree();
        debug_assert!(pos + 1 < degree);
        t.map_words(degree, |word| {
            let image = self.image(&word[pos], &word[pos + 1]);
            let mut out = Tensor::zero(self.n, degree);
            for (pair, c) in image.terms() {
                let mut new_word = word.clone();
                new_word[pos] = pair[0];
                new_word[pos + 1] = pair[1];
                out.add_term(new_word, c.clone());
            }
            out
        })
    }

    /// Sym² = id + σ on a degree-2 tensor.
    pub fn sym2_apply(&self, t: &Tensor) -> Tensor {
        t.add(&self.apply2(t))
    }

    /// Sym³ = id + σ₁ + σ₂ + σ₁σ₂ + σ₂σ₁ + σ₁σ₂σ₁ on a degree-3 tensor.
    pub fn sym3_apply(&self, t: &Tensor) -> Tensor {
        let s1 = self.apply_at(t, 0);
        let s2 = self.apply_at(t, 1);
        let s1s2 = self.apply_at(&s2, 0);
        let s2s1 = self.apply_at(&s1, 1);
        let s1s2s1 = self.apply_at(&s2s1, 0);
        t.add(&s1).add(&s2).add(&s1s2).add(&s2s1).add(&s1s2s1)
    }

    /// Matrix of Sym² on H⊗H: one row per input basis word, listing its image.
    pub fn sym2_matrix(&self) -> SparseMat {
        let alphabet = Alphabet::full(self.n);
        let ambient = alphabet.size().pow(2);
        let rows = alphabet
            .words(2)
            .map(|word| alphabet.tensor_to_vec(&self.sym2_apply(&Tensor::from_word(self.n, word))))
            .collect();
        SparseMat::from_rows(ambient, rows)
    }

    pub fn sym3_matrix(&self) -> SparseMat {
        let alphabet = Alphabet::full(self.n);
        let ambient = alphabet.size().pow(3);
        let rows = alphabet
            .words(3)
            .map(|word| alphabet.tensor_to_vec(&self.sym3_apply(&Tensor::from_word(self.n, word))))
            .collect();
        SparseMat::from_rows(ambient, rows)
    }

    /// im(id + σ) ⊂ H⊗H as a canonical subspace.
    pub fn sym2_image(&self) -> Subspace {
        Subspace::from_rows(self.sym2_matrix())
    }

    /// σ₁σ₂σ₁ = σ₂σ₁σ₂ on every basis word of H^{⊗3}.
    pub fn check_braid_equation(&self) -> bool {
        let alphabet = Alphabet::full(self.n);
        let words: Vec<Word> = alphabet.words(3).collect();
        words.into_iter().all(|word| {
            let t = Tensor::from_word(self.n, word);
            let lhs = self.apply_at(&self.apply_at(&self.apply_at(&t, 0), 1), 0);
            let rhs = self.apply_at(&self.apply_at(&self.apply_at(&t, 1), 0), 1);
            lhs == rhs
        })
    }
}

/// Which braiding block a check refers to.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BlockName {
    VV,
    WW,
    WV,
}

fn block_domain(n: usize, block: BlockName) -> Vec<Word> {
    let mut words = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            words.push(match block {
                BlockName::VV => vec![v(i), v(j)],
                BlockName::WW => vec![w(i), w(j)],
                BlockName::WV => vec![w(i), v(j)],
            });
        }
    }
    words
}

fn block_map(n: usize, block: BlockName, word: &Word) -> Tensor {
    let (i, j) = (word[0].index, word[1].index);
    match block {
        BlockName::VV => rhat_vv(n, i, j),
        BlockName::WW => rhat_ww(n, i, j),
        BlockName::WV => rhat_wv(n, i, j),
    }
}

fn block_map_tensor(n: usize, block: BlockName, t: &Tensor) -> Tensor {
    t.map_words(2, |word| block_map(n, block, word))
}

/// Hecke relations (R̂ − q^{1−1/N})(R̂ + q^{−1−1/N}) = 0 on V⊗V and V*⊗V*.
pub fn check_hecke(n: usize) -> bool {
    let a = Scalar::s_pow(n as i64 - 1); // q^{1−1/N}
    let b = Scalar::s_pow(-(n as i64) - 1); // q^{−1−1/N}
    [BlockName::VV, BlockName::WW].iter().all(|&block| {
        block_domain(n, block).into_iter().all(|word| {
            let t = Tensor::from_word(n, word);
            let r1 = block_map_tensor(n, block, &t);
            let r2 = block_map_tensor(n, block, &r1);
            // R̂² + (b − a) R̂ − ab
            let combo = r2.add(&r1.scale(&b.sub(&a))).sub(&t.scale(&a.mul(&b)));
            combo.is_zero()
        })
    })
}

/// ψ(v_i) = w_{N+1−i} intertwines R̂_{V,V} with R̂_{V*,V*}.
pub fn check_psi_intertwiner(n: usize) -> bool {
    let psi = |sym: &BasisSymbol| -> BasisSymbol {
        debug_assert_eq!(sym.kind, Kind::V);
        w(n + 1 - sym.index)
    };
    for i in 1..=n {
        for j in 1..=n {
            // R̂_{V*,V*}(ψ⊗ψ)(v_i⊗v_j)
            let lhs = rhat_ww(n, psi(&v(i)).index, psi(&v(j)).index);
            let rhs = rhat_vv(n, i, j)
                .map_words(2, |word| Tensor::from_word(n, vec![psi(&word[0]), psi(&word[1])]));
            if lhs != rhs {
                return false;
            }
        }
    }
    true
}

/// The braiding block is a module map: R̂(g·x) = g·R̂(x) for every generator
/// g and every basis word x of the block's domain.
pub fn check_equivariance(n: usize, block: BlockName) -> bool {
    check_equivariance_with(n, block, &crate::uqact::act_on_symbol)
}

pub fn check_equivariance_with(
    n: usize,
    block: BlockName,
    letter_action: &dyn Fn(usize, Generator, &BasisSymbol) -> Tensor,
) -> bool {
    let domain = block_domain(n, block);
    for g in all_generators(n) {
        for word in &domain {
            let x = Tensor::from_word(n, word.clone());
            let lhs = block_map_tensor(n, block, &act_on_tensor_with(n, g, &x, letter_action));
            let rhs = act_on_tensor_with(n, g, &block_map_tensor(n, block, &x), letter_action);
            if lhs != rhs {
                return false;
            }
        }
    }
    true
}

fn s2_alphabet(n: usize, block: BlockName) -> Alphabet {
    match block {
        BlockName::VV => Alphabet::v_only(n),
        BlockName::WW => Alphabet::w_only(n),
        BlockName::WV => panic!("S_q² only makes sense for V⊗V and V*⊗V*"),
    }
}

/// ker(R̂ − q^{1−1/N} id): the braided symmetric square S_q², which is also
/// the relation space of the braided exterior algebra.
pub fn s2_kernel(n: usize, block: BlockName) -> Subspace {
    let alphabet = s2_alphabet(n, block);
    let ambient = alphabet.size().pow(2);
    let a = Scalar::s_pow(n as i64 - 1);
    // rows indexed by input word; the kernel needs the column-form matrix
    let rows: Vec<SparseVec> = alphabet
        .words(2)
        .map(|word| {
            let t = Tensor::from_word(n, word.clone());
            let image = block_map_tensor(n, block, &t).sub(&t.scale(&a));
            alphabet.tensor_to_vec(&image)
        })
        .collect();
    kernel(&SparseMat::from_rows(ambient, rows).transpose())
}

/// im(id + q^{1+1/N} R̂) over the same alphabet; equals `s2_kernel` by the
/// Hecke relations, and the two are computed independently.
pub fn s2_image(n: usize, block: BlockName) -> Subspace {
    let alphabet = s2_alphabet(n, block);
    let ambient = alphabet.size().pow(2);
    let scale = Scalar::s_pow(n as i64 + 1);
    let rows: Vec<SparseVec> = alphabet
        .words(2)
        .map(|word| {
            let t = Tensor::from_word(n, word.clone());
            let image = t.add(&block_map_tensor(n, block, &t).scale(&scale));
            alphabet.tensor_to_vec(&image)
        })
        .collect();
    Subspace::from_rows(SparseMat::from_rows(ambient, rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn sp(k: i64) -> Scalar {
        Scalar::s_pow(k)
    }

    #[test]
    fn rhat_vv_paper_values() {
        let n = 2;
        // (1,1) → q^{1−1/N} v1⊗v1
        assert_eq!(
            rhat_vv(n, 1, 1),
            Tensor::from_term(n, vec![v(1), v(1)], sp(n as i64 - 1))
        );
        // (2,1) → q^{−1/N} v1⊗v2
        assert_eq!(rhat_vv(n, 2, 1), Tensor::from_term(n, vec![v(1), v(2)], sp(-1)));
        // (1,2) → q^{−1/N} v2⊗v1 + q^{−1/N}(q−q^{−1}) v1⊗v2
        let mut expected = Tensor::from_term(n, vec![v(2), v(1)], sp(-1));
        expected.add_term(vec![v(1), v(2)], sp(-1).mul(&Scalar::q_minus_qinv(n)));
        assert_eq!(rhat_vv(n, 1, 2), expected);
    }

    #[test]
    fn rhat_ww_paper_values() {
        let n = 2;
        assert_eq!(
            rhat_ww(n, 1, 1),
            Tensor::from_term(n, vec![w(1), w(1)], sp(n as i64 - 1))
        );
        // (1,2): θ(i−j) = θ(−1) = 0
        assert_eq!(rhat_ww(n, 1, 2), Tensor::from_term(n, vec![w(2), w(1)], sp(-1)));
        let mut expected = Tensor::from_term(n, vec![w(1), w(2)], sp(-1));
        expected.add_term(vec![w(2), w(1)], sp(-1).mul(&Scalar::q_minus_qinv(n)));
        assert_eq!(rhat_ww(n, 2, 1), expected);
    }

    #[test]
    fn rhat_wv_paper_values() {
        let n = 2;
        // (1,2): i≠j → q^{1/N} v2⊗w1
        assert_eq!(rhat_wv(n, 1, 2), Tensor::from_term(n, vec![v(2), w(1)], sp(1)));
        // (1,1): empty correction sum
        assert_eq!(
            rhat_wv(n, 1, 1),
            Tensor::from_term(n, vec![v(1), w(1)], sp(1 - n as i64))
        );
        // (2,2): one correction term
        let mut expected = Tensor::from_term(n, vec![v(2), w(2)], sp(1 - n as i64));
        expected.add_term(vec![v(1), w(1)], sp(1).mul(&Scalar::q_minus_qinv(n)).neg());
        assert_eq!(rhat_wv(n, 2, 2), expected);
    }

    #[test]
    fn wv_inverse_corner_values() {
        let n = 2;
        let inv = rhat_wv_inverse(n);
        // R̂^{-1}(v_2 ⊗ w_1) = q^{-1/N} w_1 ⊗ v_2
        assert_eq!(inv[&(2, 1)], Tensor::from_term(n, vec![w(1), v(2)], sp(-1)));
        // R̂^{-1}(v_1 ⊗ w_1) = q^{1−1/N} w_1 ⊗ v_1 (triangular corner)
        assert_eq!(inv[&(1, 1)].coeff(&vec![w(1), v(1)]), sp(n as i64 - 1));
        // R̂^{-1} ∘ R̂ = id on all basis words
        for n in 2..=4usize {
            let inv = rhat_wv_inverse(n);
            for i in 1..=n {
                for j in 1..=n {
                    let round = rhat_wv(n, i, j)
                        .map_words(2, |word| inv[&(word[0].index, word[1].index)].clone());
                    assert_eq!(round, Tensor::from_word(n, vec![w(i), v(j)]));
                }
            }
        }
    }

    #[test]
    fn sigma_block_scalings() {
        let n = 2;
        let sigma = BraidingMap::sigma_lambda(n, Scalar::u_pow(1)).unwrap();
        // σ(v1⊗v1) = q^{1+1/N} q^{1−1/N} v1⊗v1 = q² v1⊗v1
        assert_eq!(
            sigma.apply2(&Tensor::from_word(n, vec![v(1), v(1)])),
            Tensor::from_term(n, vec![v(1), v(1)], Scalar::q_pow(2, n))
        );
        // σ(w1⊗v2) = λ q^{1/N} v2⊗w1
        assert_eq!(
            sigma.apply2(&Tensor::from_word(n, vec![w(1), v(2)])),
            Tensor::from_term(n, vec![v(2), w(1)], Scalar::u_pow(1).mul(&sp(1)))
        );
        // λ = 0 is rejected
        assert_eq!(
            BraidingMap::sigma_lambda(n, Scalar::zero()).unwrap_err(),
            BraidingError::ZeroLambda
        );
    }

    #[test]
    fn sigma_classical_limit_is_the_flip() {
        for n in 2..=3usize {
            let sigma = BraidingMap::sigma_lambda(n, Scalar::u_pow(1)).unwrap();
            let alphabet = Alphabet::full(n);
            for a in alphabet.letters() {
                for b in alphabet.letters() {
                    let image = sigma.image(a, b);
                    let mut specialized = Tensor::zero(n, 2);
                    for (word, c) in image.terms() {
                        specialized.add_term(
                            word.clone(),
                            Scalar::from_rat(c.specialize(&rat(1), &rat(1)).unwrap()),
                        );
                    }
                    assert_eq!(specialized, Tensor::from_word(n, vec![*b, *a]));
                }
            }
        }
    }

    #[test]
    fn braid_equation_for_sigma_and_flip() {
        for n in 2..=3usize {
            let sigma = BraidingMap::sigma_lambda(n, Scalar::u_pow(1)).unwrap();
            assert!(sigma.check_braid_equation(), "σ_λ braid equation at N={n}");
            assert!(BraidingMap::flip(n).check_braid_equation());
        }
    }

    #[test]
    fn corrupted_braiding_fails_braid_equation() {
        let n = 2;
        let sigma = BraidingMap::sigma_lambda(n, Scalar::u_pow(1)).unwrap();
        let mut images = sigma.images().clone();
        images.insert(
            (v(1), v(2)),
            Tensor::from_term(n, vec![v(2), v(1)], Scalar::from_int(7)),
        );
        let bad = BraidingMap::from_images(n, Scalar::u_pow(1), images);
        assert!(!bad.check_braid_equation());
    }

    #[test]
    fn hecke_relations() {
        for n in 2..=4usize {
            assert!(check_hecke(n), "Hecke relations at N={n}");
        }
    }

    #[test]
    fn sigma_vv_quadratic_relation() {
        // (σ_VV − q²)(σ_VV + 1) = 0, from σ_VV = q^{1+1/N} R̂_VV
        let n = 3;
        let sigma = BraidingMap::sigma_lambda(n, Scalar::u_pow(1)).unwrap();
        for i in 1..=n {
            for j in 1..=n {
                let t = Tensor::from_word(n, vec![v(i), v(j)]);
                let s1 = sigma.apply2(&t);
                let s2 = sigma.apply2(&s1);
                let combo = s2
                    .add(&s1.scale(&Scalar::one().sub(&Scalar::q_pow(2, n))))
                    .sub(&t.scale(&Scalar::q_pow(2, n)));
                assert!(combo.is_zero());
            }
        }
    }

    #[test]
    fn psi_intertwines_the_braidings() {
        for n in [2, 4] {
            assert!(check_psi_intertwiner(n), "ψ intertwiner at N={n}");
        }
        // ψ is a bijection of basis symbols
        let n = 4;
        let images: std::collections::BTreeSet<usize> = (1..=n).map(|i| n + 1 - i).collect();
        assert_eq!(images.len(), n);
    }

    #[test]
    fn equivariance_of_blocks() {
        assert!(check_equivariance(2, BlockName::WV));
        assert!(check_equivariance(3, BlockName::VV));
        assert!(check_equivariance(2, BlockName::WW));
    }

    #[test]
    fn corrupted_action_breaks_equivariance() {
        // send E_1 v_2 to v_2 instead of v_1
        let corrupted = |n: usize, g: Generator, sym: &BasisSymbol| -> Tensor {
            use crate::uqact::GenTag;
            if g.tag == GenTag::E && g.index == 1 && sym.kind == Kind::V && sym.index == 2 {
                Tensor::from_word(n, vec![v(2)])
            } else {
                crate::uqact::act_on_symbol(n, g, sym)
            }
        };
        assert!(!check_equivariance_with(2, BlockName::VV, &corrupted));
    }

    #[test]
    fn hecke_image_equals_eigenspace_kernel() {
        for n in 2..=3usize {
            for block in [BlockName::VV, BlockName::WW] {
                let ker = s2_kernel(n, block);
                let im = s2_image(n, block);
                assert_eq!(ker, im, "S_q² two routes at N={n}");
                assert_eq!(ker.dim(), n * (n + 1) / 2);
            }
        }
        // N=2: kernel of R̂_{V,V} − q^{1−1/N} has dimension 3
        assert_eq!(s2_kernel(2, BlockName::VV).dim(), 3);
    }

    #[test]
    fn sym3_factorizations_agree() {
        // Sym³ = (id+σ₁) + (id+σ₁)σ₂ + (id+σ₁)σ₂σ₁
        //      = (id+σ₂) + (id+σ₂)σ₁ + (id+σ₂)σ₁σ₂
        let n = 2;
        let sigma = BraidingMap::sigma_lambda(n, Scalar::u_pow(1)).unwrap();
        let alphabet = Alphabet::full(n);
        for word in alphabet.words(3) {
            let t = Tensor::from_word(n, word);
            let direct = sigma.sym3_apply(&t);
            let first = {
                let s2 = sigma.apply_at(&t, 1);
                let s2s1 = sigma.apply_at(&sigma.apply_at(&t, 0), 1);
                let sum = t.add(&s2).add(&s2s1);
                sum.add(&sigma.apply_at(&sum, 0))
            };
            let second = {
                let s1 = sigma.apply_at(&t, 0);
                let s1s2 = sigma.apply_at(&sigma.apply_at(&t, 1), 0);
                let sum = t.add(&s1).add(&s1s2);
                sum.add(&sigma.apply_at(&sum, 1))
            };
            assert_eq!(direct, first);
            assert_eq!(direct, second);
        }
    }

    #[test]
    fn sym3_image_lands_in_the_intersection() {
        let n = 2;
        let sigma = BraidingMap::sigma_lambda(n, Scalar::u_pow(1)).unwrap();
        let alphabet = Alphabet::full(n);
        let r = sigma.sym2_image();
        for word in alphabet.words(3) {
            let t = sigma.sym3_apply(&Tensor::from_word(n, word));
            for letter in alphabet.letters() {
                // slice by last letter: must lie in im Sym² ⊗ H
                let mut right_slice = Tensor::zero(n, 2);
                // slice by first letter: must lie in H ⊗ im Sym²
                let mut left_slice = Tensor::zero(n, 2);
                for (tw, c) in t.terms() {
                    if tw[2] == *letter {
                        right_slice.add_term(vec![tw[0], tw[1]], c.clone());
                    }
                    if tw[0] == *letter {
                        left_slice.add_term(vec![tw[1], tw[2]], c.clone());
                    }
                }
                assert!(r.contains(&alphabet.tensor_to_vec(&right_slice)));
                assert!(r.contains(&alphabet.tensor_to_vec(&left_slice)));
            }
        }
    }
}
