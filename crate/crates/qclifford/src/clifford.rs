//! The quantum Clifford algebra Cl_q(c) as a confluent rewriting system.
//!
//! Normal words are v_{i_1}···v_{i_a} w_{j_1}···w_{j_b} with the v-part
//! strictly increasing and the w-part strictly decreasing; there are 4^N of
//! them. The oriented rules come from the relation rows of P_c at the
//! critical twist λ = q^{1−1/N} (so λ' = q):
//!
//!   (a) v_i v_i → 0                    (b) v_i v_j → −q v_j v_i   (i > j)
//!   (c) w_i w_i → 0                    (d) w_i w_j → −q w_j w_i   (i < j)
//!   (e) w_i v_j → −q^{1−δ_ij} v_j w_i
//!                + δ_ij [ q(q−q^{−1}) Σ_{k<i} v_k w_k + c ]
//!
//! Every rule strictly decreases (w-before-v inversions, length, same-kind
//! inversions) lexicographically, so rewriting terminates; confluence is
//! verified on all degree-3 overlaps. The spinor representation is the left
//! regular action on the quotient by the left ideal generated by the w_i,
//! with basis the 2^N v-only normal words.

use crate::braiding::{rhat_wv_inverse, BraidingMap};
use crate::linalg::{rank, SparseMat, SparseVec, Subspace};
use crate::pbw::{affine_relation_space, deformation_unchecked, delta_beta};
use crate::quadratic::relations_twisted;
use crate::scalar::Scalar;
use crate::uqact::{
    act_on_tensor, all_generators, v, w, Alphabet, BasisSymbol, GenTag, Kind, Tensor, Word,
};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CliffordError {
    #[error("presentation mismatch: rule span differs from the deformed relation space")]
    PresentationMismatch,
    #[error("the parameter c must be nonzero for this operation")]
    ZeroC,
    #[error("quadratic data construction failed: {0}")]
    Quadratic(#[from] crate::quadratic::QuadraticError),
}

/// Monomial v_{i_1}···v_{i_a} w_{j_1}···w_{j_b}, stored as index sets; the
/// v-part is read ascending and the w-part descending.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct NormalWord {
    pub vmask: u32,
    pub wmask: u32,
}

impl NormalWord {
    pub const ONE: NormalWord = NormalWord { vmask: 0, wmask: 0 };

    pub fn degree(&self) -> usize {
        (self.vmask.count_ones() + self.wmask.count_ones()) as usize
    }

    pub fn letters(&self) -> Word {
        let mut word = Word::new();
        for i in 1..=32u32 {
            if self.vmask & (1 << (i - 1)) != 0 {
                word.push(v(i as usize));
            }
        }
        for i in (1..=32u32).rev() {
            if self.wmask & (1 << (i - 1)) != 0 {
                word.push(w(i as usize));
            }
        }
        word
    }

    pub fn all(n: usize) -> Vec<NormalWord> {
        let mut out = Vec::with_capacity(1 << (2 * n));
        for vmask in 0..(1u32 << n) {
            for wmask in 0..(1u32 << n) {
                out.push(NormalWord { vmask, wmask });
            }
        }
        out
    }
}

impl fmt::Display for NormalWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.degree() == 0 {
            return write!(f, "1");
        }
        write!(f, "{}", crate::uqact::word_to_string(&self.letters()))
    }
}

/// Element of Cl_q(c): finite map from normal words to nonzero Scalars.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CliffordElement {
    n: usize,
    terms: BTreeMap<NormalWord, Scalar>,
}

impl CliffordElement {
    pub fn zero(n: usize) -> Self {
        CliffordElement {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(n: usize) -> Self {
        Self::from_term(n, NormalWord::ONE, Scalar::one())
    }

    pub fn from_term(n: usize, word: NormalWord, coeff: Scalar) -> Self {
        let mut el = Self::zero(n);
        el.add_term(word, coeff);
        el
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&NormalWord, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, word: &NormalWord) -> Scalar {
        self.terms.get(word).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn add_term(&mut self, word: NormalWord, coeff: Scalar) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(word) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().add(&coeff);
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &CliffordElement) -> CliffordElement {
        let mut out = self.clone();
        for (word, c) in &other.terms {
            out.add_term(*word, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &CliffordElement) -> CliffordElement {
        self.add(&other.scale(&Scalar::from_int(-1)))
    }

    pub fn scale(&self, c: &Scalar) -> CliffordElement {
        if c.is_zero() {
            return CliffordElement::zero(self.n);
        }
        CliffordElement {
            n: self.n,
            terms: self.terms.iter().map(|(w, k)| (*w, k.mul(c))).collect(),
        }
    }

    /// Maximal filtration degree among the terms.
    pub fn filtration_degree(&self) -> usize {
        self.terms.keys().map(|w| w.degree()).max().unwrap_or(0)
    }
}

/// Right-hand side of one oriented rule, as free words with coefficients.
type Rhs = Vec<(Word, Scalar)>;

/// Reduction strategy used when several redexes are present.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Strategy {
    Leftmost,
    Rightmost,
}

/// Oriented rewriting rules for Cl_q(c) normal forms.
#[derive(Clone, Debug)]
pub struct RewriteSystem {
    n: usize,
    c: Scalar,
    rules: BTreeMap<(BasisSymbol, BasisSymbol), Rhs>,
}

fn standard_rules(n: usize, c: &Scalar) -> BTreeMap<(BasisSymbol, BasisSymbol), Rhs> {
    let q = Scalar::q_pow(1, n);
    let mut rules: BTreeMap<(BasisSymbol, BasisSymbol), Rhs> = BTreeMap::new();
    for i in 1..=n {
        rules.insert((v(i), v(i)), Vec::new());
        rules.insert((w(i), w(i)), Vec::new());
        for j in 1..i {
            // v_i v_j → −q v_j v_i for i > j
            rules.insert((v(i), v(j)), vec![(vec![v(j), v(i)], q.neg())]);
            // w_j w_i → −q w_i w_j for j < i
            rules.insert((w(j), w(i)), vec![(vec![w(i), w(j)], q.neg())]);
        }
        for j in 1..=n {
            // w_i v_j → −q^{1−δ} v_j w_i + δ_ij (q(q−q^{−1}) Σ_{k<i} v_k w_k + c)
            let mut rhs: Rhs = vec![(
                vec![v(j), w(i)],
                Scalar::q_pow(1 - (i == j) as i64, n).neg(),
            )];
            if i == j {
                let corr = q.mul(&Scalar::q_minus_qinv(n));
                for k in 1..i {
                    rhs.push((vec![v(k), w(k)], corr.clone()));
                }
                if !c.is_zero() {
                    rhs.push((Vec::new(), c.clone()));
                }
            }
            rules.insert((w(i), v(j)), rhs);
        }
    }
    rules
}

/// Builds Cl_q(c) and verifies that the span of {LHS − RHS} equals the
/// deformed relation space P_c of the critical-twist algebra.
pub fn build_clq(n: usize, c: Scalar) -> Result<RewriteSystem, CliffordError> {
    let rs = RewriteSystem {
        n,
        c: c.clone(),
        rules: standard_rules(n, &c),
    };
    let qd = relations_twisted(n, Scalar::s_pow(n as i64 - 1))?;
    let deformed = deformation_unchecked(&qd, &delta_beta(&qd), &c);
    let expected = affine_relation_space(&deformed);
    if rs.rule_span() != expected {
        return Err(CliffordError::PresentationMismatch);
    }
    Ok(rs)
}

impl RewriteSystem {
    /// Assemble from explicit rules without the presentation check; the door
    /// for deliberately corrupted fixtures.
    pub fn from_rules(
        n: usize,
        c: Scalar,
        rules: BTreeMap<(BasisSymbol, BasisSymbol), Rhs>,
    ) -> Self {
        RewriteSystem { n, c, rules }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn c(&self) -> &Scalar {
        &self.c
    }

    pub fn rules(&self) -> &BTreeMap<(BasisSymbol, BasisSymbol), Rhs> {
        &self.rules
    }

    /// Span of {LHS − RHS} in K ⊕ H^{⊗2} (constant coordinate first).
    pub fn rule_span(&self) -> Subspace {
        let alphabet = Alphabet::full(self.n);
        let m = alphabet.size();
        let ambient = 1 + m * m;
        let rows = self
            .rules
            .iter()
            .map(|((a, b), rhs)| {
                let mut row = SparseVec::zero(ambient);
                row.add_to(
                    1 + alphabet.word_to_col(&vec![*a, *b]).unwrap(),
                    Scalar::one(),
                );
                for (word, coeff) in rhs {
                    match word.len() {
                        0 => row.add_to(0, coeff.neg()),
                        2 => row.add_to(
                            1 + alphabet.word_to_col(word).unwrap(),
                            coeff.neg(),
                        ),
                        _ => unreachable!("rule right sides are constants or pairs"),
                    }
                }
                row
            })
            .collect();
        Subspace::from_rows(SparseMat::from_rows(ambient, rows))
    }

    fn find_redex(&self, word: &[BasisSymbol], strategy: Strategy) -> Option<usize> {
        let positions: Box<dyn Iterator<Item = usize>> = match strategy {
            Strategy::Leftmost => Box::new(0..word.len().saturating_sub(1)),
            Strategy::Rightmost => Box::new((0..word.len().saturating_sub(1)).rev()),
        };
        for p in positions {
            if self.rules.contains_key(&(word[p], word[p + 1])) {
                return Some(p);
            }
        }
        None
    }

    /// Exhaustive rewriting of a free word to its normal form.
    pub fn normal_form(&self, word: &[BasisSymbol]) -> CliffordElement {
        self.normal_form_with(word, Strategy::Leftmost)
    }

    pub fn normal_form_with(&self, word: &[BasisSymbol], strategy: Strategy) -> CliffordElement {
        let mut out = CliffordElement::zero(self.n);
        let mut stack: Vec<(Word, Scalar)> = vec![(word.to_vec(), Scalar::one())];
        while let Some((current, coeff)) = stack.pop() {
            match self.find_redex(&current, strategy) {
                None => out.add_term(self.as_normal(&current), coeff),
                Some(p) => {
                    let rhs = &self.rules[&(current[p], current[p + 1])];
                    for (replacement, rc) in rhs {
                        let mut next = current[..p].to_vec();
                        next.extend_from_slice(replacement);
                        next.extend_from_slice(&current[p + 2..]);
                        stack.push((next, coeff.mul(rc)));
                    }
                }
            }
        }
        out
    }

    fn as_normal(&self, word: &[BasisSymbol]) -> NormalWord {
        let mut vmask = 0u32;
        let mut wmask = 0u32;
        for sym in word {
            let bit = 1u32 << (sym.index - 1);
            match sym.kind {
                Kind::V => {
                    debug_assert_eq!(vmask & bit, 0, "irreducible word is not normal");
                    vmask |= bit;
                }
                Kind::W => {
                    debug_assert_eq!(wmask & bit, 0);
                    wmask |= bit;
                }
            }
        }
        NormalWord { vmask, wmask }
    }

    /// Normal form of a linear combination given by free words.
    pub fn reduce_tensor(&self, t: &Tensor) -> CliffordElement {
        let mut out = CliffordElement::zero(self.n);
        for (word, c) in t.terms() {
            out = out.add(&self.normal_form(word).scale(c));
        }
        out
    }

    /// Product in Cl_q(c): concatenate normal words and rewrite.
    pub fn mul(&self, a: &CliffordElement, b: &CliffordElement) -> CliffordElement {
        let mut out = CliffordElement::zero(self.n);
        for (wa, ca) in a.terms() {
            for (wb, cb) in b.terms() {
                let mut word = wa.letters();
                word.extend(wb.letters());
                out = out.add(&self.normal_form(&word).scale(&ca.mul(cb)));
            }
        }
        out
    }

    /// Left multiplication by a letter.
    pub fn left_mul_letter(&self, x: BasisSymbol, el: &CliffordElement) -> CliffordElement {
        let mut out = CliffordElement::zero(self.n);
        for (word, c) in el.terms() {
            let mut letters = vec![x];
            letters.extend(word.letters());
            out = out.add(&self.normal_form(&letters).scale(c));
        }
        out
    }
}

/// Outcome of the degree-3 overlap analysis.
#[derive(Clone, Debug)]
pub struct ConfluenceReport {
    pub overlaps_checked: usize,
    pub words_swept: usize,
    pub failures: Vec<String>,
}

impl ConfluenceReport {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Resolves every length-3 critical pair by reducing both one-step
/// divergences to normal form, and sweeps all (2N)³ words under the two
/// strategies.
pub fn check_confluence(rs: &RewriteSystem) -> ConfluenceReport {
    let alphabet = Alphabet::full(rs.n());
    let mut overlaps = 0usize;
    let mut failures = Vec::new();
    let words: Vec<Word> = alphabet.words(3).collect();
    for word in &words {
        let left_red = rs.rules.contains_key(&(word[0], word[1]));
        let right_red = rs.rules.contains_key(&(word[1], word[2]));
        if left_red && right_red {
            overlaps += 1;
            // one step at each overlap position, then full reduction
            let mut via_left = CliffordElement::zero(rs.n());
            for (replacement, rc) in &rs.rules[&(word[0], word[1])] {
                let mut next = replacement.clone();
                next.push(word[2]);
                via_left = via_left.add(&rs.normal_form(&next).scale(rc));
            }
            let mut via_right = CliffordElement::zero(rs.n());
            for (replacement, rc) in &rs.rules[&(word[1], word[2])] {
                let mut next = vec![word[0]];
                next.extend_from_slice(replacement);
                via_right = via_right.add(&rs.normal_form(&next).scale(rc));
            }
            if via_left != via_right {
                failures.push(format!(
                    "overlap {} is not confluent",
                    crate::uqact::word_to_string(word)
                ));
            }
        }
        let nf_l = rs.normal_form_with(word, Strategy::Leftmost);
        let nf_r = rs.normal_form_with(word, Strategy::Rightmost);
        if nf_l != nf_r {
            failures.push(format!(
                "strategies disagree on {}",
                crate::uqact::word_to_string(word)
            ));
        }
    }
    ConfluenceReport {
        overlaps_checked: overlaps,
        words_swept: words.len(),
        failures,
    }
}

/// Number of normal words in each filtration degree 0..=max_deg.
pub fn graded_dims_clifford(rs: &RewriteSystem, max_deg: usize) -> Vec<usize> {
    let mut counts = vec![0usize; max_deg + 1];
    for word in NormalWord::all(rs.n()) {
        let d = word.degree();
        if d <= max_deg {
            counts[d] += 1;
        }
    }
    counts
}

/// The invariant bilinear form (·,·)_c: c⟨·,·⟩ on V*⊗V, its braiding pullback
/// on V⊗V*, zero on V⊗V and V*⊗V*.
#[derive(Clone, Debug)]
pub struct BilinearFormC {
    n: usize,
    table: BTreeMap<(BasisSymbol, BasisSymbol), Scalar>,
}

impl BilinearFormC {
    pub fn new(n: usize, c: &Scalar) -> Self {
        let mut table = BTreeMap::new();
        let wv_inv = rhat_wv_inverse(n);
        let scale = c.mul(&Scalar::s_pow(1 - n as i64)); // c·q^{−1+1/N}
        for i in 1..=n {
            for j in 1..=n {
                if i == j {
                    table.insert((w(i), v(j)), c.clone());
                }
                // (v_i, w_j)_c = c q^{−1+1/N} ⟨·,·⟩ ∘ R̂^{−1}(v_i ⊗ w_j)
                let mut value = Scalar::zero();
                for (word, coeff) in wv_inv[&(i, j)].terms() {
                    if word[0].index == word[1].index {
                        value = value.add(coeff);
                    }
                }
                let value = value.mul(&scale);
                if !value.is_zero() {
                    table.insert((v(i), w(j)), value);
                }
            }
        }
        BilinearFormC { n, table }
    }

    pub fn value(&self, a: &BasisSymbol, b: &BasisSymbol) -> Scalar {
        self.table
            .get(&(*a, *b))
            .cloned()
            .unwrap_or_else(Scalar::zero)
    }

    /// Linear extension to a degree-2 tensor.
    pub fn apply(&self, t: &Tensor) -> Scalar {
        let mut out = Scalar::zero();
        for (word, c) in t.terms() {
            out = out.add(&self.value(&word[0], &word[1]).mul(c));
        }
        out
    }

    /// Testing door: override one table entry.
    pub fn with_entry(mut self, pair: (BasisSymbol, BasisSymbol), value: Scalar) -> Self {
        self.table.insert(pair, value);
        self
    }
}

/// (·,·)_c ∘ σ = (·,·)_c on every basis pair, with σ at the critical twist.
pub fn check_bilinear_symmetry(n: usize, c: &Scalar) -> bool {
    check_bilinear_symmetry_with(n, &BilinearFormC::new(n, c))
}

pub fn check_bilinear_symmetry_with(n: usize, form: &BilinearFormC) -> bool {
    let sigma = BraidingMap::sigma_critical(n);
    let alphabet = Alphabet::full(n);
    for a in alphabet.letters() {
        for b in alphabet.letters() {
            let t = Tensor::from_word(n, vec![*a, *b]);
            if form.apply(&sigma.apply2(&t)) != form.value(a, b) {
                return false;
            }
        }
    }
    true
}

/// Affine subspace of K ⊕ H^{⊗2} invariant under every generator; constants
/// transform by the counit (E, F kill them, K fixes them).
pub fn affine_invariant_under_uq(n: usize, space: &Subspace) -> bool {
    let alphabet = Alphabet::full(n);
    let m = alphabet.size();
    for g in all_generators(n) {
        for row in space.basis().rows() {
            let constant = row.get(0).cloned().unwrap_or_else(Scalar::zero);
            let mut t = Tensor::zero(n, 2);
            for (col, coeff) in row.iter().filter(|(col, _)| *col >= 1) {
                t.add_term(alphabet.col_to_word(col - 1, 2), coeff.clone());
            }
            let acted = act_on_tensor(n, g, &t);
            let acted_constant = match g.tag {
                GenTag::K | GenTag::KInv => constant,
                GenTag::E | GenTag::F => Scalar::zero(),
            };
            let mut image = SparseVec::zero(1 + m * m);
            image.add_to(0, acted_constant);
            for (word, coeff) in acted.terms() {
                image.add_to(1 + alphabet.word_to_col(word).unwrap(), coeff.clone());
            }
            if !space.contains(&image) {
                return false;
            }
        }
    }
    true
}

/// P_c is invariant under the quantum sl(N) action: Cl_q(c) is a module
/// algebra.
pub fn check_equivariance_clq(n: usize, c: &Scalar) -> Result<bool, CliffordError> {
    let qd = relations_twisted(n, Scalar::s_pow(n as i64 - 1))?;
    let deformed = deformation_unchecked(&qd, &delta_beta(&qd), c);
    Ok(affine_invariant_under_uq(n, &affine_relation_space(&deformed)))
}

/// T(f) with f(v_i) = c v_i, f(w_i) = w_i maps P_c onto P_1.
pub fn check_rescaling_iso(n: usize, c: &Scalar) -> Result<bool, CliffordError> {
    if c.is_zero() {
        return Err(CliffordError::ZeroC);
    }
    let qd = relations_twisted(n, Scalar::s_pow(n as i64 - 1))?;
    let beta = delta_beta(&qd);
    let p_c = affine_relation_space(&deformation_unchecked(&qd, &beta, c));
    let p_1 = affine_relation_space(&deformation_unchecked(&qd, &beta, &Scalar::one()));
    Ok(rescale_v(n, &p_c, c) == p_1)
}

/// Apply T(f), f(v_i) = scale·v_i, f(w_i) = w_i, to an affine subspace of
/// K ⊕ H^{⊗2}.
pub fn rescale_v(n: usize, space: &Subspace, scale: &Scalar) -> Subspace {
    let alphabet = Alphabet::full(n);
    let m = alphabet.size();
    let rows = space
        .basis()
        .rows()
        .iter()
        .map(|row| {
            let mut out = SparseVec::zero(1 + m * m);
            for (col, coeff) in row.iter() {
                if col == 0 {
                    out.add_to(0, coeff.clone());
                } else {
                    let word = alphabet.col_to_word(col - 1, 2);
                    let vcount = word.iter().filter(|s| s.kind == Kind::V).count();
                    let mut factor = Scalar::one();
                    for _ in 0..vcount {
                        factor = factor.mul(scale);
                    }
                    out.add_to(col, coeff.mul(&factor));
                }
            }
            out
        })
        .collect();
    Subspace::from_rows(SparseMat::from_rows(1 + m * m, rows))
}

/// Sparse linear operator on the 2^N-dimensional spinor space, stored by
/// columns.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LinMap {
    dim: usize,
    cols: Vec<SparseVec>,
}

impl LinMap {
    pub fn zero(dim: usize) -> Self {
        LinMap {
            dim,
            cols: vec![SparseVec::zero(dim); dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        LinMap {
            dim,
            cols: (0..dim).map(|i| SparseVec::unit(dim, i)).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn col(&self, j: usize) -> &SparseVec {
        &self.cols[j]
    }

    pub fn set_col(&mut self, j: usize, col: SparseVec) {
        self.cols[j] = col;
    }

    pub fn apply(&self, x: &SparseVec) -> SparseVec {
        let mut out = SparseVec::zero(self.dim);
        for (j, c) in x.iter() {
            out.add_scaled(&self.cols[j], c);
        }
        out
    }

    /// self ∘ other.
    pub fn compose(&self, other: &LinMap) -> LinMap {
        LinMap {
            dim: self.dim,
            cols: other.cols.iter().map(|c| self.apply(c)).collect(),
        }
    }

    pub fn add(&self, other: &LinMap) -> LinMap {
        LinMap {
            dim: self.dim,
            cols: self
                .cols
                .iter()
                .zip(&other.cols)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> LinMap {
        LinMap {
            dim: self.dim,
            cols: self.cols.iter().map(|col| col.scale(c)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.is_zero())
    }

    /// Flatten column-major into one vector of length dim².
    pub fn flatten(&self) -> SparseVec {
        let mut out = SparseVec::zero(self.dim * self.dim);
        for (j, col) in self.cols.iter().enumerate() {
            for (i, c) in col.iter() {
                out.set(j * self.dim + i, c.clone());
            }
        }
        out
    }
}

/// The creation/annihilation operators of the spinor representation.
#[derive(Clone, Debug)]
pub struct SpinorRep {
    n: usize,
    c: Scalar,
    /// e_ops[i−1] is left multiplication by v_i on the quotient.
    pub e_ops: Vec<LinMap>,
    /// i_ops[i−1] is left multiplication by w_i on the quotient.
    pub i_ops: Vec<LinMap>,
}

/// Left regular action of Cl_q(c) on the quotient by the left ideal of the
/// w_i; the basis consists of the 2^N v-only normal words.
pub fn spinor_rep(rs: &RewriteSystem) -> SpinorRep {
    let n = rs.n();
    let dim = 1usize << n;
    let project = |el: &CliffordElement| {
        let mut out = SparseVec::zero(dim);
        for (word, c) in el.terms() {
            if word.wmask == 0 {
                out.add_to(word.vmask as usize, c.clone());
            }
        }
        out
    };
    let letter_op = |letter: BasisSymbol| {
        let mut op = LinMap::zero(dim);
        for vmask in 0..dim as u32 {
            let basis_el = CliffordElement::from_term(
                n,
                NormalWord { vmask, wmask: 0 },
                Scalar::one(),
            );
            op.set_col(vmask as usize, project(&rs.left_mul_letter(letter, &basis_el)));
        }
        op
    };
    SpinorRep {
        n,
        c: rs.c().clone(),
        e_ops: (1..=n).map(|i| letter_op(v(i))).collect(),
        i_ops: (1..=n).map(|i| letter_op(w(i))).collect(),
    }
}

impl SpinorRep {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    /// Operator of a normal word: the composition of its letter operators
    /// in word order.
    pub fn word_op(&self, word: &NormalWord) -> LinMap {
        let mut op = LinMap::identity(self.dim());
        for sym in word.letters() {
            let letter = match sym.kind {
                Kind::V => &self.e_ops[sym.index - 1],
                Kind::W => &self.i_ops[sym.index - 1],
            };
            op = op.compose(letter);
        }
        op
    }

    /// 𝔦_i 𝔢_j + q^{1−δ_ij} 𝔢_j 𝔦_i − δ_ij q(q−q^{−1}) Σ_{k<i} 𝔢_k 𝔦_k
    /// = δ_ij c · id, as exact matrix identities for all i, j.
    pub fn check_cross_relations(&self) -> bool {
        let n = self.n;
        let dim = self.dim();
        let q = Scalar::q_pow(1, n);
        for i in 1..=n {
            for j in 1..=n {
                let mut lhs = self.i_ops[i - 1].compose(&self.e_ops[j - 1]);
                lhs = lhs.add(
                    &self.e_ops[j - 1]
                        .compose(&self.i_ops[i - 1])
                        .scale(&Scalar::q_pow(1 - (i == j) as i64, n)),
                );
                if i == j {
                    let corr = q.mul(&Scalar::q_minus_qinv(n)).neg();
                    for k in 1..i {
                        lhs = lhs.add(
                            &self.e_ops[k - 1].compose(&self.i_ops[k - 1]).scale(&corr),
                        );
                    }
                }
                let rhs = if i == j {
                    LinMap::identity(dim).scale(&self.c)
                } else {
                    LinMap::zero(dim)
                };
                if lhs != rhs {
                    return false;
                }
            }
        }
        true
    }
}

/// Rank of the map Cl_q(c) → End(spinor space) sending each normal word to
/// its operator; full rank 4^N makes it an isomorphism.
pub fn check_end_iso(rs: &RewriteSystem) -> (usize, bool) {
    let rep = spinor_rep(rs);
    let dim = rep.dim();
    let rows: Vec<SparseVec> = NormalWord::all(rs.n())
        .iter()
        .map(|word| rep.word_op(word).flatten())
        .collect();
    let r = rank(&SparseMat::from_rows(dim * dim, rows));
    (r, r == dim * dim)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn qs(n: usize, k: i64) -> Scalar {
        Scalar::q_pow(k, n)
    }

    fn cl(n: usize) -> RewriteSystem {
        build_clq(n, Scalar::u_pow(1)).unwrap()
    }

    #[test]
    fn rule_values_match_the_deformed_relations() {
        let n = 2;
        let rs = build_clq(n, Scalar::u_pow(1)).unwrap();
        // rule (e) at i=j=1: w1 v1 → −v1 w1 + c
        let rhs = &rs.rules()[&(w(1), v(1))];
        assert!(rhs.contains(&(vec![v(1), w(1)], Scalar::one().neg())));
        assert!(rhs.contains(&(Vec::new(), Scalar::u_pow(1))));
        // rule (e) at i=j=2: w2 v2 → −v2 w2 + q(q−q^{−1}) v1 w1 + c
        let rhs = &rs.rules()[&(w(2), v(2))];
        assert!(rhs.contains(&(vec![v(2), w(2)], Scalar::one().neg())));
        assert!(rhs.contains(&(
            vec![v(1), w(1)],
            qs(n, 1).mul(&Scalar::q_minus_qinv(n))
        )));
        // rule (e) at i≠j: w1 v2 → −q v2 w1
        let rhs = &rs.rules()[&(w(1), v(2))];
        assert_eq!(rhs, &vec![(vec![v(2), w(1)], qs(n, 1).neg())]);
    }

    #[test]
    fn corrupted_rules_fail_the_presentation_check() {
        let n = 2;
        let mut rules = standard_rules(n, &Scalar::one());
        rules.insert((w(1), v(2)), vec![(vec![v(2), w(1)], qs(n, 2).neg())]);
        let rs = RewriteSystem::from_rules(n, Scalar::one(), rules);
        let qd = relations_twisted(n, Scalar::s_pow(1)).unwrap();
        let deformed = deformation_unchecked(&qd, &delta_beta(&qd), &Scalar::one());
        assert_ne!(rs.rule_span(), affine_relation_space(&deformed));
        assert!(matches!(
            build_clq(n, Scalar::one()),
            Ok(_)
        ));
    }

    #[test]
    fn normal_form_examples() {
        let n = 2;
        let rs = cl(n);
        let c = Scalar::u_pow(1);
        // v1 v1 → 0
        assert!(rs.normal_form(&[v(1), v(1)]).is_zero());
        // w1 v1 w1 → c w1
        let nf = rs.normal_form(&[w(1), v(1), w(1)]);
        assert_eq!(
            nf,
            CliffordElement::from_term(n, NormalWord { vmask: 0, wmask: 1 }, c.clone())
        );
        // w2 v2 → −v2 w2 + q(q−q^{−1}) v1 w1 + c
        let nf = rs.normal_form(&[w(2), v(2)]);
        let mut expected = CliffordElement::from_term(
            n,
            NormalWord { vmask: 2, wmask: 2 },
            Scalar::one().neg(),
        );
        expected.add_term(
            NormalWord { vmask: 1, wmask: 1 },
            qs(n, 1).mul(&Scalar::q_minus_qinv(n)),
        );
        expected.add_term(NormalWord::ONE, c);
        assert_eq!(nf, expected);
    }

    #[test]
    fn confluence_holds_n2_and_n3() {
        for n in 2..=3usize {
            let rs = cl(n);
            let report = check_confluence(&rs);
            assert!(report.pass(), "failures: {:?}", report.failures);
            assert!(report.overlaps_checked > 0);
            assert_eq!(report.words_swept, (2 * n).pow(3));
        }
    }

    #[test]
    fn missing_correction_term_breaks_confluence() {
        let n = 2;
        let mut rules = standard_rules(n, &Scalar::one());
        // drop the Σ correction from rule (e) at i=j=2
        rules.insert(
            (w(2), v(2)),
            vec![
                (vec![v(2), w(2)], Scalar::one().neg()),
                (Vec::new(), Scalar::one()),
            ],
        );
        let rs = RewriteSystem::from_rules(n, Scalar::one(), rules);
        let report = check_confluence(&rs);
        assert!(!report.pass());
        assert!(report
            .failures
            .iter()
            .any(|f| f.contains("w2*v2*v1") || f.contains("w2*v2")));
    }

    #[test]
    fn graded_counts_are_binomials() {
        for n in 2..=3usize {
            let rs = cl(n);
            let dims = graded_dims_clifford(&rs, 2 * n);
            let binom = |n: usize, k: usize| -> usize {
                if k > n {
                    return 0;
                }
                (1..=k).fold(1usize, |acc, i| acc * (n - i + 1) / i)
            };
            for (deg, count) in dims.iter().enumerate() {
                assert_eq!(*count, binom(2 * n, deg));
            }
            assert_eq!(dims.iter().sum::<usize>(), 1 << (2 * n));
            // c = 0 control: identical counts
            let rs0 = build_clq(n, Scalar::zero()).unwrap();
            assert_eq!(graded_dims_clifford(&rs0, 2 * n), dims);
        }
    }

    #[test]
    fn normal_words_are_stable_and_filtration_never_increases() {
        let n = 2;
        let rs = cl(n);
        for word in NormalWord::all(n) {
            let nf = rs.normal_form(&word.letters());
            assert_eq!(nf, CliffordElement::from_term(n, word, Scalar::one()));
        }
        let alphabet = Alphabet::full(n);
        for word in alphabet.words(3) {
            let nf = rs.normal_form(&word);
            assert!(nf.filtration_degree() <= 3);
        }
    }

    #[test]
    fn multiplication_is_associative() {
        let n = 2;
        let rs = cl(n);
        let words = NormalWord::all(n);
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..12 {
            let pick = |rng: &mut ChaCha8Rng| {
                let w1 = words[rng.gen_range(0..words.len())];
                let coeff = Scalar::from_int(rng.gen_range(-3..4i64))
                    .add(&Scalar::s_pow(rng.gen_range(-1..2)));
                CliffordElement::from_term(n, w1, coeff)
            };
            let (a, b, c) = (pick(&mut rng), pick(&mut rng), pick(&mut rng));
            let left = rs.mul(&rs.mul(&a, &b), &c);
            let right = rs.mul(&a, &rs.mul(&b, &c));
            assert_eq!(left, right);
        }
    }

    #[test]
    fn bilinear_form_values() {
        let n = 2;
        let c = Scalar::u_pow(1);
        let form = BilinearFormC::new(n, &c);
        // (w_i, v_j)_c = c δ_ij
        assert_eq!(form.value(&w(1), &v(1)), c);
        assert!(form.value(&w(1), &v(2)).is_zero());
        // (v_1, w_1)_c = c: the inverse-braiding corner cancels exactly
        assert_eq!(form.value(&v(1), &w(1)), c);
        // vanishes on V×V and V*×V*
        assert!(form.value(&v(1), &v(2)).is_zero());
        assert!(form.value(&w(2), &w(1)).is_zero());
    }

    #[test]
    fn bilinear_symmetry() {
        for n in 2..=3usize {
            assert!(check_bilinear_symmetry(n, &Scalar::u_pow(1)));
            assert!(check_bilinear_symmetry(n, &Scalar::one()));
        }
        // a perturbed form is no longer σ-symmetric
        let broken = BilinearFormC::new(2, &Scalar::one())
            .with_entry((w(1), v(2)), Scalar::one());
        assert!(!check_bilinear_symmetry_with(2, &broken));
    }

    #[test]
    fn module_algebra_invariance() {
        assert!(check_equivariance_clq(2, &Scalar::one()).unwrap());
        assert!(check_equivariance_clq(3, &Scalar::u_pow(1)).unwrap());
    }

    #[test]
    fn non_invariant_affine_space_detected() {
        // replace the constant of the M_11 row by a constant on a V row:
        // the E/F action no longer preserves the span
        let n = 2;
        let qd = relations_twisted(n, Scalar::s_pow(1)).unwrap();
        let labels = qd.labels();
        let mut beta = vec![Scalar::zero(); labels.len()];
        beta[0] = Scalar::one(); // constant attached to V_11
        let space = affine_relation_space(&deformation_unchecked(&qd, &beta, &Scalar::one()));
        assert!(!affine_invariant_under_uq(n, &space));
    }

    #[test]
    fn rescaling_isomorphism() {
        let n = 2;
        assert!(check_rescaling_iso(n, &qs(n, 2)).unwrap());
        assert!(check_rescaling_iso(n, &Scalar::one()).unwrap());
        assert!(check_rescaling_iso(n, &Scalar::u_pow(1)).unwrap());
        assert_eq!(
            check_rescaling_iso(n, &Scalar::zero()).unwrap_err(),
            CliffordError::ZeroC
        );
        // the wrong map f(v) = c v, f(w) = c w does not carry P_c to P_1
        let qd = relations_twisted(n, Scalar::s_pow(1)).unwrap();
        let beta = delta_beta(&qd);
        let c = qs(n, 2);
        let p_c = affine_relation_space(&deformation_unchecked(&qd, &beta, &c));
        let p_1 = affine_relation_space(&deformation_unchecked(&qd, &beta, &Scalar::one()));
        let alphabet = Alphabet::full(n);
        let m = alphabet.size();
        let wrong = Subspace::from_rows(SparseMat::from_rows(
            1 + m * m,
            p_c.basis()
                .rows()
                .iter()
                .map(|row| {
                    let mut out = SparseVec::zero(1 + m * m);
                    for (col, coeff) in row.iter() {
                        if col == 0 {
                            out.add_to(0, coeff.clone());
                        } else {
                            // every letter picks up c
                            out.add_to(col, coeff.mul(&c).mul(&c));
                        }
                    }
                    out
                })
                .collect(),
        ));
        assert_ne!(wrong, p_1);
    }

    #[test]
    fn rescaling_composes_to_identity() {
        let n = 2;
        let c = Scalar::u_pow(1);
        let qd = relations_twisted(n, Scalar::s_pow(1)).unwrap();
        let p_1 = affine_relation_space(&deformation_unchecked(
            &qd,
            &delta_beta(&qd),
            &Scalar::one(),
        ));
        let there = rescale_v(n, &p_1, &c);
        let back = rescale_v(n, &there, &c.inv().unwrap());
        assert_eq!(back, p_1);
    }

    #[test]
    fn spinor_cross_relations() {
        for n in 2..=3usize {
            let rep = spinor_rep(&cl(n));
            assert!(rep.check_cross_relations(), "cross relations at N={n}");
        }
        // concrete instance: 𝔦1𝔢1 + 𝔢1𝔦1 = c·id and 𝔦1𝔢2 + q𝔢2𝔦1 = 0
        let n = 2;
        let rep = spinor_rep(&cl(n));
        let c = Scalar::u_pow(1);
        let anti = rep.i_ops[0]
            .compose(&rep.e_ops[0])
            .add(&rep.e_ops[0].compose(&rep.i_ops[0]));
        assert_eq!(anti, LinMap::identity(rep.dim()).scale(&c));
        let mixed = rep.i_ops[0]
            .compose(&rep.e_ops[1])
            .add(&rep.e_ops[1].compose(&rep.i_ops[0]).scale(&qs(n, 1)));
        assert!(mixed.is_zero());
        // 𝔢1² = 0 on the spinor space
        assert!(rep.e_ops[0].compose(&rep.e_ops[0]).is_zero());
    }

    #[test]
    fn spinor_rep_with_numeric_c() {
        let n = 2;
        let rs = build_clq(n, qs(n, 2)).unwrap();
        let rep = spinor_rep(&rs);
        assert!(rep.check_cross_relations());
    }

    #[test]
    fn end_iso_rank() {
        let n = 2;
        let (rank, full) = check_end_iso(&cl(n));
        assert_eq!(rank, 16);
        assert!(full);
        // c = 0 control: the homogeneous algebra annihilates the vacuum
        let rs0 = build_clq(n, Scalar::zero()).unwrap();
        let (rank0, full0) = check_end_iso(&rs0);
        assert!(rank0 < 16);
        assert!(!full0);
    }
}
