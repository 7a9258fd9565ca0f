//! Quadratic algebra data for Λ_q(V), Λ_q(V*) and the twisted exterior
//! algebra of H = V ⊕ V*.
//!
//! Relation spaces come with named spanning elements
//!
//!   V_ij = (id+σ)(v_i⊗v_j) = v_i⊗v_j + q^{δ_ij+1} v_j⊗v_i   (i ≥ j)
//!   W_ij = (id+σ)(w_i⊗w_j) = w_i⊗w_j + q^{δ_ij+1} w_j⊗w_i   (i ≤ j)
//!   M_ij = (id+σ_λ)(w_i⊗v_j)
//!        = w_i⊗v_j + λ'q^{−δ_ij} v_j⊗w_i − λ'δ_ij(q−q^{−1}) Σ_{k<i} v_k⊗w_k
//!
//! with λ' = λ q^{1/N}. Degree-n graded dimensions are computed by direct
//! linear algebra on H^{⊗n}, block-split along the (v-count, weight) grading
//! which every relation respects.

use crate::braiding::BraidingMap;
use crate::linalg::{rref_graded, SparseMat, SparseVec, Subspace};
use crate::scalar::{rat, Scalar};
use crate::uqact::{
    act_on_tensor, all_generators, v, w, word_weight, Alphabet, Kind, Tensor, Word,
};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum QuadraticError {
    #[error("degree too large: {0} exceeds the configured bound {1}")]
    DegreeTooLarge(usize, usize),
    #[error("sym3 basis deficiency: families span {family} but the intersection has dimension {intersection}")]
    Sym3BasisDeficiency { family: usize, intersection: usize },
    #[error("twist parameter must be nonzero")]
    ZeroLambda,
    #[error("relation space mismatch between named span and im(id+sigma)")]
    RelationMismatch,
}

/// Name of a relation-space basis element.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum RelLabel {
    V(usize, usize),
    W(usize, usize),
    M(usize, usize),
}

impl fmt::Display for RelLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RelLabel::V(i, j) => write!(f, "V_{i}{j}"),
            RelLabel::W(i, j) => write!(f, "W_{i}{j}"),
            RelLabel::M(i, j) => write!(f, "M_{i}{j}"),
        }
    }
}

/// Name of a degree-3 symmetrized family element.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum Sym3Label {
    V(usize, usize, usize),
    W(usize, usize, usize),
    X(usize, usize, usize),
    Y(usize, usize, usize),
}

impl fmt::Display for Sym3Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sym3Label::V(i, j, k) => write!(f, "V_{i}{j}{k}"),
            Sym3Label::W(i, j, k) => write!(f, "W_{i}{j}{k}"),
            Sym3Label::X(i, j, k) => write!(f, "X_{i}{j}{k}"),
            Sym3Label::Y(i, j, k) => write!(f, "Y_{i}{j}{k}"),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum AlgebraKind {
    ExteriorV,
    ExteriorW,
    Twisted,
}

/// Generators plus relation subspace, presenting T(H)/⟨R − β⟩.
#[derive(Clone, Debug)]
pub struct QuadraticData {
    pub kind: AlgebraKind,
    pub alphabet: Alphabet,
    pub sigma: BraidingMap,
    /// Named spanning elements of the relation space, in a fixed order.
    pub named: Vec<(RelLabel, Tensor)>,
    /// Canonical echelon basis of the relation space.
    pub relations: Subspace,
    /// β values on the named elements; None for the homogeneous algebra.
    pub constant_part: Option<Vec<Scalar>>,
}

/// (id+σ)(v_a ⊗ v_b); for a ≥ b this is the basis element V_ab.
pub fn v_rel(sigma: &BraidingMap, a: usize, b: usize) -> Tensor {
    sigma.sym2_apply(&Tensor::from_word(sigma.n(), vec![v(a), v(b)]))
}

/// (id+σ)(w_a ⊗ w_b); for a ≤ b this is the basis element W_ab.
pub fn w_rel(sigma: &BraidingMap, a: usize, b: usize) -> Tensor {
    sigma.sym2_apply(&Tensor::from_word(sigma.n(), vec![w(a), w(b)]))
}

/// M_ab = (id+σ_λ)(w_a ⊗ v_b), defined for every index pair.
pub fn m_rel(sigma: &BraidingMap, a: usize, b: usize) -> Tensor {
    sigma.sym2_apply(&Tensor::from_word(sigma.n(), vec![w(a), v(b)]))
}

fn named_exterior_v(sigma: &BraidingMap) -> Vec<(RelLabel, Tensor)> {
    let n = sigma.n();
    let mut named = Vec::new();
    for i in 1..=n {
        for j in 1..=i {
            named.push((RelLabel::V(i, j), v_rel(sigma, i, j)));
        }
    }
    named
}

fn named_exterior_w(sigma: &BraidingMap) -> Vec<(RelLabel, Tensor)> {
    let n = sigma.n();
    let mut named = Vec::new();
    for i in 1..=n {
        for j in i..=n {
            named.push((RelLabel::W(i, j), w_rel(sigma, i, j)));
        }
    }
    named
}

fn named_cross(sigma: &BraidingMap) -> Vec<(RelLabel, Tensor)> {
    let n = sigma.n();
    let mut named = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            named.push((RelLabel::M(i, j), m_rel(sigma, i, j)));
        }
    }
    named
}

fn relation_subspace(alphabet: &Alphabet, named: &[(RelLabel, Tensor)]) -> Subspace {
    let ambient = alphabet.size().pow(2);
    let rows = named.iter().map(|(_, t)| alphabet.tensor_to_vec(t)).collect();
    Subspace::from_rows_graded(
        SparseMat::from_rows(ambient, rows),
        &column_classes(alphabet, 2),
    )
}

/// Relations of the braided exterior algebra Λ_q(V): {V_ij}_{i≥j}.
pub fn relations_exterior_v(n: usize) -> QuadraticData {
    let sigma = BraidingMap::sigma_lambda(n, Scalar::one()).expect("nonzero");
    let alphabet = Alphabet::v_only(n);
    let named = named_exterior_v(&sigma);
    let relations = relation_subspace(&alphabet, &named);
    debug_assert_eq!(relations.dim(), n * (n + 1) / 2);
    QuadraticData {
        kind: AlgebraKind::ExteriorV,
        alphabet,
        sigma,
        named,
        relations,
        constant_part: None,
    }
}

/// Relations of Λ_q(V*): {W_ij}_{i≤j}.
pub fn relations_exterior_w(n: usize) -> QuadraticData {
    let sigma = BraidingMap::sigma_lambda(n, Scalar::one()).expect("nonzero");
    let alphabet = Alphabet::w_only(n);
    let named = named_exterior_w(&sigma);
    let relations = relation_subspace(&alphabet, &named);
    QuadraticData {
        kind: AlgebraKind::ExteriorW,
        alphabet,
        sigma,
        named,
        relations,
        constant_part: None,
    }
}

/// Relations of the twisted exterior algebra of H at twist λ:
/// R_H = R_V ⊕ R_{V*} ⊕ {M_ij}. Verifies R_H = im(id + σ_λ).
pub fn relations_twisted(n: usize, lambda: Scalar) -> Result<QuadraticData, QuadraticError> {
    if lambda.is_zero() {
        return Err(QuadraticError::ZeroLambda);
    }
    let sigma = BraidingMap::sigma_lambda(n, lambda).expect("nonzero");
    let alphabet = Alphabet::full(n);
    let mut named = named_exterior_v(&sigma);
    named.extend(named_exterior_w(&sigma));
    named.extend(named_cross(&sigma));
    let relations = relation_subspace(&alphabet, &named);
    if relations.dim() != n * (n + 1) + n * n {
        return Err(QuadraticError::RelationMismatch);
    }
    if sigma.sym2_image() != relations {
        return Err(QuadraticError::RelationMismatch);
    }
    Ok(QuadraticData {
        kind: AlgebraKind::Twisted,
        alphabet,
        sigma,
        named,
        relations,
        constant_part: None,
    })
}

/// Grading class of each column word: (v-count, weight) interned to ids.
/// Relation rows are homogeneous for it, which splits every echelon run
/// into small independent blocks.
pub fn column_classes(alphabet: &Alphabet, degree: usize) -> Vec<usize> {
    let n = alphabet.n;
    let mut interner: BTreeMap<(usize, Vec<i64>), usize> = BTreeMap::new();
    let mut classes = Vec::with_capacity(alphabet.size().pow(degree as u32));
    for word in alphabet.words(degree) {
        let vcount = word.iter().filter(|s| s.kind == Kind::V).count();
        let key = (vcount, word_weight(n, &word));
        let next = interner.len();
        classes.push(*interner.entry(key).or_insert(next));
    }
    classes
}

/// Default per-rank bound on Hilbert-series degrees; the cost grows as
/// (2N)^degree.
pub fn default_degree_bound(n: usize) -> usize {
    match n {
        2 => 6,
        3 => 4,
        _ => 3,
    }
}

impl QuadraticData {
    pub fn n(&self) -> usize {
        self.sigma.n()
    }

    pub fn generator_count(&self) -> usize {
        self.alphabet.size()
    }

    pub fn labels(&self) -> Vec<RelLabel> {
        self.named.iter().map(|(l, _)| *l).collect()
    }

    pub fn named_tensor(&self, label: RelLabel) -> Option<&Tensor> {
        self.named.iter().find(|(l, _)| *l == label).map(|(_, t)| t)
    }

    /// Expand a degree-2 tensor in the named spanning elements. Every named
    /// element owns one word that no other one contains (v_i⊗v_j for i ≥ j,
    /// w_i⊗w_j for i ≤ j, w_i⊗v_j), so the coefficients are direct readoffs;
    /// `None` when the remainder is nonzero, i.e. t ∉ R.
    pub fn expand_in_named(&self, t: &Tensor) -> Option<Vec<Scalar>> {
        debug_assert_eq!(t.degree(), 2);
        let n = self.n();
        let one_plus_q2 = Scalar::one().add(&Scalar::q_pow(2, n));
        let mut coeffs = Vec::with_capacity(self.named.len());
        let mut remainder = t.clone();
        for (label, rel) in &self.named {
            let (pivot_word, pivot_coeff) = match label {
                RelLabel::V(i, j) => (
                    vec![v(*i), v(*j)],
                    if i == j { one_plus_q2.clone() } else { Scalar::one() },
                ),
                RelLabel::W(i, j) => (
                    vec![w(*i), w(*j)],
                    if i == j { one_plus_q2.clone() } else { Scalar::one() },
                ),
                RelLabel::M(i, j) => (vec![w(*i), v(*j)], Scalar::one()),
            };
            let c = t.coeff(&pivot_word).div(&pivot_coeff).expect("pivot coeff nonzero");
            if !c.is_zero() {
                remainder = remainder.sub(&rel.scale(&c));
            }
            coeffs.push(c);
        }
        if remainder.is_zero() {
            Some(coeffs)
        } else {
            None
        }
    }

    /// Spanning rows of Σ_i H^{⊗i} ⊗ R ⊗ H^{⊗(deg−2−i)} inside H^{⊗deg}.
    pub fn relation_span_matrix(&self, deg: usize) -> SparseMat {
        debug_assert!(deg >= 2);
        let m = self.generator_count();
        let ambient = m.pow(deg as u32);
        let mut rows = Vec::new();
        for pos in 0..deg - 1 {
            let left = m.pow(pos as u32);
            let right = m.pow((deg - 2 - pos) as u32);
            for (_, rel) in &self.named {
                for li in 0..left {
                    for ri in 0..right {
                        let mut row = SparseVec::zero(ambient);
                        for (pair, c) in rel.terms() {
                            let a = self.letter_pos(pair[0].code(self.alphabet.n));
                            let b = self.letter_pos(pair[1].code(self.alphabet.n));
                            let col = ((li * m + a) * m + b) * right + ri;
                            row.add_to(col, c.clone());
                        }
                        rows.push(row);
                    }
                }
            }
        }
        SparseMat::from_rows(ambient, rows)
    }

    /// Dimension of the degree-n component of T(H)/⟨R⟩, computed as
    /// dim H^{⊗deg} − dim Σ_i H^{⊗i} ⊗ R ⊗ H^{⊗(deg−2−i)}.
    pub fn graded_dimension(&self, deg: usize, bound: usize) -> Result<usize, QuadraticError> {
        if deg > bound {
            return Err(QuadraticError::DegreeTooLarge(deg, bound));
        }
        let m = self.generator_count();
        if deg == 0 {
            return Ok(1);
        }
        if deg == 1 {
            return Ok(m);
        }
        let ambient = m.pow(deg as u32);
        let classes = column_classes(&self.alphabet, deg);
        let (_, rank) = rref_graded(&self.relation_span_matrix(deg), &classes);
        Ok(ambient - rank)
    }

    /// Position of a letter (given by its H-code) inside this alphabet.
    fn letter_pos(&self, code: usize) -> usize {
        let sym = crate::uqact::BasisSymbol::from_code(code, self.alphabet.n);
        self.alphabet
            .word_to_col(&vec![sym])
            .expect("letter outside alphabet")
    }

    /// (R ⊗ H) ∩ (H ⊗ R) as a canonical subspace of H^{⊗3}.
    pub fn degree3_intersection(&self) -> Subspace {
        let m = self.generator_count();
        let ambient = m.pow(3);
        let classes = column_classes(&self.alphabet, 3);
        let mut left_rows = Vec::new();
        let mut right_rows = Vec::new();
        for (_, rel) in &self.named {
            for e in 0..m {
                let mut left = SparseVec::zero(ambient);
                let mut right = SparseVec::zero(ambient);
                for (pair, c) in rel.terms() {
                    let a = self.letter_pos(pair[0].code(self.alphabet.n));
                    let b = self.letter_pos(pair[1].code(self.alphabet.n));
                    left.add_to((a * m + b) * m + e, c.clone());
                    right.add_to((e * m + a) * m + b, c.clone());
                }
                left_rows.push(left);
                right_rows.push(right);
            }
        }
        let left = Subspace::from_rows_graded(SparseMat::from_rows(ambient, left_rows), &classes);
        let right = Subspace::from_rows_graded(SparseMat::from_rows(ambient, right_rows), &classes);
        Subspace::intersect_graded(&left, &right, &classes).expect("same ambient")
    }

    /// The admissible index triples of the symmetrized degree-3 families.
    pub fn sym3_labels(&self) -> Vec<Sym3Label> {
        let n = self.n();
        let mut labels = Vec::new();
        if matches!(self.kind, AlgebraKind::ExteriorV | AlgebraKind::Twisted) {
            for i in 1..=n {
                for j in 1..=i {
                    for k in 1..=j {
                        labels.push(Sym3Label::V(i, j, k));
                    }
                }
            }
        }
        if matches!(self.kind, AlgebraKind::ExteriorW | AlgebraKind::Twisted) {
            for i in 1..=n {
                for j in i..=n {
                    for k in j..=n {
                        labels.push(Sym3Label::W(i, j, k));
                    }
                }
            }
        }
        if matches!(self.kind, AlgebraKind::Twisted) {
            for i in 1..=n {
                for j in 1..=n {
                    for k in 1..=j {
                        labels.push(Sym3Label::X(i, j, k));
                    }
                }
            }
            for i in 1..=n {
                for j in i..=n {
                    for k in 1..=n {
                        labels.push(Sym3Label::Y(i, j, k));
                    }
                }
            }
        }
        labels
    }

    pub fn sym3_element(&self, label: Sym3Label) -> Tensor {
        let n = self.n();
        let word = match label {
            Sym3Label::V(i, j, k) => vec![v(i), v(j), v(k)],
            Sym3Label::W(i, j, k) => vec![w(i), w(j), w(k)],
            Sym3Label::X(i, j, k) => vec![w(i), v(j), v(k)],
            Sym3Label::Y(i, j, k) => vec![w(i), w(j), v(k)],
        };
        self.sigma.sym3_apply(&Tensor::from_word(n, word))
    }

    /// The symmetrized degree-3 families, checked to be linearly independent
    /// and to span exactly (R ⊗ H) ∩ (H ⊗ R).
    pub fn sym3_basis(&self) -> Result<Vec<(Sym3Label, Tensor)>, QuadraticError> {
        let family: Vec<(Sym3Label, Tensor)> = self
            .sym3_labels()
            .into_iter()
            .map(|l| (l, self.sym3_element(l)))
            .collect();
        let ambient = self.generator_count().pow(3);
        let classes = column_classes(&self.alphabet, 3);
        let rows = family
            .iter()
            .map(|(_, t)| self.alphabet.tensor_to_vec(t))
            .collect();
        let span = Subspace::from_rows_graded(SparseMat::from_rows(ambient, rows), &classes);
        let intersection = self.degree3_intersection();
        if span.dim() != family.len() || span != intersection {
            return Err(QuadraticError::Sym3BasisDeficiency {
                family: span.dim(),
                intersection: intersection.dim(),
            });
        }
        Ok(family)
    }

    /// The relation space is invariant under every generator of quantum
    /// sl(N) — the module-algebra prerequisite.
    pub fn check_relations_invariant(&self) -> bool {
        let n = self.n();
        for g in all_generators(n) {
            for (_, rel) in &self.named {
                let image = act_on_tensor(n, g, rel);
                if !self.relations.contains(&self.alphabet.tensor_to_vec(&image)) {
                    return false;
                }
            }
        }
        true
    }

    /// At s → 1, u → 1 the relation space becomes the span of all
    /// x⊗y + y⊗x, the classical symmetric squares.
    pub fn check_classical_limit(&self) -> bool {
        let m = self.generator_count();
        let ambient = m * m;
        let mut specialized = Vec::new();
        for (_, rel) in &self.named {
            let mut row = SparseVec::zero(ambient);
            for (word, c) in rel.terms() {
                let value = match c.specialize(&rat(1), &rat(1)) {
                    Ok(val) => val,
                    Err(_) => return false,
                };
                row.add_to(
                    self.alphabet.word_to_col(word).unwrap(),
                    Scalar::from_rat(value),
                );
            }
            specialized.push(row);
        }
        let got = Subspace::from_rows(SparseMat::from_rows(ambient, specialized));
        let mut flip_rows = Vec::new();
        for a in 0..m {
            for b in a..m {
                let mut row = SparseVec::zero(ambient);
                row.add_to(a * m + b, Scalar::one());
                row.add_to(b * m + a, Scalar::one());
                flip_rows.push(row);
            }
        }
        let classical = Subspace::from_rows(SparseMat::from_rows(ambient, flip_rows));
        got == classical
    }
}

/// One verified degree-3 expansion identity.
#[derive(Clone, Debug)]
pub struct ExpansionCheck {
    pub name: String,
    pub pass: bool,
}

fn d(a: usize, b: usize) -> i64 {
    (a == b) as i64
}

/// Verifies, for every admissible index triple, the expansions of the
/// symmetrized degree-3 elements into R⊗H (left form) and H⊗R (right form).
pub fn check_deg3_expansions(qd: &QuadraticData) -> Vec<ExpansionCheck> {
    let n = qd.n();
    let sigma = &qd.sigma;
    let q_qinv = Scalar::q_minus_qinv(n);
    let lambda_prime = sigma.lambda().mul(&Scalar::s_pow(1));
    let lp2 = lambda_prime.mul(&lambda_prime);
    let qp = |e: i64| Scalar::q_pow(e, n);
    let letter = |sym| Tensor::from_word(n, vec![sym]);
    let mut checks = Vec::new();
    let mut push = |label: Sym3Label, side: &str, lhs: &Tensor, rhs: &Tensor| {
        checks.push(ExpansionCheck {
            name: format!("{label} {side}"),
            pass: lhs == rhs,
        });
    };

    for label in qd.sym3_labels() {
        let lhs = qd.sym3_element(label);
        match label {
            Sym3Label::V(i, j, k) | Sym3Label::W(i, j, k) => {
                let rel: Box<dyn Fn(usize, usize) -> Tensor> = match label {
                    Sym3Label::V(..) => Box::new(|a, b| v_rel(sigma, a, b)),
                    _ => Box::new(|a, b| w_rel(sigma, a, b)),
                };
                let gen: Box<dyn Fn(usize) -> Tensor> = match label {
                    Sym3Label::V(..) => Box::new(move |a| letter(v(a))),
                    _ => Box::new(move |a| letter(w(a))),
                };
                let left = Tensor::product(&rel(i, j), &gen(k))
                    .add(&Tensor::product(&rel(i, k), &gen(j)).scale(&qp(d(j, k) + 1)))
                    .add(&Tensor::product(&rel(j, k), &gen(i)).scale(&qp(d(i, j) + d(i, k) + 2)));
                push(label, "left", &lhs, &left);
                let right = Tensor::product(&gen(i), &rel(j, k))
                    .add(&Tensor::product(&gen(j), &rel(i, k)).scale(&qp(d(i, j) + 1)))
                    .add(&Tensor::product(&gen(k), &rel(i, j)).scale(&qp(d(j, k) + d(i, k) + 2)));
                push(label, "right", &lhs, &right);
            }
            Sym3Label::X(i, j, k) => {
                // left form, in R⊗H
                let mut left = Tensor::product(&v_rel(sigma, j, k), &letter(w(i)))
                    .scale(&lp2.mul(&qp(-d(i, j) - d(i, k))));
                left = left.add(
                    &Tensor::product(&m_rel(sigma, i, k), &letter(v(j))).scale(&qp(d(j, k) + 1)),
                );
                left = left.add(&Tensor::product(&m_rel(sigma, i, j), &letter(v(k))));
                for l in 1..i {
                    let mut corr = Tensor::zero(n, 2);
                    if i == k {
                        corr = corr.add(&v_rel(sigma, j, l).scale(&qp(-d(i, j))));
                    }
                    if i == j {
                        corr = corr.add(&v_rel(sigma, l, k).scale(&qp(-d(l, k))));
                    }
                    left = left
                        .sub(&Tensor::product(&corr, &letter(w(l))).scale(&lp2.mul(&q_qinv)));
                }
                if i == j && j > k {
                    let c = lp2.mul(&q_qinv).mul(&q_qinv);
                    for l in 1..k {
                        left = left
                            .add(&Tensor::product(&v_rel(sigma, k, l), &letter(w(l))).scale(&c));
                    }
                }
                push(label, "left", &lhs, &left);

                // right form, in H⊗R
                let mut right = Tensor::product(&letter(w(i)), &v_rel(sigma, j, k));
                right = right.add(
                    &Tensor::product(&letter(v(j)), &m_rel(sigma, i, k))
                        .scale(&lambda_prime.mul(&qp(-d(i, j)))),
                );
                right = right.add(
                    &Tensor::product(&letter(v(k)), &m_rel(sigma, i, j))
                        .scale(&lambda_prime.mul(&qp(-d(i, k) + d(j, k) + 1))),
                );
                for l in 1..i {
                    let mut corr = Tensor::zero(n, 2);
                    if i == j {
                        corr = corr.add(&m_rel(sigma, l, k));
                    }
                    if i == k {
                        corr = corr.add(&m_rel(sigma, l, j).scale(&qp(d(j, k) + 1)));
                    }
                    right = right.sub(
                        &Tensor::product(&letter(v(l)), &corr).scale(&lambda_prime.mul(&q_qinv)),
                    );
                }
                push(label, "right", &lhs, &right);
            }
            Sym3Label::Y(i, j, k) => {
                // left form, in R⊗H
                let mut left = Tensor::product(&w_rel(sigma, i, j), &letter(v(k)));
                left = left.add(
                    &Tensor::product(&m_rel(sigma, i, k), &letter(w(j)))
                        .scale(&lambda_prime.mul(&qp(-d(j, k)))),
                );
                left = left.add(
                    &Tensor::product(&m_rel(sigma, j, k), &letter(w(i)))
                        .scale(&lambda_prime.mul(&qp(d(i, j) - d(i, k) + 1))),
                );
                for l in 1..k {
                    let mut corr = Tensor::zero(n, 2);
                    if j == k {
                        corr = corr.add(&m_rel(sigma, i, l));
                    }
                    if i == k {
                        corr = corr.add(&m_rel(sigma, j, l).scale(&qp(d(i, j) + 1)));
                    }
                    left = left.sub(
                        &Tensor::product(&corr, &letter(w(l))).scale(&lambda_prime.mul(&q_qinv)),
                    );
                }
                push(label, "left", &lhs, &left);

                // right form, in H⊗R
                let mut right = Tensor::product(&letter(w(i)), &m_rel(sigma, j, k));
                right = right.add(
                    &Tensor::product(&letter(w(j)), &m_rel(sigma, i, k)).scale(&qp(d(i, j) + 1)),
                );
                right = right.add(
                    &Tensor::product(&letter(v(k)), &w_rel(sigma, i, j))
                        .scale(&lp2.mul(&qp(-d(j, k) - d(i, k)))),
                );
                for l in 1..k {
                    let mut corr = Tensor::zero(n, 2);
                    if i == k {
                        corr = corr.add(&w_rel(sigma, l, j).scale(&qp(-d(j, k))));
                    }
                    if j == k {
                        corr = corr.add(&w_rel(sigma, i, l).scale(&qp(-d(i, l))));
                    }
                    right = right
                        .sub(&Tensor::product(&letter(v(l)), &corr).scale(&lp2.mul(&q_qinv)));
                }
                if j == k && j > i {
                    let c = lp2.mul(&q_qinv).mul(&q_qinv);
                    for m in 1..i {
                        right = right
                            .add(&Tensor::product(&letter(v(m)), &w_rel(sigma, m, i)).scale(&c));
                    }
                }
                push(label, "right", &lhs, &right);
            }
        }
    }
    checks
}

/// (id+σ_λ)(V⊗V*) = (id+σ_λ)(V*⊗V) as subspaces of H⊗H.
pub fn check_cross_block_images(sigma: &BraidingMap) -> bool {
    let n = sigma.n();
    let alphabet = Alphabet::full(n);
    let ambient = alphabet.size().pow(2);
    let image_of = |words: Vec<Word>| {
        let rows = words
            .into_iter()
            .map(|word| alphabet.tensor_to_vec(&sigma.sym2_apply(&Tensor::from_word(n, word))))
            .collect();
        Subspace::from_rows(SparseMat::from_rows(ambient, rows))
    };
    let mut vw = Vec::new();
    let mut wv = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            vw.push(vec![v(i), w(j)]);
            wv.push(vec![w(i), v(j)]);
        }
    }
    image_of(vw) == image_of(wv)
}
