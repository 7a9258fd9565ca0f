//! Classification of quadratic-constant PBW-deformations.
//!
//! A deformation is a linear map β : R → K with β⊗id − id⊗β = 0 on the
//! intersection (R⊗H) ∩ (H⊗R). Each symmetrized degree-3 basis element t is
//! expanded in R⊗H and in H⊗R; equating the two β-images of t produces one
//! linear equation per generator, and the solution space of the stacked
//! system is computed by full symbolic elimination. The special twist locus,
//! where the solution space jumps, is recovered from the gcd of maximal
//! minors of the constraint matrix viewed over Q(s)[u], and every reported
//! root is certified by re-running the classification at that twist.

use crate::linalg::{kernel, rank, SparseMat, SparseVec, Subspace};
use crate::quadratic::{relations_twisted, QuadraticData, RelLabel};
use crate::scalar::{mpoly_gcd, Exp, MPoly, Scalar};
use crate::uqact::Tensor;
use rand::seq::SliceRandom;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PbwError {
    #[error("algebra already carries a constant part")]
    NotHomogeneous,
    #[error("degree-3 element failed membership in R⊗H or H⊗R")]
    IntersectionMembership,
    #[error("beta vector is not in the solution space")]
    BetaNotInSolutionSpace,
    #[error("quadratic data construction failed: {0}")]
    Quadratic(#[from] crate::quadratic::QuadraticError),
}

/// Solution space of the β-constraints, expressed on the named relation
/// basis elements.
#[derive(Clone, Debug)]
pub struct BetaSolutionSpace {
    pub unknown_labels: Vec<RelLabel>,
    pub solution_basis: Vec<Vec<Scalar>>,
    pub dimension: usize,
}

impl BetaSolutionSpace {
    /// β value of a basis solution on one named element.
    pub fn value(&self, basis_index: usize, label: RelLabel) -> Option<&Scalar> {
        let col = self.unknown_labels.iter().position(|l| *l == label)?;
        self.solution_basis.get(basis_index).map(|v| &v[col])
    }

    fn as_subspace(&self) -> Subspace {
        let ncols = self.unknown_labels.len();
        let rows = self
            .solution_basis
            .iter()
            .map(|sol| {
                SparseVec::from_entries(ncols, sol.iter().enumerate().map(|(i, c)| (i, c.clone())))
            })
            .collect();
        Subspace::from_rows(SparseMat::from_rows(ncols, rows))
    }
}

/// Slice a degree-3 tensor along one boundary letter: `first = true` peels
/// words starting with the letter at alphabet position `pos`, returning the
/// trailing degree-2 part; otherwise it peels the last letter.
fn boundary_slice(qd: &QuadraticData, t: &Tensor, pos: usize, first: bool) -> Tensor {
    let n = qd.n();
    let mut out = Tensor::zero(n, 2);
    for (word, c) in t.terms() {
        let (boundary, pair) = if first {
            (word[0], vec![word[1], word[2]])
        } else {
            (word[2], vec![word[0], word[1]])
        };
        if qd.alphabet.word_to_col(&vec![boundary]) == Some(pos) {
            out.add_term(pair, c.clone());
        }
    }
    out
}

/// Constraint rows for one degree-3 intersection element: for each
/// generator e, the equation (β⊗id)t − (id⊗β)t = 0 read off in slot e.
fn constraint_rows_for(qd: &QuadraticData, t: &Tensor) -> Result<Vec<SparseVec>, PbwError> {
    let m = qd.generator_count();
    let unknowns = qd.named.len();
    let mut rows = Vec::with_capacity(m);
    for e in 0..m {
        // t = Σ_m r_m ⊗ e_k: the slice at the last slot carries β⊗id
        let left_slice = boundary_slice(qd, t, e, false);
        let left = qd
            .expand_in_named(&left_slice)
            .ok_or(PbwError::IntersectionMembership)?;
        let right_slice = boundary_slice(qd, t, e, true);
        let right = qd
            .expand_in_named(&right_slice)
            .ok_or(PbwError::IntersectionMembership)?;
        let mut row = SparseVec::zero(unknowns);
        for (col, (a, b)) in left.into_iter().zip(right).enumerate() {
            row.add_to(col, a.sub(&b));
        }
        rows.push(row);
    }
    Ok(rows)
}

/// The stacked β-constraint system over the named relation elements: one
/// block of `generator_count` equations per symmetrized degree-3 element.
pub fn build_beta_constraints(qd: &QuadraticData) -> Result<SparseMat, PbwError> {
    if qd.constant_part.is_some() {
        return Err(PbwError::NotHomogeneous);
    }
    let family = qd.sym3_basis()?;
    let mut mat = SparseMat::new(qd.named.len());
    for (_, t) in &family {
        for row in constraint_rows_for(qd, t)? {
            mat.push_row(row);
        }
    }
    Ok(mat)
}

/// Same system, built from an arbitrary spanning set of the intersection
/// instead of the symmetrized family. The solution space is independent of
/// this choice.
pub fn build_beta_constraints_from(
    qd: &QuadraticData,
    spanning: &[Tensor],
) -> Result<SparseMat, PbwError> {
    if qd.constant_part.is_some() {
        return Err(PbwError::NotHomogeneous);
    }
    let mut mat = SparseMat::new(qd.named.len());
    for t in spanning {
        for row in constraint_rows_for(qd, t)? {
            mat.push_row(row);
        }
    }
    Ok(mat)
}

/// Exact nullspace of the β-constraints, by full symbolic elimination.
pub fn classify(qd: &QuadraticData) -> Result<BetaSolutionSpace, PbwError> {
    let constraints = build_beta_constraints(qd)?;
    let null = kernel(&constraints);
    let unknowns = qd.named.len();
    let solution_basis = null
        .basis()
        .rows()
        .iter()
        .map(|row| {
            (0..unknowns)
                .map(|c| row.get(c).cloned().unwrap_or_else(Scalar::zero))
                .collect()
        })
        .collect::<Vec<Vec<Scalar>>>();
    Ok(BetaSolutionSpace {
        unknown_labels: qd.labels(),
        dimension: solution_basis.len(),
        solution_basis,
    })
}

/// Attach a constant part: the nonhomogeneous data presenting T(H)/⟨R − β⟩.
/// `beta` is given on the named elements and must solve the constraints.
pub fn assemble_deformation(
    qd: &QuadraticData,
    beta: &[Scalar],
    scale: &Scalar,
) -> Result<QuadraticData, PbwError> {
    assert_eq!(beta.len(), qd.named.len());
    let solutions = classify(qd)?;
    let space = solutions.as_subspace();
    let candidate = SparseVec::from_entries(
        beta.len(),
        beta.iter().enumerate().map(|(i, c)| (i, c.clone())),
    );
    if !candidate.is_zero() && !space.contains(&candidate) {
        return Err(PbwError::BetaNotInSolutionSpace);
    }
    Ok(deformation_unchecked(qd, beta, scale))
}

/// Attach a constant part without re-solving the constraint system; for β
/// vectors already known to be solutions.
pub fn deformation_unchecked(qd: &QuadraticData, beta: &[Scalar], scale: &Scalar) -> QuadraticData {
    let mut out = qd.clone();
    out.constant_part = Some(beta.iter().map(|b| b.mul(scale)).collect());
    out
}

/// The β vector of the critical-twist deformation: β(M_ii) = 1, all other
/// named values 0.
pub fn delta_beta(qd: &QuadraticData) -> Vec<Scalar> {
    qd.labels()
        .iter()
        .map(|label| match label {
            RelLabel::M(i, j) if i == j => Scalar::one(),
            _ => Scalar::zero(),
        })
        .collect()
}

/// Affine relation space P = {x − β(x)} ⊂ K ⊕ H^{⊗2}; coordinate 0 is the
/// constant and the words follow shifted by one.
pub fn affine_relation_space(qd: &QuadraticData) -> Subspace {
    let m = qd.generator_count();
    let ambient = 1 + m * m;
    let zeros = vec![Scalar::zero(); qd.named.len()];
    let beta = qd.constant_part.as_deref().unwrap_or(&zeros);
    let rows = qd
        .named
        .iter()
        .zip(beta)
        .map(|((_, rel), b)| {
            let mut row = SparseVec::zero(ambient);
            row.add_to(0, b.neg());
            for (word, c) in rel.terms() {
                row.add_to(1 + qd.alphabet.word_to_col(word).unwrap(), c.clone());
            }
            row
        })
        .collect();
    Subspace::from_rows(SparseMat::from_rows(ambient, rows))
}

/// Result of the special-twist search.
#[derive(Clone, Debug)]
pub struct SpecialLambdaReport {
    /// Certified twist values where the solution dimension jumps.
    pub special: Vec<Scalar>,
    /// Solution dimension at generic λ.
    pub generic_dimension: usize,
    /// Solution dimension at each certified special value.
    pub special_dimensions: Vec<usize>,
    /// Square-free minor-gcd factors that could not be split into roots
    /// over Q(s); empty in every verified configuration.
    pub unresolved: Vec<String>,
}

/// Clear denominators row by row, turning the constraint matrix into rows
/// of polynomials. Row scaling by nonzero polynomials can only enlarge the
/// root set of the minor gcd, never shrink it; certification prunes the
/// spurious roots back out.
fn clear_rows(mat: &SparseMat) -> Vec<BTreeMap<usize, MPoly>> {
    mat.rows()
        .iter()
        .filter(|r| !r.is_zero())
        .map(|row| {
            let mut lcm = MPoly::one();
            for (_, c) in row.iter() {
                let den = c.den();
                let g = mpoly_gcd(&lcm, den);
                lcm = lcm.mul(&den.div_exact(&g).expect("gcd divides"));
            }
            row.iter()
                .map(|(i, c)| {
                    let scaled = c
                        .num()
                        .mul(&lcm.div_exact(c.den()).expect("lcm divisible by den"));
                    (i, scaled)
                })
                .collect()
        })
        .collect()
}

/// One maximal minor via fraction-free Bareiss elimination on the rows in
/// the given order; None when the chosen order does not reach full rank.
fn bareiss_minor(rows: &[BTreeMap<usize, MPoly>], ncols: usize, order: &[usize]) -> Option<MPoly> {
    let mut prev = MPoly::one();
    let mut pivot_count = 0usize;
    let mut pool: Vec<BTreeMap<usize, MPoly>> = order.iter().map(|&i| rows[i].clone()).collect();
    let mut last_pivot = MPoly::one();
    for col in 0..ncols {
        // promote a row with a nonzero entry in this column, preferring few terms
        let mut best: Option<(usize, usize)> = None;
        for (k, r) in pool.iter().enumerate() {
            if let Some(p) = r.get(&col) {
                if !p.is_zero() {
                    let sz = p.num_terms();
                    if best.map_or(true, |(_, b)| sz < b) {
                        best = Some((k, sz));
                    }
                }
            }
        }
        let Some((k, _)) = best else {
            return None; // this row order missed full column rank
        };
        let pivot_row = pool.swap_remove(k);
        let pivot = pivot_row.get(&col).unwrap().clone();
        for r in pool.iter_mut() {
            let r_col = match r.get(&col) {
                Some(c) => c.clone(),
                None => {
                    // still divide by the previous pivot: scale-and-cancel
                    let mut updated = BTreeMap::new();
                    for (c, val) in r.iter() {
                        if *c > col {
                            let num = val.mul(&pivot);
                            updated.insert(
                                *c,
                                num.div_exact(&prev).expect("Bareiss division is exact"),
                            );
                        }
                    }
                    *r = updated;
                    continue;
                }
            };
            let mut updated: BTreeMap<usize, MPoly> = BTreeMap::new();
            let keys: std::collections::BTreeSet<usize> = r
                .keys()
                .chain(pivot_row.keys())
                .copied()
                .filter(|c| *c > col)
                .collect();
            for c in keys {
                let a = r.get(&c).cloned().unwrap_or_else(MPoly::zero);
                let b = pivot_row.get(&c).cloned().unwrap_or_else(MPoly::zero);
                let num = a.mul(&pivot).sub(&b.mul(&r_col));
                if num.is_zero() {
                    continue;
                }
                updated.insert(c, num.div_exact(&prev).expect("Bareiss division is exact"));
            }
            *r = updated;
        }
        prev = pivot.clone();
        last_pivot = pivot;
        pivot_count += 1;
        pool.retain(|r| !r.is_empty());
    }
    (pivot_count == ncols).then_some(last_pivot)
}

/// Strip the Q(s) content and any u-monomial factor, leaving a primitive
/// polynomial in u whose roots are the nonzero candidate special values
/// (u = 0 is excluded: λ = 0 is not a twist).
fn u_primitive_part(p: &MPoly) -> MPoly {
    if p.is_zero() {
        return MPoly::zero();
    }
    let mut coeffs: Vec<MPoly> = vec![MPoly::zero(); p.deg_u() as usize + 1];
    for (e, r) in p.terms() {
        coeffs[e.eu as usize] =
            coeffs[e.eu as usize].add(&MPoly::monomial(Exp { es: e.es, eu: 0 }, r.clone()));
    }
    while coeffs.first().map_or(false, |c| c.is_zero()) {
        coeffs.remove(0); // factor out u
    }
    let content = coeffs
        .iter()
        .filter(|c| !c.is_zero())
        .fold(MPoly::zero(), |acc, c| mpoly_gcd(&acc, c));
    let mut out = MPoly::zero();
    for (k, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let reduced = c.div_exact(&content).expect("content divides");
        for (e, r) in reduced.terms() {
            out = out.add(&MPoly::monomial(
                Exp {
                    es: e.es,
                    eu: k as u32,
                },
                r.clone(),
            ));
        }
    }
    out
}

/// Square-free part with respect to u.
fn u_squarefree(p: &MPoly) -> MPoly {
    if p.deg_u() == 0 {
        return p.clone();
    }
    let g = mpoly_gcd(p, &p.derivative_u());
    u_primitive_part(&p.div_exact(&g).expect("gcd divides"))
}

/// Twist values where the β-constraint matrix of the twisted algebra drops
/// rank. Computed from the gcd of maximal minors over Q(s)[u]; every root
/// is certified by classifying at the specialized twist.
pub fn find_special_lambda(n: usize) -> Result<SpecialLambdaReport, PbwError> {
    let qd = relations_twisted(n, Scalar::u_pow(1))?;
    let constraints = build_beta_constraints(&qd)?;
    let generic_rank = rank(&constraints);
    let generic_dimension = qd.named.len() - generic_rank;
    let rows = clear_rows(&constraints);

    let mut gcd_so_far = MPoly::zero();
    let mut stable_rounds = 0usize;
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for round in 0..12 {
        let mut order: Vec<usize> = (0..rows.len()).collect();
        match round {
            0 => {}
            1 => order.reverse(),
            _ => order.shuffle(&mut rng),
        }
        let Some(minor) = bareiss_minor(&rows, constraints.ncols(), &order) else {
            continue;
        };
        let reduced = u_primitive_part(&minor);
        let next = if gcd_so_far.is_zero() {
            reduced
        } else {
            u_primitive_part(&mpoly_gcd(&gcd_so_far, &reduced))
        };
        if next == gcd_so_far {
            stable_rounds += 1;
        } else {
            stable_rounds = 0;
            gcd_so_far = next;
        }
        if gcd_so_far.deg_u() <= 1 || stable_rounds >= 3 {
            break;
        }
    }

    let mut special = Vec::new();
    let mut special_dimensions = Vec::new();
    let mut unresolved = Vec::new();
    let candidate = u_squarefree(&gcd_so_far);
    if candidate.deg_u() == 1 {
        // c1(s)·u + c0(s) = 0 ⇒ u = −c0/c1
        let mut c0 = Scalar::zero();
        let mut c1 = Scalar::zero();
        for (e, r) in candidate.terms() {
            let mono = Scalar::from_poly(MPoly::monomial(Exp { es: e.es, eu: 0 }, r.clone()));
            if e.eu == 0 {
                c0 = c0.add(&mono);
            } else {
                c1 = c1.add(&mono);
            }
        }
        let root = c0.neg().div(&c1).expect("leading coefficient nonzero");
        if !root.is_zero() {
            // certify: the solution space must genuinely jump at the root
            let qd_special = relations_twisted(n, root.clone())?;
            let dim = classify(&qd_special)?.dimension;
            if dim > generic_dimension {
                special.push(root);
                special_dimensions.push(dim);
            }
        }
    } else if candidate.deg_u() > 1 {
        unresolved.push(Scalar::from_poly(candidate).to_string());
    }

    Ok(SpecialLambdaReport {
        special,
        generic_dimension,
        special_dimensions,
        unresolved,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadratic::{relations_exterior_v, relations_exterior_w, Sym3Label};
    use crate::uqact::v;

    fn u() -> Scalar {
        Scalar::u_pow(1)
    }

    fn critical(n: usize) -> Scalar {
        Scalar::s_pow(n as i64 - 1)
    }

    #[test]
    fn constraint_matrix_shape() {
        let qd = relations_twisted(2, u()).unwrap();
        let mat = build_beta_constraints(&qd).unwrap();
        // dim(I3)·2N rows, dim(R_H) = N(N+1) + N² columns
        assert_eq!(mat.nrows(), 20 * 4);
        assert_eq!(mat.ncols(), 10);
    }

    #[test]
    fn distinct_triple_row_matches_theorem_coefficients() {
        // the V_321 equations at N=3: (q²−1)β(V_21) on slot v_3 and
        // (1−q²)β(V_32) on slot v_1, nothing on slot v_2
        let n = 3;
        let qd = relations_exterior_v(n);
        let t = qd.sym3_element(Sym3Label::V(3, 2, 1));
        let rows = constraint_rows_for(&qd, &t).unwrap();
        let labels = qd.labels();
        let col = |label: RelLabel| labels.iter().position(|l| *l == label).unwrap();
        let q2m1 = Scalar::q_pow(2, n).sub(&Scalar::one());
        let row_i = &rows[qd.alphabet.word_to_col(&vec![v(3)]).unwrap()];
        assert_eq!(row_i.get(col(RelLabel::V(2, 1))).unwrap().clone(), q2m1);
        assert!(row_i.get(col(RelLabel::V(3, 2))).is_none());
        let row_k = &rows[qd.alphabet.word_to_col(&vec![v(1)]).unwrap()];
        assert_eq!(row_k.get(col(RelLabel::V(3, 2))).unwrap().clone(), q2m1.neg());
        let row_j = &rows[qd.alphabet.word_to_col(&vec![v(2)]).unwrap()];
        assert!(row_j.is_zero());
    }

    #[test]
    fn cross_triple_row_matches_lemma_coefficients() {
        // X_ijk with i,j,k distinct: (q−λ')β(M_ik) v_j + (1−λ'q)β(M_ij) v_k = 0
        let n = 3;
        let qd = relations_twisted(n, u()).unwrap();
        let (i, j, k) = (1, 3, 2);
        let t = qd.sym3_element(Sym3Label::X(i, j, k));
        let rows = constraint_rows_for(&qd, &t).unwrap();
        let labels = qd.labels();
        let col = |label: RelLabel| labels.iter().position(|l| *l == label).unwrap();
        let lp = u().mul(&Scalar::s_pow(1));
        let row_j = &rows[qd.alphabet.word_to_col(&vec![v(j)]).unwrap()];
        assert_eq!(
            row_j.get(col(RelLabel::M(i, k))).unwrap().clone(),
            Scalar::q_pow(1, n).sub(&lp)
        );
        let row_k = &rows[qd.alphabet.word_to_col(&vec![v(k)]).unwrap()];
        assert_eq!(
            row_k.get(col(RelLabel::M(i, j))).unwrap().clone(),
            Scalar::one().sub(&lp.mul(&Scalar::q_pow(1, n)))
        );
    }

    #[test]
    fn simple_modules_admit_no_deformation() {
        for n in 2..=3usize {
            assert_eq!(classify(&relations_exterior_v(n)).unwrap().dimension, 0);
            assert_eq!(classify(&relations_exterior_w(n)).unwrap().dimension, 0);
        }
    }

    #[test]
    fn twisted_generic_admits_no_deformation() {
        for n in 2..=3usize {
            let qd = relations_twisted(n, u()).unwrap();
            assert_eq!(classify(&qd).unwrap().dimension, 0, "generic λ at N={n}");
        }
    }

    #[test]
    fn twisted_critical_has_the_delta_solution() {
        for n in 2..=3usize {
            let qd = relations_twisted(n, critical(n)).unwrap();
            let sol = classify(&qd).unwrap();
            assert_eq!(sol.dimension, 1);
            for label in sol.unknown_labels.clone() {
                let got = sol.value(0, label).unwrap();
                match label {
                    RelLabel::M(i, j) if i == j => assert!(got.is_one(), "{label}"),
                    _ => assert!(got.is_zero(), "{label}"),
                }
            }
        }
    }

    #[test]
    fn solution_space_is_basis_independent() {
        let n = 2;
        let qd = relations_twisted(n, critical(n)).unwrap();
        // canonical intersection basis instead of the symmetrized family
        let intersection = qd.degree3_intersection();
        let spanning: Vec<Tensor> = intersection
            .basis()
            .rows()
            .iter()
            .map(|row| qd.alphabet.vec_to_tensor(row, 3))
            .collect();
        let alt = build_beta_constraints_from(&qd, &spanning).unwrap();
        let from_family = build_beta_constraints(&qd).unwrap();
        assert_eq!(kernel(&alt), kernel(&from_family));
    }

    #[test]
    fn assemble_checks_membership() {
        let n = 2;
        let qd = relations_twisted(n, critical(n)).unwrap();
        let beta = delta_beta(&qd);
        let labels = qd.labels();
        let deformed = assemble_deformation(&qd, &beta, &Scalar::one()).unwrap();
        let pos = |l: RelLabel| labels.iter().position(|x| *x == l).unwrap();
        assert_eq!(
            deformed.constant_part.as_ref().unwrap()[pos(RelLabel::M(1, 1))],
            Scalar::one()
        );
        // scale by symbolic c
        let symbolic = assemble_deformation(&qd, &beta, &u()).unwrap();
        assert_eq!(
            symbolic.constant_part.as_ref().unwrap()[pos(RelLabel::M(2, 2))],
            u()
        );
        // beta = 0 keeps the homogeneous algebra
        let zeros = vec![Scalar::zero(); qd.named.len()];
        let hom = assemble_deformation(&qd, &zeros, &Scalar::one()).unwrap();
        assert!(hom.constant_part.unwrap().iter().all(|c| c.is_zero()));
        // a non-solution is rejected
        let mut bad = vec![Scalar::zero(); qd.named.len()];
        bad[0] = Scalar::one(); // β(V_11) ≠ 0 never solves
        assert!(matches!(
            assemble_deformation(&qd, &bad, &Scalar::one()),
            Err(PbwError::BetaNotInSolutionSpace)
        ));
    }

    #[test]
    fn scaling_covariance() {
        let n = 2;
        let qd = relations_twisted(n, critical(n)).unwrap();
        let sol = classify(&qd).unwrap();
        let constraints = build_beta_constraints(&qd).unwrap();
        let scaled = SparseVec::from_entries(
            qd.named.len(),
            sol.solution_basis[0]
                .iter()
                .enumerate()
                .map(|(i, c)| (i, c.mul(&Scalar::q_pow(3, n)))),
        );
        assert!(constraints.apply(&scaled).is_zero());
    }

    #[test]
    fn special_lambda_n2() {
        let report = find_special_lambda(2).unwrap();
        assert_eq!(report.generic_dimension, 0);
        assert!(report.unresolved.is_empty());
        assert_eq!(report.special, vec![Scalar::s_pow(1)]);
        assert_eq!(report.special_dimensions, vec![1]);
    }

    #[test]
    fn special_lambda_n3() {
        let report = find_special_lambda(3).unwrap();
        assert!(report.unresolved.is_empty());
        assert_eq!(report.special, vec![Scalar::s_pow(2)]);
    }

    #[test]
    fn affine_space_constant_coordinate() {
        let n = 2;
        let qd = relations_twisted(n, critical(n)).unwrap();
        let p0 = affine_relation_space(&qd);
        assert_eq!(p0.dim(), qd.named.len());
        for row in p0.basis().rows() {
            assert!(row.get(0).is_none());
        }
        // with β attached, the constant coordinate appears
        let deformed = deformation_unchecked(&qd, &delta_beta(&qd), &Scalar::one());
        let pc = affine_relation_space(&deformed);
        assert_eq!(pc.dim(), qd.named.len());
        assert!(pc.basis().rows().iter().any(|row| row.get(0).is_some()));
    }
}
