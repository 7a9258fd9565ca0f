//! Session configuration, check orchestration and machine-readable reports.
//!
//! Reports are deterministic: identical configurations (including the seed)
//! produce byte-identical JSON.

use crate::braiding::{self, BlockName, BraidingMap};
use crate::clifford::{self, NormalWord};
use crate::linalg::rank_certified;
use crate::pbw;
use crate::quadratic::{self, AlgebraKind, QuadraticData};
use crate::scalar::{Scalar, ScalarError};
use crate::uqact::{self, v, GenTag, Tensor};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

/// How the twist parameter λ is chosen for a run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LambdaMode {
    /// λ is the transcendental u.
    Generic,
    /// λ = q^{1−1/N} = s^{N−1}.
    Critical,
    /// λ is an explicit scalar expression.
    Expr(Scalar),
}

impl LambdaMode {
    pub fn value(&self, n: usize) -> Scalar {
        match self {
            LambdaMode::Generic => Scalar::u_pow(1),
            LambdaMode::Critical => Scalar::s_pow(n as i64 - 1),
            LambdaMode::Expr(e) => e.clone(),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            LambdaMode::Generic => "generic".to_string(),
            LambdaMode::Critical => "critical".to_string(),
            LambdaMode::Expr(e) => e.to_string(),
        }
    }

    pub fn parse(src: &str, n: usize) -> Result<Self, ScalarError> {
        match src {
            "generic" => Ok(LambdaMode::Generic),
            "critical" => Ok(LambdaMode::Critical),
            other => Ok(LambdaMode::Expr(Scalar::parse(other, n)?)),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SessionConfig {
    pub n: usize,
    pub lambda: LambdaMode,
    pub c: Scalar,
    pub max_degree: usize,
    pub seed: u64,
    pub symbolic_only: bool,
    pub corrupt_fixture: bool,
}

impl SessionConfig {
    pub fn new(n: usize) -> Self {
        SessionConfig {
            n,
            lambda: LambdaMode::Generic,
            c: Scalar::u_pow(1),
            max_degree: quadratic::default_degree_bound(n),
            seed: 0,
            symbolic_only: false,
            corrupt_fixture: false,
        }
    }

    fn echo(&self) -> Value {
        json!({
            "n": self.n,
            "lambda": self.lambda.describe(),
            "c": self.c.to_string(),
            "max_degree": self.max_degree,
            "seed": self.seed,
            "symbolic_only": self.symbolic_only,
            "corrupt_fixture": self.corrupt_fixture,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub params: Value,
    pub status: Status,
    pub data: Value,
}

impl Check {
    fn passed(name: &str, params: Value, data: Value) -> Self {
        Check {
            name: name.to_string(),
            params,
            status: Status::Pass,
            data,
        }
    }

    fn of_bool(name: &str, params: Value, pass: bool, data: Value) -> Self {
        Check {
            name: name.to_string(),
            params,
            status: if pass { Status::Pass } else { Status::Fail },
            data,
        }
    }

    fn skipped(name: &str, params: Value, reason: &str) -> Self {
        Check {
            name: name.to_string(),
            params,
            status: Status::Skipped,
            data: json!({ "reason": reason }),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: u32,
    pub command: String,
    pub config: Value,
    pub checks: Vec<Check>,
}

impl Report {
    fn new(command: &str, cfg: &SessionConfig, checks: Vec<Check>) -> Self {
        Report {
            schema: 1,
            command: command.to_string(),
            config: cfg.echo(),
            checks,
        }
    }

    pub fn has_failures(&self) -> bool {
        self.checks.iter().any(|c| c.status == Status::Fail)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let status = match c.status {
                Status::Pass => "pass",
                Status::Fail => "FAIL",
                Status::Skipped => "skipped",
            };
            out.push_str(&format!("{:<40} {}\n", c.name, status));
        }
        out
    }

    /// CSV view; meaningful for hilbert reports (degree, dimension rows).
    pub fn to_csv(&self) -> String {
        let mut out = String::from("degree,dimension\n");
        for c in &self.checks {
            if let (Some(d), Some(dim)) = (c.params.get("degree"), c.data.get("dimension")) {
                out.push_str(&format!("{d},{dim}\n"));
            }
        }
        out
    }
}

/// The corrupted letter action used by the negative-control fixture.
fn corrupted_action(n: usize, g: uqact::Generator, sym: &uqact::BasisSymbol) -> Tensor {
    if g.tag == GenTag::E && g.index == 1 && sym.kind == uqact::Kind::V && sym.index == 2 {
        Tensor::from_word(n, vec![v(2)])
    } else {
        uqact::act_on_symbol(n, g, sym)
    }
}

fn corrupted_sigma(n: usize, lambda: Scalar) -> BraidingMap {
    let sigma = BraidingMap::sigma_lambda(n, lambda).expect("nonzero");
    let mut images = sigma.images().clone();
    images.insert(
        (v(1), v(1)),
        Tensor::from_term(n, vec![v(1), v(1)], Scalar::from_int(5)),
    );
    BraidingMap::from_images(n, sigma.lambda().clone(), images)
}

/// Aggregated structural verification: module actions, braidings,
/// symmetrizers, relation spaces and the degree-3 expansion lemmas.
pub fn cmd_verify(cfg: &SessionConfig) -> Report {
    let n = cfg.n;
    let lambda = cfg.lambda.value(n);
    let lambda_desc = cfg.lambda.describe();
    let uq_degree = if n <= 3 { 2 } else { 1 };
    let corrupt = cfg.corrupt_fixture;

    type Task = Box<dyn Fn() -> Check + Send + Sync>;
    let mut tasks: Vec<Task> = Vec::new();

    tasks.push(Box::new(move || {
        let checks = if corrupt {
            uqact::check_uq_relations_with(n, 1, &corrupted_action)
        } else {
            uqact::check_uq_relations(n, uq_degree)
        };
        let failures: Vec<String> = checks
            .iter()
            .filter(|c| !c.pass)
            .map(|c| c.name.clone())
            .collect();
        Check::of_bool(
            "uq_defining_relations",
            json!({ "n": n, "degree": uq_degree }),
            failures.is_empty(),
            json!({ "relations_checked": checks.len(), "failures": failures }),
        )
    }));
    {
        let lambda = lambda.clone();
        let lambda_desc = lambda_desc.clone();
        tasks.push(Box::new(move || {
            let sigma = if corrupt {
                corrupted_sigma(n, lambda.clone())
            } else {
                match BraidingMap::sigma_lambda(n, lambda.clone()) {
                    Ok(s) => s,
                    Err(e) => {
                        return Check::of_bool(
                            "braid_equation",
                            json!({ "n": n, "lambda_mode": lambda_desc }),
                            false,
                            json!({ "error": e.to_string() }),
                        )
                    }
                }
            };
            Check::of_bool(
                "braid_equation",
                json!({ "n": n, "lambda_mode": lambda_desc }),
                sigma.check_braid_equation(),
                json!({ "words": (2 * n).pow(3) }),
            )
        }));
    }
    tasks.push(Box::new(move || {
        Check::of_bool(
            "hecke_relations",
            json!({ "n": n }),
            braiding::check_hecke(n),
            Value::Null,
        )
    }));
    tasks.push(Box::new(move || {
        Check::of_bool(
            "psi_intertwiner",
            json!({ "n": n }),
            braiding::check_psi_intertwiner(n),
            Value::Null,
        )
    }));
    for (block, name) in [
        (BlockName::VV, "equivariance_vv"),
        (BlockName::WW, "equivariance_ww"),
        (BlockName::WV, "equivariance_wv"),
    ] {
        tasks.push(Box::new(move || {
            let pass = if corrupt {
                braiding::check_equivariance_with(n, block, &corrupted_action)
            } else {
                braiding::check_equivariance(n, block)
            };
            Check::of_bool(name, json!({ "n": n }), pass, Value::Null)
        }));
    }
    for (block, name) in [
        (BlockName::VV, "s2_image_equals_kernel_v"),
        (BlockName::WW, "s2_image_equals_kernel_w"),
    ] {
        tasks.push(Box::new(move || {
            let image = braiding::s2_image(n, block);
            let kernel = braiding::s2_kernel(n, block);
            Check::of_bool(
                name,
                json!({ "n": n }),
                image == kernel,
                json!({ "dimension": image.dim() }),
            )
        }));
    }
    {
        let lambda = lambda.clone();
        tasks.push(Box::new(move || {
            match BraidingMap::sigma_lambda(n, lambda.clone()) {
                Ok(sigma) => Check::of_bool(
                    "cross_block_images",
                    json!({ "n": n }),
                    quadratic::check_cross_block_images(&sigma),
                    Value::Null,
                ),
                Err(e) => Check::of_bool(
                    "cross_block_images",
                    json!({ "n": n }),
                    false,
                    json!({ "error": e.to_string() }),
                ),
            }
        }));
    }
    {
        let lambda = lambda.clone();
        let lambda_desc = lambda_desc.clone();
        tasks.push(Box::new(move || {
            match quadratic::relations_twisted(n, lambda.clone()) {
                Ok(qd) => {
                    let sym3 = qd.sym3_basis();
                    let dim = qd.degree3_intersection().dim();
                    Check::of_bool(
                        "sym3_basis_twisted",
                        json!({ "n": n, "lambda_mode": lambda_desc }),
                        sym3.is_ok(),
                        json!({ "intersection_dimension": dim }),
                    )
                }
                Err(e) => Check::of_bool(
                    "sym3_basis_twisted",
                    json!({ "n": n, "lambda_mode": lambda_desc }),
                    false,
                    json!({ "error": e.to_string() }),
                ),
            }
        }));
    }
    tasks.push(Box::new(move || {
        let qd = quadratic::relations_exterior_v(n);
        let sym3 = qd.sym3_basis();
        let dim = qd.degree3_intersection().dim();
        Check::of_bool(
            "sym3_basis_ext_v",
            json!({ "n": n }),
            sym3.is_ok(),
            json!({ "intersection_dimension": dim }),
        )
    }));
    {
        let lambda = lambda.clone();
        let lambda_desc = lambda_desc.clone();
        tasks.push(Box::new(move || {
            match quadratic::relations_twisted(n, lambda.clone()) {
                Ok(qd) => {
                    let checks = quadratic::check_deg3_expansions(&qd);
                    let failures: Vec<String> = checks
                        .iter()
                        .filter(|c| !c.pass)
                        .map(|c| c.name.clone())
                        .collect();
                    Check::of_bool(
                        "deg3_expansion_lemmas",
                        json!({ "n": n, "lambda_mode": lambda_desc }),
                        failures.is_empty(),
                        json!({ "identities_checked": checks.len(), "failures": failures }),
                    )
                }
                Err(e) => Check::of_bool(
                    "deg3_expansion_lemmas",
                    json!({ "n": n, "lambda_mode": lambda_desc }),
                    false,
                    json!({ "error": e.to_string() }),
                ),
            }
        }));
    }
    {
        let lambda = lambda.clone();
        tasks.push(Box::new(move || {
            match quadratic::relations_twisted(n, lambda.clone()) {
                Ok(qd) => Check::of_bool(
                    "module_algebra_invariance",
                    json!({ "n": n }),
                    qd.check_relations_invariant(),
                    Value::Null,
                ),
                Err(e) => Check::of_bool(
                    "module_algebra_invariance",
                    json!({ "n": n }),
                    false,
                    json!({ "error": e.to_string() }),
                ),
            }
        }));
    }
    {
        let lambda = lambda.clone();
        tasks.push(Box::new(move || {
            match quadratic::relations_twisted(n, lambda.clone()) {
                Ok(qd) => Check::of_bool(
                    "classical_limit",
                    json!({ "n": n }),
                    qd.check_classical_limit(),
                    Value::Null,
                ),
                Err(_) => Check::skipped(
                    "classical_limit",
                    json!({ "n": n }),
                    "twisted relations unavailable at this lambda",
                ),
            }
        }));
    }

    let checks: Vec<Check> = tasks.par_iter().map(|t| t()).collect();
    Report::new("verify", cfg, checks)
}

fn build_algebra(
    cfg: &SessionConfig,
    algebra: AlgebraKind,
) -> Result<QuadraticData, quadratic::QuadraticError> {
    match algebra {
        AlgebraKind::ExteriorV => Ok(quadratic::relations_exterior_v(cfg.n)),
        AlgebraKind::ExteriorW => Ok(quadratic::relations_exterior_w(cfg.n)),
        AlgebraKind::Twisted => quadratic::relations_twisted(cfg.n, cfg.lambda.value(cfg.n)),
    }
}

pub fn algebra_name(kind: AlgebraKind) -> &'static str {
    match kind {
        AlgebraKind::ExteriorV => "ext-v",
        AlgebraKind::ExteriorW => "ext-w",
        AlgebraKind::Twisted => "twisted",
    }
}

/// Classify quadratic-constant PBW-deformations of the chosen algebra.
pub fn cmd_classify(cfg: &SessionConfig, algebra: AlgebraKind) -> Report {
    let params = json!({
        "n": cfg.n,
        "algebra": algebra_name(algebra),
        "lambda_mode": cfg.lambda.describe(),
    });
    let mut checks = Vec::new();
    match build_algebra(cfg, algebra) {
        Err(e) => checks.push(Check::of_bool(
            "classification",
            params,
            false,
            json!({ "error": e.to_string() }),
        )),
        Ok(qd) => match pbw::classify(&qd) {
            Err(e) => checks.push(Check::of_bool(
                "classification",
                params.clone(),
                false,
                json!({ "error": e.to_string() }),
            )),
            Ok(solution) => {
                let basis: Vec<Value> = solution
                    .solution_basis
                    .iter()
                    .map(|sol| {
                        let entries: serde_json::Map<String, Value> = solution
                            .unknown_labels
                            .iter()
                            .zip(sol)
                            .filter(|(_, c)| !c.is_zero())
                            .map(|(l, c)| (l.to_string(), Value::String(c.to_string())))
                            .collect();
                        Value::Object(entries)
                    })
                    .collect();
                checks.push(Check::passed(
                    "classification",
                    params.clone(),
                    json!({ "dimension": solution.dimension, "basis": basis }),
                ));
                if algebra == AlgebraKind::Twisted && cfg.lambda == LambdaMode::Generic {
                    if cfg.n <= 3 {
                        match pbw::find_special_lambda(cfg.n) {
                            Ok(report) => {
                                let roots: Vec<String> =
                                    report.special.iter().map(|s| s.to_string()).collect();
                                checks.push(Check::of_bool(
                                    "special_lambda",
                                    params.clone(),
                                    report.unresolved.is_empty(),
                                    json!({
                                        "special_lambda": roots,
                                        "special_dimensions": report.special_dimensions,
                                        "generic_dimension": report.generic_dimension,
                                        "unresolved_factors": report.unresolved,
                                    }),
                                ));
                            }
                            Err(e) => checks.push(Check::of_bool(
                                "special_lambda",
                                params.clone(),
                                false,
                                json!({ "error": e.to_string() }),
                            )),
                        }
                    } else {
                        checks.push(Check::skipped(
                            "special_lambda",
                            params,
                            "minor search not run for N > 3; classification only",
                        ));
                    }
                }
            }
        },
    }
    Report::new("classify", cfg, checks)
}

/// Graded dimension table of the chosen algebra.
pub fn cmd_hilbert(cfg: &SessionConfig, algebra: AlgebraKind) -> Report {
    let mut checks = Vec::new();
    match build_algebra(cfg, algebra) {
        Err(e) => checks.push(Check::of_bool(
            "hilbert",
            json!({ "n": cfg.n, "algebra": algebra_name(algebra) }),
            false,
            json!({ "error": e.to_string() }),
        )),
        Ok(qd) => {
            for deg in 0..=cfg.max_degree {
                let params = json!({
                    "n": cfg.n,
                    "algebra": algebra_name(algebra),
                    "degree": deg,
                });
                if cfg.symbolic_only || deg < 2 {
                    match qd.graded_dimension(deg, cfg.max_degree) {
                        Ok(dim) => checks.push(Check::passed(
                            "graded_dimension",
                            params,
                            json!({ "dimension": dim, "randomized": false }),
                        )),
                        Err(e) => checks.push(Check::skipped(
                            "graded_dimension",
                            params,
                            &e.to_string(),
                        )),
                    }
                } else {
                    // exploratory path: randomized rank with a symbolic
                    // witness; lower-bounds the symbolic rank
                    let span = qd.relation_span_matrix(deg);
                    match rank_certified(&span, 3, cfg.seed ^ deg as u64) {
                        Ok(r) => {
                            let ambient = qd.generator_count().pow(deg as u32);
                            checks.push(Check::passed(
                                "graded_dimension",
                                params,
                                json!({ "dimension": ambient - r, "randomized": true }),
                            ));
                        }
                        Err(e) => checks.push(Check::skipped(
                            "graded_dimension",
                            params,
                            &e.to_string(),
                        )),
                    }
                }
            }
        }
    }
    Report::new("hilbert", cfg, checks)
}

/// Which Clifford checks to run.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CliffordCheck {
    Confluence,
    Dims,
    Equivariance,
    Iso,
    Spinor,
    EndIso,
    All,
}

impl CliffordCheck {
    pub fn parse(src: &str) -> Option<Self> {
        Some(match src {
            "confluence" => Self::Confluence,
            "dims" => Self::Dims,
            "equivariance" => Self::Equivariance,
            "iso" => Self::Iso,
            "spinor" => Self::Spinor,
            "endiso" => Self::EndIso,
            "all" => Self::All,
            _ => return None,
        })
    }

    fn includes(&self, other: CliffordCheck) -> bool {
        *self == CliffordCheck::All || *self == other
    }
}

/// Verification suite for the quantum Clifford algebra Cl_q(c).
pub fn cmd_clifford(cfg: &SessionConfig, which: CliffordCheck) -> Report {
    let n = cfg.n;
    let c = cfg.c.clone();
    let params = json!({ "n": n, "c": c.to_string() });
    let mut checks = Vec::new();
    let rs = match clifford::build_clq(n, c.clone()) {
        Ok(rs) => rs,
        Err(e) => {
            checks.push(Check::of_bool(
                "presentation",
                params,
                false,
                json!({ "error": e.to_string() }),
            ));
            return Report::new("clifford", cfg, checks);
        }
    };
    checks.push(Check::passed("presentation", params.clone(), Value::Null));

    if which.includes(CliffordCheck::Confluence) {
        let report = clifford::check_confluence(&rs);
        checks.push(Check::of_bool(
            "confluence",
            params.clone(),
            report.pass(),
            json!({
                "overlaps_checked": report.overlaps_checked,
                "words_swept": report.words_swept,
                "failures": report.failures,
            }),
        ));
    }
    if which.includes(CliffordCheck::Dims) {
        let dims = clifford::graded_dims_clifford(&rs, 2 * n);
        let binom = |m: usize, k: usize| -> usize {
            if k > m {
                0
            } else {
                (1..=k).fold(1usize, |acc, i| acc * (m - i + 1) / i)
            }
        };
        let expected: Vec<usize> = (0..=2 * n).map(|d| binom(2 * n, d)).collect();
        checks.push(Check::of_bool(
            "graded_dims",
            params.clone(),
            dims == expected,
            json!({ "dimensions": dims, "normal_words": 1usize << (2 * n) }),
        ));
        checks.push(Check::of_bool(
            "bilinear_symmetry",
            params.clone(),
            clifford::check_bilinear_symmetry(n, &c),
            Value::Null,
        ));
    }
    if which.includes(CliffordCheck::Equivariance) {
        let pass = clifford::check_equivariance_clq(n, &c).unwrap_or(false);
        checks.push(Check::of_bool(
            "module_algebra",
            params.clone(),
            pass,
            Value::Null,
        ));
    }
    if which.includes(CliffordCheck::Iso) {
        match clifford::check_rescaling_iso(n, &c) {
            Ok(pass) => checks.push(Check::of_bool(
                "rescaling_iso",
                params.clone(),
                pass,
                Value::Null,
            )),
            Err(e) => checks.push(Check::skipped(
                "rescaling_iso",
                params.clone(),
                &e.to_string(),
            )),
        }
    }
    if which.includes(CliffordCheck::Spinor) {
        let rep = clifford::spinor_rep(&rs);
        checks.push(Check::of_bool(
            "spinor_cross_relations",
            params.clone(),
            rep.check_cross_relations(),
            json!({ "dimension": rep.dim() }),
        ));
    }
    if which.includes(CliffordCheck::EndIso) {
        let (rank, full) = clifford::check_end_iso(&rs);
        checks.push(Check::of_bool(
            "end_iso",
            params.clone(),
            full,
            json!({ "rank": rank, "expected": 1usize << (2 * n) }),
        ));
    }
    Report::new("clifford", cfg, checks)
}

/// The 2N spinor matrices as JSON arrays of Scalar strings.
pub fn spinor_matrices_json(cfg: &SessionConfig) -> Result<Value, clifford::CliffordError> {
    let rs = clifford::build_clq(cfg.n, cfg.c.clone())?;
    let rep = clifford::spinor_rep(&rs);
    let dim = rep.dim();
    let dump = |op: &clifford::LinMap| -> Value {
        let rows: Vec<Value> = (0..dim)
            .map(|r| {
                let cols: Vec<Value> = (0..dim)
                    .map(|col| {
                        Value::String(
                            op.col(col)
                                .get(r)
                                .cloned()
                                .unwrap_or_else(Scalar::zero)
                                .to_string(),
                        )
                    })
                    .collect();
                Value::Array(cols)
            })
            .collect();
        Value::Array(rows)
    };
    let mut matrices = serde_json::Map::new();
    for (i, op) in rep.e_ops.iter().enumerate() {
        matrices.insert(format!("e{}", i + 1), dump(op));
    }
    for (i, op) in rep.i_ops.iter().enumerate() {
        matrices.insert(format!("i{}", i + 1), dump(op));
    }
    Ok(json!({
        "schema": 1,
        "n": cfg.n,
        "c": cfg.c.to_string(),
        "dimension": dim,
        "matrices": Value::Object(matrices),
    }))
}

/// Normal-word labels in the basis order of the spinor matrices.
pub fn spinor_basis_labels(n: usize) -> Vec<String> {
    (0..(1u32 << n))
        .map(|vmask| NormalWord { vmask, wmask: 0 }.to_string())
        .collect()
}
