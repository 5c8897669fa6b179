use std::fs;
use std::path::{Path, PathBuf};

use qsep_core::bloch::{density_to_bloch, sep_set_geometry, GeneratorBasis};
use qsep_core::eb::{
    condition_number, ebp_reduce, kappa_bound, marker_map_phi, ChoiOperator, KrausSet,
};
use qsep_core::graphs::{answer_degenerate, parse_graph, CliqueInstance};
use qsep_core::linalg::{c, min_eigenvalue, partial_trace_first, partial_transpose_second, CMatrix};
use qsep_core::oracles::{ppt_test, PptOracle};
use qsep_core::reduction::io::{parse_document, InstanceDocument, SourceGraph};
use qsep_core::reduction::{
    beta_formula, clique_to_wopt, hardness_exponents, rsdf_to_wopt, wopt_to_wmem_params, ExponentReport,
    RsdfInstance, WmemParams, WoptInstance,
};
use qsep_core::verify::{
    criterion_id, density_from_coords, run_criterion, structural_check_rows, wopt_consistency, Check, CRITERIA,
};
use qsep_core::HermitianOperator;
use serde::de::DeserializeOwned;

use crate::report::RunReport;
use crate::GlobalOpts;

/// Largest `M·N` whose gadget matrix is written into `wopt.json`.
const MATRIX_EMBED_LIMIT: usize = 256;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}{source}", context.as_ref().map(|p| format!("{}: ", p.display())).unwrap_or_default())]
    Core { context: Option<PathBuf>, source: qsep_core::Error },
    #[error("{0}")]
    Usage(String),
}

impl From<qsep_core::Error> for CliError {
    fn from(source: qsep_core::Error) -> Self {
        CliError::Core { context: None, source }
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn at(path: &Path) -> impl FnOnce(qsep_core::Error) -> CliError + '_ {
    move |source| CliError::Core { context: Some(path.to_path_buf()), source }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    serde_json::from_str(&read(path)?).map_err(|e| at(path)(e.into()))
}

fn write(path: PathBuf, text: &str) -> Result<PathBuf> {
    fs::write(&path, text).map_err(|source| CliError::Io { path: path.clone(), source })?;
    Ok(path)
}

pub fn reduce(graph_path: &Path, c: usize, out_dir: &Path, m_target: Option<usize>) -> Result<RunReport> {
    let mut report = RunReport::new("reduce");
    report.inputs.push(graph_path.to_path_buf());
    let graph = parse_graph(&read(graph_path)?).map_err(at(graph_path))?;
    let (n, edges) = (graph.n(), graph.edge_count());
    let inst = CliqueInstance::new(graph, c).map_err(at(graph_path))?;
    report.value("n", n);
    report.value("edges", edges);
    report.value("c", c);
    if let Some(answer) = answer_degenerate(&inst) {
        report.value("result", "answered-without-reduction");
        report.value("answer", answer.to_string());
        return Ok(report.finish());
    }

    let (rsdf, wopt) = clique_to_wopt(&inst, m_target)?;
    let params = wopt_to_wmem_params(&wopt)?;
    fs::create_dir_all(out_dir).map_err(|source| CliError::Io { path: out_dir.to_path_buf(), source })?;
    let source = SourceGraph { n, c, edges };
    let embed = wopt.m_dim * wopt.n_dim <= MATRIX_EMBED_LIMIT;
    let docs = [
        ("rsdf.json", InstanceDocument::Rsdf(rsdf.to_document(Some(source)))),
        ("wopt.json", InstanceDocument::Wopt(wopt.to_document(embed))),
        ("wmem_params.json", InstanceDocument::WmemParams(params.to_document())),
    ];
    for (name, doc) in docs {
        report.outputs.push(write(out_dir.join(name), &doc.to_json()?)?);
    }

    report.value("k", rsdf.k());
    report.value("l", rsdf.l());
    report.value("zeta", rsdf.zeta().to_string());
    report.value("eta", rsdf.eta().to_string());
    report.value("M", wopt.m_dim);
    report.value("N", wopt.n_dim);
    report.value("m", wopt.m);
    report.value("delta", rsdf.delta()?);
    report.value("c_hat_norm", wopt.c_hat_norm);
    report.value("gamma", wopt.gamma);
    report.value("epsilon", wopt.epsilon);
    report.value("beta", params.beta);
    report.checks = instance_checks(Some(&rsdf), Some(&wopt), Some(&params), Some(edges))?;
    Ok(report.finish())
}

/// Checks shared by `reduce` and `verify` on instance files.
fn instance_checks(
    rsdf: Option<&RsdfInstance>,
    wopt: Option<&WoptInstance>,
    params: Option<&WmemParams>,
    edges: Option<usize>,
) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    if let Some(w) = wopt {
        let norm = w.c.iter().map(|x| x * x).sum::<f64>().sqrt();
        checks.push(Check::at_most("|‖c‖ - 1|", (norm - 1.0).abs(), 1e-12));
        checks.push(Check::at_least("ε", w.epsilon, f64::MIN_POSITIVE));
    }
    if let (Some(r), Some(w)) = (rsdf, wopt) {
        let full = if w.c_matrix.is_some() {
            w.clone()
        } else {
            let padding = (w.m_dim != r.k() + 1).then_some(w.m_dim);
            rsdf_to_wopt(r, padding)?
        };
        if let Some(e) = edges.or(w.edge_count) {
            checks.extend(structural_check_rows(r, &full, e)?);
        }
        checks.extend(wopt_consistency(r, w)?);
    }
    if let Some(p) = params {
        let again = beta_formula(p.inner_radius, p.outer_radius, p.m, p.epsilon);
        checks.push(Check::at_most("|β - β(source)| / β", (p.beta - again).abs() / p.beta, 1e-15));
        checks.push(Check::at_most("β / ε", p.beta / p.epsilon, 1.0 - f64::EPSILON));
        if let Some(w) = wopt {
            let geo = sep_set_geometry(w.m_dim, w.n_dim)?;
            checks.push(Check::at_most("|ε(wmem) - ε(wopt)|", (p.epsilon - w.epsilon).abs(), 1e-12));
            let radii = (p.inner_radius - geo.inner_radius).abs().max((p.outer_radius - geo.outer_radius).abs());
            checks.push(Check::at_most("radius defect", radii, 1e-15));
            checks.push(Check::at_most("|m - (MN)² + 1|", (p.m as f64 - geo.m as f64).abs(), 0.0));
        }
    }
    Ok(checks)
}

pub fn verify(g: &GlobalOpts, only: &[String], files: &[PathBuf]) -> Result<RunReport> {
    let mut report = RunReport::new("verify");
    let ids = only
        .iter()
        .map(|name| {
            criterion_id(name).ok_or_else(|| {
                let keys: Vec<&str> = CRITERIA.iter().map(|c| c.1).collect();
                CliError::Usage(format!("unknown criterion `{name}`; expected one of {}", keys.join(", ")))
            })
        })
        .collect::<Result<Vec<u8>>>()?;

    if !files.is_empty() {
        let (mut rsdf, mut wopt, mut params, mut edges) = (None, None, None, None);
        for path in files {
            report.inputs.push(path.clone());
            let doc = parse_document(&read(path)?).map_err(at(path))?;
            let kind = doc.kind();
            let duplicate = || CliError::Usage(format!("{}: second {kind} document", path.display()));
            match doc {
                InstanceDocument::Rsdf(d) => {
                    edges = d.source.as_ref().map(|s| s.edges);
                    let inst = RsdfInstance::from_document(&d).map_err(at(path))?;
                    if rsdf.replace(inst).is_some() {
                        return Err(duplicate());
                    }
                }
                InstanceDocument::Wopt(d) => {
                    if wopt.replace(WoptInstance::from_document(&d).map_err(at(path))?).is_some() {
                        return Err(duplicate());
                    }
                }
                InstanceDocument::WmemParams(d) => {
                    if params.replace(WmemParams::from_document(&d).map_err(at(path))?).is_some() {
                        return Err(duplicate());
                    }
                }
            }
        }
        report.checks = instance_checks(rsdf.as_ref(), wopt.as_ref(), params.as_ref(), edges)?;
    }

    if files.is_empty() || !ids.is_empty() {
        let ids: Vec<u8> = if ids.is_empty() { CRITERIA.iter().map(|c| c.0).collect() } else { ids };
        let cfg = g.optimizer();
        for id in ids {
            report.criteria.push(run_criterion(id, &cfg)?);
        }
    }
    Ok(report.finish())
}

pub fn oracle(state: Option<&Path>, bloch: Option<&Path>, m: usize, n: usize, beta: f64) -> Result<RunReport> {
    let mut report = RunReport::new("oracle");
    let oracle = PptOracle::new(m, n, beta)?;
    let basis = GeneratorBasis::structured(m * n)?;
    let (rho, y) = match (state, bloch) {
        (Some(path), _) => {
            report.inputs.push(path.to_path_buf());
            let rho: HermitianOperator = read_json(path)?;
            if rho.dim() != m * n {
                return Err(at(path)(qsep_core::Error::DimensionMismatch { expected: m * n, got: rho.dim() }));
            }
            let y = density_to_bloch(&rho, &basis).map_err(at(path))?;
            (rho, y)
        }
        (None, Some(path)) => {
            report.inputs.push(path.to_path_buf());
            let coords: Vec<f64> = read_json(path)?;
            let rho = density_from_coords(&coords, m, n).map_err(at(path))?;
            let y = density_to_bloch(&rho, &basis).map_err(at(path))?;
            (rho, y)
        }
        (None, None) => return Err(CliError::Usage("one of --state or --bloch is required".into())),
    };
    let verdict = oracle.answer(&y)?;
    report.value("verdict", verdict.to_string());
    report.value("min_pt_eigenvalue", min_eigenvalue(&partial_transpose_second(rho.matrix(), m, n)));
    report.value("min_eigenvalue", rho.min_eigenvalue());
    report.value("bloch_norm", y.norm());
    report.value("outer_radius", sep_set_geometry(m, n)?.outer_radius);
    report.value("beta", beta);
    Ok(report.finish())
}

fn parse_kraus(path: &Path) -> Result<KrausSet> {
    let raw: Vec<Vec<Vec<[f64; 2]>>> = read_json(path)?;
    let operators = raw
        .iter()
        .map(|rows| {
            let cols = rows.first().map_or(0, Vec::len);
            if rows.iter().any(|r| r.len() != cols) {
                return Err(at(path)(qsep_core::Error::Validation("ragged Kraus operator".into())));
            }
            Ok(CMatrix::from_fn(rows.len(), cols, |i, j| c(rows[i][j][0], rows[i][j][1])))
        })
        .collect::<Result<Vec<_>>>()?;
    KrausSet::new(operators).map_err(at(path))
}

pub fn eb_check(kraus: Option<&Path>, choi: Option<&Path>, m: Option<usize>, n: Option<usize>) -> Result<RunReport> {
    let mut report = RunReport::new("eb-check");
    let choi = match (kraus, choi) {
        (Some(path), _) => {
            report.inputs.push(path.to_path_buf());
            let set = parse_kraus(path)?;
            report.value("kraus_operators", set.operators.len());
            report.value("completeness_defect", set.completeness_defect());
            ChoiOperator::from_kraus(&set).map_err(at(path))?
        }
        (None, Some(path)) => {
            report.inputs.push(path.to_path_buf());
            let (m, n) = m.zip(n).ok_or_else(|| CliError::Usage("--choi needs --m and --n".into()))?;
            ChoiOperator::from_matrix(read_json(path)?, m, n).map_err(at(path))?
        }
        (None, None) => return Err(CliError::Usage("one of --kraus or --choi is required".into())),
    };
    let (m, n) = (choi.m_dim, choi.n_dim);
    report.value("M", m);
    report.value("N", n);
    report.value("cp", choi.cp);
    report.value("tp", choi.tp);
    report.value("min_eigenvalue", choi.min_eigenvalue);
    report.value("tp_defect", choi.tp_defect);
    if !(choi.cp && choi.tp) {
        report.value("entanglement_breaking", "not a channel");
        return Ok(report.finish());
    }

    let exact = PptOracle::new(m, n, 1.0).is_ok();
    let ppt = ppt_test(&choi.j, m, n)?;
    report.value("choi_min_pt_eigenvalue", ppt.min_pt_eigenvalue);
    let eb = match (ppt.passes, exact) {
        (false, _) => "no",
        (true, true) => "yes",
        (true, false) => "undecided (PPT Choi operator)",
    };
    report.value("entanglement_breaking", eb);

    let phi = marker_map_phi(&choi.j, m, n)?;
    let reduced = HermitianOperator::from_hermitian_part(&partial_trace_first(phi.matrix(), 2 * m, n));
    let kappa = condition_number(&reduced)?.kappa;
    report.value("kappa", kappa);
    report.checks.push(Check::at_most("κ after the marker map", kappa, kappa_bound(n)));

    let out = ebp_reduce(&choi.j, m, n)?;
    let target = CMatrix::identity(n, n) * c(1.0 / n as f64, 0.0);
    let slice = qsep_core::linalg::max_abs_diff(&partial_trace_first(out.matrix(), 2 * m, n), &target);
    report.checks.push(Check::at_most("|Tr_A′ of reduced Choi - I/N|", slice, 1e-10));
    let after = ppt_test(&out, 2 * m, n)?;
    let mismatch = if after.passes == ppt.passes { 0.0 } else { 1.0 };
    report.checks.push(Check::at_most("PPT status changed by the reduction", mismatch, 0.0));
    Ok(report.finish())
}

pub fn exponents(g: &GlobalOpts, fit: &[u64]) -> Result<RunReport> {
    let mut report = RunReport::new("exponents");
    let reference = ExponentReport::reference()?;
    report.value("fitted_slope", reference.fitted_slope);
    report.value("fit_points", reference.fit_points.clone());
    report.value("log2_ratio_at", reference.log2_ratio_at);
    report.value("log2_ratio", reference.log2_ratio);
    report.value("m_slope", reference.m_slope);
    report.value("n_slope", reference.n_slope);
    if !fit.is_empty() {
        let slope = hardness_exponents(fit).map_err(|e| CliError::Usage(format!("--fit: {e}")))?;
        report.value("custom_fit_points", fit.to_vec());
        report.value("custom_fit_slope", slope);
    }
    report.criteria.push(run_criterion(7, &g.optimizer())?);
    Ok(report.finish())
}
