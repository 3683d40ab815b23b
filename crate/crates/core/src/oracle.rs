//! Floating-point certification by minimizing `T x^4` over the unit sphere.
//!
//! Candidates come from a deterministic lattice (uniform angles on the half
//! circle for `n = 2`, a spherical Fibonacci lattice for `n = 3`) plus seeded
//! random jitter points. The lowest, mutually separated candidates are then
//! refined by projected gradient descent: the radial part of the gradient is
//! removed, the step is renormalized back onto the sphere, and the step length
//! is halved until the value decreases.
//!
//! Since `T x^4` is even and homogeneous, its sphere minimum is positive iff
//! `T` is positive definite and negative iff `T` is not semidefinite. A
//! minimum within `classify_margin` of zero is reported as a boundary case;
//! floats cannot certify equality.

use num::traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exec;
use crate::scalar::{primitive, rationalize, Rational};
use crate::tensor::{ExactTensor, SymmetricTensor4};
use crate::verdict::{Class, Rule, Verdict, Witness};

#[derive(Debug, Clone, PartialEq)]
pub struct OracleConfig {
    /// Lattice size; `None` picks 4096 for `n = 2` and 20000 for `n = 3`.
    pub grid_points: Option<usize>,
    /// Extra uniformly random sphere points drawn from `seed`.
    pub jitter_points: usize,
    /// Number of separated candidates that get refined.
    pub refine_starts: usize,
    pub refine_max_iters: usize,
    pub grad_tol: f64,
    pub classify_margin: f64,
    pub seed: u64,
    /// Spread lattice evaluation and refinement over the rayon pool (only
    /// meaningful with the `parallel` feature).
    pub parallel: bool,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            grid_points: None,
            jitter_points: 64,
            refine_starts: 24,
            refine_max_iters: 500,
            grad_tol: 1e-10,
            classify_margin: 1e-8,
            seed: 0x5eed,
            parallel: true,
        }
    }
}

impl OracleConfig {
    pub fn grid_points_for(&self, dim: usize) -> usize {
        self.grid_points.unwrap_or(if dim == 2 { 4096 } else { 20000 })
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::Config(what.to_string()));
        if self.grid_points == Some(0) {
            return bad("grid_points must be positive");
        }
        if self.refine_starts == 0 {
            return bad("refine_starts must be positive");
        }
        if self.refine_max_iters == 0 {
            return bad("refine_max_iters must be positive");
        }
        if self.grad_tol.is_nan() || self.grad_tol <= 0.0 {
            return bad("grad_tol must be positive");
        }
        if !(0.0..1.0).contains(&self.classify_margin) || self.classify_margin == 0.0 {
            return bad("classify_margin must lie in (0, 1)");
        }
        Ok(())
    }
}

/// Numeric classification of the sphere minimum.
#[derive(Debug, Clone, PartialEq)]
pub enum NumericClass {
    PdCertified,
    Indefinite { witness: Vec<f64> },
    Boundary,
}

/// A refined local minimum.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalMinimum {
    pub point: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub min_value: f64,
    /// Unit-norm minimizer with its first nonzero coordinate positive.
    pub minimizer: Vec<f64>,
    pub classification: NumericClass,
    /// Refinement iterations spent on the winning start.
    pub iterations_used: usize,
    /// Every refined start, in candidate order.
    pub local_minima: Vec<LocalMinimum>,
    /// A sampled point with `T y^4 > margin`, if any.
    pub positive_witness: Option<Vec<f64>>,
    /// Largest `|T x^4|` over the lattice.
    pub grid_max_abs: f64,
}

/// Sphere points where the form vanishes to within the margin.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroSet {
    /// Both antipodal representatives of every cluster.
    pub points: Vec<Vec<f64>>,
    /// The form vanishes on the whole sample (e.g. the zero tensor).
    pub degenerate: bool,
}

/// Dense list of `(index, multiplicity * entry)` terms for fast float
/// evaluation.
#[derive(Debug, Clone)]
pub struct CompiledForm {
    dim: usize,
    terms: Vec<([usize; 4], f64)>,
}

impl CompiledForm {
    pub fn new(t: &SymmetricTensor4<f64>) -> Self {
        let terms = t
            .nonzero_entries()
            .map(|(idx, v)| (idx.as_array(), v * idx.multiplicity() as f64))
            .collect();
        Self { dim: t.dim(), terms }
    }

    pub fn from_exact(t: &ExactTensor) -> Self {
        Self::new(&t.to_f64())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        self.terms.iter().map(|&([i, j, k, l], c)| c * x[i] * x[j] * x[k] * x[l]).sum()
    }

    /// Euclidean gradient `4 T x^3`.
    pub fn gradient(&self, x: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|g| *g = 0.0);
        for &(idx, c) in &self.terms {
            let [i, j, k, l] = idx;
            out[i] += c * x[j] * x[k] * x[l];
            out[j] += c * x[i] * x[k] * x[l];
            out[k] += c * x[i] * x[j] * x[l];
            out[l] += c * x[i] * x[j] * x[k];
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn normalize(x: &mut [f64]) {
    let n = dot(x, x).sqrt();
    if n > 0.0 {
        x.iter_mut().for_each(|v| *v /= n);
    }
}

/// Flip `x` so its first non-negligible coordinate is positive.
pub fn canonical_sign(x: &[f64]) -> Vec<f64> {
    let lead = x.iter().find(|v| v.abs() > 1e-12).copied().unwrap_or(0.0);
    if lead < 0.0 {
        x.iter().map(|v| -v).collect()
    } else {
        x.to_vec()
    }
}

/// Distance between the lines through `a` and `b`.
fn antipodal_distance(a: &[f64], b: &[f64]) -> f64 {
    let minus: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
    let plus: f64 = a.iter().zip(b).map(|(x, y)| (x + y) * (x + y)).sum();
    minus.min(plus).sqrt()
}

/// Deterministic lattice on the sphere `S^{dim-1}`.
pub fn lattice(dim: usize, count: usize) -> Result<Vec<Vec<f64>>> {
    match dim {
        2 => Ok((0..count)
            .map(|k| {
                let theta = std::f64::consts::PI * (k as f64 + 0.5) / count as f64;
                vec![theta.cos(), theta.sin()]
            })
            .collect()),
        3 => {
            let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
            Ok((0..count)
                .map(|k| {
                    let z = 1.0 - 2.0 * (k as f64 + 0.5) / count as f64;
                    let r = (1.0 - z * z).sqrt();
                    let phi = golden * k as f64;
                    vec![r * phi.cos(), r * phi.sin(), z]
                })
                .collect())
        }
        n => Err(Error::UnsupportedDimension(n)),
    }
}

/// Box-Muller standard normal sample.
fn standard_normal<R: Rng>(rng: &mut R) -> f64 {
    let u: f64 = rng.random::<f64>().max(f64::MIN_POSITIVE);
    let v: f64 = rng.random();
    (-2.0 * u.ln()).sqrt() * (std::f64::consts::TAU * v).cos()
}

fn candidates(dim: usize, cfg: &OracleConfig) -> Result<Vec<Vec<f64>>> {
    let mut pts = lattice(dim, cfg.grid_points_for(dim))?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for _ in 0..cfg.jitter_points {
        let mut p: Vec<f64> = (0..dim).map(|_| standard_normal(&mut rng)).collect();
        if dot(&p, &p) == 0.0 {
            p[0] = 1.0;
        }
        normalize(&mut p);
        pts.push(p);
    }
    Ok(pts)
}

/// Projected gradient descent on the sphere from `start`.
pub fn refine(form: &CompiledForm, start: &[f64], cfg: &OracleConfig) -> LocalMinimum {
    let n = form.dim();
    let mut x = start.to_vec();
    normalize(&mut x);
    let mut fx = form.value(&x);
    let mut grad = vec![0.0; n];
    let mut tangent = vec![0.0; n];
    let mut prev: Option<(Vec<f64>, Vec<f64>)> = None;
    let mut step = 0.0;
    let mut trial = vec![0.0; n];
    let mut iterations = 0;

    for it in 0..cfg.refine_max_iters {
        iterations = it;
        form.gradient(&x, &mut grad);
        let radial = dot(&grad, &x);
        for i in 0..n {
            tangent[i] = grad[i] - radial * x[i];
        }
        let gnorm2 = dot(&tangent, &tangent);
        if gnorm2.sqrt() <= cfg.grad_tol {
            break;
        }
        // Barzilai-Borwein length as the first trial, else reuse the last step.
        let mut alpha = match &prev {
            Some((px, pg)) => {
                let s: Vec<f64> = x.iter().zip(px).map(|(a, b)| a - b).collect();
                let y: Vec<f64> = tangent.iter().zip(pg).map(|(a, b)| a - b).collect();
                let sy = dot(&s, &y);
                if sy > 0.0 {
                    dot(&s, &s) / sy
                } else {
                    2.0 * step
                }
            }
            None => 0.1 / gnorm2.sqrt(),
        };
        if !(alpha.is_finite() && alpha > 0.0) {
            alpha = 0.1 / gnorm2.sqrt();
        }
        let mut accepted = false;
        for _ in 0..80 {
            for i in 0..n {
                trial[i] = x[i] - alpha * tangent[i];
            }
            normalize(&mut trial);
            let ft = form.value(&trial);
            if ft < fx {
                prev = Some((x.clone(), tangent.clone()));
                x.copy_from_slice(&trial);
                fx = ft;
                step = alpha;
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if !accepted {
            // No representable decrease along the tangent direction.
            break;
        }
        iterations = it + 1;
    }
    LocalMinimum {
        point: canonical_sign(&x),
        value: fx,
        iterations,
    }
}

/// Indices of the lowest candidates, greedily skipping any within
/// `separation` of an already chosen one (antipodes identified).
fn select_starts(points: &[Vec<f64>], values: &[f64], count: usize, separation: f64) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
    let mut chosen: Vec<usize> = Vec::with_capacity(count);
    for idx in order {
        if chosen.len() == count {
            break;
        }
        if chosen.iter().all(|&c| antipodal_distance(&points[c], &points[idx]) >= separation) {
            chosen.push(idx);
        }
    }
    chosen
}

fn lex_cmp(a: &[f64], b: &[f64]) -> std::cmp::Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(std::cmp::Ordering::Equal)
}

fn check_dim(t: &SymmetricTensor4<f64>) -> Result<()> {
    match t.dim() {
        2 | 3 => Ok(()),
        n => Err(Error::UnsupportedDimension(n)),
    }
}

const START_SEPARATION: f64 = 0.1;
const TIE_RELATIVE: f64 = 1e-12;

/// Minimize the form over the unit sphere.
pub fn sphere_minimize_f64(t: &SymmetricTensor4<f64>, cfg: &OracleConfig) -> Result<OracleResult> {
    check_dim(t)?;
    cfg.validate()?;
    let form = CompiledForm::new(t);
    let points = candidates(t.dim(), cfg)?;
    let values = exec::map_ordered(&points, cfg.parallel, |p| form.value(p));

    let grid_max_abs = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let positive_witness = values
        .iter()
        .enumerate()
        .filter(|(_, v)| **v > cfg.classify_margin)
        .max_by(|a, b| a.1.total_cmp(b.1).then(b.0.cmp(&a.0)))
        .map(|(i, _)| canonical_sign(&points[i]));

    let starts = select_starts(&points, &values, cfg.refine_starts, START_SEPARATION);
    let local_minima = exec::map_ordered(&starts, cfg.parallel, |&i| refine(&form, &points[i], cfg));

    // Values within TIE_RELATIVE of the exact minimum count as ties; among
    // them the lexicographically largest canonical point wins. Both steps are
    // functions of the result set alone, so partitioning cannot change them.
    let floor = local_minima.iter().map(|m| m.value).fold(f64::INFINITY, f64::min);
    let band = TIE_RELATIVE * floor.abs().max(1.0);
    let best = local_minima
        .iter()
        .filter(|m| m.value <= floor + band)
        .max_by(|a, b| lex_cmp(&a.point, &b.point))
        .expect("at least one start")
        .clone();

    let classification = if best.value > cfg.classify_margin {
        NumericClass::PdCertified
    } else if best.value < -cfg.classify_margin {
        NumericClass::Indefinite {
            witness: best.point.clone(),
        }
    } else {
        NumericClass::Boundary
    };

    Ok(OracleResult {
        min_value: best.value,
        minimizer: best.point,
        classification,
        iterations_used: best.iterations,
        local_minima,
        positive_witness,
        grid_max_abs,
    })
}

pub fn sphere_minimize(t: &ExactTensor, cfg: &OracleConfig) -> Result<OracleResult> {
    sphere_minimize_f64(&t.to_f64(), cfg)
}

/// Rationalize a float witness and confirm `T w^4 < 0` exactly.
pub fn certify_negative(t: &ExactTensor, witness: &[f64]) -> Option<Vec<Rational>> {
    [1_000_000i64, 1_000_000_000, 1_000_000_000_000].into_iter().find_map(|den| {
        let w: Vec<Rational> = witness.iter().map(|&x| rationalize(x, den)).collect();
        let value = t.evaluate_form(&w).ok()?;
        value.is_negative().then(|| primitive(&w))
    })
}

/// Numeric verdict: `PositiveDefinite` if the sphere minimum exceeds the
/// margin, `Indefinite` (with an exactly verified rational witness) if it is
/// below `-margin`, otherwise `Undetermined`.
pub fn classify_numeric(t: &ExactTensor, cfg: &OracleConfig) -> Result<Verdict> {
    let res = sphere_minimize(t, cfg)?;
    Ok(verdict_from_result(t, &res))
}

pub fn verdict_from_result(t: &ExactTensor, res: &OracleResult) -> Verdict {
    match &res.classification {
        NumericClass::PdCertified => Verdict::new(Class::PositiveDefinite, Rule::Numeric).with_margin(res.min_value),
        NumericClass::Indefinite { witness } => match certify_negative(t, witness) {
            Some(w) => Verdict::new(Class::Indefinite, Rule::Numeric)
                .with_witness(Some(Witness::Exact(w)))
                .with_margin(res.min_value),
            None => Verdict::undetermined(Rule::Numeric).with_margin(res.min_value),
        },
        NumericClass::Boundary => Verdict::undetermined(Rule::Numeric).with_margin(res.min_value),
    }
}

/// Cluster radius for zero-set points.
pub const CLUSTER_RADIUS: f64 = 1e-4;

/// Refined sphere points with `|T x^4| <= margin`, clustered up to sign.
pub fn zero_set_from_result(res: &OracleResult, cfg: &OracleConfig) -> ZeroSet {
    if res.grid_max_abs <= cfg.classify_margin {
        return ZeroSet {
            points: Vec::new(),
            degenerate: true,
        };
    }
    let mut hits: Vec<&LocalMinimum> = res.local_minima.iter().filter(|m| m.value.abs() <= cfg.classify_margin).collect();
    hits.sort_by(|a, b| a.value.abs().total_cmp(&b.value.abs()).then_with(|| lex_cmp(&a.point, &b.point)));
    let mut reps: Vec<Vec<f64>> = Vec::new();
    for m in hits {
        if reps.iter().all(|r| antipodal_distance(r, &m.point) > CLUSTER_RADIUS) {
            reps.push(m.point.clone());
        }
    }
    reps.sort_by(|a, b| lex_cmp(b, a));
    let points = reps
        .into_iter()
        .flat_map(|r| {
            let neg: Vec<f64> = r.iter().map(|v| -v).collect();
            [r, neg]
        })
        .collect();
    ZeroSet {
        points,
        degenerate: false,
    }
}

pub fn zero_set_probe(t: &ExactTensor, cfg: &OracleConfig) -> Result<ZeroSet> {
    let res = sphere_minimize(t, cfg)?;
    Ok(zero_set_from_result(&res, cfg))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::binary::BinaryQuartic;
    use crate::cyclic::CyclicTernary;
    use crate::scalar::{int, ratio};

    fn cyc(b: i64, c: i64, d: i64, e: (i64, i64)) -> ExactTensor {
        CyclicTernary::new(int(1), int(b), int(c), int(d), ratio(e.0, e.1)).embed()
    }

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn sum_of_fourth_powers_minimum() {
        let t = ExactTensor::diagonal_ones(3).unwrap();
        let res = sphere_minimize(&t, &OracleConfig::default()).unwrap();
        assert!((res.min_value - 1.0 / 3.0).abs() < 1e-12, "{}", res.min_value);
        let s = 1.0 / 3f64.sqrt();
        assert!(close(&res.minimizer.iter().map(|v| v.abs()).collect::<Vec<_>>(), &[s, s, s], 1e-6));
        assert_eq!(res.classification, NumericClass::PdCertified);
        assert!(res.positive_witness.is_some());
    }

    #[test]
    fn boundary_tensor_has_zero_minimum() {
        let res = sphere_minimize(&cyc(-1, 1, 1, (-7, 12)), &OracleConfig::default()).unwrap();
        assert!(res.min_value.abs() <= 1e-8, "{}", res.min_value);
        let s = 1.0 / 3f64.sqrt();
        assert!(close(&res.minimizer, &[s, s, s], 1e-4), "{:?}", res.minimizer);
        assert_eq!(res.classification, NumericClass::Boundary);
    }

    #[test]
    fn counterexample_tensor_is_negative() {
        let t = cyc(1, 1, 1, (-7, 12));
        let res = sphere_minimize(&t, &OracleConfig::default()).unwrap();
        assert!(res.min_value <= -204.0 / 729.0, "{}", res.min_value);
        let v = verdict_from_result(&t, &res);
        assert_eq!(v.class, Class::Indefinite);
        let Some(Witness::Exact(w)) = v.witness else { panic!() };
        assert!(t.evaluate_form(&w).unwrap().is_negative());
    }

    #[test]
    fn zero_tensor_is_degenerate_boundary() {
        let t = ExactTensor::zeros(3).unwrap();
        let cfg = OracleConfig::default();
        let v = classify_numeric(&t, &cfg).unwrap();
        assert_eq!(v.class, Class::Undetermined);
        let z = zero_set_probe(&t, &cfg).unwrap();
        assert!(z.degenerate);
    }

    #[test]
    fn zero_sets() {
        let cfg = OracleConfig::default();
        assert!(zero_set_probe(&ExactTensor::diagonal_ones(3).unwrap(), &cfg).unwrap().points.is_empty());

        let z = zero_set_probe(&cyc(-1, 1, 1, (-7, 12)), &cfg).unwrap();
        let s = 1.0 / 3f64.sqrt();
        assert_eq!(z.points.len(), 2, "{:?}", z.points);
        assert!(close(&z.points[0], &[s, s, s], 1e-4));
        assert!(close(&z.points[1], &[-s, -s, -s], 1e-4));

        let q = BinaryQuartic::from_coefficients([int(1), int(0), ratio(-1, 3), int(0), int(1)]);
        let z = zero_set_probe(&q.to_tensor(), &cfg).unwrap();
        let h = 1.0 / 2f64.sqrt();
        assert_eq!(z.points.len(), 4, "{:?}", z.points);
        for target in [[h, h], [-h, -h], [h, -h], [-h, h]] {
            assert!(z.points.iter().any(|p| close(p, &target, 1e-4)), "{target:?}");
        }
    }

    #[test]
    fn rejects_unsupported_dimensions_and_bad_configs() {
        let t = ExactTensor::diagonal_ones(4).unwrap();
        assert_eq!(sphere_minimize(&t, &OracleConfig::default()), Err(Error::UnsupportedDimension(4)));
        let t = ExactTensor::diagonal_ones(3).unwrap();
        let cfg = OracleConfig {
            classify_margin: 2.0,
            ..OracleConfig::default()
        };
        assert!(matches!(sphere_minimize(&t, &cfg), Err(Error::Config(_))));
    }

    #[test]
    fn deterministic_and_partition_independent() {
        let t = cyc(-1, 1, 2, (-1, 3));
        let seq = OracleConfig {
            parallel: false,
            ..OracleConfig::default()
        };
        let par = OracleConfig::default();
        let a = sphere_minimize(&t, &seq).unwrap();
        let b = sphere_minimize(&t, &par).unwrap();
        let c = sphere_minimize(&t, &par).unwrap();
        assert_eq!(a, b);
        assert_eq!(b, c);
    }

    #[test]
    fn result_invariants() {
        let t = cyc(1, -1, 2, (-1, 2));
        let res = sphere_minimize(&t, &OracleConfig::default()).unwrap();
        let norm = dot(&res.minimizer, &res.minimizer).sqrt();
        assert!((norm - 1.0).abs() <= 1e-12);
        let value = CompiledForm::from_exact(&t).value(&res.minimizer);
        assert!((value - res.min_value).abs() <= 1e-9 * res.min_value.abs().max(1.0));
        assert!(res.minimizer.iter().find(|v| v.abs() > 1e-12).unwrap() > &0.0);
    }

    #[test]
    fn compiled_gradient_matches_exact() {
        let t = cyc(1, -1, 3, (-1, 5));
        let x = [ratio(1, 2), ratio(-3, 4), ratio(2, 3)];
        let exact = t.evaluate_gradient(&x).unwrap();
        let xf: Vec<f64> = x.iter().map(crate::scalar::to_f64).collect();
        let mut g = vec![0.0; 3];
        CompiledForm::from_exact(&t).gradient(&xf, &mut g);
        for (a, b) in g.iter().zip(&exact) {
            assert!((a - 4.0 * crate::scalar::to_f64(b)).abs() < 1e-12);
        }
    }
}
