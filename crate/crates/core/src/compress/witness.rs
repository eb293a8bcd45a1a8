use nalgebra::{DMatrix, DVector};
use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};

use super::jl::{sample_jl_matrix, JlProjection, DEFAULT_MAX_ATTEMPTS};
use super::ortho::near_ortho_basis;
use crate::advdual::WitnessVectors;
use crate::boolfn::BooleanFunction;
use crate::error::{Error, Result};
use crate::linalg::{self, RANK_TOL};
use crate::report::Bound;
use crate::scalar::Real;
use crate::space::AlgorithmSpace;

/// Parameters of a JL run. `theta` is the phase threshold used when the
/// compressed vectors are simulated.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct JlParams {
    pub epsilon: f64,
    pub n_rows: u64,
    pub theta: f64,
    pub delta: f64,
    pub c: f64,
    pub size: f64,
    pub kappa: usize,
}

#[derive(Clone, Debug)]
pub struct JlOptions {
    pub max_attempts: usize,
    /// Overrides the default `ε = min{1/(4cκ), 1/(32√c(c+1)A²√κ)}`.
    pub epsilon: Option<f64>,
}

impl Default for JlOptions {
    fn default() -> Self {
        JlOptions { max_attempts: DEFAULT_MAX_ATTEMPTS, epsilon: None }
    }
}

/// `min{1/(4cκ), 1/(32√c(c+1)A²√κ)}`.
pub fn jl_epsilon(c: f64, size: f64, kappa: usize) -> f64 {
    let k = kappa as f64;
    (1.0 / (4.0 * c * k)).min(1.0 / (32.0 * c.sqrt() * (c + 1.0) * size * size * k.sqrt()))
}

/// Witness vectors after applying `|0̂⟩⟨0̂| + I ⊗ S ⊗ I`.
#[derive(Clone, Debug)]
pub struct CompressedWitnesses<T: Real> {
    pub function: BooleanFunction,
    pub space: AlgorithmSpace,
    pub ones: Vec<usize>,
    pub zeros: Vec<usize>,
    pub psi_c: Vec<DVector<T>>,
    pub phi_c: Vec<DVector<T>>,
    pub zeta_c: Vec<DVector<T>>,
    /// `ζ_j = Σ_x alpha[(j, x)] ψ_x`, columns aligned with `ones`.
    pub alpha: DMatrix<T>,
    /// `ζ_{j,i,b}` at position `(j·n + i)·2 + b`.
    pub components: Vec<DVector<T>>,
    pub params: JlParams,
    pub projection: JlProjection<T>,
}

impl<T: Real> CompressedWitnesses<T> {
    pub fn component(&self, j: usize, i: usize, b: bool) -> &DVector<T> {
        &self.components[(j * self.space.n + i) * 2 + b as usize]
    }
}

fn compress_vector<T: Real>(
    v: &DVector<T>,
    from: &AlgorithmSpace,
    to: &AlgorithmSpace,
    proj: &JlProjection<T>,
) -> DVector<T> {
    let mut out = DVector::zeros(to.dim());
    out[0] = v[0];
    for i in 0..from.n {
        for b in [false, true] {
            let part = DVector::from_fn(from.m, |l, _| v[from.coord(i, l, b)]);
            let image = proj.apply(&part);
            for (l, &c) in image.iter().enumerate() {
                out[to.coord(i, l, b)] = c;
            }
        }
    }
    out
}

/// [`jl_compress_with`] with default options.
pub fn jl_compress<T: Real>(w: &WitnessVectors<T>, kappa: usize, seed: u64) -> Result<CompressedWitnesses<T>> {
    jl_compress_with(w, kappa, seed, &JlOptions::default())
}

/// Compress the witnesses of `w` through an orthonormal basis `ζ` of
/// `span{ψ_x}`. `kappa` must equal that span's dimension. The result carries
/// the projection; check `projection.verified` before trusting the bounds.
pub fn jl_compress_with<T: Real>(
    w: &WitnessVectors<T>,
    kappa: usize,
    seed: u64,
    opts: &JlOptions,
) -> Result<CompressedWitnesses<T>> {
    if w.psi.is_empty() {
        return Err(Error::EmptyFamily("psi"));
    }
    let space = w.space;
    let psi_cols = linalg::columns(space.dim(), &w.psi);
    let svd = linalg::thin_svd(&psi_cols);
    let rank = linalg::numerical_rank(svd.singular_values.as_slice(), RANK_TOL);
    if kappa == 0 || kappa != rank {
        return Err(Error::KappaOutOfRange { kappa_star: kappa, kappa: rank });
    }
    let n1 = w.ones.len();
    let alpha = DMatrix::from_fn(kappa, n1, |j, x| svd.v[(x, j)] / svd.singular_values[j]);

    let f = w.vectors.function();
    let n = space.n;
    let mut components = Vec::with_capacity(kappa * n * 2);
    for j in 0..kappa {
        for i in 0..n {
            for b in [false, true] {
                let mut acc = DVector::zeros(space.m);
                for (k, &x) in w.ones.iter().enumerate() {
                    if f.input(x).bit(i) == b {
                        let coef = alpha[(j, k)] / w.nu[k].sqrt();
                        acc += w.vectors.vector(x, i) * coef;
                    }
                }
                components.push(acc);
            }
        }
    }
    let mut family = components.clone();
    for &y in &w.zeros {
        for i in 0..n {
            family.push(w.vectors.vector(y, i));
        }
    }

    let c = w.c.as_f64();
    let size = w.size.as_f64();
    let epsilon = opts.epsilon.unwrap_or_else(|| jl_epsilon(c, size, kappa));
    let projection = sample_jl_matrix(space.m, epsilon, &family, opts.max_attempts, seed)?;
    let to = AlgorithmSpace::new(n, projection.output_dim());
    let zeta: Vec<DVector<T>> = (0..kappa).map(|j| svd.u.column(j).into_owned()).collect();
    let apply = |v: &DVector<T>| compress_vector(v, &space, &to, &projection);
    Ok(CompressedWitnesses {
        function: f.clone(),
        space: to,
        ones: w.ones.clone(),
        zeros: w.zeros.clone(),
        psi_c: w.psi.iter().map(apply).collect(),
        phi_c: w.phi.iter().map(apply).collect(),
        zeta_c: zeta.iter().map(apply).collect(),
        alpha,
        components,
        params: JlParams {
            epsilon,
            n_rows: projection.n_rows,
            theta: 1.0 / (4.0 * c.sqrt() * size),
            delta: 1.0 / 25.0,
            c,
            size,
            kappa,
        },
        projection,
    })
}

/// The compressed-vector inequalities, each as worst observed value vs bound.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JlLemmaReport {
    /// `max |⟨ζ′_j|ζ′_l⟩ − δ_jl| ≤ 4ε`.
    pub zeta_gram: Bound,
    /// `max |⟨ζ′_j|φ′_x⟩| ≤ 2ε(c+1)A`.
    pub zeta_phi: Bound,
    /// `max |‖ψ′_x‖² − 1| ≤ 4εκ`.
    pub psi_norm: Bound,
    /// `max |‖φ′_x‖ − 1| ≤ 3ε`.
    pub phi_norm: Bound,
    /// `max ‖(I+R)φ′_x‖ ≤ 8ε(c+1)A√κ`, `R` the reflection about `span{ψ′_x}`.
    pub reflection_phi: Bound,
    /// Gram-Schmidt on `ζ′` at `4ε`: `max |a_ji − δ_ji| ≤ 12ε`, when the
    /// precondition `4εκ < 1/4` holds.
    pub ortho_coefficients: Option<Bound>,
    pub all_hold: bool,
}

pub fn check_jl_lemmas<T: Real>(cw: &CompressedWitnesses<T>) -> JlLemmaReport {
    let p = &cw.params;
    let eps = p.epsilon;
    let kappa = p.kappa;
    let ca = (p.c + 1.0) * p.size;

    let mut gram = 0.0f64;
    for (j, a) in cw.zeta_c.iter().enumerate() {
        for (l, b) in cw.zeta_c.iter().enumerate() {
            let target = if j == l { 1.0 } else { 0.0 };
            gram = gram.max((a.dot(b).as_f64() - target).abs());
        }
    }
    let zeta_phi = cw
        .zeta_c
        .iter()
        .flat_map(|z| cw.phi_c.iter().map(move |q| z.dot(q).as_f64().abs()))
        .fold(0.0, f64::max);
    let psi_norm = cw.psi_c.iter().map(|v| (v.norm_squared().as_f64() - 1.0).abs()).fold(0.0, f64::max);
    let phi_norm = cw.phi_c.iter().map(|v| (v.norm().as_f64() - 1.0).abs()).fold(0.0, f64::max);

    let svd = linalg::thin_svd(&linalg::columns(cw.space.dim(), &cw.psi_c));
    let basis = svd.u.columns(0, kappa.min(svd.u.ncols())).into_owned();
    let reflection_phi = cw
        .phi_c
        .iter()
        .map(|q| (basis.tr_mul(q).norm() * T::lit(2.0)).as_f64())
        .fold(0.0, f64::max);

    let ortho = near_ortho_basis(&cw.zeta_c, T::lit(4.0 * eps)).ok().map(|nb| {
        let r = nb.coefficients.nrows();
        let dev = (&nb.coefficients - DMatrix::<T>::identity(r, r)).amax().as_f64();
        Bound::new(dev, 12.0 * eps)
    });

    let mut report = JlLemmaReport {
        zeta_gram: Bound::new(gram, 4.0 * eps),
        zeta_phi: Bound::new(zeta_phi, 2.0 * eps * ca),
        psi_norm: Bound::new(psi_norm, 4.0 * eps * kappa as f64),
        phi_norm: Bound::new(phi_norm, 3.0 * eps),
        reflection_phi: Bound::new(reflection_phi, 8.0 * eps * ca * (kappa as f64).sqrt()),
        ortho_coefficients: ortho,
        all_hold: false,
    };
    report.all_hold = report.zeta_gram.holds
        && report.zeta_phi.holds
        && report.psi_norm.holds
        && report.phi_norm.holds
        && report.reflection_phi.holds
        && report.ortho_coefficients.is_none_or(|b| b.holds);
    report
}

#[derive(Serialize)]
struct RawVector<'a> {
    x: &'a crate::boolfn::BitString,
    vector: Vec<f64>,
}

fn raw_f64<T: Real>(v: &DVector<T>) -> Vec<f64> {
    v.iter().map(|c| c.as_f64()).collect()
}

impl<T: Real> Serialize for CompressedWitnesses<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let tagged = |idx: &[usize], vecs: &[DVector<T>]| -> Vec<RawVector<'_>> {
            idx.iter()
                .zip(vecs)
                .map(|(&x, v)| RawVector { x: self.function.input(x), vector: raw_f64(v) })
                .collect()
        };
        let alpha: Vec<Vec<f64>> =
            self.alpha.row_iter().map(|r| r.iter().map(|c| c.as_f64()).collect()).collect();
        let mut st = s.serialize_struct("CompressedWitnesses", 7)?;
        st.serialize_field("params", &self.params)?;
        st.serialize_field("projection", &self.projection)?;
        st.serialize_field("space", &self.space)?;
        st.serialize_field("psi", &tagged(&self.ones, &self.psi_c))?;
        st.serialize_field("phi", &tagged(&self.zeros, &self.phi_c))?;
        st.serialize_field("zeta", &self.zeta_c.iter().map(raw_f64).collect::<Vec<_>>())?;
        st.serialize_field("alpha", &alpha)?;
        st.end()
    }
}
