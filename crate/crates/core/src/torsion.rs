//! Torsion of finite-characteristic Drinfeld modules as kernels of
//! F_q-linear maps, and Frobenius matrices on P-torsion.

use std::fmt;

use serde::Serialize;

use crate::algebra::epoly::canonical_root;
use crate::algebra::field::{canonical_field, ExtField, FieldElem, FieldEmbedding, Fq};
use crate::algebra::ideal::PrimeIdeal;
use crate::algebra::matrix::{identity, kernel, mat_mul, minus_identity, rank, solve, Matrix, RingMatrix};
use crate::algebra::poly::APoly;
use crate::algebra::quotient::QuotRing;
use crate::algebra::ring::{FqAlgebra, Ring};
use crate::algebra::snf::module_invariant_factors;
use crate::drinfeld::{tw_eval, FiniteModule, GenericModule, TwistedPoly};
use crate::error::{Error, Result};

/// `x -> f(x)` on F_{q^m} as an m x m matrix over F_q in the power basis.
#[derive(Clone, Debug)]
pub struct QLinearMap {
    pub field: ExtField,
    pub matrix: Matrix<u8>,
}

impl QLinearMap {
    pub fn apply(&self, x: &FieldElem) -> FieldElem {
        let fq = self.field.fq();
        FieldElem(crate::algebra::matrix::mat_vec(fq, &self.matrix, &x.0))
    }
    pub fn kernel(&self) -> Vec<FieldElem> {
        kernel(self.field.fq(), &self.matrix).into_iter().map(FieldElem).collect()
    }
    pub fn rank(&self) -> usize {
        rank(self.field.fq(), &self.matrix)
    }
}

pub fn qlinear_matrix(f: &TwistedPoly<FieldElem>, field: &ExtField) -> Result<QLinearMap> {
    let m = field.degree();
    if f.coeffs().iter().any(|c| c.0.len() != m) {
        return Err(Error::Mismatch("twisted polynomial is not over this field".into()));
    }
    let cols: Vec<Vec<u8>> = (0..m)
        .map(|j| {
            let mut e = vec![0u8; m];
            e[j] = 1;
            tw_eval(field, f, &FieldElem(e)).0
        })
        .collect();
    Ok(QLinearMap { field: field.clone(), matrix: Matrix::from_columns(&cols) })
}

/// `ker phi_a` inside the module's field, with its A-module structure.
#[derive(Clone, Debug)]
pub struct TorsionModule {
    pub field: ExtField,
    pub a: APoly,
    pub rank: usize,
    /// F_q-basis of the kernel.
    pub basis: Vec<FieldElem>,
    /// phi_T acting on kernel coordinates.
    pub action: Matrix<u8>,
    /// Greedy A-generators, in kernel coordinates.
    pub generators: Vec<Vec<u8>>,
    /// `(generator index, power of T)` for each vector of the greedy F_q-basis.
    pub krylov: Vec<(usize, usize)>,
    pub invariant_factors: Vec<APoly>,
}

fn basis_matrix(basis: &[FieldElem]) -> Matrix<u8> {
    let cols: Vec<Vec<u8>> = basis.iter().map(|b| b.0.clone()).collect();
    Matrix::from_columns(&cols)
}

fn krylov_vectors(fq: &Fq, action: &Matrix<u8>, gens: &[Vec<u8>], krylov: &[(usize, usize)]) -> Vec<Vec<u8>> {
    krylov
        .iter()
        .map(|&(g, i)| {
            let mut v = gens[g].clone();
            for _ in 0..i {
                v = crate::algebra::matrix::mat_vec(fq, action, &v);
            }
            v
        })
        .collect()
}

/// Greedy A-span saturation over the kernel basis vectors in order.
fn greedy_generators(fq: &Fq, action: &Matrix<u8>) -> (Vec<Vec<u8>>, Vec<(usize, usize)>) {
    let k = action.rows();
    let mut span: Vec<Vec<u8>> = Vec::new();
    let mut gens = Vec::new();
    let mut krylov = Vec::new();
    let in_span = |span: &Vec<Vec<u8>>, v: &Vec<u8>| {
        if span.is_empty() {
            return v.iter().all(|&c| c == 0);
        }
        let mut cols = span.clone();
        cols.push(v.clone());
        rank(fq, &Matrix::from_columns(&cols)) == span.len()
    };
    for i in 0..k {
        let mut v = vec![0u8; k];
        v[i] = 1;
        if in_span(&span, &v) {
            continue;
        }
        let g = gens.len();
        gens.push(v.clone());
        let mut p = 0;
        while !in_span(&span, &v) {
            span.push(v.clone());
            krylov.push((g, p));
            v = crate::algebra::matrix::mat_vec(fq, action, &v);
            p += 1;
        }
    }
    (gens, krylov)
}

impl TorsionModule {
    pub fn fq(&self) -> &Fq {
        self.field.fq()
    }
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }
    /// The whole of `(A/a)^r` is rational over the field.
    pub fn is_full(&self) -> bool {
        self.dimension() == self.rank * self.a.degree().unwrap_or(0)
    }
    pub fn size(&self) -> u128 {
        (self.fq().q() as u128).pow(self.dimension() as u32)
    }

    pub fn point(&self, coords: &[u8]) -> FieldElem {
        let mut acc = self.field.zero();
        for (c, b) in coords.iter().zip(&self.basis) {
            acc = self.field.add(&acc, &self.field.scale(*c, b));
        }
        acc
    }

    /// Kernel coordinates of `x`, or `None` if `x` is not a torsion point.
    pub fn coords_of(&self, x: &FieldElem) -> Option<Vec<u8>> {
        if self.basis.is_empty() {
            return x.0.iter().all(|&c| c == 0).then(Vec::new);
        }
        solve(self.fq(), &basis_matrix(&self.basis), &x.0)
    }

    pub fn contains(&self, x: &FieldElem) -> bool {
        self.coords_of(x).is_some()
    }

    /// All torsion points, in coordinate index order.
    pub fn points(&self) -> Vec<FieldElem> {
        let q = self.fq().q() as u128;
        let k = self.dimension();
        (0..self.size())
            .map(|mut n| {
                let c: Vec<u8> = (0..k)
                    .map(|_| {
                        let d = (n % q) as u8;
                        n /= q;
                        d
                    })
                    .collect();
                self.point(&c)
            })
            .collect()
    }

    pub fn generator_points(&self) -> Vec<FieldElem> {
        self.generators.iter().map(|g| self.point(g)).collect()
    }

    /// Greedy F_q-basis `{T^i v_j}` as field elements.
    pub fn greedy_basis(&self) -> Vec<FieldElem> {
        krylov_vectors(self.fq(), &self.action, &self.generators, &self.krylov).iter().map(|c| self.point(c)).collect()
    }

    /// `A/(f_1) x ... x A/(f_k)`, or `0`.
    pub fn structure(&self) -> String {
        if self.invariant_factors.is_empty() {
            return "0".into();
        }
        self.invariant_factors.iter().map(|f| format!("A/({})", f.to_expr())).collect::<Vec<_>>().join(" x ")
    }

    /// Matrix over F_q of an F_q-linear map of the kernel into itself, in
    /// kernel coordinates.
    pub fn linear_map_matrix(&self, f: impl Fn(&FieldElem) -> FieldElem) -> Result<Matrix<u8>> {
        let cols = self
            .basis
            .iter()
            .map(|b| self.coords_of(&f(b)).ok_or_else(|| Error::Mismatch("map leaves the torsion module".into())))
            .collect::<Result<Vec<_>>>()?;
        Ok(Matrix::from_columns(&cols))
    }
}

pub fn torsion_submodule(module: &FiniteModule, a: &APoly) -> Result<TorsionModule> {
    if a.is_zero() {
        return Err(Error::ZeroIdeal);
    }
    let field = module.field().clone();
    let fq = field.fq().clone();
    let basis = qlinear_matrix(&module.phi_of(a), &field)?.kernel();
    let phi_t = module.phi_t();
    let mut tm = TorsionModule {
        field: field.clone(),
        a: a.clone(),
        rank: module.rank(),
        basis,
        action: Matrix::from_fn(0, 0, |_, _| 0),
        generators: Vec::new(),
        krylov: Vec::new(),
        invariant_factors: Vec::new(),
    };
    tm.action = tm.linear_map_matrix(|x| tw_eval(&field, phi_t, x))?;
    tm.invariant_factors = if tm.dimension() == 0 { Vec::new() } else { module_invariant_factors(&fq, &tm.action) };
    let (g, k) = greedy_generators(&fq, &tm.action);
    tm.generators = g;
    tm.krylov = k;
    Ok(tm)
}

/// The module over F_{q^{m d}} (canonical field), with the embedding used.
pub fn extend_module(module: &FiniteModule, d: usize) -> Result<(FiniteModule, FieldEmbedding)> {
    let src = module.field();
    if d == 1 {
        return Ok((module.clone(), FieldEmbedding::identity(src)));
    }
    let fq = src.fq();
    let target = canonical_field(fq.p() as u64, fq.s() as u32, src.degree() * d)?;
    let root = canonical_root(&target, src.modulus()).ok_or_else(|| Error::NotIrreducible(src.modulus().to_expr()))?;
    let emb = FieldEmbedding { source: src.clone(), target, generator_image: root };
    Ok((module.base_change(&emb)?, emb))
}

fn check_coprime(module: &FiniteModule, a: &APoly) -> Result<()> {
    if let Some(l) = module.char_place() {
        if !a.gcd(l.generator(), module.fq()).is_one() {
            return Err(Error::CharacteristicPlace(a.to_expr()));
        }
    }
    Ok(())
}

/// card GL(r, F_N), saturating.
fn gl_order_u64(r: usize, n: u128) -> u64 {
    let nr = n.saturating_pow(r as u32);
    (0..r as u32).map(|i| nr.saturating_sub(n.saturating_pow(i))).fold(1u128, |acc, x| acc.saturating_mul(x)).min(u64::MAX as u128) as u64
}

/// Least d with `phi[a]` fully rational over F_{q^{m d}}, searching up to `cap`.
pub fn splitting_degree_for(module: &FiniteModule, a: &APoly, cap: u64) -> Result<usize> {
    if a.is_zero() {
        return Err(Error::ZeroIdeal);
    }
    check_coprime(module, a)?;
    let target = module.rank() * a.deg0();
    for d in 1..=cap as usize {
        let (ext, _) = extend_module(module, d)?;
        if torsion_submodule(&ext, a)?.dimension() == target {
            return Ok(d);
        }
    }
    Err(Error::SplittingCap(cap))
}

/// Splitting degree of the P-torsion; the search is capped at card GL(r, A/P).
pub fn splitting_degree(module: &FiniteModule, p: &PrimeIdeal) -> Result<usize> {
    if module.char_place() == Some(p) {
        return Err(Error::CharacteristicPlace(p.generator().to_expr()));
    }
    splitting_degree_for(module, p.generator(), gl_order_u64(module.rank(), p.norm()))
}

/// Frobenius at a place acting on P-torsion, in the greedy A/P-basis.
#[derive(Clone, Debug)]
pub struct FrobMatrix {
    pub matrix: RingMatrix,
    pub ring: QuotRing,
    pub module: String,
    pub prime: PrimeIdeal,
    pub place: PrimeIdeal,
    /// Degree of the place, i.e. of the residue field over F_q.
    pub base_degree: usize,
    pub splitting_degree: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct FrobRecord {
    pub module: String,
    pub prime: String,
    pub place: String,
    pub base_degree: usize,
    pub splitting_degree: usize,
    pub matrix: Vec<Vec<String>>,
    pub fixes_nonzero: bool,
}

impl FrobMatrix {
    pub fn fixes_nonzero(&self) -> bool {
        fixes_nonzero_torsion(&self.ring, &self.matrix).unwrap_or(false)
    }

    pub fn record(&self) -> FrobRecord {
        FrobRecord {
            module: self.module.clone(),
            prime: self.prime.generator().to_expr(),
            place: self.place.generator().to_expr(),
            base_degree: self.base_degree,
            splitting_degree: self.splitting_degree,
            matrix: (0..self.matrix.rows()).map(|i| self.matrix.row(i).iter().map(|e| e.to_expr()).collect()).collect(),
            fixes_nonzero: self.fixes_nonzero(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.record()).expect("serializable")
    }
}

impl fmt::Display for FrobMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> =
            (0..self.matrix.rows()).map(|i| self.matrix.row(i).iter().map(|e| e.to_expr()).collect::<Vec<_>>().join(" ")).collect();
        write!(f, "[{}]", rows.join("; "))
    }
}

/// Matrix over A/P of an A-linear map on full P-torsion, in the greedy basis.
pub fn matrix_over_residue(tm: &TorsionModule, p: &PrimeIdeal, map: impl Fn(&FieldElem) -> FieldElem) -> Result<(QuotRing, RingMatrix)> {
    let fq = tm.fq().clone();
    if tm.a != *p.generator() || !tm.is_full() {
        return Err(Error::Mismatch("needs the full P-torsion".into()));
    }
    let r = tm.rank;
    let dp = p.degree();
    let ring = QuotRing::prime_power(fq.clone(), p, 1)?;
    let kv = krylov_vectors(&fq, &tm.action, &tm.generators, &tm.krylov);
    let b = Matrix::from_columns(&kv);
    let mut m = Matrix::from_fn(r, r, |_, _| APoly::zero());
    for j in 0..r {
        let v = tm.point(&tm.generators[j]);
        let img = tm.coords_of(&map(&v)).ok_or_else(|| Error::Mismatch("map leaves the torsion module".into()))?;
        let c = solve(&fq, &b, &img).expect("greedy basis spans the kernel");
        for k in 0..r {
            let entry = APoly::from_coeffs(c[k * dp..(k + 1) * dp].to_vec());
            m.set(k, j, entry);
        }
    }
    Ok((ring, m))
}

/// Reduce at `place`, pass to the splitting field of the P-torsion and
/// return the matrix of the q^(deg place)-power map.
pub fn frobenius_on_torsion(module: &GenericModule, p: &PrimeIdeal, place: &PrimeIdeal) -> Result<FrobMatrix> {
    if p == place {
        return Err(Error::CharacteristicPlace(p.generator().to_expr()));
    }
    let red = module.reduce_at_place(place)?;
    let d = splitting_degree(&red, p)?;
    let (ext, _) = extend_module(&red, d)?;
    let tm = torsion_submodule(&ext, p.generator())?;
    if tm.krylov.len() != tm.dimension() || tm.generators.len() != module.rank() {
        return Err(Error::Mismatch("torsion is not free over A/P".into()));
    }
    let m = place.degree();
    let field = ext.field().clone();
    let (ring, matrix) = matrix_over_residue(&tm, p, |x| field.frob_pow(x, m))?;
    Ok(FrobMatrix { matrix, ring, module: module.spec().to_string(), prime: p.clone(), place: place.clone(), base_degree: m, splitting_degree: d })
}

/// Torsion of a generic module's reduction at `place`, over the field where
/// it becomes fully rational.
#[derive(Clone, Debug, Serialize)]
pub struct TorsionRecord {
    pub module: String,
    pub ideal: String,
    pub place: String,
    pub base_degree: usize,
    pub splitting_degree: usize,
    pub dimension: usize,
    pub structure: String,
    pub invariant_factors: Vec<String>,
    /// Greedy A-generators, as coordinate vectors over the power basis.
    pub generators: Vec<String>,
    /// Frobenius on the torsion, when the ideal is prime.
    pub frobenius: Option<FrobRecord>,
}

pub fn torsion_record(module: &GenericModule, a: &APoly, place: &PrimeIdeal) -> Result<(TorsionRecord, TorsionModule)> {
    let fq = module.fq().clone();
    if a.is_zero() {
        return Err(Error::ZeroIdeal);
    }
    let a = a.monic(&fq);
    let red = module.reduce_at_place(place)?;
    let cap = (fq.q() as u64).saturating_pow((module.rank() * module.rank() * a.deg0()) as u32);
    let d = splitting_degree_for(&red, &a, cap)?;
    let (ext, _) = extend_module(&red, d)?;
    let tm = torsion_submodule(&ext, &a)?;
    let frobenius = if a.is_irreducible(&fq) { Some(frobenius_on_torsion(module, &PrimeIdeal::new(a.clone(), &fq)?, place)?.record()) } else { None };
    let rec = TorsionRecord {
        module: module.spec().to_string(),
        ideal: a.to_expr(),
        place: place.generator().to_expr(),
        base_degree: place.degree(),
        splitting_degree: d,
        dimension: tm.dimension(),
        structure: tm.structure(),
        invariant_factors: tm.invariant_factors.iter().map(|f| f.to_expr()).collect(),
        generators: tm.generator_points().iter().map(|g| g.to_string()).collect(),
        frobenius,
    };
    Ok((rec, tm))
}

fn require_residue_field(ring: &QuotRing) -> Result<()> {
    if !ring.is_field() {
        return Err(Error::Mismatch("modulus is not prime; use the primitive-vector test".into()));
    }
    Ok(())
}

/// `det(M - I) = 0` over the residue field A/P.
pub fn fixes_nonzero_torsion(ring: &QuotRing, m: &RingMatrix) -> Result<bool> {
    require_residue_field(ring)?;
    Ok(rank(ring, &minus_identity(ring, m)) < m.rows())
}

/// Common nonzero fixed vector of all the `ms`.
pub fn fixes_common_torsion(ring: &QuotRing, ms: &[RingMatrix]) -> Result<bool> {
    require_residue_field(ring)?;
    let Some(first) = ms.first() else {
        return Ok(true);
    };
    let r = first.cols();
    let mut rows = Vec::new();
    for m in ms {
        let d = minus_identity(ring, m);
        rows.extend((0..d.rows()).map(|i| d.row(i).to_vec()));
    }
    Ok(rank(ring, &Matrix::from_rows(rows)) < r)
}

/// `g^-1 m g`.
pub fn conjugate(ring: &QuotRing, m: &RingMatrix, g: &RingMatrix) -> Result<RingMatrix> {
    let gi = crate::algebra::matrix::inverse_field(ring, g).ok_or_else(|| Error::NonUnit("conjugator".into()))?;
    mat_mul(ring, &gi, &mat_mul(ring, m, g)?)
}

/// `M^k`.
pub fn matrix_power(ring: &QuotRing, m: &RingMatrix, k: u64) -> RingMatrix {
    let mut acc = identity(ring, m.rows());
    for _ in 0..k {
        acc = mat_mul(ring, &acc, m).unwrap();
    }
    acc
}
