use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fgab::linalg::{kernel, solve};
use crate::fgab::matrix::IntMatrix;
use crate::fgab::snf::smith_normal_form;
use crate::scalar::IntScalar;

#[derive(Clone, Debug)]
struct NormalForm<T> {
    /// Coordinate change: the class of `x` has SNF coordinates `u x`.
    u: IntMatrix<T>,
    u_inv: IntMatrix<T>,
    /// Order of each SNF coordinate (0 for a free coordinate), length = generators.
    orders: Vec<T>,
}

/// A finitely generated abelian group `ℤ^g / span(relations)`.
///
/// Relations are the columns of a `g × r` matrix. Groups are kept as
/// presentations; isomorphism is decided on invariant factors.
#[derive(Clone, Debug)]
pub struct FgGroup<T> {
    generators: usize,
    relations: IntMatrix<T>,
    nf: Arc<NormalForm<T>>,
}

impl<T: IntScalar> FgGroup<T> {
    pub fn new(generators: usize, relations: IntMatrix<T>) -> Result<Self> {
        if relations.rows() != generators {
            return Err(Error::Dimension(format!(
                "relation matrix has {} rows for {generators} generators",
                relations.rows()
            )));
        }
        let s = smith_normal_form(&relations);
        let orders = (0..generators).map(|i| s.invariant_factors.get(i).cloned().unwrap_or_else(T::zero)).collect();
        let nf = NormalForm { u: s.u, u_inv: s.u_inv, orders };
        Ok(FgGroup { generators, relations, nf: Arc::new(nf) })
    }

    pub fn free(rank: usize) -> Self {
        Self::new(rank, IntMatrix::zeros(rank, 0)).expect("free group")
    }

    pub fn trivial() -> Self {
        Self::free(0)
    }

    /// `ℤ/d` (with `d = 0` meaning `ℤ`).
    pub fn cyclic(d: T) -> Self {
        Self::from_invariants(&[d])
    }

    /// `⊕ ℤ/dᵢ`, one generator per entry; zero entries are free summands.
    pub fn from_invariants(ds: &[T]) -> Self {
        let rels: Vec<T> = ds.iter().filter(|d| !d.is_zero()).cloned().collect();
        let mut m = IntMatrix::zeros(ds.len(), rels.len());
        let mut c = 0;
        for (i, d) in ds.iter().enumerate() {
            if !d.is_zero() {
                m[(i, c)] = d.clone();
                c += 1;
            }
        }
        Self::new(ds.len(), m).expect("diagonal presentation")
    }

    pub fn generators(&self) -> usize {
        self.generators
    }

    pub fn relations(&self) -> &IntMatrix<T> {
        &self.relations
    }

    /// Free rank.
    pub fn rank(&self) -> usize {
        self.nf.orders.iter().filter(|d| d.is_zero()).count()
    }

    /// Nontrivial torsion invariant factors `d₁ | d₂ | …`, each > 1.
    pub fn torsion(&self) -> Vec<T> {
        self.nf.orders.iter().filter(|d| !d.is_zero() && !d.is_one()).cloned().collect()
    }

    /// `(free rank, torsion invariant factors)`; determines the group up to isomorphism.
    pub fn invariants(&self) -> (usize, Vec<T>) {
        (self.rank(), self.torsion())
    }

    pub fn is_isomorphic(&self, other: &Self) -> bool {
        self.invariants() == other.invariants()
    }

    pub fn is_trivial(&self) -> bool {
        self.rank() == 0 && self.torsion().is_empty()
    }

    pub fn is_free(&self) -> bool {
        self.torsion().is_empty()
    }

    /// Group order, `None` when infinite.
    pub fn order(&self) -> Option<T> {
        if self.rank() > 0 {
            return None;
        }
        Some(self.torsion().into_iter().fold(T::one(), |a, b| a * b))
    }

    /// Exponent of the torsion subgroup (1 if torsion free).
    pub fn torsion_exponent(&self) -> T {
        self.torsion().last().cloned().unwrap_or_else(T::one)
    }

    pub fn zero(&self) -> Vec<T> {
        vec![T::zero(); self.generators]
    }

    pub fn basis_vector(&self, i: usize) -> Vec<T> {
        let mut v = self.zero();
        v[i] = T::one();
        v
    }

    fn check_len(&self, x: &[T]) -> Result<()> {
        if x.len() != self.generators {
            return Err(Error::Dimension(format!(
                "element of length {} in a group with {} generators",
                x.len(),
                self.generators
            )));
        }
        Ok(())
    }

    /// Reduced SNF coordinates of the class of `x`; equal classes give equal output.
    pub fn normal_coordinates(&self, x: &[T]) -> Result<Vec<T>> {
        self.check_len(x)?;
        let y = self.nf.u.mul_vec(x)?;
        Ok(y.into_iter().zip(&self.nf.orders).map(|(v, d)| if d.is_zero() { v } else { v.mod_floor(d) }).collect())
    }

    /// Orders of the SNF coordinates returned by [`Self::normal_coordinates`].
    pub fn coordinate_orders(&self) -> &[T] {
        &self.nf.orders
    }

    /// The small representative of a class, in generator coordinates.
    pub fn reduce(&self, x: &[T]) -> Result<Vec<T>> {
        let c = self.normal_coordinates(x)?;
        self.nf.u_inv.mul_vec(&c)
    }

    /// Generator-coordinate vector of the element with SNF coordinates `c`.
    pub fn from_normal_coordinates(&self, c: &[T]) -> Result<Vec<T>> {
        self.check_len(c)?;
        self.nf.u_inv.mul_vec(c)
    }

    pub fn is_zero_element(&self, x: &[T]) -> Result<bool> {
        Ok(self.normal_coordinates(x)?.iter().all(|v| v.is_zero()))
    }

    pub fn elements_equal(&self, x: &[T], y: &[T]) -> Result<bool> {
        self.check_len(x)?;
        self.check_len(y)?;
        let d: Vec<T> = x.iter().zip(y).map(|(a, b)| a.clone() - b.clone()).collect();
        self.is_zero_element(&d)
    }

    /// Some `x` with `n·x = g`, or `None` when `g` is not divisible by `n`.
    pub fn divide_element(&self, g: &[T], n: &T) -> Result<Option<Vec<T>>> {
        self.check_len(g)?;
        if !n.is_positive() {
            return Err(Error::InvalidArgument(format!("divisor must be positive, got {n}")));
        }
        let system = IntMatrix::scalar(self.generators, n.clone()).hstack(&self.relations)?;
        Ok(match solve(&system, g) {
            Some(sol) => Some(self.reduce(&sol[..self.generators])?),
            None => None,
        })
    }

    /// Additive order of an element, `None` if infinite.
    pub fn element_order(&self, x: &[T]) -> Result<Option<T>> {
        let c = self.normal_coordinates(x)?;
        let mut acc = T::one();
        for (v, d) in c.iter().zip(&self.nf.orders) {
            if v.is_zero() {
                continue;
            }
            if d.is_zero() {
                return Ok(None);
            }
            let ord = d.clone() / v.gcd(d);
            acc = acc.lcm(&ord);
        }
        Ok(Some(acc))
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        Self::new(self.generators + other.generators, self.relations.block_diag(&other.relations))
            .expect("block presentation")
    }

    /// `G ⊗ ℤₙ`; `n = 0` returns `G`.
    pub fn tensor_zn(&self, n: &T) -> Self {
        if n.is_zero() {
            return self.clone();
        }
        let rels = self.relations.hstack(&IntMatrix::scalar(self.generators, n.abs())).expect("same row count");
        Self::new(self.generators, rels).expect("tensor presentation")
    }

    /// `Tor(G, ℤₙ) ≅ ⊕ ℤ_{gcd(dᵢ, n)}` over the torsion invariant factors; trivial for `n = 0`.
    pub fn tor_zn(&self, n: &T) -> Self {
        Self::from_invariants(&self.tor_zn_factors(n))
    }

    pub(crate) fn tor_zn_factors(&self, n: &T) -> Vec<T> {
        if n.is_zero() {
            return Vec::new();
        }
        self.torsion().iter().map(|d| d.gcd(n)).filter(|g| !g.is_one()).collect()
    }

    /// Every element of a finite group, as normal-coordinate vectors.
    pub fn enumerate_finite(&self) -> Option<Vec<Vec<T>>> {
        self.order()?;
        let mut out = vec![Vec::new()];
        for d in &self.nf.orders {
            let mut next = Vec::new();
            for prefix in &out {
                let mut k = T::zero();
                while k < *d {
                    let mut p = prefix.clone();
                    p.push(k.clone());
                    next.push(p);
                    k = k + T::one();
                }
            }
            out = next;
        }
        Some(out)
    }
}

impl<T: IntScalar> fmt::Display for FgGroup<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rank = self.rank();
        let torsion = self.torsion();
        if rank == 0 && torsion.is_empty() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(torsion.iter().map(|d| format!("Z_{d}")));
        write!(f, "{}", parts.join(" + "))
    }
}

/// A homomorphism of presented groups, given on generator lifts.
#[derive(Clone, Debug)]
pub struct GroupHom<T> {
    source: FgGroup<T>,
    target: FgGroup<T>,
    matrix: IntMatrix<T>,
}

impl<T: IntScalar> GroupHom<T> {
    /// Checks shapes only; see [`Self::is_well_defined`].
    pub fn from_parts(source: FgGroup<T>, target: FgGroup<T>, matrix: IntMatrix<T>) -> Result<Self> {
        if matrix.shape() != (target.generators(), source.generators()) {
            return Err(Error::Dimension(format!(
                "hom matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                target.generators(),
                source.generators()
            )));
        }
        Ok(GroupHom { source, target, matrix })
    }

    /// Checks shapes and that relations map into relations.
    pub fn new(source: FgGroup<T>, target: FgGroup<T>, matrix: IntMatrix<T>) -> Result<Self> {
        let h = Self::from_parts(source, target, matrix)?;
        if !h.is_well_defined() {
            return Err(Error::NotWellDefined(format!(
                "matrix {} does not send relations of the source into relations of the target",
                h.matrix
            )));
        }
        Ok(h)
    }

    pub fn identity(g: &FgGroup<T>) -> Self {
        GroupHom { source: g.clone(), target: g.clone(), matrix: IntMatrix::identity(g.generators()) }
    }

    pub fn zero(source: &FgGroup<T>, target: &FgGroup<T>) -> Self {
        GroupHom {
            source: source.clone(),
            target: target.clone(),
            matrix: IntMatrix::zeros(target.generators(), source.generators()),
        }
    }

    /// Multiplication by `n` on `g`.
    pub fn multiplication(g: &FgGroup<T>, n: T) -> Self {
        GroupHom { source: g.clone(), target: g.clone(), matrix: IntMatrix::scalar(g.generators(), n) }
    }

    pub fn source(&self) -> &FgGroup<T> {
        &self.source
    }

    pub fn target(&self) -> &FgGroup<T> {
        &self.target
    }

    pub fn matrix(&self) -> &IntMatrix<T> {
        &self.matrix
    }

    pub fn is_well_defined(&self) -> bool {
        let Ok(images) = self.matrix.mul(self.source.relations()) else { return false };
        images.columns().iter().all(|c| self.target.is_zero_element(c).unwrap_or(false))
    }

    pub fn apply(&self, x: &[T]) -> Result<Vec<T>> {
        self.matrix.mul_vec(x)
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &Self) -> Result<Self> {
        if self.target.generators() != other.source.generators() {
            return Err(Error::Dimension("composable homs must share the middle group".into()));
        }
        Ok(GroupHom {
            source: self.source.clone(),
            target: other.target.clone(),
            matrix: other.matrix.mul(&self.matrix)?,
        })
    }

    /// Equality as maps between the presented groups.
    pub fn equals(&self, other: &Self) -> Result<bool> {
        if self.matrix.shape() != other.matrix.shape() {
            return Err(Error::Dimension("homs between different presentations".into()));
        }
        let diff = self.matrix.sub(&other.matrix)?;
        for c in diff.columns() {
            if !self.target.is_zero_element(&c)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.columns().iter().all(|c| self.target.is_zero_element(c).unwrap_or(false))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        Ok(GroupHom {
            source: self.source.clone(),
            target: self.target.clone(),
            matrix: self.matrix.add(&other.matrix)?,
        })
    }

    /// Generators (columns) of `{x ∈ ℤ^g : f(x) = 0 in the target}`; contains the source relations.
    pub fn kernel_lattice(&self) -> Result<IntMatrix<T>> {
        let g = self.source.generators();
        let system = self.matrix.hstack(self.target.relations())?;
        let k = kernel(&system);
        let rows: Vec<usize> = (0..g).collect();
        let cols: Vec<usize> = (0..k.cols()).collect();
        Ok(k.select(&rows, &cols))
    }

    /// The kernel as a presented group with its inclusion into the source.
    pub fn kernel(&self) -> Result<GroupHom<T>> {
        let lattice = self.kernel_lattice()?;
        let gens = crate::fgab::linalg::column_span_basis(&lattice);
        // express source relations in the kernel basis
        let mut rel_cols = Vec::new();
        for c in self.source.relations().columns() {
            let coeffs = solve(&gens, &c)
                .ok_or_else(|| Error::NotWellDefined("source relation outside kernel lattice".into()))?;
            rel_cols.push(coeffs);
        }
        let rels = IntMatrix::from_columns(gens.cols(), &rel_cols)?;
        let ker = FgGroup::new(gens.cols(), rels)?;
        GroupHom::new(ker, self.source.clone(), gens)
    }

    pub fn is_injective(&self) -> Result<bool> {
        for c in self.kernel_lattice()?.columns() {
            if !self.source.is_zero_element(&c)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn is_surjective(&self) -> Result<bool> {
        let span = self.matrix.hstack(self.target.relations())?;
        Ok(FgGroup::new(self.target.generators(), span)?.is_trivial())
    }

    /// The cokernel `target / image` as a presented group.
    pub fn cokernel(&self) -> Result<FgGroup<T>> {
        FgGroup::new(self.target.generators(), self.matrix.hstack(self.target.relations())?)
    }

    pub fn is_isomorphism(&self) -> Result<bool> {
        Ok(self.is_injective()? && self.is_surjective()?)
    }
}

/// `A/B` presentation helper: the cokernel of an integer matrix on `ℤ^rows`.
pub fn cokernel<T: IntScalar>(a: &IntMatrix<T>) -> FgGroup<T> {
    FgGroup::new(a.rows(), a.clone()).expect("rows match")
}

/// True iff `f` then `g` is exact at the middle group.
pub fn exact_at<T: IntScalar>(f: &GroupHom<T>, g: &GroupHom<T>) -> Result<bool> {
    let comp = f.then(g)?;
    if !comp.is_zero() {
        return Ok(false);
    }
    let image_span = f.matrix().hstack(f.target().relations())?;
    for c in g.kernel_lattice()?.columns() {
        if solve(&image_span, &c).is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}
