//! Mod-n coefficient groups `K_i(;ℤₙ) = K_i⊗ℤₙ ⊕ Tor(K_{i+1},ℤₙ)` and the Bockstein maps
//! between them, for finitely generated K-data.
//!
//! The splitting is not natural, so maps are only built from the summand structure
//! (ρ, β, κ); no mod-n matrix is ever derived for an arbitrary homomorphism.

use std::fmt;

use crate::error::{Error, Result};
use crate::fgab::{FgGroup, GroupHom, IntMatrix};
use crate::scalar::IntScalar;

/// `G⊗ℤₙ ⊕ Tor(H,ℤₙ)` with the summands kept apart.
///
/// Generators: first those of `G` (reduced mod `n`), then one generator per
/// SNF coordinate `c` of `H` whose order `d_c` has `gcd(d_c, n) > 1`.
#[derive(Clone, Debug)]
pub struct ModNGroup<T> {
    n: T,
    group: FgGroup<T>,
    tensor_generators: usize,
    /// `(SNF coordinate of H, order gcd(d_c, n), lift in H's generator coordinates)`.
    tor: Vec<(usize, T, Vec<T>)>,
}

impl<T: IntScalar> ModNGroup<T> {
    fn new(g: &FgGroup<T>, h: &FgGroup<T>, n: &T) -> Result<Self> {
        let tensor = g.tensor_zn(n);
        let mut tor = Vec::new();
        if !n.is_zero() {
            for (c, d) in h.coordinate_orders().iter().enumerate() {
                if d.is_zero() {
                    continue;
                }
                let order = d.gcd(n);
                if order.is_one() {
                    continue;
                }
                let mut e = vec![T::zero(); h.generators()];
                e[c] = d.clone() / order.clone();
                tor.push((c, order, h.from_normal_coordinates(&e)?));
            }
        }
        let orders: Vec<T> = tor.iter().map(|(_, o, _)| o.clone()).collect();
        let tor_group = FgGroup::from_invariants(&orders);
        Ok(ModNGroup { n: n.clone(), tensor_generators: g.generators(), group: tensor.direct_sum(&tor_group), tor })
    }

    pub fn modulus(&self) -> &T {
        &self.n
    }

    pub fn group(&self) -> &FgGroup<T> {
        &self.group
    }

    pub fn tensor_generators(&self) -> usize {
        self.tensor_generators
    }

    pub fn tor_orders(&self) -> Vec<T> {
        self.tor.iter().map(|(_, o, _)| o.clone()).collect()
    }

    fn tor_index(&self, coord: usize) -> Option<usize> {
        self.tor.iter().position(|(c, _, _)| *c == coord)
    }
}

/// `(K₀, K₁)` together with `K_i(;ℤₙ)` for one modulus.
#[derive(Clone, Debug)]
pub struct ModNKData<T> {
    k: [FgGroup<T>; 2],
    mod_n: [ModNGroup<T>; 2],
}

impl<T: IntScalar> ModNKData<T> {
    pub fn modulus(&self) -> &T {
        self.mod_n[0].modulus()
    }

    pub fn k(&self, i: usize) -> &FgGroup<T> {
        &self.k[i % 2]
    }

    /// `K_i(;ℤₙ)` as a tagged group.
    pub fn k_mod(&self, i: usize) -> &ModNGroup<T> {
        &self.mod_n[i % 2]
    }

    /// `ρ: K_i → K_i(;ℤₙ)`, reduction onto the tensor summand.
    pub fn rho(&self, i: usize) -> Result<GroupHom<T>> {
        let target = self.k_mod(i);
        let g = self.k(i).generators();
        let m = IntMatrix::identity(g).vstack(&IntMatrix::zeros(target.tor.len(), g))?;
        GroupHom::new(self.k(i).clone(), target.group.clone(), m)
    }

    /// `β: K_i(;ℤₙ) → K_{i+1}`, the Tor summand as the `n`-torsion of `K_{i+1}`.
    pub fn beta(&self, i: usize) -> Result<GroupHom<T>> {
        let source = self.k_mod(i);
        let h = self.k(i + 1);
        let lifts: Vec<Vec<T>> = source.tor.iter().map(|(_, _, y)| y.clone()).collect();
        let m = IntMatrix::zeros(h.generators(), source.tensor_generators)
            .hstack(&IntMatrix::from_columns(h.generators(), &lifts)?)?;
        GroupHom::new(source.group.clone(), h.clone(), m)
    }

    /// Multiplication by the modulus on `K_i`.
    pub fn times_n(&self, i: usize) -> GroupHom<T> {
        GroupHom::multiplication(self.k(i), self.modulus().clone())
    }
}

pub fn mod_n<T: IntScalar>(k0: &FgGroup<T>, k1: &FgGroup<T>, n: &T) -> Result<ModNKData<T>> {
    if n.is_negative() {
        return Err(Error::InvalidArgument(format!("modulus must be nonnegative, got {n}")));
    }
    Ok(ModNKData { k: [k0.clone(), k1.clone()], mod_n: [ModNGroup::new(k0, k1, n)?, ModNGroup::new(k1, k0, n)?] })
}

/// `κ_{mn,m}: K_i(;ℤₘ) → K_i(;ℤₘₙ)` and `κ_{n,mn}: K_i(;ℤₘₙ) → K_i(;ℤₙ)`, induced by
/// `ℤₘ →×n→ ℤₘₙ` and `ℤₘₙ ↠ ℤₙ`.
pub fn kappa_maps<T: IntScalar>(
    k0: &FgGroup<T>,
    k1: &FgGroup<T>,
    i: usize,
    m: &T,
    n: &T,
) -> Result<(GroupHom<T>, GroupHom<T>)> {
    if !m.is_positive() || !n.is_positive() {
        return Err(Error::InvalidArgument("kappa needs positive m and n".into()));
    }
    let mn = m.clone() * n.clone();
    let dm = mod_n(k0, k1, m)?;
    let dmn = mod_n(k0, k1, &mn)?;
    let dn = mod_n(k0, k1, n)?;
    let g = dm.k(i).generators();
    let (sm, smn, sn) = (dm.k_mod(i), dmn.k_mod(i), dn.k_mod(i));

    // ×n on the tensor part, inclusion G[m] ⊂ G[mn] on Tor
    let mut up = IntMatrix::scalar(g, n.clone()).block_diag(&IntMatrix::zeros(smn.tor.len(), sm.tor.len()));
    for (col, (c, om, _)) in sm.tor.iter().enumerate() {
        let row = smn.tor_index(*c).expect("m-torsion coordinate is mn-torsion");
        up[(g + row, g + col)] = smn.tor[row].1.clone() / om.clone();
    }
    // identity on the tensor part, ×m from G[mn] to G[n] on Tor
    let mut down = IntMatrix::identity(g).block_diag(&IntMatrix::zeros(sn.tor.len(), smn.tor.len()));
    for (col, (c, omn, _)) in smn.tor.iter().enumerate() {
        if let Some(row) = sn.tor_index(*c) {
            down[(g + row, g + col)] = m.clone() * sn.tor[row].1.clone() / omn.clone();
        }
    }
    Ok((
        GroupHom::new(sm.group.clone(), smn.group.clone(), up)?,
        GroupHom::new(smn.group.clone(), sn.group.clone(), down)?,
    ))
}

impl<T: IntScalar> fmt::Display for ModNGroup<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.group)
    }
}
