//! Graded counts for finite abelian groups acting diagonally on `C^n`.
//!
//! An element `g ∈ (Z/N)^n` acts on `x_i` by `ζ_N^{g_i}`. A character is an
//! exponent vector `c`, paired with `g` as `ζ_N^{Σ c_i g_i}`. The monomials
//! `∂^b` and `x^{−b}` transform by the character `−b`, so `∂^b` lies in the
//! `c`-isotypic part iff `(b + c)·g ≡ 0 (mod N)` for every generator `g`.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagonalGroupAction {
    pub order: u32,
    pub generators: Vec<Vec<u32>>,
}

impl DiagonalGroupAction {
    pub fn new(order: u32, generators: Vec<Vec<u32>>) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidGroup("order must be positive".into()));
        }
        let n = generators.first().map(Vec::len).ok_or_else(|| Error::InvalidGroup("no generators".into()))?;
        if n == 0 || generators.iter().any(|g| g.len() != n) {
            return Err(Error::InvalidGroup("generators must share a positive length".into()));
        }
        let generators = generators.into_iter().map(|g| g.into_iter().map(|v| v % order).collect()).collect();
        Ok(DiagonalGroupAction { order, generators })
    }

    pub fn cyclic(order: u32, weights: Vec<u32>) -> Result<Self> {
        DiagonalGroupAction::new(order, vec![weights])
    }

    /// Parses `cyclic:N:v1,...,vn` or a JSON object `{"order":N,"generators":[[...],...]}`.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        if t.starts_with('{') {
            let g: DiagonalGroupAction = serde_json::from_str(t).map_err(|e| Error::InvalidGroup(e.to_string()))?;
            return DiagonalGroupAction::new(g.order, g.generators);
        }
        let bad = || Error::InvalidGroup(format!("expected `cyclic:N:v1,...,vn`, got `{text}`"));
        let rest = t.strip_prefix("cyclic:").ok_or_else(bad)?;
        let (n, ws) = rest.split_once(':').ok_or_else(bad)?;
        let order: u32 = n.trim().parse().map_err(|_| bad())?;
        let weights = ws.split(',').map(|w| w.trim().parse::<u32>().map_err(|_| bad())).collect::<Result<Vec<_>>>()?;
        DiagonalGroupAction::cyclic(order, weights)
    }

    pub fn dim(&self) -> usize {
        self.generators[0].len()
    }

    /// Every element of the generated subgroup, identity first.
    pub fn elements(&self) -> Vec<Vec<u32>> {
        let n = self.dim();
        let zero = vec![0; n];
        let mut seen: BTreeSet<Vec<u32>> = BTreeSet::from([zero.clone()]);
        let mut out = vec![zero];
        let mut i = 0;
        while i < out.len() {
            let cur = out[i].clone();
            for g in &self.generators {
                let next: Vec<u32> = cur.iter().zip(g).map(|(a, b)| (a + b) % self.order).collect();
                if seen.insert(next.clone()) {
                    out.push(next);
                }
            }
            i += 1;
        }
        out
    }

    pub fn group_order(&self) -> usize {
        self.elements().len()
    }

    pub fn is_trivial(&self) -> bool {
        self.group_order() == 1
    }

    /// A diagonal element fixes a hyperplane iff exactly one weight is nonzero.
    pub fn has_pseudo_reflection(&self) -> bool {
        self.elements().iter().any(|g| g.iter().filter(|&&w| w != 0).count() == 1)
    }

    /// No nontrivial element fixes a nonzero vector.
    pub fn is_free_away_from_origin(&self) -> bool {
        self.elements().iter().filter(|g| g.iter().any(|&w| w != 0)).all(|g| g.iter().all(|&w| w != 0))
    }

    fn pair(&self, c: &[u32], g: &[u32]) -> u32 {
        (c.iter().zip(g).map(|(a, b)| (*a as u64) * (*b as u64)).sum::<u64>() % self.order as u64) as u32
    }

    /// The values of `c` on the generators; equal keys mean equal characters of `G`.
    fn character_key(&self, c: &[u32]) -> Vec<u32> {
        self.generators.iter().map(|g| self.pair(c, g)).collect()
    }

    /// One representative per character of the generated subgroup, trivial first.
    pub fn characters(&self) -> Vec<Character> {
        let n = self.dim();
        let mut reps: BTreeMap<Vec<u32>, Vec<u32>> = BTreeMap::new();
        let mut c = vec![0u32; n];
        loop {
            reps.entry(self.character_key(&c)).or_insert_with(|| c.clone());
            // odometer over (Z/N)^n
            let mut i = 0;
            while i < n {
                c[i] += 1;
                if c[i] < self.order {
                    break;
                }
                c[i] = 0;
                i += 1;
            }
            if i == n {
                break;
            }
        }
        reps.into_values().map(|exps| Character { exps }).collect()
    }

    fn check(&self, chi: &Character) -> Result<()> {
        if chi.exps.len() != self.dim() {
            return Err(Error::InvalidCharacter(format!(
                "character has {} entries, the action has {}",
                chi.exps.len(),
                self.dim()
            )));
        }
        Ok(())
    }

    fn is_trivial_character(&self, chi: &Character) -> bool {
        self.character_key(&chi.exps).iter().all(|&v| v == 0)
    }

    /// Whether an exponent vector `b` (of `∂^b` or `x^{−b}`) has weight `chi`.
    fn has_weight(&self, b: &[u32], chi: &Character) -> bool {
        let s: Vec<u32> = b.iter().zip(&chi.exps).map(|(x, y)| (x % self.order + y) % self.order).collect();
        self.character_key(&s).iter().all(|&v| v == 0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Character {
    pub exps: Vec<u32>,
}

impl Character {
    pub fn trivial(n: usize) -> Self {
        Character { exps: vec![0; n] }
    }

    /// Parses `chi:c1,...,cn`.
    pub fn parse(text: &str) -> Result<Self> {
        let bad = || Error::InvalidCharacter(format!("expected `chi:c1,...,cn`, got `{text}`"));
        let rest = text.trim().strip_prefix("chi:").ok_or_else(bad)?;
        let exps = rest.split(',').map(|w| w.trim().parse::<u32>().map_err(|_| bad())).collect::<Result<Vec<_>>>()?;
        Ok(Character { exps })
    }

    /// The inverse character modulo `order`.
    pub fn inverse(&self, order: u32) -> Character {
        Character { exps: self.exps.iter().map(|&c| (order - c % order) % order).collect() }
    }
}

/// Dimensions indexed by degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedDims {
    pub dims: Vec<usize>,
    pub meaning: String,
}

impl GradedDims {
    fn new(dims: Vec<usize>, meaning: impl Into<String>) -> Self {
        GradedDims { dims, meaning: meaning.into() }
    }

    pub fn is_zero(&self) -> bool {
        self.dims.iter().all(|&d| d == 0)
    }

    /// Generating function `Σ d_m t^m` as text, e.g. `1 + 3t^2`.
    pub fn series(&self) -> String {
        let terms: Vec<String> = self
            .dims
            .iter()
            .enumerate()
            .filter(|(_, &d)| d != 0)
            .map(|(m, d)| match m {
                0 => d.to_string(),
                1 => format!("{d}t"),
                _ => format!("{d}t^{m}"),
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }
}

/// Exponent vectors of length `n` with entries `≥ lo` summing to `total`.
fn lattice(n: usize, total: u32, lo: u32, f: &mut impl FnMut(&[u32])) {
    if total < lo * n as u32 {
        return;
    }
    let mut exps = vec![0u32; n];
    crate::weyl::compositions_into(&mut exps, total - lo * n as u32, &mut |e| {
        let shifted: Vec<u32> = e.iter().map(|v| v + lo).collect();
        f(&shifted);
    });
}

/// `dim Γ(V,δ)_χ` per `∂`-degree `0..=max_deg`.
pub fn isotypic_dims(g: &DiagonalGroupAction, chi: &Character, max_deg: u32) -> Result<GradedDims> {
    g.check(chi)?;
    let dims = (0..=max_deg)
        .map(|m| {
            let mut count = 0;
            lattice(g.dim(), m, 0, &mut |b| count += g.has_weight(b, chi) as usize);
            count
        })
        .collect();
    Ok(GradedDims::new(dims, format!("isotypic {:?}", chi.exps)))
}

fn require_isolated(g: &DiagonalGroupAction) -> Result<()> {
    if g.has_pseudo_reflection() {
        return Err(Error::InvalidGroup("the action contains a pseudo-reflection".into()));
    }
    if !g.is_free_away_from_origin() {
        return Err(Error::InvalidGroup("the action is not free away from the origin".into()));
    }
    Ok(())
}

/// The nonzero higher Ext of the IC extension of the local system `χ` on an
/// isolated quotient singularity: it sits in degree `n − 1` and equals the
/// `χ`-isotypic part of the delta module, or zero for trivial `χ`.
pub fn ic_local_system_ext_dims(g: &DiagonalGroupAction, chi: &Character, max_deg: u32) -> Result<(usize, GradedDims)> {
    g.check(chi)?;
    if g.is_trivial() {
        return Err(Error::InvalidGroup("trivial group: no singularity".into()));
    }
    require_isolated(g)?;
    let degree = g.dim() - 1;
    if g.is_trivial_character(chi) {
        return Ok((degree, GradedDims::new(vec![0; max_deg as usize + 1], "ext of IC, trivial character")));
    }
    let mut d = isotypic_dims(g, chi, max_deg)?;
    d.meaning = format!("ext^{degree} of IC, character {:?}", chi.exps);
    Ok((degree, d))
}

/// Total-degree dimensions of `(⊕_{χ≠1} Γ_χ ⊗ Γ)^G`, the shifted summand of
/// the cohomology of `REnd(D_X)`.
pub fn rend_cohomology_dims(g: &DiagonalGroupAction, max_deg: u32) -> Result<GradedDims> {
    require_isolated(g)?;
    let mut dims = vec![0usize; max_deg as usize + 1];
    for chi in g.characters().iter().filter(|c| !g.is_trivial_character(c)) {
        let a = isotypic_dims(g, chi, max_deg)?.dims;
        let b = isotypic_dims(g, &chi.inverse(g.order), max_deg)?.dims;
        for (m, slot) in dims.iter_mut().enumerate() {
            *slot += (0..=m).map(|i| a[i] * b[m - i]).sum::<usize>();
        }
    }
    Ok(GradedDims::new(dims, "rend cohomology, nontrivial-isotypic part"))
}

/// Counts `x^{−c}` with every `c_i ≥ 1` and weight `χ`; entry `m` has `|c| = m + n`.
pub fn hypersurface_cech_dims(g: &DiagonalGroupAction, chi: &Character, max_deg: u32) -> Result<GradedDims> {
    g.check(chi)?;
    let n = g.dim();
    let dims = (0..=max_deg)
        .map(|m| {
            let mut count = 0;
            lattice(n, m + n as u32, 1, &mut |c| count += g.has_weight(c, chi) as usize);
            count
        })
        .collect();
    Ok(GradedDims::new(dims, format!("cech {:?}", chi.exps)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z2() -> DiagonalGroupAction {
        DiagonalGroupAction::parse("cyclic:2:1,1").unwrap()
    }

    #[test]
    fn parity_counts() {
        let g = z2();
        let t = isotypic_dims(&g, &Character::trivial(2), 5).unwrap();
        assert_eq!(t.dims, vec![1, 0, 3, 0, 5, 0]);
        let s = isotypic_dims(&g, &Character::parse("chi:1,0").unwrap(), 5).unwrap();
        assert_eq!(s.dims, vec![0, 2, 0, 4, 0, 6]);
    }

    #[test]
    fn z3_matches_enumeration() {
        let g = DiagonalGroupAction::cyclic(3, vec![1, 2]).unwrap();
        let t = isotypic_dims(&g, &Character::trivial(2), 9).unwrap();
        for m in 0..=9i64 {
            let brute = (0..=m).filter(|a| (a - (m - a)).rem_euclid(3) == 0).count();
            assert_eq!(t.dims[m as usize], brute);
        }
    }

    #[test]
    fn ic_ext() {
        let g = z2();
        assert!(ic_local_system_ext_dims(&g, &Character::trivial(2), 4).unwrap().1.is_zero());
        let (deg, d) = ic_local_system_ext_dims(&g, &Character::parse("chi:0,1").unwrap(), 5).unwrap();
        assert_eq!((deg, d.dims), (1, vec![0, 2, 0, 4, 0, 6]));
        let trivial = DiagonalGroupAction::cyclic(1, vec![0, 0]).unwrap();
        assert!(ic_local_system_ext_dims(&trivial, &Character::trivial(2), 3).is_err());
        let reflection = DiagonalGroupAction::cyclic(2, vec![1, 0]).unwrap();
        assert!(ic_local_system_ext_dims(&reflection, &Character::parse("chi:1,0").unwrap(), 3).is_err());
    }

    #[test]
    fn rend() {
        let r = rend_cohomology_dims(&z2(), 4).unwrap();
        assert_eq!(r.dims[2], 4);
        assert_eq!(r.dims[4], 16);
        let trivial = DiagonalGroupAction::cyclic(1, vec![0, 0]).unwrap();
        assert!(rend_cohomology_dims(&trivial, 4).unwrap().is_zero());
    }

    #[test]
    fn cech() {
        let g = z2();
        assert_eq!(hypersurface_cech_dims(&g, &Character::trivial(2), 4).unwrap().dims, vec![1, 0, 3, 0, 5]);
        assert_eq!(hypersurface_cech_dims(&g, &Character::parse("chi:1,0").unwrap(), 4).unwrap().dims, vec![0, 2, 0, 4, 0]);
        let trivial = DiagonalGroupAction::cyclic(1, vec![0, 0]).unwrap();
        assert_eq!(hypersurface_cech_dims(&trivial, &Character::trivial(2), 3).unwrap().dims, vec![1, 2, 3, 4]);
    }

    #[test]
    fn characters_of_products() {
        let g = DiagonalGroupAction::parse(r#"{"order":2,"generators":[[1,1,0],[0,1,1]]}"#).unwrap();
        assert_eq!(g.group_order(), 4);
        assert_eq!(g.characters().len(), 4);
        assert!(!g.is_free_away_from_origin());
        assert!(Character::parse("chi:1").is_ok());
        assert!(isotypic_dims(&g, &Character::parse("chi:1").unwrap(), 2).is_err());
        assert!(DiagonalGroupAction::parse("cyclic:0:1").is_err());
        assert_eq!(GradedDims::new(vec![1, 0, 3], "").series(), "1 + 3t^2");
    }
}
