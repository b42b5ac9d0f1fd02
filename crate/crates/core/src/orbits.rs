//! Exhaustive finite-field ground truth: enumerate all anti-commutative
//! three-dimensional algebras over GF(p), partition them into orbits of the
//! isomorphism action A ↦ gA(g⁻¹⊗g⁻¹), and expose the partition as an
//! oracle for invariance and collision checks.
//!
//! The square-root hypothesis of the classification fails over GF(p), so the
//! census is positioned strictly as an invariant-constancy and collision
//! evidence engine, never as a refutation of the classification itself;
//! every report carries that caveat.

use crate::derivations::automorphism_search_fp;
use crate::field::{FieldDescriptor, FieldElement};
use crate::invariants::{profile, InvariantProfile};
use crate::linalg::Matrix;
use crate::msc::catalog::{self, Family};
use crate::msc::{Msc, MscError, MscResult};
use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::path::Path;

pub const CENSUS_CAVEAT: &str = "GF(p) lacks square roots of non-residues; orbit data is \
evidence about the finite field only, not about square-root-closed fields";

/// One algebra as nine base-p digits: the products e₁e₂, e₁e₃, e₂e₃.
pub type Digits = [u8; 9];

pub fn total_algebras(p: u64) -> u64 {
    p.pow(9)
}

pub fn index_to_digits(p: u64, index: u64) -> Digits {
    let mut d = [0u8; 9];
    let mut x = index;
    for slot in d.iter_mut() {
        *slot = (x % p) as u8;
        x /= p;
    }
    d
}

pub fn digits_to_index(p: u64, d: &Digits) -> u64 {
    let mut x = 0u64;
    for slot in d.iter().rev() {
        x = x * p + *slot as u64;
    }
    x
}

/// Build the library-level algebra for a digit vector.
pub fn msc_from_digits(p: u64, d: &Digits) -> Msc {
    let desc = FieldDescriptor::prime(p).expect("valid prime");
    let fe = |v: u8| FieldElement::Fp { p, val: v as u64 };
    let products = vec![
        vec![fe(d[0]), fe(d[1]), fe(d[2])],
        vec![fe(d[3]), fe(d[4]), fe(d[5])],
        vec![fe(d[6]), fe(d[7]), fe(d[8])],
    ];
    Msc::from_pair_products(3, &desc, &products).expect("well-formed")
}

/// Digits of an Msc over GF(p) (must be anti-commutative over that field).
pub fn digits_from_msc(a: &Msc) -> MscResult<Digits> {
    let p = match a.descriptor() {
        FieldDescriptor::Prime(p) => p,
        other => {
            return Err(MscError::FieldMismatch(format!(
                "expected GF(p), got {other}"
            )))
        }
    };
    let _ = p;
    let mut d = [0u8; 9];
    let mut k = 0;
    for (i, j) in [(0usize, 1usize), (0, 2), (1, 2)] {
        for v in a.basis_product(i, j) {
            match v {
                FieldElement::Fp { val, .. } => {
                    d[k] = val as u8;
                    k += 1;
                }
                _ => unreachable!(),
            }
        }
    }
    Ok(d)
}

/// Deterministic stream of all p⁹ anti-commutative algebras over GF(p),
/// in index order (the trivial algebra first).
pub fn enumerate(p: u64) -> MscResult<impl Iterator<Item = Msc>> {
    guard_prime(p, 5)?;
    Ok((0..total_algebras(p)).map(move |i| msc_from_digits(p, &index_to_digits(p, i))))
}

fn guard_prime(p: u64, max: u64) -> MscResult<()> {
    if !(3..=max).contains(&p) || p % 2 == 0 || !matches!(p, 3 | 5 | 7 | 11) {
        return Err(MscError::FieldMismatch(format!(
            "census supports odd primes up to {max}, got {p}"
        )));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Fast mod-p action on digit vectors
// ---------------------------------------------------------------------------

#[derive(Clone)]
struct FpMat {
    p: u32,
    e: [[u32; 3]; 3],
}

impl FpMat {
    fn identity(p: u32) -> Self {
        let mut e = [[0u32; 3]; 3];
        for (i, row) in e.iter_mut().enumerate() {
            row[i] = 1;
        }
        FpMat { p, e }
    }

    fn inverse(&self) -> FpMat {
        // adjugate over GF(p); all our generators are invertible
        let p = self.p as i64;
        let m = &self.e;
        let det = |a: u32, b: u32, c: u32, d: u32| -> i64 {
            (a as i64 * d as i64 - b as i64 * c as i64).rem_euclid(p)
        };
        let cof = [
            [
                det(m[1][1], m[1][2], m[2][1], m[2][2]),
                det(m[0][2], m[0][1], m[2][2], m[2][1]),
                det(m[0][1], m[0][2], m[1][1], m[1][2]),
            ],
            [
                det(m[1][2], m[1][0], m[2][2], m[2][0]),
                det(m[0][0], m[0][2], m[2][0], m[2][2]),
                det(m[0][2], m[0][0], m[1][2], m[1][0]),
            ],
            [
                det(m[1][0], m[1][1], m[2][0], m[2][1]),
                det(m[0][1], m[0][0], m[2][1], m[2][0]),
                det(m[0][0], m[0][1], m[1][0], m[1][1]),
            ],
        ];
        let d = (m[0][0] as i64 * cof[0][0] + m[0][1] as i64 * cof[1][0]
            + m[0][2] as i64 * cof[2][0])
            .rem_euclid(p);
        let dinv = mod_inv(d as u32, self.p);
        let mut e = [[0u32; 3]; 3];
        for r in 0..3 {
            for c in 0..3 {
                e[r][c] = ((cof[r][c] as u64 * dinv as u64) % self.p as u64) as u32;
            }
        }
        FpMat { p: self.p, e }
    }
}

fn mod_inv(a: u32, p: u32) -> u32 {
    // p is tiny; brute force keeps this obviously correct
    (1..p).find(|&x| (a as u64 * x as u64) % p as u64 == 1).expect("invertible")
}

/// Precomputed data to apply act_iso by one group element to digit vectors.
struct ActionTable {
    p: u32,
    g: FpMat,
    /// coeff[(ij)][(kl)] with (ij), (kl) over the pairs (0,1), (0,2), (1,2)
    coeff: [[i64; 3]; 3],
}

impl ActionTable {
    fn new(g: &FpMat) -> Self {
        let h = g.inverse();
        let pairs = [(0usize, 1usize), (0, 2), (1, 2)];
        let mut coeff = [[0i64; 3]; 3];
        for (a, &(i, j)) in pairs.iter().enumerate() {
            for (b, &(k, l)) in pairs.iter().enumerate() {
                let v = h.e[k][i] as i64 * h.e[l][j] as i64
                    - h.e[l][i] as i64 * h.e[k][j] as i64;
                coeff[a][b] = v.rem_euclid(g.p as i64);
            }
        }
        ActionTable {
            p: g.p,
            g: g.clone(),
            coeff,
        }
    }

    /// B = g A (g⁻¹ ⊗ g⁻¹) on the digit representation.
    fn apply(&self, d: &Digits) -> Digits {
        let p = self.p as u64;
        let v = [
            [d[0] as u64, d[1] as u64, d[2] as u64],
            [d[3] as u64, d[4] as u64, d[5] as u64],
            [d[6] as u64, d[7] as u64, d[8] as u64],
        ];
        let mut out = [0u8; 9];
        for a in 0..3 {
            // u = sum_b coeff[a][b] * v_b, then w = g·u
            let mut u = [0u64; 3];
            for b in 0..3 {
                let c = self.coeff[a][b] as u64;
                if c == 0 {
                    continue;
                }
                for t in 0..3 {
                    u[t] = (u[t] + c * v[b][t]) % p;
                }
            }
            for r in 0..3 {
                let mut acc = 0u64;
                for t in 0..3 {
                    acc = (acc + self.g.e[r][t] as u64 * u[t]) % p;
                }
                out[a * 3 + r] = acc as u8;
            }
        }
        out
    }
}

/// Generators of GL₃(GF(p)): the six unit transvections plus one diagonal
/// with a primitive root, which together generate the full group.
fn gl3_generators(p: u32) -> Vec<FpMat> {
    let mut gens = Vec::new();
    for i in 0..3 {
        for j in 0..3 {
            if i != j {
                let mut m = FpMat::identity(p);
                m.e[i][j] = 1;
                gens.push(m);
            }
        }
    }
    let r = (2..p).find(|&r| is_primitive_root(r, p)).unwrap_or(1);
    let mut d = FpMat::identity(p);
    d.e[0][0] = r;
    gens.push(d);
    gens
}

fn is_primitive_root(r: u32, p: u32) -> bool {
    let mut x = 1u64;
    for k in 1..(p as u64) {
        x = (x * r as u64) % p as u64;
        if x == 1 {
            return k == (p - 1) as u64;
        }
    }
    false
}

// ---------------------------------------------------------------------------
// The census
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct OrbitInfo {
    /// Minimal member index: the canonical representative.
    pub representative: u64,
    pub size: u64,
    pub profile: InvariantProfile,
    /// Catalog algebras (reduced mod p) landing in this orbit.
    pub catalog_members: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct OrbitCensus {
    pub p: u64,
    pub total: u64,
    pub orbit_count: usize,
    pub orbits: Vec<OrbitInfo>,
    /// Orbit root per algebra index.
    pub roots: Vec<u32>,
    pub caveat: &'static str,
}

impl OrbitCensus {
    pub fn orbit_of(&self, index: u64) -> u64 {
        self.roots[index as usize] as u64
    }

    pub fn orbit_of_msc(&self, a: &Msc) -> MscResult<u64> {
        let d = digits_from_msc(a)?;
        Ok(self.orbit_of(digits_to_index(self.p, &d)))
    }
}

struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n as u32).collect(),
        }
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let gp = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = gp;
            x = gp;
        }
        x
    }

    /// Union keeping the smaller index as root, so each orbit's root is its
    /// lexicographically minimal member.
    fn union(&mut self, a: u32, b: u32) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra == rb {
            return;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi as usize] = lo;
    }
}

/// Complete orbit partition over GF(p) (p = 3 by default, 5 in long mode).
pub fn census(p: u64) -> MscResult<OrbitCensus> {
    guard_prime(p, 5)?;
    let total = total_algebras(p);
    let tables: Vec<ActionTable> = gl3_generators(p as u32)
        .iter()
        .map(ActionTable::new)
        .collect();
    let mut uf = UnionFind::new(total as usize);
    for idx in 0..total {
        let d = index_to_digits(p, idx);
        for t in &tables {
            let nd = t.apply(&d);
            uf.union(idx as u32, digits_to_index(p, &nd) as u32);
        }
    }
    let mut roots = vec![0u32; total as usize];
    let mut sizes: BTreeMap<u32, u64> = BTreeMap::new();
    for idx in 0..total {
        let r = uf.find(idx as u32);
        roots[idx as usize] = r;
        *sizes.entry(r).or_insert(0) += 1;
    }
    let mut orbits = Vec::with_capacity(sizes.len());
    for (&rep, &size) in &sizes {
        let a = msc_from_digits(p, &index_to_digits(p, rep as u64));
        let prof = profile(&a)?;
        orbits.push(OrbitInfo {
            representative: rep as u64,
            size,
            profile: prof,
            catalog_members: Vec::new(),
        });
    }
    let mut out = OrbitCensus {
        p,
        total,
        orbit_count: orbits.len(),
        orbits,
        roots,
        caveat: CENSUS_CAVEAT,
    };
    match_catalog(&mut out)?;
    Ok(out)
}

/// Reduce every catalog algebra mod p (λ running over GF(p)) and record the
/// orbit each lands in. Collisions between distinct catalog labels are
/// informative evidence about GF(p), not refutations.
pub fn match_catalog(census: &mut OrbitCensus) -> MscResult<()> {
    let p = census.p;
    let desc = FieldDescriptor::prime(p)?;
    let mut entries: Vec<(String, Msc)> = Vec::new();
    for fam in Family::all() {
        if fam.is_parametric() {
            for v in 0..p {
                let lam = FieldElement::Fp { p, val: v };
                entries.push((
                    format!("{}({})", fam.name(), v),
                    catalog::canonical_msc(fam, Some(&lam), &desc),
                ));
            }
        } else {
            entries.push((
                fam.name().to_string(),
                catalog::canonical_msc(fam, None, &desc),
            ));
        }
    }
    // the A5(a) intermediate forms and the Lie list (printed shapes)
    for v in 0..p {
        let a = FieldElement::Fp { p, val: v };
        let m = catalog::a5_param_matrix(&a);
        entries.push((format!("A5param({v})"), Msc::new(3, m)?));
    }
    entries.push((
        "sl2".into(),
        Msc::new(3, catalog::sl2_matrix(&desc.zero()))?,
    ));
    entries.push((
        "h3".into(),
        Msc::new(3, catalog::h3_matrix(&desc.zero()))?,
    ));
    entries.push((
        "r3'(1)".into(),
        Msc::new(3, catalog::r3_prime_1_matrix(&desc.zero()))?,
    ));
    for (name, alg) in entries {
        let orbit = census.orbit_of_msc(&alg)?;
        if let Some(info) = census
            .orbits
            .iter_mut()
            .find(|o| o.representative == orbit)
        {
            info.catalog_members.push(name);
        }
    }
    Ok(())
}

/// Automorphism count of the representative, for orbit-stabilizer checks.
pub fn stabilizer_order(census: &OrbitCensus, orbit: &OrbitInfo) -> MscResult<u64> {
    let a = msc_from_digits(census.p, &index_to_digits(census.p, orbit.representative));
    Ok(automorphism_search_fp(&a)?.len() as u64)
}

// ---------------------------------------------------------------------------
// Binary cache
// ---------------------------------------------------------------------------

const CACHE_MAGIC: &[u8; 8] = b"ACORBITS";
const CACHE_VERSION: u32 = 1;

/// Cache layout: magic, version (u32 LE), p (u64 LE), total (u64 LE), then
/// one u32 LE orbit root per algebra index.
pub fn write_cache(census: &OrbitCensus, path: &Path) -> std::io::Result<()> {
    let mut f = std::fs::File::create(path)?;
    f.write_all(CACHE_MAGIC)?;
    f.write_all(&CACHE_VERSION.to_le_bytes())?;
    f.write_all(&census.p.to_le_bytes())?;
    f.write_all(&census.total.to_le_bytes())?;
    let mut buf = Vec::with_capacity(census.roots.len() * 4);
    for r in &census.roots {
        buf.extend_from_slice(&r.to_le_bytes());
    }
    f.write_all(&buf)
}

/// Rebuild a census from the cached root array (profiles and catalog matches
/// are recomputed; they are cheap next to the orbit closure).
pub fn read_cache(path: &Path) -> MscResult<OrbitCensus> {
    let mut f = std::fs::File::open(path)
        .map_err(|e| MscError::Parse(format!("cannot open cache {}: {e}", path.display())))?;
    let mut head = [0u8; 8];
    f.read_exact(&mut head)
        .map_err(|e| MscError::Parse(format!("cache read: {e}")))?;
    if &head != CACHE_MAGIC {
        return Err(MscError::Parse("bad cache magic".into()));
    }
    let mut w32 = [0u8; 4];
    f.read_exact(&mut w32)
        .map_err(|e| MscError::Parse(format!("cache read: {e}")))?;
    if u32::from_le_bytes(w32) != CACHE_VERSION {
        return Err(MscError::Parse("unsupported cache version".into()));
    }
    let mut w64 = [0u8; 8];
    f.read_exact(&mut w64)
        .map_err(|e| MscError::Parse(format!("cache read: {e}")))?;
    let p = u64::from_le_bytes(w64);
    f.read_exact(&mut w64)
        .map_err(|e| MscError::Parse(format!("cache read: {e}")))?;
    let total = u64::from_le_bytes(w64);
    guard_prime(p, 5)?;
    if total != total_algebras(p) {
        return Err(MscError::Parse("cache total does not match p^9".into()));
    }
    let mut buf = vec![0u8; (total * 4) as usize];
    f.read_exact(&mut buf)
        .map_err(|e| MscError::Parse(format!("cache read: {e}")))?;
    let roots: Vec<u32> = buf
        .chunks_exact(4)
        .map(|c| u32::from_le_bytes([c[0], c[1], c[2], c[3]]))
        .collect();
    let mut sizes: BTreeMap<u32, u64> = BTreeMap::new();
    for &r in &roots {
        *sizes.entry(r).or_insert(0) += 1;
    }
    let mut orbits = Vec::with_capacity(sizes.len());
    for (&rep, &size) in &sizes {
        let a = msc_from_digits(p, &index_to_digits(p, rep as u64));
        orbits.push(OrbitInfo {
            representative: rep as u64,
            size,
            profile: profile(&a)?,
            catalog_members: Vec::new(),
        });
    }
    let mut census = OrbitCensus {
        p,
        total,
        orbit_count: orbits.len(),
        orbits,
        roots,
        caveat: CENSUS_CAVEAT,
    };
    match_catalog(&mut census)?;
    Ok(census)
}

/// Verify that an Msc stream member is anti-commutative (used in tests on
/// the enumeration) and that a matrix is the exact mod-p reduction used by
/// the census for a catalog member.
pub fn reduce_catalog_mod_p(
    family: Family,
    lambda: Option<u64>,
    p: u64,
) -> MscResult<Msc> {
    let desc = FieldDescriptor::prime(p)?;
    let lam = lambda.map(|v| FieldElement::Fp { p, val: v % p });
    Ok(catalog::canonical_msc(family, lam.as_ref(), &desc))
}

/// Apply act_iso on digits through the fast path; exposed for determinism
/// and correctness tests against the library-level action.
pub fn fast_act_iso(p: u64, g: &Matrix<FieldElement>, d: &Digits) -> Digits {
    let mut e = [[0u32; 3]; 3];
    for r in 0..3 {
        for c in 0..3 {
            match g.at(r, c) {
                FieldElement::Fp { val, .. } => e[r][c] = *val as u32,
                _ => panic!("expected GF(p) matrix"),
            }
        }
    }
    let table = ActionTable::new(&FpMat { p: p as u32, e });
    table.apply(d)
}
